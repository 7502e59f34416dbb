//! Predictor-outcome pairs with strong, weak and absent linear signal, for
//! checking binned fits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Relation {
    pub name: &'static str,
    pub slope: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub const RELATION_SLOPES: [(&str, f64); 3] = [("strong", 0.25), ("weak", 0.02), ("null", 0.0)];

/// y = slope * x + N(0, 1) with standard normal x, one stream per relation.
pub fn binned_relations(n: usize, seed: u64) -> Vec<Relation> {
    RELATION_SLOPES
        .iter()
        .enumerate()
        .map(|(i, &(name, slope))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let y = x
                .iter()
                .map(|&v| {
                    let e: f64 = StandardNormal.sample(&mut rng);
                    slope * v + e
                })
                .collect();
            Relation { name, slope, x, y }
        })
        .collect()
}
