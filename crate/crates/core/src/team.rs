//! Topology of a team's prior collaboration network.

use serde::Serialize;
use teamdiv_stats::describe::zscores;

use crate::error::{CoreError, Result};
use crate::graph::PriorNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeamStructure {
    pub team_size: usize,
    pub cc_count: usize,
    pub sd: f64,
    pub freshness: f64,
    /// Missing for single-author teams.
    pub edge_density: Option<f64>,
    pub clustering: Option<f64>,
}

/// CC count of the prior network and SD = CC / team size.
pub fn structural_diversity(prior: &PriorNetwork) -> Result<(usize, f64)> {
    let n = prior.team_size();
    if n == 0 {
        return Err(CoreError::EmptyTeam);
    }
    let cc = prior.components().count;
    Ok((cc, cc as f64 / n as f64))
}

/// Share of members with no prior tie to any other member.
pub fn team_freshness(prior: &PriorNetwork) -> Result<f64> {
    let n = prior.team_size();
    if n == 0 {
        return Err(CoreError::EmptyTeam);
    }
    let fresh = prior.degrees().iter().filter(|&&d| d == 0).count();
    Ok(fresh as f64 / n as f64)
}

pub fn edge_density(prior: &PriorNetwork) -> Option<f64> {
    let n = prior.team_size();
    (n >= 2).then(|| prior.edges.len() as f64 / (n * (n - 1) / 2) as f64)
}

/// Mean local clustering over all members; members with fewer than two
/// neighbours count as 0.
pub fn clustering_coefficient(prior: &PriorNetwork) -> Option<f64> {
    let n = prior.team_size();
    if n < 2 {
        return None;
    }
    let mut linked = vec![false; n * n];
    for &(a, b) in &prior.edges {
        linked[a * n + b] = true;
        linked[b * n + a] = true;
    }
    let adj = prior.adjacency();
    let total: f64 = adj
        .iter()
        .map(|nbrs| {
            let k = nbrs.len();
            if k < 2 {
                return 0.0;
            }
            let mut closed = 0usize;
            for (i, &u) in nbrs.iter().enumerate() {
                for &v in &nbrs[i + 1..] {
                    closed += usize::from(linked[u * n + v]);
                }
            }
            closed as f64 / (k * (k - 1) / 2) as f64
        })
        .sum();
    Some(total / n as f64)
}

pub fn team_structure(prior: &PriorNetwork) -> Result<TeamStructure> {
    let (cc_count, sd) = structural_diversity(prior)?;
    Ok(TeamStructure {
        team_size: prior.team_size(),
        cc_count,
        sd,
        freshness: team_freshness(prior)?,
        edge_density: edge_density(prior),
        clustering: clustering_coefficient(prior),
    })
}

/// z-scores of SD over the analysis sample (n - 1 denominator).
pub fn standardize_sd(sd: &[f64]) -> Result<Vec<f64>> {
    Ok(zscores(sd, "sd over the analysis sample")?)
}
