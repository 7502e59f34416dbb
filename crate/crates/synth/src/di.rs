//! Reference discipline counts with a prescribed Simpson index.

/// For a fixed reference count and number of disciplines, one count vector
/// (non-increasing) for every reachable sum of squared counts.
#[derive(Debug, Clone)]
pub struct DiTable {
    refs: usize,
    /// (sum of squares, counts), sorted by sum of squares.
    options: Vec<(usize, Vec<usize>)>,
}

impl DiTable {
    pub fn new(refs: usize, disciplines: usize) -> Self {
        let max_sq = refs * refs;
        // reach[used][sq] = count placed in the latest bin to get there
        let mut layers: Vec<Vec<Vec<Option<usize>>>> = Vec::with_capacity(disciplines + 1);
        let mut start = vec![vec![None; max_sq + 1]; refs + 1];
        start[0][0] = Some(0);
        layers.push(start);
        for _ in 0..disciplines {
            let prev = layers.last().unwrap();
            let mut next = vec![vec![None; max_sq + 1]; refs + 1];
            for used in 0..=refs {
                for sq in 0..=max_sq {
                    if prev[used][sq].is_none() {
                        continue;
                    }
                    for c in 0..=refs - used {
                        let s2 = sq + c * c;
                        if s2 <= max_sq && next[used + c][s2].is_none() {
                            next[used + c][s2] = Some(c);
                        }
                    }
                }
            }
            layers.push(next);
        }
        let mut options = Vec::new();
        for sq in 0..=max_sq {
            if layers[disciplines][refs][sq].is_none() {
                continue;
            }
            let (mut used, mut s) = (refs, sq);
            let mut counts = Vec::with_capacity(disciplines);
            for layer in (1..=disciplines).rev() {
                let c = layers[layer][used][s].unwrap();
                counts.push(c);
                used -= c;
                s -= c * c;
            }
            counts.sort_unstable_by(|a, b| b.cmp(a));
            options.push((sq, counts));
        }
        Self { refs, options }
    }

    pub fn refs(&self) -> usize {
        self.refs
    }

    pub fn di_of(&self, sum_sq: usize) -> f64 {
        1.0 - sum_sq as f64 / (self.refs * self.refs) as f64
    }

    /// Counts whose index is closest to `target`; ties go to the higher index.
    pub fn closest(&self, target: f64) -> (f64, &[usize]) {
        let best = self
            .options
            .iter()
            .min_by(|a, b| {
                let da = (self.di_of(a.0) - target).abs();
                let db = (self.di_of(b.0) - target).abs();
                da.total_cmp(&db).then(a.0.cmp(&b.0))
            })
            .expect("at least one layout exists");
        (self.di_of(best.0), &best.1)
    }
}
