//! Disjoint-set forest and connected-component labelling.

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        while self.parent[x] as usize != root {
            let next = self.parent[x] as usize;
            self.parent[x] = root as u32;
            x = next;
        }
        root
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// For each node, the position of the smallest-keyed node in its component.
    pub labels: Vec<usize>,
}

impl Components {
    /// Components as sorted member lists, ordered by label.
    pub fn partition(&self) -> Vec<Vec<usize>> {
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (i, &l) in self.labels.iter().enumerate() {
            groups.entry(l).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

/// `edges` index into `nodes`; labels are canonical by node key.
pub fn connected_components<K: Ord>(nodes: &[K], edges: &[(usize, usize)]) -> Components {
    let n = nodes.len();
    let mut uf = UnionFind::new(n);
    for &(a, b) in edges {
        uf.union(a, b);
    }
    let mut best: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = uf.find(i);
        match best[r] {
            Some(j) if nodes[j] <= nodes[i] => {}
            _ => best[r] = Some(i),
        }
    }
    let labels = (0..n).map(|i| best[uf.find(i)].unwrap()).collect();
    Components {
        count: uf.set_count(),
        labels,
    }
}
