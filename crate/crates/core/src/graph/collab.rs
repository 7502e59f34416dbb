//! Temporal co-authorship multigraph.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::corpus::PaperRecord;
use crate::graph::components::{connected_components, Components};

pub const DEFAULT_TEAM_SIZE_CAP: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollabGraph {
    /// Interned author ids, sorted.
    pub(crate) authors: Vec<String>,
    pub(crate) index: HashMap<String, u32>,
    /// (low, high) author index -> sorted collaboration years, one per paper.
    pub(crate) edges: HashMap<(u32, u32), Vec<i32>>,
    /// Papers left out of edge expansion for exceeding the cap.
    pub(crate) skipped: Vec<String>,
    pub(crate) team_size_cap: usize,
}

type EdgeMap = HashMap<(u32, u32), Vec<i32>>;

fn merge(mut a: EdgeMap, b: EdgeMap) -> EdgeMap {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (k, v) in b {
        a.entry(k).or_default().extend(v);
    }
    a
}

pub fn build_collab_graph(records: &[PaperRecord], team_size_cap: usize) -> CollabGraph {
    let mut authors: Vec<String> = records
        .iter()
        .flat_map(|r| r.authors.iter().map(|a| a.author_id.clone()))
        .collect();
    authors.par_sort_unstable();
    authors.dedup();
    let index: HashMap<String, u32> = authors
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i as u32))
        .collect();
    let mut edges = records
        .par_iter()
        .filter(|r| r.authors.len() <= team_size_cap)
        .fold(EdgeMap::new, |mut acc, r| {
            let ids: Vec<u32> = r.authors.iter().map(|a| index[&a.author_id]).collect();
            for (i, &a) in ids.iter().enumerate() {
                for &b in &ids[i + 1..] {
                    acc.entry((a.min(b), a.max(b))).or_default().push(r.year);
                }
            }
            acc
        })
        .reduce(EdgeMap::new, merge);
    edges.par_iter_mut().for_each(|(_, years)| years.sort_unstable());
    let mut skipped: Vec<String> = records
        .iter()
        .filter(|r| r.authors.len() > team_size_cap)
        .map(|r| r.paper_id.clone())
        .collect();
    skipped.sort();
    CollabGraph {
        authors,
        index,
        edges,
        skipped,
        team_size_cap,
    }
}

impl CollabGraph {
    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn skipped_papers(&self) -> &[String] {
        &self.skipped
    }

    pub fn team_size_cap(&self) -> usize {
        self.team_size_cap
    }

    pub fn author_id(&self, index: u32) -> &str {
        &self.authors[index as usize]
    }

    pub fn edge_years(&self, a: &str, b: &str) -> Option<&[i32]> {
        let (ia, ib) = (*self.index.get(a)?, *self.index.get(b)?);
        self.edges.get(&(ia.min(ib), ia.max(ib))).map(Vec::as_slice)
    }

    /// Every edge as (author, author, years) with the smaller id first,
    /// sorted by id pair.
    pub fn edge_list(&self) -> Vec<(&str, &str, &[i32])> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|(&(a, b), y)| {
                let (sa, sb) = (self.author_id(a), self.author_id(b));
                (sa, sb, y.as_slice())
            })
            .collect();
        out.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        out
    }

    /// Team-internal edges with at least one collaboration year in
    /// [t - window, t - 1].
    pub fn prior_subnetwork<S: AsRef<str>>(&self, team: &[S], t: i32, window: u32) -> PriorNetwork {
        let members: Vec<String> = team.iter().map(|s| s.as_ref().to_string()).collect();
        let ids: Vec<Option<u32>> = members.iter().map(|m| self.index.get(m).copied()).collect();
        let (lo, hi) = (t - window as i32, t - 1);
        let mut edges = Vec::new();
        for i in 0..ids.len() {
            let Some(a) = ids[i] else { continue };
            for (j, b) in ids.iter().enumerate().skip(i + 1) {
                let Some(b) = *b else { continue };
                if let Some(years) = self.edges.get(&(a.min(b), a.max(b))) {
                    let k = years.partition_point(|&y| y < lo);
                    if k < years.len() && years[k] <= hi {
                        edges.push((i, j));
                    }
                }
            }
        }
        PriorNetwork {
            members,
            edges,
            t,
            window,
        }
    }
}

/// A focal team's collaboration history before publication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorNetwork {
    pub members: Vec<String>,
    /// Pairs of positions in `members`, first < second, sorted.
    pub edges: Vec<(usize, usize)>,
    pub t: i32,
    pub window: u32,
}

impl PriorNetwork {
    pub fn team_size(&self) -> usize {
        self.members.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.members.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.members.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn components(&self) -> Components {
        connected_components(&self.members, &self.edges)
    }

    /// Canonical component id (smallest member id) for each member.
    pub fn component_labels(&self) -> Vec<&str> {
        self.components()
            .labels
            .into_iter()
            .map(|l| self.members[l].as_str())
            .collect()
    }
}
