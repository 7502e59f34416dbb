//! Directed citation graph over corpus papers plus dangling reference ids.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::corpus::PaperRecord;
use crate::discipline::Discipline;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationGraph {
    /// Node ids, sorted. Corpus papers and dangling references share the table.
    pub(crate) ids: Vec<String>,
    pub(crate) index: HashMap<String, u32>,
    /// `None` marks a dangling (out-of-corpus) node.
    pub(crate) year: Vec<Option<i32>>,
    pub(crate) discipline: Vec<Option<Discipline>>,
    /// References of each node, sorted by node index, duplicate free.
    pub(crate) backward: Vec<Vec<u32>>,
    /// Citers of each node, sorted by (year, node index).
    pub(crate) forward: Vec<Vec<u32>>,
    pub(crate) year_anomalies: usize,
}

pub fn build_citation_graph(records: &[PaperRecord]) -> CitationGraph {
    let mut ids: Vec<String> = records
        .iter()
        .flat_map(|r| std::iter::once(&r.paper_id).chain(&r.references))
        .cloned()
        .collect();
    ids.par_sort_unstable();
    ids.dedup();
    let index: HashMap<String, u32> = ids.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
    let n = ids.len();
    let mut year = vec![None; n];
    let mut discipline = vec![None; n];
    let mut backward = vec![Vec::new(); n];
    for r in records {
        let i = index[&r.paper_id] as usize;
        year[i] = Some(r.year);
        discipline[i] = Some(r.discipline);
        let mut refs: Vec<u32> = r.references.iter().map(|x| index[x]).collect();
        refs.sort_unstable();
        refs.dedup();
        backward[i] = refs;
    }
    CitationGraph::from_parts(ids, year, discipline, backward)
}

impl CitationGraph {
    pub(crate) fn from_parts(
        ids: Vec<String>,
        year: Vec<Option<i32>>,
        discipline: Vec<Option<Discipline>>,
        backward: Vec<Vec<u32>>,
    ) -> Self {
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        let n = ids.len();
        let mut forward = vec![Vec::new(); n];
        let mut year_anomalies = 0;
        for (citer, refs) in backward.iter().enumerate() {
            for &r in refs {
                forward[r as usize].push(citer as u32);
                if let (Some(a), Some(b)) = (year[citer], year[r as usize]) {
                    year_anomalies += usize::from(a < b);
                }
            }
        }
        forward
            .par_iter_mut()
            .for_each(|list| list.sort_unstable_by_key(|&c| (year[c as usize], c)));
        Self {
            ids,
            index,
            year,
            discipline,
            backward,
            forward,
            year_anomalies,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn node(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }

    pub fn id(&self, node: u32) -> &str {
        &self.ids[node as usize]
    }

    pub fn year(&self, node: u32) -> Option<i32> {
        self.year[node as usize]
    }

    pub fn discipline(&self, node: u32) -> Option<Discipline> {
        self.discipline[node as usize]
    }

    pub fn is_dangling(&self, node: u32) -> bool {
        self.year[node as usize].is_none()
    }

    pub fn references(&self, node: u32) -> &[u32] {
        &self.backward[node as usize]
    }

    pub fn citers(&self, node: u32) -> &[u32] {
        &self.forward[node as usize]
    }

    /// Citers published in [lo, hi].
    pub fn citers_between(&self, node: u32, lo: i32, hi: i32) -> &[u32] {
        let list = &self.forward[node as usize];
        let y = |c: &u32| self.year[*c as usize].unwrap_or(i32::MIN);
        let a = list.partition_point(|c| y(c) < lo);
        let b = list.partition_point(|c| y(c) <= hi);
        &list[a..b.max(a)]
    }

    /// Citation edges whose citer predates the cited paper.
    pub fn year_anomalies(&self) -> usize {
        self.year_anomalies
    }

    pub fn dangling_count(&self) -> usize {
        self.year.iter().filter(|y| y.is_none()).count()
    }
}
