#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::Rng;
use teamdiv_core::{ArticleType, AuthorRef, Discipline, PaperRecord};

pub fn record(id: &str, year: i32, authors: &[&str], refs: &[&str]) -> PaperRecord {
    PaperRecord {
        paper_id: id.to_string(),
        title: format!("Paper {id}"),
        year,
        discipline: Discipline::Physics,
        authors: authors
            .iter()
            .map(|a| AuthorRef {
                author_id: a.to_string(),
                institution_id: None,
            })
            .collect(),
        references: refs.iter().map(|s| s.to_string()).collect(),
        article_type: ArticleType::ResearchArticle,
        nsf_funded: false,
    }
}

/// Random corpus over a small author pool; references point at earlier
/// papers or at external ids.
pub fn random_corpus<R: Rng>(rng: &mut R, n_papers: usize, n_authors: usize, max_team: usize) -> Vec<PaperRecord> {
    let pool: Vec<String> = (0..n_authors).map(|i| format!("au{i:04}")).collect();
    let mut out = Vec::with_capacity(n_papers);
    for i in 0..n_papers {
        let k = rng.random_range(1..=max_team.min(n_authors));
        let team: Vec<&str> = pool.choose_multiple(rng, k).map(String::as_str).collect();
        let mut refs: Vec<String> = Vec::new();
        if i > 0 {
            for _ in 0..rng.random_range(0..6) {
                refs.push(format!("p{:05}", rng.random_range(0..i)));
            }
        }
        if rng.random_bool(0.2) {
            refs.push(format!("ext{}", rng.random_range(0..20)));
        }
        refs.sort();
        refs.dedup();
        let refs_str: Vec<&str> = refs.iter().map(String::as_str).collect();
        let mut r = record(&format!("p{i:05}"), 2000 + rng.random_range(0..15), &team, &refs_str);
        r.discipline = Discipline::ALL[rng.random_range(0..19)];
        out.push(r);
    }
    out
}

/// Component count and partition by depth-first search.
pub fn dfs_components(n: usize, edges: &[(usize, usize)]) -> (usize, Vec<Vec<usize>>) {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut stack = vec![s];
        seen[s] = true;
        let mut part = Vec::new();
        while let Some(u) = stack.pop() {
            part.push(u);
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        part.sort();
        parts.push(part);
    }
    parts.sort();
    (parts.len(), parts)
}

/// CD of `focal` by scanning every record for (f, b).
pub fn brute_force_cd(records: &[PaperRecord], focal: &str, window: i32) -> Option<f64> {
    let f = records.iter().find(|r| r.paper_id == focal).unwrap();
    let (mut num, mut den) = (0i64, 0i64);
    for p in records {
        if p.paper_id == focal || p.year <= f.year || p.year > f.year + window {
            continue;
        }
        let cites_f = p.references.iter().any(|r| r == focal);
        let cites_ref = p.references.iter().any(|r| f.references.contains(r));
        if cites_f || cites_ref {
            den += 1;
            let (fi, bi) = (i64::from(cites_f), i64::from(cites_ref));
            num += fi - 2 * fi * bi;
        }
    }
    (den > 0).then(|| num as f64 / den as f64)
}
