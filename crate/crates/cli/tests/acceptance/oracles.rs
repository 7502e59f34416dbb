//! Criteria 1-3: independent oracles for components, CD and OLS.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use teamdiv_core::graph::{build_citation_graph, connected_components, PriorNetwork};
use teamdiv_core::innovation::cd_index as cd;
use teamdiv_core::team::structural_diversity;
use teamdiv_core::{ArticleType, AuthorRef, Discipline, PaperRecord};
use teamdiv_stats::{fit_model, ols_absorbed, CovarianceKind, Frame, ModelSpec};

use crate::{ensure, Outcome};

fn dfs_partition(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
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
        seen[s] = true;
        let mut stack = vec![s];
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
        part.sort_unstable();
        parts.push(part);
    }
    parts.sort();
    parts
}

pub fn cc_sd() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut nets = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=50);
        let p: f64 = rng.random::<f64>() * 0.15;
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        let members: Vec<String> = (0..n).map(|i| format!("m{i:02}")).collect();
        let comps = connected_components(&members, &edges);
        let mut got = comps.partition();
        got.sort();
        let want = dfs_partition(n, &edges);
        ensure!(comps.count == want.len(), "count {} vs DFS {} at n = {n}", comps.count, want.len());
        ensure!(got == want, "partition differs from DFS at n = {n}");
        let prior = PriorNetwork {
            members,
            edges,
            t: 2010,
            window: 5,
        };
        let (cc, sd) = structural_diversity(&prior).map_err(|e| e.to_string())?;
        ensure!(cc == want.len(), "structural_diversity cc {cc} vs DFS {}", want.len());
        ensure!(sd == want.len() as f64 / n as f64, "sd {sd} is not cc/n");
        nets += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 5.0, "took {secs:.2}s, limit 5s");
    Ok(format!("{nets} networks exact, {secs:.3}s (< 5s)"))
}

fn record(id: String, year: i32, refs: Vec<String>) -> PaperRecord {
    PaperRecord {
        paper_id: id,
        title: String::new(),
        year,
        discipline: Discipline::Physics,
        authors: vec![AuthorRef {
            author_id: "a".into(),
            institution_id: None,
        }],
        references: refs,
        article_type: ArticleType::ResearchArticle,
        nsf_funded: false,
    }
}

/// Papers cite only earlier-indexed papers, so the graph is acyclic.
fn random_dag(rng: &mut ChaCha8Rng) -> Vec<PaperRecord> {
    let n = rng.random_range(2..=100);
    let ids: Vec<String> = (0..n).map(|i| format!("p{i:03}")).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let k = rng.random_range(0..=6.min(i));
        let mut refs: Vec<String> = ids[..i].choose_multiple(rng, k).cloned().collect();
        if rng.random_bool(0.1) {
            refs.push(format!("ext{}", rng.random_range(0..5)));
        }
        refs.sort();
        refs.dedup();
        out.push(record(ids[i].clone(), 2000 + (i as i32) / 8 + rng.random_range(0..3), refs));
    }
    out
}

/// Enumerates every later paper within the window and classifies it.
fn brute_cd(records: &[PaperRecord], focal: usize, window: i32) -> Option<f64> {
    let f = &records[focal];
    let (mut num, mut den) = (0i64, 0i64);
    for p in records {
        if p.paper_id == f.paper_id || p.year <= f.year || p.year > f.year + window {
            continue;
        }
        let cites_f = p.references.contains(&f.paper_id);
        let cites_b = p.references.iter().any(|r| f.references.contains(r));
        match (cites_f, cites_b) {
            (true, false) => (num, den) = (num + 1, den + 1),
            (true, true) => (num, den) = (num - 1, den + 1),
            (false, true) => den += 1,
            (false, false) => {}
        }
    }
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn cd_index() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut checked, mut defined) = (0, 0);
    for _ in 0..500 {
        let recs = random_dag(&mut rng);
        let g = build_citation_graph(&recs);
        for (i, r) in recs.iter().enumerate() {
            let w = rng.random_range(1..=7);
            let got = cd(&g, g.node(&r.paper_id).unwrap(), w as u32).cd;
            let want = brute_cd(&recs, i, w);
            ensure!(got == want, "{}: {got:?} vs brute force {want:?}", r.paper_id);
            checked += 1;
            defined += usize::from(want.is_some());
        }
    }
    let r = |id: &str, y, refs: &[&str]| record(id.into(), y, refs.iter().map(|s| s.to_string()).collect());
    let disrupt = [r("R", 1990, &[]), r("F", 2000, &["R"]), r("C", 2001, &["F"])];
    let g = build_citation_graph(&disrupt);
    let plus = cd(&g, g.node("F").unwrap(), 5).cd;
    ensure!(plus == Some(1.0), "pure disruptor gave {plus:?}");
    let consolidate = [r("R", 1990, &[]), r("F", 2000, &["R"]), r("C", 2001, &["F", "R"])];
    let g = build_citation_graph(&consolidate);
    let minus = cd(&g, g.node("F").unwrap(), 5).cd;
    ensure!(minus == Some(-1.0), "pure consolidator gave {minus:?}");
    Ok(format!(
        "500 DAGs, {checked} focal papers ({defined} defined) exact; +1 and -1 cases exact"
    ))
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn ols() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (n, k) = (1000, 10);
    let names: Vec<String> = (0..k).map(|j| format!("x{j}")).collect();
    let cols: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| normal(&mut rng)).collect()).collect();
    let beta: Vec<f64> = (0..k).map(|j| 0.5 - 0.1 * j as f64).collect();
    let y: Vec<f64> = (0..n)
        .map(|i| 1.5 + (0..k).map(|j| beta[j] * cols[j][i]).sum::<f64>() + normal(&mut rng))
        .collect();
    let mut frame = Frame::new(n);
    for (name, c) in names.iter().zip(&cols) {
        frame.insert_dense(name, c.clone()).unwrap();
    }
    frame.insert_dense("y", y.clone()).unwrap();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let fit = fit_model(&frame, &ModelSpec::new("y", &refs), CovarianceKind::Classical).map_err(|e| e.to_string())?;

    let x = DMatrix::from_fn(n, k + 1, |i, j| if j == 0 { 1.0 } else { cols[j - 1][i] });
    let yv = DVector::from_vec(y);
    let xtx = x.transpose() * &x;
    let xty = x.transpose() * &yv;
    let oracle = xtx.cholesky().ok_or("X'X not positive definite")?.solve(&xty);
    let max_gap = (0..=k)
        .map(|j| (fit.coefficients[j] - oracle[j]).abs())
        .fold(0.0, f64::max);
    ensure!(max_gap < 1e-8, "max coefficient gap {max_gap:e} vs normal equations");

    // fixed effects: dummies against within-group demeaning
    let groups = 25;
    let g: Vec<usize> = (0..n).map(|_| rng.random_range(0..groups)).collect();
    let shift: Vec<f64> = (0..groups).map(|_| 3.0 * normal(&mut rng)).collect();
    let x1: Vec<f64> = (0..n).map(|i| normal(&mut rng) + 0.5 * shift[g[i]]).collect();
    let x2: Vec<f64> = (0..n).map(|_| normal(&mut rng)).collect();
    let yfe: Vec<f64> = (0..n)
        .map(|i| 0.7 * x1[i] - 0.4 * x2[i] + shift[g[i]] + normal(&mut rng))
        .collect();
    let mut fe = Frame::new(n);
    fe.insert_dense("x1", x1).unwrap();
    fe.insert_dense("x2", x2).unwrap();
    fe.insert_dense("y", yfe).unwrap();
    fe.insert_categorical("g", g.iter().map(|v| Some(format!("g{v}"))).collect()).unwrap();
    let spec = ModelSpec::new("y", &["x1", "x2"]).fixed_effect("g");
    let dummy = fit_model(&fe, &spec, CovarianceKind::Classical).map_err(|e| e.to_string())?;
    let within = ols_absorbed(&fe, &spec, CovarianceKind::Classical).map_err(|e| e.to_string())?;
    let mut fe_gap: f64 = 0.0;
    for t in ["x1", "x2"] {
        fe_gap = fe_gap.max((dummy.coefficient(t).unwrap() - within.coefficient(t).unwrap()).abs());
    }
    ensure!(fe_gap < 1e-6, "dummy vs demeaned gap {fe_gap:e}");

    let mut exact = Frame::new(5);
    exact.insert_dense("x", vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    exact.insert_dense("y", vec![2.0, 4.0, 6.0, 8.0, 10.0]).unwrap();
    let f2 = fit_model(&exact, &ModelSpec::new("y", &["x"]), CovarianceKind::Classical).map_err(|e| e.to_string())?;
    let b2 = f2.coefficient("x").unwrap();
    ensure!(b2 == 2.0, "y = 2x gave beta {b2:?}");
    Ok(format!(
        "max |b - b_normal| = {max_gap:.1e} (< 1e-8); FE routes differ by {fe_gap:.1e} (< 1e-6); y = 2x gives beta = {b2}"
    ))
}
