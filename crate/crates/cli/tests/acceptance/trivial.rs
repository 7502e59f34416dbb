//! Criterion 10: every small worked example, checked directly.

use std::process::Command;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use teamdiv_causal::{
    att_estimate, mediation_analysis, nn_match, prepost_report, propensity_scores, quantile_groups, smd,
    MediationConfig, PeriodRow, PrePostConfig,
};
use teamdiv_core::content::{count_syllables, flesch_reading_ease, promotional_fraction, title_word_count, Lexicon};
use teamdiv_core::graph::{build_citation_graph, build_collab_graph, connected_components, PriorNetwork};
use teamdiv_core::innovation::{cd_index, disciplinary_integration, field_normalize, simpson_index};
use teamdiv_core::team::{clustering_coefficient, edge_density, standardize_sd, structural_diversity, team_freshness};
use teamdiv_core::{
    build_author_profiles, filter_research_articles, filter_traceable_history, parse_corpus, write_jsonl,
    ArticleType, AuthorRef, Corpus, Discipline, HIndexTable, PaperRecord, SchemaConfig,
};
use teamdiv_stats::kde::silverman_bandwidth;
use teamdiv_stats::{
    binned_means_fit, build_design, fit_model, gaussian_kde, logistic_fit, mann_whitney_u, marginal_slope,
    predict_margins, spearman, t_test_independent, CovarianceKind, Frame, ModelSpec,
};
use teamdiv_synth::{generate_corpus, SynthConfig};

use crate::{ensure, Outcome};

type Check = Result<(), String>;

const EPS: f64 = 1e-12;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < EPS
}

fn paper(id: &str, year: i32, authors: &[&str], refs: &[&str]) -> PaperRecord {
    PaperRecord {
        paper_id: id.into(),
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

fn net(n: usize, edges: &[(usize, usize)]) -> PriorNetwork {
    PriorNetwork {
        members: (0..n).map(|i| format!("a{i}")).collect(),
        edges: edges.to_vec(),
        t: 2010,
        window: 5,
    }
}

fn clique(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sample_sd(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

fn ingest() -> Check {
    let empty = parse_corpus(&b""[..], &SchemaConfig::default()).map_err(err)?;
    ensure!(empty.records.is_empty() && empty.rejects.is_empty(), "empty input gave records or rejects");
    let text = concat!(
        r#"{"id":"p1","title":"A","year":2001,"discipline":"Physics","authors":["a"],"references":[]}"#,
        "\n",
        r#"{"id":"p2","title":"B","year":2002,"discipline":"Physics","authors":["a"],"references":["p1"]}"#,
        "\n",
        r#"{"id":"p3","title":"C","discipline":"Physics","authors":["b"],"references":[]}"#,
        "\n",
        r#"{"id":"p4","title":"D","year":2003,"discipline":"Art","authors":["b"],"references":[]}"#,
        "\n"
    );
    let c = parse_corpus(text.as_bytes(), &SchemaConfig::default()).map_err(err)?;
    ensure!(c.records.len() == 3, "{} records from 3 valid lines", c.records.len());
    ensure!(
        c.rejects.len() == 1 && c.rejects[0].reason.contains("year"),
        "rejects {:?}",
        c.rejects
    );
    Ok(())
}

fn filters() -> Check {
    let mut recs = vec![paper("r", 2000, &["a"], &[]), paper("v", 2000, &["a"], &[]), paper("e", 2000, &["a"], &[])];
    recs[1].article_type = ArticleType::Review;
    recs[2].article_type = ArticleType::Editorial;
    let kept = filter_research_articles(Corpus::from_records(recs));
    ensure!(kept.records.len() == 1 && kept.records[0].paper_id == "r", "type filter kept {:?}", kept.records);
    let all = Corpus::from_records(vec![paper("x", 2000, &["a"], &[]), paper("y", 2001, &["b"], &[])]);
    ensure!(filter_research_articles(all.clone()) == all, "all-research corpus changed");
    Ok(())
}

fn traceability() -> Check {
    let single = vec![paper("p", 2010, &["a"], &[])];
    let profiles = build_author_profiles(&single, None);
    let out = filter_traceable_history(Corpus::from_records(single), &profiles, 5).map_err(err)?;
    ensure!(out.is_empty(), "single paper survived");
    let recs = vec![
        paper("h1", 2009, &["a"], &[]),
        paper("h2", 2009, &["b"], &[]),
        paper("f", 2010, &["a", "b"], &[]),
    ];
    let profiles = build_author_profiles(&recs, None);
    let out = filter_traceable_history(Corpus::from_records(recs), &profiles, 5).map_err(err)?;
    ensure!(out.records.iter().any(|r| r.paper_id == "f"), "paper with t-1 history dropped");
    Ok(())
}

fn profiles() -> Check {
    let mut recs = vec![paper("p1", 2001, &["a"], &[]), paper("p2", 2003, &["a"], &[])];
    recs[1].authors[0].institution_id = Some("unlisted".into());
    let mut table = HIndexTable::new();
    table.insert("other", 30).map_err(err)?;
    let profiles = build_author_profiles(&recs, Some(&table));
    let p = &profiles["a"];
    ensure!(p.first_pub_year == 2001, "first_pub_year {}", p.first_pub_year);
    ensure!(p.cumulative_through(2003) == 2, "cumulative at 2003 = {}", p.cumulative_through(2003));
    ensure!(p.institution_h_index == 0, "absent institution h-index {}", p.institution_h_index);
    Ok(())
}

fn citation_edges() -> Check {
    let g = build_citation_graph(&[paper("A", 2001, &["x"], &["B"]), paper("B", 2000, &["y"], &[])]);
    let (a, b) = (g.node("A").unwrap(), g.node("B").unwrap());
    ensure!(g.citers(b) == [a] && g.references(a) == [b], "single edge adjacency wrong");
    ensure!(g.citers(a).is_empty() && g.references(b).is_empty(), "extra adjacency on single edge");
    let g = build_citation_graph(&[paper("A", 2001, &["x"], &[]), paper("B", 2000, &["y"], &[])]);
    ensure!(
        (0..g.node_count() as u32).all(|n| g.citers(n).is_empty() && g.references(n).is_empty()),
        "adjacency without references"
    );
    Ok(())
}

fn collab_edges() -> Check {
    let g = build_collab_graph(&[paper("p", 2000, &["A", "B", "C"], &[])], 25);
    ensure!(g.edge_count() == 3, "clique expansion gave {} edges", g.edge_count());
    for (a, b) in [("A", "B"), ("A", "C"), ("B", "C")] {
        ensure!(g.edge_years(a, b) == Some(&[2000][..]), "{a}-{b} years {:?}", g.edge_years(a, b));
    }
    let g = build_collab_graph(&[paper("p", 1999, &["A", "B"], &[]), paper("q", 2001, &["A", "B"], &[])], 25);
    ensure!(g.edge_years("A", "B") == Some(&[1999, 2001][..]), "A-B years {:?}", g.edge_years("A", "B"));
    Ok(())
}

fn prior_window() -> Check {
    let g = build_collab_graph(&[paper("o", 2000, &["X", "Y"], &[])], 25);
    let p = g.prior_subnetwork(&["A", "B", "C"], 2010, 5);
    ensure!(p.members.len() == 3 && p.edges.is_empty(), "strangers team gave {:?}", p.edges);
    let g = build_collab_graph(&[paper("f", 2010, &["A", "B"], &[])], 25);
    let p = g.prior_subnetwork(&["A", "B"], 2010, 5);
    ensure!(p.edges.is_empty(), "edge from year t kept");
    Ok(())
}

fn components() -> Check {
    let nodes = ["A", "B", "C"];
    let c = connected_components(&nodes, &[]).count;
    ensure!(c == 3, "3 isolated nodes gave {c}");
    let c = connected_components(&nodes, &[(0, 1), (1, 2)]).count;
    ensure!(c == 1, "path gave {c}");
    Ok(())
}

fn team_metrics() -> Check {
    let (cc, sd) = structural_diversity(&net(3, &[])).map_err(err)?;
    ensure!(cc == 3 && sd == 1.0, "strangers: cc {cc}, sd {sd}");
    let (cc, sd) = structural_diversity(&net(4, &[(0, 1), (1, 2), (2, 3)])).map_err(err)?;
    ensure!(cc == 1 && sd == 0.25, "path of 4: cc {cc}, sd {sd}");
    let f = team_freshness(&net(3, &[])).map_err(err)?;
    ensure!(f == 1.0, "freshness without edges {f}");
    let f = team_freshness(&net(4, &clique(4))).map_err(err)?;
    ensure!(f == 0.0, "freshness of clique {f}");
    let d = edge_density(&net(5, &clique(5)));
    ensure!(d == Some(1.0), "density of 5-clique {d:?}");
    let d = edge_density(&net(5, &[]));
    ensure!(d == Some(0.0), "density without edges {d:?}");
    let c = clustering_coefficient(&net(3, &clique(3)));
    ensure!(c == Some(1.0), "clustering of triangle {c:?}");
    let c = clustering_coefficient(&net(3, &[(0, 1), (1, 2)]));
    ensure!(c == Some(0.0), "clustering of path {c:?}");

    ensure!(standardize_sd(&[0.5; 10]).is_err(), "constant sample standardized");
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let sample: Vec<f64> = (0..500).map(|_| rng.random::<f64>()).collect();
    let z = standardize_sd(&sample).map_err(err)?;
    ensure!(mean(&z).abs() < EPS, "standardized mean {}", mean(&z));
    ensure!(close(sample_sd(&z), 1.0), "standardized sd {}", sample_sd(&z));
    Ok(())
}

fn innovation() -> Check {
    let r = |id: &str, y, refs: &[&str]| paper(id, y, &["x"], refs);
    let g = build_citation_graph(&[r("R", 1990, &[]), r("F", 2000, &["R"]), r("C", 2001, &["F"])]);
    let cd = cd_index(&g, g.node("F").unwrap(), 5).cd;
    ensure!(cd == Some(1.0), "pure disruption gave {cd:?}");
    let g = build_citation_graph(&[r("R", 1990, &[]), r("F", 2000, &["R"]), r("C", 2001, &["F", "R"])]);
    let cd = cd_index(&g, g.node("F").unwrap(), 5).cd;
    ensure!(cd == Some(-1.0), "pure consolidation gave {cd:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let values: Vec<Option<f64>> = (0..301).map(|_| Some(rng.random::<f64>())).collect();
    let mut keys: Vec<u32> = (0..300).map(|i| i % 3).collect();
    keys.push(99);
    let z = field_normalize(&values, &keys);
    ensure!(z[300].is_none(), "singleton group normalized to {:?}", z[300]);
    for k in 0..3 {
        let g: Vec<f64> = (0..300).filter(|&i| keys[i] == k).map(|i| z[i].unwrap()).collect();
        ensure!(mean(&g).abs() < EPS, "group {k} mean {}", mean(&g));
        ensure!(close(sample_sd(&g), 1.0), "group {k} sd {}", sample_sd(&g));
    }

    let di = disciplinary_integration(&[Some(Discipline::Physics); 4]).di;
    ensure!(di == Some(0.0), "homogeneous DI {di:?}");
    let di = disciplinary_integration(&[Some(Discipline::Physics), Some(Discipline::Art)]).di;
    ensure!(di == Some(0.5), "50/50 DI {di:?}");
    let mut refs = vec![Some(Discipline::Physics); 5];
    refs.extend([Some(Discipline::Art); 3]);
    refs.extend([Some(Discipline::Biology); 2]);
    let di = disciplinary_integration(&refs).di.unwrap();
    let direct = simpson_index(&[0.5, 0.3, 0.2]);
    ensure!(close(di, 0.62) && close(direct, 0.62), "DI (0.5, 0.3, 0.2) gave {di}, {direct}");
    Ok(())
}

fn content() -> Check {
    ensure!(title_word_count("") == 0, "empty title has words");
    let n = title_word_count("state-of-the-art methods");
    ensure!(n == 2, "hyphenated title counted {n}");
    let cat = flesch_reading_ease("The cat sat").ok_or("no score")?;
    ensure!((cat * 100.0).round() / 100.0 == 119.19 && (cat - 119.19).abs() < 1e-9, "Flesch {cat}");
    let (short, long) = ("cat dog sun", "elephant dog sun");
    ensure!(
        count_syllables("elephant") > count_syllables("cat"),
        "syllable heuristic does not separate the probe words"
    );
    let (a, b) = (flesch_reading_ease(short).unwrap(), flesch_reading_ease(long).unwrap());
    ensure!(b < a, "more syllables per word scored {b} >= {a}");
    let lex = Lexicon::parse("unique\n");
    let p = promotional_fraction("A unique approach", &lex).unwrap();
    ensure!((p * 100.0).round() / 100.0 == 33.33, "promotional share {p}");
    let p = promotional_fraction("A plain approach", &lex);
    ensure!(p == Some(0.0), "no-match share {p:?}");
    Ok(())
}

fn dense_frame(cols: &[(&str, Vec<f64>)]) -> Frame {
    let mut f = Frame::new(cols[0].1.len());
    for (name, v) in cols {
        f.insert_dense(name, v.clone()).unwrap();
    }
    f
}

fn regression() -> Check {
    let x = vec![1.0, 2.0, 3.0, 4.0, 5.0];
    let f = dense_frame(&[("x", x.clone()), ("y", x.iter().map(|v| 2.0 * v).collect())]);
    let d = build_design(&f, &ModelSpec::new("y", &["x"])).map_err(err)?;
    ensure!(d.x.shape() == (5, 2), "design shape {:?}", d.x.shape());
    let fit = fit_model(&f, &ModelSpec::new("y", &["x"]), CovarianceKind::Classical).map_err(err)?;
    let b = fit.coefficient("x").unwrap();
    ensure!(b == 2.0, "y = 2x slope {b}");
    ensure!(fit.coefficients[0].abs() < EPS, "y = 2x intercept {}", fit.coefficients[0]);
    ensure!(close(fit.r_squared, 1.0), "y = 2x R^2 {}", fit.r_squared);

    let f = dense_frame(&[("a", vec![1.0, 2.0]), ("b", vec![3.0, 4.0]), ("y", vec![0.0, 1.0])]);
    let spec = ModelSpec::new("y", &["a", "b"]).interaction("a", "b");
    let d = build_design(&f, &spec).map_err(err)?;
    let col = d.term_names().iter().position(|n| n == "a:b").ok_or("no a:b column")?;
    ensure!(d.x.column(col).iter().eq([3.0, 8.0].iter()), "interaction column {:?}", d.x.column(col));

    let f = dense_frame(&[("x", x.clone()), ("y", x.iter().map(|v| 1.0 + 2.0 * v).collect())]);
    let fit = fit_model(&f, &ModelSpec::new("y", &["x"]), CovarianceKind::Classical).map_err(err)?;
    let m = predict_margins(&fit, "x", &[0.0, 1.0], None).map_err(err)?;
    ensure!(
        close(m[0].prediction, 1.0) && close(m[1].prediction, 3.0),
        "margins {}, {}",
        m[0].prediction,
        m[1].prediction
    );

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let xs = normals(&mut rng, 400);
    let ms: Vec<f64> = (0..400).map(|_| rng.random_range(0.0..3.0)).collect();
    let e = normals(&mut rng, 400);
    let y: Vec<f64> = (0..400).map(|i| 0.2 * xs[i] + 0.1 * ms[i] + 0.5 * xs[i] * ms[i] + e[i]).collect();
    let f = dense_frame(&[("x", xs), ("m", ms), ("y", y)]);
    let fit = fit_model(&f, &ModelSpec::new("y", &["x", "m"]).interaction("x", "m"), CovarianceKind::Classical)
        .map_err(err)?;
    ensure!(fit.coefficient("x:m").unwrap() > 0.0, "interaction estimate not positive");
    let slopes: Vec<f64> = [0.0, 1.0, 2.0, 3.0]
        .iter()
        .map(|&l| marginal_slope(&fit, "x", Some(("m", l))))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    ensure!(slopes.windows(2).all(|w| w[1] > w[0]), "slopes {slopes:?}");
    Ok(())
}

fn tests_and_ranks() -> Check {
    let up: Vec<f64> = (0..20).map(f64::from).collect();
    let sq: Vec<f64> = up.iter().map(|v| v * v).collect();
    let down: Vec<f64> = up.iter().map(|v| -v.powi(3)).collect();
    let r = spearman(&up, &sq).map_err(err)?.rho;
    ensure!(r == Some(1.0), "increasing rho {r:?}");
    let r = spearman(&up, &down).map_err(err)?.rho;
    ensure!(r == Some(-1.0), "decreasing rho {r:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let x = normals(&mut rng, 1000);
    for bins in [2, 7, 20] {
        let fit = binned_means_fit(&x, &x, bins).map_err(err)?;
        ensure!(close(fit.r_squared, 1.0) && close(fit.slope, 1.0), "y = x, {bins} bins: {fit:?}");
    }

    let a = [1.0, 2.0, 3.0, 4.0, 5.0];
    let t = t_test_independent(&a, &a).map_err(err)?;
    ensure!(t.t == Some(0.0) && t.p_value == Some(1.0), "identical samples t {:?} p {:?}", t.t, t.p_value);
    let b: Vec<f64> = (0..10).map(|i| 1.0 + 1e-3 * f64::from(i)).collect();
    let shifted: Vec<f64> = b.iter().map(|v| v + 10.0).collect();
    let p = t_test_independent(&shifted, &b).map_err(err)?.p_value.unwrap();
    ensure!(p < 0.001, "separated samples p {p}");

    let mw = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0, 7.0]).map_err(err)?;
    ensure!(mw.u_a == 0.0, "separated U {}", mw.u_a);
    let mw = mann_whitney_u(&[5.0; 4], &[5.0; 6]).map_err(err)?;
    ensure!(mw.u_a == 12.0 && mw.u_b == 12.0, "tied U {} / {}", mw.u_a, mw.u_b);
    Ok(())
}

fn logistic_and_kde() -> Check {
    let rows = 200;
    let x = DMatrix::from_fn(rows, 2, |i, j| if j == 0 { 1.0 } else if i % 2 == 0 { 1.0 } else { -1.0 });
    let y: Vec<f64> = (0..rows).map(|i| if (i / 2) % 2 == 0 { 1.0 } else { 0.0 }).collect();
    let fit = logistic_fit(&x, &y).map_err(err)?;
    ensure!(fit.converged && fit.coefficients[0].abs() < 1e-8, "symmetric intercept {:?}", fit.coefficients);

    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let n = 1000;
    let z = normals(&mut rng, n);
    let y: Vec<f64> = z.iter().map(|&v| if rng.random::<f64>() < 1.0 / (1.0 + (-v).exp()) { 1.0 } else { 0.0 }).collect();
    let x = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { z[i] });
    let fit = logistic_fit(&x, &y).map_err(err)?;
    let avg = (0..n).map(|i| fit.predict(&[1.0, z[i]])).sum::<f64>() / n as f64;
    ensure!((avg - mean(&y)).abs() < 1e-8, "mean probability {avg} vs prevalence {}", mean(&y));

    let values = normals(&mut rng, 300);
    let bw = silverman_bandwidth(&values).map_err(err)?;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min) - 4.0 * bw;
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 4.0 * bw;
    let grid: Vec<f64> = (0..2001).map(|i| lo + (hi - lo) * i as f64 / 2000.0).collect();
    let d = gaussian_kde(&values, &grid, None).map_err(err)?;
    let area: f64 = (1..grid.len())
        .map(|i| 0.5 * (d.density[i] + d.density[i - 1]) * (grid[i] - grid[i - 1]))
        .sum();
    ensure!((area - 1.0).abs() < 0.02, "KDE integral {area}");

    let half = normals(&mut rng, 100);
    let sym: Vec<f64> = half.iter().flat_map(|&v| [v, -v]).collect();
    let grid: Vec<f64> = (0..201).map(|i| -5.0 + 0.05 * i as f64).collect();
    let d = gaussian_kde(&sym, &grid, None).map_err(err)?;
    let asym = (0..201).map(|i| (d.density[i] - d.density[200 - i]).abs()).fold(0.0, f64::max);
    ensure!(asym < 1e-10, "symmetric data density asymmetry {asym:e}");
    Ok(())
}

fn matching() -> Check {
    let v: Vec<f64> = (1..=8).map(f64::from).collect();
    let q = quantile_groups(&v, &(0..8).collect::<Vec<_>>(), 4).map_err(err)?;
    ensure!(q.labels == [1, 1, 2, 2, 3, 3, 4, 4], "1..8 in quartiles {:?}", q.labels);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let u: Vec<f64> = (0..100).map(|_| rng.random::<f64>()).collect();
    let q = quantile_groups(&u, &(0..100).collect::<Vec<_>>(), 10).map_err(err)?;
    ensure!((1..=10).all(|g| q.members(g).len() == 10), "decile sizes uneven");

    let n = 4000;
    let mut f = Frame::new(n);
    f.insert_dense("c1", normals(&mut rng, n)).map_err(err)?;
    f.insert_dense("c2", normals(&mut rng, n)).map_err(err)?;
    let treated: Vec<bool> = (0..n).map(|_| rng.random_bool(0.3)).collect();
    let prev = treated.iter().filter(|&&t| t).count() as f64 / n as f64;
    let ps = propensity_scores(&f, &treated, &["c1".into(), "c2".into()], &[]).map_err(err)?;
    ensure!(ps.converged, "null propensity model did not converge");
    let scores: Vec<f64> = ps.scores.iter().map(|s| s.unwrap()).collect();
    ensure!(scores.iter().all(|&s| s > 0.0 && s < 1.0), "score outside (0, 1)");
    let worst = scores.iter().map(|s| (s - prev).abs()).fold(0.0, f64::max);
    ensure!(worst < 0.05, "null scores stray {worst:.3} from prevalence {prev:.3}");

    let m = nn_match(&[0.8], &[0.7, 0.3], None).map_err(err)?;
    ensure!(m.pairs.len() == 1 && m.pairs[0].control == 0, "0.8 matched to {:?}", m.pairs);
    let m = nn_match(&[0.8, 0.6], &[0.7], None).map_err(err)?;
    ensure!(m.pairs.len() == 1 && m.unmatched_treated.len() == 1, "two treated, one control: {m:?}");

    let g = [0.3, 1.1, 2.5, 0.9];
    ensure!(smd(&g, &g) == Some(0.0), "identical groups SMD {:?}", smd(&g, &g));
    let r = 2f64.sqrt();
    let s = smd(&[1.0 - r, 1.0 + r], &[-r, r]).unwrap();
    ensure!(close(s, 0.5), "gap 1, pooled sd 2 SMD {s}");

    let att = att_estimate(&[0.0; 50], 500, 1).map_err(err)?;
    ensure!(att.estimate == 0.0 && att.ci_low <= 0.0 && att.ci_high >= 0.0, "zero gaps {att:?}");
    let att = att_estimate(&[0.12; 5000], 500, 1).map_err(err)?;
    ensure!(close(att.estimate, 0.12), "constant gap ATT {}", att.estimate);
    ensure!(att.ci_high - att.ci_low < EPS, "constant gap CI width {}", att.ci_high - att.ci_low);
    Ok(())
}

fn prepost_and_mediation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut rows = Vec::new();
    for _ in 0..200 {
        let (cc, sd, cd) = (rng.random_range(1..5u32), rng.random::<f64>(), rng.random::<f64>() - 0.5);
        for year in [2010, 2011, 2012, 2013] {
            rows.push(PeriodRow {
                year,
                cc_count: cc,
                sd,
                cd_norm: Some(cd),
            });
        }
    }
    let rep = prepost_report(&rows, &PrePostConfig::default()).map_err(err)?;
    let cd_p = rep.cd_test.and_then(|t| t.p_value).unwrap_or(0.0);
    let ps = [rep.cc_test.p_value, rep.sd_test.p_value, cd_p];
    ensure!(ps.iter().all(|&p| (p - 1.0).abs() < 1e-9), "identical periods p {ps:?}");

    let n = 3000;
    let x = normals(&mut rng, n);
    let m = normals(&mut rng, n);
    let e = normals(&mut rng, n);
    let y: Vec<f64> = (0..n).map(|i| 0.3 * x[i] + 0.4 * m[i] + e[i]).collect();
    let f = dense_frame(&[("sd_std", x), ("di", m), ("cd_norm", y)]);
    let cfg = MediationConfig {
        controls: Vec::new(),
        fixed_effects: Vec::new(),
        n_bootstrap: 500,
        seed: 3,
        ..MediationConfig::default()
    };
    let r = mediation_analysis(&f, &cfg).map_err(err)?;
    let (lo, hi) = r.indirect_ci;
    ensure!(lo <= 0.0 && hi >= 0.0 && r.indirect_p > 0.05, "null mediator CI [{lo}, {hi}] p {}", r.indirect_p);
    ensure!(r.identity_gap < 1e-6, "c = c' + ab gap {}", r.identity_gap);
    Ok(())
}

fn synth_contract() -> Check {
    let empty = generate_corpus(&SynthConfig {
        seed: Some(1),
        n_papers: 0,
        ..SynthConfig::default()
    })
    .map_err(err)?;
    ensure!(empty.records.is_empty() && empty.truth.papers.is_empty(), "n = 0 produced papers");
    let cfg = SynthConfig {
        seed: Some(17),
        n_papers: 500,
        ..SynthConfig::default()
    };
    let bytes = || -> Result<Vec<u8>, String> {
        let out = generate_corpus(&cfg).map_err(err)?;
        let mut buf = Vec::new();
        write_jsonl(&out.records, &mut buf).map_err(err)?;
        buf.extend(serde_json::to_vec(&out.truth).map_err(err)?);
        out.h_index.write_tsv(&mut buf).map_err(err)?;
        Ok(buf)
    };
    ensure!(bytes()? == bytes()?, "same seed gave different bytes");
    Ok(())
}

fn cli_contract() -> Check {
    let dir = tempfile::tempdir().map_err(err)?;
    std::fs::write(
        dir.path().join("teamdiv.toml"),
        "seed = 5\n[inputs]\nh_index = \"out/h_index.tsv\"\n[synth]\nn_papers = 1500\nbeta_sd = 0.2\n",
    )
    .map_err(err)?;
    let run = |cmd: &str| {
        Command::new(env!("CARGO_BIN_EXE_teamdiv"))
            .current_dir(dir.path())
            .args(["--config", "teamdiv.toml", cmd])
            .output()
            .map_err(err)
    };
    let early = run("regress")?;
    let msg = String::from_utf8_lossy(&early.stderr);
    ensure!(!early.status.success() && msg.contains("run metrics first"), "regress before metrics: {msg}");
    for cmd in ["synth", "metrics", "regress"] {
        let out = run(cmd)?;
        ensure!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read_to_string(dir.path().join("out/manifest.json")).map_err(err)?;
    let manifest: teamdiv::Manifest = serde_json::from_str(&text).map_err(err)?;
    let up = |c: &str| manifest.run(c).map(|r| r.upstream.clone()).unwrap_or_default();
    ensure!(up("metrics") == ["synth"] && up("regress") == ["metrics"], "chain {:?} / {:?}", up("metrics"), up("regress"));
    Ok(())
}

const SUITE: [(&str, fn() -> Check); 18] = [
    ("ingest", ingest),
    ("article filter", filters),
    ("traceability", traceability),
    ("author profiles", profiles),
    ("citation edges", citation_edges),
    ("collaboration edges", collab_edges),
    ("prior window", prior_window),
    ("components", components),
    ("team metrics", team_metrics),
    ("CD, normalization, DI", innovation),
    ("title metrics", content),
    ("design, OLS, margins", regression),
    ("rank, binned, tests", tests_and_ranks),
    ("logistic, KDE", logistic_and_kde),
    ("groups, matching, ATT", matching),
    ("pre-post, mediation", prepost_and_mediation),
    ("generator contract", synth_contract),
    ("CLI contract", cli_contract),
];

pub fn suite() -> Outcome {
    let mut failed = Vec::new();
    for (name, check) in &SUITE {
        if let Err(e) = check() {
            failed.push(format!("{name}: {e}"));
        }
    }
    ensure!(failed.is_empty(), "{}", failed.join("; "));
    Ok(format!(
        "{} groups pass; DI(0.5, 0.3, 0.2) = 0.62, Flesch(\"The cat sat\") = {:.2}",
        SUITE.len(),
        flesch_reading_ease("The cat sat").unwrap_or(f64::NAN)
    ))
}
