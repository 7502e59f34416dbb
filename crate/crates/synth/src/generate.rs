//! Corpus generation.
//!
//! Every focal paper gets a fresh team. Prior ties are two-author papers
//! one year before publication, isolated members get a paper with an outside
//! coauthor, and the last author has a batch of solo papers earlier in the
//! career. Forward citers come from per-year pools and cite the focal paper,
//! its private dangling reference, or both, so the CD index lands on a
//! planted value. Library references come from per-year, per-discipline
//! pools so DI lands on a planted value without adding citers. All support
//! records lack traceable history and stay out of the analysis sample.

use std::collections::{BTreeMap, HashSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use teamdiv_core::{ArticleType, AuthorRef, Discipline, HIndexTable, PaperRecord};

use crate::config::{SynthConfig, CAREER_AGE_RANGE};
use crate::di::DiTable;
use crate::error::Result;
use crate::structure::{cc_expectation, sample_layout, split_prob_for, Layout};
use crate::truth::{Counts, Derived, EdgeTruth, GroundTruth, PaperTruth, Planted};

pub const CITER_WINDOW: i32 = 5;
const CITER_LOAD: usize = 20;
const H_CENTER: f64 = 50.0;
const H_SPREAD: f64 = 15.0;
const MIN_NOISE_VARIANCE: f64 = 0.01;

const WORDS: [&str; 40] = [
    "network", "analysis", "of", "the", "protein", "dynamics", "in", "model", "systems", "learning", "graph",
    "structure", "evidence", "from", "large", "scale", "data", "a", "new", "approach", "to", "measuring", "cell",
    "growth", "under", "stress", "theory", "and", "practice", "quantum", "transport", "climate", "signals", "for",
    "social", "behavior", "rapid", "design", "materials", "with",
];
const PROMO_WORDS: [&str; 3] = ["unique", "crucial", "unprecedented"];

pub struct SynthOutput {
    pub records: Vec<PaperRecord>,
    pub truth: GroundTruth,
    pub h_index: HIndexTable,
}

struct Focal {
    year: i32,
    discipline: Discipline,
    nsf: bool,
    shocked: bool,
    review: bool,
    traceable: bool,
    layout: Layout,
    team_size: usize,
    career_age: i32,
    career_papers: usize,
    h_draw: f64,
    mediator_draw: f64,
    title: String,
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn title<R: Rng>(rng: &mut R) -> String {
    let len = rng.random_range(4..=14);
    let mut words: Vec<&str> = (0..len).map(|_| *WORDS.choose(rng).unwrap()).collect();
    if rng.random::<f64>() < 0.15 {
        let at = rng.random_range(0..words.len());
        words[at] = PROMO_WORDS.choose(rng).unwrap();
    }
    let mut t = words.join(" ");
    if let Some(first) = t.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    t
}

/// Exactly `count` of `n` indices, chosen uniformly.
fn pick_exact<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<bool> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut flags = vec![false; n];
    for &i in &idx[..count.min(n)] {
        flags[i] = true;
    }
    flags
}

fn mean_var(values: &[f64]) -> (f64, f64) {
    if values.len() < 2 {
        return (values.first().copied().unwrap_or(0.0), 0.0);
    }
    let n = values.len() as f64;
    let m = values.iter().sum::<f64>() / n;
    let v = values.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v)
}

fn record(id: String, title: &str, year: i32, discipline: Discipline, authors: Vec<AuthorRef>) -> PaperRecord {
    PaperRecord {
        paper_id: id,
        title: title.to_string(),
        year,
        discipline,
        authors,
        references: Vec::new(),
        article_type: ArticleType::ResearchArticle,
        nsf_funded: false,
    }
}

fn author(id: String) -> AuthorRef {
    AuthorRef {
        author_id: id,
        institution_id: None,
    }
}

pub fn generate_corpus(cfg: &SynthConfig) -> Result<SynthOutput> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed()?);
    let n = cfg.n_papers;
    let disciplines = cfg.disciplines();

    let (cc_a, cc_b) = cc_expectation(cfg.team_size_min, cfg.team_size_max, cfg.isolate_prob);
    let q = match cfg.mean_cc {
        Some(m) => split_prob_for(m, cfg.team_size_min, cfg.team_size_max, cfg.isolate_prob)?,
        None => cfg.split_prob,
    };
    let q_shocked = if cfg.shock_year.is_some() && cfg.shock_cc_shift != 0.0 {
        split_prob_for(
            cc_a + cc_b * q + cfg.shock_cc_shift,
            cfg.team_size_min,
            cfg.team_size_max,
            cfg.isolate_prob,
        )?
    } else {
        q
    };

    let reviews = pick_exact(&mut rng, n, (cfg.review_fraction * n as f64).round() as usize);
    let untraceable = pick_exact(&mut rng, n, n - (cfg.traceable_fraction * n as f64).round() as usize);

    let mut focal = Vec::with_capacity(n);
    for i in 0..n {
        let year = rng.random_range(cfg.first_year..=cfg.last_year);
        let discipline = *disciplines.choose(&mut rng).unwrap();
        let nsf = rng.random::<f64>() < cfg.nsf_share;
        let shocked = nsf && cfg.shock_year.is_some_and(|y| year >= y);
        let team_size = rng.random_range(cfg.team_size_min..=cfg.team_size_max);
        let layout = sample_layout(
            &mut rng,
            team_size,
            cfg.isolate_prob,
            if shocked { q_shocked } else { q },
        );
        focal.push(Focal {
            year,
            discipline,
            nsf,
            shocked,
            review: reviews[i],
            traceable: !untraceable[i],
            team_size,
            career_age: rng.random_range(CAREER_AGE_RANGE.0..=CAREER_AGE_RANGE.1),
            career_papers: rng.random_range(1..=6),
            h_draw: normal(&mut rng),
            mediator_draw: normal(&mut rng),
            title: title(&mut rng),
            layout,
        });
    }

    // standardized SD and its top quartile over the analysis sample
    let in_sample: Vec<bool> = focal.iter().map(|f| f.traceable && !f.review).collect();
    let sd: Vec<f64> = focal.iter().map(|f| f.layout.cc() as f64 / f.team_size as f64).collect();
    let sample_sd: Vec<f64> = (0..n).filter(|&i| in_sample[i]).map(|i| sd[i]).collect();
    let (sd_mean, sd_var) = mean_var(&sample_sd);
    let sd_sd = sd_var.sqrt();
    let x: Vec<f64> = sd
        .iter()
        .map(|&v| if sd_sd > 0.0 { (v - sd_mean) / sd_sd } else { 0.0 })
        .collect();
    let ids: Vec<String> = (0..n).map(|i| format!("F{i:07}")).collect();
    let mut top = vec![false; n];
    {
        let mut order: Vec<usize> = (0..n).filter(|&i| in_sample[i]).collect();
        order.sort_by(|&a, &b| sd[a].total_cmp(&sd[b]).then(ids[a].cmp(&ids[b])));
        let m = order.len();
        for (pos, &i) in order.iter().enumerate() {
            top[i] = m >= 4 && pos * 4 / m + 1 == 4;
        }
    }

    // h-index, mediator and DI
    let kappa = cfg.confounding;
    let di_table = DiTable::new(cfg.refs_per_paper, disciplines.len());
    let mut h_index = Vec::with_capacity(n);
    let mut di = Vec::with_capacity(n);
    let mut di_counts: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut mediator = Vec::with_capacity(n);
    for (i, f) in focal.iter().enumerate() {
        let h_tilde = kappa * x[i] + (1.0 - kappa * kappa).sqrt() * f.h_draw;
        h_index.push((H_CENTER + H_SPREAD * h_tilde).round().max(0.0) as u32);
        let m_latent = cfg.a_path * x[i] + f.mediator_draw;
        let (d, counts) = di_table.closest(cfg.di_base + cfg.di_scale * m_latent);
        di.push(d);
        di_counts.push(counts.to_vec());
        mediator.push(if cfg.di_scale > 0.0 {
            (d - cfg.di_base) / cfg.di_scale
        } else {
            m_latent
        });
    }

    // latent outcome with noise filling the variance up to one
    let systematic: Vec<f64> = (0..n)
        .map(|i| {
            let l = (focal[i].team_size as f64).ln();
            let h_std = (h_index[i] as f64 - H_CENTER) / H_SPREAD;
            cfg.beta_sd * x[i]
                + cfg.beta_interaction * x[i] * l
                + cfg.beta_team_size * l
                + cfg.treatment_effect * f64::from(u8::from(top[i]))
                + cfg.b_path * mediator[i]
                + cfg.h_effect * h_std
                + cfg.shock_cd * f64::from(u8::from(focal[i].shocked))
        })
        .collect();
    let sample_sys: Vec<f64> = (0..n).filter(|&i| in_sample[i]).map(|i| systematic[i]).collect();
    let (sys_mean, sys_var) = mean_var(&sample_sys);
    let m_cite = cfg.citers_per_paper;
    let rounding_var = 1.0 / (6.0 * (m_cite * m_cite) as f64 * cfg.cd_scale * cfg.cd_scale);
    let noise_var = 1.0 - sys_var - rounding_var;
    if n > 0 && noise_var < MIN_NOISE_VARIANCE {
        return Err(crate::error::SynthError::Infeasible(format!(
            "planted effects explain {:.3} of a unit outcome variance",
            sys_var + rounding_var
        )));
    }
    let noise_sd = noise_var.max(0.0).sqrt();
    let mut latent = Vec::with_capacity(n);
    let mut plus_minus = Vec::with_capacity(n);
    let mut cd = Vec::with_capacity(n);
    for s in &systematic {
        let z = s - sys_mean + noise_sd * normal(&mut rng);
        let target = (cfg.cd_scale * z).clamp(-1.0, 1.0) * m_cite as f64;
        let floor = target.floor();
        let k = floor as i64 + i64::from(rng.random::<f64>() < target - floor);
        let m = m_cite as i64;
        let k = k.clamp(-m, m);
        let zero = (m - k).rem_euclid(2);
        let plus = ((m - zero + k) / 2) as usize;
        let minus = ((m - zero - k) / 2) as usize;
        latent.push(z);
        cd.push(k as f64 / m as f64);
        plus_minus.push((plus, minus, zero as usize));
    }

    // support records
    let mut records: Vec<PaperRecord> = Vec::new();
    let mut counts = Counts {
        focal: n,
        ..Counts::default()
    };
    let mut edge_truth = EdgeTruth {
        edge_prob: cfg.edge_prob,
        ..EdgeTruth::default()
    };
    let mut table = HIndexTable::new();
    let mut author_seq = 0usize;
    let mut fresh = |prefix: char| {
        author_seq += 1;
        format!("{prefix}{author_seq:08}")
    };
    let mut history_seq = 0usize;
    let mut library_needed: BTreeMap<(i32, usize), ()> = BTreeMap::new();
    let mut focal_records = Vec::with_capacity(n);
    let mut truths = Vec::with_capacity(n);

    for (i, f) in focal.iter().enumerate() {
        let t = f.year;
        let members: Vec<String> = (0..f.team_size).map(|_| fresh('a')).collect();
        let inst = format!("I{i:07}");
        table.insert(&inst, h_index[i])?;
        let mut edges = 0usize;
        for comp in &f.layout.components {
            if comp.len() == 1 {
                history_seq += 1;
                records.push(record(
                    format!("H{history_seq:08}"),
                    "Prior collaboration",
                    t - 1,
                    f.discipline,
                    vec![author(members[comp[0]].clone()), author(fresh('x'))],
                ));
                continue;
            }
            let mut tree = HashSet::new();
            for j in 1..comp.len() {
                let parent = comp[rng.random_range(0..j)];
                let (a, b) = (parent.min(comp[j]), parent.max(comp[j]));
                tree.insert((a, b));
            }
            let mut pairs: Vec<(usize, usize)> = tree.iter().copied().collect();
            pairs.sort_unstable();
            edge_truth.tree_edges += pairs.len();
            let mut sorted = comp.clone();
            sorted.sort_unstable();
            for (ai, &a) in sorted.iter().enumerate() {
                for &b in &sorted[ai + 1..] {
                    if tree.contains(&(a, b)) {
                        continue;
                    }
                    edge_truth.eligible_pairs += 1;
                    if rng.random::<f64>() < cfg.edge_prob {
                        edge_truth.extra_edges += 1;
                        pairs.push((a, b));
                    }
                }
            }
            edges += pairs.len();
            for (a, b) in pairs {
                history_seq += 1;
                records.push(record(
                    format!("H{history_seq:08}"),
                    "Prior collaboration",
                    t - 1,
                    f.discipline,
                    vec![author(members[a].clone()), author(members[b].clone())],
                ));
            }
        }
        counts.history = history_seq;

        let last = members.last().unwrap().clone();
        for c in 0..f.career_papers {
            records.push(record(
                format!("C{i:07}{c:02}"),
                "Early work",
                t - f.career_age,
                f.discipline,
                vec![AuthorRef {
                    author_id: last.clone(),
                    institution_id: Some(inst.clone()),
                }],
            ));
            counts.career += 1;
        }

        let mut authors: Vec<AuthorRef> = Vec::with_capacity(f.team_size + 1);
        if !f.traceable {
            authors.push(author(fresh('n')));
        }
        authors.extend(members.iter().map(|m| author(m.clone())));
        authors.last_mut().unwrap().institution_id = Some(inst.clone());

        let mut order: Vec<usize> = (0..disciplines.len()).collect();
        order.shuffle(&mut rng);
        let mut references = Vec::with_capacity(cfg.refs_per_paper + 1);
        for (slot, &count) in di_counts[i].iter().enumerate() {
            if count == 0 {
                continue;
            }
            let d = order[slot];
            library_needed.insert((t, d), ());
            let mut picks: Vec<usize> = (0..cfg.refs_per_paper).collect();
            let (chosen, _) = picks.partial_shuffle(&mut rng, count);
            let mut chosen = chosen.to_vec();
            chosen.sort_unstable();
            for j in chosen {
                references.push(format!("L{t}{d:02}{j:02}"));
            }
        }
        references.push(format!("R{i:07}"));

        focal_records.push(PaperRecord {
            paper_id: ids[i].clone(),
            title: f.title.clone(),
            year: t,
            discipline: f.discipline,
            authors,
            references,
            article_type: if f.review { ArticleType::Review } else { ArticleType::ResearchArticle },
            nsf_funded: f.nsf,
        });
        let mut component_sizes: Vec<usize> = f.layout.components.iter().map(Vec::len).collect();
        component_sizes.sort_unstable_by(|a, b| b.cmp(a));
        truths.push(PaperTruth {
            id: ids[i].clone(),
            year: t,
            discipline: f.discipline.label().to_string(),
            team_size: f.team_size,
            nsf_funded: f.nsf,
            review: f.review,
            traceable: f.traceable,
            in_sample: in_sample[i],
            shocked: f.shocked,
            cc: f.layout.cc(),
            singletons: f.layout.singletons,
            component_sizes,
            edges,
            sd: sd[i],
            sd_std: x[i],
            top_quartile: top[i],
            career_age: f.career_age,
            h_index: h_index[i],
            mediator: mediator[i],
            di: di[i],
            latent: latent[i],
            cd: cd[i],
            citers: m_cite,
        });
    }

    for &(t, d) in library_needed.keys() {
        for j in 0..cfg.refs_per_paper {
            records.push(record(
                format!("L{t}{d:02}{j:02}"),
                "Reference work",
                t - 1,
                disciplines[d],
                vec![author(fresh('l'))],
            ));
            counts.library += 1;
        }
    }

    // citer pools sized from the expected number of citing slots per year
    let mut per_year: BTreeMap<i32, usize> = BTreeMap::new();
    for f in &focal {
        *per_year.entry(f.year).or_default() += 1;
    }
    let mut pool_size: BTreeMap<i32, usize> = BTreeMap::new();
    for (&t, &count) in &per_year {
        for y in t + 1..=t + CITER_WINDOW {
            *pool_size.entry(y).or_default() += count * m_cite;
        }
    }
    for v in pool_size.values_mut() {
        *v = (*v / (CITER_WINDOW as usize * CITER_LOAD)).max(m_cite);
    }
    let mut citer_refs: BTreeMap<(i32, usize), Vec<String>> = BTreeMap::new();
    for (i, f) in focal.iter().enumerate() {
        let (plus, minus, zero) = plus_minus[i];
        let mut used = HashSet::with_capacity(m_cite);
        let fid = &ids[i];
        let rid = format!("R{i:07}");
        for slot in 0..m_cite {
            let key = loop {
                let y = f.year + 1 + rng.random_range(0..CITER_WINDOW);
                let k = (y, rng.random_range(0..pool_size[&y]));
                if used.insert(k) {
                    break k;
                }
            };
            let refs = citer_refs.entry(key).or_default();
            if slot < plus {
                refs.push(fid.clone());
            } else if slot < plus + minus {
                refs.push(fid.clone());
                refs.push(rid.clone());
            } else {
                debug_assert!(slot < plus + minus + zero);
                refs.push(rid.clone());
            }
        }
    }
    for ((y, k), refs) in citer_refs {
        let d = *disciplines.choose(&mut rng).unwrap();
        let mut r = record(format!("K{y}{k:06}"), "Follow-up study", y, d, vec![author(fresh('k'))]);
        r.references = refs;
        records.push(r);
        counts.citers += 1;
    }

    records.extend(focal_records);
    records.sort_by(|a, b| a.year.cmp(&b.year).then_with(|| a.paper_id.cmp(&b.paper_id)));

    counts.records = records.len();
    counts.reviews = records.iter().filter(|r| r.article_type == ArticleType::Review).count();
    counts.research_articles = records
        .iter()
        .filter(|r| r.article_type == ArticleType::ResearchArticle)
        .count();
    counts.traceable_focal = focal.iter().filter(|f| f.traceable).count();
    counts.sample = in_sample.iter().filter(|&&s| s).count();

    let truth = GroundTruth {
        config: cfg.clone(),
        planted: Planted {
            beta_sd: cfg.beta_sd,
            beta_interaction: cfg.beta_interaction,
            beta_team_size: cfg.beta_team_size,
            treatment_effect: cfg.treatment_effect,
            a_path: cfg.a_path,
            b_path: cfg.b_path,
            direct: cfg.beta_sd,
            indirect: cfg.a_path * cfg.b_path,
            total: cfg.beta_sd + cfg.a_path * cfg.b_path,
            a_path_on_di: cfg.a_path * cfg.di_scale,
            b_path_on_di: if cfg.di_scale > 0.0 { cfg.b_path / cfg.di_scale } else { 0.0 },
            h_effect_per_point: cfg.h_effect / H_SPREAD,
            confounding: cfg.confounding,
            shock_cd: cfg.shock_cd,
        },
        derived: Derived {
            split_prob: q,
            split_prob_shocked: q_shocked,
            expected_mean_cc: cc_a + cc_b * q,
            expected_mean_cc_shocked: cc_a + cc_b * q_shocked,
            sd_mean,
            sd_sd,
            systematic_variance: sys_var,
            rounding_variance: rounding_var,
            noise_sd,
        },
        counts,
        edges: edge_truth,
        papers: truths,
    };
    Ok(SynthOutput {
        records,
        truth,
        h_index: table,
    })
}
