//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each and exits nonzero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use dbg_persist::cli;
use dbg_persist::dbn::{Cpt, Dbn, ParentRef, Slice, Variable};
use dbg_persist::divergence::DivergenceKind;
use dbg_persist::formigram::formigram_of;
use dbg_persist::graph::{build_dbg, check_dg_axioms, GraphViolation};
use dbg_persist::metrics::{bottleneck_distance, exhaustive_bottleneck, stability_check};
use dbg_persist::oracle::oracle_barcode;
use dbg_persist::prelude::*;
use dbg_persist::random::{random_barcode, random_dbn, random_formigram, rng, DbnShape};
use dbg_persist::report::{barcode_json, to_json};
use dbg_persist::zigzag::{zigzag_barcode_with, IndexingSet};

type Outcome = Result<String, String>;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn cluster_sets(k: &str) -> Result<Vec<Vec<String>>, String> {
    let out = cli::run(["dbg-persist", "clusters", &fixture("worked_example.json"), k, "--eta", "0.3"]);
    ensure(out.code == 0, || format!("clusters exited {}: {}", out.code, out.stderr))?;
    let v: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    serde_json::from_value(v["clusters"].clone()).map_err(|e| e.to_string())
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let k0 = cluster_sets("0")?;
    let all: Vec<String> = (1..=8).map(|i| format!("X{i}")).collect();
    ensure(k0 == vec![all.clone()], || format!("slice 0 clusters {k0:?}"))?;
    let k1 = cluster_sets("1")?;
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let expected = vec![s(&["X1", "X2", "X4"]), s(&["X3", "X7", "X8"]), s(&["X5", "X6"])];
    ensure(k1 == expected, || format!("slice 1 clusters {k1:?}"))?;

    let dbn = parse_dbn(&std::fs::read_to_string(fixture("worked_example.json")).unwrap())
        .map_err(|e| e.to_string())?;
    let table = strength_table(&dbn, DivergenceKind::TotalVariation).map_err(|e| e.to_string())?;
    let bc = zigzag_barcode(&formigram_of(&build_dbg(&table, 0.3, dbn.delta_t).unwrap()));
    for i in 1..100 {
        let t = i as f64 / 100.0;
        ensure(bc.alive_at(t) == 1, || format!("{} bars alive at {t}", bc.alive_at(t)))?;
        ensure(bc.alive_at(1.0 + t) == 3, || format!("{} bars alive at {}", bc.alive_at(1.0 + t), 1.0 + t))?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    let bars: Vec<String> = bc.bars().iter().map(|b| b.to_string()).collect();
    Ok(format!("clusters 1 -> 3, bars {}", bars.join(" ")))
}

fn stability() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2024);
    let (mut trials, mut worst) = (0, 0.0f64);
    for _ in 0..200 {
        let dbn = random_dbn(&mut r, DbnShape::default());
        let eta: f64 = r.gen_range(0.0..=1.0);
        let table = strength_table(&dbn, DivergenceKind::TotalVariation).map_err(|e| e.to_string())?;
        let dbg = build_dbg(&table, eta, dbn.delta_t).map_err(|e| e.to_string())?;
        let dt = dbn.delta_t;
        for eps in [0.0, dt / 2.0, dt, 2.0 * dt] {
            let rep = stability_check(&dbg, eps).map_err(|e| e.to_string())?;
            ensure(rep.pass, || format!("d_B = {} > eps = {eps} (eta {eta})", rep.lhs))?;
            worst = worst.max(rep.lhs - eps);
            trials += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{trials}/800 trials within bound, max d_B - eps = {worst:.3e}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut r = rng(99);
    let mut bars = 0;
    for i in 0..1000 {
        let fg = random_formigram(&mut r, 8, 10);
        let fast = zigzag_barcode(&fg);
        let slow = oracle_barcode(&fg).map_err(|e| e.to_string())?;
        ensure(fast.approx_eq(&slow, 1e-12), || format!("instance {i}: {fast:?} vs {slow:?}"))?;
        bars += fast.len();
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("1000/1000 formigrams agree ({bars} bars)"))
}

fn dg_axioms() -> Outcome {
    let mut r = rng(4242);
    let mut crit = 0;
    for i in 0..500 {
        let dbn = random_dbn(&mut r, DbnShape::default());
        let eta = r.gen_range(-0.1..=1.0);
        let table = strength_table(&dbn, DivergenceKind::TotalVariation).map_err(|e| e.to_string())?;
        let g = build_dbg(&table, eta, dbn.delta_t).map_err(|e| e.to_string())?;
        let v = check_dg_axioms(&g);
        ensure(v.is_empty(), || format!("graph {i}: {v:?}"))?;
        for (t, e) in g.critical_times.iter().zip(&g.critical_edges) {
            let k = (t / g.delta_t).round() as usize;
            ensure(g.slice_edges[k - 1].is_subset(e) && g.slice_edges[k].is_subset(e), || {
                format!("graph {i}: inclusion fails at t={t}")
            })?;
            crit += 1;
        }
    }
    let dbn = parse_dbn(&std::fs::read_to_string(fixture("worked_example.json")).unwrap()).unwrap();
    let table = strength_table(&dbn, DivergenceKind::TotalVariation).unwrap();
    let mut mutant = build_dbg(&table, 0.3, dbn.delta_t).unwrap();
    mutant.critical_edges[0] = mutant.slice_edges[0].intersection(&mutant.slice_edges[1]);
    let caught = check_dg_axioms(&mutant)
        .iter()
        .any(|v| matches!(v, GraphViolation::Comparability { .. }));
    ensure(caught, || "intersection mutant not detected".into())?;
    Ok(format!("500 graphs clean, {crit} critical times checked, mutant detected"))
}

/// Child `C` with parent `J` and up to two other parents, whose rows
/// depend only on the other parents.
fn independent_cpt<R: Rng>(r: &mut R) -> (Dbn, usize) {
    let others = r.gen_range(0..=2);
    let card = |r: &mut R| r.gen_range(2..=3);
    let states = |c: usize| -> Vec<String> { (0..c).map(|s| s.to_string()).collect() };
    let var = |name: String, c: usize| Variable {
        name,
        states: states(c),
    };
    let mut variables = vec![var("J".into(), card(r))];
    for o in 0..others {
        variables.push(var(format!("O{o}"), card(r)));
    }
    let child = variables.len();
    let cc = card(r);
    variables.push(var("C".into(), cc));

    let mut parents: Vec<usize> = (0..child).collect();
    let j_pos = r.gen_range(0..parents.len());
    parents.swap(0, j_pos);
    let cards: Vec<usize> = parents.iter().map(|&p| variables[p].states.len()).collect();
    let configs: usize = cards.iter().product();
    let other_configs: usize = cards.iter().enumerate().filter(|(i, _)| *i != j_pos).map(|(_, c)| c).product();
    let base: Vec<Vec<f64>> = (0..other_configs)
        .map(|_| {
            let raw: Vec<f64> = (0..cc).map(|_| r.gen_range(1.0..2.0)).collect();
            let sum: f64 = raw.iter().sum();
            raw.iter().map(|x| x / sum).collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(configs);
    for code in 0..configs {
        let mut digits = vec![0; cards.len()];
        let mut c = code;
        for i in (0..cards.len()).rev() {
            digits[i] = c % cards[i];
            c /= cards[i];
        }
        let other = digits
            .iter()
            .zip(&cards)
            .enumerate()
            .filter(|(i, _)| *i != j_pos)
            .fold(0, |acc, (_, (d, c))| acc * c + d);
        rows.push(base[other].clone());
    }
    let root = |v: usize| Cpt {
        child: v,
        parents: vec![],
        rows: vec![vec![1.0 / variables[v].states.len() as f64; variables[v].states.len()]],
    };
    let mut cpts: Vec<Cpt> = (0..child).map(root).collect();
    cpts.push(Cpt {
        child,
        parents: parents.iter().map(|&p| ParentRef::current(p)).collect(),
        rows,
    });
    let dbn = Dbn {
        intra_edges: parents.iter().map(|&p| (p, child)).collect(),
        variables,
        delta_t: 1.0,
        inter_edges: vec![],
        slices: vec![Slice { k: 0, cpts }],
    };
    (dbn, child)
}

fn conditional_independence() -> Outcome {
    let mut r = rng(5);
    let mut min_ratio = f64::INFINITY;
    for i in 0..100 {
        let (mut dbn, child) = independent_cpt(&mut r);
        for kind in DivergenceKind::ALL {
            let d = edge_strength(&dbn, 0, (0, child), &kind).map_err(|e| e.to_string())?;
            ensure(d < 1e-12, || format!("cpt {i}: {kind} strength {d}"))?;
        }
        let eps = r.gen_range(0.001..=0.05);
        let cpt = dbn.slices[0].cpts.iter_mut().find(|c| c.child == child).unwrap();
        let row = r.gen_range(0..cpt.rows.len());
        let width = cpt.rows[row].len();
        let a = r.gen_range(0..width);
        let b = (a + r.gen_range(1..width)) % width;
        cpt.rows[row][a] += 2.0 * eps;
        cpt.rows[row][b] -= 2.0 * eps;
        let d = edge_strength(&dbn, 0, (0, child), &DivergenceKind::TotalVariation).map_err(|e| e.to_string())?;
        ensure(d >= eps, || format!("cpt {i}: perturbed strength {d} < {eps}"))?;
        min_ratio = min_ratio.min(d / eps);
    }
    Ok(format!("100 CPTs zero under all divergences, perturbed strength >= {min_ratio:.3} eps"))
}

fn bottleneck_metric() -> Outcome {
    let mut r = rng(77);
    let mut exhaustive = 0;
    for i in 0..300 {
        let [a, b, c] = [0, 1, 2].map(|_| random_barcode(&mut r, 6));
        let ab = bottleneck_distance(&a, &b);
        ensure(ab == bottleneck_distance(&b, &a), || format!("triple {i}: asymmetric"))?;
        ensure(bottleneck_distance(&a, &a) == 0.0, || format!("triple {i}: d(A,A) != 0"))?;
        let (bc, ac) = (bottleneck_distance(&b, &c), bottleneck_distance(&a, &c));
        ensure(ac <= ab + bc + 1e-9, || format!("triple {i}: triangle {ac} > {ab} + {bc}"))?;
        for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
            let (fast, slow) = (bottleneck_distance(x, y), exhaustive_bottleneck(x, y));
            ensure(fast == slow, || format!("triple {i}: matching {fast} vs enumeration {slow}"))?;
            exhaustive += 1;
        }
    }
    Ok(format!("300 triples, {exhaustive} exhaustive comparisons"))
}

fn indexing_invariance() -> Outcome {
    let mut r = rng(31);
    for i in 0..200 {
        let fg = random_formigram(&mut r, 8, 10);
        let mid = zigzag_barcode_with(&fg, &IndexingSet::with_fraction(&fg, 0.5)).map_err(|e| e.to_string())?;
        let quarter = zigzag_barcode_with(&fg, &IndexingSet::with_fraction(&fg, 0.25)).map_err(|e| e.to_string())?;
        let (x, y) = (to_json(&barcode_json(&mid)), to_json(&barcode_json(&quarter)));
        ensure(x == y, || format!("formigram {i}: barcodes differ"))?;
    }
    Ok("200/200 formigrams byte-identical".into())
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_dbg-persist");
    let w = fixture("worked_example.json");
    let runs: Vec<Vec<String>> = [
        vec!["validate", &w],
        vec!["validate", &fixture("invalid_row_sum.json"), "--format", "text"],
        vec!["strengths", &w],
        vec!["strengths", &w, "--divergence", "kl", "--format", "text"],
        vec!["strengths", &w, "--divergence", "hellinger"],
        vec!["strengths", &w, "--divergence", "bhattacharyya"],
        vec!["graph", &w, "--eta", "0.3"],
        vec!["formigram", &w, "--eta", "0.3", "--format", "text"],
        vec!["barcode", &w, "--eta", "0.3"],
        vec!["barcode", &w, "--eta", "0.3", "--format", "svg"],
        vec!["barcode", &w, "--eta", "0.3", "--eps", "0.5", "--format", "text"],
        vec!["barcode", &w, "--eta", "0.3", "--oracle"],
        vec!["events", &w, "--eta", "0.3"],
        vec!["clusters", &w, "1", "--eta", "0.3", "--format", "text"],
        vec!["compare", &fixture("shift_a.json"), &fixture("shift_b.json"), "--eta", "0.3"],
        vec!["stability", &w, "--eta", "0.3"],
    ]
    .iter()
    .map(|v| v.iter().map(|s| s.to_string()).collect())
    .collect();
    for args in &runs {
        let once = || Command::new(bin).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (once()?, once()?);
        ensure(a.stdout == b.stdout && a.stderr == b.stderr && a.status == b.status, || {
            format!("output differs for {args:?}")
        })?;
        ensure(!a.stdout.is_empty(), || format!("no output for {args:?}"))?;
    }
    Ok(format!("{} command lines byte-identical across runs", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("AC1 worked example", worked_example),
        ("AC2 stability bound", stability),
        ("AC3 oracle equivalence", oracle_equivalence),
        ("AC4 dynamic graph axioms", dg_axioms),
        ("AC5 conditional independence", conditional_independence),
        ("AC6 bottleneck pseudo-metric", bottleneck_metric),
        ("AC7 indexing-set invariance", indexing_invariance),
        ("AC8 CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name} ({secs:.2}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({secs:.2}s): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
