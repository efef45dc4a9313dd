//! Byte-stable rendering of results as JSON, plain text and SVG.
//!
//! Numbers carry exactly nine fractional digits; infinities are written as
//! `inf` and `-inf`, and negative zero prints as zero.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Number, Value};

use crate::formigram::{Event, Formigram};
use crate::graph::{DynamicBayesianGraph, EdgeSet};
use crate::metrics::{Matching, StabilityReport};
use crate::partition::Partition;
use crate::strength::EdgeStrengthTable;
use crate::zigzag::Barcode;

pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let s = format!("{x:.9}");
    if s.starts_with('-') && s[1..].bytes().all(|c| c == b'0' || c == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// A JSON number with the fixed formatting, or the string token for
/// non-finite values.
pub fn num(x: f64) -> Value {
    let s = fmt_num(x);
    match Number::from_str(&s) {
        Ok(n) if x.is_finite() => Value::Number(n),
        _ => Value::String(s),
    }
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn block_names(block: &[usize], names: &[String]) -> Vec<String> {
    let mut v: Vec<String> = block.iter().map(|&x| names[x].clone()).collect();
    v.sort();
    v
}

/// Blocks as sorted name lists, ordered by smallest member index.
pub fn partition_names(p: &Partition, names: &[String]) -> Vec<Vec<String>> {
    p.blocks().iter().map(|b| block_names(b, names)).collect()
}

fn block_text(block: &[String]) -> String {
    format!("{{{}}}", block.join(", "))
}

pub fn strengths_json(t: &EdgeStrengthTable) -> Value {
    let rows: Vec<Value> = t
        .rows()
        .map(|(k, p, c, v)| json!({"slice": k, "parent": p, "child": c, "strength": num(v)}))
        .collect();
    json!({"divergence": t.divergence.token(), "rows": rows})
}

pub fn strengths_text(t: &EdgeStrengthTable) -> String {
    let mut s = format!("# divergence {}\nslice\tparent\tchild\tstrength\n", t.divergence.token());
    for (k, p, c, v) in t.rows() {
        let _ = writeln!(s, "{k}\t{p}\t{c}\t{}", fmt_num(v));
    }
    s
}

fn edge_list(e: &EdgeSet, names: &[String]) -> Vec<Vec<String>> {
    let mut v: Vec<Vec<String>> = e
        .edges()
        .map(|(a, b)| {
            let mut pair = vec![names[a].clone(), names[b].clone()];
            pair.sort();
            pair
        })
        .collect();
    v.sort();
    v
}

pub fn dbg_json(g: &DynamicBayesianGraph) -> Value {
    let slices: Vec<Value> = g
        .slice_edges
        .iter()
        .map(|e| json!(edge_list(e, &g.names)))
        .collect();
    let times: Vec<Value> = g.critical_times.iter().map(|&t| num(t)).collect();
    json!({
        "delta_t": num(g.delta_t),
        "eta": num(g.eta),
        "slices": slices,
        "critical_times": times,
    })
}

pub fn dbg_text(g: &DynamicBayesianGraph) -> String {
    let mut s = format!("delta_t {}\neta {}\n", fmt_num(g.delta_t), fmt_num(g.eta));
    for (k, e) in g.slice_edges.iter().enumerate() {
        let edges: Vec<String> = edge_list(e, &g.names).iter().map(|p| p.join("-")).collect();
        let _ = writeln!(s, "slice {k}: {}", edges.join(" "));
    }
    let times: Vec<String> = g.critical_times.iter().map(|&t| fmt_num(t)).collect();
    let _ = writeln!(s, "critical times: {}", times.join(" "));
    s
}

pub fn formigram_json(fg: &Formigram) -> Value {
    let pw = &fg.partitions;
    let mut parts = Map::new();
    for (i, p) in pw.at().iter().enumerate() {
        parts.insert(format!("crit_{i}"), json!(partition_names(p, &fg.names)));
    }
    for (i, p) in pw.between().iter().enumerate() {
        parts.insert(format!("interval_{i}"), json!(partition_names(p, &fg.names)));
    }
    let times: Vec<Value> = pw.points().iter().map(|&t| num(t)).collect();
    json!({"times": times, "partitions": parts})
}

pub fn formigram_text(fg: &Formigram) -> String {
    let pw = &fg.partitions;
    let mut s = String::new();
    let render = |p: &Partition| {
        partition_names(p, &fg.names)
            .iter()
            .map(|b| block_text(b))
            .collect::<Vec<_>>()
            .join(" ")
    };
    for (i, &t) in pw.points().iter().enumerate() {
        let _ = writeln!(s, "t = {}: {}", fmt_num(t), render(&pw.at()[i]));
        if let Some(g) = pw.between().get(i) {
            let _ = writeln!(
                s,
                "({}, {}): {}",
                fmt_num(t),
                fmt_num(pw.points()[i + 1]),
                render(g)
            );
        }
    }
    s
}

pub fn barcode_json(bc: &Barcode) -> Value {
    Value::Array(
        bc.bars()
            .iter()
            .map(|b| {
                json!({
                    "birth": num(b.birth),
                    "death": num(b.death),
                    "birth_closed": b.birth_closed,
                    "death_closed": b.death_closed,
                })
            })
            .collect(),
    )
}

pub fn barcode_text(bc: &Barcode) -> String {
    bc.bars().iter().map(|b| format!("{b}\n")).collect()
}

/// One horizontal bar per interval on an 800-wide canvas; open endpoints
/// are hollow circles and closed ones filled.
pub fn barcode_svg(bc: &Barcode, horizon: f64) -> String {
    let n = bc.len();
    let height = 40 + 20 * n;
    let x = |t: f64| 40.0 + 720.0 * if horizon > 0.0 { t / horizon } else { 0.0 };
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"{height}\" viewBox=\"0 0 800 {height}\">\n"
    );
    s.push_str("<rect width=\"800\" height=\"100%\" fill=\"white\"/>\n");
    for (i, b) in bc.bars().iter().enumerate() {
        let y = 20 + 20 * i;
        let (x0, x1) = (x(b.birth), x(b.death));
        let _ = writeln!(
            s,
            "<line x1=\"{x0:.3}\" y1=\"{y}\" x2=\"{x1:.3}\" y2=\"{y}\" stroke=\"black\" stroke-width=\"2\"/>"
        );
        for (cx, closed) in [(x0, b.birth_closed), (x1, b.death_closed)] {
            let fill = if closed { "black" } else { "white" };
            let _ = writeln!(
                s,
                "<circle cx=\"{cx:.3}\" cy=\"{y}\" r=\"4\" fill=\"{fill}\" stroke=\"black\"/>"
            );
        }
    }
    let axis = 20 + 20 * n;
    let _ = writeln!(
        s,
        "<line x1=\"40.000\" y1=\"{axis}\" x2=\"760.000\" y2=\"{axis}\" stroke=\"gray\"/>"
    );
    for (t, anchor) in [(0.0, "start"), (horizon, "end")] {
        let _ = writeln!(
            s,
            "<text x=\"{:.3}\" y=\"{}\" font-size=\"10\" text-anchor=\"{anchor}\">{}</text>",
            x(t),
            axis + 14,
            fmt_num(t)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn events_json(events: &[Event], names: &[String]) -> Value {
    let blocks = |bs: &[Vec<usize>]| -> Vec<Vec<String>> { bs.iter().map(|b| block_names(b, names)).collect() };
    Value::Array(
        events
            .iter()
            .map(|e| {
                json!({
                    "time": num(e.time),
                    "kind": e.kind.to_string(),
                    "blocks_before": blocks(&e.blocks_before),
                    "blocks_after": blocks(&e.blocks_after),
                })
            })
            .collect(),
    )
}

pub fn events_text(events: &[Event], names: &[String]) -> String {
    let side = |bs: &[Vec<usize>]| {
        bs.iter()
            .map(|b| block_text(&block_names(b, names)))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    events
        .iter()
        .map(|e| {
            format!(
                "t={} {}: {} -> {}\n",
                fmt_num(e.time),
                e.kind,
                side(&e.blocks_before),
                side(&e.blocks_after)
            )
        })
        .collect()
}

pub fn clusters_json(k: usize, t: f64, p: &Partition, names: &[String]) -> Value {
    json!({"slice": k, "time": num(t), "clusters": partition_names(p, names)})
}

pub fn clusters_text(k: usize, t: f64, p: &Partition, names: &[String]) -> String {
    let mut s = format!("# slice {k}, t = {}\n", fmt_num(t));
    for (c, b) in partition_names(p, names).iter().enumerate() {
        let _ = writeln!(s, "X_c({}) = {}", c + 1, block_text(b));
    }
    s
}

pub fn compare_json(a: &Barcode, b: &Barcode, m: &Matching) -> Value {
    let pairs: Vec<Value> = m
        .pairs
        .iter()
        .map(|&(i, j, c)| json!({"a": i, "b": j, "cost": num(c)}))
        .collect();
    let single = |v: &[(usize, f64)]| -> Vec<Value> {
        v.iter().map(|&(i, c)| json!({"index": i, "cost": num(c)})).collect()
    };
    json!({
        "bottleneck": num(m.cost),
        "interleaving_lower_bound": num(m.cost / 2.0),
        "matching": pairs,
        "unmatched_a": single(&m.unmatched_a),
        "unmatched_b": single(&m.unmatched_b),
        "barcode_a": barcode_json(a),
        "barcode_b": barcode_json(b),
    })
}

pub fn compare_text(a: &Barcode, b: &Barcode, m: &Matching) -> String {
    let mut s = format!(
        "bottleneck {}\ninterleaving_lower_bound {}\n",
        fmt_num(m.cost),
        fmt_num(m.cost / 2.0)
    );
    for &(i, j, c) in &m.pairs {
        let _ = writeln!(s, "match {} ~ {} cost {}", a.bars()[i], b.bars()[j], fmt_num(c));
    }
    for &(i, c) in &m.unmatched_a {
        let _ = writeln!(s, "unmatched a {} cost {}", a.bars()[i], fmt_num(c));
    }
    for &(j, c) in &m.unmatched_b {
        let _ = writeln!(s, "unmatched b {} cost {}", b.bars()[j], fmt_num(c));
    }
    s
}

pub fn stability_json(reports: &[StabilityReport]) -> Value {
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| json!({"eps": num(r.eps), "lhs": num(r.lhs), "bound": num(r.bound), "pass": r.pass}))
        .collect();
    json!({"all_pass": reports.iter().all(|r| r.pass), "checks": rows})
}

pub fn stability_text(reports: &[StabilityReport]) -> String {
    let mut s = String::from("eps\tlhs\tbound\tresult\n");
    for r in reports {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}",
            fmt_num(r.eps),
            fmt_num(r.lhs),
            fmt_num(r.bound),
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    s
}
