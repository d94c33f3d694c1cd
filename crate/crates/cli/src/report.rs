//! Text and JSON rendering of witness results and classification reports.

use std::fmt::Write as _;

use entvec::classify::{DimensionalityBound, EntanglementDepth, Evidence, KSeparability};
use entvec::normalform::FilterSet;
use entvec::WitnessResult;
use serde_json::{json, Value};

use crate::analysis::Analysis;

/// Rounds to 12 significant decimals and keeps a decimal point, so exact
/// values print as `1.0` rather than `0.9999999999999998`.
pub fn fmt_value(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = if x == 0.0 { 0 } else { x.abs().log10().floor() as i32 };
    let scale = 10f64.powi(11 - mag);
    let r = (x * scale).round() / scale;
    let s = format!("{r}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        s + ".0"
    }
}

pub fn witness_json(w: &WitnessResult<f64>) -> Value {
    let n = w.family.parties();
    json!({
        "value": w.value,
        "positive": w.is_positive(),
        "j": w.j,
        "family": w.family.labels(),
        "pairs": w.pairs.to_string(),
        "minimizing": w.minimizing.iter().map(|s| s.bipartition_label(n)).collect::<Vec<_>>(),
        "details": w.details.iter().map(|d| json!({
            "pair": format!("{}-{}", d.pair.0, d.pair.1),
            "coherence": d.coherence,
            "swapped": d.swapped_terms,
            "contribution": d.contribution,
        })).collect::<Vec<_>>(),
    })
}

fn evidence_json(e: &Evidence<f64>) -> Value {
    e.as_ref().map_or(Value::Null, witness_json)
}

pub fn witness_text(w: &WitnessResult<f64>) -> String {
    let mut out = String::new();
    let verdict = if w.is_positive() { "positive" } else { "not positive" };
    let _ = writeln!(out, "W_{} = {} ({verdict})", w.j, fmt_value(w.value));
    let _ = writeln!(out, "  R = {{{}}}", w.family);
    let _ = writeln!(out, "  C = {}", w.pairs);
    let _ = writeln!(out, "  minimizing subsets: {}", w.minimizing_labels().join(", "));
    for d in &w.details {
        let _ = writeln!(
            out,
            "  {}-{}: |coherence| = {}, contribution = {}",
            d.pair.0,
            d.pair.1,
            fmt_value(d.coherence),
            fmt_value(d.contribution)
        );
    }
    out
}

fn evidence_line(e: &Evidence<f64>) -> String {
    match e {
        Some(w) => format!("W = {}, C = {}", fmt_value(w.value), w.pairs),
        None => "no admissible coherence".into(),
    }
}

fn ksep_text(out: &mut String, ks: &KSeparability<f64>) {
    let _ = writeln!(out, "[ksep]");
    for l in &ks.levels {
        let _ = writeln!(out, "  k={} (j={}): {}", l.k, l.j, evidence_line(&l.evidence));
    }
    let strongest = ks.certified_k.and_then(|k| ks.levels.iter().find(|l| l.k == k)).and_then(|l| l.evidence.as_ref());
    match strongest {
        Some(w) => {
            let _ = writeln!(out, "  verdict: {}, W={}", ks.describe(), fmt_value(w.value));
        }
        None => {
            let _ = writeln!(out, "  verdict: {}", ks.describe());
        }
    }
}

fn ksep_json(ks: &KSeparability<f64>) -> Value {
    json!({
        "verdict": ks.describe(),
        "certified_k": ks.certified_k,
        "not_separable_at": ks.not_separable_at(),
        "gme": ks.is_gme(),
        "levels": ks.levels.iter().map(|l| json!({
            "k": l.k, "j": l.j, "certified": l.certified, "witness": evidence_json(&l.evidence),
        })).collect::<Vec<_>>(),
    })
}

fn depth_text(out: &mut String, d: &EntanglementDepth<f64>) {
    let _ = writeln!(out, "[depth]");
    for l in &d.levels {
        let _ = writeln!(
            out,
            "  m={} (|G|={}): {}{}",
            l.m,
            l.family.len(),
            evidence_line(&l.evidence),
            if l.certified { format!(" -> depth >= {}", l.implied_depth) } else { String::new() }
        );
    }
    let _ = writeln!(out, "  verdict: {}", d.describe());
}

fn depth_json(d: &EntanglementDepth<f64>) -> Value {
    json!({
        "verdict": d.describe(),
        "depth": d.depth,
        "levels": d.levels.iter().map(|l| json!({
            "m": l.m,
            "family": l.family.labels(),
            "certified": l.certified,
            "implied_depth": l.implied_depth,
            "witness": evidence_json(&l.evidence),
        })).collect::<Vec<_>>(),
    })
}

fn dimension_text(out: &mut String, d: &DimensionalityBound<f64>) {
    let _ = writeln!(out, "[dimension] R = {{{}}}", d.family);
    for l in &d.levels {
        let _ = writeln!(
            out,
            "  j={}: {}, S_2 >= {} bits, rank >= {}",
            l.j,
            evidence_line(&l.evidence),
            fmt_value(l.s2_bound),
            l.dimension
        );
    }
    let _ = writeln!(out, "  verdict: {}", d.describe());
}

fn dimension_json(d: &DimensionalityBound<f64>) -> Value {
    json!({
        "family": d.family.labels(),
        "dimensions": d.dimensions(),
        "s2_bounds": d.s2_bounds(),
        "levels": d.levels.iter().map(|l| json!({
            "j": l.j, "dimension": l.dimension, "s2_bound": l.s2_bound, "witness": evidence_json(&l.evidence),
        })).collect::<Vec<_>>(),
    })
}

pub fn filters_json(fs: &FilterSet<f64>) -> Value {
    json!({
        "steps": fs.steps,
        "flatness": fs.flatness,
        "converged": fs.converged,
        "filters": fs.operators().iter().map(|op| {
            (0..op.nrows()).map(|r| (0..op.ncols()).map(|c| [op[(r, c)].re, op[(r, c)].im]).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

pub fn filters_text(fs: &FilterSet<f64>) -> String {
    let mut out = String::new();
    let status = if fs.converged { "converged" } else { "NOT converged" };
    let _ = writeln!(out, "[normalform] {status} after {} sweeps, marginal flatness {:.3e}", fs.steps, fs.flatness);
    for (p, op) in fs.operators().iter().enumerate() {
        let rows: Vec<String> = (0..op.nrows())
            .map(|r| {
                let cells: Vec<String> = (0..op.ncols())
                    .map(|c| {
                        let z = op[(r, c)];
                        if z.im.abs() < 1e-14 {
                            format!("{:.6}", z.re)
                        } else {
                            format!("{:.6}{:+.6}i", z.re, z.im)
                        }
                    })
                    .collect();
                cells.join(" ")
            })
            .collect();
        let _ = writeln!(out, "  A_{} = [{}]", entvec::partitions::party_letter(p), rows.join("; "));
    }
    out
}

pub fn analysis_text(a: &Analysis) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "state: {} parties, dims {:?}", a.dims.parties(), a.dims.as_slice());
    if let Some(fs) = &a.filters {
        out += &filters_text(fs);
    }
    for v in &a.report.decomposability {
        let verdict = if v.not_decomposable { "not decomposable" } else { "no certificate" };
        let _ = writeln!(out, "[decompose] R = {{{}}}: {} -> {verdict}", v.family, evidence_line(&v.evidence));
        if let Some(w) = &v.evidence {
            let _ = writeln!(out, "  minimizing subsets: {}", w.minimizing_labels().join(", "));
        }
    }
    if let Some(ks) = &a.report.k_separability {
        ksep_text(&mut out, ks);
    }
    if let Some(d) = &a.report.depth {
        depth_text(&mut out, d);
    }
    if let Some(d) = &a.report.dimensionality {
        dimension_text(&mut out, d);
    }
    out
}

pub fn analysis_json(a: &Analysis) -> Value {
    json!({
        "dims": a.dims.as_slice(),
        "questions": a.questions.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "normal_form": a.filters.as_ref().map(filters_json),
        "decompose": a.report.decomposability.iter().map(|v| json!({
            "family": v.family.labels(),
            "not_decomposable": v.not_decomposable,
            "witness": evidence_json(&v.evidence),
        })).collect::<Vec<_>>(),
        "ksep": a.report.k_separability.as_ref().map(ksep_json),
        "depth": a.report.depth.as_ref().map(depth_json),
        "dimension": a.report.dimensionality.as_ref().map(dimension_json),
    })
}
