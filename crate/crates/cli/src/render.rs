//! Text and JSON renderings. Every function returns the complete stdout,
//! newline-terminated.

use std::fmt::Write;

use serde_json::{json, Value};
use twolocal_core::algebra::terms_to_string;
use twolocal_core::derivation::{DerivationSpace, Extension, LeibnizReport};
use twolocal_core::two_local::{AdditivityReport, PairVerdict, RigidityTrace, Witness, WitnessCertificate};
use twolocal_core::{Algebra, Element, JacobiReport, Subspace, Window};

use crate::Format;

fn json_out(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn basis_strings(s: &Subspace) -> Vec<String> {
    s.basis().iter().map(terms_to_string).collect()
}

fn subspace_line(s: &Subspace) -> String {
    let basis = if s.is_zero() {
        "none".to_string()
    } else {
        basis_strings(s).join(", ")
    };
    format!("dim={}; basis: {basis}", s.dim())
}

fn subspace_json(s: &Subspace) -> Value {
    json!({"dim": s.dim(), "basis": basis_strings(s)})
}

pub fn bracket(format: Format, x: &Element, y: &Element, r: &Element) -> String {
    match format {
        Format::Text => format!("{r}\n"),
        Format::Json => json_out(json!({
            "algebra": r.algebra().name(),
            "x": x.to_string(),
            "y": y.to_string(),
            "bracket": r.to_string(),
        })),
    }
}

pub fn jacobi(format: Format, alg: Algebra, w: Window, report: &JacobiReport) -> String {
    match (format, report) {
        (Format::Text, JacobiReport::Pass { triples }) => format!("pass ({triples} triples)\n"),
        (
            Format::Text,
            JacobiReport::Fail {
                triple: (i, j, k),
                residual,
            },
        ) => {
            format!("fail: triple ({i}, {j}, {k}); residual {}\n", terms_to_string(residual))
        }
        (Format::Json, JacobiReport::Pass { triples }) => json_out(json!({
            "algebra": alg.name(),
            "window": {"min": w.min, "max": w.max},
            "pass": true,
            "triples": triples,
        })),
        (
            Format::Json,
            JacobiReport::Fail {
                triple: (i, j, k),
                residual,
            },
        ) => json_out(json!({
            "algebra": alg.name(),
            "window": {"min": w.min, "max": w.max},
            "pass": false,
            "triple": [i, j, k],
            "residual": terms_to_string(residual),
        })),
    }
}

pub fn leibniz(format: Format, depth: i64, report: &LeibnizReport) -> String {
    match (format, report) {
        (Format::Text, LeibnizReport::Pass { pairs }) => format!("pass ({pairs} pairs)\n"),
        (Format::Text, LeibnizReport::Fail { pair: (i, j), residual }) => {
            format!("fail: pair ({i}, {j}); residual {residual}\n")
        }
        (Format::Json, LeibnizReport::Pass { pairs }) => {
            json_out(json!({"depth": depth, "pass": true, "pairs": pairs}))
        }
        (Format::Json, LeibnizReport::Fail { pair: (i, j), residual }) => json_out(json!({
            "depth": depth,
            "pass": false,
            "pair": [i, j],
            "residual": residual.to_string(),
        })),
    }
}

pub fn extension(format: Format, out: &Extension) -> String {
    match (format, out) {
        (Format::Text, Extension::Consistent(d)) => json_out(d.to_json()),
        (Format::Text, Extension::Inconsistent(rep)) => format!("inconsistent: {rep}\n"),
        (Format::Json, Extension::Consistent(d)) => json_out(json!({"consistent": true, "map": d.to_json()})),
        (Format::Json, Extension::Inconsistent(rep)) => json_out(json!({
            "consistent": false,
            "relation": [rep.pair.0, rep.pair.1],
            "target": rep.pair.0 + rep.pair.1,
            "residual": rep.residual.to_string(),
        })),
    }
}

fn coordinate_row(space: &DerivationSpace, v: &twolocal_core::SparseVector) -> Vec<String> {
    (0..space.coordinates.len() as i64)
        .map(|c| v.get(c).to_string())
        .collect()
}

/// `inner` carries, per basis vector, the recovered element or the reason
/// recovery failed (positive Witt only).
pub fn derivation_space(format: Format, space: &DerivationSpace, inner: Option<&[Result<Element, String>]>) -> String {
    let labels: Vec<String> = space.coordinates.iter().map(ToString::to_string).collect();
    let rows: Vec<Vec<String>> = space.basis.basis().iter().map(|b| coordinate_row(space, b)).collect();
    let inner_str = |r: &Result<Element, String>| match r {
        Ok(a) => a.to_string(),
        Err(m) => format!("not a derivation: {m}"),
    };
    match format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "algebra: {}", space.algebra).unwrap();
            writeln!(s, "support: {}", space.support_bound).unwrap();
            writeln!(s, "depth: {}", space.depth).unwrap();
            writeln!(s, "coordinates: {}", labels.join(" ")).unwrap();
            writeln!(s, "dim={}", space.dim()).unwrap();
            writeln!(s, "basis:").unwrap();
            for (n, row) in rows.iter().enumerate() {
                write!(s, "  [{}]", row.join(", ")).unwrap();
                if let Some(inner) = inner {
                    write!(s, "  a = {}", inner_str(&inner[n])).unwrap();
                }
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let mut v = json!({
                "algebra": space.algebra.name(),
                "support": space.support_bound,
                "depth": space.depth,
                "coordinates": labels,
                "dim": space.dim(),
                "basis": rows,
            });
            if let Some(inner) = inner {
                v["inner"] = inner.iter().map(inner_str).collect();
            }
            json_out(v)
        }
    }
}

pub fn recovered(format: Format, out: Result<&Element, &str>) -> String {
    match (format, out) {
        (Format::Text, Ok(a)) => format!("a = {a}\n"),
        (Format::Text, Err(m)) => format!("not a derivation: {m}\n"),
        (Format::Json, Ok(a)) => json_out(json!({"derivation": true, "inner": a.to_string()})),
        (Format::Json, Err(m)) => json_out(json!({"derivation": false, "reason": m})),
    }
}

pub fn centralizer(format: Format, c: &Subspace) -> String {
    match format {
        Format::Text => format!("{}\n", subspace_line(c)),
        Format::Json => json_out(subspace_json(c)),
    }
}

pub fn rigidity(format: Format, t: &RigidityTrace, predicted: Option<&Element>) -> String {
    let probe_names: Vec<String> = t.probes.iter().map(|p| format!("e_{p}")).collect();
    match format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "target: {}", t.target).unwrap();
            writeln!(s, "probes: {}", probe_names.join(", ")).unwrap();
            for (name, f) in probe_names.iter().zip(&t.forced) {
                writeln!(s, "forced[{name}]: {}", subspace_line(f)).unwrap();
            }
            writeln!(s, "intersection: {}", subspace_line(&t.intersection)).unwrap();
            writeln!(s, "rigid: {}", t.is_rigid()).unwrap();
            if let Some(p) = predicted {
                writeln!(s, "delta(x) = baseline(x) = {p}").unwrap();
            }
            s
        }
        Format::Json => {
            let forced: Vec<Value> = t
                .probes
                .iter()
                .zip(&t.forced)
                .map(|(p, f)| {
                    let mut v = subspace_json(f);
                    v["probe"] = json!(p);
                    v
                })
                .collect();
            let mut v = json!({
                "algebra": t.algebra.name(),
                "target": t.target.to_string(),
                "probes": t.probes,
                "forced": forced,
                "intersection": subspace_json(&t.intersection),
                "rigid": t.is_rigid(),
            });
            if let Some(p) = predicted {
                v["predicted"] = json!(p.to_string());
            }
            json_out(v)
        }
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Inner(a) => format!("ad({a})"),
        Witness::Derivation(d) => {
            let img = |k| d.image(k).map(ToString::to_string).unwrap_or_default();
            format!("D(e_1) = {}, D(e_2) = {} (truncation {})", img(1), img(2), d.window())
        }
    }
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Inner(a) => json!(a.to_string()),
        Witness::Derivation(d) => d.to_json(),
    }
}

pub fn pair_reports(format: Format, results: &[(WitnessCertificate, PairVerdict)]) -> String {
    let passed = results.iter().filter(|(_, v)| v.passed()).count();
    match format {
        Format::Text => {
            let mut s = String::new();
            for (n, (c, v)) in results.iter().enumerate() {
                writeln!(
                    s,
                    "pair {}: x = {}; y = {}; case {}; witness {}; {}",
                    n + 1,
                    c.x,
                    c.y,
                    c.case,
                    witness_text(&c.witness),
                    if v.passed() { "pass" } else { "FAIL" }
                )
                .unwrap();
                if !v.passed() {
                    writeln!(s, "  residuals: x {}, y {}", v.x_residual, v.y_residual).unwrap();
                }
            }
            writeln!(s, "passed {passed}/{}", results.len()).unwrap();
            s
        }
        Format::Json => {
            let items: Vec<Value> = results
                .iter()
                .map(|(c, v)| {
                    json!({
                        "x": c.x.to_string(),
                        "y": c.y.to_string(),
                        "case": c.case.number(),
                        "swapped": matches!(c.case, twolocal_core::two_local::WitnessCase::GeneratorShift { swapped: true }),
                        "witness": witness_json(&c.witness),
                        "pass": v.passed(),
                        "x_residual": v.x_residual.to_string(),
                        "y_residual": v.y_residual.to_string(),
                    })
                })
                .collect();
            json_out(json!({
                "algebra": "thin",
                "pairs": items,
                "passed": passed,
                "total": results.len(),
            }))
        }
    }
}

pub fn additivity(format: Format, x: &Element, y: &Element, r: &AdditivityReport) -> String {
    match format {
        Format::Text => format!(
            "x = {x}\ny = {y}\ndelta(x+y) = {}\ndelta(x)+delta(y) = {}\nresidual = {}\nviolated = {}\n",
            r.image_of_sum,
            r.sum_of_images,
            r.residual,
            r.violated()
        ),
        Format::Json => json_out(json!({
            "x": x.to_string(),
            "y": y.to_string(),
            "delta_of_sum": r.image_of_sum.to_string(),
            "sum_of_deltas": r.sum_of_images.to_string(),
            "residual": r.residual.to_string(),
            "violated": r.violated(),
        })),
    }
}
