//! Deterministic JSON reports: sorted keys, integers and rationals as strings.

use crate::coxcat::{
    AssignedElement, BatteryCheck, ChartCheck, EndAlgebra, ExceptionalVerdict, LineBundleDiagnostic, TransformReport,
};
use crate::divisor::Class;
use crate::exactlin::{Dim, Int};
use crate::gkz::{Cell, SecondaryFan};
use crate::io::{jclass, jint, jints, jrat, jrats};
use crate::monads::{render_matrix, ComplexVerdict, RestrictedComplex, Strand, ThetaComplex, VanishingReport};
use crate::theta::{SharpenedReport, ThetaElement};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Envelope shared by every command.
pub fn envelope(command: &str, input: &[u8], flags: Value, result: Value, certificates: Value) -> Value {
    json!({
        "command": command,
        "input_digest": digest(input),
        "flags": flags,
        "result": result,
        "certificates": certificates,
        "version": VERSION,
    })
}

/// Pretty JSON with a trailing newline; key order is sorted by serde_json's map.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

pub fn fmt_class(c: &[Int]) -> String {
    format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

pub fn jdim(d: &Dim) -> Value {
    match d {
        Dim::Finite(n) => Value::String(n.to_string()),
        Dim::Infinite => Value::String("infinite".into()),
    }
}

pub fn jdims(v: &[Dim]) -> Value {
    Value::Array(v.iter().map(jdim).collect())
}

fn jcell(c: &Cell) -> Value {
    match c {
        Cell::Chamber(i) => json!({ "chamber": i }),
        Cell::Face(f) => json!({ "face": f }),
    }
}

pub fn theta_element(e: &ThetaElement) -> Value {
    json!({ "class": jclass(&e.class), "divisor": jints(&e.divisor), "witness": jrats(&e.witness) })
}

pub fn assigned(e: &AssignedElement) -> Value {
    let mut v = theta_element(&e.element);
    let m = v.as_object_mut().expect("object");
    m.insert("chamber".into(), json!(e.chamber));
    m.insert("cell".into(), jcell(&e.cell));
    m.insert(
        "agreement".into(),
        Value::Array(e.agreement.iter().map(|(a, b, ok)| json!({"chambers": [a, b], "agree": ok})).collect()),
    );
    v
}

pub fn secondary_fan(g: &SecondaryFan) -> Value {
    let chambers: Vec<Value> = g
        .chambers
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "sample": jclass(&c.sample),
                "rays": c.rays.iter().map(|r| jints(r)).collect::<Vec<_>>(),
                "cones": c.fan.cones,
                "irrelevant_generators": c.irrelevant,
                "inequalities": c.inequalities.iter().map(|h| jrats(h)).collect::<Vec<_>>(),
                "face": c.face,
            })
        })
        .collect();
    let faces: Vec<Value> = g
        .faces
        .iter()
        .map(|f| {
            json!({
                "id": f.id,
                "dim": f.dim,
                "sample": jclass(&f.sample),
                "rays": f.rays.iter().map(|r| jints(r)).collect::<Vec<_>>(),
                "chambers": f.chambers,
                "chamber": f.chamber,
                "lineality": f.data.lineality.iter().map(|r| jints(r)).collect::<Vec<_>>(),
                "quotient_dim": f.data.quotient_dim(),
                "quotient_rays": f.data.quotient_rays.iter().map(|r| jints(r)).collect::<Vec<_>>(),
                "quotient_cones": f.data.quotient_cones,
                "contracted": f.data.contracted,
            })
        })
        .collect();
    json!({
        "degrees": g.degrees.iter().map(|d| jints(d)).collect::<Vec<_>>(),
        "hyperplanes": g.hyperplanes.iter().map(|h| jints(h)).collect::<Vec<_>>(),
        "chambers": chambers,
        "faces": faces,
        "walls": g.walls.iter().map(|(a, b, f)| json!({"chambers": [a, b], "face": f})).collect::<Vec<_>>(),
    })
}

pub fn algebra(a: &EndAlgebra) -> Value {
    let homs: Vec<Value> = a
        .homs
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(
                        |h| json!({"dim": jdim(&h.dim), "basis": h.basis.iter().map(|b| jints(b)).collect::<Vec<_>>()}),
                    )
                    .collect(),
            )
        })
        .collect();
    json!({ "order": a.order, "classes": a.classes.iter().map(jclass).collect::<Vec<_>>(), "homs": homs })
}

pub fn verdict(v: &ExceptionalVerdict) -> Value {
    json!({
        "ordered": v.ordered,
        "pairs_checked": v.pairs_checked,
        "end_is_field": v.end_is_field,
        "triangular": v.triangular,
        "ext_vanishes": v.ext_vanishes,
        "h0_matches": v.h0_matches,
        "violations": v.violations,
        "pass": v.pass,
        "pairs": v.pairs.iter().map(|p| json!({
            "source": p.source, "target": p.target, "chamber": p.chamber,
            "cohomology": jdims(&p.cohomology), "algebra": jdim(&p.algebra), "pass": p.pass,
        })).collect::<Vec<_>>(),
    })
}

fn opt_point(p: &Option<Vec<Int>>) -> Value {
    p.as_ref().map_or(Value::Null, |x| jints(x))
}

pub fn chart(c: &ChartCheck) -> Value {
    json!({
        "cone": c.cone,
        "recession_equal": c.recession_equal,
        "missing": opt_point(&c.missing),
        "extra": opt_point(&c.extra),
        "boxes": c.boxes.iter().map(|(lo, hi)| json!([jints(lo), jints(hi)])).collect::<Vec<_>>(),
        "pass": c.pass,
    })
}

fn battery(b: &BatteryCheck) -> Value {
    json!({ "twist": jclass(&b.twist), "cohomology": jdims(&b.dims), "predicted_h0": jdim(&b.predicted_h0), "pass": b.pass })
}

pub fn transform(t: &TransformReport) -> Value {
    let star = t.star.as_ref().map_or(Value::Null, |s| {
        json!({
            "theta_in_pd": s.theta_in_pd,
            "facets": s.facets.iter().map(|(r, ok)| json!({"ray": r, "pass": ok})).collect::<Vec<_>>(),
            "weights_checked": s.weights_checked,
            "nonconvex_seen": s.nonconvex_seen,
            "pass": s.pass,
        })
    });
    json!({
        "source": t.source,
        "target": t.target,
        "class": jclass(&t.class),
        "charts": t.charts.iter().map(chart).collect::<Vec<_>>(),
        "star": star,
        "battery": t.battery.iter().map(battery).collect::<Vec<_>>(),
        "pass": t.pass,
    })
}

pub fn diagnostic(d: &LineBundleDiagnostic) -> Value {
    json!({
        "source": d.source,
        "target": d.target,
        "class": jclass(&d.class),
        "charts": d.charts.iter().map(chart).collect::<Vec<_>>(),
        "probes": d.probes.iter().map(|(t, h)| json!({"twist": jclass(t), "cohomology": jdims(h)})).collect::<Vec<_>>(),
        "smaller_semigroup": d.smaller_semigroup,
        "higher_nonzero": d.higher_nonzero,
        "pass": d.pass,
    })
}

pub fn sharpened(s: &SharpenedReport) -> Value {
    let certs: Vec<Value> = s
        .certificates
        .iter()
        .map(|c| {
            json!({
                "class": jclass(&c.class),
                "terms": c.terms.iter().map(|layer| layer.iter().map(|t| json!({
                    "subset": t.subset, "class": jclass(&t.class), "in_theta": t.in_theta, "level": jrat(&t.level),
                })).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "all_in_theta": c.all_in_theta,
                "descending": c.descending,
            })
        })
        .collect();
    json!({
        "collection": s.collection.rays,
        "circuit": jints(&s.collection.circuit),
        "functional": jrats(&s.functional),
        "closed_generators": s.closed_generators.iter().map(|g| jints(g)).collect::<Vec<_>>(),
        "open_generators": s.open_generators.iter().map(|g| jints(g)).collect::<Vec<_>>(),
        "removable": s.removable.iter().map(jclass).collect::<Vec<_>>(),
        "remaining": s.remaining.iter().map(jclass).collect::<Vec<_>>(),
        "koszul": certs,
    })
}

pub fn complex_terms(c: &ThetaComplex) -> Value {
    let mut m = Map::new();
    for (k, ts) in &c.terms {
        m.insert(
            k.to_string(),
            Value::Array(
                ts.iter().map(|s| json!({"class": jclass(&s.class), "multiplicity": s.multiplicity})).collect(),
            ),
        );
    }
    Value::Object(m)
}

pub fn complex_verdict(v: &ComplexVerdict) -> Value {
    json!({ "valid": v.valid, "composites_checked": v.composites_checked, "violations": v.violations })
}

pub fn restricted(r: &RestrictedComplex, names: &[String]) -> Value {
    let mut terms = Map::new();
    for (k, ts) in &r.terms {
        terms.insert(
            k.to_string(),
            Value::Array(
                ts.iter()
                    .map(|s| {
                        json!({"source": s.source, "class": jclass(&s.class), "multiplicity": s.multiplicity, "label": jclass(&s.label)})
                    })
                    .collect(),
            ),
        );
    }
    let mut diffs = Map::new();
    for (k, m) in &r.differentials {
        diffs.insert(k.to_string(), json!(render_matrix(m, names)));
    }
    json!({
        "face": r.face,
        "quotient_dim": r.space.dim,
        "quotient_rays": r.space.rays.iter().map(|x| jints(x)).collect::<Vec<_>>(),
        "terms": terms,
        "differentials": diffs,
        "dropped": r.dropped.iter().map(|(k, i)| json!({"degree": k, "summand": i})).collect::<Vec<_>>(),
        "d_squared_zero": r.d_squared_zero,
    })
}

/// "O ← O(-2)^3 ← O(-3)^2" style rendering, highest degree first.
pub fn restricted_shape(r: &RestrictedComplex) -> String {
    let parts: Vec<String> = r
        .shape()
        .iter()
        .rev()
        .map(|(_, t)| {
            t.iter()
                .map(|(c, m)| {
                    let base = if r.space.cl.is_none() {
                        "k".to_string()
                    } else if c.iter().all(|x| *x == Int::from(0)) {
                        "O".to_string()
                    } else {
                        format!("O{}", fmt_class(c))
                    };
                    if *m == 1 {
                        base
                    } else {
                        format!("{base}^{m}")
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" <- ")
    }
}

fn jmap(m: &std::collections::BTreeMap<i64, usize>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect())
}

pub fn strand(s: &Strand) -> Value {
    json!({ "dims": jmap(&s.dims), "ranks": jmap(&s.ranks), "cohomology": jmap(&s.cohomology), "characteristic": s.characteristic })
}

pub fn vanishing(v: &VanishingReport) -> Value {
    json!({
        "offending_degrees": v.offending,
        "pass": v.pass,
        "faces": v.faces.iter().map(|f| json!({
            "face": f.face, "quotient_dim": f.quotient_dim,
            "positive_survivors": f.positive_survivors, "ranks": jmap(&f.ranks),
        })).collect::<Vec<_>>(),
    })
}

pub fn class_list(v: &[Class]) -> Value {
    Value::Array(v.iter().map(jclass).collect())
}

pub fn int_value(v: &Int) -> Value {
    jint(v)
}
