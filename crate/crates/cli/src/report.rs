//! JSON rendering of exact data. Objects are `serde_json::Map`, which keeps keys sorted.

use adhm_core::lattice::{ChernCharacter, MonadDims};
use adhm_core::monad::{FiberData, FramingVerdict, ScanPlan, ScanResult};
use adhm_core::rational::format_rational;
use adhm_core::sections::SurfacePoint;
use adhm_core::Q;
use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;

pub fn rational(x: &Q) -> Value {
    Value::String(format_rational(x))
}

pub fn point(x: &SurfacePoint) -> Value {
    match x {
        SurfacePoint::Generic(z) => json!({"kind": "generic", "coords": z.iter().map(rational).collect::<Vec<_>>()}),
        SurfacePoint::Exceptional(i, w) => {
            json!({"kind": "exceptional", "divisor": i, "coords": w.iter().map(rational).collect::<Vec<_>>()})
        }
    }
}

pub fn dims(d: &MonadDims) -> Value {
    json!({"K": d.dim_k, "L": d.dim_l, "W": d.rank_w, "total_K": d.total_k(), "total_L": d.total_l()})
}

pub fn dims_text(d: &MonadDims) -> String {
    let tuple = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("K=({}) L=({}) W={}", tuple(&d.dim_k), tuple(&d.dim_l), d.rank_w)
}

pub fn chern(ch: &ChernCharacter) -> Value {
    json!({
        "rank": ch.rank,
        "c1_line": rational(&ch.c1_line),
        "c1_exc": ch.c1_exc.iter().map(rational).collect::<Vec<_>>(),
        "pt": rational(&ch.pt),
    })
}

pub fn fiber(f: &FiberData) -> Value {
    json!({
        "point": point(&f.point),
        "rank_alpha": f.rank_alpha,
        "dim_ker_beta": f.dim_ker_beta,
        "fiber_dim": f.fiber_dim,
    })
}

pub fn framing(v: &FramingVerdict) -> Value {
    json!({
        "det_nonzero": v.det_nonzero,
        "fiber_trivialized": v.fiber_trivialized,
        "points_checked": v.points_checked,
        "agree": v.agree(),
    })
}

pub fn scan(s: &ScanResult) -> Value {
    json!({
        "points": s.points.iter().map(point).collect::<Vec<_>>(),
        "unresolved": s.unresolved,
        "exact": s.exact,
        "minors_used": s.minors_used,
        "lines_checked": s.lines_checked,
    })
}

pub fn plan(p: &ScanPlan) -> Value {
    serde_json::to_value(p).expect("plan serializes")
}

/// Adds `schema` to a report object.
pub fn finish(mut body: Map<String, Value>) -> Value {
    body.insert("schema".into(), json!(SCHEMA));
    Value::Object(body)
}

pub fn render(v: &Value, as_json: bool) -> String {
    if as_json {
        return serde_json::to_string_pretty(v).expect("value serializes");
    }
    match v {
        Value::Object(map) => map
            .iter()
            .filter(|(k, _)| k.as_str() != "schema")
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}
