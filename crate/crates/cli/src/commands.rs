use std::fs;
use std::path::Path;

use adhm_core::adhm::{
    act, assemble_a, constraint_residual, gauge_fix, sample_valid, stabilizer_dim, tangent_dims, verify_equivalence,
    AdhmConfig, AdhmParams, SampleOutcome, Strategy, TangentDims,
};
use adhm_core::lattice::{chi_line, moduli_dim_formulas, monad_dims, DivisorClass};
use adhm_core::monad::{
    build_monad, build_monad_with_b, check_monad_condition, cohomology_ch_check, fiber_data, framing_criteria,
    singular_scan, surjectivity_scan, MonadRep, ScanPlan,
};
use adhm_core::rational::q;
use adhm_core::sections::SurfacePoint;
use adhm_core::{Error, Matrix};
use anyhow::Context;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{ConfigFile, WitnessFile};
use crate::report;

/// Global flags shared by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub exact_below: Option<usize>,
}

pub struct Outcome {
    pub report: Value,
    pub text: Option<String>,
    pub code: u8,
}

impl Outcome {
    fn new(body: Map<String, Value>, code: u8) -> Self {
        Outcome { report: report::finish(body), text: None, code }
    }
}

impl Settings {
    fn seed_for(&self, file: Option<&ConfigFile>) -> u64 {
        self.seed.or(file.and_then(|f| f.seed)).unwrap_or(0)
    }

    fn plan(&self, file: Option<&ConfigFile>) -> ScanPlan {
        let seed = self.seed_for(file);
        let mut plan = match file {
            Some(f) => f.scan_plan(seed),
            None => ScanPlan { seed, ..ScanPlan::default() },
        };
        if let Some(s) = self.samples {
            plan.generic_samples = s;
            plan.per_divisor_samples = s;
        }
        if let Some(e) = self.exact_below {
            plan.exact_below_dim = e;
        }
        plan
    }
}

pub fn load_config(path: &Path) -> anyhow::Result<(ConfigFile, AdhmConfig)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = ConfigFile::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    let cfg = file.to_config().with_context(|| format!("checking {}", path.display()))?;
    Ok((file, cfg))
}

fn params_json(p: &AdhmParams) -> Value {
    json!({"r": p.r, "a": p.a, "k": p.k})
}

pub fn dims(r: i64, a: &[i64], k: i64) -> anyhow::Result<Outcome> {
    let d = match monad_dims(r, a, k) {
        Ok(d) => d,
        Err(e @ Error::InfeasibleParameters(_)) => {
            let mut body = Map::new();
            body.insert("feasible".into(), json!(false));
            body.insert("reason".into(), json!(e.to_string()));
            let mut out = Outcome::new(body, 2);
            out.text = Some(format!("infeasible: {e}"));
            return Ok(out);
        }
        Err(e) => return Err(e.into()),
    };
    let mut body = Map::new();
    body.insert("feasible".into(), json!(true));
    body.insert("params".into(), json!({"r": r, "a": a, "k": k}));
    body.insert("dims".into(), report::dims(&d));
    let mut out = Outcome::new(body, 0);
    out.text = Some(report::dims_text(&d));
    Ok(out)
}

pub fn chi(p: i64, qs: &[i64]) -> anyhow::Result<Outcome> {
    let x = chi_line(&DivisorClass::new(p, qs.to_vec()))?;
    let mut body = Map::new();
    body.insert("p".into(), json!(p));
    body.insert("q".into(), json!(qs));
    body.insert("chi".into(), report::rational(&x));
    let mut out = Outcome::new(body, 0);
    out.text = Some(x.to_string());
    Ok(out)
}

fn det_nonzero(cfg: &AdhmConfig) -> anyhow::Result<bool> {
    Ok(assemble_a(cfg)?.det()? != q(0))
}

/// Monad with derived b, or with b = 0 when a is singular (b does not enter α, nor β on l∞).
fn monad_for(cfg: &AdhmConfig, det_nonzero: bool) -> anyhow::Result<MonadRep> {
    if det_nonzero {
        return Ok(build_monad(cfg)?);
    }
    let (l0, l) = (cfg.dims.dim_l[0], cfg.dims.total_l());
    Ok(build_monad_with_b(cfg, &[Matrix::zeros(l0, l), Matrix::zeros(l0, l)])?)
}

fn spot_points(cfg: &AdhmConfig, singular: &[SurfacePoint], seed: u64) -> Vec<SurfacePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7370_6f74);
    let mut pts = singular.to_vec();
    let mut generic = 0;
    while generic < 3 {
        let (x, y) = (q(rng.gen_range(-60..60)), q(rng.gen_range(-60..60)));
        let p = SurfacePoint::Generic([x.clone(), y.clone(), q(1)]);
        if cfg.points.centre_at(&x, &y).is_none() && !pts.contains(&p) {
            pts.push(p);
            generic += 1;
        }
    }
    for i in 1..=cfg.n() {
        pts.push(SurfacePoint::Exceptional(i, [q(1), q(rng.gen_range(-20..20))]));
    }
    pts.push(SurfacePoint::Generic([q(1), q(rng.gen_range(-20..20)), q(0)]));
    pts
}

fn validation_body(cfg: &AdhmConfig, plan: &ScanPlan) -> anyhow::Result<(Map<String, Value>, bool)> {
    let mut body = Map::new();
    let det_nonzero = det_nonzero(cfg)?;
    body.insert("params".into(), params_json(&cfg.params));
    body.insert("dims".into(), report::dims(&cfg.dims));
    body.insert("det_a_nonzero".into(), json!(det_nonzero));

    let m = monad_for(cfg, det_nonzero)?;
    let (mut raw_zero, mut compact_zero, mut identity_zero) = (Value::Null, Value::Null, Value::Null);
    let mut nonzero = Vec::new();
    if det_nonzero {
        let res = constraint_residual(cfg)?;
        raw_zero = json!(res.raw_is_zero());
        compact_zero = json!(res.compact.is_zero());
        identity_zero = json!(check_monad_condition(&m)?.is_zero());
        nonzero = res
            .raw
            .iter()
            .filter(|c| !c.matrix.is_zero())
            .map(|c| json!({"row_block": c.row_block, "col_block": c.col_block, "monomial": c.monomial}))
            .collect();
    }
    body.insert("raw_residual_zero".into(), raw_zero.clone());
    body.insert("compact_residual_zero".into(), compact_zero.clone());
    body.insert("monad_identity_zero".into(), identity_zero.clone());
    body.insert("raw_residual_nonzero_terms".into(), Value::Array(nonzero));

    let verdict = framing_criteria(&m, cfg, plan.seed)?;
    body.insert("framing".into(), report::framing(&verdict));

    let (singular, finite) = match singular_scan(&m, plan) {
        Ok(s) => (Some(s), true),
        Err(Error::NotInP(_)) => (None, false),
        Err(e) => return Err(e.into()),
    };
    body.insert("singular_locus_finite".into(), json!(finite));
    let singular_points = singular.as_ref().map(|s| s.points.clone()).unwrap_or_default();
    body.insert("singular_points".into(), Value::Array(singular_points.iter().map(report::point).collect()));
    body.insert("singular_scan".into(), singular.as_ref().map(report::scan).unwrap_or(Value::Null));

    let beta_ok = match surjectivity_scan(&m, plan) {
        Ok(s) => {
            let ok = s.points.is_empty();
            body.insert("beta_degenerate_points".into(), Value::Array(s.points.iter().map(report::point).collect()));
            ok
        }
        Err(Error::NotInP(_)) => {
            body.insert("beta_degenerate_points".into(), Value::Null);
            false
        }
        Err(e) => return Err(e.into()),
    };
    body.insert("beta_surjective".into(), json!(beta_ok));

    let spot: Vec<Value> = spot_points(cfg, &singular_points, plan.seed)
        .iter()
        .map(|x| match fiber_data(&m, x) {
            Ok(f) => report::fiber(&f),
            Err(e) => json!({"point": report::point(x), "error": e.to_string()}),
        })
        .collect();
    body.insert("fiber_spotchecks".into(), Value::Array(spot));

    let ch = match cohomology_ch_check(&cfg.dims, &cfg.params) {
        Ok(ch) => json!({"ok": true, "ch": report::chern(&ch)}),
        Err(e) => json!({"ok": false, "error": e.to_string()}),
    };
    body.insert("ch_check".into(), ch);

    let stab = gauge_fix(cfg).and_then(|g| stabilizer_dim(&g));
    body.insert("stabilizer_dim".into(), stab.map(|s| json!(s)).unwrap_or(Value::Null));
    body.insert("scan_plan".into(), report::plan(plan));

    let valid = det_nonzero
        && raw_zero == json!(true)
        && compact_zero == json!(true)
        && identity_zero == json!(true)
        && finite
        && beta_ok;
    body.insert("valid".into(), json!(valid));
    Ok((body, valid))
}

pub fn validate(path: &Path, s: &Settings) -> anyhow::Result<Outcome> {
    let (file, cfg) = load_config(path)?;
    let (body, valid) = validation_body(&cfg, &s.plan(Some(&file)))?;
    Ok(Outcome::new(body, if valid { 0 } else { 2 }))
}

pub fn scan(path: &Path, s: &Settings) -> anyhow::Result<Outcome> {
    let (file, cfg) = load_config(path)?;
    let plan = s.plan(Some(&file));
    let det_nonzero = det_nonzero(&cfg)?;
    let m = monad_for(&cfg, det_nonzero)?;
    let mut body = Map::new();
    let mut code = 0;
    match singular_scan(&m, &plan) {
        Ok(r) => {
            body.insert("alpha".into(), report::scan(&r));
        }
        Err(e @ Error::NotInP(_)) => {
            body.insert("alpha".into(), json!({"finite": false, "error": e.to_string()}));
            code = 2;
        }
        Err(e) => return Err(e.into()),
    }
    match surjectivity_scan(&m, &plan) {
        Ok(r) => {
            if !r.points.is_empty() {
                code = 2;
            }
            body.insert("beta".into(), report::scan(&r));
        }
        Err(e @ Error::NotInP(_)) => {
            body.insert("beta".into(), json!({"finite": false, "error": e.to_string()}));
            code = 2;
        }
        Err(e) => return Err(e.into()),
    }
    body.insert("scan_plan".into(), report::plan(&plan));
    Ok(Outcome::new(body, code))
}

fn sample_body(out: &SampleOutcome, seed: u64) -> Map<String, Value> {
    let mut body = Map::new();
    body.insert("params".into(), params_json(&out.config.params));
    body.insert("seed".into(), json!(seed));
    body.insert("strategy".into(), json!(out.strategy.to_string()));
    body.insert("attempts".into(), json!(out.attempts));
    body.insert("log".into(), json!(out.log));
    let cfg = serde_json::to_value(ConfigFile::from_config(&out.config, Some(seed))).expect("config serializes");
    body.insert("config".into(), cfg);
    body
}

fn failure_body(params: &AdhmParams, seed: u64, err: &Error) -> Map<String, Value> {
    let mut body = Map::new();
    body.insert("params".into(), params_json(params));
    body.insert("seed".into(), json!(seed));
    body.insert("sampling_failure".into(), json!(err.to_string()));
    body
}

pub fn sample(params: AdhmParams, strategy: Strategy, out: Option<&Path>, s: &Settings) -> anyhow::Result<Outcome> {
    params.dims()?;
    let plan = s.plan(None);
    match sample_valid(&params, plan.seed, strategy, None, &plan) {
        Ok(o) => {
            if let Some(path) = out {
                let file = ConfigFile::from_config(&o.config, Some(plan.seed));
                fs::write(path, file.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(Outcome::new(sample_body(&o, plan.seed), 0))
        }
        Err(e @ Error::SamplingFailure(_)) => Ok(Outcome::new(failure_body(&params, plan.seed, &e), 3)),
        Err(e) => Err(e.into()),
    }
}

fn formulas_json(t: &TangentDims, params: &AdhmParams) -> Map<String, Value> {
    let (weighted, rank_free) = moduli_dim_formulas(params.r as i64, &params.a, params.k);
    let verdict = match (t.empirical == weighted, t.empirical == rank_free) {
        (true, true) => "matches both formulas",
        (true, false) => "matches rank-weighted formula",
        (false, true) => "matches rank-free formula",
        (false, false) => "matches neither formula",
    };
    let mut body = Map::new();
    body.insert("empirical".into(), json!(t.empirical));
    body.insert("formulas".into(), json!({"rank_weighted": weighted, "rank_free": rank_free}));
    body.insert("formulas_disagree".into(), json!(weighted != rank_free));
    body.insert("matches_rank_weighted".into(), json!(t.empirical == weighted));
    body.insert("matches_rank_free".into(), json!(t.empirical == rank_free));
    body.insert("verdict".into(), json!(verdict));
    body.insert("tangent".into(), serde_json::to_value(t).expect("tangent serializes"));
    body
}

pub enum TangentSource<'a> {
    File(&'a Path),
    Sample(AdhmParams, Strategy),
}

pub fn tangent(src: TangentSource<'_>, s: &Settings) -> anyhow::Result<Outcome> {
    let mut extra = Map::new();
    let cfg = match src {
        TangentSource::File(path) => load_config(path)?.1,
        TangentSource::Sample(params, strategy) => {
            params.dims()?;
            let plan = s.plan(None);
            match sample_valid(&params, plan.seed, strategy, None, &plan) {
                Ok(o) => {
                    extra.insert("strategy".into(), json!(o.strategy.to_string()));
                    extra.insert("seed".into(), json!(plan.seed));
                    o.config
                }
                Err(e @ Error::SamplingFailure(_)) => {
                    return Ok(Outcome::new(failure_body(&params, plan.seed, &e), 3));
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    let t = tangent_dims(&gauge_fix(&cfg)?)?;
    let mut body = formulas_json(&t, &cfg.params);
    body.insert("params".into(), params_json(&cfg.params));
    body.extend(extra);
    let text = format!(
        "empirical {}; rank-weighted {}; rank-free {}; {}",
        body["empirical"], body["formulas"]["rank_weighted"], body["formulas"]["rank_free"],
        body["verdict"].as_str().unwrap_or_default()
    );
    let mut out = Outcome::new(body, 0);
    out.text = Some(text);
    Ok(out)
}

pub fn orbit(witness: &Path, c1: &Path, c2: Option<&Path>) -> anyhow::Result<Outcome> {
    let (_, cfg1) = load_config(c1)?;
    let text = fs::read_to_string(witness).with_context(|| format!("reading {}", witness.display()))?;
    let el = WitnessFile::parse(&text)?.to_element(&cfg1)?;
    let mut body = Map::new();
    match c2 {
        Some(path) => {
            let (_, cfg2) = load_config(path)?;
            el.check(&cfg1)?;
            let eq = verify_equivalence(&cfg1, &cfg2, &el);
            body.insert("equivalent".into(), json!(eq));
            let mut out = Outcome::new(body, if eq { 0 } else { 2 });
            out.text = Some(eq.to_string());
            Ok(out)
        }
        None => {
            let moved = act(&el, &cfg1)?;
            body.insert("config".into(), serde_json::to_value(ConfigFile::from_config(&moved, None))?);
            Ok(Outcome::new(body, 0))
        }
    }
}

/// Full report for one configuration: validation plus tangent dimensions.
pub fn report_config(path: &Path, s: &Settings) -> anyhow::Result<Outcome> {
    let (file, cfg) = load_config(path)?;
    let (mut body, valid) = validation_body(&cfg, &s.plan(Some(&file)))?;
    let tangent = gauge_fix(&cfg).and_then(|g| tangent_dims(&g));
    body.insert(
        "moduli".into(),
        match tangent {
            Ok(t) => Value::Object(formulas_json(&t, &cfg.params)),
            Err(e) => json!({"error": e.to_string()}),
        },
    );
    Ok(Outcome::new(body, if valid { 0 } else { 2 }))
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub max_r: usize,
    pub max_n: usize,
    pub max_k: i64,
    pub a_values: Vec<i64>,
}

impl Grid {
    pub fn instances(&self) -> Vec<AdhmParams> {
        let mut vectors: Vec<Vec<i64>> = vec![vec![]];
        let mut all = vec![vec![]];
        for _ in 0..self.max_n {
            vectors = vectors
                .iter()
                .flat_map(|v| self.a_values.iter().map(move |&x| [v.clone(), vec![x]].concat()))
                .collect();
            all.extend(vectors.iter().cloned());
        }
        let mut out = Vec::new();
        for r in 1..=self.max_r {
            for a in &all {
                for k in 0..=self.max_k {
                    if monad_dims(r as i64, a, k).is_ok() {
                        out.push(AdhmParams::new(r, a.clone(), k));
                    }
                }
            }
        }
        out
    }
}

fn grid_row(params: &AdhmParams, plan: &ScanPlan) -> Value {
    let head = json!({"r": params.r, "a": params.a, "k": params.k});
    let sampled = match sample_valid(params, plan.seed, Strategy::Auto, None, plan) {
        Ok(o) => o,
        Err(Error::SamplingFailure(_)) => return json!({"params": head, "status": "sampling-failure"}),
        Err(e) => return json!({"params": head, "status": "error", "error": e.to_string()}),
    };
    match gauge_fix(&sampled.config).and_then(|g| tangent_dims(&g)) {
        Ok(t) => {
            let mut row = formulas_json(&t, params);
            row.insert("params".into(), head);
            row.insert("status".into(), json!("solved"));
            row.insert("strategy".into(), json!(sampled.strategy.to_string()));
            Value::Object(row)
        }
        Err(e) => json!({"params": head, "status": "error", "error": e.to_string()}),
    }
}

/// Moduli dimension over a parameter grid; rows are computed in parallel and kept in grid order.
pub fn report_grid(grid: &Grid, s: &Settings) -> anyhow::Result<Outcome> {
    let plan = s.plan(None);
    let rows: Vec<Value> = grid.instances().par_iter().map(|p| grid_row(p, &plan)).collect();
    let solved: Vec<&Value> = rows.iter().filter(|r| r["status"] == "solved").collect();
    let all_match = solved.iter().all(|r| r["matches_rank_weighted"] == true);
    let disagreements: Vec<Value> = solved
        .iter()
        .filter(|r| r["matches_rank_free"] == false)
        .map(|r| r["params"].clone())
        .collect();
    let errors = rows.iter().filter(|r| r["status"] == "error").count();
    let mut body = Map::new();
    body.insert("grid".into(), json!({"max_r": grid.max_r, "max_n": grid.max_n, "max_k": grid.max_k, "a_values": grid.a_values}));
    body.insert("instances".into(), json!(rows.len()));
    body.insert("solved".into(), json!(solved.len()));
    body.insert("sampling_failures".into(), json!(rows.iter().filter(|r| r["status"] == "sampling-failure").count()));
    body.insert("errors".into(), json!(errors));
    body.insert("all_solved_match_rank_weighted".into(), json!(all_match));
    body.insert("rank_free_disagreements".into(), Value::Array(disagreements));
    body.insert("rows".into(), Value::Array(rows));
    body.insert("scan_plan".into(), report::plan(&plan));
    let code = if !all_match { 2 } else if errors > 0 { 1 } else { 0 };
    Ok(Outcome::new(body, code))
}
