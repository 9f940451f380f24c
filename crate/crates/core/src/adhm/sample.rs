use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{assemble_a, assemble_q, compact_residual, is_constraint_valid, AdhmConfig, AdhmParams, COMPACT_SIGN};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::monad::{build_monad, singular_scan, surjectivity_scan, MonadRep, ScanPlan};
use crate::rational::{q, Q};
use crate::sections::{BlowupPoints, SurfacePoint};

const ATTEMPTS: u64 = 12;
const ENTRY_BOUND: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// n = 0: a₀₀ = Id, diagonal a^A, c = 0.
    Commuting,
    /// Random data, then d from d·c = −X (needs dim K₀ ≤ r).
    SolveD,
    /// κ = 0: no compact constraint.
    LineBundle,
    /// aᵢ₀ = Id and random data except (a⁰₀₀, d), which solve the affine compact constraint.
    LinearSlice { zero_c: bool },
    /// As `LinearSlice`, but with d random and (a⁰₀₀, c) solved for.
    SolveC,
    Auto,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Commuting => "commuting",
            Strategy::SolveD => "solve-d",
            Strategy::LineBundle => "line-bundle",
            Strategy::LinearSlice { zero_c: false } => "linear-slice",
            Strategy::LinearSlice { zero_c: true } => "linear-slice-zero-c",
            Strategy::SolveC => "solve-c",
            Strategy::Auto => "auto",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "commuting" => Strategy::Commuting,
            "solve-d" => Strategy::SolveD,
            "line-bundle" => Strategy::LineBundle,
            "linear-slice" => Strategy::LinearSlice { zero_c: false },
            "linear-slice-zero-c" => Strategy::LinearSlice { zero_c: true },
            "solve-c" => Strategy::SolveC,
            "auto" => Strategy::Auto,
            other => return Err(Error::Parse(format!("unknown strategy {other:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SampleOutcome {
    pub config: AdhmConfig,
    pub strategy: Strategy,
    pub attempts: usize,
    pub log: Vec<String>,
}

pub(crate) fn rand_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| q(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND)))
}

/// n distinct integer points, drawn from a box that grows with n.
pub fn default_points(n: usize, seed: u64) -> Arc<BlowupPoints> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x706f_696e);
    let bound = 2 + n as i64;
    let mut pts: Vec<[Q; 2]> = Vec::new();
    while pts.len() < n {
        let p = [q(rng.gen_range(-bound..=bound)), q(rng.gen_range(-bound..=bound))];
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    Arc::new(BlowupPoints::new(pts).expect("distinct points"))
}

pub(crate) fn random_normalized(params: &AdhmParams, points: &Arc<BlowupPoints>, rng: &mut ChaCha8Rng) -> Result<AdhmConfig> {
    let mut cfg = AdhmConfig::zeros(params.clone(), points.clone())?;
    let (l, k) = (cfg.dims.dim_l.clone(), cfg.dims.dim_k.clone());
    cfg.a00 = rand_matrix(l[0], k[0], rng);
    for i in 1..=cfg.n() {
        cfg.a0i[i - 1] = rand_matrix(l[0], k[i], rng);
        cfg.aii[i - 1] = rand_matrix(l[i], k[i], rng);
        cfg.ai0[i - 1] = Matrix::identity(k[0]);
    }
    cfg.a_a00 = [rand_matrix(l[0], k[0], rng), rand_matrix(l[0], k[0], rng)];
    cfg.c = rand_matrix(params.r, k[0], rng);
    cfg.d = rand_matrix(l[0], params.r, rng);
    Ok(cfg)
}

fn commuting(params: &AdhmParams, points: &Arc<BlowupPoints>, rng: &mut ChaCha8Rng) -> Result<AdhmConfig> {
    if params.n() != 0 {
        return Err(Error::InfeasibleParameters("commuting sampler needs n = 0".into()));
    }
    let mut cfg = AdhmConfig::zeros(params.clone(), points.clone())?;
    let k = cfg.dims.dim_k[0];
    cfg.a00 = Matrix::identity(k);
    let mut seen: Vec<(i64, i64)> = Vec::new();
    while seen.len() < k {
        let p = (rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND), rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND));
        if !seen.contains(&p) {
            seen.push(p);
        }
    }
    for (j, (x, y)) in seen.into_iter().enumerate() {
        cfg.a_a00[0].set(j, j, q(x));
        cfg.a_a00[1].set(j, j, q(y));
    }
    cfg.d = rand_matrix(cfg.dims.dim_l[0], params.r, rng);
    Ok(cfg)
}

fn solve_d(params: &AdhmParams, points: &Arc<BlowupPoints>, rng: &mut ChaCha8Rng) -> Result<AdhmConfig> {
    let mut cfg = random_normalized(params, points, rng)?;
    if cfg.dims.dim_k[0] > params.r {
        return Err(Error::InfeasibleParameters(format!("solve-d needs dim K0 = {} <= r", cfg.dims.dim_k[0])));
    }
    cfg.d = Matrix::zeros(cfg.dims.dim_l[0], params.r);
    let x = compact_residual(&cfg)?;
    let dt = cfg
        .c
        .transpose()
        .solve(&(-&x.transpose()))
        .ok_or_else(|| Error::SamplingFailure("c is not of full rank".into()))?;
    cfg.d = dt.transpose();
    Ok(cfg)
}

fn line_bundle(params: &AdhmParams, points: &Arc<BlowupPoints>, rng: &mut ChaCha8Rng) -> Result<AdhmConfig> {
    let cfg = random_normalized(params, points, rng)?;
    if cfg.dims.dim_k[0] != 0 {
        return Err(Error::InfeasibleParameters("line-bundle sampler needs dim K0 = 0".into()));
    }
    Ok(cfg)
}

/// Which pair of unknowns the affine compact constraint is solved for.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Slice {
    /// (a⁰₀₀, d) with c random, or c = 0.
    SolveD { zero_c: bool },
    /// (a⁰₀₀, c) with d random.
    SolveC,
}

/// X = X₀ + σ(−R₁a⁰ + a⁰R₂) + dc, solved for a generic point of the affine solution space.
fn linear_slice(params: &AdhmParams, points: &Arc<BlowupPoints>, slice: Slice, rng: &mut ChaCha8Rng) -> Result<AdhmConfig> {
    let mut cfg = random_normalized(params, points, rng)?;
    let (l0, k0, r) = (cfg.dims.dim_l[0], cfg.dims.dim_k[0], params.r);
    if slice == (Slice::SolveD { zero_c: true }) {
        cfg.c = Matrix::zeros(r, k0);
    }
    cfg.a_a00[0] = Matrix::zeros(l0, k0);
    let fixed = match slice {
        Slice::SolveD { .. } => {
            cfg.d = Matrix::zeros(l0, r);
            cfg.c.clone()
        }
        Slice::SolveC => {
            cfg.c = Matrix::zeros(r, k0);
            cfg.d.clone()
        }
    };
    let inv = assemble_a(&cfg)?.inverse().ok_or_else(|| Error::SamplingFailure("a is singular".into()))?;
    let q1 = &assemble_q(&cfg)?[1];
    let r1 = (q1 * &inv).block(0, 0, l0, l0);
    let r2 = (&inv * q1).block(0, 0, k0, k0);
    let x0 = compact_residual(&cfg)?;
    let sigma = Q::from_integer(COMPACT_SIGN.into());
    let na = l0 * k0;
    let nvar = na + r * l0.max(k0);
    // row (i, j) of X; unknowns a⁰[p][s] at p·k0 + s, then d[p][t] at na + p·r + t or c[t][s] at na + t·k0 + s
    let mut sys = Matrix::zeros(l0 * k0, nvar);
    for i in 0..l0 {
        for j in 0..k0 {
            let row = i * k0 + j;
            for p in 0..l0 {
                let e = sys.entry_mut(row, p * k0 + j);
                *e -= &sigma * r1.get(i, p);
            }
            for s in 0..k0 {
                let e = sys.entry_mut(row, i * k0 + s);
                *e += &sigma * r2.get(s, j);
            }
            for t in 0..r {
                match slice {
                    Slice::SolveD { .. } => *sys.entry_mut(row, na + i * r + t) += fixed.get(t, j),
                    Slice::SolveC => *sys.entry_mut(row, na + t * k0 + j) += fixed.get(i, t),
                }
            }
        }
    }
    let rhs = Matrix::from_fn(l0 * k0, 1, |row, _| -x0.get(row / k0.max(1), row % k0.max(1)));
    let part = sys.solve(&rhs).ok_or_else(|| Error::SamplingFailure("compact constraint has no solution on this slice".into()))?;
    let null = sys.nullspace();
    let coeffs = rand_matrix(null.cols(), 1, rng);
    let sol = &part + &(&null * &coeffs);
    cfg.a_a00[0] = Matrix::from_fn(l0, k0, |p, s| sol.get(p * k0 + s, 0).clone());
    match slice {
        Slice::SolveD { .. } => cfg.d = Matrix::from_fn(l0, r, |p, t| sol.get(na + p * r + t, 0).clone()),
        Slice::SolveC => cfg.c = Matrix::from_fn(r, k0, |t, s| sol.get(na + t * k0 + s, 0).clone()),
    }
    Ok(cfg)
}

fn candidate(
    params: &AdhmParams,
    points: &Arc<BlowupPoints>,
    strategy: Strategy,
    rng: &mut ChaCha8Rng,
) -> Result<AdhmConfig> {
    match strategy {
        Strategy::Commuting => commuting(params, points, rng),
        Strategy::SolveD => solve_d(params, points, rng),
        Strategy::LineBundle => line_bundle(params, points, rng),
        Strategy::LinearSlice { zero_c } => linear_slice(params, points, Slice::SolveD { zero_c }, rng),
        Strategy::SolveC => linear_slice(params, points, Slice::SolveC, rng),
        Strategy::Auto => unreachable!(),
    }
}

fn auto_order(params: &AdhmParams) -> Result<Vec<Strategy>> {
    let dims = params.dims()?;
    let mut out = Vec::new();
    if dims.dim_k[0] == 0 {
        out.push(Strategy::LineBundle);
    }
    if params.n() == 0 {
        out.push(Strategy::Commuting);
    }
    out.push(Strategy::SolveC);
    out.push(Strategy::LinearSlice { zero_c: false });
    out.push(Strategy::LinearSlice { zero_c: true });
    if dims.dim_k[0] <= params.r {
        out.push(Strategy::SolveD);
    }
    Ok(out)
}

/// Full rank of α and β at a random point of the plane.
fn generic_ranks_ok(m: &MonadRep, rng: &mut ChaCha8Rng) -> Result<bool> {
    let z = [q(rng.gen_range(-50..50)), q(rng.gen_range(-50..50)), q(1)];
    if m.ctx.centre_at(&z[0], &z[1]).is_some() {
        return Ok(false);
    }
    let x = SurfacePoint::Generic(z);
    let a = m.alpha.eval_at(&x)?;
    let b = m.beta.eval_at(&x)?;
    Ok(a.rank() == a.cols() && b.rank() == b.rows())
}

fn accept(cfg: &AdhmConfig, plan: Option<&ScanPlan>, rng: &mut ChaCha8Rng) -> Result<std::result::Result<(), String>> {
    if assemble_a(cfg)?.det()?.is_zero() {
        return Ok(Err("a is singular".into()));
    }
    if !compact_residual(cfg)?.is_zero() {
        return Ok(Err("compact constraint residual is non-zero".into()));
    }
    if !is_constraint_valid(cfg)? {
        return Ok(Err("monad condition fails".into()));
    }
    let m = build_monad(cfg)?;
    if !generic_ranks_ok(&m, rng)? {
        return Ok(Err("alpha or beta degenerate at a generic point".into()));
    }
    if let Some(plan) = plan {
        match singular_scan(&m, plan) {
            Ok(_) => {}
            Err(Error::NotInP(why)) => return Ok(Err(why)),
            Err(e) => return Err(e),
        }
        match surjectivity_scan(&m, plan) {
            Ok(s) if s.points.is_empty() && s.unresolved == 0 => {}
            Ok(s) => return Ok(Err(format!("beta not surjective at {} point(s)", s.points.len() + s.unresolved))),
            Err(Error::NotInP(why)) => return Ok(Err(why)),
            Err(e) => return Err(e),
        }
    }
    Ok(Ok(()))
}

fn run(
    params: &AdhmParams,
    seed: u64,
    strategy: Strategy,
    points: Option<Arc<BlowupPoints>>,
    plan: Option<&ScanPlan>,
) -> Result<SampleOutcome> {
    params.dims()?;
    let points = points.unwrap_or_else(|| default_points(params.n(), seed));
    if points.n() != params.n() {
        return Err(Error::Dimension(format!("{} points for n = {}", points.n(), params.n())));
    }
    let order = if strategy == Strategy::Auto { auto_order(params)? } else { vec![strategy] };
    let mut log = Vec::new();
    let mut attempts = 0;
    for s in order {
        for attempt in 0..ATTEMPTS {
            attempts += 1;
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(attempt));
            let cfg = match candidate(params, &points, s, &mut rng) {
                Ok(c) => c,
                Err(Error::InfeasibleParameters(why)) => {
                    log.push(format!("{s}: {why}"));
                    break;
                }
                Err(Error::SamplingFailure(why)) => {
                    log.push(format!("{s} attempt {attempt}: {why}"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            match accept(&cfg, plan, &mut rng)? {
                Ok(()) => return Ok(SampleOutcome { config: cfg, strategy: s, attempts, log }),
                Err(why) => log.push(format!("{s} attempt {attempt}: {why}")),
            }
        }
    }
    Err(Error::SamplingFailure(format!("no valid configuration after {attempts} attempts: {}", log.join("; "))))
}

/// Samples a configuration satisfying the constraints with a and the monad generically non-degenerate.
pub fn sample_config(
    params: &AdhmParams,
    seed: u64,
    strategy: Strategy,
    points: Option<Arc<BlowupPoints>>,
) -> Result<SampleOutcome> {
    run(params, seed, strategy, points, None)
}

/// As `sample_config`, additionally requiring a finite drop locus of α and β surjective everywhere.
pub fn sample_valid(
    params: &AdhmParams,
    seed: u64,
    strategy: Strategy,
    points: Option<Arc<BlowupPoints>>,
    plan: &ScanPlan,
) -> Result<SampleOutcome> {
    run(params, seed, strategy, points, Some(plan))
}
