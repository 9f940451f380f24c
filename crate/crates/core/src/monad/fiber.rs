use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use super::MonadRep;
use crate::adhm::{assemble_a, AdhmConfig, AdhmParams};
use crate::error::{Error, Result};
use crate::lattice::{ChernCharacter, DivisorClass, MonadDims};
use crate::matrix::Matrix;
use crate::rational::{q, Q};
use crate::sections::SurfacePoint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberData {
    pub point: SurfacePoint,
    pub rank_alpha: usize,
    pub dim_ker_beta: usize,
    pub fiber_dim: usize,
}

pub fn fiber_data(m: &MonadRep, x: &SurfacePoint) -> Result<FiberData> {
    let a = m.alpha.eval_at(x)?;
    let b = m.beta.eval_at(x)?;
    let rank_beta = b.rank();
    if rank_beta < m.dims.total_l() {
        return Err(Error::MonadDegeneracy(format!("{x:?}")));
    }
    if !(&b * &a).is_zero() {
        return Err(Error::InvalidConfig(format!("beta∘alpha does not vanish at {x:?}")));
    }
    let rank_alpha = a.rank();
    let dim_ker_beta = m.dims.rank_w - rank_beta;
    Ok(FiberData { point: x.clone(), rank_alpha, dim_ker_beta, fiber_dim: dim_ker_beta - rank_alpha })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FramingVerdict {
    pub det_nonzero: bool,
    pub fiber_trivialized: bool,
    pub points_checked: usize,
}

impl FramingVerdict {
    pub fn agree(&self) -> bool {
        self.det_nonzero == self.fiber_trivialized
    }
}

/// Points (1 : t : 0) for sampled t, plus (0 : 1 : 0).
pub fn line_at_infinity_points(count: usize, seed: u64) -> Vec<SurfacePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c69_6e66);
    let mut out = vec![SurfacePoint::Generic([Q::zero(), Q::one(), Q::zero()])];
    while out.len() < count {
        let t = Q::new(rng.gen_range(-500i64..500).into(), rng.gen_range(1i64..50).into());
        let p = SurfacePoint::Generic([Q::one(), t, Q::zero()]);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// C^r ⊂ ker β(x) and C^r maps isomorphically onto ker β(x)/im α(x).
fn trivialized_at(m: &MonadRep, x: &SurfacePoint) -> Result<bool> {
    let a = m.alpha.eval_at(x)?;
    let b = m.beta.eval_at(x)?;
    if b.rank() < m.dims.total_l() {
        return Ok(false);
    }
    let off = m.c_offset();
    let iota = Matrix::from_fn(m.dims.rank_w, m.r, |i, j| if i == off + j { Q::one() } else { Q::zero() });
    if !(&b * &iota).is_zero() {
        return Ok(false);
    }
    let rank_a = a.rank();
    let fiber = m.dims.rank_w - b.rank() - rank_a;
    let joint = Matrix::hstack(&[&a, &iota]).rank();
    Ok(fiber == m.r && joint == rank_a + m.r)
}

pub fn framing_criteria(m: &MonadRep, cfg: &AdhmConfig, seed: u64) -> Result<FramingVerdict> {
    let det_nonzero = !assemble_a(cfg)?.det()?.is_zero();
    let pts = line_at_infinity_points(10, seed);
    let mut ok = true;
    for x in &pts {
        if !trivialized_at(m, x)? {
            ok = false;
            break;
        }
    }
    Ok(FramingVerdict { det_nonzero, fiber_trivialized: ok, points_checked: pts.len() })
}

/// Both framing criteria; their disagreement is reported as an internal failure.
pub fn framing_check(m: &MonadRep, cfg: &AdhmConfig) -> Result<bool> {
    let v = framing_criteria(m, cfg, 0)?;
    if !v.agree() {
        return Err(Error::Internal(format!(
            "framing criteria disagree: det {} vs fiber {}",
            v.det_nonzero, v.fiber_trivialized
        )));
    }
    Ok(v.det_nonzero)
}

/// ch(W) − Σ dimKᵢ·ch(O(−1,Eᵢ)) − Σ dimLᵢ·ch(O(1,−Eᵢ)), checked against r + ΣaᵢEᵢ − (k+|a|²/2)ω.
pub fn cohomology_ch_check(dims: &MonadDims, params: &AdhmParams) -> Result<ChernCharacter> {
    let n = params.n();
    if dims.n() != n {
        return Err(Error::Dimension("dims and params disagree on n".into()));
    }
    let mut ch = ChernCharacter::zero(n);
    ch.rank = dims.rank_w as i64;
    for i in 0..=n {
        let e = if i == 0 { DivisorClass::zero(n) } else { DivisorClass::exceptional(n, i) };
        let kd = &DivisorClass::new(-1, vec![0; n]) + &e;
        let ld = &DivisorClass::line(n) - &e;
        ch = ch.add(&ChernCharacter::of_line_bundle(&kd).scale(-(dims.dim_k[i] as i64)));
        ch = ch.add(&ChernCharacter::of_line_bundle(&ld).scale(-(dims.dim_l[i] as i64)));
    }
    let expect = ChernCharacter::of_sheaf(params.r as i64, 0, &params.a, params.k);
    if ch != expect {
        return Err(Error::Internal(format!("Chern character mismatch: {ch:?} vs {expect:?}")));
    }
    debug_assert_eq!(ch.c1_line, q(0));
    Ok(ch)
}
