//! ADHM configurations: block assembly, constraints, gauge fixing, group action, sampling, tangent spaces.

pub(crate) mod group;
pub(crate) mod sample;
mod tangent;

pub use group::{act, dim_group, stabilizer_dim, verify_equivalence, GroupElement};
pub use sample::{default_points, sample_config, sample_valid, SampleOutcome, Strategy};
pub use tangent::{tangent_dims, TangentDims};

use std::sync::Arc;


use crate::error::{Error, Result};
use crate::lattice::{monad_dims, MonadDims};
use crate::matrix::Matrix;
use crate::monad::{build_monad, check_monad_condition, raw_coefficients, RawCoefficient};
use crate::rational::Q;
use crate::sections::BlowupPoints;

/// Sign of the quadratic term in the compact constraint.
pub const COMPACT_SIGN: i64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdhmParams {
    pub r: usize,
    pub a: Vec<i64>,
    pub k: i64,
}

impl AdhmParams {
    pub fn new(r: usize, a: Vec<i64>, k: i64) -> Self {
        AdhmParams { r, a, k }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn dims(&self) -> Result<MonadDims> {
        monad_dims(self.r as i64, &self.a, self.k)
    }
}

/// Matrices are stored as maps source → target, i.e. target-dim × source-dim.
/// Vectors indexed by blow-up point hold block i at position i−1; `c_a` holds blocks 0..=n.
#[derive(Clone, Debug, PartialEq)]
pub struct AdhmConfig {
    pub params: AdhmParams,
    pub dims: MonadDims,
    pub points: Arc<BlowupPoints>,
    pub a00: Matrix,
    pub a0i: Vec<Matrix>,
    pub ai0: Vec<Matrix>,
    pub aii: Vec<Matrix>,
    pub a_a00: [Matrix; 2],
    pub c: Matrix,
    pub d: Matrix,
    pub c_a: Option<[Vec<Matrix>; 2]>,
}

/// Lowered pair: x₀ = −x¹, x₁ = x⁰.
pub fn lower(x: &[Matrix; 2]) -> [Matrix; 2] {
    [-&x[1], x[0].clone()]
}

/// Contraction x^A y_A = x¹y⁰ − x⁰y¹ for matrix-valued pairs.
pub fn contract(x: &[Matrix; 2], y: &[Matrix; 2]) -> Matrix {
    &(&x[1] * &y[0]) - &(&x[0] * &y[1])
}

impl AdhmConfig {
    pub fn zeros(params: AdhmParams, points: Arc<BlowupPoints>) -> Result<Self> {
        let dims = params.dims()?;
        if points.n() != params.n() {
            return Err(Error::Dimension(format!("{} points for n = {}", points.n(), params.n())));
        }
        let (k, l, r, n) = (&dims.dim_k, &dims.dim_l, params.r, params.n());
        Ok(AdhmConfig {
            a00: Matrix::zeros(l[0], k[0]),
            a0i: (1..=n).map(|i| Matrix::zeros(l[0], k[i])).collect(),
            ai0: (1..=n).map(|i| Matrix::zeros(l[i], k[0])).collect(),
            aii: (1..=n).map(|i| Matrix::zeros(l[i], k[i])).collect(),
            a_a00: [Matrix::zeros(l[0], k[0]), Matrix::zeros(l[0], k[0])],
            c: Matrix::zeros(r, k[0]),
            d: Matrix::zeros(l[0], r),
            c_a: None,
            params,
            dims,
            points,
        })
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn r(&self) -> usize {
        self.params.r
    }

    pub fn check_shapes(&self) -> Result<()> {
        let (k, l, r, n) = (&self.dims.dim_k, &self.dims.dim_l, self.params.r, self.n());
        if self.params.dims()? != self.dims {
            return Err(Error::Dimension("dims do not match params".into()));
        }
        if self.points.n() != n {
            return Err(Error::Dimension(format!("{} points for n = {n}", self.points.n())));
        }
        let want = |name: &str, m: &Matrix, rows: usize, cols: usize| -> Result<()> {
            if m.shape() != (rows, cols) {
                return Err(Error::Dimension(format!("{name} is {:?}, expected {rows}x{cols}", m.shape())));
            }
            Ok(())
        };
        want("a00", &self.a00, l[0], k[0])?;
        for (name, v) in [("a0i", &self.a0i), ("ai0", &self.ai0), ("aii", &self.aii)] {
            if v.len() != n {
                return Err(Error::Dimension(format!("{name} has {} blocks, expected {n}", v.len())));
            }
        }
        for i in 1..=n {
            want(&format!("a0{i}"), &self.a0i[i - 1], l[0], k[i])?;
            want(&format!("a{i}0"), &self.ai0[i - 1], l[i], k[0])?;
            want(&format!("a{i}{i}"), &self.aii[i - 1], l[i], k[i])?;
        }
        want("aA00[0]", &self.a_a00[0], l[0], k[0])?;
        want("aA00[1]", &self.a_a00[1], l[0], k[0])?;
        want("c", &self.c, r, k[0])?;
        want("d", &self.d, l[0], r)?;
        if let Some(ca) = &self.c_a {
            for (a, blocks) in ca.iter().enumerate() {
                if blocks.len() != n + 1 {
                    return Err(Error::Dimension(format!("cA[{a}] has {} blocks, expected {}", blocks.len(), n + 1)));
                }
                for (i, b) in blocks.iter().enumerate() {
                    want(&format!("cA[{a}][{i}]"), b, r, k[i])?;
                }
            }
        }
        Ok(())
    }

    /// Gauge-normalized: no c^A and every aᵢ₀ is the identity.
    pub fn is_normalized(&self) -> bool {
        self.c_a.as_ref().map_or(true, |ca| ca.iter().all(|v| v.iter().all(|m| m.is_zero())))
            && self.ai0.iter().all(|m| m.is_identity())
    }

    /// pᵢ^A.
    pub fn p(&self, i: usize, a: usize) -> &Q {
        &self.points.point(i)[a]
    }

    /// diag(0, p₁^A·Id, …, pₙ^A·Id) on ⊕Kᵢ.
    pub fn p_k(&self, a: usize) -> Matrix {
        let nk = self.dims.total_k();
        let mut m = Matrix::zeros(nk, nk);
        for i in 1..=self.n() {
            let off = self.dims.k_offset(i);
            for j in 0..self.dims.dim_k[i] {
                m.set(off + j, off + j, self.p(i, a).clone());
            }
        }
        m
    }

    /// (a⁰₀₀, a¹₀₀, 0, …) as maps ⊕K → L₀.
    fn a_upper_full(&self, a: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dims.dim_l[0], self.dims.total_k());
        m.set_block(0, 0, &self.a_a00[a]);
        m
    }

    /// c^A as a map ⊕K → C^r (zero when absent).
    pub fn c_upper_full(&self, a: usize) -> Matrix {
        let mut m = Matrix::zeros(self.r(), self.dims.total_k());
        if let Some(ca) = &self.c_a {
            for (i, b) in ca[a].iter().enumerate() {
                m.set_block(0, self.dims.k_offset(i), b);
            }
        }
        m
    }
}

pub fn assemble_a(cfg: &AdhmConfig) -> Result<Matrix> {
    cfg.check_shapes()?;
    let dims = &cfg.dims;
    let mut a = Matrix::zeros(dims.total_l(), dims.total_k());
    a.set_block(0, 0, &cfg.a00);
    for i in 1..=cfg.n() {
        let (ro, co) = (dims.l_offset(i), dims.k_offset(i));
        a.set_block(0, co, &cfg.a0i[i - 1]);
        a.set_block(ro, 0, &cfg.ai0[i - 1]);
        a.set_block(ro, co, &cfg.aii[i - 1]);
    }
    Ok(a)
}

pub fn inverse_a(cfg: &AdhmConfig) -> Result<Matrix> {
    assemble_a(cfg)?.inverse().ok_or(Error::FramingViolation)
}

/// b^A = (a^A − a₀•p^A − d·c^A)·a⁻¹ as maps ⊕L → L₀.
pub fn derive_b(cfg: &AdhmConfig) -> Result<[Matrix; 2]> {
    let a = assemble_a(cfg)?;
    let inv = a.inverse().ok_or(Error::FramingViolation)?;
    let row0 = a.block(0, 0, cfg.dims.dim_l[0], cfg.dims.total_k());
    let one = |x: usize| -> Matrix {
        let rhs = &(&cfg.a_upper_full(x) - &(&row0 * &cfg.p_k(x))) - &(&cfg.d * &cfg.c_upper_full(x));
        &rhs * &inv
    };
    Ok([one(0), one(1)])
}

/// Row-block view (b^A₀₀, b^A₀₁, …, b^A₀ₙ).
pub fn derive_b_blocks(cfg: &AdhmConfig) -> Result<[Vec<Matrix>; 2]> {
    let b = derive_b(cfg)?;
    let split = |m: &Matrix| -> Vec<Matrix> {
        (0..=cfg.n()).map(|i| m.block(0, cfg.dims.l_offset(i), m.rows(), cfg.dims.dim_l[i])).collect()
    };
    Ok([split(&b[0]), split(&b[1])])
}

pub fn assemble_q(cfg: &AdhmConfig) -> Result<[Matrix; 2]> {
    cfg.check_shapes()?;
    let dims = &cfg.dims;
    let one = |x: usize| -> Matrix {
        let mut q = Matrix::zeros(dims.total_l(), dims.total_k());
        q.set_block(0, 0, &-&cfg.a_a00[x]);
        for i in 1..=cfg.n() {
            let p = cfg.p(i, x);
            let (ro, co) = (dims.l_offset(i), dims.k_offset(i));
            q.set_block(0, co, &cfg.a0i[i - 1].scale(p));
            q.set_block(ro, 0, &cfg.ai0[i - 1].scale(p));
            q.set_block(ro, co, &cfg.aii[i - 1].scale(p));
        }
        q
    };
    Ok([one(0), one(1)])
}

/// σ·(q^A a⁻¹ q_A)⁰⁰ + dc, evaluated after removing any c^A.
pub fn compact_residual(cfg: &AdhmConfig) -> Result<Matrix> {
    let fixed;
    let cfg = if cfg.c_a.is_some() {
        fixed = remove_c_upper(cfg)?;
        &fixed
    } else {
        cfg
    };
    let inv = inverse_a(cfg)?;
    let q = assemble_q(cfg)?;
    let qa = [&q[0] * &inv, &q[1] * &inv];
    let full = contract(&qa, &q);
    let (l0, k0) = (cfg.dims.dim_l[0], cfg.dims.dim_k[0]);
    let quad = full.block(0, 0, l0, k0).scale(&Q::from_integer(COMPACT_SIGN.into()));
    Ok(&quad + &(&cfg.d * &cfg.c))
}

#[derive(Clone, Debug)]
pub struct ConstraintResidual {
    pub compact: Matrix,
    pub raw: Vec<RawCoefficient>,
}

impl ConstraintResidual {
    pub fn raw_is_zero(&self) -> bool {
        self.raw.iter().all(|r| r.matrix.is_zero())
    }
}

pub fn constraint_residual(cfg: &AdhmConfig) -> Result<ConstraintResidual> {
    let compact = compact_residual(cfg)?;
    let m = build_monad(cfg)?;
    let prod = check_monad_condition(&m)?;
    Ok(ConstraintResidual { compact, raw: raw_coefficients(&m, &prod) })
}

/// Applies the W-automorphism that clears every c^A.
fn remove_c_upper(cfg: &AdhmConfig) -> Result<AdhmConfig> {
    let mut out = cfg.clone();
    out.c_a = None;
    if cfg.c_a.is_none() {
        return Ok(out);
    }
    let inv = inverse_a(cfg)?;
    let q = assemble_q(cfg)?;
    let ql = lower(&q);
    let k0 = cfg.dims.dim_k[0];
    let mut c = cfg.c.clone();
    for x in 0..2 {
        let col0 = ql[x].block(0, 0, ql[x].rows(), k0);
        c = &c + &(&(&cfg.c_upper_full(x) * &inv) * &col0);
    }
    out.c = c;
    Ok(out)
}

pub fn gauge_fix(cfg: &AdhmConfig) -> Result<AdhmConfig> {
    cfg.check_shapes()?;
    let mut out = remove_c_upper(cfg)?;
    for i in 1..=cfg.n() {
        let g = out.ai0[i - 1]
            .inverse()
            .ok_or_else(|| Error::NonGenericStratum(format!("a{i}0")))?;
        out.aii[i - 1] = &g * &out.aii[i - 1];
        out.ai0[i - 1] = Matrix::identity(cfg.dims.dim_k[0]);
    }
    Ok(out)
}

pub fn is_constraint_valid(cfg: &AdhmConfig) -> Result<bool> {
    let res = constraint_residual(cfg)?;
    Ok(res.raw_is_zero())
}

#[cfg(test)]
pub(crate) mod tests;
