//! The monad ⊕Kᵢ(−1,Eᵢ) → W → ⊕Lᵢ(1,−Eᵢ) built from an ADHM configuration.

mod fiber;
mod scan;

pub use fiber::{cohomology_ch_check, fiber_data, framing_check, framing_criteria, FiberData, FramingVerdict};
pub use scan::{singular_scan, surjectivity_scan, ScanPlan, ScanResult};

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::adhm::{derive_b, AdhmConfig};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, MonadDims};
use crate::matrix::Matrix;
use crate::poly::HPoly;
use crate::rational::Q;
use crate::sections::{BlowupPoints, SectionPoly, SurfacePoint};

/// Matrix of sections; the slot (r, c) has bidegree row_degree[r] + col_degree[c].
#[derive(Clone, Debug, PartialEq)]
pub struct SectionMatrix {
    rows: usize,
    cols: usize,
    pub row_degree: Vec<DivisorClass>,
    pub col_degree: Vec<DivisorClass>,
    entries: Vec<HPoly>,
    ctx: Arc<BlowupPoints>,
}

impl SectionMatrix {
    pub fn zeros(row_degree: Vec<DivisorClass>, col_degree: Vec<DivisorClass>, ctx: &Arc<BlowupPoints>) -> Self {
        let (rows, cols) = (row_degree.len(), col_degree.len());
        SectionMatrix { rows, cols, row_degree, col_degree, entries: vec![HPoly::zero(); rows * cols], ctx: ctx.clone() }
    }

    /// Σ z_j·pencil[j].
    pub fn from_pencil(
        pencil: &[Matrix; 3],
        row_degree: Vec<DivisorClass>,
        col_degree: Vec<DivisorClass>,
        ctx: &Arc<BlowupPoints>,
    ) -> Self {
        let mut m = Self::zeros(row_degree, col_degree, ctx);
        for r in 0..m.rows {
            for c in 0..m.cols {
                m.entries[r * m.cols + c] =
                    HPoly::linear([pencil[0].get(r, c), pencil[1].get(r, c), pencil[2].get(r, c)]);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &Arc<BlowupPoints> {
        &self.ctx
    }

    pub fn poly(&self, r: usize, c: usize) -> &HPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn slot_degree(&self, r: usize, c: usize) -> DivisorClass {
        &self.row_degree[r] + &self.col_degree[c]
    }

    pub fn entry(&self, r: usize, c: usize) -> SectionPoly {
        SectionPoly::from_poly(self.slot_degree(r, c), self.poly(r, c).clone(), &self.ctx)
            .expect("entries match their slot bidegree")
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn validate(&self) -> Result<()> {
        for r in 0..self.rows {
            for c in 0..self.cols {
                SectionPoly::from_poly(self.slot_degree(r, c), self.poly(r, c).clone(), &self.ctx)?;
            }
        }
        Ok(())
    }

    pub fn mul(&self, o: &SectionMatrix) -> Result<SectionMatrix> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!("section matrices {}x{} and {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = SectionMatrix::zeros(self.row_degree.clone(), o.col_degree.clone(), &self.ctx);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.poly(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.poly(k, c);
                    if !b.is_zero() {
                        let idx = r * o.cols + c;
                        out.entries[idx] = out.entries[idx].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Values at a point using the slot frames of module sections.
    pub fn eval_at(&self, x: &SurfacePoint) -> Result<Matrix> {
        match x {
            SurfacePoint::Generic(z) => {
                if !z[2].is_zero() {
                    if let Some(i) = self.ctx.centre_at(&(&z[0] / &z[2]), &(&z[1] / &z[2])) {
                        return Err(Error::AmbiguousPoint(format!("p{i}")));
                    }
                }
                Ok(Matrix::from_fn(self.rows, self.cols, |r, c| self.poly(r, c).eval([&z[0], &z[1], &z[2]])))
            }
            SurfacePoint::Exceptional(i, w) => {
                if *i < 1 || *i > self.ctx.n() {
                    return Err(Error::IndexOutOfRange(format!("exceptional divisor E{i}")));
                }
                let p = self.ctx.point(*i);
                let mut out = Matrix::zeros(self.rows, self.cols);
                for r in 0..self.rows {
                    for c in 0..self.cols {
                        let poly = self.poly(r, c);
                        if poly.is_zero() {
                            continue;
                        }
                        let m = -(self.row_degree[r].q[i - 1] + self.col_degree[c].q[i - 1]);
                        if m < 0 {
                            continue;
                        }
                        let g = poly.along_line([&p[0], &p[1]], [&w[0], &w[1]]);
                        if g.ord().is_some_and(|o| (o as i64) < m) {
                            return Err(Error::MalformedSection(format!("vanishing order at p{i} below {m}")));
                        }
                        out.set(r, c, g.coeff(m as usize));
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn transpose(&self) -> SectionMatrix {
        let mut out = SectionMatrix::zeros(self.col_degree.clone(), self.row_degree.clone(), &self.ctx);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[c * self.rows + r] = self.poly(r, c).clone();
            }
        }
        out
    }
}

/// Basis element of W.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WBasis {
    /// j-th vector of copy A of Lᵢ.
    L { block: usize, copy: usize, index: usize },
    C(usize),
}

#[derive(Clone, Debug)]
pub struct MonadRep {
    pub alpha: SectionMatrix,
    pub beta: SectionMatrix,
    pub dims: MonadDims,
    pub r: usize,
    pub w_basis: Vec<WBasis>,
    pub ctx: Arc<BlowupPoints>,
}

impl MonadRep {
    pub fn c_offset(&self) -> usize {
        2 * self.dims.total_l()
    }
}

pub(crate) fn w_index(dims: &MonadDims, block: usize, copy: usize, index: usize) -> usize {
    2 * dims.l_offset(block) + copy * dims.dim_l[block] + index
}

pub(crate) fn w_basis(dims: &MonadDims, r: usize) -> Vec<WBasis> {
    let mut out = Vec::with_capacity(dims.rank_w);
    for block in 0..dims.dim_l.len() {
        for copy in 0..2 {
            for index in 0..dims.dim_l[block] {
                out.push(WBasis::L { block, copy, index });
            }
        }
    }
    out.extend((0..r).map(WBasis::C));
    out
}

type Form = [Q; 3];

fn zu(a: usize) -> Form {
    let mut f = [Q::zero(), Q::zero(), Q::zero()];
    f[a] = Q::one();
    f
}

/// z_A with z₀ = −z¹, z₁ = z⁰.
fn zl(a: usize) -> Form {
    if a == 0 {
        [Q::zero(), -Q::one(), Q::zero()]
    } else {
        [Q::one(), Q::zero(), Q::zero()]
    }
}

/// w^{iA} = z^A − pᵢ^A z².
fn wu(p: &[Q; 2], a: usize) -> Form {
    let mut f = zu(a);
    f[2] = -p[a].clone();
    f
}

/// w_{iA}, lowered.
fn wl(p: &[Q; 2], a: usize) -> Form {
    if a == 0 {
        let f = wu(p, 1);
        [-f[0].clone(), -f[1].clone(), -f[2].clone()]
    } else {
        wu(p, 0)
    }
}

fn z2() -> Form {
    zu(2)
}

fn add_lin(pen: &mut [Matrix; 3], r: usize, c: usize, coef: &Q, form: &Form) {
    if coef.is_zero() {
        return;
    }
    for j in 0..3 {
        if !form[j].is_zero() {
            *pen[j].entry_mut(r, c) += coef * &form[j];
        }
    }
}

/// Adds m ⊗ form into rows/cols starting at (r0, c0).
fn add_block(pen: &mut [Matrix; 3], r0: usize, c0: usize, m: &Matrix, form: &Form) {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            add_lin(pen, r0 + r, c0 + c, m.get(r, c), form);
        }
    }
}

fn zero_pencil(rows: usize, cols: usize) -> [Matrix; 3] {
    [Matrix::zeros(rows, cols), Matrix::zeros(rows, cols), Matrix::zeros(rows, cols)]
}

/// α as z⁰A₀ + z¹A₁ + z²A₂, linear in the configuration data.
pub fn alpha_pencil(cfg: &AdhmConfig) -> [Matrix; 3] {
    let dims = &cfg.dims;
    let n = cfg.n();
    let mut pen = zero_pencil(dims.rank_w, dims.total_k());
    let lowered_a = crate::adhm::lower(&cfg.a_a00);
    for a in 0..2 {
        let row0 = w_index(dims, 0, a, 0);
        add_block(&mut pen, row0, 0, &cfg.a00, &zl(a));
        add_block(&mut pen, row0, 0, &lowered_a[a], &z2());
        for i in 1..=n {
            let p = cfg.points.point(i);
            let rowi = w_index(dims, i, a, 0);
            let coli = dims.k_offset(i);
            add_block(&mut pen, rowi, 0, &cfg.ai0[i - 1], &wl(p, a));
            add_block(&mut pen, row0, coli, &cfg.a0i[i - 1], &wl(p, a));
            add_block(&mut pen, rowi, coli, &cfg.aii[i - 1], &wl(p, a));
        }
    }
    let crow = 2 * dims.total_l();
    add_block(&mut pen, crow, 0, &cfg.c, &z2());
    if let Some(ca) = &cfg.c_a {
        for b in 0..2 {
            add_block(&mut pen, crow, 0, &ca[b][0], &zl(b));
            for i in 1..=n {
                add_block(&mut pen, crow, dims.k_offset(i), &ca[b][i], &wl(cfg.points.point(i), b));
            }
        }
    }
    pen
}

/// β as a pencil for given b^A (maps ⊕L → L₀) and d; `with_const` adds the fixed z^A, w^{iA} entries.
pub fn beta_pencil(cfg: &AdhmConfig, b: &[Matrix; 2], d: &Matrix, with_const: bool) -> [Matrix; 3] {
    let dims = &cfg.dims;
    let mut pen = zero_pencil(dims.total_l(), dims.rank_w);
    for a in 0..2 {
        for i in 0..=cfg.n() {
            let col = w_index(dims, i, a, 0);
            let blk = b[a].block(0, dims.l_offset(i), dims.dim_l[0], dims.dim_l[i]);
            add_block(&mut pen, 0, col, &blk, &z2());
            if with_const {
                let form = if i == 0 { zu(a) } else { wu(cfg.points.point(i), a) };
                let row = dims.l_offset(i);
                for j in 0..dims.dim_l[i] {
                    add_lin(&mut pen, row + j, col + j, &Q::one(), &form);
                }
            }
        }
    }
    add_block(&mut pen, 0, 2 * dims.total_l(), d, &z2());
    pen
}

pub(crate) fn alpha_degrees(cfg: &AdhmConfig) -> (Vec<DivisorClass>, Vec<DivisorClass>) {
    let n = cfg.n();
    let rows = vec![DivisorClass::zero(n); cfg.dims.rank_w];
    let mut cols = Vec::new();
    for i in 0..=n {
        let deg = if i == 0 { DivisorClass::line(n) } else { &DivisorClass::line(n) - &DivisorClass::exceptional(n, i) };
        cols.extend(std::iter::repeat(deg).take(cfg.dims.dim_k[i]));
    }
    (rows, cols)
}

pub(crate) fn beta_degrees(cfg: &AdhmConfig) -> (Vec<DivisorClass>, Vec<DivisorClass>) {
    let n = cfg.n();
    let mut rows = Vec::new();
    for i in 0..=n {
        let deg = if i == 0 { DivisorClass::line(n) } else { &DivisorClass::line(n) - &DivisorClass::exceptional(n, i) };
        rows.extend(std::iter::repeat(deg).take(cfg.dims.dim_l[i]));
    }
    (rows, vec![DivisorClass::zero(n); cfg.dims.rank_w])
}

/// Builds α and β with b^A derived from the configuration. Pre-gauge data (c^A, aᵢ₀ ≠ Id) is accepted.
pub fn build_monad(cfg: &AdhmConfig) -> Result<MonadRep> {
    cfg.check_shapes()?;
    build_monad_with_b(cfg, &derive_b(cfg)?)
}

/// As `build_monad` with b^A supplied; used when a is singular (b^A does not enter α or β on l∞).
pub fn build_monad_with_b(cfg: &AdhmConfig, b: &[Matrix; 2]) -> Result<MonadRep> {
    cfg.check_shapes()?;
    let want = (cfg.dims.dim_l[0], cfg.dims.total_l());
    if b[0].shape() != want || b[1].shape() != want {
        return Err(Error::Dimension(format!("b^A must be {}x{}", want.0, want.1)));
    }
    let (ar, ac) = alpha_degrees(cfg);
    let (br, bc) = beta_degrees(cfg);
    let alpha = SectionMatrix::from_pencil(&alpha_pencil(cfg), ar, ac, &cfg.points);
    let beta = SectionMatrix::from_pencil(&beta_pencil(cfg, b, &cfg.d, true), br, bc, &cfg.points);
    debug_assert!(alpha.validate().is_ok() && beta.validate().is_ok());
    Ok(MonadRep {
        alpha,
        beta,
        dims: cfg.dims.clone(),
        r: cfg.r(),
        w_basis: w_basis(&cfg.dims, cfg.r()),
        ctx: cfg.points.clone(),
    })
}

/// β∘α as a matrix of sections.
pub fn check_monad_condition(m: &MonadRep) -> Result<SectionMatrix> {
    m.beta.mul(&m.alpha)
}

/// All degree-2 monomials in z⁰, z¹, z².
pub const QUADRATIC_MONOMIALS: [[u32; 3]; 6] = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];

/// One coefficient block of β∘α: rows Lᵢ, columns Kⱼ, monomial z^e.
#[derive(Clone, Debug, PartialEq)]
pub struct RawCoefficient {
    pub row_block: usize,
    pub col_block: usize,
    pub monomial: [u32; 3],
    pub matrix: Matrix,
}

pub fn raw_coefficients(m: &MonadRep, prod: &SectionMatrix) -> Vec<RawCoefficient> {
    let dims = &m.dims;
    let mut out = Vec::new();
    for i in 0..dims.dim_l.len() {
        for j in 0..dims.dim_k.len() {
            for e in QUADRATIC_MONOMIALS {
                let matrix = Matrix::from_fn(dims.dim_l[i], dims.dim_k[j], |r, c| {
                    prod.poly(dims.l_offset(i) + r, dims.k_offset(j) + c).coeff(e)
                });
                out.push(RawCoefficient { row_block: i, col_block: j, monomial: e, matrix });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
