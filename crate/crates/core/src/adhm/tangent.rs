use num_traits::Zero;
use serde::Serialize;

use super::group::{dim_group, stabilizer_dim};
use super::{derive_b, AdhmConfig};
use crate::error::{Error, Result};
use crate::lattice::moduli_dim_formulas;
use crate::matrix::Matrix;
use crate::monad::{alpha_pencil, beta_pencil, QUADRATIC_MONOMIALS};
use crate::rational::Q;

/// Coordinates of the normalized slice: a₀₀, a₀ᵢ, aᵢᵢ, a⁰₀₀, a¹₀₀, c, d, then b⁰, b¹.
pub(crate) struct VarLayout {
    shapes: Vec<(usize, usize)>,
    config_len: usize,
    b_shape: (usize, usize),
}

impl VarLayout {
    pub(crate) fn new(cfg: &AdhmConfig) -> Self {
        let d = &cfg.dims;
        let (l0, k0) = (d.dim_l[0], d.dim_k[0]);
        let mut shapes = vec![(l0, k0)];
        shapes.extend((1..=cfg.n()).map(|i| (l0, d.dim_k[i])));
        shapes.extend((1..=cfg.n()).map(|i| (d.dim_l[i], d.dim_k[i])));
        shapes.extend([(l0, k0), (l0, k0), (cfg.r(), k0), (l0, cfg.r())]);
        let config_len = shapes.iter().map(|(r, c)| r * c).sum();
        VarLayout { shapes, config_len, b_shape: (l0, d.total_l()) }
    }

    pub(crate) fn config_len(&self) -> usize {
        self.config_len
    }

    pub(crate) fn len(&self) -> usize {
        self.config_len + 2 * self.b_shape.0 * self.b_shape.1
    }

    fn config_blocks(cfg: &AdhmConfig) -> Vec<&Matrix> {
        let mut out = vec![&cfg.a00];
        out.extend(cfg.a0i.iter());
        out.extend(cfg.aii.iter());
        out.extend([&cfg.a_a00[0], &cfg.a_a00[1], &cfg.c, &cfg.d]);
        out
    }

    pub(crate) fn flatten_config(&self, cfg: &AdhmConfig) -> Vec<Q> {
        let mut out = Vec::with_capacity(self.config_len);
        for m in Self::config_blocks(cfg) {
            out.extend(m.entries().iter().cloned());
        }
        out
    }

    /// Configuration with only coordinate `v` set to one; aᵢ₀ and c^A are zero.
    fn unit_config(&self, cfg: &AdhmConfig, v: usize) -> AdhmConfig {
        let mut z = cfg.clone();
        z.c_a = None;
        let mut blocks: Vec<Matrix> = self.shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect();
        let mut off = v;
        for (b, &(r, c)) in self.shapes.iter().enumerate() {
            if off < r * c {
                blocks[b].set(off / c, off % c, num_traits::One::one());
                break;
            }
            off -= r * c;
        }
        let n = cfg.n();
        let mut it = blocks.into_iter();
        z.a00 = it.next().unwrap();
        z.a0i = it.by_ref().take(n).collect();
        z.aii = it.by_ref().take(n).collect();
        z.a_a00 = [it.next().unwrap(), it.next().unwrap()];
        z.c = it.next().unwrap();
        z.d = it.next().unwrap();
        z.ai0 = z.ai0.iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect();
        z
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentDims {
    pub variables: usize,
    pub equations: usize,
    pub rank_jacobian: usize,
    pub dim_ker_j: usize,
    pub dim_group: usize,
    pub stabilizer: usize,
    pub dim_orbit: usize,
    pub empirical: i64,
    pub expected: i64,
}

type Sparse = Vec<(usize, usize, usize, Q)>;

fn sparse(pen: &[Matrix; 3]) -> Sparse {
    let mut out = Vec::new();
    for (j, m) in pen.iter().enumerate() {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let x = m.get(r, c);
                if !x.is_zero() {
                    out.push((r, c, j, x.clone()));
                }
            }
        }
    }
    out
}

fn monomial_index(j: usize, k: usize) -> usize {
    let mut e = [0u32; 3];
    e[j] += 1;
    e[k] += 1;
    QUADRATIC_MONOMIALS.iter().position(|m| *m == e).unwrap()
}

/// Jacobian of the coefficients of β∘α on the normalized slice, one column per coordinate.
pub(crate) fn jacobian(cfg: &AdhmConfig) -> Result<Matrix> {
    if !cfg.is_normalized() {
        return Err(Error::NotNormalized("tangent spaces are computed on aᵢ₀ = Id, c^A = 0".into()));
    }
    let layout = VarLayout::new(cfg);
    let dims = &cfg.dims;
    let (nl, nk) = (dims.total_l(), dims.total_k());
    let b = derive_b(cfg)?;
    let alpha = alpha_pencil(cfg);
    let beta = beta_pencil(cfg, &b, &cfg.d, true);
    let eq = |row: usize, col: usize, mono: usize| (row * nk + col) * 6 + mono;
    let neq = nl * nk * 6;
    let mut cols: Vec<Vec<(usize, Q)>> = Vec::with_capacity(layout.len());
    let zero_b = [Matrix::zeros(layout.b_shape.0, layout.b_shape.1), Matrix::zeros(layout.b_shape.0, layout.b_shape.1)];
    for v in 0..layout.len() {
        let mut col = vec![Q::zero(); neq];
        if v < layout.config_len {
            let u = layout.unit_config(cfg, v);
            // β·δα
            for (wr, kc, j, val) in sparse(&alpha_pencil(&u)) {
                for (k, bp) in beta.iter().enumerate() {
                    for lr in 0..nl {
                        let x = bp.get(lr, wr);
                        if !x.is_zero() {
                            col[eq(lr, kc, monomial_index(j, k))] += x * &val;
                        }
                    }
                }
            }
            // δβ·α through d
            let dd = &u.d;
            if !dd.is_zero() {
                for (lr, wc, j, val) in sparse(&beta_pencil(cfg, &zero_b, dd, false)) {
                    add_beta_term(&mut col, &alpha, lr, wc, j, &val, nk, &eq);
                }
            }
        } else {
            let off = v - layout.config_len;
            let per = layout.b_shape.0 * layout.b_shape.1;
            let (which, idx) = (off / per, off % per);
            let mut db = zero_b.clone();
            db[which].set(idx / layout.b_shape.1, idx % layout.b_shape.1, num_traits::One::one());
            let zero_d = Matrix::zeros(dims.dim_l[0], cfg.r());
            for (lr, wc, j, val) in sparse(&beta_pencil(cfg, &db, &zero_d, false)) {
                add_beta_term(&mut col, &alpha, lr, wc, j, &val, nk, &eq);
            }
        }
        cols.push(col.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
    }
    let mut used: Vec<usize> = cols.iter().flat_map(|c| c.iter().map(|(r, _)| *r)).collect();
    used.sort_unstable();
    used.dedup();
    let mut j = Matrix::zeros(used.len(), cols.len());
    for (c, entries) in cols.into_iter().enumerate() {
        for (r, x) in entries {
            let rr = used.binary_search(&r).unwrap();
            j.set(rr, c, x);
        }
    }
    Ok(j)
}

#[allow(clippy::too_many_arguments)]
fn add_beta_term(
    col: &mut [Q],
    alpha: &[Matrix; 3],
    lr: usize,
    wc: usize,
    j: usize,
    val: &Q,
    nk: usize,
    eq: &impl Fn(usize, usize, usize) -> usize,
) {
    for (k, ap) in alpha.iter().enumerate() {
        for kc in 0..nk {
            let x = ap.get(wc, kc);
            if !x.is_zero() {
                col[eq(lr, kc, monomial_index(j, k))] += x * val;
            }
        }
    }
}

fn certified_rank(m: &Matrix) -> usize {
    let lower = m.modular_rank();
    if lower == m.rows().min(m.cols()) {
        return lower;
    }
    m.rank()
}

pub fn tangent_dims(cfg: &AdhmConfig) -> Result<TangentDims> {
    let j = jacobian(cfg)?;
    let variables = j.cols();
    let rank_jacobian = certified_rank(&j);
    let dim_ker_j = variables - rank_jacobian;
    let dg = dim_group(cfg);
    let stabilizer = stabilizer_dim(cfg)?;
    let dim_orbit = dg - stabilizer;
    let p = &cfg.params;
    Ok(TangentDims {
        variables,
        equations: j.rows(),
        rank_jacobian,
        dim_ker_j,
        dim_group: dg,
        stabilizer,
        dim_orbit,
        empirical: dim_ker_j as i64 - dim_orbit as i64,
        expected: moduli_dim_formulas(p.r as i64, &p.a, p.k).0,
    })
}
