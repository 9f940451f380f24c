use crate::adhm::{assemble_a, AdhmConfig};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Residual symmetry of the normalized form aᵢ₀ = Id.
///
/// g = (g₀₀, g₀ᵢ) acts on ⊕Lᵢ upper-triangularly with gᵢᵢ := h₀₀⁻¹;
/// h = diag(h₀₀, hᵢᵢ) acts on ⊕Kᵢ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub g00: Matrix,
    pub g0i: Vec<Matrix>,
    pub h00: Matrix,
    pub hii: Vec<Matrix>,
}

impl GroupElement {
    pub fn identity(cfg: &AdhmConfig) -> Self {
        let dims = &cfg.dims;
        GroupElement {
            g00: Matrix::identity(dims.dim_l[0]),
            g0i: (1..=cfg.n()).map(|i| Matrix::zeros(dims.dim_l[0], dims.dim_l[i])).collect(),
            h00: Matrix::identity(dims.dim_k[0]),
            hii: (1..=cfg.n()).map(|i| Matrix::identity(dims.dim_k[i])).collect(),
        }
    }

    pub fn check(&self, cfg: &AdhmConfig) -> Result<()> {
        let dims = &cfg.dims;
        let n = cfg.n();
        let bad = |s: String| Err(Error::Dimension(s));
        if self.g00.shape() != (dims.dim_l[0], dims.dim_l[0]) || self.h00.shape() != (dims.dim_k[0], dims.dim_k[0]) {
            return bad("g00/h00 shape".into());
        }
        if self.g0i.len() != n || self.hii.len() != n {
            return bad(format!("group element has wrong number of blocks for n = {n}"));
        }
        for i in 1..=n {
            if self.g0i[i - 1].shape() != (dims.dim_l[0], dims.dim_l[i]) {
                return bad(format!("g0{i} shape"));
            }
            if self.hii[i - 1].shape() != (dims.dim_k[i], dims.dim_k[i]) {
                return bad(format!("h{i}{i} shape"));
            }
        }
        let square = std::iter::once(("g00".to_string(), &self.g00))
            .chain(std::iter::once(("h00".to_string(), &self.h00)))
            .chain(self.hii.iter().enumerate().map(|(i, h)| (format!("h{0}{0}", i + 1), h)));
        for (name, m) in square {
            if m.rank() < m.rows() {
                return Err(Error::SingularGroupElement(name));
            }
        }
        Ok(())
    }

    /// e2 ∘ e1: acting by the result equals acting by e1 then e2.
    pub fn compose(e2: &GroupElement, e1: &GroupElement) -> Result<GroupElement> {
        let h1_inv = e1.h00.inverse().ok_or_else(|| Error::SingularGroupElement("h00".into()))?;
        Ok(GroupElement {
            g00: &e2.g00 * &e1.g00,
            g0i: e1
                .g0i
                .iter()
                .zip(&e2.g0i)
                .map(|(g1, g2)| &(&e2.g00 * g1) + &(g2 * &h1_inv))
                .collect(),
            h00: &e1.h00 * &e2.h00,
            hii: e1.hii.iter().zip(&e2.hii).map(|(h1, h2)| h1 * h2).collect(),
        })
    }
}

/// (g₀₀ a₀₀ + Σ g₀ᵢ) h₀₀, (g₀₀ a₀ᵢ + g₀ᵢ aᵢᵢ) hᵢᵢ, h₀₀⁻¹ aᵢᵢ hᵢᵢ, (g₀₀ a^A − Σ pᵢ^A g₀ᵢ) h₀₀, c h₀₀, g₀₀ d.
pub fn act(el: &GroupElement, cfg: &AdhmConfig) -> Result<AdhmConfig> {
    el.check(cfg)?;
    if !cfg.is_normalized() {
        return Err(Error::NotNormalized("group action is defined on aᵢ₀ = Id, c^A = 0".into()));
    }
    if el.g00.det()? == num_traits::Zero::zero() {
        return Err(Error::SingularGroupElement("g00".into()));
    }
    let h_inv = el.h00.inverse().ok_or_else(|| Error::SingularGroupElement("h00".into()))?;
    for (i, h) in el.hii.iter().enumerate() {
        if h.rows() > 0 && h.det()? == num_traits::Zero::zero() {
            return Err(Error::SingularGroupElement(format!("h{0}{0}", i + 1)));
        }
    }
    let n = cfg.n();
    let mut out = cfg.clone();
    let mut a00 = &el.g00 * &cfg.a00;
    for g in &el.g0i {
        a00 = &a00 + g;
    }
    out.a00 = &a00 * &el.h00;
    for i in 0..n {
        out.a0i[i] = &(&(&el.g00 * &cfg.a0i[i]) + &(&el.g0i[i] * &cfg.aii[i])) * &el.hii[i];
        out.aii[i] = &(&h_inv * &cfg.aii[i]) * &el.hii[i];
    }
    for x in 0..2 {
        let mut m = &el.g00 * &cfg.a_a00[x];
        for i in 0..n {
            m = &m - &el.g0i[i].scale(cfg.p(i + 1, x));
        }
        out.a_a00[x] = &m * &el.h00;
    }
    out.c = &cfg.c * &el.h00;
    out.d = &el.g00 * &cfg.d;
    Ok(out)
}

pub fn verify_equivalence(c1: &AdhmConfig, c2: &AdhmConfig, witness: &GroupElement) -> bool {
    match act(witness, c1) {
        Ok(c) => c == *c2,
        Err(_) => false,
    }
}

/// Number of free entries of a group element.
pub fn dim_group(cfg: &AdhmConfig) -> usize {
    let d = &cfg.dims;
    let l0 = d.dim_l[0];
    l0 * l0 + (1..=cfg.n()).map(|i| l0 * d.dim_l[i] + d.dim_k[i] * d.dim_k[i]).sum::<usize>() + d.dim_k[0] * d.dim_k[0]
}

/// Linearized action at the identity, one column per Lie algebra coordinate.
pub(crate) fn action_differential(cfg: &AdhmConfig) -> Result<Matrix> {
    let dims = &cfg.dims;
    let n = cfg.n();
    let (l0, k0) = (dims.dim_l[0], dims.dim_k[0]);
    let layout = super::tangent::VarLayout::new(cfg);
    let mut cols: Vec<Vec<num_rational::BigRational>> = Vec::new();
    let mut push = |delta: &AdhmConfig| cols.push(layout.flatten_config(delta));
    let zero = {
        let mut z = cfg.clone();
        z.a00 = Matrix::zeros(l0, k0);
        for i in 0..n {
            z.a0i[i] = Matrix::zeros(l0, dims.dim_k[i + 1]);
            z.aii[i] = Matrix::zeros(dims.dim_l[i + 1], dims.dim_k[i + 1]);
        }
        z.a_a00 = [Matrix::zeros(l0, k0), Matrix::zeros(l0, k0)];
        z.c = Matrix::zeros(cfg.r(), k0);
        z.d = Matrix::zeros(l0, cfg.r());
        z
    };
    let unit = |rows: usize, cols: usize, r: usize, c: usize| {
        let mut m = Matrix::zeros(rows, cols);
        m.set(r, c, num_traits::One::one());
        m
    };
    // δg₀₀
    for r in 0..l0 {
        for c in 0..l0 {
            let e = unit(l0, l0, r, c);
            let mut d = zero.clone();
            d.a00 = &e * &cfg.a00;
            for i in 0..n {
                d.a0i[i] = &e * &cfg.a0i[i];
            }
            d.a_a00 = [&e * &cfg.a_a00[0], &e * &cfg.a_a00[1]];
            d.d = &e * &cfg.d;
            push(&d);
        }
    }
    // δg₀ᵢ
    for i in 0..n {
        let li = dims.dim_l[i + 1];
        for r in 0..l0 {
            for c in 0..li {
                let e = unit(l0, li, r, c);
                let mut d = zero.clone();
                d.a00 = e.clone();
                d.a0i[i] = &e * &cfg.aii[i];
                d.a_a00 = [-&e.scale(cfg.p(i + 1, 0)), -&e.scale(cfg.p(i + 1, 1))];
                push(&d);
            }
        }
    }
    // δh₀₀, with δgᵢᵢ = −δh₀₀
    for r in 0..k0 {
        for c in 0..k0 {
            let e = unit(k0, k0, r, c);
            let mut d = zero.clone();
            d.a00 = &cfg.a00 * &e;
            for i in 0..n {
                d.aii[i] = -&(&e * &cfg.aii[i]);
            }
            d.a_a00 = [&cfg.a_a00[0] * &e, &cfg.a_a00[1] * &e];
            d.c = &cfg.c * &e;
            push(&d);
        }
    }
    // δhᵢᵢ
    for i in 0..n {
        let ki = dims.dim_k[i + 1];
        for r in 0..ki {
            for c in 0..ki {
                let e = unit(ki, ki, r, c);
                let mut d = zero.clone();
                d.a0i[i] = &cfg.a0i[i] * &e;
                d.aii[i] = &cfg.aii[i] * &e;
                push(&d);
            }
        }
    }
    let rows = layout.config_len();
    Ok(Matrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone()))
}

/// Dimension of the kernel of the linearized action.
pub fn stabilizer_dim(cfg: &AdhmConfig) -> Result<usize> {
    assemble_a(cfg)?;
    let dact = action_differential(cfg)?;
    let dg = dim_group(cfg);
    debug_assert_eq!(dact.cols(), dg);
    if dact.modular_rank() == dg {
        return Ok(0);
    }
    Ok(dg - dact.rank())
}
