//! Picard lattice of the n-point blow-up, Chern characters and Riemann–Roch.

use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{is_integer, q, qf, Q};

/// p·l_∞ + Σ qᵢEᵢ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DivisorClass {
    pub p: i64,
    pub q: Vec<i64>,
}

impl DivisorClass {
    pub fn new(p: i64, q: Vec<i64>) -> Self {
        DivisorClass { p, q }
    }

    pub fn zero(n: usize) -> Self {
        DivisorClass { p: 0, q: vec![0; n] }
    }

    pub fn line(n: usize) -> Self {
        DivisorClass { p: 1, q: vec![0; n] }
    }

    /// Eᵢ, 1-based.
    pub fn exceptional(n: usize, i: usize) -> Self {
        let mut q = vec![0; n];
        q[i - 1] = 1;
        DivisorClass { p: 0, q }
    }

    /// K = −3l_∞ + ΣEᵢ.
    pub fn canonical(n: usize) -> Self {
        DivisorClass { p: -3, q: vec![1; n] }
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn scaled(&self, s: i64) -> Self {
        DivisorClass { p: self.p * s, q: self.q.iter().map(|x| x * s).collect() }
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        assert_eq!(self.n(), o.n(), "divisor classes on different blow-ups");
        DivisorClass { p: self.p + o.p, q: self.q.iter().zip(&o.q).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        self + &(-o)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scaled(-1)
    }
}

pub fn intersect(d1: &DivisorClass, d2: &DivisorClass) -> Result<i64> {
    if d1.n() != d2.n() {
        return Err(Error::Dimension(format!("divisors on {} and {} points", d1.n(), d2.n())));
    }
    Ok(d1.p * d2.p - d1.q.iter().zip(&d2.q).map(|(a, b)| a * b).sum::<i64>())
}

/// χ(O(p, q)) = ½[(p+1)(p+2) − |q|² + Σqᵢ].
pub fn chi_line(d: &DivisorClass) -> Result<Q> {
    let sq: i64 = d.q.iter().map(|x| x * x).sum();
    let s: i64 = d.q.iter().sum();
    let v = qf((d.p + 1) * (d.p + 2) - sq + s, 2);
    if !is_integer(&v) {
        return Err(Error::Internal(format!("non-integral Euler characteristic {v}")));
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curve {
    LInf,
    E(usize),
}

pub fn restriction_degree(d: &DivisorClass, curve: Curve) -> Result<i64> {
    match curve {
        Curve::LInf => Ok(d.p),
        Curve::E(i) if i >= 1 && i <= d.n() => Ok(-d.q[i - 1]),
        Curve::E(i) => Err(Error::IndexOutOfRange(format!("E{i} on a blow-up at {} points", d.n()))),
    }
}

/// ch = rank + c1 + pt·ω, with c1 = c1_line·l_∞ + Σ c1_exc[i]·Eᵢ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernCharacter {
    pub rank: i64,
    pub c1_line: Q,
    pub c1_exc: Vec<Q>,
    pub pt: Q,
}

impl ChernCharacter {
    pub fn of_line_bundle(d: &DivisorClass) -> Self {
        ChernCharacter {
            rank: 1,
            c1_line: q(d.p),
            c1_exc: d.q.iter().map(|&x| q(x)).collect(),
            pt: qf(intersect(d, d).expect("same n"), 2),
        }
    }

    /// ch(E) = r + (a l_∞ + Σaᵢ Eᵢ) − (k − (a² − |a|²)/2)ω; with a = 0 this is r + ΣaᵢEᵢ − (k + |a|²/2)ω.
    pub fn of_sheaf(r: i64, a: i64, av: &[i64], k: i64) -> Self {
        let sq: i64 = av.iter().map(|x| x * x).sum();
        ChernCharacter {
            rank: r,
            c1_line: q(a),
            c1_exc: av.iter().map(|&x| q(x)).collect(),
            pt: -(q(k) - qf(a * a - sq, 2)),
        }
    }

    pub fn zero(n: usize) -> Self {
        ChernCharacter { rank: 0, c1_line: Q::zero(), c1_exc: vec![Q::zero(); n], pt: Q::zero() }
    }

    fn pair_c1(&self, d: &DivisorClass) -> Q {
        &self.c1_line * q(d.p) - self.c1_exc.iter().zip(&d.q).map(|(a, &b)| a * q(b)).sum::<Q>()
    }

    pub fn add(&self, o: &ChernCharacter) -> ChernCharacter {
        ChernCharacter {
            rank: self.rank + o.rank,
            c1_line: &self.c1_line + &o.c1_line,
            c1_exc: self.c1_exc.iter().zip(&o.c1_exc).map(|(a, b)| a + b).collect(),
            pt: &self.pt + &o.pt,
        }
    }

    pub fn scale(&self, s: i64) -> ChernCharacter {
        let sq = q(s);
        ChernCharacter {
            rank: self.rank * s,
            c1_line: &self.c1_line * &sq,
            c1_exc: self.c1_exc.iter().map(|a| a * &sq).collect(),
            pt: &self.pt * &sq,
        }
    }

    /// Hirzebruch–Riemann–Roch with td = 1 − K/2 + ω.
    pub fn euler_characteristic(&self) -> Q {
        let n = self.c1_exc.len();
        let minus_k = -&DivisorClass::canonical(n);
        &self.pt + self.pair_c1(&minus_k) / q(2) + q(self.rank)
    }
}

pub fn ch_twist(ch: &ChernCharacter, d: &DivisorClass) -> ChernCharacter {
    let r = q(ch.rank);
    ChernCharacter {
        rank: ch.rank,
        c1_line: &ch.c1_line + &r * q(d.p),
        c1_exc: ch.c1_exc.iter().zip(&d.q).map(|(a, &b)| a + &r * q(b)).collect(),
        pt: &ch.pt + ch.pair_c1(d) + &r * qf(intersect(d, d).expect("same n"), 2),
    }
}

/// χ(E(p,q)) = −[k − (a/2)(a+3) + ½Σaᵢ(aᵢ−1)] + (r/2)[(p+1)(p+2) − Σqᵢ(qᵢ−1)] + [ap − Σaᵢqᵢ].
pub fn chi_twisted(r: i64, a: i64, av: &[i64], k: i64, d: &DivisorClass) -> Result<Q> {
    if av.len() != d.n() {
        return Err(Error::Dimension(format!("a has {} entries but D has {}", av.len(), d.n())));
    }
    let first = -(q(k) - qf(a * (a + 3), 2) + qf(av.iter().map(|x| x * (x - 1)).sum(), 2));
    let second = qf(r * ((d.p + 1) * (d.p + 2) - d.q.iter().map(|x| x * (x - 1)).sum::<i64>()), 2);
    let third = q(a * d.p - av.iter().zip(&d.q).map(|(x, y)| x * y).sum::<i64>());
    Ok(first + second + third)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonadDims {
    pub dim_k: Vec<usize>,
    pub dim_l: Vec<usize>,
    pub rank_w: usize,
}

impl MonadDims {
    pub fn n(&self) -> usize {
        self.dim_k.len() - 1
    }

    pub fn total_k(&self) -> usize {
        self.dim_k.iter().sum()
    }

    pub fn total_l(&self) -> usize {
        self.dim_l.iter().sum()
    }

    pub fn k_offset(&self, i: usize) -> usize {
        self.dim_k[..i].iter().sum()
    }

    pub fn l_offset(&self, i: usize) -> usize {
        self.dim_l[..i].iter().sum()
    }
}

pub fn monad_dims(r: i64, a: &[i64], k: i64) -> Result<MonadDims> {
    if r < 1 {
        return Err(Error::InfeasibleParameters(format!("rank r = {r} must be at least 1")));
    }
    let sq: i64 = a.iter().map(|x| x * x).sum();
    let abar: i64 = a.iter().sum();
    // |a|² ± ā is always even
    let kappa = k + (sq + abar) / 2;
    let l0 = k + (sq - abar) / 2;
    let mut dk = vec![kappa];
    let mut dl = vec![l0];
    for &ai in a {
        dk.push(kappa - ai);
        dl.push(kappa);
    }
    if let Some(bad) = dk.iter().chain(&dl).find(|&&x| x < 0) {
        return Err(Error::InfeasibleParameters(format!(
            "(r={r}, a={a:?}, k={k}) gives negative dimension {bad}"
        )));
    }
    let dim_k: Vec<usize> = dk.iter().map(|&x| x as usize).collect();
    let dim_l: Vec<usize> = dl.iter().map(|&x| x as usize).collect();
    if dim_k.iter().sum::<usize>() != dim_l.iter().sum::<usize>() {
        return Err(Error::Internal("rank balance fails".into()));
    }
    let rank_w = 2 * dim_l.iter().sum::<usize>() + r as usize;
    Ok(MonadDims { dim_k, dim_l, rank_w })
}

/// (rank-weighted, rank-free) moduli dimension formulas; the bare |a| of the second is read as |a|².
pub fn moduli_dim_formulas(r: i64, a: &[i64], k: i64) -> (i64, i64) {
    let sq: i64 = a.iter().map(|x| x * x).sum();
    let weighted = 2 * r * k + r * sq - sq;
    let rank_free = 2 * k + sq - sq;
    (weighted, rank_free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dc(p: i64, q: &[i64]) -> DivisorClass {
        DivisorClass::new(p, q.to_vec())
    }

    #[test]
    fn intersection_numbers() {
        assert_eq!(intersect(&DivisorClass::line(0), &DivisorClass::line(0)).unwrap(), 1);
        assert_eq!(intersect(&DivisorClass::exceptional(2, 1), &DivisorClass::exceptional(2, 2)).unwrap(), 0);
        assert_eq!(intersect(&DivisorClass::exceptional(2, 1), &DivisorClass::exceptional(2, 1)).unwrap(), -1);
        assert_eq!(intersect(&dc(2, &[1, 1]), &dc(1, &[1, 0])).unwrap(), 1);
        assert!(intersect(&dc(1, &[1]), &dc(1, &[])).is_err());
    }

    #[test]
    fn chi_line_anchors() {
        assert_eq!(chi_line(&dc(0, &[])).unwrap(), q(1));
        for n in 1..=4 {
            for i in 0..n {
                let mut qv = vec![1; n];
                qv[i] += 1;
                assert_eq!(chi_line(&dc(-3, &qv)).unwrap(), q(0));
                for j in 0..n {
                    if i != j {
                        let mut qv = vec![0; n];
                        qv[i] = 1;
                        qv[j] = 1;
                        assert_eq!(chi_line(&dc(-2, &qv)).unwrap(), q(0));
                    }
                }
            }
        }
    }

    #[test]
    fn restriction_degrees() {
        let d = dc(3, &[1, 2]);
        assert_eq!(restriction_degree(&d, Curve::LInf).unwrap(), 3);
        assert_eq!(restriction_degree(&d, Curve::E(2)).unwrap(), -2);
        assert_eq!(restriction_degree(&DivisorClass::canonical(3), Curve::E(1)).unwrap(), -1);
        assert!(restriction_degree(&d, Curve::E(3)).is_err());
        assert!(restriction_degree(&d, Curve::E(0)).is_err());
    }

    #[test]
    fn twist_of_structure_sheaf() {
        let o = ChernCharacter::of_line_bundle(&DivisorClass::zero(1));
        let t = ch_twist(&o, &DivisorClass::exceptional(1, 1));
        assert_eq!(t, ChernCharacter { rank: 1, c1_line: q(0), c1_exc: vec![q(1)], pt: qf(-1, 2) });
        assert_eq!(ch_twist(&t, &DivisorClass::zero(1)), t);
    }

    #[test]
    fn twisted_rr_anchors() {
        for (r, av, k) in [(1i64, vec![], 0i64), (2, vec![1, -1], 3), (3, vec![2], 1), (1, vec![-1, 0, 2], 2)] {
            let n = av.len();
            let sq: i64 = av.iter().map(|x| x * x).sum();
            let ab: i64 = av.iter().sum();
            assert_eq!(chi_twisted(r, 0, &av, k, &dc(-1, &vec![0; n])).unwrap(), -(q(k) + qf(sq - ab, 2)));
            assert_eq!(chi_twisted(r, 0, &av, k, &dc(-2, &vec![1; n])).unwrap(), -(q(k) + qf(sq + ab, 2)));
        }
        assert_eq!(chi_twisted(1, 0, &[], 0, &dc(0, &[])).unwrap(), q(1));
        assert!(chi_twisted(1, 0, &[1], 0, &dc(0, &[])).is_err());
    }

    #[test]
    fn monad_dims_examples() {
        let d = monad_dims(1, &[-1], 0).unwrap();
        assert_eq!((d.dim_k.clone(), d.dim_l.clone(), d.rank_w), (vec![0, 1], vec![1, 0], 3));
        let d = monad_dims(3, &[], 4).unwrap();
        assert_eq!((d.dim_k, d.dim_l, d.rank_w), (vec![4], vec![4], 11));
        assert!(matches!(monad_dims(1, &[], -1), Err(Error::InfeasibleParameters(_))));
        assert!(monad_dims(0, &[], 1).is_err());
    }

    #[test]
    fn rank_balance_on_grid() {
        for r in 1..=3 {
            for n in 0..=3usize {
                let mut a = vec![-2i64; n];
                loop {
                    for k in 0..=4 {
                        if let Ok(d) = monad_dims(r, &a, k) {
                            assert_eq!(d.total_k(), d.total_l());
                            assert_eq!(d.rank_w, 2 * d.total_l() + r as usize);
                        }
                    }
                    // odometer over [-2, 2]^n
                    let mut i = 0;
                    while i < n && a[i] == 2 {
                        a[i] = -2;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                    a[i] += 1;
                }
            }
        }
    }

    #[test]
    fn moduli_formulas() {
        assert_eq!(moduli_dim_formulas(1, &[], 3), (6, 6));
        assert_eq!(moduli_dim_formulas(2, &[], 1), (4, 2));
        assert_eq!(moduli_dim_formulas(1, &[1], 0), (0, 0));
    }

    #[test]
    fn chi_is_quadratic() {
        let base = dc(2, &[1, -1]);
        let dir = dc(1, &[2, 1]);
        let vals: Vec<Q> = (0..6).map(|t| chi_line(&(&base + &dir.scaled(t))).unwrap()).collect();
        let second: Vec<Q> = (0..4).map(|i| &vals[i + 2] - &vals[i + 1] * q(2) + &vals[i]).collect();
        assert!(second.windows(2).all(|w| w[0] == w[1]));
    }

    proptest! {
        #[test]
        fn serre_symmetry(p in -10i64..10, qv in proptest::collection::vec(-5i64..5, 0..4)) {
            let d = dc(p, &qv);
            let kd = &DivisorClass::canonical(qv.len()) - &d;
            prop_assert_eq!(chi_line(&d).unwrap(), chi_line(&kd).unwrap());
        }

        #[test]
        fn twist_group_law(p1 in -5i64..5, p2 in -5i64..5, q1 in proptest::collection::vec(-3i64..3, 2), q2 in proptest::collection::vec(-3i64..3, 2), r in 1i64..4, k in 0i64..4) {
            let ch = ChernCharacter::of_sheaf(r, 0, &[1, -1], k);
            let d1 = dc(p1, &q1);
            let d2 = dc(p2, &q2);
            prop_assert_eq!(ch_twist(&ch_twist(&ch, &d1), &d2), ch_twist(&ch, &(&d1 + &d2)));
            prop_assert_eq!(ch_twist(&ch_twist(&ch, &d1), &(-&d1)), ch.clone());
        }

        #[test]
        fn two_rr_routes_agree(r in 1i64..4, a in -2i64..3, av in proptest::collection::vec(-2i64..3, 0..3), k in 0i64..5, p in -4i64..4, seed in 0i64..100) {
            let qv: Vec<i64> = (0..av.len()).map(|i| (seed + 3 * i as i64) % 5 - 2).collect();
            let d = dc(p, &qv);
            let ch = ChernCharacter::of_sheaf(r, a, &av, k);
            prop_assert_eq!(ch_twist(&ch, &d).euler_characteristic(), chi_twisted(r, a, &av, k, &d).unwrap());
        }

        #[test]
        fn line_bundle_rr_agrees(p in -6i64..6, qv in proptest::collection::vec(-4i64..4, 0..4)) {
            let d = dc(p, &qv);
            prop_assert_eq!(ChernCharacter::of_line_bundle(&d).euler_characteristic(), chi_line(&d).unwrap());
        }
    }
}
