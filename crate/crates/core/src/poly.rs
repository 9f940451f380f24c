use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{big_mod, inv_mod, large_primes, mul_mod, rational_reconstruct, simplest_between, Q};

/// Polynomial in z⁰, z¹, z² with sparse exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HPoly {
    terms: BTreeMap<[u32; 3], Q>,
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c}*z0^{}*z1^{}*z2^{}", e[0], e[1], e[2]))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl HPoly {
    pub fn zero() -> Self {
        HPoly::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(e: [u32; 3], c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        HPoly { terms }
    }

    /// c0·z⁰ + c1·z¹ + c2·z².
    pub fn linear(c: [&Q; 3]) -> Self {
        let mut p = HPoly::zero();
        for (i, ci) in c.iter().enumerate() {
            let mut e = [0; 3];
            e[i] = 1;
            p.add_term(e, (*ci).clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: [u32; 3]) -> Q {
        self.terms.get(&e).cloned().unwrap_or_else(Q::zero)
    }

    fn add_term(&mut self, e: [u32; 3], c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max()
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e[0] + e[1] + e[2] == d)
    }

    pub fn add(&self, o: &HPoly) -> HPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &HPoly) -> HPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> HPoly {
        HPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn scale(&self, s: &Q) -> HPoly {
        if s.is_zero() {
            return HPoly::zero();
        }
        HPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    pub fn mul(&self, o: &HPoly) -> HPoly {
        let mut out = HPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, z: [&Q; 3]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                for _ in 0..e[i] {
                    t *= z[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// poly(p⁰ + λw⁰, p¹ + λw¹, 1) as a polynomial in λ.
    pub fn along_line(&self, p: [&Q; 2], w: [&Q; 2]) -> UPoly {
        let l0 = UPoly::new(vec![p[0].clone(), w[0].clone()]);
        let l1 = UPoly::new(vec![p[1].clone(), w[1].clone()]);
        let mut acc = UPoly::zero();
        for (e, c) in &self.terms {
            let t = l0.pow(e[0]).mul(&l1.pow(e[1])).scale(c);
            acc = acc.add(&t);
        }
        acc
    }
}

/// Univariate polynomial, coefficients from low to high degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    c: Vec<Q>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().enumerate().map(|(i, x)| format!("{x}*t^{i}")).collect();
        write!(f, "UPoly[{}]", parts.join(" + "))
    }
}

impl UPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }

    pub fn one() -> Self {
        UPoly { c: vec![Q::one()] }
    }

    pub fn x() -> Self {
        UPoly { c: vec![Q::zero(), Q::one()] }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    /// Lowest power with nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, s: &Q) -> UPoly {
        UPoly::new(self.c.iter().map(|x| x * s).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * Q::from_integer(BigInt::from(i))).collect())
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.c.len() - 1;
        let lead_inv = d.lead().recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let f = &r[i] * &lead_inv;
            if f.is_zero() {
                continue;
            }
            for j in 0..=dd {
                r[i - dd + j] -= &f * &d.c[j];
            }
            quo[i - dd] = f;
        }
        r.truncate(dd);
        (UPoly::new(quo), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return if self.is_zero() { o.monic() } else { self.monic() };
        }
        if self.degree() == Some(0) || o.degree() == Some(0) {
            return UPoly::one();
        }
        let (a, b) = (self.primitive(), o.primitive());
        modular_gcd(&a, &b).unwrap_or_else(|| euclid_gcd(&a, &b))
    }

    /// Integer coefficients with unit content and positive leading coefficient.
    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let l = self.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.c.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if ints.last().is_some_and(|x| x.is_negative()) {
            g = -g;
        }
        UPoly::new(ints.into_iter().map(|x| Q::from_integer(x / &g)).collect())
    }

    pub fn squarefree(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Newton interpolation through (xs[i], ys[i]).
    pub fn interpolate(xs: &[Q], ys: &[Q]) -> UPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut acc = UPoly::zero();
        for i in (0..n).rev() {
            acc = acc.mul(&UPoly::new(vec![-xs[i].clone(), Q::one()])).add(&UPoly::new(vec![dd[i].clone()]));
        }
        acc
    }

    fn sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&Q::from_integer(BigInt::from(-1))).primitive_keep_sign());
        }
        chain
    }

    /// Scale to integer coefficients by a positive factor.
    fn primitive_keep_sign(&self) -> UPoly {
        let p = self.primitive();
        if p.lead().is_positive() == self.lead().is_positive() {
            p
        } else {
            p.scale(&Q::from_integer(BigInt::from(-1)))
        }
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Q> {
        let mut roots = Vec::new();
        if self.is_zero() {
            return roots;
        }
        let mut f = self.squarefree().primitive();
        if f.coeff(0).is_zero() {
            roots.push(Q::zero());
            f = UPoly::new(f.c[1..].to_vec());
        }
        if f.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let an = f.lead().abs();
        let bound = Q::one() + f.c.iter().map(|x| x.abs()).max().unwrap() / &an;
        let tol = (&an * &an).recip();
        let chain = f.sturm_chain();
        let changes = |x: &Q| -> usize {
            let mut last = 0i8;
            let mut n = 0;
            for p in &chain {
                let v = p.eval(x);
                let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
                if s != 0 {
                    if last != 0 && s != last {
                        n += 1;
                    }
                    last = s;
                }
            }
            n
        };
        let two = Q::from_integer(BigInt::from(2));
        let mut stack = vec![(-bound.clone(), bound.clone(), changes(&-bound.clone()), changes(&bound))];
        while let Some((a, b, va, vb)) = stack.pop() {
            let count = va - vb;
            if count == 0 {
                continue;
            }
            if count > 1 {
                let m = (&a + &b) / &two;
                let vm = changes(&m);
                stack.push((a, m.clone(), va, vm));
                stack.push((m, b, vm, vb));
                continue;
            }
            // exactly one real root in (a, b]
            let (mut a, mut b, mut va) = (a, b, va);
            let mut found = None;
            while &b - &a >= tol {
                let m = (&a + &b) / &two;
                if f.eval(&m).is_zero() {
                    found = Some(m);
                    break;
                }
                let vm = changes(&m);
                if va - vm == 1 {
                    b = m;
                } else {
                    a = m;
                    va = vm;
                }
            }
            if found.is_none() {
                if f.eval(&b).is_zero() {
                    found = Some(b.clone());
                } else {
                    let s = simplest_between(&a, &b);
                    if s != a && f.eval(&s).is_zero() {
                        found = Some(s);
                    }
                }
            }
            if let Some(r) = found {
                roots.push(r);
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

/// Dense bivariate polynomial, coefficient [i][j] of xⁱyʲ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BPoly {
    c: Vec<Vec<Q>>,
}

impl BPoly {
    /// Interpolates values on the tensor grid xs × ys (degree < len in each variable).
    pub fn interpolate_grid(xs: &[Q], ys: &[Q], vals: &[Vec<Q>]) -> BPoly {
        // interpolate in y for each x, then in x for each y-degree
        let rows: Vec<UPoly> = vals.iter().map(|row| UPoly::interpolate(ys, row)).collect();
        let ny = ys.len();
        let mut c = vec![vec![Q::zero(); ny]; xs.len()];
        for j in 0..ny {
            let col: Vec<Q> = rows.iter().map(|p| p.coeff(j)).collect();
            let pj = UPoly::interpolate(xs, &col);
            for i in 0..xs.len() {
                c[i][j] = pj.coeff(i);
            }
        }
        BPoly { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    pub fn total_degree(&self) -> Option<usize> {
        let mut d = None;
        for (i, r) in self.c.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    d = Some(d.map_or(i + j, |v: usize| v.max(i + j)));
                }
            }
        }
        d
    }

    pub fn degree_y(&self) -> Option<usize> {
        let mut d = None;
        for r in &self.c {
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    d = Some(d.map_or(j, |v: usize| v.max(j)));
                }
            }
        }
        d
    }

    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        self.restrict_x(x).eval(y)
    }

    /// f(x0, y) as a polynomial in y.
    pub fn restrict_x(&self, x0: &Q) -> UPoly {
        let ny = self.c.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut out = vec![Q::zero(); ny];
        let mut xp = Q::one();
        for r in &self.c {
            for (j, v) in r.iter().enumerate() {
                if !v.is_zero() {
                    out[j] += v * &xp;
                }
            }
            xp *= x0;
        }
        UPoly::new(out)
    }

    /// Coefficient vector of f(x0, y) padded to `len` entries.
    pub fn restrict_x_formal(&self, x0: &Q, len: usize) -> Vec<Q> {
        let mut v = self.restrict_x(x0).coeffs().to_vec();
        v.resize(len.max(v.len()), Q::zero());
        v
    }

    /// The part free of y, as a polynomial in x.
    pub fn y_free_part(&self) -> UPoly {
        UPoly::new(self.c.iter().map(|r| r.first().cloned().unwrap_or_else(Q::zero)).collect())
    }

    /// f(p + t·d) as a polynomial in t.
    pub fn restrict_line(&self, p: (&Q, &Q), d: (&Q, &Q)) -> UPoly {
        let deg = self.total_degree().unwrap_or(0);
        let ts: Vec<Q> = (0..=deg).map(|i| Q::from_integer(BigInt::from(i))).collect();
        let vs: Vec<Q> = ts.iter().map(|t| self.eval(&(p.0 + d.0 * t), &(p.1 + d.1 * t))).collect();
        UPoly::interpolate(&ts, &vs)
    }
}

/// Sylvester resultant of f and g; formal degrees are their true degrees.
fn euclid_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = a.divrem(&b);
        a = b;
        b = r.primitive();
    }
    a.monic()
}

fn mod_coeffs(p: &UPoly, m: u64) -> Vec<u64> {
    p.c.iter().map(|x| big_mod(x.numer(), m)).collect()
}

/// Monic gcd over Z/m of coefficient vectors (lowest degree first).
fn gcd_mod(a: Vec<u64>, b: Vec<u64>, m: u64) -> Vec<u64> {
    let trim = |mut v: Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap(), m);
        let db = b.len() - 1;
        while a.len() > db {
            let i = a.len() - 1;
            let f = mul_mod(a[i], inv, m);
            if f != 0 {
                for j in 0..=db {
                    let t = mul_mod(f, b[j], m);
                    a[i - db + j] = (a[i - db + j] + m - t) % m;
                }
            }
            a.pop();
            a = trim(a);
            if a.len() <= db {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    let inv = inv_mod(*a.last().unwrap(), m);
    a.iter().map(|&x| mul_mod(x, inv, m)).collect()
}

/// Multi-modular gcd of primitive integer polynomials, verified by exact division.
fn modular_gcd(a: &UPoly, b: &UPoly) -> Option<UPoly> {
    let leads = a.lead().numer() * b.lead().numer();
    let mut acc: Option<(usize, Vec<BigInt>, BigInt)> = None;
    let mut last: Option<UPoly> = None;
    for p in large_primes().take(400) {
        if big_mod(&leads, p) == 0 {
            continue;
        }
        let g = gcd_mod(mod_coeffs(a, p), mod_coeffs(b, p), p);
        let d = g.len() - 1;
        if d == 0 {
            return Some(UPoly::one());
        }
        let pb = BigInt::from(p);
        acc = match acc {
            Some((d0, _, _)) if d > d0 => continue,
            Some((d0, res, m)) if d == d0 => {
                let e = m.extended_gcd(&pb);
                let mp = &m * &pb;
                let res = res
                    .iter()
                    .zip(&g)
                    .map(|(r, &x)| (r * &e.y * &pb + BigInt::from(x) * &e.x * &m).mod_floor(&mp))
                    .collect();
                Some((d, res, mp))
            }
            _ => Some((d, g.iter().map(|&x| BigInt::from(x)).collect(), pb)),
        };
        let (_, res, m) = acc.as_ref().unwrap();
        let cand: Option<Vec<Q>> = res.iter().map(|r| rational_reconstruct(r, m)).collect();
        let Some(cand) = cand.map(UPoly::new) else {
            last = None;
            continue;
        };
        if last.as_ref() == Some(&cand) && a.divrem(&cand).1.is_zero() && b.divrem(&cand).1.is_zero() {
            return Some(cand);
        }
        last = Some(cand);
    }
    None
}

pub fn resultant(f: &UPoly, g: &UPoly) -> Q {
    if f.is_zero() || g.is_zero() {
        return Q::zero();
    }
    resultant_formal(f.coeffs(), g.coeffs())
}

/// Sylvester resultant with formal degrees len − 1 (leading coefficients may vanish).
pub fn resultant_formal(f: &[Q], g: &[Q]) -> Q {
    let m = f.len().saturating_sub(1);
    let n = g.len().saturating_sub(1);
    if m == 0 && n == 0 {
        return Q::one();
    }
    let size = m + n;
    let mut s = crate::matrix::Matrix::zeros(size, size);
    for i in 0..n {
        for (j, a) in f.iter().rev().enumerate() {
            s.set(i, i + j, a.clone());
        }
    }
    for i in 0..m {
        for (j, b) in g.iter().rev().enumerate() {
            s.set(n + i, i + j, b.clone());
        }
    }
    s.det().expect("square Sylvester matrix")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn up(v: &[i64]) -> UPoly {
        UPoly::new(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn hpoly_arithmetic() {
        let z0 = HPoly::var(0);
        let z2 = HPoly::var(2);
        let p = z0.sub(&z2.scale(&q(3)));
        let sq = p.mul(&p);
        assert_eq!(sq.coeff([1, 0, 1]), q(-6));
        assert!(sq.is_homogeneous_of(2));
        assert_eq!(sq.eval([&q(4), &q(9), &q(1)]), q(1));
        assert!(p.sub(&p).is_zero());
        assert_eq!(HPoly::zero().degree(), None);
    }

    #[test]
    fn along_line_expansion() {
        // (z0 - 2 z2) at (2 + λ, ·, 1) is λ
        let p = HPoly::var(0).sub(&HPoly::var(2).scale(&q(2)));
        let g = p.along_line([&q(2), &q(5)], [&q(1), &q(7)]);
        assert_eq!(g, up(&[0, 1]));
        assert_eq!(g.ord(), Some(1));
    }

    #[test]
    fn divrem_gcd_squarefree() {
        let f = up(&[-1, 0, 1]); // x^2 - 1
        let g = up(&[1, 1]);
        let (qq, r) = f.divrem(&g);
        assert_eq!(qq, up(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&up(&[1, 2, 1])), up(&[1, 1]));
        let cube = g.pow(3).mul(&up(&[-2, 1]));
        assert_eq!(cube.squarefree(), g.mul(&up(&[-2, 1])));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = UPoly::new(vec![qf(1, 2), q(-3), q(0), qf(7, 5)]);
        let xs: Vec<Q> = (0..4).map(q).collect();
        let ys: Vec<Q> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(UPoly::interpolate(&xs, &ys), f);
    }

    #[test]
    fn rational_roots_exact() {
        // (2x - 1)(x + 3)(x^2 - 2)(x)
        let f = up(&[-1, 2]).mul(&up(&[3, 1])).mul(&up(&[-2, 0, 1])).mul(&up(&[0, 1]));
        assert_eq!(f.rational_roots(), vec![q(-3), q(0), qf(1, 2)]);
        assert!(up(&[1, 0, 1]).rational_roots().is_empty());
        let close = up(&[-1000, 1001]).mul(&up(&[-999, 1000]));
        assert_eq!(close.rational_roots(), vec![qf(999, 1000), qf(1000, 1001)]);
        assert_eq!(up(&[5]).rational_roots(), Vec::<Q>::new());
    }

    #[test]
    fn resultant_detects_common_root() {
        let f = up(&[-1, 0, 1]);
        assert!(resultant(&f, &up(&[1, 1])).is_zero());
        assert_eq!(resultant(&up(&[-2, 1]), &up(&[-3, 1])), q(-1));
    }

    #[test]
    fn bivariate_grid() {
        // f = x*y - 2 y^2 + 3
        let xs: Vec<Q> = (0..3).map(q).collect();
        let f = |x: &Q, y: &Q| x * y - q(2) * y * y + q(3);
        let vals: Vec<Vec<Q>> = xs.iter().map(|x| xs.iter().map(|y| f(x, y)).collect()).collect();
        let b = BPoly::interpolate_grid(&xs, &xs, &vals);
        assert_eq!(b.eval(&q(5), &qf(1, 3)), f(&q(5), &qf(1, 3)));
        assert_eq!(b.total_degree(), Some(2));
        assert_eq!(b.restrict_x(&q(1)), up(&[3, 1, -2]));
        let l = b.restrict_line((&q(0), &q(0)), (&q(1), &q(1)));
        assert_eq!(l, up(&[3, 0, -1]));
    }
}
