//! Sections of O(p, q) on the blow-up, stored through their trivialized polynomial.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::DivisorClass;
use crate::poly::HPoly;
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupPoints {
    points: Vec<[Q; 2]>,
}

impl BlowupPoints {
    pub fn new(points: Vec<[Q; 2]>) -> Result<Self> {
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::InvalidConfig(format!("blow-up points {} and {} coincide", i + 1, j + 1)));
                }
            }
        }
        Ok(BlowupPoints { points })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// pᵢ for i in 1..=n.
    pub fn point(&self, i: usize) -> &[Q; 2] {
        &self.points[i - 1]
    }

    pub fn all(&self) -> &[[Q; 2]] {
        &self.points
    }

    /// Index of the centre lying under the affine point (x, y), if any.
    pub fn centre_at(&self, x: &Q, y: &Q) -> Option<usize> {
        self.points.iter().position(|p| &p[0] == x && &p[1] == y).map(|i| i + 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BasicSection {
    Z(usize),
    W(usize, usize),
    Lambda(usize),
    Const(Q),
}

#[derive(Clone, Debug)]
pub struct SectionPoly {
    pub bidegree: DivisorClass,
    pub poly: HPoly,
    ctx: Arc<BlowupPoints>,
}

impl PartialEq for SectionPoly {
    fn eq(&self, o: &Self) -> bool {
        self.bidegree == o.bidegree && self.poly == o.poly && same_ctx(&self.ctx, &o.ctx)
    }
}

fn same_ctx(a: &Arc<BlowupPoints>, b: &Arc<BlowupPoints>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A point of the blow-up in a caller-chosen frame.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SurfacePoint {
    Generic([Q; 3]),
    Exceptional(usize, [Q; 2]),
}

pub fn make_basic_section(kind: BasicSection, ctx: &Arc<BlowupPoints>) -> Result<SectionPoly> {
    let n = ctx.n();
    let in_range = |i: usize| {
        if i >= 1 && i <= n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("blow-up index {i} with n = {n}")))
        }
    };
    let (bidegree, poly) = match kind {
        BasicSection::Z(a) => {
            if a > 2 {
                return Err(Error::IndexOutOfRange(format!("homogeneous coordinate z^{a}")));
            }
            (DivisorClass::line(n), HPoly::var(a))
        }
        BasicSection::W(i, a) => {
            in_range(i)?;
            if a > 1 {
                return Err(Error::IndexOutOfRange(format!("spinor index {a}")));
            }
            let p = ctx.point(i)[a].clone();
            (&DivisorClass::line(n) - &DivisorClass::exceptional(n, i), HPoly::var(a).sub(&HPoly::var(2).scale(&p)))
        }
        BasicSection::Lambda(i) => {
            in_range(i)?;
            (DivisorClass::exceptional(n, i), HPoly::constant(Q::one()))
        }
        BasicSection::Const(s) => (DivisorClass::zero(n), HPoly::constant(s)),
    };
    Ok(SectionPoly { bidegree, poly, ctx: ctx.clone() })
}

impl SectionPoly {
    pub fn zero_section(bidegree: DivisorClass, ctx: &Arc<BlowupPoints>) -> SectionPoly {
        SectionPoly { bidegree, poly: HPoly::zero(), ctx: ctx.clone() }
    }

    /// Checked constructor enforcing homogeneity and vanishing orders.
    pub fn from_poly(bidegree: DivisorClass, poly: HPoly, ctx: &Arc<BlowupPoints>) -> Result<SectionPoly> {
        let s = SectionPoly { bidegree, poly, ctx: ctx.clone() };
        s.validate()?;
        Ok(s)
    }

    pub fn ctx(&self) -> &Arc<BlowupPoints> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn validate(&self) -> Result<()> {
        if self.bidegree.n() != self.ctx.n() {
            return Err(Error::MalformedSection("bidegree length differs from point count".into()));
        }
        if self.poly.is_zero() {
            return Ok(());
        }
        if self.bidegree.p < 0 || !self.poly.is_homogeneous_of(self.bidegree.p as u32) {
            return Err(Error::MalformedSection(format!("polynomial is not homogeneous of degree {}", self.bidegree.p)));
        }
        for i in 1..=self.ctx.n() {
            let need = -self.bidegree.q[i - 1];
            if need <= 0 {
                continue;
            }
            // vanishing order along every direction through pᵢ
            let p = self.ctx.point(i);
            for w in [[Q::one(), Q::zero()], [Q::zero(), Q::one()], [Q::one(), Q::one()], [Q::one(), -Q::one()]] {
                let g = self.poly.along_line([&p[0], &p[1]], [&w[0], &w[1]]);
                if g.ord().is_some_and(|o| (o as i64) < need) {
                    return Err(Error::MalformedSection(format!("vanishing order at p{i} below {need}")));
                }
            }
        }
        Ok(())
    }

    pub fn sec_mul(&self, o: &SectionPoly) -> Result<SectionPoly> {
        if !same_ctx(&self.ctx, &o.ctx) {
            return Err(Error::BidegreeMismatch("sections over different blow-ups".into()));
        }
        let s = SectionPoly { bidegree: &self.bidegree + &o.bidegree, poly: self.poly.mul(&o.poly), ctx: self.ctx.clone() };
        debug_assert!(s.validate().is_ok());
        Ok(s)
    }

    pub fn sec_add(&self, o: &SectionPoly) -> Result<SectionPoly> {
        if self.bidegree != o.bidegree || !same_ctx(&self.ctx, &o.ctx) {
            return Err(Error::BidegreeMismatch(format!("{:?} + {:?}", self.bidegree, o.bidegree)));
        }
        Ok(SectionPoly { bidegree: self.bidegree.clone(), poly: self.poly.add(&o.poly), ctx: self.ctx.clone() })
    }

    pub fn sec_sub(&self, o: &SectionPoly) -> Result<SectionPoly> {
        self.sec_add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> SectionPoly {
        SectionPoly { bidegree: self.bidegree.clone(), poly: self.poly.scale(s), ctx: self.ctx.clone() }
    }

    pub fn eval_generic(&self, z: &[Q; 3]) -> Result<Q> {
        if !z[2].is_zero() {
            let x = &z[0] / &z[2];
            let y = &z[1] / &z[2];
            if let Some(i) = self.ctx.centre_at(&x, &y) {
                return Err(Error::AmbiguousPoint(format!("p{i}")));
            }
        }
        Ok(self.poly.eval([&z[0], &z[1], &z[2]]))
    }

    /// Coefficient of λ^(−qᵢ) in poly(pᵢ + λw, 1).
    pub fn eval_exceptional(&self, i: usize, w: &[Q; 2]) -> Result<Q> {
        if i < 1 || i > self.ctx.n() {
            return Err(Error::IndexOutOfRange(format!("exceptional divisor E{i}")));
        }
        let m = -self.bidegree.q[i - 1];
        if m < 0 {
            return Ok(Q::zero());
        }
        let p = self.ctx.point(i);
        let g = self.poly.along_line([&p[0], &p[1]], [&w[0], &w[1]]);
        if g.ord().is_some_and(|o| (o as i64) < m) {
            return Err(Error::MalformedSection(format!("vanishing order at p{i} below {m}")));
        }
        Ok(g.coeff(m as usize))
    }

    pub fn eval_at(&self, x: &SurfacePoint) -> Result<Q> {
        match x {
            SurfacePoint::Generic(z) => self.eval_generic(z),
            SurfacePoint::Exceptional(i, w) => self.eval_exceptional(*i, w),
        }
    }
}
