//! Rank-drop loci of α (and of βᵀ) over the charts covering the blow-up.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{MonadRep, SectionMatrix};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::{resultant_formal, BPoly, UPoly};
use crate::rational::{q, Q};
use crate::sections::SurfacePoint;

const RANDOM_MINORS: usize = 3;
const MAX_EXACT_MINORS: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanPlan {
    pub generic_samples: usize,
    pub per_divisor_samples: usize,
    pub exact_below_dim: usize,
    pub seed: u64,
}

impl Default for ScanPlan {
    fn default() -> Self {
        ScanPlan { generic_samples: 4, per_divisor_samples: 4, exact_below_dim: 4, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    /// Exactly verified rational points, sorted.
    pub points: Vec<SurfacePoint>,
    /// Candidate zeros of the minor system that are not rational.
    pub unresolved: usize,
    /// True when all maximal minors were used.
    pub exact: bool,
    pub minors_used: usize,
    pub lines_checked: usize,
}

#[derive(Clone)]
enum Combo {
    Random(Matrix),
    Rows(Vec<usize>),
}

impl Combo {
    fn apply(&self, m: &Matrix) -> Matrix {
        match self {
            Combo::Random(r) => r * m,
            Combo::Rows(rows) => Matrix::from_fn(rows.len(), m.cols(), |i, j| m.get(rows[i], j).clone()),
        }
    }
}

fn subsets(n: usize, k: usize, cap: usize) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return Some(out);
    }
    loop {
        out.push(cur.clone());
        if out.len() > cap {
            return None;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Some(out);
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn combos(rows: usize, n: usize, plan: &ScanPlan, rng: &mut ChaCha8Rng) -> (Vec<Combo>, bool) {
    if n <= plan.exact_below_dim {
        if let Some(s) = subsets(rows, n, MAX_EXACT_MINORS) {
            return (s.into_iter().map(Combo::Rows).collect(), true);
        }
    }
    let c = (0..RANDOM_MINORS)
        .map(|_| Combo::Random(Matrix::from_fn(n, rows, |_, _| q(rng.gen_range(-9..=9)))))
        .collect();
    (c, false)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    Q::new(BigInt::from(rng.gen_range(-1_000_000i64..1_000_000)), BigInt::from(rng.gen_range(1i64..1000)))
}

fn int_points(count: usize) -> Vec<Q> {
    (0..count as i64).map(q).collect()
}

enum Locus<P> {
    Everywhere(String),
    Finite { points: Vec<P>, unresolved: usize },
}

fn unresolved_count(g: &UPoly, rational: usize) -> usize {
    g.squarefree().degree().unwrap_or(0).saturating_sub(rational)
}

/// Drop locus of a matrix depending (affinely) on one parameter.
fn univariate_locus(
    eval: &(dyn Fn(&Q) -> Result<Matrix> + Sync),
    n: usize,
    combos: &[Combo],
    rng: &mut ChaCha8Rng,
) -> Result<Locus<Q>> {
    let t0 = random_rational(rng);
    if eval(&t0)?.rank() < n {
        return Ok(Locus::Everywhere("rank drops at a random point of the curve".into()));
    }
    let ts = int_points(n + 1);
    let mats: Vec<Matrix> = ts.par_iter().map(|t| eval(t)).collect::<Result<_>>()?;
    let mut g = UPoly::zero();
    for c in combos {
        let vals: Vec<Q> = mats.iter().map(|m| c.apply(m).det().expect("square")).collect();
        g = g.gcd(&UPoly::interpolate(&ts, &vals));
    }
    if g.is_zero() {
        return Err(Error::Internal("all sampled minors vanish while the generic rank is full".into()));
    }
    let roots = g.rational_roots();
    let unresolved = unresolved_count(&g, roots.len());
    let mut points = Vec::new();
    for t in roots {
        if eval(&t)?.rank() < n {
            points.push(t);
        }
    }
    Ok(Locus::Finite { points, unresolved })
}

/// Drop locus of a matrix depending affinely on (x, y); `excluded` points are skipped.
fn bivariate_locus(
    eval: &(dyn Fn(&Q, &Q) -> Result<Matrix> + Sync),
    n: usize,
    combos: &[Combo],
    lines: usize,
    excluded: &[(Q, Q)],
    rng: &mut ChaCha8Rng,
) -> Result<Locus<(Q, Q)>> {
    let (x0, y0) = (random_rational(rng), random_rational(rng));
    if eval(&x0, &y0)?.rank() < n {
        return Ok(Locus::Everywhere("rank drops at a random point".into()));
    }
    let grid = int_points(n + 1);
    let cells: Vec<(usize, usize)> = (0..=n).flat_map(|i| (0..=n).map(move |j| (i, j))).collect();
    let mats: Vec<Matrix> = cells.par_iter().map(|&(i, j)| eval(&grid[i], &grid[j])).collect::<Result<_>>()?;
    let mut fs: Vec<BPoly> = combos
        .par_iter()
        .map(|c| {
            let vals: Vec<Vec<Q>> = (0..=n)
                .map(|i| (0..=n).map(|j| c.apply(&mats[i * (n + 1) + j]).det().expect("square")).collect())
                .collect();
            BPoly::interpolate_grid(&grid, &grid, &vals)
        })
        .collect();
    fs.retain(|f| !f.is_zero());
    fs.dedup();
    if fs.is_empty() {
        return Err(Error::Internal("all sampled minors vanish while the generic rank is full".into()));
    }
    if fs.iter().any(|f| f.total_degree() == Some(0)) {
        return Ok(Locus::Finite { points: vec![], unresolved: 0 });
    }
    // a curve in the locus meets every line; a finite set misses random ones
    let lines = lines.max(2);
    let mut hits = 0;
    for _ in 0..lines {
        let p = (random_rational(rng), random_rational(rng));
        let d = (random_rational(rng), random_rational(rng));
        let g = fs.iter().fold(UPoly::zero(), |acc, f| acc.gcd(&f.restrict_line((&p.0, &p.1), (&d.0, &d.1))));
        if g.degree().unwrap_or(0) > 0 {
            hits += 1;
        }
    }
    if 2 * hits > lines {
        return Ok(Locus::Everywhere(format!("minors share a curve ({hits} of {lines} random lines meet it)")));
    }
    fs.sort_by_key(|f| f.total_degree());
    let mut gx = None;
    for base in 0..fs.len() {
        let f1 = &fs[base];
        let mut g = UPoly::zero();
        for (j, fj) in fs.iter().enumerate() {
            if j != base {
                g = g.gcd(&resultant_in_y(f1, fj));
                if g.degree() == Some(0) {
                    break;
                }
            }
        }
        if fs.len() == 1 {
            g = UPoly::zero();
        }
        if !g.is_zero() {
            gx = Some(g);
            break;
        }
    }
    let Some(g) = gx else {
        return Ok(Locus::Everywhere("maximal minors share a common factor".into()));
    };
    let xs = g.rational_roots();
    let mut unresolved = unresolved_count(&g, xs.len());
    let mut points = Vec::new();
    for x in xs {
        let gy = fs.iter().fold(UPoly::zero(), |acc, f| acc.gcd(&f.restrict_x(&x)));
        if gy.is_zero() {
            return Ok(Locus::Everywhere(format!("rank drops along the line x = {x}")));
        }
        let ys = gy.rational_roots();
        unresolved += unresolved_count(&gy, ys.len());
        for y in ys {
            if excluded.iter().any(|(ex, ey)| ex == &x && ey == &y) {
                continue;
            }
            if eval(&x, &y)?.rank() < n {
                points.push((x.clone(), y));
            }
        }
    }
    Ok(Locus::Finite { points, unresolved })
}

/// Res_y(f, g) as a polynomial in x.
fn resultant_in_y(f: &BPoly, g: &BPoly) -> UPoly {
    let (Some(df), Some(dg)) = (f.degree_y(), g.degree_y()) else {
        return UPoly::zero();
    };
    if df == 0 {
        return f.y_free_part();
    }
    if dg == 0 {
        return g.y_free_part();
    }
    let bound = f.total_degree().unwrap_or(0) * g.total_degree().unwrap_or(0);
    let xs = int_points(bound + 1);
    let vals: Vec<Q> = xs
        .par_iter()
        .map(|x| resultant_formal(&f.restrict_x_formal(x, df + 1), &g.restrict_x_formal(x, dg + 1)))
        .collect();
    UPoly::interpolate(&xs, &vals)
}

fn raw_affine(m: &SectionMatrix, x: &Q, y: &Q) -> Matrix {
    let one = Q::one();
    Matrix::from_fn(m.rows(), m.cols(), |r, c| m.poly(r, c).eval([x, y, &one]))
}

/// Points where `m` (rows ≥ cols) has rank below its column count.
fn degeneracy_locus(m: &SectionMatrix, plan: &ScanPlan, what: &str) -> Result<ScanResult> {
    let n = m.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut result = ScanResult { points: vec![], unresolved: 0, exact: true, minors_used: 0, lines_checked: 0 };
    if n == 0 {
        return Ok(result);
    }
    if m.rows() < n {
        return Err(Error::Dimension(format!("{what} has fewer rows than columns")));
    }
    let (cs, exact) = combos(m.rows(), n, plan, &mut rng);
    result.exact = exact;
    result.minors_used = cs.len();
    result.lines_checked = plan.generic_samples.max(2);
    let ctx = m.ctx().clone();

    let excluded: Vec<(Q, Q)> = ctx.all().iter().map(|p| (p[0].clone(), p[1].clone())).collect();
    let affine = |x: &Q, y: &Q| Ok(raw_affine(m, x, y));
    match bivariate_locus(&affine, n, &cs, plan.generic_samples, &excluded, &mut rng)? {
        Locus::Everywhere(why) => return Err(Error::NotInP(format!("{what}: {why}"))),
        Locus::Finite { points, unresolved } => {
            result.unresolved += unresolved;
            result.points.extend(points.into_iter().map(|(x, y)| SurfacePoint::Generic([x, y, Q::one()])));
        }
    }

    for i in 1..=ctx.n() {
        let on_e = |t: &Q| m.eval_at(&SurfacePoint::Exceptional(i, [Q::one(), t.clone()]));
        match univariate_locus(&on_e, n, &cs, &mut rng)? {
            Locus::Everywhere(why) => return Err(Error::NotInP(format!("{what} along E{i}: {why}"))),
            Locus::Finite { points, unresolved } => {
                result.unresolved += unresolved;
                result.points.extend(points.into_iter().map(|t| SurfacePoint::Exceptional(i, [Q::one(), t])));
            }
        }
        let pole = SurfacePoint::Exceptional(i, [Q::zero(), Q::one()]);
        if m.eval_at(&pole)?.rank() < n {
            result.points.push(pole);
        }
    }

    let on_line = |t: &Q| m.eval_at(&SurfacePoint::Generic([Q::one(), t.clone(), Q::zero()]));
    match univariate_locus(&on_line, n, &cs, &mut rng)? {
        Locus::Everywhere(why) => return Err(Error::NotInP(format!("{what} along the line at infinity: {why}"))),
        Locus::Finite { points, unresolved } => {
            result.unresolved += unresolved;
            result.points.extend(points.into_iter().map(|t| SurfacePoint::Generic([Q::one(), t, Q::zero()])));
        }
    }
    let corner = SurfacePoint::Generic([Q::zero(), Q::one(), Q::zero()]);
    if m.eval_at(&corner)?.rank() < n {
        result.points.push(corner);
    }
    result.points.sort();
    result.points.dedup();
    Ok(result)
}

/// Points where α drops rank; errors with NotInP if the drop locus is not finite.
pub fn singular_scan(m: &MonadRep, plan: &ScanPlan) -> Result<ScanResult> {
    degeneracy_locus(&m.alpha, plan, "alpha")
}

/// Points where β fails to be surjective.
pub fn surjectivity_scan(m: &MonadRep, plan: &ScanPlan) -> Result<ScanResult> {
    degeneracy_locus(&m.beta.transpose(), plan, "beta")
}
