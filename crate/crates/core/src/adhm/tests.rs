use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::group::action_differential;
use super::sample::{rand_matrix, random_normalized};
use super::*;
use crate::monad::{fiber_data, ScanPlan};
use crate::rational::q;
use crate::sections::SurfacePoint;

pub(crate) fn params(r: usize, a: &[i64], k: i64) -> AdhmParams {
    AdhmParams::new(r, a.to_vec(), k)
}

pub(crate) fn diag(v: &[i64]) -> Matrix {
    let mut m = Matrix::zeros(v.len(), v.len());
    for (i, x) in v.iter().enumerate() {
        m.set(i, i, q(*x));
    }
    m
}

/// r = 1, n = 0, k = 2 with eigenvalue pairs (0, 0) and (1, 1).
pub(crate) fn hilbert_instance() -> AdhmConfig {
    let mut cfg = AdhmConfig::zeros(params(1, &[], 2), Arc::new(BlowupPoints::new(vec![]).unwrap())).unwrap();
    cfg.a00 = Matrix::identity(2);
    cfg.a_a00 = [diag(&[0, -1]), diag(&[0, -1])];
    cfg.d = Matrix::from_i64(2, 1, &[1, 1]);
    cfg
}

/// r = 1, a = (−1), k = 0: dims K = (0, 1), L = (1, 0).
pub(crate) fn line_bundle_instance() -> AdhmConfig {
    let pts = Arc::new(BlowupPoints::new(vec![[q(1), q(2)]]).unwrap());
    let mut cfg = AdhmConfig::zeros(params(1, &[-1], 0), pts).unwrap();
    cfg.a0i[0] = Matrix::from_i64(1, 1, &[2]);
    cfg.d = Matrix::from_i64(1, 1, &[1]);
    cfg
}

fn random_points(n: usize, seed: u64) -> Arc<BlowupPoints> {
    sample::default_points(n, seed)
}

fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let m = rand_matrix(n, n, rng);
        if n == 0 || !m.det().unwrap().is_zero() {
            return m;
        }
    }
}

fn random_element(cfg: &AdhmConfig, rng: &mut ChaCha8Rng) -> GroupElement {
    let d = &cfg.dims;
    GroupElement {
        g00: random_invertible(d.dim_l[0], rng),
        g0i: (1..=cfg.n()).map(|i| rand_matrix(d.dim_l[0], d.dim_l[i], rng)).collect(),
        h00: random_invertible(d.dim_k[0], rng),
        hii: (1..=cfg.n()).map(|i| random_invertible(d.dim_k[i], rng)).collect(),
    }
}

const GRID: [(usize, &[i64], i64); 6] =
    [(1, &[], 1), (2, &[], 2), (1, &[1], 1), (2, &[1], 1), (1, &[1, -1], 1), (2, &[1, 1], 0)];

fn random_invertible_cfg(seed: u64) -> AdhmConfig {
    let (r, a, k) = GRID[seed as usize % GRID.len()];
    let p = params(r, a, k);
    let pts = random_points(a.len(), seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let cfg = random_normalized(&p, &pts, &mut rng).unwrap();
        if !assemble_a(&cfg).unwrap().det().unwrap().is_zero() {
            return cfg;
        }
    }
}

fn valid(r: usize, a: &[i64], k: i64, seed: u64) -> AdhmConfig {
    sample_config(&params(r, a, k), seed, Strategy::Auto, None).unwrap().config
}

#[test]
fn assemble_a_arrowhead() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = random_normalized(&params(1, &[1, -1], 1), &random_points(2, 3), &mut rng).unwrap();
    let a = assemble_a(&cfg).unwrap();
    let d = &cfg.dims;
    assert!(a.block(d.l_offset(1), d.k_offset(2), d.dim_l[1], d.dim_k[2]).is_zero());
    assert!(a.block(d.l_offset(2), d.k_offset(1), d.dim_l[2], d.dim_k[1]).is_zero());
    assert_eq!(a.block(0, 0, d.dim_l[0], d.dim_k[0]), cfg.a00);
}

#[test]
fn derive_b_solves_its_equation() {
    for seed in 0..20 {
        let cfg = random_invertible_cfg(seed);
        let b = derive_b(&cfg).unwrap();
        let a = assemble_a(&cfg).unwrap();
        let row0 = a.block(0, 0, cfg.dims.dim_l[0], cfg.dims.total_k());
        for x in 0..2 {
            let lhs = &(&b[x] * &a) + &(&row0 * &cfg.p_k(x));
            assert_eq!(lhs, cfg.a_upper_full(x), "seed {seed}");
        }
    }
}

#[test]
fn derive_b_plane_case() {
    let cfg = hilbert_instance();
    let b = derive_b(&cfg).unwrap();
    assert_eq!(b[0], cfg.a_a00[0]);
    let mut sing = hilbert_instance();
    sing.a00 = diag(&[1, 0]);
    assert!(matches!(derive_b(&sing), Err(Error::FramingViolation)));
}

#[test]
fn assemble_q_plane_case() {
    let cfg = hilbert_instance();
    let qa = assemble_q(&cfg).unwrap();
    assert_eq!(qa[0], -&cfg.a_a00[0]);
}

/// Only the (z²)² coefficient of the (L₀, K₀) block survives, and it is the compact residual.
#[test]
fn compact_form_is_calibrated() {
    for seed in 0..20 {
        let cfg = random_invertible_cfg(seed);
        let res = constraint_residual(&cfg).unwrap();
        for raw in &res.raw {
            if raw.row_block == 0 && raw.col_block == 0 && raw.monomial == [0, 0, 2] {
                assert_eq!(raw.matrix, res.compact, "seed {seed}");
            } else {
                assert!(raw.matrix.is_zero(), "seed {seed}: block {:?}", (raw.row_block, raw.col_block, raw.monomial));
            }
        }
    }
}

#[test]
fn plane_case_is_commutator() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cfg = random_normalized(&params(2, &[], 3), &random_points(0, 0), &mut rng).unwrap();
    cfg.a00 = Matrix::identity(3);
    let (x, y) = (&cfg.a_a00[0], &cfg.a_a00[1]);
    let comm = &(y * x) - &(x * y);
    let sigma = Q::from_integer(COMPACT_SIGN.into());
    assert_eq!(compact_residual(&cfg).unwrap(), &comm.scale(&sigma) + &(&cfg.d * &cfg.c));
}

#[test]
fn empty_spaces_have_zero_residual() {
    let cfg = AdhmConfig::zeros(params(2, &[0], 0), random_points(1, 0)).unwrap();
    assert!(compact_residual(&cfg).unwrap().is_zero());
    assert!(is_constraint_valid(&cfg).unwrap());
}

#[test]
fn perturbed_d_breaks_the_constraint() {
    let mut cfg = sample_config(&params(1, &[1], 1), 5, Strategy::LinearSlice { zero_c: false }, None).unwrap().config;
    assert!(!cfg.c.is_zero());
    assert!(is_constraint_valid(&cfg).unwrap());
    *cfg.d.entry_mut(0, 0) += q(1);
    let res = constraint_residual(&cfg).unwrap();
    assert!(!res.compact.is_zero());
    assert!(!res.raw_is_zero());
}

#[test]
fn gauge_fix_is_idempotent() {
    let cfg = valid(1, &[1], 1, 2);
    assert_eq!(gauge_fix(&cfg).unwrap(), cfg);
}

/// Pre-gauge data with random aᵢ₀ and c^A whose normal form is a valid cfg.
fn pre_gauge(cfg: &AdhmConfig, rng: &mut ChaCha8Rng) -> AdhmConfig {
    let mut pre = cfg.clone();
    for i in 0..cfg.n() {
        let m = random_invertible(cfg.dims.dim_k[0], rng);
        pre.aii[i] = &m * &cfg.aii[i];
        pre.ai0[i] = m;
    }
    let ca = [0, 1].map(|_| (0..=cfg.n()).map(|i| rand_matrix(cfg.r(), cfg.dims.dim_k[i], rng)).collect::<Vec<_>>());
    pre.c_a = Some(ca);
    pre.c = Matrix::zeros(cfg.r(), cfg.dims.dim_k[0]);
    let shift = remove_c_upper(&pre).unwrap().c;
    pre.c = &cfg.c - &shift;
    pre
}

#[test]
fn gauge_fix_recovers_normal_form_and_fibers() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (r, a, k, seed) in [(1, vec![1], 1, 1u64), (2, vec![1], 1, 2), (1, vec![1, -1], 1, 3)] {
        let cfg = valid(r, &a, k, seed);
        let pre = pre_gauge(&cfg, &mut rng);
        assert!(!pre.is_normalized());
        assert!(is_constraint_valid(&pre).unwrap());
        let fixed = gauge_fix(&pre).unwrap();
        assert_eq!(fixed, cfg);
        let (m1, m2) = (build_monad(&pre).unwrap(), build_monad(&fixed).unwrap());
        for t in 0..10i64 {
            let x = SurfacePoint::Generic([q(t * 7 - 31), q(t * t - 5), q(3)]);
            assert_eq!(fiber_data(&m1, &x).unwrap(), fiber_data(&m2, &x).unwrap());
        }
    }
}

#[test]
fn gauge_fix_singular_block() {
    let mut cfg = valid(1, &[1], 1, 4);
    cfg.ai0[0] = Matrix::zeros(cfg.dims.dim_l[1], cfg.dims.dim_k[0]);
    assert!(matches!(gauge_fix(&cfg), Err(Error::NonGenericStratum(_))));
}

#[test]
fn identity_acts_trivially() {
    let cfg = valid(2, &[1], 1, 1);
    assert_eq!(act(&GroupElement::identity(&cfg), &cfg).unwrap(), cfg);
    assert!(verify_equivalence(&cfg, &cfg, &GroupElement::identity(&cfg)));
}

#[test]
fn group_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for seed in 0..20 {
        let cfg = random_invertible_cfg(seed);
        let (e1, e2) = (random_element(&cfg, &mut rng), random_element(&cfg, &mut rng));
        let lhs = act(&e2, &act(&e1, &cfg).unwrap()).unwrap();
        let rhs = act(&GroupElement::compose(&e2, &e1).unwrap(), &cfg).unwrap();
        assert_eq!(lhs, rhs, "seed {seed}");
    }
}

#[test]
fn action_preserves_validity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfgs = [valid(1, &[], 2, 1), valid(2, &[1], 1, 1), valid(1, &[1, -1], 1, 1), valid(2, &[], 1, 3), valid(1, &[1], 1, 7)];
    for i in 0..50 {
        let cfg = &cfgs[i % cfgs.len()];
        let el = random_element(cfg, &mut rng);
        let moved = act(&el, cfg).unwrap();
        assert!(is_constraint_valid(&moved).unwrap());
        assert!(!assemble_a(&moved).unwrap().det().unwrap().is_zero());
        assert!(verify_equivalence(cfg, &moved, &el));
        let other = random_element(cfg, &mut rng);
        if other != el {
            assert!(!verify_equivalence(cfg, &moved, &other));
        }
    }
    let bad = random_invertible_cfg(1);
    let el = random_element(&bad, &mut rng);
    let moved = act(&el, &bad).unwrap();
    assert_eq!(is_constraint_valid(&bad).unwrap(), is_constraint_valid(&moved).unwrap());
}

#[test]
fn scalar_element() {
    let cfg = valid(2, &[], 2, 1);
    let mut el = GroupElement::identity(&cfg);
    el.g00 = Matrix::scalar(2, &q(3));
    let moved = act(&el, &cfg).unwrap();
    assert_eq!(moved.d, cfg.d.scale(&q(3)));
    assert_eq!(moved.c, cfg.c);
}

#[test]
fn singular_element_rejected() {
    let cfg = valid(1, &[], 2, 1);
    let mut el = GroupElement::identity(&cfg);
    el.h00 = Matrix::zeros(2, 2);
    assert!(matches!(act(&el, &cfg), Err(Error::SingularGroupElement(_))));
    let mut el = GroupElement::identity(&cfg);
    el.g00 = Matrix::zeros(el.g00.rows(), el.g00.rows());
    assert!(matches!(el.check(&cfg), Err(Error::SingularGroupElement(s)) if s == "g00"));
}

#[test]
fn stabilizers() {
    for (r, a, k) in [(1usize, vec![], 2i64), (2, vec![1], 1), (1, vec![1, -1], 1)] {
        for seed in 0..3 {
            assert_eq!(stabilizer_dim(&valid(r, &a, k, seed)).unwrap(), 0);
        }
    }
    let empty = AdhmConfig::zeros(params(2, &[0], 0), random_points(1, 0)).unwrap();
    assert_eq!(stabilizer_dim(&empty).unwrap(), 0);
    // c = d = 0 with a common eigenvector: a non-trivial stabilizer direction
    let mut degen = hilbert_instance();
    degen.d = Matrix::zeros(2, 1);
    assert!(stabilizer_dim(&degen).unwrap() > 0);
    assert!(action_differential(&degen).unwrap().cols() == dim_group(&degen));
}

#[test]
fn tangent_examples() {
    for (r, a, k, want) in [(1usize, vec![], 1i64, 2i64), (2, vec![], 1, 4), (1, vec![1], 0, 0), (1, vec![], 2, 4)] {
        let t = tangent_dims(&valid(r, &a, k, 1)).unwrap();
        assert_eq!(t.empirical, want, "{r} {a:?} {k}");
        assert_eq!(t.expected, want);
    }
}

#[test]
fn tangent_dimension_is_constant() {
    let dims: Vec<i64> = (0..5).map(|s| tangent_dims(&valid(2, &[1], 1, s)).unwrap().empirical).collect();
    assert!(dims.iter().all(|&d| d == dims[0]), "{dims:?}");
}

#[test]
fn sampling_is_deterministic() {
    let p = params(1, &[1, -1], 1);
    let a = sample_config(&p, 7, Strategy::Auto, None).unwrap();
    let b = sample_config(&p, 7, Strategy::Auto, None).unwrap();
    assert_eq!(a.config, b.config);
}

#[test]
fn strategies() {
    let lb = sample_config(&params(1, &[-1], 0), 1, Strategy::LineBundle, None).unwrap().config;
    assert_eq!((lb.dims.dim_k.clone(), lb.dims.dim_l.clone(), lb.dims.rank_w), (vec![0, 1], vec![1, 0], 3));
    let cm = sample_config(&params(2, &[], 2), 1, Strategy::Commuting, None).unwrap().config;
    assert!(cm.a00.is_identity() && cm.c.is_zero());
    let sd = sample_config(&params(3, &[1], 1), 1, Strategy::SolveD, None).unwrap();
    assert!(is_constraint_valid(&sd.config).unwrap());
    assert!(matches!(
        sample_config(&params(1, &[1], 1), 1, Strategy::Commuting, None),
        Err(Error::SamplingFailure(_))
    ));
    assert!(matches!(sample_config(&params(1, &[], -1), 1, Strategy::Auto, None), Err(Error::InfeasibleParameters(_))));
}

#[test]
fn sampled_configs_pass_scans() {
    let out = sample_valid(&params(1, &[1], 1), 3, Strategy::Auto, None, &ScanPlan::default()).unwrap();
    assert!(out.config.is_normalized());
}

#[test]
fn rank_one_needs_solved_c() {
    let plan = ScanPlan::default();
    let p = params(1, &[1], 2);
    let out = sample_valid(&p, 0, Strategy::SolveC, None, &plan).unwrap();
    assert!(!out.config.d.is_zero());
    assert_eq!(tangent_dims(&out.config).unwrap().empirical, 4);
    let zero_c = sample_valid(&p, 0, Strategy::LinearSlice { zero_c: true }, None, &plan);
    assert!(matches!(zero_c, Err(Error::SamplingFailure(_))));
}
