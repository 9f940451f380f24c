use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::adhm::tests::{hilbert_instance, line_bundle_instance, params};
use crate::adhm::{assemble_a, sample_config, AdhmParams, Strategy};
use crate::lattice::monad_dims;
use crate::rational::{q, qf};

fn valid(r: usize, a: &[i64], k: i64, seed: u64) -> AdhmConfig {
    sample_config(&params(r, a, k), seed, Strategy::Auto, None).unwrap().config
}

fn generic(x: i64, y: i64) -> SurfacePoint {
    SurfacePoint::Generic([q(x), q(y), q(1)])
}

fn zero_b(cfg: &AdhmConfig) -> [Matrix; 2] {
    let (l0, l) = (cfg.dims.dim_l[0], cfg.dims.total_l());
    [Matrix::zeros(l0, l), Matrix::zeros(l0, l)]
}

/// Generic points, points on each Eᵢ and on l∞.
fn test_points(cfg: &AdhmConfig, count: usize, seed: u64) -> Vec<SurfacePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let x = match out.len() % 3 {
            0 => {
                let p = generic(rng.gen_range(-40..40), rng.gen_range(-40..40));
                let SurfacePoint::Generic(z) = &p else { unreachable!() };
                if cfg.points.centre_at(&z[0], &z[1]).is_some() {
                    continue;
                }
                p
            }
            1 if cfg.n() > 0 => SurfacePoint::Exceptional(rng.gen_range(1..=cfg.n()), [q(rng.gen_range(-9..9)), q(1)]),
            _ => SurfacePoint::Generic([q(1), q(rng.gen_range(-30..30)), q(0)]),
        };
        out.push(x);
    }
    out
}

#[test]
fn plane_monad_shapes() {
    let cfg = valid(1, &[], 1, 0);
    let m = build_monad(&cfg).unwrap();
    assert_eq!((m.alpha.rows(), m.alpha.cols()), (3, 1));
    assert_eq!((m.beta.rows(), m.beta.cols()), (1, 3));
    assert_eq!(m.w_basis.last(), Some(&WBasis::C(0)));
}

#[test]
fn line_bundle_monad_shapes() {
    let cfg = line_bundle_instance();
    let m = build_monad(&cfg).unwrap();
    assert_eq!((m.alpha.rows(), m.alpha.cols()), (3, 1));
    assert_eq!((m.beta.rows(), m.beta.cols()), (1, 3));
    assert!(check_monad_condition(&m).unwrap().is_zero());
}

#[test]
fn entries_match_slot_bidegrees() {
    for seed in 0..4 {
        let m = build_monad(&valid(2, &[1, -1], 1, seed)).unwrap();
        m.alpha.validate().unwrap();
        m.beta.validate().unwrap();
    }
}

#[test]
fn sampled_configs_satisfy_the_monad_identity() {
    for (r, a, k) in [(1usize, vec![], 2i64), (2, vec![1], 1), (1, vec![1, -1], 1), (3, vec![1], 1)] {
        for seed in 0..3 {
            let m = build_monad(&valid(r, &a, k, seed)).unwrap();
            assert!(check_monad_condition(&m).unwrap().is_zero());
        }
    }
}

#[test]
fn lower_rows_always_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..10 {
        let mut cfg = valid(2, &[1, 1], 1, seed);
        for m in cfg.a0i.iter_mut().chain(cfg.aii.iter_mut()).chain(cfg.ai0.iter_mut()) {
            *m = Matrix::from_fn(m.rows(), m.cols(), |_, _| q(rng.gen_range(-5..5)));
        }
        cfg.d = Matrix::from_fn(cfg.d.rows(), cfg.d.cols(), |_, _| q(rng.gen_range(-5..5)));
        let Ok(m) = build_monad(&cfg) else { continue };
        let prod = check_monad_condition(&m).unwrap();
        for r in cfg.dims.dim_l[0]..prod.rows() {
            for c in 0..prod.cols() {
                assert!(prod.poly(r, c).is_zero());
            }
        }
    }
}

#[test]
fn perturbed_d_shows_up_in_one_coefficient() {
    let mut cfg = sample_config(&params(2, &[1], 1), 2, Strategy::LinearSlice { zero_c: false }, None).unwrap().config;
    *cfg.d.entry_mut(0, 0) += q(1);
    let m = build_monad(&cfg).unwrap();
    let raw = raw_coefficients(&m, &check_monad_condition(&m).unwrap());
    let nonzero: Vec<_> = raw.iter().filter(|c| !c.matrix.is_zero()).map(|c| (c.row_block, c.col_block, c.monomial)).collect();
    assert_eq!(nonzero, vec![(0, 0, [0, 0, 2])]);
}

#[test]
fn line_bundle_fibers() {
    let cfg = line_bundle_instance();
    let m = build_monad(&cfg).unwrap();
    for x in test_points(&cfg, 25, 1) {
        assert_eq!(fiber_data(&m, &x).unwrap().fiber_dim, 1, "{x:?}");
    }
    let scan = singular_scan(&m, &ScanPlan::default()).unwrap();
    assert!(scan.points.is_empty());
    assert!(framing_check(&m, &cfg).unwrap());
}

#[test]
fn hilbert_fibers_and_scan() {
    let cfg = hilbert_instance();
    let m = build_monad(&cfg).unwrap();
    assert!(check_monad_condition(&m).unwrap().is_zero());
    let sing = [generic(0, 0), generic(1, 1)];
    for x in &sing {
        assert_eq!(fiber_data(&m, x).unwrap().fiber_dim, 2);
    }
    for x in test_points(&cfg, 20, 2) {
        if !sing.contains(&x) {
            assert_eq!(fiber_data(&m, &x).unwrap().fiber_dim, 1, "{x:?}");
        }
    }
    let scan = singular_scan(&m, &ScanPlan::default()).unwrap();
    assert_eq!(scan.points, sing.to_vec());
    assert_eq!(scan.unresolved, 0);
    assert!(scan.exact);
}

#[test]
fn trivial_sheaf() {
    let cfg = AdhmConfig::zeros(params(2, &[], 0), crate::adhm::default_points(0, 0)).unwrap();
    let m = build_monad(&cfg).unwrap();
    for x in test_points(&cfg, 6, 3) {
        assert_eq!(fiber_data(&m, &x).unwrap().fiber_dim, 2);
    }
}

#[test]
fn zero_column_is_not_in_p() {
    let mut cfg = valid(1, &[1], 1, 1);
    for m in [&mut cfg.a0i[0], &mut cfg.aii[0]] {
        for r in 0..m.rows() {
            m.set(r, 0, q(0));
        }
    }
    let m = build_monad_with_b(&cfg, &zero_b(&cfg)).unwrap();
    assert!(matches!(singular_scan(&m, &ScanPlan::default()), Err(Error::NotInP(_))));
}

#[test]
fn exact_and_sampled_minors_agree() {
    let cases = [hilbert_instance(), valid(1, &[1], 1, 3), valid(2, &[], 1, 2)];
    for cfg in &cases {
        let m = build_monad(cfg).unwrap();
        let exact = singular_scan(&m, &ScanPlan { exact_below_dim: 8, ..ScanPlan::default() }).unwrap();
        let sampled = singular_scan(&m, &ScanPlan { exact_below_dim: 0, seed: 5, ..ScanPlan::default() }).unwrap();
        assert!(exact.exact && !sampled.exact);
        assert_eq!(exact.points, sampled.points);
    }
}

#[test]
fn scans_are_deterministic() {
    let m = build_monad(&valid(1, &[1, -1], 1, 2)).unwrap();
    let plan = ScanPlan { seed: 9, ..ScanPlan::default() };
    assert_eq!(singular_scan(&m, &plan).unwrap(), singular_scan(&m, &plan).unwrap());
}

#[test]
fn framing_agrees_with_determinant() {
    for (r, a, k, seed) in [(1usize, vec![], 2i64, 0u64), (2, vec![1], 1, 1), (1, vec![1, -1], 1, 2)] {
        let cfg = valid(r, &a, k, seed);
        let v = framing_criteria(&build_monad(&cfg).unwrap(), &cfg, seed).unwrap();
        assert!(v.det_nonzero && v.agree());
    }
    let mut sing = hilbert_instance();
    sing.a00 = Matrix::from_i64(2, 2, &[1, 1, 1, 1]);
    let m = build_monad_with_b(&sing, &zero_b(&sing)).unwrap();
    let v = framing_criteria(&m, &sing, 0).unwrap();
    assert!(!v.det_nonzero && !v.fiber_trivialized);
    assert!(!framing_check(&m, &sing).unwrap());

    let mut sing1 = valid(2, &[1], 1, 4);
    sing1.aii[0] = Matrix::zeros(sing1.aii[0].rows(), sing1.aii[0].cols());
    sing1.a0i[0] = Matrix::zeros(sing1.a0i[0].rows(), sing1.a0i[0].cols());
    assert!(assemble_a(&sing1).unwrap().det().unwrap().is_zero());
    let m = build_monad_with_b(&sing1, &zero_b(&sing1)).unwrap();
    assert!(framing_criteria(&m, &sing1, 1).unwrap().agree());
}

#[test]
fn fibers_ignore_representatives() {
    let cfg = valid(1, &[1], 1, 6);
    let m = build_monad(&cfg).unwrap();
    for x in test_points(&cfg, 12, 4) {
        let scaled = match &x {
            SurfacePoint::Generic(z) => SurfacePoint::Generic([&z[0] * qf(-7, 3), &z[1] * qf(-7, 3), &z[2] * qf(-7, 3)]),
            SurfacePoint::Exceptional(i, w) => SurfacePoint::Exceptional(*i, [&w[0] * qf(5, 2), &w[1] * qf(5, 2)]),
        };
        assert_eq!(fiber_data(&m, &x).unwrap().fiber_dim, fiber_data(&m, &scaled).unwrap().fiber_dim);
    }
}

#[test]
fn exceptional_rows_of_beta() {
    let cfg = valid(2, &[1, -1], 1, 3);
    let m = build_monad(&cfg).unwrap();
    for i in 1..=cfg.n() {
        for t in -3..4 {
            let b = m.beta.eval_at(&SurfacePoint::Exceptional(i, [q(1), q(t)])).unwrap();
            let rows = b.block(cfg.dims.l_offset(i), 0, cfg.dims.dim_l[i], b.cols());
            assert_eq!(rows.rank(), cfg.dims.dim_l[i]);
        }
    }
}

#[test]
fn ch_check_examples() {
    let ch = cohomology_ch_check(&monad_dims(1, &[-1], 0).unwrap(), &AdhmParams::new(1, vec![-1], 0)).unwrap();
    assert_eq!((ch.rank, ch.c1_exc.clone(), ch.pt.clone()), (1, vec![q(-1)], qf(-1, 2)));
    let ch = cohomology_ch_check(&monad_dims(3, &[], 2).unwrap(), &AdhmParams::new(3, vec![], 2)).unwrap();
    assert_eq!((ch.rank, ch.pt.clone()), (3, q(-2)));
    for r in 1..=3 {
        for a in [vec![], vec![1], vec![-1, 2], vec![0, 1, -1]] {
            for k in 0..=4 {
                if let Ok(d) = monad_dims(r, &a, k) {
                    cohomology_ch_check(&d, &AdhmParams::new(r as usize, a.clone(), k)).unwrap();
                }
            }
        }
    }
}
