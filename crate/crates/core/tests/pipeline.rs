use adhm_core::adhm::{
    act, compact_residual, constraint_residual, gauge_fix, is_constraint_valid, sample_config, sample_valid,
    stabilizer_dim, tangent_dims, verify_equivalence, AdhmParams, GroupElement, Strategy,
};
use adhm_core::lattice::moduli_dim_formulas;
use adhm_core::monad::{build_monad, check_monad_condition, fiber_data, framing_check, singular_scan, ScanPlan};
use adhm_core::rational::q;
use adhm_core::sections::SurfacePoint;
use adhm_core::{Error, Matrix};

fn params(r: usize, a: &[i64], k: i64) -> AdhmParams {
    AdhmParams::new(r, a.to_vec(), k)
}

#[test]
fn sampled_instance_end_to_end() {
    let p = params(2, &[1], 1);
    let cfg = sample_valid(&p, 11, Strategy::Auto, None, &ScanPlan::default()).unwrap().config;
    assert!(is_constraint_valid(&cfg).unwrap());
    assert!(constraint_residual(&cfg).unwrap().raw_is_zero());
    assert!(compact_residual(&cfg).unwrap().is_zero());

    let m = build_monad(&cfg).unwrap();
    assert!(check_monad_condition(&m).unwrap().is_zero());
    assert!(framing_check(&m, &cfg).unwrap());
    let scan = singular_scan(&m, &ScanPlan::default()).unwrap();
    assert_eq!(scan.unresolved, 0);
    for x in &scan.points {
        assert!(fiber_data(&m, x).unwrap().fiber_dim > p.r);
    }
    let far = SurfacePoint::Generic([q(1), q(5), q(0)]);
    assert_eq!(fiber_data(&m, &far).unwrap().fiber_dim, p.r);

    let t = tangent_dims(&gauge_fix(&cfg).unwrap()).unwrap();
    assert_eq!(t.empirical, moduli_dim_formulas(2, &[1], 1).0);
    assert_eq!(stabilizer_dim(&cfg).unwrap(), 0);
}

#[test]
fn orbit_of_a_sample() {
    let cfg = sample_config(&params(1, &[], 2), 4, Strategy::Auto, None).unwrap().config;
    let mut el = GroupElement::identity(&cfg);
    el.g00 = Matrix::from_i64(2, 2, &[1, 2, 0, 3]);
    el.h00 = Matrix::from_i64(2, 2, &[0, 1, 1, 1]);
    let moved = act(&el, &cfg).unwrap();
    assert!(verify_equivalence(&cfg, &moved, &el));
    assert!(is_constraint_valid(&moved).unwrap());
    assert_eq!(tangent_dims(&moved).unwrap().empirical, tangent_dims(&cfg).unwrap().empirical);
}

#[test]
fn infeasible_and_failing_parameters() {
    assert!(matches!(
        sample_config(&params(2, &[], -1), 0, Strategy::Auto, None),
        Err(Error::InfeasibleParameters(_))
    ));
    assert!(matches!(
        sample_valid(&params(1, &[2], 1), 0, Strategy::SolveC, None, &ScanPlan::default()),
        Err(Error::SamplingFailure(_))
    ));
}

#[test]
fn every_strategy_name_round_trips() {
    for s in ["auto", "commuting", "solve-d", "solve-c", "line-bundle", "linear-slice", "linear-slice-zero-c"] {
        assert_eq!(s.parse::<Strategy>().unwrap().to_string(), s);
    }
    assert!("guess".parse::<Strategy>().is_err());
}
