use adhm_core::adhm::AdhmParams;
use adhm_core::lattice::{chi_line, intersect, monad_dims, moduli_dim_formulas, ChernCharacter, DivisorClass};
use adhm_core::monad::cohomology_ch_check;
use adhm_core::rational::q;
use proptest::prelude::*;

fn class(n: usize) -> impl Strategy<Value = DivisorClass> {
    (-6i64..6, prop::collection::vec(-4i64..4, n)).prop_map(|(p, q)| DivisorClass::new(p, q))
}

#[test]
fn chi_anchors() {
    assert_eq!(chi_line(&DivisorClass::zero(0)).unwrap(), q(1));
    assert_eq!(chi_line(&DivisorClass::new(1, vec![])).unwrap(), q(3));
    assert_eq!(chi_line(&DivisorClass::new(-3, vec![2, 1])).unwrap(), q(0));
    assert_eq!(chi_line(&DivisorClass::exceptional(1, 1)).unwrap(), q(1));
    assert_eq!(chi_line(&DivisorClass::new(0, vec![-1])).unwrap(), q(0));
}

#[test]
fn line_bundle_dims() {
    let d = monad_dims(1, &[-1], 0).unwrap();
    assert_eq!((d.dim_k, d.dim_l, d.rank_w), (vec![0, 1], vec![1, 0], 3));
    assert!(monad_dims(1, &[], -1).is_err());
    assert_eq!(moduli_dim_formulas(2, &[], 1), (4, 2));
}

proptest! {
    #[test]
    fn serre_duality(d in (0usize..4).prop_flat_map(class)) {
        let n = d.n();
        let dual = &DivisorClass::canonical(n) - &d;
        prop_assert_eq!(chi_line(&d).unwrap(), chi_line(&dual).unwrap());
    }

    #[test]
    fn riemann_roch_is_quadratic(
        (d1, d2) in (0usize..4).prop_flat_map(|n| (class(n), class(n)))
    ) {
        let n = d1.n();
        let lhs = chi_line(&(&d1 + &d2)).unwrap() - chi_line(&d1).unwrap() - chi_line(&d2).unwrap()
            + chi_line(&DivisorClass::zero(n)).unwrap();
        prop_assert_eq!(lhs, q(intersect(&d1, &d2).unwrap()));
    }

    #[test]
    fn line_bundle_euler_characteristic(d in (0usize..4).prop_flat_map(class)) {
        prop_assert_eq!(ChernCharacter::of_line_bundle(&d).euler_characteristic(), chi_line(&d).unwrap());
    }

    #[test]
    fn monad_ranks_balance(
        r in 1i64..4,
        a in prop::collection::vec(-3i64..4, 0..4),
        k in 0i64..6,
    ) {
        if let Ok(d) = monad_dims(r, &a, k) {
            prop_assert_eq!(d.rank_w as i64, 2 * d.total_l() as i64 + r);
            prop_assert_eq!(d.total_k(), d.total_l());
            let ch = cohomology_ch_check(&d, &AdhmParams::new(r as usize, a.clone(), k)).unwrap();
            prop_assert_eq!(ch.rank, r);
            let (weighted, free) = moduli_dim_formulas(r, &a, k);
            prop_assert!(weighted >= free);
        }
    }
}
