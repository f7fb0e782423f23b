use proptest::prelude::*;

use extorb_core::class::{act_n, act_v, pair_act, parse_class, print_class, ExtensionClass};
use extorb_core::fp::{gl_order, FpMatrix, GlEnumeration, Prime};
use extorb_core::forms::{
    arf_democratic, arf_symplectic, arf_symplectic_from, classify, coefficient_dim, equivalent, reduce_to_standard,
    standard_for_triple, QuadraticFormF2,
};
use extorb_core::orbit::{
    divisibility_check, im_rho_order, joint_stabilizer, omega, stabilizer_n, stabilizer_v, Convention, EngineConfig,
};
use num_bigint::BigUint;

fn cfg() -> EngineConfig {
    EngineConfig::default()
}

fn gl(m: usize, p: u32) -> GlEnumeration {
    GlEnumeration::new(m, Prime::new(p).unwrap(), u64::MAX).unwrap()
}

fn gl_elem(m: usize, p: u32) -> impl Strategy<Value = FpMatrix> {
    let g = gl(m, p);
    (0..g.len()).prop_map(move |i| g.unrank(i).unwrap())
}

fn form(m: usize) -> impl Strategy<Value = QuadraticFormF2> {
    let len = m * (m + 1) / 2;
    proptest::collection::vec(0u8..2, len).prop_map(move |c| QuadraticFormF2::new(m, c).unwrap())
}

/// A random class, built from its coefficient matrix.
fn class(p: u32, m: usize, n: usize) -> impl Strategy<Value = ExtensionClass> {
    let d = coefficient_dim(m);
    let pr = Prime::new(p).unwrap();
    proptest::collection::vec(0..p as u8, d * n).prop_map(move |c| {
        let mat = FpMatrix::from_fn(pr, d, n, |i, j| c[i * n + j] as i64);
        ExtensionClass::from_coefficient_matrix(pr, m, &mat).unwrap()
    })
}

/// Nondegenerate forms in an even number of variables.
fn nondegenerate(m: usize) -> impl Strategy<Value = QuadraticFormF2> {
    form(m).prop_filter("nondegenerate", |q| arf_symplectic(q).is_ok())
}

fn basis_of(s: &FpMatrix) -> Vec<Vec<u8>> {
    (0..s.cols()).map(|j| s.column(j)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arf_independent_of_symplectic_basis(q in nondegenerate(6), s in gl_elem(6, 2)) {
        let base = arf_symplectic(&q).unwrap();
        prop_assert_eq!(arf_symplectic_from(&q, &basis_of(&s)).unwrap(), base);
        prop_assert_eq!(arf_democratic(&q).unwrap(), base);
    }

    #[test]
    fn triple_is_invariant(q in form(4), s in gl_elem(4, 2)) {
        prop_assert_eq!(classify(&q.change_basis(&s).unwrap()).unwrap(), classify(&q).unwrap());
    }

    #[test]
    fn reduction_reaches_the_standard_form(q in form(4)) {
        let (s, std) = reduce_to_standard(&q).unwrap();
        prop_assert_eq!(q.change_basis(&s).unwrap(), std.clone());
        let t = classify(&q).unwrap();
        if let Ok((_, _, want)) = standard_for_triple(t) {
            prop_assert_eq!(std, want);
        }
    }

    #[test]
    fn equivalence_witness_is_valid(q in form(3), s in gl_elem(3, 2)) {
        let other = q.change_basis(&s).unwrap();
        let (eq, w) = equivalent(&q, &other, true).unwrap();
        prop_assert!(eq);
        prop_assert_eq!(q.change_basis(&w.unwrap()).unwrap(), other);
    }

    #[test]
    fn left_action_axioms(e in class(2, 3, 2), a in gl_elem(3, 2), b in gl_elem(3, 2)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(act_v(&ab, &e).unwrap(), act_v(&a, &act_v(&b, &e).unwrap()).unwrap());
        prop_assert_eq!(act_v(&FpMatrix::identity(Prime::TWO, 3), &e).unwrap(), e);
    }

    #[test]
    fn right_action_axioms(e in class(3, 2, 2), a in gl_elem(2, 3), b in gl_elem(2, 3)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(act_n(&ab, &e).unwrap(), act_n(&a, &act_n(&b, &e).unwrap()).unwrap());
        prop_assert_eq!(act_n(&FpMatrix::identity(Prime::new(3).unwrap(), 2), &e).unwrap(), e);
    }

    #[test]
    fn the_two_actions_commute(e in class(3, 2, 2), s in gl_elem(2, 3), t in gl_elem(2, 3)) {
        let one = act_n(&t, &act_v(&s, &e).unwrap()).unwrap();
        let two = act_v(&s, &act_n(&t, &e).unwrap()).unwrap();
        prop_assert_eq!(&one, &two);
        prop_assert_eq!(pair_act(&s, &t, &e).unwrap(), one);
    }

    #[test]
    fn classes_round_trip_through_text(e in class(3, 3, 2)) {
        let text = print_class(&e);
        prop_assert_eq!(parse_class(&text, e.prime(), e.m(), e.n()).unwrap(), e);
    }

    #[test]
    fn ledger_identity_and_omega_axioms(e in class(2, 3, 2)) {
        let r = im_rho_order(&e, &cfg()).unwrap();
        let joint = joint_stabilizer(&e, &cfg()).unwrap();
        prop_assert_eq!(&joint.order, &(&r.stab_v * &r.stab_n * &r.omega));
        prop_assert_eq!(&stabilizer_v(&e, &cfg()).unwrap().order, &r.stab_v);
        prop_assert_eq!(&stabilizer_n(&e, &cfg()).unwrap().order, &r.stab_n);
        let g = omega(&e, &cfg()).unwrap();
        prop_assert!(g.check_axioms().is_ok());
        prop_assert_eq!(BigUint::from(g.order()), r.omega.clone());
        prop_assert!(divisibility_check(&e, &cfg()).unwrap().divides);
    }

    #[test]
    fn orders_are_orbit_invariant(e in class(2, 3, 2), s in gl_elem(3, 2), t in gl_elem(2, 2)) {
        let moved = pair_act(&s, &t, &e).unwrap();
        prop_assert_eq!(im_rho_order(&moved, &cfg()).unwrap(), im_rho_order(&e, &cfg()).unwrap());
    }

    #[test]
    fn orders_independent_of_convention(e in class(3, 2, 2)) {
        let a = im_rho_order(&e, &cfg()).unwrap();
        let b = im_rho_order(&e, &cfg().with_convention(Convention::Transpose)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn results_independent_of_workers(e in class(2, 3, 2)) {
        let one = cfg().with_workers(1);
        let eight = cfg().with_workers(8);
        prop_assert_eq!(joint_stabilizer(&e, &one).unwrap(), joint_stabilizer(&e, &eight).unwrap());
        prop_assert_eq!(omega(&e, &one).unwrap(), omega(&e, &eight).unwrap());
    }

    #[test]
    fn stabilizer_order_divides_group_order(e in class(3, 2, 1)) {
        let r = joint_stabilizer(&e, &cfg()).unwrap();
        let p = Prime::new(3).unwrap();
        let whole = gl_order(2, p) * gl_order(1, p);
        prop_assert_eq!(&whole % &r.order, BigUint::from(0u32));
    }
}
