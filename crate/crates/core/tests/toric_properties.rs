use bfunc_core::exact_math::{int, MultiPoly, Rational, VarList};
use bfunc_core::fs_module::{FsContext, FsElement};
use bfunc_core::toric::{check_preserves_subring, DiagonalGroup, Semigroup, SubringPreservation, SummandElement};
use bfunc_core::weyl::{WeylContext, WeylOp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, vars: &VarList, deg: u32, filter: impl Fn(&[u32]) -> bool) -> MultiPoly {
    let mut p = MultiPoly::zero(vars);
    for _ in 0..6 {
        let a = rng.gen_range(0..=deg);
        let b = rng.gen_range(0..=deg - a);
        let e = vec![a, b];
        if filter(&e) {
            let c = Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into());
            p = &p + &MultiPoly::monomial(vars, e, c);
        }
    }
    p
}

fn cyclic_three() -> Semigroup {
    DiagonalGroup::new(2, vec![vec![1, -1]], vec![3]).unwrap().to_semigroup()
}

#[test]
fn beta_is_idempotent_and_linear_over_the_summand() {
    let s = cyclic_three();
    let vars = VarList::new(&["x", "y"]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let a = random_poly(&mut rng, &vars, 8, |e| s.contains_exp(e));
        let p = random_poly(&mut rng, &vars, 8, |_| true);
        let bp = s.split_beta(&p);
        assert_eq!(s.split_beta(&bp), bp);
        assert_eq!(s.split_beta(&(&a * &p)), &a * &bp);
    }
}

#[test]
fn theta_is_identity_on_the_summand() {
    let s = cyclic_three();
    let vars = VarList::new(&["x", "y"]);
    let ctx = FsContext::new(&["x", "y"], vec![MultiPoly::parse("x^4*y", &vars).unwrap()]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..5 {
        let a = random_poly(&mut rng, &vars, 8, |e| s.contains_exp(e));
        let v = FsElement::new(&ctx, &a, k).unwrap();
        assert_eq!(s.theta_split(&v).unwrap().coeff(), v.coeff());
    }
    let bad = FsContext::new(&["x", "y"], vec![MultiPoly::parse("x", &vars).unwrap()]).unwrap();
    assert!(s.theta_split(&FsElement::generator(&bad)).is_err());
}

#[test]
fn exact_preservation_matches_restriction() {
    let s = cyclic_three();
    let ctx = WeylContext::new(&["x", "y"], &[] as &[&str]);
    let op = WeylOp::parse("1/256*d_x^4*d_y", &ctx).unwrap();
    let bound = 12;
    assert!(matches!(
        check_preserves_subring(&s, &op, bound).unwrap(),
        SubringPreservation::PreservedUpToBound { exact: true, .. }
    ));
    let r = s.restrict_operator(&op);
    for v in s.elements_up_to_degree(bound) {
        let a = SummandElement::new(&s, MultiPoly::monomial(ctx.xvars(), v, int(1))).unwrap();
        assert_eq!(r.apply(&a, None).unwrap().poly(), &op.apply(a.poly(), None).unwrap());
    }
    for e in [[4u32, 1], [8, 2], [7, 4]] {
        let a = SummandElement::new(&s, MultiPoly::monomial(ctx.xvars(), e.to_vec(), int(1))).unwrap();
        let img = op.apply(a.poly(), None).unwrap();
        assert!(img.terms().all(|(m, _)| s.contains_exp(&m.0)));
    }
}

#[test]
fn veronese_is_not_preserved_by_a_first_order_operator() {
    let v = DiagonalGroup::new(2, vec![vec![1, 0], vec![0, 1]], vec![2, 2]).unwrap().to_semigroup();
    assert!(!v.projections_surject());
    let ctx = WeylContext::new(&["x", "y"], &[] as &[&str]);
    let op = WeylOp::parse("d_x", &ctx).unwrap();
    match check_preserves_subring(&v, &op, 4).unwrap() {
        SubringPreservation::Counterexample { exponent, .. } => assert_eq!(exponent, vec![2, 0]),
        other => panic!("{other:?}"),
    }
    assert!(check_preserves_subring(&v, &WeylOp::parse("d_x^2", &ctx).unwrap(), 4).is_ok());
}

#[test]
fn subspace_semigroups_use_the_bounded_sweep() {
    let s = Semigroup::new(vec![vec![1, 0], vec![0, 1]], vec![vec![int(1), int(-1)]]).unwrap();
    assert!(s.contains_exp(&[3, 3]));
    assert!(!s.contains_exp(&[3, 2]));
    let ctx = WeylContext::new(&["x", "y"], &[] as &[&str]);
    let op = WeylOp::parse("d_x*d_y", &ctx).unwrap();
    assert_eq!(
        check_preserves_subring(&s, &op, 10).unwrap(),
        SubringPreservation::PreservedUpToBound { bound: 10, exact: false }
    );
}
