use bfunc_core::bs_solver::{divide_by_s_plus_one, mustata_lift, search_feq, AnsatzSpec};
use bfunc_core::exact_math::{rat, MultiPoly, VarList};
use bfunc_core::fs_module::FsContext;
use bfunc_core::toric::DiagonalGroup;

fn s_poly(src: &str) -> MultiPoly {
    MultiPoly::parse(src, &VarList::new(&["s"])).unwrap()
}

fn polys(x: &[&str], fs: &[&str]) -> Vec<MultiPoly> {
    let vars = VarList::new(x);
    fs.iter().map(|f| MultiPoly::parse(f, &vars).unwrap()).collect()
}

#[test]
fn bms_pair_and_mustata_lift() {
    let x = ["x", "y", "z"];
    let f = polys(&x, &["x*y", "x*z"]);
    let ctx = FsContext::new(&x, f.clone()).unwrap();
    let r = search_feq(&ctx, None, &AnsatzSpec::bms(2, 2, 0, 0, 4)).unwrap();
    assert_eq!(r.b, s_poly("(s+1)*(s+2)"));
    assert!(r.minimal_within_bounds);

    let names: Vec<String> = x.iter().map(|s| s.to_string()).collect();
    let (_, hctx) = mustata_lift(&names, &f).unwrap();
    let rh = search_feq(&hctx, None, &AnsatzSpec::principal(3, 0, 0, 4)).unwrap();
    assert_eq!(rh.b, &s_poly("s+1") * &r.b);
    assert_eq!(divide_by_s_plus_one(&rh.b).unwrap(), r.b);
}

#[test]
fn b_is_invariant_under_scaling() {
    let base = search_feq(
        &FsContext::new(&["x"], polys(&["x"], &["x^2"])).unwrap(),
        None,
        &AnsatzSpec::principal(2, 0, 0, 3),
    )
    .unwrap();
    for lambda in [rat(2, 1), rat(-1, 3)] {
        let f = polys(&["x"], &["x^2"])[0].scale(&lambda);
        let r = search_feq(&FsContext::new(&["x"], vec![f]).unwrap(), None, &AnsatzSpec::principal(2, 0, 0, 3)).unwrap();
        assert_eq!(r.b, base.b);
    }
}

#[test]
fn summand_search_matches_polynomial_ring() {
    let x = ["x", "y"];
    let ctx = FsContext::new(&x, polys(&x, &["x^4*y"])).unwrap();
    let plain = search_feq(&ctx, None, &AnsatzSpec::principal(5, 0, 0, 5)).unwrap();
    assert_eq!(plain.b, s_poly("(s+1)^2*(s+3/4)*(s+1/2)*(s+1/4)"));
    let mut a = AnsatzSpec::principal(5, 0, 0, 5);
    a.subring = Some(DiagonalGroup::new(2, vec![vec![1, -1]], vec![3]).unwrap().to_semigroup());
    let restricted = search_feq(&ctx, None, &a).unwrap();
    assert_eq!(restricted.b, plain.b);
    assert!(restricted.unknowns < plain.unknowns);
}

#[test]
fn relative_equation_with_g() {
    let x = ["x"];
    let ctx = FsContext::new(&x, polys(&x, &["x"])).unwrap();
    let g = polys(&x, &["x"]).remove(0);
    let mut a = AnsatzSpec::principal(1, 0, 0, 3);
    a.kind = bfunc_core::fs_module::FeqKind::Relative;
    let r = search_feq(&ctx, Some(&g), &a).unwrap();
    assert_eq!(r.b, s_poly("s+2"));
}
