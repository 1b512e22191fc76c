use bfunc_core::birational::{jumping_numbers, multiplier_monomial};
use bfunc_core::exact_math::{int, rat, Rational};
use bfunc_core::positive_char::{
    test_ideal_level, test_ideal_level_brute_force, test_ideal_monomial, CartierMap, PrimeFieldPoly,
    DEFAULT_SEARCH_CAP,
};
use bfunc_core::MonomialIdeal;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_fp(rng: &mut ChaCha8Rng, p: u64, d: usize, deg: u32) -> PrimeFieldPoly {
    let terms: Vec<(Vec<u32>, i64)> = (0..4)
        .map(|_| ((0..d).map(|_| rng.gen_range(0..=deg)).collect(), rng.gen_range(1..p as i64)))
        .collect();
    PrimeFieldPoly::from_terms(p, d, terms).unwrap()
}

#[test]
fn cartier_maps_are_p_inverse_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in [3u64, 5, 7] {
        for _ in 0..200 {
            let e = rng.gen_range(1..=2);
            let q = p.pow(e) as u32;
            let u: Vec<u32> = (0..2).map(|_| rng.gen_range(0..q)).collect();
            let psi = CartierMap::new(p, e, u).unwrap();
            let r = random_fp(&mut rng, p, 2, 3);
            let f = random_fp(&mut rng, p, 2, 2 * q);
            let lhs = psi.apply(&r.frobenius(e).unwrap().mul(&f).unwrap()).unwrap();
            let rhs = r.mul(&psi.apply(&f).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        // Shift law ψ_u(x^{q} f) = x ψ_u(f) in one variable.
        let psi = CartierMap::new(p, 1, vec![1]).unwrap();
        let f = PrimeFieldPoly::from_terms(p, 1, [(vec![1], 1), (vec![p as u32 + 1], 2)]).unwrap();
        let xq = PrimeFieldPoly::monomial(p, vec![p as u32]).unwrap();
        let x = PrimeFieldPoly::monomial(p, vec![1]).unwrap();
        assert_eq!(
            psi.apply(&xq.mul(&f).unwrap()).unwrap(),
            x.mul(&psi.apply(&f).unwrap()).unwrap()
        );
    }
}

#[test]
fn closed_form_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [3u64, 5, 7] {
        for e in 1..=2 {
            for _ in 0..20 {
                let d = rng.gen_range(1..=if p.pow(e) <= 9 { 3 } else { 2 });
                let k = rng.gen_range(1..=3);
                let gens: Vec<Vec<u32>> = (0..k)
                    .map(|_| {
                        let mut v: Vec<u32> = (0..d).map(|_| rng.gen_range(0..=3)).collect();
                        if v.iter().all(|&x| x == 0) {
                            v[0] = 1;
                        }
                        v
                    })
                    .collect();
                let i = MonomialIdeal::new(d, gens);
                let lambda = rat(rng.gen_range(1..=6), 4);
                let closed = test_ideal_level(&i, &lambda, p, e, DEFAULT_SEARCH_CAP).unwrap().unwrap();
                let brute = test_ideal_level_brute_force(&i, &lambda, p, e).unwrap();
                assert_eq!(closed, brute, "I = {i}, lambda = {lambda}, p = {p}, e = {e}");
            }
        }
    }
}

#[test]
fn monotone_in_lambda_and_unit_at_zero() {
    let i = MonomialIdeal::new(2, vec![vec![2, 0], vec![1, 1], vec![0, 3]]);
    let lambdas = [int(0), rat(1, 3), rat(1, 2), int(1), rat(3, 2), int(2)];
    let taus: Vec<MonomialIdeal> = lambdas
        .iter()
        .map(|l| test_ideal_monomial(&i, l, 5, 4, DEFAULT_SEARCH_CAP).unwrap().ideal)
        .collect();
    assert!(taus[0].is_unit());
    for w in taus.windows(2) {
        assert!(w[1].is_subset_of(&w[0]));
    }
}

fn monomial_fixtures() -> Vec<MonomialIdeal> {
    vec![
        MonomialIdeal::new(2, vec![vec![2, 0], vec![0, 2]]),
        MonomialIdeal::new(3, vec![vec![1, 1, 0], vec![1, 0, 1]]),
        MonomialIdeal::new(1, vec![vec![1]]),
        MonomialIdeal::new(2, vec![vec![4, 1]]),
        MonomialIdeal::new(2, vec![vec![2, 0], vec![0, 3]]),
    ]
}

#[test]
fn test_ideals_match_multiplier_ideals_for_large_p() {
    let lambdas = [rat(1, 4), rat(1, 2), int(1), rat(3, 2)];
    for i in monomial_fixtures() {
        let jumps = jumping_numbers(&i, &int(2)).unwrap();
        for lambda in lambdas.iter().filter(|l| !jumps.contains(l)) {
            let j = multiplier_monomial(&i, lambda).unwrap();
            for p in [101u64, 211, 401] {
                let r = test_ideal_monomial(&i, lambda, p, 4, DEFAULT_SEARCH_CAP).unwrap();
                assert_eq!(r.ideal, j, "I = {i}, lambda = {lambda}, p = {p}");
                assert!(r.stabilized_at.is_some(), "I = {i}, lambda = {lambda}, p = {p}");
            }
        }
    }
}

#[test]
fn level_cap_is_reported() {
    let i = MonomialIdeal::new(2, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    let r = test_ideal_monomial(&i, &Rational::from_integer(3.into()), 401, 4, 3).unwrap();
    assert!(r.capped);
    assert_eq!(r.stabilized_at, None);
}
