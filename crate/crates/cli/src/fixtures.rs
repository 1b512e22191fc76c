//! The shipped fixture corpus, embedded in the binary.

pub struct Fixture {
    pub name: &'static str,
    pub file: &'static str,
    pub expected_exit: i32,
    pub description: &'static str,
    pub source: &'static str,
}

macro_rules! fixture {
    ($name:literal, $exit:literal, $desc:literal) => {
        Fixture {
            name: $name,
            file: concat!($name, ".job"),
            expected_exit: $exit,
            description: $desc,
            source: include_str!(concat!("../fixtures/", $name, ".job")),
        }
    };
}

pub const CATALOG: &[Fixture] = &[
    fixture!("xy_xz_feq", 0, "BMS equation for (xy, xz) with d_x*d_y, d_x*d_z and b = (s+1)(s+2)"),
    fixture!("xy_xz_corrupted_b", 2, "negative control: the (xy, xz) equation with b replaced by (s+1)(s+3)"),
    fixture!("big_example_feq", 0, "BMS equation for (xz^2, yz^3) with four operators and a degree 6 b"),
    fixture!("x4y_feq", 0, "principal equation for x^4 y with 1/256 d_x^4 d_y"),
    fixture!("xy_quotient_feq", 0, "A = C[x,y]/<xy>, f = x, x d_x^2 with b = s(s+1); the operator preserves <xy>"),
    fixture!("cusp_feq", 0, "cusp C[x^2,x^3], f = x^2, graded operator of degree -2 with b = (2s+2)(2s-1)"),
    fixture!("veronese_compare", 2, "Veronese K[x^2,y^2], I = <x^2,y^2>, lambda = 1: intersection is the maximal ideal, intrinsic is A"),
    fixture!("veronese_test_ideal", 2, "Veronese K[x^2,y^2] test ideals at p = 5: intrinsic and retraction differ, the inclusion is not Cartier extensible"),
    fixture!("veronese_restrict_dx", 2, "d_x does not preserve K[x^2,y^2]; the smallest counterexample is reported"),
    fixture!("cyclic_euler_restrict", 0, "a degree 0 operator restricted to K[xy,x^3,y^3]"),
    fixture!("cyclic_extensible", 0, "invariants of diag(w, w^-1), w^3 = 1: lattice index and Cartier extensibility at p = 5"),
    fixture!("x2_search", 0, "blank ansatz search for x^2 recovers (s+1)(s+1/2)"),
    fixture!("x2_search_too_small", 3, "search for x^2 with operators of order 1 finds nothing within bounds"),
    fixture!("xy_xz_search", 0, "blank BMS ansatz search for (xy, xz) recovers (s+1)(s+2)"),
    fixture!("x4y_summand_search", 0, "search for x^4 y restricted to K[xy,x^3,y^3] operators"),
    fixture!("mustata_xy_xz", 0, "b of y1 xy + y2 xz equals (s+1) times b of (xy, xz)"),
    fixture!("xy_xz_lct", 0, "log canonical threshold of <xy, xz>"),
    fixture!("xy_xz_jumping", 0, "jumping numbers of <xy, xz> up to 3"),
    fixture!("x2_y2_multiplier", 0, "multiplier ideal of <x^2, y^2> at lambda = 1"),
    fixture!("x2_y3_vfil", 0, "V-filtration of <x^2, y^3> at alpha = 5/6"),
    fixture!("x2y3_hodge0", 0, "zeroth Hodge ideal of x^2 y^3 at lambda = 1/2"),
    fixture!("x2_y2_test_ideal", 0, "test ideal of <x^2, y^2> at lambda = 1/2 and p = 101"),
];

pub fn find(name: &str) -> Option<&'static Fixture> {
    let name = name.strip_suffix(".job").unwrap_or(name);
    CATALOG.iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_nonempty_and_parses() {
        assert!(!CATALOG.is_empty());
        for f in CATALOG {
            crate::job::parse_job(f.source).unwrap_or_else(|e| panic!("{}: {e}", f.name));
        }
    }

    #[test]
    fn catalog_names_the_reference_fixtures() {
        assert!(find("cusp_feq").is_some());
        assert!(find("veronese_compare.job").is_some());
        assert!(find("missing").is_none());
    }
}
