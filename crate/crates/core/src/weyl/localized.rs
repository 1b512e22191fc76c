//! Action on localized polynomials `h / F^k`.

use super::{WeylError, WeylOp};
use crate::exact_math::{LaurentLoc, MultiPoly};

impl WeylOp {
    /// Computes `δ • (h / F^k)` by induction on the order of `δ`:
    /// `δ•(h/F^k) = (δ•h − [δ, F^k]•(h/F^k)) / F^k`, with order-0
    /// operators acting by multiplication.
    pub fn apply_localized(&self, v: &LaurentLoc) -> Result<LaurentLoc, WeylError> {
        let ring = self.context().ring_vars();
        let v = if v.numerator().vars() == ring {
            v.clone()
        } else {
            let lift = |p: &MultiPoly| p.embed_by_name(ring);
            let factors = v.factors().iter().map(lift).collect::<Result<Vec<_>, _>>()?;
            LaurentLoc::new(lift(v.numerator())?, v.denom_exponent(), &factors)
        };
        self.apply_localized_inner(&v)
    }

    fn apply_localized_inner(&self, v: &LaurentLoc) -> Result<LaurentLoc, WeylError> {
        if let Some(p) = self.as_poly() {
            return Ok(v.mul_poly(&p));
        }
        let k = v.denom_exponent();
        let h = v.numerator();
        let dh = LaurentLoc::with_base(self.act(h)?, 0, v.factors().to_vec(), v.base().clone());
        if k == 0 {
            return Ok(dh);
        }
        let fk = WeylOp::from_poly(self.context(), &v.base().pow(k))?;
        let rho = self.commutator(&fk)?;
        let correction = rho.apply_localized_inner(v)?;
        Ok(dh.sub(&correction).div_base_pow(k))
    }
}

#[cfg(test)]
mod tests {
    use super::super::WeylContext;
    use super::*;
    use crate::exact_math::MultiPoly;

    fn loc(num: &str, k: u32, f: &str, ctx: &WeylContext) -> LaurentLoc {
        let v = ctx.xvars();
        LaurentLoc::new(MultiPoly::parse(num, v).unwrap(), k, &[MultiPoly::parse(f, v).unwrap()])
    }

    #[test]
    fn derivatives_of_inverse_powers() {
        let ctx = WeylContext::new(&["x", "y"], &[] as &[&str]);
        let dx = WeylOp::parse("d_x", &ctx).unwrap();
        assert_eq!(dx.apply_localized(&loc("1", 1, "x", &ctx)).unwrap(), loc("-1", 2, "x", &ctx));
        assert_eq!(dx.apply_localized(&loc("y", 1, "x", &ctx)).unwrap(), loc("-y", 2, "x", &ctx));
        let dx2 = WeylOp::parse("d_x^2", &ctx).unwrap();
        assert_eq!(dx2.apply_localized(&loc("1", 1, "x", &ctx)).unwrap(), loc("2", 3, "x", &ctx));
    }

    #[test]
    fn quotient_rule_oracle() {
        // ∂(h/F^k) = (F ∂h − k h ∂F) / F^{k+1}
        let ctx = WeylContext::new(&["x", "y"], &[] as &[&str]);
        let v = ctx.xvars();
        let f = MultiPoly::parse("x*y + x^2", v).unwrap();
        let h = MultiPoly::parse("y^3 - 2*x + 1/3", v).unwrap();
        for k in 0..3u32 {
            let got = WeylOp::parse("d_x", &ctx)
                .unwrap()
                .apply_localized(&LaurentLoc::new(h.clone(), k, &[f.clone()]))
                .unwrap();
            let kk = crate::exact_math::int(k as i64);
            let num = &(&f * &h.derivative(0)) - &(&h * &f.derivative(0)).scale(&kk);
            assert_eq!(got, LaurentLoc::new(num, k + 1, &[f.clone()]));
        }
    }
}
