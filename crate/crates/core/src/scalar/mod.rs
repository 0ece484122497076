//! Exact arithmetic in the field `ℚ(z)`.
//!
//! Matrix entries are rational functions rather than truncated Laurent
//! series, so every valuation and determinant below is exact.

mod poly;
mod ratfunc;

pub use poly::Polynomial;
pub use ratfunc::RationalFunction;

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> num_rational::BigRational {
    num_rational::BigRational::new(n.into(), d.into())
}


#[cfg(test)]
mod tests {
    use super::strategies::rational_function;
    use super::*;
    use crate::ext::Ext;
    use proptest::prelude::*;

    fn mono(c: i64, e: i64) -> RationalFunction {
        RationalFunction::monomial(rat(c, 1), e)
    }

    /// (2 − 2z)/z³
    fn a41() -> RationalFunction {
        RationalFunction::new(
            Polynomial::from_i64_coeffs(&[2, -2]),
            Polynomial::from_i64_coeffs(&[0, 0, 0, 1]),
        )
        .unwrap()
    }

    #[test]
    fn addition_examples() {
        let inv_z = mono(1, -1);
        assert_eq!(&inv_z + &RationalFunction::zero(), inv_z);
        assert!((&inv_z + &mono(-1, -1)).is_zero());
        assert_eq!(&a41() + &mono(2, -2), mono(2, -3));
    }

    #[test]
    fn multiplication_examples() {
        assert!((&RationalFunction::z() * &mono(1, -1)).is_one());
        assert_eq!(&mono(1, -2) * &mono(1, -1), mono(1, -3));
        assert_eq!(
            &a41() * &mono(1, 3),
            RationalFunction::from_polynomial(Polynomial::from_i64_coeffs(&[2, -2]))
        );
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            mono(1, 0).checked_div(&RationalFunction::zero()),
            Err(crate::Error::DivisionByZero)
        ));
        assert!(RationalFunction::new(Polynomial::one(), Polynomial::zero()).is_err());
    }

    #[test]
    fn theta_examples() {
        assert_eq!(mono(1, -3).theta(), mono(-3, -3));
        assert_eq!(mono(7, 5).theta(), mono(35, 5));
        assert!(mono(4, 0).theta().is_zero());
        let expected = RationalFunction::new(
            Polynomial::from_i64_coeffs(&[-6, 4]),
            Polynomial::from_i64_coeffs(&[0, 0, 0, 1]),
        )
        .unwrap();
        assert_eq!(a41().theta(), expected);
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(RationalFunction::zero().valuation(), Ext::Infinity);
        assert_eq!(mono(-5, -2).valuation(), Ext::Finite(-2));
        assert_eq!(a41().valuation(), Ext::Finite(-3));
    }

    #[test]
    fn display_round_trips_through_structure() {
        assert_eq!(a41().to_string(), "(2 - 2*z)/z^3");
        assert_eq!(mono(-5, -2).to_string(), "-5/z^2");
        let r = RationalFunction::new(Polynomial::one(), Polynomial::from_i64_coeffs(&[1, -1]))
            .unwrap();
        assert_eq!(r.to_string(), "-1/(-1 + z)");
    }

    proptest! {
        #[test]
        fn field_axioms(a in rational_function(), b in rational_function(), c in rational_function()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn valuation_is_discrete(a in rational_function(), b in rational_function()) {
            prop_assert_eq!((&a * &b).valuation(), a.valuation() + b.valuation());
            let s = (&a + &b).valuation();
            let m = a.valuation().min(b.valuation());
            prop_assert!(s >= m);
            if a.valuation() != b.valuation() {
                prop_assert_eq!(s, m);
            }
        }

        #[test]
        fn theta_is_a_derivation(a in rational_function(), b in rational_function()) {
            prop_assert_eq!((&a * &b).theta(), &(&a.theta() * &b) + &(&a * &b.theta()));
        }

        #[test]
        fn normalization_is_canonical(a in rational_function(), b in rational_function()) {
            prop_assume!(!b.is_zero());
            // (a·b)/b recovers a with identical storage
            let back = &(&a * &b) / &b;
            prop_assert_eq!(back.numerator(), a.numerator());
            prop_assert_eq!(back.denominator(), a.denominator());
            prop_assert!(a.denominator().leading().unwrap() == &rat(1, 1));
        }
    }
}
