//! Integral Weierstrass models, their standard invariants, and the conductor
//! family y^2 + y = x^3 + a x^2 + b x + n.
//!
//! The family is the model (a1, a2, a3, a4, a6) = (0, a, 1, b, n). Its
//! discriminant, as a quadratic polynomial in n, is
//!
//! ```text
//! Delta(n) = -432 n^2 + (-64 a^3 + 288 a b - 216) n
//!            + (-16 a^3 + 16 a^2 b^2 - 64 b^3 + 72 a b - 27)
//! ```
//!
//! with discriminant (as a quadratic in n) equal to 2^12 (a^2 - 3b)^3, and
//! Delta(n) ≡ 5 mod 8 for every integer triple. A pair (a, b) is admissible
//! when 3 does not divide both a and b and a^2 - 3b is not a perfect square;
//! then Delta has no fixed square divisor and takes squarefree values
//! infinitely often under standard conjectures.

use crate::arith::{factor, is_prime, is_perfect_square, Factorization};
use crate::{Error, Result};

/// Coefficients (a1, a2, a3, a4, a6) of an integral Weierstrass model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeierstrassModel {
    pub a1: i128,
    pub a2: i128,
    pub a3: i128,
    pub a4: i128,
    pub a6: i128,
}

/// The standard b-, c- and discriminant invariants of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantSet {
    pub b2: i128,
    pub b4: i128,
    pub b6: i128,
    pub b8: i128,
    pub c4: i128,
    pub c6: i128,
    pub delta: i128,
}

/// The standard invariants. Plain i128 arithmetic; callers keep coefficients
/// small enough that nothing here exceeds 127 bits.
pub fn invariants(m: &WeierstrassModel) -> InvariantSet {
    let WeierstrassModel { a1, a2, a3, a4, a6 } = *m;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = b2 * b2 - 24 * b4;
    let c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    let delta = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
    debug_assert_eq!(4 * b8, b2 * b6 - b4 * b4);
    InvariantSet {
        b2,
        b4,
        b6,
        b8,
        c4,
        c6,
        delta,
    }
}

/// Parameters (a, b, n) of the family curve y^2 + y = x^3 + a x^2 + b x + n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    pub a: i64,
    pub b: i64,
    pub n: i64,
}

/// The Weierstrass model (0, a, 1, b, n) of the family curve.
pub fn family_model(params: FamilyParams) -> WeierstrassModel {
    WeierstrassModel {
        a1: 0,
        a2: params.a as i128,
        a3: 1,
        a4: params.b as i128,
        a6: params.n as i128,
    }
}

/// Coefficients (c2, c1, c0) of Delta(n) = c2 n^2 + c1 n + c0 for fixed (a, b).
pub fn family_discriminant_coeffs(a: i64, b: i64) -> (i128, i128, i128) {
    let (a, b) = (a as i128, b as i128);
    (
        -432,
        -64 * a * a * a + 288 * a * b - 216,
        -16 * a * a * a + 16 * a * a * b * b - 64 * b * b * b + 72 * a * b - 27,
    )
}

/// Discriminant of the family curve by the closed quadratic-in-n form.
pub fn family_discriminant(params: FamilyParams) -> i128 {
    let (c2, c1, c0) = family_discriminant_coeffs(params.a, params.b);
    let n = params.n as i128;
    c2 * n * n + c1 * n + c0
}

/// Discriminant of the quadratic n -> Delta(n): 2^12 (a^2 - 3b)^3.
pub fn family_quadratic_discriminant(a: i64, b: i64) -> i128 {
    let t = (a as i128) * (a as i128) - 3 * (b as i128);
    4096 * t * t * t
}

/// Admissibility of (a, b): 3 must not divide both a and b, and a^2 - 3b must
/// not be a perfect square (0 counts as a square). Exactly then Delta(n) is
/// always nonzero, coprime to 6 infinitely often, and not forced into a fixed
/// square divisor.
pub fn family_admissible(a: i64, b: i64) -> bool {
    if a % 3 == 0 && b % 3 == 0 {
        return false;
    }
    !is_perfect_square((a as i128) * (a as i128) - 3 * (b as i128))
}

/// Reduction type of a model at an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionType {
    Good,
    Multiplicative,
    Additive,
}

/// Reduction type at an odd prime p: good if p does not divide Delta,
/// multiplicative if p divides Delta but not c4, additive otherwise. Only
/// valid for models minimal at p; p = 2 is rejected.
pub fn reduction_type(m: &WeierstrassModel, p: u128) -> Result<ReductionType> {
    if p == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    if !is_prime(p as i128) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let inv = invariants(m);
    let p = p as i128;
    if inv.delta.rem_euclid(p) != 0 {
        Ok(ReductionType::Good)
    } else if inv.c4.rem_euclid(p) != 0 {
        Ok(ReductionType::Multiplicative)
    } else {
        Ok(ReductionType::Additive)
    }
}

/// Sufficient minimality check: when no prime divides Delta to the 12th
/// power, no rescaling can shrink the discriminant, so the model is minimal.
pub fn minimal_by_exponent(f: &Factorization) -> bool {
    f.factors().iter().all(|&(_, e)| e < 12)
}

// N = |Delta| exactly when Delta is squarefree with multiplicative reduction
// at every prime divisor; Delta ≡ 5 mod 8 makes every factor odd
pub(crate) fn conductor_from_factorization(
    m: &WeierstrassModel,
    f: &Factorization,
) -> Option<u128> {
    if !f.is_squarefree() {
        return None;
    }
    for &(p, _) in f.factors() {
        match reduction_type(m, p) {
            Ok(ReductionType::Multiplicative) => {}
            _ => return None,
        }
    }
    Some(f.product())
}

/// The conductor of the family curve when it equals |Delta|: Delta must be
/// squarefree with multiplicative reduction at every prime divisor. Returns
/// None otherwise, or when factoring Delta fails.
pub fn family_conductor(params: FamilyParams) -> Option<u128> {
    let delta = family_discriminant(params);
    let f = factor(delta).ok()?;
    conductor_from_factorization(&family_model(params), &f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_of_a_known_model() {
        // y^2 + y = x^3 + x^2 + x, conductor 19
        let m = WeierstrassModel {
            a1: 0,
            a2: 1,
            a3: 1,
            a4: 1,
            a6: 0,
        };
        let inv = invariants(&m);
        assert_eq!(
            (inv.b2, inv.b4, inv.b6, inv.b8),
            (4, 2, 1, 0)
        );
        assert_eq!((inv.c4, inv.c6, inv.delta), (-32, 8, -19));
    }

    #[test]
    fn invariants_of_conductor_37_curve() {
        // y^2 + y = x^3 - x, the rank one curve of conductor 37
        let m = WeierstrassModel {
            a1: 0,
            a2: 0,
            a3: 1,
            a4: -1,
            a6: 0,
        };
        assert_eq!(invariants(&m).delta, 37);
    }

    #[test]
    fn closed_form_matches_known_values() {
        let cases = [
            ((1, 1, 0), -19),
            ((1, 1, 1), -443),
            ((0, 0, 0), -27),
            ((2, 1, 0), -11),
        ];
        for ((a, b, n), expect) in cases {
            let params = FamilyParams { a, b, n };
            assert_eq!(family_discriminant(params), expect, "{params:?}");
            assert_eq!(invariants(&family_model(params)).delta, expect);
        }
    }

    #[test]
    fn closed_form_agrees_with_invariants_on_a_grid() {
        for a in -12..=12 {
            for b in -12..=12 {
                for n in -12..=12 {
                    let params = FamilyParams { a, b, n };
                    let delta = family_discriminant(params);
                    assert_eq!(delta, invariants(&family_model(params)).delta, "{params:?}");
                    assert_eq!(delta.rem_euclid(8), 5, "{params:?}");
                }
            }
        }
    }

    #[test]
    fn quadratic_discriminant_identity() {
        for a in -30..=30 {
            for b in -30..=30 {
                let (c2, c1, c0) = family_discriminant_coeffs(a, b);
                assert_eq!(c2, -432);
                assert_eq!(
                    c1 * c1 - 4 * c2 * c0,
                    family_quadratic_discriminant(a, b),
                    "a = {a}, b = {b}"
                );
            }
        }
    }

    #[test]
    fn admissibility_known_values() {
        assert!(family_admissible(1, 1));
        assert!(family_admissible(0, 1));
        // a^2 - 3b = 1, a perfect square
        assert!(!family_admissible(2, 1));
        // both divisible by 3
        assert!(!family_admissible(3, -3));
        assert!(!family_admissible(0, 0));
        // a^2 - 3b = 0 counts as a square
        assert!(!family_admissible(3, 3));
        assert!(family_admissible(-1, 1));
    }

    #[test]
    fn reduction_types_of_known_curves() {
        let m = family_model(FamilyParams { a: 1, b: 1, n: 0 });
        // delta = -19, c4 = -32
        assert!(matches!(
            reduction_type(&m, 19),
            Ok(ReductionType::Multiplicative)
        ));
        assert!(matches!(reduction_type(&m, 3), Ok(ReductionType::Good)));
        assert!(matches!(
            reduction_type(&m, 2),
            Err(Error::UnsupportedPrime(2))
        ));
        assert!(matches!(
            reduction_type(&m, 15),
            Err(Error::InvalidInput(_))
        ));

        // y^2 = x^3 - 3x + 1: delta = 1296 and c4 = 144, both divisible by 3
        let add = WeierstrassModel {
            a1: 0,
            a2: 0,
            a3: 0,
            a4: -3,
            a6: 1,
        };
        let inv = invariants(&add);
        assert_eq!(inv.c4.rem_euclid(3), 0);
        assert_eq!(inv.delta.rem_euclid(3), 0);
        assert!(matches!(reduction_type(&add, 3), Ok(ReductionType::Additive)));
    }

    #[test]
    fn family_conductor_known_values() {
        // delta = -91 = -7 * 13, multiplicative at both
        assert_eq!(
            family_conductor(FamilyParams { a: 0, b: 1, n: 0 }),
            Some(91)
        );
        assert_eq!(
            family_conductor(FamilyParams { a: 1, b: 1, n: 0 }),
            Some(19)
        );
        assert_eq!(
            family_conductor(FamilyParams { a: 1, b: 1, n: 1 }),
            Some(443)
        );
        // delta = -27 is not squarefree
        assert_eq!(family_conductor(FamilyParams { a: 0, b: 0, n: 0 }), None);
    }

    #[test]
    fn minimality_by_exponent() {
        assert!(minimal_by_exponent(&factor(-19).unwrap()));
        assert!(minimal_by_exponent(&factor(2048).unwrap()));
        assert!(!minimal_by_exponent(&factor(1i128 << 12).unwrap()));
    }
}
