//! Diophantine systems attached to semiprime-conductor curves with a rational
//! point of order 2.
//!
//! A curve of conductor N = pq (p, q distinct odd primes) with a rational
//! 2-torsion point yields an integral solution of
//!
//! ```text
//! B^2 (A^2 - 4B) = ±2^8 p^alpha q^beta,   alpha, beta >= 1,
//! ```
//!
//! where p and q each divide at most one of A, B, and either A ≡ 1 mod 4 with
//! B ≡ 0 mod 16, or A ≡ 6 mod 8 with B ≡ 1 mod 8. Those constraints restrict
//! B to a short list of shapes; case analysis over the shapes produces seven
//! families of power equations (E1 through E7, in the same p/q orientation as
//! the arguments, so callers test both orders). Four tiny solutions escape
//! the reduction and are listed separately; they account for the excluded
//! conductors 15, 21, 39 and 55.

use serde::Serialize;

use crate::arith::{factor, is_perfect_square, is_prime};
use crate::{Error, Result};

/// Power values above this cap are skipped (and counted in a logged warning)
/// during bounded searches.
pub const POWER_CAP: u128 = 1 << 90;

/// The seven power-equation families from the B-value case analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Equation {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
}

impl Equation {
    pub const ALL: [Equation; 7] = [
        Equation::E1,
        Equation::E2,
        Equation::E3,
        Equation::E4,
        Equation::E5,
        Equation::E6,
        Equation::E7,
    ];

    pub fn number(self) -> u8 {
        match self {
            Equation::E1 => 1,
            Equation::E2 => 2,
            Equation::E3 => 3,
            Equation::E4 => 4,
            Equation::E5 => 5,
            Equation::E6 => 6,
            Equation::E7 => 7,
        }
    }

    pub fn from_number(n: u8) -> Option<Equation> {
        Equation::ALL.get(n.checked_sub(1)? as usize).copied()
    }

    /// Human-readable shape, signs left as placeholders.
    pub fn shape(self) -> &'static str {
        match self {
            Equation::E1 => "1 = 2^4 q^b - p^a",
            Equation::E2 => "|p^a - q^b| = 2^4",
            Equation::E3 => "A^2 + 2^6 = p^a q^b",
            Equation::E4 => "A^2 +- 2^6 q^b = +-p^a",
            Equation::E5 => "A^2 +- 2^2 q^b = +-2^8 p^a, q^b = -+1 mod 8",
            Equation::E6 => "A^2 +- 2^2 p^a q^b = +-2^8",
            Equation::E7 => "A^2 +- 2^6 p^a q^b = +-1",
        }
    }
}

/// Exponent and value bounds for [`solve_equation`].
#[derive(Debug, Clone, Copy)]
pub struct SearchBounds {
    /// Largest exponent tried on p.
    pub a_max: u32,
    /// Largest exponent tried on q.
    pub b_max: u32,
    /// Largest |A| tried.
    pub a_value_max: i64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            a_max: 40,
            b_max: 40,
            a_value_max: 1_000_000,
        }
    }
}

/// One solution found by [`solve_equation`]. Exponents are a on p and b on q;
/// A is reported nonnegative and is absent for E1 and E2. `term_sign` is the
/// sign on the power term of the left side (for E2, the sign of p^a - q^b);
/// `rhs_sign` is the sign of the right side; both are absent where the
/// equation has no sign choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub eq: Equation,
    pub a: u32,
    pub b: u32,
    #[serde(rename = "A")]
    pub a_value: Option<i64>,
    pub term_sign: Option<i8>,
    pub rhs_sign: Option<i8>,
}

fn validate_prime_pair(p: u64, q: u64) -> Result<()> {
    for r in [p, q] {
        if r == 2 || !is_prime(r as i128) {
            return Err(Error::InvalidInput(format!("{r} is not an odd prime")));
        }
    }
    if p == q {
        return Err(Error::InvalidInput(format!("primes must be distinct, got {p} twice")));
    }
    Ok(())
}

// (exponent, value) for base^e, e in 1..=e_max, value <= POWER_CAP; skipped
// exponents are tallied for the caller's warning
fn bounded_powers(base: u64, e_max: u32, skipped: &mut u64) -> Vec<(u32, u128)> {
    let mut powers = Vec::new();
    let mut v = 1u128;
    for e in 1..=e_max {
        match v.checked_mul(base as u128) {
            Some(next) if next <= POWER_CAP => {
                v = next;
                powers.push((e, v));
            }
            _ => {
                *skipped += (e_max - e + 1) as u64;
                break;
            }
        }
    }
    powers
}

/// Bounded search for integral solutions of one equation family at (p, q), in
/// that orientation. Deterministic; solutions are sorted by (a, b, signs).
/// Power values beyond [`POWER_CAP`] are skipped and reported through a
/// single `log::warn` per call.
pub fn solve_equation(
    eq: Equation,
    p: u64,
    q: u64,
    bounds: SearchBounds,
) -> Result<Vec<Solution>> {
    validate_prime_pair(p, q)?;
    if bounds.a_max == 0 || bounds.b_max == 0 || bounds.a_value_max < 0 {
        return Err(Error::InvalidInput(
            "exponent bounds must be positive and the A bound nonnegative".into(),
        ));
    }
    let mut skipped = 0u64;
    let p_powers = bounded_powers(p, bounds.a_max, &mut skipped);
    let q_powers = bounded_powers(q, bounds.b_max, &mut skipped);
    let max_square = (bounds.a_value_max as i128) * (bounds.a_value_max as i128);
    let mut sols = Vec::new();

    // a square rhs 0 <= rhs <= A_max^2 yields the canonical A >= 0
    let push_if_square = |sols: &mut Vec<Solution>,
                              a: u32,
                              b: u32,
                              rhs: i128,
                              term_sign: i8,
                              rhs_sign: i8| {
        if rhs >= 0 && rhs <= max_square && is_perfect_square(rhs) {
            sols.push(Solution {
                eq,
                a,
                b,
                a_value: Some((rhs as u128).isqrt() as i64),
                term_sign: Some(term_sign),
                rhs_sign: Some(rhs_sign),
            });
        }
    };

    match eq {
        Equation::E1 => {
            // 1 = 2^4 q^b - p^a
            for &(b, qv) in &q_powers {
                for &(a, pv) in &p_powers {
                    if pv + 1 == 16 * qv {
                        sols.push(Solution {
                            eq,
                            a,
                            b,
                            a_value: None,
                            term_sign: None,
                            rhs_sign: None,
                        });
                    }
                }
            }
        }
        Equation::E2 => {
            // |p^a - q^b| = 2^4
            for &(a, pv) in &p_powers {
                for &(b, qv) in &q_powers {
                    if pv.abs_diff(qv) == 16 {
                        sols.push(Solution {
                            eq,
                            a,
                            b,
                            a_value: None,
                            term_sign: Some(if pv > qv { 1 } else { -1 }),
                            rhs_sign: None,
                        });
                    }
                }
            }
        }
        Equation::E3 => {
            // A^2 + 2^6 = p^a q^b
            for &(a, pv) in &p_powers {
                for &(b, qv) in &q_powers {
                    let prod = match pv.checked_mul(qv) {
                        Some(prod) if prod <= POWER_CAP => prod,
                        _ => {
                            skipped += 1;
                            continue;
                        }
                    };
                    let rhs = prod as i128 - 64;
                    if rhs >= 0 && rhs <= max_square && is_perfect_square(rhs) {
                        sols.push(Solution {
                            eq,
                            a,
                            b,
                            a_value: Some((rhs as u128).isqrt() as i64),
                            term_sign: None,
                            rhs_sign: None,
                        });
                    }
                }
            }
        }
        Equation::E4 => {
            // A^2 + s1 2^6 q^b = s2 p^a
            for s1 in [1i128, -1] {
                for s2 in [1i128, -1] {
                    for &(a, pv) in &p_powers {
                        for &(b, qv) in &q_powers {
                            let rhs = s2 * pv as i128 - s1 * 64 * qv as i128;
                            push_if_square(&mut sols, a, b, rhs, s1 as i8, s2 as i8);
                        }
                    }
                }
            }
        }
        Equation::E5 => {
            // A^2 + s1 2^2 q^b = s2 2^8 p^a with q^b ≡ -s1 mod 8
            for s1 in [1i128, -1] {
                let residue = if s1 == 1 { 7 } else { 1 };
                for s2 in [1i128, -1] {
                    for &(a, pv) in &p_powers {
                        for &(b, qv) in &q_powers {
                            if qv % 8 != residue {
                                continue;
                            }
                            let rhs = s2 * 256 * pv as i128 - s1 * 4 * qv as i128;
                            push_if_square(&mut sols, a, b, rhs, s1 as i8, s2 as i8);
                        }
                    }
                }
            }
        }
        Equation::E6 | Equation::E7 => {
            // E6: A^2 + s1 2^2 p^a q^b = s2 2^8
            // E7: A^2 + s1 2^6 p^a q^b = s2
            let (term_scale, rhs_scale) = if eq == Equation::E6 { (4, 256) } else { (64, 1) };
            for s1 in [1i128, -1] {
                for s2 in [1i128, -1] {
                    for &(a, pv) in &p_powers {
                        for &(b, qv) in &q_powers {
                            let prod = match pv.checked_mul(qv) {
                                Some(prod) if prod <= POWER_CAP => prod,
                                _ => {
                                    skipped += 1;
                                    continue;
                                }
                            };
                            let rhs = s2 * rhs_scale - s1 * term_scale * prod as i128;
                            push_if_square(&mut sols, a, b, rhs, s1 as i8, s2 as i8);
                        }
                    }
                }
            }
        }
    }

    if skipped > 0 {
        log::warn!("solve {eq:?} at ({p}, {q}): skipped {skipped} power values above 2^90");
    }
    sols.sort_unstable_by_key(|s| {
        (
            s.a,
            s.b,
            s.term_sign.unwrap_or(0),
            s.rhs_sign.unwrap_or(0),
            s.a_value.unwrap_or(0),
        )
    });
    Ok(sols)
}

/// The values B can take in B^2 (A^2 - 4B) = ±2^8 p^alpha q^beta with
/// alpha, beta <= e_max: products ±p^j q^k (2j, 2k <= e_max) kept when
/// ≡ 1 mod 8, and 16 times every such product. Sorted ascending.
pub fn possible_b_values(p: u64, q: u64, e_max: u32) -> Result<Vec<i128>> {
    validate_prime_pair(p, q)?;
    if e_max == 0 {
        return Err(Error::InvalidInput("exponent bound must be positive".into()));
    }
    let half = e_max / 2;
    let mut skipped = 0u64;
    let mut values = Vec::new();
    'outer: for j in 0..=half {
        for k in 0..=half {
            let base = (p as i128)
                .checked_pow(j)
                .and_then(|pj| (q as i128).checked_pow(k).and_then(|qk| pj.checked_mul(qk)));
            let Some(base) = base else {
                skipped += 1;
                continue 'outer;
            };
            for sign in [1i128, -1] {
                let b = sign * base;
                if b.rem_euclid(8) == 1 {
                    values.push(b);
                }
                match b.checked_mul(16) {
                    Some(b16) => values.push(b16),
                    None => skipped += 1,
                }
            }
        }
    }
    if skipped > 0 {
        log::warn!("possible_b_values({p}, {q}, {e_max}): {skipped} values overflowed and were skipped");
    }
    values.sort_unstable();
    values.dedup();
    Ok(values)
}

/// One of the four small solutions with B = 2^4 and negative A^2 - 4B side,
/// excluded from the equation reduction. The conductor p q is then excluded
/// from the general analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExceptionalSolution {
    #[serde(rename = "A")]
    pub a_value: i64,
    /// p^alpha with p the smaller prime.
    pub p_power: u64,
    /// q^beta with q the larger prime.
    pub q_power: u64,
    pub p: u64,
    pub q: u64,
    pub conductor: u64,
}

/// The exceptional solutions, found by sweeping A ≡ 1 mod 4 with A^2 < 64 and
/// keeping the A where 64 - A^2 is a product of exactly two distinct odd
/// prime powers.
pub fn exceptional_solutions() -> Vec<ExceptionalSolution> {
    let mut out = Vec::new();
    for a in -8..=8i64 {
        if a.rem_euclid(4) != 1 || a * a >= 64 {
            continue;
        }
        let v = 64 - a * a; // odd, since a is odd
        let f = factor(v as i128).expect("tiny value factors");
        if f.omega() != 2 {
            continue;
        }
        let (p, ep) = f.factors()[0];
        let (q, eq) = f.factors()[1];
        let (p, q) = (p as u64, q as u64);
        out.push(ExceptionalSolution {
            a_value: a,
            p_power: p.pow(ep),
            q_power: q.pow(eq),
            p,
            q,
            conductor: p * q,
        });
    }
    out
}

/// Why one equation family has no solutions at a given (p, q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ObstructionKind {
    /// Both sides reduce incompatibly modulo 3.
    Mod3,
    /// Forced even exponents make one side factor as (x - 4)(x + 4) with
    /// coprime odd factors, forcing the prime 5.
    Mod16Factorization,
    /// A prime ≡ 3 mod 4 dividing A^2 + 8^2 would divide gcd(A, 8).
    GaussianPrime,
    /// The four sign cases each fail modulo 3 or modulo 5, or by sign.
    Mod3Mod5,
}

/// A no-solution certificate for one equation family at one (p, q) order.
#[derive(Debug, Clone, Serialize)]
pub struct Obstruction {
    pub eq: Equation,
    pub kind: ObstructionKind,
    pub detail: String,
}

// the subgroup of (Z/16)^x generated by g (g odd)
fn subgroup_mod_16(g: u64) -> Vec<u64> {
    let g = g % 16;
    let mut elems = Vec::new();
    let mut x = 1u64;
    loop {
        x = x * g % 16;
        if elems.contains(&x) {
            break;
        }
        elems.push(x);
        if x == 1 {
            break;
        }
    }
    elems
}

// p^a ≡ q^b mod 16 only with a, b both even: the odd- and even-exponent
// residue classes of p and q must not meet except even-to-even
fn mod16_forces_even_exponents(p: u64, q: u64) -> bool {
    let (p, q) = (p % 16, q % 16);
    let even_p = subgroup_mod_16(p * p % 16);
    let even_q = subgroup_mod_16(q * q % 16);
    let odd_p: Vec<u64> = even_p.iter().map(|&x| x * (p % 16) % 16).collect();
    let odd_q: Vec<u64> = even_q.iter().map(|&x| x * (q % 16) % 16).collect();
    let disjoint = |xs: &[u64], ys: &[u64]| xs.iter().all(|x| !ys.contains(x));
    disjoint(&odd_p, &odd_q) && disjoint(&odd_p, &even_q) && disjoint(&even_p, &odd_q)
}

/// A residue certificate that the equation family has no solution at (p, q),
/// in that orientation, when one applies. Callers pass p and q as odd primes;
/// the congruence tests themselves are total.
pub fn residue_obstruction(eq: Equation, p: u64, q: u64) -> Option<Obstruction> {
    let found = |kind, detail: String| Some(Obstruction { eq, kind, detail });
    match eq {
        Equation::E1 => {
            if p % 3 == 1 && q % 3 == 1 {
                found(
                    ObstructionKind::Mod3,
                    format!(
                        "p ≡ q ≡ 1 mod 3, so modulo 3 the equation 1 = 2^4 q^b - p^a \
                         reads 1 ≡ 1 - 1 ≡ 0; no exponents exist (p = {p}, q = {q})"
                    ),
                )
            } else {
                None
            }
        }
        Equation::E2 => {
            if p % 5 == 1 && q % 5 == 1 && mod16_forces_even_exponents(p, q) {
                found(
                    ObstructionKind::Mod16Factorization,
                    format!(
                        "p^a ≡ q^b mod 16 forces a and b even for p ≡ {} and q ≡ {} mod 16; \
                         then the larger side minus 16 factors as (x - 4)(x + 4) with coprime \
                         odd factors, so x - 4 = 1 and a prime is 5, contradicting \
                         p ≡ q ≡ 1 mod 5 (p = {p}, q = {q})",
                        p % 16,
                        q % 16
                    ),
                )
            } else {
                None
            }
        }
        Equation::E3 => {
            if p % 4 == 3 && q % 4 == 3 {
                found(
                    ObstructionKind::GaussianPrime,
                    format!(
                        "p ≡ q ≡ 3 mod 4 stay prime in Z[i]; dividing \
                         A^2 + 64 = (A + 8i)(A - 8i) they would divide 16i, impossible for \
                         odd primes (p = {p}, q = {q})"
                    ),
                )
            } else {
                None
            }
        }
        Equation::E4 | Equation::E5 | Equation::E6 | Equation::E7 => {
            if p % 3 == 1 && q % 3 == 1 && p % 5 == 1 && q % 5 == 1 {
                found(
                    ObstructionKind::Mod3Mod5,
                    format!(
                        "p^a ≡ q^b ≡ 1 mod 15, so the equation reduces to A^2 ± 1 ≡ ±1 mod 3 \
                         and A^2 ∓ 1 ≡ ±1 mod 5: signs (+,+) need A^2 ≡ 2 mod 5, (-,-) need \
                         A^2 ≡ 3 mod 5, (-,+) need A^2 ≡ 2 mod 3, and (+,-) equate a positive \
                         with a negative; all impossible (p = {p}, q = {q})"
                    ),
                )
            } else {
                None
            }
        }
    }
}

/// Congruence test covering all seven equation families in both (p, q)
/// orders: p ≡ q ≡ 31 mod 60 with p mod 16 outside the subgroup generated by
/// q in (Z/16)^x. For odd primes p, q this certifies that no curve of
/// conductor pq has a rational point of order 2.
pub fn two_torsion_obstructed(p: u64, q: u64) -> bool {
    p % 60 == 31 && q % 60 == 31 && !subgroup_mod_16(q).contains(&(p % 16))
}

/// A reconstructed solution of B^2 (A^2 - 4B) = sign * 2^8 p^alpha q^beta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetzerSystem {
    pub a_value: i128,
    pub b_value: i128,
    pub alpha: u32,
    pub beta: u32,
    /// Sign of the right side.
    pub sign: i8,
    pub p: u64,
    pub q: u64,
}

impl SetzerSystem {
    /// Exact check of the defining identity and the congruence conditions;
    /// None when an intermediate value exceeds 128 bits.
    pub fn verify(&self) -> Option<bool> {
        let branch_ok = (self.a_value.rem_euclid(4) == 1 && self.b_value.rem_euclid(16) == 0)
            || (self.a_value.rem_euclid(8) == 6 && self.b_value.rem_euclid(8) == 1);
        let lhs = self
            .a_value
            .checked_mul(self.a_value)?
            .checked_sub(self.b_value.checked_mul(4)?)?
            .checked_mul(self.b_value.checked_mul(self.b_value)?)?;
        let rhs = (self.p as i128)
            .checked_pow(self.alpha)?
            .checked_mul((self.q as i128).checked_pow(self.beta)?)?
            .checked_mul(256)?
            .checked_mul(self.sign as i128)?;
        Some(branch_ok && self.alpha >= 1 && self.beta >= 1 && lhs == rhs)
    }

    /// Rebuild the (A, B, alpha, beta) system behind an equation solution.
    /// Returns None if intermediate powers overflow, or (for E6) if the
    /// reconstructed B fails its congruence class, meaning the numerical
    /// solution does not arise from the B-shape that produced the equation.
    pub fn from_solution(p: u64, q: u64, sol: &Solution) -> Option<SetzerSystem> {
        let pa = (p as i128).checked_pow(sol.a)?;
        let qb = (q as i128).checked_pow(sol.b)?;
        // pick the sign of A landing in the congruence class of the branch
        let pick = |a0: i128, modulus: i128, class: i128| -> i128 {
            if a0.rem_euclid(modulus) == class {
                a0
            } else {
                -a0
            }
        };
        let a0 = sol.a_value.map(|v| v as i128);
        let (a_value, b_value, alpha, beta, sign) = match sol.eq {
            Equation::E1 => (pa.checked_mul(4)?.checked_add(2)?, 1, sol.a, sol.b, 1),
            Equation::E2 => (pick(pa.min(qb).checked_add(8)?, 4, 1), 16, sol.a, sol.b, 1),
            Equation::E3 => (pick(a0?, 4, 1), -16, sol.a, sol.b, 1),
            Equation::E4 => {
                let s1 = sol.term_sign? as i128;
                (
                    pick(a0?, 4, 1),
                    qb.checked_mul(-16 * s1)?,
                    sol.a,
                    2 * sol.b,
                    sol.rhs_sign?,
                )
            }
            Equation::E5 => {
                let s1 = sol.term_sign? as i128;
                (
                    pick(a0?, 8, 6),
                    qb.checked_mul(-s1)?,
                    sol.a,
                    2 * sol.b,
                    sol.rhs_sign?,
                )
            }
            Equation::E6 => {
                let s1 = sol.term_sign? as i128;
                let b_value = pa.checked_mul(qb)?.checked_mul(-s1)?;
                if b_value.rem_euclid(8) != 1 {
                    return None;
                }
                (pick(a0?, 8, 6), b_value, 2 * sol.a, 2 * sol.b, sol.rhs_sign?)
            }
            Equation::E7 => {
                let s1 = sol.term_sign? as i128;
                (
                    pick(a0?, 4, 1),
                    pa.checked_mul(qb)?.checked_mul(-16 * s1)?,
                    2 * sol.a,
                    2 * sol.b,
                    sol.rhs_sign?,
                )
            }
        };
        Some(SetzerSystem {
            a_value,
            b_value,
            alpha,
            beta,
            sign,
            p,
            q,
        })
    }
}
