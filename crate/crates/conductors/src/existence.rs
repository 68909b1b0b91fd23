//! Searches over the conductor family: prime and semiprime conductors,
//! almost-prime discriminant counts, the conjectural prime-density constant,
//! and the u^2 + 64 prime scan.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factor, is_prime, kronecker, primes_up_to};
use crate::curves::{
    conductor_from_factorization, family_admissible, family_discriminant_coeffs, family_model,
    family_quadratic_discriminant, FamilyParams,
};
use crate::{Error, Result};

/// One family curve whose conductor N = |Delta| is prime or a product of two
/// primes. For prime N the fields are p = N, q = 1; otherwise p < q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConductorRow {
    pub a: i64,
    pub b: i64,
    pub n: i64,
    pub delta: i64,
    #[serde(rename = "N")]
    pub conductor: u64,
    pub p: u64,
    pub q: u64,
}

/// Every family curve in the given parameter box whose conductor is prime or
/// semiprime and at most `max_conductor`. Rows are sorted by
/// (conductor, a, b, n) and are identical for any thread count.
pub fn search_conductors(
    a_range: RangeInclusive<i64>,
    b_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
    max_conductor: u64,
) -> Vec<ConductorRow> {
    let a_values: Vec<i64> = a_range.collect();
    let mut rows: Vec<ConductorRow> = a_values
        .par_iter()
        .flat_map_iter(|&a| {
            let b_range = b_range.clone();
            let n_range = n_range.clone();
            let mut rows = Vec::new();
            for b in b_range {
                if !family_admissible(a, b) {
                    continue;
                }
                let (c2, c1, c0) = family_discriminant_coeffs(a, b);
                for n in n_range.clone() {
                    let delta = c2 * (n as i128) * (n as i128) + c1 * (n as i128) + c0;
                    if delta.unsigned_abs() > max_conductor as u128 {
                        continue;
                    }
                    let Ok(f) = factor(delta) else { continue };
                    if f.big_omega() > 2 {
                        continue;
                    }
                    let params = FamilyParams { a, b, n };
                    let Some(conductor) = conductor_from_factorization(&family_model(params), &f)
                    else {
                        continue;
                    };
                    let (p, q) = match f.factors() {
                        [(p, 1)] => (*p as u64, 1),
                        [(p, 1), (q, 1)] => (*p as u64, *q as u64),
                        _ => unreachable!("squarefree with at most two factors"),
                    };
                    rows.push(ConductorRow {
                        a,
                        b,
                        n,
                        delta: delta as i64,
                        conductor: conductor as u64,
                        p,
                        q,
                    });
                }
            }
            rows
        })
        .collect();
    rows.sort_unstable_by_key(|r| (r.conductor, r.a, r.b, r.n));
    rows
}

/// For admissible (a, b): how many n in [1, limit] give |Delta(n)| prime, and
/// how many give a product of exactly two primes counted with multiplicity.
pub fn almost_prime_count(a: i64, b: i64, limit: u64) -> Result<(u64, u64)> {
    if !family_admissible(a, b) {
        return Err(Error::InvalidInput(format!(
            "({a}, {b}) is not an admissible family"
        )));
    }
    let (c2, c1, c0) = family_discriminant_coeffs(a, b);
    (1..=limit)
        .into_par_iter()
        .map(|n| -> Result<(u64, u64)> {
            let n = n as i128;
            let delta = c2 * n * n + c1 * n + c0;
            let f = factor(delta)?;
            Ok(match f.big_omega() {
                1 => (1, 0),
                2 => (0, 1),
                _ => (0, 0),
            })
        })
        .try_reduce(|| (0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1)))
}

/// Root count of a quadratic polynomial modulo p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootCount {
    Zero,
    One,
    Two,
    /// The polynomial vanishes identically mod p.
    AllResidues,
}

impl RootCount {
    pub fn count(self, p: u64) -> u64 {
        match self {
            RootCount::Zero => 0,
            RootCount::One => 1,
            RootCount::Two => 2,
            RootCount::AllResidues => p,
        }
    }
}

/// Number of roots of c2 x^2 + c1 x + c0 modulo a prime p.
pub fn quadratic_root_count(c2: i128, c1: i128, c0: i128, p: u64) -> Result<RootCount> {
    if !is_prime(p as i128) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let pm = p as i128;
    let (r2, r1, r0) = (c2.rem_euclid(pm), c1.rem_euclid(pm), c0.rem_euclid(pm));
    if r2 == 0 {
        return Ok(match (r1, r0) {
            (0, 0) => RootCount::AllResidues,
            (0, _) => RootCount::Zero,
            _ => RootCount::One, // linear with invertible slope
        });
    }
    if p == 2 {
        let roots = [0i128, 1]
            .iter()
            .filter(|&&x| (r2 * x * x + r1 * x + r0) % 2 == 0)
            .count();
        return Ok(match roots {
            0 => RootCount::Zero,
            1 => RootCount::One,
            _ => RootCount::Two,
        });
    }
    let disc = (r1 * r1 - 4 * r2 * r0).rem_euclid(pm);
    Ok(match kronecker(disc, pm) {
        0 => RootCount::One,
        1 => RootCount::Two,
        _ => RootCount::Zero,
    })
}

/// A truncated density constant for the family (a, b).
#[derive(Debug, Clone, Serialize)]
pub struct DensityEstimate {
    pub a: i64,
    pub b: i64,
    pub prime_cutoff: u64,
    pub constant: f64,
}

/// The Hardy-Littlewood constant for the count of n with |Delta(n)| prime:
/// C = (1 / sqrt(432)) * prod over primes p <= cutoff of
/// (1 - w(p)/p) / (1 - 1/p), where w(p) counts roots of Delta mod p. The
/// product converges slowly; the cutoff is recorded in the result.
pub fn hl_constant(a: i64, b: i64, prime_cutoff: u64) -> Result<DensityEstimate> {
    if !family_admissible(a, b) {
        return Err(Error::InvalidInput(format!(
            "({a}, {b}) is not an admissible family"
        )));
    }
    let (c2, c1, c0) = family_discriminant_coeffs(a, b);
    let disc = family_quadratic_discriminant(a, b);
    let mut product = 1.0f64;
    for p in primes_up_to(prime_cutoff) {
        // p > 3 never divides the leading coefficient -432, so the root
        // count is 1 + (disc | p) there
        let w = if p <= 3 {
            quadratic_root_count(c2, c1, c0, p)?.count(p)
        } else {
            (1 + kronecker(disc, p as i128)) as u64
        };
        product *= (1.0 - w as f64 / p as f64) / (1.0 - 1.0 / p as f64);
    }
    Ok(DensityEstimate {
        a,
        b,
        prime_cutoff,
        constant: product / 432f64.sqrt(),
    })
}

/// A prime of the form u^2 + 64; such primes are exactly the conductors of
/// prime-conductor curves with a rational point of order 2 (aside from 17).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SetzerPrimeHit {
    pub u: u64,
    pub p: u64,
}

/// All primes u^2 + 64 up to `limit`, ascending in u >= 0.
pub fn setzer_prime_search(limit: u64) -> Vec<SetzerPrimeHit> {
    let mut hits = Vec::new();
    let mut u = 0u64;
    while let Some(p) = u.checked_mul(u).and_then(|s| s.checked_add(64)) {
        if p > limit {
            break;
        }
        if is_prime(p as i128) {
            hits.push(SetzerPrimeHit { u, p });
        }
        u += 1;
    }
    hits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductor_search_finds_known_small_values() {
        let rows = search_conductors(-10..=10, -10..=10, -10..=10, 999);
        let n_values: Vec<u64> = {
            let mut v: Vec<u64> = rows.iter().map(|r| r.conductor).collect();
            v.dedup();
            v
        };
        assert!(n_values.contains(&19));
        assert!(n_values.contains(&37));
        assert!(n_values.contains(&91));
        assert!(n_values.contains(&443));
        // every row is internally consistent
        for r in &rows {
            assert_eq!(r.delta.unsigned_abs(), r.conductor);
            if r.q == 1 {
                assert_eq!(r.p, r.conductor);
            } else {
                assert!(r.p < r.q);
                assert_eq!(r.p * r.q, r.conductor);
            }
        }
        // sorted and deterministic
        let mut sorted = rows.clone();
        sorted.sort_unstable_by_key(|r| (r.conductor, r.a, r.b, r.n));
        assert_eq!(rows, sorted);
    }

    #[test]
    fn conductor_search_excludes_bad_reduction() {
        // (a, b) = (0, 0) is inadmissible, so n = 0 (delta = -27) never shows
        let rows = search_conductors(0..=0, 0..=0, -5..=5, 999);
        assert!(rows.is_empty());
    }

    #[test]
    fn almost_prime_counts_for_the_standard_family() {
        // Delta(n) = -432n^2 + 8n - 19: prime at n = 1 (443), semiprime at
        // n = 2 (1731 = 3 * 577) and n = 3 (3883 = 11 * 353)
        assert_eq!(almost_prime_count(1, 1, 3).unwrap(), (1, 2));
        assert_eq!(almost_prime_count(0, 1, 2).unwrap(), (2, 0));
        assert!(almost_prime_count(2, 1, 10).is_err());
    }

    #[test]
    fn root_counts_of_the_standard_family() {
        let (c2, c1, c0) = family_discriminant_coeffs(1, 1);
        assert_eq!((c2, c1, c0), (-432, 8, -19));
        assert!(matches!(
            quadratic_root_count(c2, c1, c0, 3).unwrap(),
            RootCount::One
        ));
        assert!(matches!(
            quadratic_root_count(c2, c1, c0, 2).unwrap(),
            RootCount::Zero
        ));
        assert!(matches!(
            quadratic_root_count(c2, c1, c0, 5).unwrap(),
            RootCount::Zero
        ));
        assert!(quadratic_root_count(1, 0, 0, 4).is_err());
    }

    #[test]
    fn root_counts_match_brute_force() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for c2 in -6..=6i128 {
                for c1 in -6..=6i128 {
                    for c0 in -6..=6i128 {
                        let expect = (0..p as i128)
                            .filter(|&x| (c2 * x * x + c1 * x + c0).rem_euclid(p as i128) == 0)
                            .count() as u64;
                        let got = quadratic_root_count(c2, c1, c0, p).unwrap().count(p);
                        assert_eq!(got, expect, "({c2}, {c1}, {c0}) mod {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn density_constant_at_tiny_cutoff() {
        // with primes 2, 3 the product is exactly 2: w(2) = 0, w(3) = 1
        let est = hl_constant(1, 1, 3).unwrap();
        assert!((est.constant - 2.0 / 432f64.sqrt()).abs() < 1e-12);
        assert!((est.constant - 0.09622504486).abs() < 1e-9);
        assert!(hl_constant(2, 1, 100).is_err());
    }

    #[test]
    fn density_constants_stabilize() {
        // the product settles fast; these windows bracket the limiting values
        let c11 = hl_constant(1, 1, 100_000).unwrap().constant;
        assert!((0.12..0.15).contains(&c11), "C(1,1) = {c11}");
        let c01 = hl_constant(0, 1, 100_000).unwrap().constant;
        assert!((0.14..0.19).contains(&c01), "C(0,1) = {c01}");
    }

    #[test]
    fn setzer_primes_up_to_100() {
        let hits = setzer_prime_search(100);
        assert_eq!(
            hits,
            vec![
                SetzerPrimeHit { u: 3, p: 73 },
                SetzerPrimeHit { u: 5, p: 89 }
            ]
        );
        // 15^2 + 64 = 289 = 17^2 must not appear
        let more = setzer_prime_search(1000);
        assert!(!more.iter().any(|h| h.u == 15));
        assert!(more.iter().all(|h| is_prime(h.p as i128)));
        assert!(more.iter().all(|h| h.u * h.u + 64 == h.p));
    }
}
