//! Nonexistence of elliptic curves with semiprime conductor N = pq.
//!
//! The pipeline: congruence filtering picks candidate pairs where every
//! two-torsion Diophantine family is residue-obstructed (so no curve of
//! conductor pq has a rational point of order 2); the class-number criterion
//! then shows every curve of conductor pq would have to carry such a point.
//! When both apply, no curve of conductor pq exists at all. The class-number
//! half tests 3-divisibility of h for the six fields Q(sqrt(m)),
//! m in {±p, ±q, ±pq}.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, primes_up_to};
use crate::diophantine;
use crate::quadforms::{field_class_data, h_divisible_by_3, FieldClassData};
use crate::{Error, Result};

/// Search-candidate congruences: p ≡ 7 mod 16, q ≡ 15 mod 16, and
/// p ≡ q ≡ 1 mod 15 (equivalently p ≡ 151, q ≡ 31 mod 240). These imply the
/// obstruction congruences in both orders.
pub fn candidate_congruences(p: u64, q: u64) -> bool {
    p % 16 == 7 && q % 16 == 15 && p % 15 == 1 && q % 15 == 1
}

/// Congruences under which every two-torsion equation family is obstructed in
/// both (p, q) orders; see [`diophantine::two_torsion_obstructed`].
pub fn obstruction_congruences(p: u64, q: u64) -> bool {
    diophantine::two_torsion_obstructed(p, q)
}

/// A semiprime N = p q satisfying the candidate congruences; p is the prime
/// ≡ 7 mod 16.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SemiprimeCandidate {
    #[serde(rename = "N")]
    pub n: u64,
    pub p: u64,
    pub q: u64,
}

/// All candidates with N strictly below `limit`, sorted by N. The smallest
/// admissible primes are p = 151 and q = 31, so the sieve runs to limit/31.
pub fn congruence_candidates(limit: u64) -> Result<Vec<SemiprimeCandidate>> {
    if limit > 4_000_000_000 {
        return Err(Error::InvalidInput(format!(
            "limit {limit} too large; the candidate sieve supports limits up to 4e9"
        )));
    }
    let primes = primes_up_to(limit / 31);
    let ps: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| p % 16 == 7 && p % 15 == 1)
        .collect();
    let qs: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&q| q % 16 == 15 && q % 15 == 1)
        .collect();
    let mut out = Vec::new();
    for &p in &ps {
        for &q in &qs {
            if p * q >= limit {
                break;
            }
            out.push(SemiprimeCandidate { n: p * q, p, q });
        }
    }
    out.sort_unstable_by_key(|c| c.n);
    Ok(out)
}

/// The outcome of the class-number test for one candidate.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub candidate: SemiprimeCandidate,
    /// Whether the candidate congruences hold (true for candidates from
    /// [`congruence_candidates`]).
    pub congruence_pass: bool,
    /// Class data for the fields tested, in test order: ±s, ±l, ±pq for
    /// s < l the two primes. Short-circuits at the first failure, so this
    /// holds fewer than six entries when `nonexistent` is false.
    pub class_data: Vec<FieldClassData>,
    /// True when no tested class number is divisible by 3; no elliptic curve
    /// of conductor N exists then.
    pub nonexistent: bool,
}

/// Run the six-field class-number test on one candidate, cheapest fields
/// first, stopping at the first 3-divisible class number.
pub fn evaluate_candidate(c: SemiprimeCandidate) -> Result<Verdict> {
    let congruence_pass = candidate_congruences(c.p, c.q);
    let s = c.p.min(c.q) as i64;
    let l = c.p.max(c.q) as i64;
    let mut class_data = Vec::with_capacity(6);
    let mut nonexistent = true;
    'fields: for r in [s, l, s * l] {
        for sign in [1i64, -1] {
            let data = field_class_data(sign * r)?;
            let failed = data.divisible_by_3;
            class_data.push(data);
            if failed {
                nonexistent = false;
                break 'fields;
            }
        }
    }
    Ok(Verdict {
        candidate: c,
        congruence_pass,
        class_data,
        nonexistent,
    })
}

/// Verdicts for every congruence candidate with N < limit, in N order.
/// Failing candidates are retained with the 3-divisible field identified in
/// their class data.
pub fn nonexistence_search(limit: u64) -> Result<Vec<Verdict>> {
    let candidates = congruence_candidates(limit)?;
    let mut verdicts = candidates
        .into_par_iter()
        .map(evaluate_candidate)
        .collect::<Result<Vec<Verdict>>>()?;
    verdicts.sort_by_key(|v| v.candidate.n);
    Ok(verdicts)
}

/// The class-number criterion forcing 2-torsion: for a conductor with prime
/// factorization `primes` (distinct), if the factorization contains 2 or
/// consists of primes ≡ ±1 mod 8, and no field Q(sqrt(±m)) over nonempty
/// subset products m has class number divisible by 3, every curve of that
/// conductor has a rational point of order 2. Returns false when the
/// congruence precondition fails or any class number is divisible by 3.
pub fn forces_two_torsion(primes: &[u64]) -> Result<bool> {
    if primes.is_empty() {
        return Err(Error::InvalidInput("empty prime list".into()));
    }
    if primes.len() > 20 {
        return Err(Error::InvalidInput("more than 20 primes".into()));
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != primes.len() {
        return Err(Error::InvalidInput("primes must be distinct".into()));
    }
    for &p in primes {
        if !is_prime(p as i128) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
    }
    if !(primes.contains(&2) || primes.iter().all(|&p| matches!(p % 8, 1 | 7))) {
        return Ok(false);
    }
    let mut products = Vec::with_capacity((1 << primes.len()) - 1);
    for mask in 1u32..(1 << primes.len()) {
        let mut m = 1i64;
        for (i, &p) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                m = m.checked_mul(p as i64).ok_or_else(|| {
                    Error::InvalidInput("subset product exceeds 63 bits".into())
                })?;
            }
        }
        products.push(m);
    }
    // cheapest class numbers first
    products.sort_unstable();
    for m in products {
        for sign in [1i64, -1] {
            if h_divisible_by_3(sign * m)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
