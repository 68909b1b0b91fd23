//! Exact integer arithmetic: primality, factorization, perfect squares, prime
//! sieving, and the Kronecker symbol.
//!
//! Primality below 2^64 is decided by a Miller-Rabin strong probable prime
//! test over the seven-witness set {2, 325, 9375, 28178, 450775, 9780504,
//! 1795265022}, which is known to be deterministic for all 64-bit inputs.
//! Larger inputs (up to 2^127) fall back to the first twenty primes as
//! witnesses; no counterexample to that set is known, but determinism is only
//! proven below 2^64.
//!
//! Factorization runs trial division by every candidate below 10^4 and then
//! Brent's variant of the Pollard rho cycle method on the remaining cofactor.
//! The rho polynomial constant follows a fixed retry schedule, so results are
//! reproducible without any source of randomness. If the iteration budget is
//! exhausted on a composite cofactor, the error carries that cofactor rather
//! than returning a partial factorization.

use crate::{Error, Result};

/// Primes up to and including `limit`, by sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// a, b < m < 2^127, so the sum cannot overflow u128
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

/// (a * b) mod m for any m < 2^127.
fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    // fast path: any modulus that fits in 64 bits cannot overflow the product
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b, mut acc) = (a % m, b % m, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// deterministic for all n < 2^64
const WITNESSES_64: [u128; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

// first twenty primes, used above 2^64
const WITNESSES_WIDE: [u128; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

// n odd, n > 2; a strong probable prime test to base a
fn strong_probable_prime(n: u128, a: u128) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Primality test, deterministic for |n| < 2^64. Negative inputs, 0 and 1 are
/// not prime.
pub fn is_prime(n: i128) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u128;
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let witnesses: &[u128] = if n <= u64::MAX as u128 {
        &WITNESSES_64
    } else {
        &WITNESSES_WIDE
    };
    witnesses.iter().all(|&a| strong_probable_prime(n, a))
}

/// True when n is a perfect square; negative inputs are not, 0 is.
pub fn is_perfect_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let n = n as u128;
    let r = n.isqrt();
    r * r == n
}

/// Iteration limits for the rho stage of [`factor_with_budget`].
#[derive(Debug, Clone, Copy)]
pub struct FactorBudget {
    /// Retry rounds, each using the next polynomial constant in the schedule.
    pub rho_rounds: u32,
    /// Cycle-detection iterations allowed per round.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            rho_rounds: 24,
            rho_iterations: 1 << 22,
        }
    }
}

/// A prime factorization of a nonzero integer, factors ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: i128,
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    /// The factored integer, sign included.
    pub fn value(&self) -> i128 {
        self.value
    }

    /// (prime, exponent) pairs in ascending prime order; empty for +-1.
    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// |value|, reassembled from the factors.
    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product()
    }
}

const TRIAL_DIVISION_BOUND: u128 = 10_000;

/// Factor n by absolute value, with the default budget.
pub fn factor(n: i128) -> Result<Factorization> {
    factor_with_budget(n, FactorBudget::default())
}

/// Factor n by absolute value. Deterministic; fails with
/// [`Error::IncompleteFactorization`] if the rho budget runs out on a
/// composite cofactor, and with [`Error::InvalidInput`] on n = 0.
pub fn factor_with_budget(n: i128, budget: FactorBudget) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidInput("0 has no prime factorization".into()));
    }
    let mut m = n.unsigned_abs();
    let mut factors: Vec<(u128, u32)> = Vec::new();

    let mut exp = 0;
    while m.is_multiple_of(2) {
        m /= 2;
        exp += 1;
    }
    if exp > 0 {
        factors.push((2, exp));
    }
    let mut d = 3u128;
    while d < TRIAL_DIVISION_BOUND && d * d <= m {
        let mut exp = 0;
        while m.is_multiple_of(d) {
            m /= d;
            exp += 1;
        }
        if exp > 0 {
            factors.push((d, exp));
        }
        d += 2;
    }

    if m > 1 {
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if is_prime(c as i128) {
                match factors.iter_mut().find(|(p, _)| *p == c) {
                    Some((_, e)) => *e += 1,
                    None => factors.push((c, 1)),
                }
                continue;
            }
            let f = rho_factor(c, &budget).ok_or(Error::IncompleteFactorization(c))?;
            stack.push(f);
            stack.push(c / f);
        }
    }

    factors.sort_unstable();
    Ok(Factorization { value: n, factors })
}

// c is odd, composite, and has no factor below the trial division bound
fn rho_factor(n: u128, budget: &FactorBudget) -> Option<u128> {
    for round in 0..budget.rho_rounds {
        if let Some(f) = brent_rho(n, round as u128 + 1, budget.rho_iterations) {
            return Some(f);
        }
    }
    None
}

// Brent's cycle variant of Pollard rho with polynomial x^2 + c.
fn brent_rho(n: u128, c: u128, max_iterations: u64) -> Option<u128> {
    let step = |x: u128| add_mod(mul_mod(x, x, n), c % n, n);
    const BATCH: u64 = 128;
    let mut y: u128 = 2;
    let mut r: u64 = 1;
    let mut q: u128 = 1;
    let mut g: u128 = 1;
    let mut x: u128 = 0;
    let mut ys: u128 = 0;
    let mut used: u64 = 0;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        used += r;
        let mut k: u64 = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = BATCH.min(r - k);
            for _ in 0..lim {
                y = step(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u128(q, n);
            k += lim;
        }
        used += k;
        if g == 1 && used > max_iterations {
            return None;
        }
        r <<= 1;
    }
    if g == n {
        // the batched gcd jumped past the first collision; replay one step at
        // a time from the last checkpoint
        loop {
            ys = step(ys);
            g = gcd_u128(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

/// The Kronecker symbol (d | k), with the standard conventions at 2, 0 and
/// negative arguments.
pub fn kronecker(d: i128, k: i128) -> i32 {
    if k == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    if d % 2 == 0 && k % 2 == 0 {
        return 0;
    }
    let mut sign = 1i32;
    let mut k = k;
    if k < 0 {
        k = -k;
        if d < 0 {
            sign = -sign;
        }
    }
    // (d | 2) per power of 2 in k; d is odd here whenever v > 0
    let v = k.trailing_zeros();
    k >>= v;
    if v % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
        sign = -sign;
    }
    // k is now odd and positive: the Jacobi symbol by reciprocity
    let mut a = d.rem_euclid(k);
    let mut b = k;
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && matches!(b % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && b % 4 == 3 {
            sign = -sign;
        }
        let next = b % a;
        b = a;
        a = next;
    }
    if b == 1 {
        sign
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_known_primes() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(
            primes_up_to(30),
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        );
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    }

    #[test]
    fn primality_matches_sieve_exhaustively() {
        let limit = 1_000_000u64;
        let primes = primes_up_to(limit);
        let mut is_p = vec![false; limit as usize + 1];
        for &p in &primes {
            is_p[p as usize] = true;
        }
        for n in 0..=limit {
            assert_eq!(is_prime(n as i128), is_p[n as usize], "n = {n}");
        }
    }

    #[test]
    fn primality_edge_cases() {
        assert!(!is_prime(-7));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        // largest 64-bit prime, and a Carmichael number
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(561));
        // the 64-bit witness boundary: 2^64 + 13 is prime
        assert!(is_prime((1i128 << 64) + 13));
        assert!(!is_prime((1i128 << 64) + 1));
    }

    #[test]
    fn factor_known_values() {
        let f = factor(40921).unwrap();
        assert_eq!(f.factors(), &[(151, 1), (271, 1)]);
        assert!(f.is_squarefree());
        assert_eq!(f.omega(), 2);
        assert_eq!(f.big_omega(), 2);
        assert_eq!(f.product(), 40921);

        let f = factor(-432).unwrap();
        assert_eq!(f.factors(), &[(2, 4), (3, 3)]);
        assert_eq!(f.value(), -432);
        assert!(!f.is_squarefree());

        assert_eq!(factor(1).unwrap().factors(), &[]);
        assert_eq!(factor(-1).unwrap().factors(), &[]);
        assert!(matches!(factor(0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn factor_large_semiprime() {
        // product of two primes near 10^9, out of reach of trial division
        let p = 999_999_937u128;
        let q = 999_999_893u128;
        let f = factor((p * q) as i128).unwrap();
        assert_eq!(f.factors(), &[(q, 1), (p, 1)]);
    }

    #[test]
    fn factor_random_roundtrip() {
        // deterministic LCG; checks product and primality of every factor
        let mut state = 0x2545F4914F6CDD1Du64;
        for _ in 0..20_000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let n = (state >> 16) as i128 % 1_000_000_000_000 + 2;
            let f = factor(n).unwrap();
            assert_eq!(f.product(), n as u128, "n = {n}");
            for &(p, e) in f.factors() {
                assert!(is_prime(p as i128), "n = {n}, p = {p}");
                assert!(e >= 1);
            }
        }
    }

    #[test]
    fn perfect_square_edges() {
        for k in 0..=100_000i128 {
            assert!(is_perfect_square(k * k));
        }
        for k in 1..=100_000i128 {
            assert!(!is_perfect_square(k * k + 1));
        }
        assert!(!is_perfect_square(-4));
        assert!(is_perfect_square(0));
    }

    #[test]
    fn kronecker_known_values() {
        assert_eq!(kronecker(-23, 2), 1);
        assert_eq!(kronecker(5, 5), 0);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(0, 1), 1);
        assert_eq!(kronecker(0, -1), 1);
        assert_eq!(kronecker(0, 5), 0);
        assert_eq!(kronecker(12, 2), 0);
        assert_eq!(kronecker(-1, -1), -1);
    }

    #[test]
    fn kronecker_matches_euler_criterion_at_odd_primes() {
        for p in primes_up_to(300).into_iter().skip(1) {
            let p = p as i128;
            for d in -200..=200i128 {
                let sym = kronecker(d, p);
                let pow = pow_mod(d.rem_euclid(p) as u128, ((p - 1) / 2) as u128, p as u128);
                let expect = if pow == 0 {
                    0
                } else if pow == 1 {
                    1
                } else {
                    assert_eq!(pow, (p - 1) as u128);
                    -1
                };
                assert_eq!(sym, expect, "d = {d}, p = {p}");
            }
        }
    }

    #[test]
    fn kronecker_is_multiplicative() {
        // complete multiplicativity in the bottom argument holds for nonzero
        // arguments; the (d/0) convention is not multiplicative
        for d in -60..=60i128 {
            for k1 in (-40..=40i128).filter(|&k| k != 0) {
                for k2 in (-40..=40i128).filter(|&k| k != 0) {
                    assert_eq!(
                        kronecker(d, k1 * k2),
                        kronecker(d, k1) * kronecker(d, k2),
                        "d = {d}, k1 = {k1}, k2 = {k2}"
                    );
                }
            }
        }
    }

    #[test]
    fn kronecker_periodicity_for_discriminants() {
        // for d ≡ 0, 1 mod 4 the symbol is periodic in k with period |d|
        for d in [-23i128, -4, 5, 12, 40921 * 4] {
            for k in 1..200i128 {
                assert_eq!(kronecker(d, k), kronecker(d, k + d.abs()), "d = {d}, k = {k}");
            }
        }
    }

    #[test]
    fn factorization_reports_stuck_cofactor() {
        let budget = FactorBudget {
            rho_rounds: 1,
            rho_iterations: 4,
        };
        // two primes near 10^18: four rho iterations cannot split this
        let p = 999_999_999_999_999_989u128;
        let q = 999_999_999_999_999_877u128;
        match factor_with_budget((p * q) as i128, budget) {
            Err(Error::IncompleteFactorization(c)) => assert_eq!(c, p * q),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }
}
