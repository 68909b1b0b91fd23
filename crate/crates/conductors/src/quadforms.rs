//! Class numbers of quadratic fields via binary quadratic forms.
//!
//! For a fundamental discriminant D < 0 the class number counts primitive
//! reduced positive definite forms (a, b, c): |b| <= a <= c with b >= 0
//! whenever |b| = a or a = c. For D > 0 the narrow class number counts cycles
//! of reduced indefinite forms, 0 < b < sqrt(D) and
//! sqrt(D) - b < 2|a| < sqrt(D) + b, under the standard reduction step
//! rho(a, b, c) = (c, r, (r^2 - D) / 4c) with r = -b mod 2|c| nearest below
//! sqrt(D).
//!
//! Each sign has a second, independent route used for cross-checking:
//!
//! * D < -4: the finite character sum h = (sum of (D|k), 0 < k < |D|/2)
//!   divided by (2 - (D|2)).
//! * D > 0: the regulator and fundamental unit norm from the continued
//!   fraction of (b0 + sqrt(D))/2, then the wide class number from
//!   2 h R = -sum over 0 < k < D of (D|k) log sin(pi k / D), and the narrow
//!   one from the unit norm (equal when some unit has norm -1, doubled
//!   otherwise).

use std::collections::HashMap;

use serde::Serialize;

use crate::arith::{factor, kronecker};
use crate::{Error, Result};

fn isqrt64(n: i64) -> i64 {
    (n as u64).isqrt() as i64
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    fn gcd(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    }
    gcd(gcd(a, b), c)
}

fn squarefree(m: i64) -> Result<bool> {
    Ok(factor(m as i128)?.is_squarefree())
}

/// The discriminant of Q(sqrt(m)) for squarefree m, m not 0 or 1:
/// m itself when m ≡ 1 mod 4, else 4m.
pub fn fundamental_discriminant(m: i64) -> Result<i64> {
    if m == 0 || m == 1 {
        return Err(Error::InvalidInput(format!(
            "radicand {m} does not define a quadratic field"
        )));
    }
    if !squarefree(m)? {
        return Err(Error::InvalidInput(format!("radicand {m} is not squarefree")));
    }
    if m.rem_euclid(4) == 1 {
        Ok(m)
    } else {
        m.checked_mul(4)
            .ok_or_else(|| Error::InvalidInput(format!("radicand {m} overflows")))
    }
}

/// True when d is a fundamental quadratic discriminant.
pub fn is_fundamental_discriminant(d: i64) -> Result<bool> {
    if d == 0 || d == 1 {
        return Ok(false);
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            Ok(matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)?)
        }
        _ => Ok(false),
    }
}

fn ensure_fundamental(d: i64) -> Result<()> {
    if is_fundamental_discriminant(d)? {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{d} is not a fundamental discriminant"
        )))
    }
}

/// Class number of discriminant d < 0 by counting primitive reduced forms.
pub fn class_number_imaginary(d: i64) -> Result<u64> {
    ensure_fundamental(d)?;
    if d >= 0 {
        return Err(Error::InvalidInput(format!("{d} is not negative")));
    }
    let mut count = 0u64;
    let a_max = isqrt64(-d / 3);
    for a in 1..=a_max {
        for b in -a..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            // on the boundary |b| = a or a = c only b >= 0 is reduced
            if b < 0 && (-b == a || a == c) {
                continue;
            }
            if gcd3(a, b, c) != 1 {
                continue;
            }
            count += 1;
        }
    }
    Ok(count)
}

/// Independent exact value for d < 0: the finite character sum
/// h = (sum of (d|k) over 0 < k < |d|/2) / (2 - (d|2)), valid for d < -4;
/// h(-3) = h(-4) = 1.
pub fn class_number_imaginary_charsum(d: i64) -> Result<u64> {
    ensure_fundamental(d)?;
    if d >= 0 {
        return Err(Error::InvalidInput(format!("{d} is not negative")));
    }
    if d == -3 || d == -4 {
        return Ok(1);
    }
    let abs_d = -d;
    let mut s = 0i64;
    for k in 1..(abs_d + 1) / 2 {
        s += kronecker(d as i128, k as i128) as i64;
    }
    let denom = 2 - kronecker(d as i128, 2) as i64;
    assert!(
        s > 0 && s % denom == 0,
        "character sum {s} for discriminant {d} is not a positive multiple of {denom}"
    );
    Ok((s / denom) as u64)
}

// reduced indefinite forms of discriminant d: 0 < b < sqrt(d) and
// sqrt(d) - b < 2|a| < sqrt(d) + b, both comparisons done exactly in integers
fn reduced_indefinite_forms(d: i64) -> Result<Vec<(i64, i64, i64)>> {
    ensure_fundamental(d)?;
    if d <= 0 {
        return Err(Error::InvalidInput(format!("{d} is not positive")));
    }
    let t = isqrt64(d);
    let mut forms = Vec::new();
    let mut b = 2 - d.rem_euclid(2);
    while b <= t {
        let num = d - b * b;
        debug_assert!(num > 0 && num % 4 == 0);
        let m = num / 4; // = |a c|
        for e in 1..=isqrt64(m) {
            if m % e != 0 {
                continue;
            }
            let mut divisors = vec![e];
            if m / e != e {
                divisors.push(m / e);
            }
            for abs_a in divisors {
                let lo = 2 * abs_a + b; // 2|a| > sqrt(d) - b
                let hi = 2 * abs_a - b; // 2|a| < sqrt(d) + b
                if lo * lo <= d || (hi >= 0 && hi * hi >= d) {
                    continue;
                }
                let abs_c = m / abs_a;
                if gcd3(abs_a, b, abs_c) != 1 {
                    continue;
                }
                forms.push((abs_a, b, -abs_c));
                forms.push((-abs_a, b, abs_c));
            }
        }
        b += 2;
    }
    forms.sort_unstable();
    Ok(forms)
}

// rho(a, b, c) = (c, r, (r^2 - d)/(4c)), r ≡ -b mod 2|c| maximal below sqrt(d)
fn reduction_step(d: i64, f: (i64, i64, i64)) -> (i64, i64, i64) {
    let (_, b, c) = f;
    let t = isqrt64(d);
    let m = 2 * c.abs();
    let r = t - (t + b).rem_euclid(m);
    debug_assert!((r * r - d) % (4 * c) == 0);
    (c, r, (r * r - d) / (4 * c))
}

/// Narrow class number of discriminant d > 0: the number of cycles of reduced
/// indefinite forms under the reduction step.
pub fn narrow_class_number_real(d: i64) -> Result<u64> {
    let forms = reduced_indefinite_forms(d)?;
    let index: HashMap<(i64, i64, i64), usize> =
        forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut visited = vec![false; forms.len()];
    let mut cycles = 0u64;
    for start in 0..forms.len() {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut f = forms[start];
        loop {
            let i = *index
                .get(&f)
                .expect("reduction step left the reduced set");
            if visited[i] {
                break;
            }
            visited[i] = true;
            f = reduction_step(d, f);
        }
    }
    Ok(cycles)
}

/// Analytic data for a real quadratic field.
#[derive(Debug, Clone)]
pub struct RealClassData {
    /// Wide (ordinary) class number.
    pub h: u64,
    /// Narrow class number: h when a unit of norm -1 exists, else 2h.
    pub h_narrow: u64,
    /// Regulator, the log of the fundamental unit above 1.
    pub regulator: f64,
    /// Norm of the fundamental unit, +1 or -1.
    pub unit_norm: i8,
}

/// Analytic route for d > 0, independent of form enumeration: continued
/// fraction of (b0 + sqrt(d))/2 for the regulator and unit norm (norm -1
/// exactly when the period is odd), then the class number formula
/// h = -(sum of (d|k) log sin(pi k/d)) / (2R).
pub fn real_class_data_analytic(d: i64) -> Result<RealClassData> {
    ensure_fundamental(d)?;
    if d <= 0 {
        return Err(Error::InvalidInput(format!("{d} is not positive")));
    }
    let t = isqrt64(d);
    let b0 = if (t - d).rem_euclid(2) == 0 { t } else { t - 1 };
    let sqrt_d = (d as f64).sqrt();

    let (mut p, mut q) = (b0, 2i64);
    let mut regulator = 0.0f64;
    let mut period = 0u64;
    loop {
        debug_assert!(q > 0 && (d - p * p) % q == 0);
        regulator += ((p as f64 + sqrt_d) / q as f64).ln();
        let a = (p + t).div_euclid(q);
        let p_next = a * q - p;
        let q_next = (d - p_next * p_next) / q;
        p = p_next;
        q = q_next;
        period += 1;
        if p == b0 && q == 2 {
            break;
        }
        assert!(period < 100_000_000, "runaway continued fraction for {d}");
    }

    let mut s = 0.0f64;
    for k in 1..d {
        let chi = kronecker(d as i128, k as i128);
        if chi != 0 {
            s += chi as f64 * (std::f64::consts::PI * k as f64 / d as f64).sin().ln();
        }
    }
    let h_float = -s / (2.0 * regulator);
    let h = h_float.round();
    assert!(
        (h_float - h).abs() < 0.05 && h >= 1.0,
        "analytic class number {h_float} for {d} is not near a positive integer"
    );
    let h = h as u64;
    let unit_norm: i8 = if period % 2 == 1 { -1 } else { 1 };
    Ok(RealClassData {
        h,
        h_narrow: if unit_norm == 1 { 2 * h } else { h },
        regulator,
        unit_norm,
    })
}

/// Class data attached to the field Q(sqrt(m)) for squarefree m.
#[derive(Debug, Clone, Serialize)]
pub struct FieldClassData {
    /// Radicand.
    pub m: i64,
    /// Fundamental discriminant of Q(sqrt(m)).
    pub d: i64,
    /// Class number: ordinary for m < 0, narrow for m > 0. The narrow index
    /// is 1 or 2, so 3-divisibility agrees with the wide class number.
    pub h: u64,
    pub divisible_by_3: bool,
}

/// Class data for Q(sqrt(m)); m must be squarefree and not 0 or 1.
pub fn field_class_data(m: i64) -> Result<FieldClassData> {
    let d = fundamental_discriminant(m)?;
    let h = if d < 0 {
        class_number_imaginary(d)?
    } else {
        narrow_class_number_real(d)?
    };
    Ok(FieldClassData {
        m,
        d,
        h,
        divisible_by_3: h % 3 == 0,
    })
}

/// Whether 3 divides the class number of Q(sqrt(m)). The unit radicands
/// m = 1, -1 give class number 1.
pub fn h_divisible_by_3(m: i64) -> Result<bool> {
    if m == 1 || m == -1 {
        return Ok(false);
    }
    Ok(field_class_data(m)?.divisible_by_3)
}
