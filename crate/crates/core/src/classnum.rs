//! Class numbers of imaginary quadratic orders via reduced binary
//! quadratic forms, the unit-normalized h*, the divisor sums H and H*,
//! and the two-square / c^2 + 3d^2 decompositions of a prime.

use num_integer::Integer;
use num_traits::Zero;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

use crate::eisenstein::{rat, rat_int, Rational};
use crate::error::{Error, Result};

/// Conductor/fundamental-discriminant split n = t^2 D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscriminantData {
    pub n: i64,
    pub t: u64,
    pub d: i64,
}

/// The divisor sums H(n) = sum_{f|t} h(n/f^2) and the starred variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzSums {
    pub h: Rational,
    pub h_star: Rational,
}

fn valid_discriminant(d: i64) -> bool {
    d < 0 && (d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1)
}

/// Split n = t^2 D with D a fundamental discriminant and t maximal.
pub fn split_discriminant(n: i64) -> Result<DiscriminantData> {
    if !valid_discriminant(n) {
        return Err(Error::BadDiscriminant(n));
    }
    // largest square divisor t0^2 of n with n/t0^2 still = 0,1 mod 4
    let mut t = 1u64;
    let mut f = 2u64;
    let mut m = (-n) as u64;
    while f * f <= m {
        while m % (f * f) == 0 {
            m /= f * f;
            t *= f;
        }
        f += 1;
    }
    let mut d = n / (t * t) as i64;
    // if the squarefree part is 2,3 mod 4 the factor 4 belongs to D
    if d.rem_euclid(4) == 2 || d.rem_euclid(4) == 3 {
        debug_assert_eq!(t % 2, 0);
        t /= 2;
        d *= 4;
    }
    Ok(DiscriminantData { n, t, d })
}

static H_CACHE: Lazy<Mutex<HashMap<i64, u64>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// h(d): the number of primitive reduced forms (a, b, c) with
/// b^2 - 4ac = d, |b| <= a <= c, and b >= 0 when |b| = a or a = c.
pub fn class_number(d: i64) -> Result<u64> {
    if !valid_discriminant(d) {
        return Err(Error::BadDiscriminant(d));
    }
    if let Some(&h) = H_CACHE.lock().unwrap().get(&d) {
        return Ok(h);
    }
    let mut count = 0u64;
    let mut b = d.rem_euclid(2); // b has the parity of d
    while b * b <= -d / 3 {
        let m = (b * b - d) / 4; // = a*c
        let mut a = if b == 0 { 1 } else { b };
        while a * a <= m {
            if m % a == 0 {
                let c = m / a;
                // |b| <= a <= c holds; primitivity and the boundary rule
                if gcd3(a, b, c) == 1 {
                    count += 1;
                    // interior forms pair with their -b mirror
                    if b != 0 && b != a && a != c {
                        count += 1;
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    H_CACHE.lock().unwrap().insert(d, count);
    Ok(count)
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}

/// h*(d) = h(d)/omega(d), omega(-3) = 3, omega(-4) = 2, else 1.
pub fn h_star(d: i64) -> Result<Rational> {
    let h = class_number(d)? as i128;
    let w = match d {
        -3 => 3,
        -4 => 2,
        _ => 1,
    };
    Ok(rat(h, w))
}

/// H(n) and H*(n): sums of h, h* over f | t where n = t^2 D.
pub fn hurwitz(n: i64) -> Result<HurwitzSums> {
    let dd = split_discriminant(n)?;
    let mut h = Rational::zero();
    let mut hs = Rational::zero();
    for f in divisors(dd.t) {
        let sub = n / (f * f) as i64;
        h += rat_int(class_number(sub)? as i128);
        hs += h_star(sub)?;
    }
    Ok(HurwitzSums { h, h_star: hs })
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 1;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            if f != n / f {
                out.push(n / f);
            }
        }
        f += 1;
    }
    out.sort_unstable();
    out
}

/// Kronecker symbol (d | n) for n >= 0.
pub fn kronecker(d: i64, n: i64) -> i64 {
    // standard multiplicative extension of the Jacobi symbol
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut a = d;
    let mut m = n.abs();
    let mut sign = 1i64;
    if n < 0 && a < 0 {
        sign = -sign;
    }
    // factor out 2s from n
    while m % 2 == 0 {
        m /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => sign = -sign,
            _ => return 0, // a even
        }
    }
    a = a.rem_euclid(m);
    // Jacobi symbol (a | m), m odd positive
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        a %= m;
    }
    if m == 1 {
        sign
    } else {
        0
    }
}

/// Check h*(iota^2 d) = h*(d) * iota * prod_{l | iota} (1 - (d|l)/l)
/// for a fundamental discriminant d.
pub fn cox_index_check(d_fund: i64, iota: u64) -> Result<bool> {
    let lhs = h_star(d_fund * (iota * iota) as i64)?;
    let mut rhs = h_star(d_fund)? * rat_int(iota as i128);
    let mut m = iota;
    let mut l = 2u64;
    while l * l <= m {
        if m % l == 0 {
            while m % l == 0 {
                m /= l;
            }
            rhs *= rat_int(1) - rat(kronecker(d_fund, l as i64) as i128, l as i128);
        }
        l += 1;
    }
    if m > 1 {
        rhs *= rat_int(1) - rat(kronecker(d_fund, m as i64) as i128, m as i128);
    }
    Ok(lhs == rhs)
}

/// Prime decompositions used by the epsilon terms: p = a^2 + b^2 with
/// 3 | b when possible, and 4p = c^2 + 3d^2 with c, d > 0 and 3 | d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub ab: Option<(u64, u64)>,
    pub cd: Option<(u64, u64)>,
}

pub fn decompose(p: u64) -> Decomposition {
    let mut ab = None;
    if p % 4 == 1 {
        'outer: for a in 1..=isqrt(p) {
            let r = p - a * a;
            let b = isqrt(r);
            if b * b == r {
                // label so that 3 | b when 3 divides either coordinate
                // (exactly one does when p = 1 mod 3); otherwise a >= b
                ab = Some(if a % 3 == 0 || (b % 3 != 0 && a < b) {
                    (b, a)
                } else {
                    (a, b)
                });
                break 'outer;
            }
        }
    }
    let mut cd = None;
    if p % 3 == 1 {
        for d in 1..=isqrt(4 * p / 3) {
            let r = 4 * p - 3 * d * d;
            let c = isqrt(r);
            if c * c == r && c > 0 && d % 3 == 0 {
                cd = Some((c, d));
                break;
            }
        }
    }
    Decomposition { ab, cd }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

/// The three positive pairs {(c,d), ((c+3d)/2, |c-d|/2), (|c-3d|/2, (c+d)/2)}
/// parameterizing solutions of s^2 - 4p = -3 t^2; empty when p = 2 mod 3.
pub fn s3_pairs(p: u64) -> Vec<(u64, u64)> {
    match decompose(p).cd {
        Some((c, d)) => {
            let c = c as i64;
            let d = d as i64;
            let mut v = vec![
                (c as u64, d as u64),
                (((c + 3 * d) / 2) as u64, ((c - d).unsigned_abs() / 2)),
                ((c - 3 * d).unsigned_abs() / 2, ((c + d) / 2) as u64),
            ];
            v.sort_unstable();
            v
        }
        None => Vec::new(),
    }
}
