//! Exact arithmetic in Z[w] and Q(w), w a primitive cube root of unity.
//!
//! Every root of unity of order dividing 6 lies in Z[w], so sums of cubic
//! and quadratic character values can be accumulated exactly here. The
//! embedding sends w to exp(2 pi i / 3).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational numbers (reduced, positive denominator).
pub type Rational = BigRational;

pub fn rat_int(n: i128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i128, den: i128) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Extract an i128 from an integral Rational, if it is one.
pub fn rat_to_integer(r: &Rational) -> Option<i128> {
    if r.is_integer() {
        r.numer().to_i128()
    } else {
        None
    }
}

/// An Eisenstein integer a + b*w with machine coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Eis {
    pub a: i128,
    pub b: i128,
}

impl Eis {
    pub const ZERO: Eis = Eis { a: 0, b: 0 };
    pub const ONE: Eis = Eis { a: 1, b: 0 };
    /// sqrt(-3) = 1 + 2w.
    pub const SQRT_M3: Eis = Eis { a: 1, b: 2 };

    pub fn new(a: i128, b: i128) -> Eis {
        Eis { a, b }
    }

    /// zeta_6^k where zeta_6 = 1 + w.
    pub fn zeta6_pow(k: u64) -> Eis {
        const TABLE: [(i128, i128); 6] = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)];
        let (a, b) = TABLE[(k % 6) as usize];
        Eis { a, b }
    }

    /// w^k.
    pub fn omega_pow(k: u64) -> Eis {
        Eis::zeta6_pow(2 * k)
    }

    pub fn add(self, o: Eis) -> Eis {
        Eis::new(self.a + o.a, self.b + o.b)
    }

    pub fn sub(self, o: Eis) -> Eis {
        Eis::new(self.a - o.a, self.b - o.b)
    }

    pub fn neg(self) -> Eis {
        Eis::new(-self.a, -self.b)
    }

    /// (a + bw)(c + dw) with w^2 = -1 - w.
    pub fn mul(self, o: Eis) -> Eis {
        Eis::new(
            self.a * o.a - self.b * o.b,
            self.a * o.b + self.b * o.a - self.b * o.b,
        )
    }

    /// Complex conjugate; w-bar = w^2 = -1 - w.
    pub fn conj(self) -> Eis {
        Eis::new(self.a - self.b, -self.b)
    }

    pub fn pow(self, mut k: u32) -> Eis {
        let mut acc = Eis::ONE;
        let mut base = self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    pub fn norm(self) -> i128 {
        self.a * self.a - self.a * self.b + self.b * self.b
    }

    pub fn is_rational(self) -> bool {
        self.b == 0
    }

    pub fn embed(self) -> Complex64 {
        const W: Complex64 = Complex64::new(-0.5, 0.866_025_403_784_438_6);
        Complex64::new(self.a as f64, 0.0) + W * self.b as f64
    }
}

/// An element of Q(w) with exact rational coordinates a + b*w.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisRat {
    pub a: Rational,
    pub b: Rational,
}

impl EisRat {
    pub fn zero() -> EisRat {
        EisRat {
            a: Rational::zero(),
            b: Rational::zero(),
        }
    }

    pub fn one() -> EisRat {
        EisRat {
            a: Rational::one(),
            b: Rational::zero(),
        }
    }

    pub fn from_eis(e: Eis) -> EisRat {
        EisRat {
            a: rat_int(e.a),
            b: rat_int(e.b),
        }
    }

    pub fn from_rational(r: Rational) -> EisRat {
        EisRat {
            a: r,
            b: Rational::zero(),
        }
    }

    pub fn add(&self, o: &EisRat) -> EisRat {
        EisRat {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn sub(&self, o: &EisRat) -> EisRat {
        EisRat {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    pub fn mul(&self, o: &EisRat) -> EisRat {
        EisRat {
            a: &self.a * &o.a - &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a - &self.b * &o.b,
        }
    }

    pub fn neg(&self) -> EisRat {
        EisRat {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn conj(&self) -> EisRat {
        EisRat {
            a: &self.a - &self.b,
            b: -self.b.clone(),
        }
    }

    pub fn scale(&self, r: &Rational) -> EisRat {
        EisRat {
            a: &self.a * r,
            b: &self.b * r,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational part, when the w-coordinate vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    pub fn embed(&self) -> Complex64 {
        const W: Complex64 = Complex64::new(-0.5, 0.866_025_403_784_438_6);
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        Complex64::new(a, 0.0) + W * b
    }
}

/// pi^m + pi-bar^m for pi = (s + d*sqrt(-3))/2 in Z[w], the exact power
/// route to p^m-power Frobenius traces when s^2 - 4p = -3 d^2.
pub fn power_trace_sqrt3(s: i128, d: i128, p: i128, m: u32) -> Option<i128> {
    if s * s - 4 * p != -3 * d * d {
        return None;
    }
    // 2*pi = s + d(1 + 2w); both coordinates of 2*pi are even or the pair
    // (s + d, 2d) is even exactly when s and d have equal parity, which the
    // norm equation forces.
    let two_pi = Eis::new(s + d, 2 * d);
    let num = two_pi.pow(m).add(two_pi.conj().pow(m));
    let den = 1i128.checked_shl(m)?; // 2^m
    debug_assert!(num.is_rational());
    debug_assert_eq!(num.a % den, 0);
    Some(num.a / den)
}

/// Sign of the rational as an abs-bounded helper.
pub fn rat_abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_relations() {
        let w = Eis::omega_pow(1);
        assert_eq!(w.mul(w).mul(w), Eis::ONE);
        assert_eq!(w.mul(w).add(w).add(Eis::ONE), Eis::ZERO);
        assert_eq!(Eis::SQRT_M3.mul(Eis::SQRT_M3), Eis::new(-3, 0));
    }

    #[test]
    fn zeta6_has_order_6() {
        let z = Eis::zeta6_pow(1);
        let mut acc = Eis::ONE;
        for k in 0..6 {
            assert_eq!(acc, Eis::zeta6_pow(k));
            acc = acc.mul(z);
        }
        assert_eq!(acc, Eis::ONE);
    }

    #[test]
    fn conj_and_norm() {
        let x = Eis::new(3, -5);
        let n = x.mul(x.conj());
        assert!(n.is_rational());
        assert_eq!(n.a, x.norm());
        let e = x.embed();
        assert!((e.norm_sqr() - x.norm() as f64).abs() < 1e-9);
    }

    #[test]
    fn power_trace_matches_recurrence() {
        // p = 7: 1^2 - 28 = -27 = -3 * 9, so (s, d) = (1, 3)
        let (s, d, p) = (1i128, 3i128, 7i128);
        let mut t = vec![2i128, s];
        for m in 2..=8 {
            let next = s * t[m - 1] - p * t[m - 2];
            t.push(next);
        }
        for m in 0..=8u32 {
            assert_eq!(power_trace_sqrt3(s, d, p, m), Some(t[m as usize]));
        }
    }

    #[test]
    fn eisrat_field_ops() {
        let x = EisRat {
            a: rat(1, 3),
            b: rat(-2, 7),
        };
        let y = x.mul(&x.conj());
        assert!(y.is_rational());
        assert!(y.a > Rational::zero());
        assert_eq!(x.add(&x.neg()), EisRat::zero());
    }
}
