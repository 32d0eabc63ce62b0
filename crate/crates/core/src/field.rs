//! Realized finite fields F_q, q = p^e with p > 3 prime.
//!
//! A [`FieldCtx`] carries a full discrete-log table base a fixed generator,
//! the absolute trace to F_p, and the cube-class partition of F_q^* (the
//! coset of an element under the cubing map when q = 1 mod 3).
//!
//! Elements are encoded as integers in [0, q): the base-p digits of the
//! encoding are the coefficients of the representative polynomial in
//! F_p[X]/(m(X)), least-significant digit first. For e = 1 this is the
//! usual residue representation.

use crate::error::{Error, Result};

/// Default cap on q; full log tables make larger fields expensive.
pub const DEFAULT_FIELD_BOUND: u64 = 2_000_000;

/// Marker for the cube class of zero (which has no class).
pub const CUBE_CLASS_NONE: u8 = 3;

/// A realized finite field F_q with precomputed tables.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    /// Coefficients c_0..c_{e-1} of the reduction polynomial
    /// m(X) = X^e + c_{e-1} X^{e-1} + ... + c_0. For e = 1 this is [0]
    /// (elements are plain residues).
    pub modulus: Vec<u64>,
    /// Fixed generator of F_q^* (smallest encoding of maximal order).
    pub g: u64,
    log_table: Vec<u32>,
    exp_table: Vec<u32>,
    cube_class: Vec<u8>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Polynomial helpers over F_p used only during construction.
mod poly {
    /// Multiply two polynomials (coeff vectors, low first) mod p, then
    /// reduce by the monic modulus m (given by its low coefficients).
    pub fn mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
        let e = modulus.len();
        let mut prod = vec![0u64; a.len() + b.len()];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        // X^e = -sum c_i X^i
        for d in (e..prod.len()).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &ci) in modulus.iter().enumerate() {
                let sub = lead * ci % p;
                prod[d - e + i] = (prod[d - e + i] + p - sub) % p;
            }
        }
        prod.truncate(e);
        prod
    }

    pub fn powmod(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Vec<u64> {
        let e = modulus.len();
        let mut result = vec![0u64; e];
        result[0] = 1;
        let mut b = base.to_vec();
        b.resize(e, 0);
        while exp > 0 {
            if exp & 1 == 1 {
                result = mulmod(&result, &b, modulus, p);
            }
            b = mulmod(&b, &b, modulus, p);
            exp >>= 1;
        }
        result
    }

    /// Irreducibility over F_p of X^e + c_{e-1}X^{e-1} + ... + c_0.
    /// Standard test: X^{p^e} = X mod m, and X^{p^d} != X for proper
    /// divisors d of e.
    pub fn is_irreducible(modulus: &[u64], p: u64) -> bool {
        let e = modulus.len() as u64;
        let x = {
            let mut v = vec![0u64; modulus.len()];
            if modulus.len() > 1 {
                v[1] = 1;
            } else {
                // degree-1 modulus: X = -c_0
                v[0] = (p - modulus[0] % p) % p;
            }
            v
        };
        if e == 1 {
            return true;
        }
        // iterate Frobenius: frob_d = X^{p^d} mod m
        let mut frob = x.clone();
        for d in 1..=e {
            frob = powmod(&frob, p, modulus, p);
            if d < e && e % d == 0 && frob == x {
                return false;
            }
        }
        frob == x
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldCtx {
    fn encode(&self, coeffs: &[u64]) -> u64 {
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * self.p + c;
        }
        v
    }

    fn decode(&self, mut x: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.e == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let da = self.decode(a);
        let n: Vec<u64> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&n)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = (self.log(a) + self.log(b)) % (self.q - 1);
        self.exp_table[l as usize] as u64
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        let l = (self.q - 1 - self.log(a)) % (self.q - 1);
        self.exp_table[l as usize] as u64
    }

    pub fn pow(&self, a: u64, k: i64) -> u64 {
        if a == 0 {
            assert!(k > 0, "0^k needs k > 0");
            return 0;
        }
        let q1 = (self.q - 1) as i64;
        let l = ((self.log(a) as i64 * (k % q1)) % q1 + q1) % q1;
        self.exp_table[l as usize] as u64
    }

    /// Discrete log base `g`; panics on 0.
    pub fn log(&self, a: u64) -> u64 {
        assert!(a != 0, "log of zero");
        self.log_table[a as usize] as u64
    }

    /// g^k for 0 <= k < q-1.
    pub fn gen_pow(&self, k: u64) -> u64 {
        self.exp_table[(k % (self.q - 1)) as usize] as u64
    }

    /// Embed an integer into the field via its residue mod p.
    pub fn embed(&self, n: i64) -> u64 {
        let p = self.p as i64;
        ((n % p + p) % p) as u64
    }

    /// Absolute trace x + x^p + ... + x^{p^{e-1}}, returned as an element
    /// of the prime subfield (an encoding < p).
    pub fn trace_to_prime(&self, x: u64) -> u64 {
        if self.e == 1 {
            return x;
        }
        let mut acc = 0u64;
        let mut t = x;
        for _ in 0..self.e {
            acc = self.add(acc, t);
            t = self.pow_u(t, self.p);
        }
        debug_assert!(acc < self.p, "trace did not land in F_p");
        acc
    }

    fn pow_u(&self, a: u64, k: u64) -> u64 {
        if a == 0 {
            return 0;
        }
        let l = (self.log(a) as u128 * (k % (self.q - 1)) as u128 % (self.q - 1) as u128) as u64;
        self.exp_table[l as usize] as u64
    }

    /// Cube class of x: 0 when x is a cube, 1 or 2 for the other cosets,
    /// [`CUBE_CLASS_NONE`] for x = 0. All-zero when q = 2 mod 3.
    pub fn cube_class(&self, x: u64) -> u8 {
        self.cube_class[x as usize]
    }

    pub fn is_cube(&self, x: u64) -> bool {
        x != 0 && self.cube_class[x as usize] == 0
    }

    /// Quadratic character: 1 for nonzero squares, -1 for nonsquares, 0 at 0.
    pub fn chi2(&self, x: u64) -> i32 {
        if x == 0 {
            0
        } else if self.log(x) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_one_mod_3(&self) -> bool {
        self.q % 3 == 1
    }
}

static FIELD_BOUND: std::sync::atomic::AtomicU64 =
    std::sync::atomic::AtomicU64::new(DEFAULT_FIELD_BOUND);

/// Override the process-wide field size bound (e.g. from HH_FIELD_BOUND).
pub fn set_field_bound(bound: u64) {
    FIELD_BOUND.store(bound, std::sync::atomic::Ordering::Relaxed);
}

/// The currently configured field size bound.
pub fn field_bound() -> u64 {
    FIELD_BOUND.load(std::sync::atomic::Ordering::Relaxed)
}

/// Build F_{p^e} with the configured size bound.
pub fn build_field(p: u64, e: u32) -> Result<FieldCtx> {
    build_field_with_bound(p, e, field_bound())
}

/// Build F_{p^e}, deterministic for fixed (p, e): the reduction polynomial
/// is the irreducible of degree e with smallest packed encoding, and the
/// generator is the element of smallest encoding with order q-1.
pub fn build_field_with_bound(p: u64, e: u32, bound: u64) -> Result<FieldCtx> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    assert!(e >= 1, "extension degree must be >= 1");
    let q = p.checked_pow(e).filter(|&q| q <= bound).ok_or(Error::FieldTooLarge {
        q: p.saturating_pow(e),
        bound,
    })?;

    // smallest monic irreducible of degree e, ordered by packed low coefficients
    let modulus = if e == 1 {
        vec![0u64]
    } else {
        let mut found = None;
        'outer: for packed in 0..q {
            let mut coeffs = Vec::with_capacity(e as usize);
            let mut x = packed;
            for _ in 0..e {
                coeffs.push(x % p);
                x /= p;
            }
            if poly::is_irreducible(&coeffs, p) {
                found = Some(coeffs);
                break 'outer;
            }
        }
        found.ok_or(Error::NoIrreducibleFound(e))?
    };

    let mut ctx = FieldCtx {
        p,
        e,
        q,
        modulus: modulus.clone(),
        g: 0,
        log_table: vec![0; q as usize],
        exp_table: vec![0; (q - 1) as usize],
        cube_class: vec![0; q as usize],
    };

    // generator: smallest encoding with multiplicative order q-1
    let factors = prime_factors(q - 1);
    let mut generator = None;
    'search: for cand in 2..q {
        let cd = ctx.decode(cand);
        for &f in &factors {
            let pw = poly::powmod(&cd, (q - 1) / f, &modulus, p);
            if ctx.encode(&pw) == 1 {
                continue 'search;
            }
        }
        generator = Some(cand);
        break;
    }
    let g = generator.ok_or(Error::NoIrreducibleFound(e))?;
    ctx.g = g;

    let gd = ctx.decode(g);
    let mut cur = vec![0u64; e as usize];
    cur[0] = 1;
    for k in 0..q - 1 {
        let enc = ctx.encode(&cur);
        ctx.exp_table[k as usize] = enc as u32;
        ctx.log_table[enc as usize] = k as u32;
        cur = poly::mulmod(&cur, &gd, &modulus, p);
    }
    debug_assert_eq!(ctx.encode(&cur), 1, "generator order is not q-1");

    if q % 3 == 1 {
        ctx.cube_class[0] = CUBE_CLASS_NONE;
        for k in 0..q - 1 {
            ctx.cube_class[ctx.exp_table[k as usize] as usize] = (k % 3) as u8;
        }
    } else {
        // cubing is a bijection; every nonzero element is a cube
        ctx.cube_class[0] = CUBE_CLASS_NONE;
    }

    Ok(ctx)
}

/// The noncube of smallest canonical encoding.
pub fn find_noncube(ctx: &FieldCtx) -> Result<u64> {
    if !ctx.is_one_mod_3() {
        return Err(Error::AllCubes(ctx.q));
    }
    (2..ctx.q)
        .find(|&x| ctx.cube_class(x) != 0)
        .ok_or(Error::AllCubes(ctx.q))
}
