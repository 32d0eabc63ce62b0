//! The curve family y^2 + a1 xy + a3 y = x^3: point counts, Frobenius
//! traces and their prime-power lifts, 3-torsion structure, cubic twists,
//! and the per-prime isomorphism-class census bucketed by trace.

use crate::characters::{gauss_sum_exp, Character, APPROX_TOL};
use crate::error::{Error, Result};
use crate::field::{build_field, find_noncube, FieldCtx};
use num_complex::Complex64;
use num_traits::Zero;

/// A curve y^2 + a1 xy + a3 y = x^3 with integer coefficients, reduced
/// modulo the prime of whatever field it is evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Curve {
    pub a1: i64,
    pub a3: i64,
}

impl Curve {
    pub fn new(a1: i64, a3: i64) -> Curve {
        Curve { a1, a3 }
    }

    /// The one-parameter member E_t = E_{t, t^2}.
    pub fn e_t(t: i64) -> Curve {
        Curve { a1: t, a3: t * t }
    }

    /// Discriminant a3^3 (a1^3 - 27 a3) as a field element.
    pub fn discriminant(&self, ctx: &FieldCtx) -> u64 {
        let a1 = ctx.embed(self.a1);
        let a3 = ctx.embed(self.a3);
        let a1c = ctx.mul(a1, ctx.mul(a1, a1));
        let a3c = ctx.mul(a3, ctx.mul(a3, a3));
        ctx.mul(a3c, ctx.sub(a1c, ctx.mul(ctx.embed(27), a3)))
    }

    pub fn good_reduction(&self, ctx: &FieldCtx) -> bool {
        self.discriminant(ctx) != 0
    }

    /// j-invariant a1^3 (a1^3 - 24 a3)^3 / (a3^3 (a1^3 - 27 a3)).
    pub fn j_invariant(&self, ctx: &FieldCtx) -> Result<u64> {
        let delta = self.discriminant(ctx);
        if delta == 0 {
            return Err(Error::BadReduction);
        }
        let a1 = ctx.embed(self.a1);
        let a3 = ctx.embed(self.a3);
        let a1c = ctx.mul(a1, ctx.mul(a1, a1));
        let num_base = ctx.sub(a1c, ctx.mul(ctx.embed(24), a3));
        let num = ctx.mul(a1c, ctx.pow(num_base, 3));
        Ok(ctx.mul(num, ctx.inv(delta)))
    }

    /// Short-Weierstrass image (A, B) with y^2 = x^3 + Ax + B, via the
    /// invariants c4 = a1^4 - 24 a1 a3, c6 = -a1^6 + 36 a1^3 a3 - 216 a3^2
    /// and the model y^2 = x^3 - 27 c4 x - 54 c6.
    pub fn short_model(&self, ctx: &FieldCtx) -> (u64, u64) {
        let a1 = ctx.embed(self.a1);
        let a3 = ctx.embed(self.a3);
        let a1c = ctx.mul(a1, ctx.mul(a1, a1));
        let c4 = ctx.sub(ctx.mul(a1c, a1), ctx.mul(ctx.embed(24), ctx.mul(a1, a3)));
        let c6 = ctx.sub(
            ctx.mul(ctx.embed(36), ctx.mul(a1c, a3)),
            ctx.add(ctx.mul(a1c, a1c), ctx.mul(ctx.embed(216), ctx.mul(a3, a3))),
        );
        let a = ctx.neg(ctx.mul(ctx.embed(27), c4));
        let b = ctx.neg(ctx.mul(ctx.embed(54), c6));
        (a, b)
    }
}

/// Projective point count of E over F_q (q odd), by completing the square:
/// (2y + a1 x + a3)^2 = 4x^3 + (a1 x + a3)^2, so the affine count is
/// q + sum_x chi2(4x^3 + (a1 x + a3)^2).
pub fn count_points(ctx: &FieldCtx, c: &Curve) -> Result<u64> {
    if !c.good_reduction(ctx) {
        return Err(Error::BadReduction);
    }
    let a1 = ctx.embed(c.a1);
    let a3 = ctx.embed(c.a3);
    let four = ctx.embed(4);
    let mut acc: i64 = 0;
    for x in 0..ctx.q {
        let lin = ctx.add(ctx.mul(a1, x), a3);
        let f = ctx.add(ctx.mul(four, ctx.pow(x, 3)), ctx.mul(lin, lin));
        acc += ctx.chi2(f) as i64;
    }
    Ok((ctx.q as i64 + 1 + acc) as u64)
}

/// Frobenius trace t_q = q + 1 - |E(F_q)|.
pub fn trace_of(ctx: &FieldCtx, c: &Curve) -> Result<i64> {
    let n = count_points(ctx, c)? as i64;
    let t = ctx.q as i64 + 1 - n;
    if (t * t) as u64 > 4 * ctx.q {
        return Err(Error::HasseViolation { t, p: ctx.q });
    }
    Ok(t)
}

/// Trace of y^2 = x^3 + Ax + B over F_p with (A, B) field elements.
pub fn short_trace(ctx: &FieldCtx, a: u64, b: u64) -> i64 {
    let mut acc: i64 = 0;
    for x in 0..ctx.q {
        let f = ctx.add(ctx.mul(x, ctx.mul(x, x)), ctx.add(ctx.mul(a, x), b));
        acc += ctx.chi2(f) as i64;
    }
    -acc
}

/// t_{p^k} from t_p via t_{p^k} = t_p t_{p^{k-1}} - p t_{p^{k-2}},
/// seeds t_{p^0} = 2, t_{p^1} = t_p.
pub fn lift_trace(t_p: i64, p: u64, k: u32) -> Result<i128> {
    if (t_p as i128) * (t_p as i128) > 4 * p as i128 {
        return Err(Error::HasseViolation { t: t_p, p });
    }
    let mut prev: i128 = 2;
    let mut cur: i128 = t_p as i128;
    if k == 0 {
        return Ok(prev);
    }
    for _ in 1..k {
        let next = t_p as i128 * cur - p as i128 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// a_{p^{k-2}} for even weight k, via a_{p^e} = a_p a_{p^{e-1}} - p a_{p^{e-2}},
/// a_{p^0} = 1. Equals the kernel polynomial G_k(t_p, p).
pub fn a_coefficient(t_p: i64, p: u64, k: u32) -> i128 {
    assert!(k >= 2 && k % 2 == 0, "even weight >= 2 required");
    let e = k - 2;
    let mut prev: i128 = 1;
    if e == 0 {
        return prev;
    }
    let mut cur: i128 = t_p as i128;
    for _ in 1..e {
        let next = t_p as i128 * cur - p as i128 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Number of affine points of order 3 on y^2 + a1 xy + a3 y = x^3
/// (8 exactly when the full 3-torsion is rational).
pub fn order_three_count(ctx: &FieldCtx, c: &Curve) -> Result<u64> {
    if !c.good_reduction(ctx) {
        return Err(Error::BadReduction);
    }
    let a1 = ctx.embed(c.a1);
    let a3 = ctx.embed(c.a3);
    let mut count = 0u64;
    for x in 0..ctx.q {
        for y in 0..ctx.q {
            // on-curve check
            let lhs = ctx.add(ctx.mul(y, y), ctx.add(ctx.mul(a1, ctx.mul(x, y)), ctx.mul(a3, y)));
            if lhs != ctx.pow(x, 3) {
                continue;
            }
            // 2P = O when the tangent is vertical; otherwise P has order 3
            // iff x(2P) = x(P) (2P = P is impossible for P != O)
            let denom = ctx.add(ctx.add(y, y), ctx.add(ctx.mul(a1, x), a3));
            if denom == 0 {
                continue;
            }
            let lambda = ctx.mul(
                ctx.sub(ctx.mul(ctx.embed(3), ctx.mul(x, x)), ctx.mul(a1, y)),
                ctx.inv(denom),
            );
            let x2 = ctx.sub(
                ctx.add(ctx.mul(lambda, lambda), ctx.mul(a1, lambda)),
                ctx.add(x, x),
            );
            if x2 == x {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Whether E(F_p)[3] is the full Z/3 x Z/3: the discriminant is a cube.
pub fn has_full_three_torsion(ctx: &FieldCtx, c: &Curve) -> Result<bool> {
    if !ctx.is_one_mod_3() {
        return Err(Error::WrongResidue {
            p: ctx.q,
            residue: 1,
            modulus: 3,
        });
    }
    let delta = c.discriminant(ctx);
    if delta == 0 {
        return Err(Error::BadReduction);
    }
    Ok(ctx.is_cube(delta))
}

/// Full 3-torsion test for a short model y^2 = x^3 + Ax + B: count affine
/// points with x(2P) = x(P) (doubling slope (3x^2 + A)/(2y)).
pub fn short_full_three_torsion(ctx: &FieldCtx, a: u64, b: u64) -> bool {
    let mut count = 0u64;
    for x in 0..ctx.q {
        let rhs = ctx.add(ctx.mul(x, ctx.mul(x, x)), ctx.add(ctx.mul(a, x), b));
        for y in 0..ctx.q {
            if ctx.mul(y, y) != rhs || y == 0 {
                continue;
            }
            let lambda = ctx.mul(
                ctx.add(ctx.mul(ctx.embed(3), ctx.mul(x, x)), a),
                ctx.inv(ctx.add(y, y)),
            );
            if ctx.sub(ctx.mul(lambda, lambda), ctx.add(x, x)) == x {
                count += 1;
            }
        }
    }
    count == 8
}

/// Canonical representative of the F_p-isomorphism class of
/// y^2 = x^3 + Ax + B: the lexicographically least (u^4 A, u^6 B).
pub fn canonical_class(ctx: &FieldCtx, a: u64, b: u64) -> (u64, u64) {
    let mut best = (a, b);
    for u in 2..ctx.q {
        let u2 = ctx.mul(u, u);
        let u4 = ctx.mul(u2, u2);
        let cand = (ctx.mul(u4, a), ctx.mul(ctx.mul(u4, u2), b));
        if cand < best {
            best = cand;
        }
    }
    best
}

/// One isomorphism class in the census.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusClass {
    /// Canonical short-model coefficients.
    pub a: u64,
    pub b: u64,
    pub trace: i64,
    pub j: u64,
    /// Has a rational point of order 3.
    pub has_three_torsion: bool,
    /// Full rational 3-torsion Z/3 x Z/3.
    pub full_three_torsion: bool,
}

/// All F_p-isomorphism classes of elliptic curves over F_p, bucketed by
/// Frobenius trace.
#[derive(Debug, Clone)]
pub struct Census {
    pub p: u64,
    pub classes: Vec<CensusClass>,
}

impl Census {
    pub fn n(&self, s: i64) -> u64 {
        self.classes.iter().filter(|c| c.trace == s).count() as u64
    }

    pub fn n3(&self, s: i64) -> u64 {
        self.classes
            .iter()
            .filter(|c| c.trace == s && c.has_three_torsion)
            .count() as u64
    }

    pub fn n3x3(&self, s: i64) -> u64 {
        self.classes
            .iter()
            .filter(|c| c.trace == s && c.full_three_torsion)
            .count() as u64
    }

    /// Traces that occur, sorted.
    pub fn traces(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.classes.iter().map(|c| c.trace).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Enumerate every short-Weierstrass class over F_p (one canonical
/// representative per u^4/u^6 twist orbit), count points per class, and
/// record the 3-torsion structure.
pub fn build_census(p: u64) -> Result<Census> {
    let ctx = build_field(p, 1)?;
    let mut classes = Vec::new();
    for a in 0..p {
        for b in 0..p {
            // nonsingular: 4A^3 + 27B^2 != 0
            let disc = disc_full(&ctx, a, b);
            if disc == 0 {
                continue;
            }
            if canonical_class(&ctx, a, b) != (a, b) {
                continue;
            }
            let trace = short_trace(&ctx, a, b);
            let n = p as i64 + 1 - trace;
            let has3 = n % 3 == 0;
            let full3 = if ctx.is_one_mod_3() {
                has3 && short_full_three_torsion(&ctx, a, b)
            } else {
                false
            };
            let four_a3 = ctx.mul(ctx.embed(4), cube(&ctx, a));
            let j = ctx.mul(ctx.mul(ctx.embed(1728), four_a3), ctx.inv(disc));
            classes.push(CensusClass {
                a,
                b,
                trace,
                j,
                has_three_torsion: has3,
                full_three_torsion: full3,
            });
        }
    }
    classes.sort_by_key(|c| (c.trace, c.a, c.b));
    Ok(Census { p, classes })
}

fn cube(ctx: &FieldCtx, a: u64) -> u64 {
    ctx.mul(a, ctx.mul(a, a))
}

fn disc_full(ctx: &FieldCtx, a: u64, b: u64) -> u64 {
    ctx.add(
        ctx.mul(ctx.embed(4), cube(ctx, a)),
        ctx.mul(ctx.embed(27), ctx.mul(b, b)),
    )
}

/// For each class with trace s and a rational 3-torsion point, the number
/// of t in F_p with nonzero discriminant, trace s, and E_t in that class.
/// Returned as (class, fiber size) sorted by canonical coefficients.
pub fn fiber_profile(census: &Census, ctx: &FieldCtx, s: i64) -> Result<Vec<(CensusClass, u64)>> {
    let p = census.p;
    let mut rows: Vec<(CensusClass, u64)> = census
        .classes
        .iter()
        .filter(|c| c.trace == s && c.has_three_torsion)
        .map(|c| (*c, 0u64))
        .collect();
    for t in 0..p {
        let c = Curve::e_t(t as i64);
        if !c.good_reduction(ctx) {
            continue;
        }
        if trace_of(ctx, &c)? != s {
            continue;
        }
        let (a, b) = c.short_model(ctx);
        let key = canonical_class(ctx, a, b);
        for row in rows.iter_mut() {
            if (row.0.a, row.0.b) == key {
                row.1 += 1;
            }
        }
    }
    Ok(rows)
}

/// Traces of the cubic-twist triple E_{0,1}, E_{0,beta}, E_{0,beta^2}
/// for beta the canonical noncube.
pub fn cubic_twist_traces(ctx: &FieldCtx) -> Result<(i64, i64, i64)> {
    let beta = find_noncube(ctx)?;
    let t1 = trace_of(ctx, &Curve::new(0, 1))?;
    let t2 = short_trace_twist(ctx, beta);
    let t3 = short_trace_twist(ctx, ctx.mul(beta, beta));
    Ok((t1, t2, t3))
}

/// Trace of y^2 + y a3-twist member E_{0, a3} with a3 a field element:
/// complete the square to y'^2 = x^3 + a3^2/4 shifted, i.e. count
/// (2y + a3)^2 = 4x^3 + a3^2 directly.
fn short_trace_twist(ctx: &FieldCtx, a3: u64) -> i64 {
    let four = ctx.embed(4);
    let a3sq = ctx.mul(a3, a3);
    let mut acc: i64 = 0;
    for x in 0..ctx.q {
        let f = ctx.add(ctx.mul(four, ctx.pow(x, 3)), a3sq);
        acc += ctx.chi2(f) as i64;
    }
    -acc
}

/// The Gauss-sum expansion of the cubic-twist trace:
/// t_q(E_{0,v}) = -1/q - (1/q) sum_{j in {0, (q-1)/3, 2(q-1)/3}}
/// G_{-j}^3 T^j(v), checked against the point count at tolerance.
pub fn fro_identity_check(ctx: &FieldCtx, v: u64) -> Result<bool> {
    if !ctx.is_one_mod_3() {
        return Err(Error::WrongResidue {
            p: ctx.q,
            residue: 1,
            modulus: 3,
        });
    }
    let q = ctx.q as f64;
    let third = (ctx.q - 1) / 3;
    let mut acc = Complex64::zero();
    for j in [0, third, 2 * third] {
        let g = gauss_sum_exp(ctx, -(j as i64)).approx();
        acc += g * g * g * Character::new(ctx, j).eval(ctx, v).approx();
    }
    let rhs = -1.0 / q - acc.re / q;
    debug_assert!(acc.im.abs() < 1e-6);
    let lhs = short_trace_twist(ctx, v) as f64;
    Ok((lhs - rhs).abs() < APPROX_TOL * q)
}

/// Brute-force projective point count, used only as a test oracle.
pub fn count_points_naive(ctx: &FieldCtx, c: &Curve) -> u64 {
    let a1 = ctx.embed(c.a1);
    let a3 = ctx.embed(c.a3);
    let mut n = 1u64; // infinity
    for x in 0..ctx.q {
        let x3 = ctx.pow(x, 3);
        for y in 0..ctx.q {
            let lhs = ctx.add(ctx.mul(y, y), ctx.add(ctx.mul(a1, ctx.mul(x, y)), ctx.mul(a3, y)));
            if lhs == x3 {
                n += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn count_e01_small_fields() {
        let f7 = build_field(7, 1).unwrap();
        let e01 = Curve::new(0, 1);
        assert_eq!(count_points(&f7, &e01).unwrap(), 9);
        assert_eq!(trace_of(&f7, &e01).unwrap(), -1);
        let f13 = build_field(13, 1).unwrap();
        assert_eq!(count_points(&f13, &e01).unwrap(), 9);
        assert_eq!(trace_of(&f13, &e01).unwrap(), 5);
    }

    #[test]
    fn count_matches_naive_oracle() {
        for &(p, e) in &[(7u64, 1u32), (11, 1), (13, 1), (5, 2)] {
            let ctx = build_field(p, e).unwrap();
            for a1 in 0..4i64 {
                for a3 in 1..5i64 {
                    let c = Curve::new(a1, a3);
                    if !c.good_reduction(&ctx) {
                        continue;
                    }
                    assert_eq!(
                        count_points(&ctx, &c).unwrap(),
                        count_points_naive(&ctx, &c),
                        "({p},{e}) a1={a1} a3={a3}"
                    );
                }
            }
        }
    }

    #[test]
    fn singular_curve_rejected() {
        let f13 = build_field(13, 1).unwrap();
        // E_27 has t^3 - 27t^2 = 0
        let c = Curve::e_t(27 % 13);
        assert!(!c.good_reduction(&f13));
        assert_eq!(count_points(&f13, &c), Err(Error::BadReduction));
        assert_eq!(count_points(&f13, &Curve::e_t(0)), Err(Error::BadReduction));
    }

    #[test]
    fn lift_trace_examples() {
        assert_eq!(lift_trace(-1, 7, 3).unwrap(), 20);
        assert_eq!(lift_trace(5, 13, 3).unwrap(), -70);
        assert_eq!(lift_trace(0, 5, 2).unwrap(), -10);
        assert_eq!(lift_trace(-1, 7, 0).unwrap(), 2);
        assert_eq!(
            lift_trace(6, 7, 2),
            Err(Error::HasseViolation { t: 6, p: 7 })
        );
    }

    #[test]
    fn a_coefficient_examples() {
        assert_eq!(a_coefficient(3, 11, 2), 1);
        assert_eq!(a_coefficient(-1, 7, 4), -6); // t^2 - p
        // a_{p^k} - p a_{p^{k-2}} = t_{p^k}
        for t in -4i64..=4 {
            for &p in &[5u64, 7, 11, 13] {
                if (t * t) as u64 > 4 * p {
                    continue;
                }
                for k in (4..=12u32).step_by(2) {
                    let lhs = a_coefficient(t, p, k + 2) - p as i128 * a_coefficient(t, p, k);
                    assert_eq!(lhs, lift_trace(t, p, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn three_torsion_cube_criterion_matches_oracle() {
        let f13 = build_field(13, 1).unwrap();
        assert!(has_full_three_torsion(&f13, &Curve::new(0, 1)).unwrap());
        for t in 1..13i64 {
            let c = Curve::e_t(t);
            if !c.good_reduction(&f13) {
                continue;
            }
            let by_cube = has_full_three_torsion(&f13, &c).unwrap();
            let by_oracle = order_three_count(&f13, &c).unwrap() == 8;
            assert_eq!(by_cube, by_oracle, "t = {t}");
        }
        let f5 = build_field(5, 1).unwrap();
        assert!(matches!(
            has_full_three_torsion(&f5, &Curve::new(0, 1)),
            Err(Error::WrongResidue { .. })
        ));
    }

    #[test]
    fn e24_discriminant_is_cube() {
        // Delta(E_24) = -24^6 * 2^6 * 3^3, a cube in every F_p, p = 1 mod 3
        for p in [7u64, 13, 19, 31, 37] {
            let ctx = build_field(p, 1).unwrap();
            let c = Curve::e_t(24);
            if c.good_reduction(&ctx) {
                assert!(has_full_three_torsion(&ctx, &c).unwrap(), "p = {p}");
            }
        }
    }

    #[test]
    fn j_invariant_formula() {
        // j(E_t) = t (t-24)^3 / (t-27)
        for p in [7u64, 11, 13, 19, 23, 31, 37, 41, 43, 47] {
            let ctx = build_field(p, 1).unwrap();
            for t in 0..p as i64 {
                let c = Curve::e_t(t);
                if !c.good_reduction(&ctx) {
                    continue;
                }
                let te = ctx.embed(t);
                let num = ctx.mul(te, ctx.pow(ctx.sub(te, ctx.embed(24)), 3));
                let expect = ctx.mul(num, ctx.inv(ctx.sub(te, ctx.embed(27))));
                assert_eq!(c.j_invariant(&ctx).unwrap(), expect, "p={p} t={t}");
            }
        }
    }

    #[test]
    fn short_model_preserves_trace_and_j() {
        for p in [7u64, 13, 19] {
            let ctx = build_field(p, 1).unwrap();
            for t in 1..p as i64 {
                let c = Curve::e_t(t);
                if !c.good_reduction(&ctx) {
                    continue;
                }
                let (a, b) = c.short_model(&ctx);
                assert_eq!(short_trace(&ctx, a, b), trace_of(&ctx, &c).unwrap());
                // j of the short model: 1728 * 4A^3 / (4A^3 + 27B^2)
                let four_a3 = ctx.mul(ctx.embed(4), ctx.mul(a, ctx.mul(a, a)));
                let den = ctx.add(four_a3, ctx.mul(ctx.embed(27), ctx.mul(b, b)));
                let j = ctx.mul(ctx.mul(ctx.embed(1728), four_a3), ctx.inv(den));
                assert_eq!(j, c.j_invariant(&ctx).unwrap(), "p={p} t={t}");
            }
        }
    }

    #[test]
    fn cubic_twists() {
        let f7 = build_field(7, 1).unwrap();
        let (t1, t2, t3) = cubic_twist_traces(&f7).unwrap();
        let mut v = [t1, t2, t3];
        v.sort_unstable();
        assert_eq!(v, [-4, -1, 5]);
        assert_eq!(t1 * t2 * t3, 20);
        let f13 = build_field(13, 1).unwrap();
        let (u1, u2, u3) = cubic_twist_traces(&f13).unwrap();
        assert_eq!(u1 * u2 * u3, -70);
        assert_eq!(u1 + u2 + u3, 0);
    }

    #[test]
    fn fro_identity_small_fields() {
        for q in [7u64, 13, 19] {
            let ctx = build_field(q, 1).unwrap();
            for i in 0..3u64 {
                let v = ctx.pow(find_noncube(&ctx).unwrap(), 1 + i as i64);
                assert!(fro_identity_check(&ctx, v).unwrap(), "q={q} i={i}");
            }
        }
    }

    #[test]
    fn census_p5() {
        let census = build_census(5).unwrap();
        // Sum over s of N(s) = total class count; Schoof says
        // N(s) = H(s^2 - 20)
        use crate::classnum::hurwitz;
        use crate::eisenstein::rat_int;
        for s in -4i64..=4 {
            let expect = hurwitz(s * s - 20).unwrap().h;
            assert_eq!(rat_int(census.n(s) as i128), expect, "s = {s}");
        }
    }

    #[test]
    fn census_p13_n3x3() {
        let census = build_census(13).unwrap();
        assert_eq!(census.n3x3(5), 1); // H((25-52)/9) = h(-3) = 1
        // nonzero only when s = p+1 mod 9
        for s in census.traces() {
            if census.n3x3(s) != 0 {
                assert_eq!(s.rem_euclid(9), 14i64.rem_euclid(9), "s = {s}");
            }
        }
    }

    #[test]
    fn fiber_profile_p13() {
        let ctx = build_field(13, 1).unwrap();
        let census = build_census(13).unwrap();
        let rows = fiber_profile(&census, &ctx, 5).unwrap();
        for (class, size) in &rows {
            let expect = if class.full_three_torsion {
                if class.j == 1728 % 13 {
                    2
                } else if class.j == 0 {
                    1
                } else {
                    4
                }
            } else if class.j == 0 {
                // j = 0 without full 3-torsion: single preimage or none
                *size
            } else {
                1
            };
            assert_eq!(*size, expect, "class {class:?}");
        }
    }

    #[test]
    fn fiber_profile_p5_missing_class() {
        let ctx = build_field(5, 1).unwrap();
        let census = build_census(5).unwrap();
        let rows = fiber_profile(&census, &ctx, 0).unwrap();
        let empty = rows.iter().filter(|(_, size)| *size == 0).count();
        assert_eq!(empty, 1);
        for (_, size) in &rows {
            assert!(*size <= 1);
        }
    }
}
