//! Gaussian hypergeometric series over F_q: the general character-sum
//! evaluator for (n+1)F_n with memoized binomial rows, and an exact
//! O(q) single-sum fast path for 2F1(rho, rho^2; eps | x).

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::characters::{normalized_binomial, CharValue, Character};
use crate::eisenstein::{rat, Eis, Rational};
use crate::error::{Error, Result};
use crate::field::FieldCtx;

/// Cap for the general evaluator; each fresh binomial row costs O(q^2).
pub const GENERAL_EVAL_BOUND: u64 = 2000;

/// Evaluator for (n+1)Fn(A0..An; B1..Bn | x) over a fixed field, sharing
/// binomial rows bin(A T^m, B T^m), m = 0..q-2, across calls.
pub struct HypergeomEvaluator<'a> {
    ctx: &'a FieldCtx,
    rows: RefCell<HashMap<(u64, u64), Rc<Vec<CharValue>>>>,
}

impl<'a> HypergeomEvaluator<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Result<HypergeomEvaluator<'a>> {
        if ctx.q > GENERAL_EVAL_BOUND {
            return Err(Error::FieldTooLarge {
                q: ctx.q,
                bound: GENERAL_EVAL_BOUND,
            });
        }
        Ok(HypergeomEvaluator {
            ctx,
            rows: RefCell::new(HashMap::new()),
        })
    }

    fn row(&self, a: Character, b: Character) -> Rc<Vec<CharValue>> {
        let key = (a.m % (self.ctx.q - 1), b.m % (self.ctx.q - 1));
        if let Some(r) = self.rows.borrow().get(&key) {
            return Rc::clone(r);
        }
        let row: Vec<CharValue> = (0..self.ctx.q - 1)
            .map(|m| {
                let chi = Character::new(self.ctx, m);
                normalized_binomial(self.ctx, a.mul(self.ctx, chi), b.mul(self.ctx, chi))
            })
            .collect();
        let rc = Rc::new(row);
        self.rows.borrow_mut().insert(key, Rc::clone(&rc));
        rc
    }

    /// (q/(q-1)) sum_chi bin(A0 chi, chi) prod_i bin(Ai chi, Bi chi) chi(x).
    pub fn evaluate(&self, top: &[Character], bottom: &[Character], x: u64) -> CharValue {
        assert_eq!(
            top.len(),
            bottom.len() + 1,
            "need one more top than bottom character"
        );
        let ctx = self.ctx;
        let q1 = ctx.q - 1;
        let lead = self.row(top[0], Character::trivial());
        let rest: Vec<Rc<Vec<CharValue>>> = top[1..]
            .iter()
            .zip(bottom)
            .map(|(&a, &b)| self.row(a, b))
            .collect();
        let mut acc = CharValue::zero();
        for m in 0..q1 {
            let chi_x = Character::new(ctx, m).eval(ctx, x);
            if chi_x.approx().norm_sqr() == 0.0 && chi_x.is_exact() {
                continue; // chi(0) = 0 annihilates the term
            }
            let mut term = lead[m as usize].clone();
            for r in &rest {
                term = term.mul(&r[m as usize]);
            }
            acc = acc.add(&term.mul(&chi_x));
        }
        acc.scale(&rat(ctx.q as i128, q1 as i128))
    }
}

/// One-shot general evaluation (builds a throwaway evaluator).
pub fn evaluate_general(
    ctx: &FieldCtx,
    top: &[Character],
    bottom: &[Character],
    x: u64,
) -> Result<CharValue> {
    Ok(HypergeomEvaluator::new(ctx)?.evaluate(top, bottom, x))
}

/// Exact 2F1(rho, rho^2; eps | x) over F_q, q = 1 mod 3, via the single
/// character sum (1/q) sum_y rho(y) rho^2(1-y) rho(1-xy) in Z[w].
pub fn fast_2f1_rho(ctx: &FieldCtx, x: u64) -> Result<Rational> {
    if !ctx.is_one_mod_3() {
        return Err(Error::WrongResidue {
            p: ctx.q,
            residue: 1,
            modulus: 3,
        });
    }
    if x == 0 {
        // chi(0) = 0 annihilates every term of the defining series
        return Ok(Rational::from_integer(0.into()));
    }
    let mut acc = Eis::ZERO;
    for y in 1..ctx.q {
        let c1 = ctx.cube_class(y);
        let u = ctx.sub(1, y);
        if u == 0 {
            continue;
        }
        let c2 = ctx.cube_class(u);
        let v = ctx.sub(1, ctx.mul(x, y));
        if v == 0 {
            continue;
        }
        let c3 = ctx.cube_class(v);
        acc = acc.add(Eis::omega_pow((c1 + 2 * c2 + c3) as u64));
    }
    if !acc.is_rational() {
        return Err(Error::NotRational(format!("{acc:?}")));
    }
    Ok(rat(acc.a, ctx.q as i128))
}

/// Recognize a hypergeometric value as a rational with denominator
/// dividing q, q^2, or q^3 (tried in that order).
pub fn recognize_rational(v: &CharValue, q: u64) -> Result<Rational> {
    let q = q as u128;
    for den in [q, q * q, q * q * q] {
        if let Ok(r) = v.to_rational(den) {
            return Ok(r);
        }
    }
    Err(Error::NotRational(format!("{:?}", v.approx())))
}

/// The standard 2F1(rho, rho^2; eps) character lists.
pub fn rho_spec(ctx: &FieldCtx) -> Result<(Vec<Character>, Vec<Character>)> {
    let rho = Character::rho(ctx)?;
    Ok((vec![rho, rho.pow(ctx, 2)], vec![Character::trivial()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::{rat, rat_int};
    use crate::elliptic::{trace_of, Curve};
    use crate::field::build_field;

    #[test]
    fn value_at_zero_is_zero() {
        let ctx = build_field(13, 1).unwrap();
        assert_eq!(fast_2f1_rho(&ctx, 0).unwrap(), rat_int(0));
        let (top, bottom) = rho_spec(&ctx).unwrap();
        let v = evaluate_general(&ctx, &top, &bottom, 0).unwrap();
        assert_eq!(recognize_rational(&v, 13).unwrap(), rat_int(0));
    }

    #[test]
    fn f7_value_at_27_over_t() {
        // 2F1(rho, rho^2; eps | 27 * t^{-1}) at t = 1 equals -t_7(E_1)/7
        let ctx = build_field(7, 1).unwrap();
        let x = ctx.mul(ctx.embed(27), ctx.inv(ctx.embed(1)));
        let t7 = trace_of(&ctx, &Curve::e_t(1)).unwrap();
        assert_eq!(fast_2f1_rho(&ctx, x).unwrap(), rat(-t7 as i128, 7));
        assert_eq!(fast_2f1_rho(&ctx, x).unwrap(), rat(1, 7));
    }

    #[test]
    fn fast_matches_general_f13() {
        let ctx = build_field(13, 1).unwrap();
        let (top, bottom) = rho_spec(&ctx).unwrap();
        let ev = HypergeomEvaluator::new(&ctx).unwrap();
        for x in 0..13 {
            let fast = fast_2f1_rho(&ctx, x).unwrap();
            let gen = recognize_rational(&ev.evaluate(&top, &bottom, x), 13).unwrap();
            assert_eq!(fast, gen, "x = {x}");
        }
    }

    #[test]
    fn fast_matches_general_f49() {
        let ctx = build_field(7, 2).unwrap();
        let (top, bottom) = rho_spec(&ctx).unwrap();
        let ev = HypergeomEvaluator::new(&ctx).unwrap();
        for x in (0..49).step_by(5) {
            let fast = fast_2f1_rho(&ctx, x).unwrap();
            let gen = recognize_rational(&ev.evaluate(&top, &bottom, x), 49).unwrap();
            assert_eq!(fast, gen, "x = {x}");
        }
    }

    #[test]
    fn four_f_three_at_one_f13() {
        // 4F3(rho, rho^2, eps, eps; eps, rho^2, rho | 1) = (p^2 - 3p - 1)/p^3
        let ctx = build_field(13, 1).unwrap();
        let rho = Character::rho(&ctx).unwrap();
        let rho2 = rho.pow(&ctx, 2);
        let eps = Character::trivial();
        let top = [rho, rho2, eps, eps];
        let bottom = [eps, rho2, rho];
        let v = evaluate_general(&ctx, &top, &bottom, 1).unwrap();
        assert_eq!(recognize_rational(&v, 13).unwrap(), rat(129, 2197));
    }

    #[test]
    fn denominator_divides_q_for_good_arguments() {
        // q * value is an integer whenever the argument comes from a
        // smooth member of the curve family (27/t for t != 0, 27)
        for p in [7u64, 13, 19, 31] {
            let ctx = build_field(p, 1).unwrap();
            for t in 1..p {
                if t == 27 % p {
                    continue;
                }
                let x = ctx.mul(ctx.embed(27), ctx.inv(t));
                let v = fast_2f1_rho(&ctx, x).unwrap();
                let scaled = v * rat_int(p as i128);
                assert!(scaled.is_integer(), "p={p} t={t}");
            }
        }
    }

    #[test]
    fn evaluator_rejects_large_fields() {
        let ctx = build_field(2011, 1).unwrap();
        assert!(matches!(
            HypergeomEvaluator::new(&ctx),
            Err(Error::FieldTooLarge { .. })
        ));
        // the fast path has no such limit
        assert!(fast_2f1_rho(&ctx, 5).is_ok());
    }
}
