use heckehyp::classnum::kronecker;
use heckehyp::eisenstein::Eis;
use heckehyp::elliptic::{a_coefficient, lift_trace};
use heckehyp::trace::g_poly;
use proptest::prelude::*;

const PRIMES: &[u64] = &[2, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES)
}

proptest! {
    #[test]
    fn eisenstein_norm_is_multiplicative(
        a in -1000i128..1000, b in -1000i128..1000,
        c in -1000i128..1000, d in -1000i128..1000,
    ) {
        let x = Eis { a, b };
        let y = Eis { a: c, b: d };
        prop_assert_eq!(x.mul(y).norm(), x.norm() * y.norm());
        prop_assert_eq!(x.conj().norm(), x.norm());
    }

    #[test]
    fn kernel_polynomial_satisfies_recurrence(
        k in 2u32..12, s in -50i64..50, p in prime(),
    ) {
        let k = 2 * k; // the closed form is exposed at even weight only
        let (mut a, mut b) = (1i128, s as i128); // G_2, G_3
        for _ in 4..=k {
            let next = s as i128 * b - p as i128 * a;
            a = b;
            b = next;
        }
        let expect = if k == 2 { 1 } else { b };
        prop_assert_eq!(g_poly(k, s, p), expect);
    }

    #[test]
    fn a_coefficient_is_kernel_polynomial_of_trace(
        k in 1u32..10, p in prime(), seed in 0u64..10_000,
    ) {
        let k = 2 * k;
        // any integer in the Hasse interval works; the identity is polynomial
        let bound = 2 * (p as f64).sqrt() as i64;
        let t = (seed % (2 * bound as u64 + 1)) as i64 - bound;
        prop_assert_eq!(a_coefficient(t, p, k), g_poly(k, t, p));
    }

    #[test]
    fn lifted_traces_satisfy_hecke_relation(
        m in 1u32..6, p in prime(), seed in 0u64..10_000,
    ) {
        let m = 2 * m; // a_{p^m} below needs even m
        let bound = 2 * (p as f64).sqrt() as i64;
        let t = (seed % (2 * bound as u64 + 1)) as i64 - bound;
        let lift = |k| lift_trace(t, p, k).unwrap();
        prop_assert_eq!(lift(m), t as i128 * lift(m - 1) - p as i128 * lift(m - 2));
        // a_{p^m} = sum_i p^i t_{p^{m-2i}} with the central term halved for even m
        let mut expect: i128 = 0;
        let mut pw: i128 = 1;
        for i in 0..=(m / 2) {
            let term = pw * lift(m - 2 * i);
            expect += if 2 * i == m { term / 2 } else { term };
            pw *= p as i128;
        }
        prop_assert_eq!(a_coefficient(t, p, m + 2), expect);
    }

    #[test]
    fn kronecker_is_multiplicative_below(
        d in prop::sample::select(&[-3i64, -4, -7, -8, -11, -15, -19, -20, -23][..]),
        m in 1i64..200, n in 1i64..200,
    ) {
        prop_assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
    }
}
