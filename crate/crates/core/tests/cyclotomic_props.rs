use mckay::cyclotomic::{cyclotomic_polynomial, totient, Cyclotomic, Rational};
use mckay::io::parse_expr;
use num_bigint::BigInt;
use proptest::prelude::*;

const ORDERS: &[u64] = &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15];

fn element(order: u64) -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec((0..order as usize, -4i64..=4, 1i64..=3), 0..4).prop_map(move |terms| {
        Cyclotomic::from_terms(
            order,
            terms
                .into_iter()
                .map(|(e, a, b)| (e as i64, Rational::new(BigInt::from(a), BigInt::from(b)))),
        )
    })
}

fn order_and_three() -> impl Strategy<Value = (u64, Cyclotomic, Cyclotomic, Cyclotomic)> {
    prop::sample::select(ORDERS).prop_flat_map(|n| (Just(n), element(n), element(n), element(n)))
}

proptest! {
    #[test]
    fn ring_axioms((_, a, b, c) in order_and_three()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverse_is_two_sided((n, a, _, _) in order_and_three()) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert!((&a * &inv).is_one());
        prop_assert!((&inv * &a).is_one());
        prop_assert_eq!(inv.order(), n);
    }

    #[test]
    fn galois_is_a_ring_map((n, a, b, _) in order_and_three(), s in 1i64..60) {
        prop_assume!(num_integer::gcd(s, n as i64) == 1);
        prop_assert_eq!((&a * &b).galois(s), &a.galois(s) * &b.galois(s));
        prop_assert_eq!((&a + &b).galois(s), &a.galois(s) + &b.galois(s));
    }

    #[test]
    fn promotion_is_a_ring_map((n, a, b, _) in order_and_three(), k in 1u64..4) {
        let m = n * k;
        let (pa, pb) = (a.promote(m).unwrap(), b.promote(m).unwrap());
        prop_assert_eq!((&a * &b).promote(m).unwrap(), &pa * &pb);
        prop_assert!(pa.eq_value(&a));
    }

    #[test]
    fn complex_embedding_agrees((_, a, b, _) in order_and_three()) {
        let lhs = (&a * &b).to_complex();
        let rhs = a.to_complex() * b.to_complex();
        prop_assert!((lhs - rhs).norm() < 1e-9);
        prop_assert!((a.conj().to_complex() - a.to_complex().conj()).norm() < 1e-9);
    }

    #[test]
    fn display_parses_back((n, a, _, _) in order_and_three()) {
        prop_assert_eq!(parse_expr(&a.to_string(), n).unwrap(), a);
    }
}

#[test]
fn cyclotomic_polynomials() {
    assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
    assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
    assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
    assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    for n in 1..=60 {
        assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, totient(n));
    }
}

#[test]
fn roots_sum_to_mobius() {
    // Σ primitive n-th roots = μ(n).
    for (n, mu) in [(1u64, 1i64), (2, -1), (4, 0), (6, 1), (10, 1), (30, -1)] {
        let s = (1..=n as i64)
            .filter(|k| num_integer::gcd(*k, n as i64) == 1)
            .fold(Cyclotomic::zero(n), |acc, k| &acc + &Cyclotomic::root(n, k));
        assert_eq!(s, Cyclotomic::from_integer(n, mu), "n = {n}");
    }
}
