use heckex::scalars::{sqrt_pos_rational, square_split, Gauss, RadScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn term() -> impl Strategy<Value = (u64, Gauss)> {
    (
        prop::sample::select(vec![1u64, 2, 3, 5, 6, 7, 10]),
        -6i64..=6,
        1i64..=4,
        -6i64..=6,
        1i64..=4,
    )
        .prop_map(|(r, a, b, c, d)| (r, Gauss::new(q(a, b), q(c, d))))
}

fn scalar() -> impl Strategy<Value = RadScalar> {
    prop::collection::vec(term(), 0..4).prop_map(RadScalar::from_terms)
}

fn close(a: &RadScalar, b: num_complex::Complex64) -> bool {
    (a.to_complex() - b).norm() <= 1e-9 * (1.0 + b.norm())
}

proptest! {
    #[test]
    fn ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &RadScalar::one(), a.clone());
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }

    #[test]
    fn floating_point_image_is_a_ring_map(a in scalar(), b in scalar()) {
        prop_assert!(close(&(&a * &b), a.to_complex() * b.to_complex()));
        prop_assert!(close(&(&a + &b), a.to_complex() + b.to_complex()));
        prop_assert!(close(&a.conj(), a.to_complex().conj()));
        prop_assert!(close(&a.abs2(), num_complex::Complex64::new(a.to_complex().norm_sqr(), 0.0)));
    }

    #[test]
    fn square_roots_square_back(n in 1i64..500, d in 1i64..500) {
        let x = q(n, d);
        let r = sqrt_pos_rational(&x).unwrap();
        prop_assert_eq!(&r * &r, RadScalar::from_rational(x));
    }

    #[test]
    fn square_split_factors(n in 1u64..100_000) {
        let (s, r) = square_split(n);
        prop_assert_eq!(s * s * r, n);
        // r is squarefree
        for p in 2..=((r as f64).sqrt() as u64 + 1) {
            prop_assert!(r % (p * p) != 0 || r < p * p);
        }
    }

    #[test]
    fn single_terms_invert(t in term()) {
        let a = RadScalar::from_terms([t]);
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv_single().unwrap()).is_one());
    }
}

#[test]
fn sqrt_two_times_sqrt_eight_is_four() {
    let a = sqrt_pos_rational(&q(2, 1)).unwrap();
    let b = sqrt_pos_rational(&q(8, 1)).unwrap();
    assert_eq!(&a * &b, RadScalar::from_int(4));
}

#[test]
fn sqrt_of_half() {
    // √(1/2) = √2 / 2
    let r = sqrt_pos_rational(&q(1, 2)).unwrap();
    assert_eq!(r.terms(), &[(2, Gauss::new(q(1, 2), q(0, 1)))]);
}
