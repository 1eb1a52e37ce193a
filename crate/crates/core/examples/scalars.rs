//! Exact scalars in Q(i)[√n]: square roots of rationals, conjugation and the float image.

use heckex::scalars::{sqrt_pos_rational, square_split, RadScalar};
use num_rational::BigRational;

fn main() {
    let half = BigRational::new(1.into(), 2.into());
    let r = sqrt_pos_rational(&half).unwrap();
    println!("sqrt(1/2) = {r}  ~ {}", r.to_complex());
    println!("sqrt(1/2)^2 = {}", &r * &r);

    let z = RadScalar::from_int(3) + RadScalar::i() * RadScalar::from_int(4);
    println!("|3+4i| = {}", z.abs_exact().unwrap());
    println!("conj(3+4i) * (3+4i) = {}", z.conj() * &z);

    let (sq, free) = square_split(72);
    println!("72 = {sq}^2 * {free}");

    let s = sqrt_pos_rational(&BigRational::from_integer(2.into())).unwrap()
        + sqrt_pos_rational(&BigRational::from_integer(3.into())).unwrap();
    println!("(sqrt2 + sqrt3)^2 = {}", &s * &s);
}
