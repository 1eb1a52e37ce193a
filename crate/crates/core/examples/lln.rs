//! The LLN algebra on BS(1,2) and the isomorphism Φ from the crossed product.

use heckex::bs::{BsElem, BsPair};
use heckex::bundle::{Setting, TrivialLine};
use heckex::scalars::RadScalar;

fn main() {
    let s = Setting::new(BsPair::new(2).unwrap(), TrivialLine);
    let x = BsElem::int(1, 0);
    let a = BsElem::int(0, 1);
    let f = s.spanning(vec![RadScalar::one()], &x, &a).unwrap();
    let g = s.spanning(vec![RadScalar::from_int(2)], &BsElem::int(0, -1), &BsElem::int(0, -1)).unwrap();

    let phi_f = s.phi(&f).unwrap();
    println!("Φ(f) = {}", serde_json::to_string(&s.lln_to_json(&phi_f)).unwrap());
    println!("Φ(f)(x, a) = {}  (Δ(a)^½)", s.lln_eval(&phi_f, &x, &a));

    let lhs = s.phi(&s.xp_mul(&f, &g).unwrap()).unwrap();
    let rhs = s.lln_mul(&phi_f, &s.phi(&g).unwrap());
    println!("Φ(fg) == Φ(f)Φ(g): {}", lhs == rhs);
    println!("Φ(f*) == Φ(f)*: {}", s.phi(&s.xp_star(&f).unwrap()).unwrap() == s.lln_star(&phi_f));
    println!("Φ⁻¹Φ(f) == f: {}", s.phi_inv(&phi_f).unwrap() == f);
}
