//! The crossed product C_c(𝒜/Γ) ⋊ G/Γ on S₃: products, the involution, the conditional
//! expectation and the spanning decomposition.

use heckex::bundle::{Setting, TrivialLine};
use heckex::crossed::Operand;
use heckex::hecke;
use heckex::pair::{HeckePair, Rng};
use heckex::perm::{Perm, PermPair};
use heckex::random::{self, Coeffs, Pools};
use rand::SeedableRng;

fn main() {
    let s = Setting::new(PermPair::s3(), TrivialLine);
    let p = &s.pair;
    let mut rng = Rng::seed_from_u64(3);
    let pools = Pools::finite(&s).unwrap();
    let f = random::nonzero_crossed(&s, &pools, 2, 2, Coeffs::Gauss, &mut rng);
    let g = random::nonzero_crossed(&s, &pools, 2, 2, Coeffs::Gauss, &mut rng);

    let fg = s.xp_mul(&f, &g).unwrap();
    let lhs = s.xp_star(&fg).unwrap();
    let rhs = s.xp_mul(&s.xp_star(&g).unwrap(), &s.xp_star(&f).unwrap()).unwrap();
    println!("(fg)* == g*f*: {}", lhs == rhs);
    println!("f·1 == f: {}", s.xp_mul(&f, &s.xp_unit().unwrap()).unwrap() == f);

    let e = s.expectation(&s.xp_mul(&s.xp_star(&f).unwrap(), &f).unwrap(), &p.identity()).unwrap();
    println!("E(f*f) = {}", serde_json::to_string(&s.section_to_json(&e)).unwrap());

    let pieces = s.spanning_decomposition(&f);
    println!("f decomposes into {} spanning elements", pieces.len());

    let t = hecke::basis(p, &Perm::from_cycles(3, &[&[1, 3]]));
    let tf = s.product(Operand::Hecke(&t), Operand::Elem(&f)).unwrap();
    println!("Hecke multiplier agrees with the direct formula: {}", tf == s.hecke_left_direct(&Perm::from_cycles(3, &[&[1, 3]]), &f).unwrap());
    println!("{}", serde_json::to_string_pretty(&s.xp_to_json(&f)).unwrap());
}
