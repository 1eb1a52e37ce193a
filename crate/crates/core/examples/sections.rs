//! Sections of the orbit bundles 𝒜/H for the trivial line bundle over S₄, their products and
//! the embeddings between levels.

use heckex::bundle::{Setting, TrivialLine};
use heckex::pair::{HeckePair, Rng};
use heckex::perm::{Perm, PermPair};
use heckex::random::{self, Coeffs, Pools};
use rand::SeedableRng;

fn main() {
    let s = Setting::new(PermPair::s4(), TrivialLine);
    let p = &s.pair;
    let mut rng = Rng::seed_from_u64(1);
    let pools = Pools::finite(&s).unwrap();
    let h = p.gamma();
    let k = p.gamma_g(&Perm::from_cycles(4, &[&[3, 4]]));
    println!("|Γ| = {:?}, |Γ^g| = {:?}", p.sub_order(h), p.sub_order(k));

    let f = random::section(&s, &pools, h, 3, Coeffs::Gauss, &mut rng);
    let g = random::section(&s, &pools, h, 3, Coeffs::Gauss, &mut rng);
    let fg = s.mul(&f, &g).unwrap();
    println!("f·g over Γ has {} orbit terms", fg.terms().len());

    let lifted = s.mul(&s.embed(&f, k).unwrap(), &s.embed(&g, k).unwrap()).unwrap();
    println!("embedding is multiplicative: {}", lifted == s.embed(&fg, k).unwrap());
    println!("embedding commutes with *: {}", s.embed(&s.star(&f), k).unwrap() == s.star(&s.embed(&f, k).unwrap()));
    println!("sup norm of f: {:?}", s.sup_norm(&f).value);
    println!("{}", serde_json::to_string_pretty(&s.section_to_json(&f)).unwrap());
}
