//! The group algebra ℂ[S₃] as an S₃-graded algebra, the bundle ℬ×G over G×G and the
//! comparison of its orbit bundle with the direct quotient.

use heckex::bundle::Setting;
use heckex::check;
use heckex::eq::{self, EqBundle};
use heckex::pair::HeckePair;
use heckex::perm::PermPair;

fn main() {
    let p = PermPair::s3();
    let alg = eq::group_algebra(&p).unwrap();
    alg.verify(&p).unwrap();
    println!("graded algebra of total dimension {}", alg.total_dim());
    let s = Setting::new(p, EqBundle::new(alg));
    for prop in check::bundle_axioms(&s) {
        println!("{:<28} {:>6} checks  passed = {}", prop.name, prop.checked, prop.passed());
    }
    for (name, h) in [("Γ", s.pair.gamma()), ("trivial", s.pair.trivial_sub().unwrap())] {
        let prop = check::orbit_vs_direct(&s, h);
        println!("orbit bundle vs direct quotient over {name}: passed = {}", prop.passed());
    }
}
