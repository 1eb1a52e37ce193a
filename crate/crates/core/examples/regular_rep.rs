//! The regular covariant representation of the S₃ crossed product, its reduced norm and
//! faithful recovery of an element from its image.

use heckex::bundle::{Setting, TrivialLine};
use heckex::pair::{HeckePair, Rng};
use heckex::perm::PermPair;
use heckex::random::{self, Coeffs, Pools};
use heckex::rep::{self, FiniteRep};
use rand::SeedableRng;

fn main() {
    let s = Setting::new(PermPair::s3(), TrivialLine);
    let mut rng = Rng::seed_from_u64(5);
    let pools = Pools::finite(&s).unwrap();
    let pi = FiniteRep::regular(&s, s.pair.trivial_sub().unwrap()).unwrap();
    println!("π acts on a space of dimension {}", pi.dim());

    let f = random::nonzero_crossed(&s, &pools, 2, 3, Coeffs::Integer, &mut rng);
    let m = rep::integrated_form(&s, &pi, &f).unwrap();
    let by_spanning = rep::integrated_form_by_spanning(&s, &pi, &f).unwrap();
    println!("integrated form, two routes agree: {}", m == by_spanning);
    println!("adjoint matches f*: {}", m.adjoint() == rep::integrated_form(&s, &pi, &s.xp_star(&f).unwrap()).unwrap());
    println!("reduced norm ‖f‖ = {:.9}", rep::reduced_norm(&s, &pi, &f).unwrap());
    println!("recovered from image: {}", rep::reconstruct(&s, &pi, &m).unwrap() == f);
}
