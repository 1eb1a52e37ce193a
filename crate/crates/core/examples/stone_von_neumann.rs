//! Matrix units T_{gΓ,hΓ} in the S₄ crossed product and the standard covariant pair, plain,
//! amplified and conjugated by a unitary.

use heckex::bundle::{Setting, TrivialLine};
use heckex::pair::{HeckePair, Rng};
use heckex::perm::PermPair;
use heckex::rep::{self, CovariantPair};
use rand::SeedableRng;

fn main() {
    let s = Setting::new(PermPair::s4(), TrivialLine);
    let p = &s.pair;
    let reps = p.cosets(p.gamma()).unwrap();
    let mut ok = true;
    for g in &reps {
        for h in &reps {
            for k in &reps {
                let prod = s.xp_mul(&s.matrix_unit(g, h).unwrap(), &s.matrix_unit(h, k).unwrap()).unwrap();
                ok &= prod == s.matrix_unit(g, k).unwrap();
            }
        }
    }
    println!("T_gh T_hk = T_gk for all {} cosets: {ok}", reps.len());

    let mut rng = Rng::seed_from_u64(9);
    let pair = CovariantPair::standard(p).unwrap();
    println!("standard pair: {:?}", pair.check(p).unwrap().holds());
    let amp = pair.amplify(2);
    let u = rep::random_unitary(amp.dim, &mut rng);
    println!("amplified and conjugated: {:?}", amp.conjugate(&u).check(p).unwrap().holds());
    println!("corrupted: {:?}", pair.corrupt(&mut rng).check(p).unwrap().holds());
}
