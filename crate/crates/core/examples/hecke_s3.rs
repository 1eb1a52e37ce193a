//! The Hecke algebra of (S₃, S₂): the relation T² = 2 + T and the regular representation ρ.

use heckex::hecke;
use heckex::pair::HeckePair;
use heckex::perm::{Perm, PermPair};

fn main() {
    let p = PermPair::s3();
    for d in p.dcosets().unwrap() {
        println!("double coset of {d}: L = {}, R = {}, Δ = {}", p.left_count(&d), p.right_count(&d), p.delta(&d));
    }
    let t = hecke::basis(&p, &Perm::from_cycles(3, &[&[1, 3]]));
    let sq = hecke::convolve(&p, &t, &t);
    println!("T*T = {}", serde_json::to_string(&hecke::to_json(&p, &sq)).unwrap());
    println!("T* == T: {}", hecke::star(&p, &t) == t);
    println!("L1(T) = {:?}", hecke::l1_norm(&p, &t).value);

    let m = hecke::rho_full(&p, &t).unwrap();
    println!("rho(T) on l2(G/Γ), nnz = {}, op norm = {:.6}", m.nnz(), m.op_norm());
    let lhs = hecke::rho_full(&p, &sq).unwrap();
    println!("rho(T*T) == rho(T)^2: {}", lhs == m.mul(&m));
}
