//! The Baumslag-Solitar pair (BS(1,2), ℤ): coset counts, the modular function and a
//! non-selfadjoint Hecke basis element.

use heckex::bs::{BsElem, BsPair};
use heckex::hecke;
use heckex::pair::{gamma_index, HeckePair};

fn main() {
    let p = BsPair::new(2).unwrap();
    for (t, k) in [(0, 1), (0, -1), (5, 2), (3, 0)] {
        let g = BsElem::int(t, k);
        println!(
            "{g}: key {}, L = {}, R = {}, Δ = {}, [Γ:Γ^g] = {}",
            p.dcoset_key(&g),
            p.left_count(&g),
            p.right_count(&g),
            p.delta(&g),
            gamma_index(&p, &g).unwrap()
        );
    }
    let a = BsElem::int(0, 1);
    let f = hecke::basis(&p, &a);
    println!("star(1_ΓaΓ) = {}", serde_json::to_string(&hecke::to_json(&p, &hecke::star(&p, &f))).unwrap());
    let ff = hecke::convolve(&p, &f, &hecke::star(&p, &f));
    println!("1_ΓaΓ * star = {}", serde_json::to_string(&hecke::to_json(&p, &ff)).unwrap());
    let v = hecke::rho_apply(&p, &f, &hecke::delta_vec(&p, &p.identity()));
    println!("rho(1_ΓaΓ) δ_Γ = {}", serde_json::to_string(&hecke::vector_to_json(&p, &v)).unwrap());
}
