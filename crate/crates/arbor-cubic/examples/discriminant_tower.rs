//! The discriminant tower Δ(fᵏ - x₀) and its splitting identity at a
//! collision: the recursion multiplies the previous discriminant cubed by
//! the critical values E_k(x₀), and at a collision level
//! -3·D_ℓ(x₀)² = Δ(f^ℓ - x₀)·Δ(f^{ℓ-1} - x₀) with D_ℓ rational.
//!
//! Run with: cargo run --example discriminant_tower

use arbor_cubic::dynamics::{d_ell, disc_tower, CubicParams};
use arbor_cubic::exact::{int, rat};
use arbor_cubic::poly::{discriminant, iterate, Poly};

fn main() {
    let params = CubicParams::monic_tail(int(33), int(9)).unwrap();
    let x0 = int(0);

    let tower = disc_tower(&params, &x0, 2);
    println!("discriminant tower at x0 = 0:");
    for (k, d) in tower.iter().enumerate() {
        println!("  Δ(f^{k} - x0) = {d}");
    }

    // Independent route: direct discriminants of the iterates (degree 9 at
    // k = 2) agree with the recursion exactly.
    let f = params.poly();
    assert_eq!(tower[1], discriminant(&f).unwrap());
    let f2 = iterate(&f, 2).sub(&Poly::constant(x0.clone()));
    assert_eq!(tower[2], discriminant(&f2).unwrap());
    println!("tower values match direct discriminants of f and f∘f");

    // The collision square identity.
    for x0 in [int(0), rat(-31, 5), rat(-827, 4)] {
        let d = d_ell(&params, &x0, 2).unwrap();
        let t = disc_tower(&params, &x0, 2);
        assert_eq!(int(-3) * &d * &d, &t[2] * &t[1]);
        println!("x0 = {x0}: D_2 = {d}, and -3 D_2² = Δ(f²-x0)·Δ(f-x0) exactly");
    }
}
