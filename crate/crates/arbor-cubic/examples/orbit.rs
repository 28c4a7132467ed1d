//! Critical-orbit data for f(z) = Az³ + Bz + 1.
//!
//! Writing fⁿ(γ) = Fₙγ + Gₙ for a critical point γ keeps the whole orbit
//! rational. The two critical points ±γ collide at the first n with Fₙ = 0.
//!
//! Run with: cargo run --example orbit

use arbor_cubic::dynamics::{collision_index, orbit, CubicParams};
use arbor_cubic::exact::int;

fn main() {
    let params = CubicParams::monic_tail(int(33), int(9)).unwrap();
    println!("f(z) = {}", params.poly());

    let data = orbit(&params, 4);
    for k in 0..=4 {
        println!(
            "  n = {k}:  F = {:<12}  G = {}",
            data.f(k).to_string(),
            data.g(k)
        );
    }
    println!(
        "collision index: {:?}",
        collision_index(&params, 12).unwrap()
    );
    println!("C_1 = (f(γ) - f(-γ))² = {}", data.c(1));
    println!("E_1(t) = {}", data.e_poly(1).to_string().replace('z', "t"));

    // A map whose critical points never collide (through 12 iterates).
    let generic = CubicParams::monic_tail(int(1), int(1)).unwrap();
    println!(
        "\nf(z) = {}: collision index through 12 = {:?}",
        generic.poly(),
        collision_index(&generic, 12).unwrap()
    );
}
