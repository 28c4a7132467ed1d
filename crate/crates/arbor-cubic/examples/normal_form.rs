//! Conjugating an arbitrary cubic into the normal form Az³ + Bz + c with
//! c ∈ {0, 1}, and recovering the affine map that realizes the conjugacy.
//!
//! Run with: cargo run --example normal_form

use arbor_cubic::dynamics::normalize;
use arbor_cubic::exact::{int, rat};
use arbor_cubic::poly::Poly;

fn main() {
    for (a3, a2, a1, a0) in [
        (int(2), int(6), int(8), int(3)),
        (int(33), int(0), int(9), int(1)),
        (rat(7, 3), int(-2), rat(1, 5), int(4)),
    ] {
        let f = Poly::from_coeffs(vec![a0.clone(), a1.clone(), a2.clone(), a3.clone()]);
        let (params, conj) = normalize(&a3, &a2, &a1, &a0).unwrap();
        println!("f(z) = {f}");
        println!(
            "  normal form: {}   via z -> {}*z + ({})",
            params.poly(),
            conj.scale,
            conj.shift
        );
        // The conjugacy identity f(φ(z)) = φ(normal(z)) holds exactly.
        let phi = conj.as_poly();
        assert_eq!(f.compose(&phi), phi.compose(&params.poly()));
        println!("  conjugacy identity verified exactly\n");
    }
}
