//! The function-field certificate: with root point x₀ = t over the rational
//! constant field, level n < ℓ needs the quadratic E_n(t) irreducible
//! (its discriminant is exactly C_n, so an exact square test decides), and
//! level n >= ℓ uses the linear Ẽ_n(t) = G_n - t, with distinct places as
//! long as the collided orbit never repeats. The u-place is the
//! negative-degree valuation, always admissible.
//!
//! Run with: cargo run --example certify_function_field

use arbor_cubic::certify::certify_function_field;
use arbor_cubic::dynamics::CubicParams;
use arbor_cubic::exact::int;

fn main() {
    let params = CubicParams::monic_tail(int(33), int(9)).unwrap();
    let cert = certify_function_field(&params, 2, 4).unwrap();
    println!(
        "A = {}, B = {}, ell = {}, x0 = t",
        cert.a, cert.b, cert.ell
    );
    for level in &cert.levels {
        let shape = if level.discriminant.is_some() {
            "quadratic"
        } else {
            "linear"
        };
        print!(
            "  level {}: {} {}",
            level.n,
            shape,
            level.poly.to_string().replace('z', "t")
        );
        match &level.discriminant {
            Some(d) => println!("  (discriminant {d}, irreducible: {})", level.irreducible),
            None => println!("  (irreducible)"),
        }
    }
    println!("pairwise distinct places: {}", cert.pairwise_distinct);
    println!("conclusion: {} — {}", cert.conclusion, cert.note);
}
