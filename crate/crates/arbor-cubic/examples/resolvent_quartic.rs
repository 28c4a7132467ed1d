//! The resolvent data attached to a collision: the monic cubic with roots
//! E_{ℓ-1}(αᵢ) over the three preimages f(αᵢ) = x₀, and the quartic whose
//! roots are the even-sign combinations ±δ₁δ₂ ±δ₁δ₃ ±δ₂δ₃ of the square
//! roots δᵢ² = E_{ℓ-1}(αᵢ). A rational root of the quartic would trap the
//! level-ℓ action inside one of the four index-4 subgroups.
//!
//! Run with: cargo run --example resolvent_quartic

use arbor_cubic::dynamics::{orbit, resolvent, CubicParams};
use arbor_cubic::exact::{int, rat};
use arbor_cubic::poly::{rational_roots, resultant, Poly};

fn main() {
    let params = CubicParams::monic_tail(int(33), int(9)).unwrap();

    for x0 in [rat(-31, 5), rat(-827, 4)] {
        let res = resolvent(&params, &x0, 2).unwrap();
        println!("x0 = {x0}:");
        println!("  s1 = {}, s2 = {}, s3 = {}", res.s1, res.s2, res.s3);
        println!("  cubic   = {}", res.cubic());
        println!("  quartic = {}", res.quartic);
        println!("  s2² - 4 s1 s3 = {}", res.identity_value);

        // Root-product cross-check: the cubic equals
        // Res_x(f(x) - x0, z - E_1(x)) / A² coefficientwise.
        let data = orbit(&params, 2);
        let e1 = data.e_poly(1);
        let fx = params.poly().sub(&Poly::constant(x0.clone()));
        let a2 = params.a() * params.a();
        for z in [int(0), int(1), int(2), int(3)] {
            let hz = Poly::constant(z.clone()).sub(&e1);
            assert_eq!(
                resultant(&fx, &hz).unwrap() / &a2,
                res.cubic().eval(&z)
            );
        }
        println!("  resultant route agrees with the symmetric-function route");

        let roots = rational_roots(&res.quartic).unwrap();
        if roots.is_empty() {
            println!("  quartic rational roots: none\n");
        } else {
            println!("  quartic rational roots: {roots:?}\n");
        }
    }
}
