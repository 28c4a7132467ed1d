//! Newton polygons: root valuations read off the lower hull of the
//! coefficient valuations. Two shapes matter here: the iterate f^j - x₀ at
//! a place where x₀ has negative valuation prime to 3 (one segment of slope
//! -v(x₀)/3^j, total ramification), and the escape quartic at an admissible
//! place (one segment of non-integral slope, hence no rational root).
//!
//! Run with: cargo run --example newton_polygons

use arbor_cubic::dynamics::{resolvent, CubicParams};
use arbor_cubic::exact::{int, rat};
use arbor_cubic::poly::{iterate, newton_polygon, Poly};
use num::BigUint;

fn show(name: &str, np: &arbor_cubic::poly::NewtonPolygon) {
    println!("{name}:");
    println!("  points: {:?}", np.points);
    for s in &np.segments {
        println!(
            "  segment: run {}, slope {} (roots of valuation {})",
            s.run,
            s.slope,
            -s.slope.clone()
        );
    }
}

fn main() {
    let params = CubicParams::monic_tail(int(33), int(9)).unwrap();
    let x0 = rat(-31, 5);
    let five = BigUint::from(5u32);

    // u = 5 has v(x0) = -1: each f^j - x0 is one segment of slope 1/3^j...
    // scaled by the drop at x0; at j = 1 the slope is 1/3.
    for j in 1..=2 {
        let fj = iterate(&params.poly(), j).sub(&Poly::constant(x0.clone()));
        let np = newton_polygon(&fj, &five).unwrap();
        show(&format!("f^{j} - x0 at p = 5"), &np);
        assert!(np.is_single_segment());
    }

    // The quartic attached to the collision, at the admissible prime 229:
    // one segment of slope -1/2.
    let res = resolvent(&params, &x0, 2).unwrap();
    let np = newton_polygon(&res.quartic, &BigUint::from(229u32)).unwrap();
    show("escape quartic at p = 229", &np);
    assert!(np.single_nonintegral_slope());
    println!("  non-integral slope: the quartic can have no rational root at this place");
}
