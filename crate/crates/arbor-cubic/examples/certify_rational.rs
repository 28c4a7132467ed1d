//! Certification over the rationals: for f(z) = 33z³ + 9z + 1 with root
//! point x₀ = -31/5, the place search factors the orbit values and finds a
//! fresh admissible prime at every level through 4, so the tree action is
//! pinned down through depth 4. The conclusion is always bounded by the
//! level actually checked.
//!
//! Run with: cargo run --example certify_rational

use arbor_cubic::certify::{certify, check_escape_criterion, find_places, find_u, CertifyOptions};
use arbor_cubic::dynamics::CubicParams;
use arbor_cubic::exact::{int, rat};
use num::BigUint;

fn main() {
    let params = CubicParams::monic_tail(int(33), int(9)).unwrap();
    let x0 = rat(-31, 5);

    println!("u-place: {:?}", find_u(&params, &x0).unwrap());

    let places = find_places(&params, &x0, 2, 4, 128).unwrap();
    for level in &places {
        let passing: Vec<String> = level.passing().iter().map(|p| p.to_string()).collect();
        println!(
            "level {}: value {} -> admissible primes [{}]",
            level.n,
            level.value,
            passing.join(", ")
        );
    }

    let cert = certify(&params, &x0, 2, 4, CertifyOptions::default()).unwrap();
    println!("conclusion: {} — {}", cert.conclusion, cert.note);
    println!("certificate JSON:\n{}", serde_json::to_string_pretty(&cert.to_json()).unwrap());

    // The level-2 escape criterion in detail at v = 229.
    let report = check_escape_criterion(&params, &x0, 2, &BigUint::from(229u32)).unwrap();
    println!(
        "escape criterion at 229: hypotheses hold = {}, polygon single non-integral = {}, {}",
        report.hypotheses_hold, report.polygon_single_nonintegral, report.note
    );
}
