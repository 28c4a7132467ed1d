//! Exact scalar plumbing: rational literals, p-adic valuations, and the
//! desk-scale factorization pipeline (trial division, Pollard rho with
//! Brent's cycle detection, deterministic Miller-Rabin below 2⁶⁴ and BPSW
//! above).
//!
//! Run with: cargo run --example factorization

use arbor_cubic::dynamics::{orbit, CubicParams};
use arbor_cubic::exact::{factor, int, parse_rational, rat, val};
use num::BigUint;

fn main() {
    let x = parse_rational("-31/5").unwrap();
    println!("parsed {x}; v_5 = {}", val(&BigUint::from(5u32), &x).unwrap());
    println!(
        "v_11(-144/11) = {}",
        val(&BigUint::from(11u32), &rat(-144, 11)).unwrap()
    );

    // Factor the collided orbit values: their new prime factors are the
    // candidate places level by level.
    let params = CubicParams::monic_tail(int(33), int(9)).unwrap();
    let data = orbit(&params, 4);
    let x0 = rat(-31, 5);
    for n in 2..=4 {
        let value = data.e_tilde(n, &x0).unwrap();
        let f = factor(value.numer()).unwrap();
        println!("numerator of E~_{n}(x0) = {f}");
    }
    // The level-4 factor has 21 digits; primality comes from BPSW.
    let big: num::BigInt = "722144241378612874253".parse().unwrap();
    let f = factor(&big).unwrap();
    println!("{big} = {f} (prime: {})", f.factors.len() == 1 && f.factors[0].1 == 1);
}
