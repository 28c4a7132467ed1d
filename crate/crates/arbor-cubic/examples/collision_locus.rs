//! The collision locus: F_ℓ(A, B) as a bivariate polynomial, computed by
//! running the orbit recursion symbolically. Parameters (A, B) with
//! F_ℓ = 0 and F_{ℓ-1} ≠ 0 are exactly the cubics whose critical points
//! collide at iterate ℓ.
//!
//! Run with: cargo run --example collision_locus

use arbor_cubic::dynamics::{collision_locus, eval_symbolic};
use arbor_cubic::exact::{int, rat};

fn main() {
    let f2 = collision_locus(2).unwrap();
    println!("F_2(A, B) = {f2}");
    println!("  at (33, 9):   {}", eval_symbolic(&f2, &int(33), &int(9)));
    println!("  at (1/3, 3):  {}", eval_symbolic(&f2, &rat(1, 3), &int(3)));
    println!("  at (1, 1):    {}", eval_symbolic(&f2, &int(1), &int(1)));

    let f3 = collision_locus(3).unwrap();
    println!(
        "\nF_3 has {} terms of total degree {}",
        f3.num_terms(),
        f3.total_degree()
    );
    // A point on the level-3 locus must be off the level-2 locus; (33, 9)
    // lies on level 2, so F_3 vanishes there too (the collision persists).
    println!("  F_3(33, 9) = {}", eval_symbolic(&f3, &int(33), &int(9)));

    let f4 = collision_locus(4).unwrap();
    println!(
        "F_4 has {} terms of total degree {}",
        f4.num_terms(),
        f4.total_degree()
    );
}
