//! Orders of the sign-constrained groups, by two independent routes:
//! exhaustive filtering at depth 2, and stabilizer chains on generators at
//! depths 2 and 3. Also: the index-2 coset, the growing index in the full
//! automorphism group, and arboreal double transitivity.
//!
//! Run with: cargo run --example group_orders

use arbor_cubic::group::{
    aut_order, is_arboreally_doubly_transitive, q_group, q_order, qtilde_group,
};
use arbor_cubic::tree::{all_portraits, q_membership, QClass};
use num::BigUint;

fn main() {
    // Depth 2, exhaustively.
    let all = all_portraits(2);
    let in_q = all
        .iter()
        .filter(|p| q_membership(p, 2).unwrap() == QClass::InQ)
        .count();
    println!("|Aut(T_3,2)| = {} (enumerated: {})", aut_order(2), all.len());
    println!("|Q_2,2| by exhaustive filter = {in_q}");

    // Same order out of the stabilizer chain.
    let q22 = q_group(2, 2).unwrap();
    println!("|Q_2,2| by stabilizer chain  = {}", q22.order());

    // Depth 3: the chain is the only feasible route.
    let q23 = q_group(2, 3).unwrap();
    println!(
        "|Q_2,3| = {} (closed form 6^13/2^4 = {})",
        q23.order(),
        BigUint::from(6u32).pow(13) / BigUint::from(16u32)
    );
    assert_eq!(q23.order(), q_order(2, 3));

    // The index-2 coset and the growing index in Aut.
    for n in 2..=3 {
        let q = q_group(2, n).unwrap();
        let qt = qtilde_group(2, n).unwrap();
        println!(
            "n = {n}: [Q~ : Q] = {}, [Aut : Q~] = {}",
            qt.order() / q.order(),
            aut_order(n) / qt.order()
        );
    }

    // Double transitivity at each level.
    for (g, n) in [(&q22, 2usize), (&q23, 3usize)] {
        println!(
            "Q_2,{n} arboreally doubly transitive at level {n}: {}",
            is_arboreally_doubly_transitive(g, n)
        );
    }
}
