//! Portraits, signs, and the sign-constrained groups.
//!
//! sgn_m(σ, y) is the parity of the permutation σ induces on the 3^m words
//! above y; the product P(y) = sgn_ℓ(σ,y)·sgn_{ℓ-1}(σ,y) telescopes to the
//! local signs at relative depth ℓ-1, and membership in Q (all P = +1) or
//! Q̃ (P constant) is decided level by level.
//!
//! Run with: cargo run --example tree_signs

use arbor_cubic::tree::{
    h_membership, q_membership, sgn, sign_pair, tree_distance, HVariant, Label, TreePortrait,
    SWAP01,
};

fn main() {
    // One transposition at level 2 (local at the level-1 node "0").
    let mut tau = TreePortrait::identity(2);
    tau.set_local(&Label::parse("0").unwrap(), SWAP01);
    let root = Label::root();
    println!(
        "single level-2 transposition: sgn_1 = {}, sgn_2 = {}, P = {}",
        sgn(&tau, &root, 1).unwrap(),
        sgn(&tau, &root, 2).unwrap(),
        sign_pair(&tau, &root, 2).unwrap()
    );
    println!("  classification at ell = 2: {}", q_membership(&tau, 2).unwrap());
    let lifted = tau.lift(3);
    println!(
        "  lifted to depth 3 by the identity: {}",
        q_membership(&lifted, 2).unwrap()
    );

    // The label swap at every level realizes the nontrivial sign coset.
    let mut rho = TreePortrait::identity(3);
    for level in 0..3 {
        for node in Label::all_at_level(level) {
            rho.set_local(&node, SWAP01);
        }
    }
    println!(
        "all-levels label swap at depth 3: {}",
        q_membership(&rho, 2).unwrap()
    );

    // Tree distance.
    let a = Label::parse("00").unwrap();
    let b = Label::parse("01").unwrap();
    let c = Label::parse("12").unwrap();
    println!(
        "dist(00, 01) = {}, dist(00, 12) = {}",
        tree_distance(&a, &b).unwrap(),
        tree_distance(&a, &c).unwrap()
    );

    // The four index-4 subgroups: a bottom-fixing element with mixed signs
    // escapes every variant.
    let mut mixed = TreePortrait::identity(2);
    mixed.set_local(&Label::parse("0").unwrap(), SWAP01);
    mixed.set_local(&Label::parse("1").unwrap(), [0, 2, 1]);
    for variant in HVariant::all() {
        println!(
            "sign pattern (-,-,+) in H{variant}: {}",
            h_membership(&mixed, 2, variant).unwrap()
        );
    }
}
