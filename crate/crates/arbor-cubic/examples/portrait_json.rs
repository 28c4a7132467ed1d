//! The portrait wire format: a JSON map from node words to 3-character
//! image strings, and the group description files built on it.
//!
//! Run with: cargo run --example portrait_json

use arbor_cubic::group::{generate, GroupFile};
use arbor_cubic::tree::{Label, TreePortrait, CYCLE012, SWAP01};

fn main() {
    let mut p = TreePortrait::identity(2);
    p.set_local(&Label::root(), SWAP01);
    p.set_local(&Label::parse("1").unwrap(), CYCLE012);
    let blob = p.to_json();
    println!("portrait: {}", serde_json::to_string_pretty(&blob).unwrap());

    let back = TreePortrait::from_json(2, &blob).unwrap();
    assert_eq!(back, p);
    println!("round trip ok; image of leaf 10 is {}", p.apply(&Label::parse("10").unwrap()));

    // A group description file and the group it generates.
    let file = GroupFile {
        ell: 2,
        depth: 2,
        generators: vec![p],
        chi: None,
    };
    let text = serde_json::to_string_pretty(&file.to_json()).unwrap();
    println!("\ngroup file:\n{text}");
    let parsed = GroupFile::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    let group = generate(parsed.generators).unwrap();
    println!("generated group order: {}", group.order());
}
