//! Search for embeddings between small trees and check the witness.

use selfembed::embedding::{find_embedding, verify_embedding};
use selfembed::format::parse_finite_tree;
use selfembed::{ComponentKind, FiniteTree};

fn main() {
    let chain = FiniteTree::chain(&[0, 1, 2]);
    let star = FiniteTree::star(4);
    let fork = parse_finite_tree("0 .\n1 0\n2 1\n3 1\n4 0\n").unwrap();

    for (name, a, b) in [("chain3 -> star4", &chain, &star), ("chain3 -> fork", &chain, &fork), ("star4 -> fork", &star, &fork)] {
        match find_embedding(a, b) {
            Some(e) => {
                let bad = verify_embedding(&e).unwrap();
                println!("{name}: {:?} ({} violations)", e.map, bad.len());
            }
            None => println!("{name}: not-found"),
        }
    }

    use ComponentKind::*;
    for x in [A, B, C, D] {
        let row: Vec<&str> = [A, B, C, D]
            .iter()
            .map(|&y| if find_embedding(&x.shape(0).unwrap(), &y.shape(0).unwrap()).is_some() { "yes" } else { " - " })
            .collect();
        println!("{x} -> A B C D: {}", row.join(" "));
    }
}
