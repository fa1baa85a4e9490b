//! A binary tree with no infinite computable chain or antichain, built
//! against a few enumerators.

use selfembed::adversary::cac::{cac_build, cac_verify, CacCase, Enumerator};

fn main() {
    let ws = Enumerator::shipped();
    let run = cac_build(&ws, 500, None);
    let (checks, cases) = cac_verify(&run.trace, 2 * ws.len());
    for c in &checks {
        println!("{:<20} {:?}", c.name, c.status);
    }
    for (r, case) in &cases {
        let who = &ws[r / 2];
        match case {
            CacCase::Succeeded { witness, since, .. } => println!("R{r} ({}): beaten by {witness} at stage {since}", who.name()),
            CacCase::Stable { since, .. } => println!("R{r} ({}): restraint stable since {since}", who.name()),
        }
    }
    println!("{} nodes", run.tree.final_tree().len());
}
