//! Kruskal window index on fixed and random sequences.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use selfembed::embedding::kruskal_index;
use selfembed::FiniteTree;

fn chain(n: u64) -> FiniteTree {
    FiniteTree::chain(&(0..n).collect::<Vec<_>>())
}

fn main() {
    let chains: Vec<FiniteTree> = (1..=50).map(chain).collect();
    println!("chains 1..50: {:?}", kruskal_index(&chains, 50));

    let mut starred = vec![FiniteTree::star(10)];
    starred.extend((1..=49).map(chain));
    println!("star10 then chains: {:?}", kruskal_index(&starred, 50));

    for seed in 0..8 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq: Vec<FiniteTree> = (0..50).map(|_| FiniteTree::random(&mut rng, 6)).collect();
        println!("seed {seed}: {:?}", kruskal_index(&seq, 50));
    }
}
