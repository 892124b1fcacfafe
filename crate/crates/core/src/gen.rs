//! Random trees for tests and fuzzing. All generators are driven by a
//! caller-supplied RNG so runs are reproducible from a seed.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::forest::Forest;
use crate::tree::{NodeId, Tree};

/// A random recursive tree on `n >= 1` nodes with shuffled labels.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tree {
    assert!(n >= 1, "a tree has at least one node");
    let mut label: Vec<u32> = (1..=n as u32).collect();
    label.shuffle(rng);
    let mut parent = vec![0u32; n];
    for i in 1..n {
        let p = rng.random_range(0..i);
        parent[label[i] as usize - 1] = label[p];
    }
    Tree::from_parents(parent).expect("recursive trees are trees")
}

/// Joins random pairs until one tree remains. With `find_rate > 0` the
/// joins are compressing unions and a random find follows each with that
/// probability; otherwise they are plain links.
fn random_forest_tree<R: Rng + ?Sized>(n: usize, find_rate: f64, rng: &mut R) -> Tree {
    assert!(n >= 1, "a tree has at least one node");
    let mut forest = Forest::new(n).expect("n >= 1");
    let pick = |rng: &mut R| NodeId(rng.random_range(1..=n as u32));
    let mut components = n;
    while components > 1 {
        let (a, b) = (pick(rng), pick(rng));
        if forest.root_of(a).unwrap() != forest.root_of(b).unwrap() {
            if find_rate > 0.0 {
                forest.union(a, b).unwrap();
            } else {
                forest.link(a, b).unwrap();
            }
            components -= 1;
        }
        if find_rate > 0.0 && rng.random_bool(find_rate) {
            forest.find(pick(rng)).unwrap();
        }
    }
    forest.snapshot(NodeId(1)).unwrap().tree
}

/// A random Union tree on `n` nodes.
pub fn random_union_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tree {
    random_forest_tree(n, 0.0, rng)
}

/// A random Union-Find tree on `n` nodes.
pub fn random_uf_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tree {
    random_forest_tree(n, 0.5, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognizer::{is_union_find_tree, is_union_tree};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=30 {
            let t = random_tree(n, &mut rng);
            assert_eq!(t.len(), n);
            assert!(is_union_tree(&random_union_tree(n, &mut rng)));
            let uf = random_uf_tree(n.min(12), &mut rng);
            assert!(is_union_find_tree(&uf).is_some());
        }
    }

    #[test]
    fn same_seed_same_tree() {
        let a = random_tree(20, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_tree(20, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }
}
