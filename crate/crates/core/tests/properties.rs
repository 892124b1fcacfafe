use proptest::prelude::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uftree_core::forest::{random_script, Forest, Op};
use uftree_core::gen::{random_tree, random_uf_tree};
use uftree_core::recognizer::{
    decide_flat_uf, is_union_find_tree, is_union_tree, union_violations, ChargeContext, NodeClass, PushCase,
};
use uftree_core::reduction::{
    all_3partitions, build_tree, normalize, planted_instance, triple_partitions, validate_instance,
};
use uftree_core::{CanonicalCode, NodeId, PushSequence, Tree};

fn tree(n: usize, seed: u64) -> Tree {
    random_tree(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `t` with node `i` renamed to `perm[i - 1]`.
fn relabel(t: &Tree, perm: &[u32]) -> Tree {
    let mut parent = vec![0u32; t.len()];
    for x in t.nodes() {
        if let Some(p) = t.parent(x) {
            parent[perm[x.get() as usize - 1] as usize - 1] = perm[p.get() as usize - 1];
        }
    }
    Tree::from_parents(parent).unwrap()
}

/// Every applicable push of `t`.
fn pushes(t: &Tree) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for p in t.nodes() {
        let kids = t.children(p).unwrap();
        for &x in &kids {
            for &y in &kids {
                if x != y {
                    out.push((x, y));
                }
            }
        }
    }
    out
}

fn random_pushes(t: &Tree, steps: usize, rng: &mut ChaCha8Rng) -> Tree {
    let mut cur = t.clone();
    for _ in 0..steps {
        let moves = pushes(&cur);
        let Some(&(x, y)) = moves.choose(rng) else { break };
        cur = cur.push(x, y).unwrap();
    }
    cur
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_round_trip(n in 1usize..60, seed: u64) {
        let t = tree(n, seed);
        let text = t.to_text();
        prop_assert_eq!(Tree::parse(&text).unwrap(), t.clone());
        prop_assert_eq!(text.parse::<Tree>().unwrap().to_string(), text);
    }

    #[test]
    fn canonical_code_ignores_labels(n in 1usize..40, seed: u64) {
        let t = tree(n, seed);
        let mut perm: Vec<u32> = (1..=n as u32).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x55));
        let code = t.canonical_code();
        prop_assert_eq!(relabel(&t, &perm).canonical_code(), code.clone());
        prop_assert_eq!(Tree::from_canonical_code(&code).canonical_code(), code.clone());
        prop_assert_eq!(CanonicalCode::parse(&code.to_string()), Some(code.clone()));
        prop_assert_eq!(code.node_count(), n);
    }

    #[test]
    fn merge_adds_sizes(a in 1usize..30, b in 1usize..30, seed: u64) {
        let (t, s) = (tree(a, seed), tree(b, seed.wrapping_add(1)));
        let m = t.merge(&s);
        prop_assert_eq!(m.len(), a + b);
        prop_assert_eq!(m.size_of(m.root()).unwrap(), a + b);
        prop_assert_eq!(m.size_of(NodeId(s.root().get() + a as u32)).unwrap(), b);
    }

    #[test]
    fn collapse_and_push_move_along_the_order(n in 1usize..30, seed: u64) {
        let t = tree(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = NodeId(rng.random_range(1..=n as u32));
        let c = t.collapse(x).unwrap();
        prop_assert!(c.leq(&t).unwrap());
        if c.parent(x).is_some() {
            prop_assert_eq!(c.parent(x), Some(c.root()));
        }
        if let Some(&(a, b)) = pushes(&t).choose(&mut rng) {
            let p = t.push(a, b).unwrap();
            prop_assert!(t.leq(&p).unwrap());
            prop_assert!(!p.leq(&t).unwrap());
        }
    }

    #[test]
    fn push_witness_reproduces_reachable_trees(n in 1usize..14, steps in 0usize..20, seed: u64) {
        let t = tree(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_pushes(&t, steps, &mut rng);
        prop_assert!(t.leq(&s).unwrap());
        let w = t.push_witness(&s).unwrap().expect("s is reachable");
        prop_assert_eq!(w.apply(&t).unwrap(), s.clone());
        // antisymmetry
        prop_assert_eq!(s.leq(&t).unwrap(), s == t);
    }

    #[test]
    fn push_sequence_text_round_trip(n in 2usize..14, steps in 0usize..10, seed: u64) {
        let t = tree(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_pushes(&t, steps, &mut rng);
        let w = t.push_witness(&s).unwrap().unwrap();
        prop_assert_eq!(PushSequence::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn charge_cases_match_deltas(n in 2usize..40, h in 1usize..12, seed: u64) {
        let t = tree(n, seed);
        let ctx = ChargeContext::new(h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(&(x, y)) = pushes(&t).choose(&mut rng) {
            let case = ctx.push_case(&t, x, y).unwrap();
            let after = t.push(x, y).unwrap();
            let delta = ctx.total_charge(&after) - ctx.total_charge(&t);
            let expected = match case {
                PushCase::LightBecomesHeavy | PushCase::HeavyIntoLight => -(h as i64 + 1),
                _ => 0,
            };
            prop_assert_eq!(delta, expected);
            let before = ctx.classify_all(&t);
            let later = ctx.classify_all(&after);
            for (b, a) in before.iter().zip(&later) {
                prop_assert!(!b.is_heavy() || a.is_heavy());
                prop_assert!(!b.is_basket() || a.is_basket());
            }
        }
    }

    #[test]
    fn light_pushes_do_not_repair_baskets(n in 4usize..50, h in 1usize..6, seed: u64) {
        let t = tree(n, seed);
        let ctx = ChargeContext::new(h).unwrap();
        let classes = ctx.classify_all(&t);
        for v in union_violations(&t) {
            if !classes[v.node.get() as usize - 1].is_basket() {
                continue;
            }
            let kids = t.children(v.node).unwrap();
            for &a in &kids {
                for &b in &kids {
                    let (sa, sb) = (t.size_of(a).unwrap(), t.size_of(b).unwrap());
                    if a == b || sa + sb > h {
                        continue;
                    }
                    let after = t.push(a, b).unwrap();
                    prop_assert!(union_violations(&after).iter().any(|w| w.node == v.node));
                }
            }
        }
    }

    #[test]
    fn union_find_witnesses_are_sound(n in 1usize..13, seed: u64) {
        let t = random_uf_tree(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let w = is_union_find_tree(&t).expect("generated by unions and finds");
        prop_assert!(w.len() <= n * n);
        prop_assert!(is_union_tree(&w.apply(&t).unwrap()));
    }

    #[test]
    fn forest_ops_are_tree_ops(n in 2usize..24, k in 1usize..60, seed: u64) {
        let script = random_script(n, k, seed);
        let mut forest = Forest::new(n).unwrap();
        for &op in &script.ops {
            match op {
                Op::Find(x) => {
                    let before = forest.snapshot(x).unwrap();
                    forest.find(x).unwrap();
                    let after = forest.snapshot(x).unwrap();
                    prop_assert_eq!(&after.members, &before.members);
                    let local = before.local(x).unwrap();
                    prop_assert_eq!(after.tree, before.tree.collapse(local).unwrap());
                }
                Op::Union(a, b) => {
                    let (ra, rb) = (forest.root_of(a).unwrap(), forest.root_of(b).unwrap());
                    let (sa, sb) = (forest.component_size(a).unwrap(), forest.component_size(b).unwrap());
                    let root = forest.union(a, b).unwrap();
                    if ra != rb {
                        let (keep, lose) = if sa >= sb { (ra, rb) } else { (rb, ra) };
                        prop_assert_eq!(root, keep);
                        prop_assert_eq!(forest.parent(lose).unwrap(), Some(keep));
                        prop_assert_eq!(forest.component_size(a).unwrap(), sa + sb);
                    }
                }
                Op::Dump => {}
            }
        }
    }

    #[test]
    fn normalization_keeps_solutions(m in 1usize..4, b in 10usize..40, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = (b / 4 + 1, (b - 1) / 2);
        prop_assume!(lo <= hi);
        let mut a = Vec::new();
        for _ in 0..200 {
            if a.len() == 3 * m {
                break;
            }
            let (x, y) = (rng.random_range(lo..=hi), rng.random_range(lo..=hi));
            if let Some(z) = b.checked_sub(x + y) {
                if (lo..=hi).contains(&z) {
                    a.extend([x, y, z]);
                }
            }
        }
        prop_assume!(a.len() == 3 * m);
        // perturb one pair so some instances become unsolvable
        if rng.random_bool(0.5) && m > 1 && a[0] < hi && a[3] > lo {
            a[0] += 1;
            a[3] -= 1;
        }
        a.shuffle(&mut rng);
        let norm = normalize(m, &a).unwrap();
        prop_assert_eq!(all_3partitions(&norm), triple_partitions(&a, b));
        let c = norm.items()[0] - a[0];
        for (x, y) in a.iter().zip(norm.items()) {
            prop_assert_eq!(y - x, c);
            prop_assert!(4 * y > norm.target() && 2 * y < norm.target());
        }
    }

    #[test]
    fn reduction_trees_are_flat_and_balanced(m in 2usize..6, exp in 4u32..7, seed: u64) {
        let inst = planted_instance(m, exp, seed);
        let r = build_tree(&inst).unwrap();
        prop_assert_eq!(r.ctx.total_charge(&r.tree), 0);
        let p = decide_flat_uf(&r.tree, r.ctx).unwrap().expect("planted instances are solvable");
        // one small weight of every size per group
        for group in &p.groups {
            let mut sizes: Vec<usize> = group
                .iter()
                .filter(|x| r.weight_nodes.iter().flatten().any(|w| w == *x))
                .map(|&x| r.tree.size_of(x).unwrap())
                .collect();
            sizes.sort_unstable();
            let want: Vec<usize> = (0..exp - 1).map(|j| 1usize << j).collect();
            prop_assert_eq!(sizes, want);
        }
    }
}

#[test]
fn union_tree_charges_are_nonnegative_on_random_union_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.random_range(1..=40);
        let t = uftree_core::gen::random_union_tree(n, &mut rng);
        for h in 1..=n {
            let ctx = ChargeContext::new(h).unwrap();
            assert!(ctx.charges(&t).iter().all(|&c| c >= 0));
        }
    }
}

#[test]
fn node_classes_nest() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let t = random_tree(rng.random_range(1..40), &mut rng);
        let ctx = ChargeContext::new(rng.random_range(1..8)).unwrap();
        for c in ctx.classify_all(&t) {
            if c == NodeClass::EmptyBasket {
                assert!(c.is_basket() && c.is_heavy());
            }
        }
    }
}

#[test]
fn small_valid_instance_has_no_solution() {
    let inst = validate_instance(2, &[5, 5, 5, 5, 6, 8]).unwrap();
    assert!(all_3partitions(&inst).is_empty());
    let r = build_tree(&inst).unwrap();
    assert_eq!(decide_flat_uf(&r.tree, r.ctx).unwrap(), None);
}
