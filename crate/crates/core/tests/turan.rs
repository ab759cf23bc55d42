use std::collections::BTreeMap;

use proptest::prelude::*;
use tverberg_core::turan::{
    check_box_freeness, intersection_hypergraph, is_hypercube_free, max_hypercube_free, power_bound_holds,
    r_shattered, random_families, vc_dimension, FTable, Hypergraph, TupleSet,
};

const CAP: u64 = 50_000_000;

fn all_tuples(m: usize, s: usize) -> Vec<Vec<usize>> {
    (0..s.pow(m as u32))
        .map(|mut x| {
            (0..m)
                .map(|_| {
                    let v = x % s;
                    x /= s;
                    v
                })
                .collect()
        })
        .collect()
}

/// Direct definition: some choice of two distinct values per chosen
/// coordinate whose whole `2^k` grid projects into the set.
fn brute_has_box(set: &[Vec<usize>], coords: &[usize], s: usize) -> bool {
    let proj: std::collections::BTreeSet<Vec<usize>> =
        set.iter().map(|t| coords.iter().map(|&c| t[c]).collect()).collect();
    let k = coords.len();
    let pairs: Vec<(usize, usize)> = (0..s).flat_map(|a| (a + 1..s).map(move |b| (a, b))).collect();
    let mut choice = vec![0usize; k];
    loop {
        let cube = (0..1usize << k).all(|mask| {
            let t: Vec<usize> = (0..k).map(|j| if mask >> j & 1 == 0 { pairs[choice[j]].0 } else { pairs[choice[j]].1 }).collect();
            proj.contains(&t)
        });
        if cube {
            return true;
        }
        let mut j = 0;
        loop {
            if j == k {
                return false;
            }
            choice[j] += 1;
            if choice[j] < pairs.len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
    }
}

fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..1usize << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect()
}

/// Exhaustive over all subsets of `[s]^m`.
fn brute_f(k: usize, m: usize, s: usize) -> usize {
    let tuples = all_tuples(m, s);
    let coord_sets = subsets_of(m, k);
    let mut best = 0;
    for mask in 0u64..1 << tuples.len() {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let set: Vec<Vec<usize>> = (0..tuples.len()).filter(|&i| mask >> i & 1 == 1).map(|i| tuples[i].clone()).collect();
        if coord_sets.iter().all(|c| !brute_has_box(&set, c, s)) {
            best = size;
        }
    }
    best
}

#[test]
fn search_matches_subset_enumeration() {
    for (k, m, s) in [(1, 2, 2), (2, 2, 2), (1, 3, 2), (2, 3, 2), (3, 3, 2), (2, 2, 3), (1, 2, 3)] {
        let f = max_hypercube_free(k, m, s, CAP).unwrap();
        assert_eq!(f.value, brute_f(k, m, s), "F({k},{m},{s})");
        let witness = TupleSet::new(m, s, f.witness.members.iter().cloned()).unwrap();
        assert_eq!(witness.len(), f.value);
        assert!(is_hypercube_free(&witness, k));
    }
}

fn computed() -> BTreeMap<(usize, usize, usize), usize> {
    let mut out = BTreeMap::new();
    for (k, m, s) in [
        (1, 2, 2), (1, 2, 3), (1, 2, 4), (1, 3, 2), (1, 3, 3), (1, 3, 4),
        (2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 2, 5), (2, 3, 2), (2, 3, 3), (2, 4, 2),
        (3, 3, 2), (3, 4, 2),
    ] {
        out.insert((k, m, s), max_hypercube_free(k, m, s, CAP).unwrap().value);
    }
    out
}

#[test]
fn computed_values_are_monotone_and_bounded() {
    let f = computed();
    for (&(k, m, s), &v) in &f {
        if let Some(&next) = f.get(&(k, m, s + 1)) {
            assert!(v <= next, "F({k},{m},{s}) = {v} > F({k},{m},{}) = {next}", s + 1);
        }
        if let Some(&next) = f.get(&(k, m + 1, s)) {
            assert!(v <= next, "F({k},{m},{s}) = {v} > F({k},{},{s}) = {next}", m + 1);
        }
        if k >= 2 && m >= 2 {
            assert!(power_bound_holds(k, m, s, v), "F({k},{m},{s}) = {v}");
        }
    }
    assert_eq!(f[&(2, 3, 2)], 4);
    assert_eq!(f[&(3, 3, 2)], 7);
}

#[test]
fn tables_survive_json() {
    let table = FTable::compute_for_recursion(2, 2, 3, CAP).unwrap();
    let back: FTable = serde_json::from_str(&serde_json::to_string(&table).unwrap()).unwrap();
    assert_eq!(back, table);
    let t = TupleSet::new(2, 3, vec![vec![0, 1], vec![2, 2]]).unwrap();
    let back: TupleSet = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(back, t);
}

/// Edges as bit masks over at most 8 vertices.
fn hypergraph(n: usize, edges: &[u8]) -> Hypergraph {
    Hypergraph::new(n, edges.iter().map(|&e| (0..n).filter(|&v| e >> v & 1 == 1).collect::<Vec<_>>())).unwrap()
}

fn brute_two_shattered(edges: &[u8], set: u8) -> bool {
    // labelled bipartitions: sub goes to part one, the rest of `set` to part two
    let mut sub = set;
    loop {
        let (p1, p2) = (sub, set & !sub);
        let ok = edges.iter().any(|&e1| {
            e1 & p1 == p1 && edges.iter().any(|&e2| e2 & p2 == p2 && e1 & e2 & set == 0)
        });
        if !ok {
            return false;
        }
        if sub == 0 {
            return true;
        }
        sub = (sub - 1) & set;
    }
}

fn classically_shattered(edges: &[u8], set: u8) -> bool {
    let traces: std::collections::BTreeSet<u8> = edges.iter().map(|&e| e & set).collect();
    traces.len() == 1 << set.count_ones()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_shattering_matches_enumeration(edges in prop::collection::vec(any::<u8>(), 1..12), set in any::<u8>()) {
        let n = 8;
        let h = hypergraph(n, &edges);
        let s: Vec<usize> = (0..n).filter(|&v| set >> v & 1 == 1).collect();
        prop_assert_eq!(r_shattered(&h, &s, 2).unwrap(), brute_two_shattered(&edges, set));
    }

    #[test]
    fn vc_dimension_dominates_shattered_sets(edges in prop::collection::vec(0u8..64, 1..20)) {
        let n = 6;
        let h = hypergraph(n, &edges);
        let vc = vc_dimension(&h).unwrap();
        let witness = vc.witness.iter().fold(0u8, |m, &v| m | 1 << v);
        prop_assert_eq!(vc.witness.len(), vc.dimension);
        prop_assert!(classically_shattered(&edges, witness));
        for set in 0u8..64 {
            if classically_shattered(&edges, set) {
                prop_assert!(vc.dimension >= set.count_ones() as usize);
            }
        }
    }

    #[test]
    fn geometric_hypergraphs_are_box_free(seed in any::<u64>(), shape in 0usize..3) {
        let (parts, s) = [(2, 2), (2, 3), (3, 2)][shape];
        let families = random_families(parts, s, parts - 1, seed).unwrap();
        let g = intersection_hypergraph(&families).unwrap();
        prop_assert!(check_box_freeness(&g, parts).unwrap().is_none());
    }
}
