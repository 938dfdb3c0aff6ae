//! Brute-force ground truth for small orders.
//!
//! Every labelled tree on `n` vertices is reached exactly once through its
//! Prüfer code, so mapping all `n^(n-2)` codes through a canonical form and
//! deduplicating yields one representative per isomorphism class without
//! relying on any of the generator's structure. Canonical forms are also
//! checked against an exhaustive search over sibling orderings.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use rayon::prelude::*;

use crate::convert::{canonical_ws_of_rooted, fws_of_free, AdjList};
use crate::error::{Error, Result};
use crate::wseq::{decode_str, encode_str, Weight, WeightSeq};

/// Largest order for the free-tree sweep (9^7 codes).
pub const MAX_FREE_ORACLE_ORDER: usize = 9;
/// Largest order for the rooted-tree sweep (every code, every root).
pub const MAX_ROOTED_ORACLE_ORDER: usize = 8;
/// Largest order for [`cws_via_max_permutation`].
pub const MAX_PERMUTATION_ORDER: usize = 8;
/// Largest order for [`isomorphic_brute`].
pub const MAX_ISOMORPHISM_ORDER: usize = 8;

/// Decodes a Prüfer code with 1-based labels into a tree on `0..n`.
pub fn prufer_to_tree(code: &[usize], n: usize) -> Result<AdjList> {
    if n < 2 || code.len() != n - 2 {
        return Err(Error::Domain(format!(
            "a code for {n} vertices has length {}, got {}",
            n.saturating_sub(2),
            code.len()
        )));
    }
    if let Some(&bad) = code.iter().find(|&&x| x < 1 || x > n) {
        return Err(Error::Domain(format!("label {bad} outside 1..={n}")));
    }
    let mut degree = vec![1usize; n];
    for &x in code {
        degree[x - 1] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in code {
        let leaf = (0..n)
            .find(|&v| degree[v] == 1)
            .expect("a leaf always remains");
        edges.push((leaf, x - 1));
        degree[leaf] -= 1;
        degree[x - 1] -= 1;
    }
    let (u, v) = (0..n)
        .filter(|&v| degree[v] == 1)
        .collect_tuple()
        .expect("exactly two vertices remain");
    edges.push((u, v));
    AdjList::from_edges(n, &edges)
}

/// Prüfer code (1-based labels) of a labelled tree.
pub fn tree_to_prufer(t: &AdjList) -> Result<Vec<usize>> {
    if !t.is_tree() || t.order() < 2 {
        return Err(Error::Structure(
            "need a tree with at least two vertices".into(),
        ));
    }
    let n = t.order();
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut code = Vec::with_capacity(n - 2);
    for _ in 0..n - 2 {
        let leaf = (0..n)
            .find(|&v| !removed[v] && degree[v] == 1)
            .expect("trees have leaves");
        let parent = *t
            .neighbors(leaf)
            .iter()
            .find(|&&v| !removed[v])
            .expect("leaf has one live neighbor");
        code.push(parent + 1);
        removed[leaf] = true;
        degree[parent] -= 1;
    }
    Ok(code)
}

/// Every Prüfer code for `n` vertices, in lexicographic order.
pub fn all_codes(n: usize) -> Box<dyn Iterator<Item = Vec<usize>>> {
    words(n.saturating_sub(2), n)
}

/// All words of length `len` over `1..=n`.
fn words(len: usize, n: usize) -> Box<dyn Iterator<Item = Vec<usize>>> {
    if len == 0 {
        // itertools yields nothing for an empty product; one empty word is right
        return Box::new(std::iter::once(Vec::new()));
    }
    Box::new((0..len).map(|_| 1..=n).multi_cartesian_product())
}

/// Runs `key` over every labelled tree on `n` vertices, in parallel over the
/// first code symbol, and collects the distinct keys.
fn sweep(n: usize, key: impl Fn(&AdjList, &mut HashSet<String>) + Sync) -> HashSet<String> {
    let heads: Vec<Option<usize>> = if n <= 2 {
        vec![None]
    } else {
        (1..=n).map(Some).collect()
    };
    heads
        .into_par_iter()
        .map(|head| {
            let mut seen = HashSet::new();
            let tails = match head {
                None => words(0, n),
                Some(_) => words(n - 3, n),
            };
            for tail in tails {
                let code: Vec<usize> = head.into_iter().chain(tail).collect();
                let t = prufer_to_tree(&code, n).expect("codes are in range");
                key(&t, &mut seen);
            }
            seen
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

fn to_set(keys: HashSet<String>) -> BTreeSet<WeightSeq> {
    keys.iter()
        .map(|k| decode_str(k).expect("keys are encodings"))
        .collect()
}

/// Free weight sequences of all labelled trees on `n` vertices, deduplicated.
pub fn brute_force_free_set(n: usize) -> Result<BTreeSet<WeightSeq>> {
    if !(2..=MAX_FREE_ORACLE_ORDER).contains(&n) {
        return Err(Error::Domain(format!(
            "free oracle supports 2..={MAX_FREE_ORACLE_ORDER}, got {n}"
        )));
    }
    Ok(to_set(sweep(n, |t, seen| {
        let fws = fws_of_free(t).expect("decoded codes are trees");
        seen.insert(encode_str(&fws).expect("small order"));
    })))
}

/// Canonical weight sequences of all labelled trees on `n` vertices at
/// every possible root, deduplicated.
pub fn brute_force_rooted_set(n: usize) -> Result<BTreeSet<WeightSeq>> {
    if !(2..=MAX_ROOTED_ORACLE_ORDER).contains(&n) {
        return Err(Error::Domain(format!(
            "rooted oracle supports 2..={MAX_ROOTED_ORACLE_ORDER}, got {n}"
        )));
    }
    Ok(to_set(sweep(n, |t, seen| {
        for root in 0..n {
            let cws = canonical_ws_of_rooted(t, root).expect("decoded codes are trees");
            seen.insert(encode_str(&cws).expect("small order"));
        }
    })))
}

/// The largest weight sequence over every way of ordering every vertex's
/// children, found by trying them all.
pub fn cws_via_max_permutation(t: &AdjList, root: usize) -> Result<WeightSeq> {
    let n = t.order();
    if n > MAX_PERMUTATION_ORDER {
        return Err(Error::Domain(format!(
            "exhaustive ordering supports up to {MAX_PERMUTATION_ORDER} vertices, got {n}"
        )));
    }
    if !t.is_tree() || root >= n {
        return Err(Error::Structure("need a tree and a vertex of it".into()));
    }
    // children and subtree sizes with respect to `root`
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; n];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &v in t.neighbors(u) {
            if v != parent[u] {
                parent[v] = u;
                children[u].push(v);
                order.push(v);
            }
        }
        i += 1;
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        if v != root {
            size[parent[v]] += size[v];
        }
    }

    let options: Vec<Vec<Vec<usize>>> = children
        .iter()
        .map(|c| c.iter().copied().permutations(c.len()).collect())
        .collect();
    let mut pick = vec![0usize; n];
    let mut best: Option<Vec<Weight>> = None;
    loop {
        let mut ws = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            ws.push(size[u] as Weight);
            stack.extend(options[u][pick[u]].iter().rev());
        }
        if best.as_ref().is_none_or(|b| ws > *b) {
            best = Some(ws);
        }
        // odometer over every vertex's permutation index
        let mut k = 0;
        loop {
            if k == n {
                return Ok(WeightSeq::from_slice(&best.expect("at least one ordering")));
            }
            pick[k] += 1;
            if pick[k] < options[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// Tries every vertex bijection.
pub fn isomorphic_brute(a: &AdjList, b: &AdjList) -> Result<bool> {
    let n = a.order();
    if n > MAX_ISOMORPHISM_ORDER {
        return Err(Error::Domain(format!(
            "brute isomorphism supports up to {MAX_ISOMORPHISM_ORDER} vertices, got {n}"
        )));
    }
    if b.order() != n || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let target: HashSet<(usize, usize)> = b.edges().into_iter().collect();
    Ok((0..n).permutations(n).any(|perm| {
        a.edges().into_iter().all(|(u, v)| {
            let (x, y) = (perm[u], perm[v]);
            target.contains(&(x.min(y), x.max(y)))
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(texts: &[&str]) -> BTreeSet<WeightSeq> {
        texts.iter().map(|t| decode_str(t).unwrap()).collect()
    }

    #[test]
    fn prufer_examples() {
        let t = prufer_to_tree(&[], 2).unwrap();
        assert_eq!(t.edges(), vec![(0, 1)]);
        let star = prufer_to_tree(&[1, 1], 4).unwrap();
        assert_eq!(star.degree(0), 3);
        assert!(star.is_tree());
        assert!(prufer_to_tree(&[5], 3).is_err());
        assert!(prufer_to_tree(&[1], 4).is_err());
        assert!(prufer_to_tree(&[], 1).is_err());
    }

    #[test]
    fn cayley_count_order_four() {
        let trees: HashSet<AdjList> = all_codes(4)
            .map(|c| prufer_to_tree(&c, 4).unwrap())
            .collect();
        assert_eq!(trees.len(), 16);
    }

    #[test]
    fn code_round_trip() {
        for n in 2..=7 {
            for code in all_codes(n) {
                let t = prufer_to_tree(&code, n).unwrap();
                assert!(t.is_tree());
                assert_eq!(tree_to_prufer(&t).unwrap(), code);
            }
        }
    }

    #[test]
    fn free_set_examples() {
        assert_eq!(brute_force_free_set(2).unwrap(), set(&["11"]));
        assert_eq!(brute_force_free_set(4).unwrap(), set(&["4111", "2121"]));
        assert_eq!(brute_force_free_set(8).unwrap().len(), 23);
        assert!(brute_force_free_set(1).is_err());
        assert!(brute_force_free_set(10).is_err());
    }

    #[test]
    fn rooted_set_examples() {
        assert_eq!(brute_force_rooted_set(2).unwrap(), set(&["21"]));
        assert_eq!(
            brute_force_rooted_set(4).unwrap(),
            set(&["4321", "4311", "4211", "4111"])
        );
        assert_eq!(
            brute_force_rooted_set(5).unwrap(),
            set(&["54321", "54311", "54211", "54111", "53211", "53111", "52121", "52111", "51111"])
        );
        assert!(brute_force_rooted_set(9).is_err());
    }

    #[test]
    fn max_permutation_examples() {
        let star = prufer_to_tree(&[1, 1, 1, 1, 1], 7).unwrap();
        assert_eq!(
            cws_via_max_permutation(&star, 0).unwrap().to_string(),
            "7111111"
        );
        let big = AdjList::empty(9);
        assert!(cws_via_max_permutation(&big, 0).is_err());
    }

    #[test]
    fn brute_isomorphism() {
        let a = prufer_to_tree(&[1, 2], 4).unwrap();
        let b = prufer_to_tree(&[3, 4], 4).unwrap();
        let star = prufer_to_tree(&[2, 2], 4).unwrap();
        assert!(isomorphic_brute(&a, &b).unwrap());
        assert!(!isomorphic_brute(&a, &star).unwrap());
    }
}
