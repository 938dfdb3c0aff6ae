//! Weight sequences to adjacency structures and back.
//!
//! Forward direction: vertices are labelled in pre-order, so the children of
//! vertex `i` are found by hopping from `i + 1` over whole child segments.
//! Reverse direction: canonical sequences of arbitrary labelled trees, by
//! sorting child sequences at every vertex, and free sequences by rooting
//! at the centroid.

use std::collections::VecDeque;
use std::io::Write;

use crate::error::{Error, Result};
use crate::rootedgen::RootedCache;
use crate::wseq::{forest_segments, validate_tree_ws, Weight, WeightSeq};

/// Whether a half-length first weight means "bicentroidal pair".
///
/// `Rooted` suppresses the extra centroid edge, for converting plain rooted
/// (sub)tree sequences such as the cached tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjMode {
    Free,
    Rooted,
}

/// Undirected adjacency lists; neighbor lists are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdjList {
    neighbors: Vec<Vec<usize>>,
}

impl AdjList {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        AdjList {
            neighbors: vec![Vec::new(); n],
        }
    }

    /// Builds from an edge list (0-based). Does not check that the result is a tree.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = AdjList::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::Structure(format!(
                    "bad edge ({u}, {v}) for order {n}"
                )));
            }
            adj.add_edge(u, v);
        }
        adj.normalize();
        Ok(adj)
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.neighbors[u].push(v);
        self.neighbors[v].push(u);
    }

    fn normalize(&mut self) {
        for list in &mut self.neighbors {
            list.sort_unstable();
        }
    }

    pub fn order(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.order().saturating_sub(1));
        for (u, list) in self.neighbors.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Connected, symmetric, and exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        let n = self.order();
        if n == 0 {
            return false;
        }
        for (u, list) in self.neighbors.iter().enumerate() {
            if list
                .iter()
                .any(|&v| v >= n || v == u || !self.neighbors[v].contains(&u))
            {
                return false;
            }
            if list.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
        }
        self.edge_count() == n - 1 && bfs_order(self, 0, None).0.len() == n
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> AdjList {
        let mut out = AdjList::empty(self.order());
        for (u, v) in self.edges() {
            out.add_edge(perm[u], perm[v]);
        }
        out.normalize();
        out
    }

    /// One line: fields separated by `;`, field `i` holding the 1-based
    /// neighbors of vertex `i` separated by spaces.
    pub fn write_line(&self, out: &mut Vec<u8>) {
        for (i, list) in self.neighbors.iter().enumerate() {
            if i > 0 {
                out.push(b';');
            }
            for (k, v) in list.iter().enumerate() {
                if k > 0 {
                    out.push(b' ');
                }
                let _ = write!(out, "{}", v + 1);
            }
        }
        out.push(b'\n');
    }

    pub fn to_matrix(&self) -> AdjMatrix {
        let n = self.order();
        let mut bits = vec![0u8; n * n];
        for (u, v) in self.edges() {
            bits[u * n + v] = 1;
            bits[v * n + u] = 1;
        }
        AdjMatrix { n, bits }
    }
}

/// Dense symmetric 0/1 adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjMatrix {
    n: usize,
    bits: Vec<u8>,
}

impl AdjMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j] == 1
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.bits[i * self.n..(i + 1) * self.n]
            .iter()
            .map(|&b| b as usize)
            .sum()
    }

    /// `n` lines of `n` characters `0`/`1`.
    pub fn write_block(&self, out: &mut Vec<u8>) {
        for row in self.bits.chunks_exact(self.n) {
            out.extend(row.iter().map(|&b| b'0' + b));
            out.push(b'\n');
        }
    }
}

fn check_sequence(s: &[Weight], mode: AdjMode) -> Result<()> {
    let n = s.len();
    let ok = validate_tree_ws(s)
        || (mode == AdjMode::Free
            && n.is_multiple_of(2)
            && s[0] as usize == n / 2
            && validate_tree_ws(&s[..n / 2])
            && validate_tree_ws(&s[n / 2..]));
    if ok {
        Ok(())
    } else {
        Err(Error::Structure(format!(
            "not a tree weight sequence: {}",
            crate::wseq::encode_decimal(s)
        )))
    }
}

fn is_bicentroidal(s: &[Weight]) -> bool {
    s.len().is_multiple_of(2) && 2 * s[0] as usize == s.len()
}

/// Calls `f(i, j)` for every edge, in `(i, j)` order with `i < j`.
///
/// The caller must have validated `s`. The centroid edge of a bicentroidal
/// sequence is reported right after the root's own children, which keeps
/// the output sorted.
pub fn for_each_edge(s: &[Weight], mode: AdjMode, mut f: impl FnMut(usize, usize)) {
    let n = s.len();
    for i in 0..n {
        let end = i + s[i] as usize;
        let mut j = i + 1;
        while j < end {
            f(i, j);
            j += s[j] as usize;
        }
        if i == 0 && mode == AdjMode::Free && is_bicentroidal(s) {
            f(0, n / 2);
        }
    }
}

/// Adjacency list of the free tree with free weight sequence `s`.
///
/// Also accepts plain rooted-tree sequences: the centroid edge is added only
/// when the root weight is half the length.
pub fn adj_list_from_ws(s: &[Weight]) -> Result<AdjList> {
    adj_list_from_ws_with(s, AdjMode::Free)
}

pub fn adj_list_from_ws_with(s: &[Weight], mode: AdjMode) -> Result<AdjList> {
    check_sequence(s, mode)?;
    let mut adj = AdjList::empty(s.len());
    // edges arrive sorted by (i, j), so every neighbor list is built sorted
    for_each_edge(s, mode, |i, j| adj.add_edge(i, j));
    debug_assert!(adj
        .neighbors
        .iter()
        .all(|l| l.windows(2).all(|w| w[0] < w[1])));
    Ok(adj)
}

pub fn adj_matrix_from_ws(s: &[Weight]) -> Result<AdjMatrix> {
    check_sequence(s, AdjMode::Free)?;
    let n = s.len();
    let mut bits = vec![0u8; n * n];
    for_each_edge(s, AdjMode::Free, |i, j| {
        bits[i * n + j] = 1;
        bits[j * n + i] = 1;
    });
    Ok(AdjMatrix { n, bits })
}

/// Space-separated 1-based `i-j` tokens, sorted, then a newline.
pub fn write_edge_line(s: &[Weight], out: &mut Vec<u8>) {
    let mut first = true;
    for_each_edge(s, AdjMode::Free, |i, j| {
        if !first {
            out.push(b' ');
        }
        first = false;
        let _ = write!(out, "{}-{}", i + 1, j + 1);
    });
    out.push(b'\n');
}

fn copy_edges(from: &AdjList, offset: usize, into: &mut AdjList) {
    for (u, list) in from.neighbors.iter().enumerate() {
        for &v in list.iter().filter(|&&v| v > u) {
            into.add_edge(u + offset, v + offset);
        }
    }
}

/// Adjacency list of `n ⊕ a ⊕ b#` from the cached lists of `a` and of each
/// tree in the forest `b#`.
///
/// `a` is shifted by 1, the forest tree starting at position `p` of `b#` by
/// `|a| + 1 + p`, and every subtree root is joined to vertex 0. Any cache
/// miss falls back to [`adj_list_from_ws`] on the whole sequence.
pub fn assemble_adj(
    n: usize,
    a: &[Weight],
    b_tail: &[Weight],
    cache: &RootedCache,
) -> Result<AdjList> {
    let whole = || {
        let mut s = Vec::with_capacity(n);
        s.push(n as Weight);
        s.extend_from_slice(a);
        s.extend_from_slice(b_tail);
        s
    };
    if 1 + a.len() + b_tail.len() != n || n > Weight::MAX as usize {
        return Err(Error::Structure(format!(
            "parts of length {} and {} do not make order {n}",
            a.len(),
            b_tail.len()
        )));
    }
    let Some(segments) = forest_segments(b_tail) else {
        return adj_list_from_ws(&whole());
    };
    let Some(a_adj) = cache.adjacency(a) else {
        return adj_list_from_ws(&whole());
    };
    let mut adj = AdjList::empty(n);
    copy_edges(a_adj, 1, &mut adj);
    adj.add_edge(0, 1);
    let base = 1 + a.len();
    for (p, len) in segments {
        let Some(seg_adj) = cache.adjacency(&b_tail[p..p + len]) else {
            return adj_list_from_ws(&whole());
        };
        copy_edges(seg_adj, base + p, &mut adj);
        adj.add_edge(0, base + p);
    }
    adj.normalize();
    Ok(adj)
}

/// Adjacency list of the bicentroidal tree `a1 ⊕ a2`: the second half is
/// shifted by `n/2` and the two roots are joined.
pub fn assemble_adj_bi(a1: &[Weight], a2: &[Weight], cache: &RootedCache) -> Result<AdjList> {
    if a1.len() != a2.len() || a1.is_empty() {
        return Err(Error::Structure(
            "bicentroidal halves must have equal order".into(),
        ));
    }
    let h = a1.len();
    let (Some(adj1), Some(adj2)) = (cache.adjacency(a1), cache.adjacency(a2)) else {
        let mut s = a1.to_vec();
        s.extend_from_slice(a2);
        return adj_list_from_ws(&s);
    };
    let mut adj = AdjList::empty(2 * h);
    copy_edges(adj1, 0, &mut adj);
    copy_edges(adj2, h, &mut adj);
    adj.add_edge(0, h);
    adj.normalize();
    Ok(adj)
}

/// Splits a generated sequence into its parts and calls the matching assembler.
pub fn assemble_adj_from_ws(s: &[Weight], cache: &RootedCache) -> Result<AdjList> {
    check_sequence(s, AdjMode::Free)?;
    let n = s.len();
    if n == 1 {
        return Ok(AdjList::empty(1));
    }
    if is_bicentroidal(s) {
        return assemble_adj_bi(&s[..n / 2], &s[n / 2..], cache);
    }
    let q = s[1] as usize;
    assemble_adj(n, &s[1..1 + q], &s[1 + q..], cache)
}

/// BFS from `root`, never entering `blocked`. Returns visit order and parents.
fn bfs_order(t: &AdjList, root: usize, blocked: Option<usize>) -> (Vec<usize>, Vec<usize>) {
    let n = t.order();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    if let Some(b) = blocked {
        seen[b] = true;
    }
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in t.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    (order, parent)
}

fn require_tree(t: &AdjList) -> Result<()> {
    if t.is_tree() {
        Ok(())
    } else {
        Err(Error::Structure("input is not a tree".into()))
    }
}

/// Canonical sequence of the component of `root` once `blocked` is removed.
fn cws_component(t: &AdjList, root: usize, blocked: Option<usize>) -> Vec<Weight> {
    let (order, parent) = bfs_order(t, root, blocked);
    let mut kids: Vec<Vec<Vec<Weight>>> = vec![Vec::new(); t.order()];
    for &v in order.iter().rev() {
        let mut children = std::mem::take(&mut kids[v]);
        children.sort_by(|x, y| y.cmp(x));
        let size = 1 + children.iter().map(Vec::len).sum::<usize>();
        let mut s = Vec::with_capacity(size);
        s.push(size as Weight);
        for c in children {
            s.extend(c);
        }
        if v == root {
            return s;
        }
        kids[parent[v]].push(s);
    }
    unreachable!("root is always visited")
}

/// Canonical weight sequence of `t` rooted at `root`: siblings sorted so
/// their sequences are non-increasing, at every vertex.
pub fn canonical_ws_of_rooted(t: &AdjList, root: usize) -> Result<WeightSeq> {
    require_tree(t)?;
    if root >= t.order() {
        return Err(Error::Domain(format!("root {root} out of range")));
    }
    if t.order() > Weight::MAX as usize {
        return Err(Error::Domain(format!(
            "order {} exceeds {}",
            t.order(),
            Weight::MAX
        )));
    }
    Ok(WeightSeq::from_slice(&cws_component(t, root, None)))
}

/// The one or two vertices minimizing the largest component left after
/// deleting them.
pub fn find_centroids(t: &AdjList) -> Result<Vec<usize>> {
    require_tree(t)?;
    let n = t.order();
    let (order, parent) = bfs_order(t, 0, None);
    let mut size = vec![1usize; n];
    let mut worst = vec![0usize; n];
    for &v in order.iter().rev() {
        if v != 0 {
            size[parent[v]] += size[v];
            worst[parent[v]] = worst[parent[v]].max(size[v]);
        }
    }
    for v in 0..n {
        worst[v] = worst[v].max(n - size[v]);
    }
    let best = *worst.iter().min().expect("non-empty tree");
    let centroids: Vec<usize> = (0..n).filter(|&v| worst[v] == best).collect();
    debug_assert!(centroids.len() <= 2);
    Ok(centroids)
}

/// Free weight sequence: canonical sequence at the centroid, or the two
/// half-tree sequences (larger first) for a bicentroidal tree.
pub fn fws_of_free(t: &AdjList) -> Result<WeightSeq> {
    let centroids = find_centroids(t)?;
    if t.order() > Weight::MAX as usize {
        return Err(Error::Domain(format!(
            "order {} exceeds {}",
            t.order(),
            Weight::MAX
        )));
    }
    let seq = match centroids[..] {
        [c] => cws_component(t, c, None),
        [u, v] => {
            let mut x = cws_component(t, u, Some(v));
            let mut y = cws_component(t, v, Some(u));
            if x < y {
                std::mem::swap(&mut x, &mut y);
            }
            x.extend(y);
            x
        }
        _ => unreachable!("a tree has one or two centroids"),
    };
    Ok(WeightSeq::from_slice(&seq))
}

/// Sorts the siblings of an ordered tree sequence into canonical order,
/// without going through an adjacency list.
pub fn canonicalize_ordered(s: &[Weight]) -> Vec<Weight> {
    let mut children: Vec<Vec<Weight>> = crate::wseq::child_segments(s, 0)
        .map(|(start, len)| canonicalize_ordered(&s[start..start + len]))
        .collect();
    children.sort_by(|x, y| y.cmp(x));
    let mut out = Vec::with_capacity(s.len());
    out.push(s[0]);
    for c in children {
        out.extend(c);
    }
    out
}
