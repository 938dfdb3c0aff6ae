//! Streaming enumeration of rooted trees by canonical weight sequence.
//!
//! `B(n)` is the list of canonical weight sequences of all rooted trees of
//! order `n`, sorted non-increasing. Its elements are exactly the sequences
//! `n ⊕ a ⊕ b#` where `a ∈ B(q)`, `b ∈ B(n - q)` and `a ≽ b#`; grouping by
//! `q` (the order of the root's first subtree) from `n - 1` down to 1 gives
//! the sorted order directly. [`rt_helper`] produces one such group `B_q(n)`.
//!
//! [`RootedCache`] holds `B(k)` for every `k <= L`. The generator uses it to
//! replace recursion with table scans wherever the relevant orders fit, and
//! falls back to nested streams only when the second subtree of the root is
//! too large to be cached.

use std::collections::HashMap;

use streaming_iterator::StreamingIterator;

use crate::convert::{adj_list_from_ws_with, AdjList, AdjMode};
use crate::error::{Error, Result};
use crate::wseq::{concat, succ_geq, Weight, WeightSeq};

/// One fully enumerated `B(k)`, stored flat with stride `k`.
#[derive(Debug, Clone)]
struct Table {
    order: usize,
    flat: Vec<Weight>,
    /// `qstart[q]` is the 0-based index of the first element whose second
    /// weight is `q`, for `1 <= q < order`. Entry 0 is unused.
    qstart: Vec<usize>,
}

impl Table {
    fn from_flat(order: usize, flat: Vec<Weight>) -> Table {
        debug_assert_eq!(flat.len() % order, 0);
        let mut qstart = vec![0; order.max(1)];
        if order >= 2 {
            // second weights are non-increasing; walk q downwards alongside
            let count = flat.len() / order;
            let mut idx = 0;
            for q in (1..order).rev() {
                while idx < count && (flat[idx * order + 1] as usize) > q {
                    idx += 1;
                }
                qstart[q] = idx;
            }
        }
        Table {
            order,
            flat,
            qstart,
        }
    }

    fn len(&self) -> usize {
        self.flat.len() / self.order
    }

    #[inline]
    fn get(&self, i: usize) -> &[Weight] {
        &self.flat[i * self.order..(i + 1) * self.order]
    }
}

/// Cached tables `B(1)..=B(L)` plus the derived start indices.
///
/// Immutable once built; share it by reference across streams and threads.
/// `B#(k)` is not stored separately: [`RootedCache::stripped`] slices past
/// the root weight of the flat table, which costs nothing.
#[derive(Debug, Clone)]
pub struct RootedCache {
    tables: Vec<Table>,
    adjacency: Option<HashMap<Vec<Weight>, AdjList>>,
}

/// Smallest accepted cache bound.
pub const MIN_CACHE_ORDER: usize = 4;

/// Builds `B(k)` for all `k <= max_order`.
///
/// `B(1)..B(4)` are written out directly; every larger table is produced by
/// the ordinary generator reading only the tables already built.
pub fn init_cache(max_order: usize) -> Result<RootedCache> {
    if max_order < MIN_CACHE_ORDER {
        return Err(Error::Config(format!(
            "cache bound must be at least {MIN_CACHE_ORDER}, got {max_order}"
        )));
    }
    if max_order > Weight::MAX as usize {
        return Err(Error::Config(format!(
            "cache bound {max_order} exceeds {}",
            Weight::MAX
        )));
    }
    let seeds: [&[Weight]; 4] = [
        &[1],
        &[2, 1],
        &[3, 2, 1, 3, 1, 1],
        &[4, 3, 2, 1, 4, 3, 1, 1, 4, 2, 1, 1, 4, 1, 1, 1],
    ];
    let mut cache = RootedCache {
        tables: seeds
            .iter()
            .enumerate()
            .map(|(i, flat)| Table::from_flat(i + 1, flat.to_vec()))
            .collect(),
        adjacency: None,
    };
    for k in 5..=max_order {
        let mut flat = Vec::new();
        let mut stream = rooted_trees(k, &cache)?;
        while let Some(s) = stream.next() {
            flat.extend_from_slice(s);
        }
        drop(stream);
        cache.tables.push(Table::from_flat(k, flat));
    }
    Ok(cache)
}

/// Like [`init_cache`], and also converts every cached sequence to its
/// adjacency list for use by [`crate::convert::assemble_adj`].
pub fn init_cache_with_adjacency(max_order: usize) -> Result<RootedCache> {
    let mut cache = init_cache(max_order)?;
    let mut adjacency = HashMap::new();
    for k in 1..=max_order {
        for s in cache.iter(k) {
            adjacency.insert(s.to_vec(), adj_list_from_ws_with(s, AdjMode::Rooted)?);
        }
    }
    cache.adjacency = Some(adjacency);
    Ok(cache)
}

impl RootedCache {
    /// The cache bound `L`.
    pub fn max_order(&self) -> usize {
        self.tables.len()
    }

    fn table(&self, k: usize) -> &Table {
        &self.tables[k - 1]
    }

    /// `|B(k)|`. Panics if `k` is not cached.
    pub fn len(&self, k: usize) -> usize {
        self.table(k).len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// The `i`-th (0-based) element of `B(k)`.
    pub fn get(&self, k: usize, i: usize) -> &[Weight] {
        self.table(k).get(i)
    }

    /// The `i`-th element of `B#(k)`, i.e. `B(k)[i]` without its root weight.
    pub fn stripped(&self, k: usize, i: usize) -> &[Weight] {
        &self.table(k).get(i)[1..]
    }

    pub fn iter(&self, k: usize) -> std::slice::ChunksExact<'_, Weight> {
        let t = self.table(k);
        t.flat.chunks_exact(t.order)
    }

    pub fn list(&self, k: usize) -> Vec<WeightSeq> {
        self.iter(k).map(WeightSeq::from_slice).collect()
    }

    pub fn adjacency(&self, s: &[Weight]) -> Option<&AdjList> {
        self.adjacency.as_ref()?.get(s)
    }

    pub fn has_adjacency(&self) -> bool {
        self.adjacency.is_some()
    }

    /// Heap bytes held by the sequence tables.
    pub fn table_bytes(&self) -> usize {
        self.tables
            .iter()
            .map(|t| t.flat.len() + t.qstart.len() * std::mem::size_of::<usize>())
            .sum()
    }
}

/// 1-based position in `B(n)` of the first sequence whose second weight is `q`.
pub fn rt_qstart(cache: &RootedCache, n: usize, q: usize) -> Result<usize> {
    if q < 1 || q >= n || n > cache.max_order() {
        return Err(Error::Domain(format!(
            "qstart needs 1 <= q < n <= {}, got n={n} q={q}",
            cache.max_order()
        )));
    }
    Ok(cache.table(n).qstart[q] + 1)
}

/// A pull-based stream of weight sequences held in a materialized list.
///
/// Only the reference generator uses this; production streams never hold
/// more than one output at a time.
#[derive(Debug, Clone)]
pub struct ListStream {
    items: Vec<Vec<Weight>>,
    pos: usize,
}

impl ListStream {
    pub fn new(items: Vec<Vec<Weight>>) -> Self {
        ListStream { items, pos: 0 }
    }
}

impl StreamingIterator for ListStream {
    type Item = [Weight];

    fn advance(&mut self) {
        if self.pos <= self.items.len() {
            self.pos += 1;
        }
    }

    fn get(&self) -> Option<&[Weight]> {
        self.items.get(self.pos.checked_sub(1)?).map(Vec::as_slice)
    }
}

fn reference_rooted(n: usize) -> Vec<Vec<Weight>> {
    if n == 1 {
        return vec![vec![1]];
    }
    (1..n).rev().flat_map(|q| reference_helper(n, q)).collect()
}

fn reference_helper(n: usize, q: usize) -> Vec<Vec<Weight>> {
    let mut out = Vec::new();
    for a in reference_rooted(q) {
        if q == n - 1 {
            out.push(concat(&[n as Weight], &a));
            continue;
        }
        for r in (1..=(n - q - 1).min(q)).rev() {
            for b in reference_helper(n - q, r) {
                if succ_geq(&a, &b[1..]) {
                    let mut s = concat(&[n as Weight], &a);
                    s.extend_from_slice(&b[1..]);
                    out.push(s);
                }
            }
        }
    }
    out
}

/// `B_q(n)` by plain recursion with a `≽` test on every candidate pair.
///
/// No cache and no shortcuts: this is the baseline the optimized
/// [`rt_helper`] is checked against. Exponential; keep `n` small.
pub fn rt_helper_ref(n: usize, q: usize) -> Result<ListStream> {
    if q < 1 || q >= n || n > Weight::MAX as usize {
        return Err(Error::Domain(format!("need 1 <= q < n, got n={n} q={q}")));
    }
    Ok(ListStream::new(reference_helper(n, q)))
}

/// The full `B(n)` from the reference recursion.
pub fn rooted_trees_ref(n: usize) -> Result<Vec<WeightSeq>> {
    if n == 0 || n > Weight::MAX as usize {
        return Err(Error::Domain(format!("order must be in 1..=255, got {n}")));
    }
    Ok(reference_rooted(n)
        .into_iter()
        .map(|v| WeightSeq::from_slice(&v))
        .collect())
}

/// Where the first subtree `a` comes from.
enum FirstSubtree<'c> {
    Cached { next: usize },
    Streamed(Box<RootedStream<'c>>),
}

/// Where the remaining forest `b#` comes from, per `a`.
#[derive(Clone, Copy)]
enum Tail {
    /// `q = n - 1`: nothing follows `a`.
    Empty,
    /// `q = n - 2`: a single leaf.
    Leaf,
    /// Every element of `B#(n - q)` from index `from`.
    Table { from: usize },
}

enum Branch<'c> {
    Star {
        done: bool,
    },
    /// `q = 2`: `n ⊕ (2 1)^t ⊕ 1^(n-1-2t)`, `t` counting down.
    Pairs {
        t: usize,
    },
    /// `a` followed by an unconditional tail. Covers `q = n-1`, `q = n-2`
    /// and the cross product for `q >= ⌊(n+1)/2⌋`.
    Cross {
        first: FirstSubtree<'c>,
        tail: Tail,
        have_a: bool,
        bi: usize,
    },
    /// `q = ⌊(n-1)/2⌋`: the k-th `a` pairs with `B(n-q)` from `offset + k`.
    Diagonal {
        offset: usize,
        ai: usize,
        bi: usize,
        started: bool,
    },
    /// `n - L <= q < ⌊(n-1)/2⌋`: scan `B(n-q)` from `RTqstart[n-q][q]` with a
    /// cursor that only moves forward as `a` decreases.
    Cursor {
        ai: usize,
        cursor: usize,
        bi: usize,
        started: bool,
    },
    /// `q < n - L`: `B(n-q)` is not cached, so recurse into `B_r(n-q)` for
    /// `r = q..1`, skipping the leading `b` with `¬(a ≽ b#)` when `r = q`.
    Nested {
        ai: usize,
        r: usize,
        sub: Option<Box<HelperStream<'c>>>,
        matched: bool,
    },
}

/// Stream over `B_q(n)`.
pub struct HelperStream<'c> {
    cache: &'c RootedCache,
    n: usize,
    q: usize,
    buf: Vec<Weight>,
    branch: Branch<'c>,
    valid: bool,
    exhausted: bool,
}

/// Optimized `B_q(n)`, backed by the cache.
///
/// Requires `1 <= q < n`, `q <= L` and `L >= ⌊n/2⌋ + 1`. Output is
/// identical, element for element, to [`rt_helper_ref`].
pub fn rt_helper(n: usize, q: usize, cache: &RootedCache) -> Result<HelperStream<'_>> {
    let l = cache.max_order();
    if q < 1 || q >= n {
        return Err(Error::Config(format!("need 1 <= q < n, got n={n} q={q}")));
    }
    if q > l || l < n / 2 + 1 {
        return Err(Error::Config(format!(
            "cache bound {l} too small for n={n} q={q} (need L >= q and L >= {})",
            n / 2 + 1
        )));
    }
    if n > Weight::MAX as usize {
        return Err(Error::Domain(format!("order {n} exceeds {}", Weight::MAX)));
    }
    Ok(HelperStream::cached(n, q, cache))
}

impl<'c> HelperStream<'c> {
    fn cached(n: usize, q: usize, cache: &'c RootedCache) -> Self {
        let l = cache.max_order();
        let cross = |tail| Branch::Cross {
            first: FirstSubtree::Cached { next: 0 },
            tail,
            have_a: false,
            bi: 0,
        };
        let branch = if q == 1 {
            Branch::Star { done: false }
        } else if q == 2 {
            Branch::Pairs { t: (n - 1) / 2 }
        } else if q == n - 1 {
            cross(Tail::Empty)
        } else if q == n - 2 {
            cross(Tail::Leaf)
        } else if q >= n.div_ceil(2) {
            cross(Tail::Table { from: 0 })
        } else if q == (n - 1) / 2 {
            let offset = if n.is_multiple_of(2) {
                cache.len(n / 2)
            } else {
                0
            };
            Branch::Diagonal {
                offset,
                ai: 0,
                bi: 0,
                started: false,
            }
        } else if q + l >= n {
            Branch::Cursor {
                ai: 0,
                cursor: cache.table(n - q).qstart[q],
                bi: 0,
                started: false,
            }
        } else {
            Branch::Nested {
                ai: 0,
                r: q,
                sub: None,
                matched: false,
            }
        };
        Self::with_branch(n, q, cache, branch)
    }

    /// `B_q(n)` for `q > L`, reading `a` from a nested stream over `B(q)`.
    /// Only reachable from [`rooted_trees`] when `n - 1 > L`; then
    /// `q > ⌊n/2⌋`, so `b` always comes from a cached table.
    fn streamed(n: usize, q: usize, cache: &'c RootedCache) -> Result<Self> {
        debug_assert!(q > cache.max_order() && 2 * q > n);
        let tail = if q == n - 1 {
            Tail::Empty
        } else if q == n - 2 {
            Tail::Leaf
        } else {
            Tail::Table { from: 0 }
        };
        let branch = Branch::Cross {
            first: FirstSubtree::Streamed(Box::new(rooted_trees(q, cache)?)),
            tail,
            have_a: false,
            bi: 0,
        };
        Ok(Self::with_branch(n, q, cache, branch))
    }

    fn with_branch(n: usize, q: usize, cache: &'c RootedCache, branch: Branch<'c>) -> Self {
        let mut buf = vec![1; n];
        buf[0] = n as Weight;
        HelperStream {
            cache,
            n,
            q,
            buf,
            branch,
            valid: false,
            exhausted: false,
        }
    }

    fn step(&mut self) -> bool {
        let HelperStream {
            cache,
            n,
            q,
            buf,
            branch,
            ..
        } = self;
        let (cache, n, q) = (*cache, *n, *q);
        match branch {
            Branch::Star { done } => {
                if *done {
                    return false;
                }
                *done = true;
                buf[1..].fill(1);
                true
            }
            Branch::Pairs { t } => {
                if *t == 0 {
                    return false;
                }
                for i in 0..*t {
                    buf[1 + 2 * i] = 2;
                    buf[2 + 2 * i] = 1;
                }
                buf[1 + 2 * *t..].fill(1);
                *t -= 1;
                true
            }
            Branch::Cross {
                first,
                tail,
                have_a,
                bi,
            } => loop {
                if *have_a {
                    match *tail {
                        Tail::Empty | Tail::Leaf => {
                            if *bi == 0 {
                                *bi = 1;
                                return true;
                            }
                        }
                        Tail::Table { from } => {
                            let m = n - q;
                            if from + *bi < cache.len(m) {
                                buf[1 + q..].copy_from_slice(cache.stripped(m, from + *bi));
                                *bi += 1;
                                return true;
                            }
                        }
                    }
                }
                let a = match first {
                    FirstSubtree::Cached { next } => {
                        if *next == cache.len(q) {
                            None
                        } else {
                            *next += 1;
                            Some(cache.get(q, *next - 1))
                        }
                    }
                    FirstSubtree::Streamed(stream) => stream.next(),
                };
                let Some(a) = a else { return false };
                buf[1..=q].copy_from_slice(a);
                if let Tail::Leaf = tail {
                    buf[n - 1] = 1;
                }
                *have_a = true;
                *bi = 0;
            },
            Branch::Diagonal {
                offset,
                ai,
                bi,
                started,
            } => {
                let m = n - q;
                if *started {
                    *bi += 1;
                    if *bi == cache.len(m) {
                        *ai += 1;
                        *bi = *offset + *ai;
                        if *ai == cache.len(q) {
                            return false;
                        }
                        buf[1..=q].copy_from_slice(cache.get(q, *ai));
                    }
                } else {
                    *started = true;
                    *bi = *offset;
                    buf[1..=q].copy_from_slice(cache.get(q, 0));
                }
                debug_assert!(succ_geq(cache.get(q, *ai), cache.stripped(m, *bi)));
                buf[1 + q..].copy_from_slice(cache.stripped(m, *bi));
                true
            }
            Branch::Cursor {
                ai,
                cursor,
                bi,
                started,
            } => {
                let m = n - q;
                if *started {
                    *bi += 1;
                    if *bi == cache.len(m) {
                        *ai += 1;
                        if *ai == cache.len(q) {
                            return false;
                        }
                    }
                } else {
                    *started = true;
                    *bi = cache.len(m);
                }
                if *bi == cache.len(m) {
                    // new a: move the cursor to the first b# with a ≽ b#;
                    // the last b (a star) always passes, since q >= 2
                    let a = cache.get(q, *ai);
                    while !succ_geq(a, cache.stripped(m, *cursor)) {
                        *cursor += 1;
                    }
                    debug_assert!(*cursor == 0 || !succ_geq(a, cache.stripped(m, *cursor - 1)));
                    buf[1..=q].copy_from_slice(a);
                    *bi = *cursor;
                }
                buf[1 + q..].copy_from_slice(cache.stripped(m, *bi));
                true
            }
            Branch::Nested {
                ai,
                r,
                sub,
                matched,
            } => loop {
                if let Some(stream) = sub {
                    let a = cache.get(q, *ai);
                    while let Some(b) = stream.next() {
                        let forest = &b[1..];
                        if !*matched {
                            if !succ_geq(a, forest) {
                                continue;
                            }
                            *matched = true;
                        }
                        buf[1..=q].copy_from_slice(a);
                        buf[1 + q..].copy_from_slice(forest);
                        return true;
                    }
                    *sub = None;
                    if *r == 1 {
                        *ai += 1;
                        *r = q;
                    } else {
                        *r -= 1;
                    }
                }
                if *ai == cache.len(q) {
                    return false;
                }
                *sub = Some(Box::new(HelperStream::cached(n - q, *r, cache)));
                // only the r = q group can contain b# that beat a
                *matched = *r < q;
            },
        }
    }
}

impl StreamingIterator for HelperStream<'_> {
    type Item = [Weight];

    fn advance(&mut self) {
        self.valid = !self.exhausted && self.step();
        self.exhausted = !self.valid;
    }

    fn get(&self) -> Option<&[Weight]> {
        self.valid.then_some(self.buf.as_slice())
    }
}

/// Stream over `B(n)`, or over the part of it whose second weight lies in
/// a given range.
pub struct RootedStream<'c> {
    cache: &'c RootedCache,
    n: usize,
    /// Next `q` to open; groups run from `q_hi` down to `q_lo`.
    next_q: usize,
    q_lo: usize,
    current: Option<HelperStream<'c>>,
    /// `n = 1` progress: 0 before, 1 while `[1]` is current, 2 after.
    single: Option<u8>,
}

fn check_rooted(n: usize, cache: &RootedCache) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    if n > Weight::MAX as usize {
        return Err(Error::Domain(format!("order {n} exceeds {}", Weight::MAX)));
    }
    let l = cache.max_order();
    if n >= 2 && l < n / 2 + 1 {
        return Err(Error::Config(format!(
            "cache bound {l} too small for order {n} (need at least {})",
            n / 2 + 1
        )));
    }
    Ok(())
}

/// All rooted trees of order `n`, as canonical weight sequences in
/// non-increasing order.
///
/// Needs `L >= ⌊n/2⌋ + 1`. When `n - 1 > L` the groups with `q > L` draw
/// their first subtree from a nested stream over `B(q)`.
pub fn rooted_trees(n: usize, cache: &RootedCache) -> Result<RootedStream<'_>> {
    check_rooted(n, cache)?;
    Ok(RootedStream::range(n, n.saturating_sub(1), 1, cache))
}

/// The groups `B_q(n)` for `q_hi >= q >= q_lo`, concatenated.
///
/// Splitting `1..n` into disjoint ranges and concatenating the streams in
/// descending order reproduces [`rooted_trees`].
pub fn rooted_trees_partition(
    n: usize,
    q_hi: usize,
    q_lo: usize,
    cache: &RootedCache,
) -> Result<RootedStream<'_>> {
    check_rooted(n, cache)?;
    if n == 1 || q_lo < 1 || q_hi >= n || q_lo > q_hi {
        return Err(Error::Domain(format!(
            "invalid partition {q_hi}..={q_lo} of order {n}"
        )));
    }
    Ok(RootedStream::range(n, q_hi, q_lo, cache))
}

impl<'c> RootedStream<'c> {
    pub(crate) fn range(n: usize, q_hi: usize, q_lo: usize, cache: &'c RootedCache) -> Self {
        RootedStream {
            cache,
            n,
            next_q: q_hi,
            q_lo,
            current: None,
            single: (n == 1).then_some(0),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }
}

impl StreamingIterator for RootedStream<'_> {
    type Item = [Weight];

    fn advance(&mut self) {
        if let Some(state) = &mut self.single {
            *state = (*state + 1).min(2);
            return;
        }
        loop {
            if let Some(stream) = &mut self.current {
                stream.advance();
                if stream.get().is_some() {
                    return;
                }
                self.current = None;
            }
            if self.next_q < self.q_lo {
                return;
            }
            let q = self.next_q;
            self.next_q -= 1;
            self.current = Some(if q <= self.cache.max_order() {
                HelperStream::cached(self.n, q, self.cache)
            } else {
                HelperStream::streamed(self.n, q, self.cache)
                    .expect("order already checked against the cache")
            });
        }
    }

    fn get(&self) -> Option<&[Weight]> {
        match self.single {
            Some(1) => Some(&[1]),
            Some(_) => None,
            None => self.current.as_ref()?.get(),
        }
    }
}

/// `|B(n)|`, by running the generator without keeping its output.
pub fn count_rooted(n: usize, cache: &RootedCache) -> Result<u64> {
    Ok(rooted_trees(n, cache)?.count() as u64)
}

/// Smallest cache bound that lets every helper call for order `n` hit a table
/// for its first subtree and diagonal group.
pub fn min_cache_order(n: usize) -> usize {
    (n / 2 + 1).max(MIN_CACHE_ORDER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wseq::{decode_str, is_canonical, lex_ge};

    fn collect<S: StreamingIterator<Item = [Weight]>>(mut s: S) -> Vec<Vec<Weight>> {
        let mut out = Vec::new();
        while let Some(x) = s.next() {
            out.push(x.to_vec());
        }
        out
    }

    fn seqs(texts: &[&str]) -> Vec<Vec<Weight>> {
        texts
            .iter()
            .map(|t| decode_str(t).unwrap().into_vec())
            .collect()
    }

    const B5: [&str; 9] = [
        "54321", "54311", "54211", "54111", "53211", "53111", "52121", "52111", "51111",
    ];

    #[test]
    fn init_cache_small_tables() {
        let cache = init_cache(5).unwrap();
        assert_eq!(cache.list(1), vec![WeightSeq::from_slice(&[1])]);
        assert_eq!(collect_cache(&cache, 2), seqs(&["21"]));
        assert_eq!(collect_cache(&cache, 3), seqs(&["321", "311"]));
        assert_eq!(
            collect_cache(&cache, 4),
            seqs(&["4321", "4311", "4211", "4111"])
        );
        assert_eq!(collect_cache(&cache, 5), seqs(&B5));
    }

    fn collect_cache(cache: &RootedCache, k: usize) -> Vec<Vec<Weight>> {
        cache.iter(k).map(<[Weight]>::to_vec).collect()
    }

    #[test]
    fn init_cache_rejects_small_bound() {
        assert!(matches!(init_cache(3), Err(Error::Config(_))));
        assert!(matches!(init_cache(0), Err(Error::Config(_))));
    }

    #[test]
    fn table_sizes_follow_rooted_counts() {
        // A000081
        let expected = [1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766];
        let cache = init_cache(12).unwrap();
        for (k, &c) in expected.iter().enumerate() {
            assert_eq!(cache.len(k + 1), c, "B({})", k + 1);
        }
    }

    #[test]
    fn qstart_examples() {
        let cache = init_cache(5).unwrap();
        assert_eq!(rt_qstart(&cache, 5, 4).unwrap(), 1);
        assert_eq!(rt_qstart(&cache, 5, 3).unwrap(), 5);
        assert_eq!(rt_qstart(&cache, 5, 2).unwrap(), 7);
        assert_eq!(rt_qstart(&cache, 5, 1).unwrap(), 9);
        assert_eq!(rt_qstart(&cache, 2, 1).unwrap(), 1);
        assert!(rt_qstart(&cache, 5, 5).is_err());
        assert!(rt_qstart(&cache, 6, 1).is_err());
        assert!(rt_qstart(&cache, 5, 0).is_err());
    }

    #[test]
    fn qstart_matches_group_sizes() {
        let cache = init_cache(10).unwrap();
        for n in 2..=10 {
            for q in 1..n {
                let before: usize = (q + 1..n)
                    .map(|p| rt_helper(n, p, &cache).unwrap().count())
                    .sum();
                assert_eq!(rt_qstart(&cache, n, q).unwrap(), before + 1, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn reference_helper_examples() {
        assert_eq!(
            collect(rt_helper_ref(5, 4).unwrap()),
            seqs(&["54321", "54311", "54211", "54111"])
        );
        assert_eq!(
            collect(rt_helper_ref(5, 2).unwrap()),
            seqs(&["52121", "52111"])
        );
        assert_eq!(
            collect(rt_helper_ref(8, 3).unwrap()),
            seqs(&[
                "83213211", "83213111", "83212121", "83212111", "83211111", "83113111", "83112121",
                "83112111", "83111111"
            ])
        );
        assert!(rt_helper_ref(5, 5).is_err());
        assert!(rt_helper_ref(5, 0).is_err());
    }

    #[test]
    fn helper_closed_forms() {
        let cache = init_cache(6).unwrap();
        assert_eq!(
            collect(rt_helper(6, 2, &cache).unwrap()),
            seqs(&["621211", "621111"])
        );
        assert_eq!(
            collect(rt_helper(7, 1, &cache).unwrap()),
            seqs(&["7111111"])
        );
        assert_eq!(
            collect(rt_helper(7, 2, &cache).unwrap()),
            seqs(&["7212121", "7212111", "7211111"])
        );
        assert_eq!(collect(rt_helper(3, 2, &cache).unwrap()), seqs(&["321"]));
    }

    #[test]
    fn helper_rejects_bad_configuration() {
        let cache = init_cache(5).unwrap();
        assert!(matches!(rt_helper(12, 3, &cache), Err(Error::Config(_))));
        assert!(matches!(rt_helper(8, 6, &cache), Err(Error::Config(_))));
        assert!(matches!(rt_helper(5, 5, &cache), Err(Error::Config(_))));
        assert!(matches!(rt_helper(5, 0, &cache), Err(Error::Config(_))));
    }

    #[test]
    fn helper_matches_reference_every_branch() {
        // L = 6 exercises the cursor and nested branches for n up to 12
        for l in [6, 8, 13] {
            let cache = init_cache(l).unwrap();
            for n in 2..=(2 * l - 1).min(13) {
                for q in 1..n {
                    if q > l || l < n / 2 + 1 {
                        continue;
                    }
                    let fast = collect(rt_helper(n, q, &cache).unwrap());
                    let slow = collect(rt_helper_ref(n, q).unwrap());
                    assert_eq!(fast, slow, "L={l} n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn rooted_examples() {
        let cache = init_cache(4).unwrap();
        assert_eq!(
            collect(rooted_trees(3, &cache).unwrap()),
            seqs(&["321", "311"])
        );
        assert_eq!(collect(rooted_trees(5, &cache).unwrap()), seqs(&B5));
        assert_eq!(collect(rooted_trees(1, &cache).unwrap()), seqs(&["1"]));
        assert_eq!(collect(rooted_trees(2, &cache).unwrap()), seqs(&["21"]));
        assert!(matches!(rooted_trees(0, &cache), Err(Error::Domain(_))));
        assert!(matches!(rooted_trees(9, &cache), Err(Error::Config(_))));
    }

    #[test]
    fn counts() {
        let cache = init_cache(6).unwrap();
        assert_eq!(count_rooted(1, &cache).unwrap(), 1);
        assert_eq!(count_rooted(4, &cache).unwrap(), 4);
        assert_eq!(count_rooted(10, &cache).unwrap(), 719);
    }

    #[test]
    fn uncached_first_subtree() {
        // n - 1 > L: groups q = 11..6 read a from nested streams
        let small = init_cache(6).unwrap();
        let big = init_cache(11).unwrap();
        let a = collect(rooted_trees(11, &small).unwrap());
        let b = collect(rooted_trees(11, &big).unwrap());
        assert_eq!(a.len(), 1842);
        assert_eq!(a, b);
    }

    #[test]
    fn output_is_sorted_canonical_and_partitioned() {
        let cache = init_cache(7).unwrap();
        for n in 1..=12 {
            let all = collect(rooted_trees(n, &cache).unwrap());
            for w in all.windows(2) {
                assert!(lex_ge(&w[0], &w[1]) && w[0] != w[1], "n={n}");
            }
            for s in &all {
                assert!(is_canonical(s).unwrap());
            }
            if n > 1 {
                let mut total = 0;
                for q in 1..n {
                    let part = collect(rooted_trees_partition(n, q, q, &cache).unwrap());
                    assert!(part.iter().all(|s| s[1] as usize == q));
                    total += part.len();
                }
                assert_eq!(total, all.len());
            }
        }
    }

    #[test]
    fn stream_is_fused() {
        let cache = init_cache(4).unwrap();
        let mut s = rooted_trees(1, &cache).unwrap();
        assert_eq!(s.next(), Some(&[1u8][..]));
        assert_eq!(s.next(), None);
        assert_eq!(s.next(), None);
        let mut s = rooted_trees(3, &cache).unwrap();
        assert!(s.next().is_some() && s.next().is_some());
        assert!(s.next().is_none() && s.next().is_none());
    }
}
