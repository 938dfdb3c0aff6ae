//! Streaming enumeration of free trees.
//!
//! A free tree with one centroid is the rooted tree hung from that centroid,
//! which means every subtree of the root has order at most `⌊(n-1)/2⌋`: the
//! groups `B_q(n)` for `q <= ⌊(n-1)/2⌋`. A tree with two centroids splits
//! at the centroid edge into two rooted trees of order `n/2`, listed larger
//! first. Unicentroidal sequences start with `n` and bicentroidal ones with
//! `n/2`, so emitting the first kind before the second keeps the whole
//! stream in non-increasing order.

use streaming_iterator::StreamingIterator;

use crate::error::{Error, Result};
use crate::rootedgen::{RootedCache, RootedStream};
use crate::wseq::{Weight, WeightSeq};

/// Which centroid structure a free weight sequence encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Centroids {
    One,
    Two,
}

/// A free weight sequence tagged with its centroid kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeTreeSeq {
    pub seq: WeightSeq,
    pub kind: Centroids,
}

impl FreeTreeSeq {
    pub fn classify(seq: WeightSeq) -> Self {
        let kind = if seq.len().is_multiple_of(2) && 2 * seq[0] as usize == seq.len() {
            Centroids::Two
        } else {
            Centroids::One
        };
        FreeTreeSeq { seq, kind }
    }
}

fn check_free(n: usize, cache: &RootedCache) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    if n > Weight::MAX as usize {
        return Err(Error::Domain(format!("order {n} exceeds {}", Weight::MAX)));
    }
    if cache.max_order() < n / 2 + 1 {
        return Err(Error::Config(format!(
            "cache bound {} too small for order {n} (need at least {})",
            cache.max_order(),
            n / 2 + 1
        )));
    }
    Ok(())
}

/// Unicentroidal free trees of order `n`.
pub fn uft(n: usize, cache: &RootedCache) -> Result<RootedStream<'_>> {
    check_free(n, cache)?;
    Ok(RootedStream::range(n, (n - 1) / 2, 1, cache))
}

/// Pairs `a1 ⊕ a2` of rooted trees of order `n/2` with `a1 >= a2`.
///
/// Because `B(n/2)` is sorted, `a1 >= a2` holds exactly when `a2` sits at or
/// after `a1` in the table, so the inner loop just starts at `a1`'s index.
pub struct BftStream<'c> {
    cache: &'c RootedCache,
    half: usize,
    i1: usize,
    i1_end: usize,
    i2: usize,
    buf: Vec<Weight>,
    valid: bool,
    started: bool,
}

impl<'c> BftStream<'c> {
    fn range(n: usize, i1: usize, i1_end: usize, cache: &'c RootedCache) -> Self {
        BftStream {
            cache,
            half: n / 2,
            i1,
            i1_end,
            i2: i1,
            buf: vec![0; n],
            valid: false,
            started: false,
        }
    }
}

impl StreamingIterator for BftStream<'_> {
    type Item = [Weight];

    fn advance(&mut self) {
        let h = self.half;
        let count = self.cache.len(h);
        if self.started {
            if self.i1 >= self.i1_end {
                self.valid = false;
                return;
            }
            self.i2 += 1;
            if self.i2 == count {
                self.i1 += 1;
                self.i2 = self.i1;
            }
        } else {
            self.started = true;
        }
        self.valid = self.i1 < self.i1_end;
        if !self.valid {
            return;
        }
        if self.i2 == self.i1 {
            self.buf[..h].copy_from_slice(self.cache.get(h, self.i1));
        }
        self.buf[h..].copy_from_slice(self.cache.get(h, self.i2));
        debug_assert!(crate::wseq::lex_ge(&self.buf[..h], &self.buf[h..]));
    }

    fn get(&self) -> Option<&[Weight]> {
        self.valid.then_some(self.buf.as_slice())
    }
}

/// Bicentroidal free trees of order `n`; `n` must be even.
pub fn bft(n: usize, cache: &RootedCache) -> Result<BftStream<'_>> {
    check_free(n, cache)?;
    if !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "bicentroidal trees need even order, got {n}"
        )));
    }
    Ok(BftStream::range(n, 0, cache.len(n / 2), cache))
}

/// A contiguous run of the free-tree stream: part of the unicentroidal
/// groups, part of the bicentroidal pairs, or both.
pub struct FreeStream<'c> {
    uni: Option<RootedStream<'c>>,
    bi: Option<BftStream<'c>>,
    in_bi: bool,
}

impl StreamingIterator for FreeStream<'_> {
    type Item = [Weight];

    fn advance(&mut self) {
        if !self.in_bi {
            if let Some(uni) = &mut self.uni {
                uni.advance();
                if uni.get().is_some() {
                    return;
                }
            }
            self.in_bi = true;
        }
        if let Some(bi) = &mut self.bi {
            bi.advance();
        }
    }

    fn get(&self) -> Option<&[Weight]> {
        if self.in_bi {
            self.bi.as_ref()?.get()
        } else {
            self.uni.as_ref()?.get()
        }
    }
}

/// All free trees of order `n`: unicentroidal first, then bicentroidal.
pub fn free_trees(n: usize, cache: &RootedCache) -> Result<FreeStream<'_>> {
    let uni = uft(n, cache)?;
    let bi = n
        .is_multiple_of(2)
        .then(|| BftStream::range(n, 0, cache.len(n / 2), cache));
    Ok(FreeStream {
        uni: Some(uni),
        bi,
        in_bi: false,
    })
}

/// Splits [`free_trees`] into disjoint streams whose concatenation, in
/// order, is the full stream: one per unicentroidal group, and the
/// bicentroidal pairs cut into at most `bi_chunks` runs of `a1`.
pub fn free_trees_partitions(
    n: usize,
    bi_chunks: usize,
    cache: &RootedCache,
) -> Result<Vec<FreeStream<'_>>> {
    check_free(n, cache)?;
    let mut parts = Vec::new();
    if n <= 2 {
        parts.push(free_trees(n, cache)?);
        return Ok(parts);
    }
    for q in (1..=(n - 1) / 2).rev() {
        parts.push(FreeStream {
            uni: Some(RootedStream::range(n, q, q, cache)),
            bi: None,
            in_bi: false,
        });
    }
    if n.is_multiple_of(2) {
        let count = cache.len(n / 2);
        let chunks = bi_chunks.clamp(1, count);
        // later a1 have fewer partners; cut by pair count, not by a1 count
        let total = count * (count + 1) / 2;
        let mut lo = 0;
        let mut acc = 0;
        for c in 1..=chunks {
            let target = total * c / chunks;
            let mut hi = lo;
            while hi < count && (acc < target || hi == lo) {
                acc += count - hi;
                hi += 1;
            }
            if c == chunks {
                hi = count;
            }
            if hi > lo {
                parts.push(FreeStream {
                    uni: None,
                    bi: Some(BftStream::range(n, lo, hi, cache)),
                    in_bi: true,
                });
            }
            lo = hi;
        }
    }
    Ok(parts)
}

/// `|F(n)|`, by running the generator without keeping its output.
pub fn count_free(n: usize, cache: &RootedCache) -> Result<u64> {
    Ok(free_trees(n, cache)?.count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootedgen::init_cache;
    use crate::wseq::decode_str;

    fn collect<S: StreamingIterator<Item = [Weight]>>(mut s: S) -> Vec<String> {
        let mut out = Vec::new();
        while let Some(x) = s.next() {
            out.push(crate::wseq::encode_str(x).unwrap());
        }
        out
    }

    const FU8: [&str; 13] = [
        "83213211", "83213111", "83212121", "83212111", "83211111", "83113111", "83112121",
        "83112111", "83111111", "82121211", "82121111", "82111111", "81111111",
    ];
    const FB8: [&str; 10] = [
        "43214321", "43214311", "43214211", "43214111", "43114311", "43114211", "43114111",
        "42114211", "42114111", "41114111",
    ];

    #[test]
    fn uft_examples() {
        let cache = init_cache(5).unwrap();
        assert_eq!(collect(uft(8, &cache).unwrap()), FU8);
        assert!(collect(uft(2, &cache).unwrap()).is_empty());
        assert_eq!(collect(uft(1, &cache).unwrap()), ["1"]);
        assert!(uft(0, &cache).is_err());
    }

    #[test]
    fn bft_examples() {
        let cache = init_cache(5).unwrap();
        assert_eq!(collect(bft(8, &cache).unwrap()), FB8);
        assert_eq!(collect(bft(2, &cache).unwrap()), ["11"]);
        assert!(collect(bft(8, &cache).unwrap()).contains(&"43214321".to_string()));
        assert!(matches!(bft(7, &cache), Err(Error::Domain(_))));
    }

    #[test]
    fn free_examples() {
        let cache = init_cache(5).unwrap();
        let f8 = collect(free_trees(8, &cache).unwrap());
        assert_eq!(f8.len(), 23);
        assert_eq!(&f8[..13], FU8);
        assert_eq!(&f8[13..], FB8);
        assert_eq!(collect(free_trees(1, &cache).unwrap()), ["1"]);
        assert_eq!(collect(free_trees(2, &cache).unwrap()), ["11"]);
        assert_eq!(collect(free_trees(3, &cache).unwrap()), ["311"]);
        assert_eq!(collect(free_trees(4, &cache).unwrap()), ["4111", "2121"]);
        assert!(matches!(free_trees(0, &cache), Err(Error::Domain(_))));
        assert!(matches!(free_trees(10, &cache), Err(Error::Config(_))));
    }

    #[test]
    fn counts() {
        // A000055
        let expected = [1u64, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159];
        let cache = init_cache(8).unwrap();
        for (i, &c) in expected.iter().enumerate() {
            assert_eq!(count_free(i + 1, &cache).unwrap(), c, "n={}", i + 1);
        }
    }

    #[test]
    fn partitions_concatenate_to_full_stream() {
        let cache = init_cache(8).unwrap();
        for n in 1..=14 {
            let full = collect(free_trees(n, &cache).unwrap());
            for chunks in [1, 3, 50] {
                let joined: Vec<String> = free_trees_partitions(n, chunks, &cache)
                    .unwrap()
                    .into_iter()
                    .flat_map(collect)
                    .collect();
                assert_eq!(joined, full, "n={n} chunks={chunks}");
            }
        }
    }

    #[test]
    fn classify() {
        let two = FreeTreeSeq::classify(decode_str("43214321").unwrap());
        assert_eq!(two.kind, Centroids::Two);
        let one = FreeTreeSeq::classify(decode_str("83213211").unwrap());
        assert_eq!(one.kind, Centroids::One);
        assert_eq!(
            FreeTreeSeq::classify(decode_str("11").unwrap()).kind,
            Centroids::Two
        );
        assert_eq!(
            FreeTreeSeq::classify(decode_str("1").unwrap()).kind,
            Centroids::One
        );
    }
}
