//! Weight sequences: the value type, orderings, text encodings and the
//! structural predicates.
//!
//! The ordering used throughout is plain lexicographic order in which a
//! proper prefix sorts *below* its extensions. That is exactly the ordering
//! of Rust slices, so [`lex_ge`] delegates to `<[u8] as Ord>::cmp`, which
//! compares without allocating and stops at the first differing element.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A single vertex weight. Orders up to 255 are representable.
pub type Weight = u8;

/// Largest weight the single-character encoding can represent.
pub const MAX_CHAR_WEIGHT: u32 = 35;

/// An owned, non-empty sequence of positive weights.
///
/// Construction checks positivity and non-emptiness only. Whether the
/// sequence describes a tree is a separate question ([`validate_tree_ws`]),
/// since forest tails (`b#`) are weight sequences too.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightSeq(Vec<Weight>);

impl WeightSeq {
    pub fn new(weights: Vec<Weight>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(pos) = weights.iter().position(|&w| w == 0) {
            return Err(Error::Parse { ch: '0', pos });
        }
        Ok(WeightSeq(weights))
    }

    /// Copies a slice that is already known to be valid, such as a stream item.
    pub fn from_slice(weights: &[Weight]) -> Self {
        debug_assert!(!weights.is_empty() && weights.iter().all(|&w| w > 0));
        WeightSeq(weights.to_vec())
    }

    pub fn as_slice(&self) -> &[Weight] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Weight> {
        self.0
    }

    pub fn concat(&self, other: &WeightSeq) -> WeightSeq {
        WeightSeq(concat(&self.0, &other.0))
    }

    pub fn strip_root(&self) -> Result<WeightSeq> {
        strip_root(&self.0).map(WeightSeq::from_slice)
    }

    pub fn encode(&self) -> Result<String> {
        encode_str(&self.0)
    }

    /// Single-character encoding when every weight fits, decimal otherwise.
    pub fn encode_any(&self) -> String {
        encode_str(&self.0).unwrap_or_else(|_| encode_decimal(&self.0))
    }
}

impl Deref for WeightSeq {
    type Target = [Weight];

    fn deref(&self) -> &[Weight] {
        &self.0
    }
}

impl TryFrom<Vec<Weight>> for WeightSeq {
    type Error = Error;

    fn try_from(v: Vec<Weight>) -> Result<Self> {
        WeightSeq::new(v)
    }
}

impl FromStr for WeightSeq {
    type Err = Error;

    /// Accepts both the character encoding and the dotted decimal fallback.
    fn from_str(s: &str) -> Result<Self> {
        if s.contains('.') {
            decode_decimal(s)
        } else {
            decode_str(s)
        }
    }
}

impl fmt::Display for WeightSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode_any())
    }
}

impl fmt::Debug for WeightSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightSeq({:?})", self.0)
    }
}

pub fn concat(s: &[Weight], t: &[Weight]) -> Vec<Weight> {
    let mut out = Vec::with_capacity(s.len() + t.len());
    out.extend_from_slice(s);
    out.extend_from_slice(t);
    out
}

pub fn lex_cmp(s: &[Weight], t: &[Weight]) -> Ordering {
    s.cmp(t)
}

/// `s >= t`: either the first difference favours `s`, or `t` is a prefix of `s`.
#[inline]
pub fn lex_ge(s: &[Weight], t: &[Weight]) -> bool {
    s.cmp(t) != Ordering::Less
}

/// `a ≽ t`: `a >= t`, or `a` is a prefix of `t`.
///
/// This is the gate deciding whether `a` may precede the forest `t` as the
/// first subtree of a canonically ordered root.
#[inline]
pub fn succ_geq(a: &[Weight], t: &[Weight]) -> bool {
    lex_ge(a, t) || t.starts_with(a)
}

pub fn strip_root(s: &[Weight]) -> Result<&[Weight]> {
    if s.len() < 2 {
        return Err(Error::Empty);
    }
    Ok(&s[1..])
}

fn weight_char(w: Weight) -> Result<char> {
    match w {
        1..=9 => Ok((b'0' + w) as char),
        10..=35 => Ok((b'A' + (w - 10)) as char),
        _ => Err(Error::EncodingRange { weight: w as u32 }),
    }
}

/// Digits `1`-`9` for weights up to nine, then `A`-`Z` for 10 to 35.
pub fn encode_str(s: &[Weight]) -> Result<String> {
    s.iter().map(|&w| weight_char(w)).collect()
}

/// Writes the encoding into `out` without allocating. `s` must be encodable.
pub fn encode_into(s: &[Weight], out: &mut Vec<u8>) -> Result<()> {
    for &w in s {
        out.push(weight_char(w)? as u8);
    }
    Ok(())
}

pub fn decode_str(text: &str) -> Result<WeightSeq> {
    let weights = text
        .chars()
        .enumerate()
        .map(|(pos, ch)| match ch {
            '1'..='9' => Ok(ch as u8 - b'0'),
            'A'..='Z' => Ok(ch as u8 - b'A' + 10),
            _ => Err(Error::Parse { ch, pos }),
        })
        .collect::<Result<Vec<_>>>()?;
    WeightSeq::new(weights)
}

/// Fallback for orders above 35: decimal weights joined by `.`.
pub fn encode_decimal(s: &[Weight]) -> String {
    let mut out = String::with_capacity(s.len() * 3);
    for (i, w) in s.iter().enumerate() {
        if i > 0 {
            out.push('.');
        }
        out.push_str(&w.to_string());
    }
    out
}

pub fn decode_decimal(text: &str) -> Result<WeightSeq> {
    let mut pos = 0;
    let mut weights = Vec::new();
    for field in text.split('.') {
        let w: Weight = field.parse().map_err(|_| Error::Parse {
            ch: field.chars().next().unwrap_or('.'),
            pos,
        })?;
        weights.push(w);
        pos += field.len() + 1;
    }
    WeightSeq::new(weights)
}

/// Splits a forest weight sequence into its consecutive tree segments.
///
/// Yields `(start, len)` pairs. Stops early (returning `None`) if a segment
/// overruns the slice, so callers can detect malformed input.
pub fn forest_segments(forest: &[Weight]) -> Option<Vec<(usize, usize)>> {
    let mut segs = Vec::new();
    let mut p = 0;
    while p < forest.len() {
        let len = forest[p] as usize;
        if len == 0 || p + len > forest.len() {
            return None;
        }
        segs.push((p, len));
        p += len;
    }
    Some(segs)
}

/// True iff `s` is the weight sequence of some ordered tree.
pub fn validate_tree_ws(s: &[Weight]) -> bool {
    // Every vertex's segment must fit inside its parent's segment, and the
    // children of a vertex must tile the rest of its segment exactly.
    if s.is_empty() || s[0] as usize != s.len() {
        return false;
    }
    let mut ends: Vec<usize> = Vec::with_capacity(s.len());
    for (k, &w) in s.iter().enumerate() {
        while let Some(&end) = ends.last() {
            if k < end {
                break;
            }
            ends.pop();
        }
        let end = k + w as usize;
        if w == 0 || end > s.len() {
            return false;
        }
        if let Some(&parent_end) = ends.last() {
            if end > parent_end {
                return false;
            }
        }
        ends.push(end);
    }
    true
}

/// Child segments `(start, len)` of the vertex at `k` in a valid tree sequence.
pub fn child_segments(s: &[Weight], k: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    let end = k + s[k] as usize;
    let mut j = k + 1;
    std::iter::from_fn(move || {
        if j < end {
            let len = s[j] as usize;
            let seg = (j, len);
            j += len;
            Some(seg)
        } else {
            None
        }
    })
}

/// True iff every vertex's child segments are non-increasing left to right.
pub fn is_canonical(s: &[Weight]) -> Result<bool> {
    if !validate_tree_ws(s) {
        return Err(Error::Structure(format!(
            "not a tree weight sequence: {}",
            encode_decimal(s)
        )));
    }
    for k in 0..s.len() {
        let mut prev: Option<&[Weight]> = None;
        for (start, len) in child_segments(s, k) {
            let seg = &s[start..start + len];
            if let Some(p) = prev {
                if !lex_ge(p, seg) {
                    return Ok(false);
                }
            }
            prev = Some(seg);
        }
    }
    Ok(true)
}
