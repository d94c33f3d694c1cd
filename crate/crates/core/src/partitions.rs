//! Party-subset combinatorics: bipartition families, the `gamma(k)` level
//! counter, depth families and the multi-index swap.
//!
//! Parties are numbered from 0 internally and labelled `A`, `B`, `C`, ... in
//! all text I/O. A subset is stored as a bitmask, so at most
//! [`MAX_PARTIES`] parties are supported.

use std::fmt;

use crate::error::{Error, Result};
use crate::tensor::HilbertDims;

pub const MAX_PARTIES: usize = 12;

/// A set of parties, bit `i` set when party `i` is a member.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct PartySubset(u16);

impl PartySubset {
    pub fn from_parties(parties: &[usize], n: usize) -> Result<Self> {
        check_party_count(n)?;
        let mut bits = 0u16;
        for &p in parties {
            if p >= n {
                return Err(Error::PartyOutOfRange { party: p, parties: n });
            }
            bits |= 1 << p;
        }
        if bits == 0 {
            return Err(Error::EmptySubset);
        }
        Ok(PartySubset(bits))
    }

    pub fn singleton(party: usize) -> Self {
        assert!(party < MAX_PARTIES);
        PartySubset(1 << party)
    }

    pub fn from_bits(bits: u16) -> Self {
        PartySubset(bits)
    }

    pub fn full(n: usize) -> Self {
        PartySubset(((1u32 << n) - 1) as u16)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, party: usize) -> bool {
        party < 16 && self.0 & (1 << party) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in ascending order.
    pub fn parties(self) -> Vec<usize> {
        (0..16).filter(|&i| self.contains(i)).collect()
    }

    pub fn complement(self, n: usize) -> Self {
        PartySubset(!self.0 & Self::full(n).0)
    }

    /// Representative of the bipartition `self | complement`: the side that
    /// contains party `A`.
    pub fn canonical(self, n: usize) -> Self {
        if self.contains(0) {
            self
        } else {
            self.complement(n)
        }
    }

    /// Whether this subset is a proper, nonempty subset of `n` parties.
    pub fn is_proper(self, n: usize) -> bool {
        !self.is_empty() && self.0 & !Self::full(n).0 == 0 && self != Self::full(n)
    }

    /// Letters of the members, e.g. `"AC"`.
    pub fn label(self) -> String {
        self.parties().into_iter().map(party_letter).collect()
    }

    /// Bipartition notation, e.g. `"B|AC"`.
    pub fn bipartition_label(self, n: usize) -> String {
        format!("{}|{}", self.label(), self.complement(n).label())
    }

    /// Parses `"AB"` or `"A|BC"` (case-insensitive). In the bipartition form
    /// the two sides must be disjoint and cover all `n` parties; the left
    /// side is returned.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        check_party_count(n)?;
        let text = text.trim();
        let mut sides = text.split('|');
        let left = parse_letters(sides.next().unwrap_or(""), n)?;
        match (sides.next(), sides.next()) {
            (None, _) => Ok(left),
            (Some(right), None) => {
                let right = parse_letters(right, n)?;
                if left.0 & right.0 != 0 || (left.0 | right.0) != Self::full(n).0 {
                    return Err(Error::InvalidSubset(format!("'{text}' is not a bipartition of {n} parties")));
                }
                Ok(left)
            }
            _ => Err(Error::InvalidSubset(format!("'{text}' has more than one '|'"))),
        }
    }

    fn sort_key(self) -> (usize, Vec<usize>) {
        (self.len(), self.parties())
    }
}

fn parse_letters(s: &str, n: usize) -> Result<PartySubset> {
    let mut bits = 0u16;
    for ch in s.trim().chars() {
        let up = ch.to_ascii_uppercase();
        if !up.is_ascii_uppercase() {
            return Err(Error::InvalidSubset(format!("unexpected character '{ch}'")));
        }
        let p = (up as u8 - b'A') as usize;
        if p >= n {
            return Err(Error::InvalidSubset(format!("party '{ch}' unknown for {n} parties")));
        }
        if bits & (1 << p) != 0 {
            return Err(Error::InvalidSubset(format!("party '{ch}' repeated")));
        }
        bits |= 1 << p;
    }
    if bits == 0 {
        return Err(Error::EmptySubset);
    }
    Ok(PartySubset(bits))
}

pub fn party_letter(p: usize) -> char {
    (b'A' + p as u8) as char
}

fn check_party_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PARTIES {
        return Err(Error::InvalidDims(format!("party count {n} outside 1..={MAX_PARTIES}")));
    }
    Ok(())
}

/// An ordered list of distinct proper party subsets (the family `R`).
///
/// Subsets are kept as given. A subset and its complement describe the same
/// bipartition; [`PartitionFamily::canonical`] merges such duplicates and
/// every family built for a classification question is canonical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionFamily {
    parties: usize,
    subsets: Vec<PartySubset>,
}

impl PartitionFamily {
    pub fn new(parties: usize, subsets: Vec<PartySubset>) -> Result<Self> {
        check_party_count(parties)?;
        let mut out: Vec<PartySubset> = Vec::with_capacity(subsets.len());
        for s in subsets {
            if !s.is_proper(parties) {
                return Err(Error::InvalidSubset(format!(
                    "subset {:#b} is not a proper nonempty subset of {parties} parties",
                    s.bits()
                )));
            }
            if !out.contains(&s) {
                out.push(s);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidSubset("partition family is empty".into()));
        }
        Ok(PartitionFamily { parties, subsets: out })
    }

    /// Same family with each bipartition listed once (first occurrence kept).
    pub fn canonical(&self) -> Self {
        let mut seen = Vec::new();
        let mut subsets = Vec::new();
        for &s in &self.subsets {
            let key = s.canonical(self.parties);
            if !seen.contains(&key) {
                seen.push(key);
                subsets.push(s);
            }
        }
        PartitionFamily { parties: self.parties, subsets }
    }

    /// Single-party subsets `{A}, {B}, ...`.
    pub fn single_parties(parties: usize) -> Result<Self> {
        if parties < 2 {
            return Err(Error::InvalidDims("need at least 2 parties".into()));
        }
        Self::new(parties, (0..parties).map(PartySubset::singleton).collect())
    }

    /// Parses a comma-separated list such as `"A|BC,B|AC"` or `"A,B"`; the
    /// result is canonical.
    pub fn parse(text: &str, parties: usize) -> Result<Self> {
        let subsets = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| PartySubset::parse(s, parties))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(parties, subsets)?.canonical())
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[PartySubset] {
        &self.subsets
    }

    pub fn iter(&self) -> impl Iterator<Item = PartySubset> + '_ {
        self.subsets.iter().copied()
    }

    pub fn labels(&self) -> Vec<String> {
        self.subsets.iter().map(|s| s.bipartition_label(self.parties)).collect()
    }
}

impl fmt::Display for PartitionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.labels().join(","))
    }
}

/// All `2^(n-1) - 1` bipartitions, each represented by the side holding `A`.
pub fn all_bipartitions(n: usize) -> Result<PartitionFamily> {
    if !(2..=MAX_PARTIES).contains(&n) {
        return Err(Error::OutOfRange(format!("all_bipartitions needs 2..={MAX_PARTIES} parties, got {n}")));
    }
    let full = PartySubset::full(n);
    let mut subsets: Vec<PartySubset> =
        (1u32..(1 << n)).map(|b| PartySubset(b as u16)).filter(|s| s.contains(0) && *s != full).collect();
    subsets.sort_by_key(|s| s.sort_key());
    PartitionFamily::new(n, subsets)
}

/// All `binomial(n, h)` subsets of exactly `h` parties, in lexicographic order.
///
/// Complementary subsets are both kept (for even `n` and `h = n/2`); call
/// [`PartitionFamily::canonical`] to merge them.
pub fn subsets_of_size(n: usize, h: usize) -> Result<PartitionFamily> {
    check_party_count(n)?;
    if h == 0 || h >= n {
        return Err(Error::OutOfRange(format!("subset size {h} outside 1..={} for {n} parties", n.saturating_sub(1))));
    }
    PartitionFamily::new(n, combinations(n, h))
}

fn combinations(n: usize, h: usize) -> Vec<PartySubset> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..h).collect();
    loop {
        let bits = idx.iter().fold(0u16, |b, &i| b | (1 << i));
        out.push(PartySubset(bits));
        let mut i = h;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - h + i {
                idx[i] += 1;
                for k in i + 1..h {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `gamma(k) = 2^(N-1) - 2^k + 1`: the entropy-vector entry whose positivity
/// rules out `(k+1)`-separability.
pub fn gamma(n: usize, k: usize) -> Result<usize> {
    if !(2..=MAX_PARTIES).contains(&n) || k == 0 || k >= n {
        return Err(Error::OutOfRange(format!("gamma needs 1 <= k <= N-1, got N={n}, k={k}")));
    }
    Ok((1usize << (n - 1)) - (1usize << k) + 1)
}

/// Largest valid depth level `m` for `n` parties (`floor(n/2) - 1`).
pub fn max_depth_level(n: usize) -> usize {
    (n / 2).saturating_sub(1)
}

/// The family `G_m = R_{ceil(N/2)} ∪ ... ∪ R_{ceil(N/2)+m}` with each
/// bipartition listed once.
pub fn depth_family(n: usize, m: usize) -> Result<PartitionFamily> {
    if !(2..=MAX_PARTIES).contains(&n) {
        return Err(Error::OutOfRange(format!("depth family needs 2..={MAX_PARTIES} parties")));
    }
    if m > max_depth_level(n) {
        return Err(Error::OutOfRange(format!("depth level m={m} outside 0..={} for N={n}", max_depth_level(n))));
    }
    let lo = n.div_ceil(2);
    let subsets: Vec<PartySubset> = (lo..=lo + m).flat_map(|h| combinations(n, h)).collect();
    Ok(PartitionFamily::new(n, subsets)?.canonical())
}

/// Closed-form size of [`depth_family`].
pub fn depth_family_size(n: usize, m: usize) -> usize {
    if n.is_multiple_of(2) {
        binomial(n, n / 2) / 2 + (1..=m).map(|i| binomial(n, n / 2 + i)).sum::<usize>()
    } else {
        (0..=m).map(|i| binomial(n, n.div_ceil(2) + i)).sum()
    }
}

/// Entanglement depth certified when the witness over [`depth_family`]`(n, m)`
/// is positive.
///
/// A positive last-entry witness over a family excludes every pure state
/// that is product across at least one bipartition in the family. A
/// `p`-producible state is excluded for sure only if every way of splitting
/// the `n` parties into blocks of size at most `p` leaves some union of
/// blocks whose size matches a cut in the family. The returned value is
/// `p + 1` for the largest such `p`, found by enumerating integer
/// partitions of `n`.
pub fn depth_certificate(n: usize, m: usize) -> Result<usize> {
    let fam = depth_family(n, m)?;
    let mut sizes = vec![false; n + 1];
    for s in fam.iter() {
        sizes[s.len()] = true;
        sizes[n - s.len()] = true;
    }
    let mut p = 1;
    while p < n && all_block_splits_hit(n, p + 1, &sizes) {
        p += 1;
    }
    Ok(p + 1)
}

fn all_block_splits_hit(n: usize, max_part: usize, sizes: &[bool]) -> bool {
    let mut parts = Vec::new();
    splits_hit(n, max_part, &mut parts, sizes)
}

fn splits_hit(remaining: usize, max_part: usize, parts: &mut Vec<usize>, sizes: &[bool]) -> bool {
    if remaining == 0 {
        // subset sums of the block sizes
        let total: usize = parts.iter().sum();
        let mut reach = vec![false; total + 1];
        reach[0] = true;
        for &b in parts.iter() {
            for s in (b..=total).rev() {
                if reach[s - b] {
                    reach[s] = true;
                }
            }
        }
        return (1..total).any(|s| reach[s] && sizes[s]);
    }
    for part in (1..=max_part.min(remaining)).rev() {
        parts.push(part);
        let ok = splits_hit(remaining - part, part, parts, sizes);
        parts.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// One computational-basis label per party (the multi-index `eta`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(digits: Vec<usize>, dims: &HilbertDims) -> Result<Self> {
        if digits.len() != dims.parties() {
            return Err(Error::InvalidIndex(format!("{} digits for {} parties", digits.len(), dims.parties())));
        }
        for (i, (&x, &d)) in digits.iter().zip(dims.as_slice()).enumerate() {
            if x >= d {
                return Err(Error::InvalidIndex(format!(
                    "digit {x} at party {} exceeds local dimension {d}",
                    party_letter(i)
                )));
            }
        }
        Ok(MultiIndex(digits))
    }

    /// Unvalidated construction; the digits are only checked against
    /// dimensions when used for lookup.
    pub fn from_digits(digits: Vec<usize>) -> Self {
        MultiIndex(digits)
    }

    /// Parses a digit string such as `"0120"`.
    pub fn parse(text: &str, dims: &HilbertDims) -> Result<Self> {
        let digits = text
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::InvalidIndex(format!("'{text}' is not a digit string")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(digits, dims)
    }

    pub fn digits(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Row-major position, party `A` most significant.
    pub fn linear(&self, dims: &HilbertDims) -> usize {
        self.0.iter().zip(dims.as_slice()).fold(0, |acc, (&x, &d)| acc * d + x)
    }

    pub fn from_linear(mut index: usize, dims: &HilbertDims) -> Self {
        let mut digits = vec![0; dims.parties()];
        for (slot, &d) in digits.iter_mut().zip(dims.as_slice()).rev() {
            *slot = index % d;
            index /= d;
        }
        MultiIndex(digits)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&x| x < 10) {
            for x in &self.0 {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            f.write_str(&parts.join("."))
        }
    }
}

/// Exchanges the digits of parties in `r` between `a` and `b`.
pub fn swap_pair(a: &MultiIndex, b: &MultiIndex, r: PartySubset) -> Result<(MultiIndex, MultiIndex)> {
    if a.len() != b.len() {
        return Err(Error::InvalidIndex(format!("cannot swap indices of lengths {} and {}", a.len(), b.len())));
    }
    if r.parties().last().is_some_and(|&p| p >= a.len()) {
        return Err(Error::PartyOutOfRange { party: *r.parties().last().unwrap(), parties: a.len() });
    }
    let mut x = a.0.clone();
    let mut y = b.0.clone();
    for p in r.parties() {
        std::mem::swap(&mut x[p], &mut y[p]);
    }
    Ok((MultiIndex(x), MultiIndex(y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str, n: usize) -> MultiIndex {
        MultiIndex::parse(s, &HilbertDims::new(vec![2; n]).unwrap()).unwrap()
    }

    #[test]
    fn bipartition_counts() {
        let three = all_bipartitions(3).unwrap();
        assert_eq!(three.labels(), vec!["A|BC", "AB|C", "AC|B"]);
        assert_eq!(all_bipartitions(2).unwrap().len(), 1);
        assert_eq!(all_bipartitions(5).unwrap().len(), 15);
        assert!(all_bipartitions(1).is_err());
    }

    #[test]
    fn subsets_of_given_size() {
        assert_eq!(subsets_of_size(5, 3).unwrap().len(), 10);
        assert_eq!(subsets_of_size(4, 2).unwrap().len(), 6);
        let singles = subsets_of_size(3, 1).unwrap();
        let labels: Vec<String> = singles.iter().map(|s| s.label()).collect();
        assert_eq!(labels, vec!["A", "B", "C"]);
        assert!(subsets_of_size(3, 3).is_err());
        assert!(subsets_of_size(3, 0).is_err());
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(5, 1).unwrap(), 15);
        assert_eq!(gamma(5, 4).unwrap(), 1);
        assert!(gamma(5, 5).is_err());
        assert!(gamma(5, 0).is_err());
        for n in 2..=10 {
            assert_eq!(gamma(n, n - 1).unwrap(), 1);
            assert_eq!(gamma(n, 1).unwrap(), all_bipartitions(n).unwrap().len());
        }
    }

    #[test]
    fn depth_family_sizes() {
        assert_eq!(depth_family(5, 0).unwrap().len(), 10);
        assert_eq!(depth_family(5, 1).unwrap().len(), 15);
        assert_eq!(depth_family(4, 0).unwrap().len(), 3);
        assert!(depth_family(5, 2).is_err());
    }

    #[test]
    fn depth_family_matches_closed_form_exhaustively() {
        for n in 2..=8 {
            for m in 0..=max_depth_level(n) {
                let fam = depth_family(n, m).unwrap();
                // direct count: bipartitions whose larger side lies in the level range
                let lo = n.div_ceil(2);
                let direct = all_bipartitions(n)
                    .unwrap()
                    .iter()
                    .filter(|s| {
                        let big = s.len().max(n - s.len());
                        (lo..=lo + m).contains(&big)
                    })
                    .count();
                assert_eq!(fam.len(), direct, "n={n} m={m}");
                assert_eq!(fam.len(), depth_family_size(n, m), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn depth_certificates() {
        // top level covers every bipartition: genuine N-partite entanglement
        for n in 2..=9 {
            assert_eq!(depth_certificate(n, max_depth_level(n)).unwrap(), n);
        }
        assert_eq!(depth_certificate(5, 0).unwrap(), 4);
        assert_eq!(depth_certificate(4, 0).unwrap(), 3);
        // three Bell pairs have no 3|3 product cut, so R_3 alone only
        // certifies that six qubits are not fully separable
        assert_eq!(depth_certificate(6, 0).unwrap(), 2);
        assert_eq!(depth_certificate(6, 1).unwrap(), 5);
        // 3+3+2 has no 4|4 cut
        assert_eq!(depth_certificate(8, 0).unwrap(), 3);
    }

    #[test]
    fn swap_examples() {
        let (a, b) = swap_pair(&idx("000", 3), &idx("111", 3), PartySubset::singleton(0)).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("100".into(), "011".into()));
        let ab = PartySubset::from_parties(&[0, 1], 3).unwrap();
        let (a, b) = swap_pair(&idx("000", 3), &idx("111", 3), ab).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("110".into(), "001".into()));
        let (a, b) = swap_pair(&idx("010", 3), &idx("111", 3), PartySubset::full(3)).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("111".into(), "010".into()));
        assert!(swap_pair(&idx("01", 2), &idx("111", 3), ab).is_err());
    }

    #[test]
    fn parse_subsets() {
        let s = PartySubset::parse("b|ac", 3).unwrap();
        assert_eq!(s.label(), "B");
        assert_eq!(PartySubset::parse("AB", 3).unwrap().label(), "AB");
        assert!(PartySubset::parse("AD", 3).is_err());
        assert!(PartySubset::parse("A|B", 3).is_err());
        assert!(PartySubset::parse("A|AB", 2).is_err());
        let fam = PartitionFamily::parse("A|BC,B|AC", 3).unwrap();
        assert_eq!(fam.to_string(), "A|BC,B|AC");
        // complements are merged
        let fam = PartitionFamily::parse("A,BC,B", 3).unwrap();
        assert_eq!(fam.len(), 2);
    }

    #[test]
    fn multi_index_linear_roundtrip() {
        let dims = HilbertDims::new(vec![2, 3, 5]).unwrap();
        for i in 0..dims.total() {
            assert_eq!(MultiIndex::from_linear(i, &dims).linear(&dims), i);
        }
        assert_eq!(MultiIndex::parse("124", &dims).unwrap().linear(&dims), 15 + 2 * 5 + 4);
        assert!(MultiIndex::parse("131", &dims).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn swap_is_an_involution(
                a in proptest::collection::vec(0usize..3, 4),
                b in proptest::collection::vec(0usize..3, 4),
                bits in 1u16..16,
            ) {
                let (a, b) = (MultiIndex(a), MultiIndex(b));
                let r = PartySubset::from_bits(bits);
                let (x, y) = swap_pair(&a, &b, r).unwrap();
                for p in 0..4 {
                    let mut before = [a.0[p], b.0[p]];
                    let mut after = [x.0[p], y.0[p]];
                    before.sort();
                    after.sort();
                    prop_assert_eq!(before, after);
                }
                let (u, v) = swap_pair(&x, &y, r).unwrap();
                prop_assert_eq!(u, a);
                prop_assert_eq!(v, b);
            }
        }
    }
}
