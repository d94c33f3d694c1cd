//! The coherence witness `W_j(rho, C, R)`: a lower bound on the `j`-th
//! largest entry of the convex-roof linear-entropy vector over `R`, built
//! from a few off-diagonal entries of `rho` and the populations obtained by
//! swapping party digits between each listed pair of basis states.
//!
//! For a pair set `C` of `|C|` unordered pairs `(eta, eta')`,
//!
//! ```text
//! W_j = 2/sqrt(|C|) * ( sum_C |<eta|rho|eta'>|
//!                       - min_{S ⊆ R, |S| = j} sum_{r in S} sum_C
//!                             sqrt(<eta_r|rho|eta_r> <eta'_r|rho|eta'_r>) )
//! ```
//!
//! The factor 2 counts both orientations of every listed pair (the sum runs
//! over ordered pairs while `|C|` counts unordered ones). With that
//! convention the Choi state values of the global and local depolarizing
//! channels come out as `2 (3q - 1)/8`, twice the value quoted in the
//! literature; signs and thresholds are unaffected.
//!
//! The `j`-subset of `R` is shared by all pairs of `C`. Minimizing each
//! pair separately gives a larger number that is not a valid bound when
//! `j < |R|`; both readings agree for `j = |R|`.

use std::fmt;

use crate::entropy::POSITIVITY_THRESHOLD;
use crate::error::{Error, Result};
use crate::partitions::{swap_pair, MultiIndex, PartitionFamily, PartySubset};
use crate::scalar::{modulus, Real};
use crate::tensor::{DensityMatrix, HilbertDims};

/// Coherences at or below this magnitude are never selected.
pub const COHERENCE_FLOOR: f64 = 1e-10;

/// A set of unordered pairs of distinct basis labels (the set `C`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    pairs: Vec<(MultiIndex, MultiIndex)>,
}

impl PairSet {
    pub fn new(pairs: Vec<(MultiIndex, MultiIndex)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidPairs("pair set is empty".into()));
        }
        let n = pairs[0].0.len();
        let mut seen: Vec<(MultiIndex, MultiIndex)> = Vec::with_capacity(pairs.len());
        for (a, b) in &pairs {
            if a.len() != n || b.len() != n {
                return Err(Error::InvalidPairs("pairs of mixed lengths".into()));
            }
            if a == b {
                return Err(Error::InvalidPairs(format!("pair ({a},{a}) repeats an index")));
            }
            let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
            if seen.contains(&key) {
                return Err(Error::InvalidPairs(format!("pair ({a},{b}) listed twice")));
            }
            seen.push(key);
        }
        Ok(PairSet { pairs })
    }

    /// Parses `"000-111,000-110"`.
    pub fn parse(text: &str, dims: &HilbertDims) -> Result<Self> {
        let pairs = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|item| {
                let (a, b) = item
                    .split_once('-')
                    .ok_or_else(|| Error::InvalidPairs(format!("'{item}' is not of the form 000-111")))?;
                Ok((MultiIndex::parse(a, dims)?, MultiIndex::parse(b, dims)?))
            })
            .collect::<Result<Vec<_>>>()?;
        PairSet::new(pairs)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(MultiIndex, MultiIndex)] {
        &self.pairs
    }

    pub fn iter(&self) -> impl Iterator<Item = &(MultiIndex, MultiIndex)> {
        self.pairs.iter()
    }
}

impl fmt::Display for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        f.write_str(&items.join(","))
    }
}

/// How the pair set of a witness is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairChoice {
    /// [`select_pairs`] with the given budget, or `2 * d_max` when `None`.
    Auto(Option<usize>),
    Fixed(PairSet),
}

impl PairChoice {
    pub fn auto() -> Self {
        PairChoice::Auto(None)
    }

    /// The pair set used for one `(R, j)` question.
    pub fn resolve<T: Real>(&self, rho: &DensityMatrix<T>, family: &PartitionFamily, j: usize) -> Result<PairSet> {
        match self {
            PairChoice::Fixed(c) => Ok(c.clone()),
            PairChoice::Auto(budget) => {
                let budget = budget.unwrap_or(2 * rho.dims().max_local());
                select_pairs(rho, family, j, budget)
            }
        }
    }
}

/// One pair's share of a witness value.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDetail<T: Real> {
    pub pair: (MultiIndex, MultiIndex),
    /// `|<eta|rho|eta'>|`.
    pub coherence: T,
    /// `sqrt(<eta_r|rho|eta_r><eta'_r|rho|eta'_r>)` for every `r` in the family.
    pub swapped_terms: Vec<T>,
    /// This pair's summand in the witness, prefactor included.
    pub contribution: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessResult<T: Real> {
    pub value: T,
    pub j: usize,
    pub pairs: PairSet,
    pub family: PartitionFamily,
    /// The `j` subsets of the family attaining the minimum.
    pub minimizing: Vec<PartySubset>,
    pub details: Vec<PairDetail<T>>,
}

impl<T: Real> WitnessResult<T> {
    /// Whether the value clears [`POSITIVITY_THRESHOLD`].
    pub fn is_positive(&self) -> bool {
        self.value > T::tol(POSITIVITY_THRESHOLD)
    }

    /// Sum of the per-pair contributions; equals `value` up to rounding.
    pub fn resummed(&self) -> T {
        self.details.iter().fold(T::zero(), |acc, d| acc + d.contribution)
    }

    pub fn minimizing_labels(&self) -> Vec<String> {
        let n = self.family.parties();
        self.minimizing.iter().map(|s| s.bipartition_label(n)).collect()
    }
}

struct PairTerms<T> {
    coherence: T,
    swapped: Vec<T>,
}

fn pair_terms<T: Real>(
    rho: &DensityMatrix<T>,
    a: &MultiIndex,
    b: &MultiIndex,
    family: &PartitionFamily,
) -> Result<PairTerms<T>> {
    let dims = rho.dims();
    let (ia, ib) = (a.linear(dims), b.linear(dims));
    let swapped = family
        .iter()
        .map(|r| {
            let (x, y) = swap_pair(a, b, r)?;
            let px = rho.population(x.linear(dims)).max(T::zero());
            let py = rho.population(y.linear(dims)).max(T::zero());
            Ok((px * py).sqrt())
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(PairTerms { coherence: modulus(rho.entry(ia, ib)), swapped })
}

/// Indices of the `j` smallest totals (stable in family order) and their sum.
fn smallest_j<T: Real>(totals: &[T], j: usize) -> (Vec<usize>, T) {
    let mut order: Vec<usize> = (0..totals.len()).collect();
    order.sort_by(|&a, &b| totals[a].partial_cmp(&totals[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    order.truncate(j);
    let sum = order.iter().fold(T::zero(), |acc, &i| acc + totals[i]);
    (order, sum)
}

fn prefactor<T: Real>(pairs: usize) -> T {
    T::lit(2.0) / T::lit(pairs as f64).sqrt()
}

fn check_level(j: usize, family: &PartitionFamily) -> Result<()> {
    if j == 0 || j > family.len() {
        return Err(Error::LevelOutOfRange { j, max: family.len() });
    }
    Ok(())
}

fn check_family<T: Real>(rho: &DensityMatrix<T>, family: &PartitionFamily) -> Result<()> {
    if family.parties() != rho.dims().parties() {
        return Err(Error::DimensionMismatch(format!(
            "family over {} parties for a {}-party state",
            family.parties(),
            rho.dims().parties()
        )));
    }
    Ok(())
}

/// Evaluates `W_j(rho, C, R)`.
///
/// Works on unnormalized states too; the value scales linearly with the trace.
pub fn witness<T: Real>(
    rho: &DensityMatrix<T>,
    pairs: &PairSet,
    family: &PartitionFamily,
    j: usize,
) -> Result<WitnessResult<T>> {
    check_family(rho, family)?;
    check_level(j, family)?;
    let dims = rho.dims();
    for (a, b) in pairs.iter() {
        MultiIndex::new(a.digits().to_vec(), dims)?;
        MultiIndex::new(b.digits().to_vec(), dims)?;
    }
    let terms = pairs.iter().map(|(a, b)| pair_terms(rho, a, b, family)).collect::<Result<Vec<_>>>()?;

    let mut totals = vec![T::zero(); family.len()];
    for t in &terms {
        for (acc, &h) in totals.iter_mut().zip(&t.swapped) {
            *acc += h;
        }
    }
    let (chosen, _) = smallest_j(&totals, j);
    let scale = prefactor::<T>(pairs.len());
    let details: Vec<PairDetail<T>> = pairs
        .iter()
        .zip(terms)
        .map(|((a, b), t)| {
            let min_term = chosen.iter().fold(T::zero(), |acc, &i| acc + t.swapped[i]);
            PairDetail {
                pair: (a.clone(), b.clone()),
                coherence: t.coherence,
                contribution: scale * (t.coherence - min_term),
                swapped_terms: t.swapped,
            }
        })
        .collect();
    let coherences = details.iter().fold(T::zero(), |acc, d| acc + d.coherence);
    let min_total = chosen.iter().fold(T::zero(), |acc, &i| acc + totals[i]);
    Ok(WitnessResult {
        value: scale * (coherences - min_total),
        j,
        pairs: pairs.clone(),
        family: family.clone(),
        minimizing: chosen.iter().map(|&i| family.subsets()[i]).collect(),
        details,
    })
}

/// Whether the pair changes under the digit swap of every `r` in the family.
///
/// A pair that agrees on all of `r` (or on all of its complement) is mapped
/// to itself, so its term can only be non-positive.
pub fn is_admissible(a: &MultiIndex, b: &MultiIndex, family: &PartitionFamily) -> bool {
    if a.len() != b.len() || a == b {
        return false;
    }
    let diff = a
        .digits()
        .iter()
        .zip(b.digits())
        .enumerate()
        .fold(0u16, |m, (p, (x, y))| if x != y { m | (1 << p) } else { m });
    let full = PartySubset::full(family.parties()).bits();
    family.iter().all(|r| diff & r.bits() != 0 && diff & !r.bits() & full != 0)
}

/// Chooses a pair set for `(R, j)` greedily.
///
/// Candidates are all admissible pairs whose coherence exceeds
/// [`COHERENCE_FLOOR`], in lexicographic order. Starting from the empty set,
/// the candidate raising the witness the most is added (earliest candidate on
/// ties) until `max_pairs` pairs are chosen; the best prefix seen is returned.
pub fn select_pairs<T: Real>(
    rho: &DensityMatrix<T>,
    family: &PartitionFamily,
    j: usize,
    max_pairs: usize,
) -> Result<PairSet> {
    check_family(rho, family)?;
    check_level(j, family)?;
    let dims = rho.dims();
    let d = dims.total();
    let floor = T::tol(COHERENCE_FLOOR);
    let labels: Vec<MultiIndex> = (0..d).map(|i| MultiIndex::from_linear(i, dims)).collect();

    let mut candidates = Vec::new();
    for i in 0..d {
        for k in i + 1..d {
            if modulus(rho.entry(i, k)) <= floor || !is_admissible(&labels[i], &labels[k], family) {
                continue;
            }
            let t = pair_terms(rho, &labels[i], &labels[k], family)?;
            candidates.push((i, k, t));
        }
    }
    if candidates.is_empty() {
        return Err(Error::NoAdmissiblePair);
    }

    let mut used = vec![false; candidates.len()];
    let mut chosen: Vec<usize> = Vec::new();
    let mut totals = vec![T::zero(); family.len()];
    let mut coherence = T::zero();
    let mut best: Option<(T, usize)> = None;
    let mut scratch = vec![T::zero(); family.len()];

    for _ in 0..max_pairs.max(1).min(candidates.len()) {
        let k = chosen.len() + 1;
        let mut pick: Option<(T, usize)> = None;
        for (c, (_, _, t)) in candidates.iter().enumerate() {
            if used[c] {
                continue;
            }
            for ((s, &tot), &h) in scratch.iter_mut().zip(&totals).zip(&t.swapped) {
                *s = tot + h;
            }
            let (_, min_sum) = smallest_j(&scratch, j);
            let value = prefactor::<T>(k) * (coherence + t.coherence - min_sum);
            if pick.is_none_or(|(v, _)| value > v) {
                pick = Some((value, c));
            }
        }
        let Some((value, c)) = pick else { break };
        used[c] = true;
        chosen.push(c);
        coherence += candidates[c].2.coherence;
        for (tot, &h) in totals.iter_mut().zip(&candidates[c].2.swapped) {
            *tot += h;
        }
        if best.is_none_or(|(v, _)| value > v) {
            best = Some((value, chosen.len()));
        }
    }

    let keep = best.map(|(_, n)| n).unwrap_or(1);
    let pairs =
        chosen[..keep].iter().map(|&c| (labels[candidates[c].0].clone(), labels[candidates[c].1].clone())).collect();
    PairSet::new(pairs)
}

/// Number of distinct density-matrix entries a witness reads: one
/// off-diagonal per pair plus every distinct swapped population over all
/// pairs and all subsets of the family (all are needed to find the minimum).
pub fn coherence_budget(pairs: &PairSet, family: &PartitionFamily, j: usize) -> Result<usize> {
    check_level(j, family)?;
    let mut diagonals: Vec<MultiIndex> = Vec::new();
    for (a, b) in pairs.iter() {
        for r in family.iter() {
            let (x, y) = swap_pair(a, b, r)?;
            for z in [x, y] {
                if !diagonals.contains(&z) {
                    diagonals.push(z);
                }
            }
        }
    }
    Ok(pairs.len() + diagonals.len())
}
