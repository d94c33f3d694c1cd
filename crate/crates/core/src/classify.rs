//! Classification questions answered by sign tests on the witness:
//! non-decomposability over a family, k-separability, entanglement depth and
//! dimensionality vectors.
//!
//! With automatic pair selection a state may offer no admissible coherence at
//! all (white noise, for instance). Such questions carry no evidence and are
//! answered "no certificate" rather than failing.

use crate::entropy::{dimension_from_witness, s2_bound_from_witness};
use crate::error::{Error, Result};
use crate::partitions::{all_bipartitions, depth_certificate, depth_family, gamma, max_depth_level, PartitionFamily};
use crate::scalar::Real;
use crate::tensor::DensityMatrix;
use crate::witness::{witness, PairChoice, WitnessResult};

/// A witness evaluation, or `None` when no admissible pair exists.
pub type Evidence<T> = Option<WitnessResult<T>>;

fn evaluate<T: Real>(
    rho: &DensityMatrix<T>,
    choice: &PairChoice,
    family: &PartitionFamily,
    j: usize,
) -> Result<Evidence<T>> {
    let pairs = match choice.resolve(rho, family, j) {
        Ok(p) => p,
        Err(Error::NoAdmissiblePair) => return Ok(None),
        Err(e) => return Err(e),
    };
    witness(rho, &pairs, family, j).map(Some)
}

fn positive<T: Real>(e: &Evidence<T>) -> bool {
    e.as_ref().is_some_and(WitnessResult::is_positive)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionVerdict<T: Real> {
    pub family: PartitionFamily,
    pub evidence: Evidence<T>,
    /// True when the state is certified not decomposable over the family.
    pub not_decomposable: bool,
}

/// Tests whether `rho` is certified not to be a mixture of states each
/// separable across one of the bipartitions in `family` (witness at
/// `j = |family|`).
pub fn not_decomposable<T: Real>(
    rho: &DensityMatrix<T>,
    family: &PartitionFamily,
    choice: &PairChoice,
) -> Result<DecompositionVerdict<T>> {
    let evidence = evaluate(rho, choice, family, family.len())?;
    Ok(DecompositionVerdict { family: family.clone(), not_decomposable: positive(&evidence), evidence })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KSepLevel<T: Real> {
    pub k: usize,
    /// `gamma(N, k)`, the entry of the full entropy vector tested.
    pub j: usize,
    pub evidence: Evidence<T>,
    /// Positive witness: the state is not `(k+1)`-separable.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KSeparability<T: Real> {
    pub parties: usize,
    /// Levels `k = N-1, ..., 1`.
    pub levels: Vec<KSepLevel<T>>,
    /// Smallest `k` with a positive witness: the state is not
    /// `(k+1)`-separable. `Some(1)` means genuinely multipartite entangled.
    pub certified_k: Option<usize>,
}

impl<T: Real> KSeparability<T> {
    pub fn is_gme(&self) -> bool {
        self.certified_k == Some(1)
    }

    /// Separability level ruled out: the state is not `k`-separable for this
    /// and every larger `k`.
    pub fn not_separable_at(&self) -> Option<usize> {
        self.certified_k.map(|k| k + 1)
    }

    pub fn describe(&self) -> String {
        match self.certified_k {
            Some(1) => "not 2-separable (GME)".into(),
            Some(k) => format!("not {}-separable", k + 1),
            None => "no certificate".into(),
        }
    }
}

/// Evaluates `W_{gamma(k)}` over all bipartitions for `k = N-1` down to 1.
///
/// The witness is non-increasing in `j` and `gamma` decreases in `k`, so the
/// positive levels form a tail `k >= k*`; `k*` is the strongest statement.
pub fn k_separability_scan<T: Real>(rho: &DensityMatrix<T>, choice: &PairChoice) -> Result<KSeparability<T>> {
    let n = rho.dims().parties();
    let family = all_bipartitions(n)?;
    let mut levels = Vec::with_capacity(n.saturating_sub(1));
    for k in (1..n).rev() {
        let j = gamma(n, k)?;
        let evidence = evaluate(rho, choice, &family, j)?;
        levels.push(KSepLevel { k, j, certified: positive(&evidence), evidence });
    }
    let certified_k = levels.iter().filter(|l| l.certified).map(|l| l.k).min();
    Ok(KSeparability { parties: n, levels, certified_k })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DepthLevel<T: Real> {
    pub m: usize,
    pub family: PartitionFamily,
    pub evidence: Evidence<T>,
    pub certified: bool,
    /// Depth implied when this level is positive.
    pub implied_depth: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementDepth<T: Real> {
    pub parties: usize,
    pub levels: Vec<DepthLevel<T>>,
    /// Largest certified depth, if any level was positive.
    pub depth: Option<usize>,
}

impl<T: Real> EntanglementDepth<T> {
    pub fn is_fully_entangled(&self) -> bool {
        self.depth == Some(self.parties)
    }

    pub fn describe(&self) -> String {
        match self.depth {
            Some(d) if d == self.parties => format!("{d}-partite entangled (all parties)"),
            Some(d) => format!("entanglement depth >= {d}"),
            None => "no depth certificate".into(),
        }
    }
}

/// Iterates the depth families `G_0, G_1, ...`, stopping at the first level
/// whose witness (at `j = |G_m|`) is not positive.
///
/// The depth credited to a positive level is the exact combinatorial bound
/// of [`depth_certificate`].
pub fn entanglement_depth<T: Real>(rho: &DensityMatrix<T>, choice: &PairChoice) -> Result<EntanglementDepth<T>> {
    let n = rho.dims().parties();
    let mut levels = Vec::new();
    let mut depth = None;
    for m in 0..=max_depth_level(n) {
        let family = depth_family(n, m)?;
        let evidence = evaluate(rho, choice, &family, family.len())?;
        let certified = positive(&evidence);
        let implied_depth = depth_certificate(n, m)?;
        levels.push(DepthLevel { m, family, evidence, certified, implied_depth });
        if !certified {
            break;
        }
        depth = Some(implied_depth);
    }
    Ok(EntanglementDepth { parties: n, levels, depth })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionLevel<T: Real> {
    pub j: usize,
    pub evidence: Evidence<T>,
    pub s2_bound: T,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionalityBound<T: Real> {
    pub family: PartitionFamily,
    pub levels: Vec<DimensionLevel<T>>,
}

impl<T: Real> DimensionalityBound<T> {
    /// Lower bounds on the ordered Schmidt-rank vector over the family.
    pub fn dimensions(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dimension).collect()
    }

    pub fn s2_bounds(&self) -> Vec<T> {
        self.levels.iter().map(|l| l.s2_bound).collect()
    }

    pub fn describe(&self) -> String {
        let d: Vec<String> = self.dimensions().iter().map(usize::to_string).collect();
        format!("({})", d.join(","))
    }
}

/// Witness for every `j = 1..|R|`, converted to Renyi-2 and Schmidt-rank
/// lower bounds.
pub fn dimensionality_vector_bound<T: Real>(
    rho: &DensityMatrix<T>,
    family: &PartitionFamily,
    choice: &PairChoice,
) -> Result<DimensionalityBound<T>> {
    let mut levels = Vec::with_capacity(family.len());
    for j in 1..=family.len() {
        let evidence = evaluate(rho, choice, family, j)?;
        let w = evidence.as_ref().map_or(T::zero(), |e| e.value);
        levels.push(DimensionLevel {
            j,
            s2_bound: s2_bound_from_witness(w)?,
            dimension: dimension_from_witness(w)?,
            evidence,
        });
    }
    Ok(DimensionalityBound { family: family.clone(), levels })
}

/// The answers to any subset of the four questions for one state.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport<T: Real> {
    pub decomposability: Vec<DecompositionVerdict<T>>,
    pub k_separability: Option<KSeparability<T>>,
    pub depth: Option<EntanglementDepth<T>>,
    pub dimensionality: Option<DimensionalityBound<T>>,
}

impl<T: Real> Default for ClassificationReport<T> {
    fn default() -> Self {
        ClassificationReport { decomposability: Vec::new(), k_separability: None, depth: None, dimensionality: None }
    }
}
