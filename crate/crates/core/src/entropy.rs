//! Renyi and linear entropies, ordered entropy vectors of pure states, and
//! the conversions from witness values to entropy and dimension bounds.

use std::fmt;

use crate::error::{Error, Result};
use crate::partitions::PartitionFamily;
use crate::scalar::Real;
use crate::tensor::{hermitian_spectrum, DensityMatrix, PureState};

/// Eigenvalues at or below this count as zero for the Renyi-0 rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Relative guard band used when rounding witness values to dimensions.
pub const DIMENSION_GUARD: f64 = 1e-12;
/// Witness values at or below this certify nothing.
pub const POSITIVITY_THRESHOLD: f64 = 1e-12;

/// Unit system of an entropy value.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum EntropyKind {
    /// Renyi entropy of the given order, in bits.
    Renyi(f64),
    /// Linear entropy `sqrt(2(1 - Tr rho^2))`, dimensionless.
    Linear,
}

impl fmt::Display for EntropyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyKind::Renyi(a) => write!(f, "S_{a} [bits]"),
            EntropyKind::Linear => f.write_str("S_L"),
        }
    }
}

/// Entropies of the reductions over a family, sorted non-increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyVector<T: Real> {
    values: Vec<T>,
    family: PartitionFamily,
    kind: EntropyKind,
}

impl<T: Real> EntropyVector<T> {
    /// Sorts `values` non-increasing; negative rounding noise is clamped to 0.
    pub fn new(mut values: Vec<T>, family: PartitionFamily, kind: EntropyKind) -> Result<Self> {
        if values.len() != family.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entropies for a family of {}",
                values.len(),
                family.len()
            )));
        }
        for v in values.iter_mut() {
            *v = v.max(T::zero());
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Ok(EntropyVector { values, family, kind })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// The `j`-th largest entry, `j` counted from 1.
    pub fn entry(&self, j: usize) -> Option<T> {
        j.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn family(&self) -> &PartitionFamily {
        &self.family
    }

    pub fn kind(&self) -> EntropyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Converts a linear-entropy vector to Renyi-2 bits entrywise via
    /// `S_2 = -log2(1 - S_L^2 / 2)`, exact for any single state.
    pub fn to_renyi2(&self) -> Result<EntropyVector<T>> {
        if self.kind != EntropyKind::Linear {
            return Err(Error::UnitMismatch(format!("cannot convert {} to S_2", self.kind)));
        }
        let values = self.values.iter().map(|&s| linear_to_renyi2(s)).collect();
        EntropyVector::new(values, self.family.clone(), EntropyKind::Renyi(2.0))
    }

    /// Entrywise `self <= other + tol`; both vectors must share units.
    pub fn dominated_by(&self, other: &EntropyVector<T>, tol: T) -> Result<bool> {
        if self.kind != other.kind {
            return Err(Error::UnitMismatch(format!("{} vs {}", self.kind, other.kind)));
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch("entropy vectors of different length".into()));
        }
        Ok(self.values.iter().zip(&other.values).all(|(&a, &b)| a <= b + tol))
    }
}

/// Renyi-`alpha` entropy in bits from a spectrum.
pub fn renyi_from_spectrum<T: Real>(eigs: &[T], alpha: T, rank_tol: T) -> Result<T> {
    if alpha < T::zero() {
        return Err(Error::NegativeOrder(alpha.as_f64()));
    }
    let ln2 = T::ln_2();
    let positive = eigs.iter().copied().filter(|&l| l > T::zero());
    if alpha == T::zero() {
        let rank = eigs.iter().filter(|&&l| l > rank_tol).count();
        return Ok(T::lit(rank.max(1) as f64).ln() / ln2);
    }
    if alpha == T::one() {
        let h = positive.fold(T::zero(), |acc, l| acc - l * l.ln());
        return Ok((h / ln2).max(T::zero()));
    }
    let sum = positive.fold(T::zero(), |acc, l| acc + l.powf(alpha));
    Ok((sum.ln() / ln2 / (T::one() - alpha)).max(T::zero()))
}

/// `S_alpha(rho) = log2(Tr rho^alpha) / (1 - alpha)`, with the rank for
/// `alpha = 0` and the von Neumann limit for `alpha = 1`.
pub fn renyi_entropy<T: Real>(rho: &DensityMatrix<T>, alpha: T, rank_tol: T) -> Result<T> {
    renyi_from_spectrum(&hermitian_spectrum(rho), alpha, rank_tol)
}

/// `S_L(rho) = sqrt(2(1 - Tr rho^2))`.
pub fn linear_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    (T::lit(2.0) * (T::one() - rho.purity())).max(T::zero()).sqrt()
}

/// Largest linear entropy of a `d`-dimensional state, `sqrt(2(1 - 1/d))`.
pub fn max_linear_entropy<T: Real>(d: usize) -> T {
    (T::lit(2.0) * (T::one() - T::one() / T::lit(d as f64))).sqrt()
}

pub fn linear_to_renyi2<T: Real>(s_l: T) -> T {
    let purity = T::one() - s_l * s_l / T::lit(2.0);
    (-purity.ln() / T::ln_2()).max(T::zero())
}

/// Ordered entropy vector of a pure state over `family`.
pub fn entropy_vector_pure<T: Real>(
    psi: &PureState<T>,
    family: &PartitionFamily,
    kind: EntropyKind,
) -> Result<EntropyVector<T>> {
    if family.parties() != psi.dims().parties() {
        return Err(Error::DimensionMismatch(format!(
            "family over {} parties for a {}-party state",
            family.parties(),
            psi.dims().parties()
        )));
    }
    let values = family
        .iter()
        .map(|r| {
            let rho = psi.reduced(r)?;
            match kind {
                EntropyKind::Linear => Ok(linear_entropy(&rho)),
                EntropyKind::Renyi(a) => renyi_entropy(&rho, T::lit(a), T::tol(DEFAULT_RANK_TOL)),
            }
        })
        .collect::<Result<Vec<T>>>()?;
    EntropyVector::new(values, family.clone(), kind)
}

fn check_witness<T: Real>(w: T) -> Result<()> {
    if w >= T::lit(2.0).sqrt() || !w.is_finite() {
        return Err(Error::WitnessOutOfRange(w.as_f64()));
    }
    Ok(())
}

/// Renyi-2 lower bound `-log2(1 - w^2/2)` implied by a witness value; zero
/// for non-positive `w`.
pub fn s2_bound_from_witness<T: Real>(w: T) -> Result<T> {
    check_witness(w)?;
    if w <= T::zero() {
        return Ok(T::zero());
    }
    Ok(linear_to_renyi2(w))
}

/// Smallest Schmidt rank `d` whose linear-entropy ceiling
/// `sqrt(2(1 - 1/d))` reaches `w`, i.e. `ceil(1 / (1 - w^2/2))`.
///
/// Values within [`DIMENSION_GUARD`] (relative) above an integer round down
/// to it, so a witness sitting exactly on a ceiling certifies that rank.
/// Any positive witness certifies at least 2.
pub fn dimension_from_witness<T: Real>(w: T) -> Result<usize> {
    check_witness(w)?;
    if w <= T::tol(POSITIVITY_THRESHOLD) {
        return Ok(1);
    }
    let x = (T::one() / (T::one() - w * w / T::lit(2.0))).as_f64();
    let d = (x - DIMENSION_GUARD * x).ceil() as usize;
    Ok(d.max(2))
}
