//! Entropy-vector witnesses for multipartite entanglement.
//!
//! Given a density matrix of a few qudits, the crate evaluates lower bounds on
//! the ordered vector of reduced-state entropies over a family of
//! bipartitions, built from a handful of density-matrix entries. Their signs
//! answer structural questions:
//!
//! * is the state a mixture of states each separable across some cut of a
//!   family? ([`classify::not_decomposable`])
//! * for which `k` is it certainly not `k`-separable?
//!   ([`classify::k_separability_scan`])
//! * how many parties must be entangled together? ([`classify::entanglement_depth`])
//! * what local Schmidt ranks are needed? ([`classify::dimensionality_vector_bound`])
//!
//! Local invertible filtering to the normal form ([`normalform`]) can sharpen
//! all of these. The numerical core is generic over [`scalar::Real`]
//! (`f32`/`f64`); the `*64` and `*32` aliases below fix the precision.
//!
//! ```
//! use entvec::{classify, states, witness::PairChoice};
//!
//! let ghz = states::ghz_balanced::<f64>(5, 2).unwrap().to_density();
//! let report = classify::k_separability_scan(&ghz, &PairChoice::auto()).unwrap();
//! assert!(report.is_gme());
//! ```

pub mod classify;
pub mod entropy;
pub mod error;
pub mod normalform;
pub mod oracle;
pub mod partitions;
pub mod scalar;
pub mod states;
pub mod tensor;
pub mod witness;

pub use classify::{
    dimensionality_vector_bound, entanglement_depth, k_separability_scan, not_decomposable, ClassificationReport,
};
pub use entropy::{EntropyKind, EntropyVector};
pub use error::{Error, Result};
pub use normalform::{apply_filters, marginal_flatness, normal_form, FilterSet};
pub use partitions::{MultiIndex, PartitionFamily, PartySubset};
pub use scalar::Real;
pub use tensor::{DensityMatrix, HilbertDims, PureState};
pub use witness::{witness, PairChoice, PairSet, WitnessResult};

pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type PureState64 = PureState<f64>;
pub type PureState32 = PureState<f32>;
pub type WitnessResult64 = WitnessResult<f64>;
pub type WitnessResult32 = WitnessResult<f32>;
pub type EntropyVector64 = EntropyVector<f64>;
pub type FilterSet64 = FilterSet<f64>;
pub type ClassificationReport64 = ClassificationReport<f64>;
