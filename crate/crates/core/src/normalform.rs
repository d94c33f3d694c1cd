//! Local filtering `rho -> (⊗A_i) rho (⊗A_i)^dagger / Tr(...)` with
//! invertible `A_i`, and the iterative normal form in which every
//! single-party marginal is proportional to the identity.
//!
//! Invertible local filters leave every decomposability, separability and
//! Schmidt-rank property unchanged, so a witness that fires on the filtered
//! state certifies the original.

use crate::error::{Error, Result};
use crate::partitions::PartySubset;
use crate::scalar::{modulus, re, CMatrix, Real};
use crate::tensor::{conjugate_local, inv_sqrt_psd, normalize, partial_trace, DensityMatrix, HilbertDims};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 500;
/// Marginal eigenvalues (of `d_i rho_i`) at or below this abort the iteration.
pub const SINGULAR_TOL: f64 = 1e-12;

/// One invertible operator per party plus the record of how it was found.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterSet<T: Real> {
    dims: HilbertDims,
    ops: Vec<CMatrix<T>>,
    /// Full sweeps over the parties performed.
    pub steps: usize,
    /// [`marginal_flatness`] of the output.
    pub flatness: T,
    pub converged: bool,
}

impl<T: Real> FilterSet<T> {
    /// Filters supplied by hand; each must be square of the party's dimension
    /// and invertible.
    pub fn new(dims: HilbertDims, ops: Vec<CMatrix<T>>) -> Result<Self> {
        if ops.len() != dims.parties() {
            return Err(Error::DimensionMismatch(format!("{} filters for {} parties", ops.len(), dims.parties())));
        }
        for (p, op) in ops.iter().enumerate() {
            let d = dims.local(p);
            if op.nrows() != d || op.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "filter {p} is {}x{}, party dimension {d}",
                    op.nrows(),
                    op.ncols()
                )));
            }
            let sv = op.clone().svd(false, false).singular_values;
            let (lo, hi) = (sv.min(), sv.max());
            let well_conditioned = lo > hi * T::tol(SINGULAR_TOL);
            if !well_conditioned {
                return Err(Error::InvalidParameter(format!("filter {p} is singular")));
            }
        }
        Ok(FilterSet { dims, ops, steps: 0, flatness: T::zero(), converged: true })
    }

    pub fn identity(dims: HilbertDims) -> Self {
        let ops = (0..dims.parties()).map(|p| CMatrix::<T>::identity(dims.local(p), dims.local(p))).collect();
        FilterSet { dims, ops, steps: 0, flatness: T::zero(), converged: true }
    }

    pub fn dims(&self) -> &HilbertDims {
        &self.dims
    }

    pub fn operators(&self) -> &[CMatrix<T>] {
        &self.ops
    }

    pub fn operator(&self, party: usize) -> &CMatrix<T> {
        &self.ops[party]
    }

    /// Rescales each filter to unit `|det|`; the filtered state is unchanged.
    fn determinant_normalize(&mut self) {
        for op in &mut self.ops {
            let d = op.nrows() as f64;
            let det = modulus(op.determinant());
            if det > T::zero() {
                *op *= re(det.powf(T::lit(-1.0 / d)));
            }
        }
    }
}

/// `(⊗A_i) rho (⊗A_i)^dagger`, renormalized to unit trace.
pub fn apply_filters<T: Real>(rho: &DensityMatrix<T>, filters: &FilterSet<T>) -> Result<DensityMatrix<T>> {
    if filters.dims() != rho.dims() {
        return Err(Error::DimensionMismatch("filters and state on different spaces".into()));
    }
    let mut mat = rho.matrix().clone();
    for (p, op) in filters.operators().iter().enumerate() {
        mat = conjugate_local(&mat, rho.dims(), p, op);
    }
    normalize(&DensityMatrix::from_parts(rho.dims().clone(), mat, false))
}

/// `max_i ||rho_i - I/d_i||_F` over the single-party marginals.
pub fn marginal_flatness<T: Real>(rho: &DensityMatrix<T>) -> T {
    let dims = rho.dims();
    (0..dims.parties())
        .map(|p| {
            let m = partial_trace(rho, PartySubset::singleton(p)).expect("valid party");
            let d = dims.local(p);
            let flat = CMatrix::<T>::identity(d, d) * re(T::one() / T::lit(d as f64));
            (m.matrix() - flat).norm()
        })
        .fold(T::zero(), |a, b| a.max(b))
}

/// Cyclically filters each party by `(d_i rho_i)^(-1/2)` until every
/// marginal is within `tol` (Frobenius) of `I/d_i` or `max_iter` sweeps have
/// run. Non-convergence is reported through [`FilterSet::converged`].
///
/// The returned filters map the normalized input to the returned state via
/// [`apply_filters`] and are scaled to unit `|det|`.
pub fn normal_form<T: Real>(
    rho: &DensityMatrix<T>,
    tol: T,
    max_iter: usize,
) -> Result<(DensityMatrix<T>, FilterSet<T>)> {
    let dims = rho.dims().clone();
    let mut state = normalize(rho)?;
    let mut filters = FilterSet::identity(dims.clone());
    let singular = T::tol(SINGULAR_TOL);
    let mut flatness = marginal_flatness(&state);
    let mut steps = 0;
    while flatness > tol && steps < max_iter {
        for p in 0..dims.parties() {
            let marginal = partial_trace(&state, PartySubset::singleton(p))?;
            let scaled = marginal.matrix() * re(T::lit(dims.local(p) as f64));
            let f = inv_sqrt_psd(&scaled, singular)?;
            let mat = conjugate_local(state.matrix(), &dims, p, &f);
            state = normalize(&DensityMatrix::from_parts(dims.clone(), mat, false))?;
            filters.ops[p] = &f * &filters.ops[p];
        }
        steps += 1;
        flatness = marginal_flatness(&state);
    }
    // rebuild from the input so the recorded filters reproduce the output exactly
    filters.determinant_normalize();
    let state = apply_filters(&normalize(rho)?, &filters)?;
    filters.steps = steps;
    filters.flatness = marginal_flatness(&state);
    filters.converged = filters.flatness <= tol;
    Ok((state, filters))
}

/// [`normal_form`] with the default tolerance and iteration cap.
pub fn normal_form_default<T: Real>(rho: &DensityMatrix<T>) -> Result<(DensityMatrix<T>, FilterSet<T>)> {
    normal_form(rho, T::tol(DEFAULT_TOL), DEFAULT_MAX_ITER)
}
