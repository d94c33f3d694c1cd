//! Dense complex linear algebra on multipartite Hilbert spaces.
//!
//! Basis states are indexed row-major with party `A` most significant: the
//! multi-index `(x_A, x_B, ..., x_N)` sits at
//! `((x_A * d_B + x_B) * d_C + ...) + x_N`. Every module relies on this.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::partitions::{PartySubset, MAX_PARTIES};
use crate::scalar::{modulus, re, CMatrix, CVector, Cx, Real};

/// Hermiticity tolerance for validated density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Trace tolerance for validated density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-9;
/// Normalization tolerance for pure-state amplitudes.
pub const NORM_TOL: f64 = 1e-12;
/// Trace below which [`normalize`] refuses to rescale.
pub const MIN_TRACE: f64 = 1e-14;

/// Local dimensions `d_1, ..., d_n` of a tensor-product space.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HilbertDims(Vec<usize>);

impl HilbertDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.len() > MAX_PARTIES {
            return Err(Error::InvalidDims(format!("{} parties; expected 1..={MAX_PARTIES}", dims.len())));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!("local dimension {d} < 2")));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidDims("total dimension overflows".into()))?;
        Ok(HilbertDims(dims))
    }

    pub fn uniform(parties: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; parties])
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn local(&self, party: usize) -> usize {
        self.0[party]
    }

    pub fn max_local(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(1)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Dimensions of the parties in `keep`, in ascending party order.
    pub fn restrict(&self, keep: PartySubset) -> HilbertDims {
        HilbertDims(keep.parties().into_iter().map(|p| self.0[p]).collect())
    }

    /// Product of the local dimensions of `subset`.
    pub fn subset_total(&self, subset: PartySubset) -> usize {
        subset.parties().into_iter().map(|p| self.0[p]).product()
    }

    fn concat(&self, other: &HilbertDims) -> Result<HilbertDims> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        HilbertDims::new(v)
    }

    pub(crate) fn check_subset(&self, subset: PartySubset) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&p) = subset.parties().iter().find(|&&p| p >= self.parties()) {
            return Err(Error::PartyOutOfRange { party: p, parties: self.parties() });
        }
        Ok(())
    }

    /// For every linear index, its position inside the `keep` factor and
    /// inside the complementary factor.
    fn split_table(&self, keep: PartySubset) -> Vec<(usize, usize)> {
        let n = self.parties();
        let mut out = Vec::with_capacity(self.total());
        let mut digits = vec![0usize; n];
        for _ in 0..self.total() {
            let (mut k, mut t) = (0, 0);
            for (p, (&dim, &digit)) in self.0.iter().zip(&digits).enumerate() {
                if keep.contains(p) {
                    k = k * dim + digit;
                } else {
                    t = t * dim + digit;
                }
            }
            out.push((k, t));
            for p in (0..n).rev() {
                digits[p] += 1;
                if digits[p] < self.0[p] {
                    break;
                }
                digits[p] = 0;
            }
        }
        out
    }
}

/// A state vector `sum_eta c_eta |eta>`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T: Real> {
    dims: HilbertDims,
    amps: CVector<T>,
    normalized: bool,
}

impl<T: Real> PureState<T> {
    /// Normalized state; the squared amplitudes must sum to 1.
    pub fn new(dims: HilbertDims, amps: Vec<Cx<T>>) -> Result<Self> {
        let state = Self::new_unnormalized(dims, amps)?;
        let ns = state.norm_sqr();
        if (ns - T::one()).abs() > T::tol(NORM_TOL) {
            return Err(Error::NotNormalized { norm_sqr: ns.as_f64() });
        }
        Ok(PureState { normalized: true, ..state })
    }

    /// Amplitudes taken as given, tagged unnormalized.
    pub fn new_unnormalized(dims: HilbertDims, amps: Vec<Cx<T>>) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for total dimension {}",
                amps.len(),
                dims.total()
            )));
        }
        Ok(PureState { dims, amps: CVector::from_vec(amps), normalized: false })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized_from(dims: HilbertDims, amps: Vec<Cx<T>>) -> Result<Self> {
        let s = Self::new_unnormalized(dims, amps)?;
        let ns = s.norm_sqr();
        if ns <= T::tol(MIN_TRACE) {
            return Err(Error::ZeroTrace { trace: ns.as_f64() });
        }
        let scale = T::one() / ns.sqrt();
        Ok(PureState { amps: s.amps.map(|c| c * scale), normalized: true, dims: s.dims })
    }

    /// Computational basis state `|digits>`.
    pub fn basis(dims: HilbertDims, digits: &[usize]) -> Result<Self> {
        let idx = crate::partitions::MultiIndex::new(digits.to_vec(), &dims)?;
        let mut amps = vec![Cx::new(T::zero(), T::zero()); dims.total()];
        amps[idx.linear(&dims)] = re(T::one());
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &HilbertDims {
        &self.dims
    }

    pub fn amplitudes(&self) -> &CVector<T> {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Cx<T> {
        self.amps[index]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// `|psi><psi|`, carrying over the normalization tag.
    pub fn to_density(&self) -> DensityMatrix<T> {
        let mat = &self.amps * self.amps.adjoint();
        DensityMatrix { dims: self.dims.clone(), mat, normalized: self.normalized }
    }

    /// Reduced state on `keep`, computed as `M M^dagger` with `M` the
    /// amplitude tensor reshaped to `keep x rest`.
    pub fn reduced(&self, keep: PartySubset) -> Result<DensityMatrix<T>> {
        self.dims.check_subset(keep)?;
        let dk = self.dims.subset_total(keep);
        let dt = self.dims.total() / dk;
        let mut m = CMatrix::<T>::zeros(dk, dt);
        for (i, (k, t)) in self.dims.split_table(keep).into_iter().enumerate() {
            m[(k, t)] = self.amps[i];
        }
        let mat = &m * m.adjoint();
        Ok(DensityMatrix { dims: self.dims.restrict(keep), mat, normalized: self.normalized })
    }
}

/// A density matrix on a tensor-product space.
///
/// Validated on construction: Hermitian within [`HERMITIAN_TOL`], eigenvalues
/// at least `-`[`PSD_TOL`], and unit trace within [`TRACE_TOL`] unless built
/// with [`DensityMatrix::new_unnormalized`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    dims: HilbertDims,
    mat: CMatrix<T>,
    normalized: bool,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(dims: HilbertDims, mat: CMatrix<T>) -> Result<Self> {
        let rho = Self::new_unnormalized(dims, mat)?;
        let tr = rho.trace();
        if (tr - T::one()).abs() > T::tol(TRACE_TOL) {
            return Err(Error::TraceNotUnit { trace: tr.as_f64() });
        }
        Ok(DensityMatrix { normalized: true, ..rho })
    }

    /// Hermitian positive semidefinite operator of arbitrary positive trace.
    pub fn new_unnormalized(dims: HilbertDims, mat: CMatrix<T>) -> Result<Self> {
        check_square(&dims, &mat)?;
        check_hermitian(&mat)?;
        let min = hermitian_eigenvalues(&mat).last().copied().unwrap_or(T::zero());
        let scale = T::one().max(max_abs(&mat));
        if min < -T::tol(PSD_TOL) * scale {
            return Err(Error::NotPositive { min_eigenvalue: min.as_f64() });
        }
        Ok(DensityMatrix { dims, mat, normalized: false })
    }

    /// Internal constructor for operations known to preserve the invariants.
    pub(crate) fn from_parts(dims: HilbertDims, mat: CMatrix<T>, normalized: bool) -> Self {
        debug_assert_eq!(mat.nrows(), dims.total());
        DensityMatrix { dims, mat, normalized }
    }

    pub fn maximally_mixed(dims: HilbertDims) -> Self {
        let d = dims.total();
        let mat = CMatrix::<T>::identity(d, d) * re(T::one() / T::lit(d as f64));
        DensityMatrix { dims, mat, normalized: true }
    }

    /// Diagonal state with the given populations (must sum to 1).
    pub fn diagonal(dims: HilbertDims, populations: &[T]) -> Result<Self> {
        check_len(&dims, populations.len())?;
        let mat =
            CMatrix::<T>::from_diagonal(&CVector::from_iterator(populations.len(), populations.iter().map(|&p| re(p))));
        Self::new(dims, mat)
    }

    pub fn dims(&self) -> &HilbertDims {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Cx<T> {
        self.mat[(row, col)]
    }

    /// Real part of a diagonal entry (a population).
    #[inline]
    pub fn population(&self, index: usize) -> T {
        self.mat[(index, index)].re
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, i| acc + self.mat[(i, i)].re)
    }

    /// `Tr(rho^2)`, computed from the entries.
    pub fn purity(&self) -> T {
        self.mat.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// Frobenius distance to another state on the same space.
    pub fn frobenius_distance(&self, other: &DensityMatrix<T>) -> T {
        (&self.mat - &other.mat).iter().fold(T::zero(), |acc, c| acc + c.norm_sqr()).sqrt()
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &DensityMatrix<T>, lambda: T) -> Result<DensityMatrix<T>> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch("mixing states on different spaces".into()));
        }
        let mat = &self.mat * re(lambda) + &other.mat * re(T::one() - lambda);
        Ok(DensityMatrix::from_parts(self.dims.clone(), mat, self.normalized && other.normalized))
    }

    /// Weighted sum `sum_i w_i rho_i` of states on one space, validated.
    pub fn weighted_sum(terms: &[(T, DensityMatrix<T>)]) -> Result<DensityMatrix<T>> {
        let (_, first) = terms.first().ok_or(Error::EmptyOperands)?;
        let mut mat = CMatrix::<T>::zeros(first.dim(), first.dim());
        for (w, rho) in terms {
            if rho.dims != first.dims {
                return Err(Error::DimensionMismatch("terms on different spaces".into()));
            }
            mat += &rho.mat * re(*w);
        }
        DensityMatrix::new(first.dims.clone(), mat)
    }

    /// Conjugation `U rho U^dagger` by a unitary on the full space.
    pub fn conjugate_by(&self, u: &CMatrix<T>) -> Result<DensityMatrix<T>> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch("unitary size".into()));
        }
        let mat = u * &self.mat * u.adjoint();
        Ok(DensityMatrix::from_parts(self.dims.clone(), mat, self.normalized))
    }
}

fn check_len(dims: &HilbertDims, len: usize) -> Result<()> {
    if len != dims.total() {
        return Err(Error::DimensionMismatch(format!("{len} entries for total dimension {}", dims.total())));
    }
    Ok(())
}

fn check_square<T: Real>(dims: &HilbertDims, mat: &CMatrix<T>) -> Result<()> {
    if mat.nrows() != dims.total() || mat.ncols() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for total dimension {}",
            mat.nrows(),
            mat.ncols(),
            dims.total()
        )));
    }
    Ok(())
}

fn max_abs<T: Real>(mat: &CMatrix<T>) -> T {
    mat.iter().fold(T::zero(), |acc, &c| acc.max(modulus(c)))
}

fn check_hermitian<T: Real>(mat: &CMatrix<T>) -> Result<()> {
    let n = mat.nrows();
    let mut dev = T::zero();
    for i in 0..n {
        for j in i..n {
            dev = dev.max(modulus(mat[(i, j)] - mat[(j, i)].conj()));
        }
    }
    if dev > T::tol(HERMITIAN_TOL) * T::one().max(max_abs(mat)) {
        return Err(Error::NotHermitian { deviation: dev.as_f64() });
    }
    Ok(())
}

/// Hermitian part `(A + A^dagger)/2`, used before every eigensolve.
fn hermitize<T: Real>(mat: &CMatrix<T>) -> CMatrix<T> {
    (mat + mat.adjoint()) * re(T::lit(0.5))
}

fn hermitian_eigenvalues<T: Real>(mat: &CMatrix<T>) -> Vec<T> {
    let mut ev: Vec<T> = SymmetricEigen::new(hermitize(mat)).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Eigen-decomposition of a Hermitian operator, eigenvalues descending with
/// eigenvectors as the matching columns.
pub fn hermitian_eigen<T: Real>(mat: &CMatrix<T>) -> Result<(Vec<T>, CMatrix<T>)> {
    if mat.nrows() != mat.ncols() {
        return Err(Error::DimensionMismatch("eigensolve of non-square matrix".into()));
    }
    check_hermitian(mat)?;
    let eig = SymmetricEigen::new(hermitize(mat));
    let mut order: Vec<usize> = (0..mat.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::<T>::from_fn(mat.nrows(), mat.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues of a density matrix (or any validated operator), descending.
pub fn hermitian_spectrum<T: Real>(rho: &DensityMatrix<T>) -> Vec<T> {
    hermitian_eigenvalues(&rho.mat)
}

/// Eigenvalues of an arbitrary Hermitian matrix, descending.
pub fn operator_spectrum<T: Real>(mat: &CMatrix<T>) -> Result<Vec<T>> {
    if mat.nrows() != mat.ncols() {
        return Err(Error::DimensionMismatch("spectrum of non-square matrix".into()));
    }
    check_hermitian(mat)?;
    Ok(hermitian_eigenvalues(mat))
}

/// `X = A^{-1/2}` for a positive definite operator, so `X A X = I`.
///
/// Fails with [`Error::SingularMarginal`] when an eigenvalue is `<= tol`.
pub fn inv_sqrt_psd<T: Real>(op: &CMatrix<T>, tol: T) -> Result<CMatrix<T>> {
    let (values, vecs) = hermitian_eigen(op)?;
    let smallest = *values.last().ok_or(Error::EmptyOperands)?;
    if smallest <= tol {
        return Err(Error::SingularMarginal { eigenvalue: smallest.as_f64(), tol: tol.as_f64() });
    }
    let d = values.len();
    let scaled = CMatrix::<T>::from_fn(d, d, |r, c| vecs[(r, c)] * re(T::one() / values[c].sqrt()));
    Ok(&scaled * vecs.adjoint())
}

/// Rescales to unit trace.
pub fn normalize<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    let tr = rho.trace();
    if tr <= T::tol(MIN_TRACE) {
        return Err(Error::ZeroTrace { trace: tr.as_f64() });
    }
    let mat = &rho.mat * re(T::one() / tr);
    Ok(DensityMatrix::from_parts(rho.dims.clone(), mat, true))
}

/// Reduced state `Tr_{not keep}(rho)`; kept parties stay in ascending order.
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, keep: PartySubset) -> Result<DensityMatrix<T>> {
    rho.dims.check_subset(keep)?;
    let dk = rho.dims.subset_total(keep);
    let dt = rho.dims.total() / dk;
    let mut full = vec![0usize; dk * dt];
    for (i, (k, t)) in rho.dims.split_table(keep).into_iter().enumerate() {
        full[k * dt + t] = i;
    }
    let mat = CMatrix::<T>::from_fn(dk, dk, |a, b| {
        (0..dt).fold(Cx::new(T::zero(), T::zero()), |acc, t| acc + rho.mat[(full[a * dt + t], full[b * dt + t])])
    });
    Ok(DensityMatrix::from_parts(rho.dims.restrict(keep), mat, rho.normalized))
}

/// Values that can be combined with a tensor product.
pub trait TensorFactor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

impl<T: Real> TensorFactor for DensityMatrix<T> {
    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(DensityMatrix {
            dims: self.dims.concat(&other.dims)?,
            mat: self.mat.kronecker(&other.mat),
            normalized: self.normalized && other.normalized,
        })
    }
}

impl<T: Real> TensorFactor for PureState<T> {
    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(PureState {
            dims: self.dims.concat(&other.dims)?,
            amps: self.amps.kronecker(&other.amps),
            normalized: self.normalized && other.normalized,
        })
    }
}

/// `ops[0] ⊗ ops[1] ⊗ ...` with dimensions concatenated in order.
pub fn tensor_product<S: TensorFactor + Clone>(ops: &[S]) -> Result<S> {
    let (first, rest) = ops.split_first().ok_or(Error::EmptyOperands)?;
    rest.iter().try_fold(first.clone(), |acc, op| acc.tensor(op))
}

/// Applies `op` (a `d_p x d_p` matrix) on party `p` from the left and its
/// adjoint from the right: `(1 ⊗ op ⊗ 1) M (1 ⊗ op ⊗ 1)^dagger`.
pub(crate) fn conjugate_local<T: Real>(
    mat: &CMatrix<T>,
    dims: &HilbertDims,
    party: usize,
    op: &CMatrix<T>,
) -> CMatrix<T> {
    let d = dims.local(party);
    let stride: usize = dims.as_slice()[party + 1..].iter().product();
    let total = dims.total();
    let apply_rows = |m: &CMatrix<T>| -> CMatrix<T> {
        let mut out = CMatrix::<T>::zeros(total, total);
        let mut fiber = vec![Cx::new(T::zero(), T::zero()); d];
        for col in 0..total {
            for base in 0..total {
                if !(base / stride).is_multiple_of(d) {
                    continue;
                }
                for (a, f) in fiber.iter_mut().enumerate() {
                    *f = m[(base + a * stride, col)];
                }
                for a2 in 0..d {
                    let mut acc = Cx::new(T::zero(), T::zero());
                    for (a, f) in fiber.iter().enumerate() {
                        acc += op[(a2, a)] * *f;
                    }
                    out[(base + a2 * stride, col)] = acc;
                }
            }
        }
        out
    };
    // rows first, then columns via the adjoint
    let left = apply_rows(mat);
    apply_rows(&left.adjoint()).adjoint()
}

#[allow(dead_code)]
pub(crate) fn identity<T: Real>(d: usize) -> CMatrix<T> {
    DMatrix::identity(d, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn bell() -> PureState<f64> {
        let h = 0.5f64.sqrt();
        PureState::new(HilbertDims::new(vec![2, 2]).unwrap(), vec![re(h), re(0.0), re(0.0), re(h)]).unwrap()
    }

    fn ghz3() -> DensityMatrix<f64> {
        let h = 0.5f64.sqrt();
        let mut amps = vec![re(0.0); 8];
        amps[0] = re(h);
        amps[7] = re(h);
        PureState::new(HilbertDims::new(vec![2, 2, 2]).unwrap(), amps).unwrap().to_density()
    }

    fn close(a: &CMatrix<f64>, b: &CMatrix<f64>, tol: f64) -> bool {
        a.shape() == b.shape() && (a - b).iter().all(|c| modulus(*c) <= tol)
    }

    #[test]
    fn dims_validation() {
        assert!(HilbertDims::new(vec![]).is_err());
        assert!(HilbertDims::new(vec![2, 1]).is_err());
        assert!(HilbertDims::new(vec![2; 13]).is_err());
        assert_eq!(HilbertDims::new(vec![2, 3, 5]).unwrap().total(), 30);
    }

    #[test]
    fn tensor_of_maximally_mixed_qubits() {
        let q = HilbertDims::new(vec![2]).unwrap();
        let m = DensityMatrix::<f64>::maximally_mixed(q.clone());
        let t = tensor_product(&[m.clone(), m]).unwrap();
        assert_eq!(t.dims().as_slice(), &[2, 2]);
        assert!(close(t.matrix(), &(CMatrix::identity(4, 4) * re(0.25)), 1e-15));
    }

    #[test]
    fn tensor_of_basis_kets() {
        let q = HilbertDims::new(vec![2]).unwrap();
        let zero = PureState::<f64>::basis(q.clone(), &[0]).unwrap();
        let one = PureState::<f64>::basis(q, &[1]).unwrap();
        let t = tensor_product(&[zero, one]).unwrap();
        assert_eq!(t.amplitude(1), re(1.0));
        assert_eq!(t.norm_sqr(), 1.0);
    }

    #[test]
    fn tensor_of_two_bell_pairs() {
        let t = tensor_product(&[bell(), bell()]).unwrap().to_density();
        assert_eq!(t.dims().parties(), 4);
        assert!((t.entry(0, 15) - re(0.25)).norm() < 1e-15);
        assert!(tensor_product::<PureState<f64>>(&[]).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        let rho = bell().to_density();
        let a = partial_trace(&rho, PartySubset::singleton(0)).unwrap();
        assert!(close(a.matrix(), &(CMatrix::identity(2, 2) * re(0.5)), 1e-15));

        let q = HilbertDims::new(vec![2]).unwrap();
        let plus = PureState::new(q.clone(), vec![re(0.6), cx(0.0, 0.8)]).unwrap();
        let zero = PureState::<f64>::basis(q, &[0]).unwrap();
        let prod = tensor_product(&[zero.clone(), plus.clone(), zero]).unwrap().to_density();
        let mid = partial_trace(&prod, PartySubset::singleton(1)).unwrap();
        assert!(close(mid.matrix(), plus.to_density().matrix(), 1e-15));

        let bc = partial_trace(&ghz3(), PartySubset::from_bits(0b110)).unwrap();
        let expect = DensityMatrix::diagonal(HilbertDims::new(vec![2, 2]).unwrap(), &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(close(bc.matrix(), expect.matrix(), 1e-15));

        assert!(partial_trace(&rho, PartySubset::from_bits(0)).is_err());
        assert!(partial_trace(&rho, PartySubset::singleton(2)).is_err());
    }

    #[test]
    fn pure_reduction_matches_partial_trace() {
        let amps: Vec<_> = (0..12).map(|i| cx((i as f64).sin(), (i as f64 * 0.7).cos())).collect();
        let psi = PureState::normalized_from(HilbertDims::new(vec![2, 3, 2]).unwrap(), amps).unwrap();
        for bits in 1u16..8 {
            let keep = PartySubset::from_bits(bits);
            let a = psi.reduced(keep).unwrap();
            let b = partial_trace(&psi.to_density(), keep).unwrap();
            assert!(close(a.matrix(), b.matrix(), 1e-14), "bits {bits}");
        }
    }

    #[test]
    fn spectra() {
        let q = HilbertDims::new(vec![2]).unwrap();
        let m = DensityMatrix::<f64>::maximally_mixed(q.clone());
        assert_eq!(hermitian_spectrum(&m), vec![0.5, 0.5]);
        let z = PureState::<f64>::basis(q, &[0]).unwrap().to_density();
        let s = hermitian_spectrum(&z);
        assert!((s[0] - 1.0).abs() < 1e-15 && s[1].abs() < 1e-15);
        let d = DensityMatrix::<f64>::diagonal(HilbertDims::new(vec![3]).unwrap(), &[0.1, 0.8, 0.1]).unwrap();
        let s = hermitian_spectrum(&d);
        assert!((s[0] - 0.8).abs() < 1e-15 && (s[1] - 0.1).abs() < 1e-15 && (s[2] - 0.1).abs() < 1e-15);
        let bad = CMatrix::from_row_slice(2, 2, &[re(1.0), re(1.0), re(0.0), re(0.0)]);
        assert!(matches!(operator_spectrum(&bad), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn inverse_square_roots() {
        let i2 = CMatrix::<f64>::identity(2, 2);
        assert!(close(&inv_sqrt_psd(&i2, 1e-12).unwrap(), &i2, 1e-15));
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![re(4.0), re(1.0)]));
        let x = inv_sqrt_psd(&d, 1e-12).unwrap();
        let expect = CMatrix::from_diagonal(&CVector::from_vec(vec![re(0.5), re(1.0)]));
        assert!(close(&x, &expect, 1e-15));
        let sing = CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.0), re(0.0)]));
        assert!(matches!(inv_sqrt_psd(&sing, 1e-12), Err(Error::SingularMarginal { .. })));
    }

    #[test]
    fn normalization() {
        let q = HilbertDims::new(vec![2]).unwrap();
        let two = DensityMatrix::<f64>::new_unnormalized(q.clone(), CMatrix::identity(2, 2)).unwrap();
        let n = normalize(&two).unwrap();
        assert!(n.is_normalized());
        assert!(close(n.matrix(), DensityMatrix::maximally_mixed(q.clone()).matrix(), 1e-15));
        let zero = DensityMatrix::<f64>::new_unnormalized(q, CMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(normalize(&zero), Err(Error::ZeroTrace { .. })));
    }

    #[test]
    fn validation_names_failing_invariant() {
        let q = HilbertDims::new(vec![2]).unwrap();
        let tr2 = CMatrix::<f64>::identity(2, 2);
        assert!(matches!(DensityMatrix::new(q.clone(), tr2), Err(Error::TraceNotUnit { .. })));
        let neg = CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.5), re(-0.5)]));
        assert!(matches!(DensityMatrix::new(q.clone(), neg), Err(Error::NotPositive { .. })));
        let nh = CMatrix::from_row_slice(2, 2, &[re(0.5), cx(0.0, 0.1), cx(0.0, 0.1), re(0.5)]);
        assert!(matches!(DensityMatrix::new(q, nh), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn local_conjugation_matches_kronecker() {
        let dims = HilbertDims::new(vec![2, 3, 2]).unwrap();
        let amps: Vec<_> = (0..12).map(|i| cx((i as f64 * 1.3).sin(), (i as f64).cos())).collect();
        let rho = PureState::normalized_from(dims.clone(), amps).unwrap().to_density();
        let op = CMatrix::from_fn(3, 3, |r, c| cx(r as f64 + 0.5, c as f64 * 0.3 - 0.2));
        let full = identity::<f64>(2).kronecker(&op).kronecker(&identity(2));
        let expect = &full * rho.matrix() * full.adjoint();
        let got = conjugate_local(rho.matrix(), &dims, 1, &op);
        assert!(close(&got, &expect, 1e-13));
    }

    #[test]
    fn works_in_single_precision() {
        let h = 0.5f32.sqrt();
        let psi =
            PureState::<f32>::new(HilbertDims::new(vec![2, 2]).unwrap(), vec![re(h), re(0.0), re(0.0), re(h)]).unwrap();
        let a = partial_trace(&psi.to_density(), PartySubset::singleton(1)).unwrap();
        let s = hermitian_spectrum(&a);
        assert!((s[0] - 0.5).abs() < 1e-6 && (s[1] - 0.5).abs() < 1e-6);
    }
}
