//! Sampling references used to check the witnesses: Haar-random states and
//! unitaries, convex-roof upper bounds from sampled decompositions, and
//! random `k`-separable mixtures.
//!
//! Every sampler takes an explicit seed. Repeated trials draw from separate
//! ChaCha streams of that seed, so trial `t` produces the same numbers no
//! matter how many other trials run or in which order.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::entropy::{entropy_vector_pure, EntropyKind, EntropyVector};
use crate::error::{Error, Result};
use crate::partitions::{MultiIndex, PartitionFamily};
use crate::scalar::{cx, re, CMatrix, CVector, Cx};
use crate::tensor::{hermitian_eigen, DensityMatrix, HilbertDims, PureState};

/// Eigenvalues below this fraction of the largest one are dropped when
/// building decompositions.
pub const RANK_TOL: f64 = 1e-12;
/// Extra ancilla dimensions beyond the rank in sampled isometries.
pub const ANCILLA_EXTRA: usize = 2;

/// Generator for trial `trial` of the run seeded by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Cx<f64> {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    cx(a, b)
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed `d x d` unitary (QR of a Ginibre matrix with the phases
/// of `R`'s diagonal absorbed into `Q`).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix<f64> {
    let qr = ginibre(d, d, rng).qr();
    let (mut q, r) = qr.unpack();
    for c in 0..d {
        let x = r[(c, c)];
        let phase = if x.norm() > 0.0 { x / x.norm() } else { re(1.0) };
        for row in 0..d {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dims: &HilbertDims, rng: &mut R) -> PureState<f64> {
    let amps: Vec<Cx<f64>> = (0..dims.total()).map(|_| gaussian(rng)).collect();
    PureState::normalized_from(dims.clone(), amps).expect("Gaussian vector is nonzero")
}

/// `G G^dagger / Tr` for a `d x rank` Ginibre matrix `G` (Hilbert-Schmidt
/// measure when `rank = d`).
pub fn random_mixed_state<R: Rng + ?Sized>(dims: &HilbertDims, rank: usize, rng: &mut R) -> Result<DensityMatrix<f64>> {
    if rank == 0 {
        return Err(Error::InvalidParameter("rank must be positive".into()));
    }
    let g = ginibre(dims.total(), rank, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(dims.clone(), m * re(1.0 / tr))
}

/// A decomposition `rho = sum_i p_i |psi_i><psi_i|` with its averaged
/// ordered entropy vector.
#[derive(Clone, Debug)]
pub struct DecompositionSample {
    pub weights: Vec<f64>,
    pub states: Vec<PureState<f64>>,
    /// `sum_i p_i sort(E(psi_i))`, each pure vector sorted before averaging.
    pub average: EntropyVector<f64>,
}

impl DecompositionSample {
    /// `||sum_i p_i |psi_i><psi_i| - rho||_F`.
    pub fn reconstruction_error(&self, rho: &DensityMatrix<f64>) -> f64 {
        let mut m = rho.matrix().clone() * re(-1.0);
        for (w, psi) in self.weights.iter().zip(&self.states) {
            m += psi.to_density().into_matrix() * re(*w);
        }
        m.norm()
    }
}

/// Columns `sqrt(lambda_k) v_k` of the spectral decomposition.
fn spectral_columns(rho: &DensityMatrix<f64>) -> Result<CMatrix<f64>> {
    let (values, vecs) = hermitian_eigen(rho.matrix())?;
    let top = values.first().copied().unwrap_or(0.0);
    let kept: Vec<usize> = (0..values.len()).filter(|&k| values[k] > RANK_TOL * top).collect();
    let d = rho.dim();
    Ok(DMatrix::from_fn(d, kept.len(), |r, c| vecs[(r, kept[c])] * re(values[kept[c]].sqrt())))
}

fn decomposition_from(
    rho: &DensityMatrix<f64>,
    vectors: &CMatrix<f64>,
    family: &PartitionFamily,
    kind: EntropyKind,
) -> Result<DecompositionSample> {
    let total = rho.trace();
    let mut weights = Vec::new();
    let mut states = Vec::new();
    let mut acc = vec![0.0; family.len()];
    for c in 0..vectors.ncols() {
        let col: CVector<f64> = vectors.column(c).into_owned();
        let w = col.norm_squared();
        if w <= RANK_TOL * total {
            continue;
        }
        let psi = PureState::normalized_from(rho.dims().clone(), col.iter().copied().collect())?;
        let e = entropy_vector_pure(&psi, family, kind)?;
        for (a, v) in acc.iter_mut().zip(e.values()) {
            *a += w / total * v;
        }
        weights.push(w / total);
        states.push(psi);
    }
    let wsum: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= wsum;
    }
    for a in acc.iter_mut() {
        *a /= wsum;
    }
    Ok(DecompositionSample { weights, states, average: EntropyVector::new(acc, family.clone(), kind)? })
}

/// Trial `trial` of [`roof_upper_bound`]: trial 0 is the spectral
/// decomposition, later trials mix it with the first `rank` columns of a
/// Haar unitary on `rank + 2` dimensions.
pub fn sample_decomposition(
    rho: &DensityMatrix<f64>,
    family: &PartitionFamily,
    kind: EntropyKind,
    seed: u64,
    trial: u64,
) -> Result<DecompositionSample> {
    let a = spectral_columns(rho)?;
    if trial == 0 {
        return decomposition_from(rho, &a, family, kind);
    }
    let rank = a.ncols();
    let mut rng = trial_rng(seed, trial);
    let u = haar_unitary(rank + ANCILLA_EXTRA, &mut rng);
    // psi_i = sum_k U_{ik} sqrt(lambda_k) v_k, one column per i
    let iso = u.columns(0, rank).transpose();
    decomposition_from(rho, &(a * iso), family, kind)
}

/// Entrywise minimum, over `trials` sampled decompositions, of the averaged
/// ordered entropy vector. Every sample is an honest decomposition, so the
/// result bounds the convex roof from above; more trials only lower it.
pub fn roof_upper_bound(
    rho: &DensityMatrix<f64>,
    family: &PartitionFamily,
    trials: usize,
    kind: EntropyKind,
    seed: u64,
) -> Result<EntropyVector<f64>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is needed".into()));
    }
    let mut best: Option<Vec<f64>> = None;
    for t in 0..trials as u64 {
        let s = sample_decomposition(rho, family, kind, seed, t)?;
        best = Some(match best {
            None => s.average.values().to_vec(),
            Some(b) => b.iter().zip(s.average.values()).map(|(x, y)| x.min(*y)).collect(),
        });
    }
    EntropyVector::new(best.expect("trials >= 1"), family.clone(), kind)
}

/// Uniformly random assignment of `n` parties to exactly `k` non-empty
/// blocks (rejection-sampled surjections, uniform over set partitions).
pub fn random_block_labels<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        if (0..k).all(|b| labels.contains(&b)) {
            return labels;
        }
    }
}

/// Random pure state that factorizes across the blocks given by `labels`.
pub fn random_block_product<R: Rng + ?Sized>(dims: &HilbertDims, labels: &[usize], rng: &mut R) -> PureState<f64> {
    let blocks = labels.iter().max().map_or(0, |m| m + 1);
    let members: Vec<Vec<usize>> =
        (0..blocks).map(|b| (0..labels.len()).filter(|&p| labels[p] == b).collect()).collect();
    let factors: Vec<PureState<f64>> = members
        .iter()
        .map(|parties| {
            let local =
                HilbertDims::new(parties.iter().map(|&p| dims.local(p)).collect()).expect("block of valid parties");
            random_pure_state(&local, rng)
        })
        .collect();
    let amps: Vec<Cx<f64>> = (0..dims.total())
        .map(|i| {
            let digits = MultiIndex::from_linear(i, dims);
            members.iter().zip(&factors).fold(re(1.0), |acc, (parties, f)| {
                let j = parties.iter().fold(0, |a, &p| a * dims.local(p) + digits.digits()[p]);
                acc * f.amplitude(j)
            })
        })
        .collect();
    PureState::normalized_from(dims.clone(), amps).expect("product of normalized factors")
}

/// Mixture of `terms` random pure states, each a product across its own
/// uniformly drawn `k`-block partition, with flat-Dirichlet weights.
pub fn random_k_separable(dims: &HilbertDims, k: usize, terms: usize, seed: u64) -> Result<DensityMatrix<f64>> {
    let n = dims.parties();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k={k} outside 1..={n}")));
    }
    if terms == 0 {
        return Err(Error::InvalidParameter("at least one term is needed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let d = dims.total();
    let mut m = CMatrix::<f64>::zeros(d, d);
    for w in raw {
        let labels = random_block_labels(n, k, &mut rng);
        let psi = random_block_product(dims, &labels, &mut rng);
        m += psi.to_density().into_matrix() * re(w / total);
    }
    DensityMatrix::new(dims.clone(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{all_bipartitions, PartySubset};
    use crate::states::{ghz_balanced, rho1, Rho1Params};

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = trial_rng(7, 0);
        let u = haar_unitary(5, &mut rng);
        assert!((&u * u.adjoint() - CMatrix::<f64>::identity(5, 5)).norm() < 1e-12);
    }

    #[test]
    fn pure_state_bound_is_exact() {
        let ghz = ghz_balanced::<f64>(3, 2).unwrap();
        let fam = all_bipartitions(3).unwrap();
        let exact = entropy_vector_pure(&ghz, &fam, EntropyKind::Linear).unwrap();
        let bound = roof_upper_bound(&ghz.to_density(), &fam, 5, EntropyKind::Linear, 1).unwrap();
        for (a, b) in exact.values().iter().zip(bound.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let r1 = rho1::<f64>(&Rho1Params::new(0.0, 0.0, 0.0, 1.0).unwrap()).unwrap();
        let b1 = roof_upper_bound(&r1, &fam, 3, EntropyKind::Linear, 2).unwrap();
        assert!(b1.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn maximally_mixed_pair_has_product_decomposition() {
        let dims = HilbertDims::new(vec![2, 2]).unwrap();
        let rho = DensityMatrix::<f64>::maximally_mixed(dims);
        let fam = all_bipartitions(2).unwrap();
        let b = roof_upper_bound(&rho, &fam, 1, EntropyKind::Linear, 0).unwrap();
        assert!(b.values()[0] < 1e-6);
    }

    #[test]
    fn samples_reconstruct_the_state() {
        let dims = HilbertDims::new(vec![2, 3]).unwrap();
        let mut rng = trial_rng(3, 0);
        let rho = random_mixed_state(&dims, 3, &mut rng).unwrap();
        let fam = all_bipartitions(2).unwrap();
        for t in 0..5 {
            let s = sample_decomposition(&rho, &fam, EntropyKind::Linear, 11, t).unwrap();
            assert!(s.reconstruction_error(&rho) < 1e-10);
            assert!((s.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_decreases_with_trials() {
        let dims = HilbertDims::uniform(3, 2).unwrap();
        let rho = random_mixed_state(&dims, 2, &mut trial_rng(5, 0)).unwrap();
        let fam = all_bipartitions(3).unwrap();
        let mut prev = roof_upper_bound(&rho, &fam, 1, EntropyKind::Linear, 9).unwrap();
        for trials in [2, 5, 10] {
            let next = roof_upper_bound(&rho, &fam, trials, EntropyKind::Linear, 9).unwrap();
            assert!(next.dominated_by(&prev, 0.0).unwrap());
            prev = next;
        }
    }

    #[test]
    fn k_separable_draws() {
        let dims = HilbertDims::uniform(3, 2).unwrap();
        let a = random_k_separable(&dims, 2, 4, 42).unwrap();
        let b = random_k_separable(&dims, 2, 4, 42).unwrap();
        assert_eq!(a, b);
        assert!(random_k_separable(&dims, 4, 4, 1).is_err());
        // fully separable: every single-party cut of each term is product
        let mut rng = trial_rng(1, 0);
        let psi = random_block_product(&dims, &random_block_labels(3, 3, &mut rng), &mut rng);
        for p in 0..3 {
            let r = psi.reduced(PartySubset::singleton(p)).unwrap();
            assert!((r.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn block_labels_cover_all_blocks() {
        let mut rng = trial_rng(0, 0);
        for _ in 0..100 {
            let l = random_block_labels(5, 3, &mut rng);
            assert!((0..3).all(|b| l.contains(&b)));
        }
    }
}
