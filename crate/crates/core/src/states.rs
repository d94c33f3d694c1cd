//! Example state families and the closed-form witness values they admit.
//!
//! Basis labels read party 0 first: `|abc>` has party A in `|a>`.

use crate::error::{Error, Result};
use crate::partitions::{gamma, MultiIndex, PartitionFamily, PartySubset};
use crate::scalar::{re, CMatrix, Real};
use crate::tensor::{DensityMatrix, HilbertDims, PureState};
use crate::witness::PairSet;

const PARAM_TOL: f64 = 1e-12;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(invalid(format!("{name}={x} outside [0, 1]")));
    }
    Ok(())
}

/// `sum_i coeffs[i] |i>^{⊗n}` on `n` parties of local dimension `d`.
pub fn ghz<T: Real>(n: usize, d: usize, coeffs: &[T]) -> Result<PureState<T>> {
    if coeffs.len() > d {
        return Err(invalid(format!("{} coefficients for local dimension {d}", coeffs.len())));
    }
    let dims = HilbertDims::uniform(n, d)?;
    let mut amps = vec![re(T::zero()); dims.total()];
    for (i, &c) in coeffs.iter().enumerate() {
        amps[MultiIndex::from_digits(vec![i; n]).linear(&dims)] = re(c);
    }
    PureState::new(dims, amps)
}

/// Balanced GHZ state `(|0..0> + ... + |d-1..d-1>)/sqrt(d)`.
pub fn ghz_balanced<T: Real>(n: usize, d: usize) -> Result<PureState<T>> {
    let c = T::one() / T::lit(d as f64).sqrt();
    ghz(n, d, &vec![c; d])
}

/// `sqrt(1-2e)|000> + sqrt(e)|111> + sqrt(e)|222>` on three qutrits.
pub fn psi_eps<T: Real>(eps: T) -> Result<PureState<T>> {
    let e = eps.as_f64();
    if !(0.0..=0.5).contains(&e) {
        return Err(invalid(format!("epsilon={e} outside [0, 1/2]")));
    }
    let two = T::lit(2.0);
    ghz(3, 3, &[(T::one() - two * eps).sqrt(), eps.sqrt(), eps.sqrt()])
}

/// Dense matrix of a product operator whose blocks act on the given party
/// groups. Every party must appear in exactly one group.
fn embed<T: Real>(dims: &HilbertDims, blocks: &[(&[usize], CMatrix<T>)]) -> CMatrix<T> {
    let total = dims.total();
    let labels: Vec<MultiIndex> = (0..total).map(|i| MultiIndex::from_linear(i, dims)).collect();
    let block_index =
        |digits: &[usize], parties: &[usize]| parties.iter().fold(0, |acc, &p| acc * dims.local(p) + digits[p]);
    CMatrix::<T>::from_fn(total, total, |r, c| {
        blocks.iter().fold(re(T::one()), |acc, (parties, op)| {
            let a = block_index(labels[r].digits(), parties);
            let b = block_index(labels[c].digits(), parties);
            acc * op[(a, b)]
        })
    })
}

fn projector<T: Real>(amps: &[T]) -> CMatrix<T> {
    let d = amps.len();
    CMatrix::<T>::from_fn(d, d, |r, c| re(amps[r] * amps[c]))
}

fn diag<T: Real>(values: &[T]) -> CMatrix<T> {
    let d = values.len();
    CMatrix::<T>::from_fn(d, d, |r, c| if r == c { re(values[r]) } else { re(T::zero()) })
}

fn scaled_identity<T: Real>(d: usize, s: T) -> CMatrix<T> {
    CMatrix::<T>::identity(d, d) * re(s)
}

/// Weights of the three "one party in noise, two in a Bell pair" terms and
/// of the GHZ term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rho1Params {
    pub p_a: f64,
    pub p_b: f64,
    pub p_c: f64,
    pub p_abc: f64,
}

impl Rho1Params {
    pub fn new(p_a: f64, p_b: f64, p_c: f64, p_abc: f64) -> Result<Self> {
        let params = Rho1Params { p_a, p_b, p_c, p_abc };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("pA", self.p_a), ("pB", self.p_b), ("pC", self.p_c), ("pABC", self.p_abc)] {
            if p.is_nan() || p < 0.0 {
                return Err(invalid(format!("{name}={p} is negative")));
            }
        }
        let sum = self.p_a + self.p_b + self.p_c + self.p_abc;
        if (sum - 1.0).abs() > PARAM_TOL {
            return Err(invalid(format!("weights sum to {sum}, expected 1")));
        }
        Ok(())
    }

    fn weights<T: Real>(&self) -> [T; 4] {
        [T::lit(self.p_a), T::lit(self.p_b), T::lit(self.p_c), T::lit(self.p_abc)]
    }
}

fn three_qubits() -> HilbertDims {
    HilbertDims::uniform(3, 2).expect("three qubits")
}

/// The three "noisy party" groupings: (noisy party, pair).
const NOISY_SPLITS: [(usize, [usize; 2]); 3] = [(0, [1, 2]), (1, [0, 2]), (2, [0, 1])];

/// `pA I_A/2 ⊗ Bell_BC + pB I_B/2 ⊗ Bell_AC + pC I_C/2 ⊗ Bell_AB + pABC GHZ`.
pub fn rho1<T: Real>(params: &Rho1Params) -> Result<DensityMatrix<T>> {
    params.validate()?;
    let dims = three_qubits();
    let h = T::lit(0.5).sqrt();
    let bell = projector(&[h, T::zero(), T::zero(), h]);
    let noise = scaled_identity::<T>(2, T::lit(0.5));
    let w = params.weights::<T>();
    let mut mat = CMatrix::<T>::zeros(8, 8);
    for (k, (single, pair)) in NOISY_SPLITS.iter().enumerate() {
        mat += embed(&dims, &[(&[*single], noise.clone()), (pair, bell.clone())]) * re(w[k]);
    }
    mat += ghz_balanced::<T>(3, 2)?.to_density().into_matrix() * re(w[3]);
    DensityMatrix::new(dims, mat)
}

/// The unnormalized state `pA M_A χ_BC + pB M_B χ_AC + pC M_C χ_AB + pABC ω`
/// with `χ ∝ sqrt2|00> + sqrt2/4|11>`, `ω ∝ 2|000> + 1/4|111>` and
/// `M = diag(1, 1/4)`. Local filters `diag(1/sqrt2, sqrt2)` on every party
/// take it to [`rho1`] with the same weights.
pub fn sigma_filtered<T: Real>(params: &Rho1Params) -> Result<DensityMatrix<T>> {
    params.validate()?;
    let dims = three_qubits();
    let s2 = T::lit(2.0).sqrt();
    let chi = projector(&[s2, T::zero(), T::zero(), s2 / T::lit(4.0)]);
    let m = diag(&[T::one(), T::lit(0.25)]);
    let mut omega_amps = vec![T::zero(); 8];
    omega_amps[0] = T::lit(2.0);
    omega_amps[7] = T::lit(0.25);
    let w = params.weights::<T>();
    let mut mat = CMatrix::<T>::zeros(8, 8);
    for (k, (single, pair)) in NOISY_SPLITS.iter().enumerate() {
        mat += embed(&dims, &[(&[*single], m.clone()), (pair, chi.clone())]) * re(w[k]);
    }
    mat += projector(&omega_amps) * re(w[3]);
    DensityMatrix::new_unnormalized(dims, mat)
}

/// The pair set `{(000,111), (000,110), (001,111)}` used with `rho1` and
/// `sigma_filtered` over `{A|BC, B|AC}`.
pub fn rho1_pairs() -> PairSet {
    PairSet::parse("000-111,000-110,001-111", &three_qubits()).expect("static pair set")
}

/// The family `{A|BC, B|AC}`.
pub fn rho1_family() -> PartitionFamily {
    PartitionFamily::new(3, vec![PartySubset::singleton(0), PartySubset::singleton(1)]).expect("static family")
}

/// `W_2(rho1, C1, {A|BC, B|AC})` in closed form:
/// `(pC + pABC - (pA + pB)/2 - 2 sqrt(pA pB)) / sqrt3`.
pub fn analytic_w2_rho1(params: &Rho1Params) -> Result<f64> {
    params.validate()?;
    let Rho1Params { p_a, p_b, p_c, p_abc } = *params;
    Ok((p_c + p_abc - (p_a + p_b) / 2.0 - 2.0 * (p_a * p_b).sqrt()) / 3f64.sqrt())
}

/// Largest closed-form `W_2` over the non-empty subsets of C1.
///
/// Per pair, the coherence and the swapped terms over `{A, B}` are
/// `(000,111)`: `pABC/2` with `(pA/4, pB/4)`, and for both `(000,110)` and
/// `(001,111)`: `pC/4` with `(sqrt(pA pB)/4, sqrt(pA pB)/4)`. Since `j`
/// covers the whole family the minimum is the full sum.
pub fn analytic_w2_rho1_best(params: &Rho1Params) -> Result<f64> {
    params.validate()?;
    let Rho1Params { p_a, p_b, p_c, p_abc } = *params;
    let ghz_pair = p_abc / 2.0 - (p_a + p_b) / 4.0;
    let bell_pair = p_c / 4.0 - (p_a * p_b).sqrt() / 2.0;
    let mut best = f64::NEG_INFINITY;
    for mask in 1u32..8 {
        let with_ghz = mask & 1 != 0;
        let bells = (mask >> 1).count_ones() as f64;
        let n = mask.count_ones() as f64;
        let sum = if with_ghz { ghz_pair } else { 0.0 } + bells * bell_pair;
        best = best.max(2.0 / n.sqrt() * sum);
    }
    Ok(best)
}

/// Left side of the decomposability condition for `sigma_filtered`:
/// `pABC + 5/4 pC - (pA + pB)/2 - 5/2 sqrt(pA pB)`. The engine value on the
/// unnormalized state with C1 over `{A|BC, B|AC}` is this divided by `sqrt3`.
pub fn analytic_w_filtered(params: &Rho1Params) -> Result<f64> {
    params.validate()?;
    let Rho1Params { p_a, p_b, p_c, p_abc } = *params;
    Ok(p_abc + 1.25 * p_c - (p_a + p_b) / 2.0 - 2.5 * (p_a * p_b).sqrt())
}

/// `(1-p) GHZ_N + q dephased(GHZ_N) + (p-q) I/2^N`, with
/// `GHZ_N = alpha|0..0> + beta|1..1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rho2Params {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
}

impl Rho2Params {
    pub fn new(n: usize, alpha: f64, beta: f64, p: f64, q: f64) -> Result<Self> {
        let params = Rho2Params { n, alpha, beta, p, q };
        params.validate()?;
        Ok(params)
    }

    /// Balanced amplitudes `alpha = beta = 1/sqrt2`.
    pub fn balanced(n: usize, p: f64, q: f64) -> Result<Self> {
        let h = 0.5f64.sqrt();
        Self::new(n, h, h, p, q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid(format!("N={} needs at least two parties", self.n)));
        }
        let norm = self.alpha * self.alpha + self.beta * self.beta;
        if (norm - 1.0).abs() > PARAM_TOL {
            return Err(invalid(format!("alpha^2 + beta^2 = {norm}, expected 1")));
        }
        check_unit_interval("p", self.p)?;
        check_unit_interval("q", self.q)?;
        if self.q > self.p {
            return Err(invalid(format!("q={} exceeds p={}", self.q, self.p)));
        }
        Ok(())
    }
}

pub fn rho2<T: Real>(params: &Rho2Params) -> Result<DensityMatrix<T>> {
    params.validate()?;
    let n = params.n;
    let dims = HilbertDims::uniform(n, 2)?;
    let d = dims.total();
    let (alpha, beta) = (T::lit(params.alpha), T::lit(params.beta));
    let (p, q) = (T::lit(params.p), T::lit(params.q));
    let noise = (p - q) / T::lit(d as f64);
    let mut mat = CMatrix::<T>::from_diagonal_element(d, d, re(noise));
    let (lo, hi) = (0, d - 1);
    let ghz_w = T::one() - p;
    mat[(lo, lo)] += re((ghz_w + q) * alpha * alpha);
    mat[(hi, hi)] += re((ghz_w + q) * beta * beta);
    mat[(lo, hi)] += re(ghz_w * alpha * beta);
    mat[(hi, lo)] += re(ghz_w * alpha * beta);
    DensityMatrix::new(dims, mat)
}

/// `2((1-p)|alpha beta| - gamma(k) (p-q)/2^N)`, the value of `W_{gamma(k)}`
/// over all bipartitions with `C = {(0^N, 1^N)}`.
pub fn analytic_wgamma_rho2(params: &Rho2Params, k: usize) -> Result<f64> {
    params.validate()?;
    let g = gamma(params.n, k)? as f64;
    let noise = (params.p - params.q) / 2f64.powi(params.n as i32);
    Ok(2.0 * ((1.0 - params.p) * (params.alpha * params.beta).abs() - g * noise))
}

/// `(1-p-q) GHZ(3, 5) + p I_A/5 ⊗ GHZ_BC(2, 5) + q I/125`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rho3Params {
    pub p: f64,
    pub q: f64,
}

impl Rho3Params {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        let params = Rho3Params { p, q };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_interval("p", self.p)?;
        check_unit_interval("q", self.q)?;
        if self.p + self.q > 1.0 + PARAM_TOL {
            return Err(invalid(format!("p + q = {} exceeds 1", self.p + self.q)));
        }
        Ok(())
    }
}

pub fn rho3<T: Real>(params: &Rho3Params) -> Result<DensityMatrix<T>> {
    params.validate()?;
    let dims = HilbertDims::uniform(3, 5)?;
    let (p, q) = (T::lit(params.p), T::lit(params.q));
    let ghz3 = ghz_balanced::<T>(3, 5)?.to_density().into_matrix();
    let ghz2 = ghz_balanced::<T>(2, 5)?.to_density().into_matrix();
    let noisy_a = embed(&dims, &[(&[0], scaled_identity(5, T::lit(0.2))), (&[1, 2], ghz2)]);
    let white = scaled_identity::<T>(125, T::one() / T::lit(125.0));
    let mat = ghz3 * re(T::one() - p - q) + noisy_a * re(p) + white * re(q);
    DensityMatrix::new(dims, mat)
}

fn check_channel_param(name: &str, q: f64) -> Result<()> {
    check_unit_interval(name, q)
}

fn phi_plus<T: Real>() -> CMatrix<T> {
    let h = T::lit(0.5).sqrt();
    projector(&[h, T::zero(), T::zero(), h])
}

fn four_qubits() -> HilbertDims {
    HilbertDims::uniform(4, 2).expect("four qubits")
}

/// Choi state of the two-qubit global depolarizing channel,
/// `q φ+_{AA'} ⊗ φ+_{BB'} + (1-q) I/16`, party order `A, A', B, B'`.
pub fn cj_global<T: Real>(q: f64) -> Result<DensityMatrix<T>> {
    check_channel_param("q", q)?;
    let dims = four_qubits();
    let qt = T::lit(q);
    let phi = phi_plus::<T>();
    let mat = phi.kronecker(&phi) * re(qt) + scaled_identity(16, (T::one() - qt) / T::lit(16.0));
    DensityMatrix::new(dims, mat)
}

/// Choi state of the local depolarizing channel `Φ_q1 ⊗ Φ_q2`, party order
/// `A, A', B, B'`: each pair is `q_i φ+ + (1 - q_i) I/4`.
pub fn cj_local<T: Real>(q1: f64, q2: f64) -> Result<DensityMatrix<T>> {
    check_channel_param("q1", q1)?;
    check_channel_param("q2", q2)?;
    let dims = four_qubits();
    let pair = |q: f64| {
        let qt = T::lit(q);
        phi_plus::<T>() * re(qt) + scaled_identity(4, (T::one() - qt) / T::lit(4.0))
    };
    DensityMatrix::new(dims, pair(q1).kronecker(&pair(q2)))
}

/// `C2 = {(0000, 1111)}`.
pub fn cj_pairs() -> PairSet {
    PairSet::parse("0000-1111", &four_qubits()).expect("static pair set")
}

/// `{A|A'BB', B|AA'B'}` in the order `A, A', B, B'`.
pub fn cj_family() -> PartitionFamily {
    PartitionFamily::new(4, vec![PartySubset::singleton(0), PartySubset::singleton(2)]).expect("static family")
}

/// `(3 q1 q2 - 1)/8` as quoted in the literature. The engine, which counts
/// both orientations of each pair, returns twice this; the sign change at
/// `q1 q2 = 1/3` is the same.
pub fn analytic_w2_cj(q1: f64, q2: f64) -> Result<f64> {
    check_channel_param("q1", q1)?;
    check_channel_param("q2", q2)?;
    Ok((3.0 * q1 * q2 - 1.0) / 8.0)
}

/// Global-channel form of [`analytic_w2_cj`].
pub fn analytic_w2_cj_global(q: f64) -> Result<f64> {
    check_channel_param("q", q)?;
    Ok((3.0 * q - 1.0) / 8.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{all_bipartitions, subsets_of_size};
    use crate::tensor::normalize;
    use crate::witness::witness;

    fn idx(text: &str, dims: &HilbertDims) -> usize {
        MultiIndex::parse(text, dims).unwrap().linear(dims)
    }

    #[test]
    fn ghz_rejects_bad_inputs() {
        assert!(ghz::<f64>(3, 2, &[0.5, 0.5, 0.5]).is_err());
        assert!(ghz::<f64>(3, 2, &[0.5, 0.5]).is_err());
        let psi = ghz::<f64>(3, 3, &[0.8f64.sqrt(), 0.1f64.sqrt(), 0.1f64.sqrt()]).unwrap();
        assert_eq!(psi, psi_eps(0.1).unwrap());
    }

    #[test]
    fn rho1_corners() {
        let ghz_only = rho1::<f64>(&Rho1Params::new(0.0, 0.0, 0.0, 1.0).unwrap()).unwrap();
        let g = ghz_balanced::<f64>(3, 2).unwrap().to_density();
        assert!(ghz_only.frobenius_distance(&g) < 1e-15);

        let a = rho1::<f64>(&Rho1Params::new(1.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        let dims = a.dims().clone();
        assert!((a.population(idx("000", &dims)) - 0.25).abs() < 1e-15);
        assert!((a.population(idx("100", &dims)) - 0.25).abs() < 1e-15);
        assert!((a.entry(idx("000", &dims), idx("011", &dims)).re - 0.25).abs() < 1e-15);
        assert!(a.entry(idx("000", &dims), idx("111", &dims)).norm() < 1e-15);

        let u = rho1::<f64>(&Rho1Params::new(0.25, 0.25, 0.25, 0.25).unwrap()).unwrap();
        assert!((u.population(0) - 5.0 / 16.0).abs() < 1e-15);
        assert!(Rho1Params::new(0.5, 0.5, 0.5, -0.5).is_err());
        assert!(Rho1Params::new(0.5, 0.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn rho1_engine_matches_closed_form() {
        let grid = [0.0, 0.1, 0.25, 0.4];
        for &pa in &grid {
            for &pb in &grid {
                for &pabc in &grid {
                    let pc = 1.0 - pa - pb - pabc;
                    if pc < 0.0 {
                        continue;
                    }
                    let params = Rho1Params::new(pa, pb, pc, pabc).unwrap();
                    let rho = rho1::<f64>(&params).unwrap();
                    let w = witness(&rho, &rho1_pairs(), &rho1_family(), 2).unwrap();
                    assert!((w.value - analytic_w2_rho1(&params).unwrap()).abs() < 1e-12);
                }
            }
        }
        let pure = Rho1Params::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert!((analytic_w2_rho1(&pure).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rho1_best_subset_matches_engine() {
        let params = Rho1Params::new(0.3, 0.05, 0.4, 0.25).unwrap();
        let rho = rho1::<f64>(&params).unwrap();
        let c1 = rho1_pairs();
        let mut best = f64::NEG_INFINITY;
        for mask in 1usize..8 {
            let pairs = (0..3).filter(|i| mask & (1 << i) != 0).map(|i| c1.pairs()[i].clone()).collect();
            let c = PairSet::new(pairs).unwrap();
            best = best.max(witness(&rho, &c, &rho1_family(), 2).unwrap().value);
        }
        assert!((best - analytic_w2_rho1_best(&params).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn sigma_examples() {
        let pure = sigma_filtered::<f64>(&Rho1Params::new(0.0, 0.0, 0.0, 1.0).unwrap()).unwrap();
        assert!((pure.entry(0, 7).re - 0.5).abs() < 1e-15);
        assert!((pure.population(0) - 4.0).abs() < 1e-15);

        let params = Rho1Params::new(0.2, 0.3, 0.1, 0.4).unwrap();
        let sigma = sigma_filtered::<f64>(&params).unwrap();
        assert!((sigma.entry(0, 7).re - 0.4 / 2.0).abs() < 1e-15);
        let w = witness(&sigma, &rho1_pairs(), &rho1_family(), 2).unwrap();
        assert!((w.value * 3f64.sqrt() - analytic_w_filtered(&params).unwrap()).abs() < 1e-12);
        assert!(normalize(&sigma).unwrap().is_normalized());
    }

    #[test]
    fn rho2_structure_and_closed_form() {
        let params = Rho2Params::balanced(5, 0.3, 0.1).unwrap();
        let rho = rho2::<f64>(&params).unwrap();
        let d = 32;
        for r in 0..d {
            for c in 0..d {
                if r != c && !(r == 0 && c == d - 1 || r == d - 1 && c == 0) {
                    assert_eq!(rho.entry(r, c).norm(), 0.0);
                }
            }
        }
        assert!((rho.entry(0, d - 1).re - 0.7 * 0.5).abs() < 1e-15);
        let fam = all_bipartitions(5).unwrap();
        let c = PairSet::parse("00000-11111", rho.dims()).unwrap();
        for k in 1..5 {
            let j = gamma(5, k).unwrap();
            let w = witness(&rho, &c, &fam, j).unwrap().value;
            let closed = analytic_wgamma_rho2(&params, k).unwrap();
            assert!((w - closed).abs() < 1e-12);
            let expected = 2.0 * (0.7 / 2.0 - j as f64 * 0.2 / 32.0);
            assert!((closed - expected).abs() < 1e-15);
        }
        let noise = rho2::<f64>(&Rho2Params::balanced(3, 1.0, 0.0).unwrap()).unwrap();
        assert!(noise.frobenius_distance(&DensityMatrix::maximally_mixed(noise.dims().clone())) < 1e-15);
        assert!(Rho2Params::balanced(3, 0.2, 0.3).is_err());
        assert!(Rho2Params::new(3, 0.6, 0.6, 0.2, 0.1).is_err());
    }

    #[test]
    fn rho3_examples() {
        let pure = rho3::<f64>(&Rho3Params::new(0.0, 0.0).unwrap()).unwrap();
        let singles = subsets_of_size(3, 1).unwrap();
        let pairs: Vec<String> = (0..5).flat_map(|a| (a + 1..5).map(move |b| format!("{a}{a}{a}-{b}{b}{b}"))).collect();
        let c = PairSet::parse(&pairs.join(","), pure.dims()).unwrap();
        let w = witness(&pure, &c, &singles, 1).unwrap().value;
        assert!((w - 4.0 / 10f64.sqrt()).abs() < 1e-12);
        assert_eq!(crate::entropy::dimension_from_witness(w).unwrap(), 5);

        let a = rho3::<f64>(&Rho3Params::new(1.0, 0.0).unwrap()).unwrap();
        let ma = crate::tensor::partial_trace(&a, PartySubset::singleton(0)).unwrap();
        assert!(ma.frobenius_distance(&DensityMatrix::maximally_mixed(ma.dims().clone())) < 1e-15);
        assert!(Rho3Params::new(0.7, 0.4).is_err());
    }

    #[test]
    fn cj_examples() {
        let full = cj_global::<f64>(1.0).unwrap();
        let phi = phi_plus::<f64>();
        assert!((full.matrix() - phi.kronecker(&phi)).norm() < 1e-15);
        let white = cj_global::<f64>(0.0).unwrap();
        assert!((white.population(5) - 1.0 / 16.0).abs() < 1e-15);
        for &q in &[0.0, 0.2, 1.0 / 3.0, 0.5, 0.9, 1.0] {
            let g = cj_global::<f64>(q).unwrap();
            let w = witness(&g, &cj_pairs(), &cj_family(), 2).unwrap().value;
            assert!((w - 2.0 * analytic_w2_cj_global(q).unwrap()).abs() < 1e-12);
            for &q2 in &[0.3, 0.8, 1.0] {
                let l = cj_local::<f64>(q, q2).unwrap();
                let w = witness(&l, &cj_pairs(), &cj_family(), 2).unwrap().value;
                assert!((w - 2.0 * analytic_w2_cj(q, q2).unwrap()).abs() < 1e-12);
            }
        }
        assert!(analytic_w2_cj_global(1.0 / 3.0).unwrap().abs() < 1e-16);
        assert!(cj_global::<f64>(1.5).is_err());
    }
}
