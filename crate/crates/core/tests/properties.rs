use entvec::classify::k_separability_scan;
use entvec::entropy::{entropy_vector_pure, s2_bound_from_witness, EntropyKind};
use entvec::normalform::{apply_filters, marginal_flatness, normal_form};
use entvec::oracle::{random_k_separable, random_mixed_state, random_pure_state, roof_upper_bound, trial_rng};
use entvec::partitions::{all_bipartitions, gamma, MultiIndex, PartitionFamily, PartySubset};
use entvec::states::{self, Rho1Params, Rho2Params, Rho3Params};
use entvec::witness::{select_pairs, witness, PairChoice, PairSet};
use entvec::{DensityMatrix, HilbertDims};
use proptest::prelude::*;
use rand::Rng;

const DIMS: &[&[usize]] = &[&[2, 2], &[2, 3], &[3, 3], &[2, 2, 2], &[2, 2, 3], &[2, 2, 2, 2]];

fn dims_strategy() -> impl Strategy<Value = HilbertDims> {
    (0..DIMS.len()).prop_map(|i| HilbertDims::new(DIMS[i].to_vec()).unwrap())
}

/// A random non-empty family drawn from the bipartitions.
fn random_family(n: usize, rng: &mut impl Rng) -> PartitionFamily {
    let all = all_bipartitions(n).unwrap();
    loop {
        let pick: Vec<PartySubset> = all.iter().filter(|_| rng.random_bool(0.6)).collect();
        if !pick.is_empty() {
            return PartitionFamily::new(n, pick).unwrap();
        }
    }
}

/// Up to four random distinct pairs of basis labels.
fn random_pairs(dims: &HilbertDims, rng: &mut impl Rng) -> PairSet {
    let d = dims.total();
    let mut pairs: Vec<(MultiIndex, MultiIndex)> = Vec::new();
    let count = rng.random_range(1..=4);
    while pairs.len() < count {
        let a = rng.random_range(0..d);
        let b = rng.random_range(0..d);
        if a == b {
            continue;
        }
        let (a, b) = (a.min(b), a.max(b));
        let pa = MultiIndex::from_linear(a, dims);
        let pb = MultiIndex::from_linear(b, dims);
        if !pairs.iter().any(|(x, y)| *x == pa && *y == pb) {
            pairs.push((pa, pb));
        }
    }
    PairSet::new(pairs).unwrap()
}

fn choose_pairs(rho: &DensityMatrix<f64>, fam: &PartitionFamily, j: usize, rng: &mut impl Rng) -> PairSet {
    if rng.random_bool(0.5) {
        if let Ok(c) = select_pairs(rho, fam, j, 2 * rho.dims().max_local()) {
            return c;
        }
    }
    random_pairs(rho.dims(), rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constructors_give_valid_states(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let mut w: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let last = 1.0 - w[0] - w[1] - w[2];
        let p1 = Rho1Params::new(w[0], w[1], w[2], last.max(0.0)).unwrap();
        let r1 = states::rho1::<f64>(&p1).unwrap();
        prop_assert!(DensityMatrix::new(r1.dims().clone(), r1.matrix().clone()).is_ok());
        let sigma = states::sigma_filtered::<f64>(&p1).unwrap();
        prop_assert!(DensityMatrix::new_unnormalized(sigma.dims().clone(), sigma.matrix().clone()).is_ok());

        let n = rng.random_range(2..=6);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
        let p: f64 = rng.random();
        let q = p * rng.random::<f64>();
        let r2 = states::rho2::<f64>(&Rho2Params::new(n, theta.cos(), theta.sin(), p, q).unwrap()).unwrap();
        prop_assert!(DensityMatrix::new(r2.dims().clone(), r2.matrix().clone()).is_ok());

        let a: f64 = rng.random();
        let b = (1.0 - a) * rng.random::<f64>();
        let r3 = states::rho3::<f64>(&Rho3Params::new(a, b).unwrap()).unwrap();
        prop_assert!(DensityMatrix::new(r3.dims().clone(), r3.matrix().clone()).is_ok());

        prop_assert!(states::cj_global::<f64>(rng.random()).is_ok());
        prop_assert!(states::cj_local::<f64>(rng.random(), rng.random()).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// The witness never exceeds the exact ordered linear-entropy entry of a
    /// pure state, whatever the pair set.
    #[test]
    fn witness_bounds_pure_state_entropy(dims in dims_strategy(), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let psi = random_pure_state(&dims, &mut rng);
        let rho = psi.to_density();
        let fam = random_family(dims.parties(), &mut rng);
        let exact = entropy_vector_pure(&psi, &fam, EntropyKind::Linear).unwrap();
        let j = rng.random_range(1..=fam.len());
        let c = choose_pairs(&rho, &fam, j, &mut rng);
        let w = witness(&rho, &c, &fam, j).unwrap();
        prop_assert!(w.value <= exact.entry(j).unwrap() + 1e-9,
            "W_{} = {} above entropy {}", j, w.value, exact.entry(j).unwrap());
        prop_assert!((w.resummed() - w.value).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Convexity in the state and monotonicity in `j`.
    #[test]
    fn convex_and_monotone(dims in dims_strategy(), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let rank_a = rng.random_range(1..=dims.total());
        let rank_b = rng.random_range(1..=dims.total());
        let a = random_mixed_state(&dims, rank_a, &mut rng).unwrap();
        let b = random_mixed_state(&dims, rank_b, &mut rng).unwrap();
        let lambda: f64 = rng.random();
        let mix = a.mix(&b, lambda).unwrap();
        let fam = random_family(dims.parties(), &mut rng);
        let c = random_pairs(&dims, &mut rng);
        let mut prev = f64::INFINITY;
        for j in 1..=fam.len() {
            let wa = witness(&a, &c, &fam, j).unwrap().value;
            let wb = witness(&b, &c, &fam, j).unwrap().value;
            let wm = witness(&mix, &c, &fam, j).unwrap().value;
            prop_assert!(wm <= lambda * wa + (1.0 - lambda) * wb + 1e-9);
            prop_assert!(wm <= prev + 1e-9);
            prev = wm;
        }
    }

    /// Witness-derived Renyi-2 bounds stay below the sampled convex-roof upper
    /// bound.
    #[test]
    fn oracle_sandwich(choice in 0usize..3, seed in any::<u64>()) {
        let dims = HilbertDims::new([vec![2, 3], vec![3, 3], vec![2, 2, 2]][choice].clone()).unwrap();
        let mut rng = trial_rng(seed, 0);
        let rank = rng.random_range(1..=dims.total());
        let rho = random_mixed_state(&dims, rank, &mut rng).unwrap();
        let fam = all_bipartitions(dims.parties()).unwrap();
        let roof = roof_upper_bound(&rho, &fam, 8, EntropyKind::Linear, seed).unwrap();
        let roof_s2 = roof_upper_bound(&rho, &fam, 8, EntropyKind::Renyi(2.0), seed).unwrap();
        for j in 1..=fam.len() {
            let Ok(c) = select_pairs(&rho, &fam, j, 2 * dims.max_local()) else { continue };
            let w = witness(&rho, &c, &fam, j).unwrap().value;
            prop_assert!(w <= roof.entry(j).unwrap() + 1e-8);
            let s2 = s2_bound_from_witness(w).unwrap();
            prop_assert!(s2 <= roof_s2.entry(j).unwrap() + 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn biseparable_mixtures_are_not_gme(seed in any::<u64>(), terms in 1usize..8) {
        let dims = HilbertDims::uniform(3, 2).unwrap();
        let rho = random_k_separable(&dims, 2, terms, seed).unwrap();
        let fam = all_bipartitions(3).unwrap();
        let j = gamma(3, 1).unwrap();
        let mut rng = trial_rng(seed, 1);
        let c = choose_pairs(&rho, &fam, j, &mut rng);
        prop_assert!(witness(&rho, &c, &fam, j).unwrap().value <= 1e-9);
        prop_assert!(!k_separability_scan(&rho, &PairChoice::auto()).unwrap().is_gme());
    }

    #[test]
    fn separable_states_stay_uncertified_after_filtering(seed in any::<u64>(), terms in 4usize..12) {
        let dims = HilbertDims::uniform(3, 2).unwrap();
        let rho = random_k_separable(&dims, 3, terms, seed).unwrap();
        let (nf, _) = normal_form(&rho, 1e-10, 500).unwrap();
        let ks = k_separability_scan(&nf, &PairChoice::auto()).unwrap();
        prop_assert_eq!(ks.certified_k, None);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_converges_and_replays(seed in any::<u64>()) {
        let dims = HilbertDims::uniform(3, 2).unwrap();
        let rho = random_mixed_state(&dims, 8, &mut trial_rng(seed, 0)).unwrap();
        let (nf, fs) = normal_form(&rho, 1e-10, 200).unwrap();
        prop_assert!(fs.converged);
        prop_assert!(marginal_flatness(&nf) <= 1e-8);
        let replay = apply_filters(&rho, &fs).unwrap();
        prop_assert!(replay.frobenius_distance(&nf) <= 1e-8);
    }
}

#[test]
fn single_precision_agrees_with_double() {
    let p = Rho1Params::new(0.1, 0.2, 0.3, 0.4).unwrap();
    let r64 = states::rho1::<f64>(&p).unwrap();
    let r32 = states::rho1::<f32>(&p).unwrap();
    let fam = states::rho1_family();
    let c = states::rho1_pairs();
    let w64 = witness(&r64, &c, &fam, 2).unwrap().value;
    let w32 = witness(&r32, &c, &fam, 2).unwrap().value;
    assert!((w64 - w32 as f64).abs() < 1e-6);
    let ghz = states::ghz_balanced::<f32>(4, 2).unwrap().to_density();
    assert!(k_separability_scan(&ghz, &PairChoice::auto()).unwrap().is_gme());
    let (nf, fs) = normal_form(&states::sigma_filtered::<f32>(&p).unwrap(), 1e-5, 500).unwrap();
    assert!(fs.converged);
    assert!(nf.frobenius_distance(&states::rho1::<f32>(&p).unwrap()) < 1e-4);
}
