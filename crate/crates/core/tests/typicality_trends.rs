//! Typical sets, pruned laws and typical projectors checked against
//! brute-force classical oracles.

use nalgebra::DMatrix;
use proptest::prelude::*;
use qbclab_core::channels::all_words;
use qbclab_core::linalg::{ComplexOperator, DensityOperator, C64};
use qbclab_core::random::{random_distribution, random_unitary, stream};
use qbclab_core::typicality::{
    enumerate_types, is_typical, pruned, typical_projector, typical_set, ChannelConditioning, ProjectorKind,
};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Counts of ones that make an `n`-bit word typical for a bias strictly
/// inside `(0, 1)`: both letters must occur.
fn typical_counts(p_one: f64, n: usize, delta: f64) -> impl Iterator<Item = usize> {
    (1..n).filter(move |&c| (c as f64 / n as f64 - p_one).abs() <= delta + 1e-12)
}

fn binary_typical_mass(p_one: f64, n: usize, delta: f64) -> f64 {
    typical_counts(p_one, n, delta)
        .map(|c| binomial(n, c) * p_one.powi(c as i32) * (1.0 - p_one).powi((n - c) as i32))
        .sum()
}

fn rotated(values: &[f64], seed: u64) -> DensityOperator {
    let u = random_unitary(values.len(), &mut stream(seed, 0));
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| C64::new(v, 0.0)),
    ));
    DensityOperator::new(ComplexOperator::new(&u * d * u.adjoint()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn type_count_is_a_binomial_coefficient(k in 1usize..5, n in 0usize..9) {
        let types = enumerate_types(k, n).unwrap();
        prop_assert_eq!(types.len() as f64, binomial(n + k - 1, k - 1));
    }

    #[test]
    fn typical_set_matches_exhaustive_filter(seed in any::<u64>(), k in 2usize..4, n in 1usize..7, delta in 0.05f64..0.5) {
        let p = random_distribution(k, &mut stream(seed, 1));
        let fast = typical_set(&p, n, delta).unwrap();
        let slow: Vec<_> = all_words(k, n).into_iter().filter(|w| is_typical(w, &p, delta)).collect();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn pruned_law_is_two_times_atypical_mass_from_iid(seed in any::<u64>(), n in 2usize..8, delta in 0.1f64..0.5) {
        let p = random_distribution(2, &mut stream(seed, 2));
        let Ok(law) = pruned(&p, n, delta) else { return Ok(()); };
        let mut l1 = 0.0;
        for w in all_words(2, n) {
            let iid: f64 = w.iter().map(|&x| p[x]).product();
            let kept = law.support().iter().position(|s| *s == w).map_or(0.0, |k| law.probs()[k]);
            l1 += (kept - iid).abs();
        }
        prop_assert!((l1 - law.l1_distance_to_iid()).abs() <= 1e-10);
        prop_assert!((law.tv_distance_to_iid() - l1 / 2.0).abs() <= 1e-10);
    }

    #[test]
    fn projector_overlap_is_basis_independent(seed in any::<u64>(), n in 2usize..7) {
        let diag = DensityOperator::diagonal(&[0.25, 0.75]).unwrap();
        let turned = rotated(&[0.25, 0.75], seed);
        let word = vec![0; n];
        let a = typical_projector(&[diag], &word, 0.25, ProjectorKind::Unconditional, None).unwrap();
        let b = typical_projector(&[turned], &word, 0.25, ProjectorKind::Unconditional, None).unwrap();
        prop_assert!((a.stats().overlap - b.stats().overlap).abs() <= 1e-8);
        prop_assert_eq!(a.stats().rank, b.stats().rank);
    }
}

#[test]
fn projector_overlap_equals_binomial_typical_mass() {
    let state = DensityOperator::diagonal(&[0.25, 0.75]).unwrap();
    for n in [2, 4, 6, 8, 10] {
        let stats = typical_projector(std::slice::from_ref(&state), &vec![0; n], 0.25, ProjectorKind::Unconditional, None)
            .unwrap()
            .stats()
            .clone();
        let oracle = binary_typical_mass(0.75, n, 0.25);
        assert!((stats.overlap - oracle).abs() <= 1e-10, "n={n}: {} vs {oracle}", stats.overlap);
    }
}

#[test]
fn overlap_deficit_shrinks_along_even_block_lengths() {
    let state = DensityOperator::diagonal(&[0.25, 0.75]).unwrap();
    let deficits: Vec<f64> = [2, 4, 6, 8, 10]
        .iter()
        .map(|&n| {
            1.0 - typical_projector(std::slice::from_ref(&state), &vec![0; n], 0.25, ProjectorKind::Unconditional, None)
                .unwrap()
                .stats()
                .overlap
        })
        .collect();
    for pair in deficits.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-12, "{deficits:?}");
    }
}

#[test]
fn rank_stays_below_the_entropy_exponent_plus_slack() {
    let state = DensityOperator::diagonal(&[0.25, 0.75]).unwrap();
    let entropy = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
    for n in [4, 6, 8, 10] {
        let s = typical_projector(std::slice::from_ref(&state), &vec![0; n], 0.25, ProjectorKind::Unconditional, None)
            .unwrap()
            .stats()
            .clone();
        assert!((s.entropy_rate - entropy).abs() <= 1e-10);
        let exact: f64 = typical_counts(0.75, n, 0.25).map(|c| binomial(n, c)).sum();
        assert_eq!(s.rank as f64, exact);
        assert!(((s.rank as f64).log2() / n as f64 - entropy - s.delta_meas).abs() <= 1e-10);
    }
}

#[test]
fn total_conditional_overlap_tracks_the_conditional_mixture() {
    let w = vec![DensityOperator::diagonal(&[0.9, 0.1]).unwrap(), DensityOperator::diagonal(&[0.2, 0.8]).unwrap()];
    let r = vec![vec![0.5, 0.5], vec![0.25, 0.75]];
    let mut deficits = Vec::new();
    for n in [2, 4, 6, 8] {
        let x: Vec<usize> = (0..n).map(|i| i % 2).collect();
        let cond = ChannelConditioning { r: &r, y_word: None };
        let p = typical_projector(&w, &x, 0.3, ProjectorKind::TotalConditional, Some(cond)).unwrap();
        let s = p.stats();
        assert!((0.0..=1.0 + 1e-12).contains(&s.overlap));
        assert!(s.max_eigenvalue <= 1.0 + 1e-12);
        deficits.push(1.0 - s.overlap);
    }
    assert!(deficits.last().unwrap() < deficits.first().unwrap(), "{deficits:?}");
}
