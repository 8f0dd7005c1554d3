//! Randomised properties of operators, channels and entropic quantities.
//!
//! Random objects are drawn from the library's seeded generators; proptest
//! supplies the seeds so that failures shrink to a reproducible case.

use nalgebra::DMatrix;
use proptest::prelude::*;
use qbclab_core::channels::{cq_distance, CqChannel, CqqBroadcastChannel, Receiver};
use qbclab_core::entropics::{
    chi_alpha, conditional_mutual_information, continuity_bounds, entropy, holevo, ContinuityKind, Ensemble,
};
use qbclab_core::linalg::{
    operator_function, partial_trace, spectral, tensor, trace_norm, ComplexOperator, DensityOperator, ScalarFunction,
    Subsystem, C64,
};
use qbclab_core::random::{
    random_distribution, random_effect, random_hermitian, random_pure_state, random_state, stream, LabRng,
};
use rand::Rng;

fn sqrt_op(op: &ComplexOperator) -> ComplexOperator {
    operator_function(op, ScalarFunction::Power(0.5)).unwrap()
}

fn gentle_disturbance(rho: &DensityOperator, effect: &ComplexOperator) -> (f64, f64) {
    let root = sqrt_op(effect);
    let after = &(&root * rho.op()) * &root;
    let eps = 1.0 - rho.expectation(effect);
    (trace_norm(&(rho.op() - &after)), eps.max(0.0))
}

fn random_channel(rng: &mut LabRng, letters: usize, dim: usize) -> CqChannel {
    CqChannel::new((0..letters).map(|_| random_state(dim, rng)).collect()).unwrap()
}

fn random_broadcast(rng: &mut LabRng, letters: usize, dims: (usize, usize)) -> CqqBroadcastChannel {
    let outputs = (0..letters).map(|_| random_state(dims.0 * dims.1, rng)).collect();
    CqqBroadcastChannel::new(outputs, dims).unwrap()
}

fn cq_state(p: &[f64], states: &[DensityOperator]) -> DensityOperator {
    let d = states[0].dim();
    let n = p.len();
    let mut m = DMatrix::<C64>::zeros(n * d, n * d);
    for (x, (w, s)) in p.iter().zip(states).enumerate() {
        m.view_mut((x * d, x * d), (d, d)).copy_from(&(s.matrix() * C64::new(*w, 0.0)));
    }
    DensityOperator::new(ComplexOperator::new(m).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tender_operator_bound_on_mixed_states(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = stream(seed, 1);
        let rho = random_state(d, &mut rng);
        let effect = random_effect(d, &mut rng);
        let (disturbance, eps) = gentle_disturbance(&rho, &effect);
        prop_assert!(disturbance <= (2.0 * eps).sqrt() + 1e-8, "{disturbance} > sqrt(2 * {eps})");
    }

    #[test]
    fn two_root_gentle_bound_on_pure_states(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = stream(seed, 2);
        let rho = random_pure_state(d, &mut rng);
        let effect = random_effect(d, &mut rng);
        let (disturbance, eps) = gentle_disturbance(&rho, &effect);
        prop_assert!(disturbance <= 2.0 * eps.sqrt() + 1e-8);
    }

    #[test]
    fn trace_inequality_for_sandwiched_effects(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = stream(seed, 3);
        let tau = random_state(d, &mut rng);
        let p = random_effect(d, &mut rng);
        let q = random_effect(d, &mut rng);
        let pqp = &(&p * &q) * &p;
        let lhs = tau.expectation(&pqp);
        let complement = &ComplexOperator::identity(d) - &p;
        let rhs = tau.expectation(&q) - 2.0 * tau.expectation(&complement).max(0.0).sqrt();
        prop_assert!(lhs >= rhs - 1e-10, "{lhs} < {rhs}");
    }

    #[test]
    fn tensor_and_partial_trace_are_adjoint(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut rng = stream(seed, 4);
        let a = random_hermitian(da, &mut rng);
        let rho = random_state(da * db, &mut rng);
        let lifted = tensor(&a, &ComplexOperator::identity(db)).unwrap();
        let lhs = rho.op().trace_product(&lifted);
        let reduced = partial_trace(rho.op(), Subsystem::First, (da, db)).unwrap();
        let rhs = a.trace_product(&reduced);
        prop_assert!((lhs - rhs).norm() <= 1e-9);
    }

    #[test]
    fn cq_distance_triangle_inequality(seed in any::<u64>(), letters in 1usize..4, d in 1usize..4) {
        let mut rng = stream(seed, 5);
        let (u, v, w) = (
            random_channel(&mut rng, letters, d),
            random_channel(&mut rng, letters, d),
            random_channel(&mut rng, letters, d),
        );
        let direct = cq_distance(&u, &w).unwrap();
        let via = cq_distance(&u, &v).unwrap() + cq_distance(&v, &w).unwrap();
        prop_assert!(direct <= via + 1e-9);
    }

    #[test]
    fn concatenated_words_give_tensor_products(seed in any::<u64>(), n1 in 1usize..3, n2 in 1usize..3) {
        let mut rng = stream(seed, 6);
        let channel = random_broadcast(&mut rng, 3, (2, 1));
        let w1: Vec<usize> = (0..n1).map(|_| rng.random_range(0..3)).collect();
        let w2: Vec<usize> = (0..n2).map(|_| rng.random_range(0..3)).collect();
        let joint = channel.apply_word(&[w1.clone(), w2.clone()].concat()).unwrap();
        let split = channel.apply_word(&w1).unwrap().tensor(&channel.apply_word(&w2).unwrap()).unwrap();
        prop_assert!(joint.op().max_abs_diff(split.op()) <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn marginals_commute_with_words(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = stream(seed, 7);
        let channel = random_broadcast(&mut rng, 2, (2, 2));
        let word: Vec<usize> = (0..n).map(|_| rng.random_range(0..2)).collect();
        let bob = channel.marginal(Receiver::Bob).apply_word(&word).unwrap();
        let eve = channel.marginal(Receiver::Eve).apply_word(&word).unwrap();
        // Block outputs are ordered B_1 E_1 ... B_n E_n.
        let joint = channel.apply_word(&word).unwrap();
        let dims: Vec<usize> = (0..2 * n).map(|_| 2).collect();
        let bobs: Vec<usize> = (0..n).map(|i| 2 * i).collect();
        let eves: Vec<usize> = (0..n).map(|i| 2 * i + 1).collect();
        let reduced_bob = qbclab_core::linalg::reduce_to(joint.op(), &dims, &bobs).unwrap();
        let reduced_eve = qbclab_core::linalg::reduce_to(joint.op(), &dims, &eves).unwrap();
        prop_assert!(reduced_bob.max_abs_diff(bob.op()) <= 1e-12);
        prop_assert!(reduced_eve.max_abs_diff(eve.op()) <= 1e-12);
    }

    #[test]
    fn fannes_bound_on_nearby_states(seed in any::<u64>(), d in 2usize..6) {
        let mut rng = stream(seed, 8);
        let rho = random_state(d, &mut rng);
        let other = random_state(d, &mut rng);
        let t = rng.random::<f64>() / 3.0;
        let sigma = DensityOperator::mixture(&[1.0 - t, t], &[rho.clone(), other]).unwrap();
        let delta = trace_norm(&(rho.op() - sigma.op()));
        let gap = (entropy(&rho) - entropy(&sigma)).abs();
        prop_assert!(gap <= continuity_bounds(delta, d, ContinuityKind::Entropy).unwrap() + 1e-8);
    }

    #[test]
    fn conditional_information_continuity(seed in any::<u64>(), nx in 1usize..4) {
        let mut rng = stream(seed, 9);
        let p = random_distribution(nx, &mut rng);
        let q = random_distribution(nx, &mut rng);
        let a: Vec<DensityOperator> = (0..nx).map(|_| random_state(4, &mut rng)).collect();
        let b: Vec<DensityOperator> = (0..nx).map(|_| random_state(4, &mut rng)).collect();
        let delta = trace_norm(&(cq_state(&p, &a).op() - cq_state(&q, &b).op())).min(2.0);
        let ia = conditional_mutual_information(&Ensemble::new(p, a).unwrap(), (2, 2)).unwrap();
        let ib = conditional_mutual_information(&Ensemble::new(q, b).unwrap(), (2, 2)).unwrap();
        let bound = continuity_bounds(delta, 2, ContinuityKind::ConditionalMutualInformation).unwrap();
        prop_assert!((ia - ib).abs() <= bound + 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn chi_alpha_is_monotone_and_below_holevo(seed in any::<u64>(), letters in 2usize..4, d in 2usize..4) {
        let mut rng = stream(seed, 10);
        let w = random_channel(&mut rng, letters, d);
        let p = random_distribution(letters, &mut rng);
        let chi = holevo(&p, &w).unwrap();
        let mut previous = f64::NEG_INFINITY;
        for alpha in [0.5, 0.7, 0.9, 0.99] {
            let value = chi_alpha(&p, &w, alpha).unwrap();
            prop_assert!(value >= previous - 1e-12);
            prop_assert!(value <= chi + 1e-10);
            previous = value;
        }
    }
}

#[test]
fn chi_alpha_gap_at_order_near_one() {
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let mut rng = stream(12, k);
        let w = random_channel(&mut rng, 2 + k as usize % 2, 2);
        let p = random_distribution(w.alphabet_size(), &mut rng);
        worst = worst.max(holevo(&p, &w).unwrap() - chi_alpha(&p, &w, 0.999).unwrap());
    }
    eprintln!("worst gap {worst}");
    assert!(worst <= 1e-3, "worst gap {worst}");
}

#[test]
fn spectral_reconstruction_up_to_dimension_sixty_four() {
    for (k, dim) in [1, 2, 3, 5, 8, 16, 32, 64].into_iter().enumerate() {
        let mut rng = stream(11, k as u64);
        let h = random_hermitian(dim, &mut rng);
        let s = spectral(&h).unwrap();
        let residual = s.reconstruct_with(|x| x).max_abs_diff(&h);
        assert!(residual <= 1e-8 * dim as f64, "dim {dim}: residual {residual}");
    }
}

/// The tender-operator estimate with constant `sqrt(2 eps)` fails on pure
/// states; the constant `2 sqrt(eps)` is the one that holds there.
#[test]
fn sqrt_two_eps_form_fails_on_a_pure_state() {
    let eps: f64 = 0.01;
    let psi = [C64::new((1.0 - eps).sqrt(), 0.0), C64::new(eps.sqrt(), 0.0)];
    let rho = DensityOperator::pure(&psi).unwrap();
    let projector = ComplexOperator::basis_projector(2, 0);
    let (disturbance, measured_eps) = gentle_disturbance(&rho, &projector);
    assert!((measured_eps - eps).abs() < 1e-12);
    assert!((disturbance - (4.0 * eps - 3.0 * eps * eps).sqrt()).abs() < 1e-9);
    assert!(disturbance > (2.0 * eps).sqrt());
    assert!(disturbance <= 2.0 * eps.sqrt());
}

/// Near order one, the Renyi divergence differs from the relative entropy
/// by about `(1 - alpha) V ln 2 / 2`, with `V` the variance of the
/// log-likelihood ratio. Commuting states make both sides exact.
#[test]
fn renyi_gap_near_one_follows_the_log_likelihood_variance() {
    use qbclab_core::entropics::{relative_entropy, renyi_divergence};
    let (p, q) = ([0.9, 0.1], [0.2, 0.8]);
    let rho = DensityOperator::diagonal(&p).unwrap();
    let sigma = DensityOperator::diagonal(&q).unwrap();
    let llr: Vec<f64> = p.iter().zip(&q).map(|(a, b)| (a / b).log2()).collect();
    let mean: f64 = p.iter().zip(&llr).map(|(a, l)| a * l).sum();
    let variance: f64 = p.iter().zip(&llr).map(|(a, l)| a * (l - mean).powi(2)).sum();
    let alpha = 0.999;
    let gap = relative_entropy(&rho, &sigma).unwrap() - renyi_divergence(&rho, &sigma, alpha).unwrap().d_alpha;
    let predicted = (1.0 - alpha) * variance * std::f64::consts::LN_2 / 2.0;
    assert!((gap - predicted).abs() <= 0.05 * predicted, "gap {gap} vs {predicted}");
}
