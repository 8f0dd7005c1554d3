//! Acceptance suite: one PASS/FAIL line per criterion. Every check runs at
//! its stated tolerance and size. The process exits nonzero on a failure
//! only when `QBCLAB_ACCEPTANCE_STRICT=1` is set.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use qbclab_core::channels::{
    build_net, verify_net, CompoundSet, CptpChannel, CqChannel, CqqBroadcastChannel, DepolarizingFamily, NetConfig,
};
use qbclab_core::codesim::{
    covering_check, leakage_detail, run_single, run_universal_experiment, BernoulliDiagonal, CodebookLayout,
    CoveringConfig, DecoderMethod, ExperimentConfig, LayoutPolicy,
};
use qbclab_core::entropics::{
    chi_alpha, conditional_mutual_information, continuity_bounds, entropy, holevo, mutual_information,
    relative_entropy, renyi_divergence, ContinuityKind, Ensemble,
};
use qbclab_core::linalg::{trace_norm, ComplexOperator, DensityOperator, C64};
use qbclab_core::random::{random_distribution, random_state, seeded, stream};
use qbclab_core::regions::{
    evaluate_bcc_corner, optimize_region, reduce_full_quantum, FactorizedInput, OptimizerConfig, RateRegion, Scenario,
};
use qbclab_core::typicality::{
    pruned, spectral_typicality_limits, typical_projector, typical_set, ProjectorKind,
};
use qbclab_core::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: usize, name: &str, budget: Duration, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(o) => (o.pass && elapsed <= budget, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "[{}] {id:>2} {name}: {detail} ({:.2}s of {}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn plus() -> DensityOperator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityOperator::pure(&[c(s), c(s)]).unwrap()
}

fn noisy_bit(q: f64) -> CqChannel {
    CqChannel::new(vec![
        DensityOperator::diagonal(&[1.0 - q, q]).unwrap(),
        DensityOperator::diagonal(&[q, 1.0 - q]).unwrap(),
    ])
    .unwrap()
}

fn constant_qubit() -> CqChannel {
    CqChannel::constant(2, DensityOperator::maximally_mixed(2))
}

/// Eigenvalues of a 2x2 Hermitian matrix, closed form.
fn qubit_eigs(m: &DMatrix<C64>) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)].norm();
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d).powi(2) + b * b).sqrt();
    (mid + rad, mid - rad)
}

fn qubit_entropy(m: &DMatrix<C64>) -> f64 {
    let (x, y) = qubit_eigs(m);
    [x, y].iter().filter(|v| **v > 1e-15).map(|v| -v * v.log2()).sum()
}

/// `m^t` for a 2x2 positive definite matrix via its eigenprojectors.
fn qubit_power(m: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let (l1, l2) = qubit_eigs(m);
    if (l1 - l2).abs() < 1e-14 {
        return DMatrix::identity(2, 2) * c(l1.powf(t));
    }
    let id = DMatrix::<C64>::identity(2, 2);
    let p1 = (m - &id * c(l2)) / c(l1 - l2);
    let p2 = &id - &p1;
    p1 * c(l1.powf(t)) + p2 * c(l2.powf(t))
}

fn criterion_1() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for d in 1..=16 {
        worst = worst.max((entropy(&DensityOperator::maximally_mixed(d)) - (d as f64).log2()).abs());
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = DensityOperator::pure(&[c(s), c(0.0), c(0.0), c(s)])?;
    let mi = mutual_information(&bell, (2, 2))?;
    let channel = CqChannel::new(vec![DensityOperator::basis(2, 0), plus()])?;
    let chi = holevo(&[0.5, 0.5], &channel)?;
    // Average of |0><0| and |+><+| has eigenvalues (1 +- 1/sqrt 2) / 2.
    let oracle = h2(0.5 * (1.0 + s));
    let pass = worst <= 1e-10 && (mi - 2.0).abs() <= 1e-10 && (chi - oracle).abs() <= 1e-5 && (chi - 0.600876).abs() <= 1e-5;
    Ok(Outcome {
        pass,
        detail: format!("max |S(1/d) - log d| = {worst:.1e}, MI = {mi:.12}, chi = {chi:.7} (oracle {oracle:.7})"),
    })
}

/// Sibson objective `log2(sum_y p(y) tr(W_y^a s^{1-a})) / (a - 1)` on a
/// Bloch-ball point.
fn sibson_objective(p: &[f64], outputs: &[DMatrix<C64>], alpha: f64, bloch: [f64; 3]) -> f64 {
    let [x, y, z] = bloch;
    let sigma = DMatrix::from_row_slice(
        2,
        2,
        &[c(0.5 * (1.0 + z)), C64::new(0.5 * x, -0.5 * y), C64::new(0.5 * x, 0.5 * y), c(0.5 * (1.0 - z))],
    );
    let s_pow = qubit_power(&sigma, 1.0 - alpha);
    let mut total = 0.0;
    for (py, w) in p.iter().zip(outputs) {
        let w_pow = qubit_power(w, alpha);
        total += py * (w_pow * &s_pow).trace().re;
    }
    total.log2() / (alpha - 1.0)
}

/// Pattern search over the Bloch ball from several starting points.
fn direct_chi_alpha(p: &[f64], outputs: &[DMatrix<C64>], alpha: f64) -> f64 {
    let mut best = f64::INFINITY;
    let starts = [[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5], [0.0, 0.0, -0.5]];
    for start in starts {
        let mut point = start;
        let mut value = sibson_objective(p, outputs, alpha, point);
        let mut step = 0.25;
        while step > 1e-9 {
            let mut moved = false;
            for axis in 0..3 {
                for sign in [-1.0, 1.0] {
                    let mut cand = point;
                    cand[axis] += sign * step;
                    let r2: f64 = cand.iter().map(|v| v * v).sum();
                    if r2 >= 1.0 - 1e-9 {
                        continue;
                    }
                    let v = sibson_objective(p, outputs, alpha, cand);
                    if v < value {
                        value = v;
                        point = cand;
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best = best.min(value);
    }
    best
}

fn criterion_2() -> Result<Outcome> {
    let mut rng = seeded(2024);
    let mut self_worst: f64 = 0.0;
    let mut limit_worst: f64 = 0.0;
    for _ in 0..50 {
        let rho = random_state(2, &mut rng);
        let sigma = random_state(2, &mut rng);
        self_worst = self_worst.max(renyi_divergence(&rho, &rho, 0.5)?.d_alpha.abs());
        let d = renyi_divergence(&rho, &sigma, 0.999)?.d_alpha;
        limit_worst = limit_worst.max((d - relative_entropy(&rho, &sigma)?).abs());
    }
    let alphas = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99];
    let mut monotone = true;
    let mut closed_vs_direct: f64 = 0.0;
    for k in 0..10 {
        let mut rng = stream(77, k);
        let ny = 2 + (k as usize % 2);
        let states: Vec<DensityOperator> = (0..ny).map(|_| random_state(2, &mut rng)).collect();
        let p = random_distribution(ny, &mut rng);
        let w = CqChannel::new(states.clone())?;
        let mut prev = f64::NEG_INFINITY;
        for &a in &alphas {
            let v = chi_alpha(&p, &w, a)?;
            if v < prev - 1e-12 {
                monotone = false;
            }
            prev = v;
        }
        let outputs: Vec<DMatrix<C64>> = states.iter().map(|s| s.matrix().clone()).collect();
        for &a in &[0.3, 0.7] {
            let closed = chi_alpha(&p, &w, a)?;
            closed_vs_direct = closed_vs_direct.max((closed - direct_chi_alpha(&p, &outputs, a)).abs());
        }
    }
    let pass = self_worst <= 1e-10 && limit_worst <= 1e-3 && monotone && closed_vs_direct <= 1e-4;
    Ok(Outcome {
        pass,
        detail: format!(
            "|D_a(r||r)| <= {self_worst:.1e}, max |D_0.999 - D| = {limit_worst:.2e}, monotone = {monotone}, closed vs direct <= {closed_vs_direct:.1e}"
        ),
    })
}

fn criterion_3() -> Result<Outcome> {
    let set = typical_set(&[0.5, 0.5], 2, 0.0)?;
    let exact = set == vec![vec![0, 1], vec![1, 0]];
    let pr = pruned(&[0.3, 0.7], 8, 0.2)?;
    let mass_err = (pr.probs().iter().sum::<f64>() - 1.0).abs();

    let rho = DensityOperator::diagonal(&[0.25, 0.75])?;
    let delta = 0.25;
    let (delta_limit, gamma_limit) = spectral_typicality_limits(&[0.25, 0.75], delta)?;
    let s = h2(0.25);
    let mut overlaps = Vec::new();
    let mut rank_slack = Vec::new();
    let mut lambda_slack = Vec::new();
    let mut inequalities = true;
    for n in [2, 4, 6, 8] {
        let proj = typical_projector(std::slice::from_ref(&rho), &vec![0; n], delta, ProjectorKind::Unconditional, None)?;
        let st = proj.stats();
        overlaps.push(st.overlap);
        let nf = n as f64;
        // log2 rank <= n (S + Delta) and lambda_max <= 2^{-n (S - Gamma)}.
        inequalities &= (st.rank as f64).log2() <= nf * (s + delta_limit) + 1e-9;
        inequalities &= st.max_eigenvalue <= (-nf * (s - gamma_limit)).exp2() * (1.0 + 1e-9);
        rank_slack.push(delta_limit - st.delta_meas);
        lambda_slack.push(gamma_limit - st.gamma_meas);
    }
    let overlap_trend = overlaps.windows(2).all(|w| w[1] >= w[0]) && overlaps.iter().all(|&o| o < 1.0);
    let shrinking = rank_slack.windows(2).all(|w| w[1] < w[0]) && lambda_slack.windows(2).all(|w| w[1] < w[0]);
    let pass = exact && mass_err <= 1e-12 && overlap_trend && inequalities && shrinking;
    Ok(Outcome {
        pass,
        detail: format!(
            "set exact = {exact}, mass err = {mass_err:.1e}, overlaps = {:?}, rank slack = {:?}, lambda slack = {:?}",
            overlaps.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>(),
            rank_slack.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>(),
            lambda_slack.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>()
        ),
    })
}

fn criterion_4() -> Result<Outcome> {
    let sampler = BernoulliDiagonal { probs: vec![0.5, 0.5] };
    let config = CoveringConfig::new(1.0, 0.2, vec![10, 100, 1000], 2000, 4);
    let report = covering_check(&sampler, &config)?;
    let strictly_decreasing = report.points.windows(2).all(|w| w[1].rate < w[0].rate);
    let pass = report.pass && strictly_decreasing;
    let points: Vec<String> = report
        .points
        .iter()
        .map(|p| format!("L={} rate={:.4} bound={:.3}", p.samples, p.rate, p.bound))
        .collect();
    Ok(Outcome {
        pass,
        detail: format!("{}; decreasing = {strictly_decreasing}", points.join(", ")),
    })
}

fn cq_state(p: &[f64], states: &[DensityOperator]) -> DensityOperator {
    let d = states[0].dim();
    let n = p.len();
    let mut m = DMatrix::<C64>::zeros(n * d, n * d);
    for (x, (px, s)) in p.iter().zip(states).enumerate() {
        m.view_mut((x * d, x * d), (d, d)).copy_from(&(s.matrix() * c(*px)));
    }
    DensityOperator::new(ComplexOperator::new(m).unwrap()).unwrap()
}

fn criterion_5() -> Result<Outcome> {
    let mut fannes_violations = 0;
    for k in 0..500u64 {
        let mut rng = stream(5, k);
        let d = 2 + (k as usize % 4);
        let rho = random_state(d, &mut rng);
        let tau = random_state(d, &mut rng);
        let t: f64 = rand::Rng::random::<f64>(&mut rng) / 3.0;
        let sigma = DensityOperator::mixture(&[1.0 - t, t], &[rho.clone(), tau])?;
        let delta = trace_norm(&(rho.op() - sigma.op()));
        let gap = (entropy(&rho) - entropy(&sigma)).abs();
        if gap > continuity_bounds(delta.min(2.0), d, ContinuityKind::Entropy)? + 1e-8 {
            fannes_violations += 1;
        }
    }
    let mut cmi_violations = 0;
    for k in 0..200u64 {
        let mut rng = stream(55, k);
        let nx = 2 + (k as usize % 2);
        let p = random_distribution(nx, &mut rng);
        let q = random_distribution(nx, &mut rng);
        let a: Vec<DensityOperator> = (0..nx).map(|_| random_state(4, &mut rng)).collect();
        let b: Vec<DensityOperator> = (0..nx).map(|_| random_state(4, &mut rng)).collect();
        let delta = trace_norm(&(cq_state(&p, &a).op() - cq_state(&q, &b).op()));
        let ia = conditional_mutual_information(&Ensemble::new(p.clone(), a)?, (2, 2))?;
        let ib = conditional_mutual_information(&Ensemble::new(q.clone(), b)?, (2, 2))?;
        if (ia - ib).abs() > continuity_bounds(delta.min(2.0), 2, ContinuityKind::ConditionalMutualInformation)? + 1e-8 {
            cmi_violations += 1;
        }
    }
    Ok(Outcome {
        pass: fannes_violations == 0 && cmi_violations == 0,
        detail: format!("entropy violations {fannes_violations}/500, conditional information violations {cmi_violations}/200"),
    })
}

fn relabeled_bit() -> CqChannel {
    CqChannel::new(vec![DensityOperator::basis(2, 1), DensityOperator::basis(2, 0)]).unwrap()
}

fn bit_input() -> FactorizedInput {
    FactorizedInput::new(1, vec![1.0], vec![vec![0.5, 0.5]], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
}

fn criterion_6() -> Result<Outcome> {
    let a = CqqBroadcastChannel::from_cq(CqChannel::noiseless(2));
    let b = CqqBroadcastChannel::from_cq(relabeled_bit());
    let compound = CompoundSet::new(vec![a.clone(), b.clone()])?;
    let config = ExperimentConfig {
        scenario: Scenario::Tpc,
        input: bit_input(),
        policy: LayoutPolicy::Rates { r_pub: 0.0, r_c: 0.5, r_rand: 0.0 },
        n_grid: vec![4, 6, 8],
        seeds: (0..50).collect(),
        delta: 0.25,
        method: DecoderMethod::Pgm,
    };
    let report = run_universal_experiment(&compound, &config)?;
    let means: Vec<f64> = report.summaries.iter().map(|s| s.mean_max_e_bob).collect();
    let trend = means.windows(2).all(|w| w[1] <= w[0]);
    let final_ok = means[2] <= 0.25;
    let mut removal_ok = true;
    for single in [CompoundSet::singleton(a), CompoundSet::singleton(b)] {
        let sub = run_universal_experiment(&single, &config)?;
        for full in &report.summaries {
            for &seed in &config.seeds {
                let max_full = report
                    .rows
                    .iter()
                    .filter(|r| r.n == full.n && r.seed == seed)
                    .map(|r| r.e_bob)
                    .fold(0.0, f64::max);
                let max_sub = sub
                    .rows
                    .iter()
                    .filter(|r| r.n == full.n && r.seed == seed)
                    .map(|r| r.e_bob)
                    .fold(0.0, f64::max);
                removal_ok &= max_sub <= max_full + 1e-12;
            }
        }
    }
    Ok(Outcome {
        pass: trend && final_ok && removal_ok,
        detail: format!(
            "mean max error over n = 4, 6, 8: {:?}; removal never increases error = {removal_ok}",
            means.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        ),
    })
}

fn criterion_7() -> Result<Outcome> {
    let noisy = CqqBroadcastChannel::product(&CqChannel::noiseless(2), &noisy_bit(0.3))?;
    let compound = CompoundSet::singleton(noisy.clone());
    let config = ExperimentConfig {
        scenario: Scenario::Tpc,
        input: bit_input(),
        policy: LayoutPolicy::Fixed { m0: 1, j: 4, l: 1 },
        n_grid: vec![6],
        seeds: vec![],
        delta: 0.25,
        method: DecoderMethod::Pgm,
    };
    let small = CodebookLayout::new(1, 4, 1, 6)?;
    let large = CodebookLayout::new(1, 4, 8, 6)?;
    let mut strictly_lower = true;
    let mut bounded = true;
    let mut worst_ratio: f64 = 0.0;
    for seed in 0..20u64 {
        let one = run_single(&compound, &config, small, seed)?[0].leakage;
        let eight_rows = run_single(&compound, &config, large, seed)?;
        let eight = eight_rows[0].leakage;
        strictly_lower &= eight < one;
        // Recompute the code to read off the measured deviation.
        let detail = {
            let cb = qbclab_core::codesim::sample_superposition_codebook(&[1.0], &[vec![0.5, 0.5]], large, 0.25, seed)?;
            let bob = qbclab_core::codesim::effective_channel(&noisy, qbclab_core::channels::Receiver::Bob, 1, &config.input.t)?;
            let outer = qbclab_core::codesim::build_decoder(&cb.u_words, std::slice::from_ref(&bob), DecoderMethod::Pgm)?;
            let inner = qbclab_core::codesim::build_decoder(cb.inner_words(0), &[bob], DecoderMethod::Pgm)?;
            let code = qbclab_core::codesim::build_wiretap_code(&cb, &config.input.t, 1, &outer, &[inner], None)?;
            leakage_detail(&code, &noisy)?
        };
        assert!((detail.leakage - eight).abs() < 1e-12);
        let bound = continuity_bounds(detail.max_deviation.min(2.0), detail.eve_dim, ContinuityKind::Entropy)?;
        bounded &= eight <= bound;
        worst_ratio = worst_ratio.max(eight / one);
    }
    let constant = CqqBroadcastChannel::product(&CqChannel::noiseless(2), &constant_qubit())?;
    let const_leak = run_single(&CompoundSet::singleton(constant), &config, large, 0)?[0].leakage;
    Ok(Outcome {
        pass: strictly_lower && bounded && const_leak.abs() <= 1e-10,
        detail: format!(
            "L=8 below L=1 on all seeds = {strictly_lower} (worst ratio {worst_ratio:.3}), within entropy bound = {bounded}, constant-Eve leakage = {const_leak:.1e}"
        ),
    })
}

/// Holevo capacity of a qubit cq channel with two inputs by dense grid and
/// golden-section refinement, using closed-form qubit entropies.
fn binary_input_capacity(w: &CqChannel) -> f64 {
    let outs: Vec<DMatrix<C64>> = w.outputs().iter().map(|s| s.matrix().clone()).collect();
    let chi = |p: f64| {
        let avg = &outs[0] * c(p) + &outs[1] * c(1.0 - p);
        qubit_entropy(&avg) - p * qubit_entropy(&outs[0]) - (1.0 - p) * qubit_entropy(&outs[1])
    };
    let (mut best_p, mut best) = (0.0, chi(0.0));
    for k in 1..=1000 {
        let p = k as f64 / 1000.0;
        if chi(p) > best {
            best = chi(p);
            best_p = p;
        }
    }
    let (mut lo, mut hi) = ((best_p - 1e-3f64).max(0.0), (best_p + 1e-3f64).min(1.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if chi(a) > chi(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    best.max(chi(0.5 * (lo + hi)))
}

fn frontier_inside(inner: &RateRegion, outer: &RateRegion, tol: f64) -> bool {
    inner.frontier.iter().all(|&p| outer.contains(p, tol))
}

fn criterion_8() -> Result<Outcome> {
    let config = OptimizerConfig::default();
    let bob = CqChannel::new(vec![DensityOperator::basis(2, 0), plus()])?;
    let eve_constant = CompoundSet::singleton(CqqBroadcastChannel::product(&bob, &constant_qubit())?);
    let region = optimize_region(&eve_constant, Scenario::Bcc, (2, 2), 1, &config)?;
    let capacity = binary_input_capacity(&bob);
    let r0_max = region.corners.iter().map(|c| c.corner.r_pub).fold(0.0, f64::max);
    let rc_max = region.max_confidential();
    let first = r0_max <= 1e-6 && (rc_max - capacity).abs() <= 0.05;

    let both = CompoundSet::singleton(CqqBroadcastChannel::product(&CqChannel::noiseless(2), &CqChannel::noiseless(2))?);
    let leak_region = optimize_region(&both, Scenario::Bcc, (2, 2), 1, &config)?;
    let leak_rc = leak_region.frontier.iter().map(|p| p.1).fold(0.0, f64::max);
    let second = leak_rc <= 0.01;

    let m1 = CqqBroadcastChannel::product(&CqChannel::noiseless(2), &noisy_bit(0.3))?;
    let m2 = CqqBroadcastChannel::product(&noisy_bit(0.1), &noisy_bit(0.2))?;
    let small = CompoundSet::singleton(m1.clone());
    let large = CompoundSet::new(vec![m1, m2])?;
    let mut nested = true;
    for scenario in [Scenario::Bcc, Scenario::Tpc] {
        let r_small = optimize_region(&small, scenario, (2, 2), 1, &config)?;
        let r_large = optimize_region(&large, scenario, (2, 2), 1, &config)?;
        nested &= frontier_inside(&r_large, &r_small, 1e-6);
    }
    Ok(Outcome {
        pass: first && second && nested,
        detail: format!(
            "Eve-constant r0 max {r0_max:.1e}, rc max {rc_max:.5} vs capacity {capacity:.5}; leak rc max {leak_rc:.1e}; nested = {nested}"
        ),
    })
}

fn regions_match(a: &RateRegion, b: &RateRegion, tol: f64) -> bool {
    a.corners.len() == b.corners.len()
        && a.corners.iter().zip(&b.corners).all(|(x, y)| {
            (x.corner.r_pub - y.corner.r_pub).abs() <= tol && (x.corner.r_c - y.corner.r_c).abs() <= tol
        })
        && a.frontier.len() == b.frontier.len()
        && a.frontier
            .iter()
            .zip(&b.frontier)
            .all(|(p, q)| (p.0 - q.0).abs() <= tol && (p.1 - q.1).abs() <= tol)
}

fn criterion_9() -> Result<Outcome> {
    let config = OptimizerConfig {
        restarts: 3,
        iterations: 30,
        ..OptimizerConfig::default()
    };
    let identity = CptpChannel::identity(2);
    let signals = vec![DensityOperator::basis(2, 0), plus()];
    let reduced = reduce_full_quantum(std::slice::from_ref(&identity), &signals, 1)?;
    let direct = CompoundSet::singleton(CqqBroadcastChannel::new(signals.clone(), (2, 1))?);
    let mut corner_gap: f64 = 0.0;
    for seed in 0..10 {
        let mut rng = seeded(900 + seed);
        let input = FactorizedInput::new(
            1,
            random_distribution(2, &mut rng),
            (0..2).map(|_| random_distribution(2, &mut rng)).collect(),
            (0..2).map(|_| random_distribution(2, &mut rng)).collect(),
        )?;
        let a = evaluate_bcc_corner(&reduced, &input)?;
        let b = evaluate_bcc_corner(&direct, &input)?;
        corner_gap = corner_gap.max((a.r_pub - b.r_pub).abs()).max((a.r_c - b.r_c).abs());
    }
    let ra = optimize_region(&reduced, Scenario::Bcc, (2, 2), 1, &config)?;
    let rb = optimize_region(&direct, Scenario::Bcc, (2, 2), 1, &config)?;
    let same = regions_match(&ra, &rb, 1e-10) && corner_gap <= 1e-10;

    let orthogonal = reduce_full_quantum(&[identity], &[DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)], 1)?;
    let noiseless = CompoundSet::singleton(CqqBroadcastChannel::from_cq(CqChannel::noiseless(2)));
    let ro = optimize_region(&orthogonal, Scenario::Bcc, (2, 2), 1, &config)?;
    let rn = optimize_region(&noiseless, Scenario::Bcc, (2, 2), 1, &config)?;
    let same_noiseless = regions_match(&ro, &rn, 1e-10);
    Ok(Outcome {
        pass: same && same_noiseless,
        detail: format!("reduced equals direct = {same} (corner gap {corner_gap:.1e}), orthogonal equals noiseless = {same_noiseless}"),
    })
}

fn criterion_10() -> Result<Outcome> {
    let family = DepolarizingFamily::full();
    let outcome = build_net(&family, &NetConfig::new(0.1, 10))?;
    let check = verify_net(&outcome.net, &family, 0.1, 10_000, 11)?;
    let size_ok = (outcome.net.len() as f64).log2() <= outcome.log2_cardinality_bound;
    let blocks: Vec<String> = check
        .block_checks
        .iter()
        .map(|b| format!("n={} {:.3}<={:.1}", b.n, b.max_distance, b.bound))
        .collect();
    Ok(Outcome {
        pass: check.pass && size_ok,
        detail: format!(
            "net size {}, radius {:.4} over {} samples, blocks [{}], log2 size bound {:.1}",
            outcome.net.len(),
            check.max_distance,
            check.samples,
            blocks.join(", "),
            outcome.log2_cardinality_bound
        ),
    })
}

type Criterion = (&'static str, u64, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("entropics", 5, criterion_1),
        ("renyi", 30, criterion_2),
        ("typicality", 120, criterion_3),
        ("covering concentration", 120, criterion_4),
        ("continuity oracles", 60, criterion_5),
        ("universal decoding", 600, criterion_6),
        ("privacy amplification", 600, criterion_7),
        ("region sanity", 900, criterion_8),
        ("full-quantum reduction", 60, criterion_9),
        ("net suite", 120, criterion_10),
    ];
    let mut failures = 0;
    for (k, (name, secs, f)) in criteria.into_iter().enumerate() {
        if !run(k + 1, name, Duration::from_secs(secs), f) {
            failures += 1;
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    let strict = std::env::var("QBCLAB_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failures == 0 || !strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
