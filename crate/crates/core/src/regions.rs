//! Rate regions of compound broadcast channels for factorised inputs
//! `U - Y - X^l`, their optimisation over inputs, and the reduction of
//! fully quantum channels to effective cq compounds.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{all_words, CompoundSet, CptpChannel, CqChannel, CqqBroadcastChannel, Receiver};
use crate::entropics::{continuity_bounds, entropy, mutual_information, ContinuityKind};
use crate::error::{Error, Result};
use crate::linalg::{
    check_cap, composite_dim, dim_cap, permute_subsystems, reduce_to, tensor_all, ComplexOperator, DensityOperator,
};
use crate::prob::{check_distribution, check_stochastic};
use crate::random::{random_distribution, stream};

/// Which message pair the region describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Common message to both receivers plus a confidential one for Bob.
    Bcc,
    /// Public message for Bob plus a confidential one.
    Tpc,
}

/// Input distributions `q(u)`, `r(y|u)` and `t(x^l|y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizedInput {
    pub l: usize,
    pub q: Vec<f64>,
    pub r: Vec<Vec<f64>>,
    /// Rows over the `|X|^l` blocks in lexicographic order.
    pub t: Vec<Vec<f64>>,
}

impl FactorizedInput {
    pub fn new(l: usize, q: Vec<f64>, r: Vec<Vec<f64>>, t: Vec<Vec<f64>>) -> Result<Self> {
        let input = FactorizedInput { l, q, r, t };
        input.validate()?;
        Ok(input)
    }

    /// Builds `t(x_1..x_l|y) = prod_i t1(x_i|y)` from a single-letter kernel.
    pub fn letterwise(l: usize, q: Vec<f64>, r: Vec<Vec<f64>>, t1: &[Vec<f64>]) -> Result<Self> {
        let x = t1.first().map_or(0, |row| row.len());
        let blocks = all_words(x, l);
        let t = t1
            .iter()
            .map(|row| blocks.iter().map(|b| b.iter().map(|&xi| row[xi]).product()).collect())
            .collect();
        Self::new(l, q, r, t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::validation("block parameter positive", "l = 0"));
        }
        check_distribution(&self.q, "q")?;
        let ny = self.r.first().map_or(0, |row| row.len());
        check_stochastic(&self.r, self.q.len(), ny, "r")?;
        let nx = self.t.first().map_or(0, |row| row.len());
        check_stochastic(&self.t, ny, nx, "t")?;
        Ok(())
    }

    pub fn u_size(&self) -> usize {
        self.q.len()
    }

    pub fn y_size(&self) -> usize {
        self.r[0].len()
    }

    pub fn block_alphabet_size(&self) -> usize {
        self.t[0].len()
    }

    /// Product input on block parameter `l1 + l2`; letters of the product
    /// alphabets are enumerated with the first factor most significant.
    pub fn tensor_product(&self, other: &FactorizedInput, x_size: usize) -> Result<FactorizedInput> {
        let q = kron_vec(&self.q, &other.q);
        let r = kron_rows(&self.r, &other.r);
        // t over X^{l1} x X^{l2} = X^{l1+l2}; lexicographic order of the
        // concatenated block is the Kronecker order.
        if x_size.pow(self.l as u32) != self.block_alphabet_size()
            || x_size.pow(other.l as u32) != other.block_alphabet_size()
        {
            return Err(Error::Dimension("block alphabets do not match |X|^l".into()));
        }
        let t = kron_rows(&self.t, &other.t);
        FactorizedInput::new(self.l + other.l, q, r, t)
    }
}

fn kron_vec(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn kron_rows(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter().flat_map(|ra| b.iter().map(move |rb| kron_vec(ra, rb))).collect()
}

/// Block marginals of every member, reusable across input evaluations.
#[derive(Clone, Debug)]
pub struct PreparedCompound {
    l: usize,
    bob: Vec<CqChannel>,
    eve: Vec<CqChannel>,
    dims: (usize, usize),
    tau: Option<f64>,
    members: usize,
}

impl PreparedCompound {
    pub fn new(compound: &CompoundSet, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::Domain("block parameter must be positive".into()));
        }
        let (db, de) = compound.dims();
        check_cap(composite_dim((0..l).map(|_| db.max(de))), dim_cap())?;
        let bob = compound
            .marginals(Receiver::Bob)
            .iter()
            .map(|m| m.block_power(l))
            .collect::<Result<Vec<_>>>()?;
        let eve = compound
            .marginals(Receiver::Eve)
            .iter()
            .map(|m| m.block_power(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparedCompound {
            l,
            bob,
            eve,
            dims: compound.dims(),
            tau: compound.tau(),
            members: compound.len(),
        })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn block_alphabet_size(&self) -> usize {
        self.bob[0].alphabet_size()
    }

    pub fn len(&self) -> usize {
        self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    /// The effective channel `y -> sum_x t(x|y) W^{⊗l}(x)` of a member.
    pub fn effective(&self, member: usize, receiver: Receiver, t: &[Vec<f64>]) -> Result<CqChannel> {
        let block = match receiver {
            Receiver::Bob => &self.bob[member],
            Receiver::Eve => &self.eve[member],
        };
        block.precompose(t)
    }
}

/// The four entropic terms of one member, in bits per block.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberTerms {
    pub u_bob: f64,
    pub u_eve: f64,
    pub y_bob_given_u: f64,
    pub y_eve_given_u: f64,
}

fn receiver_terms(effective: &CqChannel, q: &[f64], r: &[Vec<f64>]) -> Result<(f64, f64)> {
    let s_y: Vec<f64> = effective.outputs().iter().map(entropy).collect();
    let rho_u = r
        .iter()
        .map(|row| effective.average_output(row))
        .collect::<Result<Vec<_>>>()?;
    let s_u: Vec<f64> = rho_u.iter().map(entropy).collect();
    let cloud = CqChannel::new(rho_u)?.average_output(q)?;
    let mut info_u = entropy(&cloud);
    let mut info_y = 0.0;
    for (u, &qu) in q.iter().enumerate() {
        if qu <= 0.0 {
            continue;
        }
        info_u -= qu * s_u[u];
        let inner: f64 = r[u].iter().zip(&s_y).filter(|(p, _)| **p > 0.0).map(|(p, s)| p * s).sum();
        info_y += qu * (s_u[u] - inner);
    }
    Ok((info_u, info_y))
}

pub fn member_terms(prepared: &PreparedCompound, member: usize, input: &FactorizedInput) -> Result<MemberTerms> {
    if input.block_alphabet_size() != prepared.block_alphabet_size() {
        return Err(Error::Dimension(format!(
            "input spans {} blocks but the channel has {}",
            input.block_alphabet_size(),
            prepared.block_alphabet_size()
        )));
    }
    if input.l != prepared.l {
        return Err(Error::Dimension(format!(
            "input block parameter {} differs from prepared {}",
            input.l, prepared.l
        )));
    }
    let (u_bob, y_bob_given_u) = receiver_terms(&prepared.effective(member, Receiver::Bob, &input.t)?, &input.q, &input.r)?;
    let (u_eve, y_eve_given_u) = if prepared.dims.1 == 1 {
        (0.0, 0.0)
    } else {
        receiver_terms(&prepared.effective(member, Receiver::Eve, &input.t)?, &input.q, &input.r)?
    };
    Ok(MemberTerms {
        u_bob,
        u_eve,
        y_bob_given_u,
        y_eve_given_u,
    })
}

/// One achievable corner `(R_pub, R_c)` in bits per channel use.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionCorner {
    pub scenario: Scenario,
    /// Common (BCC) or public (TPC) rate.
    pub r_pub: f64,
    /// Confidential rate, clamped at zero.
    pub r_c: f64,
    /// Confidential rate before clamping.
    pub r_c_unclamped: f64,
    /// Member and receiver attaining the public-rate infimum.
    pub pub_member: usize,
    pub pub_receiver: Receiver,
    /// Member attaining the infimum of Bob's conditional term.
    pub bob_member: usize,
    /// Member attaining the supremum of Eve's conditional term.
    pub eve_member: usize,
    /// Continuity slack for net-discretised compounds, in bits per use.
    pub slack: f64,
    pub terms: Vec<MemberTerms>,
    pub input: FactorizedInput,
}

pub fn evaluate_bcc_corner(compound: &CompoundSet, input: &FactorizedInput) -> Result<RegionCorner> {
    evaluate_corner(compound, input, Scenario::Bcc)
}

pub fn evaluate_tpc_corner(compound: &CompoundSet, input: &FactorizedInput) -> Result<RegionCorner> {
    evaluate_corner(compound, input, Scenario::Tpc)
}

pub fn evaluate_corner(compound: &CompoundSet, input: &FactorizedInput, scenario: Scenario) -> Result<RegionCorner> {
    input.validate()?;
    let prepared = PreparedCompound::new(compound, input.l)?;
    evaluate_prepared(&prepared, input, scenario)
}

/// Slack of a net-discretised compound: the conditional-information
/// continuity bound at block distance `2 l tau`, per channel use.
pub fn net_slack(tau: f64, l: usize, dims: (usize, usize)) -> Result<f64> {
    let d = composite_dim((0..l).map(|_| dims.0.max(dims.1).max(2)));
    let delta = (2.0 * l as f64 * tau).min(2.0);
    Ok(continuity_bounds(delta, d, ContinuityKind::ConditionalMutualInformation)? / l as f64)
}

pub fn evaluate_prepared(prepared: &PreparedCompound, input: &FactorizedInput, scenario: Scenario) -> Result<RegionCorner> {
    let terms = (0..prepared.len())
        .map(|s| member_terms(prepared, s, input))
        .collect::<Result<Vec<_>>>()?;
    let l = prepared.l as f64;

    let mut pub_best = (f64::INFINITY, 0, Receiver::Bob);
    let mut bob_best = (f64::INFINITY, 0);
    let mut eve_best = (f64::NEG_INFINITY, 0);
    for (s, t) in terms.iter().enumerate() {
        if t.u_bob < pub_best.0 {
            pub_best = (t.u_bob, s, Receiver::Bob);
        }
        if scenario == Scenario::Bcc && t.u_eve < pub_best.0 {
            pub_best = (t.u_eve, s, Receiver::Eve);
        }
        if t.y_bob_given_u < bob_best.0 {
            bob_best = (t.y_bob_given_u, s);
        }
        if t.y_eve_given_u > eve_best.0 {
            eve_best = (t.y_eve_given_u, s);
        }
    }
    let r_c_unclamped = (bob_best.0 - eve_best.0) / l;
    let slack = match prepared.tau {
        Some(tau) => net_slack(tau, prepared.l, prepared.dims)?,
        None => 0.0,
    };
    Ok(RegionCorner {
        scenario,
        r_pub: (pub_best.0 / l).max(0.0),
        r_c: r_c_unclamped.max(0.0),
        r_c_unclamped,
        pub_member: pub_best.1,
        pub_receiver: pub_best.2,
        bob_member: bob_best.1,
        eve_member: eve_best.1,
        slack,
        terms,
        input: input.clone(),
    })
}

/// The full classical-classical-quantum state of one member, kept as a
/// reference for the cached evaluation.
#[derive(Clone, Debug)]
pub struct EvaluationState {
    pub state: DensityOperator,
    /// Register dimensions `(|U|, |Y|, d_B^l, d_E^l)`.
    pub dims: [usize; 4],
}

impl EvaluationState {
    pub const U: usize = 0;
    pub const Y: usize = 1;
    pub const B: usize = 2;
    pub const E: usize = 3;

    pub fn build(member: &CqqBroadcastChannel, input: &FactorizedInput) -> Result<Self> {
        input.validate()?;
        let l = input.l;
        let (db, de) = member.dims();
        let (nu, ny) = (input.u_size(), input.y_size());
        let (dbl, del) = (db.pow(l as u32), de.pow(l as u32));
        let total = composite_dim([nu, ny, dbl, del]);
        check_cap(total, dim_cap())?;
        let blocks = all_words(member.alphabet_size(), l);
        if blocks.len() != input.block_alphabet_size() {
            return Err(Error::Dimension("input blocks do not match channel alphabet".into()));
        }
        let factor_dims: Vec<usize> = (0..l).flat_map(|_| [db, de]).collect();
        let perm: Vec<usize> = (0..l).map(|k| 2 * k).chain((0..l).map(|k| 2 * k + 1)).collect();
        let block_outputs = blocks
            .iter()
            .map(|b| {
                let interleaved = member.apply_word(b)?;
                permute_subsystems(interleaved.op(), &factor_dims, &perm)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut acc = ComplexOperator::zeros(total);
        for u in 0..nu {
            for y in 0..ny {
                let w = input.q[u] * input.r[u][y];
                if w == 0.0 {
                    continue;
                }
                let mut rho = ComplexOperator::zeros(dbl * del);
                for (x, out) in block_outputs.iter().enumerate() {
                    if input.t[y][x] != 0.0 {
                        rho.add_scaled(out, input.t[y][x]);
                    }
                }
                let labels = [
                    ComplexOperator::basis_projector(nu, u),
                    ComplexOperator::basis_projector(ny, y),
                    rho,
                ];
                acc.add_scaled(&tensor_all(labels.iter())?, w);
            }
        }
        Ok(EvaluationState {
            state: DensityOperator::from_op(acc),
            dims: [nu, ny, dbl, del],
        })
    }

    pub fn marginal_entropy(&self, registers: &[usize]) -> Result<f64> {
        if registers.is_empty() {
            return Ok(0.0);
        }
        let reduced = reduce_to(self.state.op(), &self.dims, registers)?;
        Ok(entropy(&DensityOperator::from_op(reduced)))
    }

    /// `I(A;B)` between two registers.
    pub fn mutual_information(&self, a: usize, b: usize) -> Result<f64> {
        let reduced = reduce_to(self.state.op(), &self.dims, &[a, b])?;
        mutual_information(&DensityOperator::from_op(reduced), (self.dims[a], self.dims[b]))
    }

    /// `I(A;B|C) = S(AC) + S(BC) - S(ABC) - S(C)`.
    pub fn conditional_mutual_information(&self, a: usize, b: usize, c: usize) -> Result<f64> {
        Ok(self.marginal_entropy(&[a, c])? + self.marginal_entropy(&[b, c])?
            - self.marginal_entropy(&[a, b, c])?
            - self.marginal_entropy(&[c])?)
    }
}

/// Settings for input optimisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Sweeps of coordinate ascent per restart.
    pub iterations: usize,
    /// Scalarisation weights on the public rate.
    pub weights: Vec<f64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            seed: 0,
            restarts: 6,
            iterations: 60,
            weights: (0..=10).map(|k| k as f64 / 10.0).collect(),
        }
    }
}

/// Best corner found for one scalarisation weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedCorner {
    pub weight: f64,
    pub corner: RegionCorner,
    pub objective: f64,
    /// Whether the last restart that found the optimum ended with a step
    /// below the convergence threshold.
    pub converged: bool,
}

/// Achievable corners and the upper-right boundary of their convex,
/// down-closed hull.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    pub scenario: Scenario,
    pub corners: Vec<WeightedCorner>,
    /// Pareto-maximal hull vertices, public rate increasing.
    pub frontier: Vec<(f64, f64)>,
}

impl RateRegion {
    pub fn from_corners(scenario: Scenario, corners: Vec<WeightedCorner>) -> Self {
        let pts: Vec<(f64, f64)> = corners.iter().map(|c| (c.corner.r_pub, c.corner.r_c)).collect();
        RateRegion {
            scenario,
            frontier: pareto_hull(&pts),
            corners,
        }
    }

    pub fn max_public(&self) -> f64 {
        self.frontier.last().map_or(0.0, |p| p.0)
    }

    pub fn max_confidential(&self) -> f64 {
        self.frontier.first().map_or(0.0, |p| p.1)
    }

    /// Largest confidential rate on the boundary at public rate `a`.
    pub fn boundary_at(&self, a: f64) -> Option<f64> {
        let f = &self.frontier;
        if f.is_empty() || a > f[f.len() - 1].0 || a < 0.0 {
            return None;
        }
        if a <= f[0].0 {
            return Some(f[0].1);
        }
        for w in f.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if a <= x1 {
                let t = if x1 > x0 { (a - x0) / (x1 - x0) } else { 1.0 };
                return Some(y0 + t * (y1 - y0));
            }
        }
        Some(f[f.len() - 1].1)
    }

    /// Whether `(a, b)` lies in the down-closed convex hull within `tol`.
    pub fn contains(&self, point: (f64, f64), tol: f64) -> bool {
        let (a, b) = point;
        if a < -tol || b < -tol {
            return false;
        }
        let a = a.max(0.0);
        match self.boundary_at(a.min(self.max_public())) {
            Some(limit) => a <= self.max_public() + tol && b <= limit + tol,
            None => false,
        }
    }
}

/// Upper-right boundary of the down-closed convex hull of `points`.
pub fn pareto_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    for &(a, b) in points {
        let (a, b) = (a.max(0.0), b.max(0.0));
        pts.extend([(a, b), (a, 0.0), (0.0, b)]);
    }
    pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    pts.dedup();
    // Upper hull by monotone chain.
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= -1e-15 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // Keep the decreasing part: from the highest point to the rightmost.
    let top = hull
        .iter()
        .enumerate()
        .fold(0, |best, (i, p)| if p.1 > hull[best].1 { i } else { best });
    hull[top..].to_vec()
}

/// A point of the search space: `q`, the rows of `r` and the rows of `t`
/// are all simplices.
#[derive(Clone, Debug)]
struct SearchPoint {
    blocks: Vec<Vec<f64>>,
    u: usize,
    y: usize,
    l: usize,
}

impl SearchPoint {
    fn input(&self) -> FactorizedInput {
        FactorizedInput {
            l: self.l,
            q: self.blocks[0].clone(),
            r: self.blocks[1..1 + self.u].to_vec(),
            t: self.blocks[1 + self.u..1 + self.u + self.y].to_vec(),
        }
    }
}

fn score(corner: &RegionCorner, weight: f64) -> (f64, f64) {
    (
        weight * corner.r_pub + (1.0 - weight) * corner.r_c,
        weight * corner.r_pub + (1.0 - weight) * corner.r_c_unclamped,
    )
}

fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    if a.0 > b.0 + 1e-12 {
        return true;
    }
    a.0 >= b.0 - 1e-12 && a.1 > b.1 + 1e-12
}

/// Random-restart coordinate ascent over factorised inputs for every weight.
///
/// Moves transfer probability mass between two coordinates of one simplex;
/// the step halves after a sweep without improvement. Weights and restarts
/// are independent and run in parallel with per-task random streams.
/// Corner, its `(objective, tie-break)` score and convergence flag.
type Candidate = (RegionCorner, (f64, f64), bool);

pub fn optimize_region(
    compound: &CompoundSet,
    scenario: Scenario,
    sizes: (usize, usize),
    l: usize,
    config: &OptimizerConfig,
) -> Result<RateRegion> {
    let (nu, ny) = sizes;
    if nu == 0 || ny == 0 {
        return Err(Error::Domain("alphabet sizes must be positive".into()));
    }
    if config.weights.iter().any(|w| !(0.0..=1.0).contains(w)) || config.weights.is_empty() {
        return Err(Error::Domain("weights must lie in [0, 1]".into()));
    }
    let prepared = PreparedCompound::new(compound, l)?;
    let nx = prepared.block_alphabet_size();
    let tasks: Vec<(usize, usize)> = (0..config.weights.len())
        .flat_map(|w| (0..config.restarts.max(1)).map(move |r| (w, r)))
        .collect();
    let results: Vec<Result<Candidate>> = tasks
        .par_iter()
        .map(|&(wi, restart)| {
            let weight = config.weights[wi];
            let mut rng = stream(config.seed, (wi * 100_003 + restart) as u64);
            let mut point = SearchPoint {
                blocks: Vec::with_capacity(1 + nu + ny),
                u: nu,
                y: ny,
                l,
            };
            let dims = std::iter::once(nu).chain(std::iter::repeat_n(ny, nu)).chain(std::iter::repeat_n(nx, ny));
            for size in dims {
                point.blocks.push(if restart == 0 {
                    vec![1.0 / size as f64; size]
                } else {
                    random_distribution(size, &mut rng)
                });
            }
            ascend(&prepared, scenario, weight, point, config.iterations, &mut rng)
        })
        .collect();

    let mut best: Vec<Option<Candidate>> = vec![None; config.weights.len()];
    for (&(wi, _), res) in tasks.iter().zip(results) {
        let res = res?;
        let replace = match &best[wi] {
            None => true,
            Some(current) => better(res.1, current.1),
        };
        if replace {
            best[wi] = Some(res);
        }
    }
    let corners = best
        .into_iter()
        .zip(&config.weights)
        .map(|(b, &weight)| {
            let (corner, s, converged) = b.expect("every weight has at least one restart");
            WeightedCorner {
                weight,
                corner,
                objective: s.0,
                converged,
            }
        })
        .collect();
    Ok(RateRegion::from_corners(scenario, corners))
}

fn ascend<R: Rng>(
    prepared: &PreparedCompound,
    scenario: Scenario,
    weight: f64,
    mut point: SearchPoint,
    sweeps: usize,
    rng: &mut R,
) -> Result<Candidate> {
    let mut corner = evaluate_prepared(prepared, &point.input(), scenario)?;
    let mut current = score(&corner, weight);
    let mut step: f64 = 0.5;
    let min_step = 1e-7;
    for _ in 0..sweeps {
        let mut improved = false;
        let block_order: Vec<usize> = {
            let mut v: Vec<usize> = (0..point.blocks.len()).collect();
            for i in (1..v.len()).rev() {
                let j = rng.random_range(0..=i);
                v.swap(i, j);
            }
            v
        };
        for b in block_order {
            let size = point.blocks[b].len();
            for i in 0..size {
                for j in 0..size {
                    if i == j || point.blocks[b][j] <= 0.0 {
                        continue;
                    }
                    let moved = step.min(point.blocks[b][j]);
                    let mut candidate = point.clone();
                    candidate.blocks[b][j] -= moved;
                    candidate.blocks[b][i] += moved;
                    renormalise(&mut candidate.blocks[b]);
                    let c = evaluate_prepared(prepared, &candidate.input(), scenario)?;
                    let s = score(&c, weight);
                    if better(s, current) {
                        point = candidate;
                        corner = c;
                        current = s;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < min_step {
                return Ok((corner, current, true));
            }
        }
    }
    Ok((corner, current, step < 1e-3))
}

fn renormalise(v: &mut [f64]) {
    for x in v.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let total: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= total;
    }
}

/// Effective cq compound `y -> N_s^{⊗l}(rho_y)` of fully quantum channels
/// for signal states on `d_A^l`.
pub fn reduce_full_quantum(family: &[CptpChannel], signals: &[DensityOperator], l: usize) -> Result<CompoundSet> {
    let Some(first) = family.first() else {
        return Err(Error::validation("non-empty compound", "no channels supplied"));
    };
    if signals.is_empty() {
        return Err(Error::validation("one output per letter", "no signal states"));
    }
    let din = composite_dim((0..l).map(|_| first.input_dim()));
    check_cap(din, dim_cap())?;
    let members = family
        .iter()
        .map(|n| {
            if n.input_dim() != first.input_dim() || n.dims() != first.dims() {
                return Err(Error::Dimension("channels differ in shape".into()));
            }
            let outputs = signals
                .iter()
                .map(|rho| n.apply_block(rho, l))
                .collect::<Result<Vec<_>>>()?;
            let (db, de) = n.dims();
            CqqBroadcastChannel::new(outputs, (db.pow(l as u32), de.pow(l as u32)))
        })
        .collect::<Result<Vec<_>>>()?;
    CompoundSet::new(members)
}
