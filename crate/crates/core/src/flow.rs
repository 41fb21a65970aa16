//! Flow equations C'(τ) = F(C(τ)) on rough-path space.
//!
//! A vector field assigns to every state X a tangent representative
//! (Z(X), φ(X)) with π₁(Z(X)) = X. The Euler scheme advances along the
//! variational curve of the field's tangent:
//!
//! ```text
//! U¹_{τ+Δτ} = U¹_τ + Δτ π₂(F(U_τ))¹
//! U²_{τ+Δτ} = U²_τ + Δτ [π₁,₂ + π₂,₁ + φ](U_τ) + Δτ² π₂(Z(U_τ))²
//! ```
//!
//! with step size Δτ <= ε / ((C₁+2) M), interval length α = r / (2M), and
//! M the ball bound on the field. Every state is again a rough path, stays
//! in B_r(X₀), and the one-sided residual against the field's variational
//! curve is at most ε + 2hM.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::roughpath::{dist_p, dist_q, validate_p, validate_q, GridRoughPath, Phi};
use crate::tangent::{
    field_dist_exponent, field_seminorms, tangent_dist, tangent_dist_q, young_pair_extension,
    zero_cross_extension, TangentRep,
};
use crate::variation;

/// Lipschitz constants of the maps Z and φ building the field:
/// d_p(Z(X),Z(Y)) <= c1 d_p(X,Y), d_{p/2}(φ(X),φ(Y)) <= c2 d_p(X,Y), and the
/// q-variation versions c3, c4.
#[derive(Debug, Clone, Copy)]
pub struct FieldConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl FieldConstants {
    /// Induced d̃_p Lipschitz constant of F: max(1, C₁ + C₂).
    pub fn c5(&self) -> f64 {
        1f64.max(self.c1 + self.c2)
    }

    /// Induced d̃_q Lipschitz constant: max(1, C₃ + C₄).
    pub fn q_constant(&self) -> f64 {
        1f64.max(self.c3 + self.c4)
    }
}

/// A vector field on rough-path space.
pub trait VectorField: Sync {
    /// Evaluate at X; the returned representative is pinned to X.
    fn evaluate(&self, x: &GridRoughPath) -> Result<TangentRep>;

    /// Declared Lipschitz constants, when known.
    fn constants(&self) -> Option<FieldConstants> {
        None
    }
}

/// The zero field: F(X) is the zero tangent at X.
pub struct ZeroField;

impl VectorField for ZeroField {
    fn evaluate(&self, x: &GridRoughPath) -> Result<TangentRep> {
        let len = x.times().len();
        let zeros = vec![vec![0.0; x.dim()]; len];
        let z = zero_cross_extension(x, &zeros)?;
        TangentRep::new(x.clone(), z, Phi::zero(x.dim(), len))
    }

    fn constants(&self) -> Option<FieldConstants> {
        Some(FieldConstants { c1: 0.0, c2: 0.0, c3: 0.0, c4: 0.0 })
    }
}

/// Constant-direction field: π₂(Z(X)) is the canonical lift of a fixed
/// piecewise-linear path h, cross blocks are the segment-exact Young
/// integrals ∫ X¹ ⊗ dh and ∫ h ⊗ dX¹, and φ(X) = φ₀.
pub struct YoungCrossField {
    times: Vec<f64>,
    h_running: Vec<Vec<f64>>,
    phi0: Phi,
    constants: FieldConstants,
}

impl YoungCrossField {
    pub fn new(times: Vec<f64>, h_running: Vec<Vec<f64>>, phi0: Phi) -> Result<Self> {
        if h_running.len() != times.len() {
            return Err(Error::GridMismatch(Some("h grid differs from state grid".into())));
        }
        let dim = phi0.dim();
        if h_running.iter().any(|r| r.len() != dim) {
            return Err(Error::DimMismatch { left: dim, right: h_running[0].len() });
        }
        // total 1-variation of h drives the Young bounds
        let mut var1 = 0.0;
        for w in h_running.windows(2) {
            var1 += crate::tensor::euclidean(
                &w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect::<Vec<_>>(),
            );
        }
        let lip = 1.0 + 4.0 * var1;
        let constants = FieldConstants { c1: lip, c2: 0.0, c3: lip, c4: 0.0 };
        Ok(YoungCrossField { times, h_running, phi0, constants })
    }

    pub fn direction_running(&self) -> &[Vec<f64>] {
        &self.h_running
    }
}

impl VectorField for YoungCrossField {
    fn evaluate(&self, x: &GridRoughPath) -> Result<TangentRep> {
        if x.times() != self.times {
            return Err(Error::GridMismatch(Some("state grid differs from field grid".into())));
        }
        let z = young_pair_extension(x, &self.h_running)?;
        TangentRep::new(x.clone(), z, self.phi0.clone())
    }

    fn constants(&self) -> Option<FieldConstants> {
        Some(self.constants)
    }
}

/// Wraps a field and scales its φ output by a fixed gain; used to exhibit
/// declared-constant violations.
pub struct PhiGainField<F: VectorField> {
    pub inner: F,
    pub gain: f64,
}

impl<F: VectorField> VectorField for PhiGainField<F> {
    fn evaluate(&self, x: &GridRoughPath) -> Result<TangentRep> {
        let rep = self.inner.evaluate(x)?;
        let phi = rep.phi().scale(self.gain);
        TangentRep::new(rep.base().clone(), rep.z().clone(), phi)
    }

    fn constants(&self) -> Option<FieldConstants> {
        self.inner.constants()
    }
}

/// A field whose output ignores the state except for the mandatory pinning.
pub struct ConstantOutputField {
    pub phi: Phi,
}

impl VectorField for ConstantOutputField {
    fn evaluate(&self, x: &GridRoughPath) -> Result<TangentRep> {
        let len = x.times().len();
        let zeros = vec![vec![0.0; x.dim()]; len];
        let z = zero_cross_extension(x, &zeros)?;
        TangentRep::new(x.clone(), z, self.phi.clone())
    }
}

/// The per-step ball quantity: max(d̃_p(F(X), 0) at the base X, (p/2)-variation
/// of π₂(Z(X))²). These are exactly the norms the scheme's guarantees consume;
/// a zero field gives 0 and a capped interval.
pub fn step_bound(rep: &TangentRep, p: f64) -> Result<f64> {
    let (dir_term, combined_term) = field_seminorms(rep, p)?;
    let pi2 = rep.z().pi2();
    let n = pi2.times().len() - 1;
    let inc = pi2.all_increments();
    let second = variation::seminorm(n, p / 2.0, |i, j| {
        inc[i][j - i].level_norm(2).expect("level 2")
    });
    Ok(dir_term.max(combined_term).max(second))
}

#[derive(Debug, Clone)]
pub struct EulerOptions {
    /// Inflation applied to the sampled M estimate.
    pub safety: f64,
    /// Cap on the interval length (binds for degenerate fields).
    pub alpha_cap: f64,
    /// Reruns allowed when the a-posteriori check fails.
    pub max_reruns: usize,
    pub min_steps: usize,
    pub max_steps: usize,
}

impl Default for EulerOptions {
    fn default() -> Self {
        EulerOptions {
            safety: 1.5,
            alpha_cap: 1.0e3,
            max_reruns: 6,
            min_steps: 8,
            max_steps: 4_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FlowMeta {
    pub epsilon: f64,
    pub m_bound: f64,
    pub alpha: f64,
    pub radius: f64,
    /// (τ, residual) sampled mid-interval during the run.
    pub residual_log: Vec<(f64, f64)>,
    /// Node indices where global chunks join.
    pub junctions: Vec<usize>,
}

/// An Euler trajectory: states U(τ_k) on a uniform τ grid.
#[derive(Debug, Clone)]
pub struct FlowSolution {
    pub tau: Vec<f64>,
    pub states: Vec<GridRoughPath>,
    pub meta: FlowMeta,
}

impl FlowSolution {
    pub fn terminal(&self) -> &GridRoughPath {
        self.states.last().expect("at least the initial state")
    }
}

fn advance(field: &dyn VectorField, state: &GridRoughPath, dt: f64) -> Result<(TangentRep, GridRoughPath)> {
    let rep = field.evaluate(state)?;
    let next = rep.variational_curve(dt);
    Ok((rep, next))
}

/// One fixed-grid Euler run; returns states and the realized maximum of the
/// step quantities.
fn euler_run(
    field: &dyn VectorField,
    x0: &GridRoughPath,
    p: f64,
    alpha: f64,
    steps: usize,
) -> Result<(Vec<GridRoughPath>, f64)> {
    let dt = alpha / steps as f64;
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x0.clone());
    let mut realized = 0.0f64;
    for k in 0..steps {
        let (rep, next) = advance(field, &states[k], dt)?;
        realized = realized.max(step_bound(&rep, p)?);
        states.push(next);
    }
    Ok((states, realized))
}

/// Euler ε-solution on B_r(X₀). M is estimated
/// from the field along the trajectory (inflated by `opts.safety`) and
/// checked a posteriori; the run is repeated with a doubled factor if the
/// estimate was beaten.
pub fn euler_epsilon_solution(
    field: &dyn VectorField,
    x0: &GridRoughPath,
    r: f64,
    epsilon: f64,
    p: f64,
    opts: &EulerOptions,
) -> Result<FlowSolution> {
    validate_p(p)?;
    if r <= 0.0 || epsilon <= 0.0 {
        return Err(Error::InvalidInput("need r > 0 and ε > 0".into()));
    }
    let rep0 = field.evaluate(x0)?;
    let mut estimate = step_bound(&rep0, p)?;
    let mut safety = opts.safety;
    for _ in 0..=opts.max_reruns {
        let m = safety * estimate;
        let (alpha, steps) = plan_run(field, m, epsilon, r, opts)?;
        let (states, realized) = euler_run(field, x0, p, alpha, steps)?;
        if realized > m && realized > 0.0 {
            estimate = estimate.max(realized);
            safety *= 2.0;
            continue;
        }
        // ball containment, guaranteed by realized <= m; verified anyway
        let dt = alpha / steps as f64;
        for (k, state) in states.iter().enumerate() {
            let d = dist_p(state, x0, p)?;
            if d > r + 1e-9 * (1.0 + r) {
                return Err(Error::Verification(format!(
                    "state at τ = {} escaped the ball: d_p = {d} > r = {r}",
                    k as f64 * dt
                )));
            }
        }
        let tau: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
        let sol = FlowSolution {
            tau,
            states,
            meta: FlowMeta {
                epsilon,
                m_bound: m,
                alpha,
                radius: r,
                residual_log: Vec::new(),
                junctions: Vec::new(),
            },
        };
        return Ok(sol);
    }
    Err(Error::Verification(
        "M estimate kept being beaten by the trajectory; field may violate its constants".into(),
    ))
}

/// α = r / (2M) (capped) and the step count for mesh <= ε / ((C₁+2) M).
fn plan_run(
    field: &dyn VectorField,
    m: f64,
    epsilon: f64,
    r: f64,
    opts: &EulerOptions,
) -> Result<(f64, usize)> {
    let c1 = field.constants().map(|c| c.c5()).unwrap_or(1.0);
    let alpha = if m > 0.0 { (r / (2.0 * m)).min(opts.alpha_cap) } else { opts.alpha_cap };
    let steps = if m > 0.0 {
        let mesh = epsilon / ((c1 + 2.0) * m);
        ((alpha / mesh).ceil() as usize).max(opts.min_steps)
    } else {
        opts.min_steps
    };
    if steps > opts.max_steps {
        return Err(Error::InvalidInput(format!(
            "requested ε = {epsilon} needs {steps} Euler steps (cap {})",
            opts.max_steps
        )));
    }
    Ok((alpha, steps))
}

/// U(τ) for arbitrary τ in the run's domain: the in-interval state is the
/// variational curve of the field's tangent at the left node.
pub fn state_at(field: &dyn VectorField, sol: &FlowSolution, tau: f64) -> Result<GridRoughPath> {
    let last = *sol.tau.last().expect("nonempty grid");
    if tau < 0.0 || tau > last + 1e-12 {
        return Err(Error::IndexOutOfRange { index: 0, len: sol.tau.len() });
    }
    if let Some(k) = sol.tau.iter().position(|&t| t == tau) {
        return Ok(sol.states[k].clone());
    }
    let k = sol
        .tau
        .windows(2)
        .position(|w| w[0] <= tau && tau < w[1])
        .unwrap_or(sol.tau.len() - 2);
    let rep = field.evaluate(&sol.states[k])?;
    Ok(rep.variational_curve(tau - sol.tau[k]))
}

/// One-sided residual h⁻¹ d_q(U(τ+h), V_{F(U(τ))}(h)) against the canonical
/// variational curve of the field at U(τ).
pub fn residual(
    field: &dyn VectorField,
    sol: &FlowSolution,
    tau: f64,
    h: f64,
    p: f64,
    q: f64,
) -> Result<f64> {
    validate_p(p)?;
    validate_q(p, q)?;
    if h <= 0.0 {
        return Err(Error::InvalidInput("h must be positive".into()));
    }
    let here = state_at(field, sol, tau)?;
    let ahead = state_at(field, sol, tau + h)?;
    let rep = field.evaluate(&here)?;
    let curve = rep.variational_curve(h);
    Ok(dist_q(&ahead, &curve, p, q)? / h)
}

/// Worst ratio d_p(U_τ, U_σ) / ((1+2α) M |τ-σ|) over all stored node pairs.
pub fn lipschitz_in_tau_worst(sol: &FlowSolution, p: f64) -> Result<f64> {
    let bound_rate = (1.0 + 2.0 * sol.meta.alpha) * sol.meta.m_bound;
    if bound_rate == 0.0 {
        return Ok(0.0);
    }
    let mut worst = 0.0f64;
    for i in 0..sol.states.len() {
        for j in i + 1..sol.states.len() {
            let d = dist_p(&sol.states[i], &sol.states[j], p)?;
            let gap = (sol.tau[j] - sol.tau[i]).abs();
            worst = worst.max(d / (bound_rate * gap));
        }
    }
    Ok(worst)
}

/// Worst excess of d_p(U(τ), X₀) over min(2Mτ, r) across stored nodes.
pub fn ball_excess(sol: &FlowSolution, x0: &GridRoughPath, p: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for (k, state) in sol.states.iter().enumerate() {
        let d = dist_p(state, x0, p)?;
        let bound = (2.0 * sol.meta.m_bound * sol.tau[k]).min(sol.meta.radius);
        worst = worst.max(d - bound);
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    pub gap_to_next: Option<f64>,
    pub alpha: f64,
    pub m_bound: f64,
}

#[derive(Debug)]
pub struct LocalSolve {
    /// The finest ε run.
    pub solution: FlowSolution,
    pub table: Vec<ConvergenceRow>,
}

/// Run the ε-schedule on a common (nested dyadic) τ grid and verify the
/// runs are Cauchy in sup-over-τ d_q with monotonically decreasing gaps.
#[allow(clippy::too_many_arguments)]
pub fn solve_local(
    field: &dyn VectorField,
    x0: &GridRoughPath,
    r: f64,
    schedule: &[f64],
    p: f64,
    q: f64,
    cauchy_tol: f64,
    opts: &EulerOptions,
) -> Result<LocalSolve> {
    validate_p(p)?;
    validate_q(p, q)?;
    if schedule.is_empty() || schedule.windows(2).any(|w| w[1] >= w[0]) || schedule[0] <= 0.0 {
        return Err(Error::InvalidInput("schedule must be positive and strictly decreasing".into()));
    }
    let coarse = euler_epsilon_solution(field, x0, r, schedule[0], p, opts)?;
    let m = coarse.meta.m_bound;
    let alpha = coarse.meta.alpha;
    let base_steps = coarse.tau.len() - 1;
    let c1 = field.constants().map(|c| c.c5()).unwrap_or(1.0);
    let mut runs = vec![coarse];
    for &eps in &schedule[1..] {
        // nested refinement: double the base grid until the mesh bound holds
        let mut steps = base_steps;
        if m > 0.0 {
            let mesh = eps / ((c1 + 2.0) * m);
            while alpha / steps as f64 > mesh {
                steps *= 2;
                if steps > opts.max_steps {
                    return Err(Error::InvalidInput(format!(
                        "schedule entry ε = {eps} needs more than {} steps",
                        opts.max_steps
                    )));
                }
            }
        }
        let (states, realized) = euler_run(field, x0, p, alpha, steps)?;
        if realized > m && realized > 0.0 {
            return Err(Error::Verification(format!(
                "refined run beat the shared M bound ({realized} > {m}); rerun with larger safety"
            )));
        }
        let dt = alpha / steps as f64;
        runs.push(FlowSolution {
            tau: (0..=steps).map(|k| k as f64 * dt).collect(),
            states,
            meta: FlowMeta {
                epsilon: eps,
                m_bound: m,
                alpha,
                radius: r,
                residual_log: Vec::new(),
                junctions: Vec::new(),
            },
        });
    }
    // sup-over-τ gaps on the coarser run's nodes (they are shared)
    let mut gaps = Vec::new();
    for w in runs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let ratio = (b.tau.len() - 1) / (a.tau.len() - 1);
        let mut gap = 0.0f64;
        for (k, state) in a.states.iter().enumerate() {
            gap = gap.max(dist_q(state, &b.states[k * ratio], p, q)?);
        }
        gaps.push(gap);
    }
    for w in gaps.windows(2) {
        if w[1] > w[0] + cauchy_tol {
            return Err(Error::Verification(format!(
                "ε-schedule gaps are not decreasing ({} then {}); the field may violate its \
                 declared constants; run a Lipschitz probe",
                w[0], w[1]
            )));
        }
    }
    let table = runs
        .iter()
        .enumerate()
        .map(|(i, run)| ConvergenceRow {
            epsilon: run.meta.epsilon,
            gap_to_next: gaps.get(i).copied(),
            alpha,
            m_bound: m,
        })
        .collect();
    let solution = runs.pop().expect("at least one run");
    Ok(LocalSolve { solution, table })
}

#[derive(Debug, Clone)]
pub struct ChunkInfo {
    pub radius: f64,
    /// Realized interval length (after the configured cap).
    pub alpha: f64,
    /// r / (2M) before capping; the length-floor guarantee applies here.
    pub alpha_uncapped: f64,
    pub m_bound: f64,
}

#[derive(Debug)]
pub struct GlobalSolve {
    pub solution: FlowSolution,
    pub chunks: Vec<ChunkInfo>,
    /// The guaranteed per-chunk length floor 1 / (2 C₅ C + C₆ / e).
    pub chunk_lower_bound: f64,
}

/// Chain local solves with radii r_i = e^i until the cumulative interval
/// covers the horizon. Junctions are exact: each chunk starts from the
/// previous terminal state.
pub fn solve_global(
    field: &dyn VectorField,
    x0: &GridRoughPath,
    horizon: f64,
    epsilon: f64,
    p: f64,
    q: f64,
    opts: &EulerOptions,
) -> Result<GlobalSolve> {
    validate_p(p)?;
    validate_q(p, q)?;
    let constants = field
        .constants()
        .ok_or_else(|| Error::InvalidInput("global solve needs declared Lipschitz constants".into()))?;
    if horizon <= 0.0 {
        return Err(Error::InvalidInput("horizon must be positive".into()));
    }
    let rep0 = field.evaluate(x0)?;
    let c5 = constants.c5();
    let (dir0, comb0) = field_seminorms(&rep0, p)?;
    let c6 = dir0.max(comb0).max(rep0.z().as_path().variation_norm(p)?);
    let geo = 1.0 / (std::f64::consts::E - 1.0); // Σ_{j>=1} e^{-j}
    let chunk_lower_bound = 1.0 / (2.0 * c5 * geo + c6 / std::f64::consts::E);

    let mut tau = vec![0.0];
    let mut states = vec![x0.clone()];
    let mut junctions = Vec::new();
    let mut chunks = Vec::new();
    let mut covered = 0.0;
    let mut index = 1usize;
    let mut current = x0.clone();
    while covered < horizon {
        let radius = std::f64::consts::E.powi(index as i32);
        let chunk = euler_epsilon_solution(field, &current, radius, epsilon, p, opts)?;
        let uncapped = if chunk.meta.m_bound > 0.0 {
            radius / (2.0 * chunk.meta.m_bound)
        } else {
            f64::INFINITY
        };
        chunks.push(ChunkInfo {
            radius,
            alpha: chunk.meta.alpha,
            alpha_uncapped: uncapped,
            m_bound: chunk.meta.m_bound,
        });
        for (k, state) in chunk.states.iter().enumerate().skip(1) {
            tau.push(covered + chunk.tau[k]);
            states.push(state.clone());
        }
        covered += chunk.meta.alpha;
        current = chunk.terminal().clone();
        junctions.push(states.len() - 1);
        index += 1;
        if index > 60 {
            return Err(Error::Verification("global solve did not reach the horizon".into()));
        }
    }
    junctions.pop(); // last entry is the terminal node, not a junction
    let meta = FlowMeta {
        epsilon,
        m_bound: chunks.iter().map(|c| c.m_bound).fold(0.0, f64::max),
        alpha: covered,
        radius: f64::INFINITY,
        residual_log: Vec::new(),
        junctions,
    };
    Ok(GlobalSolve {
        solution: FlowSolution { tau, states, meta },
        chunks,
        chunk_lower_bound,
    })
}

#[derive(Debug, Clone)]
pub struct ProbeSample {
    pub dist_input: f64,
    /// d̃_p(F(X),F(Y)) / d_p(X,Y). Includes the base term, so >= 1 for any
    /// field evaluated at distinct states.
    pub ratio_p: f64,
    pub ratio_q: f64,
    /// Same ratios with the base term dropped: the field part alone.
    /// Zero for constant-output fields.
    pub field_ratio_p: f64,
    pub field_ratio_q: f64,
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub samples: Vec<ProbeSample>,
    pub worst_p: f64,
    pub worst_q: f64,
    pub worst_field_p: f64,
    pub worst_field_q: f64,
    pub declared_p: Option<f64>,
    pub declared_q: Option<f64>,
}

impl ProbeReport {
    /// True when a declared constant is exceeded.
    pub fn flagged(&self) -> bool {
        let over_p = self.declared_p.map(|c| self.worst_p > c).unwrap_or(false);
        let over_q = self.declared_q.map(|c| self.worst_q > c).unwrap_or(false);
        over_p || over_q
    }
}

/// Empirical Lipschitz ratios d̃_p(F(X),F(Y)) / d_p(X,Y) and
/// d̃_q(F(X),F(Y)) / d_p(X,Y) over the supplied state pairs.
pub fn lipschitz_probe(
    field: &dyn VectorField,
    pairs: &[(GridRoughPath, GridRoughPath)],
    p: f64,
    q: f64,
) -> Result<ProbeReport> {
    validate_p(p)?;
    validate_q(p, q)?;
    if pairs.is_empty() {
        return Err(Error::InvalidInput("need at least one probe pair".into()));
    }
    let mut samples = Vec::with_capacity(pairs.len());
    let mut worst_p = 0.0f64;
    let mut worst_q = 0.0f64;
    let mut worst_field_p = 0.0f64;
    let mut worst_field_q = 0.0f64;
    for (x, y) in pairs {
        let d = dist_p(x, y, p)?;
        if d == 0.0 {
            continue;
        }
        let fx = field.evaluate(x)?;
        let fy = field.evaluate(y)?;
        let ratio_p = tangent_dist(&fx, &fy, p)? / d;
        let ratio_q = tangent_dist_q(&fx, &fy, p, q)? / d;
        let field_ratio_p = field_dist_exponent(&fx, &fy, p)? / d;
        let field_ratio_q = field_dist_exponent(&fx, &fy, q)? / d;
        worst_p = worst_p.max(ratio_p);
        worst_q = worst_q.max(ratio_q);
        worst_field_p = worst_field_p.max(field_ratio_p);
        worst_field_q = worst_field_q.max(field_ratio_q);
        samples.push(ProbeSample { dist_input: d, ratio_p, ratio_q, field_ratio_p, field_ratio_q });
    }
    let constants = field.constants();
    Ok(ProbeReport {
        samples,
        worst_p,
        worst_q,
        worst_field_p,
        worst_field_q,
        declared_p: constants.map(|c| c.c5()),
        declared_q: constants.map(|c| c.q_constant()),
    })
}

/// Probe pairs near X₀: perturbations along random tangents via variational
/// curves at scales 2⁻¹ … 2⁻⁵.
pub fn probe_pairs(
    x0: &GridRoughPath,
    count: usize,
    seed: u64,
) -> Result<Vec<(GridRoughPath, GridRoughPath)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = x0.dim();
    let len = x0.times().len();
    let mut pairs = Vec::with_capacity(count);
    for i in 0..count {
        let mut y = vec![vec![0.0; d]];
        for k in 1..len {
            let prev = &y[k - 1];
            y.push((0..d).map(|c| prev[c] + rng.gen_range(-1.0..1.0)).collect());
        }
        let z = young_pair_extension(x0, &y)?;
        let rep = TangentRep::new(x0.clone(), z, Phi::zero(d, len))?;
        let scale = 2f64.powi(-((i % 5) as i32 + 1));
        pairs.push((rep.variational_curve(scale), x0.clone()));
    }
    Ok(pairs)
}
