//! Dyadic area construction for parametric families of rough paths.
//!
//! Given a family ε ↦ X(ε) dominated by a common control ω with Hölder and
//! Lipschitz-in-ε constants, the construction picks area elements above the
//! pair (x(ε), x(δ)) on dyadic intervals of [0, 1]: the seed sits on [0, 1],
//! each refinement forces equal areas on the two halves, and the composition
//! rule
//!
//! ```text
//! A_{s,u} = A_{s,t} + A_{t,u} + ½ (y_{s,t} ⊗ y_{t,u} - y_{t,u} ⊗ y_{s,t})
//! ```
//!
//! (eq. of motion of the off-diagonal second-level block) holds exactly.
//! From the areas one assembles the joint rough path Z(ε, δ) and, for a
//! discrete measure μ, the integral X^μ.

use rayon::prelude::*;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::roughpath::{validate_p, GridRoughPath, PairRoughPath};
use crate::tensor::Tensor2;

/// Control function ω on grid pairs: nonnegative, zero on the diagonal,
/// superadditive.
#[derive(Clone)]
pub enum Control {
    /// ω(s, t) = rate · (t - s); the form every reparameterized family has.
    LinearRate(f64),
    /// Explicit table ω[i][j] on grid index pairs i <= j.
    Table(Vec<Vec<f64>>),
}

impl Control {
    pub fn eval(&self, times: &[f64], i: usize, j: usize) -> f64 {
        match self {
            Control::LinearRate(rate) => rate * (times[j] - times[i]),
            Control::Table(table) => table[i][j],
        }
    }
}

/// A map ε ∈ [0, 1] ↦ GridRoughPath on a fixed grid, with declared Hölder
/// constant C and control ω:
///
/// ```text
/// ‖X^i_{s,t}(ε)‖ <= C ω(s,t)^{i/p},
/// ‖X^i_{s,t}(ε) - X^i_{s,t}(ε̃)‖ <= C |ε-ε̃| ω(s,t)^{i/p}.
/// ```
#[derive(Clone)]
pub struct ParametricFamily {
    dim: usize,
    times: Vec<f64>,
    sampler: Arc<dyn Fn(f64) -> Result<GridRoughPath> + Send + Sync>,
    holder_c: f64,
    control: Control,
}

impl ParametricFamily {
    pub fn new(
        dim: usize,
        times: Vec<f64>,
        holder_c: f64,
        control: Control,
        sampler: Arc<dyn Fn(f64) -> Result<GridRoughPath> + Send + Sync>,
    ) -> Self {
        ParametricFamily { dim, times, sampler, holder_c, control }
    }

    /// x(ε, t) = ε t v: all increments stay colinear, so every antisymmetric
    /// cross term vanishes.
    pub fn colinear(direction: Vec<f64>, times: Vec<f64>) -> Result<Self> {
        if times.last() > Some(&1.0) {
            return Err(Error::InvalidInput("colinear family lives on [0, 1]".into()));
        }
        let dim = direction.len();
        let norm = crate::tensor::euclidean(&direction);
        let holder_c = norm.max(norm * norm);
        let times_for_sampler = times.clone();
        let sampler = Arc::new(move |eps: f64| {
            let pts: Vec<Vec<f64>> = times_for_sampler
                .iter()
                .map(|t| direction.iter().map(|v| eps * t * v).collect())
                .collect();
            GridRoughPath::canonical_lift(&times_for_sampler, &pts)
        });
        Ok(ParametricFamily { dim, times, sampler, holder_c, control: Control::LinearRate(1.0) })
    }

    /// X(ε) = ε X for a fixed base path, reparameterized onto the control
    /// scale, rescaled to [0, 1] and sampled on the dyadic grid of `depth`.
    pub fn scaled_lift(base: &GridRoughPath, p: f64, depth: usize) -> Result<Self> {
        validate_p(p)?;
        let omega = base.control_prefix(p)?;
        let rate = *omega.last().expect("control has one entry per grid point");
        let (reparam, _) = base.reparameterize(p)?;
        let horizon = *reparam.times().last().expect("grid nonempty");
        let unit_times: Vec<f64> = reparam.times().iter().map(|t| t / horizon).collect();
        let unit = GridRoughPath::from_signatures(
            base.dim(),
            unit_times,
            reparam.signatures().to_vec(),
        )?;
        let times = dyadic_times(depth);
        let prepared = unit.resample(&times)?;
        let dim = prepared.dim();
        let sampler = Arc::new(move |eps: f64| Ok(prepared.scalar_mul(eps)));
        Ok(ParametricFamily {
            dim,
            times,
            sampler,
            holder_c: 2.0,
            control: Control::LinearRate(rate),
        })
    }

    /// Family given by explicitly stored members (e.g. loaded from files).
    /// Sampling is exact on the stored ε values only. When no Hölder
    /// constant is declared, the smallest constant making both displayed
    /// inequalities hold on the stored data is measured and used.
    pub fn from_members(
        members: Vec<(f64, GridRoughPath)>,
        p: f64,
        holder_c: Option<f64>,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput("family needs at least one member".into()));
        }
        let dim = members[0].1.dim();
        let times = members[0].1.times().to_vec();
        for (_, path) in &members {
            if path.dim() != dim || path.times() != times {
                return Err(Error::GridMismatch(Some("family members on different grids".into())));
            }
        }
        // Sum of the members' control prefixes is superadditive and
        // dominates each member.
        let n = times.len() - 1;
        let mut rate = 0.0f64;
        for (_, path) in &members {
            let prefix = path.control_prefix(p)?;
            rate += prefix[n];
        }
        let horizon = times[n];
        let control = Control::LinearRate(rate / horizon);
        let holder_c = match holder_c {
            Some(c) => c,
            None => measured_holder_constant(&members, &times, &control, p)?,
        };
        let members = Arc::new(members);
        let sampler = Arc::new(move |eps: f64| {
            members
                .iter()
                .find(|(e, _)| *e == eps)
                .map(|(_, path)| path.clone())
                .ok_or_else(|| {
                    Error::InvalidInput(format!("family has no stored member at ε = {eps}"))
                })
        });
        Ok(ParametricFamily { dim, times, sampler, holder_c, control })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn holder_constant(&self) -> f64 {
        self.holder_c
    }

    pub fn control(&self) -> &Control {
        &self.control
    }

    pub fn control_at(&self, i: usize, j: usize) -> f64 {
        self.control.eval(&self.times, i, j)
    }

    /// ω(0, T) over the family grid.
    pub fn control_total(&self) -> f64 {
        self.control_at(0, self.times.len() - 1)
    }

    pub fn sample(&self, eps: f64) -> Result<GridRoughPath> {
        let path = (self.sampler)(eps)?;
        if path.dim() != self.dim || path.times() != self.times {
            return Err(Error::GridMismatch(Some(format!(
                "sampler returned a path off the family grid at ε = {eps}"
            ))));
        }
        Ok(path)
    }
}

fn measured_holder_constant(
    members: &[(f64, GridRoughPath)],
    times: &[f64],
    control: &Control,
    p: f64,
) -> Result<f64> {
    let n = times.len() - 1;
    let budget = 2000usize;
    let total_pairs = n * (n + 1) / 2;
    let stride = total_pairs.div_ceil(budget).max(1);
    let mut worst = 1.0f64;
    let mut count = 0usize;
    for i in 0..=n {
        for j in i + 1..=n {
            count += 1;
            if !count.is_multiple_of(stride) && !(i == 0 && j == n) {
                continue;
            }
            let omega = control.eval(times, i, j);
            if omega <= 0.0 {
                continue;
            }
            for level in [1u8, 2u8] {
                let scale = omega.powf(f64::from(level) / p);
                for (a, (ea, xa)) in members.iter().enumerate() {
                    worst = worst.max(xa.increment(i, j)?.level_norm(level)? / scale);
                    for (eb, xb) in members.iter().skip(a + 1) {
                        let gap = (ea - eb).abs();
                        if gap == 0.0 {
                            continue;
                        }
                        let ia = xa.increment(i, j)?;
                        let ib = xb.increment(i, j)?;
                        let diff = match level {
                            1 => crate::tensor::euclidean(
                                &ia.level1
                                    .iter()
                                    .zip(&ib.level1)
                                    .map(|(x, y)| x - y)
                                    .collect::<Vec<_>>(),
                            ),
                            _ => crate::tensor::euclidean(
                                &ia.level2
                                    .iter()
                                    .zip(&ib.level2)
                                    .map(|(x, y)| x - y)
                                    .collect::<Vec<_>>(),
                            ),
                        };
                        worst = worst.max(diff / (gap * scale));
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// The dyadic grid 0, 1/2^N, …, 1 (exact binary floats).
pub fn dyadic_times(depth: usize) -> Vec<f64> {
    let n = 1usize << depth;
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

/// Verification report for the family condition.
#[derive(Debug, Clone)]
pub struct FamilyReport {
    /// worst ‖X^i‖ / (C ω^{i/p})
    pub holder_worst: f64,
    /// worst ‖X^i(ε) - X^i(ε̃)‖ / (C |ε-ε̃| ω^{i/p})
    pub lipschitz_worst: f64,
    /// worst (ω(s,t) + ω(t,u)) / ω(s,u)
    pub superadditivity_worst: f64,
    pub violations: Vec<String>,
}

impl FamilyReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the two displayed inequalities of the family condition and the
/// control's superadditivity on the sampled ε set, visiting at most
/// `pair_budget` grid pairs (deterministic stride subsampling).
pub fn check_family_condition(
    fam: &ParametricFamily,
    p: f64,
    eps_samples: &[f64],
    pair_budget: usize,
) -> Result<FamilyReport> {
    validate_p(p)?;
    if eps_samples.len() < 2 {
        return Err(Error::InvalidInput("need at least 2 ε samples".into()));
    }
    let n = fam.times.len() - 1;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            pairs.push((i, j));
        }
    }
    if pairs.len() > pair_budget.max(1) {
        let stride = pairs.len().div_ceil(pair_budget.max(1));
        pairs = pairs.into_iter().step_by(stride).collect();
    }
    let mut report = FamilyReport {
        holder_worst: 0.0,
        lipschitz_worst: 0.0,
        superadditivity_worst: 0.0,
        violations: Vec::new(),
    };
    let c = fam.holder_c;
    let paths: Vec<(f64, GridRoughPath)> = eps_samples
        .iter()
        .map(|&e| fam.sample(e).map(|x| (e, x)))
        .collect::<Result<_>>()?;
    let tol = 1.0 + 1e-9;
    for (i, j) in &pairs {
        let omega = fam.control_at(*i, *j);
        if omega < 0.0 {
            report.violations.push(format!("ω({i},{j}) = {omega} is negative"));
            continue;
        }
        for level in [1u8, 2u8] {
            let bound = c * omega.powf(f64::from(level) / p);
            for (e, x) in &paths {
                let v = x.increment(*i, *j)?.level_norm(level)?;
                if bound > 0.0 {
                    report.holder_worst = report.holder_worst.max(v / bound);
                } else if v > 0.0 {
                    report.holder_worst = f64::INFINITY;
                }
                if v > bound * tol {
                    report.violations.push(format!(
                        "Hölder bound fails at ε={e}, level {level}, pair ({i},{j}): {v} > {bound}"
                    ));
                }
            }
            for a in 0..paths.len() {
                for b in a + 1..paths.len() {
                    let (ea, xa) = &paths[a];
                    let (eb, xb) = &paths[b];
                    let ia = xa.increment(*i, *j)?;
                    let ib = xb.increment(*i, *j)?;
                    let diff = match level {
                        1 => crate::tensor::euclidean(
                            &ia.level1.iter().zip(&ib.level1).map(|(x, y)| x - y).collect::<Vec<_>>(),
                        ),
                        _ => crate::tensor::euclidean(
                            &ia.level2.iter().zip(&ib.level2).map(|(x, y)| x - y).collect::<Vec<_>>(),
                        ),
                    };
                    let bound_lip = bound * (ea - eb).abs();
                    if bound_lip > 0.0 {
                        report.lipschitz_worst = report.lipschitz_worst.max(diff / bound_lip);
                    } else if diff > 0.0 {
                        report.lipschitz_worst = f64::INFINITY;
                    }
                    if diff > bound_lip * tol {
                        report.violations.push(format!(
                            "ε-Lipschitz bound fails at (ε,ε̃)=({ea},{eb}), level {level}, pair ({i},{j})"
                        ));
                    }
                }
            }
        }
    }
    // superadditivity over sampled triples
    let mut count = 0usize;
    'outer: for i in 0..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                count += 1;
                if count > pair_budget.max(1) {
                    break 'outer;
                }
                let lhs = fam.control_at(i, j) + fam.control_at(j, k);
                let rhs = fam.control_at(i, k);
                if rhs > 0.0 {
                    report.superadditivity_worst = report.superadditivity_worst.max(lhs / rhs);
                }
                if lhs > rhs * tol {
                    report
                        .violations
                        .push(format!("superadditivity fails at triple ({i},{j},{k})"));
                }
            }
        }
    }
    Ok(report)
}

/// Seed for the area element on [0, 1].
#[derive(Debug, Clone)]
pub enum AreaSeed {
    /// Constant c above the diagonal, -c below; the antisymmetric version of
    /// the constant seed. Zero gives the cleanest algebra.
    Scalar(f64),
    /// A d×d block seeding the (1,2) cross entries; diagonal blocks start at
    /// zero and the (2,1) block is the negative transpose.
    Cross(Vec<f64>),
}

impl AreaSeed {
    fn expand(&self, half: usize) -> Result<Vec<f64>> {
        let big = 2 * half;
        let mut seed = vec![0.0; big * big];
        match self {
            AreaSeed::Scalar(c) => {
                for i in 0..big {
                    for j in 0..big {
                        if i < j {
                            seed[i * big + j] = *c;
                        } else if i > j {
                            seed[i * big + j] = -*c;
                        }
                    }
                }
            }
            AreaSeed::Cross(block) => {
                if block.len() != half * half {
                    return Err(Error::InvalidInput(format!(
                        "cross seed must be {half}×{half}"
                    )));
                }
                for i in 0..half {
                    for j in 0..half {
                        seed[i * big + (half + j)] = block[i * half + j];
                        seed[(half + i) * big + j] = -block[j * half + i];
                    }
                }
            }
        }
        Ok(seed)
    }
}

/// Antisymmetric area elements of the pair path (x(ε), x(δ)) on every dyadic
/// interval up to `depth`.
#[derive(Debug, Clone)]
pub struct DyadicArea {
    half: usize,
    depth: usize,
    eps: f64,
    delta: f64,
    /// levels[n][k]: (2d)×(2d) antisymmetric matrix on [k/2^n, (k+1)/2^n].
    levels: Vec<Vec<Vec<f64>>>,
    /// Running level-1 of the pair path at the finest dyadic nodes.
    pair_running: Vec<Vec<f64>>,
}

fn half_cross(left: &[f64], right: &[f64]) -> Vec<f64> {
    let m = left.len();
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            out[i * m + j] = 0.5 * (left[i] * right[j] - right[i] * left[j]);
        }
    }
    out
}

/// Build the dyadic areas for the pair (X(ε), X(δ)).
pub fn build_dyadic_area(
    fam: &ParametricFamily,
    eps: f64,
    delta: f64,
    depth: usize,
    seed: &AreaSeed,
) -> Result<DyadicArea> {
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be >= 1".into()));
    }
    let x_eps = fam.sample(eps)?;
    let x_delta = fam.sample(delta)?;
    let d = fam.dim();
    let fine = dyadic_times(depth);
    // dyadic times must appear in the family grid with exact stamps
    let idx: Vec<usize> = fine
        .iter()
        .map(|t| {
            fam.times
                .iter()
                .position(|u| u == t)
                .ok_or_else(|| Error::InvalidInput(format!("family grid misses dyadic time {t}")))
        })
        .collect::<Result<_>>()?;
    let pair_running: Vec<Vec<f64>> = idx
        .iter()
        .map(|&k| {
            let mut row = Vec::with_capacity(2 * d);
            row.extend_from_slice(&x_eps.signature(k).level1);
            row.extend_from_slice(&x_delta.signature(k).level1);
            row
        })
        .collect();
    let seed_matrix = seed.expand(d)?;
    let mut levels: Vec<Vec<Vec<f64>>> = vec![vec![seed_matrix]];
    for n in 0..depth {
        let pieces = 1usize << n;
        let child_pieces = 2 * pieces;
        let fine_per_child = (1usize << depth) / child_pieces;
        let mut next = Vec::with_capacity(child_pieces);
        for k in 0..pieces {
            let parent = &levels[n][k];
            // halves of the parent interval, expressed at the finest grid
            let lo = 2 * k * fine_per_child;
            let mid = lo + fine_per_child;
            let hi = mid + fine_per_child;
            let left: Vec<f64> = pair_running[mid]
                .iter()
                .zip(&pair_running[lo])
                .map(|(a, b)| a - b)
                .collect();
            let right: Vec<f64> = pair_running[hi]
                .iter()
                .zip(&pair_running[mid])
                .map(|(a, b)| a - b)
                .collect();
            let cross = half_cross(&left, &right);
            let child: Vec<f64> = parent
                .iter()
                .zip(&cross)
                .map(|(a, c)| 0.5 * a - 0.5 * c)
                .collect();
            next.push(child.clone());
            next.push(child);
        }
        levels.push(next);
    }
    Ok(DyadicArea { half: d, depth, eps, delta, levels, pair_running })
}

impl DyadicArea {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn half_dim(&self) -> usize {
        self.half
    }

    /// Stored (2d)×(2d) matrix on [k/2^n, (k+1)/2^n].
    pub fn value(&self, n: usize, k: usize) -> Result<&Vec<f64>> {
        self.levels
            .get(n)
            .and_then(|row| row.get(k))
            .ok_or(Error::IndexOutOfRange { index: k, len: 1 << n.min(63) })
    }

    /// The d×d (1,2) block of the stored matrix: the cross area of
    /// (x(ε), x(δ)).
    pub fn cross_block(&self, n: usize, k: usize) -> Result<Vec<f64>> {
        let m = self.value(n, k)?;
        let d = self.half;
        let big = 2 * d;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = m[i * big + (d + j)];
            }
        }
        Ok(out)
    }

    /// Running level-1 of the pair path (x(ε), x(δ)) at the finest dyadic
    /// nodes.
    pub fn pair_running(&self) -> &[Vec<f64>] {
        &self.pair_running
    }

    /// Level-1 increment of the pair path between finest-grid indices.
    pub fn pair_increment(&self, lo: usize, hi: usize) -> Vec<f64> {
        self.pair_running[hi]
            .iter()
            .zip(&self.pair_running[lo])
            .map(|(a, b)| a - b)
            .collect()
    }

    /// Compose the area over [s, t] for finest-grid indices s < t via the
    /// composition rule, left to right over consecutive pieces.
    pub fn area_between(&self, s: usize, t: usize) -> Result<Vec<f64>> {
        let fine = 1usize << self.depth;
        if s >= t || t > fine {
            return Err(Error::IndexOutOfRange { index: s.max(t), len: fine + 1 });
        }
        let big = 2 * self.half;
        let mut acc = vec![0.0; big * big];
        for k in s..t {
            let piece = &self.levels[self.depth][k];
            if k == s {
                acc.copy_from_slice(piece);
                continue;
            }
            let span = self.pair_increment(s, k);
            let step = self.pair_increment(k, k + 1);
            let cross = half_cross(&span, &step);
            for idx in 0..acc.len() {
                acc[idx] += piece[idx] + cross[idx];
            }
        }
        Ok(acc)
    }

    /// Area over real times [s, t] ⊆ [0, 1], floored to the finest dyadic
    /// resolution.
    pub fn area_at(&self, s: f64, t: f64) -> Result<Vec<f64>> {
        if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&t) || s >= t {
            return Err(Error::InvalidInput(format!("need 0 <= s < t <= 1, got ({s}, {t})")));
        }
        let fine = (1usize << self.depth) as f64;
        let si = (s * fine).floor() as usize;
        let ti = ((t * fine).floor() as usize).min(1 << self.depth);
        if si >= ti {
            return Err(Error::InvalidInput(format!(
                "interval ({s}, {t}) collapses at depth {}",
                self.depth
            )));
        }
        self.area_between(si, ti)
    }

    /// Running areas A_{0, k/2^N} at every finest node (A_{0,0} = 0).
    pub fn running_from_zero(&self) -> Vec<Vec<f64>> {
        let big = 2 * self.half;
        let fine = 1usize << self.depth;
        let mut out = Vec::with_capacity(fine + 1);
        out.push(vec![0.0; big * big]);
        for k in 0..fine {
            let piece = &self.levels[self.depth][k];
            let prev = &out[k];
            let next: Vec<f64> = if k == 0 {
                piece.clone()
            } else {
                let span = self.pair_increment(0, k);
                let step = self.pair_increment(k, k + 1);
                let cross = half_cross(&span, &step);
                prev.iter()
                    .zip(piece)
                    .zip(&cross)
                    .map(|((a, b), c)| a + b + c)
                    .collect()
            };
            out.push(next);
        }
        out
    }

    /// Largest composition-rule residual over consecutive dyadic triples at
    /// every stored level.
    pub fn arealem_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        let fine = 1usize << self.depth;
        for n in 1..=self.depth {
            let pieces = 1usize << n;
            let fine_per = fine / pieces;
            for k in 0..pieces - 1 {
                let (lo, mid, hi) = (k * fine_per, (k + 1) * fine_per, (k + 2) * fine_per);
                let left = &self.levels[n][k];
                let right = &self.levels[n][k + 1];
                let whole = self.area_between(lo, hi).expect("indices in range");
                let cross = half_cross(&self.pair_increment(lo, mid), &self.pair_increment(mid, hi));
                for idx in 0..whole.len() {
                    let composed = left[idx] + right[idx] + cross[idx];
                    worst = worst.max((whole[idx] - composed).abs());
                }
            }
        }
        worst
    }

    /// Largest |A^{IJ} + A^{JI}| over every stored value.
    pub fn antisymmetry_residual(&self) -> f64 {
        let big = 2 * self.half;
        let mut worst = 0.0f64;
        for row in &self.levels {
            for m in row {
                for i in 0..big {
                    for j in 0..big {
                        worst = worst.max((m[i * big + j] + m[j * big + i]).abs());
                    }
                }
            }
        }
        worst
    }
}

/// The constant Ĉ controlling how the dyadic areas move with (ε, δ):
/// ½ C² ω(0,T)^{2/p} Σ_{l≥0} 2^{l(2-p)/p} (unit horizon).
pub fn area_lipschitz_constant(holder_c: f64, omega_total: f64, p: f64) -> f64 {
    let series = 1.0 / (1.0 - 2f64.powf((2.0 - p) / p));
    0.5 * holder_c * holder_c * omega_total.powf(2.0 / p) * series
}

/// Assemble Z(ε, δ) over R^d ⊕ R^d on the dyadic grid: diagonal second-level
/// blocks from the family's own paths, off-diagonal blocks
/// ½ x(ε) ⊗ x(δ) + A(ε, δ) and its antisymmetric counterpart.
pub fn assemble_z(
    fam: &ParametricFamily,
    eps: f64,
    delta: f64,
    depth: usize,
    seed: &AreaSeed,
) -> Result<PairRoughPath> {
    let area = build_dyadic_area(fam, eps, delta, depth, seed)?;
    assemble_z_from_area(fam, &area)
}

fn assemble_z_from_area(fam: &ParametricFamily, area: &DyadicArea) -> Result<PairRoughPath> {
    let d = fam.dim();
    let x_eps = fam.sample(area.eps())?;
    let x_delta = fam.sample(area.delta())?;
    let fine = dyadic_times(area.depth());
    let base = x_eps.resample(&fine)?;
    let second = x_delta.resample(&fine)?;
    let running_area = area.running_from_zero();
    let len = fine.len();
    let mut dir = Vec::with_capacity(len);
    let mut c12 = Vec::with_capacity(len);
    let mut c21 = Vec::with_capacity(len);
    let mut sec2 = Vec::with_capacity(len);
    let big = 2 * d;
    for k in 0..len {
        let xe = &base.signature(k).level1;
        let xd = &second.signature(k).level1;
        dir.push(xd.clone());
        let mut block12 = vec![0.0; d * d];
        let mut block21 = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let a12 = running_area[k][i * big + (d + j)];
                let a21 = running_area[k][(d + i) * big + j];
                block12[i * d + j] = 0.5 * xe[i] * xd[j] + a12;
                block21[i * d + j] = 0.5 * xd[i] * xe[j] + a21;
            }
        }
        c12.push(block12);
        c21.push(block21);
        sec2.push(second.signature(k).level2.clone());
    }
    PairRoughPath::from_blocks(&base, &dir, &c12, &c21, &sec2)
}

/// X^μ for a discrete measure μ = Σ_j w_j δ_{ε_j}:
///
/// ```text
/// X^{μ,1} = Σ_j w_j X¹(ε_j),   X^{μ,2} = Σ_{j,k} w_j w_k π₁,₂(Z(ε_j, ε_k)).
/// ```
///
/// Weights are used as given (no normalization); negative weights are legal.
pub fn integrate_family(
    fam: &ParametricFamily,
    mu: &[(f64, f64)],
    depth: usize,
    seed: &AreaSeed,
) -> Result<GridRoughPath> {
    if mu.is_empty() {
        return Err(Error::InvalidInput("measure must carry at least one atom".into()));
    }
    let d = fam.dim();
    let fine = dyadic_times(depth);
    let len = fine.len();
    let members: Vec<GridRoughPath> = mu
        .iter()
        .map(|(e, _)| fam.sample(*e).and_then(|x| x.resample(&fine)))
        .collect::<Result<_>>()?;
    // cross runnings for every ordered pair, built independently and reduced
    // in fixed order
    let m = mu.len();
    let pair_indices: Vec<(usize, usize)> = (0..m)
        .flat_map(|j| (0..m).map(move |k| (j, k)))
        .collect();
    let crosses: Vec<Vec<Vec<f64>>> = pair_indices
        .par_iter()
        .map(|&(j, k)| {
            let area = build_dyadic_area(fam, mu[j].0, mu[k].0, depth, seed)?;
            let running = area.running_from_zero();
            let xe = &members[j];
            let xd = &members[k];
            let big = 2 * d;
            Ok((0..len)
                .map(|t| {
                    let a = &xe.signature(t).level1;
                    let b = &xd.signature(t).level1;
                    let mut block = vec![0.0; d * d];
                    for i in 0..d {
                        for jj in 0..d {
                            block[i * d + jj] =
                                0.5 * a[i] * b[jj] + running[t][i * big + (d + jj)];
                        }
                    }
                    block
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut level1 = vec![vec![0.0; d]; len];
    let mut level2 = vec![vec![0.0; d * d]; len];
    for (j, (_, w)) in mu.iter().enumerate() {
        for t in 0..len {
            for i in 0..d {
                level1[t][i] += w * members[j].signature(t).level1[i];
            }
        }
    }
    for (pos, &(j, k)) in pair_indices.iter().enumerate() {
        let cross = &crosses[pos];
        let w = mu[j].1 * mu[k].1;
        for t in 0..len {
            for idx in 0..d * d {
                level2[t][idx] += w * cross[t][idx];
            }
        }
    }
    let sig: Vec<Tensor2> = (0..len)
        .map(|t| Tensor2 {
            dim: d,
            level1: level1[t].clone(),
            level2: level2[t].clone(),
        })
        .collect();
    GridRoughPath::from_signatures(d, fine, sig)
}
