//! Grid-sampled p-rough paths for 2 < p < 3.
//!
//! A path is stored through its running signatures X_{0,t_k}; any interval
//! value is derived as X_{s,t} = X_{0,s}^{-1} ⊗ X_{0,t}, so Chen's identity
//! X_{s,t} ⊗ X_{t,u} = X_{s,u} holds by construction up to roundoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{euclidean, outer, Tensor2};
use crate::variation;

/// Open-interval check for the roughness exponent.
pub fn validate_p(p: f64) -> Result<()> {
    if p > 2.0 && p < 3.0 {
        Ok(())
    } else {
        Err(Error::PRange(p))
    }
}

/// q must exceed p; the degree-2 truncation caps it at 4.
pub fn validate_q(p: f64, q: f64) -> Result<()> {
    if q > p && q <= 4.0 {
        Ok(())
    } else {
        Err(Error::QRange { p, q })
    }
}

/// A p-rough path sampled on a finite grid t_0 = 0 < t_1 < … < t_n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRoughPath {
    dim: usize,
    times: Vec<f64>,
    /// sig[k] = X_{0,t_k}; sig[0] is the identity.
    sig: Vec<Tensor2>,
}

impl GridRoughPath {
    pub fn from_signatures(dim: usize, times: Vec<f64>, sig: Vec<Tensor2>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidInput("grid needs at least 2 points".into()));
        }
        if times.len() != sig.len() {
            return Err(Error::InvalidInput(format!(
                "{} times vs {} signatures",
                times.len(),
                sig.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidInput("grid must start at t = 0".into()));
        }
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("times must be strictly increasing".into()));
        }
        for s in &sig {
            if s.dim != dim {
                return Err(Error::DimMismatch { left: dim, right: s.dim });
            }
            s.check_finite()?;
        }
        if sig[0].max_abs_diff(&Tensor2::identity(dim)) != 0.0 {
            return Err(Error::InvalidInput("sig[0] must be the identity".into()));
        }
        Ok(GridRoughPath { dim, times, sig })
    }

    /// The constant path (identity signature at every grid point).
    pub fn trivial(dim: usize, times: Vec<f64>) -> Result<Self> {
        let sig = vec![Tensor2::identity(dim); times.len()];
        GridRoughPath::from_signatures(dim, times, sig)
    }

    /// Canonical lift of a piecewise-linear path: each segment with increment
    /// Δ contributes the group element (1, Δ, ½ Δ⊗Δ).
    pub fn canonical_lift(times: &[f64], points: &[Vec<f64>]) -> Result<Self> {
        if times.len() < 2 || points.len() < 2 {
            return Err(Error::InvalidInput("lift needs at least 2 points".into()));
        }
        if times.len() != points.len() {
            return Err(Error::InvalidInput("times and points must have equal length".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("points must have dimension >= 1".into()));
        }
        if points.iter().any(|x| x.len() != dim) {
            return Err(Error::InvalidInput("points must share one dimension".into()));
        }
        let mut sig = Vec::with_capacity(times.len());
        sig.push(Tensor2::identity(dim));
        for k in 1..times.len() {
            let delta: Vec<f64> = (0..dim).map(|i| points[k][i] - points[k - 1][i]).collect();
            let mut level2 = outer(&delta, &delta);
            level2.iter_mut().for_each(|v| *v *= 0.5);
            let segment = Tensor2::new(dim, delta, level2)?;
            sig.push(sig[k - 1].mul(&segment)?);
        }
        GridRoughPath::from_signatures(dim, times.to_vec(), sig)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Number of grid intervals (grid points minus one).
    pub fn segments(&self) -> usize {
        self.times.len() - 1
    }

    pub fn signature(&self, k: usize) -> &Tensor2 {
        &self.sig[k]
    }

    pub fn signatures(&self) -> &[Tensor2] {
        &self.sig
    }

    pub fn terminal(&self) -> &Tensor2 {
        self.sig.last().expect("grid has at least 2 points")
    }

    /// X_{t_i, t_j} via Chen: sig[i]^{-1} ⊗ sig[j].
    pub fn increment(&self, i: usize, j: usize) -> Result<Tensor2> {
        let len = self.times.len();
        if i > j || j >= len {
            return Err(Error::IndexOutOfRange { index: i.max(j), len });
        }
        if i == j {
            return Ok(Tensor2::identity(self.dim));
        }
        if i == 0 {
            return Ok(self.sig[j].clone());
        }
        self.sig[i].inv().mul(&self.sig[j])
    }

    /// All interval values X_{t_i, t_j} for i <= j, indexed [i][j - i].
    pub fn all_increments(&self) -> Vec<Vec<Tensor2>> {
        let n = self.segments();
        let inv: Vec<Tensor2> = self.sig.iter().map(Tensor2::inv).collect();
        (0..=n)
            .map(|i| {
                (i..=n)
                    .map(|j| {
                        if i == j {
                            Tensor2::identity(self.dim)
                        } else {
                            inv[i].mul(&self.sig[j]).expect("dims match")
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Largest entrywise Chen defect over every grid triple i < j < k.
    pub fn chen_residual(&self) -> f64 {
        let inc = self.all_increments();
        let n = self.segments();
        let mut worst = 0.0f64;
        for i in 0..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let composed = inc[i][j - i].mul(&inc[j][k - j]).expect("dims match");
                    worst = worst.max(composed.max_abs_diff(&inc[i][k - i]));
                }
            }
        }
        worst
    }

    /// p-variation of one tensor level, computed by DP over the grid.
    pub fn p_variation(&self, p: f64, level: u8) -> Result<f64> {
        validate_p(p)?;
        self.variation_with_exponent(p, level)
    }

    fn variation_with_exponent(&self, r: f64, level: u8) -> Result<f64> {
        if level != 1 && level != 2 {
            return Err(Error::InvalidInput(format!("level must be 1 or 2, got {level}")));
        }
        let inc = self.all_increments();
        let n = self.segments();
        Ok(variation::seminorm(n, r / f64::from(level), |i, j| {
            inc[i][j - i].level_norm(level).expect("level validated")
        }))
    }

    /// max over levels of the p-variation: the distance to the trivial path.
    pub fn variation_norm(&self, p: f64) -> Result<f64> {
        validate_p(p)?;
        let v1 = self.variation_with_exponent(p, 1)?;
        let v2 = self.variation_with_exponent(p, 2)?;
        Ok(v1.max(v2))
    }

    /// ω(t_k) table: Σ_{i=1,2} sup over partitions of [0, t_k] of
    /// Σ ‖X^i‖^{p/i}; the control driving the Hölder reparameterization.
    pub fn control_prefix(&self, p: f64) -> Result<Vec<f64>> {
        validate_p(p)?;
        let inc = self.all_increments();
        let n = self.segments();
        let pre1 = variation::prefix_sums(n, p, |i, j| {
            inc[i][j - i].level_norm(1).expect("level 1")
        });
        let pre2 = variation::prefix_sums(n, p / 2.0, |i, j| {
            inc[i][j - i].level_norm(2).expect("level 2")
        });
        Ok(pre1.iter().zip(&pre2).map(|(a, b)| a + b).collect())
    }

    /// Reparameterize onto the control scale: τ(t_k) = ω(t_k) T / ω(T).
    /// Signatures are unchanged, only time stamps move. Returns the new path
    /// and the time map evaluated on the grid.
    pub fn reparameterize(&self, p: f64) -> Result<(GridRoughPath, Vec<f64>)> {
        let omega = self.control_prefix(p)?;
        let n = self.segments();
        for k in 0..n {
            if omega[k + 1] <= omega[k] {
                return Err(Error::DegenerateControl(k, k + 1));
            }
        }
        let total = omega[n];
        let horizon = self.times[n];
        let tau: Vec<f64> = omega.iter().map(|w| w * horizon / total).collect();
        let path = GridRoughPath::from_signatures(self.dim, tau.clone(), self.sig.clone())?;
        Ok((path, tau))
    }

    /// Worst ratio ‖X^i_{s,t}‖ / [(ω(T)/T)^{i/p} (t-s)^{i/p}] over all grid
    /// pairs and both levels. At most 1 once the path is reparameterized.
    pub fn holder_ratio(&self, p: f64) -> Result<f64> {
        validate_p(p)?;
        let omega = self.control_prefix(p)?;
        let n = self.segments();
        let rate = omega[n] / self.times[n];
        let inc = self.all_increments();
        let mut worst = 0.0f64;
        for i in 0..=n {
            for j in i + 1..=n {
                let span = self.times[j] - self.times[i];
                for level in [1u8, 2u8] {
                    let bound = rate.powf(f64::from(level) / p) * span.powf(f64::from(level) / p);
                    let val = inc[i][j - i].level_norm(level)?;
                    if val > 0.0 {
                        worst = worst.max(val / bound);
                    }
                }
            }
        }
        Ok(worst)
    }

    /// (λX)¹ = λX¹, (λX)² = λ²X², applied to the running signatures.
    pub fn scalar_mul(&self, lambda: f64) -> GridRoughPath {
        let sig = self
            .sig
            .iter()
            .map(|s| {
                let level1 = s.level1.iter().map(|v| lambda * v).collect();
                let level2 = s.level2.iter().map(|v| lambda * lambda * v).collect();
                Tensor2 { dim: s.dim, level1, level2 }
            })
            .collect();
        GridRoughPath { dim: self.dim, times: self.times.clone(), sig }
    }

    /// sup_t of the running level-`level` norm ‖X^level_{0,t}‖.
    pub fn sup_running_norm(&self, level: u8) -> f64 {
        self.sig
            .iter()
            .map(|s| s.level_norm(level).expect("level 1 or 2"))
            .fold(0.0, f64::max)
    }

    /// Sample the path on a new grid inside [0, T]. Times shared with the
    /// current grid keep their exact signatures; new times split the
    /// enclosing interval with linear level 1 and a Chen-consistent level 2
    /// (the non-quadratic remainder is spread linearly in time).
    pub fn resample(&self, times: &[f64]) -> Result<GridRoughPath> {
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("times must be strictly increasing".into()));
        }
        let mut sig = Vec::with_capacity(times.len());
        let mut k = 0usize; // current original interval start
        for &t in times {
            if let Some(pos) = self.times.iter().position(|&u| u == t) {
                sig.push(self.sig[pos].clone());
                k = pos;
                continue;
            }
            if t < self.times[0] || t > *self.times.last().expect("nonempty") {
                return Err(Error::GridMismatch(Some(format!(
                    "time {t} outside the original grid"
                ))));
            }
            while self.times[k + 1] < t {
                k += 1;
            }
            let (t0, t1) = (self.times[k], self.times[k + 1]);
            let theta = (t - t0) / (t1 - t0);
            let inc = self.increment(k, k + 1)?;
            let mut half = outer(&inc.level1, &inc.level1);
            half.iter_mut().for_each(|v| *v *= 0.5);
            // remainder = X² - ½ Δ⊗Δ, spread linearly; quadratic part scales as θ².
            let level1: Vec<f64> = inc.level1.iter().map(|v| theta * v).collect();
            let level2: Vec<f64> = inc
                .level2
                .iter()
                .zip(&half)
                .map(|(full, h)| theta * theta * h + theta * (full - h))
                .collect();
            let partial = Tensor2::new(self.dim, level1, level2)?;
            sig.push(self.sig[k].mul(&partial)?);
        }
        if sig.len() != times.len() || times.first() != Some(&0.0) {
            return Err(Error::GridMismatch(Some("resample target must start at 0".into())));
        }
        GridRoughPath::from_signatures(self.dim, times.to_vec(), sig)
    }

    fn require_same_grid(&self, other: &GridRoughPath) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { left: self.dim, right: other.dim });
        }
        if self.times != other.times {
            return Err(Error::GridMismatch(None));
        }
        Ok(())
    }
}

/// The union of two grids, for aligning paths before a distance computation.
pub fn union_times(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    out.sort_by(|x, y| x.partial_cmp(y).expect("finite times"));
    out.dedup();
    out
}

/// d_p over a shared grid: max over levels of the DP supremum of increment
/// differences.
pub fn dist_p(x: &GridRoughPath, y: &GridRoughPath, p: f64) -> Result<f64> {
    validate_p(p)?;
    dist_with_exponent(x, y, p)
}

/// Same supremum with exponent q > p (used where compactness forces a weaker
/// metric).
pub fn dist_q(x: &GridRoughPath, y: &GridRoughPath, p: f64, q: f64) -> Result<f64> {
    validate_p(p)?;
    validate_q(p, q)?;
    dist_with_exponent(x, y, q)
}

/// Raw exponent-r variation distance without range validation; callers pick
/// the exponent discipline.
pub(crate) fn dist_exponent_unchecked(
    x: &GridRoughPath,
    y: &GridRoughPath,
    r: f64,
) -> Result<f64> {
    dist_with_exponent(x, y, r)
}

fn dist_with_exponent(x: &GridRoughPath, y: &GridRoughPath, r: f64) -> Result<f64> {
    let d1 = dist_level_exponent(x, y, r, 1)?;
    let d2 = dist_level_exponent(x, y, r, 2)?;
    Ok(d1.max(d2))
}

/// The level-`level` term of the variation distance with exponent r.
pub fn dist_level_exponent(
    x: &GridRoughPath,
    y: &GridRoughPath,
    r: f64,
    level: u8,
) -> Result<f64> {
    x.require_same_grid(y)?;
    let xi = x.all_increments();
    let yi = y.all_increments();
    let n = x.segments();
    Ok(variation::seminorm(n, r / f64::from(level), |i, j| {
        diff_level_norm(&xi[i][j - i], &yi[i][j - i], level)
    }))
}

fn diff_level_norm(a: &Tensor2, b: &Tensor2, level: u8) -> f64 {
    let (av, bv) = match level {
        1 => (&a.level1, &b.level1),
        _ => (&a.level2, &b.level2),
    };
    euclidean(&av.iter().zip(bv).map(|(x, y)| x - y).collect::<Vec<_>>())
}

/// The constant C in d_q(X, Y) <= C d_p(X, Y)^{p/q}:
///
/// ```text
/// C = max{ (2 sup_t |X¹-Y¹|)^{(q-p)/q},
///          (2 sup_t |X²-Y²| (1 + 2(sup_t|X¹| + sup_t|Y¹|)))^{(q-p)/q} }
/// ```
///
/// with the suprema taken over running values from 0.
pub fn q_bound_constant(x: &GridRoughPath, y: &GridRoughPath, p: f64, q: f64) -> Result<f64> {
    validate_p(p)?;
    validate_q(p, q)?;
    x.require_same_grid(y)?;
    let mut sup1 = 0.0f64;
    let mut sup2 = 0.0f64;
    for (sx, sy) in x.sig.iter().zip(&y.sig) {
        sup1 = sup1.max(diff_level_norm(sx, sy, 1));
        sup2 = sup2.max(diff_level_norm(sx, sy, 2));
    }
    let supx1 = x.sup_running_norm(1);
    let supy1 = y.sup_running_norm(1);
    let e = (q - p) / q;
    let first = (2.0 * sup1).powf(e);
    let second = (2.0 * sup2 * (1.0 + 2.0 * (supx1 + supy1))).powf(e);
    Ok(first.max(second))
}

/// Additive second-level perturbation φ, stored through running values
/// φ_{0,t_k}; interval values φ_{s,t} = φ_{0,t} - φ_{0,s} are additive by
/// representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phi {
    dim: usize,
    /// values[k] = φ_{0,t_k}, row-major d×d; values[0] = 0.
    values: Vec<Vec<f64>>,
}

impl Phi {
    pub fn zero(dim: usize, grid_len: usize) -> Self {
        Phi { dim, values: vec![vec![0.0; dim * dim]; grid_len] }
    }

    pub fn new(dim: usize, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("phi needs at least one grid point".into()));
        }
        if values.iter().any(|v| v.len() != dim * dim) {
            return Err(Error::InvalidInput("phi entries must be d×d".into()));
        }
        if values[0].iter().any(|v| *v != 0.0) {
            return Err(Error::InvalidInput("phi must vanish at t = 0".into()));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("phi entry".into()));
        }
        Ok(Phi { dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid_len(&self) -> usize {
        self.values.len()
    }

    pub fn running(&self, k: usize) -> &[f64] {
        &self.values[k]
    }

    pub fn interval(&self, i: usize, j: usize) -> Vec<f64> {
        self.values[j]
            .iter()
            .zip(&self.values[i])
            .map(|(a, b)| a - b)
            .collect()
    }

    pub fn add(&self, other: &Phi) -> Result<Phi> {
        if self.dim != other.dim || self.values.len() != other.values.len() {
            return Err(Error::GridMismatch(Some("phi grids differ".into())));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Phi { dim: self.dim, values })
    }

    pub fn scale(&self, lambda: f64) -> Phi {
        let values = self
            .values
            .iter()
            .map(|v| v.iter().map(|x| lambda * x).collect())
            .collect();
        Phi { dim: self.dim, values }
    }

    /// (p/2)-variation of the interval values.
    pub fn half_p_variation(&self, p: f64) -> Result<f64> {
        validate_p(p)?;
        let n = self.values.len() - 1;
        Ok(variation::seminorm(n, p / 2.0, |i, j| euclidean(&self.interval(i, j))))
    }
}

/// A rough path over R^d ⊕ R^d carrying the block decomposition of its
/// second level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRoughPath {
    inner: GridRoughPath,
    half: usize,
}

impl PairRoughPath {
    pub fn new(inner: GridRoughPath) -> Result<Self> {
        if !inner.dim().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "pair path needs even dimension, got {}",
                inner.dim()
            )));
        }
        let half = inner.dim() / 2;
        Ok(PairRoughPath { inner, half })
    }

    /// Assemble from per-block running values. Every slice holds one entry
    /// per grid point, zero at index 0; `cross12`, `cross21` and `second2`
    /// are row-major d×d.
    pub fn from_blocks(
        base: &GridRoughPath,
        dir_running: &[Vec<f64>],
        cross12_running: &[Vec<f64>],
        cross21_running: &[Vec<f64>],
        second_level2_running: &[Vec<f64>],
    ) -> Result<Self> {
        let d = base.dim();
        let len = base.times().len();
        for (name, rows, width) in [
            ("direction", dir_running, d),
            ("cross12", cross12_running, d * d),
            ("cross21", cross21_running, d * d),
            ("second level 2", second_level2_running, d * d),
        ] {
            if rows.len() != len {
                return Err(Error::GridMismatch(Some(format!("{name} grid length"))));
            }
            if rows.iter().any(|r| r.len() != width) {
                return Err(Error::InvalidInput(format!("{name} rows must have width {width}")));
            }
        }
        let big = 2 * d;
        let mut sig = Vec::with_capacity(len);
        for k in 0..len {
            let mut level1 = vec![0.0; big];
            level1[..d].copy_from_slice(&base.signature(k).level1);
            level1[d..].copy_from_slice(&dir_running[k]);
            let mut level2 = vec![0.0; big * big];
            for i in 0..d {
                for j in 0..d {
                    level2[i * big + j] = base.signature(k).l2(i, j);
                    level2[i * big + (d + j)] = cross12_running[k][i * d + j];
                    level2[(d + i) * big + j] = cross21_running[k][i * d + j];
                    level2[(d + i) * big + (d + j)] = second_level2_running[k][i * d + j];
                }
            }
            sig.push(Tensor2::new(big, level1, level2)?);
        }
        PairRoughPath::new(GridRoughPath::from_signatures(
            big,
            base.times().to_vec(),
            sig,
        )?)
    }

    pub fn as_path(&self) -> &GridRoughPath {
        &self.inner
    }

    pub fn half_dim(&self) -> usize {
        self.half
    }

    pub fn times(&self) -> &[f64] {
        self.inner.times()
    }

    fn project(&self, offset: usize) -> GridRoughPath {
        let d = self.half;
        let big = 2 * d;
        let sig = self
            .inner
            .sig
            .iter()
            .map(|s| {
                let level1 = s.level1[offset..offset + d].to_vec();
                let mut level2 = vec![0.0; d * d];
                for i in 0..d {
                    for j in 0..d {
                        level2[i * d + j] = s.level2[(offset + i) * big + (offset + j)];
                    }
                }
                Tensor2 { dim: d, level1, level2 }
            })
            .collect();
        GridRoughPath {
            dim: d,
            times: self.inner.times.clone(),
            sig,
        }
    }

    /// First projection π₁(Z): a rough path over the first d coordinates.
    pub fn pi1(&self) -> GridRoughPath {
        self.project(0)
    }

    /// Second projection π₂(Z).
    pub fn pi2(&self) -> GridRoughPath {
        self.project(self.half)
    }

    fn cross_block(&self, k: usize, row_offset: usize, col_offset: usize) -> Vec<f64> {
        let d = self.half;
        let big = 2 * d;
        let s = &self.inner.sig[k];
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = s.level2[(row_offset + i) * big + (col_offset + j)];
            }
        }
        out
    }

    /// Running value of the π₁,₂ block at grid index k.
    pub fn cross12_running(&self, k: usize) -> Vec<f64> {
        self.cross_block(k, 0, self.half)
    }

    /// Running value of the π₂,₁ block at grid index k.
    pub fn cross21_running(&self, k: usize) -> Vec<f64> {
        self.cross_block(k, self.half, 0)
    }

    /// Interval value of one off-diagonal block of Z_{t_i, t_j}.
    pub fn cross_interval(&self, i: usize, j: usize, upper: bool) -> Result<Vec<f64>> {
        let inc = self.inner.increment(i, j)?;
        let d = self.half;
        let big = 2 * d;
        let (ro, co) = if upper { (0, d) } else { (d, 0) };
        let mut out = vec![0.0; d * d];
        for a in 0..d {
            for b in 0..d {
                out[a * d + b] = inc.level2[(ro + a) * big + (co + b)];
            }
        }
        Ok(out)
    }

    /// V_Z(ε): the second component scaled in place, with blocks
    /// (π₁¹, ε π₂¹; π₁², ε π₁,₂, ε π₂,₁, ε² π₂²). Again a pair rough path.
    pub fn scale_second(&self, eps: f64) -> PairRoughPath {
        let d = self.half;
        let big = 2 * d;
        let sig = self
            .inner
            .sig
            .iter()
            .map(|s| {
                let mut level1 = s.level1.clone();
                for v in level1[d..].iter_mut() {
                    *v *= eps;
                }
                let mut level2 = s.level2.clone();
                for i in 0..big {
                    for j in 0..big {
                        let weight = match (i >= d, j >= d) {
                            (false, false) => 1.0,
                            (true, true) => eps * eps,
                            _ => eps,
                        };
                        level2[i * big + j] *= weight;
                    }
                }
                Tensor2 { dim: big, level1, level2 }
            })
            .collect();
        PairRoughPath {
            inner: GridRoughPath { dim: big, times: self.inner.times.clone(), sig },
            half: d,
        }
    }

    /// The rough-path sum K with K¹ = π₁¹ + π₂¹ and
    /// K² = π₁² + π₂² + π₁,₂ + π₂,₁, assembled from running values.
    pub fn rough_sum(&self) -> GridRoughPath {
        let d = self.half;
        let big = 2 * d;
        let sig = self
            .inner
            .sig
            .iter()
            .map(|s| {
                let level1: Vec<f64> =
                    (0..d).map(|i| s.level1[i] + s.level1[d + i]).collect();
                let mut level2 = vec![0.0; d * d];
                for i in 0..d {
                    for j in 0..d {
                        level2[i * d + j] = s.level2[i * big + j]
                            + s.level2[(d + i) * big + (d + j)]
                            + s.level2[i * big + (d + j)]
                            + s.level2[(d + i) * big + j];
                    }
                }
                Tensor2 { dim: d, level1, level2 }
            })
            .collect();
        GridRoughPath {
            dim: d,
            times: self.inner.times.clone(),
            sig,
        }
    }
}
