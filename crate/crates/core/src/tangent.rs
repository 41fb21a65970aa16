//! Tangent representation [Z, φ] at a base rough path X.
//!
//! A representative is a pair path Z over R^d ⊕ R^d with π₁(Z) pinned to X,
//! plus an additive second-level perturbation φ. Two representatives are
//! equivalent when their variational curves
//!
//! ```text
//! V¹(ε) = X¹ + ε π₂(Z)¹
//! V²(ε) = X² + ε [π₁,₂(Z) + π₂,₁(Z) + φ] + ε² π₂(Z)²
//! ```
//!
//! have the same derivative at ε = 0, i.e. equal direction increments and
//! equal combined second-level increments. The ε² block never enters the
//! class.

use crate::error::{Error, Result};
use crate::roughpath::{validate_p, GridRoughPath, PairRoughPath, Phi};
use crate::tensor::{euclidean, Tensor2};
use crate::variation;

#[derive(Debug, Clone)]
pub struct TangentRep {
    base: GridRoughPath,
    z: PairRoughPath,
    phi: Phi,
}

impl TangentRep {
    pub fn new(base: GridRoughPath, z: PairRoughPath, phi: Phi) -> Result<Self> {
        if z.half_dim() != base.dim() {
            return Err(Error::DimMismatch { left: z.half_dim(), right: base.dim() });
        }
        if z.times() != base.times() {
            return Err(Error::GridMismatch(Some("Z grid differs from base".into())));
        }
        if phi.dim() != base.dim() || phi.grid_len() != base.times().len() {
            return Err(Error::GridMismatch(Some("phi grid differs from base".into())));
        }
        let pi1 = z.pi1();
        for (a, b) in pi1.signatures().iter().zip(base.signatures()) {
            if a.max_abs_diff(b) != 0.0 {
                return Err(Error::Verification("π₁(Z) must equal the base path exactly".into()));
            }
        }
        Ok(TangentRep { base, z, phi })
    }

    pub fn base(&self) -> &GridRoughPath {
        &self.base
    }

    pub fn z(&self) -> &PairRoughPath {
        &self.z
    }

    pub fn phi(&self) -> &Phi {
        &self.phi
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    fn grid_len(&self) -> usize {
        self.base.times().len()
    }

    /// Running value of the direction π₂(Z)¹ at grid index k.
    pub fn direction_running(&self, k: usize) -> Vec<f64> {
        let d = self.dim();
        self.z.as_path().signature(k).level1[d..].to_vec()
    }

    /// Running value of π₁,₂(Z) + π₂,₁(Z) + φ at grid index k.
    pub fn combined_running(&self, k: usize) -> Vec<f64> {
        let c12 = self.z.cross12_running(k);
        let c21 = self.z.cross21_running(k);
        let phi = self.phi.running(k);
        c12.iter()
            .zip(&c21)
            .zip(phi)
            .map(|((a, b), c)| a + b + c)
            .collect()
    }

    /// Direction increment π₂(Z)¹_{t_i, t_j}.
    pub fn direction_interval(&self, i: usize, j: usize) -> Vec<f64> {
        let a = self.direction_running(i);
        let b = self.direction_running(j);
        b.iter().zip(&a).map(|(x, y)| x - y).collect()
    }

    /// Interval value of π₁,₂(Z) + π₂,₁(Z) + φ, the second-level derivative
    /// data of the class. Expanded through running values:
    ///
    /// ```text
    /// B_{s,t} = B_{0,t} - B_{0,s} - X¹_{0,s} ⊗ dir_{s,t} - dir_{0,s} ⊗ X¹_{s,t}
    /// ```
    pub fn combined_interval(&self, i: usize, j: usize) -> Result<Vec<f64>> {
        let d = self.dim();
        if i > j || j >= self.grid_len() {
            return Err(Error::IndexOutOfRange { index: i.max(j), len: self.grid_len() });
        }
        let bt = self.combined_running(j);
        let bs = self.combined_running(i);
        let xs = &self.base.signature(i).level1;
        let xt = &self.base.signature(j).level1;
        let ds = self.direction_running(i);
        let dt = self.direction_running(j);
        let mut out = vec![0.0; d * d];
        for a in 0..d {
            for b in 0..d {
                out[a * d + b] = bt[a * d + b] - bs[a * d + b]
                    - xs[a] * (dt[b] - ds[b])
                    - ds[a] * (xt[b] - xs[b]);
            }
        }
        Ok(out)
    }

    /// The variational curve V_{(Z,φ)}(ε), assembled from running values so
    /// that Chen's identity holds by construction.
    pub fn variational_curve(&self, eps: f64) -> GridRoughPath {
        let d = self.dim();
        let len = self.grid_len();
        let mut sig = Vec::with_capacity(len);
        for k in 0..len {
            let base_sig = self.base.signature(k);
            let dir = self.direction_running(k);
            let combined = self.combined_running(k);
            let pi2_l2 = &self.z.pi2().signature(k).level2.clone();
            let level1: Vec<f64> = base_sig
                .level1
                .iter()
                .zip(&dir)
                .map(|(x, y)| x + eps * y)
                .collect();
            let level2: Vec<f64> = (0..d * d)
                .map(|idx| base_sig.level2[idx] + eps * combined[idx] + eps * eps * pi2_l2[idx])
                .collect();
            sig.push(Tensor2 { dim: d, level1, level2 });
        }
        GridRoughPath::from_signatures(d, self.base.times().to_vec(), sig)
            .expect("base grid is valid")
    }
}

/// Largest sup norm of the data compared by `equivalent`, used to scale the
/// absolute tolerance.
fn comparison_scale(a: &TangentRep, b: &TangentRep) -> f64 {
    let mut scale = 1.0f64;
    for rep in [a, b] {
        for k in 0..rep.grid_len() {
            scale = scale.max(euclidean(&rep.direction_running(k)));
            scale = scale.max(euclidean(&rep.combined_running(k)));
        }
    }
    scale
}

/// True iff both representatives define the same tangent class: equal
/// direction increments and equal combined second-level increments at every
/// grid pair, within `tol` (scaled by the data's sup norm).
pub fn equivalent(a: &TangentRep, b: &TangentRep, tol: f64) -> Result<bool> {
    if a.base.signatures().len() != b.base.signatures().len()
        || a.base.times() != b.base.times()
        || a.dim() != b.dim()
    {
        return Err(Error::GridMismatch(Some("tangent reps on different grids".into())));
    }
    for (x, y) in a.base.signatures().iter().zip(b.base.signatures()) {
        if x.max_abs_diff(y) != 0.0 {
            return Err(Error::Verification("equivalence needs a common base path".into()));
        }
    }
    let scale = comparison_scale(a, b);
    let n = a.grid_len() - 1;
    for i in 0..=n {
        for j in i + 1..=n {
            let da = a.direction_interval(i, j);
            let db = b.direction_interval(i, j);
            if max_abs_delta(&da, &db) > tol * scale {
                return Ok(false);
            }
            let ca = a.combined_interval(i, j)?;
            let cb = b.combined_interval(i, j)?;
            if max_abs_delta(&ca, &cb) > tol * scale {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn max_abs_delta(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Running level-1 and level-2 derivative values, one row per grid point.
pub type CurveDerivative = (Vec<Vec<f64>>, Vec<Vec<f64>>);

/// Central-difference derivative of a curve of rough paths at ε = 0.
///
/// Samples must contain ε = 0 and be symmetric around it; the tightest ±h
/// pair is used, which is exact for curves quadratic in ε. Returns running
/// level-1 and level-2 derivative values per grid point.
pub fn numeric_curve_derivative(samples: &[(f64, GridRoughPath)]) -> Result<CurveDerivative> {
    if samples.len() < 3 {
        return Err(Error::InvalidInput("need at least 3 samples".into()));
    }
    let center = samples
        .iter()
        .find(|(e, _)| *e == 0.0)
        .ok_or_else(|| Error::InvalidInput("stencil must contain ε = 0".into()))?;
    for (e, _) in samples {
        if !samples.iter().any(|(f, _)| *f == -*e) {
            return Err(Error::InvalidInput(format!("stencil not symmetric: no mate for ε = {e}")));
        }
    }
    let mut h = f64::INFINITY;
    for (e, _) in samples {
        if *e > 0.0 && *e < h {
            h = *e;
        }
    }
    if !h.is_finite() {
        return Err(Error::InvalidInput("stencil needs a positive sample".into()));
    }
    let plus = &samples.iter().find(|(e, _)| *e == h).expect("found above").1;
    let minus = &samples
        .iter()
        .find(|(e, _)| *e == -h)
        .expect("symmetry checked")
        .1;
    for path in [plus, minus] {
        if path.times() != center.1.times() || path.dim() != center.1.dim() {
            return Err(Error::GridMismatch(Some("curve samples on different grids".into())));
        }
    }
    let len = center.1.times().len();
    let mut d1 = Vec::with_capacity(len);
    let mut d2 = Vec::with_capacity(len);
    for k in 0..len {
        let sp = plus.signature(k);
        let sm = minus.signature(k);
        d1.push(
            sp.level1
                .iter()
                .zip(&sm.level1)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect(),
        );
        d2.push(
            sp.level2
                .iter()
                .zip(&sm.level2)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect(),
        );
    }
    Ok((d1, d2))
}

/// Build the unique tangent class of a differentiable curve through X from
/// its derivative data and a chosen extension W of (X¹, d1):
///
/// ```text
/// φ = d2 - π₁,₂(W) - π₂,₁(W),   Z² = (X², π₁,₂(W); π₂,₁(W), π₂(W)²)
/// ```
///
/// `d1`/`d2` are running derivative values per grid point.
pub fn tangent_from_curve(
    x: &GridRoughPath,
    d1: &[Vec<f64>],
    d2: &[Vec<f64>],
    w: &PairRoughPath,
) -> Result<TangentRep> {
    let d = x.dim();
    let len = x.times().len();
    if w.half_dim() != d || w.times() != x.times() {
        return Err(Error::GridMismatch(Some("extension W grid differs from X".into())));
    }
    if d1.len() != len || d2.len() != len {
        return Err(Error::GridMismatch(Some("derivative data grid differs from X".into())));
    }
    let scale = 1.0 + x.sup_running_norm(1).max(w.as_path().sup_running_norm(1));
    let w1 = w.pi1();
    let w2 = w.pi2();
    for k in 0..len {
        if max_abs_delta(&w1.signature(k).level1, &x.signature(k).level1) > 1e-12 * scale {
            return Err(Error::Verification("π₁(W)¹ must match X¹".into()));
        }
        if max_abs_delta(&w2.signature(k).level1, &d1[k]) > 1e-12 * scale {
            return Err(Error::Verification(
                "π₂(W)¹ must match the level-1 derivative d1 (inconsistent d2 / W inputs)".into(),
            ));
        }
    }
    let mut phi_run = Vec::with_capacity(len);
    let mut c12 = Vec::with_capacity(len);
    let mut c21 = Vec::with_capacity(len);
    let mut w2_l2 = Vec::with_capacity(len);
    for k in 0..len {
        let a = w.cross12_running(k);
        let b = w.cross21_running(k);
        phi_run.push(
            d2[k]
                .iter()
                .zip(&a)
                .zip(&b)
                .map(|((v, x), y)| v - x - y)
                .collect::<Vec<f64>>(),
        );
        c12.push(a);
        c21.push(b);
        w2_l2.push(w2.signature(k).level2.clone());
    }
    let phi = Phi::new(d, phi_run)?;
    let z = PairRoughPath::from_blocks(x, d1, &c12, &c21, &w2_l2)?;
    TangentRep::new(x.clone(), z, phi)
}

/// Class addition: directions and cross blocks add, φ adds, and the new
/// ε²-block comes from the supplied extension W of the summed direction.
pub fn tangent_add(a: &TangentRep, b: &TangentRep, w: &PairRoughPath) -> Result<TangentRep> {
    for (x, y) in a.base.signatures().iter().zip(b.base.signatures()) {
        if x.max_abs_diff(y) != 0.0 {
            return Err(Error::Verification("tangent_add needs a common base path".into()));
        }
    }
    let d = a.dim();
    let len = a.grid_len();
    if w.half_dim() != d || w.times() != a.base.times() {
        return Err(Error::GridMismatch(Some("extension W grid differs from base".into())));
    }
    let w2 = w.pi2();
    let scale = 1.0 + comparison_scale(a, b);
    let mut dir = Vec::with_capacity(len);
    let mut c12 = Vec::with_capacity(len);
    let mut c21 = Vec::with_capacity(len);
    let mut second = Vec::with_capacity(len);
    for k in 0..len {
        let da = a.direction_running(k);
        let db = b.direction_running(k);
        let sum: Vec<f64> = da.iter().zip(&db).map(|(x, y)| x + y).collect();
        if max_abs_delta(&w2.signature(k).level1, &sum) > 1e-12 * scale {
            return Err(Error::Verification(
                "W's level-1 second block must equal the summed directions".into(),
            ));
        }
        dir.push(sum);
        c12.push(
            a.z.cross12_running(k)
                .iter()
                .zip(&b.z.cross12_running(k))
                .map(|(x, y)| x + y)
                .collect(),
        );
        c21.push(
            a.z.cross21_running(k)
                .iter()
                .zip(&b.z.cross21_running(k))
                .map(|(x, y)| x + y)
                .collect(),
        );
        second.push(w2.signature(k).level2.clone());
    }
    let z = PairRoughPath::from_blocks(&a.base, &dir, &c12, &c21, &second)?;
    let phi = a.phi.add(&b.phi)?;
    TangentRep::new(a.base.clone(), z, phi)
}

/// Class scaling: (X¹, λπ₂¹; X², λπ₁,₂, λπ₂,₁, λ²π₂²) with φ ↦ λφ.
pub fn tangent_scale(lambda: f64, rep: &TangentRep) -> TangentRep {
    let len = rep.grid_len();
    let mut dir = Vec::with_capacity(len);
    let mut c12 = Vec::with_capacity(len);
    let mut c21 = Vec::with_capacity(len);
    let mut second = Vec::with_capacity(len);
    let pi2 = rep.z.pi2();
    for k in 0..len {
        dir.push(rep.direction_running(k).iter().map(|v| lambda * v).collect());
        c12.push(rep.z.cross12_running(k).iter().map(|v| lambda * v).collect());
        c21.push(rep.z.cross21_running(k).iter().map(|v| lambda * v).collect());
        second.push(
            pi2.signature(k)
                .level2
                .iter()
                .map(|v| lambda * lambda * v)
                .collect(),
        );
    }
    let z = PairRoughPath::from_blocks(&rep.base, &dir, &c12, &c21, &second)
        .expect("scaled blocks keep the base grid");
    TangentRep::new(rep.base.clone(), z, rep.phi.scale(lambda))
        .expect("scaling preserves validity")
}

/// The tangent metric d̃_p: the maximum of the base distance, the
/// p-variation supremum of direction differences, and the (p/2)-variation
/// supremum of combined second-level differences.
pub fn tangent_dist(a: &TangentRep, b: &TangentRep, p: f64) -> Result<f64> {
    validate_p(p)?;
    tangent_dist_exponent(a, b, p)
}

/// d̃ with exponent q > p in place of p throughout.
pub fn tangent_dist_q(a: &TangentRep, b: &TangentRep, p: f64, q: f64) -> Result<f64> {
    validate_p(p)?;
    crate::roughpath::validate_q(p, q)?;
    tangent_dist_exponent(a, b, q)
}

fn tangent_dist_exponent(a: &TangentRep, b: &TangentRep, r: f64) -> Result<f64> {
    if a.base.times() != b.base.times() || a.dim() != b.dim() {
        return Err(Error::GridMismatch(Some("tangent reps on different grids".into())));
    }
    let base_term = crate::roughpath::dist_exponent_unchecked(&a.base, &b.base, r)?;
    let n = a.grid_len() - 1;
    let dir_term = variation::seminorm(n, r, |i, j| {
        max_norm_of_diff(&a.direction_interval(i, j), &b.direction_interval(i, j))
    });
    let ca: Vec<Vec<Vec<f64>>> = interval_table(a)?;
    let cb: Vec<Vec<Vec<f64>>> = interval_table(b)?;
    let combined_term = variation::seminorm(n, r / 2.0, |i, j| {
        max_norm_of_diff(&ca[i][j - i], &cb[i][j - i])
    });
    Ok(base_term.max(dir_term).max(combined_term))
}

/// d̃_p of a representative against the zero tangent at the trivial path.
pub fn tangent_norm(rep: &TangentRep, p: f64) -> Result<f64> {
    validate_p(p)?;
    let (dir_term, combined_term) = field_seminorms(rep, p)?;
    Ok(rep.base.variation_norm(p)?.max(dir_term).max(combined_term))
}

/// The variation seminorms of the class data alone: the direction's
/// r-variation and the combined second level's (r/2)-variation. This is
/// d̃ against the zero tangent at the same base, i.e. the size of the field
/// with the base contribution dropped.
pub fn field_seminorms(rep: &TangentRep, r: f64) -> Result<(f64, f64)> {
    let n = rep.grid_len() - 1;
    let dir_term = variation::seminorm(n, r, |i, j| euclidean(&rep.direction_interval(i, j)));
    let table = interval_table(rep)?;
    let combined_term = variation::seminorm(n, r / 2.0, |i, j| euclidean(&table[i][j - i]));
    Ok((dir_term, combined_term))
}

/// The direction and combined terms of d̃ between two representatives at a
/// common base (the base term dropped), with exponent r.
pub fn field_dist_exponent(a: &TangentRep, b: &TangentRep, r: f64) -> Result<f64> {
    if a.base.times() != b.base.times() || a.dim() != b.dim() {
        return Err(Error::GridMismatch(Some("tangent reps on different grids".into())));
    }
    let n = a.grid_len() - 1;
    let dir_term = variation::seminorm(n, r, |i, j| {
        max_norm_of_diff(&a.direction_interval(i, j), &b.direction_interval(i, j))
    });
    let ca = interval_table(a)?;
    let cb = interval_table(b)?;
    let combined_term = variation::seminorm(n, r / 2.0, |i, j| {
        max_norm_of_diff(&ca[i][j - i], &cb[i][j - i])
    });
    Ok(dir_term.max(combined_term))
}

fn interval_table(rep: &TangentRep) -> Result<Vec<Vec<Vec<f64>>>> {
    let n = rep.grid_len() - 1;
    (0..=n)
        .map(|i| (i..=n).map(|j| rep.combined_interval(i, j)).collect())
        .collect()
}

fn max_norm_of_diff(a: &[f64], b: &[f64]) -> f64 {
    euclidean(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
}

/// Extension of (X¹, y) with cross blocks given by segment-exact Young
/// integrals ∫ X¹ ⊗ dy and ∫ y ⊗ dX¹ against the piecewise-linear
/// interpolants, and π₂(W) the canonical lift of y. Valid whenever the
/// grid data are read as piecewise-linear paths.
pub fn young_pair_extension(x: &GridRoughPath, y_running: &[Vec<f64>]) -> Result<PairRoughPath> {
    let d = x.dim();
    let len = x.times().len();
    if y_running.len() != len || y_running.iter().any(|r| r.len() != d) {
        return Err(Error::GridMismatch(Some("direction grid differs from X".into())));
    }
    let mut c12 = vec![vec![0.0; d * d]];
    let mut c21 = vec![vec![0.0; d * d]];
    let mut lift2 = vec![vec![0.0; d * d]];
    for k in 1..len {
        let x0 = &x.signature(k - 1).level1;
        let x1 = &x.signature(k).level1;
        let y0 = &y_running[k - 1];
        let y1 = &y_running[k];
        let dx: Vec<f64> = x1.iter().zip(x0).map(|(a, b)| a - b).collect();
        let dy: Vec<f64> = y1.iter().zip(y0).map(|(a, b)| a - b).collect();
        let mut row12 = c12[k - 1].clone();
        let mut row21 = c21[k - 1].clone();
        let mut rowl2 = lift2[k - 1].clone();
        for i in 0..d {
            for j in 0..d {
                // both-linear segment: ∫ f ⊗ dg = f(start) ⊗ Δg + ½ Δf ⊗ Δg
                row12[i * d + j] += x0[i] * dy[j] + 0.5 * dx[i] * dy[j];
                row21[i * d + j] += y0[i] * dx[j] + 0.5 * dy[i] * dx[j];
                rowl2[i * d + j] += y0[i] * dy[j] + 0.5 * dy[i] * dy[j];
            }
        }
        c12.push(row12);
        c21.push(row21);
        lift2.push(rowl2);
    }
    PairRoughPath::from_blocks(x, y_running, &c12, &c21, &lift2)
}

/// Extension with vanishing running cross blocks and π₂(W)² = ½ y ⊗ y.
/// Multiplicative by the running-value representation; used to exhibit a
/// second, inequivalent-in-blocks representative of the same class data in
/// tests.
pub fn zero_cross_extension(x: &GridRoughPath, y_running: &[Vec<f64>]) -> Result<PairRoughPath> {
    let d = x.dim();
    let len = x.times().len();
    if y_running.len() != len || y_running.iter().any(|r| r.len() != d) {
        return Err(Error::GridMismatch(Some("direction grid differs from X".into())));
    }
    let zeros = vec![vec![0.0; d * d]; len];
    let half_sq: Vec<Vec<f64>> = y_running
        .iter()
        .map(|y| {
            let mut m = vec![0.0; d * d];
            for i in 0..d {
                for j in 0..d {
                    m[i * d + j] = 0.5 * y[i] * y[j];
                }
            }
            m
        })
        .collect();
    PairRoughPath::from_blocks(x, y_running, &zeros, &zeros, &half_sq)
}
