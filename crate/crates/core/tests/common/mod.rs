#![allow(dead_code, clippy::needless_range_loop)]

//! Shared oracles and generators for the integration suites.
//!
//! Every oracle takes an independent route from the implementation it
//! checks: iterated integrals by fine-mesh Riemann/trapezoid sums over
//! subdivided segments, variation suprema by exhaustive enumeration over
//! sub-partitions.

use rand::Rng;

use roughflow::roughpath::GridRoughPath;

/// Left-Riemann double iterated integral ∫∫_{0<u1<u2<T} dx ⊗ dx of the
/// piecewise-linear path through `points`, subdividing every segment to
/// pieces of length <= `mesh`. The antisymmetric part is exact for
/// polygonal paths at any mesh.
pub fn riemann_level2(times: &[f64], points: &[Vec<f64>], mesh: f64) -> Vec<f64> {
    let d = points[0].len();
    let mut acc = vec![0.0; d * d];
    let mut running = vec![0.0; d]; // x(u) - x(0)
    for k in 0..times.len() - 1 {
        let span = times[k + 1] - times[k];
        let pieces = (span / mesh).ceil().max(1.0) as usize;
        let step: Vec<f64> = (0..d)
            .map(|i| (points[k + 1][i] - points[k][i]) / pieces as f64)
            .collect();
        for _ in 0..pieces {
            for i in 0..d {
                for j in 0..d {
                    acc[i * d + j] += running[i] * step[j];
                }
            }
            for i in 0..d {
                running[i] += step[i];
            }
        }
    }
    acc
}

/// Antisymmetric part ½(M - Mᵀ) of a row-major square matrix.
pub fn antisym(matrix: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = 0.5 * (matrix[i * d + j] - matrix[j * d + i]);
        }
    }
    out
}

/// Running cross integrals ∫_0^{t_k} (f - f(0)) ⊗ dg for piecewise-linear
/// f, g sampled on a common grid, via trapezoid sums over `substeps`
/// subdivisions per segment (exact for linear pieces up to roundoff).
pub fn trapezoid_cross_running(
    f: &[Vec<f64>],
    g: &[Vec<f64>],
    substeps: usize,
) -> Vec<Vec<f64>> {
    let d = f[0].len();
    let len = f.len();
    let mut out = Vec::with_capacity(len);
    out.push(vec![0.0; d * d]);
    for k in 1..len {
        let mut acc = out[k - 1].clone();
        for s in 0..substeps {
            let a = s as f64 / substeps as f64;
            let b = (s + 1) as f64 / substeps as f64;
            for i in 0..d {
                let f_lo = f[k - 1][i] + a * (f[k][i] - f[k - 1][i]) - f[0][i];
                let f_hi = f[k - 1][i] + b * (f[k][i] - f[k - 1][i]) - f[0][i];
                let f_mid = 0.5 * (f_lo + f_hi);
                for j in 0..d {
                    let dg = (g[k][j] - g[k - 1][j]) / substeps as f64;
                    acc[i * d + j] += f_mid * dg;
                }
            }
        }
        out.push(acc);
    }
    out
}

/// Exhaustive supremum over all sub-partitions of {0..n} of
/// Σ norm(i_l, i_{l+1})^exponent.
pub fn brute_force_sup(n: usize, exponent: f64, norm: impl Fn(usize, usize) -> f64) -> f64 {
    assert!((1..=16).contains(&n), "exhaustive enumeration needs a small grid");
    let interior = n - 1;
    let mut best = 0.0f64;
    for mask in 0..(1usize << interior) {
        let mut prev = 0usize;
        let mut sum = 0.0;
        for b in 0..interior {
            if mask & (1 << b) != 0 {
                sum += norm(prev, b + 1).powf(exponent);
                prev = b + 1;
            }
        }
        sum += norm(prev, n).powf(exponent);
        best = best.max(sum);
    }
    best
}

/// Random piecewise-linear path: `segs` increments uniform in
/// [-scale, scale] per coordinate, on the uniform grid over [0, 1].
pub fn random_pl_path(rng: &mut impl Rng, d: usize, segs: usize, scale: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let times: Vec<f64> = (0..=segs).map(|k| k as f64 / segs as f64).collect();
    let mut points = vec![vec![0.0; d]];
    for k in 1..=segs {
        let prev = points[k - 1].clone();
        points.push(
            (0..d)
                .map(|i| prev[i] + rng.gen_range(-scale..scale))
                .collect(),
        );
    }
    (times, points)
}

pub fn random_lift(rng: &mut impl Rng, d: usize, segs: usize, scale: f64) -> GridRoughPath {
    let (times, points) = random_pl_path(rng, d, segs, scale);
    GridRoughPath::canonical_lift(&times, &points).expect("generated path is valid")
}
