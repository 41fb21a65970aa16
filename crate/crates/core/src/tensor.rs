//! Truncated degree-2 tensor algebra over R^m.
//!
//! Elements live in 1 ⊕ V ⊕ V⊗V with the scalar slot pinned to 1, so every
//! element is a group element under the truncated tensor product
//!
//! ```text
//! (a ⊗ b)¹ = a¹ + b¹
//! (a ⊗ b)² = a² + b² + a¹ ⊗ b¹
//! ```
//!
//! Norms are Euclidean at level 1 and Frobenius at level 2, which makes
//! ‖u ⊗ v‖ = ‖u‖·‖v‖ hold exactly for outer products.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of T²(R^m) with unit scalar slot.
///
/// `level2` is stored row-major; the row index is the first tensor slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor2 {
    pub dim: usize,
    pub level1: Vec<f64>,
    pub level2: Vec<f64>,
}

impl Tensor2 {
    /// The group identity (1, 0, 0).
    pub fn identity(dim: usize) -> Self {
        Tensor2 {
            dim,
            level1: vec![0.0; dim],
            level2: vec![0.0; dim * dim],
        }
    }

    pub fn new(dim: usize, level1: Vec<f64>, level2: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dim must be >= 1".into()));
        }
        if level1.len() != dim || level2.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "component lengths {}/{} do not match dim {}",
                level1.len(),
                level2.len(),
                dim
            )));
        }
        let t = Tensor2 { dim, level1, level2 };
        t.check_finite()?;
        Ok(t)
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.level1.iter().chain(self.level2.iter()).all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("tensor component".into()))
        }
    }

    #[inline]
    pub fn l2(&self, i: usize, j: usize) -> f64 {
        self.level2[i * self.dim + j]
    }

    /// Truncated tensor product.
    pub fn mul(&self, other: &Tensor2) -> Result<Tensor2> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { left: self.dim, right: other.dim });
        }
        let dim = self.dim;
        let mut level1 = vec![0.0; dim];
        for i in 0..dim {
            level1[i] = self.level1[i] + other.level1[i];
        }
        let mut level2 = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                level2[i * dim + j] = self.level2[i * dim + j]
                    + other.level2[i * dim + j]
                    + self.level1[i] * other.level1[j];
            }
        }
        Ok(Tensor2 { dim, level1, level2 })
    }

    /// Group inverse: (1, -a¹, -a² + a¹ ⊗ a¹).
    pub fn inv(&self) -> Tensor2 {
        let dim = self.dim;
        let level1: Vec<f64> = self.level1.iter().map(|v| -v).collect();
        let mut level2 = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                level2[i * dim + j] = -self.level2[i * dim + j] + self.level1[i] * self.level1[j];
            }
        }
        Tensor2 { dim, level1, level2 }
    }

    /// Euclidean norm of the level-1 or level-2 component.
    pub fn level_norm(&self, level: u8) -> Result<f64> {
        match level {
            1 => Ok(euclidean(&self.level1)),
            2 => Ok(euclidean(&self.level2)),
            other => Err(Error::InvalidInput(format!("level must be 1 or 2, got {other}"))),
        }
    }

    /// Largest entrywise deviation from another element over both levels.
    pub fn max_abs_diff(&self, other: &Tensor2) -> f64 {
        let l1 = self
            .level1
            .iter()
            .zip(&other.level1)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let l2 = self
            .level2
            .iter()
            .zip(&other.level2)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        l1.max(l2)
    }
}

#[inline]
pub fn euclidean(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Outer product u ⊗ v, row-major with u on the first slot.
pub fn outer(u: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; u.len() * v.len()];
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            out[i * v.len() + j] = ui * vj;
        }
    }
    out
}
