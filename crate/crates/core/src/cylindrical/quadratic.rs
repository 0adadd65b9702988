use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `q(a) = a^T Q a` for a symmetric positive-semidefinite `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub matrix: Vec<Vec<f64>>,
}

impl QuadraticForm {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let d = matrix.len();
        if d == 0 || matrix.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidParameter(
                "Q must be a nonempty square matrix".into(),
            ));
        }
        if matrix.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("Q has non-finite entries".into()));
        }
        Ok(QuadraticForm { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        QuadraticForm {
            matrix: vec![vec![0.0; dim]; dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        QuadraticForm {
            matrix: (0..d)
                .map(|i| (0..d).map(|j| if i == j { diag[i] } else { 0.0 }).collect())
                .collect(),
        }
    }

    /// `v v^T`.
    pub fn rank_one(v: &[f64]) -> Self {
        QuadraticForm {
            matrix: v
                .iter()
                .map(|x| v.iter().map(|y| x * y).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn eval(&self, a: &[f64]) -> f64 {
        self.matrix
            .iter()
            .zip(a)
            .map(|(row, ai)| ai * row.iter().zip(a).map(|(q, aj)| q * aj).sum::<f64>())
            .sum()
    }

    /// `a^T Q b`.
    pub fn bilinear(&self, a: &[f64], b: &[f64]) -> f64 {
        self.matrix
            .iter()
            .zip(a)
            .map(|(row, ai)| ai * row.iter().zip(b).map(|(q, bj)| q * bj).sum::<f64>())
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0.0)
    }

    pub fn plus(&self, other: &QuadraticForm) -> Result<QuadraticForm> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(QuadraticForm {
            matrix: self
                .matrix
                .iter()
                .zip(&other.matrix)
                .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
                .collect(),
        })
    }

    pub fn scaled(&self, t: f64) -> QuadraticForm {
        QuadraticForm {
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|x| t * x).collect())
                .collect(),
        }
    }

    fn to_dmatrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| self.matrix[i][j])
    }

    /// `max |Q_ij - Q_ji|`.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..i {
                worst = worst.max((self.matrix[i][j] - self.matrix[j][i]).abs());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the symmetric part.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.to_dmatrix();
        let sym = (&m + m.transpose()) * 0.5;
        SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `max(1, |trace|)`, the scale for eigenvalue tolerances.
    pub fn trace_scale(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.matrix[i][i])
            .sum::<f64>()
            .abs()
            .max(1.0)
    }

    /// Symmetric and positive-semidefinite within `1e-12 · trace_scale`.
    pub fn is_covariance(&self) -> bool {
        let tol = 1e-12 * self.trace_scale();
        self.symmetry_defect() <= tol && self.min_eigenvalue() >= -tol
    }
}
