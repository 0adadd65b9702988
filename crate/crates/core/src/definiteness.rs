//! Positive- and negative-definiteness of functions on a finite set of
//! functionals, decided from the eigenvalues of their Gram matrices.
//!
//! A function `f` is positive-definite on `{a_1, ..., a_n}` when the matrix
//! `G_ij = f(a_i - a_j)` is Hermitian positive-semidefinite. A function `k` is
//! negative-definite in Schoenberg's sense when `k(0) >= 0`, `k(-a) = conj k(a)`
//! and `Σ z_i conj(z_j) k(a_i - a_j) <= 0` for every `z` with `Σ z_i = 0`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest point set accepted by the dense eigen-decomposition.
pub const MAX_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigenvalue tolerance, relative to `max(1, max |entry|)`.
    pub eigen: f64,
    /// Absolute tolerance on `|G_ij - conj(G_ji)|`.
    pub hermitian: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eigen: 1e-8,
            hermitian: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn eigen(eigen: f64) -> Self {
        Tolerances {
            eigen,
            ..Tolerances::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// The (constrained) Gram form takes a value of the wrong sign.
    NotDefinite,
    /// `G` is not Hermitian within tolerance.
    NonHermitian,
    /// `k(0)` is not a nonnegative real number.
    BadOrigin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefinitenessReport {
    pub kind: CheckKind,
    pub size: usize,
    /// Smallest eigenvalue of `G` (positive check) or of `-P^H K P` on `{Σz = 0}` (negative check).
    pub min_eigenvalue: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub max_asymmetry: f64,
    pub verdict: Verdict,
    /// `z` with `z^H G z < 0` (positive check) or `Σz = 0, z^H K z > 0` (negative check).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Complex64>>,
    /// Value of the Gram form at the witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor: Option<u32>,
}

impl DefinitenessReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// `min_eigenvalue + tolerance · scale`; nonnegative exactly when the eigenvalue test passes.
    pub fn margin(&self) -> f64 {
        self.min_eigenvalue + self.tolerance * self.scale
    }
}

fn difference(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `G_ij = f(a_i - a_j)`.
pub fn gram_matrix<F>(f: &F, points: &[Vec<f64>]) -> Result<DMatrix<Complex64>>
where
    F: Fn(&[f64]) -> Result<Complex64> + Sync,
{
    let n = points.len();
    let rows: Vec<Vec<Complex64>> = points
        .par_iter()
        .map(|ai| {
            points
                .iter()
                .map(|aj| f(&difference(ai, aj)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn validate_points(points: &[Vec<f64>], min: usize) -> Result<()> {
    if points.len() < min {
        return Err(Error::InvalidParameter(format!(
            "definiteness check needs at least {min} points, got {}",
            points.len()
        )));
    }
    if points.len() > MAX_POINTS {
        return Err(Error::InvalidParameter(format!(
            "at most {MAX_POINTS} points supported, got {}",
            points.len()
        )));
    }
    let d = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.len(),
        });
    }
    Ok(())
}

fn scale_of(g: &DMatrix<Complex64>) -> f64 {
    g.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

fn max_asymmetry(g: &DMatrix<Complex64>) -> f64 {
    let n = g.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((g[(i, j)] - g[(j, i)].conj()).norm());
        }
    }
    worst
}

fn hermitian_part(g: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Smallest eigenvalue and a unit eigenvector of a Hermitian matrix.
fn min_eigenpair(m: DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    let eig = SymmetricEigen::new(m);
    let (idx, &min) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    (min, eig.eigenvectors.column(idx).into_owned())
}

fn quadratic_form(g: &DMatrix<Complex64>, z: &DVector<Complex64>) -> f64 {
    (z.adjoint() * g * z)[(0, 0)].re
}

/// Positive-semidefiniteness of `G_ij = f(a_i - a_j)`.
pub fn positive_definite_check<F>(
    f: F,
    points: &[Vec<f64>],
    tol: Tolerances,
) -> Result<DefinitenessReport>
where
    F: Fn(&[f64]) -> Result<Complex64> + Sync,
{
    validate_points(points, 1)?;
    let g = gram_matrix(&f, points)?;
    Ok(psd_report(&g, tol))
}

/// Eigenvalue verdict for an already assembled Gram matrix.
pub fn psd_report(g: &DMatrix<Complex64>, tol: Tolerances) -> DefinitenessReport {
    let scale = scale_of(g);
    let asym = max_asymmetry(g);
    let (min, v) = min_eigenpair(hermitian_part(g));
    let mut report = DefinitenessReport {
        kind: CheckKind::Positive,
        size: g.nrows(),
        min_eigenvalue: min,
        scale,
        tolerance: tol.eigen,
        max_asymmetry: asym,
        verdict: Verdict::Pass,
        witness: None,
        witness_form: None,
        divisor: None,
    };
    if asym > tol.hermitian {
        report.verdict = Verdict::NonHermitian;
    } else if min < -tol.eigen * scale {
        report.verdict = Verdict::NotDefinite;
        report.witness_form = Some(quadratic_form(g, &v));
        report.witness = Some(v.iter().copied().collect());
    }
    report
}

/// Orthonormal (Helmert) basis of `{z : Σ z_i = 0}` as the columns of an `n × (n-1)` matrix.
pub fn zero_sum_basis(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n.saturating_sub(1), |i, k| {
        let k1 = (k + 1) as f64;
        let norm = (k1 * (k1 + 1.0)).sqrt();
        if i <= k {
            1.0 / norm
        } else if i == k + 1 {
            -k1 / norm
        } else {
            0.0
        }
    })
}

/// Schoenberg negative-definiteness of `k` on the point set.
pub fn negative_definite_check<F>(
    k: F,
    points: &[Vec<f64>],
    tol: Tolerances,
) -> Result<DefinitenessReport>
where
    F: Fn(&[f64]) -> Result<Complex64> + Sync,
{
    validate_points(points, 2)?;
    let origin = vec![0.0; points[0].len()];
    let k0 = k(&origin)?;
    let kmat = gram_matrix(&k, points)?;
    let scale = scale_of(&kmat);
    let asym = max_asymmetry(&kmat);
    let n = points.len();
    let basis = zero_sum_basis(n).map(|x| Complex64::new(x, 0.0));
    let projected = -(basis.adjoint() * hermitian_part(&kmat) * &basis);
    let (min, v) = min_eigenpair(hermitian_part(&projected));
    let mut report = DefinitenessReport {
        kind: CheckKind::Negative,
        size: n,
        min_eigenvalue: min,
        scale,
        tolerance: tol.eigen,
        max_asymmetry: asym,
        verdict: Verdict::Pass,
        witness: None,
        witness_form: None,
        divisor: None,
    };
    if k0.re < -tol.eigen * scale || k0.im.abs() > tol.eigen * scale {
        report.verdict = Verdict::BadOrigin;
    } else if asym > tol.hermitian {
        report.verdict = Verdict::NonHermitian;
    } else if min < -tol.eigen * scale {
        let z = &basis * v;
        report.verdict = Verdict::NotDefinite;
        report.witness_form = Some(quadratic_form(&kmat, &z));
        report.witness = Some(z.iter().copied().collect());
    }
    Ok(report)
}

/// For each divisor `m`, positive-definiteness of `a ↦ exp(-k(a)/m)`.
pub fn schoenberg_check<F>(
    k: F,
    points: &[Vec<f64>],
    divisors: &[u32],
    tol: Tolerances,
) -> Result<Vec<DefinitenessReport>>
where
    F: Fn(&[f64]) -> Result<Complex64> + Sync,
{
    validate_points(points, 1)?;
    if divisors.contains(&0) {
        return Err(Error::InvalidParameter("divisors must be >= 1".into()));
    }
    let kmat = gram_matrix(&k, points)?;
    Ok(divisors
        .iter()
        .map(|&m| {
            let g = kmat.map(|z| (-z / f64::from(m)).exp());
            DefinitenessReport {
                divisor: Some(m),
                ..psd_report(&g, tol)
            }
        })
        .collect())
}
