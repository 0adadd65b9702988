use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cylindrical::characteristics::{cf_cyl, CylindricalCharacteristics};
use crate::cylindrical::space::scale;
use crate::definiteness::{positive_definite_check, DefinitenessReport, Tolerances};
use crate::error::{Error, Result};

const INITIAL_STEPS: usize = 16;
const MAX_STEPS: usize = 1 << 14;
const MAX_STEP_PHASE: f64 = PI / 4.0;

fn unwrapped_phase(values: &[Complex64]) -> (f64, f64) {
    let mut total = 0.0;
    let mut largest: f64 = 0.0;
    for w in values.windows(2) {
        let step = (w[1] / w[0]).arg();
        largest = largest.max(step.abs());
        total += step;
    }
    (total, largest)
}

/// Continuous logarithm of a nonvanishing `f` on `[0, 1]` with `f(0) = 1`,
/// evaluated at 1 by phase unwrapping on a dyadically refined grid.
pub fn continuous_log<F>(f: F) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let origin = f(0.0)?;
    if (origin - 1.0).norm() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "path does not start at 1 (f(0) = {origin})"
        )));
    }
    let mut n = INITIAL_STEPS;
    let mut values = (0..=n)
        .map(|j| f(j as f64 / n as f64))
        .collect::<Result<Vec<_>>>()?;
    let mut previous: Option<f64> = None;
    loop {
        if let Some(z) = values.iter().find(|z| z.norm() == 0.0 || !z.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "path value {z} has no logarithm"
            )));
        }
        let (phase, largest) = unwrapped_phase(&values);
        if largest <= MAX_STEP_PHASE {
            if let Some(prev) = previous {
                if (prev - phase).abs() <= 1e-9 * (1.0 + phase.abs()) {
                    let end = values[n];
                    return Ok(Complex64::new(end.norm().ln(), phase));
                }
            }
            previous = Some(phase);
        } else {
            previous = None;
        }
        if n >= MAX_STEPS {
            return Err(Error::QuadratureNotConverged {
                estimate: phase,
                error: largest,
                tolerance: MAX_STEP_PHASE,
            });
        }
        let fine = 2 * n;
        let mut refined = Vec::with_capacity(fine + 1);
        for (j, &v) in values.iter().take(n).enumerate() {
            refined.push(v);
            refined.push(f((2 * j + 1) as f64 / fine as f64)?);
        }
        refined.push(values[n]);
        values = refined;
        n = fine;
    }
}

/// `φ(a)^{1/k}` along the continuous branch `s ↦ φ(s a)` from `s = 0`.
pub fn cf_root(chr: &CylindricalCharacteristics, a: &[f64], k: u32) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::InvalidParameter("root order must be >= 1".into()));
    }
    chr.space.check(a)?;
    if k == 1 {
        return cf_cyl(chr, a);
    }
    let log = continuous_log(|s| cf_cyl(chr, &scale(a, s)))?;
    Ok((log / f64::from(k)).exp())
}

/// Positive-definiteness of `a ↦ φ(a)^{1/k}` on `points`.
pub fn root_gram_check(
    chr: &CylindricalCharacteristics,
    points: &[Vec<f64>],
    k: u32,
    tol: Tolerances,
) -> Result<DefinitenessReport> {
    let report = positive_definite_check(|x: &[f64]| cf_root(chr, x, k), points, tol)?;
    Ok(DefinitenessReport {
        divisor: Some(k),
        ..report
    })
}
