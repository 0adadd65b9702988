use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{psi_tilde, Truncation};
use crate::onedim::measure::{Growth, LevyMeasureR};
use crate::quadrature::Quadrature;

/// Characteristics `(m, r, η)_h` of an infinitely divisible law on the line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdCharacteristics1D {
    pub m: f64,
    pub r: f64,
    pub eta: LevyMeasureR,
    pub h: Truncation,
}

/// Panel breaks for integrands built from `h`.
pub(crate) fn truncation_breaks(h: Truncation) -> Vec<f64> {
    let mut b = vec![h.identity_radius()];
    b.extend_from_slice(h.kinks());
    b
}

impl IdCharacteristics1D {
    pub fn new(m: f64, r: f64, eta: LevyMeasureR, h: Truncation) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidParameter(format!("drift {m}")));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Gaussian scale r = {r} must be >= 0"
            )));
        }
        eta.validate()?;
        let integrability = eta.integrability()?;
        if !integrability.is_finite() {
            return Err(Error::InvalidMeasure("∫(s²∧1) dη is infinite".into()));
        }
        Ok(IdCharacteristics1D { m, r, eta, h })
    }

    pub fn gaussian(m: f64, r: f64, h: Truncation) -> Result<Self> {
        Self::new(m, r, LevyMeasureR::zero(), h)
    }

    /// `(m/k, r/√k, η/k)`: the characteristics of a k-th convolution root.
    pub fn root(&self, k: u32) -> Self {
        let k = f64::from(k);
        IdCharacteristics1D {
            m: self.m / k,
            r: self.r / k.sqrt(),
            eta: self.eta.scaled(1.0 / k),
            h: self.h,
        }
    }

    /// Characteristics of the law with jumps of size `|s| <= eps` removed.
    pub fn truncated_jumps(&self, eps: f64) -> Self {
        IdCharacteristics1D {
            eta: restrict_beyond(&self.eta, eps),
            ..self.clone()
        }
    }

    /// `i m t - r² t² / 2 + ∫ psi~_h(s, t) η(ds)`.
    pub fn exponent(&self, t: f64) -> Result<Complex64> {
        self.exponent_with(t, &Quadrature::default())
    }

    pub fn exponent_with(&self, t: f64, quad: &Quadrature) -> Result<Complex64> {
        let h = self.h;
        let jump = if self.eta.is_zero() || t == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.eta
                .integrate(
                    &|s| psi_tilde(h, s, t),
                    Growth::Quadratic(0.5 * t * t),
                    &truncation_breaks(h),
                    quad,
                )?
                .value
        };
        Ok(Complex64::new(-0.5 * self.r * self.r * t * t, self.m * t) + jump)
    }
}

/// Restriction of `η` to `{|s| > eps}`.
pub(crate) fn restrict_beyond(eta: &LevyMeasureR, eps: f64) -> LevyMeasureR {
    if eps <= 0.0 {
        return eta.clone();
    }
    match eta {
        LevyMeasureR::Atomic { atoms } => LevyMeasureR::Atomic {
            atoms: atoms
                .iter()
                .copied()
                .filter(|(s, _)| s.abs() > eps)
                .collect(),
        },
        LevyMeasureR::Density {
            density,
            support,
            weight,
            dilation,
        } => {
            let lo = support.0.max(eps / dilation.abs());
            match support.1 {
                Some(hi) if lo >= hi => LevyMeasureR::zero(),
                hi => LevyMeasureR::Density {
                    density: density.clone(),
                    support: (lo, hi),
                    weight: *weight,
                    dilation: *dilation,
                },
            }
        }
        LevyMeasureR::Sum { parts } => LevyMeasureR::Sum {
            parts: parts.iter().map(|p| restrict_beyond(p, eps)).collect(),
        },
    }
}

/// `φ(t) = exp(i m t - r² t²/2 + ∫ psi~_h(s, t) η(ds))`.
pub fn cf_1d(chr: &IdCharacteristics1D, t: f64) -> Result<Complex64> {
    Ok(chr.exponent(t)?.exp())
}

/// Re-express the characteristics with respect to `h_new`:
/// `m' = m + ∫ (h'(s) - h(s)) η(ds)`.
pub fn convert_truncation_1d(
    chr: &IdCharacteristics1D,
    h_new: Truncation,
) -> Result<IdCharacteristics1D> {
    let h = chr.h;
    let shift = if h == h_new {
        0.0
    } else {
        let mut breaks = truncation_breaks(h);
        breaks.extend(truncation_breaks(h_new));
        chr.eta
            .integrate_real(
                &|s| h_new.eval(s) - h.eval(s),
                Growth::Quadratic(h.bound() + h_new.bound()),
                &breaks,
                &Quadrature::default(),
            )?
            .0
    };
    Ok(IdCharacteristics1D {
        m: chr.m + shift,
        r: chr.r,
        eta: chr.eta.clone(),
        h: h_new,
    })
}
