//! Truncation functions and the two integrand kernels of the
//! Lévy–Khintchine formula.
//!
//! `psi(h, t) = e^{it} - 1 - i h(t)` is the kernel used against a
//! cylindrical Lévy measure, `psi_tilde(h, s, t) = e^{ist} - 1 - i t h(s)`
//! the classical one-dimensional kernel. Both are evaluated without the
//! catastrophic cancellation of the naive formula when the argument is small,
//! which matters once they are integrated against a measure with a
//! non-integrable singularity at the origin.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A bounded function with `h(s) = s` on `[-identity_radius, identity_radius]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// `h(s) = s 1_{[-1, 1]}(s)`.
    Indicator,
    /// `h(s) = s clamp(2 - |s|, 0, 1)`, continuous.
    Ramp,
}

impl Truncation {
    pub const ALL: [Truncation; 2] = [Truncation::Indicator, Truncation::Ramp];

    #[inline]
    pub fn eval(self, s: f64) -> f64 {
        match self {
            Truncation::Indicator => {
                if s.abs() <= 1.0 {
                    s
                } else {
                    0.0
                }
            }
            Truncation::Ramp => s * (2.0 - s.abs()).clamp(0.0, 1.0),
        }
    }

    /// `sup |h|`.
    pub fn bound(self) -> f64 {
        1.0
    }

    /// Radius `c` of the interval `[-c, c]` on which `h` is the identity.
    pub fn identity_radius(self) -> f64 {
        1.0
    }

    pub fn is_continuous(self) -> bool {
        matches!(self, Truncation::Ramp)
    }

    /// Points where `h` fails to be smooth; quadrature panels split here.
    pub fn kinks(self) -> &'static [f64] {
        match self {
            Truncation::Indicator => &[1.0],
            Truncation::Ramp => &[1.0, 2.0],
        }
    }

    /// Radius beyond which `h` vanishes identically.
    pub fn support_radius(self) -> f64 {
        match self {
            Truncation::Indicator => 1.0,
            Truncation::Ramp => 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Truncation::Indicator => "indicator",
            Truncation::Ramp => "ramp",
        }
    }

    #[inline]
    fn is_identity_at(self, s: f64) -> bool {
        s.abs() <= self.identity_radius()
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Truncation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "indicator" => Ok(Truncation::Indicator),
            "ramp" => Ok(Truncation::Ramp),
            other => Err(Error::InvalidParameter(format!(
                "unknown truncation '{other}' (expected 'indicator' or 'ramp')"
            ))),
        }
    }
}

/// `e^{ix} - 1`, accurate for small `x`.
#[inline]
pub fn expm1_i(x: f64) -> Complex64 {
    let half = (0.5 * x).sin();
    Complex64::new(-2.0 * half * half, x.sin())
}

/// `e^{ix} - 1 - ix`, accurate for small `x`.
#[inline]
pub fn expm1_i_linear(x: f64) -> Complex64 {
    let half = (0.5 * x).sin();
    let re = -2.0 * half * half;
    let im = if x.abs() < 0.1 {
        // sin x - x by its Taylor series; 8 terms exhaust f64 precision here.
        let x2 = x * x;
        let mut term = -x * x2 / 6.0;
        let mut acc = term;
        for k in 1..8 {
            let k = k as f64;
            term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            acc += term;
        }
        acc
    } else {
        x.sin() - x
    };
    Complex64::new(re, im)
}

/// `psi_h(t) = e^{it} - 1 - i h(t)`.
#[inline]
pub fn psi(h: Truncation, t: f64) -> Complex64 {
    if h.is_identity_at(t) {
        expm1_i_linear(t)
    } else {
        expm1_i(t) - Complex64::new(0.0, h.eval(t))
    }
}

/// `psi~_h(s, t) = e^{ist} - 1 - i t h(s)`.
#[inline]
pub fn psi_tilde(h: Truncation, s: f64, t: f64) -> Complex64 {
    if h.is_identity_at(s) {
        expm1_i_linear(s * t)
    } else {
        expm1_i(s * t) - Complex64::new(0.0, t * h.eval(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// 512 equispaced points on [-10, 10] plus dyadic points near 0.
    fn grid() -> Vec<f64> {
        let mut g: Vec<f64> = (0..512).map(|i| -10.0 + 20.0 * i as f64 / 511.0).collect();
        for k in 0..40 {
            let x = 2f64.powi(-k);
            g.push(x);
            g.push(-x);
        }
        g.push(0.0);
        g
    }

    #[test]
    fn identity_near_origin_and_bounded() {
        for h in Truncation::ALL {
            assert_eq!(h.eval(0.0), 0.0);
            for s in grid() {
                if s.abs() <= h.identity_radius() {
                    assert_eq!(h.eval(s), s, "{h} at {s}");
                }
                assert!(h.eval(s).abs() <= h.bound());
            }
        }
    }

    #[test]
    fn ramp_is_continuous_indicator_is_not() {
        let eps = 1e-9;
        assert!((Truncation::Ramp.eval(2.0 - eps) - Truncation::Ramp.eval(2.0 + eps)).abs() < 1e-8);
        assert!((Truncation::Ramp.eval(1.0 - eps) - Truncation::Ramp.eval(1.0 + eps)).abs() < 1e-8);
        assert!(
            (Truncation::Indicator.eval(1.0) - Truncation::Indicator.eval(1.0 + eps)).abs() > 0.5
        );
        assert!(Truncation::Ramp.is_continuous());
        assert!(!Truncation::Indicator.is_continuous());
        assert_eq!(Truncation::Ramp.eval(1.5), 0.75);
    }

    #[test]
    fn names_round_trip() {
        for h in Truncation::ALL {
            assert_eq!(h.name().parse::<Truncation>().unwrap(), h);
        }
        assert!("cubic".parse::<Truncation>().is_err());
    }

    #[test]
    fn psi_examples() {
        let h = Truncation::Indicator;
        assert_eq!(psi(h, 0.0), Complex64::new(0.0, 0.0));
        let z = psi(h, PI);
        assert!((z - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
        // direct complex evaluation of e^{0.5i} - 1 - 0.5i
        let direct = Complex64::new(0.0, 0.5).exp() - 1.0 - Complex64::new(0.0, 0.5);
        let z = psi(h, 0.5);
        assert!((z - direct).norm() < 1e-15);
        assert!((z.re + 0.12242).abs() < 1e-5 && (z.im + 0.02057).abs() < 1e-5);
    }

    #[test]
    fn psi_tilde_examples() {
        let h = Truncation::Indicator;
        for s in [-3.0, -0.2, 0.0, 0.7, 5.0] {
            assert_eq!(psi_tilde(h, s, 0.0), Complex64::new(0.0, 0.0));
        }
        assert_eq!(psi_tilde(h, 0.5, 1.0), psi(h, 0.5));
        assert_eq!(psi_tilde(h, -0.5, -1.0), psi_tilde(h, -0.5, 1.0).conj());
    }

    #[test]
    fn psi_equals_psi_tilde_at_unit_time() {
        for h in Truncation::ALL {
            for t in grid() {
                assert_eq!(psi(h, t), psi_tilde(h, t, 1.0), "{h} t={t}");
            }
        }
    }

    #[test]
    fn indicator_kernel_reflection() {
        let g = grid();
        let h = Truncation::Indicator;
        for &s in g.iter().step_by(7) {
            for &t in g.iter().step_by(11) {
                assert_eq!(psi_tilde(h, -s, t), psi_tilde(h, s, -t));
            }
        }
    }

    #[test]
    fn small_argument_kernel_matches_series() {
        for x in [1e-12, -3e-7, 1e-4, 0.05, -0.099, 0.1, 0.3] {
            let z = expm1_i_linear(x);
            // cos x - 1 and sin x - x to leading orders
            let re = -x * x / 2.0 + x.powi(4) / 24.0 - x.powi(6) / 720.0;
            let im = -x.powi(3) / 6.0 + x.powi(5) / 120.0 - x.powi(7) / 5040.0;
            assert!((z.re - re).abs() <= 1e-15 * re.abs().max(1e-300) + x.powi(8));
            assert!((z.im - im).abs() <= 1e-14 * im.abs().max(1e-300) + x.powi(9).abs());
        }
    }

    proptest! {
        #[test]
        fn kernel_bounded_by_quadratic_inside_radius(t in -1.0f64..1.0, h in prop::sample::select(Truncation::ALL.to_vec())) {
            prop_assert!(psi(h, t).norm() <= 0.5 * t * t * (1.0 + 1e-12));
        }
    }
}
