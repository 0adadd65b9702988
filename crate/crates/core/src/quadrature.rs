//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex-valued
//! integrands on finite and half-infinite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value of an integral together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
    };

    pub fn exact(value: Complex64) -> Self {
        Estimate { value, error: 0.0 }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, rhs: Estimate) -> Estimate {
        Estimate {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

impl std::ops::Mul<f64> for Estimate {
    type Output = Estimate;

    fn mul(self, rhs: f64) -> Estimate {
        Estimate {
            value: self.value * rhs,
            error: self.error * rhs.abs(),
        }
    }
}

impl std::iter::Sum for Estimate {
    fn sum<I: Iterator<Item = Estimate>>(iter: I) -> Estimate {
        iter.fold(Estimate::ZERO, |a, b| a + b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_panels: 20_000,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).norm();
    (value, error)
}

impl Quadrature {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Quadrature {
            abs_tol,
            ..Quadrature::default()
        }
    }

    /// Integrate over `[a, b]`; `b` may be `+inf`.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64) -> Result<Estimate> {
        self.integrate_breaks(f, &[a, b])
    }

    /// Integrate over `[points[0], points[last]]` with the initial panels split at
    /// every listed point. Points must be nondecreasing; the last may be `+inf`.
    pub fn integrate_breaks<F: Fn(f64) -> Complex64>(
        &self,
        f: F,
        points: &[f64],
    ) -> Result<Estimate> {
        if points.len() < 2 {
            return Ok(Estimate::ZERO);
        }
        let last = *points.last().unwrap();
        if last.is_infinite() {
            let finite = &points[..points.len() - 1];
            let start = *finite.last().unwrap();
            let head = if finite.len() >= 2 {
                self.run(&f, finite)?
            } else {
                Estimate::ZERO
            };
            // s = start + x / (1 - x)
            let mapped = |x: f64| {
                let one_minus = 1.0 - x;
                f(start + x / one_minus) / (one_minus * one_minus)
            };
            let tail = self.run(&mapped, &[0.0, 1.0])?;
            return Ok(head + tail);
        }
        self.run(&f, points)
    }

    fn run<F: Fn(f64) -> Complex64>(&self, f: &F, points: &[f64]) -> Result<Estimate> {
        let mut heap = BinaryHeap::new();
        let mut total = Complex64::new(0.0, 0.0);
        let mut total_err = 0.0;
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.partial_cmp(&a) != Some(Ordering::Greater) {
                continue;
            }
            let (value, error) = kronrod(f, a, b);
            total += value;
            total_err += error;
            heap.push(Panel { a, b, value, error });
        }
        loop {
            if !total.re.is_finite() || !total.im.is_finite() || !total_err.is_finite() {
                return Err(Error::QuadratureNotConverged {
                    estimate: f64::NAN,
                    error: f64::INFINITY,
                    tolerance: self.abs_tol,
                });
            }
            let tol = self.abs_tol.max(self.rel_tol * total.norm());
            if total_err <= tol {
                return Ok(Estimate {
                    value: total,
                    error: total_err,
                });
            }
            if heap.len() >= self.max_panels {
                return Err(Error::QuadratureNotConverged {
                    estimate: total.re,
                    error: total_err,
                    tolerance: tol,
                });
            }
            let worst = heap.pop().expect("nonempty");
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b) {
                // interval exhausted at machine resolution; accept its contribution
                let tol_left = (tol - (total_err - worst.error)).max(0.0);
                if worst.error > tol_left {
                    return Err(Error::QuadratureNotConverged {
                        estimate: total.re,
                        error: total_err,
                        tolerance: tol,
                    });
                }
                continue;
            }
            let (lv, le) = kronrod(f, worst.a, mid);
            let (rv, re) = kronrod(f, mid, worst.b);
            total += lv + rv - worst.value;
            total_err += le + re - worst.error;
            heap.push(Panel {
                a: worst.a,
                b: mid,
                value: lv,
                error: le,
            });
            heap.push(Panel {
                a: mid,
                b: worst.b,
                value: rv,
                error: re,
            });
        }
    }
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: Fn(f64) -> f64>(
    quad: &Quadrature,
    f: F,
    points: &[f64],
) -> Result<(f64, f64)> {
    let est = quad.integrate_breaks(|x| Complex64::new(f(x), 0.0), points)?;
    Ok((est.value.re, est.error))
}
