//! Exact simulation of `drift + N(0, r²) + compound Poisson(η restricted to |s| > ε)`,
//! and the goodness-of-fit statistics used to validate it.

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, DiscreteCDF};

use crate::error::{Error, Result};
use crate::onedim::characteristics::{restrict_beyond, truncation_breaks, IdCharacteristics1D};
use crate::onedim::measure::{integrate_half_line, Growth, LevyMeasureR, Profile};
use crate::quadrature::Quadrature;

/// Draws per deterministic shard; each shard owns its own ChaCha stream.
pub const SHARD_SIZE: usize = 8192;

const PANEL_RATIO: f64 = 1.25;

/// Sampler for one side of a density restricted to `[lo, hi]` (in the base variable).
#[derive(Debug, Clone)]
struct PanelSampler {
    profile: Profile,
    sign: f64,
    scale: f64,
    /// `(left, right)`; `right = inf` for the final tail panel.
    panels: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
enum JumpSource {
    Atom(f64),
    Panel { sampler: usize, panel: usize },
}

/// Finite jump measure prepared for exact sampling.
#[derive(Debug, Clone)]
struct JumpLaw {
    total_mass: f64,
    sources: Vec<JumpSource>,
    samplers: Vec<PanelSampler>,
    index: Option<WeightedIndex<f64>>,
}

impl JumpLaw {
    fn new(eta: &LevyMeasureR) -> Result<Self> {
        let mut sources = Vec::new();
        let mut weights = Vec::new();
        let mut samplers = Vec::new();
        collect(eta, 1.0, &mut sources, &mut weights, &mut samplers)?;
        let total_mass: f64 = weights.iter().sum();
        let index = if total_mass > 0.0 {
            Some(WeightedIndex::new(&weights).map_err(|e| Error::InvalidMeasure(e.to_string()))?)
        } else {
            None
        };
        Ok(JumpLaw {
            total_mass,
            sources,
            samplers,
            index,
        })
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        let idx = self.index.as_ref().expect("nonzero mass").sample(rng);
        match self.sources[idx] {
            JumpSource::Atom(s) => s,
            JumpSource::Panel { sampler, panel } => self.samplers[sampler].draw(panel, rng),
        }
    }
}

fn collect(
    eta: &LevyMeasureR,
    factor: f64,
    sources: &mut Vec<JumpSource>,
    weights: &mut Vec<f64>,
    samplers: &mut Vec<PanelSampler>,
) -> Result<()> {
    match eta {
        LevyMeasureR::Atomic { atoms } => {
            for &(s, w) in atoms {
                sources.push(JumpSource::Atom(s));
                weights.push(w * factor);
            }
        }
        LevyMeasureR::Density {
            density,
            support,
            weight,
            dilation,
        } => {
            if *weight == 0.0 {
                return Ok(());
            }
            let quad = Quadrature::default();
            for (profile, sign) in density.sides().into_iter().zip([1.0, -1.0]) {
                if profile.c == 0.0 {
                    continue;
                }
                let panels = layout_panels(&profile, *support);
                let sampler = samplers.len();
                for (k, &(a, b)) in panels.iter().enumerate() {
                    let f = |x: f64| Complex64::new(profile.eval(x), 0.0);
                    let hi = if b.is_finite() { Some(b) } else { None };
                    let mass = integrate_half_line(&f, (a, hi), &[], &quad)?.value.re;
                    if mass > 0.0 {
                        sources.push(JumpSource::Panel { sampler, panel: k });
                        weights.push(mass * weight * factor);
                    }
                }
                samplers.push(PanelSampler {
                    profile,
                    sign,
                    scale: *dilation,
                    panels,
                });
            }
        }
        LevyMeasureR::Sum { parts } => {
            for p in parts {
                collect(p, factor, sources, weights, samplers)?;
            }
        }
    }
    Ok(())
}

fn layout_panels(profile: &Profile, (lo, hi): (f64, Option<f64>)) -> Vec<(f64, f64)> {
    let mut panels = Vec::new();
    let upper = hi.unwrap_or(f64::INFINITY);
    let mut left = lo;
    if lo == 0.0 {
        let first = upper.min(1e-3);
        panels.push((0.0, first));
        left = first;
    }
    // geometric panels up to a point where the tail is sampled in closed form
    let tail_start = if profile.rate > 0.0 {
        (left.max(1.0) * 8.0).max(left + 20.0 / profile.rate)
    } else {
        left.max(1.0) * 64.0
    };
    let stop = upper.min(tail_start);
    while left < stop {
        let right = (left * PANEL_RATIO).max(left + 1e-3).min(stop);
        panels.push((left, right));
        left = right;
    }
    if upper.is_infinite() {
        panels.push((left, f64::INFINITY));
    }
    panels
}

impl PanelSampler {
    fn draw<R: Rng>(&self, panel: usize, rng: &mut R) -> f64 {
        let (a, b) = self.panels[panel];
        let p = &self.profile;
        let x = loop {
            if a == 0.0 {
                // x^{-1-alpha} on [0, b] by inversion, then accept e^{-rate x}
                let u: f64 = 1.0 - rng.gen::<f64>();
                let x = b * u.powf(-1.0 / p.alpha);
                if p.rate == 0.0 || rng.gen::<f64>() < (-p.rate * x).exp() {
                    break x;
                }
            } else if b.is_infinite() {
                if p.rate > 0.0 {
                    // a + Exp(rate), accept (x/a)^{-1-alpha}
                    let x = a + Exp::new(p.rate).expect("positive rate").sample(rng);
                    let accept = if p.alpha == -1.0 {
                        1.0
                    } else {
                        (x / a).powf(-1.0 - p.alpha)
                    };
                    if rng.gen::<f64>() < accept {
                        break x;
                    }
                } else {
                    // Pareto tail
                    let u: f64 = 1.0 - rng.gen::<f64>();
                    break a * u.powf(-1.0 / p.alpha);
                }
            } else {
                let x = a + (b - a) * rng.gen::<f64>();
                if rng.gen::<f64>() * p.eval(a) < p.eval(x) {
                    break x;
                }
            }
        };
        self.sign * self.scale * x
    }
}

/// Independent draws from the law with characteristics `(m, r, η|_{|s| > eps})_h`.
///
/// The drift is compensated by `∫_{|s| > eps} h dη`, so the analytic target is
/// `cf_1d(&chr.truncated_jumps(eps), t)`. Results depend only on `(chr, n, seed, eps)`.
pub fn sample_1d(
    chr: &IdCharacteristics1D,
    n: usize,
    seed: u64,
    jump_cutoff: f64,
) -> Result<Vec<f64>> {
    if jump_cutoff.is_nan() || jump_cutoff < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "jump cutoff {jump_cutoff}"
        )));
    }
    if jump_cutoff == 0.0 && !chr.eta.is_finite() {
        return Err(Error::InfiniteJumpMass);
    }
    let jumps = restrict_beyond(&chr.eta, jump_cutoff);
    let h = chr.h;
    let compensator = if jumps.is_zero() {
        0.0
    } else {
        jumps
            .integrate_real(
                &|s| h.eval(s),
                Growth::Bounded,
                &truncation_breaks(h),
                &Quadrature::default(),
            )?
            .0
    };
    let drift = chr.m - compensator;
    let law = JumpLaw::new(&jumps)?;
    let poisson = if law.total_mass > 0.0 {
        Some(Poisson::new(law.total_mass).map_err(|e| Error::InvalidParameter(e.to_string()))?)
    } else {
        None
    };
    let r = chr.r;
    let shards = n.div_ceil(SHARD_SIZE);
    let out: Vec<Vec<f64>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard as u64);
            let len = SHARD_SIZE.min(n - shard * SHARD_SIZE);
            (0..len)
                .map(|_| {
                    let mut x = drift;
                    if r > 0.0 {
                        let z: f64 = rng.sample(StandardNormal);
                        x += r * z;
                    }
                    if let Some(poisson) = &poisson {
                        let count = poisson.sample(&mut rng) as u64;
                        for _ in 0..count {
                            x += law.draw(&mut rng);
                        }
                    }
                    x
                })
                .collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// `n^{-1} Σ e^{i t x_j}`.
pub fn empirical_cf(samples: &[f64], t: f64) -> Complex64 {
    if samples.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    let (re, im) = samples.iter().fold((0.0, 0.0), |(re, im), &x| {
        let (s, c) = (t * x).sin_cos();
        (re + c, im + s)
    });
    let n = samples.len() as f64;
    Complex64::new(re / n, im / n)
}

/// Kolmogorov–Smirnov statistic against a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Kolmogorov–Smirnov statistic against an integer-valued law with CDF `cdf(k) = P(X <= k)`.
///
/// Samples are rounded to the nearest integer; the supremum is taken over both
/// sides of every jump of either distribution function.
pub fn ks_statistic_discrete<F: Fn(i64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut ks: Vec<i64> = samples.iter().map(|x| x.round() as i64).collect();
    ks.sort_unstable();
    let n = ks.len() as f64;
    if ks.is_empty() {
        return 0.0;
    }
    let (lo, hi) = (ks[0] - 1, ks[ks.len() - 1] + 1);
    let mut d: f64 = 0.0;
    let mut idx = 0;
    for k in lo..=hi {
        while idx < ks.len() && ks[idx] <= k {
            idx += 1;
        }
        let emp_at = idx as f64 / n;
        let emp_before = ks.partition_point(|&v| v < k) as f64 / n;
        d = d
            .max((emp_at - cdf(k)).abs())
            .max((emp_before - cdf(k - 1)).abs());
    }
    d
}

/// Asymptotic one-sample KS critical value at level `alpha ∈ {0.10, 0.05, 0.01}`.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    let k = if alpha <= 0.01 {
        1.627_6
    } else if alpha <= 0.05 {
        1.358_1
    } else {
        1.223_8
    };
    k / (n as f64).sqrt()
}

/// Closed-form law available for a one-dimensional triplet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum KsOracle {
    /// `N(mean, sd²)`.
    Normal { mean: f64, sd: f64 },
    /// `offset + step · Poisson(rate)`.
    Lattice { offset: f64, step: f64, rate: f64 },
}

impl KsOracle {
    /// The closed form of `(m, r, η)_h` when `η = 0, r > 0` (normal) or
    /// `r = 0, η = λ δ_s` (scaled Poisson).
    pub fn for_characteristics(chr: &IdCharacteristics1D) -> Option<KsOracle> {
        let atoms = chr.eta.as_atoms()?;
        if atoms.is_empty() {
            return (chr.r > 0.0).then_some(KsOracle::Normal {
                mean: chr.m,
                sd: chr.r,
            });
        }
        let step = atoms[0].0;
        if chr.r != 0.0 || atoms.iter().any(|a| a.0 != step) {
            return None;
        }
        let rate: f64 = atoms.iter().map(|a| a.1).sum();
        Some(KsOracle::Lattice {
            offset: chr.m - rate * chr.h.eval(step),
            step,
            rate,
        })
    }

    /// Kolmogorov–Smirnov statistic of `samples` against the law.
    pub fn ks_statistic(&self, samples: &[f64]) -> Result<f64> {
        match *self {
            KsOracle::Normal { mean, sd } => {
                let law = statrs::distribution::Normal::new(mean, sd)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                Ok(ks_statistic(samples, |x| law.cdf(x)))
            }
            KsOracle::Lattice { offset, step, rate } => {
                let law = statrs::distribution::Poisson::new(rate)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                let counts: Vec<f64> = samples.iter().map(|x| (x - offset) / step).collect();
                Ok(ks_statistic_discrete(&counts, |k| {
                    if k < 0 {
                        0.0
                    } else {
                        law.cdf(k as u64)
                    }
                }))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Truncation;
    use crate::onedim::characteristics::cf_1d;
    use crate::onedim::measure::DensityFamily;

    #[test]
    fn deterministic_given_seed() {
        let chr = IdCharacteristics1D::new(
            0.2,
            0.7,
            LevyMeasureR::atomic(vec![(1.0, 0.5), (-2.0, 0.3)]).unwrap(),
            Truncation::Ramp,
        )
        .unwrap();
        let a = sample_1d(&chr, 20_000, 42, 0.0).unwrap();
        let b = sample_1d(&chr, 20_000, 42, 0.0).unwrap();
        let c = sample_1d(&chr, 20_000, 43, 0.0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 20_000);
    }

    #[test]
    fn gaussian_moments() {
        let chr = IdCharacteristics1D::gaussian(0.0, 1.0, Truncation::Indicator).unwrap();
        let xs = sample_1d(&chr, 100_000, 7, 0.0).unwrap();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        assert!(mean.abs() < 0.02, "{mean}");
        assert!((var - 1.0).abs() < 0.02, "{var}");
    }

    #[test]
    fn infinite_mass_needs_cutoff() {
        let eta = LevyMeasureR::density(
            DensityFamily::TemperedStable {
                c_pos: 1.0,
                c_neg: 1.0,
                alpha: 0.5,
                rate_pos: 1.0,
                rate_neg: 1.0,
            },
            0.0,
            None,
        )
        .unwrap();
        let chr = IdCharacteristics1D::new(0.0, 0.0, eta, Truncation::Ramp).unwrap();
        assert_eq!(
            sample_1d(&chr, 10, 1, 0.0).unwrap_err(),
            Error::InfiniteJumpMass
        );
        assert!(sample_1d(&chr, 10, 1, 0.01).is_ok());
    }

    #[test]
    fn tempered_stable_empirical_cf_matches_truncated_target() {
        let eta = LevyMeasureR::density(
            DensityFamily::TemperedStable {
                c_pos: 1.0,
                c_neg: 0.5,
                alpha: 0.7,
                rate_pos: 1.5,
                rate_neg: 0.8,
            },
            0.0,
            None,
        )
        .unwrap();
        let chr = IdCharacteristics1D::new(0.3, 0.2, eta, Truncation::Indicator).unwrap();
        let eps = 0.05;
        let n = 100_000;
        let xs = sample_1d(&chr, n, 11, eps).unwrap();
        let target = chr.truncated_jumps(eps);
        let bound = 3.0 / (n as f64).sqrt();
        for i in 0..21 {
            let t = -3.0 + 0.3 * i as f64;
            let d = (empirical_cf(&xs, t) - cf_1d(&target, t).unwrap()).norm();
            assert!(d <= bound, "t={t}: {d} > {bound}");
        }
    }

    #[test]
    fn exponential_density_with_gap_sampled_correctly() {
        let eta = LevyMeasureR::density(
            DensityFamily::Exponential { c: 0.8, rate: 1.0 },
            0.1,
            Some(6.0),
        )
        .unwrap();
        let chr = IdCharacteristics1D::new(0.0, 0.0, eta, Truncation::Ramp).unwrap();
        let n = 100_000;
        let xs = sample_1d(&chr, n, 5, 0.0).unwrap();
        let bound = 3.0 / (n as f64).sqrt();
        for i in 0..21 {
            let t = -2.0 + 0.2 * i as f64;
            let d = (empirical_cf(&xs, t) - cf_1d(&chr, t).unwrap()).norm();
            assert!(d <= bound, "t={t}: {d}");
        }
    }

    #[test]
    fn ks_statistic_uniform() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.0005).abs() < 1e-12);
        let d = ks_statistic_discrete(&[0.0, 1.0], |k| {
            if k < 0 {
                0.0
            } else if k == 0 {
                0.5
            } else {
                1.0
            }
        });
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn closed_form_oracles() {
        let g = IdCharacteristics1D::gaussian(0.5, 2.0, Truncation::Indicator).unwrap();
        let oracle = KsOracle::for_characteristics(&g).unwrap();
        assert_eq!(oracle, KsOracle::Normal { mean: 0.5, sd: 2.0 });
        let xs = sample_1d(&g, 20_000, 3, 0.0).unwrap();
        assert!(oracle.ks_statistic(&xs).unwrap() < ks_critical_value(xs.len(), 0.01));

        let p = IdCharacteristics1D::new(
            1.0,
            0.0,
            LevyMeasureR::dirac(-0.5, 2.0).unwrap(),
            Truncation::Ramp,
        )
        .unwrap();
        let oracle = KsOracle::for_characteristics(&p).unwrap();
        let xs = sample_1d(&p, 20_000, 4, 0.0).unwrap();
        assert!(oracle.ks_statistic(&xs).unwrap() < ks_critical_value(xs.len(), 0.01));
        let shifted: Vec<f64> = xs.iter().map(|x| x + 0.5).collect();
        assert!(oracle.ks_statistic(&shifted).unwrap() > 0.1);

        let mixed = IdCharacteristics1D::new(
            0.0,
            1.0,
            LevyMeasureR::dirac(1.0, 1.0).unwrap(),
            Truncation::Ramp,
        )
        .unwrap();
        assert!(KsOracle::for_characteristics(&mixed).is_none());
    }
}
