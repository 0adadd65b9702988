use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cylindrical::levy::LevyMeasureRn;
use crate::cylindrical::space::{pairing, FunctionalSpace};
use crate::error::{Error, Result};
use crate::onedim::{Growth, LevyMeasureR};
use crate::quadrature::{Estimate, Quadrature};

/// Absolutely continuous measures on `U` supported on finitely many lines
/// through the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum DensityOnU {
    /// `Σ_k w_k · radial∘(s ↦ s θ_k)^{-1}` for rays `(θ_k, w_k)`.
    Rays {
        rays: Vec<(Vec<f64>, f64)>,
        radial: LevyMeasureR,
    },
}

/// A σ-finite measure on `U = R^d` without mass at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureOnU {
    Atoms { atoms: Vec<(Vec<f64>, f64)> },
    Density(DensityOnU),
}

/// One-dimensional image of a piece of `ν` under a functional, together with
/// the radius in the image variable below which the piece lies in `B_U`.
pub(crate) struct Piece {
    pub image: LevyMeasureR,
    /// `|s| <= ball_radius` iff `u ∈ B_U`.
    pub ball_radius: f64,
}

pub(crate) fn project_atoms(atoms: &[(Vec<f64>, f64)], a: &[f64]) -> LevyMeasureR {
    LevyMeasureR::Atomic {
        atoms: atoms
            .iter()
            .map(|(u, w)| (pairing(u, a), *w))
            .filter(|&(s, _)| s != 0.0)
            .collect(),
    }
}

pub(crate) fn validate_atoms(space: &FunctionalSpace, atoms: &[(Vec<f64>, f64)]) -> Result<()> {
    for (u, w) in atoms {
        space.check(u)?;
        if u.iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidMeasure("atom at the origin of U".into()));
        }
        if u.iter().any(|x| !x.is_finite()) || !(*w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidMeasure(
                "atoms need finite locations and positive finite weights".into(),
            ));
        }
    }
    Ok(())
}

impl MeasureOnU {
    pub fn zero() -> Self {
        MeasureOnU::Atoms { atoms: Vec::new() }
    }

    pub fn atoms(atoms: Vec<(Vec<f64>, f64)>) -> Self {
        MeasureOnU::Atoms { atoms }
    }

    pub fn rays(rays: Vec<(Vec<f64>, f64)>, radial: LevyMeasureR) -> Self {
        MeasureOnU::Density(DensityOnU::Rays { rays, radial })
    }

    pub fn validate(&self, space: &FunctionalSpace) -> Result<()> {
        match self {
            MeasureOnU::Atoms { atoms } => validate_atoms(space, atoms),
            MeasureOnU::Density(DensityOnU::Rays { rays, radial }) => {
                radial.validate()?;
                if !radial.integrability()?.is_finite() {
                    return Err(Error::InvalidMeasure(
                        "radial part is not a Lévy measure".into(),
                    ));
                }
                validate_atoms(space, rays)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MeasureOnU::Atoms { atoms } => atoms.is_empty(),
            MeasureOnU::Density(DensityOnU::Rays { rays, radial }) => {
                rays.is_empty() || radial.is_zero()
            }
        }
    }

    pub fn scaled(&self, t: f64) -> MeasureOnU {
        if t == 0.0 {
            return MeasureOnU::zero();
        }
        match self {
            MeasureOnU::Atoms { atoms } => MeasureOnU::Atoms {
                atoms: atoms.iter().map(|(u, w)| (u.clone(), w * t)).collect(),
            },
            MeasureOnU::Density(DensityOnU::Rays { rays, radial }) => MeasureOnU::rays(
                rays.iter().map(|(u, w)| (u.clone(), w * t)).collect(),
                radial.clone(),
            ),
        }
    }

    /// `ν∘a^{-1}` restricted to `R \ {0}`.
    pub fn project(&self, a: &[f64]) -> LevyMeasureR {
        match self {
            MeasureOnU::Atoms { atoms } => project_atoms(atoms, a),
            MeasureOnU::Density(DensityOnU::Rays { rays, radial }) => {
                let mut parts: Vec<LevyMeasureR> = rays
                    .iter()
                    .map(|(theta, w)| (pairing(theta, a), *w))
                    .filter(|&(c, _)| c != 0.0)
                    .map(|(c, w)| radial.dilated(c).scaled(w))
                    .collect();
                match parts.len() {
                    0 => LevyMeasureR::zero(),
                    1 => parts.pop().unwrap(),
                    _ => LevyMeasureR::Sum { parts },
                }
            }
        }
    }

    /// `ν∘(a_1, ..., a_n)^{-1}` restricted to `R^n \ {0}`.
    pub fn project_n(&self, functionals: &[Vec<f64>]) -> LevyMeasureRn {
        let image = |u: &[f64]| -> Vec<f64> { functionals.iter().map(|a| pairing(u, a)).collect() };
        match self {
            MeasureOnU::Atoms { atoms } => LevyMeasureRn::Atomic {
                atoms: atoms
                    .iter()
                    .map(|(u, w)| (image(u), *w))
                    .filter(|(x, _)| x.iter().any(|&c| c != 0.0))
                    .collect(),
            },
            MeasureOnU::Density(DensityOnU::Rays { rays, radial }) => LevyMeasureRn::Sum {
                parts: rays
                    .iter()
                    .map(|(theta, w)| (image(theta), *w))
                    .filter(|(x, _)| x.iter().any(|&c| c != 0.0))
                    .map(|(direction, weight)| LevyMeasureRn::Ray {
                        direction,
                        weight,
                        radial: radial.clone(),
                    })
                    .collect(),
            },
        }
    }

    /// `ν(B_U^c)`.
    pub fn mass_outside_ball(&self, space: &FunctionalSpace) -> Result<f64> {
        match self {
            MeasureOnU::Atoms { atoms } => Ok(atoms
                .iter()
                .filter(|(u, _)| space.norm(u) > 1.0)
                .map(|(_, w)| w)
                .sum()),
            MeasureOnU::Density(DensityOnU::Rays { rays, radial }) => {
                let mut total = 0.0;
                for (theta, w) in rays {
                    total += w * radial.mass_beyond(1.0 / space.norm(theta))?;
                }
                Ok(total)
            }
        }
    }

    /// `∫ (‖u‖² ∧ 1) ν(du)`.
    pub fn strong_integrability(&self, space: &FunctionalSpace) -> Result<f64> {
        match self {
            MeasureOnU::Atoms { atoms } => Ok(atoms
                .iter()
                .map(|(u, w)| w * space.norm(u).powi(2).min(1.0))
                .sum()),
            MeasureOnU::Density(DensityOnU::Rays { rays, radial }) => {
                let mut total = 0.0;
                for (theta, w) in rays {
                    total += w * radial.dilated(space.norm(theta)).integrability()?;
                }
                Ok(total)
            }
        }
    }

    /// `∫ g(<u,a>, u ∈ B_U) ν(du)`. `growth(ρ)` must bound `g` near the origin
    /// for a ray whose image leaves `B_U` at `|s| = ρ`.
    pub(crate) fn integrate_split<G, R>(
        &self,
        space: &FunctionalSpace,
        a: &[f64],
        g: G,
        growth: R,
        breaks: &[f64],
        quad: &Quadrature,
    ) -> Result<Estimate>
    where
        G: Fn(f64, bool) -> Complex64,
        R: Fn(f64) -> Growth,
    {
        match self {
            MeasureOnU::Atoms { atoms } => Ok(Estimate::exact(
                atoms
                    .iter()
                    .map(|(u, w)| g(pairing(u, a), space.norm(u) <= 1.0) * *w)
                    .sum(),
            )),
            MeasureOnU::Density(_) => {
                let mut total = Estimate::ZERO;
                for piece in self.pieces(space, a) {
                    let rho = piece.ball_radius;
                    let mut b = breaks.to_vec();
                    b.push(rho);
                    let f = |s: f64| g(s, s.abs() <= rho);
                    total = total + piece.image.integrate(&f, growth(rho), &b, quad)?;
                }
                Ok(total)
            }
        }
    }

    fn pieces(&self, space: &FunctionalSpace, a: &[f64]) -> Vec<Piece> {
        match self {
            MeasureOnU::Atoms { .. } => Vec::new(),
            MeasureOnU::Density(DensityOnU::Rays { rays, radial }) => rays
                .iter()
                .filter_map(|(theta, w)| {
                    let c = pairing(theta, a);
                    (c != 0.0).then(|| Piece {
                        image: radial.dilated(c).scaled(*w),
                        ball_radius: c.abs() / space.norm(theta),
                    })
                })
                .collect(),
        }
    }

    /// `sup_k |<u_k, a>|` over atoms or ray directions scaled to the unit sphere.
    pub fn pairing_extent(&self, space: &FunctionalSpace, a: &[f64]) -> f64 {
        match self {
            MeasureOnU::Atoms { atoms } => atoms
                .iter()
                .fold(0.0, |m, (u, _)| m.max(pairing(u, a).abs())),
            MeasureOnU::Density(DensityOnU::Rays { rays, .. }) => rays
                .iter()
                .fold(0.0, |m, (u, _)| m.max(pairing(u, a).abs() / space.norm(u))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylindrical::space::NormKind;
    use crate::onedim::DensityFamily;

    fn space() -> FunctionalSpace {
        FunctionalSpace::new(2, NormKind::L2).unwrap()
    }

    #[test]
    fn json_shapes() {
        let m = MeasureOnU::atoms(vec![(vec![1.0, 0.0], 2.0)]);
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"kind":"atoms","atoms":[[[1.0,0.0],2.0]]}"#);
        let radial =
            LevyMeasureR::density(DensityFamily::Exponential { c: 1.0, rate: 2.0 }, 0.0, None)
                .unwrap();
        let m = MeasureOnU::rays(vec![(vec![0.0, 1.0], 1.0)], radial);
        let js = serde_json::to_value(&m).unwrap();
        assert_eq!(js["kind"], "density");
        assert_eq!(js["family"], "rays");
        let back: MeasureOnU = serde_json::from_value(js).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn atoms_at_origin_rejected() {
        let m = MeasureOnU::atoms(vec![(vec![0.0, 0.0], 1.0)]);
        assert!(m.validate(&space()).is_err());
        let m = MeasureOnU::atoms(vec![(vec![1.0], 1.0)]);
        assert!(matches!(
            m.validate(&space()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ray_projection_matches_direct_integral() {
        let radial =
            LevyMeasureR::density(DensityFamily::Exponential { c: 1.0, rate: 1.0 }, 0.0, None)
                .unwrap();
        let m = MeasureOnU::rays(vec![(vec![1.0, 1.0], 0.5), (vec![0.0, 2.0], 1.5)], radial);
        m.validate(&space()).unwrap();
        let a = [0.3, -0.7];
        // ∫ s² over the projected measure: Σ w c² ∫ x² e^{-|x|} dx = Σ w c² · 4.
        let expect = 0.5 * (0.3f64 - 0.7).powi(2) * 4.0 + 1.5 * 1.4f64.powi(2) * 4.0;
        let (v, _) = m
            .project(&a)
            .integrate_real(
                &|s| s * s,
                Growth::Quadratic(1.0),
                &[],
                &Quadrature::default(),
            )
            .unwrap();
        assert!((v - expect).abs() < 1e-9, "{v} vs {expect}");
        // ν(B^c) for ray (1,1): ‖θ‖ = √2, mass of |x| > 1/√2 is 2 e^{-1/√2}.
        let expect = 0.5 * 2.0 * (-1.0 / 2f64.sqrt()).exp() + 1.5 * 2.0 * (-0.5f64).exp();
        assert!((m.mass_outside_ball(&space()).unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn split_integral_classifies_ball() {
        let m = MeasureOnU::atoms(vec![(vec![2.0, 0.0], 1.0), (vec![0.3, 0.0], 2.0)]);
        let a = [1.0, 5.0];
        let est = m
            .integrate_split(
                &space(),
                &a,
                |s, inside| Complex64::new(if inside { s } else { 10.0 * s }, 0.0),
                |_| Growth::Bounded,
                &[],
                &Quadrature::default(),
            )
            .unwrap();
        assert!((est.value.re - (20.0 + 0.6)).abs() < 1e-14);
    }
}
