use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cylindrical::space::FunctionalSpace;
use crate::cylindrical::{
    CylindricalCharacteristics, CylindricalLevyMeasure, DriftFunctional, QuadraticForm,
};
use crate::error::{Error, Result};
use crate::extension::MeasureOnU;
use crate::kernels::Truncation;
use crate::onedim::{truncation_breaks, Growth};
use crate::quadrature::Quadrature;

/// Relative slack granted to the piecewise bounds on top of quadrature error.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `{|<u,a>| <= c} ∩ B_U^c`.
    InsideOutsideBall,
    /// `{|<u,a>| > c} ∩ B_U`.
    OutsideInsideBall,
    /// `{|<u,a>| > c} ∩ B_U^c`.
    OutsideOutsideBall,
}

impl Region {
    pub const ALL: [Region; 3] = [
        Region::InsideOutsideBall,
        Region::OutsideInsideBall,
        Region::OutsideOutsideBall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Region::InsideOutsideBall => "D(a)∩B^c",
            Region::OutsideInsideBall => "D^c(a)∩B",
            Region::OutsideOutsideBall => "D^c(a)∩B^c",
        }
    }

    fn contains(self, s: f64, inside_ball: bool, c: f64) -> bool {
        let in_d = s.abs() <= c;
        match self {
            Region::InsideOutsideBall => in_d && !inside_ball,
            Region::OutsideInsideBall => !in_d && inside_ball,
            Region::OutsideOutsideBall => !in_d && !inside_ball,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionIntegral {
    pub region: Region,
    /// `∫_region f dν`.
    pub value: f64,
    /// `∫_region |f| dν`.
    pub abs_value: f64,
    pub bound: f64,
    pub error: f64,
}

impl RegionIntegral {
    pub fn holds(&self) -> bool {
        self.abs_value <= self.bound * (1.0 + BOUND_SLACK) + self.error + 1e-12
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DnuDecomposition {
    pub value: f64,
    pub regions: Vec<RegionIntegral>,
    pub mass_outside_ball: f64,
    /// `(ν∘a^{-1})({|s| > c})`.
    pub projected_tail: f64,
}

/// Integral report for `∫ g dν` with a finiteness verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub value: f64,
    pub error: f64,
    pub finite: bool,
}

/// `∫ (|<u,a>|² ∧ 1) ν(du)`.
pub fn weak_pairing_integrability(nu: &MeasureOnU, a: &[f64]) -> Result<IntegralReport> {
    let image = nu.project(a);
    let (value, error) = image.integrate_real(
        &|s: f64| (s * s).min(1.0),
        Growth::Quadratic(1.0),
        &[1.0],
        &Quadrature::default(),
    )?;
    Ok(IntegralReport {
        value,
        error,
        finite: value.is_finite(),
    })
}

/// `∫ (‖u‖² ∧ 1) ν(du)`.
pub fn strong_integrability(nu: &MeasureOnU, space: &FunctionalSpace) -> Result<IntegralReport> {
    let value = nu.strong_integrability(space)?;
    Ok(IntegralReport {
        value,
        error: 0.0,
        finite: value.is_finite(),
    })
}

/// `d_ν(a) = ∫ (h(<u,a>) - <u,a> 1_{B_U}(u)) ν(du)`, integrated region by
/// region with each piece checked against its a priori bound.
pub fn d_nu_decomposition(
    nu: &MeasureOnU,
    a: &[f64],
    h: Truncation,
    space: &FunctionalSpace,
) -> Result<DnuDecomposition> {
    space.check(a)?;
    let mass_outside_ball = nu.mass_outside_ball(space)?;
    if !mass_outside_ball.is_finite() {
        return Err(Error::Hypothesis("ν(B_U^c) is infinite".into()));
    }
    let image = nu.project(a);
    if !image.integrability()?.is_finite() {
        return Err(Error::Hypothesis("ν∘a^{-1} is not a Lévy measure".into()));
    }
    let c = h.identity_radius();
    let projected_tail = image.mass_beyond(c)? + 0.0;
    let sup_h = h.bound();
    let dual = space.dual_norm(a);
    let quad = Quadrature::default();
    let mut breaks = truncation_breaks(h);
    breaks.push(c);
    let f = |s: f64, inside: bool| h.eval(s) - if inside { s } else { 0.0 };
    let growth = |rho: f64| Growth::Quadratic((sup_h + 1.0) / rho.min(c).min(1.0).powi(2));

    let mut regions = Vec::with_capacity(3);
    let mut value = 0.0;
    for region in Region::ALL {
        let est = nu.integrate_split(
            space,
            a,
            |s, inside| {
                if region.contains(s, inside, c) {
                    let v = f(s, inside);
                    Complex64::new(v, v.abs())
                } else {
                    Complex64::new(0.0, 0.0)
                }
            },
            growth,
            &breaks,
            &quad,
        )?;
        let bound = match region {
            Region::InsideOutsideBall => c * mass_outside_ball,
            Region::OutsideInsideBall => (sup_h + dual) * projected_tail,
            Region::OutsideOutsideBall => sup_h * mass_outside_ball,
        };
        let entry = RegionIntegral {
            region,
            value: est.value.re,
            abs_value: est.value.im,
            bound,
            error: est.error,
        };
        if !entry.holds() {
            return Err(Error::BoundViolated {
                region: region.name(),
                value: entry.abs_value,
                bound,
            });
        }
        value += entry.value;
        regions.push(entry);
    }
    Ok(DnuDecomposition {
        value,
        regions,
        mass_outside_ball,
        projected_tail,
    })
}

pub fn d_nu(nu: &MeasureOnU, a: &[f64], h: Truncation, space: &FunctionalSpace) -> Result<f64> {
    Ok(d_nu_decomposition(nu, a, h, space)?.value)
}

/// Characteristics `(d_ν, 0, ν)_h` built from a σ-finite measure with `ν(B_U^c) < ∞`.
pub fn make_id_from_levy(
    nu: &MeasureOnU,
    h: Truncation,
    space: FunctionalSpace,
) -> Result<CylindricalCharacteristics> {
    nu.validate(&space)?;
    if !nu.mass_outside_ball(&space)?.is_finite() {
        return Err(Error::Hypothesis("ν(B_U^c) is infinite".into()));
    }
    CylindricalCharacteristics::new(
        space,
        h,
        DriftFunctional::LevyDrift {
            measure: nu.clone(),
            truncation: h,
        },
        QuadraticForm::zero(space.dim),
        CylindricalLevyMeasure::MeasureOnU {
            measure: nu.clone(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylindrical::space::NormKind;
    use crate::onedim::{DensityFamily, LevyMeasureR};

    fn space() -> FunctionalSpace {
        FunctionalSpace::new(2, NormKind::L2).unwrap()
    }

    #[test]
    fn single_atom_values() {
        let a = [1.0, 0.0];
        // ‖u‖ = 2, <u,a> = 0.5.
        let nu = MeasureOnU::atoms(vec![(vec![0.5, 3.75f64.sqrt()], 1.0)]);
        assert!((d_nu(&nu, &a, Truncation::Indicator, &space()).unwrap() - 0.5).abs() < 1e-15);
        // ‖u‖ = 0.5, <u,a> = 0.3.
        let nu = MeasureOnU::atoms(vec![(vec![0.3, 0.4], 1.0)]);
        assert_eq!(d_nu(&nu, &a, Truncation::Indicator, &space()).unwrap(), 0.0);
        // ‖u‖ = 0.5, <u,a> = 1.5.
        let nu = MeasureOnU::atoms(vec![(vec![0.3, 0.4], 1.0)]);
        let v = d_nu(&nu, &[5.0, 0.0], Truncation::Indicator, &space()).unwrap();
        assert!((v + 1.5).abs() < 1e-15);
    }

    #[test]
    fn integrability_examples() {
        let nu = MeasureOnU::atoms(vec![(vec![0.5, 0.0], 1.0)]);
        assert_eq!(
            weak_pairing_integrability(&nu, &[1.0, 0.0]).unwrap().value,
            0.25
        );
        assert_eq!(
            weak_pairing_integrability(&nu, &[6.0, 0.0]).unwrap().value,
            1.0
        );
        assert_eq!(
            weak_pairing_integrability(&nu, &[0.0, 0.0]).unwrap().value,
            0.0
        );
        assert_eq!(strong_integrability(&nu, &space()).unwrap().value, 0.25);
        let nu = MeasureOnU::atoms(vec![(vec![0.0, 2.0], 1.0)]);
        assert_eq!(strong_integrability(&nu, &space()).unwrap().value, 1.0);
        assert_eq!(
            strong_integrability(&MeasureOnU::zero(), &space())
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn ray_density_agrees_with_direct_quadrature() {
        let radial = LevyMeasureR::density(
            DensityFamily::TemperedStable {
                c_pos: 1.0,
                c_neg: 0.5,
                alpha: 1.2,
                rate_pos: 1.0,
                rate_neg: 2.0,
            },
            0.0,
            None,
        )
        .unwrap();
        let theta = vec![0.6, 0.8];
        let nu = MeasureOnU::rays(vec![(theta.clone(), 1.0)], radial.clone());
        let a = [2.0, 1.0];
        for h in Truncation::ALL {
            let dec = d_nu_decomposition(&nu, &a, h, &space()).unwrap();
            // Direct: ∫ (h(x c) - x c 1{|x| <= 1}) radial(dx), c = <θ,a> = 2.
            let cpair = 2.0;
            let (direct, _) = radial
                .integrate_real(
                    &|x: f64| h.eval(cpair * x) - if x.abs() <= 1.0 { cpair * x } else { 0.0 },
                    Growth::Quadratic(100.0),
                    &[0.5, 1.0],
                    &Quadrature::default(),
                )
                .unwrap();
            assert!(
                (dec.value - direct).abs() < 1e-9,
                "{h}: {} vs {direct}",
                dec.value
            );
            assert!(dec.regions.iter().all(RegionIntegral::holds));
        }
    }

    #[test]
    fn levy_characteristics_match_direct_summation() {
        use crate::cylindrical::cf_cyl;
        use crate::cylindrical::space::pairing;
        let a = [0.7, -1.3];
        let u0 = vec![2.0, 0.0];
        let chr = make_id_from_levy(
            &MeasureOnU::atoms(vec![(u0.clone(), 1.0)]),
            Truncation::Indicator,
            space(),
        )
        .unwrap();
        let expect = (Complex64::new(0.0, pairing(&u0, &a)).exp() - 1.0).exp();
        assert!((cf_cyl(&chr, &a).unwrap() - expect).norm() < 1e-14);
        let zero = make_id_from_levy(&MeasureOnU::zero(), Truncation::Ramp, space()).unwrap();
        assert_eq!(cf_cyl(&zero, &a).unwrap(), Complex64::new(1.0, 0.0));

        let atoms = vec![
            (vec![2.0, 0.0], 1.0),
            (vec![0.3, 0.4], 2.5),
            (vec![-0.1, 0.9], 0.5),
            (vec![1.5, -1.5], 0.2),
        ];
        let nu = MeasureOnU::atoms(atoms.clone());
        for h in Truncation::ALL {
            let chr = make_id_from_levy(&nu, h, space()).unwrap();
            for a in [[0.7, -1.3], [3.0, 1.0], [-0.2, 0.1]] {
                let exponent: Complex64 = atoms
                    .iter()
                    .map(|(u, w)| {
                        let s = pairing(u, &a);
                        let comp = if space().norm(u) <= 1.0 { s } else { 0.0 };
                        (Complex64::new(0.0, s).exp() - 1.0 - Complex64::new(0.0, comp)) * *w
                    })
                    .sum();
                assert!((cf_cyl(&chr, &a).unwrap() - exponent.exp()).norm() < 1e-13);
            }
        }
    }
}
