use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cylindrical::drift::DriftFunctional;
use crate::cylindrical::levy::CylindricalLevyMeasure;
use crate::cylindrical::quadratic::QuadraticForm;
use crate::cylindrical::space::{combination, FunctionalSpace};
use crate::error::{Error, Result};
use crate::kernels::{psi, Truncation};
use crate::onedim::{truncation_breaks, Growth, IdCharacteristics1D};
use crate::quadrature::Quadrature;

/// Cylindrical characteristics `(p, q, ν)_h` over a functional space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylindricalCharacteristics {
    pub space: FunctionalSpace,
    pub truncation: Truncation,
    pub p: DriftFunctional,
    pub q: QuadraticForm,
    pub nu: CylindricalLevyMeasure,
}

impl CylindricalCharacteristics {
    pub fn new(
        space: FunctionalSpace,
        truncation: Truncation,
        p: DriftFunctional,
        q: QuadraticForm,
        nu: CylindricalLevyMeasure,
    ) -> Result<Self> {
        let chr = CylindricalCharacteristics {
            space,
            truncation,
            p,
            q,
            nu,
        };
        chr.validate()?;
        Ok(chr)
    }

    /// The point mass at the origin.
    pub fn degenerate(space: FunctionalSpace, truncation: Truncation) -> Self {
        CylindricalCharacteristics {
            space,
            truncation,
            p: DriftFunctional::Zero,
            q: QuadraticForm::zero(space.dim),
            nu: CylindricalLevyMeasure::Zero,
        }
    }

    /// Shape and component validity; the infinite-divisibility conditions
    /// themselves are assessed by the conditions report.
    pub fn validate(&self) -> Result<()> {
        if self.space.dim == 0 {
            return Err(Error::InvalidParameter(
                "space dimension must be >= 1".into(),
            ));
        }
        if self.q.dim() != self.space.dim || self.q.matrix.iter().any(|r| r.len() != self.space.dim)
        {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim,
                got: self.q.dim(),
            });
        }
        self.p.validate(&self.space)?;
        self.nu.validate(&self.space)
    }

    /// `∫ ψ_h(<u,a>) ν(du)`, computed through `ν∘a^{-1}`.
    pub fn jump_integral(&self, a: &[f64]) -> Result<Complex64> {
        let image = self.nu.project(a);
        if image.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let h = self.truncation;
        Ok(image
            .integrate(
                &|s| psi(h, s),
                Growth::Quadratic(0.5),
                &truncation_breaks(h),
                &Quadrature::default(),
            )?
            .value)
    }

    /// `i p(a) - q(a)/2 + ∫ ψ_h(<u,a>) ν(du)`.
    pub fn exponent(&self, a: &[f64]) -> Result<Complex64> {
        self.space.check(a)?;
        let p = self.p.eval(&self.space, a)?;
        Ok(Complex64::new(-0.5 * self.q.eval(a), p) + self.jump_integral(a)?)
    }

    /// `κ(a) = -(i p(a) + ∫ ψ_h(<u,a>) ν(du))`.
    pub fn kappa(&self, a: &[f64]) -> Result<Complex64> {
        self.space.check(a)?;
        let p = self.p.eval(&self.space, a)?;
        Ok(-(Complex64::new(0.0, p) + self.jump_integral(a)?))
    }
}

/// `φ(a) = exp(i p(a) - q(a)/2 + ∫ ψ_h(<u,a>) ν(du))`.
pub fn cf_cyl(chr: &CylindricalCharacteristics, a: &[f64]) -> Result<Complex64> {
    Ok(chr.exponent(a)?.exp())
}

/// Characteristic function of the image under `(a_1, ..., a_n)` at `t`.
pub fn cf_projection(
    chr: &CylindricalCharacteristics,
    functionals: &[Vec<f64>],
    t: &[f64],
) -> Result<Complex64> {
    if functionals.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one functional is required".into(),
        ));
    }
    if t.len() != functionals.len() {
        return Err(Error::DimensionMismatch {
            expected: functionals.len(),
            got: t.len(),
        });
    }
    for a in functionals {
        chr.space.check(a)?;
    }
    cf_cyl(chr, &combination(functionals, t))
}

pub fn kappa(chr: &CylindricalCharacteristics, a: &[f64]) -> Result<Complex64> {
    chr.kappa(a)
}

/// `(p(a), √q(a), ν∘a^{-1})_h`.
pub fn project_1d(chr: &CylindricalCharacteristics, a: &[f64]) -> Result<IdCharacteristics1D> {
    chr.space.check(a)?;
    let q = chr.q.eval(a);
    if q < -1e-12 * chr.q.trace_scale() * a.iter().map(|x| x * x).sum::<f64>().max(1.0) {
        return Err(Error::InvalidParameter(format!("q(a) = {q} is negative")));
    }
    IdCharacteristics1D::new(
        chr.p.eval(&chr.space, a)?,
        q.max(0.0).sqrt(),
        chr.nu.project(a),
        chr.truncation,
    )
}

/// `(p_1 + p_2, Q_1 + Q_2, ν_1 ⊕ ν_2)_h`.
pub fn convolve(
    c1: &CylindricalCharacteristics,
    c2: &CylindricalCharacteristics,
) -> Result<CylindricalCharacteristics> {
    if c1.space != c2.space {
        return Err(Error::DimensionMismatch {
            expected: c1.space.dim,
            got: c2.space.dim,
        });
    }
    if c1.truncation != c2.truncation {
        return Err(Error::TruncationMismatch(
            c1.truncation.name(),
            c2.truncation.name(),
        ));
    }
    Ok(CylindricalCharacteristics {
        space: c1.space,
        truncation: c1.truncation,
        p: c1.p.plus(&c2.p),
        q: c1.q.plus(&c2.q)?,
        nu: c1.nu.plus(&c2.nu),
    })
}

/// `(t p, t Q, t ν)_h`, the time-`t` marginal of the associated Lévy process.
pub fn time_scale(chr: &CylindricalCharacteristics, t: f64) -> Result<CylindricalCharacteristics> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "time {t} must be finite and >= 0"
        )));
    }
    if t == 0.0 {
        return Ok(CylindricalCharacteristics::degenerate(
            chr.space,
            chr.truncation,
        ));
    }
    if t == 1.0 {
        return Ok(chr.clone());
    }
    Ok(CylindricalCharacteristics {
        space: chr.space,
        truncation: chr.truncation,
        p: chr.p.scaled(t),
        q: chr.q.scaled(t),
        nu: chr.nu.scaled(t),
    })
}

/// `(p', q, ν)_{h'}` with `p'(a) = p(a) + ∫ (h'(<u,a>) - h(<u,a>)) ν(du)`.
pub fn convert_truncation_cyl(
    chr: &CylindricalCharacteristics,
    h_new: Truncation,
) -> CylindricalCharacteristics {
    let p = if h_new == chr.truncation || chr.nu.is_zero() {
        chr.p.clone()
    } else {
        DriftFunctional::TruncationShift {
            base: Box::new(chr.p.clone()),
            nu: chr.nu.clone(),
            from: chr.truncation,
            to: h_new,
        }
    };
    CylindricalCharacteristics {
        truncation: h_new,
        p,
        ..chr.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylindrical::space::NormKind;
    use crate::extension::MeasureOnU;
    use crate::onedim::cf_1d;
    use proptest::prelude::*;

    fn space() -> FunctionalSpace {
        FunctionalSpace::new(3, NormKind::L2).unwrap()
    }

    fn gaussian(q: QuadraticForm) -> CylindricalCharacteristics {
        CylindricalCharacteristics::new(
            space(),
            Truncation::Indicator,
            DriftFunctional::Zero,
            q,
            CylindricalLevyMeasure::Zero,
        )
        .unwrap()
    }

    fn poisson(lambda: f64, h: Truncation) -> CylindricalCharacteristics {
        let coeffs = vec![1.0, 2.0, 3.0];
        CylindricalCharacteristics::new(
            space(),
            h,
            DriftFunctional::PoissonDrift {
                coeffs: coeffs.clone(),
                lambda,
                truncation: h,
            },
            QuadraticForm::zero(3),
            CylindricalLevyMeasure::AtomicFunctional {
                coeffs,
                rate: lambda,
            },
        )
        .unwrap()
    }

    fn ell(a: &[f64]) -> f64 {
        a[0] + 2.0 * a[1] + 3.0 * a[2]
    }

    fn poisson_cf(lambda: f64, l: f64) -> Complex64 {
        (lambda * (Complex64::new(0.0, l).exp() - 1.0)).exp()
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-2.0f64..2.0, 3)
    }

    #[test]
    fn gaussian_cf_closed_form() {
        let q = QuadraticForm::new(vec![
            vec![2.0, 0.5, 0.0],
            vec![0.5, 1.0, 0.0],
            vec![0.0, 0.0, 0.5],
        ])
        .unwrap();
        let chr = gaussian(q.clone());
        let a = [0.3, -1.2, 0.7];
        let v = cf_cyl(&chr, &a).unwrap();
        assert!((v - Complex64::new((-0.5 * q.eval(&a)).exp(), 0.0)).norm() < 1e-15);
        assert_eq!(cf_cyl(&chr, &[0.0; 3]).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(chr.kappa(&a).unwrap(), Complex64::new(0.0, 0.0));
        let p1 = project_1d(&chr, &a).unwrap();
        assert_eq!(p1.m, 0.0);
        assert!((p1.r - q.eval(&a).sqrt()).abs() < 1e-15);
        assert!(p1.eta.is_zero());
    }

    #[test]
    fn gaussian_projection_two_functionals() {
        let q = QuadraticForm::identity(3);
        let chr = gaussian(q);
        let a1 = vec![1.0, 0.0, 1.0];
        let a2 = vec![0.0, 2.0, -1.0];
        let t = [0.7, -0.4];
        // |t1 a1 + t2 a2|² = t1²|a1|² + 2 t1 t2 <a1,a2> + t2²|a2|².
        let quad = t[0] * t[0] * 2.0
            + 2.0 * t[0] * t[1] * a1.iter().zip(&a2).map(|(x, y)| x * y).sum::<f64>()
            + t[1] * t[1] * 5.0;
        let v = cf_projection(&chr, &[a1.clone(), a2.clone()], &t).unwrap();
        assert!((v.re - (-0.5 * quad).exp()).abs() < 1e-15 && v.im == 0.0);
        assert_eq!(
            cf_projection(&chr, &[a1.clone(), a2.clone()], &[0.0, 0.0]).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            cf_projection(&chr, &[a1.clone(), a2], &[1.0, 0.0]).unwrap(),
            cf_cyl(&chr, &a1).unwrap()
        );
    }

    #[test]
    fn poisson_examples() {
        for h in Truncation::ALL {
            let chr = poisson(1.5, h);
            for a in [[0.1, 0.2, 0.0], [0.5, 0.5, 0.5], [-1.0, 0.3, 0.2]] {
                let l = ell(&a);
                assert!((cf_cyl(&chr, &a).unwrap() - poisson_cf(1.5, l)).norm() < 1e-14);
                let k = chr.kappa(&a).unwrap();
                let expect = 1.5 * (1.0 - Complex64::new(0.0, l).exp());
                assert!((k - expect).norm() < 1e-14);
                let p1 = project_1d(&chr, &a).unwrap();
                assert_eq!(p1.m, 1.5 * h.eval(l));
                assert_eq!(p1.r, 0.0);
                assert_eq!(p1.eta.as_atoms().unwrap(), vec![(l, 1.5)]);
            }
            let p0 = project_1d(&chr, &[0.0; 3]).unwrap();
            assert!(p0.eta.is_zero() && p0.m == 0.0);
        }
    }

    #[test]
    fn convolution_identities() {
        let g1 = gaussian(QuadraticForm::identity(3));
        let g2 = gaussian(QuadraticForm::diagonal(&[1.0, 2.0, 3.0]));
        let g = convolve(&g1, &g2).unwrap();
        assert_eq!(g.q, QuadraticForm::diagonal(&[2.0, 3.0, 4.0]));
        let p = poisson(1.0, Truncation::Ramp);
        let id = CylindricalCharacteristics::degenerate(space(), Truncation::Ramp);
        let a = [0.4, 0.1, -0.3];
        assert_eq!(
            cf_cyl(&convolve(&p, &id).unwrap(), &a).unwrap(),
            cf_cyl(&p, &a).unwrap()
        );
        let pp = convolve(&p, &poisson(2.0, Truncation::Ramp)).unwrap();
        assert!((cf_cyl(&pp, &a).unwrap() - poisson_cf(3.0, ell(&a))).norm() < 1e-14);
        assert!(matches!(
            convolve(&p, &poisson(1.0, Truncation::Indicator)),
            Err(Error::TruncationMismatch(..))
        ));
    }

    #[test]
    fn time_scaling_examples() {
        let p = poisson(1.0, Truncation::Indicator);
        assert_eq!(time_scale(&p, 1.0).unwrap(), p);
        let a = [0.4, 0.1, -0.3];
        assert_eq!(
            cf_cyl(&time_scale(&p, 0.0).unwrap(), &a).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let two = time_scale(&p, 2.0).unwrap();
        assert!((cf_cyl(&two, &a).unwrap() - poisson_cf(2.0, ell(&a))).norm() < 1e-14);
        assert!(time_scale(&p, -1.0).is_err());
    }

    #[test]
    fn truncation_conversion_examples() {
        let p = poisson(2.0, Truncation::Indicator);
        let conv = convert_truncation_cyl(&p, Truncation::Ramp);
        // ℓ(a) = 1.5.
        let a = [1.5, 0.0, 0.0];
        let before = p.p.eval(&p.space, &a).unwrap();
        let after = conv.p.eval(&conv.space, &a).unwrap();
        assert_eq!(after, before + 2.0 * 0.75);
        let g = gaussian(QuadraticForm::identity(3));
        assert_eq!(
            convert_truncation_cyl(&g, Truncation::Ramp).p,
            DriftFunctional::Zero
        );
        let inside = [0.1, 0.1, 0.1];
        assert_eq!(
            conv.p.eval(&conv.space, &inside).unwrap(),
            p.p.eval(&p.space, &inside).unwrap()
        );
    }

    #[test]
    fn projection_lemma_with_second_moment_drift() {
        let measure = MeasureOnU::atoms(vec![
            (vec![0.5, -1.0, 2.0], 0.7),
            (vec![0.1, 0.2, 0.0], 3.0),
        ]);
        let chr = CylindricalCharacteristics::new(
            space(),
            Truncation::Indicator,
            DriftFunctional::SecondMoment {
                measure: measure.clone(),
                truncation: Truncation::Indicator,
            },
            QuadraticForm::diagonal(&[0.5, 0.0, 1.0]),
            CylindricalLevyMeasure::MeasureOnU { measure },
        )
        .unwrap();
        let a = [0.8, -0.4, 0.9];
        let p1 = project_1d(&chr, &a).unwrap();
        for i in -20..=20 {
            let t = f64::from(i) * 0.25;
            let lhs = cf_1d(&p1, t).unwrap();
            let rhs = cf_cyl(&chr, &[t * a[0], t * a[1], t * a[2]]).unwrap();
            assert!((lhs - rhs).norm() < 1e-12, "t = {t}");
        }
    }

    proptest! {
        #[test]
        fn conversion_invariance(a in vec3(), lambda in 0.1f64..3.0) {
            for h in Truncation::ALL {
                let p = poisson(lambda, h);
                for h_new in Truncation::ALL {
                    let conv = convert_truncation_cyl(&p, h_new);
                    let d = (cf_cyl(&p, &a).unwrap() - cf_cyl(&conv, &a).unwrap()).norm();
                    prop_assert!(d <= 1e-12);
                }
            }
        }

        #[test]
        fn semigroup_and_hermitian_kappa(a in vec3(), s in 0.0f64..3.0, t in 0.0f64..3.0) {
            let p = poisson(1.3, Truncation::Indicator);
            let lhs = cf_cyl(&convolve(&time_scale(&p, s).unwrap(), &time_scale(&p, t).unwrap()).unwrap(), &a).unwrap();
            let rhs = cf_cyl(&time_scale(&p, s + t).unwrap(), &a).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12);
            let neg: Vec<f64> = a.iter().map(|x| -x).collect();
            prop_assert!((p.kappa(&neg).unwrap() - p.kappa(&a).unwrap().conj()).norm() <= 1e-14);
            prop_assert_eq!(p.kappa(&[0.0; 3]).unwrap(), Complex64::new(0.0, 0.0));
        }
    }
}
