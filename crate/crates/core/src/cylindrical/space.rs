use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norm on the ambient space `U = R^d`; the dual carries the conjugate norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

impl NormKind {
    pub fn dual(self) -> NormKind {
        match self {
            NormKind::L1 => NormKind::Linf,
            NormKind::L2 => NormKind::L2,
            NormKind::Linf => NormKind::L1,
        }
    }

    pub fn apply(self, v: &[f64]) -> f64 {
        match self {
            NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
            NormKind::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormKind::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

/// Finite-dimensional stand-in for a Banach space `U` and its dual, paired by
/// `<u, a> = Σ u_i a_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FunctionalSpace {
    pub dim: usize,
    pub norm: NormKind,
}

impl FunctionalSpace {
    pub fn new(dim: usize, norm: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "space dimension must be >= 1".into(),
            ));
        }
        Ok(FunctionalSpace { dim, norm })
    }

    pub fn euclidean(dim: usize) -> Self {
        FunctionalSpace {
            dim: dim.max(1),
            norm: NormKind::L2,
        }
    }

    pub fn check(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `‖u‖_U`.
    pub fn norm(&self, u: &[f64]) -> f64 {
        self.norm.apply(u)
    }

    /// `‖a‖_{U*}`.
    pub fn dual_norm(&self, a: &[f64]) -> f64 {
        self.norm.dual().apply(a)
    }

    pub fn zero(&self) -> Vec<f64> {
        vec![0.0; self.dim]
    }
}

#[inline]
pub fn pairing(u: &[f64], a: &[f64]) -> f64 {
    u.iter().zip(a).map(|(x, y)| x * y).sum()
}

/// `Σ t_i a_i`.
pub fn combination(functionals: &[Vec<f64>], t: &[f64]) -> Vec<f64> {
    let d = functionals.first().map_or(0, Vec::len);
    let mut out = vec![0.0; d];
    for (a, &ti) in functionals.iter().zip(t) {
        for (o, x) in out.iter_mut().zip(a) {
            *o += ti * x;
        }
    }
    out
}

pub fn scale(a: &[f64], t: f64) -> Vec<f64> {
    a.iter().map(|x| t * x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dual_norms_bound_pairing() {
        let u = [0.5, -2.0, 1.0];
        let a = [3.0, 0.25, -1.0];
        for norm in [NormKind::L1, NormKind::L2, NormKind::Linf] {
            let s = FunctionalSpace::new(3, norm).unwrap();
            assert!(pairing(&u, &a).abs() <= s.norm(&u) * s.dual_norm(&a) + 1e-15);
        }
        assert_eq!(NormKind::L1.apply(&u), 3.5);
        assert_eq!(NormKind::Linf.apply(&u), 2.0);
        assert!(FunctionalSpace::new(0, NormKind::L2).is_err());
    }

    proptest! {
        #[test]
        fn pairing_is_bilinear(u in prop::collection::vec(-5.0f64..5.0, 4), a in prop::collection::vec(-5.0f64..5.0, 4),
                               b in prop::collection::vec(-5.0f64..5.0, 4), s in -3.0f64..3.0, t in -3.0f64..3.0) {
            let comb = combination(&[a.clone(), b.clone()], &[s, t]);
            let lhs = pairing(&u, &comb);
            let rhs = s * pairing(&u, &a) + t * pairing(&u, &b);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
            prop_assert_eq!(pairing(&u, &a), pairing(&a, &u));
        }
    }
}
