//! Parametrized slice elements for the so(n) orbits with one size-3 block:
//! the 7x7 family (a, b, v) and the 11x11 family (a, b, v, w), both in the
//! anti-diagonal convention, with optional embedding into larger so(n).

use crate::algebra::{AlgebraKind, Family, OrbitElement};
use crate::error::{Error, Result};
use crate::form::BilinearForm;
use crate::jordan::build_q;
use crate::mat::ComplexMatrix;
use num_complex::Complex64;

/// Which parametrized family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberVariant {
    /// Jordan type (3, 2^2, 1^...): parameters a, b and a scalar v.
    F322,
    /// Jordan type (3, 2^4, 1^...): parameters a, b and 3-vectors v, w.
    F324,
}

impl FiberVariant {
    pub fn base_dim(&self) -> usize {
        match self {
            FiberVariant::F322 => 7,
            FiberVariant::F324 => 11,
        }
    }
}

/// Parameters of a canonical fiber element.
#[derive(Debug, Clone)]
pub struct CanonicalFiberParams {
    pub a: Complex64,
    pub b: Complex64,
    pub v: Vec<Complex64>,
    pub w: Option<Vec<Complex64>>,
}

impl CanonicalFiberParams {
    pub fn f322(a: Complex64, b: Complex64, v: Complex64) -> Self {
        CanonicalFiberParams {
            a,
            b,
            v: vec![v],
            w: None,
        }
    }

    pub fn f324(a: Complex64, b: Complex64, v: [Complex64; 3], w: [Complex64; 3]) -> Self {
        CanonicalFiberParams {
            a,
            b,
            v: v.to_vec(),
            w: Some(w.to_vec()),
        }
    }

    /// ζ = Σ vᵢ wᵢ (zero when w is absent).
    pub fn zeta(&self) -> Complex64 {
        match &self.w {
            Some(w) => self.v.iter().zip(w).map(|(a, b)| a * b).sum(),
            None => crate::mat::ZERO,
        }
    }

    pub fn v_norm_sqr(&self) -> f64 {
        self.v.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn w_norm_sqr(&self) -> f64 {
        self.w
            .as_ref()
            .map(|w| w.iter().map(|z| z.norm_sqr()).sum())
            .unwrap_or(0.0)
    }

    fn check(&self, variant: FiberVariant) -> Result<()> {
        match variant {
            FiberVariant::F322 => {
                if self.v.len() != 1 || self.w.is_some() {
                    return Err(Error::InvalidFiber(
                        "the 7x7 family takes a scalar v and no w".into(),
                    ));
                }
            }
            FiberVariant::F324 => {
                let ok = self.v.len() == 3
                    && self.w.as_ref().map(|w| w.len()) == Some(3);
                if !ok {
                    return Err(Error::InvalidFiber(
                        "the 11x11 family takes 3-vectors v and w".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The nonzero entries of the base fiber matrix, 0-indexed.
fn fiber_entries(params: &CanonicalFiberParams, variant: FiberVariant) -> Vec<(usize, usize, Complex64)> {
    let a = params.a;
    let b = params.b;
    match variant {
        FiberVariant::F322 => {
            let v = params.v[0];
            vec![
                (0, 3, a),
                (0, 4, b),
                (1, 4, v),
                (2, 5, -v),
                (2, 6, -b),
                (3, 6, -a),
            ]
        }
        FiberVariant::F324 => {
            let v = &params.v;
            let w = params.w.as_ref().expect("checked");
            vec![
                (0, 5, a),
                (0, 6, b),
                (1, 6, v[0]),
                (1, 7, -w[1]),
                (1, 8, w[2]),
                (2, 6, v[1]),
                (2, 7, w[0]),
                (2, 9, -w[2]),
                (3, 6, v[2]),
                (3, 8, -w[0]),
                (3, 9, w[1]),
                (4, 7, -v[2]),
                (4, 8, -v[1]),
                (4, 9, -v[0]),
                (4, 10, -b),
                (5, 10, -a),
            ]
        }
    }
}

/// Builds the fiber element in so(n), n = base + padding, anti-diagonal
/// convention. Odd n embeds by stretching the middle index; even n routes
/// through the identity convention (pad with a zero block, conjugate back).
pub fn canonical_fiber(
    params: &CanonicalFiberParams,
    variant: FiberVariant,
    padding: usize,
) -> Result<OrbitElement> {
    params.check(variant)?;
    let n0 = variant.base_dim();
    let n = n0 + padding;
    let alg = AlgebraKind::new(Family::So, n)?;
    let entries = fiber_entries(params, variant);

    if n % 2 == 1 {
        // index map: low half fixed, middle index to the new middle,
        // high half shifted to the end
        let h = (n0 - 1) / 2;
        let phi = |i: usize| -> usize {
            if i < h {
                i
            } else if i == h {
                (n - 1) / 2
            } else {
                n - (n0 - i)
            }
        };
        let mut y = ComplexMatrix::zeros(n, n);
        for (i, j, val) in entries {
            y[(phi(i), phi(j))] = val;
        }
        OrbitElement::new(y, alg, BilinearForm::anti_diagonal(n))
    } else {
        let mut y0 = ComplexMatrix::zeros(n0, n0);
        for (i, j, val) in entries {
            y0[(i, j)] = val;
        }
        let q0 = build_q(n0);
        let x0 = &(&q0.adjoint() * &y0) * &q0;
        let mut x = ComplexMatrix::zeros(n, n);
        x.set_block(0, 0, &x0);
        let qn = build_q(n);
        let y = &(&qn * &x) * &qn.adjoint();
        OrbitElement::new(y, alg, BilinearForm::anti_diagonal(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::matrix_rank;
    use crate::jordan::antidiagonal_skew_residual;
    use crate::tol::Tolerances;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_params_give_zero_matrix() {
        let p = CanonicalFiberParams::f322(crate::mat::ZERO, crate::mat::ZERO, crate::mat::ZERO);
        let e = canonical_fiber(&p, FiberVariant::F322, 0).unwrap();
        assert_eq!(e.matrix.frobenius_norm(), 0.0);
    }

    #[test]
    fn f322_rank_sequence() {
        let p = CanonicalFiberParams::f322(c(1.0, 0.0), crate::mat::ZERO, c(1.0, 0.0));
        let e = canonical_fiber(&p, FiberVariant::F322, 0).unwrap();
        let tol = Tolerances::default();
        assert!(e.validate(&tol).all_pass());
        assert_eq!(matrix_rank(&e.matrix, &tol).unwrap(), 4);
        assert_eq!(matrix_rank(&e.matrix.pow(2), &tol).unwrap(), 1);
        assert!(e.matrix.pow(3).frobenius_norm() < 1e-14);
    }

    #[test]
    fn f324_rank_sequence() {
        let p = CanonicalFiberParams::f324(
            c(0.8, 0.3),
            c(-0.4, 1.1),
            [c(1.0, 0.2), c(0.5, -0.7), c(-0.3, 0.4)],
            [c(0.9, -0.1), c(0.2, 0.6), c(1.2, 0.0)],
        );
        let e = canonical_fiber(&p, FiberVariant::F324, 0).unwrap();
        let tol = Tolerances::default();
        assert!(e.validate(&tol).all_pass());
        assert_eq!(matrix_rank(&e.matrix, &tol).unwrap(), 6);
        assert_eq!(matrix_rank(&e.matrix.pow(2), &tol).unwrap(), 1);
        assert!(e.matrix.pow(3).frobenius_norm() < 1e-12);
    }

    #[test]
    fn padding_preserves_membership_and_type() {
        let tol = Tolerances::default();
        let p = CanonicalFiberParams::f322(c(1.0, -0.5), c(0.7, 0.2), c(-1.3, 0.4));
        for padding in [0usize, 2, 3, 4] {
            let e = canonical_fiber(&p, FiberVariant::F322, padding).unwrap();
            assert!(
                antidiagonal_skew_residual(&e.matrix) < 1e-12 * e.matrix.frobenius_norm(),
                "padding {padding}"
            );
            assert!(e.validate(&tol).all_pass(), "padding {padding}");
            assert_eq!(matrix_rank(&e.matrix, &tol).unwrap(), 4);
            assert_eq!(matrix_rank(&e.matrix.pow(2), &tol).unwrap(), 1);
        }
    }

    #[test]
    fn wrong_params_rejected() {
        let p = CanonicalFiberParams::f322(c(1.0, 0.0), crate::mat::ZERO, c(1.0, 0.0));
        assert!(canonical_fiber(&p, FiberVariant::F324, 0).is_err());
    }
}
