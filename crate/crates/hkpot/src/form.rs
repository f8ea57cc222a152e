//! Non-degenerate bilinear forms and the adjoint they induce on linear maps.

use crate::error::{Error, Result};
use crate::mat::{ComplexMatrix, ONE, ZERO};

/// The concrete shape of a bilinear form matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum FormKind {
    /// ω(x, y) = xᵀ y.
    Identity,
    /// ω(x, y) = xᵀ S y with S_{ij} = δ_{i,n+1-j}.
    AntiDiagonal,
    /// ω(x, y) = xᵀ J y with J = [[0, I], [-I, 0]]; requires even dimension.
    StandardSymplectic,
    /// An arbitrary non-degenerate matrix.
    Explicit(ComplexMatrix),
}

/// A non-degenerate bilinear form with definite symmetry ωᵀ = ±ω.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    dim: usize,
    kind: FormKind,
    symmetry: i8,
}

impl BilinearForm {
    pub fn identity(dim: usize) -> Self {
        BilinearForm {
            dim,
            kind: FormKind::Identity,
            symmetry: 1,
        }
    }

    pub fn anti_diagonal(dim: usize) -> Self {
        BilinearForm {
            dim,
            kind: FormKind::AntiDiagonal,
            symmetry: 1,
        }
    }

    pub fn standard_symplectic(dim: usize) -> Result<Self> {
        if dim % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "symplectic form needs even dimension, got {dim}"
            )));
        }
        Ok(BilinearForm {
            dim,
            kind: FormKind::StandardSymplectic,
            symmetry: -1,
        })
    }

    /// Wraps an explicit form matrix; it must be (anti)symmetric and
    /// non-degenerate.
    pub fn explicit(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let n = matrix.rows();
        let norm = matrix.frobenius_norm();
        if norm == 0.0 {
            return Err(Error::SingularForm);
        }
        let sym = (&matrix - &matrix.transpose()).frobenius_norm();
        let anti = (&matrix + &matrix.transpose()).frobenius_norm();
        let symmetry = if sym <= 1e-12 * norm {
            1
        } else if anti <= 1e-12 * norm {
            -1
        } else {
            return Err(Error::Invalid(
                "explicit form must be symmetric or antisymmetric".into(),
            ));
        };
        if matrix.det().norm() < 1e-12 * norm.powi(n as i32) {
            return Err(Error::SingularForm);
        }
        Ok(BilinearForm {
            dim: n,
            kind: FormKind::Explicit(matrix),
            symmetry,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symmetry(&self) -> i8 {
        self.symmetry
    }

    pub fn kind(&self) -> &FormKind {
        &self.kind
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let n = self.dim;
        match &self.kind {
            FormKind::Identity => ComplexMatrix::identity(n),
            FormKind::AntiDiagonal => {
                ComplexMatrix::from_fn(n, n, |i, j| if i + j == n - 1 { ONE } else { ZERO })
            }
            FormKind::StandardSymplectic => {
                let m = n / 2;
                ComplexMatrix::from_fn(n, n, |i, j| {
                    if i < m && j == i + m {
                        ONE
                    } else if i >= m && j == i - m {
                        -ONE
                    } else {
                        ZERO
                    }
                })
            }
            FormKind::Explicit(m) => m.clone(),
        }
    }

    /// Ω⁻¹ x for the form matrix Ω. The built-in kinds invert in closed form.
    fn inverse_apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        match &self.kind {
            FormKind::Identity => Ok(x.clone()),
            // S⁻¹ = S and J⁻¹ = -J.
            FormKind::AntiDiagonal => Ok(&self.matrix() * x),
            FormKind::StandardSymplectic => Ok(&self.matrix().scale_re(-1.0) * x),
            FormKind::Explicit(m) => m.lu_solve(x),
        }
    }

    /// ω(x, y).
    pub fn eval(&self, x: &[num_complex::Complex64], y: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let my = self.matrix().apply(y);
        crate::mat::pairing(x, &my)
    }
}

/// Adjoint of `m : V_src -> V_dst` with respect to bilinear forms on both
/// sides: ω_dst(m v, w) = ω_src(v, m† w), i.e. m† = Ω_src⁻¹ mᵀ Ω_dst.
///
/// With identity forms on both sides this is the plain transpose.
pub fn dagger_adjoint(
    m: &ComplexMatrix,
    form_src: &BilinearForm,
    form_dst: &BilinearForm,
) -> Result<ComplexMatrix> {
    if m.cols() != form_src.dim() || m.rows() != form_dst.dim() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{} but forms have dims src={} dst={}",
            m.rows(),
            m.cols(),
            form_src.dim(),
            form_dst.dim()
        )));
    }
    let mt_omega = &m.transpose() * &form_dst.matrix();
    form_src.inverse_apply(&mt_omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::I;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_forms_give_transpose() {
        let m = ComplexMatrix::from_nested(&[vec![ZERO, ONE], vec![ZERO, ZERO]]);
        let f = BilinearForm::identity(2);
        let d = dagger_adjoint(&m, &f, &f).unwrap();
        assert_eq!(d, m.transpose());
    }

    #[test]
    fn column_vector_dagger_is_untransposed_row() {
        // A map C -> C^n given by a column x has dagger xᵀ under identity forms.
        let x = ComplexMatrix::from_nested(&[vec![c(1.0, 2.0)], vec![c(0.0, -1.0)], vec![c(3.0, 0.0)]]);
        let d = dagger_adjoint(&x, &BilinearForm::identity(1), &BilinearForm::identity(3)).unwrap();
        assert_eq!(d, x.transpose());
        assert_eq!(d[(0, 0)], c(1.0, 2.0));
    }

    #[test]
    fn dagger_satisfies_defining_identity() {
        // Symplectic source form, identity target; check
        // ω_dst(m v, w) = ω_src(v, m† w) on a few vectors.
        let src = BilinearForm::standard_symplectic(4).unwrap();
        let dst = BilinearForm::identity(3);
        let m = ComplexMatrix::from_fn(3, 4, |i, j| c((i + 1) as f64 * 0.3, (j as f64) - 1.5));
        let d = dagger_adjoint(&m, &src, &dst).unwrap();
        let vs = [
            vec![ONE, ZERO, I, c(0.5, -0.5)],
            vec![c(2.0, 1.0), c(-1.0, 0.0), ZERO, ONE],
        ];
        let ws = [vec![ONE, I, ZERO], vec![c(0.0, 2.0), ONE, c(1.0, 1.0)]];
        for v in &vs {
            for w in &ws {
                let lhs = dst.eval(&m.apply(v), w);
                let rhs = src.eval(v, &d.apply(w));
                assert!((lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn dagger_antihomomorphism() {
        // (m n)† = n† m† across three spaces with mixed forms.
        let f1 = BilinearForm::standard_symplectic(2).unwrap();
        let f2 = BilinearForm::identity(3);
        let f3 = BilinearForm::anti_diagonal(4);
        let n = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64 - 0.2, 0.7 * j as f64 + 0.1));
        let m = ComplexMatrix::from_fn(4, 3, |i, j| c(0.3 * (i * j) as f64 - 0.5, i as f64 * 0.2));
        let lhs = dagger_adjoint(&(&m * &n), &f1, &f3).unwrap();
        let rhs = &dagger_adjoint(&n, &f1, &f2).unwrap() * &dagger_adjoint(&m, &f2, &f3).unwrap();
        assert!(
            (&lhs - &rhs).frobenius_norm() < 1e-12 * lhs.frobenius_norm().max(1.0)
        );
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let m = ComplexMatrix::zeros(2, 3);
        let f2 = BilinearForm::identity(2);
        assert!(dagger_adjoint(&m, &f2, &f2).is_err());
    }

    #[test]
    fn explicit_singular_form_rejected() {
        let z = ComplexMatrix::zeros(2, 2);
        assert!(BilinearForm::explicit(z).is_err());
    }
}
