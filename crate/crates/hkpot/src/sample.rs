//! Seeded random generation: Gaussian matrices, Haar elements of the compact
//! groups, and orbit-element conjugation.
//!
//! All randomness flows through explicit (seed, stream) pairs so every
//! consumer is reproducible; nothing reads ambient entropy.

use crate::algebra::{AlgebraKind, Family, OrbitElement};
use crate::error::{Error, Result};
use crate::mat::{inner, vec_norm, ComplexMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic generator for a (seed, stream) pair.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn gaussian_complex(r: &mut impl Rng) -> Complex64 {
    let re: f64 = r.sample(StandardNormal);
    let im: f64 = r.sample(StandardNormal);
    Complex64::new(re, im) / 2.0_f64.sqrt()
}

pub fn gaussian_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(r))
}

pub fn gaussian_real_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(r.sample(StandardNormal), 0.0)
    })
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = m.col(j);
        for _pass in 0..2 {
            for u in &q {
                let c = inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= c * ui;
                }
            }
        }
        let norm = vec_norm(&v);
        assert!(norm > 1e-12, "Gaussian matrix numerically rank-deficient");
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        q.push(v);
    }
    ComplexMatrix::from_cols(rows, &q)
}

/// Haar-distributed special unitary matrix.
pub fn haar_special_unitary(r: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut g = orthonormalize_columns(&gaussian_matrix(r, n, n));
    let det = g.det();
    // multiplying one column by det̄ (unit modulus) lands in SU(n)
    let fix = det.conj() / det.norm();
    let last = n - 1;
    for i in 0..n {
        g[(i, last)] *= fix;
    }
    g
}

/// Haar-distributed real special orthogonal matrix.
pub fn haar_special_orthogonal(r: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut g = orthonormalize_columns(&gaussian_real_matrix(r, n, n));
    if g.det().re < 0.0 {
        let last = n - 1;
        for i in 0..n {
            g[(i, last)] = -g[(i, last)];
        }
    }
    g
}

/// The antilinear structure map τ(x; y) = (-ȳ; x̄) on C^{2m}.
fn tau(v: &[Complex64]) -> Vec<Complex64> {
    let m = v.len() / 2;
    let mut out = vec![crate::mat::ZERO; v.len()];
    for i in 0..m {
        out[i] = -v[m + i].conj();
        out[m + i] = v[i].conj();
    }
    out
}

/// Haar-distributed element of the compact symplectic group
/// Sp(m) = U(2m) ∩ Sp(2m, C): quaternionic Gram-Schmidt builds columns in
/// τ-stable pairs.
pub fn haar_compact_symplectic(r: &mut impl Rng, m: usize) -> ComplexMatrix {
    let n = 2 * m;
    let mut first_half: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut v: Vec<Complex64> = (0..n).map(|_| gaussian_complex(r)).collect();
        for _pass in 0..2 {
            for u in &first_half {
                let c = inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= c * ui;
                }
                let tu = tau(u);
                let c = inner(&tu, &v);
                for (vi, ui) in v.iter_mut().zip(&tu) {
                    *vi -= c * ui;
                }
            }
        }
        let norm = vec_norm(&v);
        assert!(norm > 1e-12);
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        first_half.push(v);
    }
    let mut cols = first_half.clone();
    cols.extend(first_half.iter().map(|u| tau(u)));
    ComplexMatrix::from_cols(n, &cols)
}

/// A Haar element of the compact group of the element's family, at its
/// dimension: SU(n) for sl, SO(n, R) for so, Sp(n/2) for sp.
pub fn haar_compact_for(alg: AlgebraKind, seed: u64, stream: u64) -> ComplexMatrix {
    let mut r = rng(seed, stream);
    match alg.family {
        Family::Sl => haar_special_unitary(&mut r, alg.n),
        Family::So => haar_special_orthogonal(&mut r, alg.n),
        Family::Sp => haar_compact_symplectic(&mut r, alg.n / 2),
    }
}

/// Conjugates by a seeded Haar element of the compact group, g X g⁻¹.
/// Requires the standard convention (identity form for so).
pub fn random_compact_conjugate(elem: &OrbitElement, seed: u64) -> Result<OrbitElement> {
    if elem.is_antidiagonal_convention() {
        return Err(Error::WrongConvention {
            expected: "identity",
            found: "anti-diagonal",
        });
    }
    let g = haar_compact_for(elem.algebra, seed, 0);
    let x = &(&g * &elem.matrix) * &g.adjoint();
    OrbitElement::new(x, elem.algebra, elem.form.clone())
}

/// Conjugates by exp(K) for a seeded K in the complex algebra, moving the
/// element within its adjoint orbit (unlike compact conjugation, this changes
/// the spectrum of X*X). `strength` scales ‖K‖.
pub fn random_orbit_conjugate(elem: &OrbitElement, seed: u64, strength: f64) -> Result<OrbitElement> {
    if elem.is_antidiagonal_convention() {
        return Err(Error::WrongConvention {
            expected: "identity",
            found: "anti-diagonal",
        });
    }
    let n = elem.n();
    let mut r = rng(seed, 1);
    let raw = gaussian_matrix(&mut r, n, n);
    let k = match elem.algebra.family {
        Family::Sl => {
            let t = raw.trace() / Complex64::new(n as f64, 0.0);
            let mut k = raw;
            for i in 0..n {
                k[(i, i)] -= t;
            }
            k
        }
        Family::So => {
            // complex skew-symmetric
            (&raw - &raw.transpose()).scale_re(0.5)
        }
        Family::Sp => {
            // [[A, B], [C, -Aᵀ]] with B, C symmetric
            let m = n / 2;
            let a = raw.block(0, 0, m, m);
            let b0 = raw.block(0, m, m, m);
            let c0 = raw.block(m, 0, m, m);
            let b = (&b0 + &b0.transpose()).scale_re(0.5);
            let c = (&c0 + &c0.transpose()).scale_re(0.5);
            let mut k = ComplexMatrix::zeros(n, n);
            k.set_block(0, 0, &a);
            k.set_block(0, m, &b);
            k.set_block(m, 0, &c);
            k.set_block(m, m, &a.transpose().scale_re(-1.0));
            k
        }
    };
    let norm = k.frobenius_norm();
    let k = if norm > 0.0 {
        k.scale_re(strength / norm)
    } else {
        k
    };
    let g = k.expm();
    let ginv = k.scale_re(-1.0).expm();
    let x = &(&g * &elem.matrix) * &ginv;
    OrbitElement::new(x, elem.algebra, elem.form.clone())
}

/// Unitarity residual ‖g*g - 1‖.
pub fn unitarity_residual(g: &ComplexMatrix) -> f64 {
    (&(&g.adjoint() * g) - &ComplexMatrix::identity(g.rows())).frobenius_norm()
}

/// Form-preservation residual ‖gᵀ Ω g - Ω‖.
pub fn form_preservation_residual(g: &ComplexMatrix, form: &crate::form::BilinearForm) -> f64 {
    let omega = form.matrix();
    (&(&(&g.transpose() * &omega) * g) - &omega).frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::JordanType;
    use crate::eigen::hermitian_spectrum;
    use crate::jordan::jordan_representative;

    #[test]
    fn haar_unitary_is_special_and_unitary() {
        let mut r = rng(7, 0);
        let g = haar_special_unitary(&mut r, 5);
        assert!(unitarity_residual(&g) < 1e-12);
        assert!((g.det() - crate::mat::ONE).norm() < 1e-12);
    }

    #[test]
    fn haar_orthogonal_is_special_and_real() {
        let mut r = rng(3, 0);
        let g = haar_special_orthogonal(&mut r, 6);
        assert!(unitarity_residual(&g) < 1e-12);
        assert!((g.det() - crate::mat::ONE).norm() < 1e-12);
        let form = crate::form::BilinearForm::identity(6);
        assert!(form_preservation_residual(&g, &form) < 1e-12);
    }

    #[test]
    fn haar_symplectic_preserves_j() {
        let mut r = rng(11, 0);
        let g = haar_compact_symplectic(&mut r, 3);
        assert!(unitarity_residual(&g) < 1e-12);
        let form = crate::form::BilinearForm::standard_symplectic(6).unwrap();
        assert!(form_preservation_residual(&g, &form) < 1e-12);
    }

    #[test]
    fn conjugation_is_deterministic_per_seed() {
        let alg = AlgebraKind::new(Family::Sl, 4).unwrap();
        let jt = JordanType::new(vec![2, 2]).unwrap();
        let rep = jordan_representative(&jt, alg).unwrap();
        let a = random_compact_conjugate(&rep, 42).unwrap();
        let b = random_compact_conjugate(&rep, 42).unwrap();
        assert_eq!(a.matrix, b.matrix);
        let c = random_compact_conjugate(&rep, 43).unwrap();
        assert!((&a.matrix - &c.matrix).frobenius_norm() > 1e-6);
    }

    #[test]
    fn compact_conjugation_preserves_spectrum_and_membership() {
        let tol = Tolerances::default();
        for (family, n, parts) in [
            (Family::Sl, 5, vec![2, 2, 1]),
            (Family::So, 7, vec![3, 2, 2]),
            (Family::Sp, 6, vec![2, 2, 2]),
        ] {
            let alg = AlgebraKind::new(family, n).unwrap();
            let jt = JordanType::new(parts).unwrap();
            let rep = jordan_representative(&jt, alg).unwrap();
            let rep = if family == Family::So {
                crate::jordan::to_standard_form(&rep, &tol).unwrap()
            } else {
                rep
            };
            let conj = random_compact_conjugate(&rep, 17).unwrap();
            assert!(conj.validate(&tol).all_pass(), "{family:?}");
            let s0 = hermitian_spectrum(&(&rep.matrix.adjoint() * &rep.matrix), &tol).unwrap();
            let s1 = hermitian_spectrum(&(&conj.matrix.adjoint() * &conj.matrix), &tol).unwrap();
            assert_eq!(s0.groups.len(), s1.groups.len());
            for (a, b) in s0.groups.iter().zip(&s1.groups) {
                assert_eq!(a.multiplicity, b.multiplicity);
                assert!((a.value - b.value).abs() <= 1e-10 * a.value.max(1.0));
            }
        }
    }

    #[test]
    fn zero_conjugates_to_zero() {
        let alg = AlgebraKind::new(Family::Sl, 3).unwrap();
        let zero = OrbitElement::standard(ComplexMatrix::zeros(3, 3), alg).unwrap();
        let conj = random_compact_conjugate(&zero, 5).unwrap();
        assert_eq!(conj.matrix.frobenius_norm(), 0.0);
    }

    #[test]
    fn orbit_conjugation_keeps_membership_and_rank_sequence() {
        let tol = Tolerances::default();
        let alg = AlgebraKind::new(Family::So, 7).unwrap();
        let jt = JordanType::new(vec![3, 2, 2]).unwrap();
        let rep = jordan_representative(&jt, alg).unwrap();
        let std = crate::jordan::to_standard_form(&rep, &tol).unwrap();
        let moved = random_orbit_conjugate(&std, 9, 0.6).unwrap();
        assert!(moved.validate(&tol).all_pass());
        // stays in the same orbit: rank sequence unchanged
        use crate::eigen::matrix_rank;
        assert_eq!(matrix_rank(&moved.matrix, &tol).unwrap(), 4);
        assert_eq!(matrix_rank(&moved.matrix.pow(2), &tol).unwrap(), 1);
        // but the X*X spectrum genuinely moved
        let s0 = hermitian_spectrum(&(&std.matrix.adjoint() * &std.matrix), &tol).unwrap();
        let s1 = hermitian_spectrum(&(&moved.matrix.adjoint() * &moved.matrix), &tol).unwrap();
        let l0 = s0.groups[0].value;
        let l1 = s1.groups[0].value;
        assert!((l0 - l1).abs() > 1e-6 * l0.max(1.0));
    }
}
