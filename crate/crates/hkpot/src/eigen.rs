//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! The solver is deterministic: a fixed sweep order, a fixed rotation
//! convention and a fixed convergence threshold (off-diagonal Frobenius norm
//! below 1e-14 of the initial norm, at most 100 sweeps). Eigenvalues come out
//! sorted in descending order with an accumulated unitary of eigenvectors.

use crate::error::{Error, Result};
use crate::mat::ComplexMatrix;
use crate::tol::Tolerances;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;
const CONVERGENCE_FACTOR: f64 = 1e-14;

/// Eigendecomposition of a Hermitian matrix: `values[k]` belongs to the k-th
/// column of `vectors`; values are sorted in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

fn offdiag_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of the Hermitian part of `m`.
///
/// Fails if `m` is not square or its anti-Hermitian part exceeds
/// `tol.check_tol` relative to the matrix norm; the Hermitian part
/// (m + m*)/2 is what actually gets decomposed.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let scale = m.frobenius_norm();
    let asym = (m - &m.adjoint()).frobenius_norm() * 0.5;
    let asym_tol = tol.check_tol * scale.max(1.0);
    if asym > asym_tol {
        return Err(Error::NotHermitian {
            residual: asym,
            tol: asym_tol,
        });
    }

    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = CONVERGENCE_FACTOR * a.frobenius_norm();

    for _sweep in 0..MAX_SWEEPS {
        if offdiag_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= threshold / (n * n) as f64 {
                    continue;
                }
                // Phase absorbing the complex pivot, then a real 2x2 rotation.
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // G is the identity outside rows/cols p,q with block
                //   [ c           s        ]
                //   [ -s·phasē    c·phasē  ]
                let gpp = Complex64::new(c, 0.0);
                let gpq = Complex64::new(s, 0.0);
                let gqp = -s * phase.conj();
                let gqq = c * phase.conj();

                // A <- G* A G, applied as column then row updates.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * gpp + aiq * gqp;
                    a[(i, q)] = aip * gpq + aiq * gqq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = gpp.conj() * apj + gqp.conj() * aqj;
                    a[(q, j)] = gpq.conj() * apj + gqq.conj() * aqj;
                }
                // V <- V G
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * gpp + viq * gqp;
                    v[(i, q)] = vip * gpq + viq * gqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// One group of (numerically) equal eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumGroup {
    pub value: f64,
    pub multiplicity: usize,
}

/// Grouped spectrum of a positive semi-definite Hermitian matrix.
///
/// Groups are strictly decreasing; eigenvalues within
/// `grouping_tol * max(1, λ_max)` of zero are clamped to zero. Genuinely
/// negative eigenvalues are kept as-is and flagged.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub groups: Vec<SpectrumGroup>,
    pub grouping_tol: f64,
    pub has_negative: bool,
}

impl HermitianSpectrum {
    pub fn dimension(&self) -> usize {
        self.groups.iter().map(|g| g.multiplicity).sum()
    }

    /// Sum of eigenvalue * multiplicity over all groups.
    pub fn trace(&self) -> f64 {
        self.groups
            .iter()
            .map(|g| g.value * g.multiplicity as f64)
            .sum()
    }

    /// Groups with strictly positive (post-clamp) eigenvalue.
    pub fn nonzero_groups(&self) -> impl Iterator<Item = &SpectrumGroup> {
        self.groups.iter().filter(|g| g.value > 0.0)
    }
}

/// Grouped eigenvalues of the Hermitian matrix `m`.
pub fn hermitian_spectrum(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianSpectrum> {
    let eig = hermitian_eigen(m, tol)?;
    Ok(group_eigenvalues(&eig.values, tol))
}

/// Groups a descending list of eigenvalues with the relative gap rule.
pub fn group_eigenvalues(values: &[f64], tol: &Tolerances) -> HermitianSpectrum {
    let lambda_max = values.first().copied().unwrap_or(0.0);
    let scale = lambda_max.max(1.0);
    let gap = tol.eig_group * scale;

    let mut groups: Vec<SpectrumGroup> = Vec::new();
    let mut members: Vec<f64> = Vec::new();
    let flush = |members: &mut Vec<f64>, groups: &mut Vec<SpectrumGroup>| {
        if members.is_empty() {
            return;
        }
        let mean = members.iter().sum::<f64>() / members.len() as f64;
        groups.push(SpectrumGroup {
            value: mean,
            multiplicity: members.len(),
        });
        members.clear();
    };
    for &v in values {
        if let Some(&last) = members.last() {
            if last - v > gap {
                flush(&mut members, &mut groups);
            }
        }
        members.push(v);
    }
    flush(&mut members, &mut groups);

    let mut has_negative = false;
    for g in groups.iter_mut() {
        if g.value.abs() <= gap {
            g.value = 0.0;
        } else if g.value < 0.0 {
            has_negative = true;
        }
    }
    HermitianSpectrum {
        groups,
        grouping_tol: tol.eig_group,
        has_negative,
    }
}

/// Singular values of `m` (descending), via the eigenvalues of m* m.
pub fn singular_values(m: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(vec![]);
    }
    let gram = &m.adjoint() * m;
    let eig = hermitian_eigen(&gram, tol)?;
    Ok(eig.values.iter().map(|&v| v.max(0.0).sqrt()).collect())
}

/// Numerical rank: singular values above `tol.rank_cut` relative to the largest.
pub fn matrix_rank(m: &ComplexMatrix, tol: &Tolerances) -> Result<usize> {
    let sv = singular_values(m, tol)?;
    let largest = sv.first().copied().unwrap_or(0.0);
    if largest <= 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol.rank_cut * largest).count())
}

/// Deterministic factor x of a complex-symmetric rank-one matrix m = x xᵀ.
///
/// The sign is canonicalized so that the first entry of largest modulus has
/// nonnegative real part (nonnegative imaginary part on a tie at zero).
pub fn rank1_symmetric_factor(m: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let norm = m.frobenius_norm();
    let sym_res = (m - &m.transpose()).frobenius_norm() * 0.5;
    let sym_tol = tol.check_tol * norm.max(1.0);
    if sym_res > sym_tol {
        return Err(Error::NotSymmetric {
            residual: sym_res,
            tol: sym_tol,
        });
    }
    let sv = singular_values(m, tol)?;
    let largest = sv.first().copied().unwrap_or(0.0);
    if largest == 0.0 || norm == 0.0 {
        return Ok(vec![crate::mat::ZERO; n]);
    }
    if sv.len() > 1 && sv[1] > tol.rank_cut * largest {
        return Err(Error::RankAboveOne {
            second: sv[1],
            largest,
        });
    }

    // For m = x xᵀ the diagonal holds xⱼ² and column j holds xⱼ·x, so the
    // column with the largest diagonal entry recovers x.
    let mut j_star = 0;
    let mut best = 0.0;
    for j in 0..n {
        let d = m[(j, j)].norm();
        if d > best {
            best = d;
            j_star = j;
        }
    }
    if best == 0.0 {
        return Ok(vec![crate::mat::ZERO; n]);
    }
    let xj = m[(j_star, j_star)].sqrt();
    let mut x: Vec<Complex64> = m.col(j_star).iter().map(|&v| v / xj).collect();

    canonicalize_sign(&mut x);

    let recon = ComplexMatrix::outer(&x, &x);
    let residual = (&recon - m).frobenius_norm();
    if residual > tol.check_tol * norm.max(1.0) {
        return Err(Error::RankAboveOne {
            second: residual,
            largest,
        });
    }
    Ok(x)
}

/// Flips the overall sign so the first largest-modulus entry has Re ≥ 0
/// (Im ≥ 0 when that real part vanishes).
pub fn canonicalize_sign(x: &mut [Complex64]) {
    let mut idx = None;
    let mut best = 0.0;
    for (i, z) in x.iter().enumerate() {
        let m = z.norm();
        if m > best {
            best = m;
            idx = Some(i);
        }
    }
    if let Some(i) = idx {
        let z = x[i];
        let flip = z.re < 0.0 || (z.re == 0.0 && z.im < 0.0);
        if flip {
            for v in x.iter_mut() {
                *v = -*v;
            }
        }
    }
}
