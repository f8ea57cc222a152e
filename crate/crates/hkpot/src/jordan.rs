//! Canonical nilpotent representatives for the three classical families and
//! the unitary change of basis between the anti-diagonal and identity
//! quadratic-form conventions for so(n).

use crate::algebra::{AlgebraKind, Family, JordanType, OrbitElement};
use crate::error::{Error, Result};
use crate::form::BilinearForm;
use crate::mat::{ComplexMatrix, ONE, ZERO};
use crate::tol::Tolerances;
use num_complex::Complex64;

/// Jordan block of size s with ones on the superdiagonal.
pub fn jordan_block(s: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(s, s, |i, j| if j == i + 1 { ONE } else { ZERO })
}

/// Odd-size block with alternating superdiagonal signs (+1, -1, +1, ...);
/// skew about the anti-diagonal, same Jordan type as a plain block.
fn jordan_alt_block(s: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(s, s, |i, j| {
        if j == i + 1 {
            if i % 2 == 0 {
                ONE
            } else {
                -ONE
            }
        } else {
            ZERO
        }
    })
}

/// The unitary Q with Qᵀ S Q = 1 for the anti-diagonal form S, so that
/// conjugation by Q carries anti-diagonal-skew matrices to skew-symmetric
/// ones. Built from the S-isotropic pairings (e_j, e_{n+1-j}).
pub fn build_q(n: usize) -> ComplexMatrix {
    let m = n / 2;
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    let mut q = ComplexMatrix::zeros(n, n);
    for j in 0..m {
        // column j: (e_j + e_{n-1-j}) / sqrt(2)
        q[(j, j)] = Complex64::new(inv_sqrt2, 0.0);
        q[(n - 1 - j, j)] = Complex64::new(inv_sqrt2, 0.0);
        // column offset + j: -i (e_j - e_{n-1-j}) / sqrt(2)
        let col = n - m + j;
        q[(j, col)] = Complex64::new(0.0, -inv_sqrt2);
        q[(n - 1 - j, col)] = Complex64::new(0.0, inv_sqrt2);
    }
    if n % 2 == 1 {
        q[(m, m)] = ONE;
    }
    q
}

/// Anti-diagonal transpose residual: ‖Xᵀ S + S X‖.
pub fn antidiagonal_skew_residual(x: &ComplexMatrix) -> f64 {
    let n = x.rows();
    let s = BilinearForm::anti_diagonal(n).matrix();
    (&(&x.transpose() * &s) + &(&s * x)).frobenius_norm()
}

/// Converts an so(n) element from the anti-diagonal convention to the
/// identity convention: X = Q* Y Q is skew-symmetric.
pub fn to_standard_form(elem: &OrbitElement, tol: &Tolerances) -> Result<OrbitElement> {
    if elem.algebra.family != Family::So {
        return Err(Error::InvalidAlgebra(format!(
            "convention conversion is an so(n) operation, got {}",
            elem.algebra
        )));
    }
    if !elem.is_antidiagonal_convention() {
        return Err(Error::WrongConvention {
            expected: "anti-diagonal",
            found: "identity",
        });
    }
    elem.require_valid(tol, false)?;
    let q = build_q(elem.n());
    let x = &(&q.adjoint() * &elem.matrix) * &q;
    OrbitElement::standard(x, elem.algebra)
}

/// Inverse of [`to_standard_form`]: Y = Q X Q*.
pub fn to_antidiagonal_form(elem: &OrbitElement, tol: &Tolerances) -> Result<OrbitElement> {
    if elem.algebra.family != Family::So {
        return Err(Error::InvalidAlgebra(format!(
            "convention conversion is an so(n) operation, got {}",
            elem.algebra
        )));
    }
    if elem.is_antidiagonal_convention() {
        return Err(Error::WrongConvention {
            expected: "identity",
            found: "anti-diagonal",
        });
    }
    elem.require_valid(tol, false)?;
    let q = build_q(elem.n());
    let y = &(&q * &elem.matrix) * &q.adjoint();
    OrbitElement::new(y, elem.algebra, BilinearForm::anti_diagonal(elem.n()))
}

/// A nilpotent representative of the given Jordan type.
///
/// sl: plain Jordan blocks. so: anti-diagonal convention, paired blocks
/// (J_s, -J_s) arranged symmetrically with at most one alternating-sign odd
/// block in the middle; partitions with several unpaired odd parts are
/// assembled per piece in the identity convention and conjugated back.
/// sp: standard symplectic convention (see `sp_representative`).
pub fn jordan_representative(jt: &JordanType, alg: AlgebraKind) -> Result<OrbitElement> {
    jt.validate_for(alg.family)?;
    if jt.sum() != alg.n {
        return Err(Error::InvalidPartition {
            parts: jt.parts().to_vec(),
            family: alg.family.name(),
            reason: format!("partition sums to {}, algebra is {alg}", jt.sum()),
        });
    }
    match alg.family {
        Family::Sl => {
            let blocks: Vec<ComplexMatrix> = jt.parts().iter().map(|&p| jordan_block(p)).collect();
            let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
            OrbitElement::standard(ComplexMatrix::direct_sum(&refs), alg)
        }
        Family::So => so_representative(jt, alg),
        Family::Sp => sp_representative(jt, alg),
    }
}

fn so_representative(jt: &JordanType, alg: AlgebraKind) -> Result<OrbitElement> {
    let mut pairs: Vec<usize> = Vec::new();
    let mut leftovers: Vec<usize> = Vec::new();
    for s in jt.distinct_sizes() {
        let m = jt.multiplicity_of(s);
        for _ in 0..m / 2 {
            pairs.push(s);
        }
        if m % 2 == 1 {
            leftovers.push(s); // parity rule guarantees s is odd
        }
    }

    if leftovers.len() <= 1 {
        // Symmetric arrangement: B_1 .. B_r [C] -B_r .. -B_1.
        let mut blocks: Vec<ComplexMatrix> = pairs.iter().map(|&s| jordan_block(s)).collect();
        if let Some(&s) = leftovers.first() {
            blocks.push(jordan_alt_block(s));
        }
        for &s in pairs.iter().rev() {
            blocks.push(jordan_block(s).scale_re(-1.0));
        }
        let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
        let y = ComplexMatrix::direct_sum(&refs);
        OrbitElement::new(y, alg, BilinearForm::anti_diagonal(alg.n))
    } else {
        // Several unpaired odd parts cannot share the middle slot. Build each
        // piece skew-symmetric in the identity convention (conjugating the
        // piece-local anti-diagonal model by its own Q), direct-sum, and map
        // the whole thing back with Q_n.
        let mut skew_blocks: Vec<ComplexMatrix> = Vec::new();
        for &s in &pairs {
            let pair = ComplexMatrix::direct_sum(&[&jordan_block(s), &jordan_block(s).scale_re(-1.0)]);
            let q = build_q(2 * s);
            skew_blocks.push(&(&q.adjoint() * &pair) * &q);
        }
        for &s in &leftovers {
            let q = build_q(s);
            skew_blocks.push(&(&q.adjoint() * &jordan_alt_block(s)) * &q);
        }
        let refs: Vec<&ComplexMatrix> = skew_blocks.iter().collect();
        let x = ComplexMatrix::direct_sum(&refs);
        let qn = build_q(alg.n);
        let y = &(&qn * &x) * &qn.adjoint();
        OrbitElement::new(y, alg, BilinearForm::anti_diagonal(alg.n))
    }
}

/// sp(2m) representative in the form [[A, B], [0, -Aᵀ]] with B symmetric:
/// a single even block 2p contributes (A: J_p, B: E_pp); a pair (s, s)
/// contributes (A: J_s, B: 0).
fn sp_representative(jt: &JordanType, alg: AlgebraKind) -> Result<OrbitElement> {
    let mut a_blocks: Vec<ComplexMatrix> = Vec::new();
    let mut b_blocks: Vec<ComplexMatrix> = Vec::new();
    for s in jt.distinct_sizes() {
        let mult = jt.multiplicity_of(s);
        if s % 2 == 0 {
            for _ in 0..mult {
                let p = s / 2;
                a_blocks.push(jordan_block(p));
                let mut b = ComplexMatrix::zeros(p, p);
                b[(p - 1, p - 1)] = ONE;
                b_blocks.push(b);
            }
        } else {
            for _ in 0..mult / 2 {
                a_blocks.push(jordan_block(s));
                b_blocks.push(ComplexMatrix::zeros(s, s));
            }
        }
    }
    let a = ComplexMatrix::direct_sum(&a_blocks.iter().collect::<Vec<_>>());
    let b = ComplexMatrix::direct_sum(&b_blocks.iter().collect::<Vec<_>>());
    let m = a.rows();
    debug_assert_eq!(2 * m, alg.n);
    let mut x = ComplexMatrix::zeros(2 * m, 2 * m);
    x.set_block(0, 0, &a);
    x.set_block(0, m, &b);
    x.set_block(m, m, &a.transpose().scale_re(-1.0));
    OrbitElement::standard(x, alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::matrix_rank;

    fn rank_sequence_matches(elem: &OrbitElement, jt: &JordanType) -> bool {
        let tol = Tolerances::default();
        let mut power = ComplexMatrix::identity(elem.n());
        for j in 0..=jt.length() {
            if matrix_rank(&power, &tol).unwrap() != jt.rank_of_power(j) {
                return false;
            }
            power = &power * &elem.matrix;
        }
        true
    }

    #[test]
    fn q_diagonalizes_s_and_is_unitary() {
        for n in 1..=25 {
            let q = build_q(n);
            let s = BilinearForm::anti_diagonal(n).matrix();
            let qtsq = &(&q.transpose() * &s) * &q;
            let id = ComplexMatrix::identity(n);
            assert!((&qtsq - &id).max_abs() < 1e-12, "QᵀSQ failed at n={n}");
            let quq = &q.adjoint() * &q;
            assert!((&quq - &id).max_abs() < 1e-12, "unitarity failed at n={n}");
        }
    }

    #[test]
    fn sl_representative_single_block() {
        let alg = AlgebraKind::new(Family::Sl, 3).unwrap();
        let jt = JordanType::new(vec![2, 1]).unwrap();
        let rep = jordan_representative(&jt, alg).unwrap();
        assert_eq!(rep.matrix[(0, 1)], ONE);
        assert_eq!(rep.matrix.frobenius_norm(), 1.0);
        assert!(rank_sequence_matches(&rep, &jt));
    }

    #[test]
    fn so_representative_322_matches_displayed_blocks() {
        let alg = AlgebraKind::new(Family::So, 7).unwrap();
        let jt = JordanType::new(vec![3, 2, 2]).unwrap();
        let rep = jordan_representative(&jt, alg).unwrap();
        // blocks J2, alternating J3, -J2 on the diagonal
        assert_eq!(rep.matrix[(0, 1)], ONE);
        assert_eq!(rep.matrix[(2, 3)], ONE);
        assert_eq!(rep.matrix[(3, 4)], -ONE);
        assert_eq!(rep.matrix[(5, 6)], -ONE);
        assert!(antidiagonal_skew_residual(&rep.matrix) == 0.0);
        let tol = Tolerances::default();
        assert!(rep.validate(&tol).all_pass());
        assert!(rank_sequence_matches(&rep, &jt));
    }

    #[test]
    fn so_representative_square_zero_type() {
        let alg = AlgebraKind::new(Family::So, 7).unwrap();
        let jt = JordanType::new(vec![2, 2, 1, 1, 1]).unwrap();
        let rep = jordan_representative(&jt, alg).unwrap();
        let tol = Tolerances::default();
        assert!(rep.validate(&tol).all_pass());
        let x2 = rep.matrix.pow(2);
        assert!(x2.frobenius_norm() == 0.0);
        assert_eq!(matrix_rank(&rep.matrix, &tol).unwrap(), 2);
    }

    #[test]
    fn so_representative_multiple_unpaired_odds() {
        let alg = AlgebraKind::new(Family::So, 8).unwrap();
        let jt = JordanType::new(vec![5, 3]).unwrap();
        let rep = jordan_representative(&jt, alg).unwrap();
        let tol = Tolerances::default();
        let report = rep.validate(&tol);
        assert!(report.all_pass(), "{report:?}");
        assert!(rank_sequence_matches(&rep, &jt));
    }

    #[test]
    fn sp_representatives_validate() {
        let tol = Tolerances::default();
        for (n, parts) in [
            (2, vec![2]),
            (4, vec![2, 1, 1]),
            (6, vec![4, 2]),
            (6, vec![3, 3]),
            (8, vec![2, 2, 2, 2]),
        ] {
            let alg = AlgebraKind::new(Family::Sp, n).unwrap();
            let jt = JordanType::new(parts).unwrap();
            let rep = jordan_representative(&jt, alg).unwrap();
            let report = rep.validate(&tol);
            assert!(report.all_pass(), "sp {jt}: {report:?}");
            assert!(rank_sequence_matches(&rep, &jt), "rank sequence for sp {jt}");
        }
    }

    #[test]
    fn standard_form_preserves_rank_and_nilpotency() {
        let alg = AlgebraKind::new(Family::So, 7).unwrap();
        let jt = JordanType::new(vec![3, 2, 2]).unwrap();
        let rep = jordan_representative(&jt, alg).unwrap();
        let tol = Tolerances::default();
        let std = to_standard_form(&rep, &tol).unwrap();
        // skew-symmetric now
        let skew = (&std.matrix.transpose() + &std.matrix).frobenius_norm();
        assert!(skew < 1e-12 * rep.matrix.frobenius_norm());
        assert_eq!(matrix_rank(&std.matrix, &tol).unwrap(), 4);
        assert!(std.matrix.pow(3).frobenius_norm() < 1e-12);
        // round trip
        let back = to_antidiagonal_form(&std, &tol).unwrap();
        assert!((&back.matrix - &rep.matrix).frobenius_norm() < 1e-12);
    }

    #[test]
    fn rejected_partitions() {
        let so7 = AlgebraKind::new(Family::So, 7).unwrap();
        assert!(jordan_representative(&JordanType::new(vec![2, 1, 1, 1, 1, 1]).unwrap(), so7).is_err());
        let sp4 = AlgebraKind::new(Family::Sp, 4).unwrap();
        assert!(jordan_representative(&JordanType::new(vec![3, 1]).unwrap(), sp4).is_err());
    }
}
