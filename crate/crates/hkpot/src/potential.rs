//! Closed-form hyperKähler potential formulas: the spectral square-zero
//! formula, the minimal-orbit and cohomogeneity-two trace formulas, the
//! border lift for so(n) orbits with one size-3 block, the quartic-invariant
//! closed form for (3,2²) and the cubic-root route for (3,2⁴), plus the
//! regular sl(3) expression.

use crate::algebra::{Family, JordanType, OrbitElement};
use crate::eigen::{hermitian_spectrum, rank1_symmetric_factor, HermitianSpectrum};
use crate::error::{Error, Result};
use crate::fiber::CanonicalFiberParams;
use crate::mat::ComplexMatrix;
use crate::tol::Tolerances;
use num_complex::Complex64;

/// The unitary invariants entering the trace formulas.
#[derive(Debug, Clone, Copy)]
pub struct Invariants {
    /// Tr X X*.
    pub c1: f64,
    /// Tr Y Y* with Y = [X, X*].
    pub c2: f64,
    /// Tr X² (X*)² = ‖X²‖².
    pub c21: f64,
    /// Multiplicity constant of the algebra.
    pub kappa: f64,
}

/// Computes the trace invariants; their imaginary parts vanish by
/// construction and are checked before being discarded.
pub fn invariants(x: &OrbitElement) -> Result<Invariants> {
    let m = &x.matrix;
    let madj = m.adjoint();
    let take_real = |z: Complex64, what: &str| -> Result<f64> {
        if z.im.abs() > 1e-12 * z.norm().max(1.0) {
            return Err(Error::Invalid(format!(
                "invariant {what} has imaginary part {:.3e}",
                z.im
            )));
        }
        Ok(z.re)
    };
    let c1 = take_real((m * &madj).trace(), "c1")?;
    let y = &(m * &madj) - &(&madj * m);
    let c2 = take_real((&y * &y.adjoint()).trace(), "c2")?;
    let m2 = m.pow(2);
    let c21 = take_real((&m2 * &m2.adjoint()).trace(), "c21")?;
    Ok(Invariants {
        c1,
        c2,
        c21,
        kappa: x.algebra.kappa(),
    })
}

fn spectrum_of_gram(x: &OrbitElement, tol: &Tolerances) -> Result<HermitianSpectrum> {
    let gram = &x.matrix.adjoint() * &x.matrix;
    hermitian_spectrum(&gram, tol)
}

/// ρ = 2 Σ kᵢ √μᵢ over the grouped spectrum of X*X, valid whenever X² = 0.
pub fn potential_length2(x: &OrbitElement, tol: &Tolerances) -> Result<f64> {
    let norm = x.matrix.frobenius_norm();
    let sq = x.matrix.pow(2).frobenius_norm();
    if sq > tol.check_tol * norm.max(1.0).powi(2) {
        return Err(Error::NotNilpotent(format!(
            "X² has norm {sq:.3e}; the spectral formula needs X² = 0"
        )));
    }
    let spec = spectrum_of_gram(x, tol)?;
    if spec.has_negative {
        return Err(Error::Invalid(
            "X*X produced genuinely negative eigenvalues".into(),
        ));
    }
    Ok(rho_from_spectrum(&spec))
}

/// 2 Σ kᵢ √μᵢ for a grouped PSD spectrum.
pub fn rho_from_spectrum(spec: &HermitianSpectrum) -> f64 {
    2.0 * spec
        .groups
        .iter()
        .map(|g| g.multiplicity as f64 * g.value.max(0.0).sqrt())
        .sum::<f64>()
}

/// Minimal-orbit formula ρ = √(4κ Tr X*X).
pub fn potential_minimal(x: &OrbitElement, tol: &Tolerances) -> Result<f64> {
    let jt = detect_jordan_type(&x.matrix, tol)?;
    let class = crate::algebra::classify(&jt, x.algebra)?;
    if !class.is_minimal && !jt.is_zero_type() {
        return Err(Error::WrongJordanType {
            expected: "minimal orbit type".into(),
            found: jt.to_string(),
        });
    }
    let inv = invariants(x)?;
    Ok((4.0 * inv.kappa * inv.c1).sqrt())
}

/// Cohomogeneity-two formula ρ² = 4κc₁ + 4κ√(2c₁² - κc₂).
pub fn potential_coh2(x: &OrbitElement, tol: &Tolerances) -> Result<f64> {
    let jt = detect_jordan_type(&x.matrix, tol)?;
    let class = crate::algebra::classify(&jt, x.algebra)?;
    if !class.is_coh2 && !class.is_minimal && !jt.is_zero_type() {
        return Err(Error::WrongJordanType {
            expected: "cohomogeneity-two orbit type".into(),
            found: jt.to_string(),
        });
    }
    let inv = invariants(x)?;
    let radicand = 2.0 * inv.c1 * inv.c1 - inv.kappa * inv.c2;
    let clamped = clamp_radicand(radicand, inv.c1 * inv.c1, tol)?;
    Ok((4.0 * inv.kappa * inv.c1 + 4.0 * inv.kappa * clamped.sqrt()).sqrt())
}

/// Clamps a radicand that vanishes on boundary orbits: slightly negative
/// values (within tolerance of the natural scale) go to zero, genuinely
/// negative ones are an error.
fn clamp_radicand(value: f64, scale: f64, tol: &Tolerances) -> Result<f64> {
    if value >= 0.0 {
        return Ok(value);
    }
    let allow = tol.check_tol * scale.max(1.0);
    if value >= -allow {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand {
            value,
            tol: allow,
        })
    }
}

/// The lift of an so(n) element with X³ = 0 and rank X² ≤ 1 to a square-zero
/// element one dimension up.
#[derive(Debug, Clone)]
pub struct LiftResult {
    /// The factor with X² = x xᵀ (canonical sign).
    pub x: Vec<Complex64>,
    /// X' = [[X, x], [-xᵀ, 0]], skew-symmetric with X'² = 0.
    pub x_prime: ComplexMatrix,
}

/// Builds X' = [[X, x], [-xᵀ, 0]] from the rank-one symmetric factor of X².
pub fn border_lift(x: &OrbitElement, tol: &Tolerances) -> Result<LiftResult> {
    if x.algebra.family != Family::So {
        return Err(Error::InvalidAlgebra(format!(
            "the border lift lives in so(n), got {}",
            x.algebra
        )));
    }
    if x.is_antidiagonal_convention() {
        return Err(Error::WrongConvention {
            expected: "identity",
            found: "anti-diagonal",
        });
    }
    let m = &x.matrix;
    let n = x.n();
    let norm = m.frobenius_norm();
    let skew = (&m.transpose() + m).frobenius_norm();
    if skew > 1e-12 * norm.max(1e-300) {
        return Err(Error::Membership(format!(
            "not skew-symmetric (residual {skew:.3e})"
        )));
    }
    let m2 = m.pow(2);
    let m3 = &m2 * m;
    if m3.frobenius_norm() > tol.check_tol * norm.max(1.0).powi(3) {
        return Err(Error::NotNilpotent(format!(
            "X³ has norm {:.3e}; the lift needs X³ = 0",
            m3.frobenius_norm()
        )));
    }
    let factor = rank1_symmetric_factor(&m2, tol)?;
    let mut x_prime = ComplexMatrix::zeros(n + 1, n + 1);
    x_prime.set_block(0, 0, m);
    for i in 0..n {
        x_prime[(i, n)] = factor[i];
        x_prime[(n, i)] = -factor[i];
    }
    Ok(LiftResult {
        x: factor,
        x_prime,
    })
}

/// Potential of an so(n) element of type (3, 2^{2k}, 1^l) via the lift:
/// ρ = 2 Σ kᵢ √μᵢ over spec(X'X'*). Nonzero groups must appear with even
/// multiplicity; an odd group signals an eigenvalue-grouping failure.
pub fn potential_32k(x: &OrbitElement, tol: &Tolerances) -> Result<f64> {
    let lift = border_lift(x, tol)?;
    let gram = &lift.x_prime.adjoint() * &lift.x_prime;
    let spec = hermitian_spectrum(&gram, tol)?;
    if spec.has_negative {
        return Err(Error::Invalid(
            "X'X'* produced genuinely negative eigenvalues".into(),
        ));
    }
    for g in spec.nonzero_groups() {
        if g.multiplicity % 2 != 0 {
            return Err(Error::MultiplicityParity {
                value: g.value,
                multiplicity: g.multiplicity,
            });
        }
    }
    Ok(rho_from_spectrum(&spec))
}

/// Closed form for so(n) type (3, 2², 1^{n-7}):
/// ρ² = 8c₁ + 16√c₂₁ + 16√(c₁² - c₂ - 2c₂₁).
pub fn potential_322_closed(x: &OrbitElement, tol: &Tolerances) -> Result<f64> {
    if x.algebra.family != Family::So {
        return Err(Error::InvalidAlgebra(format!(
            "the (3,2²) closed form lives in so(n), got {}",
            x.algebra
        )));
    }
    let jt = detect_jordan_type(&x.matrix, tol)?;
    let is_322 = jt.multiplicity_of(3) == 1
        && jt.multiplicity_of(2) == 2
        && jt.parts().iter().all(|&p| p <= 3);
    // boundary degenerations (v -> 0 etc.) are still served by the formula
    let is_boundary = jt.parts().iter().all(|&p| p <= 3)
        && jt.multiplicity_of(3) <= 1
        && jt.multiplicity_of(2) <= 2;
    if !is_322 && !is_boundary {
        return Err(Error::WrongJordanType {
            expected: "(3,2,2,1...)".into(),
            found: jt.to_string(),
        });
    }
    let inv = invariants(x)?;
    let inner = inv.c1 * inv.c1 - inv.c2 - 2.0 * inv.c21;
    let inner = clamp_radicand(inner, inv.c1 * inv.c1, tol)?;
    let rho_sq = 8.0 * inv.c1 + 16.0 * inv.c21.sqrt() + 16.0 * inner.sqrt();
    Ok(rho_sq.sqrt())
}

/// Coefficients of the monic cubic z³ - p z² + q z - r whose roots are the
/// distinct double eigenvalues of X'X'* for the (3,2⁴) family.
#[derive(Debug, Clone, Copy)]
pub struct CubicCoeffs {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl CubicCoeffs {
    /// From the fiber parameters: p = 2|a|² + |b|² + |v|² + |w|²,
    /// q = |ζ|² + |b|²|w|² + 2|a|²(|v|² + |w|²), r = |a|²|ζ|².
    pub fn from_params(params: &CanonicalFiberParams) -> Result<Self> {
        let w2 = match &params.w {
            Some(_) => params.w_norm_sqr(),
            None => {
                return Err(Error::InvalidFiber(
                    "the cubic route needs the (3,2⁴) parameters (w present)".into(),
                ))
            }
        };
        let a2 = params.a.norm_sqr();
        let b2 = params.b.norm_sqr();
        let v2 = params.v_norm_sqr();
        let zeta2 = params.zeta().norm_sqr();
        Ok(CubicCoeffs {
            p: 2.0 * a2 + b2 + v2 + w2,
            q: zeta2 + b2 * w2 + 2.0 * a2 * (v2 + w2),
            r: a2 * zeta2,
        })
    }
}

/// Descending real roots of z³ - pz² + qz - r, which must be real and
/// nonnegative within tolerance. Solved trigonometrically with a Newton
/// polish; the Hermitian eigensolver cannot host the non-normal companion
/// matrix, so the depressed-cubic route is used instead.
pub fn cubic_roots(coeffs: &CubicCoeffs, tol: &Tolerances) -> Result<[f64; 3]> {
    let (p, q, r) = (coeffs.p, coeffs.q, coeffs.r);
    let scale = p.abs().max(q.abs().sqrt()).max(r.abs().cbrt()).max(1.0);
    let big_p = q - p * p / 3.0;
    let big_q = -2.0 * p * p * p / 27.0 + p * q / 3.0 - r;

    let mut roots = if big_p < 0.0 {
        let m = 2.0 * (-big_p / 3.0).sqrt();
        let arg = 3.0 * big_q / (big_p * m);
        let defect = arg.abs() - 1.0;
        if defect > tol.check_tol {
            return Err(Error::ComplexRoots { defect });
        }
        let theta = arg.clamp(-1.0, 1.0).acos() / 3.0;
        [0usize, 1, 2].map(|k| {
            m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + p / 3.0
        })
    } else {
        // big_p >= 0 with three real roots forces a (near-)triple root
        let p_defect = big_p / (scale * scale);
        let q_defect = big_q.abs() / (scale * scale * scale);
        if p_defect > tol.check_tol || q_defect > tol.check_tol {
            return Err(Error::ComplexRoots {
                defect: p_defect.max(q_defect),
            });
        }
        [p / 3.0; 3]
    };

    // Newton polish on the original cubic
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((*z - p) * *z + q) * *z - r;
            let df = (3.0 * *z - 2.0 * p) * *z + q;
            if df.abs() > 1e-8 * scale * scale {
                *z -= f / df;
            }
        }
    }
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for z in roots.iter_mut() {
        if *z < 0.0 {
            if *z >= -tol.check_tol * scale {
                *z = 0.0;
            } else {
                return Err(Error::ComplexRoots { defect: -*z / scale });
            }
        }
    }
    Ok(roots)
}

/// Result of the cubic route for the (3,2⁴) family.
#[derive(Debug, Clone)]
pub struct Cubic324 {
    pub coeffs: CubicCoeffs,
    /// Descending roots; each is a double eigenvalue of X'X'*.
    pub roots: [f64; 3],
    pub rho: f64,
}

/// Potential of the (3,2⁴) fiber from its parameters alone.
///
/// The cubic roots λᵢ are the distinct double eigenvalues of X'X'*, so the
/// spectral formula gives ρ = 2 · Σ 2√λᵢ.
pub fn potential_324_cubic(params: &CanonicalFiberParams, tol: &Tolerances) -> Result<Cubic324> {
    let coeffs = CubicCoeffs::from_params(params)?;
    let roots = cubic_roots(&coeffs, tol)?;
    let rho = 4.0 * roots.iter().map(|&z| z.sqrt()).sum::<f64>();
    Ok(Cubic324 { coeffs, roots, rho })
}

/// Regular-orbit potential in sl(3) for the strictly upper-triangular
/// element with entries (a, b, c): ρ = 2√((|a|^{2/3} + |c|^{2/3})³ + |b|²).
/// Moduli make the expression conjugation-invariant for complex entries.
pub fn potential_sl3_regular(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let s = a.norm().powf(2.0 / 3.0) + c.norm().powf(2.0 / 3.0);
    2.0 * (s.powi(3) + b.norm_sqr()).sqrt()
}

/// Unitary triangularization of a 3x3 nilpotent: returns (a, b, c) with
/// X unitarily similar to [[0,a,b],[0,0,c],[0,0,0]]. Feeds arbitrary sl(3)
/// elements into the regular formula.
pub fn sl3_triangular_params(x: &OrbitElement, tol: &Tolerances) -> Result<(Complex64, Complex64, Complex64)> {
    if x.algebra.family != Family::Sl || x.n() != 3 {
        return Err(Error::InvalidAlgebra(format!(
            "triangularization targets sl(3), got {}",
            x.algebra
        )));
    }
    x.require_valid(tol, true)?;
    let m = &x.matrix;
    let norm = m.frobenius_norm();
    if norm == 0.0 {
        return Ok((crate::mat::ZERO, crate::mat::ZERO, crate::mat::ZERO));
    }

    // v1 spans ker X (the smallest eigenvector of X*X);
    // v2 in v1-perp with X v2 ∈ span(v1); v3 completes the frame.
    let gram = &m.adjoint() * m;
    let eig = crate::eigen::hermitian_eigen(&gram, tol)?;
    let v1 = eig.vectors.col(2);

    let proj_out = |v: &mut Vec<Complex64>, u: &[Complex64]| {
        let c = crate::mat::inner(u, v);
        for (vi, ui) in v.iter_mut().zip(u) {
            *vi -= c * ui;
        }
    };

    // kernel of P X where P projects off v1
    let px = ComplexMatrix::from_fn(3, 3, |i, j| {
        let mut s = m[(i, j)];
        for l in 0..3 {
            s -= v1[i] * v1[l].conj() * m[(l, j)];
        }
        s
    });
    let pxg = &px.adjoint() * &px;
    let eig2 = crate::eigen::hermitian_eigen(&pxg, tol)?;
    // two smallest eigenvectors span { v : Xv ∈ span v1 }
    let mut v2 = eig2.vectors.col(2);
    proj_out(&mut v2, &v1);
    if crate::mat::vec_norm(&v2) < 1e-8 {
        v2 = eig2.vectors.col(1);
        proj_out(&mut v2, &v1);
    }
    let n2 = crate::mat::vec_norm(&v2);
    if n2 < 1e-10 {
        return Err(Error::Invalid("failed to build triangularizing frame".into()));
    }
    for z in v2.iter_mut() {
        *z /= n2;
    }

    let mut v3 = vec![crate::mat::ZERO; 3];
    // deterministic completion: try standard basis vectors
    for basis in 0..3 {
        let mut cand = vec![crate::mat::ZERO; 3];
        cand[basis] = crate::mat::ONE;
        proj_out(&mut cand, &v1);
        proj_out(&mut cand, &v2);
        if crate::mat::vec_norm(&cand) > 0.5 {
            let nn = crate::mat::vec_norm(&cand);
            for z in cand.iter_mut() {
                *z /= nn;
            }
            v3 = cand;
            break;
        }
    }
    if crate::mat::vec_norm(&v3) == 0.0 {
        // fall back to any nonzero completion
        for basis in 0..3 {
            let mut cand = vec![crate::mat::ZERO; 3];
            cand[basis] = crate::mat::ONE;
            proj_out(&mut cand, &v1);
            proj_out(&mut cand, &v2);
            let nn = crate::mat::vec_norm(&cand);
            if nn > 1e-8 {
                for z in cand.iter_mut() {
                    *z /= nn;
                }
                v3 = cand;
                break;
            }
        }
    }

    let a = crate::mat::inner(&v1, &m.apply(&v2));
    let b = crate::mat::inner(&v1, &m.apply(&v3));
    let c = crate::mat::inner(&v2, &m.apply(&v3));
    // residual check: X v2 - a v1 and X v3 - b v1 - c v2 must vanish
    let xv2 = m.apply(&v2);
    let r2: f64 = xv2
        .iter()
        .enumerate()
        .map(|(i, z)| (z - a * v1[i]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let xv3 = m.apply(&v3);
    let r3: f64 = xv3
        .iter()
        .enumerate()
        .map(|(i, z)| (z - b * v1[i] - c * v2[i]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if r2.max(r3) > tol.check_tol * norm.max(1.0) {
        return Err(Error::Invalid(format!(
            "triangularization residual {:.3e}",
            r2.max(r3)
        )));
    }
    Ok((a, b, c))
}

/// Jordan type from the numerical rank sequence of X^j.
pub fn detect_jordan_type(m: &ComplexMatrix, tol: &Tolerances) -> Result<JordanType> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut ranks = vec![n];
    let mut power = ComplexMatrix::identity(n);
    for _j in 1..=n {
        power = &power * m;
        let r = crate::eigen::matrix_rank(&power, tol)?;
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    if *ranks.last().unwrap() != 0 {
        return Err(Error::NotNilpotent(format!(
            "rank sequence never reaches zero (ends at {})",
            ranks.last().unwrap()
        )));
    }
    let k = ranks.len() - 1;
    // number of parts >= m is ranks[m-1] - ranks[m]
    let mut parts = Vec::new();
    for block in 1..=k {
        let count_ge_block = ranks[block - 1] - ranks[block];
        let count_ge_next = if block < k {
            ranks[block] - ranks[block + 1]
        } else {
            0
        };
        if count_ge_block < count_ge_next {
            return Err(Error::Invalid(
                "rank sequence is not monotone; rank detection failed".into(),
            ));
        }
        for _ in 0..(count_ge_block - count_ge_next) {
            parts.push(block);
        }
    }
    JordanType::new(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraKind, Family, OrbitElement};
    use crate::fiber::{canonical_fiber, CanonicalFiberParams, FiberVariant};
    use crate::jordan::{jordan_representative, to_standard_form};
    use crate::mat::ZERO;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn block_a(values: &[f64], pad: usize) -> OrbitElement {
        let k = values.len();
        let n = 2 * k + pad;
        let mut m = ComplexMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, k + i)] = Complex64::new(v, 0.0);
        }
        OrbitElement::standard(m, AlgebraKind::new(Family::Sl, n).unwrap()).unwrap()
    }

    #[test]
    fn invariants_of_block_matrix() {
        // A = diag(a1, a2): c1 = a1² + a2², c2 = 2(a1⁴ + a2⁴), c21 = 0.
        let x = block_a(&[3.0, 4.0], 0);
        let inv = invariants(&x).unwrap();
        assert!((inv.c1 - 25.0).abs() < 1e-12);
        assert!((inv.c2 - 2.0 * (81.0 + 256.0)).abs() < 1e-10);
        assert!(inv.c21.abs() < 1e-20);
        assert_eq!(inv.kappa, 1.0);
    }

    #[test]
    fn invariants_of_zero() {
        let alg = AlgebraKind::new(Family::Sl, 3).unwrap();
        let x = OrbitElement::standard(ComplexMatrix::zeros(3, 3), alg).unwrap();
        let inv = invariants(&x).unwrap();
        assert_eq!((inv.c1, inv.c2, inv.c21), (0.0, 0.0, 0.0));
    }

    #[test]
    fn length2_block_value_exact() {
        let tol = Tolerances::default();
        let x = block_a(&[3.0, 4.0], 0);
        let rho = potential_length2(&x, &tol).unwrap();
        assert!((rho - 14.0).abs() < 1e-12);
        let coh2 = potential_coh2(&x, &tol).unwrap();
        assert!((coh2 - 14.0).abs() < 1e-12);
    }

    #[test]
    fn length2_rejects_higher_nilpotency() {
        let tol = Tolerances::default();
        let alg = AlgebraKind::new(Family::Sl, 3).unwrap();
        let jt = crate::algebra::JordanType::new(vec![3]).unwrap();
        let x = jordan_representative(&jt, alg).unwrap();
        assert!(potential_length2(&x, &tol).is_err());
    }

    #[test]
    fn minimal_orbit_value() {
        let tol = Tolerances::default();
        // a · E_12 in sl(2): rho = 2|a|
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = c(0.0, 2.5);
        let x = OrbitElement::standard(m, AlgebraKind::new(Family::Sl, 2).unwrap()).unwrap();
        let rho = potential_minimal(&x, &tol).unwrap();
        assert!((rho - 5.0).abs() < 1e-12);
        let rho2 = potential_length2(&x, &tol).unwrap();
        assert!((rho - rho2).abs() < 1e-12);
    }

    #[test]
    fn zero_element_gives_zero_everywhere() {
        let tol = Tolerances::default();
        let alg = AlgebraKind::new(Family::Sl, 4).unwrap();
        let x = OrbitElement::standard(ComplexMatrix::zeros(4, 4), alg).unwrap();
        assert_eq!(potential_length2(&x, &tol).unwrap(), 0.0);
        assert_eq!(potential_minimal(&x, &tol).unwrap(), 0.0);
        assert_eq!(potential_coh2(&x, &tol).unwrap(), 0.0);
    }

    #[test]
    fn border_lift_of_square_zero_is_trivial_embedding() {
        let tol = Tolerances::default();
        let alg = AlgebraKind::new(Family::So, 7).unwrap();
        let jt = crate::algebra::JordanType::new(vec![2, 2, 1, 1, 1]).unwrap();
        let rep = jordan_representative(&jt, alg).unwrap();
        let x = to_standard_form(&rep, &tol).unwrap();
        let lift = border_lift(&x, &tol).unwrap();
        assert!(lift.x.iter().all(|z| *z == ZERO));
        let rho_lift = potential_32k(&x, &tol).unwrap();
        let rho_l2 = potential_length2(&x, &tol).unwrap();
        assert!((rho_lift - rho_l2).abs() < 1e-12 * rho_l2.max(1.0));
    }

    #[test]
    fn border_lift_produces_square_zero() {
        let tol = Tolerances::default();
        let p = CanonicalFiberParams::f322(c(1.0, 0.3), c(0.2, -0.7), c(0.8, 0.1));
        let y = canonical_fiber(&p, FiberVariant::F322, 0).unwrap();
        let x = to_standard_form(&y, &tol).unwrap();
        let lift = border_lift(&x, &tol).unwrap();
        let sq = lift.x_prime.pow(2).frobenius_norm();
        assert!(sq < 1e-10 * x.matrix.frobenius_norm().powi(2).max(1.0));
        let skew = (&lift.x_prime.transpose() + &lift.x_prime).frobenius_norm();
        assert!(skew < 1e-12);
        // ‖x‖² = |a|²
        let xn: f64 = lift.x.iter().map(|z| z.norm_sqr()).sum();
        assert!((xn - p.a.norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn lift_rejects_two_three_blocks() {
        let tol = Tolerances::default();
        let alg = AlgebraKind::new(Family::So, 9).unwrap();
        let jt = crate::algebra::JordanType::new(vec![3, 3, 3]).unwrap();
        let rep = jordan_representative(&jt, alg).unwrap();
        let x = to_standard_form(&rep, &tol).unwrap();
        assert!(border_lift(&x, &tol).is_err());
    }

    #[test]
    fn cubic_degenerate_cases() {
        let tol = Tolerances::default();
        // a = 0, w = 0: roots (p, 0, 0)
        let params = CanonicalFiberParams::f324(
            ZERO,
            c(2.0, 0.0),
            [c(1.0, 0.0), ZERO, ZERO],
            [ZERO, ZERO, ZERO],
        );
        let out = potential_324_cubic(&params, &tol).unwrap();
        assert!((out.coeffs.p - 5.0).abs() < 1e-14);
        assert!(out.coeffs.q.abs() < 1e-14 && out.coeffs.r.abs() < 1e-14);
        assert!((out.roots[0] - 5.0).abs() < 1e-10);
        assert!(out.roots[1].abs() < 1e-10 && out.roots[2].abs() < 1e-10);
        // zeta = 0 with a != 0: r = 0, a zero root
        let params = CanonicalFiberParams::f324(
            c(1.0, 0.0),
            c(0.5, 0.0),
            [c(1.0, 0.0), ZERO, ZERO],
            [ZERO, c(1.0, 0.0), ZERO],
        );
        let out = potential_324_cubic(&params, &tol).unwrap();
        assert!(out.coeffs.r.abs() < 1e-14);
        assert!(out.roots[2].abs() < 1e-10);
    }

    #[test]
    fn sl3_regular_values() {
        let one = c(1.0, 0.0);
        assert!((potential_sl3_regular(one, one, one) - 6.0).abs() < 1e-14);
        let v = potential_sl3_regular(one, ZERO, one);
        assert!((v - 32.0_f64.sqrt()).abs() < 1e-14);
        // a = c = 0 degenerates to the minimal orbit: 2|b|
        let v = potential_sl3_regular(ZERO, c(0.0, 3.0), ZERO);
        assert!((v - 6.0).abs() < 1e-14);
    }

    #[test]
    fn sl3_triangular_params_recover_formula() {
        let tol = Tolerances::default();
        let m = ComplexMatrix::from_nested(&[
            vec![ZERO, c(1.0, 0.0), c(1.0, 0.0)],
            vec![ZERO, ZERO, c(1.0, 0.0)],
            vec![ZERO, ZERO, ZERO],
        ]);
        let x = OrbitElement::standard(m, AlgebraKind::new(Family::Sl, 3).unwrap()).unwrap();
        let (a, b, c_) = sl3_triangular_params(&x, &tol).unwrap();
        let rho = potential_sl3_regular(a, b, c_);
        assert!((rho - 6.0).abs() < 1e-9, "rho = {rho}");
        // conjugated element gives the same value
        let moved = crate::sample::random_compact_conjugate(&x, 3).unwrap();
        let (a, b, c_) = sl3_triangular_params(&moved, &tol).unwrap();
        let rho2 = potential_sl3_regular(a, b, c_);
        assert!((rho2 - 6.0).abs() < 1e-9, "rho2 = {rho2}");
    }

    #[test]
    fn detect_jordan_type_examples() {
        let tol = Tolerances::default();
        let alg = AlgebraKind::new(Family::Sl, 5).unwrap();
        let jt = crate::algebra::JordanType::new(vec![3, 2]).unwrap();
        let x = jordan_representative(&jt, alg).unwrap();
        let detected = detect_jordan_type(&x.matrix, &tol).unwrap();
        assert_eq!(detected.parts(), &[3, 2]);
        let z = ComplexMatrix::zeros(4, 4);
        assert_eq!(detect_jordan_type(&z, &tol).unwrap().parts(), &[1, 1, 1, 1]);
        assert!(detect_jordan_type(&ComplexMatrix::identity(3), &tol).is_err());
    }
}
