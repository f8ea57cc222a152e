//! Classical Lie algebra conventions: families, Jordan types, membership.

use crate::error::{Error, Result};
use crate::form::{BilinearForm, FormKind};
use crate::mat::ComplexMatrix;
use crate::tol::Tolerances;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Sl,
    So,
    Sp,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Sl => "sl",
            Family::So => "so",
            Family::Sp => "sp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A classical algebra identified by family and matrix dimension n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraKind {
    pub family: Family,
    pub n: usize,
}

impl AlgebraKind {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if family == Family::Sp && n % 2 != 0 {
            return Err(Error::InvalidAlgebra(format!(
                "sp requires even matrix dimension, got {n}"
            )));
        }
        Ok(AlgebraKind { family, n })
    }

    /// Multiplicity constant: 1 for sl and sp, 2 for so.
    pub fn kappa(&self) -> f64 {
        match self.family {
            Family::So => 2.0,
            _ => 1.0,
        }
    }

    /// Parity constant: 0 for so, 1 for sp, none for sl.
    pub fn delta(&self) -> Option<usize> {
        match self.family {
            Family::So => Some(0),
            Family::Sp => Some(1),
            Family::Sl => None,
        }
    }

    /// The defining form in the standard convention: identity for so,
    /// standard symplectic for sp, identity (unused) for sl.
    pub fn standard_form(&self) -> BilinearForm {
        match self.family {
            Family::Sp => BilinearForm::standard_symplectic(self.n).expect("n validated even"),
            _ => BilinearForm::identity(self.n),
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.n)
    }
}

/// A partition of n listing Jordan block sizes, weakly decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanType {
    parts: Vec<usize>,
}

impl JordanType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition {
                parts,
                family: "any",
                reason: "parts must be positive and non-empty".into(),
            });
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(JordanType { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Size of the largest block — the diagram length k.
    pub fn length(&self) -> usize {
        self.parts[0]
    }

    pub fn multiplicity_of(&self, size: usize) -> usize {
        self.parts.iter().filter(|&&p| p == size).count()
    }

    /// Expected rank of X^j for a nilpotent of this type.
    pub fn rank_of_power(&self, j: usize) -> usize {
        self.parts.iter().map(|&p| p.saturating_sub(j)).sum()
    }

    pub fn is_zero_type(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// Parity rule: even parts pair up in so, odd parts pair up in sp.
    pub fn validate_for(&self, family: Family) -> Result<()> {
        match family {
            Family::Sl => Ok(()),
            Family::So => {
                for &s in self.distinct_sizes().iter().filter(|s| *s % 2 == 0) {
                    if self.multiplicity_of(s) % 2 != 0 {
                        return Err(Error::InvalidPartition {
                            parts: self.parts.clone(),
                            family: "so",
                            reason: format!("even part {s} must have even multiplicity"),
                        });
                    }
                }
                Ok(())
            }
            Family::Sp => {
                for &s in self.distinct_sizes().iter().filter(|s| *s % 2 == 1) {
                    if self.multiplicity_of(s) % 2 != 0 {
                        return Err(Error::InvalidPartition {
                            parts: self.parts.clone(),
                            family: "sp",
                            reason: format!("odd part {s} must have even multiplicity"),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    pub fn distinct_sizes(&self) -> Vec<usize> {
        let mut out = self.parts.clone();
        out.dedup();
        out
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.parts
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// A matrix tagged with its algebra and the quadratic-form convention under
/// which membership holds.
#[derive(Debug, Clone)]
pub struct OrbitElement {
    pub matrix: ComplexMatrix,
    pub algebra: AlgebraKind,
    pub form: BilinearForm,
}

impl OrbitElement {
    pub fn new(matrix: ComplexMatrix, algebra: AlgebraKind, form: BilinearForm) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != algebra.n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, algebra is {algebra}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if form.dim() != algebra.n {
            return Err(Error::DimensionMismatch(format!(
                "form dim {} vs algebra {algebra}",
                form.dim()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(OrbitElement {
            matrix,
            algebra,
            form,
        })
    }

    /// Standard-convention element: identity form for sl/so, symplectic J for sp.
    pub fn standard(matrix: ComplexMatrix, algebra: AlgebraKind) -> Result<Self> {
        let form = algebra.standard_form();
        Self::new(matrix, algebra, form)
    }

    pub fn n(&self) -> usize {
        self.algebra.n
    }

    pub fn is_antidiagonal_convention(&self) -> bool {
        matches!(self.form.kind(), FormKind::AntiDiagonal)
    }

    /// Membership and nilpotency residuals with per-invariant pass flags.
    pub fn validate(&self, tol: &Tolerances) -> ValidationReport {
        let x = &self.matrix;
        let norm = x.frobenius_norm();
        let membership_tol = 1e-12 * norm.max(1e-300);

        let (trace_residual, trace_pass) = match self.algebra.family {
            Family::Sl => {
                let t = x.trace().norm();
                (Some(t), t <= membership_tol)
            }
            _ => (None, true),
        };

        let (membership_residual, membership_pass) = match self.algebra.family {
            Family::Sl => (None, true),
            _ => {
                // X ∈ g  <=>  Xᵀ Ω + Ω X = 0.
                let omega = self.form.matrix();
                let res = (&(&x.transpose() * &omega) + &(&omega * x)).frobenius_norm();
                (Some(res), res <= membership_tol)
            }
        };

        // Nilpotency via traces of powers: Tr X^j = 0 for all j iff nilpotent.
        let n = self.n();
        let mut power = x.clone();
        let mut nil_res: f64 = x.trace().norm() / norm.max(1.0);
        for _j in 2..=n {
            power = &power * x;
            let denom = norm.max(1.0).powi(_j as i32);
            nil_res = nil_res.max(power.trace().norm() / denom);
        }
        let nilpotency_pass = nil_res <= tol.check_tol;

        ValidationReport {
            trace_residual,
            membership_residual,
            nilpotency_residual: nil_res,
            trace_pass,
            membership_pass,
            nilpotency_pass,
        }
    }

    /// Errors unless membership (and nilpotency, when `require_nilpotent`)
    /// holds.
    pub fn require_valid(&self, tol: &Tolerances, require_nilpotent: bool) -> Result<()> {
        let report = self.validate(tol);
        if !report.trace_pass {
            return Err(Error::Membership(format!(
                "trace residual {:.3e} for {}",
                report.trace_residual.unwrap_or(0.0),
                self.algebra
            )));
        }
        if !report.membership_pass {
            return Err(Error::Membership(format!(
                "form-compatibility residual {:.3e} for {}",
                report.membership_residual.unwrap_or(0.0),
                self.algebra
            )));
        }
        if require_nilpotent && !report.nilpotency_pass {
            return Err(Error::NotNilpotent(format!(
                "power-trace residual {:.3e}",
                report.nilpotency_residual
            )));
        }
        Ok(())
    }
}

/// Residuals reported by [`OrbitElement::validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub trace_residual: Option<f64>,
    pub membership_residual: Option<f64>,
    pub nilpotency_residual: f64,
    pub trace_pass: bool,
    pub membership_pass: bool,
    pub nilpotency_pass: bool,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.trace_pass && self.membership_pass && self.nilpotency_pass
    }
}

/// Closed-form potential routes applicable to an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Length2,
    Minimal,
    Coh2,
    BorderLift,
    Closed322,
    Cubic324,
    Sl3Regular,
    Oracle,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Length2 => "length2",
            Method::Minimal => "minimal",
            Method::Coh2 => "coh2",
            Method::BorderLift => "32k-lift",
            Method::Closed322 => "322-closed",
            Method::Cubic324 => "324-cubic",
            Method::Sl3Regular => "sl3-regular",
            Method::Oracle => "oracle",
        }
    }
}

/// How an orbit sits in the low-cohomogeneity table and which potential
/// methods can reach it.
#[derive(Debug, Clone)]
pub struct Classification {
    pub is_minimal: bool,
    pub is_coh2: bool,
    pub diagram_length: usize,
    pub methods: Vec<Method>,
}

/// Classifies a Jordan type within its algebra.
pub fn classify(jt: &JordanType, alg: AlgebraKind) -> Result<Classification> {
    jt.validate_for(alg.family)?;
    if jt.sum() != alg.n {
        return Err(Error::InvalidPartition {
            parts: jt.parts().to_vec(),
            family: alg.family.name(),
            reason: format!("partition sums to {} but algebra is {alg}", jt.sum()),
        });
    }
    let parts = jt.parts();
    let count = |s: usize| jt.multiplicity_of(s);
    // Matches partitions of the shape (s^m, 1^l).
    let pattern = |s: usize, m: usize| count(s) == m && parts.iter().all(|&p| p == s || p == 1);

    let is_minimal = match alg.family {
        Family::Sl | Family::Sp => pattern(2, 1),
        Family::So => pattern(2, 2),
    };
    let is_coh2 = match alg.family {
        Family::Sl | Family::Sp => pattern(2, 2),
        Family::So => pattern(3, 1) || pattern(2, 4),
    };

    let length = jt.length();
    let mut methods = Vec::new();
    if jt.is_zero_type() || length <= 2 {
        methods.push(Method::Length2);
    }
    if is_minimal {
        methods.push(Method::Minimal);
    }
    if is_coh2 && length <= 2 {
        methods.push(Method::Coh2);
    }
    if alg.family == Family::So && length == 3 && count(3) == 1 {
        // type (3, 2^{2k}, 1^l)
        let clean = parts.iter().all(|&p| p <= 3);
        if clean {
            methods.push(Method::BorderLift);
            if is_coh2 {
                methods.push(Method::Coh2);
            }
            if count(2) == 2 {
                methods.push(Method::Closed322);
            }
            if count(2) == 4 {
                methods.push(Method::Cubic324);
            }
        }
    }
    if alg.family == Family::Sl && alg.n == 3 && length == 3 {
        methods.push(Method::Sl3Regular);
    }
    if length <= 3 {
        methods.push(Method::Oracle);
    }

    Ok(Classification {
        is_minimal,
        is_coh2,
        diagram_length: length,
        methods,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_and_delta_constants() {
        let sl = AlgebraKind::new(Family::Sl, 4).unwrap();
        let so = AlgebraKind::new(Family::So, 7).unwrap();
        let sp = AlgebraKind::new(Family::Sp, 6).unwrap();
        assert_eq!(sl.kappa(), 1.0);
        assert_eq!(so.kappa(), 2.0);
        assert_eq!(sp.kappa(), 1.0);
        assert_eq!(sl.delta(), None);
        assert_eq!(so.delta(), Some(0));
        assert_eq!(sp.delta(), Some(1));
        assert!(AlgebraKind::new(Family::Sp, 5).is_err());
    }

    #[test]
    fn parity_rules() {
        let so = Family::So;
        let sp = Family::Sp;
        assert!(JordanType::new(vec![2, 1]).unwrap().validate_for(so).is_err());
        assert!(JordanType::new(vec![3, 2, 1]).unwrap().validate_for(so).is_err());
        assert!(JordanType::new(vec![2, 2, 1]).unwrap().validate_for(so).is_ok());
        assert!(JordanType::new(vec![3, 2, 2]).unwrap().validate_for(so).is_ok());
        assert!(JordanType::new(vec![2, 1, 1]).unwrap().validate_for(sp).is_ok());
        assert!(JordanType::new(vec![3, 1]).unwrap().validate_for(sp).is_err());
        assert!(JordanType::new(vec![3, 3, 1, 1]).unwrap().validate_for(sp).is_ok());
    }

    #[test]
    fn validate_zero_and_identity_in_sl3() {
        let alg = AlgebraKind::new(Family::Sl, 3).unwrap();
        let tol = Tolerances::default();
        let zero = OrbitElement::standard(ComplexMatrix::zeros(3, 3), alg).unwrap();
        assert!(zero.validate(&tol).all_pass());
        let id = OrbitElement::standard(ComplexMatrix::identity(3), alg).unwrap();
        let rep = id.validate(&tol);
        assert!(!rep.trace_pass);
        assert!(!rep.nilpotency_pass);
    }

    #[test]
    fn classify_table_rows() {
        let sl6 = AlgebraKind::new(Family::Sl, 6).unwrap();
        let c = classify(&JordanType::new(vec![2, 1, 1, 1, 1]).unwrap(), sl6).unwrap();
        assert!(c.is_minimal && !c.is_coh2);
        assert!(c.methods.contains(&Method::Length2));
        assert!(c.methods.contains(&Method::Minimal));

        let so9 = AlgebraKind::new(Family::So, 9).unwrap();
        let c = classify(&JordanType::new(vec![2, 2, 2, 2, 1]).unwrap(), so9).unwrap();
        assert!(c.is_coh2 && !c.is_minimal);

        let so7 = AlgebraKind::new(Family::So, 7).unwrap();
        let c = classify(&JordanType::new(vec![3, 2, 2]).unwrap(), so7).unwrap();
        assert!(!c.is_minimal && !c.is_coh2);
        assert!(c.methods.contains(&Method::BorderLift));
        assert!(c.methods.contains(&Method::Closed322));
        assert!(c.methods.contains(&Method::Oracle));
        assert_eq!(c.diagram_length, 3);

        let sp6 = AlgebraKind::new(Family::Sp, 6).unwrap();
        let c = classify(&JordanType::new(vec![2, 2, 1, 1]).unwrap(), sp6).unwrap();
        assert!(c.is_coh2);
    }
}
