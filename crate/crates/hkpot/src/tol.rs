/// Numerical tolerances used across the library.
///
/// All fields are relative tolerances against a problem-dependent scale
/// (documented per operation). They must be strictly positive.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative gap under which two eigenvalues are grouped together.
    pub eig_group: f64,
    /// Relative cutoff on singular values when computing ranks.
    pub rank_cut: f64,
    /// Residual target for the moment-map solver.
    pub solve_tol: f64,
    /// General relative tolerance for consistency checks.
    pub check_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eig_group: 1e-8,
            rank_cut: 1e-10,
            solve_tol: 1e-10,
            check_tol: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::error::Result<()> {
        for (name, v) in [
            ("eig_group", self.eig_group),
            ("rank_cut", self.rank_cut),
            ("solve_tol", self.solve_tol),
            ("check_tol", self.check_tol),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(crate::error::Error::Invalid(format!(
                    "tolerance {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}
