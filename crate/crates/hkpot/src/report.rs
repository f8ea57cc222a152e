//! Dispatch: detect the orbit, run every applicable potential route, compare
//! the answers pairwise and (optionally) against the moment-map solver.

use crate::algebra::{classify, JordanType, Method, OrbitElement};
use crate::eigen::{hermitian_spectrum, HermitianSpectrum};
use crate::error::Result;
use crate::jordan::to_standard_form;
use crate::potential::{
    border_lift, detect_jordan_type, invariants, potential_322_closed, potential_coh2,
    potential_length2, potential_minimal, potential_sl3_regular, potential_32k,
    sl3_triangular_params, Invariants,
};
use crate::quiver::{psi, radial_norm, Diagram};
use crate::solve::{solve_moment, SolveOptions};
use crate::tol::Tolerances;
use std::collections::BTreeMap;

/// Oracle configuration for [`compute_all`].
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub seed: u64,
    pub max_restarts: usize,
    /// Additional solves from derived seeds; the spread of r² across them is
    /// reported (boundary strata may have positive-dimensional fibers).
    pub extra_seeds: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            seed: 0,
            max_restarts: 8,
            extra_seeds: 0,
        }
    }
}

/// Oracle outcome attached to a report.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub r2: f64,
    pub rho: f64,
    pub residual: f64,
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    pub spread: Option<f64>,
}

/// One method's outcome.
#[derive(Debug, Clone)]
pub enum MethodOutcome {
    Value(f64),
    Failed(String),
}

impl MethodOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            MethodOutcome::Value(v) => Some(*v),
            MethodOutcome::Failed(_) => None,
        }
    }
}

/// Everything [`compute_all`] learns about an element.
#[derive(Debug, Clone)]
pub struct PotentialReport {
    pub jordan_type: JordanType,
    pub invariants: Invariants,
    pub spectrum: HermitianSpectrum,
    pub lift_spectrum: Option<HermitianSpectrum>,
    pub methods: BTreeMap<&'static str, MethodOutcome>,
    pub max_pairwise_deviation: f64,
    pub oracle: Option<OracleReport>,
    pub flags: Vec<String>,
}

impl PotentialReport {
    pub fn successful_values(&self) -> Vec<(&'static str, f64)> {
        self.methods
            .iter()
            .filter_map(|(k, v)| v.value().map(|x| (*k, x)))
            .collect()
    }
}

/// Runs every closed form applicable to X plus (optionally) the solver, and
/// reports values, residuals and pairwise deviations. Method-level failures
/// are recorded, never thrown.
pub fn compute_all(
    x: &OrbitElement,
    tol: &Tolerances,
    claimed_type: Option<&JordanType>,
    oracle: Option<OracleOptions>,
) -> Result<PotentialReport> {
    x.require_valid(tol, true)?;

    // all formulas want the identity convention; convert up front
    let mut flags = Vec::new();
    let std_x = if x.is_antidiagonal_convention() {
        flags.push("converted-to-identity-convention".to_string());
        to_standard_form(x, tol)?
    } else {
        x.clone()
    };

    let jt = detect_jordan_type(&std_x.matrix, tol)?;
    if let Some(claimed) = claimed_type {
        if claimed.parts() != jt.parts() {
            flags.push(format!(
                "jordan-type-mismatch: claimed {claimed}, detected {jt}"
            ));
        }
    }
    if jt.is_zero_type() {
        flags.push("trivial".to_string());
    }

    let class = classify(&jt, std_x.algebra)?;
    let inv = invariants(&std_x)?;
    let gram = &std_x.matrix.adjoint() * &std_x.matrix;
    let spectrum = hermitian_spectrum(&gram, tol)?;
    if spectrum.has_negative {
        flags.push("negative-eigenvalues".to_string());
    }

    let mut methods: BTreeMap<&'static str, MethodOutcome> = BTreeMap::new();
    let mut lift_spectrum = None;

    for method in &class.methods {
        match method {
            Method::Length2 => {
                methods.insert(
                    Method::Length2.name(),
                    outcome(potential_length2(&std_x, tol)),
                );
            }
            Method::Minimal => {
                methods.insert(
                    Method::Minimal.name(),
                    outcome(potential_minimal(&std_x, tol)),
                );
            }
            Method::Coh2 => {
                methods.insert(Method::Coh2.name(), outcome(potential_coh2(&std_x, tol)));
            }
            Method::BorderLift => {
                methods.insert(
                    Method::BorderLift.name(),
                    outcome(potential_32k(&std_x, tol)),
                );
                if let Ok(lift) = border_lift(&std_x, tol) {
                    let g = &lift.x_prime.adjoint() * &lift.x_prime;
                    lift_spectrum = hermitian_spectrum(&g, tol).ok();
                }
            }
            Method::Closed322 => {
                methods.insert(
                    Method::Closed322.name(),
                    outcome(potential_322_closed(&std_x, tol)),
                );
            }
            Method::Cubic324 => {
                // fiber-parameter route; not reachable from a bare matrix
            }
            Method::Sl3Regular => {
                let res = sl3_triangular_params(&std_x, tol)
                    .map(|(a, b, c)| potential_sl3_regular(a, b, c));
                methods.insert(Method::Sl3Regular.name(), outcome(res));
            }
            Method::Oracle => {}
        }
    }

    let oracle_report = match oracle {
        Some(opts) if class.methods.contains(&Method::Oracle) => {
            Some(run_oracle(&std_x, &jt, &opts, tol, &mut flags)?)
        }
        Some(_) => {
            flags.push("oracle-unsupported-diagram-length".to_string());
            None
        }
        None => None,
    };
    if let Some(o) = &oracle_report {
        methods.insert(Method::Oracle.name(), MethodOutcome::Value(o.rho));
    }

    let values: Vec<f64> = methods.values().filter_map(|m| m.value()).collect();
    let max_pairwise_deviation = pairwise_deviation(&values);

    Ok(PotentialReport {
        jordan_type: jt,
        invariants: inv,
        spectrum,
        lift_spectrum,
        methods,
        max_pairwise_deviation,
        oracle: oracle_report,
        flags,
    })
}

fn outcome(r: Result<f64>) -> MethodOutcome {
    match r {
        Ok(v) => MethodOutcome::Value(v),
        Err(e) => MethodOutcome::Failed(e.to_string()),
    }
}

pub fn pairwise_deviation(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    (max - min) / max.abs().max(1e-300)
}

fn run_oracle(
    std_x: &OrbitElement,
    jt: &JordanType,
    opts: &OracleOptions,
    tol: &Tolerances,
    flags: &mut Vec<String>,
) -> Result<OracleReport> {
    // zero element: nothing to solve
    if jt.is_zero_type() {
        return Ok(OracleReport {
            r2: 0.0,
            rho: 0.0,
            residual: 0.0,
            iterations: 0,
            restarts: 0,
            seed: opts.seed,
            spread: None,
        });
    }
    let diagram = Diagram::for_orbit(jt, std_x.algebra)?;
    let solve_opts = SolveOptions {
        init_seed: opts.seed,
        max_restarts: opts.max_restarts,
    };
    let (point, diag) = solve_moment(&diagram, &std_x.matrix, &solve_opts, tol)?;
    if diag.boundary {
        flags.push("boundary-stratum".to_string());
    }
    let r2 = radial_norm(&point);
    debug_assert!(
        (&psi(&diagram, &point) - &std_x.matrix).frobenius_norm()
            <= 10.0 * tol.solve_tol * std_x.matrix.frobenius_norm().max(1.0)
    );
    let mut spread = None;
    if opts.extra_seeds > 0 {
        let mut values = vec![r2];
        for extra in 0..opts.extra_seeds {
            let alt = SolveOptions {
                init_seed: opts.seed.wrapping_add(1 + extra as u64).wrapping_mul(0x9e3779b97f4a7c15),
                max_restarts: opts.max_restarts,
            };
            if let Ok((p, _)) = solve_moment(&diagram, &std_x.matrix, &alt, tol) {
                values.push(radial_norm(&p));
            }
        }
        spread = Some(pairwise_deviation(&values));
    }
    Ok(OracleReport {
        r2,
        rho: r2,
        residual: diag.residual,
        iterations: diag.iterations,
        restarts: diag.restarts,
        seed: opts.seed,
        spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraKind;
    use crate::mat::ComplexMatrix;
    use num_complex::Complex64;

    fn block_a_sl4() -> OrbitElement {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 2)] = Complex64::new(3.0, 0.0);
        m[(1, 3)] = Complex64::new(4.0, 0.0);
        OrbitElement::standard(m, AlgebraKind::new(Family::Sl, 4).unwrap()).unwrap()
    }

    #[test]
    fn report_on_block_matrix() {
        let tol = Tolerances::default();
        let x = block_a_sl4();
        let report = compute_all(&x, &tol, None, None).unwrap();
        assert_eq!(report.jordan_type.parts(), &[2, 2]);
        let vals = report.successful_values();
        assert!(vals.len() >= 2);
        for (name, v) in &vals {
            assert!((v - 14.0).abs() < 1e-9, "{name} gave {v}");
        }
        assert!(report.max_pairwise_deviation < 1e-10);
    }

    #[test]
    fn report_with_oracle() {
        let tol = Tolerances::default();
        let x = block_a_sl4();
        let report = compute_all(&x, &tol, None, Some(OracleOptions::default())).unwrap();
        let oracle = report.oracle.unwrap();
        assert!((oracle.rho - 14.0).abs() < 1e-5 * 14.0);
        assert!(oracle.residual <= tol.solve_tol * 5.0);
    }

    #[test]
    fn zero_element_report() {
        let tol = Tolerances::default();
        let alg = AlgebraKind::new(Family::Sl, 3).unwrap();
        let x = OrbitElement::standard(ComplexMatrix::zeros(3, 3), alg).unwrap();
        let report = compute_all(&x, &tol, None, Some(OracleOptions::default())).unwrap();
        assert!(report.flags.iter().any(|f| f == "trivial"));
        for (_, v) in report.successful_values() {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn mismatch_between_claimed_and_detected_is_flagged() {
        let tol = Tolerances::default();
        let x = block_a_sl4();
        let claimed = JordanType::new(vec![2, 1, 1]).unwrap();
        let report = compute_all(&x, &tol, Some(&claimed), None).unwrap();
        assert!(report
            .flags
            .iter()
            .any(|f| f.starts_with("jordan-type-mismatch")));
    }

    #[test]
    fn invalid_membership_rejected() {
        let tol = Tolerances::default();
        let alg = AlgebraKind::new(Family::Sl, 3).unwrap();
        let x = OrbitElement::standard(ComplexMatrix::identity(3), alg).unwrap();
        assert!(compute_all(&x, &tol, None, None).is_err());
    }
}
