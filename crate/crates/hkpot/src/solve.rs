//! Numerical solution of { μ(p) = 0, ψ(p) = X } by Levenberg-Marquardt on
//! the flattened real residual, with seeded random restarts.
//!
//! The restriction of r² to that zero set is the orbit's potential, so a
//! converged solve yields the potential value at X independently of every
//! closed-form route. The residual is polynomial (quadratic in the arrow
//! entries), and the analytic Jacobian is assembled column by column from
//! the product rule.

use crate::error::{Error, Result};
use crate::mat::ComplexMatrix;
use crate::quiver::{moment_map, psi, radial_norm, Diagram, DiagramPoint};
use crate::sample::{gaussian_matrix, rng};
use crate::tol::Tolerances;
use num_complex::Complex64;

const MAX_ITERS: usize = 500;
const LAMBDA0: f64 = 1e-3;
const LAMBDA_MAX: f64 = 1e15;

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub init_seed: u64,
    pub max_restarts: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            init_seed: 0,
            max_restarts: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    pub restarts: usize,
    pub residual: f64,
    pub converged: bool,
    /// Target has rank below the diagram's generic rank (closure stratum).
    pub boundary: bool,
    pub seed: u64,
}

/// Number of real parameters of the diagram's point space.
pub fn param_count(d: &Diagram) -> usize {
    let mut n = 0;
    for a in 0..d.arrow_count() {
        let (r, c) = d.alpha_shape(a);
        n += 2 * r * c;
        if !d.is_constrained() {
            n += 2 * r * c;
        }
    }
    n
}

/// Decodes a flat real parameter vector into a point (betas derived for
/// constrained diagrams).
pub fn unpack_point(d: &Diagram, x: &[f64]) -> Result<DiagramPoint> {
    let mut alphas = Vec::with_capacity(d.arrow_count());
    let mut betas = Vec::with_capacity(d.arrow_count());
    let mut pos = 0;
    let read_matrix = |rows: usize, cols: usize, pos: &mut usize| {
        let m = ComplexMatrix::from_fn(rows, cols, |i, j| {
            let idx = *pos + 2 * (i * cols + j);
            Complex64::new(x[idx], x[idx + 1])
        });
        *pos += 2 * rows * cols;
        m
    };
    for a in 0..d.arrow_count() {
        let (r, c) = d.alpha_shape(a);
        let alpha = read_matrix(r, c, &mut pos);
        if d.is_constrained() {
            betas.push(d.derive_beta(a, &alpha)?);
        } else {
            betas.push(read_matrix(c, r, &mut pos));
        }
        alphas.push(alpha);
    }
    debug_assert_eq!(pos, x.len());
    DiagramPoint::new(d, alphas, betas)
}

fn pack_point(d: &Diagram, p: &DiagramPoint) -> Vec<f64> {
    let mut out = Vec::with_capacity(param_count(d));
    for a in 0..d.arrow_count() {
        let alpha = &p.alphas[a];
        for i in 0..alpha.rows() {
            for j in 0..alpha.cols() {
                out.push(alpha[(i, j)].re);
                out.push(alpha[(i, j)].im);
            }
        }
        if !d.is_constrained() {
            let beta = &p.betas[a];
            for i in 0..beta.rows() {
                for j in 0..beta.cols() {
                    out.push(beta[(i, j)].re);
                    out.push(beta[(i, j)].im);
                }
            }
        }
    }
    out
}

fn push_matrix(v: &mut Vec<f64>, m: &ComplexMatrix) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m[(i, j)];
            v.push(z.re);
            v.push(z.im);
        }
    }
}

/// Residual dimension: moment parts plus the ψ - X block.
pub fn residual_count(d: &Diagram) -> usize {
    let mut m = 0;
    for g in 0..d.arrow_count() {
        m += 4 * d.dims()[g] * d.dims()[g];
    }
    m + 2 * d.target_dim() * d.target_dim()
}

/// Flattened residual [μ_C parts; μ_R parts; ψ - X] at the given parameters.
pub fn residual_vector(d: &Diagram, target: &ComplexMatrix, x: &[f64]) -> Result<Vec<f64>> {
    let p = unpack_point(d, x)?;
    let m = moment_map(d, &p)?;
    let mut out = Vec::with_capacity(residual_count(d));
    for part in &m.complex_parts {
        push_matrix(&mut out, part);
    }
    for part in &m.real_parts {
        push_matrix(&mut out, part);
    }
    let diff = &psi(d, &p) - target;
    push_matrix(&mut out, &diff);
    Ok(out)
}

/// Derivatives of all residual blocks along a single-parameter direction.
struct Direction {
    arrow: usize,
    d_alpha: ComplexMatrix,
    d_beta: ComplexMatrix,
}

impl Direction {
    fn at(d: &Diagram, arrow: usize, row: usize, col: usize, imag: bool, in_beta: bool) -> Result<Self> {
        let (r, c) = d.alpha_shape(arrow);
        let unit = if imag {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        if in_beta {
            let mut db = ComplexMatrix::zeros(c, r);
            db[(row, col)] = unit;
            Ok(Direction {
                arrow,
                d_alpha: ComplexMatrix::zeros(r, c),
                d_beta: db,
            })
        } else {
            let mut da = ComplexMatrix::zeros(r, c);
            da[(row, col)] = unit;
            let d_beta = if d.is_constrained() {
                d.derive_beta(arrow, &da)?
            } else {
                ComplexMatrix::zeros(c, r)
            };
            Ok(Direction {
                arrow,
                d_alpha: da,
                d_beta,
            })
        }
    }
}

/// Analytic Jacobian as column-major flat data (rows = residual_count,
/// cols = param_count).
pub fn jacobian_columns(d: &Diagram, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let p = unpack_point(d, x)?;
    let k_arrows = d.arrow_count();
    let m_rows = residual_count(d);

    // offsets of each residual block in the flat vector
    let mut offset_c = Vec::with_capacity(k_arrows);
    let mut offset_r = Vec::with_capacity(k_arrows);
    let mut pos = 0;
    for g in 0..k_arrows {
        offset_c.push(pos);
        pos += 2 * d.dims()[g] * d.dims()[g];
    }
    for g in 0..k_arrows {
        offset_r.push(pos);
        pos += 2 * d.dims()[g] * d.dims()[g];
    }
    let offset_psi = pos;

    let mut columns = Vec::with_capacity(param_count(d));
    let mut emit = |dir: Direction| {
        let a = dir.arrow;
        let mut col = vec![0.0; m_rows];
        let scatter = |col: &mut Vec<f64>, offset: usize, m: &ComplexMatrix| {
            let mut idx = offset;
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let z = m[(i, j)];
                    col[idx] += z.re;
                    col[idx + 1] += z.im;
                    idx += 2;
                }
            }
        };

        // gauge node a: terms -β_a α_a and β_a β_a* - α_a* α_a
        let dmu_c = &(&(-&dir.d_beta) * &p.alphas[a]) - &(&p.betas[a] * &dir.d_alpha);
        scatter(&mut col, offset_c[a], &dmu_c);
        let dmu_r = &(&(&dir.d_beta * &p.betas[a].adjoint()) + &(&p.betas[a] * &dir.d_beta.adjoint()))
            - &(&(&dir.d_alpha.adjoint() * &p.alphas[a]) + &(&p.alphas[a].adjoint() * &dir.d_alpha));
        scatter(&mut col, offset_r[a], &dmu_r);

        // gauge node a+1: terms +α_a β_a and α_a α_a* - β_a* β_a
        if a + 1 < k_arrows {
            let dmu_c = &(&dir.d_alpha * &p.betas[a]) + &(&p.alphas[a] * &dir.d_beta);
            scatter(&mut col, offset_c[a + 1], &dmu_c);
            let dmu_r = &(&(&dir.d_alpha * &p.alphas[a].adjoint())
                + &(&p.alphas[a] * &dir.d_alpha.adjoint()))
                - &(&(&dir.d_beta.adjoint() * &p.betas[a]) + &(&p.betas[a].adjoint() * &dir.d_beta));
            scatter(&mut col, offset_r[a + 1], &dmu_r);
        }

        // ψ block
        if a == k_arrows - 1 {
            let dpsi = &(&dir.d_alpha * &p.betas[a]) + &(&p.alphas[a] * &dir.d_beta);
            scatter(&mut col, offset_psi, &dpsi);
        }
        columns.push(col);
    };

    for a in 0..k_arrows {
        let (r, c) = d.alpha_shape(a);
        for i in 0..r {
            for j in 0..c {
                for imag in [false, true] {
                    emit(Direction::at(d, a, i, j, imag, false)?);
                }
            }
        }
        if !d.is_constrained() {
            for i in 0..c {
                for j in 0..r {
                    for imag in [false, true] {
                        emit(Direction::at(d, a, i, j, imag, true)?);
                    }
                }
            }
        }
    }
    Ok(columns)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves the damped normal equations (JᵀJ + λ diag) δ = -Jᵀ r by Cholesky.
fn lm_step(columns: &[Vec<f64>], r: &[f64], lambda: f64) -> Option<Vec<f64>> {
    let n = columns.len();
    let mut m = vec![0.0; n * n];
    let mut g = vec![0.0; n];
    for i in 0..n {
        for j in i..n {
            let dot: f64 = columns[i].iter().zip(&columns[j]).map(|(a, b)| a * b).sum();
            m[i * n + j] = dot;
            m[j * n + i] = dot;
        }
        g[i] = -columns[i].iter().zip(r).map(|(a, b)| a * b).sum::<f64>();
    }
    let mut max_diag = 0.0f64;
    for i in 0..n {
        max_diag = max_diag.max(m[i * n + i]);
    }
    let floor = (max_diag * 1e-14).max(1e-300);
    for i in 0..n {
        m[i * n + i] += lambda * m[i * n + i].max(floor);
    }
    // Cholesky
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    // forward/back substitution
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = g[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut delta = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * delta[k];
        }
        delta[i] = s / l[i * n + i];
    }
    Some(delta)
}

fn random_start(d: &Diagram, target_norm: f64, seed: u64, stream: u64) -> Vec<f64> {
    let mut r = rng(seed, stream);
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    for a in 0..d.arrow_count() {
        let (rows, cols) = d.alpha_shape(a);
        alphas.push(gaussian_matrix(&mut r, rows, cols));
        betas.push(gaussian_matrix(&mut r, cols, rows));
    }
    let p = if d.is_constrained() {
        DiagramPoint::from_alphas(d, alphas).expect("shapes are consistent")
    } else {
        DiagramPoint::new(d, alphas, betas).expect("shapes are consistent")
    };
    // scale so r² starts near 2k‖X‖, the order of the exact answers
    let current = radial_norm(&p);
    let desired = 2.0 * d.length() as f64 * target_norm.max(0.1);
    let factor = if current > 0.0 {
        (desired / current).sqrt()
    } else {
        1.0
    };
    let mut x = pack_point(d, &p);
    for v in x.iter_mut() {
        *v *= factor;
    }
    x
}

/// Solves μ = 0, ψ = X on the diagram and returns the point with diagnostics.
/// The residual target is `tol.solve_tol * max(1, ‖X‖_F)`; non-convergence
/// after all restarts is an error carrying the best residual seen.
pub fn solve_moment(
    d: &Diagram,
    target: &ComplexMatrix,
    opts: &SolveOptions,
    tol: &Tolerances,
) -> Result<(DiagramPoint, SolveDiagnostics)> {
    let n = d.target_dim();
    if target.rows() != n || target.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "target is {}x{}, diagram ends at {n}",
            target.rows(),
            target.cols()
        )));
    }
    let target_norm = target.frobenius_norm();
    let goal = tol.solve_tol * target_norm.max(1.0);
    let generic_rank = if d.length() >= 2 {
        d.dims()[d.length() - 2]
    } else {
        0
    };
    let boundary = crate::eigen::matrix_rank(target, tol)? < generic_rank;

    if d.arrow_count() == 0 {
        // length-1 diagram: only the zero orbit
        let p = DiagramPoint::zero(d);
        let res = target.frobenius_norm();
        if res > goal {
            return Err(Error::SolverDiverged {
                best: res,
                restarts: 0,
                target: goal,
            });
        }
        return Ok((
            p,
            SolveDiagnostics {
                iterations: 0,
                restarts: 0,
                residual: res,
                converged: true,
                boundary,
                seed: opts.init_seed,
            },
        ));
    }

    let mut best_res = f64::INFINITY;
    let mut best_x: Option<Vec<f64>> = None;
    let mut total_iters = 0;

    for restart in 0..=opts.max_restarts {
        let mut x = random_start(d, target_norm, opts.init_seed, restart as u64);
        let mut r = residual_vector(d, target, &x)?;
        let mut rn = norm(&r);
        let mut lambda = LAMBDA0;

        for _iter in 0..MAX_ITERS {
            total_iters += 1;
            if rn <= goal {
                break;
            }
            let cols = jacobian_columns(d, &x)?;
            let mut stepped = false;
            while lambda <= LAMBDA_MAX {
                let delta = match lm_step(&cols, &r, lambda) {
                    Some(dl) => dl,
                    None => {
                        lambda *= 10.0;
                        continue;
                    }
                };
                let x_new: Vec<f64> = x.iter().zip(&delta).map(|(a, b)| a + b).collect();
                let r_new = residual_vector(d, target, &x_new)?;
                let rn_new = norm(&r_new);
                if rn_new < rn {
                    x = x_new;
                    r = r_new;
                    rn = rn_new;
                    lambda = (lambda / 10.0).max(1e-14);
                    stepped = true;
                    break;
                }
                lambda *= 10.0;
            }
            if !stepped {
                break;
            }
        }

        if rn < best_res {
            best_res = rn;
            best_x = Some(x);
        }
        if best_res <= goal {
            let p = unpack_point(d, best_x.as_ref().unwrap())?;
            return Ok((
                p,
                SolveDiagnostics {
                    iterations: total_iters,
                    restarts: restart,
                    residual: best_res,
                    converged: true,
                    boundary,
                    seed: opts.init_seed,
                },
            ));
        }
    }

    Err(Error::SolverDiverged {
        best: best_res,
        restarts: opts.max_restarts,
        target: goal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraKind, Family, JordanType, OrbitElement};
    use crate::quiver::length2_factorize;

    fn block_a_sl4() -> OrbitElement {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 2)] = Complex64::new(3.0, 0.0);
        m[(1, 3)] = Complex64::new(4.0, 0.0);
        OrbitElement::standard(m, AlgebraKind::new(Family::Sl, 4).unwrap()).unwrap()
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let tol = Tolerances::default();
        let alg = AlgebraKind::new(Family::So, 7).unwrap();
        let jt = JordanType::new(vec![3, 2, 2]).unwrap();
        let d = Diagram::for_orbit(&jt, alg).unwrap();
        let target = ComplexMatrix::zeros(7, 7);
        let x = random_start(&d, 1.0, 3, 0);
        let cols = jacobian_columns(&d, &x).unwrap();
        let h = 1e-6;
        let mut worst: f64 = 0.0;
        for (t, col) in cols.iter().enumerate() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[t] += h;
            xm[t] -= h;
            let rp = residual_vector(&d, &target, &xp).unwrap();
            let rm = residual_vector(&d, &target, &xm).unwrap();
            let mut diff = 0.0;
            let mut scale = 0.0f64;
            for i in 0..col.len() {
                let fd = (rp[i] - rm[i]) / (2.0 * h);
                diff += (fd - col[i]).powi(2);
                scale += fd * fd;
            }
            worst = worst.max((diff.sqrt()) / scale.sqrt().max(1.0));
        }
        assert!(worst < 1e-5, "jacobian mismatch {worst}");
        let _ = tol;
    }

    #[test]
    fn solver_reproduces_length2_value() {
        let tol = Tolerances::default();
        let x = block_a_sl4();
        let jt = JordanType::new(vec![2, 2]).unwrap();
        let d = Diagram::for_orbit(&jt, x.algebra).unwrap();
        let (p, diag) = solve_moment(&d, &x.matrix, &SolveOptions::default(), &tol).unwrap();
        assert!(diag.converged);
        assert!(diag.residual <= tol.solve_tol * 5.0);
        let r2 = radial_norm(&p);
        assert!(
            (r2 - 14.0).abs() < 1e-6 * 14.0,
            "solver r² = {r2}, expected 14"
        );
        // agreement with the explicit factorization
        let f = length2_factorize(&x, &tol).unwrap();
        assert!((radial_norm(&f.point) - r2).abs() < 1e-6 * 14.0);
    }

    #[test]
    fn solver_zero_target() {
        let tol = Tolerances::default();
        let d = Diagram::unconstrained(vec![1, 3]).unwrap();
        let target = ComplexMatrix::zeros(3, 3);
        let (p, diag) = solve_moment(&d, &target, &SolveOptions::default(), &tol).unwrap();
        assert!(diag.converged);
        assert!(diag.boundary);
        assert!(radial_norm(&p) < 1e-8);
    }

    #[test]
    fn solver_is_deterministic() {
        let tol = Tolerances::default();
        let x = block_a_sl4();
        let jt = JordanType::new(vec![2, 2]).unwrap();
        let d = Diagram::for_orbit(&jt, x.algebra).unwrap();
        let (p1, _) = solve_moment(&d, &x.matrix, &SolveOptions::default(), &tol).unwrap();
        let (p2, _) = solve_moment(&d, &x.matrix, &SolveOptions::default(), &tol).unwrap();
        assert_eq!(p1.alphas[0], p2.alphas[0]);
    }
}
