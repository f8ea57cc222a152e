//! The flat quaternionic space attached to an image-flag diagram: arrow
//! points, the hyperKähler moment map, the radial norm, the gauge action,
//! and the explicit factorization for square-zero elements.
//!
//! Nodes are indexed 0..k-1 for V_1..V_k (V_0 = 0 is implicit); arrow a maps
//! node a to node a+1. Gauge groups act at nodes 0..k-2.

use crate::algebra::{AlgebraKind, Family, JordanType, OrbitElement};
use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::form::{dagger_adjoint, BilinearForm};
use crate::mat::ComplexMatrix;
use crate::sample::{form_preservation_residual, unitarity_residual};
use crate::tol::Tolerances;
use num_complex::Complex64;

/// Flag dimensions of a diagram, with per-node forms for so/sp.
#[derive(Debug, Clone)]
pub struct Diagram {
    dims: Vec<usize>,
    family: Family,
    node_forms: Option<Vec<BilinearForm>>,
}

impl Diagram {
    /// Unconstrained diagram (full arrow space, both directions free).
    pub fn unconstrained(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Invalid("empty diagram".into()));
        }
        Ok(Diagram {
            dims,
            family: Family::Sl,
            node_forms: None,
        })
    }

    /// The image-flag diagram of a nilpotent orbit: dim V_i = rank X^{k-i},
    /// with alternating-parity node forms for so/sp.
    pub fn for_orbit(jt: &JordanType, alg: AlgebraKind) -> Result<Self> {
        jt.validate_for(alg.family)?;
        if jt.sum() != alg.n {
            return Err(Error::InvalidPartition {
                parts: jt.parts().to_vec(),
                family: alg.family.name(),
                reason: format!("partition sums to {}, algebra is {alg}", jt.sum()),
            });
        }
        let k = jt.length();
        let dims: Vec<usize> = (0..k).map(|i| jt.rank_of_power(k - 1 - i)).collect();
        let node_forms = match alg.family {
            Family::Sl => None,
            _ => {
                let delta = alg.delta().unwrap();
                let mut forms = Vec::with_capacity(k);
                for (i, &dim) in dims.iter().enumerate() {
                    // parity of the form on V_{i+1} is (-1)^{k-(i+1)+delta}
                    let exponent = k - (i + 1) + delta;
                    if exponent % 2 == 0 {
                        forms.push(BilinearForm::identity(dim));
                    } else {
                        if dim % 2 != 0 {
                            return Err(Error::InvalidPartition {
                                parts: jt.parts().to_vec(),
                                family: alg.family.name(),
                                reason: format!("node {} needs even dimension, got {dim}", i + 1),
                            });
                        }
                        forms.push(BilinearForm::standard_symplectic(dim)?);
                    }
                }
                Some(forms)
            }
        };
        Ok(Diagram {
            dims,
            family: alg.family,
            node_forms,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn length(&self) -> usize {
        self.dims.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn target_dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    /// Whether the point space is cut down to beta = alpha-dagger.
    pub fn is_constrained(&self) -> bool {
        self.node_forms.is_some()
    }

    pub fn node_forms(&self) -> Option<&[BilinearForm]> {
        self.node_forms.as_deref()
    }

    pub fn alpha_shape(&self, a: usize) -> (usize, usize) {
        (self.dims[a + 1], self.dims[a])
    }

    /// beta_a = alpha_a-dagger for constrained diagrams.
    pub fn derive_beta(&self, a: usize, alpha: &ComplexMatrix) -> Result<ComplexMatrix> {
        let forms = self
            .node_forms
            .as_ref()
            .ok_or_else(|| Error::Invalid("diagram has no node forms".into()))?;
        dagger_adjoint(alpha, &forms[a], &forms[a + 1])
    }
}

/// One point of the arrow space: alphas go up the flag, betas come back.
#[derive(Debug, Clone)]
pub struct DiagramPoint {
    pub alphas: Vec<ComplexMatrix>,
    pub betas: Vec<ComplexMatrix>,
}

impl DiagramPoint {
    pub fn new(d: &Diagram, alphas: Vec<ComplexMatrix>, betas: Vec<ComplexMatrix>) -> Result<Self> {
        if alphas.len() != d.arrow_count() || betas.len() != d.arrow_count() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} arrows",
                d.arrow_count()
            )));
        }
        for a in 0..alphas.len() {
            let (r, c) = d.alpha_shape(a);
            if alphas[a].rows() != r || alphas[a].cols() != c {
                return Err(Error::DimensionMismatch(format!(
                    "alpha[{a}] should be {r}x{c}, got {}x{}",
                    alphas[a].rows(),
                    alphas[a].cols()
                )));
            }
            if betas[a].rows() != c || betas[a].cols() != r {
                return Err(Error::DimensionMismatch(format!(
                    "beta[{a}] should be {c}x{r}, got {}x{}",
                    betas[a].rows(),
                    betas[a].cols()
                )));
            }
        }
        Ok(DiagramPoint { alphas, betas })
    }

    /// Constrained point with betas derived from the node forms.
    pub fn from_alphas(d: &Diagram, alphas: Vec<ComplexMatrix>) -> Result<Self> {
        let mut betas = Vec::with_capacity(alphas.len());
        for (a, alpha) in alphas.iter().enumerate() {
            betas.push(d.derive_beta(a, alpha)?);
        }
        Self::new(d, alphas, betas)
    }

    pub fn zero(d: &Diagram) -> Self {
        let alphas = (0..d.arrow_count())
            .map(|a| {
                let (r, c) = d.alpha_shape(a);
                ComplexMatrix::zeros(r, c)
            })
            .collect();
        let betas = (0..d.arrow_count())
            .map(|a| {
                let (r, c) = d.alpha_shape(a);
                ComplexMatrix::zeros(c, r)
            })
            .collect();
        DiagramPoint { alphas, betas }
    }
}

/// Per-node moment-map values and the total squared residual.
#[derive(Debug, Clone)]
pub struct MomentResidual {
    pub complex_parts: Vec<ComplexMatrix>,
    pub real_parts: Vec<ComplexMatrix>,
    pub total: f64,
}

/// Evaluates the moment map at a point. The zero set is cut out by
/// alpha_{a-1} beta_{a-1} = beta_a alpha_a (complex part) and the matching
/// Hermitian balance condition (real part) at every gauged node.
pub fn moment_map(d: &Diagram, p: &DiagramPoint) -> Result<MomentResidual> {
    if p.alphas.len() != d.arrow_count() {
        return Err(Error::DimensionMismatch("point does not fit diagram".into()));
    }
    let gauged = d.arrow_count(); // nodes 0..k-2
    let mut complex_parts = Vec::with_capacity(gauged);
    let mut real_parts = Vec::with_capacity(gauged);
    let mut total = 0.0;
    for g in 0..gauged {
        let out_c = &p.betas[g] * &p.alphas[g];
        let mut mu_c = -&out_c;
        let mut mu_r = &(&p.betas[g] * &p.betas[g].adjoint())
            - &(&p.alphas[g].adjoint() * &p.alphas[g]);
        if g > 0 {
            mu_c = &mu_c + &(&p.alphas[g - 1] * &p.betas[g - 1]);
            mu_r = &(&mu_r + &(&p.alphas[g - 1] * &p.alphas[g - 1].adjoint()))
                - &(&p.betas[g - 1].adjoint() * &p.betas[g - 1]);
        }
        total += mu_c.frobenius_norm().powi(2) + mu_r.frobenius_norm().powi(2);
        complex_parts.push(mu_c);
        real_parts.push(mu_r);
    }
    Ok(MomentResidual {
        complex_parts,
        real_parts,
        total,
    })
}

/// The radial norm r² = Σ Tr(αᵢ*αᵢ + βᵢβᵢ*).
pub fn radial_norm(p: &DiagramPoint) -> f64 {
    p.alphas
        .iter()
        .map(|a| a.frobenius_norm().powi(2))
        .sum::<f64>()
        + p.betas.iter().map(|b| b.frobenius_norm().powi(2)).sum::<f64>()
}

/// The identification map onto the orbit closure: ψ = α_{k-1} β_{k-1}.
pub fn psi(d: &Diagram, p: &DiagramPoint) -> ComplexMatrix {
    let n = d.target_dim();
    match p.alphas.last() {
        Some(last_alpha) => last_alpha * p.betas.last().unwrap(),
        None => ComplexMatrix::zeros(n, n),
    }
}

/// Applies per-node gauge transformations (unitary; form-preserving when the
/// diagram is constrained): α_a ↦ g_{a+1} α_a g_a⁻¹, β_a ↦ g_a β_a g_{a+1}⁻¹,
/// with the last node fixed.
pub fn apply_gauge(d: &Diagram, p: &DiagramPoint, gauges: &[ComplexMatrix]) -> Result<DiagramPoint> {
    let gauged = d.arrow_count();
    if gauges.len() != gauged {
        return Err(Error::DimensionMismatch(format!(
            "expected {gauged} gauge matrices"
        )));
    }
    for (g, gauge) in gauges.iter().enumerate() {
        if gauge.rows() != d.dims[g] || gauge.cols() != d.dims[g] {
            return Err(Error::DimensionMismatch(format!(
                "gauge {g} should be {0}x{0}",
                d.dims[g]
            )));
        }
        let u_res = unitarity_residual(gauge);
        if u_res > 1e-10 * (d.dims[g] as f64).max(1.0) {
            return Err(Error::NonUnitaryGauge(u_res));
        }
        if let Some(forms) = &d.node_forms {
            let f_res = form_preservation_residual(gauge, &forms[g]);
            if f_res > 1e-10 * (d.dims[g] as f64).max(1.0) {
                return Err(Error::NonUnitaryGauge(f_res));
            }
        }
    }
    let mut alphas = Vec::with_capacity(gauged);
    let mut betas = Vec::with_capacity(gauged);
    for a in 0..gauged {
        let g_src = &gauges[a];
        let alpha = if a + 1 < gauged {
            &(&gauges[a + 1] * &p.alphas[a]) * &g_src.adjoint()
        } else {
            &p.alphas[a] * &g_src.adjoint()
        };
        let beta = if a + 1 < gauged {
            &(g_src * &p.betas[a]) * &gauges[a + 1].adjoint()
        } else {
            g_src * &p.betas[a]
        };
        alphas.push(alpha);
        betas.push(beta);
    }
    DiagramPoint::new(d, alphas, betas)
}

/// Output of [`length2_factorize`].
#[derive(Debug, Clone)]
pub struct Length2Factorization {
    pub diagram: Diagram,
    pub point: DiagramPoint,
    /// Set when X = 0 and the factorization is the empty point.
    pub trivial: bool,
}

/// Explicitly solves the length-2 moment-map equations for X with X² = 0:
/// α has columns √aᵢ · (Xeᵢ/aᵢ), β has rows √aᵢ · eᵢ*, where (aᵢ², eᵢ) are
/// the positive eigenpairs of X*X. Then αβ = X, βα = 0 and ββ* = α*α = A.
pub fn length2_factorize(x: &OrbitElement, tol: &Tolerances) -> Result<Length2Factorization> {
    let m = &x.matrix;
    let n = x.n();
    let norm = m.frobenius_norm();
    let sq_norm = m.pow(2).frobenius_norm();
    if sq_norm > tol.check_tol * norm.max(1.0).powi(2) {
        return Err(Error::NotNilpotent(format!(
            "X² has norm {sq_norm:.3e}, not a square-zero element"
        )));
    }

    let gram = &m.adjoint() * m;
    let eig = hermitian_eigen(&gram, tol)?;
    let lambda_max = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let cut = (tol.rank_cut * lambda_max.sqrt()).powi(2);
    let k = eig.values.iter().filter(|&&v| v > cut).count();

    if k == 0 {
        let diagram = Diagram::unconstrained(vec![0, n])?;
        let point = DiagramPoint::zero(&diagram);
        return Ok(Length2Factorization {
            diagram,
            point,
            trivial: true,
        });
    }

    let mut alpha = ComplexMatrix::zeros(n, k);
    let mut beta = ComplexMatrix::zeros(k, n);
    for i in 0..k {
        let mu = eig.values[i];
        let a_i = mu.sqrt(); // singular value of X
        let e_i = eig.vectors.col(i);
        let w_i: Vec<Complex64> = m.apply(&e_i).iter().map(|z| z / a_i).collect();
        let root = a_i.sqrt();
        for r in 0..n {
            alpha[(r, i)] = w_i[r] * root;
            beta[(i, r)] = e_i[r].conj() * root;
        }
    }

    let diagram = Diagram::unconstrained(vec![k, n])?;
    let point = DiagramPoint::new(&diagram, vec![alpha.clone()], vec![beta.clone()])?;

    // defensive residual checks per the construction's guarantees
    let scale = norm.max(1.0);
    let res_ba = (&beta * &alpha).frobenius_norm();
    let res_balance = (&(&beta * &beta.adjoint()) - &(&alpha.adjoint() * &alpha)).frobenius_norm();
    let res_psi = (&(&alpha * &beta) - m).frobenius_norm();
    if res_ba > tol.check_tol * scale || res_balance > tol.check_tol * scale || res_psi > tol.check_tol * scale
    {
        return Err(Error::Invalid(format!(
            "factorization residuals too large: βα={res_ba:.3e}, balance={res_balance:.3e}, ψ={res_psi:.3e}"
        )));
    }

    Ok(Length2Factorization {
        diagram,
        point,
        trivial: false,
    })
}
