//! The finite-dimensional operator model: a commuting d-tuple acting on the
//! span of kernel functions at N nodes, represented in the (non-orthogonal)
//! kernel basis.
//!
//! The r-th coordinate operator is pinned down by requiring its adjoint to
//! act diagonally on the kernel basis with entries `conj(lambda_j[r])`. In
//! coefficient coordinates with Gram `G` that forces `[T_r] = G^-1 D_r G`
//! with `D_r = diag(lambda_j[r])`, so a polynomial of the tuple is just
//! `G^-1 diag(p(lambda_j)) G`: functional calculus reduces to scalar
//! evaluation at the nodes, and the tuple commutes exactly.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::pick::{self, KernelGram, KernelId};
use crate::point::Point;
use crate::poly::Poly;

/// Gram condition number beyond which a node set is rejected as
/// numerically unusable.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

/// The model tuple: nodes, their kernel Gram, and cached factorizations.
#[derive(Debug, Clone)]
pub struct ModelTuple {
    gram: KernelGram,
    dim_d: usize,
    chol: Cholesky<Complex64, Dyn>,
}

/// An operator on the model space, stored as its matrix in the kernel-basis
/// coefficient coordinates together with the ambient Gram.
#[derive(Debug, Clone)]
pub struct GramOperator {
    pub matrix: DMatrix<Complex64>,
    pub gram: KernelGram,
}

/// Report of a von Neumann inequality check.
#[derive(Debug, Clone, Serialize)]
pub struct VonNeumannReport {
    pub norm: f64,
    pub vn_v_pass: bool,
    pub vn_omega_pass: bool,
}

/// Builds the model tuple for the given kernel and nodes. Fails when the
/// Gram is too ill-conditioned for the kernel basis to be numerically
/// usable.
pub fn build_model(kernel: KernelId, nodes: &[Point]) -> Result<ModelTuple> {
    let gram = pick::gram(kernel, nodes)?;
    ModelTuple::from_gram(gram)
}

impl ModelTuple {
    pub fn from_gram(gram: KernelGram) -> Result<Self> {
        let cond = linalg::hermitian_condition(gram.matrix());
        if !(cond <= MAX_GRAM_CONDITION) {
            return Err(Error::IllConditionedNodes { cond });
        }
        let chol = Cholesky::new(gram.matrix().clone()).ok_or(Error::SingularGram)?;
        let dim_d = gram.nodes()[0].dim();
        Ok(Self { gram, dim_d, chol })
    }

    pub fn nodes(&self) -> &[Point] {
        self.gram.nodes()
    }

    pub fn gram(&self) -> &KernelGram {
        &self.gram
    }

    pub fn len(&self) -> usize {
        self.gram.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gram.is_empty()
    }

    /// Ambient coordinate dimension d.
    pub fn dim_d(&self) -> usize {
        self.dim_d
    }

    /// The operator whose adjoint is diagonal with `conj(valuesِ_j)` on the
    /// kernel basis; equivalently `G^-1 diag(values) G` on coefficients.
    pub fn operator_from_node_values(&self, values: &[Complex64]) -> Result<GramOperator> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch {
                what: "node values",
                expected: self.len(),
                got: values.len(),
            });
        }
        let n = self.len();
        let mut rhs = self.gram.matrix().clone();
        // rhs = diag(values) * G
        for i in 0..n {
            for j in 0..n {
                rhs[(i, j)] *= values[i];
            }
        }
        let matrix = self.chol.solve(&rhs);
        Ok(GramOperator {
            matrix,
            gram: self.gram.clone(),
        })
    }

    /// The r-th coordinate operator (0-based).
    pub fn coordinate_op(&self, r: usize) -> Result<GramOperator> {
        if r >= self.dim_d {
            return Err(Error::InvalidParameter(format!(
                "coordinate index {r} out of range for dimension {}",
                self.dim_d
            )));
        }
        let values: Vec<Complex64> = self.nodes().iter().map(|p| p.coord(r)).collect();
        self.operator_from_node_values(&values)
    }

    /// Adjoint of an operator with respect to the Gram inner product:
    /// `[A*] = G^-1 [A]^H G`.
    pub fn adjoint_matrix(&self, op: &GramOperator) -> DMatrix<Complex64> {
        let rhs = op.matrix.adjoint() * self.gram.matrix();
        self.chol.solve(&rhs)
    }

    /// Gram inner product of coefficient vectors: `<x, y> = y^H G x`.
    pub fn inner(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let g = self.gram.matrix();
        let n = self.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += y[i].conj() * x[j] * g[(i, j)];
            }
        }
        acc
    }

}

/// The coefficient involution `psi^cup` with `psi^cup(z) = conj(psi(conj(z)))`.
pub fn psi_cup(p: &Poly) -> Poly {
    p.cup()
}

/// Evaluates a polynomial of the model tuple. The adjoint of the result is
/// diagonal with entries `conj(p(lambda_j))` on the kernel basis.
pub fn evaluate_poly(model: &ModelTuple, p: &Poly) -> Result<GramOperator> {
    if p.dim() != model.dim_d() {
        return Err(Error::DimensionMismatch {
            expected: model.dim_d(),
            got: p.dim(),
        });
    }
    let values: Vec<Complex64> = model.nodes().iter().map(|node| p.eval(node)).collect();
    model.operator_from_node_values(&values)
}

/// Operator norm on the Gram inner-product space, via congruence to an
/// orthonormal basis: `|| G^{1/2} [A] G^{-1/2} ||_2`.
pub fn operator_norm(op: &GramOperator) -> Result<f64> {
    let (sqrt, inv_sqrt) = linalg::hermitian_sqrt_pair(op.gram.matrix())?;
    Ok(linalg::spectral_norm(&(&sqrt * &op.matrix * &inv_sqrt)))
}

/// The defect form `<(I - p(T) p(T)^*) v, v>` for `v = sum_j a_j k_j`,
/// computed along two independent routes: (a) through the operator matrices
/// and the Gram pairing, and (b) through the closed bilinear sum
/// `sum conj(a_i) a_j (1 - w_i conj(w_j)) G_ij`. The two must agree to
/// 1e-10 (relative); disagreement is reported as an internal-consistency
/// error rather than returned silently.
pub fn defect_form(model: &ModelTuple, p: &Poly, a: &[Complex64]) -> Result<f64> {
    if a.len() != model.len() {
        return Err(Error::LengthMismatch {
            what: "coefficient vector",
            expected: model.len(),
            got: a.len(),
        });
    }
    let values: Vec<Complex64> = model.nodes().iter().map(|node| p.eval(node)).collect();

    // Route (a): operator matrices. u = [p(T)*] a, defect = <v,v> - <u,u>.
    let op = model.operator_from_node_values(&values)?;
    let adj = model.adjoint_matrix(&op);
    let av = DVector::from_column_slice(a);
    let u = &adj * &av;
    let u_slice: Vec<Complex64> = u.iter().cloned().collect();
    let norm_v = model.inner(a, a).re;
    let norm_u = model.inner(&u_slice, &u_slice).re;
    let path_a = norm_v - norm_u;

    // Route (b): the closed bilinear sum of the Pick matrix.
    let g = model.gram().matrix();
    let n = model.len();
    let mut path_b = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let factor = Complex64::new(1.0, 0.0) - values[i] * values[j].conj();
            path_b += a[i].conj() * a[j] * factor * g[(i, j)];
        }
    }
    let path_b = path_b.re;

    let scale = norm_v.abs().max(path_b.abs()).max(1.0);
    if (path_a - path_b).abs() > 1e-10 * scale {
        return Err(Error::InternalConsistency(format!(
            "defect form routes disagree: {path_a} vs {path_b}"
        )));
    }
    Ok(path_a)
}

/// Compares the model norm of `p(T)` against caller-supplied sups over the
/// variety and over the ambient domain, with `1e-9` slack.
pub fn von_neumann_check(
    model: &ModelTuple,
    p: &Poly,
    sup_on_v: f64,
    sup_on_omega: f64,
) -> Result<VonNeumannReport> {
    if !(sup_on_v >= 0.0) || !(sup_on_omega >= 0.0) {
        return Err(Error::InvalidParameter("sup bounds must be nonnegative".into()));
    }
    let norm = operator_norm(&evaluate_poly(model, p)?)?;
    Ok(VonNeumannReport {
        norm,
        vn_v_pass: norm <= sup_on_v + 1e-9,
        vn_omega_pass: norm <= sup_on_omega + 1e-9,
    })
}

/// Subordination: if `p` vanishes at every node (the model's spectrum),
/// `p(T)` must vanish too. Vacuously true when some value is nonzero.
pub fn subordination_check(
    model: &ModelTuple,
    p: &Poly,
    variety_values: &[Complex64],
) -> Result<bool> {
    if variety_values.len() != model.len() {
        return Err(Error::LengthMismatch {
            what: "variety values",
            expected: model.len(),
            got: variety_values.len(),
        });
    }
    if variety_values.iter().any(|v| v.norm() > 1e-12) {
        return Ok(true);
    }
    let norm = operator_norm(&evaluate_poly(model, p)?)?;
    Ok(norm <= 1e-10)
}
