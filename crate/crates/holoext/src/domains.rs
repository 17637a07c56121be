//! The domain zoo: bidisk, unit ball, symmetrized bidisk, and a diagonal
//! ellipsoid family, with membership predicates, defining functions,
//! boundary samplers, and the two boundary convexity tests.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::{self, mix_seed};

/// Tolerance for "this point sits on the boundary" checks on closed forms.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// A domain of the fixed zoo.
///
/// The ellipsoid family is `r(z) = sum_j alpha_j |z_j|^2 + sum_j beta_j Re(z_j^2) - 1`
/// with `alpha_j > 0` and `beta_j` real. It is bounded (and convex) exactly
/// when `|beta_j| < alpha_j` for every `j`; unbounded parameter choices are
/// admitted because the flat-tangent witnesses of the strong-linear-convexity
/// test live there, but operations that need a bounded domain reject them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Bidisk,
    Ball { dim: usize },
    SymmetrizedBidisk,
    Ellipsoid { alpha: Vec<f64>, beta: Vec<f64> },
}

/// Value and Wirtinger derivatives of the defining function at a point.
#[derive(Debug, Clone)]
pub struct DefiningFunctionEval {
    pub value: f64,
    /// `dr/dz_j`.
    pub gradient: Vec<Complex64>,
    /// `d^2 r / dz_j dz_k`.
    pub holomorphic_hessian: DMatrix<Complex64>,
    /// `d^2 r / dz_j dconj(z_k)`; Hermitian.
    pub mixed_hessian: DMatrix<Complex64>,
}

/// Report of the strong-linear-convexity test at one boundary point.
#[derive(Debug, Clone, Serialize)]
pub struct SlcReport {
    pub pass: bool,
    pub worst_margin: f64,
    pub worst_vector: Point,
}

/// Stable roots of `x^2 - s x + p = 0`.
pub(crate) fn quadratic_roots(s: Complex64, p: Complex64) -> (Complex64, Complex64) {
    let disc = s * s - 4.0 * p;
    let sq = disc.sqrt();
    let (plus, minus) = (s + sq, s - sq);
    let q = if plus.norm() >= minus.norm() { plus } else { minus };
    if q.norm() < 1e-300 {
        // s and sqrt(disc) cancel only when both roots vanish.
        return (plus * 0.5, minus * 0.5);
    }
    let r1 = q * 0.5;
    (r1, p / r1)
}

impl DomainSpec {
    pub fn ball(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("ball dimension must be >= 1".into()));
        }
        Ok(DomainSpec::Ball { dim })
    }

    pub fn ellipsoid(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(Error::LengthMismatch {
                what: "ellipsoid beta",
                expected: alpha.len(),
                got: beta.len(),
            });
        }
        if alpha.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidParameter("ellipsoid alpha coefficients must be positive".into()));
        }
        if beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidParameter("ellipsoid beta coefficients must be finite".into()));
        }
        Ok(DomainSpec::Ellipsoid { alpha, beta })
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Bidisk | DomainSpec::SymmetrizedBidisk => 2,
            DomainSpec::Ball { dim } => *dim,
            DomainSpec::Ellipsoid { alpha, .. } => alpha.len(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            DomainSpec::Bidisk => "bidisk",
            DomainSpec::Ball { .. } => "ball",
            DomainSpec::SymmetrizedBidisk => "symmetrized_bidisk",
            DomainSpec::Ellipsoid { .. } => "ellipsoid",
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            DomainSpec::Ellipsoid { alpha, beta } => {
                alpha.iter().zip(beta.iter()).all(|(a, b)| b.abs() < *a)
            }
            _ => true,
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            DomainSpec::Bidisk | DomainSpec::Ball { .. } => true,
            DomainSpec::SymmetrizedBidisk => false,
            DomainSpec::Ellipsoid { .. } => self.is_bounded(),
        }
    }

    /// Domains with a smooth global defining function.
    pub fn is_smooth(&self) -> bool {
        matches!(self, DomainSpec::Ball { .. } | DomainSpec::Ellipsoid { .. })
    }

    fn unsupported(&self, op: &str) -> Error {
        Error::UnsupportedDomain {
            kind: self.kind_name().into(),
            op: op.into(),
        }
    }

    /// True iff `p` lies in the open domain.
    pub fn membership(&self, p: &Point) -> Result<bool> {
        p.check_dim(self.dim())?;
        Ok(match self {
            DomainSpec::Bidisk => p.coords().iter().all(|z| z.norm() < 1.0),
            DomainSpec::Ball { .. } => p.norm_sqr() < 1.0,
            DomainSpec::SymmetrizedBidisk => {
                let (r1, r2) = quadratic_roots(p.coord(0), p.coord(1));
                r1.norm() < 1.0 && r2.norm() < 1.0
            }
            DomainSpec::Ellipsoid { .. } => self.defining_value(p) < 0.0,
        })
    }

    /// True iff `p` lies in the closed domain, with `slack` of numerical grace.
    pub fn membership_closed(&self, p: &Point, slack: f64) -> Result<bool> {
        p.check_dim(self.dim())?;
        Ok(match self {
            DomainSpec::Bidisk => p.coords().iter().all(|z| z.norm() <= 1.0 + slack),
            DomainSpec::Ball { .. } => p.norm() <= 1.0 + slack,
            DomainSpec::SymmetrizedBidisk => {
                let (r1, r2) = quadratic_roots(p.coord(0), p.coord(1));
                r1.norm() <= 1.0 + slack && r2.norm() <= 1.0 + slack
            }
            DomainSpec::Ellipsoid { .. } => self.defining_value(p) <= slack,
        })
    }

    fn defining_value(&self, p: &Point) -> f64 {
        match self {
            DomainSpec::Ball { .. } => p.norm_sqr() - 1.0,
            DomainSpec::Ellipsoid { alpha, beta } => {
                let mut v = -1.0;
                for (j, z) in p.coords().iter().enumerate() {
                    v += alpha[j] * z.norm_sqr() + beta[j] * (z * z).re;
                }
                v
            }
            _ => f64::NAN,
        }
    }

    /// Closed-form defining function data; only smooth kinds qualify.
    pub fn defining_function(&self, p: &Point) -> Result<DefiningFunctionEval> {
        p.check_dim(self.dim())?;
        let d = self.dim();
        match self {
            DomainSpec::Ball { .. } => {
                let gradient = p.coords().iter().map(|z| z.conj()).collect();
                Ok(DefiningFunctionEval {
                    value: p.norm_sqr() - 1.0,
                    gradient,
                    holomorphic_hessian: DMatrix::zeros(d, d),
                    mixed_hessian: DMatrix::identity(d, d),
                })
            }
            DomainSpec::Ellipsoid { alpha, beta } => {
                let gradient = p
                    .coords()
                    .iter()
                    .enumerate()
                    .map(|(j, z)| alpha[j] * z.conj() + beta[j] * z)
                    .collect();
                let mut hol = DMatrix::zeros(d, d);
                let mut mixed = DMatrix::zeros(d, d);
                for j in 0..d {
                    hol[(j, j)] = Complex64::new(beta[j], 0.0);
                    mixed[(j, j)] = Complex64::new(alpha[j], 0.0);
                }
                Ok(DefiningFunctionEval {
                    value: self.defining_value(p),
                    gradient,
                    holomorphic_hessian: hol,
                    mixed_hessian: mixed,
                })
            }
            _ => Err(self.unsupported("defining_function")),
        }
    }

    /// True iff `p` lies on the (distinguished, for the non-smooth kinds)
    /// boundary within `tol`.
    pub fn on_boundary(&self, p: &Point, tol: f64) -> Result<bool> {
        p.check_dim(self.dim())?;
        Ok(match self {
            DomainSpec::Ball { .. } | DomainSpec::Ellipsoid { .. } => {
                self.defining_value(p).abs() <= tol
            }
            DomainSpec::Bidisk => {
                let max = p.coords().iter().map(|z| z.norm()).fold(0.0, f64::max);
                let all_in = p.coords().iter().all(|z| z.norm() <= 1.0 + tol);
                all_in && (max - 1.0).abs() <= tol
            }
            DomainSpec::SymmetrizedBidisk => {
                let (r1, r2) = quadratic_roots(p.coord(0), p.coord(1));
                (r1.norm() - 1.0).abs() <= tol && (r2.norm() - 1.0).abs() <= tol
            }
        })
    }

    /// Deterministic boundary sampler. Smooth kinds return points with
    /// `|r| <= BOUNDARY_TOL`; bidisk and symmetrized bidisk sample their
    /// distinguished boundaries.
    pub fn boundary_sample(&self, count: usize, seed: u64) -> Result<Vec<Point>> {
        if count == 0 {
            return Err(Error::InvalidParameter("sample count must be >= 1".into()));
        }
        let mut rng = rng::rng_from(mix_seed(seed, 0xB0DA, self.dim() as u64));
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            match self {
                DomainSpec::Ball { dim } => {
                    let v = rng::complex_gaussian_vec(&mut rng, *dim);
                    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    if n < 1e-8 {
                        continue;
                    }
                    out.push(Point::new(v.into_iter().map(|z| z / n).collect())?);
                }
                DomainSpec::Bidisk => {
                    let z = rng::unimodular(&mut rng);
                    let w = rng::unimodular(&mut rng);
                    out.push(Point::new(vec![z, w])?);
                }
                DomainSpec::SymmetrizedBidisk => {
                    let z = rng::unimodular(&mut rng);
                    let w = rng::unimodular(&mut rng);
                    out.push(Point::new(vec![z + w, z * w])?);
                }
                DomainSpec::Ellipsoid { alpha, beta } => {
                    let v = rng::complex_gaussian_vec(&mut rng, alpha.len());
                    let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                    if norm_sqr < 1e-16 {
                        continue;
                    }
                    let q: f64 = v
                        .iter()
                        .enumerate()
                        .map(|(j, z)| alpha[j] * z.norm_sqr() + beta[j] * (z * z).re)
                        .sum();
                    // Directions with q <= 0 never cross the boundary
                    // (possible only for unbounded parameter choices).
                    if q <= 1e-12 * norm_sqr {
                        continue;
                    }
                    let t = 1.0 / q.sqrt();
                    out.push(Point::new(v.into_iter().map(|z| z * t).collect())?);
                }
            }
        }
        Ok(out)
    }

    /// Deterministic interior sampler (artifact plumbing: probe points for
    /// convexity tests, retract checks, and searches). Samples stay a safe
    /// distance from the boundary.
    pub fn interior_sample(&self, count: usize, seed: u64) -> Result<Vec<Point>> {
        if count == 0 {
            return Err(Error::InvalidParameter("sample count must be >= 1".into()));
        }
        if !self.is_bounded() {
            return Err(Error::InvalidParameter(
                "interior sampling requires a bounded domain".into(),
            ));
        }
        let mut rng = rng::rng_from(mix_seed(seed, 0x17BE, self.dim() as u64));
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            match self {
                DomainSpec::Ball { dim } => {
                    let v = rng::complex_gaussian_vec(&mut rng, *dim);
                    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    if n < 1e-8 {
                        continue;
                    }
                    let u: f64 = rand::Rng::random(&mut rng);
                    let r = 0.95 * u.powf(1.0 / (2.0 * *dim as f64));
                    out.push(Point::new(v.into_iter().map(|z| z * (r / n)).collect())?);
                }
                DomainSpec::Bidisk => {
                    let z = rng::disk_point(&mut rng, 0.95);
                    let w = rng::disk_point(&mut rng, 0.95);
                    out.push(Point::new(vec![z, w])?);
                }
                DomainSpec::SymmetrizedBidisk => {
                    let z = rng::disk_point(&mut rng, 0.95);
                    let w = rng::disk_point(&mut rng, 0.95);
                    out.push(Point::new(vec![z + w, z * w])?);
                }
                DomainSpec::Ellipsoid { alpha, beta } => {
                    let v = rng::complex_gaussian_vec(&mut rng, alpha.len());
                    let q: f64 = v
                        .iter()
                        .enumerate()
                        .map(|(j, z)| alpha[j] * z.norm_sqr() + beta[j] * (z * z).re)
                        .sum();
                    if q <= 1e-12 {
                        continue;
                    }
                    let u: f64 = rand::Rng::random(&mut rng);
                    let r = 0.95 * u.powf(1.0 / (2.0 * alpha.len() as f64));
                    let t = r / q.sqrt();
                    out.push(Point::new(v.into_iter().map(|z| z * t).collect())?);
                }
            }
        }
        Ok(out)
    }

    /// Complex normal direction at a boundary point: `conj(dr/dz)` for smooth
    /// kinds, the face normal for the bidisk.
    fn boundary_normal(&self, p: &Point) -> Result<Vec<Complex64>> {
        match self {
            DomainSpec::Ball { .. } | DomainSpec::Ellipsoid { .. } => {
                let grad = self.defining_function(p)?.gradient;
                let norm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
                if norm <= 1e-14 {
                    return Err(Error::DegenerateNormal);
                }
                Ok(grad.into_iter().map(|g| g.conj()).collect())
            }
            DomainSpec::Bidisk => {
                let mut j_star = 0;
                for j in 1..p.dim() {
                    if p.coord(j).norm() > p.coord(j_star).norm() {
                        j_star = j;
                    }
                }
                let z = p.coord(j_star);
                if z.norm() <= 1e-14 {
                    return Err(Error::DegenerateNormal);
                }
                let mut n = vec![Complex64::new(0.0, 0.0); p.dim()];
                n[j_star] = z;
                Ok(n)
            }
            DomainSpec::SymmetrizedBidisk => Err(self.unsupported("boundary_normal")),
        }
    }

    /// Tests strict convexity of the boundary at `boundary_point` against the
    /// given interior samples: every sample must sit at normalized depth at
    /// least `tol` behind the supporting hyperplane. A flat boundary face
    /// shows up as samples with depth below `tol`.
    pub fn check_strict_convexity_at(
        &self,
        boundary_point: &Point,
        interior_samples: &[Point],
        tol: f64,
    ) -> Result<bool> {
        if !self.is_convex() {
            return Err(self.unsupported("check_strict_convexity_at"));
        }
        boundary_point.check_dim(self.dim())?;
        if !self.on_boundary(boundary_point, 1e-8)? {
            return Err(Error::InvalidParameter(
                "strict convexity test requires a boundary point".into(),
            ));
        }
        if !(tol >= 0.0) {
            return Err(Error::InvalidParameter("tol must be >= 0".into()));
        }
        let normal = self.boundary_normal(boundary_point)?;
        let n_norm = normal.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
        for lambda in interior_samples {
            lambda.check_dim(self.dim())?;
            if !self.membership(lambda)? {
                return Err(Error::OutsideDomain {
                    context: "interior sample for strict convexity test".into(),
                });
            }
            let diff = lambda.sub(boundary_point);
            let dist = diff.norm();
            if dist <= 1e-300 {
                return Ok(false);
            }
            // Re <lambda - xi, n> with the Hermitian pairing.
            let depth: f64 = diff
                .coords()
                .iter()
                .zip(normal.iter())
                .map(|(d, n)| (d * n.conj()).re)
                .sum();
            if depth / (n_norm * dist) >= -tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The strong-linear-convexity margin `L(X) - |H(X)|` at a boundary
    /// point, where `L` is the mixed-Hessian form and `H` the holomorphic
    /// one. Positive for every complex-tangent direction means the boundary
    /// has no second-order contact with its complex tangent plane.
    pub fn slc_margin(eval: &DefiningFunctionEval, x: &[Complex64]) -> f64 {
        let d = eval.gradient.len();
        debug_assert_eq!(x.len(), d);
        let mut lhs = 0.0;
        let mut rhs = Complex64::new(0.0, 0.0);
        for j in 0..d {
            for k in 0..d {
                lhs += (eval.mixed_hessian[(j, k)] * x[j] * x[k].conj()).re;
                rhs += eval.holomorphic_hessian[(j, k)] * x[j] * x[k];
            }
        }
        lhs - rhs.norm()
    }

    /// Samples unit vectors of the complex tangent space at `boundary_point`
    /// (the kernel of `X -> sum_j dr/dz_j X_j`) and reports the worst
    /// strong-linear-convexity margin found. Projected coordinate directions
    /// are always included, which pins the analytic witness on the diagonal
    /// ellipsoid family.
    pub fn check_strong_linear_convexity(
        &self,
        boundary_point: &Point,
        tangent_samples: usize,
        seed: u64,
        tol: f64,
    ) -> Result<SlcReport> {
        if !self.is_smooth() {
            return Err(self.unsupported("check_strong_linear_convexity"));
        }
        boundary_point.check_dim(self.dim())?;
        if !self.on_boundary(boundary_point, 1e-8)? {
            return Err(Error::InvalidParameter(
                "strong linear convexity test requires a boundary point".into(),
            ));
        }
        let eval = self.defining_function(boundary_point)?;
        let d = self.dim();
        let grad_norm_sqr: f64 = eval.gradient.iter().map(|g| g.norm_sqr()).sum();
        if grad_norm_sqr <= 1e-28 {
            return Err(Error::DegenerateNormal);
        }
        // X is complex-tangent iff sum_j grad_j X_j = 0, i.e. X is
        // Hermitian-orthogonal to w = conj(grad).
        let w: Vec<Complex64> = eval.gradient.iter().map(|g| g.conj()).collect();

        let project = |x: &[Complex64]| -> Option<Vec<Complex64>> {
            let overlap: Complex64 = x
                .iter()
                .zip(w.iter())
                .map(|(a, b)| a * b.conj())
                .sum();
            let coef = overlap / grad_norm_sqr;
            let proj: Vec<Complex64> = x
                .iter()
                .zip(w.iter())
                .map(|(a, b)| a - coef * b)
                .collect();
            let n = proj.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n < 1e-10 {
                None
            } else {
                Some(proj.into_iter().map(|z| z / n).collect())
            }
        };

        let mut candidates: Vec<Vec<Complex64>> = Vec::new();
        for j in 0..d {
            let mut e = vec![Complex64::new(0.0, 0.0); d];
            e[j] = Complex64::new(1.0, 0.0);
            if let Some(t) = project(&e) {
                candidates.push(t);
            }
        }
        let mut rng = rng::rng_from(mix_seed(seed, 0x51C0, d as u64));
        for _ in 0..tangent_samples {
            let x = rng::complex_gaussian_vec(&mut rng, d);
            if let Some(t) = project(&x) {
                candidates.push(t);
            }
        }

        if candidates.is_empty() {
            // Trivial complex tangent space (d = 1): nothing to test.
            return Ok(SlcReport {
                pass: true,
                worst_margin: f64::INFINITY,
                worst_vector: Point::zero(d),
            });
        }

        let mut worst_margin = f64::INFINITY;
        let mut worst_vector = candidates[0].clone();
        for x in &candidates {
            let m = Self::slc_margin(&eval, x);
            if m < worst_margin {
                worst_margin = m;
                worst_vector = x.clone();
            }
        }
        Ok(SlcReport {
            pass: worst_margin > tol,
            worst_margin,
            worst_vector: Point::new(worst_vector)?,
        })
    }
}
