//! Pseudo-hyperbolic geometry of the disk, closed-form Kobayashi geodesics
//! and Lempert left inverses in the ball, the Royden-Wong boundary
//! conditions as numerical checks, and a seeded multistart Caratheodory
//! search over polynomial competitors.

use num_complex::Complex64;
use serde::Serialize;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::poly::{AnalyticDisc, BoundaryFunctional, Poly};
use crate::search::{monomial_basis, multistart_stage};

/// Distinctness threshold for the two points of a datum.
pub const DATUM_SEPARATION: f64 = 1e-12;

/// An ordered pair of distinct points of a domain.
#[derive(Debug, Clone)]
pub struct Datum {
    lambda: Point,
    mu: Point,
}

impl Datum {
    /// Validates membership of both points and their distinctness.
    pub fn new(domain: &DomainSpec, lambda: Point, mu: Point) -> Result<Self> {
        if !domain.membership(&lambda)? {
            return Err(Error::OutsideDomain {
                context: "datum point lambda".into(),
            });
        }
        if !domain.membership(&mu)? {
            return Err(Error::OutsideDomain {
                context: "datum point mu".into(),
            });
        }
        if lambda.dist(&mu) <= DATUM_SEPARATION {
            return Err(Error::DegenerateDatum);
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> &Point {
        &self.lambda
    }

    pub fn mu(&self) -> &Point {
        &self.mu
    }
}

/// Pseudo-hyperbolic distance `|a - b| / |1 - conj(a) b|` on the open disk.
pub fn rho(a: Complex64, b: Complex64) -> Result<f64> {
    if a.norm() >= 1.0 || b.norm() >= 1.0 {
        return Err(Error::OutsideDomain {
            context: "rho arguments must lie in the open disk".into(),
        });
    }
    Ok(rho_unchecked(a, b))
}

fn rho_unchecked(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm()
}

/// The Mobius involution `m_a(z) = (a - z) / (1 - conj(a) z)` of the disk,
/// swapping `a` and `0`.
pub fn mobius_disk(a: Complex64, z: Complex64) -> Result<Complex64> {
    if a.norm() >= 1.0 {
        return Err(Error::OutsideDomain {
            context: "mobius base point must lie in the open disk".into(),
        });
    }
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::OutsideDomain {
            context: "mobius argument must lie in the closed disk".into(),
        });
    }
    Ok((a - z) / (Complex64::new(1.0, 0.0) - a.conj() * z))
}

/// The involutive ball automorphism exchanging `a` and the origin. Maps the
/// closed ball into itself and the unit sphere onto itself.
pub fn ball_automorphism_to_origin(a: &Point, z: &Point) -> Result<Point> {
    z.check_dim(a.dim())?;
    let a_norm_sqr = a.norm_sqr();
    if a_norm_sqr >= 1.0 {
        return Err(Error::OutsideDomain {
            context: "automorphism base point must lie in the open ball".into(),
        });
    }
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::OutsideDomain {
            context: "automorphism argument must lie in the closed ball".into(),
        });
    }
    if a_norm_sqr < 1e-300 {
        return Ok(z.scale(Complex64::new(-1.0, 0.0)));
    }
    let s = (1.0 - a_norm_sqr).sqrt();
    let za = z.inner(a);
    // Projection of z onto the line through a, and its complement.
    let p = a.scale(za / a_norm_sqr);
    let q = z.sub(&p);
    let denom = Complex64::new(1.0, 0.0) - za;
    let numer = a.sub(&p).sub(&q.scale(Complex64::new(s, 0.0)));
    Ok(numer.scale(denom.inv()))
}

/// A Kobayashi extremal disc for a ball datum, in affine form, together
/// with the parameters hitting the datum and the extremal distance.
#[derive(Debug, Clone)]
pub struct KobayashiGeodesic {
    pub disc: AnalyticDisc,
    pub param_lambda: Complex64,
    pub param_mu: Complex64,
    pub distance: f64,
}

/// Closed-form Kobayashi extremal through a ball datum.
///
/// The complex line through the datum meets the ball in a Euclidean disk of
/// the line parameter, so an affine reparametrization `z -> base + z dir`
/// maps the unit disk biholomorphically onto that slice; slices of the ball
/// are geodesics. The extremal distance is cross-checked against the
/// automorphism route `||phi_lambda(mu)||` on every call.
pub fn kobayashi_ball(datum: &Datum) -> Result<KobayashiGeodesic> {
    let lambda = datum.lambda();
    let mu = datum.mu();
    if lambda.norm() >= 1.0 || mu.norm() >= 1.0 {
        return Err(Error::OutsideDomain {
            context: "kobayashi datum must lie in the open ball".into(),
        });
    }
    let v = mu.sub(lambda);
    let v_norm_sqr = v.norm_sqr();
    if v_norm_sqr <= DATUM_SEPARATION * DATUM_SEPARATION {
        return Err(Error::DegenerateDatum);
    }
    // || lambda + t v || < 1 is the disk |t - center| < radius.
    let c = v.inner(lambda).conj() / v_norm_sqr;
    let center = -c;
    let radius = (c.norm_sqr() + (1.0 - lambda.norm_sqr()) / v_norm_sqr).sqrt();
    let base = lambda.add(&v.scale(center));
    let dir = v.scale(Complex64::new(radius, 0.0));
    let disc = AnalyticDisc::affine(base, dir);
    let param_lambda = -center / radius;
    let param_mu = (Complex64::new(1.0, 0.0) - center) / radius;
    let distance = rho(param_lambda, param_mu)?;

    // Independent route: reduce to the origin with the involutive
    // automorphism; the extremal distance is the image norm.
    let reduced = ball_automorphism_to_origin(lambda, mu)?;
    if (distance - reduced.norm()).abs() > 1e-10 {
        return Err(Error::InternalConsistency(format!(
            "geodesic distance {distance} disagrees with automorphism route {}",
            reduced.norm()
        )));
    }
    Ok(KobayashiGeodesic {
        disc,
        param_lambda,
        param_mu,
        distance,
    })
}

/// Lempert left inverse of a linear geodesic through the origin: for
/// `k(z) = z u` with `||u|| = 1`, the functional `phi(w) = <w, u>`
/// satisfies `phi(k(z)) = z` and `|phi| <= 1` on the closed ball.
pub fn left_inverse_ball(disc: &AnalyticDisc) -> Result<Poly> {
    if disc.degree() > 1 {
        return Err(Error::UnsupportedDisc(
            "left inverse requires a linear disc; compose with ball automorphisms first".into(),
        ));
    }
    let base = &disc.coefficients()[0];
    if base.norm() > 1e-12 {
        return Err(Error::UnsupportedDisc(
            "left inverse requires a disc through the origin".into(),
        ));
    }
    if disc.degree() == 0 {
        return Err(Error::UnsupportedDisc("constant disc has no left inverse".into()));
    }
    let dir = &disc.coefficients()[1];
    if (dir.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::UnsupportedDisc(
            "left inverse requires a unit direction".into(),
        ));
    }
    let coeffs: Vec<Complex64> = dir.coords().iter().map(|u| u.conj()).collect();
    Ok(Poly::affine(Complex64::new(0.0, 0.0), &coeffs))
}

/// Report of the Royden-Wong boundary checks for a disc and a candidate
/// boundary functional.
#[derive(Debug, Clone, Serialize)]
pub struct RoydenWongReport {
    pub boundary_ae_pass: bool,
    pub sign_pass: bool,
    pub worst_value: f64,
}

/// Checks (i) that the disc maps the circle onto the boundary, and (ii) the
/// sign condition `Re[(lambda - k(z)) . (conj(z) h(z))] < 0` over a circle
/// grid and the supplied interior samples, with `.` the bilinear pairing.
pub fn royden_wong_check(
    domain: &DomainSpec,
    disc: &AnalyticDisc,
    h: &BoundaryFunctional,
    interior_samples: &[Point],
    boundary_grid: usize,
) -> Result<RoydenWongReport> {
    if !domain.is_smooth() || !domain.is_convex() {
        return Err(Error::UnsupportedDomain {
            kind: domain.kind_name().into(),
            op: "royden_wong_check".into(),
        });
    }
    if boundary_grid == 0 {
        return Err(Error::InvalidParameter("boundary grid must be >= 1".into()));
    }
    if disc.dim() != domain.dim() || h.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: disc.dim().max(h.dim()),
        });
    }
    for lambda in interior_samples {
        if !domain.membership(lambda)? {
            return Err(Error::OutsideDomain {
                context: "royden-wong interior sample".into(),
            });
        }
    }
    let grid: Vec<Complex64> = (0..boundary_grid)
        .map(|t| {
            let theta = std::f64::consts::TAU * t as f64 / boundary_grid as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect();
    let h_max = grid.iter().map(|&z| h.eval(z).norm()).fold(0.0, f64::max);
    if h_max <= 1e-14 {
        return Err(Error::DegenerateFunctional);
    }
    let mut boundary_ae_pass = true;
    let mut worst_value = f64::NEG_INFINITY;
    for &z in &grid {
        let kz = disc.eval(z);
        let r = domain.defining_function(&kz)?.value;
        if r.abs() > 1e-8 {
            boundary_ae_pass = false;
        }
        let hz = h.eval(z).scale(z.conj());
        for lambda in interior_samples {
            let value = lambda.sub(&kz).bullet(&hz).re;
            if value > worst_value {
                worst_value = value;
            }
        }
    }
    if interior_samples.is_empty() {
        worst_value = f64::NEG_INFINITY;
    }
    Ok(RoydenWongReport {
        boundary_ae_pass,
        sign_pass: worst_value < 0.0,
        worst_value,
    })
}

/// Result of the Caratheodory search: a polynomial competitor map with
/// certified-feasible boundary sup and the pseudo-hyperbolic separation it
/// achieves on the datum.
#[derive(Debug, Clone)]
pub struct CaratheodorySearchResult {
    /// `rho(map(lambda), map(mu))`; a certified lower bound for the
    /// Caratheodory distance.
    pub value: f64,
    pub map: Poly,
    /// Sup of `|map|` over the 2048-point design boundary sample.
    pub design_sup: f64,
    /// Degree stage and candidate index that produced the winner.
    pub stage_degree: u32,
    pub candidate_index: usize,
}

const DESIGN_BOUNDARY_SEED: u64 = 0x0de5_1907;
const DENSE_BOUNDARY_SEED: u64 = 0x0de5_1908;
const DESIGN_BOUNDARY_COUNT: usize = 2048;
const DENSE_BOUNDARY_COUNT: usize = 16384;

/// Boundary sup estimation for a fixed domain: a design-resolution sample
/// for search iterations and a dense sample plus local ascent for final
/// scoring.
pub(crate) struct BoundarySup {
    domain: DomainSpec,
    design: Vec<Point>,
    dense: Vec<Point>,
}

pub(crate) struct StageSup {
    design_rows: Vec<Vec<Complex64>>,
    dense_rows: Option<Vec<Vec<Complex64>>>,
}

fn monomial_row(basis: &[Vec<u32>], p: &Point) -> Vec<Complex64> {
    basis
        .iter()
        .map(|alpha| {
            let mut m = Complex64::new(1.0, 0.0);
            for (j, &pw) in alpha.iter().enumerate() {
                if pw > 0 {
                    m *= p.coord(j).powu(pw);
                }
            }
            m
        })
        .collect()
}

fn rows_for(basis: &[Vec<u32>], pts: &[Point]) -> Vec<Vec<Complex64>> {
    pts.iter().map(|p| monomial_row(basis, p)).collect()
}

fn sup_over_rows(rows: &[Vec<Complex64>], coeffs: &[Complex64]) -> f64 {
    let mut sup = 0.0_f64;
    for row in rows {
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, c) in row.iter().zip(coeffs.iter()) {
            acc += r * c;
        }
        let n = acc.norm();
        if n > sup {
            sup = n;
        }
    }
    sup
}

impl BoundarySup {
    pub(crate) fn new(domain: &DomainSpec) -> Result<Self> {
        Ok(Self {
            domain: domain.clone(),
            design: domain.boundary_sample(DESIGN_BOUNDARY_COUNT, DESIGN_BOUNDARY_SEED)?,
            dense: domain.boundary_sample(DENSE_BOUNDARY_COUNT, DENSE_BOUNDARY_SEED)?,
        })
    }

    pub(crate) fn stage(&self, basis: &[Vec<u32>], stage_degree: u32) -> StageSup {
        let exact_linear = matches!(self.domain, DomainSpec::Ball { .. }) && stage_degree <= 1;
        StageSup {
            design_rows: rows_for(basis, &self.design),
            dense_rows: if exact_linear {
                None
            } else {
                Some(rows_for(basis, &self.dense))
            },
        }
    }

    pub(crate) fn design_sup(&self, stage: &StageSup, coeffs: &[Complex64]) -> f64 {
        sup_over_rows(&stage.design_rows, coeffs)
    }

    /// High-accuracy boundary sup of the polynomial with the given stage
    /// coefficients: exact for affine functionals on the ball, otherwise a
    /// dense sample refined by local ascent on the boundary chart.
    pub(crate) fn polished_sup(
        &self,
        basis: &[Vec<u32>],
        stage: &StageSup,
        coeffs: &[Complex64],
    ) -> f64 {
        let dense_rows = match &stage.dense_rows {
            None => {
                // Affine on the ball: sup = |c_0| + ||linear part||.
                let c0 = coeffs[0].norm();
                let lin: f64 = coeffs[1..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                return c0 + lin;
            }
            Some(rows) => rows,
        };
        let mut best = 0.0_f64;
        let mut best_idx = 0usize;
        for (i, row) in dense_rows.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (r, c) in row.iter().zip(coeffs.iter()) {
                acc += r * c;
            }
            let n = acc.norm();
            if n > best {
                best = n;
                best_idx = i;
            }
        }
        let poly = poly_from(basis, coeffs, self.domain.dim());
        let refined = self.refine_boundary_max(&poly, &self.dense[best_idx]);
        best.max(refined)
    }

    /// Local ascent of `|p|` over the boundary, starting from a boundary
    /// point. Uses a chart suited to each domain kind.
    fn refine_boundary_max(&self, poly: &Poly, start: &Point) -> f64 {
        let d = self.domain.dim();
        match &self.domain {
            DomainSpec::Ball { .. } => {
                let x0: Vec<f64> = start
                    .coords()
                    .iter()
                    .flat_map(|z| [z.re, z.im])
                    .collect();
                let objective = |x: &[f64]| {
                    let v: Vec<Complex64> =
                        x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
                    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    if n < 1e-8 {
                        return f64::INFINITY;
                    }
                    let pt = Point::new(v.into_iter().map(|z| z / n).collect()).unwrap();
                    -poly.eval(&pt).norm()
                };
                let (_, neg) = crate::search::nelder_mead(&objective, &x0, 0.05, 40 * 2 * d);
                -neg
            }
            DomainSpec::Ellipsoid { alpha, beta } => {
                let x0: Vec<f64> = start
                    .coords()
                    .iter()
                    .flat_map(|z| [z.re, z.im])
                    .collect();
                let objective = |x: &[f64]| {
                    let v: Vec<Complex64> =
                        x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
                    let q: f64 = v
                        .iter()
                        .enumerate()
                        .map(|(j, z)| alpha[j] * z.norm_sqr() + beta[j] * (z * z).re)
                        .sum();
                    if q <= 1e-12 {
                        return f64::INFINITY;
                    }
                    let t = 1.0 / q.sqrt();
                    let pt = Point::new(v.into_iter().map(|z| z * t).collect()).unwrap();
                    -poly.eval(&pt).norm()
                };
                let (_, neg) = crate::search::nelder_mead(&objective, &x0, 0.05, 40 * 2 * d);
                -neg
            }
            DomainSpec::Bidisk | DomainSpec::SymmetrizedBidisk => {
                // Chart by torus angles; the symmetrized bidisk samples the
                // image of the torus.
                let sym = matches!(self.domain, DomainSpec::SymmetrizedBidisk);
                let (a, b) = if sym {
                    let (r1, r2) =
                        crate::domains::quadratic_roots(start.coord(0), start.coord(1));
                    (r1.arg(), r2.arg())
                } else {
                    (start.coord(0).arg(), start.coord(1).arg())
                };
                let objective = |x: &[f64]| {
                    let z1 = Complex64::new(x[0].cos(), x[0].sin());
                    let z2 = Complex64::new(x[1].cos(), x[1].sin());
                    let pt = if sym {
                        Point::new(vec![z1 + z2, z1 * z2]).unwrap()
                    } else {
                        Point::new(vec![z1, z2]).unwrap()
                    };
                    -poly.eval(&pt).norm()
                };
                let (_, neg) = crate::search::nelder_mead(&objective, &[a, b], 0.05, 160);
                -neg
            }
        }
    }
}

pub(crate) fn poly_from(basis: &[Vec<u32>], coeffs: &[Complex64], dim: usize) -> Poly {
    let terms: Vec<crate::poly::Term> = basis
        .iter()
        .zip(coeffs.iter())
        .map(|(alpha, &c)| crate::poly::Term {
            powers: alpha.clone(),
            coeff: c,
        })
        .collect();
    Poly::from_terms(dim, terms).expect("basis terms are well-formed")
}

fn feasible_value(vl: Complex64, vm: Complex64, sup: f64) -> f64 {
    let s = sup
        .max(vl.norm() * (1.0 + 1e-9))
        .max(vm.norm() * (1.0 + 1e-9));
    if s < 1e-200 {
        return 0.0;
    }
    rho_unchecked(vl / s, vm / s)
}

/// Seeded multistart search for a polynomial Caratheodory competitor.
///
/// Runs one stage per total degree `1..=degree`, chaining each stage's
/// winner into the next as a deterministic start; the stage budget is
/// `budget / degree` objective evaluations. Candidates are made feasible by
/// rescaling with their sampled boundary sup; final scoring replaces the
/// design-resolution sup by a polished one, exact for affine maps on the
/// ball.
pub fn caratheodory_search(
    domain: &DomainSpec,
    datum: &Datum,
    degree: u32,
    budget: usize,
    seed: u64,
) -> Result<CaratheodorySearchResult> {
    if degree == 0 {
        return Err(Error::InvalidParameter("degree must be >= 1".into()));
    }
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be >= 1".into()));
    }
    // Re-validate the datum against this domain.
    let datum = Datum::new(domain, datum.lambda().clone(), datum.mu().clone())?;
    let dim = domain.dim();
    let oracle = BoundarySup::new(domain)?;

    let mut det_linear: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..dim {
        let mut lin = vec![Complex64::new(0.0, 0.0); dim];
        lin[j] = Complex64::new(1.0, 0.0);
        det_linear.push(lin);
    }
    let diff = datum.lambda().sub(datum.mu());
    let diff_dir: Vec<Complex64> = diff
        .coords()
        .iter()
        .map(|v| (v / diff.norm()).conj())
        .collect();
    det_linear.push(diff_dir);
    if let DomainSpec::Ball { .. } = domain {
        // The direction of the normalized datum is the exact extremal for
        // data on a line through the origin.
        let reduced = ball_automorphism_to_origin(datum.lambda(), datum.mu())?;
        if reduced.norm() > 1e-12 {
            let u: Vec<Complex64> = reduced
                .coords()
                .iter()
                .map(|z| (z / reduced.norm()).conj())
                .collect();
            det_linear.push(u);
        }
    }

    let stage_budget = (budget as usize / degree as usize).max(1);
    let mut prev_coeffs: Option<Vec<Complex64>> = None;
    let mut winner: Option<(f64, Vec<Complex64>, Vec<Vec<u32>>, u32, usize)> = None;

    for g in 1..=degree {
        let basis = monomial_basis(dim, g);
        let stage = oracle.stage(&basis, g);
        let m_lambda = monomial_row(&basis, datum.lambda());
        let m_mu = monomial_row(&basis, datum.mu());
        let eval_at = |row: &[Complex64], coeffs: &[Complex64]| -> Complex64 {
            row.iter().zip(coeffs.iter()).map(|(r, c)| r * c).sum()
        };

        let cheap = |coeffs: &[Complex64]| -> f64 {
            let sup = oracle.design_sup(&stage, coeffs);
            feasible_value(eval_at(&m_lambda, coeffs), eval_at(&m_mu, coeffs), sup)
        };
        let polished = |coeffs: &[Complex64]| -> f64 {
            let sup = oracle.polished_sup(&basis, &stage, coeffs);
            feasible_value(eval_at(&m_lambda, coeffs), eval_at(&m_mu, coeffs), sup)
        };

        let mut det_starts: Vec<Vec<Complex64>> = Vec::new();
        if let Some(prev) = &prev_coeffs {
            det_starts.push(prev.clone());
        }
        for lin in &det_linear {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); basis.len()];
            for (j, &c) in lin.iter().enumerate() {
                coeffs[1 + j] = c;
            }
            det_starts.push(coeffs);
        }

        if let Some(cand) = multistart_stage(
            &det_starts,
            basis.len(),
            stage_budget,
            seed,
            g as u64,
            &cheap,
            &polished,
        ) {
            prev_coeffs = Some(cand.coeffs.clone());
            let replace = match &winner {
                None => true,
                Some((best, ..)) => cand.polished_value > *best,
            };
            if replace {
                winner = Some((cand.polished_value, cand.coeffs, basis.clone(), g, cand.index));
            }
        }
    }

    let (_, coeffs, basis, stage_degree, candidate_index) = winner.ok_or_else(|| {
        Error::SearchFailure("no finite candidate value found within budget".into())
    })?;
    // Certify feasibility of the returned map by rescaling with the
    // polished sup, then report the separation it actually achieves.
    let stage = oracle.stage(&basis, stage_degree);
    let sup = oracle.polished_sup(&basis, &stage, &coeffs);
    let vl: Complex64 = monomial_row(&basis, datum.lambda())
        .iter()
        .zip(coeffs.iter())
        .map(|(r, c)| r * c)
        .sum();
    let vm: Complex64 = monomial_row(&basis, datum.mu())
        .iter()
        .zip(coeffs.iter())
        .map(|(r, c)| r * c)
        .sum();
    let s = sup
        .max(vl.norm() * (1.0 + 1e-9))
        .max(vm.norm() * (1.0 + 1e-9));
    if s < 1e-200 {
        // Degenerate winner (identically zero map): still a valid report.
        let map = poly_from(&basis, &coeffs, dim);
        return Ok(CaratheodorySearchResult {
            value: 0.0,
            map,
            design_sup: 0.0,
            stage_degree,
            candidate_index,
        });
    }
    let scaled: Vec<Complex64> = coeffs.iter().map(|c| c / s).collect();
    let map = poly_from(&basis, &scaled, dim);
    let value = rho(map.eval(datum.lambda()), map.eval(datum.mu()))?;
    let design_sup = oracle.design_sup(&stage, &scaled);
    Ok(CaratheodorySearchResult {
        value,
        map,
        design_sup,
        stage_degree,
        candidate_index,
    })
}
