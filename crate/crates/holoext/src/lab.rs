//! Desk-scale extension experiments: variety sampling with closed-form
//! membership residuals, totally-geodesic testing against ball geodesics,
//! extension-failure certificate searches, retract verification, and the
//! ball slice decomposition identity.

use num_complex::Complex64;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::hyperbolic::{caratheodory_search, kobayashi_ball, Datum};
use crate::point::Point;
use crate::poly::{horner, Poly};
use crate::rng::{self, mix_seed};
use crate::search::{monomial_basis, multistart_stage};

/// Interior scale for parabola samples.
pub const PARABOLA_SCALE: f64 = 0.9;
/// Parameter radius for parabola samples; keeps `0.9 (t, t^2)` safely
/// inside the ball.
pub const PARABOLA_T_RADIUS: f64 = 0.8;

/// The variety specs the lab can sample and measure residuals against.
#[derive(Debug, Clone, PartialEq)]
pub enum VarietySpec {
    /// `(z_1, ..., z_k, 0, ..., 0)` inside the ball of the given dimension.
    BallSlice { k: usize, dim: usize },
    /// `0.9 (t, t^2)` for `|t| <= 0.8`, inside the two-ball.
    ParabolaCurve,
    /// `(2z, z^2)` for `z` in the disk, inside the symmetrized bidisk.
    SymR,
    /// `(beta + conj(beta) z, z)` for `z` in the disk.
    SymD { beta: Complex64 },
    /// The union of the two previous branches.
    SymRUnionD { beta: Complex64 },
    /// An explicit finite point set of the given ambient domain.
    PointList { domain: DomainSpec, points: Vec<Point> },
}

/// A finite sample of a variety plus its defining spec.
#[derive(Debug, Clone)]
pub struct VarietySample {
    spec: VarietySpec,
    points: Vec<Point>,
}

/// A one-parameter closure branch used to certify `|p| <= 1` on the
/// closure of a sampled variety: coordinates are polynomials in the branch
/// parameter, constrained on the circle of the given radius.
pub(crate) enum ClosureBranch {
    Curve { coords: Vec<Vec<Complex64>>, radius: f64 },
    Grid(Vec<Point>),
}

impl VarietySpec {
    fn validate(&self) -> Result<()> {
        match self {
            VarietySpec::BallSlice { k, dim } => {
                if *k == 0 || *k > *dim {
                    return Err(Error::InvalidParameter(format!(
                        "ball slice needs 1 <= k <= dim, got k = {k}, dim = {dim}"
                    )));
                }
            }
            VarietySpec::SymD { beta } | VarietySpec::SymRUnionD { beta } => {
                if beta.norm() >= 1.0 {
                    return Err(Error::InvalidParameter(
                        "sym_d parameter beta must lie in the open disk".into(),
                    ));
                }
            }
            VarietySpec::PointList { domain, points } => {
                if points.is_empty() {
                    return Err(Error::InvalidParameter("point list must be nonempty".into()));
                }
                for p in points {
                    if !domain.membership(p)? {
                        return Err(Error::OutsideDomain {
                            context: "point-list variety member".into(),
                        });
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The domain the variety lives in.
    pub fn ambient_domain(&self) -> DomainSpec {
        match self {
            VarietySpec::BallSlice { dim, .. } => DomainSpec::Ball { dim: *dim },
            VarietySpec::ParabolaCurve => DomainSpec::Ball { dim: 2 },
            VarietySpec::SymR | VarietySpec::SymD { .. } | VarietySpec::SymRUnionD { .. } => {
                DomainSpec::SymmetrizedBidisk
            }
            VarietySpec::PointList { domain, .. } => domain.clone(),
        }
    }

    /// Closed-form residual measuring how far a point is from the variety's
    /// defining equations (distance to the point set for explicit lists).
    pub fn residual(&self, p: &Point) -> f64 {
        match self {
            VarietySpec::BallSlice { k, .. } => p
                .coords()
                .iter()
                .skip(*k)
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt(),
            VarietySpec::ParabolaCurve => {
                (p.coord(1) - p.coord(0) * p.coord(0) / PARABOLA_SCALE).norm()
            }
            VarietySpec::SymR => (p.coord(1) - p.coord(0) * p.coord(0) * 0.25).norm(),
            VarietySpec::SymD { beta } => (p.coord(0) - beta - beta.conj() * p.coord(1)).norm(),
            VarietySpec::SymRUnionD { beta } => {
                let r = VarietySpec::SymR.residual(p);
                let d = VarietySpec::SymD { beta: *beta }.residual(p);
                r.min(d)
            }
            VarietySpec::PointList { points, .. } => points
                .iter()
                .map(|q| p.dist(q))
                .fold(f64::INFINITY, f64::min),
        }
    }

    fn anchors(&self) -> Vec<Point> {
        match self {
            VarietySpec::BallSlice { dim, .. } => {
                let mut half = vec![Complex64::new(0.0, 0.0); *dim];
                half[0] = Complex64::new(0.5, 0.0);
                vec![Point::zero(*dim), Point::new(half).unwrap()]
            }
            VarietySpec::ParabolaCurve => vec![
                parabola_point(Complex64::new(0.0, 0.0)),
                parabola_point(Complex64::new(0.5, 0.0)),
            ],
            VarietySpec::SymR => vec![
                sym_r_point(Complex64::new(0.0, 0.0)),
                sym_r_point(Complex64::new(0.5, 0.0)),
            ],
            VarietySpec::SymD { beta } => vec![
                sym_d_point(*beta, Complex64::new(0.0, 0.0)),
                sym_d_point(*beta, Complex64::new(0.5, 0.0)),
            ],
            VarietySpec::SymRUnionD { beta } => vec![
                sym_r_point(Complex64::new(0.0, 0.0)),
                sym_d_point(*beta, Complex64::new(0.0, 0.0)),
                sym_r_point(Complex64::new(0.5, 0.0)),
                sym_d_point(*beta, Complex64::new(0.5, 0.0)),
            ],
            VarietySpec::PointList { points, .. } => points.clone(),
        }
    }

    pub(crate) fn closure_branches(&self) -> Vec<ClosureBranch> {
        let c0 = Complex64::new(0.0, 0.0);
        let c1 = Complex64::new(1.0, 0.0);
        match self {
            VarietySpec::BallSlice { k: 1, dim } => {
                let mut coords = vec![vec![c0, c1]];
                coords.resize(*dim, vec![c0]);
                vec![ClosureBranch::Curve { coords, radius: 1.0 }]
            }
            VarietySpec::BallSlice { k, dim } => {
                // Closure sphere of the slice, embedded in C^dim.
                let slice_ball = DomainSpec::Ball { dim: *k };
                let pts = slice_ball
                    .boundary_sample(2048, 0x51FF)
                    .expect("ball boundary sampling cannot fail")
                    .into_iter()
                    .map(|p| {
                        let mut coords = p.coords().to_vec();
                        coords.resize(*dim, c0);
                        Point::new(coords).unwrap()
                    })
                    .collect();
                vec![ClosureBranch::Grid(pts)]
            }
            VarietySpec::ParabolaCurve => {
                let s = Complex64::new(PARABOLA_SCALE, 0.0);
                vec![ClosureBranch::Curve {
                    coords: vec![vec![c0, s], vec![c0, c0, s]],
                    radius: PARABOLA_T_RADIUS,
                }]
            }
            VarietySpec::SymR => vec![ClosureBranch::Curve {
                coords: vec![vec![c0, Complex64::new(2.0, 0.0)], vec![c0, c0, c1]],
                radius: 1.0,
            }],
            VarietySpec::SymD { beta } => vec![ClosureBranch::Curve {
                coords: vec![vec![*beta, beta.conj()], vec![c0, c1]],
                radius: 1.0,
            }],
            VarietySpec::SymRUnionD { beta } => {
                let mut branches = VarietySpec::SymR.closure_branches();
                branches.extend(VarietySpec::SymD { beta: *beta }.closure_branches());
                branches
            }
            VarietySpec::PointList { .. } => vec![],
        }
    }
}

fn parabola_point(t: Complex64) -> Point {
    Point::new(vec![t * PARABOLA_SCALE, t * t * PARABOLA_SCALE]).unwrap()
}

fn sym_r_point(z: Complex64) -> Point {
    Point::new(vec![2.0 * z, z * z]).unwrap()
}

fn sym_d_point(beta: Complex64, z: Complex64) -> Point {
    Point::new(vec![beta + beta.conj() * z, z]).unwrap()
}

impl VarietySample {
    pub fn spec(&self) -> &VarietySpec {
        &self.spec
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ambient_domain(&self) -> DomainSpec {
        self.spec.ambient_domain()
    }

    pub fn residual(&self, p: &Point) -> f64 {
        self.spec.residual(p)
    }
}

/// Deterministic sample of a variety: fixed anchor points (the datum
/// material of the experiments) plus seeded fill up to `count`.
pub fn sample_variety(spec: &VarietySpec, count: usize, seed: u64) -> Result<VarietySample> {
    if count < 2 {
        return Err(Error::InvalidParameter("variety samples need count >= 2".into()));
    }
    spec.validate()?;
    let ambient = spec.ambient_domain();
    let mut points = spec.anchors();
    let mut rng = rng::rng_from(mix_seed(seed, 0x7A41, count as u64));
    let mut branch_flip = false;
    while points.len() < count {
        let p = match spec {
            VarietySpec::BallSlice { k, dim } => {
                let v = rng::complex_gaussian_vec(&mut rng, *k);
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if n < 1e-8 {
                    continue;
                }
                let u: f64 = rand::Rng::random(&mut rng);
                let r = 0.95 * u.powf(1.0 / (2.0 * *k as f64));
                let mut coords: Vec<Complex64> = v.into_iter().map(|z| z * (r / n)).collect();
                coords.resize(*dim, Complex64::new(0.0, 0.0));
                Point::new(coords)?
            }
            VarietySpec::ParabolaCurve => {
                parabola_point(rng::disk_point(&mut rng, PARABOLA_T_RADIUS))
            }
            VarietySpec::SymR => sym_r_point(rng::disk_point(&mut rng, 0.95)),
            VarietySpec::SymD { beta } => sym_d_point(*beta, rng::disk_point(&mut rng, 0.95)),
            VarietySpec::SymRUnionD { beta } => {
                branch_flip = !branch_flip;
                let z = rng::disk_point(&mut rng, 0.95);
                if branch_flip {
                    sym_r_point(z)
                } else {
                    sym_d_point(*beta, z)
                }
            }
            VarietySpec::PointList { .. } => break,
        };
        points.push(p);
    }
    for p in &points {
        if !ambient.membership(p)? {
            return Err(Error::InternalConsistency(
                "variety sampler produced a point outside its ambient domain".into(),
            ));
        }
    }
    Ok(VarietySample {
        spec: spec.clone(),
        points,
    })
}

/// Report of the totally-geodesic test.
#[derive(Debug, Clone)]
pub struct TotallyGeodesicReport {
    pub pass: bool,
    pub worst_pair: Option<Datum>,
    pub worst_distance: f64,
}

/// Samples pairs from the variety, computes the ball geodesic through each
/// pair, and measures the worst spec residual along a disk grid of each
/// geodesic. Requires the ambient domain to be a ball.
pub fn totally_geodesic_test(
    domain: &DomainSpec,
    sample: &VarietySample,
    pair_count: usize,
    seed: u64,
    tol: f64,
) -> Result<TotallyGeodesicReport> {
    let DomainSpec::Ball { dim } = domain else {
        return Err(Error::UnsupportedDomain {
            kind: domain.kind_name().into(),
            op: "totally_geodesic_test".into(),
        });
    };
    if pair_count == 0 {
        return Err(Error::InvalidParameter("pair count must be >= 1".into()));
    }
    let pts = sample.points();
    if pts.iter().any(|p| p.dim() != *dim) {
        return Err(Error::DimensionMismatch {
            expected: *dim,
            got: pts.first().map(|p| p.dim()).unwrap_or(0),
        });
    }
    let mut rng = rng::rng_from(mix_seed(seed, 0x9E0D, pair_count as u64));
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut attempts = 0;
    while pairs.len() < pair_count && attempts < 100 * pair_count {
        attempts += 1;
        if pts.len() < 2 {
            break;
        }
        let i = (rand::Rng::random::<u64>(&mut rng) % pts.len() as u64) as usize;
        let j = (rand::Rng::random::<u64>(&mut rng) % pts.len() as u64) as usize;
        if i == j || pts[i].dist(&pts[j]) < 1e-9 {
            continue;
        }
        pairs.push((i, j));
    }
    if pairs.is_empty() {
        // One point (or all coincident): vacuously geodesic.
        return Ok(TotallyGeodesicReport {
            pass: true,
            worst_pair: None,
            worst_distance: 0.0,
        });
    }

    let mut worst_distance = 0.0_f64;
    let mut worst_pair = None;
    for (i, j) in pairs {
        let datum = Datum::new(domain, pts[i].clone(), pts[j].clone())?;
        let geo = kobayashi_ball(&datum)?;
        let mut pair_worst = 0.0_f64;
        for ir in 0..8 {
            let r = 0.05 + 0.9 * ir as f64 / 7.0;
            for ia in 0..16 {
                let theta = std::f64::consts::TAU * ia as f64 / 16.0;
                let zeta = Complex64::new(r * theta.cos(), r * theta.sin());
                let res = sample.residual(&geo.disc.eval(zeta));
                if res > pair_worst {
                    pair_worst = res;
                }
            }
        }
        let res0 = sample.residual(&geo.disc.eval(Complex64::new(0.0, 0.0)));
        pair_worst = pair_worst.max(res0);
        if pair_worst > worst_distance {
            worst_distance = pair_worst;
            worst_pair = Some(datum);
        }
    }
    Ok(TotallyGeodesicReport {
        pass: worst_distance <= tol,
        worst_pair,
        worst_distance,
    })
}

/// An extension-failure certificate: a polynomial of sup-norm one on the
/// sampled variety whose separation on the datum beats the best norm-one
/// competitor on the whole domain. Positive margin refutes norm-preserving
/// extension for the sampled variety; nonpositive margin is inconclusive.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub map: Poly,
    pub datum: Datum,
    pub achieved: f64,
    pub baseline: f64,
    pub margin: f64,
    pub sup_on_v: f64,
}

fn circle_sup(coeffs: &[Complex64], radius: f64, grid: usize, refine_iters: usize) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    let mut best = 0.0_f64;
    let mut best_theta = 0.0_f64;
    for t in 0..grid {
        let theta = std::f64::consts::TAU * t as f64 / grid as f64;
        let z = Complex64::new(radius * theta.cos(), radius * theta.sin());
        let v = horner(coeffs, z).norm();
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    // Golden-section polish of the argmax bracket.
    let delta = std::f64::consts::TAU / grid as f64;
    let (mut a, mut b) = (best_theta - delta, best_theta + delta);
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let eval = |theta: f64| {
        let z = Complex64::new(radius * theta.cos(), radius * theta.sin());
        horner(coeffs, z).norm()
    };
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..refine_iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = eval(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = eval(x1);
        }
    }
    best.max(f1).max(f2)
}

/// Per-stage feasibility data for the certificate search: sample-point
/// monomial rows plus linear restriction tables onto each closure branch.
struct VarietySup {
    sample_rows: Vec<Vec<Complex64>>,
    grid_rows: Vec<Vec<Vec<Complex64>>>,
    // Per curve branch: (radius, per-monomial one-variable coefficients).
    curves: Vec<(f64, Vec<Vec<Complex64>>)>,
}

fn conv(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl VarietySup {
    fn new(sample: &VarietySample, basis: &[Vec<u32>]) -> Self {
        let row_at = |p: &Point| -> Vec<Complex64> {
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
        };
        let sample_rows = sample.points().iter().map(&row_at).collect();
        let mut grid_rows = Vec::new();
        let mut curves = Vec::new();
        for branch in sample.spec().closure_branches() {
            match branch {
                ClosureBranch::Grid(pts) => {
                    grid_rows.push(pts.iter().map(&row_at).collect());
                }
                ClosureBranch::Curve { coords, radius } => {
                    // Restriction is linear in the coefficients: precompute
                    // each monomial's one-variable coefficient vector.
                    let tables: Vec<Vec<Complex64>> = basis
                        .iter()
                        .map(|alpha| {
                            let mut acc = vec![Complex64::new(1.0, 0.0)];
                            for (j, &pw) in alpha.iter().enumerate() {
                                for _ in 0..pw {
                                    acc = conv(&acc, &coords[j]);
                                }
                            }
                            acc
                        })
                        .collect();
                    curves.push((radius, tables));
                }
            }
        }
        Self {
            sample_rows,
            grid_rows,
            curves,
        }
    }

    fn sup(&self, coeffs: &[Complex64], refine_iters: usize) -> f64 {
        let mut sup = 0.0_f64;
        for row in &self.sample_rows {
            let v: Complex64 = row.iter().zip(coeffs.iter()).map(|(r, c)| r * c).sum();
            sup = sup.max(v.norm());
        }
        for rows in &self.grid_rows {
            for row in rows {
                let v: Complex64 = row.iter().zip(coeffs.iter()).map(|(r, c)| r * c).sum();
                sup = sup.max(v.norm());
            }
        }
        for (radius, tables) in &self.curves {
            let mut q: Vec<Complex64> = Vec::new();
            for (table, c) in tables.iter().zip(coeffs.iter()) {
                if q.len() < table.len() {
                    q.resize(table.len(), Complex64::new(0.0, 0.0));
                }
                for (k, t) in table.iter().enumerate() {
                    q[k] += t * c;
                }
            }
            sup = sup.max(circle_sup(&q, *radius, 96, refine_iters));
        }
        sup
    }
}

/// Searches for an extension-failure certificate on a sampled variety.
///
/// The competitor is constrained to sup-norm one on the sample points and
/// on the variety's closure branches (restriction circles sampled and
/// polished, closure spheres gridded), then its datum separation is
/// compared against the ambient baseline: the exact geodesic distance for
/// the ball, the Caratheodory search value otherwise.
pub fn certificate_search(
    domain: &DomainSpec,
    sample: &VarietySample,
    datum: &Datum,
    degree: u32,
    budget: usize,
    seed: u64,
) -> Result<Certificate> {
    if degree == 0 || budget == 0 {
        return Err(Error::InvalidParameter("degree and budget must be >= 1".into()));
    }
    let dim = domain.dim();
    if sample.ambient_domain() != *domain {
        return Err(Error::InvalidParameter(
            "sample's ambient domain differs from the experiment domain".into(),
        ));
    }
    let in_sample = |p: &Point| sample.points().iter().any(|q| p.dist(q) <= 1e-12);
    if !in_sample(datum.lambda()) || !in_sample(datum.mu()) {
        return Err(Error::InvalidParameter(
            "certificate datum points must belong to the sample".into(),
        ));
    }

    let baseline = match domain {
        DomainSpec::Ball { .. } => kobayashi_ball(datum)?.distance,
        _ => caratheodory_search(domain, datum, degree, budget, mix_seed(seed, 0xBA5E, 0))?.value,
    };

    let stage_budget = (budget / degree as usize).max(1);
    let mut prev_coeffs: Option<Vec<Complex64>> = None;
    let mut winner: Option<(f64, Vec<Complex64>, Vec<Vec<u32>>, u32)> = None;

    for g in 1..=degree {
        let basis = monomial_basis(dim, g);
        let sup_oracle = VarietySup::new(sample, &basis);
        let m_lambda: Vec<Complex64> = basis
            .iter()
            .map(|alpha| {
                let mut m = Complex64::new(1.0, 0.0);
                for (j, &pw) in alpha.iter().enumerate() {
                    for _ in 0..pw {
                        m *= datum.lambda().coord(j);
                    }
                }
                m
            })
            .collect();
        let m_mu: Vec<Complex64> = basis
            .iter()
            .map(|alpha| {
                let mut m = Complex64::new(1.0, 0.0);
                for (j, &pw) in alpha.iter().enumerate() {
                    for _ in 0..pw {
                        m *= datum.mu().coord(j);
                    }
                }
                m
            })
            .collect();

        let value_with = |coeffs: &[Complex64], refine: usize| -> f64 {
            let sup = sup_oracle.sup(coeffs, refine);
            let vl: Complex64 = m_lambda.iter().zip(coeffs.iter()).map(|(r, c)| r * c).sum();
            let vm: Complex64 = m_mu.iter().zip(coeffs.iter()).map(|(r, c)| r * c).sum();
            let s = sup
                .max(vl.norm() * (1.0 + 1e-9))
                .max(vm.norm() * (1.0 + 1e-9));
            if s < 1e-200 {
                return 0.0;
            }
            let a = vl / s;
            let b = vm / s;
            (a - b).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm()
        };
        let cheap = |coeffs: &[Complex64]| value_with(coeffs, 16);
        let polished = |coeffs: &[Complex64]| value_with(coeffs, 48);

        let mut det_starts: Vec<Vec<Complex64>> = Vec::new();
        if let Some(prev) = &prev_coeffs {
            det_starts.push(prev.clone());
        }
        for j in 0..dim {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); basis.len()];
            coeffs[1 + j] = Complex64::new(1.0, 0.0);
            det_starts.push(coeffs);
        }
        let diff = datum.lambda().sub(datum.mu());
        let mut diff_start = vec![Complex64::new(0.0, 0.0); basis.len()];
        for j in 0..dim {
            diff_start[1 + j] = (diff.coord(j) / diff.norm()).conj();
        }
        det_starts.push(diff_start);

        if let Some(cand) = multistart_stage(
            &det_starts,
            basis.len(),
            stage_budget,
            seed,
            0xCE27_0000 | g as u64,
            &cheap,
            &polished,
        ) {
            prev_coeffs = Some(cand.coeffs.clone());
            let replace = match &winner {
                None => true,
                Some((best, ..)) => cand.polished_value > *best,
            };
            if replace {
                winner = Some((cand.polished_value, cand.coeffs, basis.clone(), g));
            }
        }
    }

    let (_, coeffs, basis, stage_degree) = winner.ok_or_else(|| {
        Error::SearchFailure("certificate search produced no finite candidate".into())
    })?;
    let _ = stage_degree;
    let sup_oracle = VarietySup::new(sample, &basis);
    let sup = sup_oracle.sup(&coeffs, 48);
    let vl: Complex64 = {
        let p = crate::hyperbolic::poly_from(&basis, &coeffs, dim);
        p.eval(datum.lambda())
    };
    let vm: Complex64 = {
        let p = crate::hyperbolic::poly_from(&basis, &coeffs, dim);
        p.eval(datum.mu())
    };
    let s = sup
        .max(vl.norm() * (1.0 + 1e-9))
        .max(vm.norm() * (1.0 + 1e-9))
        .max(1e-200);
    let scaled: Vec<Complex64> = coeffs.iter().map(|c| c / s).collect();
    let map = crate::hyperbolic::poly_from(&basis, &scaled, dim);
    let a = map.eval(datum.lambda());
    let b = map.eval(datum.mu());
    let achieved = (a - b).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm();
    let sup_on_v = sup_oracle.sup(&scaled, 48);
    Ok(Certificate {
        map,
        datum: datum.clone(),
        achieved,
        baseline,
        margin: achieved - baseline,
        sup_on_v,
    })
}

/// A polynomial self-map candidate for a retraction onto a variety.
#[derive(Debug, Clone)]
pub struct RetractMap {
    components: Vec<Poly>,
}

impl RetractMap {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("retract map needs components".into()));
        }
        let d = components.len();
        for c in &components {
            if c.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: c.dim(),
                });
            }
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, p: &Point) -> Point {
        Point::new(self.components.iter().map(|c| c.eval(p)).collect())
            .expect("retract evaluation is finite")
    }
}

/// Report of the three retract laws on seeded probes.
#[derive(Debug, Clone)]
pub struct RetractReport {
    pub idempotent_pass: bool,
    pub fixes_v_pass: bool,
    pub range_in_v_pass: bool,
}

/// Checks idempotence, fixing of the sampled variety, and range containment
/// (by spec residual) on seeded interior probes.
pub fn retract_check(
    r: &RetractMap,
    domain: &DomainSpec,
    sample: &VarietySample,
    probe_count: usize,
    seed: u64,
    tol: f64,
) -> Result<RetractReport> {
    if r.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: r.dim(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tol must be > 0".into()));
    }
    let probes = domain.interior_sample(probe_count, seed)?;
    let mut idempotent_pass = true;
    let mut range_in_v_pass = true;
    for x in &probes {
        let y = r.eval(x);
        if !domain.membership_closed(&y, 1e-9)? {
            return Err(Error::RangeViolation {
                context: format!("probe maps to a point at distance-to-closure > 1e-9 ({y:?})"),
            });
        }
        if r.eval(&y).dist(&y) > tol {
            idempotent_pass = false;
        }
        if sample.residual(&y) > tol {
            range_in_v_pass = false;
        }
    }
    let mut fixes_v_pass = true;
    for v in sample.points() {
        if r.eval(v).dist(v) > tol {
            fixes_v_pass = false;
        }
    }
    Ok(RetractReport {
        idempotent_pass,
        fixes_v_pass,
        range_in_v_pass,
    })
}

/// The two parts of the ball slice decomposition.
#[derive(Debug, Clone)]
pub struct SliceDecomposition {
    pub scaled_b: Point,
    pub remainder: Point,
}

/// Splits `c` (a point of the k-ball, embedded) as a multiple of `b` plus a
/// remainder with vanishing k-th coordinate; the two parts sum back to `c`
/// with at most one rounding per coordinate.
pub fn slice_decomposition(b: &Point, c: &Point) -> Result<SliceDecomposition> {
    let d = b.dim();
    let k = c.dim();
    if k > d {
        return Err(Error::DimensionMismatch { expected: d, got: k });
    }
    if b.norm() >= 1.0 {
        return Err(Error::OutsideDomain {
            context: "slice decomposition base point must lie in the open ball".into(),
        });
    }
    for j in k..d {
        if b.coord(j).norm() > 1e-14 {
            return Err(Error::InvalidParameter(format!(
                "base point must have zero coordinates beyond index {k}"
            )));
        }
    }
    let bk = b.coord(k - 1);
    if bk.norm() <= 1e-14 {
        return Err(Error::InvalidParameter(
            "base point's k-th coordinate must be nonzero".into(),
        ));
    }
    if !(c.norm() < bk.norm() / 2.0) {
        return Err(Error::InvalidParameter(
            "slice decomposition requires ||c|| < |b_k| / 2".into(),
        ));
    }
    let ratio = c.coord(k - 1) / bk;
    let scaled_b = b.scale(ratio);
    let mut rem = Vec::with_capacity(d);
    for j in 0..d {
        if j == k - 1 || j >= k {
            rem.push(Complex64::new(0.0, 0.0));
        } else {
            rem.push(c.coord(j) - scaled_b.coord(j));
        }
    }
    Ok(SliceDecomposition {
        scaled_b,
        remainder: Point::new(rem)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::left_inverse_ball;
    use crate::poly::AnalyticDisc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sample_variety_anchors_and_membership() {
        let sample = sample_variety(&VarietySpec::SymR, 20, 3).unwrap();
        assert!(sample
            .points()
            .iter()
            .any(|p| p.dist(&Point::from_reals(&[1.0, 0.25])) < 1e-12));
        for p in sample.points() {
            assert!(sample.residual(p) < 1e-12);
        }

        let sample = sample_variety(&VarietySpec::SymD { beta: c(0.0, 0.0) }, 16, 1).unwrap();
        for p in sample.points() {
            assert!(p.coord(0).norm() < 1e-14, "sym_d(0) points are (0, z)");
        }

        let union = sample_variety(&VarietySpec::SymRUnionD { beta: c(0.0, 0.0) }, 16, 0).unwrap();
        assert!(union.points().iter().any(|p| p.norm() < 1e-14));

        assert!(sample_variety(&VarietySpec::SymD { beta: c(1.0, 0.0) }, 8, 0).is_err());
        assert!(sample_variety(&VarietySpec::SymR, 1, 0).is_err());

        // Determinism.
        let a = sample_variety(&VarietySpec::ParabolaCurve, 40, 5).unwrap();
        let b = sample_variety(&VarietySpec::ParabolaCurve, 40, 5).unwrap();
        assert_eq!(a.points(), b.points());
    }

    #[test]
    fn geodesic_dichotomy() {
        let ball = DomainSpec::ball(2).unwrap();
        let slice = sample_variety(&VarietySpec::BallSlice { k: 1, dim: 2 }, 30, 2).unwrap();
        let rep = totally_geodesic_test(&ball, &slice, 25, 4, 1e-10).unwrap();
        assert!(rep.pass, "slice worst residual {}", rep.worst_distance);

        let parabola = sample_variety(&VarietySpec::ParabolaCurve, 30, 2).unwrap();
        let rep = totally_geodesic_test(&ball, &parabola, 25, 4, 1e-10).unwrap();
        assert!(!rep.pass);
        assert!(rep.worst_distance >= 1e-3, "worst {}", rep.worst_distance);
        assert!(rep.worst_pair.is_some());

        // A single-point sample passes vacuously.
        let single = VarietySample {
            spec: VarietySpec::PointList {
                domain: ball.clone(),
                points: vec![Point::zero(2)],
            },
            points: vec![Point::zero(2)],
        };
        let rep = totally_geodesic_test(&ball, &single, 5, 0, 1e-10).unwrap();
        assert!(rep.pass && rep.worst_pair.is_none());
    }

    #[test]
    fn certificate_on_parabola_vs_slice() {
        let ball = DomainSpec::ball(2).unwrap();

        let parabola = sample_variety(&VarietySpec::ParabolaCurve, 64, 7).unwrap();
        let datum = Datum::new(
            &ball,
            parabola.points()[0].clone(),
            parabola.points()[1].clone(),
        )
        .unwrap();
        let cert = certificate_search(&ball, &parabola, &datum, 3, 3000, 7).unwrap();
        assert!(cert.sup_on_v <= 1.0 + 1e-9);
        assert!(cert.margin > 0.0, "parabola margin {}", cert.margin);
        // Recomputing the separation from the map agrees with the report.
        let re = crate::hyperbolic::rho(
            cert.map.eval(datum.lambda()),
            cert.map.eval(datum.mu()),
        )
        .unwrap();
        assert!((re - cert.achieved).abs() < 1e-12);

        let slice = sample_variety(&VarietySpec::BallSlice { k: 1, dim: 2 }, 64, 7).unwrap();
        let datum = Datum::new(&ball, slice.points()[0].clone(), slice.points()[1].clone()).unwrap();
        let cert = certificate_search(&ball, &slice, &datum, 3, 3000, 7).unwrap();
        assert!(
            cert.margin <= 1e-6,
            "slice must not be refuted: margin {}",
            cert.margin
        );

        // The datum must come from the sample.
        let outside = Datum::new(
            &ball,
            Point::from_reals(&[0.11, 0.07]),
            Point::from_reals(&[0.2, 0.1]),
        )
        .unwrap();
        assert!(certificate_search(&ball, &slice, &outside, 2, 100, 0).is_err());
    }

    #[test]
    fn retract_examples() {
        let ball = DomainSpec::ball(2).unwrap();
        let slice = sample_variety(&VarietySpec::BallSlice { k: 1, dim: 2 }, 24, 9).unwrap();

        // Coordinate projection retracts onto the slice.
        let proj = RetractMap::new(vec![Poly::coordinate(2, 0), Poly::zero(2)]).unwrap();
        let rep = retract_check(&proj, &ball, &slice, 50, 11, 1e-10).unwrap();
        assert!(rep.idempotent_pass && rep.fixes_v_pass && rep.range_in_v_pass);

        // The Lempert retract built from a verified geodesic and left
        // inverse: r = k о phi with k the slice direction.
        let u = Point::from_reals(&[1.0, 0.0]);
        let disc = AnalyticDisc::linear(u.clone());
        let phi = left_inverse_ball(&disc).unwrap();
        let comps: Vec<Poly> = (0..2)
            .map(|i| phi.scale(u.coord(i)))
            .collect();
        let lempert = RetractMap::new(comps).unwrap();
        let rep = retract_check(&lempert, &ball, &slice, 50, 11, 1e-10).unwrap();
        assert!(rep.idempotent_pass && rep.fixes_v_pass && rep.range_in_v_pass);

        // Swapping coordinates does not fix the slice.
        let swap = RetractMap::new(vec![Poly::coordinate(2, 1), Poly::zero(2)]).unwrap();
        let rep = retract_check(&swap, &ball, &slice, 50, 11, 1e-10).unwrap();
        assert!(!rep.fixes_v_pass);
    }

    #[test]
    fn slice_decomposition_examples() {
        // b = (0, 1/2), c = (0, 1/5): scaled = (0, 1/5), remainder = 0.
        let b = Point::from_reals(&[0.0, 0.5]);
        let cpt = Point::from_reals(&[0.0, 0.2]);
        let dec = slice_decomposition(&b, &cpt).unwrap();
        assert!(dec.scaled_b.dist(&Point::from_reals(&[0.0, 0.2])) < 1e-15);
        assert!(dec.remainder.norm() < 1e-15);

        // c = 0 gives both parts zero.
        let dec = slice_decomposition(&b, &Point::zero(2)).unwrap();
        assert!(dec.scaled_b.norm() == 0.0 && dec.remainder.norm() == 0.0);

        // b = (1/2, 1/2, 0), c = (1/8, 1/8).
        let b = Point::from_reals(&[0.5, 0.5, 0.0]);
        let cpt = Point::from_reals(&[0.125, 0.125]);
        let dec = slice_decomposition(&b, &cpt).unwrap();
        assert!(dec.scaled_b.dist(&Point::from_reals(&[0.125, 0.125, 0.0])) < 1e-15);
        assert!(dec.remainder.norm() < 1e-15);

        // Rejection of the hypothesis violation.
        let too_big = Point::from_reals(&[0.3, 0.3]);
        assert!(slice_decomposition(&b, &too_big).is_err());
    }

    #[test]
    fn slice_decomposition_sum_identity() {
        let mut rng = crate::rng::rng_from(19);
        for _ in 0..200 {
            let b = Point::new(vec![
                rng::disk_point(&mut rng, 0.4),
                rng::disk_point(&mut rng, 0.4) + c(0.3, 0.0),
                c(0.0, 0.0),
            ])
            .unwrap();
            let bk = b.coord(1);
            if bk.norm() < 0.05 || b.norm() >= 1.0 {
                continue;
            }
            let mut cpt;
            loop {
                cpt = Point::new(vec![
                    rng::disk_point(&mut rng, 0.2),
                    rng::disk_point(&mut rng, 0.2),
                ])
                .unwrap();
                if cpt.norm() < bk.norm() / 2.0 {
                    break;
                }
            }
            let dec = slice_decomposition(&b, &cpt).unwrap();
            // k-th coordinate of the remainder is identically zero; the sum
            // reproduces c within one rounding per coordinate.
            assert_eq!(dec.remainder.coord(1), c(0.0, 0.0));
            let sum = dec.scaled_b.add(&dec.remainder);
            for j in 0..2 {
                assert!((sum.coord(j) - cpt.coord(j)).norm() <= 1e-15);
            }
            assert!(sum.coord(2).norm() == 0.0);
            // The scaled part is a complex multiple of b: on the geodesic
            // through 0 and b.
            let cross = dec.scaled_b.coord(0) * b.coord(1) - dec.scaled_b.coord(1) * b.coord(0);
            assert!(cross.norm() < 1e-15);
        }
    }
}
