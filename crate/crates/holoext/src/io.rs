//! The JSON surface shared with the CLI: problem-file schemas, validated
//! parsers for untrusted input, and report helpers. Every `parse_*`
//! function accepts raw bytes, never panics on malformed input, and
//! returns structured errors with line/column positions for JSON faults.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::lab::VarietySpec;
use crate::pick::KernelId;
use crate::point::Point;
use crate::poly::{AnalyticDisc, Poly, Term};

/// A JSON parse failure with position information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonFault {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for JsonFault {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        write!(
            f,
            "{} at line {}, column {}",
            self.message, self.line, self.column
        )
    }
}

/// Outcome of parsing untrusted bytes: either a JSON fault with position or
/// a domain-validation error.
#[derive(Debug)]
pub enum ParseError {
    Json(JsonFault),
    Invalid(Error),
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        match self {
            ParseError::Json(fault) => write!(f, "malformed JSON: {fault}"),
            ParseError::Invalid(err) => write!(f, "invalid input: {err}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn decode<'a, T: Deserialize<'a>>(bytes: &'a [u8]) -> std::result::Result<T, ParseError> {
    serde_json::from_slice(bytes).map_err(|e| {
        ParseError::Json(JsonFault {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })
    })
}

/// SHA-256 digest of raw input bytes, hex-encoded; reports embed it so any
/// run can be replayed against the exact input.
pub fn input_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

// ---------------------------------------------------------------------------
// Domain specs

/// Parses a domain spec: `{"kind":"ball","dim":2}`,
/// `{"kind":"ellipsoid","alpha":[...],"beta":[...]}`, `{"kind":"bidisk"}`,
/// `{"kind":"symmetrized_bidisk"}`.
pub fn parse_domain_spec(bytes: &[u8]) -> std::result::Result<DomainSpec, ParseError> {
    let spec: DomainSpec = decode(bytes)?;
    validate_domain(&spec).map_err(ParseError::Invalid)?;
    Ok(spec)
}

fn validate_domain(spec: &DomainSpec) -> Result<()> {
    match spec {
        DomainSpec::Ball { dim } => {
            DomainSpec::ball(*dim)?;
        }
        DomainSpec::Ellipsoid { alpha, beta } => {
            DomainSpec::ellipsoid(alpha.clone(), beta.clone())?;
        }
        DomainSpec::Bidisk | DomainSpec::SymmetrizedBidisk => {}
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Pick problems

#[derive(Deserialize)]
#[serde(untagged)]
enum NodeRepr {
    Vector(Vec<[f64; 2]>),
    Scalar([f64; 2]),
}

#[derive(Deserialize)]
struct PickProblemJson {
    kernel: String,
    nodes: Vec<NodeRepr>,
    targets: Vec<[f64; 2]>,
    #[serde(default)]
    tol: Option<f64>,
}

/// A parsed and validated Pick problem file.
#[derive(Debug, Clone)]
pub struct PickProblemInput {
    pub kernel: KernelId,
    pub nodes: Vec<Point>,
    pub targets: Vec<Complex64>,
    pub tol: f64,
}

pub fn kernel_from_name(name: &str) -> Result<KernelId> {
    match name {
        "szego_disk" => Ok(KernelId::SzegoDisk),
        "szego_polydisk_product" => Ok(KernelId::SzegoPolydiskProduct),
        "cauchy_szego_ball" => Ok(KernelId::CauchySzegoBall),
        other => Err(Error::InvalidParameter(format!("unknown kernel `{other}`"))),
    }
}

/// Parses `{"kernel":"szego_disk","nodes":[...],"targets":[...]}`. Scalar
/// nodes may be written as `[re, im]` or `[[re, im]]`.
pub fn parse_pick_problem(bytes: &[u8]) -> std::result::Result<PickProblemInput, ParseError> {
    let raw: PickProblemJson = decode(bytes)?;
    let build = || -> Result<PickProblemInput> {
        let kernel = kernel_from_name(&raw.kernel)?;
        let mut nodes = Vec::with_capacity(raw.nodes.len());
        for n in &raw.nodes {
            let coords: Vec<Complex64> = match n {
                NodeRepr::Scalar([re, im]) => vec![Complex64::new(*re, *im)],
                NodeRepr::Vector(v) => v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            };
            nodes.push(Point::new(coords)?);
        }
        let targets: Vec<Complex64> = raw
            .targets
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        if targets.len() != nodes.len() {
            return Err(Error::LengthMismatch {
                what: "targets",
                expected: nodes.len(),
                got: targets.len(),
            });
        }
        let tol = raw.tol.unwrap_or(1e-9);
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::InvalidParameter("tol must be positive and finite".into()));
        }
        // Node validation (distinctness and domain membership) happens in
        // gram(); probe it here so the parser rejects bad files directly.
        crate::pick::gram(kernel, &nodes)?;
        Ok(PickProblemInput {
            kernel,
            nodes,
            targets,
            tol,
        })
    };
    build().map_err(ParseError::Invalid)
}

// ---------------------------------------------------------------------------
// Model-check inputs

#[derive(Deserialize)]
struct ModelCheckJson {
    kernel: String,
    nodes: Vec<NodeRepr>,
    poly: PolyJson,
    #[serde(default)]
    sup_on_v: Option<f64>,
    #[serde(default)]
    sup_on_omega: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ModelCheckInput {
    pub kernel: KernelId,
    pub nodes: Vec<Point>,
    pub poly: Poly,
    pub sup_on_v: Option<f64>,
    pub sup_on_omega: Option<f64>,
}

/// Parses a model-check file: kernel, nodes, a polynomial, and optional
/// sup bounds (computed from the nodes and a boundary sample when absent).
pub fn parse_model_check(bytes: &[u8]) -> std::result::Result<ModelCheckInput, ParseError> {
    let raw: ModelCheckJson = decode(bytes)?;
    let build = || -> Result<ModelCheckInput> {
        let kernel = kernel_from_name(&raw.kernel)?;
        let mut nodes = Vec::with_capacity(raw.nodes.len());
        for n in &raw.nodes {
            let coords: Vec<Complex64> = match n {
                NodeRepr::Scalar([re, im]) => vec![Complex64::new(*re, *im)],
                NodeRepr::Vector(v) => v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            };
            nodes.push(Point::new(coords)?);
        }
        crate::pick::gram(kernel, &nodes)?;
        let poly = poly_from_json(&raw.poly)?;
        if poly.dim() != nodes[0].dim() {
            return Err(Error::DimensionMismatch {
                expected: nodes[0].dim(),
                got: poly.dim(),
            });
        }
        for bound in [raw.sup_on_v, raw.sup_on_omega].into_iter().flatten() {
            if !(bound >= 0.0) || !bound.is_finite() {
                return Err(Error::InvalidParameter("sup bounds must be nonnegative".into()));
            }
        }
        Ok(ModelCheckInput {
            kernel,
            nodes,
            poly,
            sup_on_v: raw.sup_on_v,
            sup_on_omega: raw.sup_on_omega,
        })
    };
    build().map_err(ParseError::Invalid)
}

// ---------------------------------------------------------------------------
// Polynomials and discs

#[derive(Serialize, Deserialize)]
struct PolyJson {
    dim: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    powers: Vec<u32>,
    coeff: [f64; 2],
}

fn poly_from_json(raw: &PolyJson) -> Result<Poly> {
    let terms: Vec<Term> = raw
        .terms
        .iter()
        .map(|t| Term {
            powers: t.powers.clone(),
            coeff: Complex64::new(t.coeff[0], t.coeff[1]),
        })
        .collect();
    Poly::from_terms(raw.dim, terms)
}

/// Parses a polynomial map `{"dim":2,"terms":[{"powers":[1,0],"coeff":[1,0]}]}`.
pub fn parse_poly(bytes: &[u8]) -> std::result::Result<Poly, ParseError> {
    let raw: PolyJson = decode(bytes)?;
    poly_from_json(&raw).map_err(ParseError::Invalid)
}

/// Serializes a polynomial in the same schema `parse_poly` accepts.
pub fn poly_to_json(p: &Poly) -> serde_json::Value {
    serde_json::json!({
        "dim": p.dim(),
        "terms": p.terms().iter().map(|t| serde_json::json!({
            "powers": t.powers,
            "coeff": [t.coeff.re, t.coeff.im],
        })).collect::<Vec<_>>(),
    })
}

#[derive(Deserialize)]
struct DiscJson {
    coefficients: Vec<Vec<[f64; 2]>>,
}

/// Parses an analytic disc `{"coefficients":[[..d pairs..], ...]}`, one
/// vector coefficient per power.
pub fn parse_disc(bytes: &[u8]) -> std::result::Result<AnalyticDisc, ParseError> {
    let raw: DiscJson = decode(bytes)?;
    let build = || -> Result<AnalyticDisc> {
        let mut coeffs = Vec::with_capacity(raw.coefficients.len());
        for v in &raw.coefficients {
            coeffs.push(Point::new(
                v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            )?);
        }
        AnalyticDisc::new(coeffs)
    };
    build().map_err(ParseError::Invalid)
}

/// Serializes a disc in the same schema `parse_disc` accepts.
pub fn disc_to_json(disc: &AnalyticDisc) -> serde_json::Value {
    serde_json::json!({
        "coefficients": disc.coefficients().iter().map(|p| {
            p.coords().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// Extremal (datum) inputs

#[derive(Deserialize)]
struct ExtremalJson {
    domain: DomainSpec,
    lambda: Vec<[f64; 2]>,
    mu: Vec<[f64; 2]>,
}

#[derive(Debug, Clone)]
pub struct ExtremalInput {
    pub domain: DomainSpec,
    pub lambda: Point,
    pub mu: Point,
}

/// Parses `{"domain":{...},"lambda":[[re,im],..],"mu":[[re,im],..]}`.
pub fn parse_extremal_input(bytes: &[u8]) -> std::result::Result<ExtremalInput, ParseError> {
    let raw: ExtremalJson = decode(bytes)?;
    let build = || -> Result<ExtremalInput> {
        validate_domain(&raw.domain)?;
        let lambda = Point::new(
            raw.lambda
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
        )?;
        let mu = Point::new(raw.mu.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())?;
        // Membership and distinctness.
        crate::hyperbolic::Datum::new(&raw.domain, lambda.clone(), mu.clone())?;
        Ok(ExtremalInput {
            domain: raw.domain,
            lambda,
            mu,
        })
    };
    build().map_err(ParseError::Invalid)
}

// ---------------------------------------------------------------------------
// Experiments

#[derive(Deserialize)]
#[serde(tag = "spec", rename_all = "snake_case")]
enum VarietySpecJson {
    BallSlice { k: usize, dim: usize },
    Parabola,
    SymR,
    SymD { beta: [f64; 2] },
    SymRUnionD { beta: [f64; 2] },
    PointList { domain: DomainSpec, points: Vec<Vec<[f64; 2]>> },
}

#[derive(Deserialize)]
struct ExperimentJson {
    #[serde(flatten)]
    spec: VarietySpecJson,
    #[serde(default)]
    datum: Option<[usize; 2]>,
    #[serde(default)]
    degree: Option<u32>,
    #[serde(default)]
    budget: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    count: Option<usize>,
    #[serde(default)]
    tol: Option<f64>,
}

/// A parsed experiment configuration for the variety runners.
#[derive(Debug, Clone)]
pub struct ExperimentInput {
    pub spec: VarietySpec,
    /// Indices into the sampled points for the datum (defaults to the two
    /// anchor points 0 and 1).
    pub datum: (usize, usize),
    pub degree: u32,
    pub budget: usize,
    pub seed: u64,
    pub count: usize,
    pub tol: f64,
}

fn variety_spec_from_json(raw: &VarietySpecJson) -> Result<VarietySpec> {
    Ok(match raw {
        VarietySpecJson::BallSlice { k, dim } => VarietySpec::BallSlice { k: *k, dim: *dim },
        VarietySpecJson::Parabola => VarietySpec::ParabolaCurve,
        VarietySpecJson::SymR => VarietySpec::SymR,
        VarietySpecJson::SymD { beta } => VarietySpec::SymD {
            beta: Complex64::new(beta[0], beta[1]),
        },
        VarietySpecJson::SymRUnionD { beta } => VarietySpec::SymRUnionD {
            beta: Complex64::new(beta[0], beta[1]),
        },
        VarietySpecJson::PointList { domain, points } => {
            validate_domain(domain)?;
            let mut pts = Vec::with_capacity(points.len());
            for p in points {
                pts.push(Point::new(
                    p.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
                )?);
            }
            VarietySpec::PointList {
                domain: domain.clone(),
                points: pts,
            }
        }
    })
}

#[derive(Deserialize)]
struct RetractJson {
    #[serde(flatten)]
    spec: VarietySpecJson,
    map: Vec<PolyJson>,
    #[serde(default)]
    count: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    tol: Option<f64>,
}

/// A parsed retract-verification input: the variety spec plus the
/// candidate polynomial self-map, one component per coordinate.
#[derive(Debug, Clone)]
pub struct RetractInput {
    pub spec: VarietySpec,
    pub map: Vec<Poly>,
    pub count: usize,
    pub seed: u64,
    pub tol: f64,
}

/// Parses a retract file: a variety spec (flattened, as in experiments)
/// plus `"map": [poly, ...]`.
pub fn parse_retract_input(bytes: &[u8]) -> std::result::Result<RetractInput, ParseError> {
    let raw: RetractJson = decode(bytes)?;
    let build = || -> Result<RetractInput> {
        let spec = variety_spec_from_json(&raw.spec)?;
        let mut map = Vec::with_capacity(raw.map.len());
        for p in &raw.map {
            map.push(poly_from_json(p)?);
        }
        let count = raw.count.unwrap_or(40);
        let tol = raw.tol.unwrap_or(1e-9);
        if count == 0 || !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::InvalidParameter(
                "retract check needs count >= 1 and positive finite tol".into(),
            ));
        }
        Ok(RetractInput {
            spec,
            map,
            count,
            seed: raw.seed.unwrap_or(0),
            tol,
        })
    };
    build().map_err(ParseError::Invalid)
}

/// Parses an experiment file for the `variety` runners.
pub fn parse_experiment(bytes: &[u8]) -> std::result::Result<ExperimentInput, ParseError> {
    let raw: ExperimentJson = decode(bytes)?;
    let build = || -> Result<ExperimentInput> {
        let spec = variety_spec_from_json(&raw.spec)?;
        let degree = raw.degree.unwrap_or(4);
        let budget = raw.budget.unwrap_or(4000);
        let count = raw.count.unwrap_or(64);
        let tol = raw.tol.unwrap_or(1e-8);
        if degree == 0 || budget == 0 || count < 2 {
            return Err(Error::InvalidParameter(
                "experiment needs degree >= 1, budget >= 1, count >= 2".into(),
            ));
        }
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::InvalidParameter("tol must be positive and finite".into()));
        }
        let datum = raw.datum.map(|[a, b]| (a, b)).unwrap_or((0, 1));
        Ok(ExperimentInput {
            spec,
            datum,
            degree,
            budget,
            seed: raw.seed.unwrap_or(0),
            count,
            tol,
        })
    };
    build().map_err(ParseError::Invalid)
}
