//! Command handlers: each reads and validates its input, runs the library,
//! and emits a deterministic report (JSON envelope or a CSV table).

use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use holoext::domains::DomainSpec;
use holoext::hyperbolic::{caratheodory_search, kobayashi_ball, Datum};
use holoext::io::{self, ParseError};
use holoext::lab::{
    certificate_search, retract_check, sample_variety, totally_geodesic_test, Certificate,
    RetractMap, VarietySample, VarietySpec,
};
use holoext::linalg;
use holoext::model::{build_model, evaluate_poly, operator_norm, von_neumann_check};
use holoext::pick::{self, KernelId, PickProblem};
use holoext::point::Point;
use holoext::Error;

use crate::{OutputArgs, SpecArgs};

/// CLI failure carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Rejected input (bad file, bad JSON, domain validation): exit 2.
    Rejected(String),
    /// Two supposedly-equal computation paths disagreed: exit 3.
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        match self {
            CliError::Rejected(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Rejected(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalConsistency(_) => CliError::Internal(e.to_string()),
            other => CliError::Rejected(other.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Rejected(e.to_string())
    }
}

pub type CliResult = Result<(), CliError>;

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path)
        .map_err(|e| CliError::Rejected(format!("cannot read {}: {e}", path.display())))
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Wraps a report body in the deterministic envelope carrying tool
/// version, seed, and the input digest for replay.
fn envelope(command: &str, seed: Option<u64>, digest: &str, report: Value) -> Value {
    json!({
        "tool": "holoext",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": seed,
        "input_digest": digest,
        "report": report,
    })
}

fn emit(out: &OutputArgs, payload: &str) -> CliResult {
    let normalized = format!("{}\n", payload.trim_end_matches('\n'));
    match &out.output {
        Some(path) => std::fs::write(path, normalized)
            .map_err(|e| CliError::Rejected(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match write!(stdout, "{normalized}") {
                Ok(()) => Ok(()),
                // A closed pipe (e.g. `holoext ... | head`) is not a failure.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(CliError::Rejected(format!("cannot write to stdout: {e}"))),
            }
        }
    }
}

fn emit_json(out: &OutputArgs, value: &Value) -> CliResult {
    let payload = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Internal(format!("report serialization failed: {e}")))?;
    emit(out, &payload)
}

fn write_plot(path: &Path, svg: &str) -> CliResult {
    std::fs::write(path, svg)
        .map_err(|e| CliError::Rejected(format!("cannot write {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------

pub fn pick_solve(
    input: &Path,
    tol_override: Option<f64>,
    sweep_scales: Option<&str>,
    plot: Option<&Path>,
    out: &OutputArgs,
) -> CliResult {
    let bytes = read_input(input)?;
    let digest = io::input_digest(&bytes);
    let problem = io::parse_pick_problem(&bytes)?;
    let tol = tol_override.unwrap_or(problem.tol);
    let report = pick::minimal_sup_norm_report(problem.kernel, &problem.nodes, &problem.targets, tol)?;

    let mut sweep_rows: Vec<(f64, f64)> = Vec::new();
    if let Some(spec) = sweep_scales {
        for part in spec.split(',') {
            let scale: f64 = part
                .trim()
                .parse()
                .map_err(|_| CliError::Rejected(format!("bad sweep scale `{part}`")))?;
            if !(scale > 0.0) {
                return Err(CliError::Rejected("sweep scales must be positive".into()));
            }
            let scaled: Vec<Complex64> = problem.targets.iter().map(|w| w * scale).collect();
            let t = pick::minimal_sup_norm(problem.kernel, &problem.nodes, &scaled, tol)?;
            sweep_rows.push((scale, t));
        }
    }

    if let Some(path) = plot {
        if sweep_rows.is_empty() {
            return Err(CliError::Rejected(
                "--plot needs --sweep-scales to produce a sweep".into(),
            ));
        }
        write_plot(
            path,
            &crate::svg::line_plot("minimal norm vs target scale", "scale", "t*", &sweep_rows),
        )?;
    }

    if out.format == "csv" {
        if sweep_rows.is_empty() {
            return Err(CliError::Rejected(
                "csv format requires a sweep (--sweep-scales)".into(),
            ));
        }
        let mut csv = String::from("scale,t_star\n");
        for (s, t) in &sweep_rows {
            csv.push_str(&format!("{s},{t}\n"));
        }
        return emit(out, &csv);
    }

    let body = json!({
        "kernel": problem.kernel.name(),
        "t_star": report.t_star,
        "exact": report.exact,
        "bracket": [report.bracket.0, report.bracket.1],
        "iterations": report.iterations,
        "tol": tol,
        "trace": report.trace.iter().map(|s| json!({
            "t": s.t, "min_eigenvalue": s.min_eigenvalue, "feasible": s.feasible,
        })).collect::<Vec<_>>(),
        "sweep": sweep_rows.iter().map(|(s, t)| json!({"scale": s, "t_star": t})).collect::<Vec<_>>(),
    });
    emit_json(out, &envelope("pick solve", None, &digest, body))
}

// ---------------------------------------------------------------------------

pub fn model_check(input: &Path, seed: u64, out: &OutputArgs) -> CliResult {
    let bytes = read_input(input)?;
    let digest = io::input_digest(&bytes);
    let parsed = io::parse_model_check(&bytes)?;
    let model = build_model(parsed.kernel, &parsed.nodes)?;

    let values: Vec<Complex64> = parsed.nodes.iter().map(|n| parsed.poly.eval(n)).collect();
    let sup_on_v = parsed
        .sup_on_v
        .unwrap_or_else(|| values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    let sup_on_omega = match parsed.sup_on_omega {
        Some(s) => s,
        None => {
            let dim = parsed.nodes[0].dim();
            let boundary = parsed.kernel.reference_boundary_sample(dim, 2048, seed)?;
            boundary
                .iter()
                .map(|p| parsed.poly.eval(p).norm())
                .fold(0.0, f64::max)
        }
    };
    let vn = von_neumann_check(&model, &parsed.poly, sup_on_v, sup_on_omega)?;

    // Defect witness: the bottom eigenpair of the Pick matrix of the
    // polynomial's node values.
    let gram = pick::gram(parsed.kernel, &parsed.nodes)?;
    let problem = PickProblem::new(gram, values.clone())?;
    let m = pick::pick_matrix(&problem);
    let (min_eig, witness) = linalg::hermitian_min_eigenpair(&m);

    let vanishing = values.iter().all(|v| v.norm() <= 1e-12);
    let subordination_pass =
        holoext::model::subordination_check(&model, &parsed.poly, &values)?;

    let body = json!({
        "kernel": parsed.kernel.name(),
        "n_nodes": parsed.nodes.len(),
        "norm": vn.norm,
        "sup_on_v": sup_on_v,
        "sup_on_omega": sup_on_omega,
        "vn_v_pass": vn.vn_v_pass,
        "vn_omega_pass": vn.vn_omega_pass,
        "node_values": values.iter().map(|v| complex_json(*v)).collect::<Vec<_>>(),
        "min_defect_eigenvalue": min_eig,
        "witness": witness.iter().map(|a| complex_json(*a)).collect::<Vec<_>>(),
        "vanishes_on_nodes": vanishing,
        "subordination_pass": subordination_pass,
    });
    emit_json(out, &envelope("model check", Some(seed), &digest, body))
}

// ---------------------------------------------------------------------------

pub fn extremal_cara(
    input: &Path,
    degree: u32,
    budget: usize,
    seed: u64,
    out: &OutputArgs,
) -> CliResult {
    let bytes = read_input(input)?;
    let digest = io::input_digest(&bytes);
    let parsed = io::parse_extremal_input(&bytes)?;
    let datum = Datum::new(&parsed.domain, parsed.lambda.clone(), parsed.mu.clone())?;
    let res = caratheodory_search(&parsed.domain, &datum, degree, budget, seed)?;
    let body = json!({
        "domain": serde_json::to_value(&parsed.domain).unwrap(),
        "value": res.value,
        "map": io::poly_to_json(&res.map),
        "design_sup": res.design_sup,
        "stage_degree": res.stage_degree,
        "candidate_index": res.candidate_index,
        "degree": degree,
        "budget": budget,
    });
    emit_json(out, &envelope("extremal cara", Some(seed), &digest, body))
}

pub fn extremal_koba(input: &Path, out: &OutputArgs) -> CliResult {
    let bytes = read_input(input)?;
    let digest = io::input_digest(&bytes);
    let parsed = io::parse_extremal_input(&bytes)?;
    if !matches!(parsed.domain, DomainSpec::Ball { .. }) {
        return Err(CliError::Rejected(
            "closed-form extremals require a ball domain".into(),
        ));
    }
    let datum = Datum::new(&parsed.domain, parsed.lambda.clone(), parsed.mu.clone())?;
    let geo = kobayashi_ball(&datum)?;
    let body = json!({
        "disc": io::disc_to_json(&geo.disc),
        "param_lambda": complex_json(geo.param_lambda),
        "param_mu": complex_json(geo.param_mu),
        "distance": geo.distance,
    });
    emit_json(out, &envelope("extremal koba", None, &digest, body))
}

// ---------------------------------------------------------------------------

pub fn domain_slc(
    input: &Path,
    count: usize,
    seed: u64,
    tol: f64,
    tangent_samples: usize,
    out: &OutputArgs,
) -> CliResult {
    let bytes = read_input(input)?;
    let digest = io::input_digest(&bytes);
    let domain = io::parse_domain_spec(&bytes)?;
    let points = domain.boundary_sample(count, seed)?;
    let mut rows = Vec::with_capacity(points.len());
    let mut worst: Option<(f64, usize)> = None;
    let mut all_pass = true;
    for (idx, p) in points.iter().enumerate() {
        let rep = domain.check_strong_linear_convexity(p, tangent_samples, seed, tol)?;
        all_pass &= rep.pass;
        if worst.map(|(m, _)| rep.worst_margin < m).unwrap_or(true) {
            worst = Some((rep.worst_margin, idx));
        }
        rows.push((idx, p.clone(), rep));
    }

    if out.format == "csv" {
        let mut csv = String::from("point_id,pass,worst_margin\n");
        for (idx, _, rep) in &rows {
            csv.push_str(&format!("{idx},{},{}\n", rep.pass, rep.worst_margin));
        }
        return emit(out, &csv);
    }

    let body = json!({
        "domain": serde_json::to_value(&domain).unwrap(),
        "count": count,
        "tol": tol,
        "all_pass": all_pass,
        "worst_margin": worst.map(|(m, _)| m),
        "worst_point_id": worst.map(|(_, i)| i),
        "points": rows.iter().map(|(idx, p, rep)| json!({
            "id": idx,
            "point": serde_json::to_value(p).unwrap(),
            "pass": rep.pass,
            "worst_margin": rep.worst_margin,
            "worst_vector": serde_json::to_value(&rep.worst_vector).unwrap(),
        })).collect::<Vec<_>>(),
    });
    emit_json(out, &envelope("domain slc", Some(seed), &digest, body))
}

// ---------------------------------------------------------------------------

/// Resolves a variety experiment from flags or an experiment file.
fn resolve_spec(
    spec: &SpecArgs,
) -> Result<(VarietySpec, usize, u64, Option<(usize, usize)>, Option<(u32, usize)>, String), CliError> {
    if let Some(path) = &spec.input {
        let bytes = read_input(path)?;
        let digest = io::input_digest(&bytes);
        let exp = io::parse_experiment(&bytes)?;
        return Ok((
            exp.spec,
            exp.count,
            exp.seed,
            Some((exp.datum.0, exp.datum.1)),
            Some((exp.degree, exp.budget)),
            digest,
        ));
    }
    let name = spec
        .spec
        .as_deref()
        .ok_or_else(|| CliError::Rejected("either --spec or --input is required".into()))?;
    let beta = || -> Result<Complex64, CliError> {
        let raw = spec
            .beta
            .as_deref()
            .ok_or_else(|| CliError::Rejected("--beta re,im is required for this spec".into()))?;
        let parts: Vec<&str> = raw.split(',').collect();
        if parts.len() != 2 {
            return Err(CliError::Rejected("--beta must be `re,im`".into()));
        }
        let re: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| CliError::Rejected("bad --beta real part".into()))?;
        let im: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| CliError::Rejected("bad --beta imaginary part".into()))?;
        Ok(Complex64::new(re, im))
    };
    let variety = match name {
        "parabola" => VarietySpec::ParabolaCurve,
        "ball-slice" | "ball_slice" => VarietySpec::BallSlice {
            k: spec.k,
            dim: spec.dim,
        },
        "sym-r" | "sym_r" => VarietySpec::SymR,
        "sym-d" | "sym_d" => VarietySpec::SymD { beta: beta()? },
        "sym-rd" | "sym_r_union_d" => VarietySpec::SymRUnionD { beta: beta()? },
        other => {
            return Err(CliError::Rejected(format!("unknown variety spec `{other}`")));
        }
    };
    // Flag-driven runs digest their resolved configuration so reruns can be
    // verified the same way as file-driven ones.
    let config = format!(
        "spec={name} k={} dim={} beta={:?} count={} seed={}",
        spec.k, spec.dim, spec.beta, spec.count, spec.seed
    );
    Ok((
        variety,
        spec.count,
        spec.seed,
        None,
        None,
        io::input_digest(config.as_bytes()),
    ))
}

pub fn variety_geodesic(spec: &SpecArgs, pairs: usize, tol: f64, out: &OutputArgs) -> CliResult {
    let (variety, count, seed, _, _, digest) = resolve_spec(spec)?;
    let sample = sample_variety(&variety, count, seed)?;
    let domain = sample.ambient_domain();
    let rep = totally_geodesic_test(&domain, &sample, pairs, seed, tol)?;
    let body = json!({
        "domain": serde_json::to_value(&domain).unwrap(),
        "count": count,
        "pairs": pairs,
        "tol": tol,
        "pass": rep.pass,
        "worst_distance": rep.worst_distance,
        "worst_pair": rep.worst_pair.as_ref().map(|d| json!({
            "lambda": serde_json::to_value(d.lambda()).unwrap(),
            "mu": serde_json::to_value(d.mu()).unwrap(),
        })),
    });
    emit_json(out, &envelope("variety geodesic", Some(seed), &digest, body))
}

fn datum_from_indices(
    sample: &VarietySample,
    domain: &DomainSpec,
    indices: (usize, usize),
) -> Result<Datum, CliError> {
    let pts = sample.points();
    let (i, j) = indices;
    if i >= pts.len() || j >= pts.len() {
        return Err(CliError::Rejected(format!(
            "datum indices ({i}, {j}) out of range for {} sample points",
            pts.len()
        )));
    }
    Ok(Datum::new(domain, pts[i].clone(), pts[j].clone())?)
}

fn certificate_json(cert: &Certificate) -> Value {
    json!({
        "achieved": cert.achieved,
        "baseline": cert.baseline,
        "margin": cert.margin,
        "sup_on_v": cert.sup_on_v,
        "map": io::poly_to_json(&cert.map),
        "datum": {
            "lambda": serde_json::to_value(cert.datum.lambda()).unwrap(),
            "mu": serde_json::to_value(cert.datum.mu()).unwrap(),
        },
    })
}

#[allow(clippy::too_many_arguments)]
pub fn variety_certificate(
    spec: &SpecArgs,
    degree_flag: u32,
    budget_flag: usize,
    datum_flag: Option<&str>,
    sweep_max_degree: Option<u32>,
    pairs: Option<usize>,
    plot: Option<&Path>,
    out: &OutputArgs,
) -> CliResult {
    let (variety, count, seed, file_datum, file_search, digest) = resolve_spec(spec)?;
    let (degree, budget) = file_search.unwrap_or((degree_flag, budget_flag));
    let sample = sample_variety(&variety, count, seed)?;
    let domain = sample.ambient_domain();

    let datum_indices = match datum_flag {
        Some(raw) => {
            let parts: Vec<&str> = raw.split(',').collect();
            if parts.len() != 2 {
                return Err(CliError::Rejected("--datum must be `i,j`".into()));
            }
            let i = parts[0].trim().parse().map_err(|_| CliError::Rejected("bad datum index".into()))?;
            let j = parts[1].trim().parse().map_err(|_| CliError::Rejected("bad datum index".into()))?;
            (i, j)
        }
        None => file_datum.unwrap_or((0, 1)),
    };

    // Pair-sweep table mode.
    if let Some(n_pairs) = pairs {
        let pts = sample.points();
        let mut rows = Vec::new();
        let mut pair_id = 0usize;
        'outer: for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                if rows.len() >= n_pairs {
                    break 'outer;
                }
                if pts[i].dist(&pts[j]) <= 1e-9 {
                    continue;
                }
                let datum = Datum::new(&domain, pts[i].clone(), pts[j].clone())?;
                let cert = certificate_search(&domain, &sample, &datum, degree, budget, seed)?;
                rows.push((pair_id, i, j, cert));
                pair_id += 1;
            }
        }
        if out.format == "csv" {
            let mut csv = String::from("pair_id,baseline,achieved,margin\n");
            for (id, _, _, cert) in &rows {
                csv.push_str(&format!("{id},{},{},{}\n", cert.baseline, cert.achieved, cert.margin));
            }
            return emit(out, &csv);
        }
        let body = json!({
            "count": count, "degree": degree, "budget": budget,
            "pairs": rows.iter().map(|(id, i, j, cert)| json!({
                "pair_id": id, "indices": [i, j],
                "baseline": cert.baseline, "achieved": cert.achieved, "margin": cert.margin,
            })).collect::<Vec<_>>(),
        });
        return emit_json(out, &envelope("variety certificate", Some(seed), &digest, body));
    }

    let datum = datum_from_indices(&sample, &domain, datum_indices)?;

    // Degree sweep mode: margin vs degree.
    if let Some(max_degree) = sweep_max_degree {
        if max_degree == 0 {
            return Err(CliError::Rejected("--sweep-max-degree must be >= 1".into()));
        }
        let mut rows: Vec<(f64, f64)> = Vec::new();
        let mut sweep = Vec::new();
        for g in 1..=max_degree {
            let cert = certificate_search(&domain, &sample, &datum, g, budget, seed)?;
            rows.push((g as f64, cert.margin));
            sweep.push((g, cert));
        }
        if let Some(path) = plot {
            write_plot(
                path,
                &crate::svg::line_plot("certificate margin vs degree", "degree", "margin", &rows),
            )?;
        }
        if out.format == "csv" {
            let mut csv = String::from("degree,baseline,achieved,margin\n");
            for (g, cert) in &sweep {
                csv.push_str(&format!("{g},{},{},{}\n", cert.baseline, cert.achieved, cert.margin));
            }
            return emit(out, &csv);
        }
        let body = json!({
            "count": count, "budget": budget,
            "sweep": sweep.iter().map(|(g, cert)| json!({
                "degree": g,
                "baseline": cert.baseline,
                "achieved": cert.achieved,
                "margin": cert.margin,
            })).collect::<Vec<_>>(),
        });
        return emit_json(out, &envelope("variety certificate", Some(seed), &digest, body));
    }

    if plot.is_some() {
        return Err(CliError::Rejected(
            "--plot needs --sweep-max-degree to produce a sweep".into(),
        ));
    }
    let cert = certificate_search(&domain, &sample, &datum, degree, budget, seed)?;
    let mut body = certificate_json(&cert);
    body["count"] = json!(count);
    body["degree"] = json!(degree);
    body["budget"] = json!(budget);
    emit_json(out, &envelope("variety certificate", Some(seed), &digest, body))
}

pub fn variety_retract(input: &Path, out: &OutputArgs) -> CliResult {
    let bytes = read_input(input)?;
    let digest = io::input_digest(&bytes);
    let parsed = io::parse_retract_input(&bytes)?;
    let sample = sample_variety(&parsed.spec, parsed.count, parsed.seed)?;
    let domain = sample.ambient_domain();
    let map = RetractMap::new(parsed.map)?;
    let rep = retract_check(&map, &domain, &sample, parsed.count, parsed.seed, parsed.tol)?;
    let body = json!({
        "domain": serde_json::to_value(&domain).unwrap(),
        "count": parsed.count,
        "tol": parsed.tol,
        "idempotent_pass": rep.idempotent_pass,
        "fixes_v_pass": rep.fixes_v_pass,
        "range_in_v_pass": rep.range_in_v_pass,
    });
    emit_json(out, &envelope("variety retract", Some(parsed.seed), &digest, body))
}

// ---------------------------------------------------------------------------

/// Exposes the model coordinate operator so the selftest can exercise the
/// full evaluate path.
pub fn selftest_model_roundtrip() -> Result<(), CliError> {
    let nodes = vec![Point::scalar(Complex64::new(0.0, 0.0)), Point::scalar(Complex64::new(0.5, 0.0))];
    let model = build_model(KernelId::SzegoDisk, &nodes)?;
    let p = holoext::poly::Poly::affine(Complex64::new(0.0, 0.0), &[Complex64::new(1.5, 0.0)]);
    let norm = operator_norm(&evaluate_poly(&model, &p)?)?;
    if (norm - 1.5).abs() > 1e-9 {
        return Err(CliError::Internal(format!(
            "model norm {norm} deviates from the closed form 1.5"
        )));
    }
    Ok(())
}
