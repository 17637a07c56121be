//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime. Run with `cargo test -p holoext --test acceptance -- --nocapture`.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use holoext::domains::DomainSpec;
use holoext::hyperbolic::{
    ball_automorphism_to_origin, caratheodory_search, kobayashi_ball, left_inverse_ball,
    mobius_disk, rho, royden_wong_check, Datum,
};
use holoext::lab::{certificate_search, sample_variety, totally_geodesic_test, VarietySpec};
use holoext::model::{
    build_model, defect_form, evaluate_poly, operator_norm, subordination_check,
};
use holoext::pick::{gram, is_psd, minimal_sup_norm, KernelId, PickProblem};
use holoext::point::Point;
use holoext::poly::{AnalyticDisc, BoundaryFunctional, Poly, Term};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    Complex64::new(r * theta.cos(), r * theta.sin())
}

fn ball_point(rng: &mut ChaCha8Rng, dim: usize, max_norm: f64) -> Point {
    loop {
        let coords: Vec<Complex64> = (0..dim)
            .map(|_| {
                let u: f64 = rng.random::<f64>() - 0.5;
                let v: f64 = rng.random::<f64>() - 0.5;
                Complex64::new(u, v)
            })
            .collect();
        let n = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-3 {
            continue;
        }
        let r = rng.random::<f64>() * max_norm;
        return Point::new(coords.into_iter().map(|z| z * (r / n)).collect()).unwrap();
    }
}

/// Random disk interpolation instance: separated nodes, bounded targets,
/// and a Gram condition cap. Without the cap, clustered nodes push the
/// Szego Gram's conditioning far past what double precision can certify
/// at the criterion tolerances.
fn disk_instance(seed: u64) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0000 + seed);
    let n = 2 + (seed % 4) as usize; // 2..=5
    let nodes: Vec<Complex64> = loop {
        let mut draw: Vec<Complex64> = Vec::new();
        let mut attempts = 0;
        'draw: while draw.len() < n && attempts < 10_000 {
            attempts += 1;
            let z = disk_point(&mut rng, 0.6);
            for q in &draw {
                if (z - q).norm() < 0.3 {
                    continue 'draw;
                }
            }
            draw.push(z);
        }
        if draw.len() < n {
            continue;
        }
        let pts = scalar_points(&draw);
        let g = gram(KernelId::SzegoDisk, &pts).unwrap();
        let eigs = holoext::linalg::hermitian_eigenvalues(g.matrix());
        if eigs[0] > 0.0 && eigs[eigs.len() - 1] / eigs[0] <= 1e4 {
            break draw;
        }
    };
    let mut targets: Vec<Complex64> = (0..n).map(|_| disk_point(&mut rng, 1.2)).collect();
    if targets.iter().map(|w| w.norm()).fold(0.0, f64::max) < 0.05 {
        targets[0] = c(0.4, 0.2);
    }
    (nodes, targets)
}

/// Lagrange interpolation polynomial through scalar data.
fn lagrange(nodes: &[Complex64], targets: &[Complex64]) -> Poly {
    let mut acc = Poly::zero(1);
    for i in 0..nodes.len() {
        let mut li = Poly::constant(1, c(1.0, 0.0));
        let mut denom = c(1.0, 0.0);
        for j in 0..nodes.len() {
            if j == i {
                continue;
            }
            li = li.mul(&Poly::affine(-nodes[j], &[c(1.0, 0.0)]));
            denom *= nodes[i] - nodes[j];
        }
        acc = acc.add(&li.scale(targets[i] / denom));
    }
    acc
}

fn scalar_points(nodes: &[Complex64]) -> Vec<Point> {
    nodes.iter().map(|&z| Point::scalar(z)).collect()
}

#[test]
fn criterion_01_defect_identity() {
    let start = Instant::now();
    for seed in 0..200u64 {
        let (nodes, targets) = disk_instance(seed);
        let pts = scalar_points(&nodes);
        let model = build_model(KernelId::SzegoDisk, &pts).unwrap();
        let p = lagrange(&nodes, &targets);
        let mut rng = ChaCha8Rng::seed_from_u64(0xA11C_0000 + seed);
        let a: Vec<Complex64> = (0..nodes.len()).map(|_| disk_point(&mut rng, 1.5)).collect();

        // Route (a) through the operator matrices (defect_form also
        // verifies route (b) internally and errors on disagreement).
        let value = defect_form(&model, &p, &a).unwrap();

        // Independent recomputation of the closed bilinear route.
        let g = model.gram().matrix();
        let w: Vec<Complex64> = pts.iter().map(|pt| p.eval(pt)).collect();
        let mut direct = c(0.0, 0.0);
        for i in 0..nodes.len() {
            for j in 0..nodes.len() {
                direct += a[i].conj() * a[j] * (c(1.0, 0.0) - w[i] * w[j].conj()) * g[(i, j)];
            }
        }
        assert!(
            (value - direct.re).abs() <= 1e-10,
            "seed {seed}: {value} vs {}",
            direct.re
        );
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 5.0, "runtime {dt:.2} s exceeds 5 s");
    println!("criterion 01: PASS - defect-form routes agree to 1e-10 on 200 disk instances ({dt:.2} s)");
}

#[test]
fn criterion_02_norm_psd_equivalence() {
    let start = Instant::now();
    for seed in 0..200u64 {
        let (nodes, targets) = disk_instance(seed);
        let pts = scalar_points(&nodes);
        let t_star = minimal_sup_norm(KernelId::SzegoDisk, &pts, &targets, 1e-9).unwrap();
        assert!(t_star > 0.0);
        let model = build_model(KernelId::SzegoDisk, &pts).unwrap();
        for factor in [1.0 + 1e-3, 1.0 - 1e-3] {
            let scaled: Vec<Complex64> =
                targets.iter().map(|w| w / (t_star * factor)).collect();
            let op = model.operator_from_node_values(&scaled).unwrap();
            let norm = operator_norm(&op).unwrap();
            let g = gram(KernelId::SzegoDisk, &pts).unwrap();
            let problem = PickProblem::new(g, scaled).unwrap();
            let psd = is_psd(&holoext::pick::pick_matrix(&problem), 1e-9).unwrap();
            assert_eq!(
                norm <= 1.0,
                psd,
                "seed {seed} factor {factor}: norm {norm}, psd {psd}"
            );
        }
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 10.0, "runtime {dt:.2} s exceeds 10 s");
    println!("criterion 02: PASS - contractivity and Pick positivity agree across the critical norm on 200 instances ({dt:.2} s)");
}

#[test]
fn criterion_03_norm_equality() {
    let start = Instant::now();
    // The pinned closed-form case first.
    let pts = vec![Point::scalar(c(0.0, 0.0)), Point::scalar(c(0.5, 0.0))];
    let t = minimal_sup_norm(KernelId::SzegoDisk, &pts, &[c(0.0, 0.0), c(0.75, 0.0)], 1e-9).unwrap();
    assert!((t - 1.5).abs() < 1e-6, "closed form t* {t}");
    let model = build_model(KernelId::SzegoDisk, &pts).unwrap();
    let op = model
        .operator_from_node_values(&[c(0.0, 0.0), c(0.75, 0.0)])
        .unwrap();
    let norm = operator_norm(&op).unwrap();
    assert!((norm - 1.5).abs() < 1e-6, "closed form norm {norm}");

    for seed in 0..100u64 {
        let (nodes, targets) = disk_instance(seed);
        let pts = scalar_points(&nodes);
        let t_star = minimal_sup_norm(KernelId::SzegoDisk, &pts, &targets, 1e-9).unwrap();
        let model = build_model(KernelId::SzegoDisk, &pts).unwrap();
        let op = model.operator_from_node_values(&targets).unwrap();
        let norm = operator_norm(&op).unwrap();
        assert!(
            (norm - t_star).abs() <= 1e-7,
            "seed {seed}: norm {norm} vs t* {t_star}"
        );
    }
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 03: PASS - model norm equals minimal interpolation norm to 1e-7 on 100 instances ({dt:.2} s)");
}

#[test]
fn criterion_04_left_inverse_contract() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e4e);
    for trial in 0..50 {
        let dim = 2 + (trial % 3);
        let ball = DomainSpec::ball(dim).unwrap();
        let mu = loop {
            let p = ball_point(&mut rng, dim, 0.95);
            if p.norm() > 0.05 {
                break p;
            }
        };
        let datum = Datum::new(&ball, Point::zero(dim), mu).unwrap();
        let geo = kobayashi_ball(&datum).unwrap();
        let phi = left_inverse_ball(&geo.disc).unwrap();
        // phi о k = id on a 256-point grid of the disk.
        for k in 0..256 {
            let r = 0.2 + 0.75 * ((k / 64) as f64) / 3.0;
            let theta = std::f64::consts::TAU * ((k % 64) as f64) / 64.0;
            let zeta = c(r * theta.cos(), r * theta.sin());
            let back = phi.eval(&geo.disc.eval(zeta));
            assert!((back - zeta).norm() <= 1e-10, "trial {trial}: {back} vs {zeta}");
        }
        // Boundary values of the extremal have unit norm.
        for k in 0..64 {
            let theta = std::f64::consts::TAU * k as f64 / 64.0;
            let z = c(theta.cos(), theta.sin());
            assert!((geo.disc.eval(z).norm() - 1.0).abs() <= 1e-10);
        }
    }
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 04: PASS - left inverses invert 50 geodesics on 256-point grids; boundary norms are 1 to 1e-10 ({dt:.2} s)");
}

#[test]
fn criterion_05_caratheodory_equals_kobayashi() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xCA7A);
    for trial in 0..20u64 {
        let dim = 2 + (trial % 2) as usize;
        let ball = DomainSpec::ball(dim).unwrap();
        let mu = loop {
            let p = ball_point(&mut rng, dim, 0.9);
            if p.norm() > 0.1 {
                break p;
            }
        };
        let datum = Datum::new(&ball, Point::zero(dim), mu).unwrap();
        let geo = kobayashi_ball(&datum).unwrap();
        let res = caratheodory_search(&ball, &datum, 1, 1200, 1000 + trial).unwrap();
        assert!(
            (res.value - geo.distance).abs() <= 1e-6,
            "trial {trial}: search {} vs geodesic {}",
            res.value,
            geo.distance
        );
        assert!(res.design_sup <= 1.0 + 1e-9);
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 30.0, "runtime {dt:.2} s exceeds 30 s");
    println!("criterion 05: PASS - degree-1 search attains the geodesic distance within 1e-6 on 20 ball data ({dt:.2} s)");
}

#[test]
fn criterion_06_boundary_sign_condition() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5167);
    for trial in 0..20u64 {
        let dim = 2 + (trial % 2) as usize;
        let ball = DomainSpec::ball(dim).unwrap();
        let mu = loop {
            let p = ball_point(&mut rng, dim, 0.9);
            if p.norm() > 0.1 {
                break p;
            }
        };
        let datum = Datum::new(&ball, Point::zero(dim), mu).unwrap();
        let geo = kobayashi_ball(&datum).unwrap();
        let dir = &geo.disc.coefficients()[1];
        let h = BoundaryFunctional::constant(Point::new(
            dir.coords().iter().map(|u| u.conj()).collect(),
        ).unwrap());
        let samples = ball.interior_sample(10, 100 + trial).unwrap();
        let rep = royden_wong_check(&ball, &geo.disc, &h, &samples, 100).unwrap();
        assert!(rep.boundary_ae_pass);
        assert!(rep.sign_pass && rep.worst_value < 0.0, "worst {}", rep.worst_value);
    }
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 06: PASS - boundary sign condition negative over 1000 samples for 20 geodesics ({dt:.2} s)");
}

#[test]
fn criterion_07_strong_linear_convexity() {
    let start = Instant::now();
    let ball = DomainSpec::ball(2).unwrap();
    for p in ball.boundary_sample(100, 7).unwrap() {
        let rep = ball.check_strong_linear_convexity(&p, 32, 11, 1e-9).unwrap();
        assert!(rep.pass);
        assert!(rep.worst_margin >= 1.0 - 1e-9, "margin {}", rep.worst_margin);
    }
    // The flat-tangent ellipsoid fails at its witness point with the
    // analytic witness direction (0, 1) up to phase.
    let flat = DomainSpec::ellipsoid(vec![1.0, 1.0], vec![0.0, 1.1]).unwrap();
    let xi = Point::from_reals(&[1.0, 0.0]);
    let rep = flat.check_strong_linear_convexity(&xi, 64, 3, 0.0).unwrap();
    assert!(!rep.pass);
    assert!((rep.worst_margin + 0.1).abs() < 1e-9, "margin {}", rep.worst_margin);
    assert!(rep.worst_vector.coord(0).norm() < 1e-9);
    assert!((rep.worst_vector.coord(1).norm() - 1.0).abs() < 1e-9);
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 07: PASS - ball passes at 100 boundary points with margin >= 1 - 1e-9; flat ellipsoid fails with witness (0,1) ({dt:.2} s)");
}

#[test]
fn criterion_08_geodesy_dichotomy() {
    let start = Instant::now();
    let ball = DomainSpec::ball(2).unwrap();
    for seed in 0..10u64 {
        let slice = sample_variety(&VarietySpec::BallSlice { k: 1, dim: 2 }, 40, seed).unwrap();
        let rep = totally_geodesic_test(&ball, &slice, 15, seed, 1e-10).unwrap();
        assert!(rep.pass, "seed {seed}: slice worst {}", rep.worst_distance);

        let parabola = sample_variety(&VarietySpec::ParabolaCurve, 40, seed).unwrap();
        let rep = totally_geodesic_test(&ball, &parabola, 15, seed, 1e-10).unwrap();
        assert!(!rep.pass, "seed {seed}: parabola passed");
        assert!(
            rep.worst_distance >= 1e-3,
            "seed {seed}: worst {}",
            rep.worst_distance
        );
    }
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 08: PASS - slices geodesic, parabola non-geodesic with residual >= 1e-3, 10 seeds each ({dt:.2} s)");
}

#[test]
fn criterion_09_certificate_existence() {
    let start = Instant::now();
    let ball = DomainSpec::ball(2).unwrap();
    let mut parabola_hits = 0;
    let mut max_seed_time = 0.0_f64;
    for seed in 0..10u64 {
        let seed_start = Instant::now();
        let parabola = sample_variety(&VarietySpec::ParabolaCurve, 64, seed).unwrap();
        let datum = Datum::new(
            &ball,
            parabola.points()[0].clone(),
            parabola.points()[1].clone(),
        )
        .unwrap();
        let cert = certificate_search(&ball, &parabola, &datum, 8, 20000, seed).unwrap();
        assert!(cert.sup_on_v <= 1.0 + 1e-9, "sup {}", cert.sup_on_v);
        if cert.margin > 0.0 {
            parabola_hits += 1;
        }

        let slice = sample_variety(&VarietySpec::BallSlice { k: 1, dim: 2 }, 64, seed).unwrap();
        let datum = Datum::new(&ball, slice.points()[0].clone(), slice.points()[1].clone()).unwrap();
        let cert = certificate_search(&ball, &slice, &datum, 8, 20000, seed).unwrap();
        assert!(
            cert.margin <= 1e-6,
            "seed {seed}: slice margin {} must be inconclusive",
            cert.margin
        );
        max_seed_time = max_seed_time.max(seed_start.elapsed().as_secs_f64());
    }
    assert!(
        parabola_hits >= 8,
        "positive parabola margins in only {parabola_hits}/10 seeds"
    );
    assert!(
        max_seed_time < 60.0,
        "worst per-seed runtime {max_seed_time:.2} s exceeds 60 s"
    );
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 09: PASS - parabola refuted in {parabola_hits}/10 seeds, slices inconclusive in 10/10 (worst seed {max_seed_time:.2} s, total {dt:.2} s)");
}

#[test]
fn criterion_10_subordination() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5AB0);
    for trial in 0..100u64 {
        let dim = 1 + (trial % 2) as usize;
        let kernel = match (trial / 2) % 3 {
            0 if dim == 1 => KernelId::SzegoDisk,
            1 => KernelId::SzegoPolydiskProduct,
            _ => KernelId::CauchySzegoBall,
        };
        let n = 2 + (trial % 3) as usize;
        let mut nodes: Vec<Point> = Vec::new();
        'draw: while nodes.len() < n {
            let cand = Point::new((0..dim).map(|_| disk_point(&mut rng, 0.55)).collect()).unwrap();
            for q in &nodes {
                if cand.dist(q) < 0.15 {
                    continue 'draw;
                }
            }
            nodes.push(cand);
        }
        let model = build_model(kernel, &nodes).unwrap();
        // A polynomial vanishing at every node: product of first-coordinate
        // differences.
        let mut p = Poly::constant(dim, c(1.0, 0.0));
        for node in &nodes {
            let mut lin = vec![c(0.0, 0.0); dim];
            lin[0] = c(1.0, 0.0);
            p = p.mul(&Poly::affine(-node.coord(0), &lin));
        }
        let values: Vec<Complex64> = nodes.iter().map(|node| p.eval(node)).collect();
        assert!(values.iter().all(|v| v.norm() <= 1e-12));
        assert!(subordination_check(&model, &p, &values).unwrap());
        let norm = operator_norm(&evaluate_poly(&model, &p).unwrap()).unwrap();
        assert!(norm <= 1e-10, "trial {trial}: annihilator norm {norm}");
    }
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 10: PASS - node-vanishing polynomials annihilate 100 random models to 1e-10 ({dt:.2} s)");
}

#[test]
fn criterion_11_mobius_and_involution() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x3011);
    for _ in 0..1000 {
        let a = disk_point(&mut rng, 0.9);
        let x = disk_point(&mut rng, 0.95);
        let y = disk_point(&mut rng, 0.95);
        let lhs = rho(mobius_disk(a, x).unwrap(), mobius_disk(a, y).unwrap()).unwrap();
        let rhs = rho(x, y).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10, "{lhs} vs {rhs}");
    }
    for trial in 0..1000u64 {
        let dim = 2 + (trial % 3) as usize;
        let a = ball_point(&mut rng, dim, 0.9);
        let z = ball_point(&mut rng, dim, 0.97);
        let once = ball_automorphism_to_origin(&a, &z).unwrap();
        let twice = ball_automorphism_to_origin(&a, &once).unwrap();
        assert!(twice.dist(&z) <= 1e-10, "involution residual {}", twice.dist(&z));
    }
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 11: PASS - Mobius invariance and automorphism involutivity to 1e-10 on 1000 trials each ({dt:.2} s)");
}

/// Sanity cross-check used by several criteria: `is_psd` rejects what the
/// eigensolver clearly rejects (kept here so the acceptance binary also
/// guards the PSD plumbing it relies on).
#[test]
fn psd_plumbing_guard() {
    let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    assert!(!is_psd(&m, 1e-9).unwrap());
    let p = Poly::from_terms(
        1,
        vec![Term {
            powers: vec![1],
            coeff: c(1.0, 0.0),
        }],
    )
    .unwrap();
    assert_eq!(p.total_degree(), 1);
}
