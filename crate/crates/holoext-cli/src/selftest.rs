//! `holoext selftest`: a condensed version of the invariant suite, meant
//! to verify a build in seconds. Any failure exits with code 3.

use num_complex::Complex64;

use holoext::domains::DomainSpec;
use holoext::hyperbolic::{
    ball_automorphism_to_origin, caratheodory_search, kobayashi_ball, left_inverse_ball,
    mobius_disk, rho, Datum,
};
use holoext::lab::{certificate_search, sample_variety, totally_geodesic_test, VarietySpec};
use holoext::model::{build_model, defect_form, evaluate_poly, operator_norm};
use holoext::pick::{minimal_sup_norm, KernelId};
use holoext::point::Point;
use holoext::poly::Poly;

use crate::commands::{selftest_model_roundtrip, CliError, CliResult};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check(name: &str, run: impl FnOnce() -> Result<(), String>) -> Result<(), CliError> {
    match run() {
        Ok(()) => {
            println!("selftest: {name}: ok");
            Ok(())
        }
        Err(msg) => {
            println!("selftest: {name}: FAILED - {msg}");
            Err(CliError::Internal(format!("{name}: {msg}")))
        }
    }
}

pub fn run() -> CliResult {
    let mut failures = Vec::new();
    let mut record = |r: Result<(), CliError>| {
        if let Err(e) = r {
            failures.push(e.to_string());
        }
    };

    record(check("disk geometry", || {
        if (rho(c(0.5, 0.0), c(-0.5, 0.0)).map_err(|e| e.to_string())? - 0.8).abs() > 1e-12 {
            return Err("pseudo-hyperbolic distance closed form".into());
        }
        for k in 0..100 {
            let a = c(0.8 * ((k as f64) / 100.0).cos(), 0.5 * ((k as f64) / 7.0).sin()) * 0.9;
            let z = c(0.6 * ((k as f64) / 13.0).sin(), 0.7 * ((k as f64) / 5.0).cos()) * 0.9;
            let back = mobius_disk(a, mobius_disk(a, z).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if (back - z).norm() > 1e-11 {
                return Err(format!("mobius involution residual {}", (back - z).norm()));
            }
        }
        Ok(())
    }));

    record(check("ball automorphisms", || {
        let a = Point::from_reals(&[0.3, -0.4]);
        let z = Point::from_reals(&[0.5, 0.62]);
        let once = ball_automorphism_to_origin(&a, &z).map_err(|e| e.to_string())?;
        let twice = ball_automorphism_to_origin(&a, &once).map_err(|e| e.to_string())?;
        if twice.dist(&z) > 1e-11 {
            return Err(format!("involution residual {}", twice.dist(&z)));
        }
        Ok(())
    }));

    record(check("pick bisection closed forms", || {
        let nodes = vec![Point::scalar(c(0.0, 0.0)), Point::scalar(c(0.5, 0.0))];
        let t = minimal_sup_norm(KernelId::SzegoDisk, &nodes, &[c(0.0, 0.0), c(0.75, 0.0)], 1e-9)
            .map_err(|e| e.to_string())?;
        if (t - 1.5).abs() > 1e-6 {
            return Err(format!("two-point closed form gave {t}"));
        }
        Ok(())
    }));

    record(check("model norm equals interpolation norm", || {
        selftest_model_roundtrip().map_err(|e| e.to_string())
    }));

    record(check("defect-form route agreement", || {
        let nodes = vec![Point::scalar(c(0.0, 0.0)), Point::scalar(c(0.4, 0.2))];
        let model = build_model(KernelId::SzegoDisk, &nodes).map_err(|e| e.to_string())?;
        let p = Poly::affine(c(0.1, 0.0), &[c(0.9, -0.3)]);
        for k in 0..20 {
            let a = [c(0.3 + 0.01 * k as f64, -0.2), c(0.1, 0.4 - 0.02 * k as f64)];
            defect_form(&model, &p, &a).map_err(|e| e.to_string())?;
        }
        Ok(())
    }));

    record(check("geodesics and left inverses", || {
        let ball = DomainSpec::ball(2).map_err(|e| e.to_string())?;
        let datum = Datum::new(&ball, Point::zero(2), Point::from_reals(&[0.3, 0.4]))
            .map_err(|e| e.to_string())?;
        let geo = kobayashi_ball(&datum).map_err(|e| e.to_string())?;
        if (geo.distance - 0.5).abs() > 1e-12 {
            return Err(format!("geodesic distance {}", geo.distance));
        }
        let phi = left_inverse_ball(&geo.disc).map_err(|e| e.to_string())?;
        for k in 0..64 {
            let theta = std::f64::consts::TAU * k as f64 / 64.0;
            let zeta = c(0.9 * theta.cos(), 0.9 * theta.sin());
            let back = phi.eval(&geo.disc.eval(zeta));
            if (back - zeta).norm() > 1e-10 {
                return Err("left inverse failed on the grid".into());
            }
        }
        let res = caratheodory_search(&ball, &datum, 1, 400, 1).map_err(|e| e.to_string())?;
        if (res.value - 0.5).abs() > 1e-6 {
            return Err(format!("search value {} vs 0.5", res.value));
        }
        Ok(())
    }));

    record(check("strong linear convexity witnesses", || {
        let ball = DomainSpec::ball(2).map_err(|e| e.to_string())?;
        let rep = ball
            .check_strong_linear_convexity(&Point::from_reals(&[1.0, 0.0]), 16, 0, 1e-9)
            .map_err(|e| e.to_string())?;
        if !rep.pass || (rep.worst_margin - 1.0).abs() > 1e-10 {
            return Err(format!("ball margin {}", rep.worst_margin));
        }
        let flat = DomainSpec::ellipsoid(vec![1.0, 1.0], vec![0.0, 1.1]).map_err(|e| e.to_string())?;
        let rep = flat
            .check_strong_linear_convexity(&Point::from_reals(&[1.0, 0.0]), 16, 0, 0.0)
            .map_err(|e| e.to_string())?;
        if rep.pass || (rep.worst_margin + 0.1).abs() > 1e-10 {
            return Err(format!("flat ellipsoid margin {}", rep.worst_margin));
        }
        Ok(())
    }));

    record(check("geodesy dichotomy", || {
        let ball = DomainSpec::ball(2).map_err(|e| e.to_string())?;
        for seed in [0u64, 1] {
            let slice = sample_variety(&VarietySpec::BallSlice { k: 1, dim: 2 }, 24, seed)
                .map_err(|e| e.to_string())?;
            let rep = totally_geodesic_test(&ball, &slice, 10, seed, 1e-10)
                .map_err(|e| e.to_string())?;
            if !rep.pass {
                return Err("slice failed the geodesic test".into());
            }
            let parabola = sample_variety(&VarietySpec::ParabolaCurve, 24, seed)
                .map_err(|e| e.to_string())?;
            let rep = totally_geodesic_test(&ball, &parabola, 10, seed, 1e-10)
                .map_err(|e| e.to_string())?;
            if rep.pass || rep.worst_distance < 1e-3 {
                return Err(format!("parabola residual {}", rep.worst_distance));
            }
        }
        Ok(())
    }));

    record(check("extension certificates", || {
        let ball = DomainSpec::ball(2).map_err(|e| e.to_string())?;
        let parabola = sample_variety(&VarietySpec::ParabolaCurve, 48, 0).map_err(|e| e.to_string())?;
        let datum = Datum::new(
            &ball,
            parabola.points()[0].clone(),
            parabola.points()[1].clone(),
        )
        .map_err(|e| e.to_string())?;
        let cert = certificate_search(&ball, &parabola, &datum, 3, 3000, 0)
            .map_err(|e| e.to_string())?;
        if cert.margin <= 0.0 {
            return Err(format!("parabola margin {}", cert.margin));
        }
        let slice = sample_variety(&VarietySpec::BallSlice { k: 1, dim: 2 }, 48, 0)
            .map_err(|e| e.to_string())?;
        let datum = Datum::new(&ball, slice.points()[0].clone(), slice.points()[1].clone())
            .map_err(|e| e.to_string())?;
        let cert = certificate_search(&ball, &slice, &datum, 3, 3000, 0).map_err(|e| e.to_string())?;
        if cert.margin > 1e-6 {
            return Err(format!("slice margin {}", cert.margin));
        }
        Ok(())
    }));

    record(check("subordination", || {
        let nodes = vec![Point::scalar(c(0.1, 0.2)), Point::scalar(c(-0.3, 0.1))];
        let model = build_model(KernelId::SzegoDisk, &nodes).map_err(|e| e.to_string())?;
        let mut p = Poly::constant(1, c(1.0, 0.0));
        for node in &nodes {
            p = p.mul(&Poly::affine(-node.coord(0), &[c(1.0, 0.0)]));
        }
        let norm =
            operator_norm(&evaluate_poly(&model, &p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if norm > 1e-10 {
            return Err(format!("annihilator norm {norm}"));
        }
        Ok(())
    }));

    if failures.is_empty() {
        println!("selftest: all checks passed");
        Ok(())
    } else {
        Err(CliError::Internal(format!(
            "{} selftest check(s) failed: {}",
            failures.len(),
            failures.join("; ")
        )))
    }
}
