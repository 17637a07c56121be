//! Property tests for the algebraic invariants that hold on full input
//! ranges rather than at pinned examples.

use num_complex::Complex64;
use proptest::prelude::*;

use holoext::hyperbolic::{mobius_disk, rho};
use holoext::lab::slice_decomposition;
use holoext::pick::{gram, minimal_sup_norm, KernelId};
use holoext::point::Point;
use holoext::poly::{Poly, Term};

fn complex_in(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(move |(r, theta)| {
        let rr = radius * r.sqrt();
        Complex64::new(rr * theta.cos(), rr * theta.sin())
    })
}

fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        ((0u32..3, 0u32..3), (-2.0..2.0f64, -2.0..2.0f64)),
        1..6,
    )
    .prop_map(|terms| {
        let terms = terms
            .into_iter()
            .map(|((a, b), (re, im))| Term {
                powers: vec![a, b],
                coeff: Complex64::new(re, im),
            })
            .collect();
        Poly::from_terms(2, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cup_is_an_involution_matching_conjugation(p in small_poly(), z_re in -0.9..0.9f64, z_im in -0.9..0.9f64) {
        let q = p.cup();
        prop_assert_eq!(q.cup(), p.clone());
        // p^cup(z) = conj(p(conj(z)))
        let z = Point::new(vec![Complex64::new(z_re, z_im), Complex64::new(z_im, -z_re)]).unwrap();
        let zbar = Point::new(z.coords().iter().map(|w| w.conj()).collect()).unwrap();
        let lhs = q.eval(&z);
        let rhs = p.eval(&zbar).conj();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn mobius_preserves_rho(a in complex_in(0.85), x in complex_in(0.95), y in complex_in(0.95)) {
        let lhs = rho(mobius_disk(a, x).unwrap(), mobius_disk(a, y).unwrap()).unwrap();
        let rhs = rho(x, y).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11);
    }

    #[test]
    fn grams_are_psd(zs in prop::collection::vec(complex_in(0.6), 1..6)) {
        let mut nodes: Vec<Point> = Vec::new();
        'outer: for z in zs {
            for q in &nodes {
                if (z - q.coord(0)).norm() < 0.05 {
                    continue 'outer;
                }
            }
            nodes.push(Point::scalar(z));
        }
        let g = gram(KernelId::SzegoDisk, &nodes).unwrap();
        let eigs = holoext::linalg::hermitian_eigenvalues(g.matrix());
        let scale = eigs.iter().fold(1.0f64, |m, e| m.max(e.abs()));
        prop_assert!(eigs[0] >= -1e-10 * scale);
    }

    #[test]
    fn minimal_norm_is_positively_homogeneous(
        w1 in complex_in(1.0),
        w2 in complex_in(1.0),
        scale in 0.25..4.0f64,
    ) {
        let nodes = vec![Point::scalar(Complex64::new(0.0, 0.0)), Point::scalar(Complex64::new(0.45, 0.2))];
        let targets = [w1, w2];
        let base = minimal_sup_norm(KernelId::SzegoDisk, &nodes, &targets, 1e-10).unwrap();
        let scaled: Vec<Complex64> = targets.iter().map(|w| w * scale).collect();
        let t = minimal_sup_norm(KernelId::SzegoDisk, &nodes, &scaled, 1e-10).unwrap();
        prop_assert!((t - scale * base).abs() <= 1e-8 * (1.0 + scale * base));
    }

    #[test]
    fn slice_parts_always_sum_back(
        b1 in complex_in(0.4),
        b2 in complex_in(0.4),
        c1 in complex_in(0.1),
        c2 in complex_in(0.1),
    ) {
        let b = Point::new(vec![b1, b2 + Complex64::new(0.45, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let c = Point::new(vec![c1, c2]).unwrap();
        prop_assume!(b.norm() < 1.0);
        prop_assume!(c.norm() < b.coord(1).norm() / 2.0);
        let dec = slice_decomposition(&b, &c).unwrap();
        let sum = dec.scaled_b.add(&dec.remainder);
        for j in 0..2 {
            prop_assert!((sum.coord(j) - c.coord(j)).norm() <= 1e-15);
        }
        prop_assert_eq!(dec.remainder.coord(1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn point_and_poly_serde_round_trip(p in small_poly()) {
        let json = serde_json::to_string(&p).unwrap();
        let q: Poly = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(p, q);
    }
}
