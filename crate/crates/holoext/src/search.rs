//! Derivative-free search machinery shared by the Caratheodory and
//! certificate searches: a compact Nelder-Mead simplex minimizer plus a
//! deterministic seeded multistart layer.
//!
//! Restarts are indexed; restart `i` draws from an RNG stream derived from
//! `(seed, stage, i)` only, so enlarging the budget appends candidates
//! without disturbing earlier ones, and evaluating candidates in parallel
//! cannot change the result: the merge rule is (best polished value,
//! lowest candidate index).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::rng::{self, mix_seed};

/// All exponent multi-indices with total degree <= `degree` in `dim`
/// variables, in graded lexicographic order. The ordering is a prefix
/// chain: the basis for degree g-1 is a prefix of the basis for degree g.
pub(crate) fn monomial_basis(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut scratch = vec![0u32; dim];
    for total in 0..=degree {
        fill_degree(dim, total, 0, &mut scratch, &mut out);
    }
    out
}

fn fill_degree(dim: usize, remaining: u32, pos: usize, scratch: &mut [u32], out: &mut Vec<Vec<u32>>) {
    if pos == dim - 1 {
        scratch[pos] = remaining;
        out.push(scratch.to_vec());
        return;
    }
    for take in (0..=remaining).rev() {
        scratch[pos] = take;
        fill_degree(dim, remaining - take, pos + 1, scratch, out);
    }
}

pub(crate) fn pack(coeffs: &[Complex64]) -> Vec<f64> {
    let mut x = Vec::with_capacity(2 * coeffs.len());
    for c in coeffs {
        x.push(c.re);
        x.push(c.im);
    }
    x
}

pub(crate) fn unpack(x: &[f64]) -> Vec<Complex64> {
    x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect()
}

/// Nelder-Mead minimization of `f` from `x0`, spending at most `max_evals`
/// objective calls. Returns the best point seen.
pub(crate) fn nelder_mead(
    f: &impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_evals: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut evals = 0usize;
    let eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let fx0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), fx0));
    for i in 0..n {
        if evals >= max_evals {
            break;
        }
        let mut xi = x0.to_vec();
        xi[i] += step;
        let fi = eval(&xi, &mut evals);
        simplex.push((xi, fi));
    }
    let mut best = simplex
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap()
        .clone();
    if simplex.len() < n + 1 {
        return (best.0, best.1);
    }

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if simplex[0].1 < best.1 {
            best = simplex[0].clone();
        }
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() < 1e-14 * (1.0 + simplex[0].1.abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n).map(|j| 2.0 * centroid[j] - worst.0[j]).collect();
        let fr = eval(&reflect, &mut evals);
        if fr < simplex[0].1 {
            // try expansion
            let expand: Vec<f64> = (0..n).map(|j| 3.0 * centroid[j] - 2.0 * worst.0[j]).collect();
            let fe = if evals < max_evals {
                eval(&expand, &mut evals)
            } else {
                f64::INFINITY
            };
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            let contract: Vec<f64> = (0..n).map(|j| 0.5 * (centroid[j] + worst.0[j])).collect();
            let fc = if evals < max_evals {
                eval(&contract, &mut evals)
            } else {
                f64::INFINITY
            };
            if fc < worst.1 {
                simplex[n] = (contract, fc);
            } else {
                // shrink toward the best vertex
                let x_best = simplex[0].0.clone();
                for k in 1..=n {
                    if evals >= max_evals {
                        break;
                    }
                    let shrunk: Vec<f64> = (0..n)
                        .map(|j| 0.5 * (simplex[k].0[j] + x_best[j]))
                        .collect();
                    let fs = eval(&shrunk, &mut evals);
                    simplex[k] = (shrunk, fs);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    if simplex[0].1 < best.1 {
        best = simplex[0].clone();
    }
    (best.0, best.1)
}

/// One optimized candidate out of a multistart stage.
pub(crate) struct StageCandidate {
    pub index: usize,
    pub coeffs: Vec<Complex64>,
    pub polished_value: f64,
}

/// Runs one multistart stage: deterministic starts first, then seeded
/// random restarts, each polished locally against `cheap_value`, then
/// scored once with `polished_value`. Returns the winner by
/// (polished value desc, index asc).
pub(crate) fn multistart_stage(
    det_starts: &[Vec<Complex64>],
    n_coeffs: usize,
    budget: usize,
    seed: u64,
    stage_tag: u64,
    cheap_value: &(impl Fn(&[Complex64]) -> f64 + Sync),
    polished_value: &(impl Fn(&[Complex64]) -> f64 + Sync),
) -> Option<StageCandidate> {
    let n_params = 2 * n_coeffs;
    // Per-candidate evaluation allowance; independent of the budget so a
    // larger budget appends restarts instead of rescheduling them.
    let chunk = (4 * n_params).max(120);
    let n_candidates = (budget / chunk).max(1).max(det_starts.len());
    let starts: Vec<Vec<Complex64>> = (0..n_candidates)
        .map(|i| {
            if i < det_starts.len() {
                let mut c = det_starts[i].clone();
                c.resize(n_coeffs, Complex64::new(0.0, 0.0));
                c
            } else {
                let restart = (i - det_starts.len()) as u64;
                let mut rng = rng::rng_from(mix_seed(seed, stage_tag, restart));
                let scale = 0.5 / (n_coeffs as f64).sqrt();
                (0..n_coeffs)
                    .map(|_| rng::complex_gaussian(&mut rng) * scale)
                    .collect()
            }
        })
        .collect();

    let candidates: Vec<StageCandidate> = starts
        .par_iter()
        .enumerate()
        .map(|(index, start)| {
            let objective = |x: &[f64]| -cheap_value(&unpack(x));
            let x0 = pack(start);
            let (x_opt, _) = nelder_mead(&objective, &x0, 0.15, chunk);
            let coeffs = unpack(&x_opt);
            // Score the untouched start as well: the cheap objective's
            // sampling bias can lure the simplex away from an exactly
            // extremal deterministic start.
            let polished_opt = polished_value(&coeffs);
            let polished_start = polished_value(start);
            if polished_start > polished_opt {
                StageCandidate {
                    index,
                    coeffs: start.clone(),
                    polished_value: polished_start,
                }
            } else {
                StageCandidate {
                    index,
                    coeffs,
                    polished_value: polished_opt,
                }
            }
        })
        .collect();

    candidates.into_iter().filter(|c| c.polished_value.is_finite()).fold(
        None,
        |acc: Option<StageCandidate>, c| match acc {
            None => Some(c),
            Some(best) => {
                if c.polished_value > best.polished_value
                    || (c.polished_value == best.polished_value && c.index < best.index)
                {
                    Some(c)
                } else {
                    Some(best)
                }
            }
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_prefix_chain() {
        let b2 = monomial_basis(2, 2);
        let b3 = monomial_basis(2, 3);
        assert_eq!(b2.len(), 6);
        assert_eq!(b3.len(), 10);
        assert_eq!(&b3[..b2.len()], &b2[..]);
        assert_eq!(b2[0], vec![0, 0]);
    }

    #[test]
    fn nelder_mead_minimizes_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let (x, v) = nelder_mead(&f, &[0.0, 0.0], 0.2, 400);
        assert!(v < 1e-10, "value {v}");
        assert!((x[0] - 1.5).abs() < 1e-4 && (x[1] + 0.5).abs() < 1e-4);
    }

    #[test]
    fn multistart_is_deterministic() {
        let cheap = |c: &[Complex64]| -(c[0] - Complex64::new(0.3, -0.2)).norm_sqr();
        let polish = cheap;
        let a = multistart_stage(&[], 1, 600, 9, 1, &cheap, &polish).unwrap();
        let b = multistart_stage(&[], 1, 600, 9, 1, &cheap, &polish).unwrap();
        assert_eq!(a.index, b.index);
        assert_eq!(a.coeffs, b.coeffs);
        // Budget growth only appends candidates: winner value can only improve.
        let c = multistart_stage(&[], 1, 1800, 9, 1, &cheap, &polish).unwrap();
        assert!(c.polished_value >= a.polished_value);
    }
}
