//! Polynomial carriers: scalar polynomials on `C^d`, analytic discs
//! `D -> C^d`, and vector-valued boundary functionals on the circle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;

fn complex_pair<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize;
    [c.re, c.im].serialize(s)
}

fn complex_from_pair<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
    let [re, im] = <[f64; 2]>::deserialize(d)?;
    Ok(Complex64::new(re, im))
}

/// One monomial `coeff * z^powers` of a [`Poly`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub powers: Vec<u32>,
    #[serde(serialize_with = "complex_pair", deserialize_with = "complex_from_pair")]
    pub coeff: Complex64,
}

/// A polynomial `C^d -> C` in multi-index form, with terms stored in graded
/// lexicographic order so that serialization is canonical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    dim: usize,
    terms: Vec<Term>,
}

fn graded_lex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let ta: u32 = a.iter().sum();
    let tb: u32 = b.iter().sum();
    ta.cmp(&tb).then_with(|| a.cmp(b))
}

impl Poly {
    pub fn from_terms(dim: usize, terms: Vec<Term>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("polynomial dimension must be >= 1".into()));
        }
        for t in &terms {
            if t.powers.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: t.powers.len(),
                });
            }
            if !t.coeff.re.is_finite() || !t.coeff.im.is_finite() {
                return Err(Error::InvalidParameter("non-finite polynomial coefficient".into()));
            }
        }
        let mut p = Poly { dim, terms };
        p.normalize();
        Ok(p)
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| graded_lex(&a.powers, &b.powers));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.powers == t.powers => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        self.terms = merged;
    }

    pub fn zero(dim: usize) -> Self {
        Poly { dim, terms: vec![] }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Poly::from_terms(
            dim,
            vec![Term {
                powers: vec![0; dim],
                coeff: c,
            }],
        )
        .expect("constant term is well-formed")
    }

    /// The coordinate functional `z_j`.
    pub fn coordinate(dim: usize, j: usize) -> Self {
        assert!(j < dim);
        let mut powers = vec![0; dim];
        powers[j] = 1;
        Poly::from_terms(dim, vec![Term { powers, coeff: Complex64::new(1.0, 0.0) }]).unwrap()
    }

    /// Affine functional `c0 + sum_j w_j z_j`.
    pub fn affine(c0: Complex64, linear: &[Complex64]) -> Self {
        let dim = linear.len();
        let mut terms = vec![Term {
            powers: vec![0; dim],
            coeff: c0,
        }];
        for (j, w) in linear.iter().enumerate() {
            let mut powers = vec![0; dim];
            powers[j] = 1;
            terms.push(Term { powers, coeff: *w });
        }
        Poly::from_terms(dim, terms).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| {
                t.powers
                    .iter()
                    .fold(0u64, |acc, &p| acc.saturating_add(p as u64))
            })
            .max()
            .unwrap_or(0)
            .min(u32::MAX as u64) as u32
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, p: &Point) -> Complex64 {
        debug_assert_eq!(p.dim(), self.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut m = t.coeff;
            for (j, &pw) in t.powers.iter().enumerate() {
                if pw > 0 {
                    m *= p.coord(j).powu(pw);
                }
            }
            acc += m;
        }
        acc
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                powers: t.powers.clone(),
                coeff: t.coeff * c,
            })
            .collect();
        Poly::from_terms(self.dim, terms).unwrap()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Poly::from_terms(self.dim, terms).unwrap()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.dim, other.dim);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let powers = a
                    .powers
                    .iter()
                    .zip(b.powers.iter())
                    .map(|(x, y)| x + y)
                    .collect();
                terms.push(Term {
                    powers,
                    coeff: a.coeff * b.coeff,
                });
            }
        }
        Poly::from_terms(self.dim, terms).unwrap()
    }

    /// The involution `p^cup` with all coefficients conjugated, so that
    /// `p^cup(z) = conj(p(conj(z)))`. Real-coefficient polynomials are fixed.
    pub fn cup(&self) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                powers: t.powers.clone(),
                coeff: t.coeff.conj(),
            })
            .collect();
        Poly::from_terms(self.dim, terms).unwrap()
    }

    /// Restriction to a parametrized curve `z_j = sum_k curve[j][k] t^k`,
    /// returned as one-variable coefficients by power of `t`.
    pub fn restrict_to_curve(&self, curve: &[Vec<Complex64>]) -> Vec<Complex64> {
        debug_assert_eq!(curve.len(), self.dim);
        let mut out: Vec<Complex64> = vec![];
        for t in &self.terms {
            // Product over coordinates of curve_j(t)^power_j, carried as
            // one-variable coefficient vectors.
            let mut prod = vec![t.coeff];
            for (j, &pw) in t.powers.iter().enumerate() {
                for _ in 0..pw {
                    prod = conv(&prod, &curve[j]);
                }
            }
            if prod.len() > out.len() {
                out.resize(prod.len(), Complex64::new(0.0, 0.0));
            }
            for (k, c) in prod.iter().enumerate() {
                out[k] += c;
            }
        }
        out
    }
}

fn conv(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Evaluates one-variable coefficients at `t` by Horner's rule.
pub fn horner(coeffs: &[Complex64], t: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

/// A polynomial map `D -> C^d` given by vector coefficients per power:
/// `k(z) = sum_n coefficients[n] z^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticDisc {
    coefficients: Vec<Point>,
}

impl AnalyticDisc {
    pub fn new(coefficients: Vec<Point>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter("disc needs at least one coefficient".into()));
        }
        let d = coefficients[0].dim();
        for c in &coefficients {
            c.check_dim(d)?;
        }
        Ok(Self { coefficients })
    }

    /// The linear disc `z -> z * direction` through the origin.
    pub fn linear(direction: Point) -> Self {
        let d = direction.dim();
        Self {
            coefficients: vec![Point::zero(d), direction],
        }
    }

    /// The affine disc `z -> base + z * direction`.
    pub fn affine(base: Point, direction: Point) -> Self {
        Self {
            coefficients: vec![base, direction],
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coefficients[0].dim()
    }

    pub fn coefficients(&self) -> &[Point] {
        &self.coefficients
    }

    pub fn eval(&self, z: Complex64) -> Point {
        let d = self.dim();
        let mut acc = vec![Complex64::new(0.0, 0.0); d];
        for c in self.coefficients.iter().rev() {
            for (j, a) in acc.iter_mut().enumerate() {
                *a = *a * z + c.coord(j);
            }
        }
        Point::new(acc).expect("disc evaluation is finite")
    }
}

/// A vector-valued trigonometric polynomial `h(z) = sum_n coefficients[n] z^n`
/// evaluated on the unit circle; the carrier of the Royden-Wong condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFunctional {
    coefficients: Vec<Point>,
}

impl BoundaryFunctional {
    pub fn new(coefficients: Vec<Point>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter("boundary functional needs coefficients".into()));
        }
        let d = coefficients[0].dim();
        for c in &coefficients {
            c.check_dim(d)?;
        }
        Ok(Self { coefficients })
    }

    pub fn constant(value: Point) -> Self {
        Self {
            coefficients: vec![value],
        }
    }

    pub fn dim(&self) -> usize {
        self.coefficients[0].dim()
    }

    pub fn eval(&self, z: Complex64) -> Point {
        let d = self.dim();
        let mut acc = vec![Complex64::new(0.0, 0.0); d];
        for c in self.coefficients.iter().rev() {
            for (j, a) in acc.iter_mut().enumerate() {
                *a = *a * z + c.coord(j);
            }
        }
        Point::new(acc).expect("functional evaluation is finite")
    }
}
