//! Sparse multivariate polynomials with complex coefficients.
//!
//! Terms are stored combined and sorted by decreasing graded-lexicographic
//! exponent order, so two equal polynomials have identical term lists and the
//! JSON form is canonical.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    num_vars: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    /// Build from raw `(coefficient, exponents)` pairs; like terms are merged
    /// and zero coefficients dropped.
    pub fn new<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex64, Vec<u32>)>,
    {
        let mut raw: Vec<Monomial> = Vec::new();
        for (coeff, exponents) in terms {
            if exponents.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    got: exponents.len(),
                });
            }
            if !is_finite(coeff) {
                return Err(Error::InvalidParameter("non-finite coefficient".into()));
            }
            raw.push(Monomial { coeff, exponents });
        }
        Ok(Self::from_monomials(num_vars, raw))
    }

    fn from_monomials(num_vars: usize, mut raw: Vec<Monomial>) -> Self {
        raw.sort_by(|a, b| grlex(&b.exponents, &a.exponents));
        let mut terms: Vec<Monomial> = Vec::with_capacity(raw.len());
        for m in raw {
            match terms.last_mut() {
                Some(last) if last.exponents == m.exponents => last.coeff += m.coeff,
                _ => terms.push(m),
            }
        }
        terms.retain(|m| m.coeff != Complex64::new(0.0, 0.0));
        Polynomial { num_vars, terms }
    }

    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: Vec::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Complex64) -> Self {
        Self::from_monomials(
            num_vars,
            vec![Monomial {
                coeff: c,
                exponents: vec![0; num_vars],
            }],
        )
    }

    /// The coordinate function `x_i`.
    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::from_monomials(
            num_vars,
            vec![Monomial {
                coeff: Complex64::new(1.0, 0.0),
                exponents: e,
            }],
        )
    }

    /// Affine-linear form `c0 + Σ c_{j+1} x_j`.
    pub fn affine(coeffs: &[Complex64]) -> Self {
        let n = coeffs.len() - 1;
        let mut raw = Vec::with_capacity(coeffs.len());
        raw.push(Monomial {
            coeff: coeffs[0],
            exponents: vec![0; n],
        });
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            raw.push(Monomial {
                coeff: coeffs[j + 1],
                exponents: e,
            });
        }
        Self::from_monomials(n, raw)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_monomials(
            self.num_vars,
            self.terms
                .iter()
                .map(|m| Monomial {
                    coeff: m.coeff * c,
                    exponents: m.exponents.clone(),
                })
                .collect(),
        )
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|m| {
                m.exponents
                    .iter()
                    .zip(x)
                    .fold(m.coeff, |acc, (&e, &xj)| acc * xj.powu(e))
            })
            .sum()
    }

    /// Exact partial derivative with respect to `x_j`.
    pub fn partial(&self, j: usize) -> Self {
        let raw = self
            .terms
            .iter()
            .filter(|m| m.exponents[j] > 0)
            .map(|m| {
                let mut e = m.exponents.clone();
                let k = e[j];
                e[j] -= 1;
                Monomial {
                    coeff: m.coeff * k as f64,
                    exponents: e,
                }
            })
            .collect();
        Self::from_monomials(self.num_vars, raw)
    }

    /// Gradient at `x` without materializing derivative polynomials.
    pub fn gradient(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut g = vec![Complex64::new(0.0, 0.0); self.num_vars];
        for m in &self.terms {
            for (j, (gj, &ej)) in g.iter_mut().zip(&m.exponents).enumerate() {
                if ej == 0 {
                    continue;
                }
                let mut v = m.coeff * ej as f64;
                for (k, (&e, &xk)) in m.exponents.iter().zip(x).enumerate() {
                    let p = if k == j { e - 1 } else { e };
                    if p > 0 {
                        v *= xk.powu(p);
                    }
                }
                *gj += v;
            }
        }
        g
    }

    /// Homogenize to total degree `deg` with a new leading variable `x_0`.
    pub fn homogenize(&self, deg: u32) -> Self {
        let raw = self
            .terms
            .iter()
            .map(|m| {
                let mut e = Vec::with_capacity(self.num_vars + 1);
                e.push(deg - m.degree());
                e.extend_from_slice(&m.exponents);
                Monomial {
                    coeff: m.coeff,
                    exponents: e,
                }
            })
            .collect();
        Self::from_monomials(self.num_vars + 1, raw)
    }

    /// Upper bound on `|p(x)|` obtained by evaluating every term in absolute value.
    pub fn abs_eval(&self, x: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|m| {
                m.exponents
                    .iter()
                    .zip(x)
                    .fold(m.coeff.norm(), |acc, (&e, xj)| acc * xj.norm().powi(e as i32))
            })
            .sum()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let raw = self.terms.iter().chain(&rhs.terms).cloned().collect();
        Polynomial::from_monomials(self.num_vars, raw)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut raw = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                raw.push(Monomial {
                    coeff: a.coeff * b.coeff,
                    exponents: a
                        .exponents
                        .iter()
                        .zip(&b.exponents)
                        .map(|(x, y)| x + y)
                        .collect(),
                });
            }
        }
        Polynomial::from_monomials(self.num_vars, raw)
    }
}

/// A list of polynomials in a common set of named variables.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    vars: Vec<String>,
    polys: Vec<Polynomial>,
}

impl PolySystem {
    /// Variables are named `x1..xn`.
    pub fn new(num_vars: usize, polys: Vec<Polynomial>) -> Result<Self> {
        let vars = (1..=num_vars).map(|i| format!("x{i}")).collect();
        Self::with_vars(vars, polys)
    }

    pub fn with_vars(vars: Vec<String>, polys: Vec<Polynomial>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::InvalidParameter("system needs at least one variable".into()));
        }
        for p in &polys {
            if p.num_vars() != vars.len() {
                return Err(Error::DimensionMismatch {
                    expected: vars.len(),
                    got: p.num_vars(),
                });
            }
        }
        Ok(PolySystem { vars, polys })
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_eqs(&self) -> usize {
        self.polys.len()
    }

    pub fn is_square(&self) -> bool {
        self.num_vars() == self.num_eqs()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(Polynomial::degree).collect()
    }

    fn check_len(&self, x: &[Complex64]) -> Result<()> {
        if x.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(x)?;
        Ok(self.polys.iter().map(|p| p.eval(x)).collect())
    }

    pub fn jacobian(&self, x: &[Complex64]) -> Result<DMatrix<Complex64>> {
        self.check_len(x)?;
        let n = self.num_vars();
        let mut jac = DMatrix::zeros(self.num_eqs(), n);
        for (i, p) in self.polys.iter().enumerate() {
            for (j, g) in p.gradient(x).into_iter().enumerate() {
                jac[(i, j)] = g;
            }
        }
        Ok(jac)
    }

    /// Left-multiply by a coefficient matrix: row `i` of the result is
    /// `Σ_j r[i][j] f_j`.
    pub fn combine(&self, r: &DMatrix<Complex64>) -> Result<PolySystem> {
        if r.ncols() != self.num_eqs() {
            return Err(Error::DimensionMismatch {
                expected: self.num_eqs(),
                got: r.ncols(),
            });
        }
        let n = self.num_vars();
        let polys = (0..r.nrows())
            .map(|i| {
                self.polys
                    .iter()
                    .enumerate()
                    .fold(Polynomial::zero(n), |acc, (j, p)| &acc + &p.scale(r[(i, j)]))
            })
            .collect();
        PolySystem::with_vars(self.vars.clone(), polys)
    }

    /// Stack the equations of `other` below these; both must share variables.
    pub fn stack(&self, other: &PolySystem) -> Result<PolySystem> {
        if other.num_vars() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                got: other.num_vars(),
            });
        }
        let mut polys = self.polys.clone();
        polys.extend(other.polys.iter().cloned());
        PolySystem::with_vars(self.vars.clone(), polys)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("system serializes")
    }

    pub fn to_doc(&self) -> SystemDoc {
        SystemDoc {
            vars: self.vars.clone(),
            polys: self
                .polys
                .iter()
                .map(|p| {
                    p.terms()
                        .iter()
                        .map(|m| TermDoc {
                            c: [m.coeff.re, m.coeff.im],
                            e: m.exponents.iter().map(|&e| e as i64).collect(),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &SystemDoc) -> Result<Self> {
        let n = doc.vars.len();
        let mut polys = Vec::with_capacity(doc.polys.len());
        for (i, terms) in doc.polys.iter().enumerate() {
            let mut raw = Vec::with_capacity(terms.len());
            for t in terms {
                if t.e.len() != n {
                    return Err(Error::Parse(format!(
                        "polynomial {i}: exponent vector of length {} but {n} variables",
                        t.e.len()
                    )));
                }
                let mut e = Vec::with_capacity(n);
                for &x in &t.e {
                    if x < 0 || x > u32::MAX as i64 {
                        return Err(Error::Parse(format!("polynomial {i}: invalid exponent {x}")));
                    }
                    e.push(x as u32);
                }
                raw.push((Complex64::new(t.c[0], t.c[1]), e));
            }
            polys.push(Polynomial::new(n, raw).map_err(|e| Error::Parse(e.to_string()))?);
        }
        PolySystem::with_vars(doc.vars.clone(), polys).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: SystemDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc)
    }
}

/// JSON document: `{"vars": [...], "polys": [[{"c": [re, im], "e": [...]}, ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDoc {
    pub vars: Vec<String>,
    pub polys: Vec<Vec<TermDoc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDoc {
    pub c: [f64; 2],
    pub e: Vec<i64>,
}
