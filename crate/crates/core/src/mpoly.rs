//! Sparse multivariate polynomials in `x_1, ..., x_d` over `Rat`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::poly::{UniPoly, Var};
use crate::rat::{self, Rat};

pub type Exponent = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    dim: usize,
    terms: BTreeMap<Exponent, Rat>,
}

impl MPoly {
    pub fn zero(dim: usize) -> Self {
        MPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, rat::one())
    }

    pub fn monomial(exp: Exponent, c: Rat) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// The coordinate `x_i` (0-based).
    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(e, rat::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rat)>>(dim: usize, terms: I) -> Self {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// `sum_i x_i^2`.
    pub fn norm_squared(dim: usize) -> Self {
        Self::from_terms(
            dim,
            (0..dim).map(|i| {
                let mut e = vec![0; dim];
                e[i] = 2;
                (e, rat::one())
            }),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(rat::zero)
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rat) {
        assert_eq!(exp.len(), self.dim, "exponent length must match the dimension");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp.clone()).or_insert_with(rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self, deg: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == deg)
    }

    /// Homogeneous components keyed by degree.
    pub fn components(&self) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.iter().sum())
                .or_insert_with(|| MPoly::zero(self.dim))
                .add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.dim);
        }
        MPoly { dim: self.dim, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn partial(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c * rat::int(e[i] as i64));
        }
        out
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| acc * rat::pow(xi, k)))
            .sum()
    }

    /// `p(||x||^2)` for a polynomial `p` in `z`.
    pub fn radial(p: &UniPoly, dim: usize) -> MPoly {
        assert_eq!(p.variable(), Var::Z);
        let rho2 = MPoly::norm_squared(dim);
        let mut acc = MPoly::zero(dim);
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * &rho2) + &MPoly::constant(dim, c.clone());
        }
        acc
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, " x{}", i + 1)?,
                    _ => write!(f, " x{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

fn exp_sum(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn same_dim(a: &MPoly, b: &MPoly) {
    assert_eq!(a.dim, b.dim, "polynomials in different dimensions cannot be combined");
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        same_dim(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-rat::one())
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        same_dim(self, rhs);
        let mut out = MPoly::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(exp_sum(ea, eb), ca * cb);
            }
        }
        out
    }
}
