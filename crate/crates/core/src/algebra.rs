//! The commutative algebra of spectral polynomials
//! `{ f : tau_{n-1} divides f(lambda_{n-k/2}) - f(lambda_{n-k/2-1}) }`.


use crate::darboux::DarbouxSpec;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{UniPoly, Var};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Quotient of the division by `tau_{n-1}`, a polynomial in `n`.
    pub quotient: UniPoly,
    /// Nonzero exactly when `f` is not a member.
    pub remainder: UniPoly,
}

/// Polynomials in `n` shared by membership, basis and certificate computations.
#[derive(Debug, Clone)]
pub struct AlgebraContext {
    spec: DarbouxSpec,
    /// `lambda_{n-k/2}`
    lam: UniPoly,
    /// `lambda_{n-k/2-1}`
    lam_prev: UniPoly,
    /// `tau_{n-1}`
    tau_prev: UniPoly,
}

impl AlgebraContext {
    pub fn new(spec: &DarbouxSpec) -> Result<Self> {
        let k = spec.k() as i64;
        let tau = spec.tau()?.tau;
        Ok(AlgebraContext {
            spec: spec.clone(),
            lam: spec.lambda_at_shift(&rat::frac(-k, 2)),
            lam_prev: spec.lambda_at_shift(&rat::frac(-k - 2, 2)),
            tau_prev: tau.shifted(&-rat::one()),
        })
    }

    pub fn spec(&self) -> &DarbouxSpec {
        &self.spec
    }

    /// `f(lambda_{n-k/2}) - f(lambda_{n-k/2-1})`.
    pub fn difference(&self, f: &UniPoly) -> UniPoly {
        f.compose(&self.lam) - f.compose(&self.lam_prev)
    }

    pub fn membership(&self, f: &UniPoly) -> Result<Membership> {
        if f.variable() != Var::T {
            return Err(Error::VariableMismatch { expected: Var::T, found: f.variable() });
        }
        let (quotient, remainder) = self.difference(f).divrem(&self.tau_prev)?;
        Ok(Membership { member: remainder.is_zero(), quotient, remainder })
    }

    /// Echelonized basis of the members of degree `<= max_degree`, ascending degree.
    pub fn basis(&self, max_degree: usize) -> Result<Vec<UniPoly>> {
        let width = self.tau_prev.degree().unwrap_or(0);
        // Column e holds the remainder coefficients of t^e.
        let mut cols = Vec::with_capacity(max_degree + 1);
        for e in 0..=max_degree {
            let m = self.membership(&UniPoly::monomial(Var::T, rat::one(), e))?;
            cols.push((0..width).map(|i| m.remainder.coeff(i)).collect::<Vec<_>>());
        }
        let rows: Vec<Vec<Rat>> = (0..width).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let kernel = if width == 0 {
            (0..=max_degree)
                .map(|e| (0..=max_degree).map(|i| if i == e { rat::one() } else { rat::zero() }).collect())
                .collect()
        } else {
            Matrix::from_rows(rows)?.kernel()
        };
        let polys: Vec<UniPoly> = kernel.into_iter().map(|v| UniPoly::from_coeffs(Var::T, v)).collect();
        Ok(echelonize(&polys))
    }

    /// Builds `f` from `f(lambda_{n-k/2}) = int_0^n eps^(k+2)_s g(lambda_{s-(k+1)/2}) tau_{s-1} dmu(s) + c`.
    pub fn element_from_g(&self, g: &UniPoly, c: Rat) -> Result<AlgebraElement> {
        if g.variable() != Var::T {
            return Err(Error::VariableMismatch { expected: Var::T, found: g.variable() });
        }
        let k = self.spec.k();
        let g_n = g.compose(&self.spec.lambda_at_shift(&rat::frac(-(k as i64) - 1, 2)));
        let summand = &self.spec.epsilon(k + 2) * &(&g_n * &self.tau_prev);
        let total = summand.indefinite_sum() + UniPoly::constant(Var::N, c.clone());
        let f = total.express_in(&self.lam, Var::T)?;
        Ok(AlgebraElement { f, g: g.clone(), c, spec: self.spec.clone() })
    }

    /// Recovers the certificate `(g, c)` of a member `f`.
    pub fn certificate(&self, f: &UniPoly) -> Result<AlgebraElement> {
        let m = self.membership(f)?;
        if !m.member {
            return Err(Error::NotInAlgebra);
        }
        let k = self.spec.k();
        let (per_eps, rem) = m.quotient.divrem(&self.spec.epsilon(k + 2))?;
        if !rem.is_zero() {
            return Err(Error::NotInvariant(format!("quotient {} not divisible by epsilon", m.quotient)));
        }
        let base = self.spec.lambda_at_shift(&rat::frac(-(k as i64) - 1, 2));
        let g = per_eps.express_in(&base, Var::T)?;
        let c = f.eval(&self.lam.eval(&rat::zero()));
        Ok(AlgebraElement { f: f.clone(), g, c, spec: self.spec.clone() })
    }
}

/// Canonical echelon form: one element per leading degree, monic, with zero
/// coefficients at every other element's leading degree. Ascending degree.
pub fn echelonize(polys: &[UniPoly]) -> Vec<UniPoly> {
    let width = polys.iter().filter_map(UniPoly::degree).max().map_or(0, |d| d + 1);
    if width == 0 {
        return Vec::new();
    }
    // Columns in descending degree so each pivot is a leading coefficient.
    let rows: Vec<Vec<Rat>> = polys.iter().map(|p| (0..width).rev().map(|d| p.coeff(d)).collect()).collect();
    let mut m = Matrix::from_rows(rows).expect("rectangular");
    let pivots = m.rref();
    let mut out: Vec<UniPoly> = (0..pivots.len())
        .map(|r| {
            let coeffs = (0..width).map(|d| m[(r, width - 1 - d)].clone()).collect();
            UniPoly::from_coeffs(Var::T, coeffs)
        })
        .collect();
    out.reverse();
    out
}

pub fn is_member(f: &UniPoly, spec: &DarbouxSpec) -> Result<Membership> {
    AlgebraContext::new(spec)?.membership(f)
}

pub fn basis_up_to_degree(spec: &DarbouxSpec, max_degree: usize) -> Result<Vec<UniPoly>> {
    AlgebraContext::new(spec)?.basis(max_degree)
}

pub fn element_from_g(g: &UniPoly, c: Rat, spec: &DarbouxSpec) -> Result<AlgebraElement> {
    AlgebraContext::new(spec)?.element_from_g(g, c)
}

/// A member `f` together with its certificate `(g, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    pub f: UniPoly,
    pub g: UniPoly,
    pub c: Rat,
    pub spec: DarbouxSpec,
}

/// The two generators for `alpha = k = 1` in closed form, as polynomials in `t`.
pub fn krall_generators(beta: &Rat, a0: &Rat) -> (UniPoly, UniPoly) {
    let r = |x: i64| rat::int(x);
    let ab = a0 * beta;
    let f2 = UniPoly::from_coeffs(
        Var::T,
        vec![r(0), (r(3) + r(4) * a0 + r(4) * beta + r(4) * &ab) / r(2), r(1)],
    );
    let f3 = UniPoly::from_coeffs(
        Var::T,
        vec![
            r(0),
            -(r(21) + r(12) * a0 + r(28) * beta + r(12) * &ab + r(4) * beta * beta) / r(16),
            (r(1) + r(6) * a0 + r(6) * beta + r(6) * &ab) / r(4),
            r(1),
        ],
    );
    (f2, f3)
}
