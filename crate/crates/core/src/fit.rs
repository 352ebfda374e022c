//! Exact fitting of the operator `B_f` with `B_f q_n = f(lambda_{n-k/2}) q_n`.
//!
//! The unknowns are the coefficients of `D1^i D2^j` with `i + 2j <= order`,
//! `order = 2 deg f` unless overridden. Eigen-equations are imposed for
//! `n = 0..=unknowns+2` and the solution is then checked on further indices.

use num_traits::Zero;

use crate::darboux::QFamily;
use crate::error::{Error, Result};
use crate::jacobi;
use crate::linalg::{LinearProblem, Matrix, Solution};
use crate::ncop::NcOp;
use crate::poly::{UniPoly, Var};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitOptions {
    /// Ansatz order; `None` means `2 deg f`.
    pub order: Option<u32>,
    /// Extra indices used only for verification.
    pub verify_extra: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { order: None, verify_extra: 5 }
    }
}

/// The eigenvalue `f(lambda_{n - k/2 + s/2})` at a concrete index.
pub fn eigenvalue(f: &UniPoly, family: &QFamily, n: usize, s: u32) -> Rat {
    let spec = family.spec();
    let m = rat::int(n as i64) + rat::frac(s as i64 - spec.k() as i64, 2);
    f.eval(&jacobi::lambda(&m, &spec.ab()))
}

pub fn fit_bf(f: &UniPoly, family: &QFamily) -> Result<NcOp> {
    fit_bf_with(f, family, FitOptions::default())
}

pub fn fit_bf_with(f: &UniPoly, family: &QFamily, opts: FitOptions) -> Result<NcOp> {
    if f.variable() != Var::T {
        return Err(Error::VariableMismatch { expected: Var::T, found: f.variable() });
    }
    let beta = family.spec().beta.clone();
    if f.is_zero() {
        return Ok(NcOp::zero(beta));
    }
    let order = opts.order.unwrap_or(2 * f.degree().unwrap_or(0) as u32);
    let unknowns: Vec<(u32, u32)> = (0..=order / 2)
        .flat_map(|j| (0..=order - 2 * j).map(move |i| (i, j)))
        .collect();
    let n_fit = unknowns.len() + 2;

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for n in 0..=n_fit {
        let q = family.q(n)?;
        let ev = eigenvalue(f, family, n, 0);
        let images: Vec<UniPoly> = unknowns
            .iter()
            .map(|&(i, j)| NcOp::monomial(beta.clone(), i, j, rat::one()).realize(&q, 0))
            .collect();
        for d in 0..=n {
            let row: Vec<Rat> = images.iter().map(|p| p.coeff(d)).collect();
            let target = &ev * q.coeff(d);
            if row.iter().all(Zero::is_zero) && target.is_zero() {
                continue;
            }
            rows.push(row);
            rhs.push(target);
        }
    }
    let problem = LinearProblem::new(Matrix::from_rows(rows)?, rhs)?;
    let coeffs = match problem.solve() {
        Solution::Unique(x) => x,
        Solution::Affine { kernel, .. } => {
            return Err(Error::OrderBound { order: order as usize, kernel_dim: kernel.len() })
        }
        Solution::Inconsistent { .. } => return Err(Error::NotInAlgebra),
    };
    let op = NcOp::from_terms(beta, unknowns.into_iter().zip(coeffs));
    for n in n_fit + 1..=n_fit + opts.verify_extra {
        let q = family.q(n)?;
        if op.realize(&q, 0) != q.scale(&eigenvalue(f, family, n, 0)) {
            return Err(Error::FitVerification(n));
        }
    }
    Ok(op)
}
