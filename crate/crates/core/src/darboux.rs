//! Darboux data at one end of the Jacobi spectrum: the kernel functions
//! `psi^(j)`, the Casorati polynomial `tau`, the transformed polynomials
//! `q_n` and their weighted variants, and the transformed recurrence.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::discrete::casorati_symbolic;
use crate::error::{Error, Result};
use crate::jacobi::{self, jacobi_poly_signed, recurrence_coeffs, JacobiParams};
use crate::linalg::Matrix;
use crate::poly::{poly_pochhammer, UniPoly, Var};
use crate::rat::{self, Rat};

/// Parameters of `k` successive Darboux steps at `z = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DarbouxSpec {
    pub alpha: u32,
    #[serde(with = "rat::serde_str")]
    pub beta: Rat,
    /// `a_0, ..., a_{k-1}`; its length is `k`.
    #[serde(with = "rat::serde_vec")]
    pub a: Vec<Rat>,
}

impl DarbouxSpec {
    /// `k = a.len()`. `k = 0` is allowed and gives back the classical family.
    pub fn new(alpha: u32, beta: Rat, a: Vec<Rat>) -> Result<Self> {
        if a.len() > alpha as usize {
            return Err(Error::InvalidParameters(format!(
                "k = {} exceeds alpha = {alpha}",
                a.len()
            )));
        }
        if beta <= -rat::one() {
            return Err(Error::InvalidParameters(format!("beta = {beta} must exceed -1")));
        }
        Ok(DarbouxSpec { alpha, beta, a })
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn alpha_rat(&self) -> Rat {
        rat::int(self.alpha as i64)
    }

    pub fn ab(&self) -> Rat {
        self.alpha_rat() + &self.beta
    }

    pub fn jacobi(&self) -> JacobiParams {
        JacobiParams { alpha: self.alpha_rat(), beta: self.beta.clone() }
    }

    /// Same Darboux data over `beta + s`; used as the multivariate `beta = d/2 - 1` check.
    pub fn with_beta(&self, beta: Rat) -> Result<Self> {
        Self::new(self.alpha, beta, self.a.clone())
    }

    /// `lambda_{n + shift}` as a polynomial in `n`, with `lambda_m = m (m + alpha + beta + 1)`.
    pub fn lambda_at_shift(&self, shift: &Rat) -> UniPoly {
        jacobi::lambda_poly(shift, &self.ab())
    }

    /// `lambda_{n - k/2}`, the substitution defining the algebra.
    pub fn spectral_lambda(&self) -> UniPoly {
        self.lambda_at_shift(&rat::frac(-(self.k() as i64), 2))
    }

    /// `epsilon^(order)_n`: `1` when `order = 0, 1 mod 4`, otherwise
    /// `lambda_{n-order/2+1} - lambda_{n-order/2} = 2n + alpha + beta - order + 2`.
    pub fn epsilon(&self, order: usize) -> UniPoly {
        match order % 4 {
            0 | 1 => UniPoly::one(Var::N),
            _ => UniPoly::linear(Var::N, rat::int(2), self.ab() - rat::int(order as i64) + rat::int(2)),
        }
    }

    fn phi1(&self, j: usize) -> Result<UniPoly> {
        let n = UniPoly::var(Var::N);
        let j32 = j as u32;
        let one_minus_alpha = rat::one() - self.alpha_rat();
        let den = rat::factorial(j32) * rat::pochhammer(&one_minus_alpha, j32);
        if den.is_zero() {
            return Err(Error::InvalidParameters(format!("(1-alpha)_{j} vanishes")));
        }
        let n1 = &n + &UniPoly::one(Var::N);
        let mnab = UniPoly::linear(Var::N, -rat::one(), -self.ab());
        let mut num = poly_pochhammer(&n1, j32) * poly_pochhammer(&mnab, j32);
        if j % 2 == 1 {
            num = -num;
        }
        Ok(num.scale(&(rat::one() / den)))
    }

    fn phi2(&self, j: usize) -> UniPoly {
        let j32 = j as u32;
        let n = UniPoly::var(Var::N);
        let one = rat::one();
        let alpha = self.alpha_rat();
        let n1 = UniPoly::linear(Var::N, one.clone(), one.clone());
        let nb1 = UniPoly::linear(Var::N, one.clone(), &self.beta + &one);
        let nab1 = UniPoly::linear(Var::N, one.clone(), self.ab() + &one);
        let mut num = poly_pochhammer(&n1, self.alpha)
            * poly_pochhammer(&nb1, self.alpha)
            * poly_pochhammer(&-n, j32)
            * poly_pochhammer(&nab1, j32);
        if j % 2 == 1 {
            num = -num;
        }
        let den = rat::factorial(j32)
            * rat::factorial(self.alpha)
            * rat::pochhammer(&(&one + &alpha), j32)
            * rat::pochhammer(&(&one + &self.beta), self.alpha);
        num.scale(&(one / den))
    }

    /// `psi^(j)_n = sum_{l<=j} a_{j-l} phi^{1,l}_n + phi^{2,j}_n`, a polynomial in `n`.
    pub fn psi(&self, j: usize) -> Result<UniPoly> {
        if j >= self.k() {
            return Err(Error::InvalidParameters(format!("psi index {j} out of range for k = {}", self.k())));
        }
        let mut acc = self.phi2(j);
        for l in 0..=j {
            acc += &self.phi1(l)?.scale(&self.a[j - l]);
        }
        Ok(acc)
    }

    pub fn psis(&self) -> Result<Vec<UniPoly>> {
        (0..self.k()).map(|j| self.psi(j)).collect()
    }

    /// `tau_n = Wr_n(psi^(0), ..., psi^(k-1))` and its factorization
    /// `tau_n = epsilon^(k)_n taubar(lambda_{n-(k-1)/2})`.
    pub fn tau(&self) -> Result<Tau> {
        let tau = casorati_symbolic(&self.psis()?)?;
        let eps = self.epsilon(self.k());
        let (quot, rem) = tau.divrem(&eps)?;
        if !rem.is_zero() {
            return Err(Error::NotInvariant(format!("tau is not divisible by epsilon: remainder {rem}")));
        }
        let base = self.lambda_at_shift(&rat::frac(-(self.k() as i64 - 1), 2));
        let tau_bar = quot.express_in(&base, Var::T)?;
        Ok(Tau { tau, tau_bar, epsilon: eps })
    }

    /// Checks `I^(alpha+beta-k+1)(tau_n) = (-1)^{k(k-1)/2} tau_n`.
    pub fn tau_symmetry_holds(&self, tau: &UniPoly) -> Result<bool> {
        let k = self.k() as i64;
        let v = -(self.ab() - rat::int(k) + rat::int(2));
        let image = tau.substitute_affine(&-rat::one(), &v)?;
        let sign = if (k * (k - 1) / 2) % 2 == 0 { tau.clone() } else { -tau };
        Ok(image == sign)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tau {
    /// Polynomial in `n`.
    pub tau: UniPoly,
    /// Polynomial in `t` with `tau_n / epsilon_n = tau_bar(lambda_{n-(k-1)/2})`.
    pub tau_bar: UniPoly,
    pub epsilon: UniPoly,
}

/// Memoized `q_n` and weighted `hat q_{n,s}` for one Darboux spec.
#[derive(Debug)]
pub struct QFamily {
    spec: DarbouxSpec,
    psis: Vec<UniPoly>,
    tau: UniPoly,
    memo: Mutex<BTreeMap<(usize, u32), UniPoly>>,
}

impl QFamily {
    pub fn new(spec: DarbouxSpec) -> Result<Self> {
        let psis = spec.psis()?;
        let tau = casorati_symbolic(&psis)?;
        Ok(QFamily { spec, psis, tau, memo: Mutex::new(BTreeMap::new()) })
    }

    pub fn spec(&self) -> &DarbouxSpec {
        &self.spec
    }

    pub fn psis(&self) -> &[UniPoly] {
        &self.psis
    }

    /// `tau_n` as a polynomial in `n`.
    pub fn tau_poly(&self) -> &UniPoly {
        &self.tau
    }

    /// `psi^(i)` evaluated at the rational index `m`.
    fn psi_at(&self, i: usize, m: &Rat) -> Rat {
        self.psis[i].eval(m)
    }

    /// The `k x k` minors of the `psi` rows of the Casorati matrix at index
    /// `n + s/2`, one for each dropped column `c = 0..=k`.
    fn psi_minors(&self, n: i64, s: u32) -> Result<Vec<Rat>> {
        let k = self.spec.k();
        let half = rat::frac(s as i64, 2);
        let vals: Vec<Vec<Rat>> = (0..k)
            .map(|i| (0..=k).map(|c| self.psi_at(i, &(rat::int(n - c as i64) + &half))).collect())
            .collect();
        (0..=k)
            .map(|drop| {
                let rows = vals
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != drop).map(|(_, v)| v.clone()).collect())
                    .collect();
                Matrix::from_rows(rows)?.det()
            })
            .collect()
    }

    /// `q_n = Wr_n(psi^(0), ..., psi^(k-1), p_n(z))` with `p_j = 0` for `j < 0`.
    pub fn q(&self, n: usize) -> Result<UniPoly> {
        self.hat_q(n, 0)
    }

    /// `hat q_{n,s}`: `psi` shifted to `n + s/2`, the Jacobi column over `beta + s`.
    pub fn hat_q(&self, n: usize, s: u32) -> Result<UniPoly> {
        if let Some(p) = self.memo.lock().expect("memo lock").get(&(n, s)) {
            return Ok(p.clone());
        }
        let q = self.compute_hat_q(n, s)?;
        self.memo.lock().expect("memo lock").insert((n, s), q.clone());
        Ok(q)
    }

    fn compute_hat_q(&self, n: usize, s: u32) -> Result<UniPoly> {
        let k = self.spec.k();
        let ni = n as i64;
        let minors = self.psi_minors(ni, s)?;
        let prm = self.spec.jacobi().with_beta(&self.spec.beta + rat::int(s as i64));
        // minors[0] is tau at n - 1 + s/2, the cofactor of p_n. At n = 0 it
        // is the only cofactor, so q_0 = tau_{-1} p_0; when tau_{-1} vanishes
        // we use the limit of q_0 / tau_{-1}, which is p_0.
        if minors[0].is_zero() {
            if n == 0 {
                return Ok(jacobi::jacobi_poly(0, &prm));
            }
            return Err(Error::Degenerate(ni - 1));
        }
        let mut acc = UniPoly::zero(Var::Z);
        for (c, minor) in minors.iter().enumerate() {
            if minor.is_zero() {
                continue;
            }
            let p = jacobi_poly_signed(ni - c as i64, &prm);
            let term = p.scale(minor);
            if (k + c).is_multiple_of(2) {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        Ok(acc)
    }

    /// Row `n` of the banded matrix `Q`: pairs `(column, entry)`.
    pub fn q_matrix_row(&self, n: usize) -> Result<Vec<(usize, Rat)>> {
        let k = self.spec.k();
        let minors = self.psi_minors(n as i64, 0)?;
        if n == 0 && minors[0].is_zero() {
            return Ok(vec![(0, rat::one())]);
        }
        Ok(minors
            .into_iter()
            .enumerate()
            .filter(|(c, _)| *c <= n)
            .map(|(c, m)| (n - c, if (k + c).is_multiple_of(2) { m } else { -m }))
            .collect())
    }

    /// Fails with the first `n` in `1..=n_max` where `tau_{n-1} = 0`.
    /// A vanishing `tau_{-1}` is harmless since `q_0` is then renormalized.
    pub fn check_generic(&self, n_max: usize) -> Result<()> {
        for n in 1..=n_max as i64 {
            if self.tau.eval_i64(n - 1).is_zero() {
                return Err(Error::Degenerate(n - 1));
            }
        }
        Ok(())
    }

    /// `(L q)_n = a_n q_{n+1} + b_n q_n + c_n q_{n-1}` fitted for `n = 0..=n_max`.
    pub fn fit_recurrence(&self, n_max: usize) -> Result<TridiagOp> {
        let mut op = TridiagOp::default();
        let mut prev: Option<UniPoly> = None;
        let mut cur = self.q(0)?;
        for n in 0..=n_max {
            let next = self.q(n + 1)?;
            let zq = cur.shift_up(1);
            let a = zq.lead() / next.lead();
            let r1 = &zq - &next.scale(&a);
            let b = r1.coeff(n) / cur.lead();
            let r2 = &r1 - &cur.scale(&b);
            let (c, r3) = match &prev {
                Some(p) => {
                    let c = r2.coeff(n - 1) / p.lead();
                    let r3 = &r2 - &p.scale(&c);
                    (c, r3)
                }
                None => (rat::zero(), r2),
            };
            if !r3.is_zero() {
                return Err(Error::RecurrenceFit(n));
            }
            if a.is_zero() || (n > 0 && c.is_zero()) {
                return Err(Error::SingularRecurrence(n as i64));
            }
            op.a.push(a);
            op.b.push(b);
            op.c.push(c);
            prev = Some(cur);
            cur = next;
        }
        Ok(op)
    }

    /// Left side of the point-mass orthogonality relation for `alpha = k = 1`:
    /// `(1 + (s^2 + 2 beta s) / (4 a_0 (beta+1))) int_0^1 hq_n hq_m z^{beta+s} dz
    ///  + hq_n(1) hq_m(1) / (a_0 (beta+1))`.
    pub fn orthogonality_k1(&self, n: usize, m: usize, s: u32) -> Result<Rat> {
        if self.spec.k() != 1 || self.spec.alpha != 1 {
            return Err(Error::Unsupported(
                "the point-mass weight is only known for alpha = k = 1".into(),
            ));
        }
        let beta = &self.spec.beta;
        let a0 = &self.spec.a[0];
        let one = rat::one();
        let u0 = &one / (a0 * (beta + &one));
        let sr = rat::int(s as i64);
        let factor = &one + (&sr * &sr + rat::int(2) * beta * &sr) * &u0 / rat::int(4);
        let (qn, qm) = (self.hat_q(n, s)?, self.hat_q(m, s)?);
        let integral = jacobi::weighted_integral(&(&qn * &qm), 0, &(beta + &sr))?;
        Ok(factor * integral + u0 * qn.eval(&one) * qm.eval(&one))
    }
}

/// Tridiagonal recurrence coefficients `(a_n, b_n, c_n)` for `n = 0..=N`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TridiagOp {
    #[serde(with = "rat::serde_vec")]
    pub a: Vec<Rat>,
    #[serde(with = "rat::serde_vec")]
    pub b: Vec<Rat>,
    #[serde(with = "rat::serde_vec")]
    pub c: Vec<Rat>,
}

impl TridiagOp {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// The classical Jacobi recurrence.
    pub fn classical(prm: &JacobiParams, n_max: usize) -> Result<Self> {
        let mut op = TridiagOp::default();
        for n in 0..=n_max {
            let (a, b, c) = recurrence_coeffs(n, prm)?;
            op.a.push(a);
            op.b.push(b);
            op.c.push(if n == 0 { rat::zero() } else { c });
        }
        Ok(op)
    }

    /// `(N+1) x (N+1)` truncation of the semi-infinite Jacobi matrix.
    pub fn to_matrix(&self) -> Matrix {
        let n = self.len();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.b[i].clone();
            if i + 1 < n {
                m[(i, i + 1)] = self.a[i].clone();
            }
            if i > 0 {
                m[(i, i - 1)] = self.c[i].clone();
            }
        }
        m
    }

    /// `z q_n - (a_n q_{n+1} + b_n q_n + c_n q_{n-1})`.
    pub fn residual(&self, n: usize, q: &dyn Fn(usize) -> Result<UniPoly>) -> Result<UniPoly> {
        let mut rhs = q(n + 1)?.scale(&self.a[n]) + q(n)?.scale(&self.b[n]);
        if n > 0 {
            rhs += &q(n - 1)?.scale(&self.c[n]);
        }
        Ok(q(n)?.shift_up(1) - rhs)
    }
}

/// Truncated matrices of `L_hat Q = Q L`.
#[derive(Debug, Clone)]
pub struct Intertwining {
    pub q: Matrix,
    pub l: Matrix,
    pub l_hat: Matrix,
    pub k: usize,
}

impl Intertwining {
    pub fn build(family: &QFamily, n_max: usize) -> Result<Self> {
        let k = family.spec().k();
        let mut q = Matrix::zeros(n_max + 1, n_max + 1);
        for n in 0..=n_max {
            for (c, v) in family.q_matrix_row(n)? {
                q[(n, c)] = v;
            }
        }
        let l = TridiagOp::classical(&family.spec().jacobi(), n_max)?.to_matrix();
        let l_hat = family.fit_recurrence(n_max)?.to_matrix();
        Ok(Intertwining { q, l, l_hat, k })
    }

    /// Compares rows `0..=N-k-1` of `L_hat Q` and `Q L`.
    pub fn holds(&self) -> Result<bool> {
        let lhs = self.l_hat.mul(&self.q)?;
        let rhs = self.q.mul(&self.l)?;
        let n = self.q.rows();
        let last = n.saturating_sub(self.k + 1);
        Ok((0..last).all(|r| lhs.row(r) == rhs.row(r)))
    }
}

/// `L_hat Q = Q L` on the `(N+1) x (N+1)` truncation, for `N >= k + 2`.
pub fn intertwine_check(family: &QFamily, n_max: usize) -> Result<bool> {
    if n_max < family.spec().k() + 2 {
        return Err(Error::InvalidParameters(format!("truncation N = {n_max} must be at least k + 2")));
    }
    Intertwining::build(family, n_max)?.holds()
}
