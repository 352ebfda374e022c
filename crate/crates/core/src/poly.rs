//! Dense univariate polynomials over `Rat`.
//!
//! Every polynomial carries a variable tag. Arithmetic between different tags
//! is a programming error and panics; the fallible entry points
//! ([`UniPoly::divrem`], [`UniPoly::substitute_affine`]) report it as an
//! [`Error`] instead.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    /// The continuous variable of the differential operators.
    Z,
    /// The discrete index.
    N,
    /// The spectral variable of the algebra.
    T,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::Z => "z",
            Var::N => "n",
            Var::T => "t",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    var: Var,
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero(var: Var) -> Self {
        UniPoly { var, coeffs: Vec::new() }
    }

    pub fn one(var: Var) -> Self {
        Self::constant(var, rat::one())
    }

    pub fn constant(var: Var, c: Rat) -> Self {
        Self::from_coeffs(var, vec![c])
    }

    /// The polynomial `x` in the given variable.
    pub fn var(var: Var) -> Self {
        Self::from_coeffs(var, vec![rat::zero(), rat::one()])
    }

    pub fn monomial(var: Var, c: Rat, e: usize) -> Self {
        let mut coeffs = vec![rat::zero(); e + 1];
        coeffs[e] = c;
        Self::from_coeffs(var, coeffs)
    }

    /// `a x + b`.
    pub fn linear(var: Var, a: Rat, b: Rat) -> Self {
        Self::from_coeffs(var, vec![b, a])
    }

    /// Coefficients in ascending degree; trailing zeros are dropped.
    pub fn from_coeffs(var: Var, mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { var, coeffs }
    }

    pub fn variable(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> Rat {
        self.eval(&rat::int(x))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat::int(i as i64))
            .collect();
        Self::from_coeffs(self.var, coeffs)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.var);
        }
        UniPoly { var: self.var, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplies by `x^e`.
    pub fn shift_up(&self, e: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![rat::zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { var: self.var, coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.var);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(rat::one() / self.lead()))
    }

    fn check_var(&self, other: &UniPoly) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch { expected: self.var, found: other.var });
        }
        Ok(())
    }

    /// Euclidean division: `self = q * g + r` with `deg r < deg g`.
    pub fn divrem(&self, g: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        self.check_var(g)?;
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dg = g.coeffs.len() - 1;
        let inv_lead = rat::one() / g.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dg {
            return Ok((Self::zero(self.var), self.clone()));
        }
        let mut q = vec![rat::zero(); r.len() - dg];
        for i in (0..q.len()).rev() {
            let c = &r[i + dg] * &inv_lead;
            if !c.is_zero() {
                for (j, gc) in g.coeffs.iter().enumerate() {
                    r[i + j] -= &c * gc;
                }
            }
            q[i] = c;
        }
        r.truncate(dg);
        Ok((Self::from_coeffs(self.var, q), Self::from_coeffs(self.var, r)))
    }

    /// `p(u n + v)` for a polynomial in `n`.
    ///
    /// Covers shifts (`u = 1`) and the involutions `n -> -(n + s + 1)`.
    pub fn substitute_affine(&self, u: &Rat, v: &Rat) -> Result<UniPoly> {
        if self.var != Var::N {
            return Err(Error::VariableMismatch { expected: Var::N, found: self.var });
        }
        Ok(self.affine(u, v))
    }

    /// `p(u x + v)` in the same variable, without a tag check.
    pub fn affine(&self, u: &Rat, v: &Rat) -> UniPoly {
        self.compose(&UniPoly::linear(self.var, u.clone(), v.clone()))
    }

    /// `self(x + v)`, the shift in the polynomial's own variable.
    pub fn shifted(&self, v: &Rat) -> UniPoly {
        self.affine(&rat::one(), v)
    }

    /// `self(inner)`; the result lives in `inner`'s variable.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(inner.var);
        for c in self.coeffs.iter().rev() {
            acc = &acc * inner;
            acc = acc + UniPoly::constant(inner.var, c.clone());
        }
        acc
    }

    /// Expands `self` in powers of `t`: returns `g` with `g(t(x)) = self(x)`.
    ///
    /// Fails unless each step of the `t`-adic division leaves a constant
    /// remainder, i.e. unless `self` lies in `Q[t]`.
    pub fn express_in(&self, t: &UniPoly, out: Var) -> Result<UniPoly> {
        self.check_var(t)?;
        match t.degree() {
            None | Some(0) => return Err(Error::Malformed("expansion base must be nonconstant".into())),
            _ => {}
        }
        let mut digits = Vec::new();
        let mut cur = self.clone();
        let mut guard = 0usize;
        while !cur.is_zero() {
            let (q, r) = cur.divrem(t)?;
            if r.degree().unwrap_or(0) > 0 {
                return Err(Error::NotInvariant(format!("{self} is not a polynomial in {t}")));
            }
            digits.push(r.coeff(0));
            cur = q;
            guard += 1;
            debug_assert!(guard <= self.coeffs.len() + 1);
        }
        Ok(UniPoly::from_coeffs(out, digits))
    }

    /// The unique polynomial of degree `< points.len()` through the points.
    pub fn interpolate(var: Var, points: &[(Rat, Rat)]) -> UniPoly {
        // Newton divided differences.
        let m = points.len();
        let xs: Vec<&Rat> = points.iter().map(|p| &p.0).collect();
        let mut dd: Vec<Rat> = points.iter().map(|p| p.1.clone()).collect();
        for level in 1..m {
            for i in (level..m).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
            }
        }
        let mut acc = UniPoly::zero(var);
        for i in (0..m).rev() {
            acc = &acc * &UniPoly::linear(var, rat::one(), -xs[i].clone());
            acc = acc + UniPoly::constant(var, dd[i].clone());
        }
        acc
    }

    /// The polynomial `S` with `S(n) - S(n-1) = self(n)` and `S(0) = 0`.
    pub fn indefinite_sum(&self) -> UniPoly {
        let deg = self.degree().map_or(0, |d| d + 1);
        let mut points = Vec::with_capacity(deg + 1);
        let mut acc = rat::zero();
        points.push((rat::zero(), rat::zero()));
        for n in 1..=deg as i64 {
            acc += self.eval_i64(n);
            points.push((rat::int(n), acc.clone()));
        }
        UniPoly::interpolate(self.var, &points)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "{}", self.var)?,
                1 => write!(f, "({c}){}", self.var)?,
                _ if c.is_one() => write!(f, "{}^{i}", self.var)?,
                _ => write!(f, "({c}){}^{i}", self.var)?,
            }
        }
        Ok(())
    }
}

fn assert_same(a: &UniPoly, b: &UniPoly) {
    assert_eq!(a.var, b.var, "polynomials in different variables cannot be combined");
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        assert_same(self, rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        UniPoly::from_coeffs(self.var, coeffs)
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        assert_same(self, rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        UniPoly::from_coeffs(self.var, coeffs)
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        assert_same(self, rhs);
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.var);
        }
        let mut coeffs = vec![rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(self.var, coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { var: self.var, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<UniPoly> for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&UniPoly> for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: &UniPoly) -> UniPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<UniPoly> for &UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl AddAssign<&UniPoly> for UniPoly {
    fn add_assign(&mut self, rhs: &UniPoly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&UniPoly> for UniPoly {
    fn sub_assign(&mut self, rhs: &UniPoly) {
        *self = &*self - rhs;
    }
}

/// `(p)_m = p (p+1) ... (p+m-1)` for a polynomial argument.
pub fn poly_pochhammer(p: &UniPoly, m: u32) -> UniPoly {
    let mut acc = UniPoly::one(p.var);
    for i in 0..m {
        acc = &acc * &(p + &UniPoly::constant(p.var, rat::int(i as i64)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use proptest::prelude::*;

    fn n_poly(c: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(Var::N, c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn divrem_small() {
        let f = n_poly(&[1, 0, 1]);
        let g = n_poly(&[0, 1]);
        let (q, r) = f.divrem(&g).unwrap();
        assert_eq!(q, n_poly(&[0, 1]));
        assert_eq!(r, n_poly(&[1]));
    }

    #[test]
    fn divrem_errors() {
        let f = n_poly(&[1, 2]);
        assert_eq!(f.divrem(&UniPoly::zero(Var::N)), Err(Error::DivisionByZero));
        let zf = UniPoly::var(Var::Z);
        assert!(matches!(f.divrem(&zf), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn affine_shift() {
        let p = n_poly(&[0, 0, 1]);
        let s = p.substitute_affine(&int(1), &frac(1, 2)).unwrap();
        assert_eq!(s, UniPoly::from_coeffs(Var::N, vec![frac(1, 4), int(1), int(1)]));
        assert!(UniPoly::var(Var::Z).substitute_affine(&int(1), &int(0)).is_err());
    }

    #[test]
    fn involution_fixes_lambda_and_negates_n() {
        // lambda_n^s = n (n + s + 1) with s = 5/2
        let s = frac(5, 2);
        let lam = &UniPoly::var(Var::N) * &UniPoly::linear(Var::N, int(1), &s + int(1));
        let inv = lam.substitute_affine(&int(-1), &-(&s + int(1))).unwrap();
        assert_eq!(inv, lam);

        let (a, b) = (int(2), frac(1, 3));
        let n = UniPoly::var(Var::N);
        let img = n.substitute_affine(&int(-1), &-(&a + &b)).unwrap();
        assert_eq!(img, UniPoly::linear(Var::N, int(-1), -(&a + &b)));
    }

    #[test]
    fn express_in_quadratic() {
        let t = &UniPoly::var(Var::N) * &UniPoly::linear(Var::N, int(1), int(3));
        let g = UniPoly::from_coeffs(Var::T, vec![int(2), frac(-1, 2), int(4)]);
        let f = g.compose(&t);
        assert_eq!(f.express_in(&t, Var::T).unwrap(), g);
        assert!(UniPoly::var(Var::N).express_in(&t, Var::T).is_err());
    }

    #[test]
    fn indefinite_sum_of_linear() {
        let s = UniPoly::var(Var::N).indefinite_sum();
        // n (n + 1) / 2
        assert_eq!(s, UniPoly::from_coeffs(Var::N, vec![int(0), frac(1, 2), frac(1, 2)]));
    }

    fn arb_poly(var: Var) -> impl Strategy<Value = UniPoly> {
        prop::collection::vec((-20i64..20, 1i64..6), 0..7).prop_map(move |v| {
            UniPoly::from_coeffs(var, v.into_iter().map(|(p, q)| frac(p, q)).collect())
        })
    }

    proptest! {
        #[test]
        fn divrem_reconstructs(f in arb_poly(Var::N), g in arb_poly(Var::N)) {
            prop_assume!(!g.is_zero());
            let (q, r) = f.divrem(&g).unwrap();
            prop_assert_eq!(&(&q * &g) + &r, f);
            prop_assert!(r.is_zero() || r.degree() < g.degree());
        }

        #[test]
        fn multiple_divides_exactly(h in arb_poly(Var::N), g in arb_poly(Var::N)) {
            prop_assume!(!g.is_zero());
            let (_, r) = (&h * &g).divrem(&g).unwrap();
            prop_assert!(r.is_zero());
        }

        #[test]
        fn involution_is_involutive(p in arb_poly(Var::N), sn in -6i64..6, sd in 1i64..4) {
            let s = frac(sn, sd);
            let v = -(&s + int(1));
            let twice = p.substitute_affine(&int(-1), &v).unwrap()
                .substitute_affine(&int(-1), &v).unwrap();
            prop_assert_eq!(twice, p);
        }

        #[test]
        fn interpolation_recovers(p in arb_poly(Var::Z)) {
            let m = p.degree().map_or(1, |d| d + 1);
            let pts: Vec<_> = (0..m as i64).map(|x| (int(x), p.eval_i64(x))).collect();
            prop_assert_eq!(UniPoly::interpolate(Var::Z, &pts), p);
        }
    }
}
