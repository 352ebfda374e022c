//! Classical Jacobi polynomials on `[0, 1]` in the normalization
//! `p_n = (-1)^n (a+b+1)_n / n! * 2F1(-n, n+a+b+1; b+1; z)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{UniPoly, Var};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiParams {
    #[serde(with = "rat::serde_str")]
    pub alpha: Rat,
    #[serde(with = "rat::serde_str")]
    pub beta: Rat,
}

impl JacobiParams {
    pub fn new(alpha: Rat, beta: Rat) -> Result<Self> {
        let minus_one = -rat::one();
        if alpha <= minus_one || beta <= minus_one {
            return Err(Error::InvalidParameters(format!(
                "Jacobi parameters need alpha, beta > -1 (got {alpha}, {beta})"
            )));
        }
        Ok(JacobiParams { alpha, beta })
    }

    pub fn ints(alpha: i64, beta: i64) -> Self {
        JacobiParams { alpha: rat::int(alpha), beta: rat::int(beta) }
    }

    pub fn with_beta(&self, beta: Rat) -> Self {
        JacobiParams { alpha: self.alpha.clone(), beta }
    }

    pub fn ab(&self) -> Rat {
        &self.alpha + &self.beta
    }
}

/// `p_n^{alpha,beta}(z)` from the terminating hypergeometric sum.
pub fn jacobi_poly(n: usize, prm: &JacobiParams) -> UniPoly {
    let ab1 = prm.ab() + rat::one();
    let b1 = &prm.beta + rat::one();
    let mut scale = rat::pochhammer(&ab1, n as u32) / rat::factorial(n as u32);
    if n % 2 == 1 {
        scale = -scale;
    }
    // term_i = (-n)_i (n+a+b+1)_i / ((b+1)_i i!), built incrementally
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut term = rat::one();
    let minus_n = rat::int(-(n as i64));
    let top = rat::int(n as i64) + &ab1;
    for i in 0..=n {
        coeffs.push(&term * &scale);
        if i < n {
            let ii = rat::int(i as i64);
            term = term * (&minus_n + &ii) * (&top + &ii) / ((&b1 + &ii) * (&ii + rat::one()));
        }
    }
    UniPoly::from_coeffs(Var::Z, coeffs)
}

/// `p_n` with the convention `p_n = 0` for `n < 0`.
pub fn jacobi_poly_signed(n: i64, prm: &JacobiParams) -> UniPoly {
    if n < 0 {
        UniPoly::zero(Var::Z)
    } else {
        jacobi_poly(n as usize, prm)
    }
}

/// Three-term recurrence data `(A_n, B_n, C_n)` with
/// `z p_n = A_n p_{n+1} + B_n p_n + C_n p_{n-1}`.
///
/// At `n = 0` the `C_0` factor is taken in its cancelled form
/// `alpha / (alpha+beta+1)`, which keeps `B_0` finite when `alpha+beta = 0`.
pub fn recurrence_coeffs(n: usize, prm: &JacobiParams) -> Result<(Rat, Rat, Rat)> {
    let nn = rat::int(n as i64);
    let ab = prm.ab();
    let two_n_ab = rat::int(2) * &nn + &ab;
    let one = rat::one();
    let dena = (&two_n_ab + &one) * (&two_n_ab + rat::int(2));
    if dena.is_zero() {
        return Err(Error::SingularRecurrence(n as i64));
    }
    let a = (&nn + &one) * (&nn + &prm.beta + &one) / dena;
    let c = if n == 0 {
        let d = &ab + &one;
        if d.is_zero() {
            return Err(Error::SingularRecurrence(0));
        }
        &prm.alpha / d
    } else {
        let denc = &two_n_ab * (&two_n_ab + &one);
        if denc.is_zero() {
            return Err(Error::SingularRecurrence(n as i64));
        }
        (&nn + &prm.alpha) * (&nn + &ab) / denc
    };
    let b = one - &a - &c;
    Ok((a, b, c))
}

/// `int_0^1 z^c (1-z)^e dz = e! / ((c+1)(c+2)...(c+e+1))`.
pub fn beta_moment(c: &Rat, e: u32) -> Result<Rat> {
    let minus_one = -rat::one();
    if *c <= minus_one {
        return Err(Error::InvalidParameters(format!("moment exponent {c} must exceed -1")));
    }
    Ok(rat::factorial(e) / rat::pochhammer(&(c + rat::one()), e + 1))
}

/// `int_0^1 p(z) (1-z)^e z^c dz` for a polynomial `p` in `z`.
pub fn weighted_integral(p: &UniPoly, e: u32, c: &Rat) -> Result<Rat> {
    let mut acc = rat::zero();
    for (i, coef) in p.coeffs().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        acc += coef * beta_moment(&(c + rat::int(i as i64)), e)?;
    }
    Ok(acc)
}

/// `lambda^{ab}_m = m (m + ab + 1)` at a rational point.
pub fn lambda(m: &Rat, ab: &Rat) -> Rat {
    m * (m + ab + rat::one())
}

/// `lambda^{ab}_{n + shift}` as a polynomial in `n`.
pub fn lambda_poly(shift: &Rat, ab: &Rat) -> UniPoly {
    let m = UniPoly::linear(Var::N, rat::one(), shift.clone());
    let m1 = UniPoly::linear(Var::N, rat::one(), shift + ab + rat::one());
    &m * &m1
}

/// `(2 z d/dz + c) p`.
pub fn euler_shift(p: &UniPoly, c: &Rat) -> UniPoly {
    let zdp = p.derivative().shift_up(1);
    zdp.scale(&rat::int(2)) + p.scale(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    fn z(c: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(Var::Z, c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn low_degree_values() {
        let prm = JacobiParams::ints(1, 0);
        assert_eq!(jacobi_poly(0, &prm), z(&[1]));
        assert_eq!(jacobi_poly(1, &prm), z(&[-2, 6]));
        assert_eq!(jacobi_poly(2, &prm), z(&[3, -24, 30]));
        assert!(jacobi_poly_signed(-1, &prm).is_zero());
    }

    #[test]
    fn degree_is_exact() {
        let prm = JacobiParams::new(frac(1, 2), frac(-1, 3)).unwrap();
        for n in 0..10 {
            assert_eq!(jacobi_poly(n, &prm).degree(), Some(n));
        }
    }

    #[test]
    fn first_recurrence_coefficient() {
        let (a, _, _) = recurrence_coeffs(0, &JacobiParams::ints(1, 0)).unwrap();
        assert_eq!(a, frac(1, 6));
    }

    #[test]
    fn recurrence_at_n1() {
        let prm = JacobiParams::ints(1, 0);
        let (a, b, c) = recurrence_coeffs(1, &prm).unwrap();
        let lhs = jacobi_poly(1, &prm).shift_up(1);
        let rhs = jacobi_poly(2, &prm).scale(&a) + jacobi_poly(1, &prm).scale(&b) + jacobi_poly(0, &prm).scale(&c);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn recurrence_zero_sum_parameters() {
        // alpha + beta = 0 makes the raw C_0 formula 0/0
        let prm = JacobiParams::new(frac(1, 2), frac(-1, 2)).unwrap();
        let (a, b, _) = recurrence_coeffs(0, &prm).unwrap();
        let lhs = jacobi_poly(0, &prm).shift_up(1);
        assert_eq!(lhs, jacobi_poly(1, &prm).scale(&a) + jacobi_poly(0, &prm).scale(&b));
    }

    #[test]
    fn moments() {
        assert_eq!(beta_moment(&int(0), 0).unwrap(), int(1));
        assert_eq!(beta_moment(&frac(2, 3), 0).unwrap(), frac(3, 5));
        assert_eq!(beta_moment(&frac(1, 2), 2).unwrap(), frac(16, 105));
        assert!(beta_moment(&int(-1), 1).is_err());
    }

    #[test]
    fn moments_match_beta_recursion() {
        // B(x, y+1) = B(x, y) * y / (x + y), starting from B(x, 1) = 1/x
        for c in [int(0), frac(1, 2), frac(7, 3), int(4)] {
            let x = &c + int(1);
            let mut b = int(1) / &x;
            for e in 0..6u32 {
                assert_eq!(beta_moment(&c, e).unwrap(), b);
                let y = int(e as i64 + 1);
                b = b * &y / (&x + &y);
            }
        }
    }

    #[test]
    fn rejects_invalid_weight() {
        assert!(JacobiParams::new(int(-1), int(0)).is_err());
        assert!(JacobiParams::new(int(0), frac(-3, 2)).is_err());
    }
}
