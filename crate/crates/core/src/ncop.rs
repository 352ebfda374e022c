//! The algebra generated by `D1 = z d/dz` and `D2 = z d^2/dz^2 + (beta+1) d/dz`.
//!
//! Elements are stored in normal form: a table of coefficients over the
//! ordered monomials `D1^i D2^j`. The only relation is `D2 D1 = D1 D2 + D2`,
//! equivalently `D2 g(D1) = g(D1 + 1) D2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{UniPoly, Var};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcOp {
    beta: Rat,
    terms: BTreeMap<(u32, u32), Rat>,
}

impl NcOp {
    pub fn zero(beta: Rat) -> Self {
        NcOp { beta, terms: BTreeMap::new() }
    }

    pub fn identity(beta: Rat) -> Self {
        Self::scalar(beta, rat::one())
    }

    pub fn scalar(beta: Rat, c: Rat) -> Self {
        Self::monomial(beta, 0, 0, c)
    }

    /// `c D1^i D2^j`.
    pub fn monomial(beta: Rat, i: u32, j: u32, c: Rat) -> Self {
        let mut op = Self::zero(beta);
        op.add_term(i, j, c);
        op
    }

    pub fn d1(beta: Rat) -> Self {
        Self::monomial(beta, 1, 0, rat::one())
    }

    pub fn d2(beta: Rat) -> Self {
        Self::monomial(beta, 0, 1, rat::one())
    }

    pub fn from_terms<I>(beta: Rat, terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Rat)>,
    {
        let mut op = Self::zero(beta);
        for ((i, j), c) in terms {
            op.add_term(i, j, c);
        }
        op
    }

    pub fn beta(&self) -> &Rat {
        &self.beta
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Rat> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max(i + 2j)` over stored terms; the order as a differential operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + 2 * j).max().unwrap_or(0)
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    fn check_beta(&self, other: &NcOp) -> Result<()> {
        if self.beta != other.beta {
            return Err(Error::BetaMismatch(self.beta.to_string(), other.beta.to_string()));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rat) -> NcOp {
        if c.is_zero() {
            return NcOp::zero(self.beta.clone());
        }
        NcOp { beta: self.beta.clone(), terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn try_add(&self, other: &NcOp) -> Result<NcOp> {
        self.check_beta(other)?;
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &NcOp) -> Result<NcOp> {
        self.try_add(&other.scale(&-rat::one()))
    }

    /// Normal-form product.
    pub fn nc_mul(&self, other: &NcOp) -> Result<NcOp> {
        self.check_beta(other)?;
        let mut out = NcOp::zero(self.beta.clone());
        for (&(a, b), x) in &self.terms {
            for (&(c, d), y) in &other.terms {
                // D1^a (D2^b D1^c) D2^d = D1^a (D1 + b)^c D2^{b+d}
                let xy = x * y;
                let bb = rat::int(b as i64);
                for r in 0..=c {
                    let coef = &xy * rat::binomial(c, r) * rat::pow(&bb, c - r);
                    out.add_term(a + r, b + d, coef);
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &NcOp) -> Result<NcOp> {
        self.nc_mul(other)?.try_sub(&other.nc_mul(self)?)
    }

    pub fn pow(&self, e: u32) -> NcOp {
        let mut acc = NcOp::identity(self.beta.clone());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Applies the operator to a polynomial in `z`.
    ///
    /// For `s > 0` this returns `h` with `A(D1, D_{2,s}) [z^{s/2} p] = z^{s/2} h`,
    /// via `D1 -> D1 + s/2` and `D_{2,s} -> D2` with `beta -> beta + s`.
    pub fn realize(&self, p: &UniPoly, s: u32) -> UniPoly {
        assert_eq!(p.variable(), Var::Z, "operators act on polynomials in z");
        let Some(deg) = p.degree() else {
            return UniPoly::zero(Var::Z);
        };
        let beta_s = &self.beta + rat::int(s as i64);
        let half_s = rat::frac(s as i64, 2);
        let mut out = vec![rat::zero(); deg + 1];
        for (m, pm) in p.coeffs().iter().enumerate() {
            if pm.is_zero() {
                continue;
            }
            for (&(i, j), c) in &self.terms {
                let Some(target) = m.checked_sub(j as usize) else {
                    continue;
                };
                // D2^j z^m = prod_{r<j} (m-r)(m-r+beta_s) z^{m-j}
                let mut factor = c * pm;
                for r in 0..j as usize {
                    let mr = rat::int((m - r) as i64);
                    factor *= &mr * (&mr + &beta_s);
                }
                if factor.is_zero() {
                    continue;
                }
                let e1 = rat::int(target as i64) + &half_s;
                factor *= rat::pow(&e1, i);
                out[target] += factor;
            }
        }
        UniPoly::from_coeffs(Var::Z, out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(NcOpFile::from(self)).expect("operator serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<NcOp> {
        let file: NcOpFile = serde_json::from_value(v.clone()).map_err(|e| Error::Cache(e.to_string()))?;
        file.try_into()
    }
}

/// On-disk form: `{ "beta": "p/q", "terms": [[i, j, "p/q"], ...] }`, sorted by `(i, j)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NcOpFile {
    pub beta: String,
    pub terms: Vec<(u32, u32, String)>,
}

impl From<&NcOp> for NcOpFile {
    fn from(op: &NcOp) -> Self {
        NcOpFile {
            beta: op.beta.to_string(),
            terms: op.terms.iter().map(|(&(i, j), c)| (i, j, c.to_string())).collect(),
        }
    }
}

impl TryFrom<NcOpFile> for NcOp {
    type Error = Error;
    fn try_from(f: NcOpFile) -> Result<NcOp> {
        let beta = rat::parse(&f.beta).map_err(|_| Error::Cache(format!("bad beta {:?}", f.beta)))?;
        let mut op = NcOp::zero(beta);
        for (idx, (i, j, c)) in f.terms.into_iter().enumerate() {
            let c = rat::parse(&c)
                .map_err(|_| Error::Cache(format!("term {idx} ({i}, {j}): bad coefficient {c:?}")))?;
            if c.is_zero() {
                return Err(Error::Cache(format!("term {idx} ({i}, {j}): zero coefficient stored")));
            }
            if op.terms.insert((i, j), c).is_some() {
                return Err(Error::Cache(format!("term {idx}: duplicate monomial ({i}, {j})")));
            }
        }
        Ok(op)
    }
}

impl fmt::Display for NcOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, " D1^{i}")?;
            }
            if j > 0 {
                write!(f, " D2^{j}")?;
            }
        }
        Ok(())
    }
}

// Operator-syntax arithmetic panics on a beta mismatch; use the `try_` forms
// when operands come from different sources.
impl Add<&NcOp> for &NcOp {
    type Output = NcOp;
    fn add(self, rhs: &NcOp) -> NcOp {
        self.try_add(rhs).expect("operators over the same beta")
    }
}

impl Sub<&NcOp> for &NcOp {
    type Output = NcOp;
    fn sub(self, rhs: &NcOp) -> NcOp {
        self.try_sub(rhs).expect("operators over the same beta")
    }
}

impl Mul<&NcOp> for &NcOp {
    type Output = NcOp;
    fn mul(self, rhs: &NcOp) -> NcOp {
        self.nc_mul(rhs).expect("operators over the same beta")
    }
}

impl Neg for &NcOp {
    type Output = NcOp;
    fn neg(self) -> NcOp {
        self.scale(&-rat::one())
    }
}

/// `D1^2 + (alpha+beta+1) D1 - D2`, the Jacobi operator.
pub fn b_ab_operator(alpha: &Rat, beta: &Rat) -> NcOp {
    NcOp::from_terms(
        beta.clone(),
        [((2, 0), rat::one()), ((1, 0), alpha + beta + rat::one()), ((0, 1), -rat::one())],
    )
}

/// The operator `B` with
/// `int_{-1}^{n} [r(s) p_s - r(-s-alpha-beta) p_{s-1}] dmu(s) = B p_n`.
///
/// `r` is rewritten in the variable `u = 2n + alpha + beta` and assembled
/// from the building blocks `B_0 = Id`, `B_{odd j} = (2 D1 + alpha + beta) B_{j-1}`
/// and `B_{even j} = (B'^2 - 4 B'')^{j/2}`.
pub fn lemma45_operator(r: &UniPoly, alpha: &Rat, beta: &Rat) -> Result<NcOp> {
    if r.variable() != Var::N {
        return Err(Error::VariableMismatch { expected: Var::N, found: r.variable() });
    }
    let ab = alpha + beta;
    let rbar = r.affine(&rat::frac(1, 2), &(-&ab / rat::int(2)));
    let id = NcOp::identity(beta.clone());
    let jac = b_ab_operator(alpha, beta);
    let odd_step = &NcOp::d1(beta.clone()).scale(&rat::int(2)) + &id.scale(&ab);
    let b3 = &jac - &odd_step;
    let b1 = &jac + &b3;
    let b2 = &jac * &b3;
    let even_step = &(&b1 * &b1) - &b2.scale(&rat::int(4));

    let mut out = NcOp::zero(beta.clone());
    let mut even_power = id;
    for (j, c) in rbar.coeffs().iter().enumerate() {
        if j > 0 && j % 2 == 0 {
            even_power = &even_step * &even_power;
        }
        if c.is_zero() {
            continue;
        }
        let block = if j % 2 == 1 { &odd_step * &even_power } else { even_power.clone() };
        out = &out + &block.scale(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{jacobi_poly, JacobiParams};
    use crate::rat::{frac, int};
    use proptest::prelude::*;

    fn b0() -> Rat {
        frac(1, 3)
    }

    #[test]
    fn rewrite_rule() {
        let d1 = NcOp::d1(b0());
        let d2 = NcOp::d2(b0());
        let expected = NcOp::from_terms(b0(), [((1, 1), int(1)), ((0, 1), int(1))]);
        assert_eq!(&d2 * &d1, expected);

        let expected2 = NcOp::from_terms(b0(), [((2, 1), int(1)), ((1, 1), int(2)), ((0, 1), int(1))]);
        assert_eq!(&d2 * &d1.pow(2), expected2);

        let a = &d1.pow(3) + &d2.scale(&frac(-2, 7));
        assert_eq!(&NcOp::identity(b0()) * &a, a);
    }

    #[test]
    fn commutators() {
        let d1 = NcOp::d1(b0());
        let d2 = NcOp::d2(b0());
        assert_eq!(d2.commutator(&d1).unwrap(), d2);
        let a = &(&d1 * &d2) + &d2.pow(2);
        assert!(a.commutator(&a).unwrap().is_zero());
        assert!(matches!(d1.nc_mul(&NcOp::d2(int(0))), Err(Error::BetaMismatch(..))));
    }

    #[test]
    fn realize_generators() {
        let beta = frac(3, 2);
        let z3 = UniPoly::monomial(Var::Z, int(1), 3);
        assert_eq!(NcOp::d1(beta.clone()).realize(&z3, 0), z3.scale(&int(3)));
        let z1 = UniPoly::var(Var::Z);
        assert_eq!(NcOp::d2(beta.clone()).realize(&z1, 0), UniPoly::constant(Var::Z, &beta + int(1)));
        // weight z^{s/2} with s = 2: D1 (z * 1) = z
        assert_eq!(NcOp::d1(beta).realize(&UniPoly::one(Var::Z), 2), UniPoly::one(Var::Z));
    }

    #[test]
    fn jacobi_operator_eigenvalues() {
        let prm = JacobiParams::ints(1, 0);
        let b = b_ab_operator(&prm.alpha, &prm.beta);
        assert_eq!(b.realize(&jacobi_poly(1, &prm), 0), jacobi_poly(1, &prm).scale(&int(3)));
        assert!(b.realize(&UniPoly::constant(Var::Z, int(4)), 0).is_zero());
        // weighted: B_{a,b,2} [p^{a,b+2}_1 z] = lambda^{a+b}_{2} p^{a,b+2}_1 z
        let shifted = prm.with_beta(&prm.beta + int(2));
        let p1 = jacobi_poly(1, &shifted);
        assert_eq!(b.realize(&p1, 2), p1.scale(&int(2 * 4)));
    }

    // Unconjugated action on z^e with rational exponents e, so that the 1/z
    // term of D_{2,s} is applied literally.
    fn apply_raw(op: &NcOp, terms: &BTreeMap<Rat, Rat>, s: u32) -> BTreeMap<Rat, Rat> {
        let sing = int(s as i64) * (int(s as i64) + op.beta() * int(2)) / int(4);
        let mut out: BTreeMap<Rat, Rat> = BTreeMap::new();
        for (&(i, j), c) in op.terms() {
            let mut cur = terms.clone();
            for _ in 0..j {
                let mut next = BTreeMap::new();
                for (e, v) in &cur {
                    let coef = v * (e * (e + op.beta()) - &sing);
                    *next.entry(e - int(1)).or_insert_with(rat::zero) += coef;
                }
                cur = next;
            }
            for _ in 0..i {
                cur = cur.into_iter().map(|(e, v)| (e.clone(), v * e)).collect();
            }
            for (e, v) in cur {
                *out.entry(e).or_insert_with(rat::zero) += v * c;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    #[test]
    fn weighted_realization_matches_unconjugated_action() {
        let beta = frac(1, 2);
        let op = NcOp::from_terms(
            beta.clone(),
            [((2, 0), int(1)), ((0, 2), frac(3, 2)), ((1, 1), int(-2)), ((0, 1), int(5)), ((0, 0), int(7))],
        );
        let p = UniPoly::from_coeffs(Var::Z, vec![int(3), int(-1), frac(2, 3), int(4)]);
        for s in 0..5u32 {
            let half = frac(s as i64, 2);
            let input: BTreeMap<Rat, Rat> =
                p.coeffs().iter().enumerate().map(|(m, c)| (int(m as i64) + &half, c.clone())).collect();
            let raw = apply_raw(&op, &input, s);
            let h = op.realize(&p, s);
            let expect: BTreeMap<Rat, Rat> = h
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (int(m as i64) + &half, c.clone()))
                .collect();
            assert_eq!(raw, expect, "s = {s}");
            assert!(raw.keys().all(|e| *e >= half), "a 1/z term survived at s = {s}");
        }
    }

    #[test]
    fn lemma45_simple_cases() {
        let (a, b) = (int(1), int(0));
        let one = UniPoly::one(Var::N);
        assert_eq!(lemma45_operator(&one, &a, &b).unwrap(), NcOp::identity(b.clone()));
        let r = UniPoly::linear(Var::N, int(2), &a + &b);
        let expected = &NcOp::d1(b.clone()).scale(&int(2)) + &NcOp::scalar(b.clone(), &a + &b);
        assert_eq!(lemma45_operator(&r, &a, &b).unwrap(), expected);
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let op = NcOp::from_terms(frac(1, 2), [((0, 0), frac(-33, 16)), ((4, 0), int(1))]);
        let back = NcOp::from_json(&op.to_json()).unwrap();
        assert_eq!(back, op);
        let empty = NcOp::zero(int(0)).to_json();
        assert_eq!(empty["terms"], serde_json::json!([]));
        let bad = serde_json::json!({"beta": "0", "terms": [[1, 0, "3/x"]]});
        let err = NcOp::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("3/x"), "{err}");
    }

    fn arb_op() -> impl Strategy<Value = NcOp> {
        prop::collection::vec(((0u32..3, 0u32..3), -4i64..5), 0..5)
            .prop_map(|t| NcOp::from_terms(frac(2, 5), t.into_iter().map(|(k, c)| (k, int(c)))))
    }

    fn arb_zpoly() -> impl Strategy<Value = UniPoly> {
        prop::collection::vec(-5i64..6, 0..7)
            .prop_map(|c| UniPoly::from_coeffs(Var::Z, c.into_iter().map(int).collect()))
    }

    proptest! {
        #[test]
        fn realization_is_a_homomorphism(a in arb_op(), b in arb_op(), p in arb_zpoly(), s in 0u32..4) {
            let ab = &a * &b;
            prop_assert_eq!(ab.realize(&p, s), a.realize(&b.realize(&p, s), s));
        }

        #[test]
        fn product_is_associative(a in arb_op(), b in arb_op(), c in arb_op()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn faithful_on_low_monomials(a in arb_op()) {
            // an operator killing z^0..z^{order+1} is zero
            let kills_all = (0..=a.order() as usize + 1)
                .all(|m| a.realize(&UniPoly::monomial(Var::Z, int(1), m), 0).is_zero());
            prop_assert_eq!(kills_all, a.is_zero());
        }
    }
}
