//! Invariant suites. A check either passes or reports the first failing
//! instance as a JSON witness with exact values.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{echelonize, krall_generators, AlgebraContext};
use crate::darboux::{intertwine_check, DarbouxSpec, QFamily};
use crate::discrete::{reach_identity_sides, SeqSource};
use crate::error::{Error, Result};
use crate::fit::{eigenvalue, fit_bf};
use crate::jacobi::{self, jacobi_poly, jacobi_poly_signed, recurrence_coeffs, JacobiParams};
use crate::mpoly::MPoly;
use crate::multivariate::{harmonic_dimension, inner_product_kd, realize_pde, sigma, EigenBasis};
use crate::ncop::{lemma45_operator, NcOp};
use crate::poly::{UniPoly, Var};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<Value>,
}

impl Check {
    /// `Ok(None)` passes; `Ok(Some(w))` and `Err(e)` fail with a witness.
    pub fn from_outcome(name: impl Into<String>, outcome: Result<Option<Value>>) -> Check {
        let (status, witness) = match outcome {
            Ok(None) => (Status::Pass, None),
            Ok(Some(w)) => (Status::Fail, Some(w)),
            Err(e) => (Status::Fail, Some(json!({ "error": e.to_string() }))),
        };
        Check { name: name.into(), status, witness }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub type Outcome = Result<Option<Value>>;

fn s(r: &Rat) -> String {
    rat::to_string(r)
}

fn poly_json(p: &UniPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(s(c))).collect())
}

fn first_failure<I, F>(items: I, mut f: F) -> Outcome
where
    I: IntoIterator,
    F: FnMut(I::Item) -> Outcome,
{
    for item in items {
        if let Some(w) = f(item)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------- classical

/// `z(z-1) p'' + (z(alpha+beta+2) - (beta+1)) p' = lambda_n p`.
pub fn check_jacobi_eigen(prm: &JacobiParams, n_max: usize) -> Outcome {
    let ab = prm.ab();
    let z = UniPoly::var(Var::Z);
    let zz1 = &z * &UniPoly::linear(Var::Z, rat::one(), -rat::one());
    let first = UniPoly::linear(Var::Z, &ab + rat::int(2), -(&prm.beta + rat::one()));
    first_failure(0..=n_max, |n| {
        let p = jacobi_poly(n, prm);
        let d1 = p.derivative();
        let lhs = &zz1 * &d1.derivative() + &first * &d1;
        let rhs = p.scale(&jacobi::lambda(&rat::int(n as i64), &ab));
        Ok((lhs != rhs).then(|| json!({ "n": n, "lhs": poly_json(&lhs), "rhs": poly_json(&rhs) })))
    })
}

/// `A_n p_{n+1} + B_n p_n + C_n p_{n-1} = z p_n` with `B_n = 1 - A_n - C_n`.
pub fn check_three_term(prm: &JacobiParams, n_max: usize) -> Outcome {
    first_failure(0..=n_max, |n| {
        let (a, b, c) = recurrence_coeffs(n, prm)?;
        if b != rat::one() - &a - &c {
            return Ok(Some(json!({ "n": n, "reason": "B_n != 1 - A_n - C_n" })));
        }
        let mut rhs = jacobi_poly(n + 1, prm).scale(&a) + jacobi_poly(n, prm).scale(&b);
        if n > 0 {
            rhs += &jacobi_poly(n - 1, prm).scale(&c);
        }
        let lhs = jacobi_poly(n, prm).shift_up(1);
        Ok((lhs != rhs).then(|| json!({ "n": n, "lhs": poly_json(&lhs), "rhs": poly_json(&rhs) })))
    })
}

/// `(2z d/dz + alpha + beta + s)(p_n - p_{n-1}) = (2n + alpha + beta + s)(p_n + p_{n-1})`
/// for `p = p^{alpha, beta+s}`, which is the weighted relation after
/// cancelling `z^{s/2}`; `s = 0` is the unweighted one.
pub fn check_diff_difference(prm: &JacobiParams, n_max: usize, s_max: u32) -> Outcome {
    first_failure(0..=s_max, |sv| {
        let sr = rat::int(sv as i64);
        let shifted = prm.with_beta(&prm.beta + &sr);
        let c = prm.ab() + &sr;
        first_failure(0..=n_max, |n| {
            let p = jacobi_poly(n, &shifted);
            let pm = jacobi_poly_signed(n as i64 - 1, &shifted);
            let lhs = jacobi::euler_shift(&(&p - &pm), &c);
            let rhs = (&p + &pm).scale(&(rat::int(2 * n as i64) + &c));
            Ok((lhs != rhs).then(|| json!({ "s": sv, "n": n, "lhs": poly_json(&lhs), "rhs": poly_json(&rhs) })))
        })
    })
}

// ---------------------------------------------------------------- operators

/// `[D2, D1] = D2` on every `p_n`.
pub fn check_commutation(prm: &JacobiParams, n_max: usize) -> Outcome {
    let beta = prm.beta.clone();
    let comm = NcOp::d2(beta.clone()).commutator(&NcOp::d1(beta.clone()))?;
    let d2 = NcOp::d2(beta);
    first_failure(0..=n_max, |n| {
        let p = jacobi_poly(n, prm);
        Ok((comm.realize(&p, 0) != d2.realize(&p, 0)).then(|| json!({ "n": n })))
    })
}

/// `sum_{s=0}^{n} [r(s) p_s - r(-s-alpha-beta) p_{s-1}] = B p_n` for monomials `r = n^j`.
pub fn check_lemma45(prm: &JacobiParams, degree_max: usize, n_max: usize) -> Outcome {
    let ab = prm.ab();
    first_failure(0..=degree_max, |j| {
        let r = UniPoly::monomial(Var::N, rat::one(), j);
        let op = lemma45_operator(&r, &prm.alpha, &prm.beta)?;
        let mut sum = UniPoly::zero(Var::Z);
        for n in 0..=n_max {
            let sn = rat::int(n as i64);
            sum += &jacobi_poly(n, prm).scale(&r.eval(&sn));
            sum -= &jacobi_poly_signed(n as i64 - 1, prm).scale(&r.eval(&(-&sn - &ab)));
            let rhs = op.realize(&jacobi_poly(n, prm), 0);
            if sum != rhs {
                return Ok(Some(json!({ "degree": j, "n": n, "sum": poly_json(&sum), "operator": poly_json(&rhs) })));
            }
        }
        Ok(None)
    })
}

// ---------------------------------------------------------------- discrete

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat::frac(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

/// The Reach identity on `instances` random sequence tables for order `k`.
pub fn check_reach(k: usize, instances: usize, seed: u64) -> Outcome {
    const LO: i64 = -14;
    const HI: i64 = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    first_failure(0..instances, |inst| {
        let seqs: Vec<SeqSource> = (0..k + 2)
            .map(|_| SeqSource::table(LO, (LO..=HI).map(|_| random_rat(&mut rng)).collect()))
            .collect();
        let anchors: Vec<i64> = (0..=k).map(|_| rng.gen_range(-3..=3)).collect();
        let n = rng.gen_range(-1..=5);
        let (lhs, rhs) = reach_identity_sides(&seqs, &anchors, n)?;
        Ok((lhs != rhs).then(|| {
            json!({ "instance": inst, "k": k, "anchors": anchors, "n": n, "lhs": s(&lhs), "rhs": s(&rhs) })
        }))
    })
}

// ---------------------------------------------------------------- darboux

/// Symmetry of `tau_n` and the factorization `tau = epsilon * taubar(lambda)`.
pub fn check_tau(spec: &DarbouxSpec) -> Outcome {
    let tau = spec.tau()?;
    if !spec.tau_symmetry_holds(&tau.tau)? {
        return Ok(Some(json!({ "reason": "symmetry", "tau": poly_json(&tau.tau) })));
    }
    let base = spec.lambda_at_shift(&rat::frac(-(spec.k() as i64 - 1), 2));
    let rebuilt = &tau.epsilon * &tau.tau_bar.compose(&base);
    Ok((rebuilt != tau.tau).then(|| json!({ "reason": "factorization", "tau": poly_json(&tau.tau) })))
}

/// Genericity, the fitted recurrence `L_hat q_n = z q_n`, and intertwining.
pub fn check_recurrence(family: &QFamily, n_max: usize) -> Outcome {
    family.check_generic(n_max + 1)?;
    let op = family.fit_recurrence(n_max)?;
    first_failure(0..=n_max, |n| {
        let r = op.residual(n, &|m| family.q(m))?;
        Ok((!r.is_zero()).then(|| json!({ "n": n, "residual": poly_json(&r) })))
    })
}

pub fn check_intertwining(family: &QFamily, n_max: usize) -> Outcome {
    let n = n_max.max(family.spec().k() + 2);
    Ok((!intertwine_check(family, n)?).then(|| json!({ "N": n })))
}

/// `k = 1` point-mass orthogonality for all `n < m <= n_max` and weights `s <= s_max`.
pub fn check_orthogonality_k1(family: &QFamily, n_max: usize, s_max: u32) -> Outcome {
    first_failure(0..=s_max, |sv| {
        first_failure(0..=n_max, |m| {
            first_failure(0..m, |n| {
                let v = family.orthogonality_k1(n, m, sv)?;
                Ok((!v.is_zero()).then(|| json!({ "s": sv, "n": n, "m": m, "value": s(&v) })))
            })
        })
    })
}

// ---------------------------------------------------------------- algebra

/// Each basis element is a member and survives `f -> (g, c) -> f`.
pub fn check_certificates(spec: &DarbouxSpec, degree_max: usize) -> Outcome {
    let ctx = AlgebraContext::new(spec)?;
    let basis = ctx.basis(degree_max)?;
    first_failure(basis, |f| {
        let cert = ctx.certificate(&f)?;
        let back = ctx.element_from_g(&cert.g, cert.c.clone())?;
        Ok((back.f != f).then(|| json!({ "f": poly_json(&f), "rebuilt": poly_json(&back.f) })))
    })
}

/// Fitted operators for a list of spectral polynomials.
pub fn fit_all(family: &QFamily, fs: &[UniPoly]) -> Result<Vec<NcOp>> {
    fs.iter().map(|f| fit_bf(f, family)).collect()
}

/// `B_f q_n = f(lambda_{n-k/2}) q_n` for `n <= n_max`.
pub fn check_eigen(family: &QFamily, fs: &[UniPoly], ops: &[NcOp], n_max: usize) -> Outcome {
    first_failure(fs.iter().zip(ops), |(f, op)| {
        first_failure(0..=n_max, |n| {
            let q = family.q(n)?;
            let lhs = op.realize(&q, 0);
            let rhs = q.scale(&eigenvalue(f, family, n, 0));
            Ok((lhs != rhs).then(|| json!({ "f": poly_json(f), "n": n })))
        })
    })
}

/// Weighted eigen-relation on `hat q_{n,s}` for `s <= s_max`, `n <= n_max`.
pub fn check_weighted_eigen(family: &QFamily, fs: &[UniPoly], ops: &[NcOp], n_max: usize, s_max: u32) -> Outcome {
    first_failure(fs.iter().zip(ops), |(f, op)| {
        first_failure(0..=s_max, |sv| {
            first_failure(0..=n_max, |n| {
                let q = family.hat_q(n, sv)?;
                let lhs = op.realize(&q, sv);
                let rhs = q.scale(&eigenvalue(f, family, n, sv));
                Ok((lhs != rhs).then(|| json!({ "f": poly_json(f), "s": sv, "n": n })))
            })
        })
    })
}

pub fn check_commuting(ops: &[NcOp]) -> Outcome {
    for (i, a) in ops.iter().enumerate() {
        for (j, b) in ops.iter().enumerate().skip(i + 1) {
            let c = a.commutator(b)?;
            if !c.is_zero() {
                return Ok(Some(json!({ "pair": [i, j], "commutator": c.to_string() })));
            }
        }
    }
    Ok(None)
}

/// `fit(f h) = fit(f) fit(h)` for pairs with `deg(f h) <= degree_max`.
pub fn check_product(family: &QFamily, fs: &[UniPoly], ops: &[NcOp], degree_max: usize) -> Outcome {
    for i in 0..fs.len() {
        for j in i..fs.len() {
            let prod = &fs[i] * &fs[j];
            if prod.degree().unwrap_or(0) > degree_max {
                continue;
            }
            let fitted = fit_bf(&prod, family)?;
            let composed = ops[i].nc_mul(&ops[j])?;
            if fitted != composed {
                return Ok(Some(json!({ "pair": [i, j], "product": poly_json(&prod) })));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------- Krall example

/// `B_2` for `alpha = k = 1` in the closed form, with `D2` written to the left of `D1`.
pub fn krall_b2_operator(beta: &Rat, a0: &Rat) -> NcOp {
    let r = |x: i64| rat::int(x);
    let d1 = NcOp::d1(beta.clone());
    let d2 = NcOp::d2(beta.clone());
    let id = NcOp::identity(beta.clone());
    let b = beta;
    let ab = a0 * b;
    let terms = [
        (d1.pow(4), r(1)),
        (&d2 * &d1.pow(2), r(-2)),
        (d2.pow(2), r(1)),
        (d1.pow(3), r(2) * (r(1) + b)),
        (&d2 * &d1, r(-2) * b),
        (d1.pow(2), r(1) + r(2) * a0 + r(3) * b + r(2) * &ab + b * b),
        (d2.clone(), r(-2) * (r(1) + a0 + &ab)),
        (d1.clone(), (r(1) + b) * (b + r(2) * a0 * (r(1) + b))),
        (id, -(r(3) + r(2) * b) * (r(3) + r(6) * b + r(8) * a0 * (r(1) + b)) / r(16)),
    ];
    terms.iter().fold(NcOp::zero(beta.clone()), |acc, (op, c)| &acc + &op.scale(c))
}

fn require_krall(spec: &DarbouxSpec) -> Result<()> {
    if spec.alpha != 1 || spec.k() != 1 {
        return Err(Error::Unsupported("the Krall example needs alpha = k = 1".into()));
    }
    Ok(())
}

/// Basis up to degree 3 spans `{1, f2, f3}`, and `fit(f2)` equals the closed-form `B_2`.
pub fn check_krall_example(family: &QFamily) -> Outcome {
    let spec = family.spec();
    require_krall(spec)?;
    let (f2, f3) = krall_generators(&spec.beta, &spec.a[0]);
    let basis = AlgebraContext::new(spec)?.basis(3)?;
    let expected = echelonize(&[UniPoly::one(Var::T), f2.clone(), f3]);
    if basis != expected {
        return Ok(Some(json!({
            "reason": "basis",
            "basis": basis.iter().map(poly_json).collect::<Vec<_>>(),
            "expected": expected.iter().map(poly_json).collect::<Vec<_>>(),
        })));
    }
    let fitted = fit_bf(&f2, family)?;
    let closed = krall_b2_operator(&spec.beta, &spec.a[0]);
    Ok((fitted != closed).then(|| json!({ "reason": "B2", "fitted": fitted.to_string(), "closed": closed.to_string() })))
}

// ---------------------------------------------------------------- multivariate

/// Harmonic counts and `realize_pde(B_f) Q = f(lambda^{alpha+d/2-1}_{(n-k)/2}) Q`.
pub fn check_mv_eigen(basis: &EigenBasis<'_>, family: &QFamily, fs: &[UniPoly], ops: &[NcOp], n_max: u32) -> Outcome {
    let d = basis.dim();
    for n in 0..=n_max {
        let l = n as usize;
        if harmonic_dimension(d, n) != sigma(d, l) {
            return Ok(Some(json!({ "reason": "harmonic dimension", "l": n })));
        }
        let total = basis.indices(n)?.len();
        let expect = rat::binomial((l + d - 1) as u32, (d - 1) as u32);
        if rat::int(total as i64) != expect {
            return Ok(Some(json!({ "reason": "count", "n": n, "count": total, "expected": s(&expect) })));
        }
    }
    let ab = family.spec().ab();
    let k = family.spec().k() as i64;
    for (f, op) in fs.iter().zip(ops) {
        for n in 0..=n_max {
            let lam = jacobi::lambda(&rat::frac(n as i64 - k, 2), &ab);
            let ev = f.eval(&lam);
            for (n, i, j) in basis.indices(n)? {
                let q = basis.q(n, i, j)?;
                if realize_pde(op, &q)? != q.scale(&ev) {
                    return Ok(Some(json!({ "f": poly_json(f), "n": n, "i": i, "j": j })));
                }
            }
        }
    }
    Ok(None)
}

/// All distinct pairs `Q_{n,i,j}` with total degree `<= n_max` are orthogonal.
pub fn check_mv_orthogonality(basis: &EigenBasis<'_>, family: &QFamily, n_max: u32) -> Outcome {
    require_krall(family.spec())?;
    let a0 = &family.spec().a[0];
    let mut all: Vec<((u32, u32, usize), MPoly)> = Vec::new();
    for n in 0..=n_max {
        for idx in basis.indices(n)? {
            all.push((idx, basis.q(idx.0, idx.1, idx.2)?));
        }
    }
    for (x, (ia, qa)) in all.iter().enumerate() {
        for (ib, qb) in &all[x + 1..] {
            let v = inner_product_kd(qa, qb, a0)?;
            if !v.is_zero() {
                return Ok(Some(json!({ "left": [ia.0, ia.1, ia.2], "right": [ib.0, ib.1, ib.2], "value": s(&v) })));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------- suites

/// Inputs shared by every suite.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub spec: DarbouxSpec,
    pub n_max: usize,
    pub s_max: u32,
    pub degree_max: usize,
    pub seed: u64,
    pub d: Option<usize>,
}

pub const UNIVARIATE_SUITES: &[&str] = &[
    "algebra",
    "bispectral",
    "classical",
    "darboux",
    "krall-example",
    "operators",
    "orthogonality",
    "reach",
    "tau",
    "weighted",
];

pub const MULTIVARIATE_SUITES: &[&str] = &["mv-eigen", "mv-orthogonality"];

/// Suites that apply to `spec` when none is named.
pub fn default_suites(spec: &DarbouxSpec) -> Vec<&'static str> {
    UNIVARIATE_SUITES
        .iter()
        .copied()
        .filter(|name| match *name {
            "krall-example" | "orthogonality" => spec.alpha == 1 && spec.k() == 1,
            _ => true,
        })
        .collect()
}

fn bispectral_setup(p: &SuiteParams, family: &QFamily) -> Result<(Vec<UniPoly>, Vec<NcOp>)> {
    let basis = AlgebraContext::new(&p.spec)?.basis(p.degree_max)?;
    let ops = fit_all(family, &basis)?;
    Ok((basis, ops))
}

/// Runs one suite. Inapplicable suites are configuration errors.
pub fn run_suite(name: &str, p: &SuiteParams) -> Result<Vec<Check>> {
    let prm = p.spec.jacobi();
    let spec = &p.spec;
    let k = spec.k();
    let mut checks = Vec::new();
    let mut push = |n: &str, o: Outcome| checks.push(Check::from_outcome(format!("{name}/{n}"), o));
    match name {
        "classical" => {
            push("eigen", check_jacobi_eigen(&prm, p.n_max));
            push("three-term", check_three_term(&prm, p.n_max));
            push("differential-difference", check_diff_difference(&prm, p.n_max, p.s_max));
        }
        "operators" => {
            push("commutation", check_commutation(&prm, p.n_max));
            push("lemma45", check_lemma45(&prm, p.degree_max, p.n_max));
        }
        "reach" => {
            for order in 1..=k.max(1) {
                push(&format!("k{order}"), check_reach(order, 50, p.seed));
            }
        }
        "tau" => push("symmetry", check_tau(spec)),
        "darboux" => {
            let family = QFamily::new(spec.clone())?;
            push("recurrence", check_recurrence(&family, p.n_max));
            push("intertwining", check_intertwining(&family, p.n_max));
        }
        "orthogonality" => {
            require_krall(spec)?;
            let family = QFamily::new(spec.clone())?;
            push("point-mass", check_orthogonality_k1(&family, p.n_max, p.s_max));
        }
        "algebra" => push("certificates", check_certificates(spec, p.degree_max)),
        "bispectral" => {
            let family = QFamily::new(spec.clone())?;
            match bispectral_setup(p, &family) {
                Ok((fs, ops)) => {
                    push("eigen", check_eigen(&family, &fs, &ops, p.n_max));
                    push("commuting", check_commuting(&ops));
                    push("product", check_product(&family, &fs, &ops, p.degree_max));
                }
                Err(e) => push("fit", Err(e)),
            }
        }
        "weighted" => {
            let family = QFamily::new(spec.clone())?;
            match bispectral_setup(p, &family) {
                Ok((fs, ops)) => push("eigen", check_weighted_eigen(&family, &fs, &ops, p.n_max, p.s_max)),
                Err(e) => push("fit", Err(e)),
            }
        }
        "krall-example" => {
            require_krall(spec)?;
            let family = QFamily::new(spec.clone())?;
            push("generators-and-B2", check_krall_example(&family));
        }
        "mv-eigen" | "mv-orthogonality" => {
            let d = p.d.ok_or_else(|| Error::InvalidParameters("multivariate suites need d".into()))?;
            let family = QFamily::new(spec.clone())?;
            let basis = EigenBasis::new(&family, d)?;
            let n_max = p.n_max as u32;
            if name == "mv-eigen" {
                match bispectral_setup(p, &family) {
                    Ok((fs, ops)) => push("spectrum", check_mv_eigen(&basis, &family, &fs, &ops, n_max)),
                    Err(e) => push("fit", Err(e)),
                }
            } else {
                require_krall(spec)?;
                push("sobolev", check_mv_orthogonality(&basis, &family, n_max));
            }
        }
        other => return Err(Error::InvalidParameters(format!("unknown suite {other:?}"))),
    }
    Ok(checks)
}

/// Runs several suites on worker threads; results are ordered by check name.
pub fn run_suites(names: &[&str], p: &SuiteParams) -> Result<Vec<Check>> {
    let results: Vec<Result<Vec<Check>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = names.iter().map(|n| scope.spawn(move || run_suite(n, p))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut by_name = BTreeMap::new();
    for r in results {
        for c in r? {
            by_name.insert(c.name.clone(), c);
        }
    }
    Ok(by_name.into_values().collect())
}
