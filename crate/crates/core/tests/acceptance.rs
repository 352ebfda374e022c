//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::time::{Duration, Instant};

use krall_core::algebra::{echelonize, AlgebraContext};
use krall_core::darboux::{intertwine_check, DarbouxSpec, QFamily};
use krall_core::jacobi::JacobiParams;
use krall_core::mpoly::MPoly;
use krall_core::multivariate::{harmonic_basis, inner_product_kd, realize_pde, EigenBasis};
use krall_core::ncop::NcOp;
use krall_core::rat::{frac, int, Rat};
use krall_core::verify;
use krall_core::{fit_bf, UniPoly, Var};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn no_witness(o: krall_core::Result<Option<serde_json::Value>>) -> Outcome {
    match o {
        Ok(None) => Ok(()),
        Ok(Some(w)) => Err(w.to_string()),
        Err(e) => Err(e.to_string()),
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------- closed forms

const KRALL_POINTS: [(i64, i64, i64, i64); 3] = [(0, 1, 1, 1), (1, 1, 2, 1), (1, 2, 1, 3)];

fn krall_points() -> Vec<(Rat, Rat)> {
    KRALL_POINTS.iter().map(|&(bp, bq, ap, aq)| (frac(bp, bq), frac(ap, aq))).collect()
}

fn krall_spec(beta: &Rat, a0: &Rat) -> DarbouxSpec {
    DarbouxSpec::new(1, beta.clone(), vec![a0.clone()]).unwrap()
}

/// The degree-2 and degree-3 generators for alpha = k = 1.
fn closed_form_generators(b: &Rat, a0: &Rat) -> (UniPoly, UniPoly) {
    let r = |x: i64| int(x);
    let f2 = UniPoly::from_coeffs(Var::T, vec![r(0), (r(3) + r(4) * a0 + r(4) * b + r(4) * a0 * b) / r(2), r(1)]);
    let f3 = UniPoly::from_coeffs(
        Var::T,
        vec![
            r(0),
            -(r(21) + r(12) * a0 + r(28) * b + r(12) * a0 * b + r(4) * b * b) / r(16),
            (r(1) + r(6) * a0 + r(6) * b + r(6) * a0 * b) / r(4),
            r(1),
        ],
    );
    (f2, f3)
}

/// `B_2` as a word in `D1`, `D2` with `D2` on the left, normal-ordered by operator products.
fn closed_form_b2(b: &Rat, a0: &Rat) -> NcOp {
    let r = |x: i64| int(x);
    let d1 = NcOp::d1(b.clone());
    let d2 = NcOp::d2(b.clone());
    let one = NcOp::identity(b.clone());
    let mut acc = &d1 * &d1;
    acc = &acc * &acc;
    acc = &acc - &(&d2 * &(&d1 * &d1)).scale(&r(2));
    acc = &acc + &(&d2 * &d2);
    acc = &acc + &(&d1 * &(&d1 * &d1)).scale(&(r(2) * (r(1) + b)));
    acc = &acc - &(&d2 * &d1).scale(&(r(2) * b));
    acc = &acc + &(&d1 * &d1).scale(&(r(1) + r(2) * a0 + r(3) * b + r(2) * a0 * b + b * b));
    acc = &acc - &d2.scale(&(r(2) * (r(1) + a0 + a0 * b)));
    acc = &acc + &d1.scale(&((r(1) + b) * (b + r(2) * a0 * (r(1) + b))));
    &acc - &one.scale(&((r(3) + r(2) * b) * (r(3) + r(6) * b + r(8) * a0 * (r(1) + b)) / r(16)))
}

/// `lambda_m = m (m + c + 1)` with `c = alpha + beta`.
fn lam(m: &Rat, c: &Rat) -> Rat {
    m * (m + c + int(1))
}

fn eig(f: &UniPoly, spec: &DarbouxSpec, n: usize, s: u32) -> Rat {
    let m = int(n as i64) + frac(s as i64 - spec.k() as i64, 2);
    f.eval(&lam(&m, &spec.ab()))
}

/// `int_0^1 p(z) z^c dz`.
fn monomial_weight_integral(p: &UniPoly, c: &Rat) -> Rat {
    p.coeffs().iter().enumerate().map(|(i, a)| a / (int(i as i64 + 1) + c)).sum()
}

// ---------------------------------------------------------------- shared state

struct Bispectral {
    label: String,
    family: QFamily,
    fs: Vec<UniPoly>,
    ops: Vec<NcOp>,
}

fn criterion3_specs() -> Vec<(String, DarbouxSpec, usize)> {
    vec![
        ("alpha=k=1 beta=0 a0=1".into(), krall_spec(&int(0), &int(1)), 4),
        ("alpha=k=2 beta=0 a=(1,1)".into(), DarbouxSpec::new(2, int(0), vec![int(1), int(1)]).unwrap(), 6),
        ("alpha=k=2 beta=1/2 a=(1,1)".into(), DarbouxSpec::new(2, frac(1, 2), vec![int(1), int(1)]).unwrap(), 6),
    ]
}

// ---------------------------------------------------------------- criteria

fn c1() -> Outcome {
    for (b, a0) in krall_points() {
        let family = QFamily::new(krall_spec(&b, &a0)).map_err(err)?;
        let (f2, _) = closed_form_generators(&b, &a0);
        let fitted = fit_bf(&f2, &family).map_err(err)?;
        let closed = closed_form_b2(&b, &a0);
        ensure(fitted == closed, || format!("beta={b} a0={a0}: fitted {fitted} vs closed form {closed}"))?;
    }
    Ok(())
}

fn c2() -> Outcome {
    for (b, a0) in krall_points() {
        let basis = AlgebraContext::new(&krall_spec(&b, &a0)).map_err(err)?.basis(3).map_err(err)?;
        let (f2, f3) = closed_form_generators(&b, &a0);
        let expected = echelonize(&[UniPoly::one(Var::T), f2.clone(), f3]);
        ensure(basis.len() == 3 && basis == expected, || format!("beta={b} a0={a0}: {basis:?}"))?;
        ensure(basis[1] == f2, || format!("beta={b} a0={a0}: degree-2 element differs from f2"))?;
    }
    Ok(())
}

fn c3(shared: &mut Vec<Bispectral>) -> Outcome {
    for (label, spec, degree) in criterion3_specs() {
        let family = QFamily::new(spec.clone()).map_err(err)?;
        family.check_generic(16).map_err(|e| format!("{label}: {e}"))?;
        let l_hat = family.fit_recurrence(15).map_err(|e| format!("{label}: {e}"))?;
        for n in 0..=15 {
            let (q, qp) = (family.q(n).map_err(err)?, family.q(n + 1).map_err(err)?);
            let mut rhs = &qp.scale(&l_hat.a[n]) + &q.scale(&l_hat.b[n]);
            if n > 0 {
                rhs += &family.q(n - 1).map_err(err)?.scale(&l_hat.c[n]);
            }
            ensure(q.shift_up(1) == rhs, || format!("{label}: recurrence at n={n}"))?;
        }
        ensure(l_hat.a.iter().all(|x| !x.is_zero()) && l_hat.c[1..].iter().all(|x| !x.is_zero()), || {
            format!("{label}: zero off-diagonal")
        })?;
        let fs = AlgebraContext::new(&spec).map_err(err)?.basis(degree).map_err(err)?;
        let mut ops = Vec::new();
        for f in &fs {
            let op = fit_bf(f, &family).map_err(|e| format!("{label}: fit {f}: {e}"))?;
            for n in 0..=15 {
                let q = family.q(n).map_err(err)?;
                ensure(op.realize(&q, 0) == q.scale(&eig(f, &spec, n, 0)), || format!("{label}: B_f q_n, f={f}, n={n}"))?;
            }
            ops.push(op);
        }
        shared.push(Bispectral { label, family, fs, ops });
    }
    Ok(())
}

fn c4(shared: &[Bispectral]) -> Outcome {
    ensure(!shared.is_empty(), || "criterion 3 produced no operators".into())?;
    for b in shared {
        for (i, x) in b.ops.iter().enumerate() {
            for y in &b.ops[i + 1..] {
                let c = x.commutator(y).map_err(err)?;
                ensure(c.is_zero(), || format!("{}: nonzero commutator {c}", b.label))?;
            }
        }
        for i in 0..b.fs.len() {
            for j in i..b.fs.len() {
                let prod = &b.fs[i] * &b.fs[j];
                if prod.degree().unwrap_or(0) > 4 {
                    continue;
                }
                let lhs = fit_bf(&prod, &b.family).map_err(err)?;
                let rhs = &b.ops[i] * &b.ops[j];
                ensure(lhs == rhs, || format!("{}: fit(f h) != fit(f) fit(h) for {prod}", b.label))?;
            }
        }
    }
    Ok(())
}

fn c5() -> Outcome {
    for (label, spec, _) in criterion3_specs() {
        let family = QFamily::new(spec).map_err(err)?;
        ensure(intertwine_check(&family, 12).map_err(err)?, || format!("{label}: L_hat Q != Q L"))?;
    }
    Ok(())
}

fn c6() -> Outcome {
    for (b, a0) in krall_points() {
        let family = QFamily::new(krall_spec(&b, &a0)).map_err(err)?;
        let u0 = int(1) / (&a0 * (&b + int(1)));
        for s_ in 0..=4u32 {
            let m_max = if s_ == 0 { 8 } else { 6 };
            let sr = int(s_ as i64);
            let factor = int(1) + (&sr * &sr + int(2) * &b * &sr) * &u0 / int(4);
            for m in 0..=m_max {
                let qm = family.hat_q(m, s_).map_err(err)?;
                for n in 0..m {
                    let qn = family.hat_q(n, s_).map_err(err)?;
                    let v = &factor * monomial_weight_integral(&(&qn * &qm), &(&b + &sr))
                        + &u0 * qn.eval(&int(1)) * qm.eval(&int(1));
                    ensure(v.is_zero(), || format!("beta={b} a0={a0} s={s_} n={n} m={m}: {v}"))?;
                }
            }
        }
    }
    Ok(())
}

fn c7() -> Outcome {
    for (a, b) in [(int(1), int(0)), (int(2), frac(1, 2))] {
        let prm = JacobiParams::new(a, b).map_err(err)?;
        no_witness(verify::check_lemma45(&prm, 4, 10))?;
    }
    Ok(())
}

fn c8() -> Outcome {
    for k in 1..=4 {
        no_witness(verify::check_reach(k, 200, 20261014))?;
    }
    Ok(())
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 1..=4u32 {
        for beta in [int(0), frac(1, 2), frac(-1, 3)] {
            let a: Vec<Rat> = (0..k).map(|_| frac(rng.gen_range(-20..=20), rng.gen_range(1..=7))).collect();
            let spec = DarbouxSpec::new(k, beta.clone(), a.clone()).map_err(err)?;
            no_witness(verify::check_tau(&spec)).map_err(|e| format!("k={k} beta={beta} a={a:?}: {e}"))?;
        }
    }
    Ok(())
}

fn c10(shared: &[Bispectral]) -> Outcome {
    ensure(!shared.is_empty(), || "criterion 3 produced no operators".into())?;
    for b in shared {
        let spec = b.family.spec();
        for (f, op) in b.fs.iter().zip(&b.ops) {
            for s_ in 0..=4u32 {
                for n in 0..=8 {
                    let q = b.family.hat_q(n, s_).map_err(err)?;
                    ensure(op.realize(&q, s_) == q.scale(&eig(f, spec, n, s_)), || {
                        format!("{}: f={f} s={s_} n={n}", b.label)
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn binom(n: u64, r: u64) -> u64 {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c11() -> Outcome {
    for d in [2usize, 3] {
        let beta = frac(d as i64 - 2, 2);
        let spec = krall_spec(&beta, &int(1));
        let family = QFamily::new(spec).map_err(err)?;
        let basis = EigenBasis::new(&family, d).map_err(err)?;
        let (f2, f3) = closed_form_generators(&beta, &int(1));
        let c = int(1) + frac(d as i64, 2) - int(1);
        for f in [f2, f3] {
            let op = fit_bf(&f, &family).map_err(err)?;
            for n in 0..=6u32 {
                let idx = basis.indices(n).map_err(err)?;
                ensure(idx.len() as u64 == binom(n as u64 + d as u64 - 1, d as u64 - 1), || {
                    format!("d={d} n={n}: {} basis elements", idx.len())
                })?;
                let ev = f.eval(&lam(&frac(n as i64 - 1, 2), &c));
                for (n, i, j) in idx {
                    let q = basis.q(n, i, j).map_err(err)?;
                    let lhs = realize_pde(&op, &q).map_err(err)?;
                    ensure(lhs == q.scale(&ev), || format!("d={d} f={f} Q_({n},{i},{j})"))?;
                }
            }
        }
    }
    Ok(())
}

fn c12() -> Outcome {
    let d = 2;
    for a0 in [int(1), int(2), frac(1, 3)] {
        let family = QFamily::new(krall_spec(&int(0), &a0)).map_err(err)?;
        let basis = EigenBasis::new(&family, d).map_err(err)?;
        let mut all = Vec::new();
        for n in 0..=5 {
            for (n, i, j) in basis.indices(n).map_err(err)? {
                all.push(((n, i, j), basis.q(n, i, j).map_err(err)?));
            }
        }
        for (x, (ia, qa)) in all.iter().enumerate() {
            for (ib, qb) in &all[x + 1..] {
                let v = inner_product_kd(qa, qb, &a0).map_err(err)?;
                ensure(v.is_zero(), || format!("a0={a0}: <Q{ia:?}, Q{ib:?}> = {v}"))?;
            }
        }
    }
    // the radial pair at a0 = 1, written out by hand
    let minus_one = MPoly::constant(d, int(-1));
    let radial = &MPoly::constant(d, int(9)) - &MPoly::norm_squared(d).scale(&int(12));
    let family = QFamily::new(krall_spec(&int(0), &int(1))).map_err(err)?;
    let basis = EigenBasis::new(&family, d).map_err(err)?;
    ensure(basis.q(0, 0, 0).map_err(err)? == minus_one, || "Q_(0,0,0) != -1".into())?;
    ensure(basis.q(2, 1, 0).map_err(err)? == radial, || "Q_(2,1,0) != 9 - 12 rho^2".into())?;
    let v = inner_product_kd(&minus_one, &radial, &int(1)).map_err(err)?;
    ensure(v.is_zero(), || format!("<-1, 9 - 12 rho^2> = {v}"))?;
    ensure(harmonic_basis(d, 0).map_err(err)?.elements.len() == 1, || "H_0".into())
}

fn c13() -> Outcome {
    let grid = [(int(0), int(0)), (int(1), frac(1, 2)), (int(2), frac(-1, 2)), (frac(5, 2), frac(1, 3))];
    for (a, b) in grid {
        let prm = JacobiParams::new(a.clone(), b.clone()).map_err(err)?;
        let tag = |e: String| format!("alpha={a} beta={b}: {e}");
        no_witness(verify::check_jacobi_eigen(&prm, 12)).map_err(tag)?;
        no_witness(verify::check_three_term(&prm, 12)).map_err(tag)?;
        no_witness(verify::check_diff_difference(&prm, 12, 4)).map_err(tag)?;
    }
    Ok(())
}

// ---------------------------------------------------------------- driver

fn run(id: u32, title: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let took = start.elapsed();
    let outcome = match (outcome, budget) {
        (Ok(()), Some(b)) if took > b => Err(format!("took {took:.2?}, budget {b:?}")),
        (o, _) => o,
    };
    match &outcome {
        Ok(()) => println!("criterion {id:>2}: PASS  {title} ({took:.2?})"),
        Err(e) => println!("criterion {id:>2}: FAIL  {title} ({took:.2?}): {e}"),
    }
    outcome.is_ok()
}

fn main() {
    let secs = Duration::from_secs;
    let mut shared = Vec::new();
    let results = [
        run(1, "Krall operator B_2 matches the closed form", Some(secs(10)), c1),
        run(2, "algebra basis up to degree 3 is {1, f2, f3}", None, c2),
        run(3, "bispectral pair L_hat q = z q, B_f q = f(lambda) q, n <= 15", Some(secs(120)), || c3(&mut shared)),
        run(4, "fitted operators commute and multiply like their symbols", None, || c4(&shared)),
        run(5, "intertwining on truncated matrices, N = 12", None, c5),
        run(6, "orthogonality with point mass, weighted s <= 4", None, c6),
        run(7, "lemma45_operator against brute-force summation", None, c7),
        run(8, "Reach identity on 200 seeded instances per k", None, c8),
        run(9, "tau symmetry and epsilon decomposition, k = 1..4", None, c9),
        run(10, "weighted eigen-relation, s <= 4, n <= 8", None, || c10(&shared)),
        run(11, "multivariate eigenbasis, d = 2, 3, n <= 6", Some(secs(180)), c11),
        run(12, "Sobolev-type orthogonality in d = 2", None, c12),
        run(13, "classical Jacobi identities on a 4-point grid", None, c13),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
