//! Discrete integrals, Casorati determinants and the discrete Reach identity.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{UniPoly, Var};
use crate::rat::{self, Rat};

/// An integer-indexed sequence: tabulated values or a polynomial in `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqSource {
    /// `values[i]` is the term at index `start + i`.
    Table { start: i64, values: Vec<Rat> },
    Poly(UniPoly),
}

impl SeqSource {
    pub fn table(start: i64, values: Vec<Rat>) -> Self {
        SeqSource::Table { start, values }
    }

    pub fn at(&self, n: i64) -> Result<Rat> {
        match self {
            SeqSource::Table { start, values } => usize::try_from(n - start)
                .ok()
                .and_then(|i| values.get(i).cloned())
                .ok_or(Error::UndefinedIndex(n)),
            SeqSource::Poly(p) => Ok(p.eval_i64(n)),
        }
    }
}

/// `sum_{s=m+1}^{n} f_s` for `n > m`, `0` for `n = m`, `-sum_{s=n+1}^{m} f_s` for `n < m`.
pub fn discrete_integral<F>(f: F, m: i64, n: i64) -> Result<Rat>
where
    F: Fn(i64) -> Result<Rat>,
{
    let mut acc = rat::zero();
    if n > m {
        for s in m + 1..=n {
            acc += f(s)?;
        }
    } else {
        for s in n + 1..=m {
            acc -= f(s)?;
        }
    }
    Ok(acc)
}

/// `Wr_n(h^(1), ..., h^(k)) = det(h^(i)_{n-j+1})`, rows `i`, columns `j = 1..k`.
pub fn casorati(sources: &[SeqSource], n: i64) -> Result<Rat> {
    casorati_with(sources.len(), |i, m| sources[i].at(m), n)
}

/// Casorati determinant over a value callback `h(i, m) = h^(i)_m`.
pub fn casorati_with<F>(k: usize, h: F, n: i64) -> Result<Rat>
where
    F: Fn(usize, i64) -> Result<Rat>,
{
    if k == 0 {
        return Ok(rat::one());
    }
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let row = (0..k).map(|j| h(i, n - j as i64)).collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Matrix::from_rows(rows)?.det()
}

/// Symbolic Casorati determinant of polynomial sequences; a polynomial in `n`.
pub fn casorati_symbolic(sources: &[UniPoly]) -> Result<UniPoly> {
    for s in sources {
        if s.variable() != Var::N {
            return Err(Error::VariableMismatch { expected: Var::N, found: s.variable() });
        }
    }
    let k = sources.len();
    let entries: Vec<Vec<UniPoly>> = sources
        .iter()
        .map(|h| (0..k).map(|j| h.shifted(&rat::int(-(j as i64)))).collect())
        .collect();
    Ok(poly_det(&entries, Var::N))
}

/// Determinant by cofactor expansion along the first row; meant for small sizes.
pub(crate) fn poly_det(m: &[Vec<UniPoly>], var: Var) -> UniPoly {
    let k = m.len();
    match k {
        0 => UniPoly::one(var),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = UniPoly::zero(var);
            for (c, entry) in m[0].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<UniPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = entry * &poly_det(&minor, var);
                if c % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            acc
        }
    }
}

/// Checks the discrete Reach identity.
///
/// `seqs` holds `f^(0), ..., f^(k+1)` and `anchors` holds `n_1, ..., n_{k+1}`.
/// Builds
/// `F_m = sum_j (-1)^{k+1+j} f^(j)_m int_{n_j}^{m} f^(0)_s Wr_s(f^(1..k+1) without f^(j))`
/// and compares `Wr_n(f^(1), ..., f^(k), F)` against
/// `int_{n_{k+1}}^{n-1} f^(0)_s Wr_s(f^(1), ..., f^(k)) * Wr_n(f^(1), ..., f^(k+1))`.
pub fn reach_identity_check(seqs: &[SeqSource], anchors: &[i64], n: i64) -> Result<bool> {
    let (lhs, rhs) = reach_identity_sides(seqs, anchors, n)?;
    Ok(lhs == rhs)
}

/// Both sides of the Reach identity, for diagnostics.
pub fn reach_identity_sides(seqs: &[SeqSource], anchors: &[i64], n: i64) -> Result<(Rat, Rat)> {
    if seqs.len() < 3 {
        return Err(Error::InvalidParameters("need f^(0), ..., f^(k+1) with k >= 1".into()));
    }
    let k = seqs.len() - 2;
    if anchors.len() != k + 1 {
        return Err(Error::InvalidParameters(format!("expected {} anchors, got {}", k + 1, anchors.len())));
    }
    let f0 = &seqs[0];
    let fs = &seqs[1..];

    // Wr_s over all of f^(1..k+1) except the one at position `skip`.
    let wr_without = |skip: usize, s: i64| -> Result<Rat> {
        let picked: Vec<&SeqSource> =
            fs.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, f)| f).collect();
        casorati_with(picked.len(), |i, m| picked[i].at(m), s)
    };

    let big_f = |m: i64| -> Result<Rat> {
        let mut acc = rat::zero();
        for j in 0..=k {
            let integral = discrete_integral(|s| Ok(f0.at(s)? * wr_without(j, s)?), anchors[j], m)?;
            if integral.is_zero() {
                continue;
            }
            // (-1)^{k+1+j} with j counted from 1
            let term = fs[j].at(m)? * integral;
            if (k + j).is_multiple_of(2) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        Ok(acc)
    };

    let f_values: Vec<Rat> = (0..=k).map(|j| big_f(n - j as i64)).collect::<Result<_>>()?;
    let lhs = casorati_with(
        k + 1,
        |i, m| if i < k { fs[i].at(m) } else { Ok(f_values[(n - m) as usize].clone()) },
        n,
    )?;
    let integral = discrete_integral(|s| Ok(f0.at(s)? * wr_without(k, s)?), anchors[k], n - 1)?;
    let rhs = integral * casorati_with(k + 1, |i, m| fs[i].at(m), n)?;
    Ok((lhs, rhs))
}
