//! Rotation-invariant partial differential operators on polynomials in `d`
//! variables: spherical harmonics, exact sphere and ball integrals (divided
//! by the sphere area), and the eigenbasis `Q_{n,i,j}`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::darboux::QFamily;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::mpoly::{Exponent, MPoly};
use crate::ncop::NcOp;
use crate::rat::{self, Rat};

/// `sigma_l = C(l+d-1, d-1) - C(l+d-3, d-1)`.
pub fn sigma(d: usize, l: usize) -> usize {
    let c = |n: i64, r: i64| -> i64 {
        if n < r || r < 0 || n < 0 {
            return 0;
        }
        let mut acc: i64 = 1;
        for i in 0..r {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    };
    let (l, d) = (l as i64, d as i64);
    (c(l + d - 1, d - 1) - c(l + d - 3, d - 1)) as usize
}

/// Exponent vectors of total degree `deg` in `d` variables, `x_1^deg` first.
pub fn monomials_of_degree(d: usize, deg: u32) -> Vec<Exponent> {
    fn rec(d: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == d {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=deg).rev() {
            prefix.push(first);
            rec(d, deg - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    rec(d, deg, &mut Vec::with_capacity(d), &mut out);
    out
}

/// `(1/omega_d) int_{S^{d-1}} x^e dw`.
///
/// Zero unless every exponent is even; for `e = 2b` it equals
/// `prod_i (1/2)_{b_i} / (d/2)_{|b|}`.
pub fn sphere_moment(exp: &[u32], d: usize) -> Rat {
    if exp.iter().any(|e| e % 2 == 1) {
        return rat::zero();
    }
    let half = rat::frac(1, 2);
    let total: u32 = exp.iter().map(|e| e / 2).sum();
    let num: Rat = exp.iter().map(|e| rat::pochhammer(&half, e / 2)).product();
    num / rat::pochhammer(&rat::frac(d as i64, 2), total)
}

pub fn sphere_integral(m: &MPoly) -> Rat {
    m.terms().iter().map(|(e, c)| c * sphere_moment(e, m.dim())).sum()
}

/// `(1/omega_d) int_{B^d} m dx`: each degree-`t` component contributes its
/// sphere average times `1/(t+d)`.
pub fn ball_integral(m: &MPoly) -> Rat {
    let d = m.dim() as i64;
    m.terms()
        .iter()
        .map(|(e, c)| {
            let t: u32 = e.iter().sum();
            c * sphere_moment(e, m.dim()) / rat::int(t as i64 + d)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometric {
    Laplacian,
    Euler,
    SphereLaplacian,
}

pub fn laplacian(p: &MPoly) -> MPoly {
    (0..p.dim()).fold(MPoly::zero(p.dim()), |acc, i| &acc + &p.partial(i).partial(i))
}

/// `sum_j x_j d/dx_j`, which multiplies each degree-`t` component by `t`.
pub fn euler(p: &MPoly) -> MPoly {
    MPoly::from_terms(
        p.dim(),
        p.terms().iter().map(|(e, c)| (e.clone(), c * rat::int(e.iter().sum::<u32>() as i64))),
    )
}

/// `||x||^2 Lap p - E(E p) - (d-2) E p`.
pub fn sphere_laplacian(p: &MPoly) -> MPoly {
    let d = p.dim() as i64;
    let ep = euler(p);
    let r2 = MPoly::norm_squared(p.dim());
    &(&(&r2 * &laplacian(p)) - &euler(&ep)) - &ep.scale(&rat::int(d - 2))
}

pub fn apply_geometric(kind: Geometric, p: &MPoly) -> MPoly {
    match kind {
        Geometric::Laplacian => laplacian(p),
        Geometric::Euler => euler(p),
        Geometric::SphereLaplacian => sphere_laplacian(p),
    }
}

/// A basis of homogeneous harmonics of degree `l`, pairwise orthogonal on the sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicBasis {
    pub d: usize,
    pub l: u32,
    pub elements: Vec<MPoly>,
}

/// Kernel of the Laplacian on degree-`l` homogeneous polynomials, as
/// coefficient vectors over [`monomials_of_degree`].
fn harmonic_kernel(d: usize, l: u32) -> (Vec<Exponent>, Vec<Vec<Rat>>) {
    let cols = monomials_of_degree(d, l);
    if l < 2 {
        let n = cols.len();
        let units = (0..n).map(|i| (0..n).map(|j| if i == j { rat::one() } else { rat::zero() }).collect()).collect();
        return (cols, units);
    }
    let rows = monomials_of_degree(d, l - 2);
    let index: BTreeMap<&Exponent, usize> = rows.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (c, e) in cols.iter().enumerate() {
        for i in 0..d {
            if e[i] < 2 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 2;
            m[(index[&f], c)] += rat::int((e[i] * (e[i] - 1)) as i64);
        }
    }
    let kernel = m.kernel();
    (cols, kernel)
}

/// `dim H_l` computed from the Laplacian kernel.
pub fn harmonic_dimension(d: usize, l: u32) -> usize {
    harmonic_kernel(d, l).1.len()
}

pub fn harmonic_basis(d: usize, l: u32) -> Result<HarmonicBasis> {
    if d < 2 {
        return Err(Error::InvalidParameters(format!("dimension {d} must be at least 2")));
    }
    let (mons, kernel) = harmonic_kernel(d, l);
    let n = mons.len();
    let mut gram_m = vec![vec![rat::zero(); n]; n];
    for a in 0..n {
        for b in a..n {
            let e: Exponent = mons[a].iter().zip(&mons[b]).map(|(x, y)| x + y).collect();
            let v = sphere_moment(&e, d);
            gram_m[a][b] = v.clone();
            gram_m[b][a] = v;
        }
    }
    let inner = |u: &[Rat], v: &[Rat]| -> Rat {
        let mut acc = rat::zero();
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if !vb.is_zero() && !gram_m[a][b].is_zero() {
                    acc += ua * vb * &gram_m[a][b];
                }
            }
        }
        acc
    };
    // Gram-Schmidt without normalization.
    let mut ortho: Vec<(Vec<Rat>, Rat)> = Vec::with_capacity(kernel.len());
    for v in kernel {
        let mut w = v;
        for (u, uu) in &ortho {
            let c = inner(&w, u) / uu;
            if c.is_zero() {
                continue;
            }
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= &c * ui;
            }
        }
        let ww = inner(&w, &w);
        ortho.push((w, ww));
    }
    let elements = ortho
        .into_iter()
        .map(|(w, _)| MPoly::from_terms(d, mons.iter().cloned().zip(w)))
        .collect();
    Ok(HarmonicBasis { d, l, elements })
}

/// Applies `B` with `D1 -> (1/2) x.grad` and `D2 -> (1/4) Lap`.
pub fn realize_pde(op: &NcOp, p: &MPoly) -> Result<MPoly> {
    let d = p.dim();
    let expected = rat::frac(d as i64 - 2, 2);
    if *op.beta() != expected {
        return Err(Error::InvalidParameters(format!(
            "operator beta {} does not match d/2 - 1 = {expected}",
            op.beta()
        )));
    }
    // cache (1/4 Lap)^j p
    let max_j = op.terms().keys().map(|&(_, j)| j).max().unwrap_or(0);
    let quarter = rat::frac(1, 4);
    let mut lap_powers = vec![p.clone()];
    for _ in 0..max_j {
        let next = laplacian(lap_powers.last().expect("nonempty")).scale(&quarter);
        lap_powers.push(next);
    }
    let mut out = MPoly::zero(d);
    for (&(i, j), c) in op.terms() {
        for (e, v) in lap_powers[j as usize].terms() {
            let t = rat::frac(e.iter().sum::<u32>() as i64, 2);
            out.add_term(e.clone(), c * v * rat::pow(&t, i));
        }
    }
    Ok(out)
}

/// `Q_{n,i,j}(x) = hat q_{i,n-2i}(||x||^2) Y^{n-2i}_j(x)` over a family
/// with `beta = d/2 - 1`, with cached harmonic bases.
#[derive(Debug)]
pub struct EigenBasis<'a> {
    family: &'a QFamily,
    d: usize,
    harmonics: std::sync::Mutex<BTreeMap<u32, HarmonicBasis>>,
}

impl<'a> EigenBasis<'a> {
    pub fn new(family: &'a QFamily, d: usize) -> Result<Self> {
        let expected = rat::frac(d as i64 - 2, 2);
        if d < 2 || family.spec().beta != expected {
            return Err(Error::InvalidParameters(format!(
                "beta = {} must equal d/2 - 1 = {expected}",
                family.spec().beta
            )));
        }
        Ok(EigenBasis { family, d, harmonics: std::sync::Mutex::new(BTreeMap::new()) })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn harmonics(&self, l: u32) -> Result<HarmonicBasis> {
        if let Some(h) = self.harmonics.lock().expect("harmonics lock").get(&l) {
            return Ok(h.clone());
        }
        let h = harmonic_basis(self.d, l)?;
        self.harmonics.lock().expect("harmonics lock").insert(l, h.clone());
        Ok(h)
    }

    /// `j` indexes [`harmonic_basis`] elements from 0.
    pub fn q(&self, n: u32, i: u32, j: usize) -> Result<MPoly> {
        if 2 * i > n {
            return Err(Error::InvalidParameters(format!("need 2i <= n (n = {n}, i = {i})")));
        }
        let l = n - 2 * i;
        let h = self.harmonics(l)?;
        let y = h.elements.get(j).ok_or_else(|| {
            Error::InvalidParameters(format!("harmonic index {j} out of range (sigma = {})", h.elements.len()))
        })?;
        let radial = self.family.hat_q(i as usize, l)?;
        Ok(&MPoly::radial(&radial, self.d) * y)
    }

    /// All `(n, i, j)` with total degree `n`.
    pub fn indices(&self, n: u32) -> Result<Vec<(u32, u32, usize)>> {
        let mut out = Vec::new();
        for i in 0..=n / 2 {
            let count = self.harmonics(n - 2 * i)?.elements.len();
            out.extend((0..count).map(|j| (n, i, j)));
        }
        Ok(out)
    }
}

/// `Q_{n,i,j}`; see [`EigenBasis::q`].
pub fn q_multivariate(family: &QFamily, d: usize, n: u32, i: u32, j: usize) -> Result<MPoly> {
    EigenBasis::new(family, d)?.q(n, i, j)
}

/// The Sobolev-type inner product for `alpha = k = 1`, divided by `omega_d`:
/// `int_B f g + (u0/2) int_S f g - (u0/4) int_B (Lap_S f) g`, `u0 = 2/(a0 d)`.
pub fn inner_product_kd(f: &MPoly, g: &MPoly, a0: &Rat) -> Result<Rat> {
    let d = f.dim();
    if g.dim() != d {
        return Err(Error::InvalidParameters("inner product of polynomials in different dimensions".into()));
    }
    if a0.is_zero() {
        return Err(Error::InvalidParameters("a0 must be nonzero".into()));
    }
    let u0 = rat::int(2) / (a0 * rat::int(d as i64));
    let fg = f * g;
    let sl = &sphere_laplacian(f) * g;
    Ok(ball_integral(&fg) + &u0 / rat::int(2) * sphere_integral(&fg) - &u0 / rat::int(4) * ball_integral(&sl))
}
