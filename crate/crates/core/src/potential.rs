//! The potential F_{m,n} of the finite Frobenius manifold M_{m,n}.
//!
//! Variables are the flat coordinates w^1..w^{m+n} (0-based indices in
//! `Poly`), with w^α = h^{m+1−α} for α ≤ m and w^α = ĥ^{m+n+1−α} otherwise.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::manifold::Label;
use crate::poly::{Monomial, Poly};
use crate::scalar::{q, q_to_string, qi, Scalar, Q};
use crate::series::{At, Parity, Series, Side};

/// Label of the flat coordinate w^α (1-based α).
pub fn flat_label(alpha: usize, m: u32, n: u32) -> Label {
    let (m, n) = (m as usize, n as usize);
    assert!(alpha >= 1 && alpha <= m + n);
    if alpha <= m {
        Label::H((m + 1 - alpha) as u32)
    } else {
        Label::HHat((m + n + 1 - alpha) as u32)
    }
}

/// Index α of an h or ĥ label.
pub fn flat_index(u: Label, m: u32, n: u32) -> Option<usize> {
    match u {
        Label::H(j) if j >= 1 && j <= m => Some((m + 1 - j) as usize),
        Label::HHat(k) if k >= 1 && k <= n => Some((m + n + 1 - k) as usize),
        _ => None,
    }
}

/// Degree of w^α under the Euler field of M_{m,n}.
pub fn w_degree(alpha: usize, m: u32, n: u32) -> Q {
    let (mm, nn) = (m as i64, n as i64);
    let a = alpha as i64;
    if a <= mm {
        q(mm - a + 1, mm)
    } else {
        q(2 * (mm + nn - a) + 1, 2 * nn) + q(1, 2 * mm)
    }
}

/// The superpotential l(z) with coefficients in the flat coordinates,
/// together with its first derivatives and the inverse powers of l′.
#[derive(Clone)]
pub struct Superpotential {
    m: u32,
    n: u32,
    l: Series<Poly>,
    dl: Vec<Series<Poly>>,
    inv_inf: [Series<Poly>; 2],
    inv_zero: [Series<Poly>; 2],
}

impl Superpotential {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::BadSupport("m and n must be positive".into()));
        }
        let (mm, nn) = (m as i64, n as i64);
        let var = |alpha: usize| Poly::var(alpha - 1);
        // z(χ) = χ − Σ h^j/2m χ^{1−2j}
        let mut zchi = vec![(1, Poly::one())];
        for j in 1..=m {
            let alpha = flat_index(Label::H(j), m, n).unwrap();
            zchi.push((1 - 2 * j as i64, -var(alpha).scale(&q(1, 2 * mm))));
        }
        let chi = Series::from_terms(zchi)
            .with_parity(Parity::Odd)?
            .compositional_inverse(Side::Infinity, 4 * mm + 4)?;
        let lplus = chi.powi(2 * mm, Side::Infinity, 0)?.plus()?;
        // z(y) = Σ ĥ^k/2n y^{2k−1}, y = 1/χ̂
        let zy = Series::from_terms((1..=n).map(|k| {
            let alpha = flat_index(Label::HHat(k), m, n).unwrap();
            (2 * k as i64 - 1, var(alpha).scale(&q(1, 2 * nn)))
        }))
        .with_parity(Parity::Odd)?;
        let y = zy.compositional_inverse(Side::Zero, 4 * nn + 4)?;
        let lminus = y.powi(-2 * nn, Side::Zero, 4 * nn + 4)?.minus()?;
        let l = lplus.add(&lminus)?;
        let l = Series::from_terms(l.terms().map(|(&e, c)| (e, c.clone())));
        let dl = (1..=(m + n) as usize)
            .map(|a| l.map(|c| c.deriv(a - 1)))
            .collect();
        let lp = l.derivative();
        let lp2 = lp.mul(&lp)?;
        let inv_inf = [
            lp.inv(Side::Infinity, 4 * mm + 6)?,
            lp2.inv(Side::Infinity, 4 * mm + 6)?,
        ];
        let inv_zero = [
            lp.inv(Side::Zero, 4 * nn + 6)?,
            lp2.inv(Side::Zero, 4 * nn + 6)?,
        ];
        Ok(Superpotential {
            m,
            n,
            l,
            dl,
            inv_inf,
            inv_zero,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn dim(&self) -> usize {
        (self.m + self.n) as usize
    }
    pub fn l(&self) -> &Series<Poly> {
        &self.l
    }

    /// ∂l/∂w^α (1-based).
    pub fn dl(&self, alpha: usize) -> &Series<Poly> {
        &self.dl[alpha - 1]
    }

    /// −(res_∞ + res_0) num/(l′)^power, power ∈ {1, 2}.
    pub fn critical_residue(&self, num: &Series<Poly>, power: usize) -> Result<Poly> {
        if num.is_exact_zero() {
            return Ok(Poly::zero());
        }
        let ri = num.mul(&self.inv_inf[power - 1])?.residue(At::Infinity)?;
        let r0 = num.mul(&self.inv_zero[power - 1])?.residue(At::Zero)?;
        Ok(-(ri + r0))
    }

    /// C_{αβγ} = −(res_∞ + res_0) ∂_α l ∂_β l ∂_γ l / l′.
    pub fn c(&self, a: usize, b: usize, g: usize) -> Result<Poly> {
        let num = self.dl(a).mul(self.dl(b))?.mul(self.dl(g))?;
        self.critical_residue(&num, 1)
    }

    /// ∂_s C_{uvw} from the two-term residue expression.
    pub fn dc(&self, s: usize, u: usize, v: usize, w: usize) -> Result<Poly> {
        let d2 = |a: usize, b: usize| self.dl(a).map(|c| c.deriv(b - 1));
        let mut first = Series::zero();
        for (x, y, z) in [(u, v, w), (v, w, u), (w, u, v)] {
            first = first.add(&d2(x, s).mul(self.dl(y))?.mul(self.dl(z))?)?;
        }
        let second = self
            .dl(u)
            .mul(self.dl(v))?
            .mul(self.dl(w))?
            .mul(&self.dl(s).derivative())?;
        Ok(self.critical_residue(&first, 1)? - self.critical_residue(&second, 2)?)
    }

    /// All C_{αβγ} with α ≤ β ≤ γ.
    pub fn c_table(&self) -> Result<BTreeMap<[usize; 3], Poly>> {
        let d = self.dim();
        let mut out = BTreeMap::new();
        for a in 1..=d {
            for b in a..=d {
                for g in b..=d {
                    out.insert([a, b, g], self.c(a, b, g)?);
                }
            }
        }
        Ok(out)
    }
}

fn exp_of(m: &Monomial, i: usize) -> i32 {
    m.get(i).copied().unwrap_or(0)
}

/// Coefficient of ∂_a∂_b∂_g acting on x^μ, as a multiple of x^{μ−e_a−e_b−e_g}.
fn third_factor(mu: &Monomial, idx: [usize; 3]) -> i64 {
    let mut e: Vec<i64> = (0..mu.len().max(idx.iter().max().unwrap() + 1))
        .map(|i| exp_of(mu, i) as i64)
        .collect();
    let mut f = 1;
    for i in idx {
        f *= e[i];
        e[i] -= 1;
    }
    f
}

fn third_derivative(f: &Poly, idx: [usize; 3]) -> Poly {
    f.deriv(idx[0]).deriv(idx[1]).deriv(idx[2])
}

/// Integrates a table of third derivatives (0-based index triples, sorted)
/// to the unique potential without terms of degree ≤ 2. `prefer_last`
/// reverses the order in which triples are tried.
pub fn integrate_third(table: &BTreeMap<[usize; 3], Poly>, prefer_last: bool) -> Result<Poly> {
    let mut coeffs: BTreeMap<Monomial, Q> = BTreeMap::new();
    let entries: Vec<_> = if prefer_last {
        table.iter().rev().collect()
    } else {
        table.iter().collect()
    };
    for (idx, c) in &entries {
        for (mono, coef) in c.terms() {
            let mut mu: Monomial = mono.clone();
            let len = mu.len().max(idx.iter().max().unwrap() + 1);
            mu.resize(len, 0);
            for &i in idx.iter() {
                mu[i] += 1;
            }
            while mu.last() == Some(&0) {
                mu.pop();
            }
            if coeffs.contains_key(&mu) {
                continue;
            }
            let f = third_factor(&mu, **idx);
            if f == 0 {
                continue;
            }
            coeffs.insert(mu, coef / qi(f));
        }
    }
    let pot = coeffs
        .into_iter()
        .fold(Poly::zero(), |acc, (mu, c)| acc + Poly::term(c, mu));
    for (idx, c) in table {
        if third_derivative(&pot, *idx) != *c {
            return Err(Error::IntegrationObstruction(format!(
                "third derivative {:?} does not match",
                idx.map(|i| i + 1)
            )));
        }
    }
    Ok(pot)
}

/// F_{m,n} from the residue formula for its third derivatives.
pub fn build_f(m: u32, n: u32) -> Result<Poly> {
    let sp = Superpotential::new(m, n)?;
    let table: BTreeMap<[usize; 3], Poly> = sp
        .c_table()?
        .into_iter()
        .map(|(k, v)| (k.map(|a| a - 1), v))
        .collect();
    integrate_third(&table, false)
}

/// Closed forms of F_{m,n} for small m, n.
pub fn known_potential(m: u32, n: u32) -> Option<Poly> {
    let t = |c: Q, e: &[i32]| Poly::term(c, e.to_vec());
    let terms: Vec<Poly> = match (m, n) {
        (1, 1) => vec![t(q(1, 12), &[3]), t(q(1, 4), &[1, 2])],
        (2, 1) => vec![
            t(q(1, 8), &[2, 1]),
            t(q(1, 4), &[1, 0, 2]),
            t(q(1, 3840), &[0, 5]),
            t(q(1, 32), &[0, 2, 2]),
        ],
        (3, 1) => vec![
            t(q(1, 12), &[2, 0, 1]),
            t(q(1, 12), &[1, 2]),
            t(q(1, 4), &[1, 0, 0, 2]),
            t(q(1, 1296), &[0, 2, 3]),
            t(q(-1, 216), &[0, 3, 1]),
            t(q(1, 1632960), &[0, 0, 7]),
            t(q(1, 24), &[0, 1, 1, 2]),
            t(q(1, 432), &[0, 0, 3, 2]),
        ],
        (1, 2) => vec![
            t(q(1, 12), &[3]),
            t(q(1, 4), &[1, 1, 1]),
            t(q(1, 768), &[0, 0, 4]),
            t(q(1, 6), &[0, 3, -1]),
        ],
        (2, 2) => vec![
            t(q(1, 8), &[2, 1]),
            t(q(1, 4), &[1, 0, 1, 1]),
            t(q(1, 3840), &[0, 5]),
            t(q(1, 32), &[0, 2, 1, 1]),
            t(q(1, 768), &[0, 1, 0, 4]),
            t(q(1, 6), &[0, 0, 3, -1]),
        ],
        (1, 3) => vec![
            t(q(1, 12), &[3]),
            t(q(1, 6), &[1, 1, 0, 1]),
            t(q(1, 12), &[1, 0, 2]),
            t(q(1, 648), &[0, 0, 1, 3]),
            t(q(1, 2), &[0, 2, 1, -1]),
            t(q(-1, 3), &[0, 1, 3, -2]),
            t(q(1, 10), &[0, 0, 5, -3]),
        ],
        _ => return None,
    };
    Some(terms.into_iter().fold(Poly::zero(), |a, b| a + b))
}

/// Outcome of a structural check on a potential.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub pass: bool,
    pub witness: Option<String>,
}

impl CheckReport {
    fn ok() -> Self {
        CheckReport {
            pass: true,
            witness: None,
        }
    }
    fn fail(w: String) -> Self {
        CheckReport {
            pass: false,
            witness: Some(w),
        }
    }
}

fn names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("w{i}")).collect()
}

/// Every monomial has degree 2 + 1/m and Σ deg(w^α) w^α ∂_α F = (3 − d_m) F.
pub fn check_quasi_homogeneity(f: &Poly, m: u32, n: u32) -> CheckReport {
    let d = (m + n) as usize;
    let weights: Vec<Q> = (1..=d).map(|a| w_degree(a, m, n)).collect();
    let target = qi(2) + q(1, m as i64);
    for (mono, deg) in f.weighted_degrees(&weights) {
        if deg != target {
            return CheckReport::fail(format!(
                "{} has degree {}",
                Poly::monomial_string(&mono, &names(d)),
                q_to_string(&deg)
            ));
        }
    }
    let lie = (0..d).fold(Poly::zero(), |acc, i| {
        acc + (Poly::var(i) * f.deriv(i)).scale(&weights[i])
    });
    if lie != f.scale(&target) {
        return CheckReport::fail("E(F) differs from (3 − d)F".into());
    }
    CheckReport::ok()
}

/// Inverse of a square rational matrix by Gauss–Jordan elimination.
pub fn invert_q(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let d = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| if i == j { qi(1) } else { qi(0) }));
            r
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// WDVV associativity with the metric η_{αβ} = ∂_1∂_α∂_β F, and unity
/// c^β_{1α} = δ^β_α.
pub fn wdvv_check(f: &Poly, m: u32, n: u32) -> CheckReport {
    let d = (m + n) as usize;
    let c = |a: usize, b: usize, g: usize| third_derivative(f, [a, b, g]);
    let mut eta = vec![vec![qi(0); d]; d];
    for a in 0..d {
        for b in 0..d {
            let e = c(0, a, b);
            if e.terms().any(|(mono, _)| !mono.is_empty()) {
                return CheckReport::fail(format!("η_{}{} is not constant", a + 1, b + 1));
            }
            eta[a][b] = e.coeff(&[]);
        }
    }
    let Some(etainv) = invert_q(&eta) else {
        return CheckReport::fail("η is degenerate".into());
    };
    let mut ct = vec![vec![vec![Poly::zero(); d]; d]; d];
    for a in 0..d {
        for b in 0..d {
            for g in 0..d {
                ct[a][b][g] = c(a, b, g);
            }
        }
    }
    // c^σ_{αβ} = η^{σε} c_{εαβ}
    let up = |s: usize, a: usize, b: usize| {
        (0..d).fold(Poly::zero(), |acc, e| {
            if etainv[s][e].is_zero() {
                acc
            } else {
                acc + ct[e][a][b].scale(&etainv[s][e])
            }
        })
    };
    for a in 0..d {
        for s in 0..d {
            let v = up(s, 0, a);
            let want = if s == a { Poly::one() } else { Poly::zero() };
            if v != want {
                return CheckReport::fail(format!("unity fails at c^{}_1{}", s + 1, a + 1));
            }
        }
    }
    let mut cup = vec![vec![vec![Poly::zero(); d]; d]; d];
    for s in 0..d {
        for a in 0..d {
            for b in 0..d {
                cup[s][a][b] = up(s, a, b);
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            for g in 0..d {
                for s in 0..d {
                    let lhs = (0..d).fold(Poly::zero(), |acc, e| {
                        acc + cup[e][a][b].clone() * cup[s][e][g].clone()
                    });
                    let rhs = (0..d).fold(Poly::zero(), |acc, e| {
                        acc + cup[e][a][g].clone() * cup[s][e][b].clone()
                    });
                    if lhs != rhs {
                        return CheckReport::fail(format!(
                            "associativity fails at (α,β,γ,σ) = ({},{},{},{})",
                            a + 1,
                            b + 1,
                            g + 1,
                            s + 1
                        ));
                    }
                }
            }
        }
    }
    CheckReport::ok()
}

/// Drops every monomial involving w^α with α > m.
pub fn restrict_to_first(f: &Poly, m: u32) -> Poly {
    f.terms()
        .filter(|(mono, _)| mono.iter().skip(m as usize).all(|&e| e == 0))
        .fold(Poly::zero(), |acc, (mono, c)| {
            acc + Poly::term(c.clone(), mono.clone())
        })
}

/// ∂_s C_{uvw} is symmetric under all permutations of (s, u, v, w), and
/// agrees with the fourth derivative of `f` when given.
pub fn fourth_derivative_symmetry(
    sp: &Superpotential,
    idx: [usize; 4],
    f: Option<&Poly>,
) -> Result<CheckReport> {
    let base = sp.dc(idx[0], idx[1], idx[2], idx[3])?;
    for p in permutations4() {
        let v = sp.dc(idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]])?;
        if v != base {
            return Ok(CheckReport::fail(format!(
                "∂C differs under permutation {:?}",
                p
            )));
        }
    }
    if let Some(f) = f {
        let d4 = f
            .deriv(idx[0] - 1)
            .deriv(idx[1] - 1)
            .deriv(idx[2] - 1)
            .deriv(idx[3] - 1);
        if d4 != base {
            return Ok(CheckReport::fail("∂C differs from ∂⁴F".into()));
        }
    }
    Ok(CheckReport::ok())
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut s = p;
                    s.sort();
                    if s == [0, 1, 2, 3] {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}
