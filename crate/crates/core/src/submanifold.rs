//! The finite Frobenius manifolds M_{m,n} given by the superpotential
//! l(z) = z^{2m} + … + v̂ z^{−2n}.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hierarchy::bracket;
use crate::manifold::{FlatChart, Point};
use crate::numeric::{eval_laurent, poly_roots, solve_complex};
use crate::poly::Poly;
use crate::potential::{flat_label, invert_q, w_degree, CheckReport, Superpotential};
use crate::scalar::{gamma_ratio, q, qi, Scalar, Q};
use crate::series::{At, Parity, Series, Side};

/// A point of M_{m,n}, or of the polynomial B_m stratum when `rho` is `None`.
#[derive(Clone)]
pub struct LPoint<C> {
    m: u32,
    n: u32,
    l: Series<C>,
    rho: Option<C>,
    w: Option<Vec<C>>,
    depth: i64,
}

impl<C: Scalar> std::fmt::Debug for LPoint<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LPoint")
            .field("m", &self.m)
            .field("n", &self.n)
            .field("l", &self.l)
            .finish()
    }
}

fn check_shape<C: Scalar>(m: u32, l: &Series<C>, bottom: i64) -> Result<()> {
    if !l.is_finite() || l.support_parity() != Parity::Even {
        return Err(Error::BadSupport(
            "l must be an even Laurent polynomial".into(),
        ));
    }
    let (lo, hi) = (l.bottom().unwrap_or(0), l.top().unwrap_or(0));
    if hi != 2 * m as i64 || l.coeff_unchecked(hi) != C::one() {
        return Err(Error::BadLeadingTerm(
            "l must be z^{2m} + lower terms".into(),
        ));
    }
    if lo < bottom {
        return Err(Error::BadSupport(format!("l has a term below z^{bottom}")));
    }
    Ok(())
}

impl<C: Scalar> LPoint<C> {
    pub const DEFAULT_DEPTH: i64 = 16;

    /// `rho^{2n}` must equal the coefficient of z^{−2n}.
    pub fn new(m: u32, n: u32, l: Series<C>, rho: C) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::BadSupport("m and n must be positive".into()));
        }
        check_shape(m, &l, -2 * n as i64)?;
        let bottom = l.coeff_unchecked(-2 * n as i64);
        if bottom.is_zero() {
            return Err(Error::ZeroBottomCoefficient);
        }
        if rho.pow(2 * n) != bottom {
            return Err(Error::RootMismatch);
        }
        Ok(LPoint {
            m,
            n,
            l: l.with_parity(Parity::Even)?,
            rho: Some(rho),
            w: None,
            depth: Self::DEFAULT_DEPTH,
        })
    }

    /// A point with l_− = 0; only the flows with α ≤ m are defined.
    pub fn polynomial(m: u32, n: u32, l: Series<C>) -> Result<Self> {
        check_shape(m, &l, 0)?;
        Ok(LPoint {
            m,
            n,
            l: l.with_parity(Parity::Even)?,
            rho: None,
            w: None,
            depth: Self::DEFAULT_DEPTH,
        })
    }

    /// The point with flat coordinates `w`.
    pub fn from_flat(sp: &Superpotential, w: &[C]) -> Result<Self> {
        let (m, n) = (sp.m(), sp.n());
        if w.len() != (m + n) as usize {
            return Err(Error::BadSupport("wrong number of flat coordinates".into()));
        }
        let l = sp.l().map(|c| c.eval(w).unwrap_or_else(C::zero));
        let rho = w[(m + n) as usize - 1].scale(&q(1, 2 * n as i64));
        if rho.is_zero() {
            return Err(Error::ZeroBottomCoefficient);
        }
        let l = Series::from_terms(l.terms().map(|(&e, c)| (e, c.clone())));
        Ok(LPoint {
            m,
            n,
            l: l.with_parity(Parity::Even)?,
            rho: Some(rho),
            w: Some(w.to_vec()),
            depth: Self::DEFAULT_DEPTH,
        })
    }

    pub fn with_depth(mut self, depth: i64) -> Self {
        self.depth = depth;
        self
    }

    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn l(&self) -> &Series<C> {
        &self.l
    }
    pub fn rho(&self) -> Option<&C> {
        self.rho.as_ref()
    }

    /// Flat coordinates w^1..w^{m+n}.
    pub fn flat(&self) -> Result<Vec<C>> {
        if let Some(w) = &self.w {
            return Ok(w.clone());
        }
        let rho = self.rho.clone().ok_or(Error::ZeroBottomCoefficient)?;
        let z = Series::monomial(C::one(), 1);
        let pt = Point::from_w_l_root(self.m, self.n, z, self.l.clone(), rho)?;
        let chart = FlatChart::of_point(&pt, 0)?;
        Ok((1..=(self.m + self.n) as usize)
            .map(|a| {
                chart
                    .get(flat_label(a, self.m, self.n))
                    .expect("finite label")
            })
            .collect())
    }

    /// l^{p + (2α−1)/2m} at infinity (α ≤ m) or l^{p + (2(α−m)−1)/2n} at
    /// zero (α > m), trusted beyond z^{−1}.
    pub fn l_power(&self, alpha: usize, p: u32) -> Result<Series<C>> {
        let (m, n) = (self.m as i64, self.n as i64);
        let a = alpha as i64;
        if a <= m {
            let e = qi(p as i64) + q(2 * a - 1, 2 * m);
            let lead = 2 * m * p as i64 + 2 * a - 1;
            self.l
                .fractional_power(&e, &C::one(), Side::Infinity, lead + self.depth)
        } else {
            let rho = self.rho.as_ref().ok_or(Error::ZeroBottomCoefficient)?;
            let k = a - m;
            let e = qi(p as i64) + q(2 * k - 1, 2 * n);
            let den = e.denom().to_u32().expect("small exponent");
            let root = rho.pow(2 * self.n / den);
            let lead = 2 * n * p as i64 + 2 * k - 1;
            self.l
                .fractional_power(&e, &root, Side::Zero, lead + self.depth)
        }
    }

    /// −(res_∞ + res_0) num/l′, the sum of residues at the zeros of l′.
    pub fn critical_residue(&self, num: &Series<C>) -> Result<C> {
        if num.is_exact_zero() {
            return Ok(C::zero());
        }
        let dl = self.l.derivative();
        let (m, n) = (self.m as i64, self.n as i64);
        let top = num.top().unwrap_or(0);
        let bottom = num.bottom().unwrap_or(0);
        let ri = num
            .mul(&dl.inv(Side::Infinity, (top + 2 - 2 * m).max(0) + 2)?)?
            .residue(At::Infinity)?;
        let r0 = num
            .mul(&dl.inv(Side::Zero, (-bottom - 2 - 2 * n).max(0) + 2)?)?
            .residue(At::Zero)?;
        Ok(-(ri + r0))
    }
}

/// ⟨∂₁, ∂₂⟩ = res_{l′=0} ∂₁l ∂₂l / l′.
pub fn metric_fin<C: Scalar>(lp: &LPoint<C>, d1: &Series<C>, d2: &Series<C>) -> Result<C> {
    lp.critical_residue(&d1.mul(d2)?)
}

/// c(∂₁, ∂₂, ∂₃) = res_{l′=0} ∂₁l ∂₂l ∂₃l / l′.
pub fn c_fin<C: Scalar>(
    lp: &LPoint<C>,
    d1: &Series<C>,
    d2: &Series<C>,
    d3: &Series<C>,
) -> Result<C> {
    lp.critical_residue(&d1.mul(d2)?.mul(d3)?)
}

/// ∂l/∂w^α at the point.
pub fn coordinate_vector<C: Scalar>(
    sp: &Superpotential,
    lp: &LPoint<C>,
    alpha: usize,
) -> Result<Series<C>> {
    let w = lp.flat()?;
    let terms = sp
        .dl(alpha)
        .terms()
        .map(|(&e, c)| {
            c.eval(&w)
                .map(|v| (e, v))
                .ok_or(Error::ZeroBottomCoefficient)
        })
        .collect::<Result<Vec<_>>>()?;
    Series::from_terms(terms).with_parity(Parity::Even)
}

/// A critical point z of l with value u = l(z) and l″(z).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CriticalPoint {
    pub z: [f64; 2],
    pub u: [f64; 2],
    pub l2: [f64; 2],
}

fn c2(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn key(z: Complex64) -> (f64, f64) {
    (z.re, z.im)
}

/// Canonical coordinates u_i = l(z_i), one per pair ±z_i of zeros of l′,
/// the representative having positive real part, or positive imaginary
/// part when z_i is imaginary.
pub fn canonical_fin(lp: &LPoint<Complex64>, tol: f64) -> Result<Vec<CriticalPoint>> {
    let (m, n) = (lp.m as i64, lp.n as i64);
    let dl = lp.l.derivative();
    let coeffs: Vec<f64> = (-2 * n - 1..=2 * m - 1)
        .map(|e| dl.coeff_unchecked(e))
        .map(|c| if c.im.abs() > tol { f64::NAN } else { c.re })
        .collect();
    if coeffs.iter().any(|c| c.is_nan()) {
        return Err(Error::BadSupport(
            "canonical coordinates need real coefficients".into(),
        ));
    }
    let roots = poly_roots(&coeffs)?;
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    for (i, a) in roots.iter().enumerate() {
        if a.norm() < tol {
            return Err(Error::RepeatedCriticalValue);
        }
        for b in &roots[i + 1..] {
            if (a - b).norm() < tol.sqrt() * scale {
                return Err(Error::RepeatedCriticalValue);
            }
        }
    }
    let eps = tol.sqrt() * scale;
    let mut used = vec![false; roots.len()];
    let mut reps: Vec<Complex64> = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                (roots[a] + roots[i])
                    .norm()
                    .partial_cmp(&(roots[b] + roots[i]).norm())
                    .expect("finite roots")
            })
            .ok_or(Error::RepeatedCriticalValue)?;
        if (roots[partner] + roots[i]).norm() > eps {
            return Err(Error::BadSupport(
                "zeros of l′ do not come in ± pairs".into(),
            ));
        }
        used[partner] = true;
        let z = (roots[i] - roots[partner]) * 0.5;
        let positive = if z.re.abs() > eps {
            z.re > 0.0
        } else {
            z.im > 0.0
        };
        reps.push(if positive { z } else { -z });
    }
    if reps.len() != (m + n) as usize {
        return Err(Error::RepeatedCriticalValue);
    }
    reps.sort_by(|a, b| key(*a).partial_cmp(&key(*b)).expect("finite roots"));
    let d2 = dl.derivative();
    Ok(reps
        .into_iter()
        .map(|z| CriticalPoint {
            z: c2(z),
            u: c2(eval_laurent(&lp.l, z)),
            l2: c2(eval_laurent(&d2, z)),
        })
        .collect())
}

/// Numerical certificate of semisimplicity at a point with real flat
/// coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalReport {
    pub critical: Vec<CriticalPoint>,
    /// max |c(∂u_i, ∂u_j, ∂u_k) − δ_{ijk} 2/l″(z_i)|
    pub idempotency_error: f64,
    /// max |⟨∂u_i, ∂u_j⟩ − δ_{ij} 2/l″(z_i)|
    pub metric_error: f64,
    /// |Σ ∂u_i − e|
    pub unity_error: f64,
    /// max |E(u_i) − u_i|
    pub euler_error: f64,
    /// max difference between −(res_∞ + res_0) and the sum over critical
    /// points, on the coordinate metric
    pub residue_error: f64,
    pub pass: bool,
}

fn to_c(s: &Series<Poly>, w: &[Complex64]) -> Series<Complex64> {
    s.map(|c| c.eval(w).unwrap_or(Complex64::new(f64::NAN, 0.0)))
}

pub fn canonical_check(sp: &Superpotential, w: &[f64], tol: f64) -> Result<CanonicalReport> {
    let (m, n) = (sp.m() as i64, sp.n() as i64);
    let d = (m + n) as usize;
    let wc: Vec<Complex64> = w.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let lp = LPoint::from_flat(sp, &wc)?;
    let crit = canonical_fin(&lp, tol)?;
    let zs: Vec<Complex64> = crit
        .iter()
        .map(|c| Complex64::new(c.z[0], c.z[1]))
        .collect();
    let l2: Vec<Complex64> = crit
        .iter()
        .map(|c| Complex64::new(c.l2[0], c.l2[1]))
        .collect();
    let us: Vec<Complex64> = crit
        .iter()
        .map(|c| Complex64::new(c.u[0], c.u[1]))
        .collect();
    // ∂l/∂u_i: even, support [−2n, 2m−2], equal to δ_ij at z_j.
    let exps: Vec<i64> = (0..d as i64).map(|k| -2 * n + 2 * k).collect();
    let vand: Vec<Vec<Complex64>> = zs
        .iter()
        .map(|z| exps.iter().map(|&e| z.powi(e as i32)).collect())
        .collect();
    let mut idem: Vec<Series<Complex64>> = Vec::new();
    for i in 0..d {
        let rhs: Vec<Complex64> = (0..d)
            .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let c = solve_complex(vand.clone(), rhs).ok_or(Error::RepeatedCriticalValue)?;
        idem.push(Series::from_terms(exps.iter().copied().zip(c)));
    }
    let diag: Vec<Complex64> = l2.iter().map(|v| Complex64::new(2.0, 0.0) / v).collect();
    let mut metric_error: f64 = 0.0;
    let mut idempotency_error: f64 = 0.0;
    for i in 0..d {
        for j in i..d {
            let g = metric_fin(&lp, &idem[i], &idem[j])?;
            let want = if i == j {
                diag[i]
            } else {
                Complex64::new(0.0, 0.0)
            };
            metric_error = metric_error.max((g - want).norm() / diag[i].norm().max(1.0));
            for k in j..d {
                let c = c_fin(&lp, &idem[i], &idem[j], &idem[k])?;
                let want = if i == j && j == k {
                    diag[i]
                } else {
                    Complex64::new(0.0, 0.0)
                };
                idempotency_error =
                    idempotency_error.max((c - want).norm() / diag[i].norm().max(1.0));
            }
        }
    }
    let e = to_c(sp.dl(1), &wc);
    let sum = idem
        .iter()
        .try_fold(Series::zero(), |acc: Series<Complex64>, f| acc.add(f))?;
    let unity_error = sum
        .sub(&e)?
        .terms()
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    let dls: Vec<Series<Complex64>> = (1..=d).map(|a| to_c(sp.dl(a), &wc)).collect();
    let mut euler_error: f64 = 0.0;
    for (i, z) in zs.iter().enumerate() {
        let eu = (1..=d).fold(Complex64::new(0.0, 0.0), |acc, a| {
            let deg = w_degree(a, sp.m(), sp.n()).to_f64().unwrap_or(f64::NAN);
            acc + wc[a - 1] * deg * eval_laurent(&dls[a - 1], *z)
        });
        euler_error = euler_error.max((eu - us[i]).norm() / us[i].norm().max(1.0));
    }
    let mut residue_error: f64 = 0.0;
    for a in 0..d {
        for b in a..d {
            let g = metric_fin(&lp, &dls[a], &dls[b])?;
            let direct = zs
                .iter()
                .zip(&l2)
                .fold(Complex64::new(0.0, 0.0), |acc, (z, s)| {
                    acc + eval_laurent(&dls[a], *z) * eval_laurent(&dls[b], *z) * 2.0 / s
                });
            residue_error = residue_error.max((g - direct).norm() / g.norm().max(1.0));
        }
    }
    let pass = [
        idempotency_error,
        metric_error,
        unity_error,
        euler_error,
        residue_error,
    ]
    .iter()
    .all(|e| *e <= tol);
    Ok(CanonicalReport {
        critical: crit,
        idempotency_error,
        metric_error,
        unity_error,
        euler_error,
        residue_error,
        pass,
    })
}

/// Exact canonical data at a point whose critical points have rational
/// squares s_i = z_i².
#[derive(Clone, Debug, Serialize)]
pub struct ExactCanonical {
    pub s: Vec<String>,
    pub u: Vec<String>,
    pub l2: Vec<String>,
    pub eta: Vec<String>,
    pub idempotent: bool,
}

fn divisors(n: &num_bigint::BigInt) -> Option<Vec<num_bigint::BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k.into());
            if k * k != n {
                out.push((n / k).into());
            }
        }
        k += 1;
    }
    Some(out)
}

/// Rational roots of Σ c_k s^k (ascending), with multiplicity one.
fn rational_roots(c: &[Q]) -> Option<Vec<Q>> {
    let lcm = c
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = c
        .iter()
        .map(|x| (x * Q::from(lcm.clone())).to_integer())
        .collect();
    let a0 = ints.iter().find(|x| !num_traits::Zero::is_zero(*x))?;
    let ad = ints.last()?;
    let mut roots = Vec::new();
    for p in divisors(a0)? {
        for qd in divisors(ad)? {
            for sign in [1, -1] {
                let r = Q::new(p.clone() * sign, qd.clone());
                if roots.contains(&r) {
                    continue;
                }
                let v = c.iter().rev().fold(qi(0), |acc, x| acc * &r + x);
                if v == qi(0) {
                    roots.push(r);
                }
            }
        }
    }
    Some(roots)
}

/// Canonical coordinates in exact arithmetic, when every z_i² is rational.
/// Returns `None` otherwise.
pub fn canonical_exact(lp: &LPoint<Q>) -> Result<Option<ExactCanonical>> {
    let (m, n) = (lp.m as i64, lp.n as i64);
    let d = (m + n) as usize;
    // l = L(z²); s^{n+1} L′(s) has ascending coefficients (e/2) l_e at s^{e/2+n}.
    let mut poly = vec![qi(0); d + 1];
    for (&e, c) in lp.l.terms() {
        if e != 0 {
            poly[(e / 2 + n) as usize] = c * q(e, 2);
        }
    }
    let Some(mut ss) = rational_roots(&poly) else {
        return Ok(None);
    };
    ss.retain(|s| *s != qi(0));
    if ss.len() != d {
        return Ok(None);
    }
    ss.sort();
    let big_l = |s: &Q, k: usize| -> Q {
        // k-th derivative of L at s
        lp.l.terms().fold(qi(0), |acc, (&e, c)| {
            let mut coef = c.clone();
            let mut p = e / 2;
            for _ in 0..k {
                coef *= qi(p);
                p -= 1;
            }
            acc + coef * pow_q(s, p)
        })
    };
    let u: Vec<Q> = ss.iter().map(|s| big_l(s, 0)).collect();
    let l2: Vec<Q> = ss
        .iter()
        .map(|s| big_l(s, 1) * qi(2) + s * big_l(s, 2) * qi(4))
        .collect();
    let ks: Vec<i64> = (0..d as i64).map(|k| k - n).collect();
    let vand: Vec<Vec<Q>> = ss
        .iter()
        .map(|s| ks.iter().map(|&k| pow_q(s, k)).collect())
        .collect();
    let inv = invert_q(&vand).ok_or(Error::RepeatedCriticalValue)?;
    // column i of the inverse gives the coefficients of the i-th idempotent
    let idem: Vec<Series<Q>> = (0..d)
        .map(|i| {
            Series::from_terms(
                ks.iter()
                    .enumerate()
                    .map(|(r, &k)| (2 * k, inv[r][i].clone())),
            )
        })
        .collect();
    let mut eta = Vec::new();
    let mut ok = true;
    for i in 0..d {
        let g = metric_fin(lp, &idem[i], &idem[i])?;
        if g != qi(2) / &l2[i] {
            ok = false;
        }
        eta.push(g);
        for j in 0..d {
            for k in 0..d {
                let c = c_fin(lp, &idem[i], &idem[j], &idem[k])?;
                let want = if i == j && j == k {
                    eta[i].clone()
                } else {
                    qi(0)
                };
                if i == j && j == k {
                    continue;
                }
                if c != want {
                    ok = false;
                }
            }
        }
        if c_fin(lp, &idem[i], &idem[i], &idem[i])? != eta[i] {
            ok = false;
        }
    }
    let s = |v: &[Q]| v.iter().map(crate::scalar::q_to_string).collect();
    Ok(Some(ExactCanonical {
        s: s(&ss),
        u: s(&u),
        l2: s(&l2),
        eta: s(&eta),
        idempotent: ok,
    }))
}

fn pow_q(s: &Q, k: i64) -> Q {
    if k >= 0 {
        (0..k).fold(qi(1), |acc, _| acc * s)
    } else {
        (0..-k).fold(qi(1), |acc, _| acc / s)
    }
}

/// θ_{α,p} on M_{m,n} as a function of the flat coordinates.
pub fn theta_fin(sp: &Superpotential, alpha: usize, p: u32) -> Result<Poly> {
    let (m, n) = (sp.m(), sp.n());
    let w = (m + n) as usize;
    let (mm, nn) = (m as i64, n as i64);
    let a = alpha as i64;
    let l = sp.l();
    if a <= mm {
        let s = q(2 * a - 1, 2 * mm);
        let e = qi(p as i64) + &s;
        let lead = 2 * mm * p as i64 + 2 * a - 1;
        let r = l
            .fractional_power(&e, &Poly::one(), Side::Infinity, lead + 2)?
            .residue(At::Infinity)?;
        Ok(-r.scale(&(gamma_ratio(&s, p) / qi(2 * mm))))
    } else {
        let s = q(2 * (a - mm) - 1, 2 * nn);
        let e = qi(p as i64) + &s;
        let den = e.denom().to_u32().expect("small exponent");
        let rho = Poly::var(w - 1).scale(&q(1, 2 * nn));
        let root = rho.pow(2 * n / den);
        let lead = 2 * nn * p as i64 + 2 * (a - mm) - 1;
        let r = l
            .fractional_power(&e, &root, Side::Zero, lead + 2)?
            .residue(At::Zero)?;
        Ok(r.scale(&(gamma_ratio(&s, p) / qi(2 * nn))))
    }
}

/// ∂²θ_p/∂w^λ∂w^μ = c^ε_{λμ} ∂θ_{p−1}/∂w^ε, with c from the potential f.
pub fn recursion_identity(f: &Poly, m: u32, n: u32, th_p: &Poly, th_prev: &Poly) -> CheckReport {
    let d = (m + n) as usize;
    let c3 = |a: usize, b: usize, g: usize| f.deriv(a).deriv(b).deriv(g);
    let eta: Vec<Vec<Q>> = (0..d)
        .map(|a| (0..d).map(|b| c3(0, a, b).coeff(&[])).collect())
        .collect();
    let Some(etainv) = invert_q(&eta) else {
        return fail("η is degenerate".into());
    };
    let grad: Vec<Poly> = (0..d).map(|e| th_prev.deriv(e)).collect();
    // v_σ = η^{σε} ∂_ε θ_{p−1}
    let v: Vec<Poly> = (0..d)
        .map(|s| (0..d).fold(Poly::zero(), |acc, e| acc + grad[e].scale(&etainv[s][e])))
        .collect();
    for lam in 0..d {
        for mu in lam..d {
            let lhs = th_p.deriv(lam).deriv(mu);
            let rhs = (0..d).fold(Poly::zero(), |acc, s| acc + c3(s, lam, mu) * v[s].clone());
            if lhs != rhs {
                return fail(format!("fails at (λ, μ) = ({}, {})", lam + 1, mu + 1));
            }
        }
    }
    CheckReport {
        pass: true,
        witness: None,
    }
}

fn fail(w: String) -> CheckReport {
    CheckReport {
        pass: false,
        witness: Some(w),
    }
}

/// Recursion for θ_{α,p}, p ≥ 1, on M_{m,n}.
pub fn theta_recursion_fin(
    sp: &Superpotential,
    f: &Poly,
    alpha: usize,
    p: u32,
) -> Result<CheckReport> {
    if p == 0 {
        return Err(Error::BadSupport("recursion needs p ≥ 1".into()));
    }
    let th_p = theta_fin(sp, alpha, p)?;
    let th_prev = theta_fin(sp, alpha, p - 1)?;
    Ok(recursion_identity(f, sp.m(), sp.n(), &th_p, &th_prev))
}

fn gamma_coef(lp_m: u32, lp_n: u32, alpha: usize, p: u32) -> Q {
    let (m, n) = (lp_m as i64, lp_n as i64);
    let a = alpha as i64;
    if a <= m {
        gamma_ratio(&q(2 * a - 1, 2 * m), p) / qi(2 * m)
    } else {
        gamma_ratio(&q(2 * (a - m) - 1, 2 * n), p) / qi(2 * n)
    }
}

/// A_{α,p} of the reduced hierarchy, already projected.
pub fn a_alpha_p<C: Scalar>(lp: &LPoint<C>, alpha: usize, p: u32) -> Result<Series<C>> {
    let c = gamma_coef(lp.m, lp.n, alpha, p);
    let pw = lp.l_power(alpha, p)?;
    if alpha <= lp.m as usize {
        Ok(pw.plus()?.scale_q(&c))
    } else {
        Ok(pw.minus()?.scale_q(&-c))
    }
}

/// ∂l/∂T^{α,p} = {A_{α,p}, l} on a loop in M_{m,n}.
pub fn reduced_lax(lp: &LPoint<Poly>, alpha: usize, p: u32) -> Result<Series<Poly>> {
    if alpha == 0 || alpha > (lp.m + lp.n) as usize {
        return Err(Error::BadSupport(format!("no flat coordinate w^{alpha}")));
    }
    bracket(&a_alpha_p(lp, alpha, p)?, &lp.l)
}

/// The ambient Lax flow of the matching h/ĥ label at a = â = l, written
/// with the unprojected A_{u,p}: ({−(A)_−, l}, {(A)_+, l}). Both
/// components equal the reduced flow.
pub fn reduced_matches_ambient(lp: &LPoint<Poly>, alpha: usize, p: u32) -> Result<bool> {
    let big = lp
        .l_power(alpha, p)?
        .scale_q(&gamma_coef(lp.m, lp.n, alpha, p));
    let xi = bracket(&big.minus()?.neg(), &lp.l)?;
    let xihat = bracket(&big.plus()?, &lp.l)?;
    let red = reduced_lax(lp, alpha, p)?;
    Ok(red.agrees_with(&xi) && red.agrees_with(&xihat))
}

/// On a loop with l_− = 0, the flows with α ≤ m stay within even
/// polynomials of degree ≤ 2m − 2.
pub fn bm_closure(lp: &LPoint<Poly>, alpha: usize, p: u32) -> Result<bool> {
    if alpha > lp.m as usize {
        return Err(Error::BadSupport("B_m flows have α ≤ m".into()));
    }
    let f = reduced_lax(lp, alpha, p)?;
    Ok(f.bottom().is_none_or(|b| b >= 0) && f.top().is_none_or(|t| t <= 2 * lp.m as i64 - 2))
}
