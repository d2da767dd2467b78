//! Floating-point polynomial roots.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};
use crate::series::Series;

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn durand_kerner(c: &[f64]) -> Option<Vec<Complex64>> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let monic: Vec<f64> = c.iter().map(|a| a / lead).collect();
    let radius = 1.0 + monic[..deg].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let seed = Complex64::from_polar(0.9 * radius, 0.4);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| seed.powu(k as u32 + 1) / radius.powi(k as i32))
        .collect();
    for _ in 0..2000 {
        let mut shift = 0.0f64;
        for i in 0..deg {
            let (p, _) = horner(&monic, roots[i]);
            let denom = (0..deg)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |d, j| d * (roots[i] - roots[j]));
            if denom.norm() == 0.0 {
                roots[i] += Complex64::new(1e-6, 1e-6);
                continue;
            }
            let step = p / denom;
            roots[i] -= step;
            shift = shift.max(step.norm());
        }
        if shift < 1e-15 * radius {
            return Some(roots);
        }
    }
    roots.iter().all(|r| r.is_finite()).then_some(roots)
}

/// Roots of Σ c_k z^k (ascending coefficients, nonzero top).
pub fn poly_roots(c: &[f64]) -> Result<Vec<Complex64>> {
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    let mut schur = Schur::try_new(m.clone(), f64::EPSILON, 10_000);
    if schur.is_none() {
        // Break the symmetry that stalls the unshifted iteration.
        let mut p = DMatrix::<f64>::identity(deg, deg);
        for i in 0..deg {
            for j in (i + 1)..deg {
                p[(i, j)] = 0.1 / ((i + 2 * j + 1) as f64);
            }
        }
        let pinv = p.clone().try_inverse().expect("unit triangular");
        schur = Schur::try_new(&p * m * pinv, f64::EPSILON, 10_000);
    }
    let mut roots: Vec<Complex64> = match schur {
        Some(s) => s.complex_eigenvalues().iter().copied().collect(),
        None => durand_kerner(c)
            .ok_or_else(|| Error::DegeneratePoint("eigenvalue iteration stalled".into()))?,
    };
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = horner(c, *r);
            if dp.norm() == 0.0 {
                break;
            }
            *r -= p / dp;
        }
    }
    Ok(roots)
}

/// Roots of a Laurent polynomial f, i.e. of z^{−bottom} f.
pub fn laurent_roots(f: &Series<Q>) -> Result<Vec<Complex64>> {
    if !f.is_finite() || f.is_exact_zero() {
        return Err(Error::BadSupport(
            "expected a nonzero Laurent polynomial".into(),
        ));
    }
    let (b, t) = (f.bottom().unwrap(), f.top().unwrap());
    let c: Vec<f64> = (b..=t)
        .map(|e| f.coeff_unchecked(e).to_f64().unwrap_or(f64::NAN))
        .collect();
    poly_roots(&c)
}

/// Complex scalars, used only by the floating-point canonical-coordinate
/// checks.
impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_q(q: &Q) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn try_inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(self.inv())
        }
    }
    fn root(&self, k: u32) -> Option<Self> {
        Some(self.powf(1.0 / k as f64))
    }
}

/// Value of a finite Laurent series at z.
pub fn eval_laurent(f: &Series<Complex64>, z: Complex64) -> Complex64 {
    f.terms().fold(Complex64::new(0.0, 0.0), |acc, (&e, c)| {
        acc + c * z.powi(e as i32)
    })
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
pub fn solve_complex(a: Vec<Vec<Complex64>>, b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    let mat = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let rhs = nalgebra::DVector::from_vec(b);
    mat.lu().solve(&rhs).map(|v| v.iter().copied().collect())
}
