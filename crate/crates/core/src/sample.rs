//! Seeded random test points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::manifold::diag::admissibility;
use crate::manifold::{FlatChart, Mode, Point};
use crate::poly::Poly;
use crate::scalar::{q, qi, Q};
use crate::series::Series;

const RHOS: [(i64, i64); 5] = [(1, 2), (2, 3), (3, 4), (1, 1), (4, 3)];

fn small(rng: &mut ChaCha8Rng, bound: i64, den: i64) -> Q {
    q(rng.gen_range(-bound..=bound), den)
}

fn candidate(m: u32, n: u32, rng: &mut ChaCha8Rng) -> Result<Point<Q>> {
    let (mm, nn) = (m as i64, n as i64);
    let w = Series::from_terms([(1, qi(1)), (-1, small(rng, 8, 64)), (-3, small(rng, 8, 64))]);
    let (a, b) = RHOS[rng.gen_range(0..RHOS.len())];
    let rho = q(a, b);
    let mut terms = vec![(2 * mm, qi(1)), (-2 * nn, rho.pow(2 * n as i32))];
    for k in (1 - nn)..mm {
        terms.push((2 * k, small(rng, 4, 8)));
    }
    Point::from_w_l_root(m, n, w, Series::from_terms(terms), rho)
}

/// A random admissible point: w = z + c₁z^{−1} + c₃z^{−3} with |c| ≤ 1/8,
/// and l with unit leading coefficient and bottom coefficient ρ^{2n}.
/// Truncated mode rebuilds the point from its flat chart with t^1, t^0,
/// t^{−1} and the h, ĥ coordinates.
pub fn gen_point(m: u32, n: u32, seed: u64, mode: Mode) -> Result<Point<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((m as u64) << 32) ^ ((n as u64) << 48));
    for _ in 0..200 {
        let pt = candidate(m, n, &mut rng)?;
        if !admissibility(&pt)?.ok {
            continue;
        }
        return match mode {
            Mode::Polynomial => Ok(pt),
            Mode::Truncated => {
                let mut chart = FlatChart::of_point(&pt, 1)?;
                chart.t.retain(|&i, _| i <= 1);
                chart.reconstruct(pt.depth())
            }
        };
    }
    Err(Error::DegeneratePoint("no admissible sample found".into()))
}

/// A loop through a random point: the free coefficients of w and l get
/// random polynomial dependence on x of degree ≤ `x_degree`. The bottom
/// coefficient of l stays constant.
pub fn gen_loop_point(m: u32, n: u32, seed: u64, x_degree: u32) -> Result<Point<Poly>> {
    let base = gen_point(m, n, seed, Mode::Polynomial)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9) ^ 0x5bd1);
    let mut vary = |c: &Q, fixed: bool| -> Poly {
        let mut p = Poly::constant(c.clone());
        if !fixed {
            for d in 1..=x_degree {
                let coef = small(&mut rng, 6, 24);
                p = p + Poly::term(coef, vec![d as i32]);
            }
        }
        p
    };
    let (mm, nn) = (m as i64, n as i64);
    let w = Series::from_terms(
        base.w()
            .terms()
            .map(|(&e, c)| (e, vary(c, e == 1)))
            .collect::<Vec<_>>(),
    );
    let l = Series::from_terms(
        (-nn..=mm)
            .map(|k| {
                let e = 2 * k;
                let c = base.l().coeff_unchecked(e);
                (e, vary(&c, e == 2 * mm || e == -2 * nn))
            })
            .collect::<Vec<_>>(),
    );
    Ok(Point::from_w_l_root(m, n, w, l, Poly::constant(base.rho().clone()))?.with_depth(8))
}
