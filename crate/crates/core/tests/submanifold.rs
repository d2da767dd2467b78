use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frobkp_core::hierarchy::x;
use frobkp_core::manifold::{self, Label, Point};
use frobkp_core::potential::{build_f, flat_label, invert_q, Superpotential};
use frobkp_core::submanifold::*;
use frobkp_core::{q, qi, Error, Poly, Scalar, Series, Q};

fn s(terms: &[(i64, Q)]) -> Series<Q> {
    Series::from_terms(terms.iter().cloned())
}

fn lp21() -> LPoint<Q> {
    LPoint::new(
        2,
        1,
        s(&[(4, qi(1)), (2, q(1, 3)), (0, q(-1, 5)), (-2, q(9, 16))]),
        q(3, 4),
    )
    .unwrap()
}

fn lp12() -> LPoint<Q> {
    LPoint::new(
        1,
        2,
        s(&[(2, qi(1)), (0, q(1, 7)), (-2, q(1, 5)), (-4, q(16, 81))]),
        q(2, 3),
    )
    .unwrap()
}

fn lp22() -> LPoint<Q> {
    let l = s(&[
        (4, qi(1)),
        (2, q(2, 7)),
        (0, q(1, 7)),
        (-2, q(1, 5)),
        (-4, q(16, 81)),
    ]);
    LPoint::new(2, 2, l, q(2, 3)).unwrap()
}

fn eta(a: usize, b: usize, m: u32, n: u32) -> Q {
    let (m, n) = (m as usize, n as usize);
    if a <= m && b <= m && a + b == m + 1 {
        q(1, 2 * m as i64)
    } else if a > m && b > m && a + b == 2 * m + n + 1 {
        q(1, 2 * n as i64)
    } else {
        qi(0)
    }
}

#[test]
fn flat_metric_and_unity() {
    for lp in [lp21(), lp12(), lp22()] {
        let (m, n) = (lp.m(), lp.n());
        let sp = Superpotential::new(m, n).unwrap();
        let d = (m + n) as usize;
        let vs: Vec<_> = (1..=d)
            .map(|a| coordinate_vector(&sp, &lp, a).unwrap())
            .collect();
        assert_eq!(vs[0], Series::one());
        for a in 0..d {
            for b in 0..d {
                let g = metric_fin(&lp, &vs[a], &vs[b]).unwrap();
                assert_eq!(g, eta(a + 1, b + 1, m, n));
                assert_eq!(c_fin(&lp, &vs[0], &vs[a], &vs[b]).unwrap(), g);
            }
        }
    }
}

#[test]
fn flat_coordinates_round_trip() {
    for lp in [lp21(), lp12(), lp22()] {
        let sp = Superpotential::new(lp.m(), lp.n()).unwrap();
        let w = lp.flat().unwrap();
        let back = LPoint::from_flat(&sp, &w).unwrap();
        assert_eq!(back.l(), lp.l());
    }
}

#[test]
fn c_tensor_is_third_derivative_of_potential() {
    for lp in [lp21(), lp12()] {
        let (m, n) = (lp.m(), lp.n());
        let sp = Superpotential::new(m, n).unwrap();
        let f = build_f(m, n).unwrap();
        let w = lp.flat().unwrap();
        let d = (m + n) as usize;
        let vs: Vec<_> = (1..=d)
            .map(|a| coordinate_vector(&sp, &lp, a).unwrap())
            .collect();
        for a in 0..d {
            for b in a..d {
                for g in b..d {
                    let c = c_fin(&lp, &vs[a], &vs[b], &vs[g]).unwrap();
                    let want = f.deriv(a).deriv(b).deriv(g).eval(&w).unwrap();
                    assert_eq!(c, want, "({},{},{})", a + 1, b + 1, g + 1);
                }
            }
        }
    }
}

#[test]
fn agrees_with_ambient_manifold() {
    let w = s(&[(1, qi(1)), (-1, q(1, 8))]);
    let l = s(&[(4, qi(1)), (2, q(1, 3)), (0, q(-1, 5)), (-2, q(9, 16))]);
    let pt = Point::from_w_l_root(2, 1, w, l, q(3, 4)).unwrap();
    let lp = lp21();
    let sp = Superpotential::new(2, 1).unwrap();
    let labels: Vec<Label> = (1..=3).map(|a| flat_label(a, 2, 1)).collect();
    for (i, u) in labels.iter().enumerate() {
        let amb = manifold::coordinate_vector(&pt, *u).unwrap();
        assert!(amb
            .xi
            .agrees_with(&coordinate_vector(&sp, &lp, i + 1).unwrap()));
    }
    for u in &labels {
        for v in &labels {
            let xu = manifold::coordinate_vector(&pt, *u).unwrap().xi;
            let xv = manifold::coordinate_vector(&pt, *v).unwrap().xi;
            let g = manifold::metric(
                &pt,
                &manifold::coordinate_vector(&pt, *u).unwrap(),
                &manifold::coordinate_vector(&pt, *v).unwrap(),
            )
            .unwrap();
            assert_eq!(metric_fin(&lp, &xu, &xv).unwrap(), g);
            for t in &labels {
                let xt = manifold::coordinate_vector(&pt, *t).unwrap().xi;
                let c = manifold::c_closed(&pt, *u, *v, *t).unwrap();
                assert_eq!(c_fin(&lp, &xu, &xv, &xt).unwrap(), c, "{u:?} {v:?} {t:?}");
            }
        }
    }
}

#[test]
fn canonical_worked_example() {
    let lp = LPoint::new(1, 1, s(&[(2, qi(1)), (-2, qi(1))]), qi(1)).unwrap();
    let ex = canonical_exact(&lp).unwrap().unwrap();
    assert_eq!(ex.s, vec!["-1", "1"]);
    assert_eq!(ex.u, vec!["-2", "2"]);
    assert_eq!(ex.l2, vec!["8", "8"]);
    assert_eq!(ex.eta, vec!["1/4", "1/4"]);
    assert!(ex.idempotent);
}

#[test]
fn canonical_float_worked_example() {
    let l = Series::from_terms([
        (2, Complex64::new(1.0, 0.0)),
        (-2, Complex64::new(1.0, 0.0)),
    ]);
    let lp = LPoint::new(1, 1, l, Complex64::new(1.0, 0.0)).unwrap();
    let crit = canonical_fin(&lp, 1e-9).unwrap();
    let mut us: Vec<f64> = crit.iter().map(|c| c.u[0]).collect();
    us.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((us[0] + 2.0).abs() < 1e-9 && (us[1] - 2.0).abs() < 1e-9);
    for c in &crit {
        assert!((c.l2[0] - 8.0).abs() < 1e-9 && c.l2[1].abs() < 1e-9);
    }
}

#[test]
fn canonical_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let sp = Superpotential::new(m, n).unwrap();
        for _ in 0..5 {
            let d = (m + n) as usize;
            let mut w: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            w[d - 1] = rng.gen_range(0.5..1.5);
            let r = canonical_check(&sp, &w, 1e-9).unwrap();
            assert!(r.pass, "({m},{n}) {w:?}: {r:?}");
        }
    }
}

#[test]
fn repeated_critical_value_rejected() {
    let c = |v: f64| Complex64::new(v, 0.0);
    let l = Series::from_terms([(4, c(1.0)), (2, c(-3.0)), (0, c(0.5)), (-2, c(-1.0))]);
    let lp = LPoint::new(2, 1, l, Complex64::new(0.0, 1.0)).unwrap();
    assert!(matches!(
        canonical_fin(&lp, 1e-9),
        Err(Error::RepeatedCriticalValue)
    ));
}

#[test]
fn theta_recursion() {
    for (m, n) in [(1, 1), (2, 1), (1, 2)] {
        let sp = Superpotential::new(m, n).unwrap();
        let f = build_f(m, n).unwrap();
        for a in 1..=(m + n) as usize {
            for p in 1..=2 {
                let r = theta_recursion_fin(&sp, &f, a, p).unwrap();
                assert!(r.pass, "({m},{n}) α={a} p={p}: {:?}", r.witness);
            }
        }
    }
}

#[test]
fn theta_recursion_negative_control() {
    let sp = Superpotential::new(1, 1).unwrap();
    let f = build_f(1, 1).unwrap();
    for a in 1..=2 {
        let th2 = theta_fin(&sp, a, 2).unwrap().scale(&q(3, 2));
        let th1 = theta_fin(&sp, a, 1).unwrap();
        assert!(!recursion_identity(&f, 1, 1, &th2, &th1).pass);
    }
}

fn lin(c: Q, d: Q) -> Poly {
    Poly::constant(c) + x().scale(&d)
}

fn loop21() -> LPoint<Poly> {
    let l = Series::from_terms(vec![
        (4, Poly::one()),
        (2, lin(q(1, 3), q(1, 4))),
        (0, lin(q(-1, 5), q(1, 3))),
        (-2, Poly::constant(q(9, 16))),
    ]);
    LPoint::new(2, 1, l, Poly::constant(q(3, 4)))
        .unwrap()
        .with_depth(8)
}

fn loop12() -> LPoint<Poly> {
    let l = Series::from_terms(vec![
        (2, Poly::one()),
        (0, lin(q(1, 7), q(-1, 2))),
        (-2, lin(q(1, 5), q(1, 3))),
        (-4, Poly::constant(q(16, 81))),
    ]);
    LPoint::new(1, 2, l, Poly::constant(q(2, 3)))
        .unwrap()
        .with_depth(8)
}

#[test]
fn reduced_flows_match_ambient_formulas() {
    for lp in [loop21(), loop12()] {
        for a in 1..=(lp.m() + lp.n()) as usize {
            for p in 0..=2 {
                assert!(reduced_matches_ambient(&lp, a, p).unwrap(), "α={a} p={p}");
            }
        }
        let unity = reduced_lax(&lp, 1, 0).unwrap();
        assert_eq!(unity, frobkp_core::hierarchy::dx(lp.l()));
    }
}

#[test]
fn primary_flows_from_c_tensor() {
    for lp in [loop21(), loop12()] {
        let (m, n) = (lp.m(), lp.n());
        let d = (m + n) as usize;
        let sp = Superpotential::new(m, n).unwrap();
        let f = build_f(m, n).unwrap();
        let w = lp.flat().unwrap();
        let dw: Vec<Poly> = w.iter().map(|v| v.deriv(0)).collect();
        let eta: Vec<Vec<Q>> = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| f.deriv(0).deriv(a).deriv(b).coeff(&[]))
                    .collect()
            })
            .collect();
        let etainv = invert_q(&eta).unwrap();
        let dl: Vec<_> = (1..=d)
            .map(|g| coordinate_vector(&sp, &lp, g).unwrap())
            .collect();
        for a in 0..d {
            let mut rhs: Series<Poly> = Series::zero();
            for g in 0..d {
                let mut v = Poly::zero();
                for s in 0..d {
                    if etainv[g][s].is_zero() {
                        continue;
                    }
                    for b in 0..d {
                        let c = f.deriv(s).deriv(a).deriv(b).eval(&w).unwrap();
                        v = v + (c * dw[b].clone()).scale(&etainv[g][s]);
                    }
                }
                rhs = rhs.add(&dl[g].scale(&v)).unwrap();
            }
            let lhs = reduced_lax(&lp, a + 1, 0).unwrap();
            assert!(lhs.agrees_with(&rhs), "α={}", a + 1);
        }
    }
}

#[test]
fn bm_flows_preserve_polynomial_stratum() {
    let l = Series::from_terms(vec![
        (4, Poly::one()),
        (2, lin(q(1, 3), qi(1))),
        (0, Poly::constant(qi(-1)) + (x() * x()).scale(&q(1, 2))),
    ]);
    let lp = LPoint::polynomial(2, 1, l).unwrap();
    for a in 1..=2 {
        for p in 0..=1 {
            assert!(bm_closure(&lp, a, p).unwrap(), "α={a} p={p}");
            assert!(!reduced_lax(&lp, a, p).unwrap().is_exact_zero());
        }
    }
    assert!(bm_closure(&lp, 3, 0).is_err());
}
