use frobkp_core::dual::Dual;
use frobkp_core::hierarchy::*;
use frobkp_core::manifold::*;
use frobkp_core::{q, qi, Parity, Poly, Scalar, Series, Q};

fn s(terms: &[(i64, Q)]) -> Series<Q> {
    Series::from_terms(terms.iter().cloned())
}

/// c + d·x
fn lin(c: Q, d: Q) -> Poly {
    Poly::constant(c) + x().scale(&d)
}

fn ls(terms: Vec<(i64, Poly)>) -> LoopSeries {
    Series::from_terms(terms)
}

fn loop11() -> LoopPoint {
    let w = ls(vec![(1, Poly::one()), (-1, lin(q(1, 8), q(1, 5)))]);
    let l = ls(vec![
        (2, Poly::one()),
        (0, lin(q(1, 3), q(1, 7))),
        (-2, Poly::constant(q(1, 4))),
    ]);
    Point::from_w_l_root(1, 1, w, l, Poly::constant(q(1, 2)))
        .unwrap()
        .with_depth(8)
}

fn loop21() -> LoopPoint {
    let w = ls(vec![
        (1, Poly::one()),
        (-1, lin(q(1, 8), q(-1, 6))),
        (-3, lin(qi(0), q(1, 9))),
    ]);
    let l = ls(vec![
        (4, Poly::one()),
        (2, lin(q(1, 3), q(1, 4))),
        (0, lin(q(-1, 5), q(1, 3))),
        (-2, Poly::constant(q(9, 16))),
    ]);
    Point::from_w_l_root(2, 1, w, l, Poly::constant(q(3, 4)))
        .unwrap()
        .with_depth(8)
}

fn p21() -> Point<Q> {
    let w = s(&[(1, qi(1)), (-1, q(1, 8))]);
    let l = s(&[(4, qi(1)), (2, q(1, 3)), (0, q(-1, 5)), (-2, q(9, 16))]);
    Point::from_w_l_root(2, 1, w, l, q(3, 4)).unwrap()
}

fn p12() -> Point<Q> {
    let w = s(&[(1, qi(1)), (-1, q(-1, 10)), (-3, q(1, 16))]);
    let l = s(&[(2, qi(1)), (0, q(1, 7)), (-2, q(1, 5)), (-4, q(16, 81))]);
    Point::from_w_l_root(1, 2, w, l, q(2, 3)).unwrap()
}

fn labels(m: u32, n: u32) -> Vec<Label> {
    Label::all(m, n, 2)
}

#[test]
fn bracket_is_antisymmetric_and_leibniz() {
    let pt = loop21();
    let (f, g, h) = (pt.a().clone(), pt.ahat().clone(), pt.w().clone());
    let fg = bracket(&f, &g).unwrap();
    assert_eq!(fg, bracket(&g, &f).unwrap().neg());
    let lhs = bracket(&f, &g.mul(&h).unwrap()).unwrap();
    let rhs = bracket(&f, &g)
        .unwrap()
        .mul(&h)
        .unwrap()
        .add(&g.mul(&bracket(&f, &h).unwrap()).unwrap())
        .unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn initial_densities_are_flat_coordinates() {
    for pt in [p21(), p12()] {
        let (m, n) = (pt.m(), pt.n());
        let chart = FlatChart::of_point(&pt, 3).unwrap();
        for i in -3..=3 {
            let th = frobkp_core::hierarchy::theta_density(&pt, Label::T(i), 0).unwrap();
            assert_eq!(th, -chart.t[&-i].clone() * q(1, 2), "t^{i}");
        }
        for j in 1..=m {
            let th = theta_density(&pt, Label::H(j), 0).unwrap();
            assert_eq!(
                th,
                chart.get(Label::H(m + 1 - j)).unwrap() * q(1, 2 * m as i64)
            );
        }
        for k in 1..=n {
            let th = theta_density(&pt, Label::HHat(k), 0).unwrap();
            assert_eq!(
                th,
                chart.get(Label::HHat(n + 1 - k)).unwrap() * q(1, 2 * n as i64)
            );
        }
    }
}

fn dual_point(pt: &Point<Q>, dw: &Series<Q>, dl: &Series<Q>) -> Point<Dual<Q>> {
    let mk = |v: &Series<Q>, d: &Series<Q>| {
        let mut terms: Vec<(i64, Dual<Q>)> = Vec::new();
        let keys: std::collections::BTreeSet<i64> =
            v.terms().chain(d.terms()).map(|(e, _)| *e).collect();
        for e in keys {
            terms.push((e, Dual::new(v.coeff_unchecked(e), d.coeff_unchecked(e))));
        }
        Series::from_terms(terms)
    };
    Point::from_w_l_root(
        pt.m(),
        pt.n(),
        mk(pt.w(), dw),
        mk(pt.l(), dl),
        Dual::constant(pt.rho().clone()),
    )
    .unwrap()
}

#[test]
fn gradients_pair_with_density_variations() {
    for pt in [p21(), p12()] {
        let (m, n) = (pt.m() as i64, pt.n() as i64);
        let dw = s(&[(-1, q(1, 3)), (-3, q(-2, 7))]);
        let dl = s(&[(2 * m - 2, q(1, 5)), (0, q(-3, 4)), (2 - 2 * n, q(2, 9))]);
        let dz = pt.w().mul(&dw).unwrap().scale_q(&qi(2));
        let xi = dz.minus().unwrap().add(&dl).unwrap();
        let xih = dz.plus().unwrap().neg().add(&dl).unwrap();
        let dpt = dual_point(&pt, &dw, &dl);
        for u in labels(pt.m(), pt.n()) {
            for p in 0..=2 {
                let th = theta_density(&dpt, u, p + 1).unwrap();
                let g = hamiltonian_gradient(&pt, u, p as i64).unwrap();
                let pair =
                    g.om.mul(&xi)
                        .unwrap()
                        .add(&g.omhat.mul(&xih).unwrap())
                        .unwrap()
                        .residue(frobkp_core::At::Circle)
                        .unwrap();
                assert_eq!(pair, th.d, "{u:?} p={p}");
            }
        }
    }
}

#[test]
fn casimirs_of_first_bracket() {
    for pt in [loop11(), loop21()] {
        for u in labels(pt.m(), pt.n()) {
            let g = hamiltonian_gradient(&pt, u, -1).unwrap();
            let v = poisson1(&pt, &g).unwrap();
            assert!(v.agrees_with(&TangentVec::zero()), "{u:?}");
        }
    }
}

#[test]
fn symbols_are_the_metrics() {
    for pt in [p21(), p12()] {
        let lp = lift(&pt).unwrap();
        let (m, n) = (pt.m() as i64, pt.n() as i64);
        for seed in 0..5i64 {
            let om = Series::from_terms(
                (0..3).map(|k| (1 - 2 * m + 2 * k, q((seed * 7 + k * 3) % 11 - 5, 3))),
            )
            .with_parity(Parity::Odd)
            .unwrap();
            let oh = Series::from_terms(
                (0..3).map(|k| (2 * n - 1 - 2 * k, q((seed * 5 + k * 2) % 9 - 4, 5))),
            )
            .with_parity(Parity::Odd)
            .unwrap();
            let c = CoTangentVec::new(om, oh);
            let xc = CoTangentVec::new(c.om.map(|v| x().scale(v)), c.omhat.map(|v| x().scale(v)));
            let lifted = |t: TangentVec<Q>| {
                TangentVec::new(
                    t.xi.map(|v| Poly::constant(v.clone())),
                    t.xihat.map(|v| Poly::constant(v.clone())),
                )
            };
            let p1 = poisson1(&lp, &xc).unwrap();
            assert!(p1.agrees_with(&lifted(eta_map(&pt, &c).unwrap())));
            let p2 = poisson2(&lp, &xc).unwrap();
            assert!(p2.agrees_with(&lifted(g_forward(&pt, &c).unwrap())));
        }
        assert!(poisson1(&lp, &CoTangentVec::zero())
            .unwrap()
            .agrees_with(&TangentVec::zero()));
    }
}

#[test]
fn unity_flow_is_translation() {
    for pt in [loop11(), loop21()] {
        let f = lax_rhs(&pt, Label::H(pt.m()), 0).unwrap();
        assert!(f.xi.agrees_with(&dx(pt.a())));
        assert!(f.xihat.agrees_with(&dx(pt.ahat())));
    }
}

#[test]
fn flows_keep_window_shape() {
    for pt in [loop11(), loop21()] {
        let (m, n) = (pt.m() as i64, pt.n() as i64);
        for u in labels(pt.m(), pt.n()) {
            for p in 0..=1 {
                let f = lax_rhs(&pt, u, p).unwrap();
                assert!(f.xi.top().is_none_or(|t| t <= 2 * m - 2), "{u:?}");
                assert!(f.xihat.bottom().is_none_or(|b| b >= -2 * n), "{u:?}");
            }
        }
    }
}

#[test]
fn recursion_factors() {
    assert_eq!(mu(Label::T(0), 1, 1) + q(3, 2), q(3, 2));
    assert_eq!(mu(Label::H(1), 1, 1), qi(0));
}

#[test]
fn bi_hamiltonian_recursion() {
    for pt in [loop11(), loop21()] {
        for u in labels(pt.m(), pt.n()) {
            for p in 1..=2 {
                let r = recursion_check(&pt, u, p).unwrap();
                assert!(r.pass, "{:?}", r);
            }
        }
    }
}

#[test]
fn bkp_bi_hamiltonian_form() {
    for pt in [loop11(), loop21()] {
        for k in [1, 3, 5] {
            for t in [BkpTime::S(k), BkpTime::SHat(k)] {
                let r = bkp_biham_check(&pt, t).unwrap();
                assert!(r.pass, "{:?}", r);
            }
        }
    }
}

#[test]
fn principal_flows_are_bkp_flows() {
    for pt in [loop11(), loop21()] {
        let (m, n) = (pt.m(), pt.n());
        for u in Label::finite_labels(m, n) {
            for p in 0..=2 {
                let (t, c) = bkp_time_of(u, p, m, n).unwrap();
                let lhs = lax_rhs(&pt, u, p).unwrap();
                let rhs = bkp_rhs(&pt, t).unwrap().scale(&Poly::constant(c));
                assert!(lhs.agrees_with(&rhs), "{u:?} p={p}");
            }
        }
    }
}

#[test]
fn recursion_detects_wrong_flow() {
    let pt = loop21();
    for u in labels(2, 1) {
        let g = hamiltonian_gradient(&pt, u, 1).unwrap();
        let p1 = poisson1(&pt, &g).unwrap();
        let lax = lax_rhs(&pt, u, 1).unwrap();
        assert!(
            !lax.xi.is_exact_zero() || !lax.xihat.is_exact_zero(),
            "{u:?}"
        );
        let wrong = lax.scale(&Poly::constant(q(3, 2)));
        assert!(!p1.agrees_with(&wrong), "{u:?}");
    }
}
