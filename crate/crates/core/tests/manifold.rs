use frobkp_core::manifold::diag::admissibility;
use frobkp_core::manifold::*;
use frobkp_core::{q, qi, Scalar, Series, Q};

fn s(terms: &[(i64, Q)]) -> Series<Q> {
    Series::from_terms(terms.iter().cloned())
}

fn p11(v: Q) -> Point<Q> {
    let w = s(&[(1, qi(1))]);
    let l = s(&[(2, qi(1)), (0, v), (-2, q(1, 4))]);
    Point::from_w_l(1, 1, w, l).unwrap()
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

fn p31() -> Point<Q> {
    let w = s(&[(1, qi(1)), (-1, q(1, 9)), (-3, q(-1, 20))]);
    let l = s(&[
        (6, qi(1)),
        (4, q(1, 3)),
        (2, q(1, 4)),
        (0, q(-1, 5)),
        (-2, q(9, 16)),
    ]);
    Point::from_w_l_root(3, 1, w, l, q(3, 4)).unwrap()
}

fn p22() -> Point<Q> {
    let w = s(&[(1, qi(1)), (-1, q(-1, 10)), (-3, q(1, 16))]);
    let l = s(&[
        (4, qi(1)),
        (2, q(2, 7)),
        (0, q(1, 7)),
        (-2, q(1, 5)),
        (-4, q(16, 81)),
    ]);
    Point::from_w_l_root(2, 2, w, l, q(2, 3)).unwrap()
}

fn points() -> Vec<Point<Q>> {
    vec![p11(q(1, 8)), p21(), p12()]
}

fn gram(u: Label, v: Label, m: u32, n: u32) -> Q {
    match (u, v) {
        (Label::T(i), Label::T(k)) if i + k == 0 => q(-1, 2),
        (Label::H(a), Label::H(b)) if a + b == m + 1 => q(1, 2 * m as i64),
        (Label::HHat(a), Label::HHat(b)) if a + b == n + 1 => q(1, 2 * n as i64),
        _ => qi(0),
    }
}

#[test]
fn constructor_example() {
    let pt = p11(q(1, 8));
    assert_eq!(*pt.a(), s(&[(2, qi(1)), (0, q(1, 8)), (-2, q(1, 4))]));
    assert_eq!(*pt.ahat(), s(&[(0, q(1, 8)), (-2, q(1, 4))]));
    let pt = p21();
    assert_eq!(pt.a().sub(pt.ahat()).unwrap(), pt.w().mul(pt.w()).unwrap());
    let bad = Point::from_w_l(
        1,
        1,
        s(&[(1, qi(1)), (0, qi(1))]),
        s(&[(2, qi(1)), (-2, qi(1))]),
    );
    assert!(bad.is_err());
}

#[test]
fn test_points_are_admissible() {
    for pt in points() {
        let d = admissibility(&pt).unwrap();
        assert!(d.ok, "{pt:?}: {d:?}");
    }
}

#[test]
fn flat_coordinates_example() {
    let v = q(1, 8);
    let ch = FlatChart::of_point(&p11(v.clone()), 3).unwrap();
    assert_eq!(ch.h, vec![v]);
    assert_eq!(ch.hhat, vec![qi(1)]);
    for (i, t) in &ch.t {
        assert_eq!(*t, if *i == 1 { qi(2) } else { qi(0) }, "t{i}");
    }
}

#[test]
fn chart_round_trip() {
    let v = q(1, 8);
    let ch = FlatChart::of_point(&p11(v), 1).unwrap();
    let pt = ch.reconstruct(DEFAULT_DEPTH).unwrap();
    assert_eq!(pt.l(), p11(q(1, 8)).l());
    let back = FlatChart::of_point(&pt, 1).unwrap();
    assert_eq!(back, ch);
    // A truncated point with nontrivial t^0, t^{-1}.
    let mut ch = FlatChart::of_point(&p21(), 1).unwrap();
    ch.t.insert(0, q(1, 5));
    ch.t.insert(-1, q(-1, 7));
    let pt = ch.reconstruct(DEFAULT_DEPTH).unwrap();
    assert_eq!(FlatChart::of_point(&pt, 1).unwrap(), ch);
}

#[test]
fn reconstruct_requires_all_coordinates() {
    let mut ch = FlatChart::of_point(&p11(q(1, 8)), 1).unwrap();
    ch.h.clear();
    assert!(ch.reconstruct(8).is_err());
}

#[test]
fn unity_vectors() {
    for pt in points() {
        let e = coordinate_vector(&pt, Label::H(pt.m())).unwrap();
        assert_eq!(e.xi, Series::one());
        assert_eq!(e.xihat, Series::one());
        let es = unity_covector(&pt);
        assert!(eta_map(&pt, &es).unwrap().agrees_with(&e));
        assert!(eta_inverse(&pt, &e).unwrap().agrees_with(&es));
        let dh1 = coordinate_covector(&pt, Label::H(1)).unwrap();
        assert!(dh1.agrees_with(&es.scale(&qi(2 * pt.m() as i64))));
    }
}

#[test]
fn t1_vector_on_simplest_point() {
    let pt = p11(q(1, 8));
    let x = coordinate_vector(&pt, Label::T(1)).unwrap();
    assert!(x.xi.is_exact_zero());
    assert_eq!(x.xihat, s(&[(2, qi(1))]));
}

#[test]
fn k_matrix_m2() {
    let pt = p21();
    let k = k_matrix(&pt);
    let v2 = pt.a().coeff_unchecked(2);
    assert_eq!(k, vec![vec![qi(4), qi(0)], vec![v2 * qi(2), qi(4)]]);
}

#[test]
fn gram_and_duality() {
    for pt in points() {
        let (m, n) = (pt.m(), pt.n());
        let labels = Label::all(m, n, 3);
        for &u in &labels {
            let xu = coordinate_vector(&pt, u).unwrap();
            let du = coordinate_covector(&pt, u).unwrap();
            for &v in &labels {
                let xv = coordinate_vector(&pt, v).unwrap();
                let g = metric(&pt, &xu, &xv).unwrap();
                assert_eq!(g, gram(u, v, m, n), "({m},{n}) <{u},{v}>");
                let d = pair(&du, &xv).unwrap();
                assert_eq!(d, if u == v { qi(1) } else { qi(0) }, "d{u}({v})");
            }
            let om = eta_inverse(&pt, &xu).unwrap();
            for &v in &labels {
                let xv = coordinate_vector(&pt, v).unwrap();
                assert_eq!(pair(&om, &xv).unwrap(), gram(u, v, m, n));
            }
        }
    }
}

fn random_cov(m: u32, n: u32, seed: i64) -> CoTangentVec<Q> {
    let (m, n) = (m as i64, n as i64);
    let om =
        Series::from_terms((0..4).map(|k| (1 - 2 * m + 2 * k, q((seed * 7 + k * 3) % 11 - 5, 3))));
    let oh =
        Series::from_terms((0..4).map(|k| (2 * n - 1 - 2 * k, q((seed * 5 + k * 2) % 9 - 4, 5))));
    CoTangentVec::new(
        om.with_parity(frobkp_core::Parity::Odd).unwrap(),
        oh.with_parity(frobkp_core::Parity::Odd).unwrap(),
    )
}

fn random_vec(m: u32, n: u32, seed: i64) -> TangentVec<Q> {
    let (m, n) = (m as i64, n as i64);
    let xi = Series::from_terms((0..4).map(|k| (2 * m - 2 - 2 * k, q((seed * 3 + k) % 7 - 3, 2))));
    let xh = Series::from_terms((0..4).map(|k| (-2 * n + 2 * k, q((seed * 2 + k * 5) % 7 - 2, 3))));
    TangentVec::new(xi, xh)
}

#[test]
fn eta_round_trips() {
    for pt in points() {
        for seed in 0..4 {
            let om = random_cov(pt.m(), pt.n(), seed);
            let back = eta_inverse(&pt, &eta_map(&pt, &om).unwrap()).unwrap();
            assert!(back.agrees_with(&om), "{back:?} vs {om:?}");
            let xi = random_vec(pt.m(), pt.n(), seed);
            let fwd = eta_map(&pt, &eta_inverse(&pt, &xi).unwrap()).unwrap();
            assert!(fwd.agrees_with(&xi));
            let o2 = random_cov(pt.m(), pt.n(), seed + 5);
            let a = pair(&om, &eta_map(&pt, &o2).unwrap()).unwrap();
            let b = pair(&o2, &eta_map(&pt, &om).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn cotangent_algebra() {
    for pt in points() {
        let (m, n) = (pt.m(), pt.n());
        let es = unity_covector(&pt);
        for seed in 0..3 {
            let o1 = random_cov(m, n, seed);
            let o2 = random_cov(m, n, seed + 3);
            let o3 = random_cov(m, n, seed + 7);
            assert!(cot_product(&pt, &es, &o1).unwrap().agrees_with(&o1));
            let a = cot_product(&pt, &o1, &o2).unwrap();
            let b = cot_product(&pt, &o2, &o1).unwrap();
            assert!(a.agrees_with(&b));
            let l = pair(&a, &eta_map(&pt, &o3).unwrap()).unwrap();
            let r = pair(
                &o1,
                &eta_map(&pt, &cot_product(&pt, &o2, &o3).unwrap()).unwrap(),
            )
            .unwrap();
            assert_eq!(l, r);
            let x = cot_product(&pt, &a, &o3).unwrap();
            let y = cot_product(&pt, &o1, &cot_product(&pt, &o2, &o3).unwrap()).unwrap();
            assert!(x.agrees_with(&y));
        }
    }
}

#[test]
fn tangent_algebra() {
    for pt in points() {
        let (m, n) = (pt.m(), pt.n());
        let e = coordinate_vector(&pt, Label::H(m)).unwrap();
        let labels = Label::all(m, n, 1);
        for &u in &labels {
            let xu = coordinate_vector(&pt, u).unwrap();
            assert!(tan_product(&pt, &e, &xu).unwrap().agrees_with(&xu));
        }
        let xs: Vec<_> = labels
            .iter()
            .map(|&u| coordinate_vector(&pt, u).unwrap())
            .collect();
        for (a, x1) in xs.iter().enumerate() {
            for x2 in &xs[a..] {
                let p12 = tan_product(&pt, x1, x2).unwrap();
                for x3 in &xs {
                    let l = tan_product(&pt, &p12, x3).unwrap();
                    let r = tan_product(&pt, x1, &tan_product(&pt, x2, x3).unwrap()).unwrap();
                    assert!(l.agrees_with(&r));
                    let c1 = metric(&pt, &p12, x3).unwrap();
                    let c2 = metric(&pt, &tan_product(&pt, x1, x3).unwrap(), x2).unwrap();
                    assert_eq!(c1, c2);
                }
            }
        }
    }
}

#[test]
fn c_tensor_closed_form_matches() {
    for pt in [p11(q(1, 8)), p21(), p12(), p31(), p22()] {
        let (m, n) = (pt.m(), pt.n());
        let labels = Label::all(m, n, 2);
        for (a, &u) in labels.iter().enumerate() {
            for (b, &v) in labels.iter().enumerate().skip(a) {
                for &s in &labels[b..] {
                    let d = c_direct(&pt, u, v, s).unwrap();
                    let c = c_closed(&pt, u, v, s).unwrap();
                    assert_eq!(d, c, "({m},{n}) c({u},{v},{s})");
                }
            }
        }
        for &u in &labels {
            for &v in &labels {
                let c = c_direct(&pt, Label::H(m), u, v).unwrap();
                assert_eq!(c, gram(u, v, m, n));
            }
        }
    }
}

#[test]
fn euler_field_forms_agree() {
    assert_eq!(
        s(&[(2, qi(1)), (0, q(3, 7))]).euler_shift(1).unwrap(),
        s(&[(0, q(3, 7))])
    );
    let pt = p11(q(3, 7));
    assert_eq!(
        euler_apply(&pt, Component::A).unwrap(),
        s(&[(0, q(3, 7)), (-2, q(1, 2))])
    );
    for pt in points() {
        let e = euler_field(&pt).unwrap();
        assert!(e.agrees_with(&euler_field_v(&pt).unwrap()));
        let (m, n) = (pt.m(), pt.n());
        let ch = FlatChart::of_point(&pt, 2).unwrap();
        for u in Label::all(m, n, 2) {
            let du = coordinate_covector(&pt, u).unwrap();
            let got = pair(&du, &e).unwrap();
            assert_eq!(got, degree(u, m, n) * ch.get(u).unwrap(), "E({u})");
        }
    }
}

#[test]
fn euler_degrees_match_charge() {
    for (m, n) in [(1, 1), (2, 1), (1, 2), (3, 2)] {
        for u in Label::all(m, n, 3) {
            for v in Label::all(m, n, 3) {
                if !gram(u, v, m, n).is_zero() {
                    assert_eq!(degree(u, m, n) + degree(v, m, n), qi(2) - charge(m));
                }
            }
        }
    }
}

#[test]
fn intersection_form() {
    for pt in points() {
        let (m, n) = (pt.m(), pt.n());
        for seed in 0..3 {
            let o1 = random_cov(m, n, seed);
            let o2 = random_cov(m, n, seed + 4);
            let a = intersection_cot(&pt, &o1, &o2).unwrap();
            assert_eq!(a, intersection_cot(&pt, &o2, &o1).unwrap());
            let g2 = g_forward(&pt, &o2).unwrap();
            assert_eq!(a, pair(&o1, &g2).unwrap());
            let back = g_inverse(&pt, &g2).unwrap();
            assert!(back.agrees_with(&o2), "{back:?} vs {o2:?}");
            let g1 = g_forward(&pt, &o1).unwrap();
            let t = intersection_tan(&pt, &g1, &g2).unwrap();
            assert_eq!(t, a);
            assert_eq!(intersection_tan_residue(&pt, &g1, &g2).unwrap(), a);
        }
        let mm = m as i64;
        for i in -2..=mm {
            for k in -2..=mm {
                let dv = |i: i64| {
                    CoTangentVec::new(
                        Series::monomial(qi(1), 1 - 2 * i),
                        Series::zero()
                            .with_parity(frobkp_core::Parity::Odd)
                            .unwrap(),
                    )
                };
                let got = intersection_cot(&pt, &dv(i), &dv(k)).unwrap();
                assert_eq!(
                    got,
                    intersection_kernel_coeff(&pt, i, k).unwrap(),
                    "(dv{i}, dv{k})"
                );
            }
        }
    }
}
