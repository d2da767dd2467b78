//! JSON forms of series, flat charts and points.
//!
//! A series is `{"parity": "even|odd|mixed", "side": "inf|zero|finite",
//! "coeffs": {"e": "n/d"}, "trusted": [lo, hi]}`. A point file is either
//! `{"m", "n", "mode": "poly", "w", "l"}` (optionally with `"rho"`) or
//! `{"chart": {...}, "depth": K}`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result, Window};
use crate::manifold::{FlatChart, Mode, Point};
use crate::scalar::{parse_q, q_to_string, Q};
use crate::series::{Parity, Series, Side};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn q_json(x: &Q) -> Value {
    Value::String(q_to_string(x))
}

fn q_from(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s).ok_or_else(|| perr(format!("bad rational {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(crate::scalar::qi)
            .ok_or_else(|| perr(format!("non-integer number {n}"))),
        _ => Err(perr("expected a rational")),
    }
}

pub fn series_to_json(s: &Series<Q>) -> Value {
    let parity = match s.parity() {
        Parity::Even => "even",
        Parity::Odd => "odd",
        Parity::Mixed => "mixed",
    };
    let side = match s.side() {
        Side::Infinity => "inf",
        Side::Zero => "zero",
        Side::Finite => "finite",
    };
    let coeffs: serde_json::Map<String, Value> =
        s.terms().map(|(e, c)| (e.to_string(), q_json(c))).collect();
    let w = s.window();
    json!({
        "parity": parity,
        "side": side,
        "coeffs": coeffs,
        "trusted": [w.lo, w.hi],
    })
}

pub fn series_from_json(v: &Value) -> Result<Series<Q>> {
    let parity = match v.get("parity").and_then(Value::as_str).unwrap_or("mixed") {
        "even" => Parity::Even,
        "odd" => Parity::Odd,
        "mixed" => Parity::Mixed,
        p => return Err(perr(format!("unknown parity {p:?}"))),
    };
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_object)
        .ok_or_else(|| perr("series needs \"coeffs\""))?;
    let terms = coeffs
        .iter()
        .map(|(e, c)| {
            let e: i64 = e.parse().map_err(|_| perr(format!("bad exponent {e:?}")))?;
            Ok((e, q_from(c)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = |i: usize| -> Result<Option<i64>> {
        match v.get("trusted").and_then(|t| t.get(i)) {
            None | Some(Value::Null) => Ok(None),
            Some(x) => x
                .as_i64()
                .map(Some)
                .ok_or_else(|| perr("bad trusted bound")),
        }
    };
    let window = Window {
        lo: bound(0)?,
        hi: bound(1)?,
    };
    let side = v.get("side").and_then(Value::as_str).unwrap_or("finite");
    let consistent = match side {
        "finite" => window.lo.is_none() && window.hi.is_none(),
        "inf" => window.lo.is_some() && window.hi.is_none(),
        "zero" => window.lo.is_none() && window.hi.is_some(),
        s => return Err(perr(format!("unknown side {s:?}"))),
    };
    if !consistent {
        return Err(perr("side and trusted window disagree"));
    }
    Series::with_window(parity, terms, window)
}

pub fn chart_to_json(c: &FlatChart<Q>) -> Value {
    let t: serde_json::Map<String, Value> =
        c.t.iter()
            .map(|(i, v)| (i.to_string(), q_json(v)))
            .collect();
    json!({
        "m": c.m,
        "n": c.n,
        "t": t,
        "h": c.h.iter().map(q_json).collect::<Vec<_>>(),
        "hhat": c.hhat.iter().map(q_json).collect::<Vec<_>>(),
    })
}

fn get_u32(v: &Value, k: &str) -> Result<u32> {
    v.get(k)
        .and_then(Value::as_u64)
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| perr(format!("missing or bad {k:?}")))
}

fn q_list(v: &Value, k: &str) -> Result<Vec<Q>> {
    v.get(k)
        .and_then(Value::as_array)
        .ok_or_else(|| perr(format!("missing {k:?}")))?
        .iter()
        .map(q_from)
        .collect()
}

pub fn chart_from_json(v: &Value) -> Result<FlatChart<Q>> {
    let mut t = BTreeMap::new();
    if let Some(obj) = v.get("t").and_then(Value::as_object) {
        for (i, c) in obj {
            let i: i64 = i.parse().map_err(|_| perr(format!("bad t index {i:?}")))?;
            t.insert(i, q_from(c)?);
        }
    }
    Ok(FlatChart {
        m: get_u32(v, "m")?,
        n: get_u32(v, "n")?,
        t,
        h: q_list(v, "h")?,
        hhat: q_list(v, "hhat")?,
    })
}

/// Serializes a polynomial-mode point.
pub fn point_to_json(pt: &Point<Q>) -> Result<Value> {
    if pt.mode() != Mode::Polynomial {
        return Err(perr("only polynomial-mode points serialize as (w, l)"));
    }
    Ok(json!({
        "m": pt.m(),
        "n": pt.n(),
        "mode": "poly",
        "w": series_to_json(pt.w()),
        "l": series_to_json(pt.l()),
        "rho": q_json(pt.rho()),
        "depth": pt.depth(),
    }))
}

pub fn point_from_json(v: &Value) -> Result<Point<Q>> {
    if let Some(chart) = v.get("chart") {
        let depth = v.get("depth").and_then(Value::as_i64).unwrap_or(16);
        return chart_from_json(chart)?.reconstruct(depth);
    }
    let mode = v.get("mode").and_then(Value::as_str).unwrap_or("poly");
    if mode != "poly" {
        return Err(perr("truncated points are given by a flat chart"));
    }
    let (m, n) = (get_u32(v, "m")?, get_u32(v, "n")?);
    let field = |k: &str| v.get(k).ok_or_else(|| perr(format!("missing {k:?}")));
    let w = series_from_json(field("w")?)?;
    let l = series_from_json(field("l")?)?;
    let pt = match v.get("rho") {
        Some(r) => Point::from_w_l_root(m, n, w, l, q_from(r)?)?,
        None => Point::from_w_l(m, n, w, l)?,
    };
    Ok(match v.get("depth").and_then(Value::as_i64) {
        Some(d) => pt.with_depth(d),
        None => pt,
    })
}

pub fn read_point(path: &std::path::Path) -> Result<Point<Q>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| perr(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| perr(e.to_string()))?;
    point_from_json(&v)
}
