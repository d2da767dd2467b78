//! Floating-point admissibility diagnostics for polynomial-mode points.

use serde::Serialize;

use super::Point;
use crate::error::Result;
use crate::numeric::laurent_roots;
use crate::scalar::Q;
use crate::series::Series;

/// Margin by which a root must avoid the unit circle.
pub const CIRCLE_MARGIN: f64 = 1e-6;

/// Winding number of f around 0 along the unit circle, and whether any
/// zero lies within `CIRCLE_MARGIN` of the circle.
pub fn winding(f: &Series<Q>) -> Result<(i64, bool)> {
    let roots = laurent_roots(f)?;
    let inside = roots.iter().filter(|r| r.norm() < 1.0).count() as i64;
    let near = roots.iter().any(|r| (r.norm() - 1.0).abs() < CIRCLE_MARGIN);
    Ok((inside + f.bottom().unwrap(), near))
}

#[derive(Clone, Debug, Serialize)]
pub struct Admissibility {
    pub winding_zeta: i64,
    pub dzeta_zero_on_circle: bool,
    /// All zeros of ζ′ inside the disk, so that 1/ζ′ at infinity
    /// converges on the circle.
    pub dzeta_zeros_inside: bool,
    pub dl_zero_on_circle: bool,
    pub winding_a: i64,
    pub winding_ahat: i64,
    pub wronskian_zero_on_circle: bool,
    pub winding_wronskian: i64,
    pub ok: bool,
}

/// Checks the winding and non-vanishing conditions numerically. `ok`
/// covers the conditions defining M_{m,n}; the remaining fields are
/// informational.
pub fn admissibility(pt: &Point<Q>) -> Result<Admissibility> {
    let (wz, zeta_near) = winding(pt.zeta())?;
    let dz = pt.zeta().derivative();
    let dz_roots = laurent_roots(&dz)?;
    let dzeta_zeros_inside = dz_roots.iter().all(|r| r.norm() < 1.0 - CIRCLE_MARGIN);
    let dz_near = dz_roots
        .iter()
        .any(|r| (r.norm() - 1.0).abs() < CIRCLE_MARGIN);
    let (_, dl_near) = winding(&pt.l().derivative())?;
    let (wa, _) = winding(pt.a())?;
    let (wah, _) = winding(pt.ahat())?;
    let d = pt
        .a()
        .mul(&pt.ahat().derivative())?
        .sub(&pt.a().derivative().mul(pt.ahat())?)?;
    let (wd, d_near) = winding(&d)?;
    let ok = wz == 2 && !zeta_near && !dz_near && !dl_near && !d_near;
    Ok(Admissibility {
        winding_zeta: wz,
        dzeta_zero_on_circle: dz_near,
        dzeta_zeros_inside,
        dl_zero_on_circle: dl_near,
        winding_a: wa,
        winding_ahat: wah,
        wronskian_zero_on_circle: d_near,
        winding_wronskian: wd,
        ok,
    })
}
