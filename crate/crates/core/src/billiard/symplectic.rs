use rayon::prelude::*;
use serde::Serialize;

use super::{BilliardError, PhaseMap};
use crate::curve::Curve;
use crate::phase::{PhasePoint, DEFAULT_MARGIN};

/// Central-difference step in both `s` and `w`; a second pass at half the
/// step feeds one Richardson extrapolation.
pub const FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectRow {
    pub s: f64,
    pub theta: f64,
    pub out_s: Option<f64>,
    pub out_theta: Option<f64>,
    /// `|det J − 1|`, absent for excluded points.
    pub defect: Option<f64>,
    /// Empty when the point is valid; otherwise why it was excluded.
    pub flags: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    pub rows: Vec<DefectRow>,
    pub max_defect: f64,
    pub mean_defect: f64,
    pub evaluated: usize,
    pub excluded: usize,
}

/// `|det J − 1|` of `map` in the `(s, w)` chart at each grid point, where
/// `J` comes from central differences. Denominators use the chart
/// coordinates of the perturbed inputs as actually represented, so the
/// identity map has defect exactly zero.
pub fn symplectic_defect<M: PhaseMap + ?Sized>(
    curve: &Curve,
    map: &M,
    grid: &[PhasePoint],
) -> DefectReport {
    let rows: Vec<DefectRow> = grid
        .par_iter()
        .map(|&p| defect_at(curve, map, p, FD_STEP))
        .collect();
    let vals: Vec<f64> = rows.iter().filter_map(|r| r.defect).collect();
    let max_defect = vals.iter().copied().fold(0.0, f64::max);
    let mean_defect = if vals.is_empty() {
        0.0
    } else {
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    DefectReport {
        evaluated: vals.len(),
        excluded: rows.len() - vals.len(),
        rows,
        max_defect,
        mean_defect,
    }
}

fn defect_at<M: PhaseMap + ?Sized>(curve: &Curve, map: &M, p: PhasePoint, h: f64) -> DefectRow {
    let mut row = DefectRow {
        s: p.s,
        theta: p.theta,
        out_s: None,
        out_theta: None,
        defect: None,
        flags: String::new(),
    };
    let w = p.w();
    if w.abs() + h > 1.0 - DEFAULT_MARGIN {
        row.flags = "near-tangency".into();
        return row;
    }
    let stencil = [
        PhasePoint::new(p.s + h, p.theta),
        PhasePoint::new(p.s - h, p.theta),
        PhasePoint::from_sw(p.s, w + h),
        PhasePoint::from_sw(p.s, w - h),
    ];
    let centre = match map.apply(p) {
        Ok(q) => q,
        Err(e) => {
            row.flags = format!("map-failed: {e}");
            return row;
        }
    };
    row.out_s = Some(centre.s);
    row.out_theta = Some(centre.theta);
    let coarse = jacobian(curve, map, &stencil);
    let fine = jacobian(curve, map, &half_stencil(p, h));
    match (coarse, fine) {
        (Ok(c), Ok(f)) => {
            // one Richardson level removes the O(h²) truncation term
            let j: Vec<f64> = c.iter().zip(f).map(|(c, f)| (4.0 * f - c) / 3.0).collect();
            row.defect = Some((j[0] * j[3] - j[1] * j[2] - 1.0).abs());
        }
        (Err(e), _) | (_, Err(e)) => row.flags = format!("stencil-failed: {e}"),
    }
    row
}

fn half_stencil(p: PhasePoint, h: f64) -> [PhasePoint; 4] {
    let (w, h) = (p.w(), 0.5 * h);
    [
        PhasePoint::new(p.s + h, p.theta),
        PhasePoint::new(p.s - h, p.theta),
        PhasePoint::from_sw(p.s, w + h),
        PhasePoint::from_sw(p.s, w - h),
    ]
}

/// Central-difference Jacobian `[∂s'/∂s, ∂s'/∂w, ∂w'/∂s, ∂w'/∂w]`.
fn jacobian<M: PhaseMap + ?Sized>(
    curve: &Curve,
    map: &M,
    stencil: &[PhasePoint; 4],
) -> Result<[f64; 4], BilliardError> {
    let mut images = [stencil[0]; 4];
    for (img, q) in images.iter_mut().zip(stencil) {
        *img = map.apply(*q)?;
    }
    let ds_in = curve.s_difference(stencil[0].s, stencil[1].s);
    let dw_in = stencil[2].w() - stencil[3].w();
    let column = |a: PhasePoint, b: PhasePoint, d: f64| {
        (curve.s_difference(a.s, b.s) / d, (a.w() - b.w()) / d)
    };
    let (a11, a21) = column(images[0], images[1], ds_in);
    let (a12, a22) = column(images[2], images[3], dw_in);
    Ok([a11, a12, a21, a22])
}
