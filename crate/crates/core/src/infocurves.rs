//! Closed-form information curves in dits (base-`d` logarithms).

use serde::{Deserialize, Serialize};

use crate::attack::{f_general, max_disturbance};
use crate::error::{Error, Result};

/// Gap kept from the ends of `[0, (d-1)/d]` when bracketing the crossing
/// and when building default grids.
pub const ENDPOINT_GAP: f64 = 1e-9;

const MAX_BISECTIONS: usize = 200;

/// Relative entropy (dits) of `(p, (1-p)/(d-1), ...)` against the uniform
/// distribution, written in terms of `t = p d` so that `t = 1` gives exactly zero.
fn divergence_from_uniform(d: usize, p: f64) -> f64 {
    let df = d as f64;
    let t = p * df;
    let u = (df - t) / (df - 1.0);
    let term = |w: f64, r: f64| {
        if w <= 0.0 || r <= 0.0 {
            0.0
        } else {
            w * r.ln()
        }
    };
    (term(p, t) + term(1.0 - p, u)) / df.ln()
}

/// Information (dits) of a `d`-ary symmetric channel used with probability
/// `1-D`, flagged and error-free otherwise: `1 + (1-D)[p log p + (1-p) log((1-p)/(d-1))]`.
///
/// With `p = f_d(D)` this is Eve's information `I_AE`.
pub fn information_for_overlap(d: usize, disturbance: f64, p: f64) -> f64 {
    ((1.0 - disturbance) * divergence_from_uniform(d, p) + disturbance).clamp(0.0, 1.0)
}

/// Alice–Bob information `1 + (1-D) log_d(1-D) + D log_d(D/(d-1))`.
pub fn i_ab(d: usize, disturbance: f64) -> f64 {
    divergence_from_uniform(d, 1.0 - disturbance).clamp(0.0, 1.0)
}

/// Alice–Eve information of the optimal symmetric attack.
pub fn i_ae(d: usize, disturbance: f64) -> Result<f64> {
    let f = f_general(d, disturbance)?;
    Ok(information_for_overlap(d, disturbance, f))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoCurvePoint {
    #[serde(rename = "D")]
    pub disturbance: f64,
    pub i_ab: f64,
    pub i_ae: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingResult {
    pub d: usize,
    pub d_c: f64,
    pub info_at_crossing: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// `D_c` where `I_AE = I_AB`, by bisection on `[ε, (d-1)/d - ε]`.
pub fn crossing(d: usize, tol: f64) -> Result<CrossingResult> {
    crossing_in(d, ENDPOINT_GAP, max_disturbance(d) - ENDPOINT_GAP, tol)
}

/// Bisection for the crossing on a caller-supplied bracket.
pub fn crossing_in(d: usize, lo: f64, hi: f64, tol: f64) -> Result<CrossingResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "the attack needs d >= 2",
        });
    }
    let gap = |x: f64| -> Result<f64> { Ok(i_ae(d, x)? - i_ab(d, x)) };

    let (mut a, mut b) = (lo, hi);
    let (ga, gb) = (gap(a)?, gap(b)?);
    if !(ga < 0.0 && gb > 0.0) {
        return Err(Error::NoSignChange { d, lo, hi });
    }

    let mut mid = 0.5 * (a + b);
    let mut g_mid = gap(mid)?;
    let mut iterations = 1;
    while g_mid.abs() >= tol && iterations < MAX_BISECTIONS {
        if g_mid < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        let next = 0.5 * (a + b);
        if next == mid {
            break;
        }
        mid = next;
        g_mid = gap(mid)?;
        iterations += 1;
    }

    Ok(CrossingResult {
        d,
        d_c: mid,
        info_at_crossing: i_ab(d, mid),
        iterations,
        residual: g_mid.abs(),
    })
}

/// `points` uniform disturbances on `[0, (d-1)/d - ε]`.
pub fn uniform_grid(d: usize, points: usize) -> Vec<f64> {
    let top = max_disturbance(d) - ENDPOINT_GAP;
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| top * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn sweep_curves(d: usize, grid: &[f64]) -> Result<Vec<InfoCurvePoint>> {
    grid.iter()
        .map(|&dist| {
            if dist < 0.0 || dist > max_disturbance(d) {
                return Err(Error::DisturbanceOutOfRange {
                    d,
                    value: dist,
                    min: 0.0,
                    max: max_disturbance(d),
                });
            }
            Ok(InfoCurvePoint {
                disturbance: dist,
                i_ab: i_ab(d, dist),
                i_ae: i_ae(d, dist)?,
            })
        })
        .collect()
}

/// `I_AE(d, D)` for each dimension at a fixed disturbance.
pub fn dimension_scan(disturbance: f64, dims: &[usize]) -> Result<Vec<(usize, f64)>> {
    dims.iter()
        .map(|&d| i_ae(d, disturbance).map(|v| (d, v)))
        .collect()
}
