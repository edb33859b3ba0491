//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes plain numbers or a JSON string and returns a JSON
//! string; errors come back as `{"error": "..."}`. The `*_json` functions
//! carry the logic and are callable natively.

use std::f64::consts::PI;

use serde::Deserialize;
use serde_json::json;
use spectral_lab::functionals::{g_1d, sine_mass_bound};
use spectral_lab::square_lab::c_omega_scan;
use spectral_lab::tube_lab::{tube_complement, tube_functional_bound, Approximation, GeodesicSegment, ThetaMode, TubeSpec};
use spectral_lab::{IntervalSet, ModelOperator1D, Rect, RectSet, Weight1D};
use wasm_bindgen::prelude::*;

fn wrap(r: Result<serde_json::Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// The sine mass bound `f − sin(πf)/π` next to the exact infimum of the
/// eigenfunction mass on `[0, fπ]` for Dirichlet on `[0, π]`.
pub fn mass_curve_json(samples: usize, lambda_max: f64) -> Result<serde_json::Value, String> {
    if samples < 2 || samples > 2000 {
        return Err("samples must be in 2..=2000".into());
    }
    let op = ModelOperator1D::dirichlet_pi();
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let f = i as f64 / (samples - 1) as f64;
        let g = if f == 0.0 {
            0.0
        } else {
            let set = IntervalSet::new(PI, vec![(0.0, f * PI)]).map_err(err)?;
            g_1d(&op, &Weight1D::Indicator(set), lambda_max).map_err(err)?.value
        };
        rows.push(json!({ "fraction": f, "bound": sine_mass_bound(f), "g": g }));
    }
    Ok(json!({ "lambda_max": lambda_max, "rows": rows }))
}

#[derive(Deserialize)]
struct TubeRequest {
    slope: f64,
    intercept: f64,
    t: f64,
    #[serde(default = "yes")]
    reflected: bool,
    epsilon: f64,
    #[serde(default = "default_resolution")]
    resolution: usize,
    #[serde(default = "default_cutoff")]
    lambda_max: f64,
}

fn yes() -> bool {
    true
}
fn default_resolution() -> usize {
    64
}
fn default_cutoff() -> f64 {
    400.0
}

/// Tube around a (reflected) line in the Dirichlet square: the rectangles of
/// the complement as `[x0, x1, y0, y1]` and the lower bound on the eigenfunction mass outside it.
pub fn tube_json(request: &str) -> Result<serde_json::Value, String> {
    let q: TubeRequest = serde_json::from_str(request).map_err(err)?;
    let seg = GeodesicSegment::diagonal((PI, PI), q.slope, q.intercept, q.t, q.reflected);
    let ts = TubeSpec::new(seg, q.epsilon).map_err(err)?.resolution(q.resolution).map_err(err)?;
    let (outer, inner) = tube_complement(&ts).map_err(err)?;
    let op = ModelOperator1D::dirichlet_pi();
    let bound = |approx| {
        tube_functional_bound(&ts, &op, &op, q.lambda_max, ThetaMode::BoundFormula, approx, false)
            .map(|b| b.functional.value)
            .map_err(err)
    };
    Ok(json!({
        "legs": seg.legs().map_err(err)?,
        "outer": outer.rects(),
        "outer_measure": outer.measure(),
        "inner_measure": inner.measure(),
        "bound_outer": bound(Approximation::Outer)?,
        "bound_inner": bound(Approximation::Inner)?,
        "covering_count": ts.covering_count,
    }))
}

/// `C_ω(λ)` for every square eigenvalue up to `lambda_max`, with `ω` given as
/// `[[x0, x1, y0, y1], ...]` inside `[0, π]²`.
pub fn square_scan_json(omega: &str, lambda_max: u64) -> Result<serde_json::Value, String> {
    if lambda_max > 200_000 {
        return Err("lambda_max above 200000 is too slow for the browser".into());
    }
    let raw: Vec<[f64; 4]> = serde_json::from_str(omega).map_err(err)?;
    let rects = raw
        .into_iter()
        .map(|[x0, x1, y0, y1]| Rect::new(x0.clamp(0.0, PI), x1.clamp(0.0, PI), y0.clamp(0.0, PI), y1.clamp(0.0, PI)))
        .collect();
    let set = RectSet::normalize((PI, PI), rects).map_err(err)?;
    let scan = c_omega_scan(&set, lambda_max).map_err(err)?;
    let rows: Vec<_> = scan.table.iter().map(|r| json!([r.lambda, r.dim, r.c_value])).collect();
    Ok(json!({
        "measure_fraction": set.measure() / (PI * PI),
        "min_c": scan.min_c,
        "argmin_lambda": scan.argmin_lambda,
        "rows": rows,
    }))
}

#[wasm_bindgen]
pub fn mass_curve(samples: usize, lambda_max: f64) -> String {
    wrap(mass_curve_json(samples, lambda_max))
}

#[wasm_bindgen]
pub fn tube(request: &str) -> String {
    wrap(tube_json(request))
}

#[wasm_bindgen]
pub fn square_scan(omega: &str, lambda_max: u32) -> String {
    wrap(square_scan_json(omega, lambda_max as u64))
}
