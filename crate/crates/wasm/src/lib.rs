//! Browser bindings: the six-line example, ball-mass curves around its points, and the
//! m-sequence of user-supplied points. Every export returns a JSON string.

use cubicpoles::config::{m_sequence, PointSet};
use cubicpoles::currents::{lelong_ball_mass, lelong_exact, sharpness_example};
use cubicpoles::{rational, ProjPoint};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct SharpnessView {
    seed: u32,
    /// `[a, b, c]` for `aX + bY + cZ`, as floats for drawing.
    lines: Vec<[f64; 3]>,
    points: Vec<[f64; 2]>,
    lelong: Vec<String>,
    all_one_third: bool,
    all_full_rank: bool,
    m_sequence: [usize; 3],
}

pub fn sharpness_json(seed: u32) -> Result<String, String> {
    let s = sharpness_example(seed as u64).map_err(|e| e.to_string())?;
    let lines = s
        .current
        .lines
        .iter()
        .map(|l| {
            [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
                .map(|(a, b, c)| rational::to_f64(&l.line.coeff(&cubicpoles::Monomial(a, b, c))))
        })
        .collect();
    let points = s
        .points
        .iter()
        .map(|p| {
            let [x, y, z] = p.to_f64();
            [x / z, y / z]
        })
        .collect();
    let view = SharpnessView {
        seed,
        lines,
        points,
        lelong: s.lelong.iter().map(rational::format).collect(),
        all_one_third: s.all_one_third,
        all_full_rank: s.all_full_rank,
        m_sequence: s.m_sequence.values(),
    };
    Ok(serde_json::to_string(&view).expect("view serializes"))
}

#[derive(Serialize)]
struct BallMassCurve {
    point: ProjPoint,
    exact: String,
    /// `[r, mass]`, largest radius first.
    samples: Vec<[f64; 2]>,
}

/// Ball masses of the six-line current around point `index` (0-based) for radii `4 * 2^-k`.
pub fn ball_mass_curve_json(seed: u32, index: usize, steps: usize) -> Result<String, String> {
    let s = sharpness_example(seed as u64).map_err(|e| e.to_string())?;
    let x = s.points.get(index).ok_or_else(|| format!("point index {index} is outside 0..{}", s.points.len()))?;
    let samples = (0..steps.clamp(1, 64))
        .map(|k| {
            let r = 4.0 * 0.5f64.powi(k as i32);
            lelong_ball_mass(&s.current, x, r).map(|m| [r, m]).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let curve = BallMassCurve { point: x.clone(), exact: rational::format(&lelong_exact(&s.current, x)), samples };
    Ok(serde_json::to_string(&curve).expect("curve serializes"))
}

#[derive(Serialize)]
struct WitnessView {
    degree: u32,
    labels: Vec<usize>,
    curve: String,
}

#[derive(Serialize)]
struct MSequenceView {
    m1: usize,
    m2: usize,
    m3: usize,
    witnesses: Vec<WitnessView>,
}

/// Points as `[["x","y","z"], ...]`, or `[["x","y"], ...]` for affine points.
pub fn m_sequence_json(points: &str) -> Result<String, String> {
    let raw: Vec<Vec<String>> = serde_json::from_str(points).map_err(|e| e.to_string())?;
    let pts = raw
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let q = |t: &str| rational::parse(t).map_err(|e| format!("point {}: {e}", i + 1));
            match c.as_slice() {
                [x, y] => Ok(ProjPoint::affine(q(x)?, q(y)?)),
                [x, y, z] => ProjPoint::new(q(x)?, q(y)?, q(z)?).map_err(|e| format!("point {}: {e}", i + 1)),
                _ => Err(format!("point {}: expected 2 or 3 coordinates", i + 1)),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let set = PointSet::new(pts).map_err(|e| e.to_string())?;
    let m = m_sequence(&set).map_err(|e| e.to_string())?;
    let [m1, m2, m3] = m.values();
    let witnesses = m
        .witnesses
        .iter()
        .map(|w| WitnessView { degree: w.degree, labels: w.labels.clone(), curve: w.curve.to_string() })
        .collect();
    Ok(serde_json::to_string(&MSequenceView { m1, m2, m3, witnesses }).expect("m-sequence serializes"))
}

#[wasm_bindgen]
pub fn sharpness(seed: u32) -> Result<String, JsValue> {
    sharpness_json(seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn ball_mass_curve(seed: u32, index: usize, steps: usize) -> Result<String, JsValue> {
    ball_mass_curve_json(seed, index, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn point_m_sequence(points: &str) -> Result<String, JsValue> {
    m_sequence_json(points).map_err(|e| JsValue::from_str(&e))
}
