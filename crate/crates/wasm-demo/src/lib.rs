//! Browser bindings: constellation design, error-rate curves and MAP decision regions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use bpam_core::analysis::{exact_error, union_bound};
use bpam_core::decoder::MapDecoder;
use bpam_core::design::{DesignInput, GridSpec};
use bpam_core::experiment::{convert_snr, Scheme, SnrConvention};
use bpam_core::geometry::PlanarPoint;
use bpam_core::source::{BitPair, JointSourceDistribution};

const DEMO_GRID: GridSpec = GridSpec {
    points: 80,
    refine_points: 21,
    refine_factor: 10.0,
};

fn input(p: &[f64], e1: f64, e2: f64, gamma_phi: f64, snr_db: f64) -> Result<DesignInput, String> {
    let [p00, p01, p10, p11] = p else {
        return Err("expected four joint probabilities".into());
    };
    let priors = JointSourceDistribution::from_joint(*p00, *p01, *p10, *p11).map_err(|e| e.to_string())?;
    let sigma2 = convert_snr(snr_db, SnrConvention::TableReproduction, e1, e2, gamma_phi);
    DesignInput::new(priors, e1, e2, gamma_phi, sigma2).map_err(|e| e.to_string())
}

fn point(p: PlanarPoint) -> Value {
    json!([p.re, p.im])
}

pub fn design_json(p: &[f64], e1: f64, e2: f64, gamma_phi: f64, snr_db: f64) -> Result<String, String> {
    let input = input(p, e1, e2, gamma_phi, snr_db)?;
    let mut rows = Vec::new();
    for scheme in Scheme::ALL {
        let d = scheme.design(&input, DEMO_GRID).map_err(|e| e.to_string())?;
        let cc = d.combined(input.priors);
        rows.push(json!({
            "scheme": scheme.as_str(),
            "s1": [point(d.c1.point(0)), point(d.c1.point(1))],
            "s2": [point(d.c2.point(0)), point(d.c2.point(1))],
            "combined": BitPair::ALL.map(|b| point(cc.point(b))),
            "p_err": exact_error(&cc, input.sigma2).ok().map(|r| r.p_err_exact),
            "union": union_bound(&cc, input.sigma2),
        }));
    }
    Ok(json!({ "sigma2": input.sigma2, "designs": rows }).to_string())
}

pub fn curves_json(
    p: &[f64],
    e1: f64,
    e2: f64,
    gamma_phi: f64,
    snr_lo: f64,
    snr_hi: f64,
    points: usize,
) -> Result<String, String> {
    let n = points.max(2);
    let snr: Vec<f64> = (0..n)
        .map(|i| snr_lo + (snr_hi - snr_lo) * i as f64 / (n - 1) as f64)
        .collect();
    let mut curves = serde_json::Map::new();
    for scheme in [Scheme::Antipodal, Scheme::Individual, Scheme::Joint] {
        let mut ys = Vec::with_capacity(n);
        for &s in &snr {
            let input = input(p, e1, e2, gamma_phi, s)?;
            let y = scheme
                .design(&input, DEMO_GRID)
                .ok()
                .and_then(|d| exact_error(&d.combined(input.priors), input.sigma2).ok())
                .map(|r| r.p_err_exact);
            ys.push(y);
        }
        curves.insert(scheme.as_str().into(), json!(ys));
    }
    Ok(json!({ "snr_db": snr, "curves": curves }).to_string())
}

/// MAP decisions on a `width × height` raster over `[-extent, extent]²`,
/// row-major from the top-left, one pair index (0..4) per pixel.
#[allow(clippy::too_many_arguments)]
pub fn regions(
    p: &[f64],
    e1: f64,
    e2: f64,
    gamma_phi: f64,
    snr_db: f64,
    scheme: &str,
    width: usize,
    height: usize,
    extent: f64,
) -> Result<Vec<u8>, String> {
    let input = input(p, e1, e2, gamma_phi, snr_db)?;
    let scheme: Scheme = scheme.parse()?;
    let d = scheme.design(&input, DEMO_GRID).map_err(|e| e.to_string())?;
    let cc = d.combined(input.priors);
    let decoder = MapDecoder::new(&cc, input.sigma2);
    let mut out = Vec::with_capacity(width * height);
    for row in 0..height {
        let im = extent * (1.0 - 2.0 * (row as f64 + 0.5) / height as f64);
        for col in 0..width {
            let re = extent * (2.0 * (col as f64 + 0.5) / width as f64 - 1.0);
            out.push(decoder.decode(PlanarPoint::new(re, im)).index() as u8);
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn design(p: &[f64], e1: f64, e2: f64, gamma_phi: f64, snr_db: f64) -> Result<String, JsError> {
    design_json(p, e1, e2, gamma_phi, snr_db).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn error_curves(
    p: &[f64],
    e1: f64,
    e2: f64,
    gamma_phi: f64,
    snr_lo: f64,
    snr_hi: f64,
    points: usize,
) -> Result<String, JsError> {
    curves_json(p, e1, e2, gamma_phi, snr_lo, snr_hi, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn decision_regions(
    p: &[f64],
    e1: f64,
    e2: f64,
    gamma_phi: f64,
    snr_db: f64,
    scheme: &str,
    width: usize,
    height: usize,
    extent: f64,
) -> Result<Vec<u8>, JsError> {
    regions(p, e1, e2, gamma_phi, snr_db, scheme, width, height, extent).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CASE1: [f64; 4] = [0.091, 0.009, 0.009, 0.891];

    #[test]
    fn design_lists_all_schemes() {
        let v: Value = serde_json::from_str(&design_json(&CASE1, 1.0, 1.0, 1.0, 18.0).unwrap()).unwrap();
        let designs = v["designs"].as_array().unwrap();
        assert_eq!(designs.len(), 4);
        let joint = &designs[2];
        assert_eq!(joint["scheme"], "joint");
        assert!((joint["s2"][0][0].as_f64().unwrap() + 2.421).abs() < 1e-3);
    }

    #[test]
    fn curves_fall_with_snr() {
        let v: Value = serde_json::from_str(&curves_json(&CASE1, 1.0, 1.0, 0.924, 0.0, 20.0, 5).unwrap()).unwrap();
        let ys: Vec<f64> = v["curves"]["joint"]
            .as_array()
            .unwrap()
            .iter()
            .map(|y| y.as_f64().unwrap())
            .collect();
        assert_eq!(ys.len(), 5);
        assert!(ys.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn regions_cover_the_raster() {
        let px = regions(&[0.25; 4], 1.0, 1.0, 0.0, 10.0, "antipodal", 40, 30, 3.0).unwrap();
        assert_eq!(px.len(), 1200);
        // orthogonal antipodal: quadrants map to the four pairs
        assert_eq!(px[0], BitPair::new(0, 1).index() as u8);
        assert_eq!(px[1199], BitPair::new(1, 0).index() as u8);
        assert!(regions(&[0.5, 0.5], 1.0, 1.0, 0.0, 10.0, "joint", 4, 4, 1.0).is_err());
    }
}
