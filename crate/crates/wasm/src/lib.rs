//! Browser bindings: G± curves, exceptional loci and levels against g.
//!
//! Every export returns a JSON string; errors come back as a thrown string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use rabi_core::contour::GridSpec;
use rabi_core::exceptional::{self, axis_intercepts, count_components};
use rabi_core::gfunction::{g_pair, Truncation};
use rabi_core::rootfinder::regular_spectrum;
use rabi_core::{validate_params, SpectralPoint};

const MAX_SAMPLES: usize = 20_000;
const MAX_CELLS: usize = 600;
const MAX_STEPS: usize = 400;
const MAX_LEVELS: usize = 24;

#[derive(Serialize, Debug)]
pub struct Root {
    pub x: f64,
    pub energy: f64,
    pub parity: &'static str,
}

#[derive(Serialize, Debug)]
pub struct Curve {
    pub x: Vec<f64>,
    pub g_plus: Vec<Option<f64>>,
    pub g_minus: Vec<Option<f64>>,
    pub roots: Vec<Root>,
}

/// `G±` on `samples` points of `[x_min, x_max]`, with the zeros inside.
pub fn curve(omega: f64, g: f64, delta: f64, x_min: f64, x_max: f64, samples: usize) -> Result<Curve, String> {
    let p = validate_params(omega, g, delta).map_err(|e| e.to_string())?;
    if !(2..=MAX_SAMPLES).contains(&samples) || !(x_min < x_max) {
        return Err(format!("need x_min < x_max and 2..={MAX_SAMPLES} samples"));
    }
    let t = Truncation::default();
    let mut out = Curve {
        x: Vec::with_capacity(samples),
        g_plus: Vec::with_capacity(samples),
        g_minus: Vec::with_capacity(samples),
        roots: Vec::new(),
    };
    for i in 0..samples {
        let x = x_min + (x_max - x_min) * i as f64 / (samples - 1) as f64;
        let v = g_pair(SpectralPoint::new(x), &p, &t).ok();
        out.x.push(x);
        out.g_plus.push(v.map(|v| v.g_plus));
        out.g_minus.push(v.map(|v| v.g_minus));
    }
    // Enough levels to cover the window; the solver starts below the ground state.
    let count = (2.0 * (x_max + p.delta()) / p.omega()).ceil().max(2.0) as usize + 2;
    let spec = regular_spectrum(&p, count.min(4 * MAX_LEVELS), &t).map_err(|e| e.to_string())?;
    for (r, e) in spec.roots.iter().zip(&spec.energies) {
        if (x_min..=x_max).contains(&r.x_star) {
            out.roots.push(Root {
                x: r.x_star,
                energy: e.value,
                parity: e.parity.label(),
            });
        }
    }
    Ok(out)
}

#[derive(Serialize, Debug)]
pub struct LocusSet {
    pub family: &'static str,
    pub closed_components: usize,
    pub open_components: usize,
    pub axis_intercepts: Vec<f64>,
    pub polylines: Vec<Vec<(f64, f64)>>,
}

#[derive(Serialize, Debug)]
pub struct Loci {
    pub n: usize,
    pub delta_max: f64,
    pub g_max: f64,
    pub sets: Vec<LocusSet>,
}

/// Juddian and non-degenerate loci of level `n` in the (Δ, g) plane.
pub fn loci(n: usize, omega: f64, cells: usize) -> Result<Loci, String> {
    if n > 6 || !(8..=MAX_CELLS).contains(&cells) {
        return Err(format!("need n <= 6 and 8..={MAX_CELLS} cells"));
    }
    let base = validate_params(omega, 0.5 * omega, 0.5 * omega).map_err(|e| e.to_string())?;
    let w = base.omega();
    let err = |e: rabi_core::Error| e.to_string();
    let jgrid = GridSpec::new((0.0, (n as f64 + 0.5) * w), (0.02 * w, w), cells, cells).map_err(err)?;
    let juddian = exceptional::juddian_locus(n, &jgrid, &base).map_err(err)?;
    let cgrid = exceptional::default_window(n, w, cells).map_err(err)?;
    let (plus, minus) = exceptional::nondegenerate_locus(n, &cgrid, &base, &Truncation::default()).map_err(err)?;
    let sets = [juddian, plus, minus]
        .iter()
        .map(|cs| {
            let (closed, open) = count_components(cs);
            LocusSet {
                family: cs.kind.label(),
                closed_components: closed,
                open_components: open,
                axis_intercepts: if cs.kind != exceptional::LocusKind::Juddian {
                    axis_intercepts(cs)
                } else {
                    Vec::new()
                },
                polylines: cs.polylines.iter().map(|l| l.points.clone()).collect(),
            }
        })
        .collect();
    Ok(Loci {
        n,
        delta_max: (n as f64 + 2.5) * w,
        g_max: w,
        sets,
    })
}

#[derive(Serialize, Debug)]
pub struct Levels {
    pub g: Vec<f64>,
    /// `energies[k][i]`: level `i` at coupling `g[k]`.
    pub energies: Vec<Vec<f64>>,
    pub parities: Vec<Vec<&'static str>>,
    /// `nω − g²/ω` at each coupling, for `n` below the top level.
    pub baselines: Vec<Vec<f64>>,
}

/// Lowest `levels` regular levels on `steps` couplings in `[g_min, g_max]`.
pub fn levels_vs_g(omega: f64, delta: f64, g_max: f64, steps: usize, levels: usize) -> Result<Levels, String> {
    if !(2..=MAX_STEPS).contains(&steps) || !(1..=MAX_LEVELS).contains(&levels) {
        return Err(format!("need 2..={MAX_STEPS} steps and 1..={MAX_LEVELS} levels"));
    }
    let t = Truncation::default();
    let g_min = 0.01 * omega;
    let mut out = Levels {
        g: Vec::new(),
        energies: Vec::new(),
        parities: Vec::new(),
        baselines: Vec::new(),
    };
    for k in 0..steps {
        let g = g_min + (g_max - g_min) * k as f64 / (steps - 1) as f64;
        let p = validate_params(omega, g, delta).map_err(|e| e.to_string())?;
        let s = regular_spectrum(&p, levels, &t).map_err(|e| format!("g = {g}: {e}"))?;
        let top = s.energies.last().map_or(0.0, |e| e.value) + p.shift();
        let n_top = (top / p.omega()).floor().max(0.0) as usize;
        out.g.push(g);
        out.energies.push(s.energies.iter().map(|e| e.value).collect());
        out.parities.push(s.energies.iter().map(|e| e.parity.label()).collect());
        out.baselines.push((0..=n_top).map(|n| n as f64 * p.omega() - p.shift()).collect());
    }
    Ok(out)
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn g_curve(omega: f64, g: f64, delta: f64, x_min: f64, x_max: f64, samples: usize) -> Result<String, JsValue> {
    to_js(curve(omega, g, delta, x_min, x_max, samples))
}

#[wasm_bindgen]
pub fn exceptional_loci(n: usize, omega: f64, cells: usize) -> Result<String, JsValue> {
    to_js(loci(n, omega, cells))
}

#[wasm_bindgen]
pub fn spectrum_vs_g(omega: f64, delta: f64, g_max: f64, steps: usize, levels: usize) -> Result<String, JsValue> {
    to_js(levels_vs_g(omega, delta, g_max, steps, levels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_has_gaps_at_poles_and_finds_roots() {
        let c = curve(1.0, 0.7, 0.4, -1.0, 3.0, 401).unwrap();
        assert_eq!(c.x.len(), 401);
        // x = 0, 1, 2, 3 fall on samples 100, 200, 300, 400.
        for i in [100, 200, 300, 400] {
            assert!(c.g_plus[i].is_none() && c.g_minus[i].is_none(), "sample {i}");
        }
        assert!((c.roots[0].energy - -0.707805064098486).abs() < 1e-9);
        assert!(c.roots.iter().all(|r| (-1.0..=3.0).contains(&r.x)));
    }

    #[test]
    fn loci_topology() {
        let l = loci(2, 1.0, 120).unwrap();
        assert_eq!(l.sets[0].family, "juddian");
        assert_eq!(l.sets[0].closed_components, 2);
        let hits: Vec<f64> = l.sets[1..].iter().flat_map(|s| s.axis_intercepts.clone()).collect();
        for target in [3.0, 4.0] {
            assert!(hits.iter().any(|h| (h - target).abs() < 1e-3), "{hits:?}");
        }
    }

    #[test]
    fn levels_are_sorted_per_coupling() {
        let l = levels_vs_g(1.0, 0.4, 1.0, 6, 6).unwrap();
        assert_eq!(l.energies.len(), 6);
        assert!(l.energies.iter().all(|row| row.len() == 6 && row.windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn bad_arguments_are_errors() {
        assert!(curve(0.0, 0.5, 0.5, 0.0, 1.0, 10).is_err());
        assert!(curve(1.0, 0.5, 0.5, 1.0, 0.0, 10).is_err());
        assert!(loci(9, 1.0, 100).is_err());
        assert!(levels_vs_g(1.0, 0.4, 1.0, 1, 4).is_err());
    }
}
