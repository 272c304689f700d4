//! Exceptional spectrum: eigenvalues pinned to `x = nω`.
//!
//! Juddian points satisfy `K_n(nω) = 0` and are doubly degenerate. The
//! non-degenerate exceptional points are the zeros of one residue cofactor
//! `c±` with `K_n(nω) ≠ 0`. Both loci are traced over the (Δ, g) plane at
//! fixed ω.
//!
//! Loci are computed in the quadrant Δ ≥ 0, g > 0. The plane is symmetric
//! under Δ → −Δ and g → −g, so a contour piece whose ends both lie on the
//! window edges Δ = 0 or g ≈ 0 closes into a loop once mirrored.

use serde::Serialize;

use crate::contour::{zero_contours, GridSpec, PlaneGrid, Polyline, Side};
use crate::gfunction::{juddian_normalized, residue_pair, Truncation, G_MIN_RATIO};
use crate::oracle::G_PLUS_SECTOR;
use crate::{validate_params, Energy, EnergyKind, Error, ModelParams, Result};

pub const TOL_K: f64 = 1e-9;
pub const TOL_C: f64 = 1e-9;

/// Lower g edges at or below this value (in units of ω) stand in for the
/// g = 0 axis when labelling closures.
pub const AXIS_PROXY: f64 = 0.05;

/// Times an outer window edge is pushed out when resolving whether a
/// Juddian piece closes.
const MAX_EXTENSIONS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExceptionalClass {
    None,
    JuddianDegenerate,
    NonDegeneratePlus,
    NonDegenerateMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocusKind {
    Juddian,
    CofactorPlus,
    CofactorMinus,
}

impl LocusKind {
    pub fn label(&self) -> &'static str {
        match self {
            LocusKind::Juddian => "juddian",
            LocusKind::CofactorPlus => "nondeg_plus",
            LocusKind::CofactorMinus => "nondeg_minus",
        }
    }
}

/// Contours of one exceptional family at level `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourSet {
    pub level_index: usize,
    pub kind: LocusKind,
    pub grid: GridSpec,
    pub polylines: Vec<Polyline>,
    /// Points on cofactor contours where `K_n(nω)` also vanishes.
    pub juddian_crossings: Vec<(f64, f64)>,
}

impl ContourSet {
    pub fn closed_flags(&self) -> Vec<bool> {
        self.polylines.iter().map(|p| p.closed).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }
}

fn params_at(omega: f64, delta: f64, g: f64) -> Option<ModelParams> {
    validate_params(omega, g, delta).ok()
}

/// Normalized `K_n(nω)` at `(Δ, g)`; NaN where it cannot be evaluated.
pub fn juddian_field(n: usize, omega: f64, delta: f64, g: f64) -> f64 {
    params_at(omega, delta, g)
        .and_then(|p| juddian_normalized(n, &p).ok())
        .unwrap_or(f64::NAN)
}

/// Normalized cofactor `c±` at `(Δ, g)`; NaN where it cannot be evaluated.
pub fn cofactor_field(n: usize, plus: bool, omega: f64, delta: f64, g: f64, t: &Truncation) -> f64 {
    params_at(omega, delta, g)
        .and_then(|p| residue_pair(n, &p, t).ok())
        .map(|r| if plus { r.c_plus_normalized() } else { r.c_minus_normalized() })
        .unwrap_or(f64::NAN)
}

/// `|v| <= tol · max(1, |∇v| ω)`: a distance test in parameter space.
fn vanishes<F: Fn(f64, f64) -> f64>(field: F, delta: f64, g: f64, omega: f64, tol: f64) -> bool {
    let v = field(delta, g);
    if !v.is_finite() {
        return false;
    }
    if v == 0.0 {
        return true;
    }
    let h = 1e-6 * omega;
    let dd = (field(delta + h, g) - field((delta - h).max(0.0), g)) / (delta + h - (delta - h).max(0.0));
    let dg = (field(delta, g + h) - field(delta, g - h)) / (2.0 * h);
    let grad = (dd * dd + dg * dg).sqrt();
    let scale = if grad.is_finite() { (grad * omega).max(1.0) } else { 1.0 };
    v.abs() <= tol * scale
}

pub fn classify_point(n: usize, p: &ModelParams, t: &Truncation) -> Result<ExceptionalClass> {
    if p.g() <= 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let w = p.omega();
    // Surface truncation failures instead of reading them as "no zero".
    residue_pair(n, p, t)?;
    let k_field = |d: f64, g: f64| juddian_field(n, w, d, g);
    if n > 0 && vanishes(k_field, p.delta(), p.g(), w, TOL_K) {
        return Ok(ExceptionalClass::JuddianDegenerate);
    }
    let plus = |d: f64, g: f64| cofactor_field(n, true, w, d, g, t);
    if p.delta() > 0.0 && vanishes(plus, p.delta(), p.g(), w, TOL_C) {
        return Ok(ExceptionalClass::NonDegeneratePlus);
    }
    let minus = |d: f64, g: f64| cofactor_field(n, false, w, d, g, t);
    if p.delta() > 0.0 && vanishes(minus, p.delta(), p.g(), w, TOL_C) {
        return Ok(ExceptionalClass::NonDegenerateMinus);
    }
    Ok(ExceptionalClass::None)
}

fn on_axis(side: Option<Side>, grid: &GridSpec, omega: f64) -> bool {
    match side {
        Some(Side::DeltaLow) => grid.delta_range.0 <= 0.0,
        Some(Side::GLow) => grid.g_range.0 <= AXIS_PROXY * omega,
        _ => false,
    }
}

fn on_outer_edge(side: Option<Side>) -> bool {
    matches!(side, Some(Side::DeltaHigh) | Some(Side::GHigh))
}

fn trace(grid: GridSpec, field: &(dyn Fn(f64, f64) -> f64 + Sync)) -> Result<Vec<Polyline>> {
    let sampled = PlaneGrid::sample(grid, &field)?;
    let mut lines = zero_contours(&sampled, Some(&field));
    for l in &mut lines {
        l.closed = l.cycle;
    }
    Ok(lines)
}

/// Label each piece closed if it is a cycle or both of its ends lie on the
/// symmetry axes. Pieces leaving through an outer edge are followed on a
/// window with that edge pushed out, up to `extensions` times.
fn label_closures(
    lines: &mut [Polyline],
    grid: GridSpec,
    omega: f64,
    field: &(dyn Fn(f64, f64) -> f64 + Sync),
    extensions: usize,
) -> Result<()> {
    let mut wider: Option<Vec<Polyline>> = None;
    for l in lines.iter_mut() {
        if l.cycle {
            l.closed = true;
            continue;
        }
        if on_axis(l.start, &grid, omega) && on_axis(l.end, &grid, omega) {
            l.closed = true;
            continue;
        }
        l.closed = false;
        if extensions == 0 || !(on_outer_edge(l.start) || on_outer_edge(l.end)) {
            continue;
        }
        if wider.is_none() {
            let (d0, d1) = grid.delta_range;
            let (g0, g1) = grid.g_range;
            let big = GridSpec {
                delta_range: (d0, d0 + 2.0 * (d1 - d0)),
                g_range: (g0, g0 + 2.0 * (g1 - g0)),
                n_delta: 2 * grid.n_delta - 1,
                n_g: 2 * grid.n_g - 1,
            };
            let mut lines = trace(big, field)?;
            label_closures(&mut lines, big, omega, field, extensions - 1)?;
            wider = Some(lines);
        }
        let probe = l.points[l.points.len() / 2];
        if let Some(host) = wider
            .as_ref()
            .and_then(|w| w.iter().min_by(|a, b| a.distance_to(probe).total_cmp(&b.distance_to(probe))))
        {
            l.closed = host.closed;
        }
    }
    Ok(())
}

/// Zero set of `K_n(nω)` over the window, ω taken from `p_base`.
pub fn juddian_locus(n: usize, grid: &GridSpec, p_base: &ModelParams) -> Result<ContourSet> {
    grid.validate()?;
    let empty = ContourSet {
        level_index: n,
        kind: LocusKind::Juddian,
        grid: *grid,
        polylines: Vec::new(),
        juddian_crossings: Vec::new(),
    };
    if n == 0 {
        return Ok(empty);
    }
    let w = p_base.omega();
    let field = move |d: f64, g: f64| juddian_field(n, w, d, g);
    let mut polylines = trace(*grid, &field)?;
    label_closures(&mut polylines, *grid, w, &field, MAX_EXTENSIONS)?;
    Ok(ContourSet { polylines, ..empty })
}

/// Zero sets of `c+` and `c−`, with their crossings of the Juddian locus marked.
pub fn nondegenerate_locus(
    n: usize,
    grid: &GridSpec,
    p_base: &ModelParams,
    t: &Truncation,
) -> Result<(ContourSet, ContourSet)> {
    grid.validate()?;
    let w = p_base.omega();
    let t = *t;
    let build = |plus: bool| -> Result<ContourSet> {
        let field = move |d: f64, g: f64| cofactor_field(n, plus, w, d, g, &t);
        let mut polylines = trace(*grid, &field)?;
        label_closures(&mut polylines, *grid, w, &field, 0)?;
        let crossings = if n == 0 { Vec::new() } else { juddian_crossings(n, w, &polylines) };
        Ok(ContourSet {
            level_index: n,
            kind: if plus { LocusKind::CofactorPlus } else { LocusKind::CofactorMinus },
            grid: *grid,
            polylines,
            juddian_crossings: crossings,
        })
    };
    Ok((build(true)?, build(false)?))
}

fn juddian_crossings(n: usize, omega: f64, lines: &[Polyline]) -> Vec<(f64, f64)> {
    let k = |q: (f64, f64)| juddian_field(n, omega, q.0, q.1);
    let mut out = Vec::new();
    for l in lines {
        for seg in l.points.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let (ka, kb) = (k(a), k(b));
            if !(ka.is_finite() && kb.is_finite()) || (ka >= 0.0) == (kb >= 0.0) {
                continue;
            }
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let q = (a.0 + mid * (b.0 - a.0), a.1 + mid * (b.1 - a.1));
                if (k(q) >= 0.0) == (ka >= 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let s = 0.5 * (lo + hi);
            out.push((a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1)));
        }
    }
    out
}

/// `(closed, open)` component counts.
pub fn count_components(cs: &ContourSet) -> (usize, usize) {
    let closed = cs.polylines.iter().filter(|p| p.closed).count();
    (closed, cs.polylines.len() - closed)
}

/// Δ-intercepts with the g = 0 axis of the pieces ending on the lower g edge,
/// extrapolated linearly from the last two vertices. Ascending.
pub fn axis_intercepts(cs: &ContourSet) -> Vec<f64> {
    let mut out = Vec::new();
    for l in &cs.polylines {
        let n = l.points.len();
        let ends = [
            (l.start, l.points[0], l.points[1]),
            (l.end, l.points[n - 1], l.points[n - 2]),
        ];
        for (side, e, nb) in ends {
            if side != Some(Side::GLow) {
                continue;
            }
            let dg = nb.1 - e.1;
            let delta0 = if dg.abs() > 0.0 { e.0 - e.1 * (nb.0 - e.0) / dg } else { e.0 };
            out.push(delta0);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Window used for the quadrant loci at level `n`.
pub fn default_window(n: usize, omega: f64, cells: usize) -> Result<GridSpec> {
    GridSpec::new(
        (0.0, (n as f64 + 2.5) * omega),
        (G_MIN_RATIO * omega, omega),
        cells,
        cells,
    )
}

/// Exceptional eigenvalues `E = nω − g²/ω` for `n <= n_max`.
pub fn exceptional_energies(p: &ModelParams, n_max: usize, t: &Truncation) -> Result<Vec<Energy>> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        let value = n as f64 * p.omega() - p.shift();
        match classify_point(n, p, t)? {
            ExceptionalClass::None => {}
            ExceptionalClass::JuddianDegenerate => {
                for parity in [G_PLUS_SECTOR, G_PLUS_SECTOR.flipped()] {
                    out.push(Energy {
                        value,
                        parity,
                        kind: EnergyKind::JuddianDegenerate,
                    });
                }
            }
            ExceptionalClass::NonDegeneratePlus => out.push(Energy {
                value,
                parity: G_PLUS_SECTOR,
                kind: EnergyKind::ExceptionalNonDegenerate,
            }),
            ExceptionalClass::NonDegenerateMinus => out.push(Energy {
                value,
                parity: G_PLUS_SECTOR.flipped(),
                kind: EnergyKind::ExceptionalNonDegenerate,
            }),
        }
    }
    Ok(out)
}
