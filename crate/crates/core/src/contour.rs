//! Zero contours of a scalar field over the (Δ, g) plane.
//!
//! Marching squares with linear interpolation, followed by bisection of each
//! contour vertex along its grid edge against the exact field.

use std::collections::HashMap;

use serde::Serialize;

use crate::{Error, Result};

/// Absolute bisection tolerance for contour vertices.
pub const REFINE_TOL: f64 = 1e-13;

/// Sampling window and resolution over (Δ, g).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub delta_range: (f64, f64),
    pub g_range: (f64, f64),
    pub n_delta: usize,
    pub n_g: usize,
}

impl GridSpec {
    pub fn new(delta_range: (f64, f64), g_range: (f64, f64), n_delta: usize, n_g: usize) -> Result<Self> {
        let spec = Self {
            delta_range,
            g_range,
            n_delta,
            n_g,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_delta < 2 || self.n_g < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid sizes must be >= 2, got {}x{}",
                self.n_delta, self.n_g
            )));
        }
        let ok = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 < r.1;
        if !ok(self.delta_range) || !ok(self.g_range) {
            return Err(Error::InvalidArgument(format!(
                "degenerate ranges Δ {:?}, g {:?}",
                self.delta_range, self.g_range
            )));
        }
        Ok(())
    }

    pub fn delta_at(&self, i: usize) -> f64 {
        lerp(self.delta_range, i, self.n_delta)
    }

    pub fn g_at(&self, j: usize) -> f64 {
        lerp(self.g_range, j, self.n_g)
    }

    pub fn delta_step(&self) -> f64 {
        (self.delta_range.1 - self.delta_range.0) / (self.n_delta - 1) as f64
    }

    pub fn g_step(&self) -> f64 {
        (self.g_range.1 - self.g_range.0) / (self.n_g - 1) as f64
    }
}

fn lerp(r: (f64, f64), i: usize, n: usize) -> f64 {
    if i + 1 == n {
        r.1
    } else {
        r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64
    }
}

/// A sampled scalar field; `values[j * n_delta + i]` is the value at
/// `(delta_at(i), g_at(j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl PlaneGrid {
    pub fn sample<F>(spec: GridSpec, field: &F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        spec.validate()?;
        let row = |j: usize| -> Vec<f64> {
            let g = spec.g_at(j);
            (0..spec.n_delta).map(|i| field(spec.delta_at(i), g)).collect()
        };
        #[cfg(feature = "parallel")]
        let rows: Vec<Vec<f64>> = {
            use rayon::prelude::*;
            (0..spec.n_g).into_par_iter().map(row).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let rows: Vec<Vec<f64>> = (0..spec.n_g).map(row).collect();
        Ok(Self {
            spec,
            values: rows.concat(),
        })
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.spec.n_delta + i]
    }
}

/// Window boundary on which an open contour ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    DeltaLow,
    DeltaHigh,
    GLow,
    GHigh,
}

/// One connected piece of a zero set, as (Δ, g) vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    /// Closed after applying the caller's symmetry convention.
    pub closed: bool,
    /// Intrinsically a cycle (first point repeated at the end).
    pub cycle: bool,
    pub start: Option<Side>,
    pub end: Option<Side>,
}

impl Polyline {
    pub fn first(&self) -> (f64, f64) {
        self.points[0]
    }

    pub fn last(&self) -> (f64, f64) {
        *self.points.last().expect("polyline has >= 2 points")
    }

    /// Distance from `q` to the nearest segment.
    pub fn distance_to(&self, q: (f64, f64)) -> f64 {
        self.points
            .windows(2)
            .map(|w| segment_distance(w[0], w[1], q))
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(a: (f64, f64), b: (f64, f64), q: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((q.0 - a.0) * dx + (q.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (px, py) = (a.0 + t * dx, a.1 + t * dy);
    ((q.0 - px).powi(2) + (q.1 - py).powi(2)).sqrt()
}

/// Edge of the sampling lattice: horizontal `(i,j)-(i+1,j)` or vertical `(i,j)-(i,j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

impl Edge {
    fn nodes(&self) -> ((usize, usize), (usize, usize)) {
        match *self {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        }
    }

    fn side(&self, spec: &GridSpec) -> Option<Side> {
        match *self {
            Edge::H(_, 0) => Some(Side::GLow),
            Edge::H(_, j) if j + 1 == spec.n_g => Some(Side::GHigh),
            Edge::V(0, _) => Some(Side::DeltaLow),
            Edge::V(i, _) if i + 1 == spec.n_delta => Some(Side::DeltaHigh),
            _ => None,
        }
    }
}

fn positive(v: f64) -> bool {
    v >= 0.0
}

fn crossing_point<F>(grid: &PlaneGrid, edge: Edge, field: Option<&F>) -> (f64, f64)
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let spec = &grid.spec;
    let ((i0, j0), (i1, j1)) = edge.nodes();
    let (v0, v1) = (grid.at(i0, j0), grid.at(i1, j1));
    let p0 = (spec.delta_at(i0), spec.g_at(j0));
    let p1 = (spec.delta_at(i1), spec.g_at(j1));
    let t = (v0 / (v0 - v1)).clamp(0.0, 1.0);
    let linear = (p0.0 + t * (p1.0 - p0.0), p0.1 + t * (p1.1 - p0.1));
    let Some(field) = field else { return linear };

    // Bisection along the edge; the parameter varies along one axis only.
    let at = |s: f64| (p0.0 + s * (p1.0 - p0.0), p0.1 + s * (p1.1 - p0.1));
    let length = (p1.0 - p0.0).abs() + (p1.1 - p0.1).abs();
    let s0_positive = positive(v0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while (hi - lo) * length > REFINE_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (d, g) = at(mid);
        let v = field(d, g);
        if !v.is_finite() {
            return linear;
        }
        if positive(v) == s0_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Zero set of the sampled field as polylines.
///
/// When `field` is given, each vertex is refined by bisection on it. Cells
/// with non-finite corners are skipped. Output ordering is canonical.
pub fn zero_contours<F>(grid: &PlaneGrid, field: Option<&F>) -> Vec<Polyline>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let spec = &grid.spec;
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..spec.n_g - 1 {
        for i in 0..spec.n_delta - 1 {
            let c = [grid.at(i, j), grid.at(i + 1, j), grid.at(i + 1, j + 1), grid.at(i, j + 1)];
            if c.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let s = c.map(positive);
            let edges = [Edge::H(i, j), Edge::V(i + 1, j), Edge::H(i, j + 1), Edge::V(i, j)];
            // Edge k joins corners k and k+1.
            let cut: Vec<usize> = (0..4).filter(|&k| s[k] != s[(k + 1) % 4]).collect();
            match cut.len() {
                2 => segments.push((edges[cut[0]], edges[cut[1]])),
                4 => {
                    let centre = 0.25 * c.iter().sum::<f64>();
                    if positive(centre) == s[0] {
                        // Corners 0 and 2 connect through the centre.
                        segments.push((edges[0], edges[1]));
                        segments.push((edges[2], edges[3]));
                    } else {
                        segments.push((edges[3], edges[0]));
                        segments.push((edges[1], edges[2]));
                    }
                }
                _ => {}
            }
        }
    }

    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        by_edge.entry(*a).or_default().push(k);
        by_edge.entry(*b).or_default().push(k);
    }

    let mut used = vec![false; segments.len()];
    let mut chains: Vec<(Vec<Edge>, bool)> = Vec::new();
    let walk = |start_seg: usize, start_edge: Edge, used: &mut Vec<bool>| -> Vec<Edge> {
        let mut chain = vec![start_edge];
        let mut seg = start_seg;
        let mut at = start_edge;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == at { b } else { a };
            chain.push(next);
            let follow = by_edge[&next].iter().copied().find(|&k| !used[k]);
            match follow {
                Some(k) => {
                    seg = k;
                    at = next;
                }
                None => break,
            }
        }
        chain
    };

    // Open chains start at edges touched by a single segment.
    let mut endpoints: Vec<Edge> = by_edge.iter().filter(|(_, v)| v.len() == 1).map(|(e, _)| *e).collect();
    endpoints.sort();
    for e in endpoints {
        let k = by_edge[&e][0];
        if !used[k] {
            chains.push((walk(k, e, &mut used), false));
        }
    }
    for k in 0..segments.len() {
        if !used[k] {
            let chain = walk(k, segments[k].0, &mut used);
            let closed = chain.first() == chain.last();
            chains.push((chain, closed));
        }
    }

    let mut cache: HashMap<Edge, (f64, f64)> = HashMap::new();
    let mut out: Vec<Polyline> = chains
        .into_iter()
        .map(|(edges, cycle)| {
            let points: Vec<(f64, f64)> = edges
                .iter()
                .map(|e| *cache.entry(*e).or_insert_with(|| crossing_point(grid, *e, field)))
                .collect();
            let (start, end) = if cycle {
                (None, None)
            } else {
                (edges[0].side(spec), edges[edges.len() - 1].side(spec))
            };
            canonical(Polyline {
                points,
                closed: cycle,
                cycle,
                start,
                end,
            })
        })
        .collect();
    sort_polylines(&mut out);
    out
}

fn lex(a: &(f64, f64), b: &(f64, f64)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

/// Open polylines start at the smaller endpoint; cycles start at their
/// smallest vertex and run towards the smaller neighbour.
fn canonical(mut p: Polyline) -> Polyline {
    if p.cycle {
        p.points.pop();
        let k = (0..p.points.len()).min_by(|&a, &b| lex(&p.points[a], &p.points[b])).unwrap_or(0);
        p.points.rotate_left(k);
        let n = p.points.len();
        if n > 2 && lex(&p.points[n - 1], &p.points[1]).is_lt() {
            p.points[1..].reverse();
        }
        let first = p.points[0];
        p.points.push(first);
    } else if lex(&p.last(), &p.first()).is_lt() {
        p.points.reverse();
        std::mem::swap(&mut p.start, &mut p.end);
    }
    p
}

pub fn sort_polylines(v: &mut [Polyline]) {
    v.sort_by(|a, b| lex(&a.first(), &b.first()).then(a.points.len().cmp(&b.points.len())));
}
