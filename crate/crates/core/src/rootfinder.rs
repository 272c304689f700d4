//! Zeros of `G±(x)`: grid scan, bracket refinement and the regular spectrum.

use serde::Serialize;

use crate::gfunction::{self, check_pole_margin, Truncation, G_MAX_RATIO, G_MIN_RATIO, POLE_MARGIN};
use crate::oracle::G_PLUS_SECTOR;
use crate::{Energy, Error, ModelParams, Parity, Result, SpectralPoint};

/// Default scan step in units of ω.
pub const DEFAULT_STEP: f64 = 1.0 / 200.0;
/// Final bracket width in units of ω.
pub const X_TOL: f64 = 1e-12;
/// A same-sign local minimum of `|G|` that refines to below this fraction of
/// its bracket ends is reported as a tangent (suspected double) root.
pub const TANGENT_DEPTH: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn pick(&self, pair: (f64, f64)) -> f64 {
        match self {
            Branch::Plus => pair.0,
            Branch::Minus => pair.1,
        }
    }

    /// Oracle parity sector of the zeros of this branch.
    pub fn parity(&self) -> Parity {
        match self {
            Branch::Plus => G_PLUS_SECTOR,
            Branch::Minus => G_PLUS_SECTOR.flipped(),
        }
    }
}

/// A pair of functions with poles at `x = mω`, `m >= 0`.
pub trait BranchFunctions {
    fn omega(&self) -> f64;

    /// `(G+, G−)` at `x`. Must fail inside the pole margin.
    fn eval(&self, x: f64) -> Result<(f64, f64)>;
}

/// `G±` of the Rabi model under a truncation policy.
#[derive(Debug, Clone, Copy)]
pub struct GFunction {
    pub params: ModelParams,
    pub truncation: Truncation,
}

impl GFunction {
    pub fn new(params: ModelParams, truncation: Truncation) -> Self {
        Self { params, truncation }
    }
}

impl BranchFunctions for GFunction {
    fn omega(&self) -> f64 {
        self.params.omega()
    }

    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        gfunction::g_pair(SpectralPoint::new(x), &self.params, &self.truncation).map(|g| (g.g_plus, g.g_minus))
    }
}

/// `lo < hi`, opposite signs of the branch at the ends, no pole inside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub branch: Branch,
}

/// A same-sign local minimum of `|G|` that could hide two nearby zeros.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipCandidate {
    pub lo: f64,
    pub hi: f64,
    pub branch: Branch,
    /// `|G|` at the sample relative to the larger neighbour.
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Scan {
    pub brackets: Vec<Bracket>,
    pub dips: Vec<DipCandidate>,
    /// Intervals without usable samples: pole margins and failed evaluations.
    pub gaps: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub x_star: f64,
    pub branch: Branch,
    pub residual: f64,
    pub width: f64,
    pub suspected_double: bool,
    pub bisection_steps: usize,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    x: f64,
    /// Samples with different segment ids are separated by a pole or gap.
    segment: usize,
    value: Option<(f64, f64)>,
}

fn same_sign(a: f64, b: f64) -> bool {
    (a >= 0.0) == (b >= 0.0)
}

fn samples<F: BranchFunctions>(f: &F, x_lo: f64, x_hi: f64, step: f64, gaps: &mut Vec<(f64, f64)>) -> Vec<Sample> {
    let w = f.omega();
    let guard = 2.0 * POLE_MARGIN * w;
    let mut xs: Vec<f64> = Vec::new();
    let n_steps = ((x_hi - x_lo) / step).ceil().max(0.0) as usize;
    for k in 0..=n_steps {
        xs.push((x_lo + k as f64 * step).min(x_hi));
    }
    let first_pole = (x_lo / w).ceil().max(0.0) as i64;
    let last_pole = (x_hi / w).floor() as i64;
    let poles: Vec<f64> = (first_pole..=last_pole).map(|m| m as f64 * w).collect();
    xs.retain(|x| poles.iter().all(|p| (x - p).abs() >= guard));
    for &p in &poles {
        gaps.push((p - guard, p + guard));
        if p - guard >= x_lo {
            xs.push(p - guard);
        }
        if p + guard <= x_hi {
            xs.push(p + guard);
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let mut out: Vec<Sample> = Vec::with_capacity(xs.len());
    let mut segment = 0;
    for x in xs {
        if let Some(prev) = out.last() {
            if poles.iter().any(|&p| prev.x < p && p < x) {
                segment += 1;
            }
        }
        let value = f.eval(x).ok();
        if value.is_none() {
            gaps.push((x, x));
            segment += 1;
        }
        out.push(Sample { x, segment, value });
        if value.is_none() {
            segment += 1;
        }
    }
    out
}

/// Sign-change brackets and dip candidates of both branches on `[x_lo, x_hi]`.
pub fn scan_with<F: BranchFunctions>(f: &F, x_lo: f64, x_hi: f64, step: f64) -> Result<Scan> {
    if !(step > 0.0) || !x_lo.is_finite() || !x_hi.is_finite() {
        return Err(Error::InvalidArgument(format!("bad scan window [{x_lo}, {x_hi}] step {step}")));
    }
    let mut scan = Scan::default();
    if x_hi <= x_lo {
        return Ok(scan);
    }
    let pts = samples(f, x_lo, x_hi, step, &mut scan.gaps);
    for branch in Branch::BOTH {
        let vals: Vec<Option<f64>> = pts.iter().map(|s| s.value.map(|v| branch.pick(v))).collect();
        for i in 0..pts.len().saturating_sub(1) {
            if pts[i].segment != pts[i + 1].segment {
                continue;
            }
            if let (Some(a), Some(b)) = (vals[i], vals[i + 1]) {
                if !same_sign(a, b) {
                    scan.brackets.push(Bracket { lo: pts[i].x, hi: pts[i + 1].x, branch });
                }
            }
        }
        for i in 1..pts.len().saturating_sub(1) {
            let seg = pts[i].segment;
            if pts[i - 1].segment != seg || pts[i + 1].segment != seg {
                continue;
            }
            if let (Some(a), Some(b), Some(c)) = (vals[i - 1], vals[i], vals[i + 1]) {
                if same_sign(a, b) && same_sign(b, c) && b.abs() < a.abs() && b.abs() < c.abs() {
                    scan.dips.push(DipCandidate {
                        lo: pts[i - 1].x,
                        hi: pts[i + 1].x,
                        branch,
                        depth: b.abs() / a.abs().max(c.abs()),
                    });
                }
            }
        }
    }
    Ok(scan)
}

pub fn scan_brackets(p: &ModelParams, x_lo: f64, x_hi: f64, step: f64, t: &Truncation) -> Result<Scan> {
    if step > p.omega() / 100.0 {
        return Err(Error::InvalidArgument(format!("scan step {step} exceeds ω/100")));
    }
    scan_with(&GFunction::new(*p, *t), x_lo, x_hi, step)
}

fn eval_branch<F: BranchFunctions>(f: &F, x: f64, branch: Branch) -> Result<f64> {
    f.eval(x).map(|v| branch.pick(v)).map_err(|e| Error::LostBracket { x, source: Box::new(e) })
}

/// Bisection with opportunistic secant steps, down to width `X_TOL·ω`.
pub fn refine_with<F: BranchFunctions>(f: &F, b: &Bracket) -> Result<RootResult> {
    let tol = X_TOL * f.omega();
    let (mut lo, mut hi) = (b.lo.min(b.hi), b.lo.max(b.hi));
    let mut bisections = 0;
    if hi - lo > tol {
        let mut flo = eval_branch(f, lo, b.branch)?;
        let mut fhi = eval_branch(f, hi, b.branch)?;
        if flo == 0.0 {
            hi = lo;
        } else if fhi == 0.0 {
            lo = hi;
        }
        let mut try_secant = true;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let before = hi - lo;
            let secant = lo - flo * (hi - lo) / (fhi - flo);
            let x = if try_secant && secant > lo && secant < hi {
                secant
            } else {
                bisections += 1;
                mid
            };
            let fx = eval_branch(f, x, b.branch)?;
            if fx == 0.0 {
                lo = x;
                hi = x;
                break;
            }
            if same_sign(fx, flo) {
                lo = x;
                flo = fx;
            } else {
                hi = x;
                fhi = fx;
            }
            // Fall back to bisection whenever a step fails to halve the bracket.
            try_secant = hi - lo <= 0.5 * before;
        }
    }
    let x_star = 0.5 * (lo + hi);
    let residual = eval_branch(f, x_star, b.branch)?.abs();
    Ok(RootResult {
        x_star,
        branch: b.branch,
        residual,
        width: hi - lo,
        suspected_double: false,
        bisection_steps: bisections,
    })
}

pub fn refine_root(b: &Bracket, p: &ModelParams, t: &Truncation) -> Result<RootResult> {
    refine_with(&GFunction::new(*p, *t), b)
}

/// Golden-section search for the extremum inside a dip. Returns the two
/// brackets when the extremum crosses zero, or a flagged tangent root when it
/// only touches it.
fn resolve_dip<F: BranchFunctions>(f: &F, dip: &DipCandidate) -> Result<DipOutcome> {
    let sign = eval_branch(f, 0.5 * (dip.lo + dip.hi), dip.branch)?.signum();
    let h = |x: f64| eval_branch(f, x, dip.branch).map(|v| sign * v);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (dip.lo, dip.hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut hc, mut hd) = (h(c)?, h(d)?);
    let tol = X_TOL * f.omega();
    let ends = h(a)?.min(h(b)?);
    while b - a > tol {
        if hc < 0.0 || hd < 0.0 {
            let x = if hc < hd { c } else { d };
            return Ok(DipOutcome::Split(
                Bracket { lo: dip.lo, hi: x, branch: dip.branch },
                Bracket { lo: x, hi: dip.hi, branch: dip.branch },
            ));
        }
        if hc < hd {
            b = d;
            d = c;
            hd = hc;
            c = b - inv_phi * (b - a);
            hc = h(c)?;
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + inv_phi * (b - a);
            hd = h(d)?;
        }
    }
    let x = 0.5 * (a + b);
    let depth = h(x)?;
    if depth <= TANGENT_DEPTH * ends {
        Ok(DipOutcome::Tangent(RootResult {
            x_star: x,
            branch: dip.branch,
            residual: depth.abs(),
            width: b - a,
            suspected_double: true,
            bisection_steps: 0,
        }))
    } else {
        Ok(DipOutcome::Empty)
    }
}

enum DipOutcome {
    Split(Bracket, Bracket),
    Tangent(RootResult),
    Empty,
}

/// All zeros of both branches on `[x_lo, x_hi]`, sorted by position.
pub fn roots_with<F: BranchFunctions>(f: &F, x_lo: f64, x_hi: f64, step: f64) -> Result<(Vec<RootResult>, Scan)> {
    let scan = scan_with(f, x_lo, x_hi, step)?;
    let mut roots = Vec::new();
    for b in &scan.brackets {
        roots.push(refine_with(f, b)?);
    }
    for dip in &scan.dips {
        match resolve_dip(f, dip)? {
            DipOutcome::Split(left, right) => {
                roots.push(refine_with(f, &left)?);
                roots.push(refine_with(f, &right)?);
            }
            DipOutcome::Tangent(r) => roots.push(r),
            DipOutcome::Empty => {}
        }
    }
    roots.sort_by(|a, b| a.x_star.total_cmp(&b.x_star).then(a.branch.cmp(&b.branch)));
    roots.dedup_by(|a, b| a.branch == b.branch && (a.x_star - b.x_star).abs() <= 10.0 * X_TOL * f.omega());
    Ok((roots, scan))
}

/// Lowest part of the regular spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularSpectrum {
    pub energies: Vec<Energy>,
    pub roots: Vec<RootResult>,
    /// Pole-margin intervals (in `x`) where zeros cannot be certified.
    pub pole_gaps: Vec<(f64, f64)>,
}

/// Checks that `p` lies in the coupling window of the series path.
pub fn check_supported(p: &ModelParams) -> Result<()> {
    let ratio = p.coupling_ratio();
    if !(G_MIN_RATIO..=G_MAX_RATIO).contains(&ratio) {
        return Err(Error::UnsupportedCoupling {
            ratio,
            min: G_MIN_RATIO,
            max: G_MAX_RATIO,
        });
    }
    if p.delta() == 0.0 {
        return Err(Error::ZeroSplitting);
    }
    Ok(())
}

/// Lowest `count` regular eigenvalues from the zeros of `G±`.
///
/// Exceptional eigenvalues at `x = nω` are not produced here.
pub fn regular_spectrum(p: &ModelParams, count: usize, t: &Truncation) -> Result<RegularSpectrum> {
    regular_spectrum_with(&GFunction::new(*p, *t), p, count)
}

/// [`regular_spectrum`] for any pair of branch functions sharing the pole
/// layout of `G±` at parameters `p`.
pub fn regular_spectrum_with<F: BranchFunctions>(f: &F, p: &ModelParams, count: usize) -> Result<RegularSpectrum> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }
    check_supported(p)?;
    let w = p.omega();
    let x_floor = -p.delta() - 0.5 * w;
    let mut span = (count / 2 + 3) as f64 * w;
    let cap = (4 * count + 20) as f64 * w;
    loop {
        let x_hi = x_floor + span;
        let (roots, scan) = roots_with(f, x_floor, x_hi, DEFAULT_STEP * w)?;
        if roots.len() >= count || span >= cap {
            if roots.len() < count {
                return Err(Error::InvalidArgument(format!(
                    "found only {} zeros below x = {x_hi}",
                    roots.len()
                )));
            }
            let roots: Vec<RootResult> = roots.into_iter().take(count).collect();
            let energies = roots
                .iter()
                .map(|r| Energy::regular(r.x_star - p.shift(), r.branch.parity()))
                .collect();
            let top = roots.last().map(|r| r.x_star).unwrap_or(x_floor);
            let pole_gaps = scan.gaps.into_iter().filter(|g| g.0 <= top && g.0 < g.1).collect();
            return Ok(RegularSpectrum {
                energies,
                roots,
                pole_gaps,
            });
        }
        span *= 2.0;
    }
}

/// `x` is outside every pole margin up to index `max_index`.
pub fn off_pole(x: f64, p: &ModelParams, max_index: usize) -> bool {
    check_pole_margin(x, p, max_index).is_ok()
}
