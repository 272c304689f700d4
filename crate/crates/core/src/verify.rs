//! Verification campaign: the G-function solution against the oracle and
//! against the analytic facts about the exceptional spectrum.
//!
//! Each check returns a [`CheckResult`] with the measured figure and the
//! tolerance it was held to. All randomness is drawn from a seeded ChaCha
//! stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contour::{GridSpec, Polyline};
use crate::eigen::{eigenvalues, SymmetricMatrix};
use crate::exceptional::{self, axis_intercepts, count_components, juddian_locus, nondegenerate_locus, ContourSet};
use crate::gfunction::{check_pole_margin, k_coeffs, numerical_limit_residue, residue_pair, Truncation, POLE_MARGIN};
use crate::oracle::{self, degeneracy_count, oracle_spectrum, FockTruncation, G_PLUS_SECTOR};
use crate::rootfinder::{regular_spectrum, regular_spectrum_with, BranchFunctions};
use crate::{validate_params, ModelParams, Parity, Result, SpectralPoint};

pub const DEFAULT_SEED: u64 = 20_131_104;
pub const REPORT_SCHEMA: u32 = 1;

pub const ORACLE_TOL: f64 = 1e-8;
pub const ELLIPSE_TOL: f64 = 1e-6;
pub const DEGENERACY_TOL: f64 = 2e-6;
pub const INTERCEPT_TOL: f64 = 1e-3;
pub const RESIDUE_ZERO_TOL: f64 = 1e-8;
pub const RESIDUE_NONZERO_MIN: f64 = 1e-3;
pub const RESIDUE_MATCH_TOL: f64 = 1e-8;
pub const DISPLACED_TOL: f64 = 1e-10;
pub const PROPERTY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn at_most(check: &str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self::new(check, measured <= tolerance, measured, tolerance, detail)
    }

    fn at_least(check: &str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self::new(check, measured >= tolerance, measured, tolerance, detail)
    }

    fn new(check: &str, ok: bool, measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            check: check.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            tolerance,
            detail,
        }
    }

    fn error(check: &str, tolerance: f64, err: impl std::fmt::Display) -> Self {
        Self::new(check, false, f64::NAN, tolerance, format!("error: {err}"))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One-line summary, e.g. for test logs.
    pub fn line(&self) -> String {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        format!(
            "[{tag}] {:<32} measured={:<12.4e} tolerance={:<10.3e} {}",
            self.check, self.measured, self.tolerance, self.detail
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub quick: bool,
    pub truncation: Truncation,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            quick: false,
            truncation: Truncation::default(),
        }
    }
}

impl VerifyConfig {
    pub fn quick() -> Self {
        Self { quick: true, ..Self::default() }
    }

    fn cells(&self) -> usize {
        if self.quick {
            160
        } else {
            400
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub seed: u64,
    pub quick: bool,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn params(omega: f64, g: f64, delta: f64) -> ModelParams {
    validate_params(omega, g, delta).expect("campaign parameters are valid")
}

/// Random parameter sets with ω = 1, g ∈ [0.1, 1], Δ ∈ [0.1, 1.5].
pub fn random_parameter_sets(cfg: &VerifyConfig, count: usize) -> Vec<ModelParams> {
    let mut rng = cfg.rng(1);
    (0..count)
        .map(|_| params(1.0, rng.random_range(0.1..=1.0), rng.random_range(0.1..=1.5)))
        .collect()
}

/// Regular spectrum vs. oracle for seeded random parameter sets.
pub fn oracle_equivalence(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let t = cfg.truncation;
    oracle_equivalence_with(cfg, |p| regular_spectrum(p, 8, &t).map(|s| s.energies.iter().map(|e| (e.value, e.parity)).collect()))
}

/// As [`oracle_equivalence`] with a custom solver. Used for fault injection.
pub fn oracle_equivalence_with<S>(cfg: &VerifyConfig, solver: S) -> Vec<CheckResult>
where
    S: Fn(&ModelParams) -> Result<Vec<(f64, Parity)>>,
{
    const NAME: &str = "oracle_equivalence";
    const PARITY: &str = "parity_mapping";
    let sets = random_parameter_sets(cfg, if cfg.quick { 6 } else { 20 });
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut parity_mismatches = 0usize;
    for p in &sets {
        let reference = match oracle_spectrum(p, &FockTruncation::default(), 8) {
            Ok(s) => s,
            Err(e) => return vec![CheckResult::error(NAME, ORACLE_TOL, e)],
        };
        let ours = match solver(p) {
            Ok(v) => v,
            Err(e) => return vec![CheckResult::error(NAME, ORACLE_TOL, format!("{p}: {e}"))],
        };
        if ours.len() != reference.energies.len() {
            return vec![CheckResult::error(NAME, ORACLE_TOL, format!("{p}: {} levels", ours.len()))];
        }
        for ((e, parity), (r, rp)) in ours.iter().zip(reference.energies.iter().zip(&reference.parities)) {
            let d = (e - r).abs();
            if d > worst || d.is_nan() {
                worst = if d.is_nan() { f64::INFINITY } else { d };
                worst_at = format!("{p}");
            }
            if parity != rp {
                parity_mismatches += 1;
            }
        }
    }
    vec![
        CheckResult::at_most(
            NAME,
            worst,
            ORACLE_TOL,
            format!("{} sets x 8 levels, m_max 80 (checked at 100); worst at {worst_at}", sets.len()),
        ),
        CheckResult::at_most(
            PARITY,
            parity_mismatches as f64,
            0.0,
            format!("G+ zeros in oracle sector {:?}", G_PLUS_SECTOR),
        ),
    ]
}

/// Window of the Figure-1 panels: Δ ∈ [0, n + 0.5], g ∈ [0.02, 1].
pub fn figure_window(n: usize, cells: usize) -> GridSpec {
    GridSpec::new((0.0, n as f64 + 0.5), (0.02, 1.0), cells, cells).expect("valid window")
}

/// `K_1(ω) = 0` traces `4g² + Δ² = ω²`; the point (0.3, 0.8) is doubly degenerate.
pub fn juddian_ellipse(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let base = params(1.0, 0.5, 0.5);
    let grid = GridSpec::new((0.0, 1.2), (0.02, 0.6), cfg.cells(), cfg.cells()).expect("valid window");
    let locus = match juddian_locus(1, &grid, &base) {
        Ok(c) => c,
        Err(e) => return vec![CheckResult::error("juddian_n1_ellipse", ELLIPSE_TOL, e)],
    };
    let mut worst = 0.0f64;
    let mut vertices = 0;
    for l in &locus.polylines {
        for &(d, g) in &l.points {
            worst = worst.max((4.0 * g * g + d * d - 1.0).abs());
            vertices += 1;
        }
    }
    if vertices == 0 {
        worst = f64::INFINITY;
    }
    let p = params(1.0, 0.3, 0.8);
    let count = oracle_spectrum(&p, &FockTruncation::default(), 10)
        .map(|s| degeneracy_count(&s, 1.0 - 0.09, DEGENERACY_TOL))
        .unwrap_or(0);
    vec![
        CheckResult::at_most(
            "juddian_n1_ellipse",
            worst,
            ELLIPSE_TOL,
            format!("max |4g²+Δ²−1| over {vertices} refined vertices"),
        ),
        CheckResult::new(
            "juddian_n1_oracle_degeneracy",
            count == 2,
            count as f64,
            2.0,
            "eigenvalues within 2e-6 of E = 0.91 at (g, Δ) = (0.3, 0.8)".into(),
        ),
    ]
}

/// Closed Juddian components for n = 0..3 over the Figure-1 windows.
pub fn figure_topology(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let base = params(1.0, 0.5, 0.5);
    let mut out = Vec::new();
    for n in 0..=3 {
        let name = format!("figure_topology_n{n}");
        match juddian_locus(n, &figure_window(n, cfg.cells()), &base) {
            Ok(cs) => {
                let (closed, open) = count_components(&cs);
                out.push(CheckResult::new(
                    &name,
                    closed == n && open == 0,
                    closed as f64,
                    n as f64,
                    format!("closed={closed} open={open}"),
                ));
            }
            Err(e) => out.push(CheckResult::error(&name, n as f64, e)),
        }
    }
    out
}

fn cofactor_loci(n: usize, cfg: &VerifyConfig) -> Result<(ContourSet, ContourSet)> {
    let grid = exceptional::default_window(n, 1.0, cfg.cells())?;
    nondegenerate_locus(n, &grid, &params(1.0, 0.5, 0.5), &cfg.truncation)
}

/// The `c± = 0` lines meet g = 0 at Δ = n+1 and n+2.
pub fn nondegenerate_intercepts(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for n in 0..=2 {
        let name = format!("axis_intercepts_n{n}");
        let (plus, minus) = match cofactor_loci(n, cfg) {
            Ok(v) => v,
            Err(e) => {
                out.push(CheckResult::error(&name, INTERCEPT_TOL, e));
                continue;
            }
        };
        let mut hits = axis_intercepts(&plus);
        hits.extend(axis_intercepts(&minus));
        hits.sort_by(f64::total_cmp);
        let targets = [(n + 1) as f64, (n + 2) as f64];
        let worst = targets
            .iter()
            .map(|t| hits.iter().map(|h| (h - t).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        let listed: Vec<String> = hits.iter().map(|h| format!("{h:.6}")).collect();
        out.push(CheckResult::at_most(&name, worst, INTERCEPT_TOL, format!("intercepts [{}]", listed.join(", "))));
    }
    out
}

/// Evenly spread interior vertices (g within `g_band`) of the given polylines.
fn spread_vertices(lines: &[(usize, &Polyline)], g_band: (f64, f64), count: usize, keep: impl Fn(usize, (f64, f64)) -> bool) -> Vec<(usize, (f64, f64))> {
    let pool: Vec<(usize, (f64, f64))> = lines
        .iter()
        .flat_map(|(n, l)| {
            let k = l.points.len();
            l.points[1..k.saturating_sub(1)].iter().map(move |&q| (*n, q))
        })
        .filter(|&(n, q)| q.1 >= g_band.0 && q.1 <= g_band.1 && keep(n, q))
        .collect();
    if pool.is_empty() {
        return Vec::new();
    }
    (0..count).map(|i| pool[(i * pool.len()) / count + pool.len() / (2 * count)]).collect()
}

fn exceptional_energy(n: usize, p: &ModelParams) -> f64 {
    n as f64 * p.omega() - p.shift()
}

/// Oracle count of levels within 2e-6 of `nω − g²/ω`, with their parities.
fn oracle_levels_at(n: usize, p: &ModelParams) -> Result<Vec<Parity>> {
    let count = 2 * n + 10;
    let s = oracle_spectrum(p, &FockTruncation::default(), count)?;
    let target = exceptional_energy(n, p);
    Ok(s.levels().filter(|e| (e.value - target).abs() <= DEGENERACY_TOL).map(|e| e.parity).collect())
}

/// Residue behaviour on refined exceptional points, and the oracle's view
/// of the same points.
pub fn residue_dichotomy(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let base = params(1.0, 0.5, 0.5);
    let t = cfg.truncation;
    let mut out = Vec::new();

    let mut juddian_sets = Vec::new();
    for n in 1..=3 {
        match juddian_locus(n, &figure_window(n, cfg.cells()), &base) {
            Ok(cs) => juddian_sets.push(cs),
            Err(e) => return vec![CheckResult::error("residue_juddian", RESIDUE_ZERO_TOL, e)],
        }
    }
    let lines: Vec<(usize, &Polyline)> = juddian_sets
        .iter()
        .flat_map(|cs| cs.polylines.iter().map(move |l| (cs.level_index, l)))
        .collect();
    let points = spread_vertices(&lines, (0.05, 0.95), 10, |_, _| true);
    let mut worst = if points.len() == 10 { 0.0f64 } else { f64::INFINITY };
    let mut oracle_bad = 0usize;
    for &(n, (d, g)) in &points {
        let p = params(1.0, g, d);
        match residue_pair(n, &p, &t) {
            Ok(r) => worst = worst.max(r.r_plus_normalized().abs()).max(r.r_minus_normalized().abs()),
            Err(_) => worst = f64::INFINITY,
        }
        match oracle_levels_at(n, &p) {
            Ok(levels) if levels.len() == 2 && levels[0] != levels[1] => {}
            _ => oracle_bad += 1,
        }
    }
    out.push(CheckResult::at_most(
        "residue_juddian_both_vanish",
        worst,
        RESIDUE_ZERO_TOL,
        format!("max normalized |R±| over {} Juddian points (n = 1..3)", points.len()),
    ));
    out.push(CheckResult::at_most(
        "juddian_oracle_degeneracy",
        oracle_bad as f64,
        0.0,
        "points without exactly two oracle levels (one per parity) at nω − g²/ω".into(),
    ));

    let mut cof_sets = Vec::new();
    for n in 0..=2 {
        match cofactor_loci(n, cfg) {
            Ok((plus, minus)) => {
                cof_sets.push(plus);
                cof_sets.push(minus);
            }
            Err(e) => {
                out.push(CheckResult::error("residue_nondegenerate", RESIDUE_ZERO_TOL, e));
                return out;
            }
        }
    }
    let lines: Vec<(usize, &Polyline)> = cof_sets
        .iter()
        .enumerate()
        .flat_map(|(k, cs)| cs.polylines.iter().map(move |l| (k, l)))
        .collect();
    let away_from_juddian = |k: usize, q: (f64, f64)| {
        let n = cof_sets[k].level_index;
        n == 0 || exceptional::juddian_field(n, 1.0, q.0, q.1).abs() > 1e-2
    };
    let points = spread_vertices(&lines, (0.05, 0.95), 10, away_from_juddian);
    let mut small = if points.len() == 10 { 0.0f64 } else { f64::INFINITY };
    let mut large = f64::INFINITY;
    let mut oracle_bad = 0usize;
    for &(k, (d, g)) in &points {
        let cs = &cof_sets[k];
        let n = cs.level_index;
        let plus = cs.kind == exceptional::LocusKind::CofactorPlus;
        let p = params(1.0, g, d);
        match residue_pair(n, &p, &t) {
            Ok(r) => {
                let (rp, rm) = (r.r_plus_normalized().abs(), r.r_minus_normalized().abs());
                let (zero, other) = if plus { (rp, rm) } else { (rm, rp) };
                small = small.max(zero);
                large = large.min(other);
            }
            Err(_) => small = f64::INFINITY,
        }
        let want = if plus { G_PLUS_SECTOR } else { G_PLUS_SECTOR.flipped() };
        match oracle_levels_at(n, &p) {
            Ok(levels) if levels == [want] => {}
            _ => oracle_bad += 1,
        }
    }
    out.push(CheckResult::at_most(
        "residue_nondegenerate_one_vanishes",
        small,
        RESIDUE_ZERO_TOL,
        format!("max normalized residue of the lifted branch over {} points (n = 0..2)", points.len()),
    ));
    out.push(CheckResult::at_least(
        "residue_nondegenerate_other_finite",
        large,
        RESIDUE_NONZERO_MIN,
        "min normalized residue of the other branch".into(),
    ));
    out.push(CheckResult::at_most(
        "nondegenerate_oracle_single_level",
        oracle_bad as f64,
        0.0,
        "points without exactly one oracle level, of the lifted branch's parity, at nω − g²/ω".into(),
    ));
    out
}

/// Laurent-chain residues against the numerical limit of `(x − nω) G±(x)`.
///
/// The error is taken relative to the residue scale (the sum of magnitudes
/// of the terms that make up `R±`), which stays meaningful where `R±`
/// itself vanishes.
pub fn residue_equivalence(cfg: &VerifyConfig) -> Vec<CheckResult> {
    const NAME: &str = "residue_method_equivalence";
    let axis = [0.2, 0.4, 0.6, 0.8, 1.0];
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for n in 0..=2 {
        for &g in &axis {
            for &d in &axis {
                let p = params(1.0, g, d);
                let (chain, limit) = match (residue_pair(n, &p, &cfg.truncation), numerical_limit_residue(n, &p, &cfg.truncation)) {
                    (Ok(c), Ok(l)) => (c, l),
                    (Err(e), _) | (_, Err(e)) => return vec![CheckResult::error(NAME, RESIDUE_MATCH_TOL, format!("{p}: {e}"))],
                };
                let ep = (chain.r_plus - limit.0).abs() / chain.r_plus.abs().max(chain.r_plus_scale());
                let em = (chain.r_minus - limit.1).abs() / chain.r_minus.abs().max(chain.r_minus_scale());
                if ep.max(em) > worst {
                    worst = ep.max(em);
                    worst_at = format!("n={n} {p}");
                }
            }
        }
    }
    vec![CheckResult::at_most(
        NAME,
        worst,
        RESIDUE_MATCH_TOL,
        format!("5x5 (g, Δ) grid, n = 0..2; worst at {worst_at}"),
    )]
}

/// g = 0 and Δ = 0 limits of the oracle.
pub fn analytic_limits(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let mut rng = cfg.rng(2);
    let mut worst_free = 0.0f64;
    for _ in 0..5 {
        let p = params(1.0, 0.0, rng.random_range(0.05..1.5));
        match oracle_spectrum(&p, &FockTruncation::default(), 12) {
            Ok(s) => {
                let exact = oracle::decoupled_spectrum(&p, 12);
                for (a, b) in s.energies.iter().zip(&exact) {
                    worst_free = worst_free.max((a - b.value).abs());
                }
            }
            Err(e) => return vec![CheckResult::error("limit_zero_coupling", 0.0, e)],
        }
    }
    let mut worst_displaced = 0.0f64;
    for g in [0.2, 0.5, 0.8, 1.0] {
        let p = params(1.0, g, 0.0);
        match oracle_spectrum(&p, &FockTruncation::default(), 12) {
            Ok(s) => {
                for (i, e) in s.energies.iter().enumerate() {
                    let want = (i / 2) as f64 - g * g;
                    worst_displaced = worst_displaced.max((e - want).abs());
                }
            }
            Err(e) => return vec![CheckResult::error("limit_zero_splitting", DISPLACED_TOL, e)],
        }
    }
    vec![
        CheckResult::at_most("limit_zero_coupling", worst_free, 0.0, "oracle vs mω ± Δ, 5 random Δ".into()),
        CheckResult::at_most(
            "limit_zero_splitting",
            worst_displaced,
            DISPLACED_TOL,
            "oracle vs doubly degenerate mω − g²/ω, m_max 80".into(),
        ),
    ]
}

/// Random `x` in `[lo, hi]` at least `10 · POLE_MARGIN` away from every pole.
pub fn random_off_pole_x(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    loop {
        let x: f64 = rng.random_range(lo..hi);
        if (x - x.round()).abs() > 10.0 * POLE_MARGIN || x.round() < 0.0 {
            return x;
        }
    }
}

/// Recurrence, eigensolver and parity-sector property suites.
pub fn property_suites(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let instances = if cfg.quick { 25 } else { 100 };
    let mut rng = cfg.rng(3);

    let mut worst_rec = 0.0f64;
    for _ in 0..instances {
        let p = params(1.0, rng.random_range(0.1..1.5), rng.random_range(0.1..1.5));
        let x = random_off_pole_x(&mut rng, -2.0, 6.0);
        match k_coeffs(SpectralPoint::new(x), &p, &cfg.truncation) {
            Ok(ks) => worst_rec = worst_rec.max(ks.recurrence_residual(&p)),
            Err(e) => return vec![CheckResult::error("kseries_recurrence", PROPERTY_TOL, e)],
        }
    }

    let mut worst_trace = 0.0f64;
    let mut worst_frob = 0.0f64;
    for _ in 0..instances {
        let dim = rng.random_range(2..=12);
        let mut m = SymmetricMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.set(i, j, rng.random_range(-1.0..1.0));
            }
        }
        match eigenvalues(&m) {
            Ok(ev) => {
                worst_trace = worst_trace.max((ev.iter().sum::<f64>() - m.trace()).abs());
                worst_frob = worst_frob.max((ev.iter().map(|v| v * v).sum::<f64>() - m.frobenius_sq()).abs());
            }
            Err(e) => return vec![CheckResult::error("eigen_trace", PROPERTY_TOL, e)],
        }
    }

    let mut worst_union = 0.0f64;
    let small = FockTruncation::unchecked(6);
    for _ in 0..instances {
        let p = params(1.0, rng.random_range(0.0..1.5), rng.random_range(0.0..1.5));
        let full = eigenvalues(&oracle::build_hamiltonian(&p, &small));
        let (hp, hm) = oracle::parity_reduce(&p, &small);
        match (full, eigenvalues(&hp), eigenvalues(&hm)) {
            (Ok(full), Ok(mut a), Ok(b)) => {
                a.extend(b);
                a.sort_by(f64::total_cmp);
                for (x, y) in full.iter().zip(&a) {
                    worst_union = worst_union.max((x - y).abs());
                }
            }
            _ => return vec![CheckResult::error("sector_union", PROPERTY_TOL, "eigensolver failure")],
        }
    }

    vec![
        CheckResult::at_most("kseries_recurrence", worst_rec, PROPERTY_TOL, format!("{instances} random (x, g, Δ)")),
        CheckResult::at_most("eigen_trace", worst_trace, PROPERTY_TOL, format!("{instances} random symmetric matrices")),
        CheckResult::at_most("eigen_frobenius", worst_frob, PROPERTY_TOL, format!("{instances} random symmetric matrices")),
        CheckResult::at_most("sector_union", worst_union, PROPERTY_TOL, format!("{instances} random (g, Δ), m_max 6")),
    ]
}

/// Runs every check.
pub fn run_all(cfg: &VerifyConfig) -> Report {
    run_with_solver(cfg, None::<fn(&ModelParams) -> Result<Vec<(f64, Parity)>>>)
}

/// Runs every check, replacing the regular-spectrum solver when `solver` is given.
pub fn run_with_solver<S>(cfg: &VerifyConfig, solver: Option<S>) -> Report
where
    S: Fn(&ModelParams) -> Result<Vec<(f64, Parity)>>,
{
    let mut checks = match solver {
        Some(s) => oracle_equivalence_with(cfg, s),
        None => oracle_equivalence(cfg),
    };
    checks.extend(juddian_ellipse(cfg));
    checks.extend(figure_topology(cfg));
    checks.extend(nondegenerate_intercepts(cfg));
    checks.extend(residue_dichotomy(cfg));
    checks.extend(residue_equivalence(cfg));
    checks.extend(analytic_limits(cfg));
    checks.extend(property_suites(cfg));
    Report {
        schema: REPORT_SCHEMA,
        seed: cfg.seed,
        quick: cfg.quick,
        passed: checks.iter().all(CheckResult::passed),
        checks,
    }
}

/// Regular spectrum from any branch functions, for fault-injection runs.
pub fn spectrum_from<F: BranchFunctions>(f: &F, p: &ModelParams, count: usize) -> Result<Vec<(f64, Parity)>> {
    regular_spectrum_with(f, p, count).map(|s| s.energies.iter().map(|e| (e.value, e.parity)).collect())
}

/// `G±` with the sign of `Δ²/(x − nω)` in `f_n` flipped. Any solver built on
/// it must fail [`oracle_equivalence_with`]; used as a mutation canary.
#[derive(Debug, Clone, Copy)]
pub struct SignFaultGFunction {
    pub params: ModelParams,
    pub truncation: Truncation,
}

impl BranchFunctions for SignFaultGFunction {
    fn omega(&self) -> f64 {
        self.params.omega()
    }

    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let p = &self.params;
        let (w, g, d) = (p.omega(), p.g(), p.delta());
        check_pole_margin(x, p, self.truncation.max_terms)?;
        let f = |n: usize| {
            let nw = n as f64 * w;
            2.0 * g / w + (nw - x - d * d / (x - nw)) / (2.0 * g)
        };
        let ratio = g / w;
        let (mut k_prev, mut k) = (0.0, 1.0);
        let (mut gp, mut gm) = (0.0, 0.0);
        let mut power = 1.0;
        for n in 0..self.truncation.max_terms {
            let pole = d / (x - n as f64 * w);
            gp += k * (1.0 - pole) * power;
            gm += k * (1.0 + pole) * power;
            let next = (f(n) * k - k_prev) / (n + 1) as f64;
            k_prev = k;
            k = next;
            power *= ratio;
        }
        Ok((gp, gm))
    }
}

/// Every check, with the regular spectrum computed from [`SignFaultGFunction`].
pub fn run_with_fault(cfg: &VerifyConfig) -> Report {
    let t = cfg.truncation;
    run_with_solver(
        cfg,
        Some(move |p: &ModelParams| spectrum_from(&SignFaultGFunction { params: *p, truncation: t }, p, 8)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_sets_are_seeded_and_in_range() {
        let cfg = VerifyConfig::default();
        let a = random_parameter_sets(&cfg, 20);
        assert_eq!(a, random_parameter_sets(&cfg, 20));
        assert!(a.iter().all(|p| (0.1..=1.0).contains(&p.g()) && (0.1..=1.5).contains(&p.delta())));
        let other = VerifyConfig { seed: 1, ..cfg };
        assert_ne!(a, random_parameter_sets(&other, 20));
    }

    #[test]
    fn status_follows_the_comparison() {
        assert!(CheckResult::at_most("a", 1e-9, 1e-8, String::new()).passed());
        assert!(!CheckResult::at_most("a", f64::NAN, 1e-8, String::new()).passed());
        assert!(!CheckResult::at_least("b", 1e-4, 1e-3, String::new()).passed());
        assert!(!CheckResult::error("c", 0.0, "boom").passed());
        assert!(CheckResult::at_most("d", 0.0, 0.0, String::new()).line().starts_with("[PASS] d"));
    }

    #[test]
    fn sign_fault_moves_the_levels() {
        let p = params(1.0, 0.5, 0.7);
        let t = Truncation::default();
        let good = regular_spectrum(&p, 4, &t).unwrap();
        let bad = spectrum_from(&SignFaultGFunction { params: p, truncation: t }, &p, 4).unwrap();
        let shift = good.energies.iter().zip(&bad).map(|(a, b)| (a.value - b.0).abs()).fold(0.0, f64::max);
        assert!(shift > 1e-3);
    }

    #[test]
    fn off_pole_draws_keep_their_distance() {
        let mut rng = VerifyConfig::default().rng(9);
        for _ in 0..1000 {
            let x = random_off_pole_x(&mut rng, -1.0, 5.0);
            assert!(x.round() < 0.0 || (x - x.round()).abs() > 10.0 * POLE_MARGIN);
        }
    }
}
