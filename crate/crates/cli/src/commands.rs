use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use thiserror::Error;

use rabi_core::contour::{GridSpec, Polyline};
use rabi_core::exceptional::{self, axis_intercepts, count_components, ContourSet, LocusKind};
use rabi_core::gfunction::{g_pair, residue_pair, Truncation, G_MAX_RATIO, G_MIN_RATIO};
use rabi_core::oracle::{self, oracle_spectrum, FockTruncation};
use rabi_core::rootfinder::{regular_spectrum, DEFAULT_STEP};
use rabi_core::verify::{self, Report, VerifyConfig};
use rabi_core::{validate_params, Energy, EnergyKind, ModelParams, SpectralPoint};

use crate::output::{emit, pretty, Cell, Table};
use crate::svg::{self, Layer, Panel};
use crate::{Common, Family, Format};

const MAX_CELLS: usize = 2000;
const MAX_FIGURE_N: usize = 6;
const MAX_GSCAN_ROWS: usize = 10_000_000;
const DEFAULT_CELLS: usize = 400;
const QUICK_CELLS: usize = 160;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Model(#[from] rabi_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0} of {1} checks failed")]
    Verification(usize, usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(..) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    emit(path, text).map_err(|source| CliError::Io {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    })
}

fn table_format(c: &Common) -> Result<Format> {
    match c.format.unwrap_or(Format::Csv) {
        Format::Svg => Err(usage("svg output is only available for `figure` and `locus`")),
        f => Ok(f),
    }
}

fn write_table(c: &Common, t: &Table) -> Result<()> {
    let text = match table_format(c)? {
        Format::Json => t.to_json(),
        _ => t.to_csv(),
    };
    write_out(c.out.as_deref(), &text)
}

fn params(c: &Common) -> Result<ModelParams> {
    Ok(validate_params(c.omega, c.g, c.delta)?)
}

fn with_params(t: Table, p: &ModelParams) -> Table {
    t.meta("omega", p.omega()).meta("g", p.g()).meta("delta", p.delta())
}

pub fn spectrum(c: &Common) -> Result<()> {
    let p = params(c)?;
    table_format(c)?;
    if c.levels == 0 {
        return Err(usage("--levels must be at least 1"));
    }
    let rows = spectrum_rows(&p, c.levels)?;
    let mut t = with_params(
        Table::new("spectrum", &["index", "energy", "parity", "kind", "method", "residual"]),
        &p,
    );
    for (i, (e, method, residual)) in rows.into_iter().enumerate() {
        t.push(vec![
            Cell::Int(i),
            Cell::Num(e.value),
            e.parity.label().into(),
            e.kind.label().into(),
            method.into(),
            Cell::Num(residual),
        ]);
    }
    write_table(c, &t)
}

fn spectrum_rows(p: &ModelParams, levels: usize) -> Result<Vec<(Energy, &'static str, f64)>> {
    let ratio = p.coupling_ratio();
    if p.g() == 0.0 {
        return Ok(oracle::decoupled_spectrum(p, levels).into_iter().map(|e| (e, "oracle", 0.0)).collect());
    }
    if p.delta() == 0.0 {
        return Ok(oracle::displaced_oscillator_spectrum(p, levels)
            .into_iter()
            .map(|e| (e, "oracle", 0.0))
            .collect());
    }
    if !(G_MIN_RATIO..=G_MAX_RATIO).contains(&ratio) {
        let m_max = oracle::DEFAULT_M_MAX.max(2 * levels + 20);
        let s = oracle_spectrum(p, &FockTruncation::new(m_max)?, levels)?;
        return Ok(s.levels().map(|e| (e, "oracle", 0.0)).collect());
    }

    let t = Truncation::default();
    let regular = regular_spectrum(p, levels, &t)?;
    let mut rows: Vec<(Energy, &'static str, f64)> = regular
        .energies
        .iter()
        .zip(&regular.roots)
        .map(|(e, r)| (*e, "gfunction", r.residual))
        .collect();
    let top = regular.roots.last().map_or(0.0, |r| r.x_star);
    let n_max = (top / p.omega()).ceil().max(0.0) as usize + 1;
    for e in exceptional::exceptional_energies(p, n_max, &t)? {
        let n = ((e.value + p.shift()) / p.omega()).round() as usize;
        let r = residue_pair(n, p, &t)?;
        let residual = match e.kind {
            EnergyKind::JuddianDegenerate => r.k_normalized().abs(),
            _ if e.parity == oracle::G_PLUS_SECTOR => r.c_plus_normalized().abs(),
            _ => r.c_minus_normalized().abs(),
        };
        rows.push((e, "gfunction", residual));
    }
    rows.sort_by(|a, b| a.0.value.total_cmp(&b.0.value).then(a.0.parity.cmp(&b.0.parity)));
    rows.truncate(levels);
    Ok(rows)
}

pub fn gscan(c: &Common, x_min: Option<f64>, x_max: Option<f64>, step: Option<f64>) -> Result<()> {
    let p = params(c)?;
    table_format(c)?;
    let w = p.omega();
    let lo = x_min.unwrap_or(-p.delta() - 0.5 * w);
    let hi = x_max.unwrap_or(lo + 5.0 * w);
    let step = step.unwrap_or(DEFAULT_STEP * w);
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(usage("need finite --x-min <= --x-max"));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(usage("--step must be positive"));
    }
    let intervals = ((hi - lo) / step).round();
    if intervals >= MAX_GSCAN_ROWS as f64 {
        return Err(usage(format!("scan would exceed {MAX_GSCAN_ROWS} rows")));
    }
    let t = Truncation::default();
    let mut table = with_params(Table::new("gscan", &["x", "g_plus", "g_minus"]), &p).meta("step", step);
    for i in 0..=intervals as usize {
        let x = if i == intervals as usize { hi } else { lo + i as f64 * step };
        match g_pair(SpectralPoint::new(x), &p, &t) {
            Ok(v) => table.push(vec![Cell::Num(x), Cell::Num(v.g_plus), Cell::Num(v.g_minus)]),
            Err(rabi_core::Error::PoleAt(_)) => table.push(vec![Cell::Num(x), Cell::Empty, Cell::Empty]),
            Err(e) => return Err(e.into()),
        }
    }
    write_table(c, &table)
}

fn cells(c: &Common, cells: Option<usize>) -> Result<usize> {
    let n = cells.unwrap_or(if c.quick { QUICK_CELLS } else { DEFAULT_CELLS });
    if !(2..=MAX_CELLS).contains(&n) {
        return Err(usage(format!("--cells must be in 2..={MAX_CELLS}")));
    }
    Ok(n)
}

/// The three loci of level `n`: Juddian over Δ ∈ [0, n+½]ω, g ∈ [0.02, 1]ω,
/// cofactors over Δ ∈ [0, n+2½]ω, g ∈ [10⁻³, 1]ω.
fn level_loci(n: usize, w: f64, cells: usize) -> Result<[ContourSet; 3]> {
    let base = validate_params(w, 0.5 * w, 0.5 * w)?;
    let jgrid = GridSpec::new((0.0, (n as f64 + 0.5) * w), (0.02 * w, w), cells, cells)?;
    let juddian = exceptional::juddian_locus(n, &jgrid, &base)?;
    let cgrid = exceptional::default_window(n, w, cells)?;
    let (plus, minus) = exceptional::nondegenerate_locus(n, &cgrid, &base, &Truncation::default())?;
    Ok([juddian, plus, minus])
}

fn style(kind: LocusKind) -> (&'static str, &'static str, Option<&'static str>) {
    match kind {
        LocusKind::Juddian => ("degenerate", "#b2182b", None),
        LocusKind::CofactorPlus => ("non-deg. +", "#2166ac", None),
        LocusKind::CofactorMinus => ("non-deg. −", "#1b7837", Some("6 3")),
    }
}

fn panel<'a>(n: usize, w: f64, sets: &[&'a ContourSet]) -> Panel<'a> {
    let layers = sets
        .iter()
        .map(|cs| {
            let (label, color, dash) = style(cs.kind);
            Layer {
                label,
                color,
                dash,
                lines: &cs.polylines,
            }
        })
        .collect();
    Panel {
        id: format!("n{n}"),
        title: format!("n = {n}"),
        delta_max: (n as f64 + 2.5) * w,
        g_max: w,
        layers,
    }
}

fn polyline_rows(t: &mut Table, cs: &ContourSet) {
    for (k, l) in cs.polylines.iter().enumerate() {
        for (v, &(d, g)) in l.points.iter().enumerate() {
            t.push(vec![
                Cell::Int(cs.level_index),
                cs.kind.label().into(),
                Cell::Int(k),
                Cell::Bool(l.closed),
                Cell::Int(v),
                Cell::Num(d),
                Cell::Num(g),
            ]);
        }
    }
}

const POLYLINE_COLUMNS: [&str; 7] = ["n", "family", "polyline", "closed", "vertex", "delta", "g"];

fn summary_line(cs: &ContourSet) -> String {
    let (closed, open) = count_components(cs);
    let mut s = format!("n={} {}: closed={closed} open={open}", cs.level_index, cs.kind.label());
    if cs.kind != LocusKind::Juddian {
        let hits: Vec<String> = axis_intercepts(cs).iter().map(|d| format!("{d:.4}")).collect();
        s.push_str(&format!(" g=0 intercepts=[{}]", hits.join(", ")));
    }
    s
}

pub fn figure(c: &Common, ns: &[usize], cells_arg: Option<usize>) -> Result<()> {
    if ns.is_empty() {
        return Err(usage("--n needs at least one level"));
    }
    if let Some(bad) = ns.iter().find(|&&n| n > MAX_FIGURE_N) {
        return Err(usage(format!("level {bad} outside 0..={MAX_FIGURE_N}")));
    }
    if let Some(f) = c.format {
        if f != Format::Svg {
            return Err(usage("`figure` writes SVG panels plus a polyline CSV; --format must be svg"));
        }
    }
    let w = params(c)?.omega();
    let cells = cells(c, cells_arg)?;
    let mut levels: Vec<usize> = ns.to_vec();
    levels.sort_unstable();
    levels.dedup();

    let dir = c.out.clone().unwrap_or_else(|| PathBuf::from("figure"));
    fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;

    let loci: Vec<[ContourSet; 3]> = levels.iter().map(|&n| level_loci(n, w, cells)).collect::<Result<_>>()?;
    let mut csv = Table::new("figure", &POLYLINE_COLUMNS).meta("omega", w).meta("cells", cells);
    let mut panels = Vec::new();
    let mut summary = String::new();
    for (n, sets) in levels.iter().zip(&loci) {
        let refs: Vec<&ContourSet> = sets.iter().collect();
        let p = panel(*n, w, &refs);
        write_out(Some(&dir.join(format!("panel_n{n}.svg"))), &svg::single(&p))?;
        panels.push(p);
        for cs in sets {
            polyline_rows(&mut csv, cs);
            summary.push_str(&summary_line(cs));
            summary.push('\n');
        }
    }
    write_out(Some(&dir.join("figure.svg")), &svg::composed(&panels, 2))?;
    write_out(Some(&dir.join("polylines.csv")), &csv.to_csv())?;
    write_out(None, &summary)
}

pub fn locus(c: &Common, n: usize, family: Family, cells_arg: Option<usize>, window: (Option<f64>, Option<f64>, Option<f64>)) -> Result<()> {
    let p = params(c)?;
    let w = p.omega();
    let cells = cells(c, cells_arg)?;
    let (delta_max, g_min, g_max) = window;
    let delta_hi = delta_max.unwrap_or((n as f64 + 2.5) * w);
    let g_hi = g_max.unwrap_or(w);
    let g_lo = g_min.unwrap_or(G_MIN_RATIO * w);
    let grid = GridSpec::new((0.0, delta_hi), (g_lo, g_hi), cells, cells)?;
    let mut sets = Vec::new();
    if matches!(family, Family::All | Family::Juddian) {
        sets.push(exceptional::juddian_locus(n, &grid, &p)?);
    }
    if matches!(family, Family::All | Family::Plus | Family::Minus) {
        let (plus, minus) = exceptional::nondegenerate_locus(n, &grid, &p, &Truncation::default())?;
        if family != Family::Minus {
            sets.push(plus);
        }
        if family != Family::Plus {
            sets.push(minus);
        }
    }
    for cs in &sets {
        eprintln!("{}", summary_line(cs));
    }
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Svg => {
            let refs: Vec<&ContourSet> = sets.iter().collect();
            let mut pnl = panel(n, w, &refs);
            pnl.delta_max = delta_hi;
            pnl.g_max = g_hi;
            svg::single(&pnl)
        }
        Format::Csv => {
            let mut t = Table::new("locus", &POLYLINE_COLUMNS).meta("omega", w).meta("cells", cells);
            for cs in &sets {
                polyline_rows(&mut t, cs);
            }
            t.to_csv()
        }
        Format::Json => pretty(&json!({
            "schema": crate::output::SCHEMA,
            "command": "locus",
            "omega": w,
            "cells": cells,
            "sets": sets.iter().map(locus_json).collect::<Vec<_>>(),
        })),
    };
    write_out(c.out.as_deref(), &text)
}

fn locus_json(cs: &ContourSet) -> serde_json::Value {
    let (closed, open) = count_components(cs);
    json!({
        "n": cs.level_index,
        "family": cs.kind.label(),
        "closed_components": closed,
        "open_components": open,
        "axis_intercepts": if cs.kind == LocusKind::Juddian { Vec::new() } else { axis_intercepts(cs) },
        "juddian_crossings": cs.juddian_crossings,
        "polylines": cs.polylines.iter().map(|l: &Polyline| json!({"closed": l.closed, "points": l.points})).collect::<Vec<_>>(),
    })
}

pub fn oracle(c: &Common, m_max: usize) -> Result<()> {
    let p = params(c)?;
    table_format(c)?;
    if c.levels == 0 {
        return Err(usage("--levels must be at least 1"));
    }
    let s = oracle_spectrum(&p, &FockTruncation::new(m_max)?, c.levels)?;
    let mut t = with_params(Table::new("oracle", &["index", "energy", "parity"]), &p)
        .meta("m_max", s.m_max)
        .meta("convergence_delta", s.convergence_delta);
    for (i, e) in s.levels().enumerate() {
        t.push(vec![Cell::Int(i), Cell::Num(e.value), e.parity.label().into()]);
    }
    write_table(c, &t)
}

pub fn verify(c: &Common, inject_fault: bool) -> Result<()> {
    let format = c.format.unwrap_or(Format::Json);
    if format == Format::Svg {
        return Err(usage("`verify` writes json or csv"));
    }
    let cfg = VerifyConfig {
        seed: c.seed,
        quick: c.quick,
        truncation: Truncation::default(),
    };
    let report: Report = if inject_fault { verify::run_with_fault(&cfg) } else { verify::run_all(&cfg) };
    for check in &report.checks {
        eprintln!("{}", check.line());
    }
    let text = match format {
        Format::Json => pretty(&serde_json::to_value(&report).expect("report serializes")),
        _ => {
            let mut t = Table::new("verify", &["check", "status", "measured", "tolerance"])
                .meta("seed", report.seed)
                .meta("quick", report.quick);
            for r in &report.checks {
                let status = if r.passed() { "pass" } else { "fail" };
                t.push(vec![r.check.as_str().into(), status.into(), Cell::Num(r.measured), Cell::Num(r.tolerance)]);
            }
            t.to_csv()
        }
    };
    write_out(c.out.as_deref(), &text)?;
    let failed = report.checks.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        return Err(CliError::Verification(failed, report.checks.len()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Verification(1, 3).exit_code(), 1);
        assert_eq!(usage("x").exit_code(), 2);
        assert_eq!(CliError::from(rabi_core::Error::ZeroSplitting).exit_code(), 2);
    }

    #[test]
    fn juddian_levels_join_the_spectrum() {
        let p = validate_params(1.0, 0.3, 0.8).unwrap();
        let rows = spectrum_rows(&p, 8).unwrap();
        let juddian: Vec<_> = rows.iter().filter(|r| r.0.kind == EnergyKind::JuddianDegenerate).collect();
        assert_eq!(juddian.len(), 2);
        assert!(juddian.iter().all(|r| (r.0.value - 0.91).abs() < 1e-15 && r.2 <= 1e-9));
    }

    #[test]
    fn decoupled_fallback() {
        let p = validate_params(1.0, 0.0, 0.3).unwrap();
        let rows = spectrum_rows(&p, 4).unwrap();
        let values: Vec<f64> = rows.iter().map(|r| r.0.value).collect();
        assert_eq!(values, vec![-0.3, 0.3, 0.7, 1.3]);
        assert!(rows.iter().all(|r| r.1 == "oracle"));
    }
}
