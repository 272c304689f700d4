//! The transcendental functions `G±(x)` and their pole structure.
//!
//! ```text
//! f_n(x)  = 2g/ω + (1/2g) (nω − x + Δ²/(x − nω))
//! n K_n   = f_{n−1}(x) K_{n−1} − K_{n−2},      K_0 = 1, K_1 = f_0(x)
//! G±(x)   = Σ_n K_n(x) [1 ∓ Δ/(x − nω)] (g/ω)^n
//! ```
//!
//! `G±` has a simple pole at every `x = nω` (from the bracket factor and from
//! `f_n` feeding all `K_m`, `m > n`). The residue is linear in `K_n(nω)`:
//! `R± = K_n(nω) · c±`, so the pole is lifted from both functions when
//! `K_n(nω) = 0` and from exactly one of them when `c+` or `c−` vanishes.

use serde::Serialize;

use crate::{Error, ModelParams, Result, SpectralPoint};

/// Exclusion radius around `x = mω`, in units of `ω`.
pub const POLE_MARGIN: f64 = 1e-6;

/// Smallest `g/ω` for which the series path is used.
pub const G_MIN_RATIO: f64 = 1e-3;

/// Largest `g/ω` for which the series path is used.
pub const G_MAX_RATIO: f64 = 1.5;

/// Truncation policy for the infinite series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub settle_count: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 200,
            settle_count: 5,
        }
    }
}

impl Truncation {
    pub fn with_max_terms(self, max_terms: usize) -> Self {
        Self { max_terms, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidArgument(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if self.max_terms < 10 {
            return Err(Error::InvalidArgument(format!("max_terms must be >= 10, got {}", self.max_terms)));
        }
        if self.settle_count < 1 {
            return Err(Error::InvalidArgument("settle_count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Coefficients `K_0..K_N` at one spectral point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KSeries {
    pub x: SpectralPoint,
    pub coeffs: Vec<f64>,
    pub n_used: usize,
    pub converged: bool,
    pub nearest_pole_distance: f64,
}

impl KSeries {
    /// Largest relative violation of `n K_n − f_{n−1} K_{n−1} + K_{n−2} = 0`.
    pub fn recurrence_residual(&self, p: &ModelParams) -> f64 {
        let x = self.x.x;
        let mut worst = 0.0f64;
        for n in 2..self.coeffs.len() {
            let a = n as f64 * self.coeffs[n];
            let b = f_raw(n - 1, x, p) * self.coeffs[n - 1];
            let c = self.coeffs[n - 2];
            let scale = a.abs().max(b.abs()).max(c.abs());
            if scale > 0.0 {
                worst = worst.max((a - b + c).abs() / scale);
            }
        }
        worst
    }
}

/// `G+(x)` and `G−(x)` with truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GPair {
    pub g_plus: f64,
    pub g_minus: f64,
    pub terms_used: usize,
    pub tail_estimate: f64,
}

/// Residues of `G±` at `x = nω`.
///
/// The `*_scale` fields are sums of absolute values of the terms entering each
/// quantity; dividing by them gives the normalized values used for
/// thresholds and contouring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResiduePair {
    pub n: usize,
    pub r_plus: f64,
    pub r_minus: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub k_n_at_pole: f64,
    pub k_scale: f64,
    pub c_plus_scale: f64,
    pub c_minus_scale: f64,
}

impl ResiduePair {
    pub fn k_normalized(&self) -> f64 {
        normalized(self.k_n_at_pole, self.k_scale, 1.0)
    }

    pub fn c_plus_normalized(&self) -> f64 {
        // c± → ∓Δ(g/ω)^n as Δ → 0, so the normalized cofactor tends to ∓1.
        normalized(self.c_plus, self.c_plus_scale, -1.0)
    }

    pub fn c_minus_normalized(&self) -> f64 {
        normalized(self.c_minus, self.c_minus_scale, 1.0)
    }

    pub fn r_plus_normalized(&self) -> f64 {
        self.k_normalized() * self.c_plus_normalized()
    }

    pub fn r_minus_normalized(&self) -> f64 {
        self.k_normalized() * self.c_minus_normalized()
    }

    /// Scale against which residues are compared.
    pub fn r_plus_scale(&self) -> f64 {
        self.k_scale * self.c_plus_scale
    }

    pub fn r_minus_scale(&self) -> f64 {
        self.k_scale * self.c_minus_scale
    }
}

fn normalized(value: f64, scale: f64, limit: f64) -> f64 {
    if scale > 0.0 {
        value / scale
    } else {
        limit
    }
}

/// `f_n(x)` without argument checks.
#[inline]
pub(crate) fn f_raw(n: usize, x: f64, p: &ModelParams) -> f64 {
    let (w, g, d) = (p.omega(), p.g(), p.delta());
    let nw = n as f64 * w;
    2.0 * g / w + (nw - x + d * d / (x - nw)) / (2.0 * g)
}

fn require_coupling(p: &ModelParams) -> Result<()> {
    if p.g() > 0.0 {
        Ok(())
    } else {
        Err(Error::ZeroCoupling)
    }
}

/// Index and distance of the pole `mω`, `0 <= m <= max_index`, closest to `x`.
pub fn nearest_pole(x: f64, p: &ModelParams, max_index: usize) -> (usize, f64) {
    let w = p.omega();
    let m = (x / w).round().clamp(0.0, max_index as f64) as usize;
    (m, (x - m as f64 * w).abs())
}

/// Fails with `PoleAt(m)` if `x` is within the pole margin of some `mω`.
pub fn check_pole_margin(x: f64, p: &ModelParams, max_index: usize) -> Result<()> {
    let (m, dist) = nearest_pole(x, p, max_index);
    if dist < POLE_MARGIN * p.omega() {
        Err(Error::PoleAt(m))
    } else {
        Ok(())
    }
}

pub fn f_coeff(n: usize, x: SpectralPoint, p: &ModelParams) -> Result<f64> {
    require_coupling(p)?;
    if (x.x - n as f64 * p.omega()).abs() < POLE_MARGIN * p.omega() {
        return Err(Error::PoleAt(n));
    }
    Ok(f_raw(n, x.x, p))
}

struct SeriesRun {
    coeffs: Vec<f64>,
    g_plus: f64,
    g_minus: f64,
    terms_used: usize,
    tail: f64,
    converged: bool,
}

/// Sums both branches of the series under the tail policy. No pole check.
fn run_series(x: f64, p: &ModelParams, t: &Truncation, keep: bool) -> SeriesRun {
    let (w, d) = (p.omega(), p.delta());
    let ratio = p.coupling_ratio();
    // Past the poles near x the terms enter their geometric regime.
    let min_terms = ((x / w).max(0.0).ceil() as usize + t.settle_count + 2).min(t.max_terms);

    let mut coeffs = Vec::new();
    let (mut k_prev, mut k_cur) = (0.0, 1.0);
    let mut power = 1.0;
    let (mut sp, mut sm) = (0.0f64, 0.0f64);
    let mut running_max = 0.0f64;
    let mut quiet = 0usize;
    let mut tail = f64::INFINITY;

    for n in 0..t.max_terms {
        if n >= 1 {
            let k_next = (f_raw(n - 1, x, p) * k_cur - k_prev) / n as f64;
            k_prev = k_cur;
            k_cur = k_next;
            power *= ratio;
        }
        if keep {
            coeffs.push(k_cur);
        }
        let pole = d / (x - n as f64 * w);
        let base = k_cur * power;
        let tp = base * (1.0 - pole);
        let tm = base * (1.0 + pole);
        sp += tp;
        sm += tm;
        running_max = running_max.max(sp.abs()).max(sm.abs());
        tail = tp.abs().max(tm.abs());
        if !tail.is_finite() || !sp.is_finite() || !sm.is_finite() {
            return SeriesRun { coeffs, g_plus: sp, g_minus: sm, terms_used: n + 1, tail: f64::INFINITY, converged: false };
        }
        if tail <= t.rel_tol * running_max {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= t.settle_count && n + 1 >= min_terms {
            return SeriesRun { coeffs, g_plus: sp, g_minus: sm, terms_used: n + 1, tail, converged: true };
        }
    }
    SeriesRun {
        coeffs,
        g_plus: sp,
        g_minus: sm,
        terms_used: t.max_terms,
        tail,
        converged: false,
    }
}

/// `K_0..K_N` at `x`, with `N` fixed by the G-series tail policy.
///
/// When the tail does not settle, `TruncationNotConverged` is returned; the
/// partial coefficients are available through [`k_coeffs_partial`].
pub fn k_coeffs(x: SpectralPoint, p: &ModelParams, t: &Truncation) -> Result<KSeries> {
    let ks = k_coeffs_partial(x, p, t)?;
    if ks.converged {
        Ok(ks)
    } else {
        Err(Error::TruncationNotConverged {
            terms_used: ks.n_used,
            tail_estimate: f64::NAN,
            best: None,
        })
    }
}

/// Like [`k_coeffs`] but returns the partial series instead of failing when
/// the tail does not settle.
pub fn k_coeffs_partial(x: SpectralPoint, p: &ModelParams, t: &Truncation) -> Result<KSeries> {
    t.validate()?;
    require_coupling(p)?;
    check_pole_margin(x.x, p, t.max_terms)?;
    let run = run_series(x.x, p, t, true);
    let n_used = run.coeffs.len() - 1;
    let nearest_pole_distance = (0..=n_used)
        .map(|m| (x.x - m as f64 * p.omega()).abs())
        .fold(f64::INFINITY, f64::min);
    Ok(KSeries {
        x,
        coeffs: run.coeffs,
        n_used,
        converged: run.converged,
        nearest_pole_distance,
    })
}

pub fn g_pair(x: SpectralPoint, p: &ModelParams, t: &Truncation) -> Result<GPair> {
    t.validate()?;
    require_coupling(p)?;
    check_pole_margin(x.x, p, t.max_terms)?;
    let run = run_series(x.x, p, t, false);
    if !run.converged {
        return Err(Error::TruncationNotConverged {
            terms_used: run.terms_used,
            tail_estimate: run.tail,
            best: Some((run.g_plus, run.g_minus)),
        });
    }
    Ok(GPair {
        g_plus: run.g_plus,
        g_minus: run.g_minus,
        terms_used: run.terms_used,
        tail_estimate: run.tail,
    })
}

/// `(G+, G−)` at `x` ignoring the pole margin. Used by the numerical-limit
/// residue, which deliberately samples close to the pole.
pub(crate) fn g_pair_unguarded(x: f64, p: &ModelParams, t: &Truncation) -> Result<(f64, f64)> {
    let run = run_series(x, p, t, false);
    if run.converged {
        Ok((run.g_plus, run.g_minus))
    } else {
        Err(Error::TruncationNotConverged {
            terms_used: run.terms_used,
            tail_estimate: run.tail,
            best: Some((run.g_plus, run.g_minus)),
        })
    }
}

/// Sum of the magnitudes of the three pieces of `f_n(x)`; bounds `|f_n(x)|`
/// and, unlike it, never cancels.
fn f_magnitude(n: usize, x: f64, p: &ModelParams) -> f64 {
    let (w, g, d) = (p.omega(), p.g(), p.delta());
    let gap = (x - n as f64 * w).abs();
    2.0 * g / w + (gap + d * d / gap) / (2.0 * g)
}

/// `K_n(nω)` together with the magnitude chain
/// `m S_m = F_{m−1} S_{m−1} + S_{m−2}` (`F` from [`f_magnitude`]), so that
/// `|K_n| <= S_n` and `S_n` is smooth in `(g, Δ)`.
pub fn juddian_with_scale(n: usize, p: &ModelParams) -> Result<(f64, f64)> {
    require_coupling(p)?;
    let x = n as f64 * p.omega();
    let (mut k_prev, mut k_cur) = (0.0, 1.0);
    let (mut s_prev, mut s_cur) = (0.0, 1.0);
    for m in 1..=n {
        let f = f_raw(m - 1, x, p);
        let k_next = (f * k_cur - k_prev) / m as f64;
        let s_next = (f_magnitude(m - 1, x, p) * s_cur + s_prev) / m as f64;
        k_prev = k_cur;
        k_cur = k_next;
        s_prev = s_cur;
        s_cur = s_next;
    }
    Ok((k_cur, s_cur))
}

/// `K_n(nω)`; its zeros are the Juddian (doubly degenerate) points.
pub fn juddian_constraint(n: usize, p: &ModelParams) -> Result<f64> {
    juddian_with_scale(n, p).map(|(k, _)| k)
}

/// `K_n(nω) / S_n`, bounded by 1 in magnitude.
pub fn juddian_normalized(n: usize, p: &ModelParams) -> Result<f64> {
    let (k, s) = juddian_with_scale(n, p)?;
    Ok(normalized(k, s, 1.0))
}

struct LaurentChain {
    plus: f64,
    minus: f64,
    plus_scale: f64,
    minus_scale: f64,
}

/// Residue chain at `x = nω` for a given value of `K_n(nω)`.
///
/// The pole parts `k̃_m` of `K_m` obey the same recurrence with `f` evaluated
/// at `nω`, seeded by the residue of `f_n`: `k̃_n = 0`,
/// `k̃_{n+1} = Δ² K_n(nω) / (2g(n+1))`. Works with `q_m = k̃_m (g/ω)^m`.
fn laurent_chain(n: usize, k_n: f64, p: &ModelParams, t: &Truncation) -> Result<LaurentChain> {
    let (w, g, d) = (p.omega(), p.g(), p.delta());
    let ratio = p.coupling_ratio();
    let x = n as f64 * w;
    let pow_n = ratio.powi(n as i32);

    let lead = d * k_n * pow_n;
    let (mut plus, mut minus) = (-lead, lead);
    let (mut plus_scale, mut minus_scale) = (lead.abs(), lead.abs());
    let mut running_max = lead.abs();

    let mut q_prev = 0.0;
    let mut q_cur = d * d * k_n / (2.0 * g * (n + 1) as f64) * pow_n * ratio;
    let mut quiet = 0usize;
    let mut tail = f64::INFINITY;
    for m in (n + 1)..(n + 1 + t.max_terms) {
        if m >= n + 2 {
            let q_next = (f_raw(m - 1, x, p) * ratio * q_cur - ratio * ratio * q_prev) / m as f64;
            q_prev = q_cur;
            q_cur = q_next;
        }
        let gap = d / ((n as f64 - m as f64) * w);
        let tp = q_cur * (1.0 - gap);
        let tm = q_cur * (1.0 + gap);
        plus += tp;
        minus += tm;
        plus_scale += tp.abs();
        minus_scale += tm.abs();
        running_max = running_max.max(plus.abs()).max(minus.abs());
        tail = tp.abs().max(tm.abs());
        if !tail.is_finite() {
            break;
        }
        if tail <= t.rel_tol * running_max {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= t.settle_count {
            return Ok(LaurentChain {
                plus,
                minus,
                plus_scale,
                minus_scale,
            });
        }
    }
    Err(Error::TruncationNotConverged {
        terms_used: t.max_terms,
        tail_estimate: tail,
        best: Some((plus, minus)),
    })
}

/// Laurent residues `R± = lim (x − nω) G±(x)` and their cofactors.
pub fn residue_pair(n: usize, p: &ModelParams, t: &Truncation) -> Result<ResiduePair> {
    t.validate()?;
    require_coupling(p)?;
    let (k_n, k_scale) = juddian_with_scale(n, p)?;
    let residues = laurent_chain(n, k_n, p, t)?;
    let cof = laurent_chain(n, 1.0, p, t)?;
    Ok(ResiduePair {
        n,
        r_plus: residues.plus,
        r_minus: residues.minus,
        c_plus: cof.plus,
        c_minus: cof.minus,
        k_n_at_pole: k_n,
        k_scale,
        c_plus_scale: cof.plus_scale,
        c_minus_scale: cof.minus_scale,
    })
}

/// Offsets (in units of ω) used by the numerical-limit residue.
pub const LIMIT_OFFSETS: [f64; 3] = [1e-4, 1e-5, 1e-6];

/// `(x − nω) G±(x)` at `x = nω + ε`, with `ε` recomputed from the rounded `x`.
pub fn scaled_pair_at(n: usize, eps: f64, p: &ModelParams, t: &Truncation) -> Result<(f64, f64)> {
    let pole = n as f64 * p.omega();
    let x = pole + eps;
    let actual = x - pole;
    let (gp, gm) = g_pair_unguarded(x, p, t)?;
    Ok((actual * gp, actual * gm))
}

/// Residues of `G±` at `nω` from the numerical limit of `(x − nω) G±(x)`.
///
/// Averages the two one-sided samples at each offset (removing the odd
/// orders in ε) and extrapolates the averages to ε = 0 with Neville's scheme
/// in ε². Independent of the Laurent chain in [`residue_pair`].
pub fn numerical_limit_residue(n: usize, p: &ModelParams, t: &Truncation) -> Result<(f64, f64)> {
    t.validate()?;
    require_coupling(p)?;
    let w = p.omega();
    let mut nodes = Vec::with_capacity(LIMIT_OFFSETS.len());
    let mut plus = Vec::with_capacity(LIMIT_OFFSETS.len());
    let mut minus = Vec::with_capacity(LIMIT_OFFSETS.len());
    for &e in &LIMIT_OFFSETS {
        let eps = e * w;
        let (ap, am) = scaled_pair_at(n, eps, p, t)?;
        let (bp, bm) = scaled_pair_at(n, -eps, p, t)?;
        nodes.push(eps * eps);
        plus.push(0.5 * (ap + bp));
        minus.push(0.5 * (am + bm));
    }
    Ok((neville_at_zero(&nodes, &plus), neville_at_zero(&nodes, &minus)))
}

/// Value at 0 of the interpolating polynomial through `(nodes[i], values[i])`.
pub(crate) fn neville_at_zero(nodes: &[f64], values: &[f64]) -> f64 {
    let mut p = values.to_vec();
    let k = nodes.len();
    for level in 1..k {
        for i in 0..(k - level) {
            let (xi, xj) = (nodes[i], nodes[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate_params;

    fn params(w: f64, g: f64, d: f64) -> ModelParams {
        validate_params(w, g, d).unwrap()
    }

    #[test]
    fn f_coeff_examples() {
        let p = params(1.0, 0.5, 0.5);
        assert_eq!(f_coeff(0, SpectralPoint::new(1.0), &p).unwrap(), 0.25);
        assert_eq!(f_coeff(0, SpectralPoint::new(0.5), &p).unwrap(), 1.0);
        assert_eq!(f_coeff(1, SpectralPoint::new(1.0), &p), Err(Error::PoleAt(1)));
        let p0 = params(1.0, 0.0, 0.5);
        assert_eq!(f_coeff(0, SpectralPoint::new(0.5), &p0), Err(Error::ZeroCoupling));
    }

    #[test]
    fn k_coeffs_by_hand() {
        let p = params(1.0, 0.5, 0.5);
        let ks = k_coeffs(SpectralPoint::new(0.5), &p, &Truncation::default()).unwrap();
        assert_eq!(ks.coeffs[0], 1.0);
        assert_eq!(ks.coeffs[1], 1.0);
        assert_eq!(ks.coeffs[2], 0.0);
        assert!((ks.coeffs[3] + 1.0 / 3.0).abs() < 1e-15);
        assert!(ks.converged);
        assert_eq!(ks.nearest_pole_distance, 0.5);
        assert!(ks.recurrence_residual(&p) < 1e-12);
    }

    #[test]
    fn g_pair_three_term_partial_sum() {
        let p = params(1.0, 0.5, 0.5);
        let ks = k_coeffs(SpectralPoint::new(0.5), &p, &Truncation::default()).unwrap();
        let (mut gp, mut gm) = (0.0, 0.0);
        for n in 0..=2 {
            let pole = 0.5 / (0.5 - n as f64);
            gp += ks.coeffs[n] * (1.0 - pole) * 0.5f64.powi(n as i32);
            gm += ks.coeffs[n] * (1.0 + pole) * 0.5f64.powi(n as i32);
        }
        assert_eq!(gp, 1.0);
        assert_eq!(gm, 2.0);
    }

    #[test]
    fn g_pair_stable_under_more_terms() {
        let p = params(1.0, 0.5, 0.5);
        let x = SpectralPoint::new(0.5);
        let a = g_pair(x, &p, &Truncation::default()).unwrap();
        let b = g_pair(x, &p, &Truncation::default().with_max_terms(400)).unwrap();
        assert!(a.tail_estimate < 1e-14);
        assert_eq!(a.g_plus, b.g_plus);
        assert_eq!(a.g_minus, b.g_minus);
    }

    #[test]
    fn g_pair_below_spectrum_has_common_sign() {
        let p = params(1.0, 0.5, 0.5);
        let gp = g_pair(SpectralPoint::new(-5.0), &p, &Truncation::default()).unwrap();
        assert!(gp.g_plus != 0.0 && gp.g_minus != 0.0);
        assert_eq!(gp.g_plus.signum(), gp.g_minus.signum());
    }

    #[test]
    fn g_pair_rejects_pole_margin() {
        let p = params(1.0, 0.5, 0.5);
        let t = Truncation::default();
        assert_eq!(g_pair(SpectralPoint::new(2.0 + 1e-7), &p, &t), Err(Error::PoleAt(2)));
        assert_eq!(g_pair(SpectralPoint::new(-1e-8), &p, &t), Err(Error::PoleAt(0)));
        assert!(g_pair(SpectralPoint::new(2.0 + 1e-5), &p, &t).is_ok());
    }

    #[test]
    fn truncation_not_converged_carries_best_estimate() {
        let p = params(1.0, 1.4, 0.5);
        let t = Truncation { rel_tol: 1e-14, max_terms: 10, settle_count: 5 };
        match g_pair(SpectralPoint::new(0.5), &p, &t) {
            Err(Error::TruncationNotConverged { terms_used, best, .. }) => {
                assert_eq!(terms_used, 10);
                assert!(best.is_some());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn truncation_validation() {
        assert!(Truncation { max_terms: 5, ..Default::default() }.validate().is_err());
        assert!(Truncation { rel_tol: 0.0, ..Default::default() }.validate().is_err());
        assert!(Truncation { settle_count: 0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn one_term_laurent_truncation() {
        // n = 0, chain cut after m = 1.
        let (d, g) = (0.5, 0.5);
        let seed = d * d / (2.0 * g);
        let r_plus = -d + seed * (1.0 + d) * g;
        let r_minus = d + seed * (1.0 - d) * g;
        assert_eq!(r_plus, -0.3125);
        assert_eq!(r_minus, 0.5625);
        // The converged chain moves away from the one-term values but keeps the signs.
        let rp = residue_pair(0, &params(1.0, g, d), &Truncation::default()).unwrap();
        assert!(rp.r_plus < 0.0 && rp.r_minus > 0.0);
    }

    #[test]
    fn juddian_examples() {
        let p = params(1.0, 0.3, 0.8);
        // f_0(1) = 0.6 + (−1 + 0.64)/0.6 = 0 up to rounding of 0.64 and 0.6.
        assert!(juddian_constraint(1, &p).unwrap().abs() < 1e-15);
        for n in 0..4 {
            assert_eq!(juddian_constraint(0, &params(1.0, 0.1 + n as f64, 0.7)).unwrap(), 1.0);
        }
        assert_eq!(juddian_constraint(1, &params(1.0, 0.0, 0.8)), Err(Error::ZeroCoupling));
    }

    #[test]
    fn juddian_residues_vanish() {
        let p = params(1.0, 0.3, 0.8);
        let rp = residue_pair(1, &p, &Truncation::default()).unwrap();
        assert!(rp.r_plus.abs() < 1e-10);
        assert!(rp.r_minus.abs() < 1e-10);
        assert!(rp.c_plus.abs() > 1e-3 || rp.c_minus.abs() > 1e-3);
    }

    #[test]
    fn neville_is_exact_for_quadratics() {
        let nodes = [1.0, 0.25, 0.01];
        let vals: Vec<f64> = nodes.iter().map(|&t| 3.0 - 2.0 * t + 0.5 * t * t).collect();
        assert!((neville_at_zero(&nodes, &vals) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn normalized_cofactor_limit_at_zero_splitting() {
        let rp = residue_pair(1, &params(1.0, 0.4, 0.0), &Truncation::default()).unwrap();
        assert_eq!(rp.c_plus_normalized(), -1.0);
        assert_eq!(rp.c_minus_normalized(), 1.0);
    }
}
