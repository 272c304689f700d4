//! Exact diagonalization in a truncated Fock basis.
//!
//! This path shares no code with the G-function: it builds the Hamiltonian
//! matrix directly and diagonalizes it with [`crate::eigen`]. It is the
//! reference every other module is checked against.

use serde::Serialize;

use crate::eigen::{eigenvalues, SymmetricMatrix};
use crate::{Energy, EnergyKind, Error, ModelParams, Parity, Result};

pub const DEFAULT_M_MAX: usize = 80;
/// Extra Fock states used for the convergence re-run.
pub const CONVERGENCE_STEP: usize = 20;
pub const CONVERGENCE_TOL: f64 = 1e-10;

/// Oracle sector whose eigenvalues are the zeros of `G+`.
///
/// Sector `+` is `H+ = ω a†a + g(a + a†) + Δ(−1)^{a†a}`; at `g = 0` its
/// lowest state is `|0⟩` with the symmetric spin combination (energy `+Δ`).
pub const G_PLUS_SECTOR: Parity = Parity::Plus;

/// Photon-number cutoff: states `0..=m_max` per spin component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FockTruncation {
    m_max: usize,
}

impl FockTruncation {
    pub fn new(m_max: usize) -> Result<Self> {
        if m_max < 8 {
            return Err(Error::InvalidArgument(format!("m_max must be >= 8, got {m_max}")));
        }
        Ok(Self { m_max })
    }

    /// Any cutoff, including the tiny ones used to check matrix elements.
    pub fn unchecked(m_max: usize) -> Self {
        Self { m_max }
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn enlarged(&self) -> Self {
        Self {
            m_max: self.m_max + CONVERGENCE_STEP,
        }
    }
}

impl Default for FockTruncation {
    fn default() -> Self {
        Self { m_max: DEFAULT_M_MAX }
    }
}

/// Full Hamiltonian over `|m, s⟩`, index `2m + s` with `s = 0` for spin up.
pub fn build_hamiltonian(p: &ModelParams, f: &FockTruncation) -> SymmetricMatrix {
    build_hamiltonian_signed(p.omega(), p.g(), p.delta(), f)
}

/// As [`build_hamiltonian`] but without sign normalization of `g` and `Δ`.
pub fn build_hamiltonian_signed(omega: f64, g: f64, delta: f64, f: &FockTruncation) -> SymmetricMatrix {
    let states = f.m_max + 1;
    let mut h = SymmetricMatrix::zeros(2 * states);
    for m in 0..states {
        let up = 2 * m;
        let down = up + 1;
        h.set(up, up, m as f64 * omega);
        h.set(down, down, m as f64 * omega);
        h.set(up, down, delta);
        if m + 1 < states {
            let amp = g * ((m + 1) as f64).sqrt();
            h.set(up, up + 2, amp);
            h.set(down, down + 2, -amp);
        }
    }
    h
}

/// `H± = ω a†a + g(a + a†) ± Δ(−1)^{a†a}`.
pub fn sector_hamiltonian(p: &ModelParams, f: &FockTruncation, parity: Parity) -> SymmetricMatrix {
    let sign = match parity {
        Parity::Minus => -1.0,
        _ => 1.0,
    };
    let states = f.m_max + 1;
    let mut h = SymmetricMatrix::zeros(states);
    for m in 0..states {
        let alt = if m % 2 == 0 { 1.0 } else { -1.0 };
        h.set(m, m, m as f64 * p.omega() + sign * p.delta() * alt);
        if m + 1 < states {
            h.set(m, m + 1, p.g() * ((m + 1) as f64).sqrt());
        }
    }
    h
}

/// `(H+, H−)`.
pub fn parity_reduce(p: &ModelParams, f: &FockTruncation) -> (SymmetricMatrix, SymmetricMatrix) {
    (
        sector_hamiltonian(p, f, Parity::Plus),
        sector_hamiltonian(p, f, Parity::Minus),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpectrum {
    pub energies: Vec<f64>,
    pub parities: Vec<Parity>,
    pub m_max: usize,
    pub convergence_delta: f64,
}

impl OracleSpectrum {
    pub fn levels(&self) -> impl Iterator<Item = Energy> + '_ {
        self.energies.iter().zip(&self.parities).map(|(&value, &parity)| Energy {
            value,
            parity,
            kind: EnergyKind::Regular,
        })
    }

    /// Energies of one sector, ascending.
    pub fn sector(&self, parity: Parity) -> Vec<f64> {
        self.levels().filter(|e| e.parity == parity).map(|e| e.value).collect()
    }
}

fn merged_levels(p: &ModelParams, f: &FockTruncation) -> Result<Vec<(f64, Parity)>> {
    let (hp, hm) = parity_reduce(p, f);
    let mut all: Vec<(f64, Parity)> = eigenvalues(&hp)?
        .into_iter()
        .map(|e| (e, Parity::Plus))
        .chain(eigenvalues(&hm)?.into_iter().map(|e| (e, Parity::Minus)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(all)
}

/// Lowest `count` eigenvalues with parity tags, convergence-checked against
/// a run with `m_max + 20`.
pub fn oracle_spectrum(p: &ModelParams, f: &FockTruncation, count: usize) -> Result<OracleSpectrum> {
    if count > f.m_max.div_ceil(2) {
        return Err(Error::InvalidArgument(format!(
            "count {count} exceeds the truncation safety margin (m_max + 1)/2 = {}",
            f.m_max.div_ceil(2)
        )));
    }
    let base = merged_levels(p, f)?;
    let wide = merged_levels(p, &f.enlarged())?;
    let convergence_delta = base
        .iter()
        .zip(&wide)
        .take(count)
        .map(|(a, b)| (a.0 - b.0).abs())
        .fold(0.0, f64::max);
    if convergence_delta >= CONVERGENCE_TOL {
        return Err(Error::NotConverged {
            delta: convergence_delta,
            tolerance: CONVERGENCE_TOL,
            m_max: f.m_max,
        });
    }
    let (energies, parities) = base.into_iter().take(count).unzip();
    Ok(OracleSpectrum {
        energies,
        parities,
        m_max: f.m_max,
        convergence_delta,
    })
}

/// Number of eigenvalues within `tol` of `e_target`.
pub fn degeneracy_count(s: &OracleSpectrum, e_target: f64, tol: f64) -> usize {
    s.energies.iter().filter(|&&e| (e - e_target).abs() <= tol).count()
}

/// Exact spectrum at `g = 0`: `mω ± Δ`, lowest `count` levels.
pub fn decoupled_spectrum(p: &ModelParams, count: usize) -> Vec<Energy> {
    let w = p.omega();
    let d = p.delta();
    let mut levels = Vec::with_capacity(2 * count + 2);
    for m in 0..=count {
        let alt = if m % 2 == 0 { 1.0 } else { -1.0 };
        // Diagonal of H± at g = 0.
        levels.push(Energy::regular(m as f64 * w + d * alt, Parity::Plus));
        levels.push(Energy::regular(m as f64 * w - d * alt, Parity::Minus));
    }
    levels.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.parity.cmp(&b.parity)));
    levels.truncate(count);
    levels
}

/// Exact spectrum at `Δ = 0`: `mω − g²/ω`, each level once per parity.
pub fn displaced_oscillator_spectrum(p: &ModelParams, count: usize) -> Vec<Energy> {
    (0..count)
        .map(|i| {
            let m = i / 2;
            let parity = if i % 2 == 0 { Parity::Plus } else { Parity::Minus };
            Energy::regular(m as f64 * p.omega() - p.shift(), parity)
        })
        .collect()
}
