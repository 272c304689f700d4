//! Model parameters and the `x ↔ E` energy map.

use serde::Serialize;
use std::fmt;

use crate::{Error, Result};

/// Validated `(ω, g, Δ)` triple.
///
/// `g` and `Δ` are stored as magnitudes: the spectrum is invariant under
/// `g → −g` and `Δ → −Δ` (unitary equivalence via `σx` and `σz` rotations).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    omega: f64,
    g: f64,
    delta: f64,
}

impl ModelParams {
    pub fn new(omega: f64, g: f64, delta: f64) -> Result<Self> {
        validate_params(omega, g, delta)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `g/ω`, the expansion parameter of the G-series.
    pub fn coupling_ratio(&self) -> f64 {
        self.g / self.omega
    }

    /// `g²/ω`, the shift between the spectral variable and the energy.
    pub fn shift(&self) -> f64 {
        self.g * self.g / self.omega
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        validate_params(self.omega, g, self.delta)
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        validate_params(self.omega, self.g, delta)
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ω={}, g={}, Δ={})", self.omega, self.g, self.delta)
    }
}

pub fn validate_params(omega: f64, g: f64, delta: f64) -> Result<ModelParams> {
    for (name, v) in [("omega", omega), ("g", g), ("delta", delta)] {
        if !v.is_finite() {
            return Err(Error::NonFinite(name));
        }
    }
    if omega <= 0.0 {
        return Err(Error::NonPositiveFrequency(omega));
    }
    Ok(ModelParams {
        omega,
        g: g.abs(),
        delta: delta.abs(),
    })
}

/// Point on the shifted spectral axis `x = E + g²/ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub x: f64,
    pub n_index: Option<usize>,
}

impl SpectralPoint {
    pub fn new(x: f64) -> Self {
        Self { x, n_index: None }
    }

    /// The exceptional point `x = nω`.
    pub fn pole(n: usize, p: &ModelParams) -> Self {
        Self {
            x: n as f64 * p.omega(),
            n_index: Some(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    Plus,
    Minus,
    Unassigned,
}

impl Parity {
    pub fn label(&self) -> &'static str {
        match self {
            Parity::Plus => "+",
            Parity::Minus => "-",
            Parity::Unassigned => "?",
        }
    }

    pub fn flipped(&self) -> Parity {
        match self {
            Parity::Plus => Parity::Minus,
            Parity::Minus => Parity::Plus,
            Parity::Unassigned => Parity::Unassigned,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EnergyKind {
    Regular,
    JuddianDegenerate,
    ExceptionalNonDegenerate,
}

impl EnergyKind {
    pub fn label(&self) -> &'static str {
        match self {
            EnergyKind::Regular => "regular",
            EnergyKind::JuddianDegenerate => "juddian",
            EnergyKind::ExceptionalNonDegenerate => "exceptional",
        }
    }
}

/// A physical eigenvalue with its parity sector and spectral class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Energy {
    pub value: f64,
    pub parity: Parity,
    pub kind: EnergyKind,
}

impl Energy {
    pub fn regular(value: f64, parity: Parity) -> Self {
        Self {
            value,
            parity,
            kind: EnergyKind::Regular,
        }
    }
}

/// `E = x − g²/ω`.
pub fn energy_from_x(x: SpectralPoint, p: &ModelParams) -> Energy {
    Energy {
        value: x.x - p.shift(),
        parity: Parity::Unassigned,
        kind: EnergyKind::Regular,
    }
}

/// `x = E + g²/ω`.
pub fn x_from_energy(e: Energy, p: &ModelParams) -> SpectralPoint {
    SpectralPoint::new(e.value + p.shift())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validation() {
        let p = validate_params(1.0, 0.7, 0.4).unwrap();
        assert_eq!((p.omega(), p.g(), p.delta()), (1.0, 0.7, 0.4));
        let p = validate_params(1.0, -0.7, 0.4).unwrap();
        assert_eq!((p.omega(), p.g(), p.delta()), (1.0, 0.7, 0.4));
        let p = validate_params(1.0, 0.7, -0.4).unwrap();
        assert_eq!(p.delta(), 0.4);
        assert_eq!(validate_params(0.0, 0.5, 0.5), Err(Error::NonPositiveFrequency(0.0)));
        assert_eq!(validate_params(-1.0, 0.5, 0.5), Err(Error::NonPositiveFrequency(-1.0)));
        assert_eq!(validate_params(1.0, f64::NAN, 0.5), Err(Error::NonFinite("g")));
        assert_eq!(validate_params(1.0, 0.5, f64::INFINITY), Err(Error::NonFinite("delta")));
        assert_eq!(validate_params(f64::NAN, 0.5, 0.5), Err(Error::NonFinite("omega")));
    }

    #[test]
    fn energy_map() {
        let p = validate_params(1.0, 0.5, 0.3).unwrap();
        assert_eq!(energy_from_x(SpectralPoint::new(1.0), &p).value, 0.75);
        let p0 = validate_params(1.0, 0.0, 0.3).unwrap();
        assert_eq!(energy_from_x(SpectralPoint::new(0.0), &p0).value, 0.0);
        let p2 = validate_params(2.0, 1.0, 0.5).unwrap();
        assert_eq!(energy_from_x(SpectralPoint::new(2.0), &p2).value, 1.5);

        assert_eq!(x_from_energy(Energy::regular(0.75, Parity::Plus), &p).x, 1.0);
        assert_eq!(x_from_energy(Energy::regular(-p.shift(), Parity::Plus), &p).x, 0.0);
    }

    proptest! {
        #[test]
        fn round_trip(x in -20.0f64..20.0, g in 0.0f64..2.0, omega in 0.25f64..4.0) {
            // (x − s) + s is exact only when no rounding occurs; bound it by
            // one rounding of each operation.
            let p = validate_params(omega, g, 0.3).unwrap();
            let e = energy_from_x(SpectralPoint::new(x), &p);
            let back = x_from_energy(e, &p).x;
            prop_assert!((back - x).abs() <= 2.0 * f64::EPSILON * (x.abs() + p.shift()));
        }
    }

    #[test]
    fn round_trip_exact_on_dyadic_grid() {
        // With dyadic x and shift the map is exact.
        let p = validate_params(1.0, 0.5, 0.3).unwrap();
        let mut rng = 0x2545_f491_4f6c_dd1d_u64;
        for _ in 0..100 {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            let x = ((rng % 4096) as f64 - 2048.0) / 256.0;
            let back = x_from_energy(energy_from_x(SpectralPoint::new(x), &p), &p).x;
            assert_eq!(back, x);
        }
    }
}
