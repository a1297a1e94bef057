//! Dimensionless parameters of the water-waves problem and the standard
//! asymptotic regimes.
//!
//! Every solver in this crate is driven by the quadruple (ε, μ, γ, β):
//! nonlinearity ε = a/d, shallowness μ = d²/λ², transversity γ = λ/λ_y and
//! bottom ratio β = B/d, together with the depth-scale factor
//! ν = (1 + √μ)^{-1} that bridges the shallow- and deep-water
//! nondimensionalizations.

use crate::error::{Error, Result};

/// Bounds on μ keeping ν and tanh(√μ k) away from float underflow.
pub const MU_MIN: f64 = 1e-8;
pub const MU_MAX: f64 = 1e8;

/// Physical scales of a wave field, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    /// Order of amplitude of the waves (m).
    pub amplitude_a: f64,
    /// Wavelength in the longitudinal (x) direction (m).
    pub wavelength_x: f64,
    /// Wavelength in the transverse (y) direction (m).
    pub wavelength_y: f64,
    /// Mean depth (m).
    pub depth_d: f64,
    /// Order of amplitude of the bottom variations (m).
    pub bottom_amplitude_b: f64,
    /// Gravity (m/s²).
    pub gravity_g: f64,
}

impl PhysicalScales {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("amplitude_a", self.amplitude_a),
            ("wavelength_x", self.wavelength_x),
            ("wavelength_y", self.wavelength_y),
            ("depth_d", self.depth_d),
            ("gravity_g", self.gravity_g),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        if !(self.bottom_amplitude_b >= 0.0) || !self.bottom_amplitude_b.is_finite() {
            return Err(Error::InvalidInput(format!(
                "bottom_amplitude_b must be nonnegative, got {}",
                self.bottom_amplitude_b
            )));
        }
        if self.amplitude_a > self.depth_d {
            return Err(Error::InvalidInput(format!(
                "amplitude_a = {} exceeds depth_d = {} (ε must stay in (0,1])",
                self.amplitude_a, self.depth_d
            )));
        }
        if self.bottom_amplitude_b > self.depth_d {
            return Err(Error::InvalidInput(format!(
                "bottom_amplitude_b = {} exceeds depth_d = {} (β must stay in [0,1])",
                self.bottom_amplitude_b, self.depth_d
            )));
        }
        Ok(())
    }
}

/// The dimensionless quadruple (ε, μ, γ, β) plus the derived ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeParams {
    pub epsilon: f64,
    pub mu: f64,
    pub gamma: f64,
    pub beta: f64,
    /// ν = 1/(1 + √μ), always derived, never set directly.
    pub nu: f64,
}

impl RegimeParams {
    pub fn new(epsilon: f64, mu: f64, gamma: f64, beta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidInput(format!("ε must lie in (0,1], got {epsilon}")));
        }
        if !(mu > 0.0) {
            return Err(Error::InvalidInput(format!("μ must be positive, got {mu}")));
        }
        if !(MU_MIN..=MU_MAX).contains(&mu) {
            return Err(Error::InvalidInput(format!(
                "μ = {mu} outside the admissible range [{MU_MIN:e}, {MU_MAX:e}]"
            )));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidInput(format!("γ must lie in (0,1], got {gamma}")));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidInput(format!("β must lie in [0,1], got {beta}")));
        }
        Ok(Self {
            epsilon,
            mu,
            gamma,
            beta,
            nu: 1.0 / (1.0 + mu.sqrt()),
        })
    }

    /// Wave steepness ε√μ, the small parameter of deep-water asymptotics.
    pub fn steepness(&self) -> f64 {
        self.epsilon * self.mu.sqrt()
    }
}

/// Convert physical scales to dimensionless parameters:
/// ε = a/d, μ = d²/λ², γ = λ/λ_y, β = B/d, ν = 1/(1+√μ).
///
/// γ > 1 is rejected rather than silently swapping axes: the x axis is
/// required to be the longitudinal direction.
pub fn nondimensionalize(scales: &PhysicalScales) -> Result<RegimeParams> {
    scales.validate()?;
    let epsilon = scales.amplitude_a / scales.depth_d;
    let mu = (scales.depth_d / scales.wavelength_x).powi(2);
    let gamma = scales.wavelength_x / scales.wavelength_y;
    let beta = scales.bottom_amplitude_b / scales.depth_d;
    if gamma > 1.0 {
        return Err(Error::AxisOrientation(format!(
            "γ = λ_x/λ_y = {gamma} > 1: x must be the longitudinal (longest-wavelength) direction"
        )));
    }
    RegimeParams::new(epsilon, mu, gamma, beta)
}

/// Membership in the parameter class with steepness and bottom/amplitude
/// ratio bounded by `m`: ε√μ ≤ m and β/ε ≤ m, on top of the box constraints.
pub fn in_regime_class(p: &RegimeParams, m: f64) -> bool {
    debug_assert!(m > 0.0);
    let boxed = p.epsilon > 0.0
        && p.epsilon <= 1.0
        && p.mu > 0.0
        && p.gamma > 0.0
        && p.gamma <= 1.0
        && (0.0..=1.0).contains(&p.beta);
    boxed && p.steepness() <= m && p.beta / p.epsilon <= m
}

/// The named asymptotic regimes of the model hierarchy. Each maps a single
/// small parameter onto a full `RegimeParams`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimePreset {
    /// ε = β = γ = 1, μ free in (0,1).
    ShallowWater,
    /// Same scaling as shallow water; kept distinct for model selection.
    GreenNaghdi,
    /// ε = β = √μ, γ = 1; medium-amplitude variations.
    Serre,
    /// μ = ε = β, γ = 1; long waves.
    BoussinesqLongWave,
    /// μ = ε, γ = √ε, flat bottom; weakly transverse long waves.
    KpWeaklyTransverse,
    /// μ ≥ 1 fixed, β = 0, γ = 1; the small parameter is the steepness ε√μ.
    FullDispersion { mu: f64 },
}

impl RegimePreset {
    pub fn parse(name: &str, fd_mu: Option<f64>) -> Result<Self> {
        match name {
            "shallow_water" => Ok(Self::ShallowWater),
            "green_naghdi" => Ok(Self::GreenNaghdi),
            "serre" => Ok(Self::Serre),
            "boussinesq_long_wave" => Ok(Self::BoussinesqLongWave),
            "kp_weakly_transverse" => Ok(Self::KpWeaklyTransverse),
            "full_dispersion" => {
                let mu = fd_mu.unwrap_or(4.0);
                if mu < 1.0 {
                    return Err(Error::InvalidInput(format!(
                        "full_dispersion preset needs μ ≥ 1, got {mu}"
                    )));
                }
                Ok(Self::FullDispersion { mu })
            }
            other => Err(Error::Config(format!("unknown regime preset '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::ShallowWater => "shallow_water",
            Self::GreenNaghdi => "green_naghdi",
            Self::Serre => "serre",
            Self::BoussinesqLongWave => "boussinesq_long_wave",
            Self::KpWeaklyTransverse => "kp_weakly_transverse",
            Self::FullDispersion { .. } => "full_dispersion",
        }
    }

    /// Admissible open interval for the preset's small parameter.
    pub fn admissible(&self) -> (f64, f64) {
        match self {
            Self::ShallowWater | Self::GreenNaghdi | Self::Serre => (MU_MIN, 1.0),
            Self::BoussinesqLongWave | Self::KpWeaklyTransverse => (MU_MIN, 1.0),
            Self::FullDispersion { .. } => (1e-6, 1.0),
        }
    }

    /// Materialize the regime point for one value of the small parameter.
    pub fn generate(&self, value: f64) -> Result<RegimeParams> {
        let (lo, hi) = self.admissible();
        if !(value > lo && value <= hi) || !value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "value {value} outside the admissible interval ({lo:e}, {hi}] of preset {}",
                self.name()
            )));
        }
        match self {
            Self::ShallowWater | Self::GreenNaghdi => RegimeParams::new(1.0, value, 1.0, 1.0),
            Self::Serre => RegimeParams::new(value.sqrt(), value, 1.0, value.sqrt()),
            Self::BoussinesqLongWave => RegimeParams::new(value, value, 1.0, value),
            Self::KpWeaklyTransverse => RegimeParams::new(value, value, value.sqrt(), 0.0),
            Self::FullDispersion { mu } => RegimeParams::new(value / mu.sqrt(), *mu, 1.0, 0.0),
        }
    }

    /// The ν normalization under which the regime's model is derived:
    /// ν = 1 for the shallow family, ν = μ^{-1/2} in deep water.
    pub fn model_nu(&self, p: &RegimeParams) -> f64 {
        match self {
            Self::FullDispersion { .. } => 1.0 / p.mu.sqrt(),
            _ => 1.0,
        }
    }
}

/// One `RegimeParams` per sweep value, each satisfying the preset scaling.
pub fn preset_sweep(preset: RegimePreset, values: &[f64]) -> Result<Vec<RegimeParams>> {
    values.iter().map(|&v| preset.generate(v)).collect()
}
