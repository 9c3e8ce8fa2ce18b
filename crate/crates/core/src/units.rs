//! Physical constants and frequency conversions.
//!
//! Frequencies quoted as `X/2π = f` are stored as angular frequencies
//! `X = 2π f` in rad/s. Dynamics run with ħ = 1; ħ is reinstated only when
//! sensitivities are reported in SI units.

use std::f64::consts::PI;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Angular frequency (rad/s) from an ordinary frequency in Hz.
pub fn angular(hz: f64) -> f64 {
    2.0 * PI * hz
}

/// Ordinary frequency (Hz) of an angular frequency.
pub fn hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// Bose–Einstein occupation `1/(e^{ħω/k_B T} − 1)`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    1.0 / ((HBAR * omega / (K_B * temperature)).exp() - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_round_trip() {
        assert!((hz(angular(4.2e6)) - 4.2e6).abs() < 1e-6);
    }

    #[test]
    fn occupation_at_600_mhz_and_10_mk() {
        // x = ħω/kT = 2.8795..., n = 1/(e^x − 1)
        let n = thermal_occupation(angular(600e6), 0.01);
        let x = HBAR * angular(600e6) / (K_B * 0.01);
        assert!((x - 2.8795).abs() < 1e-3);
        assert!((n - 0.0595).abs() < 5e-4, "{n}");
    }
}
