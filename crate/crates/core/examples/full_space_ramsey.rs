//! Ramsey with finite π/2 pulses in the full Bogoliubov-mode space: leakage
//! out of the qubit with and without the squeezed reservoir.
//!
//! cargo run --release --example full_space_ramsey

use std::f64::consts::PI;

use sqfock::lindblad::linspace;
use sqfock::model::EffectiveParams;
use sqfock::sensing::{self, FullRamseySpec, QubitParams};

fn main() -> sqfock::Result<()> {
    let spec = FullRamseySpec { dim: 8, pulse_amp: 8.0, detuning: 0.2, cross_terms: false };
    for (label, gamma0) in [("no reservoir", 0.0), ("squeezed reservoir", 0.01)] {
        let eff = EffectiveParams::from_squeezing(1.5, PI, 50.0, 0.5, gamma0, 1.0, 1.0);
        let q = QubitParams::squeezed(&eff).with_splitting(spec.detuning);
        let grid = linspace(0.0, 30.0, 7);
        let out = sensing::ramsey_numeric_full(&eff, 0.0, &grid, &spec)?;
        println!("{label}: pulse time {:.4}", out.pulse_time);
        for (k, &t) in grid.iter().enumerate() {
            let two_level = sensing::ramsey_analytic(&q, 0.0, t)?.p1;
            println!("  t = {t:5.1}: P1 = {:.5} (two-level {two_level:.5}), leakage {:.3e}", out.p1[k], out.leakage[k]);
        }
    }
    Ok(())
}
