//! Static-force sensing by Rabi oscillation: the transition probability,
//! the two decoherence branches of the optimal sensitivity, and the
//! full-space bias-point population.
//!
//! cargo run --release --example force_sensing

use std::f64::consts::PI;

use sqfock::model::EffectiveParams;
use sqfock::sensing::{self, DecoherenceMode};

fn main() -> sqfock::Result<()> {
    let eff = EffectiveParams::from_squeezing(1.5, PI, 0.1, 1.0, 1e-3, 1.0, 1.0);
    let omega_f = 1.0;
    for t in [0.5, 1.0, 1.5] {
        println!(
            "t = {t}: P1 = {:.8}, unitary 2x2 {:.8}",
            sensing::rabi_probability(eff.omega_b, omega_f, t),
            sensing::rabi_unitary_population(eff.omega_b, omega_f, t, 2000)
        );
    }
    for mode in [DecoherenceMode::DrivenBath, DecoherenceMode::DissipativeSqueezing] {
        let s = sensing::sensitivity_force(&eff, omega_f, mode)?;
        println!("{mode:?}: delta_F_min = {:.4e}, t_opt = {:.4e}", s.delta_f_min, s.t_opt);
    }
    let t_bias = PI / (2.0 * eff.omega_b.hypot(omega_f));
    for r in [0.0, 1.0, 1.5, 2.0] {
        let e = EffectiveParams::from_squeezing(r, PI, 0.1, 1.0, 0.0, 1.0, 1.0);
        let (p1, leak) = sensing::rabi_force_full(&e, omega_f, 12, &[t_bias])?[0];
        println!("r = {r}: full-space P1 at the bias point {p1:.5}, leakage {leak:.2e}");
    }
    Ok(())
}
