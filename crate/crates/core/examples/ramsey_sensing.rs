//! Ramsey spring-constant sensing: the closed-form fringe against the
//! two-level master equation, the optimal sensitivity by the slope and
//! error-propagation routes, and the readout-limited protocol.
//!
//! cargo run --release --example ramsey_sensing

use std::f64::consts::PI;

use sqfock::lindblad::linspace;
use sqfock::model::{self, ModelParams};
use sqfock::sensing::{self, QubitParams, ReadoutSpec};

fn main() -> sqfock::Result<()> {
    let eff = model::effective_params(&ModelParams::default())?;
    let s = sensing::sensitivity_spring(&eff)?;
    let cr = sensing::sensitivity_spring_cramer_rao(&eff, 1.0)?;
    println!("delta_k_min = {:.4e} N/m/√Hz at t_opt = {:.4e} s", s.delta_k_min, s.t_opt);
    println!("error propagation: {:.4e} at {:.4e} s", cr.delta_k_min, cr.t_opt);
    println!("Fock baseline {:.4e}, ratio {:.5}", s.baseline, s.ratio());
    let (m, t_bias) = sensing::bias_time(eff.omega_b, s.t_opt)?;
    println!("bias point: m = {m}, t = {t_bias:.6e} s");

    let readout = ReadoutSpec { c_readout: 0.8, t_m: 1e-6, total_time: 1.0 };
    let out = sensing::spring_protocol(&eff, 1e-9, &readout, &[])?;
    println!("delta_k = 1e-9 N/m: δP = {:.4e}, SNR = {:.3}, sensitivity {:.4e}", out.delta_p, out.snr, out.sensitivity);

    // dimensionless check of the fringe
    let e = sqfock::model::EffectiveParams::from_squeezing(1.0, PI, 4.0, 0.1, 0.5, 1.0, 1.0);
    let q = QubitParams::squeezed(&e);
    let grid = linspace(0.0, 5.0 / e.big_gamma, 11);
    let numeric = sensing::ramsey_numeric_qubit(&q, 0.2, &grid, false)?;
    for (k, &t) in grid.iter().enumerate() {
        let exact = sensing::ramsey_analytic(&q, 0.2, t)?.p1;
        println!("t = {t:7.4}: P1 = {exact:.8}, master equation {:.8}", numeric.p1[k]);
    }
    Ok(())
}
