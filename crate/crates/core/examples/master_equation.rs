//! Lindblad evolution of |1⟩_S under the squeezed reservoir, with the
//! trace, Hermiticity and positivity diagnostics the integrator reports.
//!
//! cargo run --release --example master_equation

use std::f64::consts::PI;

use sqfock::fock::{self, QuantumState};
use sqfock::lindblad::{self, linspace, Generator, Hamiltonian, StepControl};
use sqfock::model::{self, EffectiveParams};

fn main() -> sqfock::Result<()> {
    let eff = EffectiveParams::from_squeezing(1.0, PI, 5.0, 0.2, 0.05, 1.0, 1.0);
    let dim = 12;
    let b = fock::annihilation(dim)?;
    let g = Generator::new(
        Hamiltonian::constant(model::hamiltonian_eff_diag(&eff, dim)?),
        lindblad::squeezed_bath_terms(&eff, &b, 0.0),
    )?;
    let times = linspace(0.0, 3.0 / eff.big_gamma, 7);
    let traj = lindblad::evolve(&g, &QuantumState::fock(dim, 1)?, &times, &StepControl::default())?;
    println!("Gamma = {:.4}, N = {:.4}", eff.big_gamma, eff.n_sq);
    println!("{:>8} {:>10} {:>10} {:>10}", "t", "p0", "p1", "p>=2");
    for (k, &t) in times.iter().enumerate() {
        let rho = &traj.states[k];
        let (p0, p1) = (rho[(0, 0)].re, rho[(1, 1)].re);
        println!("{t:8.3} {p0:10.6} {p1:10.6} {:10.6}", 1.0 - p0 - p1);
    }
    let s = traj.summary();
    println!(
        "trace error {:.2e}, hermiticity {:.2e}, min eigenvalue {:.2e}, step {:.3e} after {} halvings",
        s.max_trace_error, s.max_hermiticity_error, s.min_eigenvalue, traj.dt, traj.refinements
    );
    Ok(())
}
