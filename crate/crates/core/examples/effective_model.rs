//! From drive parameters to the squeezed-frame qubit: squeezing, ω_b, the
//! enhanced anharmonicity and decoherence, RWA ratios, and a check against
//! exact diagonalization of the pump-frame Hamiltonian.
//!
//! cargo run --release --example effective_model

use sqfock::fock;
use sqfock::linalg;
use sqfock::model::{self, ModelParams, DEFAULT_RWA_THRESHOLD};
use sqfock::units;

fn main() -> sqfock::Result<()> {
    let params = ModelParams::default();
    let eff = model::effective_params(&params)?;
    println!("r = {:.4}", eff.r);
    println!("omega_b / 2pi = {:.4e} Hz", units::hz(eff.omega_b));
    println!("alpha / 2pi   = {:.4e} Hz", units::hz(eff.alpha));
    println!("Gamma / 2pi   = {:.4e} Hz", units::hz(eff.big_gamma));
    println!("x_zpf         = {:.4e} m", eff.x_zpf);
    let rwa = model::rwa_report(&params, DEFAULT_RWA_THRESHOLD)?;
    println!("RWA ratios {:?} (threshold {})", rwa.ratios, rwa.threshold);

    // dimensionless pump-frame model, δ_a = 1
    let (r, kerr, dim) = (1.0, 2e-5, 200);
    let small = ModelParams::dimensionless(1.0, kerr, 0.0, r, 10.0, dim);
    let e = model::effective_params(&small)?;
    let (energies, vectors) = linalg::hermitian_eigen(model::hamiltonian_rot(&small)?.matrix());
    println!("\nr = {r}, K = {kerr}: gap {:.6e} vs omega_b {:.6e}", energies[1] - energies[0], e.omega_b);
    println!("anharmonicity {:.6e} vs alpha {:.6e}", energies[2] - 2.0 * energies[1] + energies[0], e.alpha);
    for n in 0..3 {
        let target = fock::squeezed_fock(dim, n, e.r, e.theta)?;
        println!("eigenvector {n}: fidelity with |{n}⟩_S = {:.8}", target.overlap_with(&vectors.column(n).into_owned()));
    }
    Ok(())
}
