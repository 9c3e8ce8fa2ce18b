//! Wigner and Husimi Q functions of squeezed Fock states.
//!
//! cargo run --release --example phase_space

use std::f64::consts::PI;

use sqfock::fock;
use sqfock::phase_space::{self, PhaseSpaceGrid};

fn main() -> sqfock::Result<()> {
    let r = 1.0;
    let dim = fock::required_dim(r, PI, 1)?;
    let grid = PhaseSpaceGrid::square(8.0, 121)?;
    for n in 0..2 {
        let state = fock::squeezed_fock(dim, n, r, PI)?;
        let w = phase_space::wigner(&state, &grid)?;
        let q = phase_space::qfunc(&state, &grid)?;
        let (vx, vp) = w.variances();
        println!(
            "|{n}⟩_S: W(0,0) = {:+.5}, ∫W = {:.5}, var x = {vx:.4}, var p = {vp:.4}, ∫Q = {:.5}",
            w.at(60, 60),
            w.integrate(),
            q.integrate()
        );
    }
    Ok(())
}
