//! Ladder operators, the squeeze operator and squeezed Fock states on a
//! truncated space, with the truncation guard.
//!
//! cargo run --release --example squeezed_fock_states

use std::f64::consts::PI;

use sqfock::fock::{self, QuantumState};

fn main() -> sqfock::Result<()> {
    let a = fock::annihilation(4)?;
    let comm = a.commutator(&a.dagger())?;
    println!("[a, a†] diagonal on 4 levels: {:?}", (0..4).map(|n| comm.matrix()[(n, n)].re).collect::<Vec<_>>());

    for r in [0.5, 1.0, 1.5] {
        println!("r = {r}: |0..2⟩_S need dim {}", fock::required_dim(r, PI, 2)?);
    }
    let r = 1.5;
    let dim = fock::required_dim(r, PI, 2)?;
    let number = fock::number(dim)?;
    for n in 0..3 {
        let state = fock::squeezed_fock(dim, n, r, PI)?;
        let mean = state.expectation(&number)?.re;
        println!("⟨a†a⟩ in |{n}⟩_S = {mean:.6} (closed form {:.6})", n as f64 * (2.0 * r).cosh() + r.sinh().powi(2));
    }

    // too small a space is refused rather than silently truncated
    match fock::squeezed_fock(40, 2, r, PI) {
        Err(e) => println!("dim 40: {e}"),
        Ok(_) => println!("dim 40 accepted"),
    }

    let s = fock::squeeze_operator(dim, r, PI)?;
    let vac = QuantumState::fock(dim, 0)?.transformed(&s)?;
    println!("fidelity of S|0⟩ with squeezed_fock(0): {:.12}", vac.fidelity(&fock::squeezed_fock(dim, 0, r, PI)?)?);
    Ok(())
}
