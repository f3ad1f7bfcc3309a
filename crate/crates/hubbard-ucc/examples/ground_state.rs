//! Exact ground-state data across the repulsion range: the cubic root
//! against full diagonalization, the three amplitude parameters, the
//! spectral gap, and the singlet check.
//!
//! Run with `cargo run --example ground_state`.

use hubbard_ucc::hamiltonian::HubbardParams;
use hubbard_ucc::spectrum::{ground_state_ed, summarize, total_spin_squared};
use hubbard_ucc::Result;

fn main() -> Result<()> {
    println!(
        "{:>7} {:>15} {:>15} {:>9} {:>9} {:>9} {:>8} {:>9}",
        "u/t", "E0 cubic", "E0 diag", "alpha", "beta", "gamma", "gap", "<S^2>"
    );
    for &u in &[0.0, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 100.0] {
        let params = HubbardParams::with_u(u)?;
        let s = summarize(params)?;
        let (_, gs) = ground_state_ed(params);
        println!(
            "{:>7} {:>15.10} {:>15.10} {:>9.6} {:>9.6} {:>9.6} {:>8.5} {:>9.1e}",
            u,
            s.energy_cubic,
            s.energy_ed,
            s.alpha,
            s.beta,
            s.gamma,
            s.gap,
            total_spin_squared(&gs)
        );
    }
    println!();
    println!("cubic and diagonalization agree to machine precision; the ground");
    println!("state is a singlet everywhere, gapped once u > 0, and its weight");
    println!("drifts from the two alpha configurations toward beta and gamma.");
    Ok(())
}
