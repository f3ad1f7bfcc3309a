//! What dropping the quadruple factor costs: doubles-only energies and
//! fidelities against the exact construction over a range of repulsions.
//!
//! Run with `cargo run --example doubles_preparation`.

use hubbard_ucc::hamiltonian::HubbardParams;
use hubbard_ucc::spectrum::summarize;
use hubbard_ucc::stateprep::{prepare, Mode};
use hubbard_ucc::Result;

fn main() -> Result<()> {
    println!(
        "{:>6} {:>15} {:>15} {:>12} {:>16}",
        "u/t", "E0 exact", "E doubles", "excess", "fidelity"
    );
    for &u in &[0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        let s = summarize(HubbardParams::with_u(u)?)?;
        let d = prepare(u, Mode::DoublesOnly)?;
        println!(
            "{:>6} {:>15.10} {:>15.10} {:>12.3e} {:>16.12}",
            u,
            s.energy_ed,
            d.energy,
            d.energy - s.energy_ed,
            d.fidelity
        );
    }
    println!();
    println!("the truncated sequence stays variational (energy above E0) and");
    println!("its fidelity only falls as the repulsion grows, yet it never");
    println!("drops far: the quadruple excitation carries little weight even");
    println!("deep in the correlated regime.");
    println!();
    println!("the angles used here keep the bookkeeping-table values; freeing");
    println!("them buys a slightly lower energy, see the vqe_minimize example.");
    Ok(())
}
