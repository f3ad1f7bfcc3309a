//! The full nine-factor construction at u = 4: closed-form angles, the
//! prepared energy against the cubic root, the fidelity, and the final
//! bookkeeping row next to the diagonalized ground state.
//!
//! Run with `cargo run --example exact_preparation`.

use hubbard_ucc::fock::SectorBasis;
use hubbard_ucc::hamiltonian::HubbardParams;
use hubbard_ucc::spectrum::{ground_state_ed, summarize};
use hubbard_ucc::stateprep::{prepare, Mode, TRACKED_STATES};
use hubbard_ucc::Result;

fn main() -> Result<()> {
    let u = 4.0;
    let report = prepare(u, Mode::Exact)?;
    let summary = summarize(HubbardParams::with_u(u)?)?;

    println!("u = {u}, mode = {}", report.mode);
    let [t1, t2, t3, t4] = report.angles;
    println!("theta1 = {t1:+.15}");
    println!("theta2 = {t2:+.15}  (locked to tan(theta2) = tan^2(theta1))");
    println!("theta3 = {t3:+.15}");
    println!("theta4 = {t4:+.15}");
    println!();
    println!("prepared energy  {:+.15}", report.energy);
    println!("cubic root       {:+.15}", summary.energy_cubic);
    println!("difference       {:+.3e}", report.energy - summary.energy_cubic);
    println!("fidelity         {:.15}  (defect {:.3e})", report.fidelity, 1.0 - report.fidelity);
    println!();

    let basis = SectorBasis::half_filling();
    let (_, gs) = ground_state_ed(HubbardParams::with_u(u)?);
    let last = report.rows.last().expect("rows are never empty");
    println!("{:>10} {:>18} {:>18}", "config", "prepared", "ground state");
    for (k, &state) in TRACKED_STATES.iter().enumerate() {
        let idx = basis.index_of(state).expect("tracked state in sector");
        println!(
            "{:>10} {:>18.12} {:>18.12}",
            state.to_string(),
            last[k],
            gs.amplitude(idx).re
        );
    }
    println!();
    println!("the sequence leaves nothing outside these ten configurations,");
    println!("so matching amplitudes here is the whole story.");
    Ok(())
}
