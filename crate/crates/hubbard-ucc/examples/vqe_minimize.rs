//! Derivative-free minimization over the free angles of both sequences at
//! u = 4, starting from all zeros. The exact sequence recovers the cubic
//! root; the doubles-only sequence lands slightly below its bookkeeping
//! angles, which are not its own variational optimum.
//!
//! Run with `cargo run --example vqe_minimize`.

use hubbard_ucc::hamiltonian::HubbardParams;
use hubbard_ucc::spectrum::ground_energy_cubic;
use hubbard_ucc::stateprep::{prepare, Mode};
use hubbard_ucc::vqe::{minimize, MinimizeConfig, VqeProblem};
use hubbard_ucc::Result;

fn main() -> Result<()> {
    let u = 4.0;
    let params = HubbardParams::with_u(u)?;
    let config = MinimizeConfig::default();
    let e0 = ground_energy_cubic(u);

    for mode in [Mode::Exact, Mode::DoublesOnly] {
        let problem = VqeProblem::table_problem(params, mode);
        let run = minimize(&problem, &config)?;
        let reference = prepare(u, mode)?.energy;

        println!("mode = {mode}");
        println!("  free angles          {}", run.best_angles.len());
        println!("  evaluations          {}", run.evaluations);
        println!("  converged            {}", run.converged);
        println!("  best energy          {:+.12}", run.best_energy);
        println!("  closed-form angles   {reference:+.12}");
        println!("  cubic root           {e0:+.12}");
        println!("  gap to cubic         {:+.3e}", run.best_energy - e0);
        println!();
    }

    println!("the exact sequence reaches the ground state to optimizer");
    println!("precision. the doubles-only optimum sits below the closed-form");
    println!("doubles energy but above the true minimum: the missing");
    println!("quadruple is a genuine expressivity gap, not an angle choice.");
    Ok(())
}
