//! The sweep commands as a library: write an angle sweep and an energy
//! sweep into a temporary directory and show what lands in the files.
//! The `hubbard-ucc` binary exposes the same two commands.
//!
//! Run with `cargo run --example csv_sweeps`.

use hubbard_ucc::cli::{cmd_sweep_angles, cmd_sweep_energy, Scale, SweepConfig};
use hubbard_ucc::stateprep::Mode;
use hubbard_ucc::Result;

fn show(path: &std::path::Path) -> std::io::Result<()> {
    let text = std::fs::read_to_string(path)?;
    let lines: Vec<&str> = text.lines().collect();
    println!("{} ({} lines)", path.display(), lines.len());
    for line in &lines[..2.min(lines.len())] {
        println!("  {line}");
    }
    if lines.len() > 3 {
        println!("  ...");
    }
    if let Some(last) = lines.last() {
        println!("  {last}");
    }
    Ok(())
}

fn main() -> Result<()> {
    let dir = tempfile::tempdir()?;

    let angles = SweepConfig {
        u_min: 0.1,
        u_max: 16.0,
        steps: 9,
        scale: Scale::Linear,
        t: 1.0,
        output: dir.path().join("angles.csv"),
    };
    let summary = cmd_sweep_angles(&angles)?;
    println!(
        "angle sweep: wrote {} rows, skipped {}",
        summary.written,
        summary.skipped.len()
    );
    show(&angles.output)?;
    println!();

    let energies = SweepConfig {
        u_min: 0.01,
        u_max: 100.0,
        steps: 9,
        scale: Scale::Log,
        t: 1.0,
        output: dir.path().join("energies.csv"),
    };
    let summary = cmd_sweep_energy(&energies, Mode::DoublesOnly)?;
    println!(
        "energy sweep (doubles): wrote {} rows, skipped {}",
        summary.written,
        summary.skipped.len()
    );
    show(&energies.output)?;
    println!();
    println!("values are %.17e so a file round-trips every bit of the f64;");
    println!("the one comment line names the columns and their units.");
    Ok(())
}
