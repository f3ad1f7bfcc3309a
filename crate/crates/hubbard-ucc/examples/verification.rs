//! The built-in verification suite, one line per check. The fast level
//! covers the algebra, the grids, and both constructions; pass `full` as
//! an argument to add the limit, monotonicity, and optimizer checks that
//! take a few seconds.
//!
//! Run with `cargo run --example verification` or
//! `cargo run --example verification -- full`.

use hubbard_ucc::cli::{cmd_verify, VerifyLevel};

fn main() {
    let level = match std::env::args().nth(1).as_deref() {
        Some("full") => VerifyLevel::Full,
        _ => VerifyLevel::Fast,
    };
    let report = cmd_verify(level);
    println!("{report}");
    std::process::exit(if report.all_passed() { 0 } else { 1 });
}
