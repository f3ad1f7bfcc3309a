//! Drivers behind the command-line interface: repulsion sweeps written as
//! CSV, the verification suite, and single optimization runs.
//!
//! Everything here is plain library code; argument parsing lives in the
//! binary. CSV files carry one `#` header line naming the columns and
//! units, then one line per grid point with every float printed as
//! seventeen-digit scientific notation.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{SectorBasis, StateVector};
use crate::hamiltonian::{build_momentum_space, build_real_space, HubbardParams};
use crate::linalg;
use crate::spectrum::{ground_energy_cubic, ground_state_ed, summarize, total_spin_squared};
use crate::stateprep::{
    doubles_angles, exact_angles, prepare, template_factors, verify_table_row, Mode,
    PreparationPlan, REFERENCE_STATE, TRACKED_STATES,
};
use crate::ucc::{
    apply_sequence, build_full_exponential, factor_matrix, verify_cube_identity,
    verify_square_projector, AnsatzSequence,
};
use crate::vqe::{self, minimize, MinimizeConfig, VqeProblem, VqeResult};

/// C-style `%.17e` rendering: seventeen fractional digits and a signed,
/// two-digit-minimum exponent.
pub(crate) fn fmt_e17(x: f64) -> String {
    debug_assert!(x.is_finite(), "CSV cells must be finite, got {x}");
    let raw = format!("{x:.17e}");
    let (mantissa, exp) = raw.split_once('e').expect("exponential form");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!("{mantissa}e{exp:+03}")
}

/// Grid spacing for a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Linear => "linear",
            Scale::Log => "log",
        })
    }
}

/// A repulsion grid plus an output path.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    /// First grid point, in units of t.
    pub u_min: f64,
    /// Last grid point, in units of t.
    pub u_max: f64,
    /// Number of grid points, endpoints included.
    pub steps: usize,
    /// Linear or logarithmic spacing.
    pub scale: Scale,
    /// Hopping amplitude; every output column is in units of t, so this
    /// only has to be positive.
    pub t: f64,
    /// Where the CSV goes.
    pub output: PathBuf,
}

impl SweepConfig {
    /// Rejects empty, reversed, or non-finite grids.
    pub fn validate(&self) -> Result<()> {
        if !self.u_min.is_finite() || !self.u_max.is_finite() {
            return Err(Error::Config("u bounds must be finite".into()));
        }
        if self.u_min < 0.0 {
            return Err(Error::Config(format!(
                "u must be nonnegative, got u-min = {}",
                self.u_min
            )));
        }
        if self.u_min >= self.u_max {
            return Err(Error::Config(format!(
                "u-min must lie below u-max, got {} and {}",
                self.u_min, self.u_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::Config(format!(
                "a sweep needs at least two points, got {}",
                self.steps
            )));
        }
        if self.scale == Scale::Log && self.u_min <= 0.0 {
            return Err(Error::Config("a log grid needs u-min > 0".into()));
        }
        if self.t <= 0.0 || !self.t.is_finite() {
            return Err(Error::Config(format!(
                "t must be positive and finite, got {}",
                self.t
            )));
        }
        Ok(())
    }

    /// The grid itself; both endpoints are hit exactly.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps;
        let mut out = Vec::with_capacity(n);
        match self.scale {
            Scale::Linear => {
                let step = (self.u_max - self.u_min) / (n - 1) as f64;
                for i in 0..n {
                    out.push(self.u_min + step * i as f64);
                }
            }
            Scale::Log => {
                let step = (self.u_max / self.u_min).ln() / (n - 1) as f64;
                for i in 0..n {
                    out.push(self.u_min * (step * i as f64).exp());
                }
            }
        }
        *out.last_mut().expect("steps >= 2") = self.u_max;
        out
    }
}

/// What a sweep did: rows written, and grid points that had to be skipped
/// together with the reason.
#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub written: usize,
    pub skipped: Vec<(f64, String)>,
}

fn run_sweep<F>(config: &SweepConfig, header: &str, row: F) -> Result<SweepSummary>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    config.validate()?;
    let grid = config.grid();
    let rows: Vec<(f64, Result<Vec<f64>>)> =
        grid.par_iter().map(|&u| (u, row(u))).collect();

    let mut writer = BufWriter::new(File::create(&config.output)?);
    writeln!(writer, "{header}")?;
    let mut summary = SweepSummary {
        written: 0,
        skipped: Vec::new(),
    };
    for (u, outcome) in rows {
        match outcome {
            Ok(values) => {
                let cells: Vec<String> = values.iter().map(|&v| fmt_e17(v)).collect();
                writeln!(writer, "{}", cells.join(","))?;
                summary.written += 1;
            }
            Err(e) => summary.skipped.push((u, e.to_string())),
        }
    }
    writer.flush()?;
    Ok(summary)
}

/// Header of the angle sweep CSV.
pub const ANGLES_HEADER: &str = "# u,theta1,theta2,theta3,theta4 \
    (angles in radians, u in units of t; the fixed pi/4 rotation is omitted)";

/// Sweeps the four construction angles over the grid. Grid points where
/// the ground state cannot be matched to the ten-configuration template
/// are skipped and reported instead of aborting the sweep; on this model
/// every u >= 0 resolves (the u = 0 endpoint lands on its symmetric
/// limit), so skips guard against misuse rather than known points.
pub fn cmd_sweep_angles(config: &SweepConfig) -> Result<SweepSummary> {
    run_sweep(config, ANGLES_HEADER, |u| {
        let s = summarize(HubbardParams::with_u(u)?)?;
        let [t1, t2, t3, t4] = exact_angles(s.alpha, s.beta, s.gamma)?;
        Ok(vec![u, t1, t2, t3, t4])
    })
}

/// Header of the energy sweep CSV.
pub const ENERGY_HEADER: &str =
    "# u,e_cubic,e_ed,e_prepared,fidelity (energies in units of t)";

/// Sweeps ground-state references against the prepared state of the given
/// mode. Skip behavior matches [`cmd_sweep_angles`].
pub fn cmd_sweep_energy(config: &SweepConfig, mode: Mode) -> Result<SweepSummary> {
    run_sweep(config, ENERGY_HEADER, move |u| {
        let s = summarize(HubbardParams::with_u(u)?)?;
        let report = prepare(u, mode)?;
        Ok(vec![u, s.energy_cubic, s.energy_ed, report.energy, report.fidelity])
    })
}

/// Depth of the verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyLevel {
    /// The core identities, a few seconds.
    Fast,
    /// Everything: limits, monotonicity, a dense sweep, and full
    /// optimization runs.
    Full,
}

/// One named verification outcome.
#[derive(Clone, Debug)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Results of a [`cmd_verify`] run.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    level: VerifyLevel,
    checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    /// Which depth produced this report.
    pub fn level(&self) -> VerifyLevel {
        self.level
    }

    /// Every check, in execution order.
    pub fn checks(&self) -> &[VerifyCheck] {
        &self.checks
    }

    /// True when nothing failed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            let tag = if check.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", check.name, check.detail)?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} checks passed", self.checks.len())
    }
}

fn push_check(
    checks: &mut Vec<VerifyCheck>,
    name: &'static str,
    outcome: Result<(bool, String)>,
) {
    let (passed, detail) = match outcome {
        Ok(pair) => pair,
        Err(e) => (false, e.to_string()),
    };
    checks.push(VerifyCheck {
        name,
        passed,
        detail,
    });
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| lo * (step * i as f64).exp()).collect()
}

/// Runs the verification suite and reports one pass/fail line per check.
pub fn cmd_verify(level: VerifyLevel) -> VerifyReport {
    let mut checks = Vec::new();
    let basis = SectorBasis::half_filling();

    push_check(&mut checks, "sector-enumeration", {
        let ordered = basis
            .states()
            .windows(2)
            .all(|w| w[0].mask() < w[1].mask());
        let balanced = basis
            .states()
            .iter()
            .all(|s| s.particle_count() == 4 && s.sz_twice() == 0);
        let ok = basis.len() == 36
            && basis.state(0).mask() == 0b0011_0011
            && basis.state(35).mask() == 0b1100_1100
            && ordered
            && balanced;
        Ok((
            ok,
            format!(
                "{} states, masks ascending from 0b00110011 to 0b11001100",
                basis.len()
            ),
        ))
    });

    push_check(&mut checks, "hamiltonian-agreement", (|| {
        let mut worst = 0.0f64;
        for &u in &[0.5, 1.0, 4.0] {
            let p = HubbardParams::with_u(u)?;
            let a = build_real_space(p, &basis)?;
            let b = build_momentum_space(p, &basis)?;
            worst = worst
                .max(a.hermiticity_defect())
                .max(b.hermiticity_defect());
            let spectral = a
                .eigenvalues()
                .iter()
                .zip(b.eigenvalues())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            worst = worst.max(spectral);
        }
        Ok((
            worst < 1e-10,
            format!("site and momentum builds agree to {worst:.2e} over u in {{0.5, 1, 4}}"),
        ))
    })());

    push_check(&mut checks, "cubic-vs-ed", (|| {
        let mut worst = 0.0f64;
        for &u in &[0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 100.0] {
            let s = summarize(HubbardParams::with_u(u)?)?;
            worst = worst.max((s.energy_ed - s.energy_cubic).abs());
        }
        Ok((
            worst < 1e-9,
            format!("lowest cubic root matches diagonalization to {worst:.2e}"),
        ))
    })());

    push_check(&mut checks, "ground-pattern", (|| {
        let mut worst = 0.0f64;
        for &u in &[0.5, 4.0, 16.0] {
            let p = HubbardParams::with_u(u)?;
            let s = summarize(p)?;
            if s.alpha <= 0.0 || s.beta <= 0.0 || s.gamma <= 0.0 {
                return Ok((false, format!("nonpositive amplitude at u = {u}")));
            }
            let weight =
                (2.0 * s.alpha * s.alpha + 12.0 * s.beta * s.beta + 2.0 * s.gamma * s.gamma
                    - 1.0)
                    .abs();
            let (_, gs) = ground_state_ed(p);
            worst = worst.max(weight).max(total_spin_squared(&gs));
        }
        Ok((
            worst < 1e-9,
            format!("template weight and total spin vanish to {worst:.2e}"),
        ))
    })());

    push_check(&mut checks, "exact-preparation", (|| {
        let tracked: Vec<usize> = TRACKED_STATES
            .iter()
            .map(|&s| basis.index_of(s).expect("tracked state in sector"))
            .collect();
        let mut fid_defect = 0.0f64;
        let mut energy_err = 0.0f64;
        let mut leak = 0.0f64;
        for &u in &[0.1, 1.0, 4.0, 16.0] {
            let report = prepare(u, Mode::Exact)?;
            fid_defect = fid_defect.max(1.0 - report.fidelity);
            energy_err = energy_err.max((report.energy - ground_energy_cubic(u)).abs());

            let plan = PreparationPlan::new(Mode::Exact, report.angles)?;
            let psi0 = StateVector::basis_vector(&basis, REFERENCE_STATE);
            let psi = apply_sequence(&basis, &psi0, plan.sequence());
            for (i, amp) in psi.amplitudes().iter().enumerate() {
                if !tracked.contains(&i) {
                    leak = leak.max(amp.norm());
                }
            }
        }
        let ok = fid_defect <= 1e-10 && energy_err <= 1e-9 && leak == 0.0;
        Ok((
            ok,
            format!(
                "fidelity defect {fid_defect:.2e}, energy error {energy_err:.2e}, \
                 leakage outside the ten configurations {leak:.1e}"
            ),
        ))
    })());

    push_check(&mut checks, "doubles-preparation", (|| {
        let r4 = prepare(4.0, Mode::DoublesOnly)?;
        let r8 = prepare(8.0, Mode::DoublesOnly)?;
        let ok = (r4.fidelity - 0.998452853147469).abs() <= 1e-11
            && (r4.energy - (-2.086687539475991)).abs() <= 1e-10
            && (r8.fidelity - 0.995590200689163).abs() <= 1e-11;
        Ok((
            ok,
            format!(
                "squared overlap {:.15} at u = 4 and {:.15} at u = 8",
                r4.fidelity, r8.fidelity
            ),
        ))
    })());

    push_check(&mut checks, "construction-table", (|| {
        let s = summarize(HubbardParams::with_u(4.0)?)?;
        let exact = exact_angles(s.alpha, s.beta, s.gamma)?;
        let [d1, d3, d4] = doubles_angles(s.alpha, s.beta, s.gamma)?;
        let mut worst = 0.0f64;
        for row in 1..=Mode::Exact.row_count() {
            worst = worst.max(verify_table_row(row, Mode::Exact, exact)?);
        }
        for row in 1..=Mode::DoublesOnly.row_count() {
            worst = worst.max(verify_table_row(row, Mode::DoublesOnly, [d1, 0.0, d3, d4])?);
        }
        Ok((
            worst <= 1e-10,
            format!("all bookkeeping rows reproduced to {worst:.2e} at u = 4"),
        ))
    })());

    push_check(&mut checks, "factor-identities", (|| {
        let iterations = match level {
            VerifyLevel::Fast => 10,
            VerifyLevel::Full => 100,
        };
        let shapes = template_factors(Mode::Exact);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst = 0.0f64;
        for _ in 0..iterations {
            let k = rng.gen_range(0..shapes.len());
            let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let factor = shapes[k].with_theta(theta)?;
            worst = worst
                .max(verify_cube_identity(&basis, &factor))
                .max(verify_square_projector(&basis, &factor));
            let closed = factor_matrix(&basis, &factor);
            worst = worst.max(closed.unitarity_defect());
            let expm = build_full_exponential(&basis, &AnsatzSequence::new(vec![factor]));
            worst = worst.max(linalg::frobenius(&(closed.matrix() - expm.matrix())));
        }
        Ok((
            worst <= 1e-11,
            format!("{iterations} random factors: worst identity defect {worst:.2e}"),
        ))
    })());

    push_check(&mut checks, "angle-domain", (|| {
        let mut worst_angle = 0.0f64;
        let mut tan_defect = 0.0f64;
        let mut shift = 0.0f64;
        for u in log_grid(0.01, 1000.0, 25) {
            let s = summarize(HubbardParams::with_u(u)?)?;
            let [t1, t2, t3, t4] = exact_angles(s.alpha, s.beta, s.gamma)?;
            let [d1, d3, d4] = doubles_angles(s.alpha, s.beta, s.gamma)?;
            for a in [t1, t2, t3, t4, d1, d3, d4] {
                worst_angle = worst_angle.max(a.abs());
            }
            tan_defect = tan_defect.max((t2.tan() - t1.tan() * t1.tan()).abs());
            shift = shift.max((d3 - t3).abs()).max((d4 - t4).abs());
        }
        let bound = std::f64::consts::FRAC_PI_4 + 1e-9;
        let ok = worst_angle < bound && tan_defect <= 1e-12 && shift <= 2e-3;
        Ok((
            ok,
            format!(
                "max |angle| {worst_angle:.6} < pi/4, tangent constraint to {tan_defect:.1e}, \
                 doubles shift {shift:.2e}"
            ),
        ))
    })());

    if level == VerifyLevel::Full {
        push_check(&mut checks, "limits", (|| {
            let weak = summarize(HubbardParams::with_u(1e-6)?)?;
            let weak_dev = (weak.alpha - std::f64::consts::FRAC_1_SQRT_2)
                .abs()
                .max(weak.beta)
                .max(weak.gamma);
            let strong = summarize(HubbardParams::with_u(1000.0)?)?;
            let [t1, _, _, _] = exact_angles(strong.alpha, strong.beta, strong.gamma)?;
            let saturation = t1.abs();
            let ratio_angle = (strong.gamma / strong.alpha).atan();
            let ok = weak_dev < 1e-6
                && saturation > 0.3077
                && saturation < 0.3078
                && (ratio_angle - std::f64::consts::FRAC_PI_4).abs() < 0.01;
            Ok((
                ok,
                format!(
                    "weak-coupling deviation {weak_dev:.1e}; at u = 1000, |theta1| = \
                     {saturation:.6} (the asin(1/sqrt(3))/2 = 0.307740 plateau) while \
                     atan(gamma/alpha) = {ratio_angle:.6} approaches pi/4"
                ),
            ))
        })());

        push_check(&mut checks, "fidelity-monotone", (|| {
            let us = [0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 100.0, 1000.0];
            let fids: Result<Vec<f64>> = us
                .par_iter()
                .map(|&u| Ok(prepare(u, Mode::DoublesOnly)?.fidelity))
                .collect();
            let fids = fids?;
            let monotone = fids.windows(2).all(|w| w[1] <= w[0] + 1e-12);
            Ok((
                monotone,
                format!(
                    "doubles-only overlap decreases from {:.10} to {:.10}",
                    fids[0],
                    fids[fids.len() - 1]
                ),
            ))
        })());

        push_check(&mut checks, "energy-sweep-full", (|| {
            let grid = log_grid(0.01, 100.0, 41);
            let devs: Result<Vec<(f64, f64)>> = grid
                .par_iter()
                .map(|&u| {
                    let report = prepare(u, Mode::Exact)?;
                    Ok((
                        (report.energy - ground_energy_cubic(u)).abs(),
                        1.0 - report.fidelity,
                    ))
                })
                .collect();
            let devs = devs?;
            let energy_err = devs.iter().map(|d| d.0).fold(0.0, f64::max);
            let fid_defect = devs.iter().map(|d| d.1).fold(0.0, f64::max);
            Ok((
                energy_err <= 1e-9 && fid_defect <= 1e-10,
                format!(
                    "41 points over u in [0.01, 100]: energy error {energy_err:.2e}, \
                     fidelity defect {fid_defect:.2e}"
                ),
            ))
        })());

        push_check(&mut checks, "vqe-convergence", (|| {
            let p4 = HubbardParams::with_u(4.0)?;
            let exact_run = minimize(
                &VqeProblem::table_problem(p4, Mode::Exact),
                &MinimizeConfig::default(),
            )?;
            let exact_err = (exact_run.best_energy - ground_energy_cubic(4.0)).abs();

            let s = summarize(p4)?;
            let [d1, d3, d4] = doubles_angles(s.alpha, s.beta, s.gamma)?;
            let doubles_problem = VqeProblem::table_problem(p4, Mode::DoublesOnly);
            let reference = vqe::energy(&doubles_problem, &[-d1, d3, -d4])?;
            let doubles_run = minimize(&doubles_problem, &MinimizeConfig::default())?;

            let ok = exact_err <= 1e-8
                && doubles_run.best_energy <= reference + 1e-10;
            Ok((
                ok,
                format!(
                    "exact mode reaches the cubic root to {exact_err:.2e} in {} evaluations; \
                     doubles-only best {:.12} vs closed-form angles {reference:.12}",
                    exact_run.evaluations, doubles_run.best_energy
                ),
            ))
        })());
    }

    VerifyReport { level, checks }
}

/// Process exit code for an error: 3 for numeric domain problems during a
/// computation, 1 for a ground state that fails template matching, 2 for
/// everything that amounts to bad input or a failed write.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Domain { .. } => 3,
        Error::PatternMismatch(_) => 1,
        Error::WrongSector(_)
        | Error::BadMomentum(_)
        | Error::BadFactor(_)
        | Error::BadRow { .. }
        | Error::Config(_)
        | Error::Io(_) => 2,
    }
}

/// Header of the optimization history CSV.
pub const VQE_HEADER: &str = "# evaluation,energy,best_energy (energies in units of t)";

/// Runs one seeded optimization and writes the evaluation history, with a
/// running best column, to `output`.
pub fn cmd_vqe(u: f64, mode: Mode, seed: u64, output: &Path) -> Result<VqeResult> {
    let params = HubbardParams::with_u(u)?;
    let problem = VqeProblem::table_problem(params, mode);
    let config = MinimizeConfig {
        seed,
        ..MinimizeConfig::default()
    };
    let result = minimize(&problem, &config)?;

    let mut writer = BufWriter::new(File::create(output)?);
    writeln!(writer, "{VQE_HEADER}")?;
    let mut best = f64::INFINITY;
    for (i, &e) in result.history.iter().enumerate() {
        best = best.min(e);
        writeln!(writer, "{},{},{}", i + 1, fmt_e17(e), fmt_e17(best))?;
    }
    writer.flush()?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    #[test]
    fn e17_formatting() {
        assert_eq!(fmt_e17(0.0), "0.00000000000000000e+00");
        assert_eq!(fmt_e17(1.5), "1.50000000000000000e+00");
        assert_eq!(fmt_e17(-2.75e-5), "-2.75000000000000010e-05");
        assert_eq!(fmt_e17(6.02214076e23), "6.02214075999999987e+23");
        assert_eq!(fmt_e17(1e100), "1.00000000000000002e+100");
        assert_eq!(fmt_e17(-3.3408476172), "-3.34084761720000012e+00");
    }

    fn config(tmp: &tempfile::TempDir, scale: Scale) -> SweepConfig {
        SweepConfig {
            u_min: 1.0,
            u_max: 4.0,
            steps: 4,
            scale,
            t: 1.0,
            output: tmp.path().join("out.csv"),
        }
    }

    #[test]
    fn grids_hit_both_endpoints() {
        let tmp = tempfile::tempdir().unwrap();
        let linear = config(&tmp, Scale::Linear).grid();
        assert_eq!(linear, vec![1.0, 2.0, 3.0, 4.0]);

        let log = config(&tmp, Scale::Log).grid();
        assert_eq!(log[0], 1.0);
        assert_eq!(log[3], 4.0);
        // Constant ratio between neighbors.
        assert!((log[1] / log[0] - log[2] / log[1]).abs() < 1e-12);
        assert!((log[1] - 4f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn config_validation_rejects_bad_grids() {
        let tmp = tempfile::tempdir().unwrap();
        let base = config(&tmp, Scale::Linear);

        let mut c = base.clone();
        c.u_min = 5.0;
        assert!(c.validate().is_err());

        let mut c = base.clone();
        c.steps = 1;
        assert!(c.validate().is_err());

        let mut c = base.clone();
        c.u_min = -1.0;
        assert!(c.validate().is_err());

        let mut c = base.clone();
        c.scale = Scale::Log;
        c.u_min = 0.0;
        c.u_max = 1.0;
        assert!(c.validate().is_err());

        let mut c = base.clone();
        c.t = 0.0;
        assert!(c.validate().is_err());

        assert!(base.validate().is_ok());
    }

    #[test]
    fn angle_sweep_writes_parseable_csv() {
        let tmp = tempfile::tempdir().unwrap();
        let c = config(&tmp, Scale::Linear);
        let summary = cmd_sweep_angles(&c).unwrap();
        assert_eq!(summary.written, 4);
        assert!(summary.skipped.is_empty());

        let text = fs::read_to_string(&c.output).unwrap();
        assert!(!text.contains('\r'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], ANGLES_HEADER);
        for line in &lines[1..] {
            let cells: Vec<f64> = line
                .split(',')
                .map(|c| c.parse::<f64>().unwrap())
                .collect();
            assert_eq!(cells.len(), 5);
            // theta1 negative, theta3 positive in the stored convention.
            assert!(cells[1] < 0.0 && cells[3] > 0.0);
        }
    }

    #[test]
    fn the_noninteracting_endpoint_prepares_its_limit() {
        let tmp = tempfile::tempdir().unwrap();
        let mut c = config(&tmp, Scale::Linear);
        c.u_min = 0.0;
        c.u_max = 2.0;
        c.steps = 3;
        let summary = cmd_sweep_energy(&c, Mode::Exact).unwrap();
        assert_eq!(summary.written, 3);
        assert!(summary.skipped.is_empty());

        let text = fs::read_to_string(&c.output).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().next().unwrap(), ENERGY_HEADER);

        // At u = 0 every angle vanishes, the construction reduces to the
        // fixed pi/4 rotation, and the symmetric two-state combination
        // comes out exactly.
        let first: Vec<f64> = text
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(first[0], 0.0);
        assert!((first[1] + 4.0).abs() < 1e-12, "cubic root {}", first[1]);
        assert!((first[3] + 4.0).abs() < 1e-12, "prepared energy {}", first[3]);
        assert!((first[4] - 1.0).abs() < 1e-12, "fidelity {}", first[4]);
    }

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(
            exit_code(&Error::Domain {
                context: "asin argument",
                value: 2.0
            }),
            3
        );
        assert_eq!(exit_code(&Error::PatternMismatch("leak".into())), 1);
        assert_eq!(exit_code(&Error::Config("bad grid".into())), 2);
        assert_eq!(exit_code(&Error::BadRow { row: 11, max: 10 }), 2);
    }

    #[test]
    fn every_template_shape_satisfies_the_factor_identities() {
        let basis = SectorBasis::half_filling();
        for (k, shape) in template_factors(Mode::Exact).iter().enumerate() {
            let factor = shape.with_theta(0.37).unwrap();
            let cube = verify_cube_identity(&basis, &factor);
            let proj = verify_square_projector(&basis, &factor);
            let closed = factor_matrix(&basis, &factor);
            let unit = closed.unitarity_defect();
            let expm = build_full_exponential(&basis, &AnsatzSequence::new(vec![factor]));
            let diff = linalg::frobenius(&(closed.matrix() - expm.matrix()));
            assert!(
                cube < 1e-12 && proj < 1e-12 && unit < 1e-12 && diff < 1e-11,
                "shape {k}: cube {cube:.2e}, projector {proj:.2e}, \
                 unitarity {unit:.2e}, closed-vs-exp {diff:.2e}"
            );
        }
    }

    #[test]
    fn fast_verification_passes() {
        let report = cmd_verify(VerifyLevel::Fast);
        assert!(report.all_passed(), "\n{report}");
        assert_eq!(report.checks().len(), 9);
        assert!(report.to_string().contains("PASS sector-enumeration"));
    }

    #[test]
    fn vqe_command_writes_the_history() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("history.csv");
        let result = cmd_vqe(4.0, Mode::Exact, 1, &out).unwrap();
        assert!(result.converged);

        let text = fs::read_to_string(&out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), result.evaluations + 1);
        assert_eq!(lines[0], VQE_HEADER);
        let last: Vec<&str> = lines[lines.len() - 1].split(',').collect();
        assert_eq!(last[0].parse::<usize>().unwrap(), result.evaluations);
        let best: f64 = last[2].parse().unwrap();
        assert!((best - result.best_energy).abs() < 1e-15);
    }
}
