//! The factorized preparation of the half-filled ground state.
//!
//! Starting from the reference configuration |01;03>, a fixed sequence of
//! pair and quad excitation factors rotates amplitude onto the ten
//! configurations that carry the ground state. Four closed-form angles
//! (theta1..theta4), computed from the exact amplitudes (alpha, beta,
//! gamma), make the preparation exact; dropping the quad factor gives the
//! doubles-only variant, whose angles are the same construction with the
//! quad's weight transfer absorbed into theta3 and theta4.
//!
//! Intermediate amplitudes after every factor have closed forms too; this
//! module keeps them as a bookkeeping table (one row per prefix of the
//! sequence) and [`verify_table_row`] checks the circuit against it row by
//! row. The whole construction never leaves the ten tracked configurations,
//! so every row is a ten-entry vector of real numbers.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use crate::error::{Error, Result};
use crate::fock::{BasisState, SectorBasis, SpinOrbital, StateVector};
use crate::hamiltonian::{build_momentum_space, HubbardParams};
use crate::spectrum::{extract_amplitudes, ground_state_ed};
use crate::ucc::{apply_factor, AnsatzSequence, ExcitationFactor};

/// Exact preparation (nine factors) or the doubles-only variant (eight,
/// skipping the quad).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    DoublesOnly,
}

impl Mode {
    /// Number of factors in the sequence.
    pub fn factor_count(self) -> usize {
        match self {
            Mode::Exact => 9,
            Mode::DoublesOnly => 8,
        }
    }

    /// Number of bookkeeping rows: the reference plus one row per factor.
    pub fn row_count(self) -> usize {
        self.factor_count() + 1
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::DoublesOnly => write!(f, "doubles"),
        }
    }
}

/// The configuration the construction starts from, |01;03>.
pub const REFERENCE_STATE: BasisState = BasisState::from_mask(147);

/// The ten configurations tracked by the bookkeeping table, in column
/// order: |01;03>, |03;01>, |12;23>, |23;12>, |01;12>, |12;01>, |03;23>,
/// |23;03>, |02;02>, |13;13>.
pub const TRACKED_STATES: [BasisState; 10] = [
    BasisState::from_mask(147),
    BasisState::from_mask(57),
    BasisState::from_mask(198),
    BasisState::from_mask(108),
    BasisState::from_mask(99),
    BasisState::from_mask(54),
    BasisState::from_mask(201),
    BasisState::from_mask(156),
    BasisState::from_mask(85),
    BasisState::from_mask(170),
];

/// Source/target orbital pairs of the nine factors, in sequence order.
/// The quad sits at position 2 and is the one the doubles-only mode skips;
/// the factor at position 3 always carries the fixed pi/4 rotation.
fn factor_shapes() -> [(Vec<SpinOrbital>, Vec<SpinOrbital>); 9] {
    let up = SpinOrbital::up;
    let dn = SpinOrbital::down;
    [
        // (targets, sources)
        (vec![up(2), dn(2)], vec![up(1), dn(3)]),
        (vec![up(3), dn(1)], vec![up(0), dn(0)]),
        (
            vec![up(2), up(3), dn(1), dn(2)],
            vec![up(0), up(1), dn(0), dn(3)],
        ),
        (vec![up(3), dn(1)], vec![up(1), dn(3)]),
        (vec![dn(1), dn(2)], vec![dn(0), dn(3)]),
        (vec![up(2), up(3)], vec![up(0), up(1)]),
        (vec![up(1), up(2)], vec![up(0), up(3)]),
        (vec![dn(2), dn(3)], vec![dn(0), dn(1)]),
        (vec![up(2), dn(2)], vec![up(0), dn(0)]),
    ]
}

/// Positions (into the nine shapes) used by each mode.
fn factor_positions(mode: Mode) -> &'static [usize] {
    match mode {
        Mode::Exact => &[0, 1, 2, 3, 4, 5, 6, 7, 8],
        Mode::DoublesOnly => &[0, 1, 3, 4, 5, 6, 7, 8],
    }
}

/// Rotation actually applied at each sequence slot, given the construction
/// angles. The sign pattern mirrors slots so that a single set of four
/// nonnegative-magnitude angles drives the whole sequence:
/// [-t1, -t1, t2, pi/4, -t3, +t3, -t3, +t3, -t4] for the exact mode, with
/// the quad slot removed in the doubles-only mode.
fn applied_angles(mode: Mode, angles: [f64; 4]) -> Vec<f64> {
    let [t1, t2, t3, t4] = angles;
    match mode {
        Mode::Exact => vec![-t1, -t1, t2, FRAC_PI_4, -t3, t3, -t3, t3, -t4],
        Mode::DoublesOnly => vec![-t1, -t1, FRAC_PI_4, -t3, t3, -t3, t3, -t4],
    }
}

/// The factor sequence of a mode with all construction-driven angles zero
/// and the fixed pi/4 in place. The optimizer binds its parameters on top
/// of this.
pub(crate) fn template_factors(mode: Mode) -> Vec<ExcitationFactor> {
    let shapes = factor_shapes();
    let zeros = applied_angles(mode, [0.0; 4]);
    factor_positions(mode)
        .iter()
        .zip(zeros)
        .map(|(&pos, theta)| {
            let (targets, sources) = shapes[pos].clone();
            ExcitationFactor::new(targets, sources, theta).expect("table factors are valid")
        })
        .collect()
}

/// A ready-to-run preparation: mode, construction angles, and the factor
/// sequence they generate.
#[derive(Clone, Debug)]
pub struct PreparationPlan {
    mode: Mode,
    angles: [f64; 4],
    fixed_rotation: f64,
    sequence: AnsatzSequence,
}

impl PreparationPlan {
    /// Builds the plan for `angles` = [theta1, theta2, theta3, theta4].
    ///
    /// In the exact mode the second angle must satisfy
    /// tan(theta2) = tan^2(theta1); the bookkeeping table is only closed
    /// under that constraint. The doubles-only mode has no theta2 and
    /// ignores that entry.
    pub fn new(mode: Mode, angles: [f64; 4]) -> Result<Self> {
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::Config(format!(
                "construction angles must be finite, got {angles:?}"
            )));
        }
        if mode == Mode::Exact {
            let defect = (angles[1].tan() - angles[0].tan().powi(2)).abs();
            if defect > 1e-12 {
                return Err(Error::Config(format!(
                    "exact mode requires tan(theta2) = tan^2(theta1); defect {defect:.3e}"
                )));
            }
        }
        let shapes = factor_shapes();
        let factors = factor_positions(mode)
            .iter()
            .zip(applied_angles(mode, angles))
            .map(|(&pos, theta)| {
                let (targets, sources) = shapes[pos].clone();
                ExcitationFactor::new(targets, sources, theta)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparationPlan {
            mode,
            angles,
            fixed_rotation: FRAC_PI_4,
            sequence: AnsatzSequence::new(factors),
        })
    }

    /// Which variant this plan prepares.
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The construction angles [theta1, theta2, theta3, theta4]; theta2 is
    /// meaningless in the doubles-only mode.
    pub fn angles(&self) -> [f64; 4] {
        self.angles
    }

    /// The angle of the fixed beam-splitter slot, always pi/4.
    pub fn fixed_rotation(&self) -> f64 {
        self.fixed_rotation
    }

    /// The factor sequence, in application order.
    pub fn sequence(&self) -> &AnsatzSequence {
        &self.sequence
    }
}

/// Closed-form construction angles for the exact preparation, from the
/// ground-state amplitudes. Returns [theta1, theta2, theta3, theta4].
///
/// Fails with a domain error when an arcsine argument leaves [-1, 1] or
/// alpha vanishes; callers sweeping over parameters should skip such
/// points.
pub fn exact_angles(alpha: f64, beta: f64, gamma: f64) -> Result<[f64; 4]> {
    let s = 4.0 * beta;
    if s.abs() > 1.0 {
        return Err(Error::Domain {
            context: "exact theta1: asin(4 beta)",
            value: s,
        });
    }
    let t1 = -0.5 * s.asin();
    let t2 = t1.tan().powi(2).atan();
    let mu12 = t1.cos().powi(2) * t2.cos() + t1.sin().powi(2) * t2.sin();
    let arg = 2.0 * SQRT_2 * beta / mu12;
    if !arg.is_finite() || arg.abs() > 1.0 {
        return Err(Error::Domain {
            context: "exact theta3: asin(2 sqrt(2) beta / mu12)",
            value: arg,
        });
    }
    let t3 = 0.5 * arg.asin();
    if alpha == 0.0 {
        return Err(Error::Domain {
            context: "exact theta4: gamma / alpha with vanishing alpha",
            value: alpha,
        });
    }
    let t4 = -(gamma / alpha).atan() + t3.tan().powi(2).atan();
    Ok([t1, t2, t3, t4])
}

/// Closed-form angles for the doubles-only preparation; the quad transfer
/// is absorbed by replacing mu12 with cos^2(theta1). Returns
/// [theta1, theta3, theta4].
pub fn doubles_angles(alpha: f64, beta: f64, gamma: f64) -> Result<[f64; 3]> {
    let s = 4.0 * beta;
    if s.abs() > 1.0 {
        return Err(Error::Domain {
            context: "doubles theta1: asin(4 beta)",
            value: s,
        });
    }
    let t1 = -0.5 * s.asin();
    let arg = 2.0 * SQRT_2 * beta / t1.cos().powi(2);
    if !arg.is_finite() || arg.abs() > 1.0 {
        return Err(Error::Domain {
            context: "doubles theta3: asin(2 sqrt(2) beta / cos^2 theta1)",
            value: arg,
        });
    }
    let t3 = 0.5 * arg.asin();
    if alpha == 0.0 {
        return Err(Error::Domain {
            context: "doubles theta4: gamma / alpha with vanishing alpha",
            value: alpha,
        });
    }
    let t4 = -(gamma / alpha).atan() + t3.tan().powi(2).atan();
    Ok([t1, t3, t4])
}

/// Squared overlap |<a|b>|^2.
pub fn fidelity(a: &StateVector, b: &StateVector) -> f64 {
    a.inner(b).norm_sqr()
}

/// Everything a preparation run produces.
#[derive(Clone, Debug)]
pub struct PreparationReport {
    /// Repulsion in units of t.
    pub u: f64,
    /// Which construction ran.
    pub mode: Mode,
    /// Construction angles [theta1, theta2, theta3, theta4]; theta2 is zero
    /// in the doubles-only mode.
    pub angles: [f64; 4],
    /// Energy expectation of the prepared state, in units of t.
    pub energy: f64,
    /// Squared overlap with the exact ground state.
    pub fidelity: f64,
    /// Tracked amplitudes after each prefix: `rows[0]` is the reference,
    /// `rows[r]` the state after the first r factors.
    pub rows: Vec<[f64; 10]>,
}

fn tracked_indices(basis: &SectorBasis) -> [usize; 10] {
    let mut out = [0usize; 10];
    for (k, &s) in TRACKED_STATES.iter().enumerate() {
        out[k] = basis.index_of(s).expect("tracked state in sector");
    }
    out
}

fn snapshot(state: &StateVector, idx: &[usize; 10]) -> [f64; 10] {
    let mut row = [0.0; 10];
    for (k, &i) in idx.iter().enumerate() {
        let amp = state.amplitude(i);
        debug_assert!(amp.im.abs() < 1e-12, "tracked amplitude left the real line");
        row[k] = amp.re;
    }
    row
}

/// Runs the construction at repulsion `u` (t = 1): solves the ground state,
/// converts amplitudes to angles, applies the sequence to the reference,
/// and reports energy, fidelity, and all bookkeeping rows.
pub fn prepare(u: f64, mode: Mode) -> Result<PreparationReport> {
    let params = HubbardParams::with_u(u)?;
    let (_, gs) = ground_state_ed(params);
    let (alpha, beta, gamma) = extract_amplitudes(&gs)?;
    let angles = match mode {
        Mode::Exact => exact_angles(alpha, beta, gamma)?,
        Mode::DoublesOnly => {
            let [t1, t3, t4] = doubles_angles(alpha, beta, gamma)?;
            [t1, 0.0, t3, t4]
        }
    };
    let plan = PreparationPlan::new(mode, angles)?;

    let basis = SectorBasis::half_filling();
    let idx = tracked_indices(&basis);
    let mut psi = StateVector::basis_vector(&basis, REFERENCE_STATE);
    let mut rows = Vec::with_capacity(mode.row_count());
    rows.push(snapshot(&psi, &idx));
    for factor in plan.sequence().factors() {
        psi = apply_factor(&basis, &psi, factor);
        rows.push(snapshot(&psi, &idx));
    }
    debug_assert!((psi.norm() - 1.0).abs() < 1e-12);

    let h = build_momentum_space(params, &basis)?;
    Ok(PreparationReport {
        u,
        mode,
        angles,
        energy: h.expectation(&psi) / params.t(),
        fidelity: fidelity(&psi, &gs),
        rows,
    })
}

/// Closed-form bookkeeping row for the exact mode. Valid under the plan
/// constraint tan(theta2) = tan^2(theta1); several entries below lean on
/// that identity.
fn exact_row(row: usize, angles: [f64; 4]) -> [f64; 10] {
    let [t1, t2, t3, t4] = angles;
    let (c1, s1) = (t1.cos(), t1.sin());
    let (c2, s2) = (t2.cos(), t2.sin());
    let (c3, s3) = (t3.cos(), t3.sin());
    let (c4, s4) = (t4.cos(), t4.sin());
    let mu12 = c1 * c1 * c2 + s1 * s1 * s2;
    let mu34 = c3 * c3 * c4 + s3 * s3 * s4;
    let nu34 = c3 * c3 * s4 - s3 * s3 * c4;
    let m = mu12 / SQRT_2;
    let w = c1 * s1;
    match row {
        1 => [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        2 => [c1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -s1, 0.0],
        3 => [
            c1 * c1,
            0.0,
            0.0,
            -s1 * s1,
            0.0,
            0.0,
            0.0,
            0.0,
            -w,
            w,
        ],
        4 => [mu12, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -w, w],
        5 => [m, m, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -w, w],
        6 => [m * c3, m, 0.0, 0.0, -m * s3, 0.0, 0.0, 0.0, -w, w],
        7 => [
            m * c3 * c3,
            m,
            0.0,
            -m * s3 * s3,
            -m * c3 * s3,
            0.0,
            0.0,
            m * c3 * s3,
            -w,
            w,
        ],
        8 => [
            m * c3 * c3,
            m * c3,
            0.0,
            -m * s3 * s3,
            -m * c3 * s3,
            -m * s3,
            0.0,
            m * c3 * s3,
            -w,
            w,
        ],
        9 => [
            m * c3 * c3,
            m * c3 * c3,
            -m * s3 * s3,
            -m * s3 * s3,
            -m * c3 * s3,
            -m * c3 * s3,
            m * c3 * s3,
            m * c3 * s3,
            -w,
            w,
        ],
        10 => [
            mu12 * mu34 / SQRT_2,
            mu12 * mu34 / SQRT_2,
            mu12 * nu34 / SQRT_2,
            mu12 * nu34 / SQRT_2,
            -m * c3 * s3,
            -m * c3 * s3,
            m * c3 * s3,
            m * c3 * s3,
            -w,
            w,
        ],
        _ => unreachable!("row range checked by the caller"),
    }
}

/// Closed-form bookkeeping row for the doubles-only mode. Free of any
/// angle constraint; the compact entries use the doubled angles.
fn doubles_row(row: usize, angles: [f64; 4]) -> [f64; 10] {
    let [t1, _, t3, t4] = angles;
    let (c1, s1) = (t1.cos(), t1.sin());
    let (c3, s3) = (t3.cos(), t3.sin());
    let (c4, s4) = (t4.cos(), t4.sin());
    let cc1 = (2.0 * t1).cos();
    let cc3 = (2.0 * t3).cos();
    let ss1 = (2.0 * t1).sin();
    let ss3 = (2.0 * t3).sin();
    let q = c1 * c1 / SQRT_2;
    let p = s1 * s1 / SQRT_2;
    let r8 = 2.0 * SQRT_2;
    match row {
        1 => [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        2 => [c1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -s1, 0.0],
        3 => [
            c1 * c1,
            0.0,
            0.0,
            -s1 * s1,
            0.0,
            0.0,
            0.0,
            0.0,
            -ss1 / 2.0,
            ss1 / 2.0,
        ],
        4 => [q, q, p, -p, 0.0, 0.0, 0.0, 0.0, -ss1 / 2.0, ss1 / 2.0],
        5 => [
            q * c3,
            q,
            p,
            -p * c3,
            -q * s3,
            0.0,
            0.0,
            -p * s3,
            -ss1 / 2.0,
            ss1 / 2.0,
        ],
        6 => [
            (cc1 * cc3 + 1.0) / r8,
            q,
            p,
            (cc1 * cc3 - 1.0) / r8,
            -cc1 * ss3 / r8,
            0.0,
            0.0,
            cc1 * ss3 / r8,
            -ss1 / 2.0,
            ss1 / 2.0,
        ],
        7 => [
            (cc1 * cc3 + 1.0) / r8,
            q * c3,
            p * c3,
            (cc1 * cc3 - 1.0) / r8,
            -cc1 * ss3 / r8,
            -q * s3,
            p * s3,
            cc1 * ss3 / r8,
            -ss1 / 2.0,
            ss1 / 2.0,
        ],
        8 => [
            (cc1 * cc3 + 1.0) / r8,
            (cc1 + cc3) / r8,
            (cc3 - cc1) / r8,
            (cc1 * cc3 - 1.0) / r8,
            -cc1 * ss3 / r8,
            -ss3 / r8,
            ss3 / r8,
            cc1 * ss3 / r8,
            -ss1 / 2.0,
            ss1 / 2.0,
        ],
        9 => [
            ((cc1 * cc3 + 1.0) * c4 + (cc1 - cc3) * s4) / r8,
            ((cc1 + cc3) * c4 - (cc1 * cc3 - 1.0) * s4) / r8,
            ((cc1 * cc3 + 1.0) * s4 - (cc1 - cc3) * c4) / r8,
            ((cc1 * cc3 - 1.0) * c4 + (cc1 + cc3) * s4) / r8,
            -cc1 * ss3 / r8,
            -ss3 / r8,
            ss3 / r8,
            cc1 * ss3 / r8,
            -ss1 / 2.0,
            ss1 / 2.0,
        ],
        _ => unreachable!("row range checked by the caller"),
    }
}

/// Replays the first `row_index - 1` factors on the reference and compares
/// the tracked amplitudes against the closed-form bookkeeping row,
/// returning the largest absolute deviation (imaginary parts count).
///
/// Rows are 1-based: row 1 is the reference itself, the last row the full
/// sequence. The exact mode has rows 1..=10, the doubles-only mode 1..=9.
pub fn verify_table_row(row_index: usize, mode: Mode, angles: [f64; 4]) -> Result<f64> {
    let max = mode.row_count();
    if row_index == 0 || row_index > max {
        return Err(Error::BadRow {
            row: row_index,
            max,
        });
    }
    let plan = PreparationPlan::new(mode, angles)?;
    let expected = match mode {
        Mode::Exact => exact_row(row_index, angles),
        Mode::DoublesOnly => doubles_row(row_index, angles),
    };

    let basis = SectorBasis::half_filling();
    let idx = tracked_indices(&basis);
    let mut psi = StateVector::basis_vector(&basis, REFERENCE_STATE);
    for factor in plan.sequence().prefix(row_index - 1).factors() {
        psi = apply_factor(&basis, &psi, factor);
    }

    let mut worst = 0.0f64;
    for (k, &i) in idx.iter().enumerate() {
        let amp = psi.amplitude(i);
        worst = worst.max((amp.re - expected[k]).abs()).max(amp.im.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::summarize;

    fn amplitudes_at(u: f64) -> (f64, f64, f64) {
        let s = summarize(HubbardParams::with_u(u).unwrap()).unwrap();
        (s.alpha, s.beta, s.gamma)
    }

    #[test]
    fn tracked_states_match_their_labels() {
        let names = [
            "|01;03>", "|03;01>", "|12;23>", "|23;12>", "|01;12>", "|12;01>", "|03;23>",
            "|23;03>", "|02;02>", "|13;13>",
        ];
        for (s, n) in TRACKED_STATES.iter().zip(names) {
            assert_eq!(s.to_string(), n);
        }
    }

    #[test]
    fn exact_angle_pins_at_u_4() {
        let (a, b, g) = amplitudes_at(4.0);
        let [t1, t2, t3, t4] = exact_angles(a, b, g).unwrap();
        assert!((t1 - -0.199648700897579).abs() < 1e-12);
        assert!((t2 - 0.040920371320991).abs() < 1e-12);
        assert!((t3 - 0.144982424923435).abs() < 1e-12);
        assert!((t4 - -0.183891744985118).abs() < 1e-12);
    }

    #[test]
    fn doubles_angle_pins_at_u_4() {
        let (a, b, g) = amplitudes_at(4.0);
        let [t1, t3, t4] = doubles_angles(a, b, g).unwrap();
        assert!((t1 - -0.199648700897579).abs() < 1e-12);
        assert!((t3 - 0.145107422088743).abs() < 1e-12);
        assert!((t4 - -0.183854465959693).abs() < 1e-12);
    }

    #[test]
    fn angle_domain_errors() {
        // 4 beta > 1 pushes the first arcsine out of range.
        assert!(matches!(
            exact_angles(0.5, 0.3, 0.1),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            doubles_angles(0.5, 0.3, 0.1),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            exact_angles(0.0, 0.01, 0.01),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn plan_enforces_the_tangent_constraint() {
        assert!(matches!(
            PreparationPlan::new(Mode::Exact, [0.3, 0.2, 0.1, 0.0]),
            Err(Error::Config(_))
        ));
        // The doubles-only mode ignores theta2.
        assert!(PreparationPlan::new(Mode::DoublesOnly, [0.3, 0.2, 0.1, 0.0]).is_ok());
    }

    #[test]
    fn applied_sequence_mirrors_the_angles() {
        let (a, b, g) = amplitudes_at(4.0);
        let angles = exact_angles(a, b, g).unwrap();
        let plan = PreparationPlan::new(Mode::Exact, angles).unwrap();
        let [t1, t2, t3, t4] = angles;
        let expect = [-t1, -t1, t2, FRAC_PI_4, -t3, t3, -t3, t3, -t4];
        let got: Vec<f64> = plan.sequence().factors().iter().map(|f| f.theta()).collect();
        assert_eq!(got, expect);
        assert_eq!(plan.fixed_rotation(), FRAC_PI_4);
    }

    #[test]
    fn exact_preparation_reaches_the_ground_state() {
        let report = prepare(4.0, Mode::Exact).unwrap();
        assert_eq!(report.rows.len(), 10);
        assert!((report.fidelity - 1.0).abs() < 1e-12, "fidelity {}", report.fidelity);
        let cubic = crate::spectrum::ground_energy_cubic(4.0);
        assert!((report.energy - cubic).abs() < 1e-10);

        // Final row equals the amplitude template.
        let (a, b, g) = amplitudes_at(4.0);
        let expect = [a, a, -g, -g, -b, -b, b, b, 2.0 * b, -2.0 * b];
        for (got, want) in report.rows[9].iter().zip(expect) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn construction_never_leaves_the_tracked_block() {
        let basis = SectorBasis::half_filling();
        let idx = tracked_indices(&basis);
        let (a, b, g) = amplitudes_at(4.0);
        let plan = PreparationPlan::new(Mode::Exact, exact_angles(a, b, g).unwrap()).unwrap();
        let mut psi = StateVector::basis_vector(&basis, REFERENCE_STATE);
        for factor in plan.sequence().factors() {
            psi = apply_factor(&basis, &psi, factor);
        }
        // Untracked amplitudes are never written, so they are exact zeros.
        for i in 0..basis.len() {
            if !idx.contains(&i) {
                assert_eq!(psi.amplitude(i).norm(), 0.0);
            }
        }
    }

    #[test]
    fn doubles_preparation_pins_at_u_4() {
        let report = prepare(4.0, Mode::DoublesOnly).unwrap();
        assert_eq!(report.rows.len(), 9);
        assert!((report.fidelity - 0.998452853147469).abs() < 1e-9);
        assert!((report.energy - -2.086687539475991).abs() < 1e-9);

        let pin = [
            0.656835293292741,
            0.645735086954961,
            -0.108890359269784,
            -0.162221793641091,
            -0.093213391683637,
            -0.101172163538313,
            0.101172163538313,
            0.093213391683637,
            0.194385555221950,
            -0.194385555221950,
        ];
        for (got, want) in report.rows[8].iter().zip(pin) {
            assert!((got - want).abs() < 1e-11, "{got} vs {want}");
        }
    }

    #[test]
    fn every_exact_row_matches_its_closed_form() {
        let (a, b, g) = amplitudes_at(4.0);
        let angles = exact_angles(a, b, g).unwrap();
        for row in 1..=10 {
            let r = verify_table_row(row, Mode::Exact, angles).unwrap();
            assert!(r < 1e-12, "row {row} residual {r}");
        }
    }

    #[test]
    fn every_doubles_row_matches_its_closed_form() {
        let (a, b, g) = amplitudes_at(4.0);
        let [t1, t3, t4] = doubles_angles(a, b, g).unwrap();
        for row in 1..=9 {
            let r = verify_table_row(row, Mode::DoublesOnly, [t1, 0.0, t3, t4]).unwrap();
            assert!(r < 1e-12, "row {row} residual {r}");
        }
    }

    #[test]
    fn doubles_rows_hold_for_unconstrained_angles() {
        // The doubles bookkeeping is a free identity in the three angles.
        for row in 1..=9 {
            let r = verify_table_row(row, Mode::DoublesOnly, [0.21, 0.0, -0.4, 0.9]).unwrap();
            assert!(r < 1e-13, "row {row} residual {r}");
        }
    }

    #[test]
    fn row_bounds_are_enforced() {
        let (a, b, g) = amplitudes_at(4.0);
        let angles = exact_angles(a, b, g).unwrap();
        assert!(matches!(
            verify_table_row(0, Mode::Exact, angles),
            Err(Error::BadRow { .. })
        ));
        assert!(matches!(
            verify_table_row(11, Mode::Exact, angles),
            Err(Error::BadRow { .. })
        ));
        let [t1, t3, t4] = doubles_angles(a, b, g).unwrap();
        assert!(matches!(
            verify_table_row(10, Mode::DoublesOnly, [t1, 0.0, t3, t4]),
            Err(Error::BadRow { max: 9, .. })
        ));
    }

    #[test]
    fn fidelity_is_the_squared_overlap() {
        let basis = SectorBasis::half_filling();
        let a1 = StateVector::basis_vector(&basis, BasisState::from_mask(147));
        let a2 = StateVector::basis_vector(&basis, BasisState::from_mask(57));
        assert_eq!(fidelity(&a1, &a1), 1.0);
        assert_eq!(fidelity(&a1, &a2), 0.0);
    }
}
