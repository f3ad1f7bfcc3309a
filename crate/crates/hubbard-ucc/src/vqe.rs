//! Derivative-free minimization of the prepared-state energy.
//!
//! The optimizer is a plain Nelder-Mead simplex (reflection 1, expansion 2,
//! contraction 0.5, shrink 0.5) over the free angles of a factor sequence,
//! with one twist: when the incumbent stops improving for a stretch of
//! iterations, the simplex is rebuilt around the best point with a seeded
//! random spread. Runs are fully deterministic for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fock::{BasisState, SectorBasis, StateVector};
use crate::hamiltonian::{build_momentum_space, HubbardParams, SectorMatrix};
use crate::stateprep::{template_factors, Mode, REFERENCE_STATE};
use crate::ucc::{apply_sequence, AnsatzSequence};

/// How one sequence slot gets its angle during optimization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AngleBinding {
    /// The slot keeps the angle already stored in the sequence.
    Frozen,
    /// The slot takes `scale * parameters[parameter]`.
    Free { parameter: usize, scale: f64 },
}

/// An energy-minimization problem: a Hamiltonian, a factor sequence, and a
/// binding of free parameters onto sequence slots.
#[derive(Clone, Debug)]
pub struct VqeProblem {
    params: HubbardParams,
    sequence: AnsatzSequence,
    bindings: Vec<AngleBinding>,
    start_state: BasisState,
    initial_angles: Vec<f64>,
}

impl VqeProblem {
    /// Validates and builds a problem.
    ///
    /// Bindings must cover the sequence one to one, free parameters must be
    /// numbered contiguously from zero (ties are allowed: several slots may
    /// share a parameter), scales must be finite and nonzero, and the start
    /// state must live in the half-filled sector.
    pub fn new(
        params: HubbardParams,
        sequence: AnsatzSequence,
        bindings: Vec<AngleBinding>,
        start_state: BasisState,
        initial_angles: Vec<f64>,
    ) -> Result<Self> {
        if bindings.len() != sequence.len() {
            return Err(Error::Config(format!(
                "expected {} bindings, got {}",
                sequence.len(),
                bindings.len()
            )));
        }
        let mut used = vec![false; bindings.len()];
        let mut count = 0usize;
        for b in &bindings {
            if let AngleBinding::Free { parameter, scale } = *b {
                if !scale.is_finite() || scale == 0.0 {
                    return Err(Error::Config(format!(
                        "binding scale must be finite and nonzero, got {scale}"
                    )));
                }
                if parameter >= used.len() {
                    return Err(Error::Config(format!(
                        "parameter index {parameter} too large for {} slots",
                        used.len()
                    )));
                }
                if !used[parameter] {
                    used[parameter] = true;
                    count = count.max(parameter + 1);
                }
            }
        }
        if used[..count].iter().any(|u| !u) {
            return Err(Error::Config(
                "free parameters must be numbered contiguously from zero".into(),
            ));
        }
        if initial_angles.len() != count {
            return Err(Error::Config(format!(
                "expected {count} initial angles, got {}",
                initial_angles.len()
            )));
        }
        if initial_angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::Config("initial angles must be finite".into()));
        }
        if start_state.particle_count() != 4 || start_state.sz_twice() != 0 {
            return Err(Error::WrongSector(format!(
                "start state {start_state} is not in the N = 4, Sz = 0 sector"
            )));
        }
        Ok(VqeProblem {
            params,
            sequence,
            bindings,
            start_state,
            initial_angles,
        })
    }

    /// The standard problem for a construction mode: the bookkeeping
    /// sequence from the reference state, the pi/4 slot frozen, and the
    /// remaining slots tied to four (exact) or three (doubles-only)
    /// parameters following the construction's mirror pattern. Initial
    /// angles are all zero; at the optimum the parameters sit at
    /// (-theta1, theta2, theta3, -theta4), all positive.
    pub fn table_problem(params: HubbardParams, mode: Mode) -> Self {
        let free = |parameter: usize, scale: f64| AngleBinding::Free { parameter, scale };
        let bindings = match mode {
            Mode::Exact => vec![
                free(0, 1.0),
                free(0, 1.0),
                free(1, 1.0),
                AngleBinding::Frozen,
                free(2, -1.0),
                free(2, 1.0),
                free(2, -1.0),
                free(2, 1.0),
                free(3, 1.0),
            ],
            Mode::DoublesOnly => vec![
                free(0, 1.0),
                free(0, 1.0),
                AngleBinding::Frozen,
                free(1, -1.0),
                free(1, 1.0),
                free(1, -1.0),
                free(1, 1.0),
                free(2, 1.0),
            ],
        };
        let n = match mode {
            Mode::Exact => 4,
            Mode::DoublesOnly => 3,
        };
        Self::new(
            params,
            AnsatzSequence::new(template_factors(mode)),
            bindings,
            REFERENCE_STATE,
            vec![0.0; n],
        )
        .expect("table bindings are valid")
    }

    /// Model parameters.
    pub fn params(&self) -> HubbardParams {
        self.params
    }

    /// The slot-to-parameter map.
    pub fn bindings(&self) -> &[AngleBinding] {
        &self.bindings
    }

    /// The underlying sequence (frozen slots keep these angles).
    pub fn sequence(&self) -> &AnsatzSequence {
        &self.sequence
    }

    /// The configuration the sequence starts from.
    pub fn start_state(&self) -> BasisState {
        self.start_state
    }

    /// Starting point of the optimization.
    pub fn initial_angles(&self) -> &[f64] {
        &self.initial_angles
    }

    /// Number of free parameters.
    pub fn parameter_count(&self) -> usize {
        self.initial_angles.len()
    }

    /// The sequence with free slots filled from `parameters`.
    pub fn resolve(&self, parameters: &[f64]) -> Result<AnsatzSequence> {
        if parameters.len() != self.parameter_count() {
            return Err(Error::Config(format!(
                "expected {} parameters, got {}",
                self.parameter_count(),
                parameters.len()
            )));
        }
        let thetas: Vec<f64> = self
            .sequence
            .factors()
            .iter()
            .zip(&self.bindings)
            .map(|(f, b)| match *b {
                AngleBinding::Frozen => f.theta(),
                AngleBinding::Free { parameter, scale } => scale * parameters[parameter],
            })
            .collect();
        self.sequence.with_thetas(&thetas)
    }
}

/// Energy expectation of the sequence at the given parameters, on the
/// absolute scale of the Hamiltonian (divide by t for units of t).
pub fn energy(problem: &VqeProblem, parameters: &[f64]) -> Result<f64> {
    let sequence = problem.resolve(parameters)?;
    let basis = SectorBasis::half_filling();
    let h = build_momentum_space(problem.params(), &basis)?;
    let psi0 = StateVector::basis_vector(&basis, problem.start_state());
    let psi = apply_sequence(&basis, &psi0, &sequence);
    Ok(h.expectation(&psi))
}

/// Optimizer knobs.
#[derive(Clone, Copy, Debug)]
pub struct MinimizeConfig {
    /// Hard budget on energy evaluations; the run returns its best point
    /// (not an error) when the budget runs out.
    pub max_evaluations: usize,
    /// Convergence threshold on the simplex energy spread.
    pub tolerance: f64,
    /// Seed for the restart spread.
    pub seed: u64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        MinimizeConfig {
            max_evaluations: 20_000,
            tolerance: 1e-10,
            seed: 1,
            initial_step: 0.1,
        }
    }
}

/// Outcome of a minimization run.
#[derive(Clone, Debug)]
pub struct VqeResult {
    /// Best parameters found.
    pub best_angles: Vec<f64>,
    /// Energy at the best parameters, absolute scale.
    pub best_energy: f64,
    /// Number of energy evaluations spent; equals `history.len()`.
    pub evaluations: usize,
    /// False when the run stopped on the evaluation budget instead of the
    /// spread tolerance.
    pub converged: bool,
    /// Energy of every evaluation, in order.
    pub history: Vec<f64>,
}

struct Evaluator<'a> {
    problem: &'a VqeProblem,
    basis: SectorBasis,
    h: SectorMatrix,
    psi0: StateVector,
    history: Vec<f64>,
    max_evaluations: usize,
}

impl<'a> Evaluator<'a> {
    fn new(problem: &'a VqeProblem, max_evaluations: usize) -> Result<Self> {
        let basis = SectorBasis::half_filling();
        let h = build_momentum_space(problem.params(), &basis)?;
        let psi0 = StateVector::basis_vector(&basis, problem.start_state());
        Ok(Evaluator {
            problem,
            basis,
            h,
            psi0,
            history: Vec::new(),
            max_evaluations,
        })
    }

    /// One energy evaluation, or `None` once the budget is spent.
    fn try_eval(&mut self, parameters: &[f64]) -> Option<f64> {
        if self.history.len() >= self.max_evaluations {
            return None;
        }
        let sequence = self
            .problem
            .resolve(parameters)
            .expect("parameter count fixed by the problem");
        let psi = apply_sequence(&self.basis, &self.psi0, &sequence);
        let e = self.h.expectation(&psi);
        self.history.push(e);
        Some(e)
    }
}

/// Minimizes the problem's energy over its free parameters.
///
/// Running out of the evaluation budget is not an error: the result carries
/// the best point seen with `converged = false`. A problem with no free
/// parameters evaluates once and reports convergence.
pub fn minimize(problem: &VqeProblem, config: &MinimizeConfig) -> Result<VqeResult> {
    if config.max_evaluations == 0 {
        return Err(Error::Config("evaluation budget must be positive".into()));
    }
    if config.tolerance <= 0.0 || !config.tolerance.is_finite() {
        return Err(Error::Config(format!(
            "tolerance must be positive and finite, got {}",
            config.tolerance
        )));
    }
    if config.initial_step <= 0.0 || !config.initial_step.is_finite() {
        return Err(Error::Config(format!(
            "initial step must be positive and finite, got {}",
            config.initial_step
        )));
    }

    let n = problem.parameter_count();
    let mut ev = Evaluator::new(problem, config.max_evaluations)?;

    if n == 0 {
        let e = ev
            .try_eval(&[])
            .expect("budget checked positive above");
        return Ok(VqeResult {
            best_angles: vec![],
            best_energy: e,
            evaluations: ev.history.len(),
            converged: true,
            history: ev.history,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let x0 = problem.initial_angles().to_vec();

    // points[i] is a vertex, values[i] its energy; INFINITY marks vertices
    // that never got evaluated because the budget ran dry.
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    let mut exhausted = false;

    let seed_vertex = |p: Vec<f64>, ev: &mut Evaluator, exhausted: &mut bool| -> f64 {
        match ev.try_eval(&p) {
            Some(e) => e,
            None => {
                *exhausted = true;
                f64::INFINITY
            }
        }
    };

    points.push(x0.clone());
    let f0 = seed_vertex(x0.clone(), &mut ev, &mut exhausted);
    values.push(f0);
    for i in 0..n {
        let mut p = x0.clone();
        p[i] += config.initial_step;
        let f = seed_vertex(p.clone(), &mut ev, &mut exhausted);
        points.push(p);
        values.push(f);
    }

    let mut best_x = points[0].clone();
    let mut best_f = values[0];
    let mut converged = false;
    let mut stagnant_iters = 0usize;
    let mut restarts = 0u32;

    loop {
        // Ascending by energy.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let reordered_p: Vec<Vec<f64>> = order.iter().map(|&i| points[i].clone()).collect();
        let reordered_v: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        points = reordered_p;
        values = reordered_v;

        if values[0] < best_f - 1e-15 {
            best_f = values[0];
            best_x = points[0].clone();
            stagnant_iters = 0;
        } else {
            stagnant_iters += 1;
        }

        if exhausted {
            break;
        }
        if values[n] - values[0] < config.tolerance {
            converged = true;
            break;
        }

        // Restart from the incumbent when progress stalls: shrink the
        // spread each time, with a seeded jitter so successive restarts
        // explore different directions.
        if stagnant_iters >= 80 {
            restarts += 1;
            stagnant_iters = 0;
            let spread = config.initial_step * 0.5f64.powi(restarts.min(20) as i32);
            points[0] = best_x.clone();
            values[0] = best_f;
            for i in 1..=n {
                let mut p = best_x.clone();
                for coord in p.iter_mut() {
                    if rng.gen_bool(0.5) {
                        *coord += spread * rng.gen_range(0.25..1.0);
                    } else {
                        *coord -= spread * rng.gen_range(0.25..1.0);
                    }
                }
                match ev.try_eval(&p) {
                    Some(e) => {
                        points[i] = p;
                        values[i] = e;
                    }
                    None => {
                        exhausted = true;
                        break;
                    }
                }
            }
            continue;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; n];
        for p in points.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }
        let worst = points[n].clone();
        let lerp = |from: &[f64], towards: &[f64], t: f64| -> Vec<f64> {
            from.iter()
                .zip(towards)
                .map(|(a, b)| a + t * (b - a))
                .collect()
        };

        // Reflection.
        let xr = lerp(&centroid, &worst, -1.0);
        let Some(fr) = ev.try_eval(&xr) else {
            exhausted = true;
            continue;
        };

        if fr < values[0] {
            // Expansion.
            let xe = lerp(&centroid, &worst, -2.0);
            let Some(fe) = ev.try_eval(&xe) else {
                exhausted = true;
                continue;
            };
            if fe < fr {
                points[n] = xe;
                values[n] = fe;
            } else {
                points[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            points[n] = xr;
            values[n] = fr;
            continue;
        }

        // Contraction, outside or inside of the worst vertex.
        let (xc, reference) = if fr < values[n] {
            (lerp(&centroid, &xr, 0.5), fr)
        } else {
            (lerp(&centroid, &worst, 0.5), values[n])
        };
        let Some(fc) = ev.try_eval(&xc) else {
            exhausted = true;
            continue;
        };
        if fc <= reference {
            points[n] = xc;
            values[n] = fc;
            continue;
        }

        // Shrink towards the best vertex.
        for i in 1..=n {
            let p = lerp(&points[0].clone(), &points[i], 0.5);
            match ev.try_eval(&p) {
                Some(e) => {
                    points[i] = p;
                    values[i] = e;
                }
                None => {
                    exhausted = true;
                    break;
                }
            }
        }
    }

    // The loop's bookkeeping may lag the last evaluations.
    for (p, &f) in points.iter().zip(values.iter()) {
        if f < best_f {
            best_f = f;
            best_x = p.clone();
        }
    }

    Ok(VqeResult {
        best_angles: best_x,
        best_energy: best_f,
        evaluations: ev.history.len(),
        converged,
        history: ev.history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{ground_energy_cubic, summarize};
    use crate::stateprep::exact_angles;

    fn u4() -> HubbardParams {
        HubbardParams::with_u(4.0).unwrap()
    }

    #[test]
    fn table_problem_shapes() {
        let exact = VqeProblem::table_problem(u4(), Mode::Exact);
        assert_eq!(exact.parameter_count(), 4);
        assert_eq!(exact.bindings().len(), 9);
        assert_eq!(
            exact.sequence().factors()[3].theta(),
            std::f64::consts::FRAC_PI_4
        );

        let doubles = VqeProblem::table_problem(u4(), Mode::DoublesOnly);
        assert_eq!(doubles.parameter_count(), 3);
        assert_eq!(doubles.bindings().len(), 8);
        assert_eq!(
            doubles.sequence().factors()[2].theta(),
            std::f64::consts::FRAC_PI_4
        );
    }

    #[test]
    fn energy_at_the_closed_form_optimum_is_the_ground_energy() {
        let s = summarize(u4()).unwrap();
        let [t1, t2, t3, t4] = exact_angles(s.alpha, s.beta, s.gamma).unwrap();
        let problem = VqeProblem::table_problem(u4(), Mode::Exact);
        let e = energy(&problem, &[-t1, t2, t3, -t4]).unwrap();
        assert!((e - s.energy_ed).abs() < 1e-12, "{e} vs {}", s.energy_ed);
    }

    #[test]
    fn minimize_recovers_the_ground_energy_from_zeros() {
        let problem = VqeProblem::table_problem(u4(), Mode::Exact);
        let result = minimize(&problem, &MinimizeConfig::default()).unwrap();
        let target = ground_energy_cubic(4.0);
        assert!(
            (result.best_energy - target).abs() < 1e-8,
            "best {} target {target} after {} evaluations",
            result.best_energy,
            result.evaluations
        );
        assert!(result.converged);
        assert_eq!(result.history.len(), result.evaluations);
        assert!(result.evaluations <= 20_000);
        // The construction's mirror convention puts every optimum
        // parameter in the positive quadrant.
        for p in &result.best_angles {
            assert!(*p > 0.0, "parameters {:?}", result.best_angles);
        }
    }

    #[test]
    fn runs_are_deterministic_per_seed() {
        let problem = VqeProblem::table_problem(u4(), Mode::DoublesOnly);
        let config = MinimizeConfig {
            max_evaluations: 600,
            ..MinimizeConfig::default()
        };
        let a = minimize(&problem, &config).unwrap();
        let b = minimize(&problem, &config).unwrap();
        assert_eq!(a.history, b.history);
        assert_eq!(a.best_angles, b.best_angles);
    }

    #[test]
    fn budget_exhaustion_returns_best_so_far() {
        let problem = VqeProblem::table_problem(u4(), Mode::Exact);
        let config = MinimizeConfig {
            max_evaluations: 7,
            ..MinimizeConfig::default()
        };
        let result = minimize(&problem, &config).unwrap();
        assert!(!result.converged);
        assert_eq!(result.evaluations, 7);
        assert!(result.best_energy.is_finite());
    }

    #[test]
    fn frozen_only_problems_evaluate_once() {
        let factors = template_factors(Mode::Exact);
        let bindings = vec![AngleBinding::Frozen; factors.len()];
        let problem = VqeProblem::new(
            u4(),
            AnsatzSequence::new(factors),
            bindings,
            REFERENCE_STATE,
            vec![],
        )
        .unwrap();
        let result = minimize(&problem, &MinimizeConfig::default()).unwrap();
        assert!(result.converged);
        assert_eq!(result.evaluations, 1);
        assert!(result.best_angles.is_empty());
    }

    #[test]
    fn problem_validation() {
        let factors = template_factors(Mode::Exact);
        let seq = AnsatzSequence::new(factors);
        let free = |p: usize| AngleBinding::Free {
            parameter: p,
            scale: 1.0,
        };

        // Too few bindings.
        assert!(VqeProblem::new(u4(), seq.clone(), vec![free(0); 3], REFERENCE_STATE, vec![0.0])
            .is_err());
        // Gap in parameter numbering (0 missing).
        let mut gappy = vec![AngleBinding::Frozen; 9];
        gappy[0] = free(1);
        assert!(
            VqeProblem::new(u4(), seq.clone(), gappy, REFERENCE_STATE, vec![0.0, 0.0]).is_err()
        );
        // Initial angle count must match the parameter count.
        let mut one = vec![AngleBinding::Frozen; 9];
        one[0] = free(0);
        assert!(VqeProblem::new(
            u4(),
            seq.clone(),
            one.clone(),
            REFERENCE_STATE,
            vec![0.0, 0.0]
        )
        .is_err());
        // Start state outside the sector.
        assert!(VqeProblem::new(
            u4(),
            seq,
            one,
            BasisState::from_mask(0b0000_0111),
            vec![0.0]
        )
        .is_err());
    }
}
