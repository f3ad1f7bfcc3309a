//! Factorized unitary coupled-cluster machinery.
//!
//! An excitation operator here is A = -i (product of target creations)
//! (product of source annihilations): sources are annihilated in listed
//! order, targets created in reverse listed order, and the -i prefactor
//! makes M = A + A^dag a real antisymmetric action on real amplitude
//! vectors. M is nilpotent-like in a useful way: M^2 is the diagonal
//! projector onto configurations where the factor can act in one direction
//! or the other, and M^3 = M. That collapses each unitary factor to the
//! closed form
//!
//! ```text
//!   exp(i theta M) psi = psi + i sin(theta) M psi + (cos(theta) - 1) P psi
//! ```
//!
//! which is how [`apply_factor`] evaluates it, with no matrix exponential.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    apply_annihilation, apply_creation, BasisState, SectorBasis, SpinOrbital, StateVector,
};
use crate::hamiltonian::SectorMatrix;
use crate::linalg;

/// One unitary factor exp(i theta (A + A^dag)), defined by where particles
/// move (sources to targets) and the rotation angle.
#[derive(Clone, Debug, PartialEq)]
pub struct ExcitationFactor {
    targets: Vec<SpinOrbital>,
    sources: Vec<SpinOrbital>,
    theta: f64,
}

impl ExcitationFactor {
    /// Validates and builds a factor.
    ///
    /// Targets and sources must have equal length 1, 2, or 4, all orbitals
    /// pairwise distinct, the spin projection balanced between the two
    /// lists, and the angle finite.
    pub fn new(
        targets: Vec<SpinOrbital>,
        sources: Vec<SpinOrbital>,
        theta: f64,
    ) -> Result<Self> {
        if targets.len() != sources.len() {
            return Err(Error::BadFactor(format!(
                "target and source counts differ: {} vs {}",
                targets.len(),
                sources.len()
            )));
        }
        if !matches!(targets.len(), 1 | 2 | 4) {
            return Err(Error::BadFactor(format!(
                "order must be 1, 2, or 4, got {}",
                targets.len()
            )));
        }
        let mut seen = [false; crate::fock::N_ORBITALS];
        for orb in targets.iter().chain(sources.iter()) {
            let idx = orb.canonical_index();
            if seen[idx] {
                return Err(Error::BadFactor(format!(
                    "orbital {orb} appears twice; all orbitals must be distinct"
                )));
            }
            seen[idx] = true;
        }
        let balance = |orbs: &[SpinOrbital]| orbs.iter().map(|o| o.spin().sz_twice()).sum::<i32>();
        if balance(&targets) != balance(&sources) {
            return Err(Error::BadFactor(
                "spin projection must balance between targets and sources".into(),
            ));
        }
        if !theta.is_finite() {
            return Err(Error::BadFactor(format!("angle must be finite, got {theta}")));
        }
        Ok(ExcitationFactor {
            targets,
            sources,
            theta,
        })
    }

    /// Target orbitals, in listed order.
    pub fn targets(&self) -> &[SpinOrbital] {
        &self.targets
    }

    /// Source orbitals, in listed order.
    pub fn sources(&self) -> &[SpinOrbital] {
        &self.sources
    }

    /// Rotation angle.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Number of moved particles.
    pub fn order(&self) -> usize {
        self.targets.len()
    }

    /// The same factor with a different angle.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::BadFactor(format!("angle must be finite, got {theta}")));
        }
        let mut out = self.clone();
        out.theta = theta;
        Ok(out)
    }
}

/// An ordered product of factors; the first factor acts on the ket first.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSequence {
    factors: Vec<ExcitationFactor>,
}

impl AnsatzSequence {
    /// Wraps a factor list in application order.
    pub fn new(factors: Vec<ExcitationFactor>) -> Self {
        AnsatzSequence { factors }
    }

    /// Number of factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// True when there are no factors.
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The factors, in application order.
    pub fn factors(&self) -> &[ExcitationFactor] {
        &self.factors
    }

    /// The first `count` factors as their own sequence.
    pub fn prefix(&self, count: usize) -> Self {
        assert!(count <= self.len(), "prefix longer than the sequence");
        AnsatzSequence {
            factors: self.factors[..count].to_vec(),
        }
    }

    /// The same factors with replaced angles.
    pub fn with_thetas(&self, thetas: &[f64]) -> Result<Self> {
        if thetas.len() != self.len() {
            return Err(Error::Config(format!(
                "expected {} angles, got {}",
                self.len(),
                thetas.len()
            )));
        }
        let factors = self
            .factors
            .iter()
            .zip(thetas)
            .map(|(f, &t)| f.with_theta(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnsatzSequence { factors })
    }
}

/// Walks one excitation term: annihilate `sources` in listed order, then
/// create `targets` in reverse listed order. The returned sign carries the
/// fermionic parity; `None` means the term annihilates the ket.
fn excitation_term(
    state: BasisState,
    sources: &[SpinOrbital],
    targets: &[SpinOrbital],
) -> Option<(BasisState, i32)> {
    let mut current = state;
    let mut sign = 1i32;
    for &orb in sources {
        let (next, s) = apply_annihilation(current, orb)?;
        current = next;
        sign *= s;
    }
    for &orb in targets.iter().rev() {
        let (next, s) = apply_creation(current, orb)?;
        current = next;
        sign *= s;
    }
    Some((current, sign))
}

/// Applies the excitation operator A (including its -i prefactor) to a
/// state. Configurations missing a source or blocked on a target are
/// annihilated, which is also why A^2 = 0.
pub fn apply_excitation(
    basis: &SectorBasis,
    state: &StateVector,
    factor: &ExcitationFactor,
) -> StateVector {
    assert_eq!(basis.len(), state.dim(), "dimension mismatch");
    let mut out = StateVector::zeros(basis.len());
    for (col, &ket) in basis.states().iter().enumerate() {
        let amp = state.amplitude(col);
        if amp.re == 0.0 && amp.im == 0.0 {
            continue;
        }
        if let Some((image, sign)) = excitation_term(ket, factor.sources(), factor.targets()) {
            let row = basis
                .index_of(image)
                .expect("excitation left the sector; factors conserve N and Sz");
            out.amplitudes_mut()[row] += amp * Complex64::new(0.0, -(sign as f64));
        }
    }
    out
}

/// Applies A^dag: targets annihilated in listed order, sources created in
/// reverse listed order, prefactor +i. Exactly the conjugate transpose of
/// [`apply_excitation`].
pub fn apply_excitation_dagger(
    basis: &SectorBasis,
    state: &StateVector,
    factor: &ExcitationFactor,
) -> StateVector {
    assert_eq!(basis.len(), state.dim(), "dimension mismatch");
    let mut out = StateVector::zeros(basis.len());
    for (col, &ket) in basis.states().iter().enumerate() {
        let amp = state.amplitude(col);
        if amp.re == 0.0 && amp.im == 0.0 {
            continue;
        }
        if let Some((image, sign)) = excitation_term(ket, factor.targets(), factor.sources()) {
            let row = basis
                .index_of(image)
                .expect("excitation left the sector; factors conserve N and Sz");
            out.amplitudes_mut()[row] += amp * Complex64::new(0.0, sign as f64);
        }
    }
    out
}

/// Whether the factor's projector P = M^2 passes `state` through: every
/// source occupied with every target empty, or the reverse.
fn projector_flag(state: BasisState, factor: &ExcitationFactor) -> bool {
    let all_occupied = |orbs: &[SpinOrbital]| orbs.iter().all(|&o| state.occupied(o));
    let all_empty = |orbs: &[SpinOrbital]| orbs.iter().all(|&o| !state.occupied(o));
    (all_occupied(factor.sources()) && all_empty(factor.targets()))
        || (all_occupied(factor.targets()) && all_empty(factor.sources()))
}

/// Applies one unitary factor through the closed form
/// psi + i sin(theta) M psi + (cos(theta) - 1) P psi.
pub fn apply_factor(
    basis: &SectorBasis,
    state: &StateVector,
    factor: &ExcitationFactor,
) -> StateVector {
    let mut m_psi = apply_excitation(basis, state, factor);
    let dag = apply_excitation_dagger(basis, state, factor);
    *m_psi.amplitudes_mut() += dag.amplitudes();

    let i_sin = Complex64::new(0.0, factor.theta().sin());
    let cos_less_one = factor.theta().cos() - 1.0;

    let mut out = state.clone();
    for (idx, &ket) in basis.states().iter().enumerate() {
        let mut amp = out.amplitude(idx);
        amp += i_sin * m_psi.amplitude(idx);
        if projector_flag(ket, factor) {
            amp += cos_less_one * state.amplitude(idx);
        }
        out.amplitudes_mut()[idx] = amp;
    }
    out
}

/// Applies a factor sequence left to right: the first factor first.
pub fn apply_sequence(
    basis: &SectorBasis,
    state: &StateVector,
    sequence: &AnsatzSequence,
) -> StateVector {
    sequence
        .factors()
        .iter()
        .fold(state.clone(), |psi, f| apply_factor(basis, &psi, f))
}

/// Dense Hermitian generator M = A + A^dag of one factor.
pub fn generator_matrix(basis: &SectorBasis, factor: &ExcitationFactor) -> SectorMatrix {
    let n = basis.len();
    let mut m = Array2::<Complex64>::zeros((n, n));
    for (col, &ket) in basis.states().iter().enumerate() {
        if let Some((image, sign)) = excitation_term(ket, factor.sources(), factor.targets()) {
            let row = basis.index_of(image).expect("factor conserves the sector");
            m[[row, col]] += Complex64::new(0.0, -(sign as f64));
        }
        if let Some((image, sign)) = excitation_term(ket, factor.targets(), factor.sources()) {
            let row = basis.index_of(image).expect("factor conserves the sector");
            m[[row, col]] += Complex64::new(0.0, sign as f64);
        }
    }
    SectorMatrix::new(m).expect("square by construction")
}

/// Dense unitary of one factor, built column by column from
/// [`apply_factor`].
pub fn factor_matrix(basis: &SectorBasis, factor: &ExcitationFactor) -> SectorMatrix {
    let n = basis.len();
    let mut m = Array2::<Complex64>::zeros((n, n));
    for (col, &ket) in basis.states().iter().enumerate() {
        let e = StateVector::basis_vector(basis, ket);
        let image = apply_factor(basis, &e, factor);
        for row in 0..n {
            m[[row, col]] = image.amplitude(row);
        }
    }
    SectorMatrix::new(m).expect("square by construction")
}

/// Unitary exp(i sum_k theta_k M_k) of all generators weighted by their
/// angles, through a full Hermitian eigendecomposition. This is the joint
/// exponential, not the factor product: the two differ whenever generators
/// fail to commute.
pub fn build_full_exponential(basis: &SectorBasis, sequence: &AnsatzSequence) -> SectorMatrix {
    let n = basis.len();
    let mut g = Array2::<Complex64>::zeros((n, n));
    for factor in sequence.factors() {
        let m = generator_matrix(basis, factor);
        let theta = Complex64::new(factor.theta(), 0.0);
        g += &m.matrix().mapv(|z| z * theta);
    }
    SectorMatrix::new(linalg::exp_i_hermitian(&g)).expect("square by construction")
}

/// Frobenius residual of the cube identity, || M^3 - M ||.
pub fn verify_cube_identity(basis: &SectorBasis, factor: &ExcitationFactor) -> f64 {
    let m = generator_matrix(basis, factor);
    let m2 = m.matrix().dot(m.matrix());
    let m3 = m2.dot(m.matrix());
    linalg::frobenius(&(&m3 - m.matrix()))
}

/// Frobenius residual of M^2 against the diagonal occupation projector.
pub fn verify_square_projector(basis: &SectorBasis, factor: &ExcitationFactor) -> f64 {
    let m = generator_matrix(basis, factor);
    let mut m2 = m.matrix().dot(m.matrix());
    for (idx, &ket) in basis.states().iter().enumerate() {
        if projector_flag(ket, factor) {
            m2[[idx, idx]] -= Complex64::new(1.0, 0.0);
        }
    }
    linalg::frobenius(&m2)
}
