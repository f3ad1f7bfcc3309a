//! Hamiltonians for the four-site Hubbard ring at half filling.
//!
//! Two equivalent builds are provided. The real-space build reads the mask
//! bits as site labels and implements nearest-neighbor hopping around the
//! ring plus the on-site repulsion. The momentum-space build reads the bits
//! as momentum modes, where the kinetic term is diagonal with the band
//! dispersion -2t cos(pi m / 2) and the interaction scatters momentum pairs.
//! The two spectra agree to machine precision; the momentum form is the one
//! whose ground state feeds the preparation construction.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{apply_annihilation, apply_creation, SectorBasis, SpinOrbital, StateVector};
use crate::linalg;

/// Model parameters: hopping `t` sets the energy unit, `u` is the on-site
/// repulsion measured in units of `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HubbardParams {
    t: f64,
    u: f64,
}

impl HubbardParams {
    /// Validates `t > 0` and `u >= 0`, both finite.
    pub fn new(t: f64, u: f64) -> Result<Self> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::Config(format!(
                "hopping must be finite and positive, got {t}"
            )));
        }
        if !u.is_finite() || u < 0.0 {
            return Err(Error::Config(format!(
                "repulsion must be finite and nonnegative, got {u}"
            )));
        }
        Ok(HubbardParams { t, u })
    }

    /// Repulsion `u` with the hopping fixed at one, so energies come out
    /// directly in units of t.
    pub fn with_u(u: f64) -> Result<Self> {
        Self::new(1.0, u)
    }

    /// Hopping amplitude.
    pub fn t(self) -> f64 {
        self.t
    }

    /// Repulsion in units of the hopping.
    pub fn u(self) -> f64 {
        self.u
    }

    /// Repulsion on the absolute energy scale, u * t.
    pub fn u_abs(self) -> f64 {
        self.u * self.t
    }
}

/// Dense operator on a sector basis. Hamiltonian builders produce Hermitian
/// content; the exponential builder stores unitaries in the same container.
#[derive(Clone, Debug)]
pub struct SectorMatrix {
    matrix: Array2<Complex64>,
}

impl SectorMatrix {
    /// Wraps a square matrix.
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Config(format!(
                "sector matrix must be square, got {} x {}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(SectorMatrix { matrix })
    }

    /// Dimension of the underlying sector.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Raw matrix, row index = output basis position.
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// Applies the operator to a state.
    pub fn apply(&self, state: &StateVector) -> StateVector {
        assert_eq!(self.dim(), state.dim(), "dimension mismatch");
        StateVector::from_amplitudes(self.matrix.dot(state.amplitudes()))
    }

    /// Expectation value <psi|M|psi> for normalized `psi`, as a real number.
    /// The imaginary part is discarded; for Hermitian content it is zero to
    /// rounding.
    pub fn expectation(&self, state: &StateVector) -> f64 {
        state.inner(&self.apply(state)).re
    }

    /// Ascending eigenvalues. Meaningful for Hermitian content.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigh(&self.matrix).values
    }

    /// Largest deviation from Hermiticity, max |M_ij - conj(M_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.matrix)
    }

    /// Largest deviation from unitarity, max |(M^dag M - 1)_ij|.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for a in 0..n {
                    dot += self.matrix[[a, i]].conj() * self.matrix[[a, j]];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).norm());
            }
        }
        worst
    }
}

/// Requires the half-filled sector basis: N = 4, twice-Sz = 0, 36 states.
fn require_half_filling(basis: &SectorBasis) -> Result<()> {
    if basis.n_particles() != 4 || basis.sz_twice() != 0 || basis.len() != 36 {
        return Err(Error::WrongSector(format!(
            "need N = 4, 2Sz = 0 with 36 states; got N = {}, 2Sz = {}, {} states",
            basis.n_particles(),
            basis.sz_twice(),
            basis.len()
        )));
    }
    Ok(())
}

/// Accumulates `coeff` times a normal-ordered operator string into `matrix`.
/// The string is given in written order: the last element acts on the ket
/// first.
pub(crate) fn add_string(
    matrix: &mut Array2<Complex64>,
    basis: &SectorBasis,
    coeff: f64,
    ops: &[(SpinOrbital, bool)],
) {
    for (col, &ket) in basis.states().iter().enumerate() {
        let mut state = ket;
        let mut sign = 1i32;
        let mut alive = true;
        for &(orbital, creates) in ops.iter().rev() {
            let step = if creates {
                apply_creation(state, orbital)
            } else {
                apply_annihilation(state, orbital)
            };
            match step {
                Some((next, s)) => {
                    state = next;
                    sign *= s;
                }
                None => {
                    alive = false;
                    break;
                }
            }
        }
        if !alive {
            continue;
        }
        let row = basis
            .index_of(state)
            .expect("operator string left the sector");
        matrix[[row, col]] += Complex64::new(coeff * sign as f64, 0.0);
    }
}

/// Band dispersion -2t cos(pi m / 2) for mode `momentum_index`.
///
/// The zeros at modes 1 and 3 are returned exactly rather than through the
/// floating-point cosine.
pub fn band_energy(momentum_index: usize, params: HubbardParams) -> Result<f64> {
    match momentum_index {
        0 => Ok(-2.0 * params.t),
        1 | 3 => Ok(0.0),
        2 => Ok(2.0 * params.t),
        other => Err(Error::BadMomentum(other)),
    }
}

/// Ring-lattice Hamiltonian with the mask bits read as site labels:
/// -t sum over bonds and spins of (c^dag_i c_j + c^dag_j c_i), plus
/// u_abs sum over sites of n_up n_down.
pub fn build_real_space(params: HubbardParams, basis: &SectorBasis) -> Result<SectorMatrix> {
    require_half_filling(basis)?;
    let n = basis.len();
    let mut matrix = Array2::zeros((n, n));

    for bond in 0..4usize {
        let (a, b) = (bond, (bond + 1) % 4);
        for spin in [SpinOrbital::up, SpinOrbital::down] {
            add_string(
                &mut matrix,
                basis,
                -params.t,
                &[(spin(a), true), (spin(b), false)],
            );
            add_string(
                &mut matrix,
                basis,
                -params.t,
                &[(spin(b), true), (spin(a), false)],
            );
        }
    }

    let u_abs = params.u_abs();
    for (idx, &state) in basis.states().iter().enumerate() {
        let mut doubly = 0.0;
        for site in 0..4 {
            if state.occupied(SpinOrbital::up(site)) && state.occupied(SpinOrbital::down(site)) {
                doubly += 1.0;
            }
        }
        matrix[[idx, idx]] += Complex64::new(u_abs * doubly, 0.0);
    }

    let out = SectorMatrix::new(matrix)?;
    debug_assert!(out.hermiticity_defect() < 1e-12);
    Ok(out)
}

/// Momentum-space Hamiltonian with the mask bits read as momentum modes.
///
/// The kinetic part is the diagonal band term. The interaction is written in
/// a particle-hole frame on the down spins: the quartic coefficient is
/// -u_abs / 4 with the momentum transfer k applied oppositely to the two
/// spins, and a constant 2 u_abs accounts for the filled down band. In this
/// frame the ground state carries the amplitude pattern the preparation
/// construction targets; the spectrum agrees with [`build_real_space`]
/// either way.
pub fn build_momentum_space(params: HubbardParams, basis: &SectorBasis) -> Result<SectorMatrix> {
    require_half_filling(basis)?;
    let n = basis.len();
    let mut matrix = Array2::zeros((n, n));

    for (idx, &state) in basis.states().iter().enumerate() {
        let mut diag = 2.0 * params.u_abs();
        for m in 0..4 {
            let eps = band_energy(m, params).expect("mode in range");
            if state.occupied(SpinOrbital::up(m)) {
                diag += eps;
            }
            if state.occupied(SpinOrbital::down(m)) {
                diag += eps;
            }
        }
        matrix[[idx, idx]] += Complex64::new(diag, 0.0);
    }

    let coeff = -params.u_abs() / 4.0;
    for i in 0..4usize {
        for j in 0..4usize {
            for k in 0..4usize {
                let ops = [
                    (SpinOrbital::up((i + k) % 4), true),
                    (SpinOrbital::up(i), false),
                    (SpinOrbital::down((j + 4 - k) % 4), true),
                    (SpinOrbital::down(j), false),
                ];
                add_string(&mut matrix, basis, coeff, &ops);
            }
        }
    }

    let out = SectorMatrix::new(matrix)?;
    debug_assert!(out.hermiticity_defect() < 1e-12);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{enumerate_sector, BasisState};

    #[test]
    fn params_are_validated() {
        assert!(HubbardParams::new(1.0, 4.0).is_ok());
        assert!(HubbardParams::new(0.0, 4.0).is_err());
        assert!(HubbardParams::new(-1.0, 4.0).is_err());
        assert!(HubbardParams::new(1.0, -0.5).is_err());
        assert!(HubbardParams::new(f64::NAN, 1.0).is_err());
        assert_eq!(HubbardParams::new(2.0, 3.0).unwrap().u_abs(), 6.0);
    }

    #[test]
    fn band_energies_match_dispersion() {
        let p = HubbardParams::with_u(0.0).unwrap();
        assert_eq!(band_energy(0, p).unwrap(), -2.0);
        assert_eq!(band_energy(1, p).unwrap(), 0.0);
        assert_eq!(band_energy(2, p).unwrap(), 2.0);
        assert_eq!(band_energy(3, p).unwrap(), 0.0);
        assert!(matches!(band_energy(4, p), Err(Error::BadMomentum(4))));

        let p2 = HubbardParams::new(1.7, 0.0).unwrap();
        assert_eq!(band_energy(2, p2).unwrap(), 3.4);
    }

    #[test]
    fn wrong_sector_is_rejected() {
        let p = HubbardParams::with_u(1.0).unwrap();
        let bad = enumerate_sector(3, 1);
        assert!(matches!(
            build_momentum_space(p, &bad),
            Err(Error::WrongSector(_))
        ));
        assert!(matches!(
            build_real_space(p, &bad),
            Err(Error::WrongSector(_))
        ));
    }

    #[test]
    fn momentum_build_is_diagonal_at_zero_repulsion() {
        let basis = SectorBasis::half_filling();
        let p = HubbardParams::with_u(0.0).unwrap();
        let h = build_momentum_space(p, &basis).unwrap();
        for i in 0..36 {
            for j in 0..36 {
                if i != j {
                    assert_eq!(h.matrix()[[i, j]], Complex64::new(0.0, 0.0));
                }
            }
        }
        // |01;03> fills modes with band energies -2, 0, -2, 0.
        let idx = basis.index_of(BasisState::from_mask(147)).unwrap();
        assert_eq!(h.matrix()[[idx, idx]].re, -4.0);
    }

    #[test]
    fn builders_are_hermitian_and_isospectral() {
        let basis = SectorBasis::half_filling();
        for u in [0.5, 1.0, 4.0] {
            let p = HubbardParams::with_u(u).unwrap();
            let hm = build_momentum_space(p, &basis).unwrap();
            let hr = build_real_space(p, &basis).unwrap();
            assert!(hm.hermiticity_defect() < 1e-12);
            assert!(hr.hermiticity_defect() < 1e-12);
            let em = hm.eigenvalues();
            let er = hr.eigenvalues();
            for (a, b) in em.iter().zip(er.iter()) {
                assert!((a - b).abs() < 1e-10, "u = {u}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn momentum_build_conserves_total_momentum() {
        let basis = SectorBasis::half_filling();
        let p = HubbardParams::with_u(4.0).unwrap();
        let h = build_momentum_space(p, &basis).unwrap();
        for i in 0..36 {
            for j in 0..36 {
                if h.matrix()[[i, j]].norm() > 1e-14 {
                    let pi = basis.state(i).momentum_total() % 4;
                    let pj = basis.state(j).momentum_total() % 4;
                    assert_eq!(pi, pj, "momentum broken between {i} and {j}");
                }
            }
        }
    }

    #[test]
    fn expectation_reads_diagonal_entries() {
        let basis = SectorBasis::half_filling();
        let p = HubbardParams::with_u(4.0).unwrap();
        let h = build_momentum_space(p, &basis).unwrap();
        let a1 = StateVector::basis_vector(&basis, BasisState::from_mask(147));
        let idx = basis.index_of(BasisState::from_mask(147)).unwrap();
        let expect = h.matrix()[[idx, idx]].re;
        assert!((h.expectation(&a1) - expect).abs() < 1e-14);
    }

    #[test]
    fn rectangular_matrices_are_rejected() {
        let m = Array2::<Complex64>::zeros((3, 4));
        assert!(SectorMatrix::new(m).is_err());
    }
}
