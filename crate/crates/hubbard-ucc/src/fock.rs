//! Occupation-number bookkeeping for four momentum modes per spin.
//!
//! A basis state is a bitmask over eight spin-orbitals: bits 0..=3 hold the
//! up-spin modes m = 0..=3, bits 4..=7 the down-spin modes. Creation and
//! annihilation follow the Jordan-Wigner sign rule, (-1)^(number of occupied
//! bits strictly below the target), so operator algebra on masks reproduces
//! fermionic anticommutation exactly.

use ndarray::Array1;
use num_complex::Complex64;

/// Number of spin-orbitals (four momentum modes, two spin projections).
pub const N_ORBITALS: usize = 8;

/// Spin projection label.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    /// Twice the Sz eigenvalue of one particle with this spin, kept integral.
    pub fn sz_twice(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }
}

/// One spin-orbital, addressed by momentum mode and spin.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SpinOrbital {
    momentum_index: u8,
    spin: Spin,
}

impl SpinOrbital {
    /// Builds the orbital for `momentum_index` in 0..=3 with the given spin.
    ///
    /// Panics on an out-of-range mode; the lattice has exactly four.
    pub const fn new(momentum_index: usize, spin: Spin) -> Self {
        assert!(momentum_index < 4, "momentum mode must be 0..=3");
        SpinOrbital {
            momentum_index: momentum_index as u8,
            spin,
        }
    }

    /// Shorthand for an up-spin orbital.
    pub const fn up(momentum_index: usize) -> Self {
        Self::new(momentum_index, Spin::Up)
    }

    /// Shorthand for a down-spin orbital.
    pub const fn down(momentum_index: usize) -> Self {
        Self::new(momentum_index, Spin::Down)
    }

    /// Momentum mode, 0..=3.
    pub const fn momentum_index(self) -> usize {
        self.momentum_index as usize
    }

    /// Spin projection.
    pub const fn spin(self) -> Spin {
        self.spin
    }

    /// Bit position in a basis mask: mode for up spins, mode + 4 for down.
    pub const fn canonical_index(self) -> usize {
        let offset = match self.spin {
            Spin::Up => 0,
            Spin::Down => 4,
        };
        self.momentum_index as usize + offset
    }

    /// Inverse of [`canonical_index`](Self::canonical_index).
    pub const fn from_canonical(index: usize) -> Self {
        assert!(index < N_ORBITALS, "canonical index must be 0..=7");
        if index < 4 {
            Self::new(index, Spin::Up)
        } else {
            Self::new(index - 4, Spin::Down)
        }
    }
}

impl std::fmt::Display for SpinOrbital {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let arrow = match self.spin {
            Spin::Up => "u",
            Spin::Down => "d",
        };
        write!(f, "{}{}", self.momentum_index, arrow)
    }
}

/// Occupation bitmask over the eight spin-orbitals.
///
/// Ordering is by raw mask value, which fixes the sector basis order used
/// everywhere else in the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BasisState(u8);

impl BasisState {
    /// Wraps a raw mask. Every u8 is a valid Fock state.
    pub const fn from_mask(mask: u8) -> Self {
        BasisState(mask)
    }

    /// The empty state.
    pub const fn vacuum() -> Self {
        BasisState(0)
    }

    /// Builds a state from lists of occupied up and down modes.
    pub fn from_modes(up_modes: &[usize], down_modes: &[usize]) -> Self {
        let mut mask = 0u8;
        for &m in up_modes {
            mask |= 1 << SpinOrbital::up(m).canonical_index();
        }
        for &m in down_modes {
            mask |= 1 << SpinOrbital::down(m).canonical_index();
        }
        BasisState(mask)
    }

    /// Raw occupation mask.
    pub const fn mask(self) -> u8 {
        self.0
    }

    /// Whether `orbital` is occupied.
    pub const fn occupied(self, orbital: SpinOrbital) -> bool {
        self.0 >> orbital.canonical_index() & 1 == 1
    }

    /// Total particle number.
    pub const fn particle_count(self) -> u32 {
        self.0.count_ones()
    }

    /// Twice the total Sz: (up count) - (down count).
    pub const fn sz_twice(self) -> i32 {
        let up = (self.0 & 0x0f).count_ones() as i32;
        let down = (self.0 >> 4).count_ones() as i32;
        up - down
    }

    /// Sum of occupied momentum mode indices over both spins (not reduced
    /// modulo 4). Useful for checking momentum conservation in tests.
    pub fn momentum_total(self) -> u32 {
        (0..N_ORBITALS)
            .filter(|&b| self.0 >> b & 1 == 1)
            .map(|b| SpinOrbital::from_canonical(b).momentum_index() as u32)
            .sum()
    }
}

impl std::fmt::Display for BasisState {
    /// Prints occupied up modes, then a semicolon, then down modes,
    /// e.g. mask 147 renders as `|01;03>`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|")?;
        for m in 0..4 {
            if self.occupied(SpinOrbital::up(m)) {
                write!(f, "{m}")?;
            }
        }
        write!(f, ";")?;
        for m in 0..4 {
            if self.occupied(SpinOrbital::down(m)) {
                write!(f, "{m}")?;
            }
        }
        write!(f, ">")
    }
}

/// Fermionic sign for acting on `bit`: parity of occupied bits below it.
const fn parity_below(mask: u8, bit: usize) -> i32 {
    let below = mask & ((1u16 << bit) as u8).wrapping_sub(1);
    if below.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Applies a creation operator. Returns the new state and sign, or `None`
/// when the orbital is already occupied and the result vanishes.
pub fn apply_creation(state: BasisState, orbital: SpinOrbital) -> Option<(BasisState, i32)> {
    let bit = orbital.canonical_index();
    if state.0 >> bit & 1 == 1 {
        return None;
    }
    Some((BasisState(state.0 | 1 << bit), parity_below(state.0, bit)))
}

/// Applies an annihilation operator. Returns the new state and sign, or
/// `None` when the orbital is empty.
pub fn apply_annihilation(state: BasisState, orbital: SpinOrbital) -> Option<(BasisState, i32)> {
    let bit = orbital.canonical_index();
    if state.0 >> bit & 1 == 0 {
        return None;
    }
    Some((BasisState(state.0 & !(1 << bit)), parity_below(state.0, bit)))
}

/// Occupation eigenvalue of `orbital` in `state`: 0 or 1.
pub fn number_operator_value(state: BasisState, orbital: SpinOrbital) -> u32 {
    state.occupied(orbital) as u32
}

/// Ordered basis of one (N, 2Sz) sector, ascending by mask.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    states: Vec<BasisState>,
    lookup: Vec<Option<usize>>,
    n_particles: usize,
    sz_twice: i32,
}

/// Enumerates every mask with the requested particle number and twice-Sz,
/// in ascending mask order.
pub fn enumerate_sector(n_particles: usize, sz_twice: i32) -> SectorBasis {
    let mut states = Vec::new();
    let mut lookup = vec![None; 256];
    for mask in 0..=255u8 {
        let s = BasisState(mask);
        if s.particle_count() as usize == n_particles && s.sz_twice() == sz_twice {
            lookup[mask as usize] = Some(states.len());
            states.push(s);
        }
    }
    SectorBasis {
        states,
        lookup,
        n_particles,
        sz_twice,
    }
}

impl SectorBasis {
    /// The N = 4, Sz = 0 sector this crate mostly works in: 36 states.
    pub fn half_filling() -> Self {
        enumerate_sector(4, 0)
    }

    /// Number of basis states.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// True for an empty sector.
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// All states, in basis order.
    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    /// State at position `index`.
    pub fn state(&self, index: usize) -> BasisState {
        self.states[index]
    }

    /// Position of `state` in this basis, if it belongs to the sector.
    pub fn index_of(&self, state: BasisState) -> Option<usize> {
        self.lookup[state.mask() as usize]
    }

    /// Particle number of the sector.
    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    /// Twice the Sz of the sector.
    pub fn sz_twice(&self) -> i32 {
        self.sz_twice
    }
}

/// Complex amplitudes over a sector basis, stored in basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Array1<Complex64>,
}

impl StateVector {
    /// The zero vector of dimension `dim`.
    pub fn zeros(dim: usize) -> Self {
        StateVector {
            amplitudes: Array1::zeros(dim),
        }
    }

    /// Wraps an amplitude array.
    pub fn from_amplitudes(amplitudes: Array1<Complex64>) -> Self {
        StateVector { amplitudes }
    }

    /// Unit vector on one basis state.
    ///
    /// Panics when `state` is not in `basis`; callers pick states from the
    /// basis they pass in.
    pub fn basis_vector(basis: &SectorBasis, state: BasisState) -> Self {
        let idx = basis
            .index_of(state)
            .unwrap_or_else(|| panic!("state {state} not in sector basis"));
        let mut v = Self::zeros(basis.len());
        v.amplitudes[idx] = Complex64::new(1.0, 0.0);
        v
    }

    /// Dimension of the vector.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Amplitude at basis position `index`.
    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// Full amplitude array.
    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    /// Mutable amplitude array, for phase fixing and in-place updates.
    pub fn amplitudes_mut(&mut self) -> &mut Array1<Complex64> {
        &mut self.amplitudes
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Inner product `<self|other>`, conjugating `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Returns the vector scaled to unit norm.
    ///
    /// Panics on the zero vector.
    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        self.amplitudes.mapv_inplace(|a| a / n);
        self
    }
}
