//! Product basis enumeration and invariant sectors.
//!
//! Basis states are `|photons> (x) |m1> (x) |m2>` with each atom restricted
//! to the three magnetic sublevels m = -1, 0, +1. The coupling conserves
//! `N = photons + m1 + m2`, which partitions the product space into sectors
//! of dimension at most 9. Sector bases follow a fixed listing (descending
//! photon number, then descending m1) so that operator matrices are
//! reproducible entry for entry.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// One magnetic sublevel of the three-rung ladder.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum AtomLevel {
    PlusOne,
    Zero,
    MinusOne,
}

impl AtomLevel {
    /// All levels in listing order (descending m).
    pub const DESCENDING: [AtomLevel; 3] = [AtomLevel::PlusOne, AtomLevel::Zero, AtomLevel::MinusOne];

    /// Magnetic quantum number.
    pub fn m(self) -> i32 {
        match self {
            AtomLevel::PlusOne => 1,
            AtomLevel::Zero => 0,
            AtomLevel::MinusOne => -1,
        }
    }

    pub fn from_m(m: i32) -> Option<Self> {
        match m {
            1 => Some(AtomLevel::PlusOne),
            0 => Some(AtomLevel::Zero),
            -1 => Some(AtomLevel::MinusOne),
            _ => None,
        }
    }

    /// Position in the descending listing: +1 -> 0, 0 -> 1, -1 -> 2.
    pub fn index(self) -> usize {
        match self {
            AtomLevel::PlusOne => 0,
            AtomLevel::Zero => 1,
            AtomLevel::MinusOne => 2,
        }
    }

    /// One rung up, if any.
    pub fn raised(self) -> Option<Self> {
        match self {
            AtomLevel::MinusOne => Some(AtomLevel::Zero),
            AtomLevel::Zero => Some(AtomLevel::PlusOne),
            AtomLevel::PlusOne => None,
        }
    }

    /// One rung down, if any.
    pub fn lowered(self) -> Option<Self> {
        match self {
            AtomLevel::PlusOne => Some(AtomLevel::Zero),
            AtomLevel::Zero => Some(AtomLevel::MinusOne),
            AtomLevel::MinusOne => None,
        }
    }
}

impl fmt::Display for AtomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomLevel::PlusOne => write!(f, "+1"),
            AtomLevel::Zero => write!(f, "0"),
            AtomLevel::MinusOne => write!(f, "-1"),
        }
    }
}

/// One product state `|photons>(m1,m2)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub photons: u32,
    pub m1: AtomLevel,
    pub m2: AtomLevel,
}

impl BasisState {
    pub fn new(photons: u32, m1: AtomLevel, m2: AtomLevel) -> Self {
        BasisState { photons, m1, m2 }
    }

    /// The conserved excitation number `photons + m1 + m2`.
    pub fn conserved_number(&self) -> i32 {
        self.photons as i32 + self.m1.m() + self.m2.m()
    }

    /// Number of atoms above the bottom rung; the phenomenological damping
    /// model decays each component at this multiplicity.
    pub fn excited_atoms(&self) -> u32 {
        (self.m1 != AtomLevel::MinusOne) as u32 + (self.m2 != AtomLevel::MinusOne) as u32
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>({},{})", self.photons, self.m1, self.m2)
    }
}

/// Free-function form of [`BasisState::conserved_number`].
pub fn conserved_number(state: &BasisState) -> i32 {
    state.conserved_number()
}

/// Atomic-pair template in listing order; photon count is `N - m1 - m2`.
/// Rows with negative photon count are dropped, which yields the dimension
/// table {N >= 2: 9, 1: 8, 0: 6, -1: 3, -2: 1}.
const SECTOR_TEMPLATE: [(AtomLevel, AtomLevel); 9] = [
    (AtomLevel::MinusOne, AtomLevel::MinusOne),
    (AtomLevel::Zero, AtomLevel::MinusOne),
    (AtomLevel::MinusOne, AtomLevel::Zero),
    (AtomLevel::PlusOne, AtomLevel::MinusOne),
    (AtomLevel::Zero, AtomLevel::Zero),
    (AtomLevel::MinusOne, AtomLevel::PlusOne),
    (AtomLevel::PlusOne, AtomLevel::Zero),
    (AtomLevel::Zero, AtomLevel::PlusOne),
    (AtomLevel::PlusOne, AtomLevel::PlusOne),
];

/// Ordered basis of one invariant sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    conserved_n: i32,
    states: Vec<BasisState>,
}

impl Sector {
    /// Enumerate the basis of the sector with conserved number `n`.
    ///
    /// Fails for `n < -2`: no product state with non-negative photon count
    /// reaches below the two-atom ladder bottom.
    pub fn new(n: i32) -> Result<Self> {
        if n < -2 {
            return Err(Error::EmptySector { conserved_n: n });
        }
        let states: Vec<BasisState> = SECTOR_TEMPLATE
            .iter()
            .filter_map(|&(m1, m2)| {
                let photons = n as i64 - m1.m() as i64 - m2.m() as i64;
                (photons >= 0).then(|| BasisState::new(photons as u32, m1, m2))
            })
            .collect();
        Ok(Sector { conserved_n: n, states })
    }

    pub fn conserved_n(&self) -> i32 {
        self.conserved_n
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, state: &BasisState) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }
}

/// Free-function form of [`Sector::new`].
pub fn sector_basis(n: i32) -> Result<Sector> {
    Sector::new(n)
}

/// All `9 * (photon_cap + 1)` product states, photon-major descending, then
/// descending m1, then descending m2. The order is fixed so matrices built
/// over the full space are reproducible bit for bit.
pub fn full_basis(photon_cap: u32) -> Vec<BasisState> {
    let mut states = Vec::with_capacity(9 * (photon_cap as usize + 1));
    for photons in (0..=photon_cap).rev() {
        for m1 in AtomLevel::DESCENDING {
            for m2 in AtomLevel::DESCENDING {
                states.push(BasisState::new(photons, m1, m2));
            }
        }
    }
    states
}

/// An ordered basis an operator or state can live on: a single invariant
/// sector, or the photon-truncated full product space.
#[derive(Clone, Debug)]
pub enum Space {
    Sector(Sector),
    Full { photon_cap: u32, states: Vec<BasisState> },
}

impl Space {
    pub fn sector(n: i32) -> Result<Self> {
        Ok(Space::Sector(Sector::new(n)?))
    }

    pub fn full(photon_cap: u32) -> Self {
        Space::Full { photon_cap, states: full_basis(photon_cap) }
    }

    pub fn states(&self) -> &[BasisState] {
        match self {
            Space::Sector(s) => s.states(),
            Space::Full { states, .. } => states,
        }
    }

    pub fn dim(&self) -> usize {
        self.states().len()
    }

    pub fn index_of(&self, state: &BasisState) -> Option<usize> {
        self.states().iter().position(|s| s == state)
    }

    /// Largest photon occupation present.
    pub fn max_photons(&self) -> u32 {
        self.states().iter().map(|s| s.photons).max().unwrap_or(0)
    }

    pub fn label(&self) -> String {
        use alloc::format;
        match self {
            Space::Sector(s) => format!("sector({})", s.conserved_n()),
            Space::Full { photon_cap, .. } => format!("full(cap={photon_cap})"),
        }
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Space::Sector(a), Space::Sector(b)) => a.conserved_n() == b.conserved_n(),
            (Space::Full { photon_cap: a, .. }, Space::Full { photon_cap: b, .. }) => a == b,
            _ => false,
        }
    }
}

/// Canonical two-atom basis (descending m1, then descending m2); conditional
/// states after a photon measurement and reduced density matrices live here.
pub fn atom_pair_basis() -> [(AtomLevel, AtomLevel); 9] {
    let mut out = [(AtomLevel::PlusOne, AtomLevel::PlusOne); 9];
    let mut k = 0;
    for m1 in AtomLevel::DESCENDING {
        for m2 in AtomLevel::DESCENDING {
            out[k] = (m1, m2);
            k += 1;
        }
    }
    out
}

/// Index of `(m1, m2)` in [`atom_pair_basis`].
pub fn atom_pair_index(m1: AtomLevel, m2: AtomLevel) -> usize {
    m1.index() * 3 + m2.index()
}

/// The ordered basis a [`crate::dynamics::QuantumState`] is expressed on.
#[derive(Clone, Debug, PartialEq)]
pub enum StateBasis {
    /// Photon mode and two atoms of one cavity.
    Cavity(Space),
    /// Two atoms alone (9-dimensional canonical order).
    AtomPair,
    /// Two independent cavities; the joint basis is the tensor product with
    /// the first cavity's index varying slowest. By the flight arrangement
    /// of the transfer protocol, the first cavity holds atoms (1,3) and the
    /// second holds atoms (2,4).
    TwoCavity(Space, Space),
}

impl StateBasis {
    pub fn dim(&self) -> usize {
        match self {
            StateBasis::Cavity(space) => space.dim(),
            StateBasis::AtomPair => 9,
            StateBasis::TwoCavity(a, b) => a.dim() * b.dim(),
        }
    }

    /// Human-readable label of component `i`.
    pub fn component_label(&self, i: usize) -> String {
        use alloc::format;
        match self {
            StateBasis::Cavity(space) => format!("{}", space.states()[i]),
            StateBasis::AtomPair => {
                let (m1, m2) = atom_pair_basis()[i];
                format!("({m1},{m2})")
            }
            StateBasis::TwoCavity(a, b) => {
                let (ia, ib) = (i / b.dim(), i % b.dim());
                format!("{}x{}", a.states()[ia], b.states()[ib])
            }
        }
    }

    pub fn label(&self) -> String {
        use alloc::format;
        match self {
            StateBasis::Cavity(space) => space.label(),
            StateBasis::AtomPair => String::from("atom_pair"),
            StateBasis::TwoCavity(a, b) => format!("two_cavity({},{})", a.label(), b.label()),
        }
    }
}
