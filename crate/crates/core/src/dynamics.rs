//! Exact time evolution.
//!
//! The workhorse is [`propagator_numeric`]: `exp(-i H t)` through the real
//! eigendecomposition of a Hermitian block. On top of that sit the two
//! tabulated closed-form propagators for the sectors that admit compact
//! expressions (conserved number 0 and -1). The closed forms are references;
//! where they and the numeric route disagree beyond tolerance the numeric
//! route is ground truth.
//!
//! [`evolve`] returns full Schroedinger-picture states: at resonance the free
//! part contributes a global phase `exp(-i omega N t)` per sector on top of
//! the interaction-picture block propagator; off resonance it falls back to
//! numeric exponentiation of the full Hamiltonian (restricted to the state's
//! sector, which is exact because the conserved number never leaks).

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{C64, CMat, HermitianEig};
use crate::operators::{
    hamiltonian_full, hamiltonian_sector, interaction_block, OperatorMatrix, PhysicalParams,
};
use crate::state_space::{BasisState, Space, StateBasis};

/// Accepted deviation of a state vector's norm from 1.
pub const NORM_TOL: f64 = 1e-12;

/// Complex amplitude vector over an ordered basis, unit norm.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    basis: StateBasis,
    amps: Vec<C64>,
}

impl QuantumState {
    /// Wrap amplitudes that are already normalized (within [`NORM_TOL`]).
    pub fn new(basis: StateBasis, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: amps.len() });
        }
        let norm = vec_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NormViolation { norm });
        }
        Ok(QuantumState { basis, amps })
    }

    /// Normalize and wrap; fails on an (exactly) zero vector.
    pub fn normalized(basis: StateBasis, mut amps: Vec<C64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: amps.len() });
        }
        let norm = vec_norm(&amps);
        if norm == 0.0 {
            return Err(Error::NormViolation { norm });
        }
        for a in amps.iter_mut() {
            *a /= norm;
        }
        Ok(QuantumState { basis, amps })
    }

    /// Unit amplitude on component `index`.
    pub fn basis_vector(basis: StateBasis, index: usize) -> Result<Self> {
        if index >= basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: index });
        }
        let mut amps = alloc::vec![C64::new(0.0, 0.0); basis.dim()];
        amps[index] = C64::new(1.0, 0.0);
        Ok(QuantumState { basis, amps })
    }

    /// Product state `|photons>(m1,m2)` on a cavity space.
    pub fn cavity_product(space: Space, state: &BasisState) -> Result<Self> {
        let index = space.index_of(state).ok_or(Error::BasisMismatch)?;
        Self::basis_vector(StateBasis::Cavity(space), index)
    }

    pub fn basis(&self) -> &StateBasis {
        &self.basis
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amps)
    }

    /// `<self|other>`; the bases must be identical.
    pub fn inner(&self, other: &QuantumState) -> Result<C64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn component_label(&self, i: usize) -> String {
        self.basis.component_label(i)
    }
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Which frame a propagator is written in.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Picture {
    Schrodinger,
    Interaction,
}

/// Unitary evolution matrix bound to a basis and an evolution time.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub space: Space,
    pub matrix: CMat,
    pub time: f64,
    pub picture: Picture,
}

impl Propagator {
    pub fn apply(&self, state: &QuantumState) -> Result<QuantumState> {
        match state.basis() {
            StateBasis::Cavity(space) if *space == self.space => {}
            _ => return Err(Error::BasisMismatch),
        }
        QuantumState::new(state.basis().clone(), self.matrix.matvec(state.amps()))
    }
}

/// `exp(-i block t)` by Hermitian eigendecomposition; interaction picture.
/// Rejects non-Hermitian input.
pub fn propagator_numeric(block: &OperatorMatrix, t: f64) -> Result<Propagator> {
    let eig = HermitianEig::new(&block.matrix)?;
    Ok(Propagator {
        space: block.space.clone(),
        matrix: eig.unitary_exp(t),
        time: t,
        picture: Picture::Interaction,
    })
}

/// Tabulated closed-form propagator for the six-dimensional zero-excitation
/// sector at resonance with the dipole-dipole term dropped. The free part
/// contributes no phase in this sector, so the same matrix serves in both
/// pictures.
pub fn propagator_closed_n0(t: f64, g: f64) -> Propagator {
    let r7 = 7.0_f64.sqrt();
    let c7 = (r7 * g * t).cos();
    let s7 = (r7 * g * t).sin();
    let c1 = (g * t).cos();
    let s1 = (g * t).sin();
    let r2 = SQRT_2;
    let i = C64::new(0.0, 1.0);

    let edge = -i * (2.0f64 / 7.0).sqrt() * s7; // corner coupling
    let drop = r2 / 7.0 * (c7 - 1.0); // top-to-bottom block, outer
    let drop2 = 2.0 * r2 / 7.0 * (c7 - 1.0); // top-to-bottom block, center
    let sum_s = -i * r7 / 14.0 * (r7 * s1 + s7);
    let diff_s = i * r7 / 14.0 * (r7 * s1 - s7);
    let mid_s = -i * s7 / r7;
    let c_plus = C64::new((c1 + c7) / 2.0, 0.0);
    let c_minus = C64::new((c7 - c1) / 2.0, 0.0);
    let d_plus = C64::new((6.0 + 7.0 * c1 + c7) / 14.0, 0.0);
    let d_minus = C64::new((6.0 - 7.0 * c1 + c7) / 14.0, 0.0);
    let d_off = C64::new((c7 - 1.0) / 7.0, 0.0);
    let d_mid = C64::new((5.0 + 2.0 * c7) / 7.0, 0.0);
    let top = C64::new((3.0 + 4.0 * c7) / 7.0, 0.0);
    let dr = C64::new(drop, 0.0);
    let dr2 = C64::new(drop2, 0.0);

    let rows: [[C64; 6]; 6] = [
        [top, edge, edge, dr, dr2, dr],
        [edge, c_plus, c_minus, sum_s, mid_s, diff_s],
        [edge, c_minus, c_plus, diff_s, mid_s, sum_s],
        [dr, sum_s, diff_s, d_plus, d_off, d_minus],
        [dr2, mid_s, mid_s, d_off, d_mid, d_off],
        [dr, diff_s, sum_s, d_minus, d_off, d_plus],
    ];
    let matrix = CMat::from_fn(6, |r, c| rows[r][c]);
    Propagator {
        space: Space::sector(0).expect("sector 0 exists"),
        matrix,
        time: t,
        picture: Picture::Schrodinger,
    }
}

/// Tabulated closed-form propagator for the three-dimensional sector with
/// conserved number -1 at resonance, dipole-dipole term dropped. The
/// `exp(i omega t)` prefactor is the Schroedinger-picture free phase of this
/// sector.
pub fn propagator_closed_nm1(t: f64, params: &PhysicalParams) -> Propagator {
    let g = params.g;
    let c = (SQRT_2 * g * t).cos();
    let s = (SQRT_2 * g * t).sin();
    let i = C64::new(0.0, 1.0);
    let off = -i * s / SQRT_2;
    let p = C64::new((1.0 + c) / 2.0, 0.0);
    let m = C64::new((c - 1.0) / 2.0, 0.0);
    let cc = C64::new(c, 0.0);
    let rows: [[C64; 3]; 3] = [[cc, off, off], [off, p, m], [off, m, p]];
    let phase = C64::from_polar(1.0, params.omega * t);
    let matrix = CMat::from_fn(3, |r, c_| rows[r][c_] * phase);
    Propagator {
        space: Space::sector(-1).expect("sector -1 exists"),
        matrix,
        time: t,
        picture: Picture::Schrodinger,
    }
}

/// Schroedinger-picture evolution of a cavity state for time `t`.
///
/// Sector states at resonance use the interaction block plus the free phase
/// `exp(-i omega N t)`; anything else is evolved by numerically
/// exponentiating the full (or sector-restricted full) Hamiltonian.
pub fn evolve(state: &QuantumState, t: f64, params: &PhysicalParams) -> Result<QuantumState> {
    let norm = state.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NormViolation { norm });
    }
    let space = match state.basis() {
        StateBasis::Cavity(space) => space.clone(),
        _ => return Err(Error::BasisMismatch),
    };
    match &space {
        Space::Sector(sector) => {
            let n = sector.conserved_n();
            if params.is_resonant() {
                let block = interaction_block(n, params)?;
                let u = propagator_numeric(&block, t)?;
                let phase = C64::from_polar(1.0, -params.omega * n as f64 * t);
                let amps: Vec<C64> =
                    u.matrix.matvec(state.amps()).into_iter().map(|a| a * phase).collect();
                QuantumState::new(state.basis().clone(), amps)
            } else {
                let h = hamiltonian_sector(n, params)?;
                let u = propagator_numeric(&h, t)?;
                QuantumState::new(state.basis().clone(), u.matrix.matvec(state.amps()))
            }
        }
        Space::Full { photon_cap, .. } => {
            let h = hamiltonian_full(params, *photon_cap)?;
            let u = propagator_numeric(&h, t)?;
            QuantumState::new(state.basis().clone(), u.matrix.matvec(state.amps()))
        }
    }
}
