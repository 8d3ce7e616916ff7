//! Atomic and field operators, the full Hamiltonian on the truncated product
//! space, and its time-independent interaction blocks on invariant sectors.
//!
//! With hbar = 1 the Hamiltonian is
//!
//! ```text
//! H = omega a^dag a + beta (l1z + l2z)
//!     + g [ (l1+ + l2+) a + (l1- + l2-) a^dag ] + alpha l1z l2z
//! ```
//!
//! where `l+ = |+1><0| + |0><-1|` ladders each atom up while absorbing a
//! photon. `a^dag a + l1z + l2z` commutes with H, so H is block diagonal
//! over the sectors of `state_space`. At resonance (omega = beta) the
//! interaction-picture coupling is time independent and its sector blocks
//! are built directly by [`interaction_block`].

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{C64, CMat};
use crate::state_space::{BasisState, Sector, Space};

/// Physical constants of one run (energy units, hbar = 1).
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Atom-field coupling strength; must be positive.
    pub g: f64,
    /// Dipole-dipole coefficient on `l1z l2z`.
    pub alpha: f64,
    /// Zeeman splitting per unit m.
    pub beta: f64,
    /// Cavity mode frequency.
    pub omega: f64,
}

/// Relative tolerance for the resonance test `omega == beta`.
pub const RESONANCE_TOL: f64 = 1e-12;

impl PhysicalParams {
    pub fn new(g: f64, alpha: f64, beta: f64, omega: f64) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidArgument { what: "g must be finite and > 0" });
        }
        if !(alpha.is_finite() && beta.is_finite() && omega.is_finite()) {
            return Err(Error::InvalidArgument { what: "alpha, beta, omega must be finite" });
        }
        Ok(PhysicalParams { g, alpha, beta, omega })
    }

    /// Unit coupling at resonance with the given frequency and no
    /// dipole-dipole term.
    pub fn resonant(g: f64, omega: f64) -> Result<Self> {
        Self::new(g, 0.0, omega, omega)
    }

    pub fn is_resonant(&self) -> bool {
        let scale = self.omega.abs().max(self.beta.abs()).max(1.0);
        (self.omega - self.beta).abs() <= RESONANCE_TOL * scale
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(g, self.alpha, self.beta, self.omega)
    }
}

/// Dense operator bound to the ordered basis it is written in.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub space: Space,
    pub matrix: CMat,
}

impl OperatorMatrix {
    pub fn new(space: Space, matrix: CMat) -> Self {
        assert_eq!(space.dim(), matrix.dim(), "operator does not match its basis");
        OperatorMatrix { space, matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Single-atom raising operator `l+ = |+1><0| + |0><-1|` on the descending
/// three-level basis (+1, 0, -1).
pub fn ladder_plus() -> CMat {
    let mut m = CMat::zeros(3);
    m[(0, 1)] = real(1.0);
    m[(1, 2)] = real(1.0);
    m
}

/// Single-atom lowering operator, the adjoint of [`ladder_plus`].
pub fn ladder_minus() -> CMat {
    ladder_plus().adjoint()
}

/// Single-atom `lz = diag(+1, 0, -1)`.
pub fn level_z() -> CMat {
    let mut m = CMat::zeros(3);
    m[(0, 0)] = real(1.0);
    m[(2, 2)] = real(-1.0);
    m
}

/// Lift a single-atom operator onto a product basis, acting on atom 1 or 2
/// and leaving the photon mode and the other atom untouched.
pub fn lift_atom_op(op3: &CMat, atom: usize, basis: &[BasisState]) -> Result<CMat> {
    assert_eq!(op3.dim(), 3, "lift_atom_op: single-atom operator must be 3x3");
    if atom != 1 && atom != 2 {
        return Err(Error::InvalidAtomIndex { index: atom });
    }
    let n = basis.len();
    let mut out = CMat::zeros(n);
    for (j, s) in basis.iter().enumerate() {
        for (i, t) in basis.iter().enumerate() {
            let matches = if atom == 1 {
                t.photons == s.photons && t.m2 == s.m2
            } else {
                t.photons == s.photons && t.m1 == s.m1
            };
            if matches {
                let (row, col) = if atom == 1 {
                    (t.m1.index(), s.m1.index())
                } else {
                    (t.m2.index(), s.m2.index())
                };
                out[(i, j)] = op3[(row, col)];
            }
        }
    }
    Ok(out)
}

/// Raising operator of one atom lifted onto `space`.
pub fn ladder_plus_lifted(atom: usize, space: &Space) -> Result<OperatorMatrix> {
    Ok(OperatorMatrix::new(space.clone(), lift_atom_op(&ladder_plus(), atom, space.states())?))
}

/// Lowering operator of one atom lifted onto `space`.
pub fn ladder_minus_lifted(atom: usize, space: &Space) -> Result<OperatorMatrix> {
    Ok(OperatorMatrix::new(space.clone(), lift_atom_op(&ladder_minus(), atom, space.states())?))
}

/// Photon annihilation on a product basis: `<n-1| a |n> = sqrt(n)` with the
/// atomic labels untouched. Entries that would leave the basis are dropped,
/// a hard truncation at the photon cap.
pub fn annihilation(basis: &[BasisState]) -> CMat {
    let n = basis.len();
    let mut out = CMat::zeros(n);
    for (j, s) in basis.iter().enumerate() {
        if s.photons == 0 {
            continue;
        }
        let target = BasisState::new(s.photons - 1, s.m1, s.m2);
        if let Some(i) = basis.iter().position(|t| *t == target) {
            out[(i, j)] = real((s.photons as f64).sqrt());
        }
    }
    out
}

/// Diagonal photon-number operator `a^dag a`.
pub fn photon_number(basis: &[BasisState]) -> CMat {
    let n = basis.len();
    let mut out = CMat::zeros(n);
    for (i, s) in basis.iter().enumerate() {
        out[(i, i)] = real(s.photons as f64);
    }
    out
}

/// Diagonal conserved-number operator `a^dag a + l1z + l2z`.
pub fn total_number(basis: &[BasisState]) -> CMat {
    let n = basis.len();
    let mut out = CMat::zeros(n);
    for (i, s) in basis.iter().enumerate() {
        out[(i, i)] = real(s.conserved_number() as f64);
    }
    out
}

/// Full Hamiltonian on the photon-truncated product space.
///
/// Requires `photon_cap >= 2` so that one emission from the sector-top state
/// stays representable. Hermitian by construction; the truncation drops the
/// emission matrix elements that would exceed the cap, which is exact for
/// any state confined to sectors with `N <= photon_cap - 2`.
pub fn hamiltonian_full(params: &PhysicalParams, photon_cap: u32) -> Result<OperatorMatrix> {
    hamiltonian_with_coupling(params, photon_cap, &ladder_plus())
}

/// Full Hamiltonian with a caller-supplied single-atom raising operator in
/// place of the ladder `l+`. This is the hook for exploring field
/// orientations other than the quantization axis; note that an arbitrary
/// coupling operator need not commute with the excitation number, so sector
/// structure is not guaranteed here.
pub fn hamiltonian_with_coupling(
    params: &PhysicalParams,
    photon_cap: u32,
    raise3: &CMat,
) -> Result<OperatorMatrix> {
    if photon_cap < 2 {
        return Err(Error::PhotonCapTooSmall { cap: photon_cap });
    }
    let space = Space::full(photon_cap);
    let basis = space.states();
    let lower3 = raise3.adjoint();

    let a = annihilation(basis);
    let adag = a.adjoint();
    let r1 = lift_atom_op(raise3, 1, basis)?;
    let r2 = lift_atom_op(raise3, 2, basis)?;
    let low1 = lift_atom_op(&lower3, 1, basis)?;
    let low2 = lift_atom_op(&lower3, 2, basis)?;
    let l1z = lift_atom_op(&level_z(), 1, basis)?;
    let l2z = lift_atom_op(&level_z(), 2, basis)?;

    let coupling = r1.add(&r2).mul(&a).add(&low1.add(&low2).mul(&adag));
    let h = photon_number(basis)
        .scale_re(params.omega)
        .add(&l1z.add(&l2z).scale_re(params.beta))
        .add(&coupling.scale_re(params.g))
        .add(&l1z.mul(&l2z).scale_re(params.alpha));
    Ok(OperatorMatrix::new(space, h))
}

/// Transitions of `(l1+ + l2+) a` out of one sector state: each result is
/// `(target, sqrt(photons))` with the photon count lowered and one atom
/// raised a rung.
fn raising_transitions(s: &BasisState) -> Vec<(BasisState, f64)> {
    let mut out = Vec::new();
    if s.photons == 0 {
        return out;
    }
    let amp = (s.photons as f64).sqrt();
    if let Some(up) = s.m1.raised() {
        out.push((BasisState::new(s.photons - 1, up, s.m2), amp));
    }
    if let Some(up) = s.m2.raised() {
        out.push((BasisState::new(s.photons - 1, s.m1, up), amp));
    }
    out
}

/// Interaction-picture block `g[(l1+ + l2+) a + h.c.] + alpha l1z l2z` on the
/// sector with conserved number `n`.
///
/// Valid only at exact resonance, where the interaction-picture phase
/// factors are constant; off-resonant parameters are rejected. For `n >= 2`
/// the block is the full 9x9 pattern; smaller sectors are its truncated
/// principal blocks.
pub fn interaction_block(n: i32, params: &PhysicalParams) -> Result<OperatorMatrix> {
    if !params.is_resonant() {
        return Err(Error::OffResonant { omega: params.omega, beta: params.beta });
    }
    let sector = Sector::new(n)?;
    let dim = sector.dim();
    let mut m = CMat::zeros(dim);
    for (j, s) in sector.states().iter().enumerate() {
        m[(j, j)] = real(params.alpha * (s.m1.m() * s.m2.m()) as f64);
        for (target, amp) in raising_transitions(s) {
            let i = sector
                .index_of(&target)
                .expect("raising transition left its own sector");
            let g_amp = real(params.g * amp);
            m[(i, j)] += g_amp;
            m[(j, i)] += g_amp;
        }
    }
    Ok(OperatorMatrix::new(Space::Sector(sector), m))
}

/// Full Hamiltonian restricted to one sector, extracted from
/// [`hamiltonian_full`] at a cap wide enough to hold the sector exactly.
/// Valid on or off resonance.
pub fn hamiltonian_sector(n: i32, params: &PhysicalParams) -> Result<OperatorMatrix> {
    let sector = Sector::new(n)?;
    let cap = (n + 2).max(2) as u32;
    let full = hamiltonian_full(params, cap)?;
    let idx: Vec<usize> = sector
        .states()
        .iter()
        .map(|s| full.space.index_of(s).expect("sector state missing from full basis"))
        .collect();
    let m = CMat::from_fn(sector.dim(), |i, j| full.matrix[(idx[i], idx[j])]);
    Ok(OperatorMatrix::new(Space::Sector(sector), m))
}
