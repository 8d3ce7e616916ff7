//! Projective photon-number measurement with post-selection, partial traces,
//! and figures of merit (fidelity, negativity, von Neumann entropy).
//!
//! Negativity is the entanglement measure of choice here because the atoms
//! are qutrits: it is basis-explicit and computable for any 3x3 bipartition,
//! unlike qubit-only concurrence.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{C64, CMat, HermitianEig};
use crate::dynamics::QuantumState;
use crate::state_space::{atom_pair_index, Space, StateBasis};

/// Eigenvalues in `[-EIG_CLIP, 0]` are numerical zero for entropy and
/// negativity purposes.
pub const EIG_CLIP: f64 = 1e-12;

/// One projective photon-count outcome with its post-selected atomic state.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub photons: u32,
    pub probability: f64,
    /// Renormalized post-measurement state of the two atoms on the canonical
    /// pair basis.
    pub conditional: QuantumState,
}

/// Project a cavity state onto photon-number eigenspaces.
///
/// Outcomes are returned in ascending photon count; outcomes with exactly
/// zero probability are omitted. Probabilities sum to 1 and each conditional
/// state is renormalized.
pub fn measure_photons(state: &QuantumState) -> Result<Vec<MeasurementOutcome>> {
    let space = match state.basis() {
        StateBasis::Cavity(space) => space,
        _ => {
            return Err(Error::InvalidSubsystem {
                subsystem: "photon mode",
                basis: "non-cavity state",
            })
        }
    };
    let max_photons = space.max_photons();
    let mut outcomes = Vec::new();
    for count in 0..=max_photons {
        let mut cond = vec![C64::new(0.0, 0.0); 9];
        let mut prob = 0.0;
        for (i, s) in space.states().iter().enumerate() {
            if s.photons == count {
                let amp = state.amps()[i];
                prob += amp.norm_sqr();
                cond[atom_pair_index(s.m1, s.m2)] += amp;
            }
        }
        if prob > 0.0 {
            let conditional = QuantumState::normalized(StateBasis::AtomPair, cond)?;
            outcomes.push(MeasurementOutcome { photons: count, probability: prob, conditional });
        }
    }
    Ok(outcomes)
}

/// Basis of a reduced density matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum DensityBasis {
    /// One atom, descending m.
    SingleAtom,
    /// Two atoms, canonical pair order.
    AtomPair,
    /// Photon mode, occupation 0..dim-1.
    Field { dim: usize },
}

impl DensityBasis {
    pub fn dim(&self) -> usize {
        match self {
            DensityBasis::SingleAtom => 3,
            DensityBasis::AtomPair => 9,
            DensityBasis::Field { dim } => *dim,
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix over a reduced basis.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub basis: DensityBasis,
    pub matrix: CMat,
}

impl DensityMatrix {
    pub fn new(basis: DensityBasis, matrix: CMat) -> Result<Self> {
        if matrix.dim() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: matrix.dim() });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::NormViolation { norm: tr.re });
        }
        if !matrix.is_hermitian(1e-12) {
            return Err(Error::NonHermitian { max_dev: matrix.hermitian_dev() });
        }
        Ok(DensityMatrix { basis, matrix })
    }

    /// Real eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        HermitianEig::new(&self.matrix)
            .expect("density matrix is Hermitian by construction")
            .eigenvalues()
            .to_vec()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }
}

/// Tensor factor to keep in a partial trace.
///
/// `Atom1`/`Atom2`/`Atoms`/`Field` address a single cavity (or bare atom
/// pair); `Atoms12` and `Atoms34` address the two-cavity flight arrangement
/// in which the first cavity holds atoms (1,3) and the second atoms (2,4).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Field,
    Atom1,
    Atom2,
    Atoms,
    Atoms12,
    Atoms34,
}

impl Subsystem {
    fn name(self) -> &'static str {
        match self {
            Subsystem::Field => "field",
            Subsystem::Atom1 => "atom 1",
            Subsystem::Atom2 => "atom 2",
            Subsystem::Atoms => "both atoms",
            Subsystem::Atoms12 => "atoms (1,2)",
            Subsystem::Atoms34 => "atoms (3,4)",
        }
    }
}

/// Accumulate `rho_keep` from pure-state amplitudes: `index` maps a basis
/// position to (kept index, traced configuration key).
fn trace_out<F>(amps: &[C64], keep_dim: usize, index: F) -> CMat
where
    F: Fn(usize) -> (usize, u64),
{
    let decoded: Vec<(usize, u64)> = (0..amps.len()).map(&index).collect();
    let mut rho = CMat::zeros(keep_dim);
    for (i, &(ki, ti)) in decoded.iter().enumerate() {
        if amps[i] == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, &(kj, tj)) in decoded.iter().enumerate() {
            if ti == tj {
                let v = amps[i] * amps[j].conj();
                rho[(ki, kj)] += v;
            }
        }
    }
    rho
}

fn two_cavity_key(space_b: &Space) -> impl Fn(usize) -> (usize, usize) + '_ {
    let dim_b = space_b.dim();
    move |i| (i / dim_b, i % dim_b)
}

/// Partial trace of a pure state onto the selected subsystem.
pub fn reduced_density(state: &QuantumState, keep: Subsystem) -> Result<DensityMatrix> {
    let amps = state.amps();
    match state.basis() {
        StateBasis::Cavity(space) => {
            let states = space.states();
            let photon_dim = space.max_photons() as u64 + 1;
            match keep {
                Subsystem::Field => {
                    let dim = photon_dim as usize;
                    let rho = trace_out(amps, dim, |i| {
                        let s = &states[i];
                        (s.photons as usize, (s.m1.index() * 3 + s.m2.index()) as u64)
                    });
                    DensityMatrix::new(DensityBasis::Field { dim }, rho)
                }
                Subsystem::Atom1 => {
                    let rho = trace_out(amps, 3, |i| {
                        let s = &states[i];
                        (s.m1.index(), s.photons as u64 * 3 + s.m2.index() as u64)
                    });
                    DensityMatrix::new(DensityBasis::SingleAtom, rho)
                }
                Subsystem::Atom2 => {
                    let rho = trace_out(amps, 3, |i| {
                        let s = &states[i];
                        (s.m2.index(), s.photons as u64 * 3 + s.m1.index() as u64)
                    });
                    DensityMatrix::new(DensityBasis::SingleAtom, rho)
                }
                Subsystem::Atoms => {
                    let rho = trace_out(amps, 9, |i| {
                        let s = &states[i];
                        (atom_pair_index(s.m1, s.m2), s.photons as u64)
                    });
                    DensityMatrix::new(DensityBasis::AtomPair, rho)
                }
                _ => Err(Error::InvalidSubsystem { subsystem: keep.name(), basis: "cavity" }),
            }
        }
        StateBasis::AtomPair => {
            let pair = crate::state_space::atom_pair_basis();
            match keep {
                Subsystem::Atom1 => {
                    let rho = trace_out(amps, 3, |i| (pair[i].0.index(), pair[i].1.index() as u64));
                    DensityMatrix::new(DensityBasis::SingleAtom, rho)
                }
                Subsystem::Atom2 => {
                    let rho = trace_out(amps, 3, |i| (pair[i].1.index(), pair[i].0.index() as u64));
                    DensityMatrix::new(DensityBasis::SingleAtom, rho)
                }
                Subsystem::Atoms => {
                    // Nothing traced out: the pure projector itself.
                    let rho = trace_out(amps, 9, |i| (i, 0));
                    DensityMatrix::new(DensityBasis::AtomPair, rho)
                }
                _ => {
                    Err(Error::InvalidSubsystem { subsystem: keep.name(), basis: "atom pair" })
                }
            }
        }
        StateBasis::TwoCavity(space_a, space_b) => {
            let split = two_cavity_key(space_b);
            let states_a = space_a.states();
            let states_b = space_b.states();
            let photon_dim =
                (space_a.max_photons().max(space_b.max_photons())) as u64 + 1;
            match keep {
                Subsystem::Atoms12 | Subsystem::Atoms34 => {
                    let rho = trace_out(amps, 9, |i| {
                        let (ia, ib) = split(i);
                        let (sa, sb) = (&states_a[ia], &states_b[ib]);
                        // Kept pair: first atom of each cavity for (1,2),
                        // second atom of each for (3,4).
                        let (keep_a, keep_b, tr_a, tr_b) = if keep == Subsystem::Atoms12 {
                            (sa.m1, sb.m1, sa.m2, sb.m2)
                        } else {
                            (sa.m2, sb.m2, sa.m1, sb.m1)
                        };
                        let key = ((sa.photons as u64 * photon_dim + sb.photons as u64) * 3
                            + tr_a.index() as u64)
                            * 3
                            + tr_b.index() as u64;
                        (atom_pair_index(keep_a, keep_b), key)
                    });
                    DensityMatrix::new(DensityBasis::AtomPair, rho)
                }
                _ => {
                    Err(Error::InvalidSubsystem { subsystem: keep.name(), basis: "two cavities" })
                }
            }
        }
    }
}

/// Phase-invariant overlap `|<a|b>|^2` of two pure states on the same basis,
/// clamped against roundoff excess above 1.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// `<psi| rho |psi>`, the fidelity of a mixed state against a pure target.
pub fn fidelity_to_pure(rho: &DensityMatrix, psi: &QuantumState) -> Result<f64> {
    let compatible = matches!(
        (&rho.basis, psi.basis()),
        (DensityBasis::AtomPair, StateBasis::AtomPair)
    );
    if !compatible {
        return Err(Error::BasisMismatch);
    }
    let rv = rho.matrix.matvec(psi.amps());
    let f: C64 = psi.amps().iter().zip(rv.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok(f.re.clamp(0.0, 1.0))
}

/// Negativity across the atom-atom bipartition: the absolute sum of negative
/// eigenvalues of the partial transpose over the second atom. Zero for
/// separable states; 1/2 for a two-qubit Bell state embedded in the qutrit
/// pair.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    if rho.basis != DensityBasis::AtomPair {
        return Err(Error::InvalidSubsystem {
            subsystem: "atom-atom bipartition",
            basis: "non-pair density matrix",
        });
    }
    let mut pt = CMat::zeros(9);
    for a1 in 0..3 {
        for b1 in 0..3 {
            for a2 in 0..3 {
                for b2 in 0..3 {
                    pt[(a1 * 3 + b2, a2 * 3 + b1)] = rho.matrix[(a1 * 3 + b1, a2 * 3 + b2)];
                }
            }
        }
    }
    let eig = HermitianEig::new(&pt)?;
    Ok(eig
        .eigenvalues()
        .iter()
        .filter(|&&l| l < -EIG_CLIP)
        .map(|&l| -l)
        .sum())
}

/// Von Neumann entropy in nats, with `0 ln 0 := 0`.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .iter()
        .filter(|&&l| l > EIG_CLIP)
        .map(|&l| -l * l.ln())
        .sum()
}
