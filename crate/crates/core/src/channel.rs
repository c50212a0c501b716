//! Preparation of the uniform Pauli mixture applied to α copies,
//! `E(ψ^{⊗α}) = d⁻² Σ_j (P_j ψ P_j)^{⊗α}`, whose purity is `A_α(ψ)/d`.
//!
//! Register layout for the coherent route (most significant first):
//! `A ⊗ B_1 ⊗ … ⊗ B_α`. With `n` qubits per copy, copy `B_i` (1-based) holds
//! qubits `(α-i)n .. (α-i+1)n` and the `2n` ancilla qubits sit on top at
//! `αn .. (α+2)n`. The ancilla value is the canonical Pauli index.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math::c;
use crate::pauli::{PauliIndex, PauliString};
use crate::state::{
    apply_pauli_power, controlled_pauli_power, hadamard_layer, tensor_power, DensityMatrix,
    StateVector, MAX_DENSITY_DIM, MAX_STATE_QUBITS,
};

/// How the channel output is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PreparationMethod {
    /// The mixture is formed directly as a density matrix.
    ExactMixture,
    /// Ancilla register, Hadamards and the controlled Pauli power.
    Coherent,
    /// A uniformly drawn Pauli applied to every copy, index forgotten.
    Incoherent,
}

impl PreparationMethod {
    pub const ALL: [PreparationMethod; 3] = [
        PreparationMethod::ExactMixture,
        PreparationMethod::Coherent,
        PreparationMethod::Incoherent,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PreparationMethod::ExactMixture => "exact_mixture",
            PreparationMethod::Coherent => "coherent",
            PreparationMethod::Incoherent => "incoherent",
        }
    }
}

impl fmt::Display for PreparationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PreparationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact_mixture" => Ok(PreparationMethod::ExactMixture),
            "coherent" => Ok(PreparationMethod::Coherent),
            "incoherent" => Ok(PreparationMethod::Incoherent),
            _ => Err(Error::Unsupported(
                "method must be one of exact, coherent, incoherent",
            )),
        }
    }
}

/// Qubit positions of the ancilla and copy registers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CopyLayout {
    pub n: usize,
    pub alpha: usize,
}

impl CopyLayout {
    pub fn new(n: usize, alpha: usize) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidAlpha { alpha, min: 1 });
        }
        let total = (2 + alpha) * n;
        if total > MAX_STATE_QUBITS {
            return Err(Error::SizeGuard {
                what: "coherent register qubits",
                requested: total,
                limit: MAX_STATE_QUBITS,
            });
        }
        Ok(CopyLayout { n, alpha })
    }

    pub fn total_qubits(&self) -> usize {
        (2 + self.alpha) * self.n
    }

    /// Ancilla qubits; entry `k` carries bit `k` of the Pauli index.
    pub fn ancilla(&self) -> Vec<usize> {
        (self.alpha * self.n..(self.alpha + 2) * self.n).collect()
    }

    /// Qubits of copy `B_i`, `i` in `1..=α`; entry `q` is the copy's qubit `q`.
    pub fn block(&self, i: usize) -> Vec<usize> {
        let lo = (self.alpha - i) * self.n;
        (lo..lo + self.n).collect()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        (1..=self.alpha).map(|i| self.block(i)).collect()
    }

    /// All copy qubits `B̃`.
    pub fn register(&self) -> Vec<usize> {
        (0..self.alpha * self.n).collect()
    }
}

fn guard_mixture_dim(n: usize, alpha: usize) -> Result<usize> {
    let qubits = n * alpha;
    if qubits >= usize::BITS as usize || (1usize << qubits) > MAX_DENSITY_DIM {
        return Err(Error::SizeGuard {
            what: "density matrix dimension",
            requested: 1usize.checked_shl(qubits as u32).unwrap_or(usize::MAX),
            limit: MAX_DENSITY_DIM,
        });
    }
    Ok(1 << qubits)
}

/// `(P_j ψ)^{⊗α}`, one pure branch of the mixture.
pub fn pauli_branch(psi: &StateVector, alpha: usize, index: PauliIndex) -> Result<StateVector> {
    let p = PauliString::from_index(psi.num_qubits(), index)?;
    let copies = tensor_power(psi, alpha)?;
    apply_pauli_power(&p, &copies, alpha)
}

/// `d⁻² Σ_j (P_j |ψ⟩⟨ψ| P_j)^{⊗α}`, accumulated one branch at a time.
pub fn exact_channel_output(psi: &StateVector, alpha: usize) -> Result<DensityMatrix> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha { alpha, min: 1 });
    }
    let n = psi.num_qubits();
    let dim = guard_mixture_dim(n, alpha)?;
    let count = 1u64 << (2 * n);
    let w = 1.0 / count as f64;
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for j in 0..count {
        let branch = pauli_branch(psi, alpha, PauliIndex::new(n, j)?)?;
        let amps = branch.amplitudes();
        for (r, ar) in amps.iter().enumerate() {
            if *ar == c(0.0, 0.0) {
                continue;
            }
            let row = &mut data[r * dim..(r + 1) * dim];
            let arw = ar * w;
            for (slot, ac) in row.iter_mut().zip(amps) {
                *slot += arw * ac.conj();
            }
        }
    }
    Ok(DensityMatrix::from_raw(n * alpha, data))
}

/// `cU_P (H^{⊗2n} ⊗ I) |0⟩^{⊗2n} |ψ⟩^{⊗α}` on the [`CopyLayout`] register.
pub fn coherent_prepare(psi: &StateVector, alpha: usize) -> Result<StateVector> {
    let layout = CopyLayout::new(psi.num_qubits(), alpha)?;
    let ancilla = StateVector::zero(2 * layout.n)?;
    let joint = ancilla.tensor(&tensor_power(psi, alpha)?)?;
    let anc = layout.ancilla();
    let spread = hadamard_layer(&joint, &anc)?;
    controlled_pauli_power(&spread, &anc, &layout.blocks())
}

/// One incoherent preparation: `P_j^{⊗α}|ψ⟩^{⊗α}` for a uniformly drawn `j`.
/// The drawn index is not returned.
pub fn incoherent_sample<R: Rng + ?Sized>(
    psi: &StateVector,
    alpha: usize,
    rng: &mut R,
) -> Result<StateVector> {
    let n = psi.num_qubits();
    let j = rng.random_range(0..1u64 << (2 * n));
    pauli_branch(psi, alpha, PauliIndex::new(n, j)?)
}

/// The ancilla marginal `d⁻² Σ_{i,j} ⟨ψ|P_j P_i|ψ⟩^α |i⟩⟨j|` on `2n` qubits.
pub fn ancilla_marginal(psi: &StateVector, alpha: usize) -> Result<DensityMatrix> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha { alpha, min: 1 });
    }
    let n = psi.num_qubits();
    let count = 1usize << (2 * n);
    if count > MAX_DENSITY_DIM {
        return Err(Error::SizeGuard {
            what: "density matrix dimension",
            requested: count,
            limit: MAX_DENSITY_DIM,
        });
    }
    let branches: Vec<StateVector> = (0..count as u64)
        .map(|j| PauliString::from_index(n, PauliIndex::new(n, j)?)?.apply(psi))
        .collect::<Result<_>>()?;
    let w = 1.0 / count as f64;
    let mut data = vec![c(0.0, 0.0); count * count];
    for i in 0..count {
        for j in 0..count {
            // ⟨ψ|P_j P_i|ψ⟩ = ⟨P_j ψ | P_i ψ⟩ for Hermitian P_j
            let ov = branches[j].inner(&branches[i])?;
            data[i * count + j] = ov.powu(alpha as u32) * w;
        }
    }
    Ok(DensityMatrix::from_raw(2 * n, data))
}

/// Copy-register marginal of a coherent preparation.
pub fn register_marginal_of(prepared: &StateVector, layout: &CopyLayout) -> Result<DensityMatrix> {
    prepared.reduced(&layout.register())
}

/// Ancilla marginal of a coherent preparation.
pub fn ancilla_marginal_of(prepared: &StateVector, layout: &CopyLayout) -> Result<DensityMatrix> {
    prepared.reduced(&layout.ancilla())
}
