//! Swap-test purity estimation and copy budgets.
//!
//! A swap test on preparations `ρ, σ` returns bit 0 with probability
//! `(1 + tr[ρσ]) / 2`; mapping outcomes to `±1` and averaging gives an
//! unbiased estimate of `tr[ρσ]`, and of the purity when both preparations
//! come from the same source.

use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::channel::{pauli_branch, PreparationMethod};
use crate::error::{Error, Result};
use crate::math::c;
use crate::pauli::PauliIndex;
use crate::state::{DensityMatrix, StateVector, MAX_STATE_QUBITS};

/// Copies of `ψ` and swap-test shots needed for additive error `epsilon` on
/// `A_α` with failure probability `delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ShotBudget {
    pub alpha: usize,
    pub dim: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Additive error on the purity, `ε / d`.
    pub tau: f64,
    /// `⌈α d² ε⁻² δ⁻¹⌉`.
    pub copies_of_psi: u64,
    /// `⌈copies / 2α⌉`; every shot consumes two α-copy preparations.
    pub swap_shots: u64,
}

fn check_unit_interval_closed(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value <= 1.0) {
        return Err(Error::OutOfRange { name, value });
    }
    Ok(())
}

/// Copy budget. `ε` and `δ` are accepted in `(0, 1]`.
pub fn copies_required(alpha: usize, dim: usize, epsilon: f64, delta: f64) -> Result<ShotBudget> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha { alpha, min: 1 });
    }
    check_unit_interval_closed("epsilon", epsilon)?;
    check_unit_interval_closed("delta", delta)?;
    let raw = alpha as f64 * (dim * dim) as f64 / (epsilon * epsilon * delta);
    let copies = ceil_tolerant(raw);
    let per_shot = 2 * alpha as u64;
    Ok(ShotBudget {
        alpha,
        dim,
        epsilon,
        delta,
        tau: epsilon / dim as f64,
        copies_of_psi: copies,
        swap_shots: copies.div_ceil(per_shot),
    })
}

/// Ceiling that ignores roundoff just above an integer, so that
/// `2·4/(0.05²·0.1)` yields 32000 rather than 32001.
pub(crate) fn ceil_tolerant(x: f64) -> u64 {
    let r = libm::round(x);
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        libm::ceil(x) as u64
    }
}

/// Supplies the two preparations consumed by one swap-test shot.
pub trait StateSampler {
    /// `tr[ρσ]` for the pair of preparations used by one shot.
    fn shot_overlap(&self, rng: &mut dyn RngCore) -> f64;

    /// Ensemble mean of [`StateSampler::shot_overlap`].
    fn mean_overlap(&self) -> f64;
}

/// A source whose preparations are the same fixed states every shot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPair {
    overlap: f64,
}

impl FixedPair {
    /// Both preparations are `rho`.
    pub fn purity_of(rho: &DensityMatrix) -> Self {
        FixedPair {
            overlap: rho.purity(),
        }
    }

    pub fn overlap_of(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        Ok(FixedPair {
            overlap: rho.overlap(sigma)?,
        })
    }

    pub fn pure(a: &StateVector, b: &StateVector) -> Result<Self> {
        Ok(FixedPair {
            overlap: a.inner(b)?.norm_sqr(),
        })
    }

    /// Overlap obtained elsewhere, e.g. from a full swap-test circuit.
    pub fn from_overlap(overlap: f64) -> Self {
        FixedPair { overlap }
    }

    pub fn overlap(&self) -> f64 {
        self.overlap
    }
}

impl StateSampler for FixedPair {
    fn shot_overlap(&self, _rng: &mut dyn RngCore) -> f64 {
        self.overlap
    }

    fn mean_overlap(&self) -> f64 {
        self.overlap
    }
}

/// Incoherent preparations: each shot draws two independent Pauli indices,
/// one per preparation.
#[derive(Clone, Debug)]
pub struct IncoherentSource {
    psi: StateVector,
    alpha: usize,
    full_circuit: bool,
    /// `|⟨branch_a|branch_b⟩|²` for small registers, row-major.
    gram: Option<Vec<f64>>,
}

/// Largest branch count whose overlap table is cached.
const GRAM_CACHE_BRANCHES: u64 = 256;

impl IncoherentSource {
    pub fn new(psi: StateVector, alpha: usize) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidAlpha { alpha, min: 1 });
        }
        crate::state::tensor_power(&psi, alpha)?;
        let count = 1u64 << (2 * psi.num_qubits());
        let gram = if count <= GRAM_CACHE_BRANCHES {
            let branches = branches(&psi, alpha)?;
            let mut g = Vec::with_capacity(branches.len() * branches.len());
            for a in &branches {
                for b in &branches {
                    g.push(a.inner(b)?.norm_sqr());
                }
            }
            Some(g)
        } else {
            None
        };
        Ok(IncoherentSource {
            psi,
            alpha,
            full_circuit: false,
            gram,
        })
    }

    /// Runs the swap-test circuit on every shot instead of using the overlap.
    pub fn with_full_circuit(mut self) -> Result<Self> {
        let width = 2 * self.alpha * self.psi.num_qubits() + 1;
        if width > MAX_STATE_QUBITS {
            return Err(Error::SizeGuard {
                what: "swap-test circuit qubits",
                requested: width,
                limit: MAX_STATE_QUBITS,
            });
        }
        self.full_circuit = true;
        Ok(self)
    }

    fn branch(&self, j: u64) -> StateVector {
        let n = self.psi.num_qubits();
        pauli_branch(
            &self.psi,
            self.alpha,
            PauliIndex::new(n, j).expect("in range"),
        )
        .expect("validated at construction")
    }
}

fn branches(psi: &StateVector, alpha: usize) -> Result<Vec<StateVector>> {
    let n = psi.num_qubits();
    (0..1u64 << (2 * n))
        .map(|j| pauli_branch(psi, alpha, PauliIndex::new(n, j)?))
        .collect()
}

impl StateSampler for IncoherentSource {
    fn shot_overlap(&self, rng: &mut dyn RngCore) -> f64 {
        let count = 1u64 << (2 * self.psi.num_qubits());
        let ja = rng.random_range(0..count);
        let jb = rng.random_range(0..count);
        if self.full_circuit {
            let (a, b) = (self.branch(ja), self.branch(jb));
            let w = a.num_qubits();
            let joint = a.tensor(&b).expect("validated at construction");
            let hi: Vec<usize> = (w..2 * w).collect();
            let lo: Vec<usize> = (0..w).collect();
            let p0 = swap_test_circuit_p0(&joint, &hi, &lo).expect("validated at construction");
            return 2.0 * p0 - 1.0;
        }
        match &self.gram {
            Some(g) => g[(ja * count + jb) as usize],
            None => self
                .branch(ja)
                .inner(&self.branch(jb))
                .expect("same size")
                .norm_sqr(),
        }
    }

    fn mean_overlap(&self) -> f64 {
        // exhaustive average over both independent draws
        let all = match &self.gram {
            Some(g) => return g.iter().sum::<f64>() / g.len() as f64,
            None => branches(&self.psi, self.alpha).expect("validated at construction"),
        };
        let mut acc = 0.0;
        for a in &all {
            for b in &all {
                acc += a.inner(b).expect("same size").norm_sqr();
            }
        }
        acc / (all.len() * all.len()) as f64
    }
}

/// One swap-test shot: `0` with probability `(1 + tr[ρσ]) / 2`, else `1`.
pub fn swap_test_shot<S: StateSampler + ?Sized>(source: &S, rng: &mut dyn RngCore) -> u8 {
    let p0 = ((1.0 + source.shot_overlap(rng)) * 0.5).clamp(0.0, 1.0);
    if rng.random::<f64>() < p0 {
        0
    } else {
        1
    }
}

/// Mean of `±1`-mapped shot outcomes with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PurityEstimate {
    pub gamma_hat: f64,
    pub stderr: f64,
    pub shots: u64,
}

pub fn estimate_purity<S: StateSampler + ?Sized>(
    source: &S,
    shots: u64,
    rng: &mut dyn RngCore,
) -> Result<PurityEstimate> {
    if shots == 0 {
        return Err(Error::OutOfRange {
            name: "shots",
            value: 0.0,
        });
    }
    let mut zeros = 0u64;
    for _ in 0..shots {
        if swap_test_shot(source, rng) == 0 {
            zeros += 1;
        }
    }
    let s = shots as f64;
    let mean = (2.0 * zeros as f64 - s) / s;
    let var = (1.0 - mean * mean).max(0.0);
    Ok(PurityEstimate {
        gamma_hat: mean,
        stderr: libm::sqrt(var / s),
        shots,
    })
}

/// Probability of reading 0 on the ancilla of the swap-test circuit
/// (`H`, controlled swap of `reg_a` with `reg_b`, `H`) run on `joint`.
///
/// The ancilla is appended as the new most significant qubit.
pub fn swap_test_circuit_p0(joint: &StateVector, reg_a: &[usize], reg_b: &[usize]) -> Result<f64> {
    if reg_a.len() != reg_b.len() {
        return Err(Error::DimensionMismatch {
            expected: reg_a.len(),
            found: reg_b.len(),
        });
    }
    let w = joint.num_qubits();
    if w + 1 > MAX_STATE_QUBITS {
        return Err(Error::SizeGuard {
            what: "swap-test circuit qubits",
            requested: w + 1,
            limit: MAX_STATE_QUBITS,
        });
    }
    for &q in reg_a.iter().chain(reg_b) {
        if q >= w {
            return Err(Error::InvalidQubit { qubit: q, n: w });
        }
    }
    let anc = w;
    let mut state = StateVector::zero(1)?.tensor(joint)?;
    state.apply_h(anc)?;
    // controlled swap, qubit pair by qubit pair
    let amps = state.amplitudes().to_vec();
    let mut out = alloc::vec![c(0.0, 0.0); amps.len()];
    for (b, a) in amps.iter().enumerate() {
        let mut t = b;
        if (b >> anc) & 1 == 1 {
            for (&qa, &qb) in reg_a.iter().zip(reg_b) {
                let (ba, bb) = ((t >> qa) & 1, (t >> qb) & 1);
                if ba != bb {
                    t ^= (1 << qa) | (1 << qb);
                }
            }
        }
        out[t] = *a;
    }
    let mut state = StateVector::new(out)?;
    state.apply_h(anc)?;
    let p0 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(b, _)| (b >> anc) & 1 == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(p0)
}

/// Which marginal of the coherent preparation feeds the swap test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Marginal {
    /// The copy register `B̃`.
    #[default]
    Register,
    /// The `2n` ancilla qubits.
    Ancilla,
}

/// How swap-test outcomes are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ShotMode {
    /// Bernoulli shots drawn from the overlap of the prepared states.
    #[default]
    Sampled,
    /// No shots; the exact mean of the shot law is reported.
    Exact,
    /// Bernoulli shots whose law is read off a simulated swap-test circuit.
    FullCircuit,
}

/// Result of one estimation run.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EstimateReport {
    pub num_qubits: usize,
    pub alpha: usize,
    pub gamma_hat: f64,
    pub gamma_stderr: f64,
    /// `d · gamma_hat`, never clipped.
    pub a_hat: f64,
    pub a_stderr: f64,
    /// `(1-α)⁻¹ ln a_hat`; `None` when `α < 2` or `a_hat ≤ 0`.
    pub m_hat: Option<f64>,
    pub shots_used: u64,
    /// `2α · shots_used`.
    pub copies_used: u64,
    pub seed: u64,
    pub method: PreparationMethod,
    pub marginal: Marginal,
    pub mode: ShotMode,
    pub budget: ShotBudget,
}
