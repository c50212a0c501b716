//! Exact stabilizer Rényi entropies by brute-force Pauli summation.
//!
//! Everything here is noise-free and serves as ground truth for the
//! statistical estimators.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::math::{c, powi};
use crate::pauli::{PauliIndex, PauliString};
use crate::pipeline::m_from_a;
use crate::state::StateVector;

/// Default tolerance for [`is_stabilizer`].
pub const STABILIZER_TOL: f64 = 1e-8;

/// `{ d⁻¹ ⟨ψ|P_j|ψ⟩² }` in canonical Pauli order.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CharacteristicDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl CharacteristicDistribution {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, index: PauliIndex) -> f64 {
        self.probs[index.value() as usize]
    }

    /// Entries paired with their Pauli strings, for order-annotated output.
    pub fn labeled(&self) -> impl Iterator<Item = (PauliString, f64)> + '_ {
        self.probs.iter().enumerate().map(move |(j, &p)| {
            let idx = PauliIndex::new(self.n, j as u64).expect("index within range");
            (
                PauliString::from_index(self.n, idx).expect("valid index"),
                p,
            )
        })
    }

    /// `A_α = d Σ_j p_j^α`, since each `p_j = d⁻¹⟨P_j⟩²`.
    pub fn a_alpha(&self, alpha: usize) -> f64 {
        let d = (1usize << self.n) as f64;
        // d^{-1} Σ ⟨P⟩^{2α} = d^{-1} Σ (d p)^α
        self.probs.iter().map(|&p| powi(d * p, alpha)).sum::<f64>() / d
    }
}

/// `A_α` and, for `α ≥ 2`, `M_α`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SreValue {
    pub alpha: usize,
    pub a_alpha: f64,
    pub m_alpha: Option<f64>,
}

fn check_normalized(psi: &StateVector) -> Result<()> {
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > crate::state::NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

pub fn characteristic_distribution(psi: &StateVector) -> Result<CharacteristicDistribution> {
    check_normalized(psi)?;
    let n = psi.num_qubits();
    let d = psi.dim() as f64;
    let count = 1u64 << (2 * n);
    let mut probs = Vec::with_capacity(count as usize);
    for j in 0..count {
        let p = PauliString::from_index(n, PauliIndex::new(n, j)?)?;
        let e = p.expval(psi)?;
        probs.push(e * e / d);
    }
    Ok(CharacteristicDistribution { n, probs })
}

/// `A_α(ψ) = d⁻¹ Σ_j ⟨ψ|P_j|ψ⟩^{2α}`.
pub fn a_alpha_exact(psi: &StateVector, alpha: usize) -> Result<f64> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha { alpha, min: 1 });
    }
    check_normalized(psi)?;
    let n = psi.num_qubits();
    let count = 1u64 << (2 * n);
    let mut acc = 0.0;
    for j in 0..count {
        let p = PauliString::from_index(n, PauliIndex::new(n, j)?)?;
        acc += powi(p.expval(psi)?, 2 * alpha);
    }
    Ok(acc / psi.dim() as f64)
}

/// `M_α(ψ) = (1-α)⁻¹ ln A_α(ψ)` for `α ≥ 2`.
pub fn m_alpha_exact(psi: &StateVector, alpha: usize) -> Result<f64> {
    if alpha < 2 {
        return Err(Error::InvalidAlpha { alpha, min: 2 });
    }
    let m = m_from_a(a_alpha_exact(psi, alpha)?, alpha)?;
    // A_α can exceed one by roundoff on stabilizer states
    Ok(if m < 0.0 && m > -1e-12 { 0.0 } else { m })
}

pub fn sre(psi: &StateVector, alpha: usize) -> Result<SreValue> {
    let a_alpha = a_alpha_exact(psi, alpha)?;
    let m_alpha = if alpha >= 2 {
        Some(m_alpha_exact(psi, alpha)?)
    } else {
        None
    };
    Ok(SreValue {
        alpha,
        a_alpha,
        m_alpha,
    })
}

/// `A_α(|ψ_θ⟩) = ½(1 + cos^{2α}θ + sin^{2α}θ)`.
pub fn closed_form_a(theta: f64, alpha: usize) -> f64 {
    0.5 * (1.0 + powi(libm::cos(theta), 2 * alpha) + powi(libm::sin(theta), 2 * alpha))
}

/// `|ψ_θ⟩ = (|0⟩ + e^{iθ}|1⟩)/√2`.
pub fn psi_theta(theta: f64) -> StateVector {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_raw(
        1,
        vec![c(h, 0.0), c(h * libm::cos(theta), h * libm::sin(theta))],
    )
}

/// True iff exactly `d` entries of the characteristic distribution are within
/// `tol` of `1/d` and the remainder within `tol` of zero.
pub fn is_stabilizer(psi: &StateVector, tol: f64) -> Result<bool> {
    let dist = characteristic_distribution(psi)?;
    let d = psi.dim() as f64;
    let mut full = 0usize;
    for &p in dist.probs() {
        if (p - 1.0 / d).abs() <= tol {
            full += 1;
        } else if p.abs() > tol {
            return Ok(false);
        }
    }
    Ok(full == psi.dim())
}

/// Haar-random state from normalized i.i.d. complex Gaussian amplitudes.
pub fn haar_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StateVector> {
    if n > crate::state::MAX_STATE_QUBITS {
        return Err(Error::SizeGuard {
            what: "statevector qubits",
            requested: n,
            limit: crate::state::MAX_STATE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let amps = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c(re, im)
        })
        .collect();
    StateVector::normalized(amps)
}

/// The six single-qubit stabilizer states `|0⟩, |1⟩, |±⟩, |±i⟩`.
pub fn single_qubit_stabilizer_states() -> Vec<StateVector> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(1.0, 0.0)],
        [c(h, 0.0), c(h, 0.0)],
        [c(h, 0.0), c(-h, 0.0)],
        [c(h, 0.0), c(0.0, h)],
        [c(h, 0.0), c(0.0, -h)],
    ]
    .iter()
    .map(|a| StateVector::from_raw(1, a.to_vec()))
    .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
}

/// A gate sequence over `{H, S, CNOT}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<CliffordGate>,
}

impl CliffordCircuit {
    pub fn new(n: usize, gates: Vec<CliffordGate>) -> Self {
        CliffordCircuit { n, gates }
    }

    /// `3n²` gates drawn uniformly from the available gate types, then
    /// uniformly over qubits.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let depth = 3 * n * n;
        let kinds = if n >= 2 { 3 } else { 2 };
        let gates = (0..depth)
            .map(|_| match rng.random_range(0..kinds) {
                0 => CliffordGate::H(rng.random_range(0..n)),
                1 => CliffordGate::S(rng.random_range(0..n)),
                _ => {
                    let control = rng.random_range(0..n);
                    let mut target = rng.random_range(0..n - 1);
                    if target >= control {
                        target += 1;
                    }
                    CliffordGate::Cnot { control, target }
                }
            })
            .collect();
        CliffordCircuit { n, gates }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: psi.num_qubits(),
            });
        }
        let mut out = psi.clone();
        for g in &self.gates {
            match *g {
                CliffordGate::H(q) => out.apply_h(q)?,
                CliffordGate::S(q) => out.apply_s(q)?,
                CliffordGate::Cnot { control, target } => out.apply_cnot(control, target)?,
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn distribution_examples() {
        let zero = StateVector::zero(1).unwrap();
        let d = characteristic_distribution(&zero).unwrap();
        // canonical order is I, X, Z, Y
        assert_eq!(d.probs(), &[0.5, 0.0, 0.5, 0.0]);

        let d = characteristic_distribution(&psi_theta(FRAC_PI_4)).unwrap();
        let expect = [0.5, 0.25, 0.0, 0.25];
        for (p, e) in d.probs().iter().zip(expect) {
            assert!((p - e).abs() < 1e-12);
        }
        let labels: Vec<_> = d.labeled().map(|(p, _)| p.label()).collect();
        assert_eq!(labels, ["I", "X", "Z", "Y"]);
    }

    #[test]
    fn distribution_is_normalized() {
        let mut rng = stream_rng(21, 0);
        for n in 1..=3 {
            for _ in 0..100 {
                let psi = haar_random(n, &mut rng).unwrap();
                let d = characteristic_distribution(&psi).unwrap();
                assert!(d.probs().iter().all(|&p| p >= 0.0));
                assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn a_alpha_examples() {
        let mut rng = stream_rng(22, 0);
        let psi = haar_random(2, &mut rng).unwrap();
        assert!((a_alpha_exact(&psi, 1).unwrap() - 1.0).abs() < 1e-12);
        for alpha in 1..=5 {
            assert!(
                (a_alpha_exact(&StateVector::zero(1).unwrap(), alpha).unwrap() - 1.0).abs() < 1e-15
            );
        }
        let a = a_alpha_exact(&psi_theta(FRAC_PI_4), 2).unwrap();
        assert!((a - 0.75).abs() < 1e-12);
        assert!(matches!(
            a_alpha_exact(&psi, 0),
            Err(Error::InvalidAlpha { .. })
        ));
        // agrees with the distribution route
        let dist = characteristic_distribution(&psi).unwrap();
        assert!((dist.a_alpha(3) - a_alpha_exact(&psi, 3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn m_alpha_examples() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::new(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        assert_eq!(m_alpha_exact(&plus, 2).unwrap(), 0.0);
        let m = m_alpha_exact(&psi_theta(FRAC_PI_4), 2).unwrap();
        assert!((m - 0.28768207245178085).abs() < 1e-12);
        assert!(matches!(
            m_alpha_exact(&plus, 1),
            Err(Error::InvalidAlpha { .. })
        ));
        let mut rng = stream_rng(23, 0);
        let a = haar_random(1, &mut rng).unwrap();
        let b = haar_random(2, &mut rng).unwrap();
        let ab = a.tensor(&b).unwrap();
        for alpha in 2..=3 {
            let sum = m_alpha_exact(&a, alpha).unwrap() + m_alpha_exact(&b, alpha).unwrap();
            assert!((m_alpha_exact(&ab, alpha).unwrap() - sum).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_examples_and_grid() {
        for alpha in 1..=7 {
            assert_eq!(closed_form_a(0.0, alpha), 1.0);
            assert!((closed_form_a(FRAC_PI_2, alpha) - 1.0).abs() < 1e-15);
        }
        assert!((closed_form_a(FRAC_PI_4, 2) - 0.75).abs() < 1e-15);
        for k in 0..32 {
            let theta = k as f64 * core::f64::consts::PI / 31.0;
            for alpha in [1, 2, 3, 5, 7] {
                let exact = a_alpha_exact(&psi_theta(theta), alpha).unwrap();
                assert!((closed_form_a(theta, alpha) - exact).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stabilizer_detection() {
        assert!(is_stabilizer(&StateVector::zero(1).unwrap(), STABILIZER_TOL).unwrap());
        assert!(!is_stabilizer(&psi_theta(FRAC_PI_4), STABILIZER_TOL).unwrap());
        for s in single_qubit_stabilizer_states() {
            assert!(is_stabilizer(&s, STABILIZER_TOL).unwrap());
        }
        let mut rng = stream_rng(24, 0);
        for n in 1..=3 {
            for _ in 0..10 {
                let circ = CliffordCircuit::random(n, &mut rng);
                let s = circ.apply(&StateVector::zero(n).unwrap()).unwrap();
                assert!(is_stabilizer(&s, STABILIZER_TOL).unwrap());
            }
        }
    }

    #[test]
    fn faithfulness_on_theta_states() {
        for k in 1..16 {
            let theta = k as f64 * 0.19;
            let on_axis = (theta / FRAC_PI_2 - libm::round(theta / FRAC_PI_2)).abs() < 1e-9;
            if !on_axis {
                assert!(m_alpha_exact(&psi_theta(theta), 2).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn clifford_invariance() {
        let mut rng = stream_rng(25, 0);
        for _ in 0..10 {
            let psi = haar_random(2, &mut rng).unwrap();
            let circ = CliffordCircuit::random(2, &mut rng);
            let out = circ.apply(&psi).unwrap();
            for alpha in 2..=3 {
                let d = m_alpha_exact(&out, alpha).unwrap() - m_alpha_exact(&psi, alpha).unwrap();
                assert!(d.abs() < 1e-10);
            }
        }
    }
}
