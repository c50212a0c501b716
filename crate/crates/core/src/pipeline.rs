//! From `(ψ, α, ε, δ, method, seed)` to an [`EstimateReport`].

use alloc::boxed::Box;

use crate::channel::{
    ancilla_marginal_of, coherent_prepare, exact_channel_output, register_marginal_of, CopyLayout,
    PreparationMethod,
};
use crate::error::{Error, Result};
use crate::purity::{
    copies_required, estimate_purity, swap_test_circuit_p0, EstimateReport, FixedPair,
    IncoherentSource, Marginal, ShotMode, StateSampler,
};
use crate::rng::stream_rng;
use crate::state::StateVector;

/// `(1-α)⁻¹ ln a`.
pub fn m_from_a(a: f64, alpha: usize) -> Result<f64> {
    if alpha < 2 {
        return Err(Error::InvalidAlpha { alpha, min: 2 });
    }
    if a.is_nan() || a <= 0.0 || a.is_infinite() {
        return Err(Error::OutOfRange {
            name: "a_alpha",
            value: a,
        });
    }
    // adding zero maps -0.0 to 0.0
    Ok(libm::log(a) / (1.0 - alpha as f64) + 0.0)
}

#[derive(Clone, Debug)]
pub struct EstimationRequest {
    pub state: StateVector,
    pub alpha: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub method: PreparationMethod,
    pub seed: u64,
    pub marginal: Marginal,
    pub mode: ShotMode,
    /// Replaces the budgeted shot count when set.
    pub shots_override: Option<u64>,
}

impl EstimationRequest {
    pub fn new(state: StateVector, alpha: usize, epsilon: f64, delta: f64) -> Self {
        EstimationRequest {
            state,
            alpha,
            epsilon,
            delta,
            method: PreparationMethod::Coherent,
            seed: 0,
            marginal: Marginal::Register,
            mode: ShotMode::Sampled,
            shots_override: None,
        }
    }

    pub fn method(mut self, method: PreparationMethod) -> Self {
        self.method = method;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn marginal(mut self, marginal: Marginal) -> Self {
        self.marginal = marginal;
        self
    }

    pub fn mode(mut self, mode: ShotMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn shots(mut self, shots: u64) -> Self {
        self.shots_override = Some(shots);
        self
    }
}

fn build_source(req: &EstimationRequest) -> Result<Box<dyn StateSampler>> {
    let psi = &req.state;
    if req.marginal == Marginal::Ancilla && req.method != PreparationMethod::Coherent {
        return Err(Error::Unsupported(
            "the ancilla marginal exists only for coherent preparation",
        ));
    }
    let source: Box<dyn StateSampler> = match (req.method, req.mode) {
        (PreparationMethod::ExactMixture, ShotMode::FullCircuit) => {
            return Err(Error::Unsupported(
                "full-circuit shots need a pure preparation; use coherent or incoherent",
            ))
        }
        (PreparationMethod::ExactMixture, _) => {
            Box::new(FixedPair::purity_of(&exact_channel_output(psi, req.alpha)?))
        }
        (PreparationMethod::Coherent, ShotMode::FullCircuit) => {
            let layout = CopyLayout::new(psi.num_qubits(), req.alpha)?;
            let prepared = coherent_prepare(psi, req.alpha)?;
            let w = layout.total_qubits();
            let joint = prepared.tensor(&prepared)?;
            // the second preparation occupies the low qubits
            let (reg_a, reg_b): (alloc::vec::Vec<usize>, alloc::vec::Vec<usize>) =
                match req.marginal {
                    Marginal::Register => (
                        layout.register().iter().map(|q| q + w).collect(),
                        layout.register(),
                    ),
                    Marginal::Ancilla => (
                        layout.ancilla().iter().map(|q| q + w).collect(),
                        layout.ancilla(),
                    ),
                };
            let p0 = swap_test_circuit_p0(&joint, &reg_a, &reg_b)?;
            Box::new(FixedPair::from_overlap(2.0 * p0 - 1.0))
        }
        (PreparationMethod::Coherent, _) => {
            let layout = CopyLayout::new(psi.num_qubits(), req.alpha)?;
            let prepared = coherent_prepare(psi, req.alpha)?;
            let marginal = match req.marginal {
                Marginal::Register => register_marginal_of(&prepared, &layout)?,
                Marginal::Ancilla => ancilla_marginal_of(&prepared, &layout)?,
            };
            Box::new(FixedPair::purity_of(&marginal))
        }
        (PreparationMethod::Incoherent, ShotMode::FullCircuit) => {
            Box::new(IncoherentSource::new(psi.clone(), req.alpha)?.with_full_circuit()?)
        }
        (PreparationMethod::Incoherent, _) => {
            Box::new(IncoherentSource::new(psi.clone(), req.alpha)?)
        }
    };
    Ok(source)
}

/// Runs the request on RNG stream 0 of its seed.
pub fn run_estimation(req: &EstimationRequest) -> Result<EstimateReport> {
    run_estimation_on_stream(req, 0)
}

/// Runs the request on an explicit RNG stream of its seed.
pub fn run_estimation_on_stream(req: &EstimationRequest, stream: u64) -> Result<EstimateReport> {
    if req.alpha == 0 {
        return Err(Error::InvalidAlpha {
            alpha: req.alpha,
            min: 1,
        });
    }
    let d = req.state.dim();
    let budget = copies_required(req.alpha, d, req.epsilon, req.delta)?;
    let source = build_source(req)?;
    let (gamma_hat, gamma_stderr, shots_used) = match req.mode {
        ShotMode::Exact => (source.mean_overlap(), 0.0, 0),
        ShotMode::Sampled | ShotMode::FullCircuit => {
            let shots = req.shots_override.unwrap_or(budget.swap_shots);
            let mut rng = stream_rng(req.seed, stream);
            let est = estimate_purity(source.as_ref(), shots, &mut rng)?;
            (est.gamma_hat, est.stderr, est.shots)
        }
    };
    let a_hat = d as f64 * gamma_hat;
    let m_hat = if req.alpha >= 2 && a_hat > 0.0 {
        Some(m_from_a(a_hat, req.alpha)?)
    } else {
        None
    };
    Ok(EstimateReport {
        num_qubits: req.state.num_qubits(),
        alpha: req.alpha,
        gamma_hat,
        gamma_stderr,
        a_hat,
        a_stderr: d as f64 * gamma_stderr,
        m_hat,
        shots_used,
        copies_used: 2 * req.alpha as u64 * shots_used,
        seed: req.seed,
        method: req.method,
        marginal: req.marginal,
        mode: req.mode,
        budget,
    })
}
