//! Benchmarks and cross-checks: the single-qubit θ sweep, the replica
//! observable `Γ_α`, the magic/entanglement balance of the coherent
//! preparation, and direct estimators for sample-complexity comparison.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, RngCore};
use rand_distr::{Binomial, Distribution};

use crate::channel::{coherent_prepare, exact_channel_output, CopyLayout, PreparationMethod};
use crate::error::{Error, Result};
use crate::math::{c, hermitian_eigenvalues, kron, powi};
use crate::oracle::{a_alpha_exact, closed_form_a, m_alpha_exact, psi_theta};
use crate::pauli::{PauliIndex, PauliString};
use crate::pipeline::{run_estimation_on_stream, EstimationRequest};
use crate::purity::{ceil_tolerant, copies_required, estimate_purity, FixedPair};
use crate::rng::stream_rng;
use crate::state::{
    apply_dense_on_qubits, apply_pauli_power, renyi_entanglement, schmidt_spectrum, tensor_power,
    BipartiteSplit, StateVector,
};

/// Largest number of qubits `Γ_α` may act on as a dense matrix.
pub const MAX_GAMMA_QUBITS: usize = 10;

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn theta_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        stop
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}

/// Single-qubit sweep over `|ψ_θ⟩`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepConfig {
    pub alphas: Vec<usize>,
    pub thetas: Vec<f64>,
    pub epsilon: f64,
    pub delta: f64,
    pub seeds: Vec<u64>,
    pub method: PreparationMethod,
}

impl SweepConfig {
    /// Nine points on `[0, π/2]`, `α ∈ {2,3,5,7}`, ten seeds.
    pub fn standard(epsilon: f64, delta: f64) -> Self {
        SweepConfig {
            alphas: vec![2, 3, 5, 7],
            thetas: theta_grid(0.0, core::f64::consts::FRAC_PI_2, 9),
            epsilon,
            delta,
            seeds: (0..10).collect(),
            method: PreparationMethod::Coherent,
        }
    }

    /// Work items in output order: θ, then α, then seed.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::with_capacity(self.thetas.len() * self.alphas.len() * self.seeds.len());
        for (theta_index, &theta) in self.thetas.iter().enumerate() {
            for &alpha in &self.alphas {
                for &seed in &self.seeds {
                    out.push(SweepPoint {
                        theta,
                        theta_index,
                        alpha,
                        seed,
                    });
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub theta: f64,
    pub theta_index: usize,
    pub alpha: usize,
    pub seed: u64,
}

impl SweepPoint {
    /// RNG stream of this point under its seed.
    pub fn stream(&self) -> u64 {
        ((self.alpha as u64) << 32) | self.theta_index as u64
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub theta: f64,
    pub alpha: usize,
    pub estimate: f64,
    pub exact: f64,
    pub abs_error: f64,
    pub copies: u64,
    pub seed: u64,
    pub within_eps: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepResult {
    pub epsilon: f64,
    pub delta: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn within_eps_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|r| r.within_eps).count() as f64 / self.rows.len() as f64
    }
}

pub fn sweep_point(cfg: &SweepConfig, point: &SweepPoint) -> Result<SweepRow> {
    let req = EstimationRequest::new(psi_theta(point.theta), point.alpha, cfg.epsilon, cfg.delta)
        .method(cfg.method)
        .seed(point.seed);
    let report = run_estimation_on_stream(&req, point.stream())?;
    let exact = closed_form_a(point.theta, point.alpha);
    let abs_error = (report.a_hat - exact).abs();
    Ok(SweepRow {
        theta: point.theta,
        alpha: point.alpha,
        estimate: report.a_hat,
        exact,
        abs_error,
        copies: report.copies_used,
        seed: point.seed,
        within_eps: abs_error <= cfg.epsilon,
    })
}

pub fn sweep_theta(cfg: &SweepConfig) -> Result<SweepResult> {
    let rows = cfg
        .points()
        .iter()
        .map(|p| sweep_point(cfg, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        epsilon: cfg.epsilon,
        delta: cfg.delta,
        rows,
    })
}

/// `Γ_α = ½ Σ_i Q_i^{⊗2α}` over `Q ∈ {I, X, Y, Z}`, a dense operator on
/// `2α` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicaObservable {
    alpha: usize,
    dim: usize,
    matrix: Vec<Complex64>,
}

impl ReplicaObservable {
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| (self.matrix[i * d + j] - self.matrix[j * d + i].conj()).norm() <= tol)
        })
    }

    /// Sorted nonincreasing.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix, self.dim)
    }
}

fn single_qubit_paulis() -> [[Complex64; 4]; 4] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [[l, o, o, l], [o, l, l, o], [o, -i, i, o], [l, o, o, -l]]
}

pub fn build_gamma(alpha: usize) -> Result<ReplicaObservable> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha { alpha, min: 1 });
    }
    let qubits = 2 * alpha;
    if qubits > MAX_GAMMA_QUBITS {
        return Err(Error::SizeGuard {
            what: "replica observable qubits",
            requested: qubits,
            limit: MAX_GAMMA_QUBITS,
        });
    }
    let dim = 1usize << qubits;
    let mut matrix = vec![c(0.0, 0.0); dim * dim];
    for q in single_qubit_paulis() {
        let mut power = q.to_vec();
        let mut pd = 2;
        for _ in 1..qubits {
            power = kron(&power, pd, &q, 2);
            pd *= 2;
        }
        for (m, p) in matrix.iter_mut().zip(&power) {
            *m += p * 0.5;
        }
    }
    Ok(ReplicaObservable { alpha, dim, matrix })
}

/// The two-qubit swap operator.
pub fn swap_operator() -> Vec<Complex64> {
    let mut m = vec![c(0.0, 0.0); 16];
    for a in 0..2 {
        for b in 0..2 {
            m[(a * 2 + b) * 4 + b * 2 + a] = c(1.0, 0.0);
        }
    }
    m
}

/// Largest `|λ|` of `Γ_α^{⊗n}`, from the single-site spectrum of the dense
/// `Γ_α` (the spectrum of a tensor power is the set of products).
pub fn gamma_tensor_norm(alpha: usize, n: usize) -> Result<f64> {
    let eig = build_gamma(alpha)?.eigenvalues();
    let site = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(powi(site, n))
}

/// Largest `|λ|` of `d⁻¹ Σ_j P_j^{⊗2α}` by power iteration on `G²`, applying
/// Pauli strings to a random vector without forming any matrix.
pub fn gamma_norm_power_iteration<R: Rng + ?Sized>(
    alpha: usize,
    n: usize,
    iterations: usize,
    rng: &mut R,
) -> Result<f64> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha { alpha, min: 1 });
    }
    let start = crate::oracle::haar_random(2 * alpha * n, rng)?;
    let strings: Vec<PauliString> = (0..1u64 << (2 * n))
        .map(|j| PauliString::from_index(n, PauliIndex::new(n, j)?))
        .collect::<Result<_>>()?;
    let d = (1u64 << n) as f64;
    let apply = |v: &StateVector| -> Result<Vec<Complex64>> {
        let mut acc = vec![c(0.0, 0.0); v.dim()];
        for p in &strings {
            let w = apply_pauli_power(p, v, 2 * alpha)?;
            for (a, b) in acc.iter_mut().zip(w.amplitudes()) {
                *a += b / d;
            }
        }
        Ok(acc)
    };
    let mut v = start;
    let mut estimate = 0.0;
    for _ in 0..iterations.max(1) {
        let g = StateVector::from_raw(v.num_qubits(), apply(&v)?);
        let gg = apply(&g)?;
        let norm = libm::sqrt(gg.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if norm == 0.0 {
            return Ok(0.0);
        }
        // ‖G² v‖ with ‖v‖ = 1 tends to λ_max²
        estimate = libm::sqrt(norm);
        v = StateVector::normalized(gg)?;
    }
    Ok(estimate)
}

/// `⟨ψ|^{⊗2α} Γ_α^{⊗n} |ψ⟩^{⊗2α}` with the dense `Γ_α` applied once per
/// input qubit across the `2α` copies.
pub fn replica_expectation(psi: &StateVector, alpha: usize) -> Result<f64> {
    let gamma = build_gamma(alpha)?;
    let n = psi.num_qubits();
    let copies = tensor_power(psi, 2 * alpha)?;
    let mut acted = copies.clone();
    for q in 0..n {
        let site: Vec<usize> = (0..2 * alpha).map(|k| k * n + q).collect();
        acted = apply_dense_on_qubits(gamma.matrix(), &site, &acted)?;
    }
    let value = copies.inner(&acted)?;
    if value.im.abs() > crate::pauli::EXPVAL_IMAG_TOL {
        return Err(Error::ImaginaryResidual(value.im));
    }
    Ok(value.re)
}

/// Per-string measurement budget for the direct estimators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StringShots {
    /// Exact expectations, no sampling noise.
    Exact,
    PerString(u64),
}

/// Output of a direct (non-swap) estimator of `A_α`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DirectEstimate {
    pub alpha: usize,
    pub num_qubits: usize,
    pub a_hat: f64,
    pub shots_per_string: u64,
    pub copies_used: u64,
}

/// Shots per string for single-copy estimation at additive error `ε`:
/// `τ = ε/(2αd)` on every expectation and `⌈τ⁻² δ⁻¹⌉` shots each.
pub fn single_copy_shots_per_string(
    alpha: usize,
    dim: usize,
    epsilon: f64,
    delta: f64,
) -> Result<u64> {
    copies_required(alpha, dim, epsilon, delta)?;
    let tau = epsilon / (2.0 * alpha as f64 * dim as f64);
    Ok(ceil_tolerant(1.0 / (tau * tau * delta)))
}

/// Shots per string for the replica-observable estimator: every string has
/// variance at most one, so `⌈ε⁻² δ⁻¹⌉`.
pub fn gamma_shots_per_string(epsilon: f64, delta: f64) -> Result<u64> {
    copies_required(1, 1, epsilon, delta)?;
    Ok(ceil_tolerant(1.0 / (epsilon * epsilon * delta)))
}

/// Mean of `k` draws of a `±1` outcome with expectation `mean`.
fn sampled_pm_mean<R: Rng + ?Sized>(mean: f64, k: u64, rng: &mut R) -> f64 {
    let p = ((1.0 + mean) * 0.5).clamp(0.0, 1.0);
    let plus = Binomial::new(k, p).expect("p in [0,1]").sample(rng);
    (2.0 * plus as f64 - k as f64) / k as f64
}

fn check_shots(shots: StringShots) -> Result<()> {
    if shots == StringShots::PerString(0) {
        return Err(Error::OutOfRange {
            name: "shots_per_string",
            value: 0.0,
        });
    }
    Ok(())
}

/// `d⁻¹ Σ_j O_j^{2α}` from per-string single-copy estimates `O_j` of `⟨P_j⟩`.
pub fn direct_single_copy_from_shots<R: Rng + ?Sized>(
    psi: &StateVector,
    alpha: usize,
    shots: StringShots,
    rng: &mut R,
) -> Result<DirectEstimate> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha { alpha, min: 1 });
    }
    check_shots(shots)?;
    let n = psi.num_qubits();
    let d = psi.dim();
    let mut acc = 0.0;
    for j in 0..1u64 << (2 * n) {
        let e = PauliString::from_index(n, PauliIndex::new(n, j)?)?.expval(psi)?;
        let o = match shots {
            StringShots::Exact => e,
            StringShots::PerString(k) => sampled_pm_mean(e, k, rng),
        };
        acc += powi(o, 2 * alpha);
    }
    let k = match shots {
        StringShots::Exact => 0,
        StringShots::PerString(k) => k,
    };
    Ok(DirectEstimate {
        alpha,
        num_qubits: n,
        a_hat: acc / d as f64,
        shots_per_string: k,
        copies_used: (d * d) as u64 * k,
    })
}

/// Single-copy estimate at the budget for `(ε, δ)`.
pub fn direct_single_copy_estimate<R: Rng + ?Sized>(
    psi: &StateVector,
    alpha: usize,
    epsilon: f64,
    delta: f64,
    rng: &mut R,
) -> Result<DirectEstimate> {
    let k = single_copy_shots_per_string(alpha, psi.dim(), epsilon, delta)?;
    direct_single_copy_from_shots(psi, alpha, StringShots::PerString(k), rng)
}

/// `d⁻¹ k⁻¹ Σ_j Σ_l x_l^j`, with `x^j = ±1` outcomes of measuring
/// `P_j^{⊗2α}` on `|ψ⟩^{⊗2α}`.
pub fn direct_gamma_estimate<R: Rng + ?Sized>(
    psi: &StateVector,
    alpha: usize,
    shots: StringShots,
    rng: &mut R,
) -> Result<DirectEstimate> {
    check_shots(shots)?;
    let n = psi.num_qubits();
    let d = psi.dim();
    let copies = tensor_power(psi, 2 * alpha)?;
    let mut acc = 0.0;
    for j in 0..1u64 << (2 * n) {
        let p = PauliString::from_index(n, PauliIndex::new(n, j)?)?;
        let mean = copies
            .inner(&apply_pauli_power(&p, &copies, 2 * alpha)?)?
            .re;
        acc += match shots {
            StringShots::Exact => mean,
            StringShots::PerString(k) => sampled_pm_mean(mean, k, rng),
        };
    }
    let k = match shots {
        StringShots::Exact => 0,
        StringShots::PerString(k) => k,
    };
    Ok(DirectEstimate {
        alpha,
        num_qubits: n,
        a_hat: acc / d as f64,
        shots_per_string: k,
        copies_used: 2 * alpha as u64 * (d * d) as u64 * k,
    })
}

/// Terms of `(1-α) M_α + E_2(A|B̃) = ln d` for the coherent preparation.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EntanglementBalance {
    pub alpha: usize,
    pub a_alpha: f64,
    /// `(1-α) M_α`, which is `ln A_α`; at `α = 1` this is `ln 1 = 0`.
    pub magic_term: f64,
    /// Second Rényi entropy across ancilla | copy register.
    pub e2: f64,
    pub ln_d: f64,
    pub residual: f64,
}

pub fn magic_entanglement_balance(psi: &StateVector, alpha: usize) -> Result<EntanglementBalance> {
    let n = psi.num_qubits();
    let layout = CopyLayout::new(n, alpha)?;
    let prepared = coherent_prepare(psi, alpha)?;
    let split = BipartiteSplit::new(layout.total_qubits(), &layout.ancilla())?;
    let e2 = renyi_entanglement(&schmidt_spectrum(&prepared, &split)?, 2.0)?;
    let a_alpha = a_alpha_exact(psi, alpha)?;
    let magic_term = if alpha >= 2 {
        (1.0 - alpha as f64) * m_alpha_exact(psi, alpha)?
    } else {
        0.0
    };
    let ln_d = n as f64 * core::f64::consts::LN_2;
    Ok(EntanglementBalance {
        alpha,
        a_alpha,
        magic_term,
        e2,
        ln_d,
        residual: (magic_term + e2 - ln_d).abs(),
    })
}

/// `|(1-α) M_α(ψ) + E_2 − ln d|`.
pub fn magic_entanglement_residual(psi: &StateVector, alpha: usize) -> Result<f64> {
    Ok(magic_entanglement_balance(psi, alpha)?.residual)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ComplexityMethod {
    SwapPurity,
    DirectGamma,
    DirectSingleCopy,
}

impl ComplexityMethod {
    pub const ALL: [ComplexityMethod; 3] = [
        ComplexityMethod::SwapPurity,
        ComplexityMethod::DirectGamma,
        ComplexityMethod::DirectSingleCopy,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ComplexityMethod::SwapPurity => "swap_purity",
            ComplexityMethod::DirectGamma => "direct_gamma",
            ComplexityMethod::DirectSingleCopy => "direct_single_copy",
        }
    }

    fn stream_tag(&self) -> u64 {
        match self {
            ComplexityMethod::SwapPurity => 1,
            ComplexityMethod::DirectGamma => 2,
            ComplexityMethod::DirectSingleCopy => 3,
        }
    }
}

impl fmt::Display for ComplexityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComplexityMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ComplexityMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or(Error::Unsupported(
                "method must be one of swap_purity, direct_gamma, direct_single_copy",
            ))
    }
}

/// Copies each method is prescribed for additive error `ε` on `A_α` with
/// failure probability `δ`.
pub fn prescribed_copies(
    method: ComplexityMethod,
    alpha: usize,
    dim: usize,
    epsilon: f64,
    delta: f64,
) -> Result<u64> {
    let d2 = (dim * dim) as u64;
    Ok(match method {
        ComplexityMethod::SwapPurity => {
            let b = copies_required(alpha, dim, epsilon, delta)?;
            2 * alpha as u64 * b.swap_shots
        }
        ComplexityMethod::DirectGamma => {
            2 * alpha as u64 * d2 * gamma_shots_per_string(epsilon, delta)?
        }
        ComplexityMethod::DirectSingleCopy => {
            d2 * single_copy_shots_per_string(alpha, dim, epsilon, delta)?
        }
    })
}

/// One estimate of `A_α` spending about `copies` copies of `ψ`.
/// Returns the estimate and the copies actually consumed.
pub fn estimate_with_copies(
    method: ComplexityMethod,
    psi: &StateVector,
    alpha: usize,
    copies: u64,
    rng: &mut dyn RngCore,
) -> Result<(f64, u64)> {
    let d2 = (psi.dim() * psi.dim()) as u64;
    let per = match method {
        ComplexityMethod::SwapPurity => 2 * alpha as u64,
        ComplexityMethod::DirectGamma => 2 * alpha as u64 * d2,
        ComplexityMethod::DirectSingleCopy => d2,
    };
    let units = copies.div_ceil(per).max(1);
    let a_hat = match method {
        ComplexityMethod::SwapPurity => {
            let source = FixedPair::purity_of(&exact_channel_output(psi, alpha)?);
            psi.dim() as f64 * estimate_purity(&source, units, rng)?.gamma_hat
        }
        ComplexityMethod::DirectGamma => {
            direct_gamma_estimate(psi, alpha, StringShots::PerString(units), rng)?.a_hat
        }
        ComplexityMethod::DirectSingleCopy => {
            direct_single_copy_from_shots(psi, alpha, StringShots::PerString(units), rng)?.a_hat
        }
    };
    Ok((a_hat, units * per))
}

/// Root-mean-square error of [`estimate_with_copies`] over `seeds`.
pub fn rmse_at_copies(
    method: ComplexityMethod,
    psi: &StateVector,
    alpha: usize,
    copies: u64,
    seeds: &[u64],
) -> Result<f64> {
    if seeds.is_empty() {
        return Err(Error::OutOfRange {
            name: "seeds",
            value: 0.0,
        });
    }
    let truth = a_alpha_exact(psi, alpha)?;
    let mut sq = 0.0;
    for &seed in seeds {
        let mut rng = stream_rng(seed, (method.stream_tag() << 32) | alpha as u64);
        let (a_hat, _) = estimate_with_copies(method, psi, alpha, copies, &mut rng)?;
        sq += (a_hat - truth) * (a_hat - truth);
    }
    Ok(libm::sqrt(sq / seeds.len() as f64))
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexityRow {
    pub method: ComplexityMethod,
    pub num_qubits: usize,
    pub alpha: usize,
    pub epsilon_target: f64,
    pub delta: f64,
    pub copies: u64,
    pub empirical_rmse: f64,
}

/// Empirical RMSE of `method` at its prescribed budget.
pub fn complexity_row(
    method: ComplexityMethod,
    psi: &StateVector,
    alpha: usize,
    epsilon: f64,
    delta: f64,
    seeds: &[u64],
) -> Result<ComplexityRow> {
    if psi.num_qubits() > 2 {
        return Err(Error::SizeGuard {
            what: "complexity table qubits",
            requested: psi.num_qubits(),
            limit: 2,
        });
    }
    let copies = prescribed_copies(method, alpha, psi.dim(), epsilon, delta)?;
    let empirical_rmse = rmse_at_copies(method, psi, alpha, copies, seeds)?;
    Ok(ComplexityRow {
        method,
        num_qubits: psi.num_qubits(),
        alpha,
        epsilon_target: epsilon,
        delta,
        copies,
        empirical_rmse,
    })
}

/// Rows in order method, α, ε.
pub fn complexity_table(
    methods: &[ComplexityMethod],
    psi: &StateVector,
    alphas: &[usize],
    epsilons: &[f64],
    delta: f64,
    seeds: &[u64],
) -> Result<Vec<ComplexityRow>> {
    let mut rows = Vec::new();
    for &method in methods {
        for &alpha in alphas {
            for &eps in epsilons {
                rows.push(complexity_row(method, psi, alpha, eps, delta, seeds)?);
            }
        }
    }
    Ok(rows)
}
