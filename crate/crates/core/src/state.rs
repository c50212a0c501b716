//! Dense statevectors and density matrices.
//!
//! Qubit `q` is bit `q` of a computational basis index. A Kronecker product
//! `A ⊗ B` places `A` on the high (most significant) qubits, so registers
//! listed left to right occupy descending qubit positions.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{c, hermitian_eigenvalues, i_pow};

/// Qubit limit for pure-state paths.
pub const MAX_STATE_QUBITS: usize = 20;

/// Dimension limit for dense density-matrix paths.
pub const MAX_DENSITY_DIM: usize = 4096;

/// Normalization tolerance for statevectors and traces.
pub const NORM_TOL: f64 = 1e-10;

/// Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Most negative eigenvalue accepted for a density matrix.
pub const PSD_TOL: f64 = 1e-9;

fn guard_state_qubits(n: usize) -> Result<()> {
    if n > MAX_STATE_QUBITS {
        return Err(Error::SizeGuard {
            what: "statevector qubits",
            requested: n,
            limit: MAX_STATE_QUBITS,
        });
    }
    Ok(())
}

fn guard_density_dim(dim: usize) -> Result<()> {
    if dim > MAX_DENSITY_DIM {
        return Err(Error::SizeGuard {
            what: "density matrix dimension",
            requested: dim,
            limit: MAX_DENSITY_DIM,
        });
    }
    Ok(())
}

fn check_qubit_set(qubits: &[usize], n: usize) -> Result<()> {
    let mut seen = 0u64;
    for &q in qubits {
        if q >= n {
            return Err(Error::InvalidQubit { qubit: q, n });
        }
        if seen & (1 << q) != 0 {
            return Err(Error::DuplicateQubit(q));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// Spreads the low bits of `value` onto the given qubit positions.
#[inline]
fn scatter(value: usize, positions: &[usize]) -> usize {
    let mut out = 0;
    for (k, &q) in positions.iter().enumerate() {
        out |= ((value >> k) & 1) << q;
    }
    out
}

/// Gathers the bits at the given qubit positions into the low bits.
#[inline]
fn gather(index: usize, positions: &[usize]) -> usize {
    let mut out = 0;
    for (k, &q) in positions.iter().enumerate() {
        out |= ((index >> q) & 1) << k;
    }
    out
}

/// `i^phase X^x Z^z` applied to a dense amplitude vector.
pub(crate) fn phased_permutation(amps: &[Complex64], x: u64, z: u64, phase: u8) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); amps.len()];
    let ph = i_pow(phase);
    for (b, a) in amps.iter().enumerate() {
        let bb = b as u64;
        let v = if (z & bb).count_ones().is_multiple_of(2) {
            *a
        } else {
            -*a
        };
        out[(bb ^ x) as usize] = v * ph;
    }
    out
}

/// A normalized pure state on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes whose squared norm is within [`NORM_TOL`] of one.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n = Self::qubits_for_len(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { n, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n = Self::qubits_for_len(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if norm.is_nan() || norm <= 0.0 || norm.is_infinite() {
            return Err(Error::NotNormalized(norm));
        }
        let s = 1.0 / libm::sqrt(norm);
        for a in &mut amps {
            *a *= s;
        }
        Ok(StateVector { n, amps })
    }

    fn qubits_for_len(len: usize) -> Result<usize> {
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(2),
                found: len,
            });
        }
        let n = len.trailing_zeros() as usize;
        guard_state_qubits(n)?;
        Ok(n)
    }

    pub(crate) fn from_raw(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        StateVector { n, amps }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange {
                name: "qubit count",
                value: 0.0,
            });
        }
        guard_state_qubits(n)?;
        if index >= 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: index,
            });
        }
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[index] = c(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self ⊗ other`, with `self` on the high qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        guard_state_qubits(self.n + other.n)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector {
            n: self.n + other.n,
            amps,
        })
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::InvalidQubit {
                qubit: q,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn apply_h(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1 << q;
        let s = core::f64::consts::FRAC_1_SQRT_2;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                let a0 = self.amps[b];
                let a1 = self.amps[b | bit];
                self.amps[b] = (a0 + a1) * s;
                self.amps[b | bit] = (a0 - a1) * s;
            }
        }
        Ok(())
    }

    /// Phase gate `diag(1, i)`.
    pub fn apply_s(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1 << q;
        for (b, a) in self.amps.iter_mut().enumerate() {
            if b & bit != 0 {
                *a *= c(0.0, 1.0);
            }
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::DuplicateQubit(control));
        }
        let (cb, tb) = (1 << control, 1 << target);
        for b in 0..self.amps.len() {
            if b & cb != 0 && b & tb == 0 {
                self.amps.swap(b, b | tb);
            }
        }
        Ok(())
    }

    /// Reduced density matrix on `keep`; kept qubits retain their relative order.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::DegenerateSplit);
        }
        check_qubit_set(keep, self.n)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        let traced: Vec<usize> = (0..self.n).filter(|q| !keep_sorted.contains(q)).collect();
        let dk = 1usize << keep_sorted.len();
        guard_density_dim(dk)?;
        let dt = 1usize << traced.len();
        let sk: Vec<usize> = (0..dk).map(|a| scatter(a, &keep_sorted)).collect();
        let st: Vec<usize> = (0..dt).map(|t| scatter(t, &traced)).collect();
        let mut data = vec![c(0.0, 0.0); dk * dk];
        for &toff in &st {
            for a in 0..dk {
                let va = self.amps[sk[a] | toff];
                if va == c(0.0, 0.0) {
                    continue;
                }
                for b in 0..dk {
                    data[a * dk + b] += va * self.amps[sk[b] | toff].conj();
                }
            }
        }
        Ok(DensityMatrix {
            n: keep_sorted.len(),
            dim: dk,
            data,
        })
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        guard_density_dim(self.dim())?;
        Ok(DensityMatrix::from_pure_unchecked(self))
    }
}

/// `ψ^{⊗α}` with copy 1 on the highest qubits.
pub fn tensor_power(psi: &StateVector, alpha: usize) -> Result<StateVector> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha { alpha, min: 1 });
    }
    guard_state_qubits(psi.n * alpha)?;
    let mut out = psi.clone();
    for _ in 1..alpha {
        out = out.tensor(psi)?;
    }
    Ok(out)
}

/// Hadamard on each target qubit.
pub fn hadamard_layer(psi: &StateVector, targets: &[usize]) -> Result<StateVector> {
    check_qubit_set(targets, psi.n)?;
    let mut out = psi.clone();
    for &q in targets {
        out.apply_h(q)?;
    }
    Ok(out)
}

/// Applies `P^{⊗blocks}` where the state is `blocks` consecutive registers of
/// `p.num_qubits()` qubits.
pub fn apply_pauli_power(
    p: &crate::pauli::PauliString,
    psi: &StateVector,
    blocks: usize,
) -> Result<StateVector> {
    let n = p.num_qubits();
    if psi.n != n * blocks {
        return Err(Error::DimensionMismatch {
            expected: n * blocks,
            found: psi.n,
        });
    }
    let (mut x, mut z) = (0u64, 0u64);
    for b in 0..blocks {
        x |= p.x_bits() << (b * n);
        z |= p.z_bits() << (b * n);
    }
    let phase = ((p.phase_exp() as usize * blocks) % 4) as u8;
    Ok(StateVector::from_raw(
        psi.n,
        phased_permutation(&psi.amps, x, z, phase),
    ))
}

/// The controlled-Pauli-power unitary `Σ_j |j⟩⟨j| ⊗ P_j^{⊗α}`.
///
/// Bit `k` of the ancilla value `j` is read from `ancilla[k]`; qubit `q` of
/// copy `b` is `targets[b][q]`. `j` is interpreted as a canonical
/// [`PauliIndex`](crate::pauli::PauliIndex) on `n = ancilla.len() / 2` qubits.
pub fn controlled_pauli_power(
    psi: &StateVector,
    ancilla: &[usize],
    targets: &[Vec<usize>],
) -> Result<StateVector> {
    guard_state_qubits(psi.n)?;
    if ancilla.is_empty() || !ancilla.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: 2 * targets.first().map_or(1, |t| t.len()),
            found: ancilla.len(),
        });
    }
    let n = ancilla.len() / 2;
    let mut all: Vec<usize> = ancilla.to_vec();
    for block in targets {
        if block.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: block.len(),
            });
        }
        all.extend_from_slice(block);
    }
    check_qubit_set(&all, psi.n)?;

    let alpha = targets.len();
    let count = 1usize << (2 * n);
    // Register-wide masks for every ancilla value.
    let mut masks = Vec::with_capacity(count);
    for j in 0..count {
        let p =
            crate::pauli::PauliString::from_index(n, crate::pauli::PauliIndex::new(n, j as u64)?)?;
        let (mut xm, mut zm) = (0usize, 0usize);
        for block in targets {
            xm |= scatter(p.x_bits() as usize, block);
            zm |= scatter(p.z_bits() as usize, block);
        }
        let phase = ((p.phase_exp() as usize * alpha) % 4) as u8;
        masks.push((xm, zm, i_pow(phase)));
    }

    let mut out = vec![c(0.0, 0.0); psi.dim()];
    for (b, a) in psi.amps.iter().enumerate() {
        if *a == c(0.0, 0.0) {
            continue;
        }
        let (xm, zm, ph) = masks[gather(b, ancilla)];
        let v = if (zm & b).count_ones() % 2 == 0 {
            *a
        } else {
            -*a
        };
        out[b ^ xm] = v * ph;
    }
    Ok(StateVector::from_raw(psi.n, out))
}

/// Applies a dense operator on an ordered qubit subset. `qubits[k]` carries
/// bit `k` of the operator's local index.
pub fn apply_dense_on_qubits(
    op: &[Complex64],
    qubits: &[usize],
    psi: &StateVector,
) -> Result<StateVector> {
    check_qubit_set(qubits, psi.n)?;
    let local = 1usize << qubits.len();
    if op.len() != local * local {
        return Err(Error::DimensionMismatch {
            expected: local * local,
            found: op.len(),
        });
    }
    let rest: Vec<usize> = (0..psi.n).filter(|q| !qubits.contains(q)).collect();
    let sl: Vec<usize> = (0..local).map(|v| scatter(v, qubits)).collect();
    let mut out = vec![c(0.0, 0.0); psi.dim()];
    let mut buf = vec![c(0.0, 0.0); local];
    for r in 0..(1usize << rest.len()) {
        let base = scatter(r, &rest);
        for (v, slot) in buf.iter_mut().enumerate() {
            *slot = psi.amps[base | sl[v]];
        }
        for row in 0..local {
            let mut acc = c(0.0, 0.0);
            for col in 0..local {
                acc += op[row * local + col] * buf[col];
            }
            out[base | sl[row]] = acc;
        }
    }
    Ok(StateVector::from_raw(psi.n, out))
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace; positivity is checked through
    /// [`DensityMatrix::min_eigenvalue`] where it matters.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << n;
        guard_density_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        let rho = DensityMatrix { n, dim, data };
        if !rho.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::InvalidDensityMatrix("not Hermitian"));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::InvalidDensityMatrix("trace is not one"));
        }
        Ok(rho)
    }

    /// Like [`DensityMatrix::new`], additionally rejecting eigenvalues below
    /// `-PSD_TOL`.
    pub fn new_checked(n: usize, data: Vec<Complex64>) -> Result<Self> {
        let rho = Self::new(n, data)?;
        if rho.min_eigenvalue() < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix("negative eigenvalue"));
        }
        Ok(rho)
    }

    pub(crate) fn from_raw(n: usize, data: Vec<Complex64>) -> Self {
        DensityMatrix {
            n,
            dim: 1 << n,
            data,
        }
    }

    fn from_pure_unchecked(psi: &StateVector) -> Self {
        let dim = psi.dim();
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = psi.amps[i] * psi.amps[j].conj();
            }
        }
        DensityMatrix {
            n: psi.n,
            dim,
            data,
        }
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        psi.to_density()
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let dim = 1usize << n;
        guard_density_dim(dim)?;
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c(1.0 / dim as f64, 0.0);
        }
        Ok(DensityMatrix { n, dim, data })
    }

    /// Convex combination `Σ w_k ρ_k`; weights must sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or(Error::InvalidDensityMatrix("empty mixture"))?;
        let (n, dim) = (first.1.n, first.1.dim);
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for (w, rho) in parts {
            if rho.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: rho.n,
                });
            }
            for (d, v) in data.iter_mut().zip(&rho.data) {
                *d += v * *w;
            }
        }
        Self::new(n, data)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in i..self.dim {
                if (self.data[i * self.dim + j] - self.data[j * self.dim + i].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// `tr[ρ²]`, computed as `Σ |ρ_ij|²`.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `tr[ρσ]`.
    pub fn overlap(&self, other: &DensityMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let d = self.dim;
        let mut acc = c(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.data[i * d + j] * other.data[j * d + i];
            }
        }
        Ok(acc.re)
    }

    /// Eigenvalues, nonincreasing.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.data, self.dim)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// `self ⊗ other`, with `self` on the high qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let dim = self.dim * other.dim;
        guard_density_dim(dim)?;
        let data = crate::math::kron(&self.data, self.dim, &other.data, other.dim);
        Ok(DensityMatrix {
            n: self.n + other.n,
            dim,
            data,
        })
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::DegenerateSplit);
        }
        check_qubit_set(keep, self.n)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        let traced: Vec<usize> = (0..self.n).filter(|q| !keep_sorted.contains(q)).collect();
        let dk = 1usize << keep_sorted.len();
        let sk: Vec<usize> = (0..dk).map(|a| scatter(a, &keep_sorted)).collect();
        let st: Vec<usize> = (0..1usize << traced.len())
            .map(|t| scatter(t, &traced))
            .collect();
        let mut data = vec![c(0.0, 0.0); dk * dk];
        for a in 0..dk {
            for b in 0..dk {
                let mut acc = c(0.0, 0.0);
                for &t in &st {
                    acc += self.data[(sk[a] | t) * self.dim + (sk[b] | t)];
                }
                data[a * dk + b] = acc;
            }
        }
        Ok(DensityMatrix {
            n: keep_sorted.len(),
            dim: dk,
            data,
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Two complementary, non-empty qubit sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteSplit {
    subsystem_a: Vec<usize>,
    subsystem_b: Vec<usize>,
}

impl BipartiteSplit {
    /// Side A is `subsystem_a`; side B is its complement in `0..n`.
    pub fn new(n: usize, subsystem_a: &[usize]) -> Result<Self> {
        check_qubit_set(subsystem_a, n)?;
        let mut a = subsystem_a.to_vec();
        a.sort_unstable();
        let b: Vec<usize> = (0..n).filter(|q| !a.contains(q)).collect();
        if a.is_empty() || b.is_empty() {
            return Err(Error::DegenerateSplit);
        }
        Ok(BipartiteSplit {
            subsystem_a: a,
            subsystem_b: b,
        })
    }

    pub fn subsystem_a(&self) -> &[usize] {
        &self.subsystem_a
    }

    pub fn subsystem_b(&self) -> &[usize] {
        &self.subsystem_b
    }

    pub fn swapped(&self) -> BipartiteSplit {
        BipartiteSplit {
            subsystem_a: self.subsystem_b.clone(),
            subsystem_b: self.subsystem_a.clone(),
        }
    }
}

/// Schmidt coefficients (eigenvalues of a reduced state), nonincreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    lambdas: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn total(&self) -> f64 {
        self.lambdas.iter().sum()
    }
}

pub fn schmidt_spectrum(psi: &StateVector, split: &BipartiteSplit) -> Result<SchmidtSpectrum> {
    if split.subsystem_a.iter().chain(&split.subsystem_b).count() != psi.n {
        return Err(Error::DimensionMismatch {
            expected: psi.n,
            found: split.subsystem_a.len() + split.subsystem_b.len(),
        });
    }
    let rho = psi.reduced(&split.subsystem_a)?;
    // roundoff can push zero eigenvalues slightly negative
    let lambdas = rho
        .eigenvalues()
        .into_iter()
        .map(|l| l.clamp(0.0, 1.0))
        .collect();
    Ok(SchmidtSpectrum { lambdas })
}

/// `E_β = (1-β)^{-1} ln Σ λ_i^β`.
pub fn renyi_entanglement(spectrum: &SchmidtSpectrum, beta: f64) -> Result<f64> {
    if beta.is_nan() || beta <= 0.0 || beta == 1.0 || beta.is_infinite() {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
        });
    }
    let s: f64 = spectrum
        .lambdas
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| libm::pow(l, beta))
        .sum();
    let e = libm::log(s) / (1.0 - beta);
    Ok(if e < 0.0 && e > -1e-15 { 0.0 } else { e })
}
