//! Symplectic n-qubit Pauli strings with exact phase tracking.
//!
//! A string is stored as `i^phase · X^x · Z^z`, where bit `q` of the `x` and `z`
//! masks acts on qubit `q` (bit `q` of a computational basis index). The
//! Hermitian single-qubit `Y` is therefore `i·X·Z`, i.e. phase exponent 1 with
//! both bits set.
//!
//! Canonical enumeration packs the x-mask in the low `n` bits of the index and
//! the z-mask in the high `n` bits, so for one qubit the order is `I, X, Z, Y`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{phased_permutation, StateVector};

/// Largest qubit count accepted by the single-string operations.
pub const MAX_PAULI_QUBITS: usize = 12;

/// Imaginary residual tolerated in an expectation value before it is treated
/// as an internal error.
pub const EXPVAL_IMAG_TOL: f64 = 1e-10;

/// Position of a Hermitian Pauli string in the canonical enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliIndex(u64);

impl PauliIndex {
    pub fn new(n: usize, value: u64) -> Result<Self> {
        check_qubits(n)?;
        let count = 1u64 << (2 * n);
        if value >= count {
            return Err(Error::DimensionMismatch {
                expected: count as usize,
                found: value as usize,
            });
        }
        Ok(PauliIndex(value))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "qubit count",
            value: 0.0,
        });
    }
    if n > MAX_PAULI_QUBITS {
        return Err(Error::SizeGuard {
            what: "pauli string qubits",
            requested: n,
            limit: MAX_PAULI_QUBITS,
        });
    }
    Ok(())
}

#[inline]
fn y_count(x: u64, z: u64) -> u8 {
    ((x & z).count_ones() % 4) as u8
}

impl PauliString {
    /// Raw constructor: the operator `i^phase_exp · X^x_bits · Z^z_bits`.
    pub fn new(n: usize, x_bits: u64, z_bits: u64, phase_exp: u8) -> Result<Self> {
        check_qubits(n)?;
        let mask = (1u64 << n) - 1;
        if x_bits & !mask != 0 || z_bits & !mask != 0 {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: (64 - (x_bits | z_bits).leading_zeros()) as usize,
            });
        }
        Ok(PauliString {
            n,
            x: x_bits,
            z: z_bits,
            phase: phase_exp % 4,
        })
    }

    /// The Hermitian string with the given masks (each `Y` carries its `i`).
    pub fn hermitian(n: usize, x_bits: u64, z_bits: u64) -> Result<Self> {
        Self::new(n, x_bits, z_bits, y_count(x_bits, z_bits))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, 0, 0, 0)
    }

    pub fn from_index(n: usize, index: PauliIndex) -> Result<Self> {
        check_qubits(n)?;
        let mask = (1u64 << n) - 1;
        let v = index.value();
        if v >> (2 * n) != 0 {
            return Err(Error::DimensionMismatch {
                expected: 1 << (2 * n),
                found: v as usize,
            });
        }
        Self::hermitian(n, v & mask, (v >> n) & mask)
    }

    /// Parses a label such as `"XIZ"`. The leftmost character is the most
    /// significant qubit, matching the Kronecker order of dense matrices.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.chars().count();
        check_qubits(n)?;
        let (mut x, mut z) = (0u64, 0u64);
        for (pos, c) in label.chars().enumerate() {
            let q = n - 1 - pos;
            match c {
                'I' => {}
                'X' => x |= 1 << q,
                'Z' => z |= 1 << q,
                'Y' => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                _ => return Err(Error::Unsupported("pauli label must use only I, X, Y, Z")),
            }
        }
        Self::hermitian(n, x, z)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn x_bits(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn z_bits(&self) -> u64 {
        self.z
    }

    #[inline]
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    /// Index of the Hermitian string with the same masks; the phase is dropped.
    #[inline]
    pub fn index(&self) -> PauliIndex {
        PauliIndex(self.x | (self.z << self.n))
    }

    /// Phase of this operator relative to the Hermitian string with the same
    /// masks, as an exponent of `i`.
    #[inline]
    pub fn relative_phase(&self) -> u8 {
        (self.phase + 4 - y_count(self.x, self.z)) % 4
    }

    /// The adjoint equals the operator iff `phase ≡ |x & z| (mod 2)`.
    pub fn is_hermitian(&self) -> bool {
        (self.phase % 2) == (y_count(self.x, self.z) % 2)
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// The same masks with phase chosen to make the string Hermitian.
    pub fn without_phase(&self) -> PauliString {
        PauliString {
            phase: y_count(self.x, self.z),
            ..*self
        }
    }

    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        // Z^za X^xb = (-1)^{|za & xb|} X^xb Z^za
        let swap_sign = ((self.z & other.x).count_ones() % 2) as u8 * 2;
        Ok(PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + swap_sign) % 4,
        })
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: psi.num_qubits(),
            });
        }
        let amps = phased_permutation(psi.amplitudes(), self.x, self.z, self.phase);
        Ok(StateVector::from_raw(self.n, amps))
    }

    /// `⟨ψ|P|ψ⟩`, which must be real up to [`EXPVAL_IMAG_TOL`].
    pub fn expval(&self, psi: &StateVector) -> Result<f64> {
        if psi.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: psi.num_qubits(),
            });
        }
        let amps = psi.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, a) in amps.iter().enumerate() {
            let b = b as u64;
            let target = (b ^ self.x) as usize;
            let sign = if (self.z & b).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            acc += amps[target].conj() * a * sign;
        }
        let value = acc * crate::math::i_pow(self.phase);
        if value.im.abs() > EXPVAL_IMAG_TOL {
            return Err(Error::ImaginaryResidual(value.im));
        }
        Ok(value.re)
    }

    /// Dense `2^n × 2^n` matrix in row-major order.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let dim = 1usize << self.n;
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); dim * dim];
        let phase = crate::math::i_pow(self.phase);
        for b in 0..dim as u64 {
            let sign = if (self.z & b).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            out[((b ^ self.x) as usize) * dim + b as usize] = phase * sign;
        }
        out
    }

    pub fn label(&self) -> String {
        let mut s = String::with_capacity(self.n);
        for q in (0..self.n).rev() {
            let c = match ((self.x >> q) & 1, (self.z >> q) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            };
            s.push(c);
        }
        s
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.relative_phase() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{}{}", prefix, self.label())
    }
}

/// All `4^n` Hermitian strings in canonical order; index 0 is the identity.
pub fn enumerate_paulis(n: usize) -> Result<Vec<PauliString>> {
    check_qubits(n)?;
    let count = 1u64 << (2 * n);
    (0..count)
        .map(|v| PauliString::from_index(n, PauliIndex(v)))
        .collect()
}

pub fn pauli_mul(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    a.mul(b)
}

pub fn apply_pauli(p: &PauliString, psi: &StateVector) -> Result<StateVector> {
    p.apply(psi)
}

pub fn expval(p: &PauliString, psi: &StateVector) -> Result<f64> {
    p.expval(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{c, dense_matmul};
    use alloc::{format, vec};

    fn kron(a: &[Complex64], da: usize, b: &[Complex64], db: usize) -> Vec<Complex64> {
        let d = da * db;
        let mut out = vec![c(0.0, 0.0); d * d];
        for i in 0..da {
            for j in 0..da {
                for k in 0..db {
                    for l in 0..db {
                        out[(i * db + k) * d + j * db + l] = a[i * da + j] * b[k * db + l];
                    }
                }
            }
        }
        out
    }

    fn single(label: char) -> Vec<Complex64> {
        match label {
            'I' => vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            'X' => vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            'Y' => vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
            _ => vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        }
    }

    /// Dense matrix assembled from textbook 2×2 matrices, independent of the
    /// bitmask representation.
    fn dense_from_label(label: &str) -> Vec<Complex64> {
        let mut acc = vec![c(1.0, 0.0)];
        let mut dim = 1;
        for ch in label.chars() {
            acc = kron(&acc, dim, &single(ch), 2);
            dim *= 2;
        }
        acc
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn single_qubit_enumeration_order() {
        let ps = enumerate_paulis(1).unwrap();
        let labels: Vec<_> = ps.iter().map(|p| p.label()).collect();
        assert_eq!(labels, ["I", "X", "Z", "Y"]);
        for p in &ps {
            assert!(p.is_hermitian());
            let sq = p.mul(p).unwrap();
            assert_eq!((sq.x_bits(), sq.z_bits(), sq.phase_exp()), (0, 0, 0));
        }
    }

    #[test]
    fn two_qubit_count_and_distinct() {
        let ps = enumerate_paulis(2).unwrap();
        assert_eq!(ps.len(), 16);
        for (j, p) in ps.iter().enumerate() {
            assert_eq!(p.index().value(), j as u64);
            assert!(p.is_hermitian());
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(enumerate_paulis(0), Err(Error::OutOfRange { .. })));
        assert!(matches!(
            PauliString::identity(13),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn x_times_y_is_i_z() {
        let x = PauliString::from_label("X").unwrap();
        let y = PauliString::from_label("Y").unwrap();
        let p = pauli_mul(&x, &y).unwrap();
        assert_eq!(p.label(), "Z");
        assert_eq!(p.phase_exp(), 1);
        assert_eq!(p.relative_phase(), 1);
    }

    #[test]
    fn xz_times_yz_matches_dense() {
        let a = PauliString::from_label("XZ").unwrap();
        let b = PauliString::from_label("YZ").unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.label(), "ZI");
        assert_eq!(p.relative_phase(), 1);
        let dense = dense_matmul(&dense_from_label("XZ"), &dense_from_label("YZ"), 4);
        let expect: Vec<_> = dense_from_label("ZI")
            .iter()
            .map(|v| v * c(0.0, 1.0))
            .collect();
        assert!(max_diff(&dense, &expect) < 1e-12);
        assert!(max_diff(&p.to_dense(), &expect) < 1e-12);
    }

    #[test]
    fn products_match_dense_oracle() {
        for n in 1..=2 {
            let dim = 1 << n;
            let ps = enumerate_paulis(n).unwrap();
            for a in &ps {
                assert!(max_diff(&a.to_dense(), &dense_from_label(&a.label())) < 1e-12);
                for b in &ps {
                    let prod = a.mul(b).unwrap();
                    let dense = dense_matmul(
                        &dense_from_label(&a.label()),
                        &dense_from_label(&b.label()),
                        dim,
                    );
                    assert!(max_diff(&prod.to_dense(), &dense) < 1e-12, "{a} * {b}");
                }
            }
        }
    }

    #[test]
    fn product_phases_cancel_in_conjugate_order() {
        let ps = enumerate_paulis(2).unwrap();
        for a in &ps {
            for b in &ps {
                let ab = a.mul(b).unwrap();
                let ba = b.mul(a).unwrap();
                let r = ab.mul(&ba).unwrap();
                assert_eq!((r.x_bits(), r.z_bits(), r.phase_exp()), (0, 0, 0));
                // the two products share masks and carry conjugate phases
                assert_eq!(ab.index(), ba.index());
                assert_eq!((ab.relative_phase() + ba.relative_phase()) % 4, 0);
            }
        }
    }

    #[test]
    fn right_multiplication_permutes_the_set() {
        let ps = enumerate_paulis(2).unwrap();
        for b in &ps {
            let mut seen = vec![false; ps.len()];
            for a in &ps {
                seen[a.mul(b).unwrap().index().value() as usize] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn application_examples() {
        let zero = StateVector::basis(1, 0).unwrap();
        let x = PauliString::from_label("X").unwrap();
        let y = PauliString::from_label("Y").unwrap();
        let z = PauliString::from_label("Z").unwrap();
        let out = x.apply(&zero).unwrap();
        assert_eq!(out.amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        let out = y.apply(&zero).unwrap();
        assert_eq!(out.amplitudes(), &[c(0.0, 0.0), c(0.0, 1.0)]);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::new(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        let out = z.apply(&plus).unwrap();
        assert!((out.amplitudes()[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[1] - c(-h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let zero = StateVector::basis(1, 0).unwrap();
        let z = PauliString::from_label("Z").unwrap();
        assert_eq!(z.expval(&zero).unwrap(), 1.0);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::new(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        assert!(z.expval(&plus).unwrap().abs() < 1e-15);
        // dense oracle for ⟨ψ_{π/4}|X|ψ_{π/4}⟩ = Re(e^{iπ/4})
        let t = core::f64::consts::FRAC_PI_4;
        let psi = StateVector::new(vec![c(h, 0.0), c(h * libm::cos(t), h * libm::sin(t))]).unwrap();
        let x = PauliString::from_label("X").unwrap();
        let dense = dense_from_label("X");
        let amps = psi.amplitudes();
        let mut oracle = c(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                oracle += amps[i].conj() * dense[i * 2 + j] * amps[j];
            }
        }
        let v = x.expval(&psi).unwrap();
        assert!((v - oracle.re).abs() < 1e-12);
        assert!((v - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_expectation_is_rejected() {
        let plus = StateVector::new(vec![c(0.6, 0.0), c(0.8, 0.0)]).unwrap();
        let ix = PauliString::new(1, 1, 0, 1).unwrap();
        assert!(!ix.is_hermitian());
        assert!(matches!(ix.expval(&plus), Err(Error::ImaginaryResidual(_))));
    }

    #[test]
    fn mismatched_sizes() {
        let a = PauliString::identity(1).unwrap();
        let b = PauliString::identity(2).unwrap();
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
        let psi = StateVector::basis(2, 0).unwrap();
        assert!(a.apply(&psi).is_err());
    }

    #[test]
    fn display_shows_phase() {
        let x = PauliString::from_label("X").unwrap();
        let y = PauliString::from_label("Y").unwrap();
        assert_eq!(format!("{}", x.mul(&y).unwrap()), "+iZ");
        assert_eq!(format!("{}", y.mul(&x).unwrap()), "-iZ");
    }
}
