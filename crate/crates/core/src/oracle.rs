//! Dense density-matrix simulator, used only to check the closed-form fidelities.
//!
//! Qubit 0 is the most significant bit of a basis index. Sizes are capped at
//! [`MAX_QUBITS`]; this is a verification tool, not a simulator for scale.

use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

pub const MAX_QUBITS: usize = 6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single-qubit operator as a row-major 2x2 matrix.
pub type Gate = [[Complex64; 2]; 2];

pub const PAULI_X: Gate = [[ZERO, ONE], [ONE, ZERO]];
pub const PAULI_Y: Gate = [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]];
pub const PAULI_Z: Gate = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum OracleError {
    #[error("qubit count {0} outside 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("qubit {index} out of range for a {qubits}-qubit state")]
    QubitIndex { index: usize, qubits: usize },
    #[error("channel parameter {0} outside [0, 1]")]
    Parameter(f64),
    #[error("fidelity target is not a pure state")]
    NotPure,
    #[error("states have different sizes")]
    SizeMismatch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    fn zeros(qubits: usize) -> Result<Self, OracleError> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(OracleError::QubitCount(qubits));
        }
        let dim = 1 << qubits;
        Ok(Self { qubits, entries: alloc::vec![ZERO; dim * dim] })
    }

    /// Projector onto a pure state vector of length `2^qubits`.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self, OracleError> {
        let qubits = amplitudes.len().trailing_zeros() as usize;
        if !amplitudes.len().is_power_of_two() {
            return Err(OracleError::QubitCount(qubits));
        }
        let mut rho = Self::zeros(qubits)?;
        let dim = rho.dim();
        for r in 0..dim {
            for c in 0..dim {
                rho.entries[r * dim + c] = amplitudes[r] * amplitudes[c].conj();
            }
        }
        Ok(rho)
    }

    /// `(|0...0> + |1...1>) / sqrt 2`, for `2 <= qubits <= MAX_QUBITS`.
    pub fn ghz(qubits: usize) -> Result<Self, OracleError> {
        if qubits < 2 || qubits > MAX_QUBITS {
            return Err(OracleError::QubitCount(qubits));
        }
        let dim = 1 << qubits;
        let amp = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut psi = alloc::vec![ZERO; dim];
        psi[0] = amp;
        psi[dim - 1] = amp;
        Self::pure(&psi)
    }

    /// `1 / 2^qubits`.
    pub fn maximally_mixed(qubits: usize) -> Result<Self, OracleError> {
        let mut rho = Self::zeros(qubits)?;
        let dim = rho.dim();
        for i in 0..dim {
            rho.entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(rho)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Largest `|rho - rho^dagger|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Largest entry-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_qubit(&self, q: usize) -> Result<(), OracleError> {
        if q >= self.qubits {
            Err(OracleError::QubitIndex { index: q, qubits: self.qubits })
        } else {
            Ok(())
        }
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.qubits - 1 - q)
    }

    /// `U rho U^dagger` with `U` acting on qubit `q`.
    pub fn conjugate(&self, gate: &Gate, q: usize) -> Result<Self, OracleError> {
        self.check_qubit(q)?;
        let dim = self.dim();
        let mask = self.bit(q);
        let mut out = self.clone();
        for r in 0..dim {
            let rb = usize::from(r & mask != 0);
            for c in 0..dim {
                let cb = usize::from(c & mask != 0);
                let mut acc = ZERO;
                for a in 0..2 {
                    let ra = if a == 1 { r | mask } else { r & !mask };
                    for b in 0..2 {
                        let cbm = if b == 1 { c | mask } else { c & !mask };
                        acc += gate[rb][a] * self.get(ra, cbm) * gate[cb][b].conj();
                    }
                }
                out.entries[r * dim + c] = acc;
            }
        }
        Ok(out)
    }

    /// Partial transpose on qubit `q`.
    pub fn partial_transpose(&self, q: usize) -> Result<Self, OracleError> {
        self.check_qubit(q)?;
        let dim = self.dim();
        let mask = self.bit(q);
        let mut out = self.clone();
        for r in 0..dim {
            for c in 0..dim {
                let r2 = (r & !mask) | (c & mask);
                let c2 = (c & !mask) | (r & mask);
                out.entries[r * dim + c] = self.get(r2, c2);
            }
        }
        Ok(out)
    }

    fn combine(&self, terms: &[(f64, &Self)]) -> Self {
        let mut out = self.clone();
        for (i, e) in out.entries.iter_mut().enumerate() {
            *e = terms.iter().map(|(w, m)| m.entries[i] * *w).sum();
        }
        out
    }

    /// Depolarising channel `p rho + (1-p)/3 (X rho X + Y rho Y + Z rho Z)` on qubit `q`.
    pub fn depolarize(&self, q: usize, p: f64) -> Result<Self, OracleError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(OracleError::Parameter(p));
        }
        let x = self.conjugate(&PAULI_X, q)?;
        let y = self.conjugate(&PAULI_Y, q)?;
        let z = self.conjugate(&PAULI_Z, q)?;
        let w = (1.0 - p) / 3.0;
        Ok(self.combine(&[(p, self), (w, &x), (w, &y), (w, &z)]))
    }

    /// The same channel written as `(1+2p)/3 rho + 2(1-p)/3 PT_q(Y rho Y)`.
    pub fn depolarize_via_transpose(&self, q: usize, p: f64) -> Result<Self, OracleError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(OracleError::Parameter(p));
        }
        let flipped = self.conjugate(&PAULI_Y, q)?.partial_transpose(q)?;
        Ok(self.combine(&[((1.0 + 2.0 * p) / 3.0, self), (2.0 * (1.0 - p) / 3.0, &flipped)]))
    }

    /// `Tr(rho * target)` for a pure `target`.
    pub fn fidelity(&self, target: &Self) -> Result<f64, OracleError> {
        if self.qubits != target.qubits {
            return Err(OracleError::SizeMismatch);
        }
        let dim = self.dim();
        let mut purity = ZERO;
        let mut overlap = ZERO;
        for r in 0..dim {
            for c in 0..dim {
                purity += target.get(r, c) * target.get(c, r);
                overlap += self.get(r, c) * target.get(c, r);
            }
        }
        if (purity.re - 1.0).abs() > 1e-10 || (target.trace().re - 1.0).abs() > 1e-10 {
            return Err(OracleError::NotPure);
        }
        Ok(overlap.re)
    }
}

/// GHZ fidelity after one depolarising channel per qubit with `p = F_i`.
pub fn star_oracle(branch_fidelities: &[f64]) -> Result<f64, OracleError> {
    let target = DensityMatrix::ghz(branch_fidelities.len())?;
    let mut rho = target.clone();
    for (q, &f) in branch_fidelities.iter().enumerate() {
        rho = rho.depolarize(q, f)?;
    }
    rho.fidelity(&target)
}

/// GHZ fidelity under the tree-scheme channel placement: one channel per
/// non-initial terminal qubit, plus one channel on the initial qubit per
/// Steiner node. `terminal[initial]` is ignored.
pub fn tree_oracle(terminal: &[f64], steiner: &[f64], initial: usize) -> Result<f64, OracleError> {
    let target = DensityMatrix::ghz(terminal.len())?;
    if initial >= terminal.len() {
        return Err(OracleError::QubitIndex { index: initial, qubits: terminal.len() });
    }
    let mut rho = target.clone();
    for (q, &f) in terminal.iter().enumerate() {
        if q != initial {
            rho = rho.depolarize(q, f)?;
        }
    }
    for &f in steiner {
        rho = rho.depolarize(initial, f)?;
    }
    rho.fidelity(&target)
}
