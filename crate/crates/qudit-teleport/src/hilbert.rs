//! The hybrid register and its state-vector primitives.
//!
//! The system is one S-level qudit C plus two rows of L qubits, Alice's
//! A_{L-1..0} and Bob's B_{L-1..0}. A composite basis label is the triple
//! (m, n, b): m indexes the qudit, n packs the A qubits and b packs the B
//! qubits, with particle k at bit position k (little-endian). Amplitudes are
//! stored with C slowest and B fastest: index = (m·N + n)·N + b.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on state-vector length: 2^26 amplitudes (~1 GiB of complex
/// doubles). Shape construction fails fast beyond it.
pub const DEFAULT_AMPLITUDE_CAP: usize = 1 << 26;

/// Norm tolerance for externally supplied amplitude vectors.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-9;

/// Norm tolerance for states produced inside the library.
pub const INTERNAL_NORM_TOLERANCE: f64 = 1e-12;

/// Dimensional skeleton of the system: S levels on the qudit, L EPR pairs,
/// N = 2^L basis states per qubit row, S·N·N amplitudes in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemShape {
    s_level: usize,
    qubit_count: usize,
    n_dim: usize,
    total_dim: usize,
}

/// Build a shape, defaulting the qubit count to the smallest L with 2^L ≥ S.
pub fn make_shape(s_level: usize, qubit_count: Option<usize>) -> Result<SystemShape> {
    make_shape_with_cap(s_level, qubit_count, DEFAULT_AMPLITUDE_CAP)
}

/// As [`make_shape`], with an explicit amplitude cap.
pub fn make_shape_with_cap(
    s_level: usize,
    qubit_count: Option<usize>,
    amplitude_cap: usize,
) -> Result<SystemShape> {
    if s_level < 2 {
        return Err(Error::InvalidDimension(s_level));
    }
    let qubit_count = qubit_count.unwrap_or_else(|| minimal_qubit_count(s_level));
    let n_dim = 1usize
        .checked_shl(u32::try_from(qubit_count).unwrap_or(u32::MAX))
        .ok_or(Error::CapacityExceeded {
            required: u128::MAX,
            cap: amplitude_cap,
        })?;
    if n_dim < s_level {
        return Err(Error::InsufficientQubits {
            s_level,
            qubit_count,
            n_dim,
        });
    }
    let total = s_level as u128 * n_dim as u128 * n_dim as u128;
    if total > amplitude_cap as u128 {
        return Err(Error::CapacityExceeded {
            required: total,
            cap: amplitude_cap,
        });
    }
    Ok(SystemShape {
        s_level,
        qubit_count,
        n_dim,
        total_dim: total as usize,
    })
}

/// Smallest L with 2^L ≥ s (equivalently, 2^(L-1) < s ≤ 2^L).
pub fn minimal_qubit_count(s_level: usize) -> usize {
    debug_assert!(s_level >= 2);
    (usize::BITS - (s_level - 1).leading_zeros()) as usize
}

impl SystemShape {
    /// Qudit dimension S.
    pub fn s_level(&self) -> usize {
        self.s_level
    }

    /// Number of EPR pairs L.
    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    /// N = 2^L, the dimension of one qubit row.
    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    /// S·N·N, the dimension of the full C ⊗ A ⊗ B space.
    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Flatten (m, n, b) to the composite index (m·N + n)·N + b.
    pub fn compose_index(&self, m: usize, n: usize, b: usize) -> Result<usize> {
        if m >= self.s_level {
            return Err(Error::IndexOutOfRange {
                name: "m",
                value: m,
                bound: self.s_level,
            });
        }
        if n >= self.n_dim {
            return Err(Error::IndexOutOfRange {
                name: "n",
                value: n,
                bound: self.n_dim,
            });
        }
        if b >= self.n_dim {
            return Err(Error::IndexOutOfRange {
                name: "b",
                value: b,
                bound: self.n_dim,
            });
        }
        Ok((m * self.n_dim + n) * self.n_dim + b)
    }

    /// Inverse of [`compose_index`](Self::compose_index).
    pub fn decompose_index(&self, idx: usize) -> Result<(usize, usize, usize)> {
        if idx >= self.total_dim {
            return Err(Error::IndexOutOfRange {
                name: "idx",
                value: idx,
                bound: self.total_dim,
            });
        }
        let b = idx % self.n_dim;
        let rest = idx / self.n_dim;
        let n = rest % self.n_dim;
        let m = rest / self.n_dim;
        Ok((m, n, b))
    }
}

/// The sub-register a state vector is defined on.
///
/// Indices follow the composite layout: within any register that contains
/// several parts, C varies slowest, then A, then B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Register {
    /// The qudit C alone (dimension S).
    Qudit,
    /// Bob's qubit row B alone (dimension N).
    Bob,
    /// C ⊗ A, the system Alice's joint transformation acts on (dimension S·N).
    QuditAlice,
    /// A ⊗ B, the EPR channel (dimension N·N).
    AliceBob,
    /// The full C ⊗ A ⊗ B system (dimension S·N·N).
    Full,
}

impl Register {
    /// Dimension of this register under the given shape.
    pub fn dim(&self, shape: &SystemShape) -> usize {
        match self {
            Register::Qudit => shape.s_level(),
            Register::Bob => shape.n_dim(),
            Register::QuditAlice => shape.s_level() * shape.n_dim(),
            Register::AliceBob => shape.n_dim() * shape.n_dim(),
            Register::Full => shape.total_dim(),
        }
    }

    /// Whether the register includes the qudit C.
    pub fn contains_qudit(&self) -> bool {
        matches!(
            self,
            Register::Qudit | Register::QuditAlice | Register::Full
        )
    }

    /// Whether the register includes Alice's qubit row.
    pub fn contains_alice(&self) -> bool {
        matches!(
            self,
            Register::QuditAlice | Register::AliceBob | Register::Full
        )
    }

    /// Number of basis labels that vary faster than the A row (1 unless the
    /// register also holds B).
    pub fn tail_dim(&self, shape: &SystemShape) -> usize {
        match self {
            Register::Full => shape.n_dim(),
            _ => 1,
        }
    }

    fn describe(&self, shape: &SystemShape) -> String {
        format!("{:?} (dim {})", self, self.dim(shape))
    }
}

/// A normalized state vector over one of the declared registers.
#[derive(Debug, Clone)]
pub struct PureState {
    shape: SystemShape,
    register: Register,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wrap an amplitude vector, requiring unit norm within 1e-9.
    pub fn new(shape: SystemShape, register: Register, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(shape, register, amplitudes, INPUT_NORM_TOLERANCE)
    }

    /// Wrap an amplitude vector of any nonzero norm, rescaling to unit norm.
    pub fn new_normalized(
        shape: SystemShape,
        register: Register,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let dim = register.dim(&shape);
        if amplitudes.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        let norm = l2_norm(&amplitudes);
        if norm < 1e-15 {
            return Err(Error::NotNormalized { norm });
        }
        let mut state = Self {
            shape,
            register,
            amplitudes,
        };
        state.rescale(1.0 / norm);
        Ok(state)
    }

    fn with_tolerance(
        shape: SystemShape,
        register: Register,
        amplitudes: Vec<Complex64>,
        tolerance: f64,
    ) -> Result<Self> {
        let dim = register.dim(&shape);
        if amplitudes.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        let norm = l2_norm(&amplitudes);
        if (norm - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized { norm });
        }
        let mut state = Self {
            shape,
            register,
            amplitudes,
        };
        // Absorb the residual so downstream states stay within 1e-12.
        state.rescale(1.0 / norm);
        Ok(state)
    }

    /// The computational basis state with the given flat index.
    pub fn basis(shape: SystemShape, register: Register, index: usize) -> Result<Self> {
        let dim = register.dim(&shape);
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                name: "basis index",
                value: index,
                bound: dim,
            });
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[index] = Complex64::ONE;
        Ok(Self {
            shape,
            register,
            amplitudes,
        })
    }

    /// Internal constructor for kernel outputs; debug-asserts normalization.
    pub(crate) fn from_parts(
        shape: SystemShape,
        register: Register,
        amplitudes: Vec<Complex64>,
    ) -> Self {
        debug_assert_eq!(amplitudes.len(), register.dim(&shape));
        debug_assert!((l2_norm(&amplitudes) - 1.0).abs() <= INTERNAL_NORM_TOLERANCE);
        Self {
            shape,
            register,
            amplitudes,
        }
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn register(&self) -> Register {
        self.register
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    fn rescale(&mut self, factor: f64) {
        for amp in &mut self.amplitudes {
            *amp *= factor;
        }
    }

    fn check_same_register(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape || self.register != other.register {
            return Err(Error::ShapeMismatch {
                expected: self.register.describe(&self.shape),
                found: other.register.describe(&other.shape),
            });
        }
        Ok(())
    }

    /// ⟨self|other⟩ = Σᵢ conj(selfᵢ)·otherᵢ.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.check_same_register(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|, insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner_product(other)?.norm())
    }

    /// Largest per-amplitude difference against another state.
    pub fn max_amplitude_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_register(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn l2_norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
