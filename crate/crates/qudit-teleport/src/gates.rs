//! Matrix-free kernels for every unitary in the scheme.
//!
//! All kernels walk the flat amplitude vector with stride arithmetic and
//! touch each amplitude once per phase or permutation step; no gate matrix
//! is ever materialized here (dense forms live in [`crate::oracle`]).
//!
//! Sign convention: the forward qudit transform and the joint C⊗A
//! transformation both use the phase e^{+i·2πmj/S}; the Bob correction
//! undoes it with the conjugate phase.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::hilbert::{PureState, Register, SystemShape};

/// Symbolic description of one gate and the subsystems it touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateSpec {
    /// Discrete Fourier transform on the qudit C.
    DftS,
    /// Conjugate transpose of [`GateSpec::DftS`].
    DftSInverse,
    /// Two-body gate XOR-ing bit k of the qudit label into qubit A_k.
    CtrlXor(usize),
    /// The joint C⊗A transformation applied in one scatter pass.
    UAcDirect,
    /// The joint C⊗A transformation as (Π U_Ck)·DFT_S·(Π U_Ck).
    UAcDecomposed,
    /// Bob's recovery unitary for the classical message (j, n): the XOR
    /// permutation |b⟩⟩ → |b ⊕ n ⊕ j⟩⟩ followed by the phase e^{-i·2πbj/S}.
    BobCorrection { j: usize, n: usize },
}

impl GateSpec {
    /// The smallest register whose states this gate acts on. Dense matrix
    /// construction enumerates exactly this register's basis.
    pub fn register(&self) -> Register {
        match self {
            GateSpec::DftS | GateSpec::DftSInverse => Register::Qudit,
            GateSpec::CtrlXor(_) | GateSpec::UAcDirect | GateSpec::UAcDecomposed => {
                Register::QuditAlice
            }
            GateSpec::BobCorrection { .. } => Register::Bob,
        }
    }

    /// Check the gate's parameters against a shape.
    pub fn validate(&self, shape: &SystemShape) -> Result<()> {
        match *self {
            GateSpec::CtrlXor(k) if k >= shape.qubit_count() => Err(Error::IndexOutOfRange {
                name: "k",
                value: k,
                bound: shape.qubit_count(),
            }),
            GateSpec::BobCorrection { j, .. } if j >= shape.s_level() => {
                Err(Error::IndexOutOfRange {
                    name: "j",
                    value: j,
                    bound: shape.s_level(),
                })
            }
            GateSpec::BobCorrection { n, .. } if n >= shape.n_dim() => {
                Err(Error::IndexOutOfRange {
                    name: "n",
                    value: n,
                    bound: shape.n_dim(),
                })
            }
            _ => Ok(()),
        }
    }
}

/// Apply a gate described by a [`GateSpec`] to a state on the matching register.
pub fn apply_gate(spec: &GateSpec, state: &PureState) -> Result<PureState> {
    spec.validate(state.shape())?;
    match *spec {
        GateSpec::DftS => apply_dft_qudit(state, false),
        GateSpec::DftSInverse => apply_dft_qudit(state, true),
        GateSpec::CtrlXor(k) => apply_ctrl_xor(state, k),
        GateSpec::UAcDirect => apply_u_ac_direct(state),
        GateSpec::UAcDecomposed => apply_u_ac_decomposed(state),
        GateSpec::BobCorrection { j, n } => bob_correction(state, j, n),
    }
}

/// The basis label selected by the XOR rule: bit k of the result is
/// n_k ⊕ j_k ⊕ m_k, i.e. the whole-word XOR n ⊕ j ⊕ m.
pub fn f_index(shape: &SystemShape, n: usize, j: usize, m: usize) -> Result<usize> {
    if n >= shape.n_dim() {
        return Err(Error::IndexOutOfRange {
            name: "n",
            value: n,
            bound: shape.n_dim(),
        });
    }
    if j >= shape.s_level() {
        return Err(Error::IndexOutOfRange {
            name: "j",
            value: j,
            bound: shape.s_level(),
        });
    }
    if m >= shape.s_level() {
        return Err(Error::IndexOutOfRange {
            name: "m",
            value: m,
            bound: shape.s_level(),
        });
    }
    Ok(n ^ j ^ m)
}

/// e^{i·2πmj/S}, reduced mod S before the trig call so large products do not
/// lose precision.
pub(crate) fn qudit_phase(s_level: usize, m: usize, j: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * ((m * j) % s_level) as f64 / s_level as f64)
}

fn require_qudit(state: &PureState) -> Result<()> {
    if !state.register().contains_qudit() {
        return Err(Error::ShapeMismatch {
            expected: "a register containing the qudit C".into(),
            found: format!("{:?}", state.register()),
        });
    }
    Ok(())
}

fn require_qudit_alice(state: &PureState) -> Result<()> {
    if !(state.register().contains_qudit() && state.register().contains_alice()) {
        return Err(Error::ShapeMismatch {
            expected: "a register containing C and A".into(),
            found: format!("{:?}", state.register()),
        });
    }
    Ok(())
}

/// Transform each qudit component |m⟩ to (1/√S)·Σ_j e^{i·2πmj/S}|j⟩, leaving
/// every other subsystem untouched. The inverse flag applies the conjugate
/// transpose.
pub fn apply_dft_qudit(state: &PureState, inverse: bool) -> Result<PureState> {
    require_qudit(state)?;
    let shape = *state.shape();
    let s = shape.s_level();
    let sub = state.dim() / s;
    let scale = 1.0 / (s as f64).sqrt();
    let src = state.amplitudes();
    let mut out = vec![Complex64::ZERO; state.dim()];
    for m in 0..s {
        for j in 0..s {
            let phase = if inverse {
                qudit_phase(s, m, j).conj()
            } else {
                qudit_phase(s, m, j)
            } * scale;
            let (src_base, dst_base) = (m * sub, j * sub);
            for r in 0..sub {
                out[dst_base + r] += phase * src[src_base + r];
            }
        }
    }
    Ok(PureState::from_parts(shape, state.register(), out))
}

/// XOR bit k of the qudit label into qubit A_k: a pure permutation of the
/// amplitude vector, no arithmetic on the values.
pub fn apply_ctrl_xor(state: &PureState, k: usize) -> Result<PureState> {
    require_qudit_alice(state)?;
    let shape = *state.shape();
    if k >= shape.qubit_count() {
        return Err(Error::IndexOutOfRange {
            name: "k",
            value: k,
            bound: shape.qubit_count(),
        });
    }
    let n_dim = shape.n_dim();
    let tail = state.register().tail_dim(&shape);
    let mut out = state.amplitudes().to_vec();
    for m in 0..shape.s_level() {
        if (m >> k) & 1 == 0 {
            continue;
        }
        for n in 0..n_dim {
            if (n >> k) & 1 == 1 {
                continue;
            }
            let a = (m * n_dim + n) * tail;
            let b = (m * n_dim + (n | (1 << k))) * tail;
            for t in 0..tail {
                out.swap(a + t, b + t);
            }
        }
    }
    Ok(PureState::from_parts(shape, state.register(), out))
}

/// One-pass form of the joint transformation: each source component (m, n)
/// scatters to the S targets (j, n ⊕ j ⊕ m) with phase e^{i·2πmj/S}/√S.
pub fn apply_u_ac_direct(state: &PureState) -> Result<PureState> {
    require_qudit_alice(state)?;
    let shape = *state.shape();
    let s = shape.s_level();
    let n_dim = shape.n_dim();
    let tail = state.register().tail_dim(&shape);
    let scale = 1.0 / (s as f64).sqrt();
    let src = state.amplitudes();
    let mut out = vec![Complex64::ZERO; state.dim()];
    for m in 0..s {
        for j in 0..s {
            let phase = qudit_phase(s, m, j) * scale;
            for n in 0..n_dim {
                let src_base = (m * n_dim + n) * tail;
                let dst_base = (j * n_dim + (n ^ j ^ m)) * tail;
                for t in 0..tail {
                    out[dst_base + t] += phase * src[src_base + t];
                }
            }
        }
    }
    Ok(PureState::from_parts(shape, state.register(), out))
}

/// The same transformation built from its two-body pieces: the full row of
/// controlled-XOR gates, the qudit transform, then the row again. Products
/// are read right to left, so the rightmost row acts first; the row's
/// internal order is immaterial because its factors commute.
pub fn apply_u_ac_decomposed(state: &PureState) -> Result<PureState> {
    require_qudit_alice(state)?;
    let mut current = apply_ctrl_xor_row(state)?;
    current = apply_dft_qudit(&current, false)?;
    apply_ctrl_xor_row(&current)
}

fn apply_ctrl_xor_row(state: &PureState) -> Result<PureState> {
    let mut current = apply_ctrl_xor(state, 0)?;
    for k in 1..state.shape().qubit_count() {
        current = apply_ctrl_xor(&current, k)?;
    }
    Ok(current)
}

/// Bob's recovery unitary for the message (j, n): the XOR permutation
/// |b⟩⟩ → |b ⊕ n ⊕ j⟩⟩ brings amplitude α_m home to |m⟩⟩, then the diagonal
/// phase e^{-i·2πbj/S} cancels the transform phase on every label b < N.
pub fn bob_correction(state: &PureState, j: usize, n: usize) -> Result<PureState> {
    if state.register() != Register::Bob {
        return Err(Error::ShapeMismatch {
            expected: "the Bob register".into(),
            found: format!("{:?}", state.register()),
        });
    }
    let shape = *state.shape();
    if j >= shape.s_level() {
        return Err(Error::IndexOutOfRange {
            name: "j",
            value: j,
            bound: shape.s_level(),
        });
    }
    if n >= shape.n_dim() {
        return Err(Error::IndexOutOfRange {
            name: "n",
            value: n,
            bound: shape.n_dim(),
        });
    }
    let mask = n ^ j;
    let src = state.amplitudes();
    let mut out = vec![Complex64::ZERO; state.dim()];
    for (b, amp) in src.iter().enumerate() {
        out[b ^ mask] = *amp;
    }
    for (b, amp) in out.iter_mut().enumerate() {
        *amp *= qudit_phase(shape.s_level(), b, j).conj();
    }
    Ok(PureState::from_parts(shape, state.register(), out))
}
