//! The teleportation pipeline, end to end.
//!
//! Four steps: share L EPR pairs, apply the joint C⊗A transformation at the
//! sending end, measure the single particles C and A_{L-1..0}, then correct
//! Bob's qubit row with the classical message (j, n). Measurement is modeled
//! by the exact joint outcome distribution over (j, n): the per-particle
//! projective measurements commute and factor, so nothing is lost by
//! collapsing them in one step. Exhaustive enumeration of all S·N outcomes is
//! the primary verification path; seeded sampling exercises the stochastic
//! interface.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gates;
use crate::hilbert::{PureState, Register, SystemShape};

/// Which realization of the joint transformation drives the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// One-pass scatter kernel.
    Direct,
    /// Two-body product form: XOR row, qudit transform, XOR row.
    Decomposed,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Direct => f.write_str("direct"),
            Mode::Decomposed => f.write_str("decomposed"),
        }
    }
}

/// How the measurement outcome is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeSelection {
    /// Produce one transcript per outcome, in (j, n) order.
    Exhaustive,
    /// Collapse onto one specific outcome.
    Forced { j: usize, n: usize },
    /// Draw `trials` outcomes; trial t uses the seed `mix_seed(seed, t)`.
    Sampled { seed: u64, trials: usize },
}

/// One measurement outcome (j, n) with its exact probability, computed from
/// the amplitudes rather than sampled. This pair is the classical message.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementRecord {
    /// Qudit C outcome, in [0, S).
    pub j: usize,
    /// Packed A-qubit outcomes, bit k ↔ A_k, in [0, N).
    pub n: usize,
    /// Σ_b |amplitude(j, n, b)|² over the post-transform state.
    pub probability: f64,
}

/// Full record of one teleportation run for one outcome.
#[derive(Debug, Clone)]
pub struct ProtocolTranscript {
    pub shape: SystemShape,
    pub input_amplitudes: Vec<Complex64>,
    pub mode: Mode,
    /// Per-trial sampling seed; absent for exhaustive and forced outcomes.
    pub seed: Option<u64>,
    pub record: MeasurementRecord,
    /// Bob's state right after Alice's measurement, before the correction.
    pub bob_raw: PureState,
    /// Bob's state after the recovery unitary for (j, n).
    pub bob_corrected: PureState,
    /// Overlap |⟨input|corrected⟩| in the embedded S-dimensional subspace.
    pub fidelity: f64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Per-trial seed derivation: element `trial_index` of the SplitMix64 stream
/// seeded with `base_seed`.
pub fn mix_seed(base_seed: u64, trial_index: u64) -> u64 {
    let mut z = base_seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(trial_index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A seeded point on the unit sphere of dimension `s_level`: complex standard
/// normals, then normalization.
pub fn random_amplitudes(s_level: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let amps: Vec<Complex64> = (0..s_level)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return amps.iter().map(|a| a / norm).collect();
        }
    }
}

/// The product of L EPR pairs: (1/√N)·Σ_n |n⟩⟩_A |n⟩⟩_B.
pub fn prepare_epr_pairs(shape: &SystemShape) -> Result<PureState> {
    let n_dim = shape.n_dim();
    let scale = 1.0 / (n_dim as f64).sqrt();
    let mut amps = vec![Complex64::ZERO; n_dim * n_dim];
    for n in 0..n_dim {
        amps[n * n_dim + n] = Complex64::new(scale, 0.0);
    }
    Ok(PureState::from_parts(*shape, Register::AliceBob, amps))
}

/// Wrap the S input amplitudes as the qudit state Σ_m α_m |m⟩_C.
pub fn prepare_input_state(
    shape: &SystemShape,
    amplitudes: &[Complex64],
    normalize: bool,
) -> Result<PureState> {
    if normalize {
        PureState::new_normalized(*shape, Register::Qudit, amplitudes.to_vec())
    } else {
        PureState::new(*shape, Register::Qudit, amplitudes.to_vec())
    }
}

/// Tensor the input qudit state with the EPR channel: amplitude at (m, n, b)
/// is α_m times the channel amplitude at (n, b).
pub fn assemble_initial_state(input: &PureState, epr: &PureState) -> Result<PureState> {
    if input.register() != Register::Qudit || input.shape() != epr.shape() {
        return Err(Error::ShapeMismatch {
            expected: "a qudit state matching the channel's shape".into(),
            found: format!("{:?}", input.register()),
        });
    }
    if epr.register() != Register::AliceBob {
        return Err(Error::ShapeMismatch {
            expected: "an A ⊗ B channel state".into(),
            found: format!("{:?}", epr.register()),
        });
    }
    let shape = *input.shape();
    let pair_dim = epr.dim();
    let mut amps = vec![Complex64::ZERO; shape.total_dim()];
    for (m, alpha) in input.amplitudes().iter().enumerate() {
        if *alpha == Complex64::ZERO {
            continue;
        }
        let base = m * pair_dim;
        for (nb, channel) in epr.amplitudes().iter().enumerate() {
            amps[base + nb] = alpha * channel;
        }
    }
    Ok(PureState::from_parts(shape, Register::Full, amps))
}

/// Apply the joint C⊗A transformation in the chosen realization.
pub fn apply_joint_transform(state: &PureState, mode: Mode) -> Result<PureState> {
    match mode {
        Mode::Direct => gates::apply_u_ac_direct(state),
        Mode::Decomposed => gates::apply_u_ac_decomposed(state),
    }
}

/// Exact joint distribution of Alice's measurement outcomes, in (j, n)
/// lexicographic order: probability(j, n) = Σ_b |amplitude(j, n, b)|².
pub fn outcome_distribution(state: &PureState) -> Result<Vec<MeasurementRecord>> {
    if state.register() != Register::Full {
        return Err(Error::ShapeMismatch {
            expected: "the full C ⊗ A ⊗ B register".into(),
            found: format!("{:?}", state.register()),
        });
    }
    let shape = state.shape();
    let n_dim = shape.n_dim();
    let amps = state.amplitudes();
    let mut records = Vec::with_capacity(shape.s_level() * n_dim);
    for j in 0..shape.s_level() {
        for n in 0..n_dim {
            let base = (j * n_dim + n) * n_dim;
            let probability: f64 = amps[base..base + n_dim].iter().map(|a| a.norm_sqr()).sum();
            records.push(MeasurementRecord { j, n, probability });
        }
    }
    Ok(records)
}

/// Project onto Alice's outcome (j, n) and return Bob's renormalized state.
pub fn collapse_on_outcome(state: &PureState, j: usize, n: usize) -> Result<PureState> {
    if state.register() != Register::Full {
        return Err(Error::ShapeMismatch {
            expected: "the full C ⊗ A ⊗ B register".into(),
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
    let n_dim = shape.n_dim();
    let base = (j * n_dim + n) * n_dim;
    let slice = &state.amplitudes()[base..base + n_dim];
    let probability: f64 = slice.iter().map(|a| a.norm_sqr()).sum();
    if probability <= 1e-15 {
        return Err(Error::ImpossibleOutcome { j, n, probability });
    }
    let scale = 1.0 / probability.sqrt();
    let amps = slice.iter().map(|a| a * scale).collect();
    Ok(PureState::from_parts(shape, Register::Bob, amps))
}

/// Draw one outcome by inverse-CDF over the records in (j, n) lexicographic
/// order. Deterministic for a given seed.
pub fn sample_outcome(distribution: &[MeasurementRecord], seed: u64) -> Result<MeasurementRecord> {
    if distribution.is_empty() {
        return Err(Error::MalformedDistribution {
            reason: "no outcomes".into(),
        });
    }
    let mut order: Vec<usize> = (0..distribution.len()).collect();
    order.sort_by_key(|&i| (distribution[i].j, distribution[i].n));
    let mut total = 0.0;
    for &i in &order {
        let p = distribution[i].probability;
        if !(0.0..=1.0 + 1e-9).contains(&p) {
            return Err(Error::MalformedDistribution {
                reason: format!("probability {p} outside [0, 1]"),
            });
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::MalformedDistribution {
            reason: format!("probabilities sum to {total}, not 1"),
        });
    }
    let u: f64 = ChaCha8Rng::seed_from_u64(seed).random();
    let mut cumulative = 0.0;
    for &i in &order {
        cumulative += distribution[i].probability;
        if u < cumulative {
            return Ok(distribution[i]);
        }
    }
    // u landed in the rounding gap past the last cumulative step.
    Ok(distribution[*order.last().expect("nonempty")])
}

/// Reinterpret a Bob-row state as a qudit state via the subspace map
/// |m⟩⟩_B ↔ |m⟩_C for m < S. Labels ≥ S must carry no amplitude.
pub fn embed_bob_state(state: &PureState) -> Result<PureState> {
    if state.register() != Register::Bob {
        return Err(Error::ShapeMismatch {
            expected: "the Bob register".into(),
            found: format!("{:?}", state.register()),
        });
    }
    let shape = *state.shape();
    let s = shape.s_level();
    let leak = state.amplitudes()[s..]
        .iter()
        .map(|a| a.norm())
        .fold(0.0, f64::max);
    if leak > 1e-12 {
        return Err(Error::SubspaceLeakage {
            max_amplitude: leak,
        });
    }
    let amps = state.amplitudes()[..s].to_vec();
    Ok(PureState::from_parts(shape, Register::Qudit, amps))
}

/// Bob's pre-message reduced density operator, as a row-major N×N matrix:
/// the partial trace of |Ψ⟩⟨Ψ| over C and A.
pub fn bob_reduced_density(state: &PureState) -> Result<Vec<Complex64>> {
    if state.register() != Register::Full {
        return Err(Error::ShapeMismatch {
            expected: "the full C ⊗ A ⊗ B register".into(),
            found: format!("{:?}", state.register()),
        });
    }
    let n_dim = state.shape().n_dim();
    let amps = state.amplitudes();
    let mut rho = vec![Complex64::ZERO; n_dim * n_dim];
    for block in amps.chunks_exact(n_dim) {
        for (row, a) in block.iter().enumerate() {
            for (col, b) in block.iter().enumerate() {
                rho[row * n_dim + col] += a * b.conj();
            }
        }
    }
    Ok(rho)
}

/// Run the full protocol and return one transcript per selected outcome,
/// ordered by (trial, j, n).
pub fn run_teleportation(
    shape: &SystemShape,
    amplitudes: &[Complex64],
    mode: Mode,
    outcome: OutcomeSelection,
) -> Result<Vec<ProtocolTranscript>> {
    let input = prepare_input_state(shape, amplitudes, false)?;
    let epr = prepare_epr_pairs(shape)?;
    let assembled = assemble_initial_state(&input, &epr)?;
    let transformed = apply_joint_transform(&assembled, mode)?;
    let distribution = outcome_distribution(&transformed)?;

    let selected: Vec<(MeasurementRecord, Option<u64>)> = match outcome {
        OutcomeSelection::Exhaustive => distribution.iter().map(|r| (*r, None)).collect(),
        OutcomeSelection::Forced { j, n } => {
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
            vec![(distribution[j * shape.n_dim() + n], None)]
        }
        OutcomeSelection::Sampled { seed, trials } => (0..trials)
            .map(|t| {
                let trial_seed = mix_seed(seed, t as u64);
                sample_outcome(&distribution, trial_seed).map(|r| (r, Some(trial_seed)))
            })
            .collect::<Result<_>>()?,
    };

    selected
        .into_iter()
        .map(|(record, seed)| {
            let bob_raw = collapse_on_outcome(&transformed, record.j, record.n)?;
            let bob_corrected = gates::bob_correction(&bob_raw, record.j, record.n)?;
            let embedded = embed_bob_state(&bob_corrected)?;
            let fidelity = input.fidelity(&embedded)?;
            Ok(ProtocolTranscript {
                shape: *shape,
                input_amplitudes: input.amplitudes().to_vec(),
                mode,
                seed,
                record,
                bob_raw,
                bob_corrected,
                fidelity,
            })
        })
        .collect()
}
