//! Canonical machine-readable reports.
//!
//! Every command emits one JSON document with a fixed key order and every
//! float printed as `{:.16e}` (17 significant digits, enough to round-trip
//! an f64 exactly). Identical flags and seed therefore produce byte-identical
//! documents, with one deliberate exception: the wall-clock `elapsed_ms`
//! field, which is isolated on the last line so consumers can strip it
//! before diffing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use std::io;

use crate::error::{Error, Result};
use crate::oracle::{CheckResult, VerificationReport};
use crate::protocol::{Mode, ProtocolTranscript};

/// Report schema version, bumped on any breaking field change.
pub const SCHEMA_VERSION: &str = "1";

/// Pretty JSON with `{:.16e}` floats. Delegates all layout decisions to the
/// standard pretty formatter and only pins down how an f64 becomes text.
struct CanonicalFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl CanonicalFormatter<'_> {
    fn new() -> Self {
        CanonicalFormatter {
            inner: PrettyFormatter::new(),
        }
    }
}

impl Formatter for CanonicalFormatter<'_> {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        debug_assert!(value.is_finite());
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object_value(writer)
    }
}

/// Serialize any report as the canonical document, trailing newline included.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut serializer =
        serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter::new());
    value
        .serialize(&mut serializer)
        .map_err(|e| Error::Io(io::Error::other(e)))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serializer emits UTF-8"))
}

fn complex_pairs(amplitudes: &[Complex64]) -> Vec<[f64; 2]> {
    amplitudes.iter().map(|a| [a.re, a.im]).collect()
}

/// One measured outcome in a run report.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub j: usize,
    pub n: usize,
    pub probability: f64,
    pub fidelity: f64,
}

/// Report for the `run` command. Field order is the serialization order.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    pub s_level: usize,
    pub qubit_count: usize,
    pub n_dim: usize,
    pub mode: String,
    /// Seed consumed for randomness; null when the run used none
    /// (file-provided state with exhaustive or forced outcomes).
    pub seed: Option<u64>,
    pub input_amplitudes: Vec<[f64; 2]>,
    pub outcomes: Vec<RunOutcome>,
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn from_transcripts(
        transcripts: &[ProtocolTranscript],
        mode: Mode,
        seed: Option<u64>,
        elapsed_ms: f64,
    ) -> Self {
        let first = transcripts
            .first()
            .expect("a run produces at least one transcript");
        let shape = first.shape;
        let outcomes: Vec<RunOutcome> = transcripts
            .iter()
            .map(|t| RunOutcome {
                j: t.record.j,
                n: t.record.n,
                probability: t.record.probability,
                fidelity: t.fidelity,
            })
            .collect();
        let mean_fidelity =
            outcomes.iter().map(|o| o.fidelity).sum::<f64>() / outcomes.len() as f64;
        let min_fidelity = outcomes
            .iter()
            .map(|o| o.fidelity)
            .fold(f64::INFINITY, f64::min);
        RunReport {
            schema_version: SCHEMA_VERSION,
            s_level: shape.s_level(),
            qubit_count: shape.qubit_count(),
            n_dim: shape.n_dim(),
            mode: mode.to_string(),
            seed,
            input_amplitudes: complex_pairs(&first.input_amplitudes),
            outcomes,
            mean_fidelity,
            min_fidelity,
            elapsed_ms,
        }
    }
}

/// Report for the `verify` command.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema_version: &'static str,
    pub s_level: usize,
    pub qubit_count: usize,
    pub n_dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub dense_cap: usize,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    pub elapsed_ms: f64,
}

impl VerifyReport {
    pub fn from_verification(report: &VerificationReport, elapsed_ms: f64) -> Self {
        VerifyReport {
            schema_version: SCHEMA_VERSION,
            s_level: report.s_level,
            qubit_count: report.qubit_count,
            n_dim: report.n_dim,
            trials: report.trials,
            seed: report.seed,
            dense_cap: report.dense_cap,
            checks: report.checks.clone(),
            passed: report.passed,
            elapsed_ms,
        }
    }
}

/// Per-S entry of a sweep report.
#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub s_level: usize,
    pub qubit_count: usize,
    pub n_dim: usize,
    pub min_fidelity: f64,
    pub max_probability_deviation: f64,
    pub verify_passed: bool,
    pub passed: bool,
}

/// Report for the `sweep` command.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema_version: &'static str,
    pub s_min: usize,
    pub s_max: usize,
    pub mode: String,
    pub trials: usize,
    pub seed: u64,
    pub entries: Vec<SweepEntry>,
    pub passed: bool,
    pub elapsed_ms: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFileSchema {
    amplitudes: Vec<[f64; 2]>,
    #[serde(default)]
    normalize: bool,
}

/// Parsed contents of a `--state` input file.
#[derive(Debug, Clone, PartialEq)]
pub struct StateInput {
    pub amplitudes: Vec<Complex64>,
    pub normalize: bool,
}

/// Parse a state file: `{"amplitudes": [[re, im], ...]}` with an optional
/// `"normalize": true` to permit non-unit input.
pub fn parse_state_file(text: &str) -> Result<StateInput> {
    let schema: StateFileSchema = serde_json::from_str(text).map_err(|e| Error::StateFile {
        reason: e.to_string(),
    })?;
    if schema.amplitudes.is_empty() {
        return Err(Error::StateFile {
            reason: "amplitudes array is empty".into(),
        });
    }
    let amplitudes = schema
        .amplitudes
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    Ok(StateInput {
        amplitudes,
        normalize: schema.normalize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::make_shape;
    use crate::protocol::{run_teleportation, OutcomeSelection};

    #[test]
    fn floats_use_seventeen_significant_digits() {
        #[derive(Serialize)]
        struct Sample {
            x: f64,
        }
        let text = to_canonical_json(&Sample { x: 0.25 }).unwrap();
        assert!(text.contains("2.5000000000000000e-1"), "{text}");
    }

    #[test]
    fn float_round_trip_is_lossless() {
        #[derive(Serialize)]
        struct Sample {
            values: Vec<f64>,
        }
        let values = vec![
            1.0 / 3.0,
            0.1 + 0.2,
            1e-12,
            -1.0 / 12.0,
            std::f64::consts::FRAC_1_SQRT_2,
        ];
        let text = to_canonical_json(&Sample {
            values: values.clone(),
        })
        .unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        for (i, v) in values.iter().enumerate() {
            let back = parsed["values"][i].as_f64().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "value {i}");
        }
    }

    fn sample_run_report(elapsed_ms: f64) -> RunReport {
        let shape = make_shape(2, None).unwrap();
        let amps = [Complex64::ONE, Complex64::ZERO];
        let transcripts =
            run_teleportation(&shape, &amps, Mode::Direct, OutcomeSelection::Exhaustive).unwrap();
        RunReport::from_transcripts(&transcripts, Mode::Direct, None, elapsed_ms)
    }

    #[test]
    fn run_report_aggregates_fidelities() {
        let report = sample_run_report(1.5);
        assert_eq!(report.outcomes.len(), 4);
        assert_eq!(report.s_level, 2);
        assert_eq!(report.qubit_count, 1);
        assert_eq!(report.mode, "direct");
        assert!(report.min_fidelity <= report.mean_fidelity);
        assert!(report.min_fidelity >= 1.0 - 1e-10);
        assert_eq!(report.seed, None);
    }

    #[test]
    fn reports_are_byte_stable() {
        let a = to_canonical_json(&sample_run_report(1.5)).unwrap();
        let b = to_canonical_json(&sample_run_report(1.5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn elapsed_ms_sits_on_the_last_line() {
        let text = to_canonical_json(&sample_run_report(0.25)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(*lines.last().unwrap(), "}");
        assert!(lines[lines.len() - 2]
            .trim_start()
            .starts_with("\"elapsed_ms\":"));
    }

    #[test]
    fn null_seed_serializes_as_null() {
        let text = to_canonical_json(&sample_run_report(0.0)).unwrap();
        assert!(text.contains("\"seed\": null"));
    }

    #[test]
    fn state_file_round_trip() {
        let input = parse_state_file(r#"{"amplitudes": [[1.0, 0.0], [0.0, 0.0]]}"#).unwrap();
        assert_eq!(input.amplitudes, vec![Complex64::ONE, Complex64::ZERO]);
        assert!(!input.normalize);

        let scaled =
            parse_state_file(r#"{"amplitudes": [[0.6, 0.0], [0.7, 0.0]], "normalize": true}"#)
                .unwrap();
        assert!(scaled.normalize);
    }

    #[test]
    fn state_file_rejects_bad_schema() {
        assert!(matches!(
            parse_state_file("not json"),
            Err(Error::StateFile { .. })
        ));
        assert!(matches!(
            parse_state_file(r#"{"amplitudes": []}"#),
            Err(Error::StateFile { .. })
        ));
        assert!(matches!(
            parse_state_file(r#"{"amplitudes": [[1, 0]], "extra": 1}"#),
            Err(Error::StateFile { .. })
        ));
        assert!(matches!(
            parse_state_file(r#"{"amplitudes": [[1, 0, 0]]}"#),
            Err(Error::StateFile { .. })
        ));
    }
}
