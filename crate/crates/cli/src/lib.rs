//! Command implementations behind the `qclone` binary.
//!
//! Each `cmd_*` function returns a serializable report; the binary decides
//! where and in which format it is written.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use qclone_core::choi::{self, OptimalityReport};
use qclone_core::circuit::{build_circuit, GateRecord};
use qclone_core::distspec::{DistSpec, SweepSpec};
use qclone_core::optimal::{average_fidelity, best_pcc, optimal_angles, CloningAngles, ClonerParams};
use qclone_core::qsim::{clone_in_frame, partial_trace, AxisFrame, PureQubit};
use qclone_core::{single_copy_fidelity, Error, MomentPair};

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Violation(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) | CliError::Violation(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidParameter(_) | Error::Table(_) | Error::Io(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Pretty-printed JSON with 17-significant-digit floats; non-finite values become `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Pretty17::default());
    value.serialize(&mut ser).expect("in-memory serialization");
    let mut s = String::from_utf8(out).expect("utf-8");
    s.push('\n');
    s
}

#[derive(Default)]
struct Pretty17 {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.inner.$name(w $(, $arg)*)
        })*
    };
}

impl serde_json::ser::Formatter for Pretty17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

fn load(spec: &DistSpec) -> CliResult<(qclone_core::AxisDistribution, MomentPair, ClonerParams)> {
    let d = spec.to_distribution()?;
    let m = d.moments()?;
    let p = optimal_angles(m)?;
    Ok((d, m, p))
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsReport {
    pub distribution: String,
    pub a1: f64,
    pub a2: f64,
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub regime: &'static str,
    #[serde(rename = "F_avg")]
    pub f_avg: f64,
}

fn params_report(spec: &DistSpec, m: MomentPair, p: &ClonerParams) -> ParamsReport {
    ParamsReport {
        distribution: spec.to_string(),
        a1: m.a1,
        a2: m.a2,
        gamma: p.gamma,
        omega: p.omega_value,
        alpha_plus: p.alpha_plus(),
        alpha_minus: p.alpha_minus(),
        regime: p.regime.as_str(),
        f_avg: average_fidelity(m, p.angles),
    }
}

pub fn cmd_params(spec: &DistSpec) -> CliResult<ParamsReport> {
    let (_, m, p) = load(spec)?;
    Ok(params_report(spec, m, &p))
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub a1: f64,
    pub a2: f64,
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    #[serde(rename = "F_opt")]
    pub f_opt: f64,
    #[serde(rename = "F_UC")]
    pub f_uc: f64,
    #[serde(rename = "F_PCC_branch")]
    pub f_pcc_branch: f64,
}

/// Rows in sweep order, plus one message per row that could not be evaluated.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

fn sweep_row(spec: &DistSpec, sweep: &SweepSpec, value: f64) -> CliResult<SweepRow> {
    let (_, m, p) = load(&sweep.apply(spec, value)?)?;
    Ok(SweepRow {
        param: value,
        a1: m.a1,
        a2: m.a2,
        gamma: p.gamma,
        alpha_plus: p.alpha_plus(),
        alpha_minus: p.alpha_minus(),
        f_opt: average_fidelity(m, p.angles),
        f_uc: average_fidelity(m, CloningAngles::universal()),
        f_pcc_branch: best_pcc(m).2,
    })
}

pub fn cmd_sweep(spec: &DistSpec, sweep: &SweepSpec) -> CliResult<SweepOutput> {
    for k in &sweep.keys {
        spec.with(k, 0.0).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let values = sweep.values();
    let results: Vec<CliResult<SweepRow>> = values.par_iter().map(|&v| sweep_row(spec, sweep, v)).collect();
    let mut rows = Vec::with_capacity(values.len());
    let mut warnings = Vec::new();
    for (v, r) in values.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                warnings.push(format!("{}={v}: {e}; row written as NaN", sweep.label()));
                rows.push(SweepRow {
                    param: *v,
                    a1: f64::NAN,
                    a2: f64::NAN,
                    gamma: f64::NAN,
                    alpha_plus: f64::NAN,
                    alpha_minus: f64::NAN,
                    f_opt: f64::NAN,
                    f_uc: f64::NAN,
                    f_pcc_branch: f64::NAN,
                });
            }
        }
    }
    Ok(SweepOutput { rows, warnings })
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], w: W) -> CliResult<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r).map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateReport {
    pub distribution: String,
    pub theta: f64,
    pub phi: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    /// `[re, im]` pairs indexed by `clone1·4 + clone2·2 + ancilla`.
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(rename = "F_clone1")]
    pub f_clone1: f64,
    #[serde(rename = "F_clone2")]
    pub f_clone2: f64,
    #[serde(rename = "F_closed_form")]
    pub f_closed_form: f64,
}

/// Clones the state with Bloch angles `(theta, phi)` in the global frame.
pub fn cmd_simulate(spec: &DistSpec, theta: f64, phi: f64) -> CliResult<SimulateReport> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(CliError::Usage("theta and phi must be finite".into()));
    }
    let (d, _, p) = load(spec)?;
    let axis = d.axis();
    let frame = AxisFrame::new(axis.theta, axis.phi);
    let q = PureQubit::new(theta, phi);
    let out = clone_in_frame(q, frame, p.angles);
    let rho = out.density();
    let fid = |i: usize| -> CliResult<f64> { Ok(partial_trace(&rho, &[i])?.expectation(q)?) };
    Ok(SimulateReport {
        distribution: spec.to_string(),
        theta,
        phi,
        alpha_plus: p.alpha_plus(),
        alpha_minus: p.alpha_minus(),
        amplitudes: out.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        f_clone1: fid(1)?,
        f_clone2: fid(2)?,
        f_closed_form: single_copy_fidelity(frame.to_local(q).theta, p.angles),
    })
}

/// Runs the optimality checks. A report showing a violation is returned
/// inside [`CliError::Violation`] by [`check_report`].
pub fn cmd_verify(spec: &DistSpec, samples: usize, seed: u64) -> CliResult<OptimalityReport> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let d = spec.to_distribution()?;
    Ok(choi::certify(&d, &spec.to_string(), samples, seed)?)
}

pub fn check_report(r: &OptimalityReport) -> CliResult<()> {
    if r.sampled_violation() {
        return Err(CliError::Violation(format!(
            "a sampled channel reaches F = {} above F_opt = {}",
            r.max_sampled_f, r.f_opt
        )));
    }
    if r.structured_violation() {
        return Err(CliError::Violation(format!(
            "the structured search reaches F = {} above F_opt = {}",
            r.max_structured_f, r.f_opt
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CircuitReport {
    pub params: ParamsReport,
    pub gates: Vec<GateRecord>,
}

pub fn cmd_circuit(spec: &DistSpec) -> CliResult<CircuitReport> {
    let (_, m, p) = load(spec)?;
    Ok(CircuitReport { params: params_report(spec, m, &p), gates: build_circuit(p.angles).records() })
}
