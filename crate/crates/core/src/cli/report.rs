//! Report, CSV and plot-data writers.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::controllability::{BoundsEstimate, QuadratureCheck};
use crate::perturbation::{AlphaChoice, ContractionData};
use crate::steering::SteeringResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dimensions {
    pub n: usize,
    pub p: usize,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearControllability {
    pub kalman_rank: usize,
    pub rank_full: bool,
    pub gramian_min_eig: f64,
    pub gramian_max_eig: f64,
    pub gramian_positive_definite: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteeringSummary {
    pub iterations: usize,
    pub converged: bool,
    pub final_delta_sup: Option<f64>,
    pub final_delta_l2: Option<f64>,
    pub terminal_error_fixed_point: f64,
    pub terminal_error_simulated: f64,
}

impl From<&SteeringResult> for SteeringSummary {
    fn from(r: &SteeringResult) -> Self {
        Self {
            iterations: r.iterations,
            converged: r.converged,
            final_delta_sup: r.successive_deltas.last().copied(),
            final_delta_l2: r.successive_deltas_l2.last().copied(),
            terminal_error_fixed_point: r.terminal_error_fixed_point,
            terminal_error_simulated: r.terminal_error_simulated,
        }
    }
}

/// Every hypothesis check of the controllability theorem, in order: linear
/// controllability, bounds, `α`, `M`, then the contraction verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub dimensions: Dimensions,
    pub linear: LinearControllability,
    pub bounds: Option<BoundsEstimate>,
    pub alpha: AlphaChoice,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    pub rho: f64,
    pub boyd_wong: Option<ContractionData>,
    /// Whether every hypothesis checked out.
    pub controllable_by_theorem: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_check: Option<QuadratureCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steering: Option<SteeringSummary>,
    pub warnings: Vec<String>,
}

/// Pretty JSON with every float written to 17 significant digits; non-finite
/// values become `null`.
struct RoundTripFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for RoundTripFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes `value` as pretty JSON with round-trippable floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RoundTripFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report serializes");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    ensure_parent(path)?;
    fs::write(path, to_json(value))
}

fn ensure_parent(path: &Path) -> io::Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir),
        _ => Ok(()),
    }
}

/// CSV numbers carry nine significant digits.
fn csv_number(v: f64) -> String {
    format!("{v:.8e}")
}

/// `time` followed by one column per component.
pub fn write_series_csv(path: &Path, prefix: &str, times: &[f64], rows: &[Vec<f64>]) -> io::Result<()> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path)?;
    let width = rows.first().map_or(0, Vec::len);
    let mut header = vec!["time".to_string()];
    header.extend((1..=width).map(|i| format!("{prefix}{i}")));
    w.write_record(&header)?;
    for (t, row) in times.iter().zip(rows) {
        let mut rec = vec![csv_number(*t)];
        rec.extend(row.iter().map(|v| csv_number(*v)));
        w.write_record(&rec)?;
    }
    w.flush()
}

fn write_columns(path: &Path, header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> io::Result<()> {
    let mut out = String::new();
    out.push_str("# ");
    out.push_str(&header.join(" "));
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| csv_number(*v)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    fs::write(path, out)
}

/// Writes `states.dat`, `controls.dat` and `deltas.dat` into `dir`, creating it
/// if needed.
pub fn emit_plot_data(result: &SteeringResult, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let times = &result.trajectory.times;

    let n = result.trajectory.states.first().map_or(0, Vec::len);
    let mut header = vec!["time".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    write_columns(
        &dir.join("states.dat"),
        &header,
        times.iter().zip(&result.trajectory.states).map(|(t, s)| {
            let mut row = vec![*t];
            row.extend(s);
            row
        }),
    )?;

    let p = result.controls.first().map_or(0, Vec::len);
    let mut header = vec!["time".to_string()];
    header.extend((1..=p).map(|i| format!("u{i}")));
    write_columns(
        &dir.join("controls.dat"),
        &header,
        times.iter().zip(&result.controls).map(|(t, u)| {
            let mut row = vec![*t];
            row.extend(u);
            row
        }),
    )?;

    let header = ["iteration", "delta_sup", "delta_l2"].map(String::from);
    write_columns(
        &dir.join("deltas.dat"),
        &header,
        result
            .successive_deltas
            .iter()
            .zip(&result.successive_deltas_l2)
            .enumerate()
            .map(|(k, (s, l))| vec![(k + 1) as f64, *s, *l]),
    )
}
