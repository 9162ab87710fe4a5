//! Machine-readable run reports.
//!
//! Reports are JSON objects. Every float is written with 17 significant
//! digits, so a report parses back to the same values bit for bit.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::certifier::{BetaPoint, TriangleDefect};
use crate::metric::FiniteMetricSpace;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// SHA-256 of the point count (`u64`, little endian) followed by the
/// row-major distances (`f64`, little endian), in hex.
pub fn input_digest(space: &FiniteMetricSpace) -> String {
    let mut h = Sha256::new();
    h.update((space.n() as u64).to_le_bytes());
    for d in space.as_flat() {
        h.update(d.to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Parameters of the run, echoed back.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QueryEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictEcho {
    pub holds: bool,
    /// Human-readable form, e.g. `Curv <= 0 fails`.
    pub statement: String,
    pub epsilon_needed: f64,
}

/// A witnessing configuration with point labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// `triangle`, `pair` or `quadruple`.
    pub kind: String,
    pub indices: Vec<usize>,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_space: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_model: Option<f64>,
    /// Signed defect, or the four-point value for quadruples.
    pub value: f64,
}

impl Witness {
    pub fn triangle(space: &FiniteMetricSpace, d: &TriangleDefect) -> Self {
        let idx = d.triple.indices();
        let (kind, indices) = if d.triple.is_degenerate() {
            ("pair", vec![d.triple.i, d.triple.k])
        } else {
            ("triangle", idx.to_vec())
        };
        Witness {
            kind: kind.into(),
            labels: indices
                .iter()
                .map(|&i| space.label(i).into_owned())
                .collect(),
            indices,
            sides: Some([d.sides.a, d.sides.b, d.sides.c]),
            r_space: Some(d.r_space),
            r_model: Some(d.r_model),
            value: d.defect,
        }
    }

    pub fn quadruple(space: &FiniteMetricSpace, q: [usize; 4], value: f64) -> Self {
        Witness {
            kind: "quadruple".into(),
            indices: q.to_vec(),
            labels: q.iter().map(|&i| space.label(i).into_owned()).collect(),
            sides: None,
            r_space: None,
            r_model: None,
            value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaEntry {
    pub beta: f64,
    pub epsilon_upper: f64,
    pub epsilon_lower: f64,
    pub triples: usize,
}

impl From<&BetaPoint> for BetaEntry {
    fn from(p: &BetaPoint) -> Self {
        BetaEntry {
            beta: p.beta,
            epsilon_upper: p.epsilon_upper,
            epsilon_lower: p.epsilon_lower,
            triples: p.triples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub input_digest: Option<String>,
    pub query: QueryEcho,
    pub verdict: Option<VerdictEcho>,
    pub epsilon_star_upper: Option<f64>,
    pub epsilon_star_lower: Option<f64>,
    pub delta: Option<f64>,
    pub witnesses: Vec<Witness>,
    pub skipped: usize,
    pub beta_curve: Vec<BetaEntry>,
    pub timing_ms: f64,
    /// Conventions and adjustments that affect interpretation.
    #[serde(default)]
    pub notes: Vec<String>,
    /// Command-specific payload.
    #[serde(default)]
    pub extras: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            version: VERSION.to_string(),
            command: command.to_string(),
            input_digest: None,
            query: QueryEcho::default(),
            verdict: None,
            epsilon_star_upper: None,
            epsilon_star_lower: None,
            delta: None,
            witnesses: Vec::new(),
            skipped: 0,
            beta_curve: Vec::new(),
            timing_ms: 0.0,
            notes: Vec::new(),
            extras: BTreeMap::new(),
        }
    }

    pub fn extra(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("serializable extra");
        self.extras.insert(key.to_string(), v);
    }

    /// Pretty-printed JSON with 17-digit floats and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser =
            serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
        self.serialize(&mut ser).expect("report serializes");
        buf.push(b'\n');
        String::from_utf8(buf).expect("utf-8 JSON")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Pretty formatter that writes floats as `{:.16e}`.
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}
