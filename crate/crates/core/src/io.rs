//! Cusp-data input files and result/certificate output files.
//!
//! A cusp file is a single JSON object:
//!
//! ```json
//! { "name": "square", "t_alpha": [1, 0], "t_beta": [0, 1],
//!   "x0": 0.5, "y0": 0.5, "c": [1, 0], "comment": "optional" }
//! ```
//!
//! Numbers are read as exact decimal literals; a string such as `"5/13"`
//! is accepted wherever a number is.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::batch::Evaluation;
use crate::certificate::CertificateQ0;
use crate::cusp::{CuspData, CuspError, InvalidReason};
use crate::exact::{parse_rational, GaussRational, RationalCusp};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid cusp: {0}")]
    InvalidCusp(InvalidReason),
}

impl ParseError {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Malformed(_) => "MalformedInput",
            ParseError::InvalidCusp(r) => r.code(),
        }
    }
}

impl From<CuspError> for ParseError {
    fn from(e: CuspError) -> Self {
        match e {
            CuspError::Invalid(r) => ParseError::InvalidCusp(r),
        }
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl IoError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io { path: path.to_path_buf(), source }
    }

    fn format(path: &Path, message: impl ToString) -> Self {
        IoError::Format { path: path.to_path_buf(), message: message.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCusp {
    pub cusp: CuspData,
    pub comment: Option<String>,
    pub warnings: Vec<String>,
}

const KEYS: [&str; 7] = ["name", "t_alpha", "t_beta", "x0", "y0", "c", "comment"];

fn number(obj: &Map<String, Value>, key: &str) -> Result<BigRational, ParseError> {
    let v = obj.get(key).ok_or_else(|| ParseError::Malformed(format!("missing field `{key}`")))?;
    scalar(v).ok_or_else(|| ParseError::Malformed(format!("field `{key}` is not a finite number")))
}

fn scalar(v: &Value) -> Option<BigRational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        _ => None,
    }
}

fn complex(obj: &Map<String, Value>, key: &str) -> Result<GaussRational, ParseError> {
    let v = obj.get(key).ok_or_else(|| ParseError::Malformed(format!("missing field `{key}`")))?;
    let bad = || ParseError::Malformed(format!("field `{key}` must be [re, im]"));
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(GaussRational::new(scalar(re).ok_or_else(bad)?, scalar(im).ok_or_else(bad)?)),
        _ => Err(bad()),
    }
}

pub fn parse_cusp_file(text: &str) -> Result<ParsedCusp, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Malformed(e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| ParseError::Malformed("expected a JSON object".into()))?;
    if let Some(unknown) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(ParseError::Malformed(format!("unknown field `{unknown}`")));
    }
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(ParseError::Malformed("field `name` must be a string".into())),
        None => return Err(ParseError::Malformed("missing field `name`".into())),
    };
    let comment = match obj.get("comment") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(ParseError::Malformed("field `comment` must be a string".into())),
    };
    let rational = RationalCusp {
        t_alpha: complex(obj, "t_alpha")?,
        t_beta: complex(obj, "t_beta")?,
        x0: number(obj, "x0")?,
        y0: number(obj, "y0")?,
        c: complex(obj, "c")?,
    };
    let mut warnings = Vec::new();
    for (key, v) in [("x0", &rational.x0), ("y0", &rational.y0)] {
        if *v < BigRational::zero() || *v >= BigRational::one() {
            warnings.push(format!("{key} = {v} outside [0, 1); reduced modulo 1"));
        }
    }
    let c_norm = rational.c.norm_sqr();
    if !c_norm.is_zero() && !c_norm.is_one() {
        warnings.push(format!(
            "|c|^2 = {c_norm} is not 1: g then does not carry the horoball over 0 onto the horosphere at height 1, \
             and short-arc distances are not meaningful"
        ));
    }
    let cusp = CuspData::from_rational(name, rational)?;
    Ok(ParsedCusp { cusp, comment, warnings })
}

pub fn read_cusp_file(path: &Path) -> Result<ParsedCusp, ReadCuspError> {
    let text = fs::read_to_string(path).map_err(|e| ReadCuspError::Io(IoError::io(path, e)))?;
    parse_cusp_file(&text).map_err(ReadCuspError::Parse)
}

#[derive(Debug, Error)]
pub enum ReadCuspError {
    #[error(transparent)]
    Io(IoError),
    #[error(transparent)]
    Parse(ParseError),
}

/// Decimal text when the rational terminates in base 10, `"n/d"` otherwise.
fn literal(r: &BigRational) -> Value {
    let mut den = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return Value::String(r.to_string());
    }
    let digits = twos.max(fives);
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), digits));
    let int = scaled.to_integer();
    let neg = int < BigInt::zero();
    let mut s = if neg { (-&int).to_string() } else { int.to_string() };
    if digits > 0 {
        if s.len() <= digits {
            s = format!("{}{s}", "0".repeat(digits + 1 - s.len()));
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    let n: serde_json::Number = s.parse().expect("decimal literal");
    Value::Number(n)
}

/// Serializes cusp data in the input format; exact inputs are preserved.
pub fn write_cusp_json(cusp: &CuspData, comment: Option<&str>) -> String {
    let rc = cusp.rational();
    let pair = |g: &GaussRational| Value::Array(vec![literal(&g.re), literal(&g.im)]);
    let mut obj = Map::new();
    obj.insert("name".into(), Value::String(cusp.name.clone()));
    obj.insert("t_alpha".into(), pair(&rc.t_alpha));
    obj.insert("t_beta".into(), pair(&rc.t_beta));
    obj.insert("x0".into(), literal(&rc.x0));
    obj.insert("y0".into(), literal(&rc.y0));
    obj.insert("c".into(), pair(&rc.c));
    if let Some(c) = comment {
        obj.insert("comment".into(), Value::String(c.to_string()));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json");
    s.push('\n');
    s
}

/// One row of the results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub p: i64,
    pub q: i64,
    pub trace_re: f64,
    pub trace_im: f64,
    pub length_re: Option<f64>,
    pub length_im: Option<f64>,
    pub radius: Option<f64>,
    pub vx: Option<f64>,
    pub vy: Option<f64>,
    pub verdict: String,
    pub witness_m: Option<i64>,
    pub witness_n: Option<i64>,
    pub witness_t: Option<f64>,
    pub short_dist: Option<f64>,
    pub epsilon: f64,
}

pub const RESULT_HEADER: &str =
    "p,q,trace_re,trace_im,length_re,length_im,radius,vx,vy,verdict,witness_m,witness_n,witness_t,short_dist,epsilon";

impl ResultRow {
    pub fn from_evaluation(e: &Evaluation, epsilon: f64) -> Self {
        let r = &e.record;
        let a = &e.assessment;
        let w = a.verdict.witness();
        Self {
            p: r.index.p,
            q: r.index.q,
            trace_re: r.trace.re,
            trace_im: r.trace.im,
            length_re: r.length.map(|l| l.re),
            length_im: r.length.map(|l| l.im),
            radius: r.axis.map(|ax| ax.radius),
            vx: a.vector.map(|v| v.x),
            vy: a.vector.map(|v| v.y),
            verdict: a.verdict.label().to_string(),
            witness_m: w.map(|w| w.m),
            witness_n: w.map(|w| w.n),
            witness_t: w.map(|w| w.t),
            short_dist: a.short_distance,
            epsilon,
        }
    }
}

/// Rows sorted lexicographically by `(p, q)`.
pub fn write_results_to<W: Write>(rows: &[ResultRow], out: W) -> Result<(), csv::Error> {
    let mut sorted: Vec<&ResultRow> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.p, r.q));
    let mut w = csv::Writer::from_writer(out);
    if sorted.is_empty() {
        w.write_record(RESULT_HEADER.split(','))?;
    }
    for row in sorted {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results_from<R: Read>(input: R) -> Result<Vec<ResultRow>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn write_results(rows: &[ResultRow], path: &Path) -> Result<(), IoError> {
    let file = fs::File::create(path).map_err(|e| IoError::io(path, e))?;
    write_results_to(rows, std::io::BufWriter::new(file)).map_err(|e| csv_error(path, e))
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>, IoError> {
    let file = fs::File::open(path).map_err(|e| IoError::io(path, e))?;
    read_results_from(std::io::BufReader::new(file)).map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> IoError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => IoError::io(path, io),
            other => IoError::format(path, format!("{other:?}")),
        }
    } else {
        IoError::format(path, e)
    }
}

const CERT_BANNER: &str = "# Geodesic knot certificate for the one-parameter subfamily of g(p,q).\n\
# Machine-readable TOML; `gkf verify --certificate <file>` re-checks every entry.\n";

pub fn certificate_to_string(cert: &CertificateQ0) -> String {
    let body = toml::to_string(cert).expect("certificate serializes");
    format!("{CERT_BANNER}\n{body}")
}

pub fn certificate_from_str(text: &str) -> Result<CertificateQ0, toml::de::Error> {
    toml::from_str(text)
}

pub fn write_certificate(cert: &CertificateQ0, path: &Path) -> Result<(), IoError> {
    fs::write(path, certificate_to_string(cert)).map_err(|e| IoError::io(path, e))
}

pub fn read_certificate(path: &Path) -> Result<CertificateQ0, IoError> {
    let text = fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    certificate_from_str(&text).map_err(|e| IoError::format(path, e))
}
