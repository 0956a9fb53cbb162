//! Reading and writing function and coefficient files.
//!
//! Function files key values by word (`1122,0.5`); coefficient files key them
//! by tableau (`134/25,0.5`). Both exist as CSV lines and as JSON objects
//! `{"n": 4, "k": 2, "values": {"1122": 0.5}}`. Missing keys read as zero and
//! repeated keys are rejected.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::de::{Deserializer, MapAccess, Visitor};

use crate::combinatorics::{StandardTableau, WordLabel};
use crate::error::{Error, Result};
use crate::factorization::TransformPlan;
use crate::transform::{FunctionVector, GtCoefficients};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.json` files are JSON, everything else CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }

    pub fn resolve(explicit: Option<Format>, path: &Path) -> Format {
        explicit.unwrap_or_else(|| Format::from_path(path))
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::argument(format!("unknown format {s:?}"))),
        }
    }
}

/// Key-value pairs in file order, each with its 1-based line number.
type Entries = Vec<(usize, String, f64)>;

fn parse_csv(text: &str) -> Result<Entries> {
    let mut out = Vec::new();
    for (j, raw) in text.lines().enumerate() {
        let no = j + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .rsplit_once(',')
            .ok_or_else(|| Error::parse(no, "expected \"key,value\""))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::parse(no, format!("bad value {:?}", value.trim())))?;
        if !value.is_finite() {
            return Err(Error::parse(no, "value is not finite"));
        }
        out.push((no, key.trim().to_string(), value));
    }
    Ok(out)
}

struct PairsVisitor;

impl<'de> Visitor<'de> for PairsVisitor {
    type Value = Vec<(String, f64)>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an object of numbers")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
        let mut out = Vec::new();
        while let Some((k, v)) = map.next_entry::<String, f64>()? {
            out.push((k, v));
        }
        Ok(out)
    }
}

struct Pairs(Vec<(String, f64)>);

impl<'de> serde::Deserialize<'de> for Pairs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_map(PairsVisitor).map(Pairs)
    }
}

#[derive(Default)]
struct Document {
    n: Option<usize>,
    k: Option<usize>,
    values: Option<Vec<(String, f64)>>,
}

struct DocumentVisitor;

impl<'de> Visitor<'de> for DocumentVisitor {
    type Value = Document;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an object with \"values\"")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Document, A::Error> {
        use serde::de::Error as _;
        let mut doc = Document::default();
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "n" if doc.n.is_none() => doc.n = Some(map.next_value()?),
                "k" if doc.k.is_none() => doc.k = Some(map.next_value()?),
                "values" if doc.values.is_none() => doc.values = Some(map.next_value::<Pairs>()?.0),
                "n" | "k" | "values" => return Err(A::Error::custom(format!("duplicate field {key:?}"))),
                _ => {
                    map.next_value::<serde::de::IgnoredAny>()?;
                }
            }
        }
        Ok(doc)
    }
}

impl<'de> serde::Deserialize<'de> for Document {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_map(DocumentVisitor)
    }
}

/// Line on which the `occurrence`-th quoted `key` appears, or 0.
fn line_of_key(text: &str, key: &str, occurrence: usize) -> usize {
    let quoted = format!("\"{key}\"");
    text.match_indices(&quoted)
        .nth(occurrence)
        .map(|(pos, _)| text[..pos].matches('\n').count() + 1)
        .unwrap_or(0)
}

fn parse_json(text: &str) -> Result<(Option<(usize, usize)>, Entries)> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let nk = match (doc.n, doc.k) {
        (None, None) => None,
        (Some(n), Some(k)) => Some((n, k)),
        _ => return Err(Error::parse(1, "n and k must appear together")),
    };
    let pairs = doc.values.ok_or_else(|| Error::parse(1, "missing \"values\""))?;
    let mut seen = std::collections::HashMap::new();
    let mut out = Vec::with_capacity(pairs.len());
    for (key, value) in pairs {
        let count = seen.entry(key.clone()).or_insert(0usize);
        let no = line_of_key(text, &key, *count);
        *count += 1;
        out.push((no, key, value));
    }
    Ok((nk, out))
}

fn read_entries(text: &str, format: Format) -> Result<(Option<(usize, usize)>, Entries)> {
    match format {
        Format::Csv => Ok((None, parse_csv(text)?)),
        Format::Json => parse_json(text),
    }
}

fn check_header(nk: Option<(usize, usize)>, plan: &TransformPlan) -> Result<()> {
    match nk {
        Some((n, k)) if (n, k) != (plan.n(), plan.k()) => Err(Error::argument(format!(
            "file is for J({n},{k}), plan is for J({},{})",
            plan.n(),
            plan.k()
        ))),
        _ => Ok(()),
    }
}

/// Scatters keyed entries into a dense vector, rejecting unknown and
/// repeated keys.
fn scatter(entries: Entries, dim: usize, index: impl Fn(&str) -> Result<usize>) -> Result<Vec<f64>> {
    let mut values = vec![0.0; dim];
    let mut line_of = vec![0usize; dim];
    for (no, key, value) in entries {
        let j = index(&key).map_err(|e| Error::parse(no, e.to_string()))?;
        if line_of[j] != 0 {
            return Err(Error::parse(no, format!("duplicate key {key:?}, first seen on line {}", line_of[j])));
        }
        line_of[j] = no.max(1);
        values[j] = value;
    }
    Ok(values)
}

pub fn parse_function(text: &str, format: Format, plan: &TransformPlan) -> Result<FunctionVector> {
    let (nk, entries) = read_entries(text, format)?;
    check_header(nk, plan)?;
    let (n, k) = (plan.n(), plan.k());
    let values = scatter(entries, plan.dim(), |key| {
        let w: WordLabel = key.parse()?;
        if w.n() != n || w.k() != k {
            return Err(Error::argument(format!(
                "word {key:?} is not a {k}-subset of {n} positions"
            )));
        }
        plan.word_index(w.letters())
            .ok_or_else(|| Error::argument(format!("unknown word {key:?}")))
    })?;
    FunctionVector::new(n, k, values)
}

pub fn parse_coefficients(text: &str, format: Format, plan: &TransformPlan) -> Result<GtCoefficients> {
    let (nk, entries) = read_entries(text, format)?;
    check_header(nk, plan)?;
    let values = scatter(entries, plan.dim(), |key| {
        let t: StandardTableau = key.parse()?;
        plan.coefficient_index(&t)
            .ok_or_else(|| Error::argument(format!("tableau {key:?} does not label a coefficient")))
    })?;
    GtCoefficients::new(plan.n(), plan.k(), values)
}

fn render(n: usize, k: usize, rows: Vec<(String, f64)>, format: Format) -> String {
    match format {
        Format::Csv => rows.into_iter().map(|(key, v)| format!("{key},{v:e}\n")).collect(),
        Format::Json => {
            let mut values = serde_json::Map::new();
            for (key, v) in rows {
                values.insert(key, serde_json::json!(v));
            }
            let doc = serde_json::json!({ "n": n, "k": k, "values": values });
            let mut s = serde_json::to_string_pretty(&doc).expect("JSON values are finite");
            s.push('\n');
            s
        }
    }
}

/// Every word in canonical order, including zeros.
pub fn render_function(plan: &TransformPlan, f: &FunctionVector, format: Format) -> String {
    let rows = plan
        .words()
        .into_iter()
        .zip(f.values())
        .map(|(w, &v)| (w.to_string(), v))
        .collect();
    render(plan.n(), plan.k(), rows, format)
}

/// Every coefficient in canonical tableau order, including zeros.
pub fn render_coefficients(plan: &TransformPlan, c: &GtCoefficients, format: Format) -> String {
    let rows = plan
        .coefficient_labels()
        .iter()
        .zip(c.values())
        .map(|(l, &v)| (l.tableau.to_string(), v))
        .collect();
    render(plan.n(), plan.k(), rows, format)
}

pub fn read_function(path: &Path, format: Option<Format>, plan: &TransformPlan) -> Result<FunctionVector> {
    parse_function(&fs::read_to_string(path)?, Format::resolve(format, path), plan)
}

pub fn read_coefficients(path: &Path, format: Option<Format>, plan: &TransformPlan) -> Result<GtCoefficients> {
    parse_coefficients(&fs::read_to_string(path)?, Format::resolve(format, path), plan)
}
