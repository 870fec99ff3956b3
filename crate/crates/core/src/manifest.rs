//! Plain-text metric manifests.
//!
//! ```text
//! # comments start with '#'
//! [chart]
//! dimension = 4
//! coordinates = ["x1", "x2", "x3", "x4"]
//! positive = ["x1", "x2", "x3", "x4"]
//!
//! [metric]
//! g11 = "x2"
//! g22 = "x1"
//!
//! [extras]
//! eta = ["1", "0", "0", "0"]
//! points = ["1, 1, 1, 1", "2, 1/2, 3, 1"]
//!
//! [golden]
//! R_1212 = "(x1 + x2)/(4*x1*x2)"
//! kappa = "..."
//! ```
//!
//! Metric keys are `g` followed by two one-based indices; omitted entries are
//! zero and `gji` may stand in for `gij`. Golden keys name a tensor (see
//! [`crate::report::TensorName`]) followed by `_` and its one-based index
//! digits, or the bare name for scalars.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::symbolic::{RationalFunction, MAX_VARS};
use crate::tensor::{Chart, CovariantTensor, MetricData, Symmetry};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub coordinates: Vec<String>,
    pub positive: Vec<String>,
    /// Upper-triangular entries `(i, j)` with `i ≤ j`, zero-based.
    pub metric: BTreeMap<(usize, usize), String>,
    pub eta: Option<Vec<String>>,
    pub points: Vec<String>,
    pub golden: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Int(i64),
    Str(String),
    List(Vec<String>),
}

impl Value {
    fn describe(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Str(_) => "string",
            Value::List(_) => "list",
        }
    }
}

struct Entry {
    line: usize,
    key: String,
    value: Value,
}

struct Ctx<'a> {
    path: &'a str,
}

impl Ctx<'_> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Manifest {
            path: self.path.to_string(),
            line,
            message: message.into(),
        }
    }
}

fn parse_string(ctx: &Ctx<'_>, line: usize, s: &str) -> Result<(String, usize)> {
    let mut out = String::new();
    let mut chars = s.char_indices();
    match chars.next() {
        Some((_, '"')) => {}
        _ => return Err(ctx.err(line, "expected '\"'")),
    }
    let mut escaped = false;
    for (i, c) in chars {
        if escaped {
            out.push(c);
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else if c == '"' {
            return Ok((out, i + 1));
        } else {
            out.push(c);
        }
    }
    Err(ctx.err(line, "unterminated string"))
}

fn parse_value(ctx: &Ctx<'_>, line: usize, text: &str) -> Result<Value> {
    let text = text.trim();
    if text.starts_with('"') {
        let (s, used) = parse_string(ctx, line, text)?;
        if !text[used..].trim().is_empty() {
            return Err(ctx.err(line, "trailing characters after string"));
        }
        return Ok(Value::Str(s));
    }
    if let Some(rest) = text.strip_prefix('[') {
        let mut items = Vec::new();
        let mut rest = rest.trim_start();
        loop {
            if let Some(tail) = rest.strip_prefix(']') {
                if !tail.trim().is_empty() {
                    return Err(ctx.err(line, "trailing characters after list"));
                }
                return Ok(Value::List(items));
            }
            let (s, used) = parse_string(ctx, line, rest)?;
            items.push(s);
            rest = rest[used..].trim_start();
            if let Some(tail) = rest.strip_prefix(',') {
                rest = tail.trim_start();
            } else if !rest.starts_with(']') {
                return Err(ctx.err(line, "expected ',' or ']' in list"));
            }
        }
    }
    text.parse::<i64>()
        .map(Value::Int)
        .map_err(|_| ctx.err(line, format!("cannot parse value '{text}'")))
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

fn tokenize(ctx: &Ctx<'_>, text: &str) -> Result<BTreeMap<String, (usize, Vec<Entry>)>> {
    let mut blocks: BTreeMap<String, (usize, Vec<Entry>)> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !matches!(name.as_str(), "chart" | "metric" | "extras" | "golden") {
                return Err(ctx.err(line, format!("unknown block [{name}]")));
            }
            if blocks.contains_key(&name) {
                return Err(ctx.err(line, format!("duplicate block [{name}]")));
            }
            blocks.insert(name.clone(), (line, Vec::new()));
            current = Some(name);
            continue;
        }
        let Some(block) = &current else {
            return Err(ctx.err(line, "entry outside of any block"));
        };
        let Some((key, value)) = body.split_once('=') else {
            return Err(ctx.err(line, "expected 'key = value'"));
        };
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(ctx.err(line, "empty key"));
        }
        let value = parse_value(ctx, line, value)?;
        let entries = &mut blocks.get_mut(block).expect("block registered").1;
        if entries.iter().any(|e| e.key == key) {
            return Err(ctx.err(line, format!("duplicate key '{key}'")));
        }
        entries.push(Entry { line, key, value });
    }
    Ok(blocks)
}

fn metric_index(key: &str, n: usize) -> Option<(usize, usize)> {
    let digits = key.strip_prefix('g')?;
    let mut it = digits.chars();
    let (a, b) = (it.next()?.to_digit(10)?, it.next()?.to_digit(10)?);
    if it.next().is_some() || a == 0 || b == 0 || a as usize > n || b as usize > n {
        return None;
    }
    let (i, j) = (a as usize - 1, b as usize - 1);
    Some((i.min(j), i.max(j)))
}

/// Comma separated rational literals such as `"1, 1/2, -3"`.
pub fn parse_point(text: &str) -> Result<Vec<BigRational>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<BigRational>()
                .map_err(|_| Error::InvalidArgument(format!("invalid rational coordinate '{s}'")))
        })
        .collect()
}

impl Manifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses and validates manifest text; `origin` labels error positions.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let ctx = Ctx { path: origin };
        let mut blocks = tokenize(&ctx, text)?;
        let last_line = text.lines().count().max(1);

        let (chart_line, chart) = blocks
            .remove("chart")
            .ok_or_else(|| ctx.err(last_line, "missing [chart] block"))?;
        let mut dimension = None;
        let mut coordinates = None;
        let mut positive = Vec::new();
        for e in chart {
            match (e.key.as_str(), e.value) {
                ("dimension", Value::Int(d)) => dimension = Some((e.line, d)),
                ("coordinates", Value::List(l)) => coordinates = Some((e.line, l)),
                ("positive", Value::List(l)) => positive = l,
                ("dimension" | "coordinates" | "positive", v) => {
                    return Err(ctx.err(e.line, format!("unexpected {} for '{}'", v.describe(), e.key)))
                }
                (k, _) => return Err(ctx.err(e.line, format!("unknown chart key '{k}'"))),
            }
        }
        let (coord_line, coordinates) = coordinates.ok_or_else(|| ctx.err(chart_line, "missing 'coordinates'"))?;
        let n = coordinates.len();
        if let Some((line, d)) = dimension {
            if d != n as i64 {
                return Err(ctx.err(line, format!("dimension {d} does not match {n} coordinates")));
            }
        }
        if !(3..=MAX_VARS).contains(&n) {
            return Err(ctx.err(coord_line, format!("dimension must lie in 3..={MAX_VARS}, got {n}")));
        }
        let chart = Chart::new(coordinates.clone(), Vec::new()).map_err(|e| ctx.err(coord_line, e.to_string()))?;
        for p in &positive {
            if chart.index_of(p).is_none() {
                return Err(ctx.err(chart_line, format!("positive coordinate '{p}' is not declared")));
            }
        }

        let (metric_line, metric_entries) = blocks
            .remove("metric")
            .ok_or_else(|| ctx.err(last_line, "missing [metric] block"))?;
        let mut metric = BTreeMap::<(usize, usize), String>::new();
        for e in metric_entries {
            let Some(ij) = metric_index(&e.key, n) else {
                return Err(ctx.err(e.line, format!("invalid metric key '{}' for dimension {n}", e.key)));
            };
            let Value::Str(expr) = e.value else {
                return Err(ctx.err(e.line, "metric entries must be quoted expressions"));
            };
            let value = chart.parse(&expr).map_err(|err| ctx.err(e.line, err.to_string()))?;
            if let Some(prev) = metric.get(&ij) {
                if chart.parse(prev).ok().as_ref() != Some(&value) {
                    return Err(ctx.err(e.line, format!("'{}' disagrees with its symmetric entry", e.key)));
                }
                continue;
            }
            metric.insert(ij, expr);
        }
        let diagonal_nonzero = (0..n).any(|i| {
            metric
                .get(&(i, i))
                .is_some_and(|s| chart.parse(s).is_ok_and(|f| !f.is_zero()))
        });
        if !diagonal_nonzero {
            return Err(ctx.err(metric_line, "every diagonal metric entry is zero"));
        }

        let mut eta = None;
        let mut points = Vec::new();
        if let Some((_, extras)) = blocks.remove("extras") {
            for e in extras {
                match (e.key.as_str(), e.value) {
                    ("eta", Value::List(l)) => {
                        if l.len() != n {
                            return Err(ctx.err(e.line, format!("eta needs {n} components, got {}", l.len())));
                        }
                        for s in &l {
                            chart.parse(s).map_err(|err| ctx.err(e.line, err.to_string()))?;
                        }
                        eta = Some(l);
                    }
                    ("points", Value::List(l)) => {
                        for s in &l {
                            let p = parse_point(s).map_err(|err| ctx.err(e.line, err.to_string()))?;
                            if p.len() != n {
                                return Err(ctx.err(e.line, format!("point '{s}' needs {n} coordinates")));
                            }
                        }
                        points = l;
                    }
                    (k, v) => return Err(ctx.err(e.line, format!("unexpected {} for extras key '{k}'", v.describe()))),
                }
            }
        }

        let mut golden = Vec::new();
        if let Some((_, entries)) = blocks.remove("golden") {
            for e in entries {
                let Value::Str(expr) = e.value else {
                    return Err(ctx.err(e.line, "golden values must be quoted expressions"));
                };
                chart.parse(&expr).map_err(|err| ctx.err(e.line, err.to_string()))?;
                golden.push((e.key, expr));
            }
        }

        Ok(Manifest {
            coordinates,
            positive,
            metric,
            eta,
            points,
            golden,
        })
    }

    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    pub fn chart(&self) -> Arc<Chart> {
        let positive = self
            .positive
            .iter()
            .filter_map(|p| self.coordinates.iter().position(|c| c == p))
            .collect();
        Arc::new(Chart::new(self.coordinates.clone(), positive).expect("validated on load"))
    }

    pub fn metric_tensor(&self) -> Result<CovariantTensor> {
        let chart = self.chart();
        let mut g = CovariantTensor::zeros(chart.clone(), 2, Symmetry::Symmetric2);
        for (&(i, j), expr) in &self.metric {
            let v = chart.parse(expr)?;
            g.set(&[i, j], v.clone());
            g.set(&[j, i], v);
        }
        Ok(g)
    }

    pub fn metric_data(&self) -> Result<MetricData> {
        MetricData::new(self.metric_tensor()?)
    }

    pub fn eta_form(&self, chart: &Arc<Chart>) -> Result<Option<CovariantTensor>> {
        let Some(eta) = &self.eta else { return Ok(None) };
        let comps = eta
            .iter()
            .map(|s| chart.parse(s))
            .collect::<Result<Vec<RationalFunction>>>()?;
        CovariantTensor::one_form(chart.clone(), comps).map(Some)
    }

    /// Zero-based indices of the coordinates declared positive.
    pub fn positive_indices(&self) -> Vec<usize> {
        self.positive
            .iter()
            .filter_map(|p| self.coordinates.iter().position(|c| c == p))
            .collect()
    }

    pub fn sample_points(&self) -> Result<Vec<Vec<BigRational>>> {
        self.points.iter().map(|p| parse_point(p)).collect()
    }

    /// Canonical text form; [`Manifest::parse`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
        let list = |l: &[String]| format!("[{}]", l.iter().map(|s| quote(s)).collect::<Vec<_>>().join(", "));
        let mut out = String::new();
        out.push_str("[chart]\n");
        let _ = writeln!(out, "dimension = {}", self.dim());
        let _ = writeln!(out, "coordinates = {}", list(&self.coordinates));
        if !self.positive.is_empty() {
            let _ = writeln!(out, "positive = {}", list(&self.positive));
        }
        out.push_str("\n[metric]\n");
        for (&(i, j), expr) in &self.metric {
            let _ = writeln!(out, "g{}{} = {}", i + 1, j + 1, quote(expr));
        }
        if self.eta.is_some() || !self.points.is_empty() {
            out.push_str("\n[extras]\n");
            if let Some(eta) = &self.eta {
                let _ = writeln!(out, "eta = {}", list(eta));
            }
            if !self.points.is_empty() {
                let _ = writeln!(out, "points = {}", list(&self.points));
            }
        }
        if !self.golden.is_empty() {
            out.push_str("\n[golden]\n");
            for (k, v) in &self.golden {
                let _ = writeln!(out, "{k} = {}", quote(v));
            }
        }
        out
    }
}
