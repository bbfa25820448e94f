//! TSPLIB ingestion and best-known-optima registries.
//!
//! Only the symmetric `EUC_2D` and `EXPLICIT` edge weight types are
//! accepted. Explicit matrices may come in any of the common TSPLIB
//! layouts and are always stored as full `n x n` matrices.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tour::DistanceMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WeightKind {
    #[serde(rename = "EUC_2D")]
    Euc2d,
    Explicit,
}

/// How Euclidean distances are turned into edge costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounding {
    /// TSPLIB `nint`: `floor(d + 0.5)`.
    #[default]
    Nint,
    Exact,
}

impl std::str::FromStr for Rounding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nint" | "tsplib_nint" => Ok(Rounding::Nint),
            "exact" => Ok(Rounding::Exact),
            other => Err(Error::Usage(format!("unknown rounding mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Coords(Vec<(f64, f64)>),
    /// Row-major `n x n` costs.
    Matrix(Vec<f64>),
}

/// A parsed, validated problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    pub name: String,
    pub comment: Option<String>,
    dimension: usize,
    weights: Weights,
    pub rounding: Rounding,
}

impl TspInstance {
    pub fn from_coords(name: impl Into<String>, coords: Vec<(f64, f64)>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Usage(format!("an instance needs at least 2 nodes, got {}", coords.len())));
        }
        if let Some(i) = coords.iter().position(|&(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Usage(format!("coordinate of node {i} is not finite")));
        }
        Ok(TspInstance {
            name: name.into(),
            comment: None,
            dimension: coords.len(),
            weights: Weights::Coords(coords),
            rounding: Rounding::default(),
        })
    }

    /// Builds an explicit instance from a row-major `n x n` matrix.
    pub fn from_matrix(name: impl Into<String>, n: usize, costs: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Usage(format!("an instance needs at least 2 nodes, got {n}")));
        }
        if costs.len() != n * n {
            return Err(Error::Usage(format!(
                "dimension mismatch: expected {} matrix entries, got {}",
                n * n,
                costs.len()
            )));
        }
        if let Some(k) = costs.iter().position(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::Usage(format!("explicit cost ({}, {}) must be non-negative and finite", k / n, k % n)));
        }
        Ok(TspInstance {
            name: name.into(),
            comment: None,
            dimension: n,
            weights: Weights::Matrix(costs),
            rounding: Rounding::default(),
        })
    }

    pub fn with_rounding(mut self, rounding: Rounding) -> Self {
        self.rounding = rounding;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn weight_kind(&self) -> WeightKind {
        match self.weights {
            Weights::Coords(_) => WeightKind::Euc2d,
            Weights::Matrix(_) => WeightKind::Explicit,
        }
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        match &self.weights {
            Weights::Coords(c) => Some(c),
            Weights::Matrix(_) => None,
        }
    }

    /// Edge cost between nodes `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.dimension;
        if i >= n || j >= n {
            return Err(Error::Usage(format!("node index ({i}, {j}) out of range for dimension {n}")));
        }
        Ok(self.distance_unchecked(i, j))
    }

    fn distance_unchecked(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        match &self.weights {
            Weights::Coords(c) => euclidean(c[i], c[j], self.rounding),
            Weights::Matrix(m) => m[i * self.dimension + j],
        }
    }

    /// Materializes the full cost matrix.
    pub fn distance_matrix(&self) -> DistanceMatrix {
        let n = self.dimension;
        let mut costs = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                costs[i * n + j] = self.distance_unchecked(i, j);
                costs[j * n + i] = self.distance_unchecked(j, i);
            }
        }
        DistanceMatrix::new(n, costs).expect("instance costs are validated on construction")
    }

    /// Renders the instance back to TSPLIB text. Explicit matrices are
    /// written as `FULL_MATRIX`.
    pub fn to_tsplib(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        if let Some(c) = &self.comment {
            let _ = writeln!(out, "COMMENT : {c}");
        }
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.dimension);
        match &self.weights {
            Weights::Coords(coords) => {
                let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
                let _ = writeln!(out, "NODE_COORD_SECTION");
                for (i, (x, y)) in coords.iter().enumerate() {
                    let _ = writeln!(out, "{} {x:?} {y:?}", i + 1);
                }
            }
            Weights::Matrix(m) => {
                let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EXPLICIT");
                let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
                let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
                for row in m.chunks(self.dimension) {
                    let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
                    let _ = writeln!(out, "{}", line.join(" "));
                }
            }
        }
        out.push_str("EOF\n");
        out
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_tsplib(&text)
    }
}

fn euclidean(a: (f64, f64), b: (f64, f64), rounding: Rounding) -> f64 {
    let d = (a.0 - b.0).hypot(a.1 - b.1);
    match rounding {
        Rounding::Nint => (d + 0.5).floor(),
        Rounding::Exact => d,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MatrixFormat {
    Full,
    UpperRow,
    LowerRow,
    UpperDiagRow,
    LowerDiagRow,
}

impl MatrixFormat {
    fn parse(value: &str, line: usize) -> Result<Self> {
        Ok(match value {
            "FULL_MATRIX" => MatrixFormat::Full,
            // Column layouts of a symmetric matrix are the transposed row layouts.
            "UPPER_ROW" | "LOWER_COL" => MatrixFormat::UpperRow,
            "LOWER_ROW" | "UPPER_COL" => MatrixFormat::LowerRow,
            "UPPER_DIAG_ROW" | "LOWER_DIAG_COL" => MatrixFormat::UpperDiagRow,
            "LOWER_DIAG_ROW" | "UPPER_DIAG_COL" => MatrixFormat::LowerDiagRow,
            other => {
                return Err(Error::parse(
                    line,
                    Some("EDGE_WEIGHT_FORMAT"),
                    format!("unsupported edge weight format '{other}'"),
                ))
            }
        })
    }

    fn entry_count(self, n: usize) -> usize {
        match self {
            MatrixFormat::Full => n * n,
            MatrixFormat::UpperRow | MatrixFormat::LowerRow => n * (n - 1) / 2,
            MatrixFormat::UpperDiagRow | MatrixFormat::LowerDiagRow => n * (n + 1) / 2,
        }
    }

    /// Cell positions `(i, j)` in the order the format lists them.
    fn cells(self, n: usize) -> Vec<(usize, usize)> {
        let mut cells = Vec::with_capacity(self.entry_count(n));
        for i in 0..n {
            let cols = match self {
                MatrixFormat::Full => 0..n,
                MatrixFormat::UpperRow => (i + 1)..n,
                MatrixFormat::LowerRow => 0..i,
                MatrixFormat::UpperDiagRow => i..n,
                MatrixFormat::LowerDiagRow => 0..(i + 1),
            };
            cells.extend(cols.map(|j| (i, j)));
        }
        cells
    }
}

#[derive(Default)]
struct Header {
    name: Option<String>,
    comment: Option<String>,
    dimension: Option<(usize, usize)>,
    weight_kind: Option<(WeightKind, usize)>,
    format: Option<(MatrixFormat, usize)>,
}

fn set_once<T: PartialEq>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<()> {
    match slot {
        Some(existing) if *existing != value => {
            Err(Error::parse(line, Some(key), format!("contradictory {key} header")))
        }
        _ => {
            *slot = Some(value);
            Ok(())
        }
    }
}

fn split_header(line: &str) -> (String, String) {
    match line.split_once(':') {
        Some((k, v)) => (k.trim().to_ascii_uppercase(), v.trim().to_string()),
        None => {
            let mut parts = line.splitn(2, char::is_whitespace);
            let k = parts.next().unwrap_or("").trim().to_ascii_uppercase();
            let v = parts.next().unwrap_or("").trim().to_string();
            (k, v)
        }
    }
}

fn parse_number(token: &str, line: usize, what: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::parse(line, None, format!("non-numeric {what} '{token}'")))
}

/// Parses TSPLIB text into a validated instance.
pub fn parse_tsplib(text: &str) -> Result<TspInstance> {
    let lines: Vec<&str> = text.lines().collect();
    let mut header = Header::default();
    let mut coords: Option<Vec<Option<(f64, f64)>>> = None;
    let mut matrix_tokens: Option<(Vec<f64>, usize)> = None;
    let mut idx = 0;

    let require_dim = |header: &Header, line: usize, section: &str| -> Result<usize> {
        header
            .dimension
            .map(|(d, _)| d)
            .ok_or_else(|| Error::parse(line, Some("DIMENSION"), format!("DIMENSION must precede {section}")))
    };

    while idx < lines.len() {
        let lineno = idx + 1;
        let line = lines[idx].trim();
        idx += 1;
        if line.is_empty() {
            continue;
        }
        let (key, value) = split_header(line);
        match key.as_str() {
            "EOF" => break,
            "NAME" => set_once(&mut header.name, value, "NAME", lineno)?,
            "COMMENT" => {
                header.comment = Some(match header.comment.take() {
                    Some(prev) => format!("{prev}\n{value}"),
                    None => value,
                })
            }
            "TYPE" => {
                if value != "TSP" {
                    return Err(Error::parse(
                        lineno,
                        Some("TYPE"),
                        format!("unsupported problem type '{value}' (only TSP)"),
                    ));
                }
            }
            "DIMENSION" => {
                let d: usize = value
                    .parse()
                    .map_err(|_| Error::parse(lineno, Some("DIMENSION"), format!("invalid dimension '{value}'")))?;
                if d < 2 {
                    return Err(Error::parse(
                        lineno,
                        Some("DIMENSION"),
                        format!("dimension must be at least 2, got {d}"),
                    ));
                }
                if let Some((prev, _)) = header.dimension {
                    if prev != d {
                        return Err(Error::parse(lineno, Some("DIMENSION"), "contradictory DIMENSION header"));
                    }
                }
                header.dimension = Some((d, lineno));
            }
            "EDGE_WEIGHT_TYPE" => {
                let kind = match value.as_str() {
                    "EUC_2D" => WeightKind::Euc2d,
                    "EXPLICIT" => WeightKind::Explicit,
                    other => {
                        return Err(Error::parse(
                            lineno,
                            Some("EDGE_WEIGHT_TYPE"),
                            format!("unsupported edge weight type '{other}' (EUC_2D or EXPLICIT only)"),
                        ))
                    }
                };
                if let Some((prev, _)) = header.weight_kind {
                    if prev != kind {
                        return Err(Error::parse(
                            lineno,
                            Some("EDGE_WEIGHT_TYPE"),
                            "contradictory EDGE_WEIGHT_TYPE header",
                        ));
                    }
                }
                header.weight_kind = Some((kind, lineno));
            }
            "EDGE_WEIGHT_FORMAT" => {
                let f = MatrixFormat::parse(&value, lineno)?;
                if matches!(header.format, Some((prev, _)) if prev != f) {
                    return Err(Error::parse(
                        lineno,
                        Some("EDGE_WEIGHT_FORMAT"),
                        "contradictory EDGE_WEIGHT_FORMAT header",
                    ));
                }
                header.format = Some((f, lineno));
            }
            "NODE_COORD_SECTION" => {
                let n = require_dim(&header, lineno, "NODE_COORD_SECTION")?;
                let mut slots = vec![None; n];
                while idx < lines.len() {
                    let raw = lines[idx].trim();
                    let first = raw.split_whitespace().next().unwrap_or("");
                    if raw.is_empty() {
                        idx += 1;
                        continue;
                    }
                    if first.parse::<i64>().is_err() {
                        break;
                    }
                    let lineno = idx + 1;
                    idx += 1;
                    let toks: Vec<&str> = raw.split_whitespace().collect();
                    if toks.len() != 3 {
                        return Err(Error::parse(
                            lineno,
                            Some("NODE_COORD_SECTION"),
                            format!("expected 'id x y', got {} fields", toks.len()),
                        ));
                    }
                    let id: usize = toks[0].parse().unwrap_or(0);
                    if id == 0 || id > n {
                        return Err(Error::parse(
                            lineno,
                            Some("NODE_COORD_SECTION"),
                            format!("dimension mismatch: node id {} outside 1..={n}", toks[0]),
                        ));
                    }
                    let x = parse_number(toks[1], lineno, "coordinate")?;
                    let y = parse_number(toks[2], lineno, "coordinate")?;
                    if slots[id - 1].replace((x, y)).is_some() {
                        return Err(Error::parse(
                            lineno,
                            Some("NODE_COORD_SECTION"),
                            format!("duplicate node id {id}"),
                        ));
                    }
                }
                coords = Some(slots);
            }
            "EDGE_WEIGHT_SECTION" => {
                let n = require_dim(&header, lineno, "EDGE_WEIGHT_SECTION")?;
                let format = header.format.map(|(f, _)| f).ok_or_else(|| {
                    Error::parse(
                        lineno,
                        Some("EDGE_WEIGHT_FORMAT"),
                        "EDGE_WEIGHT_FORMAT must precede EDGE_WEIGHT_SECTION",
                    )
                })?;
                let want = format.entry_count(n);
                let mut values = Vec::with_capacity(want);
                while idx < lines.len() && values.len() < want {
                    let raw = lines[idx].trim();
                    let first = raw.split_whitespace().next().unwrap_or("");
                    if !raw.is_empty()
                        && first.parse::<f64>().is_err()
                        && first.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                    {
                        break;
                    }
                    let lineno = idx + 1;
                    idx += 1;
                    for tok in raw.split_whitespace() {
                        values.push(parse_number(tok, lineno, "edge weight")?);
                    }
                }
                if values.len() != want {
                    return Err(Error::parse(
                        idx,
                        Some("EDGE_WEIGHT_SECTION"),
                        format!("dimension mismatch: expected {want} weights, got {}", values.len()),
                    ));
                }
                matrix_tokens = Some((values, lineno));
            }
            "DISPLAY_DATA_SECTION" => {
                while idx < lines.len() {
                    let first = lines[idx].split_whitespace().next().unwrap_or("");
                    if !first.is_empty() && first.parse::<i64>().is_err() {
                        break;
                    }
                    idx += 1;
                }
            }
            // NODE_COORD_TYPE, DISPLAY_DATA_TYPE and anything else.
            _ => {}
        }
    }

    let last = lines.len().max(1);
    let name = header.name.ok_or_else(|| Error::parse(last, Some("NAME"), "missing NAME header"))?;
    let (n, _) = header.dimension.ok_or_else(|| Error::parse(last, Some("DIMENSION"), "missing DIMENSION header"))?;
    let (kind, kind_line) = header
        .weight_kind
        .ok_or_else(|| Error::parse(last, Some("EDGE_WEIGHT_TYPE"), "missing EDGE_WEIGHT_TYPE header"))?;

    let mut inst = match kind {
        WeightKind::Euc2d => {
            if matrix_tokens.is_some() {
                return Err(Error::parse(
                    kind_line,
                    Some("EDGE_WEIGHT_TYPE"),
                    "EUC_2D instance carries an EDGE_WEIGHT_SECTION",
                ));
            }
            let slots =
                coords.ok_or_else(|| Error::parse(last, Some("NODE_COORD_SECTION"), "missing NODE_COORD_SECTION"))?;
            let found = slots.iter().filter(|s| s.is_some()).count();
            if found != n {
                return Err(Error::parse(
                    last,
                    Some("NODE_COORD_SECTION"),
                    format!("dimension mismatch: DIMENSION is {n} but {found} coordinates given"),
                ));
            }
            TspInstance::from_coords(name, slots.into_iter().map(Option::unwrap).collect())?
        }
        WeightKind::Explicit => {
            let (values, section_line) = matrix_tokens
                .ok_or_else(|| Error::parse(last, Some("EDGE_WEIGHT_SECTION"), "missing EDGE_WEIGHT_SECTION"))?;
            let format = header.format.map(|(f, _)| f).unwrap_or(MatrixFormat::Full);
            let mut full = vec![0.0; n * n];
            for ((i, j), v) in format.cells(n).into_iter().zip(values) {
                if v < 0.0 {
                    return Err(Error::parse(
                        section_line,
                        Some("EDGE_WEIGHT_SECTION"),
                        format!("negative edge weight {v} at ({i}, {j})"),
                    ));
                }
                full[i * n + j] = v;
                if format != MatrixFormat::Full {
                    full[j * n + i] = v;
                }
            }
            for i in 0..n {
                full[i * n + i] = 0.0;
            }
            TspInstance::from_matrix(name, n, full)?
        }
    };
    inst.comment = header.comment;
    Ok(inst)
}

/// Best-known tour lengths keyed by instance name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OptimaRegistry {
    entries: BTreeMap<String, f64>,
}

impl OptimaRegistry {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        load_optima(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}

/// Reads a registry of `name length` lines; `#` starts a comment.
pub fn load_optima(text: &str) -> Result<OptimaRegistry> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::parse(lineno, None, "expected 'name length'"));
        }
        let length = parse_number(toks[1], lineno, "length")?;
        if length <= 0.0 {
            return Err(Error::parse(lineno, None, format!("non-positive length {length} for '{}'", toks[0])));
        }
        if entries.insert(toks[0].to_string(), length).is_some() {
            return Err(Error::parse(lineno, None, format!("duplicate instance name '{}'", toks[0])));
        }
    }
    Ok(OptimaRegistry { entries })
}
