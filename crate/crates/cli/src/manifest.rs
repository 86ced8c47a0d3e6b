//! The TOML model manifest.
//!
//! ```toml
//! name = "sl2-a"
//! dim = 3
//! v_dim = 2
//! brackets = [[1, 2, 3, "1"], [3, 1, 1, "2"], [3, 2, 2, "-2"]]
//! R = [[1, 1, 3, "1"]]
//! S = []
//! ```
//!
//! Indices are 1-based. A bracket entry `[i, j, k, c]` sets `[e_i, e_j] = c e_k`
//! and `[e_j, e_i] = -c e_k`. `R` entries `[j, k, alpha, c]` and `S` entries
//! `[j, k, l, alpha, c]` give one representative per unordered index set, with
//! `j, k, l ≤ v_dim < alpha`. Coefficients are strings `"p"` or `"p/q"`.
//! Omitted entries and lists are zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use num_traits::Zero;
use serde::Deserialize;
use toml::Spanned;
use webtensor_core::scalar::{format_rat, parse_rat};
use webtensor_core::series::MAX_V_DIM;
use webtensor_core::{LieAlgebra, Model, Rat, SectionJet, Split};

/// Keeps dense structure constant tables small.
pub const MAX_DIM: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    IndexOutOfRange,
    MalformedRational,
    ConflictingEntries,
    /// Wrong entry length, wrong value type or an impossible dimension.
    InvalidShape,
}

impl ErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::IndexOutOfRange => "index out of range",
            ErrorKind::MalformedRational => "malformed rational",
            ErrorKind::ConflictingEntries => "duplicate conflicting entries",
            ErrorKind::InvalidShape => "invalid shape",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestError {
    pub kind: ErrorKind,
    /// 1-based line in the manifest text, when known.
    pub line: Option<usize>,
    /// Field path such as `brackets[2]`.
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ManifestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "{field}: ")?;
        }
        write!(f, "{}: {}", self.kind.name(), self.message)
    }
}

impl std::error::Error for ManifestError {}

/// A validated manifest in canonical form: zero coefficients dropped,
/// brackets keyed with `i ≤ j`, jet slots sorted. All indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub name: String,
    pub dim: usize,
    pub v_dim: usize,
    pub brackets: BTreeMap<(usize, usize, usize), Rat>,
    pub r: BTreeMap<([usize; 2], usize), Rat>,
    pub s: BTreeMap<([usize; 3], usize), Rat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    #[serde(default)]
    name: String,
    dim: Spanned<i64>,
    v_dim: Spanned<i64>,
    #[serde(default)]
    brackets: Vec<Spanned<Vec<toml::Value>>>,
    #[serde(default, rename = "R")]
    r: Vec<Spanned<Vec<toml::Value>>>,
    #[serde(default, rename = "S")]
    s: Vec<Spanned<Vec<toml::Value>>>,
}

/// One entry as written: integer indices, then a coefficient.
#[derive(Clone, Debug)]
pub enum Value {
    Index(i64),
    Coefficient(String),
}

struct Location {
    line: Option<usize>,
    field: String,
}

impl Location {
    fn error(&self, kind: ErrorKind, message: impl Into<String>) -> ManifestError {
        ManifestError { kind, line: self.line, field: Some(self.field.clone()), message: message.into() }
    }
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let raw: Raw = toml::from_str(text).map_err(|e| ManifestError {
        kind: ErrorKind::Syntax,
        line: e.span().map(|s| line_of(text, s)),
        field: None,
        message: e.message().trim().to_string(),
    })?;
    let at = |field: String, span: Range<usize>| Location { line: Some(line_of(text, span)), field };
    let dim = at("dim".into(), raw.dim.span());
    let v_dim = at("v_dim".into(), raw.v_dim.span());
    let mut b = Builder::new(raw.name, (*raw.dim.get_ref(), dim), (*raw.v_dim.get_ref(), v_dim))?;
    for (list, entries) in [("brackets", &raw.brackets), ("R", &raw.r), ("S", &raw.s)] {
        for (pos, entry) in entries.iter().enumerate() {
            let loc = at(format!("{list}[{}]", pos + 1), entry.span());
            let values = entry.get_ref().iter().map(|v| convert(v, &loc)).collect::<Result<Vec<_>, _>>()?;
            b.add(list, &values, &loc)?;
        }
    }
    Ok(b.finish())
}

fn convert(value: &toml::Value, loc: &Location) -> Result<Value, ManifestError> {
    match value {
        toml::Value::Integer(i) => Ok(Value::Index(*i)),
        toml::Value::String(s) => Ok(Value::Coefficient(s.clone())),
        other => Err(loc.error(ErrorKind::InvalidShape, format!("unexpected {} in entry", other.type_str()))),
    }
}

struct Builder {
    manifest: Manifest,
}

impl Builder {
    fn new(name: String, dim: (i64, Location), v_dim: (i64, Location)) -> Result<Self, ManifestError> {
        let (d, dloc) = dim;
        let (n, nloc) = v_dim;
        if d < 1 || d as usize > MAX_DIM {
            return Err(dloc.error(ErrorKind::InvalidShape, format!("dim = {d}, expected 1..={MAX_DIM}")));
        }
        let top = MAX_V_DIM.min(d as usize);
        if n < 1 || n as usize > top {
            return Err(nloc.error(ErrorKind::InvalidShape, format!("v_dim = {n}, expected 1..={top}")));
        }
        let manifest = Manifest {
            name,
            dim: d as usize,
            v_dim: n as usize,
            brackets: BTreeMap::new(),
            r: BTreeMap::new(),
            s: BTreeMap::new(),
        };
        Ok(Self { manifest })
    }

    fn finish(mut self) -> Manifest {
        let m = &mut self.manifest;
        m.brackets.retain(|_, v| !v.is_zero());
        m.r.retain(|_, v| !v.is_zero());
        m.s.retain(|_, v| !v.is_zero());
        self.manifest
    }

    fn add(&mut self, list: &str, values: &[Value], loc: &Location) -> Result<(), ManifestError> {
        let (dim, n) = (self.manifest.dim, self.manifest.v_dim);
        let (labels, ranges): (&[&str], Vec<(usize, usize)>) = match list {
            "brackets" => (&["i", "j", "k"], vec![(1, dim); 3]),
            "R" => (&["j", "k", "alpha"], vec![(1, n), (1, n), (n + 1, dim)]),
            _ => (&["j", "k", "l", "alpha"], vec![(1, n), (1, n), (1, n), (n + 1, dim)]),
        };
        if values.len() != labels.len() + 1 {
            return Err(loc.error(
                ErrorKind::InvalidShape,
                format!("expected {} indices and a coefficient, found {} values", labels.len(), values.len()),
            ));
        }
        let mut idx = Vec::with_capacity(labels.len());
        for ((value, label), (lo, hi)) in values.iter().zip(labels.iter()).zip(&ranges) {
            let Value::Index(i) = value else {
                return Err(loc.error(ErrorKind::InvalidShape, format!("{label} must be an integer")));
            };
            if *i < *lo as i64 || *i > *hi as i64 {
                let msg = if lo > hi {
                    format!("{label} = {i}, but no index is available")
                } else {
                    format!("{label} = {i}, expected {lo}..={hi}")
                };
                return Err(loc.error(ErrorKind::IndexOutOfRange, msg));
            }
            idx.push(*i as usize - 1);
        }
        let value = match &values[labels.len()] {
            Value::Coefficient(text) => parse_rat(text)
                .ok_or_else(|| loc.error(ErrorKind::MalformedRational, format!("{text:?} is not of the form \"p\" or \"p/q\"")))?,
            Value::Index(i) => {
                return Err(loc.error(ErrorKind::MalformedRational, format!("coefficient {i} must be a string such as \"{i}\"")))
            }
        };
        let m = &mut self.manifest;
        match list {
            "brackets" => {
                let (i, j, k) = (idx[0], idx[1], idx[2]);
                let (key, v) = if i <= j { ((i, j, k), value) } else { ((j, i, k), -value) };
                insert(&mut m.brackets, key, v, loc)
            }
            "R" => {
                let mut slots = [idx[0], idx[1]];
                slots.sort_unstable();
                insert(&mut m.r, (slots, idx[2]), value, loc)
            }
            _ => {
                let mut slots = [idx[0], idx[1], idx[2]];
                slots.sort_unstable();
                insert(&mut m.s, (slots, idx[3]), value, loc)
            }
        }
    }
}

/// Zero values are kept while loading so that a later conflicting entry is
/// still caught.
fn insert<K: Ord + Clone + fmt::Debug>(map: &mut BTreeMap<K, Rat>, key: K, value: Rat, loc: &Location) -> Result<(), ManifestError> {
    match map.get(&key) {
        Some(old) if *old != value => Err(loc.error(
            ErrorKind::ConflictingEntries,
            format!("entry disagrees with an earlier one ({} vs {})", format_rat(old), format_rat(&value)),
        )),
        _ => {
            map.insert(key, value);
            Ok(())
        }
    }
}

/// Entry lists with 1-based indices and coefficient strings, as they
/// appear in a manifest.
#[derive(Clone, Debug, Default)]
pub struct Entries {
    pub brackets: Vec<(Vec<i64>, String)>,
    pub r: Vec<(Vec<i64>, String)>,
    pub s: Vec<(Vec<i64>, String)>,
}

impl Manifest {
    /// Validates entry lists exactly as [`parse_manifest`] does.
    pub fn from_entries(name: &str, dim: i64, v_dim: i64, entries: &Entries) -> Result<Self, ManifestError> {
        let nowhere = |field: &str| Location { line: None, field: field.to_string() };
        let mut b = Builder::new(name.to_string(), (dim, nowhere("dim")), (v_dim, nowhere("v_dim")))?;
        for (list, rows) in [("brackets", &entries.brackets), ("R", &entries.r), ("S", &entries.s)] {
            for (pos, (idx, coeff)) in rows.iter().enumerate() {
                let mut values: Vec<Value> = idx.iter().map(|&i| Value::Index(i)).collect();
                values.push(Value::Coefficient(coeff.clone()));
                b.add(list, &values, &nowhere(&format!("{list}[{}]", pos + 1)))?;
            }
        }
        Ok(b.finish())
    }

    /// Canonical text; `parse_manifest(&m.emit()) == Ok(m)`.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name = {}\n", toml::Value::String(self.name.clone())));
        out.push_str(&format!("dim = {}\nv_dim = {}\n", self.dim, self.v_dim));
        let list = |out: &mut String, key: &str, rows: Vec<(Vec<usize>, &Rat)>| {
            if rows.is_empty() {
                out.push_str(&format!("{key} = []\n"));
                return;
            }
            out.push_str(&format!("{key} = [\n"));
            for (idx, v) in rows {
                let idx: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
                out.push_str(&format!("    [{}, \"{}\"],\n", idx.join(", "), format_rat(v)));
            }
            out.push_str("]\n");
        };
        list(&mut out, "brackets", self.brackets.iter().map(|(&(i, j, k), v)| (vec![i, j, k], v)).collect());
        list(&mut out, "R", self.r.iter().map(|(&(sl, a), v)| (vec![sl[0], sl[1], a], v)).collect());
        list(&mut out, "S", self.s.iter().map(|(&(sl, a), v)| (vec![sl[0], sl[1], sl[2], a], v)).collect());
        out
    }

    /// The model, without checking antisymmetry, Jacobi or the subalgebra
    /// condition; those are reported by the `validate` suite.
    pub fn model(&self) -> Result<Model<Rat>, ManifestError> {
        let mut raw = Vec::new();
        for (&(i, j, k), c) in &self.brackets {
            raw.push((i, j, k, c.clone()));
            if i != j {
                raw.push((j, i, k, -c.clone()));
            }
        }
        let internal = |e: webtensor_core::Error| ManifestError { kind: ErrorKind::InvalidShape, line: None, field: None, message: e.to_string() };
        let split = Split::new(LieAlgebra::from_raw_entries(self.dim, &raw), self.v_dim).map_err(internal)?;
        let r: Vec<_> = self.r.iter().map(|(&(sl, a), v)| (sl.to_vec(), a, v.clone())).collect();
        let s: Vec<_> = self.s.iter().map(|(&(sl, a), v)| (sl.to_vec(), a, v.clone())).collect();
        let jet = SectionJet::from_entries(&split, &r, &s).map_err(internal)?;
        Ok(Model::new(self.name.clone(), split, jet))
    }
}
