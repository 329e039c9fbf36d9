//! JSON file formats for lattices, semirings and matrices.
//!
//! Elements are always written as labels. Sources are either a path or
//! `builtin:<name>`; relative paths inside a matrix file resolve against
//! the matrix file's directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::lattice::{build_lattice, FiniteLattice, LatticeError};
use crate::matrix::{MatrixError, ResMatrix, SemiringMatrix};
use crate::resmap::{MapError, ResiduatedMap};
use crate::semiring::{FiniteSemiring, SemiringError};

pub const BUILTIN_PREFIX: &str = "builtin:";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("`{0}` is a lattice builtin, a semiring was expected")]
    NotASemiring(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub labels: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

impl LatticeFile {
    pub fn from_lattice(l: &FiniteLattice) -> Self {
        LatticeFile {
            labels: l.labels().to_vec(),
            covers: l.covers().into_iter().map(|(a, b)| [l.label(a).to_owned(), l.label(b).to_owned()]).collect(),
        }
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice, LatticeError> {
        let covers: Vec<(&str, &str)> = self.covers.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        build_lattice(&self.labels, &covers)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiringFile {
    pub labels: Vec<String>,
    pub add: Vec<Vec<String>>,
    pub mul: Vec<Vec<String>>,
    pub zero: String,
    pub one: String,
}

impl SemiringFile {
    pub fn from_semiring(r: &FiniteSemiring) -> Self {
        let table = |op: &dyn Fn(usize, usize) -> usize| {
            (0..r.len()).map(|x| (0..r.len()).map(|y| r.label(op(x, y)).to_owned()).collect()).collect()
        };
        SemiringFile {
            labels: r.labels().to_vec(),
            add: table(&|x, y| r.add(x, y)),
            mul: table(&|x, y| r.mul(x, y)),
            zero: r.label(r.zero()).to_owned(),
            one: r.label(r.one()).to_owned(),
        }
    }

    pub fn to_semiring(&self) -> Result<FiniteSemiring, FormatError> {
        let n = self.labels.len();
        let lookup =
            |s: &str| self.labels.iter().position(|l| l == s).ok_or_else(|| FormatError::UnknownLabel(s.to_owned()));
        let flatten = |name: &str, rows: &[Vec<String>]| -> Result<Vec<usize>, FormatError> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(FormatError::Shape(format!("`{name}` must be a {n} x {n} table")));
            }
            rows.iter().flatten().map(|s| lookup(s)).collect()
        };
        let add = flatten("add", &self.add)?;
        let mul = flatten("mul", &self.mul)?;
        Ok(FiniteSemiring::new(self.labels.clone(), add, mul, lookup(&self.zero)?, lookup(&self.one)?)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Res,
    Semiring,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixEntries {
    /// Each entry is the value table of a map, as labels.
    Res(Vec<Vec<Vec<String>>>),
    /// Each entry is a semiring element label.
    Semiring(Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub base: String,
    pub kind: MatrixKind,
    pub n: usize,
    pub entries: MatrixEntries,
}

/// A matrix file after its base has been loaded.
#[derive(Debug, Clone)]
pub enum LoadedMatrix {
    Res(ResMatrix),
    Semiring(SemiringMatrix),
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| FormatError::Parse { path: path.to_owned(), source })
}

fn resolve(source: &str, dir: Option<&Path>) -> PathBuf {
    let path = Path::new(source);
    match dir {
        Some(d) if path.is_relative() => d.join(path),
        _ => path.to_owned(),
    }
}

/// Loads `builtin:<name>` or a lattice file.
pub fn load_lattice(source: &str) -> Result<FiniteLattice, FormatError> {
    load_lattice_in(source, None)
}

fn load_lattice_in(source: &str, dir: Option<&Path>) -> Result<FiniteLattice, FormatError> {
    if let Some(name) = source.strip_prefix(BUILTIN_PREFIX) {
        if let Some(l) = catalog::lattice(name) {
            return Ok(l);
        }
        // A semiring builtin stands for its natural order lattice.
        let r = catalog::semiring(name).ok_or_else(|| FormatError::UnknownBuiltin(name.to_owned()))?;
        return Ok(crate::semiring::natural_order_lattice(&r)?);
    }
    let file: LatticeFile = read_json(&resolve(source, dir))?;
    Ok(file.to_lattice()?)
}

/// Loads `builtin:<name>` or a semiring file.
pub fn load_semiring(source: &str) -> Result<FiniteSemiring, FormatError> {
    load_semiring_in(source, None)
}

fn load_semiring_in(source: &str, dir: Option<&Path>) -> Result<FiniteSemiring, FormatError> {
    if let Some(name) = source.strip_prefix(BUILTIN_PREFIX) {
        return match catalog::semiring(name) {
            Some(r) => Ok(r),
            None if catalog::lattice(name).is_some() => Err(FormatError::NotASemiring(name.to_owned())),
            None => Err(FormatError::UnknownBuiltin(name.to_owned())),
        };
    }
    let file: SemiringFile = read_json(&resolve(source, dir))?;
    file.to_semiring()
}

pub fn load_matrix(path: &Path) -> Result<LoadedMatrix, FormatError> {
    let file: MatrixFile = read_json(path)?;
    matrix_from_file(&file, path.parent())
}

/// Builds a matrix from a parsed file; `dir` anchors a relative `base`.
pub fn matrix_from_file(file: &MatrixFile, dir: Option<&Path>) -> Result<LoadedMatrix, FormatError> {
    let n = file.n;
    let shape_err = || FormatError::Shape(format!("`entries` must be a {n} x {n} array"));
    match (file.kind, &file.entries) {
        (MatrixKind::Semiring, MatrixEntries::Semiring(rows)) => {
            let r = Arc::new(load_semiring_in(&file.base, dir)?);
            if rows.len() != n || rows.iter().any(|row| row.len() != n) {
                return Err(shape_err());
            }
            let entries = rows
                .iter()
                .flatten()
                .map(|s| r.index_of(s).ok_or_else(|| FormatError::UnknownLabel(s.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(LoadedMatrix::Semiring(SemiringMatrix::new(&r, n, entries)?))
        }
        (MatrixKind::Res, MatrixEntries::Res(rows)) => {
            let l = Arc::new(load_lattice_in(&file.base, dir)?);
            if rows.len() != n || rows.iter().any(|row| row.len() != n) {
                return Err(shape_err());
            }
            let entries =
                rows.iter().flatten().map(|table| map_from_labels(&l, table)).collect::<Result<Vec<_>, _>>()?;
            Ok(LoadedMatrix::Res(ResMatrix::new(&l, n, entries)?))
        }
        (kind, _) => Err(FormatError::Shape(format!("entries do not match kind {kind:?}"))),
    }
}

pub fn map_from_labels(l: &Arc<FiniteLattice>, table: &[String]) -> Result<ResiduatedMap, FormatError> {
    let values = table
        .iter()
        .map(|s| l.index_of(s).ok_or_else(|| FormatError::UnknownLabel(s.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ResiduatedMap::new(l, values)?)
}

pub fn map_to_labels(f: &ResiduatedMap) -> Vec<String> {
    f.values().iter().map(|&v| f.lattice().label(v).to_owned()).collect()
}

pub fn res_matrix_file(m: &ResMatrix, base: &str) -> MatrixFile {
    let n = m.size();
    MatrixFile {
        base: base.to_owned(),
        kind: MatrixKind::Res,
        n,
        entries: MatrixEntries::Res((0..n).map(|i| (0..n).map(|j| map_to_labels(m.entry(i, j))).collect()).collect()),
    }
}

pub fn semiring_matrix_file(m: &SemiringMatrix, base: &str) -> MatrixFile {
    let n = m.size();
    let r = m.semiring();
    MatrixFile {
        base: base.to_owned(),
        kind: MatrixKind::Semiring,
        n,
        entries: MatrixEntries::Semiring(
            (0..n).map(|i| (0..n).map(|j| r.label(m.entry(i, j)).to_owned()).collect()).collect(),
        ),
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("file types always serialize")
}

/// Pretty-prints a matrix file with one matrix row per line.
pub fn matrix_to_json(file: &MatrixFile) -> String {
    fn compact<T: Serialize>(v: &T) -> String {
        serde_json::to_string(v).expect("file types always serialize")
    }
    let rows: Vec<String> = match &file.entries {
        MatrixEntries::Res(rows) => rows.iter().map(compact).collect(),
        MatrixEntries::Semiring(rows) => rows.iter().map(compact).collect(),
    };
    format!(
        "{{\n  \"base\": {},\n  \"kind\": {},\n  \"n\": {},\n  \"entries\": [\n    {}\n  ]\n}}",
        compact(&file.base),
        compact(&file.kind),
        file.n,
        rows.join(",\n    ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_file_round_trip() {
        for &name in catalog::LATTICES {
            let l = catalog::lattice(name).unwrap();
            let file = LatticeFile::from_lattice(&l);
            let json = to_json_pretty(&file);
            let back: LatticeFile = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_lattice().unwrap(), l, "{name}");
        }
    }

    #[test]
    fn semiring_file_round_trip() {
        for &name in catalog::SEMIRINGS {
            let r = catalog::semiring(name).unwrap();
            let back = SemiringFile::from_semiring(&r).to_semiring().unwrap();
            assert_eq!(back, r, "{name}");
        }
    }

    #[test]
    fn parses_a_semiring_matrix() {
        let json = r#"{"base":"builtin:bool","kind":"semiring","n":2,"entries":[["0","1"],["1","0"]]}"#;
        let file: MatrixFile = serde_json::from_str(json).unwrap();
        let LoadedMatrix::Semiring(m) = matrix_from_file(&file, None).unwrap() else {
            panic!("expected a semiring matrix");
        };
        assert_eq!(m.entries(), &[0, 1, 1, 0]);
        assert_eq!(semiring_matrix_file(&m, "builtin:bool"), file);
        let reparsed: MatrixFile = serde_json::from_str(&matrix_to_json(&file)).unwrap();
        assert_eq!(reparsed, file);
    }

    #[test]
    fn parses_a_res_matrix() {
        let json = r#"{"base":"builtin:chain2","kind":"res","n":1,"entries":[[["0","1"]]]}"#;
        let file: MatrixFile = serde_json::from_str(json).unwrap();
        let LoadedMatrix::Res(m) = matrix_from_file(&file, None).unwrap() else {
            panic!("expected a res matrix");
        };
        assert!(m.is_identity());
        assert_eq!(res_matrix_file(&m, "builtin:chain2"), file);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(load_lattice("builtin:nope"), Err(FormatError::UnknownBuiltin(_))));
        assert!(matches!(load_semiring("builtin:m3"), Err(FormatError::NotASemiring(_))));
        let bad = r#"{"base":"builtin:bool","kind":"semiring","n":2,"entries":[["0","1"]]}"#;
        let file: MatrixFile = serde_json::from_str(bad).unwrap();
        assert!(matches!(matrix_from_file(&file, None), Err(FormatError::Shape(_))));
        let bad = r#"{"base":"builtin:chain2","kind":"res","n":1,"entries":[[["1","1"]]]}"#;
        let file: MatrixFile = serde_json::from_str(bad).unwrap();
        assert!(matches!(matrix_from_file(&file, None), Err(FormatError::Map(_))));
    }

    #[test]
    fn relative_base_resolves_against_matrix_dir() {
        let dir = std::env::temp_dir().join(format!("idemat-formats-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let lattice = LatticeFile::from_lattice(&catalog::lattice("chain3").unwrap());
        fs::write(dir.join("c3.json"), to_json_pretty(&lattice)).unwrap();
        let m = r#"{"base":"c3.json","kind":"res","n":1,"entries":[[["0","1","2"]]]}"#;
        fs::write(dir.join("m.json"), m).unwrap();
        let loaded = load_matrix(&dir.join("m.json")).unwrap();
        fs::remove_dir_all(&dir).unwrap();
        assert!(matches!(loaded, LoadedMatrix::Res(m) if m.is_identity()));
    }
}
