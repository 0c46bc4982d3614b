//! JSON and CSV formats for groupoids, functions, operators, kernels,
//! grid symbols and tomograms.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::GroupoidFunction;
use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::linalg::{OperatorMatrix, C64};
use crate::realizations::GridSymbol;
use crate::starprod::Kernel3;
use crate::tomography::{PhotonTomogram, SpinTomogram, SymplecticTomogram};

/// Largest index space exported as a kernel CSV.
pub const KERNEL_CSV_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupoidFile {
    pub order: usize,
    pub units: Vec<usize>,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub inverse: Vec<usize>,
    /// Defined triples `(a, b, a∘b)`.
    pub compose: Vec<[usize; 3]>,
}

impl GroupoidFile {
    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        GroupoidFile {
            order: g.order(),
            units: g.units().to_vec(),
            source: g.sources().to_vec(),
            target: g.targets().to_vec(),
            inverse: g.inverses().to_vec(),
            compose: g.triples().iter().map(|t| [t[0] as usize, t[1] as usize, t[2] as usize]).collect(),
        }
    }

    pub fn build(&self) -> Result<FiniteGroupoid> {
        FiniteGroupoid::from_parts(
            self.order,
            self.units.clone(),
            self.source.clone(),
            self.target.clone(),
            self.inverse.clone(),
            &self.compose,
        )
    }
}

pub fn groupoid_to_json(g: &FiniteGroupoid) -> String {
    serde_json::to_string_pretty(&GroupoidFile::from_groupoid(g)).expect("groupoid serializes")
}

/// Parses a groupoid file. The axioms are not checked here.
pub fn groupoid_from_json(text: &str) -> Result<FiniteGroupoid> {
    serde_json::from_str::<GroupoidFile>(text)?.build()
}

pub fn read_groupoid(path: &Path) -> Result<FiniteGroupoid> {
    groupoid_from_json(&std::fs::read_to_string(path)?)
}

fn pairs(values: &[C64]) -> Vec<[f64; 2]> {
    values.iter().map(|v| [v.re, v.im]).collect()
}

fn complexes(values: &[[f64; 2]]) -> Vec<C64> {
    values.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

/// Owner of a function: inline or a path relative to the function file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupoidRef {
    Inline(GroupoidFile),
    File(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub groupoid: GroupoidRef,
    pub values: Vec<[f64; 2]>,
}

pub fn function_to_json(f: &GroupoidFunction) -> String {
    let file = FunctionFile {
        groupoid: GroupoidRef::Inline(GroupoidFile::from_groupoid(f.owner())),
        values: pairs(f.values()),
    };
    serde_json::to_string_pretty(&file).expect("function serializes")
}

/// Parses a function file; referenced groupoid files are resolved against `base`.
pub fn function_from_json(text: &str, base: Option<&Path>) -> Result<GroupoidFunction> {
    let file: FunctionFile = serde_json::from_str(text)?;
    let owner = match &file.groupoid {
        GroupoidRef::Inline(g) => g.build()?,
        GroupoidRef::File(p) => {
            let path = base.map(|b| b.join(p)).unwrap_or_else(|| p.into());
            read_groupoid(&path)?
        }
    };
    GroupoidFunction::new(Arc::new(owner), complexes(&file.values))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub dim: usize,
    /// Row-major entries.
    pub entries: Vec<[f64; 2]>,
}

pub fn operator_to_json(a: &OperatorMatrix) -> String {
    let entries = (0..a.nrows()).flat_map(|r| (0..a.ncols()).map(move |c| (r, c))).map(|(r, c)| [a[(r, c)].re, a[(r, c)].im]);
    let file = OperatorFile { dim: a.nrows(), entries: entries.collect() };
    serde_json::to_string(&file).expect("operator serializes")
}

pub fn operator_from_json(text: &str) -> Result<OperatorMatrix> {
    let file: OperatorFile = serde_json::from_str(text)?;
    if file.entries.len() != file.dim * file.dim {
        return Err(Error::Malformed(format!(
            "{} entries for a {}x{} operator",
            file.entries.len(),
            file.dim,
            file.dim
        )));
    }
    let v = complexes(&file.entries);
    Ok(OperatorMatrix::from_fn(file.dim, file.dim, |r, c| v[r * file.dim + c]))
}

fn csv_error(err: csv::Error) -> Error {
    Error::Io(err.to_string())
}

fn write_rows<W: Write, R: Serialize>(out: W, header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Rows `(x1, x2, x, re, im)`.
pub fn write_kernel_csv<W: Write>(k: &Kernel3, out: W) -> Result<()> {
    let m = k.size();
    if m > KERNEL_CSV_LIMIT {
        return Err(Error::KernelTooLarge { points: m, limit: KERNEL_CSV_LIMIT });
    }
    let rows = (0..m * m * m).map(|i| {
        let (x1, x2, x) = (i / (m * m), (i / m) % m, i % m);
        let v = k.get(x1, x2, x);
        (x1, x2, x, v.re, v.im)
    });
    write_rows(out, &["x1", "x2", "x", "re", "im"], rows)
}

/// Rows `(x, y, re, im)` over the grid.
pub fn write_grid_symbol_csv<W: Write>(f: &GridSymbol, out: W) -> Result<()> {
    let pts = &f.grid.points;
    let rows = (0..pts.len()).flat_map(|i| (0..pts.len()).map(move |k| (i, k))).map(|(i, k)| {
        let v = f.values[(i, k)];
        (pts[i], pts[k], v.re, v.im)
    });
    write_rows(out, &["x", "y", "re", "im"], rows)
}

pub fn write_spin_tomograms_csv<W: Write>(tomograms: &[SpinTomogram], out: W) -> Result<()> {
    let rows = tomograms.iter().flat_map(|t| {
        t.probabilities.iter().enumerate().map(move |(i, &p)| (t.j, t.g.alpha, t.g.beta, t.g.gamma, i as f64 - t.j, p))
    });
    write_rows(out, &["j", "alpha", "beta", "gamma", "m", "probability"], rows)
}

/// Rows `(re_z, im_z, n, P)` where `P` is `𝒫(n, −z) = Φ(n, n; z)` at lattice point `z`.
pub fn write_photon_tomogram_csv<W: Write>(t: &PhotonTomogram, out: W) -> Result<()> {
    let rows = t
        .z_grid
        .points
        .iter()
        .zip(&t.table)
        .flat_map(|(z, col)| col.iter().enumerate().map(move |(n, &p)| (z.re, z.im, n, p)));
    write_rows(out, &["re_z", "im_z", "n", "P"], rows)
}

pub fn write_symplectic_tomograms_csv<W: Write>(tomograms: &[SymplecticTomogram], out: W) -> Result<()> {
    let rows = tomograms.iter().flat_map(|t| t.atoms.iter().map(move |a| (t.mu, t.nu, a.x, a.p)));
    write_rows(out, &["mu", "nu", "x_k", "p_k"], rows)
}
