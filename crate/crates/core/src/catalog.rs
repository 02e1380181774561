//! Fixed matrices: Fourier matrices, the dimension-4 triplet, the explicit
//! dimension-8 quintuplet and the full nine-basis set in dimension 8.
//!
//! Bases store their vectors as columns.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gerengine::er_classes;
use crate::matcore::{phase, ComplexMatrix, Tolerance, C64, I, ONE, ZERO};

/// `(F_N)_{jk} = e^{2 pi i jk / N} / sqrt(N)`
pub fn fourier(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("Fourier matrix of size 0".into()));
    }
    let s = 1.0 / (n as f64).sqrt();
    Ok(ComplexMatrix::from_fn(n, n, |j, k| {
        phase(2.0 * PI * ((j * k) % n) as f64 / n as f64) * s
    }))
}

/// An ordered list of bases in a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    dim: usize,
    bases: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

/// Worst deviation from orthonormality or unbiasedness found in a set of bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub worst: f64,
    /// (basis a, basis b, column of a, column of b); `a == b` for orthonormality failures.
    pub location: (usize, usize, usize, usize),
}

/// Scans every basis for orthonormality and every pair of bases for
/// `| |<phi_j, psi_k>|^2 - 1/N |`.
pub fn deviation(bases: &[ComplexMatrix]) -> Deviation {
    let mut dev = Deviation {
        worst: 0.0,
        location: (0, 0, 0, 0),
    };
    let Some(first) = bases.first() else {
        return dev;
    };
    let n = first.rows();
    let inv_n = 1.0 / n as f64;
    let daggers: Vec<ComplexMatrix> = bases.iter().map(ComplexMatrix::dagger).collect();
    for (a, da) in daggers.iter().enumerate() {
        for (b, bb) in bases.iter().enumerate().skip(a) {
            let Ok(g) = da.matmul(bb) else {
                return Deviation {
                    worst: f64::INFINITY,
                    location: (a, b, 0, 0),
                };
            };
            for j in 0..g.rows() {
                for k in 0..g.cols() {
                    let err = if a == b {
                        (g[(j, k)] - if j == k { ONE } else { ZERO }).norm()
                    } else {
                        (g[(j, k)].norm_sqr() - inv_n).abs()
                    };
                    if err > dev.worst || err.is_nan() {
                        dev = Deviation {
                            worst: err,
                            location: (a, b, j, k),
                        };
                    }
                }
            }
        }
    }
    dev
}

impl MubSet {
    /// Validates orthonormality and pairwise unbiasedness at `tol`.
    pub fn new(bases: Vec<ComplexMatrix>, labels: Vec<String>, tol: Tolerance) -> Result<Self> {
        let set = Self::new_unchecked(bases, labels)?;
        let dev = deviation(&set.bases);
        if dev.worst > tol.eps() {
            return Err(Error::NotMub {
                worst: dev.worst,
                location: dev.location,
            });
        }
        Ok(set)
    }

    /// Checks shapes only. Used for deliberately invalid sets.
    pub fn new_unchecked(bases: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        let dim = bases.first().map_or(0, ComplexMatrix::rows);
        if dim == 0 {
            return Err(Error::InvalidDimension("empty set of bases".into()));
        }
        for b in &bases {
            if b.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch {
                    op: "MubSet",
                    left: (dim, dim),
                    right: b.shape(),
                });
            }
        }
        if labels.len() != bases.len() {
            return Err(Error::BadShape {
                expected: bases.len(),
                found: labels.len(),
            });
        }
        Ok(MubSet { dim, bases, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of bases.
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[ComplexMatrix] {
        &self.bases
    }

    pub fn basis(&self, b: usize) -> &ComplexMatrix {
        &self.bases[b]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn deviation(&self) -> Deviation {
        deviation(&self.bases)
    }

    pub fn is_mub(&self, tol: Tolerance) -> bool {
        self.deviation().worst <= tol.eps()
    }

    /// The bases at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<MubSet> {
        let mut bases = Vec::with_capacity(indices.len());
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::InvalidDimension(format!(
                    "basis index {i} out of range for a set of {}",
                    self.len()
                )));
            }
            bases.push(self.bases[i].clone());
            labels.push(self.labels[i].clone());
        }
        Self::new_unchecked(bases, labels)
    }

    /// Same labels and dimension, new matrices.
    pub fn with_bases(&self, bases: Vec<ComplexMatrix>) -> Result<MubSet> {
        Self::new_unchecked(bases, self.labels.clone())
    }

    pub fn to_file(&self) -> MubSetFile {
        MubSetFile {
            dim: self.dim,
            bases: self
                .bases
                .iter()
                .map(|b| b.data().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_file(file: MubSetFile, tol: Tolerance) -> Result<MubSet> {
        let n = file.dim;
        let mut bases = Vec::with_capacity(file.bases.len());
        for flat in file.bases {
            let data = flat.into_iter().map(|[re, im]| C64::new(re, im)).collect();
            bases.push(ComplexMatrix::new(n, n, data)?);
        }
        Self::new(bases, file.labels, tol)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str, tol: Tolerance) -> Result<MubSet> {
        let file: MubSetFile = serde_json::from_str(text)?;
        Self::from_file(file, tol)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

/// On-disk form of a [`MubSet`]: row-major matrices of `[re, im]` pairs.
///
/// Floats are written in shortest round-trip form, which reproduces every
/// bit of the stored value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubSetFile {
    pub dim: usize,
    pub bases: Vec<Vec<[f64; 2]>>,
    pub labels: Vec<String>,
}

pub fn load_mubset(path: impl AsRef<Path>, tol: Tolerance) -> Result<MubSet> {
    let text = std::fs::read_to_string(path)?;
    MubSet::from_json(&text, tol)
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// The dimension-4 triplet `{I, H2, H3}`.
///
/// Stored with prefactor 1/2; entries are unimodular up to that factor.
pub fn dim4_triplet() -> MubSet {
    let h2 = [
        [ONE, ONE, ONE, ONE],
        [ONE, ONE, -ONE, -ONE],
        [ONE, -ONE, I, -I],
        [ONE, -ONE, -I, I],
    ];
    let h3 = [
        [ONE, ONE, ONE, ONE],
        [ONE, ONE, -ONE, -ONE],
        [-ONE, ONE, ONE, -ONE],
        [ONE, -ONE, ONE, -ONE],
    ];
    let mk = |m: [[C64; 4]; 4]| ComplexMatrix::from_fn(4, 4, |i, j| m[i][j] * 0.5);
    MubSet::new(
        vec![ComplexMatrix::identity(4), mk(h2), mk(h3)],
        labels(&["I", "H2", "H3"]),
        Tolerance::CONSTRUCTION,
    )
    .expect("dimension-4 triplet is a MUB set")
}

fn parse_unit(tok: &str) -> C64 {
    match tok {
        "1" => ONE,
        "-1" => -ONE,
        "i" => I,
        "-i" => -I,
        _ => unreachable!("bad entry {tok}"),
    }
}

/// 8x8 matrix from rows of `{1,-1,i,-i}` tokens, scaled by `1/sqrt(8)`.
fn unit8(rows: [&str; 8]) -> ComplexMatrix {
    let s = 1.0 / 8f64.sqrt();
    let entries: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.split_whitespace().map(|t| parse_unit(t) * s).collect())
        .collect();
    ComplexMatrix::from_rows(&entries).expect("8x8")
}

/// `H1` at zero parameters.
///
/// Row 6, columns 5 and 6 are the unique eighth-root choice that keeps the
/// quintuplet unbiased; see [`repair_h1_row6`].
const H1_ROWS: [&str; 8] = [
    "-i -i i i -i i i -i",
    "-i -i -i i i -i i i",
    "-i i i -i -i -i i i",
    "i -i i i -i -i -i i",
    "1 -1 -1 -1 -1 1 1 1",
    "1 -1 1 -1 1 -1 1 -1",
    "-1 -1 1 -1 1 1 -1 1",
    "1 1 1 1 1 1 1 1",
];

const H2_ROWS: [&str; 8] = [
    "-1 1 -1 -1 1 1 1 -1",
    "-i -i -i i i i -i i",
    "-i i i i i -i -i -i",
    "-1 -1 1 -1 1 -1 1 1",
    "-1 1 1 -1 -1 1 -1 1",
    "-i -i i i -i i i -i",
    "i -i i -i i i -i -i",
    "1 1 1 1 1 1 1 1",
];

const H3_ROWS: [&str; 8] = [
    "i i i -i -i -i i -i",
    "-1 1 1 1 1 -1 -1 -1",
    "-1 1 -1 -1 1 1 1 -1",
    "-i -i i -i i -i i i",
    "-1 -1 1 1 -1 1 1 -1",
    "-i i -i i -i -i i i",
    "-i i i -i -i i -i i",
    "1 1 1 1 1 1 1 1",
];

const H5_ROWS: [&str; 8] = [
    "1 -1 1 1 -1 -1 -1 1",
    "1 -1 -1 1 1 1 -1 -1",
    "-i -i -i i i -i i i",
    "-i -i i i -i i i -i",
    "i -i -i -i -i i i i",
    "-i i -i i -i i -i i",
    "-1 -1 1 -1 1 1 -1 1",
    "1 1 1 1 1 1 1 1",
];

/// `{I, H1, H2, H3, H5}` in dimension 8, each Hadamard basis scaled by `1/sqrt(8)`.
pub fn dim8_explicit() -> MubSet {
    MubSet::new(
        vec![
            ComplexMatrix::identity(8),
            unit8(H1_ROWS),
            unit8(H2_ROWS),
            unit8(H3_ROWS),
            unit8(H5_ROWS),
        ],
        labels(&["I", "H1", "H2", "H3", "H5"]),
        Tolerance::CONSTRUCTION,
    )
    .expect("explicit quintuplet is a MUB set")
}

/// Tries every pair of eighth roots of unity at row 6, columns 5 and 6 of
/// `H1` (1-indexed) and returns the choices for which `{I, H1, H2, H3, H5}`
/// is a MUB set. Returns exponent pairs `(a, b)` for entries
/// `(e^{i pi a/4}, e^{i pi b/4})` at columns 5 and 6, before scaling.
pub fn repair_h1_row6(tol: Tolerance) -> Vec<(usize, usize)> {
    let base = dim8_explicit();
    let s = 1.0 / 8f64.sqrt();
    let roots: Vec<C64> = (0..8).map(|k| phase(PI * k as f64 / 4.0)).collect();
    let mut found = Vec::new();
    for (ka, &a) in roots.iter().enumerate() {
        for (kb, &b) in roots.iter().enumerate() {
            let mut h1 = base.basis(1).clone();
            h1[(5, 4)] = a * s;
            h1[(5, 5)] = b * s;
            let mut bases = base.bases().to_vec();
            bases[1] = h1;
            if deviation(&bases).worst <= tol.eps() {
                found.push((ka, kb));
            }
        }
    }
    found
}

/// One cell of the GER table: two complementary groups of 1-indexed columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GerCell {
    pub groups: [Vec<usize>; 2],
}

impl GerCell {
    /// Normalizes group order (by smallest element) and sorts each group.
    pub fn new(mut a: Vec<usize>, mut b: Vec<usize>) -> Self {
        a.sort_unstable();
        b.sort_unstable();
        if b < a {
            std::mem::swap(&mut a, &mut b);
        }
        GerCell { groups: [a, b] }
    }

    /// Groups from 0-indexed column classes.
    pub fn from_classes(classes: &[Vec<usize>]) -> Option<Self> {
        match classes {
            [a, b] => Some(Self::new(
                a.iter().map(|c| c + 1).collect(),
                b.iter().map(|c| c + 1).collect(),
            )),
            _ => None,
        }
    }

    pub fn partitions(&self, n: usize) -> bool {
        let mut all: Vec<usize> = self.groups.concat();
        all.sort_unstable();
        all == (1..=n).collect::<Vec<_>>()
    }
}

impl std::fmt::Display for GerCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let g = |v: &Vec<usize>| v.iter().map(usize::to_string).collect::<Vec<_>>().join("-");
        write!(f, "{};{}", g(&self.groups[0]), g(&self.groups[1]))
    }
}

impl std::str::FromStr for GerCell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |part: &str| -> Result<Vec<usize>> {
            part.split('-')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad cell {s:?}"))))
                .collect()
        };
        let (a, b) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("bad cell {s:?}")))?;
        Ok(GerCell::new(parse(a)?, parse(b)?))
    }
}

/// Columns of `H_k` grouped by the ER relation in `H_j^dagger H_k`, for
/// every ordered pair of the eight Hadamard bases of the dimension-8 set.
#[derive(Debug, Clone, PartialEq)]
pub struct GerTable {
    pub dim: usize,
    cells: BTreeMap<(usize, usize), GerCell>,
}

impl GerTable {
    /// Cell `(j, k)`: row `H_j^dagger`, column `H_k` (1-indexed, `j != k`).
    pub fn cell(&self, j: usize, k: usize) -> Option<&GerCell> {
        self.cells.get(&(j, k))
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(usize, usize), &GerCell)> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

const TABLE2: [&str; 8] = [
    "1-3-4-8;2-5-6-7|1-4-5-7;2-3-6-8|1-2-4-7;3-5-6-8|1-4-5-6;2-3-7-8|1-6-7-8;2-3-4-5|1-2-3-7;4-5-6-8|1-2-5-8;3-4-6-7",
    "1-2-5-8;3-4-6-7|1-3-4-8;2-5-6-7|1-2-3-6;4-5-7-8|1-2-5-8;3-4-6-7|1-2-5-8;3-4-6-7|1-4-5-7;2-3-6-8|1-2-4-6;3-5-7-8",
    "1-2-4-7;3-5-6-8|1-6-7-8;2-3-4-5|1-4-5-6;2-3-7-8|1-6-7-8;2-3-4-5|1-3-4-8;2-5-6-7|1-2-4-8;3-5-6-7|1-3-4-8;2-5-6-7",
    "1-3-5-7;2-4-6-8|1-4-5-7;2-3-6-8|1-2-4-6;3-5-7-8|1-2-3-6;4-5-7-8|1-4-5-6;2-3-7-8|1-3-5-8;2-4-6-7|1-4-5-7;2-3-6-8",
    "1-2-3-6;4-5-7-8|1-2-4-6;3-5-7-8|1-2-5-8;3-4-6-7|1-3-5-7;2-4-6-8|1-3-5-7;2-4-6-8|1-6-7-8;2-3-4-5|1-6-7-8;2-3-4-5",
    "1-3-4-8;2-5-6-7|1-2-3-7;4-5-6-8|1-3-5-6;2-4-7-8|1-2-5-8;3-4-6-7|1-3-4-8;2-5-6-7|1-2-5-6;3-4-7-8|1-3-5-6;2-4-7-8",
    "1-6-7-8;2-3-4-5|1-2-5-8;3-4-6-7|1-6-7-8;2-3-4-5|1-6-7-8;2-3-4-5|1-2-4-7;3-5-6-8|1-2-3-6;4-5-7-8|1-2-3-7;4-5-6-8",
    "1-4-5-6;2-3-7-8|1-3-5-6;2-4-7-8|1-2-3-7;4-5-6-8|1-3-4-8;2-5-6-7|1-3-5-7;2-4-6-8|1-2-4-7;3-5-6-8|1-3-4-6;2-5-7-8",
];

/// The 56 transcribed cells. Row `j` lists columns `k = 1..=8`, skipping `j`.
pub fn ger_table() -> GerTable {
    let mut cells = BTreeMap::new();
    for (j, line) in (1..=8).zip(TABLE2) {
        let ks = (1..=8).filter(|&k| k != j);
        for (k, text) in ks.zip(line.split('|')) {
            cells.insert((j, k), text.parse().expect("table cell"));
        }
    }
    GerTable { dim: 8, cells }
}

/// ER classes of the columns of `H_j^dagger H_k` as a table cell, if there
/// are exactly two.
pub fn computed_cell(hj: &ComplexMatrix, hk: &ComplexMatrix, tol: Tolerance) -> Option<GerCell> {
    let h = hj.dagger().matmul(hk).ok()?;
    GerCell::from_classes(&er_classes(&h, tol))
}

const S4_JSON: &str = include_str!("../data/s4.json");

/// The nine-basis set `{I, H1, ..., H8}` in dimension 8, loaded from the
/// shipped data file and validated.
pub fn s4() -> MubSet {
    MubSet::from_json(S4_JSON, Tolerance::CONSTRUCTION).expect("shipped s4.json is valid")
}

/// Rebuilds the nine-basis set from the explicit quintuplet.
///
/// Every vector with entries in `{1, -1, i, -i} / sqrt(8)` (first entry 1)
/// that is unbiased to `H1, H2, H3, H5` is collected; these split into four
/// orthonormal bases. Labels 4, 6, 7, 8 and the column order of each new basis
/// are the ones that reproduce the GER table; among admissible column orders
/// the lexicographically first is taken. Columns are phased so the last row
/// is all `+1/sqrt(8)`.
pub fn complete_s4(tol: Tolerance) -> Result<MubSet> {
    let known = dim8_explicit();
    let n = 8;
    let s = 1.0 / 8f64.sqrt();
    let roots = [ONE, I, -ONE, -I];
    let known_h: Vec<&ComplexMatrix> = (1..5).map(|b| known.basis(b)).collect();
    let known_dag: Vec<ComplexMatrix> = known_h.iter().map(|h| h.dagger()).collect();

    // candidate vectors, last coordinate varying fastest
    let mut cands: Vec<Vec<C64>> = Vec::new();
    for code in 0..4usize.pow(7) {
        let mut v = vec![ONE * s; n];
        let mut c = code;
        for k in (1..n).rev() {
            v[k] = roots[c % 4] * s;
            c /= 4;
        }
        let unbiased = known_dag.iter().all(|hd| {
            (0..n).all(|r| {
                let z: C64 = hd.row(r).iter().zip(&v).map(|(a, b)| a * b).sum();
                (z.norm_sqr() - 1.0 / n as f64).abs() <= tol.eps()
            })
        });
        if unbiased {
            cands.push(v);
        }
    }

    // orthonormal 8-cliques
    let ortho = |a: &[C64], b: &[C64]| crate::matcore::inner(a, b).norm() <= tol.eps();
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    fn grow(clique: &mut Vec<usize>, cand: &[usize], out: &mut Vec<Vec<usize>>, adj: &dyn Fn(usize, usize) -> bool) {
        if clique.len() == 8 {
            out.push(clique.clone());
            return;
        }
        for (t, &c) in cand.iter().enumerate() {
            let next: Vec<usize> = cand[t + 1..].iter().copied().filter(|&d| adj(c, d)).collect();
            clique.push(c);
            grow(clique, &next, out, adj);
            clique.pop();
        }
    }
    let all: Vec<usize> = (0..cands.len()).collect();
    grow(&mut Vec::new(), &all, &mut cliques, &|a, b| ortho(&cands[a], &cands[b]));

    let mut new_bases: Vec<ComplexMatrix> = cliques
        .iter()
        .map(|cl| {
            ComplexMatrix::from_fn(n, n, |r, c| {
                let v = &cands[cl[c]];
                v[r] / v[n - 1] * s
            })
        })
        .collect();
    if new_bases.len() != 4 || deviation(&[known.bases(), &new_bases[..]].concat()).worst > tol.eps() {
        return Err(Error::InvalidDimension(format!(
            "expected four completing bases, found {}",
            new_bases.len()
        )));
    }

    let table = ger_table();
    let known_labels = [1usize, 2, 3, 5];
    let new_labels = [4usize, 6, 7, 8];
    let cell_of = |a: &ComplexMatrix, b: &ComplexMatrix| computed_cell(a, b, tol);

    // labels: cells (k, j) with k new and j known do not depend on column order of k
    let mut labelled: Option<Vec<ComplexMatrix>> = None;
    for perm in permutations(4) {
        let ok = new_labels.iter().zip(&perm).all(|(&k, &p)| {
            known_labels
                .iter()
                .zip(&known_h)
                .all(|(&j, hj)| cell_of(&new_bases[p], hj).as_ref() == table.cell(k, j))
        });
        if ok {
            labelled = Some(perm.iter().map(|&p| new_bases[p].clone()).collect());
            break;
        }
    }
    new_bases = labelled.ok_or_else(|| Error::InvalidDimension("no labelling matches the GER table".into()))?;

    // column order: raw column c moves to position perm[c]
    let mut ordered = Vec::with_capacity(4);
    for (&k, raw) in new_labels.iter().zip(&new_bases) {
        let raw_cells: Vec<(usize, Vec<Vec<usize>>)> = known_labels
            .iter()
            .zip(&known_h)
            .map(|(&j, hj)| (j, er_classes(&hj.dagger().matmul(raw).expect("8x8"), tol)))
            .collect();
        let perm = permutations(n)
            .into_iter()
            .find(|perm| {
                raw_cells.iter().all(|(j, classes)| {
                    let moved: Vec<Vec<usize>> = classes.iter().map(|g| g.iter().map(|&c| perm[c]).collect()).collect();
                    GerCell::from_classes(&moved).as_ref() == table.cell(*j, k)
                })
            })
            .ok_or_else(|| Error::InvalidDimension(format!("no column order fits H{k}")))?;
        let mut m = ComplexMatrix::zeros(n, n);
        for c in 0..n {
            for r in 0..n {
                m[(r, perm[c])] = raw[(r, c)];
            }
        }
        ordered.push(m);
    }

    let b = known.bases();
    let bases = vec![
        b[0].clone(),
        b[1].clone(),
        b[2].clone(),
        b[3].clone(),
        ordered[0].clone(),
        b[4].clone(),
        ordered[1].clone(),
        ordered[2].clone(),
        ordered[3].clone(),
    ];
    MubSet::new(
        bases,
        labels(&["I", "H1", "H2", "H3", "H4", "H5", "H6", "H7", "H8"]),
        tol,
    )
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("pivot");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}
