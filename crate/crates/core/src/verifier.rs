//! Independent checks on sets and families: unbiasedness, sweeps over
//! parameter grids, the dimension-8 census and the Hadamard-square rank bound.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{computed_cell, deviation, GerCell, GerTable, MubSet};
use crate::error::Result;
use crate::gerengine::{
    aligned_groups, all_max_compatible_pairs, find_ger_pairs, gram, inject, max_disjoint_pairs, GramMatrix, ParamFamily,
};
use crate::matcore::{ComplexMatrix, Tolerance, C64};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub worst_overlap_error: f64,
    /// (basis a, basis b, column of a, column of b)
    pub worst_location: (usize, usize, usize, usize),
    /// Worst `| |G(a)| - |G(0)| |` entrywise; zero for plain set checks.
    pub worst_modulus_error: f64,
    /// Worst eigenvalue shift of the Gram matrix; zero for plain set checks.
    pub worst_spectrum_error: f64,
    pub spectra_match: bool,
    pub points: usize,
    pub seed: Option<u64>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Orthonormality of each basis and `|<phi_j, psi_k>|^2 = 1/N` across bases.
pub fn check_mub_set(set: &MubSet, tol: Tolerance) -> VerifyReport {
    let dev = set.deviation();
    let passed = dev.worst <= tol.eps();
    let mut notes = Vec::new();
    if !passed {
        let (a, b, j, k) = dev.location;
        notes.push(if a == b {
            format!("basis {} is not orthonormal at columns ({j}, {k})", set.labels()[a])
        } else {
            format!(
                "{} column {j} and {} column {k} are biased",
                set.labels()[a],
                set.labels()[b]
            )
        });
    }
    VerifyReport {
        passed,
        worst_overlap_error: dev.worst,
        worst_location: dev.location,
        worst_modulus_error: 0.0,
        worst_spectrum_error: 0.0,
        spectra_match: true,
        points: 1,
        seed: None,
        notes,
    }
}

/// Parameter points for a sweep: a full grid over `[0, 2pi)` when the family
/// has at most `max_grid_axes` slots, plus `samples` uniform random points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub points_per_axis: usize,
    pub max_grid_axes: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points_per_axis: 5,
            max_grid_axes: 4,
            samples: 100,
            seed: DEFAULT_SEED,
        }
    }
}

impl GridSpec {
    pub fn grid_only(points_per_axis: usize) -> Self {
        GridSpec {
            points_per_axis,
            samples: 0,
            ..Default::default()
        }
    }

    pub fn random_only(samples: usize, seed: u64) -> Self {
        GridSpec {
            points_per_axis: 0,
            samples,
            seed,
            ..Default::default()
        }
    }

    /// Grid points first (last axis fastest), then random samples. With more
    /// than `max_grid_axes` slots the grid is replaced by the zero point.
    pub fn points(&self, axes: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        if axes <= self.max_grid_axes && self.points_per_axis > 0 {
            let p = self.points_per_axis;
            let total = p.pow(axes as u32);
            for code in 0..total {
                let mut v = vec![0.0; axes];
                let mut c = code;
                for slot in v.iter_mut().rev() {
                    *slot = TAU * (c % p) as f64 / p as f64;
                    c /= p;
                }
                out.push(v);
            }
        } else if self.points_per_axis > 0 {
            out.push(vec![0.0; axes]);
        }
        out.extend(random_points(axes, self.samples, self.seed));
        out
    }
}

/// `count` uniform points in `[0, 2pi)^axes` from a seeded ChaCha8 stream.
pub fn random_points(axes: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..axes).map(|_| rng.gen_range(0.0..TAU)).collect())
        .collect()
}

fn moduli_error(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x.norm() - y.norm()).abs())
        .fold(0.0, f64::max)
}

fn spectrum_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Checks a family at the given parameter points: unbiasedness of the
/// evaluated set, Gram moduli and spectrum against the base, and agreement
/// of the full-Gram injection with the Gram matrix of the evaluated set.
pub fn sweep_points(f: &ParamFamily, points: &[Vec<f64>], tol: Tolerance, spectral: Tolerance) -> Result<VerifyReport> {
    let g0 = gram(f.base());
    let ev0 = g0.matrix().eigenvalues_hermitian(tol)?;
    let mut report = VerifyReport {
        passed: true,
        worst_overlap_error: 0.0,
        worst_location: (0, 0, 0, 0),
        worst_modulus_error: 0.0,
        worst_spectrum_error: 0.0,
        spectra_match: true,
        points: points.len(),
        seed: None,
        notes: Vec::new(),
    };
    let mut worst_dual: f64 = 0.0;
    let pairs_only = f.slots().iter().all(|s| s.cols.len() == 2);
    for p in points {
        let set = f.evaluate(p)?;
        let dev = deviation(set.bases());
        if dev.worst > report.worst_overlap_error || dev.worst.is_nan() {
            report.worst_overlap_error = dev.worst;
            report.worst_location = dev.location;
        }
        let g = gram(&set);
        report.worst_modulus_error = report.worst_modulus_error.max(moduli_error(g.matrix(), g0.matrix()));
        let ev = match g.matrix().eigenvalues_hermitian(tol) {
            Ok(ev) => ev,
            Err(_) => {
                report.worst_spectrum_error = f64::INFINITY;
                continue;
            }
        };
        report.worst_spectrum_error = report.worst_spectrum_error.max(spectrum_error(&ev, &ev0));
        if pairs_only {
            if let Ok(full) = f.full_gram_at(p, tol) {
                worst_dual = worst_dual.max(full.matrix().max_abs_diff(g.matrix()));
            }
        }
    }
    report.spectra_match = report.worst_spectrum_error <= spectral.eps();
    report.passed =
        report.worst_overlap_error <= tol.eps() && report.worst_modulus_error <= tol.eps() && report.spectra_match;
    if pairs_only {
        report.notes.push(format!(
            "full-Gram injection vs Gram of evaluated set: {worst_dual:.3e}"
        ));
    }
    if !report.passed {
        let (a, b, j, k) = report.worst_location;
        report.notes.push(format!(
            "worst overlap at bases ({}, {}), columns ({j}, {k})",
            f.base().labels()[a],
            f.base().labels()[b]
        ));
    }
    Ok(report)
}

pub fn sweep(f: &ParamFamily, grid: &GridSpec, tol: Tolerance, spectral: Tolerance) -> Result<VerifyReport> {
    let points = grid.points(f.num_params());
    let mut report = sweep_points(f, &points, tol, spectral)?;
    if grid.samples > 0 {
        report.seed = Some(grid.seed);
    }
    Ok(report)
}

/// Parameter analysis of one subset `{I, H_i, ...}` of the nine-basis set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetResult {
    /// Indices into the full set; always starts with 0 (the identity).
    pub indices: Vec<usize>,
    pub labels: Vec<String>,
    /// GER pairs outside the reference block.
    pub ger_pairs: usize,
    /// Largest column-disjoint selection of GER pairs, ignoring compatibility.
    pub ger_bound: usize,
    /// Largest selection that also keeps the set unbiased for all parameters.
    pub params: usize,
    /// Labels of bases carrying parameters in that selection.
    pub param_bases: Vec<String>,
    /// Rows (0-indexed) of the selected slots when they all share one row set.
    pub common_rows: Option<Vec<usize>>,
    /// Number of distinct maximum selections.
    pub selections: usize,
    /// Fewest and most independent parameters over the maximum selections;
    /// they differ when some selections are aligned and others are not.
    pub independent_min: usize,
    pub independent_max: usize,
}

pub fn analyze_subset(full: &MubSet, indices: &[usize], tol: Tolerance) -> Result<(SubsetResult, ParamFamily)> {
    let set = full.subset(indices)?;
    let pairs = find_ger_pairs(&gram(&set), false, tol);
    let all = all_max_compatible_pairs(&set, &pairs, tol);
    let mut independent = Vec::with_capacity(all.len());
    for sel in &all {
        independent.push(aligned_groups(&inject(&set, sel, tol)?).independent);
    }
    let chosen = all.first().cloned().unwrap_or_default();
    let family = inject(&set, &chosen, tol)?;
    let mut param_bases: Vec<usize> = family.slots().iter().map(|s| s.basis).collect();
    param_bases.dedup();
    let common_rows = family
        .slots()
        .first()
        .map(|s| s.rows.clone())
        .filter(|r| family.slots().iter().all(|s| &s.rows == r));
    let result = SubsetResult {
        indices: indices.to_vec(),
        labels: set.labels().to_vec(),
        ger_pairs: pairs.len(),
        ger_bound: max_disjoint_pairs(&pairs),
        params: chosen.len(),
        param_bases: param_bases.iter().map(|&b| set.labels()[b].clone()).collect(),
        common_rows,
        selections: all.len(),
        independent_min: independent.iter().copied().min().unwrap_or(0),
        independent_max: independent.iter().copied().max().unwrap_or(0),
    };
    Ok((result, family))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRow {
    pub m: usize,
    pub subsets: usize,
    pub max_params: usize,
    pub min_params: usize,
    /// Independent parameters of the subsets reaching `max_params`.
    pub independent_at_max: Vec<usize>,
    pub max_ger_bound: usize,
    /// Largest number of distinct bases carrying parameters in one subset.
    pub max_param_bases: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    pub rows: Vec<CensusRow>,
    pub subsets: Vec<SubsetResult>,
}

/// Every subset `{I} + (m-1)` Hadamard bases of the nine-basis set, for
/// `m = 2..=9`.
pub fn table1_census(s4: &MubSet, tol: Tolerance) -> Result<Census> {
    let k = s4.len() - 1;
    let mut subsets = Vec::new();
    let mut rows = Vec::new();
    for m in 2..=s4.len() {
        let mut group = Vec::new();
        for combo in combinations(k, m - 1) {
            let idx: Vec<usize> = std::iter::once(0).chain(combo.iter().map(|c| c + 1)).collect();
            group.push(analyze_subset(s4, &idx, tol)?.0);
        }
        let max_params = group.iter().map(|r| r.params).max().unwrap_or(0);
        let mut independent_at_max: Vec<usize> = group
            .iter()
            .filter(|r| r.params == max_params)
            .flat_map(|r| [r.independent_min, r.independent_max])
            .collect();
        independent_at_max.sort_unstable();
        independent_at_max.dedup();
        rows.push(CensusRow {
            m,
            subsets: group.len(),
            max_params,
            min_params: group.iter().map(|r| r.params).min().unwrap_or(0),
            independent_at_max,
            max_ger_bound: group.iter().map(|r| r.ger_bound).max().unwrap_or(0),
            max_param_bases: group.iter().map(|r| r.param_bases.len()).max().unwrap_or(0),
        });
        subsets.extend(group);
    }
    Ok(Census { rows, subsets })
}

impl Census {
    pub fn row(&self, m: usize) -> Option<&CensusRow> {
        self.rows.iter().find(|r| r.m == m)
    }

    pub fn of_size(&self, m: usize) -> impl Iterator<Item = &SubsetResult> {
        self.subsets.iter().filter(move |s| s.indices.len() == m)
    }

    /// Every pair `{I, H_i}` admits 4 parameters.
    pub fn item_i(&self) -> bool {
        self.of_size(2).all(|s| s.params == 4)
    }

    /// Every triplet `{I, H_i, H_j}` admits 8 parameters.
    pub fn item_ii(&self) -> bool {
        self.of_size(3).all(|s| s.params == 8)
    }

    /// Quadruplets admit either none or 4 parameters in a single basis, and
    /// at least one admits 4.
    pub fn item_iii(&self) -> bool {
        self.of_size(4)
            .all(|s| s.params == 0 || (s.params == 4 && s.param_bases.len() == 1))
            && self.of_size(4).any(|s| s.params == 4)
    }

    /// Every 4-parameter quadruplet lies in some 4-parameter quintuplet with
    /// parameters in the same basis.
    pub fn item_iv(&self) -> bool {
        self.of_size(4).filter(|q| q.params == 4).all(|q| {
            self.of_size(5).any(|p| {
                p.params == 4 && q.indices.iter().all(|i| p.indices.contains(i)) && p.param_bases == q.param_bases
            })
        })
    }

    /// No set of six or more admits parameters.
    pub fn item_v(&self) -> bool {
        self.subsets
            .iter()
            .filter(|s| s.indices.len() >= 6)
            .all(|s| s.params == 0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] != i + n - k) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellCheck {
    pub j: usize,
    pub k: usize,
    pub expected: String,
    pub computed: Option<String>,
    pub matches: bool,
}

/// Compares the ER classes of `H_j^dagger H_k` with the table for every
/// ordered pair of bases labelled `H1`..`H8` present in `set`.
pub fn table2_check(set: &MubSet, table: &GerTable, tol: Tolerance) -> Vec<CellCheck> {
    let present: Vec<(usize, &ComplexMatrix)> = set
        .labels()
        .iter()
        .zip(set.bases())
        .filter_map(|(l, b)| l.strip_prefix('H').and_then(|d| d.parse().ok()).map(|d| (d, b)))
        .collect();
    let mut out = Vec::new();
    for &(j, hj) in &present {
        for &(k, hk) in &present {
            let Some(expected) = table.cell(j, k) else {
                continue;
            };
            let computed: Option<GerCell> = computed_cell(hj, hk, tol);
            out.push(CellCheck {
                j,
                k,
                expected: expected.to_string(),
                matches: computed.as_ref() == Some(expected),
                computed: computed.map(|c| c.to_string()),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankBound {
    pub m: usize,
    pub n: usize,
    /// Numeric rank of `G o conj(G)`.
    pub lhs: usize,
    /// `mN - (m - 1)`.
    pub expected_rank: usize,
    /// `lhs <= N^2`.
    pub bound_ok: bool,
    /// `max |G o conj(G) - (J/N + I)|`
    pub identity_error: f64,
    /// Worst eigenvalue distance from `{m x1, 0 x(m-1), 1 x m(N-1)}`.
    pub spectrum_error: f64,
    /// `N + 1`.
    pub m_bound: usize,
    pub real: bool,
    /// `N/2 + 1`, reported when `G` is real.
    pub real_bound: Option<usize>,
}

impl RankBound {
    pub fn holds(&self, tol: Tolerance, spectral: Tolerance) -> bool {
        self.identity_error <= tol.eps()
            && self.spectrum_error <= spectral.eps()
            && self.lhs == self.expected_rank
            && self.bound_ok
            && self.m <= self.m_bound
            && self.real_bound.is_none_or(|b| self.m <= b)
    }
}

/// The entrywise square `G o conj(G)` of a Gram matrix of MUB equals
/// `J/N + I` off the diagonal blocks and `I` on them; its rank
/// `mN - (m - 1)` cannot exceed `N^2`.
pub fn rank_bound(g: &GramMatrix, tol: Tolerance, spectral: Tolerance) -> Result<RankBound> {
    let n = g.dim();
    let m = g.blocks();
    let sq = g.matrix().hadamard_product(&g.matrix().conj())?;
    let inv_n = 1.0 / n as f64;
    let target = ComplexMatrix::from_fn(m * n, m * n, |r, c| {
        let v = if r / n == c / n {
            if r == c {
                1.0
            } else {
                0.0
            }
        } else {
            inv_n
        };
        C64::new(v, 0.0)
    });
    let identity_error = sq.max_abs_diff(&target);
    let lhs = sq.numeric_rank(spectral);
    let mut expected: Vec<f64> = std::iter::repeat_n(0.0, m - 1)
        .chain(std::iter::repeat_n(1.0, m * (n - 1)))
        .chain(std::iter::once(m as f64))
        .collect();
    expected.sort_by(f64::total_cmp);
    let ev = sq.eigenvalues_hermitian(tol)?;
    let real = g.matrix().is_real(tol);
    Ok(RankBound {
        m,
        n,
        lhs,
        expected_rank: m * n - (m - 1),
        bound_ok: lhs <= n * n,
        identity_error,
        spectrum_error: spectrum_error(&ev, &expected),
        m_bound: n + 1,
        real,
        real_bound: real.then_some(n / 2 + 1),
    })
}
