//! Gram matrices, equivalent-to-real column pairs and phase injection.
//!
//! Indices are 0-based throughout. Block `b` of an `mN x mN` Gram matrix
//! spans columns `b*N .. (b+1)*N`; block 0 is the reference basis.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::{MubSet, MubSetFile};
use crate::error::{Error, Result};
use crate::matcore::{phase, ComplexMatrix, Tolerance, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    dim: usize,
    blocks: usize,
    matrix: ComplexMatrix,
    labels: Vec<String>,
}

impl GramMatrix {
    /// Wraps a raw `mN x mN` matrix. Only the shape is checked here.
    pub fn from_matrix(matrix: ComplexMatrix, dim: usize) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare(matrix.rows(), matrix.cols()));
        }
        if dim == 0 || !matrix.rows().is_multiple_of(dim) {
            return Err(Error::InvalidDimension(format!(
                "{} rows do not split into blocks of {dim}",
                matrix.rows()
            )));
        }
        let blocks = matrix.rows() / dim;
        Ok(GramMatrix {
            dim,
            blocks,
            matrix,
            labels: (0..blocks).map(|b| format!("B{b}")).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of bases `m`.
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Block `(i, j)`, equal to `H_i^dagger H_j`.
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        let n = self.dim;
        self.matrix.block(i * n, j * n, n, n)
    }

    /// Column `local` of block `b`, full length `mN`.
    pub fn column(&self, b: usize, local: usize) -> Vec<C64> {
        self.matrix.column(b * self.dim + local)
    }

    /// Largest violation of the structural invariants: hermitian, identity
    /// diagonal blocks, off-diagonal entries of modulus `1/sqrt(N)`.
    pub fn structure_error(&self) -> f64 {
        let n = self.dim;
        let target = 1.0 / (n as f64).sqrt();
        let mut worst = self.matrix.hermitian_deviation();
        for r in 0..self.matrix.rows() {
            for c in 0..self.matrix.cols() {
                let z = self.matrix[(r, c)];
                let err = if r / n == c / n {
                    (z - if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).norm()
                } else {
                    (z.norm() - target).abs()
                };
                worst = worst.max(err);
            }
        }
        worst
    }
}

/// Gram matrix of a set: block `(i, j)` is `H_i^dagger H_j`.
pub fn gram(set: &MubSet) -> GramMatrix {
    let refs: Vec<&ComplexMatrix> = set.bases().iter().collect();
    let l = ComplexMatrix::hstack(&refs).expect("bases share a dimension");
    let matrix = l.dagger().matmul(&l).expect("square");
    GramMatrix {
        dim: set.dim(),
        blocks: set.len(),
        matrix,
        labels: set.labels().to_vec(),
    }
}

/// Recovers the bases from a Gram matrix by reading its first `N` rows.
///
/// When the first diagonal block is the identity, the Cholesky factor of `G`
/// has `[I, H_1, ..., H_{m-1}]` as its only nonzero block row, so the first
/// block row of `G` already is that factor.
pub fn bases_from_gram(g: &GramMatrix, tol: Tolerance, spectral: Tolerance) -> Result<MubSet> {
    let ev = g.matrix.eigenvalues_hermitian(tol)?;
    let scale = ev.last().copied().unwrap_or(1.0).abs().max(1.0);
    if let Some(&min) = ev.first() {
        if min < -spectral.eps() * scale {
            return Err(Error::NotPositiveSemidefinite(min));
        }
    }
    let rank = ev.iter().filter(|&&v| v > spectral.eps() * scale).count();
    if rank != g.dim {
        return Err(Error::RankMismatch {
            expected: g.dim,
            found: rank,
        });
    }
    let bases: Vec<ComplexMatrix> = (0..g.blocks).map(|b| g.block(0, b)).collect();
    let set = MubSet::new_unchecked(bases, g.labels.clone())?;
    let err = gram(&set).matrix.max_abs_diff(&g.matrix);
    if err > tol.eps() {
        return Err(Error::NotGram(err));
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
        }
    }
}

/// Outcome of the ER test on two vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ErTest {
    pub is_er: bool,
    /// Signs of `Re(conj(c1_k) c2_k)`, `Zero` where the product vanishes.
    pub signs: Vec<Sign>,
}

/// `conj(c1) o c2` real entrywise, within `tol`.
pub fn is_er_pair(c1: &[C64], c2: &[C64], tol: Tolerance) -> ErTest {
    let mut is_er = c1.len() == c2.len();
    let signs = c1
        .iter()
        .zip(c2)
        .map(|(a, b)| {
            let p = a.conj() * b;
            if p.im.abs() > tol.eps() {
                is_er = false;
            }
            if p.norm() <= tol.eps() {
                Sign::Zero
            } else if p.re > 0.0 {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect();
    ErTest { is_er, signs }
}

/// Partition of the columns of `m` into classes of mutually ER columns.
/// Each class is compared against its first member; classes are ordered by
/// first member.
pub fn er_classes(m: &ComplexMatrix, tol: Tolerance) -> Vec<Vec<usize>> {
    let cols: Vec<Vec<C64>> = (0..m.cols()).map(|c| m.column(c)).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for c in 0..cols.len() {
        match classes
            .iter_mut()
            .find(|g| is_er_pair(&cols[g[0]], &cols[c], tol).is_er)
        {
            Some(g) => g.push(c),
            None => classes.push(vec![c]),
        }
    }
    classes
}

/// Two columns of one block of a Gram matrix whose conjugated product is real.
#[derive(Debug, Clone, PartialEq)]
pub struct GerPair {
    pub block: usize,
    pub i: usize,
    pub j: usize,
    /// Length `mN`.
    pub signs: Vec<Sign>,
}

impl GerPair {
    /// Rows among the first `n` where the product is negative: the rows
    /// receiving the phase.
    pub fn negative_rows(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&k| self.signs[k] == Sign::Minus).collect()
    }

    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|s| s.as_char()).collect()
    }

    /// Same number of `+` and `-` entries.
    pub fn is_balanced(&self) -> bool {
        let plus = self.signs.iter().filter(|&&s| s == Sign::Plus).count();
        let minus = self.signs.iter().filter(|&&s| s == Sign::Minus).count();
        plus == minus
    }
}

impl fmt::Display for GerPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "block {} cols {}-{}", self.block, self.i + 1, self.j + 1)
    }
}

/// All same-block column pairs of `g` passing the ER test on full columns,
/// sorted by `(block, i, j)`. Block 0 is skipped unless asked for.
pub fn find_ger_pairs(g: &GramMatrix, include_first_block: bool, tol: Tolerance) -> Vec<GerPair> {
    let n = g.dim;
    let mut out = Vec::new();
    for b in usize::from(!include_first_block)..g.blocks {
        let cols: Vec<Vec<C64>> = (0..n).map(|c| g.column(b, c)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let t = is_er_pair(&cols[i], &cols[j], tol);
                if t.is_er {
                    out.push(GerPair {
                        block: b,
                        i,
                        j,
                        signs: t.signs,
                    });
                }
            }
        }
    }
    out
}

/// GER pair on block `block`, columns `(i, j)`, or `NotGer`.
pub fn ger_pair(g: &GramMatrix, block: usize, i: usize, j: usize, tol: Tolerance) -> Result<GerPair> {
    if block >= g.blocks || i >= g.dim || j >= g.dim || i == j {
        return Err(Error::NotGer { block, i, j });
    }
    let (i, j) = (i.min(j), i.max(j));
    let t = is_er_pair(&g.column(block, i), &g.column(block, j), tol);
    if !t.is_er {
        return Err(Error::NotGer { block, i, j });
    }
    Ok(GerPair {
        block,
        i,
        j,
        signs: t.signs,
    })
}

/// A phase site: `H_basis[r, c] *= e^{i alpha}` for `r` in `rows`, `c` in `cols`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub basis: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Slot {
    pub fn from_pair(p: &GerPair, n: usize) -> Slot {
        Slot {
            basis: p.block,
            rows: p.negative_rows(n),
            cols: vec![p.i, p.j],
        }
    }
}

/// A set of bases with phase slots; `evaluate` gives a member of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamFamily {
    base: MubSet,
    slots: Vec<Slot>,
}

#[derive(Serialize, Deserialize)]
struct ParamFamilyFile {
    base: MubSetFile,
    slots: Vec<Slot>,
}

impl ParamFamily {
    /// Checks only that slot indices are in range.
    pub fn new(base: MubSet, slots: Vec<Slot>) -> Result<Self> {
        let n = base.dim();
        for s in &slots {
            if s.basis >= base.len() {
                return Err(Error::SlotMismatch(format!("basis {} out of range", s.basis)));
            }
            if let Some(&r) = s.rows.iter().chain(&s.cols).find(|&&r| r >= n) {
                return Err(Error::RowOutOfRange { row: r, dim: n });
            }
        }
        Ok(ParamFamily { base, slots })
    }

    pub fn base(&self) -> &MubSet {
        &self.base
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn num_params(&self) -> usize {
        self.slots.len()
    }

    /// Bases with slot phases applied. Zero parameters leave entries untouched.
    pub fn evaluate(&self, params: &[f64]) -> Result<MubSet> {
        if params.len() != self.slots.len() {
            return Err(Error::ParameterCount {
                expected: self.slots.len(),
                found: params.len(),
            });
        }
        let mut bases = self.base.bases().to_vec();
        for (s, &a) in self.slots.iter().zip(params) {
            if a == 0.0 {
                continue;
            }
            let z = phase(a);
            let h = &mut bases[s.basis];
            for &r in &s.rows {
                for &c in &s.cols {
                    h[(r, c)] *= z;
                }
            }
        }
        self.base.with_bases(bases)
    }

    /// Every slot set to `alpha`.
    pub fn evaluate_uniform(&self, alpha: f64) -> Result<MubSet> {
        self.evaluate(&vec![alpha; self.slots.len()])
    }

    /// The Gram matrix with phases injected on the full `mN` rows and the
    /// matching rows: `G[k, c] *= e^{i alpha}`, `G[c, k] *= e^{-i alpha}` for
    /// the negative-sign rows `k` of each slot's column pair. For a valid
    /// family this equals `gram(evaluate(params))`.
    pub fn full_gram_at(&self, params: &[f64], tol: Tolerance) -> Result<GramMatrix> {
        if params.len() != self.slots.len() {
            return Err(Error::ParameterCount {
                expected: self.slots.len(),
                found: params.len(),
            });
        }
        let g0 = gram(&self.base);
        let n = g0.dim;
        let mut g = g0.clone();
        for (s, &a) in self.slots.iter().zip(params) {
            let [ci, cj] = s.cols[..] else {
                return Err(Error::SlotMismatch("full-Gram injection needs column pairs".into()));
            };
            let pair = ger_pair(&g0, s.basis, ci, cj, tol)?;
            let (zp, zm) = (phase(a), phase(-a));
            for (k, sign) in pair.signs.iter().enumerate() {
                if *sign != Sign::Minus {
                    continue;
                }
                for c in [s.basis * n + ci, s.basis * n + cj] {
                    g.matrix[(k, c)] *= zp;
                    g.matrix[(c, k)] *= zm;
                }
            }
        }
        Ok(g)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ParamFamilyFile {
            base: self.base.to_file(),
            slots: self.slots.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str, tol: Tolerance) -> Result<Self> {
        let file: ParamFamilyFile = serde_json::from_str(text)?;
        Self::new(MubSet::from_file(file.base, tol)?, file.slots)
    }
}

/// Sums of `conj(a_r) b_r` over the four row classes of two slots.
fn class_sums(a: &[C64], b: &[C64], ra: &[bool], rb: &[bool]) -> [[C64; 2]; 2] {
    let mut s = [[C64::new(0.0, 0.0); 2]; 2];
    for r in 0..a.len() {
        s[usize::from(ra[r])][usize::from(rb[r])] += b[r].conj() * a[r];
    }
    s
}

/// How far two slots are from carrying independent phases at once.
///
/// For a column `c` of slot `p` (row set `R_p`) and a column `k` of slot `q`,
/// split `sum_r conj(H_q[r,k]) H_p[r,c]` by whether `r` lies in `R_p` and in
/// `R_q`. The overlap modulus is independent of both phases exactly when
/// `S11 S01* + S10 S00*`, `S11 S10* + S01 S00*`, `S11 S00*` and `S10 S01*`
/// all vanish. Returns the largest of these over all column pairs (0 for
/// compatible slots).
pub fn slot_incompatibility(set: &MubSet, p: &Slot, q: &Slot) -> f64 {
    let n = set.dim();
    let mask = |rows: &[usize]| {
        let mut m = vec![false; n];
        for &r in rows {
            m[r] = true;
        }
        m
    };
    let (mp, mq) = (mask(&p.rows), mask(&q.rows));
    let (hp, hq) = (set.basis(p.basis), set.basis(q.basis));
    let mut worst: f64 = 0.0;
    for &c in &p.cols {
        let a = hp.column(c);
        for &k in &q.cols {
            if p.basis == q.basis && c == k {
                continue;
            }
            let b = hq.column(k);
            let s = class_sums(&a, &b, &mp, &mq);
            let terms = [
                s[1][1] * s[0][1].conj() + s[1][0] * s[0][0].conj(),
                s[1][1] * s[1][0].conj() + s[0][1] * s[0][0].conj(),
                s[1][1] * s[0][0].conj(),
                s[1][0] * s[0][1].conj(),
            ];
            worst = terms.iter().map(|z| z.norm()).fold(worst, f64::max);
        }
    }
    worst
}

pub fn slots_compatible(set: &MubSet, p: &Slot, q: &Slot, tol: Tolerance) -> bool {
    slot_incompatibility(set, p, q) <= tol.eps()
}

fn check_pairs(set: &MubSet, pairs: &[GerPair], tol: Tolerance) -> Result<Vec<Slot>> {
    let g = gram(set);
    let n = set.dim();
    for p in pairs {
        ger_pair(&g, p.block, p.i, p.j, tol)?;
    }
    for (a, p) in pairs.iter().enumerate() {
        for (b, q) in pairs.iter().enumerate().skip(a + 1) {
            if p.block == q.block && (p.i == q.i || p.i == q.j || p.j == q.i || p.j == q.j) {
                return Err(Error::OverlappingSlots(a, b));
            }
        }
    }
    Ok(pairs.iter().map(|p| Slot::from_pair(p, n)).collect())
}

/// One free phase per GER pair, placed on the pair's columns at the
/// negative-sign rows among the first `N`.
///
/// Rejects pairs that are not GER, pairs sharing a column within a block, and
/// slot pairs that cannot vary independently (see [`slot_incompatibility`]).
pub fn inject(set: &MubSet, pairs: &[GerPair], tol: Tolerance) -> Result<ParamFamily> {
    let slots = check_pairs(set, pairs, tol)?;
    for a in 0..slots.len() {
        for b in a + 1..slots.len() {
            let dev = slot_incompatibility(set, &slots[a], &slots[b]);
            if dev > tol.eps() {
                return Err(Error::IncompatibleSlots(a, b, dev));
            }
        }
    }
    ParamFamily::new(set.clone(), slots)
}

/// [`inject`] without the compatibility check. The result need not be a
/// family of unbiased bases.
pub fn inject_unchecked(set: &MubSet, pairs: &[GerPair], tol: Tolerance) -> Result<ParamFamily> {
    let slots = check_pairs(set, pairs, tol)?;
    ParamFamily::new(set.clone(), slots)
}

fn compatibility_graph(set: &MubSet, pairs: &[GerPair], tol: Tolerance) -> Vec<Vec<bool>> {
    let n = set.dim();
    let slots: Vec<Slot> = pairs.iter().map(|p| Slot::from_pair(p, n)).collect();
    let k = pairs.len();
    let mut adj = vec![vec![false; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let (p, q) = (&pairs[a], &pairs[b]);
            let disjoint = p.block != q.block || (p.i != q.i && p.i != q.j && p.j != q.i && p.j != q.j);
            let ok = disjoint && slots_compatible(set, &slots[a], &slots[b], tol);
            adj[a][b] = ok;
            adj[b][a] = ok;
        }
    }
    adj
}

/// Every maximum-size set of GER pairs that are column-disjoint within each
/// block and pairwise compatible, in `(block, i, j)` order.
pub fn all_max_compatible_pairs(set: &MubSet, pairs: &[GerPair], tol: Tolerance) -> Vec<Vec<GerPair>> {
    let adj = compatibility_graph(set, pairs, tol);
    fn grow(clique: &mut Vec<usize>, cand: &[usize], best: &mut Vec<Vec<usize>>, size: &mut usize, adj: &[Vec<bool>]) {
        if clique.len() > *size {
            *size = clique.len();
            best.clear();
        }
        if clique.len() == *size {
            best.push(clique.clone());
        }
        for (t, &c) in cand.iter().enumerate() {
            if clique.len() + cand.len() - t < *size {
                return;
            }
            let next: Vec<usize> = cand[t + 1..].iter().copied().filter(|&d| adj[c][d]).collect();
            clique.push(c);
            grow(clique, &next, best, size, adj);
            clique.pop();
        }
    }
    let mut best = Vec::new();
    let mut size = 0;
    let all: Vec<usize> = (0..pairs.len()).collect();
    grow(&mut Vec::new(), &all, &mut best, &mut size, &adj);
    best.into_iter()
        .map(|c| c.into_iter().map(|i| pairs[i].clone()).collect())
        .collect()
}

/// Largest set of GER pairs that are column-disjoint within each block and
/// pairwise compatible. Ties go to the first set in `(block, i, j)` order.
pub fn max_compatible_pairs(set: &MubSet, pairs: &[GerPair], tol: Tolerance) -> Vec<GerPair> {
    all_max_compatible_pairs(set, pairs, tol)
        .into_iter()
        .next()
        .unwrap_or_default()
}

/// Largest number of column-disjoint pairs within each block, ignoring
/// compatibility between slots.
pub fn max_disjoint_pairs(pairs: &[GerPair]) -> usize {
    let mut by_block: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for p in pairs {
        by_block.entry(p.block).or_default().push((p.i, p.j));
    }
    by_block.values().map(|edges| max_matching(edges)).sum()
}

/// Maximum matching size by exhaustive search; graphs here have at most
/// a few dozen edges on eight vertices.
fn max_matching(edges: &[(usize, usize)]) -> usize {
    fn go(edges: &[(usize, usize)], used: u64) -> usize {
        let Some((&(a, b), rest)) = edges.split_first() else {
            return 0;
        };
        let skip = go(rest, used);
        if used & (1 << a) == 0 && used & (1 << b) == 0 {
            skip.max(1 + go(rest, used | (1 << a) | (1 << b)))
        } else {
            skip
        }
    }
    go(edges, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisAlignment {
    pub basis: usize,
    /// Indices into the family's slots.
    pub slots: Vec<usize>,
    /// Slots grouped by identical row sets.
    pub groups: Vec<Vec<usize>>,
    /// All slots on one row set and together covering every column.
    pub aligned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignedReport {
    pub per_basis: Vec<BasisAlignment>,
    pub total: usize,
    /// Slots on the reference basis (block 0); a global unitary removes them.
    pub absorbable: usize,
    pub dependent: usize,
    pub independent: usize,
}

/// Groups slots by row set and counts parameters.
///
/// One parameter is dependent when every non-reference basis carries slots
/// and all of them are aligned on a single common row set: a diagonal phase
/// on those rows then shifts every slot at once and is undone by rephasing
/// the reference vectors.
pub fn aligned_groups(f: &ParamFamily) -> AlignedReport {
    let n = f.base.dim();
    let mut per_basis = Vec::new();
    for b in 0..f.base.len() {
        let idx: Vec<usize> = (0..f.slots.len()).filter(|&s| f.slots[s].basis == b).collect();
        if idx.is_empty() {
            continue;
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &s in &idx {
            match groups.iter_mut().find(|g| f.slots[g[0]].rows == f.slots[s].rows) {
                Some(g) => g.push(s),
                None => groups.push(vec![s]),
            }
        }
        let mut covered: Vec<usize> = idx.iter().flat_map(|&s| f.slots[s].cols.clone()).collect();
        covered.sort_unstable();
        covered.dedup();
        let aligned = groups.len() == 1 && covered.len() == n;
        per_basis.push(BasisAlignment {
            basis: b,
            slots: idx,
            groups,
            aligned,
        });
    }
    let total = f.slots.len();
    let absorbable = f.slots.iter().filter(|s| s.basis == 0).count();
    let others: Vec<&BasisAlignment> = per_basis.iter().filter(|a| a.basis != 0).collect();
    let every_basis = others.len() == f.base.len().saturating_sub(1) && !others.is_empty();
    let common_rows = others
        .windows(2)
        .all(|w| f.slots[w[0].slots[0]].rows == f.slots[w[1].slots[0]].rows);
    let dependent = usize::from(every_basis && common_rows && others.iter().all(|a| a.aligned));
    AlignedReport {
        per_basis,
        total,
        absorbable,
        dependent,
        independent: total - absorbable - dependent,
    }
}

fn require_even(n: usize) -> Result<()> {
    if n % 2 == 1 || n <= 2 {
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        return Err(Error::InvalidDimension(format!("need N > 2, got {n}")));
    }
    Ok(())
}

/// `(m - 1) N (N - 1) / 2`: choices of one same-block column pair among the
/// non-reference blocks of a real MUB Gram matrix.
pub fn count_real_ways(m: usize, n: usize) -> Result<usize> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    Ok(m.saturating_sub(1) * n * (n - 1) / 2)
}

/// Parameters of a set of `m` real MUB in dimension `N`:
/// `(Nm/2, (m-1)N/2)`, total and not absorbable by a global unitary.
pub fn real_mub_param_count(m: usize, n: usize) -> Result<(usize, usize)> {
    require_even(n)?;
    Ok((n * m / 2, (m.saturating_sub(1)) * n / 2))
}

/// ER pairs among the columns of a single matrix, with signs over its rows.
pub fn er_pairs(h: &ComplexMatrix, tol: Tolerance) -> Vec<(usize, usize, Vec<Sign>)> {
    let cols: Vec<Vec<C64>> = (0..h.cols()).map(|c| h.column(c)).collect();
    let mut out = Vec::new();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let t = is_er_pair(&cols[i], &cols[j], tol);
            if t.is_er {
                out.push((i, j, t.signs));
            }
        }
    }
    out
}

/// Phase injection directly in a complex Hadamard matrix: a maximal
/// compatible set of its ER pairs, as a family over `{I, H}`.
pub fn construction1(h: &ComplexMatrix, tol: Tolerance) -> Result<ParamFamily> {
    if !h.is_chm(tol) {
        return Err(Error::NotMub {
            worst: h.unitarity_error(),
            location: (0, 0, 0, 0),
        });
    }
    if h.rows() % 2 == 1 {
        return Err(Error::OddDimension(h.rows()));
    }
    let set = MubSet::new(
        vec![ComplexMatrix::identity(h.rows()), h.clone()],
        vec!["I".into(), "H".into()],
        tol,
    )?;
    let pairs = find_ger_pairs(&gram(&set), false, tol);
    let chosen = max_compatible_pairs(&set, &pairs, tol);
    inject(&set, &chosen, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{dim4_triplet, dim8_explicit, fourier};
    use crate::matcore::{I, ONE};

    fn tol() -> Tolerance {
        Tolerance::CONSTRUCTION
    }

    #[test]
    fn gram_of_triplet_golden() {
        // twice the Gram matrix
        let rows = [
            "2 0 0 0 1 1 1 1 1 1 1 1",
            "0 2 0 0 1 1 -1 -1 1 1 -1 -1",
            "0 0 2 0 1 -1 i -i -1 1 1 -1",
            "0 0 0 2 1 -1 -i i 1 -1 1 -1",
            "1 1 1 1 2 0 0 0 1 1 1 -1",
            "1 1 -1 -1 0 2 0 0 1 1 -1 1",
            "1 -1 -i i 0 0 2 0 i -i 1 1",
            "1 -1 i -i 0 0 0 2 -i i 1 1",
            "1 1 -1 1 1 1 -i i 2 0 0 0",
            "1 1 1 -1 1 1 i -i 0 2 0 0",
            "1 -1 1 1 1 -1 1 1 0 0 2 0",
            "1 -1 -1 -1 -1 1 1 1 0 0 0 2",
        ];
        let tok = |t: &str| match t {
            "i" => I,
            "-i" => -I,
            x => ONE * x.parse::<f64>().unwrap(),
        };
        let want: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.split_whitespace().map(|t| tok(t) * 0.5).collect())
            .collect();
        let want = ComplexMatrix::from_rows(&want).unwrap();
        let g = gram(&dim4_triplet());
        assert!(g.matrix().max_abs_diff(&want) < 1e-15);
        assert!(g.structure_error() < 1e-15);
    }

    #[test]
    fn gram_of_single_basis_is_identity() {
        let set = MubSet::new(vec![ComplexMatrix::identity(4)], vec!["I".into()], tol()).unwrap();
        assert_eq!(gram(&set).matrix(), &ComplexMatrix::identity(4));
    }

    #[test]
    fn first_block_row_holds_the_bases() {
        let q = dim8_explicit();
        let g = gram(&q);
        for b in 0..q.len() {
            assert_eq!(g.block(0, b), *q.basis(b));
        }
    }

    #[test]
    fn bases_from_gram_round_trip() {
        for set in [dim4_triplet(), dim8_explicit()] {
            let back = bases_from_gram(&gram(&set), tol(), Tolerance::SPECTRAL).unwrap();
            for (a, b) in back.bases().iter().zip(set.bases()) {
                assert!(a.max_abs_diff(b) < 1e-15);
            }
        }
    }

    #[test]
    fn bases_from_gram_errors() {
        let g = GramMatrix::from_matrix(ComplexMatrix::identity(8), 4).unwrap();
        assert!(matches!(
            bases_from_gram(&g, tol(), Tolerance::SPECTRAL),
            Err(Error::RankMismatch { expected: 4, found: 8 })
        ));
        let neg = GramMatrix::from_matrix(ComplexMatrix::identity(4).scale_real(-1.0), 4).unwrap();
        assert!(matches!(
            bases_from_gram(&neg, tol(), Tolerance::SPECTRAL),
            Err(Error::NotPositiveSemidefinite(_))
        ));
    }

    #[test]
    fn er_test_on_fourier_columns() {
        let f4 = fourier(4).unwrap();
        let t = is_er_pair(&f4.column(0), &f4.column(2), tol());
        assert!(t.is_er);
        assert_eq!(t.signs, vec![Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus]);
        assert!(!is_er_pair(&f4.column(0), &f4.column(1), tol()).is_er);
        let same = is_er_pair(&f4.column(3), &f4.column(3), tol());
        assert!(same.is_er && same.signs.iter().all(|&s| s == Sign::Plus));
    }

    #[test]
    fn triplet_ger_pairs() {
        let pairs = find_ger_pairs(&gram(&dim4_triplet()), true, tol());
        let got: Vec<(usize, usize)> = pairs
            .iter()
            .map(|p| (4 * p.block + p.i + 1, 4 * p.block + p.j + 1))
            .collect();
        assert_eq!(got, vec![(1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12)]);
        assert!(pairs.iter().all(GerPair::is_balanced));
        let skipped = find_ger_pairs(&gram(&dim4_triplet()), false, tol());
        assert_eq!(skipped.len(), 4);
    }

    #[test]
    fn real_set_has_every_pair() {
        // {I, H} with H a real Hadamard matrix of order 4
        let h = dim4_triplet().basis(2).clone();
        let set = MubSet::new(vec![ComplexMatrix::identity(4), h], vec!["I".into(), "H".into()], tol()).unwrap();
        assert_eq!(find_ger_pairs(&gram(&set), false, tol()).len(), 6);
    }

    #[test]
    fn triplet_injection_places_phases() {
        let set = dim4_triplet();
        let pairs = find_ger_pairs(&gram(&set), false, tol());
        let f = inject(&set, &pairs, tol()).unwrap();
        for s in f.slots() {
            assert_eq!(s.rows, vec![2, 3]);
        }
        let cols: Vec<(usize, Vec<usize>)> = f.slots().iter().map(|s| (s.basis, s.cols.clone())).collect();
        assert_eq!(
            cols,
            vec![(1, vec![0, 1]), (1, vec![2, 3]), (2, vec![0, 1]), (2, vec![2, 3])]
        );
        assert_eq!(f.evaluate(&[0.0; 4]).unwrap(), set);
    }

    #[test]
    fn overlapping_pairs_rejected() {
        let set = MubSet::new(
            vec![ComplexMatrix::identity(4), dim4_triplet().basis(2).clone()],
            vec!["I".into(), "H".into()],
            tol(),
        )
        .unwrap();
        let pairs = find_ger_pairs(&gram(&set), false, tol());
        assert!(matches!(
            inject(&set, &pairs[..2], tol()),
            Err(Error::OverlappingSlots(0, 1))
        ));
    }

    #[test]
    fn non_ger_pair_rejected() {
        let set = dim4_triplet();
        let bogus = GerPair {
            block: 1,
            i: 0,
            j: 2,
            signs: vec![Sign::Zero; 12],
        };
        assert!(matches!(inject(&set, &[bogus], tol()), Err(Error::NotGer { .. })));
    }

    #[test]
    fn cross_block_slots_incompatible_in_dim8() {
        let q = dim8_explicit().subset(&[0, 1, 2, 3]).unwrap();
        let pairs = find_ger_pairs(&gram(&q), false, tol());
        assert_eq!(pairs.len(), 12);
        let a = pairs.iter().find(|p| p.block == 1).unwrap().clone();
        let b = pairs.iter().find(|p| p.block == 2).unwrap().clone();
        assert!(matches!(
            inject(&q, &[a.clone(), b.clone()], tol()),
            Err(Error::IncompatibleSlots(0, 1, _))
        ));
        assert!(inject_unchecked(&q, &[a, b], tol()).is_ok());
    }

    #[test]
    fn fourier_family_is_aligned() {
        let f = construction1(&fourier(4).unwrap(), tol()).unwrap();
        assert_eq!(f.num_params(), 2);
        assert!(f.slots().iter().all(|s| s.rows == vec![1, 3]));
        let r = aligned_groups(&f);
        assert_eq!((r.total, r.absorbable, r.dependent, r.independent), (2, 0, 1, 1));
        // the Gram route agrees with the ER pairs of F4 itself
        let direct: Vec<(usize, usize)> = er_pairs(&fourier(4).unwrap(), tol())
            .iter()
            .map(|p| (p.0, p.1))
            .collect();
        assert_eq!(direct, vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn triplet_accounting() {
        let set = dim4_triplet();
        let f = inject(&set, &find_ger_pairs(&gram(&set), false, tol()), tol()).unwrap();
        let r = aligned_groups(&f);
        assert_eq!((r.total, r.absorbable, r.dependent, r.independent), (4, 0, 1, 3));
    }

    #[test]
    fn quintuplet_accounting() {
        let q = dim8_explicit();
        let f = inject(&q, &find_ger_pairs(&gram(&q), false, tol()), tol()).unwrap();
        let r = aligned_groups(&f);
        assert_eq!(r.total, 4);
        assert!(r.per_basis[0].aligned);
        assert_eq!(r.dependent, 0);
    }

    #[test]
    fn counting_formulas() {
        assert_eq!(count_real_ways(3, 4).unwrap(), 12);
        assert_eq!(count_real_ways(2, 2).unwrap(), 1);
        assert_eq!(count_real_ways(5, 16).unwrap(), 480);
        assert!(matches!(count_real_ways(3, 5), Err(Error::OddDimension(5))));
        assert_eq!(real_mub_param_count(3, 4).unwrap(), (6, 4));
        assert_eq!(real_mub_param_count(2, 4).unwrap(), (4, 2));
        assert_eq!(real_mub_param_count(5, 16).unwrap(), (40, 32));
        assert!(real_mub_param_count(3, 7).is_err());
    }

    #[test]
    fn matching_sizes() {
        assert_eq!(max_matching(&[(0, 1), (1, 2), (2, 3)]), 2);
        assert_eq!(max_matching(&[(0, 1), (0, 2), (0, 3)]), 1);
        assert_eq!(max_matching(&[]), 0);
    }

    #[test]
    fn family_json_round_trip() {
        let set = dim4_triplet();
        let f = inject(&set, &find_ger_pairs(&gram(&set), false, tol()), tol()).unwrap();
        let back = ParamFamily::from_json(&f.to_json().unwrap(), tol()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn parameter_count_checked() {
        let set = dim4_triplet();
        let f = inject(&set, &find_ger_pairs(&gram(&set), false, tol()), tol()).unwrap();
        assert!(matches!(
            f.evaluate(&[1.0]),
            Err(Error::ParameterCount { expected: 4, found: 1 })
        ));
    }
}
