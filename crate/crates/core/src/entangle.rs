//! Reduced states, purities and entanglement classes of multi-qubit bases.
//!
//! Qubit 0 is the most significant bit of a basis index (Alice), qubit 1 the
//! next (Bob), and so on.

use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog::MubSet;
use crate::error::{Error, Result};
use crate::gerengine::ParamFamily;
use crate::matcore::{norm, ComplexMatrix, Tolerance, C64};

/// Number of qubits for a state of length `dim`.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Partial trace of `|state><state|` over every qubit not in `keep`.
/// The kept qubits stay in ascending order.
pub fn reduce(state: &[C64], keep: &[usize], tol: Tolerance) -> Result<ComplexMatrix> {
    let n = qubit_count(state.len())?;
    let nrm = norm(state);
    if (nrm - 1.0).abs() > tol.eps() {
        return Err(Error::NotNormalized(nrm));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.len() >= n || keep.iter().any(|&q| q >= n) {
        return Err(Error::InvalidSubset(format!("{keep:?} of {n} qubits")));
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let bit = |idx: usize, q: usize| (idx >> (n - 1 - q)) & 1;
    let split = |idx: usize| {
        let a = keep.iter().fold(0, |acc, &q| (acc << 1) | bit(idx, q));
        let b = traced.iter().fold(0, |acc, &q| (acc << 1) | bit(idx, q));
        (a, b)
    };
    // psi as a (kept x traced) matrix, then rho = psi psi^dagger
    let (dk, dt) = (1 << keep.len(), 1 << traced.len());
    let mut psi = ComplexMatrix::zeros(dk, dt);
    for (idx, &z) in state.iter().enumerate() {
        let (a, b) = split(idx);
        psi[(a, b)] = z;
    }
    Ok(psi.matmul(&psi.dagger()).expect("shapes agree"))
}

/// `tr(rho^2)`
pub fn purity(rho: &ComplexMatrix) -> f64 {
    let sq = rho.matmul(rho).expect("square density matrix");
    (0..sq.rows()).map(|i| sq[(i, i)].re).sum()
}

/// Single-qubit purities `[A, B, C, ...]` of a pure state.
pub fn party_purities(state: &[C64], tol: Tolerance) -> Result<Vec<f64>> {
    let n = qubit_count(state.len())?;
    if n == 1 {
        return Ok(vec![1.0]);
    }
    (0..n).map(|q| reduce(state, &[q], tol).map(|r| purity(&r))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntanglementClass {
    FullySeparable,
    /// One qubit factors out, the other two form a maximally entangled pair.
    Biseparable,
    /// Every single-qubit reduction maximally mixed.
    MaximallyEntangled,
    Other,
}

impl fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntanglementClass::FullySeparable => "fully separable",
            EntanglementClass::Biseparable => "biseparable",
            EntanglementClass::MaximallyEntangled => "maximally entangled",
            EntanglementClass::Other => "mixed/other",
        })
    }
}

/// Class of one pure state. `spectral` decides "pure" (purity 1) and
/// "maximally mixed" (purity 1/2).
pub fn classify_state(state: &[C64], tol: Tolerance, spectral: Tolerance) -> Result<EntanglementClass> {
    let n = qubit_count(state.len())?;
    let p = party_purities(state, tol)?;
    let eps = spectral.eps();
    let pure: Vec<usize> = (0..n).filter(|&q| (p[q] - 1.0).abs() <= eps).collect();
    let mixed = p.iter().filter(|&&x| (x - 0.5).abs() <= eps).count();
    if pure.len() == n {
        return Ok(EntanglementClass::FullySeparable);
    }
    if n == 3 && mixed == 3 {
        return Ok(EntanglementClass::MaximallyEntangled);
    }
    if n == 3 && pure.len() == 1 && mixed == 2 {
        // the pure party must split off: Schmidt rank 1 across that cut
        let q = pure[0];
        let bit = |idx: usize, k: usize| (idx >> (n - 1 - k)) & 1;
        let mut m = ComplexMatrix::zeros(2, 4);
        for (idx, &z) in state.iter().enumerate() {
            let rest = (0..n).filter(|&k| k != q).fold(0, |acc, k| (acc << 1) | bit(idx, k));
            m[(bit(idx, q), rest)] = z;
        }
        if m.numeric_rank(spectral) == 1 {
            return Ok(EntanglementClass::Biseparable);
        }
    }
    Ok(EntanglementClass::Other)
}

/// Common class of all columns, or `Other` when they disagree.
pub fn classify_basis(b: &ComplexMatrix, tol: Tolerance, spectral: Tolerance) -> Result<EntanglementClass> {
    qubit_count(b.rows())?;
    let mut class = None;
    for c in 0..b.cols() {
        let k = classify_state(&b.column(c), tol, spectral)?;
        match class {
            None => class = Some(k),
            Some(prev) if prev != k => return Ok(EntanglementClass::Other),
            _ => {}
        }
    }
    Ok(class.unwrap_or(EntanglementClass::Other))
}

/// Counts of fully separable, biseparable and maximally entangled bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EntanglementSignature {
    pub separable: usize,
    pub biseparable: usize,
    pub maximally_entangled: usize,
    pub other: usize,
}

impl fmt::Display for EntanglementSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.separable, self.biseparable, self.maximally_entangled
        )?;
        if self.other > 0 {
            write!(f, " +{} other", self.other)?;
        }
        Ok(())
    }
}

pub fn signature(set: &MubSet, tol: Tolerance, spectral: Tolerance) -> Result<EntanglementSignature> {
    let mut s = EntanglementSignature::default();
    for b in set.bases() {
        match classify_basis(b, tol, spectral)? {
            EntanglementClass::FullySeparable => s.separable += 1,
            EntanglementClass::Biseparable => s.biseparable += 1,
            EntanglementClass::MaximallyEntangled => s.maximally_entangled += 1,
            EntanglementClass::Other => s.other += 1,
        }
    }
    Ok(s)
}

/// Column-wise purity range `[min, max]` of each party at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PuritySample {
    pub alpha: f64,
    pub purity_a: [f64; 2],
    pub purity_b: [f64; 2],
    pub purity_c: [f64; 2],
}

impl PuritySample {
    /// Largest difference between columns for any party.
    pub fn spread(&self) -> f64 {
        [self.purity_a, self.purity_b, self.purity_c]
            .iter()
            .map(|r| r[1] - r[0])
            .fold(0.0, f64::max)
    }
}

/// Purities of the columns of basis `b` with every slot set to `alpha`.
pub fn purity_sweep(f: &ParamFamily, b: usize, alphas: &[f64], tol: Tolerance) -> Result<Vec<PuritySample>> {
    if qubit_count(f.base().dim())? != 3 {
        return Err(Error::InvalidDimension(format!(
            "purity sweep needs 3 qubits, got dimension {}",
            f.base().dim()
        )));
    }
    let mut out = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let set = f.evaluate_uniform(alpha)?;
        let h = set.basis(b);
        let mut ranges = [[f64::INFINITY, f64::NEG_INFINITY]; 3];
        for c in 0..h.cols() {
            let p = party_purities(&h.column(c), tol)?;
            for (r, v) in ranges.iter_mut().zip(p) {
                r[0] = r[0].min(v);
                r[1] = r[1].max(v);
            }
        }
        out.push(PuritySample {
            alpha,
            purity_a: ranges[0],
            purity_b: ranges[1],
            purity_c: ranges[2],
        });
    }
    Ok(out)
}

/// `count` evenly spaced points from `a` to `b`, both included.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..count)
            .map(|k| a + (b - a) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// CSV with header `alpha,purity_A,purity_B,purity_C`; each purity is the
/// column minimum (columns agree along the families shipped here).
pub fn purity_csv(samples: &[PuritySample]) -> String {
    let mut s = String::from("alpha,purity_A,purity_B,purity_C\n");
    for p in samples {
        writeln!(
            s,
            "{:.15},{:.15},{:.15},{:.15}",
            p.alpha, p.purity_a[0], p.purity_b[0], p.purity_c[0]
        )
        .expect("write to string");
    }
    s
}
