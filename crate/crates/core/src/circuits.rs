//! Small state-vector circuits and the diagonal phase unitaries that inject
//! aligned parameters.
//!
//! Qubit 0 is the most significant bit of a basis index. Rows in the
//! assignment table and in [`injection_unitary`] are 1-indexed; everything
//! else is 0-indexed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gerengine::ParamFamily;
use crate::matcore::{inner, phase, ComplexMatrix, Tolerance, C64, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Arbitrary 2x2 unitary on one qubit.
    Local {
        target: usize,
        matrix: [[C64; 2]; 2],
    },
    /// `e^{i phase}` on the `|11>` component of the two qubits.
    ControlledPhase {
        control: usize,
        target: usize,
        phase: f64,
    },
    Toffoli {
        c1: usize,
        c2: usize,
        target: usize,
    },
    /// `R(alpha) = diag(1, e^{i alpha})`.
    PhaseR {
        target: usize,
        alpha: f64,
    },
}

impl Gate {
    pub fn hadamard(target: usize) -> Gate {
        let s = C64::new(0.5f64.sqrt(), 0.0);
        Gate::Local {
            target,
            matrix: [[s, s], [s, -s]],
        }
    }

    pub fn x(target: usize) -> Gate {
        Gate::Local {
            target,
            matrix: [[ZERO, ONE], [ONE, ZERO]],
        }
    }

    /// `e^{i alpha} I` on one qubit: a global phase.
    pub fn global_phase(target: usize, alpha: f64) -> Gate {
        let z = phase(alpha);
        Gate::Local {
            target,
            matrix: [[z, ZERO], [ZERO, z]],
        }
    }

    /// CNOT as `H_t CP(pi) H_t`.
    pub fn cnot(control: usize, target: usize) -> [Gate; 3] {
        [
            Gate::hadamard(target),
            Gate::ControlledPhase {
                control,
                target,
                phase: std::f64::consts::PI,
            },
            Gate::hadamard(target),
        ]
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Local { target, .. } | Gate::PhaseR { target, .. } => vec![target],
            Gate::ControlledPhase { control, target, .. } => vec![control, target],
            Gate::Toffoli { c1, c2, target } => vec![c1, c2, target],
        }
    }

    fn validate(&self, n: usize, tol: Tolerance) -> Result<()> {
        let q = self.qubits();
        if let Some(&bad) = q.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidGate(format!("qubit {bad} out of range for {n} qubits")));
        }
        for a in 0..q.len() {
            if q[a + 1..].contains(&q[a]) {
                return Err(Error::InvalidGate(format!("repeated qubit {}", q[a])));
            }
        }
        if let Gate::Local { matrix, .. } = self {
            let m = ComplexMatrix::from_fn(2, 2, |i, j| matrix[i][j]);
            if !m.is_unitary(tol) {
                return Err(Error::InvalidGate("local matrix is not unitary".into()));
            }
        }
        Ok(())
    }

    /// Applies the gate in place to a state of `n` qubits.
    fn apply(&self, state: &mut [C64], n: usize) {
        let mask = |q: usize| 1usize << (n - 1 - q);
        match *self {
            Gate::Local { target, matrix } => {
                let m = mask(target);
                for i in 0..state.len() {
                    if i & m == 0 {
                        let (a, b) = (state[i], state[i | m]);
                        state[i] = matrix[0][0] * a + matrix[0][1] * b;
                        state[i | m] = matrix[1][0] * a + matrix[1][1] * b;
                    }
                }
            }
            Gate::ControlledPhase {
                control,
                target,
                phase: p,
            } => {
                let m = mask(control) | mask(target);
                let z = phase(p);
                for (i, s) in state.iter_mut().enumerate() {
                    if i & m == m {
                        *s *= z;
                    }
                }
            }
            Gate::Toffoli { c1, c2, target } => {
                let c = mask(c1) | mask(c2);
                let t = mask(target);
                for i in 0..state.len() {
                    if i & c == c && i & t == 0 {
                        state.swap(i, i | t);
                    }
                }
            }
            Gate::PhaseR { target, alpha } => {
                let m = mask(target);
                let z = phase(alpha);
                for (i, s) in state.iter_mut().enumerate() {
                    if i & m != 0 {
                        *s *= z;
                    }
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Local { target, .. } => write!(f, "U(q{target})"),
            Gate::ControlledPhase { control, target, phase } => write!(f, "CP({phase:.4})(q{control}, q{target})"),
            Gate::Toffoli { c1, c2, target } => write!(f, "CCX(q{c1}, q{c2} -> q{target})"),
            Gate::PhaseR { target, alpha } => write!(f, "R({alpha:.4})(q{target})"),
        }
    }
}

/// Gates in application order: `gates[0]` acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitIR {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

impl CircuitIR {
    pub fn new(qubits: usize) -> Self {
        CircuitIR {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, g: Gate) -> &mut Self {
        self.gates.push(g);
        self
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &CircuitIR) -> Result<CircuitIR> {
        if self.qubits != other.qubits {
            return Err(Error::InvalidGate(format!(
                "cannot join circuits on {} and {} qubits",
                self.qubits, other.qubits
            )));
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(CircuitIR {
            qubits: self.qubits,
            gates,
        })
    }

    pub fn validate(&self, tol: Tolerance) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.validate(self.qubits, tol))
    }

    pub fn count(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }

    pub fn to_records(&self) -> Vec<GateRecord> {
        self.gates.iter().map(GateRecord::from).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_records())?)
    }

    pub fn from_json(text: &str, qubits: usize, tol: Tolerance) -> Result<CircuitIR> {
        let records: Vec<GateRecord> = serde_json::from_str(text)?;
        let gates = records.iter().map(Gate::try_from).collect::<Result<Vec<_>>>()?;
        let c = CircuitIR { qubits, gates };
        c.validate(tol)?;
        Ok(c)
    }
}

/// On-disk gate: `{"kind", "targets", "params"}`. A local gate carries its
/// matrix as eight floats, row-major `re, im` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: String,
    pub targets: Vec<usize>,
    pub params: Vec<f64>,
}

impl From<&Gate> for GateRecord {
    fn from(g: &Gate) -> Self {
        let (kind, params) = match g {
            Gate::Local { matrix, .. } => ("local", matrix.iter().flatten().flat_map(|z| [z.re, z.im]).collect()),
            Gate::ControlledPhase { phase, .. } => ("controlled_phase", vec![*phase]),
            Gate::Toffoli { .. } => ("toffoli", vec![]),
            Gate::PhaseR { alpha, .. } => ("phase_r", vec![*alpha]),
        };
        GateRecord {
            kind: kind.into(),
            targets: g.qubits(),
            params,
        }
    }
}

impl TryFrom<&GateRecord> for Gate {
    type Error = Error;

    fn try_from(r: &GateRecord) -> Result<Gate> {
        let bad = || Error::InvalidGate(format!("malformed {:?} record", r.kind));
        let t = &r.targets;
        let p = &r.params;
        match (r.kind.as_str(), t.len(), p.len()) {
            ("local", 1, 8) => {
                let z = |k: usize| C64::new(p[2 * k], p[2 * k + 1]);
                Ok(Gate::Local {
                    target: t[0],
                    matrix: [[z(0), z(1)], [z(2), z(3)]],
                })
            }
            ("controlled_phase", 2, 1) => Ok(Gate::ControlledPhase {
                control: t[0],
                target: t[1],
                phase: p[0],
            }),
            ("toffoli", 3, 0) => Ok(Gate::Toffoli {
                c1: t[0],
                c2: t[1],
                target: t[2],
            }),
            ("phase_r", 1, 1) => Ok(Gate::PhaseR {
                target: t[0],
                alpha: p[0],
            }),
            _ => Err(bad()),
        }
    }
}

/// `U = G_k ... G_2 G_1` for gates `[G_1, ..., G_k]`, so that
/// `unitary_of(a.then(b)) == unitary_of(b) * unitary_of(a)`.
pub fn unitary_of(c: &CircuitIR, tol: Tolerance) -> Result<ComplexMatrix> {
    c.validate(tol)?;
    let d = 1usize << c.qubits;
    let mut u = ComplexMatrix::zeros(d, d);
    let mut col = vec![ZERO; d];
    for j in 0..d {
        col.iter_mut().for_each(|z| *z = ZERO);
        col[j] = ONE;
        for g in &c.gates {
            g.apply(&mut col, c.qubits);
        }
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    Ok(u)
}

/// Diagonal with `e^{i alpha}` at the listed 1-indexed rows, 1 elsewhere.
pub fn injection_unitary(rows: &[usize], alpha: f64, n: usize) -> Result<ComplexMatrix> {
    let mut d = vec![ONE; n];
    let z = phase(alpha);
    for &r in rows {
        if r == 0 || r > n {
            return Err(Error::RowOutOfRange { row: r, dim: n });
        }
        d[r - 1] = z;
    }
    Ok(ComplexMatrix::diagonal(&d))
}

/// Rows `{x : parity(x & mask) == parity}` over `n` qubits, 0-indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AffineForm {
    pub mask: usize,
    pub parity: usize,
}

impl AffineForm {
    /// Qubits whose bits enter the parity.
    pub fn qubits(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&q| self.mask & (1 << (n - 1 - q)) != 0).collect()
    }

    pub fn describe(&self, n: usize) -> String {
        let names = ["A", "B", "C", "D", "E", "F"];
        let qs: Vec<String> = self
            .qubits(n)
            .iter()
            .map(|&q| names.get(q).map_or(format!("q{q}"), |s| s.to_string()))
            .collect();
        format!("{} = {}", qs.join(" xor "), self.parity)
    }
}

/// The hyperplane description of a set of 0-indexed rows, if it is one.
pub fn affine_form(rows0: &[usize], n: usize) -> Option<AffineForm> {
    let d = 1usize << n;
    let mut want = vec![false; d];
    for &r in rows0 {
        *want.get_mut(r)? = true;
    }
    for mask in 1..d {
        for parity in 0..2 {
            if (0..d).all(|x| want[x] == (((x & mask).count_ones() as usize) % 2 == parity)) {
                return Some(AffineForm { mask, parity });
            }
        }
    }
    None
}

fn append(c: &mut CircuitIR, gates: impl IntoIterator<Item = Gate>) {
    c.gates.extend(gates);
}

/// `e^{i alpha}` on the single basis state `row` (0-indexed), for up to
/// three qubits.
fn state_phase(c: &mut CircuitIR, row: usize, alpha: f64) -> Result<()> {
    let n = c.qubits;
    let zeros: Vec<usize> = (0..n).filter(|&q| row & (1 << (n - 1 - q)) == 0).collect();
    append(c, zeros.iter().map(|&q| Gate::x(q)));
    match n {
        1 => append(c, [Gate::PhaseR { target: 0, alpha }]),
        2 => append(
            c,
            [Gate::ControlledPhase {
                control: 0,
                target: 1,
                phase: alpha,
            }],
        ),
        3 => {
            // CCP(a) = CP(a/2)(0,2) CNOT(0,1) CP(-a/2)(1,2) CNOT(0,1) CP(a/2)(1,2)
            let cp = |control, target, phase| Gate::ControlledPhase { control, target, phase };
            append(c, [cp(1, 2, alpha / 2.0)]);
            append(c, Gate::cnot(0, 1));
            append(c, [cp(1, 2, -alpha / 2.0)]);
            append(c, Gate::cnot(0, 1));
            append(c, [cp(0, 2, alpha / 2.0)]);
        }
        _ => {
            return Err(Error::InvalidGate(format!(
                "per-row phases implemented for at most 3 qubits, got {n}"
            )))
        }
    }
    append(c, zeros.iter().map(|&q| Gate::x(q)));
    Ok(())
}

/// A gate sequence realizing [`injection_unitary`]. Hyperplane row sets get
/// a CNOT parity ladder around one `R(alpha)`; other sets fall back to one
/// multi-controlled phase per row.
pub fn decompose_injection(rows: &[usize], alpha: f64, qubits: usize) -> Result<CircuitIR> {
    let d = 1usize << qubits;
    let mut rows0 = Vec::with_capacity(rows.len());
    for &r in rows {
        if r == 0 || r > d {
            return Err(Error::RowOutOfRange { row: r, dim: d });
        }
        rows0.push(r - 1);
    }
    rows0.sort_unstable();
    rows0.dedup();
    let mut c = CircuitIR::new(qubits);
    if rows0.is_empty() {
        return Ok(c);
    }
    if rows0.len() == d {
        c.push(Gate::global_phase(0, alpha));
        return Ok(c);
    }
    if let Some(form) = affine_form(&rows0, qubits) {
        let qs = form.qubits(qubits);
        let (&pivot, rest) = qs.split_last().expect("nonzero mask");
        for &q in rest {
            append(&mut c, Gate::cnot(q, pivot));
        }
        if form.parity == 0 {
            c.push(Gate::x(pivot));
        }
        c.push(Gate::PhaseR { target: pivot, alpha });
        if form.parity == 0 {
            c.push(Gate::x(pivot));
        }
        for &q in rest.iter().rev() {
            append(&mut c, Gate::cnot(q, pivot));
        }
        return Ok(c);
    }
    for r in rows0 {
        state_phase(&mut c, r, alpha)?;
    }
    Ok(c)
}

/// One entry of the circuit table: the quintuplet `{I} + quintuplet`, the
/// basis carrying the parameters and the rows they occupy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitAssignment {
    pub circuit: char,
    /// Hadamard basis numbers (1..=8), ascending.
    pub quintuplet: [usize; 4],
    pub parametrized: usize,
    /// 1-indexed.
    pub rows: [usize; 4],
}

impl CircuitAssignment {
    /// Indices into the nine-basis set `{I, H1, ..., H8}`, identity first.
    pub fn set_indices(&self) -> Vec<usize> {
        std::iter::once(0).chain(self.quintuplet.iter().copied()).collect()
    }
}

/// Rows (1-indexed) used by circuits A to G.
pub fn circuit_rows(circuit: char) -> Option<[usize; 4]> {
    Some(match circuit {
        'A' => [1, 2, 3, 4],
        'B' => [1, 2, 5, 6],
        'C' => [1, 3, 5, 7],
        'D' => [1, 4, 6, 7],
        'E' => [2, 3, 6, 7],
        'F' => [2, 4, 5, 7],
        'G' => [3, 4, 5, 6],
        _ => return None,
    })
}

// Brackets mark the parametrized basis. The last F entry is {4,5,6,8}, not
// {3,5,6,8}: the latter admits no parameters, while {4,5,6,8} carries 4 in
// H5 on rows 2,4,5,7 and appears nowhere else in the table.
const TABLE3: [(char, [&str; 8]); 7] = [
    (
        'A',
        [
            "12[4]6", "125[7]", "[1]347", "1[3]56", "[2]478", "256[8]", "34[6]8", "3[5]78",
        ],
    ),
    (
        'B',
        [
            "12[3]4", "127[8]", "[1]368", "14[6]7", "[2]358", "24[5]7", "3[4]56", "56[7]8",
        ],
    ),
    (
        'C',
        [
            "123[6]", "12[5]8", "13[4]8", "[1]456", "23[7]8", "[2]567", "[3]467", "457[8]",
        ],
    ),
    (
        'D',
        [
            "134[5]", "136[7]", "146[8]", "[1]578", "[2]346", "2[3]57", "2[4]58", "2[6]78",
        ],
    ),
    (
        'E',
        [
            "1[2]45", "[1]267", "14[7]8", "15[6]8", "23[4]7", "23[5]6", "[3]458", "367[8]",
        ],
    ),
    (
        'F',
        [
            "1[2]37", "[1]248", "135[8]", "1[4]57", "2[3]68", "246[7]", "35[6]7", "4[5]68",
        ],
    ),
    (
        'G',
        [
            "[1]235", "1[2]68", "1[3]78", "1[5]67", "234[8]", "245[6]", "345[7]", "[4]678",
        ],
    ),
];

fn parse_entry(circuit: char, s: &str) -> CircuitAssignment {
    let mut quintuplet = [0; 4];
    let mut parametrized = 0;
    let mut k = 0;
    let mut bracket = false;
    for ch in s.chars() {
        match ch {
            '[' => bracket = true,
            ']' => bracket = false,
            d => {
                let v = d.to_digit(10).expect("digit") as usize;
                if bracket {
                    parametrized = v;
                }
                quintuplet[k] = v;
                k += 1;
            }
        }
    }
    CircuitAssignment {
        circuit,
        quintuplet,
        parametrized,
        rows: circuit_rows(circuit).expect("known circuit"),
    }
}

/// All 56 table entries, column by column.
pub fn assignment_table() -> Vec<CircuitAssignment> {
    TABLE3
        .iter()
        .flat_map(|(c, entries)| entries.iter().map(move |e| parse_entry(*c, e)))
        .collect()
}

/// Entry for a quintuplet given by its four Hadamard basis numbers, in any order.
pub fn lookup(quintuplet: &[usize]) -> Option<CircuitAssignment> {
    let mut q = quintuplet.to_vec();
    q.sort_unstable();
    assignment_table().into_iter().find(|a| a.quintuplet[..] == q[..])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalityReport {
    /// Hyperplane form of the parameter rows, if any.
    pub affine: Option<AffineForm>,
    pub description: String,
    /// CNOTs in the decomposition.
    pub cnots: usize,
    /// The diagonal itself acts on one qubit only.
    pub single_qubit: bool,
    /// A qubit whose `R(alpha)` alone reproduces the family on the
    /// parametrized basis, up to phases of its vectors.
    pub local_on_basis: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Realization {
    pub passed: bool,
    pub worst_error: f64,
    pub alphas: Vec<f64>,
    pub locality: LocalityReport,
}

/// Checks `H_b(alpha, ..., alpha) == D(rows, alpha) H_b(0)` at each `alpha`,
/// where `b` is the assignment's parametrized basis.
pub fn verify_realization(
    f: &ParamFamily,
    a: &CircuitAssignment,
    alphas: &[f64],
    tol: Tolerance,
) -> Result<Realization> {
    let label = format!("H{}", a.parametrized);
    let b = f
        .base()
        .index_of(&label)
        .ok_or_else(|| Error::SlotMismatch(format!("family has no basis {label}")))?;
    if let Some(s) = f.slots().iter().find(|s| s.basis != b) {
        return Err(Error::SlotMismatch(format!(
            "slot on {} but the assignment parametrizes {label}",
            f.base().labels()[s.basis]
        )));
    }
    let n = f.base().dim();
    let h0 = f.base().basis(b);
    let mut worst: f64 = 0.0;
    for &alpha in alphas {
        let got = f.evaluate_uniform(alpha)?;
        let want = injection_unitary(&a.rows, alpha, n)?.matmul(h0)?;
        worst = worst.max(got.basis(b).max_abs_diff(&want));
    }
    let qubits = crate::entangle::qubit_count(n)?;
    let rows0: Vec<usize> = a.rows.iter().map(|r| r - 1).collect();
    let affine = affine_form(&rows0, qubits);
    let circuit = decompose_injection(&a.rows, 1.0, qubits)?;
    let cnots = circuit.count(|g| matches!(g, Gate::ControlledPhase { phase, .. } if *phase == std::f64::consts::PI));
    let probe = 0.9;
    let d = injection_unitary(&a.rows, probe, n)?.matmul(h0)?;
    let local_on_basis = (0..qubits).find(|&q| {
        let mut c = CircuitIR::new(qubits);
        c.push(Gate::PhaseR {
            target: q,
            alpha: probe,
        });
        let Ok(u) = unitary_of(&c, tol) else {
            return false;
        };
        let Ok(r) = u.matmul(h0) else {
            return false;
        };
        (0..n).all(|col| (inner(&r.column(col), &d.column(col)).norm() - 1.0).abs() <= 1e-9)
    });
    let locality = LocalityReport {
        description: affine.map_or_else(|| "no hyperplane form".into(), |f| f.describe(qubits)),
        single_qubit: affine.is_some_and(|f| f.mask.count_ones() == 1),
        affine,
        cnots,
        local_on_basis,
    };
    Ok(Realization {
        passed: worst <= tol.eps(),
        worst_error: worst,
        alphas: alphas.to_vec(),
        locality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::I;
    use std::f64::consts::PI;

    fn tol() -> Tolerance {
        Tolerance::CONSTRUCTION
    }

    #[test]
    fn empty_circuit_is_identity() {
        assert_eq!(
            unitary_of(&CircuitIR::new(3), tol()).unwrap(),
            ComplexMatrix::identity(8)
        );
    }

    #[test]
    fn phase_r_on_bob() {
        let mut c = CircuitIR::new(3);
        c.push(Gate::PhaseR { target: 1, alpha: 0.3 });
        let u = unitary_of(&c, tol()).unwrap();
        for r in 0..8 {
            let want = if r & 0b010 != 0 { phase(0.3) } else { ONE };
            assert!((u[(r, r)] - want).norm() < 1e-15);
        }
    }

    #[test]
    fn toffoli_truth_table() {
        let mut c = CircuitIR::new(3);
        c.push(Gate::Toffoli {
            c1: 0,
            c2: 1,
            target: 2,
        });
        let u = unitary_of(&c, tol()).unwrap();
        assert_eq!(u[(0b111, 0b110)], ONE);
        assert_eq!(u[(0b110, 0b111)], ONE);
        assert_eq!(u[(0b101, 0b101)], ONE);
    }

    #[test]
    fn cnot_flips_target() {
        let mut c = CircuitIR::new(2);
        append(&mut c, Gate::cnot(0, 1));
        let u = unitary_of(&c, tol()).unwrap();
        let want = ComplexMatrix::from_fn(4, 4, |i, j| {
            let img = if j >= 2 { j ^ 1 } else { j };
            if i == img {
                ONE
            } else {
                ZERO
            }
        });
        assert!(u.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn composition_order() {
        let mut a = CircuitIR::new(2);
        a.push(Gate::hadamard(0));
        let mut b = CircuitIR::new(2);
        b.push(Gate::ControlledPhase {
            control: 0,
            target: 1,
            phase: 0.7,
        });
        b.push(Gate::Local {
            target: 1,
            matrix: [[ZERO, -I], [I, ZERO]],
        });
        let ua = unitary_of(&a, tol()).unwrap();
        let ub = unitary_of(&b, tol()).unwrap();
        let joined = unitary_of(&a.then(&b).unwrap(), tol()).unwrap();
        assert!(joined.max_abs_diff(&ub.matmul(&ua).unwrap()) < 1e-14);
    }

    #[test]
    fn malformed_gates_rejected() {
        let mut c = CircuitIR::new(2);
        c.push(Gate::ControlledPhase {
            control: 1,
            target: 1,
            phase: 0.1,
        });
        assert!(matches!(unitary_of(&c, tol()), Err(Error::InvalidGate(_))));
        let mut c = CircuitIR::new(2);
        c.push(Gate::PhaseR { target: 2, alpha: 0.1 });
        assert!(unitary_of(&c, tol()).is_err());
        let mut c = CircuitIR::new(1);
        c.push(Gate::Local {
            target: 0,
            matrix: [[ONE, ONE], [ZERO, ONE]],
        });
        assert!(unitary_of(&c, tol()).is_err());
    }

    #[test]
    fn injection_unitary_cases() {
        let a = 0.4;
        let u = injection_unitary(&[3, 4, 5, 6], a, 8).unwrap();
        for r in 0..8 {
            let want = if (2..6).contains(&r) { phase(a) } else { ONE };
            assert_eq!(u[(r, r)], want);
        }
        assert_eq!(injection_unitary(&[1, 2], 0.0, 8).unwrap(), ComplexMatrix::identity(8));
        let u = injection_unitary(&[1, 2, 3, 4], PI, 8).unwrap();
        for r in 0..8 {
            let want = if r < 4 { -1.0 } else { 1.0 };
            assert!((u[(r, r)] - C64::new(want, 0.0)).norm() < 1e-15);
        }
        assert!(matches!(
            injection_unitary(&[0], 1.0, 8),
            Err(Error::RowOutOfRange { row: 0, dim: 8 })
        ));
        assert!(injection_unitary(&[9], 1.0, 8).is_err());
    }

    #[test]
    fn table_entries() {
        let t = assignment_table();
        assert_eq!(t.len(), 56);
        let g = lookup(&[1, 2, 3, 5]).unwrap();
        assert_eq!((g.circuit, g.parametrized, g.rows), ('G', 1, [3, 4, 5, 6]));
        let a = lookup(&[6, 4, 2, 1]).unwrap();
        assert_eq!((a.circuit, a.parametrized), ('A', 4));
        assert_eq!(circuit_rows('G'), Some([3, 4, 5, 6]));
        assert_eq!(circuit_rows('H'), None);
        // every quintuplet appears once
        let mut q: Vec<[usize; 4]> = t.iter().map(|a| a.quintuplet).collect();
        q.sort();
        q.dedup();
        assert_eq!(q.len(), 56);
        assert!(t.iter().all(|a| a.quintuplet.contains(&a.parametrized)));
    }

    #[test]
    fn circuit_rows_are_hyperplanes() {
        for c in "ABCDEFG".chars() {
            let rows0: Vec<usize> = circuit_rows(c).unwrap().iter().map(|r| r - 1).collect();
            assert!(affine_form(&rows0, 3).is_some(), "{c}");
        }
        let g = affine_form(&[2, 3, 4, 5], 3).unwrap();
        assert_eq!(g.describe(3), "A xor B = 1");
        assert_eq!(affine_form(&[0, 1, 2], 3), None);
    }

    #[test]
    fn decompositions_reproduce_diagonals() {
        let sets: Vec<Vec<usize>> = vec![
            vec![3, 4, 5, 6],
            vec![1, 2, 3, 4],
            vec![1, 4, 6, 7],
            vec![2],
            vec![1, 5, 8],
            vec![],
            (1..=8).collect(),
        ];
        for rows in sets {
            for alpha in [0.0, 0.37, 2.9, -1.2] {
                let c = decompose_injection(&rows, alpha, 3).unwrap();
                let u = unitary_of(&c, tol()).unwrap();
                let d = injection_unitary(&rows, alpha, 8).unwrap();
                assert!(u.max_abs_diff(&d) < 1e-12, "{rows:?} {alpha}");
            }
        }
        assert!(decompose_injection(&[1, 2, 3], 0.5, 4).is_err());
    }

    #[test]
    fn circuit_json_round_trip() {
        let c = decompose_injection(&[1, 4, 6, 7], 0.8, 3).unwrap();
        let back = CircuitIR::from_json(&c.to_json().unwrap(), 3, tol()).unwrap();
        assert_eq!(back, c);
        let text = r#"[{"kind":"toffoli","targets":[0,1],"params":[]}]"#;
        assert!(CircuitIR::from_json(text, 3, tol()).is_err());
    }
}
