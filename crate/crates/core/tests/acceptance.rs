//! One line per acceptance criterion, printed on every run.
//!
//! Criteria listed in `KNOWN_FAILING` are implemented as stated and are
//! expected to fail; the test breaks if one of them starts passing so the
//! list gets revisited.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::time::{Duration, Instant};

use mub_forge::catalog::{dim4_triplet, dim8_explicit, ger_table, s4, MubSet};
use mub_forge::circuits::{
    assignment_table, circuit_rows, decompose_injection, injection_unitary, lookup, unitary_of, verify_realization,
};
use mub_forge::entangle::{classify_basis, linspace, purity_sweep, EntanglementClass};
use mub_forge::gerengine::{
    aligned_groups, count_real_ways, find_ger_pairs, gram, inject, inject_unchecked, real_mub_param_count,
};
use mub_forge::presets::{family_of, named_set};
use mub_forge::verifier::{analyze_subset, random_points, rank_bound, sweep, table1_census, table2_check, GridSpec};
use mub_forge::{ComplexMatrix, Tolerance, C64};

const EPS: f64 = 1e-10;
const EPS_SPECTRAL: f64 = 1e-8;
const EPS_CIRCUIT: f64 = 1e-12;
const SEED: u64 = 42;

const KNOWN_FAILING: &[usize] = &[3];

fn tol() -> Tolerance {
    Tolerance::new(EPS).unwrap()
}

fn spectral() -> Tolerance {
    Tolerance::new(EPS_SPECTRAL).unwrap()
}

struct Check {
    ok: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn expect(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(format!("FAILED {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn within(&mut self, start: Instant, limit: Duration) {
        let t = start.elapsed();
        self.expect(t <= limit, format!("runtime {t:?} > {limit:?}"));
        self.note(format!("{:.2}s", t.as_secs_f64()));
    }
}

fn c1_dim4_family() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let set = dim4_triplet();
    let f = family_of(&set, tol()).unwrap();
    let placement: Vec<(usize, Vec<usize>, Vec<usize>)> = f
        .slots()
        .iter()
        .map(|s| (s.basis, s.rows.clone(), s.cols.clone()))
        .collect();
    let want = vec![
        (1, vec![2, 3], vec![0, 1]),
        (1, vec![2, 3], vec![2, 3]),
        (2, vec![2, 3], vec![0, 1]),
        (2, vec![2, 3], vec![2, 3]),
    ];
    c.expect(placement == want, format!("slots {placement:?}"));

    // H2(a, b) and H3(c, d) written out entry by entry.
    let (a, b, g, d) = (0.3, 1.1, 2.5, 4.2);
    let e = |x: f64| C64::from_polar(0.5, x);
    let h = C64::new(0.5, 0.0);
    let i = C64::new(0.0, 1.0);
    let h2 = ComplexMatrix::from_rows(&[
        vec![h, h, h, h],
        vec![h, h, -h, -h],
        vec![e(a), -e(a), i * e(b), -i * e(b)],
        vec![e(a), -e(a), -i * e(b), i * e(b)],
    ])
    .unwrap();
    let h3 = ComplexMatrix::from_rows(&[
        vec![h, h, h, h],
        vec![h, h, -h, -h],
        vec![-e(g), e(g), e(d), -e(d)],
        vec![e(g), -e(g), e(d), -e(d)],
    ])
    .unwrap();
    let got = f.evaluate(&[a, b, g, d]).unwrap();
    c.expect(got.basis(1).max_abs_diff(&h2) < 1e-15, "H2 entries");
    c.expect(got.basis(2).max_abs_diff(&h3) < 1e-15, "H3 entries");

    let rep = sweep(&f, &GridSpec::grid_only(5), tol(), spectral()).unwrap();
    c.expect(rep.points == 625, format!("{} grid points", rep.points));
    c.expect(rep.passed && rep.worst_overlap_error <= EPS, "grid sweep");
    c.note(format!("5^4 grid worst {:.1e}", rep.worst_overlap_error));
    c.within(start, Duration::from_secs(5));
    c
}

fn c2_dim4_ger_pairs() -> Check {
    let mut c = Check::new();
    let pairs = find_ger_pairs(&gram(&dim4_triplet()), true, tol());
    let got: BTreeSet<(usize, usize)> = pairs
        .iter()
        .map(|p| (4 * p.block + p.i + 1, 4 * p.block + p.j + 1))
        .collect();
    let want: BTreeSet<(usize, usize)> = [(1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12)].into();
    c.expect(got == want, format!("pairs {got:?}"));
    c.note(format!("{} pairs", pairs.len()));
    c
}

fn c3_dim8_triplet() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let set = dim8_explicit().subset(&[0, 1, 2, 3]).unwrap();
    let pairs = find_ger_pairs(&gram(&set), false, tol());
    let blockwise = |b: usize| -> BTreeSet<(usize, usize)> {
        pairs
            .iter()
            .filter(|p| p.block == b)
            .map(|p| (p.i + 1, p.j + 1))
            .collect()
    };
    c.expect(blockwise(1) == [(1, 2), (3, 6), (4, 7), (5, 8)].into(), "H1 pairs");
    c.expect(blockwise(2) == [(1, 8), (2, 5), (3, 4), (6, 7)].into(), "H2 pairs");
    c.expect(blockwise(3) == [(1, 4), (2, 6), (3, 8), (5, 7)].into(), "H3 pairs");
    c.expect(pairs.len() == 12, format!("{} pairs", pairs.len()));
    if let Err(e) = inject(&set, &pairs, tol()) {
        c.note(format!("checked injection refused: {e}"));
    }
    let f = inject_unchecked(&set, &pairs, tol()).unwrap();
    let rep = aligned_groups(&f);
    c.expect(rep.total == 12, format!("{} slots", rep.total));
    c.expect(rep.absorbable == 4, format!("{} absorbable", rep.absorbable));
    c.expect(rep.dependent == 1, format!("{} dependent", rep.dependent));
    c.expect(rep.independent == 7, format!("{} independent", rep.independent));
    let sw = sweep(&f, &GridSpec::random_only(100, SEED), tol(), spectral()).unwrap();
    c.expect(
        sw.passed,
        format!("100 random points, worst {:.3e}", sw.worst_overlap_error),
    );
    c.within(start, Duration::from_secs(10));
    c
}

fn c4_quintuplet() -> Check {
    let mut c = Check::new();
    let set = dim8_explicit();
    let f = family_of(&set, tol()).unwrap();
    c.expect(f.num_params() == 4, format!("{} parameters", f.num_params()));
    c.expect(f.slots().iter().all(|s| s.basis == 1), "parameters in H1");
    let rep = sweep(&f, &GridSpec::random_only(100, SEED), tol(), spectral()).unwrap();
    c.expect(rep.passed && rep.worst_overlap_error <= EPS, "random sweep");
    c.note(format!("100 random worst {:.1e}", rep.worst_overlap_error));
    let pairs = find_ger_pairs(&gram(&set), false, tol());
    let others = pairs.iter().filter(|p| p.block != 1).count();
    c.expect(others == 0, format!("{others} GER pairs in H2, H3, H5"));
    c.note(format!("{} GER pairs, all in H1", pairs.len()));
    c
}

fn c5_table2() -> Check {
    let mut c = Check::new();
    let table = ger_table();
    c.expect(
        table.cell(2, 1).map(|x| x.to_string()).as_deref() == Some("1-2-5-8;3-4-6-7"),
        "cell (2,1)",
    );
    let explicit = table2_check(&dim8_explicit(), &table, tol());
    let ok = explicit.iter().filter(|x| x.matches).count();
    c.expect(
        explicit.len() == 12 && ok == 12,
        format!("explicit {ok}/{}", explicit.len()),
    );
    let full = table2_check(&s4(), &table, tol());
    let ok_full = full.iter().filter(|x| x.matches).count();
    c.expect(
        full.len() == 56 && ok_full == 56,
        format!("full {ok_full}/{}", full.len()),
    );
    c.note(format!("explicit {ok}/12, full {ok_full}/56"));
    c
}

fn c6_census() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let census = table1_census(&s4(), tol()).unwrap();
    let row = |m: usize| census.row(m).unwrap();
    c.expect(row(2).max_params == 4 && row(2).min_params == 4, "m=2 -> 4");
    c.expect(row(3).max_params == 8 && row(3).min_params == 8, "m=3 -> 8");
    c.expect(
        row(4).max_params == 4 && row(4).max_param_bases == 1,
        "m=4 -> 4 in one basis",
    );
    c.expect(
        census.of_size(5).all(|s| s.params == 0 || s.params == 4) && row(5).max_params == 4,
        "m=5 -> 0 or 4",
    );
    for m in 6..=9 {
        c.expect(row(m).max_params == 0, format!("m={m} -> 0"));
    }
    let items = [
        census.item_i(),
        census.item_ii(),
        census.item_iii(),
        census.item_iv(),
        census.item_v(),
    ];
    for (name, ok) in ["i", "ii", "iii", "iv", "v"].iter().zip(items) {
        c.expect(ok, format!("item {name}"));
    }
    c.note(format!("{} subsets", census.subsets.len()));
    c.within(start, Duration::from_secs(60));
    c
}

fn c7_purity() -> Check {
    let mut c = Check::new();
    let f = family_of(&dim8_explicit(), tol()).unwrap();
    let alphas = linspace(0.0, FRAC_PI_2, 101);
    let samples = purity_sweep(&f, 1, &alphas, tol()).unwrap();
    c.expect(samples.len() == 101, "101 points");
    let half = |r: [f64; 2]| (r[0] - 0.5).abs() <= EPS && (r[1] - 0.5).abs() <= EPS;
    c.expect(
        samples.iter().all(|s| half(s.purity_b) && half(s.purity_c)),
        "B and C maximally mixed",
    );
    let first = samples.first().unwrap();
    let last = samples.last().unwrap();
    c.expect(half(first.purity_a), format!("purity_A(0) = {:?}", first.purity_a));
    c.expect(
        (last.purity_a[0] - 1.0).abs() <= EPS && (last.purity_a[1] - 1.0).abs() <= EPS,
        format!("purity_A(pi/2) = {:?}", last.purity_a),
    );
    let at = |a: f64| classify_basis(f.evaluate_uniform(a).unwrap().basis(1), tol(), spectral()).unwrap();
    let (c0, c1) = (at(0.0), at(FRAC_PI_2));
    c.expect(c0 == EntanglementClass::MaximallyEntangled, format!("H1(0) {c0}"));
    c.expect(c1 == EntanglementClass::Biseparable, format!("H1(pi/2) {c1}"));
    c.note(format!("H1: {c0} -> {c1}"));
    c
}

fn sylvester4() -> MubSet {
    let h = ComplexMatrix::from_fn(4, 4, |i, j| {
        C64::new(if (i & j).count_ones() % 2 == 0 { 0.5 } else { -0.5 }, 0.0)
    });
    MubSet::new(vec![ComplexMatrix::identity(4), h], vec!["I".into(), "S".into()], tol()).unwrap()
}

fn c8_rank_bound() -> Check {
    let mut c = Check::new();
    let mut sets: Vec<(String, MubSet)> = [
        "dim4",
        "dim8",
        "dim8-triplet",
        "s4",
        "fourier2",
        "fourier3",
        "fourier5",
        "fourier6",
    ]
    .iter()
    .map(|n| (n.to_string(), named_set(n).unwrap()))
    .collect();
    sets.push(("real dim4".into(), sylvester4()));
    for (name, set) in &sets {
        let rb = rank_bound(&gram(set), tol(), spectral()).unwrap();
        c.expect(
            rb.identity_error <= EPS,
            format!("{name} identity {:.1e}", rb.identity_error),
        );
        c.expect(
            rb.lhs == set.len() * set.dim() - (set.len() - 1),
            format!("{name} rank {}", rb.lhs),
        );
        c.expect(
            rb.spectrum_error <= EPS_SPECTRAL,
            format!("{name} spectrum {:.1e}", rb.spectrum_error),
        );
        c.expect(
            rb.m_bound == set.dim() + 1 && set.len() <= rb.m_bound,
            format!("{name} m bound"),
        );
        c.expect(
            rb.real == (rb.real_bound == Some(set.dim() / 2 + 1)),
            format!("{name} real bound"),
        );
        c.expect(rb.holds(tol(), spectral()), format!("{name} holds"));
    }
    let real = rank_bound(&gram(&sylvester4()), tol(), spectral()).unwrap();
    c.expect(real.real_bound == Some(3), "real dim4 bound 3");
    c.note(format!("{} sets", sets.len()));
    c
}

fn c9_circuits() -> Check {
    let mut c = Check::new();
    let a = lookup(&[1, 2, 3, 5]).unwrap();
    c.expect(
        a.circuit == 'G' && a.rows == [3, 4, 5, 6] && a.parametrized == 1,
        "table entry for 1235",
    );
    let f = family_of(&dim8_explicit(), tol()).unwrap();
    let alphas: Vec<f64> = random_points(1, 10, SEED).into_iter().map(|p| p[0]).collect();
    let r = verify_realization(&f, &a, &alphas, tol()).unwrap();
    c.expect(r.passed, format!("quintuplet realization {:.1e}", r.worst_error));

    let mut worst: f64 = 0.0;
    for circuit in "ABCDEFG".chars() {
        let rows = circuit_rows(circuit).unwrap();
        for &alpha in &alphas {
            let u = unitary_of(&decompose_injection(&rows, alpha, 3).unwrap(), tol()).unwrap();
            worst = worst.max(u.max_abs_diff(&injection_unitary(&rows, alpha, 8).unwrap()));
        }
    }
    c.expect(worst <= EPS_CIRCUIT, format!("re-simulation {worst:.1e}"));

    let full = s4();
    let realized = assignment_table()
        .iter()
        .filter(|a| {
            let (_, f) = analyze_subset(&full, &a.set_indices(), tol()).unwrap();
            verify_realization(&f, a, &alphas, tol())
                .map(|r| r.passed)
                .unwrap_or(false)
        })
        .count();
    c.expect(realized == 56, format!("table {realized}/56"));
    c.note(format!("re-simulation {worst:.1e}, table {realized}/56"));
    c
}

fn c10_formulas() -> Check {
    let mut c = Check::new();
    c.expect(count_real_ways(3, 4).unwrap() == 12, "count_real_ways(3,4)");
    for k in [2usize, 4, 6] {
        let (_, nonabsorbable) = real_mub_param_count(k + 1, k * k).unwrap();
        c.expect(nonabsorbable == k.pow(3) / 2, format!("k={k}: {nonabsorbable}"));
        c.note(format!("k={k}: {nonabsorbable}"));
    }
    c
}

type Criterion = (&'static str, fn() -> Check);

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("dimension-4 family", c1_dim4_family),
        ("dimension-4 GER pairs", c2_dim4_ger_pairs),
        ("dimension-8 triplet, 12 slots", c3_dim8_triplet),
        ("dimension-8 quintuplet", c4_quintuplet),
        ("GER structure table", c5_table2),
        ("subset census", c6_census),
        ("purity endpoints", c7_purity),
        ("Gram rank identity", c8_rank_bound),
        ("circuit table", c9_circuits),
        ("counting formulas", c10_formulas),
    ];
    let mut out = std::io::stdout().lock();
    let mut unexpected = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = k + 1;
        let c = run();
        let tag = if c.ok { "PASS" } else { "FAIL" };
        let known = KNOWN_FAILING.contains(&id);
        let suffix = if known { " (known failing)" } else { "" };
        // Written to the raw handle so the lines show without `--nocapture`.
        writeln!(out, "criterion {id:>2} {tag} {name}{suffix}: {}", c.notes.join("; ")).unwrap();
        if c.ok == known {
            unexpected.push(id);
        }
    }
    assert!(
        unexpected.is_empty(),
        "criteria with unexpected outcome: {unexpected:?}"
    );
}
