use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mub_forge::catalog::{complete_s4, ger_table, load_mubset};
use mub_forge::circuits::{
    assignment_table, circuit_rows, decompose_injection, injection_unitary, lookup, unitary_of, CircuitAssignment,
};
use mub_forge::entangle::{classify_basis, linspace, purity_csv, purity_sweep, signature};
use mub_forge::gerengine::{aligned_groups, find_ger_pairs, gram, inject_unchecked};
use mub_forge::presets::{family_of, named_family, named_set};
use mub_forge::verifier::{analyze_subset, random_points, rank_bound, sweep, table1_census, table2_check, GridSpec};
use mub_forge::{ComplexMatrix, MubSet, ParamFamily, Tolerance};

#[derive(Parser)]
#[command(
    name = "mub-forge",
    version,
    about = "Build and check parametrized mutually unbiased bases"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Construction tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    eps: f64,
    /// Tolerance for eigenvalue comparisons.
    #[arg(long, global = true, default_value_t = 1e-8)]
    eps_spectral: f64,
    /// Seed for random sample points.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Where to write the JSON/CSV artifact.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SetSource {
    /// dim4, dim8, dim8-quintuplet, dim8-triplet, s4 or fourier<N>.
    #[arg(long, default_value = "dim4", conflicts_with = "input")]
    set: String,
    /// A set saved as JSON.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct FamilySource {
    /// dim4, dim8-quintuplet, dim8-triplet, dim8-triplet-all or fourier<N>.
    #[arg(long, default_value = "dim4", conflicts_with = "input")]
    family: String,
    /// A family saved by `inject`.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a set of bases for unbiasedness.
    Catalog(SetSource),
    /// Gram matrix of a set.
    Gram(SetSource),
    /// List GER column pairs of the Gram matrix.
    FindGer {
        #[command(flatten)]
        src: SetSource,
        /// Also search the reference block.
        #[arg(long)]
        include_first_block: bool,
    },
    /// Inject the largest compatible selection of GER pairs.
    Inject {
        #[command(flatten)]
        src: SetSource,
        /// Use every GER pair and skip the compatibility check.
        #[arg(long)]
        unchecked: bool,
    },
    /// Sweep a family over a grid and random points.
    Sweep {
        #[command(flatten)]
        src: FamilySource,
        /// Grid points per parameter axis (0 disables the grid).
        #[arg(long, default_value_t = 5)]
        grid: usize,
        /// Random points after the grid.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Parameter census over all subsets of the nine-basis set.
    Census {
        /// Nine-basis set as JSON instead of the shipped one.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Purities and entanglement classes along a three-qubit family.
    Entangle {
        #[arg(long, default_value = "dim8-quintuplet", conflicts_with = "input")]
        family: String,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Label of the basis to follow; defaults to the first parametrized one.
        #[arg(long)]
        basis: Option<String>,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = FRAC_PI_2)]
        to: f64,
        /// Also write the purity curve as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Rank identity of the entrywise squared Gram matrix and the bounds it implies.
    Bound(SetSource),
    /// Gate decomposition of a diagonal phase, or a check of circuit-table entries.
    Circuit {
        /// 1-indexed rows receiving the phase.
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
        /// Rows of circuit A..G.
        #[arg(long, conflicts_with = "rows")]
        circuit: Option<char>,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        qubits: usize,
        /// Four Hadamard basis numbers; checks the realization on the nine-basis set.
        #[arg(long, value_delimiter = ',')]
        quintuplet: Vec<usize>,
        /// Check every entry of the circuit table.
        #[arg(long)]
        all: bool,
        /// Parameter values per realization check.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Write shipped data.
    Export {
        #[arg(value_enum)]
        what: Export,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Export {
    /// The nine-basis set.
    S4,
    /// The nine-basis set rebuilt from the five explicit bases.
    S4Generate,
    /// GER structure table and its check against the nine-basis set.
    Table2,
    /// Circuit table.
    Table3,
}

struct Ctx {
    tol: Tolerance,
    spectral: Tolerance,
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
}

impl Ctx {
    fn emit_json<T: Serialize + ?Sized>(&self, value: &T) -> anyhow::Result<()> {
        self.write(&(serde_json::to_string_pretty(value)? + "\n"))
    }

    fn write(&self, text: &str) -> anyhow::Result<()> {
        if let Some(p) = &self.out {
            write_file(p, text)?;
        }
        Ok(())
    }

    fn json_only(&self) -> anyhow::Result<()> {
        if self.format == Format::Csv {
            bail!("this command writes JSON only");
        }
        Ok(())
    }
}

fn write_file(p: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    println!("wrote {}", p.display());
    Ok(())
}

fn load_set(src: &SetSource, tol: Tolerance) -> anyhow::Result<MubSet> {
    Ok(match &src.input {
        Some(p) => load_mubset(p, tol).with_context(|| format!("loading {}", p.display()))?,
        None => named_set(&src.set)?,
    })
}

fn load_family(name: &str, input: &Option<PathBuf>, tol: Tolerance) -> anyhow::Result<ParamFamily> {
    Ok(match input {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            ParamFamily::from_json(&text, tol)?
        }
        None => named_family(name, tol)?,
    })
}

fn matrix_json(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Returns whether every check passed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let ctx = Ctx {
        tol: Tolerance::new(cli.opts.eps)?,
        spectral: Tolerance::new(cli.opts.eps_spectral)?,
        seed: cli.opts.seed,
        out: cli.opts.out,
        format: cli.opts.format,
    };
    let tol = ctx.tol;
    match cli.cmd {
        Cmd::Catalog(src) => {
            ctx.json_only()?;
            let set = load_set(&src, tol)?;
            let dev = set.deviation();
            let ok = dev.worst <= tol.eps();
            println!(
                "dimension {}, {} bases: {}",
                set.dim(),
                set.len(),
                set.labels().join(" ")
            );
            println!(
                "worst deviation {:.3e} at {:?}: {}",
                dev.worst,
                dev.location,
                status(ok)
            );
            ctx.write(&(set.to_json()? + "\n"))?;
            Ok(ok)
        }
        Cmd::Gram(src) => {
            ctx.json_only()?;
            let set = load_set(&src, tol)?;
            let g = gram(&set);
            let err = g.structure_error();
            let ok = err <= tol.eps();
            println!(
                "{}x{} Gram matrix, {} blocks of {}",
                g.matrix().rows(),
                g.matrix().cols(),
                g.blocks(),
                g.dim()
            );
            println!("structure error {err:.3e}: {}", status(ok));
            #[derive(Serialize)]
            struct Out<'a> {
                dim: usize,
                blocks: usize,
                labels: &'a [String],
                matrix: Vec<Vec<[f64; 2]>>,
            }
            ctx.emit_json(&Out {
                dim: g.dim(),
                blocks: g.blocks(),
                labels: g.labels(),
                matrix: matrix_json(g.matrix()),
            })?;
            Ok(ok)
        }
        Cmd::FindGer {
            src,
            include_first_block,
        } => {
            let set = load_set(&src, tol)?;
            let pairs = find_ger_pairs(&gram(&set), include_first_block, tol);
            println!("{} GER pairs", pairs.len());
            for p in &pairs {
                println!("  {}  {}", p, p.sign_string());
            }
            #[derive(Serialize)]
            struct Row {
                block: usize,
                i: usize,
                j: usize,
                signs: String,
            }
            let rows: Vec<Row> = pairs
                .iter()
                .map(|p| Row {
                    block: p.block,
                    i: p.i,
                    j: p.j,
                    signs: p.sign_string(),
                })
                .collect();
            match ctx.format {
                Format::Json => ctx.emit_json(&rows)?,
                Format::Csv => {
                    let mut s = String::from("block,i,j,signs\n");
                    for r in &rows {
                        s += &format!("{},{},{},{}\n", r.block, r.i, r.j, r.signs);
                    }
                    ctx.write(&s)?;
                }
            }
            Ok(true)
        }
        Cmd::Inject { src, unchecked } => {
            ctx.json_only()?;
            let set = load_set(&src, tol)?;
            let f = if unchecked {
                inject_unchecked(&set, &find_ger_pairs(&gram(&set), false, tol), tol)?
            } else {
                family_of(&set, tol)?
            };
            let rep = aligned_groups(&f);
            println!("{} slots", f.num_params());
            for s in f.slots() {
                println!("  {} rows {:?} cols {:?}", set.labels()[s.basis], s.rows, s.cols);
            }
            println!(
                "total {}, absorbable {}, dependent {}, independent {}",
                rep.total, rep.absorbable, rep.dependent, rep.independent
            );
            ctx.write(&(f.to_json()? + "\n"))?;
            Ok(true)
        }
        Cmd::Sweep { src, grid, samples } => {
            ctx.json_only()?;
            let f = load_family(&src.family, &src.input, tol)?;
            let spec = GridSpec {
                points_per_axis: grid,
                samples,
                seed: ctx.seed,
                ..Default::default()
            };
            let rep = sweep(&f, &spec, tol, ctx.spectral)?;
            println!("{} parameters, {} points", f.num_params(), rep.points);
            println!(
                "worst overlap error {:.3e} at {:?}",
                rep.worst_overlap_error, rep.worst_location
            );
            println!(
                "worst modulus error {:.3e}, worst spectrum error {:.3e}",
                rep.worst_modulus_error, rep.worst_spectrum_error
            );
            for n in &rep.notes {
                println!("note: {n}");
            }
            println!("{}", status(rep.passed));
            ctx.write(&(rep.to_json()? + "\n"))?;
            Ok(rep.passed)
        }
        Cmd::Census { input } => {
            let s4 = match &input {
                Some(p) => load_mubset(p, tol)?,
                None => named_set("s4")?,
            };
            if s4.len() != 9 || s4.dim() != 8 {
                bail!("census needs nine bases in dimension 8");
            }
            let c = table1_census(&s4, tol)?;
            println!(" m  subsets  max  min  independent@max  ger-bound");
            for r in &c.rows {
                println!(
                    "{:>2}  {:>7}  {:>3}  {:>3}  {:>15}  {:>9}",
                    r.m,
                    r.subsets,
                    r.max_params,
                    r.min_params,
                    format!("{:?}", r.independent_at_max),
                    r.max_ger_bound
                );
            }
            let items = [c.item_i(), c.item_ii(), c.item_iii(), c.item_iv(), c.item_v()];
            for (name, ok) in ["i", "ii", "iii", "iv", "v"].iter().zip(items) {
                println!("item {name}: {}", status(ok));
            }
            match ctx.format {
                Format::Json => ctx.write(&(c.to_json()? + "\n"))?,
                Format::Csv => {
                    let mut s = String::from("m,subsets,max_params,min_params,independent_at_max,max_ger_bound\n");
                    for r in &c.rows {
                        let ind: Vec<String> = r.independent_at_max.iter().map(|v| v.to_string()).collect();
                        s += &format!(
                            "{},{},{},{},{},{}\n",
                            r.m,
                            r.subsets,
                            r.max_params,
                            r.min_params,
                            ind.join(";"),
                            r.max_ger_bound
                        );
                    }
                    ctx.write(&s)?;
                }
            }
            Ok(items.iter().all(|&x| x))
        }
        Cmd::Entangle {
            family,
            input,
            basis,
            points,
            from,
            to,
            csv,
        } => {
            let f = load_family(&family, &input, tol)?;
            let b = match &basis {
                Some(l) => f.base().index_of(l).with_context(|| format!("no basis labelled {l}"))?,
                None => f.slots().first().map(|s| s.basis).context("family has no slots")?,
            };
            let label = &f.base().labels()[b];
            let samples = purity_sweep(&f, b, &linspace(from, to, points), tol)?;
            let start = f.evaluate_uniform(from)?;
            let end = f.evaluate_uniform(to)?;
            println!("signature at {from}: {}", signature(&start, tol, ctx.spectral)?);
            println!("signature at {to}: {}", signature(&end, tol, ctx.spectral)?);
            println!(
                "{label}: {} at {from}, {} at {to}",
                classify_basis(start.basis(b), tol, ctx.spectral)?,
                classify_basis(end.basis(b), tol, ctx.spectral)?
            );
            if let (Some(a), Some(z)) = (samples.first(), samples.last()) {
                println!(
                    "purity A {:.12} -> {:.12}, B {:.12} -> {:.12}, C {:.12} -> {:.12}",
                    a.purity_a[0], z.purity_a[0], a.purity_b[0], z.purity_b[0], a.purity_c[0], z.purity_c[0]
                );
            }
            let text = purity_csv(&samples);
            if let Some(p) = &csv {
                write_file(p, &text)?;
            }
            match ctx.format {
                Format::Json => ctx.emit_json(&samples)?,
                Format::Csv => ctx.write(&text)?,
            }
            Ok(true)
        }
        Cmd::Bound(src) => {
            ctx.json_only()?;
            let set = load_set(&src, tol)?;
            let rb = rank_bound(&gram(&set), tol, ctx.spectral)?;
            let ok = rb.holds(tol, ctx.spectral);
            println!(
                "m = {}, N = {}: rank {} (expected {}), identity error {:.3e}, spectrum error {:.3e}",
                rb.m, rb.n, rb.lhs, rb.expected_rank, rb.identity_error, rb.spectrum_error
            );
            print!("m <= {}", rb.m_bound);
            match rb.real_bound {
                Some(r) => println!(", real Gram matrix: m <= {r}"),
                None => println!(),
            }
            println!("{}", status(ok));
            ctx.emit_json(&rb)?;
            Ok(ok)
        }
        Cmd::Circuit {
            rows,
            circuit,
            alpha,
            qubits,
            quintuplet,
            all,
            samples,
        } => {
            ctx.json_only()?;
            if all {
                return check_table(&ctx, samples);
            }
            let rows = match circuit {
                Some(c) => circuit_rows(c.to_ascii_uppercase())
                    .with_context(|| format!("unknown circuit {c}"))?
                    .to_vec(),
                None => rows,
            };
            if !quintuplet.is_empty() {
                let mut a =
                    lookup(&quintuplet).with_context(|| format!("{quintuplet:?} is not in the circuit table"))?;
                if !rows.is_empty() {
                    a.rows = rows.as_slice().try_into().context("a table entry has four rows")?;
                }
                let ok = check_assignment(&ctx, &a, samples)?;
                println!("{}", status(ok));
                return Ok(ok);
            }
            if rows.is_empty() {
                bail!("give --rows, --circuit, --quintuplet or --all");
            }
            let c = decompose_injection(&rows, alpha, qubits)?;
            let u = unitary_of(&c, tol)?;
            let err = u.max_abs_diff(&injection_unitary(&rows, alpha, 1 << qubits)?);
            let ok = err <= 1e-12;
            println!("rows {rows:?}, alpha {alpha}: {} gates", c.gates.len());
            for g in &c.gates {
                println!("  {g}");
            }
            println!("re-simulation error {err:.3e}: {}", status(ok));
            ctx.write(&(c.to_json()? + "\n"))?;
            Ok(ok)
        }
        Cmd::Export { what } => {
            ctx.json_only()?;
            match what {
                Export::S4 => ctx.write(&(named_set("s4")?.to_json()? + "\n"))?,
                Export::S4Generate => {
                    let s = complete_s4(tol)?;
                    println!("generated {} bases: {}", s.len(), s.labels().join(" "));
                    ctx.write(&(s.to_json()? + "\n"))?;
                }
                Export::Table2 => {
                    let checks = table2_check(&named_set("s4")?, &ger_table(), tol);
                    let ok = checks.iter().filter(|c| c.matches).count();
                    println!("{ok}/{} cells match", checks.len());
                    ctx.emit_json(&checks)?;
                    return Ok(ok == checks.len());
                }
                Export::Table3 => {
                    let t = assignment_table();
                    println!("{} entries", t.len());
                    ctx.emit_json(&t)?;
                }
            }
            Ok(true)
        }
    }
}

fn check_assignment(ctx: &Ctx, a: &CircuitAssignment, samples: usize) -> anyhow::Result<bool> {
    let s4 = named_set("s4")?;
    let (_, f) = analyze_subset(&s4, &a.set_indices(), ctx.tol)?;
    let alphas: Vec<f64> = random_points(1, samples, ctx.seed).into_iter().map(|p| p[0]).collect();
    let r = mub_forge::circuits::verify_realization(&f, a, &alphas, ctx.tol)?;
    println!(
        "{} {:?} H{} rows {:?}: worst {:.3e}, {}, local qubit {:?}",
        a.circuit,
        a.quintuplet,
        a.parametrized,
        a.rows,
        r.worst_error,
        r.locality.description,
        r.locality.local_on_basis
    );
    Ok(r.passed)
}

fn check_table(ctx: &Ctx, samples: usize) -> anyhow::Result<bool> {
    let mut ok = 0;
    let table = assignment_table();
    for a in &table {
        match check_assignment(ctx, a, samples) {
            Ok(true) => ok += 1,
            Ok(false) => {}
            Err(e) => println!("{} {:?}: {e}", a.circuit, a.quintuplet),
        }
    }
    println!("{ok}/{} entries realized", table.len());
    ctx.emit_json(&table)?;
    Ok(ok == table.len())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
