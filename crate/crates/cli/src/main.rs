//! `idemat`: validate, factor, invert and count over finite idempotent
//! semirings and their residuated-map matrices.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use idemat_core::factor::{aut_count, count_invertible, factorize};
use idemat_core::formats::{
    load_lattice, load_matrix, load_semiring, matrix_to_json, res_matrix_file, semiring_matrix_file, LatticeFile,
    LoadedMatrix, MatrixFile, SemiringFile,
};
use idemat_core::iso::automorphisms;
use idemat_core::matrix::{check_invertible, invert, semiring_matrix_pipeline, ResMatrix, SemiringMatrix};
use idemat_core::oracle::{self, oracle_count_invertible, oracle_inverse, oracle_is_invertible};
use idemat_core::random::random_invertible_seeded;
use idemat_core::semiring::{embed, generate_simple_semiring, natural_order_lattice, pullback_element};
use idemat_core::SemiringError;

use report::{factor_names, lattice_summary, Report};

const DEFAULT_SEED: u64 = 0x1de3a7;

#[derive(Parser)]
#[command(name = "idemat", version, about = "Matrices over finite additively idempotent semirings")]
struct Cli {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for exhaustive searches
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite lattices
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Finite idempotent semirings
    #[command(subcommand)]
    Semiring(SemiringCmd),
    /// Matrix invertibility, inverses and counts
    #[command(subcommand)]
    Matrix(MatrixCmd),
    /// Brute-force ground truth
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Generators
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Check that a file describes a lattice
    Validate { source: String },
    /// Decompose into directly irreducible factors
    Factor { source: String },
    /// List the automorphisms
    Aut { source: String },
}

#[derive(Subcommand)]
enum SemiringCmd {
    /// Check every semiring axiom and additive idempotence
    Validate { source: String },
    /// The lattice of the natural order x <= y iff x + y = y
    OrderLattice { source: String },
    /// The embedding r -> (x -> r x) into residuated maps
    Embed { source: String },
    /// Close the zero map and all e_{a,b} under join and composition
    Generate {
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value_t = idemat_core::semiring::DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MatrixCmd {
    /// Decide invertibility and print the certificate (exit 1 if singular)
    Check { file: PathBuf },
    /// Write the inverse in the input format (exit 1 if singular)
    Invert {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Number of invertible n x n matrices over Res(L)
    Count {
        lattice: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Invertibility by testing bijectivity on L^n
    Check {
        file: PathBuf,
        /// Also run the structural check and compare
        #[arg(long)]
        compare: bool,
    },
    /// Inverse read off the inverse permutation of L^n
    Invert {
        file: PathBuf,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Count invertible matrices by exhaustive enumeration
    Count {
        lattice: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_MATRIX_CAP)]
        cap: usize,
        #[arg(long)]
        compare: bool,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Sample an invertible matrix over Res(L)
    RandomInvertible {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

/// A run either finishes with a verdict or fails on its input.
enum Failure {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Run = Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(cli.command) {
        Ok(report) => report.emit(cli.json),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Run {
    match command {
        Command::Lattice(cmd) => lattice_cmd(cmd),
        Command::Semiring(cmd) => semiring_cmd(cmd),
        Command::Matrix(cmd) => matrix_cmd(cmd),
        Command::Oracle(cmd) => oracle_cmd(cmd),
        Command::Gen(GenCmd::RandomInvertible { lattice, n, seed, out }) => {
            if n == 0 {
                return Err(Failure::Input("--n must be at least 1".into()));
            }
            let l = load_lattice(&lattice)?;
            let f = Arc::new(factorize(&l));
            let m = random_invertible_seeded(&f, n, seed);
            let base = anchor(lattice, Path::new(""), &out)?;
            write_file(&res_matrix_file(&m, &base), &out)
        }
    }
}

fn lattice_cmd(cmd: LatticeCmd) -> Run {
    match cmd {
        LatticeCmd::Validate { source } => {
            let l = load_lattice(&source)?;
            Ok(Report::ok(
                format!("valid lattice: {}", lattice_summary(&l)),
                json!({ "valid": true, "lattice": LatticeFile::from_lattice(&l) }),
            ))
        }
        LatticeCmd::Factor { source } => {
            let l = load_lattice(&source)?;
            let f = factorize(&l);
            let names = factor_names(f.factors());
            let aut = aut_count(&f.grouped())?;
            let text = match names.len() {
                0 => format!("0 factors (trivial lattice); |Aut| = {aut}"),
                1 => format!("1 factor: {} (irreducible); |Aut| = {aut}", names[0]),
                k => format!("{k} factors: {}; |Aut| = {aut}", names.join(" × ")),
            };
            let factors: Vec<Value> = f
                .factors()
                .iter()
                .zip(&names)
                .map(|(g, name)| json!({ "name": name, "lattice": LatticeFile::from_lattice(g) }))
                .collect();
            Ok(Report::ok(text, json!({ "factors": factors, "aut": aut.to_string() })))
        }
        LatticeCmd::Aut { source } => {
            let l = load_lattice(&source)?;
            let auts = automorphisms(&l);
            let formula = aut_count(&factorize(&l).grouped())?;
            let tables: Vec<Vec<&str>> = auts.iter().map(|p| p.iter().map(|&x| l.label(x)).collect()).collect();
            let mut text = format!("|Aut| = {} (formula {formula})", auts.len());
            for t in &tables {
                text.push_str(&format!("\n[{}]", t.join(",")));
            }
            Ok(Report::ok(
                text,
                json!({ "count": auts.len(), "formula": formula.to_string(), "automorphisms": tables }),
            ))
        }
    }
}

fn semiring_cmd(cmd: SemiringCmd) -> Run {
    match cmd {
        SemiringCmd::Validate { source } => match load_semiring(&source) {
            Ok(r) => Ok(Report::ok(
                format!(
                    "valid idempotent semiring: {} elements, zero {}, one {}",
                    r.len(),
                    r.label(r.zero()),
                    r.label(r.one())
                ),
                json!({ "valid": true, "semiring": SemiringFile::from_semiring(&r) }),
            )),
            Err(idemat_core::formats::FormatError::Semiring(SemiringError::AxiomViolation { axiom, witness })) => {
                Err(Failure::Input(format!("axiom violated: {axiom}; witness ({})", witness.join(", "))))
            }
            Err(e) => Err(e.into()),
        },
        SemiringCmd::OrderLattice { source } => {
            let r = load_semiring(&source)?;
            let l = natural_order_lattice(&r)?;
            let covers: Vec<String> =
                l.covers().iter().map(|&(a, b)| format!("{} < {}", l.label(a), l.label(b))).collect();
            Ok(Report::ok(
                format!("{}\ncovers: {}", lattice_summary(&l), covers.join(", ")),
                serde_json::to_value(LatticeFile::from_lattice(&l))?,
            ))
        }
        SemiringCmd::Embed { source } => {
            let r = load_semiring(&source)?;
            let e = embed(&r)?;
            let l = e.lattice();
            let mut text = format!("embedding into Res of the natural order ({} elements)", l.len());
            let mut images = serde_json::Map::new();
            for x in 0..r.len() {
                let table = report::map_labels(e.image(x));
                debug_assert_eq!(pullback_element(e.image(x), &r, &e).ok(), Some(x));
                text.push_str(&format!("\n{} -> [{}]", r.label(x), table.join(",")));
                images.insert(r.label(x).to_owned(), json!(table));
            }
            Ok(Report::ok(text, json!({ "lattice": LatticeFile::from_lattice(l), "images": images })))
        }
        SemiringCmd::Generate { lattice, cap } => {
            let l = load_lattice(&lattice)?;
            let g = generate_simple_semiring(&l, &[], cap)?;
            let r = g.to_semiring()?;
            let simple = r.is_simple();
            let mut text = format!(
                "generated {} maps on {}; simple: {}",
                g.len(),
                lattice_summary(&l),
                if simple { "yes" } else { "no" }
            );
            for f in &g.elements {
                text.push_str(&format!("\n[{}]", report::map_labels(f).join(",")));
            }
            Ok(Report::ok(text, json!({ "simple": simple, "semiring": SemiringFile::from_semiring(&r) })))
        }
    }
}

fn matrix_cmd(cmd: MatrixCmd) -> Run {
    match cmd {
        MatrixCmd::Check { file } => {
            let (embedded, f, cert) = match load_matrix(&file)? {
                LoadedMatrix::Res(m) => {
                    let f = Arc::new(factorize(m.lattice()));
                    let cert = check_invertible(&m, &f)?;
                    (m, f, cert)
                }
                LoadedMatrix::Semiring(a) => {
                    let p = semiring_matrix_pipeline(&a)?;
                    (p.embedded, p.factorization, p.certificate)
                }
            };
            Ok(report::certificate(&embedded, &f, cert.as_ref()))
        }
        MatrixCmd::Invert { file, out } => match load_matrix(&file)? {
            LoadedMatrix::Res(m) => {
                let f = Arc::new(factorize(m.lattice()));
                match check_invertible(&m, &f)? {
                    Some(cert) => write_file(&res_matrix_file(&invert(&m, &cert)?, &base_of(&file, &out)?), &out),
                    None => Ok(Report::singular()),
                }
            }
            LoadedMatrix::Semiring(a) => match semiring_matrix_pipeline(&a)?.inverse {
                Some(b) => write_file(&semiring_matrix_file(&b, &base_of(&file, &out)?), &out),
                None => Ok(Report::singular()),
            },
        },
        MatrixCmd::Count { lattice, n } => {
            let l = load_lattice(&lattice)?;
            let count = count_invertible(&factorize(&l), n);
            Ok(Report::ok(count.to_string(), json!({ "n": n, "count": count.to_string() })))
        }
    }
}

fn oracle_cmd(cmd: OracleCmd) -> Run {
    match cmd {
        OracleCmd::Check { file, compare } => {
            let m = as_res(load_matrix(&file)?)?;
            let verdict = oracle_is_invertible(&m)?;
            let mut text = (if verdict { "invertible" } else { "not invertible" }).to_owned();
            if compare {
                let structural = check_invertible(&m, &Arc::new(factorize(m.lattice())))?.is_some();
                if structural != verdict {
                    return Err(Failure::Input(format!("oracle says {verdict}, structural check says {structural}")));
                }
                text.push_str("\nstructural check agrees");
            }
            Ok(Report::verdict(verdict, text, json!({ "invertible": verdict })))
        }
        OracleCmd::Invert { file, compare, out } => {
            let loaded = load_matrix(&file)?;
            let semiring = match &loaded {
                LoadedMatrix::Semiring(a) => Some(a.clone()),
                LoadedMatrix::Res(_) => None,
            };
            let m = as_res(loaded)?;
            let inv = match oracle_inverse(&m) {
                Ok(inv) => inv,
                Err(oracle::OracleError::NotInvertible) => return Ok(Report::singular()),
                Err(e) => return Err(e.into()),
            };
            if compare {
                let f = Arc::new(factorize(m.lattice()));
                let structural = check_invertible(&m, &f)?.map(|c| invert(&m, &c)).transpose()?;
                if structural.as_ref() != Some(&inv) {
                    return Err(Failure::Input("oracle and structural inverses differ".into()));
                }
            }
            let base = base_of(&file, &out)?;
            match semiring {
                None => write_file(&res_matrix_file(&inv, &base), &out),
                Some(a) => {
                    let r = a.semiring();
                    let e = embed(r)?;
                    let entries =
                        inv.entries().iter().map(|g| pullback_element(g, r, &e)).collect::<Result<Vec<_>, _>>()?;
                    write_file(&semiring_matrix_file(&SemiringMatrix::new(r, a.size(), entries)?, &base), &out)
                }
            }
        }
        OracleCmd::Count { lattice, n, cap, compare } => {
            let l = Arc::new(load_lattice(&lattice)?);
            let count = oracle_count_invertible(&l, n, cap)?;
            let mut text = count.to_string();
            if compare {
                let formula = count_invertible(&factorize(&l), n);
                if formula != count.into() {
                    return Err(Failure::Input(format!("oracle count {count}, formula {formula}")));
                }
                text.push_str("\nformula agrees");
            }
            Ok(Report::ok(text, json!({ "n": n, "count": count.to_string() })))
        }
    }
}

fn as_res(loaded: LoadedMatrix) -> Result<ResMatrix, Failure> {
    Ok(match loaded {
        LoadedMatrix::Res(m) => m,
        LoadedMatrix::Semiring(a) => a.to_res_matrix(&embed(a.semiring())?),
    })
}

/// The `base` recorded in a matrix file, reused for its inverse.
fn base_of(file: &Path, out: &Output) -> Result<String, Failure> {
    let text = fs::read_to_string(file)?;
    let base = serde_json::from_str::<MatrixFile>(&text)?.base;
    anchor(base, file.parent().unwrap_or(Path::new("")), out)
}

/// A relative `base` (resolved against `from`) is made absolute when the
/// output file lands in another directory.
fn anchor(base: String, from: &Path, out: &Output) -> Result<String, Failure> {
    let relative = !base.starts_with(idemat_core::formats::BUILTIN_PREFIX) && Path::new(&base).is_relative();
    match &out.output {
        Some(target) if relative && target.parent().unwrap_or(Path::new("")) != from => {
            Ok(fs::canonicalize(from.join(&base))?.display().to_string())
        }
        _ => Ok(base),
    }
}

/// Emits a matrix file to `--output` or stdout. The file format is already
/// JSON, so `--json` changes nothing here.
fn write_file(file: &MatrixFile, out: &Output) -> Run {
    let text = matrix_to_json(file);
    match &out.output {
        Some(path) => {
            fs::write(path, format!("{text}\n"))?;
            Ok(Report::ok(format!("wrote {}", path.display()), json!({ "written": path })))
        }
        None => Ok(Report::raw(text)),
    }
}
