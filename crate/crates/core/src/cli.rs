//! Command-line front end: `dim`, `basis`, `verify`, `gen`, `bench`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::digraph::{Digraph, Vertex};
use crate::field::{FieldSpec, PrimeField, RationalField};
use crate::generators::{random_digraph, trapezohedron, RandomSpec};
use crate::io::{
    emit_edge_list, export_dot, parse_edge_list_bytes, read_basis, write_basis, BasisDocument,
};
use crate::omega3::{
    analyze_pair, materialize_basis, omega3_basis_with, omega3_pair_dims, BasisOptions, Omega3Error,
};
use crate::oracle::{Oracle, OracleError, DEFAULT_BUDGET};
use crate::verify::{verify_document, verify_graph, VerifyError, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "omega3",
    version,
    about = "Boundary-invariant 3-paths of digraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print dim Omega0, Omega1, Omega3 and the nonzero pairs.
    Dim(GraphArgs),
    /// Write the structural basis as a JSON document.
    Basis {
        #[command(flatten)]
        graph: GraphArgs,
        /// Output path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "gf:32749")]
        field: FieldSpec,
    },
    /// Check the structural results (or a basis document) against the oracle.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Replay this basis document instead of recomputing.
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(long, default_value = "gf:32749")]
        field: FieldSpec,
        /// Maximum number of allowed paths the oracle may enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Emit a fixture digraph as an edge list.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output path (stdout when omitted).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
        /// Emit DOT instead of an edge list.
        #[arg(long, global = true)]
        dot: bool,
    },
    /// Time the structural basis and the oracle on random digraphs; CSV out.
    Bench {
        /// Vertex counts.
        #[arg(long, value_delimiter = ',', default_value = "20,40,80")]
        sizes: Vec<usize>,
        #[arg(short, long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Oracle budget in allowed paths; larger graphs report `skipped`.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    Trapezohedron {
        #[arg(short)]
        m: usize,
    },
    Random {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge-list file, or `-` for stdin.
    #[arg(default_value = "-")]
    pub input: String,
    /// Restrict to the ordered pair `a,b` (repeatable).
    #[arg(long = "pairs", value_name = "A,B")]
    pub pairs: Vec<String>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Refuse inputs with more vertices than this.
    #[arg(long)]
    pub max_vertices: Option<usize>,
}

struct Failed(i32, String);

impl From<Omega3Error> for Failed {
    fn from(e: Omega3Error) -> Self {
        let code = match e {
            Omega3Error::TooLarge { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failed(code, e.to_string())
    }
}

impl From<VerifyError> for Failed {
    fn from(e: VerifyError) -> Self {
        let code = match e {
            VerifyError::Oracle(OracleError::BudgetExceeded(_)) => EXIT_BUDGET,
            VerifyError::Structural(ref s) if matches!(s, Omega3Error::TooLarge { .. }) => {
                EXIT_BUDGET
            }
            _ => EXIT_INPUT,
        };
        Failed(code, e.to_string())
    }
}

fn input_error(e: impl std::fmt::Display) -> Failed {
    Failed(EXIT_INPUT, e.to_string())
}

/// Streams used by a run.
pub struct Streams<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, io: Streams<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                io.stdout.write_all(text.as_bytes())
            } else {
                io.stderr.write_all(text.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_INPUT };
        }
    };
    match execute(cli.command, io.stdin, io.stdout) {
        Ok(code) => code,
        Err(Failed(code, msg)) => {
            let _ = writeln!(io.stderr, "error: {msg}");
            code
        }
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<Digraph, Failed> {
    let bytes = if path == "-" {
        let mut buf = Vec::new();
        stdin.read_to_end(&mut buf).map_err(input_error)?;
        buf
    } else {
        fs::read(path).map_err(|e| Failed(EXIT_INPUT, format!("{path}: {e}")))?
    };
    parse_edge_list_bytes(&bytes).map_err(input_error)
}

fn parse_pairs(g: &Digraph, specs: &[String]) -> Result<Option<Vec<(Vertex, Vertex)>>, Failed> {
    if specs.is_empty() {
        return Ok(None);
    }
    specs
        .iter()
        .map(|s| {
            let (a, b) = s
                .split_once(',')
                .ok_or_else(|| Failed(EXIT_INPUT, format!("--pairs expects `a,b`, got `{s}`")))?;
            Ok((
                g.require(a.trim()).map_err(input_error)?,
                g.require(b.trim()).map_err(input_error)?,
            ))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn options(g: &Digraph, args: &GraphArgs) -> Result<BasisOptions, Failed> {
    Ok(BasisOptions {
        jobs: args.jobs,
        max_vertices: args.max_vertices,
        pairs: parse_pairs(g, &args.pairs)?,
    })
}

fn emit(output: Option<&PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), Failed> {
    match output {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Failed(EXIT_INPUT, format!("{}: {e}", path.display()))),
        None => stdout.write_all(bytes).map_err(input_error),
    }
}

fn execute(command: Command, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<i32, Failed> {
    match command {
        Command::Dim(args) => {
            let g = read_input(&args.input, stdin)?;
            let opts = options(&g, &args)?;
            if let Some(max) = opts.max_vertices {
                if g.vertex_count() > max {
                    return Err(Omega3Error::TooLarge {
                        n: g.vertex_count(),
                        max,
                    }
                    .into());
                }
            }
            let dims = omega3_pair_dims(&g, &opts)?;
            let mut out = format!(
                "dim Omega0 = {}\ndim Omega1 = {}\ndim Omega3 = {}\n",
                g.vertex_count(),
                g.arrow_count(),
                dims.values().sum::<usize>()
            );
            if !dims.is_empty() {
                out.push_str("a\tb\tdim\tB0\tB1\tB2\n");
                for &(a, b) in dims.keys() {
                    let pa = analyze_pair(&g, a, b).expect("validated pair");
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\n",
                        g.label(a),
                        g.label(b),
                        dims[&(a, b)],
                        pa.cycle_rank(),
                        pa.terminal_edges.len(),
                        pa.bridge_count()
                    ));
                }
            }
            emit(None, out.as_bytes(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Basis {
            graph,
            output,
            field,
        } => {
            let g = read_input(&graph.input, stdin)?;
            let basis = omega3_basis_with(&g, &options(&g, &graph)?)?;
            let doc = BasisDocument::from_basis(&g, &basis, &field.to_string());
            emit(output.as_ref(), &write_basis(&doc), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            graph,
            basis,
            field,
            budget,
        } => {
            let g = read_input(&graph.input, stdin)?;
            let opts = options(&g, &graph)?;
            let doc = match &basis {
                Some(path) => {
                    let bytes = fs::read(path)
                        .map_err(|e| Failed(EXIT_INPUT, format!("{}: {e}", path.display())))?;
                    Some(read_basis(&bytes).map_err(input_error)?)
                }
                None => None,
            };
            let check = |report: Result<VerifyReport, VerifyError>| report.map_err(Failed::from);
            let report = match (field, &doc) {
                (FieldSpec::Prime(f), Some(doc)) => check(verify_document(
                    &g,
                    &Oracle::new(f).with_budget(budget),
                    doc,
                ))?,
                (FieldSpec::Prime(f), None) => {
                    check(verify_graph(&g, &Oracle::new(f).with_budget(budget), &opts))?
                }
                (FieldSpec::Rational, Some(doc)) => check(verify_document(
                    &g,
                    &Oracle::new(RationalField).with_budget(budget),
                    doc,
                ))?,
                (FieldSpec::Rational, None) => check(verify_graph(
                    &g,
                    &Oracle::new(RationalField).with_budget(budget),
                    &opts,
                ))?,
            };
            emit(None, report.render(&g).as_bytes(), stdout)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
        Command::Gen { kind, output, dot } => {
            let g = match kind {
                GenKind::Trapezohedron { m } => trapezohedron(m).map_err(input_error)?,
                GenKind::Random { n, p, seed } => {
                    random_digraph(RandomSpec::new(n, p, seed)).map_err(input_error)?
                }
            };
            let text = if dot {
                export_dot(&g)
            } else {
                emit_edge_list(&g)
            };
            emit(output.as_ref(), text.as_bytes(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Bench {
            sizes,
            p,
            seed,
            budget,
            jobs,
        } => {
            let mut out = String::from("n,p,structural_ms,oracle_ms,dim\n");
            let oracle = Oracle::new(PrimeField::default()).with_budget(budget);
            for n in sizes {
                let g = random_digraph(RandomSpec::new(n, p, seed)).map_err(input_error)?;
                let start = Instant::now();
                let stats = materialize_basis(&g, jobs)?;
                let structural = start.elapsed().as_secs_f64() * 1e3;
                let start = Instant::now();
                let oracle_ms = match oracle.omega_dim(&g, 3) {
                    Ok(d) if d == stats.dim => {
                        format!("{:.3}", start.elapsed().as_secs_f64() * 1e3)
                    }
                    Ok(d) => {
                        return Err(Failed(
                            EXIT_VERIFY,
                            format!("n={n}: structural dim {} but oracle dim {d}", stats.dim),
                        ))
                    }
                    Err(OracleError::BudgetExceeded(_)) => "skipped".to_owned(),
                    Err(e) => return Err(input_error(e)),
                };
                out.push_str(&format!(
                    "{n},{p},{structural:.3},{oracle_ms},{}\n",
                    stats.dim
                ));
                emit(None, out.as_bytes(), stdout)?;
                out.clear();
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> (i32, String, String) {
        let mut stdin = input.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("omega3").chain(args.iter().copied()),
            Streams {
                stdin: &mut stdin,
                stdout: &mut out,
                stderr: &mut err,
            },
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn dim_command() {
        let (code, out, _) = call(&["dim", "-"], &emit_edge_list(&trapezohedron(2).unwrap()));
        assert_eq!(code, 0);
        assert!(out.contains("dim Omega3 = 1\n"));
        assert!(out.contains("dim Omega0 = 6\n"));
        assert!(out.contains("a\tb\t1\t1\t0\t0\n"));
        let (_, out, _) = call(&["dim"], "a b\nb a\n");
        assert!(out.contains("dim Omega3 = 2\n"));
        let (_, out, _) = call(&["dim"], "");
        assert!(out.contains("dim Omega3 = 0\n"));
        let (code, _, err) = call(&["dim"], "a a\n");
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("line 1"));
        let (code, _, _) = call(&["dim", "--max-vertices", "2"], "a b\nb c\n");
        assert_eq!(code, EXIT_BUDGET);
        let (code, out, _) = call(&["dim", "--pairs", "a,b"], "a b\nb a\n");
        assert_eq!(code, 0);
        assert!(out.contains("dim Omega3 = 1\n"));
        let (code, _, _) = call(&["dim", "--pairs", "a,q"], "a b\n");
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn basis_command() {
        let (code, out, _) = call(&["basis"], &emit_edge_list(&trapezohedron(3).unwrap()));
        assert_eq!(code, 0);
        let doc = read_basis(out.as_bytes()).unwrap();
        assert_eq!(doc.pairs.len(), 1);
        assert_eq!(doc.pairs[0].generators[0].kind, "B0");
        assert_eq!(doc.pairs[0].generators[0].terms.len(), 6);
        let (_, out, _) = call(
            &["basis", "--field", "rational"],
            "a i\ni j\nj b\ni b\na j\n",
        );
        let doc = read_basis(out.as_bytes()).unwrap();
        assert_eq!(doc.field, "rational");
        let kinds: Vec<_> = doc
            .pairs
            .iter()
            .flat_map(|p| &p.generators)
            .map(|g| g.kind.as_str())
            .collect();
        assert_eq!(kinds, vec!["B1"]);
        let (code, _, _) = call(&["basis", "--field", "gf:4"], "a b\n");
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn verify_command() {
        let t3 = emit_edge_list(&trapezohedron(3).unwrap());
        let (code, out, _) = call(&["verify"], &t3);
        assert_eq!(code, 0, "{out}");
        assert!(out.starts_with("verify: PASS"));
        let (code, _, _) = call(&["verify", "--field", "rational"], &t3);
        assert_eq!(code, 0);
        let (code, _, err) = call(&["verify", "--budget", "3"], &t3);
        assert_eq!(code, EXIT_BUDGET);
        assert!(err.contains("budget"));
    }

    #[test]
    fn gen_command() {
        let (code, out, _) = call(&["gen", "trapezohedron", "-m", "2"], "");
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 8);
        let (_, out, _) = call(&["gen", "random", "-n", "5", "-p", "0"], "");
        assert_eq!(out, "0\n1\n2\n3\n4\n");
        let a = call(
            &["gen", "random", "-n", "9", "-p", "0.3", "--seed", "7"],
            "",
        );
        let b = call(
            &["gen", "random", "-n", "9", "-p", "0.3", "--seed", "7"],
            "",
        );
        assert_eq!(a, b);
        let (_, out, _) = call(&["gen", "trapezohedron", "-m", "2", "--dot"], "");
        assert!(out.starts_with("digraph {"));
        let (code, _, _) = call(&["gen", "trapezohedron", "-m", "1"], "");
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn bench_command() {
        let (code, out, _) = call(
            &["bench", "--sizes", "6,10", "-p", "0.3", "--jobs", "1"],
            "",
        );
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines[0], "n,p,structural_ms,oracle_ms,dim");
        assert_eq!(lines.len(), 3);
        let (_, out, _) = call(
            &["bench", "--sizes", "12", "-p", "0.5", "--budget", "10"],
            "",
        );
        assert_eq!(
            out.lines().nth(1).unwrap().split(',').nth(3),
            Some("skipped")
        );
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&[], "").0, EXIT_INPUT);
        assert_eq!(call(&["--help"], "").0, EXIT_OK);
        assert_eq!(call(&["frobnicate"], "").0, EXIT_INPUT);
    }
}
