//! The `finmorita` command line. Every command writes a line-oriented report
//! or a file in the text formats of [`crate::format`].
//!
//! Exit status is 0 when every check passes, 1 when one fails and 2 when the
//! input cannot be read or parsed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::conjugation::{check_conjugation, check_decompositions, check_laws, ConjugateCategory, Factorization};
use crate::diagrams::Diagram;
use crate::fincat::{FinCat, MorId};
use crate::format::{self, ParseError};
use crate::morita::Context;
use crate::pairs::{self, subset_lattice};

#[derive(Debug, Parser)]
#[command(name = "finmorita", version, about = "Conjugate pairs of finite categories and their Morita equivalence")]
struct Cli {
    /// Write the output to this file instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a category, a factorization, or (with --pair) a diagram.
    Validate {
        file: PathBuf,
        /// Factorization whose A or B the diagram lives over.
        #[arg(long)]
        pair: Option<PathBuf>,
    },
    /// Check that a factorization admits conjugation.
    CheckConjugation { fact: PathBuf },
    /// Write the conjugate category B with the canonical triple of each morphism.
    BuildB { fact: PathBuf },
    /// Print the canonical three-fold factorization of a B-morphism.
    Factorize {
        fact: PathBuf,
        #[arg(long)]
        morphism: MorId,
    },
    /// Print the regular bimodule and check its decompositions.
    Bimodule { fact: PathBuf },
    /// Apply L to a diagram over B.
    ApplyL { fact: PathBuf, diagram: PathBuf },
    /// Apply R to a diagram over A.
    ApplyR { fact: PathBuf, diagram: PathBuf },
    /// Check the unit on free functors for block triangularity.
    UnitCheck {
        fact: PathBuf,
        /// Multiplicity of the free functors; every object is tried.
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Run seeded random trials of the equivalence.
    CheckEquivalence {
        fact: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },
    /// Write one of the built-in factorizations.
    GenExample {
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Hasse relations for `poset`, such as "a<b, a<c".
        #[arg(long, default_value = "a<b, a<c")]
        poset: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Gamma,
    Idem,
    Poset,
    Sigma,
    Induction,
}

/// Outcome of a command that ran to completion.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn file(text: String) -> Output {
        Output { text, passed: true }
    }
}

/// Input errors, reported with exit status 2.
#[derive(Debug)]
struct InputError(String);

impl InputError {
    fn parse(path: &Path, e: ParseError) -> InputError {
        InputError(format!("{}: {e}", path.display()))
    }
}

type Result<T> = std::result::Result<T, InputError>;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn read_factorization(path: &Path) -> Result<Factorization> {
    format::parse_factorization(&read(path)?).map_err(|e| InputError::parse(path, e))
}

fn build(path: &Path) -> Result<std::result::Result<ConjugateCategory, String>> {
    let f = read_factorization(path)?;
    Ok(ConjugateCategory::build(&f).map_err(|e| format!("FAIL build {e}\n{}", check_conjugation(&f))))
}

/// Builds the context, or returns the failing conjugation report.
fn context(path: &Path) -> Result<std::result::Result<Context, Output>> {
    Ok(build(path)?.map(Context::new).map_err(|text| Output { text, passed: false }))
}

/// `labels[m]` for the morphisms of `A`: their ids in `U`.
fn a_labels(ctx: &Context) -> Vec<MorId> {
    ctx.conjugate().a_to_u().to_vec()
}

fn b_labels(ctx: &Context) -> Vec<MorId> {
    ctx.b().morphisms().collect()
}

fn read_diagram(path: &Path, base: &Arc<FinCat>, labels: &[MorId]) -> Result<(String, Diagram)> {
    let raw = format::parse_diagram(&read(path)?).map_err(|e| InputError::parse(path, e))?;
    if raw.over != base.name() {
        return Err(InputError(format!(
            "{}: line {}: diagram lives over '{}', expected '{}'",
            path.display(),
            raw.line,
            raw.over,
            base.name()
        )));
    }
    let name = raw.name.clone();
    let d = raw.into_diagram(base, labels).map_err(|e| InputError::parse(path, e))?;
    Ok((name, d))
}

fn dims(d: &Diagram) -> String {
    let parts: Vec<String> = d.dims().iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn validate(file: &Path, pair: Option<&Path>) -> Result<Output> {
    let text = read(file)?;
    let mut out = String::new();
    let passed = match pair {
        Some(pair) => {
            let ctx = match context(pair)? {
                Ok(ctx) => ctx,
                Err(failed) => return Ok(failed),
            };
            let raw = format::parse_diagram(&text).map_err(|e| InputError::parse(file, e))?;
            let (base, labels) = if raw.over == ctx.b().name() {
                (ctx.b().clone(), b_labels(&ctx))
            } else {
                (ctx.a().clone(), a_labels(&ctx))
            };
            let (name, d) = read_diagram(file, &base, &labels)?;
            let violations = d.validate();
            for v in &violations {
                writeln!(out, "FAIL diagram {name} {v}").unwrap();
            }
            if violations.is_empty() {
                writeln!(out, "PASS diagram {name} over={} dims={}", base.name(), dims(&d)).unwrap();
            }
            violations.is_empty()
        }
        None if text.lines().any(|l| l.trim_start().starts_with("subcat")) => {
            let f = format::parse_factorization(&text).map_err(|e| InputError::parse(file, e))?;
            let report = check_conjugation(&f);
            let structural = ["category", "subcategory-I", "subcategory-A", "indexing"];
            let lines: Vec<_> = report.lines.iter().filter(|l| structural.contains(&l.check)).collect();
            for line in &lines {
                writeln!(out, "{line}").unwrap();
            }
            lines.len() == structural.len() && lines.iter().all(|l| l.failure.is_none())
        }
        None => {
            let c = format::parse_category(&text).map_err(|e| InputError::parse(file, e))?;
            let violations = c.validate();
            for v in &violations {
                writeln!(out, "FAIL category {v}").unwrap();
            }
            if violations.is_empty() {
                writeln!(out, "PASS category {} objects={} morphisms={}", c.name(), c.object_count(), c.morphism_count())
                    .unwrap();
            }
            violations.is_empty()
        }
    };
    Ok(Output { text: out, passed })
}

fn bimodule(ctx: &Context) -> Output {
    let cc = ctx.conjugate();
    let m = ctx.bimodule();
    let mut out = String::new();
    for a in ctx.b().objects() {
        for b in ctx.b().objects() {
            let ids: Vec<String> = m.set(a, b).iter().map(MorId::to_string).collect();
            writeln!(out, "U({a},{b}) size={} regular=[{}]", m.cardinality(a, b), ids.join(" ")).unwrap();
        }
    }
    let laws = check_laws(cc);
    let decompositions = check_decompositions(cc);
    write!(out, "{laws}{decompositions}").unwrap();
    Output { text: out, passed: laws.holds() && decompositions.holds() }
}

fn unit_check(ctx: &Context, dim: usize) -> Output {
    let mut out = String::new();
    let mut passed = true;
    for b in ctx.b().objects() {
        let t = ctx.unit_triangularity(b, dim);
        for block in &t.objects {
            let n = block.skeleton.len();
            let what = format!("unit-triangularity b={b} a={} dim={dim} summands={n}", block.object);
            let failure = if !block.diagonal_is_identity() {
                Some("diagonal block is not the identity")
            } else if !block.is_block_lower_triangular() {
                Some("nonzero block above the diagonal")
            } else if !block.holds() {
                Some("not an isomorphism")
            } else {
                None
            };
            match failure {
                None => writeln!(out, "PASS {what}").unwrap(),
                Some(f) => {
                    passed = false;
                    writeln!(out, "FAIL {what} {f}").unwrap()
                }
            }
        }
    }
    Output { text: out, passed }
}

fn generate(kind: Kind, n: usize, poset: &str) -> Result<Factorization> {
    let bad = |e: pairs::GenError| InputError(e.to_string());
    Ok(match kind {
        Kind::Gamma => pairs::gen_gamma(n).map_err(bad)?,
        Kind::Sigma => pairs::gen_sigma(n).map_err(bad)?,
        Kind::Idem => pairs::gen_idem(),
        Kind::Poset => pairs::gen_poset(poset).map_err(bad)?,
        Kind::Induction => pairs::gen_induction(subset_lattice(n)),
    })
}

fn run(command: Command) -> Result<Output> {
    Ok(match command {
        Command::Validate { file, pair } => validate(&file, pair.as_deref())?,
        Command::CheckConjugation { fact } => {
            let report = check_conjugation(&read_factorization(&fact)?);
            Output { text: report.to_string(), passed: report.holds() }
        }
        Command::BuildB { fact } => match build(&fact)? {
            Ok(cc) => Output::file(format::write_conjugate(&cc)),
            Err(text) => Output { text, passed: false },
        },
        Command::Factorize { fact, morphism } => match build(&fact)? {
            Ok(cc) => {
                if morphism >= cc.b().morphism_count() {
                    return Err(InputError(format!("{} has no morphism {morphism}", cc.b().name())));
                }
                let t = cc.threefold_factorize(morphism);
                let regular = if cc.is_regular(morphism) { "regular" } else { "singular" };
                Output::file(format!(
                    "morphism {morphism} {} -> {} = img {} . mid {} . cok {}* {regular}\n",
                    t.src, t.dst, t.img, t.mid, t.cok
                ))
            }
            Err(text) => Output { text, passed: false },
        },
        Command::Bimodule { fact } => match context(&fact)? {
            Ok(ctx) => bimodule(&ctx),
            Err(failed) => failed,
        },
        Command::ApplyL { fact, diagram } => match context(&fact)? {
            Ok(ctx) => {
                let (name, f) = read_diagram(&diagram, ctx.b(), &b_labels(&ctx))?;
                let lf = ctx.apply_l(&f).expect("base checked");
                Output::file(format::write_diagram(&lf, &format!("L{name}"), &a_labels(&ctx)))
            }
            Err(failed) => failed,
        },
        Command::ApplyR { fact, diagram } => match context(&fact)? {
            Ok(ctx) => {
                let (name, g) = read_diagram(&diagram, ctx.a(), &a_labels(&ctx))?;
                let rg = ctx.apply_r(&g).expect("base checked");
                Output::file(format::write_diagram(&rg, &format!("R{name}"), &b_labels(&ctx)))
            }
            Err(failed) => failed,
        },
        Command::UnitCheck { fact, dim } => match context(&fact)? {
            Ok(ctx) => unit_check(&ctx, dim),
            Err(failed) => failed,
        },
        Command::CheckEquivalence { fact, trials, seed, max_dim } => match context(&fact)? {
            Ok(ctx) => {
                let report = ctx.check_equivalence(trials, seed, max_dim);
                Output { text: report.to_string(), passed: report.holds() }
            }
            Err(failed) => failed,
        },
        Command::GenExample { kind, n, poset } => Output::file(format::write_factorization(&generate(kind, n, &poset)?)),
    })
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let output = match run(cli.command) {
        Ok(output) => output,
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            return 2;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &output.text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{}", output.text);
            Ok(())
        }
    };
    if let Err(message) = written {
        eprintln!("error: {message}");
        return 2;
    }
    if output.passed {
        0
    } else {
        1
    }
}
