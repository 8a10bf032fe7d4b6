use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use hermc::certificate::CertificateFile;
use hermc::corpus::{corpus_formula, gen_structure, FAMILY_NAMES, FORMULA_NAMES, RNG_NAME};
use hermc::hereditary::{her_bruteforce_with, her_check_with, MAX_BRUTE_ENV};
use hermc::reductions::{parse_dimacs, reduce_to_forbtd, reduce_to_symcycle};
use hermc::syntax::{parse_formula_file, parse_signature, print_sentence, print_structure};
use hermc::{
    classify_prefix, every_cycle_has_symmetric_edge, eval_sentence, parse_structure,
    to_prenex, HerOptions, PrenexSentence, QuantifierPrefix, Signature, Structure,
};

/// Exit status for a negative answer.
const NO: u8 = 1;
/// Usage, parse and I/O errors.
const USAGE: u8 = 2;
/// The instance is larger than the exhaustive-search cap.
const SCALE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hermc", version, about = "Hereditary first-order model checking")]
struct Cli {
    /// Cap on worker threads (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Input {
    /// Structure file
    #[arg(short, long)]
    structure: PathBuf,
    /// Formula file (an optional `sig` header line, then one sentence)
    #[arg(short, long)]
    formula: PathBuf,
    /// Signature for a formula file without header, e.g. "E/2, U/1".
    /// Defaults to the structure's signature.
    #[arg(long)]
    sig: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Does the structure satisfy the sentence?
    Check(Input),
    /// Does every non-empty induced substructure satisfy the sentence?
    Her {
        #[command(flatten)]
        input: Input,
        /// Write the certificate (JSON) here
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Run exhaustive search even above the size cap
        #[arg(long)]
        force: bool,
    },
    /// Re-verify a certificate produced by `her`
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Classify a quantifier prefix such as "EEA" or "∀∃∀"
    Classify {
        prefix: String,
        /// Signature the prefix is used over (default E/2)
        #[arg(long)]
        sig: Option<String>,
    },
    /// Reduce a 3-CNF in DIMACS format to a structure
    Reduce {
        #[arg(long, value_enum)]
        kind: ReduceKind,
        #[arg(long)]
        cnf: PathBuf,
        /// Output file (default: stdout)
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Generate a member of a structure family
    Gen {
        family: String,
        n: usize,
        /// Required by random families
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Print a corpus sentence as a formula file
    Formula {
        name: String,
        /// Parameter of parametrized sentences (k_degenerate, andor)
        #[arg(long)]
        param: Option<usize>,
        /// Print the negation instead
        #[arg(long)]
        negate: bool,
    },
    /// Exponential oracles, for cross-checking
    Oracle {
        #[arg(long, value_enum)]
        kind: OracleKind,
        #[arg(short, long)]
        structure: PathBuf,
        /// Formula file, needed by `--kind her`
        #[arg(short, long)]
        formula: Option<PathBuf>,
        #[arg(long)]
        sig: Option<String>,
        #[arg(long)]
        force: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReduceKind {
    Forbtd,
    Symcycle,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OracleKind {
    /// Check all substructures
    Her,
    /// Does every directed cycle contain a symmetric pair?
    Symcycle,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let scale = e
                .chain()
                .any(|c| matches!(c.downcast_ref(), Some(hermc::Error::ScaleRefused { .. })));
            ExitCode::from(if scale { SCALE } else { USAGE })
        }
    }
}

fn answer(yes: bool) -> u8 {
    if yes {
        0
    } else {
        NO
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_structure(path: &Path) -> Result<Structure> {
    parse_structure(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Reads a formula file and prenexes it. The sentence is lifted to the
/// structure's signature so that sub-signature formulas apply.
fn load_sentence(path: &Path, sig: Option<&str>, structure: &Structure) -> Result<PrenexSentence> {
    let fallback = match sig {
        Some(text) => parse_signature(text).context("parsing --sig")?,
        None => structure.signature().clone(),
    };
    let (sig, f) = parse_formula_file(&read(path)?, Some(&fallback))
        .with_context(|| format!("parsing {}", path.display()))?;
    let p = to_prenex(&f, &sig)?;
    Ok(p.with_signature(structure.signature().clone())?)
}

fn load_input(input: &Input) -> Result<(Structure, PrenexSentence)> {
    let s = load_structure(&input.structure)?;
    let p = load_sentence(&input.formula, input.sig.as_deref(), &s)?;
    Ok((s, p))
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Check(input) => {
            let (s, p) = load_input(&input)?;
            let holds = eval_sentence(&s, &p)?;
            println!("{holds}");
            Ok(answer(holds))
        }
        Command::Her { input, cert, force } => {
            let (s, p) = load_input(&input)?;
            let options = HerOptions {
                force,
                ..HerOptions::default()
            };
            let verdict = her_check_with(&s, &p, &options)?;
            if let Some(w) = &verdict.stats.warning {
                eprintln!("warning: {w}");
            }
            println!("hereditary: {}", if verdict.hereditary { "yes" } else { "no" });
            println!("method: {}", verdict.method);
            println!("certificate: {}", describe(&verdict.certificate));
            if let Some(path) = cert {
                let file = CertificateFile::new(verdict.certificate.clone(), &s, &p);
                fs::write(&path, file.to_json() + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("certificate file: {}", path.display());
            }
            Ok(answer(verdict.hereditary))
        }
        Command::Verify { input, cert } => {
            let (s, p) = load_input(&input)?;
            let file = CertificateFile::from_json(&read(&cert)?)
                .with_context(|| format!("parsing {}", cert.display()))?;
            let ok = match file.verify(&s, &p) {
                Ok(ok) => ok,
                Err(hermc::Error::Certificate(m)) => {
                    println!("rejected: {m}");
                    return Ok(NO);
                }
                Err(e) => return Err(e.into()),
            };
            println!(
                "{} certificate {}",
                file.certificate.kind(),
                if ok { "valid" } else { "invalid" }
            );
            Ok(answer(ok))
        }
        Command::Classify { prefix, sig } => {
            let q: QuantifierPrefix = prefix.parse()?;
            if q.is_empty() {
                bail!("empty quantifier prefix");
            }
            let sig = match sig {
                Some(text) => parse_signature(&text)?,
                None => Signature::digraph(),
            };
            let class = classify_prefix(&q, &sig);
            println!("{class}");
            println!("{q}: {}", class.explanation());
            Ok(0)
        }
        Command::Reduce { kind, cnf, o } => {
            let (instance, stats) =
                parse_dimacs(&read(&cnf)?).with_context(|| format!("parsing {}", cnf.display()))?;
            if stats.padded_clauses > 0 {
                eprintln!(
                    "note: padded {} short clause(s) to three literals",
                    stats.padded_clauses
                );
            }
            let (s, name) = match kind {
                ReduceKind::Forbtd => (reduce_to_forbtd(&instance)?, "forbtd"),
                ReduceKind::Symcycle => (reduce_to_symcycle(&instance)?, "symcycle"),
            };
            let comments = vec![format!(
                "{name} reduction of {} ({} variables, {} clauses)",
                cnf.display(),
                instance.vars(),
                instance.clauses().len()
            )];
            write_or_print(o.as_deref(), &print_structure(&s, &comments))?;
            Ok(0)
        }
        Command::Gen { family, n, seed, o } => {
            if !FAMILY_NAMES.contains(&family.as_str()) {
                bail!("unknown family `{family}`; known: {}", FAMILY_NAMES.join(", "));
            }
            let s = gen_structure(&family, n, seed)?;
            let mut comments = vec![format!("{family} n={n}")];
            if let Some(seed) = seed {
                comments.push(format!("rng {RNG_NAME} seed {seed}"));
            }
            write_or_print(o.as_deref(), &print_structure(&s, &comments))?;
            Ok(0)
        }
        Command::Formula {
            name,
            param,
            negate,
        } => {
            if !FORMULA_NAMES.contains(&name.as_str()) {
                bail!("unknown formula `{name}`; known: {}", FORMULA_NAMES.join(", "));
            }
            let mut p = corpus_formula(&name, param)?;
            if negate {
                p = p.negate();
            }
            println!("sig {}", p.signature());
            println!("{}", print_sentence(&p));
            Ok(0)
        }
        Command::Oracle {
            kind,
            structure,
            formula,
            sig,
            force,
        } => {
            let s = load_structure(&structure)?;
            let limit = HerOptions::default().max_brute;
            if s.size() > limit && !force {
                return Err(hermc::Error::ScaleRefused {
                    size: s.size(),
                    limit,
                })
                .with_context(|| format!("set {MAX_BRUTE_ENV} or pass --force"));
            }
            match kind {
                OracleKind::Her => {
                    let Some(formula) = formula else {
                        bail!("--kind her needs --formula");
                    };
                    let p = load_sentence(&formula, sig.as_deref(), &s)?;
                    let verdict = her_bruteforce_with(&s, &p, None)?;
                    println!("hereditary: {}", if verdict.hereditary { "yes" } else { "no" });
                    println!("certificate: {}", describe(&verdict.certificate));
                    Ok(answer(verdict.hereditary))
                }
                OracleKind::Symcycle => {
                    let ok = every_cycle_has_symmetric_edge(&s)?;
                    println!("every cycle has a symmetric pair: {}", if ok { "yes" } else { "no" });
                    Ok(answer(ok))
                }
            }
        }
    }
}

fn describe(c: &hermc::Certificate) -> String {
    match c {
        hermc::Certificate::Counterexample { subset } => {
            let items: Vec<String> = subset.iter().map(|e| e.to_string()).collect();
            format!("counterexample {{{}}}", items.join(","))
        }
        hermc::Certificate::Order { k, orders } => {
            format!("order (k={k}, {} parameter tuple(s))", orders.len())
        }
        hermc::Certificate::Exhaustive { bound } => {
            format!("exhaustive (all substructures with at most {bound} elements)")
        }
    }
}
