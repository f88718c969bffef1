use clap::{Args, Parser, Subcommand};
use linlog::balance::{balance_report, BalanceVerdict};
use linlog::compile::{program_to_encoded_proof, program_to_proof, CompileError};
use linlog::encode::{encode_sequent, EncodingParams, Target};
use linlog::extract::{extract_program, extract_source_program, ttobot_transform};
use linlog::fairness::fairness_check;
use linlog::formula::Sequent;
use linlog::normalized::NormalizedSequent;
use linlog::parse::{parse_formula, parse_sequent, sequent_lines};
use linlog::product::SimpleProduct;
use linlog::program::{check_strong_solution, run_strong, Program};
use linlog::proof::{check_proof, proofs_from_sexp, Proof};
use linlog::search::{prove, SearchBudget, SearchResult};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const OK: u8 = 0;
const NO: u8 = 1;
const UNDECIDED: u8 = 2;
const USAGE: u8 = 3;
const FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "linlog", version, about = "Linear logic proofs, stack programs and ⊥-counting encodings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Clone)]
struct Opts {
    /// Depth bound for proof search.
    #[arg(long, global = true, default_value_t = 40)]
    budget_depth: usize,
    /// Contractions allowed per `!`-formula on one branch.
    #[arg(long, global = true, default_value_t = 4)]
    budget_contractions: usize,
    /// Subgoal budget for proof search.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    budget_steps: usize,
    /// Disable ⊥-count pruning of candidate splits.
    #[arg(long, global = true)]
    no_balance_pruning: bool,
    /// Encoding target.
    #[arg(long, global = true)]
    target: Option<Target>,
    /// Encoding scale; the modulus is 9N.
    #[arg(long = "N", global = true)]
    n: Option<u32>,
    /// Fresh literal index reserved by the encodings.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Write artifacts here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse sequents and print them back.
    Parse { input: PathBuf },
    /// Search for a cut-free derivation of each sequent.
    Prove { input: PathBuf },
    /// Check every proof in an s-expression file.
    CheckProof { input: PathBuf },
    /// Encode normalized sequents.
    Encode { input: PathBuf },
    /// Run a program on an input product, printing OUT and STACK per vertex.
    RunProgram { program: PathBuf, input: String },
    /// Decide whether a program is a strong solution of each sequent.
    CheckSolution { program: PathBuf, input: PathBuf },
    /// Assemble a derivation from a strong solution.
    ToProof { program: PathBuf, input: PathBuf },
    /// Read a program off a derivation; a ⊥-only derivation needs its source sequent.
    ToProgram { proof: PathBuf, sequent: Option<PathBuf> },
    /// ⊥-counts and the balance congruence.
    Balance { input: PathBuf },
    /// Prove, transform to ⊥-only, extract, check and re-derive.
    Roundtrip { input: PathBuf },
    /// Compare a sequent with its three encodings.
    Fairness { input: PathBuf },
}

/// A failure that ends the job with the given exit code.
struct Fail(u8, String);

type Job = Result<(String, u8), Fail>;

fn usage(e: impl std::fmt::Display) -> Fail {
    Fail(USAGE, e.to_string())
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn sequents(path: &Path) -> Result<Vec<(usize, Sequent)>, Fail> {
    let text = read(path)?;
    sequent_lines(&text)
        .map(|(n, l)| parse_sequent(l).map(|s| (n, s)).map_err(|e| usage(format!("{}:{n}: {e}", path.display()))))
        .collect()
}

fn normalized(path: &Path) -> Result<Vec<(usize, NormalizedSequent)>, Fail> {
    sequents(path)?
        .into_iter()
        .map(|(n, s)| {
            NormalizedSequent::from_sequent(&s)
                .map(|ns| (n, ns))
                .map_err(|e| usage(format!("{}:{n}: {e}", path.display())))
        })
        .collect()
}

fn program(path: &Path) -> Result<Program, Fail> {
    Program::from_sexp(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn proofs(path: &Path) -> Result<Vec<Proof>, Fail> {
    proofs_from_sexp(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

impl Opts {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_depth: self.budget_depth,
            max_contractions_per_bang_formula: self.budget_contractions,
            balance_pruning: !self.no_balance_pruning,
            max_steps: self.budget_steps,
            balance_n: self.n.unwrap_or(9),
        }
    }

    fn params(&self, s: &NormalizedSequent, default: Target) -> Result<EncodingParams, Fail> {
        EncodingParams::resolve(s, self.target.unwrap_or(default), self.n, self.p).map_err(usage)
    }
}

fn verdict_code(r: &SearchResult) -> u8 {
    match r {
        SearchResult::Proved(_) => OK,
        SearchResult::Refuted => NO,
        SearchResult::BudgetExhausted => UNDECIDED,
    }
}

fn run(cmd: &Command, o: &Opts) -> Job {
    let mut out = String::new();
    let mut code = OK;
    match cmd {
        Command::Parse { input } => {
            for (_, s) in sequents(input)? {
                writeln!(out, "{s}").unwrap();
            }
        }
        Command::Prove { input } => {
            let budget = o.budget();
            for (n, s) in sequents(input)? {
                let r = prove(&s, &budget);
                eprintln!("line {n}: {}", r.label());
                code = code.max(verdict_code(&r));
                if let SearchResult::Proved(d) = r {
                    writeln!(out, "{}", d.to_sexp()).unwrap();
                }
            }
        }
        Command::CheckProof { input } => {
            for (i, d) in proofs(input)?.iter().enumerate() {
                match check_proof(d) {
                    Ok(()) => eprintln!("proof {}: ok", i + 1),
                    Err(v) => {
                        eprintln!("proof {}: {v}", i + 1);
                        code = NO;
                    }
                }
            }
        }
        Command::Encode { input } => {
            for (_, s) in normalized(input)? {
                let params = o.params(&s, Target::BotOnly)?;
                writeln!(out, "{}", encode_sequent(&s, &params).map_err(usage)?).unwrap();
            }
        }
        Command::RunProgram { program: path, input } => {
            let p = program(path)?;
            let w = parse_formula(input)
                .map_err(usage)
                .and_then(|f| SimpleProduct::from_formula(&f).map_err(usage))?;
            let t = run_strong(&p, &w);
            for v in 0..t.out.len() {
                let value = t.out[v].as_ref().map_or("undefined".to_string(), |b| linlog::product::bag_to_string(b));
                let stack: Vec<String> = t.stack[v].iter().map(|b| linlog::product::bag_to_string(b)).collect();
                let leaf = if t.leaves.contains(&v) { " leaf" } else { "" };
                writeln!(out, "v{v}{leaf}: OUT = {value}; STACK = [{}]", stack.join(", ")).unwrap();
            }
            if t.leaves.iter().any(|&v| t.out[v].is_none() || !t.stack[v].is_empty()) {
                code = NO;
            }
        }
        Command::CheckSolution { program: path, input } => {
            let p = program(path)?;
            for (n, s) in normalized(input)? {
                let ok = check_strong_solution(&p, &s);
                writeln!(out, "{ok}").unwrap();
                eprintln!("line {n}: {}", if ok { "strong solution" } else { "not a strong solution" });
                if !ok {
                    code = NO;
                }
            }
        }
        Command::ToProof { program: path, input } => {
            let p = program(path)?;
            for (n, s) in normalized(input)? {
                let r = match o.target {
                    Some(_) => program_to_encoded_proof(&p, &s, &o.params(&s, Target::BotOnly)?),
                    None => program_to_proof(&p, &s),
                };
                match r {
                    Ok(d) => writeln!(out, "{}", d.to_sexp()).unwrap(),
                    Err(CompileError::NotAStrongSolution) => {
                        eprintln!("line {n}: not a strong solution");
                        code = code.max(NO);
                    }
                    Err(e) => return Err(Fail(FAILED, format!("line {n}: {e}"))),
                }
            }
        }
        Command::ToProgram { proof, sequent } => {
            let ds = proofs(proof)?;
            let sources = match sequent {
                Some(path) => Some(normalized(path)?),
                None => None,
            };
            for (i, d) in ds.iter().enumerate() {
                let r = match &sources {
                    None => {
                        let s = NormalizedSequent::from_sequent(&d.conclusion).map_err(usage)?;
                        extract_source_program(d, &s)
                    }
                    Some(ss) => {
                        let (_, s) = ss.get(i).ok_or_else(|| usage(format!("no source sequent for proof {}", i + 1)))?;
                        extract_program(d, s, &o.params(s, Target::BotOnly)?)
                    }
                };
                let p = r.map_err(|e| Fail(FAILED, format!("proof {}: {e}", i + 1)))?;
                writeln!(out, "{}", p.to_sexp()).unwrap();
            }
        }
        Command::Balance { input } => {
            let n = o.n.unwrap_or(9);
            for (line, s) in sequents(input)? {
                let r = balance_report(&s, n);
                let show = |xs: &[Option<i64>]| {
                    xs.iter().map(|x| x.map_or("-".to_string(), |v| v.to_string())).collect::<Vec<_>>().join(" ")
                };
                let residue = |x: Option<i64>| x.map_or("-".to_string(), |v| v.to_string());
                writeln!(out, "{s}").unwrap();
                writeln!(out, "  lhs: {}", show(&r.lhs)).unwrap();
                writeln!(out, "  rhs: {}", show(&r.rhs)).unwrap();
                writeln!(
                    out,
                    "  {} ≡ {} (mod {}): {}",
                    residue(r.lhs_sum()),
                    residue(r.rhs_target()),
                    r.modulus,
                    r.verdict
                )
                .unwrap();
                eprintln!("line {line}: {}", r.verdict);
                code = code.max(match r.verdict {
                    BalanceVerdict::Holds => OK,
                    BalanceVerdict::Violated => NO,
                    BalanceVerdict::NotApplicable => UNDECIDED,
                });
            }
        }
        Command::Roundtrip { input } => {
            let budget = o.budget();
            for (n, s) in normalized(input)? {
                let params = o.params(&s, Target::BotOnly)?;
                if params.target != Target::BotOnly {
                    return Err(usage("roundtrip runs through the bot-only encoding"));
                }
                let d = match prove(&s.to_sequent(), &budget) {
                    SearchResult::Proved(d) => d,
                    r => {
                        eprintln!("line {n}: source {}", r.label());
                        code = code.max(verdict_code(&r));
                        continue;
                    }
                };
                let fail = |stage: &str, e: String| Fail(FAILED, format!("line {n}: {stage}: {e}"));
                let e = ttobot_transform(&d, &params).map_err(|e| fail("ttobot_transform", e.to_string()))?;
                let p = extract_program(&e, &s, &params).map_err(|e| fail("extract_program", e.to_string()))?;
                if !check_strong_solution(&p, &s) {
                    return Err(fail("check_strong_solution", p.to_sexp()));
                }
                let back = program_to_proof(&p, &s).map_err(|e| fail("to-proof", e.to_string()))?;
                check_proof(&back).map_err(|e| fail("check-proof", e.to_string()))?;
                eprintln!("line {n}: round trip ok ({} encoded nodes)", e.node_count());
                writeln!(out, "{}", p.to_sexp()).unwrap();
            }
        }
        Command::Fairness { input } => {
            let budget = o.budget();
            for (n, s) in normalized(input)? {
                let params = o.params(&s, Target::BotOnly)?;
                let r = fairness_check(&s, &params, &budget).map_err(usage)?;
                writeln!(out, "{s}").unwrap();
                write!(out, "{r}").unwrap();
                if r.violation() {
                    eprintln!("line {n}: FAIRNESS VIOLATION");
                    code = NO;
                }
            }
        }
    }
    Ok((out, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command, &cli.opts) {
        Ok((text, code)) => {
            let written = match &cli.opts.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    use std::io::Write;
                    match std::io::stdout().write_all(text.as_bytes()) {
                        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
                        _ => Ok(()),
                    }
                }
            };
            match written {
                Ok(()) => ExitCode::from(code),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(USAGE)
                }
            }
        }
        Err(Fail(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
