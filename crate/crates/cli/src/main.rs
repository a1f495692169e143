use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cyclarith::annotation::{annotate_tree, Annotation, Mode, System};
use cyclarith::builders::{corpus, induction_schema_proof, prove_ground_atom};
use cyclarith::calculus::{parse_proof, render_proof, ProofTree};
use cyclarith::checker::{check_progress_on_unfolding, validate, CyclicProof};
use cyclarith::semantics::{eval_formula, Assignment};
use cyclarith::sexpr::parse_many;
use cyclarith::syntax::{formula_from_sexp, parse_formula, Formula, Var};
use cyclarith::transform::{graph_of, ravel, unravel, RegularProofGraph};
use cyclarith::uncycle::{check_certificate_bounded, extract_all};

#[derive(Parser, Debug)]
#[command(name = "cyclarith", version, about = "Checker and transformer for cyclic proofs in arithmetic")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Config {
    /// Proof system.
    #[arg(long, global = true, value_enum, default_value_t = SystemArg::Sn)]
    system: SystemArg,
    /// Level n of the system.
    #[arg(long, global = true, default_value_t = 0)]
    level: usize,
    /// File of sentences usable as assumption leaves.
    #[arg(long, global = true)]
    assume: Option<PathBuf>,
    /// Unfolding depth.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Quantifier search cutoff for evaluation.
    #[arg(long, global = true, default_value_t = 8)]
    cutoff: u64,
    /// Largest value tried for free variables in bounded checks.
    #[arg(long, global = true, default_value_t = 3)]
    bound: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Skip bounded checking of certificate obligations.
    #[arg(long, global = true)]
    no_check: bool,
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write the produced artifact here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SystemArg {
    Sn,
    Spi,
    Ssigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Sexpr,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a cyclic annotated proof.
    Check { file: PathBuf },
    /// Annotate a plain proof.
    Annotate {
        file: PathBuf,
        /// Root annotation, comma separated.
        #[arg(long, default_value = "")]
        root_vars: String,
    },
    /// Unfold a cyclic proof to a finite depth.
    Unravel { file: PathBuf },
    /// Turn a regular proof graph into a cyclic proof.
    Ravel { file: PathBuf },
    /// Extract induction certificates.
    Uncycle { file: PathBuf },
    /// Evaluate a formula.
    Eval {
        formula: String,
        /// Values of free variables, like `x=3,y=0`.
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Prove a true closed atom.
    ProveGround { atom: String },
    /// Write the example corpus.
    Examples {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
        /// Number of corpus entries.
        #[arg(long, default_value_t = 40)]
        size: usize,
    },
}

/// Failure of a command: `Semantic` maps to exit 1, `Usage` to exit 2.
enum Failure {
    Semantic(String),
    Usage(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<(), Failure>;

impl Config {
    fn mode(&self) -> Result<Mode, Failure> {
        let system = match self.system {
            SystemArg::Sn => System::Sn,
            SystemArg::Spi => System::SPi,
            SystemArg::Ssigma => System::SSigma,
        };
        let mode = Mode::new(system, self.level);
        match &self.assume {
            None => Ok(mode),
            Some(p) => Ok(mode.with_assumptions(read_formulas(p)?)),
        }
    }

    fn emit(&self, text: &str) -> Outcome {
        match &self.output {
            Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_formulas(path: &Path) -> Result<Vec<Formula>, Failure> {
    let text = read(path)?;
    parse_many(&text)
        .map_err(usage)?
        .iter()
        .map(|e| formula_from_sexp(e).map_err(usage))
        .collect()
}

fn read_proof(path: &Path) -> Result<ProofTree, Failure> {
    parse_proof(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_check(file: &Path, cfg: &Config) -> Outcome {
    let mode = cfg.mode()?;
    let pi = CyclicProof::new(read_proof(file)?);
    let report = validate(&pi, &mode);
    match cfg.format {
        Format::Text => print!("{report}"),
        Format::Sexpr => println!("{}", report.to_sexp().pretty(80)),
    }
    let mut ok = report.is_valid();
    if let Some(depth) = cfg.depth {
        let progress = check_progress_on_unfolding(&pi, depth);
        for f in &progress.failures {
            println!("progress failure: {f}");
        }
        ok &= progress.ok();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Semantic(format!("{} is not a valid proof in {mode}", file.display())))
    }
}

fn cmd_annotate(file: &Path, root_vars: &str, cfg: &Config) -> Outcome {
    let mode = cfg.mode()?;
    let tree = read_proof(file)?;
    if tree.is_annotated() {
        return Err(usage("input already annotated"));
    }
    let vars = root_vars.split(',').map(str::trim).filter(|v| !v.is_empty()).map(Var::new);
    let annotated = annotate_tree(&tree, &Annotation::new(vars), &mode).map_err(usage)?;
    cfg.emit(&render_proof(&annotated))
}

fn cmd_unravel(file: &Path, cfg: &Config) -> Outcome {
    let depth = cfg.depth.ok_or_else(|| usage("unravel needs --depth"))?;
    let pi = CyclicProof::new(read_proof(file)?);
    cfg.emit(&render_proof(&unravel(&pi, depth)))
}

fn cmd_ravel(file: &Path, cfg: &Config) -> Outcome {
    let mode = cfg.mode()?;
    let g = RegularProofGraph::parse(&read(file)?).map_err(usage)?;
    let pi = ravel(&g, &mode).map_err(|e| Failure::Semantic(e.to_string()))?;
    cfg.emit(&render_proof(&pi.tree))
}

fn cmd_uncycle(file: &Path, cfg: &Config) -> Outcome {
    let mode = cfg.mode()?;
    let pi = CyclicProof::new(read_proof(file)?);
    let mut certs = extract_all(&pi, &mode).map_err(|e| Failure::Semantic(e.to_string()))?;
    let mut falsified = 0;
    if !cfg.no_check {
        for c in &mut certs {
            let report = check_certificate_bounded(c, cfg.bound, cfg.cutoff, cfg.jobs);
            falsified += report.falsified();
            for (o, chk) in c.obligations.iter().zip(&report.checks) {
                if let Some(a) = &chk.counterexample {
                    eprintln!("obligation {} about {:?} is false under {a}", o.kind.name(), o.about);
                }
            }
        }
    }
    let text: String = certs
        .iter()
        .map(|c| match cfg.format {
            Format::Sexpr => c.render(),
            Format::Text => c.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n");
    if certs.is_empty() {
        eprintln!("no back-links to the root of any subproof; nothing to extract");
    }
    cfg.emit(&text)?;
    if falsified > 0 {
        return Err(Failure::Semantic(format!("{falsified} obligations are false")));
    }
    Ok(())
}

fn cmd_eval(formula: &str, assign: &str, cfg: &Config) -> Outcome {
    let phi = parse_formula(formula).map_err(usage)?;
    let v: Assignment = assign.parse().map_err(usage)?;
    println!("{}", eval_formula(&phi, &v, cfg.cutoff));
    Ok(())
}

fn cmd_prove_ground(atom: &str, cfg: &Config) -> Outcome {
    let (t, u) = match parse_formula(atom).map_err(usage)? {
        Formula::Eq(t, u) | Formula::Neq(t, u) if t.is_closed() && u.is_closed() => (t, u),
        _ => return Err(usage("prove-ground expects a closed (eq t u) or (neq t u)")),
    };
    let goal = parse_formula(atom).map_err(usage)?;
    let proof = prove_ground_atom(&t, &u).map_err(usage)?;
    if !proof.sequent.contains(&goal) {
        return Err(Failure::Semantic(format!("{goal} is false")));
    }
    let proof = annotate_tree(&proof, &Annotation::empty(), &cfg.mode()?).map_err(usage)?;
    cfg.emit(&render_proof(&proof))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_examples(dir: &Path, size: usize, cfg: &Config) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    let x = Var::new("x");
    let phi = parse_formula("(all y (eq (add x y) (add y x)))").expect("fixed formula");
    let schema = induction_schema_proof(&phi, &x, 0).map_err(usage)?;
    write_file(&dir.join("ind_schema_pi1.cyc"), &render_proof(&schema.tree))?;
    write_file(&dir.join("ind_schema_pi1.plain"), &render_proof(&schema.tree.erase()))?;
    let g = graph_of(&schema).map_err(usage)?;
    write_file(&dir.join("ind_schema_pi1.graph"), &g.render())?;

    let mut index = String::from("; file system level\n");
    index.push_str("ind_schema_pi1.cyc sn 0\n");
    for e in corpus(cfg.seed, size) {
        let name = format!("{}.cyc", e.name);
        write_file(&dir.join(&name), &render_proof(&e.proof.tree))?;
        index.push_str(&format!("{name} {} {}\n", e.mode.system, e.mode.level));
    }
    write_file(&dir.join("index.txt"), &index)
}

fn run(cli: &Cli) -> Outcome {
    let cfg = &cli.config;
    match &cli.command {
        Command::Check { file } => cmd_check(file, cfg),
        Command::Annotate { file, root_vars } => cmd_annotate(file, root_vars, cfg),
        Command::Unravel { file } => cmd_unravel(file, cfg),
        Command::Ravel { file } => cmd_ravel(file, cfg),
        Command::Uncycle { file } => cmd_uncycle(file, cfg),
        Command::Eval { formula, assign } => cmd_eval(formula, assign, cfg),
        Command::ProveGround { atom } => cmd_prove_ground(atom, cfg),
        Command::Examples { dir, size } => cmd_examples(dir, *size, cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
