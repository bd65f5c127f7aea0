//! `qhc`: batch front end. Exit codes: 0 success, 1 negative answer,
//! 2 usage or input error, 3 an internal bound was exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use qhc_core::calculi::{check_script_text, script_text, theorem_corpus, CorpusLoader, Status, NEGATIVE_SCRIPTS, SCRIPTS};
use qhc_core::catalog::{catalog, claims, MATRIX_KEYS};
use qhc_core::models::{bits, value_json, Env, Frame, Model, ModelClass, ModelError, Valuation, Value};
use qhc_core::search::battery::{self, Battery};
use qhc_core::search::{find_countermodel, independence_matrix, ModelWitness, SearchBounds, SearchError, SearchOutcome, Target};
use qhc_core::syntax::{parse_formula, print_formula, LanguageFlags, Signature, SyntaxError};
use qhc_core::translations::{target_signature, Translation};

#[derive(Parser)]
#[command(name = "qhc", version, about = "Workbench for the joint logic of problems and propositions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a formula and print its syntax tree and sort.
    Parse {
        /// Signature file; inferred from the formula when absent.
        #[arg(long)]
        sig: Option<PathBuf>,
        formula: String,
    },
    /// Check a proof script.
    Check { script: PathBuf },
    /// Apply a syntactic translation.
    Translate {
        #[arg(long)]
        via: String,
        /// Economical form of the nabla and diamond translations.
        #[arg(long)]
        economy: bool,
        #[arg(long)]
        sig: Option<PathBuf>,
        formula: String,
    },
    /// Evaluate a formula in a model file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        formula: String,
        /// Individual assignment, e.g. `x=0,y=1`.
        #[arg(long, default_value = "")]
        env: String,
    },
    /// Decide validity of a principle or rule on the frame of a model file.
    Valid {
        #[arg(long)]
        model: PathBuf,
        /// Catalog key or statement.
        #[arg(long)]
        principle: String,
    },
    /// Search for a model validating some statements and refuting another.
    Search {
        #[arg(long, value_delimiter = ',')]
        valid: Vec<String>,
        #[arg(long)]
        fails: String,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Where to write the witness.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise non-implications among catalog principles.
    Matrix {
        #[arg(long, value_delimiter = ',')]
        principles: Vec<String>,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List the principle catalog.
    Catalog {
        /// Also list the equivalence, implication and separation claims.
        #[arg(long)]
        claims: bool,
    },
    /// List the theorem corpus, or check every shipped script and battery.
    Corpus {
        #[arg(long)]
        run: bool,
        /// Largest frames for the batteries.
        #[arg(long, default_value_t = 3)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Re-check a witness file.
    Verify { witness: PathBuf },
}

#[derive(Args)]
struct BoundArgs {
    /// Comma-separated model classes.
    #[arg(long, value_delimiter = ',')]
    classes: Vec<String>,
    #[arg(long, default_value_t = 3)]
    max_points: usize,
    #[arg(long, default_value_t = 2)]
    max_domain: usize,
    #[arg(long, default_value_t = 2)]
    stalk_cap: usize,
    #[arg(long, default_value_t = 2_000_000)]
    max_valuations: u128,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    budget: Option<u64>,
}

impl BoundArgs {
    fn bounds(&self) -> Result<SearchBounds, Failure> {
        let classes = if self.classes.is_empty() {
            ModelClass::ALL.to_vec()
        } else {
            self.classes.iter().map(|c| ModelClass::parse(c).ok_or_else(|| Failure::usage(format!("unknown model class `{c}`")))).collect::<Result<_, _>>()?
        };
        Ok(SearchBounds {
            max_points: self.max_points,
            max_domain: self.max_domain,
            classes,
            stalk_cap: self.stalk_cap,
            max_valuations: self.max_valuations,
            budget: self.budget.map(Duration::from_secs),
        })
    }
}

/// A non-success outcome with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

impl From<SyntaxError> for Failure {
    fn from(e: SyntaxError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let code = match e {
            ModelError::TooManyValuations(..) | ModelError::Functor(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Model(m) => m.into(),
            SearchError::Budget(_) => Failure { code: 3, message: e.to_string() },
            _ => Failure::usage(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn signature(sig: &Option<PathBuf>, formula: &str) -> Result<Signature, Failure> {
    match sig {
        Some(p) => Ok(Signature::parse(&read(p)?)?),
        None => Ok(Signature::infer(&[formula])?),
    }
}

fn load_model(path: &Path) -> Result<Model, Failure> {
    Ok(Model::from_json_str(&read(path)?)?)
}

/// Sets print as `{0, 1}`, sheaf and presheaf values as JSON.
fn show_value(v: &Value, frame: &Frame) -> String {
    match v {
        Value::Set(s) => format!("{{{}}}", bits(*s).map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
        Value::Obj(_) => value_json(v, frame).to_string(),
    }
}

fn show_valuation(val: &Valuation, frame: &Frame) -> String {
    let mut out = String::new();
    for (name, pv) in val {
        let shown: Vec<String> = pv.values.iter().map(|v| show_value(v, frame)).collect();
        let rhs = if pv.arity == 0 { shown[0].clone() } else { format!("[{}]", shown.join(", ")) };
        out += &format!("  {name} |-> {rhs}\n");
    }
    out
}

fn parse_env(text: &str) -> Result<Env, Failure> {
    let mut env = Env::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, d) = part.split_once('=').ok_or_else(|| Failure::usage(format!("bad assignment `{part}`")))?;
        let d = d.trim().parse().map_err(|_| Failure::usage(format!("bad individual `{d}`")))?;
        env.insert(x.trim().to_string(), d);
    }
    Ok(env)
}

fn run(cmd: Cmd) -> Result<u8, Failure> {
    match cmd {
        Cmd::Parse { sig, formula } => {
            let f = parse_formula(&formula, &signature(&sig, &formula)?)?;
            println!("{}", print_formula(&f));
            println!("sort: {}", f.sort());
            println!("ast: {f:?}");
            Ok(0)
        }
        Cmd::Check { script } => {
            let text = match std::fs::read_to_string(&script) {
                Ok(t) => t,
                Err(e) => match script.to_str().and_then(script_text) {
                    Some(t) => t.to_string(),
                    None => return Err(Failure::usage(format!("{}: {e}", script.display()))),
                },
            };
            let base = script.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let verdict = check_script_text(&text, &CorpusLoader::with_base(base)).map_err(|e| Failure::usage(e.to_string()))?;
            println!("{verdict}");
            Ok(if verdict.code().is_none() { 0 } else { 1 })
        }
        Cmd::Translate { via, economy, sig, formula } => {
            let t = Translation::from_str(&via).map_err(Failure::usage)?;
            let t = if economy { t.with_economy(true) } else { t };
            let sig = signature(&sig, &formula)?;
            let f = parse_formula(&formula, &sig)?;
            let out = t.apply(&f);
            let text = print_formula(&out);
            // the printed form must read back as the same formula
            let back = parse_formula(&text, &target_signature(&sig))?;
            assert!(qhc_core::syntax::alpha_equal(&back, &out), "printed translation does not re-parse");
            println!("{text}");
            Ok(0)
        }
        Cmd::Eval { model, formula, env } => {
            let m = load_model(&model)?;
            let mut sig = Signature::with_flags(LanguageFlags::default());
            for (name, pv) in &m.valuation {
                sig.declare(name, pv.arity, pv.sort);
            }
            let f = parse_formula(&formula, &sig)?;
            let env = parse_env(&env)?;
            let v = m.eval(&f, &env)?;
            println!("value: {}", show_value(&v, &m.frame));
            let designated = m.frame.designated_value(f.sort(), &v);
            println!("designated: {designated}");
            Ok(if designated { 0 } else { 1 })
        }
        Cmd::Valid { model, principle } => {
            let m = load_model(&model)?;
            let t = Target::resolve(&principle)?;
            let check = t.statement.check(&m.frame)?;
            if check.holds {
                println!("valid: {} ({} valuations)", t.statement, check.valuations);
                return Ok(0);
            }
            println!("not valid: {}", t.statement);
            if let Some((val, env)) = check.counterexample {
                println!("falsifying valuation:");
                print!("{}", show_valuation(&val, &m.frame));
                if !env.is_empty() {
                    println!("  assignment: {env:?}");
                }
            }
            Ok(1)
        }
        Cmd::Search { valid, fails, bounds, out } => {
            let bounds = bounds.bounds()?;
            let valid: Vec<Target> = valid.iter().filter(|v| !v.is_empty()).map(|v| Target::resolve(v)).collect::<Result<_, _>>()?;
            let fails = Target::resolve(&fails)?;
            match find_countermodel(&valid, &fails, &bounds)? {
                SearchOutcome::Found(w) => {
                    print!("{}", w.describe());
                    if let Some(p) = out {
                        write(&p, &w.to_json())?;
                    }
                    Ok(0)
                }
                SearchOutcome::Exhausted(e) => {
                    println!("no countermodel within {bounds} ({} frames)", e.frames);
                    for s in &e.skipped {
                        println!("  skipped: {s}");
                    }
                    Ok(1)
                }
            }
        }
        Cmd::Matrix { principles, bounds, json } => {
            let bounds = bounds.bounds()?;
            let keys: Vec<&str> = if principles.is_empty() { MATRIX_KEYS.to_vec() } else { principles.iter().map(String::as_str).collect() };
            let report = independence_matrix(&keys, &bounds)?;
            print!("{}", report.table());
            if let Some(p) = json {
                write(&p, &report.to_json())?;
            }
            let bad = report.contradictions();
            for e in &bad {
                println!("CONTRADICTION: witness against claimed {} => {}", e.from, e.to);
            }
            Ok(if bad.is_empty() { 0 } else { 1 })
        }
        Cmd::Catalog { claims: with_claims } => {
            for p in catalog() {
                println!("{:<16} {:<48} {}", p.key, p.name, p.source);
            }
            if with_claims {
                let set = claims();
                println!();
                for e in &set.equivalences {
                    let members: Vec<String> = e.members.iter().map(|m| m.to_string()).collect();
                    let under = e.under.as_ref().map(|u| format!(" under {u}")).unwrap_or_default();
                    println!("EQUIV {}{under} [{}]: {}", e.key, e.mode, members.join(" <=> "));
                }
                for i in &set.implications {
                    let under = i.under.as_ref().map(|u| format!(" under {u}")).unwrap_or_default();
                    println!("IMPLIES {} => {}{under} [{}]", i.from, i.to, i.mode);
                }
                for s in &set.separations {
                    println!("SEPARATE {} -/-> {} [{}]", s.from.as_deref().unwrap_or("QHC"), s.to, s.mode);
                }
            }
            Ok(0)
        }
        Cmd::Corpus { run: false, .. } => {
            for e in theorem_corpus() {
                let status = match e.status {
                    Status::Scripted => e.script.clone().unwrap_or_default(),
                    Status::SemanticOnly => "semantic-only".into(),
                };
                println!("{:<28} {:<16} {:<24} {}", e.name, e.system, status, e.statement());
            }
            Ok(0)
        }
        Cmd::Corpus { run: true, points, seed } => corpus_run(points, seed),
        Cmd::Verify { witness } => {
            let w = ModelWitness::from_json(&read(&witness)?)?;
            print!("{}", w.describe());
            match w.verify() {
                Ok(()) => {
                    println!("verified");
                    Ok(0)
                }
                Err(SearchError::Witness(m)) => {
                    println!("not verified: {m}");
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn corpus_run(points: usize, seed: u64) -> Result<u8, Failure> {
    let mut ok = true;
    let loader = CorpusLoader::new();
    for (name, text) in SCRIPTS.iter().filter(|(n, _)| !NEGATIVE_SCRIPTS.iter().any(|(m, _)| m == n)) {
        let v = check_script_text(text, &loader).map_err(|e| Failure::usage(format!("{name}: {e}")))?;
        let good = v.code().is_none();
        ok &= good;
        println!("{} {name}: {v}", if good { "ok" } else { "FAILED" });
    }
    for (name, code) in NEGATIVE_SCRIPTS {
        let text = script_text(name).expect("shipped");
        let v = check_script_text(text, &loader).map_err(|e| Failure::usage(format!("{name}: {e}")))?;
        let good = v.code().map(|c| c.to_string()).as_deref() == Some(*code);
        ok &= good;
        println!("{} {name} (expects {code}): {v}", if good { "ok" } else { "FAILED" });
    }
    let small = points.min(3);
    let classes: Vec<(ModelClass, usize)> =
        ModelClass::ALL.iter().map(|&c| (c, if c.functorial() { small } else { points })).collect();
    let mut batteries: Vec<Battery> = vec![battery::soundness(&classes, 2)];
    batteries.extend(battery::translation_soundness(points, small, 2));
    batteries.push(battery::square(1000, seed));
    batteries.push(battery::shadow_battery(&SearchBounds { max_points: small.min(2), ..Default::default() })?);
    for b in &batteries {
        ok &= b.passed();
        println!("{b}");
    }
    Ok(if ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
