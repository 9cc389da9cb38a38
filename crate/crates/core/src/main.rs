use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use witt_loc::bn::CoeffTheory;
use witt_loc::engine::{assemble, EngineError};
use witt_loc::euler::{euler_class, euler_of_sum, localizing_integer, EulerError, EulerTable, LocalizingInput, RepLabel};
use witt_loc::expr::{eval_ring_expr, eval_witt_expr, ExprError, RingContext};
use witt_loc::problem::{parse_problem, ProblemFile};
use witt_loc::report::{self, class_value, entry_value, render, table_value};
use witt_loc::selfcheck;
use witt_loc::witt::FieldSpec;

const EXIT_SCHEMA: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "witt-loc", version, about = "Witt-ring arithmetic and N-equivariant localization")]
struct Cli {
    /// Number of known coefficients in power series and inverses.
    #[arg(long, global = true)]
    truncation: Option<usize>,
    /// Extra integer to invert, multiplied into M.
    #[arg(long, global = true, default_value_t = 1)]
    invert: u64,
    /// Custom Euler table (JSON).
    #[arg(long, global = true)]
    table: Option<PathBuf>,
    /// Use the opposite global sign for every Euler class.
    #[arg(long, global = true)]
    sign_flip: bool,
    /// Base field: Q, R, F_p or closed.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Coefficient theory: HW, KW or custom.
    #[arg(long, global = true)]
    theory: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a Witt-class expression, e.g. "<2>+<2*d>; d=-1".
    Witt { expr: String },
    /// Evaluate an expression in A(BN), e.g. "(1+q0)*e".
    RingEval { expr: String },
    /// Print Euler classes of representations such as "3,+".
    Euler {
        reps: Vec<String>,
        /// Also print the Euler class of the direct sum.
        #[arg(long)]
        sum: bool,
    },
    /// Assemble a localization problem and extract its degree.
    Localize { problem: PathBuf },
    /// Run the randomized invariant checks.
    Selfcheck {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
    report: Option<Value>,
}

impl Failure {
    fn schema(message: impl Into<String>) -> Self {
        Failure { code: EXIT_SCHEMA, message: message.into(), report: None }
    }

    fn domain(message: impl Into<String>) -> Self {
        Failure { code: EXIT_DOMAIN, message: message.into(), report: None }
    }
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        if e.is_syntax() {
            Failure::schema(e.to_string())
        } else {
            Failure::domain(e.to_string())
        }
    }
}

impl From<EulerError> for Failure {
    fn from(e: EulerError) -> Self {
        match e {
            EulerError::Local(_) => Failure::domain(e.to_string()),
            _ => Failure::schema(e.to_string()),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Euler(inner) => inner.into(),
            EngineError::EmptyProblem | EngineError::MissingRestriction(_) => Failure::schema(e.to_string()),
            _ => Failure::domain(e.to_string()),
        }
    }
}

fn parse_field(cli: &Cli) -> Result<FieldSpec, Failure> {
    match &cli.field {
        None => Ok(FieldSpec::Rationals),
        Some(s) => s.parse().map_err(Failure::schema),
    }
}

fn load_table(path: &Path, field: FieldSpec) -> Result<EulerTable, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::schema(format!("cannot read {}: {e}", path.display())))?;
    let stem = path.file_stem().map_or("custom".into(), |s| s.to_string_lossy().into_owned());
    Ok(EulerTable::from_json(&text, field, &stem)?)
}

/// The table selected by --theory / --table, for commands without a
/// problem file.
fn cli_table(cli: &Cli, field: FieldSpec) -> Result<EulerTable, Failure> {
    let table = match (cli.theory.as_deref(), &cli.table) {
        (None | Some("custom"), Some(path)) => load_table(path, field)?,
        (Some("custom"), None) => return Err(Failure::schema("theory custom needs --table")),
        (Some(t @ ("HW" | "KW")), Some(_)) => return Err(Failure::schema(format!("--table cannot be combined with theory {t}"))),
        (None | Some("HW"), None) => EulerTable::hw(field),
        (Some("KW"), None) => EulerTable::kw(field),
        (Some(other), _) => return Err(Failure::schema(format!("unknown theory {other:?}"))),
    };
    Ok(table.with_sign_flip(cli.sign_flip))
}

fn truncation(cli: &Cli, default: usize) -> Result<usize, Failure> {
    match cli.truncation {
        Some(0) => Err(Failure::schema("--truncation must be at least 1")),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn header(command: &str, field: FieldSpec) -> Vec<(String, Value)> {
    vec![("command".into(), command.into()), ("field".into(), field.to_string().into())]
}

fn cmd_witt(cli: &Cli, text: &str) -> Result<Value, Failure> {
    let field = parse_field(cli)?;
    let w = eval_witt_expr(text, field)?;
    let mut out = header("witt", field);
    out.push(("input".into(), text.into()));
    out.push(("result".into(), report::witt_value(&w)));
    out.push(("odd_rank".into(), w.rank_parity().into()));
    out.push(("signature".into(), w.signature().map_or(Value::Null, Value::from)));
    Ok(report::sorted(out))
}

fn cmd_ring_eval(cli: &Cli, text: &str) -> Result<Value, Failure> {
    let field = parse_field(cli)?;
    let table = cli_table(cli, field)?;
    let t = truncation(cli, witt_loc::series::DEFAULT_TRUNCATION)?;
    let ctx = RingContext { field, theory: table.theory().clone(), truncation: t, etilde_square: table.etilde_square_element(t) };
    let v = eval_ring_expr(text, &ctx)?;
    let mut out = header("ring-eval", field);
    out.push(("input".into(), text.into()));
    out.push(("result".into(), v.to_string().into()));
    out.push(("theory".into(), table.theory().to_string().into()));
    out.push(("truncation".into(), t.into()));
    out.push(("twisted".into(), v.is_twisted().into()));
    Ok(report::sorted(out))
}

fn cmd_euler(cli: &Cli, reps: &[String], sum: bool) -> Result<Value, Failure> {
    let field = parse_field(cli)?;
    let table = cli_table(cli, field)?;
    let labels: Vec<RepLabel> = if reps.is_empty() {
        if table.is_builtin() {
            (1..=8).map(RepLabel::plus).collect()
        } else {
            table.explicit_labels().copied().collect()
        }
    } else {
        reps.iter().map(|r| r.parse()).collect::<Result<_, EulerError>>()?
    };
    let mut entries = Vec::new();
    for rep in &labels {
        match euler_class(*rep, &table) {
            Ok(e) => entries.push(entry_value(*rep, &e)),
            Err(EulerError::RankOne(r)) => {
                eprintln!("warning: {r} has rank one; its Euler class vanishes");
                entries.push(report::sorted(vec![
                    ("rep".into(), r.to_string().into()),
                    ("tag".into(), "untwisted".into()),
                    ("value".into(), "0".into()),
                    ("warning".into(), "rank one".into()),
                ]));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut out = header("euler", field);
    out.push(("entries".into(), Value::Array(entries)));
    out.push(("table".into(), table_value(&table)));
    if sum {
        let inputs: Vec<LocalizingInput> = labels.iter().map(|r| LocalizingInput::Rep(*r)).collect();
        let m = num_integer::lcm(localizing_integer(&inputs, field.characteristic()), cli.invert.max(1));
        out.push(("modulus".into(), m.into()));
        out.push(("sum".into(), class_value(&euler_of_sum(&labels, &table, m)?)));
    }
    Ok(report::sorted(out))
}

fn load_problem(path: &Path) -> Result<ProblemFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::schema(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text).map_err(|e| Failure::schema(format!("{}: {e}", path.display())))
}

fn cmd_localize(cli: &Cli, path: &Path) -> Result<Value, Failure> {
    let file = load_problem(path)?;
    let mut problem = file.problem;
    if let Some(f) = &cli.field {
        let f: FieldSpec = f.parse().map_err(Failure::schema)?;
        if f != problem.field {
            return Err(Failure::schema(format!("--field {f} disagrees with the problem file ({})", problem.field)));
        }
    }
    problem.truncation = truncation(cli, problem.truncation)?;
    let table_path = match (&cli.table, &file.custom_table) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(rel)) => Some(path.parent().unwrap_or(Path::new(".")).join(rel)),
        (None, None) => None,
    };
    let table = match (&problem.theory, table_path) {
        (CoeffTheory::Custom { .. }, Some(p)) => load_table(&p, problem.field)?,
        (CoeffTheory::Custom { .. }, None) => return Err(Failure::schema("theory custom needs a table")),
        (t, Some(_)) => return Err(Failure::schema(format!("--table cannot be combined with theory {t}"))),
        (t, None) => EulerTable::for_theory(problem.field, t).expect("built-in theory"),
    };
    if let Some(t) = cli.theory.as_deref() {
        let file_theory = match problem.theory {
            CoeffTheory::HW => "HW",
            CoeffTheory::KW => "KW",
            CoeffTheory::Custom { .. } => "custom",
        };
        if t != file_theory {
            return Err(Failure::schema(format!("--theory {t} disagrees with the problem file ({file_theory})")));
        }
    }
    problem.theory = table.theory().clone();
    let table = table.with_sign_flip(cli.sign_flip);
    let assembly = assemble(&problem, &table, cli.invert)?;
    let (value, err) = report::localize_report(&problem, &table, cli.invert, &assembly);
    match err {
        None => Ok(value),
        Some(e) => {
            let mut f: Failure = e.into();
            f.report = Some(value);
            Err(f)
        }
    }
}

fn cmd_selfcheck(seed: u64, cases: usize) -> Result<Value, Failure> {
    let results = selfcheck::run(seed, cases);
    let ok = results.iter().all(|r| r.passed());
    let checks: Vec<Value> = results
        .iter()
        .map(|r| {
            report::sorted(vec![
                ("cases".into(), r.cases.into()),
                ("example".into(), r.example.clone().map_or(Value::Null, Value::from)),
                ("failures".into(), r.failures.into()),
                ("name".into(), r.name.into()),
                ("passed".into(), r.passed().into()),
            ])
        })
        .collect();
    let value = report::sorted(vec![
        ("checks".into(), Value::Array(checks)),
        ("command".into(), "selfcheck".into()),
        ("passed".into(), ok.into()),
        ("seed".into(), seed.into()),
    ]);
    if ok {
        Ok(value)
    } else {
        Err(Failure { code: EXIT_INTERNAL, message: "invariant checks failed".into(), report: Some(value) })
    }
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Witt { expr } => cmd_witt(cli, expr),
        Command::RingEval { expr } => cmd_ring_eval(cli, expr),
        Command::Euler { reps, sum } => cmd_euler(cli, reps, *sum),
        Command::Localize { problem } => cmd_localize(cli, problem),
        Command::Selfcheck { seed, cases } => cmd_selfcheck(*seed, *cases),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(v)) => {
            print!("{}", render(&v));
            ExitCode::SUCCESS
        }
        Ok(Err(f)) => {
            if let Some(v) = &f.report {
                print!("{}", render(v));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
