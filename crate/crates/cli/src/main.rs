use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cuntz_cross::problem::{cmd_classify, cmd_decompose, cmd_eval, cmd_scaling, cmd_verify, ProblemSpec};
use cuntz_cross::Error;
use serde_json::{json, Value};

/// Classify and construct inside crossed products of Cuntz algebras by
/// quasi-free actions, with exact arithmetic throughout.
#[derive(Parser, Debug)]
#[command(name = "cuntz-cross", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verdict on simplicity, pure infiniteness and AF-embeddability, with certificates.
    Classify(Common),
    /// Finite-dimensional decomposition for a region family.
    Decompose(Common),
    /// Scaling element for a finite set X and a point gamma0 outside it.
    Scaling(Common),
    /// Seeded randomized property suites.
    Verify(Common),
    /// Canonical form of an algebra expression.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Expression such as "S[1]·chi{0}·S*[1]"; read from the spec when omitted.
        expression: Option<String>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Problem spec (JSON); "-" reads standard input.
    #[arg(long)]
    spec: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the DOT diagram here (decompose).
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long)]
    precision_depth: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON array of points, e.g. "[0]".
    #[arg(long)]
    x_set: Option<String>,
    /// JSON point, e.g. "1".
    #[arg(long)]
    gamma0: Option<String>,
}

fn argument(message: String) -> Error {
    Error::argument("cli_frontend", message)
}

fn json_arg(flag: &str, text: &str) -> Result<Value, Error> {
    serde_json::from_str(text).map_err(|e| argument(format!("--{flag}: {e}")))
}

fn load(common: &Common) -> Result<ProblemSpec, Error> {
    let text = if common.spec.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| argument(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(&common.spec).map_err(|e| argument(format!("reading {}: {e}", common.spec.display())))?
    };
    let mut spec = ProblemSpec::from_json_str(&text)?;
    if common.truncation.is_some() {
        spec.truncation = common.truncation;
    }
    if common.max_terms.is_some() {
        spec.max_terms = common.max_terms;
    }
    if common.precision_depth.is_some() {
        spec.precision_depth = common.precision_depth;
    }
    if common.seed.is_some() {
        spec.seed = common.seed;
    }
    if let Some(x) = &common.x_set {
        match json_arg("x-set", x)? {
            Value::Array(items) => spec.x_set = Some(items),
            other => spec.x_set = Some(vec![other]),
        }
    }
    if let Some(g) = &common.gamma0 {
        spec.gamma0 = Some(json_arg("gamma0", g)?);
    }
    Ok(spec)
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| argument(format!("writing {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| argument(format!("stdout: {e}")))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn run(command: &Command) -> Result<(), Error> {
    match command {
        Command::Classify(c) => emit(&c.out, &pretty(&cmd_classify(&load(c)?)?)),
        Command::Decompose(c) => {
            let (report, dot) = cmd_decompose(&load(c)?)?;
            if let Some(p) = &c.dot {
                emit(&Some(p.clone()), &dot)?;
            }
            emit(&c.out, &pretty(&report))
        }
        Command::Scaling(c) => emit(&c.out, &pretty(&cmd_scaling(&load(c)?)?)),
        Command::Verify(c) => {
            let report = cmd_verify(&load(c)?)?;
            emit(&c.out, &pretty(&report))?;
            if report["passed"] != json!(true) {
                return Err(Error::internal("verify", "a property suite reported failures"));
            }
            Ok(())
        }
        Command::Eval { common, expression } => {
            let spec = load(common)?;
            let expr = expression
                .clone()
                .or_else(|| spec.expression.clone())
                .ok_or_else(|| argument("eval needs an expression".into()))?;
            emit(&common.out, &format!("{}\n", cmd_eval(&spec, &expr)?))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify(_) => "classify",
        Command::Decompose(_) => "decompose",
        Command::Scaling(_) => "scaling",
        Command::Verify(_) => "verify",
        Command::Eval { .. } => "eval",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = json!({
                "error": {
                    "command": command_name(&cli.command),
                    "module": e.module(),
                    "kind": e.kind(),
                    "message": e.to_string(),
                    "exit_code": e.exit_code(),
                }
            });
            eprintln!("{}", serde_json::to_string(&report).expect("values serialize"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
