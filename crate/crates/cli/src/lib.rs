//! Command-line front end: argument handling, dispatch and exit codes.

pub mod commands;
pub mod parse;
pub mod report;

use clap::{Parser, Subcommand, ValueEnum};

use report::{error_json, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "a1quad", version, about = "A1-connected components of affine quadrics over Q")]
pub struct Cli {
    /// Base field: Q, R or Qp:<p>.
    #[arg(long, global = true, default_value = "Q")]
    pub field: String,
    /// Search budget (planes for connect-points).
    #[arg(long, global = true, default_value_t = 32)]
    pub budget: usize,
    /// Treat every element as a square.
    #[arg(long, global = true)]
    pub quadratically_closed: bool,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: FormatArg,
    /// Factors allowed in value-group certificates.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_factors: usize,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Normal form of a quadric polynomial in x1..xn.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Classical invariants of a diagonal form "a1,a2,...".
    Invariants {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    Isotropy {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Witt index and first Witt index.
    Witt {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    Represents {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// Membership of d in the group generated by the values of the form.
    ValueGroup {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// Sections of the connected components of an isotropic quadric.
    Pi0 {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Connectedness verdict for a quadric polynomial or a form psi (psi = 1).
    Connected {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Whether f lies in c<D(phi)> over Q(t).
    Qvt {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Goodness of a rational curve on psi = 1, components separated by ';'.
    GoodCurve {
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Search for good conics joining two rational points of psi = 1.
    ConnectPoints {
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Homotopy chain on x1 x2 = phi(1, x3, ...) between the fibers over c and lambda.
    Chain {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Read one request per line from stdin.
    Batch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn failure(format: Format, msg: String) -> Outcome {
    match format {
        Format::Structured => Outcome {
            code: 1,
            stdout: error_json(&msg).to_string(),
            stderr: String::new(),
        },
        Format::Text => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}"),
        },
    }
}

/// Runs one request; `argv` excludes the program name.
pub fn execute<S: AsRef<str>>(argv: &[S], stdin: &mut dyn std::io::BufRead) -> Outcome {
    let args = std::iter::once("a1quad").chain(argv.iter().map(|s| s.as_ref()));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return Outcome {
                code,
                stdout: if code == 0 { e.to_string() } else { String::new() },
                stderr: if code == 0 { String::new() } else { e.to_string() },
            };
        }
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    match &cli.command {
        None | Some(Command::Batch) => run_batch(stdin, argv),
        Some(cmd) => match commands::run(cmd, &cli) {
            Ok(r) => Outcome {
                code: r.exit_code(),
                stdout: r.render(format),
                stderr: String::new(),
            },
            Err(commands::CliError::Unknown(msg)) => {
                let mut r = report::Report::new("unknown", serde_json::Value::Null);
                r.verdict = "Unknown".into();
                r.unknown = true;
                r.line(msg);
                Outcome {
                    code: 2,
                    stdout: r.render(format),
                    stderr: String::new(),
                }
            }
            Err(commands::CliError::Input(msg)) => failure(format, msg),
        },
    }
}

/// Each line is a request with its own arguments; global flags given on the
/// command line apply to every line. The exit code is the worst seen:
/// input errors over Unknown over decided.
fn run_batch<S: AsRef<str>>(stdin: &mut dyn std::io::BufRead, outer: &[S]) -> Outcome {
    let globals: Vec<String> = outer
        .iter()
        .map(|s| s.as_ref().to_string())
        .filter(|s| s != "batch")
        .collect();
    let mut out = Outcome {
        code: 0,
        stdout: String::new(),
        stderr: String::new(),
    };
    let mut worst = 0;
    let mut line = String::new();
    let mut lineno = 0;
    loop {
        line.clear();
        match stdin.read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => {
                out.stderr.push_str(&format!("error: reading stdin: {e}\n"));
                worst = 1;
                break;
            }
        }
        lineno += 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let Some(mut args) = shlex::split(text) else {
            out.stderr.push_str(&format!("error: line {lineno}: unbalanced quotes\n"));
            worst = 1;
            continue;
        };
        if matches!(args.first().map(String::as_str), Some("batch") | None) {
            out.stderr.push_str(&format!("error: line {lineno}: expected a command\n"));
            worst = 1;
            continue;
        }
        args.extend(globals.iter().cloned());
        let r = execute(&args, &mut std::io::empty());
        out.stdout.push_str(&r.stdout);
        if !r.stdout.is_empty() {
            out.stdout.push('\n');
        }
        if !r.stderr.is_empty() {
            out.stderr.push_str(&format!("line {lineno}: {}\n", r.stderr.trim_end()));
        }
        worst = match (worst, r.code) {
            (1, _) | (_, 1) => 1,
            (2, _) | (_, 2) => 2,
            _ => 0,
        };
    }
    out.code = worst;
    out
}
