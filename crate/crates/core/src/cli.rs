//! The `isa` command line: validate, step, run, enumerate, check, equiv and
//! repl.
//!
//! [`dispatch`] takes its streams as arguments so that tests can drive it
//! without a process. Exit codes: 0 success (or a passing analysis), 1 fail
//! (or not equivalent), 2 hang, 3 conformance error (or violations found),
//! 4 usage, parse and input errors.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    check_postulates, enumerate_attainable, equivalent, format_conformance, format_enumeration, format_equivalence,
    parse_iso_file, weak_equivalent, AnalysisError, EnumerationConfig, WitnessPair,
};
use crate::dsl::{compile, parse_spec, validate_spec, Severity, SpecError};
use crate::exec::{
    format_run, format_trace, parse_script, run, step, Environment, ExecError, InteractiveEnvironment, RunOptions,
    Script, ScriptedEnvironment,
};
use crate::model::AlgorithmSpec;
use crate::report::{Format, KeyValues};

const USAGE_EXIT: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Human,
    Machine,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Human => Format::Human,
            FormatArg::Machine => Format::Machine,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "isa", version, about = "Run and analyze interactive small-step algorithm specifications")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "human", global = true)]
    pub format: FormatArg,
    /// Report timings and configuration on stderr.
    #[arg(long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct SpaceArgs {
    /// Comma-separated reply pool (default: the whole base set).
    #[arg(long)]
    pub pool: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub max_phases: usize,
    #[arg(long, default_value_t = 8)]
    pub max_domain: usize,
    /// Worker threads for enumeration.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl SpaceArgs {
    fn config(&self) -> EnumerationConfig {
        let cfg = EnumerationConfig {
            reply_pool: None,
            max_phases: self.max_phases,
            max_domain: self.max_domain,
            jobs: self.jobs,
        };
        match &self.pool {
            Some(p) => cfg.with_pool(p.split(',').map(str::trim).filter(|s| !s.is_empty())),
            None => cfg,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and check a specification.
    Validate { spec: PathBuf },
    /// Execute one step against a scripted environment.
    Step {
        spec: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        script: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_phases: usize,
    },
    /// Execute consecutive steps, replaying the script for each.
    Run {
        spec: PathBuf,
        /// Initial state (default: the first initial state by name).
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        script: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_phases: usize,
        /// Stop once a step leaves the state unchanged.
        #[arg(long)]
        until_fixpoint: bool,
    },
    /// List the attainable histories of a state.
    Enumerate {
        spec: PathBuf,
        /// State to enumerate (default: every state).
        #[arg(long)]
        state: Option<String>,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Conformance report over the enumerated space.
    Check {
        spec: PathBuf,
        /// Isomorphisms to check transport along.
        #[arg(long)]
        iso: Option<PathBuf>,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Behavioral equivalence of two specifications.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Only compare histories attainable for both.
        #[arg(long)]
        weak: bool,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Play the environment yourself for one step.
    Repl {
        spec: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 64)]
        max_phases: usize,
    },
}

/// Message and exit code of a failed command.
struct Failure(String, i32);

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure(msg.into(), USAGE_EXIT)
    }
}

impl From<ExecError> for Failure {
    fn from(e: ExecError) -> Self {
        let code = e.exit_code();
        Failure(e.to_string(), code)
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let code = match e {
            AnalysisError::Model(_) => 3,
            _ => USAGE_EXIT,
        };
        Failure(e.to_string(), code)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<AlgorithmSpec, Failure> {
    let text = read(path)?;
    let ast = parse_spec(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))?;
    compile(&ast).map_err(|e| match e {
        SpecError::Parse(p) => Failure::usage(format!("{}:{p}", path.display())),
        SpecError::Invalid(diags) => {
            let lines: Vec<String> = diags.iter().map(|d| format!("{}: {d}", path.display())).collect();
            Failure::usage(lines.join("\n"))
        }
    })
}

fn load_script(path: &Path) -> Result<Script, Failure> {
    let text = read(path)?;
    parse_script(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn state<'a>(spec: &'a AlgorithmSpec, name: &str) -> Result<&'a crate::structure::Structure, Failure> {
    spec.state(name).map_err(|e| Failure::usage(e.to_string()))
}

struct Io<'a> {
    input: &'a mut dyn BufRead,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: Format,
    verbose: bool,
}

impl Io<'_> {
    fn print(&mut self, text: &str) -> Result<(), Failure> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| Failure(format!("cannot write output: {e}"), USAGE_EXIT))
    }

    fn note(&mut self, text: &str) {
        if self.verbose {
            let _ = writeln!(self.err, "{text}");
        }
    }
}

fn validate(io: &mut Io, path: &Path) -> Result<i32, Failure> {
    let text = read(path)?;
    let ast = parse_spec(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))?;
    let diags = validate_spec(&ast);
    let errors = diags.iter().filter(|d| d.severity == Severity::Error).count();
    let spec = if errors == 0 { Some(load(path)?) } else { None };
    let shown = path.display().to_string();
    let out = match io.format {
        Format::Human => {
            let mut o = String::new();
            for d in &diags {
                o.push_str(&format!("{shown}: {d}\n"));
            }
            match &spec {
                Some(s) => o.push_str(&format!(
                    "ok: algorithm {} ({} states, {} rules, {} warnings)\n",
                    s.name,
                    s.states.len(),
                    s.rules.len(),
                    diags.len()
                )),
                None => o.push_str(&format!("invalid: {errors} errors\n")),
            }
            o
        }
        Format::Machine => {
            let mut kv = KeyValues::new();
            kv.put("valid", spec.is_some());
            if let Some(s) = &spec {
                kv.put("algorithm", &s.name);
                kv.put("states", s.states.len());
                kv.put("rules", s.rules.len());
            }
            kv.put("diagnostics", diags.len());
            for (i, d) in diags.iter().enumerate() {
                kv.put(format!("diagnostic.{i}"), d);
            }
            kv.finish()
        }
    };
    io.print(&out)?;
    Ok(if spec.is_some() { 0 } else { USAGE_EXIT })
}

fn execute(io: &mut Io, command: Command) -> Result<i32, Failure> {
    let started = Instant::now();
    let code = match command {
        Command::Validate { spec } => validate(io, &spec)?,
        Command::Step {
            spec,
            state: name,
            script,
            max_phases,
        } => {
            let spec = load(&spec)?;
            let x = state(&spec, &name)?;
            let mut env = ScriptedEnvironment::new(load_script(&script)?);
            let trace = step(&spec, x, &mut env, max_phases)?;
            io.print(&format_trace(&trace, io.format))?;
            trace.outcome.exit_code()
        }
        Command::Run {
            spec,
            state: name,
            steps,
            script,
            max_phases,
            until_fixpoint,
        } => {
            let spec = load(&spec)?;
            let name = match name {
                Some(n) => n,
                None => spec
                    .initial_states()
                    .next()
                    .map(|(n, _)| n.clone())
                    .ok_or_else(|| Failure::usage("no initial state"))?,
            };
            let x0 = state(&spec, &name)?;
            let script = load_script(&script)?;
            let mut envs = |_: usize| -> Box<dyn Environment> { Box::new(ScriptedEnvironment::new(script.clone())) };
            let opts = RunOptions {
                max_steps: steps,
                max_phases,
                stop_at_fixpoint: until_fixpoint,
            };
            let trail = run(&spec, x0, &mut envs, opts)?;
            io.print(&format_run(&trail, io.format))?;
            trail.last().map_or(0, |(_, t)| t.outcome.exit_code())
        }
        Command::Enumerate {
            spec,
            state: name,
            space,
        } => {
            let spec = load(&spec)?;
            let cfg = space.config();
            let names: Vec<String> = match name {
                Some(n) => vec![n],
                None => spec.states.keys().cloned().collect(),
            };
            let mut first = true;
            for n in names {
                let x = state(&spec, &n)?;
                let en = enumerate_attainable(&spec, x, &cfg)?;
                let text = format_enumeration(&spec, &n, x, &en, &cfg, io.format).map_err(AnalysisError::from)?;
                if !first {
                    io.print("\n")?;
                }
                first = false;
                io.print(&text)?;
            }
            0
        }
        Command::Check { spec: path, iso, space } => {
            let spec = load(&path)?;
            let isos = match iso {
                Some(p) => {
                    let text = read(&p)?;
                    parse_iso_file(&text, &spec).map_err(|e| Failure::usage(format!("{}:{e}", p.display())))?
                }
                None => Vec::new(),
            };
            let report = check_postulates(&spec, &space.config(), &isos, &WitnessPair::all(&spec))?;
            io.print(&format_conformance(&report, io.format))?;
            if report.passed() {
                0
            } else {
                3
            }
        }
        Command::Equiv { a, b, weak, space } => {
            let (sa, sb) = (load(&a)?, load(&b)?);
            let cfg = space.config();
            let report = if weak {
                weak_equivalent(&sa, &sb, &cfg)?
            } else {
                equivalent(&sa, &sb, &cfg)?
            };
            io.print(&format_equivalence(&report, io.format))?;
            if report.equivalent {
                0
            } else {
                1
            }
        }
        Command::Repl {
            spec,
            state: name,
            max_phases,
        } => {
            let spec = load(&spec)?;
            let x = state(&spec, &name)?;
            let trace = {
                let mut env = InteractiveEnvironment::new(&mut *io.input, &mut *io.out);
                step(&spec, x, &mut env, max_phases)?
            };
            io.print("\n")?;
            io.print(&format_trace(&trace, io.format))?;
            trace.outcome.exit_code()
        }
    };
    io.note(&format!("elapsed: {:?}", started.elapsed()));
    Ok(code)
}

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    USAGE_EXIT
                }
            };
        }
    };
    let mut io = Io {
        input,
        out,
        err,
        format: cli.format.into(),
        verbose: cli.verbose,
    };
    if io.verbose {
        let cmd = format!("command: {:?}", cli.command);
        io.note(&cmd);
    }
    match execute(&mut io, cli.command) {
        Ok(code) => code,
        Err(Failure(msg, code)) => {
            let _ = writeln!(io.err, "error: {msg}");
            code
        }
    }
}

/// Entry point used by the `isa` binary.
pub fn main_with_std() -> i32 {
    let stdin = std::io::stdin();
    let mut input = stdin.lock();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = dispatch(std::env::args_os(), &mut input, &mut out, &mut err);
    let _ = out.flush();
    code
}
