use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use topos_cli::run::{run, Backend, Command, InputError, Overrides, Settings, EXIT_INPUT};
use topos_cli::workspace::{parse_workspace, print_workspace, Workspace};

#[derive(Parser, Debug)]
#[command(
    name = "topos",
    version,
    about = "Derive colimits in finite presheaf toposes and check the laws they rest on"
)]
struct Cli {
    /// Workspace file with bases, presheaves, morphisms and config.
    #[arg(long, short, global = true)]
    workspace: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    max_objects: Option<usize>,
    #[arg(long, global = true)]
    max_morphisms: Option<usize>,
    #[arg(long, global = true)]
    max_carrier: Option<usize>,
    /// Candidate budget for each enumeration.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Number of generated instances, on top of the curated ones.
    #[arg(long, global = true)]
    instances: Option<u64>,
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendArg>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record per-check wall time. Reports are then no longer reproducible.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Presheaf,
    UnnaturalPushforward,
    UnnaturalHoms,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Presheaf => Backend::Presheaf,
            BackendArg::UnnaturalPushforward => Backend::UnnaturalPushforward,
            BackendArg::UnnaturalHoms => Backend::UnnaturalHoms,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The initial object of a base (a workspace base or terminal, arrow, graph).
    DeriveInitial { base: String },
    /// The coproduct of two workspace presheaves, compared with the disjoint union.
    DeriveCoproduct { a: String, b: String },
    /// The copairing `[f, g]: A + B -> X` of two workspace morphisms.
    DeriveCopair {
        a: String,
        b: String,
        f: String,
        g: String,
    },
    /// Run law checks on curated and generated instances.
    Verify {
        /// `all` or check ids.
        #[arg(long, num_args = 1.., required = true)]
        suite: Vec<String>,
    },
    /// State what a check tests.
    Explain { check: String },
    /// Load the workspace and list its declarations.
    Validate,
    /// Print the workspace in canonical form.
    Fmt,
}

fn load(path: Option<&PathBuf>) -> Result<Workspace, InputError> {
    let Some(path) = path else {
        return Ok(Workspace::default());
    };
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_workspace(&text).map_err(InputError::Parse)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), InputError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| InputError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main_inner(cli: Cli) -> Result<i32, InputError> {
    let ws = load(cli.workspace.as_ref())?;
    let command = match cli.command {
        Cmd::DeriveInitial { base } => Command::DeriveInitial { base },
        Cmd::DeriveCoproduct { a, b } => Command::DeriveCoproduct { a, b },
        Cmd::DeriveCopair { a, b, f, g } => Command::DeriveCopair { a, b, f, g },
        Cmd::Verify { suite } => Command::Verify { suite },
        Cmd::Explain { check } => Command::Explain { check },
        Cmd::Validate => Command::Validate,
        Cmd::Fmt => {
            emit(&print_workspace(&ws), cli.out.as_ref())?;
            return Ok(0);
        }
    };
    let flags = Overrides {
        seed: cli.seed,
        max_objects: cli.max_objects,
        max_morphisms: cli.max_morphisms,
        max_carrier: cli.max_carrier,
        budget: cli.budget,
        instances: cli.instances,
        backend: cli.backend.map(Backend::from),
        timings: cli.timings,
    };
    let settings = Settings::resolve(&flags, &ws.config);
    let report = run(&command, &ws, &settings)?;
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    emit(&text, cli.out.as_ref())?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
