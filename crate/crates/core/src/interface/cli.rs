//! `webxr-spl` command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O or
//! parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use super::service::{self, ServiceConfig, ServiceError};
use super::{enumerate_report, load_config, load_model, to_json, LoadError, PropagateReport};
use crate::configurator::{propagate, validate, ConfigError, Configuration, Mode};
use crate::generator::{GenerateError, GenerationOptions, Generator, GeneratorSettings, DEFAULT_APP_TITLE};
use crate::model::{serialize_model, FeatureModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "webxr-spl", version, about = "Configure Web XR product-line variants and generate A-Frame skeletons")]
struct Cli {
    /// Feature model document, or `builtin`.
    #[arg(long, global = true, default_value = super::BUILTIN_MODEL, value_name = "PATH")]
    model: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect the feature model.
    #[command(subcommand)]
    Model(ModelCommand),
    /// Validate, propagate and enumerate configurations.
    #[command(subcommand)]
    Config(ConfigCommand),
    /// Generate an A-Frame document from a complete configuration.
    Generate(GenerateArgs),
    /// Run the HTTP service.
    Serve {
        #[arg(long, value_name = "FILE")]
        config_file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum ModelCommand {
    /// Print the canonical model document.
    Show {
        /// Model document to canonicalize instead of `--model`.
        #[arg(long, value_name = "PATH")]
        file: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum ConfigCommand {
    /// Print one line per violated rule; exit 1 if there are any.
    Validate {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Treat undecided features as open.
        #[arg(long)]
        partial: bool,
    },
    /// Print the propagation fixpoint and forced decisions.
    Propagate {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
    },
    /// Count (and with --list, print) valid completions.
    Enumerate {
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        limit: Option<usize>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Also write the feature → element manifest.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
    #[arg(long, default_value = DEFAULT_APP_TITLE)]
    title: String,
    #[arg(long)]
    author: Option<String>,
    /// Skip the demo box and sky.
    #[arg(long)]
    no_demo: bool,
    #[arg(long, value_name = "URL")]
    runtime_url: Option<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        let code = match &e {
            LoadError::Config {
                source: ConfigError::ModelMismatch { .. },
                ..
            } => EXIT_INVALID,
            _ => EXIT_IO,
        };
        Failure::new(code, e)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let code = match e {
            ConfigError::Syntax { .. } | ConfigError::Document(_) => EXIT_IO,
            ConfigError::ModelMismatch { .. } | ConfigError::ModelTooLarge { .. } => EXIT_INVALID,
        };
        Failure::new(code, e)
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(EXIT_IO, format!("cannot write {}: {e}", path.display()))
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Model(ModelCommand::Show { file }) => {
            let model = load_model(file.as_deref().unwrap_or(&cli.model))?;
            emit(out, &serialize_model(&model))
        }
        Command::Config(command) => {
            let model = load_model(&cli.model)?;
            config_command(&model, command, out)
        }
        Command::Generate(args) => {
            let model = load_model(&cli.model)?;
            generate(&model, args, err)
        }
        Command::Serve { config_file } => serve(&config_file),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<i32, Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot write output: {e}")))?;
    Ok(EXIT_OK)
}

fn config_command(model: &FeatureModel, command: ConfigCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        ConfigCommand::Validate { config, partial } => {
            let config = load_config(config)?;
            let mode = if partial { Mode::Partial } else { Mode::Complete };
            let diagnostics = validate(model, &config, mode)?;
            let text: String = diagnostics.iter().map(|d| format!("{d}\n")).collect();
            emit(out, &text)?;
            Ok(if diagnostics.is_empty() { EXIT_OK } else { EXIT_INVALID })
        }
        ConfigCommand::Propagate { config } => {
            let config = load_config(config)?;
            let result = propagate(model, &config)?;
            emit(out, &to_json(&PropagateReport::new(&result, model)))?;
            Ok(if result.is_conflict() { EXIT_INVALID } else { EXIT_OK })
        }
        ConfigCommand::Enumerate { config, limit, list } => {
            let config = match config {
                Some(path) => load_config(path)?,
                None => Configuration::new(model),
            };
            let report = enumerate_report(model, &config, limit, list)?;
            emit(out, &to_json(&report))
        }
    }
}

fn generate(model: &FeatureModel, args: GenerateArgs, err: &mut dyn Write) -> Result<i32, Failure> {
    let config = load_config(&args.config)?;
    let mut settings = GeneratorSettings::default();
    if let Some(url) = args.runtime_url {
        settings.aframe_runtime_url = url;
    }
    let options = GenerationOptions {
        app_title: args.title,
        author: args.author,
        include_demo_objects: !args.no_demo,
    };
    let artifact = match Generator::new(settings).generate(model, &config, &options) {
        Ok(a) => a,
        Err(GenerateError::InvalidConfiguration(diagnostics)) => {
            for d in &diagnostics {
                let _ = writeln!(err, "{d}");
            }
            return Err(Failure::new(EXIT_INVALID, "configuration is not a valid complete product"));
        }
        Err(GenerateError::Config(e)) => return Err(e.into()),
        Err(e @ GenerateError::InvalidOptions(_)) => return Err(Failure::new(EXIT_USAGE, e)),
        Err(e) => return Err(Failure::new(EXIT_INVALID, e)),
    };
    fs::write(&args.out, &artifact.document).map_err(|e| io_failure(&args.out, e))?;
    if let Some(path) = &args.manifest {
        fs::write(path, artifact.manifest_document()).map_err(|e| io_failure(path, e))?;
    }
    Ok(EXIT_OK)
}

fn serve(config_file: &Path) -> Result<i32, Failure> {
    let mut config = ServiceConfig::load(config_file).map_err(service_failure)?;
    config.apply_env(|k| std::env::var(k).ok());
    let _ = tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .try_init();
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::new(EXIT_IO, e))?;
    runtime
        .block_on(service::serve(config, shutdown_signal()))
        .map_err(service_failure)?;
    Ok(EXIT_OK)
}

fn service_failure(e: ServiceError) -> Failure {
    let code = match e {
        ServiceError::Config(_) => EXIT_USAGE,
        _ => EXIT_IO,
    };
    Failure::new(code, e)
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = terminate => {},
    }
}
