use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{self, BufRead};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use edupack_core::canonical::canonical_string;
use edupack_core::store::{Repository, Role, StoreError};
use edupack_core::{validate_pack, LanguageCode, ModuleId, ValidationReport};
use edupack_server::ServerConfig;
use serde::Serialize;

const PASSWORD_VAR: &str = "SAPHIR_PASSWORD";

#[derive(Parser)]
#[command(name = "edupack", version, about = "Manage an edupack content repository")]
struct Cli {
    /// Repository directory.
    #[arg(long, env = "SAPHIR_DATA_DIR", global = true)]
    data_dir: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Create an empty repository.
    Init { dir: PathBuf },
    /// Serve the HTTP API (token secret from SAPHIR_TOKEN_SECRET).
    Serve {
        #[arg(long)]
        bind: Option<SocketAddr>,
    },
    /// Validate the whole repository or one module.
    Validate {
        #[arg(long)]
        module: Option<String>,
    },
    /// Write a content pack.
    Export {
        #[arg(long)]
        out: PathBuf,
        /// Languages to include besides each module's source language.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        langs: Vec<String>,
    },
    /// Merge a content pack into the repository.
    Import { pack: PathBuf },
    #[command(subcommand)]
    Report(ReportCommand),
    /// Catalog counts.
    Stats,
    #[command(subcommand)]
    User(UserCommand),
    #[command(subcommand)]
    Language(LanguageCommand),
    /// Load the six-module demonstration catalog.
    SeedSample,
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Translation completeness per language.
    Translations,
}

#[derive(Subcommand)]
enum UserCommand {
    /// Add an account; the password is read from SAPHIR_PASSWORD or stdin.
    Add {
        login: String,
        #[arg(long)]
        role: Role,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        locales: Vec<String>,
    },
    List,
    Remove {
        login: String,
    },
}

#[derive(Subcommand)]
enum LanguageCommand {
    Add { code: String, display_name: String },
}

enum Failure {
    /// Exit 1: content was rejected.
    Invalid(Box<ValidationReport>),
    /// Exit 2: bad arguments or an unusable repository.
    Usage(String),
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        match e.report() {
            Some(report) => Failure::Invalid(Box::new(report.clone())),
            None => Failure::Usage(e.to_string()),
        }
    }
}

struct Output {
    json: String,
    text: String,
}

fn output<T: Serialize + ?Sized>(value: &T, text: impl Into<String>) -> Output {
    Output {
        json: canonical_string(value),
        text: text.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            emit(format, &out);
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(report)) => {
            emit(format, &output(&*report, report.to_string()));
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("edupack: {message}");
            ExitCode::from(2)
        }
    }
}

fn emit(format: Format, out: &Output) {
    match format {
        Format::Json => print!("{}", out.json),
        Format::Text => println!("{}", out.text.trim_end()),
    }
}

fn data_dir(cli: &Option<PathBuf>) -> Result<&Path, Failure> {
    cli.as_deref()
        .ok_or_else(|| Failure::Usage("no repository given (use --data-dir or SAPHIR_DATA_DIR)".into()))
}

fn open_writable(dir: &Option<PathBuf>) -> Result<Repository, Failure> {
    let dir = data_dir(dir)?;
    if !Repository::is_initialized(dir) {
        return Err(Failure::Usage(format!(
            "{} is not a repository (run init first)",
            dir.display()
        )));
    }
    Ok(Repository::open(dir)?)
}

fn open_read_only(dir: &Option<PathBuf>) -> Result<Repository, Failure> {
    Ok(Repository::open_read_only(data_dir(dir)?)?)
}

fn parse_locales(raw: &[String]) -> Result<BTreeSet<LanguageCode>, Failure> {
    raw.iter()
        .map(|c| LanguageCode::parse(c.trim()).map_err(|e| Failure::Usage(e.to_string())))
        .collect()
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Init { dir } => {
            if Repository::is_initialized(&dir) {
                return Err(Failure::Usage(format!("{} already holds a repository", dir.display())));
            }
            Repository::open(&dir)?;
            let path = dir.display().to_string();
            Ok(output(&serde_path(&path), format!("initialized {path}")))
        }
        Command::Serve { bind } => {
            let dir = data_dir(&cli.data_dir)?.to_path_buf();
            if !Repository::is_initialized(&dir) {
                return Err(Failure::Usage(format!(
                    "{} is not a repository (run init first)",
                    dir.display()
                )));
            }
            let mut config = ServerConfig::from_vars(|key| match key {
                "SAPHIR_DATA_DIR" => Some(dir.display().to_string()),
                other => std::env::var(other).ok(),
            })
            .map_err(|e| Failure::Usage(e.0))?;
            if let Some(bind) = bind {
                config.bind = bind;
            }
            eprintln!("edupack: serving {} on http://{}", dir.display(), config.bind);
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            runtime
                .block_on(edupack_server::serve(config))
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(output(&(), "stopped"))
        }
        Command::Validate { module } => {
            let repo = open_read_only(&cli.data_dir)?;
            let snap = repo.snapshot();
            let report = match module {
                Some(id) => {
                    let id = ModuleId::new(id);
                    let record = snap
                        .module(&id)
                        .ok_or_else(|| Failure::Usage(format!("unknown module {id}")))?;
                    snap.check_module(&record.descriptor)
                }
                None => validate_pack(&snap.to_pack(None)),
            };
            if !report.is_valid {
                return Err(Failure::Invalid(Box::new(report)));
            }
            Ok(output(&report, report.to_string()))
        }
        Command::Export { out, langs } => {
            let repo = open_read_only(&cli.data_dir)?;
            let wanted = if langs.is_empty() {
                None
            } else {
                Some(parse_locales(&langs)?)
            };
            let bytes = repo.export_pack(wanted.as_ref());
            std::fs::write(&out, &bytes).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
            let stats = repo.pack_stats();
            let text = format!(
                "wrote {} ({} bytes, {} modules)",
                out.display(),
                bytes.len(),
                stats.module_count
            );
            Ok(output(&stats, text))
        }
        Command::Import { pack } => {
            let bytes = std::fs::read(&pack).map_err(|e| Failure::Usage(format!("{}: {e}", pack.display())))?;
            let repo = open_writable(&cli.data_dir)?;
            let report = repo.import_pack(&bytes)?;
            let text = format!(
                "created {}, updated {}, unchanged {}, languages added {}, assets added {}",
                report.created, report.updated, report.skipped, report.languages_added, report.assets_added
            );
            Ok(output(&report, text))
        }
        Command::Report(ReportCommand::Translations) => {
            let repo = open_read_only(&cli.data_dir)?;
            let report = repo.completeness_report();
            let mut text = String::new();
            for l in &report.locales {
                let c = &l.counts;
                let _ = writeln!(
                    text,
                    "{:<8} {:>5.1}%  complete {} draft {} stale {} missing {}",
                    l.locale.as_str(),
                    l.coverage * 100.0,
                    c.complete,
                    c.draft,
                    c.stale,
                    c.missing
                );
            }
            for a in &report.advisories {
                let _ = writeln!(text, "note: {}: {}", a.module_id, a.message);
            }
            Ok(output(&report, text))
        }
        Command::Stats => {
            let repo = open_read_only(&cli.data_dir)?;
            let stats = repo.pack_stats();
            let mut text = format!(
                "modules: {}\nresources: {}\nlanguages: {}\ncategories: {}\n",
                stats.module_count,
                stats.resource_count,
                stats.language_count,
                stats.per_category.len()
            );
            for (category, count) in &stats.per_category {
                let _ = writeln!(text, "  {category}: {count}");
            }
            Ok(output(&stats, text))
        }
        Command::User(UserCommand::Add { login, role, locales }) => {
            let grants = parse_locales(&locales)?;
            let repo = open_writable(&cli.data_dir)?;
            let password = read_password()?;
            let identity = repo.create_user(&login, &password, role, grants)?;
            let text = format!("added {} ({})", identity.login, identity.role);
            Ok(output(&identity, text))
        }
        Command::User(UserCommand::List) => {
            let repo = open_read_only(&cli.data_dir)?;
            let users = repo.list_users();
            let mut text = String::new();
            for u in &users {
                let grants: Vec<&str> = u.locale_grants.iter().map(LanguageCode::as_str).collect();
                let _ = writeln!(text, "{} {} {}", u.login, u.role, grants.join(","));
            }
            Ok(output(&users, text))
        }
        Command::User(UserCommand::Remove { login }) => {
            let repo = open_writable(&cli.data_dir)?;
            repo.delete_user(&login)?;
            Ok(output(&login, format!("removed {login}")))
        }
        Command::Language(LanguageCommand::Add { code, display_name }) => {
            let repo = open_writable(&cli.data_dir)?;
            let language = repo.add_language(&code, &display_name)?;
            Ok(output(&language, format!("registered {}", language.code)))
        }
        Command::SeedSample => {
            let repo = open_writable(&cli.data_dir)?;
            let summary = repo.seed_sample()?;
            let text = format!(
                "seeded {} modules, {} resources, {} languages, {} translations",
                summary.modules, summary.resources, summary.languages, summary.variants
            );
            Ok(output(&summary, text))
        }
    }
}

#[derive(Serialize)]
struct Initialized<'a> {
    path: &'a str,
}

fn serde_path(path: &str) -> Initialized<'_> {
    Initialized { path }
}

fn read_password() -> Result<String, Failure> {
    if let Ok(password) = std::env::var(PASSWORD_VAR) {
        return Ok(password);
    }
    let mut line = String::new();
    io::stdin()
        .lock()
        .read_line(&mut line)
        .map_err(|e| Failure::Usage(format!("reading password: {e}")))?;
    Ok(line.trim_end_matches(['\r', '\n']).to_owned())
}
