use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qhydro::scenario::{
    catalog, catalog_entry, emit_scenario, parse_scenario, run_scenario, RunOptions, ScenarioConfig, EXIT_USAGE,
};

#[derive(Parser)]
#[command(name = "qhydro", version, about = "Quantum hydrodynamics scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a built-in scenario by name.
    Run {
        scenario: String,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Comma-separated checks whose failure sets exit status 3.
        #[arg(long, value_delimiter = ',')]
        required_checks: Option<Vec<String>>,
    },
    /// List built-in scenarios.
    List,
    /// Parse and validate a scenario file.
    Validate { file: PathBuf },
    /// Print the canonical scenario file of a built-in scenario.
    EmitDefaults { name: String },
}

fn load(target: &str) -> Result<ScenarioConfig, String> {
    let path = Path::new(target);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{target}: {e}"))?;
        return parse_scenario(&text).map_err(|e| format!("{target}: {e}"));
    }
    catalog_entry(target).ok_or_else(|| format!("'{target}' is neither a file nor a built-in scenario"))
}

fn usage_error(msg: String) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for (entry, c) in catalog() {
                println!("{:<26} {:<12} {}", entry.name, c.kind().name(), entry.summary);
            }
            ExitCode::SUCCESS
        }
        Command::EmitDefaults { name } => match catalog_entry(&name) {
            Some(c) => {
                print!("{}", emit_scenario(&c));
                ExitCode::SUCCESS
            }
            None => usage_error(format!("no built-in scenario named '{name}'")),
        },
        Command::Validate { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return usage_error(format!("{}: {e}", file.display())),
            };
            match parse_scenario(&text) {
                Ok(c) => {
                    println!("{}: ok ({} scenario '{}')", file.display(), c.kind().name(), c.name);
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(format!("{}: {e}", file.display())),
            }
        }
        Command::Run { scenario, out_dir, threads, required_checks } => {
            let config = match load(&scenario) {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            if let Some(req) = &required_checks {
                if let Some(bad) = req.iter().find(|r| !config.kind().checks().contains(&r.as_str())) {
                    return usage_error(format!(
                        "unknown check '{bad}' for {} runs (known: {})",
                        config.kind().name(),
                        config.kind().checks().join(", ")
                    ));
                }
            }
            if threads == Some(0) {
                return usage_error("--threads must be at least 1".into());
            }
            let art = run_scenario(&config, &RunOptions { out_dir, threads, required_checks });
            let m = &art.manifest;
            for s in &m.stages {
                let msg = s.message.as_deref().map(|x| format!(": {x}")).unwrap_or_default();
                println!("stage {:<13} {:?}{msg}", s.name, s.status);
            }
            for c in &m.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                let req = if c.required { " (required)" } else { "" };
                println!("check {:<17} {tag}{req}  {}", c.name, c.detail);
            }
            for w in &m.warnings {
                println!("warning: {w}");
            }
            println!("wrote {} files to {} in {:.2} s", m.files.len(), art.out_dir.display(), m.wall_time_s);
            ExitCode::from(art.exit_code() as u8)
        }
    }
}
