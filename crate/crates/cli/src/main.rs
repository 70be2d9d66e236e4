mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{read_run_record, run, write_run_record, RunContext, RunRecord};

fn execute(cli: Cli) -> anyhow::Result<()> {
    let cwd = std::env::current_dir()?;
    let mut record = match cli.command {
        Command::Replay(mut r) => {
            r.run = cwd.join(&r.run);
            let mut rec = read_run_record(&r.run)?;
            if let Some(out) = r.out {
                rec.command.set_out_dir(cwd.join(out));
            }
            if cli.jobs.is_some() {
                rec.jobs = cli.jobs;
            }
            rec
        }
        mut command => {
            command.absolutize(&cwd);
            RunRecord {
                tool: "docsynth".to_string(),
                version: docsynth::VERSION.to_string(),
                jobs: cli.jobs,
                font_map: cli.font_map.map(|p| cwd.join(p)),
                command,
            }
        }
    };
    if let Some(n) = record.jobs {
        if n == 0 {
            anyhow::bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    record.version = docsynth::VERSION.to_string();
    log::info!("running {}", record.command.name());
    let ctx = RunContext {
        font_map: record.font_map.clone(),
    };
    run(&record.command, &ctx)?;
    write_run_record(&record)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
