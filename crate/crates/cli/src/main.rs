mod args;
mod commands;
mod manifest;
mod output;

use std::ffi::OsString;
use std::path::Path;
use std::process::ExitCode;

use chrono::{SecondsFormat, Utc};
use clap::Parser;

use args::{Cli, Command};
use commands::CliError;
use manifest::{digest_file, manifest_path, RunManifest};

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Count { .. } => "count",
        Command::Lis { .. } => "lis",
        Command::Sample { .. } => "sample",
        Command::TvExact { .. } => "tv-exact",
        Command::TvMc { .. } => "tv-mc",
        Command::TvSweep { .. } => "tv-sweep",
        Command::CardExp { .. } => "card-exp",
        Command::ThatMoments { .. } => "that-moments",
        Command::Scaling { .. } => "scaling",
        Command::LisShift { .. } => "lis-shift",
        Command::ComplementLis { .. } => "complement-lis",
        Command::ZeroSweep { .. } => "zero-sweep",
        Command::Pmf { .. } => "pmf",
        Command::Lemma5 { .. } => "lemma5",
        Command::Asymptotics { .. } => "asymptotics",
        Command::Replay { .. } => "replay",
    }
}

fn execute(cli: Cli, argv: Vec<String>) -> Result<Option<RunManifest>, CliError> {
    let threads = cli
        .global
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let started_at = Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true);
    let name = command_name(&cli.command);
    let out = incseq::exec::with_threads(threads, || commands::run(&cli.command, &cli.global))?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let rendered = out.render(cli.global.format, name, cli.global.seed);

    let Some(path) = &cli.global.out else {
        print!("{rendered}");
        return Ok(None);
    };
    std::fs::write(path, &rendered)?;
    let mut outputs = vec![digest_file(path)?];
    if let Command::CardExp {
        trial_log: Some(log),
        ..
    } = &cli.command
    {
        outputs.push(digest_file(log)?);
    }
    let manifest = RunManifest {
        command: name.to_string(),
        argv,
        params: out.params,
        master_seed: cli.global.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        started_at,
        finished_at: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
        threads,
        outputs,
    };
    manifest.write(&manifest_path(path))?;
    Ok(Some(manifest))
}

/// Re-parse the recorded argv; `--out` and `--threads` come from the replay call.
fn replay(path: &Path, cli: &Cli) -> Result<(), CliError> {
    let m = RunManifest::read(path)?;
    let mut argv: Vec<String> = strip_flags(&m.argv, &["--out", "--threads"]);
    if let Some(out) = &cli.global.out {
        argv.push("--out".into());
        argv.push(out.to_string_lossy().into_owned());
    }
    if let Some(t) = cli.global.threads {
        argv.push("--threads".into());
        argv.push(t.to_string());
    }
    let full = std::iter::once("incseq".to_string()).chain(argv.iter().cloned());
    let inner =
        Cli::try_parse_from(full).map_err(|e| CliError::Usage(format!("manifest argv: {e}")))?;
    if matches!(inner.command, Command::Replay { .. }) {
        return Err(CliError::Usage("a manifest cannot record a replay".into()));
    }
    let Some(fresh) = execute(inner, argv)? else {
        return Ok(());
    };
    let (Some(old), Some(new)) = (m.outputs.first(), fresh.outputs.first()) else {
        return Ok(());
    };
    if old.sha256 != new.sha256 {
        return Err(CliError::Runtime(format!(
            "replayed output {} differs from the recorded digest {}",
            new.path.display(),
            old.sha256
        )));
    }
    eprintln!(
        "replay: {} matches the recorded sha256 {}",
        new.path.display(),
        new.sha256
    );
    Ok(())
}

/// Drop `--flag value` and `--flag=value` pairs.
fn strip_flags(argv: &[String], flags: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv {
        if skip {
            skip = false;
            continue;
        }
        if flags.contains(&a.as_str()) {
            skip = true;
        } else if !flags.iter().any(|f| a.starts_with(&format!("{f}="))) {
            out.push(a.clone());
        }
    }
    out
}

fn main() -> ExitCode {
    let raw: Vec<OsString> = std::env::args_os().collect();
    let cli = Cli::parse_from(&raw);
    let argv: Vec<String> = raw[1..]
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let result = match &cli.command {
        Command::Replay { manifest } => replay(&manifest.clone(), &cli),
        _ => execute(cli, argv).map(|_| ()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
