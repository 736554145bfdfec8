//! Command-line front end: job specs, report envelopes and the `hs` driver.

pub mod args;
pub mod complex;
pub mod exec;
pub mod job;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::args::{apply_global, to_job, Cli, JobSource};
use crate::job::{Format, JobSpec};
use crate::report::{Outcome, ReportEnvelope};

/// Runs the tool on `argv` and returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Outcome::UsageError.exit_code() } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (mut job, base) = match to_job(cli.command) {
        Ok(JobSource::Flags(job)) => (job, None),
        Ok(JobSource::File(path)) => match read_job(&path) {
            Ok(job) => (job, path.parent().map(Path::to_path_buf)),
            Err(m) => return usage_exit(&m),
        },
        Err(m) => return usage_exit(&m),
    };
    apply_global(&mut job, &cli.global);
    let output = job.output.clone();
    let report = exec::run(job, base.as_deref());
    if let Err(e) = emit(&report, output.path.as_deref().map(Path::new), output.format) {
        return usage_exit(&format!("cannot write report: {e}"));
    }
    if report.exit_code != 0 {
        let why = report.diagnostic.as_deref().unwrap_or("no details");
        eprintln!("hs: {}: {}", verdict_name(report.verdict), why.replace('\n', " "));
    }
    report.exit_code
}

fn usage_exit(message: &str) -> i32 {
    eprintln!("hs: usage-error: {}", message.replace('\n', " "));
    Outcome::UsageError.exit_code()
}

fn verdict_name(v: Outcome) -> String {
    serde_json::to_value(v).ok().and_then(|s| s.as_str().map(str::to_string)).unwrap_or_default()
}

fn read_job(path: &Path) -> Result<JobSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    JobSpec::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes the report to stdout or to `path`. A CSV file always gets the
/// full JSON report beside it, with the extension replaced by `json`.
pub fn emit(report: &ReportEnvelope, path: Option<&Path>, format: Format) -> std::io::Result<()> {
    let json = report.to_json();
    let body = match format {
        Format::Json => json.clone(),
        Format::Csv => report.table.to_csv().map_err(std::io::Error::other)?,
    };
    match path {
        None => std::io::stdout().lock().write_all(body.as_bytes()),
        Some(p) => {
            std::fs::write(p, &body)?;
            if format == Format::Csv {
                let companion = companion_path(p);
                if companion != p {
                    std::fs::write(companion, &json)?;
                }
            }
            Ok(())
        }
    }
}

pub fn companion_path(p: &Path) -> PathBuf {
    p.with_extension("json")
}
