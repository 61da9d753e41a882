mod config;
mod render;
mod run;

use std::fs;
use std::process::ExitCode;

use clap::Parser;

use config::{Config, Format};

fn main() -> ExitCode {
    let cfg = match Config::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { run::EXIT_USAGE } else { run::EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let report = run::run(&cfg);
    let body = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("valid JSON") + "\n",
        Format::Text => render::text(&report.json),
    };
    let written = match &cfg.report {
        Some(path) => fs::write(path, &body).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("shiftq: cannot write report: {msg}");
        return ExitCode::from(run::EXIT_USAGE as u8);
    }
    if report.exit != run::EXIT_PASS {
        if let Some(f) = report.json.get("failure").or_else(|| report.json.pointer("/error/message")) {
            eprintln!("shiftq {}: {}", cfg.command.name(), f.as_str().unwrap_or_default());
        }
    }
    ExitCode::from(report.exit as u8)
}
