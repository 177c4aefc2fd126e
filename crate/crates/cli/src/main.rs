use clap::Parser;
use localcut_cli::{exit_code, run, Cli};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = report.render();
            if let Some(path) = &cli.global.json_out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!("{}", report.summary);
            // A closed pipe is not worth a panic.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
