use std::fs;
use std::process::ExitCode;

use clap::Parser;
use dirimul_cli::commands::summary_table;
use dirimul_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = if cli.global.pretty {
                serde_json::to_string_pretty(&out.json)
            } else {
                serde_json::to_string(&out.json)
            };
            println!("{}", text.expect("JSON values always serialize"));
            if cli.global.pretty {
                eprint!("{}", summary_table(&out.json));
            }
            if let (Some(path), Some(body)) = (&cli.global.csv, &out.csv) {
                if let Err(e) = fs::write(path, body) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            println!("{}", serde_json::json!({ "error": format!("{e:#}") }));
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
