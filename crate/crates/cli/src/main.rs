use std::io::Write;

use clap::Parser;
use weier_cli::{render_human, render_json, run, Cli};

fn main() {
    let cli = Cli::parse();
    let (report, code) = run(&cli);
    let text = if cli.command.curve_args().json {
        render_json(&report) + "\n"
    } else {
        render_human(&report)
    };
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    std::process::exit(code);
}
