//! Full analysis of the PROWESS counts: reduced form, least-squares
//! estimate, comparison with the published matrix, and bootstrap errors.
//!
//! cargo run --release --example prowess

use outcome_types::cli::{run, Command, Format, RunSpec};

fn main() {
    let spec = RunSpec::new(Command::Prowess);
    match run(&spec) {
        Ok(report) => print!("{}", report.render(Format::Text)),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
