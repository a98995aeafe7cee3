//! WebAssembly bindings for the browser demo. Each operation takes a TOML
//! spec in the same format as the `lgcoh` command line and returns the plain
//! text report, or a single `error: ...` line.

use std::path::PathBuf;

use lgcoh::cli::report::ReportDocument;
use lgcoh::cli::{run_source, Command, VanEstAction};
use wasm_bindgen::prelude::*;

const INPUT: &str = "browser";

fn render(command: Command, spec: &str) -> String {
    match run_source(&command, INPUT, spec, true) {
        Ok(outcome) => outcome.report.to_plain(),
        Err(e) => format!("error: {e}\n"),
    }
}

fn degree_arg(degree: &str) -> Option<String> {
    let d = degree.trim();
    (!d.is_empty()).then(|| d.to_string())
}

/// Cohomology of a discrete group or finite groupoid. `degree` is `k`,
/// `a..b` or empty for the default range.
#[wasm_bindgen]
pub fn cohomology(spec: &str, degree: &str, truncated: bool) -> String {
    render(Command::Cohomology { spec: PathBuf::new(), degree: degree_arg(degree), truncated }, spec)
}

/// Integrates the `[vanest]` form over the `[group]` and shows the ladder.
#[wasm_bindgen]
pub fn integrate(spec: &str) -> String {
    render(Command::Vanest { action: VanEstAction::Integrate, spec: PathBuf::new(), trace: true }, spec)
}

/// Arithmetic of meromorphic units from a `[divisor]` table.
#[wasm_bindgen]
pub fn divisor(spec: &str, order: u32) -> String {
    render(Command::Divisor { spec: PathBuf::new(), order: (order > 0).then_some(order as usize) }, spec)
}

/// Tool name and version shown in the page footer.
#[wasm_bindgen]
pub fn version() -> String {
    ReportDocument::new("", "").tool
}
