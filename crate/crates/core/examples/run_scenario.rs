//! Run a catalog scenario or a scenario file and report checks and outputs.
//!
//! `cargo run --example run_scenario -- oracle-two-gaussians /tmp/out`

use qhydro::scenario::{catalog, catalog_entry, parse_scenario, run_scenario, RunOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let Some(target) = args.next() else {
        for (entry, _) in catalog() {
            println!("{}", entry.name);
        }
        return Ok(());
    };
    let config = match catalog_entry(&target) {
        Some(c) => c,
        None => parse_scenario(&std::fs::read_to_string(&target)?)?,
    };
    let options = RunOptions { out_dir: args.next().map(Into::into), ..Default::default() };
    let art = run_scenario(&config, &options);

    for c in &art.manifest.checks {
        println!("{:<4} {:<20} {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    for (k, v) in &art.manifest.metrics {
        println!("{k} = {v:.6e}");
    }
    println!("{} files in {}", art.files.len(), art.out_dir.display());
    std::process::exit(art.exit_code());
}
