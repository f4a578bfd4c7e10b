//! Runs a shipped experiment config in-process and prints the CSV.

use thin_korn::config::load_config;
use thin_korn::experiment::{render_csv, run};

fn main() -> thin_korn::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/counterexample_scaling.conf").into());
    let cfg = load_config(path.as_ref())?;
    let out = run(&cfg)?;
    print!("{}", render_csv(&out.rows)?);
    println!("slopes: {:?}", out.summary.slopes);
    println!("passed: {}", out.summary.passed);
    for f in &out.summary.failures {
        println!("failure: {f}");
    }
    Ok(())
}
