//! Runs the same pipeline as `netsteer steer` on every bundled configuration.
//!
//! ```text
//! cargo run --example config_pipeline [OUT_DIR]
//! ```

use std::path::PathBuf;

use netsteer::cli::{run_steer, RunOptions};

fn main() {
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("netsteer-examples"), PathBuf::from);
    let mut paths: Vec<_> = std::fs::read_dir(&configs)
        .expect("configs directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();

    for path in paths {
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let mut opts = RunOptions::new(&path, out.join(&name));
        opts.quadrature_check = true;
        match run_steer(&opts) {
            Ok((report, result)) => {
                let m = report.m.map_or("-".to_string(), |m| format!("{m:.4}"));
                let steer = result.map_or("skipped".to_string(), |r| {
                    format!("{} iterations, error {:.2e}", r.iterations, r.terminal_error_simulated)
                });
                println!(
                    "{name:<18} rank {}/{}  M {m:<10} theorem {:<5}  {steer}",
                    report.linear.kalman_rank, report.dimensions.n, report.controllable_by_theorem
                );
            }
            Err(e) => println!("{name:<18} error (exit {}): {e}", e.exit_code()),
        }
    }
    println!("outputs in {}", out.display());
}
