//! Writes the level and mass-gap curves as CSV, one file per curve family.
//!
//! ```text
//! cargo run --example sweep_plot_data -- [output_dir]
//! ```

use ptdirac::cli::commands::{sweep, SweepSpec};
use ptdirac::cli::config::RunConfig;
use ptdirac::cli::report::Render;
use ptdirac::params::Vary;
use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(|| PathBuf::from("target/plot-data"), PathBuf::from);
    std::fs::create_dir_all(&dir)?;

    let runs = [
        ("levels_vs_lambda.csv", config(4, 0.5), Vary::Lambda, 0.0, 2.0, false),
        ("levels_vs_b0.csv", config(4, 0.5), Vary::B0, 1.0, 20.0, false),
        ("gap_vs_b0_lambda0.csv", config(1, 0.0), Vary::B0, 1e3, 1e5, true),
        ("gap_vs_b0_lambda05.csv", config(1, 0.5), Vary::B0, 1e3, 1e5, true),
    ];
    for (name, cfg, vary, from, to, log) in runs {
        let spec = SweepSpec { vary, from, to, steps: 400, log, numeric: None };
        let out = sweep(&cfg, &spec).expect("valid grid");
        std::fs::write(dir.join(name), out.csv())?;
        println!("{} ({} rows)", dir.join(name).display(), out.rows.len());
    }
    Ok(())
}

fn config(n_max: usize, lambda: f64) -> RunConfig {
    let mut cfg = RunConfig { n_max, ..RunConfig::default() };
    cfg.params.lambda = lambda;
    cfg
}
