//! Drives the command-line front end in-process: a `key = value` config
//! file, a flag override, and JSON output parsed back.
//!
//! ```text
//! cargo run --example config_and_cli
//! ```

use ptdirac::cli::report::AnalyticReport;
use ptdirac::cli::run;
use std::ffi::OsString;

fn main() {
    let dir = std::env::temp_dir().join("ptdirac-example");
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("broken.cfg");
    std::fs::write(&config, "# past the transition\nlambda = 1.8\nformat = json\n").unwrap();

    for extra in [&[][..], &["--lambda", "0.5"]] {
        let args: Vec<OsString> = ["ptdirac", "analytic"].iter().chain(extra).map(OsString::from).collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args, Some(config.clone()), &mut out, &mut err);
        let report: AnalyticReport = serde_json::from_slice(&out).unwrap();
        println!(
            "flags {extra:?}: exit {code}, lambda {}, branch I {}",
            report.params.lambda, report.branches[0].verdict
        );
    }
}
