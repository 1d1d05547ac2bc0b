//! Runs the ten acceptance criteria and prints one line per criterion.
//!
//! Criterion 9 is expected to fail: its literal clause is false on
//! `grid-10x10/dihedral`, where the diagonal reflection fixes the two
//! corners at distance 18 but no hyperplane. The subgroup form, the
//! pigeonhole inequality and the Ram(3) check must still hold.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the certificate golden files.

use std::path::PathBuf;
use std::process::ExitCode;

use cubecx::suite::{self, SuiteConfig};

const EXPECTED_FAILURES: [u32; 1] = [9];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check_golden() -> Result<(), String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, outcome) in suite::wpd_cases().map_err(|e| e.to_string())? {
        let value = serde_json::to_value(&outcome).unwrap();
        let text = serde_json::to_string_pretty(&value).unwrap() + "\n";
        let path = golden_dir().join(format!("wpd-{name}.json"));
        if update {
            std::fs::write(&path, &text).map_err(|e| e.to_string())?;
            continue;
        }
        let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if want != text {
            return Err(format!("{name} differs from {}", path.display()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let report = match suite::run(&cfg, &[]) {
        Ok(r) => r,
        Err(e) => {
            println!("suite aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!(
        "corpus: {} complexes, {} actions, seed {}",
        report.corpus_size, report.action_corpus_size, cfg.seed
    );
    let mut ok = true;
    for c in &report.criteria {
        let golden = if c.id == 10 { check_golden() } else { Ok(()) };
        let passed = c.passed && golden.is_ok();
        println!(
            "criterion {:>2} {} {}: {} checks, {:.1}s; {}",
            c.id,
            if passed { "PASS" } else { "FAIL" },
            c.name,
            c.checks,
            c.seconds,
            c.detail
        );
        if let Err(e) = golden {
            println!("             golden: {e}");
        }
        let expected = !EXPECTED_FAILURES.contains(&c.id);
        if passed != expected {
            ok = false;
        }
    }
    let limit = |id: u32, secs: f64| {
        let c = report.criteria.iter().find(|c| c.id == id).unwrap();
        if c.seconds >= secs {
            println!("criterion {id} took {:.1}s, over the {secs}s target", c.seconds);
            return false;
        }
        true
    };
    ok &= limit(1, 60.0) & limit(2, 120.0);
    let nine = &report.criteria[8];
    let only_literal = nine.detail.contains("subgroup form 0 failures")
        && nine.detail.contains("pigeonhole 0 failures")
        && nine.detail.contains("confirmed (");
    if !only_literal {
        println!("criterion 9 failed beyond its literal clause");
        ok = false;
    }
    if ok {
        println!("acceptance: all criteria as expected (criterion 9 fails on its literal clause only)");
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
