//! Run every verification suite and print the worst residual per check.

use orbita::verify::{run_all, VerifyConfig, DEFAULT_SEED};

fn main() -> orbita::Result<()> {
    for r in run_all(&VerifyConfig { seed: DEFAULT_SEED })? {
        println!("{} ({:.2}s)", r.suite, r.elapsed_s);
        for c in &r.checks {
            let tag = if c.passed { "ok" } else { "FAIL" };
            println!("  {:<26} n={:<7} max={:.3e} tol={:.0e} {tag}", c.name, c.count, c.max_residual, c.tolerance);
        }
    }
    Ok(())
}
