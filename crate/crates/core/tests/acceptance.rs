//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so that every line is printed even when all criteria pass.

use singular_em::selfcheck::{run_check, SelfCheckOptions, CHECK_COUNT};

const CRITERIA: [&str; CHECK_COUNT] = [
    "Coulomb limit of the Liénard–Wiechert potential",
    "On-axis B of a circular loop",
    "Single-turn helix degenerates to the loop",
    "Long solenoid interior and exterior field",
    "Plate Green function vs k-space quadrature",
    "Charged wire between grounded plates",
    "Ampère circuital law around the loop wire",
    "Gauge and Lorenz residuals",
    "Boosted Coulomb potential at v = c/2",
    "Quadrature error estimates are honest",
];

fn main() {
    let opts = SelfCheckOptions::default();
    let mut failed = 0;
    for (i, criterion) in CRITERIA.iter().enumerate() {
        let out = run_check(i + 1, &opts).expect("every criterion has a check");
        println!(
            "acceptance {:2} {} — {criterion}: {} ({:.3?})",
            i + 1,
            if out.passed { "PASS" } else { "FAIL" },
            out.detail,
            out.elapsed
        );
        if !out.passed {
            failed += 1;
        }
    }
    println!("acceptance: {}/{} criteria passed", CHECK_COUNT - failed, CHECK_COUNT);
    if failed > 0 {
        std::process::exit(1);
    }
}
