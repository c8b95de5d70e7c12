//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero when
//! any criterion fails.

use harness::battery::{run_criterion, BatteryOptions, CRITERIA};
use harness::pool::{parallel_map, thread_cap};

fn main() {
    let opts = BatteryOptions::default();
    let outcomes = parallel_map(&CRITERIA, thread_cap(), |&id| run_criterion(id, &opts));
    let mut failed = 0;
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} criterion {:>2}: {} [{:.2} s] {}",
            o.id, o.title, o.seconds, o.detail
        );
        if !o.passed {
            failed += 1;
            for r in o.reports.iter().filter(|r| !r.holds()) {
                println!(
                    "    {} ({}): lhs {:e} rhs {:e} tol {:e} {}",
                    r.name, r.engine, r.lhs, r.rhs, r.tolerance, r.verdict
                );
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
