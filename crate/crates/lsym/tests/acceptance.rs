//! One PASS/FAIL line per acceptance criterion, each within its runtime budget.

use lsym::checks::{run_suite, CheckOptions, Suite};

const CRITERIA: [(usize, &str, Suite, f64); 11] = [
    (1, "structure exactness", Suite::Structure, 5.0),
    (2, "half-determinant identity", Suite::Halfdet, 5.0),
    (3, "representation-ring identities", Suite::Characters, 10.0),
    (4, "Kostant strange formula", Suite::Kostant, 5.0),
    (5, "Casimir shifts", Suite::Casimir, 5.0),
    (6, "orbital quadrature vs closed form", Suite::OrbitalCrosscheck, 120.0),
    (7, "vanishing of the number-operator supertrace", Suite::Vanishing, 60.0),
    (8, "Gaussian time integral", Suite::TimeIntegral, 5.0),
    (9, "Ruelle factorization", Suite::Factorization, 10.0),
    (10, "Laurent constants", Suite::Laurent, 1.0),
    (11, "B-rescaling covariance", Suite::Scaling, 5.0),
];

fn main() {
    let opts = CheckOptions::default();
    let mut failed = Vec::new();
    for (n, title, suite, budget) in CRITERIA {
        let line = match run_suite(suite, &opts) {
            Ok(rep) => {
                let worst = rep.outcomes.iter().map(|o| o.metric).fold(0.0, f64::max);
                let in_budget = rep.seconds < budget;
                let ok = rep.passed && in_budget;
                if !ok {
                    failed.push(n);
                    for o in rep.outcomes.iter().filter(|o| !o.passed) {
                        println!("    failing: {} (metric {:.3e} > {:.0e})", o.name, o.metric, o.tolerance);
                    }
                }
                format!(
                    "criterion {n:>2} {title}: {} [{} checks, worst {worst:.2e}, {:.2}s of {budget}s]",
                    if ok { "PASS" } else { "FAIL" },
                    rep.outcomes.len(),
                    rep.seconds
                )
            }
            Err(e) => {
                failed.push(n);
                format!("criterion {n:>2} {title}: FAIL [error: {e}]")
            }
        };
        println!("{line}");
    }
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", CRITERIA.len());
}
