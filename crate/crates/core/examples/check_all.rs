//! Runs the property suites for S₃ and prints a one-line summary per suite.

use heckex::bundle::{Setting, TrivialLine};
use heckex::check::{self, suite_rng};
use heckex::perm::PermPair;
use heckex::random::Pools;

fn main() {
    let s = Setting::new(PermPair::s3(), TrivialLine);
    let pools = Pools::finite(&s).unwrap();
    let mut rng = suite_rng(0, 1);
    let suites = vec![
        check::pair_suite(&s.pair, 100, &mut rng),
        check::hecke_suite(&s.pair, &pools.dcosets, 50, &mut rng),
        check::crossed_suite(&s, &pools, 20, 50, &mut rng),
        check::regular_suite(&s, &pools, 10, &mut rng),
        check::lln_suite(&s, &pools, 20, &mut rng),
        check::svn_suite(&s, &mut rng),
    ];
    for suite in &suites {
        let checks: usize = suite.properties.iter().map(|p| p.checked).sum();
        let failed = suite.properties.iter().filter(|p| !p.passed()).count();
        println!("{:<8} {:>3} properties {:>6} checks {:>2} failed  {}", suite.name, suite.properties.len(), checks, failed, suite.instance);
    }
}
