//! Inclusions at all dyadic weights up to a depth, and the ε(n) sequence
//! that approximates a non-dyadic weight by dyadic ones.
//!
//! Run with `cargo run --example dyadic_and_bernstein_doetsch`.

use harmonic_svf::harmonic::{Domain, GridSpec};
use harmonic_svf::svf::{make_family, FamilyKind};
use harmonic_svf::verifier::{check_bd_approx, check_dyadic, CheckConfig};

pub fn main() {
    let domain = Domain::closed(0.5, 8.0).unwrap();
    let f = make_family(FamilyKind::Box, "x", domain).unwrap();

    let cfg = CheckConfig::new(0.5)
        .with_grid(GridSpec::new(33, 33, 1).unwrap())
        .with_depth(6);
    let r = check_dyadic(&f, &cfg).unwrap();
    println!(
        "dyadic check on {} (m=0.5, depth 6): {}",
        f.label(),
        r.verdict
    );
    for l in &r.links {
        println!(
            "  {:<4} {} worst {:+.3e}",
            l.name,
            l.verdict,
            l.margin.unwrap()
        );
    }

    let cfg = CheckConfig::new(1.0).with_depth(8);
    for t in [1.0 / 3.0, 0.5] {
        let r = check_bd_approx(&f, &cfg, t).unwrap();
        println!("eps(n) toward t = {t:.4}: {}", r.verdict);
        for p in &r.series {
            println!("  n={} q={:<10} eps={:.4e}", p.n, p.q, p.value);
        }
    }
}
