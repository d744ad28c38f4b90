//! Closure of harmonic m-concavity under sum, scaling, product, union and
//! Cartesian product.
//!
//! Run with `cargo run --example closure_suite`.

use harmonic_svf::harmonic::Domain;
use harmonic_svf::svf::{make_family, FamilyKind, SetValuedFunction};
use harmonic_svf::verifier::{check_m_concave, closure_suite, CheckConfig};

pub fn main() {
    let domain = Domain::closed(0.5, 8.0).unwrap();
    let f = make_family(FamilyKind::Box, "x", domain).unwrap();
    let g = make_family(FamilyKind::Box, "0", domain).unwrap();

    for m in [0.5, 1.0] {
        let r = closure_suite(&f, &g, &CheckConfig::new(m)).unwrap();
        println!(
            "closure of {} and {} at m = {m}: {}",
            f.label(),
            g.label(),
            r.verdict
        );
        for l in &r.links {
            let tag = if l.informational {
                " (informational)"
            } else {
                ""
            };
            let detail = l
                .detail
                .as_deref()
                .map(|d| format!(": {d}"))
                .unwrap_or_default();
            println!("  {:<10} {}{tag}{detail}", l.name, l.verdict);
        }
    }

    let fg = SetValuedFunction::cross(&f, &g).unwrap();
    println!("{} at x = 2: {}", fg.label(), fg.eval(2.0).unwrap());
    println!(
        "its m-concavity at m = 1: {}",
        check_m_concave(&fg, &CheckConfig::new(1.0))
            .unwrap()
            .verdict
    );
}
