//! Seeded random search for counterexamples.
//!
//! Run with `cargo run --example falsify_search`.

use harmonic_svf::harmonic::Domain;
use harmonic_svf::svf::{make_family, FamilyKind};
use harmonic_svf::verifier::{falsify, CheckConfig, Property};

pub fn main() {
    let domain = Domain::closed(0.5, 8.0).unwrap();
    let cfg = CheckConfig::new(0.5).with_budget(1000).with_seed(42);
    for (expr, property) in [
        ("1", Property::MConcave),
        ("1", Property::MMidconcave),
        ("0", Property::MConcave),
        ("x", Property::Dyadic),
    ] {
        let f = make_family(FamilyKind::Box, expr, domain).unwrap();
        let r = falsify(&f, &cfg, property).unwrap();
        print!("{} {property}: {}", f.label(), r.verdict);
        match (&r.witness, r.is_pass()) {
            (Some(w), false) => println!(
                " margin {:.4} at x={:.4} y={:.4} t={:.4}",
                r.worst_margin.unwrap(),
                w.x,
                w.y,
                w.t
            ),
            _ => println!(" ({})", r.note.unwrap_or_default()),
        }
    }
    let again = falsify(
        &make_family(FamilyKind::Box, "1", domain).unwrap(),
        &cfg,
        Property::MConcave,
    )
    .unwrap();
    println!(
        "same seed, same witness: {:?}",
        again.witness.map(|w| (w.x, w.y, w.t))
    );
}
