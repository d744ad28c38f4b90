//! Fixed-t concavity implies midconcavity, and the link-by-link measurement
//! of the t-to-m chain.
//!
//! Run with `cargo run --example kuhn_and_chain`.

use harmonic_svf::harmonic::Domain;
use harmonic_svf::svf::{make_family, FamilyKind};
use harmonic_svf::verifier::{check_chain_t_to_m, check_kuhn, CheckConfig};

pub fn main() {
    let domain = Domain::closed(0.5, 8.0).unwrap();
    let sym = make_family(FamilyKind::Symmetric, "1/x^2", domain).unwrap();
    let one = make_family(FamilyKind::Box, "1", domain).unwrap();
    let id = make_family(FamilyKind::Box, "x", domain).unwrap();

    for (f, cfg) in [
        (&sym, CheckConfig::new(1.0).with_c(1.0).with_t(0.3)),
        (&one, CheckConfig::new(0.5).with_t(0.3)),
    ] {
        let r = check_kuhn(f, &cfg).unwrap();
        println!(
            "kuhn on {} (m={}, c={}): {}",
            f.label(),
            cfg.m,
            cfg.c,
            r.verdict
        );
        for l in &r.links {
            println!("  {:<11} {}", l.name, l.verdict);
        }
        println!("  {}", r.note.unwrap_or_default());
    }

    let r = check_chain_t_to_m(&id, &CheckConfig::new(0.5).with_t(0.3)).unwrap();
    println!("chain on {} (m=0.5, t=0.3): {}", id.label(), r.verdict);
    for l in &r.links {
        let at = l
            .witness
            .as_ref()
            .map(|w| format!(" at x={:.3} y={:.3}", w.x, w.y))
            .unwrap_or_default();
        println!(
            "  {:<4} {} margin {:+.3e}{at}",
            l.name,
            l.verdict,
            l.margin.unwrap_or(f64::NAN)
        );
    }
}
