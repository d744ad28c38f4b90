//! Grid checks of harmonic m-concavity and midconcavity, with the
//! real-valued oracle that predicts them.
//!
//! Run with `cargo run --example m_concavity`.

use harmonic_svf::expr::Expr;
use harmonic_svf::harmonic::{Domain, GridSpec};
use harmonic_svf::svf::{make_family, parse_svf_spec, real_am_convex_check, FamilyKind};
use harmonic_svf::verifier::{check_m_concave, check_m_midconcave, CheckConfig};

pub fn main() {
    let domain = Domain::closed(0.5, 8.0).unwrap();
    let id = make_family(FamilyKind::Box, "x", domain).unwrap();
    let one = parse_svf_spec(r#"kind=box expr="1" domain=[0.5,8]"#, None).unwrap();

    for m in [0.25, 0.5, 1.0] {
        let cfg = CheckConfig::new(m);
        for f in [&id, &one] {
            let full = check_m_concave(f, &cfg).unwrap();
            let mid = check_m_midconcave(f, &cfg).unwrap();
            println!(
                "{:<8} m={m:<5} m-concave {} (worst {:+.3e}), m-midconcave {}",
                f.label(),
                full.verdict,
                full.worst_margin.unwrap(),
                mid.verdict
            );
            if let Some(w) = full.witness.as_ref().filter(|_| !full.is_pass()) {
                println!(
                    "    witness x={:.4} y={:.4} t={}: {}",
                    w.x, w.y, w.t, w.detail
                );
            }
        }
        let oracle = real_am_convex_check(
            &Expr::parse("x").unwrap(),
            1.0,
            m,
            &domain,
            GridSpec::default(),
            1e-9,
        )
        .unwrap();
        println!(
            "    upper endpoint x satisfies the weighted HM-AM bound: {}",
            oracle.verdict
        );
    }
}
