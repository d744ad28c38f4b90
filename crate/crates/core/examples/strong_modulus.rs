//! Strong harmonic m-concavity: the modulus c and the equality family
//! [-1/x², 1/x²].
//!
//! Run with `cargo run --example strong_modulus`.

use harmonic_svf::expr::Expr;
use harmonic_svf::harmonic::{Domain, GridSpec};
use harmonic_svf::svf::{make_family, real_strong_convex_check, FamilyKind};
use harmonic_svf::verifier::{
    check_strong_m_concave, check_strong_m_midconcave, check_strong_m_t_concave, CheckConfig,
};

pub fn main() {
    let domain = Domain::closed(0.5, 8.0).unwrap();
    let f = make_family(FamilyKind::Symmetric, "1/x^2", domain).unwrap();

    println!("{} with m = 1:", f.label());
    for c in [0.0, 0.5, 1.0, 1.001, 2.0] {
        let r = check_strong_m_concave(&f, &CheckConfig::new(1.0).with_c(c)).unwrap();
        println!(
            "  c = {c:<6} {} worst margin {:+.3e}",
            r.verdict,
            r.worst_margin.unwrap()
        );
    }

    let cfg = CheckConfig::new(1.0).with_c(1.0).with_t(0.3);
    println!(
        "  fixed t = 0.3, c = 1: {}",
        check_strong_m_t_concave(&f, &cfg).unwrap().verdict
    );
    println!(
        "  midpoint, c = 1:      {}",
        check_strong_m_midconcave(&f, &cfg).unwrap().verdict
    );

    let upper = Expr::parse("1/x^2").unwrap();
    for c in [1.0, 1.5] {
        let r = real_strong_convex_check(&upper, c, &domain, GridSpec::default(), 1e-9).unwrap();
        println!(
            "  1/x^2 strongly harmonically convex with modulus {c}: {}",
            r.verdict
        );
    }
}
