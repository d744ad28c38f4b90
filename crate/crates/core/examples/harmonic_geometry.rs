//! Harmonic m-combinations, dyadic weights, and domain checks.
//!
//! Run with `cargo run --example harmonic_geometry`.

use harmonic_svf::harmonic::{
    harmonic_point, is_harmonically_m_convex_domain, is_starshaped, Domain, DyadicRational,
    GridSpec, DEFAULT_INSET,
};
use harmonic_svf::set_algebra::Interval;

pub fn main() {
    for (x, y, t, m) in [
        (1.0, 3.0, 0.5, 0.5),
        (2.0, 2.0, 0.3, 1.0),
        (4.0, 1.0, 0.0, 0.25),
    ] {
        println!(
            "h_m(x={x}, y={y}, t={t}, m={m}) = {}",
            harmonic_point(x, y, t, m)
        );
    }

    let q = DyadicRational::nearest_interior(1.0 / 3.0, 4).unwrap();
    println!("nearest dyadic to 1/3 at depth 4: {q} = {}", q.value());
    let depth3: Vec<String> = DyadicRational::interior_at_depth(3)
        .map(|q| q.to_string())
        .collect();
    println!("new dyadics at depth 3: {}", depth3.join(", "));

    let grid = GridSpec::default();
    let closed = Domain::closed(1.0, 10.0).unwrap();
    let open = Domain::open_at_zero(10.0, DEFAULT_INSET).unwrap();
    for (d, m) in [(closed, 0.5), (open, 0.5), (closed, 1.0)] {
        let r = is_harmonically_m_convex_domain(&d, m, grid).unwrap();
        println!(
            "{d} harmonically {m}-convex: {} (worst margin {:?})",
            r.verdict, r.worst_margin
        );
    }

    for d in [
        Interval::new(0.0, 5.0).unwrap(),
        Interval::new(1.0, 5.0).unwrap(),
    ] {
        println!("{d} starshaped: {}", is_starshaped(&d, grid).verdict);
    }
}
