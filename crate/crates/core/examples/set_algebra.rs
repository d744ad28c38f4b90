//! Minkowski arithmetic on intervals, unions and boxes, signed inclusion
//! margins, Hausdorff distance and the cancellation law.
//!
//! Run with `cargo run --example set_algebra`.

use harmonic_svf::set_algebra::{
    is_subset_eps, radstrom_check, Interval, IntervalBox, IntervalUnion, SetValue,
};

pub fn main() {
    let a = Interval::new(1.0, 2.0).unwrap();
    let b = Interval::new(-3.0, 0.5).unwrap();
    println!("A = {a}, B = {b}");
    println!("A + B = {}", a.mink_sum(&b));
    println!("-2 A  = {}", a.scale(-2.0));
    println!("A * B = {}", a.mink_product(&b));
    println!("A + 0.25 B̄ = {}", a.inflate(0.25).unwrap());
    println!("d_H(A, B) = {}", a.hausdorff(&b));

    let inner = SetValue::Interval(Interval::new(0.0, 1.0).unwrap());
    let outer = SetValue::Interval(Interval::new(0.0, 0.75).unwrap());
    let inc = is_subset_eps(&inner, &outer, 0.0).unwrap();
    println!("[0, 1] ⊆ [0, 0.75]? {} (margin {})", inc.holds, inc.margin);
    let inc = is_subset_eps(&inner, &outer, 0.3).unwrap();
    println!(
        "[0, 1] ⊆ [0, 0.75] + 0.3 B̄? {} (margin {})",
        inc.holds, inc.margin
    );

    let u = IntervalUnion::new(vec![
        Interval::new(0.0, 1.0).unwrap(),
        Interval::new(3.0, 4.0).unwrap(),
    ])
    .unwrap();
    let gap = SetValue::Interval(Interval::new(0.5, 3.5).unwrap());
    println!(
        "{} ⊆ {}? excursion {}",
        gap,
        u,
        gap.excursion(&SetValue::Union(u.clone())).unwrap()
    );
    println!("U + U = {}", u.mink_sum(&u));

    let bx = IntervalBox::new(vec![a, b]).unwrap();
    println!("box {} inflated by 1: {}", bx, bx.inflate(1.0).unwrap());

    let r = radstrom_check(&a, &Interval::new(0.0, 3.0).unwrap(), &b);
    println!(
        "cancellation: premise {}, conclusion {}, consistent {}",
        r.premise, r.conclusion, r.consistent
    );
}
