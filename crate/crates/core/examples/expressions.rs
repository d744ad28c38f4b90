//! The endpoint expression language: parsing, printing, evaluation, errors.
//!
//! Run with `cargo run --example expressions`.

use harmonic_svf::expr::Expr;

pub fn main() {
    for text in ["1/x^2", "-x^2", "2^3^2", "exp(log(x)) - x", "x*(1 + 1/x)"] {
        let e = Expr::parse(text).unwrap();
        println!("{text:<18} parses as {e:<28} value at 2: {:?}", e.eval(2.0));
    }
    for bad in ["1/(x", "x + * 2", "sin(x)", "2 x"] {
        match Expr::parse(bad) {
            Ok(e) => println!("{bad:?} unexpectedly parsed as {e}"),
            Err(err) => println!("{bad:?}: error at offset {}: {err}", err.position()),
        }
    }
    let e = Expr::parse("log(x - 1)").unwrap();
    println!("log(x - 1) at x = 1: {}", e.eval(1.0).unwrap_err());
}
