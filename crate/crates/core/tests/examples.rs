//! Runs every example so they stay in sync with the library.

#[path = "../examples/set_algebra.rs"]
mod set_algebra;

#[test]
fn example_set_algebra() {
    set_algebra::main();
}

#[path = "../examples/harmonic_geometry.rs"]
mod harmonic_geometry;

#[test]
fn example_harmonic_geometry() {
    harmonic_geometry::main();
}

#[path = "../examples/expressions.rs"]
mod expressions;

#[test]
fn example_expressions() {
    expressions::main();
}

#[path = "../examples/m_concavity.rs"]
mod m_concavity;

#[test]
fn example_m_concavity() {
    m_concavity::main();
}

#[path = "../examples/strong_modulus.rs"]
mod strong_modulus;

#[test]
fn example_strong_modulus() {
    strong_modulus::main();
}

#[path = "../examples/kuhn_and_chain.rs"]
mod kuhn_and_chain;

#[test]
fn example_kuhn_and_chain() {
    kuhn_and_chain::main();
}

#[path = "../examples/dyadic_and_bernstein_doetsch.rs"]
mod dyadic_and_bernstein_doetsch;

#[test]
fn example_dyadic_and_bernstein_doetsch() {
    dyadic_and_bernstein_doetsch::main();
}

#[path = "../examples/falsify_search.rs"]
mod falsify_search;

#[test]
fn example_falsify_search() {
    falsify_search::main();
}

#[path = "../examples/closure_suite.rs"]
mod closure_suite;

#[test]
fn example_closure_suite() {
    closure_suite::main();
}
