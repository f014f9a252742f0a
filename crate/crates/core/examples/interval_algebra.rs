//! On an interval there is no averaging constraint: brackets of
//! `{1, s, s², s³}` fill the truncated window.

use thinfilm::liecirc::{closure_span, CoeffFn, GradedElement, Window};

fn main() {
    let gens: Vec<GradedElement> = (0..=3).map(|p| GradedElement::term(0, CoeffFn::monomial(p))).collect();
    let window = Window::new(4, 3);
    let span = closure_span(&gens, 5, window, window.doubled()).unwrap();
    println!(
        "window y-degree <= 4, s-degree <= 3: dimension {} of {}",
        span.dimension,
        (window.max_degree + 1) * (window.max_order + 1)
    );
    for e in span.basis.iter().take(6) {
        println!("  {e}");
    }
}
