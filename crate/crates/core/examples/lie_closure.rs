//! Exact brackets on the circle: the sin/cos pair, a closure span from
//! `Λ₀` generators, and the odd-degree constraint.

use thinfilm::liecirc::{bracket, closure_span, gglob_membership, CoeffFn, GradedElement, Ring, Window};

fn main() {
    let a = GradedElement::term(0, CoeffFn::sin(1));
    let b = GradedElement::term(0, CoeffFn::cos(1));
    println!("{{{a}, {b}}} = {}", bracket(&a, &b).unwrap());

    let gens: Vec<GradedElement> = [CoeffFn::one(Ring::CircleTrig), CoeffFn::cos(1), CoeffFn::sin(1), CoeffFn::cos(2), CoeffFn::sin(2)]
        .into_iter()
        .map(|c| GradedElement::term(0, c))
        .collect();
    let window = Window::new(5, 6);
    let span = closure_span(&gens, 5, window, window.doubled()).unwrap();
    for l in &span.levels {
        println!("level {}: {} brackets, {} new, window dimension {}", l.level, l.brackets, l.new_elements, l.window_dimension);
    }
    let members = span.produced.iter().filter(|e| gglob_membership(e).unwrap().member).count();
    println!("{members}/{} produced elements satisfy the odd-degree constraint", span.produced.len());

    let h31 = GradedElement::term(3, CoeffFn::one(Ring::CircleTrig));
    let r = gglob_membership(&h31).unwrap();
    println!("{h31}: a = {:?}, constraint {}, member {}", r.a, r.constraint, r.member);
}
