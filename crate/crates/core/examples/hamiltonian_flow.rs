//! Integrates the flow of a two-term graded Hamiltonian and watches energy.

use thinfilm::hamflow::{flow, ham_value, Hamiltonian, HamiltonianTerm};
use thinfilm::liecirc::{CoeffFn, Ring};
use thinfilm::phase::PhasePoint;
use thinfilm::rational::{q, qf};

fn main() {
    // H = −2 cos s · √(1−w²) + w/5
    let h = Hamiltonian::from_terms(vec![
        HamiltonianTerm::new(0, CoeffFn::cos(1).scale(&q(-2))),
        HamiltonianTerm::new(1, CoeffFn::constant(Ring::CircleTrig, qf(1, 5))),
    ]);
    let start = PhasePoint::new(0.4, 1.2);
    let e0 = ham_value(&h, start);
    for t in [0.5, 1.0, 2.0, 5.0, 10.0] {
        match flow(&h, t, start) {
            Ok(p) => println!(
                "t = {t:>4}: s = {:9.6}, theta = {:8.6}, energy drift {:.1e}",
                p.s,
                p.theta,
                (ham_value(&h, p) - e0).abs()
            ),
            Err(e) => println!("t = {t:>4}: {e}"),
        }
    }
}
