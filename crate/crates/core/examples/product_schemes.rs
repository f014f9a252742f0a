//! Convergence ladders of the three product schemes on the unit circle.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use thinfilm::approx::{
    commutator_schedule, flow_schedule, power_schedule, run_schedule, sum_schedule, ConvergenceReport,
    Rung, Schedule, SharedHamiltonian,
};
use thinfilm::curve::{Curve, Profile, TrigSeries};
use thinfilm::hamflow::{Hamiltonian, PerlineHamiltonian};
use thinfilm::liecirc::{bracket, CoeffFn, GradedElement, Ring};
use thinfilm::phase::{PhaseGrid, PhasePoint};
use thinfilm::rational::q;

fn rung(x: f64, s: &Schedule, reference: &Schedule, grid: &[PhasePoint]) -> Rung {
    let e = run_schedule(s, reference, grid).unwrap();
    Rung { parameter: x, sup_error: e.sup, mean_error: e.mean, excluded: e.excluded }
}

fn show(name: &str, r: &ConvergenceReport) {
    let errs: Vec<String> = r.rungs.iter().map(|g| format!("{:.3e}", g.sup_error)).collect();
    println!("{name:>11}: [{}] slope {:.3}", errs.join(", "), r.slope.unwrap().slope);
}

fn main() {
    let c = Curve::unit_circle();
    let grid = PhaseGrid::closed(TAU, 8, (PI / 3.0, 2.0 * PI / 3.0), 8).points();
    let t = 0.5;

    let f = Profile::Trig(TrigSeries::cos(1));
    let reference = flow_schedule(&c, Arc::new(PerlineHamiltonian::new(c.clone(), f.clone())), t);
    let rungs = [1e-2, 5e-3, 2.5e-3]
        .map(|eps| rung(eps, &power_schedule(&c, &f, t, eps).unwrap(), &reference, &grid));
    show("power", &ConvergenceReport::from_rungs(rungs.to_vec(), |e| e));

    let lam = |f: CoeffFn| GradedElement::term(0, f.scale(&q(-2)));
    let h = |e: &GradedElement| -> SharedHamiltonian { Arc::new(Hamiltonian::from_element(e)) };
    let (v, w) = (lam(CoeffFn::one(Ring::CircleTrig)), lam(CoeffFn::cos(1)));
    let reference = flow_schedule(&c, h(&v.add(&w).unwrap()), t);
    let rungs = [8, 16, 32]
        .map(|n| rung(n as f64, &sum_schedule(&c, h(&v), h(&w), t, n).unwrap(), &reference, &grid));
    show("sum", &ConvergenceReport::from_rungs(rungs.to_vec(), |n| 1.0 / n));

    let (v, w) = (lam(CoeffFn::sin(1)), lam(CoeffFn::cos(1)));
    let reference = flow_schedule(&c, h(&bracket(&v, &w).unwrap()), t);
    let rungs = [4, 8, 16, 32]
        .map(|n| rung(n as f64, &commutator_schedule(&c, h(&v), h(&w), t, n).unwrap(), &reference, &grid));
    show("commutator", &ConvergenceReport::from_rungs(rungs.to_vec(), |n| 1.0 / n));
}
