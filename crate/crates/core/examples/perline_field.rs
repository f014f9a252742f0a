//! Differentiates the thin-film ratio in ε and compares with the field of
//! `−2√(1−w²) f(s)` on a slightly oval curve.

use std::f64::consts::PI;

use thinfilm::billiard::{perline_derivative, DEFAULT_EPS_SCHEDULE};
use thinfilm::curve::{Curve, Profile, SupportCurve, TrigSeries};
use thinfilm::hamflow::{ham_field, PerlineHamiltonian};
use thinfilm::phase::PhaseGrid;

fn main() {
    let curve = Curve::Support(
        SupportCurve::new(TrigSeries::new(vec![(0, 1.0, 0.0), (2, 0.08, 0.0)])).expect("convex"),
    );
    let profile = Profile::Trig(TrigSeries::new(vec![(0, 0.5, 0.0), (1, 1.0, 0.0)]));
    let h = PerlineHamiltonian::new(curve.clone(), profile.clone());
    let grid = PhaseGrid::closed(curve.length().unwrap(), 6, (PI / 4.0, 3.0 * PI / 4.0), 3);

    println!("{:>8} {:>8} {:>12} {:>12} {:>10}", "s", "theta", "ds/de", "dw/de", "|diff|");
    for p in grid.points() {
        let est = perline_derivative(&curve, &profile, p, &DEFAULT_EPS_SCHEDULE).unwrap();
        let (fs, fw) = ham_field(&h, p);
        let diff = (est.ds - fs).hypot(est.dw - fw);
        println!("{:8.4} {:8.4} {:12.8} {:12.8} {:10.2e}", p.s, p.theta, est.ds, est.dw, diff);
    }
}
