//! Jacobian determinants of the reflection, its inverse and a thin-film
//! ratio, plus the circle's closed form `(s, θ) ↦ (s + 2θ, θ)`.

use std::f64::consts::{PI, TAU};

use thinfilm::billiard::{symplectic_defect, DeltaMap, PhaseMap, ReflectionMap};
use thinfilm::curve::{Curve, Profile, TrigSeries};
use thinfilm::phase::{PhaseGrid, PhasePoint};

fn main() {
    let circle = Curve::unit_circle();
    let forward = ReflectionMap::forward(circle.clone());
    let p = PhasePoint::new(0.3, 1.1);
    let q = forward.apply(p).unwrap();
    println!("T(0.3, 1.1) = ({:.12}, {:.12}), closed form ({:.12}, 1.1)", q.s, q.theta, 0.3 + 2.2);

    let grid = PhaseGrid::closed(TAU, 16, (PI / 6.0, 5.0 * PI / 6.0), 16).points();
    let delta = DeltaMap::new(circle.clone(), Profile::Trig(TrigSeries::cos(1)), 0.05).unwrap();
    let maps: [(&str, &dyn PhaseMap); 3] = [
        ("reflection", &forward),
        ("inverse", &ReflectionMap::inverse(circle.clone())),
        ("thin-film eps=0.05", &delta),
    ];
    for (name, map) in maps {
        let r = symplectic_defect(&circle, map, &grid);
        println!("{name:>20}: max |det J - 1| = {:.2e} over {} points", r.max_defect, r.evaluated);
    }
}
