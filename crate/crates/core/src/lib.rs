pub mod approx;
pub mod billiard;
pub mod cli;
pub mod curve;
pub mod hamflow;
pub mod liecirc;
pub mod phase;
pub mod polyker;
pub mod rational;
pub mod vec2;
