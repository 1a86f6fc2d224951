//! Dixmier-Douady charge from the closed-form metric, the sum-over-states
//! QGT, and simulated quenches at decreasing step.

use std::f64::consts::PI;
use std::time::Instant;

use tensormono::quench_sim::{Direction, QuenchSchedule};
use tensormono::topo_invariants::{dd_invariant, dd_invariant_for, MetricSource, QuadratureGrid};
use tensormono::{Coord, MonopoleFamily};

fn main() -> tensormono::Result<()> {
    let grid = QuadratureGrid::default();
    let t = Instant::now();
    let q = dd_invariant(&MetricSource::Analytic, &grid, 0.0)?;
    println!("analytic      Q = {:.9}  ({:?})", q.value, t.elapsed());
    let q = dd_invariant(&MetricSource::Perturbation, &grid, 0.0)?;
    println!("perturbation  Q = {:.9}", q.value);
    let anti = dd_invariant_for(&MonopoleFamily::unit(0.0).anti(), &MetricSource::Perturbation, &grid)?;
    println!("anti-monopole Q = {:.9}", anti.value);
    for denom in [8.0, 16.0, 1024.0] {
        let s = QuenchSchedule::sudden(Direction::Axis(Coord::Theta1), PI / denom)?;
        let q = dd_invariant(&MetricSource::Quench(s), &grid, 0.0)?;
        println!("quench dq = pi/{denom:<4}  Q = {:.6}", q.value);
    }
    Ok(())
}
