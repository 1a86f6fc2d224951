//! Charge versus offset: the step from 1 to 0 across |Lambda| = 1.

use tensormono::topo_invariants::{lambda_sweep, MetricSource, QuadratureGrid};

fn main() -> tensormono::Result<()> {
    let lambdas: Vec<f64> = (-12..=12).map(|i| f64::from(i) * 0.25).collect();
    let table = lambda_sweep(&lambdas, &MetricSource::Analytic, &QuadratureGrid::phase_diagram())?;
    for row in &table.rows {
        let bar = "#".repeat((row[1].max(0.0) * 40.0).round() as usize);
        println!("{:+5.2}  {:+.6}  {bar}", row[0], row[1]);
    }
    for note in &table.metadata.notes {
        println!("note: {note}");
    }
    Ok(())
}
