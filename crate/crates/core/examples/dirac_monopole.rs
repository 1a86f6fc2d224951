//! The spin-1/2 comparison: metric, Berry curvature and first Chern number.

use tensormono::quantum_geometry::{dirac_monopole_geometry, dirac_qgt_perturbation, DiracCharge};
use tensormono::topo_invariants::{chern1, Orientation, Rule, SphereGrid};

fn main() -> tensormono::Result<()> {
    let num = dirac_qgt_perturbation(1.0, 2.0, DiracCharge::Plus)?;
    let exact = dirac_monopole_geometry(1.0, 2.0);
    println!("g = {:.6}", num.metric);
    println!("F = {:.9} (closed form {:.9})", num.berry, exact.berry);
    let grid = SphereGrid::new(100, 100, Rule::Simpson)?;
    for (charge, orientation) in [
        (DiracCharge::Plus, Orientation::Standard),
        (DiracCharge::Plus, Orientation::Reversed),
        (DiracCharge::Minus, Orientation::Standard),
    ] {
        let c = chern1(&grid, charge, orientation)?;
        println!("{charge:?} {orientation:?}: C1 = {:.9}", c.value);
    }
    Ok(())
}
