//! Lattice bands along kx for three offsets, with the refined band touchings.
//!
//! ```text
//! cargo run --example band_structure
//! ```

use tensormono::band_spectra::{band_cut, gap_closures, Axis};

fn main() -> tensormono::Result<()> {
    for lambda in [0.0, 1.0, 2.0] {
        let cut = band_cut(lambda, Axis::Kx, [0.0; 4], 201)?;
        println!("Lambda = {lambda}: min gap {:.4} Omega_0", cut.min_gap());
        for c in gap_closures(&cut) {
            println!("  closure at kx = {:+.12} (gap {:.1e})", c.k, c.gap);
        }
        for s in cut.samples.iter().step_by(25) {
            println!("  kx {:+.3}  E = {:+.4} {:+.4} {:+.4}", s.k, s.e_minus, s.e_zero, s.e_plus);
        }
    }
    Ok(())
}
