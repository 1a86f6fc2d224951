//! Dressed states of the driven qutrit and the relative brightness of the
//! three spectroscopic lines.

use tensormono::band_spectra::brightness;
use tensormono::qudit_models::dressed_states;
use tensormono::RabiDrive;

fn main() -> tensormono::Result<()> {
    for drive in [RabiDrive::new(1.0, 0.0, 1.0, 0.0), RabiDrive::new(0.3, 0.4, 0.8, -0.2), RabiDrive::new(1.0, 0.0, 0.0, 0.0)] {
        let d = dressed_states(&drive)?;
        let b = brightness(&drive)?;
        println!("drive {:?}", drive.as_array());
        println!("  energies {:?} (+-Omega_0 / 2, drive units)", d.energies);
        println!("  P+ {:.4}  P0 {:.4}  P- {:.4}  ratio {:?}", b.p_plus, b.p_zero, b.p_minus, b.ratio);
    }
    Ok(())
}
