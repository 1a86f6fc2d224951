//! Band touchings of the 4D lattice model as the offset moves them together.

use tensormono::band_spectra::find_weyl_points;

fn main() {
    for lambda in [0.0, 0.5, 0.9, 1.0, 1.5, -2.0] {
        let points = find_weyl_points(lambda);
        println!("Lambda = {lambda:+}: {} node(s)", points.len());
        for p in points {
            println!("  k = ({:+.9}, {:+.4}, {:+.4}, {:+.4})  gap {:.1e}", p.k[0], p.k[1], p.k[2], p.k[3], p.gap);
        }
        if lambda.abs() < 1.0 {
            println!("  expected kx = +-{:.9}", lambda.acos());
        }
    }
}
