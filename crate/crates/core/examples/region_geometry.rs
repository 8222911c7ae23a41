//! The point `z_*`, the contour `Gamma` and membership in the exterior
//! region `Xi`, rendered to `region_alpha5.svg`.

use num_complex::Complex64;
use spectral_enclosure::harness::{plot_spectrum_region, PlotOptions};
use spectral_enclosure::regions::{xi_contains, z_star, XiRegion};

fn main() -> spectral_enclosure::Result<()> {
    for alpha in [1.5, 2.0, 3.0, 5.0, 7.0] {
        let xi = XiRegion::new(alpha)?;
        println!("alpha = {alpha}: z_* = {:.6}, lambda_min = {:.6}", z_star(alpha)?, xi.lambda_min);
    }
    for z in [Complex64::new(-20.0, 0.0), Complex64::new(-5.0, 0.0), Complex64::new(10.0, 1.0)] {
        println!("alpha = 5, z = {z}: {:?}", xi_contains(z, 5.0, None)?);
    }
    let svg = plot_spectrum_region(&[], None, Some(5.0), &PlotOptions::default())?;
    std::fs::write("region_alpha5.svg", svg)?;
    println!("wrote region_alpha5.svg");
    Ok(())
}
