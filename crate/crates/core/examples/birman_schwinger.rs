//! Eigenvalues of `H = (-Delta)^{alpha/2} + V` on the circle against the
//! eigenvalue `-1` of the Birman–Schwinger operator `K(z)`.

use num_complex::Complex64;
use spectral_enclosure::linalg::eigvals;
use spectral_enclosure::manifolds::{build_torus1, families};
use spectral_enclosure::operators::{assemble_birman_schwinger, assemble_schrodinger, free_distance};

fn main() -> spectral_enclosure::Result<()> {
    let model = build_torus1(8)?;
    let alpha = 2.0;
    let v = families::nonvanishing_random(&model, 3)?;
    let h = assemble_schrodinger(&model, &v, alpha)?;
    let mut worst: f64 = 0.0;
    for z in eigvals(&h.matrix)? {
        if free_distance(&model, alpha, z)? < 1e-6 {
            continue;
        }
        let k = assemble_birman_schwinger(&model, &v, z, alpha)?;
        let gap = eigvals(&k.matrix)?
            .iter()
            .map(|mu| (mu + Complex64::new(1.0, 0.0)).norm())
            .fold(f64::INFINITY, f64::min);
        println!("z = {:>10.5} {:+.5}i   min |mu + 1| = {gap:.2e}", z.re, z.im);
        worst = worst.max(gap);
    }
    println!("worst gap {worst:.2e}");
    Ok(())
}
