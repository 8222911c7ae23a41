//! Spherical-harmonic Galerkin model: free spectrum `l(l+1)` with
//! multiplicity `2l+1`, and the spectrum of a complex potential.

use spectral_enclosure::bounds::manifold_enclosure_check;
use spectral_enclosure::linalg::eigvals;
use spectral_enclosure::manifolds::{build_sphere2, families};
use spectral_enclosure::operators::{assemble_schrodinger, free_spectrum};

fn main() -> spectral_enclosure::Result<()> {
    let model = build_sphere2(8)?;
    println!("{} modes, orthonormality residual {:.1e}", model.n_modes(), model.orthonormality_residual());
    let free = free_spectrum(&model, 2.0)?;
    println!("lowest free eigenvalues {:?}", &free[..9]);
    let v = families::nonvanishing_random(&model, 5)?;
    let spectrum = eigvals(&assemble_schrodinger(&model, &v, 2.0)?.matrix)?;
    let check = manifold_enclosure_check(&spectrum, &model, &v, 2.0, 2.0, 1.0)?;
    println!("C_emp = {:.4}, enclosed at C = 1: {}", check.fit.c_emp, check.all_enclosed());
    Ok(())
}
