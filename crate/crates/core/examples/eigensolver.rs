//! Dense non-Hermitian eigensolver: residuals on a Galerkin matrix and a
//! comparison with the Schur form.

use spectral_enclosure::linalg::{eig, max_residual, schur};
use spectral_enclosure::manifolds::{build_torus2, families};
use spectral_enclosure::operators::assemble_schrodinger;

fn main() -> spectral_enclosure::Result<()> {
    let model = build_torus2(6)?;
    let v = families::smooth_test_potential(&model, 2.0)?;
    let h = assemble_schrodinger(&model, &v, 1.5)?.matrix;
    let started = std::time::Instant::now();
    let dec = eig(&h, true)?;
    println!("n = {}, {} sweeps, {:.3} s", h.nrows(), dec.sweeps, started.elapsed().as_secs_f64());
    println!("max ||A v - z v|| / ||A|| = {:.2e}", max_residual(&h, &dec).unwrap() / h.norm());
    let s = schur(&h)?;
    let back = &s.z * &s.t * s.z.adjoint();
    println!("||Z T Z^H - A|| / ||A|| = {:.2e}", (back - &h).norm() / h.norm());
    Ok(())
}
