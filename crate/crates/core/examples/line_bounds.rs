//! AAD, Keller and Lieb–Thirring ratios for narrowing square wells of fixed
//! integral on the line.

use spectral_enclosure::harness::studies::{linear_extrapolation, square_well_family};
use spectral_enclosure::manifolds::build_line;

fn main() -> spectral_enclosure::Result<()> {
    let model = build_line(20.0, 8000)?;
    let rows = square_well_family(&model, 2.0, &[0.32, 0.16, 0.08, 0.04])?;
    println!("{:>6} {:>10} {:>8} {:>8} {:>8}", "a", "lambda_1", "aad", "keller", "lt");
    for r in &rows {
        println!(
            "{:>6} {:>10.6} {:>8.5} {:>8.5} {:>8.5}",
            r.halfwidth, r.negative[0], r.aad.ratio, r.keller.ratio, r.lieb_thirring.ratio
        );
    }
    let n = rows.len();
    let k = linear_extrapolation(rows[n - 2].keller.ratio, rows[n - 1].keller.ratio);
    println!("Keller ratio extrapolated to a -> 0: {k:.5} (delta limit 1/4)");
    Ok(())
}
