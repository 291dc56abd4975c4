//! When `Σ·x = y` has no solution, a row vector `Z` with `Z·y = 1` and
//! `Z·Σ = 0` proves it.
//!
//!     cargo run --example dual_certificate

use riskgate::kernel::{dot, dual_certificate, solve_column_system, RealMatrix, ToleranceConfig};

fn main() {
    let tol = ToleranceConfig::default();
    let sigma = RealMatrix::from_rows(&[[1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [2.0, 1.0]]).unwrap();

    for y in [[1.0, 3.0, 2.0, 4.0], [1.0, 3.0, 2.0, 5.0]] {
        match solve_column_system(&y, &sigma, &tol) {
            Ok(x) => println!("y = {y:?} is reachable: x = {x:?}"),
            Err(e) => {
                let z = dual_certificate(&y, &sigma, &tol).unwrap();
                println!("y = {y:?}: {e}");
                println!("  Z = {z:.4?}");
                let zs = sigma.row_mul(&z).unwrap();
                println!("  Z·y = {:.12}, max |Z·Σ| = {:.1e}", dot(&z, &y), zs.iter().fold(0.0_f64, |m, x| m.max(x.abs())));
            }
        }
    }
}
