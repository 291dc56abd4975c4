//! Pivot-supported particular solutions of `x·V = y` and `Σ·x = y`.
//!
//!     cargo run --example span_selectors

use riskgate::kernel::{
    row_span_membership, solve_column_system, solve_row_system, RealMatrix, ToleranceConfig,
};

fn main() {
    let tol = ToleranceConfig::default();
    let v = RealMatrix::from_rows(&[[1.0, 1.0, 0.0], [2.0, 2.0, 0.0], [0.0, 1.0, 1.0]]).unwrap();

    let y = [3.0, 5.0, 2.0];
    let m = row_span_membership(&y, &v, &tol).unwrap();
    println!("y = {y:?}: member {} (residual {:.1e})", m.member, m.residual);
    let x = solve_row_system(&y, &v, &tol).unwrap();
    println!("x = {x:?}  (row 1 repeats row 0, so its weight is exactly 0)");
    println!("x·V = {:?}", v.row_mul(&x).unwrap());

    let off = [1.0, 0.0, 0.0];
    match solve_row_system(&off, &v, &tol) {
        Ok(x) => println!("unexpected solution {x:?}"),
        Err(e) => println!("y = {off:?}: {e}"),
    }

    // column form: Σ·x = y with Σ tall
    let sigma = RealMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
    let x = solve_column_system(&[2.0, -1.0, 1.0], &sigma, &tol).unwrap();
    println!("Σ·x = (2, −1, 1) solved by x = {x:?}");
}
