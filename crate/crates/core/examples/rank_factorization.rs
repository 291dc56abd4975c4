//! Rank, pivot rows and an orthonormal basis of a row span.
//!
//!     cargo run --example rank_factorization

use riskgate::kernel::{orthonormal_row_projector, RealMatrix, ToleranceConfig};

fn main() {
    // row 2 = row 0 + row 1, row 3 is independent
    let v = RealMatrix::from_rows(&[
        [1.0, 2.0, 0.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
        [1.0, 3.0, 1.0, 1.0],
        [2.0, 0.0, 0.0, 1.0],
    ])
    .unwrap();
    let f = orthonormal_row_projector(&v, &ToleranceConfig::default());
    println!("rank {} with pivot rows {:?}", f.rank(), f.pivot_rows());

    let q = f.basis();
    for (i, row) in q.rows().enumerate() {
        println!("q{i} = {row:.4?}");
    }
    let gram = q.gram_rows();
    println!("Q·Qᵀ = {:.2e} off the identity", (0..f.rank())
        .flat_map(|i| (0..f.rank()).map(move |j| (i, j)))
        .map(|(i, j)| (gram.get(i, j) - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max));

    // J = G·H maps V onto Q and is supported on the pivot rows
    let jv = f.projector().matmul(&v).unwrap();
    let err = jv.entries().iter().zip(q.entries()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("max |J·V − Q| = {err:.2e}");

    let y = [3.0, 5.0, 1.0, 3.0];
    println!("residual of {y:?} off the span: {:.2e}", f.membership(&y, &ToleranceConfig::default()).residual);
}
