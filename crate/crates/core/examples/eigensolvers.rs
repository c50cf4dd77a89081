//! Multiprecision symmetric eigensolvers: tridiagonal (Sturm + Newton +
//! twisted factorization) and dense (Jacobi rotations).
//!
//! cargo run --release --example eigensolvers

use derivrule::numerics::{eigen_dense_symmetric, eigen_tridiagonal_with_vectors, SymTridiagonal};
use derivrule::precision::format_sci;
use derivrule::PrecisionContext;

fn main() -> derivrule::Result<()> {
    let ctx = PrecisionContext::new(100, 10)?;
    // Hermite Jacobi matrix: eigenvector entries span hundreds of decades.
    let n = 120;
    let off = (1..n).map(|j| ctx.float(j as f64 / 2.0).sqrt()).collect();
    let j = SymTridiagonal::new(vec![ctx.zero(); n], off)?;
    let e = eigen_tridiagonal_with_vectors(&j, &ctx)?;
    let vs = e.vectors.as_ref().unwrap();
    let worst = (0..n).map(|k| j.residual(&e.values[k], &vs[k])).max_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
    println!("n={n}: λ_max = {}", format_sci(&e.values[n - 1], 40));
    println!("smallest first component: {}", format_sci(&e.first_components[0], 6));
    println!("max residual ‖Jv − λv‖∞: {}", format_sci(&worst, 3));

    let small = j.leading(8)?;
    let d = eigen_dense_symmetric(&small.to_dense(), &ctx)?;
    let t = eigen_tridiagonal_with_vectors(&small, &ctx)?;
    let gap = d.values.iter().zip(&t.values).map(|(a, b)| (a.clone() - b).abs()).max_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
    println!("dense vs tridiagonal on the leading 8×8 block: max gap {}", format_sci(&gap, 3));
    Ok(())
}
