//! w[k]/ρ(x[k]) approaches the same curve (π/n)√(1−x²) for different
//! weights; it is exact for Chebyshev's first kind at every n.
//!
//! cargo run --release --example weight_ratio

use derivrule::opsystems::OpSystem;
use derivrule::quadrature::gauss_rule;
use derivrule::universality::weight_ratio_probe;
use derivrule::PrecisionContext;

fn main() -> derivrule::Result<()> {
    let ctx = PrecisionContext::new(30, 10)?;
    for n in [50, 100, 200] {
        let rules = [OpSystem::Chebyshev1, OpSystem::Chebyshev2, OpSystem::Legendre, OpSystem::Gegenbauer { l: 20 }]
            .iter()
            .map(|s| gauss_rule(s, n, &ctx))
            .collect::<derivrule::Result<Vec<_>>>()?;
        let refs: Vec<_> = rules.iter().map(|r| r.as_ref()).collect();
        let rep = weight_ratio_probe(&refs)?;
        let devs: Vec<String> = rep.curves.iter().map(|c| format!("{} {:.1e}", c.system, c.max_interior_deviation)).collect();
        println!("n={n:<4} {}", devs.join("  "));
    }
    println!("\nThe l = 20 Gegenbauer curve approaches more slowly: its weight vanishes to high order at ±1.");
    Ok(())
}
