//! Zero spacings Δ[k] and node derivatives x′[k] approach (π/n)√(1−x²)
//! for every Nevai–Blumenthal system; the midpoint derivative x′[k−½]
//! tracks Δ[k] much better than x′[k].
//!
//! cargo run --release --example clock_rule

use derivrule::interpolation::InterpolationScheme;
use derivrule::opsystems::OpSystem;
use derivrule::quadrature::{analytic_chebyshev_rule, gauss_rule};
use derivrule::universality::{clock_curves, clock_probe, pairwise_deviation, NodeDerivative};
use derivrule::PrecisionContext;

fn main() -> derivrule::Result<()> {
    let ctx = PrecisionContext::new(30, 10)?;
    for n in [10, 50, 200, 1000] {
        let probes = (1..=3u8)
            .map(|k| clock_probe(&*analytic_chebyshev_rule(k, n, &ctx)?, &NodeDerivative::Analytic))
            .collect::<derivrule::Result<Vec<_>>>()?;
        let dev = pairwise_deviation(&clock_curves(&probes), 2, n);
        let ratios: Vec<String> = probes
            .iter()
            .map(|p| format!("{:.1e}/{:.1e}", p.max_ratio_error(false), p.max_ratio_error(true)))
            .collect();
        println!(
            "n={n:<5} Δ,x′ spread: scaled {:.2e} relative {:.2e}   |ratio−1| backward/central per kind: {}",
            dev.scaled,
            dev.relative,
            ratios.join("  ")
        );
    }

    // A non-Chebyshev member of the class, with interpolated x′.
    let rule = gauss_rule(&OpSystem::Legendre, 200, &ctx)?;
    let p = clock_probe(&rule, &NodeDerivative::Interpolated(InterpolationScheme::new(20)))?;
    println!("\nlegendre n=200: max interior |Δ/x′[k−½] − 1| = {:.2e}", p.max_ratio_error(true));
    Ok(())
}
