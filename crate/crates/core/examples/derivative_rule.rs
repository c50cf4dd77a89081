//! Recover a weight function from its Gauss rule alone: ρ(x[k]) = w[k]/x′[k].
//!
//! cargo run --release --example derivative_rule

use derivrule::interpolation::InterpolationScheme;
use derivrule::inversion::derivative_rule_invert;
use derivrule::opsystems::OpSystem;
use derivrule::precision::{format_sci, log10_abs};
use derivrule::quadrature::gauss_rule;
use derivrule::PrecisionContext;

fn main() -> derivrule::Result<()> {
    let ctx = PrecisionContext::new(60, 10)?;
    for (sys, n) in [(OpSystem::Gegenbauer { l: 20 }, 41), (OpSystem::Hermite, 21), (OpSystem::pollaczek(0, 1, 4), 60)] {
        let rule = gauss_rule(&sys, n, &ctx)?;
        let rep = derivative_rule_invert(&rule, &InterpolationScheme::new(n - 1))?;
        let c = rep.nearest_zero().expect("non-empty");
        println!(
            "{sys:<24} N={n:<3} x={:>10}  ρ≈{}  ρ={}  log10|err|={:.1}",
            format_sci(&c.x, 3),
            format_sci(&c.rho_approx, 14),
            format_sci(c.rho_exact.as_ref().unwrap(), 14),
            log10_abs(&c.err_abs().unwrap())
        );
    }

    // Error profile across the interval: exponentially small in the middle,
    // growing toward the ends where ρ itself is tiny.
    let rule = gauss_rule(&OpSystem::Hermite, 21, &ctx)?;
    let rep = derivative_rule_invert(&rule, &InterpolationScheme::new(20))?;
    println!("\nHermite N=21: k, x, correct digits (relative)");
    for r in &rep.records {
        println!("{:>3} {:>10} {:>6.1}", r.k, format_sci(&r.x, 4), -log10_abs(&r.err_rel().unwrap()));
    }
    Ok(())
}
