//! The classical histogram inversion: differentiate the staircase of
//! cumulative weights. It converges only like 1/N².
//!
//! cargo run --release --example histogram_baseline

use derivrule::interpolation::InterpolationScheme;
use derivrule::inversion::{derivative_rule_invert, histogram_invert, HISTOGRAM_ORDER};
use derivrule::precision::log10_abs;
use derivrule::quadrature::analytic_chebyshev_rule;
use derivrule::tables::histogram_sweep;
use derivrule::PrecisionContext;

fn main() -> derivrule::Result<()> {
    let rep = histogram_sweep(&[200, 400, 800, 1600], None, 20, 10)?;
    print!("{}", rep.to_table(6).render(true));

    // Same N, same data: the derivative rule is many orders more accurate.
    let ctx = PrecisionContext::new(40, 10)?;
    let rule = analytic_chebyshev_rule(2, 40, &ctx)?;
    let h = histogram_invert(&rule, HISTOGRAM_ORDER)?.central_error().unwrap();
    let d = derivative_rule_invert(&rule, &InterpolationScheme::new(39))?.central_error().unwrap();
    println!("\nN=40 at x≈0: histogram log10 err {:.1}, derivative rule {:.1}", log10_abs(&h), log10_abs(&d));
    Ok(())
}
