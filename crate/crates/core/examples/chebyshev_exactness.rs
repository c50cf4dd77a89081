//! With the closed-form node map the derivative rule is an identity for
//! all four Chebyshev kinds; interpolating the nodes instead converges
//! faster than any power of N.
//!
//! cargo run --release --example chebyshev_exactness

use derivrule::inversion::derivative_rule_analytic;
use derivrule::precision::log10_abs;
use derivrule::quadrature::analytic_chebyshev_rule;
use derivrule::tables::{run_sweep, Sweep};
use derivrule::PrecisionContext;

fn main() -> derivrule::Result<()> {
    let ctx = PrecisionContext::new(50, 10)?;
    for kind in 1..=4u8 {
        let mut worst = f64::NEG_INFINITY;
        for n in [5, 17, 64, 100] {
            let rep = derivative_rule_analytic(&*analytic_chebyshev_rule(kind, n, &ctx)?)?;
            for r in &rep.records {
                worst = worst.max(log10_abs(&r.err_rel().unwrap()));
            }
        }
        println!("kind {kind}: max log10 relative error over n ≤ 100 = {worst:.1}");
    }
    println!();
    let rep = run_sweep(Sweep::Chebyshev, 120, 10, false)?;
    print!("{}", rep.to_table(6).render(true));
    Ok(())
}
