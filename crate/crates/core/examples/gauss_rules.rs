//! Gauss rules for every built-in system, with the weight sum checked
//! against the total mass of the measure.
//!
//! cargo run --release --example gauss_rules

use derivrule::opsystems::catalog;
use derivrule::precision::format_sci;
use derivrule::quadrature::{analytic_chebyshev_rule, gauss_rule, integrate};
use derivrule::PrecisionContext;

fn main() -> derivrule::Result<()> {
    let ctx = PrecisionContext::new(40, 10)?;
    println!("{:<28} {:>4} {:>24} {:>12}", "system", "n", "x_1", "|Σw − μ0|");
    for sys in catalog() {
        let rule = gauss_rule(&sys, 12, &ctx)?;
        let gap = (rule.weight_sum() - rule.mu0()).abs();
        println!("{:<28} {:>4} {:>24} {:>12}", sys.to_string(), rule.n(), format_sci(&rule.nodes()[0], 16), format_sci(&gap, 2));
    }

    // Closed-form and eigensolver rules agree; a 4-point rule integrates x^6
    // against 1/√(1−x²) exactly (5π/16).
    let a = analytic_chebyshev_rule(1, 4, &ctx)?;
    let j = gauss_rule(a.system(), 4, &ctx)?;
    let x6 = integrate(&a, |x| x.clone().square().square() * x.clone().square())?;
    println!("\ncheb1 n=4: x_1 analytic {} vs Jacobi {}", format_sci(&a.nodes()[0], 30), format_sci(&j.nodes()[0], 30));
    println!("∫x^6/√(1−x²) = {}  (5π/16 = {})", format_sci(&x6, 30), format_sci(&(ctx.pi() * 5u32 / 16u32), 30));
    print!("\n{}", a.to_table(20).render(false));
    Ok(())
}
