//! Differentiating a sampled map k ↦ x[k]: windowed Newton polynomials in
//! the interior and Thiele continued fractions near the ends.
//!
//! cargo run --release --example interpolation

use derivrule::interpolation::{derivative_at, thiele_derivative, InterpolationScheme};
use derivrule::opsystems::OpSystem;
use derivrule::precision::log10_abs;
use derivrule::quadrature::gauss_rule;
use derivrule::PrecisionContext;
use rug::Float;

fn main() -> derivrule::Result<()> {
    let ctx = PrecisionContext::new(40, 10)?;
    let ts: Vec<Float> = (1..=6).map(|k| ctx.float(k)).collect();
    let fs: Vec<Float> = ts.iter().map(|t| t.clone().recip()).collect();
    println!("Thiele through 1/k, derivative at 2: {}", thiele_derivative(&ts, &fs, &ctx.float(2))?.to_f64());

    // Chebyshev nodes: the closed form gives x′(k) = (π/(n+1)) sin(kπ/(n+1)).
    let n = 40;
    let rule = gauss_rule(&OpSystem::Chebyshev2, n, &ctx)?;
    let at = [1.0, 1.5, 10.0, 20.5, 40.0];
    for order in [6, 12, 20, 39] {
        let d = derivative_at(rule.nodes(), &InterpolationScheme::new(order), &at)?;
        let errs: Vec<String> = at
            .iter()
            .zip(&d)
            .map(|(t, v)| {
                let step = ctx.pi() / (n as u32 + 1);
                let exact = Float::with_val(ctx.bits(), &step * ctx.float(*t)).sin() * step;
                format!("{:>6.1}", log10_abs(&(exact - v)))
            })
            .collect();
        println!("order {order:>2}: log10|err| at k = 1, 1.5, 10, 20.5, 40: {}", errs.join(" "));
    }
    let d = derivative_at(rule.nodes(), &InterpolationScheme::with_thiele(12, 20, 4), &at)?;
    println!("order 12 + Thiele ends: x′(1) = {:.12e}", d[0].to_f64());
    Ok(())
}
