//! F_n(z) = Σ w[k]/(z − x[k]) equals the n-th Jacobi continued fraction;
//! near the cut Im F approaches −πρ(x).
//!
//! cargo run --release --example resolvent

use derivrule::markov::{continued_fraction, pole_sum};
use derivrule::opsystems::OpSystem;
use derivrule::precision::format_sci;
use derivrule::quadrature::{analytic_chebyshev_rule, gauss_rule};
use derivrule::PrecisionContext;
use rug::{Complex, Float};

fn main() -> derivrule::Result<()> {
    let ctx = PrecisionContext::new(40, 10)?;
    let z = Complex::with_val(ctx.bits(), (2, 1));
    for sys in [OpSystem::Legendre, OpSystem::Hermite, OpSystem::pollaczek(1, rug::Rational::from((1, 2)), 3)] {
        let rule = gauss_rule(&sys, 25, &ctx)?;
        let a = pole_sum(&rule, &z)?;
        let b = continued_fraction(&sys, 25, &z, &ctx)?;
        let gap = Float::with_val(ctx.bits(), (a.clone() - b).abs_ref());
        println!("{sys:<26} F_25(2+i) = {} {:+}i   |pole sum − fraction| = {}", format_sci(a.real(), 15), a.imag().to_f64(), format_sci(&gap, 2));
    }

    let rule = gauss_rule(&OpSystem::Chebyshev2, 50, &ctx)?;
    let f = pole_sum(&rule, &Complex::with_val(ctx.bits(), (2, 0)))?;
    let exact = ctx.pi() * (2u32 - ctx.float(3u32).sqrt());
    println!("\n∫√(1−x²)/(2−x)dx ≈ {}  exact π(2−√3) = {}", format_sci(f.real(), 20), format_sci(&exact, 20));

    let lo = PrecisionContext::new(20, 10)?;
    let rule = analytic_chebyshev_rule(2, 2000, &lo)?;
    for eps in [1e-2, 3e-3, 1e-3] {
        let f = pole_sum(&rule, &Complex::with_val(lo.bits(), (0.0, eps)))?;
        println!("n=2000 ε={eps:<6} Im F(iε) = {:.6}  (−πρ(0) = {:.6})", f.imag().to_f64(), -std::f64::consts::PI);
    }
    Ok(())
}
