//! Hydrogen 1s photo-ionization from a 35-function L² basis: the derivative
//! rule turns discrete dipole moments into continuum cross sections.
//!
//! cargo run --release --example photoeffect

use derivrule::photoeffect::{cross_section, PhotoConfig};
use derivrule::precision::format_sci;
use derivrule::PrecisionContext;
use rug::Rational;

fn main() -> derivrule::Result<()> {
    let ctx = PrecisionContext::new(64, 10)?;
    let sp = cross_section(&PhotoConfig::new(35, Rational::from((5, 2))), &ctx)?;
    println!("bound states: {}   E_min + 1/8 = {}", sp.bound_count(), format_sci(&(sp.energies[0].clone() + 0.125f64), 3));
    println!("Σ m2 − 3 = {}", format_sci(&(sp.m2_sum(&ctx) - 3u32), 3));
    let digits = sp.matching_digits(&ctx)?;
    println!("\n{:>4} {:>14} {:>22} {:>8}", "i", "E", "σ", "digits");
    for (i, d) in digits {
        println!("{:>4} {:>14} {:>22} {:>8.1}", i + 1, format_sci(&sp.energies[i], 8), format_sci(sp.sigma[i].as_ref().unwrap(), 16), d);
    }
    Ok(())
}
