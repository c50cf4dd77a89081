//! Attractive Coulomb–Pollaczek: part of the unit mass sits on bound-state
//! nodes below −1. The Gauss rule accounts for it exactly.
//!
//! cargo run --release --example pollaczek_missing_mass

use derivrule::opsystems::OpSystem;
use derivrule::precision::format_sci;
use derivrule::quadrature::gauss_rule;
use derivrule::universality::pollaczek_missing_mass;
use derivrule::PrecisionContext;

fn main() -> derivrule::Result<()> {
    let ctx = PrecisionContext::new(40, 10)?;
    let sys = OpSystem::pollaczek(0, -1, 4);
    println!("{}", sys.favard_check().diagnostic);
    for n in [25, 50, 100, 200] {
        let rule = gauss_rule(&sys, n, &ctx)?;
        let (count, mass) = pollaczek_missing_mass(&rule);
        let inside = rule.weight_sum() - &mass;
        println!("n={n:<4} nodes below −1: {count:<3} missing mass {}  mass in [−1,1] {}", format_sci(&mass, 12), format_sci(&inside, 12));
    }
    let rep = gauss_rule(&OpSystem::pollaczek(0, 1, 4), 100, &ctx)?;
    println!("repulsive Z=+1, n=100: {} nodes below −1", pollaczek_missing_mass(&rep).0);
    Ok(())
}
