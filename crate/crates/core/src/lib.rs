//! Multiprecision Gauss rules for classical and Coulomb–Pollaczek weights,
//! and the derivative rule ρ(x[k]) = w[k]/x′[k] that recovers a weight
//! function from its rule.
//!
//! The examples directory is the tour:
//!
//! | example | shows |
//! |---|---|
//! | `gauss_rules` | rules for every built-in system, weight sums, closed-form Chebyshev rules |
//! | `eigensolvers` | tridiagonal and dense symmetric eigensolvers at 100 digits |
//! | `interpolation` | windowed Newton and Thiele derivatives of a sampled node map |
//! | `derivative_rule` | weight recovery for Gegenbauer, Hermite and Pollaczek rules |
//! | `chebyshev_exactness` | exact identity with closed-form derivatives; the N sweep |
//! | `histogram_baseline` | cumulative-weight differentiation and its 1/N² rate |
//! | `clock_rule` | universal spacing law and midpoint derivatives |
//! | `weight_ratio` | w/ρ against (π/n)√(1−x²) |
//! | `pollaczek_missing_mass` | mass on bound-state nodes below −1 |
//! | `resolvent` | pole sums, continued fractions, boundary values |
//! | `photoeffect` | hydrogen photo-ionization cross sections from an L² basis |
//!
//! ```
//! use derivrule::{interpolation::InterpolationScheme, inversion::derivative_rule_invert};
//! use derivrule::{opsystems::OpSystem, quadrature::gauss_rule, PrecisionContext};
//!
//! let ctx = PrecisionContext::new(30, 10)?;
//! let rule = gauss_rule(&OpSystem::Legendre, 21, &ctx)?;
//! let rep = derivative_rule_invert(&rule, &InterpolationScheme::new(20))?;
//! assert!(rep.central_error().unwrap() < 1e-8);
//! # Ok::<(), derivrule::Error>(())
//! ```

pub mod csv;
pub mod error;
pub mod interpolation;
pub mod inversion;
pub mod markov;
pub mod numerics;
pub mod opsystems;
pub mod photoeffect;
pub mod precision;
pub mod quadrature;
pub mod tables;
pub mod universality;

pub use error::{Error, Result};
pub use precision::PrecisionContext;
