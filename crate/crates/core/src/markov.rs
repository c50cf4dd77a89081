//! Finite-n resolvent approximants F_n(z) = ∫dμ_n/(z − x).
//!
//! Two equivalent forms: the pole sum over a Gauss rule and the Jacobi
//! continued fraction mu0/(z − b_1 − a_1²/(z − b_2 − …)).

use std::sync::Arc;

use rug::{Complex, Float};

use crate::csv::Table;
use crate::error::{Error, Result};
use crate::opsystems::OpSystem;
use crate::precision::{format_sci, PrecisionContext};
use crate::quadrature::QuadratureRule;

/// Pole-sum form of F_n built on a Gauss rule.
#[derive(Debug, Clone)]
pub struct ResolventApproximant {
    rule: Arc<QuadratureRule>,
}

impl ResolventApproximant {
    pub fn new(rule: Arc<QuadratureRule>) -> Result<Self> {
        if let Some(k) = rule.weights().iter().position(|w| !(*w > 0)) {
            return Err(Error::InvalidArgument(format!("residue {} is not positive", k + 1)));
        }
        Ok(Self { rule })
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn eval(&self, z: &Complex) -> Result<Complex> {
        pole_sum(&self.rule, z)
    }
}

/// Σ w[k]/(z − x[k]).
pub fn pole_sum(rule: &QuadratureRule, z: &Complex) -> Result<Complex> {
    let ctx = rule.ctx();
    let bits = ctx.bits();
    let eps = ctx.epsilon();
    let mut sum = Complex::new(bits);
    for (k, (x, w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        let d = Complex::with_val(bits, z - x);
        let size = Float::with_val(bits, d.abs_ref());
        let scale = Float::with_val(bits, x.abs_ref()) + 1u32;
        if size <= Float::with_val(bits, &scale * &eps) {
            return Err(Error::PoleHit(k + 1));
        }
        sum += Complex::with_val(bits, w / d);
    }
    Ok(sum)
}

/// n-th convergent of the Jacobi continued fraction, evaluated bottom-up.
pub fn continued_fraction(sys: &OpSystem, n: usize, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let j = sys.jacobi_matrix(n, ctx)?;
    let bits = ctx.bits();
    let tiny = Float::with_val(bits, j.norm_inf() + 1u32) * ctx.epsilon();
    let b = j.diag();
    let a = j.offdiag();
    let mut t = Complex::with_val(bits, z - &b[n - 1]);
    for lvl in (0..n - 1).rev() {
        if Float::with_val(bits, t.abs_ref()) <= tiny {
            return Err(Error::DivisionNearZero(lvl + 2));
        }
        let a2 = Float::with_val(bits, a[lvl].square_ref());
        let q = Complex::with_val(bits, a2 / &t);
        t = Complex::with_val(bits, z - &b[lvl]) - q;
    }
    if Float::with_val(bits, t.abs_ref()) <= tiny {
        return Err(Error::DivisionNearZero(1));
    }
    Ok(Complex::with_val(bits, sys.mu0(ctx) / t))
}

/// (z, Re F, Im F) rows for a grid of z values.
pub fn resolvent_table(appr: &ResolventApproximant, zs: &[Complex], sig: usize) -> Result<Table> {
    let mut t = Table::new(&["z_re", "z_im", "re_F", "im_F"]);
    t.comment(format!("system={}", appr.rule().system()));
    t.comment(format!("n={}", appr.rule().n()));
    for z in zs {
        let f = appr.eval(z)?;
        t.push(vec![
            format_sci(z.real(), sig),
            format_sci(z.imag(), sig),
            format_sci(f.real(), sig),
            format_sci(f.imag(), sig),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opsystems::catalog;
    use crate::quadrature::{analytic_chebyshev_rule, gauss_rule};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40, 10).unwrap()
    }

    fn cz(c: &PrecisionContext, re: f64, im: f64) -> Complex {
        Complex::with_val(c.bits(), (re, im))
    }

    fn cabs(v: &Complex) -> Float {
        Float::with_val(v.prec().0, v.abs_ref())
    }

    #[test]
    fn single_level_fraction() {
        let c = ctx();
        let z = cz(&c, 0.7, 0.4);
        let f = continued_fraction(&OpSystem::Chebyshev2, 1, &z, &c).unwrap();
        let want = Complex::with_val(c.bits(), c.pi() / 2u32) / z;
        assert!(cabs(&(f - want)) < c.tolerance());
    }

    #[test]
    fn large_z_asymptote() {
        let c = ctx();
        let rule = gauss_rule(&OpSystem::Chebyshev2, 20, &c).unwrap();
        let z = cz(&c, 0.0, 1e6);
        let zf = Complex::with_val(c.bits(), &z * pole_sum(&rule, &z).unwrap());
        let mu0 = rule.mu0();
        let rel = cabs(&(zf - &mu0)) / mu0;
        assert!(rel < 1e-5);
    }

    #[test]
    fn stieltjes_transform_closed_form() {
        let c = ctx();
        let rule = gauss_rule(&OpSystem::Chebyshev2, 50, &c).unwrap();
        let f = pole_sum(&rule, &cz(&c, 2.0, 0.0)).unwrap();
        let want = c.pi() * (2u32 - c.float(3u32).sqrt());
        let err = Float::with_val(c.bits(), f.real() - &want).abs();
        assert!(err < 1e-10, "{}", err.to_f64());
    }

    #[test]
    fn fraction_equals_pole_sum() {
        let c = ctx();
        let z = cz(&c, 2.0, 1.0);
        for sys in catalog() {
            for n in [1usize, 7, 20] {
                let rule = gauss_rule(&sys, n, &c).unwrap();
                let a = pole_sum(&rule, &z).unwrap();
                let b = continued_fraction(&sys, n, &z, &c).unwrap();
                assert!(cabs(&(a - &b)) <= c.tolerance() * (cabs(&b) + 1u32), "{sys} n={n}");
            }
        }
    }

    #[test]
    fn herglotz_and_symmetry() {
        let c = ctx();
        for sys in catalog() {
            let rule = gauss_rule(&sys, 15, &c).unwrap();
            for (re, im) in [(-3.0, 0.1), (0.0, 0.01), (0.5, 2.0), (4.0, 1e-3)] {
                let z = cz(&c, re, im);
                let f = pole_sum(&rule, &z).unwrap();
                assert!(*f.imag() < 0, "{sys} at {re}+{im}i");
                if sys.is_even() {
                    let mz = -Complex::with_val(c.bits(), z.conj_ref());
                    let g = pole_sum(&rule, &mz).unwrap();
                    let h = -Complex::with_val(c.bits(), f.conj_ref());
                    assert!(cabs(&(g - h)) < c.tolerance());
                }
            }
        }
    }

    #[test]
    fn legendre_convergents_settle() {
        let c = ctx();
        let z = cz(&c, 2.0, 0.0);
        let f100 = continued_fraction(&OpSystem::Legendre, 100, &z, &c).unwrap();
        let f200 = continued_fraction(&OpSystem::Legendre, 200, &z, &c).unwrap();
        assert!(cabs(&(f200 - f100)) < 1e-10);
    }

    #[test]
    fn pole_hit_detected() {
        let c = ctx();
        let rule = gauss_rule(&OpSystem::Chebyshev2, 3, &c).unwrap();
        let z = Complex::with_val(c.bits(), (&rule.nodes()[1], 0));
        assert_eq!(pole_sum(&rule, &z).unwrap_err(), Error::PoleHit(2));
    }

    #[test]
    fn boundary_value_approaches_minus_pi_rho() {
        // At x = 0 the exact transform gives Im F(iε) = −π(√(1+ε²) − ε).
        // The pole lattice of spacing h = π/(n+1), offset by h/2 from 0,
        // multiplies this by tanh(πε/h).
        let c = PrecisionContext::new(20, 10).unwrap();
        let n = 2000;
        let rule = analytic_chebyshev_rule(2, n, &c).unwrap();
        for eps in [1e-3, 2e-3] {
            let f = pole_sum(&rule, &cz(&c, 0.0, eps)).unwrap();
            let im = f.imag().to_f64();
            let smooth = -std::f64::consts::PI * ((1.0 + eps * eps).sqrt() - eps);
            let predicted = smooth * (eps * (n as f64 + 1.0)).tanh();
            assert!((im - predicted).abs() < 5e-4, "eps={eps}: {im} vs {predicted}");
        }
        let f = pole_sum(&rule, &cz(&c, 0.0, 2e-3)).unwrap();
        assert!((f.imag().to_f64() + std::f64::consts::PI).abs() <= 5e-2);
    }

    #[test]
    fn table_output() {
        let c = ctx();
        let appr = ResolventApproximant::new(gauss_rule(&OpSystem::Legendre, 5, &c).unwrap()).unwrap();
        let t = resolvent_table(&appr, &[cz(&c, 2.0, 1.0), cz(&c, 0.0, 0.5)], 10).unwrap();
        assert_eq!(t.header, vec!["z_re", "z_im", "re_F", "im_F"]);
        assert_eq!(t.rows.len(), 2);
    }
}
