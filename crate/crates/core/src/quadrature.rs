//! Gauss rules from the Jacobi matrix or from closed forms (Chebyshev).

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use rug::Float;

use crate::csv::Table;
use crate::error::{Error, Result};
use crate::numerics::eigen_tridiagonal;
use crate::opsystems::OpSystem;
use crate::precision::{format_sci, PrecisionContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleSource {
    JacobiMatrix,
    Analytic,
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    system: OpSystem,
    nodes: Vec<Float>,
    weights: Vec<Float>,
    ctx: PrecisionContext,
    source: RuleSource,
}

impl QuadratureRule {
    pub fn system(&self) -> &OpSystem {
        &self.system
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn source(&self) -> RuleSource {
        self.source
    }

    pub fn mu0(&self) -> Float {
        self.system.mu0(&self.ctx)
    }

    pub fn weight_sum(&self) -> Float {
        let mut s = self.ctx.zero();
        for w in &self.weights {
            s += w;
        }
        s
    }

    /// Nodes below −1 (attractive Pollaczek bound states): count and weight sum.
    pub fn below_minus_one(&self) -> (usize, Float) {
        let mut s = self.ctx.zero();
        let mut c = 0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            if *x < -1 {
                c += 1;
                s += w;
            }
        }
        (c, s)
    }

    /// 0-based index of the node closest to 0; the lower one on ties.
    pub fn center_index(&self) -> usize {
        let tol = self.ctx.tolerance();
        let mut best = 0;
        for k in 1..self.n() {
            let gap = Float::with_val(self.ctx.bits(), self.nodes[best].abs_ref())
                - Float::with_val(self.ctx.bits(), self.nodes[k].abs_ref());
            if gap > tol {
                best = k;
            }
        }
        best
    }

    /// `k,x,w` table with `digits` significant decimals.
    pub fn to_table(&self, digits: usize) -> Table {
        let mut t = Table::new(&["k", "x", "w"]);
        for (k, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            t.push(vec![(k + 1).to_string(), format_sci(x, digits), format_sci(w, digits)]);
        }
        t
    }
}

type Key = (String, usize, u32, u32, RuleSource);

static CACHE: LazyLock<Mutex<HashMap<Key, Arc<QuadratureRule>>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

fn cached(key: Key, build: impl FnOnce() -> Result<QuadratureRule>) -> Result<Arc<QuadratureRule>> {
    if let Some(r) = CACHE.lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(r));
    }
    // built outside the lock; a racing builder produces an identical rule
    let rule = Arc::new(build()?);
    let mut map = CACHE.lock().expect("rule cache poisoned");
    Ok(Arc::clone(map.entry(key).or_insert(rule)))
}

/// Drops every cached rule.
pub fn clear_rule_cache() {
    CACHE.lock().expect("rule cache poisoned").clear();
}

/// Gauss rule from the eigen-decomposition of the order-n Jacobi matrix.
pub fn gauss_rule(sys: &OpSystem, n: usize, ctx: &PrecisionContext) -> Result<Arc<QuadratureRule>> {
    let key = (sys.spec_string(), n, ctx.working_digits(), ctx.guard_digits(), RuleSource::JacobiMatrix);
    cached(key, || {
        let j = sys.jacobi_matrix(n, ctx)?;
        let e = eigen_tridiagonal(&j, ctx)?;
        let mu0 = sys.mu0(ctx);
        let weights = e.first_components.iter().map(|u| Float::with_val(ctx.bits(), u.square_ref()) * &mu0).collect();
        Ok(QuadratureRule { system: sys.clone(), nodes: e.values, weights, ctx: *ctx, source: RuleSource::JacobiMatrix })
    })
}

fn check_kind(kind: u8) -> Result<()> {
    if (1..=4).contains(&kind) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("Chebyshev kind {kind} not in 1..=4")))
    }
}

/// Angle φ with x = −cos φ, and dφ/dk, at a real index t.
fn chebyshev_angle(kind: u8, n: usize, t: &Float, ctx: &PrecisionContext) -> (Float, Float) {
    let pi = ctx.pi();
    let n = n as u64;
    let (num, den) = match kind {
        1 => (Float::with_val(ctx.bits(), t * 2u32) - 1u32, 2 * n),
        2 => (t.clone(), n + 1),
        3 => (Float::with_val(ctx.bits(), t * 2u32) - 1u32, 2 * n + 1),
        _ => (Float::with_val(ctx.bits(), t * 2u32), 2 * n + 1),
    };
    let step = match kind {
        1 => Float::with_val(ctx.bits(), &pi / n),
        2 => Float::with_val(ctx.bits(), &pi / (n + 1)),
        _ => Float::with_val(ctx.bits(), &pi * 2u32) / (2 * n + 1),
    };
    (num * pi / den, step)
}

/// Closed-form node x(t) at a real index t ∈ [1, n] (half-integers included).
pub fn chebyshev_node(kind: u8, n: usize, t: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_kind(kind)?;
    let (phi, _) = chebyshev_angle(kind, n, t, ctx);
    Ok(-phi.cos())
}

/// Closed-form dx/dk at a real index t.
pub fn chebyshev_node_derivative(kind: u8, n: usize, t: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_kind(kind)?;
    let (phi, step) = chebyshev_angle(kind, n, t, ctx);
    Ok(phi.sin() * step)
}

/// Rule from the closed-form Chebyshev nodes and weights; no eigensolve.
pub fn analytic_chebyshev_rule(kind: u8, n: usize, ctx: &PrecisionContext) -> Result<Arc<QuadratureRule>> {
    check_kind(kind)?;
    if n == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let sys = OpSystem::chebyshev(kind)?;
    let key = (sys.spec_string(), n, ctx.working_digits(), ctx.guard_digits(), RuleSource::Analytic);
    cached(key, || {
        let bits = ctx.bits();
        let pi = ctx.pi();
        let nn = n as u64;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for k in 1..=n {
            let t = ctx.float(k as u64);
            nodes.push(chebyshev_node(kind, n, &t, ctx)?);
            let w = match kind {
                1 => Float::with_val(bits, &pi / nn),
                2 => {
                    let s = Float::with_val(bits, &pi * k as u64) / (nn + 1);
                    s.sin().square() * &pi / (nn + 1)
                }
                3 => {
                    let s = Float::with_val(bits, &pi * (nn + 1 - k as u64)) / (2 * nn + 1);
                    s.sin().square() * &pi * 4u32 / (2 * nn + 1)
                }
                _ => {
                    let s = Float::with_val(bits, &pi * k as u64) / (2 * nn + 1);
                    s.sin().square() * &pi * 4u32 / (2 * nn + 1)
                }
            };
            weights.push(w);
        }
        Ok(QuadratureRule { system: sys, nodes, weights, ctx: *ctx, source: RuleSource::Analytic })
    })
}

/// Σ w[k] g(x[k]); fails if g returns a non-finite value.
pub fn integrate(rule: &QuadratureRule, g: impl Fn(&Float) -> Float) -> Result<Float> {
    let mut s = rule.ctx.zero();
    for (k, (x, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let v = g(x);
        if !v.is_finite() {
            return Err(Error::EvaluationFailure(k + 1));
        }
        s += Float::with_val(rule.ctx.bits(), &v * w);
    }
    Ok(s)
}

/// w^EQ[k] = w[k]/ρ(x[k]).
pub fn equivalent_weights(rule: &QuadratureRule, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| Ok(Float::with_val(ctx.bits(), w) / rule.system.weight(x, ctx)?))
        .collect()
}

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
mod oracle;

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;
    use crate::opsystems::catalog;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40, 10).unwrap()
    }

    fn near(a: &Float, b: &Float, tol: &Float) -> bool {
        Float::with_val(a.prec(), a - b).abs() <= *tol
    }

    #[test]
    fn chebyshev1_equal_weights() {
        let c = ctx();
        let r = gauss_rule(&OpSystem::Chebyshev1, 4, &c).unwrap();
        let want = c.pi() / 4u32;
        assert!(r.weights().iter().all(|w| near(w, &want, &c.tolerance())));
    }

    #[test]
    fn chebyshev2_order3() {
        let c = ctx();
        let r = gauss_rule(&OpSystem::Chebyshev2, 3, &c).unwrap();
        let h = c.float(2u32).sqrt() / 2u32;
        let pi = c.pi();
        let xs = [-h.clone(), c.zero(), h];
        let ws = [pi.clone() / 8u32, pi.clone() / 4u32, pi / 8u32];
        for k in 0..3 {
            assert!(near(&r.nodes()[k], &xs[k], &c.tolerance()));
            assert!(near(&r.weights()[k], &ws[k], &c.tolerance()));
        }
    }

    #[test]
    fn legendre_order2() {
        let c = ctx();
        let r = gauss_rule(&OpSystem::Legendre, 2, &c).unwrap();
        let x = c.float(3u32).sqrt().recip();
        assert!(near(&r.nodes()[0], &-x.clone(), &c.tolerance()));
        assert!(near(&r.nodes()[1], &x, &c.tolerance()));
        for j in 0..4u32 {
            let got = integrate(&r, |x| x.clone().pow(j)).unwrap();
            let want = if j % 2 == 0 { c.float(2u32) / (j + 1) } else { c.zero() };
            assert!(near(&got, &want, &c.tolerance()), "x^{j}");
        }
    }

    #[test]
    fn analytic_matches_jacobi() {
        let c = ctx();
        for kind in 1..=4u8 {
            for n in [1usize, 2, 7, 25] {
                let a = analytic_chebyshev_rule(kind, n, &c).unwrap();
                let j = gauss_rule(&OpSystem::chebyshev(kind).unwrap(), n, &c).unwrap();
                for k in 0..n {
                    assert!(near(&a.nodes()[k], &j.nodes()[k], &c.tolerance()), "kind {kind} n {n} k {k}");
                    assert!(near(&a.weights()[k], &j.weights()[k], &c.tolerance()), "kind {kind} n {n} k {k}");
                }
            }
        }
    }

    #[test]
    fn analytic_examples() {
        let c = ctx();
        let r = analytic_chebyshev_rule(1, 2, &c).unwrap();
        let h = c.float(2u32).sqrt() / 2u32;
        assert!(near(&r.nodes()[0], &-h.clone(), &c.tolerance()));
        assert!(near(&r.nodes()[1], &h, &c.tolerance()));
        let r = analytic_chebyshev_rule(4, 3, &c).unwrap();
        let want = (c.pi() / 7u32).sin().square() * c.pi() * 4u32 / 7u32;
        assert!(near(&r.weights()[0], &want, &c.tolerance()));
        assert!(analytic_chebyshev_rule(5, 3, &c).is_err());
    }

    #[test]
    fn integrate_examples() {
        let c = ctx();
        let r = gauss_rule(&OpSystem::Chebyshev2, 3, &c).unwrap();
        let one = integrate(&r, |_| c.float(1u32)).unwrap();
        assert!(near(&one, &r.mu0(), &c.tolerance()));
        let x2 = integrate(&r, |x| x.clone().square()).unwrap();
        assert!(near(&x2, &(c.pi() / 8u32), &c.tolerance()));
        // x^6 = x^(2n) is beyond the exactness degree: true moment is 5π/128
        let x6 = integrate(&r, |x| x.clone().pow(6u32)).unwrap();
        let exact = c.pi() * 5u32 / 128u32;
        assert!(Float::with_val(c.bits(), &x6 - &exact).abs() > 1e-3);
        let bad = integrate(&r, |x| if *x > 0.5 { c.float(f64::NAN) } else { x.clone() });
        assert_eq!(bad.unwrap_err(), Error::EvaluationFailure(3));
    }

    #[test]
    fn equivalent_weight_examples() {
        let c = ctx();
        let n = 12;
        let r = gauss_rule(&OpSystem::Chebyshev2, n, &c).unwrap();
        let eq = equivalent_weights(&r, &c).unwrap();
        let pi = c.pi();
        for k in 1..=n {
            let s = Float::with_val(c.bits(), &pi * k as u32) / (n as u32 + 1);
            let want = s.sin() * &pi / (n as u32 + 1);
            assert!(near(&eq[k - 1], &want, &c.tolerance()));
        }
        let r = gauss_rule(&OpSystem::Chebyshev1, 10, &c).unwrap();
        let eq = equivalent_weights(&r, &c).unwrap();
        for (x, e) in r.nodes().iter().zip(&eq) {
            let want = (1u32 - x.clone().square()).sqrt() * c.pi() / 10u32;
            assert!(near(e, &want, &c.tolerance()));
        }
        let r = gauss_rule(&OpSystem::Legendre, 20, &c).unwrap();
        let eq = equivalent_weights(&r, &c).unwrap();
        assert_eq!(eq, r.weights());
    }

    #[test]
    fn weights_sum_to_mass_and_nodes_interlace() {
        let c = PrecisionContext::new(20, 10).unwrap();
        for sys in catalog() {
            let mut prev: Option<Arc<QuadratureRule>> = None;
            for n in 1..=40 {
                let r = gauss_rule(&sys, n, &c).unwrap();
                assert!(r.weights().iter().all(|w| *w > 0));
                assert!(near(&r.weight_sum(), &r.mu0(), &c.tolerance()), "{sys} n={n}");
                // deep Pollaczek bound states converge faster than the working precision
                if let Some(p) = prev {
                    let tol = c.tolerance();
                    for k in 0..n - 1 {
                        let lo = Float::with_val(c.bits(), &p.nodes()[k] - &r.nodes()[k]);
                        let hi = Float::with_val(c.bits(), &r.nodes()[k + 1] - &p.nodes()[k]);
                        assert!(lo > -tol.clone() && hi > -tol.clone(), "{sys} n={n} k={k}");
                        if !sys.has_discrete_part() {
                            assert!(lo > 0 && hi > 0, "{sys} n={n} k={k}");
                        }
                    }
                }
                prev = Some(r);
            }
        }
    }

    #[test]
    fn monomial_exactness_small_orders() {
        let c = ctx();
        let bits = c.bits() + 40;
        for sys in catalog().into_iter().filter(|s| !s.has_discrete_part()) {
            for n in [1usize, 3, 6] {
                let r = gauss_rule(&sys, n, &c).unwrap();
                for j in 0..(2 * n as u32) {
                    let want = oracle::moment(&sys.spec_string(), j, bits, 45);
                    let got = integrate(&r, |x| x.clone().pow(j)).unwrap();
                    let scale = Float::with_val(bits, want.abs_ref()).max(&Float::with_val(bits, 1));
                    let err = Float::with_val(bits, &got - &want).abs() / scale;
                    assert!(err <= c.tolerance(), "{sys} n={n} j={j}: {}", err.to_f64());
                }
            }
        }
    }

    #[test]
    fn cache_returns_shared_rule() {
        let c = ctx();
        let a = gauss_rule(&OpSystem::Hermite, 9, &c).unwrap();
        let b = gauss_rule(&OpSystem::Hermite, 9, &c).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn center_index_picks_lower_on_ties() {
        let c = ctx();
        assert_eq!(gauss_rule(&OpSystem::Chebyshev2, 10, &c).unwrap().center_index(), 4);
        assert_eq!(gauss_rule(&OpSystem::Chebyshev2, 11, &c).unwrap().center_index(), 5);
    }
}
