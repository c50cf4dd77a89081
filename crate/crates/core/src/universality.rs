//! Clock-rule spacings and weight-ratio universality diagnostics.

use rug::Float;

use crate::csv::Table;
use crate::error::{Error, Result};
use crate::interpolation::{InterpolationScheme, NodeDifferentiator};
use crate::precision::format_sci;
use crate::quadrature::{chebyshev_node_derivative, QuadratureRule};

/// Fraction of the index range kept as "interior" at each end.
pub const INTERIOR_CUT: f64 = 0.05;

pub fn is_interior(k: usize, n: usize) -> bool {
    let f = k as f64 / n as f64;
    (INTERIOR_CUT..=1.0 - INTERIOR_CUT).contains(&f)
}

/// How x′[k] is obtained.
#[derive(Debug, Clone)]
pub enum NodeDerivative {
    Interpolated(InterpolationScheme),
    /// Closed form; Chebyshev rules only.
    Analytic,
}

#[derive(Debug, Clone)]
pub struct ProbeRecord {
    pub k: usize,
    pub x: Float,
    /// x[k] − x[k−1]; absent for k = 1.
    pub delta: Option<Float>,
    pub xprime: Float,
    pub xprime_half: Option<Float>,
    pub wratio: Option<Float>,
    pub universal: Float,
}

impl ProbeRecord {
    /// Δ[k]/x′[k].
    pub fn ratio_backward(&self) -> Option<Float> {
        self.delta.as_ref().map(|d| Float::with_val(d.prec(), d / &self.xprime))
    }

    /// Δ[k]/x′[k − 1/2].
    pub fn ratio_central(&self) -> Option<Float> {
        match (&self.delta, &self.xprime_half) {
            (Some(d), Some(h)) => Some(Float::with_val(d.prec(), d / h)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct UniversalityProbe {
    pub system: String,
    pub n: usize,
    /// The system lies outside the class the clock rule is proved for.
    pub out_of_theory: bool,
    pub records: Vec<ProbeRecord>,
}

impl UniversalityProbe {
    /// max over interior k of |ratio − 1| for the backward or central ratio.
    pub fn max_ratio_error(&self, central: bool) -> f64 {
        self.records
            .iter()
            .filter(|r| is_interior(r.k, self.n))
            .filter_map(|r| if central { r.ratio_central() } else { r.ratio_backward() })
            .map(|v| (v.to_f64() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_table(&self, sig: usize) -> Table {
        let mut t = Table::new(&["k", "x", "delta", "xprime", "ratio_backward", "ratio_central", "wratio", "universal"]);
        t.comment(format!("system={}", self.system));
        t.comment(format!("n={}", self.n));
        if self.out_of_theory {
            t.comment("outside the Nevai-Blumenthal class");
        }
        let opt = |v: Option<Float>| v.map(|f| format_sci(&f, sig)).unwrap_or_default();
        for r in &self.records {
            t.push(vec![
                r.k.to_string(),
                format_sci(&r.x, sig),
                opt(r.delta.clone()),
                format_sci(&r.xprime, sig),
                opt(r.ratio_backward()),
                opt(r.ratio_central()),
                opt(r.wratio.clone()),
                format_sci(&r.universal, sig),
            ]);
        }
        t
    }
}

/// (π/n)√(1−x²), zero outside [−1, 1].
pub fn universal_curve(x: &Float, n: usize) -> Float {
    let bits = x.prec();
    let s = Float::with_val(bits, 1u32 - Float::with_val(bits, x.square_ref()));
    if s <= 0 {
        return Float::new(bits);
    }
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    s.sqrt() * pi / n as u64
}

/// Spacings, node derivatives, their ratios and weight ratios of one rule.
pub fn clock_probe(rule: &QuadratureRule, deriv: &NodeDerivative) -> Result<UniversalityProbe> {
    let n = rule.n();
    if n < 10 {
        return Err(Error::InvalidArgument(format!("clock probe needs n >= 10, got {n}")));
    }
    let ctx = rule.ctx();
    let sys = rule.system();
    let nodes = rule.nodes();
    let (xp, xh): (Vec<Float>, Vec<Option<Float>>) = match deriv {
        NodeDerivative::Analytic => {
            let kind = sys
                .chebyshev_kind()
                .ok_or_else(|| Error::InvalidArgument(format!("no closed-form node map for {sys}")))?;
            let mut xp = Vec::with_capacity(n);
            let mut xh = Vec::with_capacity(n);
            for k in 1..=n {
                xp.push(chebyshev_node_derivative(kind, n, &ctx.float(k as u64), ctx)?);
                xh.push(if k > 1 { Some(chebyshev_node_derivative(kind, n, &ctx.float(k as f64 - 0.5), ctx)?) } else { None });
            }
            (xp, xh)
        }
        NodeDerivative::Interpolated(scheme) => {
            let mut d = NodeDifferentiator::new(nodes, scheme)?;
            let mut xp = Vec::with_capacity(n);
            let mut xh = Vec::with_capacity(n);
            for k in 1..=n {
                xp.push(d.derivative(k as f64)?);
                xh.push(if k > 1 { Some(d.derivative(k as f64 - 0.5)?) } else { None });
            }
            (xp, xh)
        }
    };
    let records = (0..n)
        .zip(xp)
        .zip(xh)
        .map(|((i, xprime), xprime_half)| {
            let x = nodes[i].clone();
            let delta = (i > 0).then(|| Float::with_val(ctx.bits(), &x - &nodes[i - 1]));
            let wratio = sys.weight(&x, ctx).ok().map(|rho| Float::with_val(ctx.bits(), &rule.weights()[i] / &rho));
            let universal = universal_curve(&x, n);
            ProbeRecord { k: i + 1, x, delta, xprime, xprime_half, wratio, universal }
        })
        .collect();
    Ok(UniversalityProbe { system: sys.to_string(), n, out_of_theory: !sys.is_nevai_blumenthal(), records })
}

/// Largest pairwise gap between curves sampled at the same interior k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveDeviation {
    /// max |f − g| / max|g|: the gap relative to the curve's scale.
    pub scaled: f64,
    /// max |f − g| / |g| pointwise.
    pub relative: f64,
}

/// Compare every pair among the given curves (index-aligned, 1-based k
/// from `k0`) over interior k of order n.
pub fn pairwise_deviation(curves: &[Vec<f64>], k0: usize, n: usize) -> CurveDeviation {
    let mut scaled: f64 = 0.0;
    let mut relative: f64 = 0.0;
    for (i, f) in curves.iter().enumerate() {
        for g in &curves[i + 1..] {
            let len = f.len().min(g.len());
            let keep = |j: &usize| is_interior(j + k0, n);
            let scale = (0..len).filter(keep).map(|j| f[j].abs().max(g[j].abs())).fold(0.0, f64::max);
            for j in (0..len).filter(keep) {
                let d = (f[j] - g[j]).abs();
                scaled = scaled.max(d / scale);
                relative = relative.max(d / f[j].abs().min(g[j].abs()));
            }
        }
    }
    CurveDeviation { scaled, relative }
}

/// The Δ and x′ curves of each probe in a form `pairwise_deviation` accepts,
/// all starting at k = 2.
pub fn clock_curves(probes: &[UniversalityProbe]) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for p in probes {
        out.push(p.records[1..].iter().map(|r| r.delta.as_ref().unwrap().to_f64()).collect());
        out.push(p.records[1..].iter().map(|r| r.xprime.to_f64()).collect());
    }
    out
}

#[derive(Debug, Clone)]
pub struct WeightRatioCurve {
    pub system: String,
    pub n: usize,
    /// (k, x, w/ρ, universal)
    pub points: Vec<(usize, Float, Float, Float)>,
    /// max interior |w/ρ − universal|/universal
    pub max_interior_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct WeightRatioReport {
    pub curves: Vec<WeightRatioCurve>,
    /// Largest interior gap between any two systems' w/ρ at matched x,
    /// relative to the universal curve.
    pub cross_deviation: f64,
}

impl WeightRatioReport {
    pub fn to_table(&self, sig: usize) -> Table {
        let mut t = Table::new(&["system", "k", "x", "wratio", "universal", "rel_dev"]);
        t.comment(format!("cross_system_max_deviation={:.6e}", self.cross_deviation));
        for c in &self.curves {
            t.comment(format!("{} n={} max_interior_deviation={:.6e}", c.system, c.n, c.max_interior_deviation));
            for (k, x, w, u) in &c.points {
                let dev = rel(w, u);
                t.push(vec![c.system.clone(), k.to_string(), format_sci(x, sig), format_sci(w, sig), format_sci(u, sig), format!("{dev:.6e}")]);
            }
        }
        t
    }
}

fn rel(w: &Float, u: &Float) -> f64 {
    let d = Float::with_val(w.prec(), w - u).abs();
    (d / u).to_f64()
}

/// w[k]/ρ(x[k]) against (π/n)√(1−x²) for several systems of the same order.
pub fn weight_ratio_probe(rules: &[&QuadratureRule]) -> Result<WeightRatioReport> {
    let mut curves = Vec::with_capacity(rules.len());
    for rule in rules {
        let n = rule.n();
        if rules.iter().any(|r| r.n() != n) {
            return Err(Error::InvalidArgument("weight-ratio probe needs rules of equal order".into()));
        }
        let ctx = rule.ctx();
        let sys = rule.system();
        let mut points = Vec::with_capacity(n);
        let mut worst: f64 = 0.0;
        for (i, (x, w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
            let Ok(rho) = sys.weight(x, ctx) else {
                if sys.has_discrete_part() && *x < -1 {
                    continue;
                }
                return Err(Error::OutOfSupport(format!("node {} of {sys}", i + 1)));
            };
            let wr = Float::with_val(ctx.bits(), w / &rho);
            let u = universal_curve(x, n);
            if is_interior(i + 1, n) {
                worst = worst.max(rel(&wr, &u));
            }
            points.push((i + 1, x.clone(), wr, u));
        }
        curves.push(WeightRatioCurve { system: sys.to_string(), n, points, max_interior_deviation: worst });
    }
    let mut cross: f64 = 0.0;
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            cross = cross.max(matched_gap(a, b)).max(matched_gap(b, a));
        }
    }
    Ok(WeightRatioReport { curves, cross_deviation: cross })
}

/// Interior gap of a against b linearly interpolated at a's abscissae.
fn matched_gap(a: &WeightRatioCurve, b: &WeightRatioCurve) -> f64 {
    let bx: Vec<f64> = b.points.iter().map(|p| p.1.to_f64()).collect();
    let by: Vec<f64> = b.points.iter().map(|p| p.2.to_f64()).collect();
    let mut worst: f64 = 0.0;
    for (k, x, w, u) in &a.points {
        if !is_interior(*k, a.n) {
            continue;
        }
        let xf = x.to_f64();
        let j = bx.partition_point(|v| *v < xf);
        if j == 0 || j >= bx.len() {
            continue;
        }
        let t = (xf - bx[j - 1]) / (bx[j] - bx[j - 1]);
        let g = by[j - 1] + t * (by[j] - by[j - 1]);
        worst = worst.max((w.to_f64() - g).abs() / u.to_f64());
    }
    worst
}

/// Weight carried by nodes below −1 and their count.
pub fn pollaczek_missing_mass(rule: &QuadratureRule) -> (usize, Float) {
    rule.below_minus_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opsystems::OpSystem;
    use crate::precision::PrecisionContext;
    use crate::quadrature::{analytic_chebyshev_rule, gauss_rule};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30, 10).unwrap()
    }

    #[test]
    fn interior_cut() {
        assert!(!is_interior(4, 100));
        assert!(is_interior(5, 100));
        assert!(is_interior(95, 100));
        assert!(!is_interior(96, 100));
    }

    #[test]
    fn chebyshev1_weight_ratio_is_universal() {
        let c = ctx();
        let rule = analytic_chebyshev_rule(1, 40, &c).unwrap();
        let rep = weight_ratio_probe(&[&rule]).unwrap();
        for (_, _, w, u) in &rep.curves[0].points {
            assert!(Float::with_val(c.bits(), w - u).abs() < c.tolerance());
        }
    }

    #[test]
    fn central_beats_backward_at_ten() {
        let c = ctx();
        for kind in 1..=3u8 {
            let rule = analytic_chebyshev_rule(kind, 10, &c).unwrap();
            let p = clock_probe(&rule, &NodeDerivative::Analytic).unwrap();
            for r in p.records.iter().filter(|r| r.k >= 2 && is_interior(r.k, 10)) {
                let b = Float::with_val(c.bits(), r.ratio_backward().unwrap() - 1u32).abs();
                let m = Float::with_val(c.bits(), r.ratio_central().unwrap() - 1u32).abs();
                assert!(m <= Float::with_val(c.bits(), &b + c.tolerance()), "kind {kind} k {}", r.k);
            }
            assert!(p.max_ratio_error(true) < p.max_ratio_error(false));
        }
    }

    #[test]
    fn interpolated_matches_analytic() {
        let c = ctx();
        let rule = analytic_chebyshev_rule(2, 30, &c).unwrap();
        let a = clock_probe(&rule, &NodeDerivative::Analytic).unwrap();
        let b = clock_probe(&rule, &NodeDerivative::Interpolated(InterpolationScheme::new(29))).unwrap();
        for (ra, rb) in a.records.iter().zip(&b.records).filter(|(r, _)| is_interior(r.k, 30)) {
            assert!((ra.xprime.to_f64() - rb.xprime.to_f64()).abs() < 1e-15);
        }
    }

    #[test]
    fn clock_probe_rejects_small_n() {
        let c = ctx();
        let rule = analytic_chebyshev_rule(2, 9, &c).unwrap();
        assert!(clock_probe(&rule, &NodeDerivative::Analytic).is_err());
    }

    #[test]
    fn out_of_theory_flag() {
        let c = ctx();
        let rule = gauss_rule(&OpSystem::Hermite, 12, &c).unwrap();
        let p = clock_probe(&rule, &NodeDerivative::Interpolated(InterpolationScheme::new(6))).unwrap();
        assert!(p.out_of_theory);
        assert!(p.to_table(8).render(true).contains("outside the Nevai-Blumenthal class"));
    }

    #[test]
    fn repulsive_pollaczek_has_no_missing_mass() {
        let c = ctx();
        let rule = gauss_rule(&OpSystem::pollaczek(0, 1, 4), 40, &c).unwrap();
        let (count, w) = pollaczek_missing_mass(&rule);
        assert_eq!(count, 0);
        assert!(w.is_zero());
    }

    #[test]
    fn attractive_mass_balance() {
        let c = ctx();
        let rule = gauss_rule(&OpSystem::pollaczek(0, -1, 4), 50, &c).unwrap();
        let (count, below) = pollaczek_missing_mass(&rule);
        assert!(count > 0);
        let total = rule.weight_sum();
        let inside = Float::with_val(c.bits(), &total - &below);
        assert!(inside > 0);
        assert!((total - 1u32).abs() < c.tolerance());
    }

    #[test]
    fn identical_curves_have_no_deviation() {
        let f = vec![1.0, 2.0, 3.0, 4.0];
        let d = pairwise_deviation(&[f.clone(), f], 1, 4);
        assert_eq!(d.scaled, 0.0);
        assert_eq!(d.relative, 0.0);
    }
}
