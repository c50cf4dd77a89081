//! Convergence sweeps over N: derivative-rule error at x ≈ 0 for the
//! Chebyshev, Gegenbauer and Hermite cases and the histogram baseline.

use rug::Float;

use crate::csv::Table;
use crate::error::Result;
use crate::interpolation::InterpolationScheme;
use crate::inversion::{derivative_rule_invert, fit_convergence, histogram_invert, Law, HISTOGRAM_ORDER};
use crate::opsystems::OpSystem;
use crate::precision::{format_sci, log10_abs, PrecisionContext};
use crate::quadrature::{analytic_chebyshev_rule, gauss_rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// Chebyshev second kind, closed-form rules, order N−1.
    Chebyshev,
    /// Gegenbauer l = 20, order N−1.
    Gegenbauer,
    /// Hermite, order N−1.
    Hermite,
}

impl Sweep {
    /// (N, expected log10 error) pairs of the standard sweep.
    pub fn targets(self) -> &'static [(usize, f64)] {
        match self {
            Sweep::Chebyshev => &[(10, -10.0), (15, -15.0), (20, -25.0), (40, -58.0), (60, -99.0)],
            Sweep::Gegenbauer => &[(11, -5.1), (21, -8.7), (41, -15.4), (61, -21.8), (101, -34.4)],
            Sweep::Hermite => &[(11, -5.5), (21, -8.0), (41, -15.0), (61, -21.0), (101, -34.0)],
        }
    }

    /// Extra, expensive points.
    pub fn heavy_targets(self) -> &'static [(usize, f64)] {
        match self {
            Sweep::Chebyshev => &[],
            Sweep::Gegenbauer => &[(201, -65.3), (401, -126.3)],
            Sweep::Hermite => &[(201, -64.0), (401, -127.0)],
        }
    }

    pub fn default_digits(self) -> u32 {
        match self {
            Sweep::Chebyshev => 120,
            Sweep::Gegenbauer | Sweep::Hermite => 100,
        }
    }

    /// Digits needed for the heavy points.
    pub fn heavy_digits(self) -> u32 {
        300
    }

    pub fn system(self) -> OpSystem {
        match self {
            Sweep::Chebyshev => OpSystem::Chebyshev2,
            Sweep::Gegenbauer => OpSystem::Gegenbauer { l: 20 },
            Sweep::Hermite => OpSystem::Hermite,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n: usize,
    pub order: usize,
    pub err: Float,
    pub target_log10: Option<f64>,
}

impl SweepRow {
    pub fn log10_err(&self) -> f64 {
        log10_abs(&self.err)
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub name: String,
    pub system: String,
    pub digits: u32,
    /// Precision used for the expensive rows, when they were run.
    pub heavy_digits: Option<u32>,
    pub rows: Vec<SweepRow>,
    pub law: Law,
    pub fit: Option<f64>,
}

impl SweepReport {
    pub fn to_table(&self, sig: usize) -> Table {
        let mut t = Table::new(&["N", "order", "err", "log10_err", "target_log10"]);
        t.comment(format!("sweep={}", self.name));
        t.comment(format!("system={}", self.system));
        t.comment(format!("digits={}", self.digits));
        if let Some(h) = self.heavy_digits {
            t.comment(format!("heavy rows at digits={h}"));
        }
        match (self.law, self.fit) {
            (Law::Exponential, Some(a)) => t.comment(format!("fit alpha={a:.4}")),
            (Law::Power, Some(p)) => t.comment(format!("fit p={p:.4}")),
            _ => t.comment("fit unavailable"),
        };
        for r in &self.rows {
            t.push(vec![
                r.n.to_string(),
                r.order.to_string(),
                format_sci(&r.err, sig),
                format!("{:.3}", r.log10_err()),
                r.target_log10.map(|v| format!("{v}")).unwrap_or_default(),
            ]);
        }
        t
    }
}

/// Derivative-rule error at the node nearest 0 for one N.
pub fn central_error(sweep: Sweep, n: usize, ctx: &PrecisionContext) -> Result<Float> {
    let rule = match sweep {
        Sweep::Chebyshev => analytic_chebyshev_rule(2, n, ctx)?,
        _ => gauss_rule(&sweep.system(), n, ctx)?,
    };
    let rep = derivative_rule_invert(&rule, &InterpolationScheme::new(n - 1))?;
    Ok(rep.central_error().expect("closed-form weight"))
}

/// Run a sweep at the given digits; `heavy` appends the expensive points,
/// raising precision for them as needed.
pub fn run_sweep(sweep: Sweep, digits: u32, guard: u32, heavy: bool) -> Result<SweepReport> {
    let ctx = PrecisionContext::new(digits, guard)?;
    let mut points: Vec<(usize, f64, PrecisionContext)> = sweep.targets().iter().map(|&(n, t)| (n, t, ctx)).collect();
    if heavy {
        let hctx = PrecisionContext::new(digits.max(sweep.heavy_digits()), guard)?;
        points.extend(sweep.heavy_targets().iter().map(|&(n, t)| (n, t, hctx)));
    }
    let errs = crate::numerics::par_map(points.len(), |i| central_error(sweep, points[i].0, &points[i].2));
    let mut rows = Vec::with_capacity(points.len());
    for ((n, t, _), e) in points.iter().zip(errs) {
        rows.push(SweepRow { n: *n, order: n - 1, err: e?, target_log10: Some(*t) });
    }
    let pairs: Vec<(usize, Float)> = rows.iter().map(|r| (r.n, r.err.clone())).collect();
    let fit = fit_convergence(&pairs, Law::Exponential).ok();
    let name = match sweep {
        Sweep::Chebyshev => "chebyshev",
        Sweep::Gegenbauer => "gegenbauer",
        Sweep::Hermite => "hermite",
    };
    let heavy_digits = heavy.then(|| digits.max(sweep.heavy_digits()));
    Ok(SweepReport { name: name.into(), system: sweep.system().to_string(), digits, heavy_digits, rows, law: Law::Exponential, fit })
}

/// Histogram error at x ≈ 0 for Chebyshev second kind over closed-form rules.
pub fn histogram_sweep(ns: &[usize], order: Option<usize>, digits: u32, guard: u32) -> Result<SweepReport> {
    let ctx = PrecisionContext::new(digits, guard)?;
    let order = order.unwrap_or(HISTOGRAM_ORDER);
    let errs = crate::numerics::par_map(ns.len(), |i| -> Result<Float> {
        let rule = analytic_chebyshev_rule(2, ns[i], &ctx)?;
        Ok(histogram_invert(&rule, order)?.central_error().expect("closed-form weight"))
    });
    let mut rows = Vec::with_capacity(ns.len());
    for (n, e) in ns.iter().zip(errs) {
        rows.push(SweepRow { n: *n, order, err: e?, target_log10: None });
    }
    let pairs: Vec<(usize, Float)> = rows.iter().map(|r| (r.n, r.err.clone())).collect();
    let fit = fit_convergence(&pairs, Law::Power).ok();
    Ok(SweepReport { name: "histogram".into(), system: "cheb2".into(), digits, heavy_digits: None, rows, law: Law::Power, fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_rows_track_targets() {
        let rep = run_sweep(Sweep::Chebyshev, 40, 10, false);
        // 40 digits cannot resolve 10^-58; the early rows still must match
        let rep = rep.unwrap();
        for r in rep.rows.iter().take(2) {
            assert!((r.log10_err() - r.target_log10.unwrap()).abs() <= 2.0, "N={}", r.n);
        }
        let text = rep.to_table(6).render(true);
        assert!(text.starts_with("# sweep=chebyshev"));
    }

    #[test]
    fn histogram_power_law() {
        let rep = histogram_sweep(&[100, 200, 400], None, 20, 10).unwrap();
        let p = rep.fit.unwrap();
        assert!((1.5..=2.5).contains(&p), "{p}");
    }
}
