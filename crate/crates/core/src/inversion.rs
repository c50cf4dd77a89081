//! Recovering ρ from a Gauss rule.
//!
//! The derivative rule reads ρ(x[k]) = w[k]/x′[k], with x′ the derivative of
//! the node map k ↦ x[k]. The histogram baseline differentiates the step
//! function of cumulative weights instead.

use rug::Float;

use crate::csv::Table;
use crate::error::{Error, Result};
use crate::interpolation::{derivative_at_general, BoundaryPolicy, InterpolationScheme, NodeDifferentiator};
use crate::precision::{format_sci, log10_abs};
use crate::quadrature::{chebyshev_node_derivative, QuadratureRule};

/// Default window order for the histogram baseline.
pub const HISTOGRAM_ORDER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    DerivativeRule,
    /// Derivative rule with closed-form x′ (Chebyshev only).
    AnalyticDerivative,
    Histogram,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::DerivativeRule => "derivative_rule",
            Method::AnalyticDerivative => "derivative_rule_analytic",
            Method::Histogram => "histogram",
        }
    }
}

#[derive(Debug, Clone)]
pub struct NodeRecord {
    /// 1-based index in the full rule.
    pub k: usize,
    pub x: Float,
    pub rho_exact: Option<Float>,
    pub rho_approx: Float,
}

impl NodeRecord {
    pub fn err_abs(&self) -> Option<Float> {
        self.rho_exact.as_ref().map(|e| Float::with_val(e.prec(), e - &self.rho_approx).abs())
    }

    pub fn err_rel(&self) -> Option<Float> {
        let e = self.rho_exact.as_ref()?;
        (*e > 0).then(|| self.err_abs().unwrap() / e)
    }

    pub fn err_weighted(&self) -> Option<Float> {
        let e = self.rho_exact.as_ref()?;
        Some(self.err_abs().unwrap() * e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    /// err ≈ 10^(−N/α)
    Exponential,
    /// err ≈ C·N^(−p)
    Power,
}

#[derive(Debug, Clone)]
pub struct InversionReport {
    pub method: Method,
    pub system: String,
    pub n: usize,
    /// Interpolation description, e.g. `order=9 boundary=shrink`.
    pub scheme: String,
    pub digits: u32,
    pub records: Vec<NodeRecord>,
    /// Nodes below −1 left out of the reconstruction: count and weight sum.
    pub excluded: Option<(usize, Float)>,
    pub fits: Vec<(Law, f64)>,
}

impl InversionReport {
    /// Record at the node nearest x = 0 (the lower one on ties).
    pub fn nearest_zero(&self) -> Option<&NodeRecord> {
        let mut best: Option<&NodeRecord> = None;
        for r in &self.records {
            match best {
                Some(b) if Float::with_val(53, r.x.abs_ref()) >= Float::with_val(53, b.x.abs_ref()) => {}
                _ => best = Some(r),
            }
        }
        best
    }

    /// Absolute error at the node nearest 0.
    pub fn central_error(&self) -> Option<Float> {
        self.nearest_zero()?.err_abs()
    }

    /// Largest absolute error over records with k/n in [lo, hi].
    pub fn max_error_between(&self, lo: f64, hi: f64) -> Option<Float> {
        self.records
            .iter()
            .filter(|r| {
                let f = r.k as f64 / self.n as f64;
                f >= lo && f <= hi
            })
            .filter_map(NodeRecord::err_abs)
            .max_by(|a, b| a.partial_cmp(b).unwrap())
    }

    pub fn to_table(&self, sig: usize) -> Table {
        let mut t = Table::new(&["k", "x", "rho_exact", "rho_approx", "err_abs", "err_rel", "err_weighted"]);
        t.comment(format!("method={}", self.method.tag()));
        t.comment(format!("system={}", self.system));
        t.comment(format!("N={}", self.n));
        t.comment(self.scheme.clone());
        t.comment(format!("digits={}", self.digits));
        if let Some((c, w)) = &self.excluded {
            t.comment(format!("excluded_below_minus_one count={c} weight_sum={}", format_sci(w, sig)));
        }
        for (law, v) in &self.fits {
            match law {
                Law::Exponential => t.comment(format!("fit alpha={v:.4}")),
                Law::Power => t.comment(format!("fit p={v:.4}")),
            };
        }
        let opt = |v: Option<Float>| v.map(|f| format_sci(&f, sig)).unwrap_or_default();
        for r in &self.records {
            t.push(vec![
                r.k.to_string(),
                format_sci(&r.x, sig),
                opt(r.rho_exact.clone()),
                format_sci(&r.rho_approx, sig),
                opt(r.err_abs()),
                opt(r.err_rel()),
                opt(r.err_weighted()),
            ]);
        }
        t
    }
}

fn scheme_string(s: &InterpolationScheme) -> String {
    match s.boundary {
        BoundaryPolicy::Shrink => format!("order={} boundary=shrink", s.order),
        BoundaryPolicy::Thiele { points, width } => {
            format!("order={} boundary=thiele points={points} width={width}", s.order)
        }
    }
}

/// First 0-based index of the nodes taking part in the reconstruction.
fn first_included(rule: &QuadratureRule) -> (usize, Option<(usize, Float)>) {
    if rule.system().has_discrete_part() {
        let (c, w) = rule.below_minus_one();
        (c, Some((c, w)))
    } else {
        (0, None)
    }
}

fn exact_at(rule: &QuadratureRule, x: &Float) -> Option<Float> {
    rule.system().weight(x, rule.ctx()).ok()
}

/// ρ(x[k]) ≈ w[k]/x′[k] with x′ from windowed interpolation of the nodes.
pub fn derivative_rule_invert(rule: &QuadratureRule, scheme: &InterpolationScheme) -> Result<InversionReport> {
    let (skip, excluded) = first_included(rule);
    let nodes = &rule.nodes()[skip..];
    let mut diff = NodeDifferentiator::new(nodes, scheme)?;
    let mut records = Vec::with_capacity(nodes.len());
    for (i, x) in nodes.iter().enumerate() {
        let d = diff.derivative((i + 1) as f64)?;
        let k = skip + i + 1;
        if !(d > 0) {
            return Err(Error::ZeroDerivative(k));
        }
        let rho = Float::with_val(x.prec(), &rule.weights()[k - 1] / &d);
        records.push(NodeRecord { k, x: x.clone(), rho_exact: exact_at(rule, x), rho_approx: rho });
    }
    Ok(InversionReport {
        method: Method::DerivativeRule,
        system: rule.system().to_string(),
        n: rule.n(),
        scheme: scheme_string(scheme),
        digits: rule.ctx().working_digits(),
        records,
        excluded,
        fits: Vec::new(),
    })
}

/// Derivative rule with the closed-form node derivative of a Chebyshev rule.
pub fn derivative_rule_analytic(rule: &QuadratureRule) -> Result<InversionReport> {
    let kind = rule
        .system()
        .chebyshev_kind()
        .ok_or_else(|| Error::InvalidArgument(format!("no closed-form node map for {}", rule.system())))?;
    let ctx = rule.ctx();
    let mut records = Vec::with_capacity(rule.n());
    for (i, (x, w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        let d = chebyshev_node_derivative(kind, rule.n(), &ctx.float((i + 1) as u64), ctx)?;
        if !(d > 0) {
            return Err(Error::ZeroDerivative(i + 1));
        }
        records.push(NodeRecord {
            k: i + 1,
            x: x.clone(),
            rho_exact: exact_at(rule, x),
            rho_approx: Float::with_val(ctx.bits(), w / &d),
        });
    }
    Ok(InversionReport {
        method: Method::AnalyticDerivative,
        system: rule.system().to_string(),
        n: rule.n(),
        scheme: "analytic".into(),
        digits: ctx.working_digits(),
        records,
        excluded: None,
        fits: Vec::new(),
    })
}

/// Histogram baseline: cumulative weights placed at node midpoints,
/// interpolated and differentiated at the interior nodes 2..n−1.
pub fn histogram_invert(rule: &QuadratureRule, order: usize) -> Result<InversionReport> {
    let (skip, excluded) = first_included(rule);
    let nodes = &rule.nodes()[skip..];
    let weights = &rule.weights()[skip..];
    let n = nodes.len();
    if n < 4 {
        return Err(Error::WindowTooSmall(format!("histogram inversion needs n >= 4, got {n}")));
    }
    let bits = rule.ctx().bits();
    let mut mids = Vec::with_capacity(n - 1);
    let mut cum = Vec::with_capacity(n - 1);
    let mut s = Float::new(bits);
    for j in 0..n - 1 {
        s += &weights[j];
        cum.push(s.clone());
        mids.push(Float::with_val(bits, &nodes[j] + &nodes[j + 1]) / 2u32);
    }
    let order = order.min(n - 2);
    let inner = &nodes[1..n - 1];
    let ds = derivative_at_general(&mids, &cum, order, inner)?;
    let records = inner
        .iter()
        .zip(ds)
        .enumerate()
        .map(|(i, (x, d))| NodeRecord { k: skip + i + 2, x: x.clone(), rho_exact: exact_at(rule, x), rho_approx: d })
        .collect();
    Ok(InversionReport {
        method: Method::Histogram,
        system: rule.system().to_string(),
        n: rule.n(),
        scheme: format!("order={order} midpoints"),
        digits: rule.ctx().working_digits(),
        records,
        excluded,
        fits: Vec::new(),
    })
}

/// Least-squares convergence exponent from (N, error) pairs.
///
/// Exponential: log10 err = −N/α, a line through the origin.
/// Power: log10 err = c − p·log10 N.
pub fn fit_convergence(points: &[(usize, Float)], law: Law) -> Result<f64> {
    let logs: Vec<(f64, f64)> = points.iter().map(|(n, e)| (*n as f64, e)).map(|(n, e)| (n, log10_abs(e))).collect();
    fit_convergence_log10(&logs, law)
}

/// As [`fit_convergence`] with errors given as log10 values.
pub fn fit_convergence_log10(points: &[(f64, f64)], law: Law) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!("need >= 3 points, got {}", points.len())));
    }
    if points.iter().any(|(_, y)| !y.is_finite()) {
        return Err(Error::DegenerateFit("errors must be positive and finite".into()));
    }
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if p.windows(2).all(|w| w[1].1 >= w[0].1) {
        return Err(Error::DegenerateFit("errors do not decrease with N".into()));
    }
    let v = match law {
        Law::Exponential => {
            let sxy: f64 = p.iter().map(|(n, y)| n * y).sum();
            let sxx: f64 = p.iter().map(|(n, _)| n * n).sum();
            -sxx / sxy
        }
        Law::Power => {
            let xs: Vec<f64> = p.iter().map(|(n, _)| n.log10()).collect();
            let m = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / m;
            let my = p.iter().map(|(_, y)| y).sum::<f64>() / m;
            let sxy: f64 = xs.iter().zip(&p).map(|(x, (_, y))| (x - mx) * (y - my)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            -sxy / sxx
        }
    };
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::DegenerateFit(format!("fitted exponent {v} is not positive")));
    }
    Ok(v)
}
