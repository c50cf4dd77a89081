use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Complex, Rational};

use derivrule::csv::{write_atomic, Table};
use derivrule::interpolation::InterpolationScheme;
use derivrule::inversion::{derivative_rule_analytic, derivative_rule_invert, histogram_invert, HISTOGRAM_ORDER};
use derivrule::markov::{resolvent_table, ResolventApproximant};
use derivrule::opsystems::OpSystem;
use derivrule::photoeffect::{cross_section, PhotoConfig};
use derivrule::precision::format_sci;
use derivrule::quadrature::{analytic_chebyshev_rule, gauss_rule, QuadratureRule};
use derivrule::tables::{histogram_sweep, run_sweep, Sweep};
use derivrule::universality::{clock_probe, pollaczek_missing_mass, weight_ratio_probe, NodeDerivative};
use derivrule::{Error, PrecisionContext};

#[derive(Parser)]
#[command(name = "derivrule", version, about = "Gauss rules, derivative-rule inversion and related diagnostics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Trusted decimal digits.
    #[arg(long)]
    digits: Option<u32>,
    /// Extra guard digits carried internally.
    #[arg(long, default_value_t = 10)]
    guard: u32,
    /// Write CSV here (atomically) instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Omit `#` metadata lines.
    #[arg(long)]
    no_meta: bool,
    /// Allow the expensive runs.
    #[arg(long)]
    heavy: bool,
}

#[derive(Args, Clone)]
struct Interp {
    /// Polynomial degree of the interpolation window (default: N−1 for
    /// inversion, 20 for clock probes, 10 for histograms).
    #[arg(long = "interp-order")]
    interp_order: Option<usize>,
    #[arg(long, value_enum, default_value_t = Boundary::Shrink)]
    boundary: Boundary,
    #[arg(long = "thiele-points", default_value_t = 20)]
    thiele_points: usize,
    #[arg(long = "thiele-width", default_value_t = 4)]
    thiele_width: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Boundary {
    Shrink,
    Thiele,
}

impl Interp {
    fn scheme(&self, default_order: usize) -> InterpolationScheme {
        let order = self.interp_order.unwrap_or(default_order);
        match self.boundary {
            Boundary::Shrink => InterpolationScheme::new(order),
            Boundary::Thiele => InterpolationScheme::with_thiele(order, self.thiele_points, self.thiele_width),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Gauss nodes and weights.
    Rule {
        #[arg(long)]
        system: String,
        #[arg(long = "N")]
        n: usize,
        /// Closed-form Chebyshev rule instead of an eigensolve.
        #[arg(long)]
        analytic: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Derivative-rule reconstruction of the weight function.
    Invert {
        #[arg(long)]
        system: String,
        #[arg(long = "N")]
        n: usize,
        /// Use closed-form node derivatives (Chebyshev only).
        #[arg(long)]
        analytic: bool,
        #[command(flatten)]
        interp: Interp,
        #[command(flatten)]
        common: Common,
    },
    /// Histogram (cumulative-weight) reconstruction.
    Histogram {
        #[arg(long, default_value = "cheb2")]
        system: String,
        #[arg(long = "N", default_value_t = 2000)]
        n: usize,
        /// Comma-separated list of N; emits the error at x≈0 and a power fit.
        #[arg(long, value_delimiter = ',')]
        sweep: Option<Vec<usize>>,
        #[command(flatten)]
        interp: Interp,
        #[command(flatten)]
        common: Common,
    },
    /// Clock-rule spacings and ratios.
    Clock {
        #[arg(long)]
        system: String,
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        interp: Interp,
        #[command(flatten)]
        common: Common,
    },
    /// Weight ratio w/ρ against the universal curve.
    Wratio {
        /// One or more systems, comma separated.
        #[arg(long, value_delimiter = ',')]
        system: Vec<String>,
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Weight of attractive Coulomb-Pollaczek nodes below −1.
    MissingMass {
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value = "4")]
        lambda: String,
        #[arg(long = "N", value_delimiter = ',')]
        n: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Pole-sum resolvent on a list of complex points.
    Resolvent {
        #[arg(long)]
        system: String,
        #[arg(long = "N")]
        n: usize,
        /// Complex point `re,im`; repeat for a grid.
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        z: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Photo-ionization cross sections from the L² discretization.
    Photoeffect {
        #[arg(long = "N", default_value_t = 35)]
        n: usize,
        #[arg(long, default_value = "5/2")]
        lambda: String,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Chebyshev convergence sweep.
    Table1 {
        #[command(flatten)]
        common: Common,
    },
    /// Gegenbauer l = 20 convergence sweep.
    Table2 {
        #[command(flatten)]
        common: Common,
    },
    /// Hermite convergence sweep.
    Table3 {
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Compute(&'static str, Error),
}

type Outcome = std::result::Result<(Table, Common), Failure>;

fn ctx(common: &Common, default_digits: u32) -> std::result::Result<PrecisionContext, Failure> {
    PrecisionContext::new(common.digits.unwrap_or(default_digits), common.guard).map_err(|e| Failure::Usage(e.to_string()))
}

fn system(spec: &str) -> std::result::Result<OpSystem, Failure> {
    spec.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn rational(s: &str, what: &str) -> std::result::Result<Rational, Failure> {
    if let Ok(q) = s.parse::<Rational>() {
        return Ok(q);
    }
    s.parse::<f64>()
        .ok()
        .and_then(Rational::from_f64)
        .ok_or_else(|| Failure::Usage(format!("bad {what} `{s}`")))
}

fn check_n(n: usize) -> std::result::Result<(), Failure> {
    if n < 2 {
        return Err(Failure::Usage(format!("--N must be at least 2, got {n}")));
    }
    Ok(())
}

fn compute<T>(op: &'static str, r: derivrule::Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| Failure::Compute(op, e))
}

fn build_rule(sys: &OpSystem, n: usize, analytic: bool, c: &PrecisionContext) -> std::result::Result<std::sync::Arc<QuadratureRule>, Failure> {
    if analytic {
        let kind = sys.chebyshev_kind().ok_or_else(|| Failure::Usage(format!("--analytic needs a Chebyshev system, got {sys}")))?;
        compute("analytic_chebyshev_rule", analytic_chebyshev_rule(kind, n, c))
    } else {
        compute("gauss_rule", gauss_rule(sys, n, c))
    }
}

fn heavy_gate(common: &Common, expensive: bool, what: &str) -> std::result::Result<(), Failure> {
    if expensive && !common.heavy {
        return Err(Failure::Usage(format!("{what} is expensive; pass --heavy to run it")));
    }
    Ok(())
}

fn with_meta(mut t: Table, c: &PrecisionContext) -> Table {
    t.comment(format!("digits={} guard={}", c.working_digits(), c.guard_digits()));
    t
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Rule { system: s, n, analytic, common } => {
            check_n(n)?;
            let sys = system(&s)?;
            let c = ctx(&common, 50)?;
            let rule = build_rule(&sys, n, analytic, &c)?;
            let mut t = rule.to_table(c.working_digits() as usize);
            t.comment(format!("system={sys} N={n}"));
            Ok((with_meta(t, &c), common))
        }
        Cmd::Invert { system: s, n, analytic, interp, common } => {
            check_n(n)?;
            let sys = system(&s)?;
            let c = ctx(&common, 50)?;
            let rule = build_rule(&sys, n, analytic, &c)?;
            let rep = if analytic {
                compute("derivative_rule_analytic", derivative_rule_analytic(&rule))?
            } else {
                compute("derivative_rule_invert", derivative_rule_invert(&rule, &interp.scheme(n - 1)))?
            };
            Ok((rep.to_table(c.working_digits() as usize), common))
        }
        Cmd::Histogram { system: s, n, sweep, interp, common } => {
            let order = interp.interp_order.unwrap_or(HISTOGRAM_ORDER);
            if let Some(ns) = sweep {
                let max = ns.iter().copied().max().unwrap_or(0);
                heavy_gate(&common, max >= 100_000, "a histogram sweep with N >= 100000")?;
                let digits = common.digits.unwrap_or(30);
                let rep = compute("histogram_sweep", histogram_sweep(&ns, Some(order), digits, common.guard))?;
                return Ok((rep.to_table(digits as usize), common));
            }
            check_n(n)?;
            heavy_gate(&common, n >= 100_000, "a histogram with N >= 100000")?;
            let sys = system(&s)?;
            let c = ctx(&common, 30)?;
            let rule = build_rule(&sys, n, sys.chebyshev_kind().is_some(), &c)?;
            let rep = compute("histogram_invert", histogram_invert(&rule, order))?;
            Ok((rep.to_table(c.working_digits() as usize), common))
        }
        Cmd::Clock { system: s, n, interp, common } => {
            let sys = system(&s)?;
            heavy_gate(&common, sys.has_discrete_part() && n >= 2000, "a Pollaczek probe with N >= 2000")?;
            let c = ctx(&common, 30)?;
            let analytic = sys.chebyshev_kind().is_some() && interp.interp_order.is_none();
            let rule = build_rule(&sys, n, sys.chebyshev_kind().is_some(), &c)?;
            let deriv = if analytic { NodeDerivative::Analytic } else { NodeDerivative::Interpolated(interp.scheme((n - 1).min(20))) };
            let p = compute("clock_probe", clock_probe(&rule, &deriv))?;
            Ok((with_meta(p.to_table(c.working_digits() as usize), &c), common))
        }
        Cmd::Wratio { system: specs, n, common } => {
            check_n(n)?;
            let c = ctx(&common, 30)?;
            let mut rules = Vec::new();
            for s in &specs {
                let sys = system(s)?;
                heavy_gate(&common, sys.has_discrete_part() && n >= 2000, "a Pollaczek probe with N >= 2000")?;
                rules.push(build_rule(&sys, n, false, &c)?);
            }
            let refs: Vec<&QuadratureRule> = rules.iter().map(|r| r.as_ref()).collect();
            let rep = compute("weight_ratio_probe", weight_ratio_probe(&refs))?;
            Ok((with_meta(rep.to_table(c.working_digits() as usize), &c), common))
        }
        Cmd::MissingMass { l, z, lambda, n, common } => {
            if n.is_empty() {
                return Err(Failure::Usage("--N needs at least one value".into()));
            }
            heavy_gate(&common, n.iter().any(|&v| v >= 2000), "a Pollaczek run with N >= 2000")?;
            let sys = OpSystem::pollaczek(l, rational(&z, "Z")?, rational(&lambda, "lambda")?);
            let c = ctx(&common, 40)?;
            let mut t = Table::new(&["N", "count_below", "missing_mass", "mass_in_interval"]);
            t.comment(format!("system={sys}"));
            for &m in &n {
                check_n(m)?;
                let rule = compute("gauss_rule", gauss_rule(&sys, m, &c))?;
                let (count, mass) = pollaczek_missing_mass(&rule);
                let inside = rule.weight_sum() - &mass;
                let sig = c.working_digits() as usize;
                t.push(vec![m.to_string(), count.to_string(), format_sci(&mass, sig), format_sci(&inside, sig)]);
            }
            Ok((with_meta(t, &c), common))
        }
        Cmd::Resolvent { system: s, n, z, common } => {
            check_n(n)?;
            let sys = system(&s)?;
            let c = ctx(&common, 30)?;
            let mut zs = Vec::with_capacity(z.len());
            for item in &z {
                let (re, im) = item.split_once(',').ok_or_else(|| Failure::Usage(format!("--z expects re,im, got `{item}`")))?;
                let re = c.parse(re).map_err(|e| Failure::Usage(e.to_string()))?;
                let im = c.parse(im).map_err(|e| Failure::Usage(e.to_string()))?;
                zs.push(Complex::with_val(c.bits(), (re, im)));
            }
            let rule = build_rule(&sys, n, false, &c)?;
            let appr = compute("resolvent", ResolventApproximant::new(rule))?;
            let t = compute("pole_sum", resolvent_table(&appr, &zs, c.working_digits() as usize))?;
            Ok((with_meta(t, &c), common))
        }
        Cmd::Photoeffect { n, lambda, l, common } => {
            check_n(n)?;
            let c = ctx(&common, 64)?;
            let mut cfg = PhotoConfig::new(n, rational(&lambda, "lambda")?);
            cfg.l = l;
            let sp = compute("cross_section", cross_section(&cfg, &c))?;
            let t = compute("cross_section", sp.to_table(&c, c.working_digits() as usize))?;
            Ok((with_meta(t, &c), common))
        }
        Cmd::Table1 { common } => sweep(Sweep::Chebyshev, common),
        Cmd::Table2 { common } => sweep(Sweep::Gegenbauer, common),
        Cmd::Table3 { common } => sweep(Sweep::Hermite, common),
    }
}

fn sweep(which: Sweep, common: Common) -> Outcome {
    let digits = common.digits.unwrap_or(which.default_digits());
    PrecisionContext::new(digits, common.guard).map_err(|e| Failure::Usage(e.to_string()))?;
    let rep = compute("table sweep", run_sweep(which, digits, common.guard, common.heavy))?;
    Ok((rep.to_table(12), common))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((table, common)) => {
            let text = table.render(!common.no_meta);
            match &common.output {
                Some(p) => {
                    if let Err(e) = write_atomic(p, &text) {
                        eprintln!("error: write output: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(op, e)) => {
            eprintln!("error: {op}: {e}");
            ExitCode::from(1)
        }
    }
}
