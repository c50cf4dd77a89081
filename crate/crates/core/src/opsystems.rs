//! Catalog of orthogonal-polynomial systems.
//!
//! Everything is in orthonormal form: x p_{n-1} = a_n p_n + b_n p_{n-1} + a_{n-1} p_{n-2},
//! so the order-n Jacobi matrix has diagonal b_1..b_n and offdiagonal a_1..a_{n-1}.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numerics::SymTridiagonal;
use crate::precision::PrecisionContext;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OpSystem {
    /// ρ = 1/√(1−x²)
    Chebyshev1,
    /// ρ = √(1−x²)
    Chebyshev2,
    /// ρ = √((1−x)/(1+x))
    Chebyshev3,
    /// ρ = √((1+x)/(1−x))
    Chebyshev4,
    /// ρ = 1
    Legendre,
    /// ρ = (1−x²)^(l+1/2)
    Gegenbauer { l: u32 },
    /// ρ = exp(−x²)
    Hermite,
    /// ρ = x^α exp(−x) on (0, ∞)
    Laguerre { alpha: Rational },
    /// Coulomb–Pollaczek system with angular momentum l, charge Z and scale λ.
    CoulombPollaczek { l: u32, z: Rational, lambda: Rational },
}

/// Interval with endpoint flags; infinite ends are stored as ±∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Support {
    fn open(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_closed: false, hi_closed: false }
    }

    /// Strict interior test, exact for the finite endpoints used here.
    pub fn contains_interior(&self, x: &Float) -> bool {
        (self.lo.is_infinite() || *x > self.lo) && (self.hi.is_infinite() || *x < self.hi)
    }
}

#[derive(Debug, Clone)]
pub struct RecurrencePair {
    pub n: usize,
    pub a: Float,
    pub b: Float,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FavardReport {
    pub pass: bool,
    pub diagnostic: String,
}

impl OpSystem {
    pub fn chebyshev(kind: u8) -> Result<Self> {
        match kind {
            1 => Ok(Self::Chebyshev1),
            2 => Ok(Self::Chebyshev2),
            3 => Ok(Self::Chebyshev3),
            4 => Ok(Self::Chebyshev4),
            _ => Err(Error::InvalidArgument(format!("Chebyshev kind {kind} not in 1..=4"))),
        }
    }

    pub fn pollaczek(l: u32, z: impl Into<Rational>, lambda: impl Into<Rational>) -> Self {
        Self::CoulombPollaczek { l, z: z.into(), lambda: lambda.into() }
    }

    pub fn chebyshev_kind(&self) -> Option<u8> {
        match self {
            Self::Chebyshev1 => Some(1),
            Self::Chebyshev2 => Some(2),
            Self::Chebyshev3 => Some(3),
            Self::Chebyshev4 => Some(4),
            _ => None,
        }
    }

    pub fn support(&self) -> Support {
        match self {
            Self::Hermite => Support::open(f64::NEG_INFINITY, f64::INFINITY),
            Self::Laguerre { .. } => Support { lo: 0.0, hi: f64::INFINITY, lo_closed: true, hi_closed: false },
            Self::Legendre | Self::Chebyshev2 | Self::Gegenbauer { .. } => {
                Support { lo: -1.0, hi: 1.0, lo_closed: true, hi_closed: true }
            }
            _ => Support::open(-1.0, 1.0),
        }
    }

    /// All catalog systems carry a closed-form weight.
    pub fn has_closed_form_weight(&self) -> bool {
        true
    }

    /// Nevai–Blumenthal class: a_n → 1/2, b_n → 0.
    pub fn is_nevai_blumenthal(&self) -> bool {
        !matches!(self, Self::Hermite | Self::Laguerre { .. })
    }

    /// Weight symmetric under x → −x.
    pub fn is_even(&self) -> bool {
        match self {
            Self::Chebyshev1 | Self::Chebyshev2 | Self::Legendre | Self::Gegenbauer { .. } | Self::Hermite => true,
            Self::CoulombPollaczek { z, .. } => z.is_zero(),
            _ => false,
        }
    }

    /// Attractive Pollaczek systems have discrete mass below −1.
    pub fn has_discrete_part(&self) -> bool {
        matches!(self, Self::CoulombPollaczek { z, .. } if z.is_negative())
    }

    fn pollaczek_g(z: &Rational, lambda: &Rational) -> Rational {
        Rational::from(z * 2u32) / lambda
    }

    pub fn favard_check(&self) -> FavardReport {
        match self {
            Self::Laguerre { alpha } => {
                let pass = *alpha > -1;
                FavardReport {
                    pass,
                    diagnostic: if pass {
                        "alpha > -1".into()
                    } else {
                        format!("alpha = {alpha} must exceed -1")
                    },
                }
            }
            Self::CoulombPollaczek { l, z, lambda } => {
                if !lambda.is_positive() {
                    return FavardReport { pass: false, diagnostic: format!("lambda = {lambda} must be positive") };
                }
                let g = Self::pollaczek_g(z, lambda);
                let margin = Rational::from(*l + 1) + &g;
                let pass = margin.is_positive();
                let binding = if z.is_negative() {
                    let bound = -Rational::from(z * 2u32) / (*l + 1);
                    format!("binding constraint lambda > -2Z/(l+1) = {bound}")
                } else {
                    "no binding constraint for Z >= 0".into()
                };
                FavardReport {
                    pass,
                    diagnostic: format!("n + l + 2Z/lambda at n=1 is {margin}; {binding}"),
                }
            }
            _ => FavardReport { pass: true, diagnostic: "classical system".into() },
        }
    }

    fn require_favard(&self) -> Result<()> {
        let r = self.favard_check();
        if r.pass {
            Ok(())
        } else {
            Err(Error::FavardViolation(format!("{self}: {}", r.diagnostic)))
        }
    }

    /// (a_n, b_n) for n ≥ 1.
    pub fn recurrence(&self, n: usize, ctx: &PrecisionContext) -> Result<RecurrencePair> {
        if n == 0 {
            return Err(Error::InvalidArgument("recurrence index starts at 1".into()));
        }
        self.require_favard()?;
        let (a2, b) = self.exact_pair(n);
        let a = ctx.float(&a2).sqrt();
        Ok(RecurrencePair { n, a, b: ctx.float(&b) })
    }

    /// a_n² and b_n as exact rationals.
    fn exact_pair(&self, n: usize) -> (Rational, Rational) {
        let nq = Rational::from(n as u64);
        let quarter = Rational::from((1, 4));
        match self {
            Self::Chebyshev1 => {
                let a2 = if n == 1 { Rational::from((1, 2)) } else { quarter };
                (a2, Rational::new())
            }
            Self::Chebyshev2 => (quarter, Rational::new()),
            Self::Chebyshev3 | Self::Chebyshev4 => {
                let b = match (self, n) {
                    (Self::Chebyshev3, 1) => Rational::from((-1, 2)),
                    (Self::Chebyshev4, 1) => Rational::from((1, 2)),
                    _ => Rational::new(),
                };
                (quarter, b)
            }
            Self::Legendre => {
                let n2 = Rational::from(&nq * &nq);
                let den = Rational::from(&n2 * 4u32) - 1u32;
                (n2 / den, Rational::new())
            }
            Self::Gegenbauer { l } => {
                let (n, l) = (n as u64, *l as u64);
                let num = Integer::from(n * (n + 2 * l + 1));
                let den = Integer::from(4 * (n + l + 1) * (n + l));
                (Rational::from((num, den)), Rational::new())
            }
            Self::Hermite => (nq / 2u32, Rational::new()),
            Self::Laguerre { alpha } => {
                let a2 = &nq * Rational::from(&nq + alpha);
                let b = Rational::from(&nq * 2u32) - 1u32 + alpha;
                (a2, b)
            }
            Self::CoulombPollaczek { l, z, lambda } => {
                let g = Self::pollaczek_g(z, lambda);
                let (n, l) = (n as u64, *l as u64);
                let shifted = g.clone() + (n + l);
                let num = Rational::from(n * (n + 2 * l + 1));
                let den = (shifted.clone() + 1u32) * shifted.clone() * 4u32;
                let b = g / shifted;
                (num / den, b)
            }
        }
    }

    /// Order-n Jacobi matrix.
    pub fn jacobi_matrix(&self, n: usize, ctx: &PrecisionContext) -> Result<SymTridiagonal> {
        if n == 0 {
            return Err(Error::InvalidArgument("order must be at least 1".into()));
        }
        self.require_favard()?;
        let mut diag = Vec::with_capacity(n);
        let mut off = Vec::with_capacity(n.saturating_sub(1));
        for j in 1..=n {
            let r = self.recurrence(j, ctx)?;
            diag.push(r.b);
            if j < n {
                off.push(r.a);
            }
        }
        SymTridiagonal::new(diag, off)
    }

    /// Total mass of the orthogonality measure (equals ∫ρ except for the
    /// attractive Pollaczek case, where discrete masses contribute as well).
    pub fn mu0(&self, ctx: &PrecisionContext) -> Float {
        let pi = ctx.pi();
        match self {
            Self::Chebyshev1 | Self::Chebyshev3 | Self::Chebyshev4 => pi,
            Self::Chebyshev2 => pi / 2u32,
            Self::Legendre => ctx.float(2u32),
            Self::Gegenbauer { l } => pi * ctx.float(&gegenbauer_mass_ratio(*l)),
            Self::Hermite => pi.sqrt(),
            Self::Laguerre { alpha } => (ctx.float(alpha) + 1u32).gamma(),
            Self::CoulombPollaczek { .. } => ctx.float(1u32),
        }
    }

    /// Closed-form weight at an interior point of the support.
    pub fn weight(&self, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
        if !self.support().contains_interior(x) {
            return Err(Error::OutOfSupport(format!("{} for {self}", x.to_f64())));
        }
        let bits = ctx.bits();
        let x = Float::with_val(bits, x);
        let one_minus = Float::with_val(bits, 1u32 - &x);
        let one_plus = Float::with_val(bits, 1u32 + &x);
        let one_minus_sq = Float::with_val(bits, &one_minus * &one_plus);
        Ok(match self {
            Self::Chebyshev1 => one_minus_sq.recip_sqrt(),
            Self::Chebyshev2 => one_minus_sq.sqrt(),
            Self::Chebyshev3 => (one_minus / one_plus).sqrt(),
            Self::Chebyshev4 => (one_plus / one_minus).sqrt(),
            Self::Legendre => ctx.float(1u32),
            Self::Gegenbauer { l } => {
                let e = ctx.float(*l) + ctx.float(0.5);
                one_minus_sq.pow(e)
            }
            Self::Hermite => (-x.square()).exp(),
            Self::Laguerre { alpha } => {
                let p = Float::with_val(bits, x.clone().pow(ctx.float(alpha)));
                p * (-x).exp()
            }
            Self::CoulombPollaczek { l, z, lambda } => {
                self.require_favard()?;
                pollaczek_weight(*l, z, lambda, &x, &one_minus, &one_plus, ctx)
            }
        })
    }

    /// Short name used in CSV headers and cache keys.
    pub fn spec_string(&self) -> String {
        self.to_string()
    }
}

/// Gegenbauer mass divided by π: C(2l+2, l+1)/4^(l+1).
pub fn gegenbauer_mass_ratio(l: u32) -> Rational {
    let c = Integer::from(Integer::binomial_u(2 * l + 2, l + 1));
    let d = Integer::from(1) << (2 * (l + 1));
    Rational::from((c, d))
}

/// |Γ(l+1+iγ)|² for integer l ≥ 0: (πγ/sinh πγ)·Π_{j=1..l}(j²+γ²).
pub fn gamma_modulus_sq(l: u32, gamma: &Float, ctx: &PrecisionContext) -> Float {
    let bits = ctx.bits();
    let mut prod = if gamma.is_zero() {
        ctx.float(1u32)
    } else {
        let pg = Float::with_val(bits, gamma * ctx.pi());
        Float::with_val(bits, &pg / pg.clone().sinh())
    };
    let g2 = Float::with_val(bits, gamma.square_ref());
    for j in 1..=l {
        prod *= Float::with_val(bits, &g2 + j * j);
    }
    prod
}

#[allow(clippy::too_many_arguments)]
fn pollaczek_weight(
    l: u32,
    z: &Rational,
    lambda: &Rational,
    x: &Float,
    one_minus: &Float,
    one_plus: &Float,
    ctx: &PrecisionContext,
) -> Float {
    let bits = ctx.bits();
    let lam = ctx.float(lambda);
    let theta = Float::with_val(bits, x.acos_ref());
    // κ = (λ/2)√((1+x)/(1−x)), γ = Z/κ
    let kappa = Float::with_val(bits, one_plus / one_minus).sqrt() * &lam / 2u32;
    let gamma = ctx.float(z) / kappa;
    let pi = ctx.pi();
    let phase = Float::with_val(bits, &theta * 2u32) - &pi;
    let expo = (-(phase * &gamma)).exp();
    let e = ctx.float(l) + ctx.float(0.5);
    let edge = Float::with_val(bits, one_minus * one_plus).pow(e);
    let g = OpSystem::pollaczek_g(z, lambda);
    let norm = Rational::from(l + 1) + g;
    let fact = Integer::from(Integer::factorial(2 * l + 1));
    let pref = ctx.float(&Rational::from((Integer::from(1) << (2 * l + 1), 1u32)) * norm / fact) / pi;
    pref * expo * edge * gamma_modulus_sq(l, &gamma, ctx)
}

impl fmt::Display for OpSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Chebyshev1 => write!(f, "cheb1"),
            Self::Chebyshev2 => write!(f, "cheb2"),
            Self::Chebyshev3 => write!(f, "cheb3"),
            Self::Chebyshev4 => write!(f, "cheb4"),
            Self::Legendre => write!(f, "legendre"),
            Self::Gegenbauer { l } => write!(f, "gegenbauer:l={l}"),
            Self::Hermite => write!(f, "hermite"),
            Self::Laguerre { alpha } => write!(f, "laguerre:alpha={alpha}"),
            Self::CoulombPollaczek { l, z, lambda } => write!(f, "cp:l={l},Z={z},lambda={lambda}"),
        }
    }
}

fn parse_rational(s: &str, spec: &str) -> Result<Rational> {
    let s = s.trim();
    if let Ok(q) = s.parse::<Rational>() {
        return Ok(q);
    }
    // allow plain decimals such as 2.5
    if let Ok(v) = s.parse::<f64>() {
        if let Some((int, frac)) = s.split_once('.') {
            let digits = frac.len() as u32;
            let joined = format!("{int}{frac}");
            if let Ok(num) = joined.parse::<Integer>() {
                return Ok(Rational::from((num, Integer::from(Integer::u_pow_u(10, digits)))));
            }
        }
        if let Some(q) = Rational::from_f64(v) {
            return Ok(q);
        }
    }
    Err(Error::BadSystemSpec(spec.into()))
}

impl FromStr for OpSystem {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let bad = || Error::BadSystemSpec(spec.into());
        let (name, params) = match spec.trim().split_once(':') {
            Some((n, p)) => (n.trim(), Some(p)),
            None => (spec.trim(), None),
        };
        let mut kv = std::collections::HashMap::new();
        if let Some(p) = params {
            for item in p.split(',') {
                let (k, v) = item.split_once('=').ok_or_else(bad)?;
                if kv.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                    return Err(bad());
                }
            }
        }
        let take = |kv: &mut std::collections::HashMap<String, String>, key: &str| kv.remove(key).ok_or_else(bad);
        let sys = match name.to_ascii_lowercase().as_str() {
            "cheb1" => Self::Chebyshev1,
            "cheb2" => Self::Chebyshev2,
            "cheb3" => Self::Chebyshev3,
            "cheb4" => Self::Chebyshev4,
            "legendre" => Self::Legendre,
            "hermite" => Self::Hermite,
            "gegenbauer" => {
                let l = take(&mut kv, "l")?.parse::<u32>().map_err(|_| bad())?;
                Self::Gegenbauer { l }
            }
            "laguerre" => {
                let alpha = parse_rational(&take(&mut kv, "alpha")?, spec)?;
                Self::Laguerre { alpha }
            }
            "cp" => {
                let l = take(&mut kv, "l")?.parse::<u32>().map_err(|_| bad())?;
                let z = parse_rational(&take(&mut kv, "Z")?, spec)?;
                let lambda = parse_rational(&take(&mut kv, "lambda")?, spec)?;
                Self::CoulombPollaczek { l, z, lambda }
            }
            _ => return Err(bad()),
        };
        if !kv.is_empty() {
            return Err(bad());
        }
        Ok(sys)
    }
}

/// Every catalog family with representative parameters.
pub fn catalog() -> Vec<OpSystem> {
    vec![
        OpSystem::Chebyshev1,
        OpSystem::Chebyshev2,
        OpSystem::Chebyshev3,
        OpSystem::Chebyshev4,
        OpSystem::Legendre,
        OpSystem::Gegenbauer { l: 0 },
        OpSystem::Gegenbauer { l: 3 },
        OpSystem::Gegenbauer { l: 20 },
        OpSystem::Hermite,
        OpSystem::Laguerre { alpha: Rational::new() },
        OpSystem::Laguerre { alpha: Rational::from((1, 2)) },
        OpSystem::pollaczek(0, 1, 4),
        OpSystem::pollaczek(0, -1, 4),
        OpSystem::pollaczek(1, Rational::from((1, 2)), 3),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40, 10).unwrap()
    }

    fn close(a: &Float, b: &Float, c: &PrecisionContext) -> bool {
        Float::with_val(c.bits(), a - b).abs() <= c.tolerance()
    }

    #[test]
    fn chebyshev2_coefficients() {
        let c = ctx();
        for n in [1, 2, 7, 100] {
            let r = OpSystem::Chebyshev2.recurrence(n, &c).unwrap();
            assert_eq!(r.a, 0.5);
            assert!(r.b.is_zero());
        }
    }

    #[test]
    fn hermite_first() {
        let c = ctx();
        let r = OpSystem::Hermite.recurrence(1, &c).unwrap();
        assert!(close(&r.a, &c.float(0.5).sqrt(), &c));
    }

    #[test]
    fn pollaczek_first_coefficients() {
        let c = ctx();
        let r = OpSystem::pollaczek(0, -1, 4).recurrence(1, &c).unwrap();
        let want = (c.float(2u32) / c.float(0.75)).sqrt() / 2u32;
        assert!(close(&r.a, &want, &c));
        assert_eq!(r.b, -1);
    }

    #[test]
    fn favard_examples() {
        assert!(OpSystem::pollaczek(0, -1, 4).favard_check().pass);
        let f = OpSystem::pollaczek(0, -1, 1).favard_check();
        assert!(!f.pass);
        assert!(f.diagnostic.contains("lambda > -2Z/(l+1) = 2"), "{}", f.diagnostic);
        assert!(OpSystem::Chebyshev1.favard_check().pass);
        assert!(!OpSystem::pollaczek(0, -1, 2).favard_check().pass);
        let c = ctx();
        assert!(matches!(
            OpSystem::pollaczek(0, -1, 1).recurrence(1, &c),
            Err(Error::FavardViolation(_))
        ));
        assert!(!OpSystem::Laguerre { alpha: Rational::from(-1) }.favard_check().pass);
    }

    #[test]
    fn simple_weights() {
        let c = ctx();
        assert_eq!(OpSystem::Chebyshev2.weight(&c.zero(), &c).unwrap(), 1);
        assert_eq!(OpSystem::Legendre.weight(&c.float(0.37), &c).unwrap(), 1);
        assert!(matches!(OpSystem::Chebyshev1.weight(&c.float(1u32), &c), Err(Error::OutOfSupport(_))));
        assert!(OpSystem::Laguerre { alpha: Rational::new() }.weight(&c.float(-0.5), &c).is_err());
        let h = OpSystem::Hermite.weight(&c.float(2u32), &c).unwrap();
        assert!(close(&h, &c.float(-4i32).exp(), &c));
    }

    #[test]
    fn gegenbauer_mass() {
        let q = gegenbauer_mass_ratio(20);
        assert_eq!(q, Rational::from((67282234305u64, 549755813888u64)));
        let c = ctx();
        let m = OpSystem::Gegenbauer { l: 20 }.mu0(&c);
        assert!((m.to_f64() - 0.3845).abs() < 1e-4);
        // l = 0 is the Chebyshev-2 weight
        assert!(close(&OpSystem::Gegenbauer { l: 0 }.mu0(&c), &OpSystem::Chebyshev2.mu0(&c), &c));
    }

    #[test]
    fn pollaczek_reduces_to_gegenbauer_at_zero_charge() {
        let c = ctx();
        let cp = OpSystem::pollaczek(2, 0, 3);
        let geg = OpSystem::Gegenbauer { l: 2 };
        for x in [-0.9, -0.2, 0.0, 0.4, 0.95] {
            let x = c.float(x);
            let want = geg.weight(&x, &c).unwrap() / geg.mu0(&c);
            assert!(close(&cp.weight(&x, &c).unwrap(), &want, &c));
        }
    }

    #[test]
    fn pollaczek_weight_positive() {
        let c = ctx();
        for sys in [OpSystem::pollaczek(0, -1, 4), OpSystem::pollaczek(0, 1, 4), OpSystem::pollaczek(3, -2, 5)] {
            for i in 1..100 {
                let x = c.float(-1.0 + 2.0 * i as f64 / 100.0);
                assert!(sys.weight(&x, &c).unwrap() > 0, "{sys} at {}", x.to_f64());
            }
        }
    }

    #[test]
    fn nevai_blumenthal_limits() {
        let c = PrecisionContext::new(20, 10).unwrap();
        let n = 1000;
        for sys in catalog().into_iter().filter(|s| s.is_nevai_blumenthal()) {
            let r = sys.recurrence(n, &c).unwrap();
            let da = (r.a.to_f64() - 0.5).abs() * n as f64;
            let db = r.b.to_f64().abs() * n as f64;
            assert!(da < 25.0 && db < 1.0, "{sys}: n|a-1/2| = {da}, n|b| = {db}");
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for sys in catalog() {
            let s = sys.to_string();
            assert_eq!(s.parse::<OpSystem>().unwrap(), sys, "{s}");
        }
        let cp: OpSystem = "cp:l=0,Z=-1,lambda=4".parse().unwrap();
        assert_eq!(cp, OpSystem::pollaczek(0, -1, 4));
        let lg: OpSystem = "laguerre:alpha=2.5".parse().unwrap();
        assert_eq!(lg, OpSystem::Laguerre { alpha: Rational::from((5, 2)) });
        for bad in ["cheb5", "gegenbauer", "gegenbauer:l=x", "cp:l=0,Z=1", "legendre:l=2", "cp:l=0,Z=1,lambda=4,lambda=4"] {
            assert!(bad.parse::<OpSystem>().is_err(), "{bad}");
        }
    }

    #[test]
    fn jacobi_matrix_shape() {
        let c = ctx();
        let j = OpSystem::Chebyshev3.jacobi_matrix(5, &c).unwrap();
        assert_eq!(j.n(), 5);
        assert_eq!(j.diag()[0], -0.5);
        assert!(j.diag()[1].is_zero());
    }
}
