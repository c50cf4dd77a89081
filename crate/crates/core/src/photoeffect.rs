//! Hydrogen photo-ionization from an L² discretization of the radial
//! Coulomb Hamiltonian H = −½ d²/dr² + l(l+1)/(2r²) − 1/r.
//!
//! Basis: θ_n(r) = e^{−λr/2} (λr)^{l+1} L_n^{(2l+2)}(λr), n < N, normalized.
//! The L² eigenpairs (E[i], ψ[i]) give squared dipole moments m2[i]; the
//! derivative rule turns them into continuum-normalized values m2[i]/E′[i].

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::csv::Table;
use crate::error::{Error, Result};
use crate::interpolation::{InterpolationScheme, NodeDifferentiator};
use crate::numerics::eigen_dense_symmetric;
use crate::opsystems::OpSystem;
use crate::precision::{format_sci, PrecisionContext};
use crate::quadrature::gauss_rule;
use crate::universality::is_interior;

/// L_0..L_{m}(s) for parameter α by the three-term recurrence.
fn laguerre_values(m: usize, alpha: u32, s: &Float) -> Vec<Float> {
    let bits = s.prec();
    let mut out = Vec::with_capacity(m + 1);
    out.push(Float::with_val(bits, 1));
    if m == 0 {
        return out;
    }
    out.push(Float::with_val(bits, (alpha + 1) as u64) - s);
    for k in 1..m {
        // (k+1) L_{k+1} = (2k+1+α−s) L_k − (k+α) L_{k−1}
        let c = Float::with_val(bits, (2 * k as u64 + 1 + alpha as u64) as f64) - s;
        let next = (c * &out[k] - Float::with_val(bits, &out[k - 1] * (k as u64 + alpha as u64))) / (k as u64 + 1);
        out.push(next);
    }
    out
}

/// 1/√(Γ(n+2l+3)/(n!·λ)): normalizer of θ_n.
fn basis_norms(n: usize, l: u32, lambda: &Float) -> Vec<Float> {
    let bits = lambda.prec();
    (0..n)
        .map(|k| {
            // Γ(k+2l+3)/k! = (k+2l+2)!/k!
            let mut r = Integer::from(1);
            for j in (k as u64 + 1)..=(k as u64 + 2 * l as u64 + 2) {
                r *= j;
            }
            let v = Float::with_val(bits, &r) / lambda;
            v.sqrt().recip()
        })
        .collect()
}

fn check_args(n: usize, lambda: &Rational) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("basis size N = {n} < 2")));
    }
    if *lambda <= 0 {
        return Err(Error::InvalidArgument(format!("lambda = {lambda} must be positive")));
    }
    Ok(())
}

/// Unnormalized matrix elements with a K-point inner Gauss–Laguerre rule.
fn raw_hamiltonian(n: usize, l: u32, lam: &Float, k: usize, ctx: &PrecisionContext) -> Result<Vec<Vec<Float>>> {
    let bits = ctx.bits();
    let rule = gauss_rule(&OpSystem::Laguerre { alpha: Rational::from(2 * l) }, k, ctx)?;
    let alpha = 2 * l + 2;
    let mut h = vec![vec![Float::new(bits); n]; n];
    let half_lam = Float::with_val(bits, lam / 2u32);
    let cent = Float::with_val(bits, lam * (l * (l + 1)) as u64) / 2u32;
    for (s, w) in rule.nodes().iter().zip(rule.weights()) {
        let lv = laguerre_values(n - 1, alpha, s);
        let lp = laguerre_values(n.saturating_sub(2), alpha + 1, s);
        // dθ/ds = e^{−s/2} s^l q,  q = (l+1−s/2) L + s L′,  L′_j = −L^{(α+1)}_{j−1}
        let lead = Float::with_val(bits, (l + 1) as u64) - Float::with_val(bits, s / 2u32);
        let q: Vec<Float> = (0..n)
            .map(|j| {
                let mut v = Float::with_val(bits, &lead * &lv[j]);
                if j > 0 {
                    v -= Float::with_val(bits, s * &lp[j - 1]);
                }
                v
            })
            .collect();
        let pot = Float::with_val(bits, &cent - s);
        for i in 0..n {
            let wq = Float::with_val(bits, w * &q[i]) * &half_lam;
            let wl = Float::with_val(bits, w * &lv[i]) * &pot;
            for j in i..n {
                let t = Float::with_val(bits, &wq * &q[j]) + Float::with_val(bits, &wl * &lv[j]);
                h[i][j] += t;
            }
        }
    }
    Ok(h)
}

/// Normalized, symmetric Hamiltonian matrix in the Laguerre basis. The inner
/// rule has N + l + 3 points; a rule of twice that order must agree.
pub fn hamiltonian_matrix(n: usize, l: u32, lambda: &Rational, ctx: &PrecisionContext) -> Result<Vec<Vec<Float>>> {
    check_args(n, lambda)?;
    let lam = ctx.float(lambda);
    let k = n + l as usize + 3;
    let h1 = raw_hamiltonian(n, l, &lam, k, ctx)?;
    let h2 = raw_hamiltonian(n, l, &lam, 2 * k, ctx)?;
    let norms = basis_norms(n, l, &lam);
    let bits = ctx.bits();
    let mut worst = Float::new(bits);
    let mut h = vec![vec![Float::new(bits); n]; n];
    for i in 0..n {
        for j in i..n {
            let scale = Float::with_val(bits, &norms[i] * &norms[j]);
            let a = Float::with_val(bits, &h1[i][j] * &scale);
            let b = Float::with_val(bits, &h2[i][j] * &scale);
            let d = Float::with_val(bits, &a - &b).abs();
            if d > worst {
                worst = d;
            }
            h[j][i] = a.clone();
            h[i][j] = a;
        }
    }
    if worst > ctx.tolerance() {
        return Err(Error::QuadratureOrderInsufficient(worst.to_f64()));
    }
    Ok(h)
}

/// ⟨θ_m, θ_n⟩ with the same inner rule; the identity for a sound basis.
pub fn overlap_matrix(n: usize, l: u32, lambda: &Rational, ctx: &PrecisionContext) -> Result<Vec<Vec<Float>>> {
    check_args(n, lambda)?;
    let bits = ctx.bits();
    let lam = ctx.float(lambda);
    // ∫θθ dr = (1/λ)∫ e^{−s} s^{2l+2} L L ds
    let rule = gauss_rule(&OpSystem::Laguerre { alpha: Rational::from(2 * l + 2) }, n + 1, ctx)?;
    let norms = basis_norms(n, l, &lam);
    let mut s = vec![vec![Float::new(bits); n]; n];
    for (x, w) in rule.nodes().iter().zip(rule.weights()) {
        let lv = laguerre_values(n - 1, 2 * l + 2, x);
        for i in 0..n {
            for j in 0..n {
                s[i][j] += Float::with_val(bits, w * &lv[i]) * &lv[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            s[i][j] = Float::with_val(bits, &s[i][j] * &norms[i]) * &norms[j] / &lam;
        }
    }
    Ok(s)
}

/// ⟨u_1s·r, θ_n⟩ with u_1s = 2r e^{−r}, for n < N.
fn dipole_projections(n: usize, l: u32, lam: &Float, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    let bits = ctx.bits();
    // (2/λ³)∫ s^{l+3} e^{−cs} L_n(s) ds with c = 1/λ + 1/2; substitute t = cs
    let c = Float::with_val(bits, lam.recip_ref()) + 0.5f64;
    let rule = gauss_rule(&OpSystem::Laguerre { alpha: Rational::from(l + 3) }, n + 1, ctx)?;
    let mut g = vec![Float::new(bits); n];
    for (t, w) in rule.nodes().iter().zip(rule.weights()) {
        let s = Float::with_val(bits, t / &c);
        let lv = laguerre_values(n - 1, 2 * l + 2, &s);
        for j in 0..n {
            g[j] += Float::with_val(bits, w * &lv[j]);
        }
    }
    let pre = Float::with_val(bits, c.clone().pow(l + 4u32)).recip() * 2u32 / Float::with_val(bits, lam.clone().pow(3u32));
    let norms = basis_norms(n, l, lam);
    Ok(g.into_iter().zip(norms).map(|(v, nm)| v * &pre * nm).collect())
}

/// Variable interpolated against the continuum index before the chain rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyVariable {
    /// E itself.
    Direct,
    /// v = (E − s)/(E + s) with s = λ²/8, which maps the continuum onto a
    /// bounded, nearly Chebyshev-spaced set.
    Mobius,
}

/// How the overall constant between m2/E′ and the exact cross section is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Calibration {
    /// σ = m2/E′: the dipole normalization above already matches.
    Unit,
    /// Match the exact value at the given continuum index (0-based).
    MatchAt(usize),
}

#[derive(Debug, Clone)]
pub struct PhotoConfig {
    pub n: usize,
    pub l: u32,
    pub lambda: Rational,
    /// None: full-window polynomial with Thiele fits at both ends.
    pub scheme: Option<InterpolationScheme>,
    pub variable: EnergyVariable,
    pub calibration: Calibration,
}

impl PhotoConfig {
    pub fn new(n: usize, lambda: Rational) -> Self {
        Self { n, l: 1, lambda, scheme: None, variable: EnergyVariable::Mobius, calibration: Calibration::Unit }
    }

    /// Scheme used for `nc` continuum energies.
    pub fn scheme_for(&self, nc: usize) -> InterpolationScheme {
        match &self.scheme {
            Some(s) => {
                let mut s = s.clone();
                s.order = s.order.min(nc.saturating_sub(1));
                s
            }
            None => InterpolationScheme::with_thiele(nc.saturating_sub(1), 16.min(nc), 4),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscretizedSpectrum {
    pub n: usize,
    pub l: u32,
    pub lambda: Rational,
    pub energies: Vec<Float>,
    pub m2: Vec<Float>,
    /// E′[i] for continuum states, None for bound ones.
    pub weq: Vec<Option<Float>>,
    pub sigma: Vec<Option<Float>>,
    /// Ratio exact/approximate at the calibration point (1 means no correction was needed).
    pub calibration_ratio: Float,
    /// Constant actually applied to m2/E′.
    pub conversion: Float,
    pub scheme: String,
}

impl DiscretizedSpectrum {
    pub fn bound_count(&self) -> usize {
        self.weq.iter().filter(|w| w.is_none()).count()
    }

    pub fn continuum_count(&self) -> usize {
        self.n - self.bound_count()
    }

    /// Continuum indices whose position among the continuum states is
    /// interior (5% cut at each end).
    pub fn interior_continuum(&self) -> Vec<usize> {
        let nb = self.bound_count();
        let nc = self.continuum_count();
        (nb..self.n).filter(|&i| is_interior(i - nb + 1, nc)).collect()
    }

    /// −log10 of the relative error against the exact σ, per continuum state.
    pub fn matching_digits(&self, ctx: &PrecisionContext) -> Result<Vec<(usize, f64)>> {
        let mut out = Vec::new();
        for (i, s) in self.sigma.iter().enumerate() {
            if let Some(s) = s {
                let ex = exact_cross_section(&self.energies[i], ctx)?;
                let r = Float::with_val(ctx.bits(), s - &ex).abs() / &ex;
                out.push((i, -crate::precision::log10_abs(&r)));
            }
        }
        Ok(out)
    }

    pub fn m2_sum(&self, ctx: &PrecisionContext) -> Float {
        let mut s = ctx.zero();
        for v in &self.m2 {
            s += v;
        }
        s
    }

    /// Σ m2[i]/(z − E[i]) against the equivalent-quadrature form
    /// Σ (m2/E′)·E′/(z − E) over continuum states plus the bound terms.
    pub fn resolvent_pair(&self, z: &Float) -> (Float, Float) {
        let bits = z.prec();
        let mut direct = Float::new(bits);
        let mut eq = Float::new(bits);
        for (i, e) in self.energies.iter().enumerate() {
            let den = Float::with_val(bits, z - e);
            direct += Float::with_val(bits, &self.m2[i] / &den);
            let term = match &self.weq[i] {
                Some(w) => Float::with_val(bits, &self.m2[i] / w) * w,
                None => self.m2[i].clone(),
            };
            eq += term / den;
        }
        (direct, eq)
    }

    pub fn to_table(&self, ctx: &PrecisionContext, sig: usize) -> Result<Table> {
        let mut t = Table::new(&["i", "E", "sigma_approx", "sigma_exact", "abs_err", "state"]);
        t.comment(format!("N={} l={} lambda={}", self.n, self.l, self.lambda));
        t.comment(self.scheme.clone());
        t.comment(format!(
            "conversion={} calibration_ratio={}",
            format_sci(&self.conversion, 16),
            format_sci(&self.calibration_ratio, 16)
        ));
        for (i, e) in self.energies.iter().enumerate() {
            match &self.sigma[i] {
                Some(s) => {
                    let ex = exact_cross_section(e, ctx)?;
                    let err = Float::with_val(ctx.bits(), s - &ex).abs();
                    t.push(vec![
                        (i + 1).to_string(),
                        format_sci(e, sig),
                        format_sci(s, sig),
                        format_sci(&ex, sig),
                        format_sci(&err, sig),
                        "continuum".into(),
                    ]);
                }
                None => t.push(vec![(i + 1).to_string(), format_sci(e, sig), String::new(), String::new(), String::new(), "bound".into()]),
            }
        }
        Ok(t)
    }
}

/// Full pipeline: matrix, eigenpairs, dipole moments, E′ and σ.
pub fn cross_section(cfg: &PhotoConfig, ctx: &PrecisionContext) -> Result<DiscretizedSpectrum> {
    let bits = ctx.bits();
    let h = hamiltonian_matrix(cfg.n, cfg.l, &cfg.lambda, ctx)?;
    let eig = eigen_dense_symmetric(&h, ctx)?;
    let vecs = eig.vectors.as_ref().ok_or_else(|| Error::InvalidArgument("eigenvectors missing".into()))?;
    let lam = ctx.float(&cfg.lambda);
    let g = dipole_projections(cfg.n, cfg.l, &lam, ctx)?;
    let m2: Vec<Float> = vecs
        .iter()
        .map(|v| {
            let mut s = Float::new(bits);
            for (c, gn) in v.iter().zip(&g) {
                s += Float::with_val(bits, c * gn);
            }
            s.square()
        })
        .collect();
    let energies = eig.values;
    let nb = energies.iter().take_while(|e| **e <= 0).count();
    for i in 1..energies.len() {
        if !(energies[i] > energies[i - 1]) {
            return Err(Error::NonMonotoneEnergies(i + 1));
        }
    }
    let cont = &energies[nb..];
    let nc = cont.len();
    if nc < 2 {
        return Err(Error::WindowTooSmall(format!("only {nc} continuum energies")));
    }
    let shift = Float::with_val(bits, lam.square_ref()) / 8u32;
    let (vals, dvde): (Vec<Float>, Vec<Float>) = match cfg.variable {
        EnergyVariable::Direct => (cont.to_vec(), vec![Float::with_val(bits, 1); nc]),
        EnergyVariable::Mobius => cont
            .iter()
            .map(|e| {
                let p = Float::with_val(bits, e + &shift);
                let v = Float::with_val(bits, e - &shift) / &p;
                let dedv = p.square() / Float::with_val(bits, &shift * 2u32);
                (v, dedv)
            })
            .unzip(),
    };
    let scheme = cfg.scheme_for(nc);
    let mut diff = NodeDifferentiator::new(&vals, &scheme)?;
    let mut weq = vec![None; nb];
    for (j, dedv) in dvde.iter().enumerate() {
        let d = diff.derivative((j + 1) as f64)?;
        if !(d > 0) {
            return Err(Error::ZeroDerivative(nb + j + 1));
        }
        weq.push(Some(d * dedv));
    }
    let raw: Vec<Option<Float>> = weq.iter().zip(&m2).map(|(w, m)| w.as_ref().map(|w| Float::with_val(bits, m / w))).collect();
    let probe = match cfg.calibration {
        Calibration::Unit => nb + nc / 2,
        Calibration::MatchAt(j) => {
            if j >= nc {
                return Err(Error::InvalidArgument(format!("calibration index {j} beyond {nc} continuum states")));
            }
            nb + j
        }
    };
    let exact = exact_cross_section(&energies[probe], ctx)?;
    let ratio = exact / raw[probe].as_ref().expect("continuum state");
    let conversion = match cfg.calibration {
        Calibration::Unit => Float::with_val(bits, 1),
        Calibration::MatchAt(_) => ratio.clone(),
    };
    let sigma = raw.into_iter().map(|s| s.map(|s| s * &conversion)).collect();
    let scheme_desc = format!(
        "variable={} order={} boundary={:?}",
        match cfg.variable {
            EnergyVariable::Direct => "E",
            EnergyVariable::Mobius => "mobius",
        },
        scheme.order,
        scheme.boundary
    );
    Ok(DiscretizedSpectrum {
        n: cfg.n,
        l: cfg.l,
        lambda: cfg.lambda.clone(),
        energies,
        m2,
        weq,
        sigma,
        calibration_ratio: ratio,
        conversion,
        scheme: scheme_desc,
    })
}

/// σ(E) = 2⁸/(1+k²)⁵ · e^{−4 atan(k)/k} / (1 − e^{−2π/k}), k = √(2E).
pub fn exact_cross_section(e: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if !(*e > 0) {
        return Err(Error::NonPositiveEnergy(e.to_string_radix(10, Some(12))));
    }
    let bits = ctx.bits();
    let k = Float::with_val(bits, e * 2u32).sqrt();
    let k2p1 = Float::with_val(bits, k.square_ref()) + 1u32;
    let atan = Float::with_val(bits, k.atan_ref());
    let ex = (-(atan * 4u32) / &k).exp();
    let tail = 1u32 - (-(ctx.pi() * 2u32) / &k).exp();
    Ok(ex / tail * 256u32 / k2p1.pow(5u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40, 10).unwrap()
    }

    #[test]
    fn basis_is_orthonormal() {
        let c = ctx();
        let s = overlap_matrix(10, 1, &Rational::from((5, 2)), &c).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let want = if i == j { 1 } else { 0 };
                assert!(Float::with_val(c.bits(), &s[i][j] - want).abs() < c.tolerance(), "{i},{j}");
            }
        }
    }

    #[test]
    fn laguerre_recurrence_values() {
        let c = ctx();
        let s = c.float(0.75);
        let v = laguerre_values(3, 4, &s);
        // L_2^{(4)}(s) = (s² − 12s + 30)/2
        let want = (c.float(0.5625) - 9u32 + 30u32) / 2u32;
        assert!(Float::with_val(c.bits(), &v[2] - want).abs() < c.tolerance());
    }

    #[test]
    fn matrix_is_symmetric_and_stable() {
        let c = ctx();
        let h = hamiltonian_matrix(8, 1, &Rational::from(2), &c).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(h[i][j], h[j][i]);
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let c = ctx();
        assert!(hamiltonian_matrix(1, 1, &Rational::from(1), &c).is_err());
        assert!(hamiltonian_matrix(5, 1, &Rational::from(-1), &c).is_err());
        assert!(matches!(exact_cross_section(&c.zero(), &c), Err(Error::NonPositiveEnergy(_))));
    }

    #[test]
    fn exact_sigma_values() {
        let c = ctx();
        let tiny = exact_cross_section(&c.float(1e-6), &c).unwrap();
        let limit = c.float(-4).exp() * 256u32;
        assert!((tiny - &limit).abs() < 1e-3);
        let half = exact_cross_section(&c.float(0.5), &c).unwrap();
        let pi = c.pi();
        let want = Float::with_val(c.bits(), -&pi).exp() * 8u32 / (1u32 - Float::with_val(c.bits(), &pi * -2i32).exp());
        assert!((half - want).abs() < c.tolerance());
        let mut prev = exact_cross_section(&c.float(1), &c).unwrap();
        for k in 3..40 {
            let v = exact_cross_section(&c.float(k as f64 * 0.5), &c).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn small_basis_pipeline() {
        let c = ctx();
        let cfg = PhotoConfig::new(12, Rational::from((5, 2)));
        let sp = cross_section(&cfg, &c).unwrap();
        assert!(sp.m2.iter().all(|m| *m >= 0));
        assert!(sp.bound_count() >= 1);
        let z = c.float(-0.9);
        let (a, b) = sp.resolvent_pair(&z);
        assert!((a - b).abs() < c.tolerance());
        let bound = sp.energies[0].to_f64();
        assert!(bound > -0.125 - 1e-12 && bound < -0.12);
    }
}
