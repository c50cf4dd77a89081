//! Symmetric tridiagonal eigensolver.
//!
//! Eigenvalues are bracketed by `f64` Sturm bisection and then polished in
//! multiprecision by Newton steps on the pivot recurrence of det(x - J),
//! safeguarded by an exact Sturm count. Eigenvectors come from a twisted
//! factorization at the converged eigenvalue, which stays stable even for
//! eigenvectors that decay by hundreds of orders of magnitude.

use rug::{Assign, Float};

use super::{par_map, EigenDecomposition};
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;

#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    diag: Vec<Float>,
    offdiag: Vec<Float>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<Float>, offdiag: Vec<Float>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::BadDimension("tridiagonal matrix needs n >= 1".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::BadDimension(format!(
                "diag has {} entries but offdiag has {}",
                diag.len(),
                offdiag.len()
            )));
        }
        if let Some(i) = offdiag.iter().position(|a| !(*a > 0)) {
            return Err(Error::NonPositiveOffdiagonal { index: i + 1 });
        }
        Ok(Self { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Float] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[Float] {
        &self.offdiag
    }

    /// Leading m x m principal submatrix.
    pub fn leading(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.n() {
            return Err(Error::BadDimension(format!("leading block {m} of {}", self.n())));
        }
        Ok(Self { diag: self.diag[..m].to_vec(), offdiag: self.offdiag[..m - 1].to_vec() })
    }

    pub fn norm_inf(&self) -> Float {
        let prec = self.diag[0].prec();
        let mut best = Float::new(prec);
        for i in 0..self.n() {
            let mut row = Float::with_val(prec, self.diag[i].abs_ref());
            if i > 0 {
                row += &self.offdiag[i - 1];
            }
            if i + 1 < self.n() {
                row += &self.offdiag[i];
            }
            if row > best {
                best = row;
            }
        }
        best
    }

    pub fn to_dense(&self) -> Vec<Vec<Float>> {
        let n = self.n();
        let prec = self.diag[0].prec();
        let mut m = vec![vec![Float::new(prec); n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i].clone();
            if i + 1 < n {
                m[i][i + 1] = self.offdiag[i].clone();
                m[i + 1][i] = self.offdiag[i].clone();
            }
        }
        m
    }

    /// ‖J v − λ v‖∞ for a given pair.
    pub fn residual(&self, lambda: &Float, v: &[Float]) -> Float {
        let n = self.n();
        let prec = lambda.prec();
        let mut worst = Float::new(prec);
        for i in 0..n {
            let mut r = Float::with_val(prec, &self.diag[i] - lambda) * &v[i];
            if i > 0 {
                r += Float::with_val(prec, &self.offdiag[i - 1] * &v[i - 1]);
            }
            if i + 1 < n {
                r += Float::with_val(prec, &self.offdiag[i] * &v[i + 1]);
            }
            r.abs_mut();
            if r > worst {
                worst = r;
            }
        }
        worst
    }
}

/// Eigenvalues and first eigenvector components.
pub fn eigen_tridiagonal(m: &SymTridiagonal, ctx: &PrecisionContext) -> Result<EigenDecomposition> {
    solve_escalating(m, ctx, false)
}

/// As [`eigen_tridiagonal`] but keeps all eigenvectors (O(n²) storage).
pub fn eigen_tridiagonal_with_vectors(
    m: &SymTridiagonal,
    ctx: &PrecisionContext,
) -> Result<EigenDecomposition> {
    solve_escalating(m, ctx, true)
}

fn solve_escalating(m: &SymTridiagonal, ctx: &PrecisionContext, keep: bool) -> Result<EigenDecomposition> {
    match solve(m, ctx, keep) {
        Ok(d) => Ok(d),
        Err(first) => {
            let Some(up) = ctx.escalated(crate::precision::ESCALATION_DIGITS) else {
                return Err(exhausted(ctx, first));
            };
            let mut d = solve(m, &up, keep).map_err(|e| exhausted(&up, e))?;
            let bits = ctx.bits();
            for v in d.values.iter_mut().chain(d.first_components.iter_mut()) {
                v.set_prec(bits);
            }
            if let Some(vs) = d.vectors.as_mut() {
                vs.iter_mut().flatten().for_each(|v| {
                    v.set_prec(bits);
                });
            }
            Ok(d)
        }
    }
}

fn exhausted(ctx: &PrecisionContext, reason: String) -> Error {
    Error::PrecisionExhausted { digits: ctx.working_digits(), reason }
}

struct Work<'a> {
    b: Vec<Float>,
    a: Vec<Float>,
    a2: Vec<Float>,
    norm: Float,
    tiny: Float,
    bits: u32,
    ctx: &'a PrecisionContext,
}

fn solve(m: &SymTridiagonal, ctx: &PrecisionContext, keep: bool) -> std::result::Result<EigenDecomposition, String> {
    let bits = ctx.bits();
    let n = m.n();
    let b: Vec<Float> = m.diag.iter().map(|v| Float::with_val(bits, v)).collect();
    let a: Vec<Float> = m.offdiag.iter().map(|v| Float::with_val(bits, v)).collect();
    let a2: Vec<Float> = a.iter().map(|v| Float::with_val(bits, v.square_ref())).collect();
    let norm = {
        let mut t = m.clone();
        t.diag = b.clone();
        t.offdiag = a.clone();
        t.norm_inf()
    };
    if n == 1 {
        let one = Float::with_val(bits, 1);
        return Ok(EigenDecomposition {
            values: vec![b[0].clone()],
            first_components: vec![one.clone()],
            vectors: keep.then(|| vec![vec![one]]),
        });
    }
    let norm = if norm.is_zero() { Float::with_val(bits, 1) } else { norm };
    let tiny = Float::with_val(bits, &norm * ctx.epsilon()) * ctx.epsilon();
    let w = Work { b, a, a2, norm, tiny, bits, ctx };

    let bf: Vec<f64> = w.b.iter().map(Float::to_f64).collect();
    let a2f: Vec<f64> = w.a2.iter().map(Float::to_f64).collect();
    let brackets = f64_brackets(&bf, &a2f);

    let results = par_map(n, |k| refine(&w, k, brackets[k]));
    let mut values = Vec::with_capacity(n);
    let mut firsts = Vec::with_capacity(n);
    let mut vectors = keep.then(|| Vec::with_capacity(n));
    for r in results {
        let (lam, vec) = r?;
        firsts.push(vec[0].clone());
        values.push(lam);
        if let Some(vs) = vectors.as_mut() {
            vs.push(vec);
        }
    }
    for k in 1..n {
        if !(values[k] > values[k - 1]) {
            return Err(format!("eigenvalues {k} and {} not separated", k + 1));
        }
    }
    Ok(EigenDecomposition { values, first_components: firsts, vectors })
}

/// Number of eigenvalues below x, in double precision.
fn sturm_f64(b: &[f64], a2: &[f64], x: f64, scale: f64) -> usize {
    let mut count = 0;
    let mut d = x - b[0];
    let guard = f64::EPSILON * scale;
    for i in 0..b.len() {
        if i > 0 {
            d = (x - b[i]) - a2[i - 1] / d;
        }
        if d == 0.0 {
            d = guard;
        }
        if d > 0.0 {
            count += 1;
        }
    }
    count
}

/// Disjoint-ish double-precision brackets for each eigenvalue.
fn f64_brackets(b: &[f64], a2: &[f64]) -> Vec<(f64, f64)> {
    let n = b.len();
    let a: Vec<f64> = a2.iter().map(|v| v.sqrt()).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { a[i - 1] } else { 0.0 } + if i + 1 < n { a[i] } else { 0.0 };
        lo = lo.min(b[i] - r);
        hi = hi.max(b[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(1e-300);
    lo -= 1e-12 * scale + 1e-300;
    hi += 1e-12 * scale + 1e-300;
    (0..n)
        .map(|k| {
            // want count(l) <= k < count(h)
            let (mut l, mut h) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (l + h);
                if mid <= l || mid >= h || h - l <= 4.0 * f64::EPSILON * scale {
                    break;
                }
                if sturm_f64(b, a2, mid, scale) > k {
                    h = mid;
                } else {
                    l = mid;
                }
            }
            (l, h)
        })
        .collect()
}

/// Pivots of x - J, Σ d_i'/d_i and the Sturm count, all at once.
fn pivot_pass(w: &Work, x: &Float) -> (Float, usize) {
    let bits = w.bits;
    let mut count = 0;
    let mut d = Float::with_val(bits, x - &w.b[0]);
    let mut dp = Float::with_val(bits, 1);
    let mut s = Float::new(bits);
    let mut q = Float::new(bits);
    for i in 0..w.b.len() {
        if i > 0 {
            // d' <- 1 + (a²/d) d'/d,  d <- (x - b) - a²/d
            q.assign(&w.a2[i - 1] / &d);
            dp *= &q;
            dp /= &d;
            dp += 1;
            d.assign(x - &w.b[i]);
            d -= &q;
        }
        if d.is_zero() {
            d.assign(&w.tiny);
        }
        if d > 0 {
            count += 1;
        }
        q.assign(&dp / &d);
        s += &q;
    }
    (s, count)
}

fn refine(w: &Work, k: usize, bracket: (f64, f64)) -> std::result::Result<(Float, Vec<Float>), String> {
    let bits = w.bits;
    let n = w.b.len();
    // establish a multiprecision bracket: count(lo) <= k < count(hi)
    let width0 = (bracket.1 - bracket.0).abs().max(f64::EPSILON * w.norm.to_f64());
    let mut lo = Float::with_val(bits, bracket.0);
    let mut hi = Float::with_val(bits, bracket.1);
    let mut grow = width0;
    for _ in 0..2000 {
        if pivot_pass(w, &lo).1 <= k {
            break;
        }
        lo -= grow;
        grow *= 2.0;
    }
    grow = width0;
    for _ in 0..2000 {
        if pivot_pass(w, &hi).1 > k {
            break;
        }
        hi += grow;
        grow *= 2.0;
    }
    let tol = Float::with_val(bits, &w.norm * w.ctx.epsilon()) * 4;
    let mut x = Float::with_val(bits, &lo + &hi) / 2;
    let mut converged = false;
    for _ in 0..(4 * bits as usize + 100) {
        let (s, count) = pivot_pass(w, &x);
        if count > k {
            hi.assign(&x);
        } else {
            lo.assign(&x);
        }
        let width = Float::with_val(bits, &hi - &lo);
        if width <= tol {
            x = Float::with_val(bits, &lo + &hi) / 2;
            converged = true;
            break;
        }
        let step = if s.is_zero() || !s.is_finite() { None } else { Some(Float::with_val(bits, 1 / &s)) };
        let next = step.map(|st| Float::with_val(bits, &x - &st));
        match next {
            Some(nx) if nx > lo && nx < hi => {
                let moved = Float::with_val(bits, &nx - &x).abs();
                x = nx;
                if moved <= tol {
                    converged = true;
                    break;
                }
            }
            _ => x = Float::with_val(bits, &lo + &hi) / 2,
        }
    }
    if !converged {
        return Err(format!("eigenvalue {} did not converge", k + 1));
    }
    let v = twisted_vector(w, &x);
    let mat = SymTridiagonal { diag: w.b.clone(), offdiag: w.a.clone() };
    let res = mat.residual(&x, &v);
    let limit = w.ctx.pow10_neg(w.ctx.working_digits() as i64 - (w.ctx.guard_digits() / 2) as i64) * &w.norm;
    if res > limit {
        return Err(format!("residual {:e} of eigenpair {} above target", res.to_f64(), k + 1));
    }
    debug_assert_eq!(v.len(), n);
    Ok((x, v))
}

/// Unit eigenvector for the (converged) eigenvalue x via a twisted factorization.
fn twisted_vector(w: &Work, x: &Float) -> Vec<Float> {
    let bits = w.bits;
    let n = w.b.len();
    let fix = |mut d: Float| {
        if d.is_zero() {
            d.assign(&w.tiny);
        }
        d
    };
    let mut dp = Vec::with_capacity(n);
    dp.push(fix(Float::with_val(bits, &w.b[0] - x)));
    for i in 1..n {
        let q = Float::with_val(bits, &w.a2[i - 1] / &dp[i - 1]);
        dp.push(fix(Float::with_val(bits, &w.b[i] - x) - q));
    }
    let mut dm = vec![Float::new(bits); n];
    dm[n - 1] = fix(Float::with_val(bits, &w.b[n - 1] - x));
    for i in (0..n - 1).rev() {
        let q = Float::with_val(bits, &w.a2[i] / &dm[i + 1]);
        dm[i] = fix(Float::with_val(bits, &w.b[i] - x) - q);
    }
    let mut r = 0;
    let mut best: Option<Float> = None;
    for i in 0..n {
        let g = Float::with_val(bits, &dp[i] + &dm[i]) - Float::with_val(bits, &w.b[i] - x);
        let g = g.abs();
        if best.as_ref().is_none_or(|b| g < *b) {
            best = Some(g);
            r = i;
        }
    }
    let mut z = vec![Float::new(bits); n];
    z[r] = Float::with_val(bits, 1);
    for i in (0..r).rev() {
        z[i] = -Float::with_val(bits, &w.a[i] * &z[i + 1]) / &dp[i];
    }
    for i in r..n - 1 {
        z[i + 1] = -Float::with_val(bits, &w.a[i] * &z[i]) / &dm[i + 1];
    }
    let mut norm2 = Float::new(bits);
    for v in &z {
        norm2 += v.clone().square();
    }
    let mut inv = norm2.sqrt().recip();
    if z[0].is_sign_negative() {
        inv = -inv;
    }
    for v in z.iter_mut() {
        *v *= &inv;
    }
    z
}
