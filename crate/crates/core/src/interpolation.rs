//! Windowed interpolation of a sampled map and its analytic derivative.
//!
//! The main use is k ↦ x[k] for Gauss nodes: the polynomial through the
//! `order + 1` samples nearest the evaluation point is built in Newton form
//! and differentiated by a Horner sweep. Near the ends of the index range a
//! Thiele continued fraction can take over.

use std::collections::HashMap;

use rug::{Assign, Float};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPolicy {
    /// Keep the window size and slide it inside [1, n].
    Shrink,
    /// Within `width` indices of either end, differentiate a Thiele fraction
    /// through the `points` samples nearest that end.
    Thiele { points: usize, width: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationScheme {
    /// Polynomial degree; the window holds `order + 1` samples.
    pub order: usize,
    pub boundary: BoundaryPolicy,
    /// Allow non-integer evaluation points such as k − 1/2.
    pub half_integer: bool,
}

impl InterpolationScheme {
    pub fn new(order: usize) -> Self {
        Self { order, boundary: BoundaryPolicy::Shrink, half_integer: true }
    }

    pub fn with_thiele(order: usize, points: usize, width: usize) -> Self {
        Self { order, boundary: BoundaryPolicy::Thiele { points, width }, half_integer: true }
    }

    pub fn window(&self) -> usize {
        self.order + 1
    }
}

/// First index (0-based) of the `w` consecutive integers in 1..=n nearest t.
/// Ties go toward the middle of the range.
fn window_start(t: f64, w: usize, n: usize) -> usize {
    let half = (w as f64 - 1.0) / 2.0;
    let s0 = (t - half).floor();
    let center = (n as f64 + 1.0) / 2.0;
    let d0 = (s0 + half - t).abs();
    let d1 = (s0 + 1.0 + half - t).abs();
    let s = if (d0 - d1).abs() < 1e-12 {
        // equal distance: prefer the window whose center is nearer the middle
        if ((s0 + half) - center).abs() <= ((s0 + 1.0 + half) - center).abs() {
            s0
        } else {
            s0 + 1.0
        }
    } else if d0 < d1 {
        s0
    } else {
        s0 + 1.0
    };
    let max_start = (n - w + 1) as f64;
    (s.clamp(1.0, max_start) as usize) - 1
}

fn check_increasing(samples: &[Float]) -> Result<()> {
    for i in 1..samples.len() {
        if !(samples[i] > samples[i - 1]) {
            return Err(Error::NonMonotoneSamples(i + 1));
        }
    }
    Ok(())
}

/// Newton coefficients for samples at unit-spaced abscissae 0, 1, ..., w−1.
fn unit_divided_differences(vals: &[Float]) -> Vec<Float> {
    let mut c: Vec<Float> = vals.to_vec();
    for j in 1..c.len() {
        for i in (j..c.len()).rev() {
            let (lo, hi) = c.split_at_mut(i);
            hi[0] -= &lo[i - 1];
            hi[0] /= j as u32;
        }
    }
    c
}

/// Newton coefficients for arbitrary distinct abscissae.
fn divided_differences(xs: &[Float], vals: &[Float]) -> Vec<Float> {
    let mut c: Vec<Float> = vals.to_vec();
    let bits = vals[0].prec();
    for j in 1..c.len() {
        for i in (j..c.len()).rev() {
            let num = Float::with_val(bits, &c[i] - &c[i - 1]);
            let den = Float::with_val(bits, &xs[i] - &xs[i - j]);
            c[i] = num / den;
        }
    }
    c
}

/// p'(u) for the Newton form with coefficients c and centers xs.
fn newton_derivative(c: &[Float], centers: &[Float], u: &Float) -> Float {
    let bits = c[0].prec();
    let m = c.len() - 1;
    let mut p = c[m].clone();
    let mut dp = Float::new(bits);
    let mut du = Float::new(bits);
    for j in (0..m).rev() {
        du.assign(u - &centers[j]);
        dp *= &du;
        dp += &p;
        p *= &du;
        p += &c[j];
    }
    dp
}

/// Thiele continued fraction through (t_i, f_i), built from inverse differences.
#[derive(Debug, Clone)]
pub struct ThieleFit {
    ts: Vec<Float>,
    coeffs: Vec<Float>,
}

impl ThieleFit {
    pub fn new(ts: &[Float], fs: &[Float]) -> Result<Self> {
        if ts.len() != fs.len() || ts.len() < 2 {
            return Err(Error::WindowTooSmall(format!("Thiele fit needs >= 2 paired samples, got {}", ts.len())));
        }
        let bits = fs[0].prec().max(ts[0].prec());
        let p = ts.len();
        let mut phi: Vec<Float> = fs.iter().map(|f| Float::with_val(bits, f)).collect();
        let mut coeffs = vec![phi[0].clone()];
        'levels: for j in 1..p {
            // an exactly represented function ends the fraction early
            if phi[j..].iter().all(|v| *v == phi[j - 1]) {
                break 'levels;
            }
            for i in j..p {
                let den = Float::with_val(bits, &phi[i] - &phi[j - 1]);
                if den.is_zero() {
                    return Err(Error::PoleInWindow);
                }
                let num = Float::with_val(bits, &ts[i] - &ts[j - 1]);
                phi[i] = num / den;
            }
            coeffs.push(phi[j].clone());
        }
        Ok(Self { ts: ts.to_vec(), coeffs })
    }

    /// Value and derivative at t.
    pub fn eval(&self, t: &Float) -> Result<(Float, Float)> {
        let bits = self.coeffs[0].prec();
        let p = self.coeffs.len();
        let mut v = self.coeffs[p - 1].clone();
        let mut dv = Float::new(bits);
        for j in (0..p - 1).rev() {
            if v.is_zero() {
                return Err(Error::PoleInWindow);
            }
            let d = Float::with_val(bits, t - &self.ts[j]);
            // q = d/v, q' = (v − d v')/v²
            let v2 = Float::with_val(bits, v.square_ref());
            let dq = (Float::with_val(bits, &v - Float::with_val(bits, &d * &dv))) / &v2;
            let q = d / &v;
            v = q + &self.coeffs[j];
            dv = dq;
        }
        if !v.is_finite() || !dv.is_finite() {
            return Err(Error::PoleInWindow);
        }
        Ok((v, dv))
    }
}

/// Derivative at `point` of the Thiele interpolant through the given samples.
pub fn thiele_derivative(ts: &[Float], fs: &[Float], point: &Float) -> Result<Float> {
    if ts.len() < 4 {
        return Err(Error::WindowTooSmall(format!("Thiele needs >= 4 samples, got {}", ts.len())));
    }
    Ok(ThieleFit::new(ts, fs)?.eval(point)?.1)
}

/// Derivative of k ↦ x[k] (k = 1..n, `samples[k-1] = x[k]`) at each eval point.
pub fn derivative_at(samples: &[Float], scheme: &InterpolationScheme, eval: &[f64]) -> Result<Vec<Float>> {
    let mut it = NodeDifferentiator::new(samples, scheme)?;
    eval.iter().map(|&t| it.derivative(t)).collect()
}

/// Reusable evaluator that caches Newton tables per window.
pub struct NodeDifferentiator<'a> {
    samples: &'a [Float],
    scheme: InterpolationScheme,
    tables: HashMap<usize, Vec<Float>>,
    centers: Vec<Float>,
    thiele: [Option<Option<ThieleFit>>; 2],
}

impl<'a> NodeDifferentiator<'a> {
    pub fn new(samples: &'a [Float], scheme: &InterpolationScheme) -> Result<Self> {
        let n = samples.len();
        if scheme.order < 1 {
            return Err(Error::WindowTooSmall(format!("order {} leaves fewer than 2 samples", scheme.order)));
        }
        if scheme.window() > n {
            return Err(Error::WindowTooSmall(format!("order {} needs {} samples, only {n} given", scheme.order, scheme.window())));
        }
        check_increasing(samples)?;
        let bits = samples[0].prec();
        let centers = (0..scheme.window()).map(|j| Float::with_val(bits, j as u32)).collect();
        Ok(Self { samples, scheme: scheme.clone(), tables: HashMap::new(), centers, thiele: [None, None] })
    }

    pub fn derivative(&mut self, t: f64) -> Result<Float> {
        let n = self.samples.len();
        if !(1.0..=n as f64).contains(&t) || !t.is_finite() {
            return Err(Error::EvalOutOfRange(t));
        }
        if !self.scheme.half_integer && t.fract() != 0.0 {
            return Err(Error::InvalidArgument(format!("non-integer point {t} with half-integer support off")));
        }
        if let BoundaryPolicy::Thiele { points, width } = self.scheme.boundary {
            let side = if t - 1.0 < width as f64 {
                Some(0)
            } else if (n as f64) - t < width as f64 {
                Some(1)
            } else {
                None
            };
            if let Some(side) = side {
                if let Some(d) = self.thiele_at(side, points.min(n), t) {
                    return Ok(d);
                }
            }
        }
        let w = self.scheme.window();
        let s = window_start(t, w, n);
        let samples = self.samples;
        let table = self.tables.entry(s).or_insert_with(|| unit_divided_differences(&samples[s..s + w]));
        let bits = samples[0].prec();
        let u = Float::with_val(bits, t - (s + 1) as f64);
        Ok(newton_derivative(table, &self.centers, &u))
    }

    /// Thiele derivative near one end; None if the fraction has a pole.
    fn thiele_at(&mut self, side: usize, points: usize, t: f64) -> Option<Float> {
        let n = self.samples.len();
        let bits = self.samples[0].prec();
        let first = if side == 0 { 0 } else { n - points };
        let fit = self.thiele[side].get_or_insert_with(|| {
            let ts: Vec<Float> = (0..points).map(|j| Float::with_val(bits, j as u32)).collect();
            ThieleFit::new(&ts, &self.samples[first..first + points]).ok()
        });
        let u = Float::with_val(bits, t - (first + 1) as f64);
        fit.as_ref()?.eval(&u).ok().map(|(_, d)| d)
    }
}

/// Derivative at arbitrary points of the windowed interpolant through
/// (xs[j], ys[j]); `xs` strictly increasing. The window holds the
/// `order + 1` samples nearest each point by index.
pub fn derivative_at_general(xs: &[Float], ys: &[Float], order: usize, eval: &[Float]) -> Result<Vec<Float>> {
    let n = xs.len();
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument("abscissae and values differ in length".into()));
    }
    if order < 1 || order + 1 > n {
        return Err(Error::WindowTooSmall(format!("order {order} with {n} samples")));
    }
    check_increasing(xs)?;
    let w = order + 1;
    let mut tables: HashMap<usize, Vec<Float>> = HashMap::new();
    eval.iter()
        .map(|x| {
            if *x < xs[0] || *x > xs[n - 1] {
                return Err(Error::EvalOutOfRange(x.to_f64()));
            }
            // fractional 1-based position of x among the samples
            let j = xs.partition_point(|v| v <= x);
            let pos = if j == 0 {
                1.0
            } else if j >= n {
                n as f64
            } else if xs[j - 1] == *x {
                j as f64
            } else {
                j as f64 + 0.5
            };
            let s = window_start(pos, w, n);
            let c = tables.entry(s).or_insert_with(|| divided_differences(&xs[s..s + w], &ys[s..s + w]));
            Ok(newton_derivative(c, &xs[s..s + w], x))
        })
        .collect()
}
