//! Reference values computed independently of the library: closed-form
//! moments, a tanh-sinh integrator and a direct Pollaczek weight.
#![allow(dead_code)]

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta(a: &Float, b: &Float) -> Float {
    let bits = a.prec().max(b.prec());
    let s = Float::with_val(bits, a + b);
    Float::with_val(bits, a.clone().gamma() * b.clone().gamma()) / s.gamma()
}

/// ∫_{-1}^{1} x^j (1−x²)^β dx.
pub fn even_moment(j: u32, beta_exp: &Float) -> Float {
    let bits = beta_exp.prec();
    if j % 2 == 1 {
        return Float::new(bits);
    }
    let a = Float::with_val(bits, j / 2) + Float::with_val(bits, 0.5);
    let b = Float::with_val(bits, beta_exp + 1u32);
    beta(&a, &b)
}

/// Tanh-sinh quadrature on [−1, 1]. `f(x, 1−x, 1+x)` receives accurate
/// endpoint complements.
pub fn tanh_sinh(bits: u32, tol_digits: u32, f: impl Fn(&Float, &Float, &Float) -> Float) -> Float {
    let half_pi = pi(bits) / 2u32;
    let small = Float::with_val(bits, 10).pow(-(tol_digits as i32 + 5));
    let eval = |t: &Float| -> Float {
        let u = Float::with_val(bits, t.sinh_ref()) * &half_pi;
        let cu = Float::with_val(bits, u.cosh_ref());
        let x = Float::with_val(bits, u.tanh_ref());
        // 1 − tanh u = e^{−u}/cosh u, 1 + tanh u = e^{u}/cosh u
        let omx = Float::with_val(bits, (-u.clone()).exp()) / &cu;
        let opx = Float::with_val(bits, u.exp_ref()) / &cu;
        if omx.is_zero() || opx.is_zero() {
            return Float::new(bits);
        }
        let w = Float::with_val(bits, t.cosh_ref()) * &half_pi / cu.square();
        f(&x, &omx, &opx) * w
    };
    let mut h = Float::with_val(bits, 0.5);
    let mut prev: Option<Float> = None;
    for _level in 0..14 {
        let mut sum = eval(&Float::new(bits));
        let mut i = 1u32;
        loop {
            let t = Float::with_val(bits, &h * i);
            let a = eval(&t);
            let b = eval(&(-t.clone()));
            let contrib = Float::with_val(bits, a.abs_ref()) + Float::with_val(bits, b.abs_ref());
            sum += a;
            sum += b;
            i += 1;
            if (contrib < small && t > 1u32) || t > 8u32 {
                break;
            }
        }
        let total = Float::with_val(bits, &sum * &h);
        if let Some(p) = &prev {
            let diff = Float::with_val(bits, &total - p).abs();
            let scale = Float::with_val(bits, total.abs_ref()).max(&Float::with_val(bits, 1e-300));
            if diff <= Float::with_val(bits, &scale * &small) * 1000u32 {
                return total;
            }
        }
        prev = Some(total);
        h /= 2u32;
    }
    prev.expect("at least one level")
}

/// |Γ(l+1+iγ)|² through the reflection-product identity.
pub fn gamma_abs_sq(l: u32, g: &Float) -> Float {
    let bits = g.prec();
    let mut p = if g.is_zero() {
        Float::with_val(bits, 1)
    } else {
        let x = Float::with_val(bits, g * pi(bits));
        Float::with_val(bits, &x / x.clone().sinh())
    };
    for j in 1..=l {
        p *= Float::with_val(bits, g * g) + (j * j);
    }
    p
}

/// Coulomb–Pollaczek weight normalized to unit total mass.
pub fn pollaczek_rho(l: u32, z: &Rational, lambda: &Rational, x: &Float, omx: &Float, opx: &Float) -> Float {
    let bits = x.prec();
    let lam = Float::with_val(bits, lambda);
    let kappa = Float::with_val(bits, opx / omx).sqrt() * &lam / 2u32;
    let gam = Float::with_val(bits, z) / kappa;
    let theta = Float::with_val(bits, x.acos_ref());
    let e = (-(Float::with_val(bits, &theta * 2u32) - pi(bits)) * &gam).exp();
    let edge = Float::with_val(bits, omx * opx).pow(Float::with_val(bits, l) + 0.5f64);
    let g = Float::with_val(bits, z) * 2u32 / Float::with_val(bits, lambda);
    let norm = g + (l + 1);
    let fact = Float::with_val(bits, Integer::from(Integer::factorial(2 * l + 1)));
    let two = Float::with_val(bits, 2u32).pow(2 * l + 1);
    two / pi(bits) * e * edge * gamma_abs_sq(l, &gam) * norm / fact
}

/// Reference moment ∫x^j dμ for the library's catalog, keyed by spec string.
pub fn moment(spec: &str, j: u32, bits: u32, tol_digits: u32) -> Float {
    let half = Float::with_val(bits, 0.5);
    let cheb1 = |j: u32| even_moment(j, &Float::with_val(bits, -0.5));
    match spec {
        "cheb1" => cheb1(j),
        "cheb2" => even_moment(j, &half),
        // (1−x)/√(1−x²) and (1+x)/√(1−x²)
        "cheb3" => cheb1(j) - cheb1(j + 1),
        "cheb4" => cheb1(j) + cheb1(j + 1),
        "legendre" => even_moment(j, &Float::new(bits)),
        "hermite" => {
            if j % 2 == 1 {
                Float::new(bits)
            } else {
                (Float::with_val(bits, j) / 2u32 + 0.5f64).gamma()
            }
        }
        s if s.starts_with("gegenbauer:l=") => {
            let l: u32 = s["gegenbauer:l=".len()..].parse().unwrap();
            even_moment(j, &(Float::with_val(bits, l) + 0.5f64))
        }
        s if s.starts_with("laguerre:alpha=") => {
            let a: Rational = s["laguerre:alpha=".len()..].parse().unwrap();
            (Float::with_val(bits, &a) + (j + 1)).gamma()
        }
        s if s.starts_with("cp:") => {
            let mut l = 0;
            let mut z = Rational::new();
            let mut lam = Rational::new();
            for kv in s[3..].split(',') {
                let (k, v) = kv.split_once('=').unwrap();
                match k {
                    "l" => l = v.parse().unwrap(),
                    "Z" => z = v.parse().unwrap(),
                    "lambda" => lam = v.parse().unwrap(),
                    _ => panic!("unknown key {k}"),
                }
            }
            tanh_sinh(bits, tol_digits, |x, omx, opx| {
                pollaczek_rho(l, &z, &lam, x, omx, opx) * Float::with_val(bits, x.pow(j))
            })
        }
        other => panic!("no reference moments for {other}"),
    }
}
