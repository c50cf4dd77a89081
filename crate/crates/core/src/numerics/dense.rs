//! Cyclic Jacobi rotations for dense symmetric matrices.

use rug::ops::NegAssign;
use rug::{Assign, Float};

use super::EigenDecomposition;
use crate::error::{Error, Result};
use crate::precision::{PrecisionContext, ESCALATION_DIGITS};

const MAX_SWEEPS: usize = 80;

pub fn eigen_dense_symmetric(m: &[Vec<Float>], ctx: &PrecisionContext) -> Result<EigenDecomposition> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::BadDimension("dense solver needs a non-empty square matrix".into()));
    }
    let bits = ctx.bits();
    let norm = norm_inf(m, bits);
    let mut asym = Float::new(bits);
    for i in 0..n {
        for j in i + 1..n {
            let d = Float::with_val(bits, &m[i][j] - &m[j][i]).abs();
            if d > asym {
                asym = d;
            }
        }
    }
    let limit = ctx.pow10_neg((ctx.working_digits() / 2) as i64) * &norm;
    if asym > limit {
        return Err(Error::AsymmetricInput(asym.to_f64()));
    }
    match jacobi(m, ctx) {
        Some(d) => Ok(d),
        None => {
            let up = ctx.escalated(ESCALATION_DIGITS).ok_or(Error::PrecisionExhausted {
                digits: ctx.working_digits(),
                reason: "Jacobi sweeps did not converge".into(),
            })?;
            let mut d = jacobi(m, &up).ok_or(Error::PrecisionExhausted {
                digits: up.working_digits(),
                reason: "Jacobi sweeps did not converge".into(),
            })?;
            for v in d.values.iter_mut().chain(d.first_components.iter_mut()) {
                v.set_prec(bits);
            }
            for v in d.vectors.iter_mut().flatten().flatten() {
                v.set_prec(bits);
            }
            Ok(d)
        }
    }
}

fn norm_inf(m: &[Vec<Float>], bits: u32) -> Float {
    let mut best = Float::new(bits);
    for row in m {
        let mut s = Float::new(bits);
        for v in row {
            s += v.clone().abs();
        }
        if s > best {
            best = s;
        }
    }
    best
}

fn jacobi(m: &[Vec<Float>], ctx: &PrecisionContext) -> Option<EigenDecomposition> {
    let n = m.len();
    let bits = ctx.bits();
    // symmetrize from the upper triangle
    let mut a: Vec<Vec<Float>> = (0..n)
        .map(|i| (0..n).map(|j| Float::with_val(bits, if i <= j { &m[i][j] } else { &m[j][i] })).collect())
        .collect();
    let mut v: Vec<Vec<Float>> =
        (0..n).map(|i| (0..n).map(|j| Float::with_val(bits, (i == j) as u32)).collect()).collect();
    let mut frob = Float::new(bits);
    for row in &a {
        for x in row {
            frob += x.clone().square();
        }
    }
    let frob = frob.sqrt();
    let stop = ctx.pow10_neg((ctx.working_digits() + ctx.guard_digits() / 2) as i64) * &frob;
    let mut converged = n == 1;
    let (mut t, mut c, mut s, mut tmp) = (Float::new(bits), Float::new(bits), Float::new(bits), Float::new(bits));
    for _ in 0..MAX_SWEEPS {
        let mut off = Float::new(bits);
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j].clone().square();
            }
        }
        let off = (off * 2u32).sqrt();
        if off <= stop || off.is_zero() {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].is_zero() {
                    continue;
                }
                // theta = (a_qq - a_pp) / (2 a_pq), t = sgn(theta)/(|theta| + sqrt(theta²+1))
                tmp.assign(&a[q][q] - &a[p][p]);
                tmp /= &a[p][q];
                tmp /= 2u32;
                let neg = tmp.is_sign_negative();
                t.assign(tmp.square_ref());
                t += 1u32;
                t.sqrt_mut();
                t += tmp.clone().abs();
                t.recip_mut();
                if neg {
                    t = -t;
                }
                c.assign(t.square_ref());
                c += 1u32;
                c.sqrt_mut();
                c.recip_mut();
                s.assign(&t * &c);
                rotate(&mut a, &mut v, p, q, &c, &s, &t, bits);
            }
        }
    }
    if !converged {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).expect("finite eigenvalues"));
    let values: Vec<Float> = order.iter().map(|&i| a[i][i].clone()).collect();
    let vectors: Vec<Vec<Float>> = order
        .iter()
        .map(|&k| {
            let mut col: Vec<Float> = (0..n).map(|i| v[i][k].clone()).collect();
            if col[0].is_sign_negative() {
                col.iter_mut().for_each(|x| x.neg_assign());
            }
            col
        })
        .collect();
    let first_components = vectors.iter().map(|c| c[0].clone()).collect();
    Some(EigenDecomposition { values, first_components, vectors: Some(vectors) })
}

#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut [Vec<Float>], v: &mut [Vec<Float>], p: usize, q: usize, c: &Float, s: &Float, t: &Float, bits: u32) {
    let n = a.len();
    let apq = a[p][q].clone();
    // diagonal updates
    let shift = Float::with_val(bits, t * &apq);
    a[p][p] -= &shift;
    a[q][q] += &shift;
    a[p][q].assign(0u32);
    a[q][p].assign(0u32);
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[r][p].clone();
        let arq = a[r][q].clone();
        let np = Float::with_val(bits, c * &arp) - Float::with_val(bits, s * &arq);
        let nq = Float::with_val(bits, s * &arp) + Float::with_val(bits, c * &arq);
        a[r][p].assign(&np);
        a[p][r].assign(&np);
        a[r][q].assign(&nq);
        a[q][r].assign(&nq);
    }
    for row in v.iter_mut() {
        let vp = row[p].clone();
        let vq = row[q].clone();
        row[p] = Float::with_val(bits, c * &vp) - Float::with_val(bits, s * &vq);
        row[q] = Float::with_val(bits, s * &vp) + Float::with_val(bits, c * &vq);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eigen_tridiagonal, SymTridiagonal};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40, 10).unwrap()
    }

    #[test]
    fn identity() {
        let c = ctx();
        let n = 5;
        let m: Vec<Vec<Float>> = (0..n).map(|i| (0..n).map(|j| c.float((i == j) as u32)).collect()).collect();
        let e = eigen_dense_symmetric(&m, &c).unwrap();
        assert!(e.values.iter().all(|v| *v == 1));
    }

    #[test]
    fn swap_matrix() {
        let c = ctx();
        let m = vec![vec![c.zero(), c.float(1)], vec![c.float(1), c.zero()]];
        let e = eigen_dense_symmetric(&m, &c).unwrap();
        let tol = c.tolerance();
        assert!((e.values[0].clone() + 1u32).abs() < tol);
        assert!((e.values[1].clone() - 1u32).abs() < tol);
        let r = c.float(0.5).sqrt();
        let vs = e.vectors.unwrap();
        assert!((vs[0][0].clone() - &r).abs() < tol);
        assert!((vs[0][1].clone() + &r).abs() < tol);
        assert!((vs[1][1].clone() - &r).abs() < tol);
    }

    #[test]
    fn matches_tridiagonal_solver() {
        let c = ctx();
        let t = SymTridiagonal::new(vec![c.zero(); 10], vec![c.float(0.5); 9]).unwrap();
        let d = eigen_dense_symmetric(&t.to_dense(), &c).unwrap();
        let e = eigen_tridiagonal(&t, &c).unwrap();
        for k in 0..10 {
            assert!((d.values[k].clone() - &e.values[k]).abs() < c.tolerance());
            assert!((d.first_components[k].clone() - &e.first_components[k]).abs() < c.tolerance());
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let c = ctx();
        let m = vec![vec![c.zero(), c.float(1)], vec![c.float(1.5), c.zero()]];
        assert!(matches!(eigen_dense_symmetric(&m, &c), Err(Error::AsymmetricInput(_))));
    }

    #[test]
    fn orthonormal_vectors() {
        let c = ctx();
        let n = 7;
        let m: Vec<Vec<Float>> =
            (0..n).map(|i| (0..n).map(|j| c.float(1.0 / (1 + i + j) as f64)).collect()).collect();
        let e = eigen_dense_symmetric(&m, &c).unwrap();
        let vs = e.vectors.as_ref().unwrap();
        for i in 0..n {
            for j in 0..n {
                let mut dot = c.zero();
                for t in 0..n {
                    dot += Float::with_val(c.bits(), &vs[i][t] * &vs[j][t]);
                }
                assert!((dot - (i == j) as u32).abs() < c.tolerance());
            }
            // M v = λ v
            for r in 0..n {
                let mut s = c.zero();
                for t in 0..n {
                    s += Float::with_val(c.bits(), &m[r][t] * &vs[i][t]);
                }
                s -= Float::with_val(c.bits(), &e.values[i] * &vs[i][r]);
                assert!(s.abs() < c.tolerance());
            }
        }
    }
}
