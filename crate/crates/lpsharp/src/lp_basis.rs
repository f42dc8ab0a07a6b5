//! The LP orthonormal rank-polynomial system.
//!
//! `S_j(u)` are polynomials on the unit interval, orthonormal under the
//! uniform measure with zero mean; `T_j(x; F0) = S_j(F0(x))` is the same
//! system pushed through the rank transform of a base model. Construction is
//! Gram-Schmidt on exact monomial moments in rational arithmetic, so the
//! coefficients are deterministic to the last f64 ulp.

use crate::base_models::BaseModel;
use crate::error::{Error, Result};
use num::{BigRational, ToPrimitive, Zero};
use std::f64::consts::PI;

pub const MAX_SUPPORTED_ORDER: usize = 12;

/// Nodes and weights on (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate f over (0, 1).
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| w * f(u))
            .sum()
    }
}

/// Gauss-Legendre rule mapped from (-1, 1) to (0, 1).
pub fn gauss_legendre(n_nodes: usize) -> Result<QuadratureRule> {
    if !(2..=512).contains(&n_nodes) {
        return Err(Error::InvalidSize(n_nodes));
    }
    let n = n_nodes;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pd = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            pd = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pd;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // descending in cos order; store ascending on (0,1)
        nodes[n - 1 - i] = (1.0 + x) / 2.0;
        weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * pd * pd);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// The orthonormal polynomial system up to `max_order`.
#[derive(Debug, Clone)]
pub struct LPBasis {
    max_order: usize,
    /// coeffs[j-1] holds the monomial coefficients of S_j, ascending powers.
    coeffs: Vec<Vec<f64>>,
    /// per-order range of S_j over [0, 1] (feasibility guard for MaxEnt)
    s_lo: Vec<f64>,
    s_hi: Vec<f64>,
    quad: QuadratureRule,
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// <p, q> under the uniform measure, via exact monomial moments 1/(a+b+1).
fn inner(p: &[BigRational], q: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (a, ca) in p.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (b, cb) in q.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            acc += ca * cb * rational(1, (a + b + 1) as i64);
        }
    }
    acc
}

impl LPBasis {
    /// Build by Gram-Schmidt on {1, u, u^2, ...} in exact rational arithmetic.
    pub fn build(max_order: usize) -> Result<Self> {
        if max_order == 0 {
            return Err(Error::InvalidInput("max_order must be >= 1".into()));
        }
        if max_order > MAX_SUPPORTED_ORDER {
            return Err(Error::OrderTooHigh(max_order));
        }
        // orthogonal (not yet normalized) polynomials, starting from p_0 = 1
        let mut ortho: Vec<Vec<BigRational>> = vec![vec![rational(1, 1)]];
        let mut norms2: Vec<BigRational> = vec![rational(1, 1)];
        for j in 1..=max_order {
            let mut p: Vec<BigRational> = vec![BigRational::zero(); j + 1];
            p[j] = rational(1, 1); // monic u^j keeps the leading sign positive
            for k in 0..j {
                let proj = inner(&p, &ortho[k]) / norms2[k].clone();
                for (c, o) in p.iter_mut().zip(&ortho[k]) {
                    *c -= &proj * o;
                }
            }
            let n2 = inner(&p, &p);
            norms2.push(n2);
            ortho.push(p);
        }
        let coeffs: Vec<Vec<f64>> = (1..=max_order)
            .map(|j| {
                let norm = norms2[j].to_f64().unwrap().sqrt();
                ortho[j]
                    .iter()
                    .map(|c| c.to_f64().unwrap() / norm)
                    .collect()
            })
            .collect();

        // range of each S_j over [0,1] from a dense grid (guard, not inference)
        let mut s_lo = Vec::with_capacity(max_order);
        let mut s_hi = Vec::with_capacity(max_order);
        for j in 1..=max_order {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            let grid = 16384;
            for g in 0..=grid {
                let v = legendre_s(j, g as f64 / grid as f64);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            s_lo.push(lo);
            s_hi.push(hi);
        }

        Ok(LPBasis {
            max_order,
            coeffs,
            s_lo,
            s_hi,
            quad: gauss_legendre(128)?,
        })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quad
    }

    pub fn coefficients(&self, j: usize) -> Result<&[f64]> {
        self.check_order(j)?;
        Ok(&self.coeffs[j - 1])
    }

    /// Range of S_j over [0, 1].
    pub fn range(&self, j: usize) -> Result<(f64, f64)> {
        self.check_order(j)?;
        Ok((self.s_lo[j - 1], self.s_hi[j - 1]))
    }

    fn check_order(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.max_order {
            return Err(Error::IndexOutOfRange {
                index: j,
                max_order: self.max_order,
            });
        }
        Ok(())
    }

    /// S_j(u). Evaluation runs on the shifted-Legendre three-term recurrence
    /// rather than the monomial coefficients: Horner on the monomials loses
    /// ~1e-10 to cancellation near the endpoints at order 8, the recurrence
    /// stays at ulp level.
    pub fn eval_s(&self, j: usize, u: f64) -> Result<f64> {
        self.check_order(j)?;
        Ok(legendre_s(j, u))
    }

    /// T_j(x; F0) = S_j(F0(x)).
    pub fn eval_t(&self, j: usize, model: &BaseModel, x: f64) -> Result<f64> {
        let u = model.cdf(x)?;
        self.eval_s(j, u)
    }
}

#[cfg(test)]
fn horner(coeffs: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

/// sqrt(2j+1) * P_j(2u - 1) by the Legendre recurrence.
fn legendre_s(j: usize, u: f64) -> f64 {
    let x = 2.0 * u - 1.0;
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=j {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if j == 0 { p0 } else { p1 };
    ((2 * j + 1) as f64).sqrt() * p
}
