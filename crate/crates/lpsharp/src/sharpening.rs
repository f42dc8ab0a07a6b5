//! Density-sharpening functions and d-sharp models.
//!
//! The sharpening function d(u) repairs a base model multiplicatively:
//! f(x) = f0(x) * d(F0(x)). Two forms are supported: the truncated L2 series
//! 1 + sum LP_j S_j(u) (may dip below zero, reported as-is) and the
//! maximum-entropy exponential exp(sum theta_j S_j(u) - Psi), fitted by
//! Newton iteration on the strictly convex dual.

use crate::base_models::BaseModel;
use crate::error::{Error, Result};
use crate::lp_basis::{gauss_legendre, LPBasis, QuadratureRule};
use crate::lp_inference::LPProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharpenForm {
    L2Series,
    MaxEnt,
}

/// An estimated d(u; F0, F).
#[derive(Debug, Clone)]
pub struct SharpeningFunction {
    form: SharpenForm,
    /// (order, coefficient) pairs: LP values for L2, natural parameters for MaxEnt.
    terms: Vec<(usize, f64)>,
    log_partition: f64,
    basis: LPBasis,
}

impl SharpeningFunction {
    /// Truncated L2 series with the given retained coefficients.
    pub fn l2(terms: Vec<(usize, f64)>, basis: &LPBasis) -> Self {
        SharpeningFunction {
            form: SharpenForm::L2Series,
            terms,
            log_partition: 0.0,
            basis: basis.clone(),
        }
    }

    /// L2 series from a profile's selected set.
    pub fn l2_from_profile(profile: &LPProfile, basis: &LPBasis) -> Self {
        let terms = profile
            .selected
            .iter()
            .map(|&j| (j, profile.smoothed[j - 1]))
            .collect();
        Self::l2(terms, basis)
    }

    pub fn form(&self) -> SharpenForm {
        self.form
    }

    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    pub fn basis(&self) -> &LPBasis {
        &self.basis
    }

    fn linear_term(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(j, c)| c * self.basis.eval_s(j, u).unwrap())
            .sum()
    }

    /// d(u) for either form.
    pub fn eval(&self, u: f64) -> f64 {
        match self.form {
            SharpenForm::L2Series => 1.0 + self.linear_term(u),
            SharpenForm::MaxEnt => (self.linear_term(u) - self.log_partition).exp(),
        }
    }

    /// L2 evaluation; the series may be negative, which is reported as-is.
    pub fn d_l2(&self, u: f64) -> f64 {
        1.0 + self.linear_term(u)
    }

    /// MaxEnt evaluation; errors when called on an L2 form.
    pub fn d_maxent(&self, u: f64) -> Result<f64> {
        if self.form != SharpenForm::MaxEnt {
            return Err(Error::WrongForm);
        }
        Ok(self.eval(u))
    }
}

/// Solve A x = b by Gaussian elimination with partial pivoting (tiny systems).
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let s: f64 = (col + 1..n).map(|k| a[col][k] * x[k]).sum();
        x[col] = (b[col] - s) / a[col][col];
    }
    Some(x)
}

struct DualState {
    /// s_mat[k][node] = S_{j_k}(u_node)
    s_mat: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl DualState {
    fn new(orders: &[usize], basis: &LPBasis, quad: &QuadratureRule) -> Self {
        let s_mat = orders
            .iter()
            .map(|&j| {
                quad.nodes()
                    .iter()
                    .map(|&u| basis.eval_s(j, u).unwrap())
                    .collect()
            })
            .collect();
        DualState {
            s_mat,
            weights: quad.weights().to_vec(),
        }
    }

    /// log-partition, with the max exponent shifted out for stability.
    fn log_partition(&self, theta: &[f64]) -> f64 {
        let exps = self.exponents(theta);
        let m = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = exps
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| w * (e - m).exp())
            .sum();
        m + z.ln()
    }

    fn exponents(&self, theta: &[f64]) -> Vec<f64> {
        let n = self.weights.len();
        let mut out = vec![0.0; n];
        for (row, &t) in self.s_mat.iter().zip(theta) {
            for (o, &s) in out.iter_mut().zip(row) {
                *o += t * s;
            }
        }
        out
    }

    /// Moments E_theta[S_j] for each constrained order.
    fn moments(&self, theta: &[f64]) -> Vec<f64> {
        let exps = self.exponents(theta);
        let m = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let dens: Vec<f64> = exps.iter().map(|&e| (e - m).exp()).collect();
        let z: f64 = dens.iter().zip(&self.weights).map(|(d, w)| d * w).sum();
        self.s_mat
            .iter()
            .map(|row| {
                row.iter()
                    .zip(dens.iter().zip(&self.weights))
                    .map(|(&s, (&d, &w))| s * d * w)
                    .sum::<f64>()
                    / z
            })
            .collect()
    }

    /// Covariance matrix of {S_j} under d_theta (the dual Hessian).
    fn covariance(&self, theta: &[f64]) -> Vec<Vec<f64>> {
        let exps = self.exponents(theta);
        let m = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let dens: Vec<f64> = exps.iter().map(|&e| (e - m).exp()).collect();
        let z: f64 = dens.iter().zip(&self.weights).map(|(d, w)| d * w).sum();
        let k = self.s_mat.len();
        let mom = self.moments(theta);
        let mut cov = vec![vec![0.0; k]; k];
        for (node, (&d, &w)) in dens.iter().zip(&self.weights).enumerate() {
            let f = d * w / z;
            for a in 0..k {
                let sa = self.s_mat[a][node];
                for b in a..k {
                    cov[a][b] += f * sa * self.s_mat[b][node];
                }
            }
        }
        for a in 0..k {
            for b in a..k {
                let v = cov[a][b] - mom[a] * mom[b];
                cov[a][b] = v;
                cov[b][a] = v;
            }
        }
        cov
    }

    fn dual_value(&self, theta: &[f64], targets: &[f64]) -> f64 {
        self.log_partition(theta)
            - theta.iter().zip(targets).map(|(t, g)| t * g).sum::<f64>()
    }
}

const MAX_NEWTON_ITERS: usize = 200;

/// Fit the exponential tilt matching the given LP-moment constraints.
///
/// Constraints are (order, target-moment) pairs. Newton iterations on the
/// dual run on `quad`; the converged solution is certified on a rule with
/// twice the nodes and the log-partition is taken from that finer rule.
pub fn maxent_fit(
    constraints: &[(usize, f64)],
    basis: &LPBasis,
    quad: &QuadratureRule,
) -> Result<SharpeningFunction> {
    if constraints.len() > basis.max_order() {
        return Err(Error::InvalidInput(format!(
            "{} constraints exceed max order {}",
            constraints.len(),
            basis.max_order()
        )));
    }
    let mut orders: Vec<usize> = Vec::new();
    for &(j, target) in constraints {
        let (lo, hi) = basis.range(j)?;
        if !(target > lo && target < hi) {
            return Err(Error::InfeasibleConstraint {
                order: j,
                target,
                lo,
                hi,
            });
        }
        if orders.contains(&j) {
            return Err(Error::InvalidInput(format!("duplicate constraint for order {j}")));
        }
        orders.push(j);
    }
    if constraints.is_empty() {
        return Ok(SharpeningFunction {
            form: SharpenForm::MaxEnt,
            terms: Vec::new(),
            log_partition: 0.0,
            basis: basis.clone(),
        });
    }

    let targets: Vec<f64> = constraints.iter().map(|&(_, t)| t).collect();
    let state = DualState::new(&orders, basis, quad);
    // first-order exponential-family initialization
    let mut theta = targets.clone();
    let mut value = state.dual_value(&theta, &targets);
    if !value.is_finite() {
        theta = vec![0.0; targets.len()];
        value = state.dual_value(&theta, &targets);
    }
    let mut converged = false;
    for _ in 0..MAX_NEWTON_ITERS {
        let mom = state.moments(&theta);
        let grad: Vec<f64> = mom.iter().zip(&targets).map(|(m, t)| m - t).collect();
        if grad.iter().all(|g| g.abs() <= 1e-10) {
            converged = true;
            break;
        }
        let hess = state.covariance(&theta);
        let step = solve(hess, grad.clone()).ok_or(Error::NoConvergence(MAX_NEWTON_ITERS))?;
        // damped step: halve until the dual decreases
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = theta
                .iter()
                .zip(&step)
                .map(|(t, s)| t - scale * s)
                .collect();
            let cand_value = state.dual_value(&cand, &targets);
            if cand_value.is_finite() && cand_value < value + 1e-15 {
                theta = cand;
                value = cand_value;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence(MAX_NEWTON_ITERS));
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_NEWTON_ITERS));
    }

    // certify on a doubled rule and take the final log-partition from it
    let fine = gauss_legendre((quad.len() * 2).min(512))?;
    let fine_state = DualState::new(&orders, basis, &fine);
    let fine_mom = fine_state.moments(&theta);
    if fine_mom
        .iter()
        .zip(&targets)
        .any(|(m, t)| (m - t).abs() > 1e-8)
    {
        return Err(Error::NoConvergence(MAX_NEWTON_ITERS));
    }
    let log_partition = fine_state.log_partition(&theta);

    Ok(SharpeningFunction {
        form: SharpenForm::MaxEnt,
        terms: orders.into_iter().zip(theta).collect(),
        log_partition,
        basis: basis.clone(),
    })
}

/// A base model paired with its sharpening function.
#[derive(Debug, Clone)]
pub struct DSModel {
    pub base: BaseModel,
    pub sharpener: SharpeningFunction,
}

impl DSModel {
    pub fn new(base: BaseModel, sharpener: SharpeningFunction) -> Self {
        DSModel { base, sharpener }
    }

    /// f0(x) * d(F0(x)).
    pub fn pdf(&self, x: f64) -> Result<f64> {
        let f0 = self.base.pdf(x)?;
        let u = self.base.cdf(x)?;
        Ok(f0 * self.sharpener.eval(u))
    }
}

/// KL(f0 || f) = integral of d log d over (0, 1).
///
/// For an L2 form the integrand is undefined wherever d <= 0; any
/// nonpositive node value is an error.
pub fn kl_surprise(sharpener: &SharpeningFunction, quad: &QuadratureRule) -> Result<f64> {
    let mut acc = 0.0;
    for (&u, &w) in quad.nodes().iter().zip(quad.weights()) {
        let d = sharpener.eval(u);
        if d <= 0.0 {
            return Err(Error::NegativeDensity);
        }
        acc += w * d * d.ln();
    }
    Ok(acc)
}
