//! Maximum-likelihood logistic regression by Newton-Raphson (IRLS).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Linear predictors beyond this magnitude put fitted probabilities within
/// ~1e-13 of 0 or 1, which only happens on the way to an infinite MLE.
const SEPARATION_ETA: f64 = 30.0;
/// Smallest acceptable Cholesky pivot relative to the matching diagonal of
/// the information matrix.
const PIVOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Convergence when every component of the score is below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            tol: 1e-8,
            max_iter: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Largest absolute score component at the returned coefficients.
    pub max_score: f64,
    pub log_likelihood: f64,
}

fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// Bernoulli log-likelihood of `beta`.
pub fn log_likelihood(x: &DMatrix<f64>, y: &[f64], beta: &DVector<f64>) -> f64 {
    let eta = x * beta;
    eta.iter()
        .zip(y)
        .map(|(&e, &yi)| {
            // log(1 + exp(e)) computed without overflow
            let softplus = if e > 0.0 { e + (-e).exp().ln_1p() } else { e.exp().ln_1p() };
            yi * e - softplus
        })
        .sum()
}

/// Score vector `X'(y - p)` and observed information `X'WX` at `beta`.
pub fn score_and_information(
    x: &DMatrix<f64>,
    y: &[f64],
    beta: &DVector<f64>,
) -> (DVector<f64>, DMatrix<f64>) {
    let eta = x * beta;
    let p: Vec<f64> = eta.iter().map(|&e| sigmoid(e)).collect();
    let resid = DVector::from_iterator(y.len(), y.iter().zip(&p).map(|(yi, pi)| yi - pi));
    let score = x.tr_mul(&resid);
    let mut weighted = x.clone();
    for (i, pi) in p.iter().enumerate() {
        let w = pi * (1.0 - pi);
        weighted.row_mut(i).scale_mut(w);
    }
    let info = x.tr_mul(&weighted);
    (score, info)
}

/// Inverse of a symmetric positive-definite matrix, rejecting matrices whose
/// Cholesky pivots collapse relative to their diagonal.
fn spd_inverse(info: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = info.clone().cholesky().ok_or(Error::SingularInformation)?;
    let l = chol.l_dirty();
    for j in 0..info.nrows() {
        let d = info[(j, j)];
        if !(d > 0.0) || l[(j, j)] * l[(j, j)] < PIVOT_TOL * d {
            return Err(Error::SingularInformation);
        }
    }
    Ok(chol.inverse())
}

/// Fit `P(y = 1) = 1 / (1 + exp(-X beta))`. `x` must already contain the
/// intercept column.
///
/// Newton steps are halved until the log-likelihood does not decrease.
/// Standard errors are the square roots of the diagonal of the inverse
/// information at the returned coefficients.
pub fn fit_logistic(x: &DMatrix<f64>, y: &[f64], opts: FitOptions) -> Result<FitResult> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(Error::Config(format!("{} responses for {n} design rows", y.len())));
    }
    if y.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::Config("logistic response must be 0 or 1".into()));
    }
    if n <= k {
        return Err(Error::RankDeficient { rows: n, terms: k });
    }

    let mut beta = DVector::zeros(k);
    let mut ll = log_likelihood(x, y, &beta);
    for iter in 0..=opts.max_iter {
        let (score, info) = score_and_information(x, y, &beta);
        let max_score = score.amax();
        let max_eta = (x * &beta).amax();
        let inverse = match spd_inverse(&info) {
            Ok(inv) => inv,
            // vanishing weights as probabilities saturate
            Err(_) if max_eta > SEPARATION_ETA / 2.0 => return Err(Error::Separation),
            Err(e) => return Err(e),
        };
        if max_score < opts.tol {
            if max_eta > SEPARATION_ETA {
                return Err(Error::Separation);
            }
            return Ok(FitResult {
                coefficients: beta.iter().copied().collect(),
                standard_errors: inverse.diagonal().iter().map(|v| v.sqrt()).collect(),
                converged: true,
                iterations: iter,
                max_score,
                log_likelihood: ll,
            });
        }
        if iter == opts.max_iter {
            break;
        }
        let step = &inverse * &score;
        let mut scale = 1.0;
        loop {
            let candidate = &beta + &step * scale;
            let cand_ll = log_likelihood(x, y, &candidate);
            // Near the optimum the gain falls below rounding error in the
            // log-likelihood; judge those steps with a matching tolerance.
            if cand_ll >= ll - 1e-12 * (1.0 + ll.abs()) || scale < 1e-10 {
                beta = candidate;
                ll = cand_ll;
                break;
            }
            scale *= 0.5;
        }
        if (x * &beta).amax() > 2.0 * SEPARATION_ETA {
            return Err(Error::Separation);
        }
    }
    Err(Error::Separation)
}
