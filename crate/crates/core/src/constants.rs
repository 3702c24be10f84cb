//! Model constants of the uniform k-out digraph.
//!
//! Everything derives from `tau`, the unique positive root of
//! `1 - tau/k - exp(-tau) = 0`, which lies in `(k - 1/2, k)` for every
//! `k >= 2`. For large `k` the deficit `k - tau` is far below the
//! resolution of `tau` itself, so quantities that depend on it are computed
//! from `mu = exp(-tau)`, which is accurate to full relative precision.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default residual tolerance for [`solve_tau`].
pub const DEFAULT_TOL: f64 = 1e-12;

/// All scalar constants referenced by the limit laws for a fixed out-degree `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConstants {
    pub k: u32,
    /// Root of `1 - tau/k = exp(-tau)`.
    pub tau: f64,
    /// Limiting fraction of vertices in the giant, `tau / k`.
    pub nu: f64,
    /// `1 - nu = exp(-tau)`.
    pub mu: f64,
    /// Limiting variance of `(|Q_n| - nu n) / sqrt(n)`.
    pub sigma2: f64,
    /// Exponential decay rate of spectrum sizes outside the giant.
    pub lambda: f64,
    /// Base of the exponential bound on the k-surjection probability.
    pub gamma: f64,
    pub rho: f64,
    /// Mean of the limiting Poisson law of the cycle count outside the giant.
    pub cycle_mean_total: f64,
    /// Limit of `max spectrum size / log n` outside the giant.
    pub spectrum_coeff: f64,
    /// Limit of `longest path / log n` outside the giant.
    pub path_coeff: f64,
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

/// Residual of the defining equation at `x`.
pub fn tau_residual(k: u32, x: f64) -> f64 {
    1.0 - x / f64::from(k) - (-x).exp()
}

/// Solves `1 - tau/k - exp(-tau) = 0` for the positive root.
///
/// Bisection on `(k - 1/2, k)`, where the residual changes sign, followed by a
/// Newton polish that is kept inside the bracket.
pub fn solve_tau(k: u32, tol: f64) -> Result<f64> {
    check_k(k)?;
    if !tol.is_finite() || tol <= 0.0 || tol > 1e-6 {
        return Err(Error::invalid(format!("tolerance must lie in (0, 1e-6], got {tol}")));
    }
    let kf = f64::from(k);
    let (mut lo, mut hi) = (kf - 0.5, kf);
    // residual is positive at lo, negative at hi
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if tau_residual(k, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let r = tau_residual(k, x);
        if r.abs() < tol * 1e-3 {
            break;
        }
        let slope = -1.0 / kf + (-x).exp();
        let next = x - r / slope;
        if !(next > lo && next < hi) || next == x {
            break;
        }
        x = next;
    }
    let r = tau_residual(k, x);
    let (best, best_r) = [lo, x, hi]
        .into_iter()
        .map(|p| (p, tau_residual(k, p).abs()))
        .fold((x, r.abs()), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
    if best_r < tol {
        Ok(best)
    } else {
        Err(Error::invalid(format!(
            "residual {best_r:e} at tau = {best} cannot reach tolerance {tol:e} in double precision"
        )))
    }
}

impl ModelConstants {
    /// Derives every constant for out-degree `k`.
    pub fn derive(k: u32) -> Result<Self> {
        let tau = solve_tau(k, DEFAULT_TOL)?;
        Ok(Self::from_tau(k, tau))
    }

    fn from_tau(k: u32, tau: f64) -> Self {
        let kf = f64::from(k);
        let mu = (-tau).exp();
        let nu = 1.0 - mu;
        let deficit = kf * mu;
        let sigma2 = nu * mu / (1.0 - deficit);
        let lambda = deficit * (tau / (kf - 1.0)).powf(kf - 1.0);
        let log_gamma = -deficit - (kf - 1.0) * (-mu).ln_1p();
        let rho = kf * (1.0 - tau).exp() * nu.powf(kf - 1.0);
        ModelConstants {
            k,
            tau,
            nu,
            mu,
            sigma2,
            lambda,
            gamma: log_gamma.exp(),
            rho,
            cycle_mean_total: -(-deficit).ln_1p(),
            spectrum_coeff: -1.0 / lambda.ln(),
            path_coeff: 1.0 / (tau - kf.ln()),
        }
    }

    /// `k - tau`, equal to `k * mu`.
    pub fn deficit(&self) -> f64 {
        f64::from(self.k) * self.mu
    }

    /// `log(gamma)`; `gamma` itself rounds to 1 for large `k`.
    pub fn log_gamma(&self) -> f64 {
        let kf = f64::from(self.k);
        -self.deficit() - (kf - 1.0) * (-self.mu).ln_1p()
    }

    /// Upper bound `(k - tau) exp(1 - k + tau)` on `lambda`.
    pub fn lambda_prime(&self) -> f64 {
        let d = self.deficit();
        d * (1.0 - d).exp()
    }

    /// `sigma^2` from the `tau` form, `tau / (k e^tau (1 - k e^-tau))`.
    pub fn sigma2_tau_form(&self) -> f64 {
        let kf = f64::from(self.k);
        self.tau / (kf * self.tau.exp() * (1.0 - kf * (-self.tau).exp()))
    }

    /// `sigma^2` from the `nu` form, `nu (1 - nu) / (1 - k (1 - nu))`.
    pub fn sigma2_nu_form(&self) -> f64 {
        let kf = f64::from(self.k);
        let nu = self.tau / kf;
        nu * (1.0 - nu) / (1.0 - kf * (1.0 - nu))
    }

    /// Mean of the limiting Poisson law of the number of length-`len` cycles
    /// outside the giant, `(k mu)^len / len`.
    pub fn cycle_mean(&self, len: u32) -> f64 {
        self.deficit().powi(len as i32) / f64::from(len)
    }

    /// Checks the fixed-point residual and the ordering inequalities on the
    /// constants. Comparisons against 1 that would round away are made on
    /// the complementary quantity (`mu > 0` for `nu < 1`, `log gamma < 0`
    /// for `gamma < 1`).
    pub fn check_invariants(&self) -> Result<()> {
        let kf = f64::from(self.k);
        let mut failed = Vec::new();
        let mut check = |ok: bool, what: &str| {
            if !ok {
                failed.push(what.to_string());
            }
        };
        check(tau_residual(self.k, self.tau).abs() < DEFAULT_TOL, "fixed-point residual");
        let d = self.deficit();
        check(d > 0.0 && d < 0.5, "0 < k - tau < 1/2");
        check(self.deficit() > 0.0 && self.deficit() < 0.5 && self.tau <= kf, "tau in (k - 1/2, k)");
        check(1.0 - 1.0 / (2.0 * kf) < self.nu && self.mu > 0.0, "1 - 1/(2k) < nu < 1");
        check(self.lambda < self.lambda_prime(), "lambda < lambda'");
        check(self.lambda_prime() < 1.0, "lambda' < 1");
        check(self.log_gamma() < 0.0, "gamma < 1");
        check(self.rho < 1.0, "rho < 1");
        check(d < 0.5 && self.cycle_mean_total > 0.0 && self.cycle_mean_total.is_finite(), "k mu < 1/2");
        check((self.sigma2_tau_form() - self.sigma2_nu_form()).abs() < 1e-10, "sigma^2 forms agree");
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::Invariant(format!("constants for k = {}: {}", self.k, failed.join(", "))))
        }
    }

    fn check_open_unit(x: f64) -> Result<()> {
        if x > 0.0 && x < 1.0 {
            Ok(())
        } else {
            Err(Error::invalid(format!("x must lie strictly inside (0, 1), got {x}")))
        }
    }

    /// `h(x) = x (k-1) log x + x log gamma - (1-x) log(1-x)`, the log of the
    /// per-vertex k-surjection rate `f`.
    pub fn h(&self, x: f64) -> Result<f64> {
        Self::check_open_unit(x)?;
        let kf = f64::from(self.k);
        Ok(x * (kf - 1.0) * x.ln() + x * self.log_gamma() - (1.0 - x) * (-x).ln_1p())
    }

    pub fn f(&self, x: f64) -> Result<f64> {
        self.h(x).map(f64::exp)
    }
}

/// `g(x) = 1 / sqrt(x (1 - x))`.
pub fn g(x: f64) -> Result<f64> {
    ModelConstants::check_open_unit(x)?;
    Ok(1.0 / (x * (1.0 - x)).sqrt())
}
