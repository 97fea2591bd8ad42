//! Spatial model: fixed base-station / surface geometry, disc-uniform user
//! placement, the planar Poisson eavesdropper field, path loss, and the
//! channel-power distributions of the typical user pair.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::{CascadedStats, FadingParams};
use crate::quadrature::integrate_adaptive;
use crate::special::{ln_gamma_unchecked, reg_lower_incomplete_gamma};

/// Converts a dB value to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear value to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Full system configuration: geometry, densities, SNRs, power allocation
/// and target secrecy rates. SNRs are stored in linear scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Base-station-to-surface distance in meters.
    pub l_br: f64,
    /// Radius of the user disc in meters.
    pub r_u: f64,
    /// Eavesdropper density per square meter.
    pub lambda_e: f64,
    /// Path loss exponent, must exceed 2 so the eavesdropper field integral
    /// converges.
    pub alpha: f64,
    /// Reference-distance intercept of the path loss model.
    pub c_r: f64,
    /// Transmit SNR toward the users (linear).
    pub rho_b: f64,
    /// Transmit SNR toward the eavesdroppers (linear).
    pub rho_e: f64,
    /// Power allocation coefficient of the strong user.
    pub a_s: f64,
    /// Power allocation coefficient of the weak user.
    pub a_w: f64,
    /// Target secrecy rate of the strong user (bits per channel use).
    pub r_s: f64,
    /// Target secrecy rate of the weak user (bits per channel use).
    pub r_w: f64,
    /// Number of surface elements.
    pub n_elements: usize,
    /// Small-scale fading parameters of the two hops.
    pub fading: FadingParams,
    /// Simulation-only truncation radius for the eavesdropper field in
    /// meters; the analysis uses the infinite plane.
    pub eve_trunc_radius: f64,
}

impl NetworkConfig {
    /// Validates every structural invariant and returns the config.
    pub fn validated(self) -> Result<Self> {
        if (self.a_s + self.a_w - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!(
                "power allocation must satisfy a_s + a_w = 1 (got {} + {} = {})",
                self.a_s,
                self.a_w,
                self.a_s + self.a_w
            )));
        }
        if !(self.a_w > self.a_s) || self.a_s <= 0.0 {
            return Err(Error::config(format!(
                "NOMA ordering requires 0 < a_s < a_w (got a_s = {}, a_w = {})",
                self.a_s, self.a_w
            )));
        }
        if !(self.alpha > 2.0) {
            return Err(Error::config(format!(
                "path loss exponent must satisfy alpha > 2 (got {})",
                self.alpha
            )));
        }
        for (name, v) in [
            ("l_br", self.l_br),
            ("r_u", self.r_u),
            ("c_r", self.c_r),
            ("rho_b", self.rho_b),
            ("rho_e", self.rho_e),
            ("eve_trunc_radius", self.eve_trunc_radius),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(format!("{name} must be positive (got {v})")));
            }
        }
        if self.lambda_e < 0.0 {
            return Err(Error::config(format!(
                "eavesdropper density must be >= 0 (got {})",
                self.lambda_e
            )));
        }
        if self.r_s < 0.0 || self.r_w < 0.0 {
            return Err(Error::config(format!(
                "target rates must be >= 0 (got R_s = {}, R_w = {})",
                self.r_s, self.r_w
            )));
        }
        if self.n_elements == 0 {
            return Err(Error::config("element count must be >= 1".to_string()));
        }
        // re-run the fading invariants
        FadingParams::new(
            self.fading.kappa1,
            self.fading.mu1,
            self.fading.kappa2,
            self.fading.mu2,
        )?;
        Ok(self)
    }

    /// delta = 2 / alpha, the tail exponent of the eavesdropper field.
    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    /// A_L = C_r l_BR^{-alpha}, the distance-independent path loss factor.
    pub fn a_l(&self) -> f64 {
        self.c_r * self.l_br.powf(-self.alpha)
    }
}

/// Path loss of a surface-assisted link at surface-to-receiver distance d:
/// C_r (l_BR d)^{-alpha}.
pub fn path_loss(d: f64, cfg: &NetworkConfig) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain("path_loss", format!("d = {d} must be > 0")));
    }
    Ok(cfg.c_r * (cfg.l_br * d).powf(-cfg.alpha))
}

/// Draws one disc-uniform distance on (0, r_max]: density 2r / r_max^2.
fn disc_distance<R: Rng + ?Sized>(r_max: f64, rng: &mut R) -> f64 {
    // 1 - U is in (0, 1], which keeps the distance strictly positive.
    r_max * (1.0 - rng.gen::<f64>()).sqrt()
}

/// Distances of the typical user pair: one reflecting-side and one
/// transmitting-side user, both disc-uniform on (0, R_U].
pub fn sample_lu_pair<R: Rng + ?Sized>(cfg: &NetworkConfig, rng: &mut R) -> (f64, f64) {
    (disc_distance(cfg.r_u, rng), disc_distance(cfg.r_u, rng))
}

/// One realization of the truncated eavesdropper field: Poisson count with
/// mean lambda_e pi R_trunc^2, disc-uniform distances.
pub fn sample_eve_field<R: Rng + ?Sized>(cfg: &NetworkConfig, rng: &mut R) -> Vec<f64> {
    let mean = cfg.lambda_e * std::f64::consts::PI * cfg.eve_trunc_radius.powi(2);
    if mean == 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive Poisson mean").sample(rng) as usize;
    (0..count)
        .map(|_| disc_distance(cfg.eve_trunc_radius, rng))
        .collect()
}

/// CDF of the channel power of an unordered user: the Gamma-fitted
/// small-scale power mixed over the disc-uniform distance,
///
///   F(x) = (2 / R_U^2) * integral_0^{R_U} P(k_r, x r^alpha / (A_L theta_r)) r dr,
///
/// evaluated by adaptive quadrature (in the variable u = r^2) to absolute
/// tolerance 1e-9.
pub fn unordered_user_cdf(x: f64, stats: &CascadedStats, cfg: &NetworkConfig) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::domain(
            "unordered_user_cdf",
            format!("x = {x} must be >= 0"),
        ));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let scale = x / (cfg.a_l() * stats.theta_r);
    let half_alpha = cfg.alpha / 2.0;
    let r_u_sq = cfg.r_u * cfg.r_u;
    let k_r = stats.k_r;
    let integrand = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let z = scale * u.powf(half_alpha);
        reg_lower_incomplete_gamma(k_r, z).unwrap_or(f64::NAN)
    };
    // The transition of the incomplete gamma sits at u ~ (k_r / scale)^{2/alpha};
    // for large x that feature is much narrower than the integration domain,
    // so the domain is split there to keep it visible to the adaptive rule.
    let u_star = (k_r / scale).powf(1.0 / half_alpha);
    let split = u_star.clamp(r_u_sq * 1e-12, r_u_sq * 0.999);
    let v = integrate_adaptive(&integrand, 0.0, split, 0.5e-9 * r_u_sq, 15)?
        + integrate_adaptive(&integrand, split, r_u_sq, 0.5e-9 * r_u_sq, 15)?;
    Ok((v / r_u_sq).clamp(0.0, 1.0))
}

/// Order statistics of two i.i.d. users: (F_strong, F_weak) = (F^2, 2F - F^2).
pub fn ordered_user_cdfs(x: f64, stats: &CascadedStats, cfg: &NetworkConfig) -> Result<(f64, f64)> {
    let f = unordered_user_cdf(x, stats, cfg)?;
    Ok(ordered_from_unordered(f))
}

/// The K = 2 order-statistic map applied to an unordered CDF value.
pub fn ordered_from_unordered(f: f64) -> (f64, f64) {
    (f * f, 2.0 * f - f * f)
}

/// Tabulated form of [`unordered_user_cdf`] for the hot inner loops of the
/// secrecy integrals.
///
/// The CDF is precomputed on a geometric grid spanning the full support
/// (deep lower tail to 1 - 1e-10) with a split-panel Gauss-Legendre rule,
/// then queried through monotone cubic interpolation of ln F (lower half)
/// or ln(1 - F) (upper half). Outside the grid the exact tail exponents
/// apply: F ~ C x^{k_r} below and 1 - F ~ C x^{-delta} above.
#[derive(Debug, Clone)]
pub struct ChannelCdfTable {
    ln_x: Vec<f64>,
    ln_f: Vec<f64>,
    ln_cf: Vec<f64>,
    slopes_f: Vec<f64>,
    slopes_cf: Vec<f64>,
    k_r: f64,
    delta: f64,
}

impl ChannelCdfTable {
    const POINTS: usize = 1600;

    pub fn new(stats: &CascadedStats, cfg: &NetworkConfig) -> Result<Self> {
        use rayon::prelude::*;
        let scale = cfg.a_l() * stats.theta_r;
        // start near the r = R_U knee and expand until both tails are deep
        let x_knee = scale * stats.k_r / cfg.r_u.powf(cfg.alpha);
        let mut lo = x_knee;
        while unordered_user_cdf(lo, stats, cfg)? > 1e-250 {
            lo /= 4.0;
        }
        let mut hi = x_knee;
        while 1.0 - unordered_user_cdf(hi, stats, cfg)? > 1e-10 {
            hi *= 4.0;
        }
        let n = Self::POINTS;
        let step = (hi.ln() - lo.ln()) / (n - 1) as f64;
        let ln_x: Vec<f64> = (0..n).map(|i| lo.ln() + step * i as f64).collect();
        let fs: Vec<f64> = ln_x
            .par_iter()
            .map(|&u| unordered_user_cdf(u.exp(), stats, cfg))
            .collect::<Result<_>>()?;
        let ln_f: Vec<f64> = fs
            .iter()
            .map(|&f| if f > 0.0 { f.ln() } else { f64::NEG_INFINITY })
            .collect();
        let ln_cf: Vec<f64> = fs
            .iter()
            .map(|&f| {
                if f < 1.0 {
                    (1.0 - f).ln()
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        let slopes_f = pchip_slopes(&ln_x, &ln_f);
        let slopes_cf = pchip_slopes(&ln_x, &ln_cf);
        Ok(ChannelCdfTable {
            ln_x,
            ln_f,
            ln_cf,
            slopes_f,
            slopes_cf,
            k_r: stats.k_r,
            delta: cfg.delta(),
        })
    }

    /// Interpolated CDF value.
    pub fn unordered(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x.is_infinite() {
            return 1.0;
        }
        let u = x.ln();
        let n = self.ln_x.len();
        if u <= self.ln_x[0] {
            // exact lower power law with slope k_r
            return (self.ln_f[0] + self.k_r * (u - self.ln_x[0])).exp();
        }
        if u >= self.ln_x[n - 1] {
            let ln_cf = self.ln_cf[n - 1] - self.delta * (u - self.ln_x[n - 1]);
            return 1.0 - ln_cf.exp();
        }
        let i = match self
            .ln_x
            .partition_point(|&v| v <= u)
        {
            0 => 0,
            p => p - 1,
        };
        let f_low = hermite(&self.ln_x, &self.ln_f, &self.slopes_f, i, u).exp();
        if f_low < 0.5 {
            f_low
        } else {
            1.0 - hermite(&self.ln_x, &self.ln_cf, &self.slopes_cf, i, u).exp()
        }
    }

    pub fn ordered(&self, x: f64) -> (f64, f64) {
        ordered_from_unordered(self.unordered(x))
    }
}

/// Fritsch-Carlson monotone cubic slopes.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0f64; n];
    let mut secants = vec![0.0f64; n - 1];
    for i in 0..n - 1 {
        secants[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    }
    d[0] = secants[0];
    d[n - 1] = secants[n - 2];
    for i in 1..n - 1 {
        let (s0, s1) = (secants[i - 1], secants[i]);
        d[i] = if s0 * s1 <= 0.0 || !s0.is_finite() || !s1.is_finite() {
            0.0
        } else {
            // harmonic mean limiter keeps the interpolant monotone
            let w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
            let w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
            (w1 + w2) / (w1 / s0 + w2 / s1)
        };
    }
    for v in d.iter_mut() {
        if !v.is_finite() {
            *v = 0.0;
        }
    }
    d
}

fn hermite(x: &[f64], y: &[f64], d: &[f64], i: usize, u: f64) -> f64 {
    let h = x[i + 1] - x[i];
    let t = (u - x[i]) / h;
    if !(y[i].is_finite() && y[i + 1].is_finite()) {
        return if t < 0.5 { y[i] } else { y[i + 1] };
    }
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1]
}

/// Small-argument power law of the unordered channel-power CDF,
/// F(x) ~ L_u x^{mu_hat N}, kept in the log domain because the values
/// underflow quickly for realistic element counts.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticUserLaw {
    /// ln L_u
    pub ln_coeff: f64,
    /// mu_hat * N
    pub exponent: f64,
    /// min(mu1, mu2)
    pub mu_hat: f64,
    /// 2 when mu1 = mu2, else 1
    pub k_u: f64,
}

impl AsymptoticUserLaw {
    /// Builds the law for an N-element surface.
    ///
    /// The per-element constant is
    ///   A_u = 2 K_u rho_00 (phi1 phi2)^{mu_hat} Gamma(|mu1-mu2|) Gamma(2 mu_hat)
    ///         / e^{mu1 kappa1 + mu2 kappa2},
    /// with rho_00 = 1/(Gamma(mu1) Gamma(mu2)). For mu1 = mu2 the
    /// Gamma(|mu1-mu2|) factor is singular and the product law carries a
    /// logarithmic correction; the factor is dropped there (K_u = 2 branch)
    /// so only the exponent is quantitative in that case.
    pub fn new(p: &FadingParams, n: usize, cfg: &NetworkConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("element count must be >= 1".to_string()));
        }
        let mu_hat = p.mu1.min(p.mu2);
        let mu_diff = (p.mu1 - p.mu2).abs();
        let equal_mu = mu_diff < 1e-12;
        let k_u = if equal_mu { 2.0 } else { 1.0 };
        let (phi1, phi2) = p.phi();
        let ln_rho00 = -ln_gamma_unchecked(p.mu1) - ln_gamma_unchecked(p.mu2);
        let ln_gamma_diff = if equal_mu {
            0.0
        } else {
            ln_gamma_unchecked(mu_diff)
        };
        let ln_a_u = (2.0f64 * k_u).ln()
            + ln_rho00
            + mu_hat * (phi1 * phi2).ln()
            + ln_gamma_diff
            + ln_gamma_unchecked(2.0 * mu_hat)
            - (p.mu1 * p.kappa1 + p.mu2 * p.kappa2);
        let nf = n as f64;
        let exponent = mu_hat * nf;
        // L_u = 2 A_u^N R_U^{alpha mu_hat N}
        //       / (A_L^{mu_hat N} Gamma(2 mu_hat N + 1) (alpha mu_hat N + 2))
        let ln_coeff = (2.0f64).ln() + nf * ln_a_u + cfg.alpha * exponent * cfg.r_u.ln()
            - exponent * cfg.a_l().ln()
            - ln_gamma_unchecked(2.0 * exponent + 1.0)
            - (cfg.alpha * exponent + 2.0).ln();
        Ok(AsymptoticUserLaw {
            ln_coeff,
            exponent,
            mu_hat,
            k_u,
        })
    }

    /// ln F(x) of the power law at x > 0.
    pub fn ln_cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain(
                "asymptotic_unordered_cdf",
                format!("x = {x} must be > 0"),
            ));
        }
        Ok(self.ln_coeff + self.exponent * x.ln())
    }

    /// F(x) itself; underflows to zero when the log value is very negative.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.ln_cdf(x)?.exp())
    }
}

/// Convenience wrapper matching the analysis interface: log-domain value of
/// the small-x law L_u x^{mu_hat N}.
pub fn asymptotic_unordered_cdf_ln(
    x: f64,
    p: &FadingParams,
    n: usize,
    cfg: &NetworkConfig,
) -> Result<f64> {
    AsymptoticUserLaw::new(p, n, cfg)?.ln_cdf(x)
}
