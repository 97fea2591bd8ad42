//! Independent Monte Carlo engine: simulates the full downlink per
//! realization (geometry draw, fading draw, coherent combining at the
//! users, random phases at the eavesdroppers, SIC ordering, worst-case
//! eavesdropper per side, protocol capacity accounting) and estimates the
//! secrecy metrics with confidence intervals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytics::{CiHalfwidths, Lu, Method, ProtocolKind, ProtocolMode, SecrecyResult};
use crate::error::{Error, Result};
use crate::fading::CascadeSampler;
use crate::geometry::{sample_eve_field, sample_lu_pair, NetworkConfig};

/// Monte Carlo controls. Each trial draws its randomness from a stream
/// keyed by (seed, trial index), so estimates are reproducible and
/// independent of the worker count.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimOptions {
    pub seed: u64,
    /// Share the base-station-to-surface hop realization between the user
    /// and eavesdropper cascades of a trial. The analysis treats them as
    /// independent; the flag exists to quantify that simplification.
    pub shared_first_hop: bool,
}

/// Everything observable from one system realization.
#[derive(Debug, Clone, Copy)]
pub struct TrialOutcome {
    /// SINR of the SIC stage at the strong user.
    pub gamma_sic: f64,
    /// Post-SIC SNR of the strong user.
    pub gamma_s: f64,
    /// SINR of the weak user.
    pub gamma_w: f64,
    /// Worst-case eavesdropper SNR per message (own-side coefficient
    /// applied, before capacity accounting).
    pub gamma_es: f64,
    pub gamma_ew: f64,
    /// Channel capacities in bits per channel use.
    pub c_us: f64,
    pub c_uw: f64,
    pub c_es: f64,
    pub c_ew: f64,
    /// Clamped secrecy capacities.
    pub sc_s: f64,
    pub sc_w: f64,
    pub outage_s: bool,
    pub outage_w: bool,
    /// True when the reflecting-side user ended up as the strong user.
    pub reflecting_is_strong: bool,
    /// Equivalent worst-case eavesdropper SNR per message (capacity mapped
    /// back to the user's own side).
    pub equiv_eve_snr_s: f64,
    pub equiv_eve_snr_w: f64,
}

fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Coherently combined user fading power (sum of element products,
/// squared). An optional pre-drawn first hop is shared across receivers.
fn user_fading_power<R: Rng + ?Sized>(
    sampler: &CascadeSampler,
    first_hop: Option<&[f64]>,
    n: usize,
    rng: &mut R,
) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        let h1 = match first_hop {
            Some(h) => h[i],
            None => sampler.hop1.sample(rng),
        };
        sum += h1 * sampler.hop2.sample(rng);
    }
    sum * sum
}

/// Incoherent eavesdropper fading power |sum Delta_n e^{j theta_n}|^2.
fn eve_fading_power<R: Rng + ?Sized>(
    sampler: &CascadeSampler,
    first_hop: Option<&[f64]>,
    n: usize,
    rng: &mut R,
) -> f64 {
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for i in 0..n {
        let h1 = match first_hop {
            Some(h) => h[i],
            None => sampler.hop1.sample(rng),
        };
        let d = h1 * sampler.hop2.sample(rng);
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        re += d * theta.cos();
        im += d * theta.sin();
    }
    re * re + im * im
}

/// Runs one full system realization.
pub fn run_trial(
    cfg: &NetworkConfig,
    mode: &ProtocolMode,
    opts: &SimOptions,
    trial_index: u64,
) -> Result<TrialOutcome> {
    let sampler = CascadeSampler::new(&cfg.fading)?;
    let mut rng = trial_rng(opts.seed, trial_index);
    let n = cfg.n_elements;
    let a_l = cfg.a_l();

    let shared_hop: Option<Vec<f64>> = if opts.shared_first_hop {
        Some((0..n).map(|_| sampler.hop1.sample(&mut rng)).collect())
    } else {
        None
    };
    let hop_ref = shared_hop.as_deref();

    // Typical user pair: one reflecting, one transmitting.
    let (d_r, d_t) = sample_lu_pair(cfg, &mut rng);
    let power_r = a_l * d_r.powf(-cfg.alpha) * user_fading_power(&sampler, hop_ref, n, &mut rng);
    let power_t = a_l * d_t.powf(-cfg.alpha) * user_fading_power(&sampler, hop_ref, n, &mut rng);

    // Eavesdropper field; each point sits on one side of the surface.
    let eve_distances = sample_eve_field(cfg, &mut rng);
    // max of L |h|^2 per side, before SNR coefficients
    let mut eve_max_r: f64 = 0.0;
    let mut eve_max_t: f64 = 0.0;
    for d in &eve_distances {
        let p = a_l * d.powf(-cfg.alpha) * eve_fading_power(&sampler, hop_ref, n, &mut rng);
        if rng.gen::<bool>() {
            eve_max_r = eve_max_r.max(p);
        } else {
            eve_max_t = eve_max_t.max(p);
        }
    }

    // SIC ordering by received channel power.
    let reflecting_is_strong = power_r >= power_t;
    let (h_strong, h_weak, eve_strong_side, eve_weak_side) = if reflecting_is_strong {
        (power_r, power_t, eve_max_r, eve_max_t)
    } else {
        (power_t, power_r, eve_max_t, eve_max_r)
    };

    let c_s = mode.side_coeff(Lu::Strong);
    let c_w = mode.side_coeff(Lu::Weak);
    let t_s = mode.param_s;
    let t_w = mode.param_w();

    // User SINRs with the protocol coefficients.
    let gamma_sic =
        c_s * cfg.a_w * cfg.rho_b * h_strong / (c_s * cfg.a_s * cfg.rho_b * h_strong + 1.0);
    let gamma_s = c_s * cfg.a_s * cfg.rho_b * h_strong;
    let gamma_w = c_w * cfg.a_w * cfg.rho_b * h_weak / (c_w * cfg.a_s * cfg.rho_b * h_weak + 1.0);

    // User capacities.
    let (c_us, c_uw) = match mode.kind {
        ProtocolKind::Ts => (t_s * gamma_s.log2p1(), t_w * gamma_w.log2p1()),
        ProtocolKind::Es => (
            if t_s > 0.0 { gamma_s.log2p1() } else { 0.0 },
            if t_w > 0.0 { gamma_w.log2p1() } else { 0.0 },
        ),
    };

    // Worst-case eavesdropper per message: raw SNR per side, side-specific
    // capacity accounting, then the max of the two sides' capacities.
    let eve_capacity = |a_eps: f64| -> (f64, f64) {
        let mut best_cap = 0.0f64;
        let mut best_snr = 0.0f64;
        for (side_power, tau) in [(eve_strong_side, Lu::Strong), (eve_weak_side, Lu::Weak)] {
            if side_power <= 0.0 {
                continue;
            }
            let t_tau = mode.param(tau);
            let snr = mode.side_coeff(tau) * a_eps * cfg.rho_e * side_power;
            let cap = match mode.kind {
                ProtocolKind::Ts => t_tau * snr.log2p1(),
                ProtocolKind::Es => {
                    if t_tau > 0.0 {
                        snr.log2p1()
                    } else {
                        0.0
                    }
                }
            };
            if cap > best_cap {
                best_cap = cap;
                best_snr = snr;
            }
        }
        (best_cap, best_snr)
    };
    let (c_es, gamma_es) = eve_capacity(cfg.a_s);
    let (c_ew, gamma_ew) = eve_capacity(cfg.a_w);

    // Equivalent worst-case SNR seen from the user's own side.
    let equiv_snr = |cap: f64, lu: Lu| -> f64 {
        match mode.kind {
            ProtocolKind::Ts => {
                let t = mode.param(lu);
                if t > 0.0 {
                    (cap / t).exp2() - 1.0
                } else {
                    0.0
                }
            }
            ProtocolKind::Es => {
                let beta = mode.param(lu);
                if beta > 0.0 {
                    (cap.exp2() - 1.0) / beta
                } else {
                    0.0
                }
            }
        }
    };
    let equiv_eve_snr_s = equiv_snr(c_es, Lu::Strong);
    let equiv_eve_snr_w = equiv_snr(c_ew, Lu::Weak);

    let sc_s = (c_us - c_es).max(0.0);
    let sc_w = (c_uw - c_ew).max(0.0);

    Ok(TrialOutcome {
        gamma_sic,
        gamma_s,
        gamma_w,
        gamma_es,
        gamma_ew,
        c_us,
        c_uw,
        c_es,
        c_ew,
        sc_s,
        sc_w,
        outage_s: sc_s < cfg.r_s,
        outage_w: sc_w < cfg.r_w,
        reflecting_is_strong,
        equiv_eve_snr_s,
        equiv_eve_snr_w,
    })
}

trait Log2P1 {
    fn log2p1(self) -> f64;
}

impl Log2P1 for f64 {
    /// log2(1 + x) through ln_1p for small-argument accuracy.
    fn log2p1(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }
}

/// Deterministic parallel map over trial indices; results are reduced in
/// index order regardless of the worker count.
fn collect_trials(
    cfg: &NetworkConfig,
    mode: &ProtocolMode,
    trials: usize,
    opts: &SimOptions,
) -> Result<Vec<TrialOutcome>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(cfg, mode, opts, i))
        .collect()
}

/// Wilson 95% confidence half-width for a binomial proportion.
fn wilson_halfwidth(successes: f64, n: f64) -> f64 {
    let z = 1.959963984540054f64;
    let p = successes / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// Minimum number of outage events below which a Monte Carlo SOP point is
/// reported as unresolved.
const MIN_RESOLVED_EVENTS: f64 = 10.0;

/// Monte Carlo secrecy outage probabilities (per user and joint pair).
pub fn estimate_sop(
    cfg: &NetworkConfig,
    mode: &ProtocolMode,
    trials: usize,
    opts: &SimOptions,
) -> Result<SecrecyResult> {
    if trials < 1000 {
        return Err(Error::config(format!(
            "Monte Carlo needs at least 1000 trials (got {trials})"
        )));
    }
    let outcomes = collect_trials(cfg, mode, trials, opts)?;
    let n = trials as f64;
    let mut k_s = 0.0f64;
    let mut k_w = 0.0f64;
    let mut k_pair = 0.0f64;
    for o in &outcomes {
        if o.outage_s {
            k_s += 1.0;
        }
        if o.outage_w {
            k_w += 1.0;
        }
        if o.outage_s || o.outage_w {
            k_pair += 1.0;
        }
    }
    let mut r = SecrecyResult {
        sop_strong: Some(k_s / n),
        sop_weak: Some(k_w / n),
        sop_pair: Some(k_pair / n),
        asc_strong: None,
        asc_weak: None,
        asc_pair: None,
        method: Method::MonteCarlo,
        ci_halfwidth: Some(CiHalfwidths {
            sop_strong: wilson_halfwidth(k_s, n),
            sop_weak: wilson_halfwidth(k_w, n),
            sop_pair: wilson_halfwidth(k_pair, n),
            ..CiHalfwidths::default()
        }),
        weak_infeasible: false,
        degenerate: mode.is_degenerate(),
        unresolved: false,
    };
    // Points too rare for the trial budget are flagged rather than
    // extended; CSV writers emit them as NA.
    if (k_s > 0.0 && k_s < MIN_RESOLVED_EVENTS) || (k_w > 0.0 && k_w < MIN_RESOLVED_EVENTS) {
        r.unresolved = true;
    }
    Ok(r)
}

/// Monte Carlo average secrecy capacities with standard-error confidence
/// intervals.
pub fn estimate_asc(
    cfg: &NetworkConfig,
    mode: &ProtocolMode,
    trials: usize,
    opts: &SimOptions,
) -> Result<SecrecyResult> {
    if trials < 1000 {
        return Err(Error::config(format!(
            "Monte Carlo needs at least 1000 trials (got {trials})"
        )));
    }
    let outcomes = collect_trials(cfg, mode, trials, opts)?;
    let n = trials as f64;
    let (mut s_s, mut s_w, mut q_s, mut q_w, mut q_p) = (0.0f64, 0.0, 0.0, 0.0, 0.0);
    for o in &outcomes {
        s_s += o.sc_s;
        s_w += o.sc_w;
        q_s += o.sc_s * o.sc_s;
        q_w += o.sc_w * o.sc_w;
        let p = o.sc_s + o.sc_w;
        q_p += p * p;
    }
    let mean_s = s_s / n;
    let mean_w = s_w / n;
    let mean_p = mean_s + mean_w;
    let var_s = (q_s / n - mean_s * mean_s).max(0.0);
    let var_w = (q_w / n - mean_w * mean_w).max(0.0);
    let var_p = (q_p / n - mean_p * mean_p).max(0.0);
    let z = 1.959963984540054f64;
    let ci_s = z * (var_s / n).sqrt();
    let ci_w = z * (var_w / n).sqrt();
    let ci_p = z * (var_p / n).sqrt();
    Ok(SecrecyResult {
        sop_strong: None,
        sop_weak: None,
        sop_pair: None,
        asc_strong: Some(mean_s),
        asc_weak: Some(mean_w),
        asc_pair: Some(mean_s + mean_w),
        method: Method::MonteCarlo,
        ci_halfwidth: Some(CiHalfwidths {
            asc_strong: ci_s,
            asc_weak: ci_w,
            asc_pair: ci_p,
            ..CiHalfwidths::default()
        }),
        weak_infeasible: false,
        degenerate: mode.is_degenerate(),
        unresolved: false,
    })
}

/// One row of the empirical channel-power table.
#[derive(Debug, Clone, Copy)]
pub struct ChannelCdfRow {
    pub x: f64,
    pub f_strong: f64,
    pub f_weak: f64,
    pub f_unordered: f64,
}

/// Empirical CDFs of the ordered and unordered user channel power over the
/// requested number of grid points (for validation against the Gamma-fit
/// law).
pub fn empirical_channel_cdf(
    cfg: &NetworkConfig,
    trials: usize,
    points: usize,
    opts: &SimOptions,
) -> Result<Vec<ChannelCdfRow>> {
    if trials < 10_000 {
        return Err(Error::config(format!(
            "channel CDF estimation needs at least 10000 trials (got {trials})"
        )));
    }
    if points < 2 {
        return Err(Error::config(format!(
            "channel CDF table needs at least 2 points (got {points})"
        )));
    }
    let pairs: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let sampler = CascadeSampler::new(&cfg.fading)?;
            let mut rng = trial_rng(opts.seed, i);
            let n = cfg.n_elements;
            let a_l = cfg.a_l();
            let (d_r, d_t) = sample_lu_pair(cfg, &mut rng);
            let p_r = a_l * d_r.powf(-cfg.alpha) * user_fading_power(&sampler, None, n, &mut rng);
            let p_t = a_l * d_t.powf(-cfg.alpha) * user_fading_power(&sampler, None, n, &mut rng);
            Ok(if p_r >= p_t { (p_r, p_t) } else { (p_t, p_r) })
        })
        .collect::<Result<_>>()?;
    let mut strong: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut weak: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    strong.sort_by(|a, b| a.partial_cmp(b).unwrap());
    weak.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo = weak[(0.001 * trials as f64) as usize];
    let hi = strong[(0.999 * trials as f64) as usize];
    let count_below = |sorted: &[f64], x: f64| -> f64 {
        sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
    };
    let ratio = (hi / lo).powf(1.0 / (points - 1) as f64);
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let x = lo * ratio.powi(i as i32);
        let fs = count_below(&strong, x);
        let fw = count_below(&weak, x);
        rows.push(ChannelCdfRow {
            x,
            f_strong: fs,
            f_weak: fw,
            f_unordered: 0.5 * (fs + fw),
        });
    }
    Ok(rows)
}
