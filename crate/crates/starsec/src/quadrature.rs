//! Quadrature rules: Gauss-Laguerre and Chebyshev-Gauss node/weight
//! construction, plus an adaptive Gauss-Kronrod integrator for the
//! one-dimensional integrals behind the channel CDF and the secrecy
//! metrics.

use crate::error::{Error, Result};

/// Families of fixed quadrature rules this crate constructs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    /// Weight e^{-x} on [0, inf).
    GaussLaguerre,
    /// Weight 1/sqrt(1-x^2) on (-1, 1), used here re-weighted so that
    /// `sum(weights * f(nodes))` approximates the plain integral of f.
    ChebyshevGauss,
}

/// An immutable node/weight table.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// For Gauss-Laguerre: ln(w_m) + x_m, so that integrals of plain
    /// integrands over [0, inf) can be formed without underflow at high
    /// order. Empty for Chebyshev-Gauss.
    ln_weights_lifted: Vec<f64>,
}

impl QuadratureRule {
    /// Gauss-Laguerre rule of order M: nodes are the roots of the Laguerre
    /// polynomial L_M, weights w_m = x_m / ((M+1)^2 L_{M+1}(x_m)^2).
    ///
    /// `sum(w_m f(x_m))` integrates e^{-x} f(x) exactly for polynomials of
    /// degree up to 2M-1.
    pub fn gauss_laguerre(order: usize) -> Result<Self> {
        if order == 0 || order > 200 {
            return Err(Error::domain(
                "gauss_laguerre",
                format!("order {order} outside 1..=200"),
            ));
        }
        let m = order;
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        let mut ln_weights_lifted = Vec::with_capacity(m);
        let mut z = 0.0f64;
        for i in 0..m {
            // Standard initial guesses for the i-th root (Numerical
            // Recipes `gaulag`, alpha = 0), then Newton iteration.
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * m as f64),
                1 => z + 15.0 / (1.0 + 2.5 * m as f64),
                _ => {
                    let ai = (i - 1) as f64;
                    z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
                }
            };
            let mut converged = false;
            let mut last_dz = f64::INFINITY;
            for _ in 0..200 {
                let (p, dp) = laguerre_and_derivative(m, z);
                let dz = p / dp;
                z -= dz;
                // At machine precision the update can alternate in sign
                // without shrinking further; accept once it stalls.
                if dz.abs() <= 1e-14 * z.abs().max(1.0) || dz.abs() >= last_dz {
                    converged = true;
                    break;
                }
                last_dz = dz.abs();
            }
            if !converged {
                return Err(Error::NonConvergent {
                    func: "gauss_laguerre",
                    iterations: 200,
                });
            }
            // w = z / ((M+1)^2 L_{M+1}(z)^2), assembled in logs because
            // L_{M+1} grows roughly like z^{M+1}/(M+1)! at the top nodes.
            let l_next = laguerre_value(m + 1, z);
            let ln_w =
                z.ln() - 2.0 * (((m + 1) as f64).ln() + l_next.abs().ln());
            nodes.push(z);
            weights.push(ln_w.exp());
            ln_weights_lifted.push(ln_w + z);
        }
        Ok(QuadratureRule {
            kind: QuadratureKind::GaussLaguerre,
            order,
            nodes,
            weights,
            ln_weights_lifted,
        })
    }

    /// Chebyshev-Gauss rule of order M with nodes cos((2m-1) pi / (2M)).
    ///
    /// The stored weights are (pi/M) sqrt(1 - x_m^2), so that
    /// `sum(w_m g(x_m))` approximates the plain integral of g over [-1, 1].
    pub fn chebyshev_gauss(order: usize) -> Result<Self> {
        if order == 0 || order > 500 {
            return Err(Error::domain(
                "chebyshev_gauss",
                format!("order {order} outside 1..=500"),
            ));
        }
        let m = order as f64;
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        for i in 1..=order {
            let phi = ((2 * i - 1) as f64 * std::f64::consts::PI / (2.0 * m)).cos();
            nodes.push(phi);
            weights.push(std::f64::consts::PI / m * (1.0 - phi * phi).sqrt());
        }
        Ok(QuadratureRule {
            kind: QuadratureKind::ChebyshevGauss,
            order,
            nodes,
            weights,
            ln_weights_lifted: Vec::new(),
        })
    }

    /// `sum(w_m f(x_m))` over the stored table.
    pub fn integrate_weighted<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// For Gauss-Laguerre: approximates the plain integral of f over
    /// [0, inf) as sum(w_m e^{x_m} f(x_m)), with the lifted factor formed
    /// in the log domain.
    pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        debug_assert_eq!(self.kind, QuadratureKind::GaussLaguerre);
        self.nodes
            .iter()
            .zip(&self.ln_weights_lifted)
            .map(|(&x, &lw)| lw.exp() * f(x))
            .sum()
    }
}

/// L_n(x) and L_n'(x) by the three-term recurrence.
fn laguerre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = 1.0f64;
    let mut p2 = 0.0f64;
    for k in 0..n {
        let kf = k as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * kf + 1.0 - x) * p2 - kf * p3) / (kf + 1.0);
    }
    // L_n'(x) = n (L_n(x) - L_{n-1}(x)) / x
    let dp = n as f64 * (p1 - p2) / x;
    (p1, dp)
}

fn laguerre_value(n: usize, x: f64) -> f64 {
    laguerre_and_derivative(n, x).0
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK QK15
// constants on [-1, 1]).
const XGK: [f64; 15] = [
    -0.991455371120813,
    -0.949107912342759,
    -0.864864423359769,
    -0.741531185599394,
    -0.586087235467691,
    -0.405845151377397,
    -0.207784955007898,
    0.0,
    0.207784955007898,
    0.405845151377397,
    0.586087235467691,
    0.741531185599394,
    0.864864423359769,
    0.949107912342759,
    0.991455371120813,
];
const WGK: [f64; 15] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
    0.204432940075298,
    0.190350578064785,
    0.169004726639267,
    0.140653259715525,
    0.104790010322250,
    0.063092092629979,
    0.022935322010529,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let mut fv = [0.0f64; 15];
    for (i, &x) in XGK.iter().enumerate() {
        fv[i] = f(center + half * x);
    }
    let mut kronrod = 0.0;
    for i in 0..15 {
        kronrod += WGK[i] * fv[i];
    }
    // embedded Gauss rule uses the odd Kronrod abscissae
    let gauss = WG[0] * (fv[1] + fv[13])
        + WG[1] * (fv[3] + fv[11])
        + WG[2] * (fv[5] + fv[9])
        + WG[3] * fv[7];
    (kronrod * half, (kronrod - gauss).abs() * half)
}

/// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b]
/// to the given absolute tolerance, bisecting at most `max_depth` times.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut total = 0.0f64;
    // (lo, hi, estimate, error, depth)
    let (est, err) = gauss_kronrod_15(f, a, b);
    if !est.is_finite() {
        return Err(Error::NonConvergent {
            func: "integrate_adaptive",
            iterations: 0,
        });
    }
    let mut stack: Vec<(f64, f64, f64, f64, u32)> = vec![(a, b, est, err, 0)];
    while let Some((lo, hi, est, err, depth)) = stack.pop() {
        // local tolerance proportional to the interval share
        if err <= abs_tol * ((hi - lo) / (b - a)).max(1e-3) || depth >= max_depth {
            total += est;
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let (el, errl) = gauss_kronrod_15(f, lo, mid);
        let (er, errr) = gauss_kronrod_15(f, mid, hi);
        if !(el.is_finite() && er.is_finite()) {
            return Err(Error::NonConvergent {
                func: "integrate_adaptive",
                iterations: depth as usize,
            });
        }
        stack.push((lo, mid, el, errl, depth + 1));
        stack.push((mid, hi, er, errr, depth + 1));
    }
    Ok(total)
}

/// Adaptive integration over [0, inf) through the substitution
/// x = t / (1 - t), which maps the half line onto (0, 1).
pub fn integrate_semi_infinite_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    abs_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let denom = 1.0 - t;
        let x = t / denom;
        let jac = 1.0 / (denom * denom);
        let v = f(x) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate_adaptive(&g, 0.0, 1.0, abs_tol, max_depth)
}

/// Adaptive integration over [0, inf) in the log variable v = ln(1 + x):
/// integral of f(x) dx = integral of f(e^v - 1) e^v dv.
///
/// Integrands whose structure spreads over many decades of x (heavy
/// power-law tails against a channel knee at large x) become well scaled
/// in v, where a plain rational transform would squeeze them against
/// t = 1.
pub fn integrate_semi_infinite_log_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    abs_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let g = |v: f64| {
        let x = v.exp_m1();
        if !x.is_finite() {
            return 0.0;
        }
        let y = f(x) * v.exp();
        if y.is_finite() {
            y
        } else {
            0.0
        }
    };
    integrate_semi_infinite_adaptive(&g, abs_tol, max_depth)
}
