//! Analytical results for the two-layer overlay: epidemic threshold, the
//! generating-function fixed point and epidemic size, the subcritical mean
//! outbreak size, and the Erdős–Rényi closed forms.

use crate::dist::DegreeDistribution;
use crate::error::{check_probability, domain, Error, Result};
use crate::quad::adaptive_simpson;

/// Sup-norm step size at which fixed-point iteration stops.
pub const FIXED_POINT_TOL: f64 = 1e-12;
/// Maximum residual accepted after the iteration stops.
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 1_000_000;
/// Results with `|threshold - 1|` inside this band are flagged.
pub const NEAR_CRITICAL_BAND: f64 = 1e-4;

/// Two-layer overlay parameters: membership probability, degree laws and
/// transmissibilities of the social (`f`) and physical (`w`) networks.
#[derive(Debug, Clone, Copy)]
pub struct Overlay<'a> {
    pub alpha: f64,
    pub dist_f: &'a DegreeDistribution,
    pub dist_w: &'a DegreeDistribution,
    pub t_f: f64,
    pub t_w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryResult {
    pub sigma_star: f64,
    pub supercritical: bool,
    pub near_critical: bool,
    pub h1: f64,
    pub h2: f64,
    pub epidemic_size: f64,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub mean_outbreak: Option<f64>,
}

struct Moments {
    lambda_f: f64,
    lambda_w: f64,
    beta_f: f64,
    beta_w: f64,
}

impl<'a> Overlay<'a> {
    pub fn new(
        alpha: f64,
        dist_f: &'a DegreeDistribution,
        dist_w: &'a DegreeDistribution,
        t_f: f64,
        t_w: f64,
    ) -> Result<Self> {
        check_probability("alpha", alpha)?;
        check_probability("t_f", t_f)?;
        check_probability("t_w", t_w)?;
        Ok(Self { alpha, dist_f, dist_w, t_f, t_w })
    }

    fn moments(&self) -> Result<Moments> {
        Ok(Moments {
            lambda_f: self.dist_f.mean(),
            lambda_w: self.dist_w.mean(),
            beta_f: self.dist_f.beta()?,
            beta_w: self.dist_w.beta()?,
        })
    }

    /// Spectral radius of the linearised branching map at `h1 = h2 = 1`:
    /// `(a + d + sqrt((a - d)^2 + 4 alpha T_f T_w lambda_f lambda_w)) / 2`
    /// with `a = T_f beta_f`, `d = T_w beta_w`.
    pub fn threshold_sigma(&self) -> Result<f64> {
        let m = self.moments()?;
        let a = self.t_f * m.beta_f;
        let d = self.t_w * m.beta_w;
        let cross = 4.0 * self.alpha * self.t_f * self.t_w * m.lambda_f * m.lambda_w;
        Ok(0.5 * (a + d + ((a - d).powi(2) + cross).sqrt()))
    }

    /// Jacobian of the branching map at the trivial fixed point.
    pub fn jacobian(&self) -> Result<[[f64; 2]; 2]> {
        let m = self.moments()?;
        Ok([
            [self.t_f * m.beta_f, self.t_f * m.lambda_w],
            [self.t_w * self.alpha * m.lambda_f, self.t_w * m.beta_w],
        ])
    }

    fn h_map(&self, h1: f64, h2: f64, lambda_f: f64, lambda_w: f64) -> Result<(f64, f64)> {
        let (f, w) = (self.dist_f, self.dist_w);
        let n1 = self.t_f / lambda_f * f.expect_k_h_pow_km1(h1)? * w.expect_h_pow_k(h2)? + 1.0 - self.t_f;
        let n2 = self.t_w / lambda_w
            * (self.alpha * f.expect_h_pow_k(h1)? + 1.0 - self.alpha)
            * w.expect_k_h_pow_km1(h2)?
            + 1.0
            - self.t_w;
        // rounding can push a hair above one
        Ok((n1.min(1.0), n2.min(1.0)))
    }

    /// Smallest solution in `(0, 1]^2` of the self-consistency equations for
    /// the probabilities that a social (`h1`) or physical (`h2`) edge leads
    /// to a finite informed cluster. `(1, 1)` when subcritical.
    pub fn solve_h(&self) -> Result<(f64, f64)> {
        if self.threshold_sigma()? <= 1.0 {
            return Ok((1.0, 1.0));
        }
        let m = self.moments()?;
        let (mut h1, mut h2) = (0.0, 0.0);
        for _ in 0..MAX_ITERATIONS {
            let (n1, n2) = self.h_map(h1, h2, m.lambda_f, m.lambda_w)?;
            let step = (n1 - h1).abs().max((n2 - h2).abs());
            h1 = n1;
            h2 = n2;
            if step < FIXED_POINT_TOL {
                let (r1, r2) = self.h_map(h1, h2, m.lambda_f, m.lambda_w)?;
                let residual = (r1 - h1).abs().max((r2 - h2).abs());
                if residual >= RESIDUAL_TOL {
                    return Err(Error::NoConvergence(format!("h fixed point residual {residual:e}")));
                }
                return Ok((h1, h2));
            }
        }
        Err(Error::NoConvergence(format!(
            "h fixed point after {MAX_ITERATIONS} iterations (threshold {})",
            self.threshold_sigma()?
        )))
    }

    /// `1 - H(1)` at a given fixed point.
    fn size_at(&self, h1: f64, h2: f64) -> Result<f64> {
        let g_f = self.alpha * self.dist_f.expect_h_pow_k(h1)? + 1.0 - self.alpha;
        Ok((1.0 - g_f * self.dist_w.expect_h_pow_k(h2)?).max(0.0))
    }

    /// Asymptotic giant-component fraction; zero when subcritical.
    pub fn epidemic_size(&self) -> Result<f64> {
        if self.threshold_sigma()? <= 1.0 {
            return Ok(0.0);
        }
        let (h1, h2) = self.solve_h()?;
        self.size_at(h1, h2)
    }

    /// Solves the linear system for the derivatives `s1, s2` of the edge
    /// generating functions at one. Requires a strictly subcritical overlay.
    pub fn outbreak_auxiliaries(&self) -> Result<(f64, f64)> {
        let sigma = self.threshold_sigma()?;
        if sigma >= 1.0 {
            return Err(Error::Supercritical(sigma));
        }
        let [[a11, a12], [a21, a22]] = self.jacobian()?;
        let (b1, b2) = (self.t_f, self.t_w);
        let det = (1.0 - a11) * (1.0 - a22) - a12 * a21;
        if !(det > 0.0) {
            return Err(Error::Supercritical(sigma));
        }
        let s1 = ((1.0 - a22) * b1 + a12 * b2) / det;
        let s2 = (a21 * b1 + (1.0 - a11) * b2) / det;
        if s1 < 0.0 || s2 < 0.0 {
            return Err(Error::Supercritical(sigma));
        }
        Ok((s1, s2))
    }

    /// Mean outbreak size `1 + alpha lambda_f s1 + lambda_w s2`.
    pub fn mean_outbreak(&self) -> Result<f64> {
        let (s1, s2) = self.outbreak_auxiliaries()?;
        Ok(1.0 + self.alpha * self.dist_f.mean() * s1 + self.dist_w.mean() * s2)
    }

    pub fn analyze(&self) -> Result<TheoryResult> {
        let sigma_star = self.threshold_sigma()?;
        let supercritical = sigma_star > 1.0;
        let near_critical = (sigma_star - 1.0).abs() <= NEAR_CRITICAL_BAND;
        if supercritical {
            let (h1, h2) = self.solve_h()?;
            Ok(TheoryResult {
                sigma_star,
                supercritical,
                near_critical,
                h1,
                h2,
                epidemic_size: self.size_at(h1, h2)?,
                s1: None,
                s2: None,
                mean_outbreak: None,
            })
        } else {
            let aux = self.outbreak_auxiliaries().ok();
            Ok(TheoryResult {
                sigma_star,
                supercritical,
                near_critical,
                h1: 1.0,
                h2: 1.0,
                epidemic_size: 0.0,
                s1: aux.map(|a| a.0),
                s2: aux.map(|a| a.1),
                mean_outbreak: self.mean_outbreak().ok(),
            })
        }
    }
}

/// Degree-based single-network threshold `E[d(d-1)]/E[d]` of the union,
/// which ignores the layer structure.
pub fn naive_threshold(alpha: f64, t_f_lambda_f: f64, t_w_lambda_w: f64) -> Result<f64> {
    check_probability("alpha", alpha)?;
    let (a, b) = (t_f_lambda_f, t_w_lambda_w);
    if a < 0.0 || b < 0.0 {
        return domain("layer strengths must be non-negative");
    }
    let denom = alpha * a + b;
    if denom == 0.0 {
        // no edges; the ratio tends to zero with the strengths
        return Ok(0.0);
    }
    Ok((alpha * (a + b).powi(2) + (1.0 - alpha) * b * b) / denom)
}

/// Threshold of the coupled ER overlay in terms of the layer strengths
/// `T_f lambda_f` and `T_w lambda_w`.
pub fn er_threshold(alpha: f64, t_f_lambda_f: f64, t_w_lambda_w: f64) -> Result<f64> {
    check_probability("alpha", alpha)?;
    let (a, b) = (t_f_lambda_f, t_w_lambda_w);
    if a < 0.0 || b < 0.0 {
        return domain("layer strengths must be non-negative");
    }
    let s = a + b;
    let disc = (s * s - 4.0 * (1.0 - alpha) * a * b).max(0.0);
    Ok(0.5 * s + 0.5 * disc.sqrt())
}

/// Survival probabilities of members (`rho1`) and non-members (`rho2`) and
/// the giant fraction `alpha rho1 + (1 - alpha) rho2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErEpidemic {
    pub rho1: f64,
    pub rho2: f64,
    pub size: f64,
}

/// Largest fixed point of the coupled ER survival equations, by monotone
/// iteration down from `(1, 1)`.
pub fn er_epidemic_size(alpha: f64, t_f_lambda_f: f64, t_w_lambda_w: f64) -> Result<ErEpidemic> {
    if er_threshold(alpha, t_f_lambda_f, t_w_lambda_w)? <= 1.0 {
        return Ok(ErEpidemic { rho1: 0.0, rho2: 0.0, size: 0.0 });
    }
    let (a, b) = (t_f_lambda_f, t_w_lambda_w);
    let (mut r1, mut r2) = (1.0f64, 1.0f64);
    for _ in 0..MAX_ITERATIONS {
        let n1 = 1.0 - (-r1 * (alpha * b + a) - r2 * (1.0 - alpha) * b).exp();
        let n2 = 1.0 - (-r1 * alpha * b - r2 * (1.0 - alpha) * b).exp();
        let step = (n1 - r1).abs().max((n2 - r2).abs());
        r1 = n1;
        r2 = n2;
        if step < FIXED_POINT_TOL {
            return Ok(ErEpidemic { rho1: r1, rho2: r2, size: alpha * r1 + (1.0 - alpha) * r2 });
        }
    }
    Err(Error::NoConvergence(format!("ER survival equations after {MAX_ITERATIONS} iterations")))
}

/// How phase boundaries are measured.
#[derive(Debug, Clone, Copy)]
pub enum BoundaryMode<'a> {
    /// Coupled ER: axes are `T_w lambda_w` and `T_f lambda_f`.
    Er,
    /// General degree laws: axes are the excess-degree-scaled
    /// `T_w beta_w` and `T_f beta_f`.
    General { dist_f: &'a DegreeDistribution, dist_w: &'a DegreeDistribution },
}

impl BoundaryMode<'_> {
    /// Threshold at physical strength `x` and social strength `y`.
    pub fn threshold(&self, alpha: f64, x: f64, y: f64) -> Result<f64> {
        match *self {
            BoundaryMode::Er => er_threshold(alpha, y, x),
            BoundaryMode::General { dist_f, dist_w } => {
                // T lambda = (T beta) * lambda / beta
                let cf = dist_f.mean() / dist_f.beta()?;
                let cw = dist_w.mean() / dist_w.beta()?;
                let cross = 4.0 * alpha * (y * cf) * (x * cw);
                Ok(0.5 * (x + y + ((y - x).powi(2) + cross).sqrt()))
            }
        }
    }

    /// Physical upper limit of the social strength axis (`T_f <= 1`).
    pub fn default_cap(&self) -> Result<f64> {
        match *self {
            // the ER boundary never exceeds one, since er_threshold(alpha, 1, x) >= 1
            BoundaryMode::Er => Ok(1.0),
            BoundaryMode::General { dist_f, .. } => dist_f.beta(),
        }
    }
}

const BISECTION_TOL: f64 = 1e-12;

fn bisect_increasing(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    while hi - lo > BISECTION_TOL * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One point of a phase boundary. `social` is `None` when no social strength
/// up to the cap reaches the threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub physical: f64,
    pub social: Option<f64>,
}

/// Minimal social strength making the overlay critical, for each physical
/// strength in `sweep`. The threshold is increasing in the social strength,
/// so each point is found by bisection on `[0, cap]`.
pub fn phase_boundary(alpha: f64, sweep: &[f64], mode: BoundaryMode<'_>, cap: Option<f64>) -> Result<Vec<BoundaryPoint>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("alpha must lie in (0, 1], got {alpha}"));
    }
    let cap = match cap {
        Some(c) => c,
        None => mode.default_cap()?,
    };
    sweep
        .iter()
        .map(|&x| {
            if !(x >= 0.0) {
                return domain(format!("sweep values must be non-negative, got {x}"));
            }
            let social = if mode.threshold(alpha, x, 0.0)? >= 1.0 {
                Some(0.0)
            } else if mode.threshold(alpha, x, cap)? < 1.0 {
                None
            } else {
                Some(bisect_increasing(0.0, cap, |y| mode.threshold(alpha, x, y))?)
            };
            Ok(BoundaryPoint { physical: x, social })
        })
        .collect()
}

/// Common strength `x` at which setting both layers to `x` is critical.
pub fn equal_strength_threshold(alpha: f64, mode: BoundaryMode<'_>) -> Result<f64> {
    check_probability("alpha", alpha)?;
    // threshold(x, x) >= x, so the crossing lies in [0, 1]
    bisect_increasing(0.0, 1.0, |x| mode.threshold(alpha, x, x))
}

/// Distribution of a contact rate or an infectious duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContactLaw {
    Constant(f64),
    Exponential { mean: f64 },
}

impl ContactLaw {
    fn check(&self, what: &str) -> Result<()> {
        let v = match *self {
            ContactLaw::Constant(v) => v,
            ContactLaw::Exponential { mean } => mean,
        };
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            domain(format!("{what} parameter must be positive, got {v}"))
        }
    }
}

/// Contact-rate and infectious-period model behind a transmissibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactProcess {
    pub rate: ContactLaw,
    pub duration: ContactLaw,
}

impl ContactProcess {
    /// Mean transmission probability `1 - E[exp(-r tau)]` for independent
    /// rate `r` and infectious duration `tau`.
    pub fn transmissibility(&self) -> Result<f64> {
        self.rate.check("rate")?;
        self.duration.check("duration")?;
        use ContactLaw::*;
        Ok(match (self.rate, self.duration) {
            (Constant(r), Constant(tau)) => -(-r * tau).exp_m1(),
            (Constant(r), Exponential { mean }) | (Exponential { mean }, Constant(r)) => {
                // E[exp(-r tau)] = 1 / (1 + r mean)
                r * mean / (1.0 + r * mean)
            }
            (Exponential { mean: mr }, Exponential { mean: mt }) => {
                // inner expectation over r is 1 / (1 + mr tau); integrate over tau = mt x
                let c = mr * mt;
                let survive = adaptive_simpson(|x: f64| (-x).exp() / (1.0 + c * x), 0.0, 60.0, 1e-12);
                (1.0 - survive).clamp(0.0, 1.0)
            }
        })
    }
}
