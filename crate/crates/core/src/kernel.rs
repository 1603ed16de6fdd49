//! Finite-type inhomogeneous random graphs: a type measure `mu`, a symmetric
//! kernel `kappa` and the mean-offspring matrix `M(i, j) = kappa(i, j) mu_j`.

use std::path::Path;

use serde::Deserialize;

use crate::error::{domain, Error, Result};

const SUM_TOL: f64 = 1e-9;
const POWER_TOL: f64 = 1e-10;
const POWER_CAP: usize = 200_000;
const SURVIVAL_TOL: f64 = 1e-12;
const SURVIVAL_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelModel {
    r: usize,
    mu: Vec<f64>,
    kappa: Vec<Vec<f64>>,
    m: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelFile {
    r: usize,
    kappa: Vec<f64>,
    mu: Vec<f64>,
}

impl KernelModel {
    pub fn new(kappa: Vec<Vec<f64>>, mu: Vec<f64>) -> Result<Self> {
        let r = mu.len();
        if r == 0 {
            return domain("kernel needs at least one type");
        }
        if kappa.len() != r || kappa.iter().any(|row| row.len() != r) {
            return domain(format!("kappa must be {r}x{r}"));
        }
        if mu.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
            return domain("mu entries must be finite and non-negative");
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return domain(format!("mu sums to {total}, expected 1"));
        }
        for i in 0..r {
            for j in 0..r {
                let k = kappa[i][j];
                if !(k.is_finite() && k >= 0.0) {
                    return domain(format!("kappa({i},{j}) = {k} is not finite and non-negative"));
                }
                if (k - kappa[j][i]).abs() > 1e-12 * k.abs().max(1.0) {
                    return domain(format!("kappa is not symmetric at ({i},{j})"));
                }
            }
        }
        let m = (0..r).map(|i| (0..r).map(|j| kappa[i][j] * mu[j]).collect()).collect();
        Ok(Self { r, mu, kappa, m })
    }

    /// Reads TOML with keys `r`, `mu` (length r) and `kappa` (row-major, r*r).
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: KernelFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.kappa.len() != file.r * file.r {
            return Err(Error::Parse(format!("kappa has {} entries, expected {}", file.kappa.len(), file.r * file.r)));
        }
        if file.mu.len() != file.r {
            return Err(Error::Parse(format!("mu has {} entries, expected {}", file.mu.len(), file.r)));
        }
        let kappa = file.kappa.chunks(file.r).map(<[f64]>::to_vec).collect();
        Self::new(kappa, file.mu)
    }

    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn kappa(&self) -> &[Vec<f64>] {
        &self.kappa
    }

    pub fn m_matrix(&self) -> &[Vec<f64>] {
        &self.m
    }

    /// `sigma(M)`; the model is supercritical iff this exceeds one.
    pub fn spectral_radius(&self) -> Result<f64> {
        spectral_radius(&self.m)
    }
}

fn check_matrix(m: &[Vec<f64>]) -> Result<usize> {
    let r = m.len();
    if r == 0 || m.iter().any(|row| row.len() != r) {
        return domain("matrix must be square and non-empty");
    }
    if m.iter().flatten().any(|&x| !(x.is_finite() && x >= 0.0)) {
        return domain("matrix entries must be finite and non-negative");
    }
    Ok(r)
}

/// Perron root of a non-negative matrix.
///
/// Power iteration on `M + cI` from the all-ones vector, stopped when the
/// Collatz–Wielandt bounds `min_i (Mx)_i / x_i <= sigma <= max_i (Mx)_i / x_i`
/// meet. Reducible matrices can keep the bounds apart; for r <= 4 those fall
/// back to the characteristic polynomial.
pub fn spectral_radius(m: &[Vec<f64>]) -> Result<f64> {
    let r = check_matrix(m)?;
    if r == 1 {
        return Ok(m[0][0]);
    }
    if r == 2 {
        let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
        let closed = 0.5 * (a + d + ((a - d).powi(2) + 4.0 * b * c).sqrt());
        if let Some(p) = power_iteration(m) {
            debug_assert!((p - closed).abs() <= 1e-8 * closed.max(1.0), "{p} vs {closed}");
        }
        return Ok(closed);
    }
    if let Some(p) = power_iteration(m) {
        return Ok(p);
    }
    if r <= 4 {
        return Ok(charpoly_radius(m));
    }
    Err(Error::NoConvergence(format!("power iteration on a {r}x{r} matrix")))
}

fn power_iteration(m: &[Vec<f64>]) -> Option<f64> {
    let r = m.len();
    let scale = m.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    if scale == 0.0 {
        return Some(0.0);
    }
    let shift = scale;
    let mut x = vec![1.0; r];
    let mut y = vec![0.0; r];
    for _ in 0..POWER_CAP {
        for i in 0..r {
            y[i] = shift * x[i] + m[i].iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..r {
            let q = y[i] / x[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        if hi - lo <= POWER_TOL * hi {
            return Some((0.5 * (lo + hi) - shift).max(0.0));
        }
        let norm = y.iter().fold(0.0f64, |a, &b| a.max(b));
        for i in 0..r {
            x[i] = y[i] / norm;
        }
    }
    None
}

/// Coefficients of `det(zI - M)`, highest degree first, by Faddeev–LeVerrier.
fn charpoly(m: &[Vec<f64>]) -> Vec<f64> {
    let r = m.len();
    let mut coeffs = vec![1.0];
    let mut mk = vec![vec![0.0; r]; r];
    let mut c = 1.0;
    for k in 1..=r {
        // M_k = M (M_{k-1} + c_{k-1} I)
        let mut prev = mk.clone();
        for (i, row) in prev.iter_mut().enumerate() {
            row[i] += c;
        }
        for i in 0..r {
            for j in 0..r {
                mk[i][j] = (0..r).map(|l| m[i][l] * prev[l][j]).sum();
            }
        }
        let trace: f64 = (0..r).map(|i| mk[i][i]).sum();
        c = -trace / k as f64;
        coeffs.push(c);
    }
    coeffs
}

/// Largest root modulus of the characteristic polynomial (Durand–Kerner).
fn charpoly_radius(m: &[Vec<f64>]) -> f64 {
    let coeffs = charpoly(m);
    let deg = coeffs.len() - 1;
    let eval = |z: (f64, f64)| {
        coeffs.iter().fold((0.0, 0.0), |acc: (f64, f64), &a| (acc.0 * z.0 - acc.1 * z.1 + a, acc.0 * z.1 + acc.1 * z.0))
    };
    let bound = 1.0 + coeffs[1..].iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut roots: Vec<(f64, f64)> = (0..deg)
        .map(|k| {
            let theta = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64;
            (bound * theta.cos(), bound * theta.sin())
        })
        .collect();
    for _ in 0..10_000 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let num = eval(roots[i]);
            let mut den = (1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    let d = (roots[i].0 - roots[j].0, roots[i].1 - roots[j].1);
                    den = (den.0 * d.0 - den.1 * d.1, den.0 * d.1 + den.1 * d.0);
                }
            }
            let dd = den.0 * den.0 + den.1 * den.1;
            if dd == 0.0 {
                continue;
            }
            let step = ((num.0 * den.0 + num.1 * den.1) / dd, (num.1 * den.0 - num.0 * den.1) / dd);
            roots[i].0 -= step.0;
            roots[i].1 -= step.1;
            moved = moved.max(step.0.hypot(step.1));
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    roots.iter().map(|z| z.0.hypot(z.1)).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Survival {
    /// Per-type survival probabilities.
    pub rho_types: Vec<f64>,
    /// `sum_i mu_i rho_i`.
    pub rho: f64,
}

/// Largest solution of `rho_i = 1 - exp(-sum_j M(i,j) rho_j)`, iterating
/// down from all ones. All zeros when `sigma(M) <= 1`.
pub fn survival_probability(model: &KernelModel) -> Result<Survival> {
    let r = model.r;
    if model.spectral_radius()? <= 1.0 {
        return Ok(Survival { rho_types: vec![0.0; r], rho: 0.0 });
    }
    let mut rho = vec![1.0; r];
    let mut next = vec![0.0; r];
    for _ in 0..SURVIVAL_CAP {
        let mut step = 0.0f64;
        for i in 0..r {
            let s: f64 = model.m[i].iter().zip(&rho).map(|(a, b)| a * b).sum();
            next[i] = -(-s).exp_m1();
            step = step.max((next[i] - rho[i]).abs());
        }
        std::mem::swap(&mut rho, &mut next);
        if step < SURVIVAL_TOL {
            let total = model.mu.iter().zip(&rho).map(|(a, b)| a * b).sum();
            return Ok(Survival { rho_types: rho, rho: total });
        }
    }
    Err(Error::NoConvergence(format!("survival iteration after {SURVIVAL_CAP} steps")))
}

fn check_alpha(name: &str, a: f64) -> Result<()> {
    if a > 0.0 && a <= 1.0 {
        Ok(())
    } else {
        domain(format!("{name} must lie in (0, 1], got {a}"))
    }
}

fn check_strength(name: &str, s: f64) -> Result<()> {
    if s.is_finite() && s >= 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be finite and non-negative, got {s}"))
    }
}

/// Two types: social members (mass `alpha`) and the rest. Members are joined
/// with rate `T_w lambda_w + T_f lambda_f / alpha`, every other pair with
/// `T_w lambda_w`. The vanishing `O(1/n)` overlap term is dropped.
pub fn er_two_type_kernel(alpha: f64, t_w_lambda_w: f64, t_f_lambda_f: f64) -> Result<KernelModel> {
    check_alpha("alpha", alpha)?;
    check_strength("t_w_lambda_w", t_w_lambda_w)?;
    check_strength("t_f_lambda_f", t_f_lambda_f)?;
    let b = t_w_lambda_w;
    let kappa = vec![vec![b + t_f_lambda_f / alpha, b], vec![b, b]];
    KernelModel::new(kappa, vec![alpha, 1.0 - alpha])
}

/// Four types by membership of two social networks F and T: both, F only,
/// T only, neither. A pair gains `lambda_f / alpha_f` if both are in F and
/// `lambda_t / alpha_t` if both are in T, on top of the physical `lambda_w`.
pub fn triple_network_kernel(
    alpha_f: f64,
    alpha_t: f64,
    t_w_lambda_w: f64,
    t_f_lambda_f: f64,
    t_t_lambda_t: f64,
) -> Result<KernelModel> {
    check_alpha("alpha_f", alpha_f)?;
    check_alpha("alpha_t", alpha_t)?;
    check_strength("t_w_lambda_w", t_w_lambda_w)?;
    check_strength("t_f_lambda_f", t_f_lambda_f)?;
    check_strength("t_t_lambda_t", t_t_lambda_t)?;
    let in_f = [true, true, false, false];
    let in_t = [true, false, true, false];
    let kappa = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let mut k = t_w_lambda_w;
                    if in_f[i] && in_f[j] {
                        k += t_f_lambda_f / alpha_f;
                    }
                    if in_t[i] && in_t[j] {
                        k += t_t_lambda_t / alpha_t;
                    }
                    k
                })
                .collect()
        })
        .collect();
    let mu = vec![
        alpha_f * alpha_t,
        alpha_f * (1.0 - alpha_t),
        (1.0 - alpha_f) * alpha_t,
        (1.0 - alpha_f) * (1.0 - alpha_t),
    ];
    KernelModel::new(kappa, mu)
}

/// Giant-component fraction of a four-type triple-network model.
pub fn triple_epidemic_size(model: &KernelModel) -> Result<f64> {
    if model.r != 4 {
        return domain(format!("expected a 4-type model, got r = {}", model.r));
    }
    Ok(survival_probability(model)?.rho)
}
