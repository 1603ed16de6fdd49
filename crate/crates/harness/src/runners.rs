//! One entry point per subcommand, plus their CSV writers.

use std::io::Write;

use cascade_core::kernel::{er_two_type_kernel, survival_probability, triple_network_kernel, KernelModel};
use cascade_core::netgen::{complete_layer, configuration_layer, gnp_all, gnp_members, sample_degrees, sublinear_membership, sublinear_probability};
use cascade_core::percolate::{percolate, ComponentSummary, UnionFind};
use cascade_core::rng::stream_rng;
use cascade_core::theory::{equal_strength_threshold, er_epidemic_size, er_threshold, naive_threshold, phase_boundary, BoundaryMode, TheoryResult};
use cascade_core::{Layer, LayerProbs, LayeredGraph};
use rayon::prelude::*;

use crate::config::{BoundaryKind, ExperimentConfig, Model};
use crate::error::{config_err, HarnessError, Result};
use crate::format::{opt, sig10};
use crate::sim::{grid_points, simulate_points, Point, SweepRow};

/// Analytic summary of the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeReport {
    pub model: Model,
    pub alpha: f64,
    pub t_w: f64,
    pub t_f: f64,
    pub naive_threshold: f64,
    pub theory: TheoryResult,
}

pub fn run_analyze(cfg: &ExperimentConfig) -> Result<AnalyzeReport> {
    let p = Point::base(cfg)?;
    let (a, b) = p.strengths();
    let mut theory = match p.model {
        Model::Config | Model::Er => p.overlay()?.analyze()?,
        Model::Triple => return config_err("analyze covers the two-layer models; use `kernel` for triple networks"),
    };
    if p.model == Model::Er {
        // closed forms of the Poisson case
        theory.sigma_star = er_threshold(p.alpha, a, b)?;
        theory.epidemic_size = er_epidemic_size(p.alpha, a, b)?.size;
    }
    Ok(AnalyzeReport { model: p.model, alpha: p.alpha, t_w: p.t_w, t_f: p.t_f, naive_threshold: naive_threshold(p.alpha, a, b)?, theory })
}

impl AnalyzeReport {
    fn fields(&self) -> Vec<(&'static str, String)> {
        let t = &self.theory;
        vec![
            ("alpha", sig10(self.alpha)),
            ("t_w", sig10(self.t_w)),
            ("t_f", sig10(self.t_f)),
            ("sigma_star", sig10(t.sigma_star)),
            ("naive_threshold", sig10(self.naive_threshold)),
            ("supercritical", t.supercritical.to_string()),
            ("near_critical", t.near_critical.to_string()),
            ("h1", sig10(t.h1)),
            ("h2", sig10(t.h2)),
            ("epidemic_size", sig10(t.epidemic_size)),
            ("mean_outbreak", opt(t.mean_outbreak)),
            ("s1", opt(t.s1)),
            ("s2", opt(t.s2)),
        ]
    }

    pub fn write_summary<W: Write>(&self, out: &mut W) -> Result<()> {
        for (k, v) in self.fields() {
            if !v.is_empty() {
                writeln!(out, "{k}={v}")?;
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let f = self.fields();
        let mut w = csv::Writer::from_writer(out);
        w.write_record(f.iter().map(|(k, _)| *k))?;
        w.write_record(f.iter().map(|(_, v)| v.as_str()))?;
        w.flush()?;
        Ok(())
    }
}

/// Monte Carlo at the base point.
pub fn run_simulate(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    simulate_points(&grid_points(cfg, false)?, cfg.reps, cfg.seed)
}

/// Monte Carlo along the `[sweep]` axis.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    simulate_points(&grid_points(cfg, true)?, cfg.reps, cfg.seed)
}

/// Sweep CSV. Columns: the axis (if any), `alpha`, `t_w`, `t_f`, `t_t`,
/// `threshold`, `epidemic_size`, `mean_outbreak`, `near_critical`,
/// `c1_mean`, `c1_std`, `s_mean`, `s_std`, `reps`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], axis: Option<&str>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = axis.into_iter().collect();
    header.extend([
        "alpha", "t_w", "t_f", "t_t", "threshold", "epidemic_size", "mean_outbreak", "near_critical", "c1_mean", "c1_std", "s_mean",
        "s_std", "reps",
    ]);
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = Vec::with_capacity(header.len());
        if axis.is_some() {
            rec.push(opt(r.axis_value));
        }
        rec.extend([
            sig10(r.alpha),
            sig10(r.t_w),
            sig10(r.t_f),
            opt(r.t_t),
            sig10(r.analytic.threshold),
            sig10(r.analytic.epidemic_size),
            opt(r.analytic.mean_outbreak),
            r.analytic.near_critical.to_string(),
            sig10(r.c1_mean),
            sig10(r.c1_std),
            sig10(r.s_mean),
            sig10(r.s_std),
            r.reps.to_string(),
        ]);
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub alpha: f64,
    /// `(x, y)`; `y` is `None` where no social strength up to the cap suffices.
    pub points: Vec<(f64, Option<f64>)>,
    /// Where the curve meets the diagonal `x = y`.
    pub equal_point: f64,
}

pub fn run_boundary(cfg: &ExperimentConfig) -> Result<Vec<BoundaryCurve>> {
    let spec = cfg.boundary.as_ref().ok_or_else(|| HarnessError::Config("boundary mode needs a `[boundary]` table".into()))?;
    if spec.alphas.is_empty() {
        return config_err("boundary.alphas is empty");
    }
    let xs = spec.grid().values()?;
    let dists = match spec.mode {
        BoundaryKind::Er => None,
        BoundaryKind::General => Some((cfg.dist_f()?.build(&cfg.base_dir)?, cfg.dist_w()?.build(&cfg.base_dir)?)),
    };
    let mode = match &dists {
        None => BoundaryMode::Er,
        Some((f, w)) => BoundaryMode::General { dist_f: f, dist_w: w },
    };
    spec.alphas
        .iter()
        .map(|&alpha| {
            let pts = phase_boundary(alpha, &xs, mode, spec.cap)?;
            Ok(BoundaryCurve {
                alpha,
                points: pts.into_iter().map(|p| (p.physical, p.social)).collect(),
                equal_point: equal_strength_threshold(alpha, mode)?,
            })
        })
        .collect()
}

/// Boundary CSV: `alpha,x,y`, with `y` empty where the boundary is open.
pub fn write_boundary_csv<W: Write>(curves: &[BoundaryCurve], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alpha", "x", "y"])?;
    for c in curves {
        for &(x, y) in &c.points {
            w.write_record([sig10(c.alpha), sig10(x), opt(y)])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport {
    pub model: KernelModel,
    pub sigma: f64,
    pub rho_types: Vec<f64>,
    pub epidemic_fraction: f64,
}

/// Kernel from `kernel.file`, else the triple-network or two-type ER
/// instantiation of the main parameters.
pub fn run_kernel(cfg: &ExperimentConfig) -> Result<KernelReport> {
    let model = match cfg.kernel.as_ref().and_then(|k| k.file.as_ref()) {
        Some(path) => KernelModel::from_toml_file(cfg.base_dir.join(path))?,
        None => {
            let p = Point::base(cfg)?;
            let (a, b) = p.strengths();
            match p.model {
                Model::Triple => {
                    let t = cfg.triple()?;
                    triple_network_kernel(p.alpha, t.alpha_t, b, a, t.t_t * t.lambda_t)?
                }
                Model::Er => er_two_type_kernel(p.alpha, b, a)?,
                Model::Config => return config_err("kernel mode needs `kernel.file` or an ER-based model"),
            }
        }
    };
    let sigma = model.spectral_radius()?;
    let s = survival_probability(&model)?;
    Ok(KernelReport { model, sigma, rho_types: s.rho_types, epidemic_fraction: s.rho })
}

impl KernelReport {
    pub fn write_summary<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "sigma={}", sig10(self.sigma))?;
        for (i, r) in self.rho_types.iter().enumerate() {
            writeln!(out, "rho_{}={}", i + 1, sig10(*r))?;
        }
        writeln!(out, "epidemic_fraction={}", sig10(self.epidemic_fraction))?;
        Ok(())
    }

    /// Kernel CSV: `type,mu,rho`, one row per type.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["type", "mu", "rho"])?;
        for (i, (m, r)) in self.model.mu().iter().zip(&self.rho_types).enumerate() {
            w.write_record([(i + 1).to_string(), sig10(*m), sig10(*r)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One replicate of the sublinear-membership bound check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub rep: usize,
    pub members: usize,
    pub c1_w: usize,
    pub c2_w: usize,
    pub c1_h: usize,
    /// `C1(W) + C2(W) * max(|N_F| - 1, 0)`.
    pub bound: u128,
}

impl BoundRow {
    pub fn holds(&self) -> bool {
        self.c1_h as u128 <= self.bound
    }

    pub fn ratio(&self) -> f64 {
        self.c1_h as f64 / self.c1_w as f64
    }
}

fn bound_replicate(cfg: &ExperimentConfig, gamma: f64, complete_f: bool, rep: usize) -> Result<BoundRow> {
    let n = cfg.n;
    let mut rng = stream_rng(cfg.seed, 0, rep as u64);
    let dw = cfg.dist_w()?.build(&cfg.base_dir)?;
    let w_edges = match cfg.model {
        Model::Er => gnp_all(n, dw.mean() / n as f64, Layer::Physical, &mut rng)?,
        Model::Config => configuration_layer(&sample_degrees(&dw, n, &mut rng), Layer::Physical, &mut rng).0,
        Model::Triple => return config_err("check-bound takes an `er` or `config` physical network"),
    };
    let members = sublinear_membership(n, gamma, &mut rng)?;
    let f_edges = if complete_f {
        let pairs = (members.len() as f64).powi(2) / 2.0;
        if pairs > cfg.max_edges as f64 {
            return config_err(format!("complete social graph has {pairs:.3e} edges, above max_edges"));
        }
        complete_layer(&members, Layer::SocialF)
    } else {
        let lf = cfg.dist_f()?.build(&cfg.base_dir)?.mean();
        let expected = sublinear_probability(n, gamma)? * n as f64;
        gnp_members(&members, (lf / expected).min(1.0), Layer::SocialF, &mut rng)?
    };

    let links = members.len().saturating_sub(1) as u128;
    let members_len = members.len();
    let mut edges = w_edges;
    edges.extend(f_edges);
    let h = LayeredGraph::from_parts(n, edges, members, Vec::new());
    let h = percolate(&h, LayerProbs::new(cfg.t_w, cfg.t_f, 0.0), &mut stream_rng(cfg.seed, 1, rep as u64))?;

    let mut uf = UnionFind::new(n);
    for e in h.edges().iter().filter(|e| e.layer == Layer::Physical) {
        uf.union(e.u, e.v);
    }
    let ComponentSummary { c1: c1_w, c2: c2_w, .. } = uf.summary();
    for e in h.edges().iter().filter(|e| e.layer == Layer::SocialF) {
        uf.union(e.u, e.v);
    }
    let c1_h = uf.summary().c1;

    Ok(BoundRow { rep, members: members_len, c1_w, c2_w, c1_h, bound: c1_w as u128 + c2_w as u128 * links })
}

/// Builds `W`, a sublinear social network on about `n^gamma` members, and
/// checks `C1(W u F) <= C1(W) + C2(W) (|N_F| - 1)` per replicate. Any
/// violation is an invariant error since the bound is deterministic.
pub fn run_check_bound(cfg: &ExperimentConfig, complete_override: bool) -> Result<Vec<BoundRow>> {
    let spec = cfg.check_bound.ok_or_else(|| HarnessError::Config("check-bound mode needs a `[check_bound]` table".into()))?;
    let complete = spec.complete_f || complete_override;
    (0..cfg.reps).into_par_iter().map(|r| bound_replicate(cfg, spec.gamma, complete, r)).collect()
}

/// Bound CSV: `rep,members,c1_w,c2_w,c1_h,bound,ratio,holds`.
pub fn write_bound_csv<W: Write>(rows: &[BoundRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rep", "members", "c1_w", "c2_w", "c1_h", "bound", "ratio", "holds"])?;
    for r in rows {
        w.write_record([
            r.rep.to_string(),
            r.members.to_string(),
            r.c1_w.to_string(),
            r.c2_w.to_string(),
            r.c1_h.to_string(),
            r.bound.to_string(),
            sig10(r.ratio()),
            r.holds().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn check_bound_violations(rows: &[BoundRow]) -> Result<()> {
    match rows.iter().find(|r| !r.holds()) {
        Some(r) => Err(HarnessError::Invariant(format!(
            "replicate {}: C1(H) = {} exceeds bound {}",
            r.rep, r.c1_h, r.bound
        ))),
        None => Ok(()),
    }
}
