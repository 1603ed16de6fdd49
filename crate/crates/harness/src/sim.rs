//! Grid points, their analytic predictions and Monte Carlo replicates.
//!
//! Replicate `r` draws its graph from stream `GRAPH_STREAM` and its edge
//! occupations from `PERC_STREAM`, both indexed by `r` only. Consecutive
//! grid points that share graph parameters reuse the graph, and every point
//! sees the same occupation uniforms, so a sweep over transmissibility is a
//! monotone coupling within each replicate.

use cascade_core::kernel::{triple_epidemic_size, triple_network_kernel};
use cascade_core::netgen::{config_model_coupled, er_coupled, er_triple, CoupledSpec};
use cascade_core::percolate::monotone_path;
use cascade_core::rng::stream_rng;
use cascade_core::theory::{er_epidemic_size, er_threshold, Overlay, NEAR_CRITICAL_BAND};
use cascade_core::{DegreeDistribution, LayerProbs, LayeredGraph};
use rayon::prelude::*;

use crate::config::{Axis, DistSpec, ExperimentConfig, Model, TripleSpec};
use crate::error::{config_err, Result};

const GRAPH_STREAM: u64 = 0;
const PERC_STREAM: u64 = 1;

/// One fully specified parameter point.
#[derive(Debug, Clone)]
pub struct Point {
    pub model: Model,
    pub n: usize,
    pub alpha: f64,
    pub dist_w: DistSpec,
    pub dist_f: DistSpec,
    pub t_w: f64,
    pub t_f: f64,
    pub triple: Option<TripleSpec>,
    pub axis_value: Option<f64>,
    dw: DegreeDistribution,
    df: DegreeDistribution,
}

/// Parameters that determine the unpercolated graph.
#[derive(Debug, Clone, PartialEq)]
struct GraphKey {
    model: Model,
    n: usize,
    alpha: f64,
    dist_w: DistSpec,
    dist_f: DistSpec,
    triple: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analytic {
    /// Epidemic threshold: `sigma*`, the ER closed form, or `sigma(M)`.
    pub threshold: f64,
    pub epidemic_size: f64,
    pub mean_outbreak: Option<f64>,
    pub near_critical: bool,
}

fn set_mean(spec: &mut DistSpec, v: f64, which: &str) -> Result<()> {
    match spec {
        DistSpec::Poisson { mean } => {
            *mean = v;
            Ok(())
        }
        _ => config_err(format!("axis lambda needs a Poisson `{which}`")),
    }
}

impl Point {
    /// The point described by the top-level config keys.
    pub fn base(cfg: &ExperimentConfig) -> Result<Self> {
        let dist_w = cfg.dist_w()?.clone();
        let dist_f = cfg.dist_f()?.clone();
        let triple = match cfg.model {
            Model::Triple => Some(cfg.triple()?),
            _ => None,
        };
        let p = Self {
            model: cfg.model,
            n: cfg.n,
            alpha: cfg.alpha()?,
            dw: dist_w.build(&cfg.base_dir)?,
            df: dist_f.build(&cfg.base_dir)?,
            dist_w,
            dist_f,
            t_w: cfg.t_w,
            t_f: cfg.t_f,
            triple,
            axis_value: None,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if self.model != Model::Config && (self.dist_w.poisson_mean().is_none() || self.dist_f.poisson_mean().is_none()) {
            return config_err("ER-based models need Poisson `dist_w` and `dist_f`");
        }
        for (name, t) in [("t_w", self.t_w), ("t_f", self.t_f), ("t_t", self.triple.map_or(0.0, |t| t.t_t))] {
            if !(0.0..=1.0).contains(&t) {
                return config_err(format!("{name} = {t} is not a probability"));
            }
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return config_err(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        Ok(())
    }

    /// This point with `axis` set to `value`.
    pub fn with_axis(&self, axis: Axis, value: f64, base_dir: &std::path::Path) -> Result<Self> {
        let mut p = self.clone();
        p.axis_value = Some(value);
        let mut rebuild = false;
        match axis {
            Axis::Alpha => p.alpha = value,
            Axis::T => {
                p.t_w = value;
                p.t_f = value;
                if let Some(t) = p.triple.as_mut() {
                    t.t_t = value;
                }
            }
            Axis::TW => p.t_w = value,
            Axis::TF => p.t_f = value,
            Axis::Lambda => {
                set_mean(&mut p.dist_w, value, "dist_w")?;
                set_mean(&mut p.dist_f, value, "dist_f")?;
                rebuild = true;
            }
            Axis::LambdaW => {
                set_mean(&mut p.dist_w, value, "dist_w")?;
                rebuild = true;
            }
            Axis::LambdaF => {
                set_mean(&mut p.dist_f, value, "dist_f")?;
                rebuild = true;
            }
            Axis::Strength => {
                p.t_w = value / p.dw.beta()?;
                p.t_f = value / p.df.beta()?;
                if let Some(t) = p.triple.as_mut() {
                    t.t_t = if t.lambda_t > 0.0 { value / t.lambda_t } else { 0.0 };
                }
            }
        }
        if rebuild {
            p.dw = p.dist_w.build(base_dir)?;
            p.df = p.dist_f.build(base_dir)?;
        }
        p.check()?;
        Ok(p)
    }

    pub fn dist_w(&self) -> &DegreeDistribution {
        &self.dw
    }

    pub fn dist_f(&self) -> &DegreeDistribution {
        &self.df
    }

    pub fn t_t(&self) -> Option<f64> {
        self.triple.map(|t| t.t_t)
    }

    fn graph_key(&self) -> GraphKey {
        GraphKey {
            model: self.model,
            n: self.n,
            alpha: self.alpha,
            dist_w: self.dist_w.clone(),
            dist_f: self.dist_f.clone(),
            triple: self.triple.map(|t| (t.alpha_t, t.lambda_t)),
        }
    }

    pub fn probs(&self) -> LayerProbs {
        LayerProbs::new(self.t_w, self.t_f, self.t_t().unwrap_or(0.0))
    }

    /// Social and physical strengths `T_f lambda_f`, `T_w lambda_w`.
    pub fn strengths(&self) -> (f64, f64) {
        (self.t_f * self.df.mean(), self.t_w * self.dw.mean())
    }

    pub fn overlay(&self) -> Result<Overlay<'_>> {
        Ok(Overlay::new(self.alpha, &self.df, &self.dw, self.t_f, self.t_w)?)
    }

    pub fn expected_edges(&self) -> f64 {
        let n = self.n as f64;
        let extra = self.triple.map_or(0.0, |t| t.alpha_t * t.lambda_t);
        n * (self.dw.mean() + self.alpha * self.df.mean() + extra) / 2.0
    }

    pub fn analytic(&self) -> Result<Analytic> {
        let (a, b) = self.strengths();
        let (threshold, epidemic_size, mean_outbreak) = match self.model {
            Model::Er => {
                let th = er_threshold(self.alpha, a, b)?;
                let size = er_epidemic_size(self.alpha, a, b)?.size;
                let mo = if th < 1.0 { Some(self.overlay()?.mean_outbreak()?) } else { None };
                (th, size, mo)
            }
            Model::Config => {
                let r = self.overlay()?.analyze()?;
                (r.sigma_star, r.epidemic_size, r.mean_outbreak)
            }
            Model::Triple => {
                let t = self.triple.expect("triple point");
                let k = triple_network_kernel(self.alpha, t.alpha_t, b, a, t.t_t * t.lambda_t)?;
                (k.spectral_radius()?, triple_epidemic_size(&k)?, None)
            }
        };
        Ok(Analytic {
            threshold,
            epidemic_size,
            mean_outbreak,
            near_critical: (threshold - 1.0).abs() <= NEAR_CRITICAL_BAND,
        })
    }

    fn build_graph(&self, rng: &mut cascade_core::rng::SimRng) -> Result<LayeredGraph> {
        let lw = self.dw.mean();
        let lf = self.df.mean();
        Ok(match self.model {
            Model::Er => er_coupled(self.n, self.alpha, lw, lf, rng)?,
            Model::Config => {
                let spec = CoupledSpec::new(self.n, self.alpha, self.dw.clone(), self.df.clone(), self.t_w, self.t_f)?;
                config_model_coupled(&spec, rng)?
            }
            Model::Triple => {
                let t = self.triple.expect("triple point");
                er_triple(self.n, self.alpha, t.alpha_t, lw, lf, t.lambda_t, rng)?
            }
        })
    }
}

/// All grid points of a config: the sweep axis if present, else the base point.
pub fn grid_points(cfg: &ExperimentConfig, use_sweep: bool) -> Result<Vec<Point>> {
    let base = Point::base(cfg)?;
    let points = match (&cfg.sweep, use_sweep) {
        (Some(s), true) => s
            .grid()
            .values()?
            .into_iter()
            .map(|v| base.with_axis(s.axis, v, &cfg.base_dir))
            .collect::<Result<Vec<_>>>()?,
        (None, true) => return config_err("sweep mode needs a `[sweep]` table"),
        (_, false) => vec![base],
    };
    for p in &points {
        let m = p.expected_edges();
        if m > cfg.max_edges as f64 {
            return config_err(format!("expected {m:.3e} edges exceeds max_edges = {}", cfg.max_edges));
        }
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// `C_1 / n`.
    pub c1: f64,
    /// `sum_j C_j^2 / n`.
    pub s: f64,
}

fn monotone(a: &LayerProbs, b: &LayerProbs) -> bool {
    b.physical >= a.physical && b.social_f >= a.social_f && b.social_t >= a.social_t
}

/// Samples for every point of one replicate, in point order.
///
/// Runs of consecutive points on the same graph whose occupation
/// probabilities never decrease go through one incremental pass; the
/// result is identical to percolating each point on its own.
pub fn replicate(points: &[Point], seed: u64, rep: u64) -> Result<Vec<Sample>> {
    replicate_with(points, seed, rep, true)
}

fn replicate_with(points: &[Point], seed: u64, rep: u64, incremental: bool) -> Result<Vec<Sample>> {
    let mut out = Vec::with_capacity(points.len());
    let mut i = 0;
    while i < points.len() {
        let key = points[i].graph_key();
        let mut j = i + 1;
        while j < points.len() && points[j].graph_key() == key {
            j += 1;
        }
        let g = points[i].build_graph(&mut stream_rng(seed, GRAPH_STREAM, rep))?;
        let mut k = i;
        while k < j {
            let mut end = k + 1;
            if incremental {
                while end < j && monotone(&points[end - 1].probs(), &points[end].probs()) {
                    end += 1;
                }
            }
            let path: Vec<LayerProbs> = points[k..end].iter().map(Point::probs).collect();
            for pt in monotone_path(&g, &path, &mut stream_rng(seed, PERC_STREAM, rep))? {
                out.push(Sample { c1: pt.epidemic_fraction(), s: pt.avg_outbreak_size() });
            }
            k = end;
        }
        i = j;
    }
    Ok(out)
}

/// Mean and sample standard deviation (zero for one value).
pub fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let (mut n, mut sum) = (0usize, 0.0);
    for x in xs.clone() {
        n += 1;
        sum += x;
    }
    let mean = sum / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.map(|x| (x - mean).powi(2)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: Option<f64>,
    pub alpha: f64,
    pub t_w: f64,
    pub t_f: f64,
    pub t_t: Option<f64>,
    pub analytic: Analytic,
    pub c1_mean: f64,
    pub c1_std: f64,
    pub s_mean: f64,
    pub s_std: f64,
    pub reps: usize,
}

/// Runs `reps` replicates over all points on the rayon pool and aggregates
/// per point. Results are gathered in replicate order, so the output does
/// not depend on scheduling.
pub fn simulate_points(points: &[Point], reps: usize, seed: u64) -> Result<Vec<SweepRow>> {
    let analytic: Vec<Analytic> = points.iter().map(Point::analytic).collect::<Result<_>>()?;
    let samples: Vec<Vec<Sample>> =
        (0..reps as u64).into_par_iter().map(|r| replicate(points, seed, r)).collect::<Result<_>>()?;
    Ok(points
        .iter()
        .zip(analytic)
        .enumerate()
        .map(|(i, (p, a))| {
            let (c1_mean, c1_std) = mean_std(samples.iter().map(|s| s[i].c1));
            let (s_mean, s_std) = mean_std(samples.iter().map(|s| s[i].s));
            SweepRow {
                axis_value: p.axis_value,
                alpha: p.alpha,
                t_w: p.t_w,
                t_f: p.t_f,
                t_t: p.t_t(),
                analytic: a,
                c1_mean,
                c1_std,
                s_mean,
                s_std,
                reps,
            }
        })
        .collect())
}

/// Smallest axis value whose mean giant fraction exceeds 0.01.
pub fn empirical_threshold(rows: &[SweepRow]) -> Option<f64> {
    rows.iter().filter(|r| r.c1_mean > 0.01).filter_map(|r| r.axis_value).reduce(f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml_str(text).unwrap()
    }

    const ER: &str = r#"
n = 2000
alpha = 0.5
reps = 4
dist_w = { kind = "poisson", mean = 1.5 }
dist_f = { kind = "poisson", mean = 1.5 }
"#;

    #[test]
    fn strength_axis_sets_transmissibilities() {
        let c = cfg(&format!("{ER}\n[sweep]\naxis = \"strength\"\nvalues = [0.75, 1.5]\n"));
        let pts = grid_points(&c, true).unwrap();
        assert_eq!((pts[0].t_w, pts[0].t_f), (0.5, 0.5));
        assert_eq!((pts[1].t_w, pts[1].t_f), (1.0, 1.0));
        let a = pts[1].analytic().unwrap();
        assert!((a.epidemic_size - 0.8165006435006716).abs() < 1e-9);
        let c = cfg(&format!("{ER}\n[sweep]\naxis = \"strength\"\nvalues = [2.0]\n"));
        assert!(grid_points(&c, true).is_err());
    }

    #[test]
    fn lambda_axis_needs_poisson() {
        let c = cfg(&format!("{ER}\nmodel = \"config\"\n[sweep]\naxis = \"lambda_w\"\nvalues = [0.5, 1.0]\n"));
        let pts = grid_points(&c, true).unwrap();
        assert_eq!(pts[1].dist_w().mean(), 1.0);
        let pl = r#"
model = "config"
alpha = 0.5
dist_w = { kind = "powerlaw", exponent = 2.5, cutoff = 10.0 }
dist_f = { kind = "poisson", mean = 1.0 }
[sweep]
axis = "lambda_w"
values = [1.0]
"#;
        assert!(grid_points(&cfg(pl), true).is_err());
        let er_pl = pl.replace("model = \"config\"", "model = \"er\"").replace("lambda_w", "t");
        assert!(grid_points(&cfg(&er_pl), true).is_err());
    }

    #[test]
    fn edge_guard() {
        let c = cfg(&format!("{ER}\nmax_edges = 1000\n"));
        assert!(grid_points(&c, false).is_err());
    }

    #[test]
    fn replicates_are_order_free_and_monotone() {
        let c = cfg(&format!("{ER}\n[sweep]\naxis = \"t\"\nvalues = [0.2, 0.5, 0.8, 1.0]\n"));
        let pts = grid_points(&c, true).unwrap();
        let a = replicate(&pts, 5, 3).unwrap();
        let _ = replicate(&pts, 5, 2).unwrap();
        assert_eq!(a, replicate(&pts, 5, 3).unwrap());
        assert!(a.windows(2).all(|w| w[0].c1 <= w[1].c1));
        assert_eq!(a, replicate_with(&pts, 5, 3, false).unwrap());
        // non-monotone and graph-changing grids take the pointwise route
        let c = cfg(&format!("{ER}\n[sweep]\naxis = \"t\"\nvalues = [0.9, 0.3, 0.7]\n"));
        let pts = grid_points(&c, true).unwrap();
        assert_eq!(replicate(&pts, 5, 1).unwrap(), replicate_with(&pts, 5, 1, false).unwrap());
        let c = cfg(&format!("{ER}\n[sweep]\naxis = \"alpha\"\nvalues = [0.2, 0.5, 0.5, 0.9]\n"));
        let pts = grid_points(&c, true).unwrap();
        let r = replicate(&pts, 5, 1).unwrap();
        assert_eq!(r[1], r[2]);
        assert_eq!(r, replicate_with(&pts, 5, 1, false).unwrap());
        let rows = simulate_points(&pts, 4, 5).unwrap();
        assert_eq!(rows, simulate_points(&pts, 4, 5).unwrap());
        assert!(rows.iter().all(|r| r.c1_std >= 0.0 && r.s_std >= 0.0 && r.reps == 4));
    }

    #[test]
    fn threshold_estimator() {
        let row = |x: f64, c1: f64| SweepRow {
            axis_value: Some(x),
            alpha: 0.5,
            t_w: 1.0,
            t_f: 1.0,
            t_t: None,
            analytic: Analytic { threshold: 1.0, epidemic_size: 0.0, mean_outbreak: None, near_critical: false },
            c1_mean: c1,
            c1_std: 0.0,
            s_mean: 1.0,
            s_std: 0.0,
            reps: 1,
        };
        let rows = vec![row(0.5, 0.001), row(0.6, 0.02), row(0.7, 0.1)];
        assert_eq!(empirical_threshold(&rows), Some(0.6));
        assert_eq!(empirical_threshold(&rows[..1]), None);
    }

    #[test]
    fn mean_std_basics() {
        assert_eq!(mean_std([2.0].into_iter()), (2.0, 0.0));
        let (m, s) = mean_std([1.0, 2.0, 3.0].into_iter());
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }
}
