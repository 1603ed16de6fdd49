//! Random graph constructions for the overlay network: the coupled
//! configuration model, coupled and triple Erdős–Rényi graphs, and
//! sublinear-membership social networks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dist::DegreeDistribution;
use crate::error::{check_probability, domain, Error, Result};
use crate::graph::{Edge, Layer, LayeredGraph, NodeId};

/// Parameters of the coupled configuration-model overlay.
#[derive(Debug, Clone)]
pub struct CoupledSpec {
    pub n: usize,
    pub alpha: f64,
    pub dist_w: DegreeDistribution,
    pub dist_f: DegreeDistribution,
    pub t_w: f64,
    pub t_f: f64,
}

impl CoupledSpec {
    pub fn new(
        n: usize,
        alpha: f64,
        dist_w: DegreeDistribution,
        dist_f: DegreeDistribution,
        t_w: f64,
        t_f: f64,
    ) -> Result<Self> {
        if n == 0 {
            return domain("node count must be at least 1");
        }
        check_membership_alpha(alpha)?;
        check_probability("t_w", t_w)?;
        check_probability("t_f", t_f)?;
        if n > NodeId::MAX as usize {
            return domain(format!("node count {n} exceeds the id range"));
        }
        Ok(Self { n, alpha, dist_w, dist_f, t_w, t_f })
    }
}

/// Colored degree of a node: stub counts per layer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ColoredDegree {
    pub social: usize,
    pub physical: usize,
}

/// What erasure removed from a matched multigraph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ErasureCounts {
    pub self_loops: usize,
    pub multi_edges: usize,
}

impl ErasureCounts {
    pub fn total(&self) -> usize {
        self.self_loops + self.multi_edges
    }
}

impl std::ops::AddAssign for ErasureCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.self_loops += rhs.self_loops;
        self.multi_edges += rhs.multi_edges;
    }
}

/// Side information from a configuration-model build.
#[derive(Debug, Clone)]
pub struct ConfigReport {
    /// Colored degrees after the parity fix, i.e. the stub counts matched.
    pub degrees: Vec<ColoredDegree>,
    /// Matched edges per layer before erasure (physical, social).
    pub matched: (usize, usize),
    pub erased_physical: ErasureCounts,
    pub erased_social: ErasureCounts,
}

fn check_membership_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        domain(format!("membership probability must lie in (0, 1], got {alpha}"))
    }
}

fn check_ids(n: usize) -> Result<()> {
    if n > NodeId::MAX as usize {
        return domain(format!("node count {n} exceeds the id range"));
    }
    Ok(())
}

/// Includes each node independently with probability `p` (no draws when `p == 0`).
fn bernoulli_subset<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Vec<NodeId> {
    if p <= 0.0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..n as NodeId).collect();
    }
    (0..n as NodeId).filter(|_| rng.random::<f64>() < p).collect()
}

/// Social-network membership: each node joins independently with probability `alpha`.
pub fn sample_membership<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> Result<Vec<NodeId>> {
    check_membership_alpha(alpha)?;
    check_ids(n)?;
    Ok(bernoulli_subset(n, alpha, rng))
}

/// Membership probability `n^(gamma - 1)` for a sublinear social network.
/// `gamma = 1` is accepted as the degenerate case where every node joins.
pub fn sublinear_probability(n: usize, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return domain(format!("sublinear exponent must lie in (0, 1], got {gamma}"));
    }
    if n == 0 {
        return domain("node count must be at least 1");
    }
    Ok((n as f64).powf(gamma - 1.0))
}

/// Membership of size about `n^gamma`: each node joins with probability `n^(gamma - 1)`.
pub fn sublinear_membership<R: Rng + ?Sized>(n: usize, gamma: f64, rng: &mut R) -> Result<Vec<NodeId>> {
    let p = sublinear_probability(n, gamma)?;
    check_ids(n)?;
    Ok(bernoulli_subset(n, p, rng))
}

/// Draws `(d_f, d_w)` for every node. Non-members get `d_f = 0`. If a layer's
/// stub total is odd, one uniformly chosen eligible node gets an extra stub.
pub fn sample_colored_degrees<R: Rng + ?Sized>(
    spec: &CoupledSpec,
    membership: &[NodeId],
    rng: &mut R,
) -> Vec<ColoredDegree> {
    let mut is_member = vec![false; spec.n];
    for &m in membership {
        is_member[m as usize] = true;
    }
    let mut degrees: Vec<ColoredDegree> = is_member
        .iter()
        .map(|&member| {
            let social = if member { spec.dist_f.sample(rng) } else { 0 };
            let physical = spec.dist_w.sample(rng);
            ColoredDegree { social, physical }
        })
        .collect();

    let social_sum: usize = degrees.iter().map(|d| d.social).sum();
    if social_sum % 2 == 1 {
        // social_sum > 0 implies a member exists
        let pick = membership[rng.random_range(0..membership.len())];
        degrees[pick as usize].social += 1;
    }
    let physical_sum: usize = degrees.iter().map(|d| d.physical).sum();
    if physical_sum % 2 == 1 {
        let pick = rng.random_range(0..spec.n);
        degrees[pick].physical += 1;
    }
    degrees
}

/// Degree sequence for a single layer on `0..n`, parity fixed as in
/// [`sample_colored_degrees`].
pub fn sample_degrees<R: Rng + ?Sized>(dist: &DegreeDistribution, n: usize, rng: &mut R) -> Vec<usize> {
    let mut degrees: Vec<usize> = (0..n).map(|_| dist.sample(rng)).collect();
    if n > 0 && degrees.iter().sum::<usize>() % 2 == 1 {
        let pick = rng.random_range(0..n);
        degrees[pick] += 1;
    }
    degrees
}

/// Uniform stub matching within one layer. Returns the raw multigraph,
/// self-loops and parallel edges included. The stub total must be even.
pub fn match_stubs<R: Rng + ?Sized>(degrees: &[usize], layer: Layer, rng: &mut R) -> Vec<Edge> {
    let total: usize = degrees.iter().sum();
    debug_assert!(total % 2 == 0, "odd stub count");
    let mut stubs: Vec<NodeId> = Vec::with_capacity(total);
    for (node, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(node as NodeId, d));
    }
    stubs.shuffle(rng);
    stubs.chunks_exact(2).map(|p| Edge::new(p[0], p[1], layer)).collect()
}

/// Removes self-loops and repeated node pairs (per layer), keeping the first
/// occurrence and the original order otherwise. Endpoints come out as `u < v`.
pub fn erase(n: usize, edges: Vec<Edge>) -> (Vec<Edge>, ErasureCounts) {
    let mut counts = ErasureCounts::default();
    let mut kept: Vec<Edge> = Vec::with_capacity(edges.len());
    for e in edges {
        if e.u == e.v {
            counts.self_loops += 1;
        } else {
            kept.push(Edge::new(e.u.min(e.v), e.u.max(e.v), e.layer));
        }
    }

    // Bucket by (layer, min endpoint) and mark neighbours to find repeats in O(n + m).
    let mut offsets = vec![0usize; 3 * n + 1];
    for e in &kept {
        offsets[e.layer.index() * n + e.u as usize + 1] += 1;
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    let mut cursor = offsets.clone();
    let mut bucket = vec![0u32; kept.len()];
    for (idx, e) in kept.iter().enumerate() {
        let slot = &mut cursor[e.layer.index() * n + e.u as usize];
        bucket[*slot] = idx as u32;
        *slot += 1;
    }
    let mut mark = vec![u32::MAX; n];
    let mut duplicate = vec![false; kept.len()];
    for layer in 0..3 {
        mark.iter_mut().for_each(|m| *m = u32::MAX);
        for u in 0..n {
            let key = layer * n + u;
            for &idx in &bucket[offsets[key]..offsets[key + 1]] {
                let v = kept[idx as usize].v as usize;
                if mark[v] == u as u32 {
                    duplicate[idx as usize] = true;
                } else {
                    mark[v] = u as u32;
                }
            }
        }
    }
    let mut out = Vec::with_capacity(kept.len());
    for (e, dup) in kept.into_iter().zip(duplicate) {
        if dup {
            counts.multi_edges += 1;
        } else {
            out.push(e);
        }
    }
    (out, counts)
}

/// Erased configuration model for one layer from a degree sequence.
pub fn configuration_layer<R: Rng + ?Sized>(
    degrees: &[usize],
    layer: Layer,
    rng: &mut R,
) -> (Vec<Edge>, ErasureCounts) {
    erase(degrees.len(), match_stubs(degrees, layer, rng))
}

/// The coupled configuration-model overlay `H = W ∪ F`.
pub fn config_model_coupled<R: Rng + ?Sized>(spec: &CoupledSpec, rng: &mut R) -> Result<LayeredGraph> {
    config_model_coupled_with_report(spec, rng).map(|(g, _)| g)
}

pub fn config_model_coupled_with_report<R: Rng + ?Sized>(
    spec: &CoupledSpec,
    rng: &mut R,
) -> Result<(LayeredGraph, ConfigReport)> {
    let membership = sample_membership(spec.n, spec.alpha, rng)?;
    let degrees = sample_colored_degrees(spec, &membership, rng);

    let physical: Vec<usize> = degrees.iter().map(|d| d.physical).collect();
    let social: Vec<usize> = degrees.iter().map(|d| d.social).collect();
    let raw_w = match_stubs(&physical, Layer::Physical, rng);
    let raw_f = match_stubs(&social, Layer::SocialF, rng);
    let matched = (raw_w.len(), raw_f.len());
    let (mut edges, erased_physical) = erase(spec.n, raw_w);
    let (edges_f, erased_social) = erase(spec.n, raw_f);
    edges.extend(edges_f);

    let graph = LayeredGraph::from_parts(spec.n, edges, membership, Vec::new());
    Ok((graph, ConfigReport { degrees, matched, erased_physical, erased_social }))
}

/// `G(m, p)` over the vertex list `0..count`, mapped through `id`, by
/// geometric skipping over the pair lattice (Batagelj–Brandes). Expected
/// time is linear in `count` plus the number of edges.
fn gnp_into<R: Rng + ?Sized>(
    count: usize,
    p: f64,
    id: impl Fn(usize) -> NodeId,
    layer: Layer,
    rng: &mut R,
    out: &mut Vec<Edge>,
) {
    if p <= 0.0 || count < 2 {
        return;
    }
    if p >= 1.0 {
        for v in 1..count {
            for w in 0..v {
                out.push(Edge::new(id(w), id(v), layer));
            }
        }
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < count {
        let r: f64 = rng.random();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < count {
            w -= v as i64;
            v += 1;
        }
        if v < count {
            out.push(Edge::new(id(w as usize), id(v), layer));
        }
    }
}

fn edge_probability(mean: f64, population: f64, what: &str) -> Result<f64> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return domain(format!("{what} mean degree must be finite and >= 0, got {mean}"));
    }
    if mean == 0.0 {
        return Ok(0.0);
    }
    let p = mean / population;
    if p > 1.0 {
        return Err(Error::Parameter(format!("{what} edge probability {p} exceeds 1")));
    }
    Ok(p)
}

/// Erdős–Rényi layer on all of `0..n`.
pub fn gnp_all<R: Rng + ?Sized>(n: usize, p: f64, layer: Layer, rng: &mut R) -> Result<Vec<Edge>> {
    check_probability("edge probability", p)?;
    check_ids(n)?;
    let mut out = Vec::new();
    gnp_into(n, p, |i| i as NodeId, layer, rng, &mut out);
    Ok(out)
}

/// Erdős–Rényi layer on a member list.
pub fn gnp_members<R: Rng + ?Sized>(members: &[NodeId], p: f64, layer: Layer, rng: &mut R) -> Result<Vec<Edge>> {
    check_probability("edge probability", p)?;
    let mut out = Vec::new();
    gnp_into(members.len(), p, |i| members[i], layer, rng, &mut out);
    Ok(out)
}

/// Every pair of members joined in `layer`.
pub fn complete_layer(members: &[NodeId], layer: Layer) -> Vec<Edge> {
    let mut out = Vec::with_capacity(members.len() * members.len().saturating_sub(1) / 2);
    for (i, &v) in members.iter().enumerate() {
        for &u in &members[..i] {
            out.push(Edge::new(u, v, layer));
        }
    }
    out
}

/// Coupled ER overlay: `W` with edge probability `lambda_w / n` on all nodes,
/// `F` with probability `lambda_f / (alpha n)` on the members.
pub fn er_coupled<R: Rng + ?Sized>(
    n: usize,
    alpha: f64,
    lambda_w: f64,
    lambda_f: f64,
    rng: &mut R,
) -> Result<LayeredGraph> {
    check_membership_alpha(alpha)?;
    let p_w = edge_probability(lambda_w, n as f64, "physical")?;
    let p_f = edge_probability(lambda_f, alpha * n as f64, "social")?;
    let membership = sample_membership(n, alpha, rng)?;
    let mut edges = gnp_all(n, p_w, Layer::Physical, rng)?;
    edges.extend(gnp_members(&membership, p_f, Layer::SocialF, rng)?);
    Ok(LayeredGraph::from_parts(n, edges, membership, Vec::new()))
}

/// Three-layer ER overlay `W ∪ F ∪ T` with independent memberships.
///
/// Draw order is membership F, W, F, membership T, T; with `alpha_t = 0`
/// the result coincides draw-for-draw with [`er_coupled`].
pub fn er_triple<R: Rng + ?Sized>(
    n: usize,
    alpha_f: f64,
    alpha_t: f64,
    lambda_w: f64,
    lambda_f: f64,
    lambda_t: f64,
    rng: &mut R,
) -> Result<LayeredGraph> {
    check_probability("alpha_f", alpha_f)?;
    check_probability("alpha_t", alpha_t)?;
    check_ids(n)?;
    let p_w = edge_probability(lambda_w, n as f64, "physical")?;
    let p_f = if alpha_f > 0.0 { edge_probability(lambda_f, alpha_f * n as f64, "social F")? } else { 0.0 };
    let p_t = if alpha_t > 0.0 { edge_probability(lambda_t, alpha_t * n as f64, "social T")? } else { 0.0 };

    let membership_f = bernoulli_subset(n, alpha_f, rng);
    let mut edges = gnp_all(n, p_w, Layer::Physical, rng)?;
    edges.extend(gnp_members(&membership_f, p_f, Layer::SocialF, rng)?);
    let membership_t = bernoulli_subset(n, alpha_t, rng);
    edges.extend(gnp_members(&membership_t, p_t, Layer::SocialT, rng)?);
    Ok(LayeredGraph::from_parts(n, edges, membership_f, membership_t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_pcg::Pcg64Mcg;

    fn rng(seed: u64) -> Pcg64Mcg {
        Pcg64Mcg::seed_from_u64(seed)
    }

    fn poisson(l: f64) -> DegreeDistribution {
        DegreeDistribution::poisson(l).unwrap()
    }

    #[test]
    fn full_membership() {
        let m = sample_membership(50, 1.0, &mut rng(1)).unwrap();
        assert_eq!(m, (0..50).collect::<Vec<_>>());
        assert!(sample_membership(50, 0.0, &mut rng(1)).is_err());
        assert!(sample_membership(50, 1.5, &mut rng(1)).is_err());
    }

    #[test]
    fn membership_concentrates() {
        let m = sample_membership(100_000, 0.5, &mut rng(2)).unwrap();
        let frac = m.len() as f64 / 1e5;
        assert!((0.49..=0.51).contains(&frac), "{frac}");
        assert_eq!(m, sample_membership(100_000, 0.5, &mut rng(2)).unwrap());
    }

    #[test]
    fn sublinear_membership_size() {
        let p = sublinear_probability(1_000_000, 0.5).unwrap();
        assert!(p > 1e-6 && p < 1.0);
        for g in [0.01, 0.99] {
            let p = sublinear_probability(1000, g).unwrap();
            assert!(p > 1.0 / 1000.0 && p < 1.0);
        }
        let m = sublinear_membership(1_000_000, 0.5, &mut rng(3)).unwrap();
        assert!((700..=1300).contains(&m.len()), "{}", m.len());
        assert_eq!(m, sublinear_membership(1_000_000, 0.5, &mut rng(3)).unwrap());
        assert_eq!(sublinear_membership(10, 1.0, &mut rng(3)).unwrap().len(), 10);
        assert!(sublinear_membership(10, 1.01, &mut rng(3)).is_err());
        assert!(sublinear_membership(10, 0.0, &mut rng(3)).is_err());
    }

    #[test]
    fn non_members_have_no_social_stubs() {
        let spec = CoupledSpec::new(1000, 0.3, poisson(2.0), poisson(3.0), 1.0, 1.0).unwrap();
        let degrees = sample_colored_degrees(&spec, &[], &mut rng(4));
        assert!(degrees.iter().all(|d| d.social == 0));
    }

    #[test]
    fn parity_fix() {
        let spec = CoupledSpec::new(101, 0.5, poisson(1.3), poisson(0.7), 1.0, 1.0).unwrap();
        for seed in 0..1000 {
            let mut r = rng(seed);
            let m = sample_membership(spec.n, spec.alpha, &mut r).unwrap();
            let d = sample_colored_degrees(&spec, &m, &mut r);
            assert_eq!(d.iter().map(|x| x.social).sum::<usize>() % 2, 0);
            assert_eq!(d.iter().map(|x| x.physical).sum::<usize>() % 2, 0);
        }
    }

    #[test]
    fn colored_degrees_uncorrelated() {
        let spec = CoupledSpec::new(100_000, 0.5, poisson(1.5), poisson(1.5), 1.0, 1.0).unwrap();
        let mut r = rng(5);
        let m = sample_membership(spec.n, spec.alpha, &mut r).unwrap();
        let d = sample_colored_degrees(&spec, &m, &mut r);
        let n = d.len() as f64;
        let (mf, mw) = (
            d.iter().map(|x| x.social as f64).sum::<f64>() / n,
            d.iter().map(|x| x.physical as f64).sum::<f64>() / n,
        );
        let cov = d.iter().map(|x| (x.social as f64 - mf) * (x.physical as f64 - mw)).sum::<f64>() / n;
        let vf = d.iter().map(|x| (x.social as f64 - mf).powi(2)).sum::<f64>() / n;
        let vw = d.iter().map(|x| (x.physical as f64 - mw).powi(2)).sum::<f64>() / n;
        let corr = cov / (vf * vw).sqrt();
        assert!(corr.abs() < 0.01, "corr {corr}");
    }

    #[test]
    fn empty_degree_distributions_give_no_edges() {
        let zero = DegreeDistribution::explicit(vec![1.0]).unwrap();
        let spec = CoupledSpec::new(500, 1.0, zero.clone(), zero, 1.0, 1.0).unwrap();
        let g = config_model_coupled(&spec, &mut rng(6)).unwrap();
        assert!(g.edges().is_empty());
    }

    #[test]
    fn stub_conservation_before_erasure() {
        let spec = CoupledSpec::new(2000, 0.4, poisson(2.5), DegreeDistribution::powerlaw_cutoff(2.5, 10.0).unwrap(), 1.0, 1.0).unwrap();
        let mut r = rng(7);
        let m = sample_membership(spec.n, spec.alpha, &mut r).unwrap();
        let d = sample_colored_degrees(&spec, &m, &mut r);
        let physical: Vec<usize> = d.iter().map(|x| x.physical).collect();
        let social: Vec<usize> = d.iter().map(|x| x.social).collect();
        for (degs, layer) in [(&physical, Layer::Physical), (&social, Layer::SocialF)] {
            let raw = match_stubs(degs, layer, &mut r);
            assert_eq!(2 * raw.len(), degs.iter().sum::<usize>());
            let mut got = vec![0usize; spec.n];
            for e in &raw {
                got[e.u as usize] += 1;
                got[e.v as usize] += 1;
            }
            assert_eq!(&got, degs);
        }
    }

    #[test]
    fn config_model_invariants_and_erasure_rate() {
        let spec = CoupledSpec::new(100_000, 0.5, poisson(1.5), poisson(1.5), 1.0, 1.0).unwrap();
        let (g, report) = config_model_coupled_with_report(&spec, &mut rng(8)).unwrap();
        g.validate().unwrap();
        let erased = report.erased_physical.total() + report.erased_social.total();
        let matched = report.matched.0 + report.matched.1;
        assert_eq!(g.edges().len() + erased, matched);
        assert!((erased as f64) / (matched as f64) < 1e-3, "erased {erased} of {matched}");
        let phys: usize = report.degrees.iter().map(|d| d.physical).sum();
        assert_eq!(phys, 2 * report.matched.0);
    }

    #[test]
    fn erase_counts() {
        let edges = vec![
            Edge::new(0, 1, Layer::Physical),
            Edge::new(1, 0, Layer::Physical),
            Edge::new(2, 2, Layer::Physical),
            Edge::new(0, 1, Layer::SocialF),
            Edge::new(3, 1, Layer::Physical),
        ];
        let (kept, c) = erase(4, edges);
        assert_eq!(c, ErasureCounts { self_loops: 1, multi_edges: 1 });
        assert_eq!(
            kept,
            vec![Edge::new(0, 1, Layer::Physical), Edge::new(0, 1, Layer::SocialF), Edge::new(1, 3, Layer::Physical)]
        );
    }

    #[test]
    fn gnp_small_exhaustive_rate() {
        // each of the 10 pairs of a 5-node graph appears with probability p
        let mut counts = std::collections::HashMap::new();
        let reps = 20_000;
        let mut r = rng(9);
        for _ in 0..reps {
            for e in gnp_all(5, 0.3, Layer::Physical, &mut r).unwrap() {
                assert!(e.u < e.v);
                *counts.entry((e.u, e.v)).or_insert(0usize) += 1;
            }
        }
        assert_eq!(counts.len(), 10);
        let sd = (reps as f64 * 0.3 * 0.7).sqrt();
        for (&pair, &c) in &counts {
            assert!((c as f64 - reps as f64 * 0.3).abs() < 5.0 * sd, "{pair:?}: {c}");
        }
        assert_eq!(gnp_all(6, 1.0, Layer::Physical, &mut r).unwrap().len(), 15);
        assert!(gnp_all(6, 0.0, Layer::Physical, &mut r).unwrap().is_empty());
    }

    #[test]
    fn er_coupled_no_social_edges_without_social_degree() {
        let g = er_coupled(10_000, 0.5, 1.0, 0.0, &mut rng(10)).unwrap();
        assert_eq!(g.edge_count(Layer::SocialF), 0);
        g.validate().unwrap();
    }

    #[test]
    fn er_coupled_mean_degree() {
        let n = 200_000;
        let g = er_coupled(n, 0.5, 1.5, 1.0, &mut rng(11)).unwrap();
        g.validate().unwrap();
        let m = g.edge_count(Layer::Physical) as f64;
        let pairs = n as f64 * (n as f64 - 1.0) / 2.0;
        let p = 1.5 / n as f64;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        assert!((m - pairs * p).abs() < 3.0 * sd, "W edges {m}");
        let mean_deg = 2.0 * m / n as f64;
        assert!((mean_deg - 1.5).abs() < 3.0 * 2.0 * sd / n as f64);
    }

    #[test]
    fn er_coupled_union_degree_full_membership() {
        let n = 100_000;
        let g = er_coupled(n, 1.0, 0.5, 0.5, &mut rng(12)).unwrap();
        let mut pairs: std::collections::HashSet<(u32, u32)> = std::collections::HashSet::new();
        for e in g.edges() {
            pairs.insert((e.u.min(e.v), e.u.max(e.v)));
        }
        let union_mean = 2.0 * pairs.len() as f64 / n as f64;
        // inclusion-exclusion: p_union = p_w + p_f - p_w p_f, mean = (n - 1) p_union
        let p = 0.5 / n as f64;
        let expected = (n as f64 - 1.0) * (2.0 * p - p * p);
        let sd = 2.0 * (n as f64 * (n as f64 - 1.0) / 2.0 * 2.0 * p).sqrt() / n as f64;
        assert!((union_mean - expected).abs() < 4.0 * sd, "{union_mean} vs {expected}");
    }

    #[test]
    fn er_rejects_infeasible_probabilities() {
        assert!(matches!(er_coupled(10, 0.1, 0.5, 5.0, &mut rng(0)), Err(Error::Parameter(_))));
        assert!(matches!(er_coupled(3, 1.0, 5.0, 0.0, &mut rng(0)), Err(Error::Parameter(_))));
    }

    #[test]
    fn er_triple_reduces_to_coupled() {
        let a = er_triple(5000, 0.4, 0.0, 1.2, 0.9, 2.0, &mut rng(13)).unwrap();
        let b = er_coupled(5000, 0.4, 1.2, 0.9, &mut rng(13)).unwrap();
        assert_eq!(a, b);
        let c = er_triple(5000, 0.4, 0.6, 1.2, 0.9, 0.0, &mut rng(14)).unwrap();
        assert_eq!(c.edge_count(Layer::SocialT), 0);
        c.validate().unwrap();
    }

    #[test]
    fn er_triple_union_mean_degree() {
        let n = 100_000;
        let g = er_triple(n, 1.0, 1.0, 0.4, 0.3, 0.5, &mut rng(15)).unwrap();
        g.validate().unwrap();
        let mut pairs = std::collections::HashSet::new();
        for e in g.edges() {
            pairs.insert((e.u, e.v));
        }
        let union_mean = 2.0 * pairs.len() as f64 / n as f64;
        assert!((union_mean - 1.2).abs() < 0.02, "{union_mean}");
    }

    #[test]
    fn complete_layer_size() {
        let e = complete_layer(&[1, 4, 7, 9], Layer::SocialF);
        assert_eq!(e.len(), 6);
    }
}
