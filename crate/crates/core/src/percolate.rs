//! Bond percolation and exact component statistics.

use rand::Rng;

use crate::error::{check_probability, Error, Result};
use crate::graph::{Layer, LayerProbs, LayeredGraph};

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already joined.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    /// Like [`Self::union`] but returns the sizes of the two merged sets.
    pub fn union_sizes(&mut self, a: u32, b: u32) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let sizes = (self.size[ra as usize] as usize, self.size[rb as usize] as usize);
        self.union(ra, rb);
        Some(sizes)
    }

    /// Component summary in one pass over the roots, no sorting.
    pub fn summary(&self) -> ComponentSummary {
        let mut out = ComponentSummary { n: self.len(), c1: 0, c2: 0, count: 0, sum_sq: 0 };
        for (i, &p) in self.parent.iter().enumerate() {
            if i as u32 != p {
                continue;
            }
            let s = self.size[i] as usize;
            out.count += 1;
            out.sum_sq += (s as u128) * (s as u128);
            if s > out.c1 {
                out.c2 = out.c1;
                out.c1 = s;
            } else if s > out.c2 {
                out.c2 = s;
            }
        }
        out
    }

    /// Sizes of all sets (one entry per root, unordered).
    pub fn set_sizes(&self) -> Vec<usize> {
        self.parent
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i as u32 == p)
            .map(|(i, _)| self.size[i] as usize)
            .collect()
    }
}

/// Component sizes of a graph, largest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentStats {
    pub n: usize,
    pub sizes: Vec<usize>,
}

impl ComponentStats {
    pub fn from_sizes(n: usize, mut sizes: Vec<usize>) -> Self {
        debug_assert_eq!(sizes.iter().sum::<usize>(), n);
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Self { n, sizes }
    }

    /// Largest component size.
    pub fn c1(&self) -> usize {
        self.sizes.first().copied().unwrap_or(0)
    }

    /// Second largest component size, zero for a single component.
    pub fn c2(&self) -> usize {
        self.sizes.get(1).copied().unwrap_or(0)
    }

    pub fn num_components(&self) -> usize {
        self.sizes.len()
    }

    /// Mean outbreak size `sum_j C_j^2 / n`: the expected size of the
    /// component holding a uniformly random seed node.
    pub fn avg_outbreak_size(&self) -> f64 {
        let sq: u128 = self.sizes.iter().map(|&s| (s as u128) * (s as u128)).sum();
        sq as f64 / self.n as f64
    }

    /// `C_1 / n`.
    pub fn epidemic_fraction(&self) -> f64 {
        self.c1() as f64 / self.n as f64
    }
}

/// The two largest component sizes, the component count and `sum_j C_j^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentSummary {
    pub n: usize,
    pub c1: usize,
    pub c2: usize,
    pub count: usize,
    pub sum_sq: u128,
}

impl ComponentSummary {
    pub fn avg_outbreak_size(&self) -> f64 {
        self.sum_sq as f64 / self.n as f64
    }

    pub fn epidemic_fraction(&self) -> f64 {
        self.c1 as f64 / self.n as f64
    }
}

fn check_probs(probs: &LayerProbs) -> Result<()> {
    check_probability("t_w", probs.physical)?;
    check_probability("t_f", probs.social_f)?;
    check_probability("t_t", probs.social_t)
}

/// Keeps each edge independently with its layer's probability. One uniform
/// draw per edge, in edge-list order.
pub fn percolate<R: Rng + ?Sized>(graph: &LayeredGraph, probs: LayerProbs, rng: &mut R) -> Result<LayeredGraph> {
    check_probs(&probs)?;
    Ok(graph.filter_edges(|e| rng.random::<f64>() < probs.get(e.layer)))
}

/// Percolation driven by caller-supplied uniforms, one per edge. Raising any
/// layer probability can only add edges for fixed uniforms.
pub fn percolate_with_uniforms(graph: &LayeredGraph, probs: LayerProbs, uniforms: &[f64]) -> Result<LayeredGraph> {
    check_probs(&probs)?;
    assert_eq!(uniforms.len(), graph.edges().len(), "one uniform per edge");
    let mut it = uniforms.iter();
    Ok(graph.filter_edges(|e| *it.next().unwrap() < probs.get(e.layer)))
}

/// Connected components of the union of all layers.
pub fn components(graph: &LayeredGraph) -> ComponentStats {
    let mut uf = UnionFind::new(graph.n());
    for e in graph.edges() {
        uf.union(e.u, e.v);
    }
    ComponentStats::from_sizes(graph.n(), uf.set_sizes())
}

/// `components(percolate(graph, probs, rng))` without materialising the
/// percolated graph; consumes the same draws and gives the same result.
pub fn percolated_components<R: Rng + ?Sized>(
    graph: &LayeredGraph,
    probs: LayerProbs,
    rng: &mut R,
) -> Result<ComponentStats> {
    check_probs(&probs)?;
    let mut uf = UnionFind::new(graph.n());
    for e in graph.edges() {
        if rng.random::<f64>() < probs.get(e.layer) {
            uf.union(e.u, e.v);
        }
    }
    Ok(ComponentStats::from_sizes(graph.n(), uf.set_sizes()))
}

/// Like [`percolated_components`] (same draws) but returns only a summary.
pub fn percolated_summary<R: Rng + ?Sized>(
    graph: &LayeredGraph,
    probs: LayerProbs,
    rng: &mut R,
) -> Result<ComponentSummary> {
    check_probs(&probs)?;
    let mut uf = UnionFind::new(graph.n());
    for e in graph.edges() {
        if rng.random::<f64>() < probs.get(e.layer) {
            uf.union(e.u, e.v);
        }
    }
    Ok(uf.summary())
}

/// Largest component, component count and `sum_j C_j^2` at one point of a
/// monotone percolation path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathPoint {
    pub n: usize,
    pub c1: usize,
    pub count: usize,
    pub sum_sq: u128,
}

impl PathPoint {
    pub fn avg_outbreak_size(&self) -> f64 {
        self.sum_sq as f64 / self.n as f64
    }

    pub fn epidemic_fraction(&self) -> f64 {
        self.c1 as f64 / self.n as f64
    }
}

/// Percolation at every point of a path of occupation probabilities that is
/// non-decreasing in each layer, from a single set of edge uniforms.
///
/// Draws one uniform per edge in edge order, exactly as
/// [`percolated_summary`] does, so point `k` equals
/// `percolated_summary(graph, path[k], rng)` run from the same rng state.
/// Each edge is added once, at the first point that occupies it.
pub fn monotone_path<R: Rng + ?Sized>(graph: &LayeredGraph, path: &[LayerProbs], rng: &mut R) -> Result<Vec<PathPoint>> {
    for p in path {
        check_probs(p)?;
    }
    for w in path.windows(2) {
        if Layer::ALL.iter().any(|&l| w[1].get(l) < w[0].get(l)) {
            return Err(Error::Parameter("percolation path must be non-decreasing in every layer".into()));
        }
    }
    let k = path.len();
    let per_layer: Vec<Vec<f64>> = Layer::ALL.iter().map(|&l| path.iter().map(|p| p.get(l)).collect()).collect();
    // first point with u < p, or k when never occupied
    let start: Vec<u32> = graph
        .edges()
        .iter()
        .map(|e| {
            let u: f64 = rng.random();
            per_layer[e.layer.index()].partition_point(|&p| p <= u) as u32
        })
        .collect();
    let mut offsets = vec![0usize; k + 2];
    for &s in &start {
        offsets[s as usize + 1] += 1;
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    let mut order = vec![0u32; start.len()];
    let mut fill = offsets.clone();
    for (i, &s) in start.iter().enumerate() {
        order[fill[s as usize]] = i as u32;
        fill[s as usize] += 1;
    }

    let n = graph.n();
    let mut uf = UnionFind::new(n);
    let mut cur = PathPoint { n, c1: usize::from(n > 0), count: n, sum_sq: n as u128 };
    let mut out = Vec::with_capacity(k);
    for step in 0..k {
        for &i in &order[offsets[step]..offsets[step + 1]] {
            let e = graph.edges()[i as usize];
            if let Some((a, b)) = uf.union_sizes(e.u, e.v) {
                cur.sum_sq += 2 * a as u128 * b as u128;
                cur.c1 = cur.c1.max(a + b);
                cur.count -= 1;
            }
        }
        out.push(cur);
    }
    Ok(out)
}
