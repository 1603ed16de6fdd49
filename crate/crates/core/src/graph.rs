//! Layered (multiplex) graph on dense node ids.

use std::fmt;
use std::io::{self, Write};

/// Edge layer. Social layers only join members of the matching network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    /// The physical network W, defined on every node.
    Physical,
    /// The first online social network F.
    SocialF,
    /// The second online social network T.
    SocialT,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::Physical, Layer::SocialF, Layer::SocialT];

    pub fn tag(self) -> char {
        match self {
            Layer::Physical => 'w',
            Layer::SocialF => 'f',
            Layer::SocialT => 't',
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "w" => Some(Layer::Physical),
            "f" => Some(Layer::SocialF),
            "t" => Some(Layer::SocialT),
            _ => None,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Layer::Physical => 0,
            Layer::SocialF => 1,
            Layer::SocialT => 2,
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub layer: Layer,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, layer: Layer) -> Self {
        Self { u, v, layer }
    }
}

/// Per-layer probabilities, used for bond occupation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerProbs {
    pub physical: f64,
    pub social_f: f64,
    pub social_t: f64,
}

impl LayerProbs {
    pub fn new(physical: f64, social_f: f64, social_t: f64) -> Self {
        Self { physical, social_f, social_t }
    }

    pub fn uniform(p: f64) -> Self {
        Self::new(p, p, p)
    }

    pub fn get(&self, layer: Layer) -> f64 {
        match layer {
            Layer::Physical => self.physical,
            Layer::SocialF => self.social_f,
            Layer::SocialT => self.social_t,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LayeredGraph {
    n: usize,
    edges: Vec<Edge>,
    membership_f: Vec<NodeId>,
    membership_t: Vec<NodeId>,
}

impl LayeredGraph {
    /// Assembles a graph. Membership lists must be sorted and unique; edges
    /// are trusted to satisfy the layer invariants (see [`Self::validate`]).
    pub fn from_parts(n: usize, edges: Vec<Edge>, membership_f: Vec<NodeId>, membership_t: Vec<NodeId>) -> Self {
        debug_assert!(membership_f.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(membership_t.windows(2).all(|w| w[0] < w[1]));
        Self { n, edges, membership_f, membership_t }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn membership_f(&self) -> &[NodeId] {
        &self.membership_f
    }

    pub fn membership_t(&self) -> &[NodeId] {
        &self.membership_t
    }

    pub fn edge_count(&self, layer: Layer) -> usize {
        self.edges.iter().filter(|e| e.layer == layer).count()
    }

    /// Keeps only the edges for which `keep` returns true.
    pub fn filter_edges(&self, mut keep: impl FnMut(&Edge) -> bool) -> LayeredGraph {
        LayeredGraph {
            n: self.n,
            edges: self.edges.iter().copied().filter(|e| keep(e)).collect(),
            membership_f: self.membership_f.clone(),
            membership_t: self.membership_t.clone(),
        }
    }

    /// Checks the structural invariants: endpoints in range, no self-loops,
    /// no repeated `(u, v, layer)` triple, and social edges only between
    /// members of their network. Returns a description of the first violation.
    pub fn validate(&self) -> Result<(), String> {
        let mut in_f = vec![false; self.n];
        let mut in_t = vec![false; self.n];
        for (set, flags) in [(&self.membership_f, &mut in_f), (&self.membership_t, &mut in_t)] {
            for &m in set.iter() {
                let m = m as usize;
                if m >= self.n {
                    return Err(format!("member {m} out of range"));
                }
                flags[m] = true;
            }
        }
        let mut seen = std::collections::HashSet::with_capacity(self.edges.len());
        for e in &self.edges {
            let (u, v) = (e.u as usize, e.v as usize);
            if u >= self.n || v >= self.n {
                return Err(format!("edge {u}-{v} out of range"));
            }
            if u == v {
                return Err(format!("self-loop at {u}"));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v), e.layer)) {
                return Err(format!("duplicate edge {u}-{v} in layer {}", e.layer));
            }
            let ok = match e.layer {
                Layer::Physical => true,
                Layer::SocialF => in_f[u] && in_f[v],
                Layer::SocialT => in_t[u] && in_t[v],
            };
            if !ok {
                return Err(format!("layer-{} edge {u}-{v} leaves its membership set", e.layer));
            }
        }
        Ok(())
    }

    /// Per-node degree in one layer.
    pub fn degrees(&self, layer: Layer) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for e in self.edges.iter().filter(|e| e.layer == layer) {
            deg[e.u as usize] += 1;
            deg[e.v as usize] += 1;
        }
        deg
    }

    /// Text edge list: a `n=<n> alpha=<alpha>` header, then `u v layer` per line.
    pub fn write_edge_list<W: Write>(&self, alpha: f64, out: &mut W) -> io::Result<()> {
        writeln!(out, "n={} alpha={}", self.n, alpha)?;
        for e in &self.edges {
            writeln!(out, "{} {} {}", e.u, e.v, e.layer)?;
        }
        Ok(())
    }
}
