use std::collections::VecDeque;

use cascade_core::graph::{Edge, Layer, LayerProbs, LayeredGraph};
use cascade_core::kernel::{er_two_type_kernel, survival_probability, triple_network_kernel};
use cascade_core::netgen::{config_model_coupled, er_coupled, CoupledSpec};
use cascade_core::percolate::{components, percolated_components};
use cascade_core::theory::{er_epidemic_size, er_threshold, Overlay};
use cascade_core::DegreeDistribution;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

fn bfs_sizes(g: &LayeredGraph) -> Vec<usize> {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u as usize].push(e.v as usize);
        adj[e.v as usize].push(e.u as usize);
    }
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        let mut size = 0;
        while let Some(u) = q.pop_front() {
            size += 1;
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

fn random_small_graph(rng: &mut Pcg64Mcg) -> LayeredGraph {
    let n = rng.random_range(1..=12);
    let members: Vec<u32> = (0..n as u32).filter(|_| rng.random::<bool>()).collect();
    let density: f64 = rng.random();
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.random::<f64>() < density * 0.5 {
                edges.push(Edge::new(u, v, Layer::Physical));
            }
            if members.contains(&u) && members.contains(&v) && rng.random::<f64>() < density * 0.5 {
                edges.push(Edge::new(u, v, Layer::SocialF));
            }
        }
    }
    LayeredGraph::from_parts(n, edges, members, Vec::new())
}

#[test]
fn union_find_matches_bfs_on_small_graphs() {
    let mut rng = Pcg64Mcg::seed_from_u64(2024);
    for _ in 0..500 {
        let g = random_small_graph(&mut rng);
        assert!(g.validate().is_ok());
        let s = components(&g);
        assert_eq!(s.sizes, bfs_sizes(&g));
        let sq: usize = s.sizes.iter().map(|c| c * c).sum();
        assert!((s.avg_outbreak_size() - sq as f64 / g.n() as f64).abs() < 1e-12);
    }
}

#[test]
fn generated_graphs_are_valid() {
    let mut rng = Pcg64Mcg::seed_from_u64(9);
    let g = er_coupled(20_000, 0.4, 1.3, 2.1, &mut rng).unwrap();
    g.validate().unwrap();
    let pl = DegreeDistribution::powerlaw_cutoff(2.5, 10.0).unwrap();
    let spec = CoupledSpec::new(20_000, 0.4, pl.clone(), pl, 1.0, 1.0).unwrap();
    let g = config_model_coupled(&spec, &mut rng).unwrap();
    g.validate().unwrap();
    let s = percolated_components(&g, LayerProbs::new(0.5, 0.5, 0.0), &mut rng).unwrap();
    assert_eq!(s.sizes.iter().sum::<usize>(), g.n());
}

#[test]
fn analytic_routes_agree_on_grid() {
    for i in 0..10 {
        for j in 0..10 {
            let alpha = 0.1 + 0.09 * i as f64;
            let strength = 1.0 + 0.15 * j as f64;
            let (a, b) = (strength, 0.8 * strength);
            if er_threshold(alpha, a, b).unwrap() <= 1.0 {
                continue;
            }
            let (f, w) = (DegreeDistribution::poisson(a).unwrap(), DegreeDistribution::poisson(b).unwrap());
            let gf = Overlay::new(alpha, &f, &w, 1.0, 1.0).unwrap().epidemic_size().unwrap();
            let er = er_epidemic_size(alpha, a, b).unwrap().size;
            let kr = survival_probability(&er_two_type_kernel(alpha, b, a).unwrap()).unwrap().rho;
            assert!((gf - er).abs() < 1e-6, "alpha {alpha} s {strength}");
            assert!((kr - er).abs() < 1e-8);
            let tr = survival_probability(&triple_network_kernel(alpha, 0.5, b, a, 0.0).unwrap()).unwrap().rho;
            assert!((tr - er).abs() < 1e-8);
        }
    }
}
