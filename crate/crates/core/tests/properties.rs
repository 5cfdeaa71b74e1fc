#![allow(clippy::needless_range_loop)]

use fastmix::chains::{
    almost_mixing_weighting, continuous_time_weighting, perfect_mixing_schedule, schedule_worst_tv,
    uniform_max_degree_chain, TargetDistribution,
};
use fastmix::conductance::{
    cheeger_round, cut_matching, easy_side_certificate, edge_conductance_of_set,
    orient_by_embedding, sweep_cut, Embedding1D, Measure,
};
use fastmix::corpus::{self, rng};
use fastmix::graph::{bfs_tree, diameter, generate, Family, Graph, WeightedGraph};
use fastmix::io;
use fastmix::matching::{
    bipartite_max_matching, fractional_matching_number, greedy_matching, max_directed_matching,
    MatchingMode, WeightedEdge,
};
use fastmix::oracle::{
    best_gap_search, exact_conductance, exact_fractional_matching, exact_max_matching,
};
use fastmix::spectral::{
    canonical_paths_bound, chain_from_weighting, distance_profile, hitting_time_oracle,
    hitting_time_tree, lazify, mixing_time, shortest_path_system, spectral_gap, Metric, TimeMode,
};
use num_rational::Rational64;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::Rng;

const TOL: f64 = 1e-9;

fn ratio(r: Rational64) -> f64 {
    r.to_f64().unwrap()
}

fn small_graph(seed: u64, lo: usize, hi: usize) -> Graph {
    corpus::random_connected_sized(lo, hi, &mut rng(seed)).unwrap()
}

/// ν of the cut edges of `{f² > t}`.
fn cut_matching_number(g: &Graph, inside: &[bool]) -> usize {
    let pairs: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|&&(u, v)| inside[u] != inside[v])
        .map(|&(u, v)| if inside[u] { (u, v) } else { (v, u) })
        .collect();
    bipartite_max_matching(g.n(), g.n(), &pairs).len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bfs_depth_is_distance(seed in any::<u64>(), root_pick in any::<usize>()) {
        let g = small_graph(seed, 2, 30);
        let root = root_pick % g.n();
        let t = bfs_tree(&g, root, &vec![1.0; g.n()]).unwrap();
        let dist = g.bfs_distances(root);
        for x in 0..g.n() {
            prop_assert_eq!(Some(t.depth(x)), dist[x]);
            if x != root {
                prop_assert!(g.has_edge(x, t.parent(x)));
            }
        }
    }

    #[test]
    fn subtree_mass_weighted_by_depth(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 30, &mut r).unwrap();
        let mu = corpus::random_distribution(g.n(), &mut r).unwrap();
        let root = r.random_range(0..g.n());
        let t = bfs_tree(&g, root, mu.as_slice()).unwrap();
        let d = t.diameter() as f64;
        for x in 0..g.n() {
            let below: f64 = t
                .subtree_vertices(x)
                .into_iter()
                .filter(|&y| y != x)
                .map(|y| t.subtree_mass(y))
                .sum();
            prop_assert!(below <= t.subtree_mass(x) * d + TOL);
        }
    }

    #[test]
    fn sandwich(seed in any::<u64>()) {
        let g = small_graph(seed, 2, 9);
        let ups = exact_conductance(&g, Measure::Matching).unwrap().matching_cond;
        let psi = exact_conductance(&g, Measure::Vertex).unwrap().vertex_cond;
        prop_assert!(ups <= psi && psi <= ups * 4, "Υ* = {}, Ψ* = {}", ups, psi);
    }

    #[test]
    fn greedy_is_half_optimal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(2..=10);
        let edges = corpus::random_weighted_edges(n, 20, &mut r).unwrap();
        let greedy = greedy_matching(&edges, MatchingMode::Undirected);
        prop_assert!(greedy.is_valid(MatchingMode::Undirected));
        let best = exact_max_matching(&edges).unwrap().weight();
        prop_assert!(greedy.weight() >= best / 2.0 - TOL);
        prop_assert!(greedy.weight() <= best + TOL);
    }

    #[test]
    fn fractional_duality(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(2..=8);
        let edges = corpus::random_weighted_edges(n, 12, &mut r).unwrap();
        let fm = fractional_matching_number(n, &edges);
        prop_assert!((fm.value - fm.dual_value()).abs() < 1e-7);
        for e in &edges {
            prop_assert!(fm.dual[e.u] + fm.dual[e.v] >= e.weight - 1e-7);
        }
        let exact = exact_fractional_matching(n, &edges).unwrap();
        prop_assert_eq!(exact.value, exact.dual_value);
        prop_assert!((ratio(exact.value) - fm.value).abs() < 1e-7);
        let integral = exact_max_matching(&edges).unwrap().weight();
        prop_assert!(integral <= fm.value + TOL);
    }

    #[test]
    fn coarea_against_directed_matching(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 12, &mut r).unwrap();
        let f = corpus::random_feasible_embedding(&g, &mut r).unwrap().values;
        let dg = orient_by_embedding(&g, &f).unwrap();
        let nu = max_directed_matching(g.n(), &dg.arcs).weight();
        let mut levels: Vec<f64> = f.iter().map(|x| x * x).collect();
        levels.push(0.0);
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let mut integral = 0.0;
        for w in levels.windows(2) {
            let inside: Vec<bool> = f.iter().map(|x| x * x > w[0]).collect();
            integral += cut_matching_number(&g, &inside) as f64 * (w[1] - w[0]);
        }
        prop_assert!(integral <= 2.0 * nu + 1e-7 * (1.0 + nu), "{} > 2·{}", integral, nu);
    }

    #[test]
    fn sweep_guarantee(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 14, &mut r).unwrap();
        let emb = corpus::random_feasible_embedding(&g, &mut r).unwrap();
        let cert = sweep_cut(&g, &emb).unwrap();
        cert.validate(&g).unwrap();
        prop_assert!(cert.set.iter().all(|&x| emb.values[x] != 0.0));
        let bound = 8.0 * (2.0 * emb.value()).sqrt();
        prop_assert!(ratio(cert.matching_cond) <= bound + TOL);
    }

    #[test]
    fn cheeger_round_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 10, &mut r).unwrap();
        let raw = corpus::random_feasible_embedding(&g, &mut r).unwrap();
        let mean = raw.values.iter().sum::<f64>() / g.n() as f64;
        let centred: Vec<f64> = raw.values.iter().map(|f| f - mean).collect();
        prop_assume!(centred.iter().any(|f| f.abs() > 1e-9));
        let emb = Embedding1D::new(centred, raw.certificate.clone()).unwrap();
        let round = cheeger_round(&g, &emb).unwrap();
        let best = exact_conductance(&g, Measure::Matching).unwrap().matching_cond;
        prop_assert!(ratio(best) <= round.bound + TOL);
        prop_assert!(ratio(round.certificate.matching_cond) <= round.bound + TOL);
    }

    #[test]
    fn easy_side_is_feasible_and_small(seed in any::<u64>()) {
        let g = small_graph(seed, 2, 10);
        let cert = exact_conductance(&g, Measure::Matching).unwrap();
        let easy = easy_side_certificate(&g, &cert.set).unwrap();
        easy.embedding.check_feasible(&g).unwrap();
        prop_assert!(easy.embedding.values.iter().sum::<f64>().abs() < 1e-9);
        prop_assert!(easy.value <= cert.matching_cond * 2);
        prop_assert!((easy.embedding.value() - ratio(easy.value)).abs() < 1e-9);
        let round = cheeger_round(&g, &easy.embedding).unwrap();
        prop_assert!(ratio(cert.matching_cond) <= round.bound + TOL);
    }

    #[test]
    fn adjusted_edge_conductance(seed in any::<u64>(), mask in any::<u32>()) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 16, &mut r).unwrap();
        let wg = corpus::random_weighting(&g, &mut r).unwrap();
        let set: Vec<usize> = (0..g.n()).filter(|&x| mask >> x & 1 == 1).collect();
        prop_assume!(!set.is_empty() && set.len() < g.n());
        let inside: f64 = set.iter().map(|&x| wg.vertex_weight(x)).sum();
        prop_assume!(2.0 * inside <= wg.total_weight());
        let ec = edge_conductance_of_set(&wg, &set).unwrap();
        let adj = ec.adjusted.unwrap();
        prop_assert!(ec.plain <= adj + TOL);
        prop_assert!(adj <= 2.0 * ec.plain + TOL);
    }

    #[test]
    fn cut_matching_is_a_matching(seed in any::<u64>(), mask in any::<u32>()) {
        let g = small_graph(seed, 2, 20);
        let inside: Vec<bool> = (0..g.n()).map(|x| mask >> x & 1 == 1).collect();
        let m = cut_matching(&g, &inside);
        prop_assert_eq!(m.len(), cut_matching_number(&g, &inside));
        let mut used = vec![false; g.n()];
        for &(a, b) in &m {
            prop_assert!(inside[a] && !inside[b] && g.has_edge(a, b));
            prop_assert!(!used[a] && !used[b]);
            used[a] = true;
            used[b] = true;
        }
    }

    #[test]
    fn canonical_paths_lower_bound_gap(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 14, &mut r).unwrap();
        let wg = corpus::random_weighting(&g, &mut r).unwrap();
        let paths = shortest_path_system(&g).unwrap();
        let bound = canonical_paths_bound(&wg, &paths, TimeMode::Discrete).unwrap();
        let gap = spectral_gap(&chain_from_weighting(&wg).unwrap()).unwrap().gap;
        prop_assert!(bound <= gap + 1e-9, "bound {} > gap {}", bound, gap);
    }

    #[test]
    fn lazification_halves_gap(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 14, &mut r).unwrap();
        let wg = corpus::random_weighting(&g, &mut r).unwrap();
        let p = chain_from_weighting(&wg).unwrap();
        let lazy = lazify(&p);
        prop_assert!(lazy.is_lazy());
        let eig = spectral_gap(&p).unwrap();
        let lazy_gap = spectral_gap(&lazy).unwrap().gap;
        prop_assert!((lazy_gap - eig.gap / 2.0).abs() < 1e-9);
    }

    #[test]
    fn mixing_time_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 12, &mut r).unwrap();
        let wg = corpus::random_weighting(&g, &mut r).unwrap();
        let p = lazify(&chain_from_weighting(&wg).unwrap());
        let gap = spectral_gap(&p).unwrap().gap;
        let pi_min: f64 = p.pi().iter().copied().fold(f64::INFINITY, f64::min);
        let t = mixing_time(&p, 0.25, Metric::Linf).unwrap().time().unwrap();
        prop_assert!(t as f64 <= (16.0 / pi_min).ln() / gap + 1.0);
        let profile = distance_profile(&p, t + 5, Metric::Linf);
        for w in profile.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        prop_assert!(profile[t] <= 0.25);
    }

    #[test]
    fn tree_hitting_times(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(2..=20);
        let wg = corpus::random_weighted_tree(n, &mut r).unwrap();
        let root = r.random_range(0..n);
        let tree = bfs_tree(wg.graph(), root, &vec![1.0; n]).unwrap();
        let oracle = hitting_time_oracle(&wg, root).unwrap();
        for x in 0..n {
            let h = hitting_time_tree(&wg, &tree, x).unwrap();
            prop_assert!((h - oracle[x]).abs() <= 1e-8 * oracle[x].max(1.0));
        }
    }

    #[test]
    fn constructions_on_random_targets(seed in any::<u64>(), eps_pick in 0usize..3) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 16, &mut r).unwrap();
        let pi = corpus::random_distribution(g.n(), &mut r).unwrap();
        let eps = [0.5, 0.1, 0.01][eps_pick];
        let am = almost_mixing_weighting(&g, &pi, eps, None, None).unwrap();
        prop_assert!(am.check().is_empty(), "{:?}", am.check());
        let ct = continuous_time_weighting(&g, None).unwrap();
        prop_assert!(ct.check().is_empty(), "{:?}", ct.check());
        let s = perfect_mixing_schedule(&g, &pi, None).unwrap();
        s.check_support(&g).unwrap();
        prop_assert_eq!(s.len(), 2 * diameter(&g).unwrap());
        prop_assert!(schedule_worst_tv(&s).unwrap() <= 1e-9);
    }

    #[test]
    fn uniform_lazy_base(seed in any::<u64>()) {
        let g = small_graph(seed, 2, 16);
        let p = uniform_max_degree_chain(&g).unwrap();
        prop_assert!(p.is_lazy());
        let base = fastmix::chains::base_weighting_from_chain(&p).unwrap();
        let pi = TargetDistribution::uniform(g.n()).unwrap();
        let am = almost_mixing_weighting(&g, &pi, 0.1, Some(&base), None).unwrap();
        prop_assert!(am.check().is_empty(), "{:?}", am.check());
    }

    #[test]
    fn gap_search_below_conductance(seed in any::<u64>()) {
        let g = small_graph(seed, 2, 5);
        let pi = TargetDistribution::uniform(g.n()).unwrap();
        let search = best_gap_search(&g, &pi, 40, seed).unwrap();
        prop_assert!(search.chain.is_lazy());
        search.chain.check_support(&g).unwrap();
        let cert = exact_conductance(&g, Measure::Matching).unwrap();
        let easy = easy_side_certificate(&g, &cert.set).unwrap();
        prop_assert!(search.gap <= ratio(easy.value) + 1e-9);
        prop_assert!(search.gap <= 2.0 * ratio(cert.matching_cond) + 1e-9);
    }

    #[test]
    fn bipartite_matcher_is_exact(seed in any::<u64>(), mask in any::<u32>()) {
        let g = small_graph(seed, 2, 9);
        let inside: Vec<bool> = (0..g.n()).map(|x| mask >> x & 1 == 1).collect();
        let cut: Vec<WeightedEdge> = g
            .edges()
            .iter()
            .filter(|&&(u, v)| inside[u] != inside[v])
            .map(|&(u, v)| WeightedEdge::new(u, v, 1.0))
            .collect();
        prop_assume!(cut.len() <= 20);
        let exact = exact_max_matching(&cut).unwrap().weight();
        prop_assert_eq!(cut_matching_number(&g, &inside) as f64, exact);
    }

    #[test]
    fn format_round_trips(seed in any::<u64>(), num in -1000i64..1000, den in 1i64..1000) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 20, &mut r).unwrap();
        prop_assert_eq!(&Graph::from_edge_list(&g.to_edge_list()).unwrap(), &g);
        prop_assert_eq!(&Graph::parse_canonical_string(&g.canonical_string()).unwrap(), &g);
        let wg = corpus::random_weighting(&g, &mut r).unwrap();
        let back = io::weighting_from_tsv(&io::weighting_to_tsv(&wg)).unwrap();
        prop_assert_eq!(back.n(), wg.n());
        for x in 0..g.n() {
            for y in 0..g.n() {
                prop_assert_eq!(back.weight(x, y), wg.weight(x, y));
            }
        }
        let p = chain_from_weighting(&wg).unwrap();
        let q = io::chain_from_tsv(&io::chain_to_tsv(&p)).unwrap();
        prop_assert_eq!(q.pi(), p.pi());
        for x in 0..g.n() {
            for y in 0..g.n() {
                prop_assert_eq!(q.get(x, y), p.get(x, y));
            }
        }
        let v = Rational64::new(num, den);
        prop_assert_eq!(io::parse_rational(&io::format_rational(v)).unwrap(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn constructions_are_root_independent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = corpus::random_connected_sized(2, 12, &mut r).unwrap();
        let pi = corpus::random_distribution(g.n(), &mut r).unwrap();
        for root in 0..g.n() {
            let am = almost_mixing_weighting(&g, &pi, 0.1, None, Some(root)).unwrap();
            prop_assert!(am.check().is_empty(), "root {}: {:?}", root, am.check());
            let ct = continuous_time_weighting(&g, Some(root)).unwrap();
            prop_assert!(ct.check().is_empty(), "root {}: {:?}", root, ct.check());
            let s = perfect_mixing_schedule(&g, &pi, Some(root)).unwrap();
            prop_assert!(schedule_worst_tv(&s).unwrap() <= 1e-9);
        }
    }
}

#[test]
fn family_diameters() {
    for n in 2..12 {
        let d = generate(Family::Dumbbell(n)).unwrap();
        assert_eq!(diameter(&d).unwrap(), 4, "dumbbell {n}");
    }
    for depth in 1..8 {
        let t = generate(Family::BinaryTree { depth }).unwrap();
        assert_eq!(diameter(&t).unwrap(), 2 * (depth - 1), "depth {depth}");
    }
}

#[test]
fn weighted_graph_measure_sums_to_one() {
    let g = generate(Family::Cycle(7)).unwrap();
    let wg = WeightedGraph::unit(g);
    assert!((wg.measure().iter().sum::<f64>() - 1.0).abs() < 1e-12);
}
