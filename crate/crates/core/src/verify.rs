//! Seeded invariant suites and golden-value replay.

use std::path::Path;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::chains::{
    almost_mixing_weighting, continuous_time_weighting, hitting_time_tree_exact,
    perfect_mixing_schedule, schedule_worst_tv, TargetDistribution,
};
use crate::conductance::{easy_side_certificate, sweep_cut, Measure};
use crate::corpus::{self, family_instances};
use crate::error::{Error, Result};
use crate::graph::{bfs_tree, generate, Family, Graph};
use crate::io::{read_golden_dir, write_golden, Golden};
use crate::matching::{bipartite_max_matching, max_directed_matching, WeightedEdge};
use crate::oracle::{
    best_gap_search, connected_graphs, exact_conductance, exact_directed_matching,
    exact_fractional_matching, exact_max_matching,
};
use crate::spectral::{chain_from_weighting, spectral_gap, tree_canonical_bound};

const SLACK: f64 = 1e-9;

/// Outcome of one suite: how many instances were checked and what failed.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    /// The inequality the suite checks.
    pub claim: &'static str,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

type Suite = fn(u64) -> Result<SuiteOutcome>;

pub const SUITES: [(&str, Suite); 8] = [
    ("sandwich", sandwich),
    ("directed-matching", directed_matching),
    ("sweep", sweep),
    ("easy-side", easy_side),
    ("almost-mixing", almost_mixing),
    ("continuous-time", continuous_time),
    ("perfect-mixing", perfect_mixing),
    ("canonical-paths", canonical_paths),
];

/// Runs every suite concurrently; results keep the order of [`SUITES`].
pub fn run_suites(seed: u64) -> Result<Vec<SuiteOutcome>> {
    SUITES.par_iter().map(|(_, suite)| suite(seed)).collect()
}

fn outcome(name: &'static str, claim: &'static str, results: Vec<Option<String>>) -> SuiteOutcome {
    SuiteOutcome {
        name,
        claim,
        checked: results.len(),
        violations: results.into_iter().flatten().collect(),
    }
}

fn small_corpus(seed: u64, random: usize) -> Result<Vec<Graph>> {
    let mut graphs = Vec::new();
    for n in 2..=6 {
        graphs.extend(connected_graphs(n)?);
    }
    let mut rng = corpus::rng(seed);
    for _ in 0..random {
        graphs.push(corpus::random_connected_sized(2, 10, &mut rng)?);
    }
    Ok(graphs)
}

fn ratio(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn sandwich(seed: u64) -> Result<SuiteOutcome> {
    let results = small_corpus(seed, 100)?
        .par_iter()
        .map(|g| {
            let ups = exact_conductance(g, Measure::Matching)?.matching_cond;
            let psi = exact_conductance(g, Measure::Vertex)?.vertex_cond;
            Ok((ups > psi || psi > ups * 4)
                .then(|| format!("{}: Υ* = {ups}, Ψ* = {psi}", g.canonical_string())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(outcome("sandwich", "Υ* ≤ Ψ* ≤ 4Υ*", results))
}

fn directed_matching(seed: u64) -> Result<SuiteOutcome> {
    let mut rng = corpus::rng(seed ^ 0x5eed_0002);
    let mut results = Vec::new();
    for _ in 0..100 {
        let n = rand::Rng::random_range(&mut rng, 2..=10);
        let arcs: Vec<WeightedEdge> = corpus::random_weighted_edges(n, 20, &mut rng)?
            .into_iter()
            .map(|e| {
                if rand::Rng::random_bool(&mut rng, 0.5) {
                    WeightedEdge::new(e.v, e.u, e.weight)
                } else {
                    e
                }
            })
            .collect();
        let undirected: Vec<WeightedEdge> = arcs
            .iter()
            .map(|a| WeightedEdge::new(a.u.min(a.v), a.u.max(a.v), a.weight))
            .collect();
        let directed = exact_directed_matching(&arcs)?.weight();
        let fast = max_directed_matching(n, &arcs).weight();
        let plain = exact_max_matching(&undirected)?.weight();
        let mut msg = None;
        if directed > 4.0 * plain + SLACK {
            msg = Some(format!(
                "ν(→G) = {directed} exceeds 4ν(G) = {}",
                4.0 * plain
            ));
        } else if (fast - directed).abs() > SLACK {
            msg = Some(format!(
                "assignment matcher {fast} disagrees with enumeration {directed}"
            ));
        }
        results.push(msg);
    }
    // Unit cut instances: augmenting paths against enumeration.
    for g in small_corpus(seed, 0)?.iter().filter(|g| g.n() <= 6) {
        let n = g.n();
        let half: Vec<bool> = (0..n).map(|v| v < n / 2).collect();
        let cut: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .filter(|&&(u, v)| half[u] != half[v])
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        let aug = bipartite_max_matching(n, n, &cut).len() as f64;
        let unit: Vec<WeightedEdge> = cut
            .iter()
            .map(|&(u, v)| WeightedEdge::new(u, v, 1.0))
            .collect();
        let exact = exact_max_matching(&unit)?.weight();
        results.push(((aug - exact).abs() > SLACK).then(|| {
            format!(
                "{}: augmenting {aug} vs exact {exact}",
                g.canonical_string()
            )
        }));
    }
    Ok(outcome("directed-matching", "ν(→G) ≤ 4ν(G)", results))
}

fn sweep(seed: u64) -> Result<SuiteOutcome> {
    let mut rng = corpus::rng(seed ^ 0x5eed_0003);
    let mut results = Vec::new();
    for _ in 0..100 {
        let g = corpus::random_connected_sized(2, 12, &mut rng)?;
        let emb = corpus::random_feasible_embedding(&g, &mut rng)?;
        let cert = sweep_cut(&g, &emb)?;
        let bound = 8.0 * (2.0 * emb.value()).sqrt();
        let got = ratio(cert.matching_cond);
        results.push(
            (got > bound + SLACK).then(|| format!("{}: Υ = {got} > {bound}", g.canonical_string())),
        );
    }
    Ok(outcome("sweep", "Υ(sweep set) ≤ 8√(2λ)", results))
}

fn easy_side(seed: u64) -> Result<SuiteOutcome> {
    let results = small_corpus(seed, 40)?
        .par_iter()
        .map(|g| {
            let cert = exact_conductance(g, Measure::Matching)?;
            let easy = easy_side_certificate(g, &cert.set)?;
            easy.embedding.check_feasible(g)?;
            Ok((easy.value > cert.matching_cond * 2).then(|| {
                format!(
                    "{}: value {} exceeds 2Υ* = {}",
                    g.canonical_string(),
                    easy.value,
                    cert.matching_cond * 2
                )
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(outcome("easy-side", "easy-side value ≤ 2Υ*", results))
}

fn almost_mixing(seed: u64) -> Result<SuiteOutcome> {
    let mut rng = corpus::rng(seed ^ 0x5eed_0005);
    let mut instances = family_instances(60);
    for _ in 0..10 {
        instances.push((
            "random".into(),
            corpus::random_connected_sized(2, 30, &mut rng)?,
        ));
    }
    let mut jobs: Vec<(String, Graph, TargetDistribution, f64)> = Vec::new();
    for (name, g) in instances {
        let pi = corpus::random_distribution(g.n(), &mut rng)?;
        for eps in [0.5, 0.1, 0.01] {
            jobs.push((name.clone(), g.clone(), pi.clone(), eps));
        }
    }
    let results = jobs
        .par_iter()
        .map(|(name, g, pi, eps)| {
            let report = almost_mixing_weighting(g, pi, *eps, None, None)?;
            let bad = report.check();
            Ok((!bad.is_empty()).then(|| format!("{name}, ε = {eps}: {}", bad.join("; "))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(outcome(
        "almost-mixing",
        "gap(Q') ≥ ε/(48 diam²), min π_w/π ≥ 1/(1+ε)",
        results,
    ))
}

fn continuous_time(seed: u64) -> Result<SuiteOutcome> {
    let mut rng = corpus::rng(seed ^ 0x5eed_0006);
    let mut instances = family_instances(60);
    for _ in 0..10 {
        instances.push((
            "random".into(),
            corpus::random_connected_sized(2, 30, &mut rng)?,
        ));
    }
    let results = instances
        .par_iter()
        .map(|(name, g)| {
            let report = continuous_time_weighting(g, None)?;
            let bad = report.check();
            Ok((!bad.is_empty()).then(|| format!("{name}: {}", bad.join("; "))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(outcome(
        "continuous-time",
        "λ₂ ≥ 1/(16 diam²), E[τ_root] ≤ 8 diam², average rate ≤ 1",
        results,
    ))
}

fn perfect_mixing(seed: u64) -> Result<SuiteOutcome> {
    let mut rng = corpus::rng(seed ^ 0x5eed_0007);
    let mut results = Vec::new();
    for _ in 0..30 {
        let g = corpus::random_connected_sized(1, 30, &mut rng)?;
        let pi = corpus::random_distribution(g.n(), &mut rng)?;
        let s = perfect_mixing_schedule(&g, &pi, None)?;
        let mut msg = s.check_support(&g).err().map(|e| e.to_string());
        let tv = schedule_worst_tv(&s)?;
        if tv > 1e-12 || s.len() != 2 * s.diam {
            msg = Some(format!(
                "{}: TV {tv:e} after {} steps",
                g.canonical_string(),
                s.len()
            ));
        }
        results.push(msg);
    }
    Ok(outcome(
        "perfect-mixing",
        "TV(μ_{2 diam}, π) = 0 from every start",
        results,
    ))
}

fn canonical_paths(seed: u64) -> Result<SuiteOutcome> {
    let mut rng = corpus::rng(seed ^ 0x5eed_0008);
    let mut results = Vec::new();
    for _ in 0..30 {
        let n = rand::Rng::random_range(&mut rng, 2..=25);
        let wg = corpus::random_weighted_tree(n, &mut rng)?;
        let bound = tree_canonical_bound(&wg)?.bound;
        let gap = spectral_gap(&chain_from_weighting(&wg)?)?.gap;
        results.push((bound > gap + SLACK).then(|| {
            format!(
                "{}: bound {bound} > gap {gap}",
                wg.graph().canonical_string()
            )
        }));
    }
    for g in small_corpus(seed, 0)?.iter().filter(|g| g.n() <= 4) {
        let pi = TargetDistribution::uniform(g.n())?;
        let found = best_gap_search(g, &pi, 40, seed)?.gap;
        let ups = ratio(exact_conductance(g, Measure::Matching)?.matching_cond);
        results.push(
            (found > 2.0 * ups + SLACK)
                .then(|| format!("{}: searched gap {found} > 2Υ*", g.canonical_string())),
        );
    }
    Ok(outcome(
        "canonical-paths",
        "canonical-path bounds ≤ spectral gap",
        results,
    ))
}

/// Quantities with exact values stored as golden files.
pub const GOLDEN_QUANTITIES: [&str; 6] = [
    "edge_conductance",
    "vertex_conductance",
    "matching_conductance",
    "max_matching",
    "fractional_matching",
    "max_hitting_time",
];

pub fn golden_value(g: &Graph, quantity: &str) -> Result<Rational64> {
    let unit = || -> Vec<WeightedEdge> {
        g.edges()
            .iter()
            .map(|&(u, v)| WeightedEdge::new(u, v, 1.0))
            .collect()
    };
    match quantity {
        "edge_conductance" => Ok(exact_conductance(g, Measure::Edge)?.edge_cond),
        "vertex_conductance" => Ok(exact_conductance(g, Measure::Vertex)?.vertex_cond),
        "matching_conductance" => Ok(exact_conductance(g, Measure::Matching)?.matching_cond),
        "max_matching" => Ok(Rational64::from_integer(
            exact_max_matching(&unit())?.len() as i64
        )),
        "fractional_matching" => Ok(exact_fractional_matching(g.n(), &unit())?.value),
        "max_hitting_time" => {
            // Root 0, uniform measure.
            let tree = bfs_tree(g, 0, &vec![1.0 / g.n() as f64; g.n()])?;
            Ok((0..g.n())
                .map(|x| hitting_time_tree_exact(&tree, x))
                .max()
                .unwrap_or_default())
        }
        other => Err(Error::Argument(format!(
            "unknown golden quantity {other:?}"
        ))),
    }
}

/// The graphs whose golden values ship with the crate.
pub fn golden_graphs() -> Vec<(&'static str, Graph)> {
    let fams = [
        ("k2", Family::Path(2)),
        ("p3", Family::Path(3)),
        ("star4", Family::Star(4)),
        ("c4", Family::Cycle(4)),
        ("c5", Family::Cycle(5)),
        ("c6", Family::Cycle(6)),
        ("dumbbell3", Family::Dumbbell(3)),
        ("clique_source_4_3", Family::CliqueSource { n: 4, k: 3 }),
    ];
    fams.into_iter()
        .map(|(name, f)| {
            (
                name,
                generate(f).expect("fixed family parameters are valid"),
            )
        })
        .collect()
}

/// Rewrites every golden file in `dir`.
pub fn regenerate_golden(dir: &Path) -> Result<usize> {
    std::fs::create_dir_all(dir)?;
    let mut count = 0;
    for (name, g) in golden_graphs() {
        for q in GOLDEN_QUANTITIES {
            if q == "fractional_matching" && g.m() > crate::oracle::FRACTIONAL_EDGE_LIMIT {
                continue;
            }
            let golden = Golden::new(&g, q, golden_value(&g, q)?);
            write_golden(&dir.join(format!("{name}.{q}.json")), &golden)?;
            count += 1;
        }
    }
    Ok(count)
}

/// Golden files that no longer match a fresh computation. Unreadable or
/// malformed files are errors.
pub fn check_golden(dir: &Path) -> Result<(usize, Vec<String>)> {
    let files = read_golden_dir(dir)?;
    if files.is_empty() {
        return Err(Error::Precondition(format!(
            "no golden files in {}",
            dir.display()
        )));
    }
    let mut mismatches = Vec::new();
    for (path, golden) in &files {
        let g = Graph::parse_canonical_string(&golden.graph)?;
        let want = golden.parsed_value()?;
        let got = golden_value(&g, &golden.quantity)?;
        if got != want {
            mismatches.push(format!("{}: stored {want}, computed {got}", path.display()));
        }
    }
    Ok((files.len(), mismatches))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_values_of_small_graphs() {
        let p3 = generate(Family::Path(3)).unwrap();
        assert_eq!(
            golden_value(&p3, "max_hitting_time").unwrap(),
            Rational64::from_integer(8)
        );
        let k2 = generate(Family::Path(2)).unwrap();
        assert_eq!(
            golden_value(&k2, "edge_conductance").unwrap(),
            Rational64::from_integer(1)
        );
        assert!(golden_value(&k2, "nonsense").is_err());
    }

    #[test]
    fn golden_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let count = regenerate_golden(dir.path()).unwrap();
        let (checked, bad) = check_golden(dir.path()).unwrap();
        assert_eq!(checked, count);
        assert!(bad.is_empty());
        let empty = tempfile::tempdir().unwrap();
        assert!(check_golden(empty.path()).is_err());
    }

    #[test]
    fn fast_suites_pass() {
        for suite in [sweep as Suite, perfect_mixing, canonical_paths] {
            let out = suite(0).unwrap();
            assert!(out.passed(), "{}: {:?}", out.name, out.violations);
        }
    }
}
