//! File formats: edge lists, weighting TSV, chain matrix TSV, schedule
//! directories, target distributions and golden values.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::chains::{ChainSchedule, TargetDistribution};
use crate::error::{Error, Result};
use crate::graph::{Graph, WeightedGraph};
use crate::linalg::DenseMatrix;
use crate::spectral::{StochasticMatrix, TransitionMatrix};

pub fn read_graph(path: &Path) -> Result<Graph> {
    Graph::from_edge_list(&fs::read_to_string(path)?)
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    Ok(fs::write(path, g.to_edge_list())?)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| parse_err(line, format!("malformed number {tok:?}")))
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("malformed integer {tok:?}")))
}

/// Significant lines with their 1-based numbers, comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// `# vertices N` header, then `u v weight` per edge and `u u weight` per
/// loop. Zero-weight loops are omitted.
pub fn weighting_to_tsv(wg: &WeightedGraph) -> String {
    let mut out = format!("# vertices {}\n", wg.n());
    for (&(u, v), w) in wg.graph().edges().iter().zip(wg.edge_weights()) {
        let _ = writeln!(out, "{u}\t{v}\t{w}");
    }
    for (x, &w) in wg.loop_weights().iter().enumerate() {
        if w != 0.0 {
            let _ = writeln!(out, "{x}\t{x}\t{w}");
        }
    }
    out
}

pub fn weighting_from_tsv(text: &str) -> Result<WeightedGraph> {
    let mut n = None;
    for (i, raw) in text.lines().enumerate() {
        if let Some(rest) = raw.trim().strip_prefix("# vertices") {
            n = Some(parse_usize(rest.trim(), i + 1)?);
            break;
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "missing '# vertices N' header"))?;
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut loops = vec![0.0; n];
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(line, "expected 'u v weight'"));
        }
        let u = parse_usize(toks[0], line)?;
        let v = parse_usize(toks[1], line)?;
        let w = parse_f64(toks[2], line)?;
        if u >= n || v >= n {
            return Err(parse_err(line, format!("vertex outside 0..{n}")));
        }
        if u == v {
            loops[u] += w;
        } else {
            edges.push((u.min(v), u.max(v), w));
        }
    }
    edges.sort_by_key(|&(u, v, _)| (u, v));
    if let Some(pair) = edges
        .windows(2)
        .find(|p| (p[0].0, p[0].1) == (p[1].0, p[1].1))
    {
        return Err(parse_err(
            0,
            format!("edge ({}, {}) listed twice", pair[0].0, pair[0].1),
        ));
    }
    let graph = Graph::new(n, edges.iter().map(|&(u, v, _)| (u, v)))?;
    weights.extend(edges.iter().map(|e| e.2));
    WeightedGraph::new(graph, weights, loops)
}

/// Header `n π(0) … π(n-1)` then one row per state.
pub fn matrix_to_tsv(m: &DenseMatrix, pi: &[f64]) -> String {
    let mut out = m.n().to_string();
    for p in pi {
        let _ = write!(out, "\t{p}");
    }
    out.push('\n');
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

pub fn matrix_from_tsv(text: &str) -> Result<(DenseMatrix, Vec<f64>)> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty matrix file"))?;
    let mut toks = header.split_whitespace();
    let n = parse_usize(toks.next().unwrap_or(""), line)?;
    let pi = toks
        .map(|t| parse_f64(t, line))
        .collect::<Result<Vec<_>>>()?;
    if pi.len() != n {
        return Err(parse_err(
            line,
            format!("header has {} probabilities, expected {n}", pi.len()),
        ));
    }
    let mut rows = Vec::with_capacity(n);
    for (line, l) in lines {
        let row = l
            .split_whitespace()
            .map(|t| parse_f64(t, line))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(parse_err(
                line,
                format!("row has {} entries, expected {n}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(parse_err(
            0,
            format!("found {} rows, expected {n}", rows.len()),
        ));
    }
    Ok((DenseMatrix::from_rows(&rows)?, pi))
}

pub fn chain_to_tsv(p: &TransitionMatrix) -> String {
    matrix_to_tsv(p.stochastic().matrix(), p.pi())
}

pub fn chain_from_tsv(text: &str) -> Result<TransitionMatrix> {
    let (m, pi) = matrix_from_tsv(text)?;
    TransitionMatrix::new(StochasticMatrix::new(m)?, pi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleManifest {
    pub steps: usize,
    pub diam: usize,
    pub root: usize,
    pub height: usize,
    pub pi: Vec<f64>,
    pub files: Vec<String>,
}

/// `manifest.json` plus `step_0000.tsv`, `step_0001.tsv`, ….
pub fn write_schedule(dir: &Path, s: &ChainSchedule) -> Result<()> {
    fs::create_dir_all(dir)?;
    let files: Vec<String> = (0..s.len()).map(|i| format!("step_{i:04}.tsv")).collect();
    for (step, file) in s.steps.iter().zip(&files) {
        fs::write(dir.join(file), matrix_to_tsv(step.matrix(), &s.target))?;
    }
    let manifest = ScheduleManifest {
        steps: s.len(),
        diam: s.diam,
        root: s.root,
        height: s.height,
        pi: s.target.clone(),
        files,
    };
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    Ok(())
}

pub fn read_schedule(dir: &Path) -> Result<ChainSchedule> {
    let manifest: ScheduleManifest =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
    if manifest.files.len() != manifest.steps {
        return Err(parse_err(
            0,
            "manifest step count does not match its file list",
        ));
    }
    let mut steps = Vec::with_capacity(manifest.steps);
    for file in &manifest.files {
        let (m, pi) = matrix_from_tsv(&fs::read_to_string(dir.join(file))?)?;
        if pi != manifest.pi {
            return Err(parse_err(
                1,
                format!("{file}: target differs from the manifest"),
            ));
        }
        steps.push(StochasticMatrix::new(m)?);
    }
    Ok(ChainSchedule {
        steps,
        diam: manifest.diam,
        root: manifest.root,
        height: manifest.height,
        target: manifest.pi,
    })
}

/// Whitespace-separated positive weights, normalized to sum to one.
pub fn distribution_from_text(text: &str, n: usize) -> Result<TargetDistribution> {
    let mut w = Vec::new();
    for (line, l) in content_lines(text) {
        for tok in l.split_whitespace() {
            w.push(parse_f64(tok, line)?);
        }
    }
    if w.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: w.len(),
        });
    }
    TargetDistribution::normalized(w)
}

pub fn read_distribution(path: &Path, n: usize) -> Result<TargetDistribution> {
    distribution_from_text(&fs::read_to_string(path)?, n)
}

/// A stored exact value for one quantity of one graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Golden {
    pub graph: String,
    pub quantity: String,
    pub value: String,
}

impl Golden {
    pub fn new(g: &Graph, quantity: &str, value: Rational64) -> Self {
        Golden {
            graph: g.canonical_string(),
            quantity: quantity.to_string(),
            value: format_rational(value),
        }
    }

    pub fn parsed_value(&self) -> Result<Rational64> {
        parse_rational(&self.value)
    }
}

/// Always `p/q`, including integers.
pub fn format_rational(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational64> {
    let err = || parse_err(1, format!("malformed rational {s:?}"));
    let (p, q) = s.trim().split_once('/').ok_or_else(err)?;
    let p = p.trim().parse::<i64>().map_err(|_| err())?;
    let q = q.trim().parse::<i64>().map_err(|_| err())?;
    if q == 0 {
        return Err(err());
    }
    Ok(Rational64::new(p, q))
}

/// Every `*.json` file in `dir`, sorted by name.
pub fn read_golden_dir(dir: &Path) -> Result<Vec<(PathBuf, Golden)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let golden: Golden = serde_json::from_str(&fs::read_to_string(&p)?)?;
            golden.parsed_value()?;
            Graph::parse_canonical_string(&golden.graph)?;
            Ok((p, golden))
        })
        .collect()
}

pub fn write_golden(path: &Path, golden: &Golden) -> Result<()> {
    Ok(fs::write(
        path,
        serde_json::to_string_pretty(golden)? + "\n",
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{perfect_mixing_schedule, uniform_max_degree_chain};
    use crate::graph::{generate, Family};

    #[test]
    fn weighting_round_trip() {
        let g = generate(Family::Star(3)).unwrap();
        let wg =
            WeightedGraph::new(g, vec![0.1, 1.0 / 3.0, 2.5], vec![0.0, 0.7, 0.0, 1e-17]).unwrap();
        let text = weighting_to_tsv(&wg);
        assert!(text.starts_with("# vertices 4\n"));
        assert_eq!(weighting_from_tsv(&text).unwrap(), wg);
        assert!(weighting_from_tsv("0\t1\t1\n").is_err());
        assert!(weighting_from_tsv("# vertices 2\n0\t1\t1\n1\t0\t2\n").is_err());
        assert!(weighting_from_tsv("# vertices 2\n0\t1\tx\n").is_err());
    }

    #[test]
    fn chain_round_trip() {
        let p = uniform_max_degree_chain(&generate(Family::Path(3)).unwrap()).unwrap();
        let back = chain_from_tsv(&chain_to_tsv(&p)).unwrap();
        assert_eq!(back, p);
        assert!(matrix_from_tsv("2\t0.5\n1\t0\n0\t1\n").is_err());
    }

    #[test]
    fn schedule_round_trip() {
        let g = generate(Family::Path(3)).unwrap();
        let pi = TargetDistribution::normalized(vec![1.0, 2.0, 3.0]).unwrap();
        let s = perfect_mixing_schedule(&g, &pi, Some(0)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_schedule(dir.path(), &s).unwrap();
        assert_eq!(read_schedule(dir.path()).unwrap(), s);
        assert!(dir.path().join("step_0003.tsv").exists());
    }

    #[test]
    fn distributions_normalize() {
        let pi = distribution_from_text("# weights\n1 1\n2\n", 3).unwrap();
        assert_eq!(pi.as_slice(), &[0.25, 0.25, 0.5]);
        assert!(distribution_from_text("1 2", 3).is_err());
        assert!(distribution_from_text("1 0 2", 3).is_err());
    }

    #[test]
    fn rationals_and_golden() {
        assert_eq!(parse_rational("3/6").unwrap(), Rational64::new(1, 2));
        assert_eq!(format_rational(Rational64::from_integer(2)), "2/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        let g = generate(Family::Cycle(4)).unwrap();
        let golden = Golden::new(&g, "vertex_conductance", Rational64::new(1, 1));
        let dir = tempfile::tempdir().unwrap();
        write_golden(&dir.path().join("c4.json"), &golden).unwrap();
        let read = read_golden_dir(dir.path()).unwrap();
        assert_eq!(read[0].1, golden);
        fs::write(dir.path().join("bad.json"), "{\"graph\": 1}").unwrap();
        assert!(read_golden_dir(dir.path()).is_err());
    }
}
