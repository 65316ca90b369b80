//! Output formats and benchmarking for the `splitdec` command.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use splitdec::gen::random_connected;
use splitdec::{split_decomposition, Graph, SplitKind, SplitTree};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonNode {
    pub id: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub center: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonTree {
    pub root: usize,
    pub nodes: Vec<JsonNode>,
    pub edges: Vec<[usize; 2]>,
}

fn kind_name(kind: SplitKind) -> &'static str {
    match kind {
        SplitKind::Leaf(_) => "leaf",
        SplitKind::Prime => "prime",
        SplitKind::Clique => "clique",
        SplitKind::Star => "star",
    }
}

/// Tree edges as `(a, b)` with `a < b`, sorted.
fn tree_edges(t: &SplitTree) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..t.node_count() {
        for &b in t.neighbors(a) {
            if a < b {
                out.push((a, b));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Text form rooted at `root`, using the vertex labels of `g`.
pub fn to_text(t: &SplitTree, g: &Graph, root: usize) -> String {
    t.render(g.labels(), root)
}

pub fn to_json(t: &SplitTree, g: &Graph, root: usize) -> JsonTree {
    let nodes = (0..t.node_count())
        .map(|id| {
            let kind = t.kind(id);
            JsonNode {
                id,
                kind: kind_name(kind).to_string(),
                vertex: match kind {
                    SplitKind::Leaf(v) => Some(g.label(v).to_string()),
                    _ => None,
                },
                center: t.center(id),
            }
        })
        .collect();
    JsonTree {
        root: t.neighbors(root).first().copied().unwrap_or(root),
        nodes,
        edges: tree_edges(t).into_iter().map(|(a, b)| [a, b]).collect(),
    }
}

/// Rebuilds a tree from its JSON form. Leaves are renumbered in id order and
/// their labels returned alongside.
pub fn from_json(j: &JsonTree) -> Result<(SplitTree, Vec<String>)> {
    let mut nodes: Vec<&JsonNode> = j.nodes.iter().collect();
    nodes.sort_by_key(|n| n.id);
    if nodes.windows(2).any(|w| w[0].id == w[1].id) {
        bail!("duplicate node id");
    }
    let mut labels = Vec::new();
    let mut index = HashMap::new();
    for n in nodes.iter().filter(|n| n.kind == "leaf") {
        let label = n.vertex.clone().with_context(|| format!("leaf {} has no vertex", n.id))?;
        index.insert(n.id, labels.len());
        labels.push(label);
    }
    let mut t = SplitTree::with_leaves(labels.len());
    for n in &nodes {
        let kind = match n.kind.as_str() {
            "leaf" => continue,
            "prime" => SplitKind::Prime,
            "clique" => SplitKind::Clique,
            "star" => SplitKind::Star,
            other => bail!("unknown node kind `{other}`"),
        };
        index.insert(n.id, t.add_internal(kind));
    }
    let map = |id: usize| index.get(&id).copied().with_context(|| format!("unknown node id {id}"));
    for &[a, b] in &j.edges {
        t.add_edge(map(a)?, map(b)?);
    }
    for n in &nodes {
        if let Some(c) = n.center {
            t.set_center(map(n.id)?, map(c)?);
        }
    }
    t.validate().map_err(anyhow::Error::msg)?;
    Ok((t, labels))
}

/// DOT text. Leaves are ellipses, internal nodes boxes; an edge from a star
/// to its center is directed, every other edge has no arrow.
pub fn to_dot(t: &SplitTree, g: &Graph) -> String {
    let mut s = String::from("digraph split_tree {\n");
    for id in 0..t.node_count() {
        let _ = match t.kind(id) {
            SplitKind::Leaf(v) => writeln!(s, "  n{id} [shape=ellipse, label={:?}];", g.label(v)),
            kind => writeln!(s, "  n{id} [shape=box, label=\"{}\"];", kind.letter()),
        };
    }
    for (a, b) in tree_edges(t) {
        let toward_b = t.kind(a) == SplitKind::Star && t.center(a) == Some(b);
        let toward_a = t.kind(b) == SplitKind::Star && t.center(b) == Some(a);
        if toward_b {
            let _ = writeln!(s, "  n{a} -> n{b};");
        }
        if toward_a {
            let _ = writeln!(s, "  n{b} -> n{a};");
        }
        if !toward_a && !toward_b {
            let _ = writeln!(s, "  n{a} -> n{b} [dir=none];");
        }
    }
    s.push_str("}\n");
    s
}

/// Parses sizes such as `1e3,2000,4e3`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let x: f64 = tok.parse().with_context(|| format!("bad size `{tok}`"))?;
        if !x.is_finite() || x < 1.0 || x.fract() != 0.0 {
            bail!("bad size `{tok}`");
        }
        out.push(x as usize);
    }
    if out.is_empty() {
        bail!("no sizes given");
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        bail!("sizes must be strictly ascending");
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub edges: usize,
    pub vertices: usize,
    /// Median wall time in seconds.
    pub seconds: f64,
    /// Time over the previous row's time.
    pub ratio: Option<f64>,
}

/// Vertex count for a benchmark graph with `m` edges: about `m / 4`, raised
/// when needed so that the graph can exist.
pub fn bench_vertices(m: usize) -> usize {
    let mut n = (m / 4).max(2);
    while n * (n - 1) / 2 < m {
        n += 1;
    }
    n.min(m + 1)
}

pub fn bench(sizes: &[usize], reps: usize, seed: u64) -> Result<Vec<BenchRow>> {
    let mut rows: Vec<BenchRow> = Vec::new();
    for (i, &m) in sizes.iter().enumerate() {
        let n = bench_vertices(m);
        let mut times = Vec::with_capacity(reps);
        for rep in 0..reps.max(1) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((i * 1000 + rep) as u64));
            let g = random_connected(&mut rng, n, m)?;
            let start = Instant::now();
            split_decomposition(&g, 0)?;
            times.push(start.elapsed().as_secs_f64());
        }
        times.sort_by(f64::total_cmp);
        let seconds = times[times.len() / 2];
        let ratio = rows.last().map(|p| seconds / p.seconds);
        rows.push(BenchRow { edges: m, vertices: n, seconds, ratio });
    }
    Ok(rows)
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut s = format!("{:>10} {:>10} {:>12} {:>14} {:>8}\n", "edges", "vertices", "ms", "ns/(n+m)", "ratio");
    for r in rows {
        let per = r.seconds * 1e9 / (r.edges + r.vertices) as f64;
        let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.2}"));
        let _ = writeln!(s, "{:>10} {:>10} {:>12.3} {:>14.1} {:>8}", r.edges, r.vertices, r.seconds * 1e3, per, ratio);
    }
    let mut ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    if !ratios.is_empty() {
        ratios.sort_by(f64::total_cmp);
        let _ = writeln!(s, "median doubling ratio {:.2}", ratios[ratios.len() / 2]);
    }
    s
}

/// Edge list of `g` in the input format, one edge per line.
pub fn edge_list(g: &Graph) -> String {
    let mut s = String::new();
    for (a, b) in g.edges() {
        let _ = writeln!(s, "{} {}", g.label(a), g.label(b));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use splitdec::gen;

    #[test]
    fn json_round_trip_p4() {
        let g = gen::path(4);
        let t = split_decomposition(&g, 0).unwrap();
        let j = to_json(&t, &g, 0);
        let (back, labels) = from_json(&j).unwrap();
        assert_eq!(back.canonical(), t.canonical());
        assert_eq!(labels, vec!["0", "1", "2", "3"]);
        assert_eq!(j.root, t.neighbors(0)[0]);
    }

    #[test]
    fn dot_marks_star_centers() {
        let g = gen::star(3);
        let t = split_decomposition(&g, 0).unwrap();
        let dot = to_dot(&t, &g);
        assert_eq!(dot.matches("shape=box").count(), 1);
        assert_eq!(dot.matches("[dir=none]").count(), 3);
        assert_eq!(dot.matches(" -> n0;").count(), 1);
    }

    #[test]
    fn sizes_parse() {
        assert_eq!(parse_sizes("1e3,2e3, 4000").unwrap(), vec![1000, 2000, 4000]);
        assert!(parse_sizes("2e3,1e3").is_err());
        assert!(parse_sizes("1.5").is_err());
        assert!(parse_sizes("").is_err());
    }

    #[test]
    fn bench_shape() {
        let rows = bench(&[40, 80], 1, 1).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].ratio.is_none() && rows[1].ratio.is_some());
        assert_eq!(bench_vertices(3), 3);
        assert_eq!(bench_vertices(1000), 250);
        let one = bench(&[50], 1, 1).unwrap();
        assert!(!bench_table(&one).contains("median"));
    }
}
