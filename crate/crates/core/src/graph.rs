//! Simple undirected graphs, BFS layering and the layer queries used by the
//! split pipeline.

use std::collections::HashMap;
use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop on vertex `{label}`")]
    SelfLoop { line: usize, label: String },
    #[error("vertex index {0} out of range")]
    OutOfRange(usize),
    #[error("graph is disconnected: `{a}` and `{b}` lie in different components")]
    Disconnected { a: String, b: String },
    #[error("graph has no vertices")]
    Empty,
}

/// Immutable simple graph. Vertices are dense indices; labels are only kept
/// for input and output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices labelled by their index. Duplicate
    /// edges are collapsed; self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Graph::with_labels(labels, edges)
    }

    pub fn with_labels(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n {
                return Err(GraphError::OutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::OutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop { line: i + 1, label: labels[u].clone() });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut edge_count = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph { labels, adj, edge_count: edge_count / 2 })
    }

    /// Parses the edge-list format without checking connectivity.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(GraphError::Parse {
                    line: i + 1,
                    msg: format!("expected two vertex tokens, found {}", toks.len()),
                });
            }
            if toks[0] == toks[1] {
                return Err(GraphError::SelfLoop { line: i + 1, label: toks[0].to_string() });
            }
            let mut ends = [0usize; 2];
            for (end, &t) in ends.iter_mut().zip(&toks) {
                let next = labels.len();
                *end = *index.entry(t).or_insert_with(|| {
                    labels.push(t.to_string());
                    next
                });
            }
            let [u, v] = ends;
            edges.push((u, v));
        }
        Graph::with_labels(labels, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Connected components, each sorted, ordered by minimum vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_of(self, |_| true)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.components().len() == 1
    }

    /// Subgraph induced by `verts`; vertex `i` of the result is `verts[i]`.
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let mut adj = vec![Vec::new(); verts.len()];
        let mut m = 0;
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.adj[v] {
                if local[w] != usize::MAX {
                    adj[i].push(local[w]);
                }
            }
            adj[i].sort_unstable();
            m += adj[i].len();
        }
        let labels = verts.iter().map(|&v| self.labels[v].clone()).collect();
        Graph { labels, adj, edge_count: m / 2 }
    }
}

fn components_of(g: &Graph, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] || !keep(s) {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(u);
            for &w in g.neighbors(u) {
                if !seen[w] && keep(w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Parses an edge list and rejects empty or disconnected graphs.
pub fn load_graph(text: &str) -> Result<Graph, GraphError> {
    let g = Graph::parse(text)?;
    if g.vertex_count() == 0 {
        return Err(GraphError::Empty);
    }
    let comps = g.components();
    if comps.len() > 1 {
        return Err(GraphError::Disconnected {
            a: g.label(comps[0][0]).to_string(),
            b: g.label(comps[1][0]).to_string(),
        });
    }
    Ok(g)
}

/// BFS distances from a root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layering {
    pub root: usize,
    pub dist: Vec<usize>,
    pub layers: Vec<Vec<usize>>,
}

impl Layering {
    pub fn max_dist(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer(&self, h: usize) -> &[usize] {
        self.layers.get(h).map(|l| l.as_slice()).unwrap_or(&[])
    }
}

/// Assumes `g` is connected; unreachable vertices get `usize::MAX`.
pub fn bfs_layering(g: &Graph, r: usize) -> Layering {
    let n = g.vertex_count();
    let mut dist = vec![usize::MAX; n];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    dist[r] = 0;
    queue.push_back(r);
    while let Some(u) = queue.pop_front() {
        let d = dist[u];
        if layers.len() == d {
            layers.push(Vec::new());
        }
        layers[d].push(u);
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = d + 1;
                queue.push_back(w);
            }
        }
    }
    for l in layers.iter_mut() {
        l.sort_unstable();
    }
    Layering { root: r, dist, layers }
}

/// Components of the subgraph on vertices with distance `> h` (strict) or
/// `>= h`.
pub fn components_above(g: &Graph, lay: &Layering, h: usize, strict: bool) -> Vec<Vec<usize>> {
    components_of(g, |v| {
        let d = lay.dist[v];
        d != usize::MAX && (d > h || (!strict && d == h))
    })
}

/// Layer-`h` vertices adjacent to some member of `x`.
pub fn layer_neighborhood(g: &Graph, lay: &Layering, x: &[usize], h: usize) -> Vec<usize> {
    let mut out: Vec<usize> = x
        .iter()
        .flat_map(|&v| g.neighbors(v).iter().copied())
        .filter(|&w| lay.dist[w] == h)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Layer `h` grouped by the component of the subgraph at distance `>= h`
/// containing each vertex.
pub fn h_components(g: &Graph, lay: &Layering, h: usize) -> Vec<Vec<usize>> {
    components_above(g, lay, h, false)
        .into_iter()
        .map(|c| c.into_iter().filter(|&v| lay.dist[v] == h).collect::<Vec<_>>())
        .filter(|c| !c.is_empty())
        .collect()
}
