//! Unrooted split trees with labelled internal nodes.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitKind {
    Leaf(usize),
    Prime,
    Clique,
    Star,
}

impl SplitKind {
    pub fn is_leaf(self) -> bool {
        matches!(self, SplitKind::Leaf(_))
    }

    pub fn letter(self) -> char {
        match self {
            SplitKind::Leaf(_) => 'L',
            SplitKind::Prime => 'P',
            SplitKind::Clique => 'C',
            SplitKind::Star => 'S',
        }
    }
}

/// Unrooted tree whose leaves are the graph vertices. Leaf `v` is node `v`.
/// Every Star node records the neighbour on the side of its center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitTree {
    vertices: usize,
    kinds: Vec<SplitKind>,
    adj: Vec<Vec<usize>>,
    center: Vec<Option<usize>>,
}

impl SplitTree {
    /// Tree with `n` isolated leaves and no internal nodes yet.
    pub fn with_leaves(n: usize) -> SplitTree {
        SplitTree {
            vertices: n,
            kinds: (0..n).map(SplitKind::Leaf).collect(),
            adj: vec![Vec::new(); n],
            center: vec![None; n],
        }
    }

    pub fn add_internal(&mut self, kind: SplitKind) -> usize {
        assert!(!kind.is_leaf());
        self.kinds.push(kind);
        self.adj.push(Vec::new());
        self.center.push(None);
        self.kinds.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    pub fn set_kind(&mut self, id: usize, kind: SplitKind) {
        assert!(!self.kinds[id].is_leaf() && !kind.is_leaf());
        self.kinds[id] = kind;
    }

    pub fn set_center(&mut self, star: usize, toward: usize) {
        self.center[star] = Some(toward);
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, id: usize) -> SplitKind {
        self.kinds[id]
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adj[id]
    }

    pub fn center(&self, id: usize) -> Option<usize> {
        self.center[id]
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices..self.kinds.len()
    }

    pub fn count(&self, kind: SplitKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    /// Removes internal nodes of degree 2, joining their neighbours. Star
    /// centers pointing at a removed node are redirected through it.
    pub fn contract_degree_two(&mut self) {
        loop {
            let Some(x) = self.internal_nodes().find(|&x| self.adj[x].len() == 2) else {
                break;
            };
            let (a, b) = (self.adj[x][0], self.adj[x][1]);
            for (u, w) in [(a, b), (b, a)] {
                let pos = self.adj[u].iter().position(|&y| y == x).unwrap();
                self.adj[u][pos] = w;
                if self.center[u] == Some(x) {
                    self.center[u] = Some(w);
                }
            }
            self.remove_isolated(x);
        }
    }

    fn remove_isolated(&mut self, x: usize) {
        let last = self.kinds.len() - 1;
        self.adj[x].clear();
        if x != last {
            self.kinds.swap(x, last);
            self.adj.swap(x, last);
            self.center.swap(x, last);
            for i in 0..self.adj[x].len() {
                let y = self.adj[x][i];
                for z in self.adj[y].iter_mut() {
                    if *z == last {
                        *z = x;
                    }
                }
                if self.center[y] == Some(last) {
                    self.center[y] = Some(x);
                }
            }
        }
        self.kinds.pop();
        self.adj.pop();
        self.center.pop();
    }

    /// Checks the tree shape and label conventions.
    pub fn validate(&self) -> Result<(), String> {
        let total = self.kinds.len();
        let edges: usize = self.adj.iter().map(|a| a.len()).sum::<usize>() / 2;
        if self.vertices == 0 {
            return Err("no leaves".into());
        }
        if edges + 1 != total {
            return Err(format!("{total} nodes but {edges} edges"));
        }
        let mut seen = vec![false; total];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err("tree is disconnected".into());
        }
        for id in 0..total {
            let deg = self.adj[id].len();
            match self.kinds[id] {
                SplitKind::Leaf(v) => {
                    if v != id || (self.vertices > 1 && deg != 1) {
                        return Err(format!("leaf {id} malformed"));
                    }
                }
                kind => {
                    if deg < 3 {
                        return Err(format!("internal node {id} has degree {deg}"));
                    }
                    match (kind, self.center[id]) {
                        (SplitKind::Star, Some(c)) if self.adj[id].contains(&c) => {}
                        (SplitKind::Star, _) => return Err(format!("star {id} has no valid center")),
                        (_, Some(_)) => return Err(format!("non-star {id} has a center")),
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }

    /// Leaf sets on the side of each tree edge away from vertex 0, sorted.
    pub fn edge_splits(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let Some(&start) = self.adj[0].first() else {
            return out;
        };
        let mut sides = Vec::new();
        self.collect(start, 0, &mut sides, &mut out);
        out.push(sides);
        for s in out.iter_mut() {
            s.sort_unstable();
        }
        out.sort();
        out
    }

    fn collect(&self, u: usize, parent: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if let SplitKind::Leaf(v) = self.kinds[u] {
            acc.push(v);
            return;
        }
        for &w in &self.adj[u] {
            if w != parent {
                let mut side = Vec::new();
                self.collect(w, u, &mut side, out);
                acc.extend_from_slice(&side);
                out.push(side);
            }
        }
    }

    /// Canonical text, rooted at leaf 0, children ordered by smallest leaf.
    /// A star is written `S^` when its center is the parent side and marks the
    /// central child with `*` otherwise.
    pub fn canonical(&self) -> String {
        let names: Vec<String> = (0..self.vertices).map(|v| v.to_string()).collect();
        self.render(&names, 0)
    }

    /// Same layout as [`SplitTree::canonical`] but rooted at leaf `root` and
    /// printing vertex names.
    pub fn render(&self, names: &[String], root: usize) -> String {
        let mut s = String::new();
        s.push_str(&names[root]);
        if let Some(&next) = self.adj[root].first() {
            s.push_str(" -- ");
            s.push_str(&self.repr(next, root, names).1);
        }
        s
    }

    fn repr(&self, u: usize, parent: usize, names: &[String]) -> (usize, String) {
        if let SplitKind::Leaf(v) = self.kinds[u] {
            return (v, names[v].clone());
        }
        let mut kids: Vec<(usize, String, usize)> = self.adj[u]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| {
                let (m, s) = self.repr(w, u, names);
                (m, s, w)
            })
            .collect();
        kids.sort();
        let mut s = String::new();
        s.push('(');
        s.push(self.kinds[u].letter());
        if self.kinds[u] == SplitKind::Star && self.center[u] == Some(parent) {
            s.push('^');
        }
        for (_, text, w) in &kids {
            s.push(' ');
            if self.kinds[u] == SplitKind::Star && self.center[u] == Some(*w) {
                s.push('*');
            }
            let _ = write!(s, "{text}");
        }
        s.push(')');
        (kids[0].0, s)
    }
}
