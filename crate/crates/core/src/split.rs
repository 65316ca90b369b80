//! Split decomposition by BFS layers.
//!
//! Layers are processed from the deepest one up. For layer `h` the possible
//! attachment sets of split sides (borders) are computed as one partitive
//! tree, the tree is turned into a forest of labelled border nodes, and the
//! forest built for the deeper layers is hung below it. After layer 1 the
//! forest is a single tree and the root vertex is attached to it.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{bfs_layering, components_above, h_components, Graph, Layering};
use crate::modular::{layer_restricted_modules, ModuleForest};
use crate::oracle::{self, OracleError};
use crate::partitive::{complement_reduced_family, NodeKind, PartitiveTree};
use crate::set_family::{orthogonal_tree, SetFamily};
use crate::split_tree::{SplitKind, SplitTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplitError {
    #[error("split decomposition needs at least 2 vertices, got {0}")]
    TooSmall(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("root vertex {0} out of range")]
    BadRoot(usize),
    #[error("inconsistent state at layer {layer}: {msg}")]
    Inconsistent { layer: usize, msg: String },
}

fn inconsistent(layer: usize, msg: impl Into<String>) -> SplitError {
    SplitError::Inconsistent { layer, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Prime,
    Clique,
    Star,
    Unlabeled,
}

/// Side of a Star node holding its center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Center {
    /// Not fixed yet; the node has no parent.
    Unresolved,
    Parent,
    Child(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompNode {
    pub vertex: Option<usize>,
    pub label: Label,
    pub center: Center,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
}

impl DecompNode {
    fn leaf(v: usize) -> DecompNode {
        DecompNode { vertex: Some(v), label: Label::Unlabeled, center: Center::Unresolved, children: vec![], parent: None }
    }

    fn internal(label: Label) -> DecompNode {
        DecompNode { vertex: None, label, center: Center::Unresolved, children: vec![], parent: None }
    }

    /// Leaves and labelled nodes stand for split sides.
    pub fn is_split_side(&self) -> bool {
        self.vertex.is_some() || self.label != Label::Unlabeled
    }
}

/// Snapshot of the forest after processing a layer. Node `v < n` is the leaf
/// of vertex `v`; nodes not reachable from `roots` are stale.
#[derive(Debug, Clone)]
pub struct DecompForest {
    pub layer: usize,
    pub nodes: Vec<DecompNode>,
    pub roots: Vec<usize>,
}

impl DecompForest {
    /// Vertices below `u`.
    pub fn leaf_set(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            match self.nodes[x].vertex {
                Some(v) => out.push(v),
                None => stack.extend(self.nodes[x].children.iter().copied()),
            }
        }
        out.sort_unstable();
        out
    }

    /// Reachable internal nodes, parents before children.
    pub fn internal_nodes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = self.roots.clone();
        while let Some(x) = stack.pop() {
            if self.nodes[x].vertex.is_none() {
                out.push(x);
                stack.extend(self.nodes[x].children.iter().copied());
            }
        }
        out
    }
}

/// The borders at one layer together with the layer itself, as a partitive
/// tree over positions in `layer`.
#[derive(Debug, Clone)]
pub struct Borders {
    pub layer: Vec<usize>,
    pub tree: PartitiveTree,
    /// Whether the whole layer is itself a border.
    pub layer_is_border: bool,
    /// For each component below the layer, its neighbourhood in the layer.
    pub attachments: Vec<Vec<usize>>,
    /// Smallest tree node containing each attachment set.
    pub containers: Vec<usize>,
}

impl Borders {
    /// Members of the tree as vertex sets, sorted, with the whole layer
    /// dropped unless it is a border.
    pub fn border_sets(&self, cap: usize) -> Result<Vec<Vec<usize>>, crate::set_family::FamilyError> {
        let k = self.layer.len();
        let mut out: Vec<Vec<usize>> = self
            .tree
            .enumerate_members(cap)?
            .into_iter()
            .filter(|s| self.layer_is_border || s.len() < k)
            .map(|s| s.into_iter().map(|i| self.layer[i]).collect())
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Borders at layer `h` from the modules inside the layer and the
/// components of the graph below it.
pub fn compute_borders(g: &Graph, lay: &Layering, h: usize, m: &ModuleForest) -> Borders {
    let below: Vec<Vec<usize>> = components_above(g, lay, h, true)
        .into_iter()
        .map(|c| c.into_iter().filter(|&v| lay.dist[v] == h + 1).collect())
        .collect();
    let mut local = vec![usize::MAX; g.vertex_count()];
    borders_from(g, lay, h, m, &below, &mut local)
}

/// `below[i]` lists the vertices of layer `h + 1` in the i-th component
/// under the layer. `local` is scratch indexed by vertex, all `usize::MAX`
/// on entry and on exit.
fn borders_from(
    g: &Graph,
    lay: &Layering,
    h: usize,
    m: &ModuleForest,
    below: &[Vec<usize>],
    local: &mut [usize],
) -> Borders {
    let layer = m.layer.clone();
    let k = layer.len();
    for (i, &v) in layer.iter().enumerate() {
        local[v] = i;
    }
    let modules = m.tree_with_layer();
    // its orthogonal is the family of the module tree itself
    let mut family = modules.generator_family();
    let mut attachments = Vec::with_capacity(below.len());
    let mut slots = Vec::with_capacity(below.len());
    let mut seen = vec![false; k];
    for comp in below {
        let mut sub = SetFamily::new(k);
        let mut x = Vec::new();
        for &v in comp {
            let mut nb: Vec<usize> =
                g.neighbors(v).iter().filter(|&&w| lay.dist[w] == h).map(|&w| local[w]).collect();
            if nb.is_empty() {
                continue;
            }
            nb.sort_unstable();
            for &e in &nb {
                if !seen[e] {
                    seen[e] = true;
                    x.push(e);
                }
            }
            sub.push_sorted(nb);
        }
        for &e in &x {
            seen[e] = false;
        }
        x.sort_unstable();
        sub.push_sorted(x.clone());
        let reduced = complement_reduced_family(&sub, &x, k).expect("attachment family is well formed");
        family.extend(&reduced);
        slots.push(family.len());
        family.push_sorted(x.clone());
        attachments.push(x);
    }
    for &v in &layer {
        local[v] = usize::MAX;
    }
    let ortho = orthogonal_tree(&family);
    let containers = slots.iter().map(|&s| ortho.container[s]).collect();
    Borders { layer, tree: ortho.tree, layer_is_border: m.contains_layer, attachments, containers }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BorderLabel {
    Leaf(usize),
    Prime,
    Clique,
    Star,
    HComponentRoot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderNode {
    pub label: BorderLabel,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    /// Number of layer vertices below.
    pub size: usize,
    /// Star whose center is known to be its parent side.
    pub center_parent: bool,
}

/// Forest of the borders of one layer, grouped under one extra root per
/// layer component holding several trees.
#[derive(Debug, Clone)]
pub struct BorderForest {
    pub nodes: Vec<BorderNode>,
    pub roots: Vec<usize>,
    /// Lowest node containing each attachment set of [`Borders`].
    pub targets: Vec<usize>,
}

/// Border forest for layer `h`, grouping trees by the components of the
/// graph at distance at least `h`.
pub fn build_border_forest(g: &Graph, lay: &Layering, h: usize, b: &Borders) -> Result<BorderForest, SplitError> {
    let mut comp_of = vec![usize::MAX; g.vertex_count()];
    for (i, c) in h_components(g, lay, h).into_iter().enumerate() {
        for v in c {
            comp_of[v] = i;
        }
    }
    let comp: Vec<usize> = b.layer.iter().map(|&v| comp_of[v]).collect();
    border_forest(g, h, b, &comp)
}

/// `comp[i]` is the layer component of `b.layer[i]`.
fn border_forest(g: &Graph, h: usize, b: &Borders, comp: &[usize]) -> Result<BorderForest, SplitError> {
    let t = &b.tree;
    let sizes = t.sizes();
    // position of some layer vertex below each tree node
    let mut rep = vec![usize::MAX; t.node_count()];
    let order = t.preorder();
    for &u in order.iter().rev() {
        rep[u] = match t.node(u).kind {
            NodeKind::Leaf(e) => e,
            _ => rep[t.node(u).children[0]],
        };
    }
    let keep_root = b.layer_is_border;
    let mut nodes: Vec<BorderNode> = Vec::with_capacity(t.node_count() + 1);
    let mut id = vec![usize::MAX; t.node_count()];
    for &u in &order {
        if u == t.root() && !keep_root {
            continue;
        }
        let node = t.node(u);
        let parent = node.parent.filter(|&p| id[p] != usize::MAX).map(|p| id[p]);
        let label = match node.kind {
            NodeKind::Leaf(e) => BorderLabel::Leaf(b.layer[e]),
            NodeKind::Prime => BorderLabel::Prime,
            NodeKind::Complete => {
                let (x1, x2) = (b.layer[rep[node.children[0]]], b.layer[rep[node.children[1]]]);
                if g.has_edge(x1, x2) {
                    BorderLabel::Clique
                } else {
                    BorderLabel::Star
                }
            }
        };
        id[u] = nodes.len();
        nodes.push(BorderNode {
            label,
            children: vec![],
            parent,
            size: sizes[u],
            center_parent: label == BorderLabel::Star && parent.is_some(),
        });
        if let Some(p) = parent {
            nodes[p].children.push(id[u]);
        }
    }
    let tree_roots: Vec<usize> =
        if keep_root { vec![t.root()] } else { t.node(t.root()).children.clone() };

    // group trees by layer component
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut comp_order = Vec::new();
    for &u in &tree_roots {
        let (c, r) = (comp[rep[u]], id[u]);
        let entry = groups.entry(c).or_insert_with(|| {
            comp_order.push(c);
            Vec::new()
        });
        entry.push(r);
    }
    let mut roots = Vec::new();
    let mut hroot_of: HashMap<usize, usize> = HashMap::new();
    for c in comp_order {
        let members = &groups[&c];
        if members.len() == 1 {
            roots.push(members[0]);
            continue;
        }
        let hr = nodes.len();
        let size = members.iter().map(|&m| nodes[m].size).sum();
        nodes.push(BorderNode {
            label: BorderLabel::HComponentRoot,
            children: members.clone(),
            parent: None,
            size,
            center_parent: false,
        });
        for &m in members {
            nodes[m].parent = Some(hr);
        }
        hroot_of.insert(c, hr);
        roots.push(hr);
    }

    let mut targets = Vec::with_capacity(b.containers.len());
    for (i, &c) in b.containers.iter().enumerate() {
        let target = if id[c] != usize::MAX {
            id[c]
        } else {
            let x = b.attachments[i][0];
            *hroot_of
                .get(&comp[x])
                .ok_or_else(|| inconsistent(h, "attachment spans several trees of a single-tree component"))?
        };
        targets.push(target);
    }
    Ok(BorderForest { nodes, roots, targets })
}

/// How a root of the deeper forest relates to its lowest containing border
/// node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootType {
    /// Its layer neighbourhood is not inside the node.
    Type1,
    /// Its layer neighbourhood is a proper part of the node.
    Type2,
    /// A split side whose layer neighbourhood is exactly the node.
    Type3,
}

/// Classifies a root from its layer neighbourhood size, the size of the
/// border node and whether the root is a split side.
pub fn classify_root(attachment: &[usize], node_set: &[usize], is_split_side: bool) -> RootType {
    if !attachment.iter().all(|x| node_set.binary_search(x).is_ok()) {
        RootType::Type1
    } else if attachment.len() == node_set.len() && is_split_side {
        RootType::Type3
    } else {
        RootType::Type2
    }
}

/// Union-find over vertices, used for the components below each layer.
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a] = b;
        }
    }
}

struct Engine<'a> {
    g: &'a Graph,
    lay: Layering,
    nodes: Vec<DecompNode>,
    roots: Vec<usize>,
    dsu: Dsu,
    // root of the current forest above each vertex of the last layer done
    root_of: Vec<usize>,
    memo: Vec<(usize, usize)>,
    local: Vec<usize>,
}

impl<'a> Engine<'a> {
    fn new(g: &'a Graph, r: usize) -> Engine<'a> {
        let n = g.vertex_count();
        let lay = bfs_layering(g, r);
        Engine {
            g,
            lay,
            nodes: (0..n).map(DecompNode::leaf).collect(),
            roots: Vec::new(),
            dsu: Dsu { parent: (0..n).collect() },
            root_of: vec![usize::MAX; n],
            memo: Vec::new(),
            local: vec![usize::MAX; n],
        }
    }

    fn snapshot(&self, layer: usize) -> DecompForest {
        let mut nodes = self.nodes.clone();
        for &r in &self.roots {
            nodes[r].parent = None;
        }
        let mut stack = self.roots.clone();
        while let Some(u) = stack.pop() {
            for i in 0..nodes[u].children.len() {
                let c = nodes[u].children[i];
                nodes[c].parent = Some(u);
                stack.push(c);
            }
        }
        DecompForest { layer, nodes, roots: self.roots.clone() }
    }

    fn step(&mut self, h: usize) -> Result<(), SplitError> {
        let g = self.g;
        // components below the layer, as their layer h+1 vertices
        let next = self.lay.layer(h + 1).to_vec();
        let mut comp_index: HashMap<usize, usize> = HashMap::new();
        let mut below: Vec<Vec<usize>> = Vec::new();
        for &v in &next {
            let c = self.dsu.find(v);
            let i = *comp_index.entry(c).or_insert_with(|| {
                below.push(Vec::new());
                below.len() - 1
            });
            below[i].push(v);
        }
        // a star root may hold several components with one neighbourhood
        let mut below_roots: Vec<usize> = Vec::with_capacity(below.len());
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        let mut grouped: Vec<Vec<usize>> = Vec::with_capacity(below.len());
        for comp in below {
            let r = self.root_of[comp[0]];
            if comp.iter().any(|&v| self.root_of[v] != r) {
                return Err(inconsistent(h, "component below the layer holds several roots"));
            }
            match by_root.get(&r) {
                Some(&i) => grouped[i].extend(comp),
                None => {
                    by_root.insert(r, grouped.len());
                    below_roots.push(r);
                    grouped.push(comp);
                }
            }
        }
        let below = grouped;

        // extend the union-find to the current layer
        let layer = self.lay.layer(h).to_vec();
        for &v in &layer {
            for &w in g.neighbors(v) {
                if self.lay.dist[w] >= h {
                    self.dsu.union(v, w);
                }
            }
        }
        let comp: Vec<usize> = layer.iter().map(|&v| self.dsu.find(v)).collect();

        let m = layer_restricted_modules(g, &self.lay, h);
        let borders = borders_from(g, &self.lay, h, &m, &below, &mut self.local);
        let bf = border_forest(g, h, &borders, &comp)?;

        // move the border forest into the arena
        let mut amap = vec![usize::MAX; bf.nodes.len()];
        for (i, bn) in bf.nodes.iter().enumerate() {
            amap[i] = match bn.label {
                BorderLabel::Leaf(v) => v,
                other => {
                    let label = match other {
                        BorderLabel::Prime => Label::Prime,
                        BorderLabel::Clique => Label::Clique,
                        BorderLabel::Star => Label::Star,
                        _ => Label::Unlabeled,
                    };
                    let mut node = DecompNode::internal(label);
                    if bn.center_parent {
                        node.center = Center::Parent;
                    }
                    self.nodes.push(node);
                    self.nodes.len() - 1
                }
            };
        }
        for (i, bn) in bf.nodes.iter().enumerate() {
            let a = amap[i];
            self.nodes[a].parent = bn.parent.map(|p| amap[p]);
            self.nodes[a].children = bn.children.iter().map(|&c| amap[c]).collect();
        }

        // hang the deeper roots
        let mut new_parent: HashMap<usize, usize> = HashMap::new();
        for (i, &r) in below_roots.iter().enumerate() {
            let target = bf.targets[i];
            let b = amap[target];
            let hcomp = bf.nodes[target].label == BorderLabel::HComponentRoot;
            if !self.nodes[r].is_split_side() {
                if self.nodes[b].vertex.is_some() {
                    return Err(inconsistent(h, "component root would merge into a leaf"));
                }
                self.merge_into(r, b);
                self.make_prime(b);
                continue;
            }
            let exact = borders.attachments[i].len() == bf.nodes[target].size;
            if hcomp || !exact {
                self.link(r, b);
                self.make_prime(b);
                if self.nodes[r].label == Label::Star && self.nodes[r].center == Center::Unresolved {
                    self.nodes[r].center = Center::Parent;
                }
                continue;
            }
            let p = match new_parent.get(&b) {
                Some(&p) => p,
                None => {
                    let p = self.insert_star_above(b);
                    new_parent.insert(b, p);
                    p
                }
            };
            let center_up = matches!(self.nodes[r].center, Center::Unresolved | Center::Parent);
            if self.nodes[r].label == Label::Star && center_up {
                self.merge_into(r, p);
            } else {
                self.link(r, p);
            }
        }

        // roots of the new forest, and the root above each layer vertex
        self.memo.resize(self.nodes.len(), (usize::MAX, 0));
        let mut roots = Vec::new();
        for &v in &layer {
            let mut path = Vec::new();
            let mut u = v;
            let root = loop {
                if self.memo[u].0 == h {
                    break self.memo[u].1;
                }
                path.push(u);
                match self.nodes[u].parent {
                    Some(p) => u = p,
                    None => {
                        roots.push(u);
                        break u;
                    }
                }
            };
            for x in path {
                self.memo[x] = (h, root);
            }
            self.root_of[v] = root;
        }
        self.roots = roots;
        Ok(())
    }

    /// A degenerate border node that receives children from below is prime:
    /// its border parts all see the parent side and the new children do not.
    fn make_prime(&mut self, b: usize) {
        if let Label::Clique | Label::Star = self.nodes[b].label {
            self.nodes[b].label = Label::Prime;
            self.nodes[b].center = Center::Unresolved;
        }
    }

    fn link(&mut self, child: usize, parent: usize) {
        self.nodes[child].parent = Some(parent);
        self.nodes[parent].children.push(child);
    }

    /// Moves the children of `r` under `b`, appending the shorter list to
    /// the longer one. Parent links of the moved nodes are left stale.
    fn merge_into(&mut self, r: usize, b: usize) {
        let mut moved = std::mem::take(&mut self.nodes[r].children);
        if moved.len() > self.nodes[b].children.len() {
            std::mem::swap(&mut moved, &mut self.nodes[b].children);
        }
        self.nodes[b].children.extend(moved);
    }

    /// New Star node taking the place of `b`, with `b` as its central child.
    fn insert_star_above(&mut self, b: usize) -> usize {
        let mut p = DecompNode::internal(Label::Star);
        p.center = Center::Child(b);
        p.parent = self.nodes[b].parent;
        let pid = self.nodes.len();
        self.nodes.push(p);
        if let Some(old) = self.nodes[pid].parent {
            let pos = self.nodes[old].children.iter().position(|&c| c == b).expect("child of its parent");
            self.nodes[old].children[pos] = pid;
        }
        self.nodes[b].parent = Some(pid);
        self.nodes[pid].children.push(b);
        pid
    }

    /// Attaches the root vertex and converts the final forest.
    fn finish(&self) -> Result<SplitTree, SplitError> {
        let n = self.g.vertex_count();
        let r = self.lay.root;
        if self.roots.len() != 1 {
            return Err(inconsistent(1, format!("{} roots remain", self.roots.len())));
        }
        let mut t = SplitTree::with_leaves(n);
        let top = self.roots[0];
        let mut stack = vec![(top, r)];
        let mut id = HashMap::new();
        while let Some((u, up)) = stack.pop() {
            let node = &self.nodes[u];
            let me = match node.vertex {
                Some(v) => v,
                None => {
                    let kind = match node.label {
                        Label::Prime => SplitKind::Prime,
                        Label::Clique => SplitKind::Clique,
                        Label::Star => SplitKind::Star,
                        Label::Unlabeled => return Err(inconsistent(1, "unlabeled node in the final tree")),
                    };
                    t.add_internal(kind)
                }
            };
            id.insert(u, me);
            t.add_edge(up, me);
            for &c in &node.children {
                stack.push((c, me));
            }
            if node.label == Label::Star && node.vertex.is_none() {
                if let Center::Unresolved | Center::Parent = node.center {
                    t.set_center(me, up);
                }
            }
        }
        for (&u, &me) in &id {
            if let Center::Child(c) = self.nodes[u].center {
                if self.nodes[u].vertex.is_none() {
                    let target = *id.get(&c).ok_or_else(|| inconsistent(1, "star center outside the tree"))?;
                    t.set_center(me, target);
                }
            }
        }
        t.contract_degree_two();
        Ok(t)
    }
}

fn check_input(g: &Graph, r: usize) -> Result<(), SplitError> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(SplitError::TooSmall(n));
    }
    if r >= n {
        return Err(SplitError::BadRoot(r));
    }
    if !g.is_connected() {
        return Err(SplitError::Disconnected);
    }
    Ok(())
}

/// Split tree of a connected graph with at least two vertices, computed from
/// the BFS layering rooted at `r`.
pub fn split_decomposition(g: &Graph, r: usize) -> Result<SplitTree, SplitError> {
    check_input(g, r)?;
    if g.vertex_count() == 2 {
        let mut t = SplitTree::with_leaves(2);
        t.add_edge(0, 1);
        return Ok(t);
    }
    let mut e = Engine::new(g, r);
    for h in (1..=e.lay.max_dist()).rev() {
        e.step(h)?;
    }
    e.finish()
}

/// Forests for every layer from `max_dist + 1` (empty) down to 1.
pub fn layer_forests(g: &Graph, r: usize) -> Result<Vec<DecompForest>, SplitError> {
    check_input(g, r)?;
    let mut e = Engine::new(g, r);
    let top = e.lay.max_dist();
    let mut out = vec![e.snapshot(top + 1)];
    for h in (1..=top).rev() {
        e.step(h)?;
        out.push(e.snapshot(h));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub failure: Option<String>,
}

/// Checks a forest against the strong splits of a small graph. Leaves must
/// be the vertices at distance at least `h`; every strong split side at that
/// distance must be a node; every labelled internal node must be a strong
/// split side and every labelled root a split side, each with the label of
/// its quotient; unlabelled roots must be non-split components.
pub fn verify_invariants(f: &DecompForest, g: &Graph, lay: &Layering) -> Result<Vec<InvariantCheck>, OracleError> {
    let h = f.layer;
    let n = g.vertex_count();
    let internal = f.internal_nodes();
    let mut leaves: Vec<usize> = f.roots.iter().flat_map(|&r| f.leaf_set(r)).collect();
    leaves.sort_unstable();
    let expected: Vec<usize> = (0..n).filter(|&v| lay.dist[v] >= h).collect();
    let inv1 = (leaves != expected).then(|| format!("leaves {leaves:?}, expected {expected:?}"));

    let strong = oracle::strong_bottoms(g, lay, h)?;
    let mut node_sets: Vec<Vec<usize>> =
        internal.iter().filter(|&&u| f.nodes[u].label != Label::Unlabeled).map(|&u| f.leaf_set(u)).collect();
    node_sets.extend(leaves.iter().map(|&v| vec![v]));
    node_sets.sort();
    let inv2 = strong.iter().find(|s| node_sets.binary_search(s).is_err()).map(|s| format!("no node for {s:?}"));

    let mut inv3 = None;
    for &u in &internal {
        let node = &f.nodes[u];
        if node.label == Label::Unlabeled {
            continue;
        }
        let set = f.leaf_set(u);
        let is_root = node.parent.is_none();
        // a labelled root may be a bad star side, still a split side
        let side_ok = if is_root { oracle::is_split(g, &set)?.is_some() } else { strong.binary_search(&set).is_ok() };
        if !side_ok {
            let what = if is_root { "split side" } else { "strong split side" };
            inv3 = Some(format!("node {u} with set {set:?} is not a {what}"));
            break;
        }
        let mut parts = vec![(0..n).filter(|v| set.binary_search(v).is_err()).collect::<Vec<_>>()];
        parts.extend(node.children.iter().map(|&c| f.leaf_set(c)));
        let q = oracle::quotient_graph(g, &parts);
        let k = parts.len();
        let complete = q.edge_count() == k * (k - 1) / 2;
        let ok = match node.label {
            Label::Clique => complete,
            Label::Star => {
                let center = match node.center {
                    Center::Child(c) => node.children.iter().position(|&x| x == c).map(|i| i + 1),
                    _ => Some(0),
                };
                center.is_some_and(|c| q.degree(c) == k - 1 && q.edge_count() == k - 1)
            }
            _ => !complete && !(q.edge_count() == k - 1 && (0..k).any(|v| q.degree(v) == k - 1)),
        };
        if !ok {
            inv3 = Some(format!("node {u} with set {set:?} has label {:?}", node.label));
            break;
        }
    }

    let mut inv4 = None;
    for &r in &f.roots {
        let node = &f.nodes[r];
        let set = f.leaf_set(r);
        if node.is_split_side() {
            continue;
        }
        let sub = g.induced(&set);
        if !sub.is_connected() || strong.binary_search(&set).is_ok() {
            inv4 = Some(format!("unlabeled root {r} with set {set:?}"));
            break;
        }
    }
    Ok(vec![
        InvariantCheck { name: "leaves", failure: inv1 },
        InvariantCheck { name: "strong sides have nodes", failure: inv2 },
        InvariantCheck { name: "nodes are labelled strong sides", failure: inv3 },
        InvariantCheck { name: "roots", failure: inv4 },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracle::{brute_borders, reference_tree};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn decompose(g: &Graph, r: usize) -> String {
        split_decomposition(g, r).unwrap().canonical()
    }

    #[test]
    fn small_examples() {
        assert_eq!(decompose(&gen::complete(4), 0), "0 -- (C 1 2 3)");
        assert_eq!(decompose(&gen::star(3), 0), "0 -- (S^ 1 2 3)");
        assert_eq!(decompose(&gen::star(3), 2), "0 -- (S^ 1 2 3)");
        assert_eq!(decompose(&gen::path(4), 0), "0 -- (S *1 (S *2 3))");
        assert_eq!(decompose(&gen::cycle(5), 3), "0 -- (P 1 2 3 4)");
        assert_eq!(decompose(&gen::path(2), 1), "0 -- 1");
        assert!(matches!(split_decomposition(&gen::path(1), 0), Err(SplitError::TooSmall(1))));
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(split_decomposition(&g, 0), Err(SplitError::Disconnected)));
    }

    #[test]
    fn border_examples() {
        let p4 = gen::path(4);
        let lay = bfs_layering(&p4, 0);
        let b = compute_borders(&p4, &lay, 2, &layer_restricted_modules(&p4, &lay, 2));
        assert_eq!(b.tree.to_text(), "0");
        assert_eq!(b.attachments, vec![vec![0]]);

        let star = gen::star(3);
        let lay = bfs_layering(&star, 0);
        let b = compute_borders(&star, &lay, 1, &layer_restricted_modules(&star, &lay, 1));
        assert_eq!(b.tree.to_text(), "(C 0 1 2)");
        let bf = build_border_forest(&star, &lay, 1, &b).unwrap();
        assert_eq!(bf.roots.len(), 1);
        assert_eq!(bf.nodes[bf.roots[0]].label, BorderLabel::Star);
        assert!(!bf.nodes[bf.roots[0]].center_parent);

        // r=0, u=1, v=2, w=3
        let c4 = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let lay = bfs_layering(&c4, 0);
        let b = compute_borders(&c4, &lay, 1, &layer_restricted_modules(&c4, &lay, 1));
        assert_eq!(b.border_sets(64).unwrap(), vec![vec![1], vec![1, 2], vec![2]]);
        let bf = build_border_forest(&c4, &lay, 1, &b).unwrap();
        assert_eq!(bf.nodes[bf.roots[0]].label, BorderLabel::Star);
        assert_eq!(bf.targets, vec![bf.roots[0]]);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_root(&[2], &[2], true), RootType::Type3);
        assert_eq!(classify_root(&[1, 2], &[1, 2], true), RootType::Type3);
        assert_eq!(classify_root(&[1], &[1, 2], true), RootType::Type2);
        assert_eq!(classify_root(&[1, 3], &[1, 2], true), RootType::Type1);
    }

    #[test]
    fn borders_match_brute_force() {
        for n in 2..=6 {
            for g in gen::connected_graphs(n) {
                for r in 0..n {
                    let lay = bfs_layering(&g, r);
                    for h in 1..=lay.max_dist() {
                        let m = layer_restricted_modules(&g, &lay, h);
                        let b = compute_borders(&g, &lay, h, &m);
                        let k = b.layer.len();
                        let got: Vec<Vec<usize>> =
                            b.border_sets(1 << 12).unwrap().into_iter().filter(|s| s.len() < k).collect();
                        let want: Vec<Vec<usize>> =
                            brute_borders(&g, &lay, h).unwrap().into_iter().filter(|s| s.len() < k).collect();
                        assert_eq!(got, want, "edges {:?} root {r} layer {h}", g.edges());
                    }
                }
            }
        }
    }

    #[test]
    fn matches_reference_on_small_graphs() {
        for n in 2..=6 {
            for g in gen::connected_graphs(n) {
                for r in 0..n {
                    let want = reference_tree(&g, r).unwrap().canonical();
                    let got = split_decomposition(&g, r).unwrap();
                    got.validate().unwrap();
                    assert_eq!(got.canonical(), want, "edges {:?} root {r}", g.edges());
                }
            }
        }
    }

    #[test]
    fn invariants_hold_on_every_layer() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(3..=8);
            let m = rng.gen_range(n - 1..=n * (n - 1) / 2);
            let g = gen::random_connected(&mut rng, n, m).unwrap();
            let r = rng.gen_range(0..n);
            let lay = bfs_layering(&g, r);
            for f in layer_forests(&g, r).unwrap() {
                for check in verify_invariants(&f, &g, &lay).unwrap() {
                    assert_eq!(check.failure, None, "{} on {:?} root {r} layer {}", check.name, g.edges(), f.layer);
                }
            }
        }
    }

    #[test]
    fn corrupted_label_is_reported() {
        let g = gen::path(4);
        let lay = bfs_layering(&g, 0);
        let forests = layer_forests(&g, 0).unwrap();
        let empty = &forests[0];
        assert!(empty.roots.is_empty());
        assert!(verify_invariants(empty, &g, &lay).unwrap().iter().all(|c| c.failure.is_none()));
        let mut f = forests.iter().find(|f| f.layer == 2).unwrap().clone();
        assert!(verify_invariants(&f, &g, &lay).unwrap().iter().all(|c| c.failure.is_none()));
        let star = f.internal_nodes()[0];
        f.nodes[star].label = Label::Clique;
        let report = verify_invariants(&f, &g, &lay).unwrap();
        assert!(report[2].failure.as_deref().unwrap().contains(&format!("node {star}")));
    }

    /// Root-free side of every split, with its attachment set.
    fn bottoms(g: &Graph, r: usize) -> Vec<(Vec<usize>, Vec<usize>, bool)> {
        let strong = oracle::strong_splits(g).unwrap();
        let n = g.vertex_count();
        oracle::enumerate_splits(g)
            .unwrap()
            .into_iter()
            .map(|s| {
                let is_strong = strong.contains(&s);
                let (side, border) = if s.x1.contains(&r) { (s.x2, s.v3) } else { (s.x1, s.v2) };
                debug_assert!(side.len() < n);
                (side, border, is_strong)
            })
            .collect()
    }

    #[test]
    fn borders_lie_in_one_layer_and_are_closed() {
        for n in 2..=6 {
            for g in gen::connected_graphs(n) {
                for r in 0..n {
                    let lay = bfs_layering(&g, r);
                    for (_, border, _) in bottoms(&g, r) {
                        assert!(border.iter().all(|&v| lay.dist[v] == lay.dist[border[0]]));
                    }
                    for h in 1..=lay.max_dist() {
                        let b = compute_borders(&g, &lay, h, &layer_restricted_modules(&g, &lay, h));
                        let sets = b.border_sets(1 << 12).unwrap();
                        for x in &sets {
                            for y in &sets {
                                if !crate::set_family::overlap(x, y) {
                                    continue;
                                }
                                let union = crate::partitive::merge_sorted(x, y);
                                let inter: Vec<usize> = x.iter().copied().filter(|e| y.contains(e)).collect();
                                let diff: Vec<usize> = union.iter().copied().filter(|e| !inter.contains(e)).collect();
                                for s in [union, inter, diff] {
                                    assert!(sets.binary_search(&s).is_ok(), "{s:?} on {:?} root {r}", g.edges());
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weak_sides_are_never_tree_edges() {
        for n in 3..=6 {
            for g in gen::connected_graphs(n) {
                for r in 0..n {
                    let t = split_decomposition(&g, r).unwrap();
                    let sides = t.edge_splits();
                    for (side, _, strong) in bottoms(&g, r) {
                        let other: Vec<usize> = (0..n).filter(|v| side.binary_search(v).is_err()).collect();
                        let present = sides.contains(&side) || sides.contains(&other);
                        assert_eq!(present, strong, "side {side:?} of {:?} root {r}", g.edges());
                    }
                }
            }
        }
    }

    #[test]
    fn at_most_two_strong_bottoms_per_border() {
        for n in 2..=6 {
            for g in gen::connected_graphs(n) {
                for r in 0..n {
                    let lay = bfs_layering(&g, r);
                    let mut by_border: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
                    for (side, border, strong) in bottoms(&g, r) {
                        if strong {
                            by_border.entry(border).or_default().push(side);
                        }
                    }
                    for (border, sides) in by_border {
                        assert!(sides.len() <= 2, "border {border:?} of {:?} root {r}", g.edges());
                        let h = lay.dist[border[0]];
                        let mut type2 = border.clone();
                        let mut all = border.clone();
                        for c in components_above(&g, &lay, h, true) {
                            let nb = crate::graph::layer_neighborhood(&g, &lay, &c, h);
                            if !nb.iter().all(|v| border.binary_search(v).is_ok()) {
                                continue;
                            }
                            let partial = c.iter().any(|&x| {
                                let k = crate::graph::layer_neighborhood(&g, &lay, &[x], h).len();
                                k > 0 && k < border.len()
                            });
                            if partial {
                                type2.extend(&c);
                            }
                            all.extend(&c);
                        }
                        type2.sort_unstable();
                        all.sort_unstable();
                        for s in &sides {
                            assert!(*s == type2 || *s == all, "side {s:?} border {border:?} of {:?} root {r}", g.edges());
                        }
                    }
                }
            }
        }
    }
}
