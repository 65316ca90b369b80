//! Modular decomposition, and the modules of the upper layers that fit inside
//! one BFS layer.
//!
//! The decomposition recurses on vertex sets. A disconnected set gives a
//! parallel node, a set with disconnected complement gives a series node.
//! Otherwise a vertex `v` of minimum degree is chosen, the maximal modules
//! avoiding `v` are found by partition refinement, and the chain of strong
//! modules containing `v` is read from the forcing graph of the quotient.

use crate::graph::{Graph, Layering};
use crate::partitive::{NodeKind, PNode, PartitiveTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    Series,
    Parallel,
    Prime,
}

/// Modular decomposition tree. `kind[id]` is `None` exactly for leaves.
#[derive(Debug, Clone)]
pub struct ModularTree {
    pub tree: PartitiveTree,
    pub kind: Vec<Option<ModuleKind>>,
}

#[derive(Debug, Clone)]
struct MdNode {
    leaf: Option<usize>,
    kind: Option<ModuleKind>,
    children: Vec<usize>,
}

struct Task {
    verts: Vec<usize>,
    adj: Vec<Vec<u32>>,
    slot: usize,
}

/// Modular decomposition of a non-empty graph.
pub fn modular_decomposition(g: &Graph) -> ModularTree {
    let n = g.vertex_count();
    assert!(n > 0, "empty graph");
    let adj: Vec<Vec<u32>> = (0..n).map(|v| g.neighbors(v).iter().map(|&w| w as u32).collect()).collect();
    let mut arena = vec![MdNode { leaf: None, kind: None, children: vec![] }];
    let mut stack = vec![Task { verts: (0..n).collect(), adj, slot: 0 }];
    let mut scratch = Scratch::default();
    while let Some(task) = stack.pop() {
        decompose(task, &mut arena, &mut stack, &mut scratch);
    }
    normalize(&mut arena, 0);
    to_tree(n, &arena)
}

#[derive(Default)]
struct Scratch {
    mark: Vec<u32>,
    stamp: u32,
}

impl Scratch {
    fn fresh(&mut self, size: usize) -> u32 {
        if self.mark.len() < size {
            self.mark.resize(size, 0);
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        self.stamp
    }
}

fn new_node(arena: &mut Vec<MdNode>) -> usize {
    arena.push(MdNode { leaf: None, kind: None, children: vec![] });
    arena.len() - 1
}

/// Queues one child task per group of local vertices, with adjacency
/// restricted to the group.
fn spawn(
    task: &Task,
    groups: &[Vec<u32>],
    parent: usize,
    arena: &mut Vec<MdNode>,
    stack: &mut Vec<Task>,
) {
    let k = task.verts.len();
    // group id and local index inside the group
    let mut gid = vec![u32::MAX; k];
    let mut idx = vec![0u32; k];
    for (i, grp) in groups.iter().enumerate() {
        for (j, &x) in grp.iter().enumerate() {
            gid[x as usize] = i as u32;
            idx[x as usize] = j as u32;
        }
    }
    for (i, grp) in groups.iter().enumerate() {
        let slot = new_node(arena);
        arena[parent].children.push(slot);
        if grp.len() == 1 {
            arena[slot].leaf = Some(task.verts[grp[0] as usize]);
            continue;
        }
        let verts = grp.iter().map(|&x| task.verts[x as usize]).collect();
        let adj = grp
            .iter()
            .map(|&x| {
                task.adj[x as usize].iter().filter(|&&w| gid[w as usize] == i as u32).map(|&w| idx[w as usize]).collect()
            })
            .collect();
        stack.push(Task { verts, adj, slot });
    }
}

fn components(adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let k = adj.len();
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for s in 0..k {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s as u32];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i] as usize;
            i += 1;
            for &w in &adj[u] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Components of the complement graph, in time linear in the graph size.
fn co_components(adj: &[Vec<u32>], scratch: &mut Scratch) -> Vec<Vec<u32>> {
    let k = adj.len();
    let mut unvisited: Vec<u32> = (0..k as u32).collect();
    let mut out = Vec::new();
    while let Some(s) = unvisited.pop() {
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i] as usize;
            i += 1;
            let stamp = scratch.fresh(k);
            for &w in &adj[u] {
                scratch.mark[w as usize] = stamp;
            }
            let mut kept = Vec::with_capacity(unvisited.len());
            for &w in &unvisited {
                if scratch.mark[w as usize] == stamp {
                    kept.push(w);
                } else {
                    comp.push(w);
                }
            }
            unvisited = kept;
        }
        out.push(comp);
    }
    out
}

fn decompose(task: Task, arena: &mut Vec<MdNode>, stack: &mut Vec<Task>, scratch: &mut Scratch) {
    let k = task.verts.len();
    if k == 1 {
        arena[task.slot].leaf = Some(task.verts[0]);
        return;
    }
    let comps = components(&task.adj);
    if comps.len() > 1 {
        arena[task.slot].kind = Some(ModuleKind::Parallel);
        spawn(&task, &comps, task.slot, arena, stack);
        return;
    }
    let cocomps = co_components(&task.adj, scratch);
    if cocomps.len() > 1 {
        arena[task.slot].kind = Some(ModuleKind::Series);
        spawn(&task, &cocomps, task.slot, arena, stack);
        return;
    }
    prime_spine(task, arena, stack, scratch);
}

/// Both the set and its complement are connected: build the chain of strong
/// modules containing a minimum-degree vertex.
fn prime_spine(task: Task, arena: &mut Vec<MdNode>, stack: &mut Vec<Task>, scratch: &mut Scratch) {
    let k = task.verts.len();
    let v = (0..k).min_by_key(|&x| task.adj[x].len()).unwrap();
    let parts = maximal_modules_avoiding(&task.adj, v);
    let q = parts.len();
    let mut part_of = vec![0u32; k];
    for (i, p) in parts.iter().enumerate() {
        for &x in p {
            part_of[x as usize] = i as u32;
        }
    }
    let vp = part_of[v] as usize;

    // quotient adjacency through representatives
    let qadj: Vec<Vec<u32>> = parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut nb: Vec<u32> = task.adj[p[0] as usize]
                .iter()
                .map(|&w| part_of[w as usize])
                .filter(|&j| j as usize != i)
                .collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    let stamp = scratch.fresh(q);
    for &j in &qadj[vp] {
        scratch.mark[j as usize] = stamp;
    }
    let near_v: Vec<bool> = (0..q).map(|j| scratch.mark[j] == stamp).collect();

    // forcing graph: x must come with every part telling x and v apart
    let mut force: Vec<Vec<u32>> = vec![Vec::new(); q];
    for x in 0..q {
        if x == vp {
            continue;
        }
        let stamp = scratch.fresh(q);
        for &j in &qadj[x] {
            scratch.mark[j as usize] = stamp;
        }
        for &j in &qadj[x] {
            if !near_v[j as usize] && j as usize != vp {
                force[x].push(j);
            }
        }
        for &j in &qadj[vp] {
            if scratch.mark[j as usize] != stamp && j as usize != x {
                force[x].push(j);
            }
        }
    }
    let (scc_of, sccs) = tarjan(&force, vp);

    // level = longest path to a sink in the condensation; sinks first in
    // Tarjan order
    let mut level = vec![0usize; sccs.len()];
    let mut top = 0;
    for (c, members) in sccs.iter().enumerate() {
        let mut l = 0;
        for &x in members {
            for &y in &force[x as usize] {
                let d = scc_of[y as usize] as usize;
                if d != c {
                    l = l.max(level[d] + 1);
                }
            }
        }
        level[c] = l;
        top = top.max(l);
    }
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for (c, &l) in level.iter().enumerate() {
        by_level[l].push(c);
    }

    // the spine, from {v} upwards; the outermost node is the task slot
    let mut below = new_node(arena);
    arena[below].leaf = Some(task.verts[v]);
    for (l, comps) in by_level.iter().enumerate() {
        let slot = if l == top { task.slot } else { new_node(arena) };
        let members: Vec<u32> = comps.iter().flat_map(|&c| sccs[c].iter().copied()).collect();
        let kind = if comps.len() == 1 && sccs[comps[0]].len() >= 2 {
            ModuleKind::Prime
        } else if near_v[members[0] as usize] {
            ModuleKind::Series
        } else {
            ModuleKind::Parallel
        };
        arena[slot].kind = Some(kind);
        arena[slot].children.push(below);
        let groups: Vec<Vec<u32>> = members.iter().map(|&p| parts[p as usize].clone()).collect();
        spawn(&task, &groups, slot, arena, stack);
        below = slot;
    }
}

/// Partition of the local vertices into `{v}` and the maximal modules not
/// containing `v`.
fn maximal_modules_avoiding(adj: &[Vec<u32>], v: usize) -> Vec<Vec<u32>> {
    let k = adj.len();
    let mut nv = vec![false; k];
    for &w in &adj[v] {
        nv[w as usize] = true;
    }
    let near: Vec<u32> = (0..k as u32).filter(|&x| nv[x as usize]).collect();
    let far: Vec<u32> = (0..k as u32).filter(|&x| x as usize != v && !nv[x as usize]).collect();
    let mut r = Refinement::new(k, &[vec![v as u32], near, far]);
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut inside = vec![false; k];
    let mut outside_seen: Vec<u32> = Vec::new();
    while let Some(p) = r.queue.pop() {
        if !r.pending[p] {
            continue;
        }
        r.pending[p] = false;
        let members: Vec<u32> = r.members(p).to_vec();
        // every other part becomes uniform towards the members
        for &x in &members {
            r.refine(adj[x as usize].iter().copied(), Some(p));
        }
        // the members become uniform towards every outside vertex
        for &x in &members {
            inside[x as usize] = true;
        }
        for &x in &members {
            for &w in &adj[x as usize] {
                if !inside[w as usize] {
                    if buckets[w as usize].is_empty() {
                        outside_seen.push(w);
                    }
                    buckets[w as usize].push(x);
                }
            }
        }
        for &x in &members {
            inside[x as usize] = false;
        }
        for w in outside_seen.drain(..) {
            let set = std::mem::take(&mut buckets[w as usize]);
            r.refine(set.iter().copied(), None);
        }
    }
    r.parts()
}

/// Partition refinement over `0..k` with a queue of parts still to be used
/// as pivots. A split of a pending part leaves both halves pending; a split
/// of a finished part queues the smaller half.
struct Refinement {
    perm: Vec<u32>,
    pos: Vec<u32>,
    part: Vec<u32>,
    start: Vec<u32>,
    end: Vec<u32>,
    marked: Vec<u32>,
    pending: Vec<bool>,
    queue: Vec<usize>,
    touched: Vec<u32>,
}

impl Refinement {
    fn new(k: usize, initial: &[Vec<u32>]) -> Refinement {
        let mut r = Refinement {
            perm: Vec::with_capacity(k),
            pos: vec![0; k],
            part: vec![0; k],
            start: vec![],
            end: vec![],
            marked: vec![],
            pending: vec![],
            queue: vec![],
            touched: vec![],
        };
        for block in initial.iter().filter(|b| !b.is_empty()) {
            let id = r.start.len() as u32;
            r.start.push(r.perm.len() as u32);
            for &x in block {
                r.pos[x as usize] = r.perm.len() as u32;
                r.part[x as usize] = id;
                r.perm.push(x);
            }
            r.end.push(r.perm.len() as u32);
            r.marked.push(0);
            r.pending.push(true);
            r.queue.push(id as usize);
        }
        r
    }

    fn members(&self, p: usize) -> &[u32] {
        &self.perm[self.start[p] as usize..self.end[p] as usize]
    }

    fn refine(&mut self, set: impl Iterator<Item = u32>, skip: Option<usize>) {
        for x in set {
            let p = self.part[x as usize] as usize;
            if Some(p) == skip {
                continue;
            }
            let target = self.start[p] + self.marked[p];
            let at = self.pos[x as usize];
            if at < target {
                // already marked
                continue;
            }
            if self.marked[p] == 0 {
                self.touched.push(p as u32);
            }
            let other = self.perm[target as usize];
            self.perm.swap(at as usize, target as usize);
            self.pos[other as usize] = at;
            self.pos[x as usize] = target;
            self.marked[p] += 1;
        }
        for t in std::mem::take(&mut self.touched) {
            let p = t as usize;
            let (s, e, m) = (self.start[p], self.end[p], self.marked[p]);
            self.marked[p] = 0;
            if m == e - s {
                continue;
            }
            let id = self.start.len();
            self.start.push(s);
            self.end.push(s + m);
            self.marked.push(0);
            self.start[p] = s + m;
            for i in s..s + m {
                self.part[self.perm[i as usize] as usize] = id as u32;
            }
            // a pending part keeps both halves pending; otherwise queue the smaller
            if self.pending[p] || m <= e - s - m {
                self.pending.push(true);
                self.queue.push(id);
            } else {
                self.pending.push(false);
                self.pending[p] = true;
                self.queue.push(p);
            }
        }
    }

    fn parts(&self) -> Vec<Vec<u32>> {
        (0..self.start.len()).map(|p| self.members(p).to_vec()).collect()
    }
}

/// Strongly connected components, emitted sinks first. `skip` is left out.
fn tarjan(g: &[Vec<u32>], skip: usize) -> (Vec<u32>, Vec<Vec<u32>>) {
    let n = g.len();
    const NONE: u32 = u32::MAX;
    let mut index = vec![NONE; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut scc_of = vec![NONE; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut sccs: Vec<Vec<u32>> = Vec::new();
    let mut counter = 0u32;
    let mut call: Vec<(u32, usize)> = Vec::new();
    for s in 0..n {
        if s == skip || index[s] != NONE {
            continue;
        }
        call.push((s as u32, 0));
        index[s] = counter;
        low[s] = counter;
        counter += 1;
        stack.push(s as u32);
        on_stack[s] = true;
        while let Some(&mut (u, ref mut i)) = call.last_mut() {
            let u = u as usize;
            if *i < g[u].len() {
                let w = g[u][*i] as usize;
                *i += 1;
                if index[w] == NONE {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w as u32, 0));
                } else if on_stack[w] {
                    low[u] = low[u].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(p, _)) = call.last() {
                low[p as usize] = low[p as usize].min(low[u]);
            }
            if low[u] == index[u] {
                let id = sccs.len() as u32;
                let mut comp = Vec::new();
                loop {
                    let x = stack.pop().unwrap();
                    on_stack[x as usize] = false;
                    scc_of[x as usize] = id;
                    comp.push(x);
                    if x as usize == u {
                        break;
                    }
                }
                sccs.push(comp);
            }
        }
    }
    (scc_of, sccs)
}

/// Splices series children of series nodes and parallel children of
/// parallel nodes into their parents.
fn normalize(arena: &mut [MdNode], root: usize) {
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        order.push(u);
        stack.extend(arena[u].children.iter().copied());
    }
    for &u in order.iter().rev() {
        let Some(kind) = arena[u].kind else { continue };
        if kind == ModuleKind::Prime {
            continue;
        }
        let children = std::mem::take(&mut arena[u].children);
        let mut out = Vec::with_capacity(children.len());
        for c in children {
            if arena[c].kind == Some(kind) {
                out.extend(std::mem::take(&mut arena[c].children));
            } else {
                out.push(c);
            }
        }
        arena[u].children = out;
    }
}

fn to_tree(n: usize, arena: &[MdNode]) -> ModularTree {
    // drop spliced nodes by renumbering from the root
    let mut id = vec![usize::MAX; arena.len()];
    let mut order = vec![0];
    id[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &c in &arena[u].children {
            id[c] = order.len();
            order.push(c);
        }
    }
    let mut nodes = Vec::with_capacity(order.len());
    let mut kind = Vec::with_capacity(order.len());
    for &u in &order {
        let node = &arena[u];
        let k = match (node.leaf, node.kind) {
            (Some(v), _) => NodeKind::Leaf(v),
            (None, Some(ModuleKind::Prime)) => NodeKind::Prime,
            _ => NodeKind::Complete,
        };
        nodes.push(PNode { kind: k, parent: None, children: node.children.iter().map(|&c| id[c]).collect() });
        kind.push(node.kind);
    }
    ModularTree { tree: PartitiveTree::from_arena(n, nodes, 0), kind }
}

/// Modules of the graph up to layer `h` that are contained in layer `h`.
///
/// Leaves are indexed by position in `layer`. The node sets of all trees in
/// `nodes` under `roots`, together with the unions of at least two children
/// of Complete nodes, are exactly the non-singleton members; singletons are
/// always members.
#[derive(Debug, Clone)]
pub struct ModuleForest {
    pub layer: Vec<usize>,
    pub nodes: Vec<PNode>,
    pub roots: Vec<usize>,
    pub contains_layer: bool,
}

impl ModuleForest {
    /// Partitive tree of the members plus the whole layer.
    pub fn tree_with_layer(&self) -> PartitiveTree {
        let k = self.layer.len();
        let mut nodes = self.nodes.clone();
        let mut covered = vec![false; k];
        for n in &nodes {
            if let NodeKind::Leaf(e) = n.kind {
                covered[e] = true;
            }
        }
        if self.contains_layer {
            let root = self.roots[0];
            return PartitiveTree::from_arena(k, nodes, root);
        }
        let mut children = self.roots.clone();
        for (e, &c) in covered.iter().enumerate() {
            if !c {
                nodes.push(PNode { kind: NodeKind::Leaf(e), parent: None, children: vec![] });
                children.push(nodes.len() - 1);
            }
        }
        let kind = if children.len() >= 3 { NodeKind::Prime } else { NodeKind::Complete };
        nodes.push(PNode { kind, parent: None, children });
        let root = nodes.len() - 1;
        PartitiveTree::from_arena(k, nodes, root)
    }

    /// Total size of the node sets of the forest, counting each node once
    /// plus its leaves.
    pub fn generator_norm(&self) -> usize {
        let mut size = vec![0usize; self.nodes.len()];
        let mut total = 0;
        let mut stack: Vec<(usize, bool)> = self.roots.iter().map(|&r| (r, false)).collect();
        while let Some((u, done)) = stack.pop() {
            if done {
                size[u] = match self.nodes[u].kind {
                    NodeKind::Leaf(_) => 1,
                    _ => self.nodes[u].children.iter().map(|&c| size[c]).sum(),
                };
                total += 1 + size[u];
                continue;
            }
            stack.push((u, true));
            for &c in &self.nodes[u].children {
                stack.push((c, false));
            }
        }
        total
    }
}

/// Modules of `G[≤ h]` inside layer `h`, read off the modular decomposition
/// of the two layers `h - 1` and `h`.
pub fn layer_restricted_modules(g: &Graph, lay: &Layering, h: usize) -> ModuleForest {
    assert!(h >= 1 && h <= lay.max_dist(), "layer out of range");
    let layer = lay.layer(h).to_vec();
    let mut verts: Vec<usize> = lay.layer(h - 1).to_vec();
    verts.extend_from_slice(&layer);
    let sub = g.induced(&verts);
    let md = modular_decomposition(&sub);
    let upper = lay.layer(h - 1).len();
    // local index in `layer` for marked leaves
    let local = |x: usize| if x >= upper { Some(x - upper) } else { None };

    let t = &md.tree;
    let order = t.preorder();
    let mut marked = vec![0usize; t.node_count()];
    let mut total = vec![0usize; t.node_count()];
    for &u in order.iter().rev() {
        match t.node(u).kind {
            NodeKind::Leaf(x) => {
                total[u] = 1;
                marked[u] = usize::from(local(x).is_some());
            }
            _ => {
                for &c in &t.node(u).children {
                    total[u] += total[c];
                    marked[u] += marked[c];
                }
            }
        }
    }

    let mut out = ModuleForest { layer, nodes: Vec::new(), roots: Vec::new(), contains_layer: false };
    // copies a fully marked subtree
    fn copy(t: &PartitiveTree, u: usize, local: &dyn Fn(usize) -> Option<usize>, nodes: &mut Vec<PNode>) -> usize {
        let kind = match t.node(u).kind {
            NodeKind::Leaf(x) => NodeKind::Leaf(local(x).unwrap()),
            k => k,
        };
        let children = t.node(u).children.iter().map(|&c| copy(t, c, local, nodes)).collect();
        nodes.push(PNode { kind, parent: None, children });
        nodes.len() - 1
    }
    // roots produced for the marked part of `u`
    let mut stack = vec![t.root()];
    let mut pending: Vec<usize> = Vec::new();
    while let Some(u) = stack.pop() {
        if marked[u] == 0 {
            continue;
        }
        if marked[u] == total[u] {
            pending.push(copy(t, u, &local, &mut out.nodes));
            continue;
        }
        let full: Vec<usize> = t.node(u).children.iter().copied().filter(|&c| marked[c] == total[c]).collect();
        let complete = t.node(u).kind == NodeKind::Complete;
        if complete && full.len() >= 2 {
            let children = full.iter().map(|&c| copy(t, c, &local, &mut out.nodes)).collect();
            out.nodes.push(PNode { kind: NodeKind::Complete, parent: None, children });
            pending.push(out.nodes.len() - 1);
        } else {
            for &c in &full {
                pending.push(copy(t, c, &local, &mut out.nodes));
            }
        }
        for &c in &t.node(u).children {
            if marked[c] > 0 && marked[c] < total[c] {
                stack.push(c);
            }
        }
    }
    // singleton roots carry no information beyond the implicit singletons
    let k = out.layer.len();
    let mut size = vec![0usize; out.nodes.len()];
    for i in 0..out.nodes.len() {
        // children precede parents in the arena
        size[i] = match out.nodes[i].kind {
            NodeKind::Leaf(_) => 1,
            _ => out.nodes[i].children.iter().map(|&c| size[c]).sum(),
        };
    }
    out.roots = pending.into_iter().filter(|&r| size[r] > 1 || k == 1).collect();
    out.contains_layer = out.roots.len() == 1 && size[out.roots[0]] == k;
    compact(&mut out);
    out
}

/// Removes arena nodes not reachable from a root.
fn compact(f: &mut ModuleForest) {
    let mut id = vec![usize::MAX; f.nodes.len()];
    let mut order = Vec::new();
    let mut stack: Vec<usize> = f.roots.clone();
    while let Some(u) = stack.pop() {
        id[u] = order.len();
        order.push(u);
        stack.extend(f.nodes[u].children.iter().copied());
    }
    let nodes = order
        .iter()
        .map(|&u| PNode {
            kind: f.nodes[u].kind,
            parent: None,
            children: f.nodes[u].children.iter().map(|&c| id[c]).collect(),
        })
        .collect();
    f.roots = f.roots.iter().map(|&r| id[r]).collect();
    f.nodes = nodes;
    for i in 0..f.nodes.len() {
        for k in 0..f.nodes[i].children.len() {
            let c = f.nodes[i].children[k];
            f.nodes[c].parent = Some(i);
        }
    }
}
