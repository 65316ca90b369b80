//! Exhaustive reference implementations. Everything here is exponential and
//! only meant for small inputs in tests.

use thiserror::Error;

use crate::graph::{Graph, Layering};
use crate::set_family::SetFamily;
use crate::split_tree::{SplitKind, SplitTree};

/// Largest vertex count accepted by split enumeration.
pub const SPLIT_CAP: usize = 16;
/// Largest vertex count accepted by [`reference_tree`].
pub const TREE_CAP: usize = 12;
/// Largest ground set accepted by [`brute_orthogonal`].
pub const ORTHO_CAP: usize = 16;
/// Largest vertex count accepted by [`brute_modules`].
pub const MODULE_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("size {size} exceeds the oracle cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("graph is disconnected")]
    Disconnected,
}

fn check_cap(size: usize, cap: usize) -> Result<(), OracleError> {
    if size > cap {
        Err(OracleError::TooLarge { size, cap })
    } else {
        Ok(())
    }
}

type Mask = u32;

fn to_mask(set: &[usize]) -> Mask {
    set.iter().fold(0, |m, &v| m | (1 << v))
}

fn from_mask(mut m: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

fn adjacency(g: &Graph) -> Vec<Mask> {
    (0..g.vertex_count()).map(|v| to_mask(g.neighbors(v))).collect()
}

/// A split `(x1, x2)` with its attachment sets: `v2` is the part of `x1` with
/// neighbours in `x2`, `v3` the part of `x2` with neighbours in `x1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitWitness {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
    pub v4: Vec<usize>,
}

impl SplitWitness {
    /// Both sides have at least two vertices.
    pub fn is_nontrivial(&self) -> bool {
        self.x1.len() >= 2 && self.x2.len() >= 2
    }
}

fn split_attachments(adj: &[Mask], full: Mask, x1: Mask) -> Option<(Mask, Mask)> {
    let x2 = full & !x1;
    let (mut v2, mut v3) = (0, 0);
    for v in from_mask(x1) {
        if adj[v] & x2 != 0 {
            v2 |= 1 << v;
        }
    }
    for v in from_mask(x2) {
        if adj[v] & x1 != 0 {
            v3 |= 1 << v;
        }
    }
    for v in from_mask(v2) {
        if adj[v] & x2 != v3 {
            return None;
        }
    }
    Some((v2, v3))
}

fn witness(full: Mask, x1: Mask, v2: Mask, v3: Mask) -> SplitWitness {
    let x2 = full & !x1;
    SplitWitness {
        x1: from_mask(x1),
        x2: from_mask(x2),
        v1: from_mask(x1 & !v2),
        v2: from_mask(v2),
        v3: from_mask(v3),
        v4: from_mask(x2 & !v3),
    }
}

/// Split witness for the bipartition `(x1, V ∖ x1)`, if it is a split.
pub fn is_split(g: &Graph, x1: &[usize]) -> Result<Option<SplitWitness>, OracleError> {
    let n = g.vertex_count();
    check_cap(n, SPLIT_CAP)?;
    let full: Mask = ((1u64 << n) - 1) as Mask;
    let x1m = to_mask(x1);
    if x1m == 0 || x1m == full {
        return Ok(None);
    }
    let adj = adjacency(g);
    Ok(split_attachments(&adj, full, x1m).map(|(v2, v3)| witness(full, x1m, v2, v3)))
}

/// Split sides as masks, one per unordered bipartition, each given by the
/// side not containing vertex `anchor`.
fn split_masks(g: &Graph, anchor: usize) -> Result<Vec<(Mask, Mask, Mask)>, OracleError> {
    let n = g.vertex_count();
    check_cap(n, SPLIT_CAP)?;
    let full: Mask = ((1u64 << n) - 1) as Mask;
    let adj = adjacency(g);
    let others = full & !(1 << anchor);
    let mut out = Vec::new();
    // enumerate non-empty subsets of the vertices other than the anchor
    let mut side = others;
    while side != 0 {
        let x1 = full & !side;
        if let Some((v2, v3)) = split_attachments(&adj, full, x1) {
            out.push((side, v3, v2));
        }
        side = (side - 1) & others;
    }
    out.sort_unstable();
    Ok(out)
}

/// Every split, trivial ones included. `x1` always contains vertex 0.
pub fn enumerate_splits(g: &Graph) -> Result<Vec<SplitWitness>, OracleError> {
    let n = g.vertex_count();
    check_cap(n, SPLIT_CAP)?;
    if n < 2 {
        return Ok(Vec::new());
    }
    let full: Mask = ((1u64 << n) - 1) as Mask;
    Ok(split_masks(g, 0)?
        .into_iter()
        .map(|(side, v3, v2)| witness(full, full & !side, v2, v3))
        .collect())
}

fn masks_cross(a: Mask, b: Mask, full: Mask) -> bool {
    let (ca, cb) = (full & !a, full & !b);
    a & b != 0 && a & cb != 0 && ca & b != 0 && ca & cb != 0
}

/// Two bipartitions cross when all four pairwise intersections are
/// non-empty.
pub fn crosses(s1: &SplitWitness, s2: &SplitWitness) -> bool {
    let n = s1.x1.iter().chain(&s1.x2).count();
    let full: Mask = ((1u64 << n) - 1) as Mask;
    masks_cross(to_mask(&s1.x1), to_mask(&s2.x1), full)
}

/// Sides (not containing `anchor`) of the splits crossing no other split.
fn strong_masks(g: &Graph, anchor: usize) -> Result<Vec<Mask>, OracleError> {
    let n = g.vertex_count();
    let full: Mask = ((1u64 << n) - 1) as Mask;
    let all: Vec<Mask> = split_masks(g, anchor)?.into_iter().map(|s| s.0).collect();
    Ok(all
        .iter()
        .copied()
        .filter(|&a| {
            a.count_ones() < 2 || (n as u32 - a.count_ones()) < 2 || !all.iter().any(|&b| masks_cross(a, b, full))
        })
        .collect())
}

pub fn strong_splits(g: &Graph) -> Result<Vec<SplitWitness>, OracleError> {
    let strong = strong_masks(g, 0)?;
    Ok(enumerate_splits(g)?.into_iter().filter(|s| strong.contains(&to_mask(&s.x2))).collect())
}

/// Graph on the parts with an edge whenever some pair across two parts is
/// adjacent.
pub fn quotient_graph(g: &Graph, parts: &[Vec<usize>]) -> Graph {
    let mut part_of = vec![usize::MAX; g.vertex_count()];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            part_of[v] = i;
        }
    }
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        let (a, b) = (part_of[u], part_of[v]);
        if a != usize::MAX && b != usize::MAX && a != b {
            edges.push((a.min(b), a.max(b)));
        }
    }
    Graph::from_edges(parts.len(), &edges).expect("parts are in range")
}

/// Label of a tree node whose incident parts have quotient `q`, with the
/// index of the dominating part for stars.
fn quotient_label(q: &Graph) -> (SplitKind, Option<usize>) {
    let k = q.vertex_count();
    if q.edge_count() == k * (k - 1) / 2 {
        return (SplitKind::Clique, None);
    }
    if q.edge_count() == k - 1 {
        if let Some(c) = (0..k).find(|&v| q.degree(v) == k - 1) {
            return (SplitKind::Star, Some(c));
        }
    }
    (SplitKind::Prime, None)
}

/// Split tree built directly from the strong splits: the sides avoiding `r`
/// are laminar and become the nodes, `r` hangs off the largest one, and each
/// node is labelled from the quotient on its incident parts.
pub fn reference_tree(g: &Graph, r: usize) -> Result<SplitTree, OracleError> {
    let n = g.vertex_count();
    check_cap(n, TREE_CAP)?;
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let mut t = SplitTree::with_leaves(n);
    if n == 1 {
        return Ok(t);
    }
    if n == 2 {
        t.add_edge(0, 1);
        return Ok(t);
    }
    let full: Mask = ((1u64 << n) - 1) as Mask;
    let mut sets = strong_masks(g, r)?;
    sets.retain(|s| s.count_ones() >= 2);
    // larger first, so every set's parent is already placed
    sets.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
    let ids: Vec<usize> = sets.iter().map(|_| t.add_internal(SplitKind::Prime)).collect();
    let mut parent_of_leaf = vec![usize::MAX; n];
    let mut parent_of_set = vec![usize::MAX; sets.len()];
    for (i, &s) in sets.iter().enumerate() {
        // smallest earlier set containing s
        parent_of_set[i] = (0..i).rev().find(|&j| sets[j] & s == s).unwrap_or(usize::MAX);
        for v in from_mask(s) {
            parent_of_leaf[v] = i;
        }
    }
    debug_assert_eq!(sets[0], full & !(1 << r));
    t.add_edge(r, ids[0]);
    for v in 0..n {
        if v != r {
            t.add_edge(v, ids[parent_of_leaf[v]]);
        }
    }
    for i in 1..sets.len() {
        t.add_edge(ids[i], ids[parent_of_set[i]]);
    }
    for (i, &s) in sets.iter().enumerate() {
        // parts: the outside first, then one per neighbour below
        let mut parts = vec![from_mask(full & !s)];
        let mut owners = vec![if i == 0 { r } else { ids[parent_of_set[i]] }];
        for v in from_mask(s) {
            if parent_of_leaf[v] == i {
                parts.push(vec![v]);
                owners.push(v);
            }
        }
        for j in i + 1..sets.len() {
            if parent_of_set[j] == i {
                parts.push(from_mask(sets[j]));
                owners.push(ids[j]);
            }
        }
        let (kind, center) = quotient_label(&quotient_graph(g, &parts));
        t.set_kind(ids[i], kind);
        if let Some(c) = center {
            t.set_center(ids[i], owners[c]);
        }
    }
    t.contract_degree_two();
    Ok(t)
}

/// Every non-empty subset of the ground set overlapping no member of `f`,
/// sorted.
pub fn brute_orthogonal(f: &SetFamily) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = f.ground();
    check_cap(n, ORTHO_CAP)?;
    let members: Vec<Mask> = f.members().iter().map(|m| to_mask(m)).collect();
    let mut out = Vec::new();
    for s in 1..(1u64 << n) as Mask {
        let ok = members.iter().all(|&m| {
            let i = m & s;
            i == 0 || i == m || i == s
        });
        if ok {
            out.push(from_mask(s));
        }
    }
    out.sort();
    Ok(out)
}

/// Every module of `g`, sorted.
pub fn brute_modules(g: &Graph) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = g.vertex_count();
    check_cap(n, MODULE_CAP)?;
    let adj = adjacency(g);
    let mut out = Vec::new();
    for s in 1..(1u64 << n) as Mask {
        let ok = (0..n).all(|v| {
            if s & (1 << v) != 0 {
                return true;
            }
            let a = adj[v] & s;
            a == 0 || a == s
        });
        if ok {
            out.push(from_mask(s));
        }
    }
    out.sort();
    Ok(out)
}

/// Attachment sets of the splits whose side avoiding the root has its
/// attachment in layer `h`, sorted.
pub fn brute_borders(g: &Graph, lay: &Layering, h: usize) -> Result<Vec<Vec<usize>>, OracleError> {
    let mut out: Vec<Vec<usize>> = split_masks(g, lay.root)?
        .into_iter()
        .map(|(_, v3, _)| from_mask(v3))
        .filter(|v3| !v3.is_empty() && v3.iter().all(|&v| lay.dist[v] == h))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Root-free sides of the strong splits whose attachment set lies at
/// distance at least `h`, sorted.
pub fn strong_bottoms(g: &Graph, lay: &Layering, h: usize) -> Result<Vec<Vec<usize>>, OracleError> {
    let strong = strong_masks(g, lay.root)?;
    let mut out: Vec<Vec<usize>> = strong
        .into_iter()
        .map(from_mask)
        .filter(|s| s.iter().all(|&v| lay.dist[v] >= h))
        .collect();
    out.sort();
    Ok(out)
}

/// Every module of `G[≤ h]` contained in layer `h`, sorted.
pub fn brute_layer_modules(g: &Graph, lay: &Layering, h: usize) -> Result<Vec<Vec<usize>>, OracleError> {
    let keep: Vec<usize> = (0..g.vertex_count()).filter(|&v| lay.dist[v] <= h).collect();
    let sub = g.induced(&keep);
    Ok(brute_modules(&sub)?
        .into_iter()
        .map(|m| m.into_iter().map(|i| keep[i]).collect::<Vec<_>>())
        .filter(|m| m.iter().all(|&v| lay.dist[v] == h))
        .collect::<Vec<_>>())
    .map(|mut v: Vec<Vec<usize>>| {
        v.sort();
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_layering, load_graph};

    fn p4() -> Graph {
        load_graph("a b\nb c\nc d").unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..i {
                edges.push((j, i));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn is_split_examples() {
        let g = p4();
        let w = is_split(&g, &[0, 1]).unwrap().unwrap();
        assert_eq!(w.v2, vec![1]);
        assert_eq!(w.v3, vec![2]);
        assert_eq!(w.v1, vec![0]);
        assert_eq!(w.v4, vec![3]);
        assert!(is_split(&g, &[1, 2]).unwrap().is_none());
        let k4 = complete(4);
        for s in 1..15usize {
            let x1: Vec<usize> = (0..4).filter(|&i| s & (1 << i) != 0).collect();
            assert!(is_split(&k4, &x1).unwrap().is_some());
        }
    }

    #[test]
    fn enumerate_examples() {
        let splits = enumerate_splits(&p4()).unwrap();
        assert_eq!(splits.len(), 5);
        assert_eq!(splits.iter().filter(|s| s.is_nontrivial()).count(), 1);
        assert_eq!(enumerate_splits(&complete(4)).unwrap().len(), 7);
        let c5 = enumerate_splits(&cycle(5)).unwrap();
        assert!(c5.iter().all(|s| !s.is_nontrivial()));
        assert_eq!(c5.len(), 5);
        assert!(matches!(enumerate_splits(&cycle(17)), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn crossing_examples() {
        let k4 = complete(4);
        let a = is_split(&k4, &[0, 1]).unwrap().unwrap();
        let b = is_split(&k4, &[0, 2]).unwrap().unwrap();
        assert!(crosses(&a, &b));
        let g = p4();
        let mid = is_split(&g, &[0, 1]).unwrap().unwrap();
        let triv = is_split(&g, &[0]).unwrap().unwrap();
        assert!(!crosses(&mid, &triv));
        for s in enumerate_splits(&k4).unwrap() {
            if !s.is_nontrivial() {
                assert!(enumerate_splits(&k4).unwrap().iter().all(|o| !crosses(&s, o)));
            }
        }
        assert_eq!(strong_splits(&k4).unwrap().len(), 4);
        assert_eq!(strong_splits(&g).unwrap().len(), 5);
    }

    #[test]
    fn quotient_examples() {
        let g = p4();
        let q = quotient_graph(&g, &[vec![0], vec![1], vec![2, 3]]);
        assert_eq!(q.edges(), vec![(0, 1), (1, 2)]);
        let k4 = complete(4);
        let q = quotient_graph(&k4, &[vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(q.edge_count(), 6);
        let star = load_graph("c x\nc y\nc z").unwrap();
        let q = quotient_graph(&star, &[vec![0], vec![1], vec![2, 3]]);
        assert_eq!(q.edges(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn reference_tree_examples() {
        let t = reference_tree(&complete(4), 2).unwrap();
        t.validate().unwrap();
        assert_eq!(t.canonical(), "0 -- (C 1 2 3)");
        let t = reference_tree(&p4(), 0).unwrap();
        t.validate().unwrap();
        assert_eq!(t.canonical(), "0 -- (S *1 (S *2 3))");
        for r in 0..5 {
            assert_eq!(reference_tree(&cycle(5), r).unwrap().canonical(), "0 -- (P 1 2 3 4)");
        }
        let star = load_graph("c x\nc y\nc z").unwrap();
        assert_eq!(reference_tree(&star, 1).unwrap().canonical(), "0 -- (S^ 1 2 3)");
        assert_eq!(reference_tree(&star, 0).unwrap().canonical(), "0 -- (S^ 1 2 3)");
    }

    #[test]
    fn orthogonal_examples() {
        let f = SetFamily::from_sets(4, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let got = brute_orthogonal(&f).unwrap();
        assert_eq!(got, vec![vec![0], vec![0, 1, 2], vec![0, 1, 2, 3], vec![1], vec![2], vec![3]]);
        assert_eq!(brute_orthogonal(&SetFamily::new(2)).unwrap().len(), 3);
        let f = SetFamily::from_sets(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(brute_orthogonal(&f).unwrap().len(), 7);
    }

    #[test]
    fn module_examples() {
        assert_eq!(brute_modules(&p4()).unwrap(), vec![vec![0], vec![0, 1, 2, 3], vec![1], vec![2], vec![3]]);
        assert_eq!(brute_modules(&complete(3)).unwrap().len(), 7);
        let mods = brute_modules(&cycle(4)).unwrap();
        assert_eq!(mods.len(), 7);
        assert!(mods.contains(&vec![0, 2]) && mods.contains(&vec![1, 3]));
    }

    #[test]
    fn border_examples() {
        // r=0, u=1, v=2, w=3 with r-u, r-v, u-w, v-w
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let lay = bfs_layering(&g, 0);
        assert_eq!(brute_borders(&g, &lay, 1).unwrap(), vec![vec![1], vec![1, 2], vec![2]]);
        assert_eq!(brute_borders(&g, &lay, 2).unwrap(), vec![vec![3]]);
        let g = p4();
        let lay = bfs_layering(&g, 0);
        assert_eq!(brute_borders(&g, &lay, 2).unwrap(), vec![vec![2]]);
    }

    #[test]
    fn splits_lift_through_quotients() {
        // two crossing splits of a clique live in a common clique partition
        let g = complete(5);
        let splits = enumerate_splits(&g).unwrap();
        let crossing = splits.iter().filter(|a| splits.iter().any(|b| crosses(a, b))).count();
        assert_eq!(crossing, splits.iter().filter(|s| s.is_nontrivial()).count());
    }
}
