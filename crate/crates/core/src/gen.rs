//! Graph generators: seeded random graphs, named families and small graphs up
//! to isomorphism.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("no connected simple graph has {n} vertices and {m} edges")]
    Infeasible { n: usize, m: usize },
}

/// Random connected graph: a random spanning tree plus uniformly chosen
/// extra edges.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, m: usize) -> Result<Graph, GenError> {
    let max = n * n.saturating_sub(1) / 2;
    if n < 2 || m + 1 < n || m > max {
        return Err(GenError::Infeasible { n, m });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(m);
    let mut list = Vec::with_capacity(m);
    let add = |a: usize, b: usize, edges: &mut HashSet<(usize, usize)>, list: &mut Vec<(usize, usize)>| {
        let e = (a.min(b), a.max(b));
        if a != b && edges.insert(e) {
            list.push(e);
            true
        } else {
            false
        }
    };
    for i in 1..n {
        let j = rng.gen_range(0..i);
        add(order[i], order[j], &mut edges, &mut list);
    }
    if 2 * m > max {
        // dense: pick the extra edges from the complement
        let mut rest: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|e| !edges.contains(e)).collect();
        rest.shuffle(rng);
        list.extend(rest.into_iter().take(m - (n - 1)));
    } else {
        while list.len() < m {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            add(a, b, &mut edges, &mut list);
        }
    }
    list.sort_unstable();
    Ok(Graph::from_edges(n, &list).expect("generated edges are valid"))
}

/// Random connected cograph: a random join/union expression whose top
/// operation is a join.
pub fn random_cograph<R: Rng>(rng: &mut R, n: usize) -> Graph {
    fn build<R: Rng>(rng: &mut R, verts: &[usize], join: bool, edges: &mut Vec<(usize, usize)>) {
        if verts.len() == 1 {
            return;
        }
        let cut = rng.gen_range(1..verts.len());
        let (a, b) = verts.split_at(cut);
        if join {
            for &x in a {
                for &y in b {
                    edges.push((x.min(y), x.max(y)));
                }
            }
        }
        for part in [a, b] {
            let next = if rng.gen_bool(0.5) { join } else { !join };
            build(rng, part, next, edges);
        }
    }
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(rng);
    let mut edges = Vec::new();
    build(rng, &verts, true, &mut edges);
    Graph::from_edges(n, &edges).expect("valid cograph")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// `K_{1,k}` with the hub as vertex 0.
pub fn star(k: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
    Graph::from_edges(k + 1, &edges).unwrap()
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).unwrap()
}

/// One representative of every isomorphism class of graphs on `n ≤ 8`
/// vertices, connected or not.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 8, "enumeration is limited to 8 vertices");
    let mut reps: Vec<Vec<u8>> = vec![vec![]];
    for k in 1..=n {
        let mut seen: HashSet<u64> = HashSet::new();
        let mut next = Vec::new();
        for g in &reps {
            for nb in 0..(1u16 << (k - 1)) {
                let mut adj = g.clone();
                adj.push(nb as u8);
                for (v, row) in adj.iter_mut().enumerate().take(k - 1) {
                    if nb & (1 << v) != 0 {
                        *row |= 1 << (k - 1);
                    }
                }
                if seen.insert(canonical_code(&adj)) {
                    next.push(adj);
                }
            }
        }
        reps = next;
    }
    reps.into_iter()
        .map(|adj| {
            let mut edges = Vec::new();
            for (a, row) in adj.iter().enumerate() {
                for b in a + 1..n {
                    if row & (1 << b) != 0 {
                        edges.push((a, b));
                    }
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

/// Connected representatives from [`all_graphs`].
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(|g| g.is_connected()).collect()
}

/// Largest adjacency code over the orderings compatible with a degree-based
/// vertex invariant.
fn canonical_code(adj: &[u8]) -> u64 {
    let n = adj.len();
    let deg: Vec<u32> = adj.iter().map(|r| r.count_ones()).collect();
    let inv: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = (0..n).filter(|&w| adj[v] & (1 << w) != 0).map(|w| deg[w]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &verts {
        match cells.last_mut() {
            Some(c) if inv[c[0]] == inv[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = 0u64;
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(adj, &cells, 0, &mut order, &mut used, &mut best);
    best
}

fn search(adj: &[u8], cells: &[Vec<usize>], cell: usize, order: &mut Vec<usize>, used: &mut [bool], best: &mut u64) {
    if cell == cells.len() {
        let n = order.len();
        let mut code = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                code = (code << 1) | ((adj[order[i]] >> order[j]) & 1) as u64;
            }
        }
        *best = (*best).max(code);
        return;
    }
    let c = &cells[cell];
    let placed = c.iter().filter(|&&v| used[v]).count();
    if placed == c.len() {
        search(adj, cells, cell + 1, order, used, best);
        return;
    }
    for &v in c {
        if !used[v] {
            used[v] = true;
            order.push(v);
            search(adj, cells, cell, order, used, best);
            order.pop();
            used[v] = false;
        }
    }
}
