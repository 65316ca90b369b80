//! Partitive trees: rooted trees whose leaves are ground elements and whose
//! internal nodes are labelled Prime or Complete.
//!
//! A tree represents every node set, plus every union of at least one child
//! of a Complete node.

use std::fmt::Write as _;

use rand::Rng;

use crate::set_family::{partition_refine, FamilyError, SetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf(usize),
    Prime,
    Complete,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PNode {
    pub kind: NodeKind,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitiveTree {
    nodes: Vec<PNode>,
    root: usize,
    ground: usize,
    leaf_of: Vec<usize>,
}

impl PartitiveTree {
    /// Assembles a tree from an arena. Parent links are recomputed from the
    /// child lists. Panics if the leaves are not a bijection with `0..ground`.
    pub fn from_arena(ground: usize, mut nodes: Vec<PNode>, root: usize) -> PartitiveTree {
        for n in nodes.iter_mut() {
            n.parent = None;
        }
        for i in 0..nodes.len() {
            for k in 0..nodes[i].children.len() {
                let c = nodes[i].children[k];
                nodes[c].parent = Some(i);
            }
        }
        let mut leaf_of = vec![usize::MAX; ground];
        for (i, n) in nodes.iter().enumerate() {
            if let NodeKind::Leaf(e) = n.kind {
                assert!(e < ground && leaf_of[e] == usize::MAX, "leaf {e} repeated or out of range");
                leaf_of[e] = i;
            }
        }
        assert!(leaf_of.iter().all(|&l| l != usize::MAX), "some element has no leaf");
        PartitiveTree { nodes, root, ground, leaf_of }
    }

    /// Single node over `ground` leaves.
    pub fn flat(ground: usize, kind: NodeKind) -> PartitiveTree {
        if ground == 1 {
            return PartitiveTree::from_arena(
                1,
                vec![PNode { kind: NodeKind::Leaf(0), parent: None, children: vec![] }],
                0,
            );
        }
        let mut nodes: Vec<PNode> = (0..ground)
            .map(|e| PNode { kind: NodeKind::Leaf(e), parent: None, children: vec![] })
            .collect();
        let kind = if ground == 2 { NodeKind::Complete } else { kind };
        nodes.push(PNode { kind, parent: None, children: (0..ground).collect() });
        PartitiveTree::from_arena(ground, nodes, ground)
    }

    /// Builds the inclusion tree of a laminar collection of sets. The ground
    /// set and all singletons are added. `prime[i]` requests a Prime label for
    /// `sets[i]`; nodes with two children are always Complete. Returns the
    /// tree and, for each input set, its node. Duplicated sets share a node;
    /// a set is Prime if any of its copies asks for it.
    pub fn from_laminar(ground: usize, sets: &[Vec<usize>], prime: &[bool]) -> (PartitiveTree, Vec<usize>) {
        assert!(ground >= 1);
        // candidate list: ground, then the input sets, then singletons
        let total = sets.len() + 1;
        let size_of = |i: usize| if i == 0 { ground } else { sets[i - 1].len() };
        let mut order: Vec<usize> = (0..total).collect();
        // stable, so the ground set stays first among equal sizes
        order.sort_by_key(|&i| std::cmp::Reverse(size_of(i)));

        let mut nodes: Vec<PNode> = Vec::new();
        let mut node_size: Vec<usize> = Vec::new();
        let mut node_prime: Vec<bool> = Vec::new();
        let mut owner = vec![usize::MAX; ground];
        let mut slot = vec![usize::MAX; total];
        for &i in &order {
            let size = size_of(i);
            if size <= 1 && i != 0 {
                continue;
            }
            if i == 0 {
                let id = nodes.len();
                nodes.push(PNode { kind: NodeKind::Complete, parent: None, children: vec![] });
                node_size.push(ground);
                node_prime.push(false);
                owner.iter_mut().for_each(|o| *o = id);
                slot[0] = id;
                continue;
            }
            let set = &sets[i - 1];
            let par = owner[set[0]];
            if node_size[par] == size {
                // equal to an existing node
                slot[i] = par;
                node_prime[par] |= prime[i - 1];
                continue;
            }
            let id = nodes.len();
            nodes.push(PNode { kind: NodeKind::Complete, parent: Some(par), children: vec![] });
            node_size.push(size);
            node_prime.push(prime[i - 1]);
            nodes[par].children.push(id);
            for &e in set {
                owner[e] = id;
            }
            slot[i] = id;
        }
        let mut leaf_node = vec![0; ground];
        for (e, ln) in leaf_node.iter_mut().enumerate() {
            let par = owner[e];
            if ground == 1 {
                // the ground node is itself the leaf
                nodes[par].kind = NodeKind::Leaf(0);
                *ln = par;
                continue;
            }
            let id = nodes.len();
            nodes.push(PNode { kind: NodeKind::Leaf(e), parent: Some(par), children: vec![] });
            node_size.push(1);
            node_prime.push(false);
            nodes[par].children.push(id);
            *ln = id;
        }
        for i in 0..nodes.len() {
            if matches!(nodes[i].kind, NodeKind::Leaf(_)) {
                continue;
            }
            nodes[i].kind = if node_prime[i] && nodes[i].children.len() >= 3 {
                NodeKind::Prime
            } else {
                NodeKind::Complete
            };
        }
        for (i, s) in sets.iter().enumerate() {
            if s.len() == 1 {
                slot[i + 1] = leaf_node[s[0]];
            }
        }
        let root = slot[0];
        let tree = PartitiveTree::from_arena(ground, nodes, root);
        (tree, slot[1..].to_vec())
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, id: usize) -> &PNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[PNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf(&self, e: usize) -> usize {
        self.leaf_of[e]
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        matches!(self.nodes[id].kind, NodeKind::Leaf(_))
    }

    /// Node ids in preorder from the root.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            out.push(u);
            for &c in self.nodes[u].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Number of leaves below each node (indexed by node id).
    pub fn sizes(&self) -> Vec<usize> {
        let mut size = vec![0; self.nodes.len()];
        for &u in self.preorder().iter().rev() {
            size[u] = match self.nodes[u].kind {
                NodeKind::Leaf(_) => 1,
                _ => self.nodes[u].children.iter().map(|&c| size[c]).sum(),
            };
        }
        size
    }

    /// Sorted leaf elements below `id`.
    pub fn node_set(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(u) = stack.pop() {
            match self.nodes[u].kind {
                NodeKind::Leaf(e) => out.push(e),
                _ => stack.extend(self.nodes[u].children.iter().copied()),
            }
        }
        out.sort_unstable();
        out
    }

    /// Sorted leaf sets of every node, indexed by node id.
    pub fn node_sets(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.nodes.len()];
        for &u in self.preorder().iter().rev() {
            sets[u] = match self.nodes[u].kind {
                NodeKind::Leaf(e) => vec![e],
                _ => {
                    let mut s: Vec<usize> =
                        self.nodes[u].children.iter().flat_map(|&c| sets[c].iter().copied()).collect();
                    s.sort_unstable();
                    s
                }
            };
        }
        sets
    }

    /// Same shape with Prime and Complete exchanged. Two-child nodes keep the
    /// Complete label.
    pub fn swap_labels(&self) -> PartitiveTree {
        let mut t = self.clone();
        for n in t.nodes.iter_mut() {
            n.kind = match n.kind {
                NodeKind::Prime => NodeKind::Complete,
                NodeKind::Complete if n.children.len() >= 3 => NodeKind::Prime,
                k => k,
            };
        }
        t
    }

    /// Every node set plus the cyclic unions of consecutive children of each
    /// Prime node. Its orthogonal is the orthogonal of the represented family.
    pub fn generator_family(&self) -> SetFamily {
        let sets = self.node_sets();
        let mut fam = SetFamily::new(self.ground);
        for (u, s) in sets.iter().enumerate() {
            fam.push_sorted(s.clone());
            if self.nodes[u].kind == NodeKind::Prime {
                let ch = &self.nodes[u].children;
                for i in 0..ch.len() {
                    let a = &sets[ch[i]];
                    let b = &sets[ch[(i + 1) % ch.len()]];
                    fam.push_sorted(merge_sorted(a, b));
                }
            }
        }
        fam
    }

    /// Explicit list of represented sets, sorted and without repeats.
    pub fn enumerate_members(&self, cap: usize) -> Result<Vec<Vec<usize>>, FamilyError> {
        let mut count: u128 = 0;
        for n in &self.nodes {
            count += 1;
            if n.kind == NodeKind::Complete {
                let k = n.children.len() as u32;
                if k >= 100 {
                    return Err(FamilyError::CapExceeded(cap));
                }
                count += (1u128 << k) - k as u128 - 2;
            }
        }
        if count > cap as u128 {
            return Err(FamilyError::CapExceeded(cap));
        }
        let sets = self.node_sets();
        let mut out: Vec<Vec<usize>> = sets.clone();
        for n in &self.nodes {
            if n.kind != NodeKind::Complete {
                continue;
            }
            let k = n.children.len();
            for mask in 1u64..(1u64 << k) - 1 {
                if mask.count_ones() < 2 {
                    continue;
                }
                let mut s = Vec::new();
                for (i, &c) in n.children.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        s.extend_from_slice(&sets[c]);
                    }
                }
                s.sort_unstable();
                out.push(s);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Whether `s` (sorted, non-empty) belongs to the represented family.
    pub fn member_test(&self, s: &[usize]) -> bool {
        if s.is_empty() {
            return false;
        }
        let size = self.sizes();
        let depth = self.depths();
        // lowest common ancestor of the leaves of s
        let mut lca = self.leaf_of[s[0]];
        for &e in &s[1..] {
            let mut a = lca;
            let mut b = self.leaf_of[e];
            while depth[a] > depth[b] {
                a = self.nodes[a].parent.unwrap();
            }
            while depth[b] > depth[a] {
                b = self.nodes[b].parent.unwrap();
            }
            while a != b {
                a = self.nodes[a].parent.unwrap();
                b = self.nodes[b].parent.unwrap();
            }
            lca = a;
        }
        if size[lca] == s.len() {
            return true;
        }
        if self.nodes[lca].kind != NodeKind::Complete {
            return false;
        }
        // s must be a union of children of lca
        let mut hit: Vec<(usize, usize)> = Vec::new();
        for &e in s {
            let mut u = self.leaf_of[e];
            while self.nodes[u].parent != Some(lca) {
                u = self.nodes[u].parent.unwrap();
            }
            hit.push((u, 1));
        }
        hit.sort_unstable();
        let mut i = 0;
        while i < hit.len() {
            let mut j = i;
            while j < hit.len() && hit[j].0 == hit[i].0 {
                j += 1;
            }
            if j - i != size[hit[i].0] {
                return false;
            }
            i = j;
        }
        true
    }

    fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.nodes.len()];
        for u in self.preorder() {
            if let Some(p) = self.nodes[u].parent {
                depth[u] = depth[p] + 1;
            }
        }
        depth
    }

    /// Children sorted by minimum leaf, nodes renumbered in preorder.
    pub fn canonicalize(&self) -> PartitiveTree {
        let sets_min = self.min_leaf();
        let mut nodes: Vec<PNode> = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, usize::MAX)];
        while let Some((u, par)) = stack.pop() {
            let id = nodes.len();
            nodes.push(PNode { kind: self.nodes[u].kind, parent: None, children: vec![] });
            if par != usize::MAX {
                nodes[par].children.push(id);
            }
            let mut ch = self.nodes[u].children.clone();
            ch.sort_by_key(|&c| std::cmp::Reverse(sets_min[c]));
            for c in ch {
                stack.push((c, id));
            }
        }
        PartitiveTree::from_arena(self.ground, nodes, 0)
    }

    fn min_leaf(&self) -> Vec<usize> {
        let mut m = vec![usize::MAX; self.nodes.len()];
        for &u in self.preorder().iter().rev() {
            m[u] = match self.nodes[u].kind {
                NodeKind::Leaf(e) => e,
                _ => self.nodes[u].children.iter().map(|&c| m[c]).min().unwrap(),
            };
        }
        m
    }

    /// Nested parenthesised form, e.g. `(C (P 0 1 2) 3)`. Canonical trees give
    /// identical strings exactly when they are equal.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(self.root, &mut out);
        out
    }

    fn write_text(&self, u: usize, out: &mut String) {
        match self.nodes[u].kind {
            NodeKind::Leaf(e) => {
                let _ = write!(out, "{e}");
            }
            k => {
                out.push('(');
                out.push(if k == NodeKind::Prime { 'P' } else { 'C' });
                for &c in &self.nodes[u].children {
                    out.push(' ');
                    self.write_text(c, out);
                }
                out.push(')');
            }
        }
    }

    /// Structural checks: leaves, child counts, two-child labels, parents.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen = vec![false; self.nodes.len()];
        for u in self.preorder() {
            if seen[u] {
                return Err(format!("node {u} reached twice"));
            }
            seen[u] = true;
            let n = &self.nodes[u];
            match n.kind {
                NodeKind::Leaf(_) => {
                    if !n.children.is_empty() {
                        return Err(format!("leaf {u} has children"));
                    }
                }
                k => {
                    if n.children.len() < 2 {
                        return Err(format!("internal node {u} has {} children", n.children.len()));
                    }
                    if n.children.len() == 2 && k == NodeKind::Prime {
                        return Err(format!("two-child node {u} labelled Prime"));
                    }
                }
            }
            for &c in &n.children {
                if self.nodes[c].parent != Some(u) {
                    return Err(format!("parent link of {c} is wrong"));
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err("unreachable node".into());
        }
        Ok(())
    }
}

pub(crate) fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Compact family `W` over `ground` whose orthogonal equals that of `F`
/// together with every complement `X \ Y` (`Y` in `F`), where `X` is a member
/// of `F` containing all the others.
///
/// `W` holds the classes of `X` under `F`, the cyclic unions of consecutive
/// classes when there are at least three, and `X` itself.
pub fn complement_reduced_family(f: &SetFamily, x: &[usize], ground: usize) -> Result<SetFamily, FamilyError> {
    if !f.members().iter().any(|m| m.as_slice() == x) {
        return Err(FamilyError::MissingBase);
    }
    let mut inside = vec![false; ground];
    for &e in x {
        if e >= ground {
            return Err(FamilyError::OutOfRange { element: e, ground });
        }
        inside[e] = true;
    }
    for m in f.members() {
        if m.iter().any(|&e| e >= ground || !inside[e]) {
            return Err(FamilyError::NotSubset);
        }
    }
    let classes = partition_refine(&[x.to_vec()], f);
    let mut w = SetFamily::new(ground);
    let t = classes.len();
    if t >= 3 {
        for i in 0..t {
            w.push_sorted(merge_sorted(&classes[i], &classes[(i + 1) % t]));
        }
    }
    if t >= 2 {
        w.push_sorted(x.to_vec());
    }
    for c in classes {
        w.push_sorted(c);
    }
    Ok(w)
}

/// Random tree over `ground` leaves: repeatedly groups random runs of the
/// current roots under a new node until one root remains.
pub fn random_tree<R: Rng>(rng: &mut R, ground: usize, prime_prob: f64) -> PartitiveTree {
    let mut nodes: Vec<PNode> =
        (0..ground).map(|e| PNode { kind: NodeKind::Leaf(e), parent: None, children: vec![] }).collect();
    let mut roots: Vec<usize> = (0..ground).collect();
    // shuffle so leaf order in the tree is not the identity
    for i in (1..roots.len()).rev() {
        let j = rng.gen_range(0..=i);
        roots.swap(i, j);
    }
    while roots.len() > 1 {
        let k = rng.gen_range(2..=roots.len().min(5));
        let start = rng.gen_range(0..=roots.len() - k);
        let children: Vec<usize> = roots.drain(start..start + k).collect();
        let kind = if k >= 3 && rng.gen_bool(prime_prob) { NodeKind::Prime } else { NodeKind::Complete };
        let id = nodes.len();
        nodes.push(PNode { kind, parent: None, children });
        roots.insert(start, id);
    }
    let root = roots[0];
    PartitiveTree::from_arena(ground, nodes, root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_orthogonal;
    use crate::set_family::orthogonal_tree;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fam(ground: usize, sets: &[&[usize]]) -> SetFamily {
        SetFamily::from_sets(ground, sets.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    fn all_subsets(n: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> =
            (1u32..1 << n).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect();
        out.sort();
        out
    }

    #[test]
    fn swap_examples() {
        let t = PartitiveTree::flat(3, NodeKind::Complete);
        let s = t.swap_labels();
        assert_eq!(s.to_text(), "(P 0 1 2)");
        assert_eq!(s.swap_labels(), t);
        // Complete root over a Prime node and a leaf
        let (t, _) = PartitiveTree::from_laminar(4, &[vec![0, 1, 2]], &[true]);
        assert_eq!(t.canonicalize().to_text(), "(C (P 0 1 2) 3)");
        assert_eq!(t.swap_labels().canonicalize().to_text(), "(C (C 0 1 2) 3)");
    }

    #[test]
    fn generator_examples() {
        let t = PartitiveTree::flat(3, NodeKind::Complete);
        let mut g = t.generator_family().members().to_vec();
        g.sort();
        assert_eq!(g, vec![vec![0], vec![0, 1, 2], vec![1], vec![2]]);

        let t = PartitiveTree::flat(4, NodeKind::Prime);
        let mut g = t.generator_family().members().to_vec();
        g.sort();
        let mut want = vec![vec![0], vec![1], vec![2], vec![3], vec![0, 1, 2, 3]];
        want.extend([vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
        want.sort();
        assert_eq!(g, want);
    }

    #[test]
    fn enumerate_examples() {
        let t = PartitiveTree::flat(3, NodeKind::Complete);
        assert_eq!(t.enumerate_members(100).unwrap(), all_subsets(3));
        let t = PartitiveTree::flat(3, NodeKind::Prime);
        assert_eq!(t.enumerate_members(100).unwrap(), vec![vec![0], vec![0, 1, 2], vec![1], vec![2]]);
        let (t, _) = PartitiveTree::from_laminar(4, &[vec![0, 1, 2]], &[true]);
        let m = t.enumerate_members(100).unwrap();
        assert_eq!(m.len(), 6);
        assert!(matches!(
            PartitiveTree::flat(12, NodeKind::Complete).enumerate_members(100),
            Err(FamilyError::CapExceeded(100))
        ));
    }

    #[test]
    fn member_test_examples() {
        let p = PartitiveTree::flat(3, NodeKind::Prime);
        assert!(!p.member_test(&[0, 1]));
        assert!(p.member_test(&[0, 1, 2]));
        let c = PartitiveTree::flat(3, NodeKind::Complete);
        assert!(c.member_test(&[0, 2]));
    }

    #[test]
    fn member_test_agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=7);
            let t = random_tree(&mut rng, n, 0.5);
            let members = t.enumerate_members(1 << 12).unwrap();
            for s in all_subsets(n) {
                assert_eq!(t.member_test(&s), members.binary_search(&s).is_ok(), "{} {:?}", t.to_text(), s);
            }
        }
    }

    #[test]
    fn canonical_forms() {
        let single = PartitiveTree::flat(1, NodeKind::Complete);
        assert_eq!(single.canonicalize(), single);
        assert_eq!(single.to_text(), "0");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(1..=9);
            let t = random_tree(&mut rng, n, 0.4);
            t.validate().unwrap();
            let c = t.canonicalize();
            assert_eq!(c.canonicalize(), c);
            // rebuilding from the node sets in shuffled order gives the same form
            let sets = t.node_sets();
            let mut idx: Vec<usize> = (0..sets.len()).collect();
            idx.reverse();
            let ss: Vec<Vec<usize>> = idx.iter().map(|&i| sets[i].clone()).collect();
            let pr: Vec<bool> = idx.iter().map(|&i| t.node(i).kind == NodeKind::Prime).collect();
            let (u, _) = PartitiveTree::from_laminar(n, &ss, &pr);
            assert_eq!(u.canonicalize().to_text(), c.to_text());
        }
    }

    #[test]
    fn complement_reduction_examples() {
        // ground {0..4}, X = {0,1,2,3}, F = {X, {0,1}}
        let f = fam(5, &[&[0, 1, 2, 3], &[0, 1]]);
        let w = complement_reduced_family(&f, &[0, 1, 2, 3], 5).unwrap();
        let mut got = w.members().to_vec();
        got.sort();
        assert_eq!(got, vec![vec![0, 1], vec![0, 1, 2, 3], vec![2, 3]]);
        let mut h = f.clone();
        h.push_sorted(vec![2, 3]);
        assert_eq!(brute_orthogonal(&w).unwrap(), brute_orthogonal(&h).unwrap());

        let f = fam(2, &[&[0, 1]]);
        let w = complement_reduced_family(&f, &[0, 1], 2).unwrap();
        assert_eq!(w.members(), &[vec![0, 1]]);

        assert!(matches!(complement_reduced_family(&f, &[0], 2), Err(FamilyError::MissingBase)));
        let f = fam(3, &[&[0, 1], &[1, 2]]);
        assert!(matches!(complement_reduced_family(&f, &[0, 1], 3), Err(FamilyError::NotSubset)));
    }

    #[test]
    fn complement_reduction_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..400 {
            let n = rng.gen_range(1..=10);
            let xs: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
            if xs.is_empty() {
                continue;
            }
            let mut f = SetFamily::new(n);
            f.push_sorted(xs.clone());
            for _ in 0..rng.gen_range(0..5) {
                let y: Vec<usize> = xs.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                if !y.is_empty() {
                    f.push_sorted(y);
                }
            }
            let w = complement_reduced_family(&f, &xs, n).unwrap();
            let mut h = f.clone();
            for y in f.members() {
                let c: Vec<usize> = xs.iter().copied().filter(|e| !y.contains(e)).collect();
                if !c.is_empty() {
                    h.push_sorted(c);
                }
            }
            assert_eq!(brute_orthogonal(&w).unwrap(), brute_orthogonal(&h).unwrap());
            assert!(w.norm() <= 4 * f.norm() + 4);
        }
    }

    #[test]
    fn generator_and_enumeration_orthogonals() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let t = random_tree(&mut rng, n, 0.5);
            let c = t.canonicalize().to_text();
            let sw = t.swap_labels().canonicalize().to_text();
            let o = orthogonal_tree(&t.generator_family()).tree;
            assert_eq!(o.canonicalize().to_text(), c);
            let o = orthogonal_tree(&t.swap_labels().generator_family()).tree;
            assert_eq!(o.canonicalize().to_text(), sw);
            let explicit = SetFamily::from_sets(n, t.enumerate_members(1 << 12).unwrap()).unwrap();
            assert_eq!(orthogonal_tree(&explicit).tree.canonicalize().to_text(), sw);
        }
    }

    mod props {
        use super::super::*;
        use crate::set_family::overlap;
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #[test]
            fn node_sets_are_laminar_and_members_partitive(seed in any::<u64>(), n in 1usize..9, p in 0.0f64..1.0) {
                let t = random_tree(&mut ChaCha8Rng::seed_from_u64(seed), n, p);
                let sets = t.node_sets();
                for a in &sets {
                    for b in &sets {
                        prop_assert!(!overlap(a, b));
                    }
                }
                let members = t.enumerate_members(1 << 10).unwrap();
                prop_assert!(members.binary_search(&(0..n).collect()).is_ok());
                for e in 0..n {
                    prop_assert!(members.binary_search(&vec![e]).is_ok());
                }
                for a in &members {
                    for b in &members {
                        if !overlap(a, b) {
                            continue;
                        }
                        let union = merge_sorted(a, b);
                        let inter: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
                        let diff: Vec<usize> = union.iter().copied().filter(|x| !inter.contains(x)).collect();
                        for s in [union, inter, diff] {
                            prop_assert!(members.binary_search(&s).is_ok(), "{:?} missing from {}", s, t.to_text());
                        }
                    }
                }
            }
        }
    }
}
