//! Families of subsets of `0..ground`: overlap, norm, partition refinement
//! and the orthogonal of a family as a partitive tree.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::partitive::PartitiveTree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("empty member")]
    EmptyMember,
    #[error("element {element} outside ground set of size {ground}")]
    OutOfRange { element: usize, ground: usize },
    #[error("member is not a subset of the base set")]
    NotSubset,
    #[error("base set is not a member of the family")]
    MissingBase,
    #[error("represented family exceeds cap {0}")]
    CapExceeded(usize),
}

/// Multiset of non-empty sorted subsets of `0..ground`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    ground: usize,
    members: Vec<Vec<usize>>,
    norm: usize,
}

impl SetFamily {
    pub fn new(ground: usize) -> SetFamily {
        SetFamily { ground, members: Vec::new(), norm: 0 }
    }

    /// Sorts and deduplicates each member, rejecting empty or out-of-range
    /// ones.
    pub fn from_sets(ground: usize, sets: Vec<Vec<usize>>) -> Result<SetFamily, FamilyError> {
        let mut f = SetFamily::new(ground);
        for s in sets {
            f.push(s)?;
        }
        Ok(f)
    }

    pub fn push(&mut self, mut s: Vec<usize>) -> Result<(), FamilyError> {
        s.sort_unstable();
        s.dedup();
        if s.is_empty() {
            return Err(FamilyError::EmptyMember);
        }
        if let Some(&e) = s.last() {
            if e >= self.ground {
                return Err(FamilyError::OutOfRange { element: e, ground: self.ground });
            }
        }
        self.norm += 1 + s.len();
        self.members.push(s);
        Ok(())
    }

    /// Pushes a member the caller guarantees is sorted, duplicate-free,
    /// non-empty and in range.
    pub fn push_sorted(&mut self, s: Vec<usize>) {
        debug_assert!(!s.is_empty() && s.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(*s.last().unwrap() < self.ground);
        self.norm += 1 + s.len();
        self.members.push(s);
    }

    pub fn extend(&mut self, other: &SetFamily) {
        for m in &other.members {
            self.push_sorted(m.clone());
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `|F|` plus the total member size.
    pub fn norm(&self) -> usize {
        self.norm
    }
}

/// True when the sorted sets intersect and neither contains the other.
pub fn overlap(x: &[usize], y: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    let (mut common, mut only_x, mut only_y) = (false, false, false);
    while i < x.len() && j < y.len() {
        if x[i] == y[j] {
            common = true;
            i += 1;
            j += 1;
        } else if x[i] < y[j] {
            only_x = true;
            i += 1;
        } else {
            only_y = true;
            j += 1;
        }
    }
    only_x |= i < x.len();
    only_y |= j < y.len();
    common && only_x && only_y
}

pub fn norm(f: &SetFamily) -> usize {
    f.norm()
}

/// Coarsest refinement of `initial` in which no block overlaps a member of
/// `f`. Elements of members outside the initial blocks are ignored. Blocks are
/// returned sorted, ordered by their smallest element.
pub fn partition_refine(initial: &[Vec<usize>], f: &SetFamily) -> Vec<Vec<usize>> {
    let ground = f.ground().max(initial.iter().flatten().map(|&e| e + 1).max().unwrap_or(0));
    let mut refiner = Refiner::new(ground, initial);
    for m in f.members() {
        refiner.split(m);
    }
    refiner.blocks()
}

/// Array-based partition refinement.
struct Refiner {
    perm: Vec<usize>,
    pos: Vec<usize>,
    block_of: Vec<usize>,
    // (start, end, marked)
    blocks: Vec<(usize, usize, usize)>,
    touched: Vec<usize>,
}

impl Refiner {
    fn new(ground: usize, initial: &[Vec<usize>]) -> Refiner {
        let mut r = Refiner {
            perm: Vec::new(),
            pos: vec![usize::MAX; ground],
            block_of: vec![usize::MAX; ground],
            blocks: Vec::new(),
            touched: Vec::new(),
        };
        for b in initial {
            if b.is_empty() {
                continue;
            }
            let start = r.perm.len();
            let id = r.blocks.len();
            for &e in b {
                r.pos[e] = r.perm.len();
                r.block_of[e] = id;
                r.perm.push(e);
            }
            r.blocks.push((start, r.perm.len(), 0));
        }
        r
    }

    fn split(&mut self, set: &[usize]) {
        for &e in set {
            let b = self.block_of[e];
            if b == usize::MAX {
                continue;
            }
            let (start, _, marked) = self.blocks[b];
            if marked == 0 {
                self.touched.push(b);
            }
            let target = start + marked;
            let p = self.pos[e];
            let other = self.perm[target];
            self.perm.swap(p, target);
            self.pos[other] = p;
            self.pos[e] = target;
            self.blocks[b].2 += 1;
        }
        for k in 0..self.touched.len() {
            let b = self.touched[k];
            let (start, end, marked) = self.blocks[b];
            self.blocks[b].2 = 0;
            if marked < end - start {
                let id = self.blocks.len();
                self.blocks.push((start, start + marked, 0));
                self.blocks[b].0 = start + marked;
                for i in start..start + marked {
                    self.block_of[self.perm[i]] = id;
                }
            }
        }
        self.touched.clear();
    }

    fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|&(s, e, _)| {
                let mut b = self.perm[s..e].to_vec();
                b.sort_unstable();
                b
            })
            .collect();
        out.sort_by_key(|b| b[0]);
        out
    }
}

/// Tree of `F⊥` together with, for each member of `F` in input order, the
/// smallest tree node whose set contains it.
#[derive(Debug, Clone)]
pub struct Orthogonal {
    pub tree: PartitiveTree,
    pub container: Vec<usize>,
}

/// Partitive tree representing every non-empty set that overlaps no member
/// of `f`.
///
/// Members are grouped into overlap components. The union of a component is
/// orthogonal, and so is each class of elements covered by exactly the same
/// members of a component. These sets, with the ground set and singletons,
/// are laminar and form the strong members of `F⊥`; a node is Prime exactly
/// when it is the union of a component with at least two members.
pub fn orthogonal_tree(f: &SetFamily) -> Orthogonal {
    let n = f.ground();
    assert!(n >= 1, "empty ground set");
    let dist = Distinct::new(f);
    let comp = dist.components();

    // group the proper distinct sets by component
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for (d, set) in dist.sets.iter().enumerate() {
        if set.len() > 1 && set.len() < n {
            groups.entry(comp[d]).or_default().push(d);
        }
    }
    let mut keys: Vec<usize> = groups.keys().copied().collect();
    keys.sort_unstable();

    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut prime: Vec<bool> = Vec::new();
    // for each distinct set, the index in `sets` of its smallest container
    let mut union_slot = vec![usize::MAX; dist.sets.len()];
    let mut mark = vec![false; n];
    for key in keys {
        let members = &groups[&key];
        let mut union = Vec::new();
        for &d in members {
            for &e in &dist.sets[d] {
                if !mark[e] {
                    mark[e] = true;
                    union.push(e);
                }
            }
        }
        for &e in &union {
            mark[e] = false;
        }
        union.sort_unstable();
        let nontrivial = members.len() > 1;
        let slot = sets.len();
        for &d in members {
            union_slot[d] = slot;
        }
        if nontrivial {
            let mut sub = SetFamily::new(n);
            for &d in members {
                sub.push_sorted(dist.sets[d].clone());
            }
            let classes = partition_refine(std::slice::from_ref(&union), &sub);
            sets.push(union);
            prime.push(true);
            for c in classes {
                sets.push(c);
                prime.push(false);
            }
        } else {
            sets.push(union);
            prime.push(false);
        }
    }
    let (tree, node_of) = PartitiveTree::from_laminar(n, &sets, &prime);
    let container = dist
        .of_member
        .iter()
        .map(|&d| {
            let s = &dist.sets[d];
            if s.len() == n {
                tree.root()
            } else if s.len() == 1 {
                tree.leaf(s[0])
            } else {
                node_of[union_slot[d]]
            }
        })
        .collect();
    Orthogonal { tree, container }
}

/// Distinct members of a family.
struct Distinct {
    ground: usize,
    sets: Vec<Vec<usize>>,
    of_member: Vec<usize>,
}

impl Distinct {
    fn new(f: &SetFamily) -> Distinct {
        let mut index: HashMap<&[usize], usize> = HashMap::new();
        let mut sets = Vec::new();
        let mut of_member = Vec::with_capacity(f.len());
        for m in f.members() {
            let next = sets.len();
            let d = *index.entry(m.as_slice()).or_insert_with(|| {
                sets.push(m.clone());
                next
            });
            of_member.push(d);
        }
        Distinct { ground: f.ground(), sets, of_member }
    }

    /// Overlap component label of each distinct set. Singletons and the
    /// ground set overlap nothing and get their own labels.
    fn components(&self) -> Vec<usize> {
        let mut sweep = OverlapSweep::new(self.ground, self.sets.len());
        let mut order: Vec<usize> =
            (0..self.sets.len()).filter(|&d| self.sets[d].len() > 1 && self.sets[d].len() < self.ground).collect();
        order.sort_by_key(|&d| Reverse(self.sets[d].len()));
        for d in order {
            sweep.insert(d, &self.sets[d]);
        }
        (0..self.sets.len()).map(|d| sweep.comp.find(d)).collect()
    }
}

/// Overlap component label for each member of `f`: members share a label
/// exactly when they are linked by a chain of overlapping members. Equal
/// members share a label.
pub fn overlap_components(f: &SetFamily) -> Vec<usize> {
    let dist = Distinct::new(f);
    let comp = dist.components();
    dist.of_member.iter().map(|&d| comp[d]).collect()
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a] = b;
        }
        b
    }
}

/// Union-find over child records with XOR labels. The absolute label of a
/// record is the XOR along its path plus the offset stored at its root.
struct Labels {
    parent: Vec<usize>,
    weight: Vec<u128>,
    offset: Vec<u128>,
    size: Vec<usize>,
    // node owning the group rooted here
    owner: Vec<usize>,
    path: Vec<usize>,
}

impl Labels {
    fn new() -> Labels {
        Labels { parent: vec![], weight: vec![], offset: vec![], size: vec![], owner: vec![], path: vec![] }
    }

    /// New group root owned by `node`.
    fn group(&mut self, node: usize) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.weight.push(0);
        self.offset.push(0);
        self.size.push(1);
        self.owner.push(node);
        id
    }

    /// New record in the group of `g` with absolute label `label`.
    fn record(&mut self, g: usize, label: u128) -> usize {
        let root = self.find(g);
        let id = self.parent.len();
        self.parent.push(root);
        self.weight.push(label ^ self.offset[root]);
        self.offset.push(0);
        self.size.push(1);
        self.owner.push(usize::MAX);
        self.size[root] += 1;
        id
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            self.path.push(r);
            r = self.parent[r];
        }
        // compress, accumulating weights from the top
        let mut acc = 0u128;
        while let Some(y) = self.path.pop() {
            acc ^= self.weight[y];
            self.weight[y] = acc;
            self.parent[y] = r;
        }
        r
    }

    fn label(&mut self, x: usize) -> u128 {
        let r = self.find(x);
        if r == x {
            self.offset[r]
        } else {
            self.weight[x] ^ self.offset[r]
        }
    }

    fn owner_of(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.owner[r]
    }

    /// XORs `h` into the absolute label of a non-root record.
    fn toggle(&mut self, x: usize, h: u128) {
        self.find(x);
        self.weight[x] ^= h;
    }

    /// Moves every record of group `a` into group `b`, XORing `shift` into
    /// their labels. The merged group is owned by `b`'s owner.
    fn absorb(&mut self, a: usize, b: usize, shift: u128) {
        let (ra, rb) = (self.find(a), self.find(b));
        debug_assert_ne!(ra, rb);
        self.offset[ra] ^= shift;
        let owner = self.owner[rb];
        let (child, root) = if self.size[ra] <= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.weight[child] = self.offset[child] ^ self.offset[root];
        self.parent[child] = root;
        self.size[root] += self.size[child];
        self.owner[root] = owner;
    }
}

struct UNode {
    size: usize,
    // record of this node among its parent's children
    rec: usize,
    // any record of the group holding this node's children
    group: usize,
    trivial: Option<usize>,
    nontrivial: Option<usize>,
}

/// Sweep over sets in order of non-increasing size, maintaining the laminar
/// tree of current component unions. Each node keeps, for every child, the
/// XOR of the random keys of the node's members containing that child, so
/// that two children lie in the same class exactly when their labels agree.
struct OverlapSweep {
    nodes: Vec<UNode>,
    labels: Labels,
    leaf_rec: Vec<usize>,
    comp: Dsu,
    rng: ChaCha8Rng,
    count: Vec<usize>,
    stamp: Vec<usize>,
    round: usize,
}

impl OverlapSweep {
    fn new(ground: usize, sets: usize) -> OverlapSweep {
        let mut labels = Labels::new();
        let g = labels.group(0);
        let root = UNode { size: ground, rec: usize::MAX, group: g, trivial: None, nontrivial: None };
        let leaf_rec = (0..ground).map(|_| labels.record(g, 0)).collect();
        OverlapSweep {
            nodes: vec![root],
            labels,
            leaf_rec,
            comp: Dsu::new(sets),
            rng: ChaCha8Rng::seed_from_u64(0x005e_ed0f_0b1a_u64),
            count: vec![0],
            stamp: vec![0],
            round: 0,
        }
    }

    fn new_node(&mut self, size: usize) -> usize {
        let id = self.nodes.len();
        let group = self.labels.group(id);
        self.nodes.push(UNode { size, rec: usize::MAX, group, trivial: None, nontrivial: None });
        self.count.push(0);
        self.stamp.push(0);
        id
    }

    fn parent_of(&mut self, u: usize) -> usize {
        let rec = self.nodes[u].rec;
        self.labels.owner_of(rec)
    }

    fn join(&mut self, d: usize, u: usize) {
        if let Some(t) = self.nodes[u].trivial {
            self.comp.union(t, d);
        }
        if let Some(t) = self.nodes[u].nontrivial {
            self.comp.union(t, d);
        }
    }

    /// Merges the children group of `u` into `target`'s group and retires
    /// `u`.
    fn dissolve(&mut self, u: usize, target: usize, shift: u128) {
        let (a, b) = (self.nodes[u].group, self.nodes[target].group);
        self.labels.absorb(a, b, shift);
    }

    fn insert(&mut self, d: usize, set: &[usize]) {
        let key: u128 = self.rng.gen();
        let k = set.len();
        self.round += 1;
        let round = self.round;
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
        let mut leaf_parent = Vec::with_capacity(k);
        for &e in set {
            let p = self.labels.owner_of(self.leaf_rec[e]);
            leaf_parent.push(p);
            if self.stamp[p] != round {
                self.stamp[p] = round;
                self.count[p] = 0;
                heap.push(Reverse((self.nodes[p].size, p)));
            }
            self.count[p] += 1;
        }
        // nodes met below the lowest node containing the set; the set
        // overlaps each of them
        let mut popped: Vec<(usize, usize)> = Vec::new();
        let lca = loop {
            let Reverse((_, u)) = heap.pop().expect("root contains every set");
            if self.count[u] == k {
                break u;
            }
            let p = self.parent_of(u);
            popped.push((u, p));
            if self.stamp[p] != round {
                self.stamp[p] = round;
                self.count[p] = 0;
                heap.push(Reverse((self.nodes[p].size, p)));
            }
            self.count[p] += self.count[u];
        };

        // children of the lowest node that the set meets
        let mut touched: Vec<usize> = Vec::new();
        let mut star_size = 0;
        for &(u, p) in &popped {
            if p == lca {
                touched.push(self.nodes[u].rec);
                star_size += self.nodes[u].size;
            }
        }
        for (i, &e) in set.iter().enumerate() {
            if leaf_parent[i] == lca {
                touched.push(self.leaf_rec[e]);
                star_size += 1;
            }
        }
        let first = self.labels.label(touched[0]);
        let mut split = false;
        for &r in &touched[1..] {
            if self.labels.label(r) != first {
                split = true;
                break;
            }
        }

        for &(u, _) in &popped {
            self.join(d, u);
        }

        if split || star_size == self.nodes[lca].size {
            // the set joins the component spread over the whole lowest node
            if let Some(t) = self.nodes[lca].nontrivial {
                self.comp.union(t, d);
            }
            for &(u, p) in &popped {
                let shift = self.labels.label(self.nodes[u].rec);
                self.dissolve(u, p, shift);
            }
            for &e in set {
                self.labels.toggle(self.leaf_rec[e], key);
            }
            self.nodes[lca].nontrivial = Some(d);
            return;
        }

        // new node for the union of the set and the nodes it overlaps
        let star = self.new_node(star_size);
        let lca_group = self.nodes[lca].group;
        self.nodes[star].rec = self.labels.record(lca_group, first);
        if popped.is_empty() {
            self.nodes[star].trivial = Some(d);
        } else {
            self.nodes[star].nontrivial = Some(d);
        }
        for &(u, p) in &popped {
            if p == lca {
                self.dissolve(u, star, 0);
            } else {
                let shift = self.labels.label(self.nodes[u].rec);
                self.dissolve(u, p, shift);
            }
        }
        let star_group = self.nodes[star].group;
        for (i, &e) in set.iter().enumerate() {
            if leaf_parent[i] == lca {
                self.leaf_rec[e] = self.labels.record(star_group, key);
            } else {
                self.labels.toggle(self.leaf_rec[e], key);
            }
        }
    }
}

/// Random family for tests and benchmarks: `count` members over `ground`,
/// each element kept with probability `density`.
pub fn random_family<R: Rng>(rng: &mut R, ground: usize, count: usize, density: f64) -> SetFamily {
    let mut f = SetFamily::new(ground);
    for _ in 0..count {
        let s: Vec<usize> = (0..ground).filter(|_| rng.gen_bool(density)).collect();
        if !s.is_empty() {
            f.push_sorted(s);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_orthogonal;
    use crate::partitive::NodeKind;
    use proptest::prelude::*;
    use rand::Rng;

    fn fam(ground: usize, sets: &[&[usize]]) -> SetFamily {
        SetFamily::from_sets(ground, sets.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    #[test]
    fn overlap_examples() {
        assert!(overlap(&[1, 2], &[2, 3]));
        assert!(!overlap(&[1, 2], &[1, 2, 3]));
        assert!(!overlap(&[1], &[2]));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(fam(4, &[&[1, 2], &[3]]).norm(), 5);
        assert_eq!(SetFamily::new(3).norm(), 0);
        assert_eq!(fam(2, &[&[1], &[1]]).norm(), 4);
    }

    #[test]
    fn family_validation() {
        assert_eq!(SetFamily::from_sets(3, vec![vec![]]), Err(FamilyError::EmptyMember));
        assert!(matches!(SetFamily::from_sets(3, vec![vec![3]]), Err(FamilyError::OutOfRange { .. })));
        let f = SetFamily::from_sets(3, vec![vec![2, 0, 2]]).unwrap();
        assert_eq!(f.members(), &[vec![0, 2]]);
    }

    #[test]
    fn refine_examples() {
        let f = fam(5, &[&[1, 2], &[1, 2, 3]]);
        assert_eq!(partition_refine(&[vec![1, 2, 3, 4]], &f), vec![vec![1, 2], vec![3], vec![4]]);
        assert_eq!(partition_refine(&[vec![1, 2, 3]], &SetFamily::new(4)), vec![vec![1, 2, 3]]);
        let f = fam(5, &[&[2, 3]]);
        assert_eq!(partition_refine(&[vec![1, 2, 3, 4]], &f), vec![vec![1, 4], vec![2, 3]]);
    }

    #[test]
    fn orthogonal_examples() {
        // ground {0..3}, F = {{0,1},{1,2}}
        let f = fam(4, &[&[0, 1], &[1, 2]]);
        let o = orthogonal_tree(&f);
        assert_eq!(o.tree.canonicalize().to_text(), "(C (P 0 1 2) 3)");
        assert_eq!(o.tree.enumerate_members(100).unwrap(), brute_orthogonal(&f).unwrap());
        let inner = o.tree.node(o.tree.leaf(0)).parent.unwrap();
        assert_eq!(o.container, vec![inner, inner]);

        let p = 6;
        let sets: Vec<Vec<usize>> = (0..p).map(|i| vec![i, (i + 1) % p]).collect();
        let o = orthogonal_tree(&SetFamily::from_sets(p, sets).unwrap());
        assert_eq!(o.tree.to_text(), "(P 0 1 2 3 4 5)");

        let o = orthogonal_tree(&SetFamily::new(3));
        assert_eq!(o.tree.to_text(), "(C 0 1 2)");
        let o = orthogonal_tree(&SetFamily::new(1));
        assert_eq!(o.tree.to_text(), "0");
    }

    #[test]
    fn containers_of_special_members() {
        let f = fam(4, &[&[0, 1, 2, 3], &[2], &[0, 1], &[0, 1]]);
        let o = orthogonal_tree(&f);
        assert_eq!(o.container[0], o.tree.root());
        assert_eq!(o.container[1], o.tree.leaf(2));
        assert_eq!(o.tree.node_set(o.container[2]), vec![0, 1]);
        assert_eq!(o.container[2], o.container[3]);
        assert_eq!(o.tree.node(o.container[2]).kind, NodeKind::Complete);
    }

    /// Pairwise overlap graph, for cross-checking the sweep.
    fn quadratic_components(f: &SetFamily) -> Vec<usize> {
        let m = f.members();
        let mut dsu = Dsu::new(m.len());
        for i in 0..m.len() {
            for j in 0..i {
                if m[i] == m[j] || overlap(&m[i], &m[j]) {
                    dsu.union(i, j);
                }
            }
        }
        (0..m.len()).map(|i| dsu.find(i)).collect()
    }

    fn same_partition(a: &[usize], b: &[usize]) -> bool {
        (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
    }

    #[test]
    fn sweep_matches_quadratic_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for round in 0..600 {
            let ground = rng.gen_range(2..40);
            let count = rng.gen_range(1..40);
            let mut f = SetFamily::new(ground);
            for _ in 0..count {
                // intervals and random sets mixed to get deep nesting
                let s: Vec<usize> = if rng.gen_bool(0.5) {
                    let a = rng.gen_range(0..ground);
                    let b = rng.gen_range(a..ground);
                    (a..=b).collect()
                } else {
                    let p = rng.gen_range(0.05..0.9);
                    (0..ground).filter(|_| rng.gen_bool(p)).collect()
                };
                if !s.is_empty() {
                    f.push_sorted(s);
                }
            }
            let got = overlap_components(&f);
            let want = quadratic_components(&f);
            assert!(same_partition(&got, &want), "round {round}: {:?}", f.members());
        }
    }

    #[test]
    fn orthogonal_matches_brute_force_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1500 {
            let ground = rng.gen_range(1..=8);
            let count = rng.gen_range(0..7);
            let density = rng.gen_range(0.2..0.8);
            let f = random_family(&mut rng, ground, count, density);
            let o = orthogonal_tree(&f);
            o.tree.validate().unwrap();
            assert_eq!(o.tree.enumerate_members(1 << 12).unwrap(), brute_orthogonal(&f).unwrap(), "{:?}", f);
            let sets = o.tree.node_sets();
            for (i, m) in f.members().iter().enumerate() {
                let c = o.container[i];
                assert!(m.iter().all(|e| sets[c].binary_search(e).is_ok()));
                for &ch in &o.tree.node(c).children {
                    assert!(!m.iter().all(|e| sets[ch].binary_search(e).is_ok()));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn refine_blocks_never_overlap(
            ground in 1usize..12,
            raw in proptest::collection::vec(proptest::collection::vec(0usize..12, 1..6), 0..6),
        ) {
            let sets: Vec<Vec<usize>> = raw.into_iter()
                .map(|s| s.into_iter().filter(|&e| e < ground).collect::<Vec<_>>())
                .filter(|s| !s.is_empty())
                .collect();
            let f = SetFamily::from_sets(ground, sets).unwrap();
            let blocks = partition_refine(&[(0..ground).collect()], &f);
            for b in &blocks {
                for m in f.members() {
                    prop_assert!(!overlap(b, m));
                }
            }
            // maximality: elements share a block iff same membership pattern
            let sig = |e: usize| f.members().iter().map(|m| m.contains(&e)).collect::<Vec<_>>();
            for b in &blocks {
                for &e in b {
                    prop_assert_eq!(sig(e), sig(b[0]));
                }
            }
            prop_assert_eq!(blocks.iter().map(|b| b.len()).sum::<usize>(), ground);
            let mut firsts: Vec<Vec<bool>> = blocks.iter().map(|b| sig(b[0])).collect();
            firsts.sort();
            firsts.dedup();
            prop_assert_eq!(firsts.len(), blocks.len());
        }

        #[test]
        fn orthogonal_is_partitive(
            ground in 1usize..8,
            raw in proptest::collection::vec(proptest::collection::vec(0usize..8, 1..6), 0..6),
        ) {
            let sets: Vec<Vec<usize>> = raw.into_iter()
                .map(|s| s.into_iter().filter(|&e| e < ground).collect::<Vec<_>>())
                .filter(|s| !s.is_empty())
                .collect();
            let f = SetFamily::from_sets(ground, sets).unwrap();
            let members = orthogonal_tree(&f).tree.enumerate_members(1 << 12).unwrap();
            for a in &members {
                for b in &members {
                    if overlap(a, b) {
                        let union: Vec<usize> = crate::partitive::merge_sorted(a, b);
                        let inter: Vec<usize> = a.iter().copied().filter(|e| b.contains(e)).collect();
                        let mut sym: Vec<usize> = a.iter().copied().filter(|e| !b.contains(e))
                            .chain(b.iter().copied().filter(|e| !a.contains(e))).collect();
                        sym.sort_unstable();
                        prop_assert!(members.binary_search(&union).is_ok());
                        prop_assert!(members.binary_search(&inter).is_ok());
                        prop_assert!(members.binary_search(&sym).is_ok());
                    }
                }
            }
        }
    }
}
