//! Planarly partitioned rooted trees: planar trees whose vertices are
//! partitioned into blocks. Each block is a sub-tree with every vertex of
//! arity at least 2, or a single 0-corolla. After stripping leaves and
//! contracting blocks the tree stays planar, while the trees inside the
//! blocks carry no planar structure.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::tree::{canonical_tree, PlanarTree};

/// A planar tree with a partition of its vertices. Vertices are numbered
/// `0..` in preorder, leaves excluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Paprt {
    pub tree: PlanarTree,
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PaprtViolation {
    /// The blocks do not partition the vertex set.
    NotAPartition,
    /// A block contains no vertex (first condition).
    EmptyBlock { block: usize },
    /// A vertex of a block has arity 1, or a 0-corolla shares its block
    /// (second condition).
    BadArity { block: usize, vertex: usize, arity: usize },
    /// A block is not a connected sub-tree.
    NotASubtree { block: usize },
}

impl PaprtViolation {
    /// Which numbered condition of the definition is violated, if any.
    pub fn condition(&self) -> Option<u8> {
        match self {
            PaprtViolation::EmptyBlock { .. } => Some(1),
            PaprtViolation::BadArity { .. } => Some(2),
            _ => None,
        }
    }
}

/// Flattened view of a planar tree.
pub(crate) struct Flat {
    pub parent: Vec<Option<usize>>,
    /// Planar children: `None` for a leaf, `Some(v)` for a vertex.
    pub children: Vec<Vec<Option<usize>>>,
}

impl Flat {
    pub fn new(t: &PlanarTree) -> Self {
        let mut f = Flat {
            parent: vec![],
            children: vec![],
        };
        if let PlanarTree::Node(_) = t {
            f.walk(t, None);
        }
        f
    }

    fn walk(&mut self, t: &PlanarTree, parent: Option<usize>) -> usize {
        let v = self.parent.len();
        self.parent.push(parent);
        self.children.push(vec![]);
        if let PlanarTree::Node(kids) = t {
            for k in kids {
                let c = match k {
                    PlanarTree::Leaf => None,
                    node => Some(self.walk(node, Some(v))),
                };
                self.children[v].push(c);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn arity(&self, v: usize) -> usize {
        self.children[v].len()
    }
}

pub fn validate_paprt(t: &Paprt) -> Vec<PaprtViolation> {
    let f = Flat::new(&t.tree);
    let mut out = vec![];
    let mut owner = vec![None; f.len()];
    let mut partition_ok = true;
    for (b, block) in t.blocks.iter().enumerate() {
        if block.is_empty() {
            out.push(PaprtViolation::EmptyBlock { block: b });
        }
        for &v in block {
            if v >= f.len() || owner[v].is_some() {
                partition_ok = false;
            } else {
                owner[v] = Some(b);
            }
        }
    }
    if !partition_ok || owner.iter().any(|o| o.is_none()) {
        out.insert(0, PaprtViolation::NotAPartition);
        return out;
    }
    for (b, block) in t.blocks.iter().enumerate() {
        let zero_corolla = block.len() == 1 && f.arity(block[0]) == 0;
        if !zero_corolla {
            for &v in block {
                if f.arity(v) < 2 {
                    out.push(PaprtViolation::BadArity {
                        block: b,
                        vertex: v,
                        arity: f.arity(v),
                    });
                }
            }
        }
        // a connected sub-tree has exactly one vertex whose parent lies outside
        let tops = block
            .iter()
            .filter(|&&v| f.parent[v].map_or(true, |p| owner[p] != Some(b)))
            .count();
        if !block.is_empty() && tops != 1 {
            out.push(PaprtViolation::NotASubtree { block: b });
        }
    }
    out
}

/// Canonical encoding, identical for partitioned trees that differ only by
/// the planar order inside blocks or the position of leaves. Requires a
/// valid input.
pub fn paprt_canonical(t: &Paprt) -> String {
    let f = Flat::new(&t.tree);
    let mut owner = vec![0; f.len()];
    for (b, block) in t.blocks.iter().enumerate() {
        for &v in block {
            owner[v] = b;
        }
    }
    let root_block = owner[0];
    encode_block(&f, &owner, &t.blocks, root_block)
}

fn encode_block(f: &Flat, owner: &[usize], blocks: &[Vec<usize>], b: usize) -> String {
    let block = &blocks[b];
    if block.len() == 1 && f.arity(block[0]) == 0 {
        return "z".to_string();
    }
    // child blocks in planar (preorder) order of their roots
    let mut child_roots: Vec<usize> = vec![];
    for v in 0..f.len() {
        if owner[v] != b {
            if let Some(p) = f.parent[v] {
                if owner[p] == b {
                    child_roots.push(v);
                }
            }
        }
    }
    let local: BTreeMap<usize, usize> = block.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let parent: Vec<Option<usize>> = block
        .iter()
        .map(|&v| f.parent[v].and_then(|p| local.get(&p).copied()))
        .collect();
    let colors: Vec<(usize, Vec<usize>)> = block
        .iter()
        .map(|&v| {
            let leaves = f.children[v].iter().filter(|c| c.is_none()).count();
            let attached = f.children[v]
                .iter()
                .flatten()
                .filter_map(|c| child_roots.iter().position(|r| r == c))
                .collect();
            (leaves, attached)
        })
        .collect();
    let canon = canonical_tree(&parent, &colors, &vec![0; block.len()]);
    let labels: Vec<String> = canon
        .colors
        .iter()
        .map(|(l, a)| {
            let mut s = format!("v{l}");
            if !a.is_empty() {
                s.push_str(&format!("[{}]", a.iter().map(|i| i + 1).join(" ")));
            }
            s
        })
        .collect();
    let tree = super::tree::encode_nested(&canon.depths, &labels);
    let kids: Vec<String> = child_roots
        .iter()
        .map(|&r| encode_block(f, owner, blocks, owner[r]))
        .collect();
    if kids.is_empty() {
        format!("<{tree}>")
    } else {
        format!("<{tree}>{{{}}}", kids.join("; "))
    }
}

/// Planar trees with exactly `s` inputs (leaves plus 0-corollas) whose
/// vertices all have arity 0 or at least 2. Includes the bare leaf.
fn input_trees(s: usize, memo: &mut BTreeMap<usize, Vec<PlanarTree>>) -> Vec<PlanarTree> {
    if let Some(v) = memo.get(&s) {
        return v.clone();
    }
    let mut out = vec![];
    if s == 1 {
        out.push(PlanarTree::Leaf);
        out.push(PlanarTree::Node(vec![]));
    }
    // ordered compositions of s into at least two positive parts
    for parts in compositions(s) {
        if parts.len() < 2 {
            continue;
        }
        let choices: Vec<Vec<PlanarTree>> = parts.iter().map(|&p| input_trees(p, memo)).collect();
        for kids in choices.into_iter().multi_cartesian_product() {
            out.push(PlanarTree::Node(kids));
        }
    }
    memo.insert(s, out.clone());
    out
}

fn compositions(s: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for first in 1..=s {
        for mut rest in compositions(s - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Number of inputs (leaves and 0-corollas) of a planar tree.
pub fn input_count(t: &PlanarTree) -> usize {
    match t {
        PlanarTree::Leaf => 1,
        PlanarTree::Node(k) if k.is_empty() => 1,
        PlanarTree::Node(k) => k.iter().map(input_count).sum(),
    }
}

/// All planarly partitioned rooted trees with between 1 and `max_inputs`
/// inputs, one representative per class, ordered by (inputs, encoding).
pub fn enumerate_paprt(max_inputs: usize) -> Vec<(Paprt, String)> {
    let mut memo = BTreeMap::new();
    let mut seen: BTreeSet<(usize, String)> = BTreeSet::new();
    let mut out = vec![];
    for s in 1..=max_inputs {
        for tree in input_trees(s, &mut memo) {
            if tree == PlanarTree::Leaf {
                continue;
            }
            let f = Flat::new(&tree);
            // joinable edges: parent-child pairs of positive-arity vertices
            let joinable: Vec<(usize, usize)> = (0..f.len())
                .filter_map(|v| f.parent[v].map(|p| (p, v)))
                .filter(|&(_, v)| f.arity(v) > 0)
                .collect();
            for mask in 0u64..(1 << joinable.len()) {
                let blocks = blocks_from_joins(f.len(), &joinable, mask);
                let p = Paprt {
                    tree: tree.clone(),
                    blocks,
                };
                debug_assert!(validate_paprt(&p).is_empty());
                let code = paprt_canonical(&p);
                if seen.insert((s, code.clone())) {
                    out.push((s, code, p));
                }
            }
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter().map(|(_, c, p)| (p, c)).collect()
}

fn blocks_from_joins(n: usize, joinable: &[(usize, usize)], mask: u64) -> Vec<Vec<usize>> {
    let mut rep: Vec<usize> = (0..n).collect();
    fn find(rep: &mut Vec<usize>, v: usize) -> usize {
        if rep[v] != v {
            let r = find(rep, rep[v]);
            rep[v] = r;
        }
        rep[v]
    }
    for (k, &(p, c)) in joinable.iter().enumerate() {
        if mask & (1 << k) != 0 {
            let (a, b) = (find(&mut rep, p), find(&mut rep, c));
            rep[b] = a;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut rep, v);
        groups.entry(r).or_default().push(v);
    }
    let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
    blocks.sort();
    blocks
}

/// The tree of the partitioned-tree figure: a ternary root over a ternary
/// vertex (leaf, 0-corolla, leaf), a leaf, and a binary vertex carrying a
/// leaf and another binary vertex; the two binary vertices share a block.
pub fn figure_example() -> Paprt {
    use PlanarTree::*;
    let tree = Node(vec![
        Node(vec![Leaf, Node(vec![]), Leaf]),
        Leaf,
        Node(vec![Leaf, Node(vec![Leaf, Leaf])]),
    ]);
    // preorder: 0 root, 1 ternary, 2 zero-corolla, 3 binary, 4 binary
    Paprt {
        tree,
        blocks: vec![vec![0], vec![1], vec![2], vec![3, 4]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_is_valid() {
        assert!(validate_paprt(&figure_example()).is_empty());
    }

    #[test]
    fn mutations_name_the_violated_condition() {
        let mut p = figure_example();
        p.blocks.push(vec![]);
        let v = validate_paprt(&p);
        assert_eq!(v, vec![PaprtViolation::EmptyBlock { block: 4 }]);
        assert_eq!(v[0].condition(), Some(1));

        // a unary vertex inside a block
        use PlanarTree::*;
        let p = Paprt {
            tree: Node(vec![Node(vec![Leaf]), Leaf]),
            blocks: vec![vec![0, 1]],
        };
        let v = validate_paprt(&p);
        assert_eq!(v, vec![PaprtViolation::BadArity { block: 0, vertex: 1, arity: 1 }]);
        assert_eq!(v[0].condition(), Some(2));

        // the 0-corolla merged into its parent's block
        let mut p = figure_example();
        p.blocks = vec![vec![0], vec![1, 2], vec![3, 4]];
        assert!(matches!(
            validate_paprt(&p)[..],
            [PaprtViolation::BadArity { vertex: 2, arity: 0, .. }]
        ));

        // root and a grandchild without the vertex between them
        let mut p = figure_example();
        p.blocks = vec![vec![0, 4], vec![1], vec![2], vec![3]];
        assert!(validate_paprt(&p).contains(&PaprtViolation::NotASubtree { block: 0 }));

        let mut p = figure_example();
        p.blocks = vec![vec![0], vec![1], vec![3, 4]];
        assert_eq!(validate_paprt(&p), vec![PaprtViolation::NotAPartition]);
    }

    #[test]
    fn canonical_ignores_planarity_inside_blocks() {
        use PlanarTree::*;
        let a = Paprt {
            tree: Node(vec![Leaf, Node(vec![Leaf, Leaf])]),
            blocks: vec![vec![0, 1]],
        };
        let b = Paprt {
            tree: Node(vec![Node(vec![Leaf, Leaf]), Leaf]),
            blocks: vec![vec![0, 1]],
        };
        assert_eq!(paprt_canonical(&a), paprt_canonical(&b));
        // as separate blocks the planar order between them matters
        let a2 = Paprt { blocks: vec![vec![0], vec![1]], ..a };
        let b2 = Paprt { blocks: vec![vec![0], vec![1]], ..b };
        assert_eq!(paprt_canonical(&a2), paprt_canonical(&b2));
        let c = Paprt {
            tree: Node(vec![Node(vec![]), Node(vec![Leaf, Leaf])]),
            blocks: vec![vec![0], vec![1], vec![2]],
        };
        let d = Paprt {
            tree: Node(vec![Node(vec![Leaf, Leaf]), Node(vec![])]),
            blocks: vec![vec![0], vec![1], vec![2]],
        };
        assert_ne!(paprt_canonical(&c), paprt_canonical(&d));
    }

    #[test]
    fn small_counts() {
        let all = enumerate_paprt(2);
        let by_size = |s: usize| all.iter().filter(|(p, _)| input_count(&p.tree) == s).count();
        // one input: the 0-corolla; two inputs: a binary vertex over two
        // leaves, a leaf and a 0-corolla, or two 0-corollas
        assert_eq!(by_size(1), 1);
        assert_eq!(by_size(2), 3);
        for (p, _) in enumerate_paprt(4) {
            assert!(validate_paprt(&p).is_empty());
        }
    }
}
