//! Labelled planar rooted trees: planar trees with leaves labelled `01` or
//! `0` and every vertex of positive arity `m != 1` labelled by a string of
//! permutations of `m`, consecutive entries distinct, subject to the leaf
//! ordering, string length, monotonicity and ordered-partition conditions.
//! Vertices of arity 0 carry no string.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest weight [`enumerate_laprt`] accepts; label strings grow
/// factorially with the arity.
pub const MAX_LAPRT_WEIGHT: usize = 4;

/// Permutation in one-line notation, 1-based: `p[i-1] = σ(i)`.
pub type Perm = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LaNode {
    Leaf01,
    Leaf0,
    Vertex { label: Vec<Perm>, children: Vec<LaNode> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LaprtViolation {
    /// Vertex of arity 1.
    ArityOne { vertex: usize },
    /// A string entry is not a permutation of the arity.
    NotAPermutation { vertex: usize },
    /// Two consecutive entries of a string coincide.
    RepeatedPermutation { vertex: usize, index: usize },
    /// Children are not `01`-leaves (at least one), then `0`-leaves, then
    /// internal edges.
    LeafOrder { vertex: usize },
    /// String length differs from the number of `01`-leaves.
    StringLength { vertex: usize, expected: usize, found: usize },
    /// The last permutation does not keep internal edges in order.
    MonotoneInternal { vertex: usize },
    /// The sets `J_i` do not form an ordered partition of the `0`-leaves.
    OrderedPartition { vertex: usize },
    /// A vertex of arity 0 carries a string.
    LabelledZeroVertex { vertex: usize },
}

impl LaprtViolation {
    /// Which of the four displayed conditions fails, if it is one of them.
    pub fn condition(&self) -> Option<u8> {
        match self {
            LaprtViolation::LeafOrder { .. } => Some(1),
            LaprtViolation::StringLength { .. } => Some(2),
            LaprtViolation::MonotoneInternal { .. } => Some(3),
            LaprtViolation::OrderedPartition { .. } => Some(4),
            _ => None,
        }
    }
}

fn is_perm(p: &[usize], m: usize) -> bool {
    p.len() == m && p.iter().copied().sorted().eq(1..=m)
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v - 1] = i + 1;
    }
    inv
}

/// `I_i = σ({1, .., σ⁻¹(i+1) - 1})` for 0-based `i`.
fn i_set(p: &[usize], i: usize) -> BTreeSet<usize> {
    let pos = inverse(p)[i];
    p[..pos - 1].iter().copied().collect()
}

/// Checks the monotone and ordered-partition conditions for a string at a
/// vertex with `a` `01`-leaves, `b` `0`-leaves and arity `m`.
fn check_string(label: &[Perm], a: usize, b: usize, m: usize) -> (bool, bool) {
    let last = inverse(&label[a - 1]);
    let monotone = (a + b + 1..m).all(|k| last[k - 1] < last[k]);
    let zeros: BTreeSet<usize> = (a + 1..=a + b).collect();
    let mut covered = BTreeSet::new();
    let mut prev_max = 0;
    let mut partition = true;
    for (i, p) in label.iter().enumerate() {
        let set = i_set(p, i);
        if !set.is_subset(&zeros) {
            partition = false;
            break;
        }
        let j: BTreeSet<usize> = set.difference(&covered).copied().collect();
        if let Some(&lo) = j.iter().next() {
            if lo < prev_max {
                partition = false;
                break;
            }
            prev_max = *j.iter().next_back().unwrap();
        }
        covered.extend(set);
    }
    (monotone, partition && covered == zeros)
}

pub fn validate_laprt(t: &LaNode) -> Vec<LaprtViolation> {
    let mut out = vec![];
    let mut next = 0;
    validate_at(t, &mut next, &mut out);
    out
}

fn validate_at(t: &LaNode, next: &mut usize, out: &mut Vec<LaprtViolation>) {
    let LaNode::Vertex { label, children } = t else {
        return;
    };
    let vertex = *next;
    *next += 1;
    let m = children.len();
    if m == 0 {
        if !label.is_empty() {
            out.push(LaprtViolation::LabelledZeroVertex { vertex });
        }
    } else if m == 1 {
        out.push(LaprtViolation::ArityOne { vertex });
    } else {
        check_vertex(vertex, label, children, out);
    }
    for c in children {
        validate_at(c, next, out);
    }
}

fn check_vertex(vertex: usize, label: &[Perm], children: &[LaNode], out: &mut Vec<LaprtViolation>) {
    let m = children.len();
    if label.iter().any(|p| !is_perm(p, m)) {
        out.push(LaprtViolation::NotAPermutation { vertex });
        return;
    }
    if let Some(index) = (1..label.len()).find(|&i| label[i - 1] == label[i]) {
        out.push(LaprtViolation::RepeatedPermutation { vertex, index });
    }
    let rank = |c: &LaNode| match c {
        LaNode::Leaf01 => 0,
        LaNode::Leaf0 => 1,
        LaNode::Vertex { .. } => 2,
    };
    let a = children.iter().filter(|c| rank(c) == 0).count();
    let b = children.iter().filter(|c| rank(c) == 1).count();
    if a == 0 || !children.windows(2).all(|w| rank(&w[0]) <= rank(&w[1])) {
        out.push(LaprtViolation::LeafOrder { vertex });
        return;
    }
    if label.len() != a {
        out.push(LaprtViolation::StringLength {
            vertex,
            expected: a,
            found: label.len(),
        });
        return;
    }
    let (monotone, partition) = check_string(label, a, b, m);
    if !monotone {
        out.push(LaprtViolation::MonotoneInternal { vertex });
    }
    if !partition {
        out.push(LaprtViolation::OrderedPartition { vertex });
    }
}

impl LaNode {
    /// Leaves plus arity-0 vertices.
    pub fn weight(&self) -> usize {
        match self {
            LaNode::Leaf01 | LaNode::Leaf0 => 1,
            LaNode::Vertex { children, .. } if children.is_empty() => 1,
            LaNode::Vertex { children, .. } => children.iter().map(|c| c.weight()).sum(),
        }
    }

    /// Structural encoding, e.g. `c2^([21])(01,0)`.
    pub fn encode(&self) -> String {
        self.render("01", "0", "c0")
    }

    /// The term with `01`-leaves fed `λ`, `0`-leaves fed `α` and arity-0
    /// vertices fed `dλ+α`.
    pub fn term(&self) -> String {
        self.render("λ", "α", "(dλ+α)")
    }

    fn render(&self, l01: &str, l0: &str, zero: &str) -> String {
        match self {
            LaNode::Leaf01 => l01.to_string(),
            LaNode::Leaf0 => l0.to_string(),
            LaNode::Vertex { children, .. } if children.is_empty() => zero.to_string(),
            LaNode::Vertex { label, children } => {
                let lab = label
                    .iter()
                    .map(|p| format!("[{}]", p.iter().join("")))
                    .join(",");
                format!(
                    "c{}^({})({})",
                    children.len(),
                    lab,
                    children.iter().map(|c| c.render(l01, l0, zero)).join(",")
                )
            }
        }
    }
}

/// All valid label strings for a vertex with `a` `01`-leaves, `b` `0`-leaves
/// and `c` internal edges.
pub fn label_strings(a: usize, b: usize, c: usize) -> Vec<Vec<Perm>> {
    let m = a + b + c;
    let perms: Vec<Perm> = (1..=m).permutations(m).collect();
    let zeros: BTreeSet<usize> = (a + 1..=a + b).collect();
    let mut out = vec![];
    let mut cur: Vec<Perm> = vec![];
    fn rec(
        i: usize,
        a: usize,
        b: usize,
        m: usize,
        perms: &[Perm],
        zeros: &BTreeSet<usize>,
        cur: &mut Vec<Perm>,
        out: &mut Vec<Vec<Perm>>,
    ) {
        if i == a {
            let (mono, part) = check_string(cur, a, b, m);
            if mono && part {
                out.push(cur.clone());
            }
            return;
        }
        for p in perms {
            if cur.last() == Some(p) || !i_set(p, i).is_subset(zeros) {
                continue;
            }
            cur.push(p.clone());
            rec(i + 1, a, b, m, perms, zeros, cur, out);
            cur.pop();
        }
    }
    rec(0, a, b, m, &perms, &zeros, &mut cur, &mut out);
    out
}

/// Valid vertex-rooted trees of weight at most `budget`.
fn vertices_upto(budget: usize) -> Vec<LaNode> {
    let mut out = vec![];
    if budget == 0 {
        return out;
    }
    out.push(LaNode::Vertex {
        label: vec![],
        children: vec![],
    });
    let subs = vertices_upto(budget - 1);
    for a in 1..=budget {
        for b in 0..=budget - a {
            let room = budget - a - b;
            // every internal child weighs at least 1
            for c in 0..=room {
                if a + b + c < 2 {
                    continue;
                }
                let strings = label_strings(a, b, c);
                if strings.is_empty() {
                    continue;
                }
                for kids in forests(&subs, c, room) {
                    let mut children = vec![LaNode::Leaf01; a];
                    children.extend(std::iter::repeat(LaNode::Leaf0).take(b));
                    children.extend(kids);
                    for s in &strings {
                        out.push(LaNode::Vertex {
                            label: s.clone(),
                            children: children.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

fn forests(subs: &[LaNode], c: usize, room: usize) -> Vec<Vec<LaNode>> {
    if c == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for t in subs {
        let w = t.weight();
        if w + (c - 1) > room {
            continue;
        }
        for mut rest in forests(subs, c - 1, room - w) {
            rest.insert(0, t.clone());
            out.push(rest);
        }
    }
    out
}

/// All labelled planar rooted trees of weight at most `max_weight`, ordered
/// by (weight, encoding).
pub fn enumerate_laprt(max_weight: usize) -> Result<Vec<LaNode>> {
    if max_weight > MAX_LAPRT_WEIGHT {
        return Err(Error::BoundExceeded {
            what: "LaPRT weight".into(),
            value: max_weight,
            bound: MAX_LAPRT_WEIGHT,
        });
    }
    let mut v: Vec<(usize, String, LaNode)> = vertices_upto(max_weight)
        .into_iter()
        .map(|t| (t.weight(), t.encode(), t))
        .collect();
    v.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    v.dedup_by(|x, y| x.1 == y.1);
    Ok(v.into_iter().map(|x| x.2).collect())
}

/// The tree of the labelled-tree figure.
pub fn figure_example() -> LaNode {
    use LaNode::*;
    let v4 = Vertex {
        label: vec![vec![2, 1]],
        children: vec![Leaf01, Leaf0],
    };
    let v5 = Vertex {
        label: vec![vec![2, 1, 3]],
        children: vec![
            Leaf01,
            Leaf0,
            Vertex {
                label: vec![],
                children: vec![],
            },
        ],
    };
    Vertex {
        label: vec![vec![1, 2, 3, 4], vec![2, 3, 4, 1]],
        children: vec![Leaf01, Leaf01, v4, v5],
    }
}
