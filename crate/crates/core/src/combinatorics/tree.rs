//! Rooted trees (children unordered) and planar rooted trees.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Canonical form of a rooted tree with coloured vertices.
#[derive(Clone, Debug)]
pub struct TreeCanon<C> {
    /// Original vertices in canonical preorder.
    pub order: Vec<usize>,
    /// Depth of each vertex in canonical preorder, root at depth 0.
    pub depths: Vec<u8>,
    pub colors: Vec<C>,
    pub automorphisms: usize,
    /// Some automorphism has odd Koszul sign, so the decorated tree vanishes.
    pub zero: bool,
    /// Koszul sign of moving the input order to `order`.
    pub sign: i32,
}

struct Sub<C> {
    code: Vec<(u8, C)>,
    order: Vec<usize>,
    odd: bool,
    aut: usize,
    zero: bool,
}

/// Canonicalises a rooted tree given by parent pointers (exactly one `None`).
/// Children are sorted by their preorder (depth, colour) sequence.
pub fn canonical_tree<C: Ord + Clone>(parent: &[Option<usize>], colors: &[C], degrees: &[i32]) -> TreeCanon<C> {
    let n = parent.len();
    let mut children = vec![vec![]; n];
    let mut root = 0;
    for (v, p) in parent.iter().enumerate() {
        match p {
            Some(p) => children[*p].push(v),
            None => root = v,
        }
    }
    fn go<C: Ord + Clone>(v: usize, ch: &[Vec<usize>], colors: &[C], deg: &[i32]) -> Sub<C> {
        let mut subs: Vec<Sub<C>> = ch[v].iter().map(|&c| go(c, ch, colors, deg)).collect();
        subs.sort_by(|a, b| a.code.cmp(&b.code));
        let mut code = vec![(0u8, colors[v].clone())];
        let mut order = vec![v];
        let mut odd = deg[v] % 2 != 0;
        let mut aut = 1usize;
        let mut zero = false;
        let mut run = 1usize;
        for (i, s) in subs.iter().enumerate() {
            aut *= s.aut;
            zero |= s.zero;
            odd ^= s.odd;
            if i > 0 && subs[i - 1].code == s.code {
                run += 1;
                aut *= run;
                if s.odd {
                    zero = true;
                }
            } else {
                run = 1;
            }
        }
        for s in subs {
            code.extend(s.code.into_iter().map(|(d, c)| (d + 1, c)));
            order.extend(s.order);
        }
        Sub {
            code,
            order,
            odd,
            aut,
            zero,
        }
    }
    let s = go(root, &children, colors, degrees);
    let sign = crate::series::reorder_sign(&s.order, degrees);
    TreeCanon {
        depths: s.code.iter().map(|c| c.0).collect(),
        colors: s.code.into_iter().map(|c| c.1).collect(),
        order: s.order,
        automorphisms: s.aut,
        zero: s.zero,
        sign,
    }
}

/// Parent pointers from a preorder depth sequence.
pub fn parents_from_depths(depths: &[u8]) -> Vec<Option<usize>> {
    let mut stack: Vec<usize> = vec![];
    let mut out = Vec::with_capacity(depths.len());
    for (v, &d) in depths.iter().enumerate() {
        stack.truncate(d as usize);
        out.push(stack.last().copied());
        stack.push(v);
    }
    out
}

/// Nested-parenthesis encoding `x(y,z(w))` from preorder depths and labels.
pub fn encode_nested(depths: &[u8], labels: &[String]) -> String {
    let mut out = String::new();
    let mut open: Vec<u8> = vec![];
    for (i, &d) in depths.iter().enumerate() {
        while open.last().is_some_and(|&o| o >= d) {
            open.pop();
            out.push(')');
        }
        if i > 0 {
            if depths[i - 1] < d {
                out.push('(');
            } else {
                out.push(',');
            }
        }
        out.push_str(&labels[i]);
        if depths.get(i + 1).is_some_and(|&n| n > d) {
            open.push(d);
        }
    }
    for _ in open {
        out.push(')');
    }
    out
}

/// Parses the nested encoding into parent pointers and labels in preorder.
pub fn parse_nested(s: &str) -> Result<(Vec<Option<usize>>, Vec<String>)> {
    let bad = |m: &str| Error::Parse(format!("tree {s:?}: {m}"));
    let mut parents = vec![];
    let mut labels: Vec<String> = vec![];
    let mut stack: Vec<usize> = vec![];
    let mut cur = String::new();
    let mut last: Option<usize> = None;
    let flush = |cur: &mut String,
                 parents: &mut Vec<Option<usize>>,
                 labels: &mut Vec<String>,
                 stack: &Vec<usize>,
                 last: &mut Option<usize>|
     -> Result<()> {
        let name = cur.trim().to_string();
        cur.clear();
        if name.is_empty() {
            return Ok(());
        }
        parents.push(stack.last().copied());
        labels.push(name);
        *last = Some(labels.len() - 1);
        Ok(())
    };
    for ch in s.chars() {
        match ch {
            '(' => {
                flush(&mut cur, &mut parents, &mut labels, &stack, &mut last)?;
                stack.push(last.ok_or_else(|| bad("'(' without a vertex"))?);
            }
            ')' => {
                flush(&mut cur, &mut parents, &mut labels, &stack, &mut last)?;
                stack.pop().ok_or_else(|| bad("unbalanced ')'"))?;
            }
            ',' => flush(&mut cur, &mut parents, &mut labels, &stack, &mut last)?,
            c => cur.push(c),
        }
    }
    flush(&mut cur, &mut parents, &mut labels, &stack, &mut last)?;
    if !stack.is_empty() {
        return Err(bad("unbalanced '('"));
    }
    if parents.iter().filter(|p| p.is_none()).count() != 1 {
        return Err(bad("expected exactly one root"));
    }
    Ok((parents, labels))
}

/// Unlabelled rooted trees with `n` vertices, as canonical depth sequences
/// with automorphism orders.
pub fn enumerate_rooted_trees(n: usize) -> Vec<(Vec<u8>, usize)> {
    if n == 0 {
        return vec![];
    }
    let mut found = BTreeMap::new();
    // every tree has a labelling with parent[i] < i
    let mut parent = vec![0usize; n];
    loop {
        let p: Vec<Option<usize>> = (0..n).map(|i| (i > 0).then(|| parent[i])).collect();
        let c = canonical_tree(&p, &vec![(); n], &vec![0; n]);
        found.insert(c.depths, c.automorphisms);
        // next parent assignment, parent[i] in 0..i
        let mut i = n - 1;
        loop {
            if i == 0 {
                return found.into_iter().collect();
            }
            parent[i] += 1;
            if parent[i] < i {
                break;
            }
            parent[i] = 0;
            i -= 1;
        }
    }
}

/// Planar rooted tree with leaves; a vertex may have any arity, including 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn corolla(m: usize) -> Self {
        PlanarTree::Node(vec![PlanarTree::Leaf; m])
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(c) => 1 + c.iter().map(|t| t.vertex_count()).sum::<usize>(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(c) => c.iter().map(|t| t.leaf_count()).sum(),
        }
    }

    /// `|` for the bare edge, `cM(...)` for a vertex of arity M.
    pub fn encode(&self) -> String {
        match self {
            PlanarTree::Leaf => "|".to_string(),
            PlanarTree::Node(c) if c.is_empty() => "c0".to_string(),
            PlanarTree::Node(c) => format!(
                "c{}({})",
                c.len(),
                c.iter().map(|t| t.encode()).collect::<Vec<_>>().join(",")
            ),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (t, rest) = Self::parse_at(&s)?;
        if !rest.is_empty() {
            return Err(Error::Parse(format!("trailing input {rest:?}")));
        }
        Ok(t)
    }

    fn parse_at(s: &str) -> Result<(Self, &str)> {
        if let Some(rest) = s.strip_prefix('|') {
            return Ok((PlanarTree::Leaf, rest));
        }
        let rest = s
            .strip_prefix('c')
            .ok_or_else(|| Error::Parse(format!("expected '|' or 'c' at {s:?}")))?;
        let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        let m: usize = rest[..digits]
            .parse()
            .map_err(|_| Error::Parse(format!("missing arity at {s:?}")))?;
        let mut rest = &rest[digits..];
        if m == 0 {
            return Ok((PlanarTree::Node(vec![]), rest));
        }
        rest = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse("expected '('".into()))?;
        let mut kids = vec![];
        for i in 0..m {
            let (t, r) = Self::parse_at(rest)?;
            kids.push(t);
            rest = if i + 1 < m {
                r.strip_prefix(',').ok_or_else(|| Error::Parse("expected ','".into()))?
            } else {
                r.strip_prefix(')').ok_or_else(|| Error::Parse("expected ')'".into()))?
            };
        }
        Ok((PlanarTree::Node(kids), rest))
    }
}

/// The gauge-flow coefficient: `C(|) = 1` and
/// `C(c_m(t_1..t_m)) = m! * |t| * prod C(t_i)` with `|t|` the vertex count.
pub fn coefficient_c(t: &PlanarTree) -> BigUint {
    match t {
        PlanarTree::Leaf => BigUint::one(),
        PlanarTree::Node(c) => {
            let m_fact: BigUint = (1..=c.len()).map(BigUint::from).product();
            c.iter()
                .map(coefficient_c)
                .fold(m_fact * BigUint::from(t.vertex_count()), |a, b| a * b)
        }
    }
}

/// Planar rooted trees (at least the bare edge) with `leaves * leaf_weight +
/// vertices * vertex_weight <= budget`, with that weight.
pub fn enumerate_planar_trees(budget: u32, leaf_weight: u32, vertex_weight: u32) -> Vec<(PlanarTree, u32)> {
    assert!(leaf_weight > 0 && vertex_weight > 0);
    let mut memo: BTreeMap<u32, Vec<(PlanarTree, u32)>> = BTreeMap::new();
    trees_upto(budget, leaf_weight, vertex_weight, &mut memo)
}

fn trees_upto(
    budget: u32,
    lw: u32,
    vw: u32,
    memo: &mut BTreeMap<u32, Vec<(PlanarTree, u32)>>,
) -> Vec<(PlanarTree, u32)> {
    if let Some(v) = memo.get(&budget) {
        return v.clone();
    }
    let mut out = vec![];
    if lw <= budget {
        out.push((PlanarTree::Leaf, lw));
    }
    if vw <= budget {
        for (kids, w) in forests(budget - vw, lw, vw, memo) {
            out.push((PlanarTree::Node(kids), w + vw));
        }
    }
    memo.insert(budget, out.clone());
    out
}

/// Ordered sequences of trees with total weight within budget.
fn forests(
    budget: u32,
    lw: u32,
    vw: u32,
    memo: &mut BTreeMap<u32, Vec<(PlanarTree, u32)>>,
) -> Vec<(Vec<PlanarTree>, u32)> {
    let mut out = vec![(vec![], 0)];
    for (t, w) in trees_upto(budget, lw, vw, memo) {
        for (rest, rw) in forests(budget - w, lw, vw, memo) {
            let mut v = vec![t.clone()];
            v.extend(rest);
            out.push((v, w + rw));
        }
    }
    out
}
