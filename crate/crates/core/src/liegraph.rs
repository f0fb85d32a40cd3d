//! The Lie-graph operad and its free complete algebras on decorated directed
//! simple graphs.

use std::collections::BTreeMap;

use num_traits::One;

use crate::assoc::{require_gauge_degrees, WordSeries};
use crate::combinatorics::graph::{canonical_labelling, enumerate_dsgra, linear_extension_count, DiGraph};
use crate::combinatorics::leveled::{enumerate_leveled, LeveledShape};
use crate::error::{Error, Result};
use crate::free::{self, bracket, cartesian, evaluate, mul, FreeBasis, GenMap};
use crate::generator::{Alphabet, Gen};
use crate::prelie::{self, Tree, TreeSeries};
use crate::scalar::{factorial, Scalar};
use crate::series::{Basis, DecodeBasis, Series};

/// A decorated graph in canonical labelling; no vertices means the unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    pub decos: Vec<Gen>,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn unit() -> Self {
        Graph {
            decos: vec![],
            edges: vec![],
        }
    }

    pub fn is_unit(&self) -> bool {
        self.decos.is_empty()
    }

    pub fn digraph(&self) -> DiGraph {
        DiGraph::new(self.decos.len(), self.edges.iter().copied())
    }

    /// Canonical form with the Koszul sign of the relabelling, or `None`
    /// when an odd automorphism kills the graph.
    pub fn canonical(g: &DiGraph, decos: &[Gen]) -> Option<(Graph, i32)> {
        if g.n == 0 {
            return Some((Graph::unit(), 1));
        }
        let degrees: Vec<i32> = decos.iter().map(|d| d.degree as i32).collect();
        let c = canonical_labelling(g, decos, Some(&degrees));
        (!c.odd_automorphism).then(|| {
            (
                Graph {
                    decos: c.colors,
                    edges: c.graph.edges,
                },
                c.sign,
            )
        })
    }

    /// Order of the decoration-preserving automorphism group.
    pub fn automorphisms(&self) -> usize {
        canonical_labelling(&self.digraph(), &self.decos, None).automorphisms
    }

    /// Parent pointers if the graph is a rooted tree (edges child -> parent).
    pub fn tree_parents(&self) -> Option<Vec<Option<usize>>> {
        let n = self.decos.len();
        if n == 0 || self.edges.len() != n - 1 {
            return None;
        }
        let mut parent = vec![None; n];
        for &(a, b) in &self.edges {
            if parent[a].is_some() {
                return None;
            }
            parent[a] = Some(b);
        }
        Some(parent)
    }

    pub fn from_tree(t: &Tree) -> Option<(Graph, i32)> {
        let parents = t.shape();
        let g = DiGraph::new(
            parents.len(),
            parents.iter().enumerate().filter_map(|(v, p)| p.map(|p| (v, p))),
        );
        Graph::canonical(&g, &t.decos)
    }
}

impl Basis for Graph {
    const FAMILY: &'static str = "graph";

    fn weight(&self) -> u32 {
        self.decos.iter().map(|g| g.weight as u32).sum()
    }

    fn degree(&self) -> i32 {
        self.decos.iter().map(|g| g.degree as i32).sum()
    }

    fn encode(&self, alphabet: &Alphabet) -> String {
        if self.is_unit() {
            return "1".into();
        }
        let names: Vec<&str> = self.decos.iter().map(|g| alphabet.name(*g)).collect();
        format!("{}; {}", self.digraph().encode(), names.join(","))
    }

    fn encode_term(&self, alphabet: &Alphabet) -> String {
        if self.is_unit() {
            "1".into()
        } else {
            format!("⟨{}⟩", self.encode(alphabet))
        }
    }

    fn encode_latex(&self, alphabet: &Alphabet) -> String {
        if self.is_unit() {
            "1".into()
        } else {
            format!("\\langle {} \\rangle", self.encode(alphabet))
        }
    }
}

impl DecodeBasis for Graph {
    fn decode(s: &str, alphabet: &Alphabet) -> Result<Self> {
        match Self::decode_signed(s, alphabet)? {
            (g, 1) => Ok(g),
            _ => Err(Error::Parse(format!("graph {s:?} is not in canonical labelling"))),
        }
    }

    fn decode_signed(s: &str, alphabet: &Alphabet) -> Result<(Self, i32)> {
        if s.trim() == "1" {
            return Ok((Graph::unit(), 1));
        }
        let (g, names) = DiGraph::decode(s)?;
        g.validate()?;
        if names.len() != g.n {
            return Err(Error::Parse(format!("graph {s:?} needs one decoration per vertex")));
        }
        let decos = names.iter().map(|n| alphabet.get(n)).collect::<Result<Vec<_>>>()?;
        Ok(Graph::canonical(&g, &decos).unwrap_or((Graph::unit(), 0)))
    }
}

/// Replaces each vertex `v` of `shape` by a block of `sizes[v]` vertices
/// (blocks concatenated in vertex order), keeping `internal` edges and
/// turning each shape edge into every nonempty set of edges between the two
/// blocks, in the same direction.
fn insert_blocks(shape: &DiGraph, sizes: &[usize], internal: &[(usize, usize)]) -> Vec<DiGraph> {
    let mut offset = vec![0];
    for s in sizes {
        offset.push(offset.last().unwrap() + s);
    }
    let total = offset[sizes.len()];
    let options: Vec<Vec<(usize, usize)>> = shape
        .edges
        .iter()
        .map(|&(a, b)| {
            let mut v = vec![];
            for u in offset[a]..offset[a + 1] {
                for w in offset[b]..offset[b + 1] {
                    v.push((u, w));
                }
            }
            v
        })
        .collect();
    let ranges: Vec<std::ops::Range<usize>> = options.iter().map(|o| 1..(1usize << o.len())).collect();
    cartesian(&ranges)
        .into_iter()
        .map(|masks| {
            let mut edges = internal.to_vec();
            for (opts, mask) in options.iter().zip(masks) {
                edges.extend(
                    opts.iter()
                        .enumerate()
                        .filter(|(k, _)| mask & (1 << k) != 0)
                        .map(|(_, &e)| e),
                );
            }
            DiGraph::new(total, edges)
        })
        .collect()
}

/// Partial composition `g1 ∘_i g2` in the operad (1-based `i`): vertex `i`
/// is replaced by `g2`, whose vertices become `i..i+n-1`; every edge at `i`
/// is reconnected to a nonempty set of vertices of `g2`.
pub fn partial_composition(g1: &DiGraph, i: usize, g2: &DiGraph) -> Result<Vec<DiGraph>> {
    if i == 0 || i > g1.n {
        return Err(Error::IndexOutOfRange { index: i, max: g1.n });
    }
    let i = i - 1;
    let mut sizes = vec![1; g1.n];
    sizes[i] = g2.n;
    let internal: Vec<(usize, usize)> = g2.edges.iter().map(|&(a, b)| (a + i, b + i)).collect();
    let out = insert_blocks(g1, &sizes, &internal);
    for g in &out {
        g.validate()
            .unwrap_or_else(|e| panic!("partial composition produced an invalid graph {}: {e}", g.encode()));
    }
    Ok(out)
}

/// An element of the operad: labelled graphs of one arity with coefficients.
pub type OperadElement = BTreeMap<DiGraph, Scalar>;

/// `∘_i` extended bilinearly.
pub fn compose_elements(a: &OperadElement, i: usize, b: &OperadElement) -> Result<OperadElement> {
    let mut out = OperadElement::new();
    for (g1, c1) in a {
        for (g2, c2) in b {
            for g in partial_composition(g1, i, g2)? {
                let e = out.entry(g).or_insert_with(|| Scalar::from_integer(0.into()));
                *e += c1 * c2;
            }
        }
    }
    out.retain(|_, c| !num_traits::Zero::is_zero(c));
    Ok(out)
}

impl FreeBasis for Graph {
    /// Input `i` sits at vertex `i`.
    type Shape = DiGraph;

    fn generator(g: Gen) -> Self {
        Graph {
            decos: vec![g],
            edges: vec![],
        }
    }

    fn decorations(&self) -> Vec<Gen> {
        self.decos.clone()
    }

    fn shape(&self) -> DiGraph {
        self.digraph()
    }

    fn arity(shape: &DiGraph) -> usize {
        shape.n
    }

    fn compose(shape: &DiGraph, inputs: &[&Self], out: &mut Vec<(Self, i32)>) {
        if inputs.iter().any(|g| g.is_unit()) {
            match inputs {
                [g] => out.push(((*g).clone(), 1)),
                [x, y] if shape.edges == [(1, 0)] && x.is_unit() => out.push(((*y).clone(), 1)),
                _ => {}
            }
            return;
        }
        let sizes: Vec<usize> = inputs.iter().map(|g| g.decos.len()).collect();
        let mut internal = vec![];
        let mut decos = vec![];
        for g in inputs {
            let off = decos.len();
            internal.extend(g.edges.iter().map(|&(a, b)| (a + off, b + off)));
            decos.extend(g.decos.iter().copied());
        }
        for g in insert_blocks(shape, &sizes, &internal) {
            if let Some(r) = Graph::canonical(&g, &decos) {
                out.push(r);
            }
        }
    }

    fn product_shape() -> DiGraph {
        DiGraph::new(2, [(1, 0)])
    }
}

pub type GraphSeries = Series<Graph>;

pub fn unit(trunc: u32) -> GraphSeries {
    Series::monomial(Graph::unit(), trunc)
}

pub fn gen(g: Gen, trunc: u32) -> GraphSeries {
    free::generator(g, trunc)
}

pub fn graph_mul(a: &GraphSeries, b: &GraphSeries) -> Result<GraphSeries> {
    a.check(b)?;
    Ok(mul(a, b))
}

pub fn graph_bracket(a: &GraphSeries, b: &GraphSeries) -> GraphSeries {
    bracket(a, b)
}

fn split_unit(one_plus: &GraphSeries) -> Result<GraphSeries> {
    if !one_plus.coeff(&Graph::unit()).is_one() {
        return Err(Error::Constraint("expected constant term 1".into()));
    }
    Ok(one_plus.filter(|g| !g.is_unit()))
}

fn no_constant(x: &GraphSeries) -> Result<()> {
    if x.has_constant_term() {
        Err(Error::ConstantTerm)
    } else {
        Ok(())
    }
}

fn recip(n: u128) -> Scalar {
    Scalar::from_integer(n.into()).recip()
}

/// Largest vertex count that fits under the truncation.
fn max_vertices(s: &GraphSeries) -> usize {
    s.min_weight().map_or(0, |w| (s.trunc() / w.max(1)) as usize)
}

/// `exp(λ) = 1 + Σ_g ℓ_g / (|g|! |Aut g|) g(λ)` over isomorphism classes,
/// where `ℓ_g` counts linear extensions.
pub fn graph_exp(lambda: &GraphSeries) -> Result<GraphSeries> {
    no_constant(lambda)?;
    let trunc = lambda.trunc();
    let mut out = unit(trunc);
    for n in 1..=max_vertices(lambda) {
        let inputs = vec![lambda; n];
        for g in enumerate_dsgra(n)? {
            let aut = canonical_labelling(&g, &vec![(); n], None).automorphisms as u128;
            let c = Scalar::from_integer(linear_extension_count(&g)?.into())
                / Scalar::from_integer(factorial(n) * num_bigint::BigInt::from(aut));
            out.add_scaled(&evaluate::<Graph>(&g, &inputs, trunc), &c);
        }
    }
    Ok(out)
}

/// Compositional inverse of [`graph_exp`], solved weight by weight.
pub fn graph_log(one_plus: &GraphSeries) -> Result<GraphSeries> {
    let lambda = split_unit(one_plus)?;
    let one = unit(lambda.trunc());
    let mut omega = lambda.clone();
    for _ in 0..lambda.trunc() {
        let r = &(&graph_exp(&omega)? - &one) - &lambda;
        if r.is_zero() {
            break;
        }
        omega -= &r;
    }
    Ok(omega)
}

/// Inputs of a leveled sum: which series decorates each kind of vertex.
struct LeveledInputs<'a> {
    bottom: &'a GraphSeries,
    marked: Option<&'a GraphSeries>,
    middle: Option<&'a GraphSeries>,
    top: &'a GraphSeries,
}

/// `Σ 1/|Aut g| g(inputs)` over leveled classes with `k` bottom and `l` top
/// vertices, for every `(k, l)` fitting under the truncation.
fn leveled_sum(inp: &LeveledInputs, trunc: u32) -> Result<GraphSeries> {
    let mut out = Series::zero(trunc);
    let w = |s: Option<&GraphSeries>| s.map_or(Some(0), |s| s.min_weight());
    let (Some(wm), Some(wa)) = (w(inp.marked), w(inp.middle)) else {
        return Ok(out);
    };
    let Some(budget) = trunc.checked_sub(wm + wa) else {
        return Ok(out);
    };
    let count = |s: &GraphSeries, budget: u32| s.min_weight().map_or(0, |w| (budget / w.max(1)) as usize);
    let kmin = inp.marked.is_some() as usize;
    for extra in 0..=count(inp.bottom, budget) {
        let rest = budget - extra as u32 * inp.bottom.min_weight().unwrap_or(0);
        for l in 0..=count(inp.top, rest) {
            let k = kmin + extra;
            let shape = match (inp.marked.is_some(), inp.middle.is_some()) {
                (true, _) => LeveledShape::marked(k, l),
                (false, true) => LeveledShape::three(k, l),
                (false, false) => LeveledShape::two(k, l),
            };
            if shape.vertex_count() == 0 {
                continue;
            }
            for lg in enumerate_leveled(shape)? {
                let inputs: Vec<&GraphSeries> = lg
                    .levels
                    .iter()
                    .enumerate()
                    .map(|(v, &level)| match (level, inp.middle) {
                        (1, _) if lg.marked == Some(v) => inp.marked.unwrap(),
                        (1, _) => inp.bottom,
                        (2, Some(m)) => m,
                        _ => inp.top,
                    })
                    .collect();
                out.add_scaled(&evaluate::<Graph>(&lg.graph, &inputs, trunc), &recip(lg.automorphisms as u128));
            }
        }
    }
    Ok(out)
}

/// `(1+x) ⊚ (1+y) = 1 + Σ_g 1/|Aut g| g(x; y)` over connected 2-leveled
/// classes with `x` on the bottom level and `y` on top.
pub fn graph_circle_product(a: &GraphSeries, b: &GraphSeries) -> Result<GraphSeries> {
    a.check(b)?;
    let x = split_unit(a)?;
    let y = split_unit(b)?;
    let mut out = unit(a.trunc());
    out += &leveled_sum(
        &LeveledInputs {
            bottom: &x,
            marked: None,
            middle: None,
            top: &y,
        },
        a.trunc(),
    )?;
    Ok(out)
}

/// `(1+λ)⁻¹ = 1 + Σ_g (-1)^{|g|} / |Aut g| g(λ)`.
pub fn graph_grouplike_inverse(lambda: &GraphSeries) -> Result<GraphSeries> {
    no_constant(lambda)?;
    let trunc = lambda.trunc();
    let mut out = unit(trunc);
    for n in 1..=max_vertices(lambda) {
        let inputs = vec![lambda; n];
        for g in enumerate_dsgra(n)? {
            let aut = canonical_labelling(&g, &vec![(); n], None).automorphisms as u128;
            let mut c = recip(aut);
            if n % 2 == 1 {
                c = -c;
            }
            out.add_scaled(&evaluate::<Graph>(&g, &inputs, trunc), &c);
        }
    }
    Ok(out)
}

/// The bowtie element: 3-leveled classes with a single middle vertex `α`,
/// bottoms `x` and tops `y`.
pub fn bowtie(a: &GraphSeries, alpha: &GraphSeries, b: &GraphSeries) -> Result<GraphSeries> {
    a.check(alpha)?;
    a.check(b)?;
    let x = split_unit(a)?;
    let y = split_unit(b)?;
    leveled_sum(
        &LeveledInputs {
            bottom: &x,
            marked: None,
            middle: Some(alpha),
            top: &y,
        },
        a.trunc(),
    )
}

/// `(1+λ; dλ) ⊚ (1+y)`: 2-leveled classes with one marked bottom vertex `dλ`,
/// the other bottoms `λ` and tops `y`.
pub fn marked_circle(lambda: &GraphSeries, dlambda: &GraphSeries, b: &GraphSeries) -> Result<GraphSeries> {
    let y = split_unit(b)?;
    leveled_sum(
        &LeveledInputs {
            bottom: lambda,
            marked: Some(dlambda),
            middle: None,
            top: &y,
        },
        lambda.trunc(),
    )
}

/// `bowtie(1+λ, α, (1+λ)⁻¹) - (1+λ; dλ) ⊚ (1+λ)⁻¹`.
pub fn liegraph_gauge_action(lambda: &GraphSeries, alpha: &GraphSeries, dlambda: &GraphSeries) -> Result<GraphSeries> {
    lambda.check(alpha)?;
    lambda.check(dlambda)?;
    require_gauge_degrees(lambda, alpha, dlambda)?;
    no_constant(lambda)?;
    let inv = graph_grouplike_inverse(lambda)?;
    let one_plus = &unit(lambda.trunc()) + lambda;
    Ok(&bowtie(&one_plus, alpha, &inv)? - &marked_circle(lambda, dlambda, &inv)?)
}

/// `dβ + β⋆β`.
pub fn liegraph_mc_residual(beta: &GraphSeries, d: &GenMap<Graph>) -> GraphSeries {
    &free::derivation(beta, d) + &mul(beta, beta)
}

/// Keeps rooted trees (every vertex has at most one outgoing edge).
pub fn project_to_prelie(s: &GraphSeries) -> TreeSeries {
    s.map_linear(s.trunc(), |g| {
        if g.is_unit() {
            return vec![(Tree::unit(), Scalar::one())];
        }
        match g.tree_parents().and_then(|p| Tree::canonical(&p, &g.decos)) {
            Some((t, sign)) => vec![(t, Scalar::from_integer(sign.into()))],
            None => vec![],
        }
    })
}

/// Keeps ladders, read as words from the bottom up.
pub fn project_to_assoc(s: &GraphSeries) -> WordSeries {
    prelie::project_to_words(&project_to_prelie(s))
}

/// Embeds a tree series as graphs (edges from child to parent).
pub fn trees_as_graphs(s: &TreeSeries) -> GraphSeries {
    s.map_linear(s.trunc(), |t| match Graph::from_tree(t) {
        Some((g, sign)) => vec![(g, Scalar::from_integer(sign.into()))],
        None => vec![],
    })
}
