//! Shifted L∞-algebras: the free construction on rooted trees with symmetric
//! degree `-1` operations, the quasi-free differential, the Maurer–Cartan
//! residual and the gauge-flow formula over planar rooted trees.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_traits::One;
use serde::Deserialize;

use crate::assoc::{self, log_assoc, Word, WordSeries};
use crate::combinatorics::tree::{coefficient_c, enumerate_planar_trees, PlanarTree};
use crate::error::{Error, Result};
use crate::free::{self, bracket, GenMap};
use crate::generator::{Alphabet, Gen};
use crate::lie::bch_dynkin;
use crate::scalar::{inv_factorial, parse_scalar, Scalar};
use crate::series::{reorder_sign, Basis, DecodeBasis, Series};

/// A rooted tree whose internal vertices are operations `ℓ_m` (children
/// unordered, sorted canonically) and whose leaves carry generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SLTree {
    Leaf(Gen),
    Node(Vec<SLTree>),
}

impl SLTree {
    /// `ℓ_m(children)` in canonical order with the Koszul sign of sorting,
    /// or `None` if two equal odd children force it to vanish.
    pub fn node(children: Vec<SLTree>) -> Option<(SLTree, i32)> {
        let degrees: Vec<i32> = children.iter().map(|c| c.degree()).collect();
        let order: Vec<usize> = (0..children.len()).sorted_by(|&a, &b| children[a].cmp(&children[b])).collect();
        let sorted: Vec<SLTree> = order.iter().map(|&i| children[i].clone()).collect();
        if sorted.windows(2).any(|w| w[0] == w[1] && w[0].degree() % 2 != 0) {
            return None;
        }
        let sign = reorder_sign(&order, &degrees);
        Some((SLTree::Node(sorted), sign))
    }

    pub fn internal_vertices(&self) -> usize {
        match self {
            SLTree::Leaf(_) => 0,
            SLTree::Node(c) => 1 + c.iter().map(|t| t.internal_vertices()).sum::<usize>(),
        }
    }

    fn write(&self, alphabet: &Alphabet, out: &mut String) {
        match self {
            SLTree::Leaf(g) => out.push_str(alphabet.name(*g)),
            SLTree::Node(c) => {
                out.push_str(&format!("ℓ{}(", c.len()));
                for (i, t) in c.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    t.write(alphabet, out);
                }
                out.push(')');
            }
        }
    }

    fn parse_at<'a>(s: &'a str, alphabet: &Alphabet) -> Result<(SLTree, i32, &'a str)> {
        let bad = |m: &str| Error::Parse(format!("sL∞ tree at {s:?}: {m}"));
        let op = s.strip_prefix('ℓ').or_else(|| s.strip_prefix('l').filter(|r| r.starts_with(|c: char| c.is_ascii_digit())));
        if let Some(rest) = op {
            let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
            let m: usize = rest[..digits].parse().map_err(|_| bad("missing arity"))?;
            let mut rest = rest[digits..].strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let mut kids = vec![];
            let mut sign = 1;
            loop {
                let (t, s, r) = Self::parse_at(rest, alphabet)?;
                kids.push(t);
                sign *= s;
                if let Some(r) = r.strip_prefix(',') {
                    rest = r;
                } else {
                    rest = r.strip_prefix(')').ok_or_else(|| bad("expected ')'"))?;
                    break;
                }
            }
            if kids.len() != m || m < 2 {
                return Err(bad("arity does not match the argument count"));
            }
            return Ok(match SLTree::node(kids) {
                Some((t, s)) => (t, sign * s, rest),
                None => (SLTree::Node(vec![]), 0, rest),
            });
        }
        let end = s.find([',', ')']).unwrap_or(s.len());
        Ok((SLTree::Leaf(alphabet.get(&s[..end])?), 1, &s[end..]))
    }
}

impl Basis for SLTree {
    const FAMILY: &'static str = "sl-tree";

    fn weight(&self) -> u32 {
        match self {
            SLTree::Leaf(g) => g.weight as u32,
            SLTree::Node(c) => c.iter().map(|t| t.weight()).sum(),
        }
    }

    fn degree(&self) -> i32 {
        match self {
            SLTree::Leaf(g) => g.degree as i32,
            SLTree::Node(c) => c.iter().map(|t| t.degree()).sum::<i32>() - 1,
        }
    }

    fn encode(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        self.write(alphabet, &mut s);
        s
    }
}

impl DecodeBasis for SLTree {
    fn decode(s: &str, alphabet: &Alphabet) -> Result<Self> {
        match Self::decode_signed(s, alphabet)? {
            (t, 1) => Ok(t),
            _ => Err(Error::Parse(format!("sL∞ tree {s:?} is not in canonical order"))),
        }
    }

    fn decode_signed(s: &str, alphabet: &Alphabet) -> Result<(Self, i32)> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (t, sign, rest) = SLTree::parse_at(&s, alphabet)?;
        if !rest.is_empty() {
            return Err(Error::Parse(format!("trailing input {rest:?}")));
        }
        Ok((t, sign))
    }
}

pub type SLSeries = Series<SLTree>;

pub fn leaf(g: Gen, trunc: u32) -> SLSeries {
    Series::monomial(SLTree::Leaf(g), trunc)
}

/// Multilinear extension of a map on basis tuples, pruned by weight.
fn multilinear<B: Basis, C: Basis>(
    args: &[&Series<B>],
    trunc: u32,
    mut f: impl FnMut(&[&B]) -> Vec<(C, Scalar)>,
) -> Series<C> {
    let mut out = Series::zero(trunc);
    if args.iter().any(|a| a.is_zero()) {
        return out;
    }
    let terms: Vec<Vec<(&B, &Scalar)>> = args
        .iter()
        .map(|a| a.iter().sorted_by_key(|(b, _)| b.weight()).collect())
        .collect();
    let mut suffix = vec![0u32; args.len() + 1];
    for k in (0..args.len()).rev() {
        suffix[k] = suffix[k + 1] + terms[k][0].0.weight();
    }
    fn go<'a, B: Basis, C: Basis>(
        k: usize,
        w: u32,
        coeff: Scalar,
        terms: &[Vec<(&'a B, &'a Scalar)>],
        suffix: &[u32],
        trunc: u32,
        chosen: &mut Vec<&'a B>,
        f: &mut impl FnMut(&[&B]) -> Vec<(C, Scalar)>,
        out: &mut Series<C>,
    ) {
        if k == terms.len() {
            for (b, c) in f(chosen) {
                out.add_term(b, &coeff * c);
            }
            return;
        }
        for &(b, c) in &terms[k] {
            if w + b.weight() + suffix[k + 1] > trunc {
                break;
            }
            chosen.push(b);
            go(k + 1, w + b.weight(), &coeff * c, terms, suffix, trunc, chosen, f, out);
            chosen.pop();
        }
    }
    if suffix[0] <= trunc {
        let mut chosen = vec![];
        go(0, 0, Scalar::one(), &terms, &suffix, trunc, &mut chosen, &mut f, &mut out);
    }
    out
}

fn signed(sign: i32) -> Scalar {
    Scalar::from_integer(sign.into())
}

/// `ℓ_m(args)` in the free algebra, `m = args.len() >= 2`.
pub fn sl_apply(args: &[&SLSeries]) -> Result<SLSeries> {
    if args.len() < 2 {
        return Err(Error::InvalidArity(args.len()));
    }
    for a in &args[1..] {
        args[0].check(a)?;
    }
    Ok(multilinear(args, args[0].trunc(), |bs| {
        SLTree::node(bs.iter().map(|b| (*b).clone()).collect())
            .map(|(t, s)| vec![(t, signed(s))])
            .unwrap_or_default()
    }))
}

/// The quasi-free differential: `d` on generators from `dgen` (missing
/// generators are closed), extended so that every
/// `Σ ε ℓ_{m-q+1}(ℓ_q(x_S), x_rest)` relation holds.
pub struct FreeDifferential<'a> {
    pub dgen: &'a BTreeMap<Gen, SLSeries>,
    trunc: u32,
    memo: HashMap<SLTree, SLSeries>,
}

impl<'a> FreeDifferential<'a> {
    pub fn new(dgen: &'a BTreeMap<Gen, SLSeries>, trunc: u32) -> Self {
        FreeDifferential {
            dgen,
            trunc,
            memo: HashMap::new(),
        }
    }

    pub fn apply(&mut self, s: &SLSeries) -> SLSeries {
        let mut out = Series::zero(self.trunc);
        for (t, c) in s.iter() {
            let d = self.basis(t);
            out.add_scaled(&d, c);
        }
        out
    }

    fn basis(&mut self, t: &SLTree) -> SLSeries {
        if let Some(v) = self.memo.get(t) {
            return v.clone();
        }
        let trunc = self.trunc;
        let v = match t {
            SLTree::Leaf(g) => self.dgen.get(g).map_or_else(|| Series::zero(trunc), |s| s.retrunc(trunc)),
            SLTree::Node(kids) => {
                let m = kids.len();
                let degrees: Vec<i32> = kids.iter().map(|k| k.degree()).collect();
                let singles: Vec<SLSeries> = kids.iter().map(|k| Series::monomial(k.clone(), trunc)).collect();
                let mut out = Series::zero(trunc);
                let mut parity = 0;
                for k in 0..m {
                    let dk = self.basis(&kids[k]);
                    if !dk.is_zero() {
                        let mut args: Vec<&SLSeries> = singles.iter().collect();
                        args[k] = &dk;
                        let term = sl_apply(&args).unwrap();
                        out.add_scaled(&term, &signed(if parity % 2 == 0 { -1 } else { 1 }));
                    }
                    parity += degrees[k];
                }
                for q in 2..m {
                    for s in (0..m).combinations(q) {
                        let rest: Vec<usize> = (0..m).filter(|i| !s.contains(i)).collect();
                        let order: Vec<usize> = s.iter().chain(&rest).copied().collect();
                        let eps = reorder_sign(&order, &degrees);
                        let Some((inner, s1)) = SLTree::node(s.iter().map(|&i| kids[i].clone()).collect()) else {
                            continue;
                        };
                        let mut outer_kids = vec![inner];
                        outer_kids.extend(rest.iter().map(|&i| kids[i].clone()));
                        if let Some((outer, s2)) = SLTree::node(outer_kids) {
                            out.add_term(outer, signed(-eps * s1 * s2));
                        }
                    }
                }
                out
            }
        };
        self.memo.insert(t.clone(), v.clone());
        v
    }
}

/// An sL∞ structure on series over some basis: `ell(args)` is `ℓ_m` with
/// `m = args.len()`, and `ℓ_1` is the differential.
pub trait SlStructure {
    type B: Basis;

    fn ell(&self, args: &[&Series<Self::B>]) -> Series<Self::B>;

    /// Degree in the sL∞ algebra minus the degree stored in the basis.
    fn degree_shift(&self) -> i32 {
        0
    }
}

/// The free sL∞-algebra on generators with a differential on generators.
pub struct FreeSl {
    pub dgen: BTreeMap<Gen, SLSeries>,
}

impl SlStructure for FreeSl {
    type B = SLTree;

    fn ell(&self, args: &[&SLSeries]) -> SLSeries {
        if args.len() == 1 {
            FreeDifferential::new(&self.dgen, args[0].trunc()).apply(args[0])
        } else {
            sl_apply(args).expect("arity at least two")
        }
    }
}

/// The suspension of a dg Lie algebra of words: `ℓ_1(sa) = -s(da)`,
/// `ℓ_2(sa, sb) = (-1)^{|a|} s[a, b]`, higher operations vanish. Elements
/// are stored unsuspended.
pub struct LieSuspension {
    pub d: GenMap<Word>,
}

impl SlStructure for LieSuspension {
    type B = Word;

    fn ell(&self, args: &[&WordSeries]) -> WordSeries {
        match args {
            [a] => -&free::derivation(a, &self.d),
            [a, b] => {
                let mut out = Series::zero(a.trunc());
                for (deg, part) in a.by_degree() {
                    let br = bracket(&part, b);
                    if deg % 2 == 0 {
                        out += &br;
                    } else {
                        out -= &br;
                    }
                }
                out
            }
            _ => Series::zero(args[0].trunc()),
        }
    }

    fn degree_shift(&self) -> i32 {
        1
    }
}

/// `dα + Σ_{m>=2} ℓ_m(α,…,α)/m!`.
pub fn mc_residual<S: SlStructure>(s: &S, alpha: &Series<S::B>) -> Series<S::B> {
    let mut out = s.ell(&[alpha]);
    let Some(w) = alpha.min_weight() else {
        return out;
    };
    let mut m = 2;
    while m as u32 * w.max(1) <= alpha.trunc() {
        let args = vec![alpha; m];
        out.add_scaled(&s.ell(&args), &inv_factorial(m));
        m += 1;
    }
    out
}

fn require_sl_degree<S: SlStructure>(s: &S, x: &Series<S::B>, what: &str, expected: i32) -> Result<()> {
    x.require_degree(what, expected - s.degree_shift())
}

/// `τ^λ(α)` for a planar tree: leaves give `α`, a vertex with children
/// `τ_1..τ_m` gives `ℓ_{m+1}(τ_1^λ(α),…,τ_m^λ(α), λ)` (so `c_0` gives `dλ`).
pub fn tree_value<S: SlStructure>(
    s: &S,
    t: &PlanarTree,
    lambda: &Series<S::B>,
    alpha: &Series<S::B>,
    memo: &mut HashMap<PlanarTree, Series<S::B>>,
) -> Series<S::B> {
    if let Some(v) = memo.get(t) {
        return v.clone();
    }
    let v = match t {
        PlanarTree::Leaf => alpha.clone(),
        PlanarTree::Node(kids) => {
            let vals: Vec<Series<S::B>> = kids.iter().map(|k| tree_value(s, k, lambda, alpha, memo)).collect();
            let mut args: Vec<&Series<S::B>> = vals.iter().collect();
            args.push(lambda);
            s.ell(&args)
        }
    };
    memo.insert(t.clone(), v.clone());
    v
}

/// The time-1 gauge flow `Σ_τ τ^λ(α) / C(τ)` over planar rooted trees.
pub fn gauge_flow<S: SlStructure>(s: &S, lambda: &Series<S::B>, alpha: &Series<S::B>) -> Result<Series<S::B>> {
    lambda.check(alpha)?;
    require_sl_degree(s, lambda, "λ", 1)?;
    require_sl_degree(s, alpha, "α", 0)?;
    if lambda.has_constant_term() || alpha.has_constant_term() {
        return Err(Error::ConstantTerm);
    }
    let trunc = alpha.trunc();
    let Some(wl) = lambda.min_weight() else {
        return Ok(alpha.clone());
    };
    let wa = alpha.min_weight().unwrap_or(trunc + 1);
    let mut out = Series::zero(trunc);
    let mut memo = HashMap::new();
    for (t, _) in enumerate_planar_trees(trunc, wa, wl) {
        let v = tree_value(s, &t, lambda, alpha, &mut memo);
        if !v.is_zero() {
            out.add_scaled(&v, &Scalar::from_integer(coefficient_c(&t).into()).recip());
        }
    }
    Ok(out)
}

/// The universal setup: an MC generator `a` (degree 0) with
/// `da = -Σ ℓ_m(a,…,a)/m!`, a gauge `λ` (degree 1) and `μ = dλ`.
pub struct Universal {
    pub alphabet: Alphabet,
    pub a: Gen,
    pub lambda: Gen,
    pub mu: Gen,
    pub structure: FreeSl,
}

pub fn universal(trunc: u32) -> Universal {
    let mut alphabet = Alphabet::new();
    let a = alphabet.add("a", 0);
    let lambda = alphabet.add("λ", 1);
    let mu = alphabet.add("μ", 0);
    let al = leaf(a, trunc);
    let mut da = Series::zero(trunc);
    let mut m = 2;
    while m as u32 <= trunc {
        let args = vec![&al; m];
        da.add_scaled(&sl_apply(&args).unwrap(), &-inv_factorial(m));
        m += 1;
    }
    let mut dgen = BTreeMap::new();
    dgen.insert(a, da);
    dgen.insert(lambda, leaf(mu, trunc));
    Universal {
        alphabet,
        a,
        lambda,
        mu,
        structure: FreeSl { dgen },
    }
}

/// Result of realising the composition of two gauges through the flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma21Report {
    pub weight: u32,
    /// Weights checked, with pass/fail.
    pub per_weight: Vec<(u32, bool)>,
    pub first_divergence: Option<u32>,
}

impl Gamma21Report {
    pub fn passed(&self) -> bool {
        self.first_divergence.is_none()
    }
}

/// Composes the flows of gauges `y` then `x` on the suspension of the free
/// Lie algebra on `x, y, α` (with zero differential), reads off the gauge
/// `Z` with `exp(ad_Z)(α)` equal to the result, and compares `Z` with
/// Dynkin's BCH formula weight by weight.
pub fn gamma21_check(n: u32) -> Result<Gamma21Report> {
    let mut a = Alphabet::new();
    let x = a.add("x", 0);
    let y = a.add("y", 0);
    let al = a.add("α", -1);
    let t = n + 1;
    let s = LieSuspension { d: GenMap::new() };
    let step = gauge_flow(&s, &assoc::gen(y, t), &assoc::gen(al, t))?;
    let both = gauge_flow(&s, &assoc::gen(x, t), &step)?;
    // the words ending in α form exp(Z) α
    let e: WordSeries = both.map_linear(n, |w| match w.0.split_last() {
        Some((last, rest)) if *last == al && !rest.contains(&al) => vec![(Word(rest.to_vec()), Scalar::one())],
        _ => vec![],
    });
    let z = log_assoc(&e)?;
    let bch = bch_dynkin(x, y, n);
    let per_weight: Vec<(u32, bool)> = (1..=n).map(|k| (k, z.homogeneous(k) == bch.homogeneous(k))).collect();
    let first_divergence = per_weight.iter().find(|(_, ok)| !ok).map(|(k, _)| *k);
    Ok(Gamma21Report {
        weight: n,
        per_weight,
        first_divergence,
    })
}

/// A basis vector of a finite-dimensional graded space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector(pub Gen);

impl Basis for Vector {
    const FAMILY: &'static str = "vector";

    fn weight(&self) -> u32 {
        self.0.weight as u32
    }

    fn degree(&self) -> i32 {
        self.0.degree as i32
    }

    fn encode(&self, alphabet: &Alphabet) -> String {
        alphabet.name(self.0).to_string()
    }
}

impl DecodeBasis for Vector {
    fn decode(s: &str, alphabet: &Alphabet) -> Result<Self> {
        alphabet.get(s.trim()).map(Vector)
    }
}

pub type VectorSeries = Series<Vector>;

#[derive(Deserialize)]
struct BasisEntry {
    name: String,
    degree: i16,
    #[serde(default = "one_u16")]
    weight: u16,
}

fn one_u16() -> u16 {
    1
}

#[derive(Deserialize)]
struct TermEntry {
    basis: String,
    coeff: String,
}

#[derive(Deserialize)]
struct OpEntry {
    inputs: Vec<String>,
    output: Vec<TermEntry>,
}

#[derive(Deserialize)]
struct StructureFile {
    basis: Vec<BasisEntry>,
    operations: Vec<OpEntry>,
    #[serde(default)]
    lambda: Vec<TermEntry>,
    #[serde(default)]
    alpha: Vec<TermEntry>,
}

/// An sL∞ structure given by structure constants on a finite graded basis.
/// Entries are symmetric: each is stored on sorted inputs with the Koszul
/// sign of sorting.
#[derive(Clone, Debug)]
pub struct FiniteSl {
    pub alphabet: Alphabet,
    table: BTreeMap<Vec<Gen>, VectorSeries>,
    pub max_arity: usize,
    /// Truncation weight used when reading series.
    pub trunc: u32,
    pub lambda: VectorSeries,
    pub alpha: VectorSeries,
}

impl FiniteSl {
    /// Reads the JSON structure file format:
    /// `{"basis": [{"name", "degree", "weight"?}], "operations": [{"inputs": [...],
    /// "output": [{"basis", "coeff"}]}], "lambda"?: [...], "alpha"?: [...]}`.
    pub fn from_json(text: &str, trunc: u32) -> Result<Self> {
        let file: StructureFile = serde_json::from_str(text).map_err(|e| Error::Structure(e.to_string()))?;
        let mut alphabet = Alphabet::new();
        for b in &file.basis {
            alphabet
                .add_weighted(&b.name, b.degree, b.weight)
                .map_err(|e| Error::Structure(e.to_string()))?;
        }
        let series = |terms: &[TermEntry], alphabet: &Alphabet| -> Result<VectorSeries> {
            let mut s = Series::zero(trunc);
            for t in terms {
                let g = alphabet.get(&t.basis).map_err(|e| Error::Structure(e.to_string()))?;
                s.add_term(Vector(g), parse_scalar(&t.coeff)?);
            }
            Ok(s)
        };
        let mut table: BTreeMap<Vec<Gen>, VectorSeries> = BTreeMap::new();
        let mut max_arity = 1;
        for op in &file.operations {
            if op.inputs.is_empty() {
                return Err(Error::Structure("an operation needs at least one input".into()));
            }
            let gens = op
                .inputs
                .iter()
                .map(|n| alphabet.get(n))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Structure(e.to_string()))?;
            let out = series(&op.output, &alphabet)?;
            let expected = gens.iter().map(|g| g.degree as i32).sum::<i32>() - 1;
            if out.iter().any(|(v, _)| v.degree() != expected) {
                return Err(Error::Structure(format!(
                    "ℓ_{}({}) must have degree {expected}",
                    gens.len(),
                    op.inputs.join(",")
                )));
            }
            let Some((key, sign)) = sort_inputs(&gens) else {
                if !out.is_zero() {
                    return Err(Error::Structure(format!(
                        "ℓ_{} on a repeated odd input must vanish",
                        gens.len()
                    )));
                }
                continue;
            };
            if table.contains_key(&key) {
                return Err(Error::Structure(format!("duplicate entry for ℓ_{}({})", gens.len(), op.inputs.join(","))));
            }
            max_arity = max_arity.max(gens.len());
            table.insert(key, out.scale(&signed(sign)));
        }
        let lambda = series(&file.lambda, &alphabet)?;
        let alpha = series(&file.alpha, &alphabet)?;
        Ok(FiniteSl {
            alphabet,
            table,
            max_arity,
            trunc,
            lambda,
            alpha,
        })
    }

    fn basis_ell(&self, gens: &[Gen]) -> Vec<(Vector, Scalar)> {
        let Some((key, sign)) = sort_inputs(gens) else {
            return vec![];
        };
        match self.table.get(&key) {
            Some(s) => s.iter().map(|(v, c)| (*v, c * signed(sign))).collect(),
            None => vec![],
        }
    }

    /// Checks every sL∞ relation on basis inputs of total weight at most
    /// the truncation, returning a description of each violation.
    pub fn check_relations(&self) -> Vec<String> {
        let basis: Vec<Gen> = self.alphabet.gens().collect();
        let mut out = vec![];
        let max_m = 2 * self.max_arity - 1;
        for m in 1..=max_m {
            for combo in (0..basis.len()).combinations_with_replacement(m) {
                let xs: Vec<Gen> = combo.iter().map(|&i| basis[i]).collect();
                if xs.iter().map(|g| g.weight as u32).sum::<u32>() > self.trunc {
                    continue;
                }
                let r = relation(self, &xs, self.trunc);
                let first = r.iter().next().map(|(v, c)| (*v, c.clone()));
                if let Some((v, c)) = first {
                    let names: Vec<&str> = xs.iter().map(|g| self.alphabet.name(*g)).collect();
                    out.push(format!(
                        "relation on ({}) fails: coefficient {} on {}",
                        names.join(","),
                        crate::scalar::format_scalar_short(&c),
                        v.encode(&self.alphabet)
                    ));
                }
            }
        }
        out
    }
}

fn sort_inputs(gens: &[Gen]) -> Option<(Vec<Gen>, i32)> {
    let degrees: Vec<i32> = gens.iter().map(|g| g.degree as i32).collect();
    let order: Vec<usize> = (0..gens.len()).sorted_by_key(|&i| gens[i]).collect();
    let key: Vec<Gen> = order.iter().map(|&i| gens[i]).collect();
    if key.windows(2).any(|w| w[0] == w[1] && w[0].is_odd()) {
        return None;
    }
    Some((key, reorder_sign(&order, &degrees)))
}

impl SlStructure for FiniteSl {
    type B = Vector;

    fn ell(&self, args: &[&VectorSeries]) -> VectorSeries {
        multilinear(args, args[0].trunc(), |vs| {
            let gens: Vec<Gen> = vs.iter().map(|v| v.0).collect();
            self.basis_ell(&gens)
        })
    }
}

/// `Σ_{q=1}^{m} Σ_{|S|=q} ε(S) ℓ_{m-q+1}(ℓ_q(x_S), x_rest)` on basis inputs.
fn relation(s: &FiniteSl, xs: &[Gen], trunc: u32) -> VectorSeries {
    let m = xs.len();
    let degrees: Vec<i32> = xs.iter().map(|g| g.degree as i32).collect();
    let mut out = Series::zero(trunc);
    for q in 1..=m {
        for sub in (0..m).combinations(q) {
            let rest: Vec<usize> = (0..m).filter(|i| !sub.contains(i)).collect();
            let order: Vec<usize> = sub.iter().chain(&rest).copied().collect();
            let eps = reorder_sign(&order, &degrees);
            let inner_args: Vec<VectorSeries> = sub.iter().map(|&i| Series::monomial(Vector(xs[i]), trunc)).collect();
            let inner = s.ell(&inner_args.iter().collect::<Vec<_>>());
            let rest_args: Vec<VectorSeries> = rest.iter().map(|&i| Series::monomial(Vector(xs[i]), trunc)).collect();
            let mut args: Vec<&VectorSeries> = vec![&inner];
            args.extend(rest_args.iter());
            out.add_scaled(&s.ell(&args), &signed(eps));
        }
    }
    out
}

#[cfg(test)]
mod tests;
