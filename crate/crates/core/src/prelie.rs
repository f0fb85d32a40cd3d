//! The free complete left-unital pre-Lie algebra on decorated rooted trees.

use num_traits::One;

use crate::assoc::{require_gauge_degrees, Word, WordSeries};
use crate::combinatorics::tree::{canonical_tree, encode_nested, enumerate_rooted_trees, parents_from_depths, parse_nested};
use crate::error::{Error, Result};
use crate::free::{self, bracket, cartesian, left_power_series, mul, FreeBasis, GenMap};
use crate::generator::{Alphabet, Gen};
use crate::scalar::{inv_factorial, Scalar};
use crate::series::{Basis, DecodeBasis, Series};

/// A rooted tree in canonical preorder with one generator per vertex; the
/// empty tree is the formal unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    pub depths: Vec<u8>,
    pub decos: Vec<Gen>,
}

impl Tree {
    pub fn unit() -> Self {
        Tree {
            depths: vec![],
            decos: vec![],
        }
    }

    pub fn is_unit(&self) -> bool {
        self.depths.is_empty()
    }

    /// Canonical form of a decorated tree given by parent pointers, with
    /// the Koszul sign of the reordering, or `None` if it vanishes.
    pub fn canonical(parent: &[Option<usize>], decos: &[Gen]) -> Option<(Tree, i32)> {
        if parent.is_empty() {
            return Some((Tree::unit(), 1));
        }
        let degrees: Vec<i32> = decos.iter().map(|g| g.degree as i32).collect();
        let c = canonical_tree(parent, decos, &degrees);
        (!c.zero).then(|| {
            (
                Tree {
                    depths: c.depths,
                    decos: c.colors,
                },
                c.sign,
            )
        })
    }

    /// Automorphism order of the decorated tree.
    pub fn automorphisms(&self) -> usize {
        let degrees = vec![0; self.decos.len()];
        canonical_tree(&parents_from_depths(&self.depths), &self.decos, &degrees).automorphisms
    }

    /// A ladder: every vertex has at most one child.
    pub fn is_ladder(&self) -> bool {
        self.depths.iter().enumerate().all(|(i, &d)| d as usize == i)
    }

    pub fn ladder(word: &[Gen]) -> Self {
        Tree {
            depths: (0..word.len() as u8).collect(),
            decos: word.to_vec(),
        }
    }
}

impl Basis for Tree {
    const FAMILY: &'static str = "tree";

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
        let names: Vec<String> = self.decos.iter().map(|g| alphabet.name(*g).to_string()).collect();
        encode_nested(&self.depths, &names)
    }
}

impl DecodeBasis for Tree {
    fn decode(s: &str, alphabet: &Alphabet) -> Result<Self> {
        match Self::decode_signed(s, alphabet)? {
            (t, 1) => Ok(t),
            _ => Err(Error::Parse(format!("tree {s:?} is not in canonical order"))),
        }
    }

    fn decode_signed(s: &str, alphabet: &Alphabet) -> Result<(Self, i32)> {
        if s.trim() == "1" {
            return Ok((Tree::unit(), 1));
        }
        let (parents, labels) = parse_nested(s)?;
        let decos = labels.iter().map(|l| alphabet.get(l)).collect::<Result<Vec<_>>>()?;
        Ok(Tree::canonical(&parents, &decos).unwrap_or((Tree::unit(), 0)))
    }
}

impl FreeBasis for Tree {
    /// Parent pointers; input `i` sits at vertex `i`.
    type Shape = Vec<Option<usize>>;

    fn generator(g: Gen) -> Self {
        Tree {
            depths: vec![0],
            decos: vec![g],
        }
    }

    fn decorations(&self) -> Vec<Gen> {
        self.decos.clone()
    }

    fn shape(&self) -> Self::Shape {
        parents_from_depths(&self.depths)
    }

    fn arity(shape: &Self::Shape) -> usize {
        shape.len()
    }

    /// Operadic composition in rooted trees: the root of the tree at a
    /// shape vertex is grafted onto every vertex of the tree at its parent.
    fn compose(shape: &Self::Shape, inputs: &[&Self], out: &mut Vec<(Self, i32)>) {
        if inputs.iter().any(|t| t.is_unit()) {
            // left unit: 1⋆y = y, x⋆1 = 0
            match inputs {
                [t] => out.push(((*t).clone(), 1)),
                [x, y] if shape[1] == Some(0) && x.is_unit() => out.push(((*y).clone(), 1)),
                _ => {}
            }
            return;
        }
        let mut offset = vec![0usize];
        for t in inputs {
            offset.push(offset.last().unwrap() + t.decos.len());
        }
        let mut parent: Vec<Option<usize>> = Vec::with_capacity(offset[inputs.len()]);
        let mut decos = Vec::with_capacity(parent.capacity());
        for (i, t) in inputs.iter().enumerate() {
            parent.extend(
                parents_from_depths(&t.depths)
                    .into_iter()
                    .map(|p| p.map(|p| p + offset[i])),
            );
            decos.extend(t.decos.iter().copied());
        }
        let grafted: Vec<usize> = (0..shape.len()).filter(|&v| shape[v].is_some()).collect();
        let sites: Vec<std::ops::Range<usize>> = grafted
            .iter()
            .map(|&v| {
                let p = shape[v].unwrap();
                offset[p]..offset[p + 1]
            })
            .collect();
        for choice in cartesian(&sites) {
            for (&v, &site) in grafted.iter().zip(&choice) {
                parent[offset[v]] = Some(site);
            }
            if let Some(t) = Tree::canonical(&parent, &decos) {
                out.push(t);
            }
        }
    }

    fn product_shape() -> Self::Shape {
        vec![None, Some(0)]
    }
}

pub type TreeSeries = Series<Tree>;

pub fn unit(trunc: u32) -> TreeSeries {
    Series::monomial(Tree::unit(), trunc)
}

pub fn gen(g: Gen, trunc: u32) -> TreeSeries {
    free::generator(g, trunc)
}

pub fn prelie_mul(a: &TreeSeries, b: &TreeSeries) -> Result<TreeSeries> {
    a.check(b)?;
    Ok(mul(a, b))
}

/// Skew-symmetrised (graded) bracket.
pub fn prelie_bracket(a: &TreeSeries, b: &TreeSeries) -> TreeSeries {
    bracket(a, b)
}

/// Symmetric braces by the defining recursion
/// `{x; y_1..y_n} = {{x; y_1..y_{n-1}}; y_n} - Σ_i {x; y_1.., y_i⋆y_n, ..y_{n-1}}`.
pub fn symmetric_brace(x: &TreeSeries, ys: &[&TreeSeries]) -> TreeSeries {
    match ys.split_last() {
        None => x.clone(),
        Some((last, rest)) => {
            let mut out = mul(&symmetric_brace(x, rest), last);
            for i in 0..rest.len() {
                let merged = mul(rest[i], last);
                let mut args = rest.to_vec();
                args[i] = &merged;
                out -= &symmetric_brace(x, &args);
            }
            out
        }
    }
}

/// Braces in closed form: every `y_i` is grafted onto a vertex of `x`.
pub fn brace_grafting(x: &TreeSeries, ys: &[&TreeSeries]) -> TreeSeries {
    let trunc = x.trunc();
    let mut out = Series::zero(trunc);
    let n = ys.len();
    for (t, c) in x.iter() {
        if t.is_unit() {
            match n {
                0 => out.add_term(t.clone(), c.clone()),
                1 => out.add_scaled(ys[0], c),
                _ => {}
            }
            continue;
        }
        let k = t.decos.len();
        let base = t.shape();
        let gens: Vec<TreeSeries> = t.decos.iter().map(|g| gen(*g, trunc)).collect();
        let mut inputs: Vec<&TreeSeries> = gens.iter().collect();
        inputs.extend(ys.iter().copied());
        for f in cartesian(&vec![0..k; n]) {
            let mut shape = base.clone();
            shape.extend(f.iter().map(|&v| Some(v)));
            out.add_scaled(&free::evaluate::<Tree>(&shape, &inputs, trunc), c);
        }
    }
    out
}

fn require_unit(one_plus: &TreeSeries) -> Result<TreeSeries> {
    if !one_plus.coeff(&Tree::unit()).is_one() {
        return Err(Error::Constraint("expected constant term 1".into()));
    }
    Ok(one_plus.filter(|t| !t.is_unit()))
}

fn no_constant(x: &TreeSeries) -> Result<()> {
    if x.has_constant_term() {
        Err(Error::ConstantTerm)
    } else {
        Ok(())
    }
}

/// `X ⊚ (1+y) = Σ_{n>=0} {X; y,…,y} / n!` for any `X` without unit term.
pub fn circle_apply(x: &TreeSeries, y: &TreeSeries) -> TreeSeries {
    let mut out = Series::zero(x.trunc());
    let mut args: Vec<&TreeSeries> = vec![];
    loop {
        let b = symmetric_brace(x, &args);
        if b.is_zero() {
            return out;
        }
        out.add_scaled(&b, &inv_factorial(args.len()));
        args.push(y);
    }
}

/// `(1+x) ⊚ (1+y) = 1 + y + x ⊚ (1+y)` on group-like series.
pub fn circle_product(a: &TreeSeries, b: &TreeSeries) -> Result<TreeSeries> {
    a.check(b)?;
    let x = require_unit(a)?;
    let y = require_unit(b)?;
    let mut out = b.clone();
    out += &circle_apply(&x, &y);
    Ok(out)
}

/// `exp(λ) = 1 + Σ λ^{⋆n}/n!` with left-nested powers.
pub fn prelie_exp(lambda: &TreeSeries) -> Result<TreeSeries> {
    no_constant(lambda)?;
    let mut out = unit(lambda.trunc());
    out += &left_power_series(lambda, inv_factorial);
    Ok(out)
}

/// The Magnus expansion `Ω` with `exp(Ω) = 1+λ`, solved weight by weight.
pub fn magnus(one_plus: &TreeSeries) -> Result<TreeSeries> {
    let lambda = require_unit(one_plus)?;
    let mut omega = lambda.clone();
    for _ in 0..lambda.trunc() {
        let e = prelie_exp(&omega)?;
        let next = &(&omega + &lambda) - &(&e - &unit(lambda.trunc()));
        if next == omega {
            break;
        }
        omega = next;
    }
    Ok(omega)
}

/// `(1+λ)⁻¹ = Σ_t (-1)^{|t|} t(λ) / |Aut t|` over unlabelled rooted trees.
pub fn grouplike_inverse(lambda: &TreeSeries) -> Result<TreeSeries> {
    no_constant(lambda)?;
    let trunc = lambda.trunc();
    let mut out = unit(trunc);
    let Some(w) = lambda.min_weight() else {
        return Ok(out);
    };
    for n in 1..=(trunc / w) as usize {
        let inputs = vec![lambda; n];
        for (depths, aut) in enumerate_rooted_trees(n) {
            let t = free::evaluate::<Tree>(&parents_from_depths(&depths), &inputs, trunc);
            let mut c = Scalar::from_integer((aut as i64).into()).recip();
            if n % 2 == 1 {
                c = -c;
            }
            out.add_scaled(&t, &c);
        }
    }
    Ok(out)
}

/// `(1+λ)⁻¹` as `exp(-Ω(1+λ))`.
pub fn inverse_via_magnus(lambda: &TreeSeries) -> Result<TreeSeries> {
    no_constant(lambda)?;
    let omega = magnus(&(&unit(lambda.trunc()) + lambda))?;
    prelie_exp(&-&omega)
}

/// `(1+λ)⁻¹` by solving `(1+μ) ⊚ (1+λ) = 1` weight by weight.
pub fn inverse_by_circle(lambda: &TreeSeries) -> Result<TreeSeries> {
    no_constant(lambda)?;
    let one = unit(lambda.trunc());
    let mut mu = -lambda;
    for _ in 0..lambda.trunc() {
        let r = &circle_product(&(&one + &mu), &(&one + lambda))? - &one;
        if r.is_zero() {
            break;
        }
        mu -= &r;
    }
    Ok(&one + &mu)
}

/// `((1+λ)⋆α) ⊚ (1+λ)⁻¹ - dλ ⊚ (1+λ)⁻¹`.
pub fn prelie_gauge_action(lambda: &TreeSeries, alpha: &TreeSeries, dlambda: &TreeSeries) -> Result<TreeSeries> {
    lambda.check(alpha)?;
    lambda.check(dlambda)?;
    require_gauge_degrees(lambda, alpha, dlambda)?;
    let inv = require_unit(&grouplike_inverse(lambda)?)?;
    let left = &(alpha + &mul(lambda, alpha)) - dlambda;
    Ok(circle_apply(&left, &inv))
}

/// `dβ + β⋆β`.
pub fn prelie_mc_residual(beta: &TreeSeries, d: &GenMap<Tree>) -> TreeSeries {
    &free::derivation(beta, d) + &mul(beta, beta)
}

/// Keeps ladders and reads them as words, root first.
pub fn project_to_words(s: &TreeSeries) -> WordSeries {
    s.map_linear(s.trunc(), |t| {
        if t.is_ladder() {
            vec![(Word(t.decos.clone()), Scalar::one())]
        } else {
            vec![]
        }
    })
}

/// Embeds words as ladders.
pub fn ladders(s: &WordSeries) -> TreeSeries {
    s.map_linear(s.trunc(), |w| vec![(Tree::ladder(&w.0), Scalar::one())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::{self, assoc_gauge_action, assoc_mul};
    use crate::lie::bch_dynkin_with;
    use crate::scalar::{int, q};
    use proptest::prelude::*;

    fn abc() -> (Alphabet, Vec<Gen>) {
        let mut a = Alphabet::new();
        let g = vec![a.add("x", 0), a.add("y", 0), a.add("z", 0)];
        (a, g)
    }

    fn tree(s: &str, a: &Alphabet) -> Tree {
        Tree::decode(s, a).unwrap()
    }

    #[test]
    fn product_of_generators() {
        let (a, g) = abc();
        let p = mul(&gen(g[0], 3), &gen(g[1], 3));
        assert_eq!(p.to_text(&a), "x(y)");
        assert_eq!(mul(&unit(3), &gen(g[1], 3)), gen(g[1], 3));
        assert!(mul(&gen(g[1], 3), &unit(3)).is_zero());
        let p = mul(&mul(&gen(g[0], 3), &gen(g[1], 3)), &gen(g[2], 3));
        let mut e = Series::zero(3);
        e.add_term(tree("x(y,z)", &a), int(1));
        e.add_term(tree("x(y(z))", &a), int(1));
        assert_eq!(p, e);
        // x(y,y) has automorphism group of order two
        assert_eq!(tree("x(y,y)", &a).automorphisms(), 2);
        assert_eq!(mul(&mul(&gen(g[0], 3), &gen(g[1], 3)), &gen(g[1], 3)).coeff(&tree("x(y,y)", &a)), int(1));
    }

    #[test]
    fn odd_siblings_vanish_and_signs() {
        let mut a = Alphabet::new();
        let x = a.add("x", 0);
        let b = a.add("b", -1);
        let c = a.add("c", -1);
        let bb = mul(&mul(&gen(x, 3), &gen(b, 3)), &gen(b, 3));
        assert_eq!(bb.len(), 1, "{}", bb.to_text(&a));
        assert_eq!(bb.coeff(&tree("x(b(b))", &a)), int(1));
        // x⋆b⋆c and x⋆c⋆b differ by the swap of the two odd leaves
        let bc = mul(&mul(&gen(x, 3), &gen(b, 3)), &gen(c, 3));
        let cb = mul(&mul(&gen(x, 3), &gen(c, 3)), &gen(b, 3));
        let t = tree("x(b,c)", &a);
        assert_eq!(bc.coeff(&t), -cb.coeff(&t));
        assert_eq!(Tree::decode_signed("x(c,b)", &a).unwrap(), (t, -1));
    }

    fn arb(gs: Vec<Gen>, n: u32) -> impl Strategy<Value = TreeSeries> {
        prop::collection::vec(-3i64..4, 6).prop_map(move |cs| {
            let mut s = Series::zero(n);
            for (i, g) in gs.iter().enumerate() {
                s.add_term(Tree::generator(*g), int(cs[i]));
                s.add_term(Tree::ladder(&[*g, gs[(i + 1) % gs.len()]]), int(cs[i + 3]));
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn right_symmetric_associator(x in arb(abc().1, 5), y in arb(abc().1, 5), z in arb(abc().1, 5)) {
            let assoc = |a: &TreeSeries, b: &TreeSeries, c: &TreeSeries| &mul(&mul(a, b), c) - &mul(a, &mul(b, c));
            prop_assert_eq!(assoc(&x, &y, &z), assoc(&x, &z, &y));
        }

        #[test]
        fn skew_bracket_jacobi(x in arb(abc().1, 5), y in arb(abc().1, 5), z in arb(abc().1, 5)) {
            let b = prelie_bracket;
            let j = &(&b(&x, &b(&y, &z)) + &b(&y, &b(&z, &x))) + &b(&z, &b(&x, &y));
            prop_assert!(j.is_zero());
        }

        #[test]
        fn braces_symmetric_and_closed_form(x in arb(abc().1, 5), y in arb(abc().1, 5), z in arb(abc().1, 5)) {
            let yz = symmetric_brace(&x, &[&y, &z]);
            prop_assert_eq!(&yz, &symmetric_brace(&x, &[&z, &y]));
            prop_assert_eq!(&yz, &brace_grafting(&x, &[&y, &z]));
        }
    }

    #[test]
    fn brace_low_arity() {
        let (_, g) = abc();
        let n = 4;
        let (x, y, z) = (gen(g[0], n), gen(g[1], n), gen(g[2], n));
        assert_eq!(symmetric_brace(&x, &[]), x);
        assert_eq!(symmetric_brace(&x, &[&y]), mul(&x, &y));
        assert_eq!(symmetric_brace(&x, &[&y, &z]), &mul(&mul(&x, &y), &z) - &mul(&x, &mul(&y, &z)));
        let xx = mul(&x, &x);
        for k in 0..4 {
            let ys = vec![&y; k];
            assert_eq!(symmetric_brace(&xx, &ys), brace_grafting(&xx, &ys));
        }
    }

    #[test]
    fn ladders_multiply_like_words() {
        let (_, g) = abc();
        let n = 5;
        let a = &assoc::gen(g[0], n) + &assoc_mul(&assoc::gen(g[1], n), &assoc::gen(g[2], n)).unwrap();
        let b = &assoc::gen(g[2], n) + &assoc::gen(g[0], n);
        let p = project_to_words(&mul(&ladders(&a), &ladders(&b)));
        assert_eq!(p, assoc_mul(&a, &b).unwrap());
    }

    #[test]
    fn circle_units_and_associativity() {
        let (_, g) = abc();
        let n = 4;
        let one = unit(n);
        let x = &one + &gen(g[0], n);
        let y = &one + &(&gen(g[1], n) + &mul(&gen(g[1], n), &gen(g[0], n)));
        let z = &one + &gen(g[2], n);
        assert_eq!(circle_product(&one, &y).unwrap(), y);
        assert_eq!(circle_product(&x, &one).unwrap(), x);
        let l = circle_product(&circle_product(&x, &y).unwrap(), &z).unwrap();
        let r = circle_product(&x, &circle_product(&y, &z).unwrap()).unwrap();
        assert_eq!(l, r);
        assert!(circle_product(&gen(g[0], n), &y).is_err());
    }

    fn x_weight(n: u32) -> (Alphabet, Gen, TreeSeries) {
        let mut a = Alphabet::new();
        let x = a.add("λ", 0);
        (a, x, gen(x, n))
    }

    #[test]
    fn magnus_low_terms() {
        let (a, _, l) = x_weight(3);
        let ll = mul(&l, &l);
        let mut expected = l.clone();
        expected.add_scaled(&ll, &q(-1, 2));
        expected.add_scaled(&mul(&l, &ll), &q(1, 4));
        expected.add_scaled(&mul(&ll, &l), &q(1, 12));
        let omega = magnus(&(&unit(3) + &l)).unwrap();
        assert_eq!(omega, expected, "{}", omega.to_text(&a));
    }

    #[test]
    fn magnus_inverts_exp() {
        let (_, _, l) = x_weight(6);
        assert_eq!(magnus(&prelie_exp(&l).unwrap()).unwrap(), l);
        let one_plus = &unit(6) + &l;
        assert_eq!(prelie_exp(&magnus(&one_plus).unwrap()).unwrap(), one_plus);
        assert_eq!(prelie_exp(&Series::zero(6)).unwrap(), unit(6));
    }

    #[test]
    fn inverse_three_ways() {
        let (a, x, l) = x_weight(5);
        let inv = grouplike_inverse(&l).unwrap();
        assert_eq!(inv.coeff(&Tree::ladder(&[x, x])), int(1));
        assert_eq!(inv.coeff(&tree("λ(λ,λ)", &a)), q(-1, 2));
        assert_eq!(inv, inverse_via_magnus(&l).unwrap());
        assert_eq!(inv, inverse_by_circle(&l).unwrap());
        let one_plus = &unit(5) + &l;
        assert_eq!(circle_product(&inv, &one_plus).unwrap(), unit(5));
        assert_eq!(circle_product(&one_plus, &inv).unwrap(), unit(5));
        assert_eq!(grouplike_inverse(&Series::zero(5)).unwrap(), unit(5));
    }

    #[test]
    fn exp_bch_is_circle_product() {
        let (_, g) = abc();
        let n = 5;
        let (x, y) = (gen(g[0], n), gen(g[1], n));
        let bch = bch_dynkin_with(&x, &y, prelie_bracket);
        let lhs = prelie_exp(&bch).unwrap();
        let rhs = circle_product(&prelie_exp(&x).unwrap(), &prelie_exp(&y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    struct Mc {
        a: Alphabet,
        lam: Gen,
        alpha: Gen,
        mu: Gen,
    }

    fn mc() -> Mc {
        let mut a = Alphabet::new();
        let lam = a.add("λ", 0);
        let alpha = a.add("α", -1);
        let mu = a.add("μ", -1);
        Mc { a, lam, alpha, mu }
    }

    #[test]
    fn gauge_trivial_and_ladder_projection() {
        let m = mc();
        let n = 4;
        let z = Series::zero(n);
        let al = gen(m.alpha, n);
        assert_eq!(prelie_gauge_action(&z, &al, &z).unwrap(), al);
        assert!(prelie_gauge_action(&al, &al, &z).is_err());
        let (wl, wa, wd) = (assoc::gen(m.lam, n), assoc::gen(m.alpha, n), assoc::gen(m.mu, n));
        let tree_side = prelie_gauge_action(&ladders(&wl), &ladders(&wa), &ladders(&wd)).unwrap();
        assert_eq!(project_to_words(&tree_side), assoc_gauge_action(&wl, &wa, &wd).unwrap());
    }

    #[test]
    fn gauge_preserves_mc() {
        let m = mc();
        let n = 4;
        let mut d = GenMap::new();
        d.insert(m.alpha, -&mul(&gen(m.alpha, n), &gen(m.alpha, n)));
        d.insert(m.lam, gen(m.mu, n));
        let al = gen(m.alpha, n);
        assert!(prelie_mc_residual(&al, &d).is_zero());
        let beta = prelie_gauge_action(&gen(m.lam, n), &al, &gen(m.mu, n)).unwrap();
        let r = prelie_mc_residual(&beta, &d);
        assert!(r.is_zero(), "{}", r.to_text(&m.a));
    }

    #[test]
    fn json_round_trip() {
        let (a, g) = abc();
        let s = mul(&mul(&gen(g[0], 3), &gen(g[1], 3)), &gen(g[2], 3));
        let back = TreeSeries::from_json(&s.to_json(&a), &a, 3).unwrap();
        assert_eq!(back, s);
    }
}
