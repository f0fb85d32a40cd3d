//! Self-checks: the displayed coefficients of the reference examples as
//! golden assertions, plus the exact identities between the formulas, run
//! at a configurable truncation weight.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::assoc::{self, assoc_gauge_action, assoc_mul, bch_oracle, exp_assoc, log_assoc, Word};
use crate::combinatorics::graph::{figure_graphs, linear_extension_count};
use crate::combinatorics::laprt::{self, validate_laprt, LaNode, LaprtViolation};
use crate::combinatorics::leveled::{enumerate_leveled, LeveledShape};
use crate::combinatorics::paprt::{self, validate_paprt, PaprtViolation};
use crate::combinatorics::tree::{coefficient_c, PlanarTree};
use crate::combinatorics::{automorphism_order, canonicalize_graph, DiGraph};
use crate::error::{Error, Result};
use crate::free::{self, bracket, GenMap};
use crate::generator::{Alphabet, Gen};
use crate::lie::{bch_dynkin, bch_dynkin_with, is_lie_element, lie_gauge_action, lie_gauge_action_with, to_lyndon};
use crate::liegraph::{self, graph_bracket, Graph};
use crate::prelie;
use crate::scalar::{format_scalar_short, int, q, Scalar};
use crate::series::{Basis, Series};
use crate::slinfty::{self, gamma21_check, gauge_flow, leaf, mc_residual, sl_apply, universal, LieSuspension, SlStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Assoc,
    Lie,
    Prelie,
    Liegraph,
    Slinfty,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Assoc, Suite::Lie, Suite::Prelie, Suite::Liegraph, Suite::Slinfty];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Assoc => "assoc",
            Suite::Lie => "lie",
            Suite::Prelie => "prelie",
            Suite::Liegraph => "liegraph",
            Suite::Slinfty => "slinfty",
        }
    }

    /// Largest weight the suite accepts; graph enumeration grows quickly.
    pub fn max_weight(self) -> u32 {
        match self {
            Suite::Assoc | Suite::Lie => 10,
            Suite::Prelie => 7,
            Suite::Liegraph => 5,
            Suite::Slinfty => 6,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    /// For a failure: the first offending basis object and both coefficients.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.suite, self.name)?;
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

/// `None` when the check passes, otherwise what went wrong.
type Outcome = Option<String>;

/// Compares two series and describes the first basis object where they
/// differ.
pub fn first_difference<B: Basis>(lhs: &Series<B>, rhs: &Series<B>, alphabet: &Alphabet) -> Outcome {
    let keys: BTreeSet<&B> = lhs.iter().chain(rhs.iter()).map(|(b, _)| b).collect();
    keys.into_iter().find(|b| lhs.coeff(b) != rhs.coeff(b)).map(|b| {
        format!(
            "at {}: {} vs {}",
            b.encode(alphabet),
            format_scalar_short(&lhs.coeff(b)),
            format_scalar_short(&rhs.coeff(b))
        )
    })
}

fn coefficient<B: Basis>(s: &Series<B>, b: &B, expected: &Scalar, alphabet: &Alphabet) -> Outcome {
    let c = s.coeff(b);
    (c != *expected).then(|| {
        format!(
            "at {}: {} vs {}",
            b.encode(alphabet),
            format_scalar_short(&c),
            format_scalar_short(expected)
        )
    })
}

fn all<I: IntoIterator<Item = Outcome>>(outcomes: I) -> Outcome {
    outcomes.into_iter().flatten().next()
}

fn expect(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    (!ok).then(what)
}

struct Runner {
    suite: &'static str,
    out: Vec<Check>,
}

impl Runner {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<Outcome>) -> Result<()> {
        let (passed, detail) = match f() {
            Ok(None) => (true, None),
            Ok(Some(d)) => (false, Some(d)),
            Err(e @ Error::BoundExceeded { .. }) => return Err(e),
            Err(e) => (false, Some(format!("error: {e}"))),
        };
        self.out.push(Check {
            suite: self.suite,
            name: name.to_string(),
            passed,
            detail,
        });
        Ok(())
    }
}

/// Runs one suite at truncation weight `n`.
pub fn run_suite(suite: Suite, n: u32) -> Result<Vec<Check>> {
    if n == 0 || n > suite.max_weight() {
        return Err(Error::BoundExceeded {
            what: format!("weight for the {} suite", suite.name()),
            value: n as usize,
            bound: suite.max_weight() as usize,
        });
    }
    let mut r = Runner {
        suite: suite.name(),
        out: vec![],
    };
    match suite {
        Suite::Assoc => assoc_suite(&mut r, n)?,
        Suite::Lie => lie_suite(&mut r, n)?,
        Suite::Prelie => prelie_suite(&mut r, n)?,
        Suite::Liegraph => liegraph_suite(&mut r, n)?,
        Suite::Slinfty => slinfty_suite(&mut r, n)?,
    }
    Ok(r.out)
}

/// Runs every suite, each at `min(n, its bound)`.
pub fn run_all(n: u32) -> Result<Vec<Check>> {
    let mut out = vec![];
    for s in Suite::ALL {
        out.extend(run_suite(s, n.min(s.max_weight()))?);
    }
    Ok(out)
}

struct Gens {
    a: Alphabet,
    x: Gen,
    y: Gen,
    alpha: Gen,
    lam: Gen,
    mu: Gen,
}

fn gens() -> Gens {
    let mut a = Alphabet::new();
    let x = a.add("x", 0);
    let y = a.add("y", 0);
    let alpha = a.add("α", -1);
    let lam = a.add("λ", 0);
    let mu = a.add("μ", -1);
    Gens { a, x, y, alpha, lam, mu }
}

fn assoc_suite(r: &mut Runner, n: u32) -> Result<()> {
    let g = gens();
    r.check("ln(1+λ) has coefficient 1/3 on λ^3", || {
        let l = log_assoc(&(&assoc::unit(3) + &assoc::gen(g.x, 3)))?;
        Ok(coefficient(&l, &Word(vec![g.x; 3]), &q(1, 3), &g.a))
    })?;
    r.check("exp and ln are inverse", || {
        let l = &assoc::gen(g.x, n) + &assoc_mul(&assoc::gen(g.y, n), &assoc::gen(g.x, n))?;
        Ok(first_difference(&log_assoc(&exp_assoc(&l)?)?, &l, &g.a))
    })?;
    r.check("ln(exp(x) exp(y)) is a Lie series", || {
        let b = bch_oracle(g.x, g.y, n)?;
        Ok(expect(is_lie_element(&b), || "not in the free Lie algebra".into()))
    })?;
    r.check("gauge action preserves Maurer-Cartan elements", || {
        let al = assoc::gen(g.alpha, n);
        let mut d = GenMap::new();
        d.insert(g.alpha, -&assoc_mul(&al, &al)?);
        d.insert(g.lam, assoc::gen(g.mu, n));
        let beta = assoc_gauge_action(&assoc::gen(g.lam, n), &al, &assoc::gen(g.mu, n))?;
        Ok(first_difference(&assoc::assoc_mc_residual(&beta, &d), &Series::zero(n), &g.a))
    })
}

fn lie_suite(r: &mut Runner, n: u32) -> Result<()> {
    let g = gens();
    r.check("Dynkin's formula equals ln(exp(x) exp(y))", || {
        Ok(first_difference(&bch_dynkin(g.x, g.y, n), &bch_oracle(g.x, g.y, n)?, &g.a))
    })?;
    r.check("BCH is a Lie element in every weight", || {
        let b = bch_dynkin(g.x, g.y, n);
        Ok(all((1..=n).map(|k| expect(is_lie_element(&b.homogeneous(k)), || format!("weight {k}")))))
    })?;
    r.check("BCH to weight 2 is x + y + 1/2 [x,y]", || {
        let lyn = to_lyndon(&bch_dynkin(g.x, g.y, 2)).ok_or_else(|| Error::Constraint("not Lie".into()))?;
        let text = lyn.to_text(&g.a);
        Ok(expect(text == "x + y + 1/2 [x,y]", || text))
    })?;
    r.check("Lie gauge action equals conjugation by exp(λ)", || {
        let l = &assoc::gen(g.lam, n) + &bracket(&assoc::gen(g.x, n), &assoc::gen(g.lam, n));
        let al = assoc::gen(g.alpha, n);
        let mut d = GenMap::new();
        d.insert(g.lam, assoc::gen(g.mu, n));
        let dl = free::derivation(&l, &d);
        let e = &exp_assoc(&l)? - &assoc::unit(n);
        let conj = assoc_gauge_action(&e, &al, &free::derivation(&e, &d))?;
        Ok(first_difference(&lie_gauge_action(&l, &al, &dl)?, &conj, &g.a))
    })
}

fn prelie_suite(r: &mut Runner, n: u32) -> Result<()> {
    use prelie::{circle_product, gen, prelie_exp, prelie_mul as mul, symmetric_brace, unit};
    let g = gens();
    let (x, y, z) = {
        let mut a = g.a.clone();
        let z = a.add("z", 0);
        (gen(g.x, 3), gen(g.y, 3), gen(z, 3))
    };
    r.check("associator is right-symmetric", || {
        let ass = |a: &_, b: &_, c: &_| -> Result<_> { Ok(&mul(&mul(a, b)?, c)? - &mul(a, &mul(b, c)?)?) };
        Ok(first_difference(&ass(&x, &y, &z)?, &ass(&x, &z, &y)?, &g.a))
    })?;
    r.check("braces {x;} and {x; y1, y2}", || {
        let two = &mul(&mul(&x, &y)?, &z)? - &mul(&x, &mul(&y, &z)?)?;
        Ok(all([
            first_difference(&symmetric_brace(&x, &[]), &x, &g.a),
            first_difference(&symmetric_brace(&x, &[&y, &z]), &two, &g.a),
        ]))
    })?;
    r.check("Magnus expansion to weight 3", || {
        let l = gen(g.x, 3);
        let ll = mul(&l, &l)?;
        let mut expected = l.clone();
        expected.add_scaled(&ll, &q(-1, 2));
        expected.add_scaled(&mul(&l, &ll)?, &q(1, 4));
        expected.add_scaled(&mul(&ll, &l)?, &q(1, 12));
        Ok(first_difference(&prelie::magnus(&(&unit(3) + &l))?, &expected, &g.a))
    })?;
    r.check("Magnus expansion inverts the pre-Lie exponential", || {
        let l = &gen(g.x, n) + &mul(&gen(g.y, n), &gen(g.x, n))?;
        Ok(first_difference(&prelie::magnus(&prelie_exp(&l)?)?, &l, &g.a))
    })?;
    r.check("exp(BCH(x,y)) = exp(x) ⊚ exp(y)", || {
        let (x, y) = (gen(g.x, n), gen(g.y, n));
        let l = prelie_exp(&bch_dynkin_with(&x, &y, prelie::prelie_bracket))?;
        let rhs = circle_product(&prelie_exp(&x)?, &prelie_exp(&y)?)?;
        Ok(first_difference(&l, &rhs, &g.a))
    })?;
    r.check("tree-sum inverse = ⊚-inverse = exp(-Ω)", || {
        let l = &gen(g.x, n) + &mul(&gen(g.x, n), &gen(g.y, n))?;
        let t = prelie::grouplike_inverse(&l)?;
        Ok(all([
            first_difference(&t, &prelie::inverse_by_circle(&l)?, &g.a),
            first_difference(&t, &prelie::inverse_via_magnus(&l)?, &g.a),
        ]))
    })?;
    r.check("circle product agrees with the graph circle product on trees", || {
        let m = n.min(4);
        let one = liegraph::unit(m);
        let gp = liegraph::graph_circle_product(&(&one + &liegraph::gen(g.x, m)), &(&one + &liegraph::gen(g.y, m)))?;
        let tp = circle_product(&(&unit(m) + &gen(g.x, m)), &(&unit(m) + &gen(g.y, m)))?;
        Ok(first_difference(&liegraph::project_to_prelie(&gp), &tp, &g.a))
    })?;
    r.check("gauge action preserves Maurer-Cartan elements", || {
        let al = gen(g.alpha, n);
        let mut d = GenMap::new();
        d.insert(g.alpha, -&mul(&al, &al)?);
        d.insert(g.lam, gen(g.mu, n));
        let beta = prelie::prelie_gauge_action(&gen(g.lam, n), &al, &gen(g.mu, n))?;
        Ok(first_difference(&prelie::prelie_mc_residual(&beta, &d), &Series::zero(n), &g.a))
    })
}

fn deco(edges: &[(usize, usize)], decos: &[Gen]) -> Result<Graph> {
    match Graph::canonical(&DiGraph::from_one_based(decos.len(), edges), decos) {
        Some((g, 1)) => Ok(g),
        _ => Err(Error::InvalidGraph("example graph is not canonical with sign +1".into())),
    }
}

fn graph_coefficients(s: &Series<Graph>, expected: &[(&[(usize, usize)], Vec<Gen>, Scalar)], a: &Alphabet) -> Result<Outcome> {
    let mut out = vec![];
    for (edges, decos, c) in expected {
        out.push(coefficient(s, &deco(edges, decos)?, c, a));
    }
    Ok(all(out))
}

fn liegraph_suite(r: &mut Runner, n: u32) -> Result<()> {
    use liegraph::{gen, graph_circle_product, graph_exp, graph_log, unit};
    let g = gens();
    let (x, y, al) = (g.x, g.y, g.alpha);
    r.check("the first directed simple graphs are 8 distinct classes", || {
        let mut canon = BTreeSet::new();
        for h in figure_graphs() {
            canon.insert(canonicalize_graph(&h)?);
        }
        Ok(expect(canon.len() == 8, || format!("{} classes", canon.len())))
    })?;
    r.check("automorphisms and linear extensions of the figure graphs", || {
        let k22 = DiGraph::from_one_based(4, &[(1, 3), (1, 4), (2, 3), (2, 4)]);
        let v = DiGraph::from_one_based(3, &[(3, 1), (3, 2)]);
        let vtail = DiGraph::from_one_based(4, &[(1, 2), (1, 3), (2, 4)]);
        Ok(all([
            expect(automorphism_order(&k22)? == 4, || "K22".into()),
            expect(automorphism_order(&v)? == 2, || "V".into()),
            expect(linear_extension_count(&vtail)? == 3, || "V with tail".into()),
        ]))
    })?;
    r.check("leveled graph classes", || {
        let lone = enumerate_leveled(LeveledShape::two(1, 0))?;
        let k22 = enumerate_leveled(LeveledShape::two(2, 2))?;
        let mid = enumerate_leveled(LeveledShape::three(0, 0))?;
        Ok(all([
            expect(lone.len() == 1 && lone[0].graph == DiGraph::single(), || "lone bottom".into()),
            expect(k22.iter().any(|c| c.graph.edges.len() == 4 && c.automorphisms == 4), || "K22".into()),
            expect(mid.len() == 1, || "lone middle".into()),
        ]))
    })?;
    r.check("partial composition has the 9 summands of the figure", || {
        let g1 = DiGraph::from_one_based(3, &[(2, 1), (2, 3)]);
        let terms = liegraph::partial_composition(&g1, 2, &DiGraph::ladder(2))?;
        let distinct: BTreeSet<_> = terms.iter().collect();
        Ok(expect(terms.len() == 9 && distinct.len() == 9, || format!("{} summands", terms.len())))
    })?;
    r.check("graph exponential figure coefficients", || {
        let e = graph_exp(&gen(x, 4))?;
        graph_coefficients(
            &e,
            &[
                (&[], vec![x], int(1)),
                (&[(1, 2)], vec![x, x], q(1, 2)),
                (&[(1, 2), (1, 3)], vec![x; 3], q(1, 6)),
                (&[(2, 1), (3, 1)], vec![x; 3], q(1, 6)),
                (&[(1, 2), (2, 3)], vec![x; 3], q(1, 6)),
                (&[(1, 2), (2, 3), (1, 3)], vec![x; 3], q(1, 6)),
                (&[(1, 2), (1, 3), (2, 4)], vec![x; 4], q(1, 8)),
                (&[(1, 3), (1, 4), (2, 3), (2, 4)], vec![x; 4], q(1, 24)),
            ],
            &g.a,
        )
    })?;
    r.check("graph logarithm figure coefficients", || {
        let l = graph_log(&(&unit(3) + &gen(x, 3)))?;
        graph_coefficients(
            &l,
            &[
                (&[], vec![x], int(1)),
                (&[(1, 2)], vec![x, x], q(-1, 2)),
                (&[(1, 2), (1, 3)], vec![x; 3], q(1, 12)),
                (&[(2, 1), (3, 1)], vec![x; 3], q(1, 12)),
                (&[(1, 2), (2, 3)], vec![x; 3], q(1, 3)),
                (&[(1, 2), (2, 3), (1, 3)], vec![x; 3], q(1, 3)),
            ],
            &g.a,
        )
    })?;
    r.check("graph circle product figure coefficients", || {
        let one = unit(4);
        let p = graph_circle_product(&(&one + &gen(x, 4)), &(&one + &gen(y, 4)))?;
        graph_coefficients(
            &p,
            &[
                (&[], vec![x], int(1)),
                (&[], vec![y], int(1)),
                (&[(2, 1)], vec![x, y], int(1)),
                (&[(2, 1), (3, 1)], vec![x, y, y], q(1, 2)),
                (&[(3, 1), (3, 2)], vec![x, x, y], q(1, 2)),
                (&[(3, 1), (3, 2), (4, 1), (4, 2)], vec![x, x, y, y], q(1, 4)),
            ],
            &g.a,
        )
    })?;
    r.check("bowtie figure coefficients", || {
        let one = unit(4);
        let alpha = gen(al, 4);
        let b = liegraph::bowtie(&(&one + &gen(x, 4)), &alpha, &(&one + &gen(y, 4)))?;
        let trivial = liegraph::bowtie(&one, &alpha, &one)?;
        Ok(all([
            first_difference(&trivial, &alpha, &g.a),
            graph_coefficients(
                &b,
                &[
                    (&[], vec![al], int(1)),
                    (&[(2, 1)], vec![x, al], int(1)),
                    (&[(2, 1)], vec![al, y], int(1)),
                    (&[(2, 1), (3, 2)], vec![x, al, y], int(1)),
                    (&[(3, 1), (3, 2)], vec![x, x, al], q(1, 2)),
                    (&[(2, 1), (3, 1)], vec![al, y, y], q(1, 2)),
                ],
                &g.a,
            )?,
        ]))
    })?;
    r.check("exp(BCH(x,y)) = exp(x) ⊚ exp(y)", || {
        let (gx, gy) = (gen(x, n), gen(y, n));
        let l = graph_exp(&bch_dynkin_with(&gx, &gy, graph_bracket))?;
        let rhs = graph_circle_product(&graph_exp(&gx)?, &graph_exp(&gy)?)?;
        Ok(first_difference(&l, &rhs, &g.a))
    })?;
    r.check("gauge action with d = 0 is exp(ad_λ)", || {
        let l = gen(g.lam, n);
        let alpha = gen(al, n);
        let z = Series::zero(n);
        let lp = &graph_exp(&l)? - &unit(n);
        let conj = liegraph::liegraph_gauge_action(&lp, &alpha, &z)?;
        Ok(first_difference(&conj, &lie_gauge_action_with(&l, &alpha, &z, graph_bracket), &g.a))
    })?;
    r.check("gauge action preserves Maurer-Cartan elements", || {
        let alpha = gen(al, n);
        let mut d = GenMap::new();
        d.insert(al, -&liegraph::graph_mul(&alpha, &alpha)?);
        d.insert(g.lam, gen(g.mu, n));
        let beta = liegraph::liegraph_gauge_action(&gen(g.lam, n), &alpha, &gen(g.mu, n))?;
        Ok(first_difference(&liegraph::liegraph_mc_residual(&beta, &d), &Series::zero(n), &g.a))
    })?;
    r.check("projections to trees and ladders", || {
        let ga = liegraph::liegraph_gauge_action(&gen(g.lam, n), &gen(al, n), &gen(g.mu, n))?;
        let ta = prelie::prelie_gauge_action(&prelie::gen(g.lam, n), &prelie::gen(al, n), &prelie::gen(g.mu, n))?;
        let wa = assoc_gauge_action(&assoc::gen(g.lam, n), &assoc::gen(al, n), &assoc::gen(g.mu, n))?;
        let ge = graph_exp(&gen(x, n))?;
        Ok(all([
            first_difference(&liegraph::project_to_prelie(&ga), &ta, &g.a),
            first_difference(&liegraph::project_to_assoc(&ga), &wa, &g.a),
            first_difference(&liegraph::project_to_prelie(&ge), &prelie::prelie_exp(&prelie::gen(x, n))?, &g.a),
            first_difference(&liegraph::project_to_assoc(&ge), &exp_assoc(&assoc::gen(x, n))?, &g.a),
        ]))
    })
}

fn slinfty_suite(r: &mut Runner, n: u32) -> Result<()> {
    r.check("ℓ3 has degree -1", || {
        let mut a = Alphabet::new();
        let xs = [a.add("x", 2), a.add("y", -1), a.add("z", 3)];
        let t = sl_apply(&[&leaf(xs[0], 3), &leaf(xs[1], 3), &leaf(xs[2], 3)])?;
        Ok(expect(t.homogeneous_degree() == Some(3), || format!("{:?}", t.homogeneous_degree())))
    })?;
    r.check("C(|) = 1, C(c3) = 6 and C = 96 on the example tree", || {
        let ex = PlanarTree::parse("c2(c3(|,c0,|),c1(|))")?;
        Ok(all([
            expect(coefficient_c(&PlanarTree::Leaf) == 1u32.into(), || "C(|)".into()),
            expect(coefficient_c(&PlanarTree::corolla(3)) == 6u32.into(), || "C(c3)".into()),
            expect(coefficient_c(&ex) == 96u32.into(), || format!("C = {}", coefficient_c(&ex))),
        ]))
    })?;
    r.check("the example tree evaluates to ℓ3(ℓ4(α,dλ,α,λ),ℓ2(α,λ),λ)", || {
        let ex = PlanarTree::parse("c2(c3(|,c0,|),c1(|))")?;
        let u = universal(8);
        let (al, la) = (leaf(u.a, 8), leaf(u.lambda, 8));
        let v = slinfty::tree_value(&u.structure, &ex, &la, &al, &mut Default::default());
        let dla = u.structure.ell(&[&la]);
        let expected = sl_apply(&[&sl_apply(&[&al, &dla, &al, &la])?, &sl_apply(&[&al, &la])?, &la])?;
        Ok(first_difference(&v, &expected, &u.alphabet))
    })?;
    r.check("the universal Maurer-Cartan element is Maurer-Cartan", || {
        let u = universal(n);
        Ok(first_difference(&mc_residual(&u.structure, &leaf(u.a, n)), &Series::zero(n), &u.alphabet))
    })?;
    r.check("d^2 = 0 on the free construction", || {
        let u = universal(n);
        let (a, l) = (leaf(u.a, n), leaf(u.lambda, n));
        let mut x = sl_apply(&[&a, &l])?;
        x += &sl_apply(&[&a, &a, &l])?;
        x += &a;
        let d = |s: &_| u.structure.ell(&[s]);
        Ok(first_difference(&d(&d(&x)), &Series::zero(n), &u.alphabet))
    })?;
    r.check("the flow reduces to the Lie gauge formula when ℓ≥3 = 0", || {
        let g = gens();
        let mut d = GenMap::new();
        d.insert(g.lam, &assoc::gen(g.mu, n) + &assoc_mul(&assoc::gen(g.x, n), &assoc::gen(g.alpha, n))?);
        let s = LieSuspension { d: d.clone() };
        let l = &assoc::gen(g.lam, n) + &bracket(&assoc::gen(g.x, n), &assoc::gen(g.lam, n));
        let al = assoc::gen(g.alpha, n);
        let flow = gauge_flow(&s, &l, &al)?;
        Ok(first_difference(&flow, &lie_gauge_action(&l, &al, &free::derivation(&l, &d))?, &g.a))
    })?;
    r.check("the flow lands on Maurer-Cartan elements", || {
        let m = n.min(5);
        let u = universal(m);
        let out = gauge_flow(&u.structure, &leaf(u.lambda, m), &leaf(u.a, m))?;
        Ok(first_difference(&mc_residual(&u.structure, &out), &Series::zero(m), &u.alphabet))
    })?;
    r.check("composing two flows reproduces BCH", || {
        let rep = gamma21_check(n)?;
        Ok(rep.first_divergence.map(|k| format!("first divergence at weight {k}")))
    })?;
    r.check("the planarly partitioned example tree is valid", || {
        Ok(all([
            expect(validate_paprt(&paprt::figure_example()).is_empty(), || "figure".into()),
            paprt_mutations(),
        ]))
    })?;
    r.check("the labelled planar example tree is valid", || {
        Ok(all([
            expect(validate_laprt(&laprt::figure_example()).is_empty(), || "figure".into()),
            laprt_mutations(),
        ]))
    })
}

/// One violated condition at a time, each reported by number.
pub fn paprt_mutations() -> Outcome {
    use PlanarTree::*;
    let mut empty = paprt::figure_example();
    empty.blocks.push(vec![]);
    let unary = paprt::Paprt {
        tree: Node(vec![Node(vec![Leaf]), Leaf]),
        blocks: vec![vec![0, 1]],
    };
    let cond = |p: &paprt::Paprt| -> Vec<Option<u8>> { validate_paprt(p).iter().map(PaprtViolation::condition).collect() };
    all([
        expect(cond(&empty) == vec![Some(1)], || "empty block".into()),
        expect(cond(&unary) == vec![Some(2)], || "unary vertex".into()),
    ])
}

pub fn laprt_mutations() -> Outcome {
    let with_root = |label: Vec<Vec<usize>>| match laprt::figure_example() {
        LaNode::Vertex { children, .. } => LaNode::Vertex { label, children },
        t => t,
    };
    let cond = |t: &LaNode| -> Vec<Option<u8>> { validate_laprt(t).iter().map(LaprtViolation::condition).collect() };
    let leaves = LaNode::Vertex {
        label: vec![vec![1, 2]],
        children: vec![LaNode::Leaf0, LaNode::Leaf01],
    };
    all([
        expect(cond(&leaves) == vec![Some(1)], || "leaf order".into()),
        expect(cond(&with_root(vec![vec![1, 2, 3, 4]])) == vec![Some(2)], || "string length".into()),
        expect(cond(&with_root(vec![vec![1, 2, 3, 4], vec![2, 4, 3, 1]])) == vec![Some(3)], || "monotone".into()),
        expect(cond(&with_root(vec![vec![3, 1, 2, 4], vec![2, 3, 4, 1]])) == vec![Some(4)], || "partition".into()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_weight_three() {
        for c in run_all(3).unwrap() {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(run_suite(Suite::Liegraph, 9), Err(Error::BoundExceeded { .. })));
        assert!(matches!(run_suite(Suite::Lie, 0), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn first_difference_names_the_basis_object() {
        let mut a = Alphabet::new();
        let x = a.add("x", 0);
        let s = assoc::gen(x, 2);
        assert_eq!(first_difference(&s, &s, &a), None);
        assert_eq!(first_difference(&s, &s.scale(&q(1, 2)), &a).unwrap(), "at x: 1 vs 1/2");
    }

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
