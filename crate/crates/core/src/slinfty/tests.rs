use super::*;
use crate::assoc::{self, gen};
use crate::lie::lie_gauge_action;
use crate::scalar::{int, q};
use num_traits::Zero;
use proptest::prelude::*;

fn abc(degrees: [i16; 3]) -> (Alphabet, [Gen; 3]) {
    let mut a = Alphabet::new();
    let x = a.add("x", degrees[0]);
    let y = a.add("y", degrees[1]);
    let z = a.add("z", degrees[2]);
    (a, [x, y, z])
}

fn ell(args: &[&SLSeries]) -> SLSeries {
    sl_apply(args).unwrap()
}

fn decode(s: &str, a: &Alphabet, trunc: u32) -> SLSeries {
    let (t, sign) = SLTree::decode_signed(s, a).unwrap();
    Series::term(t, int(sign as i64), trunc)
}

#[test]
fn ell2_is_graded_symmetric() {
    for degrees in [[0, 0, 0], [1, 0, 0], [1, 1, 0], [-1, 2, 0]] {
        let (_, [x, y, _]) = abc(degrees);
        let (lx, ly) = (leaf(x, 4), leaf(y, 4));
        let sign = if x.is_odd() && y.is_odd() { -1 } else { 1 };
        assert_eq!(ell(&[&lx, &ly]), ell(&[&ly, &lx]).scale(&int(sign)));
    }
}

#[test]
fn ell_of_two_even_leaves_is_one_tree() {
    let (a, [x, y, _]) = abc([0, 0, 0]);
    let t = ell(&[&leaf(y, 3), &leaf(x, 3)]);
    assert_eq!(t.to_text(&a), "ℓ2(x,y)");
}

#[test]
fn ell_on_repeated_odd_input_vanishes() {
    let (_, [x, y, _]) = abc([1, 0, 0]);
    assert!(ell(&[&leaf(x, 4), &leaf(x, 4)]).is_zero());
    assert!(!ell(&[&leaf(y, 4), &leaf(y, 4)]).is_zero());
    assert_eq!(sl_apply(&[&leaf(x, 4)]), Err(Error::InvalidArity(1)));
}

#[test]
fn degree_of_ell3() {
    let (_, [x, y, z]) = abc([2, -1, 3]);
    let t = ell(&[&leaf(x, 3), &leaf(y, 3), &leaf(z, 3)]);
    assert_eq!(t.homogeneous_degree(), Some(2 - 1 + 3 - 1));
}

#[test]
fn d_of_ell2_on_closed_leaves_vanishes() {
    let (_, [x, y, _]) = abc([0, 0, 0]);
    let s = FreeSl { dgen: BTreeMap::new() };
    assert!(s.ell(&[&ell(&[&leaf(x, 3), &leaf(y, 3)])]).is_zero());
}

#[test]
fn d_of_ell3_has_three_composites() {
    let (a, [x, y, z]) = abc([0, 0, 0]);
    let s = FreeSl { dgen: BTreeMap::new() };
    let t = ell(&[&leaf(x, 3), &leaf(y, 3), &leaf(z, 3)]);
    let mut expected = Series::zero(3);
    for e in ["ℓ2(ℓ2(x,y),z)", "ℓ2(ℓ2(x,z),y)", "ℓ2(ℓ2(y,z),x)"] {
        expected -= &decode(e, &a, 3);
    }
    assert_eq!(s.ell(&[&t]), expected);
}

#[test]
fn d_of_ell3_signs_with_odd_leaves() {
    // direct sum over the splittings with the Koszul sign of the unshuffle
    let (a, [x, y, z]) = abc([1, 1, 0]);
    let s = FreeSl { dgen: BTreeMap::new() };
    let t = ell(&[&leaf(x, 3), &leaf(y, 3), &leaf(z, 3)]);
    let l = |g| leaf(g, 3);
    let expected = -(ell(&[&ell(&[&l(x), &l(y)]), &l(z)])
        + ell(&[&ell(&[&l(x), &l(z)]), &l(y)])
        - ell(&[&ell(&[&l(y), &l(z)]), &l(x)]));
    assert_eq!(s.ell(&[&t]), expected);
    assert!(!expected.is_zero(), "{}", expected.to_text(&a));
}

fn d2_setup(trunc: u32) -> (Alphabet, Vec<Gen>, FreeSl) {
    let u = universal(trunc);
    let mut a = u.alphabet.clone();
    let b = a.add("b", 1);
    let c = a.add("c", 0);
    let mut dgen = u.structure.dgen.clone();
    dgen.insert(b, leaf(c, trunc));
    (a, vec![u.a, u.lambda, u.mu, b, c], FreeSl { dgen })
}

fn random_tree(gens: &[Gen], choices: &[usize], pos: &mut usize, budget: u32) -> SLTree {
    fn next(choices: &[usize], pos: &mut usize) -> usize {
        *pos += 1;
        choices[(*pos - 1) % choices.len()]
    }
    if budget < 2 || next(choices, pos) % 3 == 0 {
        return SLTree::Leaf(gens[next(choices, pos) % gens.len()]);
    }
    let m = 2 + next(choices, pos) % (budget as usize - 1);
    let mut kids = vec![];
    let mut left = budget;
    for k in 0..m {
        let share = if k + 1 == m { left } else { 1 + (next(choices, pos) as u32 % (left - (m - k - 1) as u32)) };
        left -= share;
        kids.push(random_tree(gens, choices, pos, share));
    }
    SLTree::node(kids).map(|(t, _)| t).unwrap_or(SLTree::Leaf(gens[0]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn d_squares_to_zero(choices in prop::collection::vec(0usize..1000, 8..40), coeffs in prop::collection::vec(-3i64..4, 1..4)) {
        let trunc = 5;
        let (_, gens, s) = d2_setup(trunc);
        let mut x = Series::zero(trunc);
        let mut pos = 0;
        for c in coeffs {
            let budget = 1 + (choices[pos % choices.len()] as u32 % trunc);
            pos += 1;
            x.add_term(random_tree(&gens, &choices, &mut pos, budget), int(c));
        }
        let dx = s.ell(&[&x]);
        prop_assert!(s.ell(&[&dx]).is_zero());
    }
}

#[test]
fn d_squares_to_zero_on_universal_generator() {
    let u = universal(6);
    let da = u.structure.ell(&[&leaf(u.a, 6)]);
    assert!(u.structure.ell(&[&da]).is_zero());
}

#[test]
fn mc_residual_of_zero() {
    let u = universal(4);
    assert!(mc_residual(&u.structure, &Series::zero(4)).is_zero());
}

#[test]
fn universal_mc_element_is_mc() {
    for trunc in 1..=6 {
        let u = universal(trunc);
        assert!(mc_residual(&u.structure, &leaf(u.a, trunc)).is_zero());
    }
}

#[test]
fn mc_residual_for_lie_structure_has_two_terms() {
    let mut a = Alphabet::new();
    let x = a.add("x", -1);
    let y = a.add("y", -1);
    let mut d = GenMap::new();
    d.insert(x, -&gen(y, 4));
    let s = LieSuspension { d: d.clone() };
    let alpha = &gen(x, 4) + &gen(y, 4);
    let expected = &s.ell(&[&alpha]) + &s.ell(&[&alpha, &alpha]).scale(&q(1, 2));
    assert_eq!(mc_residual(&s, &alpha), expected);
}

#[test]
fn example_tree_coefficient_and_value() {
    let t = PlanarTree::parse("c2(c3(|,c0,|),c1(|))").unwrap();
    assert_eq!(coefficient_c(&t), 96u32.into());
    let u = universal(8);
    let (al, la) = (leaf(u.a, 8), leaf(u.lambda, 8));
    let value = tree_value(&u.structure, &t, &la, &al, &mut HashMap::new());
    let dla = u.structure.ell(&[&la]);
    let expected = ell(&[&ell(&[&al, &dla, &al, &la]), &ell(&[&al, &la]), &la]);
    assert_eq!(value, expected);
    assert_eq!(value.len(), 1);
}

/// `C` recomputed from the nested encoding: each vertex contributes its
/// arity factorial times the number of vertices below and including it.
fn c_oracle(t: &PlanarTree) -> u128 {
    fn go(t: &PlanarTree) -> (u128, u128) {
        match t {
            PlanarTree::Leaf => (1, 0),
            PlanarTree::Node(kids) => {
                let (mut c, mut v) = (1u128, 1u128);
                for k in kids {
                    let (kc, kv) = go(k);
                    c *= kc;
                    v += kv;
                }
                let fact: u128 = (1..=kids.len() as u128).product();
                (c * fact * v, v)
            }
        }
    }
    go(t).0
}

#[test]
fn coefficient_c_matches_direct_recursion() {
    for (t, _) in enumerate_planar_trees(7, 1, 1) {
        assert_eq!(coefficient_c(&t), c_oracle(&t).into(), "{t:?}");
    }
}

#[test]
fn zero_gauge_fixes_alpha() {
    let u = universal(5);
    let al = leaf(u.a, 5);
    assert_eq!(gauge_flow(&u.structure, &Series::zero(5), &al).unwrap(), al);
}

#[test]
fn gauge_flow_checks_degrees() {
    let u = universal(3);
    let al = leaf(u.a, 3);
    assert!(matches!(
        gauge_flow(&u.structure, &al, &al),
        Err(Error::DegreeMismatch { .. })
    ));
}

#[test]
fn flow_reduces_to_lie_formula() {
    let n = 5;
    let mut a = Alphabet::new();
    let x = a.add("x", 0);
    let y = a.add("y", 0);
    let al = a.add("a", -1);
    let be = a.add("b", -1);
    let mut d = GenMap::new();
    d.insert(x, &gen(al, n) + &assoc::assoc_mul(&gen(y, n), &gen(be, n)).unwrap());
    d.insert(y, gen(be, n).scale(&int(2)));
    let s = LieSuspension { d: d.clone() };
    let lambda = &gen(x, n) + &bracket(&gen(x, n), &gen(y, n));
    let alpha = &gen(al, n) - &bracket(&gen(y, n), &gen(be, n)).scale(&q(1, 3));
    let flow = gauge_flow(&s, &lambda, &alpha).unwrap();
    let dlambda = free::derivation(&lambda, &d);
    assert_eq!(flow, lie_gauge_action(&lambda, &alpha, &dlambda).unwrap());
}

#[test]
fn flow_output_is_mc_in_universal_setup() {
    for trunc in 1..=4 {
        let u = universal(trunc);
        let out = gauge_flow(&u.structure, &leaf(u.lambda, trunc), &leaf(u.a, trunc)).unwrap();
        assert!(mc_residual(&u.structure, &out).is_zero(), "weight {trunc}");
    }
}

#[test]
fn gamma21_matches_bch() {
    let r = gamma21_check(5).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.per_weight.len(), 5);
}

const STRUCTURE: &str = r#"{
  "basis": [
    {"name": "e", "degree": 0},
    {"name": "f", "degree": 0},
    {"name": "h", "degree": -1, "weight": 2}
  ],
  "operations": [
    {"inputs": ["e", "f"], "output": [{"basis": "h", "coeff": "1"}]}
  ]
}"#;

#[test]
fn finite_structure_parses_and_satisfies_relations() {
    let s = FiniteSl::from_json(STRUCTURE, 4).unwrap();
    assert_eq!(s.max_arity, 2);
    assert!(s.check_relations().is_empty());
    let e = Series::monomial(Vector(s.alphabet.get("e").unwrap()), 4);
    let f = Series::monomial(Vector(s.alphabet.get("f").unwrap()), 4);
    let ef = s.ell(&[&e, &f]);
    assert_eq!(ef, s.ell(&[&f, &e]));
    assert_eq!(ef.to_text(&s.alphabet), "h");
    // the flow of λ = 0 is the identity
    let alpha = &e + &f;
    assert_eq!(gauge_flow(&s, &Series::zero(4), &alpha).unwrap(), alpha);
}

#[test]
fn finite_structure_reports_broken_relation() {
    // d is not a derivation of ℓ2: d(ℓ2(e,e)) = d(g) = k but ℓ2(de, e) = 0
    let text = r#"{
      "basis": [
        {"name": "e", "degree": 0},
        {"name": "g", "degree": -1},
        {"name": "k", "degree": -2}
      ],
      "operations": [
        {"inputs": ["e", "e"], "output": [{"basis": "g", "coeff": "1"}]},
        {"inputs": ["g"], "output": [{"basis": "k", "coeff": "1"}]}
      ]
    }"#;
    let s = FiniteSl::from_json(text, 3).unwrap();
    let v = s.check_relations();
    assert!(!v.is_empty());
    assert!(v[0].contains("(e,e)"), "{v:?}");
}

#[test]
fn finite_structure_rejects_bad_degree() {
    let text = r#"{"basis": [{"name": "e", "degree": 0}],
      "operations": [{"inputs": ["e", "e"], "output": [{"basis": "e", "coeff": "1"}]}]}"#;
    assert!(matches!(FiniteSl::from_json(text, 3), Err(Error::Structure(_))));
}

#[test]
fn finite_structure_lie_suspension_agrees_with_gauge_formula() {
    // sl2-like: ℓ2 on degree 0 with ℓ1 = 0, and the flow equals exp(ad)
    let text = r#"{
      "basis": [
        {"name": "u", "degree": 1},
        {"name": "v", "degree": 0}
      ],
      "operations": [
        {"inputs": ["u", "v"], "output": [{"basis": "v", "coeff": "1"}]}
      ],
      "lambda": [{"basis": "u", "coeff": "1"}],
      "alpha": [{"basis": "v", "coeff": "1"}]
    }"#;
    let s = FiniteSl::from_json(text, 6).unwrap();
    assert!(s.check_relations().is_empty());
    // ℓ2(v, u) = ℓ2(u, v) = v, so every c_1 ladder gives v; ladders up to five vertices fit
    let out = gauge_flow(&s, &s.lambda, &s.alpha).unwrap();
    let vs: Vec<_> = out.iter().collect();
    assert_eq!(vs.len(), 1);
    let mut e = Scalar::zero();
    for k in 0..=5 {
        e += inv_factorial(k);
    }
    assert_eq!(vs[0].1, &e);
}

#[test]
fn json_round_trip() {
    let u = universal(4);
    let x = gauge_flow(&u.structure, &leaf(u.lambda, 4), &leaf(u.a, 4)).unwrap();
    let back = SLSeries::from_json(&x.to_json(&u.alphabet), &u.alphabet, 4).unwrap();
    assert_eq!(back, x);
    let l = decode("l2(λ,ℓ2(a,a))", &u.alphabet, 4);
    assert_eq!(l.len(), 1);
}
