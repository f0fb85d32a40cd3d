//! The free complete unital associative algebra on words.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::free::{self, derivation, mul, FreeBasis, GenMap};
use crate::generator::{Alphabet, Gen};
use crate::scalar::{inv_factorial, q, Scalar};
use crate::series::{Basis, DecodeBasis, Series};

/// A word in the generators; the empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn unit() -> Self {
        Word(vec![])
    }
}

impl Basis for Word {
    const FAMILY: &'static str = "word";

    fn weight(&self) -> u32 {
        self.0.iter().map(|g| g.weight as u32).sum()
    }

    fn degree(&self) -> i32 {
        self.0.iter().map(|g| g.degree as i32).sum()
    }

    fn encode(&self, alphabet: &Alphabet) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|g| alphabet.name(*g))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn encode_latex(&self, alphabet: &Alphabet) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0.iter().map(|g| alphabet.name(*g)).collect()
    }
}

impl DecodeBasis for Word {
    fn decode(s: &str, alphabet: &Alphabet) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::unit());
        }
        s.split_whitespace()
            .map(|n| alphabet.get(n))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl FreeBasis for Word {
    /// Number of concatenated inputs.
    type Shape = usize;

    fn generator(g: Gen) -> Self {
        Word(vec![g])
    }

    fn decorations(&self) -> Vec<Gen> {
        self.0.clone()
    }

    fn shape(&self) -> usize {
        self.0.len()
    }

    fn arity(shape: &usize) -> usize {
        *shape
    }

    fn compose(_: &usize, inputs: &[&Self], out: &mut Vec<(Self, i32)>) {
        out.push((Word(inputs.iter().flat_map(|w| w.0.iter().copied()).collect()), 1));
    }

    fn product_shape() -> usize {
        2
    }
}

pub type WordSeries = Series<Word>;

pub fn unit(trunc: u32) -> WordSeries {
    Series::monomial(Word::unit(), trunc)
}

pub fn gen(g: Gen, trunc: u32) -> WordSeries {
    free::generator(g, trunc)
}

pub fn assoc_mul(a: &WordSeries, b: &WordSeries) -> Result<WordSeries> {
    a.check(b)?;
    Ok(mul(a, b))
}

fn no_constant(x: &WordSeries) -> Result<()> {
    if x.has_constant_term() {
        Err(Error::ConstantTerm)
    } else {
        Ok(())
    }
}

/// `exp(λ) = 1 + Σ λ^n / n!`.
pub fn exp_assoc(lambda: &WordSeries) -> Result<WordSeries> {
    no_constant(lambda)?;
    let mut out = unit(lambda.trunc());
    out += &free::left_power_series(lambda, inv_factorial);
    Ok(out)
}

/// `ln(1+λ) = Σ (-1)^{n+1} λ^n / n` for a series `1+λ` with unit constant term.
pub fn log_assoc(one_plus: &WordSeries) -> Result<WordSeries> {
    let lambda = split_unit(one_plus)?;
    log1p(&lambda)
}

/// `ln(1+λ)` given `λ` without constant term.
pub fn log1p(lambda: &WordSeries) -> Result<WordSeries> {
    no_constant(lambda)?;
    Ok(free::left_power_series(lambda, |n| {
        let s = if n % 2 == 1 { 1 } else { -1 };
        q(s, n as i64)
    }))
}

/// Splits `1 + λ`, failing unless the constant term is exactly 1.
pub fn split_unit(one_plus: &WordSeries) -> Result<WordSeries> {
    if !one_plus.coeff(&Word::unit()).is_one() {
        return Err(Error::Constraint("expected constant term 1".into()));
    }
    Ok(one_plus.filter(|w| !w.0.is_empty()))
}

/// `(1+λ)⁻¹ = 1 - λ + λ² - ⋯`.
pub fn inverse_one_plus(lambda: &WordSeries) -> Result<WordSeries> {
    no_constant(lambda)?;
    let mut out = unit(lambda.trunc());
    out += &free::left_power_series(lambda, |n| if n % 2 == 1 { -Scalar::one() } else { Scalar::one() });
    Ok(out)
}

/// `ln(exp(a) exp(b))` for series without constant terms.
pub fn bch_series(a: &WordSeries, b: &WordSeries) -> Result<WordSeries> {
    a.check(b)?;
    let p = mul(&exp_assoc(a)?, &exp_assoc(b)?);
    log_assoc(&p)
}

/// `BCH(x, y) = ln(exp(x) exp(y))` truncated at weight `n`.
pub fn bch_oracle(x: Gen, y: Gen, n: u32) -> Result<WordSeries> {
    bch_series(&gen(x, n), &gen(y, n))
}

pub(crate) fn require_gauge_degrees<B: Basis>(lambda: &Series<B>, alpha: &Series<B>, dlambda: &Series<B>) -> Result<()> {
    lambda.require_degree("λ", 0)?;
    alpha.require_degree("α", -1)?;
    dlambda.require_degree("dλ", -1)
}

/// `(1+λ) ⋆ α ⋆ (1+λ)⁻¹ - dλ ⋆ (1+λ)⁻¹`.
pub fn assoc_gauge_action(lambda: &WordSeries, alpha: &WordSeries, dlambda: &WordSeries) -> Result<WordSeries> {
    lambda.check(alpha)?;
    lambda.check(dlambda)?;
    require_gauge_degrees(lambda, alpha, dlambda)?;
    let inv = inverse_one_plus(lambda)?;
    let one_plus = &unit(lambda.trunc()) + lambda;
    let conj = mul(&mul(&one_plus, alpha), &inv);
    Ok(&conj - &mul(dlambda, &inv))
}

/// `dβ + β⋆β`, the associative Maurer–Cartan expression.
pub fn assoc_mc_residual(beta: &WordSeries, d: &GenMap<Word>) -> WordSeries {
    &derivation(beta, d) + &mul(beta, beta)
}

/// True if every coefficient vanishes.
pub fn is_zero_series<B: Basis>(s: &Series<B>) -> bool {
    s.iter().all(|(_, c)| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use proptest::prelude::*;

    struct Ctx {
        a: Alphabet,
        x: Gen,
        y: Gen,
        z: Gen,
    }

    fn ctx() -> Ctx {
        let mut a = Alphabet::new();
        let x = a.add("x", 0);
        let y = a.add("y", 0);
        let z = a.add("z", 0);
        Ctx { a, x, y, z }
    }

    fn w(gs: &[Gen]) -> Word {
        Word(gs.to_vec())
    }

    #[test]
    fn product_examples() {
        let c = ctx();
        let n = 4;
        assert_eq!(assoc_mul(&unit(n), &gen(c.x, n)).unwrap(), gen(c.x, n));
        assert_eq!(
            assoc_mul(&gen(c.x, n), &gen(c.y, n)).unwrap(),
            Series::monomial(w(&[c.x, c.y]), n)
        );
        let s = &gen(c.x, n) + &gen(c.y, n);
        let sq = assoc_mul(&s, &s).unwrap();
        assert_eq!(sq.len(), 4);
        assert!(sq.iter().all(|(_, k)| k.is_one()));
        assert!(assoc_mul(&gen(c.x, 2), &gen(c.x, 3)).is_err());
    }

    #[test]
    fn exp_log_examples() {
        let c = ctx();
        let n = 5;
        assert_eq!(exp_assoc(&Series::zero(n)).unwrap(), unit(n));
        let x = gen(c.x, n);
        assert_eq!(log_assoc(&exp_assoc(&x).unwrap()).unwrap(), x);
        // coefficient of λ³ in ln(1+λ)
        let l = log1p(&x).unwrap();
        assert_eq!(l.coeff(&w(&[c.x, c.x, c.x])), q(1, 3));
        assert!(exp_assoc(&unit(n)).is_err());
    }

    #[test]
    fn bch_low_weights() {
        let c = ctx();
        let n = 3;
        let b = bch_oracle(c.x, c.y, n).unwrap();
        assert_eq!(b.homogeneous(1), &gen(c.x, n) + &gen(c.y, n));
        let mut expect = Series::zero(n);
        expect.add_term(w(&[c.x, c.y]), q(1, 2));
        expect.add_term(w(&[c.y, c.x]), q(-1, 2));
        assert_eq!(b.homogeneous(2), expect);
        let b0 = bch_series(&gen(c.x, n), &Series::zero(n)).unwrap();
        assert_eq!(b0, gen(c.x, n));
        assert_eq!(b.to_text(&c.a).split(" + ").next().unwrap(), "x");
    }

    #[test]
    fn bch_is_associative() {
        let c = ctx();
        let n = 4;
        let (x, y, z) = (gen(c.x, n), gen(c.y, n), gen(c.z, n));
        let l = bch_series(&bch_series(&x, &y).unwrap(), &z).unwrap();
        let r = bch_series(&x, &bch_series(&y, &z).unwrap()).unwrap();
        assert_eq!(l, r);
    }

    struct Mc {
        a: Alphabet,
        lam: Gen,
        mu: Gen,
        alpha: Gen,
        dlam: Gen,
        dmu: Gen,
    }

    fn mc() -> Mc {
        let mut a = Alphabet::new();
        let lam = a.add("λ", 0);
        let mu = a.add("μ", 0);
        let alpha = a.add("α", -1);
        let dlam = a.add("dλ", -1);
        let dmu = a.add("dμ", -1);
        Mc { a, lam, mu, alpha, dlam, dmu }
    }

    fn dmap(m: &Mc, n: u32) -> GenMap<Word> {
        let mut d = GenMap::new();
        d.insert(m.lam, gen(m.dlam, n));
        d.insert(m.mu, gen(m.dmu, n));
        let a = gen(m.alpha, n);
        d.insert(m.alpha, -mul(&a, &a));
        d
    }

    #[test]
    fn gauge_trivial_cases() {
        let m = mc();
        let n = 4;
        let a = gen(m.alpha, n);
        let z = Series::zero(n);
        assert_eq!(assoc_gauge_action(&z, &a, &z).unwrap(), a);
        let l = gen(m.lam, n);
        let conj = mul(&mul(&(&unit(n) + &l), &a), &inverse_one_plus(&l).unwrap());
        assert_eq!(assoc_gauge_action(&l, &a, &z).unwrap(), conj);
        assert!(matches!(
            assoc_gauge_action(&a, &a, &z),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn gauge_preserves_mc() {
        let m = mc();
        let n = 5;
        let d = dmap(&m, n);
        let l = gen(m.lam, n);
        let beta = assoc_gauge_action(&l, &gen(m.alpha, n), &gen(m.dlam, n)).unwrap();
        assert!(assoc_mc_residual(&beta, &d).is_zero(), "{}", assoc_mc_residual(&beta, &d).to_text(&m.a));
        // a polynomial gauge
        let l2 = &(&l + &mul(&l, &l).scale(&q(1, 2))) - &mul(&mul(&l, &l), &l).scale(&int(3));
        let beta = assoc_gauge_action(&l2, &gen(m.alpha, n), &derivation(&l2, &d)).unwrap();
        assert!(assoc_mc_residual(&beta, &d).is_zero());
    }

    #[test]
    fn literal_variant_breaks_mc() {
        // with dλ ⋆ (1+λ) in place of the inverse the image is not MC
        let m = mc();
        let n = 3;
        let d = dmap(&m, n);
        let l = gen(m.lam, n);
        let one_plus = &unit(n) + &l;
        let inv = inverse_one_plus(&l).unwrap();
        let beta = &mul(&mul(&one_plus, &gen(m.alpha, n)), &inv) - &mul(&gen(m.dlam, n), &one_plus);
        assert!(!assoc_mc_residual(&beta, &d).is_zero());
    }

    #[test]
    fn gauge_is_a_group_action() {
        let m = mc();
        let n = 4;
        let d = dmap(&m, n);
        let (l, u) = (gen(m.lam, n), gen(m.mu, n));
        let a = gen(m.alpha, n);
        let b1 = assoc_gauge_action(&l, &a, &gen(m.dlam, n)).unwrap();
        let b2 = assoc_gauge_action(&u, &b1, &gen(m.dmu, n)).unwrap();
        // (1+ν) = (1+μ)(1+λ)
        let nu = &(&u + &l) + &mul(&u, &l);
        let direct = assoc_gauge_action(&nu, &a, &derivation(&nu, &d)).unwrap();
        assert_eq!(b2, direct);
    }

    #[test]
    fn json_roundtrip() {
        let c = ctx();
        let b = bch_oracle(c.x, c.y, 3).unwrap();
        let j = b.to_json(&c.a);
        assert_eq!(j[0]["basis"], "x");
        assert_eq!(Series::<Word>::from_json(&j, &c.a, 3).unwrap(), b);
    }

    fn arb_series(gs: Vec<Gen>, n: u32) -> impl Strategy<Value = WordSeries> {
        prop::collection::vec((prop::collection::vec(0..gs.len(), 1..=n as usize), -3i64..4), 0..5)
            .prop_map(move |v| Series::from_terms(v.into_iter().map(|(ix, c)| (Word(ix.iter().map(|&i| gs[i]).collect()), int(c))), n))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn exp_log_roundtrip(s in arb_series(vec![ctx().x, ctx().y], 4)) {
            prop_assert_eq!(log_assoc(&exp_assoc(&s).unwrap()).unwrap(), s.clone());
            let one_plus = &unit(4) + &s;
            prop_assert_eq!(exp_assoc(&log_assoc(&one_plus).unwrap()).unwrap(), one_plus);
        }

        #[test]
        fn leibniz_rule(a in arb_series(vec![mc().lam, mc().alpha], 4), b in arb_series(vec![mc().lam, mc().alpha], 4)) {
            let m = mc();
            let d = dmap(&m, 4);
            for (da, ap) in a.by_degree() {
                let lhs = derivation(&mul(&ap, &b), &d);
                let mut rhs = mul(&derivation(&ap, &d), &b);
                let t = mul(&ap, &derivation(&b, &d));
                if da % 2 != 0 { rhs -= &t } else { rhs += &t }
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
