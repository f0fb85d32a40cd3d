//! Weight-truncated formal series over a canonical basis.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generator::Alphabet;
use crate::scalar::{format_scalar, format_scalar_latex, format_scalar_short, parse_scalar, Scalar};

/// A canonical basis object of some free algebra.
pub trait Basis: Clone + Ord + Debug {
    /// Family tag used in error messages and decoding.
    const FAMILY: &'static str;
    fn weight(&self) -> u32;
    fn degree(&self) -> i32;
    /// Canonical text encoding, used verbatim in JSON and golden files.
    fn encode(&self, alphabet: &Alphabet) -> String;
    fn encode_latex(&self, alphabet: &Alphabet) -> String {
        self.encode(alphabet)
    }
    /// Encoding as a term of a human-readable sum.
    fn encode_term(&self, alphabet: &Alphabet) -> String {
        self.encode(alphabet)
    }
}

/// Basis objects that can be read back from their canonical encoding.
pub trait DecodeBasis: Basis {
    fn decode(s: &str, alphabet: &Alphabet) -> Result<Self>;

    /// Decodes a possibly non-canonical encoding, returning the Koszul sign
    /// picked up by canonicalisation (`0` if the object vanishes).
    fn decode_signed(s: &str, alphabet: &Alphabet) -> Result<(Self, i32)> {
        Ok((Self::decode(s, alphabet)?, 1))
    }
}

/// A finite linear combination of basis objects, truncated at weight `N`.
///
/// Stored keys are canonical, coefficients are nonzero, and every key has
/// weight at most `N`. Binary operators panic on truncation mismatch; the
/// `checked_*` forms report it instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series<B: Basis> {
    terms: BTreeMap<B, Scalar>,
    trunc: u32,
}

impl<B: Basis> Series<B> {
    pub fn zero(trunc: u32) -> Self {
        Series {
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn monomial(b: B, trunc: u32) -> Self {
        Self::term(b, Scalar::one(), trunc)
    }

    pub fn term(b: B, c: Scalar, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(b, c);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (B, Scalar)>, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        for (b, c) in terms {
            s.add_term(b, c);
        }
        s
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Adds `c * b`, dropping it if `b` is above the truncation weight.
    pub fn add_term(&mut self, b: B, c: Scalar) {
        if c.is_zero() || b.weight() > self.trunc {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `c * other` in place.
    pub fn add_scaled(&mut self, other: &Series<B>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (b, x) in &other.terms {
            self.add_term(b.clone(), x * c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &B) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut s = self.clone();
        s.add_scaled(other, &Scalar::one());
        Ok(s)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut s = self.clone();
        s.add_scaled(other, &-Scalar::one());
        Ok(s)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut s = Self::zero(self.trunc);
        s.add_scaled(self, c);
        s
    }

    pub fn check(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    /// Drops all terms of weight above `m`. Fails if `m` exceeds the current
    /// truncation weight.
    pub fn truncate(&self, m: u32) -> Result<Self> {
        if m > self.trunc {
            return Err(Error::CannotUntruncate {
                have: self.trunc,
                want: m,
            });
        }
        Ok(self.filter(|b| b.weight() <= m).with_trunc_unchecked(m))
    }

    fn with_trunc_unchecked(mut self, m: u32) -> Self {
        self.trunc = m;
        self
    }

    /// Re-truncates at `m`, dropping terms above it. Raising the weight is
    /// allowed here; callers use it for intermediate bookkeeping only.
    pub fn retrunc(&self, m: u32) -> Self {
        let mut s = self.filter(|b| b.weight() <= m);
        s.trunc = m;
        s
    }

    pub fn filter(&self, mut keep: impl FnMut(&B) -> bool) -> Self {
        Series {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(b))
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// The weight-`k` component.
    pub fn homogeneous(&self, k: u32) -> Self {
        self.filter(|b| b.weight() == k)
    }

    /// Splits into components of constant degree.
    pub fn by_degree(&self) -> BTreeMap<i32, Self> {
        let mut out: BTreeMap<i32, Self> = BTreeMap::new();
        for (b, c) in &self.terms {
            out.entry(b.degree())
                .or_insert_with(|| Self::zero(self.trunc))
                .add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(|b| b.weight()).min()
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.keys().any(|b| b.weight() == 0)
    }

    /// The common degree of all terms, if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|b| b.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Fails unless every term has degree `expected`.
    pub fn require_degree(&self, what: &str, expected: i32) -> Result<()> {
        for b in self.terms.keys() {
            if b.degree() != expected {
                return Err(Error::DegreeMismatch {
                    what: what.to_string(),
                    expected,
                    found: b.degree(),
                });
            }
        }
        Ok(())
    }

    /// Applies a linear map defined on basis objects.
    pub fn map_linear<C: Basis>(&self, trunc: u32, mut f: impl FnMut(&B) -> Vec<(C, Scalar)>) -> Series<C> {
        let mut out = Series::zero(trunc);
        for (b, c) in &self.terms {
            for (d, x) in f(b) {
                out.add_term(d, x * c);
            }
        }
        out
    }

    /// Terms sorted by (weight, canonical string).
    pub fn sorted_terms(&self, alphabet: &Alphabet) -> Vec<(String, &B, &Scalar)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(b, c)| (b.encode(alphabet), b, c))
            .collect();
        v.sort_by(|a, b| (a.1.weight(), &a.0).cmp(&(b.1.weight(), &b.0)));
        v
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        Value::Array(
            self.sorted_terms(alphabet)
                .into_iter()
                .map(|(s, _, c)| json!({"basis": s, "coeff": format_scalar(c)}))
                .collect(),
        )
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (_, b, c)) in self.sorted_terms(alphabet).into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !a.is_one() {
                out.push_str(&format_scalar_short(&a));
                out.push(' ');
            }
            out.push_str(&b.encode_term(alphabet));
        }
        out
    }

    pub fn to_latex(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(b, c)| (b.weight(), b.encode(alphabet), b.encode_latex(alphabet), c))
            .collect();
        v.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let mut out = String::new();
        for (i, (_, _, tex, c)) in v.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            if !a.is_one() {
                out.push_str(&format_scalar_latex(&a));
                out.push_str("\\,");
            }
            out.push_str(&tex);
        }
        out
    }
}

impl<B: DecodeBasis> Series<B> {
    pub fn from_json(v: &Value, alphabet: &Alphabet, trunc: u32) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("series must be a JSON array".into()))?;
        let mut s = Self::zero(trunc);
        for t in arr {
            let basis = t["basis"]
                .as_str()
                .ok_or_else(|| Error::Parse("missing \"basis\"".into()))?;
            let coeff = t["coeff"]
                .as_str()
                .ok_or_else(|| Error::Parse("missing \"coeff\"".into()))?;
            let (b, sign) = B::decode_signed(basis, alphabet)
                .map_err(|e| Error::BasisMismatch(B::FAMILY.to_string(), format!("{basis:?}: {e}")))?;
            let c = parse_scalar(coeff)?;
            match sign {
                0 => {}
                1 => s.add_term(b, c),
                _ => s.add_term(b, -c),
            }
        }
        Ok(s)
    }
}

/// Which linear operation [`series_linear`] performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearOp {
    Add,
    Sub,
}

pub fn series_linear<B: Basis>(op: LinearOp, a: &Series<B>, b: &Series<B>) -> Result<Series<B>> {
    match op {
        LinearOp::Add => a.checked_add(b),
        LinearOp::Sub => a.checked_sub(b),
    }
}

impl<'a, B: Basis> Add<&'a Series<B>> for &'a Series<B> {
    type Output = Series<B>;
    fn add(self, rhs: &'a Series<B>) -> Series<B> {
        self.checked_add(rhs).expect("series addition")
    }
}

impl<'a, B: Basis> Sub<&'a Series<B>> for &'a Series<B> {
    type Output = Series<B>;
    fn sub(self, rhs: &'a Series<B>) -> Series<B> {
        self.checked_sub(rhs).expect("series subtraction")
    }
}

impl<B: Basis> Add for Series<B> {
    type Output = Series<B>;
    fn add(self, rhs: Series<B>) -> Series<B> {
        &self + &rhs
    }
}

impl<B: Basis> Sub for Series<B> {
    type Output = Series<B>;
    fn sub(self, rhs: Series<B>) -> Series<B> {
        &self - &rhs
    }
}

impl<B: Basis> AddAssign<&Series<B>> for Series<B> {
    fn add_assign(&mut self, rhs: &Series<B>) {
        self.check(rhs).expect("series addition");
        self.add_scaled(rhs, &Scalar::one());
    }
}

impl<B: Basis> SubAssign<&Series<B>> for Series<B> {
    fn sub_assign(&mut self, rhs: &Series<B>) {
        self.check(rhs).expect("series subtraction");
        self.add_scaled(rhs, &-Scalar::one());
    }
}

impl<B: Basis> Neg for &Series<B> {
    type Output = Series<B>;
    fn neg(self) -> Series<B> {
        self.scale(&-Scalar::one())
    }
}

impl<B: Basis> Neg for Series<B> {
    type Output = Series<B>;
    fn neg(self) -> Series<B> {
        -&self
    }
}

impl<B: Basis> Mul<&Scalar> for &Series<B> {
    type Output = Series<B>;
    fn mul(self, c: &Scalar) -> Series<B> {
        self.scale(c)
    }
}

/// Sign of permuting graded arguments: the product of `(-1)^(d_i d_j)` over
/// inversions `i < j`, `perm[i] > perm[j]`. `degrees[i]` is the degree of
/// the argument at position `i`.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> Result<i32> {
    if perm.len() != degrees.len() {
        return Err(Error::LengthMismatch {
            perm: perm.len(),
            degrees: degrees.len(),
        });
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::NotAPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(inversion_sign(perm, degrees))
}

fn inversion_sign(perm: &[usize], degrees: &[i32]) -> i32 {
    let mut odd = false;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && degrees[i] % 2 != 0 && degrees[j] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    if odd {
        -1
    } else {
        1
    }
}

/// Sign of rearranging graded items so that position `k` of the result holds
/// item `order[k]`; `degrees` are indexed by the original items.
pub fn reorder_sign(order: &[usize], degrees: &[i32]) -> i32 {
    let mut odd = false;
    for k in 0..order.len() {
        for l in k + 1..order.len() {
            if order[k] > order[l] && degrees[order[k]] % 2 != 0 && degrees[order[l]] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    if odd {
        -1
    } else {
        1
    }
}
