//! Machinery shared by the free algebras on words, trees and graphs.
//!
//! A basis object is a labelled shape with one generator decoration per
//! vertex. Operations have degree 0, so evaluating a shape on inputs just
//! concatenates their decorations; signs only appear when the result is put
//! in canonical form (the Koszul sign of the reordering), and an object with
//! an odd automorphism vanishes.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::generator::Gen;
use crate::scalar::Scalar;
use crate::series::{Basis, Series};

/// Images of generators under a derivation or a substitution.
pub type GenMap<B> = BTreeMap<Gen, Series<B>>;

pub trait FreeBasis: Basis {
    /// Labelled shape of an operation with one input per vertex.
    type Shape: Clone + Debug;

    fn generator(g: Gen) -> Self;

    /// Decorations in canonical vertex order.
    fn decorations(&self) -> Vec<Gen>;

    /// The shape whose evaluation on the decorations returns `self` with
    /// sign `+1`.
    fn shape(&self) -> Self::Shape;

    fn arity(shape: &Self::Shape) -> usize;

    /// Evaluates `shape` on basis inputs, pushing canonical results with
    /// their signs. Results that vanish are skipped.
    fn compose(shape: &Self::Shape, inputs: &[&Self], out: &mut Vec<(Self, i32)>);

    /// Shape of the binary product `x ⋆ y`: vertex 0 takes `x`, vertex 1
    /// takes `y`, which sits above.
    fn product_shape() -> Self::Shape;
}

pub fn generator<B: FreeBasis>(g: Gen, trunc: u32) -> Series<B> {
    Series::monomial(B::generator(g), trunc)
}

/// Multilinear evaluation of a shape on series, truncated at `trunc`.
pub fn evaluate<B: FreeBasis>(shape: &B::Shape, inputs: &[&Series<B>], trunc: u32) -> Series<B> {
    assert_eq!(B::arity(shape), inputs.len(), "arity mismatch");
    let mut out = Series::zero(trunc);
    let mut terms: Vec<Vec<(&B, &Scalar)>> = Vec::with_capacity(inputs.len());
    for s in inputs {
        if s.is_zero() {
            return out;
        }
        let mut v: Vec<_> = s.iter().collect();
        v.sort_by_key(|(b, _)| b.weight());
        terms.push(v);
    }
    let mut suffix_min = vec![0u32; inputs.len() + 1];
    for k in (0..inputs.len()).rev() {
        suffix_min[k] = suffix_min[k + 1] + terms[k][0].0.weight();
    }
    if suffix_min[0] > trunc {
        return out;
    }
    let mut chosen: Vec<&B> = Vec::with_capacity(inputs.len());
    let mut buf = vec![];
    rec(shape, &terms, &suffix_min, trunc, 0, 0, Scalar::one(), &mut chosen, &mut buf, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn rec<'a, B: FreeBasis>(
    shape: &B::Shape,
    terms: &[Vec<(&'a B, &'a Scalar)>],
    suffix_min: &[u32],
    trunc: u32,
    k: usize,
    weight: u32,
    coeff: Scalar,
    chosen: &mut Vec<&'a B>,
    buf: &mut Vec<(B, i32)>,
    out: &mut Series<B>,
) {
    if k == terms.len() {
        buf.clear();
        B::compose(shape, chosen, buf);
        for (b, s) in buf.drain(..) {
            out.add_term(b, if s > 0 { coeff.clone() } else { -coeff.clone() });
        }
        return;
    }
    for &(b, c) in &terms[k] {
        let w = weight + b.weight();
        if w + suffix_min[k + 1] > trunc {
            break;
        }
        chosen.push(b);
        rec(shape, terms, suffix_min, trunc, k + 1, w, &coeff * c, chosen, buf, out);
        chosen.pop();
    }
}

pub fn mul<B: FreeBasis>(a: &Series<B>, b: &Series<B>) -> Series<B> {
    a.check(b).expect("product of series");
    evaluate(&B::product_shape(), &[a, b], a.trunc())
}

/// Graded commutator `a⋆b - (-1)^{|a||b|} b⋆a`, applied per degree component.
pub fn bracket<B: FreeBasis>(a: &Series<B>, b: &Series<B>) -> Series<B> {
    let mut out = Series::zero(a.trunc());
    let bd = b.by_degree();
    for (da, ap) in a.by_degree() {
        for (db, bp) in &bd {
            out += &mul(&ap, bp);
            let ba = mul(bp, &ap);
            if (da * db) % 2 != 0 {
                out += &ba;
            } else {
                out -= &ba;
            }
        }
    }
    out
}

/// Left-nested power `((x⋆x)⋆x)⋯⋆x` with `n >= 1` factors.
pub fn left_power<B: FreeBasis>(x: &Series<B>, n: usize) -> Series<B> {
    assert!(n >= 1);
    let mut p = x.clone();
    for _ in 1..n {
        p = mul(&p, x);
    }
    p
}

/// The derivation extending `d` on generators (generators missing from the
/// map are closed), with the Koszul rule for a degree `-1` map.
pub fn derivation<B: FreeBasis>(x: &Series<B>, d: &GenMap<B>) -> Series<B> {
    let trunc = x.trunc();
    let mut out = Series::zero(trunc);
    for (b, c) in x.iter() {
        let decos = b.decorations();
        let shape = b.shape();
        let mut parity = 0i32;
        for (i, g) in decos.iter().enumerate() {
            if let Some(img) = d.get(g) {
                let gens: Vec<Series<B>> = decos.iter().map(|h| generator(*h, trunc)).collect();
                let mut inputs: Vec<&Series<B>> = gens.iter().collect();
                inputs[i] = img;
                let term = evaluate(&shape, &inputs, trunc);
                let sign = if parity % 2 != 0 { -c.clone() } else { c.clone() };
                out.add_scaled(&term, &sign);
            }
            parity += g.degree as i32;
        }
    }
    out
}

/// The algebra morphism sending each generator to its image (generators
/// missing from the map are fixed).
pub fn substitute<B: FreeBasis>(x: &Series<B>, images: &GenMap<B>) -> Series<B> {
    let trunc = x.trunc();
    let mut out = Series::zero(trunc);
    for (b, c) in x.iter() {
        let shape = b.shape();
        let ins: Vec<Series<B>> = b
            .decorations()
            .iter()
            .map(|g| images.get(g).cloned().unwrap_or_else(|| generator(*g, trunc)))
            .collect();
        let refs: Vec<&Series<B>> = ins.iter().collect();
        out.add_scaled(&evaluate(&shape, &refs, trunc), c);
    }
    out
}

/// `Σ_{n>=1} c_n x^n` for a power-series in the left-nested powers; stops
/// once powers vanish below the truncation weight.
pub fn left_power_series<B: FreeBasis>(x: &Series<B>, coeff: impl Fn(usize) -> Scalar) -> Series<B> {
    let mut out = Series::zero(x.trunc());
    if x.is_zero() {
        return out;
    }
    let mut p = x.clone();
    let mut n = 1;
    while !p.is_zero() {
        let c = coeff(n);
        if !c.is_zero() {
            out.add_scaled(&p, &c);
        }
        p = mul(&p, x);
        n += 1;
    }
    out
}

/// All tuples of a product of ranges, including the single empty tuple when
/// there are no factors.
pub(crate) fn cartesian(ranges: &[std::ops::Range<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                r.clone().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}
