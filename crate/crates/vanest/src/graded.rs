//! Free graded modules on a finite basis: symmetric, exterior and tensor
//! words, shuffle coproducts, antipode, counit and degree projections.

use crate::element::{Element, Label, Pair};
use crate::rational::Rational;
use crate::ring::Ring;
use serde_json::{json, Value};
use std::fmt;

/// Basis word of `Sym^r V`: a multiset of basis indices stored as a sorted
/// non-decreasing sequence.  The empty word is the unit of `Sym V`.
///
/// Indices are zero-based internally; display and JSON are one-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SymWord(Vec<u32>);

/// Basis word of `Λ^ℓ V`: a strictly increasing sequence of basis indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExtWord(Vec<u32>);

/// Basis word of `T^k Sym V`: a finite sequence of symmetric words.  The
/// empty sequence is the unit of the tensor algebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TensorWord(Vec<SymWord>);

impl SymWord {
    pub fn unit() -> Self {
        SymWord(Vec::new())
    }

    pub fn generator(i: u32) -> Self {
        SymWord(vec![i])
    }

    pub fn new(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        SymWord(indices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    /// Multiset union.
    pub fn merge(&self, other: &SymWord) -> SymWord {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                v.push(self.0[i]);
                i += 1;
            } else {
                v.push(other.0[j]);
                j += 1;
            }
        }
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&other.0[j..]);
        SymWord(v)
    }

    /// The word with the letter at `pos` removed.
    pub fn without(&self, pos: usize) -> SymWord {
        let mut v = self.0.clone();
        v.remove(pos);
        SymWord(v)
    }

    /// Sub-multiset selected by a position bitmask.
    fn select(&self, mask: usize) -> (SymWord, SymWord) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (pos, &x) in self.0.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                a.push(x);
            } else {
                b.push(x);
            }
        }
        (SymWord(a), SymWord(b))
    }
}

impl ExtWord {
    pub fn unit() -> Self {
        ExtWord(Vec::new())
    }

    pub fn generator(i: u32) -> Self {
        ExtWord(vec![i])
    }

    /// From a strictly increasing sequence.
    pub fn new(indices: Vec<u32>) -> Self {
        assert!(
            indices.windows(2).all(|w| w[0] < w[1]),
            "not strictly increasing"
        );
        ExtWord(indices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn without(&self, pos: usize) -> ExtWord {
        let mut v = self.0.clone();
        v.remove(pos);
        ExtWord(v)
    }

    fn select(&self, mask: usize) -> (ExtWord, ExtWord, i32) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut sign = 1;
        for (pos, &x) in self.0.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                // crossing every earlier letter left in the complement
                if b.len() % 2 == 1 {
                    sign = -sign;
                }
                a.push(x);
            } else {
                b.push(x);
            }
        }
        (ExtWord(a), ExtWord(b), sign)
    }
}

impl TensorWord {
    pub fn unit() -> Self {
        TensorWord(Vec::new())
    }

    pub fn new(slots: Vec<SymWord>) -> Self {
        TensorWord(slots)
    }

    pub fn singleton(w: SymWord) -> Self {
        TensorWord(vec![w])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn slots(&self) -> &[SymWord] {
        &self.0
    }

    pub fn concat(&self, other: &TensorWord) -> TensorWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        TensorWord(v)
    }

    pub fn push(&self, w: SymWord) -> TensorWord {
        let mut v = self.0.clone();
        v.push(w);
        TensorWord(v)
    }

    /// Splits off the last slot; `None` on the unit.
    pub fn split_last(&self) -> Option<(TensorWord, SymWord)> {
        let mut v = self.0.clone();
        v.pop().map(|w| (TensorWord(v), w))
    }

    /// Replaces slot `i` by the two halves of a splitting.
    pub fn split_slot(&self, i: usize, left: SymWord, right: SymWord) -> TensorWord {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0[..i]);
        v.push(left);
        v.push(right);
        v.extend_from_slice(&self.0[i + 1..]);
        TensorWord(v)
    }
}

fn write_indices(f: &mut fmt::Formatter<'_>, xs: &[u32], sep: &str, empty: &str) -> fmt::Result {
    if xs.is_empty() {
        return write!(f, "{empty}");
    }
    let mut first = true;
    for &x in xs {
        if !first {
            write!(f, "{sep}")?;
        }
        first = false;
        write!(f, "e{}", x + 1)?;
    }
    Ok(())
}

impl fmt::Display for SymWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_indices(f, &self.0, "∨", "𝟙")
    }
}

impl fmt::Display for ExtWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_indices(f, &self.0, "∧", "1")
    }
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for w in &self.0 {
            if !first {
                write!(f, " ⊗ ")?;
            }
            first = false;
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

fn indices_json(xs: &[u32]) -> Value {
    Value::Array(xs.iter().map(|&x| json!(x + 1)).collect())
}

pub fn indices_from_json(v: &Value) -> Result<Vec<u32>, String> {
    let arr = v
        .as_array()
        .ok_or_else(|| format!("expected index list, got {v}"))?;
    arr.iter()
        .map(|x| {
            let n = x.as_u64().ok_or_else(|| format!("bad index {x}"))?;
            if n == 0 {
                return Err("indices are one-based".to_string());
            }
            Ok((n - 1) as u32)
        })
        .collect()
}

impl Label for SymWord {
    fn degree(&self) -> i64 {
        self.0.len() as i64
    }
    fn grading(&self) -> String {
        "sym".into()
    }
    fn to_json(&self) -> Value {
        indices_json(&self.0)
    }
}

impl Label for ExtWord {
    fn degree(&self) -> i64 {
        self.0.len() as i64
    }
    fn grading(&self) -> String {
        "ext".into()
    }
    fn to_json(&self) -> Value {
        indices_json(&self.0)
    }
}

impl Label for TensorWord {
    fn degree(&self) -> i64 {
        self.0.len() as i64
    }
    fn grading(&self) -> String {
        "tensor".into()
    }
    fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|w| w.to_json()).collect())
    }
}

// ---------------------------------------------------------------------------
// products

/// Bilinear extension of the multiset union of symmetric words.
pub fn sym_mul<R: Ring>(a: &Element<SymWord, R>, b: &Element<SymWord, R>) -> Element<SymWord, R> {
    let mut out = Element::zero();
    for (wa, ca) in a.terms() {
        for (wb, cb) in b.terms() {
            out.add_term(wa.merge(wb), ca.mul(cb));
        }
    }
    out
}

/// Wedge of two exterior words: zero on a repeated index, otherwise the
/// sorted word with the Koszul sign of the sorting permutation.
pub fn ext_word_mul(a: &ExtWord, b: &ExtWord) -> Option<(ExtWord, i32)> {
    let mut v = Vec::with_capacity(a.0.len() + b.0.len());
    let mut sign = 1;
    let (mut i, mut j) = (0, 0);
    while i < a.0.len() && j < b.0.len() {
        if a.0[i] == b.0[j] {
            return None;
        }
        if a.0[i] < b.0[j] {
            v.push(a.0[i]);
            i += 1;
        } else {
            // b.0[j] crosses the remaining letters of a
            if (a.0.len() - i) % 2 == 1 {
                sign = -sign;
            }
            v.push(b.0[j]);
            j += 1;
        }
    }
    v.extend_from_slice(&a.0[i..]);
    v.extend_from_slice(&b.0[j..]);
    Some((ExtWord(v), sign))
}

/// Bilinear extension of the wedge product with Koszul signs.
pub fn ext_mul<R: Ring>(a: &Element<ExtWord, R>, b: &Element<ExtWord, R>) -> Element<ExtWord, R> {
    let mut out = Element::zero();
    for (wa, ca) in a.terms() {
        for (wb, cb) in b.terms() {
            if let Some((w, sign)) = ext_word_mul(wa, wb) {
                let c = ca.mul(cb);
                out.add_term(w, if sign < 0 { c.neg() } else { c });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// coproducts

/// Shuffle coproduct of a symmetric word: the sum over all splits of the
/// position set.  Repeated letters produce coinciding splits, which add up.
pub fn shuffle_sym_word<R: Ring>(w: &SymWord) -> Element<Pair<SymWord, SymWord>, R> {
    let r = w.len();
    assert!(r < usize::BITS as usize);
    let mut out = Element::zero();
    for mask in 0..(1usize << r) {
        let (a, b) = w.select(mask);
        out.add_term(Pair(a, b), R::one());
    }
    out
}

/// Signed shuffle coproduct of an exterior word.
pub fn shuffle_ext_word<R: Ring>(w: &ExtWord) -> Element<Pair<ExtWord, ExtWord>, R> {
    let r = w.len();
    let mut out = Element::zero();
    for mask in 0..(1usize << r) {
        let (a, b, sign) = w.select(mask);
        out.add_term(Pair(a, b), if sign < 0 { R::one().neg() } else { R::one() });
    }
    out
}

pub fn shuffle_sym<R: Ring>(e: &Element<SymWord, R>) -> Element<Pair<SymWord, SymWord>, R> {
    e.map(shuffle_sym_word)
}

pub fn shuffle_ext<R: Ring>(e: &Element<ExtWord, R>) -> Element<Pair<ExtWord, ExtWord>, R> {
    e.map(shuffle_ext_word)
}

/// Reduced shuffle coproduct: the shuffle coproduct minus both primitive
/// terms.  On the unit this is -𝟙⊗𝟙.
pub fn reduced_shuffle_word<R: Ring>(w: &SymWord) -> Element<Pair<SymWord, SymWord>, R> {
    let mut out = shuffle_sym_word(w);
    out.add_term(Pair(SymWord::unit(), w.clone()), R::one().neg());
    out.add_term(Pair(w.clone(), SymWord::unit()), R::one().neg());
    out
}

pub fn reduced_shuffle<R: Ring>(e: &Element<SymWord, R>) -> Element<Pair<SymWord, SymWord>, R> {
    e.map(reduced_shuffle_word)
}

/// Iterated shuffle coproduct into `n` symmetric factors, materialized as
/// tensor words.
pub fn iterated_shuffle_sym<R: Ring>(w: &SymWord, n: usize) -> Element<TensorWord, R> {
    assert!(n >= 1);
    let mut out = Element::term(TensorWord::new(vec![w.clone()]), R::one());
    for _ in 1..n {
        // split the last factor once more
        let mut next = Element::zero();
        for (tw, c) in out.terms() {
            let (head, last) = tw.split_last().expect("nonempty");
            for (Pair(a, b), d) in shuffle_sym_word::<R>(&last).terms() {
                next.add_term(head.push(a.clone()).push(b.clone()), c.mul(d));
            }
        }
        out = next;
    }
    out
}

/// Ordered splits of an exterior word into `n` blocks with Koszul signs.
pub fn iterated_shuffle_ext(w: &ExtWord, n: usize) -> Vec<(Vec<ExtWord>, i32)> {
    assert!(n >= 1);
    let mut acc: Vec<(Vec<ExtWord>, ExtWord, i32)> = vec![(Vec::new(), w.clone(), 1)];
    for _ in 1..n {
        let mut next = Vec::new();
        for (blocks, rest, sign) in acc {
            for mask in 0..(1usize << rest.len()) {
                let (a, b, s) = rest.select(mask);
                let mut blocks2 = blocks.clone();
                blocks2.push(a);
                next.push((blocks2, b, sign * s));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(mut blocks, rest, sign)| {
            blocks.push(rest);
            (blocks, sign)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// antipode, counit, projections

/// The antipode: each word of degree r is scaled by (-1)^r.  Works on mixed
/// elements of either graded algebra.
pub fn antipode<L: Label, R: Ring>(e: &Element<L, R>) -> Element<L, R> {
    Element::from_terms(e.terms().map(|(l, c)| {
        let c = if l.degree() % 2 == 0 {
            c.clone()
        } else {
            c.neg()
        };
        (l.clone(), c)
    }))
}

/// Counit: the scalar coefficient of the degree-zero word.
pub fn counit<L: Label, R: Ring>(e: &Element<L, R>) -> R {
    let mut out = R::zero();
    for (l, c) in e.terms() {
        if l.degree() == 0 {
            out = out.add(c);
        }
    }
    out
}

/// Projection onto a fixed degree.
pub fn pr_degree<L: Label, R: Ring>(e: &Element<L, R>, d: i64) -> Element<L, R> {
    Element::from_terms(
        e.terms()
            .filter(|(l, _)| l.degree() == d)
            .map(|(l, c)| (l.clone(), c.clone())),
    )
}

/// Projection onto degree one (the module V itself).
pub fn pr_v<L: Label, R: Ring>(e: &Element<L, R>) -> Element<L, R> {
    pr_degree(e, 1)
}

/// Projection onto positive degrees: pr_+(𝟙) = 0.
pub fn pr_plus<L: Label, R: Ring>(e: &Element<L, R>) -> Element<L, R> {
    Element::from_terms(
        e.terms()
            .filter(|(l, _)| l.degree() > 0)
            .map(|(l, c)| (l.clone(), c.clone())),
    )
}

/// Degree selector for the generic projection entry point.
#[derive(Clone, Copy, Debug)]
pub enum Selector {
    Counit,
    PrV,
    PrPlus,
    PrSym(usize),
    PrExt(usize),
}

/// Outcome of a projection: the counit produces a scalar, everything else an
/// element of the same module.
pub enum Projected<L: Label, R: Ring> {
    Scalar(R),
    Element(Element<L, R>),
}

pub fn project<L: Label, R: Ring>(e: &Element<L, R>, sel: Selector) -> Projected<L, R> {
    match sel {
        Selector::Counit => Projected::Scalar(counit(e)),
        Selector::PrV => Projected::Element(pr_v(e)),
        Selector::PrPlus => Projected::Element(pr_plus(e)),
        Selector::PrSym(r) => Projected::Element(pr_degree(e, r as i64)),
        Selector::PrExt(l) => Projected::Element(pr_degree(e, l as i64)),
    }
}

// ---------------------------------------------------------------------------
// basis enumeration

/// All symmetric words of the given degree over a basis of size `dim`.
pub fn sym_words(dim: u32, degree: usize) -> Vec<SymWord> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(dim: u32, degree: usize, start: u32, current: &mut Vec<u32>, out: &mut Vec<SymWord>) {
        if current.len() == degree {
            out.push(SymWord(current.clone()));
            return;
        }
        for i in start..dim {
            current.push(i);
            rec(dim, degree, i, current, out);
            current.pop();
        }
    }
    rec(dim, degree, 0, &mut current, &mut out);
    out
}

/// All symmetric words of degree at most `cap`.
pub fn sym_words_up_to(dim: u32, cap: usize) -> Vec<SymWord> {
    (0..=cap).flat_map(|d| sym_words(dim, d)).collect()
}

/// All exterior words of the given degree.
pub fn ext_words(dim: u32, degree: usize) -> Vec<ExtWord> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(dim: u32, degree: usize, start: u32, current: &mut Vec<u32>, out: &mut Vec<ExtWord>) {
        if current.len() == degree {
            out.push(ExtWord(current.clone()));
            return;
        }
        for i in start..dim {
            current.push(i);
            rec(dim, degree, i + 1, current, out);
            current.pop();
        }
    }
    rec(dim, degree, 0, &mut current, &mut out);
    out
}

pub fn ext_words_up_to(dim: u32, cap: usize) -> Vec<ExtWord> {
    (0..=cap.min(dim as usize))
        .flat_map(|d| ext_words(dim, d))
        .collect()
}

/// All tensor words with exactly `k` slots, each of symmetric degree at most
/// `slot_cap`.
pub fn tensor_words(dim: u32, k: usize, slot_cap: usize) -> Vec<TensorWord> {
    let slot_basis = sym_words_up_to(dim, slot_cap);
    let mut out = vec![TensorWord::unit()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * slot_basis.len());
        for tw in &out {
            for w in &slot_basis {
                next.push(tw.push(w.clone()));
            }
        }
        out = next;
    }
    out
}

/// Scale an element by 1/n!.
pub fn scale_inv_factorial<L: Label, R: Ring>(e: &Element<L, R>, n: usize) -> Element<L, R> {
    e.scale_rational(&Rational::inv_factorial(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    type E = Element<SymWord, Rational>;

    fn gen(i: u32) -> E {
        Element::basis(SymWord::generator(i))
    }

    #[test]
    fn sym_product_examples() {
        let x = gen(0);
        let y = gen(1);
        let xy = sym_mul(&x, &y);
        assert_eq!(xy, Element::basis(SymWord::new(vec![0, 1])));
        let unit: E = Element::basis(SymWord::unit());
        assert_eq!(sym_mul(&unit, &xy), xy);
        assert_eq!(
            sym_mul(&xy, &x),
            Element::basis(SymWord::new(vec![0, 0, 1]))
        );
    }

    #[test]
    fn ext_product_examples() {
        let e1 = ExtWord::generator(0);
        let e2 = ExtWord::generator(1);
        // e2 ∧ e1 = -(e1 ∧ e2)
        let (w, sign) = ext_word_mul(&e2, &e1).unwrap();
        assert_eq!(w, ExtWord::new(vec![0, 1]));
        assert_eq!(sign, -1);
        // e1 ∧ e1 = 0
        assert!(ext_word_mul(&e1, &e1).is_none());
        // (e1∧e2) ∧ e3
        let (w, sign) = ext_word_mul(&ExtWord::new(vec![0, 1]), &ExtWord::generator(2)).unwrap();
        assert_eq!(w, ExtWord::new(vec![0, 1, 2]));
        assert_eq!(sign, 1);
    }

    #[test]
    fn shuffle_of_generator() {
        // Δ(x) = 𝟙⊗x + x⊗𝟙
        let d: Element<Pair<SymWord, SymWord>, Rational> = shuffle_sym_word(&SymWord::generator(0));
        let mut expected = Element::zero();
        expected.add_term(
            Pair(SymWord::unit(), SymWord::generator(0)),
            Rational::one(),
        );
        expected.add_term(
            Pair(SymWord::generator(0), SymWord::unit()),
            Rational::one(),
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn shuffle_of_two_letter_word() {
        // Δ(x∨y) = 𝟙⊗xy + x⊗y + y⊗x + xy⊗𝟙
        let w = SymWord::new(vec![0, 1]);
        let d: Element<Pair<SymWord, SymWord>, Rational> = shuffle_sym_word(&w);
        assert_eq!(d.num_terms(), 4);
        assert_eq!(
            d.coefficient(&Pair(SymWord::generator(0), SymWord::generator(1))),
            Rational::one()
        );
        // repeated letters accumulate multiplicity: Δ(x∨x) has x⊗x twice
        let ww = SymWord::new(vec![0, 0]);
        let d: Element<Pair<SymWord, SymWord>, Rational> = shuffle_sym_word(&ww);
        assert_eq!(
            d.coefficient(&Pair(SymWord::generator(0), SymWord::generator(0))),
            Rational::from_int(2)
        );
    }

    #[test]
    fn signed_shuffle_of_wedge() {
        // Δ(e1∧e2) = 1⊗e1∧e2 + e1⊗e2 - e2⊗e1 + e1∧e2⊗1
        let w = ExtWord::new(vec![0, 1]);
        let d: Element<Pair<ExtWord, ExtWord>, Rational> = shuffle_ext_word(&w);
        assert_eq!(
            d.coefficient(&Pair(ExtWord::generator(1), ExtWord::generator(0))),
            -Rational::one()
        );
        assert_eq!(
            d.coefficient(&Pair(ExtWord::generator(0), ExtWord::generator(1))),
            Rational::one()
        );
        assert_eq!(d.num_terms(), 4);
    }

    #[test]
    fn reduced_coproduct_examples() {
        // Δ̄(𝟙) = -𝟙⊗𝟙
        let d: Element<Pair<SymWord, SymWord>, Rational> = reduced_shuffle_word(&SymWord::unit());
        assert_eq!(
            d,
            Element::term(Pair(SymWord::unit(), SymWord::unit()), -Rational::one())
        );
        // Δ̄(x) = 0
        let d: Element<Pair<SymWord, SymWord>, Rational> =
            reduced_shuffle_word(&SymWord::generator(0));
        assert!(d.is_zero());
        // Δ̄(x∨y) = x⊗y + y⊗x
        let d: Element<Pair<SymWord, SymWord>, Rational> =
            reduced_shuffle_word(&SymWord::new(vec![0, 1]));
        assert_eq!(d.num_terms(), 2);
    }

    #[test]
    fn antipode_examples() {
        let unit: E = Element::basis(SymWord::unit());
        assert_eq!(antipode(&unit), unit);
        let x = gen(0);
        assert_eq!(antipode(&x), x.neg());
        let xy: E = Element::basis(SymWord::new(vec![0, 1]));
        assert_eq!(antipode(&xy), xy);
    }

    #[test]
    fn projections() {
        let xy: E = Element::basis(SymWord::new(vec![0, 1]));
        assert!(pr_v(&xy).is_zero());
        let unit: E = Element::basis(SymWord::unit());
        assert!(pr_plus(&unit).is_zero());
        assert_eq!(counit(&unit), Rational::one());
        assert_eq!(counit(&xy), Rational::zero());
    }

    #[test]
    fn sweedler_projection_lemma_degree_two() {
        // pr_sym(2) via (1/2!)·pr_V(φ(1)) ∨ pr_V(φ(2)) on φ = x∨y
        let w = SymWord::new(vec![0, 1]);
        let d: Element<Pair<SymWord, SymWord>, Rational> = shuffle_sym_word(&w);
        let mut acc: E = Element::zero();
        for (Pair(a, b), c) in d.terms() {
            if a.len() == 1 && b.len() == 1 {
                acc.add_term(a.merge(b), c.clone());
            }
        }
        let acc = scale_inv_factorial(&acc, 2);
        assert_eq!(acc, Element::basis(w));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(sym_words(3, 2).len(), 6);
        assert_eq!(ext_words(4, 2).len(), 6);
        assert_eq!(sym_words_up_to(3, 3).len(), 20);
        assert_eq!(tensor_words(2, 2, 1).len(), 9);
    }
}
