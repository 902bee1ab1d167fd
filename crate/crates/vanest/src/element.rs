//! Sparse linear combinations of basis labels.

use crate::rational::Rational;
use crate::ring::Ring;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::hash::Hash;

/// A canonical basis label of one of the graded modules in play.
///
/// Labels carry their homological degree syntactically; `grading` names the
/// module for serialized output.
pub trait Label: Clone + Ord + Eq + Hash + Debug + Display + Send + Sync + 'static {
    fn degree(&self) -> i64;
    fn grading(&self) -> String;
    fn to_json(&self) -> Value;
}

/// Basis of the scalars viewed as a complex concentrated in degree 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct UnitLabel;

impl Display for UnitLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "1")
    }
}

impl Label for UnitLabel {
    fn degree(&self) -> i64 {
        0
    }
    fn grading(&self) -> String {
        "scalar".into()
    }
    fn to_json(&self) -> Value {
        Value::Null
    }
}

/// Basis label of a tensor product of two graded modules.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Pair<A, B>(pub A, pub B);

impl<A: Display, B: Display> Display for Pair<A, B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ⊗ {}", self.0, self.1)
    }
}

impl<A: Label, B: Label> Label for Pair<A, B> {
    fn degree(&self) -> i64 {
        self.0.degree() + self.1.degree()
    }
    fn grading(&self) -> String {
        format!("{}⊗{}", self.0.grading(), self.1.grading())
    }
    fn to_json(&self) -> Value {
        json!([self.0.to_json(), self.1.to_json()])
    }
}

/// Basis label of a direct sum of two complexes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sum<A, B> {
    Left(A),
    Right(B),
}

impl<A: Display, B: Display> Display for Sum<A, B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sum::Left(a) => write!(f, "L({a})"),
            Sum::Right(b) => write!(f, "R({b})"),
        }
    }
}

impl<A: Label, B: Label> Label for Sum<A, B> {
    fn degree(&self) -> i64 {
        match self {
            Sum::Left(a) => a.degree(),
            Sum::Right(b) => b.degree(),
        }
    }
    fn grading(&self) -> String {
        match self {
            Sum::Left(a) => format!("{}⊕·", a.grading()),
            Sum::Right(b) => format!("·⊕{}", b.grading()),
        }
    }
    fn to_json(&self) -> Value {
        match self {
            Sum::Left(a) => json!({ "left": a.to_json() }),
            Sum::Right(b) => json!({ "right": b.to_json() }),
        }
    }
}

/// A finite scalar-linear combination of basis labels with no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element<L: Label, R: Ring> {
    terms: BTreeMap<L, R>,
}

impl<L: Label, R: Ring> Default for Element<L, R> {
    fn default() -> Self {
        Element::zero()
    }
}

impl<L: Label, R: Ring> Element<L, R> {
    pub fn zero() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(label: L) -> Self {
        Element::term(label, R::one())
    }

    pub fn term(label: L, coef: R) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(label, coef);
        }
        Element { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (L, R)>) -> Self {
        let mut e = Element::zero();
        for (l, c) in it {
            e.add_term(l, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&L, &R)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (L, R)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, label: &L) -> R {
        self.terms.get(label).cloned().unwrap_or_else(R::zero)
    }

    pub fn add_term(&mut self, label: L, coef: R) {
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(&label) {
            Some(c) => {
                let sum = c.add(&coef);
                if sum.is_zero() {
                    self.terms.remove(&label);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(label, coef);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Element<L, R>) {
        for (l, c) in &other.terms {
            self.add_term(l.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Element<L, R>) -> Element<L, R> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Element<L, R>) -> Element<L, R> {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Element<L, R> {
        Element {
            terms: self
                .terms
                .iter()
                .map(|(l, c)| (l.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Element<L, R> {
        let mut out = Element::zero();
        for (l, q) in &self.terms {
            out.add_term(l.clone(), q.mul(c));
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> Element<L, R> {
        if q.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self
                .terms
                .iter()
                .map(|(l, c)| (l.clone(), c.scale_rational(q)))
                .collect(),
        }
    }

    /// Linear extension of a map defined on labels.
    pub fn map<M: Label>(&self, f: impl Fn(&L) -> Element<M, R>) -> Element<M, R> {
        let mut out = Element::zero();
        for (l, c) in &self.terms {
            for (m, d) in f(l).terms {
                out.add_term(m, c.mul(&d));
            }
        }
        out
    }

    /// Relabeling along an injective label map; coefficients are untouched.
    pub fn relabel<M: Label>(&self, f: impl Fn(&L) -> M) -> Element<M, R> {
        let mut out = Element::zero();
        for (l, c) in &self.terms {
            out.add_term(f(l), c.clone());
        }
        out
    }

    pub fn tensor<M: Label>(&self, other: &Element<M, R>) -> Element<Pair<L, M>, R> {
        let mut out = Element::zero();
        for (l, c) in &self.terms {
            for (m, d) in &other.terms {
                out.add_term(Pair(l.clone(), m.clone()), c.mul(d));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let grading = self
            .terms
            .keys()
            .next()
            .map(|l| l.grading())
            .unwrap_or_else(|| "zero".into());
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(l, c)| json!([l.to_json(), c.to_json()]))
            .collect();
        json!({ "grading": grading, "terms": terms })
    }
}

impl<L: Label, R: Ring> Display for Element<L, R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·{l}")?;
        }
        Ok(())
    }
}
