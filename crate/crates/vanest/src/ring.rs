//! Ring of scalars for all complexes.
//!
//! Everything in this crate is linear over a commutative unital ring
//! containing the rationals.  The two instances used by the tool are the
//! exact rationals and the polynomial ring `Q[x1..xn]`.

use crate::polynomial::Polynomial;
use crate::rational::Rational;
use serde_json::Value;
use std::fmt::{Debug, Display};
use std::hash::Hash;

pub trait Ring: Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// The unital embedding of the rationals.
    fn from_rational(q: &Rational) -> Self;

    /// Decomposition into rational multiples of "atoms" (monic monomials for
    /// polynomials, the unit for rationals).  Used for exact linear algebra
    /// over the rationals.
    fn rational_atoms(&self) -> Vec<(Self, Rational)>;

    fn to_json(&self) -> Value;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn scale_rational(&self, q: &Rational) -> Self {
        self.mul(&Self::from_rational(q))
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_int(n))
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational::zero()
    }

    fn one() -> Self {
        Rational::one()
    }

    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn rational_atoms(&self) -> Vec<(Self, Rational)> {
        if Rational::is_zero(self) {
            Vec::new()
        } else {
            vec![(Rational::one(), self.clone())]
        }
    }

    fn to_json(&self) -> Value {
        Rational::to_json(self)
    }

    fn scale_rational(&self, q: &Rational) -> Self {
        self * q
    }
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }

    fn one() -> Self {
        Polynomial::one()
    }

    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn from_rational(q: &Rational) -> Self {
        Polynomial::constant(q.clone())
    }

    fn rational_atoms(&self) -> Vec<(Self, Rational)> {
        self.terms()
            .map(|(m, c)| (Polynomial::monomial(m.clone(), Rational::one()), c.clone()))
            .collect()
    }

    fn to_json(&self) -> Value {
        // Context-free serialization uses the minimal covering variable count;
        // the CLI re-serializes with the model's n where one is fixed.
        self.to_json(self.width())
            .expect("width covers all variables")
    }

    fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(q)
    }
}
