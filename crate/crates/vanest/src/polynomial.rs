//! Sparse multivariate polynomials over the exact rationals.
//!
//! Variables form one countable pool `x1, x2, ...`; a polynomial mentioning
//! only variables up to `xn` lives in every ring with at least `n` variables,
//! so the embeddings `Q[x1..xn] ⊆ Q[x1..xm]` are implicit.  Explicit variable
//! counts are enforced at the JSON boundary, where the wire format carries
//! `n`.

use crate::rational::Rational;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector with trailing zeros trimmed.
///
/// With the trimming invariant the derived `Ord` on the underlying `Vec`
/// coincides with lexicographic order on dense exponent vectors, which is the
/// canonical term order everywhere in this crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    /// xi for a zero-based variable index.
    pub fn var(i: usize) -> Self {
        let mut exps = vec![0; i + 1];
        exps[i] = 1;
        Monomial(exps)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of variables needed to express this monomial.
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let mut exps = vec![0u32; len];
        for (i, e) in self.0.iter().enumerate() {
            exps[i] += e;
        }
        for (i, e) in other.0.iter().enumerate() {
            exps[i] += e;
        }
        Monomial(exps)
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariant: no explicitly stored zero coefficients; terms are kept in the
/// canonical lexicographic order by the `BTreeMap`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        Polynomial { terms }
    }

    /// The variable xi (zero-based index).
    pub fn var(i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(i), Rational::one());
        Polynomial { terms }
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Smallest variable count covering every mentioned variable.
    pub fn width(&self) -> usize {
        self.terms.keys().map(|m| m.width()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, q)| (m.clone(), q * c)).collect(),
        }
    }

    /// Exact partial derivative with respect to xi (zero-based).
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(
                Monomial::from_exponents(exps),
                c * &Rational::from_int(e as i64),
            );
        }
        out
    }

    /// Exact evaluation.  The point must cover every mentioned variable.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, String> {
        if self.width() > point.len() {
            return Err(format!(
                "point of length {} cannot evaluate a polynomial in {} variables",
                point.len(),
                self.width()
            ));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = &t * &point[i];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Every monomial has total degree at least `t` in the variables of
    /// `vars`.  This is exact membership in the `t`-th power of the monomial
    /// ideal generated by those variables.
    pub fn in_ideal_power(&self, vars: &[usize], t: u32) -> bool {
        self.terms
            .keys()
            .all(|m| vars.iter().map(|&i| m.exponent(i)).sum::<u32>() >= t)
    }

    /// JSON with an explicit variable count; errors if the polynomial
    /// mentions variables beyond `n`.
    pub fn to_json(&self, n: usize) -> Result<Value, String> {
        if self.width() > n {
            return Err(format!(
                "polynomial mentions {} variables, but n = {}",
                self.width(),
                n
            ));
        }
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exp = m.exponents().to_vec();
                exp.resize(n, 0);
                json!({ "exp": exp, "coef": c.to_json() })
            })
            .collect();
        Ok(json!({ "n": n, "terms": terms }))
    }

    pub fn from_json(v: &Value) -> Result<(Polynomial, usize), String> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or("polynomial JSON needs an integer field \"n\"")? as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or("polynomial JSON needs an array field \"terms\"")?;
        let mut p = Polynomial::zero();
        for t in terms {
            let exp = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or("term needs an \"exp\" array")?;
            if exp.len() != n {
                return Err(format!(
                    "exponent vector of length {} but n = {n}",
                    exp.len()
                ));
            }
            let exps: Vec<u32> = exp
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|x| x as u32)
                        .ok_or_else(|| "non-negative integer exponent expected".to_string())
                })
                .collect::<Result<_, _>>()?;
            let coef = Rational::from_json(t.get("coef").ok_or("term needs a \"coef\"")?)?;
            p.add_term(Monomial::from_exponents(exps), coef);
        }
        Ok((p, n))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.total_degree() == 0 {
                write!(f, "{c}")?;
            } else {
                if !c.is_one() {
                    write!(f, "{c}·")?;
                }
                let mut firstvar = true;
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !firstvar {
                        write!(f, "*")?;
                    }
                    firstvar = false;
                    if e == 1 {
                        write!(f, "x{}", i + 1)?;
                    } else {
                        write!(f, "x{}^{}", i + 1, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i)
    }

    #[test]
    fn binomial_identity() {
        // (x1+1)(x1-1) = x1^2 - 1
        let p = &(&x(0) + &Polynomial::one()) * &(&x(0) - &Polynomial::one());
        let expected = &(&x(0) * &x(0)) - &Polynomial::one();
        assert_eq!(p, expected);
    }

    #[test]
    fn mul_by_one_and_exponent_addition() {
        let p = &(&x(0) * &x(1)) + &Polynomial::constant(Rational::new(1, 2));
        assert_eq!(&p * &Polynomial::one(), p);
        assert_eq!(&(&x(0) * &x(1)) * &x(1), &x(0) * &(&x(1) * &x(1)));
    }

    #[test]
    fn partial_derivatives() {
        // d/dx1 (x1^2 x2) = 2 x1 x2
        let p = &(&x(0) * &x(0)) * &x(1);
        assert_eq!(p.partial(0), (&x(0) * &x(1)).scale(&Rational::from_int(2)));
        // d/dx2 (x1^2) = 0
        assert!((&x(0) * &x(0)).partial(1).is_zero());
        // index beyond any mentioned variable: derivative of a constant in it
        assert!(p.partial(7).is_zero());
    }

    #[test]
    fn eval_examples() {
        let p = &x(0) * &x(0);
        assert_eq!(
            p.eval(&[Rational::from_int(3)]).unwrap(),
            Rational::from_int(9)
        );
        let c = Polynomial::constant(Rational::from_int(5));
        assert_eq!(
            c.eval(&[Rational::from_int(42)]).unwrap(),
            Rational::from_int(5)
        );
        assert_eq!(c.eval(&[]).unwrap(), Rational::from_int(5));
        let s = &x(0) + &x(1);
        assert_eq!(
            s.eval(&[Rational::new(1, 2), Rational::new(1, 3)]).unwrap(),
            Rational::new(5, 6)
        );
        assert!(s.eval(&[Rational::one()]).is_err());
    }

    #[test]
    fn json_round_trip_canonical() {
        let p = &(&x(0) * &x(0)) - &x(1).scale(&Rational::new(2, 3));
        let j = p.to_json(2).unwrap();
        let (q, n) = Polynomial::from_json(&j).unwrap();
        assert_eq!(p, q);
        assert_eq!(n, 2);
        assert!(p.to_json(1).is_err());
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            serde_json::to_string(&p.to_json(2).unwrap()).unwrap()
        );
    }

    #[test]
    fn ideal_membership() {
        // x2^2 + x1 x2 is in (x2)^1 but not (x2)^2
        let p = &(&x(1) * &x(1)) + &(&x(0) * &x(1));
        assert!(p.in_ideal_power(&[1], 1));
        assert!(!p.in_ideal_power(&[1], 2));
    }
}
