//! Cochain complexes, homotopy retracts, their composition, sums, tensor
//! products and the homological perturbation lemma.
//!
//! Linear maps are lazy: a map is a degree shift together with a function
//! from basis labels to elements.  All equality checks are extensional over
//! a finite verification window, so the perturbation series never has to be
//! materialized as a matrix.

use crate::element::{Element, Label, Pair, Sum};
use crate::rational::Rational;
use crate::ring::Ring;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::ops::RangeInclusive;
use std::sync::Arc;

/// A degree-typed linear map given by its action on basis labels.
pub struct LinearOp<S: Label, T: Label, R: Ring> {
    pub degree: i64,
    action: Arc<dyn Fn(&S) -> Element<T, R> + Send + Sync>,
}

impl<S: Label, T: Label, R: Ring> Clone for LinearOp<S, T, R> {
    fn clone(&self) -> Self {
        LinearOp {
            degree: self.degree,
            action: Arc::clone(&self.action),
        }
    }
}

impl<S: Label, T: Label, R: Ring> LinearOp<S, T, R> {
    pub fn new(degree: i64, f: impl Fn(&S) -> Element<T, R> + Send + Sync + 'static) -> Self {
        LinearOp {
            degree,
            action: Arc::new(f),
        }
    }

    pub fn zero(degree: i64) -> Self {
        LinearOp::new(degree, |_| Element::zero())
    }

    pub fn apply_label(&self, l: &S) -> Element<T, R> {
        (self.action)(l)
    }

    pub fn apply(&self, e: &Element<S, R>) -> Element<T, R> {
        e.map(|l| self.apply_label(l))
    }

    /// Composition `after ∘ self`.
    pub fn then<U: Label>(&self, after: &LinearOp<T, U, R>) -> LinearOp<S, U, R> {
        let first = self.clone();
        let second = after.clone();
        LinearOp::new(self.degree + after.degree, move |l| {
            second.apply(&first.apply_label(l))
        })
    }

    pub fn add(&self, other: &LinearOp<S, T, R>) -> LinearOp<S, T, R> {
        assert_eq!(self.degree, other.degree, "adding maps of different degree");
        let a = self.clone();
        let b = other.clone();
        LinearOp::new(self.degree, move |l| {
            a.apply_label(l).add(&b.apply_label(l))
        })
    }

    pub fn sub(&self, other: &LinearOp<S, T, R>) -> LinearOp<S, T, R> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinearOp<S, T, R> {
        let a = self.clone();
        LinearOp::new(self.degree, move |l| a.apply_label(l).neg())
    }

    pub fn scale_rational(&self, q: &Rational) -> LinearOp<S, T, R> {
        let a = self.clone();
        let q = q.clone();
        LinearOp::new(self.degree, move |l| a.apply_label(l).scale_rational(&q))
    }

    /// A memoizing wrapper with a sharded cache, for maps that are expensive
    /// per label and hit repeatedly across a verification window.
    pub fn memoized(&self) -> LinearOp<S, T, R> {
        use std::collections::hash_map::DefaultHasher;
        use std::collections::HashMap;
        use std::hash::Hasher;
        use std::sync::Mutex;
        let inner = self.clone();
        let shards: Arc<Vec<Mutex<HashMap<S, Element<T, R>>>>> =
            Arc::new((0..32).map(|_| Mutex::new(HashMap::new())).collect());
        LinearOp::new(self.degree, move |l: &S| {
            let mut h = DefaultHasher::new();
            l.hash(&mut h);
            let idx = (h.finish() as usize) % shards.len();
            if let Some(v) = shards[idx].lock().unwrap().get(l) {
                return v.clone();
            }
            let v = inner.apply_label(l);
            shards[idx].lock().unwrap().insert(l.clone(), v.clone());
            v
        })
    }
}

impl<L: Label, R: Ring> LinearOp<L, L, R> {
    pub fn identity() -> Self {
        LinearOp::new(0, |l: &L| Element::basis(l.clone()))
    }
}

/// A cochain complex with a finite probe window.
///
/// `basis(d)` enumerates the probe basis in degree `d`; the differential is a
/// total function on labels, so maps may leave the window freely.
pub struct Complex<L: Label, R: Ring> {
    pub name: String,
    pub degrees: RangeInclusive<i64>,
    pub differential: LinearOp<L, L, R>,
    basis: Arc<dyn Fn(i64) -> Vec<L> + Send + Sync>,
}

impl<L: Label, R: Ring> Clone for Complex<L, R> {
    fn clone(&self) -> Self {
        Complex {
            name: self.name.clone(),
            degrees: self.degrees.clone(),
            differential: self.differential.clone(),
            basis: Arc::clone(&self.basis),
        }
    }
}

impl<L: Label, R: Ring> Complex<L, R> {
    pub fn new(
        name: impl Into<String>,
        degrees: RangeInclusive<i64>,
        differential: LinearOp<L, L, R>,
        basis: impl Fn(i64) -> Vec<L> + Send + Sync + 'static,
    ) -> Self {
        assert_eq!(differential.degree, 1, "differentials have degree +1");
        Complex {
            name: name.into(),
            degrees,
            differential: differential,
            basis: Arc::new(basis),
        }
    }

    pub fn basis(&self, degree: i64) -> Vec<L> {
        if self.degrees.contains(&degree) {
            (self.basis)(degree)
        } else {
            Vec::new()
        }
    }

    pub fn window_basis(&self, window: RangeInclusive<i64>) -> Vec<L> {
        window.flat_map(|d| self.basis(d)).collect()
    }

    /// The scalars concentrated in degree zero.
    pub fn point(name: impl Into<String>) -> Complex<crate::element::UnitLabel, R> {
        Complex::new(name, 0..=0, LinearOp::zero(1), |d| {
            if d == 0 {
                vec![crate::element::UnitLabel]
            } else {
                Vec::new()
            }
        })
    }
}

// ---------------------------------------------------------------------------
// verification reports

#[derive(Clone, Debug)]
pub struct Failure {
    pub label: String,
    pub label_json: Value,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub identity: String,
    pub checked: usize,
    pub failures: Vec<Failure>,
    /// Informational checks (e.g. side conditions probed only to set flags)
    /// do not fail a report.
    pub required: bool,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn informational(mut self) -> Self {
        self.required = false;
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.identity,
            "checked": self.checked,
            "required": self.required,
            "failures": self.failures.iter().map(|f| json!({
                "label": f.label,
                "label_json": f.label_json,
                "lhs": f.lhs,
                "rhs": f.rhs,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<IdentityReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed() || !c.required)
    }

    pub fn push(&mut self, check: IdentityReport) {
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn total_checked(&self) -> usize {
        self.checks.iter().map(|c| c.checked).sum()
    }
}

/// Compares two maps extensionally on a set of labels, in parallel.
pub fn check_equal_on<L: Label, T: Label, R: Ring>(
    identity: impl Into<String>,
    labels: &[L],
    lhs: impl Fn(&L) -> Element<T, R> + Send + Sync,
    rhs: impl Fn(&L) -> Element<T, R> + Send + Sync,
) -> IdentityReport {
    let failures: Vec<Failure> = labels
        .par_iter()
        .filter_map(|l| {
            let a = lhs(l);
            let b = rhs(l);
            if a == b {
                None
            } else {
                Some(Failure {
                    label: l.to_string(),
                    label_json: l.to_json(),
                    lhs: a.to_json(),
                    rhs: b.to_json(),
                })
            }
        })
        .collect();
    IdentityReport {
        identity: identity.into(),
        checked: labels.len(),
        failures,
        required: true,
    }
}

/// Verifies d² = 0 on every basis label of the window.
pub fn check_complex<L: Label, R: Ring>(
    c: &Complex<L, R>,
    window: RangeInclusive<i64>,
) -> IdentityReport {
    let labels = c.window_basis(window);
    let d = c.differential.clone();
    check_equal_on(
        format!("d∘d = 0 on {}", c.name),
        &labels,
        move |l| d.apply(&d.apply_label(l)),
        |_| Element::zero(),
    )
}

// ---------------------------------------------------------------------------
// retracts

/// A homotopy retract (i, p, h) between a small and a big complex:
/// i and p are chain maps and h·d + d·h = id - i·p on the big side.
///
/// The flags are never trusted from construction; `verified` recomputes them
/// extensionally on a window.
pub struct Retract<C: Label, D: Label, R: Ring> {
    pub small: Complex<C, R>,
    pub big: Complex<D, R>,
    pub inclusion: LinearOp<C, D, R>,
    pub projection: LinearOp<D, C, R>,
    pub homotopy: LinearOp<D, D, R>,
    pub is_deformation: bool,
    pub is_special: bool,
}

impl<C: Label, D: Label, R: Ring> Clone for Retract<C, D, R> {
    fn clone(&self) -> Self {
        Retract {
            small: self.small.clone(),
            big: self.big.clone(),
            inclusion: self.inclusion.clone(),
            projection: self.projection.clone(),
            homotopy: self.homotopy.clone(),
            is_deformation: self.is_deformation,
            is_special: self.is_special,
        }
    }
}

impl<C: Label, D: Label, R: Ring> Retract<C, D, R> {
    pub fn new(
        small: Complex<C, R>,
        big: Complex<D, R>,
        inclusion: LinearOp<C, D, R>,
        projection: LinearOp<D, C, R>,
        homotopy: LinearOp<D, D, R>,
    ) -> Self {
        assert_eq!(inclusion.degree, 0);
        assert_eq!(projection.degree, 0);
        assert_eq!(homotopy.degree, -1);
        Retract {
            small,
            big,
            inclusion,
            projection,
            homotopy,
            is_deformation: false,
            is_special: false,
        }
    }

    /// The identity retract of a complex.
    pub fn identity(c: &Complex<D, R>) -> Retract<D, D, R> {
        Retract {
            small: c.clone(),
            big: c.clone(),
            inclusion: LinearOp::identity(),
            projection: LinearOp::identity(),
            homotopy: LinearOp::zero(-1),
            is_deformation: true,
            is_special: true,
        }
    }

    /// Checks every retract identity on the window and records the outcome
    /// in a report.  Deformation and special identities are always checked;
    /// their failures only flip the flags, they do not fail the report.
    pub fn verify(&self, window: RangeInclusive<i64>) -> (Report, bool, bool) {
        let small_basis = self.small.window_basis(window.clone());
        let big_basis = self.big.window_basis(window);
        let mut report = Report::default();

        let (d_c, d_d) = (
            self.small.differential.clone(),
            self.big.differential.clone(),
        );
        let (i, p, h) = (
            self.inclusion.clone(),
            self.projection.clone(),
            self.homotopy.clone(),
        );

        report.push(check_equal_on(
            "i is a chain map (d∘i = i∘d)",
            &small_basis,
            {
                let (i, d_d) = (i.clone(), d_d.clone());
                move |l| d_d.apply(&i.apply_label(l))
            },
            {
                let (i, d_c) = (i.clone(), d_c.clone());
                move |l| i.apply(&d_c.apply_label(l))
            },
        ));
        report.push(check_equal_on(
            "p is a chain map (d∘p = p∘d)",
            &big_basis,
            {
                let (p, d_c) = (p.clone(), d_c.clone());
                move |l| d_c.apply(&p.apply_label(l))
            },
            {
                let (p, d_d) = (p.clone(), d_d.clone());
                move |l| p.apply(&d_d.apply_label(l))
            },
        ));
        report.push(check_equal_on(
            "homotopy identity (h∘d + d∘h = id - i∘p)",
            &big_basis,
            {
                let (h, d_d) = (h.clone(), d_d.clone());
                move |l| {
                    h.apply(&d_d.apply_label(l))
                        .add(&d_d.apply(&h.apply_label(l)))
                }
            },
            {
                let (i, p) = (i.clone(), p.clone());
                move |l| Element::basis(l.clone()).sub(&i.apply(&p.apply_label(l)))
            },
        ));

        let deformation = check_equal_on(
            "p∘i = id",
            &small_basis,
            {
                let (i, p) = (i.clone(), p.clone());
                move |l| p.apply(&i.apply_label(l))
            },
            |l| Element::basis(l.clone()),
        );
        let h2 = check_equal_on(
            "h∘h = 0",
            &big_basis,
            {
                let h = h.clone();
                move |l| h.apply(&h.apply_label(l))
            },
            |_| Element::zero(),
        );
        let ph = check_equal_on(
            "p∘h = 0",
            &big_basis,
            {
                let (p, h) = (p.clone(), h.clone());
                move |l| p.apply(&h.apply_label(l))
            },
            |_| Element::zero(),
        );
        let hi = check_equal_on(
            "h∘i = 0",
            &small_basis,
            {
                let (h, i) = (h.clone(), i.clone());
                move |l| h.apply(&i.apply_label(l))
            },
            |_| Element::zero(),
        );

        let is_deformation = report.passed() && deformation.passed();
        let is_special = is_deformation && h2.passed() && ph.passed() && hi.passed();
        // side conditions are informational: they set flags and never fail
        // the core report
        report.push(deformation.informational());
        report.push(h2.informational());
        report.push(ph.informational());
        report.push(hi.informational());
        (report, is_deformation, is_special)
    }

    /// Returns the retract with flags recomputed on the window, plus the
    /// report of all checked identities.
    pub fn verified(mut self, window: RangeInclusive<i64>) -> (Self, Report) {
        let (report, deformation, special) = self.verify(window);
        self.is_deformation = deformation;
        self.is_special = special;
        (self, report)
    }

    /// Pass/fail report holding the retract to its currently set flags: the
    /// core identities are always required; the deformation and special side
    /// conditions become required when the corresponding flag is claimed.
    pub fn verify_report(&self, window: RangeInclusive<i64>) -> Report {
        let (mut report, _, _) = self.verify(window);
        for check in report.checks.iter_mut() {
            if self.is_deformation && check.identity == "p∘i = id" {
                check.required = true;
            }
            if self.is_special
                && matches!(check.identity.as_str(), "h∘h = 0" | "p∘h = 0" | "h∘i = 0")
            {
                check.required = true;
            }
        }
        report
    }

    /// The reversed retract (p, i, 0), a homotopy retract whenever this one
    /// is a deformation retract.
    pub fn reverse(&self) -> Retract<D, C, R> {
        Retract::new(
            self.big.clone(),
            self.small.clone(),
            self.projection.clone(),
            self.inclusion.clone(),
            LinearOp::zero(-1),
        )
    }
}

/// Retract identities probed on arbitrary elements instead of basis labels:
/// used to re-verify a retract on an invariant subspace spanned by the
/// probes.
pub fn verify_retract_on_elements<C: Label, D: Label, R: Ring>(
    r: &Retract<C, D, R>,
    small_probes: &[Element<C, R>],
    big_probes: &[Element<D, R>],
) -> Report {
    let mut report = Report::default();
    let (d_c, d_d) = (r.small.differential.clone(), r.big.differential.clone());
    let (i, p, h) = (
        r.inclusion.clone(),
        r.projection.clone(),
        r.homotopy.clone(),
    );

    let probe = |name: &str, pairs: Vec<(String, Element<C, R>, Element<C, R>)>| IdentityReport {
        identity: name.into(),
        checked: pairs.len(),
        failures: pairs
            .into_iter()
            .filter(|(_, a, b)| a != b)
            .map(|(label, a, b)| Failure {
                label,
                label_json: Value::Null,
                lhs: a.to_json(),
                rhs: b.to_json(),
            })
            .collect(),
        required: true,
    };

    report.push(probe(
        "i chain map on probes",
        small_probes
            .iter()
            .enumerate()
            .map(|(n, x)| {
                (
                    format!("probe {n}"),
                    p.apply(&d_d.apply(&i.apply(x))),
                    p.apply(&i.apply(&d_c.apply(x))),
                )
            })
            .collect(),
    ));
    report.push(probe(
        "p∘i = id on probes",
        small_probes
            .iter()
            .enumerate()
            .map(|(n, x)| (format!("probe {n}"), p.apply(&i.apply(x)), x.clone()))
            .collect(),
    ));
    let big_probe =
        |name: &str, pairs: Vec<(String, Element<D, R>, Element<D, R>)>| IdentityReport {
            identity: name.into(),
            checked: pairs.len(),
            failures: pairs
                .into_iter()
                .filter(|(_, a, b)| a != b)
                .map(|(label, a, b)| Failure {
                    label,
                    label_json: Value::Null,
                    lhs: a.to_json(),
                    rhs: b.to_json(),
                })
                .collect(),
            required: true,
        };
    report.push(big_probe(
        "homotopy identity on probes",
        big_probes
            .iter()
            .enumerate()
            .map(|(n, x)| {
                let lhs = h.apply(&d_d.apply(x)).add(&d_d.apply(&h.apply(x)));
                let rhs = x.sub(&i.apply(&p.apply(x)));
                (format!("probe {n}"), lhs, rhs)
            })
            .collect(),
    ));
    report
}

/// Composition of homotopy retracts: the small complex of `outer` must be
/// the big complex of `inner`.  The composite homotopy is
/// h₂ + i₂∘h₁∘p₂.
pub fn compose_retracts<C: Label, D: Label, E: Label, R: Ring>(
    outer: &Retract<D, E, R>,
    inner: &Retract<C, D, R>,
) -> Retract<C, E, R> {
    let homotopy = outer.homotopy.add(
        &outer
            .projection
            .then(&inner.homotopy)
            .then(&outer.inclusion),
    );
    Retract::new(
        inner.small.clone(),
        outer.big.clone(),
        inner.inclusion.then(&outer.inclusion),
        outer.projection.then(&inner.projection),
        homotopy,
    )
}

fn sum_complex<A: Label, B: Label, R: Ring>(
    c1: &Complex<A, R>,
    c2: &Complex<B, R>,
) -> Complex<Sum<A, B>, R> {
    let (d1, d2) = (c1.differential.clone(), c2.differential.clone());
    let degrees =
        *c1.degrees.start().min(c2.degrees.start())..=*c1.degrees.end().max(c2.degrees.end());
    let (b1, b2) = (c1.clone(), c2.clone());
    Complex::new(
        format!("{} ⊕ {}", c1.name, c2.name),
        degrees,
        LinearOp::new(1, move |l: &Sum<A, B>| match l {
            Sum::Left(a) => d1.apply_label(a).relabel(|x| Sum::Left(x.clone())),
            Sum::Right(b) => d2.apply_label(b).relabel(|x| Sum::Right(x.clone())),
        }),
        move |d| {
            let mut out: Vec<Sum<A, B>> = b1.basis(d).into_iter().map(Sum::Left).collect();
            out.extend(b2.basis(d).into_iter().map(Sum::Right));
            out
        },
    )
}

/// Componentwise direct sum of homotopy retracts.
pub fn direct_sum<C1: Label, D1: Label, C2: Label, D2: Label, R: Ring>(
    r1: &Retract<C1, D1, R>,
    r2: &Retract<C2, D2, R>,
) -> Retract<Sum<C1, C2>, Sum<D1, D2>, R> {
    fn componentwise<A1: Label, B1: Label, A2: Label, B2: Label, R: Ring>(
        f: &LinearOp<A1, B1, R>,
        g: &LinearOp<A2, B2, R>,
    ) -> LinearOp<Sum<A1, A2>, Sum<B1, B2>, R> {
        let (f, g) = (f.clone(), g.clone());
        LinearOp::new(f.degree, move |l: &Sum<A1, A2>| match l {
            Sum::Left(a) => f.apply_label(a).relabel(|x| Sum::Left(x.clone())),
            Sum::Right(b) => g.apply_label(b).relabel(|x| Sum::Right(x.clone())),
        })
    }
    Retract::new(
        sum_complex(&r1.small, &r2.small),
        sum_complex(&r1.big, &r2.big),
        componentwise(&r1.inclusion, &r2.inclusion),
        componentwise(&r1.projection, &r2.projection),
        componentwise(&r1.homotopy, &r2.homotopy),
    )
}

fn tensor_complex<A: Label, B: Label, R: Ring>(
    c1: &Complex<A, R>,
    c2: &Complex<B, R>,
) -> Complex<Pair<A, B>, R> {
    let (d1, d2) = (c1.differential.clone(), c2.differential.clone());
    let degrees = c1.degrees.start() + c2.degrees.start()..=c1.degrees.end() + c2.degrees.end();
    let (b1, b2) = (c1.clone(), c2.clone());
    let range1 = c1.degrees.clone();
    Complex::new(
        format!("{} ⊗ {}", c1.name, c2.name),
        degrees,
        LinearOp::new(1, move |l: &Pair<A, B>| {
            let Pair(a, b) = l;
            let mut out = d1.apply_label(a).tensor(&Element::basis(b.clone()));
            let sign = if a.degree() % 2 == 0 {
                Rational::one()
            } else {
                -Rational::one()
            };
            out.add_assign(
                &Element::basis(a.clone())
                    .tensor(&d2.apply_label(b))
                    .scale_rational(&sign),
            );
            out
        }),
        move |d| {
            let mut out = Vec::new();
            for d1 in range1.clone() {
                for a in b1.basis(d1) {
                    for b in b2.basis(d - d1) {
                        out.push(Pair(a.clone(), b));
                    }
                }
            }
            out
        },
    )
}

/// Tensor product of homotopy retracts with the one-sided homotopy
/// h⊗id + (-1)^deg (i∘p)⊗k.
pub fn tensor_retract<C1: Label, D1: Label, C2: Label, D2: Label, R: Ring>(
    r1: &Retract<C1, D1, R>,
    r2: &Retract<C2, D2, R>,
) -> Retract<Pair<C1, C2>, Pair<D1, D2>, R> {
    fn factorwise<A1: Label, B1: Label, A2: Label, B2: Label, R: Ring>(
        f: &LinearOp<A1, B1, R>,
        g: &LinearOp<A2, B2, R>,
    ) -> LinearOp<Pair<A1, A2>, Pair<B1, B2>, R> {
        let (f, g) = (f.clone(), g.clone());
        LinearOp::new(f.degree + g.degree, move |l: &Pair<A1, A2>| {
            f.apply_label(&l.0).tensor(&g.apply_label(&l.1))
        })
    }
    let h1 = r1.homotopy.clone();
    let ip1 = r1.projection.then(&r1.inclusion);
    let k2 = r2.homotopy.clone();
    let homotopy = LinearOp::new(-1, move |l: &Pair<D1, D2>| {
        let Pair(x, y) = l;
        let mut out = h1.apply_label(x).tensor(&Element::basis(y.clone()));
        let sign = if x.degree() % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        out.add_assign(
            &ip1.apply_label(x)
                .tensor(&k2.apply_label(y))
                .scale_rational(&sign),
        );
        out
    });
    Retract::new(
        tensor_complex(&r1.small, &r2.small),
        tensor_complex(&r1.big, &r2.big),
        factorwise(&r1.inclusion, &r2.inclusion),
        factorwise(&r1.projection, &r2.projection),
        homotopy,
    )
}

/// Conjugates the big side of a retract by an isomorphism of complexes.
pub fn relabel_big<C: Label, D: Label, E: Label, R: Ring>(
    r: &Retract<C, D, R>,
    new_big: Complex<E, R>,
    iso: LinearOp<D, E, R>,
    iso_inv: LinearOp<E, D, R>,
) -> Retract<C, E, R> {
    Retract::new(
        r.small.clone(),
        new_big,
        r.inclusion.then(&iso),
        iso_inv.then(&r.projection),
        iso_inv.then(&r.homotopy).then(&iso),
    )
}

/// Conjugates the small side of a retract by an isomorphism of complexes.
pub fn relabel_small<C: Label, D: Label, E: Label, R: Ring>(
    r: &Retract<C, D, R>,
    new_small: Complex<E, R>,
    iso: LinearOp<C, E, R>,
    iso_inv: LinearOp<E, C, R>,
) -> Retract<E, D, R> {
    Retract::new(
        new_small,
        r.big.clone(),
        iso_inv.then(&r.inclusion),
        r.projection.then(&iso),
        r.homotopy.clone(),
    )
}

// ---------------------------------------------------------------------------
// perturbation

/// A perturbation b of the big differential: (d + b)² = 0, with (b∘h) locally
/// nilpotent within the stated bound.
pub struct Perturbation<D: Label, R: Ring> {
    pub map: LinearOp<D, D, R>,
    pub nilpotency_bound: usize,
}

impl<D: Label, R: Ring> Clone for Perturbation<D, R> {
    fn clone(&self) -> Self {
        Perturbation {
            map: self.map.clone(),
            nilpotency_bound: self.nilpotency_bound,
        }
    }
}

impl<D: Label, R: Ring> Perturbation<D, R> {
    pub fn new(map: LinearOp<D, D, R>, nilpotency_bound: usize) -> Self {
        assert_eq!(map.degree, 1);
        Perturbation {
            map,
            nilpotency_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesDiverged {
    pub bound: usize,
}

impl std::fmt::Display for SeriesDiverged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "geometric series did not terminate within the nilpotency bound {}",
            self.bound
        )
    }
}

impl std::error::Error for SeriesDiverged {}

/// (id + op)⁻¹ x = Σ (-1)ⁿ opⁿ(x) for a locally nilpotent degree-0 composite
/// such as b∘h.  Terminates when a power annihilates the argument; errors if
/// the bound is exceeded first.
pub fn geometric_inverse<D: Label, R: Ring>(
    op: &LinearOp<D, D, R>,
    x: &Element<D, R>,
    bound: usize,
) -> Result<Element<D, R>, SeriesDiverged> {
    assert_eq!(op.degree, 0, "geometric series needs a degree-0 operator");
    let mut acc = x.clone();
    let mut term = x.clone();
    let mut sign = true;
    for _ in 0..bound {
        term = op.apply(&term);
        if term.is_zero() {
            return Ok(acc);
        }
        sign = !sign;
        if sign {
            acc.add_assign(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    Err(SeriesDiverged { bound })
}

/// The homological perturbation lemma.  Given a retract and a perturbation b
/// of the big differential, produces the perturbed retract with
///
///   d_C' = d_C + p(id + bh)⁻¹b i,   I = (id + hb)⁻¹ i,
///   P = p(id + bh)⁻¹,               H = (id + hb)⁻¹ h.
///
/// The series are evaluated pointwise; exceeding the nilpotency bound is a
/// contract violation and panics.
pub fn perturb<C: Label, D: Label, R: Ring>(
    r: &Retract<C, D, R>,
    b: &Perturbation<D, R>,
) -> Retract<C, D, R> {
    let bound = b.nilpotency_bound;
    let bh = r.homotopy.then(&b.map); // b∘h
    let hb = b.map.then(&r.homotopy); // h∘b

    let expand_bh = {
        let bh = bh.clone();
        move |x: &Element<D, R>| {
            geometric_inverse(&bh, x, bound).expect("perturbation series (id+bh)⁻¹ diverged")
        }
    };
    let expand_hb = {
        let hb = hb.clone();
        move |x: &Element<D, R>| {
            geometric_inverse(&hb, x, bound).expect("perturbation series (id+hb)⁻¹ diverged")
        }
    };

    let new_inclusion = {
        let i = r.inclusion.clone();
        let expand = expand_hb.clone();
        LinearOp::new(0, move |l: &C| expand(&i.apply_label(l)))
    };
    let new_projection = {
        let p = r.projection.clone();
        let expand = expand_bh.clone();
        LinearOp::new(0, move |l: &D| p.apply(&expand(&Element::basis(l.clone()))))
    };
    let new_homotopy = {
        let h = r.homotopy.clone();
        let expand = expand_hb.clone();
        LinearOp::new(-1, move |l: &D| expand(&h.apply_label(l)))
    };
    let new_small_diff = {
        let d_c = r.small.differential.clone();
        let i = r.inclusion.clone();
        let p = r.projection.clone();
        let bmap = b.map.clone();
        let expand = expand_bh.clone();
        LinearOp::new(1, move |l: &C| {
            let bi = bmap.apply(&i.apply_label(l));
            d_c.apply_label(l).add(&p.apply(&expand(&bi)))
        })
    };
    let new_big_diff = r.big.differential.add(&b.map);

    let small = Complex {
        name: format!("{} (perturbed)", r.small.name),
        degrees: r.small.degrees.clone(),
        differential: new_small_diff,
        basis: Arc::clone(&r.small.basis),
    };
    let big = Complex {
        name: format!("{} (perturbed)", r.big.name),
        degrees: r.big.degrees.clone(),
        differential: new_big_diff,
        basis: Arc::clone(&r.big.basis),
    };
    Retract::new(small, big, new_inclusion, new_projection, new_homotopy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::UnitLabel;
    use crate::graded::{sym_words, SymWord};
    use crate::rational::Rational;

    // A toy two-term complex 0 -> R -> R -> 0 with d = id between degrees 0
    // and 1, realized on SymWord labels of a rank-1 module: 𝟙 in degree 0,
    // e1 in degree 1.
    fn toy_complex() -> Complex<SymWord, Rational> {
        Complex::new(
            "toy",
            0..=1,
            LinearOp::new(1, |w: &SymWord| {
                if w.is_empty() {
                    Element::basis(SymWord::generator(0))
                } else {
                    Element::zero()
                }
            }),
            |d| match d {
                0 => vec![SymWord::unit()],
                1 => sym_words(1, 1),
                _ => vec![],
            },
        )
    }

    #[test]
    fn toy_complex_is_a_complex() {
        let rep = check_complex(&toy_complex(), 0..=1);
        assert!(rep.passed(), "{:?}", rep);
    }

    #[test]
    fn zero_retract_of_contractible_complex() {
        // The toy complex is contractible: retract onto the zero complex
        // (concentrated nowhere) is modelled with the point complex and
        // i = 0, p = 0, h(e1) = 𝟙.
        let small: Complex<UnitLabel, Rational> =
            Complex::new("zero", 0..=0, LinearOp::zero(1), |_| vec![]);
        let r = Retract::new(
            small,
            toy_complex(),
            LinearOp::zero(0),
            LinearOp::zero(0),
            LinearOp::new(-1, |w: &SymWord| {
                if w.is_empty() {
                    Element::zero()
                } else {
                    Element::basis(SymWord::unit())
                }
            }),
        );
        let (r, report) = r.verified(0..=1);
        assert!(report.passed(), "{}", report.to_json());
        assert!(r.is_deformation); // vacuously: empty small basis
    }

    #[test]
    fn geometric_inverse_terminates_and_errors() {
        let nilpotent = LinearOp::new(0, |w: &SymWord| {
            if w.is_empty() {
                Element::zero()
            } else {
                Element::basis(SymWord::new(w.letters()[1..].to_vec()))
            }
        });
        let x = Element::basis(SymWord::new(vec![0, 0]));
        // id - op + op² applied: e1∨e1 - e1 + 𝟙
        let y = geometric_inverse(&nilpotent, &x, 10).unwrap();
        assert_eq!(y.num_terms(), 3);
        // op = id never terminates
        let id = LinearOp::<SymWord, SymWord, Rational>::identity();
        assert_eq!(
            geometric_inverse(&id, &x, 1),
            Err(SeriesDiverged { bound: 1 })
        );
        // op = 0 returns the argument untouched
        let zero = LinearOp::zero(0);
        assert_eq!(geometric_inverse(&zero, &x, 1).unwrap(), x);
    }

    #[test]
    fn perturb_by_zero_is_identity_on_retracts() {
        let c = toy_complex();
        let id = Retract::<SymWord, SymWord, Rational>::identity(&c);
        let b = Perturbation::new(LinearOp::zero(1), 3);
        let r = perturb(&id, &b);
        for d in 0..=1 {
            for l in c.basis(d) {
                assert_eq!(r.inclusion.apply_label(&l), Element::basis(l.clone()));
                assert_eq!(r.projection.apply_label(&l), Element::basis(l.clone()));
                assert!(r.homotopy.apply_label(&l).is_zero());
                assert_eq!(
                    r.small.differential.apply_label(&l),
                    c.differential.apply_label(&l)
                );
            }
        }
    }

    #[test]
    fn compose_with_identity_is_neutral() {
        let c = toy_complex();
        let small: Complex<UnitLabel, Rational> =
            Complex::new("zero", 0..=0, LinearOp::zero(1), |_| vec![]);
        let r = Retract::new(
            small,
            c.clone(),
            LinearOp::zero(0),
            LinearOp::zero(0),
            LinearOp::new(-1, |w: &SymWord| {
                if w.is_empty() {
                    Element::zero()
                } else {
                    Element::basis(SymWord::unit())
                }
            }),
        );
        let id = Retract::<SymWord, SymWord, Rational>::identity(&c);
        let composed = compose_retracts(&id, &r);
        for d in 0..=1 {
            for l in c.basis(d) {
                assert_eq!(
                    composed.homotopy.apply_label(&l),
                    r.homotopy.apply_label(&l)
                );
            }
        }
        let (_, report) = composed.verified(0..=1);
        assert!(report.passed());
    }
}
