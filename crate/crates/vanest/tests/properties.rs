//! Property-based checks for the algebraic invariants that are naturally
//! randomized: ring axioms, the Leibniz rule, evaluation, coproduct laws and
//! the van Est normalization.

use proptest::prelude::*;
use vanest::coalgebra::{cup, delta_ca_word};
use vanest::element::{Element, Pair};
use vanest::graded::{
    antipode, counit, ext_mul, pr_plus, reduced_shuffle_word, shuffle_ext_word, shuffle_sym_word,
    sym_mul, ExtWord, SymWord, TensorWord,
};
use vanest::polynomial::{Monomial, Polynomial};
use vanest::rational::Rational;
use vanest::van_est::{van_est, van_est_inverse};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

fn arb_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), arb_rational()), 0..5).prop_map(
        |terms| {
            terms
                .into_iter()
                .fold(Polynomial::zero(), |acc, (exps, c)| {
                    &acc + &Polynomial::monomial(Monomial::from_exponents(exps), c)
                })
        },
    )
}

fn arb_sym_word() -> impl Strategy<Value = SymWord> {
    prop::collection::vec(0u32..4, 0..5).prop_map(SymWord::new)
}

fn arb_ext_word() -> impl Strategy<Value = ExtWord> {
    prop::collection::btree_set(0u32..5, 0..5).prop_map(|s| ExtWord::new(s.into_iter().collect()))
}

fn arb_tensor_word() -> impl Strategy<Value = TensorWord> {
    prop::collection::vec(prop::collection::vec(0u32..3, 0..3), 0..4)
        .prop_map(|slots| TensorWord::new(slots.into_iter().map(SymWord::new).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_ring_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn polynomial_ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn partial_derivative_leibniz(a in arb_poly(), b in arb_poly(), i in 0usize..3) {
        let lhs = (&a * &b).partial(i);
        let rhs = &(&a.partial(i) * &b) + &(&a * &b.partial(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partials_commute(p in arb_poly(), i in 0usize..3, j in 0usize..3) {
        prop_assert_eq!(p.partial(i).partial(j), p.partial(j).partial(i));
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        a in arb_poly(),
        b in arb_poly(),
        x in arb_rational(),
        y in arb_rational(),
        z in arb_rational(),
    ) {
        let point = [x, y, z];
        let ea = a.eval(&point).unwrap();
        let eb = b.eval(&point).unwrap();
        prop_assert_eq!((&a * &b).eval(&point).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).eval(&point).unwrap(), &ea + &eb);
    }

    #[test]
    fn shuffle_coproduct_is_an_algebra_morphism(a in arb_sym_word(), b in arb_sym_word()) {
        let lhs = shuffle_sym_word::<Rational>(&a.merge(&b));
        let mut rhs = Element::zero();
        for (Pair(a1, a2), c1) in shuffle_sym_word::<Rational>(&a).terms() {
            for (Pair(b1, b2), c2) in shuffle_sym_word::<Rational>(&b).terms() {
                rhs.add_term(Pair(a1.merge(b1), a2.merge(b2)), c1 * c2);
            }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduced_coproduct_is_annihilated_by_positive_projections(w in arb_sym_word()) {
        // pr₊ ⊗ pr₊ of Δ_sh and of Δ̄_sh agree
        let full: Element<Pair<SymWord, SymWord>, Rational> = shuffle_sym_word(&w);
        let reduced = reduced_shuffle_word::<Rational>(&w);
        let restrict = |e: &Element<Pair<SymWord, SymWord>, Rational>| {
            Element::from_terms(
                e.terms()
                    .filter(|(Pair(a, b), _)| !a.is_empty() && !b.is_empty())
                    .map(|(l, c)| (l.clone(), c.clone())),
            )
        };
        prop_assert_eq!(restrict(&full), restrict(&reduced));
    }

    #[test]
    fn antipode_is_an_involution_and_counit_is_grouplike(w in arb_sym_word()) {
        let e: Element<SymWord, Rational> = Element::basis(w.clone());
        prop_assert_eq!(antipode(&antipode(&e)), e.clone());
        let eps = counit(&e);
        prop_assert_eq!(eps.is_zero(), !w.is_empty());
        prop_assert!(pr_plus(&e).is_zero() == w.is_empty());
    }

    #[test]
    fn wedge_is_graded_commutative(a in arb_ext_word(), b in arb_ext_word()) {
        let ea: Element<ExtWord, Rational> = Element::basis(a.clone());
        let eb: Element<ExtWord, Rational> = Element::basis(b.clone());
        let sign = if (a.len() * b.len()) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        prop_assert_eq!(ext_mul(&ea, &eb), ext_mul(&eb, &ea).scale_rational(&sign));
    }

    #[test]
    fn coalgebra_differential_is_a_differential(w in arb_tensor_word()) {
        let once = delta_ca_word::<Rational>(&w);
        let mut twice = Element::zero();
        for (t, c) in once.terms() {
            twice.add_assign(&delta_ca_word::<Rational>(t).scale_rational(c));
        }
        prop_assert!(twice.is_zero());
    }

    #[test]
    fn cup_leibniz(x in arb_tensor_word(), y in arb_tensor_word()) {
        let lhs = delta_ca_word::<Rational>(&x.concat(&y));
        let ex: Element<TensorWord, Rational> = Element::basis(x.clone());
        let ey = Element::basis(y.clone());
        let mut rhs = cup(&delta_ca_word::<Rational>(&x), &ey);
        let sign = if x.len() % 2 == 0 { Rational::one() } else { -Rational::one() };
        rhs.add_assign(&cup(&ex, &delta_ca_word::<Rational>(&y)).scale_rational(&sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn van_est_splits_the_integration(xi in prop::collection::vec((arb_ext_word(), arb_rational()), 0..4)) {
        // VE ∘ VE⁻¹ = id on arbitrary exterior elements
        let e: Element<ExtWord, Rational> = Element::from_terms(xi);
        prop_assert_eq!(van_est(&van_est_inverse(&e)), e);
    }

    #[test]
    fn signed_shuffle_counit(w in arb_ext_word()) {
        let d: Element<Pair<ExtWord, ExtWord>, Rational> = shuffle_ext_word(&w);
        let mut left = Element::zero();
        for (Pair(a, b), c) in d.terms() {
            if a.is_empty() {
                left.add_term(b.clone(), c.clone());
            }
        }
        prop_assert_eq!(left, Element::basis(w));
    }

    #[test]
    fn sym_product_is_commutative_and_unital(a in arb_sym_word(), b in arb_sym_word()) {
        let ea: Element<SymWord, Rational> = Element::basis(a);
        let eb = Element::basis(b);
        prop_assert_eq!(sym_mul(&ea, &eb), sym_mul(&eb, &ea));
        let unit = Element::basis(SymWord::unit());
        prop_assert_eq!(sym_mul(&unit, &ea), ea);
    }
}
