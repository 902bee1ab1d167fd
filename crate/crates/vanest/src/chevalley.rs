//! The Chevalley-Eilenberg complex of an abelian Lie coalgebra with Lie
//! comodule coefficients, together with the contracting homotopies of the
//! polynomial Poincaré lemma and the split retract for a complemented
//! submodule.

use crate::coalgebra::Comodule;
use crate::element::{Element, Label, Pair, UnitLabel};
use crate::graded::{ext_word_mul, ext_words, sym_words_up_to, ExtWord, SymWord};
use crate::homotopy::{
    check_equal_on, relabel_big, relabel_small, tensor_retract, Complex, LinearOp, Report, Retract,
};
use crate::rational::Rational;
use crate::ring::Ring;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Basis label of `M ⊗ Λ^ℓ V`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CeWord<M: Label> {
    pub coef: M,
    pub ext: ExtWord,
}

impl<M: Label> CeWord<M> {
    pub fn new(coef: M, ext: ExtWord) -> Self {
        CeWord { coef, ext }
    }
}

impl<M: Label> fmt::Display for CeWord<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.coef, self.ext)
    }
}

impl<M: Label> Label for CeWord<M> {
    fn degree(&self) -> i64 {
        self.ext.degree()
    }
    fn grading(&self) -> String {
        format!("ce({})", self.coef.grading())
    }
    fn to_json(&self) -> Value {
        json!({ "coef": self.coef.to_json(), "ext": self.ext.to_json() })
    }
}

/// Antisymmetric degree read off the label.
pub fn ext_degree<M: Label>(w: &CeWord<M>) -> usize {
    w.ext.len()
}

/// Symmetric degree for regular coefficients, read off the label.
pub fn sym_degree(w: &CeWord<SymWord>) -> usize {
    w.coef.len()
}

// ---------------------------------------------------------------------------
// Lie coactions

/// A right Lie coaction ρ: M → M ⊗ V with a finite probe basis and a total
/// coaction function.  The square must land in M ⊗ Sym² V, i.e. be symmetric
/// in the two V-slots (verified on the window).
pub struct LieCoaction<M: Label, R: Ring> {
    pub dim: u32,
    pub basis: Vec<M>,
    table: Arc<dyn Fn(&M) -> Element<Pair<M, SymWord>, R> + Send + Sync>,
}

impl<M: Label, R: Ring> Clone for LieCoaction<M, R> {
    fn clone(&self) -> Self {
        LieCoaction {
            dim: self.dim,
            basis: self.basis.clone(),
            table: Arc::clone(&self.table),
        }
    }
}

impl<M: Label, R: Ring> LieCoaction<M, R> {
    /// Builds a Lie coaction from a finite table and verifies the symmetry
    /// of its square on every basis label.  The V-factor is stored as a
    /// one-letter word.
    pub fn new(
        dim: u32,
        basis: Vec<M>,
        table: BTreeMap<M, Element<Pair<M, SymWord>, R>>,
    ) -> Result<Self, Report> {
        LieCoaction::new_lazy(dim, basis, move |m: &M| {
            table
                .get(m)
                .cloned()
                .unwrap_or_else(|| panic!("Lie coaction table has no entry for {m}"))
        })
    }

    /// Builds a Lie coaction from a total function, verified on the window.
    pub fn new_lazy(
        dim: u32,
        basis: Vec<M>,
        table: impl Fn(&M) -> Element<Pair<M, SymWord>, R> + Send + Sync + 'static,
    ) -> Result<Self, Report> {
        let c = LieCoaction {
            dim,
            basis,
            table: Arc::new(table),
        };
        let report = c.verify_axiom();
        if report.passed() {
            Ok(c)
        } else {
            Err(report)
        }
    }

    pub fn coaction(&self, m: &M) -> Element<Pair<M, SymWord>, R> {
        (self.table)(m)
    }

    /// (ρ ⊗ id) ∘ ρ is symmetric in the two V-slots.
    pub fn verify_axiom(&self) -> Report {
        let mut report = Report::default();
        let this = self.clone();
        report.push(check_equal_on(
            "Lie coaction square lands in M ⊗ Sym²V",
            &self.basis,
            {
                let this = this.clone();
                move |m| this.square(m)
            },
            {
                let this = this.clone();
                move |m| {
                    this.square(m).relabel(|Pair(m0, Pair(v1, v2))| {
                        Pair(m0.clone(), Pair(v2.clone(), v1.clone()))
                    })
                }
            },
        ));
        report
    }

    fn square(&self, m: &M) -> Element<Pair<M, Pair<SymWord, SymWord>>, R> {
        self.coaction(m).map(|Pair(m1, v1)| {
            self.coaction(m1)
                .relabel(|Pair(m2, v2)| Pair(m2.clone(), Pair(v1.clone(), v2.clone())))
        })
    }

    /// Iterated coaction with the V-letters collected symmetrically:
    /// ρ^r: M → M ⊗ Sym^r V.
    pub fn power(&self, m: &M, r: usize) -> Element<Pair<M, SymWord>, R> {
        let mut acc: Element<Pair<M, SymWord>, R> =
            Element::basis(Pair(m.clone(), SymWord::unit()));
        for _ in 0..r {
            acc = acc.map(|Pair(m0, w)| {
                self.coaction(m0)
                    .relabel(|Pair(m1, v)| Pair(m1.clone(), w.merge(v)))
            });
        }
        acc
    }
}

/// The infinitesimal Lie coaction of a comodule: ρ(m) = -m₍₀₎ ⊗ pr_V(m₍₋₁₎).
pub fn lie_coaction_from_comodule<M: Label, R: Ring>(
    com: &Comodule<M, R>,
) -> Result<LieCoaction<M, R>, Report> {
    let inner = com.clone();
    LieCoaction::new_lazy(com.dim, com.basis.clone(), move |m: &M| {
        let mut img = Element::zero();
        for (Pair(s, m0), c) in inner.coaction(m).terms() {
            if s.len() == 1 {
                img.add_term(Pair(m0.clone(), s.clone()), c.neg());
            }
        }
        img
    })
}

// ---------------------------------------------------------------------------
// the differential and the homotopies

/// ∂_M(m ⊗ ξ) = -m₍₀₎ ⊗ (m₍₁₎ ∧ ξ) for a right Lie coaction ρ.
pub fn partial_m<M: Label, R: Ring>(rho: &LieCoaction<M, R>) -> LinearOp<CeWord<M>, CeWord<M>, R> {
    let rho = rho.clone();
    LinearOp::new(1, move |w: &CeWord<M>| {
        let mut out = Element::zero();
        for (Pair(m0, v), c) in rho.coaction(&w.coef).terms() {
            let letter = ExtWord::generator(v.letters()[0]);
            if let Some((ext, sign)) = ext_word_mul(&letter, &w.ext) {
                let c = if sign < 0 { c.clone() } else { c.neg() };
                out.add_term(CeWord::new(m0.clone(), ext), c);
            }
        }
        out
    })
}

/// The regular-coefficient differential on Sym V ⊗ Λ V, specified on
/// generators by ∂(x⊗1) = 1⊗x and ∂(1⊗x) = 0.
pub fn partial_sym<R: Ring>() -> LinearOp<CeWord<SymWord>, CeWord<SymWord>, R> {
    LinearOp::new(1, |w: &CeWord<SymWord>| {
        let mut out = Element::zero();
        for pos in 0..w.coef.len() {
            let letter = w.coef.letters()[pos];
            if let Some((ext, sign)) = ext_word_mul(&ExtWord::generator(letter), &w.ext) {
                let c = if sign < 0 { R::one().neg() } else { R::one() };
                out.add_term(CeWord::new(w.coef.without(pos), ext), c);
            }
        }
        out
    })
}

/// The degree -1 derivation with ∂*(x⊗1) = 0 and ∂*(1⊗x) = x⊗1; explicitly
/// the alternating sum moving one exterior letter into the symmetric slot.
pub fn partial_star<R: Ring>() -> LinearOp<CeWord<SymWord>, CeWord<SymWord>, R> {
    LinearOp::new(-1, |w: &CeWord<SymWord>| {
        let mut out = Element::zero();
        for (j, &letter) in w.ext.letters().iter().enumerate() {
            let sign = if j % 2 == 0 { R::one() } else { R::one().neg() };
            out.add_term(
                CeWord::new(w.coef.merge(&SymWord::generator(letter)), w.ext.without(j)),
                sign,
            );
        }
        out
    })
}

/// ∂⁻¹ = ∂*/(r+ℓ) on bidegree (r, ℓ) ≠ (0, 0), and 0 on the scalars.
pub fn partial_inverse<R: Ring>() -> LinearOp<CeWord<SymWord>, CeWord<SymWord>, R> {
    let star = partial_star::<R>();
    LinearOp::new(-1, move |w: &CeWord<SymWord>| {
        let total = w.coef.len() + w.ext.len();
        if total == 0 {
            Element::zero()
        } else {
            star.apply_label(w)
                .scale_rational(&Rational::inv(total as i64))
        }
    })
}

/// The Chevalley-Eilenberg complex of a Lie coaction with probe caps.
pub fn ce_complex<M: Label, R: Ring>(rho: &LieCoaction<M, R>) -> Complex<CeWord<M>, R> {
    let dim = rho.dim;
    let basis = rho.basis.clone();
    Complex::new(
        format!("C_ce(V,M) dim={dim}"),
        0..=dim as i64,
        partial_m(rho),
        move |d| {
            let mut out = Vec::new();
            for ext in ext_words(dim, d as usize) {
                for m in &basis {
                    out.push(CeWord::new(m.clone(), ext.clone()));
                }
            }
            out
        },
    )
}

/// The regular-coefficient complex (Sym V ⊗ Λ V, ∂) with explicit caps.
pub fn ce_complex_regular<R: Ring>(dim: u32, coef_cap: usize) -> Complex<CeWord<SymWord>, R> {
    Complex::new(
        format!("C_ce(V,SymV) dim={dim}"),
        0..=dim as i64,
        partial_sym(),
        move |d| {
            let mut out = Vec::new();
            for ext in ext_words(dim, d as usize) {
                for coef in sym_words_up_to(dim, coef_cap) {
                    out.push(CeWord::new(coef.clone(), ext.clone()));
                }
            }
            out
        },
    )
}

/// The polynomial Poincaré retract (ι, π, ∂⁻¹) between the scalars and
/// (C_ce(V, Sym V), ∂).
pub fn poincare_retract<R: Ring>(
    dim: u32,
    coef_cap: usize,
) -> Retract<UnitLabel, CeWord<SymWord>, R> {
    let big = ce_complex_regular(dim, coef_cap);
    let small = Complex::<UnitLabel, R>::point(format!("R (scalars), dim={dim}"));
    let inclusion = LinearOp::new(0, |_: &UnitLabel| {
        Element::basis(CeWord::new(SymWord::unit(), ExtWord::unit()))
    });
    let projection = LinearOp::new(0, |w: &CeWord<SymWord>| {
        if w.coef.is_empty() && w.ext.is_empty() {
            Element::basis(UnitLabel)
        } else {
            Element::zero()
        }
    });
    Retract::new(small, big, inclusion, projection, partial_inverse())
}

// ---------------------------------------------------------------------------
// the split retract for a complemented submodule

/// Splits an exterior word over V into its U-part and U⊥-part (in the two
/// sub-numberings), with the Koszul sign of the unshuffle.
fn unshuffle_ext(
    ext: &ExtWord,
    u_pos: &BTreeMap<u32, u32>,
    p_pos: &BTreeMap<u32, u32>,
) -> (ExtWord, ExtWord, i32) {
    let mut u_letters = Vec::new();
    let mut p_letters = Vec::new();
    let mut sign = 1;
    for &x in ext.letters() {
        if let Some(&u) = u_pos.get(&x) {
            // x crosses the U⊥-letters already collected to its left
            if p_letters.len() % 2 == 1 {
                sign = -sign;
            }
            u_letters.push(u);
        } else {
            p_letters.push(*p_pos.get(&x).expect("partition covers V"));
        }
    }
    (ExtWord::new(u_letters), ExtWord::new(p_letters), sign)
}

/// The split retract for a partition of the basis of V into U and U⊥:
/// the tensor product of the Poincaré retract on U with the trivial retract
/// on Λ U⊥, conjugated onto C_ce(V, Sym U).  Exhibits
/// H_ce(V, Sym U) ≃ Λ U⊥, realized as exterior words in the U⊥ directions
/// of V.
pub fn split_retract<R: Ring>(
    dim: u32,
    u_indices: &[u32],
    coef_cap: usize,
) -> Result<Retract<ExtWord, CeWord<SymWord>, R>, String> {
    let mut seen = std::collections::BTreeSet::new();
    for &i in u_indices {
        if i >= dim {
            return Err(format!("index e{} outside the module", i + 1));
        }
        if !seen.insert(i) {
            return Err("U indices repeat".into());
        }
    }
    let u_list: Vec<u32> = u_indices.to_vec();
    let p_list: Vec<u32> = (0..dim).filter(|i| !seen.contains(i)).collect();
    let dim_u = u_list.len() as u32;
    let dim_p = p_list.len() as u32;

    // positions of V-indices inside the sub-numberings
    let u_pos: BTreeMap<u32, u32> = u_list
        .iter()
        .enumerate()
        .map(|(k, &i)| (i, k as u32))
        .collect();
    let p_pos: BTreeMap<u32, u32> = p_list
        .iter()
        .enumerate()
        .map(|(k, &i)| (i, k as u32))
        .collect();

    let perp_complex: Complex<ExtWord, R> = Complex::new(
        "Λ U⊥ (zero differential)",
        0..=dim_p as i64,
        LinearOp::zero(1),
        move |d| ext_words(dim_p, d as usize),
    );
    let product = tensor_retract(
        &poincare_retract::<R>(dim_u, coef_cap),
        &Retract::<ExtWord, ExtWord, R>::identity(&perp_complex),
    );

    // big side: Pair<CeWord<SymWord over U>, ExtWord over U⊥>  ≅  CeWord over V
    let big: Complex<CeWord<SymWord>, R> = {
        let rho_table = {
            // ∂ for the Sym U coaction on Λ V
            let u_list = u_list.clone();
            LinearOp::new(1, move |w: &CeWord<SymWord>| {
                let mut out = Element::zero();
                for pos in 0..w.coef.len() {
                    let letter = u_list[w.coef.letters()[pos] as usize];
                    if let Some((ext, sign)) = ext_word_mul(&ExtWord::generator(letter), &w.ext) {
                        let c = if sign < 0 { R::one().neg() } else { R::one() };
                        out.add_term(CeWord::new(w.coef.without(pos), ext), c);
                    }
                }
                out
            })
        };
        Complex::new(
            format!("C_ce(V,SymU) dim={dim}"),
            0..=dim as i64,
            rho_table,
            move |d| {
                let mut out = Vec::new();
                for ext in ext_words(dim, d as usize) {
                    for coef in sym_words_up_to(dim_u, coef_cap) {
                        out.push(CeWord::new(coef.clone(), ext.clone()));
                    }
                }
                out
            },
        )
    };

    let iso_inv = {
        // CeWord over V  →  Pair<CeWord over U, ExtWord over U⊥>
        let (u_pos, p_pos) = (u_pos.clone(), p_pos.clone());
        LinearOp::new(0, move |w: &CeWord<SymWord>| {
            let (ext_u, ext_p, sign) = unshuffle_ext(&w.ext, &u_pos, &p_pos);
            let c = if sign < 0 { R::one().neg() } else { R::one() };
            Element::term(Pair(CeWord::new(w.coef.clone(), ext_u), ext_p), c)
        })
    };
    let iso = {
        let (u_list, p_list) = (u_list.clone(), p_list.clone());
        LinearOp::new(0, move |l: &Pair<CeWord<SymWord>, ExtWord>| {
            let Pair(ce, ext_p) = l;
            let img_u = ExtWord::new(
                ce.ext
                    .letters()
                    .iter()
                    .map(|&i| u_list[i as usize])
                    .collect(),
            );
            let img_p = ExtWord::new(
                ext_p
                    .letters()
                    .iter()
                    .map(|&i| p_list[i as usize])
                    .collect(),
            );
            match ext_word_mul(&img_u, &img_p) {
                None => Element::zero(),
                Some((ext, sign)) => {
                    let c = if sign < 0 { R::one().neg() } else { R::one() };
                    Element::term(CeWord::new(ce.coef.clone(), ext), c)
                }
            }
        })
    };
    let relabeled = relabel_big(&product, big, iso, iso_inv);

    // small side: Pair<UnitLabel, ExtWord over U⊥>  ≅  ExtWord in the U⊥
    // directions of V
    let small: Complex<ExtWord, R> = {
        let p_list = p_list.clone();
        Complex::new(
            "Λ U⊥ ⊂ Λ V (zero differential)",
            0..=dim_p as i64,
            LinearOp::zero(1),
            move |d| {
                ext_words(dim_p, d as usize)
                    .into_iter()
                    .map(|w| {
                        ExtWord::new(w.letters().iter().map(|&i| p_list[i as usize]).collect())
                    })
                    .collect()
            },
        )
    };
    let small_iso = {
        let p_list = p_list.clone();
        LinearOp::new(0, move |l: &Pair<UnitLabel, ExtWord>| {
            Element::basis(ExtWord::new(
                l.1.letters().iter().map(|&i| p_list[i as usize]).collect(),
            ))
        })
    };
    let small_iso_inv = {
        let p_pos = p_pos.clone();
        LinearOp::new(0, move |w: &ExtWord| {
            Element::basis(Pair(
                UnitLabel,
                ExtWord::new(w.letters().iter().map(|i| p_pos[i]).collect()),
            ))
        })
    };
    Ok(relabel_small(&relabeled, small, small_iso, small_iso_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{regular_comodule, submodule_comodule, trivial_comodule, FreeLabel};
    use crate::homotopy::check_complex;
    use crate::rational::Rational;

    type Q = Rational;

    fn ce(coef: Vec<u32>, ext: Vec<u32>) -> CeWord<SymWord> {
        CeWord::new(SymWord::new(coef), ExtWord::new(ext))
    }

    #[test]
    fn trivial_comodule_gives_zero_coaction() {
        let com = trivial_comodule::<FreeLabel, Q>(2, vec![FreeLabel(0)]);
        let rho = lie_coaction_from_comodule(&com).unwrap();
        assert!(rho.coaction(&FreeLabel(0)).is_zero());
    }

    #[test]
    fn regular_lie_coaction_on_a_word() {
        // ρ(x∨y) = -(x⊗y + y⊗x) read as -(word minus letter)⊗letter
        let com = regular_comodule::<Q>(2, 2);
        let rho = lie_coaction_from_comodule(&com).unwrap();
        let got = rho.coaction(&SymWord::new(vec![0, 1]));
        let mut expected = Element::zero();
        expected.add_term(
            Pair(SymWord::generator(0), SymWord::generator(1)),
            -Q::one(),
        );
        expected.add_term(
            Pair(SymWord::generator(1), SymWord::generator(0)),
            -Q::one(),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn submodule_lie_coaction_lands_in_ambient_v() {
        let com = submodule_comodule::<Q>(2, &[1], 2).unwrap();
        let rho = lie_coaction_from_comodule(&com).unwrap();
        // ρ(u) = -u₍₀₎ ⊗ pr_V(u₍₋₁₎) with the V-letter included via e2
        let got = rho.coaction(&SymWord::generator(0));
        assert_eq!(
            got,
            Element::term(Pair(SymWord::unit(), SymWord::generator(1)), -Q::one())
        );
    }

    #[test]
    fn partial_on_generators() {
        let d = partial_sym::<Q>();
        // ∂(x⊗1) = 1⊗x
        assert_eq!(
            d.apply_label(&ce(vec![0], vec![])),
            Element::basis(ce(vec![], vec![0]))
        );
        // ∂(1⊗x) = 0
        assert!(d.apply_label(&ce(vec![], vec![0])).is_zero());
        // ∂(x∨y ⊗ ξ) = x⊗(y∧ξ) + y⊗(x∧ξ)
        let got = d.apply_label(&ce(vec![0, 1], vec![]));
        let mut expected = Element::zero();
        expected.add_term(ce(vec![0], vec![1]), Q::one());
        expected.add_term(ce(vec![1], vec![0]), Q::one());
        assert_eq!(got, expected);
    }

    #[test]
    fn partial_m_matches_partial_sym_for_regular_coefficients() {
        let com = regular_comodule::<Q>(3, 2);
        let rho = lie_coaction_from_comodule(&com).unwrap();
        let dm = partial_m(&rho);
        let ds = partial_sym::<Q>();
        for coef in sym_words_up_to(3, 2) {
            for ext in ext_words(3, 1) {
                let w = CeWord::new(coef.clone(), ext.clone());
                assert_eq!(dm.apply_label(&w), ds.apply_label(&w), "mismatch on {w}");
            }
        }
    }

    #[test]
    fn partial_star_on_generators() {
        let d = partial_star::<Q>();
        assert!(d.apply_label(&ce(vec![0], vec![])).is_zero());
        assert_eq!(
            d.apply_label(&ce(vec![], vec![0])),
            Element::basis(ce(vec![0], vec![]))
        );
        // ∂*(𝟙 ⊗ x∧y) = x⊗y - y⊗x
        let got = d.apply_label(&ce(vec![], vec![0, 1]));
        let mut expected = Element::zero();
        expected.add_term(ce(vec![0], vec![1]), Q::one());
        expected.add_term(ce(vec![1], vec![0]), -Q::one());
        assert_eq!(got, expected);
    }

    #[test]
    fn partial_inverse_examples() {
        let dinv = partial_inverse::<Q>();
        assert!(dinv.apply_label(&ce(vec![], vec![])).is_zero());
        assert_eq!(
            dinv.apply_label(&ce(vec![], vec![0])),
            Element::basis(ce(vec![0], vec![]))
        );
    }

    #[test]
    fn degree_homotopy_identity() {
        // ∂∂* + ∂*∂ = deg_s + deg_a on every basis label
        let d = partial_sym::<Q>();
        let s = partial_star::<Q>();
        for coef in sym_words_up_to(3, 3) {
            for l in 0..=3 {
                for ext in ext_words(3, l) {
                    let w = CeWord::new(coef.clone(), ext.clone());
                    let lhs = s
                        .apply(&d.apply_label(&w))
                        .add(&d.apply(&s.apply_label(&w)));
                    let total = (sym_degree(&w) + ext_degree(&w)) as i64;
                    let rhs = Element::basis(w.clone()).scale_rational(&Rational::from_int(total));
                    assert_eq!(lhs, rhs, "degree homotopy fails on {w}");
                }
            }
        }
    }

    #[test]
    fn partial_m_squares_to_zero() {
        let com = regular_comodule::<Q>(3, 3);
        let rho = lie_coaction_from_comodule(&com).unwrap();
        let c = ce_complex(&rho);
        assert!(check_complex(&c, 0..=3).passed());
    }

    #[test]
    fn poincare_retract_passes() {
        let (r, report) = poincare_retract::<Q>(3, 3).verified(0..=3);
        assert!(report.passed(), "{}", report.to_json());
        assert!(r.is_deformation);
        // primitive extraction: ∂⁻¹ of the exact cocycle 1⊗x is x⊗1
        assert_eq!(
            r.homotopy.apply_label(&ce(vec![], vec![0])),
            Element::basis(ce(vec![0], vec![]))
        );
    }

    #[test]
    fn split_retract_passes_mixed() {
        // dim U = 1, dim U⊥ = 1, U = span(e1)
        let (r, report) = split_retract::<Q>(2, &[0], 3).unwrap().verified(0..=2);
        assert!(report.passed(), "{}", report.to_json());
        assert!(r.is_deformation);
        // cohomology basis: exterior words in the U⊥ direction e2
        assert_eq!(r.small.basis(1), vec![ExtWord::generator(1)]);
        assert!(r.small.basis(2).is_empty());
        // U⊥ parts survive: p(𝟙 ⊗ e2) = e2
        assert_eq!(
            r.projection.apply_label(&ce(vec![], vec![1])),
            Element::basis(ExtWord::generator(1))
        );
    }

    #[test]
    fn split_retract_degenerate_partitions() {
        // U = V reduces to the Poincaré retract
        let r = split_retract::<Q>(2, &[0, 1], 2).unwrap();
        let p = poincare_retract::<Q>(2, 2);
        for d in 0..=2 {
            for w in p.big.basis(d) {
                assert_eq!(r.homotopy.apply_label(&w), p.homotopy.apply_label(&w));
                assert_eq!(
                    r.big.differential.apply_label(&w),
                    p.big.differential.apply_label(&w)
                );
            }
        }
        // U = 0 is the identity retract on Λ V with zero differential
        let (r, report) = split_retract::<Q>(2, &[], 2).unwrap().verified(0..=2);
        assert!(report.passed());
        assert!(r.is_deformation);
        for d in 0..=2 {
            for w in r.big.basis(d) {
                assert!(r.big.differential.apply_label(&w).is_zero());
                assert!(r.homotopy.apply_label(&w).is_zero());
            }
        }
    }

    #[test]
    fn split_retract_differential_is_submodule_partial() {
        // the conjugated differential agrees with ∂_M for the submodule
        // comodule's infinitesimal coaction
        let r = split_retract::<Q>(3, &[0, 2], 2).unwrap();
        let com = submodule_comodule::<Q>(3, &[0, 2], 2).unwrap();
        let rho = lie_coaction_from_comodule(&com).unwrap();
        let dm = partial_m(&rho);
        for d in 0..=3 {
            for w in r.big.basis(d) {
                assert_eq!(
                    r.big.differential.apply_label(&w),
                    dm.apply_label(&w),
                    "mismatch on {w}"
                );
            }
        }
    }

    #[test]
    fn reconstruction_of_the_coaction() {
        // The exponential of the infinitesimal coaction recovers the comodule
        // coaction up to a tensor flip and the antipode:
        //   Σ_r ρ^r(m)/r!        = m₍₀₎ ⊗ s(m₍₋₁₎)
        //   Σ_r (-1)^r ρ^r(m)/r! = m₍₀₎ ⊗ m₍₋₁₎
        // (the signs inside ρ^r already produce the antipode).
        let com = regular_comodule::<Q>(2, 3);
        let rho = lie_coaction_from_comodule(&com).unwrap();
        for m in &com.basis {
            let mut exp_plain: Element<Pair<SymWord, SymWord>, Q> = Element::zero();
            let mut exp_alternating: Element<Pair<SymWord, SymWord>, Q> = Element::zero();
            for r in 0..=3 {
                let p = rho.power(m, r).scale_rational(&Rational::inv_factorial(r));
                exp_plain.add_assign(&p);
                if r % 2 == 0 {
                    exp_alternating.add_assign(&p);
                } else {
                    exp_alternating.add_assign(&p.neg());
                }
            }
            let mut flipped = Element::zero();
            let mut flipped_antipode = Element::zero();
            for (Pair(s, m0), c) in com.coaction(m).terms() {
                flipped.add_term(Pair(m0.clone(), s.clone()), c.clone());
                let sign = if s.len() % 2 == 0 {
                    Q::one()
                } else {
                    -Q::one()
                };
                flipped_antipode.add_term(Pair(m0.clone(), s.clone()), c.mul(&sign));
            }
            assert_eq!(exp_plain, flipped_antipode, "antipode form fails on {m}");
            assert_eq!(exp_alternating, flipped, "plain form fails on {m}");
        }
    }

    #[test]
    fn partial_m_is_right_ext_linear() {
        // ∂((m⊗ξ) ∧ η) = ∂(m⊗ξ) ∧ η
        let com = regular_comodule::<Q>(3, 2);
        let rho = lie_coaction_from_comodule(&com).unwrap();
        let d = partial_m(&rho);
        let wedge = |e: &Element<CeWord<SymWord>, Q>, eta: &ExtWord| {
            e.map(|w| match ext_word_mul(&w.ext, eta) {
                None => Element::zero(),
                Some((ext, sign)) => {
                    let c = if sign < 0 { -Q::one() } else { Q::one() };
                    Element::term(CeWord::new(w.coef.clone(), ext), c)
                }
            })
        };
        for coef in sym_words_up_to(3, 2) {
            for ext in ext_words(3, 1) {
                for eta in ext_words(3, 1) {
                    let w = CeWord::new(coef.clone(), ext.clone());
                    let lhs = d.apply(&wedge(&Element::basis(w.clone()), &eta));
                    let rhs = wedge(&d.apply_label(&w), &eta);
                    assert_eq!(lhs, rhs, "right-linearity fails on {w} ∧ {eta}");
                }
            }
        }
    }
}
