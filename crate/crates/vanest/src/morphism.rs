//! Module morphisms and module derivations along a ring morphism or ring
//! derivation, their factorwise/Leibniz extensions to every complex in play,
//! and exact invariant subcomplexes.

use crate::chevalley::CeWord;
use crate::coalgebra::CaWord;
use crate::element::{Element, Label};
use crate::graded::{ext_word_mul, ExtWord, SymWord, TensorWord};
use crate::homotopy::LinearOp;
use crate::rational::Rational;
use crate::ring::Ring;
use crate::van_est::VeWord;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Multiplicative morphisms extend factorwise with the ring morphism on
/// scalars; derivations extend by the tensor Leibniz rule over the ring
/// derivation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MorphismMode {
    Multiplicative,
    Derivation,
}

/// A module morphism or derivation Φ on V along a scalar map ϑ, with an
/// optional compatible map on a coefficient comodule basis.
pub struct MorphismAlong<M: Label, R: Ring> {
    pub mode: MorphismMode,
    scalar_map: Arc<dyn Fn(&R) -> R + Send + Sync>,
    /// image of each basis vector of V as a linear combination of basis
    /// vectors
    basis_images: Arc<Vec<Element<SymWord, R>>>,
    /// image of each comodule basis label (absent: identity / zero per mode)
    coef_images: Option<Arc<BTreeMap<M, Element<M, R>>>>,
}

impl<M: Label, R: Ring> Clone for MorphismAlong<M, R> {
    fn clone(&self) -> Self {
        MorphismAlong {
            mode: self.mode,
            scalar_map: Arc::clone(&self.scalar_map),
            basis_images: Arc::clone(&self.basis_images),
            coef_images: self.coef_images.as_ref().map(Arc::clone),
        }
    }
}

impl<M: Label, R: Ring> MorphismAlong<M, R> {
    pub fn new(
        mode: MorphismMode,
        scalar_map: impl Fn(&R) -> R + Send + Sync + 'static,
        basis_images: Vec<Element<SymWord, R>>,
    ) -> Self {
        assert!(
            basis_images
                .iter()
                .all(|e| e.terms().all(|(w, _)| w.len() == 1)),
            "basis images must be linear combinations of basis vectors"
        );
        MorphismAlong {
            mode,
            scalar_map: Arc::new(scalar_map),
            basis_images: Arc::new(basis_images),
            coef_images: None,
        }
    }

    pub fn with_coefficient_map(mut self, images: BTreeMap<M, Element<M, R>>) -> Self {
        self.coef_images = Some(Arc::new(images));
        self
    }

    pub fn scalar(&self, c: &R) -> R {
        (self.scalar_map)(c)
    }

    pub fn on_vector(&self, i: u32) -> &Element<SymWord, R> {
        &self.basis_images[i as usize]
    }

    fn on_coef(&self, m: &M) -> Element<M, R> {
        match (&self.coef_images, self.mode) {
            (Some(t), _) => t
                .get(m)
                .cloned()
                .unwrap_or_else(|| panic!("coefficient map has no entry for {m}")),
            (None, MorphismMode::Multiplicative) => Element::basis(m.clone()),
            (None, MorphismMode::Derivation) => Element::zero(),
        }
    }

    /// Factorwise image of a symmetric word (multiplicative mode).
    fn sym_image(&self, w: &SymWord) -> Element<SymWord, R> {
        let mut acc = Element::basis(SymWord::unit());
        for &i in w.letters() {
            acc = crate::graded::sym_mul(&acc, self.on_vector(i));
        }
        acc
    }

    /// Leibniz image of a symmetric word: one letter replaced at a time.
    /// The scalar derivative term lives at the element level, not here.
    fn sym_derive(&self, w: &SymWord) -> Element<SymWord, R> {
        let mut out = Element::zero();
        for pos in 0..w.len() {
            let rest = w.without(pos);
            for (img, c) in self.on_vector(w.letters()[pos]).terms() {
                out.add_term(rest.merge(img), c.clone());
            }
        }
        out
    }

    fn ext_image(&self, w: &ExtWord) -> Element<ExtWord, R> {
        let mut acc = Element::basis(ExtWord::unit());
        for &i in w.letters() {
            let letter_image = Element::from_terms(
                self.on_vector(i)
                    .terms()
                    .map(|(s, c)| (ExtWord::generator(s.letters()[0]), c.clone())),
            );
            acc = crate::graded::ext_mul(&acc, &letter_image);
        }
        acc
    }

    fn ext_derive(&self, w: &ExtWord) -> Element<ExtWord, R> {
        let mut out = Element::zero();
        for pos in 0..w.len() {
            let rest = w.without(pos);
            for (s, c) in self.on_vector(w.letters()[pos]).terms() {
                let letter = ExtWord::generator(s.letters()[0]);
                // the replaced letter keeps its slot: sign of moving it back
                if let Some((merged, sign)) = ext_word_mul(&letter, &rest) {
                    // moving `letter` past the first `pos` letters of rest
                    let slot_sign = if pos % 2 == 0 { 1 } else { -1 };
                    let c = if sign * slot_sign < 0 {
                        c.neg()
                    } else {
                        c.clone()
                    };
                    out.add_term(merged, c);
                }
            }
        }
        out
    }

    fn tensor_image(&self, w: &TensorWord) -> Element<TensorWord, R> {
        let mut acc = Element::basis(TensorWord::unit());
        for slot in w.slots() {
            let img = self.sym_image(slot);
            acc = acc.map(|tw| img.relabel(|s| tw.push(s.clone())));
        }
        acc
    }

    fn tensor_derive(&self, w: &TensorWord) -> Element<TensorWord, R> {
        let mut out = Element::zero();
        for (i, slot) in w.slots().iter().enumerate() {
            for (img, c) in self.sym_derive(slot).terms() {
                let mut slots = w.slots().to_vec();
                slots[i] = img.clone();
                out.add_term(TensorWord::new(slots), c.clone());
            }
        }
        out
    }

    /// The extension to elements of T Sym V: multiplicative mode applies ϑ to
    /// coefficients and Φ factorwise; derivation mode is the Leibniz rule
    /// ϑ(c)·w + c·ΣᵢΦᵢ(w).
    pub fn on_tensor_elements(&self) -> LinearOp<TensorWord, TensorWord, R> {
        let this = self.clone();
        LinearOp::new(0, move |w: &TensorWord| this.apply_tensor_word(w))
    }

    fn apply_tensor_word(&self, w: &TensorWord) -> Element<TensorWord, R> {
        match self.mode {
            MorphismMode::Multiplicative => self.tensor_image(w),
            MorphismMode::Derivation => self.tensor_derive(w),
        }
    }

    /// The full action on an element: scalar map on coefficients included.
    pub fn apply<L: Label>(
        &self,
        word_action: impl Fn(&Self, &L) -> Element<L, R>,
        e: &Element<L, R>,
    ) -> Element<L, R> {
        let mut out = Element::zero();
        match self.mode {
            MorphismMode::Multiplicative => {
                for (l, c) in e.terms() {
                    out.add_assign(&word_action(self, l).scale(&self.scalar(c)));
                }
            }
            MorphismMode::Derivation => {
                for (l, c) in e.terms() {
                    out.add_term(l.clone(), self.scalar(c));
                    out.add_assign(&word_action(self, l).scale(c));
                }
            }
        }
        out
    }

    pub fn apply_ext(&self, e: &Element<ExtWord, R>) -> Element<ExtWord, R> {
        self.apply(
            |m, w| match m.mode {
                MorphismMode::Multiplicative => m.ext_image(w),
                MorphismMode::Derivation => m.ext_derive(w),
            },
            e,
        )
    }

    pub fn apply_tensor(&self, e: &Element<TensorWord, R>) -> Element<TensorWord, R> {
        self.apply(|m, w| m.apply_tensor_word(w), e)
    }

    pub fn apply_ca(&self, e: &Element<CaWord<M>, R>) -> Element<CaWord<M>, R> {
        self.apply(
            |m, w: &CaWord<M>| match m.mode {
                MorphismMode::Multiplicative => {
                    let t = m.tensor_image(&w.tensor);
                    let c = m.on_coef(&w.coef);
                    t.map(|tw| c.relabel(|mc| CaWord::new(tw.clone(), mc.clone())))
                }
                MorphismMode::Derivation => {
                    let mut out = m
                        .tensor_derive(&w.tensor)
                        .relabel(|tw| CaWord::new(tw.clone(), w.coef.clone()));
                    out.add_assign(
                        &m.on_coef(&w.coef)
                            .relabel(|mc| CaWord::new(w.tensor.clone(), mc.clone())),
                    );
                    out
                }
            },
            e,
        )
    }

    pub fn apply_ce(&self, e: &Element<CeWord<M>, R>) -> Element<CeWord<M>, R> {
        self.apply(
            |m, w: &CeWord<M>| match m.mode {
                MorphismMode::Multiplicative => {
                    let x = m.ext_image(&w.ext);
                    let c = m.on_coef(&w.coef);
                    c.map(|mc| x.relabel(|ext| CeWord::new(mc.clone(), ext.clone())))
                }
                MorphismMode::Derivation => {
                    let mut out = m
                        .ext_derive(&w.ext)
                        .relabel(|ext| CeWord::new(w.coef.clone(), ext.clone()));
                    out.add_assign(
                        &m.on_coef(&w.coef)
                            .relabel(|mc| CeWord::new(mc.clone(), w.ext.clone())),
                    );
                    out
                }
            },
            e,
        )
    }

    pub fn apply_ve(&self, e: &Element<VeWord<M>, R>) -> Element<VeWord<M>, R> {
        self.apply(
            |m, w: &VeWord<M>| match m.mode {
                MorphismMode::Multiplicative => {
                    let t = m.tensor_image(&w.tensor);
                    let s = m.sym_image(&w.sym);
                    let c = m.on_coef(&w.coef);
                    let x = m.ext_image(&w.ext);
                    let mut out = Element::zero();
                    for (tw, c1) in t.terms() {
                        for (sw, c2) in s.terms() {
                            for (mc, c3) in c.terms() {
                                for (ew, c4) in x.terms() {
                                    out.add_term(
                                        VeWord::new(tw.clone(), sw.clone(), mc.clone(), ew.clone()),
                                        c1.mul(c2).mul(c3).mul(c4),
                                    );
                                }
                            }
                        }
                    }
                    out
                }
                MorphismMode::Derivation => {
                    let mut out = m.tensor_derive(&w.tensor).relabel(|tw| {
                        VeWord::new(tw.clone(), w.sym.clone(), w.coef.clone(), w.ext.clone())
                    });
                    out.add_assign(&m.sym_derive(&w.sym).relabel(|sw| {
                        VeWord::new(w.tensor.clone(), sw.clone(), w.coef.clone(), w.ext.clone())
                    }));
                    out.add_assign(&m.on_coef(&w.coef).relabel(|mc| {
                        VeWord::new(w.tensor.clone(), w.sym.clone(), mc.clone(), w.ext.clone())
                    }));
                    out.add_assign(&m.ext_derive(&w.ext).relabel(|ew| {
                        VeWord::new(w.tensor.clone(), w.sym.clone(), w.coef.clone(), ew.clone())
                    }));
                    out
                }
            },
            e,
        )
    }
}

// ---------------------------------------------------------------------------
// exact invariant subcomplexes

/// Joint fixed points (multiplicative actions) and joint kernel (derivation
/// actions) of a family of actions, computed exactly over the rationals.
///
/// The probe subspace is the Q-span of label × scalar-atom pairs; for
/// rational scalars pass `[R::one()]`, for polynomial scalars the list of
/// coefficient monomials spanning the window.  Errors when an action maps a
/// window atom outside the window span.
pub fn invariant_subspace<L: Label, R: Ring>(
    labels: &[L],
    scalar_atoms: &[R],
    actions: &[(MorphismMode, Box<dyn Fn(&Element<L, R>) -> Element<L, R>>)],
) -> Result<Vec<Element<L, R>>, String> {
    let mut atoms: Vec<(L, R)> = Vec::new();
    let mut index: BTreeMap<(L, String), usize> = BTreeMap::new();
    for l in labels {
        for a in scalar_atoms {
            let k = (l.clone(), format!("{a:?}"));
            if !index.contains_key(&k) {
                index.insert(k, atoms.len());
                atoms.push((l.clone(), a.clone()));
            }
        }
    }
    let n = atoms.len();

    let coordinates = |e: &Element<L, R>| -> Result<Vec<(usize, Rational)>, String> {
        let mut out = Vec::new();
        for (l, c) in e.terms() {
            for (atom, q) in c.rational_atoms() {
                let k = (l.clone(), format!("{atom:?}"));
                match index.get(&k) {
                    Some(&i) => out.push((i, q)),
                    None => {
                        return Err(format!("action leaves the probe window at ({atom:?})·{l}"))
                    }
                }
            }
        }
        Ok(out)
    };

    // stacked constraints: columns are window atoms, one block of rows per
    // generator
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (mode, act) in actions {
        let mut block = vec![vec![Rational::zero(); n]; n];
        for (j, (l, a)) in atoms.iter().enumerate() {
            let img = act(&Element::term(l.clone(), a.clone()));
            for (i, q) in coordinates(&img)? {
                block[i][j] = &block[i][j] + &q;
            }
            if *mode == MorphismMode::Multiplicative {
                block[j][j] = &block[j][j] - &Rational::one();
            }
        }
        rows.extend(block);
    }

    let kernel = rational_kernel(rows, n);
    let mut out = Vec::new();
    for v in kernel {
        let mut e = Element::zero();
        for (i, q) in v.iter().enumerate() {
            if !q.is_zero() {
                let (l, a) = &atoms[i];
                e.add_term(l.clone(), a.scale_rational(q));
            }
        }
        if !e.is_zero() {
            out.push(e);
        }
    }
    Ok(out)
}

/// Kernel basis of a dense rational matrix via exact Gauss-Jordan
/// elimination.
fn rational_kernel(mut eqs: Vec<Vec<Rational>>, width: usize) -> Vec<Vec<Rational>> {
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..width {
        let mut pivot = None;
        for (i, row) in eqs.iter().enumerate().skip(r) {
            if !row[c].is_zero() {
                pivot = Some(i);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        eqs.swap(r, p);
        let inv = &Rational::one() / &eqs[r][c].clone();
        for x in eqs[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..eqs.len() {
            if i != r && !eqs[i][c].is_zero() {
                let f = eqs[i][c].clone();
                for j in 0..width {
                    let delta = &f * &eqs[r][j];
                    eqs[i][j] = &eqs[i][j] - &delta;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == eqs.len() {
            break;
        }
    }
    let mut kernel = Vec::new();
    for c in 0..width {
        if pivot_cols.contains(&c) {
            continue;
        }
        let mut v = vec![Rational::zero(); width];
        v[c] = Rational::one();
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -&eqs[ri][c].clone();
        }
        kernel.push(v);
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::UnitLabel;
    use crate::graded::ext_words;
    use crate::rational::Rational;

    type Q = Rational;

    fn permutation(dim: u32, perm: &[u32]) -> MorphismAlong<UnitLabel, Q> {
        let images = (0..dim)
            .map(|i| Element::basis(SymWord::generator(perm[i as usize])))
            .collect();
        MorphismAlong::new(MorphismMode::Multiplicative, |c: &Q| c.clone(), images)
    }

    #[test]
    fn sign_action_invariants_in_the_exterior_algebra() {
        // e1 ↦ -e1 on dim 2: invariants are 1 and e2; e1 and e1∧e2 are
        // excluded
        let images = vec![
            Element::term(SymWord::generator(0), -Q::one()),
            Element::basis(SymWord::generator(1)),
        ];
        let phi = MorphismAlong::<UnitLabel, Q>::new(
            MorphismMode::Multiplicative,
            |c: &Q| c.clone(),
            images,
        );
        let window: Vec<ExtWord> = ext_words(2, 0)
            .into_iter()
            .chain(ext_words(2, 1))
            .chain(ext_words(2, 2))
            .collect();
        let phi2 = phi.clone();
        let inv = invariant_subspace(
            &window,
            &[Q::one()],
            &[(
                MorphismMode::Multiplicative,
                Box::new(move |e: &Element<ExtWord, Q>| phi2.apply_ext(e)),
            )],
        )
        .unwrap();
        let mut found: Vec<String> = inv.iter().map(|e| e.to_string()).collect();
        found.sort();
        assert_eq!(found, vec!["(1)·1".to_string(), "(1)·e2".to_string()]);
    }

    #[test]
    fn swap_action_kills_the_top_exterior_power() {
        // e1 ↔ e2: e1∧e2 ↦ e2∧e1 = -e1∧e2, so Λ² has no invariants
        let phi = permutation(2, &[1, 0]);
        let window = ext_words(2, 2);
        let phi2 = phi.clone();
        let inv = invariant_subspace(
            &window,
            &[Q::one()],
            &[(
                MorphismMode::Multiplicative,
                Box::new(move |e: &Element<ExtWord, Q>| phi2.apply_ext(e)),
            )],
        )
        .unwrap();
        assert!(inv.is_empty());
        // on Λ¹ the diagonal survives
        let window = ext_words(2, 1);
        let phi2 = phi.clone();
        let inv = invariant_subspace(
            &window,
            &[Q::one()],
            &[(
                MorphismMode::Multiplicative,
                Box::new(move |e: &Element<ExtWord, Q>| phi2.apply_ext(e)),
            )],
        )
        .unwrap();
        assert_eq!(inv.len(), 1);
        let mut expected = Element::<ExtWord, Q>::zero();
        expected.add_term(ExtWord::generator(0), Q::one());
        expected.add_term(ExtWord::generator(1), Q::one());
        assert_eq!(inv[0], expected);
    }

    #[test]
    fn trivial_action_returns_the_full_window() {
        let phi = permutation(2, &[0, 1]);
        let window: Vec<ExtWord> = ext_words(2, 1);
        let phi2 = phi.clone();
        let inv = invariant_subspace(
            &window,
            &[Q::one()],
            &[(
                MorphismMode::Multiplicative,
                Box::new(move |e: &Element<ExtWord, Q>| phi2.apply_ext(e)),
            )],
        )
        .unwrap();
        assert_eq!(inv.len(), window.len());
    }

    #[test]
    fn derivation_mode_satisfies_the_leibniz_shape() {
        // diagonal derivation Φ(e_i) = λ_i e_i over ϑ = 0 on Q:
        // the extension to a two-letter word scales by λ_i + λ_j
        let images = vec![
            Element::term(SymWord::generator(0), Q::from_int(2)),
            Element::term(SymWord::generator(1), Q::from_int(5)),
        ];
        let phi =
            MorphismAlong::<UnitLabel, Q>::new(MorphismMode::Derivation, |_: &Q| Q::zero(), images);
        let w = TensorWord::singleton(SymWord::new(vec![0, 1]));
        let got = phi.apply_tensor(&Element::basis(w.clone()));
        assert_eq!(got, Element::term(w, Q::from_int(7)));
    }

    #[test]
    fn ext_derive_keeps_koszul_signs() {
        // Φ(e1) = e2, Φ(e2) = 0 as a derivation: Φ(e1∧e2) = e2∧e2 = 0,
        // Φ(e1∧e3) = e2∧e3
        let images = vec![
            Element::basis(SymWord::generator(1)),
            Element::zero(),
            Element::zero(),
        ];
        let phi =
            MorphismAlong::<UnitLabel, Q>::new(MorphismMode::Derivation, |_: &Q| Q::zero(), images);
        assert!(phi
            .apply_ext(&Element::basis(ExtWord::new(vec![0, 1])))
            .is_zero());
        assert_eq!(
            phi.apply_ext(&Element::basis(ExtWord::new(vec![0, 2]))),
            Element::basis(ExtWord::new(vec![1, 2]))
        );
        // Φ(e3) = e1 moves the letter to the front: Φ'(e2∧e3) = e2∧e1 = -e1∧e2
        let images = vec![
            Element::zero(),
            Element::zero(),
            Element::basis(SymWord::generator(0)),
        ];
        let phi =
            MorphismAlong::<UnitLabel, Q>::new(MorphismMode::Derivation, |_: &Q| Q::zero(), images);
        assert_eq!(
            phi.apply_ext(&Element::basis(ExtWord::new(vec![1, 2]))),
            Element::term(ExtWord::new(vec![0, 1]), -Q::one())
        );
    }
}
