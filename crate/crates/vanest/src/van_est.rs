//! The van Est double complex T Sym V ⊗ Sym V ⊗ M ⊗ Λ V, its augmentation
//! maps and homotopies, the perturbed retracts onto the coalgebra and
//! Chevalley-Eilenberg sides, and the van Est maps with their homotopy.
//!
//! The coefficient-free theory is the special case of a rank-one trivial
//! comodule, for which the extra perturbation vanishes identically.

use crate::chevalley::{ce_complex, lie_coaction_from_comodule, partial_m, CeWord};
use crate::coalgebra::{ca_complex_with_coefficients, delta_ca_word, CaWord, Comodule};
use crate::element::{Element, Label, Pair, UnitLabel};
use crate::graded::{
    ext_word_mul, ext_words, shuffle_sym_word, sym_words_up_to, tensor_words, ExtWord, SymWord,
    TensorWord,
};
use crate::homotopy::{compose_retracts, perturb, Complex, LinearOp, Perturbation, Retract};
use crate::rational::Rational;
use crate::ring::Ring;
use serde_json::Value;
use std::fmt;

/// Basis label of the van Est double complex with coefficients:
/// a tensor word, the middle symmetric slot, a comodule basis label and an
/// exterior word.  The homological degree is the bidegree sum k + ℓ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VeWord<M: Label> {
    pub tensor: TensorWord,
    pub sym: SymWord,
    pub coef: M,
    pub ext: ExtWord,
}

impl<M: Label> VeWord<M> {
    pub fn new(tensor: TensorWord, sym: SymWord, coef: M, ext: ExtWord) -> Self {
        VeWord {
            tensor,
            sym,
            coef,
            ext,
        }
    }

    /// (tensor degree, exterior degree).
    pub fn bidegree(&self) -> (usize, usize) {
        (self.tensor.len(), self.ext.len())
    }
}

impl<M: Label> fmt::Display for VeWord<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ⊗ {} ⊗ {} ⊗ {}",
            self.tensor, self.sym, self.coef, self.ext
        )
    }
}

impl<M: Label> Label for VeWord<M> {
    fn degree(&self) -> i64 {
        (self.tensor.len() + self.ext.len()) as i64
    }
    fn grading(&self) -> String {
        format!("vanest({})", self.coef.grading())
    }
    fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("tensor".into(), self.tensor.to_json());
        obj.insert("sym".into(), self.sym.to_json());
        if self.coef.to_json() != Value::Null {
            obj.insert("coef".into(), self.coef.to_json());
        }
        obj.insert("ext".into(), self.ext.to_json());
        Value::Object(obj)
    }
}

/// Probe caps for the finite verification windows: tensor degree, exterior
/// degree, symmetric degree per tensor slot and of the middle slot.
#[derive(Clone, Copy, Debug)]
pub struct VeCaps {
    pub k_max: usize,
    pub l_max: usize,
    pub slot_cap: usize,
    pub mid_cap: usize,
}

impl VeCaps {
    pub fn uniform(deg: usize) -> Self {
        VeCaps {
            k_max: deg,
            l_max: deg,
            slot_cap: deg,
            mid_cap: deg,
        }
    }
}

/// The van Est machinery for a fixed comodule of coefficients.
pub struct VanEst<M: Label, R: Ring> {
    pub comodule: Comodule<M, R>,
    pub caps: VeCaps,
}

impl<M: Label, R: Ring> Clone for VanEst<M, R> {
    fn clone(&self) -> Self {
        VanEst {
            comodule: self.comodule.clone(),
            caps: self.caps,
        }
    }
}

impl<M: Label, R: Ring> VanEst<M, R> {
    pub fn new(comodule: Comodule<M, R>, caps: VeCaps) -> Self {
        VanEst { comodule, caps }
    }

    pub fn dim(&self) -> u32 {
        self.comodule.dim
    }

    fn series_bound(&self) -> usize {
        // degree counting terminates every series: (∂h)-powers within the
        // tensor degree, (δk)- and (BK)-powers within letters available to
        // move.  Composites may feed elements with letters accumulated from
        // every slot, so the bound covers the total letter count of any
        // window element with margin; termination always happens earlier.
        let c = self.caps;
        2 * (self.dim() as usize + c.k_max * c.slot_cap + c.l_max + c.mid_cap) + 8
    }

    // -- differentials ------------------------------------------------------

    /// Vertical differential: δ_ca on the tensor part plus the middle-slot
    /// coaction term (-1)^{k+1}(X ⊗ pr₊(φ₍₋₁₎)) ⊗ φ₍₀₎ ⊗ m ⊗ ξ.
    pub fn delta(&self) -> LinearOp<VeWord<M>, VeWord<M>, R> {
        LinearOp::new(1, move |w: &VeWord<M>| {
            let k = w.tensor.len();
            let mut out = delta_ca_word::<R>(&w.tensor).relabel(|tw| {
                VeWord::new(tw.clone(), w.sym.clone(), w.coef.clone(), w.ext.clone())
            });
            let negate = (k + 1) % 2 == 1;
            for (Pair(s1, s2), c) in shuffle_sym_word::<R>(&w.sym).terms() {
                if s1.is_empty() {
                    continue;
                }
                let c = if negate { c.neg() } else { c.clone() };
                out.add_term(
                    VeWord::new(
                        w.tensor.push(s1.clone()),
                        s2.clone(),
                        w.coef.clone(),
                        w.ext.clone(),
                    ),
                    c,
                );
            }
            out
        })
    }

    /// Horizontal differential: (-1)^k Σᵢ X ⊗ (φ∖xᵢ) ⊗ m ⊗ (xᵢ ∧ ξ).
    pub fn partial(&self) -> LinearOp<VeWord<M>, VeWord<M>, R> {
        LinearOp::new(1, move |w: &VeWord<M>| {
            let negate = w.tensor.len() % 2 == 1;
            let mut out = Element::zero();
            for pos in 0..w.sym.len() {
                let letter = w.sym.letters()[pos];
                if let Some((ext, sign)) = ext_word_mul(&ExtWord::generator(letter), &w.ext) {
                    let neg = negate ^ (sign < 0);
                    out.add_term(
                        VeWord::new(w.tensor.clone(), w.sym.without(pos), w.coef.clone(), ext),
                        if neg { R::one().neg() } else { R::one() },
                    );
                }
            }
            out
        })
    }

    /// Coefficient perturbation: (-1)^k X ⊗ φ ⊗ m₍₀₎ ⊗ (pr_V(m₍₋₁₎) ∧ ξ).
    /// Vanishes identically for trivial coefficients.
    pub fn b_map(&self) -> LinearOp<VeWord<M>, VeWord<M>, R> {
        let com = self.comodule.clone();
        LinearOp::new(1, move |w: &VeWord<M>| {
            let negate = w.tensor.len() % 2 == 1;
            let mut out = Element::zero();
            for (Pair(s, m0), c) in com.coaction(&w.coef).terms() {
                if s.len() != 1 {
                    continue;
                }
                if let Some((ext, sign)) = ext_word_mul(&ExtWord::generator(s.letters()[0]), &w.ext)
                {
                    let c = if negate ^ (sign < 0) {
                        c.neg()
                    } else {
                        c.clone()
                    };
                    out.add_term(
                        VeWord::new(w.tensor.clone(), w.sym.clone(), m0.clone(), ext),
                        c,
                    );
                }
            }
            out
        })
    }

    /// The total differential D_M = δ + ∂ + B.
    pub fn total_differential(&self) -> LinearOp<VeWord<M>, VeWord<M>, R> {
        self.delta().add(&self.partial()).add(&self.b_map())
    }

    // -- complexes -----------------------------------------------------------

    /// The double complex as a total complex with the probe caps baked into
    /// the basis enumeration.
    pub fn ve_complex(&self) -> Complex<VeWord<M>, R> {
        let caps = self.caps;
        let dim = self.dim();
        let coef_basis = self.comodule.basis.clone();
        Complex::new(
            format!("D_vE(V,M) dim={dim}"),
            0..=(caps.k_max + caps.l_max) as i64,
            self.total_differential(),
            move |total| {
                let mut out = Vec::new();
                for k in 0..=caps.k_max.min(total as usize) {
                    let l = total as usize - k;
                    if l > caps.l_max.min(dim as usize) {
                        continue;
                    }
                    for tensor in tensor_words(dim, k, caps.slot_cap) {
                        for sym in sym_words_up_to(dim, caps.mid_cap) {
                            for coef in &coef_basis {
                                for ext in ext_words(dim, l) {
                                    out.push(VeWord::new(
                                        tensor.clone(),
                                        sym.clone(),
                                        coef.clone(),
                                        ext.clone(),
                                    ));
                                }
                            }
                        }
                    }
                }
                out
            },
        )
    }

    /// The coalgebra side C_Ca(V, M) with its coefficient differential.
    pub fn ca_side(&self) -> Complex<CaWord<M>, R> {
        ca_complex_with_coefficients(&self.comodule, self.caps.k_max, self.caps.slot_cap)
    }

    /// The Chevalley-Eilenberg side C_CE(V, M) with the infinitesimal
    /// coaction differential.
    pub fn ce_side(&self) -> Complex<CeWord<M>, R> {
        let rho =
            lie_coaction_from_comodule(&self.comodule).expect("comodule induces a Lie coaction");
        ce_complex(&rho)
    }

    /// ∂_M on the Chevalley-Eilenberg side, as an independent formula.
    pub fn ce_differential(&self) -> LinearOp<CeWord<M>, CeWord<M>, R> {
        let rho =
            lie_coaction_from_comodule(&self.comodule).expect("comodule induces a Lie coaction");
        partial_m(&rho)
    }

    // -- augmentation maps ---------------------------------------------------

    /// Column inclusion i(m ⊗ ξ) = 1 ⊗ 𝟙 ⊗ m ⊗ ξ.
    pub fn map_i(&self) -> LinearOp<CeWord<M>, VeWord<M>, R> {
        LinearOp::new(0, |w: &CeWord<M>| {
            Element::basis(VeWord::new(
                TensorWord::unit(),
                SymWord::unit(),
                w.coef.clone(),
                w.ext.clone(),
            ))
        })
    }

    /// Column projection p = ε ⊗ ε ⊗ id ⊗ id.
    pub fn map_p(&self) -> LinearOp<VeWord<M>, CeWord<M>, R> {
        LinearOp::new(0, |w: &VeWord<M>| {
            if w.tensor.is_empty() && w.sym.is_empty() {
                Element::basis(CeWord::new(w.coef.clone(), w.ext.clone()))
            } else {
                Element::zero()
            }
        })
    }

    /// Column homotopy h = (-1)^k ε(φ) shift of the last tensor slot into
    /// the symmetric slot, zero in tensor degree 0.
    pub fn map_h(&self) -> LinearOp<VeWord<M>, VeWord<M>, R> {
        LinearOp::new(-1, |w: &VeWord<M>| {
            if !w.sym.is_empty() {
                return Element::zero();
            }
            match w.tensor.split_last() {
                None => Element::zero(),
                Some((head, last)) => {
                    let sign = if w.tensor.len() % 2 == 0 {
                        R::one()
                    } else {
                        R::one().neg()
                    };
                    Element::term(VeWord::new(head, last, w.coef.clone(), w.ext.clone()), sign)
                }
            }
        })
    }

    /// Row inclusion j(X ⊗ m) = X ⊗ 𝟙 ⊗ m ⊗ 1.
    pub fn map_j(&self) -> LinearOp<CaWord<M>, VeWord<M>, R> {
        LinearOp::new(0, |w: &CaWord<M>| {
            Element::basis(VeWord::new(
                w.tensor.clone(),
                SymWord::unit(),
                w.coef.clone(),
                ExtWord::unit(),
            ))
        })
    }

    /// Row projection q = id ⊗ ε ⊗ id ⊗ ε.
    pub fn map_q(&self) -> LinearOp<VeWord<M>, CaWord<M>, R> {
        LinearOp::new(0, |w: &VeWord<M>| {
            if w.sym.is_empty() && w.ext.is_empty() {
                Element::basis(CaWord::new(w.tensor.clone(), w.coef.clone()))
            } else {
                Element::zero()
            }
        })
    }

    /// Row homotopy k = (-1)^k/(r+ℓ) moving one exterior letter into the
    /// symmetric slot with the shuffle sign; zero on bidegree (r, ℓ) = (0, 0).
    pub fn map_k(&self) -> LinearOp<VeWord<M>, VeWord<M>, R> {
        LinearOp::new(-1, |w: &VeWord<M>| {
            let total = w.sym.len() + w.ext.len();
            if total == 0 {
                return Element::zero();
            }
            let scale = Rational::inv(total as i64);
            let negate_k = w.tensor.len() % 2 == 1;
            let mut out = Element::zero();
            for (j, &letter) in w.ext.letters().iter().enumerate() {
                let neg = negate_k ^ (j % 2 == 1);
                let c = R::from_rational(&scale);
                out.add_term(
                    VeWord::new(
                        w.tensor.clone(),
                        w.sym.merge(&SymWord::generator(letter)),
                        w.coef.clone(),
                        w.ext.without(j),
                    ),
                    if neg { c.neg() } else { c },
                );
            }
            out
        })
    }

    // -- base and perturbed retracts ----------------------------------------

    /// The unperturbed column retract: (i, p, h) between (C_CE(V,M), 0) and
    /// (D_vE, δ).
    pub fn column_retract_base(&self) -> Retract<CeWord<M>, VeWord<M>, R> {
        let mut big = self.ve_complex();
        big.differential = self.delta();
        let mut small = self.ce_side();
        small.differential = LinearOp::zero(1);
        Retract::new(small, big, self.map_i(), self.map_p(), self.map_h())
    }

    /// The coefficient perturbation vanishes identically exactly when no
    /// coaction has a degree-one part; the trivial comodule is the main
    /// case.  Skipping the second perturbation then avoids evaluating dead
    /// series.
    fn b_is_zero(&self) -> bool {
        self.comodule.basis.iter().all(|m| {
            self.comodule
                .coaction(m)
                .terms()
                .all(|(Pair(s, _), _)| s.len() != 1)
        })
    }

    /// The column retract perturbed by ∂ and then by B:
    /// (i, P_M, H) between (C_CE(V,M), ∂_M) and (D_vE, D_M).
    pub fn column_retract(&self) -> Retract<CeWord<M>, VeWord<M>, R> {
        let bound = self.series_bound();
        let step1 = perturb(
            &self.column_retract_base(),
            &Perturbation::new(self.partial(), bound),
        );
        if self.b_is_zero() {
            return step1;
        }
        perturb(&step1, &Perturbation::new(self.b_map(), bound))
    }

    /// The unperturbed row retract: (j, q, k) between (C_Ca(V)⊗M, 0) and
    /// (D_vE, ∂).
    pub fn row_retract_base(&self) -> Retract<CaWord<M>, VeWord<M>, R> {
        let mut big = self.ve_complex();
        big.differential = self.partial();
        let mut small = self.ca_side();
        small.differential = LinearOp::zero(1);
        Retract::new(small, big, self.map_j(), self.map_q(), self.map_k())
    }

    /// The row retract perturbed by δ and then by B:
    /// (j_M, Q_M, K_M) between (C_Ca(V,M), δ_M) and (D_vE, D_M); a special
    /// deformation retract.
    pub fn row_retract(&self) -> Retract<CaWord<M>, VeWord<M>, R> {
        let bound = self.series_bound();
        let step1 = perturb(
            &self.row_retract_base(),
            &Perturbation::new(self.delta(), bound),
        );
        if self.b_is_zero() {
            return step1;
        }
        perturb(&step1, &Perturbation::new(self.b_map(), bound))
    }

    /// The row retract conjugated onto the stated coefficient differential:
    /// the native perturbation lands on the antipode-dressed δ̃_M, and the
    /// parity dressing A identifies (C_Ca(V,M), δ_M) ≅ (C_Ca(V,M), δ̃_M).
    pub fn row_retract_stated(&self) -> Retract<CaWord<M>, VeWord<M>, R> {
        let native = self.row_retract();
        let a = crate::coalgebra::coefficient_parity_dressing::<M, R>();
        crate::homotopy::relabel_small(&native, self.ca_side(), a.clone(), a)
    }

    // -- the van Est retract --------------------------------------------------

    /// The deformation retract (VE⁻¹_M, VE_M, Θ_M) between (C_CE(V,M), ∂_M)
    /// and (C_Ca(V,M), δ̃_M), obtained by composing the reversed row retract
    /// with the column retract.  The coalgebra-side differential is the
    /// antipode-dressed one the perturbation produces.
    pub fn van_est_retract(&self) -> Retract<CeWord<M>, CaWord<M>, R> {
        compose_retracts(&self.row_retract().reverse(), &self.column_retract())
    }

    /// The same deformation retract presented against the stated coefficient
    /// differential δ_M, by conjugating the coalgebra side with the parity
    /// dressing.
    pub fn van_est_retract_stated(&self) -> Retract<CeWord<M>, CaWord<M>, R> {
        let native = self.van_est_retract();
        let a = crate::coalgebra::coefficient_parity_dressing::<M, R>();
        crate::homotopy::relabel_big(&native, self.ca_side(), a.clone(), a)
    }

    /// The reverse composition (VE_M, VE⁻¹_M, 0) between (C_Ca(V,M), δ_M)
    /// and (C_CE(V,M), ∂_M), whose vanishing homotopy encodes
    /// VE_M ∘ VE⁻¹_M = id.
    pub fn van_est_coretract(&self) -> Retract<CaWord<M>, CeWord<M>, R> {
        compose_retracts(&self.column_retract().reverse(), &self.row_retract())
    }

    /// VE_M as a standalone map P_M ∘ j_M.
    pub fn ve_m(&self) -> LinearOp<CaWord<M>, CeWord<M>, R> {
        let c = self.column_retract();
        let r = self.row_retract();
        r.inclusion.then(&c.projection)
    }

    /// VE⁻¹_M as a standalone map Q_M ∘ i.
    pub fn ve_m_inverse(&self) -> LinearOp<CeWord<M>, CaWord<M>, R> {
        let c = self.column_retract();
        let r = self.row_retract();
        c.inclusion.then(&r.projection)
    }

    /// Θ_M = Q_M ∘ H ∘ j_M.
    pub fn theta_m(&self) -> LinearOp<CaWord<M>, CaWord<M>, R> {
        let c = self.column_retract();
        let r = self.row_retract();
        r.inclusion.then(&c.homotopy).then(&r.projection)
    }

    /// The closed formula of the coefficient van Est map:
    /// VE_M(X⊗m) = m ⊗ VE(X) + ε(X₁)·m₍₀₎ ⊗ (pr_V(m₍₋₁₎) ∧ VE(X₂⊗…⊗X_k))
    /// for k ≥ 1, and m ↦ m ⊗ 1 in tensor degree zero.
    pub fn ve_m_explicit(&self) -> LinearOp<CaWord<M>, CeWord<M>, R> {
        let com = self.comodule.clone();
        LinearOp::new(0, move |w: &CaWord<M>| {
            if w.tensor.is_empty() {
                return Element::basis(CeWord::new(w.coef.clone(), ExtWord::unit()));
            }
            let mut out = van_est_word::<R>(&w.tensor)
                .relabel(|ext| CeWord::new(w.coef.clone(), ext.clone()));
            let slots = w.tensor.slots();
            if slots[0].is_empty() {
                let tail = TensorWord::new(slots[1..].to_vec());
                for (ext_tail, c0) in van_est_word::<R>(&tail).terms() {
                    for (Pair(s, m0), c1) in com.coaction(&w.coef).terms() {
                        if s.len() != 1 {
                            continue;
                        }
                        if let Some((ext, sign)) =
                            ext_word_mul(&ExtWord::generator(s.letters()[0]), ext_tail)
                        {
                            let c = c0.mul(c1);
                            out.add_term(
                                CeWord::new(m0.clone(), ext),
                                if sign < 0 { c.neg() } else { c },
                            );
                        }
                    }
                }
            }
            out
        })
    }
}

// ---------------------------------------------------------------------------
// explicit scalar van Est maps

/// VE(X₁ ⊗ … ⊗ X_k) = pr_V(X₁) ∧ … ∧ pr_V(X_k): nonzero only when every
/// slot has symmetric degree one.
pub fn van_est_word<R: Ring>(tw: &TensorWord) -> Element<ExtWord, R> {
    let mut acc = ExtWord::unit();
    let mut sign = 1;
    for slot in tw.slots() {
        if slot.len() != 1 {
            return Element::zero();
        }
        match ext_word_mul(&acc, &ExtWord::generator(slot.letters()[0])) {
            None => return Element::zero(),
            Some((next, s)) => {
                acc = next;
                sign *= s;
            }
        }
    }
    Element::term(acc, if sign < 0 { R::one().neg() } else { R::one() })
}

pub fn van_est<R: Ring>(x: &Element<TensorWord, R>) -> Element<ExtWord, R> {
    x.map(van_est_word)
}

/// VE⁻¹(ξ₁ ∧ … ∧ ξ_ℓ) = (1/ℓ!) Σ_σ sign(σ) ξ_{σ(1)} ⊗ … ⊗ ξ_{σ(ℓ)}, with a
/// single 1/ℓ! normalization.
pub fn van_est_inverse_word<R: Ring>(ext: &ExtWord) -> Element<TensorWord, R> {
    let letters = ext.letters();
    let l = letters.len();
    let mut out = Element::zero();
    // enumerate permutations with their signs by repeated selection
    fn rec<R: Ring>(
        remaining: &mut Vec<u32>,
        chosen: &mut Vec<u32>,
        sign: i32,
        out: &mut Element<TensorWord, R>,
        scale: &Rational,
    ) {
        if remaining.is_empty() {
            let tw = TensorWord::new(chosen.iter().map(|&v| SymWord::generator(v)).collect());
            let mut c = R::from_rational(scale);
            if sign < 0 {
                c = c.neg();
            }
            out.add_term(tw, c);
            return;
        }
        for idx in 0..remaining.len() {
            // removing index idx crosses idx earlier letters
            let s = if idx % 2 == 0 { sign } else { -sign };
            let v = remaining.remove(idx);
            chosen.push(v);
            rec(remaining, chosen, s, out, scale);
            chosen.pop();
            remaining.insert(idx, v);
        }
    }
    let scale = Rational::inv_factorial(l);
    rec(&mut letters.to_vec(), &mut Vec::new(), 1, &mut out, &scale);
    out
}

pub fn van_est_inverse<R: Ring>(xi: &Element<ExtWord, R>) -> Element<TensorWord, R> {
    xi.map(van_est_inverse_word)
}

// ---------------------------------------------------------------------------
// scalar (trivial-coefficient) wrappers

/// The van Est machinery with trivial rank-one coefficients, acting on plain
/// tensor words.
pub struct ScalarVanEst<R: Ring> {
    inner: VanEst<UnitLabel, R>,
}

impl<R: Ring> Clone for ScalarVanEst<R> {
    fn clone(&self) -> Self {
        ScalarVanEst {
            inner: self.inner.clone(),
        }
    }
}

impl<R: Ring> ScalarVanEst<R> {
    pub fn new(dim: u32, caps: VeCaps) -> Self {
        ScalarVanEst {
            inner: VanEst::new(crate::coalgebra::scalar_comodule(dim), caps),
        }
    }

    pub fn machinery(&self) -> &VanEst<UnitLabel, R> {
        &self.inner
    }

    pub fn dim(&self) -> u32 {
        self.inner.dim()
    }

    /// Θ = Q ∘ H ∘ j on plain tensor words.
    pub fn theta(&self) -> LinearOp<TensorWord, TensorWord, R> {
        let theta = self.inner.theta_m();
        LinearOp::new(-1, move |tw: &TensorWord| {
            theta
                .apply_label(&CaWord::new(tw.clone(), UnitLabel))
                .relabel(|w| w.tensor.clone())
        })
    }

    /// The scalar coalgebra complex with this machinery's caps.
    pub fn ca_complex(&self) -> Complex<TensorWord, R> {
        crate::coalgebra::ca_complex(self.dim(), self.inner.caps.k_max, self.inner.caps.slot_cap)
    }

    /// Λ V with the zero differential.
    pub fn ext_complex(&self) -> Complex<ExtWord, R> {
        let dim = self.dim();
        Complex::new(
            format!("Λ V dim={dim}"),
            0..=dim as i64,
            LinearOp::zero(1),
            move |d| ext_words(dim, d as usize),
        )
    }

    /// The deformation retract (VE⁻¹, VE, Θ) between (Λ V, 0) and
    /// (C_Ca(V), δ_ca) on plain words.
    pub fn van_est_retract(&self) -> Retract<ExtWord, TensorWord, R> {
        let r = self.inner.van_est_retract();
        let small = self.ext_complex();
        let big = self.ca_complex();
        let inclusion = {
            let inner = r.inclusion.clone();
            LinearOp::new(0, move |ext: &ExtWord| {
                inner
                    .apply_label(&CeWord::new(UnitLabel, ext.clone()))
                    .relabel(|w| w.tensor.clone())
            })
        };
        let projection = {
            let inner = r.projection.clone();
            LinearOp::new(0, move |tw: &TensorWord| {
                inner
                    .apply_label(&CaWord::new(tw.clone(), UnitLabel))
                    .relabel(|w| w.ext.clone())
            })
        };
        let homotopy = {
            let inner = r.homotopy.clone();
            LinearOp::new(-1, move |tw: &TensorWord| {
                inner
                    .apply_label(&CaWord::new(tw.clone(), UnitLabel))
                    .relabel(|w| w.tensor.clone())
            })
        };
        Retract::new(small, big, inclusion, projection, homotopy)
    }
}

/// The van Est machinery over the rationals for quick scalar checks.
pub fn scalar_over_rationals(dim: u32, deg: usize) -> ScalarVanEst<Rational> {
    ScalarVanEst::new(dim, VeCaps::uniform(deg))
}

// ---------------------------------------------------------------------------
// closed-form oracles for the perturbation series

/// Lemma-style closed form for (∂h)ⁿ on j-type words X ⊗ 𝟙 ⊗ m ⊗ 1:
/// (-1)ⁿ (X₁⊗…⊗X_{k-n}) ⊗ (X_{k-n+1})₍₀₎ ⊗ m ⊗ pr_V((X_{k-n+1})₍₁₎) ∧
/// pr_V(X_{k-n+2}) ∧ … ∧ pr_V(X_k).
pub fn partial_h_power_closed_form<M: Label, R: Ring>(
    tw: &TensorWord,
    coef: &M,
    n: usize,
) -> Element<VeWord<M>, R> {
    let k = tw.len();
    if n == 0 {
        return Element::basis(VeWord::new(
            tw.clone(),
            SymWord::unit(),
            coef.clone(),
            ExtWord::unit(),
        ));
    }
    if n > k {
        return Element::zero();
    }
    let slots = tw.slots();
    // the trailing n-1 slots must project to V
    let mut tail = Vec::new();
    for slot in &slots[k - n + 1..] {
        if slot.len() != 1 {
            return Element::zero();
        }
        tail.push(slot.letters()[0]);
    }
    let split_slot = &slots[k - n];
    let head = TensorWord::new(slots[..k - n].to_vec());
    let mut out = Element::zero();
    for pos in 0..split_slot.len() {
        let letter = split_slot.letters()[pos];
        // wedge letter ∧ tail in order
        let mut ext = ExtWord::generator(letter);
        let mut sign = 1;
        let mut ok = true;
        for &t in &tail {
            match ext_word_mul(&ext, &ExtWord::generator(t)) {
                None => {
                    ok = false;
                    break;
                }
                Some((next, s)) => {
                    ext = next;
                    sign *= s;
                }
            }
        }
        if !ok {
            continue;
        }
        let neg = (n % 2 == 1) ^ (sign < 0);
        out.add_term(
            VeWord::new(head.clone(), split_slot.without(pos), coef.clone(), ext),
            if neg { R::one().neg() } else { R::one() },
        );
    }
    out
}

/// Lemma-style closed form for (δk)ⁿ on i-type words 1 ⊗ 𝟙 ⊗ m ⊗ ξ:
/// (-1)ⁿ (ℓ-n)!/ℓ! (pr_V(ξ₍₋ₙ₎) ⊗ … ⊗ pr_V(ξ₍₋₁₎)) ⊗ 𝟙 ⊗ m ⊗ ξ₍₀₎.
pub fn delta_k_power_closed_form<M: Label, R: Ring>(
    ext: &ExtWord,
    coef: &M,
    n: usize,
) -> Element<VeWord<M>, R> {
    let l = ext.len();
    if n > l {
        return Element::zero();
    }
    // (ℓ-n)!/ℓ! = 1/(ℓ·(ℓ-1)⋯(ℓ-n+1))
    let mut scale = Rational::one();
    for f in (l - n + 1)..=l {
        scale = &scale * &Rational::inv(f as i64);
    }
    let mut out = Element::zero();
    for (blocks, sign) in crate::graded::iterated_shuffle_ext(ext, n + 1) {
        // the first n blocks carry the pr_V projections
        if blocks[..n].iter().any(|b| b.len() != 1) {
            continue;
        }
        let tensor = TensorWord::new(
            blocks[..n]
                .iter()
                .map(|b| SymWord::generator(b.letters()[0]))
                .collect(),
        );
        let neg = (n % 2 == 1) ^ (sign < 0);
        let c = R::from_rational(&scale);
        out.add_term(
            VeWord::new(tensor, SymWord::unit(), coef.clone(), blocks[n].clone()),
            if neg { c.neg() } else { c },
        );
    }
    out
}

/// Lemma-style closed form for (kB)ⁿ on j-type words:
/// (1/n!) X ⊗ (pr_V(m₍₋ₙ₎) ∨ … ∨ pr_V(m₍₋₁₎)) ⊗ m₍₀₎ ⊗ 1.
pub fn k_b_power_closed_form<M: Label, R: Ring>(
    com: &Comodule<M, R>,
    tw: &TensorWord,
    coef: &M,
    n: usize,
) -> Element<VeWord<M>, R> {
    // iterate the coaction, collecting one V-letter per step
    let mut acc: Element<Pair<SymWord, M>, R> = Element::basis(Pair(SymWord::unit(), coef.clone()));
    for _ in 0..n {
        acc = acc.map(|Pair(w, m)| {
            let mut out = Element::zero();
            for (Pair(s, m0), c) in com.coaction(m).terms() {
                if s.len() == 1 {
                    out.add_term(Pair(w.merge(s), m0.clone()), c.clone());
                }
            }
            out
        });
    }
    acc.relabel(|Pair(w, m)| VeWord::new(tw.clone(), w.clone(), m.clone(), ExtWord::unit()))
        .scale_rational(&Rational::inv_factorial(n))
}

/// j_M(X ⊗ m) = X ⊗ s(m₍₋₁₎) ⊗ m₍₀₎ ⊗ 1 as a closed formula.
pub fn j_m_closed_form<M: Label, R: Ring>(
    com: &Comodule<M, R>,
) -> LinearOp<CaWord<M>, VeWord<M>, R> {
    let com = com.clone();
    LinearOp::new(0, move |w: &CaWord<M>| {
        let mut out = Element::zero();
        for (Pair(s, m0), c) in com.coaction(&w.coef).terms() {
            let c = if s.len() % 2 == 0 { c.clone() } else { c.neg() };
            out.add_term(
                VeWord::new(w.tensor.clone(), s.clone(), m0.clone(), ExtWord::unit()),
                c,
            );
        }
        out
    })
}
