//! Flat-coordinate polynomial model of the differential Hochschild complex:
//! symmetrized derivatives, the insertion pairing, the symbol calculus in
//! its scalar, operator-valued and fibered variants, the Hochschild
//! differential by evaluation, and the multivector-field retract with its
//! global homotopy.

use crate::coalgebra::{
    split_comodule, submodule_comodule, sym_tensor_trivial_comodule, sym_tensor_trivial_retract,
    CaWord, Comodule,
};
use crate::element::{Element, Label, Pair, Sum};
use crate::graded::{sym_words_up_to, ExtWord, SymWord, TensorWord};
use crate::homotopy::{compose_retracts, direct_sum, Complex, LinearOp, Retract};
use crate::polynomial::Polynomial;
use crate::rational::Rational;
use crate::ring::Ring;
use crate::van_est::{van_est, van_est_inverse, ScalarVanEst, VeCaps};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// The flat coordinate model: scalar ring Q[x1..xn], module of vector fields
/// free on the coordinate derivations, all Christoffel data zero.
#[derive(Clone, Copy, Debug)]
pub struct FlatModel {
    pub n: u32,
}

/// An element of Γ(Sym^d T*M) stored by its exact values on coordinate
/// multisets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymTensorForm {
    pub degree: usize,
    values: BTreeMap<SymWord, Polynomial>,
}

impl SymTensorForm {
    pub fn constant(f: Polynomial) -> Self {
        let mut values = BTreeMap::new();
        if !f.is_zero() {
            values.insert(SymWord::unit(), f);
        }
        SymTensorForm { degree: 0, values }
    }

    pub fn zero(degree: usize) -> Self {
        SymTensorForm {
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn value(&self, args: &SymWord) -> Polynomial {
        assert_eq!(args.len(), self.degree, "evaluation arity mismatch");
        self.values
            .get(args)
            .cloned()
            .unwrap_or_else(Polynomial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Polynomial::is_zero)
    }
}

impl FlatModel {
    pub fn new(n: u32) -> Self {
        FlatModel { n }
    }

    /// The symmetrized covariant derivative of a form, one degree up:
    /// (Dα)(X₀,…,X_d) = Σᵢ ∂_{Xᵢ} α(X₀,…,î,…,X_d) in flat coordinates.
    pub fn sym_derivative_step(&self, alpha: &SymTensorForm) -> SymTensorForm {
        let degree = alpha.degree + 1;
        let mut values = BTreeMap::new();
        for args in sym_words_up_to(self.n, degree) {
            if args.len() != degree {
                continue;
            }
            let mut acc = Polynomial::zero();
            for pos in 0..degree {
                let rest = args.without(pos);
                let v = alpha.value(&rest);
                acc = &acc + &v.partial(args.letters()[pos] as usize);
            }
            if !acc.is_zero() {
                values.insert(args, acc);
            }
        }
        SymTensorForm { degree, values }
    }

    /// D^d f starting from a function.
    pub fn sym_derivative(&self, f: &Polynomial, d: usize) -> SymTensorForm {
        let mut form = SymTensorForm::constant(f.clone());
        for _ in 0..d {
            form = self.sym_derivative_step(&form);
        }
        form
    }

    /// Iterated first-slot insertion of a symmetric multivector word; zero
    /// when the insertion degree exceeds the form degree.
    pub fn insert(&self, word: &SymWord, alpha: &SymTensorForm) -> SymTensorForm {
        if word.len() > alpha.degree {
            return SymTensorForm::zero(0);
        }
        let degree = alpha.degree - word.len();
        let mut values = BTreeMap::new();
        for args in sym_words_up_to(self.n, degree) {
            if args.len() != degree {
                continue;
            }
            let v = alpha.value(&word.merge(&args));
            if !v.is_zero() {
                values.insert(args, v);
            }
        }
        SymTensorForm { degree, values }
    }

    /// One factor of the symbol calculus: (1/d!) ins(W)(D^d f) for a single
    /// symmetric word W of degree d.
    pub fn op_factor(&self, word: &SymWord, f: &Polynomial) -> Polynomial {
        let d = word.len();
        let form = self.sym_derivative(f, d);
        let inserted = self.insert(word, &form);
        inserted
            .value(&SymWord::unit())
            .scale(&Rational::inv_factorial(d))
    }

    /// The scalar symbol calculus: Op(X)(f₁,…,f_k) with the product of the
    /// per-argument factors, extended linearly over polynomial coefficients.
    pub fn op_apply(
        &self,
        symbol: &Element<TensorWord, Polynomial>,
        args: &[Polynomial],
    ) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (tw, coef) in symbol.terms() {
            if tw.len() != args.len() {
                panic!(
                    "operator arity mismatch: {} tensor slots, {} arguments",
                    tw.len(),
                    args.len()
                );
            }
            let mut prod = coef.clone();
            for (slot, f) in tw.slots().iter().zip(args) {
                if prod.is_zero() {
                    break;
                }
                prod = &prod * &self.op_factor(slot, f);
            }
            acc = &acc + &prod;
        }
        acc
    }

    /// The symbol calculus as an evaluation closure.
    pub fn operator(&self, symbol: &Element<TensorWord, Polynomial>, arity: usize) -> MultiOp {
        let model = *self;
        let symbol = symbol.clone();
        MultiOp {
            arity,
            eval: Arc::new(move |args: &[Polynomial]| model.op_apply(&symbol, args)),
        }
    }
}

// ---------------------------------------------------------------------------
// multidifferential operators as evaluation closures

/// A scalar multidifferential operator, known only through evaluation.
pub struct MultiOp {
    pub arity: usize,
    eval: Arc<dyn Fn(&[Polynomial]) -> Polynomial + Send + Sync>,
}

impl Clone for MultiOp {
    fn clone(&self) -> Self {
        MultiOp {
            arity: self.arity,
            eval: Arc::clone(&self.eval),
        }
    }
}

impl MultiOp {
    pub fn new(
        arity: usize,
        eval: impl Fn(&[Polynomial]) -> Polynomial + Send + Sync + 'static,
    ) -> Self {
        MultiOp {
            arity,
            eval: Arc::new(eval),
        }
    }

    pub fn apply(&self, args: &[Polynomial]) -> Polynomial {
        assert_eq!(args.len(), self.arity, "operator arity mismatch");
        (self.eval)(args)
    }

    /// Cup product by evaluation: (D ∪ E)(a₁,…,a_{k+l}) = D(…)·E(…).
    pub fn cup(&self, other: &MultiOp) -> MultiOp {
        let (d, e) = (self.clone(), other.clone());
        let k = self.arity;
        MultiOp::new(self.arity + other.arity, move |args| {
            &d.apply(&args[..k]) * &e.apply(&args[k..])
        })
    }
}

/// The Hochschild differential of a scalar cochain, by evaluation on the
/// symmetric bimodule structure.
pub fn hochschild_delta(op: &MultiOp) -> MultiOp {
    let inner = op.clone();
    let k = op.arity;
    MultiOp::new(k + 1, move |args: &[Polynomial]| {
        let mut acc = &args[0] * &inner.apply(&args[1..]);
        for i in 0..k {
            let mut merged: Vec<Polynomial> = Vec::with_capacity(k);
            merged.extend_from_slice(&args[..i]);
            merged.push(&args[i] * &args[i + 1]);
            merged.extend_from_slice(&args[i + 2..]);
            let t = inner.apply(&merged);
            if (i + 1) % 2 == 1 {
                acc = &acc - &t;
            } else {
                acc = &acc + &t;
            }
        }
        let last = &inner.apply(&args[..k]) * &args[k];
        if (k + 1) % 2 == 1 {
            acc = &acc - &last;
        } else {
            acc = &acc + &last;
        }
        acc
    })
}

/// A differential operator between free modules of ranks rE and rF, known
/// through evaluation on polynomial sections.
pub struct SectionOp {
    pub rank_in: usize,
    pub rank_out: usize,
    eval: Arc<dyn Fn(&[Polynomial]) -> Vec<Polynomial> + Send + Sync>,
}

impl Clone for SectionOp {
    fn clone(&self) -> Self {
        SectionOp {
            rank_in: self.rank_in,
            rank_out: self.rank_out,
            eval: Arc::clone(&self.eval),
        }
    }
}

impl SectionOp {
    pub fn new(
        rank_in: usize,
        rank_out: usize,
        eval: impl Fn(&[Polynomial]) -> Vec<Polynomial> + Send + Sync + 'static,
    ) -> Self {
        SectionOp {
            rank_in,
            rank_out,
            eval: Arc::new(eval),
        }
    }

    pub fn apply(&self, section: &[Polynomial]) -> Vec<Polynomial> {
        assert_eq!(section.len(), self.rank_in);
        (self.eval)(section)
    }

    pub fn scale_left(&self, f: &Polynomial) -> SectionOp {
        let inner = self.clone();
        let f = f.clone();
        SectionOp::new(self.rank_in, self.rank_out, move |s| {
            inner.apply(s).into_iter().map(|v| &v * &f).collect()
        })
    }

    pub fn scale_right(&self, f: &Polynomial) -> SectionOp {
        let inner = self.clone();
        let f = f.clone();
        SectionOp::new(self.rank_in, self.rank_out, move |s| {
            let scaled: Vec<Polynomial> = s.iter().map(|v| v * &f).collect();
            inner.apply(&scaled)
        })
    }

    pub fn add(&self, other: &SectionOp) -> SectionOp {
        let (a, b) = (self.clone(), other.clone());
        SectionOp::new(self.rank_in, self.rank_out, move |s| {
            a.apply(s)
                .into_iter()
                .zip(b.apply(s))
                .map(|(x, y)| &x + &y)
                .collect()
        })
    }

    pub fn neg(&self) -> SectionOp {
        let a = self.clone();
        SectionOp::new(self.rank_in, self.rank_out, move |s| {
            a.apply(s).into_iter().map(|v| -&v).collect()
        })
    }
}

/// A multidifferential cochain with values in operators between sections.
pub struct MultiOpSections {
    pub arity: usize,
    eval: Arc<dyn Fn(&[Polynomial]) -> SectionOp + Send + Sync>,
}

impl Clone for MultiOpSections {
    fn clone(&self) -> Self {
        MultiOpSections {
            arity: self.arity,
            eval: Arc::clone(&self.eval),
        }
    }
}

impl MultiOpSections {
    pub fn new(
        arity: usize,
        eval: impl Fn(&[Polynomial]) -> SectionOp + Send + Sync + 'static,
    ) -> Self {
        MultiOpSections {
            arity,
            eval: Arc::new(eval),
        }
    }

    pub fn apply(&self, args: &[Polynomial]) -> SectionOp {
        assert_eq!(args.len(), self.arity);
        (self.eval)(args)
    }
}

/// The Hochschild differential for operator-valued cochains: the left action
/// multiplies the output section, the right action feeds the multiplier into
/// the operator argument.
pub fn hochschild_delta_sections(op: &MultiOpSections) -> MultiOpSections {
    let inner = op.clone();
    let k = op.arity;
    MultiOpSections::new(k + 1, move |args: &[Polynomial]| {
        let mut acc = inner.apply(&args[1..]).scale_left(&args[0]);
        for i in 0..k {
            let mut merged: Vec<Polynomial> = Vec::with_capacity(k);
            merged.extend_from_slice(&args[..i]);
            merged.push(&args[i] * &args[i + 1]);
            merged.extend_from_slice(&args[i + 2..]);
            let t = inner.apply(&merged);
            acc = acc.add(&if (i + 1) % 2 == 1 { t.neg() } else { t });
        }
        let last = inner.apply(&args[..k]).scale_right(&args[k]);
        acc.add(&if (k + 1) % 2 == 1 { last.neg() } else { last })
    })
}

// ---------------------------------------------------------------------------
// scalar HKR maps

/// hkr = Op ∘ VE⁻¹.  Symbols are the operator representation, so the map is
/// the van Est integration; `FlatModel::operator` provides the evaluation.
pub fn hkr(xi: &Element<ExtWord, Polynomial>) -> Element<TensorWord, Polynomial> {
    van_est_inverse(xi)
}

/// hkr⁻¹ = VE ∘ Op⁻¹ on the symbol representation.
pub fn hkr_inverse(symbol: &Element<TensorWord, Polynomial>) -> Element<ExtWord, Polynomial> {
    van_est(symbol)
}

/// The scalar flat model bundled with its van Est machinery.
pub struct ScalarModel {
    pub flat: FlatModel,
    pub vanest: ScalarVanEst<Polynomial>,
}

impl ScalarModel {
    pub fn new(n: u32, caps: VeCaps) -> Self {
        ScalarModel {
            flat: FlatModel::new(n),
            vanest: ScalarVanEst::new(n, caps),
        }
    }

    /// The global homotopy on symbols: Θ^∇ = Op ∘ Θ ∘ Op⁻¹.
    pub fn theta_nabla(&self) -> LinearOp<TensorWord, TensorWord, Polynomial> {
        self.vanest.theta()
    }

    /// The HKR deformation retract on symbols: (hkr, hkr⁻¹, Θ^∇) between
    /// multivector fields and the symbol complex.
    pub fn hkr_retract(&self) -> Retract<ExtWord, TensorWord, Polynomial> {
        self.vanest.van_est_retract()
    }

    /// A complete certificate for a k-cochain symbol: closedness residual,
    /// primitive, class representative, and the reconstruction residual
    /// x - hkr hkr⁻¹ x - δΘx - Θδx, which the retract identity makes exactly
    /// zero.
    pub fn certificate(&self, symbol: &Element<TensorWord, Polynomial>) -> Certificate {
        let delta = crate::coalgebra::delta_ca::<Polynomial>();
        let theta = self.theta_nabla();
        let closedness = delta.apply(symbol);
        let primitive = theta.apply(symbol);
        let class = hkr(&hkr_inverse(symbol));
        let reconstruction = symbol
            .sub(&class)
            .sub(&delta.apply(&primitive))
            .sub(&theta.apply(&closedness));
        Certificate {
            n: self.flat.n,
            input: symbol.clone(),
            closedness,
            primitive,
            class,
            reconstruction,
        }
    }
}

/// Certified decomposition of a Hochschild cochain.
pub struct Certificate {
    pub n: u32,
    pub input: Element<TensorWord, Polynomial>,
    pub closedness: Element<TensorWord, Polynomial>,
    pub primitive: Element<TensorWord, Polynomial>,
    pub class: Element<TensorWord, Polynomial>,
    pub reconstruction: Element<TensorWord, Polynomial>,
}

impl Certificate {
    pub fn is_closed(&self) -> bool {
        self.closedness.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "input": self.input.to_json(),
            "closed": self.is_closed(),
            "closedness_residual": self.closedness.to_json(),
            "primitive": self.primitive.to_json(),
            "class": hkr_inverse(&self.class).to_json(),
            "class_symbol": self.class.to_json(),
            "reconstruction_residual": self.reconstruction.to_json(),
        })
    }
}

/// Parses a scalar-variant symbol:
/// `{"variant": "scalar", "n": int, "terms": [[[[i,...],...], poly], ...]}`
/// with one-based basis indices, tensor words as lists of symmetric words,
/// and polynomial coefficients in the documented wire format.
pub fn parse_scalar_symbol(v: &Value) -> Result<(Element<TensorWord, Polynomial>, u32), String> {
    let obj = v.as_object().ok_or("symbol JSON must be an object")?;
    match obj.get("variant").and_then(Value::as_str) {
        None | Some("scalar") => {}
        Some(other) => return Err(format!("unsupported symbol variant {other:?}")),
    }
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or("symbol JSON needs an integer field \"n\"")? as u32;
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or("symbol JSON needs an array field \"terms\"")?;
    let mut out = Element::zero();
    for t in terms {
        let pair = t
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or("each term is a [label, coefficient] pair")?;
        let slots = pair[0]
            .as_array()
            .ok_or("tensor word must be a list of symmetric words")?;
        let mut word = Vec::new();
        for s in slots {
            let letters = crate::graded::indices_from_json(s)?;
            if letters.iter().any(|&i| i >= n) {
                return Err(format!("basis index out of range for n = {n}"));
            }
            word.push(SymWord::new(letters));
        }
        let (coef, poly_n) = Polynomial::from_json(&pair[1])?;
        if poly_n != n as usize {
            return Err(format!(
                "coefficient declares {poly_n} variables, symbol declares {n}"
            ));
        }
        out.add_term(TensorWord::new(word), coef);
    }
    Ok((out, n))
}

/// Serializes a scalar symbol with an explicit variable count.
pub fn scalar_symbol_to_json(
    symbol: &Element<TensorWord, Polynomial>,
    n: u32,
) -> Result<Value, String> {
    let terms: Result<Vec<Value>, String> = symbol
        .terms()
        .map(|(tw, c)| Ok(json!([tw.to_json(), c.to_json(n as usize)?])))
        .collect();
    Ok(json!({ "variant": "scalar", "n": n, "terms": terms? }))
}

/// Evaluates an operator-evaluation request
/// `{"symbol": ..., "args": [poly, ...], "extra": ...}` for the scalar
/// variant; `extra` is reserved for the operator-valued variants, which are
/// exercised in-process.
pub fn evaluate_request(v: &Value) -> Result<Value, String> {
    let symbol_v = v.get("symbol").ok_or("request needs a \"symbol\"")?;
    let (symbol, n) = parse_scalar_symbol(symbol_v)?;
    let args_v = v
        .get("args")
        .and_then(Value::as_array)
        .ok_or("request needs an \"args\" array")?;
    let mut args = Vec::new();
    for a in args_v {
        let (p, pn) = Polynomial::from_json(a)?;
        if pn != n as usize {
            return Err(format!(
                "argument declares {pn} variables, symbol declares {n}"
            ));
        }
        args.push(p);
    }
    if let Some((w, _)) = symbol.terms().find(|(w, _)| w.len() != args.len()) {
        return Err(format!(
            "arity mismatch: tensor word {w} has {} slots, {} arguments given",
            w.len(),
            args.len()
        ));
    }
    let value = FlatModel::new(n).op_apply(&symbol, &args);
    Ok(json!({ "n": n, "value": value.to_json(n as usize)? }))
}

// ---------------------------------------------------------------------------
// operator-valued variants

/// Basis label of Hom(E, F) for free modules: the elementary matrix sending
/// the `col`-th basis section of E to the `row`-th basis section of F.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MatLabel {
    pub row: u32,
    pub col: u32,
}

impl fmt::Display for MatLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}{}", self.row + 1, self.col + 1)
    }
}

impl Label for MatLabel {
    fn degree(&self) -> i64 {
        0
    }
    fn grading(&self) -> String {
        "hom".into()
    }
    fn to_json(&self) -> Value {
        json!([self.row + 1, self.col + 1])
    }
}

/// The operator-valued model: cochains valued in differential operators
/// between trivial bundles of ranks rE and rF.
pub struct BundleModel {
    pub flat: FlatModel,
    pub rank_e: usize,
    pub rank_f: usize,
}

pub type BundleCoef = Pair<SymWord, MatLabel>;

impl BundleModel {
    pub fn new(n: u32, rank_e: usize, rank_f: usize) -> Self {
        BundleModel {
            flat: FlatModel::new(n),
            rank_e,
            rank_f,
        }
    }

    pub fn hom_basis(&self) -> Vec<MatLabel> {
        let mut out = Vec::new();
        for row in 0..self.rank_f as u32 {
            for col in 0..self.rank_e as u32 {
                out.push(MatLabel { row, col });
            }
        }
        out
    }

    /// The coefficient comodule Sym V ⊗ Hom(E, F).
    pub fn comodule(&self, cap: usize) -> Comodule<BundleCoef, Polynomial> {
        sym_tensor_trivial_comodule(self.flat.n, cap, self.hom_basis())
    }

    /// Evaluation of an operator-valued symbol: the scalar part acts on the
    /// arguments, the value block derives the section and applies the matrix.
    pub fn op_apply(
        &self,
        symbol: &Element<CaWord<BundleCoef>, Polynomial>,
        args: &[Polynomial],
    ) -> SectionOp {
        let flat = self.flat;
        let symbol = symbol.clone();
        let args: Vec<Polynomial> = args.to_vec();
        let (rank_e, rank_f) = (self.rank_e, self.rank_f);
        SectionOp::new(rank_e, rank_f, move |section: &[Polynomial]| {
            let mut out = vec![Polynomial::zero(); rank_f];
            for (w, coef) in symbol.terms() {
                assert_eq!(w.tensor.len(), args.len(), "operator arity mismatch");
                let mut scalar = coef.clone();
                for (slot, f) in w.tensor.slots().iter().zip(&args) {
                    scalar = &scalar * &flat.op_factor(slot, f);
                }
                if scalar.is_zero() {
                    continue;
                }
                let Pair(value_word, mat) = &w.coef;
                let derived = flat.op_factor(value_word, &section[mat.col as usize]);
                let v = &scalar * &derived;
                out[mat.row as usize] = &out[mat.row as usize] + &v;
            }
            out
        })
    }

    pub fn operator(
        &self,
        symbol: &Element<CaWord<BundleCoef>, Polynomial>,
        arity: usize,
    ) -> MultiOpSections {
        let this = BundleModel {
            flat: self.flat,
            rank_e: self.rank_e,
            rank_f: self.rank_f,
        };
        let symbol = symbol.clone();
        MultiOpSections::new(arity, move |args| this.op_apply(&symbol, args))
    }

    /// The collapse of the coefficient complex onto Hom(E, F) in degree 0.
    pub fn retract(
        &self,
        k_max: usize,
        cap: usize,
    ) -> Retract<MatLabel, CaWord<BundleCoef>, Polynomial> {
        sym_tensor_trivial_retract(self.flat.n, k_max, cap, cap, self.hom_basis())
    }
}

/// The fibered model for a coordinate projection: base coordinates first,
/// fiber coordinates after them; cochain arguments live on the base, values
/// are differential operators on the total space.
pub struct SubmersionModel {
    pub base: u32,
    pub fiber: u32,
}

impl SubmersionModel {
    pub fn new(base: u32, fiber: u32) -> Self {
        SubmersionModel { base, fiber }
    }

    pub fn total(&self) -> FlatModel {
        FlatModel::new(self.base + self.fiber)
    }

    /// Pull-back of a base polynomial to the total space (the inclusion of
    /// the first coordinates).
    pub fn pullback(&self, f: &Polynomial) -> Polynomial {
        assert!(
            f.width() <= self.base as usize,
            "pullback argument mentions fiber variables"
        );
        f.clone()
    }

    /// The coefficient comodule Sym(hor) ⊗ Sym(vert) for the splitting of
    /// the total tangent module.  Labels: first factor over the horizontal
    /// sub-basis, second over the vertical one.
    pub fn comodule(&self, cap: usize) -> Comodule<Pair<SymWord, SymWord>, Polynomial> {
        split_comodule(self.base, cap, self.fiber, cap)
    }

    /// Total-space word of a split coefficient label: horizontal letters keep
    /// their index, vertical letters shift past the base block.
    pub fn include_label(&self, w: &Pair<SymWord, SymWord>) -> SymWord {
        let mut letters: Vec<u32> = w.0.letters().to_vec();
        letters.extend(w.1.letters().iter().map(|&i| i + self.base));
        SymWord::new(letters)
    }

    /// Evaluation of a fibered symbol on base arguments and a total-space
    /// function.
    pub fn op_apply(
        &self,
        symbol: &Element<CaWord<Pair<SymWord, SymWord>>, Polynomial>,
        args: &[Polynomial],
        g: &Polynomial,
    ) -> Polynomial {
        let total = self.total();
        let mut acc = Polynomial::zero();
        for (w, coef) in symbol.terms() {
            assert_eq!(w.tensor.len(), args.len(), "operator arity mismatch");
            let mut prod = coef.clone();
            for (slot, f) in w.tensor.slots().iter().zip(args) {
                // horizontal slots act on pulled-back base functions
                prod = &prod * &total.op_factor(slot, &self.pullback(f));
            }
            let value_word = self.include_label(&w.coef);
            prod = &prod * &total.op_factor(&value_word, g);
            acc = &acc + &prod;
        }
        acc
    }

    /// The collapse onto vertical symbols in degree 0.
    pub fn retract(
        &self,
        k_max: usize,
        cap: usize,
    ) -> Retract<SymWord, CaWord<Pair<SymWord, SymWord>>, Polynomial> {
        sym_tensor_trivial_retract(self.base, k_max, cap, cap, sym_words_up_to(self.fiber, cap))
    }
}

// ---------------------------------------------------------------------------
// tangential and foliation models

/// Tangential model: the submanifold is the zero set of the last n - m
/// coordinates.
pub struct SubmanifoldModel {
    pub n: u32,
    pub tangent: u32,
}

/// Structural witness for a failed tangential membership test.
pub struct TangentialWitness {
    pub word: TensorWord,
    pub coefficient: Polynomial,
    pub normal_letters: u32,
    /// an evaluation exposing the failure for one-argument symbols, when
    /// available: (argument, value ∉ J_C)
    pub evaluation: Option<(Polynomial, Polynomial)>,
}

impl TangentialWitness {
    pub fn to_json(&self, n: usize) -> Value {
        json!({
            "word": self.word.to_json(),
            "coefficient": self.coefficient.to_json(n).unwrap_or(Value::Null),
            "normal_letters": self.normal_letters,
            "evaluation": self.evaluation.as_ref().map(|(arg, val)| json!({
                "argument": arg.to_json(n).unwrap_or(Value::Null),
                "value": val.to_json(n).unwrap_or(Value::Null),
            })),
        })
    }
}

impl SubmanifoldModel {
    pub fn new(n: u32, tangent: u32) -> Self {
        assert!(tangent <= n);
        SubmanifoldModel { n, tangent }
    }

    fn normal_vars(&self) -> Vec<usize> {
        (self.tangent..self.n).map(|i| i as usize).collect()
    }

    /// Exact membership of a symbol in the tangential subcomplex: for each
    /// word, the coefficient must lie in J^t for t the number of normal
    /// letters.
    pub fn tangential_check(
        &self,
        symbol: &Element<TensorWord, Polynomial>,
    ) -> Result<(), TangentialWitness> {
        let normals = self.normal_vars();
        for (tw, coef) in symbol.terms() {
            let t: u32 = tw
                .slots()
                .iter()
                .flat_map(|s| s.letters())
                .filter(|&&i| i >= self.tangent)
                .count() as u32;
            if !coef.in_ideal_power(&normals, t) {
                // an evaluation witness for one-slot symbols: feed the
                // product of the normal coordinates of the slot
                let evaluation = if tw.len() == 1 {
                    let flat = FlatModel::new(self.n);
                    let mut arg = Polynomial::one();
                    for &i in tw.slots()[0].letters() {
                        if i >= self.tangent {
                            arg = &arg * &Polynomial::var(i as usize);
                        }
                    }
                    let val =
                        flat.op_apply(&Element::term(tw.clone(), coef.clone()), &[arg.clone()]);
                    (!val.in_ideal_power(&normals, 1)).then_some((arg, val))
                } else {
                    None
                };
                return Err(TangentialWitness {
                    word: tw.clone(),
                    coefficient: coef.clone(),
                    normal_letters: t,
                    evaluation,
                });
            }
        }
        Ok(())
    }

    /// A window of spanning elements for the tangential subcomplex in tensor
    /// degree `k`: words over the spanning set {∂_i (tangent)} ∪
    /// {x_l ∂_j (both normal)} with slot degree ≤ slot_cap.
    pub fn spanning_window(
        &self,
        k: usize,
        slot_cap: usize,
    ) -> Vec<Element<TensorWord, Polynomial>> {
        // spanning generators of the tangential module
        let mut generators: Vec<Element<SymWord, Polynomial>> = Vec::new();
        for i in 0..self.tangent {
            generators.push(Element::term(SymWord::generator(i), Polynomial::one()));
        }
        for l in self.tangent..self.n {
            for j in self.tangent..self.n {
                generators.push(Element::term(
                    SymWord::generator(j),
                    Polynomial::var(l as usize),
                ));
            }
        }
        // slot values: products of up to slot_cap generators
        let mut slots: Vec<Element<SymWord, Polynomial>> =
            vec![Element::term(SymWord::unit(), Polynomial::one())];
        let mut by_degree = vec![slots.clone()];
        for _ in 1..=slot_cap {
            let prev = by_degree.last().unwrap().clone();
            let mut next = Vec::new();
            for e in &prev {
                for g in &generators {
                    next.push(crate::graded::sym_mul(e, g));
                }
            }
            by_degree.push(next.clone());
            slots.extend(next);
        }
        // tensor words: k-fold products
        let mut out: Vec<Element<TensorWord, Polynomial>> =
            vec![Element::term(TensorWord::unit(), Polynomial::one())];
        for _ in 0..k {
            let mut next = Vec::new();
            for base in &out {
                for slot in &slots {
                    let mut combined = Element::zero();
                    for (tw, c1) in base.terms() {
                        for (s, c2) in slot.terms() {
                            combined.add_term(tw.push(s.clone()), c1.mul(c2));
                        }
                    }
                    next.push(combined);
                }
            }
            out = next;
        }
        out.retain(|e| !e.is_zero());
        out
    }

    /// The coefficient comodule for operator-on-the-submanifold values:
    /// Sym U over the restricted ring, U the tangent sub-basis of the
    /// ambient restriction.
    pub fn diffop_c_comodule(&self, cap: usize) -> Comodule<SymWord, Polynomial> {
        let image: Vec<u32> = (0..self.tangent).collect();
        submodule_comodule(self.n, &image, cap).expect("tangent inclusion is injective")
    }
}

/// Foliation model: the distribution spanned by the first `leaf` coordinate
/// derivations, with full-ring coefficients.
pub struct FoliationModel {
    pub n: u32,
    pub leaf: u32,
}

impl FoliationModel {
    pub fn new(n: u32, leaf: u32) -> Self {
        assert!(leaf <= n);
        FoliationModel { n, leaf }
    }

    /// Membership: every letter of every word lies in a leaf direction.
    pub fn leafwise_check(
        &self,
        symbol: &Element<TensorWord, Polynomial>,
    ) -> Result<(), TensorWord> {
        for (tw, _) in symbol.terms() {
            if tw
                .slots()
                .iter()
                .flat_map(|s| s.letters())
                .any(|&i| i >= self.leaf)
            {
                return Err(tw.clone());
            }
        }
        Ok(())
    }

    /// The leafwise van Est machinery: module of rank `leaf` over the full
    /// polynomial ring in n variables.
    pub fn vanest(&self, caps: VeCaps) -> ScalarVanEst<Polynomial> {
        ScalarVanEst::new(self.leaf, caps)
    }
}

// ---------------------------------------------------------------------------
// projectable model

/// Labels of the projectable complex: the base part carries purely
/// horizontal words over base-ring coefficients, the vertical part carries
/// total-space words with at least one vertical letter.
pub type ProjectableLabel = Sum<TensorWord, TensorWord>;

/// The projectable model for a coordinate projection: splits the projectable
/// complex into a base copy and the vanishing part, realized as a direct sum
/// of deformation retracts.
pub struct ProjectableModel {
    pub base: u32,
    pub fiber: u32,
    pub caps: VeCaps,
}

impl ProjectableModel {
    pub fn new(base: u32, fiber: u32, caps: VeCaps) -> Self {
        ProjectableModel { base, fiber, caps }
    }

    fn has_vertical_letter(&self, tw: &TensorWord) -> bool {
        let base = self.base;
        tw.slots()
            .iter()
            .flat_map(|s| s.letters())
            .any(|&i| i >= base)
    }

    /// The vertical-containing subcomplex of the total-space symbol complex,
    /// with the restriction of the full HKR retract.  The structure maps
    /// preserve the letter multiset, so they restrict.
    pub fn vertical_part(&self) -> Retract<ExtWord, TensorWord, Polynomial> {
        let total_dim = self.base + self.fiber;
        let machinery = ScalarVanEst::<Polynomial>::new(total_dim, self.caps);
        let full = machinery.van_est_retract();
        let base = self.base;
        let big = {
            let inner = full.big.clone();
            Complex::new(
                format!("vertical-containing symbols, base={base}"),
                inner.degrees.clone(),
                inner.differential.clone(),
                move |d| {
                    inner
                        .basis(d)
                        .into_iter()
                        .filter(|tw: &TensorWord| {
                            tw.slots()
                                .iter()
                                .flat_map(|s| s.letters())
                                .any(|&i| i >= base)
                        })
                        .collect()
                },
            )
        };
        let small = {
            let inner = full.small.clone();
            Complex::new(
                format!("vertical-containing multivectors, base={base}"),
                inner.degrees.clone(),
                inner.differential.clone(),
                move |d| {
                    inner
                        .basis(d)
                        .into_iter()
                        .filter(|ext: &ExtWord| ext.letters().iter().any(|&i| i >= base))
                        .collect()
                },
            )
        };
        Retract::new(small, big, full.inclusion, full.projection, full.homotopy)
    }

    /// The base part: the scalar HKR retract of the base model.
    pub fn base_part(&self) -> Retract<ExtWord, TensorWord, Polynomial> {
        ScalarVanEst::<Polynomial>::new(self.base, self.caps).van_est_retract()
    }

    /// The projectable complex as the direct sum of the two parts.
    pub fn split_retract(&self) -> Retract<Sum<ExtWord, ExtWord>, ProjectableLabel, Polynomial> {
        direct_sum(&self.base_part(), &self.vertical_part())
    }

    /// Membership of a total-space symbol in the projectable subcomplex:
    /// purely horizontal words must have base-ring coefficients.
    pub fn projectable_check(
        &self,
        symbol: &Element<TensorWord, Polynomial>,
    ) -> Result<(), (TensorWord, Polynomial)> {
        for (tw, coef) in symbol.terms() {
            if !self.has_vertical_letter(tw) && coef.width() > self.base as usize {
                return Err((tw.clone(), coef.clone()));
            }
        }
        Ok(())
    }

    /// Decomposition of a projectable symbol into the sum labels.
    pub fn split_symbol(
        &self,
        symbol: &Element<TensorWord, Polynomial>,
    ) -> Result<Element<ProjectableLabel, Polynomial>, (TensorWord, Polynomial)> {
        self.projectable_check(symbol)?;
        Ok(Element::from_terms(symbol.terms().map(|(tw, c)| {
            if self.has_vertical_letter(tw) {
                (Sum::Right(tw.clone()), c.clone())
            } else {
                (Sum::Left(tw.clone()), c.clone())
            }
        })))
    }
}

// ---------------------------------------------------------------------------
// the operator-on-submanifold composite retract

/// The composite retract exhibiting Λ U⊥ for coefficients in operators on
/// the submanifold: the stated coefficient van Est retract composed with the
/// split Chevalley-Eilenberg retract.
pub fn diffop_c_retract(
    model: &SubmanifoldModel,
    caps: VeCaps,
) -> Retract<ExtWord, CaWord<SymWord>, Polynomial> {
    let com = model.diffop_c_comodule(caps.mid_cap);
    let machinery = crate::van_est::VanEst::new(com, caps);
    let vanest = machinery.van_est_retract_stated();
    // the CE side of the coefficient machinery is C_CE(V, Sym U) with the
    // submodule coaction: the split retract collapses it onto Λ U⊥
    let u_indices: Vec<u32> = (0..model.tangent).collect();
    let ce_split = crate::chevalley::split_retract::<Polynomial>(model.n, &u_indices, caps.mid_cap)
        .expect("valid partition");
    // identify the machinery's CE side labels with the split retract's big
    // side: both are CeWord<SymWord> over (U-numbered coefficient, V-ext)
    compose_retracts(&vanest, &ce_split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{cup, delta_ca_word};
    use crate::graded::{shuffle_sym_word, tensor_words};
    use crate::rng::Rng;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i)
    }

    fn sym(v: Vec<u32>) -> SymWord {
        SymWord::new(v)
    }

    #[test]
    fn sym_derivative_examples() {
        let m = FlatModel::new(2);
        // D(x1²) has value 2x1 on (∂1) and 0 on (∂2)
        let f = &x(0) * &x(0);
        let d1 = m.sym_derivative(&f, 1);
        assert_eq!(d1.value(&sym(vec![0])), x(0).scale(&Rational::from_int(2)));
        assert!(d1.value(&sym(vec![1])).is_zero());
        // D²(x1²) has value 4 on (∂1, ∂1)
        let d2 = m.sym_derivative(&f, 2);
        assert_eq!(
            d2.value(&sym(vec![0, 0])),
            Polynomial::constant(Rational::from_int(4))
        );
        // oracle: D^d f on a multiset equals d! times the iterated partials
        let mut rng = Rng::new(3);
        for _ in 0..10 {
            let f = rng.polynomial(2, 3, 3);
            for d in 0..=3usize {
                let form = m.sym_derivative(&f, d);
                for args in sym_words_up_to(2, d) {
                    if args.len() != d {
                        continue;
                    }
                    let mut partials = f.clone();
                    for &i in args.letters() {
                        partials = partials.partial(i as usize);
                    }
                    let mut expected = partials;
                    for k in 1..=d {
                        expected = expected.scale(&Rational::from_int(k as i64));
                    }
                    assert_eq!(form.value(&args), expected, "D^{d} oracle fails");
                }
            }
        }
    }

    #[test]
    fn insertion_examples() {
        let m = FlatModel::new(2);
        // ins(∂1) on D(x1) = 1
        let d1 = m.sym_derivative(&x(0), 1);
        let ins = m.insert(&sym(vec![0]), &d1);
        assert_eq!(ins.value(&SymWord::unit()), Polynomial::one());
        // insertion of degree 2 into a degree-1 form vanishes
        let over = m.insert(&sym(vec![0, 0]), &d1);
        assert!(over.is_zero());
    }

    #[test]
    fn op_examples() {
        let m = FlatModel::new(2);
        let f = &x(0) * &x(0);
        // Op(∂1)(x1²) = 2x1
        assert_eq!(
            m.op_apply(
                &Element::basis(TensorWord::singleton(sym(vec![0]))),
                &[f.clone()]
            ),
            x(0).scale(&Rational::from_int(2))
        );
        // Op(∂1∨∂1)(x1²) = 2
        assert_eq!(
            m.op_apply(
                &Element::basis(TensorWord::singleton(sym(vec![0, 0]))),
                &[f.clone()]
            ),
            Polynomial::constant(Rational::from_int(2))
        );
        // Op(∂1∨∂2)(x1x2) = 1
        assert_eq!(
            m.op_apply(
                &Element::basis(TensorWord::singleton(sym(vec![0, 1]))),
                &[&x(0) * &x(1)]
            ),
            Polynomial::one()
        );
        // module linearity: Op(x2·∂1)(x1) = x2
        assert_eq!(
            m.op_apply(
                &Element::term(TensorWord::singleton(sym(vec![0])), x(1)),
                &[x(0)]
            ),
            x(1)
        );
    }

    #[test]
    fn key_identity_pins_the_prefactors() {
        // Op(X)(fg) = Op(Δ_sh X)(f, g)
        let m = FlatModel::new(2);
        let mut rng = Rng::new(5);
        for word in sym_words_up_to(2, 3) {
            for _ in 0..5 {
                let f = rng.polynomial(2, 3, 3);
                let g = rng.polynomial(2, 3, 3);
                let lhs = m.op_apply(
                    &Element::basis(TensorWord::singleton(word.clone())),
                    &[&f * &g],
                );
                let mut rhs = Polynomial::zero();
                for (Pair(a, b), c) in shuffle_sym_word::<Polynomial>(&word).terms() {
                    let t = m.op_apply(
                        &Element::term(TensorWord::new(vec![a.clone(), b.clone()]), c.clone()),
                        &[f.clone(), g.clone()],
                    );
                    rhs = &rhs + &t;
                }
                assert_eq!(lhs, rhs, "key identity fails on {word}");
            }
        }
    }

    #[test]
    fn hochschild_delta_examples() {
        let m = FlatModel::new(2);
        let mut rng = Rng::new(11);
        // δ of a 0-cochain vanishes (commutative symmetric bimodule)
        let c = rng.polynomial(2, 2, 3);
        let zero_cochain = MultiOp::new(0, move |_args| c.clone());
        let d = hochschild_delta(&zero_cochain);
        for _ in 0..5 {
            let a = rng.polynomial(2, 2, 3);
            assert!(d.apply(&[a]).is_zero());
        }
        // δ of a derivation vanishes
        let lie = m.operator(&Element::basis(TensorWord::singleton(sym(vec![0]))), 1);
        let d = hochschild_delta(&lie);
        for _ in 0..5 {
            let a = rng.polynomial(2, 2, 3);
            let b = rng.polynomial(2, 2, 3);
            assert!(d.apply(&[a, b]).is_zero());
        }
        // δ of the multiplication 2-cochain vanishes (associativity)
        let mu = MultiOp::new(2, |args: &[Polynomial]| &args[0] * &args[1]);
        let d = hochschild_delta(&mu);
        for _ in 0..5 {
            let a = rng.polynomial(2, 2, 2);
            let b = rng.polynomial(2, 2, 2);
            let c = rng.polynomial(2, 2, 2);
            assert!(d.apply(&[a, b, c]).is_zero());
        }
    }

    #[test]
    fn intertwining_with_the_coalgebra_differential() {
        // δ_Hochschild ∘ Op = Op ∘ δ_ca on evaluation
        let m = FlatModel::new(2);
        let mut rng = Rng::new(13);
        for k in 1..=2usize {
            for tw in tensor_words(2, k, 2).into_iter().step_by(3) {
                let symbol = Element::basis(tw.clone());
                let d_op = hochschild_delta(&m.operator(&symbol, k));
                let d_sym = delta_ca_word::<Polynomial>(&tw);
                for _ in 0..4 {
                    let args: Vec<Polynomial> = (0..=k).map(|_| rng.polynomial(2, 3, 3)).collect();
                    assert_eq!(
                        d_op.apply(&args),
                        m.op_apply(&d_sym, &args),
                        "intertwining fails on {tw}"
                    );
                }
            }
        }
    }

    #[test]
    fn cup_compatibility() {
        let m = FlatModel::new(2);
        let mut rng = Rng::new(17);
        let x_sym = Element::basis(TensorWord::singleton(sym(vec![0, 1])));
        let y_sym = Element::basis(TensorWord::singleton(sym(vec![1])));
        let cup_sym = cup(&x_sym, &y_sym);
        let cup_op = m.operator(&x_sym, 1).cup(&m.operator(&y_sym, 1));
        for _ in 0..5 {
            let args = [rng.polynomial(2, 3, 3), rng.polynomial(2, 3, 3)];
            assert_eq!(cup_op.apply(&args), m.op_apply(&cup_sym, &args));
        }
    }

    #[test]
    fn hkr_examples() {
        let m = FlatModel::new(2);
        // hkr(X) acts as the Lie derivative
        let s = hkr(&Element::basis(ExtWord::generator(0)));
        assert_eq!(
            m.op_apply(&s, &[&x(0) * &x(0)]),
            x(0).scale(&Rational::from_int(2))
        );
        // hkr(∂1∧∂2)(x1, x2) = 1/2
        let s = hkr(&Element::basis(ExtWord::new(vec![0, 1])));
        assert_eq!(
            m.op_apply(&s, &[x(0), x(1)]),
            Polynomial::constant(Rational::new(1, 2))
        );
        // hkr(1) is the scalar unit 0-cochain
        let s = hkr(&Element::basis(ExtWord::unit()));
        assert_eq!(m.op_apply(&s, &[]), Polynomial::one());
        // hkr⁻¹ examples
        assert_eq!(
            hkr_inverse(&Element::basis(TensorWord::singleton(sym(vec![0])))),
            Element::basis(ExtWord::generator(0))
        );
        assert!(hkr_inverse(&Element::basis(TensorWord::new(vec![
            SymWord::unit(),
            SymWord::unit()
        ])))
        .is_zero());
    }

    #[test]
    fn theta_nabla_on_the_multiplication_cochain() {
        let model = ScalarModel::new(2, VeCaps::uniform(2));
        let theta = model.theta_nabla();
        let mu = TensorWord::new(vec![SymWord::unit(), SymWord::unit()]);
        // Θ^∇(μ) = 𝟙, the identity 1-cochain
        assert_eq!(
            theta.apply_label(&mu),
            Element::basis(TensorWord::singleton(SymWord::unit()))
        );
        // and δ of the identity 1-cochain is μ by evaluation
        let d = hochschild_delta(
            &model
                .flat
                .operator(&Element::basis(TensorWord::singleton(SymWord::unit())), 1),
        );
        let mut rng = Rng::new(23);
        for _ in 0..5 {
            let a = rng.polynomial(2, 2, 2);
            let b = rng.polynomial(2, 2, 2);
            assert_eq!(d.apply(&[a.clone(), b.clone()]), &a * &b);
        }
        // Θ^∇ of a vector-field symbol vanishes
        assert!(theta
            .apply_label(&TensorWord::singleton(sym(vec![0])))
            .is_zero());
    }

    #[test]
    fn certificate_of_the_multiplication_cochain() {
        let model = ScalarModel::new(2, VeCaps::uniform(2));
        let mu = Element::basis(TensorWord::new(vec![SymWord::unit(), SymWord::unit()]));
        let cert = model.certificate(&mu);
        assert!(cert.is_closed());
        assert!(cert.class.is_zero());
        assert_eq!(
            cert.primitive,
            Element::basis(TensorWord::singleton(SymWord::unit()))
        );
        assert!(cert.reconstruction.is_zero());
        // non-closed input x∨y: residual -(x⊗y + y⊗x), reconstruction still 0
        let bad = Element::basis(TensorWord::singleton(sym(vec![0, 1])));
        let cert = model.certificate(&bad);
        assert!(!cert.is_closed());
        assert_eq!(
            cert.closedness,
            delta_ca_word::<Polynomial>(&TensorWord::singleton(sym(vec![0, 1])))
        );
        assert!(cert.reconstruction.is_zero());
    }

    #[test]
    fn tangential_examples() {
        let model = SubmanifoldModel::new(2, 1);
        // ∂1 is tangential
        assert!(model
            .tangential_check(&Element::basis(TensorWord::singleton(sym(vec![0]))))
            .is_ok());
        // ∂2 is not: witness Op(∂2)(x2) = 1 ∉ J_C
        let w = model
            .tangential_check(&Element::basis(TensorWord::singleton(sym(vec![1]))))
            .unwrap_err();
        let (arg, val) = w.evaluation.expect("evaluation witness");
        assert_eq!(arg, x(1));
        assert_eq!(val, Polynomial::one());
        // x2·∂2 is tangential
        assert!(model
            .tangential_check(&Element::term(TensorWord::singleton(sym(vec![1])), x(1)))
            .is_ok());
    }

    #[test]
    fn evaluation_requests() {
        // Op(∂1)(x1²) through the JSON surface
        let req = serde_json::json!({
            "symbol": {"variant": "scalar", "n": 2, "terms": [
                [[[1]], {"n": 2, "terms": [{"exp": [0, 0], "coef": "1/1"}]}]
            ]},
            "args": [{"n": 2, "terms": [{"exp": [2, 0], "coef": "1/1"}]}],
        });
        let out = evaluate_request(&req).unwrap();
        let (value, _) = Polynomial::from_json(&out["value"]).unwrap();
        assert_eq!(value, x(0).scale(&Rational::from_int(2)));
        // arity mismatch is an error
        let bad = serde_json::json!({
            "symbol": {"variant": "scalar", "n": 2, "terms": [
                [[[1]], {"n": 2, "terms": [{"exp": [0, 0], "coef": "1/1"}]}]
            ]},
            "args": [],
        });
        assert!(evaluate_request(&bad).is_err());
    }

    #[test]
    fn foliation_membership() {
        let model = FoliationModel::new(2, 1);
        assert!(model
            .leafwise_check(&Element::term(TensorWord::singleton(sym(vec![0])), x(1)))
            .is_ok());
        assert!(model
            .leafwise_check(&Element::basis(TensorWord::singleton(sym(vec![1]))))
            .is_err());
    }
}
