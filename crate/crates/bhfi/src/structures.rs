//! Bordered structures over F2: type D structures, A-infinity modules, DA and DD
//! bimodules, their morphisms, box tensor products and morphism complexes.
//!
//! All four kinds share one representation. A generator carries an output
//! idempotent (type D side) and an input idempotent (type A side); absent sides
//! hold [`NONE`]. An [`Arrow`] `(x, [a_1..a_j], c, y)` is one basis term of an
//! operation: `delta^1_{1+j}(x, a_1, .., a_j) ∋ c ⊗ y`. Inputs are never
//! idempotents (strict unitality); the unit actions are implicit.
//!
//! Pairing convention: a generator `x` with input idempotent `e` pairs with a
//! type D generator `y` whose output idempotent is the same `e`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::algebra::Alg;
use crate::error::{Error, Result};
use crate::f2::{ChainComplex, ChainMap};
use crate::strands::StrandsAlgebra;

/// Marker for an absent idempotent or coefficient.
pub const NONE: u32 = u32::MAX;

/// Sparse list of `(coefficient, generator)` terms.
type Terms = Vec<(u32, u32)>;

/// Input sequence of an arrow.
pub type Inputs = SmallVec<[u32; 2]>;

/// One basis term of a structure operation or a morphism component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    /// Source generator.
    pub src: u32,
    /// Algebra inputs on the type A side.
    pub inputs: Inputs,
    /// Output coefficient on the type D side, or [`NONE`].
    pub coef: u32,
    /// Target generator.
    pub dst: u32,
}

impl Arrow {
    /// Arrow with no inputs.
    pub fn new(src: u32, coef: u32, dst: u32) -> Self {
        Self { src, inputs: Inputs::new(), coef, dst }
    }

    /// Arrow with inputs.
    pub fn with_inputs(src: u32, inputs: &[u32], coef: u32, dst: u32) -> Self {
        Self { src, inputs: inputs.iter().copied().collect(), coef, dst }
    }
}

/// Sorts arrows and cancels repeated terms mod 2.
pub fn normalize_arrows(mut v: Vec<Arrow>) -> Vec<Arrow> {
    v.sort_unstable();
    let mut out: Vec<Arrow> = Vec::with_capacity(v.len());
    for a in v {
        if out.last() == Some(&a) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

/// Structure kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Kind {
    /// Type D structure.
    D,
    /// A-infinity module.
    A,
    /// DA bimodule.
    DA,
    /// DD bimodule (type D over a tensor algebra).
    DD,
    /// Chain complex (no sides).
    Chain,
}

/// A generator with its idempotents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    /// Canonical label.
    pub label: String,
    /// Output-side idempotent (basis index) or [`NONE`].
    pub out_idem: u32,
    /// Input-side idempotent (basis index) or [`NONE`].
    pub in_idem: u32,
}

/// A finitely generated bordered structure.
#[derive(Clone, Debug)]
pub struct Structure {
    /// Kind.
    pub kind: Kind,
    /// Output (type D side) algebra.
    pub out: Option<Alg>,
    /// Input (type A side) algebra.
    pub inp: Option<Arc<StrandsAlgebra>>,
    /// Generators.
    pub gens: Vec<Generator>,
    /// Operation terms, normalized.
    pub arrows: Vec<Arrow>,
}

/// Type D structure.
pub type TypeDStructure = Structure;
/// A-infinity module.
pub type AInfModule = Structure;
/// DA bimodule.
pub type DABimodule = Structure;
/// DD bimodule.
pub type DDBimodule = Structure;

/// Environment variable capping box tensor sizes.
pub const MAX_GENERATORS_VAR: &str = "BHFI_MAX_GENERATORS";

fn max_generators() -> usize {
    std::env::var(MAX_GENERATORS_VAR).ok().and_then(|v| v.parse().ok()).unwrap_or(200_000)
}

impl Structure {
    /// Builds a structure, normalizing arrows and checking idempotent compatibility.
    pub fn new(
        kind: Kind,
        out: Option<Alg>,
        inp: Option<Arc<StrandsAlgebra>>,
        gens: Vec<Generator>,
        arrows: Vec<Arrow>,
    ) -> Result<Self> {
        let s = Self { kind, out, inp, gens, arrows: normalize_arrows(arrows) };
        let bad = s.idempotent_violations();
        if let Some(b) = bad.first() {
            return Err(Error::RelationViolation(b.clone()));
        }
        Ok(s)
    }

    /// Builds without checks (arrows are still normalized).
    pub fn new_unchecked(
        kind: Kind,
        out: Option<Alg>,
        inp: Option<Arc<StrandsAlgebra>>,
        gens: Vec<Generator>,
        arrows: Vec<Arrow>,
    ) -> Self {
        Self { kind, out, inp, gens, arrows: normalize_arrows(arrows) }
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    /// True when there are no generators.
    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Index of the generator with this label.
    pub fn gen_index(&self, label: &str) -> Option<u32> {
        self.gens.iter().position(|g| g.label == label).map(|i| i as u32)
    }

    /// Largest number of inputs on any arrow.
    pub fn max_arity(&self) -> usize {
        self.arrows.iter().map(|a| a.inputs.len()).max().unwrap_or(0)
    }

    /// Human-readable arrow.
    pub fn describe(&self, a: &Arrow) -> String {
        describe_arrow(self, self, a)
    }

    fn idempotent_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in &self.arrows {
            if let Some(msg) = arrow_idempotent_error(self, self, a) {
                out.push(msg);
            }
        }
        out
    }

    /// Identity morphism.
    pub fn identity(&self) -> Morphism {
        let arrows = (0..self.len() as u32).map(|i| Arrow::new(i, self.gens[i as usize].out_idem, i)).collect();
        Morphism { arrows }
    }

    /// The chain complex underlying a structure with no sides.
    pub fn to_chain_complex(&self) -> ChainComplex {
        let mut d = vec![Vec::new(); self.len()];
        for a in &self.arrows {
            d[a.src as usize].push(a.dst);
        }
        ChainComplex::new_unchecked(self.gens.iter().map(|g| g.label.clone()).collect(), d)
    }

    /// Arrows with no inputs whose coefficient is an idempotent (or absent).
    pub fn idempotent_part(&self) -> ChainComplex {
        idempotent_part_complex(self)
    }

    /// Whether iterated delta terminates: no cycle of arrows with non-idempotent coefficients.
    /// Informational; the pairing operations do not need it.
    pub fn is_bounded(&self) -> bool {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for a in &self.arrows {
            if a.inputs.is_empty() {
                adj[a.src as usize].push(a.dst as usize);
            }
        }
        // Kahn's algorithm: bounded iff the arrow graph is acyclic.
        let mut indeg = vec![0usize; n];
        for l in &adj {
            for &j in l {
                indeg[j] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = stack.pop() {
            seen += 1;
            for &j in &adj[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    stack.push(j);
                }
            }
        }
        seen == n
    }

    /// Output-side strands algebra (type D side), when it is a plain strands algebra.
    pub fn out_strands(&self) -> Option<&Arc<StrandsAlgebra>> {
        self.out.as_ref().and_then(Alg::strands)
    }

    /// Relabels generators by a permutation (new `i` is old `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Structure {
        let mut inv = vec![0u32; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i as u32;
        }
        let gens = perm.iter().map(|&p| self.gens[p].clone()).collect();
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { src: inv[a.src as usize], dst: inv[a.dst as usize], ..a.clone() })
            .collect();
        Structure::new_unchecked(self.kind, self.out.clone(), self.inp.clone(), gens, arrows)
    }
}

fn coef_label(out: &Option<Alg>, c: u32) -> String {
    match out {
        Some(a) if c != NONE => a.label(c),
        _ => "1".into(),
    }
}

/// Describes an arrow between (possibly different) structures.
pub fn describe_arrow(src: &Structure, tgt: &Structure, a: &Arrow) -> String {
    let ins: Vec<String> = match &src.inp {
        Some(alg) => a.inputs.iter().map(|&i| alg.label(i)).collect(),
        None => Vec::new(),
    };
    let from = src.gens.get(a.src as usize).map_or("?", |g| g.label.as_str());
    let to = tgt.gens.get(a.dst as usize).map_or("?", |g| g.label.as_str());
    if ins.is_empty() {
        format!("{from} -> {} {to}", coef_label(&tgt.out, a.coef))
    } else {
        format!("{from} [{}] -> {} {to}", ins.join(", "), coef_label(&tgt.out, a.coef))
    }
}

fn arrow_idempotent_error(src: &Structure, tgt: &Structure, a: &Arrow) -> Option<String> {
    if a.src as usize >= src.len() || a.dst as usize >= tgt.len() {
        return Some(format!("arrow endpoint out of range: {a:?}"));
    }
    let (x, y) = (&src.gens[a.src as usize], &tgt.gens[a.dst as usize]);
    match &tgt.out {
        Some(alg) => {
            if a.coef == NONE || a.coef as usize >= alg.dim() {
                return Some(format!("missing coefficient: {}", describe_arrow(src, tgt, a)));
            }
            if alg.left_idem(a.coef) != x.out_idem || alg.right_idem(a.coef) != y.out_idem {
                return Some(format!("output idempotent mismatch: {}", describe_arrow(src, tgt, a)));
            }
        }
        None => {
            if a.coef != NONE {
                return Some(format!("unexpected coefficient: {a:?}"));
            }
        }
    }
    match &src.inp {
        Some(alg) => {
            let mut cur = x.in_idem;
            for &i in &a.inputs {
                if i as usize >= alg.dim() || alg.is_idempotent(i) || alg.left_idem(i) != cur {
                    return Some(format!("input idempotent mismatch: {}", describe_arrow(src, tgt, a)));
                }
                cur = alg.right_idem(i);
            }
            if cur != y.in_idem {
                return Some(format!("input idempotent mismatch: {}", describe_arrow(src, tgt, a)));
            }
        }
        None => {
            if !a.inputs.is_empty() {
                return Some(format!("inputs on a structure without type A side: {a:?}"));
            }
        }
    }
    None
}

/// Coefficient product; `NONE` stands for the absent side.
fn coef_mul(out: Option<&Alg>, a: u32, b: u32) -> Vec<u32> {
    match out {
        Some(alg) => alg.mul(a, b),
        None => vec![NONE],
    }
}

fn index_by_src(arrows: &[Arrow]) -> HashMap<u32, Vec<&Arrow>> {
    let mut m: HashMap<u32, Vec<&Arrow>> = HashMap::new();
    for a in arrows {
        m.entry(a.src).or_default().push(a);
    }
    m
}

/// Terms of `second ∘ first`: first an arrow of `first`, then one of `second`
/// starting at its target; coefficients multiply in that order.
pub fn composite_terms(first: &[Arrow], second: &[Arrow], out: Option<&Alg>) -> Vec<Arrow> {
    let idx = index_by_src(second);
    let mut out_v = Vec::new();
    for a in first {
        if let Some(bs) = idx.get(&a.dst) {
            for b in bs {
                for c in coef_mul(out, a.coef, b.coef) {
                    let mut inputs = a.inputs.clone();
                    inputs.extend_from_slice(&b.inputs);
                    out_v.push(Arrow { src: a.src, inputs, coef: c, dst: b.dst });
                }
            }
        }
    }
    out_v
}

/// Terms from the algebra differentials and from multiplying adjacent inputs.
pub fn linear_terms(arrows: &[Arrow], out: Option<&Alg>, inp: Option<&StrandsAlgebra>) -> Vec<Arrow> {
    let mut v = Vec::new();
    for a in arrows {
        if let Some(alg) = out {
            for c in alg.diff(a.coef) {
                v.push(Arrow { coef: c, ..a.clone() });
            }
        }
        if let Some(alg) = inp {
            for i in 0..a.inputs.len() {
                for &p in alg.d_preimage(a.inputs[i]) {
                    let mut b = a.clone();
                    b.inputs[i] = p;
                    v.push(b);
                }
                for &(l, r) in alg.factorizations(a.inputs[i]) {
                    let mut inputs: Inputs = a.inputs[..i].iter().copied().collect();
                    inputs.push(l);
                    inputs.push(r);
                    inputs.extend_from_slice(&a.inputs[i + 1..]);
                    v.push(Arrow { inputs, ..a.clone() });
                }
            }
        }
    }
    v
}

/// A failed structure or morphism relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Offending term (source, inputs, coefficient, target), if any.
    pub term: Option<Arrow>,
    /// Description.
    pub message: String,
}

/// Checks idempotent compatibility and the structure relations.
///
/// Relation terms are generated from the arrows themselves, so the check is
/// exact at every arity (it covers the declared arity plus one).
pub fn check_structure(s: &Structure) -> Vec<Violation> {
    let mut out: Vec<Violation> =
        s.idempotent_violations().into_iter().map(|m| Violation { term: None, message: m }).collect();
    if !out.is_empty() {
        return out;
    }
    let mut terms = composite_terms(&s.arrows, &s.arrows, s.out.as_ref());
    terms.extend(linear_terms(&s.arrows, s.out.as_ref(), s.inp.as_deref()));
    for t in normalize_arrows(terms) {
        out.push(Violation { message: format!("relation term {}", s.describe(&t)), term: Some(t) });
    }
    out
}

/// A morphism between two structures of the same kind, as a list of basis terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morphism {
    /// Component terms (source in the domain, target in the codomain).
    pub arrows: Vec<Arrow>,
}

impl Morphism {
    /// Builds and normalizes.
    pub fn new(arrows: Vec<Arrow>) -> Self {
        Self { arrows: normalize_arrows(arrows) }
    }

    /// Zero morphism.
    pub fn zero() -> Self {
        Self::default()
    }

    /// True for the zero morphism.
    pub fn is_zero(&self) -> bool {
        self.arrows.is_empty()
    }

    /// F2 sum.
    pub fn add(&self, other: &Morphism) -> Morphism {
        Morphism::new(self.arrows.iter().chain(&other.arrows).cloned().collect())
    }

    /// Largest number of inputs on a component.
    pub fn max_arity(&self) -> usize {
        self.arrows.iter().map(|a| a.inputs.len()).max().unwrap_or(0)
    }

    /// Components with no inputs and idempotent (or absent) coefficient, as a chain map
    /// between idempotent parts.
    pub fn idempotent_part(&self, src: &Structure, tgt: &Structure) -> ChainMap {
        let mut cols = vec![Vec::new(); src.len()];
        for a in &self.arrows {
            if a.inputs.is_empty() && coef_is_unit(tgt, a.coef) {
                cols[a.src as usize].push(a.dst);
            }
        }
        ChainMap::new_unchecked(tgt.len(), cols)
    }
}

fn coef_is_unit(s: &Structure, c: u32) -> bool {
    match &s.out {
        Some(alg) => alg.is_idempotent(c),
        None => true,
    }
}

fn idempotent_part_complex(s: &Structure) -> ChainComplex {
    let mut d = vec![Vec::new(); s.len()];
    for a in &s.arrows {
        if a.inputs.is_empty() && coef_is_unit(s, a.coef) {
            d[a.src as usize].push(a.dst);
        }
    }
    ChainComplex::new_unchecked(s.gens.iter().map(|g| g.label.clone()).collect(), d)
}

fn check_same_shape(a: &Structure, b: &Structure) -> Result<()> {
    let out_ok = match (&a.out, &b.out) {
        (Some(x), Some(y)) => x.same_as(y),
        (None, None) => true,
        _ => false,
    };
    let in_ok = match (&a.inp, &b.inp) {
        (Some(x), Some(y)) => x.pmc() == y.pmc(),
        (None, None) => true,
        _ => false,
    };
    if out_ok && in_ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument("morphism endpoints have different algebras".into()))
    }
}

/// Differential in the morphism complex: `f ∘ δ_src + δ_tgt ∘ f + d_A(f)`,
/// including input-side terms for DA and A-infinity morphisms.
pub fn mor_differential(src: &Structure, tgt: &Structure, f: &Morphism) -> Result<Morphism> {
    check_same_shape(src, tgt)?;
    let out = tgt.out.as_ref();
    let mut terms = composite_terms(&src.arrows, &f.arrows, out);
    terms.extend(composite_terms(&f.arrows, &tgt.arrows, out));
    terms.extend(linear_terms(&f.arrows, out, tgt.inp.as_deref()));
    Ok(Morphism::new(terms))
}

/// True when `f` is a cycle in the morphism complex.
pub fn is_cycle(src: &Structure, tgt: &Structure, f: &Morphism) -> Result<bool> {
    Ok(mor_differential(src, tgt, f)?.is_zero())
}

/// Idempotent-compatibility check of a morphism.
pub fn check_morphism(src: &Structure, tgt: &Structure, f: &Morphism) -> Result<()> {
    check_same_shape(src, tgt)?;
    for a in &f.arrows {
        if let Some(m) = arrow_idempotent_error(src, tgt, a) {
            return Err(Error::RelationViolation(m));
        }
    }
    Ok(())
}

/// Composite `g ∘ f` (apply `f` first).
pub fn compose(f: &Morphism, g: &Morphism, out: Option<&Alg>) -> Morphism {
    Morphism::new(composite_terms(&f.arrows, &g.arrows, out))
}

/// Generator index of a box tensor product.
pub type TensorIndex = HashMap<(u32, u32), u32>;

fn tensor_generators(x: &Structure, y: &Structure) -> Result<(Vec<Generator>, TensorIndex)> {
    let inp = x.inp.as_ref().ok_or_else(|| Error::InvalidArgument("left factor has no type A side".into()))?;
    let yout = y
        .out_strands()
        .ok_or_else(|| Error::InvalidArgument("right factor has no type D side over a strands algebra".into()))?;
    if inp.pmc() != yout.pmc() {
        return Err(Error::InvalidArgument("box tensor of structures over different circles".into()));
    }
    let mut by_idem: HashMap<u32, Vec<u32>> = HashMap::new();
    for (j, g) in y.gens.iter().enumerate() {
        by_idem.entry(g.out_idem).or_default().push(j as u32);
    }
    let cap = max_generators();
    let mut gens = Vec::new();
    let mut index = HashMap::new();
    for (i, gx) in x.gens.iter().enumerate() {
        for &j in by_idem.get(&gx.in_idem).map(Vec::as_slice).unwrap_or(&[]) {
            let gy = &y.gens[j as usize];
            index.insert((i as u32, j), gens.len() as u32);
            gens.push(Generator {
                label: format!("{}&{}", gx.label, gy.label),
                out_idem: gx.out_idem,
                in_idem: gy.in_idem,
            });
            if gens.len() > cap {
                return Err(Error::Divergence(format!("box tensor exceeds {cap} generators ({MAX_GENERATORS_VAR})")));
            }
        }
    }
    Ok((gens, index))
}

type PathIndex<'a> = HashMap<(u32, u32), Vec<&'a Arrow>>;

fn index_by_src_coef(arrows: &[Arrow]) -> PathIndex<'_> {
    let mut m: PathIndex = HashMap::new();
    for a in arrows {
        m.entry((a.src, a.coef)).or_default().push(a);
    }
    m
}

/// Enumerates paths whose coefficient sequence is `coefs`, drawing step `i` from `layers[i]`.
/// Calls `emit(start, end, concatenated inputs)`.
fn trace_paths(start: u32, coefs: &[u32], layers: &[&PathIndex], emit: &mut impl FnMut(u32, Inputs)) {
    fn go(cur: u32, i: usize, acc: Inputs, coefs: &[u32], layers: &[&PathIndex], emit: &mut impl FnMut(u32, Inputs)) {
        if i == coefs.len() {
            emit(cur, acc);
            return;
        }
        if let Some(next) = layers[i].get(&(cur, coefs[i])) {
            for a in next {
                let mut acc2 = acc.clone();
                acc2.extend_from_slice(&a.inputs);
                go(a.dst, i + 1, acc2, coefs, layers, emit);
            }
        }
    }
    go(start, 0, Inputs::new(), coefs, layers, emit);
}

fn result_kind(out: bool, inp: bool) -> Kind {
    match (out, inp) {
        (true, true) => Kind::DA,
        (true, false) => Kind::D,
        (false, true) => Kind::A,
        (false, false) => Kind::Chain,
    }
}

/// Box tensor product `X ⊠ Y` of a structure with a type A side and one with a
/// type D side. Terminates for any finite inputs because every path is driven
/// by a finite input list of `X`.
pub fn box_tensor(x: &Structure, y: &Structure) -> Result<(Structure, TensorIndex)> {
    let (gens, index) = tensor_generators(x, y)?;
    let y_idx = index_by_src_coef(&y.arrows);
    let mut y_by_idem: HashMap<u32, Vec<u32>> = HashMap::new();
    for (j, g) in y.gens.iter().enumerate() {
        y_by_idem.entry(g.out_idem).or_default().push(j as u32);
    }
    let mut x_by_in: HashMap<u32, Vec<u32>> = HashMap::new();
    for (i, g) in x.gens.iter().enumerate() {
        x_by_in.entry(g.in_idem).or_default().push(i as u32);
    }
    let out_alg = y.out.as_ref().expect("checked");
    let mut arrows = Vec::new();
    for xa in &x.arrows {
        let ys = y_by_idem.get(&x.gens[xa.src as usize].in_idem).map(Vec::as_slice).unwrap_or(&[]);
        for &y0 in ys {
            let src = index[&(xa.src, y0)];
            if xa.inputs.is_empty() {
                arrows.push(Arrow::new(src, xa.coef, index[&(xa.dst, y0)]));
                continue;
            }
            let layers = vec![&y_idx; xa.inputs.len()];
            trace_paths(y0, &xa.inputs, &layers, &mut |end, ins| {
                arrows.push(Arrow { src, inputs: ins, coef: xa.coef, dst: index[&(xa.dst, end)] });
            });
        }
    }
    for ya in &y.arrows {
        if !out_alg.is_idempotent(ya.coef) {
            continue;
        }
        for &xi in x_by_in.get(&ya.coef).map(Vec::as_slice).unwrap_or(&[]) {
            arrows.push(Arrow {
                src: index[&(xi, ya.src)],
                inputs: ya.inputs.clone(),
                coef: x.gens[xi as usize].out_idem,
                dst: index[&(xi, ya.dst)],
            });
        }
    }
    let kind = result_kind(x.out.is_some(), y.inp.is_some());
    let s = Structure::new_unchecked(kind, x.out.clone(), y.inp.clone(), gens, arrows);
    Ok((s, index))
}

/// Box tensor of an A-infinity module with a type D structure, as a chain complex.
pub fn box_tensor_ad(m: &AInfModule, p: &TypeDStructure) -> Result<ChainComplex> {
    if m.out.is_some() || p.inp.is_some() {
        return Err(Error::InvalidArgument("box_tensor_ad needs an A-infinity module and a type D structure".into()));
    }
    let (s, _) = box_tensor(m, p)?;
    let c = s.to_chain_complex();
    ChainComplex::new(c.labels().to_vec(), c.differential().to_vec())
}

/// Box tensor of a DA bimodule with a type D structure.
pub fn box_tensor_da_d(b: &DABimodule, p: &TypeDStructure) -> Result<TypeDStructure> {
    if b.out.is_none() || p.inp.is_some() {
        return Err(Error::InvalidArgument("box_tensor_da_d needs a DA bimodule and a type D structure".into()));
    }
    Ok(box_tensor(b, p)?.0)
}

/// `Id_X ⊠ f` for a morphism `f: Y -> Y2` of structures with a type D side.
pub fn tensor_id_left(x: &Structure, y: &Structure, y2: &Structure, f: &Morphism) -> Result<Morphism> {
    let (_, i1) = tensor_generators(x, y)?;
    let (_, i2) = tensor_generators(x, y2)?;
    let y_idx = index_by_src_coef(&y.arrows);
    let y2_idx = index_by_src_coef(&y2.arrows);
    let f_idx = index_by_src_coef(&f.arrows);
    let out_alg = y.out.as_ref().expect("checked");
    let mut arrows = Vec::new();
    let mut y_by_idem: HashMap<u32, Vec<u32>> = HashMap::new();
    for (j, g) in y.gens.iter().enumerate() {
        y_by_idem.entry(g.out_idem).or_default().push(j as u32);
    }
    for xa in &x.arrows {
        let k = xa.inputs.len();
        if k == 0 {
            continue;
        }
        let ys = y_by_idem.get(&x.gens[xa.src as usize].in_idem).map(Vec::as_slice).unwrap_or(&[]);
        for pos in 0..k {
            let mut layers: Vec<&PathIndex> = Vec::with_capacity(k);
            for i in 0..k {
                layers.push(match i.cmp(&pos) {
                    std::cmp::Ordering::Less => &y_idx,
                    std::cmp::Ordering::Equal => &f_idx,
                    std::cmp::Ordering::Greater => &y2_idx,
                });
            }
            for &y0 in ys {
                let src = i1[&(xa.src, y0)];
                trace_paths(y0, &xa.inputs, &layers, &mut |end, ins| {
                    arrows.push(Arrow { src, inputs: ins, coef: xa.coef, dst: i2[&(xa.dst, end)] });
                });
            }
        }
    }
    let mut x_by_in: HashMap<u32, Vec<u32>> = HashMap::new();
    for (i, g) in x.gens.iter().enumerate() {
        x_by_in.entry(g.in_idem).or_default().push(i as u32);
    }
    for fa in &f.arrows {
        if !out_alg.is_idempotent(fa.coef) {
            continue;
        }
        for &xi in x_by_in.get(&fa.coef).map(Vec::as_slice).unwrap_or(&[]) {
            arrows.push(Arrow {
                src: i1[&(xi, fa.src)],
                inputs: fa.inputs.clone(),
                coef: x.gens[xi as usize].out_idem,
                dst: i2[&(xi, fa.dst)],
            });
        }
    }
    Ok(Morphism::new(arrows))
}

/// `g ⊠ Id_Y` for a morphism `g: X -> X2` of structures with a type A side.
pub fn tensor_id_right(x: &Structure, x2: &Structure, g: &Morphism, y: &Structure) -> Result<Morphism> {
    let (_, i1) = tensor_generators(x, y)?;
    let (_, i2) = tensor_generators(x2, y)?;
    let y_idx = index_by_src_coef(&y.arrows);
    let mut y_by_idem: HashMap<u32, Vec<u32>> = HashMap::new();
    for (j, gy) in y.gens.iter().enumerate() {
        y_by_idem.entry(gy.out_idem).or_default().push(j as u32);
    }
    let mut arrows = Vec::new();
    for ga in &g.arrows {
        let ys = y_by_idem.get(&x.gens[ga.src as usize].in_idem).map(Vec::as_slice).unwrap_or(&[]);
        for &y0 in ys {
            let src = i1[&(ga.src, y0)];
            if ga.inputs.is_empty() {
                if let Some(&dst) = i2.get(&(ga.dst, y0)) {
                    arrows.push(Arrow::new(src, ga.coef, dst));
                }
                continue;
            }
            let layers = vec![&y_idx; ga.inputs.len()];
            trace_paths(y0, &ga.inputs, &layers, &mut |end, ins| {
                arrows.push(Arrow { src, inputs: ins, coef: ga.coef, dst: i2[&(ga.dst, end)] });
            });
        }
    }
    Ok(Morphism::new(arrows))
}

/// Morphism complex of two type D structures over the same algebra.
#[derive(Clone, Debug)]
pub struct MorComplex {
    /// The complex; generator `i` is the elementary morphism `basis[i]`.
    pub complex: ChainComplex,
    /// Elementary morphisms `p -> a q`.
    pub basis: Vec<Arrow>,
    index: HashMap<Arrow, u32>,
}

impl MorComplex {
    /// Morphism represented by a sparse vector.
    pub fn to_morphism(&self, v: &[u32]) -> Morphism {
        Morphism::new(v.iter().map(|&i| self.basis[i as usize].clone()).collect())
    }

    /// Sparse vector of a morphism, or `None` if some term is not a basis element.
    pub fn to_vector(&self, f: &Morphism) -> Option<Vec<u32>> {
        let mut v = Vec::with_capacity(f.arrows.len());
        for a in &f.arrows {
            v.push(*self.index.get(a)?);
        }
        Some(crate::f2::normalize(v))
    }
}

/// Builds Mor(P, Q) for type D structures (any coefficient algebra).
pub fn mor_complex(p: &TypeDStructure, q: &TypeDStructure) -> Result<MorComplex> {
    check_same_shape(p, q)?;
    if p.inp.is_some() {
        return Err(Error::InvalidArgument("mor_complex needs type D structures".into()));
    }
    let alg = p.out.as_ref().ok_or_else(|| Error::InvalidArgument("mor_complex needs a type D side".into()))?;
    let mut by_left: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    for a in 0..alg.dim() as u32 {
        by_left.entry((alg.left_idem(a), alg.right_idem(a))).or_default().push(a);
    }
    let mut basis = Vec::new();
    for (i, gp) in p.gens.iter().enumerate() {
        for (j, gq) in q.gens.iter().enumerate() {
            for &a in by_left.get(&(gp.out_idem, gq.out_idem)).map(Vec::as_slice).unwrap_or(&[]) {
                basis.push(Arrow::new(i as u32, a, j as u32));
            }
        }
    }
    let cap = max_generators();
    if basis.len() > cap {
        return Err(Error::Divergence(format!("Mor complex exceeds {cap} generators")));
    }
    let index: HashMap<Arrow, u32> = basis.iter().cloned().enumerate().map(|(i, a)| (a, i as u32)).collect();
    let mut p_in: HashMap<u32, Vec<&Arrow>> = HashMap::new();
    for a in &p.arrows {
        p_in.entry(a.dst).or_default().push(a);
    }
    let q_out = index_by_src(&q.arrows);
    let mut d = Vec::with_capacity(basis.len());
    for b in &basis {
        let mut col = Vec::new();
        if let Some(ins) = p_in.get(&b.src) {
            for pa in ins {
                for c in alg.mul(pa.coef, b.coef) {
                    col.push(index[&Arrow::new(pa.src, c, b.dst)]);
                }
            }
        }
        if let Some(outs) = q_out.get(&b.dst) {
            for qa in outs {
                for c in alg.mul(b.coef, qa.coef) {
                    col.push(index[&Arrow::new(b.src, c, qa.dst)]);
                }
            }
        }
        for c in alg.diff(b.coef) {
            col.push(index[&Arrow::new(b.src, c, b.dst)]);
        }
        d.push(col);
    }
    let labels = basis.iter().map(|b| describe_arrow(p, q, b)).collect();
    Ok(MorComplex { complex: ChainComplex::new_unchecked(labels, d), basis, index })
}

/// The dual type D structure over the opposite algebra: generators `x*`, and
/// each term `x -> a y` becomes `y* -> a x*`.
pub fn dual_type_d(p: &TypeDStructure) -> Result<TypeDStructure> {
    if p.inp.is_some() {
        return Err(Error::InvalidArgument("dual_type_d needs a type D structure".into()));
    }
    let out = p.out.as_ref().ok_or_else(|| Error::InvalidArgument("no type D side".into()))?;
    let gens = p
        .gens
        .iter()
        .map(|g| Generator {
            label: match g.label.strip_suffix('*') {
                Some(s) => s.to_string(),
                None => format!("{}*", g.label),
            },
            out_idem: g.out_idem,
            in_idem: NONE,
        })
        .collect();
    let arrows = p.arrows.iter().map(|a| Arrow::new(a.dst, a.coef, a.src)).collect();
    Structure::new(p.kind, Some(out.opposite()), None, gens, arrows)
}

/// Chain map induced on `X ⊠ Y` complexes by a morphism of the resulting structures.
pub fn morphism_to_chain_map(tgt_len: usize, src_len: usize, f: &Morphism) -> ChainMap {
    let mut cols = vec![Vec::new(); src_len];
    for a in &f.arrows {
        if a.inputs.is_empty() {
            cols[a.src as usize].push(a.dst);
        }
    }
    ChainMap::new_unchecked(tgt_len, cols)
}

/// True when the idempotent part of `f` is a quasi-isomorphism, which for
/// finitely generated structures over these nilpotent algebras is equivalent to
/// `f` being a homotopy equivalence (for cycles `f`).
pub fn is_homotopy_equivalence(src: &Structure, tgt: &Structure, f: &Morphism) -> Result<bool> {
    let c0 = src.idempotent_part();
    let c1 = tgt.idempotent_part();
    let f0 = f.idempotent_part(src, tgt);
    crate::f2::is_quasi_isomorphism(&c0, &c1, &f0)
}

/// Result of cancelling idempotent arrows of a type D structure.
#[derive(Clone, Debug)]
pub struct Simplified {
    /// Reduced structure (no idempotent arrows between distinct generators).
    pub reduced: TypeDStructure,
    /// Homotopy equivalence from the reduced structure into the original.
    pub inclusion: Morphism,
    /// Homotopy equivalence from the original onto the reduced structure.
    pub projection: Morphism,
}

/// Cancels idempotent-coefficient arrows of a type D structure (any coefficient algebra).
pub fn simplify_type_d(p: &TypeDStructure) -> Result<Simplified> {
    if p.inp.is_some() {
        return Err(Error::InvalidArgument("simplify_type_d needs a type D structure".into()));
    }
    let alg = p.out.clone().ok_or_else(|| Error::InvalidArgument("no type D side".into()))?;
    let n = p.len();
    // out[x]: (coef, dst) terms; inc[y]: sources with an arrow into y.
    let mut out: Vec<HashMap<(u32, u32), ()>> = vec![HashMap::new(); n];
    let mut inc: Vec<HashMap<u32, usize>> = vec![HashMap::new(); n];
    let toggle =
        |out: &mut Vec<HashMap<(u32, u32), ()>>, inc: &mut Vec<HashMap<u32, usize>>, x: u32, c: u32, y: u32| {
            if out[x as usize].remove(&(c, y)).is_some() {
                let e = inc[y as usize].get_mut(&x).expect("incoming count");
                *e -= 1;
                if *e == 0 {
                    inc[y as usize].remove(&x);
                }
            } else {
                out[x as usize].insert((c, y), ());
                *inc[y as usize].entry(x).or_insert(0) += 1;
            }
        };
    for a in &p.arrows {
        toggle(&mut out, &mut inc, a.src, a.coef, a.dst);
    }
    let mut alive = vec![true; n];
    // incl[z]: terms (coef, original generator) of the inclusion image of z.
    let mut incl: Vec<Vec<(u32, u32)>> = (0..n as u32).map(|i| vec![(p.gens[i as usize].out_idem, i)]).collect();
    // (cancelled source, cancelled target, coefficient terms of its differential).
    let mut steps: Vec<(u32, u32, Terms)> = Vec::new();
    loop {
        let mut found = None;
        'search: for x in 0..n as u32 {
            if !alive[x as usize] {
                continue;
            }
            let mut cands: Vec<&(u32, u32)> =
                out[x as usize].keys().filter(|(c, y)| *y != x && alg.is_idempotent(*c)).collect();
            cands.sort_unstable();
            if let Some(&&(_, y)) = cands.first() {
                found = Some((x, y));
                break 'search;
            }
        }
        let Some((x, y)) = found else { break };
        let x_out: Vec<(u32, u32)> = out[x as usize].keys().copied().filter(|&(_, w)| w != y).collect();
        let mut zs: Vec<u32> = inc[y as usize].keys().copied().filter(|&z| z != x).collect();
        zs.sort_unstable();
        for z in zs {
            let c1s: Vec<u32> = out[z as usize].keys().filter(|&&(_, w)| w == y).map(|&(c, _)| c).collect();
            for c1 in c1s {
                for &(c2, w) in &x_out {
                    if w == x {
                        continue;
                    }
                    for c in alg.mul(c1, c2) {
                        toggle(&mut out, &mut inc, z, c, w);
                    }
                }
                let add: Vec<(u32, u32)> = incl[x as usize]
                    .iter()
                    .flat_map(|&(c, o)| alg.mul(c1, c).into_iter().map(move |cc| (cc, o)))
                    .collect();
                incl[z as usize].extend(add);
                incl[z as usize] = normalize_pairs(std::mem::take(&mut incl[z as usize]));
            }
        }
        for v in [x, y] {
            let outs: Vec<(u32, u32)> = out[v as usize].keys().copied().collect();
            for (c, w) in outs {
                toggle(&mut out, &mut inc, v, c, w);
            }
            let ins: Vec<u32> = inc[v as usize].keys().copied().collect();
            for z in ins {
                let cs: Vec<u32> = out[z as usize].keys().filter(|&&(_, w)| w == v).map(|&(c, _)| c).collect();
                for c in cs {
                    toggle(&mut out, &mut inc, z, c, v);
                }
            }
            alive[v as usize] = false;
        }
        steps.push((x, y, x_out.into_iter().filter(|&(_, w)| w != x).collect()));
    }
    let survivors: Vec<u32> = (0..n as u32).filter(|&i| alive[i as usize]).collect();
    let pos: HashMap<u32, u32> = survivors.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect();
    let gens = survivors.iter().map(|&s| p.gens[s as usize].clone()).collect();
    let mut arrows = Vec::new();
    for &s in &survivors {
        for &(c, w) in out[s as usize].keys() {
            arrows.push(Arrow::new(pos[&s], c, pos[&w]));
        }
    }
    let reduced = Structure::new_unchecked(p.kind, p.out.clone(), None, gens, arrows);
    let inclusion = Morphism::new(
        survivors
            .iter()
            .flat_map(|&s| {
                let ps = pos[&s];
                incl[s as usize].iter().map(move |&(c, o)| Arrow::new(ps, c, o))
            })
            .collect(),
    );
    // Projection by replaying cancellations: y maps to the rest of d(x), x maps to 0.
    let mut proj_arrows = Vec::new();
    for o in 0..n as u32 {
        let mut cur: Vec<(u32, u32)> = vec![(p.gens[o as usize].out_idem, o)];
        for (x, y, dx) in &steps {
            let mut next = Vec::new();
            for &(c, g) in &cur {
                if g == *x {
                    continue;
                }
                if g == *y {
                    for &(c2, w) in dx {
                        next.extend(alg.mul(c, c2).into_iter().map(|cc| (cc, w)));
                    }
                } else {
                    next.push((c, g));
                }
            }
            cur = normalize_pairs(next);
        }
        for (c, g) in cur {
            proj_arrows.push(Arrow::new(o, c, pos[&g]));
        }
    }
    Ok(Simplified { reduced, inclusion, projection: Morphism::new(proj_arrows) })
}

fn normalize_pairs(mut v: Vec<(u32, u32)>) -> Vec<(u32, u32)> {
    v.sort_unstable();
    let mut out: Vec<(u32, u32)> = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}
