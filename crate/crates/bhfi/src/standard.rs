//! Explicit modules and bimodules: solid tori, zero-framed handlebodies, the
//! type DD identity, the Auroux-Zarev pieces, the surgery maps and the
//! identity DA bimodule.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::Alg;
use crate::error::{Error, Result};
use crate::strands::{project_split, split_pmc, Idempotent, StrandsAlgebra};
use crate::structures::{Arrow, Generator, Kind, Morphism, Structure, NONE};

/// Framing of a genus-one solid torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Framing {
    /// Infinity framing, generator `r`.
    Infinity,
    /// Minus-one framing, generators `a`, `b`.
    MinusOne,
    /// Zero framing, generator `n`.
    Zero,
}

impl std::str::FromStr for Framing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "infinity" | "inf" => Ok(Framing::Infinity),
            "minus_one" | "m1" | "-1" => Ok(Framing::MinusOne),
            "zero" | "0" => Ok(Framing::Zero),
            _ => Err(Error::InvalidArgument(format!("unknown framing '{s}'"))),
        }
    }
}

/// Strands algebra of the split circle of genus `k`.
pub fn split_algebra(k: usize) -> Result<Arc<StrandsAlgebra>> {
    Ok(Arc::new(StrandsAlgebra::new(split_pmc(k)?)))
}

fn idem(alg: &StrandsAlgebra, pairs: &[usize]) -> u32 {
    alg.idempotent(Idempotent::from_pairs(pairs)).expect("valid idempotent")
}

/// The completion of chord `(i, j)` (1-based) with the given left idempotent.
fn chord_from(alg: &StrandsAlgebra, i: usize, j: usize, left: u32) -> Option<u32> {
    let c = alg.chord_element(i, j).ok()?;
    c.0.into_iter().find(|&a| alg.left_idem(a) == left)
}

fn d_gen(label: &str, out_idem: u32) -> Generator {
    Generator { label: label.into(), out_idem, in_idem: NONE }
}

fn type_d(alg: &Arc<StrandsAlgebra>, gens: Vec<Generator>, arrows: Vec<Arrow>) -> Result<Structure> {
    Structure::new(Kind::D, Some(Alg::Strands(alg.clone())), None, gens, arrows)
}

/// Genus-one solid tori with the standard framings.
pub fn cfd_solid_torus(framing: Framing) -> Result<Structure> {
    cfd_solid_torus_over(&split_algebra(1)?, framing)
}

/// As [`cfd_solid_torus`], over a given genus-one algebra.
pub fn cfd_solid_torus_over(alg: &Arc<StrandsAlgebra>, framing: Framing) -> Result<Structure> {
    if alg.pmc().genus() != 1 {
        return Err(Error::InvalidArgument("solid tori live over the genus-one circle".into()));
    }
    let (i0, i1) = (idem(alg, &[0]), idem(alg, &[1]));
    let ch = |i, j, l| chord_from(alg, i, j, l).expect("genus-one chord");
    match framing {
        Framing::Infinity => type_d(alg, vec![d_gen("r", i1)], vec![Arrow::new(0, ch(2, 4, i1), 0)]),
        Framing::MinusOne => type_d(
            alg,
            vec![d_gen("a", i0), d_gen("b", i1)],
            vec![Arrow::new(0, ch(1, 2, i0), 1), Arrow::new(0, ch(3, 4, i0), 1)],
        ),
        Framing::Zero => type_d(alg, vec![d_gen("n", i0)], vec![Arrow::new(0, ch(1, 3, i0), 0)]),
    }
}

/// The standard type D structure of the zero-framed handlebody of genus `k`.
pub fn cfd_zero_handlebody(k: usize) -> Result<Structure> {
    if k < 1 {
        return Err(Error::InvalidArgument("genus must be at least 1".into()));
    }
    let alg = split_algebra(k)?;
    cfd_zero_handlebody_over(&alg)
}

/// As [`cfd_zero_handlebody`], over a given split algebra.
pub fn cfd_zero_handlebody_over(alg: &Arc<StrandsAlgebra>) -> Result<Structure> {
    let k = alg.pmc().genus();
    let pairs: Vec<usize> = (0..k).map(|i| 2 * i).collect();
    let e = idem(alg, &pairs);
    let arrows =
        (0..k).map(|i| Arrow::new(0, chord_from(alg, 4 * i + 1, 4 * i + 3, e).expect("handlebody chord"), 0)).collect();
    type_d(alg, vec![d_gen("n", e)], arrows)
}

/// Genus-one action table of the three-generator model: generators 0 = t, 1 = u, 2 = v.
fn cfa0_action(z1: &StrandsAlgebra, x: usize, a: u32) -> Option<usize> {
    let label = z1.label(a);
    match (x, label.as_str()) {
        (1, "rho_1_2") => Some(0),
        (1, "rho_1_3") => Some(2),
        (0, "rho_2_3") => Some(2),
        _ => None,
    }
}

/// The three-generator-per-handle A-infinity module of the zero-framed handlebody of genus `k`.
///
/// Generator tuples are listed lexicographically in `t < u < v`; labels join
/// the letters, e.g. `uv`.
pub fn cfa_zero_handlebody(k: usize) -> Result<Structure> {
    if k < 1 {
        return Err(Error::InvalidArgument("genus must be at least 1".into()));
    }
    cfa_zero_handlebody_over(&split_algebra(k)?)
}

/// As [`cfa_zero_handlebody`], over a given split algebra.
pub fn cfa_zero_handlebody_over(alg: &Arc<StrandsAlgebra>) -> Result<Structure> {
    let k = alg.pmc().genus();
    let z1 = StrandsAlgebra::new(split_pmc(1)?);
    let letters = ['t', 'u', 'v'];
    let n = 3usize.pow(k as u32);
    let digits = |mut i: usize| {
        let mut d = vec![0usize; k];
        for slot in d.iter_mut().rev() {
            *slot = i % 3;
            i /= 3;
        }
        d
    };
    let encode = |d: &[usize]| d.iter().fold(0usize, |acc, &x| acc * 3 + x);
    let mut gens = Vec::with_capacity(n);
    for i in 0..n {
        let d = digits(i);
        let pairs: Vec<usize> = d.iter().enumerate().map(|(c, &x)| 2 * c + usize::from(x == 0)).collect();
        gens.push(Generator {
            label: d.iter().map(|&x| letters[x]).collect(),
            out_idem: NONE,
            in_idem: idem(alg, &pairs),
        });
    }
    let mut arrows = Vec::new();
    for i in 0..n {
        let d = digits(i);
        for c in 0..k {
            if d[c] == 1 {
                let mut d2 = d.clone();
                d2[c] = 2;
                arrows.push(Arrow::new(i as u32, NONE, encode(&d2) as u32));
            }
        }
    }
    // Right action pulled back along the projection to genus-one factors.
    for a in 0..alg.dim() as u32 {
        if alg.is_idempotent(a) {
            continue;
        }
        let Some(factors) = project_split(&z1, alg, a) else { continue };
        for (i, g) in gens.iter().enumerate().take(n) {
            if g.in_idem != alg.left_idem(a) {
                continue;
            }
            let d = digits(i);
            let mut d2 = d.clone();
            let mut ok = true;
            for c in 0..k {
                let f = factors[c];
                if z1.is_idempotent(f) {
                    continue;
                }
                match cfa0_action(&z1, d[c], f) {
                    Some(y) => d2[c] = y,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                arrows.push(Arrow::with_inputs(i as u32, &[a], NONE, encode(&d2) as u32));
            }
        }
    }
    Structure::new(Kind::A, None, Some(alg.clone()), gens, arrows)
}

/// One chord-like term of the DD identity: `(J, J^c) -> (c1 ⊗ c2) (J', J'^c)`,
/// with `c1 = J a(rho) J'` and `c2 = (J')^c a(rho) J^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChordPair {
    /// Source idempotent `J`.
    pub from: u32,
    /// Target idempotent `J'`.
    pub to: u32,
    /// First-factor coefficient.
    pub c1: u32,
    /// Second-factor coefficient (as an element of A, acting from the opposite side).
    pub c2: u32,
}

/// All chord-like terms of the DD identity over `alg`.
pub fn chord_pairs(alg: &StrandsAlgebra) -> Vec<ChordPair> {
    let n = alg.pmc().num_points();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let c = alg.chord_element(i, j).expect("chord");
            let by_left: HashMap<u32, u32> = c.0.iter().map(|&a| (alg.left_idem(a), a)).collect();
            for &c1 in &c.0 {
                let (jl, jr) = (alg.left_idem(c1), alg.right_idem(c1));
                let (il, ir) = (alg.complement_idem(jr), alg.complement_idem(jl));
                if let Some(&c2) = by_left.get(&il) {
                    if alg.right_idem(c2) == ir {
                        out.push(ChordPair { from: jl, to: jr, c1, c2 });
                    }
                }
            }
        }
    }
    out
}

/// The type DD identity bimodule, as a type D structure over `A ⊗ A^op`.
///
/// Generator `(J, J^c)` stores the tensor idempotent `J ⊗ J^c`; the second
/// factor is the opposite algebra, so its coefficients read right to left.
pub fn dd_identity(alg: &Arc<StrandsAlgebra>) -> Result<Structure> {
    let tensor = Alg::Tensor(Box::new(Alg::Strands(alg.clone())), Box::new(Alg::Opposite(alg.clone())));
    let idems = alg.idempotents().to_vec();
    let pos: HashMap<u32, u32> = idems.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
    let gens = idems
        .iter()
        .map(|&e| {
            let c = alg.complement_idem(e);
            Generator {
                label: format!("{}|{}", alg.label(e), alg.label(c)),
                out_idem: tensor.join(e, c),
                in_idem: NONE,
            }
        })
        .collect();
    let arrows =
        chord_pairs(alg).into_iter().map(|p| Arrow::new(pos[&p.from], tensor.join(p.c1, p.c2), pos[&p.to])).collect();
    Structure::new(Kind::DD, Some(tensor), None, gens, arrows)
}

/// Generator index maps for the Auroux-Zarev bimodules: one generator per basis element.
fn az_generators(alg: &StrandsAlgebra, bar: bool) -> Vec<Generator> {
    (0..alg.dim() as u32)
        .map(|a| {
            let (j, in_idem, suffix) = if bar {
                (alg.complement_idem(alg.right_idem(a)), alg.left_idem(a), "*")
            } else {
                (alg.complement_idem(alg.left_idem(a)), alg.right_idem(a), "")
            };
            Generator { label: format!("{}|{}{}", alg.label(j), alg.label(a), suffix), out_idem: j, in_idem }
        })
        .collect()
}

/// The DA bimodule of the Auroux-Zarev piece. Generator `i` is `J ⊗ a_i`.
pub fn cfda_az(alg: &Arc<StrandsAlgebra>) -> Result<Structure> {
    let gens = az_generators(alg, false);
    let mut arrows = Vec::new();
    let dim = alg.dim() as u32;
    let pairs = chord_pairs(alg);
    for a in 0..dim {
        let j = gens[a as usize].out_idem;
        for &b in alg.diff(a) {
            arrows.push(Arrow::new(a, j, b));
        }
        let i = alg.left_idem(a);
        for p in pairs.iter().filter(|p| p.from == j && alg.right_idem(p.c2) == i) {
            for b in alg.mul(p.c2, a) {
                arrows.push(Arrow::new(a, p.c1, b));
            }
        }
        for a2 in 0..dim {
            if alg.is_idempotent(a2) || alg.left_idem(a2) != alg.right_idem(a) {
                continue;
            }
            for b in alg.mul(a, a2) {
                arrows.push(Arrow::with_inputs(a, &[a2], j, b));
            }
        }
    }
    Structure::new(Kind::DA, Some(Alg::Strands(alg.clone())), Some(alg.clone()), gens, arrows)
}

/// The DA bimodule of the dual Auroux-Zarev piece. Generator `i` is `J ⊗ a_i*`.
pub fn cfda_azbar(alg: &Arc<StrandsAlgebra>) -> Result<Structure> {
    let gens = az_generators(alg, true);
    let dim = alg.dim() as u32;
    let mut arrows = Vec::new();
    let pairs = chord_pairs(alg);
    // Dual differential: b* appears in d(a*) when a appears in d(b).
    for b in 0..dim {
        for &a in alg.diff(b) {
            arrows.push(Arrow::new(a, gens[a as usize].out_idem, b));
        }
    }
    // Products x * y = z give the dual right action z* . x = y* and left action y . z* = x*.
    for x in 0..dim {
        for y in 0..dim {
            for z in alg.mul(x, y) {
                if !alg.is_idempotent(x) {
                    arrows.push(Arrow::with_inputs(z, &[x], gens[z as usize].out_idem, y));
                }
                if !alg.is_idempotent(y) {
                    let j = gens[z as usize].out_idem;
                    for p in pairs.iter().filter(|p| p.from == j && p.c2 == y) {
                        arrows.push(Arrow::new(z, p.c1, x));
                    }
                }
            }
        }
    }
    Structure::new(Kind::DA, Some(Alg::Strands(alg.clone())), Some(alg.clone()), gens, arrows)
}

/// The algebra viewed as a bimodule over itself.
#[derive(Clone, Debug)]
pub struct AlgebraBimodule {
    /// Underlying algebra.
    pub alg: Arc<StrandsAlgebra>,
}

impl AlgebraBimodule {
    /// F2 dimension.
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Left action `a * x`.
    pub fn left_action(&self, a: u32, x: u32) -> Vec<u32> {
        self.alg.mul(a, x)
    }

    /// Right action `x * a`.
    pub fn right_action(&self, x: u32, a: u32) -> Vec<u32> {
        self.alg.mul(x, a)
    }

    /// Differential.
    pub fn differential(&self, x: u32) -> Vec<u32> {
        self.alg.diff(x).to_vec()
    }
}

/// The type AA bimodule of the Auroux-Zarev piece, presented as the algebra itself.
pub fn cfaa_az_as_algebra(alg: &Arc<StrandsAlgebra>) -> AlgebraBimodule {
    AlgebraBimodule { alg: alg.clone() }
}

/// The identity DA bimodule: one generator per idempotent, `delta_2(e, a) = a ⊗ e'`.
pub fn identity_da(alg: &Arc<StrandsAlgebra>) -> Result<Structure> {
    let idems = alg.idempotents().to_vec();
    let pos: HashMap<u32, u32> = idems.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
    let gens = idems.iter().map(|&e| Generator { label: alg.label(e), out_idem: e, in_idem: e }).collect();
    let mut arrows = Vec::new();
    for a in 0..alg.dim() as u32 {
        if !alg.is_idempotent(a) {
            arrows.push(Arrow::with_inputs(pos[&alg.left_idem(a)], &[a], a, pos[&alg.right_idem(a)]));
        }
    }
    Structure::new(Kind::DA, Some(Alg::Strands(alg.clone())), Some(alg.clone()), gens, arrows)
}

/// The surgery maps `phi: H_inf -> H_-1` and `psi: H_-1 -> H_0`, with their endpoints.
#[derive(Clone, Debug)]
pub struct SurgeryMaps {
    /// Infinity-framed solid torus.
    pub h_inf: Structure,
    /// Minus-one-framed solid torus.
    pub h_m1: Structure,
    /// Zero-framed solid torus.
    pub h_0: Structure,
    /// `phi(r) = b + rho_23 a`.
    pub phi: Morphism,
    /// `psi(a) = n`, `psi(b) = rho_23 n`.
    pub psi: Morphism,
}

/// The short exact sequence of solid tori.
pub fn surgery_maps() -> Result<SurgeryMaps> {
    surgery_maps_over(&split_algebra(1)?)
}

/// As [`surgery_maps`], over a given genus-one algebra.
pub fn surgery_maps_over(alg: &Arc<StrandsAlgebra>) -> Result<SurgeryMaps> {
    let h_inf = cfd_solid_torus_over(alg, Framing::Infinity)?;
    let h_m1 = cfd_solid_torus_over(alg, Framing::MinusOne)?;
    let h_0 = cfd_solid_torus_over(alg, Framing::Zero)?;
    let (i0, i1) = (idem(alg, &[0]), idem(alg, &[1]));
    let r23 = chord_from(alg, 2, 3, i1).expect("rho_23");
    let phi = Morphism::new(vec![Arrow::new(0, i1, 1), Arrow::new(0, r23, 0)]);
    let psi = Morphism::new(vec![Arrow::new(0, i0, 0), Arrow::new(1, r23, 0)]);
    Ok(SurgeryMaps { h_inf, h_m1, h_0, phi, psi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{box_tensor_ad, check_structure, compose, is_cycle};

    #[test]
    fn solid_tori_are_valid() {
        for f in [Framing::Infinity, Framing::MinusOne, Framing::Zero] {
            let s = cfd_solid_torus(f).unwrap();
            assert!(check_structure(&s).is_empty(), "{f:?}");
        }
    }

    #[test]
    fn handlebody_pairing_gives_two() {
        let a = cfa_zero_handlebody(1).unwrap();
        let d = cfd_zero_handlebody(1).unwrap();
        assert!(check_structure(&a).is_empty());
        let c = box_tensor_ad(&a, &d).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.homology().dim, 2);
    }

    #[test]
    fn genus_two_handlebody() {
        let a = cfa_zero_handlebody(2).unwrap();
        assert_eq!(a.len(), 9);
        assert!(check_structure(&a).is_empty());
        let uu = a.gen_index("uu").unwrap();
        let targets: Vec<&str> = a
            .arrows
            .iter()
            .filter(|x| x.src == uu && x.inputs.is_empty())
            .map(|x| a.gens[x.dst as usize].label.as_str())
            .collect();
        assert_eq!(targets.len(), 2);
        assert!(targets.contains(&"vu") && targets.contains(&"uv"));
        let d = cfd_zero_handlebody(2).unwrap();
        assert_eq!(d.arrows.len(), 2);
        assert!(check_structure(&d).is_empty());
        assert_eq!(box_tensor_ad(&a, &d).unwrap().homology().dim, 4);
    }

    #[test]
    fn dd_identity_counts() {
        let a1 = split_algebra(1).unwrap();
        let dd = dd_identity(&a1).unwrap();
        assert_eq!(dd.len(), 2);
        assert!(check_structure(&dd).is_empty());
        let a2 = split_algebra(2).unwrap();
        let dd2 = dd_identity(&a2).unwrap();
        assert_eq!(dd2.len(), 6);
        assert!(check_structure(&dd2).is_empty());
    }

    #[test]
    fn az_genus_one_table() {
        let alg = split_algebra(1).unwrap();
        let az = cfda_az(&alg).unwrap();
        assert_eq!(az.len(), 8);
        assert!(check_structure(&az).is_empty());
        let describe = |label: &str| {
            let g = az.gen_index(label).unwrap();
            let mut v: Vec<String> =
                az.arrows.iter().filter(|x| x.src == g && x.inputs.is_empty()).map(|x| az.describe(x)).collect();
            v.sort();
            v
        };
        assert_eq!(
            describe("I(1)|I(2)"),
            vec![
                "I(1)|I(2) -> rho_1_2 I(2)|rho_1_2",
                "I(1)|I(2) -> rho_1_4 I(2)|rho_1_4",
                "I(1)|I(2) -> rho_3_4 I(2)|rho_3_4",
            ]
        );
        assert_eq!(describe("I(2)|I(1)"), vec!["I(2)|I(1) -> rho_2_3 I(1)|rho_2_3"]);
    }

    #[test]
    fn azbar_and_identity_are_valid() {
        for k in [1, 2] {
            let alg = split_algebra(k).unwrap();
            assert!(check_structure(&cfda_azbar(&alg).unwrap()).is_empty());
            assert!(check_structure(&identity_da(&alg).unwrap()).is_empty());
            if k == 2 {
                assert!(check_structure(&cfda_az(&alg).unwrap()).is_empty());
            }
        }
    }

    #[test]
    fn surgery_sequence() {
        let s = surgery_maps().unwrap();
        assert!(is_cycle(&s.h_inf, &s.h_m1, &s.phi).unwrap());
        assert!(is_cycle(&s.h_m1, &s.h_0, &s.psi).unwrap());
        let comp = compose(&s.phi, &s.psi, s.h_0.out.as_ref());
        assert!(comp.is_zero());
    }
}
