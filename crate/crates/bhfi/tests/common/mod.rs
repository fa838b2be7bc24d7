//! Random bounded type D structures over the genus-one algebra.
//!
//! Built from bounded models of the solid tori by direct sums, cones of random morphism cycles
//! and conjugation by elementary basis changes, so every output satisfies the
//! structure relation by construction.

#![allow(dead_code)]

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use bhfi::equivalence::homology_basis_of_mor;
use bhfi::standard::{cfd_solid_torus_over, cfda_az, split_algebra, Framing};
use bhfi::strands::StrandsAlgebra;
use bhfi::structures::{box_tensor, compose, mor_differential, Arrow, Generator, Kind, Morphism, Structure};

pub const MAX_GENERATORS: usize = 16;

fn relabel(s: &Structure, tag: &str) -> Vec<Generator> {
    s.gens.iter().map(|g| Generator { label: format!("{tag}{}", g.label), ..g.clone() }).collect()
}

/// Block structure `[[d_p, 0], [f, d_q]]`.
pub fn cone(p: &Structure, q: &Structure, f: &Morphism, tag: &str) -> Structure {
    let off = p.len() as u32;
    let mut gens = relabel(p, &format!("{tag}s"));
    gens.extend(relabel(q, &format!("{tag}t")));
    let mut arrows = p.arrows.clone();
    let shift = |a: &Arrow, src: u32, dst: u32| Arrow { src: a.src + src, dst: a.dst + dst, ..a.clone() };
    arrows.extend(q.arrows.iter().map(|a| shift(a, off, off)));
    arrows.extend(f.arrows.iter().map(|a| shift(a, 0, off)));
    Structure::new(Kind::D, p.out.clone(), None, gens, arrows).expect("idempotents match")
}

fn direct_sum(p: &Structure, q: &Structure, tag: &str) -> Structure {
    cone(p, q, &Morphism::default(), tag)
}

/// Random cycle `p -> q`: a random sum of homology classes plus a random boundary.
pub fn random_cycle(p: &Structure, q: &Structure, rng: &mut StdRng) -> Morphism {
    let mh = homology_basis_of_mor(p, q).expect("type D");
    let mut f = Morphism::default();
    for c in mh.classes() {
        if rng.gen_bool(0.5) {
            f = f.add(&c);
        }
    }
    let n = mh.mor.complex.len();
    if n > 0 {
        let v: Vec<u32> = (0..n as u32).filter(|_| rng.gen_bool(0.3)).collect();
        f = f.add(&mh.mor.to_morphism(&mh.mor.complex.apply(&v)));
    }
    debug_assert!(mor_differential(p, q, &f).unwrap().is_zero());
    f
}

/// Conjugates by `x -> x + y` for a random pair with equal idempotents.
fn basis_change(s: &Structure, rng: &mut StdRng) -> Option<Structure> {
    let mut pairs = Vec::new();
    for x in 0..s.len() {
        for y in 0..s.len() {
            if x != y && s.gens[x].out_idem == s.gens[y].out_idem {
                pairs.push((x as u32, y as u32));
            }
        }
    }
    let &(x, y) = pairs.choose(rng)?;
    let mut h = s.identity();
    h.arrows.push(Arrow::new(x, s.gens[x as usize].out_idem, y));
    let h = Morphism::new(h.arrows);
    let d = Morphism::new(s.arrows.clone());
    let out = s.out.as_ref();
    let conj = compose(&compose(&h, &d, out), &h, out);
    let t = Structure::new(Kind::D, s.out.clone(), None, s.gens.clone(), conj.arrows).ok()?;
    t.is_bounded().then_some(t)
}

pub fn solid_tori(alg: &Arc<StrandsAlgebra>) -> Vec<Structure> {
    [Framing::Infinity, Framing::MinusOne, Framing::Zero]
        .into_iter()
        .map(|f| cfd_solid_torus_over(alg, f).unwrap())
        .collect()
}

/// Bounded models: `H_-1` and the three `AZ ⊠ H`.
pub fn bounded_pieces(alg: &Arc<StrandsAlgebra>) -> Vec<Structure> {
    let az = cfda_az(alg).unwrap();
    let tori = solid_tori(alg);
    let mut out = vec![tori[1].clone()];
    out.extend(tori.iter().map(|t| box_tensor(&az, t).unwrap().0));
    out
}

/// A bounded type D structure with at most [`MAX_GENERATORS`] generators.
pub fn random_type_d(seed: u64) -> Structure {
    let mut rng = StdRng::seed_from_u64(seed);
    let alg = split_algebra(1).unwrap();
    let tori = bounded_pieces(&alg);
    let mut s = tori.choose(&mut rng).unwrap().clone();
    for step in 0..rng.gen_range(0..4) {
        let t = tori.choose(&mut rng).unwrap();
        if s.len() + t.len() > MAX_GENERATORS {
            break;
        }
        let tag = format!("{step}");
        s = match rng.gen_range(0..3) {
            0 => direct_sum(&s, t, &tag),
            1 => {
                let f = random_cycle(&s, t, &mut rng);
                cone(&s, t, &f, &tag)
            }
            _ => {
                let f = random_cycle(t, &s, &mut rng);
                cone(t, &s, &f, &tag)
            }
        };
    }
    for _ in 0..rng.gen_range(0..3) {
        if let Some(t) = basis_change(&s, &mut rng) {
            s = t;
        }
    }
    assert!(s.is_bounded());
    s
}
