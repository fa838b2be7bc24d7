//! Searching for and certifying homotopy equivalences, and bounded checks of
//! morphism relations.
//!
//! Candidates are homology classes of a morphism complex (type D case) or
//! finite-arity cycles found by sparse elimination (A-infinity and DA case).
//! A cycle is a homotopy equivalence exactly when its idempotent part is a
//! quasi-isomorphism, so candidates are tested on that part only.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Alg;
use crate::error::{Error, Result};
use crate::f2::{is_quasi_isomorphism, mapping_cone, normalize, ChainComplex, ChainMap, Homology, SparseSolver};
use crate::standard::{cfda_az, cfda_azbar, dd_identity, identity_da};
use crate::strands::StrandsAlgebra;
use crate::structures::{
    box_tensor, check_morphism, linear_terms, mor_complex, mor_differential, normalize_arrows, Arrow, Generator,
    Inputs, MorComplex, Morphism, Structure, TensorIndex, NONE,
};

/// Default cap on the size of F2 sums tried by the searches.
pub const DEFAULT_MAX_SUM: usize = 4;

/// A homotopy equivalence together with the data that certifies it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceCertificate {
    /// The equivalence.
    pub forward: Morphism,
    /// Cancelled pairs of the acyclic cone on idempotent parts, in order.
    pub evidence: Vec<(u32, u32)>,
    /// Positions, in search order, of the candidates summed to give `forward`.
    pub search_index: Vec<usize>,
}

impl EquivalenceCertificate {
    /// Re-checks the certificate: `forward` is a cycle, its idempotent part is a
    /// quasi-isomorphism, and replaying `evidence` kills the whole cone.
    pub fn verify(&self, src: &Structure, tgt: &Structure) -> Result<bool> {
        if !mor_differential(src, tgt, &self.forward)?.is_zero() {
            return Ok(false);
        }
        let (c0, c1) = (src.idempotent_part(), tgt.idempotent_part());
        let f0 = self.forward.idempotent_part(src, tgt);
        let cone = mapping_cone(&c0, &c1, &f0)?;
        Ok(replay_kills(&cone, &self.evidence))
    }
}

/// Replays a cancellation trace; true when every generator is cancelled.
fn replay_kills(c: &ChainComplex, trace: &[(u32, u32)]) -> bool {
    let n = c.len();
    let mut d: Vec<HashSet<u32>> = c.differential().iter().map(|col| col.iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    for &(x, y) in trace {
        if !alive[x as usize] || !alive[y as usize] || !d[x as usize].contains(&y) {
            return false;
        }
        let dx: Vec<u32> = d[x as usize].iter().copied().filter(|&w| w != y).collect();
        for z in 0..n {
            if alive[z] && z as u32 != x && d[z].contains(&y) {
                for &w in &dx {
                    if !d[z].remove(&w) {
                        d[z].insert(w);
                    }
                }
                d[z].remove(&y);
            }
        }
        for dz in d.iter_mut() {
            dz.remove(&x);
        }
        alive[x as usize] = false;
        alive[y as usize] = false;
        d[x as usize].clear();
    }
    alive.iter().all(|a| !a)
}

/// Homology of a morphism complex, with classes in search order.
#[derive(Clone, Debug)]
pub struct MorHomology {
    /// The morphism complex.
    pub mor: MorComplex,
    /// Its homology.
    pub homology: Homology,
    /// Class indices sorted by (support block, surviving generator).
    pub order: Vec<usize>,
}

impl MorHomology {
    /// Number of classes.
    pub fn dim(&self) -> usize {
        self.homology.dim
    }

    /// Cycle representing class `i` (homology index, not search position).
    pub fn class(&self, i: usize) -> Morphism {
        self.mor.to_morphism(&self.homology.cycles[i])
    }

    /// Representatives in search order.
    pub fn classes(&self) -> Vec<Morphism> {
        self.order.iter().map(|&i| self.class(i)).collect()
    }

    /// Coordinates of a cycle in the homology basis (homology index order).
    pub fn coordinates(&self, f: &Morphism) -> Option<Vec<u8>> {
        self.mor.to_vector(f).map(|v| self.homology.project(&v))
    }

    /// Whether a cycle is a boundary.
    pub fn is_nullhomotopic(&self, f: &Morphism) -> Option<bool> {
        self.coordinates(f).map(|c| c.iter().all(|&b| b == 0))
    }
}

/// Homology basis of `Mor(P, Q)` by explicit cycles.
pub fn homology_basis_of_mor(p: &Structure, q: &Structure) -> Result<MorHomology> {
    let mor = mor_complex(p, q)?;
    let homology = mor.complex.homology();
    let mut order: Vec<usize> = (0..homology.dim).collect();
    order.sort_by_key(|&i| (homology.blocks[i], homology.survivors[i]));
    Ok(MorHomology { mor, homology, order })
}

fn add_maps(a: &ChainMap, b: &ChainMap) -> ChainMap {
    a.add(b)
}

fn is_zero_map(m: &ChainMap) -> bool {
    m.cols.iter().all(Vec::is_empty)
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Tries candidates (already cycles), singletons first, then sums up to `max_sum`.
/// With `unique`, two quasi-invertible singletons are an error.
fn search(
    src: &Structure,
    tgt: &Structure,
    cands: &[Morphism],
    max_sum: usize,
    unique: bool,
) -> Result<EquivalenceCertificate> {
    let (c0, c1) = (src.idempotent_part(), tgt.idempotent_part());
    let parts: Vec<ChainMap> = cands.iter().map(|f| f.idempotent_part(src, tgt)).collect();
    let test = |m: &ChainMap| is_quasi_isomorphism(&c0, &c1, m).unwrap_or(false);
    let certify = |idx: Vec<usize>| -> Result<EquivalenceCertificate> {
        let mut f = Morphism::zero();
        let mut m = ChainMap::new_unchecked(tgt.len(), vec![Vec::new(); src.len()]);
        for &i in &idx {
            f = f.add(&cands[i]);
            m = add_maps(&m, &parts[i]);
        }
        let cone = mapping_cone(&c0, &c1, &m)?;
        let evidence = cone.homology().trace();
        Ok(EquivalenceCertificate { forward: f, evidence, search_index: idx })
    };
    let hits: Vec<usize> = (0..cands.len()).into_par_iter().filter(|&i| test(&parts[i])).collect();
    if unique && hits.len() > 1 {
        return Err(Error::NotEquivalent(format!(
            "{} distinct quasi-invertible classes (positions {:?}); no unique choice",
            hits.len(),
            hits
        )));
    }
    if let Some(&i) = hits.first() {
        return certify(vec![i]);
    }
    // Only the idempotent part matters for the test; drop zero and repeated parts.
    let mut seen: HashSet<Vec<Vec<u32>>> = HashSet::new();
    let useful: Vec<usize> =
        (0..cands.len()).filter(|&i| !is_zero_map(&parts[i]) && seen.insert(parts[i].cols.clone())).collect();
    for k in 2..=max_sum {
        let combos = combinations(useful.len(), k);
        let found = combos.par_iter().position_first(|c| {
            let mut m = parts[useful[c[0]]].clone();
            for &j in &c[1..] {
                m = add_maps(&m, &parts[useful[j]]);
            }
            test(&m)
        });
        if let Some(pos) = found {
            return certify(combos[pos].iter().map(|&j| useful[j]).collect());
        }
    }
    Err(Error::NotEquivalent(format!(
        "no quasi-isomorphism among sums of at most {max_sum} of {} candidates",
        cands.len()
    )))
}

/// Finds a homotopy equivalence `P -> Q` of type D structures among homology
/// classes of `Mor(P, Q)`.
pub fn find_homotopy_equivalence(p: &Structure, q: &Structure, max_sum: usize) -> Result<EquivalenceCertificate> {
    let mh = homology_basis_of_mor(p, q)?;
    let cands = mh.classes();
    let mut cert = search(p, q, &cands, max_sum, true)?;
    // Report homology indices rather than search positions.
    cert.search_index = cert.search_index.iter().map(|&i| mh.order[i]).collect();
    Ok(cert)
}

struct DiffCtx<'a> {
    src_in: HashMap<u32, Vec<&'a Arrow>>,
    tgt_out: HashMap<u32, Vec<&'a Arrow>>,
    out: Option<&'a Alg>,
    inp: Option<&'a StrandsAlgebra>,
}

impl<'a> DiffCtx<'a> {
    fn new(src: &'a Structure, tgt: &'a Structure) -> Self {
        let mut src_in: HashMap<u32, Vec<&Arrow>> = HashMap::new();
        for a in &src.arrows {
            src_in.entry(a.dst).or_default().push(a);
        }
        let mut tgt_out: HashMap<u32, Vec<&Arrow>> = HashMap::new();
        for a in &tgt.arrows {
            tgt_out.entry(a.src).or_default().push(a);
        }
        Self { src_in, tgt_out, out: tgt.out.as_ref(), inp: tgt.inp.as_deref() }
    }

    fn mul(&self, a: u32, b: u32) -> Vec<u32> {
        match self.out {
            Some(alg) => alg.mul(a, b),
            None => vec![NONE],
        }
    }

    fn apply(&self, f: &Arrow) -> Vec<Arrow> {
        let mut terms = Vec::new();
        for s in self.src_in.get(&f.src).map(Vec::as_slice).unwrap_or(&[]) {
            for c in self.mul(s.coef, f.coef) {
                let mut inputs = s.inputs.clone();
                inputs.extend_from_slice(&f.inputs);
                terms.push(Arrow { src: s.src, inputs, coef: c, dst: f.dst });
            }
        }
        for t in self.tgt_out.get(&f.dst).map(Vec::as_slice).unwrap_or(&[]) {
            for c in self.mul(f.coef, t.coef) {
                let mut inputs = f.inputs.clone();
                inputs.extend_from_slice(&t.inputs);
                terms.push(Arrow { src: f.src, inputs, coef: c, dst: t.dst });
            }
        }
        terms.extend(linear_terms(std::slice::from_ref(f), self.out, self.inp));
        normalize_arrows(terms)
    }
}

/// Composable sequences of non-idempotent inputs starting at idempotent `start`,
/// of length at most `max_len` (the empty sequence included).
fn input_sequences(alg: &StrandsAlgebra, start: u32, max_len: usize) -> Vec<(Inputs, u32)> {
    let mut by_left: HashMap<u32, Vec<u32>> = HashMap::new();
    for a in 0..alg.dim() as u32 {
        if !alg.is_idempotent(a) {
            by_left.entry(alg.left_idem(a)).or_default().push(a);
        }
    }
    let mut out = vec![(Inputs::new(), start)];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (seq, end) in &frontier {
            for &a in by_left.get(end).map(Vec::as_slice).unwrap_or(&[]) {
                let mut s = seq.clone();
                s.push(a);
                next.push((s, alg.right_idem(a)));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Elementary morphism components `src -> tgt` with at most `max_arity` inputs.
fn elementary_components(src: &Structure, tgt: &Structure, max_arity: usize) -> Vec<Arrow> {
    let mut coefs: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    if let Some(alg) = &tgt.out {
        for c in 0..alg.dim() as u32 {
            coefs.entry((alg.left_idem(c), alg.right_idem(c))).or_default().push(c);
        }
    }
    let mut tgt_by_in: HashMap<u32, Vec<u32>> = HashMap::new();
    for (j, g) in tgt.gens.iter().enumerate() {
        tgt_by_in.entry(g.in_idem).or_default().push(j as u32);
    }
    let mut seq_cache: HashMap<u32, Vec<(Inputs, u32)>> = HashMap::new();
    let mut out = Vec::new();
    for (i, gx) in src.gens.iter().enumerate() {
        let seqs = match &src.inp {
            Some(alg) => {
                seq_cache.entry(gx.in_idem).or_insert_with(|| input_sequences(alg, gx.in_idem, max_arity)).clone()
            }
            None => vec![(Inputs::new(), NONE)],
        };
        for (seq, end) in seqs {
            for &j in tgt_by_in.get(&end).map(Vec::as_slice).unwrap_or(&[]) {
                let gy = &tgt.gens[j as usize];
                match &tgt.out {
                    Some(_) => {
                        for &c in coefs.get(&(gx.out_idem, gy.out_idem)).map(Vec::as_slice).unwrap_or(&[]) {
                            out.push(Arrow { src: i as u32, inputs: seq.clone(), coef: c, dst: j });
                        }
                    }
                    None => out.push(Arrow { src: i as u32, inputs: seq.clone(), coef: NONE, dst: j }),
                }
            }
        }
    }
    out
}

/// A basis of the morphism cycles `src -> tgt` whose components have at most
/// `max_arity` inputs, grouped into blocks of components linked by the
/// differential. Every cycle of that shape is a sum of the returned ones.
pub fn morphism_cycles(src: &Structure, tgt: &Structure, max_arity: usize) -> Result<Vec<Morphism>> {
    check_morphism(src, tgt, &Morphism::zero())?;
    let unknowns = elementary_components(src, tgt, max_arity);
    let ctx = DiffCtx::new(src, tgt);
    let images: Vec<Vec<Arrow>> = unknowns.par_iter().map(|u| ctx.apply(u)).collect();
    let mut keys: HashMap<&Arrow, u64> = HashMap::new();
    let cols: Vec<Vec<u64>> = images
        .iter()
        .map(|img| {
            img.iter()
                .map(|t| {
                    let next = keys.len() as u64;
                    *keys.entry(t).or_insert(next)
                })
                .collect()
        })
        .collect();
    // Union-find over unknowns sharing a relation term.
    let n = unknowns.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut owner: HashMap<u64, usize> = HashMap::new();
    for (i, col) in cols.iter().enumerate() {
        for &k in col {
            match owner.get(&k) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
                None => {
                    owner.insert(k, i);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut gid: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let g = *gid.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    let per_group: Vec<Vec<Morphism>> = groups
        .par_iter()
        .map(|members| {
            let mut solver = SparseSolver::new();
            let mut found = Vec::new();
            for &i in members {
                if let Some(combo) = solver.add_column(i as u32, cols[i].clone()) {
                    found.push(Morphism::new(combo.iter().map(|&j| unknowns[j as usize].clone()).collect()));
                }
            }
            found
        })
        .collect();
    Ok(per_group.into_iter().flatten().collect())
}

/// Finds a homotopy equivalence between structures with a type A side among
/// cycles whose components take at most `max_arity` inputs.
pub fn find_equivalence_bounded(
    src: &Structure,
    tgt: &Structure,
    max_arity: usize,
    max_sum: usize,
) -> Result<EquivalenceCertificate> {
    let cands = morphism_cycles(src, tgt, max_arity)?;
    search(src, tgt, &cands, max_sum, false)
}

/// Whether every morphism relation with at most `ell + 1` inputs holds for the
/// components of `f` with at most `ell` inputs. `ell` must reach the chord
/// nilpotency bound of the input algebra.
pub fn verify_morphism_bounded(src: &Structure, tgt: &Structure, f: &Morphism, ell: usize) -> Result<bool> {
    let inp =
        src.inp.as_ref().ok_or_else(|| Error::InvalidArgument("bounded verification needs a type A side".into()))?;
    let k = inp.chord_nilpotency_bound();
    if ell < k {
        return Err(Error::InsufficientArity(format!("arity {ell} is below the nilpotency bound {k}")));
    }
    check_morphism(src, tgt, f)?;
    let truncated = Morphism::new(f.arrows.iter().filter(|a| a.inputs.len() <= ell).cloned().collect());
    let d = mor_differential(src, tgt, &truncated)?;
    Ok(d.arrows.iter().all(|a| a.inputs.len() > ell + 1))
}

/// Pairing of a DA bimodule with a type D structure over `A ⊗ B` (typically a
/// DD bimodule): inputs are matched with first tensor factors, and the second
/// factors multiply into the output coefficient.
pub fn box_tensor_dd(x: &Structure, y: &Structure) -> Result<(Structure, TensorIndex)> {
    let (alg2, gens, index) = dd_generators(x, y)?;
    let yalg = y.out.as_ref().expect("checked");
    let mut arrows = dd_pair_terms(x, y, y, &x.arrows, &index, &index, &alg2);
    let mut x_by_in: HashMap<u32, Vec<u32>> = HashMap::new();
    for (i, g) in x.gens.iter().enumerate() {
        x_by_in.entry(g.in_idem).or_default().push(i as u32);
    }
    let xout = x.out.as_ref().expect("checked");
    for ya in &y.arrows {
        let (a, b) = yalg.split(ya.coef);
        if !first_factor(yalg).is_idempotent(a) {
            continue;
        }
        for &xi in x_by_in.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
            let e = x.gens[xi as usize].out_idem;
            let _ = xout;
            arrows.push(Arrow::new(index[&(xi, ya.src)], alg2.join(e, b), index[&(xi, ya.dst)]));
        }
    }
    let s = Structure::new_unchecked(crate::structures::Kind::DD, Some(alg2), None, gens, arrows);
    Ok((s, index))
}

/// `g ⊠ Id_Y` for a morphism `g: X -> X2` of DA bimodules and `Y` over `A ⊗ B`.
pub fn tensor_id_right_dd(x: &Structure, x2: &Structure, g: &Morphism, y: &Structure) -> Result<Morphism> {
    let (alg2, _, i1) = dd_generators(x, y)?;
    let (_, _, i2) = dd_generators(x2, y)?;
    Ok(Morphism::new(dd_pair_terms(x, y, y, &g.arrows, &i1, &i2, &alg2)))
}

fn first_factor(a: &Alg) -> &Alg {
    match a {
        Alg::Tensor(f, _) => f,
        other => other,
    }
}

fn second_factor(a: &Alg) -> Option<&Alg> {
    match a {
        Alg::Tensor(_, s) => Some(s),
        _ => None,
    }
}

fn dd_generators(x: &Structure, y: &Structure) -> Result<(Alg, Vec<Generator>, TensorIndex)> {
    let xin = x.inp.as_ref().ok_or_else(|| Error::InvalidArgument("left factor has no type A side".into()))?;
    let xout = x.out.as_ref().ok_or_else(|| Error::InvalidArgument("left factor has no type D side".into()))?;
    let yalg = y.out.as_ref().ok_or_else(|| Error::InvalidArgument("right factor has no type D side".into()))?;
    let second = second_factor(yalg)
        .ok_or_else(|| Error::InvalidArgument("right factor is not over a tensor algebra".into()))?;
    match first_factor(yalg) {
        Alg::Strands(s) if s.pmc() == xin.pmc() => {}
        _ => return Err(Error::InvalidArgument("first tensor factor does not match the type A side".into())),
    }
    let alg2 = Alg::Tensor(Box::new(xout.clone()), Box::new(second.clone()));
    let mut gens = Vec::new();
    let mut index = HashMap::new();
    for (i, gx) in x.gens.iter().enumerate() {
        for (j, gy) in y.gens.iter().enumerate() {
            let (e1, e2) = yalg.split(gy.out_idem);
            if e1 != gx.in_idem {
                continue;
            }
            index.insert((i as u32, j as u32), gens.len() as u32);
            gens.push(Generator {
                label: format!("{}&{}", gx.label, gy.label),
                out_idem: alg2.join(gx.out_idem, e2),
                in_idem: NONE,
            });
        }
    }
    Ok((alg2, gens, index))
}

/// Terms from arrows of the DA side (structure or morphism), each input
/// consumed by one arrow of `y`.
fn dd_pair_terms(
    x: &Structure,
    y: &Structure,
    _y2: &Structure,
    xs: &[Arrow],
    i1: &TensorIndex,
    i2: &TensorIndex,
    alg2: &Alg,
) -> Vec<Arrow> {
    let yalg = y.out.as_ref().expect("checked");
    let second = second_factor(yalg).expect("checked");
    let mut by_src_first: HashMap<(u32, u32), Vec<(u32, u32)>> = HashMap::new();
    for ya in &y.arrows {
        let (a, b) = yalg.split(ya.coef);
        by_src_first.entry((ya.src, a)).or_default().push((ya.dst, b));
    }
    let mut y_by_first: HashMap<u32, Vec<u32>> = HashMap::new();
    for (j, g) in y.gens.iter().enumerate() {
        y_by_first.entry(yalg.split(g.out_idem).0).or_default().push(j as u32);
    }
    let mut out = Vec::new();
    for xa in xs {
        for &y0 in y_by_first.get(&x.gens[xa.src as usize].in_idem).map(Vec::as_slice).unwrap_or(&[]) {
            let Some(&src) = i1.get(&(xa.src, y0)) else { continue };
            // Partial products: (current y generator, accumulated second-factor terms).
            let e2 = yalg.split(y.gens[y0 as usize].out_idem).1;
            let mut states: Vec<(u32, Vec<u32>)> = vec![(y0, vec![e2])];
            for &a in &xa.inputs {
                let mut next = Vec::new();
                for (cur, acc) in &states {
                    for &(dst, b) in by_src_first.get(&(*cur, a)).map(Vec::as_slice).unwrap_or(&[]) {
                        let mut prod = Vec::new();
                        for &p in acc {
                            prod.extend(second.mul(p, b));
                        }
                        let prod = normalize(prod);
                        if !prod.is_empty() {
                            next.push((dst, prod));
                        }
                    }
                }
                states = next;
            }
            for (end, acc) in states {
                let Some(&dst) = i2.get(&(xa.dst, end)) else { continue };
                for b in acc {
                    out.push(Arrow::new(src, alg2.join(xa.coef, b), dst));
                }
            }
        }
    }
    out
}

/// The equivalence `[Id] -> AZbar ⊠ AZ`, certified after pairing with the DD
/// identity, together with DA-level data when a finite-arity representative is
/// found.
#[derive(Clone, Debug)]
pub struct OmegaEquivalence {
    /// The identity DA bimodule.
    pub identity: Structure,
    /// `CFDA(AZbar) ⊠ CFDA(AZ)`.
    pub composite: Structure,
    /// `[Id] ⊠ DD`.
    pub dd_source: Structure,
    /// `(AZbar ⊠ AZ) ⊠ DD`.
    pub dd_target: Structure,
    /// Type D equivalence `dd_source -> dd_target`.
    pub certificate: EquivalenceCertificate,
    /// A DA morphism `[Id] -> AZbar ⊠ AZ` whose pairing with DD is homotopic to
    /// the certified map.
    pub da_morphism: Option<Morphism>,
}

/// Largest input count tried for the DA-level representative of Ω.
pub const OMEGA_MAX_ARITY: usize = 3;

/// Finds Ω for the split circle behind `alg`.
pub fn omega_equivalence(alg: &Arc<StrandsAlgebra>, max_sum: usize) -> Result<OmegaEquivalence> {
    let identity = identity_da(alg)?;
    let composite = box_tensor(&cfda_azbar(alg)?, &cfda_az(alg)?)?.0;
    let dd = dd_identity(alg)?;
    let dd_source = box_tensor_dd(&identity, &dd)?.0;
    let dd_target = box_tensor_dd(&composite, &dd)?.0;
    let mh = homology_basis_of_mor(&dd_source, &dd_target)?;
    let cands = mh.classes();
    let mut certificate = search(&dd_source, &dd_target, &cands, max_sum, true)?;
    certificate.search_index = certificate.search_index.iter().map(|&i| mh.order[i]).collect();
    let mut da_morphism = None;
    for r in 0..=OMEGA_MAX_ARITY {
        let Ok(c) = find_equivalence_bounded(&identity, &composite, r, max_sum) else { continue };
        let paired = tensor_id_right_dd(&identity, &composite, &c.forward, &dd)?;
        if mh.is_nullhomotopic(&paired.add(&certificate.forward)) == Some(true) {
            da_morphism = Some(c.forward);
            break;
        }
    }
    Ok(OmegaEquivalence { identity, composite, dd_source, dd_target, certificate, da_morphism })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{cfd_solid_torus, cfd_zero_handlebody_over, split_algebra, Framing};
    use crate::structures::box_tensor_da_d;

    #[test]
    fn combinations_lex() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(2, 3).len(), 0);
    }

    #[test]
    fn mor_y0_has_two_classes() {
        let p = cfd_solid_torus(Framing::Zero).unwrap();
        let mh = homology_basis_of_mor(&p, &p).unwrap();
        assert_eq!(mh.dim(), 2);
        let id = p.identity();
        assert_eq!(mh.is_nullhomotopic(&id), Some(false));
    }

    #[test]
    fn identity_certificate() {
        let p = cfd_solid_torus(Framing::Zero).unwrap();
        let c = find_homotopy_equivalence(&p, &p, 4).unwrap();
        assert!(c.verify(&p, &p).unwrap());
        let mh = homology_basis_of_mor(&p, &p).unwrap();
        assert_eq!(mh.is_nullhomotopic(&c.forward.add(&p.identity())), Some(true));
    }

    #[test]
    fn az_pairing_mor_dimension() {
        let alg = split_algebra(1).unwrap();
        let p = cfd_zero_handlebody_over(&alg).unwrap();
        let q = box_tensor_da_d(&cfda_az(&alg).unwrap(), &p).unwrap();
        assert_eq!(homology_basis_of_mor(&q, &p).unwrap().dim(), 2);
        let c = find_homotopy_equivalence(&q, &p, 4).unwrap();
        assert!(c.verify(&q, &p).unwrap());
    }

    #[test]
    fn not_equivalent_is_reported() {
        let p = cfd_solid_torus(Framing::Zero).unwrap();
        let q = cfd_solid_torus(Framing::Infinity).unwrap();
        assert!(matches!(find_homotopy_equivalence(&p, &q, 4), Err(Error::NotEquivalent(_))));
    }

    #[test]
    fn bounded_identity() {
        let alg = split_algebra(1).unwrap();
        let az = cfda_az(&alg).unwrap();
        assert!(verify_morphism_bounded(&az, &az, &az.identity(), 6).unwrap());
        assert!(matches!(verify_morphism_bounded(&az, &az, &az.identity(), 2), Err(Error::InsufficientArity(_))));
        let mut bad = az.identity();
        bad.arrows.pop();
        assert!(!verify_morphism_bounded(&az, &az, &bad, 6).unwrap());
    }

    #[test]
    fn dd_pairing_of_identity() {
        let alg = split_algebra(1).unwrap();
        let dd = dd_identity(&alg).unwrap();
        let (s, _) = box_tensor_dd(&identity_da(&alg).unwrap(), &dd).unwrap();
        assert_eq!(s.len(), dd.len());
        assert!(crate::structures::check_structure(&s).is_empty());
        assert_eq!(s.arrows.len(), dd.arrows.len());
    }
}
