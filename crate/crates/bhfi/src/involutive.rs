//! The involution on morphism-space homology, the involutive complex with its
//! Q action, involutive bordered structures and their pairing, and the
//! mapping class action.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::equivalence::{
    find_equivalence_bounded, find_homotopy_equivalence, homology_basis_of_mor, EquivalenceCertificate, MorHomology,
    OmegaEquivalence,
};
use crate::error::{Error, Result};
use crate::f2::{mapping_cone, reduce, ChainComplex, ChainMap, F2Matrix};
use crate::standard::{cfda_az, cfda_azbar};
use crate::strands::StrandsAlgebra;
use crate::structures::{
    box_tensor, compose, is_homotopy_equivalence, mor_differential, morphism_to_chain_map, tensor_id_left,
    tensor_id_right, Arrow, Morphism, Structure, TensorIndex,
};

/// Summary of an involution computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IotaReport {
    /// Dimension of the hat homology.
    pub hf_dim: usize,
    /// Matrix of the involution on the homology basis (column `j` is the image of class `j`).
    pub iota: F2Matrix,
    /// `dim ker(Id + iota)`.
    pub ker_dim: usize,
    /// `dim coker(Id + iota)`.
    pub coker_dim: usize,
    /// Dimension of the involutive homology.
    pub hfi_dim: usize,
    /// Q on a homology basis of the involutive complex.
    pub q_action: F2Matrix,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    hf_dim: usize,
    iota: Vec<Vec<u8>>,
    ker: usize,
    hfi_dim: usize,
    #[serde(rename = "Q")]
    q: Vec<Vec<u8>>,
    coker: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

impl IotaReport {
    /// `iota^2 = Id`.
    pub fn is_involution(&self) -> bool {
        self.iota.mul(&self.iota).map(|m| m == F2Matrix::identity(self.hf_dim)).unwrap_or(false)
    }

    /// JSON report, keys in a fixed order.
    pub fn to_json(&self) -> String {
        let note = (!self.is_involution()).then_some("iota squared is not the identity on homology");
        serde_json::to_string(&ReportJson {
            hf_dim: self.hf_dim,
            iota: self.iota.to_rows(),
            ker: self.ker_dim,
            coker: self.coker_dim,
            hfi_dim: self.hfi_dim,
            q: self.q_action.to_rows(),
            note,
        })
        .expect("plain data")
    }
}

/// Everything computed along the morphism-space route.
#[derive(Clone, Debug)]
pub struct IotaRun {
    /// Homology of `Mor(P0, P1)`.
    pub mor: MorHomology,
    /// Basis cycles `f_i`, in search order.
    pub classes: Vec<Morphism>,
    /// Cycles `iota(f_i)`.
    pub images: Vec<Morphism>,
    /// Equivalence `P0 -> AZ ⊠ P0`.
    pub psi0_inv: EquivalenceCertificate,
    /// Equivalence `AZ ⊠ P1 -> P1`.
    pub psi1: EquivalenceCertificate,
    /// Cone of `Id + iota` from homology representatives into `Mor(P0, P1)`, with Q.
    pub cone: ChainComplex,
    /// Summary.
    pub report: IotaReport,
}

fn strands_of(p: &Structure) -> Result<Arc<StrandsAlgebra>> {
    p.out_strands()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("expected a type D structure over a strands algebra".into()))
}

fn matrix_from_coordinates(n: usize, cols: &[Vec<u8>]) -> F2Matrix {
    let sparse: Vec<Vec<u32>> =
        cols.iter().map(|c| c.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i as u32).collect()).collect();
    F2Matrix::from_columns(n, &sparse)
}

/// Matrix of a chain endomorphism-like map on homology, given cycle
/// representatives and a projection.
fn induced_on_homology(
    cycles: &[Vec<u32>],
    map: impl Fn(&[u32]) -> Vec<u32>,
    project: impl Fn(&[u32]) -> Vec<u8>,
) -> Vec<Vec<u8>> {
    cycles.iter().map(|c| project(&map(c))).collect()
}

/// The involution on `H_* Mor(P0, P1)` and the involutive complex.
///
/// `iota(f) = Psi_1 ∘ (Id_AZ ⊠ f) ∘ Psi_0^{-1}`, where the two equivalences are
/// found among homology classes of the relevant morphism complexes.
pub fn iota_on_mor(p0: &Structure, p1: &Structure, max_sum: usize) -> Result<IotaRun> {
    let alg = strands_of(p0)?;
    if strands_of(p1)?.pmc() != alg.pmc() {
        return Err(Error::InvalidArgument("P0 and P1 live over different circles".into()));
    }
    let mor = homology_basis_of_mor(p0, p1)?;
    let n = mor.dim();
    let classes = mor.classes();
    let az = cfda_az(&alg)?;
    let q0 = box_tensor(&az, p0)?.0;
    let q1 = box_tensor(&az, p1)?.0;
    let psi0_inv = find_homotopy_equivalence(p0, &q0, max_sum)?;
    let psi1 = find_homotopy_equivalence(&q1, p1, max_sum)?;
    let out = p0.out.as_ref();
    let images: Vec<Morphism> = classes
        .par_iter()
        .map(|f| -> Result<Morphism> {
            let lifted = tensor_id_left(&az, p0, p1, f)?;
            Ok(compose(&compose(&psi0_inv.forward, &lifted, out), &psi1.forward, out))
        })
        .collect::<Result<_>>()?;
    // Coordinates in search order.
    let pos: HashMap<usize, usize> = mor.order.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let reorder = |c: Vec<u8>| -> Vec<u8> {
        let mut v = vec![0u8; n];
        for (i, b) in c.into_iter().enumerate() {
            v[pos[&i]] = b;
        }
        v
    };
    let mut cols = Vec::with_capacity(n);
    for (f, img) in classes.iter().zip(&images) {
        if !mor_differential(p0, p1, img)?.is_zero() {
            return Err(Error::InvalidMap(format!(
                "image of a cycle under iota is not a cycle ({} terms)",
                f.arrows.len()
            )));
        }
        let c =
            mor.coordinates(img).ok_or_else(|| Error::InvalidMap("image of iota outside the morphism basis".into()))?;
        cols.push(reorder(c));
    }
    let iota = matrix_from_coordinates(n, &cols);
    let one_plus = iota.add(&F2Matrix::identity(n))?;
    let rank = one_plus.rank();
    // Cone of Id + iota from H (zero differential) into the Mor complex.
    let h = ChainComplex::new_unchecked((0..n).map(|i| format!("h{i}")).collect(), vec![Vec::new(); n]);
    let vectors: Vec<Vec<u32>> = classes.iter().map(|f| mor.mor.to_vector(f).expect("basis cycle")).collect();
    let image_vectors: Vec<Vec<u32>> = images.iter().map(|f| mor.mor.to_vector(f).expect("checked")).collect();
    let map_cols: Vec<Vec<u32>> =
        vectors.iter().zip(&image_vectors).map(|(a, b)| crate::f2::xor_sorted(a, b)).collect();
    let target = &mor.mor.complex;
    let map = ChainMap::new_unchecked(target.len(), map_cols);
    let cone = mapping_cone(&h, target, &map)?;
    let q_cols: Vec<Vec<u32>> = vectors
        .iter()
        .map(|v| v.iter().map(|&r| r + n as u32).collect())
        .chain((0..target.len()).map(|_| Vec::new()))
        .collect();
    let cone = cone.with_action("Q", q_cols.clone())?;
    let (hfi_dim, q_action) = homology_action(&cone, &q_cols);
    let report = IotaReport { hf_dim: n, iota, ker_dim: n - rank, coker_dim: n - rank, hfi_dim, q_action };
    Ok(IotaRun { mor, classes, images, psi0_inv, psi1, cone, report })
}

/// Homology dimension of a complex and the matrix of an action on it.
fn homology_action(c: &ChainComplex, action: &[Vec<u32>]) -> (usize, F2Matrix) {
    let h = c.homology();
    let cols = induced_on_homology(&h.cycles, |v| crate::f2::apply_sparse(action, v), |v| h.project(v));
    (h.dim, matrix_from_coordinates(h.dim, &cols))
}

/// The involutive complex of the pairing of `P0` and `P1`, with its Q action.
pub fn cfi_hat(p0: &Structure, p1: &Structure, max_sum: usize) -> Result<ChainComplex> {
    Ok(iota_on_mor(p0, p1, max_sum)?.cone)
}

/// A type D structure with an equivalence `AZ ⊠ P -> P`.
#[derive(Clone, Debug)]
pub struct InvolutiveTypeD {
    /// The structure.
    pub p: Structure,
    /// `AZ ⊠ P`.
    pub az_p: Structure,
    /// Equivalence `AZ ⊠ P -> P`.
    pub psi: EquivalenceCertificate,
}

impl InvolutiveTypeD {
    /// Finds the equivalence by search.
    pub fn new(p: Structure, max_sum: usize) -> Result<Self> {
        let az_p = box_tensor(&cfda_az(&strands_of(&p)?)?, &p)?.0;
        let psi = find_homotopy_equivalence(&az_p, &p, max_sum)?;
        Ok(Self { p, az_p, psi })
    }

    /// Uses a given equivalence after checking it.
    pub fn with_psi(p: Structure, psi: Morphism) -> Result<Self> {
        let az_p = box_tensor(&cfda_az(&strands_of(&p)?)?, &p)?.0;
        let psi = certify(&az_p, &p, psi)?;
        Ok(Self { p, az_p, psi })
    }
}

/// An A-infinity module with an equivalence `M ⊠ AZbar -> M`.
#[derive(Clone, Debug)]
pub struct InvolutiveAInf {
    /// The module.
    pub m: Structure,
    /// `M ⊠ AZbar`.
    pub m_azbar: Structure,
    /// Equivalence `M ⊠ AZbar -> M`.
    pub psi: EquivalenceCertificate,
}

fn input_strands(m: &Structure) -> Result<Arc<StrandsAlgebra>> {
    m.inp.clone().ok_or_else(|| Error::InvalidArgument("expected an A-infinity module".into()))
}

impl InvolutiveAInf {
    /// Finds the equivalence among cycles with at most `max_arity` inputs,
    /// trying smaller arities first.
    pub fn new(m: Structure, max_arity: usize, max_sum: usize) -> Result<Self> {
        let m_azbar = box_tensor(&m, &cfda_azbar(&input_strands(&m)?)?)?.0;
        let psi = bounded_search(&m_azbar, &m, max_arity, max_sum)?;
        Ok(Self { m, m_azbar, psi })
    }

    /// Uses a given equivalence after checking it.
    pub fn with_psi(m: Structure, psi: Morphism) -> Result<Self> {
        let m_azbar = box_tensor(&m, &cfda_azbar(&input_strands(&m)?)?)?.0;
        let psi = certify(&m_azbar, &m, psi)?;
        Ok(Self { m, m_azbar, psi })
    }
}

fn bounded_search(
    src: &Structure,
    tgt: &Structure,
    max_arity: usize,
    max_sum: usize,
) -> Result<EquivalenceCertificate> {
    let mut last = None;
    for r in 0..=max_arity {
        match find_equivalence_bounded(src, tgt, r, max_sum) {
            Ok(c) => return Ok(c),
            Err(e @ Error::NotEquivalent(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::NotEquivalent("empty arity range".into())))
}

fn certify(src: &Structure, tgt: &Structure, f: Morphism) -> Result<EquivalenceCertificate> {
    if !mor_differential(src, tgt, &f)?.is_zero() {
        return Err(Error::RelationViolation("supplied map is not a cycle".into()));
    }
    if !is_homotopy_equivalence(src, tgt, &f)? {
        return Err(Error::NotEquivalent("supplied map is not a homotopy equivalence".into()));
    }
    let (c0, c1) = (src.idempotent_part(), tgt.idempotent_part());
    let cone = mapping_cone(&c0, &c1, &f.idempotent_part(src, tgt))?;
    Ok(EquivalenceCertificate { evidence: cone.homology().trace(), forward: f, search_index: Vec::new() })
}

/// Which representative of `[Id] -> AZbar ⊠ AZ` to pair with `P`.
#[derive(Clone, Copy, Debug)]
pub enum OmegaSource<'a> {
    /// Search `P -> AZbar ⊠ (AZ ⊠ P)` directly among morphism classes.
    Search,
    /// Pair a DA-level representative with `P`.
    Da(&'a OmegaEquivalence),
}

/// Chain complex `M ⊠ P` with an endomorphism, and its cone.
#[derive(Clone, Debug)]
pub struct TwistedPair {
    /// `M ⊠ P`.
    pub complex: ChainComplex,
    /// The endomorphism.
    pub map: ChainMap,
    /// Cone of `Id + map` with Q mapping the source copy to the target copy.
    pub cone: ChainComplex,
    /// Homology dimension of `M ⊠ P`.
    pub hf_dim: usize,
    /// Homology dimension of the cone.
    pub hfi_dim: usize,
    /// The endomorphism on a homology basis of `M ⊠ P`.
    pub on_homology: F2Matrix,
}

impl TwistedPair {
    /// The report in the same shape as the morphism-space route.
    pub fn report(&self) -> IotaReport {
        let n = self.hf_dim;
        let rank = self.on_homology.add(&F2Matrix::identity(n)).map(|m| m.rank()).unwrap_or(0);
        let q_cols = self.cone.action("Q").map(<[_]>::to_vec).unwrap_or_default();
        let (hfi_dim, q_action) = homology_action(&self.cone, &q_cols);
        IotaReport {
            hf_dim: n,
            iota: self.on_homology.clone(),
            ker_dim: n - rank,
            coker_dim: n - rank,
            hfi_dim,
            q_action,
        }
    }
}

/// Relabelling map between two structures with the same generator labels.
fn label_permutation(from: &Structure, to: &Structure) -> Result<Vec<u32>> {
    let idx: HashMap<&str, u32> = to.gens.iter().enumerate().map(|(i, g)| (g.label.as_str(), i as u32)).collect();
    if idx.len() != to.len() || from.len() != to.len() {
        return Err(Error::InvalidArgument("generator labels do not determine the reassociation".into()));
    }
    from.gens
        .iter()
        .map(|g| {
            idx.get(g.label.as_str())
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("no generator {}", g.label)))
        })
        .collect()
}

/// The endomorphism `(Theta_M ⊠ Id_P) ∘ (Id_M ⊠ Id_X ⊠ Theta_P) ∘ (Id_M ⊠ E_P)` of
/// `M ⊠ P`, where `E_P: P -> X ⊠ (Y ⊠ P)`, `Theta_P: Y ⊠ P -> P` and
/// `Theta_M: M ⊠ X -> M`.
#[allow(clippy::too_many_arguments)]
pub fn twisted_endomorphism(
    m: &Structure,
    p: &Structure,
    x: &Structure,
    y_p: &Structure,
    theta_m: &Morphism,
    theta_p: &Morphism,
    e_p: &Morphism,
) -> Result<TwistedPair> {
    let x_yp = box_tensor(x, y_p)?.0;
    let x_p = box_tensor(x, p)?.0;
    let m_x = box_tensor(m, x)?.0;
    let (mp, _) = box_tensor(m, p)?;
    let (m_xyp, _) = box_tensor(m, &x_yp)?;
    let (m_xp, _) = box_tensor(m, &x_p)?;
    let (mx_p, _) = box_tensor(&m_x, p)?;
    let c = mp.to_chain_complex();
    let c = ChainComplex::new(c.labels().to_vec(), c.differential().to_vec())?;
    let a = tensor_id_left(m, p, &x_yp, e_p)?;
    let g1 = tensor_id_left(x, y_p, p, theta_p)?;
    let b = tensor_id_left(m, &x_yp, &x_p, &g1)?;
    let perm = label_permutation(&m_xp, &mx_p)?;
    let cc = tensor_id_right(&m_x, m, theta_m, p)?;
    let f_a = morphism_to_chain_map(m_xyp.len(), mp.len(), &a);
    let f_b = morphism_to_chain_map(m_xp.len(), m_xyp.len(), &b);
    let f_r = ChainMap::new_unchecked(mx_p.len(), perm.iter().map(|&i| vec![i]).collect());
    let f_c = morphism_to_chain_map(mp.len(), mx_p.len(), &cc);
    let map = f_a.then(&f_b).then(&f_r).then(&f_c);
    if !map.is_chain_map(&c, &c) {
        return Err(Error::InvalidMap("twisted endomorphism is not a chain map".into()));
    }
    let n = c.len();
    let one_plus = map.add(&ChainMap::identity(n));
    let cone = mapping_cone(&c, &c, &one_plus)?;
    let q_cols: Vec<Vec<u32>> = (0..n as u32).map(|i| vec![i + n as u32]).chain((0..n).map(|_| Vec::new())).collect();
    let cone = cone.with_action("Q", q_cols)?;
    let hc = c.homology();
    let cols = induced_on_homology(&hc.cycles, |v| map.apply(v), |v| hc.project(v));
    let on_homology = matrix_from_coordinates(hc.dim, &cols);
    let hfi_dim = cone.homology().dim;
    Ok(TwistedPair { complex: c, map, cone, hf_dim: hc.dim, hfi_dim, on_homology })
}

/// Pairs `P` with a DA-level `Omega`, giving `P -> AZbar ⊠ (AZ ⊠ P)`.
pub fn omega_on(p: &Structure, omega: &OmegaEquivalence) -> Result<Morphism> {
    let alg = strands_of(p)?;
    let az_p = box_tensor(&cfda_az(&alg)?, p)?.0;
    let target = box_tensor(&cfda_azbar(&alg)?, &az_p)?.0;
    let (id_p, id_index) = box_tensor(&omega.identity, p)?;
    let (comp_p, _) = box_tensor(&omega.composite, p)?;
    let g = tensor_id_right(
        &omega.identity,
        &omega.composite,
        &omega.da_morphism.clone().ok_or_else(|| Error::NotEquivalent("no DA-level representative of Omega".into()))?,
        p,
    )?;
    let to_target = label_permutation(&comp_p, &target)?;
    let from_p = strip_identity(&id_index, id_p.len())?;
    Ok(Morphism::new(
        g.arrows
            .iter()
            .map(|a| Arrow { src: from_p[a.src as usize], dst: to_target[a.dst as usize], ..a.clone() })
            .collect(),
    ))
}

/// `[Id] ⊠ P -> P` on generators.
fn strip_identity(index: &TensorIndex, len: usize) -> Result<Vec<u32>> {
    let mut out = vec![u32::MAX; len];
    for (&(_, j), &g) in index {
        out[g as usize] = j;
    }
    if out.contains(&u32::MAX) {
        return Err(Error::InvalidArgument("identity pairing is not bijective".into()));
    }
    Ok(out)
}

/// The pairing of involutive structures: the cone of `Id + Phi` on `M ⊠ P`.
pub fn involutive_pair(
    a: &InvolutiveAInf,
    d: &InvolutiveTypeD,
    omega: OmegaSource,
    max_sum: usize,
) -> Result<TwistedPair> {
    let alg = strands_of(&d.p)?;
    if input_strands(&a.m)?.pmc() != alg.pmc() {
        return Err(Error::InvalidArgument("module and type D structure live over different circles".into()));
    }
    let azbar = cfda_azbar(&alg)?;
    let omega_p = match omega {
        OmegaSource::Search => {
            let target = box_tensor(&azbar, &d.az_p)?.0;
            find_homotopy_equivalence(&d.p, &target, max_sum)?.forward
        }
        OmegaSource::Da(om) => omega_on(&d.p, om)?,
    };
    twisted_endomorphism(&a.m, &d.p, &azbar, &d.az_p, &a.psi.forward, &d.psi.forward, &omega_p)
}

/// Action of a mapping class on the homology of `M ⊠ P`, for mutually inverse
/// DA bimodules `chi` and `chi_inv`.
pub fn mcg_action(
    m: &Structure,
    p: &Structure,
    chi: &Structure,
    chi_inv: &Structure,
    max_arity: usize,
    max_sum: usize,
) -> Result<F2Matrix> {
    let y_p = box_tensor(chi_inv, p)?.0;
    let x_yp = box_tensor(chi, &y_p)?.0;
    let m_x = box_tensor(m, chi)?.0;
    let e_p = find_homotopy_equivalence(p, &x_yp, max_sum)?;
    let theta_p = find_homotopy_equivalence(&y_p, p, max_sum)?;
    let theta_m = bounded_search(&m_x, m, max_arity, max_sum)?;
    let t = twisted_endomorphism(m, p, chi, &y_p, &theta_m.forward, &theta_p.forward, &e_p.forward)?;
    Ok(t.on_homology)
}

/// Homology of `M ⊠ P` with projection and inclusion, for callers comparing maps.
pub fn pairing_homology(m: &Structure, p: &Structure) -> Result<(ChainComplex, crate::f2::Reduction)> {
    let c = box_tensor(m, p)?.0.to_chain_complex();
    let c = ChainComplex::new(c.labels().to_vec(), c.differential().to_vec())?;
    let r = reduce(&c)?;
    Ok((c, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::omega_equivalence;
    use crate::standard::{cfa_zero_handlebody_over, cfd_zero_handlebody_over, identity_da, split_algebra};

    #[test]
    fn s2xs1_iota() {
        let alg = split_algebra(1).unwrap();
        let p = cfd_zero_handlebody_over(&alg).unwrap();
        let run = iota_on_mor(&p, &p, 4).unwrap();
        assert_eq!(run.report.hf_dim, 2);
        assert_eq!(run.report.iota, F2Matrix::identity(2));
        assert_eq!(run.report.hfi_dim, 4);
        assert_eq!(run.report.ker_dim, 2);
        assert!(!run.report.q_action.is_zero());
    }

    #[test]
    fn pairing_matches_mor_route() {
        let alg = split_algebra(1).unwrap();
        let p = cfd_zero_handlebody_over(&alg).unwrap();
        let m = cfa_zero_handlebody_over(&alg).unwrap();
        let d = InvolutiveTypeD::new(p.clone(), 4).unwrap();
        let a = InvolutiveAInf::new(m, 2, 4).unwrap();
        let t = involutive_pair(&a, &d, OmegaSource::Search, 4).unwrap();
        assert_eq!(t.hf_dim, 2);
        assert_eq!(t.hfi_dim, 4);
        let om = omega_equivalence(&alg, 4).unwrap();
        let t2 = involutive_pair(&a, &d, OmegaSource::Da(&om), 4).unwrap();
        assert_eq!(t2.hfi_dim, 4);
    }

    #[test]
    fn homotopic_psi_gives_the_same_cone() {
        let alg = split_algebra(1).unwrap();
        let p = cfd_zero_handlebody_over(&alg).unwrap();
        let m = cfa_zero_handlebody_over(&alg).unwrap();
        let d = InvolutiveTypeD::new(p.clone(), 4).unwrap();
        let a = InvolutiveAInf::new(m, 2, 4).unwrap();
        let mh = crate::equivalence::homology_basis_of_mor(&d.az_p, &p).unwrap();
        let boundary = (0..mh.mor.complex.len() as u32)
            .map(|i| mh.mor.to_morphism(&mh.mor.complex.apply(&[i])))
            .find(|b| !b.is_zero())
            .expect("nonzero boundary");
        let d2 = InvolutiveTypeD::with_psi(p, d.psi.forward.add(&boundary)).unwrap();
        let t1 = involutive_pair(&a, &d, OmegaSource::Search, 4).unwrap();
        let t2 = involutive_pair(&a, &d2, OmegaSource::Search, 4).unwrap();
        assert_eq!((t1.hf_dim, t1.hfi_dim), (t2.hf_dim, t2.hfi_dim));
        assert_eq!(t1.on_homology, t2.on_homology);
    }

    #[test]
    fn identity_mapping_class_acts_trivially() {
        let alg = split_algebra(1).unwrap();
        let p = cfd_zero_handlebody_over(&alg).unwrap();
        let m = cfa_zero_handlebody_over(&alg).unwrap();
        let id = identity_da(&alg).unwrap();
        let mat = mcg_action(&m, &p, &id, &id, 2, 4).unwrap();
        assert_eq!(mat, F2Matrix::identity(2));
    }
}
