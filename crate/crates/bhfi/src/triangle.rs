//! The surgery exact triangle for the (infinity, -1, 0) solid tori: the
//! explicit equivalences and homotopies relating the AZ-twisted solid tori to
//! the untwisted ones, and exactness checks after pairing with a module.

use std::sync::Arc;

use serde::Serialize;

use crate::equivalence::{omega_equivalence, EquivalenceCertificate, OmegaEquivalence, DEFAULT_MAX_SUM};
use crate::error::{Error, Result};
use crate::f2::{apply_sparse, mapping_cone, normalize64, ChainComplex, ChainMap, SparseSolver};
use crate::involutive::{omega_on, InvolutiveAInf};
use crate::standard::{cfda_az, cfda_azbar, split_algebra, surgery_maps_over, SurgeryMaps};
use crate::strands::StrandsAlgebra;
use crate::structures::{
    box_tensor, compose, is_homotopy_equivalence, mor_differential, morphism_to_chain_map, tensor_id_left,
    tensor_id_right, Arrow, Morphism, Structure,
};

/// Solid tori, their AZ twists, and the maps between them.
#[derive(Clone, Debug)]
pub struct TriangleData {
    /// The genus-one algebra.
    pub alg: Arc<StrandsAlgebra>,
    /// Solid tori and `phi`, `psi`.
    pub maps: SurgeryMaps,
    /// `AZ ⊠ H_inf`, `AZ ⊠ H_-1`, `AZ ⊠ H_0`.
    pub twisted: [Structure; 3],
    /// `Id ⊠ phi` and `Id ⊠ psi`.
    pub id_phi: Morphism,
    /// See `id_phi`.
    pub id_psi: Morphism,
    /// Equivalences `AZ ⊠ H -> H` for the three framings.
    pub psi_maps: [Morphism; 3],
    /// Homotopy `AZ ⊠ H_inf -> H_-1`.
    pub g: Morphism,
    /// Homotopy `AZ ⊠ H_-1 -> H_0`.
    pub h: Morphism,
}

// Figure data. A twisted generator is written `x|g` with `x` the algebra
// element of the AZ generator (i0, i1 for idempotents) and `g` the solid torus
// generator; an empty coefficient means the idempotent.
type FigArrow = (&'static str, &'static str, &'static str);

const DELTA_INF: &[FigArrow] = &[
    ("rho_1_2|r", "", "rho_1_4|r"),
    ("rho_3_4|r", "rho_2_3", "rho_2_4|r"),
    ("i1|r", "", "rho_2_4|r"),
    ("i1|r", "rho_1_2", "rho_1_2|r"),
    ("i1|r", "rho_3_4", "rho_3_4|r"),
    ("i1|r", "rho_1_4", "rho_1_4|r"),
    ("rho_2_4|r", "rho_1_2", "rho_1_4|r"),
];

const DELTA_M1: &[FigArrow] = &[
    ("i0|a", "", "rho_3_4|b"),
    ("i0|a", "", "rho_1_2|b"),
    ("rho_2_3|a", "", "rho_2_4|b"),
    ("rho_1_3|a", "", "rho_1_4|b"),
    ("i1|b", "rho_1_2", "rho_1_2|b"),
    ("i1|b", "rho_3_4", "rho_3_4|b"),
    ("rho_3_4|b", "rho_2_3", "rho_2_4|b"),
    ("rho_2_4|b", "rho_1_2", "rho_1_4|b"),
    ("i0|a", "rho_2_3", "rho_2_3|a"),
    ("rho_2_3|a", "rho_1_2", "rho_1_3|a"),
    ("i1|b", "rho_1_4", "rho_1_4|b"),
];

const DELTA_0: &[FigArrow] =
    &[("i0|n", "", "rho_1_3|n"), ("i0|n", "rho_2_3", "rho_2_3|n"), ("rho_2_3|n", "rho_1_2", "rho_1_3|n")];

const PSI_INF: &[FigArrow] = &[("rho_3_4|r", "", "r"), ("rho_2_4|r", "rho_3_4", "r")];
const PSI_M1: &[FigArrow] = &[("i1|b", "", "a"), ("rho_3_4|b", "", "b"), ("rho_1_2|b", "", "b")];
const PSI_0: &[FigArrow] = &[("rho_2_3|n", "", "n"), ("rho_1_3|n", "rho_2_3", "n")];

const ID_PHI: &[FigArrow] = &[
    ("i1|r", "", "i1|b"),
    ("i1|r", "", "rho_2_3|a"),
    ("rho_3_4|r", "", "rho_3_4|b"),
    ("rho_2_4|r", "", "rho_2_4|b"),
    ("rho_1_4|r", "", "rho_1_4|b"),
    ("rho_1_2|r", "", "rho_1_2|b"),
    ("rho_1_2|r", "", "rho_1_3|a"),
];

const ID_PSI: &[FigArrow] = &[
    ("i0|a", "", "i0|n"),
    ("rho_2_3|a", "", "rho_2_3|n"),
    ("rho_1_3|a", "", "rho_1_3|n"),
    ("i1|b", "", "rho_2_3|n"),
    ("rho_1_2|b", "", "rho_1_3|n"),
];

const G_ARROWS: &[FigArrow] = &[("rho_2_4|r", "", "a"), ("rho_1_4|r", "", "b"), ("rho_1_2|r", "rho_2_4", "b")];
const H_ARROWS: &[FigArrow] = &[("rho_2_4|b", "", "n"), ("rho_1_4|b", "rho_2_3", "n")];

fn fig_gen(s: &Structure, alg: &StrandsAlgebra, name: &str) -> Result<u32> {
    let find = |label: &str| s.gens.iter().position(|g| g.label == label || g.label.ends_with(&format!("|{label}")));
    let label = match name.split_once('|') {
        Some((x, g)) => {
            let x = match x {
                "i0" => alg.label(alg.idempotents()[0]),
                "i1" => alg.label(alg.idempotents()[1]),
                other => other.to_string(),
            };
            format!("{x}&{g}")
        }
        None => name.to_string(),
    };
    find(&label)
        .map(|i| i as u32)
        .ok_or_else(|| Error::InvalidArgument(format!("no generator {name} in {}", s.gens.len())))
}

fn fig_morphism(src: &Structure, tgt: &Structure, alg: &StrandsAlgebra, arrows: &[FigArrow]) -> Result<Morphism> {
    let mut out = Vec::new();
    for &(a, c, b) in arrows {
        let x = fig_gen(src, alg, a)?;
        let y = fig_gen(tgt, alg, b)?;
        let coef = if c.is_empty() {
            src.gens[x as usize].out_idem
        } else {
            alg.parse_label(c).ok_or_else(|| Error::InvalidArgument(format!("bad chord {c}")))?
        };
        out.push(Arrow::new(x, coef, y));
    }
    Ok(Morphism::new(out))
}

fn expect_equal(what: &str, a: &Morphism, b: &Morphism) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::RelationViolation(format!("{what}: {} terms differ", a.add(b).arrows.len())))
    }
}

/// Builds the triangle data from the figure tables and checks every identity:
/// the twisted differentials and `Id ⊠ phi`, `Id ⊠ psi` agree with the tables,
/// the three `Psi` are cycles and homotopy equivalences, both squares commute
/// up to `d(G)` and `d(H)`, and `psi ∘ G = H ∘ (Id ⊠ phi)`.
pub fn build_triangle_data() -> Result<TriangleData> {
    let alg = split_algebra(1)?;
    let maps = surgery_maps_over(&alg)?;
    let az = cfda_az(&alg)?;
    let tw = |p: &Structure| -> Result<Structure> { Ok(box_tensor(&az, p)?.0) };
    let twisted = [tw(&maps.h_inf)?, tw(&maps.h_m1)?, tw(&maps.h_0)?];
    for (t, table, name) in
        [(&twisted[0], DELTA_INF, "inf"), (&twisted[1], DELTA_M1, "-1"), (&twisted[2], DELTA_0, "0")]
    {
        let expected = fig_morphism(t, t, &alg, table)?;
        expect_equal(&format!("differential of AZ ⊠ H_{name}"), &Morphism::new(t.arrows.clone()), &expected)?;
    }
    let base = [&maps.h_inf, &maps.h_m1, &maps.h_0];
    let id_phi = tensor_id_left(&az, &maps.h_inf, &maps.h_m1, &maps.phi)?;
    let id_psi = tensor_id_left(&az, &maps.h_m1, &maps.h_0, &maps.psi)?;
    expect_equal("Id ⊠ phi", &id_phi, &fig_morphism(&twisted[0], &twisted[1], &alg, ID_PHI)?)?;
    expect_equal("Id ⊠ psi", &id_psi, &fig_morphism(&twisted[1], &twisted[2], &alg, ID_PSI)?)?;
    let psi_maps = [
        fig_morphism(&twisted[0], base[0], &alg, PSI_INF)?,
        fig_morphism(&twisted[1], base[1], &alg, PSI_M1)?,
        fig_morphism(&twisted[2], base[2], &alg, PSI_0)?,
    ];
    for (i, f) in psi_maps.iter().enumerate() {
        if !mor_differential(&twisted[i], base[i], f)?.is_zero() {
            return Err(Error::RelationViolation(format!("Psi #{i} is not a cycle")));
        }
        if !is_homotopy_equivalence(&twisted[i], base[i], f)? {
            return Err(Error::NotEquivalent(format!("Psi #{i} is not a quasi-isomorphism")));
        }
    }
    let g = fig_morphism(&twisted[0], base[1], &alg, G_ARROWS)?;
    let h = fig_morphism(&twisted[1], base[2], &alg, H_ARROWS)?;
    let out = Some(maps.h_inf.out.as_ref().expect("type D"));
    let square = |psi_a: &Morphism, idf: &Morphism, f: &Morphism, psi_b: &Morphism| -> Morphism {
        compose(idf, psi_b, out).add(&compose(psi_a, f, out))
    };
    let s1 = square(&psi_maps[0], &id_phi, &maps.phi, &psi_maps[1]);
    expect_equal("left square", &s1, &mor_differential(&twisted[0], base[1], &g)?)?;
    let s2 = square(&psi_maps[1], &id_psi, &maps.psi, &psi_maps[2]);
    expect_equal("right square", &s2, &mor_differential(&twisted[1], base[2], &h)?)?;
    expect_equal("psi ∘ G = H ∘ (Id ⊠ phi)", &compose(&g, &maps.psi, out), &compose(&id_phi, &h, out))?;
    Ok(TriangleData { alg, maps, twisted, id_phi, id_psi, psi_maps, g, h })
}

/// Exactness data for a short exact sequence `0 -> A -> B -> C -> 0` of complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesReport {
    /// Chain dimensions of A, B, C.
    pub chain_dims: [usize; 3],
    /// Homology dimensions of A, B, C.
    pub homology_dims: [usize; 3],
    /// Ranks of `i_*`, `p_*` and the connecting map.
    pub ranks: [usize; 3],
    /// Both maps are chain maps.
    pub chain_maps: bool,
    /// `i` injective, `p` surjective, `p ∘ i = 0`, and dimensions add up.
    pub levelwise_exact: bool,
    /// Exactness at the homology of A, B, C.
    pub exact_at: [bool; 3],
}

impl SesReport {
    /// All checks pass.
    pub fn ok(&self) -> bool {
        self.chain_maps && self.levelwise_exact && self.exact_at.iter().all(|&b| b)
    }
}

fn rank_of(cols: &[Vec<u32>]) -> usize {
    let mut s = SparseSolver::new();
    for (j, c) in cols.iter().enumerate() {
        s.add_column(j as u32, c.iter().map(|&r| r as u64).collect());
    }
    s.rank()
}

fn solver_for(cols: &[Vec<u32>]) -> SparseSolver {
    let mut s = SparseSolver::new();
    for (j, c) in cols.iter().enumerate() {
        s.add_column(j as u32, c.iter().map(|&r| r as u64).collect());
    }
    s
}

fn to_u32(v: Vec<u64>) -> Vec<u32> {
    v.into_iter().map(|x| x as u32).collect()
}

/// Checks a short exact sequence and exactness of its long homology sequence,
/// with the connecting map built by lifting through `p` and `i`.
pub fn ses_report(
    a: &ChainComplex,
    b: &ChainComplex,
    c: &ChainComplex,
    i: &ChainMap,
    p: &ChainMap,
) -> Result<SesReport> {
    let chain_maps = i.is_chain_map(a, b) && p.is_chain_map(b, c);
    let composite_zero = i.then(p).cols.iter().all(Vec::is_empty);
    let levelwise_exact =
        composite_zero && rank_of(&i.cols) == a.len() && rank_of(&p.cols) == c.len() && b.len() == a.len() + c.len();
    let (ha, hb, hc) = (a.homology(), b.homology(), c.homology());
    let proj_cols = |h: &crate::f2::Homology, v: &[u32]| -> Vec<u32> {
        h.project(v).iter().enumerate().filter(|(_, &x)| x == 1).map(|(k, _)| k as u32).collect()
    };
    let i_star: Vec<Vec<u32>> = ha.cycles.iter().map(|z| proj_cols(&hb, &i.apply(z))).collect();
    let p_star: Vec<Vec<u32>> = hb.cycles.iter().map(|z| proj_cols(&hc, &p.apply(z))).collect();
    let mut delta: Vec<Vec<u32>> = Vec::with_capacity(hc.dim);
    if chain_maps && levelwise_exact {
        let p_solver = solver_for(&p.cols);
        let i_solver = solver_for(&i.cols);
        for z in &hc.cycles {
            let lift = p_solver
                .solve(z.iter().map(|&x| x as u64).collect())
                .ok_or_else(|| Error::InvalidMap("p is not surjective".into()))?;
            let db = apply_sparse(b.differential(), &lift);
            let pre = i_solver
                .solve(normalize64(db.into_iter().map(|x| x as u64).collect()))
                .ok_or_else(|| Error::InvalidMap("boundary of a lift is not in the image of i".into()))?;
            delta.push(proj_cols(&ha, &pre));
        }
    }
    let _ = to_u32;
    let r = [rank_of(&i_star), rank_of(&p_star), rank_of(&delta)];
    let zero = |f: &[Vec<u32>], g: &[Vec<u32>]| f.iter().all(|col| apply_sparse(g, col).is_empty());
    let have_delta = delta.len() == hc.dim;
    let exact_at = [
        have_delta && zero(&delta, &i_star) && r[2] + r[0] == ha.dim,
        zero(&i_star, &p_star) && r[0] + r[1] == hb.dim,
        have_delta && zero(&p_star, &delta) && r[1] + r[2] == hc.dim,
    ];
    Ok(SesReport {
        chain_dims: [a.len(), b.len(), c.len()],
        homology_dims: [ha.dim, hb.dim, hc.dim],
        ranks: r,
        chain_maps,
        levelwise_exact,
        exact_at,
    })
}

/// Exactness report for a module paired with the surgery triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    /// Hat-level sequence `X ⊠ H_inf -> X ⊠ H_-1 -> X ⊠ H_0`.
    pub hat: SesReport,
    /// Sequence of involutive cones.
    pub involutive: SesReport,
    /// The three involutions square to the identity on homology.
    pub involutions: [bool; 3],
}

impl TriangleReport {
    /// All checks pass.
    pub fn ok(&self) -> bool {
        self.hat.ok() && self.involutive.ok() && self.involutions.iter().all(|&b| b)
    }
}

fn as_complex(s: &Structure) -> Result<ChainComplex> {
    let c = s.to_chain_complex();
    ChainComplex::new(c.labels().to_vec(), c.differential().to_vec())
}

/// `M ⊠ P -> M ⊠ P'` given by `(Theta_M ⊠ Id) ∘ (Id_M ⊠ Id_X ⊠ t) ∘ (Id_M ⊠ e)` with
/// `e: P -> X ⊠ (Y ⊠ P)` and `t: Y ⊠ P -> P'`.
#[allow(clippy::too_many_arguments)]
fn sandwich(
    m: &Structure,
    x: &Structure,
    theta_m: &Morphism,
    p: &Structure,
    y_p: &Structure,
    e: &Morphism,
    t: &Morphism,
    p2: &Structure,
) -> Result<ChainMap> {
    let x_yp = box_tensor(x, y_p)?.0;
    let x_p2 = box_tensor(x, p2)?.0;
    let m_x = box_tensor(m, x)?.0;
    let mp = box_tensor(m, p)?.0;
    let m_xyp = box_tensor(m, &x_yp)?.0;
    let m_xp2 = box_tensor(m, &x_p2)?.0;
    let mx_p2 = box_tensor(&m_x, p2)?.0;
    let mp2 = box_tensor(m, p2)?.0;
    let a = tensor_id_left(m, p, &x_yp, e)?;
    let g1 = tensor_id_left(x, y_p, p2, t)?;
    let b = tensor_id_left(m, &x_yp, &x_p2, &g1)?;
    let idx: std::collections::HashMap<&str, u32> =
        mx_p2.gens.iter().enumerate().map(|(i, g)| (g.label.as_str(), i as u32)).collect();
    let perm: Vec<Vec<u32>> = m_xp2
        .gens
        .iter()
        .map(|g| {
            idx.get(g.label.as_str())
                .map(|&i| vec![i])
                .ok_or_else(|| Error::InvalidArgument(format!("no generator {}", g.label)))
        })
        .collect::<Result<_>>()?;
    let cc = tensor_id_right(&m_x, m, theta_m, p2)?;
    Ok(morphism_to_chain_map(m_xyp.len(), mp.len(), &a)
        .then(&morphism_to_chain_map(m_xp2.len(), m_xyp.len(), &b))
        .then(&ChainMap::new_unchecked(mx_p2.len(), perm))
        .then(&morphism_to_chain_map(mp2.len(), mx_p2.len(), &cc)))
}

/// Finds `A: C0 -> C1`, `B: C1 -> C2` with `dA + Ad = eg`, `dB + Bd = eh` and
/// `p A + B i = 0`.
fn correct_homotopies(
    c: &[ChainComplex],
    i: &ChainMap,
    p: &ChainMap,
    eg: &[Vec<u32>],
    eh: &[Vec<u32>],
) -> Result<(ChainMap, ChainMap)> {
    let (n0, n1, n2) = (c[0].len() as u64, c[1].len() as u64, c[2].len() as u64);
    // Equation ids: eg entries, then eh entries, then entries of pA + Bi.
    let eq_g = |r: u64, col: u64| r * n0 + col;
    let eq_h = |r: u64, col: u64| n1 * n0 + r * n1 + col;
    let eq_c = |r: u64, col: u64| n1 * n0 + n2 * n1 + r * n0 + col;
    // Predecessor lists: pred[x] = { y : x in d(y) }.
    let preds = |cc: &ChainComplex| {
        let mut out = vec![Vec::new(); cc.len()];
        for (y, col) in cc.differential().iter().enumerate() {
            for &x in col {
                out[x as usize].push(y as u64);
            }
        }
        out
    };
    let (pr0, pr1) = (preds(&c[0]), preds(&c[1]));
    let ipre = {
        let mut out = vec![Vec::new(); c[1].len()];
        for (x, col) in i.cols.iter().enumerate() {
            for &y in col {
                out[y as usize].push(x as u64);
            }
        }
        out
    };
    let mut solver = SparseSolver::new();
    let mut vars = Vec::new();
    // A_{r,col}: unit sending basis vector col of C0 to r of C1.
    for r in 0..n1 {
        for col in 0..n0 {
            let mut v: Vec<u64> = c[1].differential()[r as usize].iter().map(|&r2| eq_g(r2 as u64, col)).collect();
            v.extend(pr0[col as usize].iter().map(|&y| eq_g(r, y)));
            v.extend(p.cols[r as usize].iter().map(|&r2| eq_c(r2 as u64, col)));
            solver.add_column(vars.len() as u32, normalize64(v));
            vars.push((0u8, r, col));
        }
    }
    for r in 0..n2 {
        for col in 0..n1 {
            let mut v: Vec<u64> = c[2].differential()[r as usize].iter().map(|&r2| eq_h(r2 as u64, col)).collect();
            v.extend(pr1[col as usize].iter().map(|&y| eq_h(r, y)));
            v.extend(ipre[col as usize].iter().map(|&x| eq_c(r, x)));
            solver.add_column(vars.len() as u32, normalize64(v));
            vars.push((1u8, r, col));
        }
    }
    let mut rhs: Vec<u64> = Vec::new();
    for (col, rows) in eg.iter().enumerate() {
        rhs.extend(rows.iter().map(|&r| eq_g(r as u64, col as u64)));
    }
    for (col, rows) in eh.iter().enumerate() {
        rhs.extend(rows.iter().map(|&r| eq_h(r as u64, col as u64)));
    }
    let sol = solver.solve(normalize64(rhs)).ok_or_else(|| {
        Error::RelationViolation("involutions do not commute with the triangle maps up to homotopy".into())
    })?;
    let mut a = vec![Vec::new(); n0 as usize];
    let mut b = vec![Vec::new(); n1 as usize];
    for v in sol {
        match vars[v as usize] {
            (0, r, col) => a[col as usize].push(r as u32),
            (_, r, col) => b[col as usize].push(r as u32),
        }
    }
    Ok((
        ChainMap::new_unchecked(n1 as usize, a.into_iter().map(crate::f2::normalize).collect()),
        ChainMap::new_unchecked(n2 as usize, b.into_iter().map(crate::f2::normalize).collect()),
    ))
}

fn block_map(i: &ChainMap, k: &ChainMap, src_len: usize, tgt_len: usize) -> ChainMap {
    let off = tgt_len as u32;
    let mut cols = Vec::with_capacity(2 * src_len);
    for j in 0..src_len {
        let mut col = i.cols[j].clone();
        col.extend(k.cols[j].iter().map(|&r| r + off));
        cols.push(col);
    }
    for j in 0..src_len {
        cols.push(i.cols[j].iter().map(|&r| r + off).collect());
    }
    ChainMap::new_unchecked(2 * tgt_len, cols)
}

/// Pairs `x` with the surgery triangle and checks exactness at the hat level
/// and for the involutive cones.
pub fn verify_hfi_triangle(x: &Structure) -> Result<TriangleReport> {
    let data = build_triangle_data()?;
    let omega = omega_equivalence(&data.alg, DEFAULT_MAX_SUM)?;
    let inv = InvolutiveAInf::new(x.clone(), 2, DEFAULT_MAX_SUM)?;
    verify_hfi_triangle_with(x, &data, &omega, &inv.psi)
}

/// As [`verify_hfi_triangle`], with the auxiliary equivalences supplied.
pub fn verify_hfi_triangle_with(
    x: &Structure,
    data: &TriangleData,
    omega: &OmegaEquivalence,
    psi_x: &EquivalenceCertificate,
) -> Result<TriangleReport> {
    let m = &data.maps;
    let base = [&m.h_inf, &m.h_m1, &m.h_0];
    let c: Vec<ChainComplex> = base.iter().map(|p| as_complex(&box_tensor(x, p)?.0)).collect::<Result<_>>()?;
    let chain = |src: &Structure, tgt: &Structure, f: &Morphism| -> Result<ChainMap> {
        let s = box_tensor(x, src)?.0;
        let t = box_tensor(x, tgt)?.0;
        Ok(morphism_to_chain_map(t.len(), s.len(), &tensor_id_left(x, src, tgt, f)?))
    };
    let i = chain(&m.h_inf, &m.h_m1, &m.phi)?;
    let p = chain(&m.h_m1, &m.h_0, &m.psi)?;
    let hat = ses_report(&c[0], &c[1], &c[2], &i, &p)?;
    let azbar = cfda_azbar(&data.alg)?;
    let e: Vec<Morphism> = base.iter().map(|p| omega_on(p, omega)).collect::<Result<_>>()?;
    let phis: Vec<ChainMap> = (0..3)
        .map(|k| sandwich(x, &azbar, &psi_x.forward, base[k], &data.twisted[k], &e[k], &data.psi_maps[k], base[k]))
        .collect::<Result<_>>()?;
    let kg = sandwich(x, &azbar, &psi_x.forward, base[0], &data.twisted[0], &e[0], &data.g, base[1])?;
    let kh = sandwich(x, &azbar, &psi_x.forward, base[1], &data.twisted[1], &e[1], &data.h, base[2])?;
    let cones: Vec<ChainComplex> = (0..3)
        .map(|k| mapping_cone(&c[k], &c[k], &phis[k].add(&ChainMap::identity(c[k].len()))))
        .collect::<Result<_>>()?;
    let defect = |k: usize, f: &ChainMap, kk: &ChainMap| -> Vec<Vec<u32>> {
        f.then(&phis[k + 1])
            .add(&phis[k].then(f))
            .add(&kk.then(&ChainMap::new_unchecked(c[k + 1].len(), c[k + 1].differential().to_vec())))
            .add(&ChainMap::new_unchecked(c[k].len(), c[k].differential().to_vec()).then(kk))
            .cols
    };
    let (cg, ch) = correct_homotopies(&c, &i, &p, &defect(0, &i, &kg), &defect(1, &p, &kh))?;
    let (kg, kh) = (kg.add(&cg), kh.add(&ch));
    let bi = block_map(&i, &kg, c[0].len(), c[1].len());
    let bp = block_map(&p, &kh, c[1].len(), c[2].len());
    let involutive = ses_report(&cones[0], &cones[1], &cones[2], &bi, &bp)?;
    let involutions = [0, 1, 2].map(|k| {
        let h = c[k].homology();
        h.cycles.iter().all(|z| {
            let w = phis[k].apply(&phis[k].apply(z));
            let d = crate::f2::xor_sorted(&w, z);
            h.project(&d).iter().all(|&b| b == 0)
        })
    });
    Ok(TriangleReport { hat, involutive, involutions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::cfa_zero_handlebody;

    #[test]
    fn figure_checks_pass() {
        let d = build_triangle_data().unwrap();
        assert_eq!(d.twisted.iter().map(Structure::len).collect::<Vec<_>>(), vec![5, 8, 3]);
    }

    #[test]
    fn wrong_homotopy_is_rejected() {
        let d = build_triangle_data().unwrap();
        let bad = Morphism::new(d.g.arrows[1..].to_vec());
        let out = d.maps.h_inf.out.as_ref();
        let s1 = compose(&d.id_phi, &d.psi_maps[1], out).add(&compose(&d.psi_maps[0], &d.maps.phi, out));
        assert_ne!(s1, mor_differential(&d.twisted[0], &d.maps.h_m1, &bad).unwrap());
    }

    #[test]
    fn triangle_for_y0() {
        let x = cfa_zero_handlebody(1).unwrap();
        let r = verify_hfi_triangle(&x).unwrap();
        assert!(r.hat.ok(), "{r:?}");
        assert!(r.involutive.ok(), "{r:?}");
        assert!(r.ok());
    }

    #[test]
    fn relabelled_module_gives_the_same_report() {
        let x = cfa_zero_handlebody(1).unwrap();
        let perm: Vec<usize> = (0..x.len()).rev().collect();
        let a = verify_hfi_triangle(&x).unwrap();
        let b = verify_hfi_triangle(&x.permuted(&perm)).unwrap();
        assert_eq!(a, b);
    }
}
