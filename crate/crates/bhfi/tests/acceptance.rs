//! One line per acceptance criterion. Time budgets are pinned below.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use bhfi::equivalence::{find_homotopy_equivalence, homology_basis_of_mor, DEFAULT_MAX_SUM};
use bhfi::f2::{reduce, xor_sorted, ChainComplex, F2Matrix};
use bhfi::involutive::{involutive_pair, iota_on_mor, InvolutiveAInf, InvolutiveTypeD, OmegaSource};
use bhfi::io::load_structure;
use bhfi::standard::{cfa_zero_handlebody_over, cfd_zero_handlebody_over, cfda_az, split_algebra};
use bhfi::strands::{split_pmc, StrandsAlgebra};
use bhfi::structures::{box_tensor, check_structure, Arrow, Morphism, Structure};
use bhfi::triangle::{build_triangle_data, verify_hfi_triangle};

const BUDGET_1: Duration = Duration::from_millis(1);
const BUDGET_2: Duration = Duration::from_secs(60);
const BUDGET_3: Duration = Duration::from_secs(10);
const BUDGET_4: Duration = Duration::from_secs(1);
const BUDGET_5: Duration = Duration::from_secs(5);
const BUDGET_6: Duration = Duration::from_secs(30);
const BUDGET_7: Duration = Duration::from_secs(600);
const BUDGET_8: Duration = Duration::from_secs(300);
const BUDGET_10: Duration = Duration::from_secs(120);

const RANDOM_STRUCTURES: u64 = 200;
const PERMUTATIONS: usize = 6;
const NILPOTENT_LENGTH: usize = 7;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn criterion_1() -> Outcome {
    let pmc = split_pmc(1).unwrap();
    let t = Instant::now();
    let alg = StrandsAlgebra::new(pmc);
    let dim = alg.dim();
    let el = t.elapsed();
    check(dim == 8 && el < BUDGET_1, format!("|A(Z_1,0)| = {dim}, built in {el:?} (budget {BUDGET_1:?})"))
}

fn laws(alg: &StrandsAlgebra) -> (usize, usize, usize) {
    let n = alg.dim() as u32;
    let times = |xs: &[u32], b: u32| -> Vec<u32> {
        let mut acc = Vec::new();
        for &x in xs {
            acc = xor_sorted(&acc, &alg.mul(x, b));
        }
        acc
    };
    let left_times = |a: u32, ys: &[u32]| -> Vec<u32> {
        let mut acc = Vec::new();
        for &y in ys {
            acc = xor_sorted(&acc, &alg.mul(a, y));
        }
        acc
    };
    let d_of = |xs: &[u32]| -> Vec<u32> {
        let mut acc = Vec::new();
        for &x in xs {
            acc = xor_sorted(&acc, alg.diff(x));
        }
        acc
    };
    let (mut assoc, mut dsq, mut leibniz) = (0, 0, 0);
    for a in 0..n {
        if !d_of(alg.diff(a)).is_empty() {
            dsq += 1;
        }
        for b in 0..n {
            if alg.right_idem(a) != alg.left_idem(b) {
                continue;
            }
            let ab = alg.mul(a, b);
            let lhs = d_of(&ab);
            let rhs = xor_sorted(&times(alg.diff(a), b), &left_times(a, alg.diff(b)));
            if lhs != rhs {
                leibniz += 1;
            }
            for c in 0..n {
                if alg.right_idem(b) != alg.left_idem(c) {
                    continue;
                }
                let bc = alg.mul(b, c);
                if times(&ab, c) != left_times(a, &bc) {
                    assoc += 1;
                }
            }
        }
    }
    (assoc, dsq, leibniz)
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for k in [1, 2] {
        let alg = StrandsAlgebra::new(split_pmc(k).unwrap());
        let (a, d, l) = laws(&alg);
        ok &= a == 0 && d == 0 && l == 0;
        details.push(format!("k={k}: dim {}, failures assoc {a} d^2 {d} leibniz {l}", alg.dim()));
    }
    let el = t.elapsed();
    check(ok && el < BUDGET_2, format!("{}; {el:?} (budget {BUDGET_2:?})", details.join("; ")))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let alg = StrandsAlgebra::new(split_pmc(1).unwrap());
    let mut chords = Vec::new();
    for i in 1..=4 {
        for j in i + 1..=4 {
            chords.push(alg.chord_element(i, j).unwrap().0);
        }
    }
    // Depth-first over words, pruning at zero prefixes.
    let mut nonzero = 0usize;
    let mut stack: Vec<(Vec<u32>, usize)> = chords.iter().map(|c| (c.clone(), 1)).collect();
    let mut longest = 0;
    while let Some((x, len)) = stack.pop() {
        if x.is_empty() {
            continue;
        }
        longest = longest.max(len);
        if len == NILPOTENT_LENGTH {
            nonzero += 1;
            continue;
        }
        for c in &chords {
            let mut acc = Vec::new();
            for &a in &x {
                for &b in c {
                    acc = xor_sorted(&acc, &alg.mul(a, b));
                }
            }
            stack.push((acc, len + 1));
        }
    }
    let el = t.elapsed();
    check(
        nonzero == 0 && el < BUDGET_3,
        format!("{nonzero} nonzero products of {NILPOTENT_LENGTH} chords, longest nonzero word {longest}; {el:?} (budget {BUDGET_3:?})"),
    )
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let alg = split_algebra(1).unwrap();
    let d = cfd_zero_handlebody_over(&alg).unwrap();
    let a = cfa_zero_handlebody_over(&alg).unwrap();
    let pairing = box_tensor(&a, &d).unwrap().0.to_chain_complex().homology().dim;
    let mor = homology_basis_of_mor(&d, &d).unwrap().dim();
    let el = t.elapsed();
    check(
        pairing == 2 && mor == 2 && el < BUDGET_4,
        format!("dim H(CFA ⊠ CFD) = {pairing}, dim H(Mor) = {mor}; {el:?} (budget {BUDGET_4:?})"),
    )
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let r = build_triangle_data();
    let el = t.elapsed();
    match r {
        Ok(d) => check(
            el < BUDGET_5,
            format!(
                "tables, Psi, G, H and psi∘G = H∘(Id⊠phi) hold; twisted sizes {:?}; {el:?} (budget {BUDGET_5:?})",
                d.twisted.iter().map(Structure::len).collect::<Vec<_>>()
            ),
        ),
        Err(e) => Outcome::Fail(format!("{e}")),
    }
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let x = cfa_zero_handlebody_over(&split_algebra(1).unwrap()).unwrap();
    let r = verify_hfi_triangle(&x);
    let el = t.elapsed();
    match r {
        Ok(r) => check(
            r.ok() && el < BUDGET_6,
            format!(
                "hat homology {:?} ranks {:?} exact {:?}; involutive homology {:?} ranks {:?} exact {:?}; {el:?} (budget {BUDGET_6:?})",
                r.hat.homology_dims, r.hat.ranks, r.hat.exact_at, r.involutive.homology_dims, r.involutive.ranks, r.involutive.exact_at
            ),
        ),
        Err(e) => Outcome::Fail(format!("{e}")),
    }
}

fn rank_ker(m: &F2Matrix) -> usize {
    m.cols() - m.add(&F2Matrix::identity(m.cols())).unwrap().rank()
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    // Genus one: Mor route, pairing route and the formula 2 dim ker(Id + iota).
    let alg = split_algebra(1).unwrap();
    let p = cfd_zero_handlebody_over(&alg).unwrap();
    let m = cfa_zero_handlebody_over(&alg).unwrap();
    let run = iota_on_mor(&p, &p, DEFAULT_MAX_SUM).unwrap();
    let r = &run.report;
    let cone_direct = run.cone.homology().dim;
    let omega = bhfi::equivalence::omega_equivalence(&alg, DEFAULT_MAX_SUM).unwrap();
    let d = InvolutiveTypeD::new(p.clone(), DEFAULT_MAX_SUM).unwrap();
    let a = InvolutiveAInf::new(m, 2, DEFAULT_MAX_SUM).unwrap();
    let pair = involutive_pair(&a, &d, OmegaSource::Da(&omega), DEFAULT_MAX_SUM).unwrap();
    ok &= r.hf_dim == 2 && r.iota == F2Matrix::identity(2) && r.hfi_dim == 4;
    ok &= cone_direct == 4 && 2 * rank_ker(&r.iota) == 4 && pair.hfi_dim == 4 && pair.hf_dim == 2;
    lines.push(format!(
        "genus 1: hf {} iota=Id {} hfi {} (cone {cone_direct}, 2·ker {}, pairing {})",
        r.hf_dim,
        r.iota == F2Matrix::identity(2),
        r.hfi_dim,
        2 * rank_ker(&r.iota),
        pair.hfi_dim
    ));
    // Genus two.
    let alg2 = split_algebra(2).unwrap();
    let p2 = cfd_zero_handlebody_over(&alg2).unwrap();
    let m2 = cfa_zero_handlebody_over(&alg2).unwrap();
    let run2 = iota_on_mor(&p2, &p2, DEFAULT_MAX_SUM).unwrap();
    let r2 = &run2.report;
    let d2 = InvolutiveTypeD::new(p2, DEFAULT_MAX_SUM).unwrap();
    let a2 = InvolutiveAInf::new(m2, 2, DEFAULT_MAX_SUM).unwrap();
    let pair2 = involutive_pair(&a2, &d2, OmegaSource::Search, DEFAULT_MAX_SUM).unwrap();
    let sq = pair2.on_homology.mul(&pair2.on_homology).unwrap() == F2Matrix::identity(pair2.hf_dim);
    ok &= r2.is_involution() && sq && r2.hf_dim == pair2.hf_dim && r2.hfi_dim == pair2.hfi_dim;
    ok &= r2.hfi_dim == 2 * rank_ker(&r2.iota);
    lines.push(format!(
        "genus 2: hf {} iota^2=Id {} hfi {} (pairing hf {} hfi {}, iota^2=Id {sq})",
        r2.hf_dim,
        r2.is_involution(),
        r2.hfi_dim,
        pair2.hf_dim,
        pair2.hfi_dim
    ));
    let el = t.elapsed();
    check(ok && el < BUDGET_7, format!("{}; {el:?} (budget {BUDGET_7:?})", lines.join("; ")))
}

fn unpermute(f: &Morphism, src_perm: &[usize], tgt_perm: &[usize]) -> Morphism {
    Morphism::new(
        f.arrows
            .iter()
            .map(|a| Arrow { src: src_perm[a.src as usize] as u32, dst: tgt_perm[a.dst as usize] as u32, ..a.clone() })
            .collect(),
    )
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(8);
    let mut details = Vec::new();
    let mut ok = true;
    let alg1 = split_algebra(1).unwrap();
    let alg2 = split_algebra(2).unwrap();
    let mut cases: Vec<(String, Structure)> =
        common::solid_tori(&alg1).into_iter().zip(["H_inf", "H_-1", "H_0"]).map(|(s, n)| (n.to_string(), s)).collect();
    cases.push(("CFD(Y_0^2)".into(), cfd_zero_handlebody_over(&alg2).unwrap()));
    for (name, p) in cases {
        let alg = p.out_strands().unwrap().clone();
        let q = box_tensor(&cfda_az(&alg).unwrap(), &p).unwrap().0;
        let base = find_homotopy_equivalence(&q, &p, DEFAULT_MAX_SUM).unwrap();
        let mh = homology_basis_of_mor(&q, &p).unwrap();
        let mut agree = 0;
        for _ in 0..PERMUTATIONS {
            let mut sp: Vec<usize> = (0..q.len()).collect();
            let mut tp: Vec<usize> = (0..p.len()).collect();
            sp.shuffle(&mut rng);
            tp.shuffle(&mut rng);
            let c = find_homotopy_equivalence(&q.permuted(&sp), &p.permuted(&tp), DEFAULT_MAX_SUM).unwrap();
            let back = unpermute(&c.forward, &sp, &tp);
            if mh.is_nullhomotopic(&back.add(&base.forward)) == Some(true) {
                agree += 1;
            }
        }
        ok &= agree == PERMUTATIONS;
        details.push(format!("{name}: {agree}/{PERMUTATIONS}"));
    }
    let el = t.elapsed();
    check(ok && el < BUDGET_8, format!("{}; {el:?} (budget {BUDGET_8:?})", details.join(", ")))
}

fn criterion_9() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let table: serde_json::Value = match std::fs::read_to_string(dir.join("table1_expected.json")) {
        Ok(t) => serde_json::from_str(&t).unwrap(),
        Err(_) => return Outcome::Skip("expected-value table absent".into()),
    };
    let mut lines = Vec::new();
    let mut ok = true;
    let mut ran = 0;
    for row in table["rows"].as_array().unwrap() {
        let knot = row["knot"].as_str().unwrap();
        let (h0, h1) = (dir.join(format!("sigma_{knot}_H0.json")), dir.join(format!("sigma_{knot}_H1.json")));
        if !h0.exists() || !h1.exists() {
            continue;
        }
        ran += 1;
        let res = load_structure(&h0)
            .and_then(|a| Ok((a, load_structure(&h1)?)))
            .and_then(|(a, b)| iota_on_mor(&a, &b, DEFAULT_MAX_SUM));
        match res {
            Ok(r) => {
                let got = (r.report.hf_dim as u64, r.report.hfi_dim as u64);
                let want = (row["hf_dim"].as_u64().unwrap(), row["hfi_dim"].as_u64().unwrap());
                ok &= got == want;
                lines.push(format!("{knot}: {got:?} expected {want:?}"));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{knot}: {e}"));
            }
        }
    }
    if ran == 0 {
        return Outcome::Skip("no sigma_<knot>_H0/H1 fixtures supplied".into());
    }
    check(ok, lines.join("; "))
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let alg = split_algebra(1).unwrap();
    let az = cfda_az(&alg).unwrap();
    let m = cfa_zero_handlebody_over(&alg).unwrap();
    let (mut relation_failures, mut reduce_failures, mut max_gens) = (0, 0, 0);
    for seed in 0..RANDOM_STRUCTURES {
        let p = common::random_type_d(seed);
        max_gens = max_gens.max(p.len());
        let q = box_tensor(&az, &p).unwrap().0;
        if !check_structure(&p).is_empty() || !check_structure(&q).is_empty() {
            relation_failures += 1;
        }
        for x in [box_tensor(&m, &p).unwrap().0, box_tensor(&m, &q).unwrap().0] {
            let c = x.to_chain_complex();
            let c = ChainComplex::new(c.labels().to_vec(), c.differential().to_vec()).unwrap();
            if reduce(&c).unwrap().reduced.len() != c.homology().dim {
                reduce_failures += 1;
            }
        }
    }
    let el = t.elapsed();
    check(
        relation_failures == 0 && reduce_failures == 0 && el < BUDGET_10,
        format!(
            "{RANDOM_STRUCTURES} structures (up to {max_gens} generators): relation failures {relation_failures}, reduce mismatches {reduce_failures}; {el:?} (budget {BUDGET_10:?})"
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "algebra size", criterion_1),
        (2, "algebra laws", criterion_2),
        (3, "chord nilpotency", criterion_3),
        (4, "pairing sanity", criterion_4),
        (5, "figure verification", criterion_5),
        (6, "surgery triangle exactness", criterion_6),
        (7, "involutive pipeline", criterion_7),
        (8, "uniqueness under reordering", criterion_8),
        (9, "table reproduction", criterion_9),
        (10, "random structures", criterion_10),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        match f() {
            Outcome::Pass(d) => println!("criterion {n} ({name}): PASS {d}"),
            Outcome::Skip(d) => println!("criterion {n} ({name}): SKIP {d}"),
            Outcome::Fail(d) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL {d}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
