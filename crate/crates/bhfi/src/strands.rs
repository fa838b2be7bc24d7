//! Pointed matched circles and the weight-0 summand of their strands algebras.
//!
//! Points are stored 0-based internally and printed 1-based. Matched pairs are
//! numbered by their smaller point, so for the split circle pair `2i` is
//! `{4i+1, 4i+3}` and pair `2i+1` is `{4i+2, 4i+4}` in 1-based terms.
//!
//! A basis element of A(Z,0) is a set of moving strands plus a set of horizontal
//! matched pairs. Products and differentials are computed by expanding into the
//! point-level strands algebra A(4k), applying its rules, and reading back the
//! coefficient of each canonical representative.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A pointed matched circle with `4k` points and `2k` matched pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedMatchedCircle {
    k: usize,
    partner: Vec<usize>,
    pair_of: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    reversed: bool,
}

impl PointedMatchedCircle {
    /// Builds a circle from 0-based matched pairs.
    pub fn from_matching(k: usize, matching: &[(usize, usize)]) -> Result<Self> {
        if k == 0 || k > 8 {
            return Err(Error::InvalidArgument(format!("genus {k} out of range 1..=8")));
        }
        let n = 4 * k;
        if matching.len() != 2 * k {
            return Err(Error::InvalidArgument(format!("expected {} matched pairs, got {}", 2 * k, matching.len())));
        }
        let mut partner = vec![usize::MAX; n];
        for &(a, b) in matching {
            if a >= n || b >= n || a == b || partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(Error::InvalidArgument(format!("bad matched pair ({}, {})", a + 1, b + 1)));
            }
            partner[a] = b;
            partner[b] = a;
        }
        let mut pairs: Vec<(usize, usize)> = matching.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let mut pair_of = vec![0; n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            pair_of[a] = i;
            pair_of[b] = i;
        }
        Ok(Self { k, partner, pair_of, pairs, reversed: false })
    }

    /// Genus.
    pub fn genus(&self) -> usize {
        self.k
    }

    /// Number of points, `4k`.
    pub fn num_points(&self) -> usize {
        4 * self.k
    }

    /// Number of matched pairs, `2k`.
    pub fn num_pairs(&self) -> usize {
        2 * self.k
    }

    /// Matched partner of a 0-based point.
    pub fn partner(&self, p: usize) -> usize {
        self.partner[p]
    }

    /// Pair index of a 0-based point.
    pub fn pair_of(&self, p: usize) -> usize {
        self.pair_of[p]
    }

    /// Matched pairs as 0-based point pairs, sorted.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Orientation flag; `true` after an odd number of reversals.
    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// Orientation reversal: point `i` goes to `4k-1-i`.
    pub fn reverse(&self) -> Self {
        let n = self.num_points();
        let m: Vec<(usize, usize)> = self.pairs.iter().map(|&(a, b)| (n - 1 - a, n - 1 - b)).collect();
        let mut out = Self::from_matching(self.k, &m).expect("reversal of a valid circle");
        out.reversed = !self.reversed;
        out
    }

    /// True when the two circles have the same matching (ignoring orientation flags).
    pub fn same_matching(&self, other: &Self) -> bool {
        self.k == other.k && self.pairs == other.pairs
    }

    /// 1-based matching, used by the JSON encoding.
    pub fn matching_1based(&self) -> Vec<[usize; 2]> {
        self.pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect()
    }
}

/// The split pointed matched circle of genus `k`.
pub fn split_pmc(k: usize) -> Result<PointedMatchedCircle> {
    if k < 1 {
        return Err(Error::InvalidArgument("split_pmc needs k >= 1".into()));
    }
    let mut m = Vec::with_capacity(2 * k);
    for i in 0..k {
        m.push((4 * i, 4 * i + 2));
        m.push((4 * i + 1, 4 * i + 3));
    }
    PointedMatchedCircle::from_matching(k, &m)
}

/// A basic idempotent, stored as a bitmask over matched-pair indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Idempotent(pub u32);

impl Idempotent {
    /// Builds an idempotent from 0-based pair indices.
    pub fn from_pairs(pairs: &[usize]) -> Self {
        Idempotent(pairs.iter().fold(0, |m, &p| m | (1 << p)))
    }

    /// Occupied pair indices in increasing order.
    pub fn pairs(self) -> Vec<usize> {
        (0..32).filter(|&i| self.0 >> i & 1 == 1).collect()
    }

    /// Number of occupied pairs.
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// True for the empty idempotent.
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Complement inside a circle with `num_pairs` pairs.
    pub fn complement(self, num_pairs: usize) -> Self {
        Idempotent(!self.0 & ((1u32 << num_pairs) - 1))
    }
}

/// Strands as (source, target) point pairs, sorted by source.
pub type Strands = SmallVec<[(u8, u8); 4]>;

/// A basic weight-0 strand diagram: a left idempotent and its moving strands.
/// Pairs of the left idempotent not used as sources carry horizontal strands.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrandDiagram {
    /// Left idempotent.
    pub left: Idempotent,
    /// Moving strands `(s, t)` with `s < t`, sorted by source.
    pub moving: Strands,
}

impl StrandDiagram {
    fn source_pairs(&self, z: &PointedMatchedCircle) -> u32 {
        self.moving.iter().fold(0, |m, &(s, _)| m | 1 << z.pair_of(s as usize))
    }

    fn target_pairs(&self, z: &PointedMatchedCircle) -> u32 {
        self.moving.iter().fold(0, |m, &(_, t)| m | 1 << z.pair_of(t as usize))
    }

    /// Pairs carrying horizontal strands.
    pub fn horizontal(&self, z: &PointedMatchedCircle) -> Idempotent {
        Idempotent(self.left.0 & !self.source_pairs(z))
    }

    /// Right idempotent.
    pub fn right(&self, z: &PointedMatchedCircle) -> Idempotent {
        Idempotent(self.horizontal(z).0 | self.target_pairs(z))
    }

    /// Checks the weight-0 diagram conditions.
    pub fn is_valid(&self, z: &PointedMatchedCircle) -> bool {
        let n = z.num_points();
        let mut src = 0u32;
        let mut tgt = 0u32;
        for (i, &(s, t)) in self.moving.iter().enumerate() {
            if s >= t || t as usize >= n {
                return false;
            }
            if i > 0 && self.moving[i - 1].0 >= s {
                return false;
            }
            let (ps, pt) = (1 << z.pair_of(s as usize), 1 << z.pair_of(t as usize));
            if src & ps != 0 || tgt & pt != 0 {
                return false;
            }
            src |= ps;
            tgt |= pt;
        }
        if src & !self.left.0 != 0 {
            return false;
        }
        let hor = self.left.0 & !src;
        self.left.len() == z.genus() && hor & tgt == 0
    }

    /// Sorting key of the canonical basis order.
    fn sort_key(&self) -> (Vec<usize>, Strands) {
        (self.left.pairs(), self.moving.clone())
    }
}

/// F2 sum of basis elements, stored as sorted basis indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraElement(pub Vec<u32>);

impl AlgebraElement {
    /// The zero element.
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    /// A single basis element.
    pub fn basis(i: u32) -> Self {
        Self(vec![i])
    }

    /// Builds an element from indices, cancelling repeated terms mod 2.
    pub fn from_terms<I: IntoIterator<Item = u32>>(terms: I) -> Self {
        let mut v: Vec<u32> = terms.into_iter().collect();
        v.sort_unstable();
        let mut out: Vec<u32> = Vec::with_capacity(v.len());
        for x in v {
            if out.last() == Some(&x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Self(out)
    }

    /// True for zero.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// F2 sum.
    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.0.iter().chain(other.0.iter()).copied())
    }
}

/// The weight-0 summand A(Z,0) with its multiplication and differential.
pub struct StrandsAlgebra {
    pmc: PointedMatchedCircle,
    basis: Vec<StrandDiagram>,
    index: HashMap<StrandDiagram, u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    is_idem: Vec<bool>,
    idempotents: Vec<u32>,
    idem_index: HashMap<Idempotent, u32>,
    diff: Vec<Vec<u32>>,
    mul_table: Option<HashMap<(u32, u32), Vec<u32>>>,
    inverse: std::sync::OnceLock<Inverse>,
}

/// Preimages under the differential and factorizations into non-idempotent pairs.
struct Inverse {
    d_pre: Vec<Vec<u32>>,
    factors: Vec<Vec<(u32, u32)>>,
}

impl fmt::Debug for StrandsAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StrandsAlgebra(k={}, dim={})", self.pmc.genus(), self.basis.len())
    }
}

/// Basis size up to which the full product table is cached.
const MUL_TABLE_LIMIT: usize = 4000;

impl StrandsAlgebra {
    /// Builds the algebra, enumerating the basis in canonical order.
    pub fn new(pmc: PointedMatchedCircle) -> Self {
        let mut basis = enumerate_basis(&pmc);
        basis.sort_by_key(|d| d.sort_key());
        let index: HashMap<_, _> = basis.iter().cloned().enumerate().map(|(i, d)| (d, i as u32)).collect();
        let mut idem_index = HashMap::new();
        let mut idempotents = Vec::new();
        let is_idem: Vec<bool> = basis.iter().map(|d| d.moving.is_empty()).collect();
        for (i, d) in basis.iter().enumerate() {
            if d.moving.is_empty() {
                idem_index.insert(d.left, i as u32);
                idempotents.push(i as u32);
            }
        }
        let left = basis.iter().map(|d| idem_index[&d.left]).collect();
        let right = basis.iter().map(|d| idem_index[&d.right(&pmc)]).collect();
        let mut alg = Self {
            pmc,
            basis,
            index,
            left,
            right,
            is_idem,
            idempotents,
            idem_index,
            diff: Vec::new(),
            mul_table: None,
            inverse: std::sync::OnceLock::new(),
        };
        alg.diff = (0..alg.basis.len() as u32).map(|i| alg.compute_diff(i)).collect();
        if alg.basis.len() <= MUL_TABLE_LIMIT {
            let mut table = HashMap::new();
            let n = alg.basis.len() as u32;
            for x in 0..n {
                for y in 0..n {
                    if alg.right[x as usize] == alg.left[y as usize] {
                        let p = alg.compute_mul(x, y);
                        if !p.is_empty() {
                            table.insert((x, y), p);
                        }
                    }
                }
            }
            alg.mul_table = Some(table);
        }
        alg
    }

    /// The underlying circle.
    pub fn pmc(&self) -> &PointedMatchedCircle {
        &self.pmc
    }

    /// Basis size.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis diagrams in canonical order.
    pub fn basis(&self) -> &[StrandDiagram] {
        &self.basis
    }

    /// Index of a diagram, if it is a valid basis element.
    pub fn index_of(&self, d: &StrandDiagram) -> Option<u32> {
        self.index.get(d).copied()
    }

    /// Basis index of the left idempotent of `a`.
    pub fn left_idem(&self, a: u32) -> u32 {
        self.left[a as usize]
    }

    /// Basis index of the right idempotent of `a`.
    pub fn right_idem(&self, a: u32) -> u32 {
        self.right[a as usize]
    }

    /// True when `a` is an idempotent.
    pub fn is_idempotent(&self, a: u32) -> bool {
        self.is_idem[a as usize]
    }

    /// Basis indices of the idempotents, in canonical order.
    pub fn idempotents(&self) -> &[u32] {
        &self.idempotents
    }

    /// Basis index of the idempotent with the given occupied pairs.
    pub fn idempotent(&self, s: Idempotent) -> Option<u32> {
        self.idem_index.get(&s).copied()
    }

    /// Occupied pairs of an idempotent basis element.
    pub fn idem_set(&self, e: u32) -> Idempotent {
        self.basis[e as usize].left
    }

    /// Basis index of the idempotent complementary to idempotent `e`.
    pub fn complement_idem(&self, e: u32) -> u32 {
        let s = self.idem_set(e).complement(self.pmc.num_pairs());
        self.idem_index[&s]
    }

    /// Differential of a basis element.
    pub fn diff(&self, a: u32) -> &[u32] {
        &self.diff[a as usize]
    }

    fn inverse(&self) -> &Inverse {
        self.inverse.get_or_init(|| {
            let n = self.dim();
            let mut d_pre = vec![Vec::new(); n];
            for a in 0..n as u32 {
                for &b in self.diff(a) {
                    d_pre[b as usize].push(a);
                }
            }
            let mut factors = vec![Vec::new(); n];
            for a in 0..n as u32 {
                if self.is_idem[a as usize] {
                    continue;
                }
                for b in 0..n as u32 {
                    if self.is_idem[b as usize] || self.right[a as usize] != self.left[b as usize] {
                        continue;
                    }
                    for c in self.mul(a, b) {
                        factors[c as usize].push((a, b));
                    }
                }
            }
            Inverse { d_pre, factors }
        })
    }

    /// Basis elements whose differential contains `b`.
    pub fn d_preimage(&self, b: u32) -> &[u32] {
        &self.inverse().d_pre[b as usize]
    }

    /// Pairs of non-idempotent basis elements whose product contains `b`.
    pub fn factorizations(&self, b: u32) -> &[(u32, u32)] {
        &self.inverse().factors[b as usize]
    }

    /// Product of two basis elements.
    pub fn mul(&self, a: u32, b: u32) -> Vec<u32> {
        if self.right[a as usize] != self.left[b as usize] {
            return Vec::new();
        }
        if self.is_idem[a as usize] {
            return vec![b];
        }
        if self.is_idem[b as usize] {
            return vec![a];
        }
        match &self.mul_table {
            Some(t) => t.get(&(a, b)).cloned().unwrap_or_default(),
            None => self.compute_mul(a, b),
        }
    }

    /// Bilinear product of elements.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = Vec::new();
        for &a in &x.0 {
            for &b in &y.0 {
                out.extend(self.mul(a, b));
            }
        }
        AlgebraElement::from_terms(out)
    }

    /// Linear differential of an element.
    pub fn differential(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_terms(x.0.iter().flat_map(|&a| self.diff(a).iter().copied()))
    }

    /// Sum of all idempotents, the unit.
    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement::from_terms(self.idempotents.iter().copied())
    }

    /// The chord element a(rho_{i,j}) for 1-based points `i < j`.
    pub fn chord_element(&self, i: usize, j: usize) -> Result<AlgebraElement> {
        let n = self.pmc.num_points();
        if i < 1 || j > n || i >= j {
            return Err(Error::InvalidArgument(format!("chord ({i},{j}) needs 1 <= i < j <= {n}")));
        }
        let (s, t) = ((i - 1) as u8, (j - 1) as u8);
        let mut terms = Vec::new();
        for &e in &self.idempotents {
            let left = self.idem_set(e);
            let d = StrandDiagram { left, moving: smallvec::smallvec![(s, t)] };
            if d.is_valid(&self.pmc) {
                terms.push(self.index[&d]);
            }
        }
        Ok(AlgebraElement::from_terms(terms))
    }

    /// Human-readable label, 1-based.
    pub fn label(&self, a: u32) -> String {
        let d = &self.basis[a as usize];
        let pairs = |m: Idempotent| m.pairs().iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(",");
        if d.moving.is_empty() {
            return format!("I({})", pairs(d.left));
        }
        let mv: Vec<String> = d.moving.iter().map(|&(s, t)| format!("rho_{}_{}", s + 1, t + 1)).collect();
        let h = d.horizontal(&self.pmc);
        if h.is_empty() {
            mv.join(".")
        } else {
            format!("{};I({})", mv.join("."), pairs(h))
        }
    }

    /// Parses a label produced by [`StrandsAlgebra::label`].
    pub fn parse_label(&self, s: &str) -> Option<u32> {
        (0..self.dim() as u32).find(|&a| self.label(a) == s)
    }

    /// Point-level sections of a basis diagram: one point chosen per horizontal pair.
    fn sections(&self, a: u32) -> Vec<Strands> {
        let d = &self.basis[a as usize];
        let hor = d.horizontal(&self.pmc).pairs();
        let mut out = Vec::with_capacity(1 << hor.len());
        for mask in 0..(1u32 << hor.len()) {
            let mut st: Strands = d.moving.clone();
            for (bit, &p) in hor.iter().enumerate() {
                let (lo, hi) = self.pmc.pairs[p];
                let q = if mask >> bit & 1 == 0 { lo } else { hi } as u8;
                st.push((q, q));
            }
            st.sort_unstable();
            out.push(st);
        }
        out
    }

    /// Reads a point-level diagram back as a basis index if it is the canonical section.
    fn canonical_index(&self, st: &Strands) -> Option<u32> {
        let mut left = 0u32;
        let mut moving: Strands = SmallVec::new();
        for &(s, t) in st {
            let p = self.pmc.pair_of(s as usize);
            if s == t && self.pmc.pairs[p].0 != s as usize {
                return None;
            }
            if left >> p & 1 == 1 {
                return None;
            }
            left |= 1 << p;
            if s != t {
                moving.push((s, t));
            }
        }
        self.index.get(&StrandDiagram { left: Idempotent(left), moving }).copied()
    }

    fn compute_mul(&self, a: u32, b: u32) -> Vec<u32> {
        let mut acc: HashMap<u32, bool> = HashMap::new();
        let sb = self.sections(b);
        for x in self.sections(a) {
            let ix = inversions(&x);
            for y in &sb {
                if let Some(z) = compose(&x, y) {
                    if inversions(&z) == ix + inversions(y) {
                        if let Some(c) = self.canonical_index(&z) {
                            let e = acc.entry(c).or_insert(false);
                            *e = !*e;
                        }
                    }
                }
            }
        }
        let mut v: Vec<u32> = acc.into_iter().filter(|&(_, on)| on).map(|(c, _)| c).collect();
        v.sort_unstable();
        v
    }

    fn compute_diff(&self, a: u32) -> Vec<u32> {
        let mut acc: HashMap<u32, bool> = HashMap::new();
        for x in self.sections(a) {
            let inv = inversions(&x);
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    if x[i].1 > x[j].1 {
                        let mut y = x.clone();
                        y[i].1 = x[j].1;
                        y[j].1 = x[i].1;
                        if inversions(&y) + 1 == inv {
                            if let Some(c) = self.canonical_index(&y) {
                                let e = acc.entry(c).or_insert(false);
                                *e = !*e;
                            }
                        }
                    }
                }
            }
        }
        let mut v: Vec<u32> = acc.into_iter().filter(|&(_, on)| on).map(|(c, _)| c).collect();
        v.sort_unstable();
        v
    }

    /// Lemma-style bound on the length of a nonvanishing chord product.
    pub fn chord_nilpotency_bound(&self) -> usize {
        chord_nilpotency_bound(&self.pmc)
    }
}

/// K = 2k(4k-1): any product of more than K chord elements vanishes.
pub fn chord_nilpotency_bound(z: &PointedMatchedCircle) -> usize {
    let k = z.genus();
    2 * k * (4 * k - 1)
}

fn inversions(st: &Strands) -> usize {
    let mut c = 0;
    for i in 0..st.len() {
        for j in i + 1..st.len() {
            if st[i].1 > st[j].1 {
                c += 1;
            }
        }
    }
    c
}

fn compose(x: &Strands, y: &Strands) -> Option<Strands> {
    let mut out: Strands = SmallVec::new();
    let mut used = 0u64;
    for &(s, t) in x {
        let &(_, u) = y.iter().find(|&&(ys, _)| ys == t)?;
        out.push((s, u));
        used |= 1 << t;
    }
    if y.iter().any(|&(ys, _)| used >> ys & 1 == 0) {
        return None;
    }
    Some(out)
}

fn enumerate_basis(z: &PointedMatchedCircle) -> Vec<StrandDiagram> {
    let np = z.num_pairs();
    let n = z.num_points();
    let mut out = Vec::new();
    for mask in 0u32..(1 << np) {
        if mask.count_ones() as usize != z.genus() {
            continue;
        }
        let pairs = Idempotent(mask).pairs();
        // Each occupied pair is horizontal, or the source of a strand from one of its points.
        let mut stack: Vec<(usize, Strands)> = vec![(0, SmallVec::new())];
        while let Some((i, st)) = stack.pop() {
            if i == pairs.len() {
                let mut moving = st.clone();
                moving.sort_unstable();
                let d = StrandDiagram { left: Idempotent(mask), moving };
                if d.is_valid(z) {
                    out.push(d);
                }
                continue;
            }
            stack.push((i + 1, st.clone()));
            let (lo, hi) = z.pairs()[pairs[i]];
            for s in [lo, hi] {
                for t in s + 1..n {
                    let mut st2 = st.clone();
                    st2.push((s as u8, t as u8));
                    stack.push((i + 1, st2));
                }
            }
        }
    }
    out
}

/// Inclusion of a tensor of genus-1 basis elements into the split circle of genus `k`.
pub fn include_split(z1: &StrandsAlgebra, zk: &StrandsAlgebra, factors: &[u32]) -> Result<u32> {
    let k = zk.pmc().genus();
    if factors.len() != k || z1.pmc().genus() != 1 {
        return Err(Error::InvalidArgument(format!("inclusion needs {k} genus-1 factors")));
    }
    let mut left = 0u32;
    let mut moving: Strands = SmallVec::new();
    for (l, &f) in factors.iter().enumerate() {
        let d = &z1.basis()[f as usize];
        left |= d.left.0 << (2 * l);
        for &(s, t) in &d.moving {
            moving.push((s + 4 * l as u8, t + 4 * l as u8));
        }
    }
    moving.sort_unstable();
    zk.index_of(&StrandDiagram { left: Idempotent(left), moving })
        .ok_or_else(|| Error::InvalidArgument("inclusion produced an invalid diagram".into()))
}

/// Projection to genus-1 tensor factors; `None` when the diagram is not in the image of inclusion.
pub fn project_split(z1: &StrandsAlgebra, zk: &StrandsAlgebra, a: u32) -> Option<Vec<u32>> {
    let k = zk.pmc().genus();
    let d = &zk.basis()[a as usize];
    let mut out = Vec::with_capacity(k);
    for l in 0..k {
        let left = (d.left.0 >> (2 * l)) & 3;
        if left.count_ones() != 1 {
            return None;
        }
        let lo = 4 * l as u8;
        let mut moving: Strands = SmallVec::new();
        for &(s, t) in &d.moving {
            let (sb, tb) = (s / 4, t / 4);
            if sb != tb {
                return None;
            }
            if sb as usize == l {
                moving.push((s - lo, t - lo));
            }
        }
        out.push(z1.index_of(&StrandDiagram { left: Idempotent(left), moving })?);
    }
    Some(out)
}

/// JSON form of a circle: 1-based matching.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PmcJson {
    /// Genus.
    pub k: usize,
    /// 1-based matched pairs.
    pub matching: Vec<[usize; 2]>,
}

impl From<&PointedMatchedCircle> for PmcJson {
    fn from(z: &PointedMatchedCircle) -> Self {
        Self { k: z.genus(), matching: z.matching_1based() }
    }
}

impl TryFrom<&PmcJson> for PointedMatchedCircle {
    type Error = Error;
    fn try_from(j: &PmcJson) -> Result<Self> {
        let m: Vec<(usize, usize)> = j.matching.iter().map(|&[a, b]| (a.wrapping_sub(1), b.wrapping_sub(1))).collect();
        PointedMatchedCircle::from_matching(j.k, &m)
    }
}

/// JSON form of one basis diagram, 1-based.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DiagramJson {
    /// Occupied pairs of the left idempotent.
    pub left_idem: Vec<usize>,
    /// Moving strands.
    pub moving: Vec<[usize; 2]>,
    /// Horizontal pairs.
    pub horizontal: Vec<usize>,
}

impl StrandsAlgebra {
    /// JSON encoding of a basis element.
    pub fn diagram_json(&self, a: u32) -> DiagramJson {
        let d = &self.basis[a as usize];
        DiagramJson {
            left_idem: d.left.pairs().iter().map(|p| p + 1).collect(),
            moving: d.moving.iter().map(|&(s, t)| [s as usize + 1, t as usize + 1]).collect(),
            horizontal: d.horizontal(&self.pmc).pairs().iter().map(|p| p + 1).collect(),
        }
    }

    /// Decodes a basis element from JSON.
    pub fn diagram_from_json(&self, j: &DiagramJson) -> Result<u32> {
        let left = Idempotent::from_pairs(&j.left_idem.iter().map(|p| p.wrapping_sub(1)).collect::<Vec<_>>());
        let mut moving: Strands =
            j.moving.iter().map(|&[s, t]| ((s.wrapping_sub(1)) as u8, (t.wrapping_sub(1)) as u8)).collect();
        moving.sort_unstable();
        let d = StrandDiagram { left, moving };
        let idx = self.index_of(&d).ok_or_else(|| Error::Parse(format!("not a basis diagram: {j:?}")))?;
        let hor: Vec<usize> = self.basis[idx as usize].horizontal(&self.pmc).pairs().iter().map(|p| p + 1).collect();
        if hor != j.horizontal {
            return Err(Error::Parse(format!("horizontal pairs mismatch in {j:?}")));
        }
        Ok(idx)
    }

    /// JSON encoding of an element.
    pub fn element_json(&self, x: &AlgebraElement) -> Vec<DiagramJson> {
        x.0.iter().map(|&a| self.diagram_json(a)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(k: usize) -> StrandsAlgebra {
        StrandsAlgebra::new(split_pmc(k).unwrap())
    }

    fn chord(a: &StrandsAlgebra, i: usize, j: usize) -> u32 {
        let e = a.chord_element(i, j).unwrap();
        assert_eq!(e.0.len(), 1);
        e.0[0]
    }

    #[test]
    fn split_matching() {
        let z = split_pmc(2).unwrap();
        assert_eq!(z.matching_1based(), vec![[1, 3], [2, 4], [5, 7], [6, 8]]);
        assert!(split_pmc(0).is_err());
        assert!(z.reverse().same_matching(&z));
        assert_eq!(z.reverse().reverse(), z);
    }

    #[test]
    fn genus_one_basis() {
        let a = alg(1);
        let labels: Vec<String> = (0..a.dim() as u32).map(|i| a.label(i)).collect();
        assert_eq!(a.dim(), 8);
        for l in ["I(1)", "I(2)", "rho_1_2", "rho_2_3", "rho_3_4", "rho_1_3", "rho_2_4", "rho_1_4"] {
            assert!(labels.contains(&l.to_string()), "{l}");
        }
    }

    #[test]
    fn genus_one_products() {
        let a = alg(1);
        let (r12, r23, r13) = (chord(&a, 1, 2), chord(&a, 2, 3), chord(&a, 1, 3));
        assert_eq!(a.mul(r12, r23), vec![r13]);
        assert!(a.mul(r12, r12).is_empty());
        let i1 = a.idempotent(Idempotent::from_pairs(&[0])).unwrap();
        let i2 = a.idempotent(Idempotent::from_pairs(&[1])).unwrap();
        assert_eq!(a.mul(i1, r12), vec![r12]);
        assert_eq!(a.mul(r12, i2), vec![r12]);
        assert!(a.mul(r13, r13).is_empty());
    }

    #[test]
    fn genus_two_chord_completion() {
        let a = alg(2);
        let x = a.chord_element(1, 2).unwrap();
        // Horizontal completion on pair {5,7} or {6,8}.
        assert_eq!(x.0.len(), 2);
        // rho_{1,3} stays in pair {1,3}, so {2,4} may also be horizontal.
        let y = a.chord_element(1, 3).unwrap();
        assert_eq!(y.0.len(), 3);
    }

    #[test]
    fn genus_two_crossing_differential() {
        let a = alg(2);
        // Strands 1->6 and 2->5 cross; resolving gives 1->5, 2->6.
        let d = StrandDiagram { left: Idempotent::from_pairs(&[0, 1]), moving: smallvec::smallvec![(0, 5), (1, 4)] };
        let x = a.index_of(&d).unwrap();
        let r = StrandDiagram { left: Idempotent::from_pairs(&[0, 1]), moving: smallvec::smallvec![(0, 4), (1, 5)] };
        assert_eq!(a.diff(x), &[a.index_of(&r).unwrap()]);
    }

    #[test]
    fn inclusion_projection() {
        let (a1, a2) = (alg(1), alg(2));
        let r13 = chord(&a1, 1, 3);
        let i1 = a1.idempotent(Idempotent::from_pairs(&[0])).unwrap();
        let x = include_split(&a1, &a2, &[r13, i1]).unwrap();
        assert_eq!(project_split(&a1, &a2, x), Some(vec![r13, i1]));
        let r35 = a2.chord_element(3, 5).unwrap();
        for &t in &r35.0 {
            assert_eq!(project_split(&a1, &a2, t), None);
        }
    }
}
