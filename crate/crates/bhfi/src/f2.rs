//! Linear and homological algebra over F2.
//!
//! Dense matrices are bit-packed (64-bit words, row-major). Complexes keep a
//! sparse differential: column `j` lists the generators appearing in `d(e_j)`.
//! Homology is computed by cancellation (Gaussian elimination on the
//! differential), which also yields cycle representatives supported in a single
//! connected block of the differential and a projection from cycles onto the
//! homology basis.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense F2 matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

impl F2Matrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = cols.div_ceil(64);
        Self { rows, cols, wpr, data: vec![0; rows * wpr] }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from sparse columns (row indices, repeated entries cancel).
    pub fn from_columns(rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for &r in col {
                m.toggle(r as usize, c);
            }
        }
        m
    }

    /// Builds a matrix from 0/1 rows.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.wpr + c / 64] >> (c % 64) & 1 == 1
    }

    /// Sets entry `(r, c)`.
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.wpr + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    /// Flips entry `(r, c)`.
    pub fn toggle(&mut self, r: usize, c: usize) {
        self.data[r * self.wpr + c / 64] ^= 1 << (c % 64);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (src, dst) = (other.row_words(k).to_vec(), r * out.wpr);
                    for (i, w) in src.into_iter().enumerate() {
                        out.data[dst + i] ^= w;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidArgument("shape mismatch in add".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Transpose.
    pub fn transpose(&self) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    /// Rank by row elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else { continue };
            m.swap_rows(rank, p);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.wpr {
                self.data.swap(a * self.wpr + i, b * self.wpr + i);
            }
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for i in 0..self.wpr {
            let w = self.data[src * self.wpr + i];
            self.data[dst * self.wpr + i] ^= w;
        }
    }

    /// Basis of the null space `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u8>> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else { continue };
            m.swap_rows(rank, p);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_set.contains(c)) {
            let mut v = vec![0u8; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                if m.get(i, free) {
                    v[pc] = 1;
                }
            }
            out.push(v);
        }
        out
    }

    /// Row `r` as 0/1 values.
    pub fn row(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    /// All rows as 0/1 values.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }
}

/// Sorted sparse F2 vector with repeated entries cancelled.
pub fn normalize(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    let mut out: Vec<u32> = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Symmetric difference of two sorted sparse vectors.
pub fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Based F2 chain complex with a sparse differential and optional named actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    labels: Vec<String>,
    d: Vec<Vec<u32>>,
    actions: BTreeMap<String, Vec<Vec<u32>>>,
}

impl ChainComplex {
    /// Builds a complex and checks `d^2 = 0`.
    pub fn new(labels: Vec<String>, d: Vec<Vec<u32>>) -> Result<Self> {
        let c = Self::new_unchecked(labels, d);
        if let Some(j) = c.d_squared_violation() {
            return Err(Error::InvalidComplex(format!("d^2 != 0 on generator {}", c.labels[j])));
        }
        Ok(c)
    }

    /// Builds a complex without checking `d^2 = 0`.
    pub fn new_unchecked(labels: Vec<String>, d: Vec<Vec<u32>>) -> Self {
        assert_eq!(labels.len(), d.len());
        let d = d.into_iter().map(normalize).collect();
        Self { labels, d, actions: BTreeMap::new() }
    }

    /// Attaches a named endomorphism, checking that it commutes with `d` (and squares to 0 for "Q").
    pub fn with_action(mut self, name: &str, cols: Vec<Vec<u32>>) -> Result<Self> {
        let cols: Vec<Vec<u32>> = cols.into_iter().map(normalize).collect();
        if cols.len() != self.len() {
            return Err(Error::InvalidMap(format!("action {name} has wrong size")));
        }
        for j in 0..self.len() {
            let a = apply_sparse(&cols, &self.d[j]);
            let b = apply_sparse(&self.d, &cols[j]);
            if a != b {
                return Err(Error::InvalidMap(format!("action {name} does not commute with d")));
            }
            if name == "Q" && !apply_sparse(&cols, &cols[j]).is_empty() {
                return Err(Error::InvalidMap("Q^2 != 0".into()));
            }
        }
        self.actions.insert(name.to_string(), cols);
        Ok(self)
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True when there are no generators.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Generator labels.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Sparse differential columns.
    pub fn differential(&self) -> &[Vec<u32>] {
        &self.d
    }

    /// Named action columns.
    pub fn action(&self, name: &str) -> Option<&[Vec<u32>]> {
        self.actions.get(name).map(Vec::as_slice)
    }

    /// Dense differential matrix.
    pub fn differential_matrix(&self) -> F2Matrix {
        F2Matrix::from_columns(self.len(), &self.d)
    }

    /// Applies `d` to a sparse vector.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        apply_sparse(&self.d, v)
    }

    fn d_squared_violation(&self) -> Option<usize> {
        (0..self.len()).find(|&j| !self.apply(&self.d[j]).is_empty())
    }

    /// Homology with cycle representatives.
    pub fn homology(&self) -> Homology {
        Homology::compute(self)
    }

    /// JSON dump in the interchange format.
    pub fn to_json(&self) -> ComplexJson {
        ComplexJson { generators: self.labels.clone(), differential: self.d.clone(), actions: self.actions.clone() }
    }

    /// Permutes generators: new generator `i` is old generator `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> ChainComplex {
        let mut inv = vec![0u32; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i as u32;
        }
        let map = |col: &Vec<u32>| normalize(col.iter().map(|&r| inv[r as usize]).collect());
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let d = perm.iter().map(|&p| map(&self.d[p])).collect();
        let mut out = ChainComplex::new_unchecked(labels, d);
        for (name, cols) in &self.actions {
            out.actions.insert(name.clone(), perm.iter().map(|&p| map(&cols[p])).collect());
        }
        out
    }
}

/// Applies a sparse column map to a sparse vector.
pub fn apply_sparse(cols: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
    let mut acc = Vec::new();
    for &j in v {
        acc.extend_from_slice(&cols[j as usize]);
    }
    normalize(acc)
}

/// JSON form of a complex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    /// Generator labels.
    pub generators: Vec<String>,
    /// For each generator, the indices in its differential.
    pub differential: Vec<Vec<u32>>,
    /// Named actions in the same column format.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub actions: BTreeMap<String, Vec<Vec<u32>>>,
}

/// Chain map stored as sparse columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    /// Column `j` lists the target generators in `f(e_j)`.
    pub cols: Vec<Vec<u32>>,
    /// Number of target generators.
    pub target_len: usize,
}

impl ChainMap {
    /// Builds a map and checks `f d = d f`.
    pub fn new(source: &ChainComplex, target: &ChainComplex, cols: Vec<Vec<u32>>) -> Result<Self> {
        let f = Self { cols: cols.into_iter().map(normalize).collect(), target_len: target.len() };
        if f.cols.len() != source.len() {
            return Err(Error::InvalidMap("column count differs from source size".into()));
        }
        if !f.is_chain_map(source, target) {
            return Err(Error::InvalidMap("f d != d f".into()));
        }
        Ok(f)
    }

    /// Builds a map without the chain-map check.
    pub fn new_unchecked(target_len: usize, cols: Vec<Vec<u32>>) -> Self {
        Self { cols: cols.into_iter().map(normalize).collect(), target_len }
    }

    /// Identity map.
    pub fn identity(n: usize) -> Self {
        Self { cols: (0..n as u32).map(|i| vec![i]).collect(), target_len: n }
    }

    /// Applies the map to a sparse vector.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        apply_sparse(&self.cols, v)
    }

    /// True when `f d = d f`.
    pub fn is_chain_map(&self, source: &ChainComplex, target: &ChainComplex) -> bool {
        (0..source.len()).all(|j| self.apply(&source.differential()[j]) == target.apply(&self.cols[j]))
    }

    /// Composite `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> ChainMap {
        ChainMap { cols: self.cols.iter().map(|c| other.apply(c)).collect(), target_len: other.target_len }
    }

    /// Sum of two maps.
    pub fn add(&self, other: &ChainMap) -> ChainMap {
        ChainMap {
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| xor_sorted(a, b)).collect(),
            target_len: self.target_len,
        }
    }

    /// Dense matrix (rows = target, columns = source).
    pub fn to_matrix(&self) -> F2Matrix {
        F2Matrix::from_columns(self.target_len, &self.cols)
    }
}

/// Mapping cone of `f: C -> D`: generators are the shifted `C` followed by `D`.
pub fn mapping_cone(source: &ChainComplex, target: &ChainComplex, f: &ChainMap) -> Result<ChainComplex> {
    if !f.is_chain_map(source, target) {
        return Err(Error::InvalidMap("mapping cone of a non-chain map".into()));
    }
    Ok(mapping_cone_unchecked(source, target, f))
}

fn mapping_cone_unchecked(source: &ChainComplex, target: &ChainComplex, f: &ChainMap) -> ChainComplex {
    let off = source.len() as u32;
    let mut labels: Vec<String> = source.labels().iter().map(|l| format!("s:{l}")).collect();
    labels.extend(target.labels().iter().map(|l| format!("t:{l}")));
    let mut d: Vec<Vec<u32>> = Vec::with_capacity(labels.len());
    for j in 0..source.len() {
        let mut col = source.differential()[j].clone();
        col.extend(f.cols[j].iter().map(|&r| r + off));
        d.push(col);
    }
    for j in 0..target.len() {
        d.push(target.differential()[j].iter().map(|&r| r + off).collect());
    }
    ChainComplex::new_unchecked(labels, d)
}

/// True iff the mapping cone of `f` is acyclic.
pub fn is_quasi_isomorphism(source: &ChainComplex, target: &ChainComplex, f: &ChainMap) -> Result<bool> {
    Ok(mapping_cone(source, target, f)?.homology().dim == 0)
}

/// Homology of a complex together with everything needed to use it.
#[derive(Clone, Debug)]
pub struct Homology {
    /// Dimension.
    pub dim: usize,
    /// Surviving generator for each homology class.
    pub survivors: Vec<u32>,
    /// Cycle representative of each class (sorted generator indices).
    pub cycles: Vec<Vec<u32>>,
    /// Connected block of the differential's support graph containing each class.
    pub blocks: Vec<usize>,
    steps: Vec<(u32, u32, Vec<u32>)>,
    survivor_pos: HashMap<u32, usize>,
}

struct Cancel {
    d: Vec<Vec<u32>>,
    dinv: Vec<HashSet<u32>>,
    alive: Vec<bool>,
}

impl Cancel {
    fn new(c: &ChainComplex) -> Self {
        let n = c.len();
        let mut dinv = vec![HashSet::new(); n];
        for (x, col) in c.differential().iter().enumerate() {
            for &y in col {
                dinv[y as usize].insert(x as u32);
            }
        }
        Self { d: c.differential().to_vec(), dinv, alive: vec![true; n] }
    }

    fn set_d(&mut self, z: u32, new: Vec<u32>) {
        let old = std::mem::replace(&mut self.d[z as usize], new);
        for &w in &old {
            self.dinv[w as usize].remove(&z);
        }
        for &w in &self.d[z as usize] {
            self.dinv[w as usize].insert(z);
        }
    }

    /// Cancels `x -> y`; returns the snapshot of `d(x)` restricted to survivors.
    fn cancel(&mut self, x: u32, y: u32, mut on_z: impl FnMut(u32)) -> Vec<u32> {
        let dx: Vec<u32> = self.d[x as usize].iter().copied().filter(|&w| w != x && w != y).collect();
        let mut zs: Vec<u32> = self.dinv[y as usize].iter().copied().filter(|&z| z != x).collect();
        zs.sort_unstable();
        for z in zs {
            let mut nd = xor_sorted(&self.d[z as usize], &self.d[x as usize]);
            nd.retain(|&w| w != x && w != y);
            self.set_d(z, nd);
            on_z(z);
        }
        self.set_d(x, Vec::new());
        self.set_d(y, Vec::new());
        for z in self.dinv[x as usize].clone() {
            let mut nd = self.d[z as usize].clone();
            nd.retain(|&w| w != x);
            self.set_d(z, nd);
        }
        self.alive[x as usize] = false;
        self.alive[y as usize] = false;
        dx
    }

    fn pick_target(&self, x: u32) -> Option<u32> {
        self.d[x as usize].iter().copied().filter(|&y| y != x).min_by_key(|&y| (self.dinv[y as usize].len(), y))
    }
}

impl Homology {
    fn compute(c: &ChainComplex) -> Self {
        let n = c.len();
        let mut st = Cancel::new(c);
        let mut incl: Vec<Vec<u32>> = (0..n as u32).map(|i| vec![i]).collect();
        let mut steps = Vec::new();
        let mut changed = true;
        while changed {
            changed = false;
            for x in 0..n as u32 {
                if !st.alive[x as usize] {
                    continue;
                }
                if let Some(y) = st.pick_target(x) {
                    let gx = incl[x as usize].clone();
                    let dx = st.cancel(x, y, |z| {
                        let nz = xor_sorted(&incl[z as usize], &gx);
                        incl[z as usize] = nz;
                    });
                    steps.push((x, y, dx));
                    changed = true;
                }
            }
        }
        let survivors: Vec<u32> = (0..n as u32).filter(|&i| st.alive[i as usize]).collect();
        let blocks = support_blocks(c);
        let cycles: Vec<Vec<u32>> = survivors.iter().map(|&s| incl[s as usize].clone()).collect();
        let block_ids = survivors.iter().map(|&s| blocks[s as usize]).collect();
        let survivor_pos = survivors.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Self { dim: survivors.len(), survivors, cycles, blocks: block_ids, steps, survivor_pos }
    }

    /// Cancelled pairs `(x, y)` in elimination order.
    pub fn trace(&self) -> Vec<(u32, u32)> {
        self.steps.iter().map(|(x, y, _)| (*x, *y)).collect()
    }

    /// Coordinates of a cycle in the homology basis.
    pub fn project(&self, cycle: &[u32]) -> Vec<u8> {
        let mut v: HashSet<u32> = cycle.iter().copied().collect();
        for (x, y, dx) in &self.steps {
            let had_y = v.remove(y);
            v.remove(x);
            if had_y {
                for w in dx {
                    if !v.remove(w) {
                        v.insert(*w);
                    }
                }
            }
        }
        let mut out = vec![0u8; self.dim];
        for w in v {
            if let Some(&p) = self.survivor_pos.get(&w) {
                out[p] ^= 1;
            }
        }
        out
    }
}

/// Connected components of the support graph of `d`, labelled by smallest member order.
pub fn support_blocks(c: &ChainComplex) -> Vec<usize> {
    let n = c.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (x, col) in c.differential().iter().enumerate() {
        for &y in col {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut ids = HashMap::new();
    (0..n)
        .map(|x| {
            let r = find(&mut parent, x);
            let next = ids.len();
            *ids.entry(r).or_insert(next)
        })
        .collect()
}

/// Output of [`reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Reduced complex (zero differential).
    pub reduced: ChainComplex,
    /// Projection onto the reduced complex.
    pub to_reduced: ChainMap,
    /// Inclusion of the reduced complex.
    pub from_reduced: ChainMap,
}

/// Reduces a complex to its homology by cancellation.
pub fn reduce(c: &ChainComplex) -> Result<Reduction> {
    if let Some(j) = c.d_squared_violation() {
        return Err(Error::InvalidComplex(format!("d^2 != 0 on generator {}", c.labels[j])));
    }
    let h = c.homology();
    let labels = h.survivors.iter().map(|&s| c.labels[s as usize].clone()).collect();
    let reduced = ChainComplex::new_unchecked(labels, vec![Vec::new(); h.dim]);
    let to_cols = (0..c.len() as u32)
        .map(|j| {
            let p = h.project(&[j]);
            p.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i as u32).collect()
        })
        .collect();
    Ok(Reduction {
        to_reduced: ChainMap::new_unchecked(h.dim, to_cols),
        from_reduced: ChainMap::new_unchecked(c.len(), h.cycles.clone()),
        reduced,
    })
}

/// Incremental sparse F2 elimination for solving `A x = b`.
///
/// Columns are added one at a time; each is reduced against existing pivots.
/// Rows are arbitrary `u64` keys.
#[derive(Default)]
pub struct SparseSolver {
    pivots: HashMap<u64, usize>,
    reduced: Vec<Vec<u64>>,
    combos: Vec<Vec<u32>>,
}

fn xor_sorted64(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sorted sparse u64 vector with repeated entries cancelled.
pub fn normalize64(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    let mut out: Vec<u64> = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

impl SparseSolver {
    /// Empty solver.
    pub fn new() -> Self {
        Self::default()
    }

    fn reduce_vec(&self, mut v: Vec<u64>, mut combo: Vec<u32>) -> (Vec<u64>, Vec<u32>) {
        while let Some(&low) = v.last() {
            match self.pivots.get(&low) {
                Some(&p) => {
                    v = xor_sorted64(&v, &self.reduced[p]);
                    combo = xor_sorted(&combo, &self.combos[p]);
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Adds column number `id` (ids must be added in increasing order). Returns
    /// `Some(combination)` of earlier columns summing to it when it is dependent.
    pub fn add_column(&mut self, id: u32, col: Vec<u64>) -> Option<Vec<u32>> {
        let (v, combo) = self.reduce_vec(normalize64(col), vec![id]);
        if v.is_empty() {
            return Some(combo);
        }
        self.pivots.insert(*v.last().unwrap(), self.reduced.len());
        self.reduced.push(v);
        self.combos.push(combo);
        None
    }

    /// Solves for a set of added columns summing to `b`.
    pub fn solve(&self, b: Vec<u64>) -> Option<Vec<u32>> {
        let (v, combo) = self.reduce_vec(normalize64(b), Vec::new());
        v.is_empty().then_some(combo)
    }

    /// Number of independent columns added.
    pub fn rank(&self) -> usize {
        self.reduced.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(d: Vec<Vec<u32>>) -> ChainComplex {
        let labels = (0..d.len()).map(|i| format!("g{i}")).collect();
        ChainComplex::new(labels, d).unwrap()
    }

    #[test]
    fn zero_differential() {
        let h = cx(vec![vec![], vec![], vec![]]).homology();
        assert_eq!(h.dim, 3);
        assert_eq!(h.cycles, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn acyclic_pair() {
        assert_eq!(cx(vec![vec![1], vec![]]).homology().dim, 0);
    }

    #[test]
    fn d_squared_rejected() {
        let r = ChainComplex::new(vec!["a".into(), "b".into(), "c".into()], vec![vec![1], vec![2], vec![]]);
        assert!(matches!(r, Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn cone_of_identity_and_zero() {
        let c = cx(vec![vec![], vec![], vec![1]]);
        let id = ChainMap::identity(3);
        assert!(is_quasi_isomorphism(&c, &c, &id).unwrap());
        let z = ChainMap::new_unchecked(3, vec![vec![]; 3]);
        assert!(!is_quasi_isomorphism(&c, &c, &z).unwrap());
        assert_eq!(mapping_cone(&c, &c, &z).unwrap().homology().dim, 2);
    }

    #[test]
    fn cone_of_zero_on_two_dim_space() {
        // Id + iota with iota = Id is the zero map on a 2-dim space.
        let c = cx(vec![vec![], vec![]]);
        let z = ChainMap::new_unchecked(2, vec![vec![]; 2]);
        assert_eq!(mapping_cone(&c, &c, &z).unwrap().homology().dim, 4);
    }

    #[test]
    fn projection_kills_boundaries() {
        // a -> b + c: homology spanned by b (= c up to boundary).
        let c = cx(vec![vec![1, 2], vec![], vec![]]);
        let h = c.homology();
        assert_eq!(h.dim, 1);
        assert_eq!(h.project(&[1, 2]), vec![0]);
        assert_eq!(h.project(&[1]), vec![1]);
        assert_eq!(h.project(&[2]), vec![1]);
        assert_eq!(h.project(&h.cycles[0]), vec![1]);
    }

    #[test]
    fn matrix_rank_and_kernel() {
        let m = F2Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k, vec![vec![1, 1, 1]]);
        assert_eq!(m.mul(&F2Matrix::identity(3)).unwrap(), m);
    }

    #[test]
    fn sparse_solver() {
        let mut s = SparseSolver::new();
        assert!(s.add_column(0, vec![1, 2]).is_none());
        assert!(s.add_column(1, vec![2, 3]).is_none());
        assert_eq!(s.add_column(2, vec![1, 3]), Some(vec![0, 1, 2]));
        assert_eq!(s.solve(vec![1, 3]), Some(vec![0, 1]));
        assert_eq!(s.solve(vec![4]), None);
    }
}
