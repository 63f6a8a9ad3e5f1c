//! Finite matrix groups given by generators.
//!
//! Elements are enumerated by breadth-first closure and stored as row-major
//! byte strings sorted lexicographically. Normalizers and centralizers are
//! found by scanning the element list.

use std::hash::{BuildHasher, Hasher};
use std::sync::{Arc, OnceLock};

use hashbrown::HashTable;
use serde::Serialize;
use thiserror::Error;

use crate::gfp::{mul_into, FpMatrix, Prime};

/// Default ceiling on the number of enumerated elements.
pub const DEFAULT_CAP: usize = 20_000_000;

/// Environment variable that overrides [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "FUSIONSEED_CAP";

/// The enumeration cap in force: `FUSIONSEED_CAP` if set and valid, else the default.
pub fn cap_from_env() -> usize {
    std::env::var(CAP_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrpError {
    #[error("group has more than {cap} elements")]
    CapExceeded { cap: usize },
    #[error("subgroup has an element outside the ambient group")]
    SubgroupViolation,
    #[error("index {0} exceeds the limit of 64")]
    IndexTooLarge(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid generators: {0}")]
    InvalidGenerators(String),
}

#[derive(Clone, Copy, Default)]
struct KeyHasher;

struct MixHasher(u64);

impl Hasher for MixHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        let mut h = self.0;
        let mut chunks = bytes.chunks_exact(8);
        for c in &mut chunks {
            let w = u64::from_le_bytes(c.try_into().unwrap());
            h = (h ^ w).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(29);
        }
        for &b in chunks.remainder() {
            h = (h ^ b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(29);
        }
        self.0 = h ^ (h >> 31);
    }
}

impl BuildHasher for KeyHasher {
    type Hasher = MixHasher;
    fn build_hasher(&self) -> MixHasher {
        MixHasher(0x243F_6A88_85A3_08D3)
    }
}

fn hash_key(key: &[u8]) -> u64 {
    KeyHasher.hash_one(key)
}

/// A closed set of group elements, sorted by their byte encoding.
pub struct Elements {
    p: Prime,
    dim: usize,
    data: Vec<u8>,
    table: HashTable<u32>,
}

impl std::fmt::Debug for Elements {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Elements(order {}, GL_{}(F_{}))", self.len(), self.dim, self.p)
    }
}

impl Elements {
    fn from_unsorted(p: Prime, dim: usize, mut data: Vec<u8>) -> Self {
        let n2 = dim * dim;
        let count = if n2 == 0 { 1 } else { data.len() / n2 };
        if n2 > 0 {
            let mut order: Vec<u32> = (0..count as u32).collect();
            order.sort_unstable_by(|&a, &b| {
                data[a as usize * n2..(a as usize + 1) * n2].cmp(&data[b as usize * n2..(b as usize + 1) * n2])
            });
            let mut sorted = Vec::with_capacity(data.len());
            for &i in &order {
                sorted.extend_from_slice(&data[i as usize * n2..(i as usize + 1) * n2]);
            }
            data = sorted;
        }
        let mut table = HashTable::with_capacity(count);
        for i in 0..count {
            let key = &data[i * n2..(i + 1) * n2];
            table.insert_unique(hash_key(key), i as u32, |&j| {
                hash_key(&data[j as usize * n2..(j as usize + 1) * n2])
            });
        }
        Elements { p, dim, data, table }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Raw entries of the `i`-th element.
    pub fn key(&self, i: usize) -> &[u8] {
        let n2 = self.dim * self.dim;
        &self.data[i * n2..(i + 1) * n2]
    }

    pub fn matrix(&self, i: usize) -> FpMatrix {
        FpMatrix::from_data(self.p, self.dim, self.dim, self.key(i).to_vec())
    }

    pub fn index_of(&self, key: &[u8]) -> Option<usize> {
        let n2 = self.dim * self.dim;
        self.table
            .find(hash_key(key), |&j| &self.data[j as usize * n2..(j as usize + 1) * n2] == key)
            .map(|&j| j as usize)
    }

    pub fn contains_key(&self, key: &[u8]) -> bool {
        self.index_of(key).is_some()
    }

    pub fn contains(&self, m: &FpMatrix) -> bool {
        m.rows() == self.dim && m.cols() == self.dim && self.contains_key(m.data())
    }

    pub fn matrices(&self) -> impl Iterator<Item = FpMatrix> + '_ {
        (0..self.len()).map(|i| self.matrix(i))
    }
}

/// Breadth-first closure of `gens` under right multiplication.
pub fn closure(p: Prime, dim: usize, gens: &[FpMatrix], cap: usize) -> Result<Elements, GrpError> {
    let n2 = dim * dim;
    let id = FpMatrix::identity(p, dim);
    let mut data: Vec<u8> = id.data().to_vec();
    let mut table: HashTable<u32> = HashTable::new();
    table.insert_unique(hash_key(&data[..n2]), 0, |_| 0);
    let mut count = 1usize;
    let mut cursor = 0usize;
    let mut buf = vec![0u8; n2];
    let gen_data: Vec<&[u8]> = gens.iter().filter(|g| !g.is_identity()).map(|g| g.data()).collect();
    while cursor < count {
        for g in &gen_data {
            mul_into(p, &data[cursor * n2..(cursor + 1) * n2], g, dim, dim, dim, &mut buf);
            let h = hash_key(&buf);
            let found = table.find(h, |&j| &data[j as usize * n2..(j as usize + 1) * n2] == buf.as_slice());
            if found.is_none() {
                if count >= cap {
                    return Err(GrpError::CapExceeded { cap });
                }
                data.extend_from_slice(&buf);
                let d = &data;
                table.insert_unique(h, count as u32, |&j| hash_key(&d[j as usize * n2..(j as usize + 1) * n2]));
                count += 1;
            }
        }
        cursor += 1;
    }
    drop(table);
    Ok(Elements::from_unsorted(p, dim, data))
}

/// A matrix group over `F_p` given by generators.
#[derive(Clone)]
pub struct MatGroup {
    p: Prime,
    dim: usize,
    gens: Vec<FpMatrix>,
    cap: usize,
    cache: OnceLock<Arc<Elements>>,
}

impl std::fmt::Debug for MatGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatGroup")
            .field("p", &self.p.value())
            .field("dim", &self.dim)
            .field("generators", &self.gens.len())
            .field("order", &self.cache.get().map(|e| e.len()))
            .finish()
    }
}

impl MatGroup {
    pub fn new(p: Prime, dim: usize, gens: Vec<FpMatrix>) -> Result<Self, GrpError> {
        for g in &gens {
            if g.prime() != p || g.rows() != dim || g.cols() != dim {
                return Err(GrpError::InvalidGenerators(format!("expected {dim}x{dim} over F_{p}")));
            }
            if !g.is_invertible() {
                return Err(GrpError::InvalidGenerators(format!("singular generator {g:?}")));
            }
        }
        Ok(MatGroup { p, dim, gens, cap: cap_from_env(), cache: OnceLock::new() })
    }

    /// A group whose element set is already known.
    pub fn from_elements(p: Prime, dim: usize, elements: Elements) -> Self {
        let gens = greedy_generators(p, dim, &elements);
        let cache = OnceLock::new();
        let _ = cache.set(Arc::new(elements));
        MatGroup { p, dim, gens, cap: cap_from_env(), cache }
    }

    /// A group given by an explicit list of its elements; the list must be closed.
    pub fn from_matrices(p: Prime, dim: usize, elements: &[FpMatrix]) -> Self {
        let mut data = Vec::with_capacity(elements.len() * dim * dim);
        for m in elements {
            data.extend_from_slice(m.data());
        }
        MatGroup::from_elements(p, dim, Elements::from_unsorted(p, dim, data))
    }

    fn with_known(p: Prime, dim: usize, gens: Vec<FpMatrix>, elements: Elements) -> Self {
        let cache = OnceLock::new();
        let _ = cache.set(Arc::new(elements));
        MatGroup { p, dim, gens, cap: cap_from_env(), cache }
    }

    pub fn trivial(p: Prime, dim: usize) -> Self {
        MatGroup::new(p, dim, vec![]).expect("trivial group")
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[FpMatrix] {
        &self.gens
    }

    pub fn is_enumerated(&self) -> bool {
        self.cache.get().is_some()
    }

    /// The element set, enumerating on first use.
    pub fn elements(&self) -> Result<&Elements, GrpError> {
        if let Some(e) = self.cache.get() {
            return Ok(e);
        }
        let e = closure(self.p, self.dim, &self.gens, self.cap)?;
        Ok(self.cache.get_or_init(|| Arc::new(e)))
    }

    pub fn order(&self) -> Result<usize, GrpError> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, m: &FpMatrix) -> Result<bool, GrpError> {
        Ok(self.elements()?.contains(m))
    }

    /// Whether every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &MatGroup) -> Result<bool, GrpError> {
        let e = other.elements()?;
        Ok(self.gens.iter().all(|g| e.contains(g)))
    }

    /// Whether `h` is normalized by the generators of `self`.
    pub fn normalizes(&self, h: &MatGroup) -> Result<bool, GrpError> {
        let he = h.elements()?;
        for g in &self.gens {
            let gi = g.inverse().expect("invertible generator");
            for x in h.generators() {
                if !he.contains(&g.mul(x).mul(&gi)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Subgroup generated by `gens`, inheriting this group's cap.
    pub fn subgroup(&self, gens: Vec<FpMatrix>) -> Result<MatGroup, GrpError> {
        let e = closure(self.p, self.dim, &gens, self.cap)?;
        Ok(MatGroup::with_known(self.p, self.dim, gens, e).with_cap(self.cap))
    }

    /// Subgroup of elements satisfying `pred`; the predicate must cut out a subgroup.
    pub fn filter_subgroup(&self, mut pred: impl FnMut(&FpMatrix) -> bool) -> Result<MatGroup, GrpError> {
        let e = self.elements()?;
        let mut data = Vec::new();
        for i in 0..e.len() {
            let m = e.matrix(i);
            if pred(&m) {
                data.extend_from_slice(m.data());
            }
        }
        Ok(MatGroup::from_elements(self.p, self.dim, Elements::from_unsorted(self.p, self.dim, data)).with_cap(self.cap))
    }
}

fn greedy_generators(p: Prime, dim: usize, elements: &Elements) -> Vec<FpMatrix> {
    let mut gens: Vec<FpMatrix> = Vec::new();
    let mut current = closure(p, dim, &gens, usize::MAX).expect("trivial closure");
    for i in 0..elements.len() {
        if current.len() == elements.len() {
            break;
        }
        if !current.contains_key(elements.key(i)) {
            gens.push(elements.matrix(i));
            current = closure(p, dim, &gens, usize::MAX).expect("subgroup closure");
        }
    }
    gens
}

/// Sylow data for a Sylow `p`-subgroup `U = <u>` of order `p`.
#[derive(Debug, Clone)]
pub struct SylowData {
    pub u: FpMatrix,
    pub normalizer: MatGroup,
    pub centralizer: MatGroup,
    pub automizer_order: usize,
    powers: Vec<FpMatrix>,
}

impl SylowData {
    /// `u^k` for `k` in `0..p`.
    pub fn powers(&self) -> &[FpMatrix] {
        &self.powers
    }

    /// The exponent `r` with `g u g^-1 = u^r`, if `g` normalizes `U`.
    pub fn conjugation_exponent(&self, g: &FpMatrix) -> Option<u8> {
        let gi = g.inverse()?;
        let c = g.mul(&self.u).mul(&gi);
        self.powers.iter().position(|x| *x == c).map(|r| r as u8).filter(|&r| r != 0)
    }

    /// The subgroup `U`.
    pub fn u_group(&self) -> MatGroup {
        self.normalizer.subgroup(vec![self.u.clone()]).expect("order p subgroup")
    }
}

/// Membership of a group in the classes of groups with a non-normal Sylow
/// subgroup of order `p`, optionally with full automizer.
#[derive(Debug, Clone)]
pub enum GGClass {
    NotInG { reason: String },
    InGOnly(SylowData),
    InGG(SylowData),
}

impl GGClass {
    pub fn sylow(&self) -> Option<&SylowData> {
        match self {
            GGClass::NotInG { .. } => None,
            GGClass::InGOnly(s) | GGClass::InGG(s) => Some(s),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            GGClass::NotInG { .. } => "not_in_G",
            GGClass::InGOnly(_) => "in_G_only",
            GGClass::InGG(_) => "in_GG",
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct GGSummary {
    pub class: String,
    pub order: usize,
    pub normalizer_order: Option<usize>,
    pub centralizer_order: Option<usize>,
    pub automizer_order: Option<usize>,
    pub reason: Option<String>,
}

impl GGClass {
    pub fn summary(&self, order: usize) -> GGSummary {
        let s = self.sylow();
        GGSummary {
            class: self.tag().to_string(),
            order,
            normalizer_order: s.map(|s| s.normalizer.order().unwrap_or(0)),
            centralizer_order: s.map(|s| s.centralizer.order().unwrap_or(0)),
            automizer_order: s.map(|s| s.automizer_order),
            reason: match self {
                GGClass::NotInG { reason } => Some(reason.clone()),
                _ => None,
            },
        }
    }
}

fn is_order_p(m: &FpMatrix, p: u64) -> bool {
    !m.is_identity() && m.pow(p).is_identity()
}

/// Normalizer of `<u>` by scanning the elements.
fn scan_normalizer_centralizer(g: &MatGroup, u: &FpMatrix, powers: &[FpMatrix]) -> Result<(MatGroup, MatGroup), GrpError> {
    let e = g.elements()?;
    let (p, n) = (g.p, g.dim);
    let n2 = n * n;
    let mut ndata = Vec::new();
    let mut cdata = Vec::new();
    let mut gu = vec![0u8; n2];
    let mut ug = vec![0u8; n2];
    let power_keys: Vec<&[u8]> = powers.iter().map(|x| x.data()).collect();
    for i in 0..e.len() {
        let x = e.key(i);
        mul_into(p, x, u.data(), n, n, n, &mut gu);
        mul_into(p, u.data(), x, n, n, n, &mut ug);
        if gu == ug {
            ndata.extend_from_slice(x);
            cdata.extend_from_slice(x);
            continue;
        }
        let xm = FpMatrix::from_data(p, n, n, x.to_vec());
        let c = FpMatrix::from_data(p, n, n, gu.clone()).mul(&xm.inverse().expect("group element"));
        if power_keys.contains(&c.data()) {
            ndata.extend_from_slice(x);
        }
    }
    let norm = MatGroup::from_elements(p, n, Elements::from_unsorted(p, n, ndata)).with_cap(g.cap);
    let cent = MatGroup::from_elements(p, n, Elements::from_unsorted(p, n, cdata)).with_cap(g.cap);
    Ok((norm, cent))
}

/// First element of order `p` in canonical order.
pub fn find_order_p_element(g: &MatGroup) -> Result<Option<FpMatrix>, GrpError> {
    let e = g.elements()?;
    let p = g.p.value() as u64;
    Ok(e.matrices().find(|m| is_order_p(m, p)))
}

/// Sylow data for the given generator `u` of a Sylow subgroup of order `p`.
pub fn sylow_data(g: &MatGroup, u: FpMatrix) -> Result<SylowData, GrpError> {
    let p = g.p.value() as u64;
    let powers: Vec<FpMatrix> = (0..p).map(|k| u.pow(k)).collect();
    let (normalizer, centralizer) = scan_normalizer_centralizer(g, &u, &powers)?;
    let automizer_order = normalizer.order()? / centralizer.order()?;
    Ok(SylowData { u, normalizer, centralizer, automizer_order, powers })
}

/// Classify `g` with respect to its Sylow `p`-subgroups.
pub fn class_gg(g: &MatGroup) -> Result<GGClass, GrpError> {
    let order = g.order()?;
    let p = g.p.value() as usize;
    if order % p != 0 {
        return Ok(GGClass::NotInG { reason: "p does not divide |G|".into() });
    }
    if order % (p * p) == 0 {
        return Ok(GGClass::NotInG { reason: "p^2 divides |G|".into() });
    }
    let u = find_order_p_element(g)?.expect("Cauchy");
    let syl = sylow_data(g, u)?;
    if syl.normalizer.order()? == order {
        return Ok(GGClass::NotInG { reason: "Sylow p-subgroup is normal".into() });
    }
    if syl.automizer_order == p - 1 {
        Ok(GGClass::InGG(syl))
    } else {
        Ok(GGClass::InGOnly(syl))
    }
}

/// `O^{p'}(G)`: the subgroup generated by the conjugates of `u`.
pub fn o_pprime(g: &MatGroup, syl: &SylowData) -> Result<MatGroup, GrpError> {
    let e = g.elements()?;
    let (p, n) = (g.p, g.dim);
    let mut gens = vec![syl.u.clone()];
    let mut current = closure(p, n, &gens, g.cap)?;
    for i in 0..e.len() {
        let x = e.matrix(i);
        let c = x.mul(&syl.u).mul(&x.inverse().expect("group element"));
        if !current.contains(&c) {
            gens.push(c);
            current = closure(p, n, &gens, g.cap)?;
            if current.len() == e.len() {
                break;
            }
        }
    }
    Ok(MatGroup::with_known(p, n, gens, current).with_cap(g.cap))
}

/// Smallest normal subgroup of `g` containing `gens`.
pub fn normal_closure(g: &MatGroup, gens: &[FpMatrix]) -> Result<MatGroup, GrpError> {
    let e = g.elements()?;
    let (p, n) = (g.p, g.dim);
    let mut acc: Vec<FpMatrix> = gens.to_vec();
    let mut current = closure(p, n, &acc, g.cap)?;
    for i in 0..e.len() {
        let x = e.matrix(i);
        let xi = x.inverse().expect("group element");
        for s in gens {
            let c = x.mul(s).mul(&xi);
            if !current.contains(&c) {
                acc.push(c);
                current = closure(p, n, &acc, g.cap)?;
            }
        }
    }
    Ok(MatGroup::with_known(p, n, acc, current).with_cap(g.cap))
}

/// `N_g(h)`, by scanning `g`.
pub fn normalizer_in(g: &MatGroup, h: &MatGroup) -> Result<MatGroup, GrpError> {
    let he = h.elements()?;
    let hg = h.generators().to_vec();
    g.filter_subgroup(|x| {
        let xi = x.inverse().expect("group element");
        hg.iter().all(|s| he.contains(&x.mul(s).mul(&xi)))
    })
}

/// Whether `|h| |x| / |h ∩ x| = |g|`.
pub fn product_covers(g: &MatGroup, h: &MatGroup, x: &MatGroup) -> Result<bool, GrpError> {
    let ge = g.elements()?;
    let he = h.elements()?;
    let xe = x.elements()?;
    for sub in [he, xe] {
        if (0..sub.len()).any(|i| !ge.contains_key(sub.key(i))) {
            return Err(GrpError::SubgroupViolation);
        }
    }
    let (small, big) = if he.len() <= xe.len() { (he, xe) } else { (xe, he) };
    let inter = (0..small.len()).filter(|&i| big.contains_key(small.key(i))).count();
    Ok(he.len() * xe.len() == ge.len() * inter)
}

/// Elements of `g` that are scalar matrices.
pub fn scalar_subgroup(g: &MatGroup) -> Result<MatGroup, GrpError> {
    g.filter_subgroup(|m| m.is_scalar().is_some())
}

/// All subgroups `G` with `g0 <= G <= gbar`, for normal `g0` of index at most 64.
pub fn intermediate_subgroups(g0: &MatGroup, gbar: &MatGroup) -> Result<Vec<MatGroup>, GrpError> {
    let be = gbar.elements()?;
    let e0 = g0.elements()?;
    if (0..e0.len()).any(|i| !be.contains_key(e0.key(i))) {
        return Err(GrpError::SubgroupViolation);
    }
    let index = be.len() / e0.len();
    if index > 64 {
        return Err(GrpError::IndexTooLarge(index));
    }
    if !gbar.normalizes(g0)? {
        return Err(GrpError::NotNormal);
    }
    let (p, n) = (gbar.p, gbar.dim);
    // coset labels of g0 in gbar
    let mut label = vec![u8::MAX; be.len()];
    let mut reps: Vec<FpMatrix> = Vec::new();
    let zero_members: Vec<FpMatrix> = e0.matrices().collect();
    for i in 0..be.len() {
        if label[i] != u8::MAX {
            continue;
        }
        let r = be.matrix(i);
        let id = reps.len() as u8;
        for h in &zero_members {
            let j = be.index_of(r.mul(h).data()).expect("closed");
            label[j] = id;
        }
        reps.push(r);
    }
    let k = reps.len();
    let coset_of = |m: &FpMatrix| label[be.index_of(m.data()).expect("closed")] as usize;
    let table: Vec<Vec<usize>> =
        (0..k).map(|a| (0..k).map(|b| coset_of(&reps[a].mul(&reps[b]))).collect()).collect();
    let close = |mut set: u64| -> u64 {
        loop {
            let mut next = set;
            for a in 0..k {
                if set >> a & 1 == 0 {
                    continue;
                }
                for b in 0..k {
                    if set >> b & 1 == 1 {
                        next |= 1 << table[a][b];
                    }
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    };
    let identity_coset = coset_of(&FpMatrix::identity(p, n));
    let mut found: Vec<u64> = vec![1 << identity_coset];
    let mut frontier = found.clone();
    while let Some(s) = frontier.pop() {
        for q in 0..k {
            if s >> q & 1 == 0 {
                let t = close(s | 1 << q);
                if !found.contains(&t) {
                    found.push(t);
                    frontier.push(t);
                }
            }
        }
    }
    found.sort_by_key(|s| (s.count_ones(), *s));
    let mut out = Vec::new();
    for s in found {
        let mut data = Vec::new();
        for i in 0..be.len() {
            if s >> label[i] & 1 == 1 {
                data.extend_from_slice(be.key(i));
            }
        }
        // generators: those of g0 plus a greedy generating set of the quotient subgroup
        let mut gens = g0.generators().to_vec();
        let mut span = 1u64 << identity_coset;
        for q in 0..k {
            if s >> q & 1 == 1 && span >> q & 1 == 0 {
                gens.push(reps[q].clone());
                span = close(span | 1 << q);
            }
        }
        out.push(MatGroup::with_known(p, n, gens, Elements::from_unsorted(p, n, data)).with_cap(gbar.cap));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn m(p: Prime, rows: &[&[i64]]) -> FpMatrix {
        FpMatrix::from_rows(p, rows).unwrap()
    }

    fn sl2(p: Prime) -> MatGroup {
        MatGroup::new(p, 2, vec![m(p, &[&[1, 1], &[0, 1]]), m(p, &[&[0, -1], &[1, 0]])]).unwrap()
    }

    fn sym(p: Prime, n: usize) -> MatGroup {
        let cyc: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut tr: Vec<usize> = (0..n).collect();
        tr.swap(0, 1);
        MatGroup::new(p, n, vec![FpMatrix::permutation(p, &cyc), FpMatrix::permutation(p, &tr)]).unwrap()
    }

    #[test]
    fn enumeration_orders() {
        let p = f(5);
        assert_eq!(MatGroup::trivial(p, 3).order().unwrap(), 1);
        assert_eq!(sl2(p).order().unwrap(), 120);
        assert_eq!(sym(p, 5).order().unwrap(), 120);
    }

    #[test]
    fn cap_is_enforced() {
        let g = sym(f(5), 5).with_cap(100);
        assert_eq!(g.order(), Err(GrpError::CapExceeded { cap: 100 }));
    }

    #[test]
    fn elements_are_sorted_and_closed() {
        let g = sl2(f(3));
        let e = g.elements().unwrap();
        for i in 1..e.len() {
            assert!(e.key(i - 1) < e.key(i));
        }
        for a in e.matrices() {
            assert!(e.contains(&a.inverse().unwrap()));
            for b in g.generators() {
                assert!(e.contains(&a.mul(b)));
            }
        }
    }

    #[test]
    fn classification_examples() {
        let p = f(5);
        // diag(a, 1/a) conjugates u to u^(a^2), so only the squares occur
        let c = class_gg(&sl2(p)).unwrap();
        assert_eq!(c.tag(), "in_G_only");
        assert_eq!(c.sylow().unwrap().automizer_order, 2);
        let gl2 = MatGroup::new(p, 2, vec![m(p, &[&[2, 0], &[0, 1]]), m(p, &[&[1, 1], &[0, 1]]), m(p, &[&[0, -1], &[1, 0]])]).unwrap();
        let c = class_gg(&gl2).unwrap();
        assert_eq!(c.tag(), "in_GG");
        assert_eq!(c.sylow().unwrap().automizer_order, 4);

        let a5 = sym(p, 5).filter_subgroup(|x| x.rank() == 5 && is_even_perm(x)).unwrap();
        assert_eq!(a5.order().unwrap(), 60);
        let c = class_gg(&a5).unwrap();
        assert_eq!(c.tag(), "in_G_only");
        assert_eq!(c.sylow().unwrap().automizer_order, 2);

        // C5 x| C4 acting monomially: U is normal
        let cyc = FpMatrix::permutation(p, &[1, 2, 3, 4, 0]);
        let mult2 = FpMatrix::permutation(p, &[0, 2, 4, 1, 3]);
        let g = MatGroup::new(p, 5, vec![cyc, mult2]).unwrap();
        assert_eq!(g.order().unwrap(), 20);
        assert_eq!(class_gg(&g).unwrap().tag(), "not_in_G");
    }

    fn is_even_perm(x: &FpMatrix) -> bool {
        let n = x.rows();
        let perm: Vec<usize> = (0..n).map(|c| (0..n).find(|&r| x.get(r, c) == 1).unwrap()).collect();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for s in 0..n {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    #[test]
    fn o_pprime_examples() {
        let p = f(5);
        let s5 = sym(p, 5);
        let syl = class_gg(&s5).unwrap().sylow().unwrap().clone();
        assert_eq!(o_pprime(&s5, &syl).unwrap().order().unwrap(), 60);
        let g = sl2(p);
        let syl = class_gg(&g).unwrap().sylow().unwrap().clone();
        assert_eq!(o_pprime(&g, &syl).unwrap().order().unwrap(), 120);
        let s7 = sym(f(7), 7);
        let syl = class_gg(&s7).unwrap().sylow().unwrap().clone();
        let a7 = o_pprime(&s7, &syl).unwrap();
        assert_eq!(a7.order().unwrap(), 2520);
        assert!(s7.normalizes(&a7).unwrap());
    }

    #[test]
    fn product_cover_examples() {
        let p = f(5);
        let s5 = sym(p, 5);
        let syl = class_gg(&s5).unwrap().sylow().unwrap().clone();
        let a5 = o_pprime(&s5, &syl).unwrap();
        let triv = MatGroup::trivial(p, 5);
        let tr = s5.subgroup(vec![FpMatrix::permutation(p, &[1, 0, 2, 3, 4])]).unwrap();
        assert!(product_covers(&s5, &s5, &triv).unwrap());
        assert!(product_covers(&s5, &a5, &tr).unwrap());
        assert!(!product_covers(&s5, &a5, &triv).unwrap());
        let outside = MatGroup::new(p, 5, vec![FpMatrix::scalar(p, 5, 2)]).unwrap();
        assert_eq!(product_covers(&s5, &a5, &outside), Err(GrpError::SubgroupViolation));
    }

    #[test]
    fn scalar_subgroups() {
        let p = f(5);
        assert_eq!(scalar_subgroup(&sl2(p)).unwrap().order().unwrap(), 2);
        assert_eq!(scalar_subgroup(&sym(p, 5)).unwrap().order().unwrap(), 1);
        let gl2 = MatGroup::new(p, 2, vec![m(p, &[&[2, 0], &[0, 1]]), m(p, &[&[-1, 1], &[-1, 0]])]).unwrap();
        assert_eq!(gl2.order().unwrap(), 480);
        assert_eq!(scalar_subgroup(&gl2).unwrap().order().unwrap(), 4);
    }

    #[test]
    fn intermediate_subgroup_examples() {
        let p = f(5);
        let s5 = sym(p, 5);
        let syl = class_gg(&s5).unwrap().sylow().unwrap().clone();
        let a5 = o_pprime(&s5, &syl).unwrap();
        let mids = intermediate_subgroups(&a5, &s5).unwrap();
        assert_eq!(mids.iter().map(|g| g.order().unwrap()).collect::<Vec<_>>(), vec![60, 120]);
        assert_eq!(intermediate_subgroups(&a5, &a5).unwrap().len(), 1);
        // quotient C2 x C4 above A5 on the permutation module
        let gbar = MatGroup::new(p, 5, vec![
            FpMatrix::permutation(p, &[1, 2, 3, 4, 0]),
            FpMatrix::permutation(p, &[1, 0, 2, 3, 4]),
            FpMatrix::scalar(p, 5, 2),
        ])
        .unwrap();
        assert_eq!(gbar.order().unwrap(), 480);
        assert_eq!(intermediate_subgroups(&a5, &gbar).unwrap().len(), 8);
        let big = MatGroup::trivial(p, 5);
        assert!(matches!(intermediate_subgroups(&big, &s5), Err(GrpError::IndexTooLarge(120))));
    }
}
