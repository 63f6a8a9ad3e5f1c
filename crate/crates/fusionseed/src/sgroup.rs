//! The `p`-group `S = A ⋊ U`, its distinguished subgroups, and the local
//! automorphism groups `Θ_P` attached to the classes `H_i` and `B_i`.
//!
//! Elements of `S` are pairs `(a, k)` standing for `a·x^k`, where `x` acts
//! on `A = F_p^n` through the Sylow generator `u`. Automorphisms of a
//! subgroup `P` of class at most two are handled as linear maps on its
//! Lie ring, which for odd `p` and class two is a bijection given by
//! `log(w·y^k) = w + k·y + (k/2)[w, y]`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::gfp::{self, kernel_basis, FpMatrix, GfpError, Prime, Subspace};
use crate::grp::{self, GrpError, MatGroup, SylowData};
use crate::modrep::{self, FpModule, ModError};
use crate::mu::DeltaSubgroup;

/// Largest `|A|` for which conjugacy classes are checked by explicit orbits.
pub const ORBIT_LIMIT: usize = 100_000;

/// Largest `|S|` for the exhaustive maximal-subgroup scan.
pub const MAXIMAL_SCAN_LIMIT: usize = 15_625;

#[derive(Debug, Error)]
pub enum SGroupError {
    #[error("U acts trivially on A")]
    TrivialAction,
    #[error("module is not minimally active")]
    NotMinimallyActive,
    #[error("Z0 has dimension {0}, expected 1")]
    Z0NotLine(usize),
    #[error("subgroup does not split over its intersection with A")]
    SplitFailed,
    #[error("mu of the normalizer does not contain Delta_{t}")]
    MuTooSmall { t: i64 },
    #[error("subgroup is not of the form Z<y> or Z2<y>")]
    NotInHB,
    #[error("|S| = {p}^{exp} is too large for this check")]
    TooLarge { p: u32, exp: usize },
    #[error(transparent)]
    Grp(#[from] GrpError),
    #[error(transparent)]
    Mod(#[from] ModError),
    #[error(transparent)]
    Gfp(#[from] GfpError),
}

/// `a·x^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SElement {
    pub a: Vec<u8>,
    pub k: u8,
}

/// `S = A ⋊ <x>` with its characteristic subspaces of `A`.
#[derive(Debug, Clone)]
pub struct SGroup {
    p: Prime,
    n: usize,
    u_pows: Vec<FpMatrix>,
    pub z: Subspace,
    pub sprime: Subspace,
    pub z0: Subspace,
    pub z2: Subspace,
    pub a0: Subspace,
}

/// `{ v : m v in w }`.
fn preimage(m: &FpMatrix, w: &Subspace) -> Subspace {
    let ann = w.annihilator();
    if ann.is_zero() {
        return Subspace::full(m.prime(), m.cols());
    }
    kernel_basis(&ann.basis_matrix().mul(m))
}

/// `v` reduced against the RREF basis of `w`: a canonical coset representative.
fn reduce_mod(w: &Subspace, v: &[u8]) -> Vec<u8> {
    let p = w.prime();
    let mut out = v.to_vec();
    for row in w.basis() {
        let c = row.iter().position(|&x| x != 0).expect("nonzero basis row");
        let f = out[c];
        if f != 0 {
            for (o, r) in out.iter_mut().zip(&row) {
                *o = p.sub(*o, p.mul(f, *r));
            }
        }
    }
    out
}

fn add(p: Prime, a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(&x, &y)| p.add(x, y)).collect()
}

fn sub(p: Prime, a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(&x, &y)| p.sub(x, y)).collect()
}

fn scale(p: Prime, c: u8, a: &[u8]) -> Vec<u8> {
    a.iter().map(|&x| p.mul(c, x)).collect()
}

impl SGroup {
    pub fn prime(&self) -> Prime {
        self.p
    }

    /// `dim A`.
    pub fn rank(&self) -> usize {
        self.n
    }

    /// `log_p |S|`.
    pub fn order_exponent(&self) -> usize {
        self.n + 1
    }

    pub fn u(&self) -> &FpMatrix {
        &self.u_pows[1]
    }

    pub fn identity(&self) -> SElement {
        SElement { a: vec![0; self.n], k: 0 }
    }

    pub fn x(&self) -> SElement {
        SElement { a: vec![0; self.n], k: 1 }
    }

    pub fn translation(&self, a: &[u8]) -> SElement {
        SElement { a: a.to_vec(), k: 0 }
    }

    pub fn mul(&self, g: &SElement, h: &SElement) -> SElement {
        let moved = self.u_pows[g.k as usize].mul_vec(&h.a);
        SElement { a: add(self.p, &g.a, &moved), k: ((g.k as u32 + h.k as u32) % self.p.value()) as u8 }
    }

    pub fn inv(&self, g: &SElement) -> SElement {
        let back = (self.p.value() - g.k as u32) % self.p.value();
        let a = self.u_pows[back as usize].mul_vec(&g.a);
        SElement { a: scale(self.p, self.p.neg(1), &a), k: back as u8 }
    }

    pub fn pow(&self, g: &SElement, e: u32) -> SElement {
        let mut acc = self.identity();
        for _ in 0..e % self.p.value() {
            acc = self.mul(&acc, g);
        }
        // exponent p: g^p lies in A and may be nonzero
        for _ in 0..e / self.p.value() {
            let gp = (0..self.p.value()).fold(self.identity(), |x, _| self.mul(&x, g));
            acc = self.mul(&acc, &gp);
        }
        acc
    }

    /// `g h g^-1`.
    pub fn conj(&self, g: &SElement, h: &SElement) -> SElement {
        self.mul(&self.mul(g, h), &self.inv(g))
    }

    /// `(1 - u) v`.
    pub fn one_minus_u(&self, v: &[u8]) -> Vec<u8> {
        sub(self.p, v, &self.u().mul_vec(v))
    }

    /// `Σ_{i<k} u^i b`: the `A`-part of `(b, 1)^k`.
    pub fn power_part(&self, b: &[u8], k: u8) -> Vec<u8> {
        (0..k as usize).fold(vec![0; self.n], |acc, i| add(self.p, &acc, &self.u_pows[i].mul_vec(b)))
    }

    /// `σ = Σ_{i<p} x^i(a)`, the `A`-part of `(a x)^p`.
    pub fn sigma(&self, a: &[u8]) -> Vec<u8> {
        (0..self.p.value() as usize).fold(vec![0; self.n], |acc, i| add(self.p, &acc, &self.u_pows[i].mul_vec(a)))
    }

    pub fn structure(&self) -> StructureReport {
        let n = self.n;
        let z2_cap = self.z2.intersect(&self.sprime).dim();
        StructureReport {
            order_exponent: n + 1,
            dim_z: self.z.dim(),
            dim_sprime: self.sprime.dim(),
            dim_z0: self.z0.dim(),
            dim_z2: self.z2.dim(),
            dim_a0: self.a0.dim(),
            z0_order_p: self.z0.dim() == 1,
            a_mod_a0_order_p: n - self.a0.dim() == 1,
            z2_mod_z_order_p: self.z2.dim() == self.z.dim() + 1,
            z2_in_a0: self.a0.contains(&self.z2),
            z2_cap_sprime_rank_2: z2_cap == 2,
            center_times_derived: self.z.dim() + self.sprime.dim() == n,
        }
    }

    /// Affine `(n+1)`-matrix of an element, for embedding `S` in `A ⋊ G`.
    pub fn affine(&self, g: &SElement) -> FpMatrix {
        affine(&self.u_pows[g.k as usize], &g.a)
    }
}

fn affine(m: &FpMatrix, a: &[u8]) -> FpMatrix {
    let n = m.rows();
    let mut out = FpMatrix::identity(m.prime(), n + 1);
    for r in 0..n {
        for c in 0..n {
            out.set(r, c, m.get(r, c));
        }
        out.set(r, n, a[r]);
    }
    out
}

/// The order facts every passing instance must satisfy.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StructureReport {
    pub order_exponent: usize,
    pub dim_z: usize,
    pub dim_sprime: usize,
    pub dim_z0: usize,
    pub dim_z2: usize,
    pub dim_a0: usize,
    pub z0_order_p: bool,
    pub a_mod_a0_order_p: bool,
    pub z2_mod_z_order_p: bool,
    pub z2_in_a0: bool,
    pub z2_cap_sprime_rank_2: bool,
    /// `|Z(S)|·|[S,S]| = |S|/p`.
    pub center_times_derived: bool,
}

impl StructureReport {
    pub fn all_hold(&self) -> bool {
        self.z0_order_p
            && self.a_mod_a0_order_p
            && self.z2_mod_z_order_p
            && self.z2_in_a0
            && self.z2_cap_sprime_rank_2
            && self.center_times_derived
    }
}

pub fn build_s(v: &FpModule, syl: &SylowData) -> Result<SGroup, SGroupError> {
    if syl.u.is_identity() {
        return Err(SGroupError::TrivialAction);
    }
    if !modrep::is_minimally_active(v, syl)? {
        return Err(SGroupError::NotMinimallyActive);
    }
    let p = v.prime();
    let n = v.dim();
    let y = syl.u.minus_identity();
    let z = kernel_basis(&y);
    let sprime = gfp::image_basis(&y);
    let z0 = z.intersect(&sprime);
    let z2 = preimage(&y, &z);
    let a0 = z.sum(&sprime);
    let u_pows = (0..p.value() as u64).map(|k| syl.u.pow(k)).collect();
    Ok(SGroup { p, n, u_pows, z, sprime, z0, z2, a0 })
}

/// Action of `g` on `A/S'` in the coordinates of a fixed complement.
fn quotient_action(g: &FpMatrix, lift: &FpMatrix, back: &FpMatrix, c: usize) -> FpMatrix {
    let n = g.rows();
    let full = back.mul(&g.mul(lift));
    let mut out = FpMatrix::zero(g.prime(), c, c);
    for r in 0..c {
        for k in 0..c {
            out.set(r, k, full.get(n - c + r, k));
        }
    }
    out
}

/// `x = (0, 1)` and `a` spanning an `N_G(U)`-invariant complement to `A0/S'` in `A/S'`.
pub fn choose_x_a(s: &SGroup, syl: &SylowData) -> Result<(SElement, SElement), SGroupError> {
    if s.z0.dim() != 1 {
        return Err(SGroupError::Z0NotLine(s.z0.dim()));
    }
    let p = s.p;
    let n = s.n;
    let comp = s.sprime.complement_basis();
    let c = comp.len();
    let mut cols = s.sprime.basis();
    cols.extend(comp.iter().cloned());
    let basis = FpMatrix::from_columns(p, n, &cols);
    let back = basis.inverse().expect("basis of A");
    let lift = FpMatrix::from_columns(p, n, &comp);
    let to_q = |v: &[u8]| -> Vec<u8> { back.mul_vec(v)[n - c..].to_vec() };

    // distinct actions of N_G(U) on A/S'; U acts trivially, so this is a p'-group
    let mut seen = HashSet::new();
    let mut actions = Vec::new();
    for g in syl.normalizer.elements()?.matrices() {
        let q = quotient_action(&g, &lift, &back, c);
        if seen.insert(q.data().to_vec()) {
            actions.push(q);
        }
    }
    let a0q: Vec<Vec<u8>> = s.a0.basis().iter().map(|v| to_q(v)).collect();
    let a0q = Subspace::span(p, c, &a0q);
    // a projection onto A0/S' along a standard complement
    let extra = a0q.complement_basis();
    let mut pcols = a0q.basis();
    pcols.extend(extra.iter().cloned());
    let pb = FpMatrix::from_columns(p, c, &pcols);
    let mut diag = FpMatrix::zero(p, c, c);
    for i in 0..a0q.dim() {
        diag.set(i, i, 1);
    }
    let pi0 = pb.mul(&diag).mul(&pb.inverse().expect("basis"));
    let mut avg = FpMatrix::zero(p, c, c);
    for h in &actions {
        avg = avg.add(&h.mul(&pi0).mul(&h.inverse().expect("invertible")));
    }
    let inv_count = p.inv(p.reduce(actions.len() as u32));
    let pi = avg.scale(inv_count);
    let line = kernel_basis(&pi);
    let dir = line.basis().into_iter().next().expect("invariant complement line");
    let a = lift.mul_vec(&dir);
    debug_assert!(!s.a0.contains_vector(&a));
    Ok((s.x(), s.translation(&a)))
}

/// A subgroup `W` or `W<(top, 1)>` of `S`, with `W` a subspace of `A`
/// normalized by `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SSubgroup {
    pub w: Subspace,
    pub top: Option<Vec<u8>>,
}

impl SSubgroup {
    pub fn in_a(w: Subspace) -> Self {
        SSubgroup { w, top: None }
    }

    pub fn with_top(w: Subspace, top: &[u8]) -> Self {
        let top = reduce_mod(&w, top);
        SSubgroup { w, top: Some(top) }
    }

    pub fn order_exponent(&self) -> usize {
        self.w.dim() + usize::from(self.top.is_some())
    }

    pub fn generators(&self, s: &SGroup) -> Vec<SElement> {
        let mut g: Vec<SElement> = self.w.basis().iter().map(|v| s.translation(v)).collect();
        if let Some(t) = &self.top {
            g.push(SElement { a: t.clone(), k: 1 });
        }
        g
    }

    pub fn contains(&self, s: &SGroup, e: &SElement) -> bool {
        match (&self.top, e.k) {
            (_, 0) => self.w.contains_vector(&e.a),
            (None, _) => false,
            (Some(t), k) => self.w.contains_vector(&sub(s.p, &e.a, &s.power_part(t, k))),
        }
    }

    pub fn elements(&self, s: &SGroup) -> Vec<SElement> {
        let ws = self.w.elements();
        let ks = if self.top.is_some() { s.p.value() as u8 } else { 1 };
        let mut out = Vec::with_capacity(ws.len() * ks as usize);
        for k in 0..ks {
            let base = self.top.as_ref().map(|t| s.power_part(t, k)).unwrap_or_else(|| vec![0; s.n]);
            for w in &ws {
                out.push(SElement { a: add(s.p, w, &base), k });
            }
        }
        out
    }

    /// The subgroup `g P g^-1`, for `g` normalizing `W`.
    pub fn conjugate(&self, s: &SGroup, g: &SElement) -> SSubgroup {
        let w = self.w.image_under(&s.u_pows[g.k as usize]);
        match &self.top {
            None => SSubgroup::in_a(w),
            Some(t) => {
                let c = s.conj(g, &SElement { a: t.clone(), k: 1 });
                SSubgroup::with_top(w, &c.a)
            }
        }
    }

    /// Whether `y^p = 1` for the top generator `y`.
    pub fn splits(&self, s: &SGroup) -> bool {
        self.top.as_ref().is_none_or(|t| s.sigma(t).iter().all(|&x| x == 0))
    }
}

/// The subgroups `H_i = Z<x a^i>` and `B_i = Z2<x a^i>`.
#[derive(Debug, Clone)]
pub struct HB {
    pub x: SElement,
    pub a: SElement,
    pub h: Vec<SSubgroup>,
    pub b: Vec<SSubgroup>,
    /// `A0`-coset index of each `H_i` (and `B_i`): the class label.
    pub class_labels: Vec<u8>,
    pub classes_distinct: bool,
    /// `Some(ok)` when the conjugation orbits were computed explicitly.
    pub orbit_check: Option<bool>,
}

/// The coefficient `c` with `top ≡ c·a (mod A0)`.
pub fn class_label(s: &SGroup, a: &[u8], top: &[u8]) -> u8 {
    let ann = s.a0.annihilator().basis().into_iter().next().expect("A0 is a hyperplane");
    let dot = |v: &[u8]| v.iter().zip(&ann).fold(0u8, |acc, (&x, &y)| s.p.add(acc, s.p.mul(x, y)));
    s.p.mul(dot(top), s.p.inv(dot(a)))
}

/// S-orbit of `W<(top,1)>` as canonical coset representatives modulo `W`.
fn orbit(s: &SGroup, w: &Subspace, top: &[u8]) -> BTreeSet<Vec<u8>> {
    let steps: Vec<Vec<u8>> = (0..s.n)
        .map(|j| {
            let mut e = vec![0; s.n];
            e[j] = 1;
            s.one_minus_u(&e)
        })
        .collect();
    let start = reduce_mod(w, top);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(b) = queue.pop_front() {
        let mut next: Vec<Vec<u8>> = steps.iter().map(|d| reduce_mod(w, &add(s.p, &b, d))).collect();
        next.push(reduce_mod(w, &s.u().mul_vec(&b)));
        for c in next {
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    seen
}

/// One representative per piece of an `E0` label such as `B_0∪H_*`; a starred
/// piece is represented by index 1.
pub fn e0_representatives(hb: &HB, label: &str) -> Option<Vec<(String, SSubgroup)>> {
    label
        .split('∪')
        .map(|piece| {
            let (kind, index) = piece.split_once('_')?;
            let i = if index == "*" { 1 } else { index.parse::<usize>().ok()? };
            let family = match kind {
                "H" => &hb.h,
                "B" => &hb.b,
                _ => return None,
            };
            Some((format!("{kind}_{i}"), family.get(i)?.clone()))
        })
        .collect()
}

pub fn hb_subgroups(s: &SGroup, x: &SElement, a: &SElement) -> HB {
    let p = s.p;
    let mut h = Vec::new();
    let mut b = Vec::new();
    let mut labels = Vec::new();
    for i in 0..p.value() {
        let y = s.mul(x, &s.pow(a, i));
        debug_assert_eq!(y.k, 1);
        h.push(SSubgroup::with_top(s.z.clone(), &y.a));
        b.push(SSubgroup::with_top(s.z2.clone(), &y.a));
        labels.push(class_label(s, &a.a, &y.a));
    }
    let distinct = labels.iter().collect::<BTreeSet<_>>().len() == labels.len();
    let small = s.sprime.dim() <= 20 && (p.value() as usize).pow(s.sprime.dim() as u32) <= ORBIT_LIMIT;
    let orbit_check = small.then(|| {
        [(&h, &s.z), (&b, &s.z2)].iter().all(|(family, w)| {
            family.iter().enumerate().all(|(i, pi)| {
                let o = orbit(s, w, pi.top.as_ref().expect("top"));
                family.iter().enumerate().all(|(j, pj)| o.contains(pj.top.as_ref().expect("top")) == (i == j))
            })
        })
    });
    HB { x: x.clone(), a: a.clone(), h, b, class_labels: labels, classes_distinct: distinct, orbit_check }
}

/// Lie-ring coordinates on a subgroup `P = W<(top,1)>` of class at most two.
struct LieCoords<'a> {
    s: &'a SGroup,
    w: Subspace,
    top: Vec<u8>,
    half: u8,
}

impl<'a> LieCoords<'a> {
    fn new(s: &'a SGroup, p_sub: &SSubgroup) -> Self {
        LieCoords { s, w: p_sub.w.clone(), top: p_sub.top.clone().expect("top"), half: s.p.inv(2) }
    }

    fn dim(&self) -> usize {
        self.w.dim() + 1
    }

    fn log(&self, e: &SElement) -> Vec<u8> {
        let p = self.s.p;
        let w = sub(p, &e.a, &self.s.power_part(&self.top, e.k));
        let corr = scale(p, p.mul(e.k, self.half), &self.s.one_minus_u(&w));
        let mut c = self.w.coordinates(&add(p, &w, &corr)).expect("element of P");
        c.push(e.k);
        c
    }

    fn exp(&self, c: &[u8]) -> SElement {
        let p = self.s.p;
        let k = c[self.w.dim()];
        let wp = self
            .w
            .basis()
            .iter()
            .zip(c)
            .fold(vec![0; self.s.n], |acc, (b, &x)| add(p, &acc, &scale(p, x, b)));
        let corr = scale(p, p.mul(k, self.half), &self.s.one_minus_u(&wp));
        let w = sub(p, &wp, &corr);
        SElement { a: add(p, &w, &self.s.power_part(&self.top, k)), k }
    }

    /// Lie coordinates of a vector of `A` lying in `W`.
    fn of_vector(&self, v: &[u8]) -> Vec<u8> {
        self.log(&self.s.translation(v))
    }

    fn matrix(&self, f: impl Fn(&SElement) -> SElement) -> FpMatrix {
        let d = self.dim();
        let cols: Vec<Vec<u8>> = (0..d)
            .map(|j| {
                let mut e = vec![0; d];
                e[j] = 1;
                self.log(&f(&self.exp(&e)))
            })
            .collect();
        FpMatrix::from_columns(self.s.p, d, &cols)
    }
}

/// The automorphism `(a, k) -> (g a, r k)` of `S` for `g` with `g u g^-1 = u^r`.
fn alpha(s: &SGroup, g: &FpMatrix, r: u8, e: &SElement) -> SElement {
    SElement { a: g.mul_vec(&e.a), k: s.p.mul(r, e.k) }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ThetaReport {
    pub kind: &'static str,
    pub p_order_exponent: usize,
    pub p_star_dim: usize,
    pub theta_order: usize,
    pub theta0_order: usize,
    pub inn_order: usize,
    pub aut_s_order: usize,
    pub lambda_order: usize,
    pub o_pprime_order: usize,
    /// `Aut_S(P)` is a Sylow `p`-subgroup of `Θ`.
    pub sylow: bool,
    /// `O^{p'}(Θ)/Inn(P)` has order `|SL_2(p)|`.
    pub sl2_quotient: bool,
    /// `[α, Z] ≤ Z0` on `N_{O^{p'}(Θ)}(Aut_S(P))`.
    pub z_condition: bool,
    /// `N_Θ(Aut_S(P))` equals the restrictions of `N_{Aut_F(S)}(P)`.
    pub normalizer_matches: bool,
}

impl ThetaReport {
    pub fn passes(&self) -> bool {
        self.sylow && self.sl2_quotient && self.z_condition && self.normalizer_matches
    }
}

/// `Θ_P` with the groups used to certify it, all acting on the Lie ring of `P`.
#[derive(Debug, Clone)]
pub struct ThetaData {
    pub report: ThetaReport,
    pub theta: MatGroup,
    pub aut_s: MatGroup,
    pub inn: MatGroup,
}

fn sl2_generators(p: Prime) -> [FpMatrix; 2] {
    [
        FpMatrix::from_rows(p, &[[1, 1], [0, 1]]).expect("2x2"),
        FpMatrix::from_rows(p, &[[1, 0], [1, 1]]).expect("2x2"),
    ]
}

/// Builds `Θ_P` for `P` in `calh ∪ calb` and checks its four defining properties.
pub fn theta_witness(s: &SGroup, syl: &SylowData, p_sub: &SSubgroup) -> Result<ThetaData, SGroupError> {
    let p = s.p;
    let (kind, t) = if p_sub.w == s.z {
        ("H", -1)
    } else if p_sub.w == s.z2 {
        ("B", 0)
    } else {
        return Err(SGroupError::NotInHB);
    };
    let top = p_sub.top.clone().ok_or(SGroupError::NotInHB)?;
    if !p_sub.splits(s) {
        return Err(SGroupError::SplitFailed);
    }
    let lie = LieCoords::new(s, p_sub);
    let d = lie.dim();
    let n = s.n;

    // N_A(P) = { c : (1-u)c in W }
    let one_minus_u = FpMatrix::identity(p, n).sub(s.u());
    let na = preimage(&one_minus_u, &p_sub.w);
    let conj_by = |g: SElement| lie.matrix(move |e| s.conj(&g, e));
    let y = SElement { a: top.clone(), k: 1 };

    let mut aut_s_gens: Vec<FpMatrix> = na.basis().iter().map(|c| conj_by(s.translation(c))).collect();
    aut_s_gens.push(conj_by(y.clone()));
    let mut inn_gens: Vec<FpMatrix> = p_sub.w.basis().iter().map(|c| conj_by(s.translation(c))).collect();
    inn_gens.push(conj_by(y.clone()));

    // restrictions of N_{Aut_F(S)}(P): c_a ∘ α_g with the translation solving for P
    let mut system_cols: Vec<Vec<u8>> = (0..n).map(|j| one_minus_u.column(j)).collect();
    system_cols.extend(p_sub.w.basis());
    let system = FpMatrix::from_columns(p, n, &system_cols);
    let z_basis = s.z.basis();
    let mut lambda_gens = aut_s_gens.clone();
    let mut seen: HashSet<Vec<u8>> = lambda_gens.iter().map(|m| m.data().to_vec()).collect();
    let mut mu_vals = Vec::new();
    let mut alpha_for = None;
    let rho = p.primitive_root() as u8;
    let target = (rho, if t == 0 { 1 } else { p.inv(rho) });
    for g in syl.normalizer.elements()?.matrices() {
        let r = syl.conjugation_exponent(&g).expect("normalizer element");
        if p_sub.w.image_under(&g) != p_sub.w {
            continue;
        }
        let moved = s.pow(&alpha(s, &g, r, &y), p.inv(r) as u32);
        let rhs = sub(p, &top, &moved.a);
        let Some(sol) = gfp::solve(&system, &rhs)? else { continue };
        let c = s.translation(&sol[..n]);
        let m = lie.matrix(|e| s.conj(&c, &alpha(s, &g, r, e)));
        let in_gvee = z_basis.iter().all(|z| s.z0.contains_vector(&sub(p, &g.mul_vec(z), z)));
        if in_gvee {
            let zv = s.z0.basis().remove(0);
            let sc = gfp::scalar_on_quotient(&g, &s.z0, &Subspace::zero(p, n)).expect("g preserves Z0");
            debug_assert_eq!(g.mul_vec(&zv), scale(p, sc, &zv));
            mu_vals.push((r, sc));
            if (r, sc) == target && alpha_for.is_none() {
                alpha_for = Some(m.clone());
            }
        }
        if seen.insert(m.data().to_vec()) {
            lambda_gens.push(m);
        }
    }
    let mu_img = DeltaSubgroup::generated(p, &mu_vals);
    if !mu_img.contains(&DeltaSubgroup::diagonal(p, t)) {
        return Err(SGroupError::MuTooSmall { t });
    }
    let alpha_m = alpha_for.ok_or(SGroupError::MuTooSmall { t })?;

    let z0_lie = lie.of_vector(&s.z0.basis()[0]);
    let moved = gfp::image_basis(&alpha_m.minus_identity());
    let (p_star, frame) = if t == -1 {
        let p_star = moved;
        let z_star = kernel_basis(&alpha_m.minus_identity());
        let y_star = p_star.vector_outside(&Subspace::span(p, d, &[z0_lie.clone()])).ok_or(SGroupError::NotInHB)?;
        let mut cols = vec![z0_lie.clone(), y_star];
        cols.extend(z_star.basis());
        (p_star, cols)
    } else {
        let p_star = moved.sum(&Subspace::span(p, d, &[z0_lie.clone()]));
        let mut acc = Subspace::span(p, d, &[z0_lie.clone()]);
        let mut cols = Vec::new();
        for v in p_star.basis() {
            if !acc.contains_vector(&v) {
                acc = acc.sum(&Subspace::span(p, d, &[v.clone()]));
                cols.push(v);
            }
        }
        cols.extend(s.z.basis().iter().map(|z| lie.of_vector(z)));
        (p_star, cols)
    };
    let frame_m = FpMatrix::from_columns(p, d, &frame);
    let frame_inv = frame_m.inverse().ok_or(SGroupError::NotInHB)?;
    let mut theta0_gens: Vec<FpMatrix> = sl2_generators(p)
        .iter()
        .map(|m| frame_m.mul(&m.direct_sum(&FpMatrix::identity(p, d - 2))).mul(&frame_inv))
        .collect();
    if t == 0 {
        theta0_gens.extend(inn_gens.iter().cloned());
    }

    let theta0 = MatGroup::new(p, d, theta0_gens.clone())?;
    let lambda = MatGroup::new(p, d, lambda_gens.clone())?;
    let mut all = lambda_gens.clone();
    all.extend(theta0_gens);
    let theta = MatGroup::new(p, d, all)?;
    let aut_s = theta.subgroup(aut_s_gens.clone())?;
    let inn = theta.subgroup(inn_gens)?;
    let pv = p.value() as usize;

    let theta_order = theta.order()?;
    let aut_s_order = aut_s.order()?;
    let inn_order = inn.order()?;
    let sylow = aut_s.is_subgroup_of(&theta)? && aut_s_order == inn_order * pv && (theta_order / aut_s_order) % pv != 0;
    let o = grp::normal_closure(&theta, &aut_s_gens)?;
    let o_order = o.order()?;
    let sl2_quotient = o_order == inn_order * pv * (pv * pv - 1);
    let n_o = grp::normalizer_in(&o, &aut_s)?;
    let z_lie: Vec<Vec<u8>> = s.z.basis().iter().map(|z| lie.of_vector(z)).collect();
    let z0_span = Subspace::span(p, d, &[z0_lie]);
    let z_condition = n_o
        .elements()?
        .matrices()
        .all(|m| z_lie.iter().all(|z| z0_span.contains_vector(&sub(p, &m.mul_vec(z), z))));
    let n_theta = grp::normalizer_in(&theta, &aut_s)?;
    let lambda_order = lambda.order()?;
    let normalizer_matches = lambda.is_subgroup_of(&n_theta)? && n_theta.order()? == lambda_order;

    let report = ThetaReport {
        kind,
        p_order_exponent: d,
        p_star_dim: p_star.dim(),
        theta_order,
        theta0_order: theta0.order()?,
        inn_order,
        aut_s_order,
        lambda_order,
        o_pprime_order: o_order,
        sylow,
        sl2_quotient,
        z_condition,
        normalizer_matches,
    };
    Ok(ThetaData { report, theta, aut_s, inn })
}

/// `Γ = A ⋊ G` as affine matrices.
pub fn gamma_group(g: &MatGroup) -> Result<MatGroup, SGroupError> {
    let p = g.prime();
    let n = g.dim();
    let zero = vec![0u8; n];
    let mut gens: Vec<FpMatrix> = g.generators().iter().map(|m| affine(m, &zero)).collect();
    for j in 0..n {
        let mut e = vec![0u8; n];
        e[j] = 1;
        gens.push(affine(&FpMatrix::identity(p, n), &e));
    }
    Ok(MatGroup::new(p, n + 1, gens)?.with_cap(g.cap()))
}

fn p_part(mut k: usize, p: usize) -> usize {
    let mut out = 1;
    while k % p == 0 {
        k /= p;
        out *= p;
    }
    out
}

/// Whether `Z(Q)` is a Sylow `p`-subgroup of `C_Γ(Q)`.
pub fn is_centric(s: &SGroup, gamma: &MatGroup, q: &SSubgroup) -> Result<bool, SGroupError> {
    let gens: Vec<FpMatrix> = q.generators(s).iter().map(|e| s.affine(e)).collect();
    let centralizer = gamma
        .elements()?
        .matrices()
        .filter(|c| gens.iter().all(|x| c.mul(x) == x.mul(c)))
        .count();
    let qg = q.generators(s);
    let center = q
        .elements(s)
        .into_iter()
        .filter(|e| qg.iter().all(|x| s.mul(e, x) == s.mul(x, e)))
        .count();
    Ok(p_part(centralizer, s.p.value() as usize) == center)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Step2Report {
    pub gamma_order: usize,
    /// No `Q_i` is `Γ`-conjugate into `Q_j` for `i != j`.
    pub pairwise_nonconjugate: bool,
    pub centric: Vec<bool>,
    /// `Out_S(Q_i)` has order `p` and is not normal in `Θ_i/Inn(Q_i)`.
    pub strongly_embedded: Vec<bool>,
}

impl Step2Report {
    pub fn passes(&self) -> bool {
        self.pairwise_nonconjugate && self.centric.iter().all(|&b| b) && self.strongly_embedded.iter().all(|&b| b)
    }
}

pub fn step2_conditions(
    s: &SGroup,
    qs: &[SSubgroup],
    thetas: &[ThetaData],
    g: &MatGroup,
) -> Result<Step2Report, SGroupError> {
    let gamma = gamma_group(g)?;
    let ge = gamma.elements()?;
    let mut pairwise = true;
    let keysets: Vec<HashSet<Vec<u8>>> = qs
        .iter()
        .map(|q| q.elements(s).iter().map(|e| s.affine(e).data().to_vec()).collect())
        .collect();
    'outer: for (i, qi) in qs.iter().enumerate() {
        let gens: Vec<FpMatrix> = qi.generators(s).iter().map(|e| s.affine(e)).collect();
        for (j, kj) in keysets.iter().enumerate() {
            if i == j || keysets[i].len() > kj.len() {
                continue;
            }
            for c in ge.matrices() {
                let ci = c.inverse().expect("group element");
                if gens.iter().all(|x| kj.contains(c.mul(x).mul(&ci).data())) {
                    pairwise = false;
                    break 'outer;
                }
            }
        }
    }
    let centric = qs.iter().map(|q| is_centric(s, &gamma, q)).collect::<Result<Vec<_>, _>>()?;
    let pv = s.p.value() as usize;
    let strongly_embedded = thetas
        .iter()
        .map(|t| -> Result<bool, SGroupError> {
            let out_order_p = t.aut_s.order()? == t.inn.order()? * pv;
            let normal = grp::normalizer_in(&t.theta, &t.aut_s)?.order()? == t.theta.order()?;
            Ok(out_order_p && !normal)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Step2Report { gamma_order: ge.len(), pairwise_nonconjugate: pairwise, centric, strongly_embedded })
}

/// Whether `A` is the only abelian subgroup of index `p`, by scanning every
/// maximal subgroup. `Φ(S) = S'` because `Σ u^i = (u-1)^{p-1}`.
pub fn unique_abelian_maximal(s: &SGroup) -> Result<bool, SGroupError> {
    let p = s.p;
    let pv = p.value() as usize;
    if pv.checked_pow(s.order_exponent() as u32).is_none_or(|o| o > MAXIMAL_SCAN_LIMIT) {
        return Err(SGroupError::TooLarge { p: p.value(), exp: s.order_exponent() });
    }
    let comp = s.sprime.complement_basis();
    let c = comp.len();
    let lift = |v: &[u8]| -> SElement {
        let a = comp.iter().zip(v).fold(vec![0; s.n], |acc, (b, &x)| add(p, &acc, &scale(p, x, b)));
        SElement { a, k: v[c] }
    };
    let frattini: Vec<SElement> = s.sprime.basis().iter().map(|v| s.translation(v)).collect();
    let mut abelian = 0usize;
    // functionals on S/Φ(S) = F_p^{c+1}, normalized by a leading 1
    let total = pv.pow(c as u32 + 1);
    for code in 1..total {
        let f: Vec<u8> = (0..=c).map(|i| ((code / pv.pow(i as u32)) % pv) as u8).collect();
        let lead = f.iter().rposition(|&x| x != 0).expect("nonzero");
        if f[lead] != 1 {
            continue;
        }
        let fm = FpMatrix::from_data(p, 1, c + 1, f.clone());
        let mut gens: Vec<SElement> = kernel_basis(&fm).basis().iter().map(|v| lift(v)).collect();
        gens.extend(frattini.iter().cloned());
        let commutes = gens.iter().all(|x| gens.iter().all(|y| s.mul(x, y) == s.mul(y, x)));
        if commutes {
            abelian += 1;
        }
    }
    Ok(abelian == 1)
}

/// Checks, for every `g` in `N_G(U)`, that `α_g` fixes every class `calh_j`
/// when `μ(g) ∈ Δ_m` and moves every `calh_j` with `j != 0` otherwise.
pub fn class_action_test(s: &SGroup, syl: &SylowData, hb: &HB, m: usize) -> Result<bool, SGroupError> {
    let p = s.p;
    let n = s.n;
    let delta_m = DeltaSubgroup::diagonal(p, m as i64);
    let zv = s.z0.basis().remove(0);
    for g in syl.normalizer.elements()?.matrices() {
        let r = syl.conjugation_exponent(&g).expect("normalizer element");
        let Some(sc) = gfp::scalar_on_quotient(&g, &s.z0, &Subspace::zero(p, n)) else {
            return Ok(false);
        };
        debug_assert_eq!(g.mul_vec(&zv), scale(p, sc, &zv));
        let fixes_all = delta_m.contains_element((r, sc));
        for (j, hj) in hb.h.iter().enumerate() {
            let y = SElement { a: hj.top.clone().expect("top"), k: 1 };
            let image = s.pow(&alpha(s, &g, r, &y), p.inv(r) as u32);
            let label = class_label(s, &hb.a.a, &image.a);
            let same = label == hb.class_labels[j];
            if (j == 0 || fixes_all) != same {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::class_gg;
    use crate::modrep::sym_power_matrix;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    /// `GL_2(5)` on `Sym^2`, optionally with all scalars.
    fn sym2(scalars: bool) -> FpModule {
        let p = f(5);
        let gl = [
            FpMatrix::from_rows(p, &[[2, 0], [0, 1]]).unwrap(),
            FpMatrix::from_rows(p, &[[1, 1], [0, 1]]).unwrap(),
            FpMatrix::from_rows(p, &[[0, 4], [1, 0]]).unwrap(),
        ];
        let mut gens: Vec<FpMatrix> = gl.iter().map(|g| sym_power_matrix(g, 2)).collect();
        if scalars {
            gens.push(FpMatrix::scalar(p, 3, 2));
        }
        FpModule::from_generators(p, 3, gens).unwrap()
    }

    fn setup(v: &FpModule) -> (SylowData, SGroup, HB) {
        let syl = class_gg(v.group()).unwrap().sylow().unwrap().clone();
        let s = build_s(v, &syl).unwrap();
        let (x, a) = choose_x_a(&s, &syl).unwrap();
        let hb = hb_subgroups(&s, &x, &a);
        (syl, s, hb)
    }

    #[test]
    fn structure_of_dim3_instance() {
        let v = sym2(true);
        assert_eq!(v.group().order().unwrap(), 480);
        let (syl, s, hb) = setup(&v);
        let st = s.structure();
        assert_eq!(st.order_exponent, 4);
        assert_eq!((st.dim_z, st.dim_sprime, st.dim_z2), (1, 2, 2));
        assert!(st.all_hold());
        assert!(!s.a0.contains_vector(&hb.a.a));
        let span = s.sprime.sum(&Subspace::span(s.prime(), 3, &[hb.a.a.clone()]));
        assert!(syl.normalizer.generators().iter().all(|g| span.is_invariant(g)));
        assert_eq!(hb.h[0].order_exponent(), 2);
        assert_eq!(hb.b[0].order_exponent(), 3);
        assert!(hb.classes_distinct);
        assert_eq!(hb.orbit_check, Some(true));
        assert!(unique_abelian_maximal(&s).unwrap());
        assert!(s.sigma(&hb.a.a).iter().all(|&x| x == 0));
        assert!(class_action_test(&s, &syl, &hb, 3).unwrap());
    }

    #[test]
    fn theta_for_h0_and_b0() {
        let v = sym2(true);
        let (syl, s, hb) = setup(&v);
        let th = theta_witness(&s, &syl, &hb.h[0]).unwrap();
        assert_eq!(th.report.theta0_order, 120);
        assert_eq!(th.report.inn_order, 1);
        assert!(th.report.passes(), "{:?}", th.report);
        let tb = theta_witness(&s, &syl, &hb.b[0]).unwrap();
        assert_eq!(tb.report.inn_order, 25);
        assert_eq!(tb.report.theta0_order / tb.report.inn_order, 120);
        assert!(tb.report.passes(), "{:?}", tb.report);
    }

    #[test]
    fn lie_matrices_are_group_automorphisms() {
        let v = sym2(true);
        let (syl, s, hb) = setup(&v);
        let tb = theta_witness(&s, &syl, &hb.b[0]).unwrap();
        let lie = LieCoords::new(&s, &hb.b[0]);
        let elems = hb.b[0].elements(&s);
        for m in tb.theta.generators() {
            let phi = |e: &SElement| lie.exp(&m.mul_vec(&lie.log(e)));
            for x in elems.iter().step_by(7) {
                for y in elems.iter().step_by(11) {
                    assert_eq!(phi(&s.mul(x, y)), s.mul(&phi(x), &phi(y)));
                }
            }
        }
    }

    #[test]
    fn step2_on_index_two_instance() {
        let v = sym2(false);
        assert_eq!(v.group().order().unwrap(), 240);
        let (syl, s, hb) = setup(&v);
        assert!(matches!(theta_witness(&s, &syl, &hb.h[0]), Err(SGroupError::MuTooSmall { t: -1 })));
        let tb = theta_witness(&s, &syl, &hb.b[0]).unwrap();
        assert!(tb.report.passes());
        let r = step2_conditions(&s, &[hb.b[0].clone()], &[tb.clone()], v.group()).unwrap();
        assert_eq!(r.gamma_order, 125 * 240);
        assert!(r.passes(), "{r:?}");
        let dup = step2_conditions(&s, &[hb.b[0].clone(), hb.b[0].clone()], &[tb.clone(), tb], v.group()).unwrap();
        assert!(!dup.pairwise_nonconjugate);
        let gamma = gamma_group(v.group()).unwrap();
        assert!(!is_centric(&s, &gamma, &SSubgroup::in_a(s.z.clone())).unwrap());
    }

    #[test]
    fn natural_module_has_many_abelian_maximals() {
        let p = f(5);
        let gens = vec![
            FpMatrix::from_rows(p, &[[1, 1], [0, 1]]).unwrap(),
            FpMatrix::from_rows(p, &[[0, 4], [1, 0]]).unwrap(),
        ];
        let v = FpModule::from_generators(p, 2, gens).unwrap();
        let syl = class_gg(v.group()).unwrap().sylow().unwrap().clone();
        let s = build_s(&v, &syl).unwrap();
        assert_eq!(s.sprime.dim(), 1);
        assert!(!unique_abelian_maximal(&s).unwrap());
    }

    #[test]
    fn trivial_action_is_rejected() {
        let p = f(5);
        let v = FpModule::from_generators(p, 2, vec![FpMatrix::identity(p, 2)]).unwrap();
        let syl = grp::sylow_data(v.group(), FpMatrix::identity(p, 2)).unwrap();
        assert!(matches!(build_s(&v, &syl), Err(SGroupError::TrivialAction)));
    }
}
