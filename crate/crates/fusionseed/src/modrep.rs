//! Modules over `F_pG`: Jordan profiles, minimal activity, the canonical
//! subspaces attached to a Sylow subgroup of order `p`, the commutator
//! filtration, standard constructions, and splitting into indecomposables.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gfp::{image_basis, kernel_basis, scalar_on_quotient, FpMatrix, Prime, Subspace};
use crate::grp::{o_pprime, GrpError, MatGroup, SylowData};

/// Largest dimension accepted by [`split_summands`].
pub const MAX_SPLIT_DIM: usize = 64;

/// Random endomorphisms tried before an endomorphism algebra is declared local.
pub const SPLIT_ATTEMPTS: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModError {
    #[error("element is not unipotent of order dividing p")]
    NotUnipotentOfOrderP,
    #[error("filtration needs dim(Z0) = 1, found {0}")]
    FiltrationHypothesisFailed(usize),
    #[error("dimension {0} too large for splitting")]
    DimTooLarge(usize),
    #[error("modules are incompatible: {0}")]
    Incompatible(String),
    #[error(transparent)]
    Grp(#[from] GrpError),
}

/// `V = F_p^n` with `G` acting through its own matrices.
#[derive(Debug, Clone)]
pub struct FpModule {
    group: MatGroup,
}

impl FpModule {
    pub fn new(group: MatGroup) -> Self {
        assert!(group.dim() >= 1, "module of dimension 0");
        FpModule { group }
    }

    /// Module for the group generated by `gens`.
    pub fn from_generators(p: Prime, dim: usize, gens: Vec<FpMatrix>) -> Result<Self, ModError> {
        Ok(FpModule::new(MatGroup::new(p, dim, gens)?))
    }

    pub fn prime(&self) -> Prime {
        self.group.prime()
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn group(&self) -> &MatGroup {
        &self.group
    }

    pub fn generators(&self) -> &[FpMatrix] {
        self.group.generators()
    }
}

/// Jordan block sizes of a unipotent `x` with `x^p = 1`, largest first.
pub fn jordan_profile(v: &FpModule, x: &FpMatrix) -> Result<Vec<usize>, ModError> {
    let p = v.prime().value() as u64;
    if !x.pow(p).is_identity() {
        return Err(ModError::NotUnipotentOfOrderP);
    }
    let n = v.dim();
    let y = x.minus_identity();
    let mut ranks = vec![n];
    let mut power = FpMatrix::identity(v.prime(), n);
    while *ranks.last().unwrap() > 0 {
        power = power.mul(&y);
        ranks.push(power.rank());
    }
    // blocks of size >= k+1 number r_k - r_{k+1}; exactly k+1 is that minus the next count
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in (0..at_least.len()).rev() {
        let exact = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k + 1, exact));
    }
    Ok(sizes)
}

pub fn is_minimally_active(v: &FpModule, syl: &SylowData) -> Result<bool, ModError> {
    Ok(jordan_profile(v, &syl.u)?.iter().filter(|&&s| s > 1).count() <= 1)
}

/// `Z = C_V(U)`, `[U,V]`, `Z0 = Z ∩ [U,V]`, `A0 = Z + [U,V]` and `m = dim(V/Z) + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalSubspaces {
    pub z: Subspace,
    pub commutator: Subspace,
    pub z0: Subspace,
    pub a0: Subspace,
    pub m: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SubspaceDims {
    pub z: usize,
    pub commutator: usize,
    pub z0: usize,
    pub a0: usize,
    pub m: usize,
}

impl CanonicalSubspaces {
    pub fn dims(&self) -> SubspaceDims {
        SubspaceDims {
            z: self.z.dim(),
            commutator: self.commutator.dim(),
            z0: self.z0.dim(),
            a0: self.a0.dim(),
            m: self.m,
        }
    }
}

pub fn canonical_subspaces(v: &FpModule, syl: &SylowData) -> CanonicalSubspaces {
    let y = syl.u.minus_identity();
    let z = kernel_basis(&y);
    let commutator = image_basis(&y);
    let z0 = z.intersect(&commutator);
    let a0 = z.sum(&commutator);
    let m = v.dim() - z.dim() + 1;
    CanonicalSubspaces { z, commutator, z0, a0, m }
}

/// Common fixed space of the generators of `h`.
pub fn fixed_space(v: &FpModule, h: &MatGroup) -> Subspace {
    let mut acc = Subspace::full(v.prime(), v.dim());
    for g in h.generators() {
        acc = acc.intersect(&kernel_basis(&g.minus_identity()));
    }
    acc
}

/// `[h, V]`: the span of the images of `g - 1` over the generators of `h`.
pub fn commutator_space(v: &FpModule, h: &MatGroup) -> Subspace {
    let mut acc = Subspace::zero(v.prime(), v.dim());
    for g in h.generators() {
        acc = acc.sum(&image_basis(&g.minus_identity()));
    }
    acc
}

/// Indecomposability. Minimally active modules with nontrivial `U`-action
/// use the fixed-point test on `O^{p'}(G)`; anything else is split.
pub fn is_indecomposable(v: &FpModule, syl: &SylowData) -> Result<bool, ModError> {
    if !syl.u.is_identity() && is_minimally_active(v, syl)? {
        let o = o_pprime(v.group(), syl)?;
        return Ok(commutator_space(v, &o).contains(&fixed_space(v, &o)));
    }
    Ok(split_summands(v, 1)?.len() == 1)
}

/// One checked instance of the scalar law on the commutator filtration.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ScalarLaw {
    /// Exponent with `g u g^-1 = u^r`.
    pub r: u8,
    /// Scalar of `g` on `V / A0`.
    pub t: u8,
    /// Scalar of `g` on each `W_i / W_{i+1}`, `i = 1..m-1`.
    pub quotient_scalars: Vec<Option<u8>>,
    pub holds: bool,
}

/// `W_1 = [U,V] > W_2 = [U,W_1] > ... > 0`.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub spaces: Vec<Subspace>,
    pub laws: Vec<ScalarLaw>,
}

impl Filtration {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    pub fn quotients_are_lines(&self) -> bool {
        self.spaces.windows(2).all(|w| w[0].dim() == w[1].dim() + 1)
    }
}

/// The commutator filtration, checking that each `g` in `normalizing` acts on
/// `W_i/W_{i+1}` as `t r^i`.
pub fn w_filtration(
    v: &FpModule,
    syl: &SylowData,
    normalizing: &[FpMatrix],
) -> Result<Filtration, ModError> {
    let cs = canonical_subspaces(v, syl);
    if cs.z0.dim() != 1 {
        return Err(ModError::FiltrationHypothesisFailed(cs.z0.dim()));
    }
    let p = v.prime();
    let y = syl.u.minus_identity();
    let mut spaces = vec![cs.commutator.clone()];
    while !spaces.last().unwrap().is_zero() {
        let next = spaces.last().unwrap().image_under(&y);
        spaces.push(next);
    }
    let full = Subspace::full(p, v.dim());
    let mut laws = Vec::new();
    for g in normalizing {
        let Some(r) = syl.conjugation_exponent(g) else {
            return Err(ModError::Incompatible("element does not normalize U".into()));
        };
        let t = scalar_on_quotient(g, &full, &cs.a0);
        let quotient_scalars: Vec<Option<u8>> =
            spaces.windows(2).map(|w| scalar_on_quotient(g, &w[0], &w[1])).collect();
        let holds = match t {
            Some(t) => quotient_scalars
                .iter()
                .enumerate()
                .all(|(k, &s)| s == Some(p.mul(t, p.pow(r, k as u64 + 1)))),
            None => false,
        };
        laws.push(ScalarLaw { r, t: t.unwrap_or(0), quotient_scalars, holds });
    }
    Ok(Filtration { spaces, laws })
}

/// Dual module: `g -> (g^-1)^T`.
pub fn dual(v: &FpModule) -> FpModule {
    let gens = v.generators().iter().map(|g| g.inverse().expect("invertible").transpose()).collect();
    FpModule::new(MatGroup::new(v.prime(), v.dim(), gens).expect("dual generators").with_cap(v.group().cap()))
}

/// Tensor product of two modules for the same generating tuple.
pub fn tensor(v: &FpModule, w: &FpModule) -> Result<FpModule, ModError> {
    if v.prime() != w.prime() || v.generators().len() != w.generators().len() {
        return Err(ModError::Incompatible("tensor needs matching primes and generator lists".into()));
    }
    let gens = v.generators().iter().zip(w.generators()).map(|(a, b)| a.kron(b)).collect();
    Ok(FpModule::from_generators(v.prime(), v.dim() * w.dim(), gens)?)
}

/// Exponent vectors of degree `k` in `n` variables, lexicographically descending.
pub fn monomials(n: usize, k: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n - 1 {
            prefix.push(k as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e as u8);
            rec(n, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// Matrix of `g` on degree-`k` polynomials in the basis vectors, basis ordered as [`monomials`].
pub fn sym_power_matrix(g: &FpMatrix, k: usize) -> FpMatrix {
    let p = g.prime();
    let n = g.rows();
    let basis = monomials(n, k);
    let index: BTreeMap<&Vec<u8>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = FpMatrix::zero(p, basis.len(), basis.len());
    for (col, alpha) in basis.iter().enumerate() {
        let mut poly: BTreeMap<Vec<u8>, u8> = BTreeMap::new();
        poly.insert(vec![0; n], 1);
        for (j, &e) in alpha.iter().enumerate() {
            for _ in 0..e {
                let mut next: BTreeMap<Vec<u8>, u8> = BTreeMap::new();
                for (mono, &c) in &poly {
                    for i in 0..n {
                        let a = g.get(i, j);
                        if a == 0 {
                            continue;
                        }
                        let mut m2 = mono.clone();
                        m2[i] += 1;
                        let slot = next.entry(m2).or_insert(0);
                        *slot = p.add(*slot, p.mul(c, a));
                    }
                }
                poly = next;
            }
        }
        for (mono, c) in poly {
            if c != 0 {
                out.set(index[&mono], col, c);
            }
        }
    }
    out
}

/// `k`-th symmetric power, `k <= p - 1`.
pub fn sym_power(v: &FpModule, k: usize) -> Result<FpModule, ModError> {
    if k as u32 >= v.prime().value() {
        return Err(ModError::Incompatible(format!("symmetric power {k} needs k <= p-1")));
    }
    let gens: Vec<FpMatrix> = v.generators().iter().map(|g| sym_power_matrix(g, k)).collect();
    let dim = monomials(v.dim(), k).len();
    Ok(FpModule::from_generators(v.prime(), dim, gens)?)
}

/// Restriction to a subgroup given by matrices of the same module.
pub fn restrict(v: &FpModule, h: &MatGroup) -> Result<FpModule, ModError> {
    if h.prime() != v.prime() || h.dim() != v.dim() {
        return Err(ModError::Incompatible("subgroup acts on a different space".into()));
    }
    Ok(FpModule::new(h.clone()))
}

/// Matrix of `g` on an invariant subspace `w`, in the canonical basis of `w`.
pub fn action_on_subspace(g: &FpMatrix, w: &Subspace) -> FpMatrix {
    let k = w.dim();
    let cols: Vec<Vec<u8>> = w
        .basis()
        .iter()
        .map(|b| w.coordinates(&g.mul_vec(b)).expect("subspace is invariant"))
        .collect();
    FpMatrix::from_columns(g.prime(), k, &cols)
}

/// Submodule on an invariant subspace.
pub fn submodule(v: &FpModule, w: &Subspace) -> Result<FpModule, ModError> {
    let gens = v.generators().iter().map(|g| action_on_subspace(g, w)).collect();
    Ok(FpModule::from_generators(v.prime(), w.dim(), gens)?)
}

/// Quotient module `V/w` for an invariant subspace `w`, on the standard complement basis.
pub fn quotient(v: &FpModule, w: &Subspace) -> Result<FpModule, ModError> {
    let p = v.prime();
    let comp = w.complement_basis();
    let q = comp.len();
    // coordinates modulo w: solve x = sum c_i comp_i + (element of w)
    let mut all = comp.clone();
    all.extend(w.basis());
    let basis = FpMatrix::from_columns(p, v.dim(), &all);
    let inv = basis.inverse().expect("complement is a basis");
    let gens = v
        .generators()
        .iter()
        .map(|g| {
            let cols: Vec<Vec<u8>> = comp.iter().map(|c| inv.mul_vec(&g.mul_vec(c))[..q].to_vec()).collect();
            FpMatrix::from_columns(p, q, &cols)
        })
        .collect();
    Ok(FpModule::from_generators(p, q, gens)?)
}

/// Submodule spanned by the orbit of `vectors`.
pub fn spin(v: &FpModule, vectors: &[Vec<u8>]) -> Subspace {
    let p = v.prime();
    let mut space = Subspace::span(p, v.dim(), vectors);
    loop {
        let mut next = space.clone();
        for g in v.generators() {
            next = next.sum(&space.image_under(g));
        }
        if next == space {
            return space;
        }
        space = next;
    }
}

/// Basis of `End_G(V) = { e : e g = g e }`.
pub fn endomorphism_basis(v: &FpModule) -> Vec<FpMatrix> {
    let p = v.prime();
    let n = v.dim();
    let nn = n * n;
    // current solution space, as columns of unknown vectors in F_p^{n^2}
    let mut basis: Vec<Vec<u8>> = (0..nn)
        .map(|i| {
            let mut e = vec![0u8; nn];
            e[i] = 1;
            e
        })
        .collect();
    for g in v.generators() {
        if basis.is_empty() {
            break;
        }
        // constraint rows: (X g - g X)_{ab} for X ranging over the current basis
        let d = basis.len();
        let mut sys = FpMatrix::zero(p, nn, d);
        for (col, xv) in basis.iter().enumerate() {
            let x = FpMatrix::from_data(p, n, n, xv.clone());
            let c = x.mul(g).sub(&g.mul(&x));
            for (r, &val) in c.data().iter().enumerate() {
                sys.set(r, col, val);
            }
        }
        let ker = kernel_basis(&sys);
        basis = ker
            .basis()
            .iter()
            .map(|coef| {
                let mut out = vec![0u8; nn];
                for (k, &c) in coef.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (o, &b) in out.iter_mut().zip(&basis[k]) {
                        *o = p.add(*o, p.mul(c, b));
                    }
                }
                out
            })
            .collect();
    }
    let canon = Subspace::span(p, nn, &basis);
    canon.basis().into_iter().map(|d| FpMatrix::from_data(p, n, n, d)).collect()
}

/// An indecomposable summand with its inclusion `F_p^k -> V` (columns).
#[derive(Debug, Clone)]
pub struct Summand {
    pub module: FpModule,
    pub inclusion: FpMatrix,
}

impl Summand {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn image(&self) -> Subspace {
        image_basis(&self.inclusion)
    }
}

fn fitting_split(f: &FpMatrix) -> Option<(Subspace, Subspace)> {
    let n = f.rows();
    let mut power = f.clone();
    let mut e = 1;
    while e < n {
        power = power.mul(&power);
        e *= 2;
    }
    let r = power.rank();
    if r == 0 || r == n {
        return None;
    }
    Some((kernel_basis(&power), image_basis(&power)))
}

fn find_split(v: &FpModule, rng: &mut ChaCha8Rng) -> Option<(Subspace, Subspace)> {
    let basis = endomorphism_basis(v);
    if basis.len() <= 1 {
        return None;
    }
    let p = v.prime();
    let n = v.dim();
    let q = p.value() as u64;
    for _ in 0..SPLIT_ATTEMPTS {
        let mut e = FpMatrix::zero(p, n, n);
        for b in &basis {
            let c: u8 = rng.gen_range(0..q as u8);
            if c != 0 {
                e = e.add(&b.scale(c));
            }
        }
        // e, e^(p+1), e^(p^2+p+1) reach semisimple components over F_p, F_{p^2}, F_{p^3}
        let mut exps = vec![1u64, q + 1, q * q + q + 1];
        exps.dedup();
        for exp in exps {
            let h = e.pow(exp);
            for lambda in 0..q as u8 {
                let f = h.sub(&FpMatrix::scalar(p, n, lambda));
                if let Some(split) = fitting_split(&f) {
                    return Some(split);
                }
            }
        }
    }
    None
}

fn split_rec(v: &FpModule, incl: FpMatrix, rng: &mut ChaCha8Rng, out: &mut Vec<Summand>) -> Result<(), ModError> {
    match find_split(v, rng) {
        None => out.push(Summand { module: v.clone(), inclusion: incl }),
        Some((a, b)) => {
            for w in [a, b] {
                let sub = submodule(v, &w)?;
                let sub_incl = incl.mul(&w.column_matrix());
                split_rec(&sub, sub_incl, rng, out)?;
            }
        }
    }
    Ok(())
}

/// Splits `v` into indecomposable summands, using `seed` for the random endomorphisms.
pub fn split_summands(v: &FpModule, seed: u64) -> Result<Vec<Summand>, ModError> {
    if v.dim() > MAX_SPLIT_DIM {
        return Err(ModError::DimTooLarge(v.dim()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    split_rec(v, FpMatrix::identity(v.prime(), v.dim()), &mut rng, &mut out)?;
    out.sort_by(|a, b| (a.dim(), a.image().basis()).cmp(&(b.dim(), b.image().basis())));
    Ok(out)
}

/// Where the module sits among the three dimension regimes for indecomposable minimally active modules.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum DimBranch {
    /// `dim < p`: the restriction to `U` is one Jordan block.
    RestrictionIndecomposable,
    /// `dim = p`: free over `U`, projective.
    Projective,
    /// `dim > p`: trivial source, one free `U`-summand plus fixed points.
    TrivialSource,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DimScreen {
    pub dim: usize,
    pub branch: DimBranch,
    /// Whether the Jordan profile matches the branch.
    pub profile_consistent: bool,
    /// `a = dim - p` when `dim > p`.
    pub excess: Option<usize>,
    /// `a` divides `|N/U|`.
    pub divides_n_mod_u: Option<bool>,
    /// `a = 1` when `N/U` is abelian; `None` if `N/U` is not abelian.
    pub abelian_n_mod_u_forces_one: Option<bool>,
    /// `a` divides `|N/C|` when `C` is abelian.
    pub abelian_c_divides_automizer: Option<bool>,
    /// `a <= |C/U| - 1` when `C > U`.
    pub bounded_by_c_mod_u: Option<bool>,
    pub advisories: Vec<String>,
}

impl DimScreen {
    pub fn passes(&self) -> bool {
        self.profile_consistent
            && [
                self.divides_n_mod_u,
                self.abelian_n_mod_u_forces_one,
                self.abelian_c_divides_automizer,
                self.bounded_by_c_mod_u,
            ]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

fn is_abelian(g: &MatGroup) -> bool {
    let gens = g.generators();
    gens.iter().all(|a| gens.iter().all(|b| a.mul(b) == b.mul(a)))
}

/// Elementwise abelian check of `N/U`: commutators of generators lie in `U`.
fn quotient_is_abelian(n: &MatGroup, syl: &SylowData) -> bool {
    let gens = n.generators();
    gens.iter().all(|a| {
        gens.iter().all(|b| {
            let c = a.mul(b).mul(&b.mul(a).inverse().expect("invertible"));
            syl.powers().contains(&c)
        })
    })
}

/// Dimension screens for a faithful, indecomposable, minimally active module.
pub fn dim_screens(v: &FpModule, syl: &SylowData) -> Result<DimScreen, ModError> {
    let p = v.prime().value() as usize;
    let n = v.dim();
    let profile = jordan_profile(v, &syl.u)?;
    let (branch, profile_consistent) = if n < p {
        (DimBranch::RestrictionIndecomposable, profile == vec![n])
    } else if n == p {
        (DimBranch::Projective, profile == vec![p])
    } else {
        (DimBranch::TrivialSource, profile[0] == p && profile[1..].iter().all(|&s| s == 1))
    };
    let mut screen = DimScreen {
        dim: n,
        branch,
        profile_consistent,
        excess: None,
        divides_n_mod_u: None,
        abelian_n_mod_u_forces_one: None,
        abelian_c_divides_automizer: None,
        bounded_by_c_mod_u: None,
        advisories: Vec::new(),
    };
    if n > p {
        let a = n - p;
        let n_order = syl.normalizer.order()?;
        let c_order = syl.centralizer.order()?;
        screen.excess = Some(a);
        screen.divides_n_mod_u = Some((n_order / p) % a == 0);
        if quotient_is_abelian(&syl.normalizer, syl) {
            screen.abelian_n_mod_u_forces_one = Some(a == 1);
        }
        if is_abelian(&syl.centralizer) {
            screen.abelian_c_divides_automizer = Some(syl.automizer_order % a == 0);
        }
        if c_order > p {
            screen.bounded_by_c_mod_u = Some(a < c_order / p);
        }
    }
    if n + 2 == p {
        screen.advisories.push("dimension p-2: a self-dual simple module may have H^1 != 0".into());
    }
    Ok(screen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::class_gg;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn natural_sl2(p: Prime) -> FpModule {
        let u = FpMatrix::from_rows(p, &[[1, 1], [0, 1]]).unwrap();
        let w = FpMatrix::from_rows(p, &[[0, -1], [1, 0]]).unwrap();
        FpModule::from_generators(p, 2, vec![u, w]).unwrap()
    }

    fn perm_module(p: Prime, n: usize) -> FpModule {
        let cyc: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut tr: Vec<usize> = (0..n).collect();
        tr.swap(0, 1);
        FpModule::from_generators(p, n, vec![FpMatrix::permutation(p, &cyc), FpMatrix::permutation(p, &tr)]).unwrap()
    }

    fn sylow(v: &FpModule) -> SylowData {
        class_gg(v.group()).unwrap().sylow().unwrap().clone()
    }

    #[test]
    fn jordan_profiles() {
        let p = f(5);
        let v = perm_module(p, 5);
        assert_eq!(jordan_profile(&v, &FpMatrix::identity(p, 5)).unwrap(), vec![1; 5]);
        let cyc = FpMatrix::permutation(p, &[1, 2, 3, 4, 0]);
        assert_eq!(jordan_profile(&v, &cyc).unwrap(), vec![5]);
        let s3 = sym_power(&natural_sl2(p), 3).unwrap();
        assert_eq!(jordan_profile(&s3, &s3.generators()[0]).unwrap(), vec![4]);
        assert_eq!(
            jordan_profile(&v, &FpMatrix::scalar(p, 5, 2)),
            Err(ModError::NotUnipotentOfOrderP)
        );
    }

    #[test]
    fn canonical_subspaces_of_permutation_module() {
        let p = f(5);
        let v = perm_module(p, 5);
        let syl = sylow(&v);
        let cs = canonical_subspaces(&v, &syl);
        assert_eq!(cs.z, Subspace::span(p, 5, &[vec![1; 5]]));
        assert_eq!(cs.commutator.dim(), 4);
        assert_eq!(cs.z0, cs.z);
        assert_eq!(cs.m, 5);
        assert!(is_minimally_active(&v, &syl).unwrap());
        let f2 = w_filtration(&v, &syl, &[FpMatrix::identity(p, 5)]).unwrap();
        assert_eq!(f2.dims(), vec![4, 3, 2, 1, 0]);
        assert!(f2.laws[0].holds);
        assert_eq!((f2.laws[0].r, f2.laws[0].t), (1, 1));
    }

    #[test]
    fn filtration_scalars_on_affine_group() {
        // x -> 2x + b on F_5 as permutations: r = 2, and the law pins t
        let p = f(5);
        let cyc = FpMatrix::permutation(p, &[1, 2, 3, 4, 0]);
        let mult: Vec<usize> = (0..5).map(|i| (2 * i) % 5).collect();
        let g = FpMatrix::permutation(p, &mult);
        let v = FpModule::from_generators(p, 5, vec![cyc.clone(), g.clone()]).unwrap();
        let syl = crate::grp::sylow_data(v.group(), cyc).unwrap();
        let filt = w_filtration(&v, &syl, &[g.clone()]).unwrap();
        let law = &filt.laws[0];
        assert!(law.holds, "{law:?}");
        let t = law.t;
        let expect: Vec<Option<u8>> = (1..5).map(|i| Some(p.mul(t, p.pow(law.r, i)))).collect();
        assert_eq!(law.quotient_scalars, expect);
    }

    #[test]
    fn fixed_and_commutator_spaces() {
        let p = f(5);
        let v = perm_module(p, 5);
        let triv = MatGroup::trivial(p, 5);
        assert!(fixed_space(&v, &triv).is_full());
        assert!(commutator_space(&v, &triv).is_zero());
        assert_eq!(fixed_space(&v, v.group()).dim(), 1);
        assert_eq!(commutator_space(&v, v.group()).dim(), 4);
        let mut gens = v.generators().to_vec();
        gens.push(FpMatrix::scalar(p, 5, 2));
        let w = FpModule::from_generators(p, 5, gens).unwrap();
        assert!(commutator_space(&w, w.group()).is_full());
    }

    #[test]
    fn sym_and_tensor() {
        let p = f(5);
        let v2 = natural_sl2(p);
        assert_eq!(sym_power(&v2, 2).unwrap().dim(), 3);
        let t = tensor(&v2, &v2).unwrap();
        let parts = split_summands(&t, 1).unwrap();
        assert_eq!(parts.iter().map(Summand::dim).collect::<Vec<_>>(), vec![1, 3]);
        let triv = FpModule::from_generators(p, 1, vec![FpMatrix::identity(p, 1)]).unwrap();
        assert_eq!(dual(&triv).generators(), triv.generators());
        let back = dual(&dual(&v2));
        assert_eq!(back.generators(), v2.generators());
    }

    #[test]
    fn splitting_direct_sums() {
        let p = f(5);
        let v2 = natural_sl2(p);
        let v3 = sym_power(&v2, 2).unwrap();
        let gens = v2.generators().iter().zip(v3.generators()).map(|(a, b)| a.direct_sum(b)).collect();
        let s = FpModule::from_generators(p, 5, gens).unwrap();
        let parts = split_summands(&s, 7).unwrap();
        assert_eq!(parts.iter().map(Summand::dim).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(split_summands(&v3, 7).unwrap().len(), 1);
    }

    #[test]
    fn indecomposability_examples() {
        let p = f(5);
        let s5 = perm_module(p, 5);
        let syl = sylow(&s5);
        let a5 = crate::grp::o_pprime(s5.group(), &syl).unwrap();
        let full = FpModule::new(a5.clone());
        let syl_a = sylow(&full);
        assert!(is_indecomposable(&full, &syl_a).unwrap());
        let cs = canonical_subspaces(&full, &syl_a);
        let zero_sum = cs.commutator.clone();
        let w_mod = quotient(&submodule(&full, &zero_sum).unwrap(), &Subspace::span(p, 4, &[
            zero_sum.coordinates(&[1; 5]).unwrap(),
        ]))
        .unwrap();
        assert_eq!(w_mod.dim(), 3);
        let syl_w = sylow(&w_mod);
        assert!(is_indecomposable(&w_mod, &syl_w).unwrap());
        let plus = FpModule::from_generators(
            p,
            6,
            full.generators().iter().map(|g| g.direct_sum(&FpMatrix::identity(p, 1))).collect(),
        )
        .unwrap();
        let syl_p = sylow(&plus);
        assert!(!is_indecomposable(&plus, &syl_p).unwrap());
    }

    #[test]
    fn dim_screen_branches() {
        let p = f(5);
        let v = sym_power(&natural_sl2(p), 2).unwrap();
        let syl = sylow(&v);
        assert_eq!(dim_screens(&v, &syl).unwrap().branch, DimBranch::RestrictionIndecomposable);
        let v5 = sym_power(&natural_sl2(p), 4).unwrap();
        let syl5 = sylow(&v5);
        let s = dim_screens(&v5, &syl5).unwrap();
        assert_eq!(s.branch, DimBranch::Projective);
        assert!(s.profile_consistent);
    }
}
