//! The subgroup `G^∨` of the Sylow normalizer and the homomorphism
//! `μ : G^∨ -> Δ = F_p^× × F_p^×`, with subgroup algebra on `Δ` and
//! recognition of the named families used in the classification tables.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gfp::{scalar_on_quotient, FpMatrix, Prime, Subspace};
use crate::grp::{GrpError, MatGroup, SylowData};
use crate::modrep::CanonicalSubspaces;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MuError {
    #[error("Z0 has dimension {0}, expected a line")]
    Z0NotLine(usize),
    #[error("the set of mu-values is not a subgroup")]
    NotASubgroup,
    #[error("unknown subgroup name `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Grp(#[from] GrpError),
}

/// A subgroup of `Δ`, as an explicit set of pairs `(r, s)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DeltaSubgroup {
    p: Prime,
    elements: BTreeSet<(u8, u8)>,
}

impl fmt::Debug for DeltaSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DeltaSubgroup(p={}, {:?})", self.p, self.elements)
    }
}

impl DeltaSubgroup {
    /// Checks closure; a finite nonempty set closed under products is a subgroup.
    pub fn new(p: Prime, elements: impl IntoIterator<Item = (u8, u8)>) -> Result<Self, MuError> {
        let elements: BTreeSet<(u8, u8)> = elements.into_iter().collect();
        if !elements.contains(&(1, 1)) {
            return Err(MuError::NotASubgroup);
        }
        for &(a, b) in &elements {
            for &(c, d) in &elements {
                if !elements.contains(&(p.mul(a, c), p.mul(b, d))) {
                    return Err(MuError::NotASubgroup);
                }
            }
        }
        Ok(DeltaSubgroup { p, elements })
    }

    /// Subgroup generated by `gens`.
    pub fn generated(p: Prime, gens: &[(u8, u8)]) -> Self {
        let mut elements: BTreeSet<(u8, u8)> = BTreeSet::from([(1, 1)]);
        let mut frontier = vec![(1u8, 1u8)];
        while let Some((a, b)) = frontier.pop() {
            for &(c, d) in gens {
                let x = (p.mul(a, c), p.mul(b, d));
                if elements.insert(x) {
                    frontier.push(x);
                }
            }
        }
        DeltaSubgroup { p, elements }
    }

    pub fn full(p: Prime) -> Self {
        let elements = p.units().flat_map(|r| p.units().map(move |s| (r, s))).collect();
        DeltaSubgroup { p, elements }
    }

    pub fn trivial(p: Prime) -> Self {
        DeltaSubgroup { p, elements: BTreeSet::from([(1, 1)]) }
    }

    /// `Δ_i = {(r, r^i)}`; negative `i` allowed.
    pub fn diagonal(p: Prime, i: i64) -> Self {
        Self::fraction(p, i, 1)
    }

    /// `Δ_{k/l} = {(u^l, u^k)}`.
    pub fn fraction(p: Prime, k: i64, l: i64) -> Self {
        let e = (p.value() - 1) as i64;
        let elements = p.units().map(|u| (p.pow(u, l.rem_euclid(e) as u64), p.pow(u, k.rem_euclid(e) as u64))).collect();
        DeltaSubgroup { p, elements }
    }

    /// `½Δ_i = {(u, u^i) : u a nonzero square}`.
    pub fn half(p: Prime, i: i64) -> Self {
        let e = (p.value() - 1) as i64;
        let elements = p
            .units()
            .filter(|&u| p.is_square(u))
            .map(|u| (u, p.pow(u, i.rem_euclid(e) as u64)))
            .collect();
        DeltaSubgroup { p, elements }
    }

    /// `{(r, s) : r a square}`, order `(p-1)^2 / 2`.
    pub fn squares_times_all(p: Prime) -> Self {
        let elements =
            p.units().filter(|&r| p.is_square(r)).flat_map(|r| p.units().map(move |s| (r, s))).collect();
        DeltaSubgroup { p, elements }
    }

    pub fn product(&self, other: &DeltaSubgroup) -> DeltaSubgroup {
        let gens: Vec<(u8, u8)> = self.elements.iter().chain(&other.elements).copied().collect();
        DeltaSubgroup::generated(self.p, &gens)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &BTreeSet<(u8, u8)> {
        &self.elements
    }

    pub fn contains_element(&self, x: (u8, u8)) -> bool {
        self.elements.contains(&x)
    }

    /// Whether `other` is a subgroup of `self`.
    pub fn contains(&self, other: &DeltaSubgroup) -> bool {
        other.elements.is_subset(&self.elements)
    }

    /// Whether `Δ_t` is a subgroup of `self`.
    pub fn contains_delta_t(&self, t: i64) -> bool {
        self.contains(&DeltaSubgroup::diagonal(self.p, t))
    }

    pub fn recognize(&self) -> Recognition {
        recognize(self)
    }
}

/// Names of subgroups of `Δ` used in the tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaName {
    Trivial,
    Full,
    Diagonal(i64),
    Fraction { k: i64, l: i64 },
    Half(i64),
    Product(i64, i64),
    /// `Δ_i.k`: `Δ_i` extended by an explicit generator, index `k`.
    Extension { i: i64, index: usize, extra: (u8, u8) },
    SquaresTimesAll,
}

fn index_label(i: i64, modulus: i64) -> String {
    let r = i.rem_euclid(modulus);
    if modulus > 1 && r == modulus - 1 {
        "-1".to_string()
    } else {
        r.to_string()
    }
}

impl DeltaName {
    /// Display form, with indices reduced for the prime `p`.
    pub fn display(&self, p: Prime) -> String {
        let e = (p.value() - 1) as i64;
        match self {
            DeltaName::Trivial => "1".into(),
            DeltaName::Full => "Δ".into(),
            DeltaName::Diagonal(i) => format!("Δ_{}", index_label(*i, e)),
            DeltaName::Fraction { k, l } => format!("Δ_{}/{}", k.rem_euclid(e), l.rem_euclid(e)),
            DeltaName::Half(i) if *i < 0 => format!("½Δ_{i}"),
            DeltaName::Half(i) => format!("½Δ_{}", i.rem_euclid(e / 2)),
            DeltaName::Product(a, b) => format!("Δ_{}Δ_{}", index_label(*a, e), index_label(*b, e)),
            DeltaName::Extension { i, index, extra } => {
                let base = index_label(*i, e);
                format!("Δ_{base}.{index} = Δ_{base} extended by ⟨({}, {})⟩", extra.0, extra.1)
            }
            DeltaName::SquaresTimesAll => "F_p^{×2}×F_p^×".into(),
        }
    }

    /// Parses names such as `Δ`, `Delta_-1`, `Δ_3/2`, `½Δ_0`, `half Delta_-1`, `Δ_0Δ_1`.
    pub fn parse(s: &str) -> Result<DeltaName, MuError> {
        let err = || MuError::UnknownName(s.to_string());
        let t: String = s.split_whitespace().collect::<Vec<_>>().join("");
        let t = t.replace("Delta", "Δ").replace("{", "").replace("}", "");
        if t == "1" {
            return Ok(DeltaName::Trivial);
        }
        if t == "Δ" {
            return Ok(DeltaName::Full);
        }
        if t == "F_p^×2×F_p^×" || t == "F_p^x2xF_p^x" {
            return Ok(DeltaName::SquaresTimesAll);
        }
        let int = |x: &str| x.parse::<i64>().map_err(|_| err());
        if let Some(rest) = t.strip_prefix("½Δ_").or_else(|| t.strip_prefix("halfΔ_")) {
            return Ok(DeltaName::Half(int(rest)?));
        }
        let Some(rest) = t.strip_prefix("Δ_") else {
            return Err(err());
        };
        if let Some((a, b)) = rest.split_once("Δ_") {
            return Ok(DeltaName::Product(int(a)?, int(b)?));
        }
        if let Some((k, l)) = rest.split_once('/') {
            return Ok(DeltaName::Fraction { k: int(k)?, l: int(l)? });
        }
        Ok(DeltaName::Diagonal(int(rest)?))
    }
}

/// The subgroup with a given name.
pub fn named(p: Prime, name: &DeltaName) -> DeltaSubgroup {
    match name {
        DeltaName::Trivial => DeltaSubgroup::trivial(p),
        DeltaName::Full => DeltaSubgroup::full(p),
        DeltaName::Diagonal(i) => DeltaSubgroup::diagonal(p, *i),
        DeltaName::Fraction { k, l } => DeltaSubgroup::fraction(p, *k, *l),
        DeltaName::Half(i) => DeltaSubgroup::half(p, *i),
        DeltaName::Product(a, b) => DeltaSubgroup::diagonal(p, *a).product(&DeltaSubgroup::diagonal(p, *b)),
        DeltaName::Extension { i, extra, .. } => {
            DeltaSubgroup::diagonal(p, *i).product(&DeltaSubgroup::generated(p, &[*extra]))
        }
        DeltaName::SquaresTimesAll => DeltaSubgroup::squares_times_all(p),
    }
}

/// Parses and builds a named subgroup.
pub fn named_str(p: Prime, name: &str) -> Result<DeltaSubgroup, MuError> {
    Ok(named(p, &DeltaName::parse(name)?))
}

/// Result of naming a subgroup: the preferred name plus every other matching name.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Recognition {
    pub name: String,
    pub aliases: Vec<String>,
}

/// Candidate indices for `Δ_i`, preferring `0` and `-1`.
fn preferred_indices(e: i64) -> Vec<i64> {
    let mut v = vec![0, -1];
    v.extend(1..e - 1);
    v
}

/// Names `d` with the most specific matching family.
pub fn recognize(d: &DeltaSubgroup) -> Recognition {
    let p = d.p;
    let e = (p.value() - 1) as i64;
    let mut names: Vec<DeltaName> = Vec::new();
    if d.order() == 1 {
        names.push(DeltaName::Trivial);
    }
    if *d == DeltaSubgroup::full(p) {
        names.push(DeltaName::Full);
    }
    for i in preferred_indices(e) {
        if *d == DeltaSubgroup::diagonal(p, i) {
            names.push(DeltaName::Diagonal(i));
        }
    }
    if e >= 2 {
        for i in 0..e / 2 {
            if *d == DeltaSubgroup::half(p, i) {
                names.push(DeltaName::Half(i));
                if i == e / 2 - 1 {
                    names.push(DeltaName::Half(-1));
                }
            }
        }
    }
    if names.is_empty() {
        'frac: for l in 1..e {
            for k in 0..e {
                if *d == DeltaSubgroup::fraction(p, k, l) {
                    names.push(DeltaName::Fraction { k, l });
                    break 'frac;
                }
            }
        }
    }
    if names.is_empty() {
        'prod: for a in preferred_indices(e) {
            for b in preferred_indices(e) {
                if a.rem_euclid(e) < b.rem_euclid(e) {
                    let prod = DeltaSubgroup::diagonal(p, a).product(&DeltaSubgroup::diagonal(p, b));
                    if *d == prod {
                        names.push(DeltaName::Product(a, b));
                        break 'prod;
                    }
                }
            }
        }
    }
    if *d == DeltaSubgroup::squares_times_all(p) {
        names.push(DeltaName::SquaresTimesAll);
    }
    if names.is_empty() {
        'ext: for i in preferred_indices(e) {
            let base = DeltaSubgroup::diagonal(p, i);
            if d.contains(&base) && d.order() > base.order() {
                for &x in &d.elements {
                    if base.product(&DeltaSubgroup::generated(p, &[x])) == *d {
                        let index = d.order() / base.order();
                        names.push(DeltaName::Extension { i, index, extra: x });
                        break 'ext;
                    }
                }
            }
        }
    }
    let mut shown: Vec<String> = names.iter().map(|n| n.display(p)).collect();
    shown.dedup();
    if shown.is_empty() {
        shown.push(format!("unnamed subgroup of order {}", d.order()));
    }
    let name = shown.remove(0);
    Recognition { name, aliases: shown }
}

/// `G^∨`: elements of `N_G(U)` acting trivially on `Z/Z0`, with their `μ`-values.
#[derive(Debug, Clone)]
pub struct GVee {
    p: Prime,
    dim: usize,
    pub elements: Vec<FpMatrix>,
    pub mu_values: Vec<(u8, u8)>,
}

impl GVee {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn group(&self) -> MatGroup {
        MatGroup::from_matrices(self.p, self.dim, &self.elements)
    }

    /// Whether `μ` has kernel exactly `U`, i.e. `|image| = |G^∨| / p`.
    pub fn kernel_is_u(&self) -> bool {
        let kernel = self.mu_values.iter().filter(|&&x| x == (1, 1)).count();
        kernel == self.p.value() as usize
    }
}

/// `μ(g) = (r, s)` for `g` normalizing `U`: `g u g^-1 = u^r` and `g` is `s` on `Z0`.
pub fn mu_value(g: &FpMatrix, syl: &SylowData, z0: &Subspace) -> Option<(u8, u8)> {
    let r = syl.conjugation_exponent(g)?;
    let s = scalar_on_quotient(g, z0, &Subspace::zero(z0.prime(), z0.ambient_dim()))?;
    Some((r, s))
}

/// Scans `N_G(U)` for `G^∨`.
pub fn compute_gvee(syl: &SylowData, cs: &CanonicalSubspaces) -> Result<GVee, MuError> {
    if cs.z0.dim() != 1 {
        return Err(MuError::Z0NotLine(cs.z0.dim()));
    }
    let ne = syl.normalizer.elements()?;
    let z_basis = cs.z.basis();
    let p = syl.u.prime();
    let mut elements = Vec::new();
    let mut mu_values = Vec::new();
    for x in ne.matrices() {
        let trivial_on_quotient = z_basis.iter().all(|z| {
            let gz = x.mul_vec(z);
            let diff: Vec<u8> = gz.iter().zip(z).map(|(&a, &b)| p.sub(a, b)).collect();
            cs.z0.contains_vector(&diff)
        });
        if trivial_on_quotient {
            let mu = mu_value(&x, syl, &cs.z0).expect("normalizer element preserves the line Z0");
            elements.push(x);
            mu_values.push(mu);
        }
    }
    Ok(GVee { p, dim: syl.u.rows(), elements, mu_values })
}

pub fn mu_image(gv: &GVee) -> Result<DeltaSubgroup, MuError> {
    DeltaSubgroup::new(gv.p, gv.mu_values.iter().copied())
}

/// `{ g in G^∨ : μ(g) in d }`.
pub fn preimage(gv: &GVee, d: &DeltaSubgroup) -> MatGroup {
    let chosen: Vec<FpMatrix> = gv
        .elements
        .iter()
        .zip(&gv.mu_values)
        .filter(|(_, mu)| d.contains_element(**mu))
        .map(|(g, _)| g.clone())
        .collect();
    MatGroup::from_matrices(gv.p, gv.dim, &chosen)
}

pub fn contains_delta_t(d: &DeltaSubgroup, t: i64) -> bool {
    d.contains_delta_t(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn named_examples() {
        let p5 = f(5);
        let dm1 = named_str(p5, "Δ_-1").unwrap();
        assert_eq!(dm1.elements(), &BTreeSet::from([(1, 1), (2, 3), (3, 2), (4, 4)]));
        let d0 = named_str(f(7), "Δ_0").unwrap();
        assert_eq!(d0.order(), 6);
        assert!(d0.elements().iter().all(|&(_, s)| s == 1));
        let half = DeltaSubgroup::new(p5, [(1, 1), (4, 4)]).unwrap();
        assert_eq!(recognize(&half).name, "½Δ_1");
        assert!(matches!(named_str(p5, "Gamma"), Err(MuError::UnknownName(_))));
    }

    #[test]
    fn containment() {
        let p = f(5);
        let full = DeltaSubgroup::full(p);
        for t in -2..6 {
            assert!(full.contains_delta_t(t));
        }
        let sq = DeltaSubgroup::fraction(p, 2, 2);
        assert!(!sq.contains_delta_t(1));
    }

    #[test]
    fn recognition_prefers_specific_names() {
        let p = f(7);
        assert_eq!(recognize(&DeltaSubgroup::full(p)).name, "Δ");
        assert_eq!(recognize(&DeltaSubgroup::diagonal(p, 5)).name, "Δ_-1");
        assert_eq!(recognize(&DeltaSubgroup::diagonal(p, 3)).name, "Δ_3");
        assert_eq!(recognize(&DeltaSubgroup::half(p, 0)).name, "½Δ_0");
        let r = recognize(&DeltaSubgroup::half(p, 5));
        assert_eq!((r.name.as_str(), r.aliases.as_slice()), ("½Δ_2", &["½Δ_-1".to_string()][..]));
        assert_eq!(recognize(&DeltaSubgroup::squares_times_all(p)).name, "F_p^{×2}×F_p^×");
        let prod = DeltaSubgroup::diagonal(p, 0).product(&DeltaSubgroup::diagonal(p, 2));
        assert!(recognize(&prod).name.starts_with("Δ_0Δ_"));
        // {(u^2, u^3)} at p = 5 is a fraction family member
        let p5 = f(5);
        let d = DeltaSubgroup::new(p5, [(1, 1), (4, 2), (1, 4), (4, 3)]).unwrap();
        assert_eq!(d, DeltaSubgroup::fraction(p5, 3, 2));
        let ext = named(p, &DeltaName::Extension { i: 0, index: 2, extra: (1, 6) });
        assert_eq!(ext.order(), 12);
        assert_eq!(recognize(&ext).name, "Δ_0Δ_3");
        assert_eq!(recognize(&DeltaSubgroup::generated(p, &[(2, 1)])).name, "½Δ_0");
        let odd = DeltaSubgroup::generated(p, &[(1, 2)]);
        assert_eq!(recognize(&odd).name, "unnamed subgroup of order 3");
    }

    #[test]
    fn non_subgroups_are_rejected() {
        assert_eq!(DeltaSubgroup::new(f(5), [(1, 1), (2, 2)]), Err(MuError::NotASubgroup));
        assert_eq!(DeltaSubgroup::new(f(5), [(2, 2)]), Err(MuError::NotASubgroup));
    }

    #[test]
    fn names_round_trip() {
        let p = f(7);
        for name in ["Δ", "Δ_0", "Δ_-1", "Δ_3/2", "½Δ_0", "½Δ_-1", "Δ_0Δ_2", "F_p^{×2}×F_p^×", "Delta_1"] {
            let d = named_str(p, name).unwrap();
            let again = recognize(&d);
            let all: Vec<String> = std::iter::once(again.name.clone()).chain(again.aliases.clone()).collect();
            let back = all.iter().map(|n| named_str(p, n.split(" =").next().unwrap())).find(|r| r.is_ok());
            assert_eq!(back.unwrap().unwrap(), d, "{name}");
        }
    }
}
