//! Module families with a Sylow subgroup of order `p`, and the regression
//! corpus built from them.
//!
//! Every constructor returns an [`FpModule`] with explicit generator
//! matrices. Non-simple modules are cut out of permutation, symmetric-power
//! or tensor modules by the splitter and accepted only after their socle and
//! top dimensions are checked.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criterion::{self, CriterionError, CriterionReport, Exotic};
use crate::gfp::{image_basis, kernel_basis, scalar_on_quotient, FpMatrix, GfpError, Prime, Subspace};
use crate::grp::{self, GrpError, MatGroup};
use crate::modrep::{self, FpModule, ModError};
use crate::mu::{self, DeltaSubgroup};

#[derive(Debug, Error)]
pub enum ZooError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("summand extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("this instance needs the heavy-compute flag")]
    HeavyComputeDisabled,
    #[error(transparent)]
    Gfp(#[from] GfpError),
    #[error(transparent)]
    Grp(#[from] GrpError),
    #[error(transparent)]
    Mod(#[from] ModError),
    #[error(transparent)]
    Criterion(#[from] CriterionError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ZooError> {
    Err(ZooError::InvalidParams(msg.into()))
}

fn prime(p: u32) -> Result<Prime, ZooError> {
    if p < 3 {
        return invalid("p must be an odd prime");
    }
    Ok(Prime::new(p)?)
}

fn m2(p: Prime, rows: [[i64; 2]; 2]) -> FpMatrix {
    FpMatrix::from_rows(p, &rows).expect("2x2 matrix")
}

fn det2(g: &FpMatrix) -> u8 {
    let p = g.prime();
    p.sub(p.mul(g.get(0, 0), g.get(1, 1)), p.mul(g.get(0, 1), g.get(1, 0)))
}

/// Generators of `SL_2(p)`: the upper unitriangular `u` and `w = [[0,-1],[1,0]]`.
pub fn sl2_generators(p: Prime) -> Vec<FpMatrix> {
    vec![m2(p, [[1, 1], [0, 1]]), m2(p, [[0, -1], [1, 0]])]
}

/// `SL_2(p)` generators followed by `diag(ρ, 1)`.
pub fn gl2_generators(p: Prime) -> Vec<FpMatrix> {
    let mut g = sl2_generators(p);
    g.push(m2(p, [[p.primitive_root() as i64, 0], [0, 1]]));
    g
}

/// The sum of all simple submodules; each one is spun from a `u`-fixed vector.
pub fn socle(v: &FpModule, u: &FpMatrix) -> Subspace {
    let p = v.prime();
    let fixed = kernel_basis(&u.minus_identity());
    let mut socle = Subspace::zero(p, v.dim());
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    for z in fixed.elements() {
        if z.iter().all(|&x| x == 0) || socle.contains_vector(&z) || seen.contains(&z) {
            continue;
        }
        let m = modrep::spin(v, &[z.clone()]);
        let simple = m.intersect(&fixed).elements().into_iter().all(|y| {
            y.iter().all(|&x| x == 0) || {
                seen.insert(y.clone());
                modrep::spin(v, &[y]) == m
            }
        });
        if simple {
            socle = socle.sum(&m);
        }
    }
    socle
}

/// Dimension of `V / rad(V)`, via the socle of the dual.
pub fn top_dim(v: &FpModule, u: &FpMatrix) -> usize {
    let ud = u.inverse().expect("invertible").transpose();
    socle(&modrep::dual(v), &ud).dim()
}

/// Which extension of the `SL_2(p)` image acts.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Sl2Group {
    /// The image of `SL_2(p)`.
    Base,
    /// The image of `GL_2(p)` under the given construction.
    Gl2,
    /// `Sym^k(g)·det(g)^{(p-1-k)/2}`, `k = i - 1` even: a `PGL_2(p)` image in
    /// which `diag(a, b)` acts on `Z0` by `(a/b)^{k/2}·ε(a/b)`.
    Pgl2,
    /// `GL_2(p)` image together with all scalars.
    Full,
}

/// Which section of a permutation module.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum PermSection {
    Full,
    /// The zero-sum submodule, with the constants as socle (needs `p | n`).
    WOverOne,
    /// The permutation module modulo constants (needs `p | n`).
    OneOverW,
}

/// Image of `G/K` in the monomial family.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum HType {
    /// `C_p ⋊ C_{p-1}` on `F_p`, `n = p`.
    Affine,
    /// `PGL_2(p)` on the projective line, `n = p + 1`.
    Pgl2,
    Sym,
    /// `A_n` with `p + 2 <= n <= 2p - 1`.
    Alt,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Gl23Kind {
    Natural,
    /// The non-simple 4-dimensional module of type `2/2`.
    TwoOverTwo,
}

/// One member of a module family.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Sl2pSimple { p: u32, i: usize, group: Sl2Group },
    /// `shape` is `[j, i]` (type `V_j/V_i`, `i + j = p ± 1`) or `[1, p-2, 1]`.
    Sl2pExt { p: u32, shape: Vec<usize>, group: Sl2Group },
    SnPerm { p: u32, n: usize, section: PermSection, alternating: bool, scalars: bool },
    SnDeleted { p: u32, n: usize, scalars: bool },
    AnDeleted { p: u32, n: usize, scalars: bool },
    /// `r` lists generators of `R ≤ F_p^× × F_p^×`; `None` is all of it.
    /// With `sign_twist`, odd permutations are lifted as `σ·diag(ρ, 1, ..., 1)`.
    Monomial {
        p: u32,
        n: usize,
        t: u32,
        r: Option<Vec<[u8; 2]>>,
        h_type: HType,
        #[serde(default)]
        sign_twist: bool,
    },
    #[serde(rename = "gl2_3")]
    Gl23 { kind: Gl23Kind },
    ExtraspecialP5,
    ExtraspecialP7,
}

impl FamilySpec {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::Sl2pSimple { .. } => "sl2p_simple",
            FamilySpec::Sl2pExt { .. } => "sl2p_ext",
            FamilySpec::SnPerm { .. } => "sn_perm",
            FamilySpec::SnDeleted { .. } => "sn_deleted",
            FamilySpec::AnDeleted { .. } => "an_deleted",
            FamilySpec::Monomial { .. } => "monomial",
            FamilySpec::Gl23 { .. } => "gl2_3",
            FamilySpec::ExtraspecialP5 => "extraspecial_p5",
            FamilySpec::ExtraspecialP7 => "extraspecial_p7",
        }
    }

    pub fn prime(&self) -> u32 {
        match self {
            FamilySpec::Sl2pSimple { p, .. }
            | FamilySpec::Sl2pExt { p, .. }
            | FamilySpec::SnPerm { p, .. }
            | FamilySpec::SnDeleted { p, .. }
            | FamilySpec::AnDeleted { p, .. }
            | FamilySpec::Monomial { p, .. } => *p,
            FamilySpec::Gl23 { .. } => 3,
            FamilySpec::ExtraspecialP5 => 5,
            FamilySpec::ExtraspecialP7 => 7,
        }
    }

    /// `family key=value ...`, the argument form of `zoo emit`.
    pub fn label(&self) -> String {
        use serde_json::Value;
        let json = serde_json::to_value(self).expect("serializable");
        let mut out = self.tag().to_string();
        let cell = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        for (k, v) in json.as_object().into_iter().flatten() {
            let text = match v {
                _ if k == "family" => continue,
                Value::Null => continue,
                Value::Array(items) => items
                    .iter()
                    .map(|x| match x {
                        Value::Array(pair) => pair.iter().map(cell).collect::<Vec<_>>().join(":"),
                        other => cell(other),
                    })
                    .collect::<Vec<_>>()
                    .join(","),
                other => cell(other),
            };
            out.push_str(&format!(" {k}={text}"));
        }
        out
    }

    /// Parses `key=value` words into a `FamilySpec` of the given family.
    pub fn from_params(family: &str, params: &[String]) -> Result<FamilySpec, ZooError> {
        let mut obj = serde_json::Map::new();
        obj.insert("family".into(), family.into());
        for word in params {
            let Some((k, v)) = word.split_once('=') else {
                return invalid(format!("expected key=value, got {word:?}"));
            };
            obj.insert(k.to_string(), param_value(v));
        }
        serde_json::from_value(serde_json::Value::Object(obj)).map_err(|e| ZooError::InvalidParams(e.to_string()))
    }
}

fn param_value(v: &str) -> serde_json::Value {
    use serde_json::Value;
    let scalar = |s: &str| match s {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => s.parse::<u64>().map(Value::from).unwrap_or_else(|_| Value::from(s)),
    };
    if v.contains(':') {
        Value::Array(v.split(',').map(|pair| Value::Array(pair.split(':').map(scalar).collect())).collect())
    } else if v.contains(',') {
        Value::Array(v.split(',').map(scalar).collect())
    } else {
        scalar(v)
    }
}

fn module_from(p: Prime, dim: usize, gens: Vec<FpMatrix>) -> Result<FpModule, ZooError> {
    Ok(FpModule::from_generators(p, dim, gens)?)
}

/// The simple module `V_i = Sym^{i-1}(V_2)`, `2 <= i <= p`.
pub fn sl2_simple(p: u32, i: usize, group: Sl2Group) -> Result<FpModule, ZooError> {
    let pr = prime(p)?;
    if !(2..=p as usize).contains(&i) {
        return invalid(format!("V_{i} needs 2 <= i <= {p}"));
    }
    let k = i - 1;
    let gens = match group {
        Sl2Group::Base => sl2_generators(pr).iter().map(|g| modrep::sym_power_matrix(g, k)).collect(),
        Sl2Group::Gl2 | Sl2Group::Full => {
            let mut g: Vec<FpMatrix> = gl2_generators(pr).iter().map(|g| modrep::sym_power_matrix(g, k)).collect();
            if group == Sl2Group::Full {
                g.push(FpMatrix::scalar(pr, i, pr.primitive_root()));
            }
            g
        }
        Sl2Group::Pgl2 => {
            if k % 2 != 0 {
                return invalid("the PGL_2(p) action needs odd dimension");
            }
            let twist = (p as u64 - 1 - k as u64) / 2;
            gl2_generators(pr).iter().map(|g| modrep::sym_power_matrix(g, k).scale(pr.pow(det2(g), twist))).collect()
        }
    };
    module_from(pr, i, gens)
}

/// `GL_2(p)` permuting the nonzero vectors of `F_p^2`: `F_p[SL_2(p)/U]` with its `GL_2(p)` action.
pub fn gl2_on_nonzero_vectors(p: Prime) -> Result<FpModule, ZooError> {
    let pv = p.value() as usize;
    let points: Vec<Vec<u8>> = (1..pv * pv).map(|c| vec![(c % pv) as u8, (c / pv) as u8]).collect();
    let index: HashMap<Vec<u8>, usize> = points.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let gens = gl2_generators(p)
        .iter()
        .map(|g| {
            let perm: Vec<usize> = points.iter().map(|v| index[&g.mul_vec(v)]).collect();
            FpMatrix::permutation(p, &perm)
        })
        .collect();
    module_from(p, points.len(), gens)
}

fn gl2_sym(p: Prime, k: usize) -> Result<FpModule, ZooError> {
    let gens = gl2_generators(p).iter().map(|g| modrep::sym_power_matrix(g, k)).collect();
    module_from(p, k + 1, gens)
}

/// The summand of `source` with the given dimension, socle and top. The first
/// generator of `source` must be the unipotent `u`.
fn extract(source: &FpModule, dim: usize, soc: usize, top: usize, what: &str) -> Result<FpModule, ZooError> {
    for s in modrep::split_summands(source, 1)? {
        if s.dim() != dim {
            continue;
        }
        let u = s.module.generators()[0].clone();
        if socle(&s.module, &u).dim() == soc && top_dim(&s.module, &u) == top {
            return Ok(s.module);
        }
    }
    Err(ZooError::ExtractionFailed(what.to_string()))
}

fn regroup(p: Prime, m: FpModule, group: Sl2Group) -> Result<FpModule, ZooError> {
    let n = m.dim();
    match group {
        Sl2Group::Base => module_from(p, n, m.generators()[..2].to_vec()),
        Sl2Group::Gl2 => Ok(m),
        Sl2Group::Full => {
            let mut g = m.generators().to_vec();
            g.push(FpMatrix::scalar(p, n, p.primitive_root()));
            module_from(p, n, g)
        }
        Sl2Group::Pgl2 => invalid("the PGL_2(p) twist applies to simple modules only"),
    }
}

/// The non-simple `SL_2(p)` modules `V_{j,i}` (dimension `p ± 1`) and `V_{1,p-2,1}`.
pub fn sl2_ext(p: u32, shape: &[usize], group: Sl2Group) -> Result<FpModule, ZooError> {
    let pr = prime(p)?;
    let pu = p as usize;
    let m = match *shape {
        [j, i] if i + j == pu + 1 && (2..pu).contains(&i) => {
            extract(&gl2_on_nonzero_vectors(pr)?, pu + 1, i, j, &format!("V_{{{j},{i}}}"))?
        }
        [j, i] if i + j == pu - 1 && i >= 1 && j >= 1 => {
            let k = 2 * pu - 2 + pu * (pu - 2 - i);
            extract(&gl2_sym(pr, k)?, pu - 1, i, j, &format!("V_{{{j},{i}}}"))?
        }
        [1, mid, 1] if mid + 2 == pu => {
            let vp = gl2_sym(pr, pu - 1)?;
            extract(&modrep::tensor(&vp, &vp)?, pu, 1, 1, "V_{1,p-2,1}")?
        }
        _ => return invalid(format!("no SL_2({p}) module of shape {shape:?}")),
    };
    regroup(pr, m, group)
}

fn cycle_perm(n: usize, points: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for (k, &a) in points.iter().enumerate() {
        perm[a] = points[(k + 1) % points.len()];
    }
    perm
}

/// Generating permutations of `S_n` or `A_n`.
pub fn symmetric_perms(n: usize, alternating: bool) -> Vec<Vec<usize>> {
    if alternating {
        let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
        vec![cycle_perm(n, &[0, 1, 2]), cycle_perm(n, &long)]
    } else {
        vec![cycle_perm(n, &(0..n).collect::<Vec<_>>()), cycle_perm(n, &[0, 1])]
    }
}

fn zero_sum(p: Prime, n: usize) -> Subspace {
    let rows: Vec<Vec<u8>> = (0..n - 1)
        .map(|i| {
            let mut v = vec![0u8; n];
            v[i] = 1;
            v[n - 1] = p.neg(1);
            v
        })
        .collect();
    Subspace::span(p, n, &rows)
}

fn check_degree(p: u32, n: usize) -> Result<(), ZooError> {
    let pu = p as usize;
    if !(pu..2 * pu).contains(&n) {
        return invalid(format!("need p <= n <= 2p-1, got n = {n}"));
    }
    Ok(())
}

/// Permutation modules of `S_n`/`A_n` and their sections, optionally with all scalars.
pub fn symmetric(p: u32, n: usize, section: PermSection, alternating: bool, scalars: bool) -> Result<FpModule, ZooError> {
    let pr = prime(p)?;
    check_degree(p, n)?;
    if section != PermSection::Full && n % p as usize != 0 {
        return invalid("sections W/1 and 1/W need p | n");
    }
    let mut gens: Vec<FpMatrix> = symmetric_perms(n, alternating).iter().map(|q| FpMatrix::permutation(pr, q)).collect();
    if scalars {
        gens.push(FpMatrix::scalar(pr, n, pr.primitive_root()));
    }
    let perm = module_from(pr, n, gens)?;
    Ok(match section {
        PermSection::Full => perm,
        PermSection::WOverOne => modrep::submodule(&perm, &zero_sum(pr, n))?,
        PermSection::OneOverW => modrep::quotient(&perm, &Subspace::span(pr, n, &[vec![1; n]]))?,
    })
}

/// The deleted permutation module: zero-sum vectors, modulo constants when `p | n`.
pub fn deleted(p: u32, n: usize, alternating: bool, scalars: bool) -> Result<FpModule, ZooError> {
    let pr = prime(p)?;
    check_degree(p, n)?;
    let pu = p as usize;
    if alternating && n == pu + 1 {
        return invalid("A_{p+1} is excluded; use n = p or p+2 <= n <= 2p-1");
    }
    let perm = symmetric(p, n, PermSection::Full, alternating, scalars)?;
    let zs = zero_sum(pr, n);
    let sub = modrep::submodule(&perm, &zs)?;
    if n % pu != 0 {
        return Ok(sub);
    }
    let ones = zs.coordinates(&vec![1; n]).expect("constants are zero-sum when p | n");
    Ok(modrep::quotient(&sub, &Subspace::span(pr, n - 1, &[ones]))?)
}

/// Facts about a monomial group `G = K.H`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct MonomialData {
    pub k_order: usize,
    /// The coordinate characters of `K` are pairwise distinct.
    pub characters_distinct: bool,
    /// The lifted permutations act 2-transitively on coordinates.
    pub two_transitive: bool,
}

/// Largest candidate set the monomial constructor will scan for `K`.
pub const MONOMIAL_K_LIMIT: usize = 1 << 22;

fn h_perms(p: Prime, n: usize, h: HType) -> Result<Vec<Vec<usize>>, ZooError> {
    let pu = p.value() as usize;
    let rho = p.primitive_root() as usize;
    match h {
        HType::Affine => {
            if n != pu {
                return invalid("C_p ⋊ C_{p-1} needs n = p");
            }
            Ok(vec![(0..n).map(|x| (x + 1) % pu).collect(), (0..n).map(|x| x * rho % pu).collect()])
        }
        HType::Pgl2 => {
            if n != pu + 1 {
                return invalid("PGL_2(p) needs n = p + 1");
            }
            let inf = pu;
            let shift = (0..n).map(|x| if x == inf { inf } else { (x + 1) % pu }).collect();
            let scale = (0..n).map(|x| if x == inf { inf } else { x * rho % pu }).collect();
            let invert = (0..n)
                .map(|x| match x {
                    0 => inf,
                    _ if x == inf => 0,
                    _ => p.neg(p.inv(x as u8)) as usize,
                })
                .collect();
            Ok(vec![shift, scale, invert])
        }
        HType::Sym => {
            check_degree(p.value(), n)?;
            Ok(symmetric_perms(n, false))
        }
        HType::Alt => {
            if !(pu + 2..2 * pu).contains(&n) {
                return invalid("A_n needs p+2 <= n <= 2p-1");
            }
            Ok(symmetric_perms(n, true))
        }
    }
}

/// Exponent vectors (base `ρ`) of `K = {a : all a_i^t equal, (∏ a_i, a_1^t) ∈ R}`.
fn monomial_k(p: Prime, n: usize, t: u32, r: &Option<Vec<[u8; 2]>>) -> Result<Vec<Vec<u32>>, ZooError> {
    let q = p.value() - 1;
    let r_exp: Option<HashSet<(u32, u32)>> = r.as_ref().map(|gens| {
        let logs: Vec<(u32, u32)> = gens.iter().map(|[a, b]| (p.log(*a), p.log(*b))).collect();
        let mut set = HashSet::from([(0u32, 0u32)]);
        let mut queue = VecDeque::from([(0u32, 0u32)]);
        while let Some((x, y)) = queue.pop_front() {
            for &(a, b) in &logs {
                let nxt = ((x + a) % q, (y + b) % q);
                if set.insert(nxt) {
                    queue.push_back(nxt);
                }
            }
        }
        set
    });
    // a_i^t = a_1^t means e_i - e_1 is t-torsion mod p-1
    let torsion: Vec<u32> = (0..q).filter(|d| (t * d) % q == 0).collect();
    let total = (q as usize).saturating_mul(torsion.len().saturating_pow(n as u32 - 1));
    if total > MONOMIAL_K_LIMIT {
        return invalid(format!("K candidate set {total} exceeds {MONOMIAL_K_LIMIT}"));
    }
    let mut out = Vec::new();
    for e1 in 0..q {
        let mut digits = vec![0usize; n - 1];
        loop {
            let mut e = vec![e1];
            e.extend(digits.iter().map(|&d| (e1 + torsion[d]) % q));
            let sum = e.iter().sum::<u32>() % q;
            if r_exp.as_ref().is_none_or(|set| set.contains(&(sum, (t * e1) % q))) {
                out.push(e);
            }
            let Some(k) = digits.iter().position(|&d| d + 1 < torsion.len()) else { break };
            digits[..k].iter_mut().for_each(|d| *d = 0);
            digits[k] += 1;
        }
    }
    Ok(out)
}

/// A small generating set of a group of exponent vectors mod `q`.
fn abelian_generators(elements: &[Vec<u32>], q: u32) -> Vec<Vec<u32>> {
    let n = elements.first().map_or(0, Vec::len);
    let mut span: HashSet<Vec<u32>> = HashSet::from([vec![0; n]]);
    let mut gens = Vec::new();
    for e in elements {
        if span.contains(e) {
            continue;
        }
        gens.push(e.clone());
        let mut frontier: Vec<Vec<u32>> = span.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in frontier {
                let y: Vec<u32> = x.iter().zip(e).map(|(a, b)| (a + b) % q).collect();
                if span.insert(y.clone()) {
                    next.push(y);
                }
            }
            frontier = next;
        }
    }
    gens
}

fn is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
        }
    }
    (perm.len() - cycles) % 2 == 1
}

/// The monomial group `K.H ≤ C_{p-1} ≀ S_n` on `F_p^n`.
pub fn monomial(
    p: u32,
    n: usize,
    t: u32,
    r: &Option<Vec<[u8; 2]>>,
    h: HType,
    sign_twist: bool,
) -> Result<(FpModule, MonomialData), ZooError> {
    let pr = prime(p)?;
    if t <= 1 || (p - 1) % t != 0 {
        return invalid(format!("need 1 < t | p-1, got t = {t}"));
    }
    if r.iter().flatten().flatten().any(|&x| x == 0 || x as u32 >= p) {
        return invalid("R generators must be pairs of units");
    }
    let perms = h_perms(pr, n, h)?;
    let k = monomial_k(pr, n, t, r)?;
    let rho = pr.primitive_root();
    let mut gens: Vec<FpMatrix> = abelian_generators(&k, p - 1)
        .iter()
        .map(|e| FpMatrix::diagonal(pr, &e.iter().map(|&x| pr.pow(rho, x as u64)).collect::<Vec<_>>()))
        .collect();
    gens.extend(perms.iter().map(|q| {
        let m = FpMatrix::permutation(pr, q);
        if sign_twist && is_odd(q) {
            let mut d = vec![1u8; n];
            d[0] = rho;
            m.mul(&FpMatrix::diagonal(pr, &d))
        } else {
            m
        }
    }));
    let distinct = (0..n).all(|i| (i + 1..n).all(|j| k.iter().any(|e| e[i] != e[j])));
    let mut pairs = HashSet::from([(0usize, 1usize)]);
    let mut queue = VecDeque::from([(0usize, 1usize)]);
    while let Some((a, b)) = queue.pop_front() {
        for q in &perms {
            if pairs.insert((q[a], q[b])) {
                queue.push_back((q[a], q[b]));
            }
        }
    }
    let data = MonomialData { k_order: k.len(), characters_distinct: distinct, two_transitive: pairs.len() == n * (n - 1) };
    Ok((module_from(pr, n, gens)?, data))
}

/// Index of the line through `v`: `(1, c)` is `c`, `(0, 1)` is `p`.
fn line_index(p: Prime, v: &[u8]) -> usize {
    if v[0] == 0 {
        p.value() as usize
    } else {
        p.mul(v[1], p.inv(v[0])) as usize
    }
}

/// `GL_2(3)` on `F_3^2`, or on `V_2 ⊗ W` with `W` the uniserial 2-dimensional
/// module of `GL_2(3)/Q_8 ≅ S_3`.
pub fn gl2_3(kind: Gl23Kind) -> Result<FpModule, ZooError> {
    let p = prime(3)?;
    let nat = gl2_generators(p);
    if kind == Gl23Kind::Natural {
        return module_from(p, 2, nat);
    }
    // GL_2(3) -> S_4 on the four lines -> S_3 on the three pairings of lines
    let pairings = [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]];
    let reps: [[u8; 2]; 4] = [[1, 0], [1, 1], [1, 2], [0, 1]];
    let perms: Vec<Vec<usize>> = nat
        .iter()
        .map(|g| {
            let on_lines: Vec<usize> = reps.iter().map(|v| line_index(p, &g.mul_vec(v))).collect();
            pairings
                .iter()
                .map(|pair| {
                    let mut a = [on_lines[pair[0][0]], on_lines[pair[0][1]]];
                    a.sort_unstable();
                    pairings.iter().position(|q| q[0] == a || q[1] == a).expect("pairing")
                })
                .collect()
        })
        .collect();
    let perm = module_from(p, 3, perms.iter().map(|q| FpMatrix::permutation(p, q)).collect())?;
    let w = modrep::submodule(&perm, &zero_sum(p, 3))?;
    let v = modrep::tensor(&module_from(p, 2, nat)?, &w)?;
    let class = grp::class_gg(v.group())?;
    let syl = class.sylow().ok_or_else(|| ZooError::ExtractionFailed("type 2/2: Sylow 3-subgroup not of order 3".into()))?;
    if !modrep::is_indecomposable(&v, syl)? || !modrep::is_minimally_active(&v, syl)? {
        return Err(ZooError::ExtractionFailed("V_2 ⊗ W is not an indecomposable minimally active module".into()));
    }
    Ok(v)
}

fn kron_all(ms: &[FpMatrix]) -> FpMatrix {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.kron(m))
}

/// `m` acting on qubit `j` of `k`; qubit 0 is the most significant bit.
fn on_qubit(m: &FpMatrix, j: usize, k: usize) -> FpMatrix {
    let p = m.prime();
    let parts: Vec<FpMatrix> = (0..k).map(|i| if i == j { m.clone() } else { FpMatrix::identity(p, 2) }).collect();
    kron_all(&parts)
}

fn paulis(p: Prime, k: usize) -> Vec<FpMatrix> {
    let x = m2(p, [[0, 1], [1, 0]]);
    let z = m2(p, [[1, 0], [0, -1]]);
    (0..k).flat_map(|j| [on_qubit(&x, j, k), on_qubit(&z, j, k)]).collect()
}

/// Controlled-`Z`: `-1` on basis vectors with qubits `a` and `b` both set.
fn cz(p: Prime, a: usize, b: usize, k: usize) -> FpMatrix {
    let bit = |x: usize, q: usize| (x >> (k - 1 - q)) & 1;
    let diag: Vec<u8> = (0..1usize << k).map(|x| if bit(x, a) == 1 && bit(x, b) == 1 { p.neg(1) } else { 1 }).collect();
    FpMatrix::diagonal(p, &diag)
}

/// Generators of `(C_4 ∘ 2^{1+4}).S_6` in `GL_4(5)`: Paulis, the scalar
/// `2 = √-1`, Hadamard, phase and controlled-`Z` gates.
pub fn extraspecial_p5_generators() -> Vec<FpMatrix> {
    let p = Prime::new(5).expect("prime");
    let h = m2(p, [[1, 1], [1, -1]]);
    let s = m2(p, [[1, 0], [0, 2]]);
    let mut gens = paulis(p, 2);
    gens.push(FpMatrix::scalar(p, 4, 2));
    gens.extend([on_qubit(&h, 0, 2), on_qubit(&h, 1, 2), on_qubit(&s, 0, 2), on_qubit(&s, 1, 2), cz(p, 0, 1, 2)]);
    gens
}

/// Generators of `(C_3 × 2^{1+6}_+).W(E_7)'.2 ≤ GL_8(7)`: Paulis, normalized
/// Hadamards (`√2 = 3`), controlled-`Z` gates and the scalar `3`.
pub fn extraspecial_p7_generators() -> Vec<FpMatrix> {
    let p = Prime::new(7).expect("prime");
    let h = m2(p, [[1, 1], [1, -1]]).scale(p.inv(3));
    let mut gens = paulis(p, 3);
    gens.extend((0..3).map(|j| on_qubit(&h, j, 3)));
    gens.extend([cz(p, 0, 1, 3), cz(p, 1, 2, 3), cz(p, 0, 2, 3)]);
    gens.push(FpMatrix::scalar(p, 8, 3));
    gens
}

/// `|C_4 ∘ 2^{1+4}| · |S_6|`.
pub const EXTRASPECIAL_P5_ORDER: usize = 64 * 720;

/// The 4-dimensional instance at `p = 5`, checked to have order `64·720`.
pub fn extraspecial_p5() -> Result<FpModule, ZooError> {
    let v = module_from(prime(5)?, 4, extraspecial_p5_generators())?;
    let order = v.group().order()?;
    if order != EXTRASPECIAL_P5_ORDER {
        return Err(ZooError::ExtractionFailed(format!("group of order {order}, expected {EXTRASPECIAL_P5_ORDER}")));
    }
    Ok(v)
}

/// Result of the `p = 7` normalizer computation.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Extraspecial7 {
    /// Order of the image of `G` in `Sp_6(2)`.
    pub quotient_order: usize,
    /// Order of `C_6 × 2^{1+6}`, the kernel of that image.
    pub kernel_order: usize,
    pub group_order: usize,
    pub n_mod_u: usize,
    pub gvee_mod_u: usize,
    pub mu_image: Vec<(u8, u8)>,
    pub mu_name: String,
    /// The `μ` image recomputed by the generic `G^∨` scan on `N_G(U)`.
    pub mu_name_generic: String,
}

/// `(x, z, c)` with `m = c · X^x Z^z`, if `m` has that form.
fn pauli_coords(m: &FpMatrix, k: usize) -> Option<(usize, usize, u8)> {
    let p = m.prime();
    let n = 1usize << k;
    let x = (0..n).find(|&r| m.get(r, 0) != 0)?;
    let c = m.get(x, 0);
    let mut z = 0usize;
    for b in (0..k).map(|q| 1usize << q) {
        match m.get(b ^ x, b) {
            e if e == c => {}
            e if e == p.neg(c) => z |= b,
            _ => return None,
        }
    }
    (pauli_matrix(p, k, x, z, c) == *m).then_some((x, z, c))
}

fn pauli_matrix(p: Prime, k: usize, x: usize, z: usize, c: u8) -> FpMatrix {
    let n = 1usize << k;
    let mut m = FpMatrix::zero(p, n, n);
    for col in 0..n {
        let odd = (col & z).count_ones() % 2 == 1;
        m.set(col ^ x, col, if odd { p.neg(c) } else { c });
    }
    m
}

type SymplecticKey = Vec<(usize, usize)>;

/// Action of `g` on `2^{1+2k}/Z ≅ F_2^{2k}`: the images of `X^{e_q}` and `Z^{e_q}`.
fn symplectic_key(g: &FpMatrix, gi: &FpMatrix, k: usize) -> Option<SymplecticKey> {
    let p = g.prime();
    (0..k)
        .flat_map(|q| [(1usize << q, 0usize), (0, 1usize << q)])
        .map(|(x, z)| {
            let c = g.mul(&pauli_matrix(p, k, x, z, 1)).mul(gi);
            pauli_coords(&c, k).map(|(x2, z2, _)| (x2, z2))
        })
        .collect()
}

/// `|N_G(U)/U|` and `μ(G^∨)` for the `p = 7` extraspecial normalizer.
///
/// `G` has about `1.5·10^7` elements and is never enumerated. The image of
/// `G` in `Sp_6(2)` is enumerated with one representative matrix per element,
/// and `N_G(U)` is assembled from representatives of `N(Ū)` times the kernel
/// `{c·X^x Z^z}`.
pub fn extraspecial_p7(heavy: bool) -> Result<Extraspecial7, ZooError> {
    if !heavy {
        return Err(ZooError::HeavyComputeDisabled);
    }
    let p = prime(7)?;
    let k = 3;
    let gens = extraspecial_p7_generators();
    let inv: Vec<FpMatrix> = gens.iter().map(|g| g.inverse().expect("invertible")).collect();
    let identity = FpMatrix::identity(p, 8);
    let id_key = symplectic_key(&identity, &identity, k).expect("identity");
    let mut reps: HashMap<SymplecticKey, (FpMatrix, FpMatrix)> =
        HashMap::from([(id_key.clone(), (identity.clone(), identity))]);
    let mut queue = VecDeque::from([id_key]);
    while let Some(key) = queue.pop_front() {
        let (r, ri) = reps[&key].clone();
        for (g, gi) in gens.iter().zip(&inv) {
            let m = g.mul(&r);
            let mi = ri.mul(gi);
            let nk = symplectic_key(&m, &mi, k)
                .ok_or_else(|| ZooError::ExtractionFailed("a generator does not normalize 2^{1+6}".into()))?;
            if !reps.contains_key(&nk) {
                reps.insert(nk.clone(), (m, mi));
                queue.push_back(nk);
            }
        }
    }
    let kernel: Vec<FpMatrix> = (0..8)
        .flat_map(|x| (0..8).flat_map(move |z| (1..7u8).map(move |c| (x, z, c))))
        .map(|(x, z, c)| pauli_matrix(p, k, x, z, c))
        .collect();

    let mut sorted: Vec<(&SymplecticKey, &(FpMatrix, FpMatrix))> = reps.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(b.0));
    let u = sorted
        .iter()
        .find_map(|(_, (m, _))| {
            let o = m.order();
            (o % 7 == 0).then(|| m.pow(o / 7))
        })
        .ok_or_else(|| ZooError::ExtractionFailed("no element of order 7".into()))?;
    let u_pows: Vec<FpMatrix> = (0..7).map(|e| u.pow(e)).collect();
    let u_keys: HashSet<SymplecticKey> = u_pows[1..]
        .iter()
        .map(|x| symplectic_key(x, &x.inverse().expect("invertible"), k).expect("in G"))
        .collect();

    let mut normalizer: Vec<(FpMatrix, u8)> = Vec::new();
    for (_, (t, ti)) in &sorted {
        let c = t.mul(&u).mul(ti);
        if !u_keys.contains(&symplectic_key(&c, &c.inverse().expect("invertible"), k).expect("in G")) {
            continue;
        }
        for kk in &kernel {
            let g = t.mul(kk);
            let gu = g.mul(&u).mul(&g.inverse().expect("invertible"));
            if let Some(r) = (1..7).find(|&r| u_pows[r] == gu) {
                normalizer.push((g, r as u8));
            }
        }
    }

    let y = u.minus_identity();
    let z = kernel_basis(&y);
    let z0 = z.intersect(&image_basis(&y));
    let zero = Subspace::zero(p, 8);
    let mut values = BTreeSet::new();
    let mut gvee = 0usize;
    for (g, r) in &normalizer {
        let trivial_on_z_mod_z0 = z.basis().iter().all(|v| {
            let d: Vec<u8> = g.mul_vec(v).iter().zip(v).map(|(&a, &b)| p.sub(a, b)).collect();
            z0.contains_vector(&d)
        });
        if trivial_on_z_mod_z0 {
            gvee += 1;
            if let Some(s) = scalar_on_quotient(g, &z0, &zero) {
                values.insert((*r, s));
            }
        }
    }
    let to_err = |e: mu::MuError| ZooError::ExtractionFailed(e.to_string());
    let image = DeltaSubgroup::new(p, values.iter().copied()).map_err(to_err)?;

    let n_group = MatGroup::from_matrices(p, 8, &normalizer.iter().map(|(g, _)| g.clone()).collect::<Vec<_>>());
    let syl = grp::sylow_data(&n_group, u)?;
    let cs = modrep::canonical_subspaces(&FpModule::new(n_group), &syl);
    let generic = mu::mu_image(&mu::compute_gvee(&syl, &cs).map_err(to_err)?).map_err(to_err)?;

    Ok(Extraspecial7 {
        quotient_order: reps.len(),
        kernel_order: kernel.len(),
        group_order: reps.len() * kernel.len(),
        n_mod_u: normalizer.len() / 7,
        gvee_mod_u: gvee / 7,
        mu_image: values.into_iter().collect(),
        mu_name: image.recognize().name,
        mu_name_generic: generic.recognize().name,
    })
}

/// A built family member.
#[derive(Debug, Clone)]
pub struct ZooInstance {
    pub spec: FamilySpec,
    pub module: FpModule,
    pub monomial: Option<MonomialData>,
}

/// Generator matrices of a family member. The `p = 7` extraspecial group is
/// returned unenumerated.
pub fn generators(spec: &FamilySpec) -> Result<FpModule, ZooError> {
    match spec {
        FamilySpec::ExtraspecialP5 => module_from(prime(5)?, 4, extraspecial_p5_generators()),
        FamilySpec::ExtraspecialP7 => module_from(prime(7)?, 8, extraspecial_p7_generators()),
        other => Ok(build(other, false)?.module),
    }
}

/// Builds and checks a family member. The `p = 7` extraspecial group needs `heavy`.
pub fn build(spec: &FamilySpec, heavy: bool) -> Result<ZooInstance, ZooError> {
    let mut monomial_data = None;
    let module = match spec {
        FamilySpec::Sl2pSimple { p, i, group } => sl2_simple(*p, *i, *group)?,
        FamilySpec::Sl2pExt { p, shape, group } => sl2_ext(*p, shape, *group)?,
        FamilySpec::SnPerm { p, n, section, alternating, scalars } => symmetric(*p, *n, *section, *alternating, *scalars)?,
        FamilySpec::SnDeleted { p, n, scalars } => deleted(*p, *n, false, *scalars)?,
        FamilySpec::AnDeleted { p, n, scalars } => deleted(*p, *n, true, *scalars)?,
        FamilySpec::Monomial { p, n, t, r, h_type, sign_twist } => {
            let (v, d) = monomial(*p, *n, *t, r, *h_type, *sign_twist)?;
            monomial_data = Some(d);
            v
        }
        FamilySpec::Gl23 { kind } => gl2_3(*kind)?,
        FamilySpec::ExtraspecialP5 => extraspecial_p5()?,
        FamilySpec::ExtraspecialP7 => {
            if !heavy {
                return Err(ZooError::HeavyComputeDisabled);
            }
            module_from(prime(7)?, 8, extraspecial_p7_generators())?
        }
    };
    Ok(ZooInstance { spec: spec.clone(), module, monomial: monomial_data })
}

/// The family members listed by `zoo list`.
pub fn catalog() -> Vec<FamilySpec> {
    use FamilySpec::*;
    let mut out = vec![Gl23 { kind: Gl23Kind::Natural }, Gl23 { kind: Gl23Kind::TwoOverTwo }];
    for p in [5u32, 7] {
        let pu = p as usize;
        out.extend((2..=pu).map(|i| Sl2pSimple { p, i, group: Sl2Group::Base }));
        out.push(Sl2pSimple { p, i: pu - 2, group: Sl2Group::Full });
        out.extend((2..pu).map(|i| Sl2pExt { p, shape: vec![pu + 1 - i, i], group: Sl2Group::Gl2 }));
        out.extend((1..pu - 1).map(|i| Sl2pExt { p, shape: vec![pu - 1 - i, i], group: Sl2Group::Gl2 }));
        out.push(Sl2pExt { p, shape: vec![1, pu - 2, 1], group: Sl2Group::Gl2 });
        for section in [PermSection::Full, PermSection::WOverOne, PermSection::OneOverW] {
            out.push(SnPerm { p, n: pu, section, alternating: false, scalars: true });
        }
        out.push(SnDeleted { p, n: pu, scalars: false });
        out.push(SnDeleted { p, n: pu + 1, scalars: false });
        out.push(AnDeleted { p, n: pu + 2, scalars: false });
    }
    out.push(Sl2pSimple { p: 7, i: 5, group: Sl2Group::Pgl2 });
    out.push(Monomial { p: 5, n: 5, t: 4, r: None, h_type: HType::Sym, sign_twist: false });
    out.push(Monomial { p: 5, n: 5, t: 4, r: Some(vec![[4, 1]]), h_type: HType::Sym, sign_twist: true });
    out.push(Monomial { p: 5, n: 6, t: 2, r: None, h_type: HType::Pgl2, sign_twist: false });
    out.push(Monomial { p: 7, n: 7, t: 2, r: None, h_type: HType::Affine, sign_twist: false });
    out.push(ExtraspecialP5);
    out.push(ExtraspecialP7);
    out
}

/// Short form of a realizability verdict: `exotic`, a row tag, or `unknown`.
pub fn verdict_tag(e: &Exotic) -> String {
    match e {
        Exotic::Exotic => "exotic".into(),
        Exotic::RealizableBy { row, .. } => row.clone(),
        Exotic::Unknown { .. } => "unknown".into(),
    }
}

/// What a corpus row predicts about the criterion report.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Expectation {
    /// Case tags that must all hold.
    pub cases: Vec<String>,
    /// When set, the menu must be exactly these labels.
    pub menu: Option<Vec<String>>,
    pub e0: String,
    /// A [`verdict_tag`], or `not applicable`.
    pub verdict: String,
    /// When set, the strongly closed list for `e0` must equal it.
    pub strongly_closed: Option<Vec<String>>,
}

/// How `G` is cut down from the family's group before the criterion runs.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Subgroup {
    /// `O^{p'}(G)·μ^{-1}(Δ)` for the named `Δ`.
    OPrimeTimesPreimage(String),
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CorpusEntry {
    pub tag: String,
    /// Which table the row comes from, and its cells.
    pub table: &'static str,
    pub row: &'static str,
    pub spec: Option<FamilySpec>,
    pub subgroup: Option<Subgroup>,
    pub expect: Option<Expectation>,
    /// Rows whose groups are out of reach here; kept as metadata.
    pub not_instantiated: bool,
}

fn exp(cases: &[&str], e0: &str, verdict: &str) -> Expectation {
    Expectation {
        cases: cases.iter().map(|s| s.to_string()).collect(),
        menu: None,
        e0: e0.into(),
        verdict: verdict.into(),
        strongly_closed: None,
    }
}

fn entry(tag: String, table: &'static str, row: &'static str, spec: FamilySpec, expect: Expectation) -> CorpusEntry {
    CorpusEntry { tag, table, row, spec: Some(spec), subgroup: None, expect: Some(expect), not_instantiated: false }
}

/// Table rows paired with instances that realize them.
pub fn table_corpus() -> Vec<CorpusEntry> {
    use FamilySpec::*;
    let mut out = Vec::new();
    for p in [5u32, 7] {
        let pu = p as usize;
        let mut a = entry(
            format!("strongly-closed/perm@{p}"),
            "examples",
            "Γ = S_p × F_p^× on F_p^p | G = O^{p'}(Γ)μ^{-1}(Δ_{-1}) | E0 = H_0 | A_0U strongly closed",
            SnPerm { p, n: pu, section: PermSection::Full, alternating: false, scalars: true },
            Expectation {
                menu: Some(vec!["H_0".into()]),
                strongly_closed: Some(vec!["A_0H_0 = A_0U".into()]),
                ..exp(&["d2"], "H_0", "exotic")
            },
        );
        a.subgroup = Some(Subgroup::OPrimeTimesPreimage("Δ_-1".into()));
        out.push(a);

        let mut b = entry(
            format!("strongly-closed/perm-mod-constants@{p}"),
            "examples",
            "Γ on M/C_M(O^{p'}Γ) | G = O^{p'}(Γ)μ^{-1}(Δ_0) | E0 = B_0: A_0U strongly closed",
            SnPerm { p, n: pu, section: PermSection::OneOverW, alternating: false, scalars: true },
            Expectation { strongly_closed: Some(vec!["A_0H_0 = A_0U".into()]), ..exp(&["d3"], "B_0", "exotic") },
        );
        b.subgroup = Some(Subgroup::OPrimeTimesPreimage("Δ_0".into()));
        out.push(b.clone());
        b.tag = format!("no-strongly-closed/perm-mod-constants@{p}");
        b.row = "Γ on M/C_M(O^{p'}Γ) | G = O^{p'}(Γ)μ^{-1}(Δ_0) | E0 = ∪B_i, |I| >= 2: none";
        b.expect = Some(Expectation { strongly_closed: Some(vec![]), ..exp(&["d3"], "B_0∪B_1", "exotic") });
        out.push(b);

        out.push(entry(
            format!("realizable/PSL_p(q)@{p}"),
            "realizable",
            "PSL_p(q) | p | v_p(q-1)=1, p>3 | p-2 | 1 | p-2 | S_p | H_0∪H_*",
            SnDeleted { p, n: pu, scalars: false },
            exp(&["d2"], "H_0∪H_*", "realizable/PSL_p(q)"),
        ));
        out.push(entry(
            format!("realizable/PSL_n(q)/n={}@{p}", pu + 1),
            "realizable",
            "PSL_n(q) | p | p|(q-1), p<n<2p | n-1 | v_p(q-1) | e(p-1)+1 | S_n | B_0",
            SnDeleted { p, n: pu + 1, scalars: false },
            exp(&["d3"], "B_0", "realizable/PSL_n(q)"),
        ));
        out.push(entry(
            format!("sl2/V_(p-2)/full-scalars@{p}"),
            "sl2-examples",
            "PSL_2(p) | V_{p-2} | G_0.2×(p-1) | μ = Δ | B_0∪H_*",
            Sl2pSimple { p, i: pu - 2, group: Sl2Group::Full },
            exp(&["d1"], "B_0∪H_*", if p == 5 { "realizable/Co1" } else { "exotic" }),
        ));
        out.push(entry(
            format!("sl2/V_(p-2)/gl2@{p}"),
            "sl2-examples",
            "PSL_2(p) | V_{p-2} | G_0.2×(p-1)/2 | μ = Δ_0.(p-1)/2 | B_0",
            Sl2pSimple { p, i: pu - 2, group: Sl2Group::Gl2 },
            exp(&["d3"], "B_0", if p == 5 { "realizable/Sp4(p)" } else { "exotic" }),
        ));
    }
    out.push(entry(
        "sl2/V_5/pgl2@7".into(),
        "sl2-examples",
        "PSL_2(p) | V_{p-2} | PGL_2(p) | μ = Δ_{-1} | ∪H_i",
        Sl2pSimple { p: 7, i: 5, group: Sl2Group::Pgl2 },
        exp(&["d2"], "H_0∪H_*", "exotic"),
    ));
    out.push(entry(
        "sl2/V_4/gl2@7".into(),
        "sl2-examples",
        "SL_2(p) | V_n, n even, 4 <= n <= p-3 | GL_2(p)/Z | B_0",
        Sl2pSimple { p: 7, i: 4, group: Sl2Group::Gl2 },
        exp(&["d3"], "B_0", "exotic"),
    ));
    for (p, n) in [(5u32, 7usize), (7, 9)] {
        out.push(entry(
            format!("realizable/PSL_n(q)/n={n}@{p}"),
            "realizable",
            "PSL_n(q) | p | p|(q-1), p<n<2p | n-1 | v_p(q-1) | e(p-1)+1 | S_n | B_0",
            SnDeleted { p, n, scalars: false },
            exp(&["d3"], "B_0", "realizable/PSL_n(q)"),
        ));
    }
    out.push(entry(
        "realizable/A_pn@5".into(),
        "realizable",
        "A_{pn} | p | p<=n<2p | n | 1 | p | ½C_{p-1}≀S_n | H_0",
        Monomial { p: 5, n: 5, t: 4, r: Some(vec![[4, 1]]), h_type: HType::Sym, sign_twist: true },
        exp(&["d2"], "H_0", "realizable/A_pn"),
    ));
    out.push(entry(
        "realizable/E8(q)@5".into(),
        "realizable",
        "E_8(q) | 5 | q≡±2 (mod 5) | 4 | v_5(q^4-1) | 4e | (C_4∘2^{1+4}).S_6 | H_0∪B_*",
        ExtraspecialP5,
        exp(&["d1"], "H_0∪B_*", "realizable/E8(q)/p=5"),
    ));
    out.push(entry(
        "not-applicable/GL2(3)".into(),
        "almost-simple",
        "p = 3 | 2/2 | GL_2(3) | m = 2",
        Gl23 { kind: Gl23Kind::Natural },
        Expectation { menu: Some(vec![]), ..exp(&[], "", "not applicable") },
    ));
    for (tag, row) in [
        ("metadata/PSp4(3)@5", "p = 5 | PSp_4(3) | 4 | μ = Δ_{-1} | E"),
        ("metadata/2.A6@5", "p = 5 | 2·A_6 | 4 | μ = Δ_2 | E"),
        ("metadata/2.A7@7", "p = 7 | 2·A_7 | 4 | μ = Δ_{3/2} | E"),
        ("metadata/PSU3(3)@7", "p = 7 | PSU_3(3) | 6 | μ = Δ_2 | E"),
        ("metadata/SL2(8)@7", "p = 7 | SL_2(8) | 7 | μ = Δ_{-1} | E"),
        ("metadata/6.PSL3(4)@7", "p = 7 | 6·PSL_3(4) | 6 | μ = F_p^{×2} × F_p^× | E"),
        ("metadata/Sp6(2)@7", "p = 7 | Sp_6(2) | 7 | μ = Δ_3 | E"),
        ("metadata/W(E8)'@7", "p = 7 | 2·Ω_8^+(2) | 8 | μ = Δ_3 | R"),
        ("metadata/J1@11", "p = 11 | J_1 | 7 | μ = Δ_3 | E"),
        ("metadata/2.M12@11", "p = 11 | 2·M_12 | 10 | μ = Δ_{1/2} | E"),
        ("metadata/2.M22@11", "p = 11 | 2·M_22 | 10 | μ = Δ_{-1} | E"),
        ("metadata/PSU5(2)@11", "p = 11 | PSU_5(2) | 10 | μ = Δ_{-1} | E"),
        ("metadata/PSU3(4)@13", "p = 13 | PSU_3(4) | 12 | μ = ⅓Δ_1 | E"),
    ] {
        out.push(CorpusEntry {
            tag: tag.into(),
            table: "almost-simple",
            row,
            spec: None,
            subgroup: None,
            expect: None,
            not_instantiated: true,
        });
    }
    out
}

/// Outcome of running one corpus entry.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct EntryOutcome {
    pub tag: String,
    /// `pass`, `mismatch`, `error` or `metadata`.
    pub status: &'static str,
    pub detail: String,
}

impl EntryOutcome {
    pub fn is_failure(&self) -> bool {
        matches!(self.status, "mismatch" | "error")
    }
}

/// The module an entry runs on, with its subgroup restriction applied.
pub fn entry_module(e: &CorpusEntry) -> Result<Option<FpModule>, ZooError> {
    let Some(spec) = &e.spec else { return Ok(None) };
    let v = build(spec, false)?.module;
    Ok(Some(match &e.subgroup {
        None => v,
        Some(Subgroup::OPrimeTimesPreimage(name)) => {
            let d = mu::named_str(v.prime(), name).map_err(|e| ZooError::InvalidParams(e.to_string()))?;
            FpModule::new(criterion::o_pprime_times_preimage(&v, &d)?)
        }
    }))
}

/// Compares a report against an expectation; `None` on agreement.
pub fn compare(report: &CriterionReport, ex: &Expectation) -> Option<String> {
    if ex.verdict == "not applicable" {
        return (report.verdict() != "not applicable").then(|| format!("verdict: {}", report.verdict()));
    }
    if !report.passes {
        return Some(format!("verdict: {}", report.verdict()));
    }
    let tags: Vec<&str> = report.cases.iter().map(|c| c.tag()).collect();
    if let Some(missing) = ex.cases.iter().find(|c| !tags.contains(&c.as_str())) {
        return Some(format!("case {missing} not among {tags:?}"));
    }
    if let Some(menu) = &ex.menu {
        if report.menu_labels() != menu.iter().map(String::as_str).collect::<Vec<_>>() {
            return Some(format!("menu {:?}", report.menu_labels()));
        }
    }
    let Some(entry) = report.entry(&ex.e0) else {
        return Some(format!("{} not in menu {:?}", ex.e0, report.menu_labels()));
    };
    let got = verdict_tag(&entry.exotic);
    if got != ex.verdict {
        return Some(format!("{}: {got}", ex.e0));
    }
    match &ex.strongly_closed {
        Some(sc) if &entry.strongly_closed != sc => Some(format!("{}: strongly closed {:?}", ex.e0, entry.strongly_closed)),
        _ => None,
    }
}

pub fn run_entry(e: &CorpusEntry) -> EntryOutcome {
    let outcome = |status, detail: String| EntryOutcome { tag: e.tag.clone(), status, detail };
    let Some(ex) = e.expect.as_ref().filter(|_| !e.not_instantiated) else {
        return outcome("metadata", e.row.to_string());
    };
    let module = match entry_module(e) {
        Ok(Some(m)) => m,
        Ok(None) => return outcome("metadata", e.row.to_string()),
        Err(err) => return outcome("error", err.to_string()),
    };
    match criterion::evaluate(&module) {
        Err(err) => outcome("error", err.to_string()),
        Ok(report) => match compare(&report, ex) {
            None if ex.verdict == "not applicable" => outcome("pass", "not applicable".into()),
            None => outcome("pass", format!("{} -> {}", ex.e0, ex.verdict)),
            Some(d) => outcome("mismatch", d),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u_of(v: &FpModule) -> FpMatrix {
        grp::class_gg(v.group()).unwrap().sylow().unwrap().u.clone()
    }

    #[test]
    fn simple_modules() {
        let v = sl2_simple(5, 4, Sl2Group::Base).unwrap();
        assert_eq!(modrep::jordan_profile(&v, &v.generators()[0]).unwrap(), vec![4]);
        assert_eq!(v.group().order().unwrap(), 120);
        assert_eq!(sl2_simple(5, 3, Sl2Group::Gl2).unwrap().group().order().unwrap(), 240);
        assert_eq!(sl2_simple(5, 3, Sl2Group::Pgl2).unwrap().group().order().unwrap(), 120);
        assert!(matches!(sl2_simple(5, 6, Sl2Group::Base), Err(ZooError::InvalidParams(_))));
        assert!(matches!(sl2_simple(2, 2, Sl2Group::Base), Err(ZooError::InvalidParams(_))));
    }

    #[test]
    fn extension_modules_at_5() {
        for (j, i) in [(3, 1), (2, 2), (1, 3), (4, 2), (2, 4)] {
            let w = sl2_ext(5, &[j, i], Sl2Group::Base).unwrap();
            let u = w.generators()[0].clone();
            assert_eq!((w.dim(), socle(&w, &u).dim(), top_dim(&w, &u)), (i + j, i, j));
        }
        let proj = sl2_ext(5, &[1, 3, 1], Sl2Group::Gl2).unwrap();
        assert_eq!(modrep::jordan_profile(&proj, &proj.generators()[0]).unwrap(), vec![5]);
        assert!(matches!(sl2_ext(5, &[3, 2], Sl2Group::Gl2), Err(ZooError::InvalidParams(_))));
    }

    #[test]
    fn symmetric_sections() {
        let w = deleted(5, 5, false, false).unwrap();
        assert_eq!(w.dim(), 3);
        let class = grp::class_gg(w.group()).unwrap();
        let syl = class.sylow().unwrap();
        assert!(modrep::is_minimally_active(&w, syl).unwrap());
        assert_eq!(deleted(7, 8, false, false).unwrap().dim(), 7);
        assert_eq!(deleted(5, 7, true, false).unwrap().group().order().unwrap(), 2520);
        let wo = symmetric(5, 5, PermSection::WOverOne, false, false).unwrap();
        assert_eq!((wo.dim(), socle(&wo, &u_of(&wo)).dim()), (4, 1));
        let ow = symmetric(5, 5, PermSection::OneOverW, false, false).unwrap();
        assert_eq!((ow.dim(), top_dim(&ow, &u_of(&ow))), (4, 1));
        assert!(symmetric(5, 6, PermSection::OneOverW, false, false).is_err());
    }

    #[test]
    fn monomial_groups() {
        let (v, d) = monomial(5, 6, 2, &None, HType::Pgl2, false).unwrap();
        assert!(d.characters_distinct && d.two_transitive);
        assert_eq!(v.group().order().unwrap(), d.k_order * 120);
        let (_, d) = monomial(5, 5, 4, &Some(vec![[4, 1]]), HType::Sym, true).unwrap();
        assert_eq!(d.k_order, 4usize.pow(5) / 2);
        let (v, _) = monomial(5, 5, 4, &Some(vec![[4, 1]]), HType::Sym, true).unwrap();
        assert_eq!(v.group().order().unwrap(), 512 * 120);
        assert!(is_odd(&[1, 0, 2]) && !is_odd(&[1, 2, 0]) && !is_odd(&[0, 1]));
        assert!(matches!(monomial(5, 5, 1, &None, HType::Sym, false), Err(ZooError::InvalidParams(_))));
        assert!(matches!(monomial(5, 5, 2, &Some(vec![[0, 1]]), HType::Sym, false), Err(ZooError::InvalidParams(_))));
    }

    #[test]
    fn gl2_3_modules() {
        assert_eq!(gl2_3(Gl23Kind::Natural).unwrap().group().order().unwrap(), 48);
        let w = gl2_3(Gl23Kind::TwoOverTwo).unwrap();
        assert_eq!(w.dim(), 4);
        assert_eq!(socle(&w, &u_of(&w)).dim(), 2);
    }

    #[test]
    fn heavy_gate() {
        assert!(matches!(build(&FamilySpec::ExtraspecialP7, false), Err(ZooError::HeavyComputeDisabled)));
        assert!(matches!(extraspecial_p7(false), Err(ZooError::HeavyComputeDisabled)));
        assert_eq!(generators(&FamilySpec::ExtraspecialP7).unwrap().dim(), 8);
    }

    #[test]
    fn labels_parse_back() {
        let cat = catalog();
        assert!(cat.len() >= 12);
        for spec in cat {
            let label = spec.label();
            let mut words = label.split(' ');
            let fam = words.next().unwrap();
            let params: Vec<String> = words.map(String::from).collect();
            assert_eq!(FamilySpec::from_params(fam, &params).unwrap(), spec, "{label}");
        }
        assert!(FamilySpec::from_params("sl2p_simple", &["p=5".into()]).is_err());
        assert!(FamilySpec::from_params("sl2p_simple", &["p5".into()]).is_err());
    }

    #[test]
    fn pauli_coordinates() {
        let p = Prime::new(7).unwrap();
        assert_eq!(pauli_coords(&pauli_matrix(p, 3, 5, 3, 4), 3), Some((5, 3, 4)));
        assert_eq!(pauli_coords(&FpMatrix::scalar(p, 8, 2), 3), Some((0, 0, 2)));
        let h = &extraspecial_p7_generators()[6];
        assert_eq!(pauli_coords(h, 3), None);
        assert!(symplectic_key(h, &h.inverse().unwrap(), 3).is_some());
    }
}
