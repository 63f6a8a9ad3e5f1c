//! The decision procedure: conditions (a)-(d), the essential-class menus,
//! strongly closed subgroups and the realizability lookup.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gfp::{Prime, Subspace};
use crate::grp::{self, GGClass, GrpError, MatGroup, SylowData};
use crate::modrep::{self, CanonicalSubspaces, FpModule, ModError};
use crate::mu::{self, DeltaSubgroup, GVee, MuError};

#[derive(Debug, Error)]
pub enum CriterionError {
    #[error(transparent)]
    Grp(#[from] GrpError),
    #[error(transparent)]
    Mod(#[from] ModError),
    #[error(transparent)]
    Mu(#[from] MuError),
}

/// A vector-space witness, as its RREF basis rows.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SubspaceWitness {
    pub dim: usize,
    pub basis: Vec<Vec<u8>>,
}

impl From<&Subspace> for SubspaceWitness {
    fn from(s: &Subspace) -> Self {
        SubspaceWitness { dim: s.dim(), basis: s.basis() }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CondA {
    pub pass: bool,
    pub dim_z0: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CondB {
    pub pass: bool,
    pub q_max: SubspaceWitness,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CondC {
    pub pass: bool,
    pub commutator: SubspaceWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    D1,
    D2,
    D3,
}

impl Case {
    pub fn tag(self) -> &'static str {
        match self {
            Case::D1 => "d1",
            Case::D2 => "d2",
            Case::D3 => "d3",
        }
    }
}

/// The evaluation of one of (d.1)-(d.3), with its product-decomposition data.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CaseCheck {
    pub case: Case,
    pub holds: bool,
    /// Order of the group `X` in `G = O^{p'}(G) X`.
    pub x_order: usize,
    pub o_pprime_order: usize,
    pub group_order: usize,
    pub conditions: BTreeMap<String, bool>,
}

/// Rows (i)-(iv) of the case table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum TableRow {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
}

/// A set of essential classes besides `A`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum E0Set {
    /// `H_0 ∪ B_*`.
    H0BStar,
    /// `B_0 ∪ H_*`.
    B0HStar,
    /// `∪_{i in I} H_i`, with `I` sorted and nonempty.
    H(Vec<u8>),
    /// `∪_{i in I} B_i`.
    B(Vec<u8>),
}

impl E0Set {
    pub fn label(&self, p: Prime) -> String {
        let union = |letter: &str, idx: &[u8]| -> String {
            if idx.len() == 1 {
                format!("{letter}_{}", idx[0])
            } else if idx.len() == p.value() as usize {
                format!("{letter}_0∪{letter}_*")
            } else {
                let list: Vec<String> = idx.iter().map(|i| format!("{letter}_{i}")).collect();
                list.join("∪")
            }
        };
        match self {
            E0Set::H0BStar => "H_0∪B_*".into(),
            E0Set::B0HStar => "B_0∪H_*".into(),
            E0Set::H(i) => union("H", i),
            E0Set::B(i) => union("B", i),
        }
    }

    /// The single index `i` when the set is one `H_i` or one `B_i`.
    pub fn single_index(&self) -> Option<u8> {
        match self {
            E0Set::H(i) | E0Set::B(i) if i.len() == 1 => Some(i[0]),
            _ => None,
        }
    }

    pub fn parse(s: &str, p: Prime) -> Option<E0Set> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match s.as_str() {
            "H_0∪B_*" => return Some(E0Set::H0BStar),
            "B_0∪H_*" => return Some(E0Set::B0HStar),
            "H_0∪H_*" => return Some(E0Set::H((0..p.value() as u8).collect())),
            "B_0∪B_*" => return Some(E0Set::B((0..p.value() as u8).collect())),
            _ => {}
        }
        let mut letter = None;
        let mut idx = Vec::new();
        for part in s.split('∪') {
            let (l, i) = part.split_once('_')?;
            if letter.is_some_and(|x| x != l) {
                return None;
            }
            letter = Some(l);
            let i: u8 = i.parse().ok()?;
            if u32::from(i) >= p.value() {
                return None;
            }
            idx.push(i);
        }
        idx.sort_unstable();
        idx.dedup();
        match letter? {
            "H" => Some(E0Set::H(idx)),
            "B" => Some(E0Set::B(idx)),
            _ => None,
        }
    }
}

/// The realizability verdict for one essential-class choice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Exotic {
    Exotic,
    RealizableBy { group: String, row: String },
    Unknown { reason: String },
}

/// One simple fusion system: an admissible `E0` with its derived data.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct MenuEntry {
    pub e0: String,
    pub rows: Vec<TableRow>,
    pub strongly_closed: Vec<String>,
    pub exotic: Exotic,
    #[serde(skip)]
    pub set: E0Set,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct MuSummary {
    pub gvee_order: usize,
    pub image: Vec<(u8, u8)>,
    pub name: String,
    pub aliases: Vec<String>,
}

/// Post-hoc structural facts that every passing instance must satisfy.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Consistency {
    pub in_gg_hat: bool,
    pub minimally_active: bool,
    pub indecomposable: bool,
}

impl Consistency {
    pub fn holds(&self) -> bool {
        self.in_gg_hat && self.minimally_active && self.indecomposable
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CriterionReport {
    /// False when `U` is normal or trivial, or when `m < 3`.
    pub applicable: bool,
    pub reason: Option<String>,
    pub group_order: usize,
    pub cond_a: Option<CondA>,
    pub cond_b: Option<CondB>,
    pub cond_c: Option<CondC>,
    pub m: usize,
    pub sigma_ok: bool,
    pub z0_invariant: bool,
    pub a0_invariant: bool,
    pub mu: Option<MuSummary>,
    pub case_checks: Vec<CaseCheck>,
    pub cases: Vec<Case>,
    pub passes: bool,
    pub e0_menu: Vec<MenuEntry>,
    pub consistency: Option<Consistency>,
}

impl CriterionReport {
    pub fn verdict(&self) -> &'static str {
        if self.passes {
            "simple fusion system"
        } else if self.applicable {
            "fails criterion"
        } else {
            "not applicable"
        }
    }

    pub fn menu_labels(&self) -> Vec<&str> {
        self.e0_menu.iter().map(|e| e.e0.as_str()).collect()
    }

    pub fn entry(&self, label: &str) -> Option<&MenuEntry> {
        self.e0_menu.iter().find(|e| e.e0 == label)
    }
}

pub fn check_a(cs: &CanonicalSubspaces) -> bool {
    cs.z0.dim() == 1
}

/// The largest subspace of `Z` invariant under every generator.
pub fn q_max(v: &FpModule, cs: &CanonicalSubspaces) -> Subspace {
    let inverses: Vec<_> = v.generators().iter().map(|g| g.inverse().expect("invertible generator")).collect();
    let mut q = cs.z.clone();
    loop {
        let mut next = q.clone();
        for gi in &inverses {
            next = next.intersect(&q.image_under(gi));
        }
        if next == q {
            return q;
        }
        q = next;
    }
}

pub fn check_b(v: &FpModule, cs: &CanonicalSubspaces) -> (bool, Subspace) {
    let q = q_max(v, cs);
    (q.is_zero() || q == cs.z0, q)
}

pub fn check_c(v: &FpModule) -> (bool, Subspace) {
    let c = modrep::commutator_space(v, v.group());
    (c.is_full(), c)
}

fn invariant(v: &FpModule, w: &Subspace) -> bool {
    v.generators().iter().all(|g| w.is_invariant(g))
}

fn join(g: &MatGroup, a: &MatGroup, b: &MatGroup) -> Result<MatGroup, GrpError> {
    g.subgroup(a.generators().iter().chain(b.generators()).cloned().collect())
}

fn residue(m: usize, p: Prime) -> usize {
    m % (p.value() as usize - 1)
}

fn m_is_zero(m: usize, p: Prime) -> bool {
    residue(m, p) == 0
}

fn m_is_minus_one(m: usize, p: Prime) -> bool {
    residue(m + 1, p) == 0
}

/// Evaluates (d.1)-(d.3). Requires `dim Z0 = 1`.
pub fn check_d(
    v: &FpModule,
    syl: &SylowData,
    cs: &CanonicalSubspaces,
    gvee: &GVee,
) -> Result<Vec<CaseCheck>, CriterionError> {
    let g = v.group();
    let p = v.prime();
    let image = mu::mu_image(gvee)?;
    let o = grp::o_pprime(g, syl)?;
    let group_order = g.order()?;
    let o_order = o.order()?;
    let mut out = Vec::new();
    let covers = |x: &MatGroup| -> Result<(bool, usize), CriterionError> {
        let x_order = x.order()?;
        Ok((grp::product_covers(g, &o, x)?, x_order))
    };

    let gv = gvee.group();
    let (cov, x_order) = covers(&gv)?;
    let mut c1 = BTreeMap::new();
    c1.insert("mu_is_full".to_string(), image == DeltaSubgroup::full(p));
    c1.insert("product_covers".to_string(), cov);
    c1.insert("m_is_0_or_-1".to_string(), m_is_zero(cs.m, p) || m_is_minus_one(cs.m, p));
    c1.insert("dim_at_most_p-1".to_string(), v.dim() < p.value() as usize);
    out.push(CaseCheck { case: Case::D1, holds: c1.values().all(|&b| b), x_order, o_pprime_order: o_order, group_order, conditions: c1 });

    let dm1 = DeltaSubgroup::diagonal(p, -1);
    let x2 = mu::preimage(gvee, &dm1);
    let (cov, x_order) = covers(&x2)?;
    let mut c2 = BTreeMap::new();
    c2.insert("mu_contains_delta_-1".to_string(), image.contains(&dm1));
    c2.insert("product_covers".to_string(), cov);
    out.push(CaseCheck { case: Case::D2, holds: c2.values().all(|&b| b), x_order, o_pprime_order: o_order, group_order, conditions: c2 });

    let d0 = DeltaSubgroup::diagonal(p, 0);
    let x3 = mu::preimage(gvee, &d0);
    let (cov, x_order) = covers(&x3)?;
    let mut c3 = BTreeMap::new();
    c3.insert("mu_contains_delta_0".to_string(), image.contains(&d0));
    c3.insert("product_covers".to_string(), cov);
    c3.insert("z0_not_invariant".to_string(), !invariant(v, &cs.z0));
    out.push(CaseCheck { case: Case::D3, holds: c3.values().all(|&b| b), x_order, o_pprime_order: o_order, group_order, conditions: c3 });
    Ok(out)
}

fn nonempty_subsets(p: u8) -> impl Iterator<Item = Vec<u8>> {
    (1u32..(1 << p)).map(move |mask| (0..p).filter(|i| mask >> i & 1 == 1).collect())
}

/// The admissible `E0` choices with the table rows producing each.
pub fn e0_menu(cases: &[Case], m: usize, sigma_ok: bool, p: Prime) -> Vec<(E0Set, Vec<TableRow>)> {
    let mut menu: BTreeMap<E0Set, Vec<TableRow>> = BTreeMap::new();
    let pv = p.value() as u8;
    let mut add = |s: E0Set, row: TableRow| {
        let rows = menu.entry(s).or_default();
        if !rows.contains(&row) {
            rows.push(row);
        }
    };
    for &case in cases {
        match case {
            Case::D1 => {
                if m_is_zero(m, p) {
                    add(E0Set::H0BStar, TableRow::I);
                }
                if m_is_minus_one(m, p) {
                    add(E0Set::B0HStar, TableRow::II);
                }
            }
            Case::D2 => {
                if m_is_minus_one(m, p) && sigma_ok {
                    nonempty_subsets(pv).for_each(|i| add(E0Set::H(i), TableRow::III));
                } else {
                    add(E0Set::H(vec![0]), TableRow::III);
                }
            }
            Case::D3 => {
                if m_is_zero(m, p) && sigma_ok {
                    nonempty_subsets(pv).for_each(|i| add(E0Set::B(i), TableRow::IV));
                } else {
                    add(E0Set::B(vec![0]), TableRow::IV);
                }
            }
        }
    }
    menu.into_iter().collect()
}

/// Proper strongly closed subgroups: `A0 H_i = A0 B_i` exactly when `A0` is
/// `G`-invariant and `E0` is a single class.
pub fn strongly_closed(a0_invariant: bool, e0: &E0Set) -> Vec<String> {
    match e0.single_index() {
        Some(0) if a0_invariant => vec!["A_0H_0 = A_0U".to_string()],
        Some(i) if a0_invariant => vec![format!("A_0H_{i}")],
        _ => vec![],
    }
}

/// The realizable rows at exponent `p`, transcribed cell for cell.
#[derive(Debug, Clone, Copy)]
pub struct RealizableRow {
    pub tag: &'static str,
    pub gamma: &'static str,
    pub p: &'static str,
    pub conditions: &'static str,
    pub rank: &'static str,
    pub e: &'static str,
    pub m: &'static str,
    pub group: &'static str,
    pub e0: &'static str,
}

pub const REALIZABLE_ROWS: &[RealizableRow] = &[
    RealizableRow { tag: "realizable/A_pn", gamma: "A_{pn}", p: "p", conditions: "p≤n<2p", rank: "n", e: "1", m: "p", group: "½C_{p-1}≀S_n", e0: "H_0" },
    RealizableRow { tag: "realizable/Sp4(p)", gamma: "Sp_4(p)", p: "p", conditions: "none", rank: "3", e: "1", m: "3", group: "GL_2(p)/{±I}", e0: "B_0" },
    RealizableRow { tag: "realizable/PSL_p(q)", gamma: "PSL_p(q)", p: "p", conditions: "v_p(q-1)=1, p>3", rank: "p-2", e: "1", m: "p-2", group: "S_p", e0: "H_0∪H_*" },
    RealizableRow { tag: "realizable/PSL_p(q)/e>1", gamma: "PSL_p(q)", p: "p", conditions: "p^2|(q-1), p>3", rank: "p-1", e: "v_p(q-1)", m: "e(p-1)-1", group: "S_p", e0: "H_0∪H_*" },
    RealizableRow { tag: "realizable/PSL_n(q)", gamma: "PSL_n(q)", p: "p", conditions: "p|(q-1), p<n<2p", rank: "n-1", e: "v_p(q-1)", m: "e(p-1)+1", group: "S_n", e0: "B_0" },
    RealizableRow { tag: "realizable/POmega_2n^+(q)", gamma: "PΩ_{2n}^+(q)", p: "p", conditions: "p|(q-1), p≤n<2p", rank: "n", e: "v_p(q-1)", m: "e(p-1)+1", group: "C_2^{n-1}⋊S_n", e0: "B_0" },
    RealizableRow { tag: "realizable/2F4(q)", gamma: "²F_4(q)", p: "3", conditions: "q≥8", rank: "2", e: "v_3(q+1)", m: "2e", group: "GL_2(3)", e0: "B_0∪B_*" },
    RealizableRow { tag: "realizable/E_n(q)/p=5", gamma: "E_n(q)", p: "5", conditions: "n=6,7, p|(q-1)", rank: "n", e: "v_p(q-1)", m: "4e+1", group: "W(E_n)", e0: "B_0" },
    RealizableRow { tag: "realizable/E_n(q)/p=7", gamma: "E_n(q)", p: "7", conditions: "n=7,8, p|(q-1)", rank: "n", e: "v_p(q-1)", m: "6e+1", group: "W(E_n)", e0: "B_0" },
    RealizableRow { tag: "realizable/E8(q)/p=5", gamma: "E_8(q)", p: "5", conditions: "q≡±2 (mod 5)", rank: "4", e: "v_5(q^4-1)", m: "4e", group: "(C_4∘2^{1+4}).S_6", e0: "H_0∪B_*" },
    RealizableRow { tag: "realizable/Co1", gamma: "Co_1", p: "5", conditions: "none", rank: "3", e: "1", m: "3", group: "4×S_5", e0: "B_0∪H_*" },
];

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

const WEYL_E: [(usize, u128); 3] = [(6, 51_840), (7, 2_903_040), (8, 696_729_600)];

/// For an exponent-`p` instance, the group order a row demands at
/// `(p, rank, m)`, or `None` when the row does not apply there.
fn row_order(row: &RealizableRow, p: u32, rank: usize, m: usize) -> Option<u128> {
    let pu = p as usize;
    let (pw, n) = (p as u128, rank as u128);
    let weyl = |n: usize| WEYL_E.iter().find(|w| w.0 == n).map(|w| w.1);
    match row.tag {
        "realizable/A_pn" => (pu <= rank && rank < 2 * pu && m == pu).then(|| (pw - 1).pow(rank as u32) * factorial(n) / 2),
        "realizable/Sp4(p)" => (rank == 3 && m == 3).then(|| pw * (pw - 1) * (pw - 1) * (pw + 1) / 2),
        "realizable/PSL_p(q)" => (p > 3 && rank == pu - 2 && m == pu - 2).then(|| factorial(pw)),
        // the e > 1 rows never occur at exponent p
        "realizable/PSL_p(q)/e>1" => None,
        "realizable/PSL_n(q)" => {
            let deg = rank + 1;
            (pu < deg && deg < 2 * pu && m == pu).then(|| factorial(deg as u128))
        }
        "realizable/POmega_2n^+(q)" => (pu <= rank && rank < 2 * pu && m == pu).then(|| (1u128 << (rank - 1)) * factorial(n)),
        "realizable/2F4(q)" => (p == 3 && rank == 2 && m == 2).then_some(48),
        "realizable/E_n(q)/p=5" => (p == 5 && (rank == 6 || rank == 7) && m == 5).then(|| weyl(rank)).flatten(),
        "realizable/E_n(q)/p=7" => (p == 7 && (rank == 7 || rank == 8) && m == 7).then(|| weyl(rank)).flatten(),
        "realizable/E8(q)/p=5" => (p == 5 && rank == 4 && m == 4).then_some(46_080),
        "realizable/Co1" => (p == 5 && rank == 3 && m == 3).then_some(480),
        _ => None,
    }
}

/// Matches `(p, rank, m, |G|, E0)` against the realizable rows. Anything
/// unmatched is exotic; several matches are reported as unknown.
pub fn exotic_lookup(p: Prime, rank: usize, m: usize, group_order: usize, e0: &E0Set) -> Exotic {
    if m < 3 {
        return Exotic::Unknown { reason: format!("m = {m} is below 3") };
    }
    let hits: Vec<&RealizableRow> = REALIZABLE_ROWS
        .iter()
        .filter(|row| row_order(row, p.value(), rank, m) == Some(group_order as u128))
        .filter(|row| E0Set::parse(row.e0, p).as_ref() == Some(e0))
        .collect();
    match hits.as_slice() {
        [] => Exotic::Exotic,
        [row] => Exotic::RealizableBy { group: row.gamma.to_string(), row: row.tag.to_string() },
        many => Exotic::Unknown {
            reason: format!("ambiguous: {}", many.iter().map(|r| r.tag).collect::<Vec<_>>().join(", ")),
        },
    }
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableRow::I => "i",
            TableRow::II => "ii",
            TableRow::III => "iii",
            TableRow::IV => "iv",
        })
    }
}

fn not_applicable(reason: String, group_order: usize) -> CriterionReport {
    CriterionReport {
        applicable: false,
        reason: Some(reason),
        group_order,
        cond_a: None,
        cond_b: None,
        cond_c: None,
        m: 0,
        sigma_ok: false,
        z0_invariant: false,
        a0_invariant: false,
        mu: None,
        case_checks: vec![],
        cases: vec![],
        passes: false,
        e0_menu: vec![],
        consistency: None,
    }
}

/// Runs the full pipeline on the module's own group.
pub fn evaluate(v: &FpModule) -> Result<CriterionReport, CriterionError> {
    let g = v.group();
    let group_order = g.order()?;
    let class = grp::class_gg(g)?;
    let syl = match class.sylow() {
        Some(s) => s.clone(),
        None => {
            let GGClass::NotInG { reason } = class else { unreachable!() };
            return Ok(not_applicable(reason, group_order));
        }
    };
    evaluate_with(v, &syl, matches!(class, GGClass::InGG(_)))
}

/// Pipeline body for a known Sylow subgroup.
pub fn evaluate_with(v: &FpModule, syl: &SylowData, in_gg_hat: bool) -> Result<CriterionReport, CriterionError> {
    let p = v.prime();
    let group_order = v.group().order()?;
    let cs = modrep::canonical_subspaces(v, syl);
    let a_pass = check_a(&cs);
    let (b_pass, q) = check_b(v, &cs);
    let (c_pass, comm) = check_c(v);
    let sigma_ok = v.dim() < p.value() as usize;
    let applicable = cs.m >= 3;
    let mut report = CriterionReport {
        applicable,
        reason: (!applicable).then(|| format!("m = {} is below 3", cs.m)),
        group_order,
        cond_a: Some(CondA { pass: a_pass, dim_z0: cs.z0.dim() }),
        cond_b: Some(CondB { pass: b_pass, q_max: (&q).into() }),
        cond_c: Some(CondC { pass: c_pass, commutator: (&comm).into() }),
        m: cs.m,
        sigma_ok,
        z0_invariant: invariant(v, &cs.z0),
        a0_invariant: invariant(v, &cs.a0),
        mu: None,
        case_checks: vec![],
        cases: vec![],
        passes: false,
        e0_menu: vec![],
        consistency: None,
    };
    if !a_pass {
        return Ok(report);
    }
    let gvee = mu::compute_gvee(syl, &cs)?;
    let image = mu::mu_image(&gvee)?;
    let rec = image.recognize();
    report.mu = Some(MuSummary {
        gvee_order: gvee.order(),
        image: image.elements().iter().copied().collect(),
        name: rec.name,
        aliases: rec.aliases,
    });
    report.case_checks = check_d(v, syl, &cs, &gvee)?;
    report.cases = report.case_checks.iter().filter(|c| c.holds).map(|c| c.case).collect();
    report.passes = applicable && a_pass && b_pass && c_pass && !report.cases.is_empty();
    if report.passes {
        report.e0_menu = e0_menu(&report.cases, cs.m, sigma_ok, p)
            .into_iter()
            .map(|(set, rows)| MenuEntry {
                e0: set.label(p),
                rows,
                strongly_closed: strongly_closed(report.a0_invariant, &set),
                exotic: exotic_lookup(p, v.dim(), cs.m, group_order, &set),
                set,
            })
            .collect();
        report.consistency = Some(Consistency {
            in_gg_hat,
            minimally_active: modrep::is_minimally_active(v, syl)?,
            indecomposable: modrep::is_indecomposable(v, syl)?,
        });
    }
    Ok(report)
}

/// Runs the pipeline on every `G` with `g0 <= G <= gbar` and keeps the passing ones.
pub fn enumerate_admissible(g0: &MatGroup, gbar: &MatGroup) -> Result<Vec<(MatGroup, CriterionReport)>, CriterionError> {
    let mut out = Vec::new();
    for g in grp::intermediate_subgroups(g0, gbar)? {
        let v = FpModule::new(g.clone());
        let report = evaluate(&v)?;
        if report.passes {
            out.push((g, report));
        }
    }
    Ok(out)
}

/// `O^{p'}(G) · μ^{-1}(d)` inside `G`.
pub fn o_pprime_times_preimage(v: &FpModule, d: &DeltaSubgroup) -> Result<MatGroup, CriterionError> {
    let g = v.group();
    let syl = match grp::class_gg(g)?.sylow() {
        Some(s) => s.clone(),
        None => return Err(GrpError::InvalidGenerators("no non-normal Sylow subgroup of order p".into()).into()),
    };
    let cs = modrep::canonical_subspaces(v, &syl);
    let gvee = mu::compute_gvee(&syl, &cs)?;
    let o = grp::o_pprime(g, &syl)?;
    Ok(join(g, &o, &mu::preimage(&gvee, d))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfp::FpMatrix;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn cycle(p: Prime, n: usize, k: usize) -> FpMatrix {
        let perm: Vec<usize> = (0..n).map(|i| if i < k { (i + 1) % k } else { i }).collect();
        FpMatrix::permutation(p, &perm)
    }

    fn swap(p: Prime, n: usize) -> FpMatrix {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(0, 1);
        FpMatrix::permutation(p, &perm)
    }

    fn sym_with_scalars(p: Prime, n: usize) -> FpModule {
        let gens = vec![cycle(p, n, n), swap(p, n), FpMatrix::scalar(p, n, p.primitive_root() as u8)];
        FpModule::from_generators(p, n, gens).unwrap()
    }

    fn syl(v: &FpModule) -> SylowData {
        grp::class_gg(v.group()).unwrap().sylow().unwrap().clone()
    }

    #[test]
    fn condition_a_examples() {
        let p = f(5);
        let perm = FpModule::from_generators(p, 5, vec![cycle(p, 5, 5), swap(p, 5)]).unwrap();
        assert!(check_a(&modrep::canonical_subspaces(&perm, &syl(&perm))));

        let u = FpMatrix::from_rows(p, &[[1, 1], [0, 1]]).unwrap();
        let w = FpMatrix::from_rows(p, &[[0, 4], [1, 0]]).unwrap();
        let two = FpModule::from_generators(p, 4, vec![u.direct_sum(&u), w.direct_sum(&w)]).unwrap();
        assert_eq!(modrep::canonical_subspaces(&two, &syl(&two)).z0.dim(), 2);
    }

    #[test]
    fn condition_b_and_c_examples() {
        let p = f(5);
        let v = sym_with_scalars(p, 5);
        let cs = modrep::canonical_subspaces(&v, &syl(&v));
        let (pass, q) = check_b(&v, &cs);
        assert!(pass);
        assert_eq!(q, cs.z0);
        assert!(check_c(&v).0);

        let perm = FpModule::from_generators(p, 5, vec![cycle(p, 5, 5), swap(p, 5)]).unwrap();
        let (pass, comm) = check_c(&perm);
        assert!(!pass);
        assert_eq!(comm.dim(), 4);
    }

    #[test]
    fn strongly_closed_example_at_p5() {
        let p = f(5);
        let gamma = sym_with_scalars(p, 5);
        let g = o_pprime_times_preimage(&gamma, &DeltaSubgroup::diagonal(p, -1)).unwrap();
        assert_eq!(g.order().unwrap() * 2, gamma.group().order().unwrap());
        let v = FpModule::new(g);
        let r = evaluate(&v).unwrap();
        assert!(r.passes);
        assert_eq!(r.cases, vec![Case::D2]);
        assert_eq!(r.menu_labels(), vec!["H_0"]);
        let e = &r.e0_menu[0];
        assert_eq!(e.strongly_closed, vec!["A_0H_0 = A_0U".to_string()]);
        assert_eq!(e.exotic, Exotic::Exotic);
        assert!(r.consistency.as_ref().unwrap().holds());
    }

    #[test]
    fn menu_sizes() {
        let p = f(5);
        assert_eq!(e0_menu(&[Case::D2], 3, true, p).len(), 31);
        assert_eq!(e0_menu(&[Case::D2], 5, false, p), vec![(E0Set::H(vec![0]), vec![TableRow::III])]);
        assert_eq!(e0_menu(&[Case::D3], 4, true, p).len(), 31);
        assert_eq!(e0_menu(&[Case::D3], 5, true, p).len(), 1);
        let both = e0_menu(&[Case::D1, Case::D3], 4, true, p);
        assert_eq!(both[0].0, E0Set::H0BStar);
        assert_eq!(both.len(), 32);
        assert!(e0_menu(&[], 4, true, p).is_empty());
    }

    #[test]
    fn strongly_closed_rules() {
        assert!(strongly_closed(true, &E0Set::H0BStar).is_empty());
        assert!(strongly_closed(true, &E0Set::B(vec![0, 2])).is_empty());
        assert!(strongly_closed(false, &E0Set::B(vec![0])).is_empty());
        assert_eq!(strongly_closed(true, &E0Set::B(vec![3])), vec!["A_0H_3".to_string()]);
    }

    #[test]
    fn lookup_rows() {
        let p5 = f(5);
        let r = exotic_lookup(p5, 3, 3, 240, &E0Set::B(vec![0]));
        assert!(matches!(r, Exotic::RealizableBy { ref group, .. } if group == "Sp_4(p)"));
        let r = exotic_lookup(p5, 3, 3, 480, &E0Set::B0HStar);
        assert!(matches!(r, Exotic::RealizableBy { ref group, .. } if group == "Co_1"));
        let p7 = f(7);
        let full = E0Set::H((0..7).collect());
        let r = exotic_lookup(p7, 5, 5, 5040, &full);
        assert!(matches!(r, Exotic::RealizableBy { ref group, .. } if group == "PSL_p(q)"));
        assert_eq!(exotic_lookup(p7, 5, 5, 5040, &E0Set::H(vec![0, 1])), Exotic::Exotic);
        assert_eq!(exotic_lookup(p5, 5, 5, 240, &E0Set::H(vec![0])), Exotic::Exotic);
        let r = exotic_lookup(p5, 4, 4, 46_080, &E0Set::H0BStar);
        assert!(matches!(r, Exotic::RealizableBy { ref group, .. } if group == "E_8(q)"));
    }

    #[test]
    fn labels_parse_back() {
        let p = f(5);
        for s in [E0Set::H0BStar, E0Set::B0HStar, E0Set::H(vec![0]), E0Set::B(vec![1, 3]), E0Set::H((0..5).collect())] {
            assert_eq!(E0Set::parse(&s.label(p), p), Some(s));
        }
        assert_eq!(E0Set::H((0..5).collect()).label(p), "H_0∪H_*");
        assert_eq!(E0Set::parse("H_9", p), None);
    }
}
