//! Command-line driver: instance and report files, and the `check`, `zoo`,
//! `sgroup` and `regress` commands.

pub mod suite;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::criterion::{self, CriterionError, CriterionReport};
use crate::gfp::{FpMatrix, GfpError, Prime};
use crate::grp::{self, GrpError, MatGroup, CAP_ENV};
use crate::modrep::{self, FpModule, ModError, SubspaceDims, MAX_SPLIT_DIM};
use crate::mu::MuError;
use crate::sgroup::{self, SGroupError, Step2Report, StructureReport, ThetaReport};
use crate::zoo::{self, Extraspecial7, FamilySpec, ZooError};

/// Version of the report layout; bump on any field change.
pub const SCHEMA_VERSION: u32 = 1;

/// Enumeration cap used by `check` without `--heavy` unless `FUSIONSEED_CAP` is set.
pub const LIGHT_CAP: usize = 2_000_000;

/// `Γ = A ⋊ G` larger than this is not enumerated by `sgroup`.
pub const GAMMA_LIMIT: usize = 2_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fusionseed", version, about = "Simple fusion systems from modules over groups with Sylow subgroup of order p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline on an instance file.
    Check {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Lift the light enumeration cap and allow heavy dedicated computations.
        #[arg(long)]
        heavy: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Include wall-clock timing (makes the report run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// List or emit family instances.
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
    /// Structural report on the group `S = A ⋊ U`.
    Sgroup { file: PathBuf },
    /// Run the table corpus and the acceptance suite.
    Regress {
        /// Only entries whose tag contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZooAction {
    List,
    /// `zoo emit <family> key=value ...`
    Emit {
        family: String,
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Optional structure on an instance's generator list.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceLabels {
    /// Indices of the generators of `G0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0_generators: Option<Vec<usize>>,
    /// The full generator list is `Ḡ`: run the pipeline on every `G0 ≤ G ≤ Ḡ`.
    #[serde(default)]
    pub gbar: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceFile {
    pub p: u32,
    pub dim: usize,
    /// Row-major matrices with entries in `[0, p)`.
    pub generators: Vec<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<InstanceLabels>,
    /// Family metadata, echoed verbatim in reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Value>,
}

/// An instance file after validation.
#[derive(Debug, Clone)]
pub struct Instance {
    pub file: InstanceFile,
    pub prime: Prime,
    pub generators: Vec<FpMatrix>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("enumeration cap of {cap} elements exceeded; rerun with --heavy or set {CAP_ENV}")]
    Cap { cap: usize },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Cap { .. } => EXIT_CAP,
            CliError::Failed(_) => EXIT_FAIL,
        }
    }
}

impl From<GrpError> for CliError {
    fn from(e: GrpError) -> Self {
        match e {
            GrpError::CapExceeded { cap } => CliError::Cap { cap },
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<ModError> for CliError {
    fn from(e: ModError) -> Self {
        match e {
            ModError::Grp(g) => g.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<MuError> for CliError {
    fn from(e: MuError) -> Self {
        match e {
            MuError::Grp(g) => g.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<CriterionError> for CliError {
    fn from(e: CriterionError) -> Self {
        match e {
            CriterionError::Grp(g) => g.into(),
            CriterionError::Mod(m) => m.into(),
            CriterionError::Mu(m) => m.into(),
        }
    }
}

impl From<SGroupError> for CliError {
    fn from(e: SGroupError) -> Self {
        match e {
            SGroupError::Grp(g) => g.into(),
            SGroupError::Mod(m) => m.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<ZooError> for CliError {
    fn from(e: ZooError) -> Self {
        match e {
            ZooError::InvalidParams(s) => CliError::Parse(s),
            ZooError::Grp(g) => g.into(),
            ZooError::Mod(m) => m.into(),
            ZooError::Criterion(c) => c.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<GfpError> for CliError {
    fn from(e: GfpError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl InstanceFile {
    pub fn from_module(v: &FpModule, family: Option<Value>) -> Self {
        let generators = v
            .generators()
            .iter()
            .map(|g| g.to_rows().into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect())
            .collect();
        InstanceFile { p: v.prime().value(), dim: v.dim(), generators, labels: None, family }
    }

    /// Checks shapes, entry ranges and invertibility.
    pub fn validate(self) -> Result<Instance, CliError> {
        let p = Prime::new(self.p)?;
        if self.dim == 0 {
            return Err(CliError::Parse("dim must be positive".into()));
        }
        if self.generators.is_empty() {
            return Err(CliError::Parse("no generators".into()));
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for (k, g) in self.generators.iter().enumerate() {
            if g.len() != self.dim || g.iter().any(|r| r.len() != self.dim) {
                return Err(CliError::Parse(format!("generator {k} is not {0}x{0}", self.dim)));
            }
            if g.iter().flatten().any(|&x| x >= self.p as u64) {
                return Err(CliError::Parse(format!("generator {k} has an entry outside [0, {})", self.p)));
            }
            let data = g.iter().flatten().map(|&x| x as u8).collect();
            let m = FpMatrix::from_data(p, self.dim, self.dim, data);
            if !m.is_invertible() {
                return Err(CliError::Parse(format!("generator {k} is singular mod {}", self.p)));
            }
            gens.push(m);
        }
        if let Some(idx) = self.labels.as_ref().and_then(|l| l.g0_generators.as_ref()) {
            if let Some(bad) = idx.iter().find(|&&i| i >= gens.len()) {
                return Err(CliError::Parse(format!("g0 generator index {bad} out of range")));
            }
        }
        Ok(Instance { file: self, prime: p, generators: gens })
    }
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Result<Instance, CliError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    file.validate()
}

/// The cap for a run: `FUSIONSEED_CAP` if set, else the default with
/// `--heavy` and [`LIGHT_CAP`] without.
pub fn effective_cap(heavy: bool) -> usize {
    if std::env::var(CAP_ENV).is_ok() || heavy {
        grp::cap_from_env()
    } else {
        LIGHT_CAP
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Engine {
    pub name: &'static str,
    pub version: &'static str,
}

pub const ENGINE: Engine = Engine { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") };

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InstanceEcho {
    pub p: u32,
    pub dim: usize,
    pub generator_count: usize,
    pub labels: Option<InstanceLabels>,
    pub family: Option<Value>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SylowSummary {
    pub u: Vec<Vec<u8>>,
    pub normalizer_order: usize,
    pub centralizer_order: usize,
    pub automizer_order: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AdmissibleGroup {
    pub order: usize,
    pub cases: Vec<&'static str>,
    pub menu: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportFile {
    pub schema_version: u32,
    pub engine: Engine,
    pub seed: u64,
    pub instance: InstanceEcho,
    /// `full` (generic pipeline) or `normalizer-quotient` (dedicated `p = 7` computation).
    pub method: &'static str,
    pub group_order: Option<usize>,
    pub gg_class: Option<&'static str>,
    pub gg_reason: Option<String>,
    pub sylow: Option<SylowSummary>,
    pub jordan_profile: Option<Vec<usize>>,
    pub minimally_active: Option<bool>,
    pub subspaces: Option<SubspaceDims>,
    /// Summand dimensions from the seeded splitter, when `dim` allows it.
    pub summand_dims: Option<Vec<usize>>,
    pub criterion: Option<CriterionReport>,
    pub verdict: String,
    pub admissible: Option<Vec<AdmissibleGroup>>,
    pub extraspecial_p7: Option<Extraspecial7>,
    pub timing_ms: Option<u128>,
}

fn family_spec(v: &Option<Value>) -> Option<FamilySpec> {
    v.as_ref().and_then(|x| serde_json::from_value(x.clone()).ok())
}

fn echo(inst: &Instance) -> InstanceEcho {
    InstanceEcho {
        p: inst.file.p,
        dim: inst.file.dim,
        generator_count: inst.generators.len(),
        labels: inst.file.labels.clone(),
        family: inst.file.family.clone(),
    }
}

fn empty_report(inst: &Instance, seed: u64, method: &'static str) -> ReportFile {
    ReportFile {
        schema_version: SCHEMA_VERSION,
        engine: ENGINE,
        seed,
        instance: echo(inst),
        method,
        group_order: None,
        gg_class: None,
        gg_reason: None,
        sylow: None,
        jordan_profile: None,
        minimally_active: None,
        subspaces: None,
        summand_dims: None,
        criterion: None,
        verdict: String::new(),
        admissible: None,
        extraspecial_p7: None,
        timing_ms: None,
    }
}

/// The `check` pipeline: grp, modrep, mu, criterion.
pub fn check(inst: &Instance, heavy: bool, seed: u64) -> Result<ReportFile, CliError> {
    if heavy && family_spec(&inst.file.family) == Some(FamilySpec::ExtraspecialP7) {
        let mut report = empty_report(inst, seed, "normalizer-quotient");
        let r = zoo::extraspecial_p7(true)?;
        report.group_order = Some(r.group_order);
        report.verdict = format!("mu = {}, |N_G(U)/U| = {}", r.mu_name, r.n_mod_u);
        report.extraspecial_p7 = Some(r);
        return Ok(report);
    }
    let mut report = empty_report(inst, seed, "full");
    let group = MatGroup::new(inst.prime, inst.file.dim, inst.generators.clone())?.with_cap(effective_cap(heavy));
    let v = FpModule::new(group);
    report.group_order = Some(v.group().order()?);
    let class = grp::class_gg(v.group())?;
    report.gg_class = Some(class.tag());
    if let grp::GGClass::NotInG { reason } = &class {
        report.gg_reason = Some(reason.clone());
    }
    if let Some(syl) = class.sylow() {
        report.sylow = Some(SylowSummary {
            u: syl.u.to_rows(),
            normalizer_order: syl.normalizer.order()?,
            centralizer_order: syl.centralizer.order()?,
            automizer_order: syl.automizer_order,
        });
        report.jordan_profile = Some(modrep::jordan_profile(&v, &syl.u)?);
        report.minimally_active = Some(modrep::is_minimally_active(&v, syl)?);
        report.subspaces = Some(modrep::canonical_subspaces(&v, syl).dims());
    }
    if v.dim() <= MAX_SPLIT_DIM {
        report.summand_dims = Some(modrep::split_summands(&v, seed)?.iter().map(|s| s.dim()).collect());
    }
    let crit = criterion::evaluate(&v)?;
    report.verdict = crit.verdict().to_string();
    report.criterion = Some(crit);

    let labels = inst.file.labels.clone().unwrap_or_default();
    if let (true, Some(idx)) = (labels.gbar, labels.g0_generators) {
        let g0 = v.group().subgroup(idx.iter().map(|&i| inst.generators[i].clone()).collect())?;
        let found = criterion::enumerate_admissible(&g0, v.group())?;
        report.admissible = Some(
            found
                .into_iter()
                .map(|(g, r)| -> Result<AdmissibleGroup, CliError> {
                    Ok(AdmissibleGroup {
                        order: g.order()?,
                        cases: r.cases.iter().map(|c| c.tag()).collect(),
                        menu: r.menu_labels().into_iter().map(String::from).collect(),
                    })
                })
                .collect::<Result<_, _>>()?,
        );
    }
    Ok(report)
}

/// Theta and step-2 results for one representative.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ThetaOutcome {
    pub subgroup: String,
    pub report: Option<ThetaReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SgroupReportFile {
    pub schema_version: u32,
    pub engine: Engine,
    pub instance: InstanceEcho,
    pub structure: StructureReport,
    pub structure_holds: bool,
    pub filtration_dims: Vec<usize>,
    pub filtration_quotients_are_lines: bool,
    pub scalar_law_holds: bool,
    pub class_labels: Vec<u8>,
    pub classes_distinct: bool,
    pub orbit_check: Option<bool>,
    /// `None` when `|S|` is too large for the maximal-subgroup scan.
    pub unique_abelian_maximal: Option<bool>,
    /// The `E0` whose representatives were checked, if the criterion passed.
    pub e0: Option<String>,
    pub theta: Vec<ThetaOutcome>,
    pub step2: Option<Step2Report>,
    pub step2_skipped: Option<String>,
}

/// The `sgroup` command: `S = A ⋊ U`, the `H_i`/`B_i` classes, `Θ` witnesses for
/// one representative per piece of the first admissible `E0` (else `H_0`, `B_0`),
/// and the step-2 conditions on those representatives.
pub fn sgroup_report(inst: &Instance) -> Result<SgroupReportFile, CliError> {
    let group = MatGroup::new(inst.prime, inst.file.dim, inst.generators.clone())?.with_cap(effective_cap(false));
    let v = FpModule::new(group);
    let class = grp::class_gg(v.group())?;
    let syl = class
        .sylow()
        .ok_or_else(|| CliError::Failed(format!("not a group with Sylow subgroup of order p ({})", class.tag())))?;
    let s = sgroup::build_s(&v, syl)?;
    let structure = s.structure();
    let filt = modrep::w_filtration(&v, syl, &syl.normalizer.elements()?.matrices().collect::<Vec<_>>())?;
    let (x, a) = sgroup::choose_x_a(&s, syl)?;
    let hb = sgroup::hb_subgroups(&s, &x, &a);
    let unique = match sgroup::unique_abelian_maximal(&s) {
        Ok(b) => Some(b),
        Err(SGroupError::TooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let e0 = criterion::evaluate(&v)?
        .e0_menu
        .first()
        .and_then(|entry| sgroup::e0_representatives(&hb, &entry.e0).map(|reps| (entry.e0.clone(), reps)));
    let reps = match &e0 {
        Some((_, reps)) => reps.clone(),
        None => vec![("H_0".to_string(), hb.h[0].clone()), ("B_0".to_string(), hb.b[0].clone())],
    };
    let mut theta = Vec::new();
    let mut passing = Vec::new();
    for (name, sub) in &reps {
        match sgroup::theta_witness(&s, syl, sub) {
            Ok(t) => {
                if t.report.passes() {
                    passing.push((sub.clone(), t.clone()));
                }
                theta.push(ThetaOutcome { subgroup: name.into(), report: Some(t.report), error: None });
            }
            Err(e) => theta.push(ThetaOutcome { subgroup: name.into(), report: None, error: Some(e.to_string()) }),
        }
    }
    let gamma_order = (inst.prime.value() as usize).pow(inst.file.dim as u32).saturating_mul(v.group().order()?);
    let (step2, step2_skipped) = if e0.is_none() {
        (None, Some("the criterion offers no E0".to_string()))
    } else if passing.len() < reps.len() {
        (None, Some("a representative failed the theta checks".to_string()))
    } else if gamma_order > GAMMA_LIMIT {
        (None, Some(format!("|A ⋊ G| = {gamma_order} exceeds {GAMMA_LIMIT}")))
    } else {
        let (qs, ts): (Vec<_>, Vec<_>) = passing.into_iter().unzip();
        (Some(sgroup::step2_conditions(&s, &qs, &ts, v.group())?), None)
    };
    Ok(SgroupReportFile {
        schema_version: SCHEMA_VERSION,
        engine: ENGINE,
        instance: echo(inst),
        structure_holds: structure.all_hold(),
        structure,
        filtration_dims: filt.dims(),
        filtration_quotients_are_lines: filt.quotients_are_lines(),
        scalar_law_holds: filt.laws.iter().all(|l| l.holds),
        class_labels: hb.class_labels.clone(),
        classes_distinct: hb.classes_distinct,
        orbit_check: hb.orbit_check,
        unique_abelian_maximal: unique,
        e0: e0.map(|(label, _)| label),
        theta,
        step2,
        step2_skipped,
    })
}

/// Instance file for a family member, with its `FamilySpec` as metadata.
pub fn emit(spec: &FamilySpec) -> Result<InstanceFile, CliError> {
    let v = zoo::generators(spec)?;
    let family = serde_json::to_value(spec).map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(InstanceFile::from_module(&v, Some(family)))
}

/// One line of `regress` output.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RegressLine {
    pub tag: String,
    pub status: String,
    pub detail: String,
}

/// Runs the corpus and the acceptance criteria whose tags contain `filter`.
pub fn regress(filter: Option<&str>) -> Vec<RegressLine> {
    let keep = |tag: &str| filter.is_none_or(|f| tag.contains(f));
    let entries: Vec<zoo::CorpusEntry> = zoo::table_corpus().into_iter().filter(|e| keep(&e.tag)).collect();
    let mut lines: Vec<RegressLine> = parallel_map(&entries, zoo::run_entry)
        .into_iter()
        .map(|o| RegressLine { tag: o.tag, status: o.status.to_string(), detail: o.detail })
        .collect();
    for id in suite::CRITERIA {
        let tag = suite::criterion_tag(id);
        if keep(&tag) {
            let r = suite::run(id);
            lines.push(RegressLine { tag, status: if r.pass { "pass" } else { "mismatch" }.into(), detail: r.detail });
        }
    }
    lines
}

/// Maps `f` over `items` on a small worker pool, preserving order.
fn parallel_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                results.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every item processed")).collect()
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Failed(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Failed(e.to_string())),
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Check { file, out, heavy, seed, timing } => read_instance(&file).and_then(|inst| {
            let start = Instant::now();
            let mut report = check(&inst, heavy, seed)?;
            if timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            write_json(&report, out.as_deref())
        }),
        Command::Zoo { action: ZooAction::List } => {
            for spec in zoo::catalog() {
                println!("{}", spec.label());
            }
            Ok(())
        }
        Command::Zoo { action: ZooAction::Emit { family, params, out } } => {
            FamilySpec::from_params(&family, &params).map_err(CliError::from).and_then(|spec| write_json(&emit(&spec)?, out.as_deref()))
        }
        Command::Sgroup { file } => read_instance(&file).and_then(|inst| write_json(&sgroup_report(&inst)?, None)),
        Command::Regress { filter } => {
            let lines = regress(filter.as_deref());
            for l in &lines {
                println!("{:<48} {:<9} {}", l.tag, l.status, l.detail);
            }
            let bad = lines.iter().filter(|l| l.status == "mismatch" || l.status == "error").count();
            println!("{} entries, {bad} failing", lines.len());
            if bad > 0 {
                Err(CliError::Failed(format!("{bad} regressions")))
            } else {
                Ok(())
            }
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("fusionseed: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym3_sl2_5() -> String {
        let spec = FamilySpec::Sl2pSimple { p: 5, i: 4, group: zoo::Sl2Group::Base };
        serde_json::to_string(&emit(&spec).unwrap()).unwrap()
    }

    #[test]
    fn malformed_instances_are_parse_errors() {
        let cases = [
            "not json",
            r#"{"p": 4, "dim": 1, "generators": [[[1]]]}"#,
            r#"{"p": 5, "dim": 2, "generators": [[[1, 0]]]}"#,
            r#"{"p": 5, "dim": 1, "generators": [[[7]]]}"#,
            r#"{"p": 5, "dim": 1, "generators": [[[0]]]}"#,
            r#"{"p": 5, "dim": 1, "generators": []}"#,
            r#"{"p": 5, "dim": 1, "generators": [[[1]]], "labels": {"g0_generators": [3]}}"#,
        ];
        for c in cases {
            let err = parse_instance(c).unwrap_err();
            assert_eq!(err.exit_code(), EXIT_PARSE, "{c}: {err}");
        }
    }

    #[test]
    fn emitted_instance_round_trips_family() {
        let inst = parse_instance(&sym3_sl2_5()).unwrap();
        let report = check(&inst, false, 1).unwrap();
        assert_eq!(report.instance.family, inst.file.family);
        assert_eq!(report.group_order, Some(120));
        assert_eq!(report.jordan_profile, Some(vec![4]));
        assert_eq!(report.summand_dims, Some(vec![4]));
    }

    #[test]
    fn cap_exceeded_maps_to_exit_3() {
        let e: CliError = CriterionError::Mod(ModError::Grp(GrpError::CapExceeded { cap: 5 })).into();
        assert_eq!(e.exit_code(), EXIT_CAP);
        let inst = parse_instance(&sym3_sl2_5()).unwrap();
        let group = MatGroup::new(inst.prime, 4, inst.generators.clone()).unwrap().with_cap(10);
        let err: CliError = group.order().unwrap_err().into();
        assert_eq!(err.exit_code(), EXIT_CAP);
    }

    #[test]
    fn admissible_enumeration_from_labels() {
        let spec = FamilySpec::Sl2pSimple { p: 5, i: 3, group: zoo::Sl2Group::Full };
        let mut file = emit(&spec).unwrap();
        file.labels = Some(InstanceLabels { g0_generators: Some(vec![0, 1]), gbar: true });
        let report = check(&file.validate().unwrap(), false, 1).unwrap();
        let adm = report.admissible.unwrap();
        assert!(adm.iter().any(|g| g.order == 480));
        assert!(adm.iter().all(|g| !g.menu.is_empty()));
    }
}
