//! The acceptance criteria, shared by `regress` and the `acceptance` test target.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::criterion;
use crate::gfp::{FpMatrix, Prime, Subspace};
use crate::grp::{self, MatGroup};
use crate::modrep::{self, FpModule};
use crate::mu;
use crate::sgroup;
use crate::zoo::{self, FamilySpec, PermSection, Sl2Group};

pub const CRITERIA: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({:.1} s of {} s)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

fn title(id: u8) -> &'static str {
    match id {
        1 => "sl2-mu-law",
        2 => "extension-mu-law",
        3 => "strongly-closed-examples",
        4 => "table-rows",
        5 => "structural-invariants",
        6 => "witnesses",
        7 => "oracles",
        8 => "extraspecial-p7",
        _ => "unknown",
    }
}

fn budget(id: u8) -> Duration {
    Duration::from_secs(match id {
        1 => 5,
        2 => 30,
        3 => 10,
        4 | 6 => 60,
        8 => 1800,
        _ => 600,
    })
}

pub fn criterion_tag(id: u8) -> String {
    format!("acceptance/{id}-{}", title(id))
}

/// Runs one criterion; the result fails if its checks fail or it overruns its budget.
pub fn run(id: u8) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => sl2_mu_law(),
        2 => extension_mu_law(),
        3 => strongly_closed_examples(),
        4 => table_rows(),
        5 => structural_invariants(),
        6 => witnesses(),
        7 => oracles(),
        8 => extraspecial_p7(),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let (mut pass, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if pass && elapsed > budget(id) {
        pass = false;
        detail = format!("over budget; {detail}");
    }
    CriterionResult { id, title: title(id), pass, detail, elapsed, budget: budget(id) }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sylow(v: &FpModule) -> Result<grp::SylowData, String> {
    let class = grp::class_gg(v.group()).map_err(err)?;
    class.sylow().cloned().ok_or_else(|| format!("no Sylow data: {}", class.tag()))
}

fn mu_image_set(v: &FpModule) -> Result<BTreeSet<(u8, u8)>, String> {
    let syl = sylow(v)?;
    let cs = modrep::canonical_subspaces(v, &syl);
    let gv = mu::compute_gvee(&syl, &cs).map_err(err)?;
    Ok(mu::mu_image(&gv).map_err(err)?.elements().clone())
}

/// `{(f(u), g(u)) : u ∈ F_p^×}` computed directly from the field.
fn image_of(p: Prime, f: impl Fn(u8) -> (u8, u8)) -> BTreeSet<(u8, u8)> {
    p.units().map(f).collect()
}

fn sl2_mu_law() -> Outcome {
    let mut n = 0;
    for pv in [5u32, 7] {
        let p = Prime::new(pv).map_err(err)?;
        for i in 2..=pv as usize {
            let v = zoo::sl2_simple(pv, i, Sl2Group::Base).map_err(err)?;
            let got = mu_image_set(&v)?;
            let want = image_of(p, |u| (p.mul(u, u), p.pow(u, i as u64 - 1)));
            ensure(got == want, || format!("p={pv} V_{i}: {got:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} simple modules match {{(u^2, u^(i-1))}}"))
}

fn extension_mu_law() -> Outcome {
    let pv = 5u32;
    let p = Prime::new(pv).map_err(err)?;
    let minus_one = image_of(p, |r| (r, p.inv(r)));
    let mut seen = Vec::new();
    for i in 2..pv as usize {
        let j = pv as usize + 1 - i;
        let v = zoo::sl2_ext(pv, &[j, i], Sl2Group::Gl2).map_err(err)?;
        let got = mu_image_set(&v)?;
        let want = image_of(p, |r| (r, p.pow(r, i as u64 - 1)));
        ensure(got == want, || format!("V_{{{j},{i}}}: {got:?}"))?;
        ensure((got == minus_one) == (i == pv as usize - 1), || format!("Δ_-1 at i = {i}"))?;
        seen.push(format!("V_{{{j},{i}}} -> Δ_{}", i - 1));
    }
    Ok(seen.join(", "))
}

fn corpus_entry(tag: &str) -> Result<zoo::CorpusEntry, String> {
    zoo::table_corpus().into_iter().find(|e| e.tag == tag).ok_or_else(|| format!("no corpus entry {tag}"))
}

fn run_tags(tags: &[String]) -> Outcome {
    for tag in tags {
        let o = zoo::run_entry(&corpus_entry(tag)?);
        ensure(o.status == "pass", || format!("{tag}: {} {}", o.status, o.detail))?;
    }
    Ok(format!("{} rows match", tags.len()))
}

fn strongly_closed_examples() -> Outcome {
    let tags: Vec<String> = [5, 7]
        .iter()
        .flat_map(|p| [format!("strongly-closed/perm@{p}"), format!("no-strongly-closed/perm-mod-constants@{p}")])
        .collect();
    run_tags(&tags)
}

fn report_for(tag: &str) -> Result<criterion::CriterionReport, String> {
    let v = zoo::entry_module(&corpus_entry(tag)?).map_err(err)?.ok_or("metadata row")?;
    criterion::evaluate(&v).map_err(err)
}

fn table_rows() -> Outcome {
    let mut tags = Vec::new();
    for p in [5usize, 7] {
        let tag = format!("realizable/PSL_p(q)@{p}");
        let r = report_for(&tag)?;
        ensure(r.m == p - 2 && (r.m + 1) % (p - 1) == 0, || format!("{tag}: m = {}", r.m))?;
        tags.push(tag);
    }
    let sp4 = "sl2/V_(p-2)/gl2@5".to_string();
    let r = report_for(&sp4)?;
    ensure(r.group_order == 480 / 2, || format!("{sp4}: |G| = {}", r.group_order))?;
    tags.push(sp4);
    tags.push("realizable/PSL_n(q)/n=6@5".into());
    tags.push("realizable/PSL_n(q)/n=9@7".into());
    run_tags(&tags)
}

/// Every built catalog module and every instantiated corpus module.
fn instances() -> Result<Vec<(String, FpModule)>, String> {
    let mut out = Vec::new();
    for spec in zoo::catalog() {
        if spec != FamilySpec::ExtraspecialP7 {
            out.push((spec.label(), zoo::build(&spec, false).map_err(err)?.module));
        }
    }
    for e in zoo::table_corpus() {
        if let Some(v) = zoo::entry_module(&e).map_err(err)? {
            out.push((e.tag.clone(), v));
        }
    }
    Ok(out)
}

fn structural_invariants() -> Outcome {
    let mut checked = 0;
    for (name, v) in instances()? {
        let report = criterion::evaluate(&v).map_err(err)?;
        if !report.passes {
            continue;
        }
        let syl = sylow(&v)?;
        let s = sgroup::build_s(&v, &syl).map_err(err)?;
        let st = s.structure();
        ensure(st.all_hold(), || format!("{name}: {st:?}"))?;
        let normalizing: Vec<FpMatrix> = syl.normalizer.elements().map_err(err)?.matrices().collect();
        let f = modrep::w_filtration(&v, &syl, &normalizing).map_err(err)?;
        ensure(f.quotients_are_lines(), || format!("{name}: filtration {:?}", f.dims()))?;
        ensure(f.laws.iter().all(|l| l.holds), || format!("{name}: scalar law fails"))?;
        checked += 1;
    }
    ensure(checked > 0, || "no passing instances".into())?;
    Ok(format!("{checked} passing instances, zero failures"))
}

fn witnesses() -> Outcome {
    let v = zoo::sl2_simple(5, 3, Sl2Group::Full).map_err(err)?;
    let syl = sylow(&v)?;
    let report = criterion::evaluate(&v).map_err(err)?;
    let label = report.e0_menu.first().map(|e| e.e0.clone()).ok_or("criterion offers no E0")?;
    let s = sgroup::build_s(&v, &syl).map_err(err)?;
    let (x, a) = sgroup::choose_x_a(&s, &syl).map_err(err)?;
    let hb = sgroup::hb_subgroups(&s, &x, &a);
    let reps = sgroup::e0_representatives(&hb, &label).ok_or_else(|| format!("cannot read {label}"))?;
    ensure(
        reps.iter().any(|(n, _)| n.starts_with('H')) && reps.iter().any(|(n, _)| n.starts_with('B')),
        || format!("{label} lacks an H or a B class"),
    )?;
    let mut thetas = Vec::new();
    for (name, q) in &reps {
        let t = sgroup::theta_witness(&s, &syl, q).map_err(err)?;
        ensure(t.report.passes(), || format!("{name}: {:?}", t.report))?;
        thetas.push(t);
    }
    let qs: Vec<_> = reps.iter().map(|(_, q)| q.clone()).collect();
    let step2 = sgroup::step2_conditions(&s, &qs, &thetas, v.group()).map_err(err)?;
    ensure(step2.passes(), || format!("step 2: {step2:?}"))?;
    let names: Vec<&str> = reps.iter().map(|(n, _)| n.as_str()).collect();
    Ok(format!("E0 = {label}: theta (i)-(iv) for {}, step 2 on |Γ| = {}", names.join(" and "), step2.gamma_order))
}

fn oracles() -> Outcome {
    let (n_split, n_fixed) = split_oracle()?;
    let n_gg = sylow_oracle()?;
    let n_q = q_max_oracle()?;
    Ok(format!(
        "indecomposable = one summand on {n_split} modules ({n_fixed} via the fixed-point test); class_GG on {n_gg} groups; Q_max on {n_q} modules"
    ))
}

/// Modules over a common generator list, so sums and tensors are well defined.
fn pools() -> Result<Vec<Vec<FpModule>>, String> {
    let mut pools = Vec::new();
    for p in [5u32, 7] {
        let pu = p as usize;
        let mut base = Vec::new();
        let mut gl2 = Vec::new();
        for i in 2..=pu {
            base.push(zoo::sl2_simple(p, i, Sl2Group::Base).map_err(err)?);
            gl2.push(zoo::sl2_simple(p, i, Sl2Group::Gl2).map_err(err)?);
        }
        for i in 1..pu - 1 {
            base.push(zoo::sl2_ext(p, &[pu - 1 - i, i], Sl2Group::Base).map_err(err)?);
            gl2.push(zoo::sl2_ext(p, &[pu - 1 - i, i], Sl2Group::Gl2).map_err(err)?);
        }
        if p == 5 {
            for i in 2..pu {
                base.push(zoo::sl2_ext(p, &[pu + 1 - i, i], Sl2Group::Base).map_err(err)?);
            }
        }
        let mut sym = Vec::new();
        for section in [PermSection::Full, PermSection::WOverOne, PermSection::OneOverW] {
            sym.push(zoo::symmetric(p, pu, section, false, false).map_err(err)?);
        }
        sym.push(zoo::deleted(p, pu, false, false).map_err(err)?);
        pools.extend([base, gl2, sym]);
    }
    Ok(pools)
}

fn trivial_like(v: &FpModule, dim: usize) -> Result<FpModule, String> {
    let p = v.prime();
    let gens = vec![FpMatrix::identity(p, dim); v.generators().len()];
    FpModule::from_generators(p, dim, gens).map_err(err)
}

fn sum(a: &FpModule, b: &FpModule) -> Result<FpModule, String> {
    let gens = a.generators().iter().zip(b.generators()).map(|(x, y)| x.direct_sum(y)).collect();
    FpModule::from_generators(a.prime(), a.dim() + b.dim(), gens).map_err(err)
}

/// Random sums, tensors, duals and `V ⊕ 1` from the pools.
fn derived_modules(min_count: usize) -> Result<Vec<FpModule>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pools = pools()?;
    let mut out: Vec<FpModule> = pools.iter().flatten().cloned().collect();
    let mut attempts = 0;
    while out.len() < min_count + 40 && attempts < 1000 {
        attempts += 1;
        let pool = pools.choose(&mut rng).expect("pools");
        let a = pool.choose(&mut rng).expect("pool");
        let b = pool.choose(&mut rng).expect("pool");
        let m = match attempts % 4 {
            0 => sum(a, &trivial_like(a, 1)?)?,
            1 if a.dim() + b.dim() <= 24 => sum(a, b)?,
            2 if a.dim() * b.dim() <= 24 => modrep::tensor(a, b).map_err(err)?,
            3 => modrep::dual(a),
            _ => continue,
        };
        out.push(m);
    }
    Ok(out)
}

fn split_oracle() -> Result<(usize, usize), String> {
    let mut n = 0;
    let mut via_fixed = 0;
    for (k, v) in derived_modules(50)?.iter().enumerate() {
        let class = grp::class_gg(v.group()).map_err(err)?;
        let Some(syl) = class.sylow() else { continue };
        let fast = modrep::is_indecomposable(v, syl).map_err(err)?;
        let split = modrep::split_summands(v, 1 + k as u64).map_err(err)?.len() == 1;
        ensure(fast == split, || format!("module {k} (dim {}): test {fast}, splitter {split}", v.dim()))?;
        n += 1;
        if !syl.u.is_identity() && modrep::is_minimally_active(v, syl).map_err(err)? {
            via_fixed += 1;
        }
    }
    ensure(n >= 50, || format!("only {n} modules"))?;
    Ok((n, via_fixed))
}

/// Class of `g` from a full element scan: Sylow count from the number of
/// order-`p` elements, automizer from explicit conjugation.
fn brute_force_class(g: &MatGroup) -> Result<(&'static str, Option<usize>), String> {
    let p = g.prime().value() as usize;
    let e = g.elements().map_err(err)?;
    let order = e.len();
    if order % p != 0 || order % (p * p) == 0 {
        return Ok(("not_in_G", None));
    }
    let elements: Vec<FpMatrix> = e.matrices().collect();
    let of_order_p: Vec<&FpMatrix> = elements.iter().filter(|m| m.order() == p as u64).collect();
    let n_p = of_order_p.len() / (p - 1);
    if n_p == 1 {
        return Ok(("not_in_G", Some(1)));
    }
    let u = of_order_p[0];
    let powers: HashSet<Vec<u8>> = (1..p as u64).map(|k| u.pow(k).data().to_vec()).collect();
    let mut normalizer = 0;
    let mut centralizer = 0;
    for g in &elements {
        let c = g.mul(u).mul(&g.inverse().expect("group element"));
        if powers.contains(c.data()) {
            normalizer += 1;
            if c == *u {
                centralizer += 1;
            }
        }
    }
    let tag = if normalizer / centralizer == p - 1 { "in_GG" } else { "in_G_only" };
    Ok((tag, Some(n_p)))
}

fn sylow_oracle() -> Result<usize, String> {
    let mut groups: Vec<MatGroup> = Vec::new();
    for spec in zoo::catalog() {
        if spec == FamilySpec::ExtraspecialP7 {
            continue;
        }
        let v = zoo::build(&spec, false).map_err(err)?.module;
        if v.group().order().map_err(err)? <= 5000 {
            groups.push(v.group().clone());
        }
    }
    let p5 = Prime::new(5).map_err(err)?;
    let u = FpMatrix::from_rows(p5, &[[1, 1], [0, 1]]).map_err(err)?;
    let d = FpMatrix::from_rows(p5, &[[2, 0], [0, 3]]).map_err(err)?;
    let borel = MatGroup::new(p5, 2, vec![u.clone(), d.clone()]).map_err(err)?;
    let square = MatGroup::new(p5, 4, vec![u.direct_sum(&FpMatrix::identity(p5, 2)), FpMatrix::identity(p5, 2).direct_sum(&u)])
        .map_err(err)?;
    let torus = MatGroup::new(p5, 2, vec![d]).map_err(err)?;
    groups.extend([borel, square, torus]);
    let mut n = 0;
    for g in &groups {
        let class = grp::class_gg(g).map_err(err)?;
        let (tag, n_p) = brute_force_class(g)?;
        let order = g.order().map_err(err)?;
        ensure(class.tag() == tag, || format!("|G| = {order}: class_gg {} vs {tag}", class.tag()))?;
        if let (Some(syl), Some(n_p)) = (class.sylow(), n_p) {
            let index = order / syl.normalizer.order().map_err(err)?;
            ensure(index == n_p, || format!("|G| = {order}: |G:N(U)| = {index}, recount {n_p}"))?;
        }
        n += 1;
    }
    ensure(n >= 20, || format!("only {n} groups"))?;
    Ok(n)
}

/// All subspaces of `z`, grown one vector at a time.
fn all_subspaces(z: &Subspace) -> Vec<Subspace> {
    let vectors = z.elements();
    let mut seen: HashSet<Vec<Vec<u8>>> = HashSet::new();
    let zero = Subspace::zero(z.prime(), z.ambient_dim());
    seen.insert(zero.basis());
    let mut frontier = vec![zero];
    let mut out = frontier.clone();
    while let Some(w) = frontier.pop() {
        for v in &vectors {
            if w.contains_vector(v) {
                continue;
            }
            let bigger = w.sum(&Subspace::span(z.prime(), z.ambient_dim(), std::slice::from_ref(v)));
            if seen.insert(bigger.basis()) {
                out.push(bigger.clone());
                frontier.push(bigger);
            }
        }
    }
    out
}

fn q_max_oracle() -> Result<usize, String> {
    let mut n = 0;
    let mut modules = derived_modules(50)?;
    modules.extend(instances()?.into_iter().map(|(_, v)| v));
    for v in &modules {
        let class = grp::class_gg(v.group()).map_err(err)?;
        let Some(syl) = class.sylow() else { continue };
        let cs = modrep::canonical_subspaces(v, syl);
        if cs.z.dim() > 3 {
            continue;
        }
        let fast = criterion::q_max(v, &cs);
        let exhaustive = all_subspaces(&cs.z)
            .into_iter()
            .filter(|w| v.generators().iter().all(|g| w.is_invariant(g)))
            .fold(Subspace::zero(v.prime(), v.dim()), |acc, w| acc.sum(&w));
        ensure(fast == exhaustive, || format!("dim {}: Q_max {} vs exhaustive {}", v.dim(), fast.dim(), exhaustive.dim()))?;
        n += 1;
    }
    Ok(n)
}

fn extraspecial_p7() -> Outcome {
    let r = zoo::extraspecial_p7(true).map_err(err)?;
    let p = Prime::new(7).map_err(err)?;
    let delta3 = image_of(p, |r| (r, p.pow(r, 3)));
    let got: BTreeSet<(u8, u8)> = r.mu_image.iter().copied().collect();
    ensure(r.n_mod_u == 36, || format!("|N_G(U)/U| = {}", r.n_mod_u))?;
    ensure(got == delta3, || format!("mu image {got:?}"))?;
    ensure(r.mu_name_generic == r.mu_name, || format!("generic scan gives {}", r.mu_name_generic))?;
    Ok(format!("|G| = {}, |N_G(U)/U| = {}, mu = {}", r.group_order, r.n_mod_u, r.mu_name))
}
