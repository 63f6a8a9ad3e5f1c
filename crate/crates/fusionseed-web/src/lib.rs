//! wasm bindings for the static demo page in `www/`.
//!
//! Every export takes and returns JSON strings so the page needs no generated
//! TypeScript types.

use fusionseed::cli;
use fusionseed::grp;
use fusionseed::modrep::{self, FpModule, MAX_SPLIT_DIM};
use fusionseed::zoo::{self, FamilySpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct CatalogItem {
    label: String,
    p: u32,
    heavy: bool,
}

#[derive(Serialize)]
struct Profile {
    name: String,
    dim: usize,
    blocks: Vec<usize>,
}

/// `cells[r-1][s-1]` is true when `(r, s)` lies in the image of `μ`.
#[derive(Serialize)]
struct MuGrid {
    p: u32,
    cells: Vec<Vec<bool>>,
    name: String,
}

#[derive(Serialize)]
struct Analysis {
    verdict: String,
    group_order: Option<usize>,
    gg_class: Option<&'static str>,
    menu: Vec<String>,
    mu: Option<MuGrid>,
    profiles: Vec<Profile>,
    report: cli::ReportFile,
}

/// Jordan blocks of a generator of a Sylow `p`-subgroup, all ones when there is none.
fn blocks(v: &FpModule) -> Result<Vec<usize>, String> {
    let class = grp::class_gg(v.group()).map_err(|e| e.to_string())?;
    match class.sylow() {
        Some(syl) => modrep::jordan_profile(v, &syl.u).map_err(|e| e.to_string()),
        None => Ok(vec![1; v.dim()]),
    }
}

pub fn catalog_json() -> String {
    let items: Vec<CatalogItem> = zoo::catalog()
        .into_iter()
        .map(|s| CatalogItem { label: s.label(), p: s.prime(), heavy: s == FamilySpec::ExtraspecialP7 })
        .collect();
    serde_json::to_string(&items).expect("serializable")
}

pub fn emit_json(label: &str) -> Result<String, String> {
    let mut words = label.split_whitespace();
    let family = words.next().ok_or("empty label")?;
    let params: Vec<String> = words.map(str::to_string).collect();
    let spec = FamilySpec::from_params(family, &params).map_err(|e| e.to_string())?;
    let file = cli::emit(&spec).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&file).map_err(|e| e.to_string())
}

pub fn analyze_json(instance: &str) -> Result<String, String> {
    let inst = cli::parse_instance(instance).map_err(|e| e.to_string())?;
    let report = cli::check(&inst, false, 1).map_err(|e| e.to_string())?;
    let v = FpModule::new(
        grp::MatGroup::new(inst.prime, inst.file.dim, inst.generators.clone()).map_err(|e| e.to_string())?,
    );
    let mut profiles = vec![Profile { name: "V".into(), dim: v.dim(), blocks: blocks(&v)? }];
    if v.dim() <= MAX_SPLIT_DIM {
        let summands = modrep::split_summands(&v, 1).map_err(|e| e.to_string())?;
        if summands.len() > 1 {
            for (k, s) in summands.iter().enumerate() {
                profiles.push(Profile { name: format!("summand {}", k + 1), dim: s.module.dim(), blocks: blocks(&s.module)? });
            }
        }
    }
    let crit = report.criterion.as_ref();
    let mu = crit.and_then(|c| c.mu.as_ref()).map(|m| {
        let p = inst.file.p;
        let mut cells = vec![vec![false; p as usize - 1]; p as usize - 1];
        for &(r, s) in &m.image {
            cells[r as usize - 1][s as usize - 1] = true;
        }
        MuGrid { p, cells, name: m.name.clone() }
    });
    let analysis = Analysis {
        verdict: report.verdict.clone(),
        group_order: report.group_order,
        gg_class: report.gg_class,
        menu: crit.map(|c| c.menu_labels().into_iter().map(String::from).collect()).unwrap_or_default(),
        mu,
        profiles,
        report,
    };
    serde_json::to_string(&analysis).map_err(|e| e.to_string())
}

/// JSON list of catalog entries: `[{label, p, heavy}]`.
#[wasm_bindgen]
pub fn catalog() -> String {
    catalog_json()
}

/// Instance JSON for a catalog label such as `sl2p_simple p=5 i=3 group=full`.
#[wasm_bindgen]
pub fn emit(label: &str) -> Result<String, JsError> {
    emit_json(label).map_err(|e| JsError::new(&e))
}

/// Verdict, `μ` grid and Jordan profiles for an instance JSON.
#[wasm_bindgen]
pub fn analyze(instance: &str) -> Result<String, JsError> {
    analyze_json(instance).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn flagship_grid() {
        let inst = emit_json("sl2p_simple p=5 i=3 group=full").unwrap();
        let a: Value = serde_json::from_str(&analyze_json(&inst).unwrap()).unwrap();
        assert_eq!(a["verdict"], "simple fusion system");
        let cells = a["mu"]["cells"].as_array().unwrap();
        assert_eq!(cells.len(), 4);
        let marked: usize = cells.iter().map(|row| row.as_array().unwrap().iter().filter(|c| **c == true).count()).sum();
        assert_eq!(marked, a["report"]["criterion"]["mu"]["image"].as_array().unwrap().len());
        assert_eq!(a["profiles"][0]["blocks"], serde_json::json!([3]));
    }

    #[test]
    fn decomposable_instance_lists_summands() {
        let inst = emit_json("sn_perm p=5 n=5 section=full alternating=false scalars=false").unwrap();
        let a: Value = serde_json::from_str(&analyze_json(&inst).unwrap()).unwrap();
        assert!(!a["profiles"].as_array().unwrap().is_empty());
        assert!(serde_json::from_str::<Value>(&catalog_json()).unwrap().as_array().unwrap().len() >= 12);
    }
}
