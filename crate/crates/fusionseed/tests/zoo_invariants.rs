use fusionseed::grp;
use fusionseed::modrep;
use fusionseed::zoo::{self, FamilySpec};

#[test]
fn catalog_modules_are_minimally_active_and_indecomposable() {
    for spec in zoo::catalog() {
        if spec == FamilySpec::ExtraspecialP7 {
            continue;
        }
        let inst = zoo::build(&spec, false).unwrap_or_else(|e| panic!("{}: {e}", spec.label()));
        let v = &inst.module;
        let class = grp::class_gg(v.group()).unwrap();
        let syl = class.sylow().unwrap_or_else(|| panic!("{}: {}", spec.label(), class.tag()));
        assert!(modrep::is_minimally_active(v, syl).unwrap(), "{}", spec.label());
        assert!(modrep::is_indecomposable(v, syl).unwrap(), "{}", spec.label());
        if let Some(m) = &inst.monomial {
            assert!(m.characters_distinct && m.two_transitive, "{}", spec.label());
        }
    }
}
