use fusionseed::zoo::{self, table_corpus};

#[test]
fn corpus_rows_match() {
    let mut failures = Vec::new();
    for e in table_corpus() {
        let out = zoo::run_entry(&e);
        println!("{:<48} {:<9} {}", out.tag, out.status, out.detail);
        if out.is_failure() {
            failures.push(out.tag);
        }
    }
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn extraspecial_p7_normalizer() {
    let r = zoo::extraspecial_p7(true).unwrap();
    println!("{r:?}");
    assert_eq!(r.quotient_order, 40320);
    assert_eq!(r.kernel_order, 384);
    assert_eq!(r.n_mod_u, 36);
    assert_eq!(r.mu_name, "Δ_3");
    assert_eq!(r.mu_name_generic, r.mu_name);
}
