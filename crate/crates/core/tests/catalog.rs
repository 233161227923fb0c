use jconf::conformal::CAlgebra;
use jconf::suites::catalog_algebra;

fn golden(file: &str) -> String {
    let path = format!("{}/../../catalog/{file}.json", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn golden_tables_match_builders() {
    for name in ["J0", "J1", "JS1", "JCK4"] {
        let built = catalog_algebra(name).unwrap();
        let text = golden(name);
        assert_eq!(
            built.to_catalog_json().trim(),
            text.trim(),
            "{name} drifted from its golden file"
        );
        let parsed = CAlgebra::from_catalog_json(&text).unwrap();
        assert!(parsed.same_table(&built), "{name} does not round-trip");
    }
}

#[test]
fn golden_js1_is_the_printed_table() {
    let js = CAlgebra::from_catalog_json(&golden("JS1")).unwrap();
    let (s, t) = (js.index_of("S").unwrap(), js.index_of("T").unwrap());
    assert_eq!(js.render(js.table(s, s)), "2·[S]");
    assert_eq!(js.render(js.table(t, s)), "[T]");
    assert_eq!(js.table(t, t), &js.parse("2·λ[S] + ∂[S]").unwrap());
}

#[test]
fn unknown_catalog_name_is_rejected() {
    assert!(catalog_algebra("J9").is_err());
    assert!(catalog_algebra("ξ").is_err());
}
