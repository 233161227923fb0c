use jconf::report::{report_emit, Format, Status};
use jconf::suites::{run_suite, SuiteConfig};
use jconf::AlgebraError;

fn with_n(n: usize) -> SuiteConfig {
    SuiteConfig {
        n: Some(n),
        ..SuiteConfig::default()
    }
}

#[test]
fn js1_default_counts() {
    let r = run_suite("js1", &SuiteConfig::default()).unwrap();
    assert!(r.all_pass());
    let comm = r.count("js1.commutativity");
    assert!(comm >= 3 * 4, "{comm}");
    assert_eq!(r.count("js1.jordan"), 16);
    assert_eq!(
        r.notes.len(),
        2,
        "both printed js(1,1) readings are reported"
    );
}

#[test]
fn jn_two_has_4096_quadruples() {
    let r = run_suite("jn", &with_n(2)).unwrap();
    assert!(r.all_pass(), "{}", r.to_text());
    assert_eq!(r.count("jn.jordan"), 4096);
    assert_eq!(r.count("jn.kn-relation"), 1);
}

#[test]
fn every_planted_defect_is_caught() {
    let r = run_suite("mutation", &SuiteConfig::default()).unwrap();
    assert!(r.summary.total >= 6);
    assert!(r
        .entries
        .iter()
        .all(|e| e.status == Status::Pass && e.instance.starts_with("detected")));
}

#[test]
fn reports_are_reproducible() {
    let cfg = SuiteConfig {
        samples: 50,
        seed: 7,
        ..with_n(6)
    };
    let a = run_suite("kn", &cfg).unwrap();
    let b = run_suite("kn", &cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.count("kn.jacobi.sampled"), 50);
    let c = run_suite("kn", &SuiteConfig { seed: 8, ..cfg }).unwrap();
    assert_ne!(a.to_json(), c.to_json());
}

#[test]
fn entries_are_sorted_and_counted() {
    let r = run_suite("tkk", &with_n(0)).unwrap();
    let keys: Vec<_> = r
        .entries
        .iter()
        .map(|e| (&e.check_id, &e.instance))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(r.summary.total, r.summary.pass + r.summary.fail);
    let v: serde_json::Value = serde_json::from_str(&report_emit(&r, Format::Json)).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["config"]["n"], 0);
}

#[test]
fn bridge_pinning_entry_comes_first() {
    let r = run_suite(
        "bridge",
        &SuiteConfig {
            tmin: -1,
            tmax: 1,
            ..with_n(1)
        },
    )
    .unwrap();
    assert!(r.all_pass());
    assert_eq!(r.entries[0].check_id, "bridge.00-pinning");
}

#[test]
fn bad_configs_are_rejected() {
    let cfg = SuiteConfig {
        max_tdeg: -1,
        ..SuiteConfig::default()
    };
    assert!(matches!(
        run_suite("tkk", &cfg),
        Err(AlgebraError::InvalidConfig(_))
    ));
    assert!(matches!(
        run_suite("everything", &SuiteConfig::default()),
        Err(AlgebraError::UnknownSuite(_))
    ));
}

#[test]
fn fail_fast_all_on_passing_suites_runs_everything_small() {
    let cfg = SuiteConfig {
        fail_fast: true,
        tmin: -1,
        tmax: 1,
        max_tdeg: 1,
        ..with_n(0)
    };
    for s in ["derivations", "tkk", "bridge", "brackets"] {
        let r = run_suite(s, &cfg).unwrap();
        assert!(r.all_pass(), "{s}: {}", r.to_text());
        assert!(!r.notes.iter().any(|n| n.starts_with("fail-fast")));
    }
}
