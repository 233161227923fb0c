//! The ten acceptance criteria, one pass/fail line each.

use std::time::{Duration, Instant};

use jconf::report::VerificationReport;
use jconf::suites::{run_suite, SuiteConfig};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(name: &str, cfg: &SuiteConfig) -> (VerificationReport, Duration) {
    let start = Instant::now();
    let r = run_suite(name, cfg).unwrap_or_else(|e| panic!("suite {name}: {e}"));
    (r, start.elapsed())
}

fn failures(r: &VerificationReport) -> String {
    let fs: Vec<String> = r
        .failures()
        .take(3)
        .map(|e| format!("{} {}", e.check_id, e.instance))
        .collect();
    format!("{} failing, e.g. {fs:?}", r.summary.fail)
}

fn count_prefix(r: &VerificationReport, id: &str, inst: &str) -> usize {
    r.entries
        .iter()
        .filter(|e| e.check_id == id && e.instance.starts_with(inst))
        .count()
}

fn c1_jn() -> Outcome {
    let (r, t) = run("jn", &SuiteConfig::default());
    let quads = count_prefix(&r, "jn.jordan", "J_2(");
    let ok = r.all_pass() && quads == 4096 && t < Duration::from_secs(300);
    Outcome {
        ok,
        detail: format!(
            "{} entries, J_2 quadruples {quads}, {t:.2?}; {}",
            r.summary.total,
            failures(&r)
        ),
    }
}

fn c2_js1() -> Outcome {
    let (r, t) = run("js1", &SuiteConfig::default());
    let table = r.count("js1.table");
    let ok =
        r.all_pass() && table == 3 && r.count("js1.jordan") == 16 && t < Duration::from_secs(1);
    Outcome {
        ok,
        detail: format!(
            "table rows {table}, {} entries, {t:.2?}; {}",
            r.summary.total,
            failures(&r)
        ),
    }
}

fn c3_kn() -> Outcome {
    let (r, t) = run("kn", &SuiteConfig::default());
    let sampled = r.count("kn.jacobi.sampled");
    let exhaustive = count_prefix(&r, "kn.jacobi", "K_4(");
    let ok = r.all_pass() && sampled >= 1000 && exhaustive == 4096 && t < Duration::from_secs(300);
    Outcome {
        ok,
        detail: format!(
            "K_4 triples {exhaustive}, K_6 sampled {sampled}, {t:.2?}; {}",
            failures(&r)
        ),
    }
}

fn c4_ck6() -> Outcome {
    let (r, t) = run("ck6", &SuiteConfig::default());
    let ok = r.all_pass() && r.count("ck6.rank") == 1 && r.count("ck6.closure") == 1;
    Outcome {
        ok,
        detail: format!(
            "rank (16|16) and closure certificate, {t:.2?}; {}",
            failures(&r)
        ),
    }
}

fn c5_jck4() -> Outcome {
    let (r, t) = run("jck4", &SuiteConfig::default());
    let ok = r.all_pass()
        && r.count("jck4.ck6.rank") == 1
        && r.count("jck4.ck6.jordan") == 4096
        && r.count("jck4.j3.jordan") == 4096
        && r.count("jck4.isomorphism") == 1;
    Outcome {
        ok,
        detail: format!("{} entries, {t:.2?}; {}", r.summary.total, failures(&r)),
    }
}

fn c6_kkm_brackets() -> Outcome {
    let (a, ta) = run("kkm", &SuiteConfig::default());
    let (b, tb) = run("brackets", &SuiteConfig::default());
    let ids = [
        "brackets.antisymmetry",
        "brackets.leibniz",
        "brackets.jordan-axiom-i",
        "brackets.jordan-axiom-ii",
        "brackets.jordan-axiom-iii",
    ];
    let covered = ids.iter().all(|id| b.count(id) > 0);
    let pb = b.entries.iter().any(|e| e.instance.starts_with("P(0,2)"));
    let ok = a.all_pass() && b.all_pass() && covered && pb && a.count("kkm.jordan") > 0;
    Outcome {
        ok,
        detail: format!(
            "kkm {} entries ({ta:.2?}), brackets {} entries ({tb:.2?}); {}; {}",
            a.summary.total,
            b.summary.total,
            failures(&a),
            failures(&b)
        ),
    }
}

fn c7_bridge() -> Outcome {
    let (r, t) = run("bridge", &SuiteConfig::default());
    let pinned = r
        .entries
        .first()
        .map(|e| e.check_id == "bridge.00-pinning" && e.residual.is_none())
        .unwrap_or(false);
    let has = |p: &str| {
        r.entries
            .iter()
            .any(|e| e.check_id == "bridge.product" && e.instance.starts_with(p))
    };
    let ok = r.all_pass() && pinned && has("J_2→") && has("JS_1→") && has("Cur");
    Outcome {
        ok,
        detail: format!(
            "pinning first: {pinned}, {} entries, {t:.2?}; {}",
            r.summary.total,
            failures(&r)
        ),
    }
}

fn c8_tkk() -> Outcome {
    let (r, t) = run("tkk", &SuiteConfig::default());
    let ok = r.all_pass() && r.count("tkk.sl2") == 12 && count_prefix(&r, "tkk.product", "n=2") > 0;
    Outcome {
        ok,
        detail: format!("{} entries, {t:.2?}; {}", r.summary.total, failures(&r)),
    }
}

fn c9_derivations() -> Outcome {
    let (r, t) = run("derivations", &SuiteConfig::default());
    let ids = [
        "derivations.d_theta",
        "derivations.delta",
        "derivations.d_dt.js11",
        "derivations.d_dt.kkm",
    ];
    let ok = r.all_pass() && ids.iter().all(|id| r.count(id) > 0);
    Outcome {
        ok,
        detail: format!("{} entries, {t:.2?}; {}", r.summary.total, failures(&r)),
    }
}

fn c10_mutation() -> Outcome {
    let (r, t) = run("mutation", &SuiteConfig::default());
    let ok = r.all_pass() && r.summary.total >= 6;
    Outcome {
        ok,
        detail: format!(
            "{} planted defects detected of {}, {t:.2?}",
            r.summary.pass, r.summary.total
        ),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 J_n commutativity and Jordan, n = 0..2", c1_jn),
        ("2 JS_1 table, commutativity and Jordan", c2_js1),
        ("3 K_n anticommutativity and Jacobi", c3_kn),
        ("4 CK_6 rank (16|16) and closure", c4_ck6),
        ("5 JCK_4 realizations and isomorphism", c5_jck4),
        ("6 KKM and bracket identities", c6_kkm_brackets),
        ("7 coefficient bridge", c7_bridge),
        ("8 sl2 triple and TKK product", c8_tkk),
        ("9 derivations", c9_derivations),
        ("10 planted defects detected", c10_mutation),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let o = f();
        println!(
            "[{}] criterion {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.ok {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
