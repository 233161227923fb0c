//! Named verification suites producing [`VerificationReport`]s.

use std::fmt::Display;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::annihilation::{
    ad_h_eigenvalue, current_realization, jn_realization, js1_realization, js1_realization_with,
    kaplansky_k3, sl2_assign, sl2_residuals, small_signature, tkk_embed, tkk_product_residual_with,
    CoefRealization, TkkEmbedding,
};
use crate::brackets::{
    antisymmetry_residual, bracket_derivation_residual, jacobi_residual as bracket_jacobi,
    jordan_bracket_axiom_residuals, leibniz_residual, BracketKind,
};
use crate::conformal::{
    comm_residual_conf, conformal_jordan_residual, cur, jacobi_residual, sesquilinearity_residual,
    CAlgebra, FVar, FormalPoly, Variety,
};
use crate::constructions::{
    build_ck6, build_jck4_from_ck6, build_jck4_in_j3, build_jn, build_js1, build_kn,
    find_monomial_isomorphism, homomorphism_failure, jck4_printed_odd_elements, jn_index,
    jn_kn_remark_failures, omega56_eigenvalue,
};
use crate::error::{AlgebraError, Result};
use crate::jordan::{
    comm_residual, d_dt, d_dt_kkm, d_theta, derivation_residual, kkm_monomials,
    lin_jordan_residual, linear_map_on_basis, CustomProduct, Js11, Js11Convention, KKMElem,
    KkmDouble, LinearMap, Superalgebra,
};
use crate::report::{Entry, VerificationReport};
use crate::scalar::FieldElem;
use crate::superpoly::{monomial_basis, Parity, SPoly, Signature, Var};

pub const SUITES: &[&str] = &[
    "jn",
    "js1",
    "kn",
    "ck6",
    "jck4",
    "kkm",
    "brackets",
    "tkk",
    "bridge",
    "derivations",
    "mutation",
    "all",
];

/// Parameters shared by all suites. `n = None` runs each suite's default range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub n: Option<usize>,
    /// Laurent window for coefficient indices.
    pub tmin: i64,
    pub tmax: i64,
    /// Bound on `|t|`-degrees of enumerated monomials.
    pub max_tdeg: i32,
    /// `∂`-degree bound for span closures; `None` picks it from the tables.
    pub max_ddeg: Option<u8>,
    pub seed: u64,
    /// Number of random triples for `K_6`.
    pub samples: usize,
    pub fail_fast: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: None,
            tmin: -3,
            tmax: 3,
            max_tdeg: 2,
            max_ddeg: None,
            seed: 2024,
            samples: 1000,
            fail_fast: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tmin > self.tmax {
            return Err(AlgebraError::InvalidConfig(format!(
                "tmin {} > tmax {}",
                self.tmin, self.tmax
            )));
        }
        if self.max_tdeg < 0 {
            return Err(AlgebraError::InvalidConfig(format!(
                "max-tdeg {} is negative",
                self.max_tdeg
            )));
        }
        Ok(())
    }

    fn json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    fn ns(&self, default: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        self.n.map_or_else(|| default.collect(), |n| vec![n])
    }

    fn window(&self) -> std::ops::RangeInclusive<i64> {
        self.tmin..=self.tmax
    }

    fn tdeg(&self) -> std::ops::RangeInclusive<i32> {
        -self.max_tdeg..=self.max_tdeg
    }
}

/// Runs one named suite, or all of them for `"all"`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut r = VerificationReport::new(name, cfg.json());
    match name {
        "jn" => jn_suite(cfg, &mut r)?,
        "js1" => js1_suite(cfg, &mut r)?,
        "kn" => kn_suite(cfg, &mut r)?,
        "ck6" => ck6_suite(cfg, &mut r)?,
        "jck4" => jck4_suite(cfg, &mut r)?,
        "kkm" => kkm_suite(cfg, &mut r)?,
        "brackets" => brackets_suite(cfg, &mut r)?,
        "tkk" => tkk_suite(cfg, &mut r)?,
        "bridge" => bridge_suite(cfg, &mut r)?,
        "derivations" => derivations_suite(cfg, &mut r)?,
        "mutation" => mutation_suite(cfg, &mut r)?,
        "all" => {
            for s in SUITES.iter().filter(|s| **s != "all") {
                let sub = run_suite(s, cfg)?;
                let failed = !sub.all_pass();
                r.absorb(sub);
                if failed && cfg.fail_fast {
                    r.note(format!("stopped after failing suite {s}"));
                    break;
                }
            }
        }
        other => return Err(AlgebraError::UnknownSuite(other.to_string())),
    }
    r.finalize();
    Ok(r)
}

/// Names accepted by [`catalog_algebra`].
pub const CATALOG: &[&str] = &[
    "J0", "J1", "J2", "J3", "JS1", "K0", "K1", "K2", "K3", "K4", "K6", "CK6", "JCK4", "JCK4-J3",
];

/// Builds a named algebra for export as a catalog file.
pub fn catalog_algebra(name: &str) -> Result<CAlgebra> {
    let digit = |s: &str| s.parse::<usize>().ok();
    match name {
        "JS1" => build_js1(),
        "CK6" => build_ck6(&build_kn(6)?, None)?
            .table
            .ok_or_else(|| AlgebraError::ClosureFailure("CK_6".into())),
        "JCK4" => {
            let k6 = build_kn(6)?;
            let ck6 = build_ck6(&k6, None)?;
            Ok(build_jck4_from_ck6(&k6, &ck6)?.algebra)
        }
        "JCK4-J3" => build_jck4_in_j3(&build_jn(3)?, None)?
            .table
            .ok_or_else(|| AlgebraError::ClosureFailure("JCK_4 in J_3".into())),
        _ => match (name.chars().next(), name.get(1..).and_then(digit)) {
            (Some('J'), Some(n)) if n <= 3 => build_jn(n),
            (Some('K'), Some(n)) if n <= 6 => build_kn(n),
            _ => Err(AlgebraError::UnregisteredAlgebra(name.to_string())),
        },
    }
}

fn entry<T>(
    id: &str,
    inst: String,
    res: Result<T>,
    is_zero: impl Fn(&T) -> bool,
    show: impl Fn(&T) -> String,
) -> Entry {
    match res {
        Ok(x) if is_zero(&x) => Entry::pass(id, inst),
        Ok(x) => Entry::fail(id, inst, show(&x)),
        Err(e) => Entry::fail(id, inst, format!("error: {e}")),
    }
}

fn conf_entry(alg: &CAlgebra, id: &str, inst: String, res: Result<FormalPoly>) -> Entry {
    entry(id, inst, res, FormalPoly::is_zero, |p| alg.render(p))
}

fn alg_entry<A: Superalgebra>(alg: &A, id: &str, inst: String, res: Result<A::Elem>) -> Entry {
    entry(id, inst, res, |x| alg.is_zero(x), |x| x.to_string())
}

fn check(id: &str, inst: impl Into<String>, ok: bool, why: impl Display) -> Entry {
    if ok {
        Entry::pass(id, inst)
    } else {
        Entry::fail(id, inst, why.to_string())
    }
}

/// Stops a suite between sections once something has failed.
fn halt(cfg: &SuiteConfig, r: &mut VerificationReport) -> bool {
    let stop = cfg.fail_fast && !r.all_pass();
    if stop {
        r.note("fail-fast: remaining sections skipped");
    }
    stop
}

fn tuples(r: usize, k: u32) -> Vec<Vec<usize>> {
    (0..r.pow(k))
        .map(|mut q| {
            let mut v = vec![0; k as usize];
            for slot in v.iter_mut().rev() {
                *slot = q % r;
                q /= r;
            }
            v
        })
        .collect()
}

fn basis_name(alg: &CAlgebra, i: usize) -> &str {
    &alg.names[i]
}

fn tuple_name(alg: &CAlgebra, t: &[usize]) -> String {
    let names: Vec<&str> = t.iter().map(|&i| basis_name(alg, i)).collect();
    format!("{}({})", alg.name, names.join(", "))
}

/// Commutativity (or anti-commutativity), sesquilinearity, and the Jordan or
/// Jacobi identity on all basis tuples.
fn conformal_entries(alg: &CAlgebra, prefix: &str) -> Vec<Entry> {
    let e = FormalPoly::basis;
    let anti = alg.variety == Variety::Lie;
    let comm_id = format!(
        "{prefix}.{}",
        if anti {
            "anticommutativity"
        } else {
            "commutativity"
        }
    );
    let mut out: Vec<Entry> = tuples(alg.rank(), 2)
        .par_iter()
        .flat_map_iter(|t| {
            let (x, y) = (e(t[0]), e(t[1]));
            [
                conf_entry(
                    alg,
                    &comm_id,
                    tuple_name(alg, t),
                    comm_residual_conf(alg, &x, &y, anti),
                ),
                conf_entry(
                    alg,
                    &format!("{prefix}.sesquilinearity"),
                    tuple_name(alg, t),
                    sesquilinearity_residual(alg, &x, &y),
                ),
            ]
        })
        .collect();
    if anti {
        let id = format!("{prefix}.jacobi");
        out.par_extend(tuples(alg.rank(), 3).par_iter().map(|t| {
            conf_entry(
                alg,
                &id,
                tuple_name(alg, t),
                jacobi_residual(alg, &e(t[0]), &e(t[1]), &e(t[2])),
            )
        }));
    } else {
        let id = format!("{prefix}.jordan");
        out.par_extend(tuples(alg.rank(), 4).par_iter().map(|t| {
            conf_entry(
                alg,
                &id,
                tuple_name(alg, t),
                conformal_jordan_residual(alg, &e(t[0]), &e(t[1]), &e(t[2]), &e(t[3])),
            )
        }));
    }
    out
}

/// Supercommutativity on pairs and the linearized Jordan identity on quadruples.
fn jordan_entries<A>(alg: &A, elems: &[A::Elem], prefix: &str, label: &str) -> Vec<Entry>
where
    A: Superalgebra + Sync,
    A::Elem: Send + Sync,
{
    let name = |t: &[usize]| {
        let parts: Vec<String> = t.iter().map(|&i| elems[i].to_string()).collect();
        format!("{label}({})", parts.join(", "))
    };
    let cid = format!("{prefix}.commutativity");
    let jid = format!("{prefix}.jordan");
    let mut out: Vec<Entry> = tuples(elems.len(), 2)
        .par_iter()
        .map(|t| {
            alg_entry(
                alg,
                &cid,
                name(t),
                comm_residual(alg, &elems[t[0]], &elems[t[1]]),
            )
        })
        .collect();
    out.par_extend(tuples(elems.len(), 4).par_iter().map(|t| {
        alg_entry(
            alg,
            &jid,
            name(t),
            lin_jordan_residual(alg, &elems[t[0]], &elems[t[1]], &elems[t[2]], &elems[t[3]]),
        )
    }));
    out
}

fn jn_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    let ns = cfg.ns(0..=2);
    for &n in &ns {
        let jn = build_jn(n)?;
        r.extend(conformal_entries(&jn, "jn"));
        if halt(cfg, r) {
            return Ok(());
        }
    }
    let remark_ns: Vec<usize> = if cfg.n.is_some() {
        ns.into_iter().filter(|&n| n <= 4).collect()
    } else {
        (0..=4).collect()
    };
    for n in remark_ns {
        let fails = jn_kn_remark_failures(&build_jn(n)?, &build_kn(n)?, n)?;
        r.push(check(
            "jn.kn-relation",
            format!("J_{n} vs K_{n}"),
            fails.is_empty(),
            format!("{fails:?}"),
        ));
    }
    Ok(())
}

fn js1_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    let js = build_js1()?;
    let (s, t) = (FormalPoly::basis(0), FormalPoly::basis(1));
    let two = FieldElem::int(2);
    let expected = [
        ("S_λS = 2S", &s, &s, s.scale(&two)),
        ("T_λS = T", &t, &s, t.clone()),
        (
            "T_λT = (∂+2λ)S",
            &t,
            &t,
            s.d().add(&s.times_var(FVar::LAMBDA, 1).scale(&two)),
        ),
    ];
    for (label, x, y, want) in expected {
        let got = js.lprod(x, FVar::LAMBDA, y)?;
        r.push(check(
            "js1.table",
            label,
            got == want,
            format!("got {}", js.render(&got)),
        ));
    }
    let gens = [s.clone(), t.clone(), s.d(), t.d()];
    for x in &gens {
        for y in &gens {
            let inst = format!("({}, {})", js.render(x), js.render(y));
            r.push(conf_entry(
                &js,
                "js1.commutativity.shifted",
                inst,
                comm_residual_conf(&js, x, y, false),
            ));
        }
    }
    r.extend(conformal_entries(&js, "js1"));
    if halt(cfg, r) {
        return Ok(());
    }
    let basis = monomial_basis(Signature::laurent(1), -1..=1);
    let corrected = Js11::new(Js11Convention::Corrected);
    r.extend(jordan_entries(&corrected, &basis, "js11", "js(1,1)"));
    for conv in [
        Js11Convention::OriginalParity,
        Js11Convention::ReversedParity,
    ] {
        let alg = Js11::new(conv);
        let fails = jordan_entries(&alg, &basis, "js11", "")
            .iter()
            .filter(|e| e.residual.is_some())
            .count();
        r.note(format!("js(1,1) with the printed sign read as {conv:?}: {fails} failing commutativity/Jordan instances on t-degree −1..1"));
    }
    Ok(())
}

fn kn_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    let ns = cfg.ns(0..=4);
    for &n in ns.iter().filter(|&&n| n <= 4) {
        r.extend(conformal_entries(&build_kn(n)?, "kn"));
        if halt(cfg, r) {
            return Ok(());
        }
    }
    let sampled: Vec<usize> = if cfg.n.is_none() {
        vec![6]
    } else {
        ns.into_iter().filter(|&n| n > 4).collect()
    };
    for n in sampled {
        let kn = build_kn(n)?;
        let rank = kn.rank();
        let e = FormalPoly::basis;
        r.extend(
            tuples(rank, 2)
                .par_iter()
                .map(|t| {
                    conf_entry(
                        &kn,
                        "kn.anticommutativity",
                        tuple_name(&kn, t),
                        comm_residual_conf(&kn, &e(t[0]), &e(t[1]), true),
                    )
                })
                .collect::<Vec<_>>(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let triples: Vec<(usize, [usize; 3])> = (0..cfg.samples)
            .map(|k| {
                (
                    k,
                    [
                        rng.gen_range(0..rank),
                        rng.gen_range(0..rank),
                        rng.gen_range(0..rank),
                    ],
                )
            })
            .collect();
        r.extend(
            triples
                .par_iter()
                .map(|(k, t)| {
                    let inst = format!("#{k:04} {}", tuple_name(&kn, t));
                    conf_entry(
                        &kn,
                        "kn.jacobi.sampled",
                        inst,
                        jacobi_residual(&kn, &e(t[0]), &e(t[1]), &e(t[2])),
                    )
                })
                .collect::<Vec<_>>(),
        );
        r.note(format!(
            "K_{n}: {} Jacobi triples drawn with ChaCha8 seed {}",
            cfg.samples, cfg.seed
        ));
    }
    Ok(())
}

fn ck6_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    let k6 = build_kn(6)?;
    let ck6 = build_ck6(&k6, cfg.max_ddeg)?;
    closure_entries(r, "ck6", &ck6, (16, 16));
    Ok(())
}

fn closure_entries(
    r: &mut VerificationReport,
    prefix: &str,
    c: &crate::constructions::Closure,
    want: (usize, usize),
) {
    let got = c.table.as_ref().map(CAlgebra::super_rank);
    let rank = c.span.rank();
    r.push(check(
        &format!("{prefix}.rank"),
        format!("({}|{})", want.0, want.1),
        got == Some(want),
        format!("rank {rank}, super rank {got:?}"),
    ));
    r.push(check(
        &format!("{prefix}.closure"),
        format!("{} products", c.products_checked),
        c.is_closed(),
        format!(
            "{} products leave the span, first {:?}",
            c.failures.len(),
            c.failures.first()
        ),
    ));
}

fn jck4_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    let k6 = build_kn(6)?;
    let ck6 = build_ck6(&k6, cfg.max_ddeg)?;
    let cert = build_jck4_from_ck6(&k6, &ck6)?;
    let a = &cert.algebra;
    r.push(check(
        "jck4.ck6.rank",
        "(4|4)",
        a.super_rank() == (4, 4),
        format!("{:?}", a.super_rank()),
    ));
    r.push(check(
        "jck4.ck6.eigenvectors",
        format!("ad ω5ω6 = {}", cert.eigenvalue),
        cert.eigenvectors,
        "not eigenvectors",
    ));
    r.push(check(
        "jck4.ck6.diagonalizable",
        "ad ω5ω6 on CK_6",
        cert.diagonalizable,
        "ad(ad−c)(ad+c) ≠ 0",
    ));
    r.push(check(
        "jck4.ck6.spans-eigenspace",
        "projections of CK_6",
        cert.spans_eigenspace,
        "projection outside span",
    ));
    r.note(format!(
        "JCK_4 ⊂ CK_6 product: {:?} form with e = {}",
        cert.chosen.form, cert.chosen.description
    ));
    for (cand, why) in &cert.rejected {
        r.note(format!("rejected e = {cand}: {why}"));
    }
    let (odd, names) = jck4_printed_odd_elements();
    for (x, nm) in odd.iter().zip(&names) {
        let ev = omega56_eigenvalue(&k6, x)?;
        r.note(format!(
            "{nm} has ad ω5ω6 eigenvalue {}",
            ev.map_or("none".into(), |v| v.to_string())
        ));
    }
    r.extend(conformal_entries(a, "jck4.ck6"));
    if halt(cfg, r) {
        return Ok(());
    }
    let j3 = build_jn(3)?;
    let inj3 = build_jck4_in_j3(&j3, cfg.max_ddeg)?;
    closure_entries(r, "jck4.j3", &inj3, (4, 4));
    let Some(b) = inj3.table.as_ref() else {
        return Ok(());
    };
    r.extend(conformal_entries(b, "jck4.j3"));
    let iso = find_monomial_isomorphism(a, b)?;
    match iso {
        Some(iso) => {
            let bad = homomorphism_failure(a, b, &iso.images())?;
            r.push(check(
                "jck4.isomorphism",
                format!(
                    "π = {:?}, c = {:?}",
                    iso.perm,
                    iso.scalars
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                ),
                bad.is_none(),
                format!("fails on {bad:?}"),
            ));
        }
        None => r.push(Entry::fail(
            "jck4.isomorphism",
            "monomial maps",
            "no parity-preserving monomial isomorphism",
        )),
    }
    Ok(())
}

fn kkm_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    for n in cfg.ns(0..=2) {
        let sig = Signature::laurent(n);
        let alg = KkmDouble {
            kind: BracketKind::contact(sig)?,
        };
        let elems = kkm_monomials(sig, if n <= 1 { -1..=1 } else { 0..=1 });
        r.extend(jordan_entries(&alg, &elems, "kkm", &format!("K(P(1,{n}))")));
        if halt(cfg, r) {
            return Ok(());
        }
    }
    Ok(())
}

fn bracket_entries(r: &mut VerificationReport, kind: &BracketKind, elems: &[SPoly], label: &str) {
    let name = |t: &[usize]| {
        let parts: Vec<String> = t.iter().map(|&i| elems[i].to_string()).collect();
        format!("{label}({})", parts.join(", "))
    };
    let z = SPoly::is_zero;
    let show = |p: &SPoly| p.to_string();
    r.extend(
        tuples(elems.len(), 2)
            .par_iter()
            .flat_map_iter(|t| {
                let (a, b) = (&elems[t[0]], &elems[t[1]]);
                [
                    entry(
                        "brackets.antisymmetry",
                        name(t),
                        antisymmetry_residual(kind, a, b),
                        z,
                        show,
                    ),
                    entry(
                        "brackets.d-derivation",
                        name(t),
                        bracket_derivation_residual(kind, a, b),
                        z,
                        show,
                    ),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let half_d = |x: &SPoly| Ok(kind.derivation(x)?.scale(&FieldElem::frac(1, 2)));
    let jb = |x: &SPoly, y: &SPoly| kind.jordan_bracket(x, y);
    r.extend(
        tuples(elems.len(), 3)
            .par_iter()
            .flat_map_iter(|t| {
                let (a, b, c) = (&elems[t[0]], &elems[t[1]], &elems[t[2]]);
                let axioms = jordan_bracket_axiom_residuals(a, b, c, &jb, &half_d);
                let (i, ii, iii) = match axioms {
                    Ok((i, ii, iii)) => (Ok(i), Ok(ii), Ok(iii)),
                    Err(e) => (Err(e.clone()), Err(e.clone()), Err(e)),
                };
                [
                    entry(
                        "brackets.leibniz",
                        name(t),
                        leibniz_residual(kind, a, b, c),
                        z,
                        show,
                    ),
                    entry(
                        "brackets.jacobi",
                        name(t),
                        bracket_jacobi(kind, a, b, c),
                        z,
                        show,
                    ),
                    entry("brackets.jordan-axiom-i", name(t), i, z, show),
                    entry("brackets.jordan-axiom-ii", name(t), ii, z, show),
                    entry("brackets.jordan-axiom-iii", name(t), iii, z, show),
                ]
            })
            .collect::<Vec<_>>(),
    );
}

/// `p^a q^b ξ_mask` with `a, b ∈ {0, 1}` in `Λ(2, n)`.
fn poisson_monomials(n: usize) -> Vec<SPoly> {
    let sig = Signature::polynomial(2, n);
    let mut out = Vec::new();
    for a in 0..=1 {
        for b in 0..=1 {
            for mask in 0..(1u32 << n) {
                out.push(SPoly::term(sig, vec![a, b], mask, FieldElem::one()));
            }
        }
    }
    out
}

fn brackets_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    for n in cfg.ns(0..=2) {
        let sig = Signature::grassmann(n);
        bracket_entries(
            r,
            &BracketKind::poisson(sig)?,
            &monomial_basis(sig, 0..=0),
            &format!("P(0,{n})"),
        );
        let sig = Signature::laurent(n);
        bracket_entries(
            r,
            &BracketKind::contact(sig)?,
            &monomial_basis(sig, cfg.tdeg()),
            &format!("P(1,{n})"),
        );
        if n <= 1 {
            bracket_entries(
                r,
                &BracketKind::poisson(Signature::polynomial(2, n))?,
                &poisson_monomials(n),
                &format!("P(2,{n})"),
            );
        }
        if halt(cfg, r) {
            return Ok(());
        }
    }
    Ok(())
}

fn tkk_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    let sl2_ns: Vec<usize> = cfg.n.map_or_else(|| (0..=3).collect(), |n| vec![n]);
    for &n in &sl2_ns {
        let tr = sl2_assign(n)?;
        r.note(format!("n = {n}: {}", tr.roles.join(", ")));
        for (label, res) in ["[h,e] = 2e", "[h,f] = −2f", "[e,f] = h"]
            .iter()
            .zip(sl2_residuals(&tr)?)
        {
            r.push(entry(
                "tkk.sl2",
                format!("n={n} {label}"),
                Ok(res),
                SPoly::is_zero,
                ToString::to_string,
            ));
        }
        let mut eig: Vec<String> = Vec::new();
        for x in [&tr.e, &tr.h, &tr.f] {
            eig.push(ad_h_eigenvalue(&tr, x)?.map_or("none".into(), |v| v.to_string()));
        }
        eig.sort();
        r.push(check(
            "tkk.ad-h",
            format!("n={n}"),
            eig == ["-2", "0", "2"],
            format!("{eig:?}"),
        ));
    }
    let pair_ns: Vec<usize> = cfg.n.map_or_else(|| (0..=2).collect(), |n| vec![n]);
    for n in pair_ns {
        let tr = sl2_assign(n)?;
        let small = small_signature(n);
        let one = SPoly::one(small);
        let big = Signature::laurent(n + 3);
        let xi = |i| SPoly::var(big, Var::Xi(i)).expect("index in range");
        let ex = [
            (
                KKMElem::even_part(one.clone()),
                &xi(n + 1) * &xi(n + 3),
                "(1,0)",
            ),
            (KKMElem::theta_part(one.clone()), xi(n + 3), "(0,1)"),
        ];
        for (x, want, label) in ex {
            let got = tkk_embed(&x, n)?;
            r.push(check(
                "tkk.embed",
                format!("n={n} {label}"),
                got == want,
                format!("got {got}"),
            ));
        }
        let mons = kkm_monomials(small, cfg.tdeg());
        let pairs = tuples(mons.len(), 2);
        let norm = TkkEmbedding::normalized(n);
        r.extend(
            pairs
                .par_iter()
                .map(|t| {
                    let inst = format!("n={n} ({}, {})", mons[t[0]], mons[t[1]]);
                    entry(
                        "tkk.product",
                        inst,
                        tkk_product_residual_with(&mons[t[0]], &mons[t[1]], &tr, &norm),
                        SPoly::is_zero,
                        ToString::to_string,
                    )
                })
                .collect::<Vec<_>>(),
        );
        let lit = TkkEmbedding::literal(n);
        let lit_fails: Vec<&Vec<usize>> = pairs
            .par_iter()
            .filter(|t| {
                !tkk_product_residual_with(&mons[t[0]], &mons[t[1]], &tr, &lit)
                    .map(|p| p.is_zero())
                    .unwrap_or(false)
            })
            .collect();
        let theta_only = lit_fails
            .iter()
            .all(|t| mons[t[0]].a.is_zero() && mons[t[1]].a.is_zero());
        r.note(format!(
            "n = {n}: the unscaled embedding a+bθ ↦ (aξ{}+b)ξ{} fails on {} of {} pairs{}; θ ↦ αξ{} is used",
            n + 1,
            n + 3,
            lit_fails.len(),
            pairs.len(),
            if theta_only { ", all of the form (bθ, cθ)" } else { "" },
            n + 3
        ));
        if halt(cfg, r) {
            return Ok(());
        }
    }
    Ok(())
}

fn realization_entries<A>(cfg: &SuiteConfig, real: &CoefRealization<A>, r: &mut VerificationReport)
where
    A: Superalgebra + Sync,
    A::Elem: Send,
{
    let alg = &real.source;
    let label = format!("{}→{}", alg.name, real.target_name);
    let e = FormalPoly::basis;
    let window: Vec<i64> = cfg.window().collect();
    for i in 0..alg.rank() {
        for &k in &window {
            let inst = format!("{label} {} k={k}", basis_name(alg, i));
            r.push(alg_entry(
                &real.target,
                "bridge.d-compat",
                inst,
                real.d_compat_residual(&e(i), k),
            ));
        }
    }
    let jobs: Vec<(usize, usize, i64, i64)> = tuples(alg.rank(), 2)
        .into_iter()
        .flat_map(|t| {
            let (w, i, j) = (&window, t[0], t[1]);
            w.iter()
                .flat_map(move |&m| w.iter().map(move |&k| (i, j, m, k)))
        })
        .collect();
    r.extend(
        jobs.par_iter()
            .map(|&(i, j, m, k)| {
                let inst = format!(
                    "{label} ({}, {}) m={m} k={k}",
                    basis_name(alg, i),
                    basis_name(alg, j)
                );
                alg_entry(
                    &real.target,
                    "bridge.product",
                    inst,
                    real.bridge_residual(&e(i), &e(j), m, k),
                )
            })
            .collect::<Vec<_>>(),
    );
}

fn bridge_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    let j0 = jn_realization(0)?;
    let minus = FormalPoly::basis(jn_index(0, 0, true));
    let pin = j0.bridge_residual(&minus, &minus, 1, 0)?;
    let lhs = j0.target.mul(&j0.coef(&minus, 1)?, &j0.coef(&minus, 0)?);
    let want = KKMElem::even_part(SPoly::constant(Signature::laurent(0), FieldElem::int(-1)));
    if !pin.is_zero() || lhs != want {
        r.push(Entry::fail(
            "bridge.00-pinning",
            "J_0 (1⁻, 1⁻) m=1 k=0",
            format!(
                "convention mismatch: (tθ)∘θ = {lhs}, residual {pin}; check D = {{·,1}}, x_(j)y = j!·[λ^j], coef_k(∂x) = −k·coef_(k−1)(x)"
            ),
        ));
        return Ok(());
    }
    r.push(Entry::pass("bridge.00-pinning", "J_0 (1⁻, 1⁻) m=1 k=0"));
    for n in cfg.ns(0..=2) {
        realization_entries(cfg, &jn_realization(n)?, r);
        if halt(cfg, r) {
            return Ok(());
        }
    }
    realization_entries(cfg, &js1_realization()?, r);
    let plain = js1_realization_with(FieldElem::one())?;
    let mut probe = VerificationReport::new("probe", serde_json::Value::Null);
    realization_entries(cfg, &plain, &mut probe);
    r.note(format!(
        "JS_1 with T ↦ t^k (unscaled): {} of {} bridge/∂ instances fail; T ↦ α·t^k is used",
        probe.failures().count(),
        probe.entries.len()
    ));
    realization_entries(
        cfg,
        &current_realization(kaplansky_k3(), Variety::Jordan)?,
        r,
    );
    Ok(())
}

fn derivation_entries<A>(
    r: &mut VerificationReport,
    id: &str,
    delta: &LinearMap<A::Elem>,
    alg: &A,
    elems: &[A::Elem],
    label: &str,
) where
    A: Superalgebra + Sync,
    A::Elem: Send + Sync,
{
    r.extend(
        tuples(elems.len(), 2)
            .par_iter()
            .map(|t| {
                let inst = format!("{label} {} ({}, {})", delta.name, elems[t[0]], elems[t[1]]);
                alg_entry(
                    alg,
                    id,
                    inst,
                    derivation_residual(delta, alg, &elems[t[0]], &elems[t[1]]),
                )
            })
            .collect::<Vec<_>>(),
    );
}

/// `K(A)` for `A = F ⊕ Fξ` with `{ξ, ξ} = 1`, and `δ` with `δ(θ) = θ`, `δ(ξ) = −ξ`.
pub fn delta_example() -> Result<(KkmDouble, Vec<KKMElem>, LinearMap<KKMElem>)> {
    delta_example_with(FieldElem::int(-1))
}

fn delta_example_with(on_xi: FieldElem) -> Result<(KkmDouble, Vec<KKMElem>, LinearMap<KKMElem>)> {
    let sig = Signature::grassmann(1);
    let kind = BracketKind::poisson(sig)?.scaled(FieldElem::int(-1));
    let xi = SPoly::xi_mask(sig, 1);
    let one = SPoly::one(sig);
    if kind.bracket(&xi, &xi)? != one {
        return Err(AlgebraError::InvalidConfig("{ξ,ξ} ≠ 1".into()));
    }
    let alg = KkmDouble { kind };
    let zero = KKMElem::even_part(SPoly::zero(sig));
    let basis = vec![
        KKMElem::even_part(one.clone()),
        KKMElem::even_part(xi.clone()),
        KKMElem::theta_part(one.clone()),
        KKMElem::theta_part(xi.clone()),
    ];
    let images = vec![
        (basis[0].clone(), zero.clone()),
        (basis[1].clone(), basis[1].scale(&on_xi)),
        (basis[2].clone(), basis[2].clone()),
        (basis[3].clone(), zero),
    ];
    let delta = linear_map_on_basis(alg.clone(), "δ", Parity::Even, images);
    Ok((alg, basis, delta))
}

fn derivations_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    for n in cfg.ns(0..=2) {
        let sig = Signature::laurent(n);
        let alg = KkmDouble {
            kind: BracketKind::contact(sig)?,
        };
        let elems = kkm_monomials(sig, cfg.tdeg());
        let label = format!("K(P(1,{n}))");
        derivation_entries(r, "derivations.d_theta", &d_theta(), &alg, &elems, &label);
        derivation_entries(r, "derivations.d_dt.kkm", &d_dt_kkm(), &alg, &elems, &label);
        if halt(cfg, r) {
            return Ok(());
        }
    }
    let (alg, basis, delta) = delta_example()?;
    derivation_entries(r, "derivations.delta", &delta, &alg, &basis, "K(F⊕Fξ)");
    let js = Js11::new(Js11Convention::Corrected);
    let elems = monomial_basis(js.sig, cfg.tdeg());
    derivation_entries(r, "derivations.d_dt.js11", &d_dt(), &js, &elems, "js(1,1)");
    Ok(())
}

/// A planted defect and the first nonzero residual it produces, if any.
fn detect(r: &mut VerificationReport, name: &str, witness: Result<Option<String>>) {
    let id = format!("mutation.{name}");
    match witness {
        Ok(Some(w)) => r.push(Entry::pass(id, format!("detected: {w}"))),
        Ok(None) => r.push(Entry::fail(
            id,
            "planted defect",
            "no nonzero residual found",
        )),
        Err(e) => r.push(Entry::fail(id, "planted defect", format!("error: {e}"))),
    }
}

fn first_conformal_defect(alg: &CAlgebra) -> Option<String> {
    conformal_entries(alg, "x")
        .into_iter()
        .find(|e| e.residual.is_some())
        .map(|e| format!("{} {}", e.check_id.trim_start_matches("x."), e.instance))
}

fn first_jordan_defect<A>(alg: &A, elems: &[A::Elem]) -> Option<String>
where
    A: Superalgebra + Sync,
    A::Elem: Send + Sync,
{
    jordan_entries(alg, elems, "x", "")
        .into_iter()
        .find(|e| e.residual.is_some())
        .map(|e| format!("{} {}", e.check_id.trim_start_matches("x."), e.instance))
}

fn mutation_suite(cfg: &SuiteConfig, r: &mut VerificationReport) -> Result<()> {
    let j1 = build_jn(1)?;
    let m = jn_index(1, 0, true);
    let lam = FVar::LAMBDA;
    let flipped = j1.mutated("J_1[λ-coefficient of 1⁻_λ1⁻ negated]", |i, j, p| {
        if i == m && j == m {
            p.sub(
                &p.coeff_of(lam, 1)
                    .times_var(lam, 1)
                    .scale(&FieldElem::int(2)),
            )
        } else {
            p.clone()
        }
    })?;
    detect(
        r,
        "jn-lambda-coefficient",
        Ok(first_conformal_defect(&flipped)),
    );

    let js = build_js1()?.mutated("JS_1[T_λS = −T]", |i, j, p| {
        if (i, j) == (1, 0) {
            p.scale(&FieldElem::int(-1))
        } else {
            p.clone()
        }
    })?;
    detect(r, "js1-sign", Ok(first_conformal_defect(&js)));

    let k2 = build_kn(2)?;
    let w1 = 1;
    let k2m = k2.mutated("K_2[ω1_λω1 negated]", |i, j, p| {
        if (i, j) == (w1, w1) {
            p.scale(&FieldElem::int(-1))
        } else {
            p.clone()
        }
    })?;
    detect(r, "kn-sign", Ok(first_conformal_defect(&k2m)));

    let sig = Signature::laurent(1);
    let kind = BracketKind::contact(sig)?;
    let perturbed = |a: &SPoly, b: &SPoly| Ok(&kind.bracket(a, b)? + &(a * b));
    let d = |x: &SPoly| kind.derivation(x);
    let mons = monomial_basis(sig, -1..=1);
    let mut witness = None;
    'outer: for a in &mons {
        for b in &mons {
            let (i, _, _) = jordan_bracket_axiom_residuals(a, b, b, &perturbed, &d)?;
            if !i.is_zero() {
                witness = Some(format!("axiom (i) on ({a}, {b}) = {i}"));
                break 'outer;
            }
        }
    }
    detect(r, "bracket-plus-product", Ok(witness));

    let g = Signature::grassmann(2);
    let custom = CustomProduct::new("a·∂₁b + ∂₁a·b", |x: &SPoly, y: &SPoly| {
        &(x * &y.partial(Var::Xi(1)).expect("ξ1")) + &(&x.partial(Var::Xi(1)).expect("ξ1") * y)
    });
    let gb = monomial_basis(g, 0..=0);
    let wit = tuples(4, 4).into_iter().find_map(|t| {
        let res = lin_jordan_residual(&custom, &gb[t[0]], &gb[t[1]], &gb[t[2]], &gb[t[3]]).ok()?;
        (!res.is_zero()).then(|| {
            format!(
                "jordan({}, {}, {}, {}) = {res}",
                gb[t[0]], gb[t[1]], gb[t[2]], gb[t[3]]
            )
        })
    });
    detect(r, "grassmann-product", Ok(wit));

    let tr = sl2_assign(0)?;
    let small = kkm_monomials(small_signature(0), -1..=1);
    let bad = TkkEmbedding::mutated(0);
    let wit = tuples(small.len(), 2).into_iter().find_map(|t| {
        let res = tkk_product_residual_with(&small[t[0]], &small[t[1]], &tr, &bad).ok()?;
        (!res.is_zero()).then(|| format!("({}, {}) = {res}", small[t[0]], small[t[1]]))
    });
    detect(r, "tkk-embedding-typo", Ok(wit));

    let s0 = Signature::laurent(0);
    let shifted = CoefRealization::new(
        build_jn(0)?,
        KkmDouble {
            kind: BracketKind::contact(s0)?,
        },
        "K(P(1,0))[θ-index shifted]",
        move |i, k| {
            if i == 0 {
                KKMElem::even_part(SPoly::t_pow(s0, k as i32, 0))
            } else {
                KKMElem::theta_part(SPoly::t_pow(s0, k as i32 + 1, 0))
            }
        },
    );
    let mut probe = VerificationReport::new("probe", serde_json::Value::Null);
    realization_entries(cfg, &shifted, &mut probe);
    detect(
        r,
        "bridge-realization-typo",
        Ok(probe.failures().next().map(|e| e.instance.clone())),
    );

    let orig = Js11::new(Js11Convention::OriginalParity);
    detect(
        r,
        "js11-printed-sign",
        Ok(first_jordan_defect(
            &orig,
            &monomial_basis(orig.sig, -1..=1),
        )),
    );

    let lie_k3 = cur(&kaplansky_k3(), Variety::Lie)?;
    detect(r, "current-non-lie", Ok(first_conformal_defect(&lie_k3)));

    let (alg, basis, delta) = delta_example_with(FieldElem::one())?;
    let wit = tuples(4, 2).into_iter().find_map(|t| {
        let res = derivation_residual(&delta, &alg, &basis[t[0]], &basis[t[1]]).ok()?;
        (!res.is_zero()).then(|| format!("({}, {}) = {res}", basis[t[0]], basis[t[1]]))
    });
    detect(r, "derivation-sign", Ok(wit));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_and_bad_config_are_errors() {
        assert!(matches!(
            run_suite("nope", &SuiteConfig::default()),
            Err(AlgebraError::UnknownSuite(_))
        ));
        let cfg = SuiteConfig {
            tmin: 2,
            tmax: 1,
            ..SuiteConfig::default()
        };
        assert!(matches!(
            run_suite("js1", &cfg),
            Err(AlgebraError::InvalidConfig(_))
        ));
    }

    #[test]
    fn tuple_enumeration_is_lexicographic() {
        assert_eq!(
            tuples(2, 2),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(tuples(3, 3).len(), 27);
    }

    #[test]
    fn delta_example_is_a_derivation() {
        let (alg, basis, delta) = delta_example().unwrap();
        for x in &basis {
            for y in &basis {
                assert!(derivation_residual(&delta, &alg, x, y).unwrap().is_zero());
            }
        }
    }
}
