//! Builders for the named conformal superalgebras, the Hodge star on `Λ(6)`,
//! and `F[∂]`-span closure.

use std::collections::BTreeMap;

use crate::conformal::{
    comm_residual_conf, conformal_jordan_residual, CAlgebra, CElem, DPoly, FVar, FormalPoly, Key,
    Linear, Variety,
};
use crate::error::{AlgebraError, Result};
use crate::scalar::FieldElem;
use crate::superpoly::{mask_product_sign, OddPairing, Parity, SPoly, Signature, Var};

pub(crate) fn mask_name(mask: u32, letter: &str) -> String {
    if mask == 0 {
        return "1".into();
    }
    (0..32)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| format!("{letter}{}", b + 1))
        .collect()
}

/// Writes `Σ c ξ_A` as `Σ c e_{offset + A}`.
fn grassmann_to_formal(p: &SPoly, offset: usize) -> FormalPoly {
    let mut out = FormalPoly::zero();
    for (m, c) in p.terms() {
        out.add_assign(&FormalPoly::basis_scaled(
            offset + m.odd as usize,
            c.clone(),
        ));
    }
    out
}

/// `Σ g^{ij} ∂_i a ∂_j b` for the odd form of `sig`.
pub(crate) fn odd_pairing(a: &SPoly, b: &SPoly) -> Result<SPoly> {
    let sig = a.signature();
    let mut out = SPoly::zero(sig);
    for (i, j) in sig.odd_form() {
        out = out.try_add(&a.partial(Var::Xi(i))?.smul(&b.partial(Var::Xi(j))?)?)?;
    }
    Ok(out)
}

/// Index of `a⁺` (sign `false`) or `a⁻` (sign `true`) in [`build_jn`].
pub fn jn_index(n: usize, mask: u32, minus: bool) -> usize {
    mask as usize + if minus { 1 << n } else { 0 }
}

/// The Jordan conformal superalgebra `J_n` on `a^±`, `a` a monomial of `Λ(n)`:
///
/// ```text
/// a⁺_λ b^± = (ab)^±        a⁻_λ b⁺ = (−1)^s (ab)⁻
/// a⁻_λ b⁻ = (−1)^s ((r−1)∂(ab)⁺ + (−1)^r P(a,b)⁺ + λ(r+s−2)(ab)⁺)
/// ```
///
/// with `P` the odd form (diagonal on `ξ₁..ξ_{n−2}`, hyperbolic on the last
/// two), `r = deg a`, `s = deg b`.
pub fn build_jn(n: usize) -> Result<CAlgebra> {
    build_jn_with(Signature::grassmann(n), &FieldElem::one())
}

/// `J_n` for the pairing carried by `sig`, with the pairing term of `a⁻_λb⁻`
/// multiplied by `scale`. Nonzero squares give isomorphic algebras.
pub fn build_jn_with(sig: Signature, scale: &FieldElem) -> Result<CAlgebra> {
    let n = sig.n();
    let dim = 1usize << n;
    let mut names = Vec::with_capacity(2 * dim);
    let mut parities = Vec::with_capacity(2 * dim);
    for minus in [false, true] {
        for mask in 0..dim as u32 {
            names.push(format!(
                "{}{}",
                mask_name(mask, "ξ"),
                if minus { "⁻" } else { "⁺" }
            ));
            parities.push(Parity::of(mask.count_ones() + minus as u32));
        }
    }
    let mut table = vec![vec![FormalPoly::zero(); 2 * dim]; 2 * dim];
    for am in 0..dim as u32 {
        let a = SPoly::xi_mask(sig, am);
        let r = am.count_ones() as i64;
        for bm in 0..dim as u32 {
            let b = SPoly::xi_mask(sig, bm);
            let s = bm.count_ones() as i64;
            let ab = a.smul(&b)?;
            let abp = grassmann_to_formal(&ab, 0);
            let abm = grassmann_to_formal(&ab, dim);
            let sign_s = FieldElem::sign(s % 2 == 1);
            table[jn_index(n, am, false)][jn_index(n, bm, false)] = abp.clone();
            table[jn_index(n, am, false)][jn_index(n, bm, true)] = abm.clone();
            table[jn_index(n, am, true)][jn_index(n, bm, false)] = abm.scale(&sign_s);
            let mut mm = abp.d().scale(&FieldElem::int(r - 1));
            mm.add_scaled(
                &grassmann_to_formal(&odd_pairing(&a, &b)?, 0),
                &(scale * &FieldElem::sign(r % 2 == 1)),
            );
            mm.add_scaled(&abp.times_var(FVar::LAMBDA, 1), &FieldElem::int(r + s - 2));
            table[jn_index(n, am, true)][jn_index(n, bm, true)] = mm.scale(&sign_s);
        }
    }
    CAlgebra::new(format!("J_{n}"), names, parities, Variety::Jordan, table)
}

/// `JS_1`: `S` even, `T` odd, `S_λS = 2S`, `T_λT = (∂+2λ)S`, `T_λS = T`;
/// `S_λT` is completed by commutativity.
pub fn build_js1() -> Result<CAlgebra> {
    let s = FormalPoly::basis(0);
    let t = FormalPoly::basis(1);
    let mut given = BTreeMap::new();
    given.insert((0, 0), s.scale(&FieldElem::int(2)));
    given.insert(
        (1, 1),
        s.d()
            .add(&s.times_var(FVar::LAMBDA, 1).scale(&FieldElem::int(2))),
    );
    given.insert((1, 0), t);
    CAlgebra::from_half_table(
        "JS_1",
        vec!["S".into(), "T".into()],
        vec![Parity::Even, Parity::Odd],
        Variety::Jordan,
        given,
    )
}

/// The Lie conformal superalgebra `K_n` on the monomials of `Λ(ω₁..ω_n)`:
///
/// ```text
/// [a_λ b] = (r/2 − 1)∂(ab) + (−1)^r ½ Σ δ_i a δ_i b + λ((r+s)/2 − 2)ab
/// ```
pub fn build_kn(n: usize) -> Result<CAlgebra> {
    let sig = Signature::grassmann(n).with_pairing(OddPairing::Diagonal);
    let dim = 1usize << n;
    let names = (0..dim as u32).map(|m| mask_name(m, "ω")).collect();
    let parities = (0..dim as u32)
        .map(|m| Parity::of(m.count_ones()))
        .collect();
    let mut table = vec![vec![FormalPoly::zero(); dim]; dim];
    for am in 0..dim as u32 {
        let a = SPoly::xi_mask(sig, am);
        let r = am.count_ones() as i64;
        for bm in 0..dim as u32 {
            let b = SPoly::xi_mask(sig, bm);
            let s = bm.count_ones() as i64;
            table[am as usize][bm as usize] = kn_bracket_poly(&a, r, &b, s)?;
        }
    }
    CAlgebra::new(format!("K_{n}"), names, parities, Variety::Lie, table)
}

/// The `K_n` bracket of homogeneous `a`, `b` of degrees `r`, `s` in `Λ(n)`.
fn kn_bracket_poly(a: &SPoly, r: i64, b: &SPoly, s: i64) -> Result<FormalPoly> {
    let ab = grassmann_to_formal(&a.smul(b)?, 0);
    let mut out = ab.d().scale(&FieldElem::frac(r - 2, 2));
    out.add_scaled(
        &grassmann_to_formal(&odd_pairing(a, b)?, 0),
        &FieldElem::frac(if r % 2 == 1 { -1 } else { 1 }, 2),
    );
    out.add_scaled(
        &ab.times_var(FVar::LAMBDA, 1),
        &FieldElem::frac(r + s - 4, 2),
    );
    Ok(out)
}

/// `a*` for a monomial `a` of `Λ(n)`: the complementary monomial with its sign,
/// so that `a · a* = TOP`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarResult {
    pub negative: bool,
    pub complement: u32,
}

impl StarResult {
    pub fn sign(&self) -> FieldElem {
        FieldElem::sign(self.negative)
    }
}

pub fn hodge_star(mask: u32, n: usize) -> StarResult {
    let top = (1u32 << n) - 1;
    let complement = top & !mask;
    let negative = mask_product_sign(mask, complement).expect("disjoint masks");
    StarResult {
        negative,
        complement,
    }
}

/// Incremental leading-term echelon form of an `F`-span, tracking how each
/// row combines the inserted vectors.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(FormalPoly, BTreeMap<usize, FieldElem>)>,
    pivots: BTreeMap<Key, usize>,
}

impl Echelon {
    /// `(remainder, combo)` with `v = Σ combo·inserted + remainder`; the
    /// remainder is zero iff `v` lies in the span.
    fn reduce(&self, v: &FormalPoly) -> (FormalPoly, BTreeMap<usize, FieldElem>) {
        let mut v = v.clone();
        let mut combo: BTreeMap<usize, FieldElem> = BTreeMap::new();
        while let Some((k, c)) = v.leading() {
            let Some(&r) = self.pivots.get(k) else { break };
            let c = c.clone();
            let (row, rc) = &self.rows[r];
            v.add_scaled(row, &-&c);
            for (id, x) in rc {
                let e = combo.entry(*id).or_insert_with(FieldElem::zero);
                *e += &(&c * x);
            }
        }
        combo.retain(|_, x| !x.is_zero());
        (v, combo)
    }

    fn insert(&mut self, v: &FormalPoly, id: usize) -> bool {
        let (rem, combo) = self.reduce(v);
        let Some((k, c)) = rem.leading() else {
            return false;
        };
        let (k, inv) = (*k, c.inv().expect("nonzero leading coefficient"));
        let mut rc: BTreeMap<usize, FieldElem> =
            combo.into_iter().map(|(i, x)| (i, -(&x * &inv))).collect();
        rc.insert(id, inv.clone());
        self.pivots.insert(k, self.rows.len());
        self.rows.push((rem.scale(&inv), rc));
        true
    }
}

/// A reduced `F[∂]`-basis of the span of a generator family.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    pub generators: Vec<CElem>,
    pub generator_names: Vec<String>,
    /// Indices of the generators forming the reduced basis.
    pub basis: Vec<usize>,
    /// Discarded generators, each written over the reduced basis.
    pub relations: Vec<(usize, Vec<DPoly>)>,
    /// `∂`-degree bound on the coefficients used by membership solves.
    pub bound: u8,
    /// Whether independence was certified by a specialization of `∂`.
    pub independent: bool,
    echelon: Echelon,
}

fn max_d_degree(v: &[CElem]) -> u8 {
    v.iter().filter_map(|x| x.d_degree()).max().unwrap_or(0)
}

impl SpanBasis {
    /// Greedy reduction: a generator is dropped only when it is shown to lie
    /// in the `F[∂]`-span of the ones kept before it.
    pub fn new(
        generators: Vec<CElem>,
        generator_names: Vec<String>,
        bound: u8,
        rank: usize,
    ) -> Result<Self> {
        if generators.iter().any(|g| g.has_vars()) {
            return Err(AlgebraError::InvalidConfig(
                "span generators must be free of formal variables".into(),
            ));
        }
        let mut sb = SpanBasis {
            generators,
            generator_names,
            basis: Vec::new(),
            relations: Vec::new(),
            bound,
            independent: false,
            echelon: Echelon::default(),
        };
        for gi in 0..sb.generators.len() {
            let g = sb.generators[gi].clone();
            if let Some(coeffs) = sb.solve(&g) {
                sb.relations.push((gi, coeffs));
                continue;
            }
            let l = sb.basis.len();
            sb.basis.push(gi);
            for j in 0..=bound {
                sb.echelon
                    .insert(&g.d_pow(j), l * (bound as usize + 1) + j as usize);
            }
        }
        sb.independent = sb.certify_independence(rank);
        Ok(sb)
    }

    fn certify_independence(&self, rank: usize) -> bool {
        let k = self.basis.len();
        (2..12).any(|x| {
            let x = FieldElem::int(x);
            let rows: Option<Vec<Vec<FieldElem>>> = self
                .basis
                .iter()
                .map(|&g| self.generators[g].specialize_d(&x, rank))
                .collect();
            rows.is_some_and(|r| crate::linalg::rank(r) == k)
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn element(&self, l: usize) -> &CElem {
        &self.generators[self.basis[l]]
    }

    pub fn name(&self, l: usize) -> &str {
        &self.generator_names[self.basis[l]]
    }

    /// Coefficients `p_l(∂)` with `v = Σ p_l(∂)·basis_l`, if `v` is in the span
    /// within the current bound.
    pub fn solve(&self, v: &CElem) -> Option<Vec<DPoly>> {
        let (rem, combo) = self.echelon.reduce(v);
        if !rem.is_zero() {
            return None;
        }
        let w = self.bound as usize + 1;
        let mut out = vec![vec![FieldElem::zero(); w]; self.basis.len()];
        for (id, c) in combo {
            out[id / w][id % w] = c;
        }
        Some(out.into_iter().map(DPoly::new).collect())
    }

    /// Copy with a larger coefficient bound.
    pub fn with_bound(&self, bound: u8, rank: usize) -> Result<Self> {
        SpanBasis::new(
            self.generators.clone(),
            self.generator_names.clone(),
            bound,
            rank,
        )
    }
}

/// Result of checking that a family spans a subalgebra.
#[derive(Clone, Debug)]
pub struct Closure {
    pub span: SpanBasis,
    /// Structure table over the reduced basis, when closed.
    pub table: Option<CAlgebra>,
    /// `(left, right, unmatched λ-coefficient)` for every product outside the span.
    pub failures: Vec<(String, String, String)>,
    pub products_checked: usize,
}

impl Closure {
    pub fn is_closed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Default coefficient bound: table degree + generator degree + 2.
pub fn default_bound(alg: &CAlgebra, gens: &[CElem]) -> u8 {
    alg.max_table_d_degree() + max_d_degree(gens) + 2
}

/// Reduces `gens` to an `F[∂]`-basis and checks that every λ-coefficient of
/// every product of basis elements lies in its span. `product(x, y)` returns
/// the λ-product in the ambient algebra.
pub fn span_closure_with(
    ambient: &CAlgebra,
    name: &str,
    variety: Variety,
    gens: Vec<CElem>,
    gen_names: Vec<String>,
    bound: Option<u8>,
    product: &(dyn Fn(&CElem, &CElem) -> Result<FormalPoly> + Sync),
) -> Result<Closure> {
    use rayon::prelude::*;
    let bound = bound.unwrap_or_else(|| default_bound(ambient, &gens));
    let mut span = SpanBasis::new(gens, gen_names, bound, ambient.rank())?;
    let k = span.rank();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let products: Vec<FormalPoly> = pairs
        .par_iter()
        .map(|&(i, j)| product(span.element(i), span.element(j)))
        .collect::<Result<_>>()?;
    let need = products
        .iter()
        .filter_map(|p| p.d_degree())
        .max()
        .unwrap_or(0)
        .saturating_add(max_d_degree(&span.generators));
    if need > span.bound {
        span = span.with_bound(need, ambient.rank())?;
    }
    let mut failures = Vec::new();
    let mut table = vec![vec![FormalPoly::zero(); k]; k];
    for (&(i, j), p) in pairs.iter().zip(&products) {
        for deg in 0..=p.degree_in(FVar::LAMBDA).unwrap_or(0) {
            let c = p.coeff_of(FVar::LAMBDA, deg);
            if c.is_zero() {
                continue;
            }
            match span.solve(&c) {
                Some(coeffs) => {
                    for (l, q) in coeffs.iter().enumerate() {
                        table[i][j].add_assign(
                            &q.apply(&FormalPoly::basis(l)).times_var(FVar::LAMBDA, deg),
                        );
                    }
                }
                None => failures.push((
                    span.name(i).to_string(),
                    span.name(j).to_string(),
                    ambient.render(&c),
                )),
            }
        }
    }
    let sub = if failures.is_empty() {
        let names = (0..k).map(|l| span.name(l).to_string()).collect();
        let parities = (0..k)
            .map(|l| ambient.parity_of(span.element(l)))
            .collect::<Result<_>>()?;
        Some(CAlgebra::new(name, names, parities, variety, table)?)
    } else {
        None
    };
    Ok(Closure {
        span,
        table: sub,
        failures,
        products_checked: pairs.len(),
    })
}

/// [`span_closure_with`] for the algebra's own λ-product.
pub fn span_closure(
    alg: &CAlgebra,
    name: &str,
    gens: Vec<CElem>,
    gen_names: Vec<String>,
    bound: Option<u8>,
) -> Result<Closure> {
    span_closure_with(alg, name, alg.variety, gens, gen_names, bound, &|x, y| {
        alg.lprod(x, FVar::LAMBDA, y)
    })
}

/// `Σ c·ω_A` in `K_6` for a list of `(coefficient, ∂-power, mask)`.
fn k6_elem(terms: &[(FieldElem, u8, u32)]) -> CElem {
    let mut out = FormalPoly::zero();
    for (c, d, m) in terms {
        out.add_assign(&FormalPoly::basis_scaled(*m as usize, c.clone()).d_pow(*d));
    }
    out
}

fn mask_of(idx: &[usize]) -> u32 {
    idx.iter().map(|i| 1u32 << (i - 1)).sum()
}

/// `ω_A + c ∂^d (ω_A)*`.
fn with_star(idx: &[usize], c: FieldElem, d: u8) -> CElem {
    let m = mask_of(idx);
    let st = hodge_star(m, 6);
    k6_elem(&[
        (FieldElem::one(), 0, m),
        (&c * &st.sign(), d, st.complement),
    ])
}

/// The 42 generators `L, a_ij, b_i, c_ijk` of `CK_6` inside `K_6`, with names.
pub fn ck6_generators() -> (Vec<CElem>, Vec<String>) {
    let alpha = FieldElem::alpha();
    let mut gens = Vec::new();
    let mut names = Vec::new();
    gens.push(k6_elem(&[
        (FieldElem::frac(-1, 2), 0, 0),
        (&alpha * &FieldElem::frac(1, 2), 3, 63),
    ]));
    names.push("L".to_string());
    for i in 1..=6 {
        for j in i + 1..=6 {
            gens.push(with_star(&[i, j], alpha.clone(), 1));
            names.push(format!("a{i}{j}"));
        }
    }
    for i in 1..=6 {
        gens.push(with_star(&[i], -&alpha, 2));
        names.push(format!("b{i}"));
    }
    for i in 1..=6 {
        for j in i + 1..=6 {
            for k in j + 1..=6 {
                gens.push(with_star(&[i, j, k], alpha.clone(), 0));
                names.push(format!("c{i}{j}{k}"));
            }
        }
    }
    (gens, names)
}

/// `CK_6 ⊂ K_6`: the generator family, its reduction and closure certificate.
pub fn build_ck6(k6: &CAlgebra, bound: Option<u8>) -> Result<Closure> {
    if k6.rank() != 64 || k6.variety != Variety::Lie {
        return Err(AlgebraError::AlgebraMismatch(k6.name.clone(), "K_6".into()));
    }
    let (gens, names) = ck6_generators();
    span_closure(k6, "CK_6", gens, names, bound)
}

/// `x_(0) y = [x_λ y]|_{λ=0}`.
pub fn zeroth(alg: &CAlgebra, x: &CElem, y: &CElem) -> Result<CElem> {
    Ok(alg.lprod(x, FVar::LAMBDA, y)?.coeff_of(FVar::LAMBDA, 0))
}

fn generator(name: &str) -> CElem {
    let (gens, names) = ck6_generators();
    let i = names
        .iter()
        .position(|n| n == name)
        .expect("known generator");
    gens[i].clone()
}

fn comb(x: &str, c: &FieldElem, y: &str) -> CElem {
    let mut v = generator(x);
    v.add_scaled(&generator(y), c);
    v
}

/// The eight spanning elements of the `−α/2`-eigenspace of `ad ω₅ω₆` on `CK_6`:
/// `x₆ − α x₅` for `x = a_i` (`i = 1..4`), `b`, `c_{12}`, `c_{13}`, `c_{23}`.
pub fn jck4_elements() -> (Vec<CElem>, Vec<String>) {
    let alpha = FieldElem::alpha();
    let mut gens = Vec::new();
    let mut names = Vec::new();
    let prefixes = ["a1", "a2", "a3", "a4", "b", "c12", "c13", "c23"];
    for x in prefixes {
        gens.push(comb(&format!("{x}6"), &-&alpha, &format!("{x}5")));
        names.push(format!("{x}6-α{x}5"));
    }
    (gens, names)
}

/// The odd combinations `b₅ − α b₆`, `c₁₂₆ − c₃₄₆`, `c₁₃₆ + c₂₄₆`,
/// `c₂₃₆ − c₁₄₆`. They lie in the `+α/2`-eigenspace, opposite to the even
/// elements `a_{i6} − α a_{i5}`.
pub fn jck4_printed_odd_elements() -> (Vec<CElem>, Vec<String>) {
    let alpha = FieldElem::alpha();
    let mut gens = vec![comb("b5", &-&alpha, "b6")];
    let mut names = vec!["b5-αb6".to_string()];
    for (x, s, y) in [
        ("c126", -1, "c346"),
        ("c136", 1, "c246"),
        ("c236", -1, "c146"),
    ] {
        gens.push(comb(x, &FieldElem::int(s), y));
        names.push(format!("{x}{}{y}", if s < 0 { "-" } else { "+" }));
    }
    (gens, names)
}

/// The `ad ω₅ω₆` eigenvalue of `x` in `K_6`, if `x` is an eigenvector.
pub fn omega56_eigenvalue(k6: &CAlgebra, x: &CElem) -> Result<Option<FieldElem>> {
    let h = k6_elem(&[(FieldElem::one(), 0, mask_of(&[5, 6]))]);
    let y = zeroth(k6, &h, x)?;
    let Some((key, c)) = x.leading() else {
        return Ok(None);
    };
    let ev = &y
        .terms()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v.clone())
        .unwrap_or_default()
        / c;
    Ok((y == x.scale(&ev)).then_some(ev))
}

/// How the short element `e` enters the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum TkkForm {
    /// `[[a_μ e]_λ b]|_{μ=0}`
    Right,
    /// `[[e_μ a]_λ b]|_{μ=0}`, i.e. `[(e_(0) a)_λ b]`
    Left,
}

/// The product `a_λ b` built from `e` in `K_6`.
pub fn tkk_lambda_product(
    k6: &CAlgebra,
    form: TkkForm,
    e: &CElem,
    x: &CElem,
    y: &CElem,
) -> Result<FormalPoly> {
    let inner = match form {
        TkkForm::Right => k6.lprod(x, FVar::MU, e)?,
        TkkForm::Left => k6.lprod(e, FVar::MU, x)?,
    };
    Ok(k6
        .lprod(&inner, FVar::LAMBDA, y)?
        .subst(FVar::MU, &Linear::zero()))
}

/// Element of the short subalgebra used to define the Jordan product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortElement {
    pub description: String,
    pub element: CElem,
    pub form: TkkForm,
    /// Index into [`jck4_elements`] of the even idempotent `a_{i6} − α a_{i5}`.
    pub unit: usize,
}

/// Candidates in search order: for each form, `ω_iω₅ − αω_iω₆` and
/// `a_{i5} − α a_{i6}` for `i = 1..4`.
fn short_candidates() -> Vec<ShortElement> {
    let alpha = FieldElem::alpha();
    let mut out = Vec::new();
    for form in [TkkForm::Right, TkkForm::Left] {
        for i in 1..=4usize {
            out.push(ShortElement {
                description: format!("ω{i}ω5-αω{i}ω6"),
                element: k6_elem(&[
                    (FieldElem::one(), 0, mask_of(&[i, 5])),
                    (-&alpha, 0, mask_of(&[i, 6])),
                ]),
                form,
                unit: i - 1,
            });
            let mut a = generator(&format!("a{i}5"));
            a.add_scaled(&generator(&format!("a{i}6")), &-&alpha);
            out.push(ShortElement {
                description: format!("a{i}5-αa{i}6"),
                element: a,
                form,
                unit: i - 1,
            });
        }
    }
    out
}

/// The first basis pair failing commutativity or quadruple failing the
/// conformal Jordan identity, rendered for reports.
pub fn jordan_failure(alg: &CAlgebra) -> Result<Option<String>> {
    use rayon::prelude::*;
    let r = alg.rank();
    let e = |i| FormalPoly::basis(i);
    for i in 0..r {
        for j in 0..r {
            let res = comm_residual_conf(alg, &e(i), &e(j), false)?;
            if !res.is_zero() {
                return Ok(Some(format!(
                    "comm({},{}) = {}",
                    alg.names[i],
                    alg.names[j],
                    alg.render(&res)
                )));
            }
        }
    }
    let quads: Vec<usize> = (0..r.pow(4)).collect();
    let split = |q: usize| (q / (r * r * r), q / (r * r) % r, q / r % r, q % r);
    let bad = quads.par_iter().map(|&q| q).find_first(|&q| {
        let (a, b, c, d) = split(q);
        !conformal_jordan_residual(alg, &e(a), &e(b), &e(c), &e(d))
            .map(|x| x.is_zero())
            .unwrap_or(false)
    });
    Ok(bad.map(|q| {
        let (a, b, c, d) = split(q);
        let res =
            conformal_jordan_residual(alg, &e(a), &e(b), &e(c), &e(d)).map(|x| alg.render(&x));
        format!(
            "jordan({},{},{},{}) = {}",
            alg.names[a],
            alg.names[b],
            alg.names[c],
            alg.names[d],
            res.unwrap_or_else(|err| err.to_string())
        )
    }))
}

pub fn passes_jordan_suite(alg: &CAlgebra) -> Result<bool> {
    Ok(jordan_failure(alg)?.is_none())
}

/// Certificate for the eigenspace realization of `JCK_4`.
#[derive(Clone, Debug)]
pub struct Jck4FromCk6 {
    pub algebra: CAlgebra,
    pub eigenvalue: FieldElem,
    /// Every listed element is an eigenvector.
    pub eigenvectors: bool,
    /// `ad(ad − c)(ad + c)` vanishes on the reduced basis of `CK_6`.
    pub diagonalizable: bool,
    /// The projections of all `CK_6` basis elements lie in the listed span.
    pub spans_eigenspace: bool,
    pub chosen: ShortElement,
    /// Candidates rejected before `chosen`, with the reason.
    pub rejected: Vec<(String, String)>,
}

/// `JCK_4` as the `−α/2`-eigenspace of `ad ω₅ω₆` (acting by the 0-th product)
/// on `CK_6`. The product is `[[a_μ e]_λ b]|_{μ=0}` or `[[e_μ a]_λ b]|_{μ=0}`
/// for the first candidate `e` under which the listed span closes, is
/// commutative and Jordan, and (after scaling `e`) has `u = a_{i6} − α a_{i5}`
/// idempotent: `u_λ u = u`.
pub fn build_jck4_from_ck6(k6: &CAlgebra, ck6: &Closure) -> Result<Jck4FromCk6> {
    let alpha = FieldElem::alpha();
    let eig = &alpha * &FieldElem::frac(-1, 2);
    let h = k6_elem(&[(FieldElem::one(), 0, mask_of(&[5, 6]))]);
    let ad = |x: &CElem| zeroth(k6, &h, x);
    let (elems, names) = jck4_elements();
    let mut eigenvectors = true;
    for x in &elems {
        let mut r = ad(x)?;
        r.add_scaled(x, &-&eig);
        eigenvectors &= r.is_zero();
    }
    let span = SpanBasis::new(
        elems.clone(),
        names.clone(),
        default_bound(k6, &elems),
        k6.rank(),
    )?;
    let (even, odd) = span.basis.iter().fold((0, 0), |(e, o), &g| {
        match k6.parity_of(&span.generators[g]) {
            Ok(Parity::Odd) => (e, o + 1),
            _ => (e + 1, o),
        }
    });
    if (even, odd) != (4, 4) || !span.independent {
        return Err(AlgebraError::EigenspaceRank {
            even,
            odd,
            want_even: 4,
            want_odd: 4,
        });
    }
    let mut diagonalizable = true;
    let mut spans_eigenspace = true;
    let half = &alpha * &FieldElem::frac(1, 2);
    for l in 0..ck6.span.rank() {
        let g = ck6.span.element(l);
        let adg = ad(g)?;
        let mut t = ad(&adg)?;
        t.add_scaled(&adg, &-&half);
        // t = ad(ad − α/2) g; the projector onto the −α/2 part is −2t
        let mut cube = ad(&t)?;
        cube.add_scaled(&t, &half);
        diagonalizable &= cube.is_zero();
        spans_eigenspace &= span.solve(&t.scale(&FieldElem::int(-2))).is_some();
    }
    let mut rejected = Vec::new();
    for cand in short_candidates() {
        let label = format!("{:?} {}", cand.form, cand.description);
        let closure = span_closure_with(
            k6,
            "JCK_4",
            Variety::Jordan,
            elems.clone(),
            names.clone(),
            None,
            &|x, y| tkk_lambda_product(k6, cand.form, &cand.element, x, y),
        )?;
        let Some(alg) = closure.table else {
            rejected.push((label, "product leaves the eigenspace".into()));
            continue;
        };
        let u = FormalPoly::basis(cand.unit);
        let uu = alg.lprod(&u, FVar::LAMBDA, &u)?;
        let kappa = uu
            .terms()
            .find(|(k, _)| k.basis as usize == cand.unit && k.d == 0)
            .map(|(_, c)| c.clone());
        let Some(kappa) = kappa.filter(|k| uu == u.scale(k)) else {
            rejected.push((label, format!("u_λu = {}", alg.render(&uu))));
            continue;
        };
        let inv = kappa.inv().expect("nonzero");
        let alg = alg.mutated("JCK_4", |_, _, p| p.scale(&inv))?;
        if let Some(why) = jordan_failure(&alg)? {
            rejected.push((label, why));
            continue;
        }
        let chosen = ShortElement {
            description: format!("{}·({})", inv, cand.description),
            element: cand.element.scale(&inv),
            ..cand
        };
        return Ok(Jck4FromCk6 {
            algebra: alg,
            eigenvalue: eig,
            eigenvectors,
            diagonalizable,
            spans_eigenspace,
            chosen,
            rejected,
        });
    }
    Err(AlgebraError::NoAdmissible(format!("{rejected:?}")))
}

/// The image of the monomial `mask` under `ξ_i ↦ Σ_j rows[i][j] ξ_j`.
pub fn grassmann_image(n: usize, rows: &[Vec<FieldElem>], mask: u32) -> Result<SPoly> {
    let sig = Signature::grassmann(n);
    let mut img = SPoly::one(sig);
    for (i, row) in rows.iter().enumerate().take(n) {
        if mask >> i & 1 == 1 {
            let mut lin = SPoly::zero(sig);
            for (j, c) in row.iter().enumerate() {
                lin = lin.try_add(&SPoly::xi_mask(sig, 1 << j).scale(c))?;
            }
            img = img.smul(&lin)?;
        }
    }
    Ok(img)
}

/// Images of the `J_n` basis under the change of odd coordinates
/// `ξ_i ↦ Σ_j rows[i][j] ξ_j`, extended multiplicatively to `Λ(n)`.
pub fn odd_coordinate_change(n: usize, rows: &[Vec<FieldElem>]) -> Result<Vec<CElem>> {
    let dim = 1usize << n;
    let mut out = vec![FormalPoly::zero(); 2 * dim];
    for mask in 0..dim as u32 {
        let img = grassmann_image(n, rows, mask)?;
        out[jn_index(n, mask, false)] = grassmann_to_formal(&img, 0);
        out[jn_index(n, mask, true)] = grassmann_to_formal(&img, dim);
    }
    Ok(out)
}

/// `ω_i` in terms of `ξ_j`: identity on the first `n − 2`, and on the last two
/// `ω_{n−1} = αεξ_{n−1} − εξ_n`, `ω_n = −εξ_{n−1} + αεξ_n`, which takes the
/// hyperbolic pair of the `J_n` form to the diagonal form of `K_n`.
pub fn omega_in_xi(n: usize) -> Vec<Vec<FieldElem>> {
    let mut rows: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| (0..n).map(|j| FieldElem::int((i == j) as i64)).collect())
        .collect();
    if n >= 2 {
        let (a, e) = (FieldElem::alpha(), FieldElem::epsilon());
        let ae = &a * &e;
        rows[n - 2][n - 2] = ae.clone();
        rows[n - 2][n - 1] = -&e;
        rows[n - 1][n - 2] = -&e;
        rows[n - 1][n - 1] = ae;
    }
    rows
}

/// Pairs of `K_n` monomials `a, b` (degrees `r, s`) where
/// `(−1)^s a⁻_λ b⁻ ≠ (2[a_λ b] + (∂ + 2λ)ab)⁺` after moving `K_n` to the
/// `ξ`-coordinates of `J_n` by [`omega_in_xi`].
pub fn jn_kn_remark_failures(
    jn: &CAlgebra,
    kn: &CAlgebra,
    n: usize,
) -> Result<Vec<(String, String)>> {
    let dim = 1usize << n;
    if jn.rank() != 2 * dim || kn.rank() != dim {
        return Err(AlgebraError::AlgebraMismatch(
            jn.name.clone(),
            kn.name.clone(),
        ));
    }
    let rows = omega_in_xi(n);
    let imgs: Vec<SPoly> = (0..dim as u32)
        .map(|m| grassmann_image(n, &rows, m))
        .collect::<Result<_>>()?;
    let plus = |k: usize| grassmann_to_formal(&imgs[k], 0);
    let mut fails = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            let s = b.count_ones();
            let am = grassmann_to_formal(&imgs[a], dim);
            let bm = grassmann_to_formal(&imgs[b], dim);
            let lhs = jn.lprod(&am, FVar::LAMBDA, &bm)?.signed(s % 2 == 1);
            let ab = grassmann_to_formal(&imgs[a].smul(&imgs[b])?, 0);
            let mut rhs = kn.table(a, b).map_basis(&plus).scale(&FieldElem::int(2));
            rhs.add_assign(&ab.d());
            rhs.add_scaled(&ab.times_var(FVar::LAMBDA, 1), &FieldElem::int(2));
            if lhs != rhs {
                fails.push((kn.names[a].clone(), kn.names[b].clone()));
            }
        }
    }
    Ok(fails)
}

/// The first basis pair `(i, j)` with `φ(e_i λ e_j) ≠ φ(e_i)_λ φ(e_j)`, where
/// `φ(e_i) = images[i]`.
pub fn homomorphism_failure(
    src: &CAlgebra,
    dst: &CAlgebra,
    images: &[CElem],
) -> Result<Option<(usize, usize)>> {
    for i in 0..src.rank() {
        for j in 0..src.rank() {
            let lhs = src.table(i, j).map_basis(&|k| images[k].clone());
            let rhs = dst.lprod(&images[i], FVar::LAMBDA, &images[j])?;
            if lhs != rhs {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// `J_3` with the odd form `−(ξ₁² + ξ₂² + ξ₃²)`, the coordinates in which the
/// `JCK_4` spanning list is written.
pub fn build_j3_diagonal() -> Result<CAlgebra> {
    let mut alg = build_jn_with(
        Signature::grassmann(3).with_pairing(OddPairing::Diagonal),
        &FieldElem::int(-1),
    )?;
    alg.name = "J_3(diag)".into();
    Ok(alg)
}

/// An isomorphism from [`build_j3_diagonal`] onto `build_jn(3)`:
/// `ξ₁ ↦ αξ₁`, `ξ₂ ↦ ξ₂ − ½ξ₃`, `ξ₃ ↦ αξ₂ + ½αξ₃`.
pub fn j3_diagonal_to_standard() -> Result<Vec<CElem>> {
    let a = FieldElem::alpha();
    let z = FieldElem::zero();
    let rows = vec![
        vec![a.clone(), z.clone(), z.clone()],
        vec![z.clone(), FieldElem::one(), FieldElem::frac(-1, 2)],
        vec![z, a.clone(), &a * &FieldElem::frac(1, 2)],
    ];
    odd_coordinate_change(3, &rows)
}

/// The spanning list of `JCK_4` in [`build_j3_diagonal`] with `ν = ξ₁ξ₂ξ₃`
/// and `ξ_i ξ_i* = ν`: `ξ_i⁻ + ∂(ξ_i*)⁺`, `1⁺ − ∂ν⁻`, `ξ_i⁺ + (ξ_i*)⁻`,
/// `1⁻ − ∂²ν⁺`.
pub fn jck4_in_j3_generators() -> (Vec<CElem>, Vec<String>) {
    let p = |m: u32| jn_index(3, m, false);
    let q = |m: u32| jn_index(3, m, true);
    let star = |i: usize| {
        let st = hodge_star(1 << (i - 1), 3);
        (st.complement, st.sign())
    };
    let mut gens = Vec::new();
    let mut names = Vec::new();
    for i in 1..=3usize {
        let (c, s) = star(i);
        let mut x = FormalPoly::basis(q(1 << (i - 1)));
        x.add_assign(&FormalPoly::basis_scaled(p(c), s).d());
        gens.push(x);
        names.push(format!("ξ{i}⁻+∂(ξ{i}*)⁺"));
    }
    let mut u = FormalPoly::basis(p(0));
    u.add_assign(&FormalPoly::basis_scaled(q(7), FieldElem::int(-1)).d());
    gens.push(u);
    names.push("1⁺-∂ν⁻".into());
    for i in 1..=3usize {
        let (c, s) = star(i);
        let mut x = FormalPoly::basis(p(1 << (i - 1)));
        x.add_assign(&FormalPoly::basis_scaled(q(c), s));
        gens.push(x);
        names.push(format!("ξ{i}⁺+(ξ{i}*)⁻"));
    }
    let mut w = FormalPoly::basis(q(0));
    w.add_assign(&FormalPoly::basis_scaled(p(7), FieldElem::int(-1)).d_pow(2));
    gens.push(w);
    names.push("1⁻-∂²ν⁺".into());
    (gens, names)
}

/// `JCK_4` inside `J_3 = build_jn(3)`: the spanning list transported by
/// [`j3_diagonal_to_standard`], closed under the `J_3` product.
pub fn build_jck4_in_j3(j3: &CAlgebra, bound: Option<u8>) -> Result<Closure> {
    if j3.rank() != 16 {
        return Err(AlgebraError::AlgebraMismatch(j3.name.clone(), "J_3".into()));
    }
    let phi = j3_diagonal_to_standard()?;
    let (gens, names) = jck4_in_j3_generators();
    let gens = gens
        .iter()
        .map(|g| g.map_basis(&|k| phi[k].clone()))
        .collect();
    span_closure(j3, "JCK_4⊂J_3", gens, names, bound)
}

/// A parity-preserving `F[∂]`-linear map `e_i ↦ c_i f_{π(i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIso {
    pub perm: Vec<usize>,
    pub scalars: Vec<FieldElem>,
}

impl MonomialIso {
    pub fn images(&self) -> Vec<CElem> {
        self.perm
            .iter()
            .zip(&self.scalars)
            .map(|(&p, c)| FormalPoly::basis_scaled(p, c.clone()))
            .collect()
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// The part of `p` on basis element `k`, moved to basis element 0.
fn component(p: &FormalPoly, k: usize) -> FormalPoly {
    let mut out = FormalPoly::zero();
    for (key, c) in p.terms() {
        if key.basis as usize == k {
            out.add_term(Key { basis: 0, ..*key }, c.clone());
        }
    }
    out
}

/// `r` with `a = r·b`, for nonzero `b`.
fn ratio(a: &FormalPoly, b: &FormalPoly) -> Option<FieldElem> {
    let (key, c) = b.leading()?;
    let r = &a.terms().find(|(k, _)| *k == key).map(|(_, v)| v.clone())? / c;
    (*a == b.scale(&r)).then_some(r)
}

/// `c_i c_j = r c_k`
type ScalarEq = (usize, usize, usize, FieldElem);

fn solve_scalars(eqs: &[ScalarEq], mut vals: Vec<Option<FieldElem>>) -> Option<Vec<FieldElem>> {
    loop {
        let mut progress = false;
        for (i, j, k, r) in eqs {
            let (ci, cj, ck) = (vals[*i].clone(), vals[*j].clone(), vals[*k].clone());
            match (ci, cj, ck) {
                (Some(a), Some(b), None) => vals[*k] = Some(&(&a * &b) / r),
                (None, Some(b), Some(c)) if i != j => vals[*i] = Some(&(r * &c) / &b),
                (Some(a), None, Some(c)) if i != j => vals[*j] = Some(&(r * &c) / &a),
                (Some(a), Some(b), Some(c)) => {
                    if &a * &b != r * &c {
                        return None;
                    }
                    continue;
                }
                _ => continue,
            }
            if vals.iter().flatten().any(|v| v.is_zero()) {
                return None;
            }
            progress = true;
        }
        if !progress {
            break;
        }
    }
    if vals.iter().all(Option::is_some) {
        return Some(vals.into_iter().map(Option::unwrap).collect());
    }
    // branch on a square relation, else fix a free scale
    if let Some((i, _, k, r)) = eqs
        .iter()
        .find(|(i, j, k, _)| i == j && vals[*i].is_none() && vals[*k].is_some())
    {
        let root = (r * vals[*k].as_ref().unwrap()).sqrt()?;
        for s in [root.clone(), -root] {
            let mut v = vals.clone();
            v[*i] = Some(s);
            if let Some(sol) = solve_scalars(eqs, v) {
                return Some(sol);
            }
        }
        return None;
    }
    let free = vals.iter().position(Option::is_none)?;
    vals[free] = Some(FieldElem::one());
    solve_scalars(eqs, vals)
}

/// Search for an isomorphism `src → dst` of the form `e_i ↦ c_i f_{π(i)}`
/// with `π` parity-preserving; every candidate is verified on the full table.
pub fn find_monomial_isomorphism(src: &CAlgebra, dst: &CAlgebra) -> Result<Option<MonomialIso>> {
    let r = src.rank();
    if r != dst.rank() || src.super_rank() != dst.super_rank() {
        return Ok(None);
    }
    let split = |alg: &CAlgebra, odd: bool| -> Vec<usize> {
        (0..alg.rank())
            .filter(|&i| alg.parities[i].is_odd() == odd)
            .collect()
    };
    let (se, so, de, dd) = (
        split(src, false),
        split(src, true),
        split(dst, false),
        split(dst, true),
    );
    for pe in permutations(&de) {
        'odd: for po in permutations(&dd) {
            let mut perm = vec![0; r];
            for (a, b) in se.iter().zip(&pe).chain(so.iter().zip(&po)) {
                perm[*a] = *b;
            }
            let mut eqs = Vec::new();
            for i in 0..r {
                for j in 0..r {
                    let (t, u) = (src.table(i, j), dst.table(perm[i], perm[j]));
                    let ks = t.basis_indices();
                    let mut ls = u.basis_indices();
                    let mut mapped: Vec<usize> = ks.iter().map(|&k| perm[k]).collect();
                    ls.sort_unstable();
                    mapped.sort_unstable();
                    if ls != mapped {
                        continue 'odd;
                    }
                    for k in ks {
                        let Some(q) = ratio(&component(t, k), &component(u, perm[k])) else {
                            continue 'odd;
                        };
                        eqs.push((i, j, k, q));
                    }
                }
            }
            let Some(scalars) = solve_scalars(&eqs, vec![None; r]) else {
                continue;
            };
            let iso = MonomialIso { perm, scalars };
            if homomorphism_failure(src, dst, &iso.images())?.is_none() {
                return Ok(Some(iso));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::jacobi_residual;

    fn e(i: usize) -> FormalPoly {
        FormalPoly::basis(i)
    }

    #[test]
    fn jn_examples() {
        let j0 = build_jn(0).unwrap();
        assert_eq!(j0.render(j0.table(0, 0)), "[1⁺]");
        assert_eq!(j0.render(j0.table(1, 1)), "-2·λ[1⁺] - ∂[1⁺]");
        let j2 = build_jn(2).unwrap();
        let x1m = jn_index(2, 0b01, true);
        let x2m = jn_index(2, 0b10, true);
        assert_eq!(j2.render(j2.table(x1m, x2m)), "[1⁺]");
        assert_eq!(j2.super_rank(), (4, 4));
    }

    #[test]
    fn js1_table() {
        let a = build_js1().unwrap();
        assert_eq!(a.render(a.table(1, 0)), "[T]");
        assert_eq!(a.render(a.table(0, 1)), "[T]");
        assert_eq!(a.render(a.table(0, 0)), "2·[S]");
        assert_eq!(a.render(a.table(1, 1)), "2·λ[S] + ∂[S]");
    }

    #[test]
    fn kn_examples() {
        let k = build_kn(2).unwrap();
        assert_eq!(k.render(k.table(0, 0)), "-2·λ[1] - ∂[1]");
        assert_eq!(k.render(k.table(1, 1)), "-1/2·[1]");
        assert!(k.table(3, 3).is_zero());
    }

    #[test]
    fn hodge_examples() {
        let s = hodge_star(0b1, 6);
        assert_eq!((s.negative, s.complement), (false, 0b111110));
        assert_eq!(hodge_star(0b111111, 6).complement, 0);
        assert_eq!(hodge_star(0, 6).complement, 0b111111);
        assert!(!hodge_star(0b11, 6).negative);
        for m in 0..64u32 {
            let s = hodge_star(m, 6);
            let sig = Signature::grassmann(6);
            let prod = SPoly::xi_mask(sig, m)
                .smul(&SPoly::xi_mask(sig, s.complement))
                .unwrap();
            assert_eq!(prod, SPoly::xi_mask(sig, 63).scale(&s.sign()));
        }
    }

    #[test]
    fn small_jordan_and_lie_checks() {
        let j1 = build_jn(1).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert!(comm_residual_conf(&j1, &e(a), &e(b), false)
                    .unwrap()
                    .is_zero());
            }
        }
        let r = conformal_jordan_residual(&j1, &e(2), &e(3), &e(3), &e(2)).unwrap();
        assert!(r.is_zero(), "{}", j1.render(&r));
        let k2 = build_kn(2).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert!(comm_residual_conf(&k2, &e(a), &e(b), true)
                    .unwrap()
                    .is_zero());
                for c in 0..4 {
                    assert!(jacobi_residual(&k2, &e(a), &e(b), &e(c)).unwrap().is_zero());
                }
            }
        }
    }
}
