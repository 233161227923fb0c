//! Coefficient (annihilation algebra) realizations on Laurent models, the
//! binomial bridge between `j`-th products and coefficient products, and the
//! `sl₂`/TKK checks inside `K(1, n+3)`.
//!
//! Conventions: `x_(j)y = j!·[λ^j](x_λ y)`, `coef_k(∂x) = −k·coef_{k−1}(x)`,
//! and
//!
//! ```text
//! coef_m(x) ∘ coef_k(y) = Σ_j C(m, j) coef_{m+k−j}(x_(j) y)
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::brackets::{kbracket, BracketKind};
use crate::conformal::{cur, CAlgebra, CElem, Variety};
use crate::constructions::{build_jn_with, build_js1};
use crate::error::{AlgebraError, Result};
use crate::jordan::{
    kkm_mul, FVec, FiniteAlgebra, Js11, Js11Convention, KKMElem, KkmDouble, Superalgebra,
};
use crate::scalar::{binomial, FieldElem, Rat};
use crate::superpoly::{OddPairing, Parity, SPoly, Signature, Var};

type BasisCoef<E> = dyn Fn(usize, i64) -> E + Send + Sync;

/// A conformal algebra together with the images `coef_k(e_i)` of its basis in
/// a Laurent model of the annihilation algebra.
pub struct CoefRealization<A: Superalgebra> {
    pub source: CAlgebra,
    pub target: A,
    pub target_name: String,
    basis: Box<BasisCoef<A::Elem>>,
}

/// `k(k−1)⋯(k−p+1)`
fn falling(k: i64, p: u8) -> FieldElem {
    FieldElem::int((0..p as i64).map(|i| k - i).product())
}

impl<A: Superalgebra> CoefRealization<A> {
    pub fn new(
        source: CAlgebra,
        target: A,
        target_name: impl Into<String>,
        basis: impl Fn(usize, i64) -> A::Elem + Send + Sync + 'static,
    ) -> Self {
        CoefRealization {
            source,
            target,
            target_name: target_name.into(),
            basis: Box::new(basis),
        }
    }

    pub fn coef_basis(&self, i: usize, k: i64) -> A::Elem {
        (self.basis)(i, k)
    }

    fn zero(&self, k: i64) -> A::Elem {
        self.target
            .scale(&FieldElem::zero(), &self.coef_basis(0, k))
    }

    /// `coef_k(x)`, extended from the basis by `coef_k(∂^p e) = (−1)^p k⋯(k−p+1) coef_{k−p}(e)`.
    pub fn coef(&self, x: &CElem, k: i64) -> Result<A::Elem> {
        if x.has_vars() {
            return Err(AlgebraError::VariableCollision(format!(
                "coef of a λ-dependent element {}",
                self.source.render(x)
            )));
        }
        let mut out = self.zero(k);
        for (key, c) in x.terms() {
            let f = &falling(k, key.d) * &FieldElem::sign(key.d % 2 == 1);
            if f.is_zero() {
                continue;
            }
            let img = self.coef_basis(key.basis as usize, k - key.d as i64);
            out = self.target.add(&out, &self.target.scale(&(&f * c), &img));
        }
        Ok(out)
    }

    /// `coef_k(∂x) + k·coef_{k−1}(x)`.
    pub fn d_compat_residual(&self, x: &CElem, k: i64) -> Result<A::Elem> {
        let lhs = self.coef(&x.d(), k)?;
        let rhs = self.coef(x, k - 1)?;
        Ok(self
            .target
            .add(&lhs, &self.target.scale(&FieldElem::int(k), &rhs)))
    }

    /// `coef_m(x)∘coef_k(y) − Σ_j C(m,j) coef_{m+k−j}(x_(j)y)`.
    pub fn bridge_residual(&self, x: &CElem, y: &CElem, m: i64, k: i64) -> Result<A::Elem> {
        let lhs = self.target.mul(&self.coef(x, m)?, &self.coef(y, k)?);
        let deg = self
            .source
            .lprod(x, crate::conformal::FVar::LAMBDA, y)?
            .degree_in(crate::conformal::FVar::LAMBDA)
            .unwrap_or(0);
        let mut rhs = self.zero(m + k);
        for j in 0..=deg as u32 {
            let c = FieldElem::from_rat(Rat::from_integer(binomial(m, j)));
            if c.is_zero() {
                continue;
            }
            let xj = self.source.jth_product(x, y, j)?;
            rhs = self.target.add(
                &rhs,
                &self.target.scale(&c, &self.coef(&xj, m + k - j as i64)?),
            );
        }
        Ok(self.target.sub(&lhs, &rhs))
    }
}

/// `J_n → K(P(1,n))` with `t` Laurent: `coef_k(a⁺) = a t^k`, `coef_k(a⁻) = a t^k θ`.
pub fn jn_realization(n: usize) -> Result<CoefRealization<KkmDouble>> {
    let sig = Signature::laurent(n);
    let mut jsig = Signature::grassmann(n);
    if n >= 2 {
        jsig = jsig.with_pairing(sig.pairing());
    }
    let source = build_jn_with(jsig, &FieldElem::one())?;
    let kind = BracketKind::contact(sig)?;
    let dim = 1usize << n;
    Ok(CoefRealization::new(
        source,
        KkmDouble { kind },
        format!("K(P(1,{n}))"),
        move |i, k| {
            let a = SPoly::t_pow(sig, k as i32, (i % dim) as u32);
            if i < dim {
                KKMElem::even_part(a)
            } else {
                KKMElem::theta_part(a)
            }
        },
    ))
}

/// `JS_1 → js(1,1)`: `coef_k(S) = ξt^k`, `coef_k(T) = α·t^k`.
pub fn js1_realization() -> Result<CoefRealization<Js11>> {
    js1_realization_with(FieldElem::alpha())
}

/// `coef_k(S) = ξt^k`, `coef_k(T) = c·t^k`.
pub fn js1_realization_with(c: FieldElem) -> Result<CoefRealization<Js11>> {
    let target = Js11::new(Js11Convention::Corrected);
    let sig = target.sig;
    Ok(CoefRealization::new(
        build_js1()?,
        target,
        "js(1,1)",
        move |i, k| {
            if i == 0 {
                SPoly::t_pow(sig, k as i32, 1)
            } else {
                SPoly::t_pow(sig, k as i32, 0).scale(&c)
            }
        },
    ))
}

/// An element `Σ t^k ⊗ v_k` of `F[t, t⁻¹] ⊗ 𝔧`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentVec(pub BTreeMap<i64, FVec>);

impl LaurentVec {
    pub fn single(k: i64, v: FVec) -> Self {
        let mut m = BTreeMap::new();
        if v.0.iter().any(|c| !c.is_zero()) {
            m.insert(k, v);
        }
        LaurentVec(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn normalized(mut self) -> Self {
        self.0.retain(|_, v| v.0.iter().any(|c| !c.is_zero()));
        self
    }
}

impl fmt::Display for LaurentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("t^{k}⊗{v}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The loop algebra `F[t, t⁻¹] ⊗ 𝔧`, `(t^a x)(t^b y) = t^{a+b} xy`.
#[derive(Clone, Debug)]
pub struct LaurentCurrent {
    pub alg: FiniteAlgebra,
}

impl Superalgebra for LaurentCurrent {
    type Elem = LaurentVec;
    fn mul(&self, x: &LaurentVec, y: &LaurentVec) -> LaurentVec {
        let mut out = LaurentVec::default();
        for (a, u) in &x.0 {
            for (b, v) in &y.0 {
                let p = self.alg.mul(u, v);
                out = self.add(&out, &LaurentVec::single(a + b, p));
            }
        }
        out
    }
    fn parity(&self, x: &LaurentVec) -> Option<Parity> {
        let mut ps = x.0.values().map(|v| self.alg.parity(v));
        match ps.next() {
            None => Some(Parity::Even),
            Some(p) => ps.all(|q| q == p).then_some(p?),
        }
    }
    fn add(&self, x: &LaurentVec, y: &LaurentVec) -> LaurentVec {
        let mut out = x.0.clone();
        for (k, v) in &y.0 {
            let e = out.entry(*k).or_insert_with(|| FVec::zero(self.alg.dim()));
            *e = self.alg.add(e, v);
        }
        LaurentVec(out).normalized()
    }
    fn scale(&self, c: &FieldElem, x: &LaurentVec) -> LaurentVec {
        LaurentVec(
            x.0.iter()
                .map(|(k, v)| (*k, self.alg.scale(c, v)))
                .collect(),
        )
        .normalized()
    }
    fn is_zero(&self, x: &LaurentVec) -> bool {
        x.0.is_empty()
    }
}

/// `Cur 𝔧 → F[t, t⁻¹] ⊗ 𝔧`, `coef_k(a) = t^k a`.
pub fn current_realization(
    alg: FiniteAlgebra,
    variety: Variety,
) -> Result<CoefRealization<LaurentCurrent>> {
    let source = cur(&alg, variety)?;
    let dim = alg.dim();
    let name = format!("F[t,t⁻¹]⊗{}", alg.name);
    Ok(CoefRealization::new(
        source,
        LaurentCurrent { alg },
        name,
        move |i, k| LaurentVec::single(k, FVec::basis(dim, i)),
    ))
}

/// The Kaplansky superalgebra `K_3`: `e² = e`, `e∘x = ½x`, `e∘y = ½y`,
/// `x∘y = −y∘x = ½e`.
pub fn kaplansky_k3() -> FiniteAlgebra {
    let h = FieldElem::frac(1, 2);
    let mut t = vec![vec![Vec::new(); 3]; 3];
    t[0][0] = vec![(0, FieldElem::one())];
    for i in 1..3 {
        t[0][i] = vec![(i, h.clone())];
        t[i][0] = vec![(i, h.clone())];
    }
    t[1][2] = vec![(0, h.clone())];
    t[2][1] = vec![(0, -&h)];
    FiniteAlgebra::new(
        "K3",
        vec!["e".into(), "x".into(), "y".into()],
        vec![Parity::Even, Parity::Odd, Parity::Odd],
        t,
    )
    .expect("valid table")
}

/// An `sl₂`-triple in `Λ(1, n+3)` under the contact bracket.
#[derive(Clone, Debug, Serialize)]
pub struct SL2Triple {
    pub n: usize,
    #[serde(skip)]
    pub e: SPoly,
    #[serde(skip)]
    pub h: SPoly,
    #[serde(skip)]
    pub f: SPoly,
    /// `e`, `h`, `f` as scalar multiples of the listed monomials.
    pub roles: [String; 3],
    /// Scalar fixed by requiring the embedded unit to act as identity.
    pub normalization: FieldElem,
}

fn big_signature(n: usize) -> Signature {
    Signature::laurent(n + 3)
}

/// `Λ(1, n)` with the diagonal form: the restriction of the form of `Λ(1, n+3)`.
pub fn small_signature(n: usize) -> Signature {
    Signature::laurent(n).with_pairing(OddPairing::Diagonal)
}

fn xi(sig: Signature, i: usize) -> SPoly {
    SPoly::var(sig, Var::Xi(i)).expect("index within signature")
}

/// `r` with `a = r·b`.
fn spoly_ratio(a: &SPoly, b: &SPoly) -> Option<FieldElem> {
    let (m, c) = b.terms().next()?;
    let r = &a.coeff(m) / c;
    (*a == b.scale(&r)).then_some(r)
}

/// The three monomials `ξ_{n+1}ξ_{n+2}`, `ξ_{n+3}ξ_{n+2}`, `ξ_{n+1}ξ_{n+3}`
/// with their names.
pub fn sl2_monomials(n: usize) -> [(String, SPoly); 3] {
    let s = big_signature(n);
    let (a, b, c) = (n + 1, n + 2, n + 3);
    [
        (format!("ξ{a}ξ{b}"), &xi(s, a) * &xi(s, b)),
        (format!("ξ{c}ξ{b}"), &xi(s, c) * &xi(s, b)),
        (format!("ξ{a}ξ{c}"), &xi(s, a) * &xi(s, c)),
    ]
}

/// Assigns the roles `e, h, f` to the three monomials and scales them so that
/// `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h` and `[[u,e],u] = u` for the
/// embedded unit `u = ξ_{n+1}ξ_{n+3}`.
pub fn sl2_assign(n: usize) -> Result<SL2Triple> {
    let mons = sl2_monomials(n);
    let unit = tkk_embed(&KKMElem::even_part(SPoly::one(small_signature(n))), n)?;
    let mut table = Vec::new();
    for (ie, ih, ifl) in [
        (0, 1, 2),
        (0, 2, 1),
        (1, 0, 2),
        (1, 2, 0),
        (2, 0, 1),
        (2, 1, 0),
    ] {
        let (ne, e) = &mons[ie];
        let (nh, h) = &mons[ih];
        let (nf, f) = &mons[ifl];
        let he = kbracket(h, e)?;
        let hf = kbracket(h, f)?;
        let ef = kbracket(e, f)?;
        table.push(format!(
            "[{nh},{ne}] = {he}; [{nh},{nf}] = {hf}; [{ne},{nf}] = {ef}"
        ));
        let (Some(ke), Some(kf), Some(rho)) = (
            spoly_ratio(&he, e),
            spoly_ratio(&hf, f),
            spoly_ratio(&ef, h),
        ) else {
            continue;
        };
        if ke.is_zero() || kf != -&ke || rho.is_zero() {
            continue;
        }
        let ch = &FieldElem::int(2) / &ke;
        let Some(sigma) = spoly_ratio(&kbracket(&kbracket(&unit, e)?, &unit)?, &unit) else {
            continue;
        };
        if sigma.is_zero() {
            continue;
        }
        let ce = sigma.inv().expect("nonzero");
        let cf = &ch / &(&rho * &ce);
        return Ok(SL2Triple {
            n,
            e: e.scale(&ce),
            h: h.scale(&ch),
            f: f.scale(&cf),
            roles: [
                format!("e = {ce}·{ne}"),
                format!("h = {ch}·{nh}"),
                format!("f = {cf}·{nf}"),
            ],
            normalization: ce,
        });
    }
    Err(AlgebraError::NoAdmissible(table.join(" | ")))
}

/// `([h,e] − 2e, [h,f] + 2f, [e,f] − h)`.
pub fn sl2_residuals(tr: &SL2Triple) -> Result<[SPoly; 3]> {
    let two = FieldElem::int(2);
    Ok([
        &kbracket(&tr.h, &tr.e)? - &tr.e.scale(&two),
        &kbracket(&tr.h, &tr.f)? + &tr.f.scale(&two),
        &kbracket(&tr.e, &tr.f)? - &tr.h,
    ])
}

/// The `ad h` eigenvalue of `x`, if `x` is an eigenvector.
pub fn ad_h_eigenvalue(tr: &SL2Triple, x: &SPoly) -> Result<Option<FieldElem>> {
    Ok(spoly_ratio(&kbracket(&tr.h, x)?, x))
}

/// Where `θ` goes under a TKK embedding: `a + bθ ↦ (aξ_{n+1} + c·b)ξ_{last}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TkkEmbedding {
    pub n: usize,
    pub last: usize,
    pub theta: FieldElem,
}

impl TkkEmbedding {
    /// `a + bθ ↦ (aξ_{n+1} + b)ξ_{n+3}` as displayed.
    pub fn literal(n: usize) -> Self {
        TkkEmbedding {
            n,
            last: n + 3,
            theta: FieldElem::one(),
        }
    }

    /// The displayed map with `θ` rescaled by `α`; `(bθ)∘(cθ)` changes sign
    /// against the literal map, which is what the KKM product requires.
    pub fn normalized(n: usize) -> Self {
        TkkEmbedding {
            n,
            last: n + 3,
            theta: FieldElem::alpha(),
        }
    }

    /// `ξ_{n+3}` replaced by `ξ_{n+2}`.
    pub fn mutated(n: usize) -> Self {
        TkkEmbedding {
            n,
            last: n + 2,
            theta: FieldElem::alpha(),
        }
    }

    pub fn apply(&self, x: &KKMElem) -> Result<SPoly> {
        let n = self.n;
        let s = big_signature(n);
        if x.signature() != small_signature(n) {
            return Err(AlgebraError::SignatureMismatch(
                x.signature().to_string(),
                small_signature(n).to_string(),
            ));
        }
        let a = x.a.with_signature(s);
        let b = x.b.with_signature(s).scale(&self.theta);
        Ok(&(&(&a * &xi(s, n + 1)) + &b) * &xi(s, self.last))
    }
}

/// `a + bθ ↦ (aξ_{n+1} + b)ξ_{n+3}` into `Λ(1, n+3)`.
pub fn tkk_embed(x: &KKMElem, n: usize) -> Result<SPoly> {
    TkkEmbedding::literal(n).apply(x)
}

/// `[[ι(x), e], ι(y)] − ι(x∘y)` for the normalized embedding `ι`, with `∘`
/// the KKM product over `P(1,n)`.
pub fn tkk_product_residual(x: &KKMElem, y: &KKMElem, tr: &SL2Triple) -> Result<SPoly> {
    tkk_product_residual_with(x, y, tr, &TkkEmbedding::normalized(tr.n))
}

pub fn tkk_product_residual_with(
    x: &KKMElem,
    y: &KKMElem,
    tr: &SL2Triple,
    emb: &TkkEmbedding,
) -> Result<SPoly> {
    let kind = BracketKind::contact(small_signature(tr.n))?;
    let lhs = kbracket(&kbracket(&emb.apply(x)?, &tr.e)?, &emb.apply(y)?)?;
    Ok(&lhs - &emb.apply(&kkm_mul(x, y, &kind)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::FormalPoly;

    #[test]
    fn coef_examples() {
        let r = jn_realization(1).unwrap();
        let s = Signature::laurent(1);
        // ξ₁⁻ has index 2 + 1
        assert_eq!(
            r.coef_basis(3, 2),
            KKMElem::theta_part(SPoly::t_pow(s, 2, 1))
        );
        assert!(r.coef(&FormalPoly::basis(0).d(), 0).unwrap().is_zero());
        let js = js1_realization().unwrap();
        assert_eq!(
            js.coef_basis(1, -1),
            SPoly::t_pow(js.target.sig, -1, 0).scale(&FieldElem::alpha())
        );
    }

    #[test]
    fn bridge_pins_conventions_on_j0() {
        let r = jn_realization(0).unwrap();
        let minus = FormalPoly::basis(1);
        let lhs = r
            .target
            .mul(&r.coef(&minus, 1).unwrap(), &r.coef(&minus, 0).unwrap());
        assert_eq!(
            lhs,
            KKMElem::even_part(SPoly::constant(Signature::laurent(0), FieldElem::int(-1)))
        );
        for (m, k) in [(0, 0), (1, 0)] {
            assert!(
                r.bridge_residual(&minus, &minus, m, k).unwrap().is_zero(),
                "m={m} k={k}"
            );
        }
    }

    #[test]
    fn bridge_on_currents_and_js1() {
        let c = current_realization(kaplansky_k3(), Variety::Jordan).unwrap();
        let js = js1_realization().unwrap();
        for m in -2..=2 {
            for k in -2..=2 {
                for i in 0..3 {
                    for j in 0..3 {
                        let (x, y) = (FormalPoly::basis(i), FormalPoly::basis(j));
                        assert!(c.bridge_residual(&x, &y, m, k).unwrap().is_zero());
                        if i < 2 && j < 2 {
                            assert!(
                                js.bridge_residual(&x, &y, m, k).unwrap().is_zero(),
                                "JS_1 {i} {j} {m} {k}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn d_compatibility() {
        let r = jn_realization(1).unwrap();
        for i in 0..4 {
            for k in -3..=3 {
                assert!(r
                    .d_compat_residual(&FormalPoly::basis(i).d(), k)
                    .unwrap()
                    .is_zero());
            }
        }
    }

    #[test]
    fn sl2_and_embedding_examples() {
        let tr = sl2_assign(0).unwrap();
        assert!(sl2_residuals(&tr).unwrap().iter().all(SPoly::is_zero));
        let mut eig: Vec<String> = [&tr.e, &tr.h, &tr.f]
            .iter()
            .map(|x| ad_h_eigenvalue(&tr, x).unwrap().unwrap().to_string())
            .collect();
        eig.sort();
        assert_eq!(eig, vec!["-2", "0", "2"]);
        let s = small_signature(0);
        let b = big_signature(0);
        assert_eq!(
            tkk_embed(&KKMElem::even_part(SPoly::one(s)), 0).unwrap(),
            &xi(b, 1) * &xi(b, 3)
        );
        assert_eq!(
            tkk_embed(&KKMElem::theta_part(SPoly::one(s)), 0).unwrap(),
            xi(b, 3)
        );
        let u = KKMElem::even_part(SPoly::one(s));
        assert!(tkk_product_residual(&u, &u, &tr).unwrap().is_zero());
        let th = KKMElem::theta_part(SPoly::t_pow(s, 1, 0));
        let th2 = KKMElem::theta_part(SPoly::one(s));
        assert!(tkk_product_residual(&th, &th2, &tr).unwrap().is_zero());
        let lit = tkk_product_residual_with(&th, &th2, &tr, &TkkEmbedding::literal(0)).unwrap();
        assert!(!lit.is_zero());
        assert!(
            !tkk_product_residual_with(&u, &th2, &tr, &TkkEmbedding::mutated(0))
                .unwrap()
                .is_zero()
        );
    }
}
