//! Jordan superalgebra products: KKM doubles, `js(1,1)`, finite tables,
//! identity residuals and derivation checks.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::brackets::BracketKind;
use crate::error::{AlgebraError, Result};
use crate::report::{Entry, VerificationReport};
use crate::scalar::FieldElem;
use crate::superpoly::{koszul, Parity, SPoly, Signature, Var};

/// A bilinear product on a superspace together with its linear structure.
pub trait Superalgebra: Sync {
    type Elem: Clone + Send + Sync + PartialEq + fmt::Display;

    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// `None` for non-homogeneous elements; zero counts as even.
    fn parity(&self, x: &Self::Elem) -> Option<Parity>;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &FieldElem, x: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.scale(&FieldElem::int(-1), y))
    }

    fn signed(&self, neg: bool, x: Self::Elem) -> Self::Elem {
        if neg {
            self.scale(&FieldElem::int(-1), &x)
        } else {
            x
        }
    }
}

fn homogeneous<A: Superalgebra + ?Sized>(alg: &A, x: &A::Elem) -> Result<Parity> {
    alg.parity(x)
        .ok_or_else(|| AlgebraError::NotHomogeneous(x.to_string()))
}

/// `a∘b − (−1)^{|a||b|} b∘a`.
pub fn comm_residual<A: Superalgebra + ?Sized>(
    alg: &A,
    a: &A::Elem,
    b: &A::Elem,
) -> Result<A::Elem> {
    let (pa, pb) = (homogeneous(alg, a)?, homogeneous(alg, b)?);
    let ba = alg.mul(b, a);
    Ok(alg.sub(&alg.mul(a, b), &alg.signed(koszul(pa, pb), ba)))
}

/// LHS − RHS of the linearized Jordan identity
///
/// ```text
/// (−1)^{|a||c|}(a∘b)∘(c∘d) + (−1)^{|a||b|}(b∘c)∘(a∘d) + (−1)^{|b||c|}(c∘a)∘(b∘d)
///   = (−1)^{|a||c|}a∘((b∘c)∘d) + (−1)^{|a||b|}b∘((c∘a)∘d) + (−1)^{|b||c|}c∘((a∘b)∘d)
/// ```
pub fn lin_jordan_residual<A: Superalgebra + ?Sized>(
    alg: &A,
    a: &A::Elem,
    b: &A::Elem,
    c: &A::Elem,
    d: &A::Elem,
) -> Result<A::Elem> {
    let (pa, pb, pc) = (
        homogeneous(alg, a)?,
        homogeneous(alg, b)?,
        homogeneous(alg, c)?,
    );
    homogeneous(alg, d)?;
    let m = |x: &A::Elem, y: &A::Elem| alg.mul(x, y);
    let (sac, sab, sbc) = (koszul(pa, pc), koszul(pa, pb), koszul(pb, pc));
    let (ab, bc, ca) = (m(a, b), m(b, c), m(c, a));
    let lhs = alg.add(
        &alg.add(
            &alg.signed(sac, m(&ab, &m(c, d))),
            &alg.signed(sab, m(&bc, &m(a, d))),
        ),
        &alg.signed(sbc, m(&ca, &m(b, d))),
    );
    let rhs = alg.add(
        &alg.add(
            &alg.signed(sac, m(a, &m(&bc, d))),
            &alg.signed(sab, m(b, &m(&ca, d))),
        ),
        &alg.signed(sbc, m(c, &m(&ab, d))),
    );
    Ok(alg.sub(&lhs, &rhs))
}

/// The Grassmann / super-polynomial algebra with its associative product.
#[derive(Clone, Debug)]
pub struct Grassmann {
    pub sig: Signature,
}

impl Superalgebra for Grassmann {
    type Elem = SPoly;
    fn mul(&self, x: &SPoly, y: &SPoly) -> SPoly {
        x * y
    }
    fn parity(&self, x: &SPoly) -> Option<Parity> {
        x.parity_or_even()
    }
    fn add(&self, x: &SPoly, y: &SPoly) -> SPoly {
        x + y
    }
    fn scale(&self, c: &FieldElem, x: &SPoly) -> SPoly {
        x.scale(c)
    }
    fn is_zero(&self, x: &SPoly) -> bool {
        x.is_zero()
    }
}

type SPolyProduct = dyn Fn(&SPoly, &SPoly) -> SPoly + Send + Sync;

/// An arbitrary product on super-polynomials, used for planted defects.
#[derive(Clone)]
pub struct CustomProduct {
    pub name: String,
    pub product: Arc<SPolyProduct>,
}

impl CustomProduct {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&SPoly, &SPoly) -> SPoly + Send + Sync + 'static,
    ) -> Self {
        CustomProduct {
            name: name.into(),
            product: Arc::new(f),
        }
    }
}

impl Superalgebra for CustomProduct {
    type Elem = SPoly;
    fn mul(&self, x: &SPoly, y: &SPoly) -> SPoly {
        (self.product)(x, y)
    }
    fn parity(&self, x: &SPoly) -> Option<Parity> {
        x.parity_or_even()
    }
    fn add(&self, x: &SPoly, y: &SPoly) -> SPoly {
        x + y
    }
    fn scale(&self, c: &FieldElem, x: &SPoly) -> SPoly {
        x.scale(c)
    }
    fn is_zero(&self, x: &SPoly) -> bool {
        x.is_zero()
    }
}

/// `a + bθ` in the KKM double `K(A) = A ⊕ Aθ`, `θ` odd.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KKMElem {
    pub a: SPoly,
    pub b: SPoly,
}

impl KKMElem {
    pub fn new(a: SPoly, b: SPoly) -> Self {
        assert_eq!(a.signature(), b.signature());
        KKMElem { a, b }
    }

    pub fn even_part(a: SPoly) -> Self {
        let z = SPoly::zero(a.signature());
        KKMElem { a, b: z }
    }

    pub fn theta_part(b: SPoly) -> Self {
        let z = SPoly::zero(b.signature());
        KKMElem { a: z, b }
    }

    pub fn signature(&self) -> Signature {
        self.a.signature()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `|a| = |b| + 1`; the zero element is even.
    pub fn parity(&self) -> Option<Parity> {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => Some(Parity::Even),
            (false, true) => self.a.parity(),
            (true, false) => self.b.parity().map(Parity::flip),
            (false, false) => {
                let pa = self.a.parity()?;
                (self.b.parity()? == pa.flip()).then_some(pa)
            }
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        KKMElem {
            a: self.a.scale(c),
            b: self.b.scale(c),
        }
    }
}

impl std::ops::Add for &KKMElem {
    type Output = KKMElem;
    fn add(self, o: &KKMElem) -> KKMElem {
        KKMElem {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
}

impl std::ops::Sub for &KKMElem {
    type Output = KKMElem;
    fn sub(self, o: &KKMElem) -> KKMElem {
        KKMElem {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
}

impl fmt::Display for KKMElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})θ", self.b),
            (false, false) => write!(f, "{} + ({})θ", self.a, self.b),
        }
    }
}

impl fmt::Debug for KKMElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn signed_poly(neg: bool, p: SPoly) -> SPoly {
    if neg {
        -&p
    } else {
        p
    }
}

/// The KKM product
/// `a∘b = ab`, `a∘(bθ) = (ab)θ`, `(aθ)∘b = (−1)^{|b|}(ab)θ`, `(aθ)∘(bθ) = (−1)^{|b|}{a,b}_D`.
pub fn kkm_mul(x: &KKMElem, y: &KKMElem, kind: &BracketKind) -> Result<KKMElem> {
    if x.signature() != kind.sig || y.signature() != kind.sig {
        return Err(AlgebraError::SignatureMismatch(
            x.signature().to_string(),
            kind.sig.to_string(),
        ));
    }
    let mut even = &x.a * &y.a;
    let mut theta = &x.a * &y.b;
    for (pb, yb) in y.a.homogeneous_parts() {
        theta = &theta + &signed_poly(pb.is_odd(), &x.b * &yb);
    }
    for (pb, yb) in y.b.homogeneous_parts() {
        even = &even + &signed_poly(pb.is_odd(), kind.jordan_bracket(&x.b, &yb)?);
    }
    Ok(KKMElem { a: even, b: theta })
}

/// `K(A)` for `A = (Λ(m,n), {·,·})`.
#[derive(Clone, Debug)]
pub struct KkmDouble {
    pub kind: BracketKind,
}

impl Superalgebra for KkmDouble {
    type Elem = KKMElem;
    fn mul(&self, x: &KKMElem, y: &KKMElem) -> KKMElem {
        kkm_mul(x, y, &self.kind).expect("KKM operands share the bracket signature")
    }
    fn parity(&self, x: &KKMElem) -> Option<Parity> {
        x.parity()
    }
    fn add(&self, x: &KKMElem, y: &KKMElem) -> KKMElem {
        x + y
    }
    fn scale(&self, c: &FieldElem, x: &KKMElem) -> KKMElem {
        x.scale(c)
    }
    fn is_zero(&self, x: &KKMElem) -> bool {
        x.is_zero()
    }
}

/// Which parity enters the sign `(−1)^{|b|}` of the `js(1,1)` product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Js11Convention {
    /// Parity of `b` in `Λ(1,1)`.
    OriginalParity,
    /// Parity of `b` in the parity-reversed space.
    ReversedParity,
    /// `a∘b = aD(b) + (−1)^{|a|}D(a)b` with `|a|` the reversed parity. The
    /// only variant of the two printed readings that is a Jordan superalgebra.
    Corrected,
}

/// `js(1,1)`: `Λ(1,1)` with reversed parity and `a∘b = aD(b) + (−1)^{|b|}D(a)b`,
/// `D = ∂/∂ξ + ξ∂/∂t`.
#[derive(Clone, Debug)]
pub struct Js11 {
    pub convention: Js11Convention,
    pub sig: Signature,
}

impl Js11 {
    pub fn new(convention: Js11Convention) -> Self {
        Js11 {
            convention,
            sig: Signature::laurent(1),
        }
    }

    pub fn d(&self, f: &SPoly) -> SPoly {
        let xi = SPoly::var(self.sig, Var::Xi(1)).unwrap();
        &f.partial(Var::Xi(1)).unwrap() + &(&xi * &f.partial(Var::T).unwrap())
    }
}

/// The `js(1,1)` product under the given sign convention.
pub fn js11_mul(x: &SPoly, y: &SPoly, convention: Js11Convention) -> SPoly {
    Js11 {
        convention,
        sig: x.signature(),
    }
    .mul(x, y)
}

impl Superalgebra for Js11 {
    type Elem = SPoly;
    fn mul(&self, x: &SPoly, y: &SPoly) -> SPoly {
        let mut out = x * &self.d(y);
        if self.convention == Js11Convention::Corrected {
            for (pa, xa) in x.homogeneous_parts() {
                out = &out + &signed_poly(!pa.is_odd(), &self.d(&xa) * y);
            }
            return out;
        }
        let dx = self.d(x);
        for (pb, yb) in y.homogeneous_parts() {
            let p = match self.convention {
                Js11Convention::OriginalParity => pb,
                _ => pb.flip(),
            };
            out = &out + &signed_poly(p.is_odd(), &dx * &yb);
        }
        out
    }
    fn parity(&self, x: &SPoly) -> Option<Parity> {
        if x.is_zero() {
            Some(Parity::Even)
        } else {
            x.parity().map(Parity::flip)
        }
    }
    fn add(&self, x: &SPoly, y: &SPoly) -> SPoly {
        x + y
    }
    fn scale(&self, c: &FieldElem, x: &SPoly) -> SPoly {
        x.scale(c)
    }
    fn is_zero(&self, x: &SPoly) -> bool {
        x.is_zero()
    }
}

/// A finite-dimensional superalgebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteAlgebra {
    pub name: String,
    pub names: Vec<String>,
    pub parities: Vec<Parity>,
    /// `table[i][j]` lists `(k, c)` with `e_i e_j = Σ c e_k`.
    pub table: Vec<Vec<Vec<(usize, FieldElem)>>>,
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        names: Vec<String>,
        parities: Vec<Parity>,
        table: Vec<Vec<Vec<(usize, FieldElem)>>>,
    ) -> Result<Self> {
        let dim = parities.len();
        if names.len() != dim || table.len() != dim || table.iter().any(|r| r.len() != dim) {
            return Err(AlgebraError::InconsistentParity(
                "table shape does not match the basis".into(),
            ));
        }
        for i in 0..dim {
            for j in 0..dim {
                for (k, c) in &table[i][j] {
                    if *k >= dim {
                        return Err(AlgebraError::InconsistentParity(format!(
                            "index {k} out of range"
                        )));
                    }
                    if !c.is_zero() && parities[*k] != parities[i] + parities[j] {
                        return Err(AlgebraError::InconsistentParity(format!(
                            "{}·{} has a component on {}",
                            names[i], names[j], names[*k]
                        )));
                    }
                }
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            names,
            parities,
            table,
        })
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn basis(&self) -> Vec<FVec> {
        (0..self.dim())
            .map(|i| FVec::basis(self.dim(), i))
            .collect()
    }

    pub fn basis_name(&self, i: usize) -> &str {
        &self.names[i]
    }
}

/// Dense coordinate vector of a [`FiniteAlgebra`] element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FVec(pub Vec<FieldElem>);

impl FVec {
    pub fn zero(dim: usize) -> Self {
        FVec(vec![FieldElem::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = FieldElem::one();
        v
    }
}

impl fmt::Display for FVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c}·e{}", i + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Superalgebra for FiniteAlgebra {
    type Elem = FVec;
    fn mul(&self, x: &FVec, y: &FVec) -> FVec {
        let mut out = FVec::zero(self.dim());
        for (i, xi) in x.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let c = xi * yj;
                for (k, s) in &self.table[i][j] {
                    out.0[*k] += &(&c * s);
                }
            }
        }
        out
    }
    fn parity(&self, x: &FVec) -> Option<Parity> {
        let mut ps =
            x.0.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, _)| self.parities[i]);
        match ps.next() {
            None => Some(Parity::Even),
            Some(p) => ps.all(|q| q == p).then_some(p),
        }
    }
    fn add(&self, x: &FVec, y: &FVec) -> FVec {
        FVec(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect())
    }
    fn scale(&self, c: &FieldElem, x: &FVec) -> FVec {
        FVec(x.0.iter().map(|a| a * c).collect())
    }
    fn is_zero(&self, x: &FVec) -> bool {
        x.0.iter().all(FieldElem::is_zero)
    }
}

type MapFn<E> = dyn Fn(&E) -> Result<E> + Send + Sync;

/// A parity-homogeneous linear map on an algebra's elements.
#[derive(Clone)]
pub struct LinearMap<E> {
    pub name: String,
    pub parity: Parity,
    action: Arc<MapFn<E>>,
}

impl<E> LinearMap<E> {
    pub fn new(
        name: impl Into<String>,
        parity: Parity,
        f: impl Fn(&E) -> Result<E> + Send + Sync + 'static,
    ) -> Self {
        LinearMap {
            name: name.into(),
            parity,
            action: Arc::new(f),
        }
    }

    pub fn apply(&self, x: &E) -> Result<E> {
        (self.action)(x)
    }
}

/// Builds a linear map from its values on a finite list of spanning
/// elements; applying it to an element outside their span is an error.
pub fn linear_map_on_basis<A>(
    alg: A,
    name: &str,
    parity: Parity,
    images: Vec<(A::Elem, A::Elem)>,
) -> LinearMap<A::Elem>
where
    A: Superalgebra + Send + 'static,
    A::Elem: CoordinateElem,
{
    let images = Arc::new(images);
    LinearMap::new(name, parity, move |x: &A::Elem| {
        let coeffs = x
            .coordinates_in(&images.iter().map(|(b, _)| b.clone()).collect::<Vec<_>>())
            .ok_or_else(|| AlgebraError::UndefinedMap(x.to_string()))?;
        let mut out: Option<A::Elem> = None;
        for (c, (_, img)) in coeffs.iter().zip(images.iter()) {
            let term = alg.scale(c, img);
            out = Some(match out {
                None => term,
                Some(acc) => alg.add(&acc, &term),
            });
        }
        out.ok_or_else(|| AlgebraError::UndefinedMap(x.to_string()))
    })
}

/// Elements that can be decomposed over a list of distinct basis monomials.
pub trait CoordinateElem: Sized {
    fn coordinates_in(&self, basis: &[Self]) -> Option<Vec<FieldElem>>;
}

impl CoordinateElem for KKMElem {
    /// Coordinates relative to a list of single-term elements.
    fn coordinates_in(&self, basis: &[Self]) -> Option<Vec<FieldElem>> {
        let mut coeffs = vec![FieldElem::zero(); basis.len()];
        let mut covered = 0usize;
        for (i, b) in basis.iter().enumerate() {
            let (part, other) = if b.b.is_zero() {
                (&b.a, &self.a)
            } else {
                (&b.b, &self.b)
            };
            let (m, c) = part.terms().next()?;
            let x = other.coeff(m);
            if !x.is_zero() {
                coeffs[i] = &x / c;
                covered += 1;
            }
        }
        (covered == self.a.len() + self.b.len()).then_some(coeffs)
    }
}

/// `δ(x∘y) − δ(x)∘y − (−1)^{|δ||x|} x∘δ(y)` over the given pairs.
pub fn is_derivation<A: Superalgebra + ?Sized>(
    delta: &LinearMap<A::Elem>,
    alg: &A,
    pairs: &[(A::Elem, A::Elem)],
    check_id: &str,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        format!("derivation:{}", delta.name),
        serde_json::json!({ "map": delta.name, "pairs": pairs.len() }),
    );
    for (x, y) in pairs {
        let r = derivation_residual(delta, alg, x, y)?;
        let rendered = (!alg.is_zero(&r)).then(|| r.to_string());
        report.push(Entry::from_residual(
            check_id,
            format!("({x}, {y})"),
            rendered,
        ));
    }
    report.finalize();
    Ok(report)
}

pub fn derivation_residual<A: Superalgebra + ?Sized>(
    delta: &LinearMap<A::Elem>,
    alg: &A,
    x: &A::Elem,
    y: &A::Elem,
) -> Result<A::Elem> {
    let px = homogeneous(alg, x)?;
    let lhs = delta.apply(&alg.mul(x, y))?;
    let r1 = alg.mul(&delta.apply(x)?, y);
    let r2 = alg.signed(koszul(delta.parity, px), alg.mul(x, &delta.apply(y)?));
    Ok(alg.sub(&alg.sub(&lhs, &r1), &r2))
}

/// `∂_θ(a + bθ) = (−1)^{|b|} b`.
pub fn d_theta() -> LinearMap<KKMElem> {
    LinearMap::new("∂_θ", Parity::Odd, |x: &KKMElem| {
        let mut out = SPoly::zero(x.signature());
        for (p, bp) in x.b.homogeneous_parts() {
            out = &out + &signed_poly(p.is_odd(), bp);
        }
        Ok(KKMElem::even_part(out))
    })
}

/// `x ↦ a·∂_θ(x)` for a homogeneous `a ∈ A`.
pub fn a_d_theta(a: SPoly) -> Result<LinearMap<KKMElem>> {
    let pa = a
        .parity_or_even()
        .ok_or_else(|| AlgebraError::NotHomogeneous(a.to_string()))?;
    let dt = d_theta();
    Ok(LinearMap::new(
        format!("({a})∂_θ"),
        pa.flip(),
        move |x: &KKMElem| {
            let y = dt.apply(x)?;
            Ok(KKMElem::even_part(&a * &y.a))
        },
    ))
}

/// `∂/∂t` extended to `K(A)` by `∂(aθ) = (∂a)θ`.
pub fn d_dt_kkm() -> LinearMap<KKMElem> {
    LinearMap::new("d/dt", Parity::Even, |x: &KKMElem| {
        Ok(KKMElem::new(x.a.partial(Var::T)?, x.b.partial(Var::T)?))
    })
}

/// `∂/∂t` on `Λ(1,n)`.
pub fn d_dt() -> LinearMap<SPoly> {
    LinearMap::new("d/dt", Parity::Even, |x: &SPoly| x.partial(Var::T))
}

/// Every homogeneous monomial of `K(Λ(1,n))` with `t`-degree in `t_range`.
pub fn kkm_monomials(sig: Signature, t_range: std::ops::RangeInclusive<i32>) -> Vec<KKMElem> {
    let mons = crate::superpoly::monomial_basis(sig, t_range);
    mons.iter()
        .cloned()
        .map(KKMElem::even_part)
        .chain(mons.iter().cloned().map(KKMElem::theta_part))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laurent0() -> (Signature, BracketKind) {
        let s = Signature::laurent(0);
        (s, BracketKind::contact(s).unwrap())
    }

    #[test]
    fn kkm_examples() {
        let (s, k) = laurent0();
        let t = SPoly::t_pow(s, 1, 0);
        let one = SPoly::one(s);
        let a = KKMElem::even_part(t.clone());
        let b = KKMElem::even_part(&t * &t);
        assert_eq!(
            kkm_mul(&a, &b, &k).unwrap(),
            KKMElem::even_part(&t * &(&t * &t))
        );
        let th = KKMElem::theta_part(one.clone());
        assert!(kkm_mul(&th, &th, &k).unwrap().is_zero());
        let tth = KKMElem::theta_part(t);
        assert_eq!(
            kkm_mul(&tth, &th, &k).unwrap(),
            KKMElem::even_part(SPoly::constant(s, FieldElem::int(-1)))
        );
    }

    #[test]
    fn kkm_parity() {
        let s = Signature::laurent(1);
        let xi = SPoly::xi_mask(s, 1);
        assert_eq!(
            KKMElem::theta_part(SPoly::one(s)).parity(),
            Some(Parity::Odd)
        );
        assert_eq!(KKMElem::theta_part(xi.clone()).parity(), Some(Parity::Even));
        assert_eq!(
            KKMElem::new(xi.clone(), SPoly::one(s)).parity(),
            Some(Parity::Odd)
        );
        assert_eq!(KKMElem::new(xi, SPoly::xi_mask(s, 1)).parity(), None);
    }

    #[test]
    fn js11_examples_in_original_parity() {
        let s = Signature::laurent(1);
        for k in -2..=3 {
            let x = js11_mul(
                &SPoly::t_pow(s, k, 1),
                &SPoly::one(s),
                Js11Convention::OriginalParity,
            );
            assert_eq!(x, SPoly::t_pow(s, k, 0));
        }
        assert!(js11_mul(
            &SPoly::one(s),
            &SPoly::one(s),
            Js11Convention::OriginalParity
        )
        .is_zero());
        let t = SPoly::t_pow(s, 1, 0);
        assert_eq!(
            js11_mul(&t, &t, Js11Convention::OriginalParity),
            SPoly::t_pow(s, 1, 1).scale(&FieldElem::int(2))
        );
    }

    #[test]
    fn js11_reversed_parity_is_supercommutative_on_t() {
        let alg = Js11::new(Js11Convention::ReversedParity);
        let t = SPoly::t_pow(alg.sig, 1, 0);
        assert!(comm_residual(&alg, &t, &t).unwrap().is_zero());
        let orig = Js11::new(Js11Convention::OriginalParity);
        assert!(!comm_residual(&orig, &t, &t).unwrap().is_zero());
    }

    #[test]
    fn js11_corrected_convention_is_jordan() {
        let alg = Js11::new(Js11Convention::Corrected);
        let s = alg.sig;
        for k in -2..=3 {
            assert_eq!(
                alg.mul(&SPoly::t_pow(s, k, 1), &SPoly::one(s)),
                SPoly::t_pow(s, k, 0)
            );
        }
        let t = SPoly::t_pow(s, 1, 0);
        assert!(alg.mul(&t, &t).is_zero());
        let basis: Vec<SPoly> = (-1..=1)
            .flat_map(|k| [SPoly::t_pow(s, k, 0), SPoly::t_pow(s, k, 1)])
            .collect();
        for a in &basis {
            for b in &basis {
                assert!(comm_residual(&alg, a, b).unwrap().is_zero());
                for c in &basis {
                    for d in &basis {
                        assert!(lin_jordan_residual(&alg, a, b, c, d).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn grassmann_is_jordan() {
        let g = Grassmann {
            sig: Signature::grassmann(2),
        };
        let basis: Vec<SPoly> = (0..4).map(|m| SPoly::xi_mask(g.sig, m)).collect();
        for a in &basis {
            for b in &basis {
                assert!(comm_residual(&g, a, b).unwrap().is_zero());
                for c in &basis {
                    for d in &basis {
                        assert!(lin_jordan_residual(&g, a, b, c, d).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn non_homogeneous_input_rejected() {
        let g = Grassmann {
            sig: Signature::grassmann(1),
        };
        let mixed = &SPoly::one(g.sig) + &SPoly::xi_mask(g.sig, 1);
        assert!(matches!(
            comm_residual(&g, &mixed, &mixed),
            Err(AlgebraError::NotHomogeneous(_))
        ));
    }

    #[test]
    fn non_symmetric_product_detected() {
        let p = CustomProduct::new("left-only", |x: &SPoly, y: &SPoly| {
            &x.partial(Var::Xi(1)).unwrap() * y
        });
        let s = Signature::grassmann(2);
        let (x1, x2) = (SPoly::xi_mask(s, 1), SPoly::xi_mask(s, 2));
        assert!(!comm_residual(&p, &x1, &x2).unwrap().is_zero());
    }

    #[test]
    fn finite_table_rejects_bad_parity() {
        let t = vec![vec![vec![(1usize, FieldElem::one())]; 2]; 2];
        let r = FiniteAlgebra::new(
            "bad",
            vec!["e".into(), "o".into()],
            vec![Parity::Even, Parity::Odd],
            t,
        );
        assert!(matches!(r, Err(AlgebraError::InconsistentParity(_))));
    }

    #[test]
    fn map_on_basis_rejects_uncovered_elements() {
        let (s, k) = laurent0();
        let alg = KkmDouble { kind: k };
        let one = KKMElem::even_part(SPoly::one(s));
        let m = linear_map_on_basis(alg, "id1", Parity::Even, vec![(one.clone(), one.clone())]);
        assert_eq!(
            m.apply(&one.scale(&FieldElem::int(3))).unwrap(),
            one.scale(&FieldElem::int(3))
        );
        assert!(m.apply(&KKMElem::even_part(SPoly::t_pow(s, 1, 0))).is_err());
    }
}
