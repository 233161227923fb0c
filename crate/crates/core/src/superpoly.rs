//! Super-polynomials: elements of `Λ(n) ⊗ F[p, q, t]` with Koszul signs.
//!
//! Odd variables are ordered `ξ₁ < … < ξ_n`; a monomial stores its odd part
//! as a bitmask meaning the ordered product `ξ_{i₁}⋯ξ_{i_r}`, `i₁ < … < i_r`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::scalar::FieldElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(bits: u32) -> Self {
        if bits % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        self + Parity::Odd
    }

    pub fn bit(self) -> u32 {
        self as u32
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, o: Parity) -> Parity {
        Parity::of(self.bit() + o.bit())
    }
}

/// `(−1)^{|a||b|}` is negative.
pub fn koszul(a: Parity, b: Parity) -> bool {
    a.is_odd() && b.is_odd()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EvenKind {
    /// A single Laurent variable `t` with exponents in `Z`.
    LaurentSingle,
    /// Variables `p₁..p_k, q₁..q_k[, t]` with exponents in `N`.
    Polynomial,
}

/// Shape of the symmetric form used by the odd part of the brackets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OddPairing {
    /// Diagonal on `ξ₁..ξ_{n−2}`, hyperbolic on `ξ_{n−1}, ξ_n`.
    Hyperbolic,
    /// Diagonal on all odd variables.
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pairs: usize,
    has_t: bool,
    odd: usize,
    even_kind: EvenKind,
    pairing: OddPairing,
}

fn default_pairing(n: usize) -> OddPairing {
    if n >= 2 {
        OddPairing::Hyperbolic
    } else {
        OddPairing::Diagonal
    }
}

impl Signature {
    /// `Λ(n)`: no even variables.
    pub fn grassmann(n: usize) -> Self {
        Signature {
            pairs: 0,
            has_t: false,
            odd: n,
            even_kind: EvenKind::Polynomial,
            pairing: default_pairing(n),
        }
    }

    /// `Λ(1, n)` with `t` Laurent.
    pub fn laurent(n: usize) -> Self {
        Signature {
            pairs: 0,
            has_t: true,
            odd: n,
            even_kind: EvenKind::LaurentSingle,
            pairing: default_pairing(n),
        }
    }

    /// `Λ(m, n)` with polynomial even variables: `m = 2k` gives `p, q`;
    /// `m = 2k + 1` adds `t`.
    pub fn polynomial(m: usize, n: usize) -> Self {
        Signature {
            pairs: m / 2,
            has_t: m % 2 == 1,
            odd: n,
            even_kind: EvenKind::Polynomial,
            pairing: default_pairing(n),
        }
    }

    pub fn with_pairing(mut self, pairing: OddPairing) -> Self {
        self.pairing = pairing;
        self
    }

    pub fn m(&self) -> usize {
        2 * self.pairs + self.has_t as usize
    }

    pub fn n(&self) -> usize {
        self.odd
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn has_t(&self) -> bool {
        self.has_t
    }

    pub fn even_kind(&self) -> EvenKind {
        self.even_kind
    }

    pub fn pairing(&self) -> OddPairing {
        self.pairing
    }

    fn even_len(&self) -> usize {
        2 * self.pairs + self.has_t as usize
    }

    fn even_index(&self, v: Var) -> Option<usize> {
        match v {
            Var::P(i) if (1..=self.pairs).contains(&i) => Some(i - 1),
            Var::Q(i) if (1..=self.pairs).contains(&i) => Some(self.pairs + i - 1),
            Var::T if self.has_t => Some(2 * self.pairs),
            _ => None,
        }
    }

    /// Coefficients `g^{ij}` of `Σ g^{ij} ∂f/∂ξ_i ∂g/∂ξ_j` (1-based indices).
    pub fn odd_form(&self) -> Vec<(usize, usize)> {
        let n = self.odd;
        match self.pairing {
            OddPairing::Hyperbolic if n >= 2 => {
                let mut v: Vec<_> = (1..=n - 2).map(|i| (i, i)).collect();
                v.push((n - 1, n));
                v.push((n, n - 1));
                v
            }
            _ => (1..=n).map(|i| (i, i)).collect(),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.even_kind {
            EvenKind::LaurentSingle => "laurent",
            EvenKind::Polynomial => "poly",
        };
        let pairing = match self.pairing {
            OddPairing::Hyperbolic => "hyp",
            OddPairing::Diagonal => "diag",
        };
        write!(f, "Λ({},{})[{kind},{pairing}]", self.m(), self.odd)
    }
}

/// A generator of the super-commutative coordinate ring (1-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    P(usize),
    Q(usize),
    T,
    Xi(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::P(i) => write!(f, "p{i}"),
            Var::Q(i) => write!(f, "q{i}"),
            Var::T => write!(f, "t"),
            Var::Xi(i) => write!(f, "ξ{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    /// Odd mask first so that terms sort by their Grassmann part.
    pub odd: u32,
    pub even: Vec<i32>,
}

impl Monomial {
    pub fn parity(&self) -> Parity {
        Parity::of(self.odd.count_ones())
    }
}

/// Sign of `ξ_A · ξ_B` in the canonical order, or `None` when `A ∩ B ≠ ∅`.
pub fn mask_product_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(inversions % 2 == 1)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SPoly {
    sig: Signature,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl SPoly {
    pub fn zero(sig: Signature) -> Self {
        SPoly {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(sig: Signature, c: FieldElem) -> Self {
        Self::term(sig, vec![0; sig.even_len()], 0, c)
    }

    pub fn one(sig: Signature) -> Self {
        Self::constant(sig, FieldElem::one())
    }

    /// A single term `c · (even monomial) · ξ_mask`; the mask uses bit `i−1` for `ξ_i`.
    pub fn term(sig: Signature, even: Vec<i32>, odd: u32, c: FieldElem) -> Self {
        assert_eq!(
            even.len(),
            sig.even_len(),
            "even exponent vector has wrong length"
        );
        let mut p = Self::zero(sig);
        p.add_term(Monomial { odd, even }, c);
        p
    }

    pub fn var(sig: Signature, v: Var) -> Result<Self> {
        match v {
            Var::Xi(i) if (1..=sig.odd).contains(&i) => Ok(Self::term(
                sig,
                vec![0; sig.even_len()],
                1 << (i - 1),
                FieldElem::one(),
            )),
            _ => {
                let idx = sig
                    .even_index(v)
                    .ok_or_else(|| AlgebraError::UnknownVariable(v.to_string(), sig.to_string()))?;
                let mut e = vec![0; sig.even_len()];
                e[idx] = 1;
                Ok(Self::term(sig, e, 0, FieldElem::one()))
            }
        }
    }

    /// The ordered product of the odd generators in `mask`.
    pub fn xi_mask(sig: Signature, mask: u32) -> Self {
        Self::term(sig, vec![0; sig.even_len()], mask, FieldElem::one())
    }

    /// `t^k · ξ_mask`; panics if the signature has no `t`.
    pub fn t_pow(sig: Signature, k: i32, mask: u32) -> Self {
        let idx = sig.even_index(Var::T).expect("signature has no t");
        let mut e = vec![0; sig.even_len()];
        e[idx] = k;
        Self::term(sig, e, mask, FieldElem::one())
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        if self.sig.even_kind == EvenKind::Polynomial {
            assert!(
                m.even.iter().all(|&e| e >= 0),
                "negative exponent in polynomial signature"
            );
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_sig(&self, other: &SPoly) -> Result<()> {
        if self.sig != other.sig {
            return Err(AlgebraError::SignatureMismatch(
                self.sig.to_string(),
                other.sig.to_string(),
            ));
        }
        Ok(())
    }

    /// `None` for zero and for mixed-parity elements.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Parity treating zero as even.
    pub fn parity_or_even(&self) -> Option<Parity> {
        if self.is_zero() {
            Some(Parity::Even)
        } else {
            self.parity()
        }
    }

    pub fn parity_part(&self, p: Parity) -> SPoly {
        SPoly {
            sig: self.sig,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.parity() == p)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous components.
    pub fn homogeneous_parts(&self) -> Vec<(Parity, SPoly)> {
        [Parity::Even, Parity::Odd]
            .into_iter()
            .map(|p| (p, self.parity_part(p)))
            .filter(|(_, f)| !f.is_zero())
            .collect()
    }

    pub fn scale(&self, c: &FieldElem) -> SPoly {
        if c.is_zero() {
            return SPoly::zero(self.sig);
        }
        SPoly {
            sig: self.sig,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &SPoly) -> Result<SPoly> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Super-commutative product.
    pub fn smul(&self, other: &SPoly) -> Result<SPoly> {
        self.check_sig(other)?;
        let mut out = SPoly::zero(self.sig);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let Some(neg) = mask_product_sign(ma.odd, mb.odd) else {
                    continue;
                };
                let even = ma.even.iter().zip(&mb.even).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                out.add_term(
                    Monomial {
                        odd: ma.odd | mb.odd,
                        even,
                    },
                    if neg { -c } else { c },
                );
            }
        }
        Ok(out)
    }

    /// Left partial derivative.
    pub fn partial(&self, v: Var) -> Result<SPoly> {
        let mut out = SPoly::zero(self.sig);
        match v {
            Var::Xi(i) if (1..=self.sig.odd).contains(&i) => {
                let bit = 1u32 << (i - 1);
                for (m, c) in &self.terms {
                    if m.odd & bit == 0 {
                        continue;
                    }
                    let before = (m.odd & (bit - 1)).count_ones();
                    let c = if before % 2 == 1 { -c } else { c.clone() };
                    out.add_term(
                        Monomial {
                            odd: m.odd & !bit,
                            even: m.even.clone(),
                        },
                        c,
                    );
                }
            }
            _ => {
                let idx = self.sig.even_index(v).ok_or_else(|| {
                    AlgebraError::UnknownVariable(v.to_string(), self.sig.to_string())
                })?;
                for (m, c) in &self.terms {
                    let k = m.even[idx];
                    if k == 0 {
                        continue;
                    }
                    let mut even = m.even.clone();
                    even[idx] -= 1;
                    out.add_term(Monomial { odd: m.odd, even }, c * &FieldElem::int(k as i64));
                }
            }
        }
        Ok(out)
    }

    /// Euler operator: multiplies a monomial by its degree in `p, q, ξ` (not `t`).
    pub fn euler(&self) -> SPoly {
        let mut out = SPoly::zero(self.sig);
        let pq = 2 * self.sig.pairs;
        for (m, c) in &self.terms {
            let deg: i64 =
                m.even[..pq].iter().map(|&e| e as i64).sum::<i64>() + m.odd.count_ones() as i64;
            out.add_term(m.clone(), c * &FieldElem::int(deg));
        }
        out
    }

    /// Multiplies each monomial by `f(monomial)`.
    pub fn map_coeffs(&self, f: impl Fn(&Monomial) -> FieldElem) -> SPoly {
        let mut out = SPoly::zero(self.sig);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * &f(m));
        }
        out
    }

    /// Reinterprets the same terms over a different signature with identical variable layout.
    pub fn with_signature(&self, sig: Signature) -> SPoly {
        assert_eq!(sig.even_len(), self.sig.even_len());
        assert!(sig.odd >= self.sig.odd);
        SPoly {
            sig,
            terms: self.terms.clone(),
        }
    }

    /// Maximal total degree in `t` (for signatures with `t`).
    pub fn t_degree(&self) -> Option<i32> {
        let idx = self.sig.even_index(Var::T)?;
        self.terms.keys().map(|m| m.even[idx]).max()
    }
}

impl fmt::Display for SPoly {
    /// Sorted terms with explicit signs, e.g. `2·t^2ξ1 - ξ1ξ2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let k = self.sig.pairs;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mut mono = String::new();
            for (j, &e) in m.even.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if j < k {
                    format!("p{}", j + 1)
                } else if j < 2 * k {
                    format!("q{}", j - k + 1)
                } else {
                    "t".to_string()
                };
                if e == 1 {
                    mono.push_str(&name);
                } else {
                    mono.push_str(&format!("{name}^{e}"));
                }
            }
            for b in 0..32 {
                if m.odd & (1 << b) != 0 {
                    mono.push_str(&format!("ξ{}", b + 1));
                }
            }
            let (neg, mag) = if c.is_rational() && c.re() < &num_traits::Zero::zero() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{mag}·{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a SPoly> for &'a SPoly {
    type Output = SPoly;
    fn add(self, o: &SPoly) -> SPoly {
        self.try_add(o)
            .expect("signature mismatch in SPoly addition")
    }
}

impl<'a> Sub<&'a SPoly> for &'a SPoly {
    type Output = SPoly;
    fn sub(self, o: &SPoly) -> SPoly {
        self.try_add(&-o)
            .expect("signature mismatch in SPoly subtraction")
    }
}

impl<'a> Mul<&'a SPoly> for &'a SPoly {
    type Output = SPoly;
    fn mul(self, o: &SPoly) -> SPoly {
        self.smul(o).expect("signature mismatch in SPoly product")
    }
}

impl Neg for &SPoly {
    type Output = SPoly;
    fn neg(self) -> SPoly {
        self.scale(&FieldElem::int(-1))
    }
}

impl Add for SPoly {
    type Output = SPoly;
    fn add(self, o: SPoly) -> SPoly {
        &self + &o
    }
}

impl Sub for SPoly {
    type Output = SPoly;
    fn sub(self, o: SPoly) -> SPoly {
        &self - &o
    }
}

/// Every monomial `t^j ξ_mask` (or `ξ_mask` without `t`) with `j` in `t_range`.
pub fn monomial_basis(sig: Signature, t_range: std::ops::RangeInclusive<i32>) -> Vec<SPoly> {
    let masks = 0..(1u32 << sig.n());
    if sig.has_t() {
        assert_eq!(sig.pairs(), 0, "monomial_basis supports only m ≤ 1");
        t_range
            .flat_map(|j| masks.clone().map(move |mask| SPoly::t_pow(sig, j, mask)))
            .collect()
    } else {
        assert_eq!(sig.pairs(), 0, "monomial_basis supports only m ≤ 1");
        masks.map(|mask| SPoly::xi_mask(sig, mask)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(sig: Signature, i: usize) -> SPoly {
        SPoly::var(sig, Var::Xi(i)).unwrap()
    }

    #[test]
    fn odd_products_carry_koszul_sign() {
        let s = Signature::grassmann(2);
        assert_eq!(&xi(s, 1) * &xi(s, 2), SPoly::xi_mask(s, 0b11));
        assert_eq!(&xi(s, 2) * &xi(s, 1), -&SPoly::xi_mask(s, 0b11));
        assert!((&xi(s, 1) * &xi(s, 1)).is_zero());
    }

    #[test]
    fn laurent_exponents_add() {
        let s = Signature::laurent(0);
        assert_eq!(
            &SPoly::t_pow(s, 2, 0) * &SPoly::t_pow(s, -3, 0),
            SPoly::t_pow(s, -1, 0)
        );
    }

    #[test]
    fn left_partials() {
        let s = Signature::grassmann(2);
        let x12 = SPoly::xi_mask(s, 0b11);
        assert_eq!(x12.partial(Var::Xi(1)).unwrap(), xi(s, 2));
        assert_eq!(x12.partial(Var::Xi(2)).unwrap(), -&xi(s, 1));
        let l = Signature::laurent(0);
        assert_eq!(
            SPoly::t_pow(l, -1, 0).partial(Var::T).unwrap(),
            SPoly::t_pow(l, -2, 0).scale(&FieldElem::int(-1))
        );
        assert!(x12.partial(Var::T).is_err());
        assert!(x12.partial(Var::Xi(3)).is_err());
    }

    #[test]
    fn euler_counts_pq_and_xi_only() {
        let s = Signature::polynomial(2, 1);
        let p = SPoly::var(s, Var::P(1)).unwrap();
        let q = SPoly::var(s, Var::Q(1)).unwrap();
        let pq = &p * &q;
        assert_eq!(pq.euler(), pq.scale(&FieldElem::int(2)));
        let x = xi(s, 1);
        assert_eq!(x.euler(), x);
        let l = Signature::laurent(0);
        assert!(SPoly::t_pow(l, 3, 0).euler().is_zero());
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = SPoly::one(Signature::grassmann(1));
        let b = SPoly::one(Signature::grassmann(2));
        assert!(matches!(
            a.smul(&b),
            Err(AlgebraError::SignatureMismatch(..))
        ));
    }

    #[test]
    fn rendering_is_canonical() {
        let s = Signature::laurent(2);
        let f = &SPoly::t_pow(s, 2, 0b01).scale(&FieldElem::int(2)) - &SPoly::xi_mask(s, 0b11);
        assert_eq!(f.to_string(), "2·t^2ξ1 - ξ1ξ2");
        assert_eq!(SPoly::zero(s).to_string(), "0");
    }

    #[test]
    fn odd_form_shapes() {
        assert_eq!(Signature::grassmann(1).odd_form(), vec![(1, 1)]);
        assert_eq!(Signature::grassmann(2).odd_form(), vec![(1, 2), (2, 1)]);
        assert_eq!(
            Signature::grassmann(3).odd_form(),
            vec![(1, 1), (2, 3), (3, 2)]
        );
        assert_eq!(
            Signature::grassmann(3)
                .with_pairing(OddPairing::Diagonal)
                .odd_form(),
            vec![(1, 1), (2, 2), (3, 3)]
        );
    }
}
