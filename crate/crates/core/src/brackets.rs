//! Poisson and generalized Poisson brackets on `Λ(m, n)`, the derivation
//! `D = {·, 1}`, the Jordan bracket `{a, b}_D`, and axiom residuals.

use serde::Serialize;

use crate::error::{AlgebraError, Result};
use crate::scalar::FieldElem;
use crate::superpoly::{koszul, Parity, SPoly, Signature, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BracketTag {
    /// `m` even: the Poisson bracket.
    Poisson,
    /// `m` odd: the generalized Poisson (contact) bracket.
    Contact,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketKind {
    pub tag: BracketTag,
    pub sig: Signature,
    /// Overall factor on the bracket; `1` for the standard brackets.
    pub scale: FieldElem,
}

impl BracketKind {
    pub fn poisson(sig: Signature) -> Result<Self> {
        if !sig.m().is_multiple_of(2) {
            return Err(AlgebraError::WrongSignature {
                expected: "m even",
                got: sig.to_string(),
            });
        }
        Ok(BracketKind {
            tag: BracketTag::Poisson,
            sig,
            scale: FieldElem::one(),
        })
    }

    pub fn contact(sig: Signature) -> Result<Self> {
        if sig.m() % 2 != 1 || !sig.has_t() {
            return Err(AlgebraError::WrongSignature {
                expected: "m odd with t",
                got: sig.to_string(),
            });
        }
        Ok(BracketKind {
            tag: BracketTag::Contact,
            sig,
            scale: FieldElem::one(),
        })
    }

    /// Picks the bracket by the parity of `m`.
    pub fn for_signature(sig: Signature) -> Self {
        if sig.m().is_multiple_of(2) {
            Self::poisson(sig).unwrap()
        } else {
            Self::contact(sig).unwrap()
        }
    }

    pub fn scaled(mut self, c: FieldElem) -> Self {
        self.scale = c;
        self
    }

    fn check(&self, f: &SPoly) -> Result<()> {
        if f.signature() != self.sig {
            return Err(AlgebraError::SignatureMismatch(
                f.signature().to_string(),
                self.sig.to_string(),
            ));
        }
        Ok(())
    }

    pub fn bracket(&self, f: &SPoly, g: &SPoly) -> Result<SPoly> {
        self.check(f)?;
        self.check(g)?;
        let mut out = SPoly::zero(self.sig);
        for (pf, fh) in f.homogeneous_parts() {
            out = &out + &self.bracket_homogeneous(pf, &fh, g)?;
        }
        Ok(out.scale(&self.scale))
    }

    fn bracket_homogeneous(&self, pf: Parity, f: &SPoly, g: &SPoly) -> Result<SPoly> {
        let mut out = SPoly::zero(self.sig);
        if self.tag == BracketTag::Contact {
            let two_minus_e = |h: &SPoly| &h.scale(&FieldElem::int(2)) - &h.euler();
            out = &out + &(&two_minus_e(f) * &g.partial(Var::T)?);
            out = &out - &(&f.partial(Var::T)? * &two_minus_e(g));
        }
        for i in 1..=self.sig.pairs() {
            out = &out + &(&f.partial(Var::P(i))? * &g.partial(Var::Q(i))?);
            out = &out - &(&f.partial(Var::Q(i))? * &g.partial(Var::P(i))?);
        }
        let mut odd = SPoly::zero(self.sig);
        for (i, j) in self.sig.odd_form() {
            odd = &odd + &(&f.partial(Var::Xi(i))? * &g.partial(Var::Xi(j))?);
        }
        if pf.is_odd() {
            odd = -&odd;
        }
        Ok(&out + &odd)
    }

    /// `D(f) = {f, 1}`.
    pub fn derivation(&self, f: &SPoly) -> Result<SPoly> {
        self.bracket(f, &SPoly::one(self.sig))
    }

    /// `{a, b}_D = {a, b} + ½(a D(b) − D(a) b)`.
    pub fn jordan_bracket(&self, a: &SPoly, b: &SPoly) -> Result<SPoly> {
        let half = FieldElem::frac(1, 2);
        let corr = &(a * &self.derivation(b)?) - &(&self.derivation(a)? * b);
        Ok(&self.bracket(a, b)? + &corr.scale(&half))
    }
}

/// `{f, g}` for `m` even.
pub fn pbracket(f: &SPoly, g: &SPoly) -> Result<SPoly> {
    BracketKind::poisson(f.signature())?.bracket(f, g)
}

/// `{f, g}` for `m` odd.
pub fn kbracket(f: &SPoly, g: &SPoly) -> Result<SPoly> {
    BracketKind::contact(f.signature())?.bracket(f, g)
}

pub fn bracket_derivation(f: &SPoly, kind: &BracketKind) -> Result<SPoly> {
    kind.derivation(f)
}

pub fn jordan_bracket_d(f: &SPoly, g: &SPoly, kind: &BracketKind) -> Result<SPoly> {
    kind.jordan_bracket(f, g)
}

fn homogeneous(f: &SPoly) -> Result<Parity> {
    f.parity_or_even()
        .ok_or_else(|| AlgebraError::NotHomogeneous(f.to_string()))
}

fn signed(neg: bool, f: SPoly) -> SPoly {
    if neg {
        -&f
    } else {
        f
    }
}

/// Residuals of the Jordan bracket axioms for a bracket and an even derivation `d`:
///
/// ```text
/// (i)   {a,b} + (−1)^{|a||b|}{b,a}
/// (ii)  {a,bc} − {a,b}c − (−1)^{|a||b|}b{a,c} + D(a)bc
/// (iii) {{a,b},c} + (−1)^{|a||b|+|a||c|}{{b,c},a} + (−1)^{|a||c|+|b||c|}{{c,a},b}
///       + {a,b}D(c) + (−1)^{|a||b|+|a||c|}{b,c}D(a) + (−1)^{|a||c|+|b||c|}{c,a}D(b)
/// ```
///
/// The three `D`-terms of (iii) enter with one common sign, matching the
/// cyclic symmetry of the left-hand side.
pub fn jordan_bracket_axiom_residuals(
    a: &SPoly,
    b: &SPoly,
    c: &SPoly,
    bracket: &dyn Fn(&SPoly, &SPoly) -> Result<SPoly>,
    d: &dyn Fn(&SPoly) -> Result<SPoly>,
) -> Result<(SPoly, SPoly, SPoly)> {
    let (pa, pb, pc) = (homogeneous(a)?, homogeneous(b)?, homogeneous(c)?);
    let i = &bracket(a, b)? + &signed(koszul(pa, pb), bracket(b, a)?);

    let ii = {
        let lhs = bracket(a, &(b * c))?;
        let rhs = &(&(&bracket(a, b)? * c) + &signed(koszul(pa, pb), b * &bracket(a, c)?))
            - &(&d(a)? * &(b * c));
        &lhs - &rhs
    };

    let iii = {
        let s_bca = koszul(pa, pb) ^ koszul(pa, pc);
        let s_cab = koszul(pa, pc) ^ koszul(pb, pc);
        let (ab, bc, ca) = (bracket(a, b)?, bracket(b, c)?, bracket(c, a)?);
        let lhs = &(&bracket(&ab, c)? + &signed(s_bca, bracket(&bc, a)?))
            + &signed(s_cab, bracket(&ca, b)?);
        let dterms =
            &(&(&ab * &d(c)?) + &signed(s_bca, &bc * &d(a)?)) + &signed(s_cab, &ca * &d(b)?);
        &lhs + &dterms
    };
    Ok((i, ii, iii))
}

/// `{a,b} + (−1)^{|a||b|}{b,a}`.
pub fn antisymmetry_residual(kind: &BracketKind, a: &SPoly, b: &SPoly) -> Result<SPoly> {
    let (pa, pb) = (homogeneous(a)?, homogeneous(b)?);
    Ok(&kind.bracket(a, b)? + &signed(koszul(pa, pb), kind.bracket(b, a)?))
}

/// `{a,bc} − {a,b}c − (−1)^{|a||b|} b{a,c} + D(a)bc` with `D = {·,1}`.
pub fn leibniz_residual(kind: &BracketKind, a: &SPoly, b: &SPoly, c: &SPoly) -> Result<SPoly> {
    let (pa, pb) = (homogeneous(a)?, homogeneous(b)?);
    let lhs = kind.bracket(a, &(b * c))?;
    let rhs = &(&(&kind.bracket(a, b)? * c) + &signed(koszul(pa, pb), b * &kind.bracket(a, c)?))
        - &(&kind.derivation(a)? * &(b * c));
    Ok(&lhs - &rhs)
}

/// `{a,{b,c}} − {{a,b},c} − (−1)^{|a||b|}{b,{a,c}}`.
pub fn jacobi_residual(kind: &BracketKind, a: &SPoly, b: &SPoly, c: &SPoly) -> Result<SPoly> {
    let (pa, pb) = (homogeneous(a)?, homogeneous(b)?);
    let lhs = kind.bracket(a, &kind.bracket(b, c)?)?;
    let rhs = &kind.bracket(&kind.bracket(a, b)?, c)?
        + &signed(koszul(pa, pb), kind.bracket(b, &kind.bracket(a, c)?)?);
    Ok(&lhs - &rhs)
}

/// `D(bc) − D(b)c − bD(c)` for `D = {·,1}`.
pub fn bracket_derivation_residual(kind: &BracketKind, b: &SPoly, c: &SPoly) -> Result<SPoly> {
    let lhs = kind.derivation(&(b * c))?;
    Ok(&(&lhs - &(&kind.derivation(b)? * c)) - &(b * &kind.derivation(c)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(sig: Signature, x: Var) -> SPoly {
        SPoly::var(sig, x).unwrap()
    }

    #[test]
    fn poisson_examples() {
        let s = Signature::polynomial(2, 0);
        assert_eq!(
            pbracket(&v(s, Var::P(1)), &v(s, Var::Q(1))).unwrap(),
            SPoly::one(s)
        );
        let g = Signature::grassmann(2);
        assert_eq!(
            pbracket(&v(g, Var::Xi(1)), &v(g, Var::Xi(2))).unwrap(),
            SPoly::constant(g, FieldElem::int(-1))
        );
        let f = SPoly::xi_mask(g, 0b11);
        assert!(pbracket(&SPoly::one(g), &f).unwrap().is_zero());
    }

    #[test]
    fn contact_examples() {
        let s = Signature::laurent(0);
        let t = SPoly::t_pow(s, 1, 0);
        let one = SPoly::one(s);
        assert_eq!(
            kbracket(&one, &t).unwrap(),
            SPoly::constant(s, FieldElem::int(2))
        );
        assert_eq!(
            kbracket(&t, &one).unwrap(),
            SPoly::constant(s, FieldElem::int(-2))
        );
        let s2 = Signature::laurent(2);
        assert_eq!(
            kbracket(&v(s2, Var::Xi(1)), &v(s2, Var::Xi(2))).unwrap(),
            SPoly::constant(s2, FieldElem::int(-1))
        );
    }

    #[test]
    fn derivation_examples() {
        let s = Signature::laurent(0);
        let k = BracketKind::contact(s).unwrap();
        assert_eq!(
            k.derivation(&SPoly::t_pow(s, 1, 0)).unwrap(),
            SPoly::constant(s, FieldElem::int(-2))
        );
        assert_eq!(
            k.derivation(&SPoly::t_pow(s, 2, 0)).unwrap(),
            SPoly::t_pow(s, 1, 0).scale(&FieldElem::int(-4))
        );
        let p = BracketKind::poisson(Signature::polynomial(2, 1)).unwrap();
        let f = &v(p.sig, Var::P(1)) * &v(p.sig, Var::Xi(1));
        assert!(p.derivation(&f).unwrap().is_zero());
    }

    #[test]
    fn jordan_bracket_examples() {
        let s = Signature::laurent(0);
        let k = BracketKind::contact(s).unwrap();
        let one = SPoly::one(s);
        assert_eq!(
            k.jordan_bracket(&SPoly::t_pow(s, 1, 0), &one).unwrap(),
            SPoly::constant(s, FieldElem::int(-1))
        );
        assert!(k.jordan_bracket(&one, &one).unwrap().is_zero());
        let p = BracketKind::poisson(Signature::polynomial(2, 1)).unwrap();
        let (a, b) = (
            v(p.sig, Var::P(1)),
            &v(p.sig, Var::Q(1)) * &v(p.sig, Var::Xi(1)),
        );
        assert_eq!(
            p.jordan_bracket(&a, &b).unwrap(),
            p.bracket(&a, &b).unwrap()
        );
    }

    #[test]
    fn wrong_parity_rejected() {
        assert!(BracketKind::poisson(Signature::laurent(1)).is_err());
        assert!(BracketKind::contact(Signature::grassmann(2)).is_err());
        assert!(kbracket(
            &SPoly::one(Signature::grassmann(1)),
            &SPoly::one(Signature::grassmann(1))
        )
        .is_err());
    }

    #[test]
    fn poisson_axioms_on_pq() {
        let p = BracketKind::poisson(Signature::polynomial(2, 0)).unwrap();
        let (a, b) = (v(p.sig, Var::P(1)), v(p.sig, Var::Q(1)));
        let c = &a * &b;
        let br = |x: &SPoly, y: &SPoly| p.bracket(x, y);
        let zero = |x: &SPoly| Ok(SPoly::zero(x.signature()));
        let (i, ii, iii) = jordan_bracket_axiom_residuals(&a, &b, &c, &br, &zero).unwrap();
        assert!(i.is_zero() && ii.is_zero() && iii.is_zero());
    }

    #[test]
    fn symmetric_defect_breaks_antisymmetry() {
        let s = Signature::laurent(1);
        let k = BracketKind::contact(s).unwrap();
        let br = |x: &SPoly, y: &SPoly| Ok(&k.bracket(x, y)? + &(x * y));
        let d = |x: &SPoly| k.derivation(x);
        let t = SPoly::t_pow(s, 1, 0);
        let (i, _, _) = jordan_bracket_axiom_residuals(&t, &t, &t, &br, &d).unwrap();
        assert!(!i.is_zero());
    }
}
