//! λ-calculus for conformal superalgebras that are free of finite rank over `F[∂]`.
//!
//! Every value is a [`FormalPoly`]: a polynomial in a handful of even formal
//! variables (`λ, μ, ν` and fresh ones) and in `∂`, with coefficients in the
//! basis of the algebra. Since the formal variables and `∂` commute, all
//! computations reduce to commutative polynomial arithmetic; `∂` always acts
//! on the module coefficient it multiplies.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::scalar::{binomial, factorial, FieldElem};
use crate::superpoly::{koszul, Parity};

/// Number of formal variable slots.
pub const NVARS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FVar(pub u8);

impl FVar {
    pub const LAMBDA: FVar = FVar(0);
    pub const MU: FVar = FVar(1);
    pub const NU: FVar = FVar(2);

    pub fn name(self) -> String {
        match self.0 {
            0 => "λ".into(),
            1 => "μ".into(),
            2 => "ν".into(),
            i => format!("κ{}", i - 2),
        }
    }
}

impl fmt::Display for FVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// One monomial `vars · ∂^d · e_basis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub basis: u32,
    pub d: u8,
    pub exps: [u8; NVARS],
}

/// An `F`-linear combination of `Σ c · λ^i μ^j ⋯ ∂^d e_k`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FormalPoly {
    terms: BTreeMap<Key, FieldElem>,
}

/// An element of the module itself: a `FormalPoly` free of formal variables.
pub type CElem = FormalPoly;

/// A linear form `Σ c_v v + c_∂ ∂` used as a substitution target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linear {
    pub terms: Vec<(Option<FVar>, FieldElem)>,
}

impl Linear {
    /// Integer-coefficient form; `None` stands for `∂`.
    pub fn new(terms: &[(Option<FVar>, i64)]) -> Self {
        Linear {
            terms: terms
                .iter()
                .map(|(v, c)| (*v, FieldElem::int(*c)))
                .collect(),
        }
    }

    pub fn var(v: FVar) -> Self {
        Self::new(&[(Some(v), 1)])
    }

    pub fn zero() -> Self {
        Linear { terms: Vec::new() }
    }

    /// `−v − ∂`.
    pub fn conjugate(v: FVar) -> Self {
        Self::new(&[(Some(v), -1), (None, -1)])
    }

    fn uses(&self, v: FVar) -> bool {
        self.terms
            .iter()
            .any(|(w, c)| *w == Some(v) && !c.is_zero())
    }
}

impl fmt::Display for Linear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = FormalPoly::zero();
        for (v, c) in &self.terms {
            let mut k = Key {
                basis: 0,
                d: 0,
                exps: [0; NVARS],
            };
            match v {
                Some(v) => k.exps[v.0 as usize] = 1,
                None => k.d = 1,
            }
            p.add_term(k, c.clone());
        }
        let s = p.render_with(&|_| String::new());
        write!(
            f,
            "{}",
            if s.is_empty() {
                "0".to_string()
            } else {
                s.replace("[]", "")
            }
        )
    }
}

fn sign_split(c: &FieldElem) -> (bool, FieldElem) {
    use num_traits::{Signed, Zero};
    let neg =
        (c.im().is_zero() && c.re().is_negative()) || (c.re().is_zero() && c.im().is_negative());
    if neg {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

impl FormalPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis element `e_i`.
    pub fn basis(i: usize) -> Self {
        Self::basis_scaled(i, FieldElem::one())
    }

    pub fn basis_scaled(i: usize, c: FieldElem) -> Self {
        let mut p = Self::zero();
        p.add_term(
            Key {
                basis: i as u32,
                d: 0,
                exps: [0; NVARS],
            },
            c,
        );
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &FieldElem)> {
        self.terms.iter()
    }

    /// The largest term in key order.
    pub fn leading(&self) -> Option<(&Key, &FieldElem)> {
        self.terms.last_key_value()
    }

    /// Evaluates `∂` at the scalar `x`, returning dense coordinates over a
    /// basis of size `rank`; `None` if formal variables occur.
    pub fn specialize_d(&self, x: &FieldElem, rank: usize) -> Option<Vec<FieldElem>> {
        let mut out = vec![FieldElem::zero(); rank];
        for (k, c) in &self.terms {
            if k.exps.iter().any(|&e| e > 0) || k.basis as usize >= rank {
                return None;
            }
            out[k.basis as usize] += &(c * &x.pow(k.d as u32));
        }
        Some(out)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: Key, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &FormalPoly) {
        for (k, c) in &other.terms {
            self.add_term(*k, c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &FormalPoly, s: &FieldElem) {
        if s.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(*k, c * s);
        }
    }

    pub fn add(&self, other: &FormalPoly) -> FormalPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &FormalPoly) -> FormalPoly {
        let mut out = self.clone();
        out.add_scaled(other, &FieldElem::int(-1));
        out
    }

    pub fn scale(&self, s: &FieldElem) -> FormalPoly {
        let mut out = FormalPoly::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn signed(&self, negative: bool) -> FormalPoly {
        if negative {
            self.scale(&FieldElem::int(-1))
        } else {
            self.clone()
        }
    }

    /// `∂^k` applied to every coefficient.
    pub fn d_pow(&self, k: u8) -> FormalPoly {
        FormalPoly {
            terms: self
                .terms
                .iter()
                .map(|(key, c)| {
                    (
                        Key {
                            d: key.d + k,
                            ..*key
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn d(&self) -> FormalPoly {
        self.d_pow(1)
    }

    /// Multiplication by `v^k`.
    pub fn times_var(&self, v: FVar, k: u8) -> FormalPoly {
        FormalPoly {
            terms: self
                .terms
                .iter()
                .map(|(key, c)| {
                    let mut key = *key;
                    key.exps[v.0 as usize] += k;
                    (key, c.clone())
                })
                .collect(),
        }
    }

    /// The `F[∂]`-linear extension of `e_i ↦ f(i)`; formal variables are kept.
    pub fn map_basis(&self, f: &dyn Fn(usize) -> FormalPoly) -> FormalPoly {
        let mut out = FormalPoly::zero();
        for (key, c) in &self.terms {
            let mut img = f(key.basis as usize).d_pow(key.d);
            for (v, &k) in key.exps.iter().enumerate() {
                if k > 0 {
                    img = img.times_var(FVar(v as u8), k);
                }
            }
            out.add_scaled(&img, c);
        }
        out
    }

    pub fn uses_var(&self, v: FVar) -> bool {
        self.terms.keys().any(|k| k.exps[v.0 as usize] > 0)
    }

    pub fn has_vars(&self) -> bool {
        self.terms.keys().any(|k| k.exps.iter().any(|&e| e > 0))
    }

    pub fn degree_in(&self, v: FVar) -> Option<u8> {
        self.terms.keys().map(|k| k.exps[v.0 as usize]).max()
    }

    pub fn d_degree(&self) -> Option<u8> {
        self.terms.keys().map(|k| k.d).max()
    }

    /// The coefficient of `v^k`, with `v` removed.
    pub fn coeff_of(&self, v: FVar, k: u8) -> FormalPoly {
        let mut out = FormalPoly::zero();
        for (key, c) in &self.terms {
            if key.exps[v.0 as usize] == k {
                let mut key = *key;
                key.exps[v.0 as usize] = 0;
                out.add_term(key, c.clone());
            }
        }
        out
    }

    pub fn basis_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(|k| k.basis as usize).collect();
        v.dedup();
        v
    }

    /// Replaces `from` by a linear form in the other variables and `∂`.
    pub fn subst(&self, from: FVar, to: &Linear) -> FormalPoly {
        let max = self.degree_in(from).unwrap_or(0) as usize;
        if max == 0 {
            return self.clone();
        }
        // powers of the linear form as (exps, d) → coefficient
        let mut powers: Vec<BTreeMap<([u8; NVARS], u8), FieldElem>> = vec![BTreeMap::new()];
        powers[0].insert(([0; NVARS], 0), FieldElem::one());
        for e in 1..=max {
            let mut next = BTreeMap::new();
            for ((ex, d), c) in &powers[e - 1] {
                for (v, lc) in &to.terms {
                    if lc.is_zero() {
                        continue;
                    }
                    let (mut ex2, mut d2) = (*ex, *d);
                    match v {
                        Some(v) => ex2[v.0 as usize] += 1,
                        None => d2 += 1,
                    }
                    let entry = next.entry((ex2, d2)).or_insert_with(FieldElem::zero);
                    *entry += &(c * lc);
                }
            }
            next.retain(|_, c: &mut FieldElem| !c.is_zero());
            powers.push(next);
        }
        let mut out = FormalPoly::zero();
        for (key, c) in &self.terms {
            let e = key.exps[from.0 as usize] as usize;
            let mut base = *key;
            base.exps[from.0 as usize] = 0;
            if e == 0 {
                out.add_term(base, c.clone());
                continue;
            }
            for ((ex, d), pc) in &powers[e] {
                let mut k = base;
                for i in 0..NVARS {
                    k.exps[i] += ex[i];
                }
                k.d += d;
                out.add_term(k, c * pc);
            }
        }
        out
    }

    /// Renders with basis symbols supplied by `name`, e.g. `2·λ∂[S] - [T]`.
    pub fn render_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = sign_split(c);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut mono = String::new();
            for (v, &e) in k.exps.iter().enumerate() {
                if e > 0 {
                    mono.push_str(&FVar(v as u8).name());
                    if e > 1 {
                        mono.push_str(&format!("^{e}"));
                    }
                }
            }
            if k.d > 0 {
                mono.push('∂');
                if k.d > 1 {
                    mono.push_str(&format!("^{}", k.d));
                }
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}·"));
            }
            out.push_str(&mono);
            out.push_str(&format!("[{}]", name(k.basis as usize)));
        }
        out
    }

    /// Parses the output of [`FormalPoly::render_with`].
    pub fn parse_with(s: &str, index: &dyn Fn(&str) -> Option<usize>) -> Result<FormalPoly> {
        let s = s.trim();
        let mut out = FormalPoly::zero();
        if s == "0" {
            return Ok(out);
        }
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut neg = false;
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        if chars.first() == Some(&'-') {
            neg = true;
            i = 1;
        }
        while i < chars.len() {
            let c = chars[i];
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ => {}
            }
            if depth == 0
                && c == ' '
                && i + 2 < chars.len()
                && (chars[i + 1] == '+' || chars[i + 1] == '-')
                && chars[i + 2] == ' '
            {
                chunks.push((neg, std::mem::take(&mut cur)));
                neg = chars[i + 1] == '-';
                i += 3;
                continue;
            }
            cur.push(c);
            i += 1;
        }
        chunks.push((neg, cur));
        for (neg, t) in chunks {
            let err = || AlgebraError::Parse(format!("bad term `{t}`"));
            let open = t.rfind('[').ok_or_else(err)?;
            let name = t[open + 1..].strip_suffix(']').ok_or_else(err)?;
            let basis = index(name)
                .ok_or_else(|| AlgebraError::Parse(format!("unknown basis symbol `{name}`")))?;
            let head = &t[..open];
            let (coef, mono) = match head.split_once('·') {
                Some((c, m)) => (c.parse::<FieldElem>().map_err(AlgebraError::Parse)?, m),
                None => (FieldElem::one(), head),
            };
            let mut key = Key {
                basis: basis as u32,
                d: 0,
                exps: [0; NVARS],
            };
            let mc: Vec<char> = mono.chars().collect();
            let mut j = 0;
            while j < mc.len() {
                let slot: Option<usize> = match mc[j] {
                    'λ' => Some(0),
                    'μ' => Some(1),
                    'ν' => Some(2),
                    'κ' => {
                        let mut num = String::new();
                        while j + 1 < mc.len() && mc[j + 1].is_ascii_digit() {
                            j += 1;
                            num.push(mc[j]);
                        }
                        let k: usize = num.parse().map_err(|_| err())?;
                        if k + 2 >= NVARS {
                            return Err(err());
                        }
                        Some(k + 2)
                    }
                    '∂' => None,
                    _ => return Err(err()),
                };
                let mut e = 1u8;
                if j + 1 < mc.len() && mc[j + 1] == '^' {
                    let mut num = String::new();
                    j += 1;
                    while j + 1 < mc.len() && mc[j + 1].is_ascii_digit() {
                        j += 1;
                        num.push(mc[j]);
                    }
                    e = num.parse().map_err(|_| err())?;
                }
                match slot {
                    Some(v) => key.exps[v] += e,
                    None => key.d += e,
                }
                j += 1;
            }
            out.add_term(key, if neg { -coef } else { coef });
        }
        Ok(out)
    }
}

impl fmt::Display for FormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&|i| format!("e{i}")))
    }
}

impl fmt::Debug for FormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomial in `∂` with scalar coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DPoly(pub Vec<FieldElem>);

impl DPoly {
    pub fn new(mut c: Vec<FieldElem>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        DPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `p(∂)·x`.
    pub fn apply(&self, x: &FormalPoly) -> FormalPoly {
        let mut out = FormalPoly::zero();
        for (k, c) in self.0.iter().enumerate() {
            out.add_scaled(&x.d_pow(k as u8), c);
        }
        out
    }
}

/// The identity an algebra is declared to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variety {
    Jordan,
    Lie,
    Associative,
    Unspecified,
}

impl Variety {
    /// `+1` for commutative, `−1` for anti-commutative varieties.
    pub fn commutativity_sign(self) -> Option<bool> {
        match self {
            Variety::Jordan => Some(false),
            Variety::Lie => Some(true),
            _ => None,
        }
    }
}

type TableTerm = (u8, u8, u32, FieldElem);

/// A conformal superalgebra free over `F[∂]` on a homogeneous basis, given by
/// the λ-products of basis pairs.
#[derive(Clone)]
pub struct CAlgebra {
    pub name: String,
    pub names: Vec<String>,
    pub parities: Vec<Parity>,
    pub variety: Variety,
    table: Vec<Vec<FormalPoly>>,
    compiled: Vec<Vec<Vec<TableTerm>>>,
}

impl fmt::Debug for CAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CAlgebra({}, rank {})", self.name, self.rank())
    }
}

impl CAlgebra {
    /// Builds from a full table of `e_i λ e_j`, each a polynomial in `λ` only.
    pub fn new(
        name: impl Into<String>,
        names: Vec<String>,
        parities: Vec<Parity>,
        variety: Variety,
        table: Vec<Vec<FormalPoly>>,
    ) -> Result<Self> {
        let name = name.into();
        let r = names.len();
        if parities.len() != r || table.len() != r || table.iter().any(|row| row.len() != r) {
            return Err(AlgebraError::InvalidConfig(format!(
                "{name}: table shape does not match rank {r}"
            )));
        }
        let mut compiled = vec![vec![Vec::new(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let want = parities[i] + parities[j];
                for (k, c) in table[i][j].terms() {
                    if k.basis as usize >= r {
                        return Err(AlgebraError::InvalidConfig(format!(
                            "{name}: index {} out of range",
                            k.basis
                        )));
                    }
                    if k.exps[1..].iter().any(|&e| e > 0) {
                        return Err(AlgebraError::VariableCollision(format!(
                            "{name}: table entry ({}, {}) uses a variable other than λ",
                            names[i], names[j]
                        )));
                    }
                    if parities[k.basis as usize] != want {
                        return Err(AlgebraError::InconsistentParity(format!(
                            "{name}: {}_λ{} contains {}",
                            names[i], names[j], names[k.basis as usize]
                        )));
                    }
                    compiled[i][j].push((k.exps[0], k.d, k.basis, c.clone()));
                }
            }
        }
        Ok(CAlgebra {
            name,
            names,
            parities,
            variety,
            table,
            compiled,
        })
    }

    /// Builds from the products of some ordered pairs, completing the others
    /// through the declared (anti)commutativity: `e_j λ e_i = ±e_i_{−λ−∂} e_j`.
    pub fn from_half_table(
        name: impl Into<String>,
        names: Vec<String>,
        parities: Vec<Parity>,
        variety: Variety,
        given: BTreeMap<(usize, usize), FormalPoly>,
    ) -> Result<Self> {
        let name = name.into();
        let anti = variety.commutativity_sign().ok_or_else(|| {
            AlgebraError::InvalidConfig(format!(
                "{name}: completion needs a (anti)commutative variety"
            ))
        })?;
        let r = names.len();
        let mut table = vec![vec![FormalPoly::zero(); r]; r];
        let mut seen = vec![vec![false; r]; r];
        for (&(i, j), p) in &given {
            table[i][j] = p.clone();
            seen[i][j] = true;
        }
        for (&(i, j), p) in &given {
            if !seen[j][i] {
                let sign = anti ^ koszul(parities[i], parities[j]);
                table[j][i] = p
                    .subst(FVar::LAMBDA, &Linear::conjugate(FVar::LAMBDA))
                    .signed(sign);
                seen[j][i] = true;
            }
        }
        Self::new(name, names, parities, variety, table)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// `(even, odd)` counts.
    pub fn super_rank(&self) -> (usize, usize) {
        let odd = self.parities.iter().filter(|p| p.is_odd()).count();
        (self.rank() - odd, odd)
    }

    pub fn table(&self, i: usize, j: usize) -> &FormalPoly {
        &self.table[i][j]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn render(&self, p: &FormalPoly) -> String {
        p.render_with(&|i| {
            self.names
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("e{i}"))
        })
    }

    pub fn parse(&self, s: &str) -> Result<FormalPoly> {
        FormalPoly::parse_with(s, &|n| self.index_of(n))
    }

    pub fn parity_of(&self, x: &FormalPoly) -> Result<Parity> {
        let mut p = None;
        for k in x.terms.keys() {
            let q = *self.parities.get(k.basis as usize).ok_or_else(|| {
                AlgebraError::AlgebraMismatch(format!("index {}", k.basis), self.name.clone())
            })?;
            if p.is_some_and(|p| p != q) {
                return Err(AlgebraError::NotHomogeneous(self.render(x)));
            }
            p = Some(q);
        }
        Ok(p.unwrap_or(Parity::Even))
    }

    fn check_indices(&self, x: &FormalPoly) -> Result<()> {
        match x.terms.keys().find(|k| k.basis as usize >= self.rank()) {
            Some(k) => Err(AlgebraError::AlgebraMismatch(
                format!("element with index {}", k.basis),
                self.name.clone(),
            )),
            None => Ok(()),
        }
    }

    /// `x_v y`, extended from the table by sesquilinearity:
    /// `(∂^a e_i)_v(∂^b e_j) = (−v)^a (v+∂)^b (e_i v e_j)`.
    pub fn lprod(&self, x: &FormalPoly, v: FVar, y: &FormalPoly) -> Result<FormalPoly> {
        self.check_indices(x)?;
        self.check_indices(y)?;
        if x.uses_var(v) || y.uses_var(v) {
            return Err(AlgebraError::VariableCollision(v.name()));
        }
        let vi = v.0 as usize;
        let mut out = FormalPoly::zero();
        for (kx, cx) in &x.terms {
            for (ky, cy) in &y.terms {
                let entry = &self.compiled[kx.basis as usize][ky.basis as usize];
                if entry.is_empty() {
                    continue;
                }
                let mut exps = kx.exps;
                for i in 0..NVARS {
                    exps[i] += ky.exps[i];
                }
                let mut c0 = cx * cy;
                if kx.d % 2 == 1 {
                    c0 = -c0;
                }
                let b = ky.d;
                for i in 0..=b {
                    let cb = &c0 * &FieldElem::from_rat(binomial(b as i64, i as u32).into());
                    for (p, q, k, c) in entry {
                        let mut e = exps;
                        e[vi] += kx.d + i + p;
                        out.add_term(
                            Key {
                                basis: *k,
                                d: b - i + q,
                                exps: e,
                            },
                            &cb * c,
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    /// `x_{σ} y` for a composite subscript `σ`: evaluated in a fresh variable,
    /// which is then replaced by `σ`.
    pub fn lprod_at(&self, x: &FormalPoly, sub: &Linear, y: &FormalPoly) -> Result<FormalPoly> {
        let fresh = (0..NVARS as u8)
            .rev()
            .map(FVar)
            .find(|&v| !x.uses_var(v) && !y.uses_var(v) && !sub.uses(v))
            .ok_or_else(|| AlgebraError::VariableCollision("no fresh variable left".into()))?;
        Ok(self.lprod(x, fresh, y)?.subst(fresh, sub))
    }

    /// `x_(j) y = j!·c_j` where `x_λ y = Σ λ^j c_j`.
    pub fn jth_product(&self, x: &CElem, y: &CElem, j: u32) -> Result<CElem> {
        let p = self.lprod(x, FVar::LAMBDA, y)?;
        if j > u8::MAX as u32 {
            return Ok(FormalPoly::zero());
        }
        Ok(p.coeff_of(FVar::LAMBDA, j as u8)
            .scale(&FieldElem::from_rat(factorial(j).into())))
    }

    /// Largest `∂`-degree appearing in the table.
    pub fn max_table_d_degree(&self) -> u8 {
        self.table
            .iter()
            .flatten()
            .filter_map(|p| p.d_degree())
            .max()
            .unwrap_or(0)
    }

    /// Serializable catalog form.
    pub fn to_catalog(&self) -> Catalog {
        let mut table = Vec::new();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if !self.table[i][j].is_zero() {
                    table.push(CatalogEntry {
                        left: self.names[i].clone(),
                        right: self.names[j].clone(),
                        value: self.render(&self.table[i][j]),
                    });
                }
            }
        }
        Catalog {
            name: self.name.clone(),
            variety: self.variety,
            basis: self
                .names
                .iter()
                .zip(&self.parities)
                .map(|(n, p)| CatalogBasis {
                    name: n.clone(),
                    parity: *p,
                })
                .collect(),
            table,
        }
    }

    pub fn from_catalog(c: &Catalog) -> Result<Self> {
        let names: Vec<String> = c.basis.iter().map(|b| b.name.clone()).collect();
        let index = |n: &str| names.iter().position(|m| m == n);
        let r = names.len();
        let mut table = vec![vec![FormalPoly::zero(); r]; r];
        for e in &c.table {
            let i = index(&e.left)
                .ok_or_else(|| AlgebraError::Parse(format!("unknown basis symbol `{}`", e.left)))?;
            let j = index(&e.right).ok_or_else(|| {
                AlgebraError::Parse(format!("unknown basis symbol `{}`", e.right))
            })?;
            table[i][j] = FormalPoly::parse_with(&e.value, &index)?;
        }
        Self::new(
            c.name.clone(),
            names.clone(),
            c.basis.iter().map(|b| b.parity).collect(),
            c.variety,
            table,
        )
    }

    pub fn to_catalog_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_catalog()).expect("catalog serializes") + "\n"
    }

    pub fn from_catalog_json(s: &str) -> Result<Self> {
        let c: Catalog = serde_json::from_str(s).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        Self::from_catalog(&c)
    }

    /// Same table, replacing `e_i λ e_j` by `f(i, j, e_i λ e_j)`.
    pub fn mutated(
        &self,
        name: &str,
        f: impl Fn(usize, usize, &FormalPoly) -> FormalPoly,
    ) -> Result<CAlgebra> {
        let r = self.rank();
        let table = (0..r)
            .map(|i| (0..r).map(|j| f(i, j, &self.table[i][j])).collect())
            .collect();
        CAlgebra::new(
            name,
            self.names.clone(),
            self.parities.clone(),
            self.variety,
            table,
        )
    }

    /// Structural equality of tables, ignoring names.
    pub fn same_table(&self, other: &CAlgebra) -> bool {
        self.parities == other.parities && self.table == other.table
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogBasis {
    pub name: String,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub left: String,
    pub right: String,
    pub value: String,
}

/// Text document describing a conformal algebra: basis, parities and the
/// nonzero table entries `left λ right = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub name: String,
    pub variety: Variety,
    pub basis: Vec<CatalogBasis>,
    pub table: Vec<CatalogEntry>,
}

pub fn lprod(alg: &CAlgebra, x: &FormalPoly, v: FVar, y: &FormalPoly) -> Result<FormalPoly> {
    alg.lprod(x, v, y)
}

/// `p` with `from ↦ −to − ∂`.
pub fn subst_conjugate(p: &FormalPoly, from: FVar, to: FVar) -> Result<FormalPoly> {
    if from == to {
        return Err(AlgebraError::VariableCollision(from.name()));
    }
    if p.uses_var(to) && p.uses_var(from) {
        return Err(AlgebraError::VariableCollision(to.name()));
    }
    Ok(p.subst(from, &Linear::conjugate(to)))
}

/// `x_λ y − s·(−1)^{|x||y|} y_{−λ−∂} x`, with `s = −1` when `anti`.
pub fn comm_residual_conf(
    alg: &CAlgebra,
    x: &FormalPoly,
    y: &FormalPoly,
    anti: bool,
) -> Result<FormalPoly> {
    let (px, py) = (alg.parity_of(x)?, alg.parity_of(y)?);
    let lhs = alg.lprod(x, FVar::LAMBDA, y)?;
    let yx = alg.lprod(y, FVar::MU, x)?;
    let rhs = subst_conjugate(&yx, FVar::MU, FVar::LAMBDA)?.signed(anti ^ koszul(px, py));
    Ok(lhs.sub(&rhs))
}

/// `a_λ(b_μ c) − (a_λ b)_{λ+μ} c − (−1)^{|a||b|} b_μ(a_λ c)`.
pub fn jacobi_residual(
    alg: &CAlgebra,
    a: &FormalPoly,
    b: &FormalPoly,
    c: &FormalPoly,
) -> Result<FormalPoly> {
    let (pa, pb) = (alg.parity_of(a)?, alg.parity_of(b)?);
    let (l, m) = (FVar::LAMBDA, FVar::MU);
    let t1 = alg.lprod(a, l, &alg.lprod(b, m, c)?)?;
    let t2 = alg.lprod_at(
        &alg.lprod(a, l, b)?,
        &Linear::new(&[(Some(l), 1), (Some(m), 1)]),
        c,
    )?;
    let t3 = alg
        .lprod(b, m, &alg.lprod(a, l, c)?)?
        .signed(koszul(pa, pb));
    Ok(t1.sub(&t2).sub(&t3))
}

/// `a_λ(b_μ c) − (a_λ b)_{λ+μ} c`.
pub fn assoc_residual(
    alg: &CAlgebra,
    a: &FormalPoly,
    b: &FormalPoly,
    c: &FormalPoly,
) -> Result<FormalPoly> {
    let (l, m) = (FVar::LAMBDA, FVar::MU);
    let t1 = alg.lprod(a, l, &alg.lprod(b, m, c)?)?;
    let t2 = alg.lprod_at(
        &alg.lprod(a, l, b)?,
        &Linear::new(&[(Some(l), 1), (Some(m), 1)]),
        c,
    )?;
    Ok(t1.sub(&t2))
}

/// LHS − RHS of the conformal Jordan identity, with `a, b, c` carrying the
/// variables `λ, μ, ν`:
///
/// ```text
/// (−1)^{|a||c|} (a_λ b)_{λ+μ}(c_ν d) + (−1)^{|a||b|} (b_μ c)_{μ+ν}(a_λ d)
///   + (−1)^{|b||c|} (c_ν a)_{λ+ν}(b_μ d)
/// = (−1)^{|a||c|} a_λ((b_μ c)_{μ+ν} d) + (−1)^{|a||b|} b_μ((c_ν a)_{λ+ν} d)
///   + (−1)^{|b||c|} c_ν((a_λ b)_{λ+μ} d)
/// ```
///
/// For a current algebra this is the linearized Jordan identity term by term.
pub fn conformal_jordan_residual(
    alg: &CAlgebra,
    a: &FormalPoly,
    b: &FormalPoly,
    c: &FormalPoly,
    d: &FormalPoly,
) -> Result<FormalPoly> {
    let (pa, pb, pc) = (alg.parity_of(a)?, alg.parity_of(b)?, alg.parity_of(c)?);
    alg.parity_of(d)?;
    let (l, m, n) = (FVar::LAMBDA, FVar::MU, FVar::NU);
    let (s_ac, s_ab, s_bc) = (koszul(pa, pc), koszul(pa, pb), koszul(pb, pc));
    let lm = Linear::new(&[(Some(l), 1), (Some(m), 1)]);
    let mn = Linear::new(&[(Some(m), 1), (Some(n), 1)]);
    let ln = Linear::new(&[(Some(l), 1), (Some(n), 1)]);
    let ab = alg.lprod(a, l, b)?;
    let bc = alg.lprod(b, m, c)?;
    let ca = alg.lprod(c, n, a)?;

    let mut r = alg.lprod_at(&ab, &lm, &alg.lprod(c, n, d)?)?.signed(s_ac);
    r.add_assign(&alg.lprod_at(&bc, &mn, &alg.lprod(a, l, d)?)?.signed(s_ab));
    r.add_assign(&alg.lprod_at(&ca, &ln, &alg.lprod(b, m, d)?)?.signed(s_bc));
    r = r.sub(&alg.lprod(a, l, &alg.lprod_at(&bc, &mn, d)?)?.signed(s_ac));
    r = r.sub(&alg.lprod(b, m, &alg.lprod_at(&ca, &ln, d)?)?.signed(s_ab));
    r = r.sub(&alg.lprod(c, n, &alg.lprod_at(&ab, &lm, d)?)?.signed(s_bc));
    Ok(r)
}

/// The six-term λ-form with the subscripts `ν−λ, λ+ν, −μ−∂, λ+μ, ν−μ, λ+ν−μ`:
///
/// ```text
/// (−1)^{|a||c|} a_λ((b_μ c)_ν d) + (−1)^{|a||b|} b_μ((c_{ν−λ} a)_{λ+ν} d)
///   + (−1)^{|b||c|} c_{ν−μ}((a_{−μ−∂} b)_{λ+ν} d)
/// = (−1)^{|a||c|} (a_{−μ−∂} b)_{λ+μ}(c_{ν−μ} d) + (−1)^{|a||b|} (b_μ c)_ν(a_{λ+ν} d)
///   + (−1)^{|b||c|} (c_{ν−μ} a)_{λ+ν−μ}(b_μ d)
/// ```
///
/// Kept as a diagnostic: it does not vanish on `J_0`, whose coefficient
/// algebra is Jordan, so it is not used as the Jordan test.
pub fn conformal_jordan_residual_six_term(
    alg: &CAlgebra,
    a: &FormalPoly,
    b: &FormalPoly,
    c: &FormalPoly,
    d: &FormalPoly,
) -> Result<FormalPoly> {
    let (pa, pb, pc) = (alg.parity_of(a)?, alg.parity_of(b)?, alg.parity_of(c)?);
    alg.parity_of(d)?;
    let (l, m, n) = (Some(FVar::LAMBDA), Some(FVar::MU), Some(FVar::NU));
    let (s_ac, s_ab, s_bc) = (koszul(pa, pc), koszul(pa, pb), koszul(pb, pc));
    let nu_minus_mu = Linear::new(&[(n, 1), (m, -1)]);
    let lambda_plus_nu = Linear::new(&[(l, 1), (n, 1)]);

    let bc = alg.lprod(b, FVar::MU, c)?;
    let t1 = alg.lprod(
        a,
        FVar::LAMBDA,
        &alg.lprod_at(&bc, &Linear::new(&[(n, 1)]), d)?,
    )?;

    let ca = alg.lprod_at(c, &Linear::new(&[(n, 1), (l, -1)]), a)?;
    let t2 = alg.lprod(b, FVar::MU, &alg.lprod_at(&ca, &lambda_plus_nu, d)?)?;

    let ab = alg.lprod_at(a, &Linear::new(&[(m, -1), (None, -1)]), b)?;
    let t3 = alg.lprod_at(c, &nu_minus_mu, &alg.lprod_at(&ab, &lambda_plus_nu, d)?)?;

    let cd = alg.lprod_at(c, &nu_minus_mu, d)?;
    let t4 = alg.lprod_at(&ab, &Linear::new(&[(l, 1), (m, 1)]), &cd)?;

    let ad = alg.lprod_at(a, &lambda_plus_nu, d)?;
    let t5 = alg.lprod_at(&bc, &Linear::new(&[(n, 1)]), &ad)?;

    let ca2 = alg.lprod_at(c, &nu_minus_mu, a)?;
    let bd = alg.lprod(b, FVar::MU, d)?;
    let t6 = alg.lprod_at(&ca2, &Linear::new(&[(l, 1), (n, 1), (m, -1)]), &bd)?;

    let mut r = t1.signed(s_ac);
    r.add_assign(&t2.signed(s_ab));
    r.add_assign(&t3.signed(s_bc));
    r = r.sub(&t4.signed(s_ac));
    r = r.sub(&t5.signed(s_ab));
    r = r.sub(&t6.signed(s_bc));
    Ok(r)
}

/// `(∂x)_λ y + λ(x_λ y)`; zero by construction.
pub fn sesquilinearity_residual(
    alg: &CAlgebra,
    x: &FormalPoly,
    y: &FormalPoly,
) -> Result<FormalPoly> {
    let lhs = alg.lprod(&x.d(), FVar::LAMBDA, y)?;
    let rhs = alg.lprod(x, FVar::LAMBDA, y)?.times_var(FVar::LAMBDA, 1);
    let right = alg.lprod(x, FVar::LAMBDA, &y.d())?;
    let right_rhs = alg.lprod(x, FVar::LAMBDA, y)?;
    let right_res = right
        .sub(&right_rhs.times_var(FVar::LAMBDA, 1))
        .sub(&right_rhs.d());
    Ok(lhs.add(&rhs).add(&right_res))
}

/// The current algebra `Cur 𝔞 = F[∂] ⊗ 𝔞` with `a_λ b = ab`.
pub fn cur(alg: &crate::jordan::FiniteAlgebra, variety: Variety) -> Result<CAlgebra> {
    let r = alg.dim();
    let mut table = vec![vec![FormalPoly::zero(); r]; r];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for (k, c) in &alg.table[i][j] {
                cell.add_assign(&FormalPoly::basis_scaled(*k, c.clone()));
            }
        }
    }
    CAlgebra::new(
        format!("Cur({})", alg.name),
        alg.names.clone(),
        alg.parities.clone(),
        variety,
        table,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::FiniteAlgebra;

    fn js1_like() -> CAlgebra {
        let s = FormalPoly::basis(0);
        let t = FormalPoly::basis(1);
        let mut given = BTreeMap::new();
        given.insert((0, 0), s.scale(&FieldElem::int(2)));
        given.insert(
            (1, 1),
            s.d()
                .add(&s.times_var(FVar::LAMBDA, 1).scale(&FieldElem::int(2))),
        );
        given.insert((1, 0), t.clone());
        CAlgebra::from_half_table(
            "JS",
            vec!["S".into(), "T".into()],
            vec![Parity::Even, Parity::Odd],
            Variety::Jordan,
            given,
        )
        .unwrap()
    }

    #[test]
    fn sesquilinearity_on_left() {
        let a = js1_like();
        let (s, t) = (FormalPoly::basis(0), FormalPoly::basis(1));
        let p = a.lprod(&t.d(), FVar::LAMBDA, &t).unwrap();
        assert_eq!(a.render(&p), "-2·λ^2[S] - λ∂[S]");
        assert_eq!(a.render(&a.lprod(&s, FVar::LAMBDA, &t).unwrap()), "[T]");
        assert!(sesquilinearity_residual(&a, &t.d_pow(2), &s.d())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn substitution_examples() {
        let s = FormalPoly::basis(0);
        let p = s
            .d()
            .add(&s.times_var(FVar::MU, 1).scale(&FieldElem::int(2)));
        let q = subst_conjugate(&p, FVar::MU, FVar::LAMBDA).unwrap();
        let want = s
            .d()
            .scale(&FieldElem::int(-1))
            .sub(&s.times_var(FVar::LAMBDA, 1).scale(&FieldElem::int(2)));
        assert_eq!(q, want);
        assert_eq!(subst_conjugate(&s, FVar::MU, FVar::LAMBDA).unwrap(), s);
        assert!(subst_conjugate(&s, FVar::MU, FVar::MU).is_err());
    }

    #[test]
    fn lprod_rejects_bound_variable() {
        let a = js1_like();
        let x = FormalPoly::basis(0).times_var(FVar::LAMBDA, 1);
        assert!(matches!(
            a.lprod(&x, FVar::LAMBDA, &FormalPoly::basis(0)),
            Err(AlgebraError::VariableCollision(_))
        ));
    }

    #[test]
    fn jth_products() {
        let a = js1_like();
        let t = FormalPoly::basis(1);
        assert_eq!(a.render(&a.jth_product(&t, &t, 1).unwrap()), "2·[S]");
        assert_eq!(a.render(&a.jth_product(&t, &t, 0).unwrap()), "∂[S]");
        assert!(a.jth_product(&t, &t, 2).unwrap().is_zero());
    }

    #[test]
    fn render_parse_roundtrip() {
        let a = js1_like();
        let mut p = FormalPoly::basis(0)
            .d_pow(2)
            .times_var(FVar::NU, 3)
            .scale(&FieldElem::new(
                crate::scalar::rat(1, 2),
                crate::scalar::rat(-3, 1),
            ));
        p.add_assign(
            &FormalPoly::basis(1)
                .times_var(FVar(4), 1)
                .scale(&FieldElem::frac(-7, 3)),
        );
        p.add_assign(&FormalPoly::basis(1));
        let s = a.render(&p);
        assert_eq!(a.parse(&s).unwrap(), p, "{s}");
        let back = CAlgebra::from_catalog_json(&a.to_catalog_json()).unwrap();
        assert!(back.same_table(&a));
    }

    #[test]
    fn commutativity_and_planted_flip() {
        let a = js1_like();
        for i in 0..2 {
            for j in 0..2 {
                let r = comm_residual_conf(&a, &FormalPoly::basis(i), &FormalPoly::basis(j), false)
                    .unwrap();
                assert!(r.is_zero(), "{i}{j}: {r}");
            }
        }
        let bad = a
            .mutated("flip", |i, j, p| p.signed(i == 1 && j == 0))
            .unwrap();
        let r =
            comm_residual_conf(&bad, &FormalPoly::basis(1), &FormalPoly::basis(0), false).unwrap();
        assert!(!r.is_zero());
    }

    fn unit_algebra() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "F",
            vec!["e".into()],
            vec![Parity::Even],
            vec![vec![vec![(0, FieldElem::one())]]],
        )
        .unwrap()
    }

    #[test]
    fn current_of_unit_algebra() {
        let c = cur(&unit_algebra(), Variety::Jordan).unwrap();
        let e = FormalPoly::basis(0);
        assert_eq!(c.lprod(&e, FVar::LAMBDA, &e).unwrap(), e);
        assert!(conformal_jordan_residual(&c, &e, &e, &e, &e)
            .unwrap()
            .is_zero());
        assert!(assoc_residual(&c, &e, &e.d(), &e).unwrap().is_zero());
        assert!(assoc_residual(&c, &FormalPoly::zero(), &e, &e)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn nonassociative_current_detected() {
        // e0·e0 = e1, everything else zero except e1·e0 = e0
        let t = vec![
            vec![vec![(1, FieldElem::one())], vec![]],
            vec![vec![(0, FieldElem::one())], vec![]],
        ];
        let f = FiniteAlgebra::new(
            "na",
            vec!["x".into(), "y".into()],
            vec![Parity::Even, Parity::Even],
            t,
        )
        .unwrap();
        let c = cur(&f, Variety::Unspecified).unwrap();
        let x = FormalPoly::basis(0);
        let found = [0, 1].iter().any(|&i| {
            [0, 1].iter().any(|&j| {
                [0, 1].iter().any(|&k| {
                    !assoc_residual(
                        &c,
                        &FormalPoly::basis(i),
                        &FormalPoly::basis(j),
                        &FormalPoly::basis(k),
                    )
                    .unwrap()
                    .is_zero()
                })
            })
        });
        assert!(found);
        assert!(!jacobi_residual(&c, &x, &x, &x).unwrap().is_zero());
    }
}
