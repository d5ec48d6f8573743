//! Sparse differential polynomials over exact rationals.
//!
//! A monomial is a finite multiset of jet variables `w^i_(s)` together with
//! an integer power of the deformation parameter `eps` (negative allowed),
//! and nonnegative powers of the pencil parameter `lam` and the symbol
//! variable `p`. Differential degree grades by the total derivative order:
//! `deg f(w) = 0`, `deg w_(l) = l`.

use crate::error::{Error, Result};
use crate::rational::{format_rat, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Packs a jet variable `w^field_(order)` into one key.
#[inline]
pub fn jet_key(field: usize, order: usize) -> u32 {
    debug_assert!(field < 0x10000 && order < 0x10000);
    ((field as u32) << 16) | order as u32
}

#[inline]
pub fn jet_field(key: u32) -> usize {
    (key >> 16) as usize
}

#[inline]
pub fn jet_order(key: u32) -> usize {
    (key & 0xffff) as usize
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    /// Sorted (jet key, exponent) pairs, exponents nonzero.
    pub jets: SmallVec<[(u32, u32); 4]>,
    pub eps: i32,
    pub lam: u32,
    pub p: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn jet(field: usize, order: usize) -> Self {
        Monomial {
            jets: SmallVec::from_slice(&[(jet_key(field, order), 1)]),
            ..Default::default()
        }
    }

    pub fn eps_pow(k: i32) -> Self {
        Monomial {
            eps: k,
            ..Default::default()
        }
    }

    pub fn lam_pow(d: u32) -> Self {
        Monomial {
            lam: d,
            ..Default::default()
        }
    }

    pub fn p_pow(d: u32) -> Self {
        Monomial {
            p: d,
            ..Default::default()
        }
    }

    pub fn is_one(&self) -> bool {
        self.jets.is_empty() && self.eps == 0 && self.lam == 0 && self.p == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut jets: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        let (mut a, mut b) = (self.jets.iter().peekable(), other.jets.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ka, ea)), Some(&&(kb, eb))) => match ka.cmp(&kb) {
                    Ordering::Less => {
                        jets.push((ka, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        jets.push((kb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        jets.push((ka, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&x), None) => {
                    jets.push(x);
                    a.next();
                }
                (None, Some(&&x)) => {
                    jets.push(x);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial {
            jets,
            eps: self.eps + other.eps,
            lam: self.lam + other.lam,
            p: self.p + other.p,
        }
    }

    /// Exact monomial quotient, if `other` divides `self` (eps subtracts freely).
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if self.lam < other.lam || self.p < other.p {
            return None;
        }
        let mut jets: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        let mut b = other.jets.iter().peekable();
        for &(k, e) in &self.jets {
            match b.peek() {
                Some(&&(kb, eb)) if kb == k => {
                    if eb > e {
                        return None;
                    }
                    if e > eb {
                        jets.push((k, e - eb));
                    }
                    b.next();
                }
                Some(&&(kb, _)) if kb < k => return None,
                _ => jets.push((k, e)),
            }
        }
        if b.peek().is_some() {
            return None;
        }
        Some(Monomial {
            jets,
            eps: self.eps - other.eps,
            lam: self.lam - other.lam,
            p: self.p - other.p,
        })
    }

    /// Differential degree: sum of derivative orders, counted with exponents.
    pub fn diff_degree(&self) -> usize {
        self.jets
            .iter()
            .map(|&(k, e)| jet_order(k) * e as usize)
            .sum()
    }

    pub fn total_jet_degree(&self) -> usize {
        self.jets.iter().map(|&(_, e)| e as usize).sum()
    }

    /// Dense lexicographic group order (jet keys ascending most significant,
    /// then eps, lam, p). Compatible with monomial multiplication, which is
    /// what exact division needs.
    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        let (mut a, mut b) = (self.jets.iter().peekable(), other.jets.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ka, ea)), Some(&&(kb, eb))) => match ka.cmp(&kb) {
                    Ordering::Less => return Ordering::Greater, // self has the earlier var
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => break,
            }
        }
        (self.eps, self.lam, self.p).cmp(&(other.eps, other.lam, other.p))
    }
}

/// Sparse polynomial in jet variables, eps, lam and p.
#[derive(Clone, Default, PartialEq)]
pub struct DiffPoly {
    terms: HashMap<Monomial, Rat>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        DiffPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        DiffPoly::constant(Rat::from_integer(BigInt::from(n)))
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    /// The jet variable `w^field_(order)`.
    pub fn var(field: usize, order: usize) -> Self {
        DiffPoly::monomial(Monomial::jet(field, order), Rat::one())
    }

    pub fn eps(k: i32) -> Self {
        DiffPoly::monomial(Monomial::eps_pow(k), Rat::one())
    }

    pub fn lam() -> Self {
        DiffPoly::monomial(Monomial::lam_pow(1), Rat::one())
    }

    pub fn p_var() -> Self {
        DiffPoly::monomial(Monomial::p_pow(1), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// Terms in the canonical printing order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| display_cmp(a, b));
        v
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// If the polynomial is a constant, returns it.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn insert(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let v = e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &DiffPoly) {
        for (m, c) in &other.terms {
            self.insert(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut out = DiffPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Total x-derivative: the chain rule sends `w^i_(s)` to `w^i_(s+1)`.
    pub fn total_derivative(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (idx, &(k, e)) in m.jets.iter().enumerate() {
                let mut jets = m.jets.clone();
                if e == 1 {
                    jets.remove(idx);
                } else {
                    jets[idx] = (k, e - 1);
                }
                let bumped = Monomial {
                    jets,
                    eps: m.eps,
                    lam: m.lam,
                    p: m.p,
                }
                .mul(&Monomial::jet(jet_field(k), jet_order(k) + 1));
                out.insert(bumped, c * Rat::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    pub fn total_derivative_n(&self, n: usize) -> DiffPoly {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.total_derivative();
        }
        out
    }

    /// Partial derivative with respect to the jet variable `w^field_(order)`.
    pub fn partial_jet(&self, field: usize, order: usize) -> DiffPoly {
        let key = jet_key(field, order);
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            if let Some(idx) = m.jets.iter().position(|&(k, _)| k == key) {
                let (_, e) = m.jets[idx];
                let mut jets = m.jets.clone();
                if e == 1 {
                    jets.remove(idx);
                } else {
                    jets[idx] = (key, e - 1);
                }
                out.insert(
                    Monomial {
                        jets,
                        eps: m.eps,
                        lam: m.lam,
                        p: m.p,
                    },
                    c * Rat::from_integer(BigInt::from(e)),
                );
            }
        }
        out
    }

    /// Jet variables present, as (field, order) pairs.
    pub fn jet_vars(&self) -> Vec<(usize, usize)> {
        let mut set: Vec<(usize, usize)> = self
            .terms
            .keys()
            .flat_map(|m| m.jets.iter().map(|&(k, _)| (jet_field(k), jet_order(k))))
            .collect();
        set.sort_unstable();
        set.dedup();
        set
    }

    pub fn max_diff_degree(&self) -> usize {
        self.terms.keys().map(|m| m.diff_degree()).max().unwrap_or(0)
    }

    /// True when every monomial has differential degree `d`.
    pub fn is_homogeneous_diff_degree(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.diff_degree() == d)
    }

    pub fn eps_min(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.eps).min()
    }

    pub fn eps_max(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.eps).max()
    }

    /// Coefficient polynomial of `eps^k` (eps stripped from the result).
    pub fn coeff_eps(&self, k: i32) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            if m.eps == k {
                let mut m2 = m.clone();
                m2.eps = 0;
                out.insert(m2, c.clone());
            }
        }
        out
    }

    /// Drops all terms with eps power above `max`.
    pub fn eps_truncate(&self, max: i32) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.eps <= max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn lam_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.lam).max().unwrap_or(0)
    }

    /// Coefficient polynomial of `lam^d` (lam stripped).
    pub fn coeff_lam(&self, d: u32) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            if m.lam == d {
                let mut m2 = m.clone();
                m2.lam = 0;
                out.insert(m2, c.clone());
            }
        }
        out
    }

    /// Substitutes a rational value for lam.
    pub fn subst_lam(&self, value: &Rat) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2.lam = 0;
            let mut factor = Rat::one();
            for _ in 0..m.lam {
                factor *= value;
            }
            out.insert(m2, c * factor);
        }
        out
    }

    pub fn p_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.p).max().unwrap_or(0)
    }

    pub fn p_min(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.p).min()
    }

    /// Coefficient polynomial of `p^d` (p stripped).
    pub fn coeff_p(&self, d: u32) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            if m.p == d {
                let mut m2 = m.clone();
                m2.p = 0;
                out.insert(m2, c.clone());
            }
        }
        out
    }

    /// Drops all terms of p-degree above `max`.
    pub fn p_truncate(&self, max: u32) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.p <= max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `p -> -p`.
    pub fn negate_p(&self) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let v = if m.p % 2 == 1 { -c.clone() } else { c.clone() };
                    (m.clone(), v)
                })
                .collect(),
        }
    }

    /// Pins field `i` to a constant: `w^i -> value`, all `w^i_(s>=1) -> 0`.
    pub fn subst_field_const(&self, field: usize, value: &Rat) -> DiffPoly {
        let mut out = DiffPoly::zero();
        'term: for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut jets: SmallVec<[(u32, u32); 4]> = SmallVec::new();
            for &(k, e) in &m.jets {
                if jet_field(k) == field {
                    if jet_order(k) > 0 {
                        continue 'term; // derivative of a pinned field vanishes
                    }
                    let mut f = Rat::one();
                    for _ in 0..e {
                        f *= value;
                    }
                    if f.is_zero() {
                        continue 'term;
                    }
                    coeff *= f;
                } else {
                    jets.push((k, e));
                }
            }
            out.insert(
                Monomial {
                    jets,
                    eps: m.eps,
                    lam: m.lam,
                    p: m.p,
                },
                coeff,
            );
        }
        out
    }

    /// Evaluates all zero-order field variables at rational values, sending
    /// derivatives of those fields to zero. Fields not in the map survive.
    pub fn subst_fields(&self, values: &BTreeMap<usize, Rat>) -> DiffPoly {
        let mut out = self.clone();
        for (field, v) in values {
            out = out.subst_field_const(*field, v);
        }
        out
    }

    /// Full jet substitution: `w^i_(s) -> d^s/dx^s expr[i]` for every field.
    /// `exprs` must cover every field index that occurs.
    pub fn subst_jet_exprs(&self, exprs: &[DiffPoly]) -> DiffPoly {
        // cache of derivatives per (field, order)
        let mut cache: HashMap<(usize, usize), DiffPoly> = HashMap::new();
        let deriv = |field: usize, order: usize, cache: &mut HashMap<(usize, usize), DiffPoly>| {
            if let Some(e) = cache.get(&(field, order)) {
                return e.clone();
            }
            let e = if order == 0 {
                exprs[field].clone()
            } else {
                let prev = cache
                    .get(&(field, order - 1))
                    .cloned()
                    .unwrap_or_else(|| exprs[field].total_derivative_n(order - 1));
                prev.total_derivative()
            };
            cache.insert((field, order), e.clone());
            e
        };
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::monomial(
                Monomial {
                    jets: SmallVec::new(),
                    eps: m.eps,
                    lam: m.lam,
                    p: m.p,
                },
                c.clone(),
            );
            for &(k, e) in &m.jets {
                let base = deriv(jet_field(k), jet_order(k), &mut cache);
                acc = acc.mul(&base.pow(e));
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Numeric evaluation: fields (all derivative orders) via `jet_val`,
    /// eps/lam/p given explicitly.
    pub fn eval(
        &self,
        jet_val: &dyn Fn(usize, usize) -> Rat,
        eps: &Rat,
        lam: &Rat,
        p: &Rat,
    ) -> Rat {
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for &(k, e) in &m.jets {
                let base = jet_val(jet_field(k), jet_order(k));
                for _ in 0..e {
                    v *= &base;
                }
            }
            if m.eps != 0 {
                let mut f = Rat::one();
                for _ in 0..m.eps.unsigned_abs() {
                    f *= eps;
                }
                if m.eps < 0 {
                    v /= f;
                } else {
                    v *= f;
                }
            }
            for _ in 0..m.lam {
                v *= lam;
            }
            for _ in 0..m.p {
                v *= p;
            }
            total += v;
        }
        total
    }

    /// Leading term under the dense-lex group order.
    fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| a.cmp_lex(b))
    }

    /// Exact division: returns `q` with `self = q * divisor`, or None.
    /// Each operand is shifted to nonnegative eps powers first, so the term
    /// order is a well-order and the peeling loop terminates; the quotient's
    /// eps shift is restored at the end.
    pub fn exact_div(&self, divisor: &DiffPoly) -> Option<DiffPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(DiffPoly::zero());
        }
        let shift_a = self.eps_min().unwrap_or(0).min(0);
        let shift_b = divisor.eps_min().unwrap_or(0).min(0);
        let shifted = |p: &DiffPoly, s: i32| -> DiffPoly {
            if s == 0 {
                return p.clone();
            }
            DiffPoly {
                terms: p
                    .terms
                    .iter()
                    .map(|(m, c)| {
                        let mut m2 = m.clone();
                        m2.eps -= s;
                        (m2, c.clone())
                    })
                    .collect(),
            }
        };
        let mut rem = shifted(self, shift_a);
        let div = shifted(divisor, shift_b);
        let (dm, dc) = div.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut quot = DiffPoly::zero();
        while !rem.is_zero() {
            let (lm, lc) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
            let qm = lm.try_div(&dm)?;
            if qm.eps < 0 {
                return None;
            }
            let qc = lc / &dc;
            let qterm = DiffPoly::monomial(qm, qc);
            rem = rem.sub(&qterm.mul(&div));
            quot.add_assign(&qterm);
        }
        Some(shifted(&quot, shift_b - shift_a))
    }
}

/// Canonical printing order: graded lexicographic by (field, order),
/// then eps, then lam, then p.
fn display_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let deg = |m: &Monomial| m.total_jet_degree() + m.lam as usize + m.p as usize;
    deg(b)
        .cmp(&deg(a))
        .then_with(|| {
            let ja: Vec<_> = a.jets.iter().collect();
            let jb: Vec<_> = b.jets.iter().collect();
            ja.cmp(&jb)
        })
        .then_with(|| a.eps.cmp(&b.eps))
        .then_with(|| a.lam.cmp(&b.lam))
        .then_with(|| a.p.cmp(&b.p))
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(format_rat(&mag));
            }
            for &(k, e) in &m.jets {
                let base = if jet_order(k) == 0 {
                    format!("w{}", jet_field(k) + 1)
                } else {
                    format!("w{}_({})", jet_field(k) + 1, jet_order(k))
                };
                factors.push(if e == 1 { base } else { format!("{base}^{e}") });
            }
            if m.eps != 0 {
                factors.push(if m.eps == 1 {
                    "eps".into()
                } else {
                    format!("eps^{}", m.eps)
                });
            }
            if m.lam > 0 {
                factors.push(if m.lam == 1 {
                    "lam".into()
                } else {
                    format!("lam^{}", m.lam)
                });
            }
            if m.p > 0 {
                factors.push(if m.p == 1 {
                    "p".into()
                } else {
                    format!("p^{}", m.p)
                });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Parses a polynomial in a single scalar field named `u` (field index 0):
/// sums of terms like `3`, `-1/2*u^2`, `u`. Used by the `scalar:c=...`
/// pencil descriptor.
pub fn parse_upoly(input: &str) -> Result<DiffPoly> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = DiffPoly::zero();
    let mut rest = s.as_str();
    let mut sign = Rat::one();
    if let Some(r) = rest.strip_prefix('-') {
        sign = -sign;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    while !rest.is_empty() {
        let end = rest
            .char_indices()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let term = &rest[..end];
        out.add_assign(&parse_uterm(term)?.scale(&sign));
        if end == rest.len() {
            break;
        }
        sign = if rest.as_bytes()[end] == b'-' {
            -Rat::one()
        } else {
            Rat::one()
        };
        rest = &rest[end + 1..];
    }
    Ok(out)
}

fn parse_uterm(term: &str) -> Result<DiffPoly> {
    let mut coeff = Rat::one();
    let mut upow = 0u32;
    for factor in term.split('*') {
        if let Some(pow) = factor.strip_prefix('u') {
            if pow.is_empty() {
                upow += 1;
            } else {
                let e: u32 = pow
                    .strip_prefix('^')
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad factor '{factor}'")))?;
                upow += e;
            }
        } else {
            coeff *= crate::rational::parse_rat(factor)?;
        }
    }
    let mut m = Monomial::one();
    for _ in 0..upow {
        m = m.mul(&Monomial::jet(0, 0));
    }
    Ok(DiffPoly::monomial(m, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn w(i: usize, s: usize) -> DiffPoly {
        DiffPoly::var(i, s)
    }

    #[test]
    fn total_derivative_of_field_is_first_jet() {
        // w1 -> w1_x
        assert_eq!(w(0, 0).total_derivative(), w(0, 1));
    }

    #[test]
    fn total_derivative_leibniz_square() {
        // (w1)^2 -> 2 w1 w1_x
        let sq = w(0, 0).mul(&w(0, 0));
        assert_eq!(sq.total_derivative(), w(0, 0).mul(&w(0, 1)).scale(&rint(2)));
    }

    #[test]
    fn total_derivative_with_eps_and_product() {
        // eps^-1 w2 w3_x -> eps^-1 (w2_x w3_x + w2 w3_xx)
        let f = DiffPoly::eps(-1).mul(&w(1, 0)).mul(&w(2, 1));
        let expect = DiffPoly::eps(-1)
            .mul(&w(1, 1).mul(&w(2, 1)).add(&w(1, 0).mul(&w(2, 2))));
        assert_eq!(f.total_derivative(), expect);
    }

    #[test]
    fn diff_degree_grading() {
        let f = w(0, 2).mul(&w(1, 1)); // degree 3
        assert!(f.is_homogeneous_diff_degree(3));
        assert_eq!(f.total_derivative().max_diff_degree(), 4);
        assert!(f.total_derivative().is_homogeneous_diff_degree(4));
    }

    #[test]
    fn exact_division_round_trip() {
        let a = w(0, 0).add(&DiffPoly::lam()).mul(&w(1, 0).sub(&DiffPoly::from_int(3)));
        let b = w(0, 0).add(&DiffPoly::lam());
        let q = a.exact_div(&b).unwrap();
        assert_eq!(q, w(1, 0).sub(&DiffPoly::from_int(3)));
        assert!(a.add(&DiffPoly::one()).exact_div(&b).is_none());
    }

    #[test]
    fn exact_division_with_eps_shift() {
        let a = DiffPoly::eps(-2).mul(&w(0, 0)).add(&DiffPoly::eps(-1));
        let b = DiffPoly::eps(-1);
        let q = a.exact_div(&b).unwrap();
        assert_eq!(q, DiffPoly::eps(-1).mul(&w(0, 0)).add(&DiffPoly::one()));
    }

    #[test]
    fn subst_field_const_kills_derivatives() {
        let f = w(1, 0).mul(&w(0, 0)).add(&w(1, 1)).add(&w(0, 0));
        let g = f.subst_field_const(1, &rint(0));
        assert_eq!(g, w(0, 0));
        let h = f.subst_field_const(1, &rat(1, 2));
        assert_eq!(h, w(0, 0).scale(&rat(3, 2)));
    }

    #[test]
    fn parse_upoly_samples() {
        assert_eq!(parse_upoly("u").unwrap(), w(0, 0));
        assert_eq!(parse_upoly("1").unwrap(), DiffPoly::one());
        assert_eq!(
            parse_upoly("3*u^2-1/2").unwrap(),
            w(0, 0).pow(2).scale(&rint(3)).sub(&DiffPoly::constant(rat(1, 2)))
        );
    }
}
