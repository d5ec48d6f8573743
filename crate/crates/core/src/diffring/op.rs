//! Scalar differential operators `sum_m a_m d_x^m` in normal form
//! (all derivative powers to the right of coefficients).

use super::poly::DiffPoly;
use crate::rational::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Default, PartialEq)]
pub struct DiffOp {
    /// derivative order -> coefficient, no zero coefficients stored
    coeffs: BTreeMap<usize, DiffPoly>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp::default()
    }

    /// Multiplication operator by a differential polynomial.
    pub fn mult(f: DiffPoly) -> Self {
        let mut coeffs = BTreeMap::new();
        if !f.is_zero() {
            coeffs.insert(0, f);
        }
        DiffOp { coeffs }
    }

    pub fn one() -> Self {
        DiffOp::mult(DiffPoly::one())
    }

    /// `d_x^m`.
    pub fn dx(m: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(m, DiffPoly::one());
        DiffOp { coeffs }
    }

    /// `f * d_x^m`.
    pub fn term(f: DiffPoly, m: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        if !f.is_zero() {
            coeffs.insert(m, f);
        }
        DiffOp { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, m: usize) -> DiffPoly {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &DiffPoly)> {
        self.coeffs.iter().map(|(&m, f)| (m, f))
    }

    fn insert(&mut self, m: usize, f: DiffPoly) {
        if f.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(m) {
            Entry::Occupied(mut e) => {
                let v = e.get().add(&f);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(f);
            }
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (&m, f) in &other.coeffs {
            out.insert(m, f.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (&m, f) in &other.coeffs {
            out.insert(m, f.neg());
        }
        out
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            coeffs: self.coeffs.iter().map(|(&m, f)| (m, f.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> DiffOp {
        if c.is_zero() {
            return DiffOp::zero();
        }
        DiffOp {
            coeffs: self.coeffs.iter().map(|(&m, f)| (m, f.scale(c))).collect(),
        }
    }

    /// Left multiplication by a polynomial.
    pub fn scale_poly(&self, f: &DiffPoly) -> DiffOp {
        let mut out = DiffOp::zero();
        for (&m, a) in &self.coeffs {
            out.insert(m, f.mul(a));
        }
        out
    }

    /// Operator composition with the Leibniz expansion
    /// `d^m o b = sum_j C(m,j) b^(j) d^(m-j)`.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero();
        for (&m, a) in &self.coeffs {
            for (&k, b) in &other.coeffs {
                let mut bj = b.clone();
                for j in 0..=m {
                    let binom = binomial(m, j);
                    out.insert(m - j + k, a.mul(&bj).scale(&binom));
                    if j < m {
                        bj = bj.total_derivative();
                    }
                }
            }
        }
        out
    }

    /// Formal adjoint `sum (-d)^m o a_m`, expanded to normal form.
    pub fn adjoint(&self) -> DiffOp {
        let mut out = DiffOp::zero();
        for (&m, a) in &self.coeffs {
            let sign = if m % 2 == 0 { Rat::one() } else { -Rat::one() };
            let mut aj = a.clone();
            for j in 0..=m {
                let c = binomial(m, j) * &sign;
                out.insert(m - j, aj.scale(&c));
                if j < m {
                    aj = aj.total_derivative();
                }
            }
        }
        out
    }

    /// Applies the operator to a differential polynomial.
    pub fn apply(&self, f: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (&m, a) in &self.coeffs {
            out.add_assign(&a.mul(&f.total_derivative_n(m)));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> DiffOp {
        let mut out = DiffOp::zero();
        for (&m, a) in &self.coeffs {
            out.insert(m, f(a));
        }
        out
    }

    pub fn eps_min(&self) -> Option<i32> {
        self.coeffs.values().filter_map(|f| f.eps_min()).min()
    }

    pub fn lam_degree(&self) -> u32 {
        self.coeffs.values().map(|f| f.lam_degree()).max().unwrap_or(0)
    }
}

fn binomial(m: usize, j: usize) -> Rat {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..j {
        num *= BigInt::from(m - t);
        den *= BigInt::from(t + 1);
    }
    Rat::new(num, den)
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (&m, a) in self.coeffs.iter().rev() {
            if m == 0 {
                parts.push(format!("{a}"));
            } else {
                let d = if m == 1 { "d".to_string() } else { format!("d^{m}") };
                if a == &DiffPoly::one() {
                    parts.push(d);
                } else {
                    parts.push(format!("({a})*{d}"));
                }
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn u() -> DiffPoly {
        DiffPoly::var(0, 0)
    }
    fn ux() -> DiffPoly {
        DiffPoly::var(0, 1)
    }

    #[test]
    fn compose_d_with_multiplication() {
        // d o u = u d + u_x
        let got = DiffOp::dx(1).compose(&DiffOp::mult(u()));
        let expect = DiffOp::term(u(), 1).add(&DiffOp::mult(ux()));
        assert_eq!(got, expect);
    }

    #[test]
    fn compose_d_with_d() {
        assert_eq!(DiffOp::dx(1).compose(&DiffOp::dx(1)), DiffOp::dx(2));
    }

    #[test]
    fn compose_constant_scaling() {
        // (-2d) o (eps/2) = -eps d
        let got = DiffOp::dx(1)
            .scale(&rint(-2))
            .compose(&DiffOp::mult(DiffPoly::eps(1).scale(&rat(1, 2))));
        assert_eq!(got, DiffOp::term(DiffPoly::eps(1).neg(), 1));
    }

    #[test]
    fn compose_associative_small() {
        let a = DiffOp::term(u(), 1).add(&DiffOp::mult(ux()));
        let b = DiffOp::dx(2).add(&DiffOp::mult(u().mul(&u())));
        let c = DiffOp::term(ux(), 3).add(&DiffOp::dx(1));
        assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn adjoint_of_first_order() {
        // (u d)* = -u d - u_x
        let got = DiffOp::term(u(), 1).adjoint();
        let expect = DiffOp::term(u().neg(), 1).sub(&DiffOp::mult(ux()));
        assert_eq!(got, expect);
    }

    #[test]
    fn adjoint_of_odd_power() {
        assert_eq!(DiffOp::dx(3).adjoint(), DiffOp::dx(3).neg());
    }

    #[test]
    fn adjoint_involutive_and_antihom() {
        let p = DiffOp::term(u(), 2).add(&DiffOp::mult(ux()));
        let q = DiffOp::term(ux(), 1).add(&DiffOp::dx(3));
        assert_eq!(p.adjoint().adjoint(), p);
        assert_eq!(
            p.compose(&q).adjoint(),
            q.adjoint().compose(&p.adjoint())
        );
    }

    #[test]
    fn kdv_second_bracket_is_skew() {
        // -2u d - u_x + 1/2 eps^2 d^3; adjoint equals its negative
        let op = DiffOp::term(u().scale(&rint(-2)), 1)
            .sub(&DiffOp::mult(ux()))
            .add(&DiffOp::term(DiffPoly::eps(2).scale(&rat(1, 2)), 3));
        assert_eq!(op.adjoint(), op.neg());
    }
}
