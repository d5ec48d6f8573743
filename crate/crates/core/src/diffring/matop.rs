//! Matrices of differential operators and the bracket-class grading check.

use super::op::DiffOp;
use crate::error::{Error, Result};
use crate::rational::Rat;
use std::collections::BTreeMap;
use std::fmt;

/// Rectangular matrix of differential operators.
#[derive(Clone, PartialEq)]
pub struct MatDiffOp {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<DiffOp>,
}

impl MatDiffOp {
    pub fn zero(rows: usize, cols: usize) -> Self {
        MatDiffOp {
            rows,
            cols,
            entries: vec![DiffOp::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, DiffOp::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> DiffOp) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &DiffOp {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: DiffOp) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &MatDiffOp) -> MatDiffOp {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatDiffOp::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).add(other.get(i, j))
        })
    }

    pub fn sub(&self, other: &MatDiffOp) -> MatDiffOp {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatDiffOp::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).sub(other.get(i, j))
        })
    }

    pub fn neg(&self) -> MatDiffOp {
        self.map(|e| e.neg())
    }

    pub fn scale(&self, c: &Rat) -> MatDiffOp {
        self.map(|e| e.scale(c))
    }

    pub fn map(&self, f: impl Fn(&DiffOp) -> DiffOp) -> MatDiffOp {
        MatDiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Matrix product with operator composition.
    pub fn compose(&self, other: &MatDiffOp) -> MatDiffOp {
        assert_eq!(self.cols, other.rows);
        MatDiffOp::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = DiffOp::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.compose(b));
                }
            }
            acc
        })
    }

    /// Entrywise adjoint of the transpose: result (i,j) = (self (j,i))^*.
    pub fn adjoint_transpose(&self) -> MatDiffOp {
        MatDiffOp::from_fn(self.cols, self.rows, |i, j| self.get(j, i).adjoint())
    }

    /// None if skew-adjoint, otherwise a witness pair.
    pub fn skew_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in i..self.cols {
                if self.get(j, i) != &self.get(i, j).adjoint().neg() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn require_skew(&self) -> Result<()> {
        match self.skew_violation() {
            None => Ok(()),
            Some((i, j)) => Err(Error::NotSkewAdjoint { i, j }),
        }
    }

    pub fn lam_degree(&self) -> u32 {
        self.entries.iter().map(|e| e.lam_degree()).max().unwrap_or(0)
    }

    /// `P_2` part of a pencil `P_lam = P_2 - lam P_1`.
    pub fn at_lambda_zero(&self) -> MatDiffOp {
        self.map(|e| e.map_coeffs(|f| f.coeff_lam(0)))
    }

    /// `P_1` part of a lambda-linear pencil.
    pub fn lambda_linear_part(&self) -> MatDiffOp {
        self.map(|e| e.map_coeffs(|f| f.coeff_lam(1).neg()))
    }

    pub fn subst_lam(&self, value: &Rat) -> MatDiffOp {
        self.map(|e| e.map_coeffs(|f| f.subst_lam(value)))
    }

    /// Pins eliminated fields to constants; their derivatives vanish.
    pub fn subst_fields(&self, values: &BTreeMap<usize, Rat>) -> MatDiffOp {
        self.map(|e| e.map_coeffs(|f| f.subst_fields(values)))
    }

    pub fn eps_min(&self) -> Option<i32> {
        self.entries.iter().filter_map(|e| e.eps_min()).min()
    }

    /// Checks the bracket-class template: every term of every entry sits at
    /// `eps^k (degree-l coefficient) d^(k-l+1)` with `k >= -1` and
    /// `0 <= l <= k+1`. Returns a violation witness otherwise.
    pub fn grading_violation(&self) -> Option<(usize, usize, String)> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (m, coeff) in self.get(i, j).coeffs() {
                    for (mono, _) in coeff.terms() {
                        let k = mono.eps;
                        let l = mono.diff_degree() as i64;
                        if k < -1 {
                            return Some((i, j, format!("eps power {k} below -1")));
                        }
                        if l > (k + 1) as i64 {
                            return Some((
                                i,
                                j,
                                format!("coefficient degree {l} exceeds k+1 = {}", k + 1),
                            ));
                        }
                        if m as i64 != (k + 1) as i64 - l {
                            return Some((
                                i,
                                j,
                                format!(
                                    "derivative order {m} differs from k-l+1 = {}",
                                    (k + 1) as i64 - l
                                ),
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn grading_check(&self) -> bool {
        self.grading_violation().is_none()
    }

    pub fn require_grading(&self) -> Result<()> {
        match self.grading_violation() {
            None => Ok(()),
            Some((i, j, detail)) => Err(Error::Grading { i, j, detail }),
        }
    }
}

impl fmt::Debug for MatDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(",  "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::poly::DiffPoly;
    use crate::rational::{rat, rint};

    #[test]
    fn grading_accepts_kdv_bracket() {
        // -u_x - 2u d + 1/2 eps^2 d^3 (with -2 lam d folded in)
        let u = DiffPoly::var(0, 0);
        let op = DiffOp::mult(DiffPoly::var(0, 1).neg())
            .add(&DiffOp::term(
                u.scale(&rint(-2)).add(&DiffPoly::lam().scale(&rint(2))),
                1,
            ))
            .add(&DiffOp::term(DiffPoly::eps(2).scale(&rat(1, 2)), 3));
        let mut m = MatDiffOp::zero(1, 1);
        m.set(0, 0, op);
        assert!(m.grading_check());
        assert!(m.skew_violation().is_none());
    }

    #[test]
    fn grading_rejects_wrong_eps_weight() {
        // eps * f(w) * d with deg f = 0 forces l = 1 but deg = 0
        let mut m = MatDiffOp::zero(1, 1);
        m.set(0, 0, DiffOp::term(DiffPoly::eps(1).mul(&DiffPoly::var(0, 0)), 1));
        let (_, _, detail) = m.grading_violation().unwrap();
        assert!(detail.contains("derivative order"));
    }

    #[test]
    fn grading_rejects_eps_below_minus_one() {
        let mut m = MatDiffOp::zero(1, 1);
        m.set(0, 0, DiffOp::mult(DiffPoly::eps(-2)));
        assert!(!m.grading_check());
    }
}
