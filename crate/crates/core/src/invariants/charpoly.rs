//! Characteristic polynomials of pencils and the reduced/unreduced ratio.

use super::symbol::SymbolMatrix;
use crate::diffring::DiffPoly;
use crate::error::{Error, Result};
use crate::rational::Rat;
use num_traits::One;

#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly {
    pub poly: DiffPoly,
    pub lambda_degree: u32,
}

/// Exact determinant of the symbol matrix.
pub fn char_poly(sym: &SymbolMatrix) -> CharPoly {
    let det = sym.det();
    let lambda_degree = det.lam_degree();
    CharPoly {
        poly: det,
        lambda_degree,
    }
}

/// App-level check that the lambda-degree equals the algebra rank.
pub fn lambda_degree_check(c: &CharPoly, alg_rank: usize) -> bool {
    c.lambda_degree as usize == alg_rank
}

/// Exact ratio `F_Q` with `R_Q = F_Q * R_M`, reported as a reduced fraction
/// of polynomials plus flags for lambda-freeness and full constancy.
#[derive(Clone, Debug)]
pub struct CharpolyRatio {
    pub numerator: DiffPoly,
    pub denominator: DiffPoly,
    pub lambda_free: bool,
    pub constant: bool,
}

impl CharpolyRatio {
    pub fn as_rat(&self) -> Option<Rat> {
        let n = self.numerator.as_constant()?;
        let d = self.denominator.as_constant()?;
        Some(n / d)
    }
}

/// Divides the restricted unreduced characteristic polynomial by the
/// reduced one (or conversely), producing `F_Q`.
pub fn charpoly_ratio(rm_on_q: &CharPoly, rq: &CharPoly) -> Result<CharpolyRatio> {
    if let Some(q) = rm_on_q.poly.exact_div(&rq.poly) {
        // R_M = q R_Q, so F_Q = 1/q
        let lambda_free = q.lam_degree() == 0;
        let constant = q.as_constant().is_some();
        return Ok(CharpolyRatio {
            numerator: DiffPoly::constant(Rat::one()),
            denominator: q,
            lambda_free,
            constant,
        });
    }
    if let Some(q) = rq.poly.exact_div(&rm_on_q.poly) {
        let lambda_free = q.lam_degree() == 0;
        let constant = q.as_constant().is_some();
        return Ok(CharpolyRatio {
            numerator: q,
            denominator: DiffPoly::constant(Rat::one()),
            lambda_free,
            constant,
        });
    }
    Err(Error::Division(
        "characteristic polynomials are not related by polynomial division; \
         the factorization theorem would be violated"
            .into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::symbol::symbol_matrix;
    use crate::pencils::builtin;
    use crate::rational::{rat, rint};
    use crate::reduction::dirac_reduce;
    use std::collections::BTreeMap;

    #[test]
    fn sl2_charpoly_on_leaf() {
        // R(p,lam; w1,w2) at w3 = 1: 2p^3 - 8(w1 + 1/4 w2^2 - lam) p
        let (p, _) = builtin("kdv").unwrap();
        let sub = p.operator.subst_fields(&BTreeMap::from([(2usize, rint(1))]));
        let sym = symbol_matrix(&sub, None).unwrap();
        let c = char_poly(&sym);
        let w1 = DiffPoly::var(0, 0);
        let w2 = DiffPoly::var(1, 0);
        let pv = DiffPoly::p_var();
        let expect = pv.pow(3).scale(&rint(2)).sub(
            &w1.add(&w2.pow(2).scale(&rat(1, 4)))
                .sub(&DiffPoly::lam())
                .mul(&pv)
                .scale(&rint(8)),
        );
        assert_eq!(c.poly, expect);
        assert_eq!(c.lambda_degree, 1);
        assert!(lambda_degree_check(&c, 1));
    }

    #[test]
    fn kdv_ratio_is_one_quarter() {
        let (p, q) = builtin("kdv").unwrap();
        let mut fixed = BTreeMap::new();
        for (k, v) in &q.fixed {
            fixed.insert(*k, v.clone());
        }
        let rm = char_poly(&symbol_matrix(&p.operator.subst_fields(&fixed), None).unwrap());
        let red = dirac_reduce(&p, &q, 24).unwrap();
        let rq = char_poly(&symbol_matrix(&red.operator, None).unwrap());
        // reduced fields are renumbered: w1 stays index 0, nothing to remap
        let ratio = charpoly_ratio(&rm, &rq).unwrap();
        assert!(ratio.lambda_free && ratio.constant);
        assert_eq!(ratio.as_rat(), Some(rat(1, 4)));
    }

    #[test]
    fn non_divisible_polynomials_error() {
        let a = CharPoly {
            poly: DiffPoly::p_var().add(&DiffPoly::lam()),
            lambda_degree: 1,
        };
        let b = CharPoly {
            poly: DiffPoly::p_var().add(&DiffPoly::one()),
            lambda_degree: 0,
        };
        assert!(charpoly_ratio(&a, &b).is_err());
    }
}
