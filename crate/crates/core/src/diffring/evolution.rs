//! Evolutionary vector fields: prolongation, Frechet derivatives, and Lie
//! derivatives of operator-valued Poisson structures.

use super::matop::MatDiffOp;
use super::op::DiffOp;
use super::poly::DiffPoly;
use std::collections::HashMap;

/// Evolutionary vector field with characteristic `Z^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionaryField {
    pub characteristic: Vec<DiffPoly>,
}

impl EvolutionaryField {
    pub fn new(characteristic: Vec<DiffPoly>) -> Self {
        EvolutionaryField { characteristic }
    }

    pub fn constant(values: &[crate::rational::Rat]) -> Self {
        EvolutionaryField {
            characteristic: values
                .iter()
                .map(|v| DiffPoly::constant(v.clone()))
                .collect(),
        }
    }

    pub fn n_fields(&self) -> usize {
        self.characteristic.len()
    }
}

/// Applies the prolongation `sum_{i,s} (d_x^s Z^i) d/dw^i_(s)` to `f`.
pub fn prolong_apply(z: &EvolutionaryField, f: &DiffPoly) -> DiffPoly {
    let mut cache: HashMap<(usize, usize), DiffPoly> = HashMap::new();
    let mut out = DiffPoly::zero();
    for (field, order) in f.jet_vars() {
        if field >= z.characteristic.len() {
            continue;
        }
        let zi_s = cache
            .entry((field, order))
            .or_insert_with(|| z.characteristic[field].total_derivative_n(order))
            .clone();
        out.add_assign(&zi_s.mul(&f.partial_jet(field, order)));
    }
    out
}

/// Frechet derivative `(L*)^i_k = sum_s (dF^i/dw^k_(s)) d^s` of a vector of
/// differential polynomials in `n` fields.
pub fn frechet(fs: &[DiffPoly], n_fields: usize) -> MatDiffOp {
    MatDiffOp::from_fn(fs.len(), n_fields, |i, k| {
        let mut op = DiffOp::zero();
        let orders: Vec<usize> = fs[i]
            .jet_vars()
            .into_iter()
            .filter(|&(f, _)| f == k)
            .map(|(_, s)| s)
            .collect();
        for s in orders {
            op = op.add(&DiffOp::term(fs[i].partial_jet(k, s), s));
        }
        op
    })
}

/// Lie derivative of an operator matrix along an evolutionary field:
/// `(L_Z P)^{ij} = pr_Z(P^{ij}) - sum_k [ (L*_Z)^i_k o P^{kj} + P^{ik} o ((L*_Z)^j_k)* ]`.
pub fn lie_derivative(z: &EvolutionaryField, p: &MatDiffOp) -> MatDiffOp {
    let lstar = frechet(&z.characteristic, z.n_fields());
    let prolonged = p.map(|e| e.map_coeffs(|f| prolong_apply(z, f)));
    let left = lstar.compose(p);
    let right = p.compose(&lstar.adjoint_transpose());
    prolonged.sub(&left).sub(&right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn w(i: usize, s: usize) -> DiffPoly {
        DiffPoly::var(i, s)
    }

    #[test]
    fn prolong_constant_field_on_coordinate() {
        let z = EvolutionaryField::constant(&[rint(1), rint(0)]);
        assert_eq!(prolong_apply(&z, &w(0, 0)), DiffPoly::one());
        // derivatives of a constant characteristic vanish
        assert_eq!(prolong_apply(&z, &w(0, 1)), DiffPoly::zero());
    }

    #[test]
    fn prolong_is_a_derivation() {
        let z = EvolutionaryField::new(vec![w(0, 0).mul(&w(0, 1))]);
        let f = w(0, 0).pow(2);
        let g = w(0, 1);
        let lhs = prolong_apply(&z, &f.mul(&g));
        let rhs = prolong_apply(&z, &f)
            .mul(&g)
            .add(&f.mul(&prolong_apply(&z, &g)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn prolong_commutes_with_total_derivative() {
        let z = EvolutionaryField::new(vec![w(0, 0).pow(2), w(1, 1)]);
        for f in [w(0, 1).mul(&w(1, 0)), w(0, 0).pow(3), w(1, 2)] {
            let a = prolong_apply(&z, &f.total_derivative());
            let b = prolong_apply(&z, &f).total_derivative();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn frechet_of_identity_and_shift() {
        let l = frechet(&[w(0, 0)], 1);
        assert_eq!(l.get(0, 0), &DiffOp::one());
        // F = w1 + eps w1_x  =>  L* = 1 + eps d
        let f = w(0, 0).add(&DiffPoly::eps(1).mul(&w(0, 1)));
        let l = frechet(&[f], 1);
        assert_eq!(
            l.get(0, 0),
            &DiffOp::one().add(&DiffOp::term(DiffPoly::eps(1), 1))
        );
    }

    #[test]
    fn frechet_kdv_projection_row() {
        // F = w1 + 1/4 (w2)^2 - 1/2 eps w2_x  =>  row (1, 1/2 w2 - 1/2 eps d)
        let f = w(0, 0)
            .add(&w(1, 0).pow(2).scale(&rat(1, 4)))
            .sub(&DiffPoly::eps(1).mul(&w(1, 1)).scale(&rat(1, 2)));
        let l = frechet(&[f], 2);
        assert_eq!(l.get(0, 0), &DiffOp::one());
        assert_eq!(
            l.get(0, 1),
            &DiffOp::mult(w(1, 0).scale(&rat(1, 2)))
                .add(&DiffOp::term(DiffPoly::eps(1).scale(&rat(-1, 2)), 1))
        );
    }

    #[test]
    fn lie_derivative_vanishes_for_zero_field() {
        let z = EvolutionaryField::constant(&[rint(0)]);
        let mut p = MatDiffOp::zero(1, 1);
        p.set(0, 0, DiffOp::term(w(0, 0), 1).add(&DiffOp::dx(3)));
        assert!(lie_derivative(&z, &p).is_zero());
    }

    #[test]
    fn lie_derivative_reduced_kdv_exactness() {
        // L_{Z'=1} (-u_x - 2u d + 1/2 eps^2 d^3) = -2 d
        let z = EvolutionaryField::constant(&[rint(1)]);
        let p2 = {
            let mut m = MatDiffOp::zero(1, 1);
            m.set(
                0,
                0,
                DiffOp::mult(w(0, 1).neg())
                    .add(&DiffOp::term(w(0, 0).scale(&rint(-2)), 1))
                    .add(&DiffOp::term(DiffPoly::eps(2).scale(&rat(1, 2)), 3)),
            );
            m
        };
        let got = lie_derivative(&z, &p2);
        let mut expect = MatDiffOp::zero(1, 1);
        expect.set(0, 0, DiffOp::dx(1).scale(&rint(-2)));
        assert_eq!(got, expect);
    }

    #[test]
    fn lie_derivative_linear_in_scaling() {
        let z = EvolutionaryField::new(vec![w(0, 0)]);
        let mut p = MatDiffOp::zero(1, 1);
        p.set(0, 0, DiffOp::term(w(0, 0), 1).add(&DiffOp::mult(w(0, 1))));
        let c = rat(5, 3);
        assert_eq!(lie_derivative(&z, &p.scale(&c)), lie_derivative(&z, &p).scale(&c));
    }
}
