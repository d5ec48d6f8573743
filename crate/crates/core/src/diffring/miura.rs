//! Miura transformations: operator transport `L* o P o L` and
//! order-by-order inversion of the change of fields in the eps grading.

use super::evolution::frechet;
use super::matop::MatDiffOp;
use super::poly::DiffPoly;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{rat, Rat};
use num_traits::Zero;

/// Change of fields `w -> wt`, with `wt^i = F^i_0(w) + sum_k eps^k F^i_k`,
/// `deg F^i_k = k`. `exprs[i]` is the full series for `wt^i`.
#[derive(Clone, Debug)]
pub struct MiuraMap {
    pub exprs: Vec<DiffPoly>,
    /// eps truncation order used for inversion
    pub order: usize,
}

/// Result of transporting an operator through a Miura map.
pub struct MiuraApplied {
    pub operator: MatDiffOp,
    /// true when the re-expression in the new fields terminated exactly
    /// below the truncation order
    pub exact: bool,
    pub truncation_order: usize,
}

impl MiuraMap {
    pub fn new(exprs: Vec<DiffPoly>, order: usize) -> Result<Self> {
        let m = MiuraMap { exprs, order };
        m.validate()?;
        Ok(m)
    }

    pub fn n_fields(&self) -> usize {
        self.exprs.len()
    }

    /// Checks the degree grading of each eps level and the invertibility of
    /// the leading jacobian at a fixed rational sample point.
    pub fn validate(&self) -> Result<()> {
        for (i, f) in self.exprs.iter().enumerate() {
            for k in f.eps_min().unwrap_or(0)..=f.eps_max().unwrap_or(0) {
                let part = f.coeff_eps(k);
                if part.is_zero() {
                    continue;
                }
                if k < 0 {
                    return Err(Error::Precondition(format!(
                        "miura expression {i} has negative eps power {k}"
                    )));
                }
                if !part.is_homogeneous_diff_degree(k as usize) {
                    return Err(Error::Precondition(format!(
                        "miura expression {i}: eps^{k} part must have differential degree {k}"
                    )));
                }
            }
        }
        let n = self.n_fields();
        let jac = self.leading_jacobian_at(&sample_point(n))?;
        if jac.det().is_zero() {
            return Err(Error::Precondition(
                "miura leading jacobian det(dF0/dw) vanishes at the probe point".into(),
            ));
        }
        Ok(())
    }

    fn leading_jacobian_at(&self, point: &[Rat]) -> Result<QMatrix> {
        let n = self.n_fields();
        Ok(QMatrix::from_fn(n, n, |i, j| {
            self.exprs[i]
                .coeff_eps(0)
                .partial_jet(j, 0)
                .eval(&|f, s| if s == 0 { point[f].clone() } else { Rat::zero() },
                      &Rat::zero(), &Rat::zero(), &Rat::zero())
        }))
    }

    /// Inverts the map order by order in eps: returns expressions for the
    /// old fields in terms of the new ones, exact modulo `eps^(order+1)`,
    /// plus a flag telling whether the inversion terminated exactly.
    ///
    /// Only maps whose leading part `F_0` is affine-linear are inverted; the
    /// general diffeomorphism case has no polynomial inverse.
    pub fn invert(&self) -> Result<(Vec<DiffPoly>, bool)> {
        let n = self.n_fields();
        // F0 = T w + t, require linear
        let mut t0 = vec![Rat::zero(); n];
        let mut tmat = QMatrix::zero(n, n);
        for i in 0..n {
            let f0 = self.exprs[i].coeff_eps(0);
            for (mono, c) in f0.terms() {
                if mono.lam > 0 || mono.p > 0 {
                    return Err(Error::Precondition(
                        "miura leading part must not involve lam or p".into(),
                    ));
                }
                match mono.total_jet_degree() {
                    0 => t0[i] = c.clone(),
                    1 => {
                        let (k, _) = mono.jets[0];
                        if super::poly::jet_order(k) != 0 {
                            return Err(Error::Precondition(
                                "miura leading part must be derivative-free".into(),
                            ));
                        }
                        tmat.set(i, super::poly::jet_field(k), c.clone());
                    }
                    _ => {
                        return Err(Error::Precondition(
                            "nonlinear leading parts are not invertible here; compose with a \
                             linear change of fields first"
                                .into(),
                        ))
                    }
                }
            }
        }
        let tinv = tmat
            .inverse()
            .ok_or_else(|| Error::Precondition("miura leading matrix is singular".into()))?;

        // tails_i = F^i - F^i_0  (all eps >= 1)
        let tails: Vec<DiffPoly> = (0..n)
            .map(|i| self.exprs[i].sub(&self.exprs[i].coeff_eps(0)))
            .collect();

        // fixed point: w = T^-1 (wt - t0 - tails(w)), iterated in eps order
        let base: Vec<DiffPoly> = (0..n)
            .map(|i| {
                let mut e = DiffPoly::zero();
                for j in 0..n {
                    e.add_assign(&DiffPoly::var(j, 0).scale(tinv.get(i, j)));
                }
                let shift: Rat = (0..n).map(|j| tinv.get(i, j) * &t0[j]).sum();
                e.sub(&DiffPoly::constant(shift))
            })
            .collect();

        let mut current = base.clone();
        let mut exact = false;
        for _ in 0..=self.order {
            let mut next = Vec::with_capacity(n);
            for i in 0..n {
                let mut corr = DiffPoly::zero();
                for j in 0..n {
                    corr.add_assign(&tails[j].subst_jet_exprs(&current).scale(tinv.get(i, j)));
                }
                next.push(base[i].sub(&corr).eps_truncate(self.order as i32));
            }
            if next == current {
                exact = true;
                break;
            }
            current = next;
        }
        // exactness additionally requires that nothing was cut by truncation
        if exact {
            for i in 0..n {
                let mut corr = DiffPoly::zero();
                for j in 0..n {
                    corr.add_assign(&tails[j].subst_jet_exprs(&current).scale(tinv.get(i, j)));
                }
                let untruncated = base[i].sub(&corr);
                if untruncated.eps_max().unwrap_or(0) > self.order as i32 {
                    exact = false;
                }
            }
        }
        Ok((current, exact))
    }
}

fn sample_point(n: usize) -> Vec<Rat> {
    (0..n).map(|i| rat(2 * i as i64 + 3, 7)).collect()
}

/// Transports `P` through the Miura map: computes `L* o P o L^T`, then
/// re-expresses all coefficients in the new fields, truncating at
/// `eps^order`.
pub fn miura_apply(p: &MatDiffOp, map: &MiuraMap, order: usize) -> Result<MiuraApplied> {
    let map = MiuraMap {
        exprs: map.exprs.clone(),
        order,
    };
    let n = map.n_fields();
    assert_eq!(p.rows, n);
    let lstar = frechet(&map.exprs, n);
    // L^j_s = sum_s (-d)^s o dF^j/dw^s_(s) = ((L*)^j_s)^*, entering as the
    // right factor with transposed indices
    let l_transpose = MatDiffOp::from_fn(n, n, |s, j| lstar.get(j, s).adjoint());
    let transported = lstar.compose(p).compose(&l_transpose);
    let (inverse_exprs, exact) = map.invert()?;
    let reexpressed = transported.map(|e| {
        e.map_coeffs(|f| f.subst_jet_exprs(&inverse_exprs).eps_truncate(order as i32))
    });
    Ok(MiuraApplied {
        operator: reexpressed,
        exact,
        truncation_order: order,
    })
}
