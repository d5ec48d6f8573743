//! Dispersionless-limit extraction: the hydrodynamic metrics g and the
//! contravariant Christoffel coefficients.

use crate::diffring::{DiffPoly, MatDiffOp};
use crate::error::{Error, Result};

/// Leading hydrodynamic data of a pencil: `{w^i, w^j}_a = g_a^{ij} delta' +
/// Gamma^{ij}_{k,a} w^k_x delta + O(eps)`.
#[derive(Clone, Debug)]
pub struct HydroData {
    pub n: usize,
    /// field indices the entries refer to (reduced pencils keep their
    /// original field numbering)
    pub fields: Vec<usize>,
    pub g1: Vec<DiffPoly>,
    pub g2: Vec<DiffPoly>,
    pub gamma1: Vec<DiffPoly>,
    pub gamma2: Vec<DiffPoly>,
}

impl HydroData {
    pub fn g1_at(&self, i: usize, j: usize) -> &DiffPoly {
        &self.g1[i * self.n + j]
    }
    pub fn g2_at(&self, i: usize, j: usize) -> &DiffPoly {
        &self.g2[i * self.n + j]
    }
    /// Gamma^{ij}_k for the a-th structure; k indexes `fields`.
    pub fn gamma_at(&self, a: usize, i: usize, j: usize, k: usize) -> &DiffPoly {
        let t = (i * self.n + j) * self.n + k;
        if a == 1 {
            &self.gamma1[t]
        } else {
            &self.gamma2[t]
        }
    }
}

/// Extracts the dispersionless limit; errors when eps^-1 terms are present.
pub fn hydro_limit(p: &MatDiffOp, fields: &[usize]) -> Result<HydroData> {
    let n = p.rows;
    assert_eq!(fields.len(), n);
    for i in 0..n {
        for j in 0..n {
            if let Some(k) = p.get(i, j).eps_min() {
                if k < 0 {
                    return Err(Error::NoDispersionlessLimit(format!(
                        "entry ({},{}) carries eps^{k}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
    }
    let p1 = p.lambda_linear_part();
    let p2 = p.at_lambda_zero();
    let build = |mat: &MatDiffOp| -> (Vec<DiffPoly>, Vec<DiffPoly>) {
        let mut g = Vec::with_capacity(n * n);
        let mut gamma = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let entry = mat.get(i, j);
                // g^{ij} = derivative-free eps^0 coefficient of d^1
                let gij = entry.coeff(1).coeff_eps(0);
                let gij: DiffPoly = gij
                    .terms()
                    .filter(|(m, _)| m.diff_degree() == 0)
                    .fold(DiffPoly::zero(), |mut acc, (m, c)| {
                        acc.add_assign(&DiffPoly::monomial(m.clone(), c.clone()));
                        acc
                    });
                g.push(gij);
                // Gamma^{ij}_k = d/d(w^k_x) of the degree-1 eps^0 d^0 part
                let a01 = entry.coeff(0).coeff_eps(0);
                for &k in fields {
                    gamma.push(a01.partial_jet(k, 1));
                }
            }
        }
        (g, gamma)
    };
    let (g1, gamma1) = build(&p1);
    let (g2, gamma2) = build(&p2);
    Ok(HydroData {
        n,
        fields: fields.to_vec(),
        g1,
        g2,
        gamma1,
        gamma2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencils::{builtin, scalar_deformation_pencil};
    use crate::rational::rint;
    use crate::reduction::dirac_reduce;

    #[test]
    fn kdv_metrics_and_christoffel() {
        let (p, q) = builtin("kdv").unwrap();
        let red = dirac_reduce(&p, &q, 24).unwrap();
        let h = hydro_limit(&red.operator, &[0]).unwrap();
        assert_eq!(h.g1_at(0, 0), &DiffPoly::from_int(-2));
        assert_eq!(h.g2_at(0, 0), &DiffPoly::var(0, 0).scale(&rint(-2)));
        // {u,u}_2 has -u_x delta: Gamma_2 = -1
        assert_eq!(h.gamma_at(2, 0, 0, 0), &DiffPoly::from_int(-1));
        assert_eq!(h.gamma_at(1, 0, 0, 0), &DiffPoly::zero());
    }

    #[test]
    fn scalar_metrics() {
        let p = scalar_deformation_pencil(&DiffPoly::var(0, 0)).unwrap();
        let h = hydro_limit(&p.operator, &[0]).unwrap();
        assert_eq!(h.g1_at(0, 0), &DiffPoly::from_int(2));
        assert_eq!(h.g2_at(0, 0), &DiffPoly::var(0, 0).scale(&rint(2)));
        assert_eq!(h.gamma_at(2, 0, 0, 0), &DiffPoly::from_int(1));
    }

    #[test]
    fn unreduced_ds_pencil_has_no_limit() {
        let (p, _) = builtin("kdv").unwrap();
        let err = hydro_limit(&p.operator, &[0, 1, 2]).unwrap_err();
        assert!(matches!(err, Error::NoDispersionlessLimit(_)));
    }
}
