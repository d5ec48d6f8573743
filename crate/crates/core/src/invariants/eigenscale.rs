//! Numeric eigenvalue-scaling check for `Lambda_lam = I - lam E_theta`:
//! the adjoint spectrum of `ad Lambda_lam` is the `lam^(1/h)`-scaled
//! spectrum of `ad Lambda_1`, with exactly `rank` zero modes.
//!
//! The characteristic polynomial of the adjoint matrix is computed exactly
//! over the rationals; only the root extraction is numeric.

use super::symbol::bareiss_det;
use crate::algebra::LieAlg;
use crate::diffring::DiffPoly;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::numeric::polyroots::{complex_roots, C64};
use crate::rational::Rat;
use num_traits::Zero;

pub struct EigenScaleSample {
    pub lambda: Rat,
    pub hausdorff: f64,
    pub zero_modes: usize,
}

pub struct EigenScaleReport {
    pub samples: Vec<EigenScaleSample>,
    pub tol: f64,
}

impl EigenScaleReport {
    pub fn passes(&self, rank: usize) -> bool {
        self.samples
            .iter()
            .all(|s| s.hausdorff < self.tol && s.zero_modes == rank)
    }
}

/// Exact characteristic polynomial of a rational matrix, as coefficients of
/// ascending powers of the eigenvalue variable.
fn char_poly_coeffs(m: &QMatrix) -> Vec<Rat> {
    let n = m.rows;
    let entries: Vec<DiffPoly> = (0..n * n)
        .map(|t| {
            let (i, j) = (t / n, t % n);
            let mut e = DiffPoly::constant(-m.get(i, j).clone());
            if i == j {
                e.add_assign(&DiffPoly::lam());
            }
            e
        })
        .collect();
    let det = bareiss_det(&entries, n);
    let mut out = vec![Rat::zero(); det.lam_degree() as usize + 1];
    for (mono, c) in det.terms() {
        out[mono.lam as usize] += c;
    }
    out
}

/// Nonzero spectrum plus the exact count of zero eigenvalues.
fn spectrum(m: &QMatrix) -> (Vec<C64>, usize) {
    let mut coeffs = char_poly_coeffs(m);
    let mut zeros = 0usize;
    while coeffs.first().is_some_and(Zero::is_zero) && coeffs.len() > 1 {
        coeffs.remove(0);
        zeros += 1;
    }
    let roots = complex_roots(&coeffs);
    (roots, zeros)
}

pub fn eigen_scaling_check(alg: &LieAlg, lambdas: &[Rat], tol: f64) -> Result<EigenScaleReport> {
    let i_vec = alg.principal_nilpotent();
    let e_theta = &alg.e_theta;
    let ad_at = |lam: &Rat| -> QMatrix {
        let v: Vec<Rat> = i_vec
            .iter()
            .zip(e_theta)
            .map(|(a, b)| a - lam * b)
            .collect();
        alg.ad(&v)
    };
    let (base, base_zeros) = spectrum(&ad_at(&Rat::from_integer(1.into())));
    if base_zeros != alg.rank {
        return Err(Error::Integrity(format!(
            "ad Lambda_1 has {base_zeros} zero modes, expected the rank {}",
            alg.rank
        )));
    }
    let h = alg.coxeter as f64;
    let mut samples = Vec::new();
    for lam in lambdas {
        let (eigs, zero_modes) = spectrum(&ad_at(lam));
        let lam_f = crate::rational::rat_to_f64(lam);
        let scale = lam_f.powf(1.0 / h);
        let scaled: Vec<C64> = base.iter().map(|e| e.scale(scale)).collect();
        let hausdorff = hausdorff_distance(&eigs, &scaled);
        samples.push(EigenScaleSample {
            lambda: lam.clone(),
            hausdorff,
            zero_modes,
        });
    }
    Ok(EigenScaleReport { samples, tol })
}

fn hausdorff_distance(a: &[C64], b: &[C64]) -> f64 {
    let one_sided = |x: &[C64], y: &[C64]| -> f64 {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| p.sub(*q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Series};
    use crate::rational::rint;

    #[test]
    fn a1_scaling_at_lambda_four() {
        // h = 2: eigenvalues of ad Lambda_4 are 2x those of ad Lambda_1
        let alg = build_algebra(Series::A, 1).unwrap();
        let rep = eigen_scaling_check(&alg, &[rint(4)], 1e-8).unwrap();
        assert!(rep.passes(1));
    }

    #[test]
    fn a2_trivial_identity_at_lambda_one() {
        let alg = build_algebra(Series::A, 2).unwrap();
        let rep = eigen_scaling_check(&alg, &[rint(1)], 1e-8).unwrap();
        assert!(rep.passes(2));
    }

    #[test]
    fn b2_scaling_with_two_zero_modes() {
        let alg = build_algebra(Series::B, 2).unwrap();
        let rep = eigen_scaling_check(&alg, &[rint(2), rint(3)], 1e-8).unwrap();
        assert!(rep.passes(2));
    }
}
