//! Canonical coordinates, the diagonal metric coefficients, and the central
//! invariants `c_i = lambda^i_2 / (3 f^i)`.

use super::charpoly::char_poly;
use super::hydro::{hydro_limit, HydroData};
use super::roots::{lambda_roots, rational_roots, NumValue};
use super::symbol::{bareiss_det, symbol_matrix};
use crate::algebra::LieAlg;
use crate::diffring::{DiffPoly, MatDiffOp};
use crate::error::{Error, Result};
use crate::numeric::PointSampler;
use crate::rational::{rat_to_f64, Rat};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Canonical data at a point: the root `u^i` of `det(g2 - lam g1)` and the
/// diagonal metric value `f^i = (du^i, du^i)_{g1}`.
pub fn canonical_data(h: &HydroData, w0: &[Rat]) -> Result<Vec<(NumValue, NumValue)>> {
    let n = h.n;
    // F(lam) = det(g2 - lam g1), symbolically in the fields
    let pencil_entries: Vec<DiffPoly> = (0..n * n)
        .map(|t| h.g2[t].sub(&DiffPoly::lam().mul(&h.g1[t])))
        .collect();
    let f_pol = bareiss_det(&pencil_entries, n);
    let df_dlam = lam_derivative(&f_pol);
    let df_dw: Vec<DiffPoly> = h.fields.iter().map(|&a| f_pol.partial_jet(a, 0)).collect();
    let values: BTreeMap<usize, Rat> = h.fields.iter().copied().zip(w0.iter().cloned()).collect();
    let f_at = f_pol.subst_fields(&values);
    // roots of F(lam) at the point
    let mut coeffs = vec![Rat::zero(); f_at.lam_degree() as usize + 1];
    for (m, c) in f_at.terms() {
        if !m.jets.is_empty() {
            return Err(Error::Precondition("unassigned fields in metric pencil".into()));
        }
        coeffs[m.lam as usize] += c;
    }
    let (rational, residual) = rational_roots(&coeffs);
    if residual.len() > 1 {
        return Err(Error::Semisimple(
            "irrational canonical coordinates; use the root-expansion pipeline for them".into(),
        ));
    }
    if rational.len() != n {
        return Err(Error::Semisimple(format!(
            "expected {n} canonical roots, found {}",
            rational.len()
        )));
    }
    let eval = |poly: &DiffPoly, lam: &Rat| -> Rat {
        poly.eval(
            &|f, s| {
                if s == 0 {
                    values.get(&f).cloned().unwrap_or_else(Rat::zero)
                } else {
                    Rat::zero()
                }
            },
            &Rat::zero(),
            lam,
            &Rat::zero(),
        )
    };
    let mut out = Vec::with_capacity(n);
    for u in rational {
        let dl = eval(&df_dlam, &u);
        if dl.is_zero() {
            return Err(Error::Semisimple("multiple canonical root".into()));
        }
        // du^i/dw^a = -(d_a F / d_lam F) at lam = u^i
        let grad: Vec<Rat> = df_dw.iter().map(|d| -eval(d, &u) / &dl).collect();
        let mut f_val = Rat::zero();
        for (a, ga) in grad.iter().enumerate() {
            if ga.is_zero() {
                continue;
            }
            for (b, gb) in grad.iter().enumerate() {
                if gb.is_zero() {
                    continue;
                }
                f_val += ga * gb * eval(&h.g1[a * n + b], &Rat::zero());
            }
        }
        if f_val.is_zero() {
            return Err(Error::Semisimple("degenerate diagonal metric value".into()));
        }
        out.push((NumValue::Exact(u), NumValue::Exact(f_val)));
    }
    Ok(out)
}

fn lam_derivative(p: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for d in 1..=p.lam_degree() {
        let coeff = p.coeff_lam(d);
        let mut part = coeff.scale(&Rat::from_integer(BigInt::from(d)));
        for _ in 0..d - 1 {
            part = part.mul(&DiffPoly::lam());
        }
        out.add_assign(&part);
    }
    out
}

/// One root record at one sample point.
#[derive(Clone, Debug)]
pub struct RootRecord {
    pub u: NumValue,
    pub lambda2: NumValue,
    pub f: NumValue,
    pub c: NumValue,
}

#[derive(Clone, Debug)]
pub struct PointRecord {
    pub point: Vec<Rat>,
    pub roots: Vec<RootRecord>,
}

#[derive(Clone, Debug)]
pub struct CentralInvariantReport {
    pub seed: u64,
    pub points: Vec<PointRecord>,
    pub constant: bool,
    /// largest spread of a sorted invariant across the sample points
    pub spread: f64,
    pub predicted: Option<Vec<Rat>>,
}

impl CentralInvariantReport {
    /// The invariants at the first point, sorted ascending.
    pub fn sorted_invariants(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.points[0].roots.iter().map(|r| r.c.to_f64()).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Exact invariants when every record stayed rational.
    pub fn exact_invariants(&self) -> Option<Vec<Rat>> {
        let mut v: Vec<Rat> = self.points[0]
            .roots
            .iter()
            .map(|r| r.c.as_exact().cloned())
            .collect::<Option<_>>()?;
        v.sort();
        Some(v)
    }
}

/// Full pipeline: symbol, characteristic polynomial, root expansions, and
/// canonical data at seeded sample points.
pub fn central_invariants(
    operator: &MatDiffOp,
    fields: &[usize],
    predicted: Option<Vec<Rat>>,
    n_points: usize,
    order: usize,
    seed: u64,
    tol: f64,
) -> Result<CentralInvariantReport> {
    let hydro = hydro_limit(operator, fields)?;
    let sym = symbol_matrix(operator, None)?;
    let cp = char_poly(&sym);
    let mut sampler = PointSampler::new(seed);
    let n = fields.len();
    let mut points: Vec<PointRecord> = Vec::new();
    let mut tries = 0;
    while points.len() < n_points {
        tries += 1;
        if tries > 100 * n_points {
            return Err(Error::Semisimple(
                "could not find enough semisimple sample points".into(),
            ));
        }
        let w0 = sampler.point(n);
        let Ok(expansion) = lambda_roots(&cp, fields, &w0, order.max(2), 1e-25) else {
            continue;
        };
        let Ok(canonical) = canonical_data(&hydro, &w0) else {
            continue;
        };
        if expansion.roots.len() != canonical.len() {
            continue;
        }
        // pair the expansion branches with the canonical roots by value
        let mut roots = Vec::new();
        let mut used = vec![false; canonical.len()];
        let mut ok = true;
        for r in &expansion.roots {
            let ru = r.coeffs[0].to_f64();
            let m = canonical
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .min_by(|(_, a), (_, b)| {
                    (a.0.to_f64() - ru)
                        .abs()
                        .total_cmp(&(b.0.to_f64() - ru).abs())
                });
            let Some((k, (u_c, f_c))) = m else {
                ok = false;
                break;
            };
            if (u_c.to_f64() - ru).abs() > 1e-9 * (1.0 + ru.abs()) {
                ok = false;
                break;
            }
            used[k] = true;
            let lambda2 = r.coeffs[2].clone();
            let c = match (&lambda2, f_c) {
                (NumValue::Exact(l2), NumValue::Exact(fv)) => {
                    NumValue::Exact(l2 / (Rat::from_integer(BigInt::from(3)) * fv))
                }
                _ => NumValue::Approx(lambda2.to_f64() / (3.0 * f_c.to_f64())),
            };
            roots.push(RootRecord {
                u: r.coeffs[0].clone(),
                lambda2,
                f: f_c.clone(),
                c,
            });
        }
        if !ok {
            continue;
        }
        points.push(PointRecord { point: w0, roots });
    }
    // constancy: compare the sorted invariant lists across points
    let sorted_lists: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let mut v: Vec<f64> = p.roots.iter().map(|r| r.c.to_f64()).collect();
            v.sort_by(f64::total_cmp);
            v
        })
        .collect();
    let mut spread = 0f64;
    for list in &sorted_lists[1..] {
        for (a, b) in list.iter().zip(&sorted_lists[0]) {
            spread = spread.max((a - b).abs());
        }
    }
    let constant = spread < tol;
    Ok(CentralInvariantReport {
        seed,
        points,
        constant,
        spread,
        predicted,
    })
}

/// DS prediction: `c_i = <H_i, H_i> / 48` as exact rationals.
pub fn ds_predicted_ci(alg: &LieAlg) -> Vec<Rat> {
    alg.cartan_norms()
        .into_iter()
        .map(|n| n / Rat::from_integer(BigInt::from(48)))
        .collect()
}

/// Convenience: max |c_i - predicted_i| after sorting both.
pub fn prediction_gap(report: &CentralInvariantReport) -> Option<f64> {
    let predicted = report.predicted.as_ref()?;
    let mut pred: Vec<f64> = predicted.iter().map(rat_to_f64).collect();
    pred.sort_by(f64::total_cmp);
    let got = report.sorted_invariants();
    if pred.len() != got.len() {
        return Some(f64::INFINITY);
    }
    Some(
        pred.iter()
            .zip(&got)
            .map(|(a, b)| (a - b).abs())
            .fold(0f64, f64::max),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencils::{builtin, scalar_deformation_pencil};
    use crate::rational::{rat, rint};
    use crate::reduction::dirac_reduce;

    #[test]
    fn kdv_canonical_data() {
        let (p, q) = builtin("kdv").unwrap();
        let red = dirac_reduce(&p, &q, 24).unwrap();
        let h = hydro_limit(&red.operator, &[0]).unwrap();
        let data = canonical_data(&h, &[rat(7, 2)]).unwrap();
        assert_eq!(data.len(), 1);
        assert_eq!(data[0].0.as_exact(), Some(&rat(7, 2)));
        assert_eq!(data[0].1.as_exact(), Some(&rint(-2)));
    }

    #[test]
    fn kdv_central_invariant_is_one_twentyfourth() {
        let (p, q) = builtin("kdv").unwrap();
        let red = dirac_reduce(&p, &q, 24).unwrap();
        let report =
            central_invariants(&red.operator, &[0], None, 5, 4, 31415, 1e-9).unwrap();
        assert!(report.constant);
        assert_eq!(report.exact_invariants(), Some(vec![rat(1, 24)]));
    }

    #[test]
    fn scalar_linear_c_is_not_constant() {
        let p = scalar_deformation_pencil(&DiffPoly::var(0, 0)).unwrap();
        let report = central_invariants(&p.operator, &[0], None, 5, 4, 2718, 1e-9).unwrap();
        assert!(!report.constant);
        // each sample value is u/6
        for pt in &report.points {
            let u = &pt.point[0];
            assert_eq!(pt.roots[0].c.as_exact(), Some(&(u / rint(6))));
        }
    }

    #[test]
    fn scalar_unit_c_is_one_sixth() {
        let p = scalar_deformation_pencil(&DiffPoly::one()).unwrap();
        let report = central_invariants(&p.operator, &[0], None, 5, 4, 99, 1e-9).unwrap();
        assert!(report.constant);
        assert_eq!(report.exact_invariants(), Some(vec![rat(1, 6)]));
    }

    #[test]
    fn predicted_values_for_small_algebras() {
        use crate::algebra::{build_algebra, Series};
        let a1 = build_algebra(Series::A, 1).unwrap();
        assert_eq!(ds_predicted_ci(&a1), vec![rat(1, 24)]);
        let a2 = build_algebra(Series::A, 2).unwrap();
        assert_eq!(ds_predicted_ci(&a2), vec![rat(1, 24), rat(1, 24)]);
        let b2 = build_algebra(Series::B, 2).unwrap();
        let mut v = ds_predicted_ci(&b2);
        v.sort();
        assert_eq!(v, vec![rat(1, 24), rat(1, 12)]);
    }
}
