//! Bi-Hamiltonian (Dirac) reduction on a transversal gauge slice: adapted
//! block decomposition, graded inversion of the D-block, Schur complement,
//! and the determinant factorization checks at the symbol level.

use crate::diffring::{DiffOp, DiffPoly, MatDiffOp};
use crate::error::{Error, Result};
use crate::invariants::symbol::{symbol_matrix, SymbolMatrix};
use crate::linalg::QMatrix;
use crate::pencils::{GaugeSpec, PencilInstance};
use crate::rational::Rat;
use num_traits::{One, Zero};

/// The pencil in coordinates adapted to the slice, with gauge constants
/// substituted everywhere.
pub struct BlockDecomposition {
    pub a_block: MatDiffOp,
    pub b_block: MatDiffOp,
    pub c_block: MatDiffOp,
    pub d_block: MatDiffOp,
    /// permutation: adapted position -> original field index
    pub order: Vec<usize>,
    /// the full substituted pencil in adapted order
    pub substituted: MatDiffOp,
}

#[derive(Clone)]
pub struct ReducedPencil {
    pub operator: MatDiffOp,
    pub source: String,
    pub gauge: GaugeSpec,
    /// termination step of the Neumann series for the D-block inverse
    pub d_inverse_order: usize,
    pub field_names: Vec<String>,
}

pub fn adapted_blocks(p: &PencilInstance, q: &GaugeSpec) -> Result<BlockDecomposition> {
    let n = p.n_fields();
    q.validate(n)?;
    let substituted_full = p.operator.subst_fields(&q.fixed);
    let order: Vec<usize> = q.retained.iter().copied().chain(q.eliminated()).collect();
    let substituted = MatDiffOp::from_fn(n, n, |i, j| {
        substituted_full.get(order[i], order[j]).clone()
    });
    let r = q.retained.len();
    let k = n - r;
    let a_block = MatDiffOp::from_fn(r, r, |i, j| substituted.get(i, j).clone());
    let b_block = MatDiffOp::from_fn(r, k, |i, j| substituted.get(i, r + j).clone());
    let c_block = MatDiffOp::from_fn(k, r, |i, j| substituted.get(r + i, j).clone());
    let d_block = MatDiffOp::from_fn(k, k, |i, j| substituted.get(r + i, r + j).clone());
    Ok(BlockDecomposition {
        a_block,
        b_block,
        c_block,
        d_block,
        order,
        substituted,
    })
}

#[derive(Debug)]
pub struct DInverse {
    pub inverse: MatDiffOp,
    pub order: usize,
}

/// Inverts the D-block by a graded Neumann series around its lowest-eps
/// algebraic part `d0`: `d^-1 = (sum_k (-d0^-1 r)^k) d0^-1` with
/// `r = d - d0`. The series must terminate; composition with `d` is
/// verified exactly before returning.
pub fn invert_d(d: &MatDiffOp, max_order: usize) -> Result<DInverse> {
    let k = d.rows;
    if k == 0 {
        return Ok(DInverse {
            inverse: MatDiffOp::zero(0, 0),
            order: 0,
        });
    }
    let eps_low = d
        .eps_min()
        .ok_or(Error::SingularLeadingBlock)?;
    // d0: derivative-free coefficients at the lowest eps level
    let d0 = MatDiffOp::from_fn(k, k, |i, j| {
        DiffOp::mult(
            DiffPoly::eps(eps_low).mul(&d.get(i, j).coeff(0).coeff_eps(eps_low)),
        )
    });
    let d0_inv = invert_algebraic(&d0, eps_low)?;
    let r = d.sub(&d0);
    let minus_d0inv_r = d0_inv.compose(&r).neg();
    let mut term = d0_inv.clone();
    let mut sum = d0_inv.clone();
    let mut steps = 0usize;
    loop {
        term = minus_d0inv_r.compose(&term);
        if term.is_zero() {
            break;
        }
        steps += 1;
        if steps > max_order {
            return Err(Error::NonTerminatingInverse {
                max_order,
                residual_order: steps,
            });
        }
        sum = sum.add(&term);
    }
    let check = d.compose(&sum);
    if check != MatDiffOp::identity(k) {
        return Err(Error::Integrity(
            "D-block inverse failed the exact composition check".into(),
        ));
    }
    Ok(DInverse {
        inverse: sum,
        order: steps,
    })
}

/// Inverts a derivative-free matrix of homogeneous eps-degree via the exact
/// adjugate. The determinant must be a nonzero constant times a power of
/// eps; field- or lambda-dependent determinants are rejected (for the
/// bracket class at hand they would signal a nontrivial kernel
/// intersection).
fn invert_algebraic(d0: &MatDiffOp, eps_low: i32) -> Result<MatDiffOp> {
    let k = d0.rows;
    // strip eps and the operator wrapper
    let entries: Vec<DiffPoly> = (0..k * k)
        .map(|t| d0.get(t / k, t % k).coeff(0).coeff_eps(eps_low))
        .collect();
    let det = poly_det(&entries, k);
    let det_const = det
        .as_constant()
        .ok_or_else(|| Error::Integrity(
            "leading algebraic block has a non-constant determinant; the graded \
             inversion scheme does not apply"
                .into(),
        ))?;
    if det_const.is_zero() {
        return Err(Error::SingularLeadingBlock);
    }
    let inv_det = det_const.recip();
    // adjugate via (k-1)-minors
    let mut out = MatDiffOp::zero(k, k);
    for i in 0..k {
        for j in 0..k {
            let minor = poly_minor(&entries, k, j, i);
            let sign = if (i + j) % 2 == 0 { Rat::one() } else { -Rat::one() };
            let val = minor.scale(&(sign * &inv_det));
            out.set(
                i,
                j,
                DiffOp::mult(DiffPoly::eps(-eps_low).mul(&val)),
            );
        }
    }
    Ok(out)
}

/// Determinant of a small matrix of commuting polynomials, by cofactor
/// expansion along the first row (sizes here are at most 8).
fn poly_det(entries: &[DiffPoly], k: usize) -> DiffPoly {
    if k == 0 {
        return DiffPoly::one();
    }
    if k == 1 {
        return entries[0].clone();
    }
    let mut acc = DiffPoly::zero();
    for j in 0..k {
        let e = &entries[j];
        if e.is_zero() {
            continue;
        }
        let minor = poly_minor(entries, k, 0, j);
        let term = e.mul(&minor);
        if j % 2 == 0 {
            acc.add_assign(&term);
        } else {
            acc.add_assign(&term.neg());
        }
    }
    acc
}

fn poly_minor(entries: &[DiffPoly], k: usize, row: usize, col: usize) -> DiffPoly {
    let sub: Vec<DiffPoly> = (0..k)
        .filter(|&i| i != row)
        .flat_map(|i| {
            (0..k)
                .filter(|&j| j != col)
                .map(move |j| entries[i * k + j].clone())
        })
        .collect();
    poly_det(&sub, k - 1)
}

/// Dirac reduction: `P' = A - B D^-1 C` on the gauge slice.
pub fn dirac_reduce(p: &PencilInstance, q: &GaugeSpec, max_order: usize) -> Result<ReducedPencil> {
    let blocks = adapted_blocks(p, q)?;
    let dinv = invert_d(&blocks.d_block, max_order)?;
    let correction = blocks.b_block.compose(&dinv.inverse).compose(&blocks.c_block);
    let operator = blocks.a_block.sub(&correction);
    operator.require_skew()?;
    Ok(ReducedPencil {
        operator,
        source: p.name.clone(),
        gauge: q.clone(),
        d_inverse_order: dinv.order,
        field_names: q
            .retained
            .iter()
            .map(|&i| p.field_names.get(i).cloned().unwrap_or_else(|| format!("w{}", i + 1)))
            .collect(),
    })
}

/// Symbol-level Schur factorization report.
pub struct SchurReport {
    pub det_full: DiffPoly,
    pub det_delta: DiffPoly,
    pub det_reduced: DiffPoly,
    pub factorization_holds: bool,
    pub delta_lambda_free: bool,
}

/// Verifies `det pi_lam = det delta_lam * det pi'_lam` as polynomials in
/// (p, lam, retained fields), and that `det delta_lam` is lambda-free.
pub fn schur_check(p: &PencilInstance, q: &GaugeSpec, max_order: usize) -> Result<SchurReport> {
    let blocks = adapted_blocks(p, q)?;
    let reduced = dirac_reduce(p, q, max_order)?;
    let full_sym = symbol_matrix(&blocks.substituted, None)?;
    let delta_sym = symbol_matrix(&blocks.d_block, None)?;
    let red_sym = symbol_matrix(&reduced.operator, None)?;
    let det_full = full_sym.det();
    let det_delta = delta_sym.det();
    let det_reduced = red_sym.det();
    let factorization_holds = det_full == det_delta.mul(&det_reduced);
    let delta_lambda_free = det_delta.lam_degree() == 0;
    Ok(SchurReport {
        det_full,
        det_delta,
        det_reduced,
        factorization_holds,
        delta_lambda_free,
    })
}

/// Reassembly identity of the block factorization: multiplying the two
/// factor matrices reproduces the substituted pencil exactly.
pub fn reassembly_check(p: &PencilInstance, q: &GaugeSpec, max_order: usize) -> Result<bool> {
    let blocks = adapted_blocks(p, q)?;
    let dinv = invert_d(&blocks.d_block, max_order)?;
    let reduced = blocks
        .a_block
        .sub(&blocks.b_block.compose(&dinv.inverse).compose(&blocks.c_block));
    let r = blocks.a_block.rows;
    let k = blocks.d_block.rows;
    let n = r + k;
    // [[P', B], [0, D]] * [[Id, 0], [D^-1 C, Id]]
    let mut left = MatDiffOp::zero(n, n);
    for i in 0..r {
        for j in 0..r {
            left.set(i, j, reduced.get(i, j).clone());
        }
        for j in 0..k {
            left.set(i, r + j, blocks.b_block.get(i, j).clone());
        }
    }
    for i in 0..k {
        for j in 0..k {
            left.set(r + i, r + j, blocks.d_block.get(i, j).clone());
        }
    }
    let dinv_c = dinv.inverse.compose(&blocks.c_block);
    let mut right = MatDiffOp::identity(n);
    for i in 0..k {
        for j in 0..r {
            right.set(r + i, j, dinv_c.get(i, j).clone());
        }
    }
    Ok(left.compose(&right) == blocks.substituted)
}

/// Report of the finite-dimensional kernel-intersection probe at sampled
/// points of the gauge slice.
pub struct KernelIntersectionReport {
    /// (sample description, intersection dimension)
    pub samples: Vec<(String, usize)>,
}

impl KernelIntersectionReport {
    pub fn all_trivial(&self) -> bool {
        self.samples.iter().all(|(_, d)| *d == 0)
    }
}

/// At sampled rational points of the slice, computes the intersection of
/// the algebraic kernels of the two symbol matrices at a random rational p.
pub fn kernel_intersection_check(
    p: &PencilInstance,
    q: &GaugeSpec,
    samples: usize,
    seed: u64,
) -> Result<KernelIntersectionReport> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let n = p.n_fields();
    q.validate(n)?;
    let sym = symbol_matrix(&p.operator, None)?;
    let mut out = Vec::new();
    for _ in 0..samples {
        let mut assignment: Vec<Rat> = vec![Rat::zero(); n];
        for (&idx, v) in &q.fixed {
            assignment[idx] = v.clone();
        }
        for &idx in &q.retained {
            assignment[idx] = crate::rational::rat(rng.gen_range(1..=9), rng.gen_range(1..=3));
        }
        let pval = crate::rational::rat(rng.gen_range(2..=11), 1);
        let dim = kernel_intersection_at(&sym, &assignment, &pval)?;
        let desc = format!(
            "w = ({}), p = {}",
            assignment
                .iter()
                .map(crate::rational::format_rat)
                .collect::<Vec<_>>()
                .join(", "),
            crate::rational::format_rat(&pval)
        );
        out.push((desc, dim));
    }
    Ok(KernelIntersectionReport { samples: out })
}

/// Kernel intersection of the two symbol matrices at an explicit point.
pub fn kernel_intersection_at(
    sym: &SymbolMatrix,
    fields: &[Rat],
    pval: &Rat,
) -> Result<usize> {
    let n = sym.size;
    // numeric matrices of pi_1 and pi_2 at the point
    let mut m1 = QMatrix::zero(n, n);
    let mut m2 = QMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let entry = sym.entry(i, j);
            // pencil entry = pi_2 - lam pi_1
            let p2 = entry.coeff_lam(0);
            let p1 = entry.coeff_lam(1).neg();
            let val = |q: &DiffPoly| {
                q.eval(
                    &|f, s| if s == 0 { fields[f].clone() } else { Rat::zero() },
                    &Rat::one(),
                    &Rat::zero(),
                    pval,
                )
            };
            m1.set(i, j, val(&p1));
            m2.set(i, j, val(&p2));
        }
    }
    let k1 = m1.nullspace();
    let k2 = m2.nullspace();
    if k1.is_empty() || k2.is_empty() {
        return Ok(0);
    }
    // intersection dim = dim k1 + dim k2 - rank [k1 | k2]
    let mut rows = k1.clone();
    rows.extend(k2.clone());
    let rank = QMatrix::from_rows(rows).rank();
    Ok(k1.len() + k2.len() - rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencils::builtin;
    use crate::rational::{rat, rint};

    #[test]
    fn kdv_adapted_blocks() {
        let (p, q) = builtin("kdv").unwrap();
        let blocks = adapted_blocks(&p, &q).unwrap();
        assert!(blocks.a_block.get(0, 0).is_zero());
        // d = [[-2d, -2eps^-1], [2eps^-1, 0]]
        assert_eq!(blocks.d_block.get(0, 0), &DiffOp::dx(1).scale(&rint(-2)));
        assert_eq!(
            blocks.d_block.get(0, 1),
            &DiffOp::mult(DiffPoly::eps(-1).scale(&rint(-2)))
        );
        assert_eq!(
            blocks.d_block.get(1, 0),
            &DiffOp::mult(DiffPoly::eps(-1).scale(&rint(2)))
        );
        assert!(blocks.d_block.get(1, 1).is_zero());
    }

    #[test]
    fn kdv_d_inverse_matches_elimination_oracle() {
        // solving d o X = Id by hand gives [[0, eps/2], [-eps/2, -(eps^2/2) d]]
        let (p, q) = builtin("kdv").unwrap();
        let blocks = adapted_blocks(&p, &q).unwrap();
        let dinv = invert_d(&blocks.d_block, 24).unwrap();
        let expect = {
            let mut m = MatDiffOp::zero(2, 2);
            m.set(0, 1, DiffOp::mult(DiffPoly::eps(1).scale(&rat(1, 2))));
            m.set(1, 0, DiffOp::mult(DiffPoly::eps(1).scale(&rat(-1, 2))));
            m.set(1, 1, DiffOp::term(DiffPoly::eps(2).scale(&rat(-1, 2)), 1));
            m
        };
        assert_eq!(dinv.inverse, expect);
        assert_eq!(dinv.order, 1);
    }

    #[test]
    fn purely_algebraic_block_inverts_at_step_zero() {
        let mut d = MatDiffOp::zero(2, 2);
        d.set(0, 1, DiffOp::mult(DiffPoly::eps(-1).scale(&rint(-2))));
        d.set(1, 0, DiffOp::mult(DiffPoly::eps(-1).scale(&rint(2))));
        let dinv = invert_d(&d, 24).unwrap();
        assert_eq!(dinv.order, 0);
        assert_eq!(d.compose(&dinv.inverse), MatDiffOp::identity(2));
    }

    #[test]
    fn singular_leading_block_is_an_error() {
        let mut d = MatDiffOp::zero(2, 2);
        d.set(0, 0, DiffOp::mult(DiffPoly::eps(-1)));
        // second row zero at the leading level
        d.set(1, 1, DiffOp::dx(1));
        let err = invert_d(&d, 8).unwrap_err();
        match err {
            Error::SingularLeadingBlock | Error::Integrity(_) => {}
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn kdv_reduction_gives_printed_brackets() {
        // {u,u}_1 = -2 delta', {u,u}_2 = -u_x delta - 2u delta' + 1/2 eps^2 delta'''
        let (p, q) = builtin("kdv").unwrap();
        let red = dirac_reduce(&p, &q, 24).unwrap();
        let p1 = red.operator.lambda_linear_part();
        let p2 = red.operator.at_lambda_zero();
        assert_eq!(p1.get(0, 0), &DiffOp::dx(1).scale(&rint(-2)));
        let expect_p2 = DiffOp::mult(DiffPoly::var(0, 1).neg())
            .add(&DiffOp::term(DiffPoly::var(0, 0).scale(&rint(-2)), 1))
            .add(&DiffOp::term(DiffPoly::eps(2).scale(&rat(1, 2)), 3));
        assert_eq!(p2.get(0, 0), &expect_p2);
    }

    #[test]
    fn gauge_retaining_everything_returns_original() {
        let (p, _) = builtin("scalar").unwrap();
        let q = GaugeSpec {
            retained: vec![0],
            fixed: Default::default(),
        };
        let red = dirac_reduce(&p, &q, 8).unwrap();
        assert_eq!(red.operator, p.operator);
        assert_eq!(red.d_inverse_order, 0);
    }

    #[test]
    fn kdv_schur_factorization_with_constant_delta() {
        let (p, q) = builtin("kdv").unwrap();
        let rep = schur_check(&p, &q, 24).unwrap();
        assert!(rep.factorization_holds);
        assert!(rep.delta_lambda_free);
        assert_eq!(rep.det_delta.as_constant(), Some(rint(4)));
    }

    #[test]
    fn kdv_reassembly_identity() {
        let (p, q) = builtin("kdv").unwrap();
        assert!(reassembly_check(&p, &q, 24).unwrap());
    }

    #[test]
    fn kernel_intersection_trivial_on_leaf_and_not_at_a() {
        let (p, q) = builtin("kdv").unwrap();
        let rep = kernel_intersection_check(&p, &q, 3, 7).unwrap();
        assert!(rep.all_trivial());
        // negative control: at w = A and p = 0 both algebraic parts
        // annihilate the centralizer of A
        let sym = symbol_matrix(&p.operator, None).unwrap();
        let a = p.a_vector.clone().unwrap();
        let dim = kernel_intersection_at(&sym, &a, &rat(0, 1)).unwrap();
        assert!(dim > 0);
    }
}
