//! Construction of the classical simple Lie algebras A, B, C, D in their
//! defining matrix representations, with a Chevalley-graded ordered basis.
//!
//! Positive root vectors beyond the generators are produced by commutators,
//! breadth-first in the height: the first nonzero bracket `[X_i, E]` (i
//! ascending, roots of the previous level in weight order) defines the new
//! root vector, so all structure constants stay integral. Negative root
//! vectors are matrix transposes of the positive ones.

use super::{Chevalley, LieAlg, Series, SparseVec};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{rint, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

fn e_mat(m: usize, i: usize, j: usize) -> QMatrix {
    let mut out = QMatrix::zero(m, m);
    out.set(i - 1, j - 1, Rat::one()); // 1-indexed like the printed matrices
    out
}

fn commutator(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.mul(b).sub(&b.mul(a))
}

/// Anti-diagonal bilinear form fixing so/sp: `S[i, m+1-i] = s_i`.
fn anti_diag(s: &[i64]) -> QMatrix {
    let m = s.len();
    let mut out = QMatrix::zero(m, m);
    for (i, &v) in s.iter().enumerate() {
        out.set(i, m - 1 - i, rint(v));
    }
    out
}

/// Signature pattern for each series; B/D symmetric, C antisymmetric.
fn signature(series: Series, m: usize) -> Vec<i64> {
    match series {
        Series::A => vec![],
        Series::B | Series::C => (0..m).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect(),
        Series::D => {
            let n = m / 2;
            let mut s: Vec<i64> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
            let mirror: Vec<i64> = s.iter().rev().copied().collect();
            s.extend(mirror);
            s
        }
    }
}

/// Checks membership: trace zero for sl, `w S = -S w^T` for so/sp.
fn in_algebra(series: Series, s_mat: &QMatrix, w: &QMatrix) -> bool {
    match series {
        Series::A => (0..w.rows)
            .fold(Rat::zero(), |a, i| a + w.get(i, i))
            .is_zero(),
        _ => w.mul(s_mat).add(&s_mat.mul(&w.transpose())).is_zero(),
    }
}

/// Chevalley generator matrices (X_i, Y_i) for the given series and rank.
fn generators(series: Series, rank: usize) -> (usize, Vec<QMatrix>, Vec<QMatrix>) {
    let n = rank;
    match series {
        Series::A => {
            let m = n + 1;
            let xs: Vec<QMatrix> = (1..=n).map(|i| e_mat(m, i, i + 1)).collect();
            let ys: Vec<QMatrix> = (1..=n).map(|i| e_mat(m, i + 1, i)).collect();
            (m, xs, ys)
        }
        Series::B => {
            let m = 2 * n + 1;
            let xs: Vec<QMatrix> = (1..=n)
                .map(|i| e_mat(m, i + 1, i).add(&e_mat(m, m + 1 - i, m - i)))
                .collect();
            let ys: Vec<QMatrix> = xs
                .iter()
                .enumerate()
                .map(|(idx, x)| {
                    let sigma = if idx + 1 == n { rint(2) } else { rint(1) };
                    x.transpose().scale(&sigma)
                })
                .collect();
            (m, xs, ys)
        }
        Series::C => {
            let m = 2 * n;
            let mut xs: Vec<QMatrix> = (1..n)
                .map(|i| e_mat(m, i + 1, i).add(&e_mat(m, m + 1 - i, m - i)))
                .collect();
            xs.push(e_mat(m, n + 1, n));
            let ys: Vec<QMatrix> = xs.iter().map(|x| x.transpose()).collect();
            (m, xs, ys)
        }
        Series::D => {
            let m = 2 * n;
            let mut xs: Vec<QMatrix> = (1..n)
                .map(|i| e_mat(m, i + 1, i).add(&e_mat(m, m + 1 - i, m - i)))
                .collect();
            xs.push(e_mat(m, n + 1, n - 1).add(&e_mat(m, n + 2, n)));
            let ys: Vec<QMatrix> = xs.iter().map(|x| x.transpose()).collect();
            (m, xs, ys)
        }
    }
}

struct PositiveRoot {
    weight: Vec<i64>,
    mat: QMatrix,
    height: usize,
    /// coefficients over the simple roots
    coeffs: Vec<i64>,
}

/// Eigenvalue of `[h, v] = c v`; error when v is not an eigenvector.
fn eigenvalue(h: &QMatrix, v: &QMatrix) -> Result<i64> {
    let br = commutator(h, v);
    // find a nonzero cell of v
    for i in 0..v.rows {
        for j in 0..v.cols {
            if !v.get(i, j).is_zero() {
                let c = br.get(i, j) / v.get(i, j);
                if br.sub(&v.scale(&c)).is_zero() {
                    if !c.denom().is_one() {
                        return Err(Error::Construction("non-integer root eigenvalue".into()));
                    }
                    return c
                        .numer()
                        .to_i64()
                        .ok_or_else(|| Error::Construction("eigenvalue overflow".into()));
                }
                return Err(Error::Construction("not an ad-eigenvector".into()));
            }
        }
    }
    Err(Error::Construction("zero vector has no eigenvalue".into()))
}

pub fn build_algebra(series: Series, rank: usize) -> Result<LieAlg> {
    let min_rank = match series {
        Series::A => 1,
        Series::B | Series::C => 2,
        Series::D => 3,
    };
    if rank < min_rank {
        return Err(Error::Construction(format!(
            "series {series:?} requires rank >= {min_rank}, got {rank}"
        )));
    }
    let n = rank;
    let (m, xs, ys) = generators(series, n);
    let s_mat = anti_diag(&signature(series, m));
    for x in xs.iter().chain(ys.iter()) {
        if series != Series::A && !in_algebra(series, &s_mat, x) {
            return Err(Error::Construction(
                "generator violates the defining bilinear condition".into(),
            ));
        }
    }
    let hs: Vec<QMatrix> = (0..n).map(|i| commutator(&xs[i], &ys[i])).collect();
    for i in 0..n {
        if commutator(&hs[i], &xs[i]) != xs[i].scale(&rint(2)) {
            return Err(Error::Construction(format!(
                "Chevalley normalization [H_{0},X_{0}] = 2X_{0} fails",
                i + 1
            )));
        }
    }

    // breadth-first generation of the positive root vectors
    let weight_of = |v: &QMatrix| -> Result<Vec<i64>> {
        hs.iter().map(|h| eigenvalue(h, v)).collect()
    };
    let mut levels: Vec<Vec<PositiveRoot>> = Vec::new();
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut first: Vec<PositiveRoot> = (0..n)
        .map(|i| {
            let mut coeffs = vec![0i64; n];
            coeffs[i] = 1;
            Ok(PositiveRoot {
                weight: weight_of(&xs[i])?,
                mat: xs[i].clone(),
                height: 1,
                coeffs,
            })
        })
        .collect::<Result<_>>()?;
    first.sort_by(|a, b| a.weight.cmp(&b.weight));
    for r in &first {
        seen.insert(r.weight.clone(), ());
    }
    levels.push(first);
    loop {
        let prev = levels.last().unwrap();
        let mut next: Vec<PositiveRoot> = Vec::new();
        for root in prev {
            for (i, x) in xs.iter().enumerate() {
                let cand = commutator(x, &root.mat);
                if cand.is_zero() {
                    continue;
                }
                let w = weight_of(&cand)?;
                if seen.contains_key(&w) || next.iter().any(|r| r.weight == w) {
                    continue;
                }
                let mut coeffs = root.coeffs.clone();
                coeffs[i] += 1;
                next.push(PositiveRoot {
                    weight: w,
                    mat: cand,
                    height: root.height + 1,
                    coeffs,
                });
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_by(|a, b| a.weight.cmp(&b.weight));
        for r in &next {
            seen.insert(r.weight.clone(), ());
        }
        levels.push(next);
    }

    let positive_count: usize = levels.iter().map(|l| l.len()).sum();
    let dim = 2 * positive_count + n;
    let expected_dim = match series {
        Series::A => (n + 1) * (n + 1) - 1,
        Series::B => n * (2 * n + 1),
        Series::C => n * (2 * n + 1),
        Series::D => n * (2 * n - 1),
    };
    if dim != expected_dim {
        return Err(Error::Construction(format!(
            "generated {dim} basis vectors, expected {expected_dim}"
        )));
    }
    let max_height = levels.len();
    let coxeter = (max_height + 1) as i64;
    if dim != n * (max_height + 2) {
        return Err(Error::Construction(format!(
            "dimension {dim} != n(h+1) = {}",
            n * (max_height + 2)
        )));
    }

    // ordered basis: negatives by increasing degree, Cartan, positives
    let label_of = |r: &PositiveRoot, neg: bool| -> String {
        if r.height == 1 {
            let i = r.coeffs.iter().position(|&c| c == 1).unwrap() + 1;
            return format!("{}{}", if neg { "Y" } else { "X" }, i);
        }
        let cs: Vec<String> = r.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{}[{}]", if neg { "F" } else { "E" }, cs.join(","))
    };
    let mut defining: Vec<QMatrix> = Vec::with_capacity(dim);
    let mut labels: Vec<String> = Vec::with_capacity(dim);
    let mut principal_degree: Vec<i64> = Vec::with_capacity(dim);
    for level in levels.iter().rev() {
        for r in level {
            defining.push(r.mat.transpose());
            labels.push(label_of(r, true));
            principal_degree.push(-(r.height as i64));
        }
    }
    for (i, h) in hs.iter().enumerate() {
        defining.push(h.clone());
        labels.push(format!("H{}", i + 1));
        principal_degree.push(0);
    }
    for level in &levels {
        for r in level {
            defining.push(r.mat.clone());
            labels.push(label_of(r, false));
            principal_degree.push(r.height as i64);
        }
    }

    // Chevalley index sets: height-1 roots keep the level ordering, so
    // recover the generator index by matrix identity.
    let find = |mat: &QMatrix| -> Result<usize> {
        defining
            .iter()
            .position(|d| d == mat)
            .ok_or_else(|| Error::Construction("generator missing from basis".into()))
    };
    let chevalley = Chevalley {
        x: xs.iter().map(|x| find(x)).collect::<Result<_>>()?,
        y: (0..n)
            .map(|i| {
                // Y_i is sigma_i X_i^T; locate by the transpose direction
                let xt = xs[i].transpose();
                defining
                    .iter()
                    .position(|d| {
                        // proportional with positive ratio
                        if d.rows != xt.rows {
                            return false;
                        }
                        is_proportional(d, &xt)
                    })
                    .ok_or_else(|| Error::Construction("Y generator missing".into()))
            })
            .collect::<Result<_>>()?,
        h: (0..n).map(|i| positive_count + i).collect(),
    };
    // patch: replace the stored transpose at Y_i's slot by the true Chevalley
    // Y_i (they differ by the sl2 normalization sigma_i)
    let mut defining = defining;
    for (i, &yi) in chevalley.y.iter().enumerate() {
        defining[yi] = ys[i].clone();
        labels[yi] = format!("Y{}", i + 1);
    }

    // structure constants via a prepared coordinate solver on the defining rep
    let resolver = DefiningResolver::new(&defining);
    let mut brackets: Vec<SparseVec> = vec![SparseVec::new(); dim * dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let br = commutator(&defining[i], &defining[j]);
            if br.is_zero() {
                continue;
            }
            let coords = resolver.resolve(&br).ok_or_else(|| {
                Error::Construction(format!("bracket [{},{}] left the span", labels[i], labels[j]))
            })?;
            let sv: SparseVec = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            brackets[j * dim + i] = sv.iter().map(|(l, c)| (*l, -c.clone())).collect();
            brackets[i * dim + j] = sv;
        }
    }

    // Killing form and the theta sl2-triple
    let killing = killing_form(dim, &brackets);
    let e_theta_idx = dim - 1; // unique top-degree vector comes last
    let f_guess_idx = 0; // its transpose sits first
    let h_try = bracket_coords_basis(&brackets, dim, e_theta_idx, f_guess_idx);
    // [h, E_theta] = c E_theta
    let ad_h_e = bracket_sparse(&brackets, dim, &h_try, &unit(dim, e_theta_idx));
    let c = ad_h_e[e_theta_idx].clone();
    if c.is_zero() {
        return Err(Error::Construction("degenerate highest-root triple".into()));
    }
    let scale = rint(2) / &c;
    let theta_vee: Vec<Rat> = h_try.iter().map(|v| v * &scale).collect();
    let k_hh = quad_form(&killing, &theta_vee);
    let h_vee_rat = k_hh / rint(4);
    if !h_vee_rat.denom().is_one() || !h_vee_rat.numer().is_positive() {
        return Err(Error::Construction(format!(
            "dual Coxeter number came out as {h_vee_rat}"
        )));
    }
    let dual_coxeter: i64 = h_vee_rat
        .numer()
        .to_i64()
        .ok_or_else(|| Error::Construction("dual Coxeter overflow".into()))?;
    let norm = Rat::new(BigInt::one(), BigInt::from(2 * dual_coxeter));
    let g = killing.scale(&norm);

    // theta grading: eigenvalues of ad theta_vee on the basis
    let mut theta_degree = Vec::with_capacity(dim);
    for i in 0..dim {
        let br = bracket_sparse(&brackets, dim, &theta_vee, &unit(dim, i));
        let d = &br[i];
        let rest_zero = br
            .iter()
            .enumerate()
            .all(|(k, v)| k == i || v.is_zero());
        if !rest_zero || !d.denom().is_one() {
            return Err(Error::Construction(
                "basis vector is not an ad(theta_vee) eigenvector".into(),
            ));
        }
        let dv: i64 = d
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Construction("theta degree overflow".into()))?;
        if dv.abs() > 2 {
            return Err(Error::Construction(format!("theta degree {dv} out of range")));
        }
        theta_degree.push(dv);
    }

    let alg = LieAlg {
        name: format!("{series:?}{rank}"),
        dim,
        rank: n,
        matrix_size: m,
        basis_labels: labels,
        defining,
        brackets,
        g,
        chevalley,
        coxeter,
        dual_coxeter,
        principal_degree,
        theta_degree,
        theta_vee,
        e_theta: unit(dim, e_theta_idx),
    };
    alg.validate()?;
    Ok(alg)
}

fn is_proportional(a: &QMatrix, b: &QMatrix) -> bool {
    let mut ratio: Option<Rat> = None;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let (x, y) = (a.get(i, j), b.get(i, j));
            match (x.is_zero(), y.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return false,
                (false, false) => {
                    let r = x / y;
                    match &ratio {
                        None => ratio = Some(r),
                        Some(prev) if *prev == r => {}
                        _ => return false,
                    }
                }
            }
        }
    }
    ratio.is_some()
}

fn unit(dim: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[i] = Rat::one();
    v
}

/// [e_i, e_j] as a coordinate vector.
fn bracket_coords_basis(brackets: &[SparseVec], dim: usize, i: usize, j: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); dim];
    for (l, c) in &brackets[i * dim + j] {
        out[*l] = c.clone();
    }
    out
}

/// [u, v] for coordinate vectors.
pub(super) fn bracket_sparse(
    brackets: &[SparseVec],
    dim: usize,
    u: &[Rat],
    v: &[Rat],
) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); dim];
    for (i, a) in u.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in v.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let ab = a * b;
            for (l, c) in &brackets[i * dim + j] {
                out[*l] += &ab * c;
            }
        }
    }
    out
}

fn killing_form(dim: usize, brackets: &[SparseVec]) -> QMatrix {
    // K_ij = sum_{k,l} c^{ik}_l c^{jl}_k
    let mut k_mat = QMatrix::zero(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let mut acc = Rat::zero();
            for k in 0..dim {
                for (l, cik) in &brackets[i * dim + k] {
                    // c^{jl}_k
                    for (idx, cjl) in &brackets[j * dim + l] {
                        if *idx == k {
                            acc += cik * cjl;
                        }
                    }
                }
            }
            k_mat.set(i, j, acc.clone());
            k_mat.set(j, i, acc);
        }
    }
    k_mat
}

fn quad_form(g: &QMatrix, v: &[Rat]) -> Rat {
    let gv = g.mul_vec(v);
    v.iter().zip(&gv).fold(Rat::zero(), |a, (x, y)| a + x * y)
}

/// Prepared least-squares-style resolver over the defining representation:
/// coordinates = (B^T B)^-1 B^T vec(target), applied sparsely.
struct DefiningResolver {
    gram_inv: QMatrix,
    /// (row, col) cell -> list of (basis index, entry)
    cells: HashMap<(usize, usize), Vec<(usize, Rat)>>,
    defining: Vec<QMatrix>,
}

impl DefiningResolver {
    fn new(defining: &[QMatrix]) -> Self {
        let dim = defining.len();
        let mut gram = QMatrix::zero(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let mut acc = Rat::zero();
                for r in 0..defining[i].rows {
                    for c in 0..defining[i].cols {
                        let a = defining[i].get(r, c);
                        if !a.is_zero() {
                            acc += a * defining[j].get(r, c);
                        }
                    }
                }
                gram.set(i, j, acc.clone());
                gram.set(j, i, acc);
            }
        }
        let gram_inv = gram.inverse().expect("defining basis must be independent");
        let mut cells: HashMap<(usize, usize), Vec<(usize, Rat)>> = HashMap::new();
        for (k, d) in defining.iter().enumerate() {
            for r in 0..d.rows {
                for c in 0..d.cols {
                    let v = d.get(r, c);
                    if !v.is_zero() {
                        cells.entry((r, c)).or_default().push((k, v.clone()));
                    }
                }
            }
        }
        DefiningResolver {
            gram_inv,
            cells,
            defining: defining.to_vec(),
        }
    }

    fn resolve(&self, target: &QMatrix) -> Option<Vec<Rat>> {
        let dim = self.gram_inv.rows;
        let mut bt = vec![Rat::zero(); dim];
        for r in 0..target.rows {
            for c in 0..target.cols {
                let v = target.get(r, c);
                if v.is_zero() {
                    continue;
                }
                if let Some(list) = self.cells.get(&(r, c)) {
                    for (k, entry) in list {
                        bt[*k] += v * entry;
                    }
                }
            }
        }
        let coords = self.gram_inv.mul_vec(&bt);
        // verify exact recomposition (the projection formula alone would
        // silently accept vectors outside the span)
        let mut recomposed = QMatrix::zero(target.rows, target.cols);
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                recomposed = recomposed.add(&self.defining[k].scale(c));
            }
        }
        (recomposed == *target).then_some(coords)
    }
}

/// Resolves an explicit defining-representation matrix into basis
/// coordinates of the algebra. Used by built-in pencil constructions.
pub fn coords_of_defining(alg: &LieAlg, mat: &QMatrix) -> Result<Vec<Rat>> {
    let resolver = DefiningResolver::new(&alg.defining);
    resolver
        .resolve(mat)
        .ok_or_else(|| Error::Construction("matrix is not in the algebra's span".into()))
}
