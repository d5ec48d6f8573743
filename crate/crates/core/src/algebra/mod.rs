//! Classical simple Lie algebras with root data, gradations, and the
//! normalized Killing form; the subspaces entering the reduction setup.

mod build;

pub use build::{build_algebra, coords_of_defining};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::Rat;
use num_traits::{One, Zero};

/// Sparse coordinate vector, sorted by index.
pub type SparseVec = Vec<(usize, Rat)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    A,
    B,
    C,
    D,
}

impl Series {
    pub fn parse(c: char) -> Result<Series> {
        match c {
            'A' | 'a' => Ok(Series::A),
            'B' | 'b' => Ok(Series::B),
            'C' | 'c' => Ok(Series::C),
            'D' | 'd' => Ok(Series::D),
            _ => Err(Error::Parse(format!(
                "unknown series '{c}'; expected one of A, B, C, D"
            ))),
        }
    }
}

/// Parses a descriptor like "A1", "B2", "D4".
pub fn parse_descriptor(desc: &str) -> Result<(Series, usize)> {
    let desc = desc.trim();
    let mut chars = desc.chars();
    let series = Series::parse(
        chars
            .next()
            .ok_or_else(|| Error::Parse("empty algebra descriptor".into()))?,
    )?;
    let rank: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rank in descriptor '{desc}'")))?;
    Ok((series, rank))
}

#[derive(Clone, Debug)]
pub struct Chevalley {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub h: Vec<usize>,
}

/// A classical simple Lie algebra in a Chevalley-graded ordered basis.
#[derive(Clone, Debug)]
pub struct LieAlg {
    pub name: String,
    pub dim: usize,
    pub rank: usize,
    pub matrix_size: usize,
    pub basis_labels: Vec<String>,
    /// defining-representation matrices of the basis vectors
    pub defining: Vec<QMatrix>,
    /// structure constants: index i*dim+j holds coordinates of [e_i, e_j]
    pub(crate) brackets: Vec<SparseVec>,
    /// normalized Killing form on the basis
    pub g: QMatrix,
    pub chevalley: Chevalley,
    pub coxeter: i64,
    pub dual_coxeter: i64,
    pub principal_degree: Vec<i64>,
    pub theta_degree: Vec<i64>,
    /// coordinates of theta-vee (the coroot of the highest root)
    pub theta_vee: Vec<Rat>,
    /// coordinates of the highest-root vector
    pub e_theta: Vec<Rat>,
}

/// Rational subspace of an algebra, given by an independent spanning set.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis_vectors: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn new(ambient_dim: usize, basis_vectors: Vec<Vec<Rat>>) -> Result<Self> {
        let mat = QMatrix::from_rows(basis_vectors.clone());
        if mat.rank() != basis_vectors.len() {
            return Err(Error::Precondition(
                "subspace basis vectors are linearly dependent".into(),
            ));
        }
        Ok(Subspace {
            ambient_dim,
            basis_vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis_vectors.len()
    }
}

/// Row fed to the Coxeter-data report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub h: i64,
    pub h_vee: i64,
    pub dim_leaf: usize,
    pub dim_g1: usize,
}

impl LieAlg {
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i * self.dim + j]
    }

    /// [u, v] on coordinate vectors.
    pub fn bracket(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        build::bracket_sparse(&self.brackets, self.dim, u, v)
    }

    /// Normalized Killing pairing of coordinate vectors.
    pub fn form(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let gv = self.g.mul_vec(v);
        u.iter().zip(&gv).fold(Rat::zero(), |a, (x, y)| a + x * y)
    }

    /// The matrix of ad(a) acting on coordinates.
    pub fn ad(&self, a: &[Rat]) -> QMatrix {
        let mut out = QMatrix::zero(self.dim, self.dim);
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (l, v) in self.bracket_basis(i, j) {
                    let cur = out.get(*l, j) + c * v;
                    out.set(*l, j, cur);
                }
            }
        }
        out
    }

    /// Exact rational null space of ad(a).
    pub fn kernel_ad(&self, a: &[Rat]) -> Result<Subspace> {
        if a.iter().all(|c| c.is_zero()) {
            return Err(Error::Precondition("kernel_ad of the zero vector".into()));
        }
        let ns = self.ad(a).nullspace();
        Subspace::new(self.dim, ns)
    }

    /// Exact annihilator of a subspace under the normalized Killing form.
    pub fn orth_complement(&self, s: &Subspace) -> Subspace {
        let mat = QMatrix::from_rows(s.basis_vectors.clone()).mul(&self.g);
        Subspace {
            ambient_dim: self.dim,
            basis_vectors: mat.nullspace(),
        }
    }

    /// Highest-root data: the top principal-degree vector and theta-vee.
    pub fn highest_root_data(&self) -> (Vec<Rat>, Vec<Rat>) {
        (self.e_theta.clone(), self.theta_vee.clone())
    }

    /// Principal nilpotent element I = sum_i Y_i as a coordinate vector.
    pub fn principal_nilpotent(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        for &yi in &self.chevalley.y {
            v[yi] = Rat::one();
        }
        v
    }

    /// Coxeter-data report; consistency-checked against the gradation.
    pub fn table1_report(&self) -> Result<Table1Row> {
        let ker = self.kernel_ad(&self.e_theta)?;
        let leaf = self.orth_complement(&ker);
        let dim_leaf = leaf.dim();
        let dim_g1 = self.theta_degree.iter().filter(|&&d| d == 1).count();
        let expect_leaf = (2 * self.dual_coxeter - 2) as usize;
        let expect_g1 = (2 * (self.dual_coxeter - 2)) as usize;
        if dim_leaf != expect_leaf {
            return Err(Error::Integrity(format!(
                "{}: dim ker(ad E_theta)^perp = {dim_leaf}, expected 2h_vee-2 = {expect_leaf}",
                self.name
            )));
        }
        if dim_g1 != expect_g1 {
            return Err(Error::Integrity(format!(
                "{}: dim g^1 = {dim_g1}, expected 2(h_vee-2) = {expect_g1}",
                self.name
            )));
        }
        Ok(Table1Row {
            h: self.coxeter,
            h_vee: self.dual_coxeter,
            dim_leaf,
            dim_g1,
        })
    }

    /// Full structural validation: antisymmetry, exact Jacobi identity,
    /// invariance and nondegeneracy of the form, Chevalley gradation facts.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let ij = self.bracket_basis(i, j);
                let ji = self.bracket_basis(j, i);
                if ij.len() != ji.len()
                    || ij
                        .iter()
                        .zip(ji)
                        .any(|((l1, c1), (l2, c2))| l1 != l2 || *c1 != -c2.clone())
                {
                    return Err(Error::Integrity(format!(
                        "antisymmetry fails at ({i},{j})"
                    )));
                }
            }
        }
        // Jacobi: [[i,j],k] + [[j,k],i] + [[k,i],j] = 0
        let mut acc = vec![Rat::zero(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for v in acc.iter_mut() {
                        *v = Rat::zero();
                    }
                    self.add_bracket_of_sparse(i, j, k, &mut acc, false);
                    self.add_bracket_of_sparse(j, k, i, &mut acc, false);
                    self.add_bracket_of_sparse(k, i, j, &mut acc, false);
                    if acc.iter().any(|v| !v.is_zero()) {
                        return Err(Error::Integrity(format!(
                            "Jacobi identity fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        // invariance <[x,y],z> + <y,[x,z]> = 0 on basis triples
        for x in 0..n {
            for y in 0..n {
                let bxy = self.bracket_basis(x, y);
                for z in 0..n {
                    let mut s = Rat::zero();
                    for (l, c) in bxy {
                        s += c * self.g.get(*l, z);
                    }
                    for (l, c) in self.bracket_basis(x, z) {
                        s += c * self.g.get(y, *l);
                    }
                    if !s.is_zero() {
                        return Err(Error::Integrity(format!(
                            "form invariance fails at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        if self.g.clone().rank() != n {
            return Err(Error::Integrity("bilinear form is degenerate".into()));
        }
        for (&xi, &yi) in self.chevalley.x.iter().zip(&self.chevalley.y) {
            if self.principal_degree[xi] != 1 || self.principal_degree[yi] != -1 {
                return Err(Error::Integrity(
                    "Chevalley generators have wrong principal degree".into(),
                ));
            }
        }
        if self.dim as i64 != self.rank as i64 * (self.coxeter + 1) {
            return Err(Error::Integrity("dim != n(h+1)".into()));
        }
        Ok(())
    }

    /// acc += [[e_i, e_j], e_k]
    fn add_bracket_of_sparse(&self, i: usize, j: usize, k: usize, acc: &mut [Rat], negate: bool) {
        for (l, c) in self.bracket_basis(i, j) {
            for (t, d) in self.bracket_basis(*l, k) {
                if negate {
                    acc[*t] -= c * d;
                } else {
                    acc[*t] += c * d;
                }
            }
        }
    }

    /// <H_i, H_i> for each Chevalley coroot; feeds the predicted central
    /// invariants.
    pub fn cartan_norms(&self) -> Vec<Rat> {
        self.chevalley
            .h
            .iter()
            .map(|&hi| self.g.get(hi, hi).clone())
            .collect()
    }
}

/// Static reference rows (h, h_vee, dim of the theta leaf) for all simple
/// algebras, the exceptional ones included; classical rows are reproduced by
/// construction, exceptional rows ship as data only.
pub fn table1_reference(series: &str, n: i64) -> Option<(i64, i64, i64)> {
    match series {
        "A" => Some((n + 1, n + 1, 2 * n)),
        "B" => Some((2 * n, 2 * n - 1, 4 * n - 4)),
        "C" => Some((2 * n, n + 1, 2 * n)),
        "D" => Some((2 * n - 2, 2 * n - 2, 4 * n - 6)),
        "E6" => Some((12, 12, 22)),
        "E7" => Some((18, 18, 34)),
        "E8" => Some((30, 30, 58)),
        "F4" => Some((12, 9, 16)),
        "G2" => Some((6, 4, 6)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    #[test]
    fn sl2_matches_chevalley_presentation() {
        let alg = build_algebra(Series::A, 1).unwrap();
        assert_eq!(alg.dim, 3);
        assert_eq!(alg.coxeter, 2);
        assert_eq!(alg.dual_coxeter, 2);
        assert_eq!(alg.basis_labels, vec!["Y1", "H1", "X1"]);
        // [X,Y] = H, [H,X] = 2X
        assert_eq!(alg.bracket_basis(2, 0), &vec![(1usize, rint(1))]);
        assert_eq!(alg.bracket_basis(1, 2), &vec![(2usize, rint(2))]);
        // <H,H> = 2 under the normalized form
        assert_eq!(alg.g.get(1, 1), &rint(2));
        // <X,Y> = 1
        assert_eq!(alg.g.get(0, 2), &rint(1));
    }

    #[test]
    fn so5_generators_match_printed_matrices() {
        let alg = build_algebra(Series::B, 2).unwrap();
        assert_eq!(alg.dim, 10);
        assert_eq!(alg.coxeter, 4);
        assert_eq!(alg.dual_coxeter, 3);
        let m = 5;
        let e = |i: usize, j: usize| {
            let mut q = QMatrix::zero(m, m);
            q.set(i - 1, j - 1, rint(1));
            q
        };
        let x1 = e(2, 1).add(&e(5, 4));
        let x2 = e(3, 2).add(&e(4, 3));
        let y1 = x1.transpose();
        let y2 = x2.transpose().scale(&rint(2));
        let h1 = e(2, 2).add(&e(5, 5)).sub(&e(1, 1)).sub(&e(4, 4));
        let h2 = e(4, 4).sub(&e(2, 2)).scale(&rint(2));
        assert_eq!(&alg.defining[alg.chevalley.x[0]], &x1);
        assert_eq!(&alg.defining[alg.chevalley.x[1]], &x2);
        assert_eq!(&alg.defining[alg.chevalley.y[0]], &y1);
        assert_eq!(&alg.defining[alg.chevalley.y[1]], &y2);
        assert_eq!(&alg.defining[alg.chevalley.h[0]], &h1);
        assert_eq!(&alg.defining[alg.chevalley.h[1]], &h2);
        // E_theta is proportional to X4 = e41 + e52
        let x4 = e(4, 1).add(&e(5, 2));
        let et = &alg.defining[alg.dim - 1];
        assert!(et == &x4 || et == &x4.scale(&rint(-1)));
    }

    #[test]
    fn so5_normalized_form_matches_defining_trace_oracle() {
        // the so(5) shortcut 1/2 tr(w1 w2) is an independent oracle for g
        let alg = build_algebra(Series::B, 2).unwrap();
        for i in 0..alg.dim {
            for j in 0..alg.dim {
                let tr = {
                    let prod = alg.defining[i].mul(&alg.defining[j]);
                    (0..5).fold(Rat::zero(), |a, k| a + prod.get(k, k))
                };
                assert_eq!(alg.g.get(i, j), &(tr * rat(1, 2)), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn a2_cartan_norms_by_adjoint_trace() {
        let alg = build_algebra(Series::A, 2).unwrap();
        assert_eq!(alg.dim, 8);
        // brute-force adjoint traces: tr(ad H_i ad H_i) / (2 h_vee) = 2
        for &hi in &alg.chevalley.h {
            let unit: Vec<Rat> = (0..8).map(|k| if k == hi { rint(1) } else { rint(0) }).collect();
            let ad = alg.ad(&unit);
            let tr = (0..8).fold(Rat::zero(), |a, k| {
                a + ad.row(k).iter().zip(0..8).fold(Rat::zero(), |b, (v, l)| {
                    b + v * ad.get(l, k)
                })
            });
            assert_eq!(tr / rint(2 * alg.dual_coxeter), rint(2));
        }
    }

    #[test]
    fn a1_kernel_and_orth_examples() {
        let alg = build_algebra(Series::A, 1).unwrap();
        let x = vec![rint(0), rint(0), rint(1)];
        let ker = alg.kernel_ad(&x).unwrap();
        assert_eq!(ker.dim(), 1);
        // orth complement of span{X} contains X and H
        let orth = alg.orth_complement(&ker);
        assert_eq!(orth.dim(), 2);
        let in_span = |v: &[Rat]| {
            let mut rows = orth.basis_vectors.clone();
            rows.push(v.to_vec());
            QMatrix::from_rows(rows).rank() == 2
        };
        assert!(in_span(&[rint(0), rint(0), rint(1)]));
        assert!(in_span(&[rint(0), rint(1), rint(0)]));
        // zero vector is rejected
        assert!(alg.kernel_ad(&[rint(0), rint(0), rint(0)]).is_err());
    }

    #[test]
    fn so5_isotropy_of_x4_is_six_dimensional() {
        let alg = build_algebra(Series::B, 2).unwrap();
        let x4 = {
            let mut q = QMatrix::zero(5, 5);
            q.set(3, 0, rint(1));
            q.set(4, 1, rint(1));
            coords_of_defining(&alg, &q).unwrap()
        };
        let ker = alg.kernel_ad(&x4).unwrap();
        assert_eq!(ker.dim(), 6);
        let leaf = alg.orth_complement(&ker);
        assert_eq!(leaf.dim(), 4);
        // the leaf directions are spanned by X4, X2, X3, H1 + H2
        let e = |i: usize, j: usize| {
            let mut q = QMatrix::zero(5, 5);
            q.set(i - 1, j - 1, rint(1));
            q
        };
        let x2 = alg.defining[alg.chevalley.x[1]].clone();
        let x3 = e(5, 3).sub(&e(3, 1));
        let hs = alg.defining[alg.chevalley.h[0]].add(&alg.defining[alg.chevalley.h[1]]);
        let x4m = e(4, 1).add(&e(5, 2));
        for m in [x4m, x2, x3, hs] {
            let coords = coords_of_defining(&alg, &m).unwrap();
            let mut rows = leaf.basis_vectors.clone();
            rows.push(coords);
            assert_eq!(QMatrix::from_rows(rows).rank(), 4);
        }
    }

    #[test]
    fn a2_theta_eigenspace_dimension() {
        let alg = build_algebra(Series::A, 2).unwrap();
        let dim_g1 = alg.theta_degree.iter().filter(|&&d| d == 1).count();
        assert_eq!(dim_g1, 2 * (alg.dual_coxeter as usize - 2));
        // kernel of ad E_theta has dim N - (2 h_vee - 2) = 8 - 4 = 4
        let ker = alg.kernel_ad(&alg.e_theta).unwrap();
        assert_eq!(ker.dim(), 4);
    }

    #[test]
    fn orth_complement_of_everything_is_zero() {
        let alg = build_algebra(Series::A, 2).unwrap();
        let full = Subspace::new(
            alg.dim,
            (0..alg.dim)
                .map(|i| {
                    (0..alg.dim)
                        .map(|j| if i == j { rint(1) } else { rint(0) })
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(alg.orth_complement(&full).dim(), 0);
    }

    #[test]
    fn table1_rows_match_reference_small() {
        for (series, rank, key) in [
            (Series::A, 3, "A"),
            (Series::B, 3, "B"),
            (Series::C, 3, "C"),
            (Series::D, 3, "D"),
        ] {
            let alg = build_algebra(series, rank).unwrap();
            let row = alg.table1_report().unwrap();
            let (h, hv, leaf) = table1_reference(key, rank as i64).unwrap();
            assert_eq!((row.h, row.h_vee, row.dim_leaf as i64), (h, hv, leaf), "{key}{rank}");
        }
    }

    #[test]
    fn rank_bounds_are_enforced() {
        assert!(build_algebra(Series::B, 1).is_err());
        assert!(build_algebra(Series::C, 1).is_err());
        assert!(build_algebra(Series::D, 2).is_err());
        assert!(build_algebra(Series::A, 0).is_err());
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(parse_descriptor("B2").unwrap(), (Series::B, 2));
        assert_eq!(parse_descriptor("a1").unwrap(), (Series::A, 1));
        assert!(parse_descriptor("Z5").is_err());
        assert!(parse_descriptor("B").is_err());
    }
}
