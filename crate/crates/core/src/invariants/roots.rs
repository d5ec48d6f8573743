//! Lambda-root expansions of characteristic polynomials around p = 0.
//!
//! Exact rational arithmetic whenever the base root is rational at the
//! sample point; otherwise high-precision dyadic floats. Odd powers of p
//! must stay below tolerance (they vanish identically in the semisimple
//! case).

use super::charpoly::CharPoly;
use crate::error::{Error, Result};
use crate::numeric::{BigFloat, DEFAULT_PREC};
use crate::rational::{rat_to_f64, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// A reported number: exact when the computation stayed rational.
#[derive(Clone, Debug)]
pub enum NumValue {
    Exact(Rat),
    Approx(f64),
}

impl NumValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            NumValue::Exact(r) => rat_to_f64(r),
            NumValue::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            NumValue::Exact(r) => Some(r),
            NumValue::Approx(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootSeries {
    /// coefficients of p^0 .. p^order
    pub coeffs: Vec<NumValue>,
    pub exact: bool,
    /// largest magnitude among odd-power coefficients
    pub max_odd_abs: f64,
}

#[derive(Clone, Debug)]
pub struct RootExpansion {
    pub base_point: Vec<(usize, Rat)>,
    pub order: usize,
    pub roots: Vec<RootSeries>,
}

/// Expands every lambda-root of `c` at the rational field point `w0`
/// (indexed by `fields`) to the given even order.
pub fn lambda_roots(
    c: &CharPoly,
    fields: &[usize],
    w0: &[Rat],
    order: usize,
    odd_tol: f64,
) -> Result<RootExpansion> {
    let values: BTreeMap<usize, Rat> = fields.iter().copied().zip(w0.iter().cloned()).collect();
    let at_point = c.poly.subst_fields(&values);
    if !at_point.jet_vars().is_empty() {
        return Err(Error::Precondition(
            "characteristic polynomial still depends on unassigned fields".into(),
        ));
    }
    // dense grid over (p, lam)
    let mut grid: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
    for (m, coeff) in at_point.terms() {
        *grid.entry((m.p, m.lam)).or_insert_with(Rat::zero) += coeff;
    }
    if grid.is_empty() {
        return Err(Error::Semisimple("characteristic polynomial vanishes at the point".into()));
    }
    let n0 = grid.keys().map(|&(p, _)| p).min().unwrap();
    let phi: Vec<(u32, u32, Rat)> = grid
        .iter()
        .map(|(&(p, l), c)| (p - n0, l, c.clone()))
        .collect();
    // base polynomial R0(lam) = phi at p = 0
    let max_lam = phi.iter().map(|&(_, l, _)| l).max().unwrap_or(0) as usize;
    let mut r0 = vec![Rat::zero(); max_lam + 1];
    for (p, l, c) in &phi {
        if *p == 0 {
            r0[*l as usize] = c.clone();
        }
    }
    while r0.last().is_some_and(|c| c.is_zero()) {
        r0.pop();
    }
    if r0.len() <= 1 {
        return Err(Error::Semisimple(
            "no lambda-dependence at the sample point".into(),
        ));
    }
    let (rational, residual) = rational_roots(&r0);
    let mut roots = Vec::new();
    // exact branches
    for u in &rational {
        let series = series_solve_rat(&phi, u, order)?;
        roots.push(series);
    }
    // numeric branches for whatever is left
    if residual.len() > 1 {
        for u in real_roots_dyadic(&residual)? {
            roots.push(series_solve_dyadic(&phi, &u, order)?);
        }
    }
    // pairwise distinct base values (semisimplicity)
    let bases: Vec<f64> = roots.iter().map(|r| r.coeffs[0].to_f64()).collect();
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            if (bases[i] - bases[j]).abs() < 1e-12 {
                return Err(Error::Semisimple(format!(
                    "coinciding lambda-roots {} and {} at the sample point",
                    bases[i], bases[j]
                )));
            }
        }
    }
    // evenness gate
    for r in &roots {
        if r.max_odd_abs > odd_tol {
            return Err(Error::Integrity(format!(
                "odd p-power coefficient of magnitude {} exceeds tolerance {odd_tol}",
                r.max_odd_abs
            )));
        }
    }
    Ok(RootExpansion {
        base_point: fields.iter().copied().zip(w0.iter().cloned()).collect(),
        order,
        roots,
    })
}

/// All rational roots (with deflation); returns them plus the deflated
/// residual polynomial.
pub fn rational_roots(poly: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut p = poly.to_vec();
    let mut roots = Vec::new();
    loop {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        if p.len() <= 1 {
            return (roots, p);
        }
        // zero roots
        if p[0].is_zero() {
            roots.push(Rat::zero());
            p.remove(0);
            continue;
        }
        if p.len() == 2 {
            roots.push(-&p[0] / &p[1]);
            return (roots, vec![p[1].clone()]);
        }
        if p.len() == 3 {
            // quadratic formula, exact when the discriminant is a square
            let (a0, a1, a2) = (&p[0], &p[1], &p[2]);
            let disc = a1 * a1 - Rat::from_integer(BigInt::from(4)) * a0 * a2;
            if let Some(s) = rat_sqrt(&disc) {
                let two_a2 = Rat::from_integer(BigInt::from(2)) * a2;
                roots.push((-a1 + &s) / &two_a2);
                roots.push((-a1 - &s) / &two_a2);
                return (roots, vec![p[2].clone()]);
            }
            return (roots, p);
        }
        match find_one_rational_root(&p) {
            Some(r) => {
                p = deflate(&p, &r);
                roots.push(r);
            }
            None => return (roots, p),
        }
    }
}

/// Exact square root of a nonnegative rational, if it exists.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    (&sn * &sn == *r.numer() && &sd * &sd == *r.denom()).then(|| Rat::new(sn, sd))
}

fn eval_poly(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

fn deflate(p: &[Rat], root: &Rat) -> Vec<Rat> {
    // synthetic division by (x - root)
    let mut out = vec![Rat::zero(); p.len() - 1];
    let mut carry = Rat::zero();
    for i in (0..p.len() - 1).rev() {
        let c = &p[i + 1] + &carry;
        carry = &c * root;
        out[i] = c;
    }
    out
}

fn find_one_rational_root(p: &[Rat]) -> Option<Rat> {
    // clear denominators to a primitive integer polynomial
    let mut lcm = BigInt::one();
    for c in p {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let a0 = ints.first()?.clone();
    let an = ints.last()?.clone();
    let d0 = small_divisors(&a0)?;
    let dn = small_divisors(&an)?;
    for num in &d0 {
        for den in &dn {
            for sign in [1i64, -1] {
                let cand = Rat::new(num * BigInt::from(sign), den.clone());
                if eval_poly(p, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let v = n.abs().to_u64()?;
    if v == 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d != v / d {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
        if out.len() > 4096 {
            return None;
        }
    }
    Some(out)
}

/// Simple real roots of a rational polynomial, polished to the working
/// dyadic precision; complex roots are rejected.
fn real_roots_dyadic(p: &[Rat]) -> Result<Vec<BigFloat>> {
    let eigs = crate::numeric::polyroots::complex_roots(p);
    let scale: f64 = p.iter().map(|c| rat_to_f64(c).abs()).fold(1.0, f64::max);
    let mut out = Vec::new();
    for e in eigs {
        if e.im.abs() > 1e-7 * scale.max(1.0) {
            return Err(Error::Semisimple(format!(
                "complex lambda-root {} + {}i at the sample point",
                e.re, e.im
            )));
        }
        out.push(newton_polish(p, e.re)?);
    }
    Ok(out)
}

fn newton_polish(p: &[Rat], seed: f64) -> Result<BigFloat> {
    let prec = DEFAULT_PREC;
    let pf: Vec<BigFloat> = p.iter().map(|c| BigFloat::from_rat(c, prec)).collect();
    let dpf: Vec<BigFloat> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| BigFloat::from_rat(&(c * Rat::from_integer(BigInt::from(i))), prec))
        .collect();
    let horner = |cs: &[BigFloat], x: &BigFloat| -> BigFloat {
        cs.iter()
            .rev()
            .fold(BigFloat::zero(prec), |acc, c| acc.mul(x).add(c))
    };
    let mut x = BigFloat::from_rat(
        &Rat::new(
            BigInt::from((seed * 1e12) as i64),
            BigInt::from(1_000_000_000_000i64),
        ),
        prec,
    );
    for _ in 0..64 {
        let f = horner(&pf, &x);
        let d = horner(&dpf, &x);
        if d.is_zero() {
            return Err(Error::Semisimple("multiple root in Newton polish".into()));
        }
        let step = f.div(&d);
        x = x.sub(&step);
        if step.below_pow2(prec as i64 - 16) {
            break;
        }
    }
    Ok(x)
}

fn series_solve_rat(phi: &[(u32, u32, Rat)], u: &Rat, order: usize) -> Result<RootSeries> {
    // derivative of phi in lam at (p=0, lam=u)
    let mut d0 = Rat::zero();
    for (p, l, c) in phi {
        if *p == 0 && *l >= 1 {
            d0 += c * Rat::from_integer(BigInt::from(*l)) * pow_rat(u, *l - 1);
        }
    }
    if d0.is_zero() {
        return Err(Error::Semisimple("multiple lambda-root at the sample point".into()));
    }
    let mut coeffs = vec![Rat::zero(); order + 1];
    coeffs[0] = u.clone();
    for m in 1..=order {
        // coefficient of p^m in phi(p, current series)
        let cm = series_residual_rat(phi, &coeffs, m);
        coeffs[m] = -cm / &d0;
    }
    let mut max_odd = 0f64;
    for (i, c) in coeffs.iter().enumerate() {
        if i % 2 == 1 {
            max_odd = max_odd.max(rat_to_f64(c).abs());
        }
    }
    Ok(RootSeries {
        coeffs: coeffs.into_iter().map(NumValue::Exact).collect(),
        exact: true,
        max_odd_abs: max_odd,
    })
}

fn pow_rat(x: &Rat, e: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

fn series_residual_rat(phi: &[(u32, u32, Rat)], series: &[Rat], m: usize) -> Rat {
    let k = m + 1; // truncation length
    let max_lam = phi.iter().map(|&(_, l, _)| l).max().unwrap_or(0);
    // powers of the series, truncated
    let mut powers: Vec<Vec<Rat>> = Vec::with_capacity(max_lam as usize + 1);
    powers.push({
        let mut one = vec![Rat::zero(); k];
        one[0] = Rat::one();
        one
    });
    for _ in 0..max_lam {
        let prev = powers.last().unwrap();
        let mut next = vec![Rat::zero(); k];
        for i in 0..k {
            if prev[i].is_zero() {
                continue;
            }
            for j in 0..k - i {
                if j < series.len() && !series[j].is_zero() {
                    let add = &prev[i] * &series[j];
                    next[i + j] += add;
                }
            }
        }
        powers.push(next);
    }
    let mut cm = Rat::zero();
    for (p, l, c) in phi {
        let p = *p as usize;
        if p > m {
            continue;
        }
        let need = m - p;
        if need < k {
            cm += c * &powers[*l as usize][need];
        }
    }
    cm
}

fn series_solve_dyadic(
    phi: &[(u32, u32, Rat)],
    u: &BigFloat,
    order: usize,
) -> Result<RootSeries> {
    let prec = DEFAULT_PREC;
    let phif: Vec<(u32, u32, BigFloat)> = phi
        .iter()
        .map(|(p, l, c)| (*p, *l, BigFloat::from_rat(c, prec)))
        .collect();
    let mut d0 = BigFloat::zero(prec);
    for (p, l, c) in &phif {
        if *p == 0 && *l >= 1 {
            let mut t = c.clone();
            t = t.mul(&BigFloat::from_int(*l as i64, prec));
            for _ in 0..(*l - 1) {
                t = t.mul(u);
            }
            d0 = d0.add(&t);
        }
    }
    if d0.below_pow2(prec as i64 / 2) {
        return Err(Error::Semisimple("nearly-multiple numeric lambda-root".into()));
    }
    let mut coeffs = vec![BigFloat::zero(prec); order + 1];
    coeffs[0] = u.clone();
    for m in 1..=order {
        let k = m + 1;
        let max_lam = phif.iter().map(|&(_, l, _)| l).max().unwrap_or(0);
        let mut powers: Vec<Vec<BigFloat>> = Vec::with_capacity(max_lam as usize + 1);
        powers.push({
            let mut one = vec![BigFloat::zero(prec); k];
            one[0] = BigFloat::from_int(1, prec);
            one
        });
        for _ in 0..max_lam {
            let prev = powers.last().unwrap();
            let mut next = vec![BigFloat::zero(prec); k];
            for i in 0..k {
                if prev[i].is_zero() {
                    continue;
                }
                for j in 0..k - i {
                    let add = prev[i].mul(&coeffs[j]);
                    next[i + j] = next[i + j].add(&add);
                }
            }
            powers.push(next);
        }
        let mut cm = BigFloat::zero(prec);
        for (p, l, c) in &phif {
            let p = *p as usize;
            if p > m {
                continue;
            }
            let need = m - p;
            if need < k {
                cm = cm.add(&c.mul(&powers[*l as usize][need]));
            }
        }
        coeffs[m] = cm.div(&d0).neg();
    }
    let mut max_odd = 0f64;
    for (i, c) in coeffs.iter().enumerate() {
        if i % 2 == 1 {
            max_odd = max_odd.max(c.to_f64().abs());
        }
    }
    Ok(RootSeries {
        coeffs: coeffs.iter().map(|c| NumValue::Approx(c.to_f64())).collect(),
        exact: false,
        max_odd_abs: max_odd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::DiffPoly;
    use crate::invariants::charpoly::char_poly;
    use crate::invariants::symbol::symbol_matrix;
    use crate::pencils::{builtin, scalar_deformation_pencil};
    use crate::rational::{rat, rint};
    use crate::reduction::dirac_reduce;

    #[test]
    fn kdv_root_is_u_minus_quarter_p_squared() {
        let (p, q) = builtin("kdv").unwrap();
        let red = dirac_reduce(&p, &q, 24).unwrap();
        let c = char_poly(&symbol_matrix(&red.operator, None).unwrap());
        let exp = lambda_roots(&c, &[0], &[rat(5, 3)], 4, 1e-25).unwrap();
        assert_eq!(exp.roots.len(), 1);
        let r = &exp.roots[0];
        assert!(r.exact);
        assert_eq!(r.coeffs[0].as_exact(), Some(&rat(5, 3)));
        assert_eq!(r.coeffs[2].as_exact(), Some(&rat(-1, 4)));
        assert_eq!(r.coeffs[4].as_exact(), Some(&rint(0)));
        assert_eq!(r.max_odd_abs, 0.0);
    }

    #[test]
    fn scalar_root_with_linear_coefficient() {
        // c(u) = u at u = 3: lambda = 3 + 3 p^2 + ...
        let p = scalar_deformation_pencil(&DiffPoly::var(0, 0)).unwrap();
        let c = char_poly(&symbol_matrix(&p.operator, None).unwrap());
        let exp = lambda_roots(&c, &[0], &[rint(3)], 2, 1e-25).unwrap();
        let r = &exp.roots[0];
        assert_eq!(r.coeffs[0].as_exact(), Some(&rint(3)));
        assert_eq!(r.coeffs[2].as_exact(), Some(&rint(3)));
    }

    #[test]
    fn rational_root_extraction() {
        // (lam - 2)(lam + 3/2) = lam^2 - 1/2 lam - 3
        let p = vec![rint(-3), rat(-1, 2), rint(1)];
        let (roots, _) = rational_roots(&p);
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&rint(2)));
        assert!(roots.contains(&rat(-3, 2)));
    }

    #[test]
    fn irrational_roots_go_dyadic() {
        // R = (lam^2 - 2) p + p^3: branches at lam = +-sqrt(2)
        let c = CharPoly {
            poly: DiffPoly::lam()
                .pow(2)
                .sub(&DiffPoly::from_int(2))
                .mul(&DiffPoly::p_var())
                .add(&DiffPoly::p_var().pow(3)),
            lambda_degree: 2,
        };
        let exp = lambda_roots(&c, &[], &[], 2, 1e-25).unwrap();
        assert_eq!(exp.roots.len(), 2);
        let mut bases: Vec<f64> = exp.roots.iter().map(|r| r.coeffs[0].to_f64()).collect();
        bases.sort_by(f64::total_cmp);
        assert!((bases[0] + 2f64.sqrt()).abs() < 1e-30_f64.max(1e-12));
        assert!((bases[1] - 2f64.sqrt()).abs() < 1e-12);
        // lambda(p) = ±sqrt(2) + lambda_2 p^2 with 2 lam lam_2 + 1 = 0
        let lam2 = exp.roots[0].coeffs[2].to_f64();
        let base = exp.roots[0].coeffs[0].to_f64();
        assert!((2.0 * base * lam2 + 1.0).abs() < 1e-9);
    }

    #[test]
    fn multiple_root_is_rejected() {
        // (lam - 1)^2 * p + p^3
        let c = CharPoly {
            poly: DiffPoly::lam()
                .sub(&DiffPoly::one())
                .pow(2)
                .mul(&DiffPoly::p_var())
                .add(&DiffPoly::p_var().pow(3)),
            lambda_degree: 2,
        };
        assert!(matches!(
            lambda_roots(&c, &[], &[], 2, 1e-25),
            Err(Error::Semisimple(_))
        ));
    }
}
