//! LaTeX rendering of polynomials and operator matrices, in the display
//! style of the printed formulas (eps powers, \partial_x powers, field
//! subscripts for x-derivatives).

use crate::diffring::poly::{jet_field, jet_order};
use crate::diffring::{DiffOp, DiffPoly, MatDiffOp};
use num_traits::{One, Signed};

fn rat_latex(r: &crate::rational::Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn field_latex(names: &[String], f: usize, s: usize) -> String {
    let base = names
        .get(f)
        .cloned()
        .unwrap_or_else(|| format!("w^{{{}}}", f + 1));
    match s {
        0 => base,
        1 => format!("{base}_x"),
        2 => format!("{base}_{{xx}}"),
        3 => format!("{base}_{{xxx}}"),
        k => format!("{base}_{{({k})}}"),
    }
}

pub fn poly_latex(p: &DiffPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.sorted_terms().into_iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || (m.jets.is_empty() && m.eps == 0 && m.lam == 0 && m.p == 0) {
            factors.push(rat_latex(&mag));
        }
        if m.eps != 0 {
            factors.push(if m.eps == 1 {
                "\\epsilon".into()
            } else {
                format!("\\epsilon^{{{}}}", m.eps)
            });
        }
        for &(k, e) in &m.jets {
            let v = field_latex(names, jet_field(k), jet_order(k));
            factors.push(if e == 1 {
                v
            } else {
                format!("\\left({v}\\right)^{{{e}}}")
            });
        }
        if m.lam > 0 {
            factors.push(if m.lam == 1 {
                "\\lambda".into()
            } else {
                format!("\\lambda^{{{}}}", m.lam)
            });
        }
        if m.p > 0 {
            factors.push(if m.p == 1 {
                "p".into()
            } else {
                format!("p^{{{}}}", m.p)
            });
        }
        out.push_str(&factors.join(" "));
    }
    out
}

pub fn op_latex(op: &DiffOp, names: &[String]) -> String {
    if op.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let coeffs: Vec<_> = op.coeffs().collect();
    for (m, coeff) in coeffs.into_iter().rev() {
        let dx = match m {
            0 => String::new(),
            1 => "\\partial_x".into(),
            k => format!("\\partial_x^{{{k}}}"),
        };
        let c = poly_latex(coeff, names);
        let piece = if m == 0 {
            c
        } else if coeff == &DiffPoly::one() {
            dx
        } else if coeff.num_terms() == 1 {
            format!("{c}\\,{dx}")
        } else {
            format!("\\left({c}\\right){dx}")
        };
        parts.push(piece);
    }
    let mut out = String::new();
    for (i, piece) in parts.iter().enumerate() {
        if i == 0 {
            out.push_str(piece);
        } else if let Some(rest) = piece.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(piece);
        }
    }
    out
}

pub fn matop_latex(mat: &MatDiffOp, names: &[String]) -> String {
    let mut out = String::from("\\begin{pmatrix}\n");
    for i in 0..mat.rows {
        let row: Vec<String> = (0..mat.cols).map(|j| op_latex(mat.get(i, j), names)).collect();
        out.push_str(&row.join(" & "));
        if i + 1 < mat.rows {
            out.push_str(" \\\\");
        }
        out.push('\n');
    }
    out.push_str("\\end{pmatrix}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn kdv_bracket_renders_like_the_display() {
        let u = DiffPoly::var(0, 0);
        let op = DiffOp::mult(DiffPoly::var(0, 1).neg())
            .add(&DiffOp::term(u.scale(&rat(-2, 1)), 1))
            .add(&DiffOp::term(DiffPoly::eps(2).scale(&rat(1, 2)), 3));
        let s = op_latex(&op, &["u".to_string()]);
        assert!(s.contains("\\partial_x^{3}"));
        assert!(s.contains("\\epsilon^{2}"));
        assert!(s.contains("u_x"));
        assert!(s.starts_with("\\frac{1}{2}"));
    }
}
