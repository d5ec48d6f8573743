//! JSON encodings: polynomials, operators, algebras, reports. All maps are
//! emitted in sorted order so repeated runs are byte-identical.

use crate::algebra::LieAlg;
use crate::diffring::{DiffOp, DiffPoly, MatDiffOp, Monomial};
use crate::error::{Error, Result};
use crate::rational::{format_rat, parse_rat};
use serde_json::{json, Value};
use smallvec::SmallVec;

pub fn poly_to_json(p: &DiffPoly) -> Value {
    let mut terms: Vec<Value> = Vec::new();
    for (m, c) in p.sorted_terms() {
        let w: Vec<Value> = m
            .jets
            .iter()
            .map(|&(k, e)| {
                json!([
                    crate::diffring::poly::jet_field(k),
                    crate::diffring::poly::jet_order(k),
                    e
                ])
            })
            .collect();
        let mono = json!({"w": w, "eps": m.eps, "lam": m.lam, "p": m.p});
        terms.push(json!([mono, format_rat(c)]));
    }
    Value::Array(terms)
}

pub fn poly_from_json(v: &Value, pointer: &str) -> Result<DiffPoly> {
    let arr = v
        .as_array()
        .ok_or_else(|| validation(pointer, "expected an array of [monomial, coeff] pairs"))?;
    let mut out = DiffPoly::zero();
    for (t, pair) in arr.iter().enumerate() {
        let ptr = format!("{pointer}/{t}");
        let pair = pair
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| validation(&ptr, "expected [monomial, coeff]"))?;
        let mono_v = &pair[0];
        let coeff = parse_rat(
            pair[1]
                .as_str()
                .ok_or_else(|| validation(&ptr, "coefficient must be a string"))?,
        )?;
        let mut jets: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        if let Some(ws) = mono_v.get("w").and_then(Value::as_array) {
            for w in ws {
                let triple = w
                    .as_array()
                    .filter(|x| x.len() == 3)
                    .ok_or_else(|| validation(&ptr, "w entries are [field, order, exp]"))?;
                let f = triple[0]
                    .as_u64()
                    .ok_or_else(|| validation(&ptr, "field index must be a nonnegative integer"))?;
                let s = triple[1]
                    .as_u64()
                    .ok_or_else(|| validation(&ptr, "derivative order must be nonnegative"))?;
                let e = triple[2]
                    .as_u64()
                    .filter(|&e| e > 0)
                    .ok_or_else(|| validation(&ptr, "exponent must be positive"))?;
                jets.push((
                    crate::diffring::poly::jet_key(f as usize, s as usize),
                    e as u32,
                ));
            }
        }
        jets.sort_unstable();
        let eps = mono_v.get("eps").and_then(Value::as_i64).unwrap_or(0) as i32;
        let lam = mono_v.get("lam").and_then(Value::as_u64).unwrap_or(0) as u32;
        let p = mono_v.get("p").and_then(Value::as_u64).unwrap_or(0) as u32;
        let m = Monomial {
            jets,
            eps,
            lam,
            p,
        };
        out.add_assign(&DiffPoly::monomial(m, coeff));
    }
    Ok(out)
}

pub fn op_to_json(op: &DiffOp) -> Value {
    let terms: Vec<Value> = op
        .coeffs()
        .map(|(m, c)| json!({"m": m, "coeff": poly_to_json(c)}))
        .collect();
    Value::Array(terms)
}

pub fn op_from_json(v: &Value, pointer: &str) -> Result<DiffOp> {
    let arr = v
        .as_array()
        .ok_or_else(|| validation(pointer, "expected an array of {m, coeff} terms"))?;
    let mut out = DiffOp::zero();
    for (t, term) in arr.iter().enumerate() {
        let ptr = format!("{pointer}/{t}");
        let m = term
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| validation(&ptr, "missing derivative order 'm'"))?;
        let coeff = poly_from_json(
            term.get("coeff")
                .ok_or_else(|| validation(&ptr, "missing 'coeff'"))?,
            &format!("{ptr}/coeff"),
        )?;
        out = out.add(&DiffOp::term(coeff, m as usize));
    }
    Ok(out)
}

pub fn matop_to_json(m: &MatDiffOp) -> Value {
    let rows: Vec<Value> = (0..m.rows)
        .map(|i| Value::Array((0..m.cols).map(|j| op_to_json(m.get(i, j))).collect()))
        .collect();
    json!({"rows": m.rows, "cols": m.cols, "entries": rows})
}

pub fn matop_from_json(v: &Value, pointer: &str) -> Result<MatDiffOp> {
    let rows = v
        .get("rows")
        .and_then(Value::as_u64)
        .ok_or_else(|| validation(pointer, "missing 'rows'"))? as usize;
    let cols = v
        .get("cols")
        .and_then(Value::as_u64)
        .ok_or_else(|| validation(pointer, "missing 'cols'"))? as usize;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .filter(|a| a.len() == rows)
        .ok_or_else(|| validation(pointer, "entries must be an array of rows"))?;
    let mut out = MatDiffOp::zero(rows, cols);
    for (i, row) in entries.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == cols)
            .ok_or_else(|| validation(&format!("{pointer}/entries/{i}"), "bad row length"))?;
        for (j, cell) in row.iter().enumerate() {
            out.set(
                i,
                j,
                op_from_json(cell, &format!("{pointer}/entries/{i}/{j}"))?,
            );
        }
    }
    Ok(out)
}

pub fn lie_to_json(alg: &LieAlg) -> Value {
    let mut c_list: Vec<Value> = Vec::new();
    for i in 0..alg.dim {
        for j in 0..alg.dim {
            for (l, v) in alg.bracket_basis(i, j) {
                c_list.push(json!([i, j, l, format_rat(v)]));
            }
        }
    }
    let g_rows: Vec<Value> = (0..alg.dim)
        .map(|i| {
            Value::Array(
                (0..alg.dim)
                    .map(|j| Value::String(format_rat(alg.g.get(i, j))))
                    .collect(),
            )
        })
        .collect();
    json!({
        "name": alg.name,
        "dim": alg.dim,
        "rank": alg.rank,
        "h": alg.coxeter,
        "h_vee": alg.dual_coxeter,
        "basis": alg.basis_labels,
        "c": c_list,
        "g": g_rows,
        "chevalley": {
            "X": alg.chevalley.x,
            "Y": alg.chevalley.y,
            "H": alg.chevalley.h,
        },
    })
}

fn validation(pointer: &str, detail: &str) -> Error {
    Error::Validation {
        pointer: pointer.to_string(),
        detail: detail.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn poly_json_round_trip() {
        let p = DiffPoly::eps(-1)
            .mul(&DiffPoly::var(0, 1))
            .scale(&rat(3, 2))
            .add(&DiffPoly::lam().mul(&DiffPoly::p_var()));
        let v = poly_to_json(&p);
        let q = poly_from_json(&v, "/").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn operator_json_round_trip() {
        let op = DiffOp::term(DiffPoly::var(0, 0), 1).add(&DiffOp::mult(DiffPoly::var(0, 1)));
        let v = op_to_json(&op);
        assert_eq!(op_from_json(&v, "/").unwrap(), op);
    }

    #[test]
    fn matop_json_round_trip_and_errors() {
        let (p, _) = crate::pencils::builtin("kdv").unwrap();
        let v = matop_to_json(&p.operator);
        let back = matop_from_json(&v, "/operator").unwrap();
        assert_eq!(back, p.operator);
        let bad = serde_json::json!({"rows": 1});
        let err = matop_from_json(&bad, "/operator").unwrap_err();
        assert!(matches!(err, Error::Validation { .. }));
    }
}
