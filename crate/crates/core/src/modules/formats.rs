//! Deterministic text round-trip for module descriptions and operation
//! tables.
//!
//! Module description: one generator per line, `name:degree` or
//! `name:degree:odd`. Operation table: a `n <arity>` line, a `degree <r>`
//! line, then one line per stored entry,
//!
//! `[<forest>] (<key slots>) = <value>`
//!
//! where a key slot is `gen` or `d^k*gen` and a value is a sum of
//! `coeff*L-monomial*d^k*gen` products. Blank lines and `#` comments are
//! skipped.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{scalar, Monomial, Scalar, VarId};
use crate::calculus::LambdaPoly;
use crate::graphs::LineForest;
use crate::modules::classical::ClassicalOp;
use crate::modules::dmodule::{
    lambda_poly_text, FreeDModule, GenInfo, ModuleError, TensorKey, VElem,
};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Module(#[from] ModuleError),
}

fn err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn serialize_module(module: &FreeDModule) -> String {
    let mut out = String::new();
    for g in module.gens() {
        out.push_str(&g.name);
        out.push(':');
        out.push_str(&g.degree.to_string());
        if g.odd {
            out.push_str(":odd");
        }
        out.push('\n');
    }
    out
}

pub fn parse_module(text: &str) -> Result<FreeDModule, FormatError> {
    let mut gens = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(':').collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(err(line_no, "expected `name:degree` or `name:degree:odd`"));
        }
        let degree: u32 = parts[1]
            .trim()
            .parse()
            .map_err(|_| err(line_no, format!("bad degree `{}`", parts[1])))?;
        let odd = match parts.get(2) {
            None => false,
            Some(&"odd") => true,
            Some(other) => return Err(err(line_no, format!("unknown flag `{other}`"))),
        };
        gens.push(GenInfo {
            name: parts[0].trim().to_string(),
            degree,
            odd,
        });
    }
    Ok(FreeDModule::new(gens)?)
}

fn key_text(module: &FreeDModule, key: &TensorKey) -> String {
    key.iter()
        .map(|&(g, k)| {
            if k == 0 {
                module.name(g).to_string()
            } else {
                format!("d^{}*{}", k, module.name(g))
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn serialize_classical(op: &ClassicalOp) -> String {
    let module = op.module();
    let mut out = String::new();
    out.push_str(&format!("n {}\n", op.n()));
    out.push_str(&format!("degree {}\n", op.degree()));
    for (forest, values) in op.table() {
        for (key, value) in values {
            out.push_str(&format!(
                "[{}] ({}) = {}\n",
                forest.display_text(),
                key_text(module, key),
                lambda_poly_text(value, module),
            ));
        }
    }
    out
}

/// Parses a key slot: `gen` or `d^k*gen` (also accepting `d*gen`).
fn parse_slot(module: &FreeDModule, line_no: usize, slot: &str) -> Result<(u32, u32), FormatError> {
    let slot = slot.trim();
    let (dpow, name) = match slot.split_once('*') {
        Some((d_part, name)) => {
            let d_part = d_part.trim();
            let dpow = if d_part == "d" {
                1
            } else if let Some(k) = d_part.strip_prefix("d^") {
                k.parse::<u32>()
                    .map_err(|_| err(line_no, format!("bad d-power `{d_part}`")))?
            } else {
                return Err(err(line_no, format!("bad key slot `{slot}`")));
            };
            (dpow, name.trim())
        }
        None => (0, slot),
    };
    let g = module
        .find(name)
        .ok_or_else(|| err(line_no, format!("unknown generator `{name}`")))?;
    Ok((g, dpow))
}

/// Parses one `coeff*L-monomial*d^k*gen` product.
fn parse_value_term(
    module: &FreeDModule,
    line_no: usize,
    term: &str,
) -> Result<(Monomial, VElem), FormatError> {
    let mut coeff = scalar::one();
    let mut mono = Monomial::unit();
    let mut dpow = 0u32;
    let mut gen: Option<u32> = None;
    for factor in term.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(err(line_no, format!("empty factor in term `{term}`")));
        }
        let first = factor.chars().next().unwrap();
        if first == '-' || first.is_ascii_digit() {
            let c: Scalar = factor
                .parse()
                .map_err(|_| err(line_no, format!("bad rational `{factor}`")))?;
            coeff *= c;
        } else if factor == "d" {
            dpow += 1;
        } else if let Some(k) = factor.strip_prefix("d^") {
            dpow += k
                .parse::<u32>()
                .map_err(|_| err(line_no, format!("bad d-power `{factor}`")))?;
        } else if first == 'L' && factor[1..].starts_with(|c: char| c.is_ascii_digit()) {
            let (idx_part, exp) = match factor.split_once('^') {
                Some((v, e)) => (
                    v,
                    e.parse::<u32>()
                        .map_err(|_| err(line_no, format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            let idx: u32 = idx_part[1..]
                .parse()
                .map_err(|_| err(line_no, format!("bad variable `{factor}`")))?;
            mono = mono.mul(&Monomial::var_pow(VarId::BigLambda(idx), exp));
        } else {
            let g = module
                .find(factor)
                .ok_or_else(|| err(line_no, format!("unknown generator `{factor}`")))?;
            if gen.replace(g).is_some() {
                return Err(err(line_no, format!("two generators in term `{term}`")));
            }
        }
    }
    let g = gen.ok_or_else(|| err(line_no, format!("no generator in term `{term}`")))?;
    Ok((mono, VElem::basis(g, dpow).scale(&coeff)))
}

fn parse_value(
    module: &FreeDModule,
    line_no: usize,
    text: &str,
) -> Result<LambdaPoly<VElem>, FormatError> {
    let text = text.trim();
    if text == "0" {
        return Ok(LambdaPoly::zero());
    }
    let mut out: LambdaPoly<VElem> = LambdaPoly::zero();
    for term in text.split(" + ") {
        let (mono, c) = parse_value_term(module, line_no, term)?;
        out.add_term(mono, c);
    }
    Ok(out)
}

pub fn parse_classical(
    text: &str,
    module: Arc<FreeDModule>,
) -> Result<ClassicalOp, FormatError> {
    let mut n: Option<u32> = None;
    let mut degree: Option<i64> = None;
    let mut table: BTreeMap<LineForest, BTreeMap<TensorKey, LambdaPoly<VElem>>> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n ") {
            n = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| err(line_no, format!("bad arity `{rest}`")))?,
            );
            continue;
        }
        if let Some(rest) = line.strip_prefix("degree ") {
            degree = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| err(line_no, format!("bad degree `{rest}`")))?,
            );
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let (forest_text, rest) = rest
                .split_once(']')
                .ok_or_else(|| err(line_no, "missing `]` after forest"))?;
            let forest = LineForest::parse(forest_text.trim())
                .map_err(|e| err(line_no, format!("bad forest: {e}")))?;
            let rest = rest.trim_start();
            let rest = rest
                .strip_prefix('(')
                .ok_or_else(|| err(line_no, "missing `(` before key"))?;
            let (key_text, rest) = rest
                .split_once(')')
                .ok_or_else(|| err(line_no, "missing `)` after key"))?;
            let key: TensorKey = key_text
                .split(',')
                .map(|slot| parse_slot(&module, line_no, slot))
                .collect::<Result<_, _>>()?;
            let rest = rest.trim_start();
            let value_text = rest
                .strip_prefix('=')
                .ok_or_else(|| err(line_no, "missing `=` before value"))?;
            let value = parse_value(&module, line_no, value_text)?;
            if !value.is_zero() {
                table.entry(forest).or_default().insert(key, value);
            }
            continue;
        }
        return Err(err(line_no, format!("unrecognized line `{line}`")));
    }
    let n = n.ok_or_else(|| err(0, "missing `n <arity>` line"))?;
    let degree = degree.ok_or_else(|| err(0, "missing `degree <r>` line"))?;
    Ok(ClassicalOp::new(module, n, degree, table)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module() -> Arc<FreeDModule> {
        Arc::new(FreeDModule::rank2_graded())
    }

    #[test]
    fn module_description_round_trips() {
        let m = FreeDModule::new(vec![
            GenInfo::new("a", 0),
            GenInfo::odd("beta", 3),
            GenInfo::new("c2", 1),
        ])
        .unwrap();
        let text = serialize_module(&m);
        assert_eq!(text, "a:0\nbeta:3:odd\nc2:1\n");
        let back = parse_module(&text).unwrap();
        assert_eq!(m, back);

        let with_noise = format!("# generators\n\n{text}");
        assert_eq!(parse_module(&with_noise).unwrap(), m);
    }

    #[test]
    fn table_round_trips_exactly() {
        let m = module();
        let mut table = BTreeMap::new();

        let mut v1 = LambdaPoly::zero();
        v1.add_term(Monomial::unit(), VElem::basis(1, 2).scale(&scalar::ratio(-1, 2)));
        v1.add_term(
            Monomial::var_pow(VarId::BigLambda(1), 2),
            VElem::gen(1).add(&VElem::basis(1, 1).scale(&scalar::int(3))),
        );
        let mut values = BTreeMap::new();
        values.insert(vec![(0, 0), (0, 0), (0, 0)], v1);
        values.insert(
            vec![(0, 2), (1, 0), (0, 0)],
            LambdaPoly::from_term(
                Monomial::var_pow(VarId::BigLambda(1), 1)
                    .mul(&Monomial::var_pow(VarId::BigLambda(2), 1)),
                VElem::gen(0),
            ),
        );
        table.insert(LineForest::parse("1>3 | 2").unwrap(), values);

        let op = ClassicalOp::new(m.clone(), 3, 2, table).unwrap();
        let text = serialize_classical(&op);
        let back = parse_classical(&text, m).unwrap();
        assert_eq!(op.n(), back.n());
        assert_eq!(op.degree(), back.degree());
        assert_eq!(op.table(), back.table());
        // Serialization is stable under a second round trip.
        assert_eq!(text, serialize_classical(&back));
    }

    #[test]
    fn parse_reports_line_numbers() {
        let m = module();
        let text = "n 2\ndegree 0\n[1>2] (a, q) = b\n";
        let e = parse_classical(text, m.clone()).unwrap_err();
        assert_eq!(
            e,
            FormatError::Parse {
                line: 3,
                msg: "unknown generator `q`".to_string()
            }
        );

        let text = "n 2\ndegree 0\n[1>5] (a, a) = b\n";
        assert!(matches!(
            parse_classical(text, m.clone()).unwrap_err(),
            FormatError::Parse { line: 3, .. }
        ));

        let text = "degree 0\n[1>2] (a, a) = b\n";
        assert!(parse_classical(text, m.clone()).is_err());

        let text = "n 2\ndegree 0\n[1>2] (a, a) = b + 2*\n";
        assert!(matches!(
            parse_classical(text, m).unwrap_err(),
            FormatError::Parse { line: 3, .. }
        ));
    }

    #[test]
    fn accepts_alternate_spellings() {
        let m = module();
        let text = "n 2\ndegree 1\n[1>2] (d*a, a) = 2*b*L1 + 0*a\n";
        let op = parse_classical(text, m).unwrap();
        let value = &op.table()[&LineForest::parse("1>2").unwrap()][&vec![(0, 1), (0, 0)]];
        assert_eq!(
            value,
            &LambdaPoly::from_term(
                Monomial::var_pow(VarId::BigLambda(1), 1),
                VElem::gen(1).scale(&scalar::int(2)),
            )
        );
    }
}
