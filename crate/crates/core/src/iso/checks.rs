//! Numeric certification of evaluator properties: the two input-derivation
//! identities, independence of the stored representatives, and the degree
//! filtration bound.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{scalar, z_live, DiagRat, MPoly, VarId};
use crate::calculus::LambdaPoly;
use crate::graphs::{enumerate_all_line_forests, p_gamma};
use crate::modules::{
    big_lambda_vars, relation_image, ChiralError, ChiralEval, ClassicalOp, FreeDModule,
    TensorElem, VElem,
};
use crate::report::{CheckReport, Counterexample};

use super::inverse::inverse_map;

fn zvar(i: u32) -> MPoly {
    MPoly::var(VarId::Z(i))
}

fn diff_poly(i: u32, j: u32) -> MPoly {
    zvar(i).sub(&zvar(j))
}

/// Translation-invariant polynomial multipliers of degree at most two:
/// `1`, every `zi - zj`, and every product of two differences.
fn difference_multipliers(n: u32) -> Vec<(String, MPoly)> {
    let mut singles = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            singles.push((format!("(z{i}-z{j})"), diff_poly(i, j)));
        }
    }
    let mut out = vec![("1".to_string(), MPoly::one())];
    out.extend(singles.clone());
    for a in 0..singles.len() {
        for b in a..singles.len() {
            out.push((
                format!("{}*{}", singles[a].0, singles[b].0),
                singles[a].1.mul(&singles[b].1),
            ));
        }
    }
    out
}

/// A finite family spanning the translation-invariant inputs up to the
/// tested degrees: every line-forest product of simple poles times a
/// difference multiplier of degree at most two, plus pure powers
/// `(zi-zj)^m` for `1 <= |m| <= 3`. Each entry carries a printable label.
pub fn spanning_functions(n: u32) -> Vec<(String, DiagRat)> {
    if n <= 1 {
        return vec![("1".to_string(), DiagRat::one(n))];
    }
    let mut out = Vec::new();
    let multipliers = difference_multipliers(n);
    for forest in enumerate_all_line_forests(n) {
        let base = p_gamma(&forest.to_digraph());
        for (qlabel, q) in &multipliers {
            let f = base
                .mul_mpoly(q)
                .expect("multiplying by a polynomial in live variables cannot fail");
            let label = if qlabel == "1" {
                format!("p[{}]", forest.display_text())
            } else {
                format!("{}*p[{}]", qlabel, forest.display_text())
            };
            out.push((label, f));
        }
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            for m in [-3i32, -2, -1, 1, 2, 3] {
                let f = if m > 0 {
                    DiagRat::from_mpoly(n, diff_poly(i, j).pow(m as u32))
                        .expect("difference powers are valid numerators")
                } else {
                    DiagRat::from_parts(
                        z_live(n),
                        MPoly::one(),
                        [((VarId::Z(i), VarId::Z(j)), (-m) as u32)]
                            .into_iter()
                            .collect(),
                    )
                    .expect("a single diagonal pole is valid")
                };
                out.push((format!("(z{i}-z{j})^{m}"), f));
            }
        }
    }
    out
}

/// Basis tensors to evaluate on: every key with all slot operator-powers
/// zero, plus `extra` random keys with powers at most one.
pub fn sample_tensors(
    module: &Arc<FreeDModule>,
    n: u32,
    extra: usize,
    rng: &mut impl Rng,
) -> Vec<TensorElem> {
    let mut keys = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for key in &keys {
            for g in 0..module.rank() {
                let mut k = key.clone();
                k.push((g, 0u32));
                next.push(k);
            }
        }
        keys = next;
    }
    let mut out: Vec<TensorElem> = keys
        .into_iter()
        .map(|k| TensorElem::basis(n, k))
        .collect();
    for _ in 0..extra {
        let key: Vec<(u32, u32)> = (0..n)
            .map(|_| (rng.random_range(0..module.rank()), rng.random_range(0..=1u32)))
            .collect();
        out.push(TensorElem::basis(n, key));
    }
    out.dedup();
    out
}

/// Checks the two derivation identities on every pair from the sample set:
/// differentiating the input function in `zi` equals acting by the slot
/// operator plus multiplying the output by `li`, and multiplying the input
/// by `zi - zj` equals the output derivative `d/dlj - d/dli`.
pub fn check_sesquilinearity(
    x: &dyn ChiralEval,
    funcs: &[(String, DiagRat)],
    tensors: &[TensorElem],
) -> Result<CheckReport, ChiralError> {
    let n = x.n();
    let module = x.module().clone();
    let mut report = CheckReport::default();
    for (label, f) in funcs {
        for v in tensors {
            let base = x.eval(v, f)?;
            for i in 1..=n {
                let df = f.diff_z(VarId::Z(i))?;
                let lhs = x.eval(v, &df)?;
                let rhs = x.eval(&v.apply_d_at(i), f)?.add(&base.mul_lambda(i));
                report.record(lhs == rhs, || Counterexample {
                    input: format!(
                        "derivation identity, slot {i}: v = {}, f = {label}",
                        v.display_text(&module)
                    ),
                    expected: rhs.display_text(&module),
                    got: lhs.display_text(&module),
                });
            }
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    let g = f.mul_mpoly(&diff_poly(i, j))?;
                    let lhs = x.eval(v, &g)?;
                    let rhs = base.diff_pair(j, i);
                    report.record(lhs == rhs, || Counterexample {
                        input: format!(
                            "difference identity, pair ({i},{j}): v = {}, f = {label}",
                            v.display_text(&module)
                        ),
                        expected: rhs.display_text(&module),
                        got: lhs.display_text(&module),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// The same operation with every stored value replaced by an equivalent
/// representative: round 0 adds nothing, round 1 adds the relation image of
/// a constant of the matching degree, later rounds add relation images of
/// random degree-matched polynomials.
pub fn perturbed_op(op: &ClassicalOp, round: u32, rng: &mut impl Rng) -> ClassicalOp {
    let module = op.module().clone();
    let mut table = op.table().clone();
    for (forest, values) in table.iter_mut() {
        let p = forest.num_lines() as u32;
        let s = forest.num_edges() as i64;
        let vars = big_lambda_vars(p);
        for (key, value) in values.iter_mut() {
            let t = i64::from(TensorElem::key_degree(&module, key));
            let target = s + t - op.degree();
            let gens = module.gens_of_degree(target);
            if gens.is_empty() || round == 0 {
                continue;
            }
            let q = if round == 1 {
                LambdaPoly::constant(VElem::gen(gens[0]))
            } else {
                let mut q = LambdaPoly::zero();
                for mono in crate::modules::lambda_monomials(p, 2) {
                    if rng.random_range(0..2) == 0 {
                        continue;
                    }
                    let g = gens[rng.random_range(0..gens.len())];
                    let dpow = rng.random_range(0..=1u32);
                    let c = rng.random_range(-2..=2i64);
                    let mut coeff = VElem::zero();
                    coeff.add_term(g, dpow, scalar::int(c));
                    q.add_term(mono, coeff);
                }
                q
            };
            if q.is_zero() {
                continue;
            }
            *value = value.add(&relation_image(&q, &vars));
        }
    }
    ClassicalOp::new(module, op.n(), op.degree(), table)
        .expect("perturbed tables keep the original shape")
}

/// Verifies that the evaluator built from a table only depends on the
/// stored values through their classes: perturbing every value by a
/// relation image leaves all outputs unchanged.
pub fn check_well_definedness(
    op: &ClassicalOp,
    funcs: &[(String, DiagRat)],
    tensors: &[TensorElem],
    rounds: u32,
    rng: &mut impl Rng,
) -> Result<CheckReport, ChiralError> {
    let module = op.module().clone();
    let baseline = inverse_map(op, true)?;
    let mut report = CheckReport::default();
    for round in 0..rounds {
        let perturbed = perturbed_op(op, round, rng);
        let shifted = inverse_map(&perturbed, true)?;
        for (label, f) in funcs {
            for v in tensors {
                let expected = baseline.eval(v, f)?;
                let got = shifted.eval(v, f)?;
                report.record(expected == got, || Counterexample {
                    input: format!(
                        "representative round {round}: v = {}, f = {label}",
                        v.display_text(&module)
                    ),
                    expected: expected.display_text(&module),
                    got: got.display_text(&module),
                });
            }
        }
    }
    Ok(report)
}

/// One filtration probe: input level, printable input, the largest
/// generator degree observed in the output (absent for zero), the bound
/// `level - r`, and the verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationCheck {
    pub level: i64,
    pub input: String,
    pub observed: Option<u32>,
    pub bound: i64,
    pub ok: bool,
}

/// A filtration audit of one evaluator at a claimed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationWitness {
    pub degree_r: i64,
    pub checks: Vec<FiltrationCheck>,
}

impl FiltrationWitness {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn to_report(&self) -> CheckReport {
        let mut report = CheckReport::default();
        for check in &self.checks {
            report.record(check.ok, || Counterexample {
                input: check.input.clone(),
                expected: format!("output degree at most {}", check.bound),
                got: match check.observed {
                    Some(d) => format!("output degree {d}"),
                    None => "zero output".to_string(),
                },
            });
        }
        report
    }
}

/// Audits the degree bound: an input of level `s` (slot degrees plus the
/// number of distinct input poles) must evaluate to an output supported in
/// generator degrees at most `s - r`.
pub fn check_filtration(
    x: &dyn ChiralEval,
    r: i64,
    funcs: &[(String, DiagRat)],
    tensors: &[TensorElem],
) -> Result<FiltrationWitness, ChiralError> {
    let module = x.module().clone();
    let mut checks = Vec::new();
    for (label, f) in funcs {
        for v in tensors {
            let level = i64::from(v.max_degree(&module)) + f.divisor_count() as i64;
            let out = x.eval(v, f)?;
            let observed = out
                .poly()
                .terms()
                .filter_map(|(_, c)| c.max_degree(&module))
                .max();
            let bound = level - r;
            let ok = match observed {
                Some(d) => i64::from(d) <= bound,
                None => true,
            };
            checks.push(FiltrationCheck {
                level,
                input: format!("v = {}, f = {label}", v.display_text(&module)),
                observed,
                bound,
                ok,
            });
        }
    }
    Ok(FiltrationWitness {
        degree_r: r,
        checks,
    })
}
