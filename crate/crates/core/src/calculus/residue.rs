//! Residues of diagonal-localized rational functions, single and iterated
//! along the lines of a forest.

use crate::algebra::{scalar, AlgebraError, DiagRat, MPoly, VarId};
use crate::graphs::LineForest;

/// The residue of `f dz_i` along the diagonal `z_i = z_j`, as a function of
/// the remaining variables (the label `i` is eliminated).
///
/// With `d` the pole order of `f` at the diagonal: zero when `d <= 0`;
/// otherwise multiply by `(z_i - z_j)^d`, differentiate `d - 1` times in
/// `z_i`, divide by `(d - 1)!`, and restrict to the diagonal.
pub fn residue(f: &DiagRat, i: VarId, j: VarId) -> Result<DiagRat, AlgebraError> {
    if i == j {
        return Err(AlgebraError::SameVariable(i));
    }
    for v in [i, j] {
        if !f.live().contains(&v) {
            return Err(AlgebraError::NotLive(v));
        }
    }
    let mut dropped = f.live().clone();
    dropped.remove(&i);
    if f.is_zero() {
        return Ok(DiagRat::zero_on(dropped));
    }
    let d = f.pole_order(i, j)?;
    if d <= 0 {
        return Ok(DiagRat::zero_on(dropped));
    }
    let ell = (d - 1) as u32;
    let diff = MPoly::var(i).sub(&MPoly::var(j));
    let mut g = f.mul_mpoly(&diff.pow(ell + 1))?;
    for _ in 0..ell {
        g = g.diff_z(i)?;
    }
    let g = g.scale(&(scalar::one() / scalar::factorial(ell)));
    g.substitute_equal(i, j)
}

/// The iterated residue of `f` along a line forest: lines are processed from
/// the last to the first, each line `i_1 -> ... -> i_k` contributing the
/// residues at `(i_1, i_2)`, ..., `(i_{k-1}, i_k)` followed by the renaming
/// of `z_{i_k}` to the line's `w` variable. A single-vertex line is the pure
/// renaming.
pub fn gamma_residue(f: &DiagRat, forest: &LineForest) -> Result<DiagRat, AlgebraError> {
    let mut g = f.clone();
    for ell in (0..forest.num_lines()).rev() {
        let line = &forest.lines()[ell];
        for pair in line.windows(2) {
            g = residue(&g, VarId::Z(pair[0]), VarId::Z(pair[1]))?;
        }
        let last = *line.last().expect("lines are non-empty");
        g = g.rename_var(VarId::Z(last), VarId::W(ell as u32 + 1))?;
    }
    Ok(g)
}
