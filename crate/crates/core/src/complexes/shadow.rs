//! Degree-window realizations of complexes: shadow cohomology, ranks of
//! induced maps, and the search for `K[t]`-linear null-homotopies.

use std::collections::BTreeMap;

use super::{ChainMap, Complex};
use crate::atoms::{realize_component, realize_module, AdmissibleModule};
use crate::error::Result;
use crate::exact_linalg::{DegreeWindow, FieldElement, GradedMap, GradedSpace, Matrix};

/// Degreewise shadows of the terms and differentials of a complex.
#[derive(Clone, Debug)]
pub struct RealizedComplex {
    pub window: DegreeWindow,
    pub spaces: BTreeMap<i64, GradedSpace>,
    /// `d^n`, keyed by `n`, including the zero maps at both ends.
    pub diffs: BTreeMap<i64, GradedMap>,
}

pub fn realize(x: &Complex, w: DegreeWindow) -> RealizedComplex {
    let (lo, hi) = x.support().unwrap_or((0, 0));
    let spaces = (lo - 1..=hi + 1).map(|n| (n, x.term(n).shadow(w))).collect();
    let diffs = (lo - 1..=hi)
        .map(|n| (n, realize_component(&x.differential(n), w, 0)))
        .collect();
    RealizedComplex { window: w, spaces, diffs }
}

/// Per-degree homology of the shadow, keyed by cohomological degree.
pub fn shadow_cohomology(x: &Complex, w: DegreeWindow) -> Result<BTreeMap<i64, GradedSpace>> {
    let r = realize(x, w);
    let (lo, hi) = x.support().unwrap_or((0, -1));
    (lo..=hi)
        .map(|n| Ok((n, GradedMap::homology_at(&r.diffs[&(n - 1)], &r.diffs[&n])?.space)))
        .collect()
}

/// Rank of `H^n(φ)` at every internal degree of `w`.
pub fn induced_rank(phi: &ChainMap, w: DegreeWindow, n: i64) -> Result<GradedSpace> {
    let s = realize(phi.source(), w);
    let t = realize(phi.target(), w);
    let zero_in = |x: &Complex| realize_component(&crate::atoms::AtomMorphism::zero(x.field(), AdmissibleModule::zero(), x.term(n)), w, 0);
    let zero_out = |x: &Complex| realize_component(&crate::atoms::AtomMorphism::zero(x.field(), x.term(n), AdmissibleModule::zero()), w, 0);
    let d_in = |r: &RealizedComplex, x: &Complex| r.diffs.get(&(n - 1)).cloned().unwrap_or_else(|| zero_in(x));
    let d_out = |r: &RealizedComplex, x: &Complex| r.diffs.get(&n).cloned().unwrap_or_else(|| zero_out(x));
    let hs = GradedMap::homology_at(&d_in(&s, phi.source()), &d_out(&s, phi.source()))?;
    let t_in = d_in(&t, phi.target());
    let f = realize_component(&phi.component(n), w, 0);
    let dims = w
        .degrees()
        .map(|j| {
            let Some(reps) = hs.representatives.get(&j) else { return 0 };
            let img = f.block(j).mul(reps).expect("shapes");
            let boundaries = t_in.block(j).column_space();
            boundaries.hstack(&img).rank() - boundaries.rank()
        })
        .collect();
    Ok(GradedSpace::new(w, dims))
}

#[derive(Clone, Debug)]
pub enum NullHomotopy {
    /// `h^n : S^n → T^(n-1)` with `d h + h d = φ` on the interior, keyed by `n`.
    Witness(BTreeMap<i64, GradedMap>),
    /// The homotopy equations first become inconsistent at this internal degree.
    Obstructed { degree: i64 },
}

impl NullHomotopy {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, NullHomotopy::Obstructed { .. })
    }
}

/// Searches for a `K[t]`-linear `h` with `d_T h + h d_S = φ`.
///
/// Unknowns are the blocks of `h` on all of `w`; `t`-linearity is imposed
/// between adjacent degrees of `w` and the homotopy equation on the interior,
/// one internal degree at a time, so an obstruction names the first degree
/// at which no solution survives.
pub fn null_homotopy_obstruction(phi: &ChainMap, w: DegreeWindow, margin: i64) -> Result<NullHomotopy> {
    let interior = w.interior(margin)?;
    let field = phi.source().field();
    let (src, dst) = (phi.source(), phi.target());
    let (lo, hi) = src.support().unwrap_or((0, -1));
    let rs = realize(src, w);
    let rt = realize(dst, w);
    let t_action = |m: &AdmissibleModule| realize_module(field, m, w).1;

    // variable layout: (n, j) -> offset of the row-major block H^n_j
    let mut offsets: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut nvars = 0;
    for n in lo..=hi + 1 {
        for j in w.degrees() {
            offsets.insert((n, j), nvars);
            nvars += dst.term(n - 1).dim_at(j) * src.term(n).dim_at(j);
        }
    }
    let var = |n: i64, j: i64, r: usize, c: usize| offsets[&(n, j)] + r * src.term(n).dim_at(j) + c;

    let mut rows: Vec<(Vec<(usize, FieldElement)>, FieldElement)> = Vec::new();
    for n in lo..=hi + 1 {
        let (sn, tn1) = (src.term(n), dst.term(n - 1));
        if sn.is_zero() || tn1.is_zero() {
            continue;
        }
        let (ts, tt) = (t_action(&sn), t_action(&tn1));
        for j in w.degrees().filter(|j| w.contains(j + 1)) {
            let (ts_j, tt_j) = (ts.block(j), tt.block(j));
            for r in 0..tn1.dim_at(j + 1) {
                for c in 0..sn.dim_at(j) {
                    let mut eq = Vec::new();
                    for k in 0..sn.dim_at(j + 1) {
                        eq.push((var(n, j + 1, r, k), ts_j.get(k, c).clone()));
                    }
                    for k in 0..tn1.dim_at(j) {
                        eq.push((var(n, j, k, c), -tt_j.get(r, k).clone()));
                    }
                    rows.push((eq, field.zero()));
                }
            }
        }
    }
    let linearity_rows = rows.len();

    let mut solution = None;
    for j in interior.degrees() {
        for n in lo..=hi {
            let (sn, tn) = (src.term(n), dst.term(n));
            let dt = rt.diffs.get(&(n - 1)).map(|d| d.block(j));
            let ds = rs.diffs.get(&n).map(|d| d.block(j));
            let f = realize_component(&phi.component(n), w, 0).block(j);
            for r in 0..tn.dim_at(j) {
                for c in 0..sn.dim_at(j) {
                    let mut eq = Vec::new();
                    if let Some(dt) = &dt {
                        for k in 0..dst.term(n - 1).dim_at(j) {
                            eq.push((var(n, j, k, c), dt.get(r, k).clone()));
                        }
                    }
                    if let Some(ds) = &ds {
                        for k in 0..src.term(n + 1).dim_at(j) {
                            eq.push((var(n + 1, j, r, k), ds.get(k, c).clone()));
                        }
                    }
                    rows.push((eq, f.get(r, c).clone()));
                }
            }
        }
        let _ = linearity_rows;
        match solve(field, nvars, &rows) {
            Some(x) => solution = Some(x),
            None => return Ok(NullHomotopy::Obstructed { degree: j }),
        }
    }
    let x = solution.unwrap_or_else(|| Matrix::zeros(field, nvars, 1));
    let mut maps = BTreeMap::new();
    for n in lo..=hi + 1 {
        let (sn, tn1) = (src.term(n), dst.term(n - 1));
        if sn.is_zero() || tn1.is_zero() {
            continue;
        }
        let blocks = w
            .degrees()
            .map(|j| {
                let entries = (0..tn1.dim_at(j))
                    .map(|r| (0..sn.dim_at(j)).map(|c| x.get(var(n, j, r, c), 0).clone()).collect())
                    .collect();
                (j, Matrix::from_rows(field, sn.dim_at(j), entries))
            })
            .collect();
        maps.insert(n, GradedMap::new(field, sn.shadow(w), tn1.shadow(w), 0, blocks)?);
    }
    Ok(NullHomotopy::Witness(maps))
}

fn solve(
    field: crate::exact_linalg::Field,
    nvars: usize,
    rows: &[(Vec<(usize, FieldElement)>, FieldElement)],
) -> Option<Matrix> {
    let mut a = Matrix::zeros(field, rows.len(), nvars);
    let mut b = Matrix::zeros(field, rows.len(), 1);
    for (i, (eq, rhs)) in rows.iter().enumerate() {
        for (v, c) in eq {
            let cur = a.get(i, *v).clone();
            a.set(i, *v, cur + c);
        }
        b.set(i, 0, rhs.clone());
    }
    a.solve(&b)
}
