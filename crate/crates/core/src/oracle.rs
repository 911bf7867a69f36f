//! Brute-force checks by raw linear algebra on degree windows, independent
//! of the symbolic tables.

use serde::Serialize;

use crate::atoms::{realize_module, AdmissibleModule, AtomKind};
use crate::error::{Error, Result};
use crate::exact_linalg::{DegreeWindow, Field, GradedMap, GradedSpace, Matrix};

/// `dim Hom(M, N)_d` for `d` in the interior of `w`: families `f_n : M_n → N_(n+d)`
/// with `t f_n = f_(n+1) t` wherever all four degrees lie in the working window,
/// which is `w` widened by the largest atom shift.
pub fn brute_hom(
    field: Field,
    m: &AdmissibleModule,
    n: &AdmissibleModule,
    w: DegreeWindow,
    margin: i64,
) -> Result<GradedSpace> {
    let interior = w.interior(margin)?;
    if let Some(a) = m
        .atoms()
        .iter()
        .find(|a| !matches!(a.kind, AtomKind::Free | AtomKind::Torsion(_) | AtomKind::Laurent))
    {
        return Err(Error::UnsupportedRHom {
            source_atom: a.to_string(),
            target_atom: n.to_string(),
        });
    }
    // widen so every generator, and the top of every torsion atom, is seen from both sides
    let reach = m
        .atoms()
        .iter()
        .chain(n.atoms())
        .map(|a| match a.kind {
            AtomKind::Torsion(len) => a.shift.abs() + len as i64,
            _ => a.shift.abs(),
        })
        .max()
        .unwrap_or(0);
    let wide = w.grow(reach);
    let (_, tm) = realize_module(field, m, wide);
    let (_, tn) = realize_module(field, n, wide);
    let dims = interior
        .degrees()
        .map(|d| hom_dim_at(field, m, n, &tm, &tn, wide, d))
        .collect();
    Ok(GradedSpace::new(interior, dims))
}

fn hom_dim_at(
    field: Field,
    m: &AdmissibleModule,
    n: &AdmissibleModule,
    tm: &GradedMap,
    tn: &GradedMap,
    w: DegreeWindow,
    d: i64,
) -> usize {
    let mut offset = std::collections::BTreeMap::new();
    let mut nvars = 0;
    for k in w.degrees().filter(|k| w.contains(k + d)) {
        offset.insert(k, nvars);
        nvars += n.dim_at(k + d) * m.dim_at(k);
    }
    let var = |k: i64, r: usize, c: usize| offset[&k] + r * m.dim_at(k) + c;
    let mut rows: Vec<Vec<(usize, crate::exact_linalg::FieldElement)>> = Vec::new();
    for k in w.degrees() {
        if !(w.contains(k + 1) && w.contains(k + d) && w.contains(k + d + 1)) {
            continue;
        }
        let (a, b) = (tm.block(k), tn.block(k + d));
        // (t_N f_k - f_(k+1) t_M)[r][c] = 0
        for r in 0..n.dim_at(k + d + 1) {
            for c in 0..m.dim_at(k) {
                let mut eq = Vec::new();
                for x in 0..n.dim_at(k + d) {
                    eq.push((var(k, x, c), b.get(r, x).clone()));
                }
                for x in 0..m.dim_at(k + 1) {
                    eq.push((var(k + 1, r, x), -a.get(x, c).clone()));
                }
                rows.push(eq);
            }
        }
    }
    let mut a = Matrix::zeros(field, rows.len(), nvars);
    for (i, eq) in rows.iter().enumerate() {
        for (v, c) in eq {
            let cur = a.get(i, *v).clone();
            a.set(i, *v, cur + c);
        }
    }
    nvars - a.rank()
}

/// `dim Ext¹(T(m, k), N)_d` on the interior, as the cokernel of precomposition
/// with `t^m` on the resolution `F(k+m) → F(k)`.
pub fn brute_ext1_torsion(
    field: Field,
    m: u32,
    k: i64,
    n: &AdmissibleModule,
    w: DegreeWindow,
    margin: i64,
) -> Result<GradedSpace> {
    let interior = w.interior(margin)?;
    let big = w.grow(m as i64 + k.abs() + 1);
    let (_, t) = realize_module(field, n, big);
    let dims = interior
        .degrees()
        .map(|d| {
            let (lo, hi) = (k + d, k + d + m as i64);
            let mut p = Matrix::identity(field, n.dim_at(lo));
            for j in lo..hi {
                p = t.block(j).mul(&p).expect("shapes");
            }
            n.dim_at(hi) - p.rank()
        })
        .collect();
    Ok(GradedSpace::new(interior, dims))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareVerdict {
    pub symbolic: String,
    pub interior: (i64, i64),
    /// `(degree, symbolic dim, brute dim)`.
    pub table: Vec<(i64, usize, usize)>,
    pub first_mismatch: Option<i64>,
    pub note: Option<String>,
}

impl CompareVerdict {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Degreewise comparison of a symbolic module's shadow with brute-force dims.
pub fn compare(symbolic: &AdmissibleModule, brute: &GradedSpace, w: DegreeWindow, margin: i64) -> Result<CompareVerdict> {
    let interior = w.interior(margin)?;
    let table: Vec<(i64, usize, usize)> = interior
        .degrees()
        .map(|d| (d, symbolic.dim_at(d), brute.dim(d)))
        .collect();
    let first_mismatch = table.iter().find(|(_, a, b)| a != b).map(|r| r.0);
    let note = symbolic
        .contains_tail()
        .then(|| "Q summands are shadow-invisible, certified symbolically".to_string());
    Ok(CompareVerdict {
        symbolic: symbolic.to_string(),
        interior: (interior.lo(), interior.hi()),
        table,
        first_mismatch,
        note,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub window: (i64, i64),
    pub grown: (i64, i64),
    /// `(degree, dim at window, dim at grown window)`.
    pub table: Vec<(i64, usize, usize)>,
    pub first_unstable: Option<i64>,
}

impl StabilityReport {
    pub fn stable(&self) -> bool {
        self.first_unstable.is_none()
    }
}

/// Reruns `compute` on `w` grown by `growth` and compares dims on the interior of `w`.
pub fn stabilization_check(
    compute: impl Fn(DegreeWindow) -> Result<GradedSpace>,
    w: DegreeWindow,
    growth: i64,
    margin: i64,
) -> Result<StabilityReport> {
    let interior = w.interior(margin)?;
    let grown = w.grow(growth);
    let (small, big) = (compute(w)?, compute(grown)?);
    let table: Vec<(i64, usize, usize)> = interior
        .degrees()
        .map(|d| (d, small.dim(d), big.dim(d)))
        .collect();
    Ok(StabilityReport {
        window: (w.lo(), w.hi()),
        grown: (grown.lo(), grown.hi()),
        first_unstable: table.iter().find(|(_, a, b)| a != b).map(|r| r.0),
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::Atom;
    use crate::rhom::rhom_atoms;

    const Q: Field = Field::Rational;

    fn w(lo: i64, hi: i64) -> DegreeWindow {
        DegreeWindow::new(lo, hi).unwrap()
    }

    fn m(s: &str) -> AdmissibleModule {
        s.parse().unwrap()
    }

    #[test]
    fn basic_homs() {
        let h = brute_hom(Q, &m("F(0)"), &m("F(0)"), w(-5, 5), 0).unwrap();
        let expect: Vec<usize> = (-5..=5).map(|d| (d >= 0) as usize).collect();
        assert_eq!(h.dims(), &expect[..]);
        let h = brute_hom(Q, &m("L"), &m("F(0)"), w(-6, 6), 2).unwrap();
        assert!(h.dims().iter().all(|&d| d == 0));
        let h = brute_hom(Q, &m("F(0)"), &m("L"), w(-6, 6), 2).unwrap();
        assert!(h.dims().iter().all(|&d| d == 1));
        let h = brute_hom(Q, &m("L"), &m("L"), w(-8, 8), 2).unwrap();
        assert!(h.dims().iter().all(|&d| d == 1));
        assert!(brute_hom(Q, &m("PS(0)"), &m("L"), w(-4, 4), 1).is_err());
    }

    #[test]
    fn compare_detects_shift() {
        let win = w(-6, 6);
        let brute = brute_hom(Q, &m("F(0)"), &m("F(0)"), win, 2).unwrap();
        assert!(compare(&m("F(0)"), &brute, win, 2).unwrap().passed());
        assert_eq!(compare(&m("F(1)"), &brute, win, 2).unwrap().first_mismatch, Some(0));
        let laurent = GradedSpace::from_fn(win, |_| 1);
        assert!(compare(&m("L"), &laurent, win, 2).unwrap().passed());
        let shifted_tail = compare(&m("Q(0)"), &GradedSpace::zero(win), win, 2).unwrap();
        assert!(shifted_tail.passed() && shifted_tail.note.is_some());
    }

    #[test]
    fn torsion_ext_agrees_with_table() {
        let win = w(-8, 8);
        for mm in 1..=3u32 {
            for k in -3..=3 {
                for b in -3..=3 {
                    let sym = rhom_atoms(Q, Atom::torsion(mm, k), Atom::free(b)).unwrap();
                    let brute = brute_ext1_torsion(Q, mm, k, &AdmissibleModule::atom(Atom::free(b)), win, 2).unwrap();
                    assert!(compare(&sym.h1, &brute, win, 2).unwrap().passed(), "T({mm},{k}) F({b})");
                }
            }
        }
    }

    #[test]
    fn table_h0_matches_brute_force() {
        let win = w(-8, 8);
        let mut atoms = Vec::new();
        for k in -3..=3 {
            atoms.push(Atom::free(k));
            atoms.push(Atom::laurent(k));
            atoms.push(Atom::laurent_series(k));
            for mm in 1..=3 {
                atoms.push(Atom::torsion(mm, k));
            }
        }
        let sources: Vec<Atom> = atoms
            .iter()
            .copied()
            .filter(|a| !matches!(a.kind, AtomKind::LaurentSeries))
            .collect();
        for a in &sources {
            for b in &atoms {
                let Ok(sym) = rhom_atoms(Q, *a, *b) else { continue };
                if sym.h0.contains_tail() {
                    continue;
                }
                let brute = brute_hom(Q, &AdmissibleModule::atom(*a), &AdmissibleModule::atom(*b), win, 2).unwrap();
                let v = compare(&sym.h0, &brute, win, 2).unwrap();
                assert!(v.passed(), "{a} -> {b}: {:?}", v.table);
            }
        }
    }

    #[test]
    fn stabilization() {
        let brute = |s: &'static str, t: &'static str, margin: i64| {
            move |win: DegreeWindow| brute_hom(Q, &m(s), &m(t), win, margin)
        };
        let r = stabilization_check(brute("F(0)", "L", 0), w(-6, 6), 4, 2).unwrap();
        assert!(r.stable());
        let r = stabilization_check(brute("L", "F(0)", 0), w(-6, 6), 4, 0).unwrap();
        assert_eq!(r.first_unstable, Some(6));
    }
}
