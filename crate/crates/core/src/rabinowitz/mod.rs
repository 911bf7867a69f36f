//! Morphisms in the quotient of `Perf K[t]` by the modules killed by localization,
//! `Hom(c, d) = Cone(RHom(i i^L c, d) → RHom(c, i i^L d))`, together with the
//! right-adjoint variant `RHom(c, Cone(i i^R d → i i^L d))`.
//! Composition of classes lives in `classes`; the `K((t))` certificate in `extension`.

mod classes;
mod extension;

use std::collections::BTreeMap;
use std::sync::OnceLock;

pub use classes::{compose_classes, sample_classes, unit_class, RabClass};
pub use extension::{certified_calculus, extension_witness, ExtensionReport};

use crate::atoms::{AdmissibleModule, Atom, AtomKind, AtomMorphism};
use crate::complexes::{cohomology, cone, shadow_cohomology, Calculus, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::exact_linalg::{DegreeWindow, Field, GradedSpace};
use crate::functors::{localize, right_adj_to_localize};
use crate::poly::RationalScalar;
use crate::rhom::{rhom_atoms, rhom_modules};

/// A chain model of `RHom(a, b)` whose cohomology is the table entry.
pub fn rhom_complex(field: Field, a: Atom, b: Atom) -> Result<Complex> {
    rhom_atoms(field, a, b)?;
    let single = |x: Atom| Complex::concentrated(field, AdmissibleModule::atom(x), 0);
    let by_t = |x: Atom, m: u32| {
        let d = AtomMorphism::single(field, x, x.shifted(-(m as i64)), RationalScalar::t_pow(field, m as i64));
        Complex::two_term(d, 0)
    };
    use AtomKind::*;
    match (a.kind, b.kind) {
        (Free, _) => Ok(single(b.shifted(-a.shift))),
        (Laurent, Free) => {
            let k = b.shift - a.shift;
            let d = AtomMorphism::single(field, Atom::free(k), Atom::power_series(k), RationalScalar::from_i64(field, -1));
            Complex::two_term(d, 0)
        }
        (Laurent, Laurent | LaurentSeries) => Ok(single(b.shifted(-a.shift))),
        (Laurent, Torsion(_)) => Ok(Complex::zero(field)),
        // Hom of the resolution F(k+m) --t^m--> F(k) into b
        (Torsion(m), _) => by_t(b.shifted(-a.shift), m),
        _ => Err(Error::UnsupportedRHom {
            source_atom: a.to_string(),
            target_atom: b.to_string(),
        }),
    }
}

fn check_perfect(m: &AdmissibleModule) -> Result<()> {
    match m.atoms().iter().find(|a| !a.is_perfect()) {
        Some(a) => Err(Error::UnsupportedRHom {
            source_atom: a.to_string(),
            target_atom: "objects built from F and T".into(),
        }),
        None => Ok(()),
    }
}

/// The cone computing morphisms from `c` to `d`, with cohomology computed once.
#[derive(Debug)]
pub struct RabComplex {
    pub c: AdmissibleModule,
    pub d: AdmissibleModule,
    pub unit_induced: ChainMap,
    pub complex: Complex,
    calculus: Calculus,
    cached: OnceLock<Result<BTreeMap<i64, AdmissibleModule>>>,
}

impl RabComplex {
    pub fn cohomology(&self) -> Result<BTreeMap<i64, AdmissibleModule>> {
        self.cached
            .get_or_init(|| cohomology(&self.complex, &self.calculus))
            .clone()
    }

    pub fn h0(&self) -> Result<AdmissibleModule> {
        Ok(self.cohomology()?.remove(&0).unwrap_or_default())
    }

    pub fn shadow(&self, w: DegreeWindow) -> Result<BTreeMap<i64, GradedSpace>> {
        shadow_cohomology(&self.complex, w)
    }

    pub fn shadow_h0(&self, w: DegreeWindow) -> Result<GradedSpace> {
        Ok(self.shadow(w)?.remove(&0).unwrap_or_else(|| GradedSpace::zero(w)))
    }
}

/// `Cone(⊕ RHom(L c_i, d_j) → ⊕ RHom(c_i, L d_j))`, the map on each free pair
/// being evaluation at the generator followed by the unit of `d_j`.
pub fn rab_complex(field: Field, c: &AdmissibleModule, d: &AdmissibleModule, calculus: &Calculus) -> Result<RabComplex> {
    check_perfect(c)?;
    check_perfect(d)?;
    let mut pieces = Vec::new();
    for a in c.atoms() {
        for b in d.atoms() {
            let (la, lb) = (localize(&AdmissibleModule::atom(*a)), localize(&AdmissibleModule::atom(*b)));
            let lhs = match la.atoms() {
                [x] => rhom_complex(field, *x, *b)?,
                _ => Complex::zero(field),
            };
            let rhs = match lb.atoms() {
                [y] => rhom_complex(field, *a, *y)?,
                _ => Complex::zero(field),
            };
            let phi = if a.kind == AtomKind::Free && b.kind == AtomKind::Free {
                let k = b.shift - a.shift;
                let e = AtomMorphism::single(field, Atom::free(k), Atom::laurent(k), RationalScalar::one(field));
                ChainMap::new(lhs, rhs, [(0, e)])?
            } else {
                ChainMap::zero(lhs, rhs)
            };
            pieces.push(phi);
        }
    }
    let unit_induced = ChainMap::direct_sum(&pieces);
    let complex = cone(&unit_induced)?;
    Ok(RabComplex {
        c: c.clone(),
        d: d.clone(),
        unit_induced,
        complex,
        calculus: calculus.clone(),
        cached: OnceLock::new(),
    })
}

/// `RHom(c, X)` with `X = Cone(i i^R d → i i^L d)`.
#[derive(Clone, Debug)]
pub struct RemarkForm {
    pub target_cone: Complex,
    pub complex: Complex,
}

impl RemarkForm {
    pub fn shadow_h0(&self, w: DegreeWindow) -> Result<GradedSpace> {
        Ok(shadow_cohomology(&self.complex, w)?
            .remove(&0)
            .unwrap_or_else(|| GradedSpace::zero(w)))
    }
}

pub fn remark_form(field: Field, c: &AdmissibleModule, d: &AdmissibleModule) -> Result<RemarkForm> {
    check_perfect(c)?;
    check_perfect(d)?;
    let x = cone(&right_adj_to_localize(field, d)?)?;
    let mut parts = Vec::new();
    for a in c.atoms() {
        match a.kind {
            AtomKind::Free => parts.push(x.twist(-a.shift)),
            AtomKind::Torsion(m) => {
                // Hom of F(k+m) --t^m--> F(k) into X: the fibre of t^m on X twisted
                let top = x.twist(-a.shift);
                let bottom = x.twist(-a.shift - m as i64);
                let tm = RationalScalar::t_pow(field, m as i64);
                let comps: Vec<(i64, AtomMorphism)> = top
                    .terms()
                    .iter()
                    .map(|(n, mm)| {
                        let id = AtomMorphism::identity(field, mm).scale(&tm);
                        let f = AtomMorphism::new(field, mm.clone(), bottom.term(*n), id.entries().to_vec())?;
                        Ok((*n, f))
                    })
                    .collect::<Result<_>>()?;
                let phi = ChainMap::new(top, bottom, comps)?;
                parts.push(cone(&phi)?.shift(-1));
            }
            _ => unreachable!("checked perfect"),
        }
    }
    let refs: Vec<&Complex> = parts.iter().collect();
    Ok(RemarkForm {
        target_cone: x,
        complex: Complex::direct_sum_indexed(&refs).0,
    })
}

/// Symbolic cohomology of the right-adjoint form, from the cohomology of the target cone
/// when that is concentrated in a single degree.
pub fn remark_cohomology(field: Field, c: &AdmissibleModule, d: &AdmissibleModule, calculus: &Calculus) -> Result<BTreeMap<i64, AdmissibleModule>> {
    let form = remark_form(field, c, d)?;
    let hx = cohomology(&form.target_cone, calculus)?;
    let mut out = BTreeMap::new();
    match hx.len() {
        0 => {}
        1 => {
            let (p, h) = hx.into_iter().next().unwrap();
            let r = rhom_modules(field, c, &h)?;
            out.insert(p, r.h0);
            out.insert(p + 1, r.h1);
        }
        _ => {
            return Err(Error::CohomologyNotInCalculus(format!(
                "target cone has cohomology in degrees {:?}",
                hx.keys().collect::<Vec<_>>()
            )))
        }
    }
    Ok(out.into_iter().filter(|(_, m)| !m.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rhom::rhom_atoms;

    const Q: Field = Field::Rational;

    fn m(s: &str) -> AdmissibleModule {
        s.parse().unwrap()
    }

    fn w(lo: i64, hi: i64) -> DegreeWindow {
        DegreeWindow::new(lo, hi).unwrap()
    }

    fn calc() -> Calculus {
        certified_calculus(Q).unwrap()
    }

    #[test]
    fn chain_models_match_table() {
        let mut atoms = Vec::new();
        for k in -2..=2 {
            atoms.extend([Atom::free(k), Atom::laurent(k), Atom::laurent_series(k), Atom::power_series(k)]);
            for mm in 1..=3 {
                atoms.push(Atom::torsion(mm, k));
            }
        }
        let basic = Calculus::basic(Q);
        for a in atoms.iter().filter(|a| matches!(a.kind, AtomKind::Free | AtomKind::Laurent | AtomKind::Torsion(_))) {
            for b in &atoms {
                let Ok(sym) = rhom_atoms(Q, *a, *b) else { continue };
                let h = cohomology(&rhom_complex(Q, *a, *b).unwrap(), &basic).unwrap();
                assert_eq!(h.get(&0).cloned().unwrap_or_default(), sym.h0, "{a} {b}");
                assert_eq!(h.get(&1).cloned().unwrap_or_default(), sym.h1, "{a} {b}");
            }
        }
    }

    #[test]
    fn free_pairs_give_laurent_series() {
        let calc = calc();
        let r = rab_complex(Q, &m("F(0)"), &m("F(0)"), &calc).unwrap();
        assert_eq!(r.cohomology().unwrap().into_iter().collect::<Vec<_>>(), vec![(0, m("LS"))]);
        for a in -2..=2 {
            for b in -2..=2 {
                let r = rab_complex(Q, &m(&format!("F({a})")), &m(&format!("F({b})")), &calc).unwrap();
                assert_eq!(r.h0().unwrap(), AdmissibleModule::atom(Atom::laurent_series(b - a)));
                let sh = r.shadow_h0(w(-8, 8)).unwrap();
                assert!(sh.dims().iter().all(|&x| x == 1));
            }
        }
    }

    #[test]
    fn torsion_objects_vanish() {
        let calc = calc();
        for (c, d) in [("T(2,0)", "F(0)"), ("F(0)", "T(2,0)"), ("T(1,1)", "T(3,0)"), ("T(3,-1) + T(1,0)", "F(2)")] {
            let r = rab_complex(Q, &m(c), &m(d), &calc).unwrap();
            assert!(r.cohomology().unwrap().is_empty(), "{c} {d}");
            for (_, h) in r.shadow(w(-6, 6)).unwrap() {
                assert!(h.dims().iter().all(|&x| x == 0), "{c} {d}");
            }
        }
    }

    #[test]
    fn mixed_sums() {
        let calc = calc();
        let r = rab_complex(Q, &m("F(0) + T(2,0)"), &m("F(1) + F(0)"), &calc).unwrap();
        assert_eq!(r.h0().unwrap(), m("LS + LS(1)"));
    }

    #[test]
    fn remark_agrees_with_cone_formula() {
        let calc = calc();
        let win = w(-8, 8);
        let interior = win.interior(2).unwrap();
        for a in -2..=2 {
            for b in -2..=2 {
                let (c, d) = (m(&format!("F({a})")), m(&format!("F({b})")));
                let lhs = rab_complex(Q, &c, &d, &calc).unwrap().shadow_h0(win).unwrap();
                let rhs = remark_form(Q, &c, &d).unwrap().shadow_h0(win).unwrap();
                for j in interior.degrees() {
                    assert_eq!(lhs.dim(j), rhs.dim(j), "F({a}) F({b}) at {j}");
                }
                let sym = remark_cohomology(Q, &c, &d, &calc).unwrap();
                assert_eq!(sym.get(&0), Some(&AdmissibleModule::atom(Atom::laurent_series(b - a))));
            }
        }
    }

    #[test]
    fn remark_torsion_cases() {
        let calc = calc();
        let win = w(-6, 6);
        for (c, d) in [("T(2,0)", "F(0)"), ("F(0)", "T(2,0)")] {
            let f = remark_form(Q, &m(c), &m(d)).unwrap();
            for (_, h) in shadow_cohomology(&f.complex, win).unwrap() {
                assert!(h.dims().iter().all(|&x| x == 0), "{c} {d}");
            }
            assert!(remark_cohomology(Q, &m(c), &m(d), &calc).unwrap().is_empty());
        }
    }

    #[test]
    fn non_perfect_arguments_rejected() {
        assert!(rab_complex(Q, &m("L"), &m("F(0)"), &Calculus::basic(Q)).is_err());
        assert!(remark_form(Q, &m("F(0)"), &m("PS(0)")).is_err());
    }
}
