//! Restriction, localization `K[t] → K[t,t⁻¹]`, its right adjoint and the
//! torsion part, on admissible modules.
//!
//! `i·i^L` inverts `t`; `i·i^R = RHom(L, -)`; the torsion part `j·j^R` is the
//! fibre of the unit `M → i·i^L M`.

use serde::Serialize;

use crate::atoms::{AdmissibleModule, Atom, AtomKind, AtomMorphism};
use crate::complexes::{cone, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::exact_linalg::{DegreeWindow, Field};
use crate::oracle::brute_hom;
use crate::poly::RationalScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctorTag {
    Restrict,
    Localize,
    RightAdjoint,
    TorsionPart,
}

impl std::fmt::Display for FunctorTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FunctorTag::Restrict => "i",
            FunctorTag::Localize => "i i^L",
            FunctorTag::RightAdjoint => "i i^R",
            FunctorTag::TorsionPart => "j j^R",
        })
    }
}

fn localize_atom(a: Atom) -> Option<Atom> {
    match a.kind {
        AtomKind::Free => Some(Atom::laurent(a.shift)),
        AtomKind::PowerSeries => Some(Atom::laurent_series(a.shift)),
        AtomKind::Torsion(_) => None,
        AtomKind::Laurent | AtomKind::LaurentSeries | AtomKind::Tail => Some(a),
    }
}

/// `localize(M)` with the position of each surviving summand.
pub fn localize_with_index(m: &AdmissibleModule) -> (AdmissibleModule, Vec<Option<usize>>) {
    let mut kept: Vec<(Atom, usize)> = m
        .atoms()
        .iter()
        .enumerate()
        .filter_map(|(i, a)| localize_atom(*a).map(|b| (b, i)))
        .collect();
    kept.sort();
    let mut index = vec![None; m.len()];
    for (pos, (_, i)) in kept.iter().enumerate() {
        index[*i] = Some(pos);
    }
    (AdmissibleModule::new(kept.into_iter().map(|x| x.0).collect()), index)
}

pub fn localize(m: &AdmissibleModule) -> AdmissibleModule {
    localize_with_index(m).0
}

/// The same entries between the localized modules; torsion rows and columns drop out.
pub fn localize_morphism(f: &AtomMorphism) -> AtomMorphism {
    let (src, si) = localize_with_index(f.source());
    let (dst, ti) = localize_with_index(f.target());
    let mut g = AtomMorphism::zero(f.field(), src, dst);
    for (i, ti) in ti.iter().enumerate() {
        for (j, sj) in si.iter().enumerate() {
            if let (Some(r), Some(c)) = (ti, sj) {
                g.set_entry(*r, *c, f.entry(i, j).clone());
            }
        }
    }
    g
}

/// `u : M → localize(M)`, the identity coefficient on every surviving summand.
pub fn unit_map(field: Field, m: &AdmissibleModule) -> AtomMorphism {
    let (loc, index) = localize_with_index(m);
    let mut u = AtomMorphism::zero(field, m.clone(), loc);
    for (j, pos) in index.iter().enumerate() {
        if let Some(i) = pos {
            u.set_entry(*i, j, RationalScalar::one(field));
        }
    }
    u
}

/// `RHom(L, M)` as a complex: `F(k) ↦ [F(k) --(-1)--> PS(k)]` in degrees 0 and 1,
/// whose only cohomology is `Q(k)` in degree 1; local atoms are their own image
/// and torsion atoms vanish.
pub fn right_adj(field: Field, m: &AdmissibleModule) -> Result<Complex> {
    let mut parts = Vec::new();
    for a in m.atoms() {
        let part = match a.kind {
            AtomKind::Free => {
                let d = AtomMorphism::single(field, *a, Atom::power_series(a.shift), RationalScalar::from_i64(field, -1));
                Complex::two_term(d, 0)?
            }
            AtomKind::Laurent | AtomKind::LaurentSeries => {
                Complex::concentrated(field, AdmissibleModule::atom(*a), 0)
            }
            AtomKind::Torsion(_) => Complex::zero(field),
            AtomKind::PowerSeries | AtomKind::Tail => {
                return Err(Error::UnsupportedRHom {
                    source_atom: "L".into(),
                    target_atom: a.to_string(),
                })
            }
        };
        parts.push(part);
    }
    let refs: Vec<&Complex> = parts.iter().collect();
    Ok(Complex::direct_sum_indexed(&refs).0)
}

/// The canonical map `i·i^R(M) → i·i^L(M)`: evaluation of a tower element at its
/// generator, which is `F(k) → L(k)` with coefficient 1 on the free parts.
pub fn right_adj_to_localize(field: Field, m: &AdmissibleModule) -> Result<ChainMap> {
    let source = right_adj(field, m)?;
    let target = Complex::concentrated(field, localize(m), 0);
    let mut f = AtomMorphism::zero(field, source.term(0), target.term(0));
    for (j, a) in source.term(0).atoms().iter().enumerate() {
        let image = localize_atom(*a).expect("no torsion in degree 0");
        let i = target.term(0).atoms().iter().position(|b| *b == image).expect("localized summand");
        f.set_entry(i, j, RationalScalar::one(field));
    }
    ChainMap::new(source, target, [(0, f)])
}

/// `Cone(M → localize(M))[-1]`: `M` in degree 0, `localize(M)` in degree 1.
pub fn torsion_part(field: Field, m: &AdmissibleModule) -> Result<Complex> {
    let source = Complex::concentrated(field, m.clone(), 0);
    let target = Complex::concentrated(field, localize(m), 0);
    let u = ChainMap::new(source, target, [(0, unit_map(field, m))])?;
    Ok(cone(&u)?.shift(-1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    pub source: String,
    pub target: String,
    pub interior: (i64, i64),
    /// `(degree, dim Hom(localize c, s), dim Hom(c, s))`.
    pub table: Vec<(i64, usize, usize)>,
    pub first_mismatch: Option<i64>,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares `Hom(localize c, s)` with `Hom(c, s)` degreewise by brute force.
pub fn verify_adjunction(
    field: Field,
    c: &AdmissibleModule,
    s: &AdmissibleModule,
    w: DegreeWindow,
    margin: i64,
) -> Result<AdjunctionReport> {
    let lhs = brute_hom(field, &localize(c), s, w, margin)?;
    let rhs = brute_hom(field, c, s, w, margin)?;
    let interior = w.interior(margin)?;
    let table: Vec<(i64, usize, usize)> = interior.degrees().map(|d| (d, lhs.dim(d), rhs.dim(d))).collect();
    Ok(AdjunctionReport {
        source: c.to_string(),
        target: s.to_string(),
        interior: (interior.lo(), interior.hi()),
        first_mismatch: table.iter().find(|r| r.1 != r.2).map(|r| r.0),
        table,
    })
}
