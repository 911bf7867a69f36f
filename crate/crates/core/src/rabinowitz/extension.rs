use serde::Serialize;

use crate::appendix_b::build_resolution;
use crate::atoms::{realize_component, AdmissibleModule, Atom, AtomMorphism};
use crate::complexes::{cohomology, null_homotopy_obstruction, Calculus, ChainMap, Complex, ExtensionCertificate, NullHomotopy};
use crate::error::{Error, Result};
use crate::exact_linalg::{DegreeWindow, Field};
use crate::functors::right_adj;
use crate::poly::RationalScalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub truncation: usize,
    pub window: (i64, i64),
    pub margin: i64,
    /// First internal degree at which the comparison with the tower model fails
    /// to commute; the truncation is faithful below it.
    pub comparison_breaks_at: Option<i64>,
    /// Degree at which `δ` admits no null-homotopy.
    pub obstructed_at: Option<i64>,
    /// Whether the zero map, the control, admits a null-homotopy.
    pub control_splits: bool,
    /// Symbolic `H⁰` of the pushout cone with the certificate in force.
    pub pushout: String,
    /// Symbolic `H⁰` of the same cone with the connecting entry removed.
    pub split: String,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.obstructed_at.is_some()
            && self.control_splits
            && self.comparison_breaks_at == Some(self.truncation as i64)
            && self.pushout == "LS"
            && self.split == "L + Q(0)"
    }

    pub fn certificate(&self) -> Option<ExtensionCertificate> {
        let w = DegreeWindow::new(self.window.0, self.window.1).ok()?;
        Some(ExtensionCertificate::new(self.truncation, w, self.margin, self.obstructed_at?))
    }
}

/// Represents the connecting map `Q(0)[-1] → L` on the dual of the truncated
/// resolution, as `S* → L` sending the generator `s_0*` to 1, and certifies
/// that it is not null-homotopic on `w` while the zero map is.
pub fn extension_witness(field: Field, n: usize, w: DegreeWindow, margin: i64) -> Result<ExtensionReport> {
    w.interior(margin)?;
    let res = build_resolution(field, n, (w.hi().max(1)) as usize)?;
    let p = res.dualize();
    let laurent = Complex::concentrated(field, AdmissibleModule::atom(Atom::laurent(0)), 0);
    let mut delta0 = AtomMorphism::zero(field, p.term(0), laurent.term(0));
    delta0.set_entry(0, res.s_dual_index(0), RationalScalar::one(field));
    let delta = ChainMap::new(p.clone(), laurent.clone(), [(0, delta0)])?;
    let control = ChainMap::zero(p.clone(), laurent);

    let obstructed_at = match null_homotopy_obstruction(&delta, w, margin)? {
        NullHomotopy::Obstructed { degree } => Some(degree),
        NullHomotopy::Witness(_) => None,
    };
    let control_splits = !null_homotopy_obstruction(&control, w, margin)?.is_obstructed();

    let comparison_breaks_at = comparison_defect(field, &res, &p, w)?;

    let report = ExtensionReport {
        truncation: n,
        window: (w.lo(), w.hi()),
        margin,
        comparison_breaks_at,
        obstructed_at,
        control_splits,
        pushout: String::new(),
        split: String::new(),
    };
    let calculus = match report.certificate() {
        Some(cert) => Calculus::with_extension(field, cert),
        None => Calculus::basic(field),
    };
    let pushout = pushout_h0(field, true, &calculus).unwrap_or_else(|e| format!("error: {e}"));
    let split = pushout_h0(field, false, &calculus).unwrap_or_else(|e| format!("error: {e}"));
    Ok(ExtensionReport { pushout, split, ..report })
}

/// The first degree at which `S* → F(0)` (`s_0* ↦ 1`) and `Σ : R* → PS(0)`
/// fail to form a chain map into `[F(0) --(-1)--> PS(0)]`.
fn comparison_defect(field: Field, res: &crate::appendix_b::TruncatedResolution, p: &Complex, w: DegreeWindow) -> Result<Option<i64>> {
    let tower = right_adj(field, &AdmissibleModule::atom(Atom::free(0)))?;
    let mut c0 = AtomMorphism::zero(field, p.term(0), tower.term(0));
    c0.set_entry(0, res.s_dual_index(0), RationalScalar::one(field));
    let c1 = res.sigma_map();
    let lhs = AtomMorphism::compose(&tower.differential(0), &c0)?;
    let rhs = AtomMorphism::compose(&c1, &p.differential(0))?;
    let defect = lhs.add(&rhs.neg())?;
    let wide = w.grow(res.truncation() as i64 + 1);
    let real = realize_component(&defect, wide, 0);
    Ok(wide.degrees().find(|&j| !real.block(j).is_zero()))
}

/// `H⁰` of `Cone(F(0) → PS(0) ⊕ L)[-1]`-shaped complex `F --(1, u)--> PS ⊕ L`,
/// with `u = 1` or, for the split control, `u = 0`.
fn pushout_h0(field: Field, connected: bool, calculus: &Calculus) -> Result<String> {
    let target = AdmissibleModule::new(vec![Atom::power_series(0), Atom::laurent(0)]);
    let mut d = AtomMorphism::zero(field, AdmissibleModule::atom(Atom::free(0)), target);
    for (i, a) in d.target().atoms().to_vec().iter().enumerate() {
        if *a == Atom::power_series(0) || connected {
            d.set_entry(i, 0, RationalScalar::one(field));
        }
    }
    let x = Complex::two_term(d, -1)?;
    let h = cohomology(&x, calculus)?;
    if h.keys().any(|&k| k != 0) {
        return Err(Error::CohomologyNotInCalculus(format!("cohomology outside degree 0: {h:?}")));
    }
    Ok(h.get(&0).cloned().unwrap_or_default().to_string())
}

/// The calculus with the `K((t))` identification, certified at the smallest
/// configured size: `N = 3`, `W = [0, 4]`, margin 1.
pub fn certified_calculus(field: Field) -> Result<Calculus> {
    let w = DegreeWindow::new(0, 4)?;
    let report = extension_witness(field, 3, w, 1)?;
    match (report.passed(), report.certificate()) {
        (true, Some(cert)) => Ok(Calculus::with_extension(field, cert)),
        _ => Err(Error::CohomologyNotInCalculus(format!(
            "extension not certified: {report:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(lo: i64, hi: i64) -> DegreeWindow {
        DegreeWindow::new(lo, hi).unwrap()
    }

    #[test]
    fn obstructed_at_truncation() {
        for field in [Field::Rational, Field::prime(10007).unwrap(), Field::prime(65537).unwrap()] {
            let r = extension_witness(field, 6, w(0, 8), 2).unwrap();
            assert_eq!(r.obstructed_at, Some(6));
            assert!(r.control_splits);
            assert_eq!(r.comparison_breaks_at, Some(6));
            assert_eq!(r.pushout, "LS");
            assert_eq!(r.split, "L + Q(0)");
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn smallest_case() {
        let r = extension_witness(Field::Rational, 3, w(0, 4), 1).unwrap();
        assert_eq!(r.obstructed_at, Some(3));
        assert!(r.passed());
        assert!(certified_calculus(Field::Rational).unwrap().extension.is_some());
    }

    #[test]
    fn invisible_when_window_stops_short() {
        // the obstruction lives at degree N; a window whose interior ends
        // below it sees a homotopy
        let r = extension_witness(Field::Rational, 6, w(0, 6), 2).unwrap();
        assert_eq!(r.obstructed_at, None);
        assert!(!r.passed());
        assert!(r.pushout.starts_with("error"));
    }

    #[test]
    fn pushout_needs_certificate() {
        assert!(pushout_h0(Field::Rational, true, &Calculus::basic(Field::Rational)).is_err());
        assert_eq!(pushout_h0(Field::Rational, false, &Calculus::basic(Field::Rational)).unwrap(), "L + Q(0)");
    }
}
