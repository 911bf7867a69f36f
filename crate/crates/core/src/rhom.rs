//! Derived Hom between atoms as a closed table, and the derived inverse limit
//! of towers that governs maps out of `K[t, t⁻¹]`.

use crate::atoms::{AdmissibleModule, Atom, AtomKind, AtomMorphism};
use crate::error::{Error, Result};
use crate::exact_linalg::Field;
use crate::poly::RationalScalar;

/// `H⁰` and `H¹` of `RHom(A, B)`; higher groups vanish over `K[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RHomResult {
    pub h0: AdmissibleModule,
    pub h1: AdmissibleModule,
    /// Generators of `H⁰` as honest morphisms, where one exists entrywise.
    pub h0_generators: Vec<AtomMorphism>,
    /// How each `H¹` summand arises.
    pub h1_representatives: Vec<String>,
}

impl RHomResult {
    fn zero() -> RHomResult {
        RHomResult {
            h0: AdmissibleModule::zero(),
            h1: AdmissibleModule::zero(),
            h0_generators: Vec::new(),
            h1_representatives: Vec::new(),
        }
    }

    fn h0(a: Atom, generator: Option<AtomMorphism>) -> RHomResult {
        RHomResult {
            h0: AdmissibleModule::atom(a),
            h0_generators: generator.into_iter().collect(),
            ..RHomResult::zero()
        }
    }

    fn h1(a: Atom, why: String) -> RHomResult {
        RHomResult {
            h1: AdmissibleModule::atom(a),
            h1_representatives: vec![why],
            ..RHomResult::zero()
        }
    }

    fn plus(mut self, other: RHomResult) -> RHomResult {
        self.h0 = self.h0.direct_sum(&other.h0);
        self.h1 = self.h1.direct_sum(&other.h1);
        self.h0_generators.extend(other.h0_generators);
        self.h1_representatives.extend(other.h1_representatives);
        self
    }
}

/// An inverse system `… → body → body` with a fixed endomorphism as transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub body: AdmissibleModule,
    pub transition: AtomMorphism,
}

impl Tower {
    pub fn new(body: AdmissibleModule, transition: AtomMorphism) -> Result<Tower> {
        if transition.source() != &body || transition.target() != &body {
            return Err(Error::TowerOutOfCalculus("transition is not an endomorphism of the body".into()));
        }
        transition.validate()?;
        Ok(Tower { body, transition })
    }

    /// The tower `(body, ·t)`.
    pub fn multiplication_by_t(field: Field, body: AdmissibleModule) -> Tower {
        let t = RationalScalar::t_pow(field, 1);
        let transition = AtomMorphism::identity(field, &body).scale(&t);
        Tower { body, transition }
    }
}

/// `(lim, lim¹)` by closed-form rules.
///
/// Finite truncations of a tower always satisfy Mittag-Leffler, so lim¹ can
/// never be read off a finite stage. `(F(k), ·t)` has `lim = 0` and
/// `lim¹ = K[[t]]/K[t]`, the cokernel of `∏ K[t] → ∏ K[t]`, `(x_n) ↦ (x_n - t x_{n+1})`.
pub fn tower_lim(tower: &Tower) -> Result<(AdmissibleModule, AdmissibleModule)> {
    let atoms = tower.body.atoms();
    let mut lim = Vec::new();
    let mut lim1 = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        for (j, _) in atoms.iter().enumerate() {
            if i != j && !tower.transition.entry(i, j).is_zero() {
                return Err(Error::TowerOutOfCalculus(format!(
                    "transition mixes summands {i} and {j}"
                )));
            }
        }
        let e = tower.transition.entry(i, i);
        if e.is_zero() {
            continue;
        }
        let Some((_, power)) = e.as_monomial() else {
            return Err(Error::TowerOutOfCalculus(format!(
                "transition entry {e} on {a} is not a monomial"
            )));
        };
        match a.kind {
            AtomKind::Laurent | AtomKind::LaurentSeries => lim.push(*a),
            _ if power == 0 => lim.push(*a),
            AtomKind::Free if power > 0 => lim1.push(Atom::tail(a.shift)),
            AtomKind::Torsion(_) if power > 0 => {}
            _ => {
                return Err(Error::TowerOutOfCalculus(format!(
                    "transition t^{power} on {a}"
                )))
            }
        }
    }
    Ok((AdmissibleModule::new(lim), AdmissibleModule::new(lim1)))
}

/// `RHom(A, B)` from the supported table.
pub fn rhom_atoms(field: Field, a: Atom, b: Atom) -> Result<RHomResult> {
    use AtomKind::*;
    let unsupported = || Error::UnsupportedRHom {
        source_atom: a.to_string(),
        target_atom: b.to_string(),
    };
    let generator = |entry: RationalScalar| Some(AtomMorphism::single(field, a, b, entry));
    let one = RationalScalar::one(field);
    Ok(match (a.kind, b.kind) {
        (Free, Tail) => RHomResult::h0(b.shifted(-a.shift), None),
        (Free, _) => RHomResult::h0(b.shifted(-a.shift), generator(one)),
        (Laurent, Free) => RHomResult::h1(
            Atom::tail(b.shift - a.shift),
            "lim¹ of (K[t], ·t), computed on the free resolution of K[t,t⁻¹]".into(),
        ),
        (Laurent, Laurent) => RHomResult::h0(Atom::laurent(b.shift - a.shift), generator(one)),
        (Laurent, LaurentSeries) => {
            RHomResult::h0(Atom::laurent_series(b.shift - a.shift), generator(one))
        }
        (Laurent, Torsion(_)) => RHomResult::zero(),
        (Torsion(_), Laurent | LaurentSeries | Tail) => RHomResult::zero(),
        (Torsion(m), Free | PowerSeries) => RHomResult::h1(
            Atom::torsion(m, b.shift - a.shift - m as i64),
            format!("cokernel of t^{m} on the resolution F({}) -> F({})", a.shift + m as i64, a.shift),
        ),
        (Torsion(m), Torsion(n)) => {
            let mu = m.min(n);
            let d = b.shift - a.shift;
            let lift = RationalScalar::t_pow(field, n.saturating_sub(m) as i64);
            RHomResult {
                h0: AdmissibleModule::atom(Atom::torsion(mu, d + n as i64 - mu as i64)),
                h1: AdmissibleModule::atom(Atom::torsion(mu, d - m as i64)),
                h0_generators: generator(lift).into_iter().collect(),
                h1_representatives: vec![format!(
                    "cokernel of t^{m} on Hom(resolution, T({n},{}))",
                    b.shift
                )],
            }
        }
        _ => return Err(unsupported()),
    })
}

/// Biadditive extension of [`rhom_atoms`].
pub fn rhom_modules(field: Field, m: &AdmissibleModule, n: &AdmissibleModule) -> Result<RHomResult> {
    let mut out = RHomResult::zero();
    for a in m.atoms() {
        for b in n.atoms() {
            out = out.plus(rhom_atoms(field, *a, *b)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn m(s: &str) -> AdmissibleModule {
        s.parse().unwrap()
    }

    fn rh(a: &str, b: &str) -> (String, String) {
        let r = rhom_modules(Q, &m(a), &m(b)).unwrap();
        for g in &r.h0_generators {
            g.validate().unwrap();
        }
        (r.h0.to_string(), r.h1.to_string())
    }

    fn pair(h0: &str, h1: &str) -> (String, String) {
        (h0.to_string(), h1.to_string())
    }

    #[test]
    fn table_entries() {
        assert_eq!(rh("L", "F(0)"), pair("0", "Q(0)"));
        assert_eq!(rh("F(0)", "L"), pair("L", "0"));
        assert_eq!(rh("L", "L"), pair("L", "0"));
        assert_eq!(rh("L", "LS"), pair("LS", "0"));
        assert_eq!(rh("L", "T(2,0)"), pair("0", "0"));
        assert_eq!(rh("T(2,0)", "F(0)"), pair("0", "T(2,-2)"));
        assert_eq!(rh("T(2,0)", "L"), pair("0", "0"));
        assert_eq!(rh("F(2)", "F(0)"), pair("F(-2)", "0"));
    }

    #[test]
    fn additivity() {
        assert_eq!(rh("F(0) + F(1)", "L"), pair("L(-1) + L", "0"));
        assert_eq!(rh("0", "L + F(3)"), pair("0", "0"));
        assert_eq!(rh("L", "F(0) + T(2,0)"), pair("0", "Q(0)"));
    }

    #[test]
    fn torsion_pairs() {
        // Hom(K[t]/t², K[t]/t³) is generated by t; Ext¹ is the cokernel of t² on K[t]/t³.
        assert_eq!(rh("T(2,0)", "T(3,0)"), pair("T(2,1)", "T(2,-2)"));
        assert_eq!(rh("T(3,0)", "T(2,0)"), pair("T(2,0)", "T(2,-3)"));
        assert_eq!(rh("T(1,0)", "T(1,0)"), pair("T(1,0)", "T(1,-1)"));
    }

    #[test]
    fn unsupported_pairs_error() {
        for (a, b) in [("L", "PS(0)"), ("L", "Q(0)"), ("PS(0)", "F(0)"), ("Q(0)", "L")] {
            let e = rhom_atoms(Q, a.parse().unwrap(), b.parse().unwrap()).unwrap_err();
            assert!(matches!(e, Error::UnsupportedRHom { .. }), "{a} {b}");
        }
    }

    #[test]
    fn towers() {
        let lim = |s: &str| {
            let (l, l1) = tower_lim(&Tower::multiplication_by_t(Q, m(s))).unwrap();
            (l.to_string(), l1.to_string())
        };
        assert_eq!(lim("F(0)"), pair("0", "Q(0)"));
        assert_eq!(lim("T(3,0)"), pair("0", "0"));
        assert_eq!(lim("F(0) + F(2)"), pair("0", "Q(0) + Q(2)"));
        assert_eq!(lim("L"), pair("L", "0"));
        let id = Tower::new(m("F(1)"), AtomMorphism::identity(Q, &m("F(1)"))).unwrap();
        assert_eq!(tower_lim(&id).unwrap(), (m("F(1)"), m("0")));
        let bad = AtomMorphism::single(
            Q,
            Atom::free(0),
            Atom::free(0),
            crate::poly::parse_rational(Q, "1 + t").unwrap(),
        );
        let t = Tower::new(m("F(0)"), bad).unwrap();
        assert!(matches!(tower_lim(&t), Err(Error::TowerOutOfCalculus(_))));
    }

    #[test]
    fn laurent_row_matches_towers() {
        for b in ["F(0)", "F(-3)", "L", "LS", "T(2,1)"] {
            let (l, l1) = tower_lim(&Tower::multiplication_by_t(Q, m(b))).unwrap();
            let r = rhom_modules(Q, &m("L"), &m(b)).unwrap();
            assert_eq!((r.h0, r.h1), (l, l1), "{b}");
        }
    }
}
