use std::fmt;

use crate::atoms::{AdmissibleModule, Atom, AtomKind, AtomMorphism};
use crate::error::{Error, Result};
use crate::exact_linalg::Field;
use crate::functors::localize;
use crate::poly::RationalScalar;

/// A cohomology class `(f, g)` of morphisms `c → d`.
///
/// `f` is the part in `H¹ RHom(L c, d)`: one tail class per pair of free
/// summands, stored as its canonical representative modulo Laurent
/// polynomials, indexed `[target][source]` over the localized summands.
/// `g : L c → L d` is an ordinary morphism of local modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RabClass {
    pub source: AdmissibleModule,
    pub target: AdmissibleModule,
    pub f: Vec<Vec<RationalScalar>>,
    pub g: AtomMorphism,
}

impl RabClass {
    /// Canonicalizes `f` and checks both parts against the localized shapes.
    pub fn new(
        source: AdmissibleModule,
        target: AdmissibleModule,
        f: Vec<Vec<RationalScalar>>,
        g: AtomMorphism,
    ) -> Result<RabClass> {
        let (lc, ld) = (localize(&source), localize(&target));
        if g.source() != &lc || g.target() != &ld {
            return Err(Error::ShapeMismatch {
                degree: 0,
                detail: format!("g is {} -> {}, expected {lc} -> {ld}", g.source(), g.target()),
            });
        }
        if f.len() != ld.len() || f.iter().any(|r| r.len() != lc.len()) {
            return Err(Error::ShapeMismatch {
                degree: 0,
                detail: format!("f must be {}x{}", ld.len(), lc.len()),
            });
        }
        g.validate()?;
        let f = f
            .iter()
            .map(|row| row.iter().map(RationalScalar::modulo_laurent_polynomials).collect())
            .collect();
        Ok(RabClass { source, target, f, g })
    }

    pub fn zero(field: Field, source: &AdmissibleModule, target: &AdmissibleModule) -> RabClass {
        let (lc, ld) = (localize(source), localize(target));
        RabClass {
            f: vec![vec![RationalScalar::zero(field); lc.len()]; ld.len()],
            g: AtomMorphism::zero(field, lc, ld),
            source: source.clone(),
            target: target.clone(),
        }
    }

    pub fn field(&self) -> Field {
        self.g.field()
    }

    pub fn add(&self, other: &RabClass) -> Result<RabClass> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch {
                degree: 0,
                detail: format!("cannot add classes {} -> {} and {} -> {}", self.source, self.target, other.source, other.target),
            });
        }
        let f = self
            .f
            .iter()
            .zip(&other.f)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y).modulo_laurent_polynomials()).collect())
            .collect();
        Ok(RabClass {
            source: self.source.clone(),
            target: self.target.clone(),
            f,
            g: self.g.add(&other.g)?,
        })
    }

    pub fn scale(&self, c: &RationalScalar) -> RabClass {
        RabClass {
            source: self.source.clone(),
            target: self.target.clone(),
            f: self
                .f
                .iter()
                .map(|r| r.iter().map(|x| x.mul(c).modulo_laurent_polynomials()).collect())
                .collect(),
            g: self.g.scale(c),
        }
    }
}

impl fmt::Display for RabClass {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |m: &[Vec<RationalScalar>]| {
            let rows: Vec<String> = m
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
                .collect();
            format!("[{}]", rows.join("; "))
        };
        write!(out, "({}, {})", show(&self.f), show(self.g.entries()))
    }
}

/// Matrix product of tail classes, each term reduced before summing so that
/// sums are taken over small common denominators.
fn tail_mul(a: &[Vec<RationalScalar>], b: &[Vec<RationalScalar>], zero: &RationalScalar) -> Vec<Vec<RationalScalar>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(zero.clone(), |acc, k| {
                        acc.add(&row[k].mul(&b[k][j]).modulo_laurent_polynomials())
                    })
                })
                .collect()
        })
        .collect()
}

/// `(f₁, g₁) ∘ (f₀, g₀) = (g₁·f₀ + f₁·g₀, g₁ g₀)`.
///
/// `g₁·f₀` is the preimage under the unit of `g₁ ∘ u ∘ f₀`: the unit identifies
/// tail classes of `d` with those of `L d`, so the preimage is the product
/// reduced modulo Laurent polynomials. It exists exactly when `g₁` has Laurent
/// polynomial entries.
pub fn compose_classes(x1: &RabClass, x0: &RabClass) -> Result<RabClass> {
    if x0.target != x1.source {
        return Err(Error::ShapeMismatch {
            degree: 0,
            detail: format!("cannot compose {} -> {} after {} -> {}", x1.source, x1.target, x0.source, x0.target),
        });
    }
    if let Some(bad) = x1.g.entries().iter().flatten().find(|e| !e.is_laurent_polynomial()) {
        return Err(Error::CompositionLeavesCalculus(format!(
            "g entry {bad} has no preimage under the unit on tail classes"
        )));
    }
    let zero = RationalScalar::zero(x0.field());
    let g1f0 = tail_mul(x1.g.entries(), &x0.f, &zero);
    let f1g0 = tail_mul(&x1.f, x0.g.entries(), &zero);
    let f = g1f0
        .iter()
        .zip(&f1g0)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y).modulo_laurent_polynomials()).collect())
        .collect();
    Ok(RabClass {
        source: x0.source.clone(),
        target: x1.target.clone(),
        f,
        g: AtomMorphism::compose(&x1.g, &x0.g)?,
    })
}

/// `(0, id)` on the localization; the zero class on torsion objects.
pub fn unit_class(field: Field, c: &AdmissibleModule) -> RabClass {
    let lc = localize(c);
    RabClass {
        source: c.clone(),
        target: c.clone(),
        f: vec![vec![RationalScalar::zero(field); lc.len()]; lc.len()],
        g: AtomMorphism::identity(field, &lc),
    }
}

/// Endomorphism classes of `F(0)`: `f ∈ {0} ∪ {t^k/(1-t)²}` and `g = t^a`,
/// with `|k|, |a| ≤ bound`. The tail classes are pairwise distinct.
pub fn sample_classes(field: Field, bound: i64) -> Vec<RabClass> {
    let c = AdmissibleModule::atom(Atom::free(0));
    let one_minus_t_sq = {
        let u = RationalScalar::one(field).sub(&RationalScalar::t_pow(field, 1));
        u.mul(&u)
    };
    let mut fs = vec![RationalScalar::zero(field)];
    for k in -bound..=bound {
        fs.push(RationalScalar::t_pow(field, k).div(&one_minus_t_sq).expect("nonzero"));
    }
    let l = Atom::laurent(0);
    debug_assert_eq!(localize(&c).atoms(), &[l]);
    let mut out = Vec::new();
    for f in &fs {
        for a in -bound..=bound {
            let g = AtomMorphism::single(field, l, l, RationalScalar::t_pow(field, a));
            out.push(RabClass::new(c.clone(), c.clone(), vec![vec![f.clone()]], g).expect("valid sample"));
        }
    }
    debug_assert!(out.iter().all(|x| x.g.source().atoms().iter().all(|a| a.kind == AtomKind::Laurent)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_rational;

    const Q: Field = Field::Rational;

    fn f0() -> AdmissibleModule {
        AdmissibleModule::atom(Atom::free(0))
    }

    fn g_only(e: i64) -> RabClass {
        let l = Atom::laurent(0);
        RabClass::new(f0(), f0(), vec![vec![RationalScalar::zero(Q)]], AtomMorphism::single(Q, l, l, RationalScalar::t_pow(Q, e))).unwrap()
    }

    #[test]
    fn monomial_case() {
        let x = compose_classes(&g_only(3), &g_only(2)).unwrap();
        assert_eq!(x, g_only(5));
        assert!(x.f[0][0].is_zero());
    }

    #[test]
    fn samples_are_distinct() {
        let s = sample_classes(Q, 3);
        assert_eq!(s.len(), 56);
        for (i, a) in s.iter().enumerate() {
            for b in &s[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn unit_laws() {
        let u = unit_class(Q, &f0());
        assert_eq!(compose_classes(&u, &u).unwrap(), u);
        for x in sample_classes(Q, 3) {
            assert_eq!(compose_classes(&u, &x).unwrap(), x);
            assert_eq!(compose_classes(&x, &u).unwrap(), x);
        }
        let tors = unit_class(Q, &AdmissibleModule::atom(Atom::torsion(2, 0)));
        assert!(tors.g.source().is_zero() && tors.f.is_empty());
    }

    #[test]
    fn associativity_on_all_triples() {
        let s = sample_classes(Q, 3);
        for x2 in &s {
            for x1 in &s {
                let x21 = compose_classes(x2, x1).unwrap();
                for x0 in &s {
                    let lhs = compose_classes(&x21, x0).unwrap();
                    let rhs = compose_classes(x2, &compose_classes(x1, x0).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn bilinear() {
        let s = sample_classes(Q, 2);
        let lam = parse_rational(Q, "3/2").unwrap();
        let mu = parse_rational(Q, "-5").unwrap();
        for x1 in s.iter().step_by(3) {
            for (a, b) in s.iter().zip(s.iter().rev()).step_by(2) {
                let comb = a.scale(&lam).add(&b.scale(&mu)).unwrap();
                let lhs = compose_classes(x1, &comb).unwrap();
                let rhs = compose_classes(x1, a).unwrap().scale(&lam).add(&compose_classes(x1, b).unwrap().scale(&mu)).unwrap();
                assert_eq!(lhs, rhs);
                let lhs = compose_classes(&comb, x1).unwrap();
                let rhs = compose_classes(a, x1).unwrap().scale(&lam).add(&compose_classes(b, x1).unwrap().scale(&mu)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn tail_part_moves_with_g() {
        let f = parse_rational(Q, "1/(1-t)").unwrap();
        let l = Atom::laurent(0);
        let x0 = RabClass::new(f0(), f0(), vec![vec![f.clone()]], AtomMorphism::identity(Q, &localize(&f0()))).unwrap();
        let x = compose_classes(&g_only(-1), &x0).unwrap();
        // t⁻¹/(1-t) ≡ 1/(1-t) modulo Laurent polynomials
        assert_eq!(x.f[0][0], f.modulo_laurent_polynomials());
        assert_eq!(x.g, AtomMorphism::single(Q, l, l, RationalScalar::t_pow(Q, -1)));
    }

    #[test]
    fn non_laurent_g_leaves_calculus() {
        let l = Atom::laurent(0);
        let bad = AtomMorphism::new(
            Q,
            AdmissibleModule::atom(l),
            AdmissibleModule::atom(l),
            vec![vec![parse_rational(Q, "1/(1-t)").unwrap()]],
        )
        .unwrap();
        let x1 = RabClass { source: f0(), target: f0(), f: vec![vec![RationalScalar::zero(Q)]], g: bad };
        let err = compose_classes(&x1, &g_only(0)).unwrap_err();
        assert!(matches!(err, Error::CompositionLeavesCalculus(_)));
    }
}
