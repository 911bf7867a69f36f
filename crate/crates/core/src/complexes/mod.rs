//! Bounded cochain complexes of admissible modules, chain maps, shifts and
//! cones. Differentials raise cohomological degree by one and are
//! homogeneous of internal degree zero.

mod cohomology;
mod shadow;

use std::collections::BTreeMap;

pub use cohomology::{cohomology, Calculus, ExtensionCertificate};
pub use shadow::{
    induced_rank, null_homotopy_obstruction, realize, shadow_cohomology, NullHomotopy,
    RealizedComplex,
};

use crate::atoms::{AdmissibleModule, AtomMorphism};
use crate::error::{Error, Result};
use crate::exact_linalg::Field;
use crate::poly::RationalScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    field: Field,
    terms: BTreeMap<i64, AdmissibleModule>,
    diffs: BTreeMap<i64, AtomMorphism>,
}

impl Complex {
    /// Checks endpoints, admissibility of every differential and `d² = 0`.
    pub fn new(
        field: Field,
        terms: impl IntoIterator<Item = (i64, AdmissibleModule)>,
        diffs: impl IntoIterator<Item = (i64, AtomMorphism)>,
    ) -> Result<Complex> {
        let terms: BTreeMap<i64, AdmissibleModule> =
            terms.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let mut kept = BTreeMap::new();
        for (n, d) in diffs {
            let src = terms.get(&n).cloned().unwrap_or_default();
            let dst = terms.get(&(n + 1)).cloned().unwrap_or_default();
            if d.source() != &src || d.target() != &dst {
                return Err(Error::ShapeMismatch {
                    degree: n,
                    detail: format!("d^{n} is {} -> {}, terms are {src} -> {dst}", d.source(), d.target()),
                });
            }
            d.validate()?;
            if !d.is_zero() {
                kept.insert(n, d);
            }
        }
        let x = Complex {
            field,
            terms,
            diffs: kept,
        };
        for (&n, d) in &x.diffs {
            if let Some(next) = x.diffs.get(&(n + 1)) {
                if !AtomMorphism::compose(next, d)?.is_zero() {
                    return Err(Error::NotAComplex { degree: n });
                }
            }
        }
        Ok(x)
    }

    pub fn zero(field: Field) -> Complex {
        Complex {
            field,
            terms: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    /// `m` placed in cohomological degree `n`.
    pub fn concentrated(field: Field, m: AdmissibleModule, n: i64) -> Complex {
        Complex::new(field, [(n, m)], []).expect("no differentials")
    }

    /// `d.source() → d.target()` in degrees `n, n + 1`.
    pub fn two_term(d: AtomMorphism, n: i64) -> Result<Complex> {
        Complex::new(
            d.field(),
            [(n, d.source().clone()), (n + 1, d.target().clone())],
            [(n, d)],
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn term(&self, n: i64) -> AdmissibleModule {
        self.terms.get(&n).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> &BTreeMap<i64, AdmissibleModule> {
        &self.terms
    }

    /// `d^n : X^n → X^(n+1)`.
    pub fn differential(&self, n: i64) -> AtomMorphism {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| AtomMorphism::zero(self.field, self.term(n), self.term(n + 1)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest and highest nonzero degree.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    /// `X[s]^n = X^(n+s)` with differentials scaled by `(-1)^s`.
    pub fn shift(&self, s: i64) -> Complex {
        let sign = RationalScalar::from_i64(self.field, if s.rem_euclid(2) == 0 { 1 } else { -1 });
        Complex {
            field: self.field,
            terms: self.terms.iter().map(|(n, m)| (n - s, m.clone())).collect(),
            diffs: self.diffs.iter().map(|(n, d)| (n - s, d.scale(&sign))).collect(),
        }
    }

    /// Internal-degree twist: every summand's shift moves by `k`, entries unchanged.
    pub fn twist(&self, k: i64) -> Complex {
        let twist_map = |d: &AtomMorphism| {
            let f = AtomMorphism::new(
                self.field,
                d.source().shift(k),
                d.target().shift(k),
                d.entries().to_vec(),
            )
            .expect("same shape");
            match d.tag() {
                Some(t) => f.with_tag(t),
                None => f,
            }
        };
        Complex {
            field: self.field,
            terms: self.terms.iter().map(|(n, m)| (*n, m.shift(k))).collect(),
            diffs: self.diffs.iter().map(|(n, d)| (*n, twist_map(d))).collect(),
        }
    }

    /// Degreewise direct sum with the position of each part's summands.
    pub fn direct_sum_indexed(parts: &[&Complex]) -> (Complex, BTreeMap<i64, Vec<Vec<usize>>>) {
        let field = parts.first().map_or(Field::Rational, |p| p.field);
        let degrees: std::collections::BTreeSet<i64> =
            parts.iter().flat_map(|p| p.terms.keys().copied()).collect();
        let mut terms = BTreeMap::new();
        let mut index = BTreeMap::new();
        for &n in &degrees {
            let mods: Vec<AdmissibleModule> = parts.iter().map(|p| p.term(n)).collect();
            let refs: Vec<&AdmissibleModule> = mods.iter().collect();
            let (sum, idx) = AdmissibleModule::direct_sum_indexed(&refs);
            terms.insert(n, sum);
            index.insert(n, idx);
        }
        let mut diffs = BTreeMap::new();
        for &n in &degrees {
            if !degrees.contains(&(n + 1)) {
                continue;
            }
            let ds: Vec<AtomMorphism> = parts.iter().map(|p| p.differential(n)).collect();
            let blocks: Vec<(usize, usize, &AtomMorphism)> =
                ds.iter().enumerate().map(|(p, d)| (p, p, d)).collect();
            let d = assemble(field, (&terms[&n], &index[&n]), (&terms[&(n + 1)], &index[&(n + 1)]), &blocks);
            if !d.is_zero() {
                diffs.insert(n, d);
            }
        }
        (
            Complex {
                field,
                terms,
                diffs,
            },
            index,
        )
    }
}

/// Builds a morphism between direct sums from blocks `(target part, source part, map)`.
pub(crate) fn assemble(
    field: Field,
    source: (&AdmissibleModule, &[Vec<usize>]),
    target: (&AdmissibleModule, &[Vec<usize>]),
    blocks: &[(usize, usize, &AtomMorphism)],
) -> AtomMorphism {
    let mut entries = vec![vec![RationalScalar::zero(field); source.0.len()]; target.0.len()];
    let mut tag = None;
    for (p, q, m) in blocks {
        tag = tag.or(m.tag());
        for i in 0..m.target().len() {
            for j in 0..m.source().len() {
                let e = m.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                let (r, c) = (target.1[*p][i], source.1[*q][j]);
                entries[r][c] = entries[r][c].add(e);
            }
        }
    }
    let f = AtomMorphism::new(field, source.0.clone(), target.0.clone(), entries).expect("shape by construction");
    match tag {
        Some(t) => f.with_tag(t),
        None => f,
    }
}

/// A degreewise family of morphisms commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    components: BTreeMap<i64, AtomMorphism>,
}

impl ChainMap {
    pub fn new(
        source: Complex,
        target: Complex,
        components: impl IntoIterator<Item = (i64, AtomMorphism)>,
    ) -> Result<ChainMap> {
        let mut kept = BTreeMap::new();
        for (n, f) in components {
            if f.source() != &source.term(n) || f.target() != &target.term(n) {
                return Err(Error::ShapeMismatch {
                    degree: n,
                    detail: format!("component {} -> {} does not match the terms", f.source(), f.target()),
                });
            }
            f.validate()?;
            if !f.is_zero() {
                kept.insert(n, f);
            }
        }
        let phi = ChainMap {
            source,
            target,
            components: kept,
        };
        let lo = phi.source.support().map_or(0, |s| s.0).min(phi.target.support().map_or(0, |s| s.0));
        let hi = phi.source.support().map_or(0, |s| s.1).max(phi.target.support().map_or(0, |s| s.1));
        for n in lo - 1..=hi {
            let a = AtomMorphism::compose(&phi.target.differential(n), &phi.component(n))?;
            let b = AtomMorphism::compose(&phi.component(n + 1), &phi.source.differential(n))?;
            if a.entries() != b.entries() {
                return Err(Error::NotAChainMap { degree: n });
            }
        }
        Ok(phi)
    }

    pub fn zero(source: Complex, target: Complex) -> ChainMap {
        ChainMap {
            source,
            target,
            components: BTreeMap::new(),
        }
    }

    pub fn identity(x: &Complex) -> ChainMap {
        let comps = x
            .terms
            .iter()
            .map(|(n, m)| (*n, AtomMorphism::identity(x.field, m)))
            .collect();
        ChainMap {
            source: x.clone(),
            target: x.clone(),
            components: comps,
        }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn component(&self, n: i64) -> AtomMorphism {
        self.components.get(&n).cloned().unwrap_or_else(|| {
            AtomMorphism::zero(self.source.field, self.source.term(n), self.target.term(n))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// `φ[s]^n = φ^(n+s)`.
    pub fn shift(&self, s: i64) -> ChainMap {
        ChainMap {
            source: self.source.shift(s),
            target: self.target.shift(s),
            components: self.components.iter().map(|(n, f)| (n - s, f.clone())).collect(),
        }
    }

    /// Block-diagonal sum of chain maps.
    pub fn direct_sum(parts: &[ChainMap]) -> ChainMap {
        let srcs: Vec<&Complex> = parts.iter().map(|p| &p.source).collect();
        let tgts: Vec<&Complex> = parts.iter().map(|p| &p.target).collect();
        let (source, si) = Complex::direct_sum_indexed(&srcs);
        let (target, ti) = Complex::direct_sum_indexed(&tgts);
        let field = source.field;
        let mut components = BTreeMap::new();
        for (n, sidx) in &si {
            let Some(tidx) = ti.get(n) else { continue };
            let comps: Vec<AtomMorphism> = parts.iter().map(|p| p.component(*n)).collect();
            let blocks: Vec<(usize, usize, &AtomMorphism)> =
                comps.iter().enumerate().map(|(p, f)| (p, p, f)).collect();
            let f = assemble(field, (&source.terms[n], sidx), (&target.terms[n], tidx), &blocks);
            if !f.is_zero() {
                components.insert(*n, f);
            }
        }
        ChainMap {
            source,
            target,
            components,
        }
    }
}

/// `Cone(φ)^n = S^(n+1) ⊕ T^n` with differential `(-d_S, 0; φ, d_T)`.
pub fn cone(phi: &ChainMap) -> Result<Complex> {
    let (s, t) = (&phi.source, &phi.target);
    let field = s.field;
    let mut degrees = std::collections::BTreeSet::new();
    degrees.extend(s.terms.keys().map(|n| n - 1));
    degrees.extend(t.terms.keys().copied());
    let piece = |n: i64| {
        let (a, b) = (s.term(n + 1), t.term(n));
        let (sum, idx) = AdmissibleModule::direct_sum_indexed(&[&a, &b]);
        (sum, idx)
    };
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for &n in &degrees {
        let (src, si) = piece(n);
        let (dst, ti) = piece(n + 1);
        let minus_ds = s.differential(n + 1).neg();
        let ph = phi.component(n + 1);
        let dt = t.differential(n);
        let d = assemble(field, (&src, &si), (&dst, &ti), &[(0, 0, &minus_ds), (1, 0, &ph), (1, 1, &dt)]);
        terms.push((n, src));
        if degrees.contains(&(n + 1)) {
            diffs.push((n, d));
        }
    }
    Complex::new(field, terms, diffs)
}

pub fn shift(x: &Complex, s: i64) -> Complex {
    x.shift(s)
}
