//! Tate-type `K[t]`-modules built from a closed list of atoms, the morphisms
//! between them, and their degree-window shadows.
//!
//! Grading: an atom with shift `k` has its generator in degree `k`, so
//! `F(k) = t^k·K[t]` occupies degrees `≥ k` and `T(m, k)` occupies
//! `k..k+m`. A morphism entry `r` sends the source generator to `r` times the
//! target generator; its homogeneous part of internal degree `d` is the
//! coefficient of `t^(d + k_source - k_target)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact_linalg::{DegreeWindow, Field, GradedMap, GradedSpace, Matrix};
use crate::poly::RationalScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    /// `K[t]`
    Free,
    /// `K[t, t⁻¹]`
    Laurent,
    /// `K[[t]]`
    PowerSeries,
    /// `K((t))`
    LaurentSeries,
    /// `K[[t]] / K[t]`
    Tail,
    /// `K[t] / (t^m)`
    Torsion(u32),
}

impl AtomKind {
    fn rank(&self) -> u8 {
        match self {
            AtomKind::Free => 0,
            AtomKind::Laurent => 1,
            AtomKind::PowerSeries => 2,
            AtomKind::LaurentSeries => 3,
            AtomKind::Tail => 4,
            AtomKind::Torsion(_) => 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub shift: i64,
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        let m = |a: &Atom| match a.kind {
            AtomKind::Torsion(m) => m,
            _ => 0,
        };
        (self.kind.rank(), self.shift, m(self)).cmp(&(other.kind.rank(), other.shift, m(other)))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Atom {
    pub fn free(k: i64) -> Atom {
        Atom {
            kind: AtomKind::Free,
            shift: k,
        }
    }

    pub fn laurent(k: i64) -> Atom {
        Atom {
            kind: AtomKind::Laurent,
            shift: k,
        }
    }

    pub fn power_series(k: i64) -> Atom {
        Atom {
            kind: AtomKind::PowerSeries,
            shift: k,
        }
    }

    pub fn laurent_series(k: i64) -> Atom {
        Atom {
            kind: AtomKind::LaurentSeries,
            shift: k,
        }
    }

    pub fn tail(k: i64) -> Atom {
        Atom {
            kind: AtomKind::Tail,
            shift: k,
        }
    }

    /// `t^k·K[t]/(t^m)`; `m` must be positive.
    pub fn torsion(m: u32, k: i64) -> Atom {
        assert!(m >= 1, "torsion length must be positive");
        Atom {
            kind: AtomKind::Torsion(m),
            shift: k,
        }
    }

    pub fn shifted(self, by: i64) -> Atom {
        Atom {
            kind: self.kind,
            shift: self.shift + by,
        }
    }

    /// `t` acts invertibly.
    pub fn is_local(&self) -> bool {
        matches!(
            self.kind,
            AtomKind::Laurent | AtomKind::LaurentSeries | AtomKind::Tail
        )
    }

    /// Objects of `Perf K[t]` (finitely generated).
    pub fn is_perfect(&self) -> bool {
        matches!(self.kind, AtomKind::Free | AtomKind::Torsion(_))
    }

    /// Dimension of the degree-`n` shadow.
    pub fn dim_at(&self, n: i64) -> usize {
        let k = self.shift;
        let present = match self.kind {
            AtomKind::Free | AtomKind::PowerSeries => n >= k,
            AtomKind::Laurent | AtomKind::LaurentSeries => true,
            AtomKind::Tail => false,
            AtomKind::Torsion(m) => k <= n && n < k + m as i64,
        };
        present as usize
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.shift;
        match self.kind {
            AtomKind::Free => write!(f, "F({k})"),
            AtomKind::Laurent if k == 0 => write!(f, "L"),
            AtomKind::Laurent => write!(f, "L({k})"),
            AtomKind::PowerSeries => write!(f, "PS({k})"),
            AtomKind::LaurentSeries if k == 0 => write!(f, "LS"),
            AtomKind::LaurentSeries => write!(f, "LS({k})"),
            AtomKind::Tail => write!(f, "Q({k})"),
            AtomKind::Torsion(m) => write!(f, "T({m},{k})"),
        }
    }
}

impl std::str::FromStr for Atom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Atom> {
        let s: String = s.replace('−', "-").chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad atom `{s}`"));
        let (name, args) = match s.find('(') {
            Some(i) => {
                let inner = s[i + 1..].strip_suffix(')').ok_or_else(bad)?;
                let args: Vec<i64> = inner
                    .split(',')
                    .map(|a| a.parse().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                (&s[..i], args)
            }
            None => (s.as_str(), Vec::new()),
        };
        let one = |args: &[i64]| match args {
            [k] => Ok(*k),
            _ => Err(bad()),
        };
        match name {
            "F" => Ok(Atom::free(one(&args)?)),
            "L" if args.is_empty() => Ok(Atom::laurent(0)),
            "L" => Ok(Atom::laurent(one(&args)?)),
            "PS" => Ok(Atom::power_series(one(&args)?)),
            "LS" if args.is_empty() => Ok(Atom::laurent_series(0)),
            "LS" => Ok(Atom::laurent_series(one(&args)?)),
            "Q" => Ok(Atom::tail(one(&args)?)),
            "T" => match args[..] {
                [m, k] if m >= 1 => Ok(Atom::torsion(m as u32, k)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

/// A finite formal direct sum of atoms, kept in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AdmissibleModule {
    summands: Vec<Atom>,
}

impl AdmissibleModule {
    pub fn zero() -> AdmissibleModule {
        AdmissibleModule::default()
    }

    pub fn new(mut summands: Vec<Atom>) -> AdmissibleModule {
        summands.sort();
        AdmissibleModule { summands }
    }

    pub fn atom(a: Atom) -> AdmissibleModule {
        AdmissibleModule { summands: vec![a] }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Direct sum of `parts`, with the position of every part's summands in the result.
    pub fn direct_sum_indexed(parts: &[&AdmissibleModule]) -> (AdmissibleModule, Vec<Vec<usize>>) {
        let mut tagged: Vec<(Atom, usize, usize)> = parts
            .iter()
            .enumerate()
            .flat_map(|(p, m)| m.summands.iter().enumerate().map(move |(i, a)| (*a, p, i)))
            .collect();
        tagged.sort_by(|x, y| x.0.cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
        let mut index: Vec<Vec<usize>> = parts.iter().map(|m| vec![0; m.len()]).collect();
        for (pos, (_, p, i)) in tagged.iter().enumerate() {
            index[*p][*i] = pos;
        }
        (
            AdmissibleModule {
                summands: tagged.into_iter().map(|t| t.0).collect(),
            },
            index,
        )
    }

    pub fn direct_sum(&self, other: &AdmissibleModule) -> AdmissibleModule {
        AdmissibleModule::direct_sum_indexed(&[self, other]).0
    }

    /// Adds `k` to every summand's shift.
    pub fn shift(&self, k: i64) -> AdmissibleModule {
        AdmissibleModule {
            summands: self.summands.iter().map(|a| a.shifted(k)).collect(),
        }
    }

    pub fn contains_tail(&self) -> bool {
        self.summands.iter().any(|a| a.kind == AtomKind::Tail)
    }

    /// Per-degree shadow dimension.
    pub fn dim_at(&self, n: i64) -> usize {
        self.summands.iter().map(|a| a.dim_at(n)).sum()
    }

    /// Position of each summand in the degree-`n` basis of the shadow.
    pub fn basis_positions(&self, n: i64) -> Vec<Option<usize>> {
        let mut next = 0;
        self.summands
            .iter()
            .map(|a| {
                (a.dim_at(n) == 1).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    }

    pub fn shadow(&self, w: DegreeWindow) -> GradedSpace {
        GradedSpace::from_fn(w, |n| self.dim_at(n))
    }
}

impl fmt::Display for AdmissibleModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl std::str::FromStr for AdmissibleModule {
    type Err = Error;

    fn from_str(s: &str) -> Result<AdmissibleModule> {
        let s = s.trim();
        if s == "0" || s == "∅" || s.is_empty() {
            return Ok(AdmissibleModule::zero());
        }
        // split on `+` outside parentheses
        let mut parts = Vec::new();
        let (mut depth, mut start) = (0i32, 0);
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' if depth == 0 => {
                    parts.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&s[start..]);
        Ok(AdmissibleModule::new(
            parts.into_iter().map(str::parse).collect::<Result<_>>()?,
        ))
    }
}

/// Symbolic maps that have no entrywise representative and are tracked by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalTag {
    /// The connecting map `Q(k)[-1] -> L(k)` of the extension realized by `LS(k)`.
    ConnectingDelta,
}

/// A matrix of rational-function entries between admissible modules.
/// Rows index target summands, columns index source summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomMorphism {
    field: Field,
    source: AdmissibleModule,
    target: AdmissibleModule,
    entries: Vec<Vec<RationalScalar>>,
    tag: Option<CanonicalTag>,
}

impl AtomMorphism {
    pub fn zero(field: Field, source: AdmissibleModule, target: AdmissibleModule) -> AtomMorphism {
        let entries = vec![vec![RationalScalar::zero(field); source.len()]; target.len()];
        AtomMorphism {
            field,
            source,
            target,
            entries,
            tag: None,
        }
    }

    pub fn identity(field: Field, m: &AdmissibleModule) -> AtomMorphism {
        let mut f = AtomMorphism::zero(field, m.clone(), m.clone());
        for i in 0..m.len() {
            f.entries[i][i] = RationalScalar::one(field);
        }
        f
    }

    /// Builds a morphism, normalizing entries into torsion targets.
    pub fn new(
        field: Field,
        source: AdmissibleModule,
        target: AdmissibleModule,
        entries: Vec<Vec<RationalScalar>>,
    ) -> Result<AtomMorphism> {
        if entries.len() != target.len() || entries.iter().any(|r| r.len() != source.len()) {
            return Err(Error::ShapeMismatch {
                degree: 0,
                detail: format!(
                    "entry matrix does not match {} -> {}",
                    source, target
                ),
            });
        }
        let mut f = AtomMorphism {
            field,
            source,
            target,
            entries,
            tag: None,
        };
        f.normalize();
        Ok(f)
    }

    /// Shorthand for a morphism between single atoms.
    pub fn single(field: Field, source: Atom, target: Atom, entry: RationalScalar) -> AtomMorphism {
        AtomMorphism::new(
            field,
            AdmissibleModule::atom(source),
            AdmissibleModule::atom(target),
            vec![vec![entry]],
        )
        .expect("1x1 shape")
    }

    pub fn with_tag(mut self, tag: CanonicalTag) -> AtomMorphism {
        self.tag = Some(tag);
        self
    }

    pub fn tag(&self) -> Option<CanonicalTag> {
        self.tag
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn source(&self) -> &AdmissibleModule {
        &self.source
    }

    pub fn target(&self) -> &AdmissibleModule {
        &self.target
    }

    pub fn entry(&self, row: usize, col: usize) -> &RationalScalar {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[Vec<RationalScalar>] {
        &self.entries
    }

    pub fn set_entry(&mut self, row: usize, col: usize, v: RationalScalar) {
        self.entries[row][col] = normalize_entry(&self.target.atoms()[row], v);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(RationalScalar::is_zero)
    }

    fn normalize(&mut self) {
        for (i, row) in self.entries.iter_mut().enumerate() {
            let a = self.target.summands[i];
            for e in row.iter_mut() {
                *e = normalize_entry(&a, std::mem::replace(e, RationalScalar::zero(self.field)));
            }
        }
    }

    /// `g ∘ f`.
    pub fn compose(g: &AtomMorphism, f: &AtomMorphism) -> Result<AtomMorphism> {
        if f.target != g.source {
            return Err(Error::ShapeMismatch {
                degree: 0,
                detail: format!("cannot compose through {} vs {}", f.target, g.source),
            });
        }
        let field = f.field;
        let entries = (0..g.target.len())
            .map(|i| {
                (0..f.source.len())
                    .map(|j| {
                        (0..f.target.len()).fold(RationalScalar::zero(field), |acc, k| {
                            if g.entries[i][k].is_zero() || f.entries[k][j].is_zero() {
                                acc
                            } else {
                                acc.add(&g.entries[i][k].mul(&f.entries[k][j]))
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        let mut out = AtomMorphism::new(field, f.source.clone(), g.target.clone(), entries)?;
        out.tag = f.tag.or(g.tag);
        Ok(out)
    }

    pub fn add(&self, other: &AtomMorphism) -> Result<AtomMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch {
                degree: 0,
                detail: "sum of morphisms with different endpoints".into(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            .collect();
        AtomMorphism::new(self.field, self.source.clone(), self.target.clone(), entries)
    }

    pub fn neg(&self) -> AtomMorphism {
        self.scale(&RationalScalar::from_i64(self.field, -1))
    }

    pub fn scale(&self, c: &RationalScalar) -> AtomMorphism {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x.mul(c)).collect())
            .collect();
        let mut f = AtomMorphism::new(self.field, self.source.clone(), self.target.clone(), entries)
            .expect("same shape");
        f.tag = self.tag;
        f
    }

    /// Checks every entry against the Hom-space of its pair of atoms.
    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let (a, b) = (self.source.summands[j], self.target.summands[i]);
                if let Some(rule) = violated_rule(a, b, e, self.tag) {
                    return Err(Error::MorphismViolation {
                        row: i,
                        col: j,
                        rule: format!("{a} -> {b}: {rule}"),
                    });
                }
            }
        }
        Ok(())
    }
}

pub fn validate_morphism(f: &AtomMorphism) -> Result<()> {
    f.validate()
}

pub(crate) fn normalize_entry(target: &Atom, e: RationalScalar) -> RationalScalar {
    match target.kind {
        AtomKind::Torsion(m) => e.reduce_mod_t_power(m as usize).unwrap_or(e),
        _ => e,
    }
}

/// The admissibility rule `e` breaks as an entry `a -> b`, if any.
fn violated_rule(a: Atom, b: Atom, e: &RationalScalar, tag: Option<CanonicalTag>) -> Option<&'static str> {
    use AtomKind::*;
    if e.is_zero() {
        return None;
    }
    if tag.is_some() && (a.kind == Tail || b.kind == Tail) {
        return None;
    }
    let ok = match (a.kind, b.kind) {
        (Free, Free) => e.is_polynomial(),
        (Free | PowerSeries, PowerSeries) => e.is_regular_at_zero(),
        (Free, Laurent) | (Laurent, Laurent) | (Tail, Tail) => e.is_laurent_polynomial(),
        (Free | Laurent | PowerSeries | LaurentSeries, LaurentSeries) => true,
        (Free | PowerSeries, Torsion(_)) => e.is_regular_at_zero(),
        (Torsion(m), Torsion(n)) => {
            e.is_regular_at_zero() && e.valuation().unwrap() >= n as i64 - m as i64
        }
        _ => false,
    };
    if ok {
        return None;
    }
    Some(match (a.kind, b.kind) {
        (Free, Free) => "Hom(F,F) = K[t] requires a polynomial",
        (Laurent, Free) => "H⁰(RHom(L,F)) = 0",
        (Torsion(_), Free) => "H⁰(RHom(T,F)) = 0",
        (Torsion(_), Torsion(_)) => "t^m must annihilate the image",
        (Torsion(_), _) => "torsion maps to torsion-free modules vanish",
        (_, Tail) | (Tail, _) => "only zero or registered canonical maps touch Q",
        (_, Laurent) => "Hom into L requires a Laurent polynomial",
        (_, PowerSeries) | (_, Torsion(_)) => "entry must be regular at t = 0",
        _ => "Hom-space is zero",
    })
}

/// The shadow of `m` on `w` together with the `t`-action (internal degree 1).
pub fn realize_module(field: Field, m: &AdmissibleModule, w: DegreeWindow) -> (GradedSpace, GradedMap) {
    let space = m.shadow(w);
    let mut blocks = BTreeMap::new();
    for n in w.degrees() {
        if !w.contains(n + 1) {
            continue;
        }
        let (src, dst) = (m.basis_positions(n), m.basis_positions(n + 1));
        let mut b = Matrix::zeros(field, space.dim(n + 1), space.dim(n));
        for (s, t) in src.iter().zip(&dst) {
            if let (Some(s), Some(t)) = (s, t) {
                b.set(*t, *s, field.one());
            }
        }
        blocks.insert(n, b);
    }
    let t = GradedMap::new(field, space.clone(), space.clone(), 1, blocks).expect("shapes by construction");
    (space, t)
}

/// The homogeneous component of internal degree `d` of `f` on `w`.
pub fn realize_component(f: &AtomMorphism, w: DegreeWindow, d: i64) -> GradedMap {
    let field = f.field;
    let src = f.source.shadow(w);
    let dst = f.target.shadow(w);
    let mut blocks = BTreeMap::new();
    for n in w.degrees() {
        if !w.contains(n + d) {
            continue;
        }
        let (sp, tp) = (f.source.basis_positions(n), f.target.basis_positions(n + d));
        let mut b = Matrix::zeros(field, dst.dim(n + d), src.dim(n));
        for (i, ti) in tp.iter().enumerate() {
            let Some(ti) = ti else { continue };
            for (j, sj) in sp.iter().enumerate() {
                let Some(sj) = sj else { continue };
                let e = &f.entries[i][j];
                if e.is_zero() {
                    continue;
                }
                let exp = d + f.source.summands[j].shift - f.target.summands[i].shift;
                b.set(*ti, *sj, e.coeff(exp));
            }
        }
        blocks.insert(n, b);
    }
    GradedMap::new(field, src, dst, d, blocks).expect("shapes by construction")
}

/// All nonzero homogeneous components of `f` visible on `w`, keyed by degree.
pub fn realize_morphism(f: &AtomMorphism, w: DegreeWindow) -> BTreeMap<i64, GradedMap> {
    let span = w.hi() - w.lo();
    (-span..=span)
        .map(|d| (d, realize_component(f, w, d)))
        .filter(|(_, g)| !g.is_zero())
        .collect()
}

pub fn shift_module(m: &AdmissibleModule, k: i64) -> AdmissibleModule {
    m.shift(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_rational;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn w(lo: i64, hi: i64) -> DegreeWindow {
        DegreeWindow::new(lo, hi).unwrap()
    }

    fn m(s: &str) -> AdmissibleModule {
        s.parse().unwrap()
    }

    fn r(s: &str) -> RationalScalar {
        parse_rational(Q, s).unwrap()
    }

    #[test]
    fn rendering_and_parsing() {
        for s in ["F(2)", "L", "PS(0)", "LS", "Q(0)", "T(3,-1)", "L(-1)", "LS(2)"] {
            let a: Atom = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        assert_eq!("T(3,−1)".parse::<Atom>().unwrap(), Atom::torsion(3, -1));
        assert!("T(0,1)".parse::<Atom>().is_err());
        assert!("X(1)".parse::<Atom>().is_err());
        assert_eq!(m("L + F(1) + F(0)").to_string(), "F(0) + F(1) + L");
        assert_eq!(m("0"), AdmissibleModule::zero());
    }

    #[test]
    fn validation_table() {
        let f = AtomMorphism::single(Q, Atom::free(0), Atom::free(0), r("t^3"));
        assert!(f.validate().is_ok());
        let f = AtomMorphism::single(Q, Atom::laurent(0), Atom::free(0), r("1"));
        match f.validate() {
            Err(Error::MorphismViolation { rule, .. }) => assert!(rule.contains("H⁰(RHom(L,F)) = 0")),
            other => panic!("{other:?}"),
        }
        let f = AtomMorphism::single(Q, Atom::free(0), Atom::laurent_series(0), r("1/(1-t)"));
        assert!(f.validate().is_ok());
        let f = AtomMorphism::single(Q, Atom::free(0), Atom::laurent(0), r("1/(1-t)"));
        assert!(f.validate().is_err());
        let f = AtomMorphism::single(Q, Atom::torsion(2, 0), Atom::torsion(3, 0), r("t"));
        assert!(f.validate().is_ok());
        let f = AtomMorphism::single(Q, Atom::torsion(2, 0), Atom::torsion(3, 0), r("1"));
        assert!(f.validate().is_err());
        let f = AtomMorphism::single(Q, Atom::free(0), Atom::tail(0), r("1"));
        assert!(f.validate().is_err());
        assert!(f.with_tag(CanonicalTag::ConnectingDelta).validate().is_ok());
    }

    #[test]
    fn torsion_targets_reduce() {
        let f = AtomMorphism::single(Q, Atom::free(0), Atom::torsion(2, 0), r("1/(1-t)"));
        assert_eq!(f.entry(0, 0), &r("1 + t"));
    }

    #[test]
    fn shadows() {
        let (s, _) = realize_module(Q, &m("F(0)"), w(-3, 3));
        assert_eq!(s.dims(), &[0, 0, 0, 1, 1, 1, 1]);
        let (s, _) = realize_module(Q, &m("L"), w(-2, 2));
        assert_eq!(s.dims(), &[1; 5]);
        let (s, _) = realize_module(Q, &m("Q(0)"), w(-4, 4));
        assert_eq!(s.dims(), &[0; 9]);
        let (s, t) = realize_module(Q, &m("T(2,1)"), w(0, 4));
        assert_eq!(s.dims(), &[0, 1, 1, 0, 0]);
        assert!(!t.block(1).is_zero());
        assert!(t.block(2).is_zero());
    }

    #[test]
    fn shifted_shadow_matches_translated_window() {
        let base = m("F(0)");
        let shifted = base.shift(2);
        let win = w(-4, 4);
        let moved = win.translate(-2);
        for n in win.degrees() {
            assert_eq!(shifted.dim_at(n), base.dim_at(n - 2));
        }
        assert_eq!(shifted.shadow(win).dims(), base.shadow(moved).dims());
        assert_eq!(shift_module(&AdmissibleModule::zero(), 5), AdmissibleModule::zero());
        assert_eq!(m("F(2)").shift(3), m("F(5)"));
    }

    #[test]
    fn geometric_series_realization() {
        let f = AtomMorphism::single(Q, Atom::free(0), Atom::laurent_series(0), r("1/(1-t)"));
        let comps = realize_morphism(&f, w(0, 3));
        let image: Vec<String> = (0..=3).map(|d| comps[&d].block(0).get(0, 0).to_string()).collect();
        assert_eq!(image, ["1", "1", "1", "1"]);
    }

    #[test]
    fn t_times_identity_is_shift() {
        let f = AtomMorphism::single(Q, Atom::free(0), Atom::free(0), r("t"));
        let comps = realize_morphism(&f, w(0, 3));
        assert_eq!(comps.len(), 1);
        let (_, t) = realize_module(Q, &m("F(0)"), w(0, 3));
        assert_eq!(comps[&1], t);
        let zero = AtomMorphism::zero(Q, m("F(0)"), m("F(0)"));
        assert!(realize_morphism(&zero, w(0, 3)).is_empty());
    }

    #[test]
    fn realization_commutes_with_t_on_interior() {
        let f = AtomMorphism::single(Q, Atom::free(2), Atom::free(0), r("t^2"));
        let win = w(-2, 6);
        let g = realize_component(&f, win, 0);
        let (_, ts) = realize_module(Q, f.source(), win);
        let (_, tt) = realize_module(Q, f.target(), win);
        let a = GradedMap::compose(&g, &ts).unwrap();
        let b = GradedMap::compose(&tt, &g).unwrap();
        for n in win.interior(1).unwrap().degrees() {
            assert_eq!(a.block(n), b.block(n));
        }
    }

    fn atom_strategy() -> impl Strategy<Value = Atom> {
        (0u8..6, -2i64..3, 1u32..4).prop_map(|(k, s, m)| match k {
            0 => Atom::free(s),
            1 => Atom::laurent(s),
            2 => Atom::power_series(s),
            3 => Atom::laurent_series(s),
            4 => Atom::tail(s),
            _ => Atom::torsion(m, s),
        })
    }

    fn entry_strategy() -> impl Strategy<Value = RationalScalar> {
        prop_oneof![
            (-2i64..3, -2i64..4).prop_map(|(c, e)| RationalScalar::monomial(Q.from_i64(c), e)),
            (-2i64..3).prop_map(|e| r("1/(1-t)").mul(&RationalScalar::t_pow(Q, e))),
            Just(r("1 + t^2")),
        ]
    }

    proptest! {
        #[test]
        fn shadows_are_additive(a in atom_strategy(), b in atom_strategy(), n in -6i64..6) {
            let sum = AdmissibleModule::new(vec![a, b]);
            prop_assert_eq!(sum.dim_at(n), a.dim_at(n) + b.dim_at(n));
        }

        #[test]
        fn valid_morphisms_compose_to_valid(a in atom_strategy(), b in atom_strategy(), c in atom_strategy(),
                                           e1 in entry_strategy(), e2 in entry_strategy()) {
            let f = AtomMorphism::single(Q, a, b, e1);
            let g = AtomMorphism::single(Q, b, c, e2);
            if f.validate().is_ok() && g.validate().is_ok() {
                let h = AtomMorphism::compose(&g, &f).unwrap();
                prop_assert!(h.validate().is_ok(), "{} -> {} -> {}: {:?}", a, b, c, h.entry(0, 0));
            }
        }

        #[test]
        fn module_text_round_trips(atoms in prop::collection::vec(atom_strategy(), 0..4)) {
            let mm = AdmissibleModule::new(atoms);
            prop_assert_eq!(mm.to_string().parse::<AdmissibleModule>().unwrap(), mm);
        }
    }
}
