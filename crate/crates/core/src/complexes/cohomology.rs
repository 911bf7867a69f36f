//! Symbolic cohomology: cancel isomorphism entries, then identify what is
//! left component by component from a closed list of patterns.

use std::collections::BTreeMap;

use super::Complex;
use crate::atoms::{normalize_entry, AdmissibleModule, Atom, AtomKind};
use crate::error::{Error, Result};
use crate::exact_linalg::{DegreeWindow, Field};
use crate::poly::RationalScalar;

/// Evidence that the connecting map `Q(0)[-1] → L` admits no null-homotopy,
/// so that the pushout of `K[[t]] ← K[t] → K[t,t⁻¹]` is the nonsplit extension `K((t))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCertificate {
    pub truncation: usize,
    pub window: DegreeWindow,
    pub margin: i64,
    /// Internal degree at which the homotopy equations first become inconsistent.
    pub obstructed_at: i64,
}

impl ExtensionCertificate {
    pub(crate) fn new(truncation: usize, window: DegreeWindow, margin: i64, obstructed_at: i64) -> Self {
        ExtensionCertificate {
            truncation,
            window,
            margin,
            obstructed_at,
        }
    }
}

/// The rules symbolic cohomology may use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Calculus {
    pub field: Field,
    pub extension: Option<ExtensionCertificate>,
}

impl Calculus {
    /// Table rules only; the `K((t))` identification is unavailable.
    pub fn basic(field: Field) -> Calculus {
        Calculus {
            field,
            extension: None,
        }
    }

    pub fn with_extension(field: Field, cert: ExtensionCertificate) -> Calculus {
        Calculus {
            field,
            extension: Some(cert),
        }
    }
}

struct Work {
    terms: BTreeMap<i64, Vec<Atom>>,
    // d[n][row][col] : terms[n] -> terms[n+1]
    diffs: BTreeMap<i64, Vec<Vec<RationalScalar>>>,
}

impl Work {
    fn entry(&self, n: i64, i: usize, j: usize) -> Option<&RationalScalar> {
        self.diffs.get(&n).map(|d| &d[i][j]).filter(|e| !e.is_zero())
    }

    fn find_iso(&self) -> Option<(i64, usize, usize)> {
        for (&n, d) in &self.diffs {
            for (i, row) in d.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if is_homogeneous_iso(self.terms[&n][j], self.terms[&(n + 1)][i], e) {
                        return Some((n, i, j));
                    }
                }
            }
        }
        None
    }

    /// Gaussian elimination of the unit `α = d^n[i][j]`.
    fn eliminate(&mut self, n: i64, i: usize, j: usize) {
        let d = self.diffs.remove(&n).unwrap();
        let alpha_inv = d[i][j].inv().expect("unit");
        let targets = &self.terms[&(n + 1)];
        let mut reduced = Vec::new();
        for (r, row) in d.iter().enumerate() {
            if r == i {
                continue;
            }
            let gamma = &row[j];
            let new_row = row
                .iter()
                .enumerate()
                .filter(|(c, _)| *c != j)
                .map(|(c, delta)| {
                    let e = if gamma.is_zero() || d[i][c].is_zero() {
                        delta.clone()
                    } else {
                        delta.sub(&gamma.mul(&alpha_inv).mul(&d[i][c]))
                    };
                    normalize_entry(&targets[r], e)
                })
                .collect();
            reduced.push(new_row);
        }
        self.diffs.insert(n, reduced);
        if let Some(prev) = self.diffs.get_mut(&(n - 1)) {
            prev.remove(j);
        }
        if let Some(next) = self.diffs.get_mut(&(n + 1)) {
            for row in next.iter_mut() {
                row.remove(i);
            }
        }
        self.terms.get_mut(&n).unwrap().remove(j);
        self.terms.get_mut(&(n + 1)).unwrap().remove(i);
    }

    /// Connected components of the nonzero-entry graph on `(degree, index)` nodes.
    fn components(&self) -> Vec<Vec<(i64, usize)>> {
        let nodes: Vec<(i64, usize)> = self
            .terms
            .iter()
            .flat_map(|(&n, v)| (0..v.len()).map(move |i| (n, i)))
            .collect();
        let pos: BTreeMap<(i64, usize), usize> = nodes.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (&n, d) in &self.diffs {
            for (i, row) in d.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if !e.is_zero() {
                        let (a, b) = (find(&mut parent, pos[&(n, j)]), find(&mut parent, pos[&(n + 1, i)]));
                        parent[a] = b;
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<(i64, usize)>> = BTreeMap::new();
        for (k, v) in nodes.iter().enumerate() {
            let root = find(&mut parent, k);
            groups.entry(root).or_default().push(*v);
        }
        groups.into_values().collect()
    }
}

/// Units of `Hom(a, b)` that are homogeneous of internal degree zero.
fn is_homogeneous_iso(a: Atom, b: Atom, e: &RationalScalar) -> bool {
    if a.kind != b.kind || e.is_zero() {
        return false;
    }
    let Some((_, p)) = e.as_monomial() else { return false };
    match a.kind {
        AtomKind::Laurent | AtomKind::LaurentSeries | AtomKind::Tail => p == a.shift - b.shift,
        _ => p == 0 && a.shift == b.shift,
    }
}

/// Exponent `p` when `e = c·t^p` is homogeneous of degree zero from `a` to `b`.
fn homogeneous_power(a: Atom, b: Atom, e: &RationalScalar) -> Option<i64> {
    e.as_monomial()
        .map(|(_, p)| p)
        .filter(|p| *p == a.shift - b.shift)
}

/// Cohomology modules by degree; zero groups are omitted.
pub fn cohomology(x: &Complex, calculus: &Calculus) -> Result<BTreeMap<i64, AdmissibleModule>> {
    let mut w = Work {
        terms: x.terms.iter().map(|(n, m)| (*n, m.atoms().to_vec())).collect(),
        diffs: x
            .diffs
            .iter()
            .map(|(n, d)| (*n, d.entries().to_vec()))
            .collect(),
    };
    while let Some((n, i, j)) = w.find_iso() {
        w.eliminate(n, i, j);
    }
    let mut out: BTreeMap<i64, Vec<Atom>> = BTreeMap::new();
    for comp in w.components() {
        for (deg, atom) in identify(&w, &comp, calculus)? {
            out.entry(deg).or_default().push(atom);
        }
    }
    Ok(out
        .into_iter()
        .map(|(n, v)| (n, AdmissibleModule::new(v)))
        .filter(|(_, m)| !m.is_zero())
        .collect())
}

fn identify(w: &Work, comp: &[(i64, usize)], calculus: &Calculus) -> Result<Vec<(i64, Atom)>> {
    let atom = |(n, i): (i64, usize)| w.terms[&n][i];
    let describe = || {
        let parts: Vec<String> = comp.iter().map(|&v| format!("{}@{}", atom(v), v.0)).collect();
        Error::CohomologyNotInCalculus(parts.join(", "))
    };
    use AtomKind::*;
    match comp {
        [v] => Ok(vec![(v.0, atom(*v))]),
        [s, t] if t.0 == s.0 + 1 => {
            let (a, b) = (atom(*s), atom(*t));
            let e = w.entry(s.0, t.1, s.1).ok_or_else(describe)?;
            let p = homogeneous_power(a, b, e).ok_or_else(describe)?;
            let n = s.0;
            let torsion = |len: i64, k: i64| (len > 0).then(|| Atom::torsion(len as u32, k));
            let out = match (a.kind, b.kind) {
                (Free, Free) | (PowerSeries, PowerSeries) if p > 0 => {
                    vec![(n + 1, Atom::torsion(p as u32, b.shift))]
                }
                (Free, PowerSeries) if p == 0 => vec![(n + 1, Atom::tail(a.shift))],
                (Torsion(m), Torsion(m2)) => {
                    let j = (m2 as i64 - p).max(0);
                    let mut v: Vec<(i64, Atom)> =
                        torsion(m as i64 - j, a.shift + j).map(|x| (n, x)).into_iter().collect();
                    v.extend(torsion(p.min(m2 as i64), b.shift).map(|x| (n + 1, x)));
                    v
                }
                (Free, Torsion(m)) | (PowerSeries, Torsion(m)) => {
                    let ker = Atom {
                        kind: a.kind,
                        shift: b.shift + m as i64,
                    };
                    let mut v = vec![(n, ker)];
                    v.extend(torsion(p, b.shift).map(|x| (n + 1, x)));
                    v
                }
                _ => return Err(describe()),
            };
            Ok(out)
        }
        [s, t1, t2] if t1.0 == s.0 + 1 && t2.0 == s.0 + 1 => {
            let (a, b1, b2) = (atom(*s), atom(*t1), atom(*t2));
            let (ps, l) = match (b1.kind, b2.kind) {
                (PowerSeries, Laurent) => ((*t1, b1), (*t2, b2)),
                (Laurent, PowerSeries) => ((*t2, b2), (*t1, b1)),
                _ => return Err(describe()),
            };
            let e_ps = w.entry(s.0, ps.0 .1, s.1).ok_or_else(describe)?;
            let e_l = w.entry(s.0, l.0 .1, s.1).ok_or_else(describe)?;
            let pushout = a.kind == Free
                && homogeneous_power(a, ps.1, e_ps) == Some(0)
                && homogeneous_power(a, l.1, e_l).is_some();
            if !pushout {
                return Err(describe());
            }
            if calculus.extension.is_none() {
                return Err(Error::CohomologyNotInCalculus(format!(
                    "{}; identifying the pushout with LS needs an extension certificate",
                    comp.iter().map(|&v| format!("{}@{}", atom(v), v.0)).collect::<Vec<_>>().join(", ")
                )));
            }
            Ok(vec![(s.0 + 1, Atom::laurent_series(a.shift))])
        }
        _ => Err(describe()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::AtomMorphism;
    use crate::complexes::{cone, ChainMap};

    const Q: Field = Field::Rational;

    fn text(h: &BTreeMap<i64, AdmissibleModule>) -> Vec<(i64, String)> {
        h.iter().map(|(n, m)| (*n, m.to_string())).collect()
    }

    fn cert() -> Calculus {
        let w = DegreeWindow::new(0, 4).unwrap();
        Calculus::with_extension(Q, ExtensionCertificate::new(3, w, 1, 3))
    }

    fn single(a: Atom, b: Atom, e: RationalScalar) -> Complex {
        Complex::two_term(AtomMorphism::single(Q, a, b, e), -1).unwrap()
    }

    #[test]
    fn torsion_from_multiplication() {
        for m in 1..4 {
            let x = single(Atom::free(m), Atom::free(0), RationalScalar::t_pow(Q, m));
            let h = cohomology(&x, &Calculus::basic(Q)).unwrap();
            assert_eq!(text(&h), vec![(0, format!("T({m},0)"))]);
        }
    }

    #[test]
    fn isomorphisms_cancel() {
        let x = single(Atom::laurent(0), Atom::laurent(0), RationalScalar::t_pow(Q, 0));
        assert!(cohomology(&x, &Calculus::basic(Q)).unwrap().is_empty());
        let x = single(Atom::laurent(2), Atom::laurent(0), RationalScalar::t_pow(Q, 2));
        assert!(cohomology(&x, &Calculus::basic(Q)).unwrap().is_empty());
    }

    #[test]
    fn torsion_to_torsion() {
        // t : T(2,1) -> T(2,0): kernel t·T(2,1) = T(1,2), cokernel T(1,0)
        let x = single(Atom::torsion(2, 1), Atom::torsion(2, 0), RationalScalar::t_pow(Q, 1));
        let h = cohomology(&x, &Calculus::basic(Q)).unwrap();
        assert_eq!(text(&h), vec![(-1, "T(1,2)".into()), (0, "T(1,0)".into())]);
        // injective: t : T(2,1) -> T(3,0) has cokernel T(1,0)
        let x = single(Atom::torsion(2, 1), Atom::torsion(3, 0), RationalScalar::t_pow(Q, 1));
        let h = cohomology(&x, &Calculus::basic(Q)).unwrap();
        assert_eq!(text(&h), vec![(0, "T(1,0)".into())]);
    }

    fn tail_model() -> Complex {
        let d = AtomMorphism::single(Q, Atom::free(0), Atom::power_series(0), RationalScalar::from_i64(Q, -1));
        Complex::two_term(d, 0).unwrap()
    }

    fn delta(scale: i64) -> ChainMap {
        let l = Complex::concentrated(Q, AdmissibleModule::atom(Atom::laurent(0)), 0);
        let f = AtomMorphism::single(Q, Atom::free(0), Atom::laurent(0), RationalScalar::from_i64(Q, scale));
        ChainMap::new(tail_model(), l, [(0, f)]).unwrap()
    }

    #[test]
    fn tail_model_has_tail_cohomology() {
        let h = cohomology(&tail_model(), &Calculus::basic(Q)).unwrap();
        assert_eq!(text(&h), vec![(1, "Q(0)".into())]);
    }

    #[test]
    fn extension_cone() {
        let c = cone(&delta(1)).unwrap();
        assert_eq!(text(&cohomology(&c, &cert()).unwrap()), vec![(0, "LS".into())]);
        assert!(matches!(
            cohomology(&c, &Calculus::basic(Q)),
            Err(Error::CohomologyNotInCalculus(_))
        ));
        let split = cone(&ChainMap::zero(delta(1).source().clone(), delta(1).target().clone())).unwrap();
        assert_eq!(text(&cohomology(&split, &cert()).unwrap()), vec![(0, "L + Q(0)".into())]);
    }

    #[test]
    fn unidentified_errors() {
        let x = single(Atom::free(0), Atom::laurent(0), RationalScalar::one(Q));
        match cohomology(&x, &cert()) {
            Err(Error::CohomologyNotInCalculus(s)) => assert!(s.contains("F(0)@-1")),
            other => panic!("{other:?}"),
        }
    }
}
