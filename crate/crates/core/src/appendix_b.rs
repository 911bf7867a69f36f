//! The free resolution `⊕ K[t]·r_n → ⊕ K[t]·s_n → K[t,t⁻¹]`, `r_n ↦ t·s_n − s_(n+1)`,
//! truncated to `-N ≤ n ≤ 0`, its `K[t]`-dual, and the evaluation map
//! `Σ : r_n* ↦ t^(-n-1)` into `K[[t]]`.
//!
//! A truncation resolves `t^(-N)·K[t]` rather than `K[t,t⁻¹]`; its dual is
//! faithful to the infinite one only in internal degrees `0..N`, where the
//! missing generator `r_(-N-1)*` cannot contribute.

use serde::Serialize;

use crate::atoms::{realize_component, AdmissibleModule, Atom, AtomMorphism};
use crate::complexes::Complex;
use crate::error::{Error, Result};
use crate::exact_linalg::{DegreeWindow, Field, GradedMap, GradedSpace, Matrix};
use crate::poly::RationalScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedResolution {
    field: Field,
    n: usize,
    degree_cap: usize,
    /// `R → S`; columns `r_(-N) .. r_(-1)`, rows `s_(-N) .. s_0`.
    map: AtomMorphism,
    /// Dual entry `s_n* ↦ -r_(n-1)*` removed, for negative controls.
    dropped: Option<i64>,
}

pub fn build_resolution(field: Field, n: usize, degree_cap: usize) -> Result<TruncatedResolution> {
    if n == 0 || degree_cap == 0 {
        return Err(Error::InvalidWindow {
            lo: n as i64,
            hi: degree_cap as i64,
        });
    }
    let ni = n as i64;
    let s = AdmissibleModule::new((-ni..=0).map(Atom::free).collect());
    let r = AdmissibleModule::new((-ni..=-1).map(|k| Atom::free(k + 1)).collect());
    let mut map = AtomMorphism::zero(field, r, s);
    for k in -ni..=-1 {
        let col = (k + ni) as usize;
        map.set_entry(col, col, RationalScalar::t_pow(field, 1));
        map.set_entry(col + 1, col, RationalScalar::from_i64(field, -1));
    }
    Ok(TruncatedResolution {
        field,
        n,
        degree_cap,
        map,
        dropped: None,
    })
}

impl TruncatedResolution {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    /// `[-N, degree_cap]`.
    pub fn default_window(&self) -> DegreeWindow {
        DegreeWindow::new(-(self.n as i64), self.degree_cap as i64).expect("lo < hi")
    }

    pub fn map(&self) -> &AtomMorphism {
        &self.map
    }

    /// Position of `s_n` in `S` and of `r_n` in `R`.
    pub fn s_index(&self, k: i64) -> usize {
        (k + self.n as i64) as usize
    }

    pub fn r_index(&self, k: i64) -> usize {
        (k + self.n as i64) as usize
    }

    /// Position of `s_n*` in `S*` and of `r_n*` in `R*`.
    pub fn s_dual_index(&self, k: i64) -> usize {
        (-k) as usize
    }

    pub fn r_dual_index(&self, k: i64) -> usize {
        (-k - 1) as usize
    }

    /// Same resolution with the dual entry `s_k* ↦ -r_(k-1)*` removed.
    pub fn corrupted(&self, k: i64) -> TruncatedResolution {
        TruncatedResolution {
            dropped: Some(k),
            ..self.clone()
        }
    }

    /// Shadow of the cokernel of `R → S`.
    pub fn cokernel_shadow(&self, w: DegreeWindow) -> GradedSpace {
        let f = realize_component(&self.map, w, 0);
        GradedSpace::from_fn(w, |j| self.map.target().dim_at(j) - f.block(j).rank())
    }

    pub fn kernel_shadow(&self, w: DegreeWindow) -> GradedSpace {
        let f = realize_component(&self.map, w, 0);
        GradedSpace::from_fn(w, |j| self.map.source().dim_at(j) - f.block(j).rank())
    }

    /// `S* → R*` as the transpose of `R → S`, with `S*` in cohomological degree 0.
    pub fn dual_map(&self) -> AtomMorphism {
        let ni = self.n as i64;
        let s_dual = AdmissibleModule::new((-ni..=0).map(|k| Atom::free(-k)).collect());
        let r_dual = AdmissibleModule::new((-ni..=-1).map(|k| Atom::free(-k - 1)).collect());
        let mut d = AtomMorphism::zero(self.field, s_dual, r_dual);
        for rk in -ni..=-1 {
            for sk in -ni..=0 {
                let e = self.map.entry(self.s_index(sk), self.r_index(rk));
                if e.is_zero() || (self.dropped == Some(sk) && rk == sk - 1) {
                    continue;
                }
                d.set_entry(self.r_dual_index(rk), self.s_dual_index(sk), e.clone());
            }
        }
        d
    }

    pub fn dualize(&self) -> Complex {
        Complex::two_term(self.dual_map(), 0).expect("two-term complexes are complexes")
    }

    /// `Σ : R* → K[[t]]`, `r_n* ↦ t^(-n-1)`.
    pub fn sigma_map(&self) -> AtomMorphism {
        let ni = self.n as i64;
        let r_dual = self.dual_map().target().clone();
        let mut s = AtomMorphism::zero(self.field, r_dual, AdmissibleModule::atom(Atom::power_series(0)));
        for k in -ni..=-1 {
            s.set_entry(0, self.r_dual_index(k), RationalScalar::t_pow(self.field, -k - 1));
        }
        s
    }

    /// The dual map restricted to `s_n*` with `n ≤ -1`.
    fn truncated_dual_map(&self) -> AtomMorphism {
        let full = self.dual_map();
        let source = AdmissibleModule::new(full.source().atoms()[1..].to_vec());
        let entries = full.entries().iter().map(|row| row[1..].to_vec()).collect();
        AtomMorphism::new(self.field, source, full.target().clone(), entries).expect("shape")
    }
}

pub fn dualize(r: &TruncatedResolution) -> Complex {
    r.dualize()
}

pub fn sigma_map(r: &TruncatedResolution) -> AtomMorphism {
    r.sigma_map()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: i64,
    /// Dimensions of `S*`, `S*_(n ≤ -1)`, `R*` and the `K[[t]]` shadow.
    pub dims: [usize; 4],
    pub dual_injective: bool,
    pub middle_exact: bool,
    pub sigma_surjective: bool,
    /// The cokernel of the full dual map, whose shadow is that of `K[[t]]/K[t]`.
    pub tail_cokernel_zero: bool,
}

impl DegreeCheck {
    pub fn passed(&self) -> bool {
        self.dual_injective && self.middle_exact && self.sigma_surjective && self.tail_cokernel_zero
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub truncation: usize,
    pub window: (i64, i64),
    pub margin: i64,
    pub checks: Vec<DegreeCheck>,
    /// Interior degrees `≥ N`, where the truncated dual stops modelling the infinite one.
    pub beyond_truncation: Vec<i64>,
}

impl ExactnessReport {
    pub fn first_failure(&self) -> Option<i64> {
        self.checks.iter().find(|c| !c.passed()).map(|c| c.degree)
    }

    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }
}

/// Checks exactness of `S*_(≤-1) → R* → K[[t]] → 0` and of `S* → R* → K[[t]]/K[t] → 0`
/// per internal degree on the interior of `w`.
pub fn verify_exact(r: &TruncatedResolution, w: DegreeWindow, margin: i64) -> Result<ExactnessReport> {
    let interior = w.interior(margin)?;
    let full = realize_component(&r.dual_map(), w, 0);
    let trunc = realize_component(&r.truncated_dual_map(), w, 0);
    let sigma = realize_component(&r.sigma_map(), w, 0);
    let (mut checks, mut beyond) = (Vec::new(), Vec::new());
    for j in interior.degrees() {
        if j >= r.n as i64 {
            beyond.push(j);
            continue;
        }
        checks.push(check_degree(&full, &trunc, &sigma, j));
    }
    Ok(ExactnessReport {
        truncation: r.n,
        window: (w.lo(), w.hi()),
        margin,
        checks,
        beyond_truncation: beyond,
    })
}

fn check_degree(full: &GradedMap, trunc: &GradedMap, sigma: &GradedMap, j: i64) -> DegreeCheck {
    let (f, t, s): (Matrix, Matrix, Matrix) = (full.block(j), trunc.block(j), sigma.block(j));
    let dims = [f.cols(), t.cols(), f.rows(), s.rows()];
    let composite_zero = s.mul(&t).expect("shapes").is_zero();
    let ker_sigma = s.cols() - s.rank();
    DegreeCheck {
        degree: j,
        dims,
        dual_injective: f.rank() == f.cols(),
        middle_exact: composite_zero && t.rank() == ker_sigma,
        sigma_surjective: s.rank() == s.rows(),
        tail_cokernel_zero: f.rank() == f.rows(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_rational;

    const Q: Field = Field::Rational;

    fn w(lo: i64, hi: i64) -> DegreeWindow {
        DegreeWindow::new(lo, hi).unwrap()
    }

    fn r(s: &str) -> RationalScalar {
        parse_rational(Q, s).unwrap()
    }

    #[test]
    fn smallest_resolution() {
        let res = build_resolution(Q, 1, 1).unwrap();
        let m = res.map();
        assert_eq!(m.source().to_string(), "F(0)");
        assert_eq!(m.target().to_string(), "F(-1) + F(0)");
        assert_eq!(m.entry(res.s_index(-1), res.r_index(-1)), &r("t"));
        assert_eq!(m.entry(res.s_index(0), res.r_index(-1)), &r("-1"));
        assert!(m.validate().is_ok());
    }

    #[test]
    fn resolution_cokernel_and_kernel() {
        let res = build_resolution(Q, 4, 4).unwrap();
        let win = w(-4, 4);
        let expect: Vec<usize> = win.degrees().map(|j| (j >= -4) as usize).collect();
        assert_eq!(res.cokernel_shadow(win).dims(), &expect[..]);
        for n in 1..=10 {
            let res = build_resolution(Q, n, 12).unwrap();
            assert!(res.kernel_shadow(w(-(n as i64), 12)).dims().iter().all(|&d| d == 0));
        }
    }

    #[test]
    fn dual_formulas() {
        let res = build_resolution(Q, 3, 3).unwrap();
        let d = res.dual_map();
        let col = |k: i64| -> Vec<(usize, RationalScalar)> {
            (0..d.target().len())
                .map(|i| (i, d.entry(i, res.s_dual_index(k)).clone()))
                .filter(|(_, e)| !e.is_zero())
                .collect()
        };
        assert_eq!(col(0), vec![(res.r_dual_index(-1), r("-1"))]);
        assert_eq!(col(-1), vec![(res.r_dual_index(-1), r("t")), (res.r_dual_index(-2), r("-1"))]);
        assert_eq!(col(-3), vec![(res.r_dual_index(-3), r("t"))]);
        assert!(d.validate().is_ok());
    }

    #[test]
    fn dual_matrices_square_and_injective() {
        for n in 1..=10usize {
            let res = build_resolution(Q, n, 12).unwrap();
            let f = realize_component(&res.dual_map(), w(0, 12), 0);
            for j in 0..=12i64 {
                let b = f.block(j);
                if j < n as i64 {
                    assert_eq!((b.rows(), b.cols()), (j as usize + 1, j as usize + 1));
                    assert_eq!(b.rank(), b.cols(), "N={n} d={j}");
                } else {
                    // past the truncation s_(-N)* has no r_(-N-1)* partner: kernel of rank one
                    assert_eq!(b.cols() - b.rank(), 1, "N={n} d={j}");
                }
            }
        }
    }

    #[test]
    fn sigma_values() {
        let res = build_resolution(Q, 4, 4).unwrap();
        let s = res.sigma_map();
        assert_eq!(s.entry(0, res.r_dual_index(-1)), &r("1"));
        assert_eq!(s.entry(0, res.r_dual_index(-3)), &r("t^2"));
        let comp = AtomMorphism::compose(&s, &res.dual_map()).unwrap();
        for k in -3..=-1 {
            assert!(comp.entry(0, res.s_dual_index(k)).is_zero(), "s_{k}*");
        }
        assert_eq!(comp.entry(0, res.s_dual_index(0)), &r("-1"));
        // only the boundary generator escapes the composite
        assert_eq!(comp.entry(0, res.s_dual_index(-4)), &r("t^4"));
    }

    #[test]
    fn exactness() {
        let res = build_resolution(Q, 6, 8).unwrap();
        let rep = verify_exact(&res, w(0, 8), 2).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.checks.len(), 4);
        assert_eq!(rep.beyond_truncation, vec![6]);
        let rep = verify_exact(&build_resolution(Q, 1, 2).unwrap(), w(0, 2), 0).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.checks[0].dims, [1, 0, 1, 1]);
    }

    #[test]
    fn truncation_stability() {
        for n in 2..8usize {
            let win = w(0, 10);
            let a = verify_exact(&build_resolution(Q, n, 10).unwrap(), win, 1).unwrap();
            let b = verify_exact(&build_resolution(Q, n + 1, 10).unwrap(), win, 1).unwrap();
            assert!(a.passed() && b.passed());
            for c in &a.checks {
                let same = b.checks.iter().find(|x| x.degree == c.degree).unwrap();
                assert_eq!(same.passed(), c.passed());
            }
        }
    }

    #[test]
    fn corruption_is_detected_at_its_degree() {
        let res = build_resolution(Q, 6, 8).unwrap();
        for k in [-2i64, -3, -4] {
            let rep = verify_exact(&res.corrupted(k), w(0, 8), 1).unwrap();
            assert_eq!(rep.first_failure(), Some(-k), "k={k}");
        }
    }

    #[test]
    fn prime_fields_agree() {
        for p in [10007u64, 65537] {
            let res = build_resolution(Field::Prime(p), 6, 8).unwrap();
            assert!(verify_exact(&res, w(0, 8), 2).unwrap().passed());
        }
    }
}
