//! The acceptance suite as a library: each criterion is an exact check that
//! returns a verdict plus field-independent evidence, so runs over different
//! fields can be compared line by line.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::appendix_b::{build_resolution, verify_exact, ExactnessReport};
use crate::atoms::{AdmissibleModule, Atom};
use crate::complexes::{shadow_cohomology, Calculus, Complex};
use crate::error::Result;
use crate::exact_linalg::{DegreeWindow, Field, GradedSpace};
use crate::functors::{localize, torsion_part, verify_adjunction};
use crate::oracle::{brute_hom, compare, stabilization_check};
use crate::poly::RationalScalar;
use crate::rabinowitz::{
    compose_classes, extension_witness, rab_complex, remark_form, sample_classes, unit_class, RabClass,
};
use crate::rhom::rhom_atoms;

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "dual resolution exactness"),
    (2, "Ext of L into F(0)"),
    (3, "endomorphisms of F(0) are K((t))"),
    (4, "nontrivial extension"),
    (5, "cone and right-adjoint forms agree"),
    (6, "torsion objects vanish"),
    (7, "composition laws"),
    (8, "adjunction and triangle"),
    (9, "stabilization"),
    (10, "field robustness"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    /// Field-independent summary of what was computed.
    pub evidence: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldRun {
    pub field: String,
    pub results: Vec<CriterionResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub runs: Vec<FieldRun>,
    pub robustness: CriterionResult,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.robustness.passed && self.runs.iter().all(|r| r.results.iter().all(|c| c.passed))
    }

    /// One `PASS`/`FAIL` line per criterion, failing if any field fails.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (id, title) in CRITERIA.iter().take(9) {
            let per: Vec<&CriterionResult> = self
                .runs
                .iter()
                .filter_map(|r| r.results.iter().find(|c| c.id == *id))
                .collect();
            let ok = !per.is_empty() && per.iter().all(|c| c.passed);
            let detail = per
                .iter()
                .zip(&self.runs)
                .find(|(c, _)| !c.passed)
                .map(|(c, r)| format!("{} over {}", c.detail, r.field))
                .unwrap_or_else(|| per.first().map_or(String::new(), |c| c.detail.clone()));
            out.push(line(*id, title, ok, &detail));
        }
        let r = &self.robustness;
        out.push(line(r.id, &r.title, r.passed, &r.detail));
        out
    }
}

fn line(id: u8, title: &str, ok: bool, detail: &str) -> String {
    format!("criterion {id:>2} [{}] {title}: {detail}", if ok { "PASS" } else { "FAIL" })
}

fn title(id: u8) -> String {
    CRITERIA[(id - 1) as usize].1.to_string()
}

fn w(lo: i64, hi: i64) -> DegreeWindow {
    DegreeWindow::new(lo, hi).expect("lo <= hi")
}

fn module(a: Atom) -> AdmissibleModule {
    AdmissibleModule::atom(a)
}

fn dims(g: &GradedSpace, on: DegreeWindow) -> String {
    on.degrees().map(|j| g.dim(j).to_string()).collect::<Vec<_>>().join(",")
}

fn finish(id: u8, run: impl FnOnce() -> Result<(bool, String, Vec<String>)>) -> CriterionResult {
    let (passed, detail, evidence) = match run() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}"), Vec::new()),
    };
    CriterionResult {
        id,
        title: title(id),
        passed,
        detail,
        evidence,
    }
}

fn within(start: Instant, budget: Duration) -> bool {
    start.elapsed() <= budget
}

/// The calculus in force for criterion 3: certified at the criterion 4 configuration.
fn gated_calculus(field: Field) -> Result<Option<Calculus>> {
    let r = extension_witness(field, 6, w(0, 8), 2)?;
    Ok(r.passed().then(|| r.certificate()).flatten().map(|c| Calculus::with_extension(field, c)))
}

fn exactness_evidence(r: &ExactnessReport) -> Vec<String> {
    r.checks
        .iter()
        .map(|c| format!("degree {}: dims {:?} pass {}", c.degree, c.dims, c.passed()))
        .collect()
}

pub fn criterion_1(field: Field) -> CriterionResult {
    finish(1, || {
        let start = Instant::now();
        let res = build_resolution(field, 6, 8)?;
        let rep = verify_exact(&res, w(0, 8), 2)?;
        let control = verify_exact(&res.corrupted(-2), w(0, 8), 2)?;
        let fast = within(start, Duration::from_secs(5));
        let ok = rep.passed() && !rep.checks.is_empty() && !control.passed() && fast;
        let detail = match rep.first_failure() {
            Some(d) => format!("exactness fails at degree {d}"),
            None if !fast => "over the 5 s budget".into(),
            None => format!(
                "exact at degrees {:?}; corrupted control fails at {:?}",
                rep.checks.iter().map(|c| c.degree).collect::<Vec<_>>(),
                control.first_failure()
            ),
        };
        Ok((ok, detail, exactness_evidence(&rep)))
    })
}

pub fn criterion_2(field: Field) -> CriterionResult {
    finish(2, || {
        let sym = rhom_atoms(field, Atom::laurent(0), Atom::free(0))?;
        let win = w(-8, 8);
        let brute = brute_hom(field, &module(Atom::laurent(0)), &module(Atom::free(0)), win, 2)?;
        let v = compare(&sym.h0, &brute, win, 2)?;
        let ok = sym.h0.is_zero() && sym.h1 == module(Atom::tail(0)) && v.passed();
        let detail = format!("H0 = {}, H1 = {}, shadow H0 mismatch {:?}", sym.h0, sym.h1, v.first_mismatch);
        Ok((ok, detail.clone(), vec![detail, dims(&brute, win.interior(2)?)]))
    })
}

pub fn criterion_3(field: Field) -> CriterionResult {
    finish(3, || {
        let Some(calc) = gated_calculus(field)? else {
            return Ok((false, "extension certificate unavailable".into(), Vec::new()));
        };
        let win = w(-8, 8);
        let interior = win.interior(2)?;
        let r = rab_complex(field, &module(Atom::free(0)), &module(Atom::free(0)), &calc)?;
        let h0 = r.h0()?;
        let shadow = r.shadow(win)?;
        let ones = interior.degrees().all(|j| shadow.get(&0).is_some_and(|g| g.dim(j) == 1));
        let rest = shadow.iter().filter(|(n, _)| **n != 0).all(|(_, g)| interior.degrees().all(|j| g.dim(j) == 0));
        let ok = h0 == module(Atom::laurent_series(0)) && ones && rest;
        let h0dims = shadow.get(&0).map_or(String::new(), |g| dims(g, interior));
        Ok((ok, format!("H0 = {h0}, shadow dims [{h0dims}]"), vec![h0.to_string(), h0dims]))
    })
}

pub fn criterion_4(field: Field) -> CriterionResult {
    finish(4, || {
        let r = extension_witness(field, 6, w(0, 8), 2)?;
        let detail = format!(
            "obstructed at {:?}, control splits {}, pushout {}, split {}",
            r.obstructed_at, r.control_splits, r.pushout, r.split
        );
        Ok((r.passed(), detail.clone(), vec![detail]))
    })
}

fn free_pair_rows(field: Field, calc: &Calculus, win: DegreeWindow) -> Result<Vec<(i64, i64, String, String)>> {
    let interior = win.interior(2)?;
    let mut rows = Vec::new();
    for a in -2..=2 {
        for b in -2..=2 {
            let (c, d) = (module(Atom::free(a)), module(Atom::free(b)));
            let lhs = rab_complex(field, &c, &d, calc)?.shadow_h0(win)?;
            let rhs = remark_form(field, &c, &d)?.shadow_h0(win)?;
            rows.push((a, b, dims(&lhs, interior), dims(&rhs, interior)));
        }
    }
    Ok(rows)
}

pub fn criterion_5(field: Field) -> CriterionResult {
    finish(5, || {
        let start = Instant::now();
        let rows = free_pair_rows(field, &Calculus::basic(field), w(-8, 8))?;
        let fast = within(start, Duration::from_secs(30));
        let bad = rows.iter().find(|r| r.2 != r.3);
        let detail = match bad {
            Some((a, b, _, _)) => format!("disagree at F({a}), F({b})"),
            None if !fast => "over the 30 s budget".into(),
            None => format!("{} pairs agree", rows.len()),
        };
        let evidence = rows.iter().map(|(a, b, l, _)| format!("F({a}) F({b}): {l}")).collect();
        Ok((bad.is_none() && fast, detail, evidence))
    })
}

fn torsion_atoms() -> Vec<Atom> {
    (1..=3).flat_map(|m| (-2..=2).map(move |k| Atom::torsion(m, k))).collect()
}

fn torsion_pairs() -> Vec<(Atom, Atom)> {
    let partners: Vec<Atom> = (-2..=2).map(Atom::free).chain(torsion_atoms()).collect();
    let mut pairs = Vec::new();
    for t in torsion_atoms() {
        for p in &partners {
            pairs.push((t, *p));
            if *p != t {
                pairs.push((*p, t));
            }
        }
    }
    pairs.sort();
    pairs.dedup();
    pairs
}

fn torsion_vanishing(field: Field, calc: &Calculus, win: DegreeWindow) -> Result<Option<(Atom, Atom)>> {
    let interior = win.interior(2)?;
    for (c, d) in torsion_pairs() {
        let r = rab_complex(field, &module(c), &module(d), calc)?;
        let sym_zero = r.cohomology()?.is_empty();
        let shadow_zero = r.shadow(win)?.values().all(|g| g.is_zero_on(&interior));
        if !(sym_zero && shadow_zero) {
            return Ok(Some((c, d)));
        }
    }
    Ok(None)
}

pub fn criterion_6(field: Field) -> CriterionResult {
    finish(6, || {
        let calc = Calculus::basic(field);
        let bad = torsion_vanishing(field, &calc, w(-6, 6))?;
        let n = torsion_pairs().len();
        let detail = match bad {
            Some((c, d)) => format!("nonzero cohomology for ({c}, {d})"),
            None => format!("{n} pairs vanish"),
        };
        Ok((bad.is_none(), detail.clone(), vec![detail]))
    })
}

pub fn criterion_7(field: Field, seed: u64) -> CriterionResult {
    finish(7, || {
        let s = sample_classes(field, 3);
        let f0 = module(Atom::free(0));
        let unit = unit_class(field, &f0);
        let mut failures = Vec::new();
        for x in &s {
            if compose_classes(&unit, x)? != *x || compose_classes(x, &unit)? != *x {
                failures.push(format!("unit law fails at {x}"));
            }
        }
        let mut triples = 0usize;
        'outer: for x2 in &s {
            for x1 in &s {
                let x21 = compose_classes(x2, x1)?;
                for x0 in &s {
                    triples += 1;
                    let lhs = compose_classes(&x21, x0)?;
                    let rhs = compose_classes(x2, &compose_classes(x1, x0)?)?;
                    if lhs != rhs {
                        failures.push(format!("associativity fails at ({x2}, {x1}, {x0})"));
                        break 'outer;
                    }
                }
            }
        }
        let l = Atom::laurent(0);
        let g = |e| -> Result<RabClass> {
            RabClass::new(
                f0.clone(),
                f0.clone(),
                vec![vec![RationalScalar::zero(field)]],
                crate::atoms::AtomMorphism::single(field, l, l, RationalScalar::t_pow(field, e)),
            )
        };
        let monomial = compose_classes(&g(3)?, &g(2)?)?;
        if monomial != g(5)? {
            failures.push(format!("monomial case gives {monomial}"));
        }
        // bilinearity with seeded scalars
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            let pick = |rng: &mut ChaCha8Rng| s[rng.gen_range(0..s.len())].clone();
            let (x1, a, b) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let lam = RationalScalar::from_i64(field, rng.gen_range(-9..=9));
            let mu = RationalScalar::from_i64(field, rng.gen_range(-9..=9));
            let lhs = compose_classes(&x1, &a.scale(&lam).add(&b.scale(&mu))?)?;
            let rhs = compose_classes(&x1, &a)?.scale(&lam).add(&compose_classes(&x1, &b)?.scale(&mu))?;
            if lhs != rhs {
                failures.push(format!("bilinearity fails at ({x1}, {a}, {b})"));
            }
        }
        let detail = match failures.first() {
            Some(f) => f.clone(),
            None => format!("{} classes, {triples} triples, monomial case {monomial}", s.len()),
        };
        Ok((failures.is_empty(), detail.clone(), vec![detail]))
    })
}

/// Sources `F(k)` and `T(m, k)` with `|k|, m ≤ bound` against local targets,
/// plus six seeded sums of free and torsion atoms.
pub fn adjunction_grid(bound: i64, seed: u64) -> Vec<(AdmissibleModule, AdmissibleModule)> {
    let bound = bound.max(1);
    let mut sources: Vec<AdmissibleModule> = (-bound..=bound).map(|k| module(Atom::free(k))).collect();
    sources.extend((1..=bound as u32).flat_map(|m| (-bound..=bound).map(move |k| module(Atom::torsion(m, k)))));
    let targets = [
        module(Atom::laurent(0)),
        module(Atom::laurent_series(0)),
        AdmissibleModule::new(vec![Atom::laurent(1), Atom::laurent_series(-1)]),
    ];
    let mut grid: Vec<_> = sources
        .iter()
        .flat_map(|c| targets.iter().map(move |s| (c.clone(), s.clone())))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..6 {
        let mut atoms = Vec::new();
        for _ in 0..rng.gen_range(2..=3) {
            let k = rng.gen_range(-bound..=bound);
            atoms.push(match rng.gen_range(0..2) {
                0 => Atom::free(k),
                _ => Atom::torsion(rng.gen_range(1..=bound as u32), k),
            });
        }
        let s = targets[rng.gen_range(0..targets.len())].clone();
        grid.push((AdmissibleModule::new(atoms), s));
    }
    grid
}

fn triangle_atoms() -> Vec<Atom> {
    let mut atoms = Vec::new();
    for k in -3..=3 {
        atoms.extend([Atom::free(k), Atom::laurent(k), Atom::laurent_series(k), Atom::power_series(k)]);
        atoms.extend((1..=3).map(|m| Atom::torsion(m, k)));
    }
    atoms
}

fn euler(x: &Complex, win: DegreeWindow, on: DegreeWindow) -> Result<Vec<i64>> {
    let h = shadow_cohomology(x, win)?;
    Ok(on
        .degrees()
        .map(|j| {
            h.iter()
                .map(|(n, g)| if n % 2 == 0 { g.dim(j) as i64 } else { -(g.dim(j) as i64) })
                .sum()
        })
        .collect())
}

fn triangle_failure(field: Field, win: DegreeWindow) -> Result<Option<Atom>> {
    let interior = win.interior(2)?;
    for a in triangle_atoms() {
        let m = module(a);
        let fibre = euler(&torsion_part(field, &m)?, win, interior)?;
        let local = euler(&Complex::concentrated(field, localize(&m), 0), win, interior)?;
        let whole = euler(&Complex::concentrated(field, m.clone(), 0), win, interior)?;
        if fibre.iter().zip(&local).map(|(x, y)| x + y).ne(whole.iter().copied()) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

pub fn criterion_8(field: Field, seed: u64) -> CriterionResult {
    finish(8, || {
        let win = w(-8, 8);
        let grid = adjunction_grid(3, seed);
        let mut evidence = Vec::new();
        let mut bad = None;
        for (c, s) in &grid {
            let r = verify_adjunction(field, c, s, win, 2)?;
            evidence.push(format!("{c} | {s}: {:?}", r.table.iter().map(|t| t.2).collect::<Vec<_>>()));
            if bad.is_none() && !r.passed() {
                bad = Some(format!("adjunction fails for ({c}, {s}) at degree {:?}", r.first_mismatch));
            }
        }
        let tri = triangle_failure(field, w(-6, 6))?;
        if let (None, Some(a)) = (&bad, tri) {
            bad = Some(format!("Euler characteristics not additive for {a}"));
        }
        let detail = bad.clone().unwrap_or_else(|| {
            format!("{} adjunction pairs, {} triangle atoms", grid.len(), triangle_atoms().len())
        });
        Ok((bad.is_none(), detail, evidence))
    })
}

pub fn criterion_9(field: Field, seed: u64) -> CriterionResult {
    finish(9, || {
        let mut unstable = Vec::new();
        let mut evidence = Vec::new();

        // dual resolution: N + 1, window + 4
        let small = verify_exact(&build_resolution(field, 6, 8)?, w(0, 8), 2)?;
        let big = verify_exact(&build_resolution(field, 7, 12)?, w(-4, 12), 2)?;
        for c in &small.checks {
            match big.checks.iter().find(|b| b.degree == c.degree) {
                Some(b) if b == c => {}
                _ => unstable.push(format!("dual resolution at degree {}", c.degree)),
            }
        }
        evidence.push(format!("dual resolution: {} degrees", small.checks.len()));

        // Ext of L into F(0)
        let (l, f0) = (module(Atom::laurent(0)), module(Atom::free(0)));
        let r = stabilization_check(|win| brute_hom(field, &l, &f0, win, 2), w(-8, 8), 4, 2)?;
        if let Some(d) = r.first_unstable {
            unstable.push(format!("Hom(L, F(0)) at degree {d}"));
        }

        // the K((t)) shadow
        let calc = Calculus::basic(field);
        let h0 = |win| -> Result<GradedSpace> { rab_complex(field, &f0, &f0, &calc)?.shadow_h0(win) };
        let r = stabilization_check(h0, w(-8, 8), 4, 2)?;
        if let Some(d) = r.first_unstable {
            unstable.push(format!("H0 of F(0), F(0) at degree {d}"));
        }

        // extension certificate: the obstruction follows the truncation
        let e = extension_witness(field, 7, w(-4, 12), 2)?;
        if !(e.passed() && e.obstructed_at == Some(7)) {
            unstable.push(format!("extension at N = 7: {:?}", e.obstructed_at));
        }
        evidence.push(format!("extension at N = 7 obstructed at {:?}", e.obstructed_at));

        // cone and right-adjoint forms
        let small = free_pair_rows(field, &calc, w(-8, 8))?;
        let big = free_pair_rows(field, &calc, w(-12, 12))?;
        for (s, b) in small.iter().zip(&big) {
            // the grown interior has 4 extra degrees on each side
            let trim = |x: &str| x.split(',').skip(4).take(13).collect::<Vec<_>>().join(",");
            if trim(&b.2) != s.2 || trim(&b.3) != s.3 {
                unstable.push(format!("forms at F({}), F({})", s.0, s.1));
            }
        }

        // torsion vanishing on the grown window
        if let Some((c, d)) = torsion_vanishing(field, &calc, w(-10, 10))? {
            unstable.push(format!("torsion pair ({c}, {d})"));
        }

        // adjunction tables
        for (c, s) in adjunction_grid(3, seed) {
            let a = verify_adjunction(field, &c, &s, w(-8, 8), 2)?;
            let b = verify_adjunction(field, &c, &s, w(-12, 12), 2)?;
            if !a.table.iter().all(|row| b.table.contains(row)) {
                unstable.push(format!("adjunction ({c}, {s})"));
            }
        }

        let detail = match unstable.first() {
            Some(u) => format!("unstable: {u}"),
            None => "all windowed results unchanged at window + 4, N + 1".into(),
        };
        evidence.extend(unstable.iter().cloned());
        Ok((unstable.is_empty(), detail, evidence))
    })
}

/// Criteria 1 to 9 over one field.
pub fn run_field(field: Field, seed: u64) -> FieldRun {
    FieldRun {
        field: field.to_string(),
        results: vec![
            criterion_1(field),
            criterion_2(field),
            criterion_3(field),
            criterion_4(field),
            criterion_5(field),
            criterion_6(field),
            criterion_7(field, seed),
            criterion_8(field, seed),
            criterion_9(field, seed),
        ],
    }
}

/// Criterion 10 from per-field runs: every criterion passes everywhere with
/// identical evidence.
pub fn robustness(runs: &[FieldRun]) -> CriterionResult {
    finish(10, || {
        let Some(first) = runs.first() else {
            return Ok((false, "no fields".into(), Vec::new()));
        };
        let mut problems = Vec::new();
        for run in runs {
            for (c, base) in run.results.iter().zip(&first.results) {
                if !c.passed {
                    problems.push(format!("criterion {} fails over {}", c.id, run.field));
                } else if c.evidence != base.evidence {
                    problems.push(format!("criterion {} differs between {} and {}", c.id, first.field, run.field));
                }
            }
        }
        let fields: Vec<&str> = runs.iter().map(|r| r.field.as_str()).collect();
        let detail = problems
            .first()
            .cloned()
            .unwrap_or_else(|| format!("identical over {}", fields.join(", ")));
        Ok((problems.is_empty(), detail, problems))
    })
}

pub fn default_fields() -> Vec<Field> {
    vec![Field::Rational, Field::Prime(10007), Field::Prime(65537)]
}

pub fn selftest(fields: &[Field], seed: u64) -> SelftestReport {
    let runs: Vec<FieldRun> = fields.iter().map(|f| run_field(*f, seed)).collect();
    let robustness = robustness(&runs);
    SelftestReport { seed, runs, robustness }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_deterministic() {
        assert_eq!(adjunction_grid(3, 7), adjunction_grid(3, 7));
        assert_ne!(adjunction_grid(3, 7), adjunction_grid(3, 8));
        let pairs = torsion_pairs();
        assert!(pairs.iter().all(|(c, d)| !c.is_local() && !d.is_local()));
    }

    #[test]
    fn summary_has_ten_lines() {
        let runs = vec![FieldRun {
            field: "q".into(),
            results: vec![criterion_2(Field::Rational), criterion_4(Field::Rational)],
        }];
        let report = SelftestReport {
            seed: 0,
            robustness: robustness(&runs),
            runs,
        };
        let lines = report.summary_lines();
        assert_eq!(lines.len(), 10);
        assert!(lines[1].contains("[PASS]") && lines[0].contains("[FAIL]"));
    }

    #[test]
    fn gated_calculus_is_certified() {
        assert!(gated_calculus(Field::Rational).unwrap().is_some());
    }
}
