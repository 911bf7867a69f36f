use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use rabcone::appendix_b::{build_resolution, verify_exact};
use rabcone::atoms::{AdmissibleModule, Atom, AtomKind, AtomMorphism};
use rabcone::complexes::Calculus;
use rabcone::exact_linalg::{DegreeWindow, Field, GradedSpace};
use rabcone::functors::{localize, verify_adjunction};
use rabcone::oracle::{brute_ext1_torsion, brute_hom, compare};
use rabcone::poly::parse_rational;
use rabcone::rabinowitz::{
    certified_calculus, compose_classes, extension_witness, rab_complex, remark_cohomology, remark_form, RabClass,
};
use rabcone::rhom::rhom_atoms;
use rabcone::selftest::{adjunction_grid, default_fields, selftest};
use rabcone::Error;

use crate::report::{ReportDocument, Table};

/// Failures before a verdict exists. Usage errors exit with 2, engine errors with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Engine(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidField(_)
            | Error::InvalidWindow { .. }
            | Error::WindowTooSmall { .. }
            | Error::UnsupportedRHom { .. } => CliError::Usage(e.to_string()),
            other => CliError::Engine(other),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Engine(e) => write!(f, "error: {e}"),
        }
    }
}

pub type CliResult = std::result::Result<ReportDocument, CliError>;

pub struct Ctx {
    pub field: Field,
    pub argv: Vec<String>,
    pub seed: u64,
}

impl Ctx {
    fn doc(&self) -> ReportDocument {
        let mut d = ReportDocument::new(self.argv.clone(), &self.field.to_string());
        d.config("seed", self.seed);
        d
    }
}

pub fn window(bounds: &[i64]) -> std::result::Result<DegreeWindow, CliError> {
    match bounds {
        [lo, hi] => Ok(DegreeWindow::new(*lo, *hi)?),
        _ => Err(CliError::Usage("--window takes LO HI".into())),
    }
}

fn parse_module(s: &str) -> std::result::Result<AdmissibleModule, CliError> {
    Ok(s.parse::<AdmissibleModule>()?)
}

fn parse_atom(s: &str) -> std::result::Result<Atom, CliError> {
    Ok(s.parse::<Atom>()?)
}

fn window_config(d: &mut ReportDocument, w: DegreeWindow, margin: i64) {
    d.config("window", json!([w.lo(), w.hi()]));
    d.config("margin", margin);
}

/// Per-degree comparison of a symbolic module with a shadow.
fn shadow_table(sym: &AdmissibleModule, shadow: &GradedSpace, interior: DegreeWindow) -> (Table, bool) {
    let mut t = Table::new(&["degree", "shadow", "symbolic"]);
    let mut ok = true;
    for j in interior.degrees() {
        ok &= sym.dim_at(j) == shadow.dim(j);
        t.push(vec![j.into(), shadow.dim(j).into(), sym.dim_at(j).into()]);
    }
    (t, ok)
}

pub fn rhom(ctx: &Ctx, a: &str, b: &str, w: DegreeWindow, margin: i64) -> CliResult {
    let (a, b) = (parse_atom(a)?, parse_atom(b)?);
    let field = ctx.field;
    let r = rhom_atoms(field, a, b)?;
    let mut d = ctx.doc();
    window_config(&mut d, w, margin);
    d.symbolic.insert("H0".into(), r.h0.to_string());
    d.symbolic.insert("H1".into(), r.h1.to_string());
    for (i, rep) in r.h1_representatives.iter().enumerate() {
        d.symbolic.insert(format!("H1 summand {i}"), rep.clone());
    }
    let interior = w.interior(margin)?;
    let (ma, mb) = (AdmissibleModule::atom(a), AdmissibleModule::atom(b));
    if matches!(a.kind, AtomKind::Free | AtomKind::Laurent | AtomKind::Torsion(_)) {
        let brute = brute_hom(field, &ma, &mb, w, margin)?;
        let (t, _) = shadow_table(&r.h0, &brute, interior);
        d.tables.insert("H0".into(), t);
        d.verdict("H0 matches oracle", compare(&r.h0, &brute, w, margin)?.passed());
    }
    if let AtomKind::Torsion(m) = a.kind {
        let brute = brute_ext1_torsion(field, m, a.shift, &mb, w, margin)?;
        let (t, _) = shadow_table(&r.h1, &brute, interior);
        d.tables.insert("H1".into(), t);
        d.verdict("H1 matches oracle", compare(&r.h1, &brute, w, margin)?.passed());
    }
    if r.h1.contains_tail() || r.h0.contains_tail() {
        d.config("note", "Q summands are shadow-invisible and certified symbolically");
    }
    Ok(d.seal())
}

fn calculus(field: Field) -> Calculus {
    certified_calculus(field).unwrap_or_else(|_| Calculus::basic(field))
}

fn cohomology_into(d: &mut ReportDocument, sym: &std::result::Result<BTreeMap<i64, AdmissibleModule>, Error>, shadows: &BTreeMap<i64, GradedSpace>, interior: DegreeWindow) {
    let mut all = true;
    match sym {
        Ok(h) => {
            let mut degrees: Vec<i64> = shadows.keys().copied().chain(h.keys().copied()).collect();
            degrees.sort();
            degrees.dedup();
            for n in degrees {
                let m = h.get(&n).cloned().unwrap_or_default();
                let g = shadows.get(&n).cloned().unwrap_or_else(|| GradedSpace::zero(interior));
                if m.is_zero() && g.is_zero_on(&interior) {
                    continue;
                }
                let (t, ok) = shadow_table(&m, &g, interior);
                all &= ok;
                d.tables.insert(format!("H{n}"), t);
                d.symbolic.insert(format!("H{n}"), m.to_string());
            }
            if d.symbolic.is_empty() {
                d.symbolic.insert("H".into(), "0".into());
            }
        }
        Err(e) => {
            all = false;
            d.symbolic.insert("error".into(), e.to_string());
        }
    }
    d.verdict("symbolic cohomology matches shadow", all);
}

pub fn rab(ctx: &Ctx, c: &str, dd: &str, w: DegreeWindow, margin: i64) -> CliResult {
    let (c, dm) = (parse_module(c)?, parse_module(dd)?);
    let interior = w.interior(margin)?;
    let r = rab_complex(ctx.field, &c, &dm, &calculus(ctx.field))?;
    let mut d = ctx.doc();
    window_config(&mut d, w, margin);
    let shadows = r.shadow(w)?;
    cohomology_into(&mut d, &r.cohomology(), &shadows, interior);
    Ok(d.seal())
}

pub fn remark(ctx: &Ctx, c: &str, dd: &str, w: DegreeWindow, margin: i64) -> CliResult {
    let (c, dm) = (parse_module(c)?, parse_module(dd)?);
    let interior = w.interior(margin)?;
    let calc = calculus(ctx.field);
    let form = remark_form(ctx.field, &c, &dm)?;
    let mut d = ctx.doc();
    window_config(&mut d, w, margin);
    let shadows = rabcone::complexes::shadow_cohomology(&form.complex, w)?;
    cohomology_into(&mut d, &remark_cohomology(ctx.field, &c, &dm, &calc), &shadows, interior);
    let cone_h0 = rab_complex(ctx.field, &c, &dm, &calc)?.shadow_h0(w)?;
    let remark_h0 = form.shadow_h0(w)?;
    let agree = interior.degrees().all(|j| cone_h0.dim(j) == remark_h0.dim(j));
    d.verdict("H0 agrees with the cone form", agree);
    Ok(d.seal())
}

pub fn verify_appendix_b(ctx: &Ctx, n: usize, w: DegreeWindow, margin: i64) -> CliResult {
    let res = build_resolution(ctx.field, n, w.hi().max(1) as usize)?;
    let rep = verify_exact(&res, w, margin)?;
    let mut d = ctx.doc();
    window_config(&mut d, w, margin);
    d.config("truncation", n);
    d.config("beyond truncation", json!(rep.beyond_truncation));
    let mut t = Table::new(&[
        "degree",
        "dim S*",
        "dim S*<0",
        "dim R*",
        "dim K[[t]]",
        "dual injective",
        "middle exact",
        "sigma surjective",
        "tail cokernel zero",
    ]);
    for c in &rep.checks {
        let mut row: Vec<Value> = vec![c.degree.into()];
        row.extend(c.dims.iter().map(|&x| Value::from(x)));
        row.extend([c.dual_injective, c.middle_exact, c.sigma_surjective, c.tail_cokernel_zero].map(Value::from));
        t.push(row);
    }
    d.tables.insert("exactness".into(), t);
    d.verdict("checked degrees", !rep.checks.is_empty());
    d.verdict("exact", rep.passed());
    Ok(d.seal())
}

pub fn verify_extension(ctx: &Ctx, n: usize, w: DegreeWindow, margin: i64) -> CliResult {
    let r = extension_witness(ctx.field, n, w, margin)?;
    let mut d = ctx.doc();
    window_config(&mut d, w, margin);
    d.config("truncation", n);
    d.config("obstructed at", json!(r.obstructed_at));
    d.config("comparison breaks at", json!(r.comparison_breaks_at));
    d.symbolic.insert("pushout".into(), r.pushout.clone());
    d.symbolic.insert("split control".into(), r.split.clone());
    d.verdict("connecting map obstructed", r.obstructed_at.is_some());
    d.verdict("zero map splits", r.control_splits);
    d.verdict("comparison faithful below truncation", r.comparison_breaks_at == Some(n as i64));
    d.verdict("extension rule fires", r.pushout == "LS");
    d.verdict("split rule fires", r.split == "L + Q(0)");
    Ok(d.seal())
}

pub fn verify_adjunction_grid(ctx: &Ctx, grid: i64, w: DegreeWindow, margin: i64) -> CliResult {
    if grid < 1 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    let mut d = ctx.doc();
    window_config(&mut d, w, margin);
    d.config("grid", grid);
    let mut t = Table::new(&["source", "target", "first mismatch", "dims"]);
    let mut all = true;
    for (c, s) in adjunction_grid(grid, ctx.seed) {
        let r = verify_adjunction(ctx.field, &c, &s, w, margin)?;
        all &= r.passed();
        let dims: Vec<String> = r.table.iter().map(|x| x.2.to_string()).collect();
        t.push(vec![c.to_string().into(), s.to_string().into(), json!(r.first_mismatch), dims.join(",").into()]);
    }
    d.tables.insert("adjunction".into(), t);
    d.verdict("Hom(localize c, s) = Hom(c, s)", all);
    Ok(d.seal())
}

#[derive(Deserialize)]
struct ClassFile {
    classes: Vec<ClassSpec>,
}

#[derive(Deserialize)]
struct ClassSpec {
    source: String,
    target: String,
    f: Vec<Vec<String>>,
    g: Vec<Vec<String>>,
}

fn class_from_spec(field: Field, s: &ClassSpec) -> std::result::Result<RabClass, CliError> {
    let (c, d) = (parse_module(&s.source)?, parse_module(&s.target)?);
    let parse = |m: &Vec<Vec<String>>| -> std::result::Result<Vec<Vec<_>>, CliError> {
        m.iter()
            .map(|row| row.iter().map(|x| Ok(parse_rational(field, x)?)).collect())
            .collect()
    };
    // an inadmissible class is malformed input, not a failed verification
    let invalid = |e: Error| CliError::Usage(format!("class {} -> {}: {e}", s.source, s.target));
    let g = AtomMorphism::new(field, localize(&c), localize(&d), parse(&s.g)?).map_err(invalid)?;
    RabClass::new(c, d, parse(&s.f)?, g).map_err(invalid)
}

fn matrix_table(m: &[Vec<rabcone::poly::RationalScalar>]) -> Table {
    let cols: Vec<String> = (0..m.first().map_or(0, |r| r.len())).map(|j| format!("col {j}")).collect();
    let refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = Table::new(&refs);
    for row in m {
        t.push(row.iter().map(|x| Value::from(x.to_string())).collect());
    }
    t
}

/// Composes the classes in order of application: the first listed is applied first.
pub fn compose(ctx: &Ctx, path: &Path) -> CliResult {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let file: ClassFile = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("class file: {e}")))?;
    let classes = file
        .classes
        .iter()
        .map(|s| class_from_spec(ctx.field, s))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let Some((first, rest)) = classes.split_first() else {
        return Err(CliError::Usage("class file lists no classes".into()));
    };
    let mut d = ctx.doc();
    d.config("classes", classes.len());
    let mut acc = first.clone();
    for x in rest {
        match compose_classes(x, &acc) {
            Ok(y) => acc = y,
            Err(e @ Error::CompositionLeavesCalculus(_)) => {
                d.symbolic.insert("error".into(), e.to_string());
                d.verdict("composite in calculus", false);
                return Ok(d.seal());
            }
            Err(e) => return Err(e.into()),
        }
    }
    d.symbolic.insert("composite".into(), acc.to_string());
    d.symbolic.insert("source".into(), acc.source.to_string());
    d.symbolic.insert("target".into(), acc.target.to_string());
    d.tables.insert("f".into(), matrix_table(&acc.f));
    d.tables.insert("g".into(), matrix_table(acc.g.entries()));
    d.verdict("composite in calculus", true);
    Ok(d.seal())
}

pub fn run_selftest(ctx: &Ctx, field: Option<Field>) -> std::result::Result<(ReportDocument, Vec<String>), CliError> {
    let fields = field.map_or_else(default_fields, |f| vec![f]);
    let report = selftest(&fields, ctx.seed);
    let mut d = ctx.doc();
    d.config("fields", json!(fields.iter().map(|f| f.to_string()).collect::<Vec<_>>()));
    let mut t = Table::new(&["criterion", "field", "passed", "detail"]);
    for run in &report.runs {
        for c in &run.results {
            t.push(vec![c.id.into(), run.field.clone().into(), c.passed.into(), c.detail.clone().into()]);
        }
    }
    let r = &report.robustness;
    t.push(vec![r.id.into(), "all".into(), r.passed.into(), r.detail.clone().into()]);
    d.tables.insert("criteria".into(), t);
    for (id, title) in rabcone::selftest::CRITERIA {
        let ok = if id == 10 {
            r.passed
        } else {
            report.runs.iter().all(|run| run.results.iter().any(|c| c.id == id && c.passed))
        };
        d.verdict(&format!("{id:02} {title}"), ok);
    }
    Ok((d.seal(), report.summary_lines()))
}
