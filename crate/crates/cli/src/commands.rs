use std::fmt::Display;

use lojacobi::decay::{self, Eigen, IndicialRoot, Root};
use lojacobi::exactla::{self, Inertia};
use lojacobi::floatoracle::{self, FloatMatrix, FloatSpectrum};
use lojacobi::geometry::{self, Check};
use lojacobi::golden;
use lojacobi::harmonic::{self, BasisFamily, Provenance};
use lojacobi::jacobiop::{self, OperatorMatrix};
use lojacobi::suite::{self, Status, Suite, SuiteConfig, FLOAT_TOLERANCE};
use serde_json::{json, Map, Value};

use crate::cache;
use crate::report::{compact, Report};
use crate::{Cli, Command, GeometryCheck, OperatorArgs, Toggle};

#[derive(Debug)]
pub enum CliError {
    /// Invalid arguments (exit 2).
    Usage(String),
    /// A computation failed outright (exit 1).
    Failure(String),
}

fn usage(e: impl Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn failure(e: impl Display) -> CliError {
    CliError::Failure(e.to_string())
}

/// Largest degree accepted by `basis`.
const BASIS_K_MAX: u32 = 24;

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Basis { k, m, source } => basis(*k, *m, (*source).into()),
        Command::Matrix(a) => matrix(cli, a),
        Command::Charpoly(a) => charpoly(cli, a),
        Command::Spectrum(a) => spectrum(cli, a),
        Command::Inertia(a) => inertia(cli, a),
        Command::VerifyAll { max_k, positivity_k } => verify_all(cli, *max_k, *positivity_k),
        Command::Geometry { check, points, configurations } => geometry_cmd(*check, *points, *configurations),
        Command::Decay { lambda, ode_demo } => decay_cmd(lambda.as_deref(), ode_demo.as_deref()),
    }
}

fn basis(k: u32, m: Option<i64>, source: Provenance) -> Result<Report, CliError> {
    if k > BASIS_K_MAX {
        return Err(usage(format!("k = {k} exceeds {BASIS_K_MAX}")));
    }
    let mut report = Report::new("basis", json!({ "k": k, "m": m, "source": source.name() }));
    let family = harmonic::basis(k, source).map_err(usage)?;
    let mut all_ok = true;
    let mut blocks = Vec::new();
    let mut count = 0;
    let wanted: Vec<i64> = match m {
        Some(m) => vec![m],
        None => family.blocks.iter().map(|b| b.m).collect(),
    };
    for w in wanted {
        let vectors: Vec<Value> = family
            .blocks
            .iter()
            .filter(|b| b.m == w)
            .flat_map(|b| &b.vectors)
            .map(|f| {
                let r = harmonic::verify_eigen(f, k, w);
                all_ok &= r.passed();
                json!({
                    "polynomial": compact(f),
                    "round_eigenvalue": -r.gamma_round,
                    "berger_eigenvalue": -r.gamma_berger,
                    "failures": r.failures,
                })
            })
            .collect();
        count += vectors.len();
        blocks.push(json!({ "m": w, "dimension": vectors.len(), "vectors": vectors }));
    }
    report.results = json!({ "k": k, "source": source.name(), "dimension": count, "blocks": blocks });
    report.status = if all_ok { Status::Pass } else { Status::Fail };
    Ok(report)
}

struct Loaded {
    basis: BasisFamily,
    matrix: OperatorMatrix,
}

fn operator_inputs(a: &OperatorArgs) -> Value {
    json!({
        "k": a.k,
        "source": Provenance::from(a.source).name(),
        "oracle": a.oracle == Toggle::On,
        "golden": a.golden,
    })
}

fn load(cli: &Cli, a: &OperatorArgs, report: &mut Report) -> Result<Loaded, CliError> {
    if a.k > cli.limit {
        return Err(usage(format!("k = {} exceeds the resource limit {} (raise with --limit)", a.k, cli.limit)));
    }
    if a.golden && a.k > golden::MAX_K {
        return Err(usage(format!("no reference data for k = {}", a.k)));
    }
    let basis = harmonic::basis(a.k, a.source.into()).map_err(usage)?;
    let dir = cache::cache_dir();
    let (matrix, state) = cache::load_or_build(&dir, a.k, &basis).map_err(failure)?;
    report.run.insert(
        "cache".into(),
        json!({ "path": cache::cache_path(&dir, a.k, basis.provenance).display().to_string(), "state": state.name() }),
    );
    Ok(Loaded { basis, matrix })
}

/// Float eigenvalues; non-orthonormal bases go through the generalized problem.
fn float_spectrum(l: &Loaded) -> Result<FloatSpectrum, CliError> {
    if l.matrix.entries.is_hermitian() {
        return floatoracle::float_spectrum(&l.matrix.entries).map_err(failure);
    }
    let g = jacobiop::triple_gram(&l.basis);
    let h = jacobiop::hermitian_form(&l.matrix, &g);
    let fh = FloatMatrix::from_exact(&h).map_err(failure)?;
    let fg = FloatMatrix::from_exact(&g).map_err(failure)?;
    floatoracle::generalized_spectrum(&fh, &fg).map_err(failure)
}

fn status_of(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn matrix(cli: &Cli, a: &OperatorArgs) -> Result<Report, CliError> {
    let mut report = Report::new("matrix", operator_inputs(a));
    let l = load(cli, a, &mut report)?;
    let m = &l.matrix.entries;
    let rows: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(|e| e.pretty()).collect()).collect();
    let mut results = Map::new();
    results.insert("k".into(), json!(a.k));
    results.insert("source".into(), json!(l.basis.provenance.name()));
    results.insert("dimension".into(), json!(l.matrix.dimension()));
    results.insert("hermitian".into(), json!(m.is_hermitian()));
    results.insert("entries".into(), json!(rows));
    let mut ok = true;
    if a.oracle == Toggle::On {
        let trace = m.trace();
        let fs = float_spectrum(&l)?;
        let sum: f64 = fs.eigenvalues.iter().sum();
        let exact = trace.to_f64();
        let agree = (sum - exact).abs() <= FLOAT_TOLERANCE * (1.0 + exact.abs());
        ok &= agree;
        results.insert("oracle".into(), json!({ "trace": trace.pretty(), "float_eigenvalue_sum": sum, "agree": agree }));
    }
    if a.golden {
        let g = match l.basis.provenance {
            Provenance::Paper => {
                let matches = golden::printed_matrix(a.k).as_ref() == Some(m);
                json!({ "printed_matrix_match": matches })
            }
            Provenance::Generated => {
                let p = l.matrix.charpoly().map_err(failure)?;
                let factors = golden::charpoly_factors(a.k).unwrap_or_default();
                json!({ "charpoly_match": exactla::verify_factorization(&p, &factors) })
            }
        };
        ok &= g.as_object().into_iter().flat_map(|o| o.values()).all(|v| v == &json!(true));
        results.insert("golden".into(), g);
    }
    report.results = Value::Object(results);
    report.status = status_of(ok);
    Ok(report)
}

fn charpoly_text(p: &exactla::CharPoly) -> String {
    p.to_rational().map(|q| q.to_pretty()).unwrap_or_else(|| p.to_text())
}

fn oracle_json(p: &exactla::CharPoly, inertia: Option<&Inertia>, fs: &FloatSpectrum) -> Result<(Value, bool), CliError> {
    let cmp = floatoracle::compare_spectra(p, inertia, fs, FLOAT_TOLERANCE).map_err(failure)?;
    let ok = cmp.passed();
    Ok((
        json!({
            "tolerance": FLOAT_TOLERANCE,
            "passed": ok,
            "offending": cmp.offending,
            "distinct_roots": cmp.roots.len(),
            "float_min": fs.min(),
            "residual_bound": fs.residual_bound,
        }),
        ok,
    ))
}

fn charpoly(cli: &Cli, a: &OperatorArgs) -> Result<Report, CliError> {
    let mut report = Report::new("charpoly", operator_inputs(a));
    let l = load(cli, a, &mut report)?;
    let p = l.matrix.charpoly().map_err(failure)?;
    let mut results = Map::new();
    results.insert("k".into(), json!(a.k));
    results.insert("source".into(), json!(l.basis.provenance.name()));
    results.insert("degree".into(), json!(p.degree()));
    results.insert("charpoly".into(), json!(charpoly_text(&p)));
    let mut ok = true;
    if a.golden {
        let factors = golden::charpoly_factors(a.k).unwrap_or_default();
        let matches = exactla::verify_factorization(&p, &factors);
        ok &= matches;
        results.insert("golden".into(), json!({ "reference": golden::charpoly_text(a.k), "match": matches }));
    }
    if a.oracle == Toggle::On {
        let (v, pass) = oracle_json(&p, None, &float_spectrum(&l)?)?;
        ok &= pass;
        results.insert("oracle".into(), v);
    }
    report.results = Value::Object(results);
    report.status = status_of(ok);
    Ok(report)
}

fn eigen_json(e: &Eigen) -> Value {
    json!(e.to_string())
}

fn spectrum(cli: &Cli, a: &OperatorArgs) -> Result<Report, CliError> {
    let mut report = Report::new("spectrum", operator_inputs(a));
    let l = load(cli, a, &mut report)?;
    let p = l.matrix.charpoly().map_err(failure)?;
    let q = p.to_rational().ok_or_else(|| failure("characteristic polynomial is not rational"))?;
    let entries = decay::spectrum_of(&q);
    let listed: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "value": eigen_json(&e.value),
                "approx": e.value.approx(),
                "multiplicity": e.multiplicity,
                "jacobi": eigen_json(&e.value.affine(&lojacobi::numfield::rat(3, 8), &lojacobi::numfield::int(0))),
            })
        })
        .collect();
    let expanded: Vec<String> = entries.iter().flat_map(|e| std::iter::repeat_n(e.value.to_string(), e.multiplicity)).collect();
    let approx: Vec<f64> = entries.iter().flat_map(|e| std::iter::repeat_n(e.value.approx(), e.multiplicity)).collect();
    let mut results = Map::new();
    results.insert("k".into(), json!(a.k));
    results.insert("source".into(), json!(l.basis.provenance.name()));
    results.insert("eigenvalues".into(), json!(listed));
    results.insert("with_multiplicity".into(), json!(expanded));
    let real_count: usize = entries.iter().map(|e| e.multiplicity).sum();
    let mut ok = real_count == p.degree();
    if a.golden {
        let printed = golden::eigenvalues(a.k).unwrap_or_default();
        let (_, off) = floatoracle::match_values(&printed, &approx, FLOAT_TOLERANCE);
        ok &= off.is_empty();
        results.insert("golden".into(), json!({ "match": off.is_empty(), "offending": off }));
    }
    if a.oracle == Toggle::On {
        let (v, pass) = oracle_json(&p, None, &float_spectrum(&l)?)?;
        ok &= pass;
        results.insert("oracle".into(), v);
    }
    report.results = Value::Object(results);
    report.status = status_of(ok);
    Ok(report)
}

fn inertia_json(i: &Inertia) -> Value {
    json!({ "plus": i.plus, "zero": i.zero, "minus": i.minus })
}

fn inertia(cli: &Cli, a: &OperatorArgs) -> Result<Report, CliError> {
    let mut report = Report::new("inertia", operator_inputs(a));
    let l = load(cli, a, &mut report)?;
    let i = jacobiop::operator_inertia(&l.matrix, &l.basis).map_err(failure)?;
    let mut results = Map::new();
    results.insert("k".into(), json!(a.k));
    results.insert("source".into(), json!(l.basis.provenance.name()));
    results.insert("inertia".into(), inertia_json(&i));
    results.insert("kernel_dimension".into(), json!(i.zero));
    results.insert("positive_definite".into(), json!(i.is_positive_definite()));
    let mut ok = true;
    if a.golden {
        let want = golden::inertia(a.k).expect("k checked against MAX_K");
        ok &= want == i;
        results.insert("golden".into(), json!({ "reference": inertia_json(&want), "match": want == i }));
    }
    if a.oracle == Toggle::On {
        let fs = float_spectrum(&l)?;
        let f = fs.sign_counts(FLOAT_TOLERANCE);
        ok &= f == i;
        results.insert("oracle".into(), json!({ "float": inertia_json(&f), "agree": f == i }));
    }
    report.results = Value::Object(results);
    report.status = status_of(ok);
    Ok(report)
}

fn verify_all(cli: &Cli, max_k: u32, positivity_k: u32) -> Result<Report, CliError> {
    if max_k > golden::MAX_K {
        return Err(usage(format!("--max-k is at most {}", golden::MAX_K)));
    }
    if positivity_k > cli.limit {
        return Err(usage(format!("--positivity-k {positivity_k} exceeds the resource limit {}", cli.limit)));
    }
    let mut report = Report::new("verify-all", json!({ "max_k": max_k, "positivity_k": positivity_k }));
    let mut suite = Suite::new(SuiteConfig { max_k, positivity_k, ..SuiteConfig::default() });
    let results = suite.run_all();
    let criteria: Vec<Value> = results
        .iter()
        .map(|r| {
            let details: Map<String, Value> = r.details.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            json!({ "id": r.id, "title": r.title, "status": r.status.name(), "details": details, "failures": r.failures })
        })
        .collect();
    let total_kernel = results
        .iter()
        .find(|r| r.id == 5)
        .and_then(|r| r.details.iter().find(|(k, _)| k == "total kernel"))
        .and_then(|(_, v)| v.parse::<usize>().ok());
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    report.results = json!({
        "total_kernel": total_kernel,
        "summary": { "pass": count(Status::Pass), "partial": count(Status::Partial), "fail": count(Status::Fail) },
        "criteria": criteria,
    });
    let timings: Map<String, Value> = results.iter().map(|r| (r.id.to_string(), json!(r.elapsed.as_secs_f64()))).collect();
    report.run.insert("timings_s".into(), Value::Object(timings));
    report.status = suite::overall(&results);
    Ok(report)
}

fn check_json(c: &Check) -> Value {
    json!({ "checks": c.total, "passed": c.passed(), "failures": c.failures })
}

fn geometry_cmd(check: Option<GeometryCheck>, points: usize, configurations: usize) -> Result<Report, CliError> {
    let name = |c: GeometryCheck| match c {
        GeometryCheck::Connections => "connections",
        GeometryCheck::Killing => "killing",
        GeometryCheck::Groups => "groups",
        GeometryCheck::Frames => "frames",
    };
    let mut report = Report::new(
        "geometry",
        json!({ "check": check.map(name).unwrap_or("all"), "points": points, "configurations": configurations }),
    );
    let checks = match check {
        Some(c) => vec![c],
        None => vec![GeometryCheck::Connections, GeometryCheck::Killing, GeometryCheck::Groups, GeometryCheck::Frames],
    };
    let mut results = Map::new();
    let mut ok = true;
    for c in checks {
        let (v, pass) = match c {
            GeometryCheck::Connections => connections_json(),
            GeometryCheck::Killing => killing_json(),
            GeometryCheck::Groups => {
                let all = geometry::group_checks(configurations);
                let pass = all.iter().all(Check::passed);
                let m: Map<String, Value> = all.iter().map(|c| (c.name.clone(), check_json(c))).collect();
                (Value::Object(m), pass)
            }
            GeometryCheck::Frames => {
                let pts = geometry::rational_sphere_points(points, &geometry::base_radius());
                let a = geometry::frame_orthonormality(&pts);
                let b = geometry::complex_frame_consistency(&pts);
                let pass = a.passed() && b.passed();
                (json!({ "orthonormality": check_json(&a), "complex_forms": check_json(&b) }), pass)
            }
        };
        ok &= pass;
        results.insert(name(c).into(), v);
    }
    report.results = Value::Object(results);
    report.status = status_of(ok);
    Ok(report)
}

fn connections_json() -> (Value, bool) {
    let table = geometry::connection_coefficients();
    let mut entries = Map::new();
    for i in 1..=3 {
        for j in 1..=6 {
            entries.insert(format!("D_e{i} e{j}"), json!(table.get(i, j).pretty()));
        }
    }
    let diffs = table.differences(&geometry::reference_connection_table());
    let structure = table.structure_checks();
    let shape = geometry::shape_operator_checks(&table);
    let btilde: Vec<Vec<String>> = shape.btilde.iter().map(|r| r.iter().map(|c| c.pretty()).collect()).collect();
    let pass = diffs.is_empty() && structure.passed() && shape.passed();
    (
        json!({
            "basepoint": geometry::basepoint().iter().map(|c| c.pretty()).collect::<Vec<_>>(),
            "table": entries,
            "reference_differences": diffs,
            "structure": check_json(&structure),
            "btilde": btilde,
            "mean_curvature": shape.mean_curvature.iter().map(|c| c.pretty()).collect::<Vec<_>>(),
            "shape_failures": shape.failures,
            "passed": pass,
        }),
        pass,
    )
}

fn killing_json() -> (Value, bool) {
    let r = geometry::killing_map();
    let listed: Vec<Value> = r.listed_in_kernel.iter().map(|(n, ok)| json!({ "element": n, "in_kernel": ok })).collect();
    let table: Vec<Value> = r
        .table1
        .iter()
        .map(|t| {
            json!({
                "generator": t.generator,
                "frame": format!("e{}", t.frame),
                "expected": compact(&t.expected),
                "computed": compact(&t.computed),
                "status": format!("{:?}", t.status).to_lowercase(),
            })
        })
        .collect();
    let pts = geometry::rational_sphere_points(20, &geometry::base_radius());
    let generic = geometry::so7_combination(&[("W11", 2), ("W23", -3), ("W42", 5), ("J14", 1), ("K23", 7)]);
    let e4 = geometry::killing_e4_formula_check(&generic, &pts);
    let pass = r.passed() && e4.passed();
    (
        json!({
            "rank": r.rank,
            "kernel_dimension": r.kernel.len(),
            "kernel": r.kernel_names,
            "listed_elements": listed,
            "listed_span_kernel": r.listed_span_kernel,
            "kernel_in_so4_so3": r.kernel_in_so4_so3,
            "table1": table,
            "e4_formula": check_json(&e4),
            "passed": pass,
        }),
        pass,
    )
}

fn root_json(r: &Root) -> Value {
    match r {
        Root::Exact(q) => json!({ "exact": q.to_string(), "approx": r.approx() }),
        Root::Symbolic { text, approx } => json!({ "symbolic": text, "approx": approx }),
    }
}

fn indicial_json(r: &IndicialRoot) -> Value {
    json!({
        "mu": eigen_json(&r.mu),
        "multiplicity": r.multiplicity,
        "lambda": eigen_json(&r.jacobi),
        "radicand": eigen_json(&r.radicand),
        "plus": root_json(&r.plus),
        "minus": root_json(&r.minus),
        "vieta": r.vieta_holds(),
    })
}

fn parse_lambda(s: &str) -> Result<IndicialRoot, CliError> {
    let q = decay::parse_rational(s).ok_or_else(|| usage(format!("cannot parse {s:?} as a rational number")))?;
    decay::indicial_root_for_jacobi(&q).map_err(usage)
}

fn decay_cmd(lambda: Option<&str>, ode: Option<&str>) -> Result<Report, CliError> {
    let mut report = Report::new("decay", json!({ "lambda": lambda, "ode_demo": ode }));
    let mut results = Map::new();
    let mut ok = true;
    if let Some(s) = lambda {
        let r = parse_lambda(s)?;
        ok &= r.vieta_holds();
        results.insert("roots".into(), indicial_json(&r));
    }
    if let Some(s) = ode {
        let r = parse_lambda(s)?;
        let fits = decay::ode_checks(std::slice::from_ref(&r)).map_err(failure)?;
        let v: Vec<Value> = fits
            .iter()
            .map(|c| {
                ok &= c.error() <= decay::ODE_TOLERANCE;
                json!({
                    "initial": [c.fit.initial.0, c.fit.initial.1],
                    "horizon": c.fit.horizon,
                    "exponent": c.fit.exponent,
                    "target": c.target,
                    "error": c.error(),
                    "within_tolerance": c.error() <= decay::ODE_TOLERANCE,
                })
            })
            .collect();
        results.insert("ode_demo".into(), json!({ "lambda": r.jacobi.to_string(), "tolerance": decay::ODE_TOLERANCE, "fits": v }));
    }
    if lambda.is_none() && ode.is_none() {
        let (v, pass) = full_decay(&mut report)?;
        ok &= pass;
        results = v;
    }
    report.results = Value::Object(results);
    report.status = status_of(ok);
    Ok(report)
}

fn full_decay(report: &mut Report) -> Result<(Map<String, Value>, bool), CliError> {
    let dir = cache::cache_dir();
    let mut spectra = Vec::new();
    let mut states = Map::new();
    for k in 0..=golden::MAX_K {
        let basis = harmonic::basis(k, Provenance::Paper).map_err(failure)?;
        let (m, state) = cache::load_or_build(&dir, k, &basis).map_err(failure)?;
        states.insert(format!("L{k}"), json!(state.name()));
        let p = m.charpoly().map_err(failure)?.to_rational().ok_or_else(|| failure("charpoly is not rational"))?;
        spectra.push(decay::spectrum_of(&p));
    }
    report.run.insert("cache".into(), Value::Object(states));
    let merged = decay::merge_spectra(&spectra);
    let r = decay::decay_report(&merged).map_err(failure)?;
    let mut out = Map::new();
    out.insert("spectrum_source".into(), json!(format!("L_0 .. L_{}", golden::MAX_K)));
    out.insert("roots".into(), json!(r.roots.iter().map(indicial_json).collect::<Vec<_>>()));
    out.insert(
        "listed_roots".into(),
        json!(r.six.iter().flatten().map(|x| x.to_string()).collect::<Vec<_>>()),
    );
    out.insert(
        "decay_orders".into(),
        json!(r
            .table
            .iter()
            .map(|e| json!({ "root": e.label, "value": e.root.to_string(), "exponent": e.exponent.to_string(), "meaning": e.meaning }))
            .collect::<Vec<_>>()),
    );
    out.insert(
        "ode".into(),
        json!(r
            .ode
            .iter()
            .map(|c| json!({ "lambda": c.fit.lambda, "initial": [c.fit.initial.0, c.fit.initial.1], "horizon": c.fit.horizon, "exponent": c.fit.exponent, "target": c.target }))
            .collect::<Vec<_>>()),
    );
    out.insert("failures".into(), json!(r.failures));
    Ok((out, r.passed()))
}
