use crate::point::parse_point;
use crate::{
    CheckCommand, Cli, CoeffsArgs, Command, ConvergenceArgs, DualityArgs, EvalArgs, Expansion, Format, IdentityArgs,
    Kind, OperatorArgs, Output, ParityArgs, Suite, Target, Truncation,
};
use anyhow::{bail, Context, Result};
use polar_maass::expansions::{extract_many, ExpansionKind, ExtractionParams};
use polar_maass::geometry::UpperHalfPoint;
use polar_maass::series::{weight, LatticeSum, SeriesKind, SeriesSpec, TruncationParams};
use polar_maass::verify::{self, CheckReport, OperatorTheoremConfig, StudySpec, StudyTarget};
use polar_maass::{BigFloat, PrecisionGuard, Real};
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;
use std::time::Instant;

pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_NUMERIC: u8 = 2;
pub const EXIT_CHECK_FAILED: u8 = 3;

const SCHEMA: u32 = 1;

/// Library errors carry their own classification; anything else (bad
/// literals, unwritable paths) is a configuration problem.
pub fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<polar_maass::Error>() {
        Some(err) if !err.is_config() => EXIT_NUMERIC,
        _ => EXIT_CONFIG,
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    if cli.precision < 53 {
        return Err(polar_maass::Error::InvalidArgument(format!(
            "precision must be at least 53 bits, got {}",
            cli.precision
        ))
        .into());
    }
    if cli.threads > 0 {
        // fails only if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    if cli.precision <= 53 {
        run_with::<f64>(cli)
    } else {
        let _guard = PrecisionGuard::new(cli.precision);
        run_with::<BigFloat>(cli)
    }
}

fn run_with<R: Real>(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Eval(a) => eval::<R>(cli, a),
        Command::Coeffs(a) => coeffs::<R>(cli, a),
        Command::Check(c) => match c {
            CheckCommand::Identities(a) => identities(cli, a),
            CheckCommand::Operators(a) => operators::<R>(cli, a),
            CheckCommand::Parity(a) => parity::<R>(cli, a),
            CheckCommand::Duality(a) => duality::<R>(cli, a),
            CheckCommand::Convergence(a) => convergence::<R>(a),
        },
    }
}

fn truncation(cli: &Cli, t: &Truncation) -> Result<TruncationParams> {
    let p = TruncationParams {
        n_cd: t.n_cd,
        n_t: t.n_t.unwrap_or(t.n_cd),
        precision_bits: cli.precision,
        threads: cli.threads,
    };
    p.validate()?;
    Ok(p)
}

fn series_kind(kind: Kind) -> SeriesKind {
    match kind {
        Kind::Psi => SeriesKind::Psi,
        Kind::P => SeriesKind::P,
    }
}

fn pair<R: Real>(z: &polar_maass::Cx<R>) -> Value {
    json!([z.re.to_string(), z.im.to_string()])
}

fn eval<R: Real>(cli: &Cli, a: &EvalArgs) -> Result<u8> {
    let trunc = truncation(cli, &a.trunc)?;
    let base = parse_point::<R>(&a.base)?;
    let z = parse_point::<R>(&a.z)?;
    let spec = SeriesSpec::new(series_kind(a.kind), a.k, a.n, base)?;
    let start = Instant::now();
    let v = LatticeSum::new(&trunc)?.eval(&spec, &z)?;
    let out = json!({
        "schema": SCHEMA,
        "kind": spec.kind,
        "k": a.k,
        "n": a.n,
        "base": a.base,
        "z": a.z,
        "n_cd": trunc.n_cd,
        "n_t": trunc.n_t,
        "precision_bits": cli.precision,
        "value": pair(&v.value),
        "tail": v.tail_estimate.to_f64(),
    });
    println!("{out}");
    eprintln!("runtime_ms {}", start.elapsed().as_millis());
    Ok(0)
}

fn coeffs<R: Real>(cli: &Cli, a: &CoeffsArgs) -> Result<u8> {
    let trunc = truncation(cli, &a.trunc)?;
    let params = ExtractionParams { radius: a.radius, radius2: a.radius2, m_quad: a.m_quad };
    params.validate()?;
    let base = parse_point::<R>(&a.base)?;
    let center = parse_point::<R>(&a.center)?;
    let kind = series_kind(a.kind);
    let expansion = match a.expansion {
        Some(Expansion::Meromorphic) => ExpansionKind::Meromorphic,
        Some(Expansion::Harmonic) => ExpansionKind::Harmonic,
        Some(Expansion::HarmonicCusp) => ExpansionKind::HarmonicCusp,
        None if kind == SeriesKind::Psi => ExpansionKind::Meromorphic,
        None => ExpansionKind::HarmonicCusp,
    };
    SeriesSpec::new(kind, a.k, a.n, base.clone())?;
    let lattice = LatticeSum::new(&trunc)?;
    let field = |w: &UpperHalfPoint<R>| -> polar_maass::Result<Vec<polar_maass::Cx<R>>> {
        Ok(lattice.eval_many(kind, a.k, &[a.n], &base, w)?.into_iter().map(|v| v.value).collect())
    };
    let start = Instant::now();
    let exp = extract_many(&field, &center, weight(kind, a.k), expansion, a.n_min..=a.n_max, &params)?.remove(0);
    let mut out = exp.to_json();
    let obj = out.as_object_mut().expect("expansion serializes to an object");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("series".into(), json!({"kind": kind, "k": a.k, "n": a.n, "base": a.base}));
    obj.insert("truncation".into(), json!(trunc));
    let text = format!("{out}\n");
    match &a.output {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    eprintln!(
        "{} c_plus and {} c_minus coefficients, residual {:.3e}, runtime_ms {}",
        exp.c_plus.len(),
        exp.c_minus.len(),
        exp.residual.to_f64(),
        start.elapsed().as_millis()
    );
    Ok(0)
}

fn identities(cli: &Cli, a: &IdentityArgs) -> Result<u8> {
    let bits = cli.precision;
    let reports = match a.suite {
        Suite::Identity => verify::check_identity_suite(a.seed, a.count, bits),
        Suite::Special => verify::check_special_function_suite(a.seed, a.count, bits),
        Suite::Constants => verify::check_constant_suite(),
        Suite::Geometry => verify::check_geometry_suite(a.seed, a.count, bits),
        Suite::Fay => verify::check_lemma_suite(a.seed, a.count, bits),
        Suite::Recurrences => verify::check_recurrence_suite(a.seed, a.count, bits),
        Suite::Terms => verify::check_single_term_suite(a.seed, a.count, bits),
        Suite::Bol => verify::check_bol_identity(a.seed, a.count),
        Suite::Laplacian => verify::check_laplacian_factorization(a.seed, a.count),
    };
    emit(&reports, &a.out)
}

fn points<R: Real>(list: &[String]) -> Result<Vec<UpperHalfPoint<R>>> {
    list.iter().map(|s| parse_point::<R>(s)).collect()
}

fn operators<R: Real>(cli: &Cli, a: &OperatorArgs) -> Result<u8> {
    let trunc = truncation(cli, &a.trunc)?;
    let base = parse_point::<R>(&a.base)?;
    let zs = points::<R>(&a.z)?;
    SeriesSpec::new(SeriesKind::P, a.k, 0, base.clone())?;
    let mut cfg = OperatorTheoremConfig::new(a.k, a.n.clone(), trunc);
    cfg.tolerance = a.tolerance;
    emit(&verify::check_operator_theorem(&cfg, &base, &zs), &a.out)
}

fn parity<R: Real>(cli: &Cli, a: &ParityArgs) -> Result<u8> {
    let trunc = truncation(cli, &Truncation { n_cd: a.n_cd, n_t: None })?;
    let zs = points::<R>(&a.z)?;
    if a.k < 2 {
        bail!(polar_maass::Error::InvalidArgument(format!("weight parameter k must be >= 2, got {}", a.k)));
    }
    emit(&verify::check_parity_vanishing(a.k, &a.n, &zs, &trunc), &a.out)
}

fn duality<R: Real>(cli: &Cli, a: &DualityArgs) -> Result<u8> {
    let trunc = truncation(cli, &a.trunc)?;
    let quad = ExtractionParams { radius: a.radius, radius2: a.radius2, m_quad: a.m_quad };
    let z1 = parse_point::<R>(&a.z1)?;
    let z2 = parse_point::<R>(&a.z2)?;
    let cases = verify::duality_cases(a.k, &a.m, &a.n, &z1, &z2, &trunc, &quad)?;
    let (plain, normalized) = verify::duality_reports(&cases, &z1, &z2, &trunc, &quad, a.tolerance);
    emit(if a.height_normalized { &normalized } else { &plain }, &a.out)
}

fn convergence<R: Real>(a: &ConvergenceArgs) -> Result<u8> {
    let spec = StudySpec {
        target: match a.target {
            Target::Psi => StudyTarget::Psi,
            Target::P => StudyTarget::P,
            Target::Duality => StudyTarget::Duality,
            Target::Operator => StudyTarget::Operator,
        },
        k: a.k,
        n: a.n,
        m: a.m,
        base: parse_point::<R>(&a.base)?,
        z: parse_point::<R>(&a.z)?,
        quad: ExtractionParams { radius: a.radius, radius2: a.radius2, m_quad: a.m_quad },
    };
    let rows = verify::convergence_study(&spec, &a.n_list)?;
    let text = match a.out.format {
        Format::Json => rows
            .iter()
            .map(|r| with_schema(serde_json::to_value(r).expect("rows serialize")).to_string() + "\n")
            .collect::<String>(),
        Format::Csv => {
            let mut s = String::from("n_cd,value_re,value_im,rel_err,tail_estimate\n");
            for r in &rows {
                let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
                s += &format!("{},{},{},{},{}\n", r.n_cd, r.value[0], r.value[1], opt(r.rel_err), opt(r.tail_estimate));
            }
            s
        }
    };
    let summary = rows
        .iter()
        .map(|r| {
            let shown = r.rel_err.map_or_else(|| r.value[0].clone(), |e| format!("rel_err {e:.3e}"));
            format!("N_cd {:>5}  {shown}", r.n_cd)
        })
        .collect::<Vec<_>>()
        .join("\n");
    deliver(&text, &summary, a.out.output.as_deref())?;
    Ok(0)
}

fn with_schema(mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.insert("schema".into(), json!(SCHEMA));
    }
    v
}

fn summarize(reports: &[CheckReport]) -> String {
    let passed = reports.iter().filter(|r| r.passed).count();
    let mut s = format!("{passed}/{} checks passed", reports.len());
    // a zero reference is judged on the absolute error
    let err = |r: &CheckReport| if r.rel_err.is_finite() { r.rel_err } else { r.abs_err };
    let worst = reports
        .iter()
        .max_by(|a, b| (!a.passed, err(a)).partial_cmp(&(!b.passed, err(b))).unwrap_or(std::cmp::Ordering::Equal));
    if let Some(w) = worst {
        s += &format!("; worst {} error {:.3e} (tolerance {:.1e})", w.check_id, err(w), w.tolerance);
    }
    for r in reports.iter().filter(|r| !r.passed).take(10) {
        match &r.error {
            Some(e) => s += &format!("\nFAIL {} error: {e}", r.check_id),
            None => s += &format!("\nFAIL {} rel_err {:.3e}", r.check_id, r.rel_err),
        }
    }
    s
}

fn emit(reports: &[CheckReport], out: &Output) -> Result<u8> {
    let text = match out.format {
        Format::Json => reports
            .iter()
            .map(|r| with_schema(serde_json::to_value(r).expect("reports serialize")).to_string() + "\n")
            .collect::<String>(),
        Format::Csv => verify::to_csv(reports),
    };
    deliver(&text, &summarize(reports), out.output.as_deref())?;
    Ok(if verify::all_passed(reports) { 0 } else { EXIT_CHECK_FAILED })
}

/// Machine-readable output goes to the file when one is given, otherwise to
/// stdout with the summary moved to stderr.
fn deliver(text: &str, summary: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            write_file(p, text)?;
            println!("{summary}");
        }
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
