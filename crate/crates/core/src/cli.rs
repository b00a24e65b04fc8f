use clap::{Args, Parser, Subcommand, ValueEnum};
use quadpot::decompose::{basic_decomposition, pullback_boundary_data, szego_project, BiRational};
use quadpot::kernels::SpanElement;
use quadpot::ratcalc::RationalFn;
use quadpot::solvers::{dirichlet_solve, dtn_map, harmonic_eval, neumann_data_from_json_str, neumann_solve, HarmonicRep};
use quadpot::{verify, Complex64, Error, QuadDomain};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "quadpot", version, about = "Closed-form boundary value problems on quadrature domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a domain file and print its quadrature identity.
    Validate(Common),
    /// Solve the Dirichlet problem for boundary data R(z, z̄).
    SolveDirichlet(Solve),
    /// Normal derivative of the harmonic extension of R(z, z̄).
    Dtn(Solve),
    /// Solve the Neumann problem (double quadrature domains only).
    SolveNeumann(Solve),
    /// Split the Szegő projection of R into kernel generators.
    Decompose(Solve),
    /// Szegő projection of R sampled on the boundary.
    Project(Solve),
    /// Run the acceptance checks.
    Verify,
    /// Sample boundary data R(z, z̄) on the boundary.
    Sample(Solve),
}

#[derive(Args, Debug)]
pub struct Common {
    /// Domain JSON file.
    #[arg(long)]
    pub domain: PathBuf,
    /// Machine-readable report on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct Solve {
    #[command(flatten)]
    pub common: Common,
    /// Boundary data JSON file.
    #[arg(long)]
    pub data: PathBuf,
    /// Kernel anchor as `re,im` (a disc parameter).
    #[arg(long, value_parser = parse_anchor, default_value = "0,0")]
    pub anchor: Complex64,
    /// Number of samples, a power of two in 64..=8192.
    #[arg(long, value_parser = parse_samples, default_value_t = 256)]
    pub samples: usize,
    /// CSV output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Boundary residual allowed in the reported solution.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Grid::Boundary)]
    pub grid: Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Boundary,
    Interior,
}

fn parse_anchor(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or("expected `re,im`")?;
    let re: f64 = re.trim().parse().map_err(|e| format!("real part: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

fn parse_samples(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if !(64..=8192).contains(&n) || !n.is_power_of_two() {
        return Err(format!("{n} is not a power of two in 64..=8192"));
    }
    Ok(n)
}

/// Failure with a process exit code.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::Io(_) => 2,
            Error::MapNotAnalytic(_)
            | Error::CriticalPoint(_)
            | Error::NotUnivalent(_)
            | Error::InvalidDoubleWitness(_)
            | Error::ConstantMap => 3,
            Error::SingularBoundaryData(_) | Error::BoundaryPole(_) => 4,
            Error::IncompatibleData(_) => 5,
            Error::SolverResidual { .. } | Error::DecompositionFailed { .. } | Error::SplitFailed { .. } => 6,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn c_json(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn load_domain(path: &Path) -> CliResult<QuadDomain> {
    Ok(QuadDomain::from_file(path)?)
}

fn load_data(path: &Path) -> CliResult<BiRational> {
    Ok(BiRational::from_file(path)?)
}

fn write_out(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: 2,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

/// One CSV row per boundary sample.
fn boundary_csv(dom: &QuadDomain, n: usize, value: impl Fn(Complex64) -> quadpot::Result<Complex64>) -> CliResult<String> {
    let mut s = String::from("theta,re_z,im_z,re_value,im_value,re_tangent,im_tangent,speed\n");
    for k in 0..n {
        let th = 2.0 * PI * k as f64 / n as f64;
        let fr = dom.boundary_frame(th);
        let v = value(fr.w)?;
        let _ = writeln!(
            s,
            "{th:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            fr.z.re, fr.z.im, v.re, v.im, fr.tangent.re, fr.tangent.im, fr.speed
        );
    }
    Ok(s)
}

/// Polar grid of `n` points: 8 radii in (0, 1) times `n/8` angles.
fn interior_csv(dom: &QuadDomain, n: usize, u: impl Fn(Complex64) -> quadpot::Result<Complex64>) -> CliResult<String> {
    let mut s = String::from("re_z,im_z,re_u,im_u\n");
    let angles = n / 8;
    for i in 0..8 {
        let r = (i as f64 + 0.5) / 8.0;
        for j in 0..angles {
            let w = Complex64::from_polar(r, 2.0 * PI * j as f64 / angles as f64);
            let z = dom.eval_map(w);
            let x = u(w)?;
            let _ = writeln!(s, "{:.17e},{:.17e},{:.17e},{:.17e}", z.re, z.im, x.re, x.im);
        }
    }
    Ok(s)
}

fn emit(json_mode: bool, report: Value, text: String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        print!("{text}");
    }
}

fn point_text(dom: &QuadDomain, v: Complex64) -> String {
    let z = dom.eval_map(v);
    format!("v = {:.6}{:+.6}i, z = {:.6}{:+.6}i", v.re, v.im, z.re, z.im)
}

fn span_json(dom: &QuadDomain, s: &SpanElement) -> Value {
    Value::Array(
        s.terms
            .iter()
            .map(|(c, e)| {
                json!({
                    "kind": e.kind.symbol(),
                    "order": e.order,
                    "param": c_json(e.param),
                    "z": c_json(dom.eval_map(e.param)),
                    "coeff": c_json(*c),
                })
            })
            .collect(),
    )
}

fn span_text(dom: &QuadDomain, label: &str, s: &SpanElement) -> String {
    let mut out = format!("{label}: {} term(s)\n", s.len());
    for (c, e) in &s.terms {
        let _ = writeln!(
            out,
            "  {:+.12e}{:+.12e}i · {}^({}) at {}",
            c.re,
            c.im,
            e.kind.symbol(),
            e.order,
            point_text(dom, e.param)
        );
    }
    out
}

/// Largest `|u - R|` on the boundary, relative to `1 + sup|R|`.
fn boundary_residual(rep: &HarmonicRep, target: impl Fn(Complex64) -> Complex64) -> CliResult<f64> {
    let n = 512;
    let mut worst: f64 = 0.0;
    let mut size: f64 = 0.0;
    for k in 0..n {
        let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        let t = target(w);
        worst = worst.max((harmonic_eval(rep, w)? - t).norm());
        size = size.max(t.norm());
    }
    Ok(worst / (1.0 + size))
}

fn check_tol(residual: f64, tol: f64) -> CliResult<()> {
    if residual <= tol {
        Ok(())
    } else {
        Err(Error::SolverResidual { residual, tol }.into())
    }
}

fn samples_for(dom: &QuadDomain, a: &Solve, rep: &HarmonicRep) -> CliResult<Option<String>> {
    let Some(_) = &a.out else { return Ok(None) };
    Ok(Some(match a.grid {
        Grid::Boundary => boundary_csv(dom, a.samples, |w| harmonic_eval(rep, w))?,
        Grid::Interior => interior_csv(dom, a.samples, |w| harmonic_eval(rep, w))?,
    }))
}

fn finish(a: &Solve, csv: Option<String>, report: Value, text: String) -> CliResult<()> {
    if let (Some(path), Some(csv)) = (&a.out, csv) {
        write_out(path, &csv)?;
    }
    emit(a.common.json, report, text);
    Ok(())
}

fn validate(a: &Common) -> CliResult<()> {
    let dom = load_domain(&a.domain)?;
    let q = dom.quadrature_data()?;
    let nodes: Vec<Value> = q
        .nodes
        .iter()
        .map(|n| json!({"point": c_json(n.point), "order": n.order, "coeff": c_json(n.coeff)}))
        .collect();
    let mut text = format!(
        "domain `{}` is valid ({} quadrature domain)\nquadrature identity: ∫ h dA = Σ c · h^(k)(a)\n",
        dom.name(),
        if dom.is_double() { "double" } else { "area" }
    );
    for n in &q.nodes {
        let _ = writeln!(text, "  c = {:+.12e}{:+.12e}i, k = {}, a = {:.6}{:+.6}i", n.coeff.re, n.coeff.im, n.order, n.point.re, n.point.im);
    }
    emit(
        a.json,
        json!({"valid": true, "name": dom.name(), "double": dom.is_double(), "quadrature": nodes}),
        text,
    );
    Ok(())
}

fn solve_dirichlet(a: &Solve) -> CliResult<()> {
    let dom = load_domain(&a.common.domain)?;
    let r = load_data(&a.data)?;
    let rep = dirichlet_solve(&dom, a.anchor, &r)?;
    let residual = boundary_residual(&rep, |w| r.eval_boundary(dom.eval_map(w)))?;
    check_tol(residual, a.tol)?;
    let u0 = harmonic_eval(&rep, Complex64::new(0.0, 0.0))?;
    let text = format!(
        "Dirichlet solution on `{}` (anchor {})\nboundary residual {residual:.3e}\nu at {} = {:.15}{:+.15}i\n",
        dom.name(),
        point_text(&dom, a.anchor),
        point_text(&dom, Complex64::new(0.0, 0.0)),
        u0.re,
        u0.im
    );
    let report = json!({"residual": residual, "anchor": c_json(a.anchor), "u_at_origin": c_json(u0)});
    finish(a, samples_for(&dom, a, &rep)?, report, text)
}

fn dtn(a: &Solve) -> CliResult<()> {
    let dom = load_domain(&a.common.domain)?;
    let r = load_data(&a.data)?;
    let map = dtn_map(&dom, a.anchor, &r)?;
    let csv = match &a.out {
        Some(_) => Some(boundary_csv(&dom, a.samples, |w| Ok(map.eval(&dom, w.arg())))?),
        None => None,
    };
    let text = format!(
        "normal derivative on `{}`: {}\n",
        dom.name(),
        if map.trace.is_some() { "rational trace available" } else { "sampled form only" }
    );
    let trace = map.trace.as_ref().map(quadpot::solvers::trace_to_json);
    finish(a, csv, json!({"rational": map.trace.is_some(), "trace": trace}), text)
}

fn solve_neumann(a: &Solve) -> CliResult<()> {
    let dom = load_domain(&a.common.domain)?;
    let text = std::fs::read_to_string(&a.data).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", a.data.display()),
    })?;
    let psi: RationalFn = neumann_data_from_json_str(&dom, &text)?;
    let rep = neumann_solve(&dom, &psi)?;
    let back = quadpot::solvers::dtn_of(&dom, &rep)?;
    let mut residual: f64 = 0.0;
    let mut size: f64 = 0.0;
    for k in 0..512 {
        let th = 2.0 * PI * k as f64 / 512.0;
        let t = psi.value(Complex64::from_polar(1.0, th));
        residual = residual.max((back.eval(&dom, th) - t).norm());
        size = size.max(t.norm());
    }
    let residual = residual / (1.0 + size);
    check_tol(residual, a.tol)?;
    let text = format!(
        "Neumann solution on `{}` (normalized to vanish at {})\nnormal-derivative residual {residual:.3e}\n",
        dom.name(),
        point_text(&dom, Complex64::new(0.0, 0.0))
    );
    finish(a, samples_for(&dom, a, &rep)?, json!({"residual": residual}), text)
}

fn decompose(a: &Solve) -> CliResult<()> {
    let dom = load_domain(&a.common.domain)?;
    let r = load_data(&a.data)?;
    let dec = basic_decomposition(&dom, a.anchor, &r)?;
    let report = json!({
        "anchor": c_json(a.anchor),
        "residual": dec.residual,
        "szego": span_json(&dom, &dec.szego_terms),
        "garabedian": span_json(&dom, &dec.garabedian_terms),
    });
    let mut text = format!("decomposition on `{}` (anchor {})\nresidual {:.3e}\n", dom.name(), point_text(&dom, a.anchor), dec.residual);
    text.push_str(&span_text(&dom, "Szegő part", &dec.szego_terms));
    text.push_str(&span_text(&dom, "Garabedian part", &dec.garabedian_terms));
    if let Some(path) = &a.out {
        write_out(path, &serde_json::to_string_pretty(&report).expect("serializable"))?;
    }
    emit(a.common.json, report, text);
    Ok(())
}

fn project(a: &Solve) -> CliResult<()> {
    let dom = load_domain(&a.common.domain)?;
    let r = load_data(&a.data)?;
    let span = szego_project(&dom, a.anchor, &r)?;
    let csv = match &a.out {
        Some(_) => Some(boundary_csv(&dom, a.samples, |w| span.eval(&dom, w))?),
        None => None,
    };
    let text = span_text(&dom, "Szegő projection", &span);
    finish(a, csv, json!({"terms": span_json(&dom, &span)}), text)
}

fn sample(a: &Solve) -> CliResult<()> {
    let dom = load_domain(&a.common.domain)?;
    let r = load_data(&a.data)?;
    // reject data singular on the boundary before sampling
    pullback_boundary_data(&dom, &r)?;
    let csv = boundary_csv(&dom, a.samples, |w| Ok(r.eval_boundary(dom.eval_map(w))))?;
    match &a.out {
        Some(path) => write_out(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run_verify() -> CliResult<()> {
    let results = verify::run_all(None);
    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        println!("{r}");
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        return Err(Failure {
            code: 6,
            message: format!("{failed} criteria failed"),
        });
    }
    Ok(())
}

pub fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Validate(a) => validate(a),
        Command::SolveDirichlet(a) => solve_dirichlet(a),
        Command::Dtn(a) => dtn(a),
        Command::SolveNeumann(a) => solve_neumann(a),
        Command::Decompose(a) => decompose(a),
        Command::Project(a) => project(a),
        Command::Verify => run_verify(),
        Command::Sample(a) => sample(a),
    }
}
