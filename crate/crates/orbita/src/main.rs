//! Command-line entry point: matrix/LDU tooling, orbit computations,
//! generator synthesis, reconstruction, measure verdicts, Monte-Carlo
//! probes, and fixture regeneration.
//!
//! Exit codes: 0 success/PASS, 1 computed FAIL (probe or verdict
//! violation), 2 usage or input error, 3 mathematical precondition error.

mod fixtures;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use orbita_core::gauss::{self, GaussError, GaussFactors};
use orbita_core::induced::{
    self, generators, reconstruct, s_matrix, GeneratorMeasure, InducedError, SMatrix, SpacePoint,
};
use orbita_core::measure::{
    concentration_check, ergodicity_check, quasi_invariance_check, GaussianMeasure, Verdict,
    WeightError, WeightFamily,
};
use orbita_core::orbit::{
    character, coadjoint, is_subordinate, orbit_invariants, OrbitError, Subalgebra,
};
use orbita_core::orbit::AlgebraElement;
use orbita_core::repnum::{
    generator_fd_probe, homomorphism_probe, sample, truncation_convergence_probe, unitarity_probe,
    RepContext, RepError, TestFunction,
};
use orbita_core::symbolic::{
    parse_poly, parse_rational, RatFun, Rational, SymbolicError,
};
use orbita_core::unimat::{
    self, read_matrix_str, write_matrix, Functional, IndexWindow, MatError, MatrixFile, Triangle,
    UnipotentMatrix, Window,
};

const USAGE: &str = "\
orbita — exact orbit-method computations for unipotent matrix groups

usage: orbita [--format text|machine] [--seed N] [--depth N] <command>

commands:
  ldu <matrix.mat> [--by-minors] [--variant ldu|udl] [--out-dir DIR]
  inverse <x.mat> [--check-neumann]
  triple <g.mat> --m M
  orbit invariants <y.mat>
  orbit coadjoint <t.mat> <y.mat>
  orbit subordinate <basis-dir> <y.mat>
  orbit character <y.mat> <x.mat>
  induced smatrix --m M --n N [--y y.mat] [--x x.mat]
  induced generators --m M --n N [--y y.mat] [--measure haar|gauss:<fam>]
  induced reconstruct --s S.mat --y y.mat
  induced verify --m M --n N [--measure haar|gauss:<fam>]
  measure check --criterion zeroone|quasi|ergodic --a <fam> --b <fam>
                [--depth N] [--window m,n] [--pair k,r]
  repsim --probe unitarity|homomorphism|generator|convergence --m M --n N
         --y y.mat --b <fam> [--t t.mat] [--t2 t2.mat] [--f f.poly]
         [--samples N] [--seed S] [--kr k,r] [--eps e1,e2] [--radii r1,r2,..]
  fixtures check
  fixtures dump [--out DIR]

weight families <fam>: geometric:q | gausslike:q | factorial | table:FILE
  (q a rational like 1/2; table files hold `k n p/q` lines)

exit codes: 0 success/PASS, 1 computed FAIL or uncertified verdict,
            2 usage/input error, 3 mathematical precondition violated";

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
    Math(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Math(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Math(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("cannot read or write file: {e}"))
    }
}

impl From<MatError> for CliError {
    fn from(e: MatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SymbolicError> for CliError {
    fn from(e: SymbolicError) -> Self {
        match e {
            SymbolicError::DenominatorVanishes | SymbolicError::DivisionByZero => {
                CliError::Math(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<GaussError> for CliError {
    fn from(e: GaussError) -> Self {
        match e {
            GaussError::PrincipalMinorVanishes(_) | GaussError::WindowNotNested(_) => {
                CliError::Math(e.to_string())
            }
            GaussError::Mat(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<InducedError> for CliError {
    fn from(e: InducedError) -> Self {
        match e {
            InducedError::NotGenericPoint(k, r) => {
                CliError::Math(format!("NotGenericPoint y[{k},{r}]=0"))
            }
            InducedError::DiagonalMismatch { .. } | InducedError::WindowNotNested(_) => {
                CliError::Math(e.to_string())
            }
            InducedError::Gauss(g) => g.into(),
            InducedError::Mat(m) => m.into(),
            InducedError::Orbit(o) => o.into(),
            InducedError::Weight(w) => w.into(),
            InducedError::Symbolic(s) => s.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<OrbitError> for CliError {
    fn from(e: OrbitError) -> Self {
        match e {
            OrbitError::NotSubordinate(..) | OrbitError::NotClosed(..) => {
                CliError::Math(e.to_string())
            }
            OrbitError::Mat(m) => m.into(),
            OrbitError::Symbolic(s) => s.into(),
        }
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::Induced(i) => i.into(),
            RepError::Weight(w) => w.into(),
            RepError::Mat(m) => m.into(),
            RepError::Symbolic(s) => s.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Line-oriented emitter: human text or `record\tfield=value` pairs.
struct Out {
    machine: bool,
    buf: String,
}

impl Out {
    fn new(machine: bool) -> Self {
        Out { machine, buf: String::new() }
    }

    fn text(&mut self, line: &str) {
        if !self.machine {
            let _ = writeln!(self.buf, "{line}");
        }
    }

    fn record(&mut self, record: &str, fields: &[(&str, String)]) {
        if self.machine {
            for (k, v) in fields {
                let _ = writeln!(self.buf, "{record}\t{k}={v}");
            }
        } else {
            for (k, v) in fields {
                let _ = writeln!(self.buf, "{record} {k} = {v}");
            }
        }
    }

    fn flush(self) {
        print!("{}", self.buf);
    }
}

struct GlobalFlags {
    machine: bool,
    seed: u64,
    depth: usize,
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(run(args));
}

fn run(mut args: Vec<String>) -> i32 {
    let mut flags = GlobalFlags { machine: false, seed: 1, depth: 8 };
    if let Err(e) = extract_globals(&mut args, &mut flags) {
        eprintln!("error: {}", e.message());
        return e.code();
    }
    if args.is_empty() || args[0] == "--help" || args[0] == "help" {
        println!("{USAGE}");
        return if args.is_empty() { 2 } else { 0 };
    }
    let mut out = Out::new(flags.machine);
    match dispatch(&args, &flags, &mut out) {
        Ok(code) => {
            out.flush();
            code
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn extract_globals(args: &mut Vec<String>, flags: &mut GlobalFlags) -> Result<(), CliError> {
    let mut i = 0;
    while i < args.len() {
        match args[i].as_str() {
            "--format" => {
                let v = take_value(args, i)?;
                flags.machine = match v.as_str() {
                    "machine" => true,
                    "text" => false,
                    other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
                };
            }
            "--seed" => {
                let v = take_value(args, i)?;
                flags.seed = v
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad seed {v:?}")))?;
            }
            "--depth" => {
                let v = take_value(args, i)?;
                flags.depth = v
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad depth {v:?}")))?;
            }
            _ => {
                i += 1;
                continue;
            }
        }
    }
    Ok(())
}

fn take_value(args: &mut Vec<String>, i: usize) -> Result<String, CliError> {
    if i + 1 >= args.len() {
        return Err(CliError::Usage(format!("flag {} needs a value", args[i])));
    }
    let v = args.remove(i + 1);
    args.remove(i);
    Ok(v)
}

/// Named-flag parser for the per-command arguments.
struct Parsed {
    positional: Vec<String>,
    named: BTreeMap<String, String>,
    switches: Vec<String>,
}

fn parse_cmd_args(args: &[String], switches: &[&str]) -> Result<Parsed, CliError> {
    let mut p = Parsed { positional: Vec::new(), named: BTreeMap::new(), switches: Vec::new() };
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        if let Some(name) = a.strip_prefix("--") {
            if switches.contains(&name) {
                p.switches.push(name.to_string());
                i += 1;
            } else {
                if i + 1 >= args.len() {
                    return Err(CliError::Usage(format!("flag --{name} needs a value")));
                }
                p.named.insert(name.to_string(), args[i + 1].clone());
                i += 2;
            }
        } else {
            p.positional.push(a.clone());
            i += 1;
        }
    }
    Ok(p)
}

impl Parsed {
    fn need(&self, name: &str) -> Result<&String, CliError> {
        self.named
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("missing required flag --{name}")))
    }

    fn int(&self, name: &str) -> Result<i32, CliError> {
        self.need(name)?
            .parse()
            .map_err(|_| CliError::Usage(format!("bad integer for --{name}")))
    }

    fn has(&self, s: &str) -> bool {
        self.switches.iter().any(|x| x == s)
    }
}

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read file {path:?}: {e}")))
}

fn load_matrix(path: &str) -> Result<MatrixFile, CliError> {
    Ok(read_matrix_str(&read_file(path)?)?)
}

fn parse_pair(s: &str, what: &str) -> Result<(i32, i32), CliError> {
    let mut it = s.splitn(2, ',');
    let a = it
        .next()
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| CliError::Usage(format!("bad {what} {s:?}")))?;
    let b = it
        .next()
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| CliError::Usage(format!("bad {what} {s:?}")))?;
    Ok((a, b))
}

fn parse_family(s: &str) -> Result<WeightFamily, CliError> {
    if s == "factorial" {
        return Ok(WeightFamily::Factorial);
    }
    if let Some(q) = s.strip_prefix("geometric:") {
        return Ok(WeightFamily::geometric(parse_rational(q)?)?);
    }
    if let Some(q) = s.strip_prefix("gausslike:") {
        return Ok(WeightFamily::gauss_like(parse_rational(q)?)?);
    }
    if let Some(path) = s.strip_prefix("table:") {
        let mut entries = BTreeMap::new();
        for line in read_file(path)?.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let k: i32 = it
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| CliError::Input(format!("bad weight line {line:?}")))?;
            let n: i32 = it
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| CliError::Input(format!("bad weight line {line:?}")))?;
            let v = it
                .next()
                .ok_or_else(|| CliError::Input(format!("bad weight line {line:?}")))?;
            entries.insert((k, n), parse_rational(v)?);
        }
        return Ok(WeightFamily::table(entries)?);
    }
    Err(CliError::Usage(format!(
        "unknown weight family {s:?} (expected geometric:q, gausslike:q, factorial, table:FILE)"
    )))
}

fn dispatch(args: &[String], flags: &GlobalFlags, out: &mut Out) -> Result<i32, CliError> {
    match args[0].as_str() {
        "ldu" => cmd_ldu(&args[1..], out),
        "inverse" => cmd_inverse(&args[1..], out),
        "triple" => cmd_triple(&args[1..], out),
        "orbit" => cmd_orbit(&args[1..], out),
        "induced" => cmd_induced(&args[1..], out),
        "measure" => cmd_measure(&args[1..], flags, out),
        "repsim" => cmd_repsim(&args[1..], flags, out),
        "fixtures" => cmd_fixtures(&args[1..], out),
        other => Err(CliError::Usage(format!("unknown command {other:?}"))),
    }
}

fn render_factors(f: &GaussFactors<RatFun>, udl_order: bool, out: &mut Out) {
    let (first_name, last_name) = if udl_order { ("U", "L") } else { ("L", "U") };
    let first_m = if udl_order { &f.u } else { &f.l };
    let last_m = if udl_order { &f.l } else { &f.u };
    out.text(&format!("{first_name}:"));
    for (&(k, r), v) in first_m.entries() {
        out.record(first_name, &[(&format!("{k},{r}"), v.to_string())]);
    }
    out.text("D:");
    for (i, v) in &f.d {
        out.record("D", &[(&format!("{i}"), v.to_string())]);
    }
    out.text(&format!("{last_name}:"));
    for (&(k, r), v) in last_m.entries() {
        out.record(last_name, &[(&format!("{k},{r}"), v.to_string())]);
    }
}

fn factors_to_files(f: &GaussFactors<RatFun>, dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(
        dir.join("l.mat"),
        write_matrix(&MatrixFile::Unipotent(f.l.clone())),
    )?;
    std::fs::write(
        dir.join("u.mat"),
        write_matrix(&MatrixFile::Unipotent(f.u.clone())),
    )?;
    let mut d = String::new();
    for (i, v) in &f.d {
        let _ = writeln!(d, "{i} {v}");
    }
    std::fs::write(dir.join("d.txt"), d)?;
    Ok(())
}

fn cmd_ldu(args: &[String], out: &mut Out) -> Result<i32, CliError> {
    let p = parse_cmd_args(args, &["by-minors"])?;
    let path = p
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("ldu needs a matrix file".into()))?;
    let mat = load_matrix(path)?.to_dense();
    let variant = p.named.get("variant").map(String::as_str).unwrap_or("ldu");
    let factors = match variant {
        "ldu" => {
            if p.has("by-minors") {
                gauss::ldu_by_minors(&mat)?
            } else {
                gauss::ldu(&mat)?
            }
        }
        "udl" => gauss::udl(&mat)?,
        other => return Err(CliError::Usage(format!("unknown variant {other:?}"))),
    };
    render_factors(&factors, variant == "udl", out);
    if let Some(dir) = p.named.get("out-dir") {
        factors_to_files(&factors, &PathBuf::from(dir))?;
    }
    Ok(0)
}

fn cmd_inverse(args: &[String], out: &mut Out) -> Result<i32, CliError> {
    let p = parse_cmd_args(args, &["check-neumann"])?;
    let path = p
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("inverse needs a matrix file".into()))?;
    let m = load_matrix(path)?;
    let uni = m.as_unipotent()?;
    let inv = uni.invert();
    if p.has("check-neumann") {
        if inv != uni.invert_neumann() {
            return Err(CliError::Math(
                "closed form and Neumann series disagree".into(),
            ));
        }
        out.record("check", &[("neumann", "agree".into())]);
    }
    if out.machine {
        for (&(k, r), v) in inv.entries() {
            out.record("inverse", &[(&format!("{k},{r}"), v.to_string())]);
        }
    } else {
        out.text(write_matrix(&MatrixFile::Unipotent(inv)).trim_end());
    }
    Ok(0)
}

fn cmd_triple(args: &[String], out: &mut Out) -> Result<i32, CliError> {
    let p = parse_cmd_args(args, &[])?;
    let path = p
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("triple needs a matrix file".into()))?;
    let m = p.int("m")?;
    let g = load_matrix(path)?;
    let (low, mid, up) = unimat::triple_decompose(g.as_unipotent()?, m)?;
    for (name, factor) in [("low", &low), ("mid", &mid), ("up", &up)] {
        out.text(&format!("{name}:"));
        for (&(k, r), v) in factor.entries() {
            out.record(name, &[(&format!("{k},{r}"), v.to_string())]);
        }
    }
    Ok(0)
}

fn algebra_element_from(m: &UnipotentMatrix<RatFun>) -> Result<AlgebraElement<RatFun>, CliError> {
    if m.triangle() != Triangle::Upper {
        return Err(CliError::Input("algebra elements must be upper files".into()));
    }
    let mut e = AlgebraElement::zero(m.window());
    for (&(k, r), v) in m.entries() {
        e.set(k, r, v.clone())?;
    }
    Ok(e)
}

fn cmd_orbit(args: &[String], out: &mut Out) -> Result<i32, CliError> {
    let sub = args
        .first()
        .ok_or_else(|| CliError::Usage("orbit needs a subcommand".into()))?;
    match sub.as_str() {
        "invariants" => {
            let p = parse_cmd_args(&args[1..], &[])?;
            let y = load_matrix(
                p.positional
                    .first()
                    .ok_or_else(|| CliError::Usage("orbit invariants needs y.mat".into()))?,
            )?;
            for (i, v) in orbit_invariants(y.as_functional()?).iter().enumerate() {
                out.record("Delta", &[(&format!("{}", i + 1), v.to_string())]);
            }
            Ok(0)
        }
        "coadjoint" => {
            let p = parse_cmd_args(&args[1..], &[])?;
            if p.positional.len() != 2 {
                return Err(CliError::Usage("orbit coadjoint needs t.mat and y.mat".into()));
            }
            let t = load_matrix(&p.positional[0])?;
            let y = load_matrix(&p.positional[1])?;
            let moved = coadjoint(t.as_unipotent()?, y.as_functional()?)?;
            if out.machine {
                for (&(k, r), v) in moved.entries() {
                    out.record("coadjoint", &[(&format!("{k},{r}"), v.to_string())]);
                }
            } else {
                out.text(write_matrix(&MatrixFile::Functional(moved)).trim_end());
            }
            Ok(0)
        }
        "subordinate" => {
            let p = parse_cmd_args(&args[1..], &[])?;
            if p.positional.len() != 2 {
                return Err(CliError::Usage(
                    "orbit subordinate needs a basis dir and y.mat".into(),
                ));
            }
            let mut paths: Vec<PathBuf> = std::fs::read_dir(&p.positional[0])?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().map(|x| x == "mat").unwrap_or(false))
                .collect();
            paths.sort();
            if paths.is_empty() {
                return Err(CliError::Input("basis directory holds no .mat files".into()));
            }
            let mut basis = Vec::new();
            for path in &paths {
                let m = load_matrix(path.to_str().unwrap())?;
                basis.push(algebra_element_from(m.as_unipotent()?)?);
            }
            let h = Subalgebra::new(basis).map_err(CliError::from)?;
            let y = load_matrix(&p.positional[1])?;
            let rep = is_subordinate(&h, y.as_functional()?)?;
            out.record("subordinate", &[("result", format!("{}", rep.subordinate))]);
            if let Some((i, j, v)) = rep.witness {
                out.record(
                    "witness",
                    &[("pair", format!("{i},{j}")), ("pairing", v.to_string())],
                );
            }
            Ok(0)
        }
        "character" => {
            let p = parse_cmd_args(&args[1..], &[])?;
            if p.positional.len() != 2 {
                return Err(CliError::Usage("orbit character needs y.mat and x.mat".into()));
            }
            let y = load_matrix(&p.positional[0])?;
            let x = load_matrix(&p.positional[1])?;
            let elem = algebra_element_from(x.as_unipotent()?)?;
            let ch = character(y.as_functional()?, &elem, None)?;
            out.record("character", &[("exponent", ch.exponent.to_string())]);
            Ok(0)
        }
        other => Err(CliError::Usage(format!("unknown orbit subcommand {other:?}"))),
    }
}

/// Symbolic generic functional on the corner anti-diagonal of the split.
fn symbolic_generic_y(window: Window, m: i32) -> Functional<RatFun> {
    let mut y = Functional::zero(window);
    for (k, r) in unimat::corner_antidiagonal(window, m) {
        y.set(k, r, RatFun::var(orbita_core::VarId::y(k, r))).unwrap();
    }
    y
}

fn measure_flag(p: &Parsed) -> Result<Option<WeightFamily>, CliError> {
    match p.named.get("measure").map(String::as_str) {
        None | Some("haar") => Ok(None),
        Some(s) => {
            let fam = s
                .strip_prefix("gauss:")
                .ok_or_else(|| CliError::Usage(format!("unknown measure {s:?}")))?;
            Ok(Some(parse_family(fam)?))
        }
    }
}

fn split_point_from_file(
    m: i32,
    window: Window,
    file: &MatrixFile,
) -> Result<SpacePoint<RatFun>, CliError> {
    let uni = file.as_unipotent()?;
    if uni.window() != window {
        return Err(CliError::Input("x window does not match --m/--n".into()));
    }
    let mut low = UnipotentMatrix::upper(window);
    let mut up = UnipotentMatrix::upper(window);
    for (&(k, r), v) in uni.entries() {
        if k > m {
            low.set(k, r, v.clone())?;
        } else if r <= m {
            up.set(k, r, v.clone())?;
        } else {
            return Err(CliError::Input(format!(
                "x entry ({k},{r}) lies in the middle block; the point lives on B_m x B^(m)"
            )));
        }
    }
    Ok(SpacePoint::new(low, up, m)?)
}

fn cmd_induced(args: &[String], out: &mut Out) -> Result<i32, CliError> {
    let sub = args
        .first()
        .ok_or_else(|| CliError::Usage("induced needs a subcommand".into()))?;
    match sub.as_str() {
        "smatrix" => {
            let p = parse_cmd_args(&args[1..], &[])?;
            let m = p.int("m")?;
            let n = p.int("n")?;
            let window = Window::centered(m, n);
            let y = match p.named.get("y") {
                Some(path) => load_matrix(path)?.as_functional()?.clone(),
                None => symbolic_generic_y(window, m),
            };
            let x = match p.named.get("x") {
                Some(path) => split_point_from_file(m, window, &load_matrix(path)?)?,
                None => SpacePoint::<RatFun>::generic(window, m),
            };
            let s = s_matrix(&x, &y)?;
            for (&(k, r), v) in s.entries() {
                out.record("S", &[(&format!("{k},{r}"), v.to_string())]);
            }
            Ok(0)
        }
        "generators" => {
            let p = parse_cmd_args(&args[1..], &[])?;
            let m = p.int("m")?;
            let n = p.int("n")?;
            let window = Window::centered(m, n);
            let y = match p.named.get("y") {
                Some(path) => load_matrix(path)?.as_functional()?.clone(),
                None => symbolic_generic_y(window, m),
            };
            let fam = measure_flag(&p)?;
            let measure = match &fam {
                Some(b) => GeneratorMeasure::Gaussian(b),
                None => GeneratorMeasure::Haar,
            };
            let gens = generators(window, m, &y, measure)?;
            for ((k, r), op) in &gens {
                out.record("A", &[(&format!("{k},{r}"), op.to_string())]);
            }
            Ok(0)
        }
        "reconstruct" => {
            let p = parse_cmd_args(&args[1..], &[])?;
            let s_file = load_matrix(p.need("s")?)?;
            let y_file = load_matrix(p.need("y")?)?;
            let uni = s_file.as_unipotent()?;
            let window = uni.window();
            if (window.lo + window.hi) % 2 == 0 {
                return Err(CliError::Input(
                    "s-matrix file must live on a centered window".into(),
                ));
            }
            let m = (window.lo + window.hi - 1) / 2;
            let mut s = SMatrix::zero(window, m);
            for (&(k, r), v) in uni.entries() {
                s.set(k, r, v.clone()).map_err(|_| {
                    CliError::Input(format!("s entry ({k},{r}) outside the middle block"))
                })?;
            }
            let point = reconstruct(&s, y_file.as_functional()?)?;
            out.text("low:");
            for (&(k, r), v) in point.low.entries() {
                out.record("low", &[(&format!("{k},{r}"), v.to_string())]);
            }
            out.text("up:");
            for (&(k, r), v) in point.up.entries() {
                out.record("up", &[(&format!("{k},{r}"), v.to_string())]);
            }
            Ok(0)
        }
        "verify" => {
            let p = parse_cmd_args(&args[1..], &[])?;
            let m = p.int("m")?;
            let n = p.int("n")?;
            let window = Window::centered(m, n);
            let y = symbolic_generic_y(window, m);
            let fam = measure_flag(&p)?;
            let measure = match &fam {
                Some(b) => GeneratorMeasure::Gaussian(b),
                None => GeneratorMeasure::Haar,
            };
            let gens = generators(window, m, &y, measure)?;
            let report = induced::verify_bracket_homomorphism(&gens, window);
            out.record(
                "verify",
                &[
                    ("checked", report.checked.to_string()),
                    ("result", if report.pass() { "PASS".into() } else { "FAIL".into() }),
                ],
            );
            if let Some((a, b)) = report.violation {
                out.record(
                    "violation",
                    &[("pair", format!("({},{})x({},{})", a.0, a.1, b.0, b.1))],
                );
            }
            Ok(if report.pass() { 0 } else { 1 })
        }
        other => Err(CliError::Usage(format!("unknown induced subcommand {other:?}"))),
    }
}

fn cmd_measure(args: &[String], flags: &GlobalFlags, out: &mut Out) -> Result<i32, CliError> {
    let sub = args
        .first()
        .ok_or_else(|| CliError::Usage("measure needs a subcommand".into()))?;
    if sub != "check" {
        return Err(CliError::Usage(format!("unknown measure subcommand {sub:?}")));
    }
    let p = parse_cmd_args(&args[1..], &[])?;
    let criterion = p.need("criterion")?.clone();
    let b = parse_family(p.need("b")?)?;
    let depth = match p.named.get("depth") {
        Some(d) => d
            .parse()
            .map_err(|_| CliError::Usage(format!("bad depth {d:?}")))?,
        None => flags.depth,
    };
    let verdict: Verdict = match criterion.as_str() {
        "zeroone" => {
            let a = parse_family(p.need("a")?)?;
            let (m, _n) = match p.named.get("window") {
                Some(w) => parse_pair(w, "window")?,
                None => (0, depth as i32),
            };
            concentration_check(&a, &b, m, depth)?
        }
        "quasi" => {
            let (k, n) = parse_pair(p.need("pair")?, "pair")?;
            quasi_invariance_check(&b, k, n, depth)?
        }
        "ergodic" => {
            let (m, _n) = match p.named.get("window") {
                Some(w) => parse_pair(w, "window")?,
                None => (0, depth as i32),
            };
            ergodicity_check(&b, m, depth)?
        }
        other => return Err(CliError::Usage(format!("unknown criterion {other:?}"))),
    };
    out.record(
        "verdict",
        &[("criterion", criterion), ("result", verdict.to_string())],
    );
    Ok(match verdict.state {
        orbita_core::measure::VerdictState::Inconclusive => 1,
        _ => 0,
    })
}

fn rational_unipotent(file: &MatrixFile) -> Result<UnipotentMatrix<Rational>, CliError> {
    Ok(unimat::unipotent_to_rational(file.as_unipotent()?)?)
}

fn rational_functional(file: &MatrixFile) -> Result<Functional<Rational>, CliError> {
    Ok(unimat::functional_to_rational(file.as_functional()?)?)
}

fn cmd_repsim(args: &[String], flags: &GlobalFlags, out: &mut Out) -> Result<i32, CliError> {
    let p = parse_cmd_args(args, &[])?;
    let probe = p.need("probe")?.clone();
    let m = p.int("m")?;
    let n = p.int("n")?;
    let iw = IndexWindow::new(m, n);
    let window = iw.window();
    let b = parse_family(p.need("b")?)?;
    let samples: usize = match p.named.get("samples") {
        Some(s) => s
            .parse()
            .map_err(|_| CliError::Usage(format!("bad sample count {s:?}")))?,
        None => 1000,
    };
    let seed: u64 = match p.named.get("seed") {
        Some(s) => s
            .parse()
            .map_err(|_| CliError::Usage(format!("bad seed {s:?}")))?,
        None => flags.seed,
    };
    let f = match p.named.get("f") {
        Some(path) => TestFunction::new(parse_poly(read_file(path)?.trim())?),
        None => TestFunction::one(),
    };
    let y = rational_functional(&load_matrix(p.need("y")?)?)?;
    if y.window() != window {
        return Err(CliError::Input("y window does not match --m/--n".into()));
    }
    let mu = GaussianMeasure::new(b.clone(), iw);
    let ctx = RepContext::new(iw, y.clone(), mu);
    let load_t = |key: &str| -> Result<UnipotentMatrix<Rational>, CliError> {
        let t = rational_unipotent(&load_matrix(p.need(key)?)?)?;
        if t.window() != window {
            return Err(CliError::Input(format!("{key} window does not match --m/--n")));
        }
        Ok(t)
    };
    let mut fields: Vec<(&str, String)> = vec![
        ("probe", probe.clone()),
        ("m", m.to_string()),
        ("n", n.to_string()),
        ("samples", samples.to_string()),
        ("seed", seed.to_string()),
    ];
    let pass = match probe.as_str() {
        "unitarity" => {
            let t = load_t("t")?;
            let rep = unitarity_probe(&ctx, &t, &f, samples, seed)?;
            fields.push(("estimate", format!("{:.12e}", rep.abs_err)));
            fields.push(("tolerance", format!("{:.12e}", rep.tol)));
            fields.push(("lhs", format!("{:.12e}", rep.lhs)));
            fields.push(("rhs", format!("{:.12e}", rep.rhs)));
            rep.pass()
        }
        "homomorphism" => {
            let t = load_t("t")?;
            let t2 = load_t("t2")?;
            let pts = sample(&ctx.mu, samples, seed)?;
            let rep = homomorphism_probe(&ctx, &t, &t2, &f, &pts)?;
            fields.push(("estimate", format!("{:.12e}", rep.max_dev)));
            fields.push(("tolerance", format!("{:.12e}", rep.tol)));
            rep.pass()
        }
        "generator" => {
            let (k, r) = parse_pair(p.need("kr")?, "kr")?;
            let eps: Vec<Rational> = match p.named.get("eps") {
                Some(s) => s
                    .split(',')
                    .map(|e| parse_rational(e.trim()).map_err(CliError::from))
                    .collect::<Result<_, _>>()?,
                None => vec![
                    Rational::new(1.into(), 100.into()),
                    Rational::new(1.into(), 1000.into()),
                ],
            };
            if eps.len() < 2 {
                return Err(CliError::Usage("generator probe needs two or more eps".into()));
            }
            let y_sym = y.map(|v| RatFun::constant(v.clone()));
            let gens = generators(window, m, &y_sym, GeneratorMeasure::Gaussian(&b))?;
            let gen = gens
                .get(&(k, r))
                .ok_or_else(|| CliError::Usage(format!("no generator at ({k},{r})")))?;
            let pts = sample(&ctx.mu, samples.min(64), seed)?;
            let rep = generator_fd_probe(&ctx, gen, k, r, &eps, &f, &pts)?;
            for (e, err) in &rep.errors {
                fields.push(("fd-error", format!("eps={e:.3e} err={err:.12e}")));
            }
            let mut ok = true;
            for (i, ratio) in rep.ratios.iter().enumerate() {
                fields.push(("ratio", format!("{ratio:.3}")));
                let step = rep.errors[i].0 / rep.errors[i + 1].0;
                let expect = step * step;
                if !(0.8 * expect..=1.2 * expect).contains(ratio) {
                    ok = false;
                }
            }
            fields.push(("tolerance", "ratio within 20% of quadratic".into()));
            ok
        }
        "convergence" => {
            let radii: Vec<i32> = match p.named.get("radii") {
                Some(s) => s
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse()
                            .map_err(|_| CliError::Usage(format!("bad radius {v:?}")))
                    })
                    .collect::<Result<_, _>>()?,
                None => vec![n.max(1), n.max(1) + 1, n.max(1) + 2],
            };
            let t_big = rational_unipotent(&load_matrix(p.need("t")?)?)?;
            let y_big = y.clone();
            let y_values = move |pp: i32| y_big.get(m + pp + 1, m - pp);
            let t_builder = |radius: i32| {
                let w = IndexWindow::new(m, radius).window();
                let mut t = UnipotentMatrix::upper(w);
                for (&(k, r), v) in t_big.entries() {
                    if w.contains(k) && w.contains(r) {
                        t.set(k, r, v.clone()).unwrap();
                    }
                }
                t
            };
            let rep = truncation_convergence_probe(
                m, &radii, y_values, &b, t_builder, &f, samples, seed,
            )?;
            for (i, d) in rep.diffs.iter().enumerate() {
                fields.push((
                    "diff",
                    format!("radii {}->{}: {d:.12e}", rep.radii[i], rep.radii[i + 1]),
                ));
            }
            true
        }
        other => return Err(CliError::Usage(format!("unknown probe {other:?}"))),
    };
    fields.push(("verdict", if pass { "PASS".into() } else { "FAIL".into() }));
    out.record("repsim", &fields);
    Ok(if pass { 0 } else { 1 })
}

fn cmd_fixtures(args: &[String], out: &mut Out) -> Result<i32, CliError> {
    let sub = args
        .first()
        .ok_or_else(|| CliError::Usage("fixtures needs check or dump".into()))?;
    match sub.as_str() {
        "check" => {
            let mut all_ok = true;
            for (name, regenerated) in fixtures::regenerate_all() {
                let ok = fixtures::golden(name).map(|g| g == regenerated).unwrap_or(false);
                all_ok &= ok;
                out.record(
                    "fixture",
                    &[(name, if ok { "PASS".into() } else { "FAIL".into() })],
                );
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        "dump" => {
            let p = parse_cmd_args(&args[1..], &[])?;
            let dir = PathBuf::from(
                p.named
                    .get("out")
                    .map(String::as_str)
                    .unwrap_or("fixtures-out"),
            );
            std::fs::create_dir_all(&dir)?;
            for (name, content) in fixtures::regenerate_all() {
                std::fs::write(dir.join(name), &content)?;
                out.record("dumped", &[(name, format!("{} bytes", content.len()))]);
            }
            Ok(0)
        }
        other => Err(CliError::Usage(format!("unknown fixtures subcommand {other:?}"))),
    }
}
