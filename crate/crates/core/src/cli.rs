//! Command-line front end.
//!
//! Exit codes: 0 success or pass, 1 a mathematical finding (counterexample,
//! failed identity, non-saturated polytope), 2 usage error, 3 internal error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::billey::{restrict_on_word, RestrictionTable};
use crate::coeffs::{bc_correspondence, grassmann_coeff, oglg_correspondence, CoeffError, CoeffSolver, Space, StrictPartition};
use crate::exec;
use crate::poly::Poly;
use crate::rootsys::{Family, TypeLabel};
use crate::verify::{run_scan, Property, ScanConfig, ScanReport, VerifyError};
use crate::weyl::{Elem, WeylError, WeylGroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "eqschub", version, about = "Equivariant Schubert restrictions, structure coefficients and verification scans")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Write output to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Restriction xi_w|_v.
    Restrict {
        #[arg(long = "type")]
        ty: TypeLabel,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Disable Bruhat pruning in the subword expansion.
        #[arg(long)]
        no_prune: bool,
    },
    /// Structure coefficient C_{u,v}^w.
    Coeff {
        #[arg(long = "type")]
        ty: TypeLabel,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Coefficient on a maximal isotropic Grassmannian, indexed by strict partitions.
    Grassmann {
        #[arg(long, value_parser = parse_space)]
        space: Space,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long, default_value = "")]
        mu: String,
        #[arg(long, default_value = "")]
        nu: String,
    },
    /// Check a theorem or correspondence, on one instance or over a range.
    Verify {
        /// Property id, e.g. bc, oglg, transport, monotonicity, arabia.
        property: String,
        #[command(flatten)]
        scan: ScanArgs,
        /// One-line elements (bc) for a single-instance check.
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        /// Strict partitions (oglg) for a single-instance check.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        nu: Option<String>,
    },
    /// Run a conjecture or property scan.
    Scan {
        #[arg(long)]
        property: String,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Newton polytope of a restriction (--w --v) or coefficient (--u --v --w).
    Newton {
        #[command(flatten)]
        target: PolyTarget,
    },
    /// Saturated Newton polytope test of a restriction or coefficient.
    Snp {
        #[command(flatten)]
        target: PolyTarget,
    },
    /// Root system and Weyl group summary.
    Info {
        #[arg(long = "type")]
        ty: TypeLabel,
    },
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long = "type")]
    ty: Option<TypeLabel>,
    /// Rank for the B/C correspondences (type B of this rank).
    #[arg(long)]
    rank: Option<usize>,
    /// Check every case (the default unless --samples is given).
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_length: Option<usize>,
    /// Worker threads; 0 picks a default. Also read from EQSCHUB_JOBS.
    #[arg(long)]
    jobs: Option<usize>,
    /// Transport target type.
    #[arg(long)]
    target: Option<TypeLabel>,
    /// Transport node map, e.g. 1:2,2:3,3:4.
    #[arg(long)]
    map: Option<String>,
    /// Arabia check over simple roots only.
    #[arg(long)]
    simple_only: bool,
    /// Skip the literature counterexample fixtures.
    #[arg(long)]
    no_fixtures: bool,
    /// Report elapsed_ms as 0 so identical runs give identical bytes.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct PolyTarget {
    #[arg(long = "type")]
    ty: TypeLabel,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    #[arg(long, allow_hyphen_values = true)]
    w: String,
}

fn parse_space(s: &str) -> Result<Space, String> {
    s.parse().map_err(|e: CoeffError| e.to_string())
}

/// Failure modes after argument parsing.
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<WeylError> for Failure {
    fn from(e: WeylError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CoeffError> for Failure {
    fn from(e: CoeffError) -> Self {
        match e {
            CoeffError::NonExactDivision { .. } | CoeffError::NonIntegralScaling { .. } | CoeffError::Poly(_) => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Coeff(c) => c.into(),
            VerifyError::Billey(b) => Failure::Internal(b.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

struct Output {
    text: String,
    code: i32,
}

fn ok(text: String) -> Result<Output, Failure> {
    Ok(Output { text, code: EXIT_OK })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn group(label: TypeLabel) -> Result<Arc<WeylGroup>, Failure> {
    Ok(Arc::new(WeylGroup::new(label)?))
}

fn element(g: &WeylGroup, s: &str, flag: &str) -> Result<Elem, Failure> {
    g.parse_element(s).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
}

fn poly_text(p: &Poly, label: TypeLabel) -> String {
    p.to_text(label.glyph())
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let verb = verb_name(&cli.command);
    let result = dispatch(&cli);
    match result {
        Ok(out) => {
            let mut text = out.text;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            match &cli.out {
                Some(path) => match write_atomic(path, &text) {
                    Ok(()) => out.code,
                    Err(e) => {
                        let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                        EXIT_USAGE
                    }
                },
                None => {
                    let _ = stdout.write_all(text.as_bytes());
                    out.code
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let mut cmd = Cli::command();
            cmd.build();
            let usage = cmd.find_subcommand_mut(verb).map(|c| c.render_usage().to_string()).unwrap_or_default();
            let _ = writeln!(stderr, "error: {msg}\n\n{usage}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn verb_name(c: &Command) -> &'static str {
    match c {
        Command::Restrict { .. } => "restrict",
        Command::Coeff { .. } => "coeff",
        Command::Grassmann { .. } => "grassmann",
        Command::Verify { .. } => "verify",
        Command::Scan { .. } => "scan",
        Command::Newton { .. } => "newton",
        Command::Snp { .. } => "snp",
        Command::Info { .. } => "info",
    }
}

/// Write-then-rename in the destination directory.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().to_string()).unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Restrict { ty, w, v, no_prune } => {
            let g = group(*ty)?;
            let (we, ve) = (element(&g, w, "w")?, element(&g, v, "v")?);
            let value = if *no_prune {
                restrict_on_word(&g, we, g.reduced_word(ve), false)
            } else {
                RestrictionTable::new(g.clone()).get(we, ve)
            };
            if json {
                ok(to_json(&json!({
                    "type": ty,
                    "w": g.format_element(we),
                    "v": g.format_element(ve),
                    "value": value,
                })))
            } else {
                ok(poly_text(&value, *ty))
            }
        }
        Command::Coeff { ty, u, v, w } => {
            let solver = CoeffSolver::new(group(*ty)?);
            let g = solver.group();
            let (ue, ve, we) = (element(g, u, "u")?, element(g, v, "v")?, element(g, w, "w")?);
            let r = solver.coeff(ue, ve, we)?;
            if json {
                ok(to_json(&json!({
                    "type": ty,
                    "u": g.format_element(ue),
                    "v": g.format_element(ve),
                    "w": g.format_element(we),
                    "value": r.value,
                    "meta": r.meta,
                })))
            } else {
                ok(poly_text(&r.value, *ty))
            }
        }
        Command::Grassmann { space, n, lambda, mu, nu } => {
            let label = TypeLabel::new(space.family(), *n).map_err(|e| Failure::Usage(e.to_string()))?;
            let (l, m, k) = (
                StrictPartition::parse(lambda, *n)?,
                StrictPartition::parse(mu, *n)?,
                StrictPartition::parse(nu, *n)?,
            );
            let solver = CoeffSolver::new(group(label)?);
            let r = grassmann_coeff(&solver, *space, *n, &l, &m, &k)?;
            if json {
                ok(to_json(&json!({
                    "space": space,
                    "n": n,
                    "lambda": l.parts(),
                    "mu": m.parts(),
                    "nu": k.parts(),
                    "value": r.value,
                    "meta": r.meta,
                })))
            } else {
                ok(poly_text(&r.value, label))
            }
        }
        Command::Verify { property, scan, u, v, w, lambda, mu, nu } => {
            let prop: Property = property.parse()?;
            match prop {
                Property::Bc if u.is_some() || v.is_some() || w.is_some() => {
                    let (Some(u), Some(v), Some(w)) = (u, v, w) else {
                        return Err(Failure::Usage("bc needs all of --u, --v, --w".into()));
                    };
                    single_bc(scan, u, v, w, json)
                }
                Property::OgLg if lambda.is_some() || mu.is_some() || nu.is_some() => {
                    let n = bc_rank(scan)?;
                    let parse = |s: &Option<String>| StrictPartition::parse(s.as_deref().unwrap_or(""), n);
                    let (l, m, k) = (parse(lambda)?, parse(mu)?, parse(nu)?);
                    let (b, c) = bc_solvers(n)?;
                    let r = oglg_correspondence(&b, &c, n, &l, &m, &k)?;
                    report_bc(&r, json)
                }
                _ => run_report(prop, scan, json),
            }
        }
        Command::Scan { property, scan } => run_report(property.parse()?, scan, json),
        Command::Newton { target } => {
            let (p, label) = target_poly(target)?;
            if p.is_zero() {
                return Err(Failure::Usage("the polynomial is zero and has no Newton polytope".into()));
            }
            let np = p.newton_polytope().map_err(|e| Failure::Internal(e.to_string()))?;
            if json {
                ok(to_json(&np))
            } else {
                let fmt = |v: &Vec<u16>| format!("({})", v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","));
                let verts: Vec<String> = np.vertices.iter().map(fmt).collect();
                ok(format!(
                    "polynomial: {}\nsupport points: {}\nvertices: {}",
                    poly_text(&p, label),
                    np.support.len(),
                    verts.join(" ")
                ))
            }
        }
        Command::Snp { target } => {
            let (p, label) = target_poly(target)?;
            let verdict = p.snp_test();
            let code = if verdict.saturated { EXIT_OK } else { EXIT_FINDING };
            let text = if json {
                to_json(&verdict)
            } else if verdict.saturated {
                format!("saturated: {}", poly_text(&p, label))
            } else {
                format!("not saturated: missing {:?} in {}", verdict.witness.unwrap_or_default(), poly_text(&p, label))
            };
            Ok(Output { text, code })
        }
        Command::Info { ty } => ok(info(*ty, json)?),
    }
}

fn target_poly(t: &PolyTarget) -> Result<(Poly, TypeLabel), Failure> {
    let g = group(t.ty)?;
    let (ve, we) = (element(&g, &t.v, "v")?, element(&g, &t.w, "w")?);
    let p = match &t.u {
        Some(u) => {
            let ue = element(&g, u, "u")?;
            CoeffSolver::new(g.clone()).coeff_value(ue, ve, we)?
        }
        None => RestrictionTable::new(g.clone()).get(we, ve),
    };
    Ok((p, t.ty))
}

fn bc_rank(scan: &ScanArgs) -> Result<usize, Failure> {
    match (scan.rank, scan.ty) {
        (Some(n), _) => Ok(n),
        (None, Some(l)) if matches!(l.family(), Family::B | Family::C) => Ok(l.rank()),
        _ => Err(Failure::Usage("give --rank, or --type of family B or C".into())),
    }
}

fn bc_solvers(n: usize) -> Result<(CoeffSolver, CoeffSolver), Failure> {
    let lb = TypeLabel::new(Family::B, n).map_err(|e| Failure::Usage(e.to_string()))?;
    let lc = TypeLabel::new(Family::C, n).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((CoeffSolver::new(group(lb)?), CoeffSolver::new(group(lc)?)))
}

fn single_bc(scan: &ScanArgs, u: &str, v: &str, w: &str, json: bool) -> Result<Output, Failure> {
    let n = bc_rank(scan)?;
    let (b, c) = bc_solvers(n)?;
    let parse = |s: &str, flag: &str| s.parse().map_err(|e: WeylError| Failure::Usage(format!("--{flag}: {e}")));
    let r = bc_correspondence(&b, &c, &parse(u, "u")?, &parse(v, "v")?, &parse(w, "w")?)?;
    report_bc(&r, json)
}

fn report_bc(r: &crate::coeffs::BcReport, json: bool) -> Result<Output, Failure> {
    let code = if r.equal { EXIT_OK } else { EXIT_FINDING };
    let text = if json {
        to_json(r)
    } else {
        format!(
            "lhs: {}\nrhs: {}\nexponent: {}\nequal: {}",
            r.lhs.to_text('b'),
            r.rhs.to_text('b'),
            r.exponent,
            r.equal
        )
    };
    Ok(Output { text, code })
}

fn run_report(prop: Property, scan: &ScanArgs, json: bool) -> Result<Output, Failure> {
    let label = match (scan.ty, scan.rank) {
        (Some(l), _) => l,
        (None, Some(n)) => TypeLabel::new(Family::B, n).map_err(|e| Failure::Usage(e.to_string()))?,
        (None, None) if prop == Property::Folding => TypeLabel::new(Family::B, 3).expect("valid"),
        (None, None) => return Err(Failure::Usage("give --type (or --rank for bc/oglg)".into())),
    };
    let mut cfg = ScanConfig::new(prop, label).jobs(scan.jobs.unwrap_or_else(exec::default_jobs));
    if let Some(s) = scan.samples {
        cfg = cfg.sampled(s, scan.seed);
    } else {
        cfg.seed = scan.seed;
    }
    cfg.max_length = scan.max_length;
    cfg.simple_only = scan.simple_only;
    cfg.fixtures = !scan.no_fixtures;
    if let (Some(t), Some(m)) = (scan.target, scan.map.as_deref()) {
        cfg = cfg.transport(t, m);
    }
    let mut report = run_scan(&cfg)?;
    if scan.no_timing {
        report = report.without_timing();
    }
    Ok(render_report(&report, json))
}

fn render_report(report: &ScanReport, json: bool) -> Output {
    let code = if report.passed() { EXIT_OK } else { EXIT_FINDING };
    let text = if json { to_json(report) } else { summarize(report) };
    Output { text, code }
}

fn summarize(r: &ScanReport) -> String {
    let mut head = format!(
        "{} on {}: {} cases, {} counterexamples ({})",
        r.property,
        r.config.label,
        r.cases,
        r.counterexamples.len(),
        if r.passed() { "pass" } else { "FINDINGS" },
    );
    if r.elapsed_ms > 0 {
        head.push_str(&format!(" in {} ms", r.elapsed_ms));
    }
    let mut lines = vec![head];
    for (k, v) in &r.stats {
        lines.push(format!("  {k}: {v}"));
    }
    for f in &r.fixtures {
        lines.push(format!(
            "  fixture {}: {} ({})",
            f.name,
            f.observed,
            if f.reproduced { "reproduced" } else { "NOT reproduced" }
        ));
    }
    for c in &r.counterexamples {
        let inputs: Vec<String> = c.inputs.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        lines.push(format!("  counterexample: {} [{}]", c.detail, inputs.join(", ")));
    }
    lines.join("\n")
}

fn info(label: TypeLabel, json: bool) -> Result<String, Failure> {
    let g = group(label)?;
    let rs = g.rs();
    let n = rs.rank();
    let cartan = rs.cartan().rows();
    let mut bonds = Vec::new();
    for (i, j) in (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))) {
        let (a, b) = (cartan[i][j], cartan[j][i]);
        if a != 0 {
            bonds.push((i + 1, j + 1, a * b, a, b));
        }
    }
    let glyph = label.glyph();
    let roots: Vec<String> = rs.positive_roots().iter().map(|r| Poly::from_linear(&r.to_linear_form()).to_text(glyph)).collect();
    if json {
        let bonds: Vec<_> = bonds
            .iter()
            .map(|&(i, j, m, a, b)| json!({"nodes": [i, j], "multiplicity": m, "a_ij": a, "a_ji": b}))
            .collect();
        return Ok(to_json(&json!({
            "type": label,
            "rank": n,
            "order": g.size(),
            "positive_roots": rs.positive_roots().len(),
            "longest_length": g.length(g.longest()),
            "cartan": cartan,
            "bonds": bonds,
            "roots": roots,
        })));
    }
    let mut lines = vec![
        format!("type {label}"),
        format!("rank {n}"),
        format!("|W| = {}", g.size()),
        format!("|Phi+| = {}", rs.positive_roots().len()),
        format!("longest element length {}", g.length(g.longest())),
        "cartan matrix:".to_string(),
    ];
    for row in &cartan {
        lines.push(format!("  {}", row.iter().map(|x| format!("{x:>2}")).collect::<Vec<_>>().join(" ")));
    }
    lines.push("bonds:".to_string());
    for (i, j, m, a, b) in bonds {
        lines.push(format!("  {i}-{j}: multiplicity {m} (A[{i}][{j}] = {a}, A[{j}][{i}] = {b})"));
    }
    lines.push(format!("positive roots: {}", roots.join(", ")));
    Ok(lines.join("\n"))
}
