//! Subcommand implementations.
//!
//! Exit codes separate four outcomes: 0 for success, 1 for a polygon that
//! fails the solvability criteria, 2 for bad or malformed input, 3 for a
//! construction or numeric failure. Output bytes depend only on the
//! configuration, never on the environment, so identical invocations write
//! identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};

use horograph::conjugate::{boundary_flatness, conjugate_height, ConjugateDiagnostics};
use horograph::domain::{
    build_countable, build_finite, polygon_from_json, polygon_to_json, CountableParams,
    DomainError, EdgeLabel, EndKind, FiniteParams, Polygon, VertexKind,
};
use horograph::export::{write_obj, ObjOptions};
use horograph::flux::{edge_span, edge_subarc_flux, normalized_gradient};
use horograph::geom::IdealPoint;
use horograph::jenkins::truncated::oracle;
use horograph::jenkins::{self, JsReport};
use horograph::mesh::{Locator, Mesh, MeshParams};
use horograph::solve::{solve, Elements, Solution, SolveError, SolveParams};

use crate::config::{config_hash, stamp, tool};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn numeric(message: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

/// Parameter and format errors are the caller's fault; everything else is a
/// failure of the construction itself.
fn domain_failure(err: DomainError) -> Failure {
    match &err {
        DomainError::BadParams(_)
        | DomainError::BadAnchors
        | DomainError::InvalidLimits
        | DomainError::InvalidSeeds { .. }
        | DomainError::BadJson(_)
        | DomainError::BadShape
        | DomainError::NotAlternating(_) => Failure::input(err.to_string()),
        _ => Failure::numeric(err.to_string()),
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .map_err(|e| Failure::numeric(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    fs::write(path, bytes)
        .map_err(|e| Failure::numeric(format!("cannot write {}: {e}", path.display())))
}

fn write_json(path: &Path, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("report encodes as JSON");
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn label_name(label: EdgeLabel) -> &'static str {
    match label {
        EdgeLabel::A => "A",
        EdgeLabel::B => "B",
    }
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

/// Mesh and solver knobs shared by the solving commands.
#[derive(Args, Serialize)]
pub struct NumericArgs {
    /// Mesh step in hyperbolic length.
    #[arg(long, default_value_t = 0.1)]
    pub h: f64,
    /// Cap placement below the alignment levels.
    #[arg(long, default_value_t = 3.0)]
    pub depth: f64,
    /// Newton stopping tolerance on the free gradient.
    #[arg(long, default_value_t = 1e-11)]
    pub newton_tol: f64,
    /// Newton iteration budget.
    #[arg(long, default_value_t = 50)]
    pub max_newton: usize,
}

impl NumericArgs {
    fn mesh_params(&self) -> MeshParams {
        MeshParams::new(self.h).with_depth(self.depth)
    }

    fn solve_params(&self) -> SolveParams {
        SolveParams {
            newton_tol: self.newton_tol,
            max_newton: self.max_newton,
            ..SolveParams::default()
        }
    }
}

fn build_mesh(poly: &Polygon, params: &MeshParams) -> Result<Mesh, Failure> {
    Mesh::build(poly, params).map_err(|e| Failure::numeric(format!("meshing failed: {e}")))
}

/// Solve on the capped truncation; a stalled Newton run dumps its energy
/// trace before failing.
fn run_solve(mesh: &Mesh, cap: f64, params: &SolveParams) -> Result<Solution, Failure> {
    match solve(mesh, &mesh.dirichlet(cap), params) {
        Ok(sol) => Ok(sol),
        Err(SolveError::NoConvergence {
            iterations,
            grad_norm,
            energies,
        }) => {
            eprintln!("newton stalled after {iterations} iterations, gradient norm {grad_norm:e}");
            eprintln!("energy after each accepted step:");
            for (k, e) in energies.iter().enumerate() {
                eprintln!("  {k} {e:.17e}");
            }
            Err(Failure::numeric("solver did not converge"))
        }
        Err(e) => Err(Failure::numeric(format!("solver failed: {e}"))),
    }
}

#[derive(Args)]
pub struct ConstructArgs {
    /// Number of blocks.
    #[arg(long, default_value_t = 1)]
    pub m0: usize,
    /// End at each anchor: left, right or two-sided. A single value repeats
    /// for every anchor; the first anchor sits at infinity.
    #[arg(long, value_delimiter = ',', default_value = "two-sided")]
    pub ends: Vec<String>,
    /// Finite anchor abscissae, strictly increasing, one per block boundary
    /// after the first. Defaults to a centered row of spacing 3.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub anchors: Option<Vec<f64>>,
    /// Extension depth; 1 keeps the seed polygon.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Interpolation weight inside the choice intervals.
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    /// Keep the end at the first anchor from governing the far side of the
    /// last block.
    #[arg(long)]
    pub no_wrap: bool,
    /// Build an element of the countable family instead.
    #[arg(long)]
    pub countable: bool,
    /// Second anchor abscissa of the countable family.
    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    pub x2: f64,
    /// Third anchor abscissa of the countable family.
    #[arg(long, default_value_t = 0.5)]
    pub x3: f64,
    /// Interpolation weight generating the remaining anchors.
    #[arg(long, default_value_t = 0.5)]
    pub lambda_inf: f64,
    /// Geometric tolerance for validation.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Polygon JSON output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional plain text report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn parse_end(s: &str) -> Result<EndKind, Failure> {
    match s {
        "left" => Ok(EndKind::Left),
        "right" => Ok(EndKind::Right),
        "two-sided" | "two_sided" => Ok(EndKind::TwoSided),
        other => Err(Failure::input(format!("unknown end kind {other:?}"))),
    }
}

fn resolve_ends(spec: &[String], m0: usize) -> Result<Vec<EndKind>, Failure> {
    let kinds: Vec<EndKind> = spec.iter().map(|s| parse_end(s)).collect::<Result<_, _>>()?;
    if kinds.len() == 1 {
        Ok(vec![kinds[0]; m0])
    } else if kinds.len() == m0 {
        Ok(kinds)
    } else {
        Err(Failure::input(format!(
            "expected 1 or {m0} end kinds, got {}",
            kinds.len()
        )))
    }
}

pub fn construct(args: &ConstructArgs) -> Result<ExitCode, Failure> {
    let (poly, config) = if args.countable {
        let params = CountableParams {
            x2: args.x2,
            x3: args.x3,
            lambda_inf: args.lambda_inf,
            lambda: args.lambda,
            tol: args.tol,
        };
        let poly = build_countable(&params, args.k).map_err(domain_failure)?;
        let config = json!({
            "command": "construct",
            "family": "countable",
            "k": args.k,
            "params": params,
        });
        (poly, config)
    } else {
        if args.m0 == 0 {
            return Err(Failure::input("m0 must be at least 1"));
        }
        let ends = resolve_ends(&args.ends, args.m0)?;
        let anchors = match &args.anchors {
            Some(a) => a.clone(),
            None => (1..args.m0)
                .map(|i| 3.0 * (i as f64 - args.m0 as f64 / 2.0))
                .collect(),
        };
        let params = FiniteParams {
            anchors,
            ends,
            seeds: vec![None; args.m0],
            depth: args.k,
            lambda: args.lambda,
            wrap: !args.no_wrap,
            tol: args.tol,
        };
        let poly = build_finite(&params).map_err(domain_failure)?;
        let config = json!({
            "command": "construct",
            "family": "finite",
            "params": params,
        });
        (poly, config)
    };
    let hash = config_hash(&config);
    let report = jenkins::check(&poly, args.tol);
    let meta = json!({ "config": hash, "tool": tool() });
    write_json(&args.out, &polygon_to_json(&poly, meta))?;
    if let Some(path) = &args.report {
        write_file(path, construct_report(&poly, &report, &hash).as_bytes())?;
    }
    println!(
        "{} vertices, {} ideal, solvable {}: wrote {}",
        poly.len(),
        poly.ideal_indices().count(),
        report.is_js,
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn construct_report(poly: &Polygon, report: &JsReport, hash: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", stamp(hash));
    let _ = writeln!(out, "vertices ({}):", poly.len());
    for (i, v) in poly.vertices().iter().enumerate() {
        let tag = v.tag.to_string();
        match v.kind {
            VertexKind::Ideal(IdealPoint::Finite(x)) => {
                let _ = writeln!(out, "  {i:3} {tag:12} ideal    x = {x}");
            }
            VertexKind::Ideal(IdealPoint::Infinity) => {
                let _ = writeln!(out, "  {i:3} {tag:12} ideal    x = inf");
            }
            VertexKind::Interior(p) => {
                let _ = writeln!(out, "  {i:3} {tag:12} interior ({}, {})", p.x, p.y);
            }
        }
    }
    let labels: Vec<&str> = poly.labels().iter().map(|&l| label_name(l)).collect();
    let _ = writeln!(out, "edges: {}", labels.join(" "));
    let _ = writeln!(
        out,
        "alignment: max residual {:e} ({})",
        report.star.max_residual,
        pass_word(report.star.pass)
    );
    match report.car.witness {
        Some((c, i)) => {
            let _ = writeln!(
                out,
                "clearance: margin {:.6} between corner {c} and ideal vertex {i} ({})",
                report.car.margin,
                pass_word(report.car.pass)
            );
        }
        None => {
            let _ = writeln!(
                out,
                "clearance: no admissible pair ({})",
                pass_word(report.car.pass)
            );
        }
    }
    let _ = writeln!(out, "solvable: {}", report.is_js);
    out
}

#[derive(Args)]
pub struct CheckArgs {
    /// Polygon JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Truncation depths for the finite boundary comparison.
    #[arg(long, value_delimiter = ',', default_values_t = vec![5.0, 10.0])]
    pub depths: Vec<f64>,
    /// Comparison tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Optional JSON report path.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

pub fn check(args: &CheckArgs) -> Result<ExitCode, Failure> {
    let value = read_json(&args.input)?;
    let poly = polygon_from_json(&value).map_err(domain_failure)?;
    let config = json!({
        "command": "check",
        "polygon": value,
        "depths": args.depths,
        "tol": args.tol,
    });
    let hash = config_hash(&config);
    let report = jenkins::check(&poly, args.tol);
    let truncated = if poly.len() <= 12 {
        Some(oracle(&poly, &args.depths, args.tol).map_err(|e| Failure::numeric(e.to_string()))?)
    } else {
        None
    };

    println!(
        "alignment: max residual {:e} ({})",
        report.star.max_residual,
        pass_word(report.star.pass)
    );
    match report.car.witness {
        Some((c, i)) => println!(
            "clearance: margin {:.6} between corner {c} and ideal vertex {i} ({})",
            report.car.margin,
            pass_word(report.car.pass)
        ),
        None => println!(
            "clearance: no admissible pair ({})",
            pass_word(report.car.pass)
        ),
    }
    match &truncated {
        Some(t) => {
            match &t.witness {
                Some((subset, depth)) => println!(
                    "truncated inequalities: worst slack {:.6} for subset {subset:?} at depth {depth} (disjoint past {:.3}, {})",
                    t.worst_slack,
                    t.n0,
                    if t.holds { "hold" } else { "FAIL" }
                ),
                None => println!(
                    "truncated inequalities: no inscribed polygon to test ({})",
                    if t.holds { "hold" } else { "FAIL" }
                ),
            }
            if report.car.pass != t.holds {
                println!(
                    "warning: clearance and truncated verdicts disagree ({} vs {})",
                    report.car.pass, t.holds
                );
            }
        }
        None => println!(
            "truncated inequalities: skipped, {} vertices is past the enumeration limit",
            poly.len()
        ),
    }

    if let Some(path) = &args.json_out {
        let out = json!({
            "config": hash,
            "tool": tool(),
            "alignment": {
                "residuals": report.star.residuals,
                "max_residual": report.star.max_residual,
                "pass": report.star.pass,
            },
            "clearance": {
                "margin": report.car.margin,
                "witness": report.car.witness,
                "pass": report.car.pass,
            },
            "truncated": truncated.as_ref().map(|t| json!({
                "depths": args.depths,
                "n0": t.n0,
                "worst_slack": t.worst_slack,
                "witness": t.witness,
                "holds": t.holds,
            })),
            "solvable": report.is_js,
        });
        write_json(path, &out)?;
    }

    if report.is_js {
        println!("verdict: solvable");
        Ok(ExitCode::SUCCESS)
    } else {
        if !report.star.pass {
            if let Some((i, r)) = report
                .star
                .residuals
                .iter()
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            {
                println!("witness: ideal vertex {i} misaligned by {r:e}");
            }
        }
        if !report.car.pass {
            if let Some((c, i)) = report.car.witness {
                println!(
                    "witness: corner {c} against ideal vertex {i}, clearance {:.6}",
                    report.car.margin
                );
            }
        }
        println!("verdict: not solvable");
        Ok(ExitCode::from(1))
    }
}

#[derive(Args)]
pub struct SolveArgs {
    /// Polygon JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory receiving solution.json, diagnostics.json, graph.obj,
    /// double.obj and edge_flux.csv.
    #[arg(long)]
    pub outdir: PathBuf,
    /// Boundary height on the A edges; B edges get the negative.
    #[arg(long, default_value_t = 4.0)]
    pub cap: f64,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

pub fn solve_graph(args: &SolveArgs) -> Result<ExitCode, Failure> {
    let value = read_json(&args.input)?;
    let poly = polygon_from_json(&value).map_err(domain_failure)?;
    let config = json!({
        "command": "solve",
        "polygon": value,
        "cap": args.cap,
        "numeric": &args.numeric,
    });
    let hash = config_hash(&config);

    let mesh = build_mesh(&poly, &args.numeric.mesh_params())?;
    let sol = run_solve(&mesh, args.cap, &args.numeric.solve_params())?;
    let el = Elements::new(&mesh);
    let grads = normalized_gradient(&el, &mesh, &sol.u);
    let loc = Locator::new(&mesh);
    let diag = conjugate_height(&mesh, &sol.u, 0).map_err(|e| Failure::numeric(e.to_string()))?;

    let solution = json!({
        "config": hash,
        "tool": tool(),
        "polygon": polygon_to_json(&poly, Value::Null),
        "h": args.numeric.h,
        "depth": args.numeric.depth,
        "cap": args.cap,
        "newton_tol": args.numeric.newton_tol,
        "max_newton": args.numeric.max_newton,
        "vertices": mesh.points.len(),
        "triangles": mesh.triangles.len(),
        "energy": sol.energy,
        "grad_norm": sol.grad_norm,
        "newton_iterations": sol.newton_iterations,
        "u": sol.u,
    });
    write_json(&args.outdir.join("solution.json"), &solution)?;
    write_json(
        &args.outdir.join("diagnostics.json"),
        &diagnostics_json(&hash, &mesh, &sol, &diag),
    )?;

    let comments = vec![stamp(&hash)];
    let mut obj = Vec::new();
    let opts = ObjOptions {
        comments: &comments,
        ..Default::default()
    };
    write_obj(&mut obj, &mesh, &sol.u, &opts)
        .map_err(|e| Failure::numeric(format!("obj encoding failed: {e}")))?;
    write_file(&args.outdir.join("graph.obj"), &obj)?;
    let mut doubled = Vec::new();
    let opts = ObjOptions {
        mirror: true,
        comments: &comments,
        ..Default::default()
    };
    write_obj(&mut doubled, &mesh, &sol.u, &opts)
        .map_err(|e| Failure::numeric(format!("obj encoding failed: {e}")))?;
    write_file(&args.outdir.join("double.obj"), &doubled)?;

    let mut csv = String::new();
    let _ = writeln!(csv, "# {}", stamp(&hash));
    let _ = writeln!(csv, "edge,label,flux,arc_length,ratio");
    for e in 0..poly.len() {
        let (lo, hi) = edge_span(&poly, &mesh, e);
        if !(lo.is_finite() && hi.is_finite()) {
            continue;
        }
        let f = edge_subarc_flux(&poly, &mesh, &loc, &grads, e, lo, hi)
            .map_err(|err| Failure::numeric(format!("flux on edge {e}: {err}")))?;
        let _ = writeln!(
            csv,
            "{e},{},{},{},{}",
            label_name(poly.labels()[e]),
            f.value,
            f.hyp_length,
            f.value / f.hyp_length
        );
    }
    write_file(&args.outdir.join("edge_flux.csv"), csv.as_bytes())?;

    println!(
        "{} vertices, {} newton steps, energy {:.12}, gradient {:e}: wrote {}",
        mesh.points.len(),
        sol.newton_iterations,
        sol.energy,
        sol.grad_norm,
        args.outdir.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn diagnostics_json(hash: &str, mesh: &Mesh, sol: &Solution, diag: &ConjugateDiagnostics) -> Value {
    let nu_min = diag.nu.iter().cloned().fold(f64::INFINITY, f64::min);
    let nu_max = diag.nu.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    json!({
        "config": hash,
        "tool": tool(),
        "energy": sol.energy,
        "grad_norm": sol.grad_norm,
        "newton_iterations": sol.newton_iterations,
        "nu_min": nu_min,
        "nu_max": nu_max,
        "loop_defect": diag.loop_defect,
        "mesh_diameter": mesh.diameter(),
        "boundary_variation": diag.boundary_variation,
    })
}

#[derive(Args)]
pub struct SweepArgs {
    /// Polygon JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Cap heights to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2.0, 4.0, 8.0])]
    pub caps: Vec<f64>,
    /// Edge address label:block:ordinal, counting edges of that label with
    /// corner in that block, in cycle order.
    #[arg(long, default_value = "A:1:0")]
    pub edge: String,
    /// Fractional window of the edge span to integrate over.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 1.0])]
    pub window: Vec<f64>,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

fn parse_edge_addr(s: &str) -> Result<(EdgeLabel, usize, usize), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::input(
            "edge address is label:block:ordinal, like A:1:0",
        ));
    }
    let label = match parts[0] {
        "A" | "a" => EdgeLabel::A,
        "B" | "b" => EdgeLabel::B,
        other => return Err(Failure::input(format!("unknown edge label {other:?}"))),
    };
    let block = parts[1]
        .parse()
        .map_err(|_| Failure::input("edge block must be an integer"))?;
    let ordinal = parts[2]
        .parse()
        .map_err(|_| Failure::input("edge ordinal must be an integer"))?;
    Ok((label, block, ordinal))
}

pub fn sweep(args: &SweepArgs) -> Result<ExitCode, Failure> {
    let value = read_json(&args.input)?;
    let poly = polygon_from_json(&value).map_err(domain_failure)?;
    let (label, block, ordinal) = parse_edge_addr(&args.edge)?;
    let edge = poly
        .find_edge(label, block, ordinal)
        .ok_or_else(|| Failure::input(format!("no edge at {}", args.edge)))?;
    if args.window.len() != 2
        || !(0.0..=1.0).contains(&args.window[0])
        || !(0.0..=1.0).contains(&args.window[1])
        || args.window[0] >= args.window[1]
    {
        return Err(Failure::input(
            "window must be two increasing fractions in [0, 1]",
        ));
    }
    if args.caps.is_empty() {
        return Err(Failure::input("at least one cap height"));
    }
    let config = json!({
        "command": "sweep",
        "polygon": value,
        "caps": args.caps,
        "edge": args.edge,
        "window": args.window,
        "numeric": &args.numeric,
    });
    let hash = config_hash(&config);

    let mesh = build_mesh(&poly, &args.numeric.mesh_params())?;
    let el = Elements::new(&mesh);
    let loc = Locator::new(&mesh);
    let (lo, hi) = edge_span(&poly, &mesh, edge);
    let wlo = lo + args.window[0] * (hi - lo);
    let whi = lo + args.window[1] * (hi - lo);

    let mut csv = String::new();
    let _ = writeln!(csv, "# {}", stamp(&hash));
    let _ = writeln!(csv, "cap,flux,arc_length,ratio");
    for &cap in &args.caps {
        let sol = run_solve(&mesh, cap, &args.numeric.solve_params())?;
        let grads = normalized_gradient(&el, &mesh, &sol.u);
        let f = edge_subarc_flux(&poly, &mesh, &loc, &grads, edge, wlo, whi)
            .map_err(|err| Failure::numeric(format!("flux on edge {edge}: {err}")))?;
        let ratio = f.value / f.hyp_length;
        let _ = writeln!(csv, "{cap},{},{},{ratio}", f.value, f.hyp_length);
        println!(
            "cap {cap}: flux {:.6} over length {:.6}, ratio {ratio:.6}",
            f.value, f.hyp_length
        );
    }
    write_file(&args.out, csv.as_bytes())?;
    println!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
pub struct ConjugateArgs {
    /// Polygon JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory receiving conjugate.json and flatness.csv.
    #[arg(long)]
    pub outdir: PathBuf,
    /// Boundary height on the A edges; B edges get the negative.
    #[arg(long, default_value_t = 4.0)]
    pub cap: f64,
    /// Also write hstar.obj, the graph colored by conjugate height.
    #[arg(long)]
    pub obj: bool,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

pub fn conjugate(args: &ConjugateArgs) -> Result<ExitCode, Failure> {
    let value = read_json(&args.input)?;
    let poly = polygon_from_json(&value).map_err(domain_failure)?;
    let config = json!({
        "command": "conjugate",
        "polygon": value,
        "cap": args.cap,
        "numeric": &args.numeric,
    });
    let hash = config_hash(&config);

    let mesh = build_mesh(&poly, &args.numeric.mesh_params())?;
    let sol = run_solve(&mesh, args.cap, &args.numeric.solve_params())?;
    let diag = conjugate_height(&mesh, &sol.u, 0).map_err(|e| Failure::numeric(e.to_string()))?;
    let flat = boundary_flatness(&mesh, &diag);

    let nu_min = diag.nu.iter().cloned().fold(f64::INFINITY, f64::min);
    let nu_max = diag.nu.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let h_min = diag.h_star.iter().cloned().fold(f64::INFINITY, f64::min);
    let h_max = diag.h_star.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let worst = flat
        .iter()
        .map(|a| a.normalized)
        .fold(f64::NEG_INFINITY, f64::max);
    let out = json!({
        "config": hash,
        "tool": tool(),
        "energy": sol.energy,
        "newton_iterations": sol.newton_iterations,
        "loop_defect": diag.loop_defect,
        "mesh_diameter": mesh.diameter(),
        "nu_min": nu_min,
        "nu_max": nu_max,
        "h_star_min": h_min,
        "h_star_max": h_max,
        "boundary_variation": diag.boundary_variation,
        "worst_corner_flatness": worst,
    });
    write_json(&args.outdir.join("conjugate.json"), &out)?;

    let mut csv = String::new();
    let _ = writeln!(csv, "# {}", stamp(&hash));
    let _ = writeln!(csv, "corner,count,variation,scale,normalized");
    for a in &flat {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            a.corner, a.count, a.variation, a.scale, a.normalized
        );
    }
    write_file(&args.outdir.join("flatness.csv"), csv.as_bytes())?;

    if args.obj {
        let comments = vec![stamp(&hash)];
        let opts = ObjOptions {
            color: Some(&diag.h_star),
            comments: &comments,
            ..Default::default()
        };
        let mut obj = Vec::new();
        write_obj(&mut obj, &mesh, &sol.u, &opts)
            .map_err(|e| Failure::numeric(format!("obj encoding failed: {e}")))?;
        write_file(&args.outdir.join("hstar.obj"), &obj)?;
    }

    println!(
        "loop defect {:e} over diameter {:.3}, worst corner flatness {:.3}: wrote {}",
        diag.loop_defect,
        mesh.diameter(),
        worst,
        args.outdir.display()
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
pub struct ExportArgs {
    /// solution.json produced by solve.
    #[arg(long)]
    pub input: PathBuf,
    /// Output stem; writes <stem>.obj and <stem>_double.obj.
    #[arg(long)]
    pub stem: PathBuf,
    /// Map the horizontal coordinates through the disk model.
    #[arg(long)]
    pub disk: bool,
    /// Color vertices by height.
    #[arg(long)]
    pub color: bool,
}

fn field_f64(value: &Value, key: &str) -> Result<f64, Failure> {
    value
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| Failure::input(format!("solution lacks a numeric {key:?} field")))
}

pub fn export(args: &ExportArgs) -> Result<ExitCode, Failure> {
    let value = read_json(&args.input)?;
    let poly_value = value
        .get("polygon")
        .ok_or_else(|| Failure::input("solution has no polygon"))?;
    let poly = polygon_from_json(poly_value).map_err(domain_failure)?;
    let h = field_f64(&value, "h")?;
    let depth = field_f64(&value, "depth")?;
    let u: Vec<f64> = value
        .get("u")
        .and_then(Value::as_array)
        .ok_or_else(|| Failure::input("solution has no value array"))?
        .iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| Failure::input("non numeric entry in the value array"))
        })
        .collect::<Result<_, _>>()?;
    let config = json!({
        "command": "export",
        "solution": value,
        "disk": args.disk,
        "color": args.color,
    });
    let hash = config_hash(&config);

    let mesh = build_mesh(&poly, &MeshParams::new(h).with_depth(depth))?;
    if u.len() != mesh.points.len() {
        return Err(Failure::input(format!(
            "solution carries {} values for a mesh with {} vertices",
            u.len(),
            mesh.points.len()
        )));
    }

    let name = args
        .stem
        .file_name()
        .ok_or_else(|| Failure::input("stem needs a file name"))?
        .to_string_lossy()
        .into_owned();
    let comments = vec![stamp(&hash)];
    let color = args.color.then(|| u.clone());
    let single_opts = ObjOptions {
        disk: args.disk,
        color: color.as_deref(),
        comments: &comments,
        ..Default::default()
    };
    let mut obj = Vec::new();
    write_obj(&mut obj, &mesh, &u, &single_opts)
        .map_err(|e| Failure::numeric(format!("obj encoding failed: {e}")))?;
    let single = args.stem.with_extension("obj");
    write_file(&single, &obj)?;

    let double_opts = ObjOptions {
        mirror: true,
        ..single_opts
    };
    let mut doubled = Vec::new();
    write_obj(&mut doubled, &mesh, &u, &double_opts)
        .map_err(|e| Failure::numeric(format!("obj encoding failed: {e}")))?;
    let double = args.stem.with_file_name(format!("{name}_double.obj"));
    write_file(&double, &doubled)?;

    println!("wrote {} and {}", single.display(), double.display());
    Ok(ExitCode::SUCCESS)
}
