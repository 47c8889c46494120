//! `supconv`: command-line front end for the exact sup-convolution pipelines.
//!
//! Exit status is 0 when every check passes, 2 when an inequality or
//! certificate check fails, and 1 on usage or input errors.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use supconv_core::averageable::{build_maps, build_medial_example, verify_certificate, AverageabilityCertificate};
use supconv_core::cover::search_cover;
use supconv_core::harness::{emit_subdivision_svg, make_extremal, make_random, verify_theorem1, verify_theorem4, Tolerance};
use supconv_core::{
    classify_point, concave_envelope, constant_c, rational, subdivide, sup_convolve_n, sup_convolve_pair, BaryPoint,
    FunctionFile, Rational, SampledFunction,
};

use output::{Format, Table};

#[derive(Parser)]
#[command(name = "supconv", version, about = "Exact sup-convolution inequalities on simplices")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct ToleranceArgs {
    /// Relative slack, as a rational or decimal.
    #[arg(long, default_value = "1/20")]
    tol_rel: String,
    /// Absolute slack, as a rational or decimal.
    #[arg(long, default_value = "1/1000000000")]
    tol_abs: String,
}

impl ToleranceArgs {
    fn parse(&self) -> Result<Tolerance> {
        Ok(Tolerance { rel: rational::parse(&self.tol_rel)?, abs: rational::parse(&self.tol_abs)? })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sharp constants c_{k,n} in every closed form.
    Constants {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        /// Report every n up to this value.
        #[arg(long)]
        n_max: Option<u64>,
    },
    /// Cells of the hypersimplex subdivision of the simplex at scale 1/n.
    Subdivide {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        /// Also write the planar figure (k = 2) to this file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Locate a point in the subdivision.
    Classify {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        /// Comma-separated barycentric coordinates, e.g. 1/2,1/4,1/4.
        #[arg(long)]
        point: String,
    },
    /// Concave envelope of a function file.
    Envelope {
        #[arg(long)]
        input: PathBuf,
        /// Write the support certificates to this file.
        #[arg(long)]
        certificates: Option<PathBuf>,
    },
    /// n-fold sup-convolution, or the pair convolution with --pair.
    Supconv {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2, conflicts_with = "pair")]
        n: u32,
        #[arg(long)]
        pair: Option<PathBuf>,
    },
    /// Check the n-fold inequality on a function file.
    #[command(name = "verify-t1")]
    VerifyT1 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Check the pair inequality on two function files.
    #[command(name = "verify-t4")]
    VerifyT4 {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Build and verify an averageability certificate.
    Averageable {
        #[arg(long, required_unless_present = "medial")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "medial")]
        m: Option<usize>,
        /// The tetrahedron vertex-plus-medial-triangle example.
        #[arg(long, conflicts_with_all = ["k", "m"])]
        medial: bool,
    },
    /// Search for a covering family of good translates.
    Cover {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        max_level: u32,
        /// Extra offset depth allowed beyond the level grid.
        #[arg(long, default_value_t = 1)]
        max_refine: u32,
    },
    /// The vertex-indicator function: 0 at vertices, -1 elsewhere.
    Extremal {
        #[arg(long)]
        k: usize,
        #[arg(long = "resolution", visible_alias = "N")]
        resolution: u32,
    },
    /// Seeded random function, 0 at vertices and in [-1, 0] elsewhere.
    Random {
        #[arg(long)]
        k: usize,
        #[arg(long = "resolution", visible_alias = "N")]
        resolution: u32,
        /// Fraction of non-vertex points given a negative value.
        #[arg(long, default_value_t = 1.0)]
        roughness: f64,
    },
}

struct Emitted {
    json: Value,
    table: Table,
    passed: bool,
}

impl Emitted {
    fn ok(json: Value, table: Table) -> Self {
        Emitted { json, table, passed: true }
    }
}

fn read_function(path: &PathBuf) -> Result<FunctionFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    FunctionFile::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn function_output(f: &SampledFunction) -> Result<Emitted> {
    let file = FunctionFile::from_function(f)?;
    Ok(Emitted::ok(serde_json::to_value(&file)?, Table::function(&file)))
}

fn certificate_json(c: &AverageabilityCertificate) -> Value {
    let points = |ps: &[BaryPoint]| serde_json::to_value(ps).unwrap();
    let matrix = |m: &[Vec<Rational>]| -> Value { m.iter().map(|r| r.iter().map(rational::format).collect::<Vec<_>>()).collect() };
    json!({
        "k": c.k,
        "m": c.m,
        "target": c.target.description(),
        "jacobian": rational::format(&c.jacobian),
        "maps": c.maps.iter().map(|mp| json!({
            "pieces": mp.pieces.iter().map(|p| json!({
                "domain": points(p.domain.vertices()),
                "linear": matrix(&p.linear),
                "offset": p.offset.iter().map(rational::format).collect::<Vec<_>>(),
                "jacobian": rational::format(&p.jacobian()),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "image_pieces": c.image_pieces.iter().map(|s| json!({
            "vertices": points(s.vertices()),
            "relative_volume": rational::format(&s.relative_volume()),
        })).collect::<Vec<_>>(),
    })
}

fn run(cli: &Cli) -> Result<Emitted> {
    Ok(match &cli.command {
        Command::Constants { k, n, n_max } => {
            let last = n_max.unwrap_or(*n);
            if last < *n {
                bail!("--n-max must be at least --n");
            }
            let reports = (*n..=last).map(|m| constant_c(*k, m)).collect::<supconv_core::Result<Vec<_>>>()?;
            let table = Table::constants(&reports);
            let json = if reports.len() == 1 { serde_json::to_value(&reports[0])? } else { serde_json::to_value(&reports)? };
            Emitted::ok(json, table)
        }
        Command::Subdivide { k, n, svg } => {
            let cells = subdivide(*k, *n)?;
            if let Some(path) = svg {
                fs::write(path, emit_subdivision_svg(*k, *n)?).with_context(|| format!("writing {}", path.display()))?;
            }
            Emitted::ok(serde_json::to_value(&cells)?, Table::cells(&cells))
        }
        Command::Classify { k, n, point } => {
            let coords = point.split(',').map(|s| rational::parse(s.trim())).collect::<supconv_core::Result<Vec<_>>>()?;
            let c = classify_point(*k, *n, &BaryPoint::new(coords))?;
            let table = Table::single(
                &["m", "v", "boundary"],
                vec![c.m.to_string(), format!("{:?}", c.v.entries()), c.boundary.to_string()],
            );
            Emitted::ok(serde_json::to_value(&c)?, table)
        }
        Command::Envelope { input, certificates } => {
            let f = read_function(input)?.to_function()?;
            let env = concave_envelope(&f)?;
            if let Some(path) = certificates {
                let text = serde_json::to_string_pretty(&env.support_certificates)?;
                fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            function_output(&env.as_function(f.lattice())?)?
        }
        Command::Supconv { input, n, pair } => {
            let f = read_function(input)?.to_function()?;
            let out = match pair {
                Some(g) => sup_convolve_pair(&f, &read_function(g)?.to_function()?)?,
                None => sup_convolve_n(&f, *n)?,
            };
            function_output(&out)?
        }
        Command::VerifyT1 { input, n, tol } => {
            let report = verify_theorem1(&read_function(input)?, *n, &tol.parse()?, cli.seed)?;
            Emitted { json: serde_json::to_value(&report)?, table: Table::report(&report), passed: report.verdict.passed() }
        }
        Command::VerifyT4 { f, g, tol } => {
            let report = verify_theorem4(&read_function(f)?, &read_function(g)?, &tol.parse()?, cli.seed)?;
            Emitted { json: serde_json::to_value(&report)?, table: Table::report(&report), passed: report.verdict.passed() }
        }
        Command::Averageable { k, m, medial } => {
            let cert = if *medial { build_medial_example() } else { build_maps(k.unwrap(), m.unwrap())? };
            let report = verify_certificate(&cert);
            let json = json!({ "certificate": certificate_json(&cert), "report": report });
            Emitted { json, table: Table::checks(&report), passed: report.passed }
        }
        Command::Cover { k, n, max_level, max_refine } => {
            let search = search_cover(*k, *n, *max_level, *max_refine)?;
            let passed = search.certificate.is_some();
            Emitted { json: serde_json::to_value(&search)?, table: Table::cover(&search), passed }
        }
        Command::Extremal { k, resolution } => {
            let file = make_extremal(*k, *resolution)?;
            Emitted::ok(serde_json::to_value(&file)?, Table::function(&file))
        }
        Command::Random { k, resolution, roughness } => {
            let file = make_random(*k, *resolution, cli.seed.unwrap_or(0), *roughness)?;
            Emitted::ok(serde_json::to_value(&file)?, Table::function(&file))
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let result = run(&cli).and_then(|emitted| {
        output::write(&emitted.json, &emitted.table, format, cli.out.as_deref())?;
        Ok(emitted.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
