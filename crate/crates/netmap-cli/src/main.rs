//! `netmap`: exact invariants of nearly Euclidean Thurston maps from
//! presentation diagrams.
//!
//! Exit codes: 0 success, 1 domain error (e.g. invalid presentation),
//! 2 an undecided rationality verdict, 64 usage errors.

mod svg;

use clap::{Parser, Subcommand};
use netmap_core::arith::{ExtRational, Slope};
use netmap_core::halfspace::{DecisionOptions, Verdict};
use netmap_core::hurwitz::RealizationStatus;
use netmap_core::int;
use netmap_core::presentation::Presentation;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "netmap",
    about = "Exact invariants of nearly Euclidean Thurston maps",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    /// Write JSON output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a presentation file.
    Validate { file: PathBuf },
    /// Degree, elementary divisors, structure set, portraits, deck group.
    Info { file: PathBuf },
    /// Pullback invariants (c, d, image, delta) of one slope.
    Slope { file: PathBuf, slope: String },
    /// Slope-function table over |p| ≤ max, 0 ≤ q ≤ max.
    Slopes {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        max: u32,
        /// Also write a scatter graph of the slope function.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Iterate the slope function from a seed slope.
    Orbit {
        file: PathBuf,
        slope: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Scan all slopes up to a height for cycles of the slope function.
    Attractor {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        height: u64,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Decide rationality via exclusion intervals.
    Decide {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        depth: u32,
        #[arg(long, default_value_t = 64)]
        ext_depth: u32,
        /// Disable the extended construction (plain half-spaces only).
        #[arg(long)]
        pure_only: bool,
        /// Write the certificate list to a JSON file.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Half-space exclusion intervals for all seeds up to a height.
    Halfspaces {
        file: PathBuf,
        #[arg(long, default_value_t = 25)]
        max: u32,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Image of the multiplier function with its classification flags.
    Delta { file: PathBuf },
    /// Are two structure sets (or presentations) equivalent?
    HsEqual { file1: PathBuf, file2: PathBuf },
    /// Enumerate impure classes with the given elementary divisors.
    Catalog {
        m: i64,
        n: i64,
        /// Write one presentation file per realized class into a directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Genus, cusps and covering degree of the correspondence curve.
    ModularCurve { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Successful --help/--version still flow through here.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> netmap_core::Result<Presentation> {
    let text = std::fs::read_to_string(path)?;
    netmap_core::parse_presentation(&text)
}

fn load_structure_set(path: &Path) -> netmap_core::Result<netmap_core::HurwitzStructureSet> {
    let text = std::fs::read_to_string(path)?;
    if text.lines().any(|l| l.trim_start().starts_with("divisors")) {
        netmap_core::HurwitzStructureSet::parse(&text)
    } else {
        let pres = netmap_core::parse_presentation(&text)?;
        netmap_core::presentation::hurwitz_structure_set(&pres)
    }
}

fn emit(cli: &Cli, value: &Value) -> netmap_core::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    match &cli.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn parse_slope(text: &str) -> netmap_core::Result<ExtRational> {
    text.parse()
}

fn run(cli: &Cli) -> netmap_core::Result<ExitCode> {
    match &cli.cmd {
        Cmd::Validate { file } => {
            let pres = load(file)?;
            let report = netmap_core::validate(&pres)?;
            let ok = report.valid;
            emit(cli, &serde_json::to_value(&report).unwrap())?;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Info { file } => {
            let pres = load(file)?;
            let report = netmap_core::validate(&pres)?;
            let (m, n) = netmap_core::elementary_divisors(&pres)?;
            let hs = netmap_core::presentation::hurwitz_structure_set(&pres)?;
            let portrait = netmap_core::portraits(&pres)?;
            let deck = netmap_core::deck_group_order(&pres)?;
            emit(
                cli,
                &json!({
                    "degree": report.degree,
                    "valid": report.valid,
                    "failures": report.failures,
                    "elementary_divisors": [m.to_string(), n.to_string()],
                    "structure_set": serde_json::to_value(&hs).unwrap(),
                    "euclidean": report.euclidean,
                    "virtual": pres.virtual_diagram,
                    "net_for_translations": report.net_for_translations,
                    "portrait": serde_json::to_value(&portrait).unwrap(),
                    "deck_group_order": deck,
                }),
            )?;
            Ok(if report.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Slope { file, slope } => {
            let pres = load(file)?;
            require_valid(&pres)?;
            let s = parse_slope(slope)?;
            let r = netmap_core::slope_invariants(&pres, &s)?;
            emit(
                cli,
                &json!({
                    "slope": s.to_string(),
                    "c": r.c,
                    "d": r.d,
                    "image": r.image.to_string(),
                    "delta": format!("{}/{}", r.delta.numer(), r.delta.denom()),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Slopes { file, max, svg } => {
            let pres = load(file)?;
            require_valid(&pres)?;
            let slopes = table_slopes(*max);
            let rows = netmap_core::parallel::map(&slopes, |s| {
                let r = netmap_core::slope_invariants(&pres, s)?;
                Ok((s.clone(), r))
            })?;
            if let Some(path) = svg {
                let pairs: Vec<(ExtRational, Slope)> = rows
                    .iter()
                    .map(|(s, r)| (s.clone(), r.image.clone()))
                    .collect();
                std::fs::write(path, svg::slope_graph(&pairs, *max))?;
            }
            let table: Vec<Value> = rows
                .iter()
                .map(|(s, r)| {
                    json!({
                        "slope": s.to_string(),
                        "c": r.c,
                        "d": r.d,
                        "image": r.image.to_string(),
                        "delta": format!("{}/{}", r.delta.numer(), r.delta.denom()),
                    })
                })
                .collect();
            emit(cli, &json!({ "max": max, "rows": table }))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Orbit { file, slope, cap } => {
            let pres = load(file)?;
            require_valid(&pres)?;
            let s = parse_slope(slope)?;
            let report = netmap_core::orbit(&pres, &s, cap.unwrap_or(200))?;
            emit(cli, &serde_json::to_value(&report).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Attractor { file, height, cap } => {
            let pres = load(file)?;
            require_valid(&pres)?;
            let cap = cap.unwrap_or((*height as usize) * 10);
            let report = netmap_core::attractor_scan(&pres, *height, cap)?;
            emit(cli, &serde_json::to_value(&report).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Decide {
            file,
            depth,
            ext_depth,
            pure_only,
            certificate,
        } => {
            let pres = load(file)?;
            require_valid(&pres)?;
            let options = DecisionOptions {
                farey_depth: *depth,
                extension_depth: if *pure_only { 0 } else { *ext_depth },
            };
            let decision = netmap_core::decide_rationality(&pres, &options)?;
            if let Some(path) = certificate {
                let certs = serde_json::to_value(&decision.certificates).unwrap();
                std::fs::write(path, serde_json::to_string_pretty(&certs).unwrap())?;
            }
            let verdict = decision.verdict.clone();
            emit(cli, &serde_json::to_value(&decision).unwrap())?;
            Ok(match verdict {
                Verdict::Undecided => ExitCode::from(2),
                _ => ExitCode::SUCCESS,
            })
        }
        Cmd::Halfspaces { file, max, svg } => {
            let pres = load(file)?;
            require_valid(&pres)?;
            let certs = halfspace_sweep(&pres, *max)?;
            if let Some(path) = svg {
                std::fs::write(path, svg::halfspace_plot(&certs, *max))?;
            }
            emit(cli, &serde_json::to_value(&certs).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Delta { file } => {
            let pres = load(file)?;
            require_valid(&pres)?;
            let image = netmap_core::multiplier_image(&pres)?;
            emit(cli, &serde_json::to_value(&image).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::HsEqual { file1, file2 } => {
            let h1 = load_structure_set(file1)?;
            let h2 = load_structure_set(file2)?;
            let eq = netmap_core::hs_equivalent(&h1, &h2);
            emit(
                cli,
                &json!({
                    "first": serde_json::to_value(&h1).unwrap(),
                    "second": serde_json::to_value(&h2).unwrap(),
                    "equivalent": eq,
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Catalog { m, n, out_dir } => {
            let classes = netmap_core::catalog(&int(*m), &int(*n))?;
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(dir)?;
                let mut k = 0usize;
                for class in &classes {
                    if let RealizationStatus::Realized { presentation } = &class.status {
                        k += 1;
                        let name = format!("{m}{n}HClass{k}.net");
                        std::fs::write(dir.join(name), presentation.to_file_string())?;
                    }
                }
            }
            emit(cli, &serde_json::to_value(&classes).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ModularCurve { file } => {
            let pres = load(file)?;
            require_valid(&pres)?;
            let inv = netmap_core::curve_invariants(&pres)?;
            emit(
                cli,
                &json!({
                    "index": inv.index,
                    "e2": inv.e2,
                    "e3": inv.e3,
                    "cusps": inv.cusps,
                    "genus": inv.genus,
                    "degY": inv.deg_y,
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn require_valid(pres: &Presentation) -> netmap_core::Result<()> {
    let report = netmap_core::validate(pres)?;
    if !report.valid {
        return Err(netmap_core::Error::InvalidPresentation(
            report.failures.join("; "),
        ));
    }
    Ok(())
}

/// Reduced slopes with |p| ≤ max and 0 ≤ q ≤ max, in display order.
fn table_slopes(max: u32) -> Vec<ExtRational> {
    let mut out = vec![ExtRational::infinity()];
    let m = max as i64;
    for q in 1..=m {
        for p in -m..=m {
            if num_integer::gcd(p, q) == 1 {
                out.push(netmap_core::reduce_slope(p, q).expect("q > 0"));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Half-space certificates over all usable seeds with |p|, |q| ≤ max.
fn halfspace_sweep(
    pres: &Presentation,
    max: u32,
) -> netmap_core::Result<Vec<netmap_core::ExclusionCertificate>> {
    let m = max as i64;
    let mut seeds = Vec::new();
    for q in 0..=m {
        for p in -m..=m {
            if (p, q) == (0, 0) || num_integer::gcd(p, q) != 1 {
                continue;
            }
            seeds.push(netmap_core::reduce_slope(p, q)?);
        }
    }
    seeds.sort();
    seeds.dedup();
    let results = netmap_core::parallel::map(&seeds, |s| {
        let r = netmap_core::slope_invariants(pres, s)?;
        Ok((s.clone(), r))
    })?;
    let mut certs = Vec::new();
    for (s, r) in results {
        let Slope::Rational(im) = &r.image else {
            continue;
        };
        if *im == s {
            continue;
        }
        let t = netmap_core::boundary_dictionary(&s);
        let ti = netmap_core::boundary_dictionary(im);
        let interval = netmap_core::excluded_interval(&t, &ti, &r.delta)?;
        certs.push(netmap_core::ExclusionCertificate {
            seed: s,
            image: r.image.clone(),
            delta: r.delta.clone(),
            interval,
            kind: netmap_core::ExclusionKind::HalfSpace,
        });
    }
    Ok(certs)
}
