//! Batch front-end: parse a config describing an n-valued map instance,
//! dispatch to the engines, and emit a machine-readable report.
//!
//! Exit codes: 0 success, 1 verification check failure, 2 config error,
//! 3 engine error.

mod config;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;

use nvfix_core::descriptor::{Payload, Surface};
use nvfix_core::geometry::{build_rp2_representative, CatalogMap, Rp2Class, SurfaceSpace};
use nvfix_core::nielsen::{
    classify_homotopy_count, nielsen_nonsplit, nielsen_split, single_map_nielsen, NielsenInput,
    SingleMapData,
};
use nvfix_core::numerics::{
    classify_rp2, degree_sphere_map, find_fixed_points_split, GridSpec,
};
use nvfix_core::torus::nielsen_torus_2valued;
use nvfix_core::verify::run_suite;

use config::{RawConfig, RawGrid, Task};
use report::{ClassificationSection, CoveringSection, NielsenSection, Report};

#[derive(Debug, Parser)]
#[command(
    name = "nvfix",
    version,
    about = "Nielsen numbers and fixed point data for n-valued maps on surfaces"
)]
struct Cli {
    /// TOML config describing the instance.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Task: classify | nielsen | scan | verify (overrides the config).
    #[arg(long)]
    task: Option<String>,
    /// Verification suite: group | torus | sphere | rp2 | all.
    #[arg(long)]
    suite: Option<String>,
    /// Grid resolution override (angular step).
    #[arg(long)]
    resolution: Option<f64>,
    /// Refinement depth override (decades below the grid scale).
    #[arg(long)]
    refine: Option<u32>,
    /// Cluster radius override.
    #[arg(long)]
    cluster_radius: Option<f64>,
    /// Seed for regular-value selection and randomized suites.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format.
    #[arg(long, default_value = "json")]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Json,
    Text,
}

enum AppError {
    Config(String),
    Engine(String),
}

fn config_err<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Config(e.to_string())
}

fn engine_err<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Engine(e.to_string())
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("NVFIX_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    let started = Instant::now();
    match run(&cli) {
        Ok((report, check_failure)) => {
            let rendered = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, rendered) {
                    eprintln!("cannot write report to {}: {e}", path.display());
                    return 3;
                }
            } else {
                print!("{rendered}");
            }
            eprintln!("completed in {:.2}s", started.elapsed().as_secs_f64());
            if check_failure {
                1
            } else {
                0
            }
        }
        Err(AppError::Config(msg)) => {
            eprintln!("config error: {msg}");
            2
        }
        Err(AppError::Engine(msg)) => {
            eprintln!("engine error: {msg}");
            3
        }
    }
}

fn run(cli: &Cli) -> Result<(Report, bool), AppError> {
    let mut raw = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))?;
            RawConfig::parse(&text).map_err(AppError::Config)?
        }
        None => RawConfig::default(),
    };
    if let Some(task) = &cli.task {
        raw.task = Some(match task.as_str() {
            "classify" => Task::Classify,
            "nielsen" => Task::Nielsen,
            "scan" => Task::Scan,
            "verify" => Task::Verify,
            other => return Err(AppError::Config(format!("unknown task {other:?}"))),
        });
    }
    if let Some(suite) = &cli.suite {
        raw.suite = Some(suite.clone());
    }
    if let Some(seed) = cli.seed {
        raw.seed = Some(seed);
    }
    if cli.resolution.is_some() || cli.refine.is_some() || cli.cluster_radius.is_some() {
        let grid = raw.grid.get_or_insert_with(RawGrid::default);
        if cli.resolution.is_some() {
            grid.resolution = cli.resolution;
        }
        if cli.refine.is_some() {
            grid.refinement_depth = cli.refine;
        }
        if cli.cluster_radius.is_some() {
            grid.cluster_radius = cli.cluster_radius;
        }
    }

    let task = raw
        .task
        .ok_or_else(|| AppError::Config("no task given (config `task` or --task)".into()))?;
    let seed = raw.seed.unwrap_or(0);
    let grid = raw.grid_spec().map_err(AppError::Config)?;

    let mut report = Report::new(raw.clone());
    let mut check_failure = false;
    match task {
        Task::Verify => {
            let name = raw
                .suite
                .clone()
                .ok_or_else(|| AppError::Config("verify needs a suite (--suite)".into()))?;
            let suite = run_suite(&name, seed).map_err(config_err)?;
            check_failure = !suite.passed;
            report.suite = Some(suite);
        }
        Task::Nielsen => task_nielsen(&raw, &grid, seed, &mut report)?,
        Task::Classify => task_classify(&raw, &grid, seed, &mut report)?,
        Task::Scan => task_scan(&raw, &grid, &mut report)?,
    }
    Ok((report, check_failure))
}

fn task_nielsen(
    raw: &RawConfig,
    grid: &GridSpec,
    seed: u64,
    report: &mut Report,
) -> Result<(), AppError> {
    let descriptor = raw.descriptor().map_err(AppError::Config)?;
    let analysis = descriptor.covering_analysis().map_err(engine_err)?;
    let split = analysis.index_h == 1;
    report.covering = Some(CoveringSection {
        split,
        analysis: analysis.clone(),
    });

    if split {
        let terms: Vec<u64> = match raw.nielsen.as_ref().and_then(|n| n.split_list.clone()) {
            Some(list) => {
                if list.len() != descriptor.n {
                    return Err(AppError::Config(format!(
                        "split_list has {} entries for n = {}",
                        list.len(),
                        descriptor.n
                    )));
                }
                list
            }
            None => split_terms(raw, &descriptor.surface, grid, seed)?,
        };
        let total = nielsen_split(&terms).map_err(engine_err)?;
        report.nielsen = Some(NielsenSection {
            formula_used: "split_additivity",
            terms,
            total,
            provenance: "formula",
            covering_lattice: None,
            coincidence_det: None,
            oracle_count: None,
            degenerate: None,
        });
        return Ok(());
    }

    if let Some(Payload::TorusLinear(payload)) = &descriptor.payload {
        let result = nielsen_torus_2valued(&descriptor.sigma, payload).map_err(engine_err)?;
        report.nielsen = Some(NielsenSection {
            formula_used: "double_cover_determinant",
            terms: vec![result.nielsen],
            total: result.nielsen,
            provenance: "formula+oracle",
            covering_lattice: Some(result.covering),
            coincidence_det: Some(result.coincidence_det),
            oracle_count: Some(result.oracle_count),
            degenerate: Some(result.degenerate),
        });
        return Ok(());
    }

    let per_pair = raw
        .nielsen
        .as_ref()
        .and_then(|n| n.per_pair.as_ref())
        .ok_or_else(|| {
            AppError::Config(
                "non-split instance needs [nielsen] per_pair values or a torus linear payload"
                    .into(),
            )
        })?;
    let mut parsed = std::collections::BTreeMap::new();
    for (key, value) in per_pair {
        let index: usize = key
            .parse()
            .map_err(|_| AppError::Config(format!("per_pair key {key:?} is not an index")))?;
        parsed.insert(index, *value);
    }
    let input = NielsenInput {
        analysis: analysis.clone(),
        per_pair: parsed,
    };
    let total = nielsen_nonsplit(&input).map_err(engine_err)?;
    let terms: Vec<u64> = analysis
        .representatives()
        .iter()
        .map(|rep| {
            input
                .per_pair
                .iter()
                .find_map(|(k, v)| (analysis.orbits.representative_of(*k) == Some(*rep)).then_some(*v))
                .expect("validated by nielsen_nonsplit")
        })
        .collect();
    report.nielsen = Some(NielsenSection {
        formula_used: "orbit_sum",
        terms,
        total,
        provenance: "formula",
        covering_lattice: None,
        coincidence_det: None,
        oracle_count: None,
        degenerate: None,
    });
    Ok(())
}

/// Per-coordinate Nielsen numbers of a split map, from the surface rules
/// and, on the sphere, from the computed degrees of the payload maps.
fn split_terms(
    raw: &RawConfig,
    surface: &Surface,
    grid: &GridSpec,
    seed: u64,
) -> Result<Vec<u64>, AppError> {
    let n = raw.multiplicity().map_err(AppError::Config)?;
    match surface {
        Surface::Disc => Ok(vec![1; n]),
        Surface::ProjectivePlane => Ok(vec![1; n]),
        Surface::Sphere => {
            let maps = raw
                .catalog_maps()
                .map_err(AppError::Config)?
                .ok_or_else(|| {
                    AppError::Config(
                        "split sphere instance needs payload maps or [nielsen] split_list".into(),
                    )
                })?;
            maps.iter()
                .map(|m| {
                    let degree = degree_sphere_map(m, grid, seed).map_err(engine_err)?;
                    single_map_nielsen(Surface::Sphere, &SingleMapData::SphereDegree(degree))
                        .map_err(engine_err)
                })
                .collect()
        }
        Surface::Torus => Err(AppError::Config(
            "split torus instance needs [nielsen] split_list".into(),
        )),
    }
}

fn task_classify(
    raw: &RawConfig,
    grid: &GridSpec,
    seed: u64,
    report: &mut Report,
) -> Result<(), AppError> {
    let surface = raw.surface().map_err(AppError::Config)?;
    let n = raw.multiplicity().map_err(AppError::Config)?;
    let homotopy = classify_homotopy_count(surface, n).map_err(engine_err)?;
    let mut section = ClassificationSection {
        homotopy_classes: Some(homotopy),
        two_valued_degree: None,
        detected_class: None,
        provenance: "formula",
    };
    let maps = if let Some(maps) = raw.catalog_maps().map_err(AppError::Config)? {
        Some(maps)
    } else if surface == Surface::ProjectivePlane {
        match raw.rp2_class().map_err(AppError::Config)? {
            Some(class) => {
                Some(build_rp2_representative(n, class, grid).map_err(engine_err)?)
            }
            None => None,
        }
    } else {
        None
    };
    if let Some(maps) = maps {
        match surface {
            Surface::Sphere if n == 2 && !maps.is_empty() => {
                let degree = degree_sphere_map(&maps[0], grid, seed).map_err(engine_err)?;
                section.two_valued_degree = Some(degree.unsigned_abs());
                section.provenance = "formula+scan";
            }
            Surface::ProjectivePlane => {
                let class = classify_rp2(&maps, grid, seed).map_err(engine_err)?;
                section.detected_class = Some(match class {
                    Rp2Class::Trivial => "trivial",
                    Rp2Class::NonTrivial => "non_trivial",
                });
                section.provenance = "formula+scan";
            }
            _ => {}
        }
    }
    report.classification = Some(section);
    Ok(())
}

fn task_scan(raw: &RawConfig, grid: &GridSpec, report: &mut Report) -> Result<(), AppError> {
    let surface = raw.surface().map_err(AppError::Config)?;
    let maps: Vec<CatalogMap> = match raw.catalog_maps().map_err(AppError::Config)? {
        Some(maps) => maps,
        None if surface == Surface::ProjectivePlane => {
            let class = raw
                .rp2_class()
                .map_err(AppError::Config)?
                .ok_or_else(|| {
                    AppError::Config("scan needs payload maps or a class to build".into())
                })?;
            let n = raw.multiplicity().map_err(AppError::Config)?;
            build_rp2_representative(n, class, grid).map_err(engine_err)?
        }
        None => {
            return Err(AppError::Config(
                "scan needs payload maps for this surface".into(),
            ))
        }
    };
    let expected_space = match surface {
        Surface::Sphere => SurfaceSpace::Sphere,
        Surface::ProjectivePlane => SurfaceSpace::Projective,
        other => {
            return Err(AppError::Config(format!(
                "scan is supported on the sphere and the projective plane, not {other}"
            )))
        }
    };
    for map in &maps {
        if map.domain() != expected_space {
            return Err(AppError::Config(format!(
                "map {} lives on {}, expected {}",
                map.id_string(),
                map.domain(),
                expected_space
            )));
        }
    }
    let scan = find_fixed_points_split(&maps, grid).map_err(engine_err)?;
    if surface == Surface::ProjectivePlane {
        let terms = vec![1u64; maps.len()];
        let total = nielsen_split(&terms).map_err(engine_err)?;
        report.nielsen = Some(NielsenSection {
            formula_used: "split_additivity",
            terms,
            total,
            provenance: "formula",
            covering_lattice: None,
            coincidence_det: None,
            oracle_count: None,
            degenerate: None,
        });
    }
    report.scan = Some(scan);
    Ok(())
}
