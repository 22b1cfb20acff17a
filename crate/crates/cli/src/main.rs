use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use essurf_core::crush::crush;
use essurf_core::cutter::cut_along;
use essurf_core::enumerate::{canonical_surface_vector, enumerate_admissible_rays, CanonicalSurface};
use essurf_core::fixtures;
use essurf_core::homology::{certificate_for, homology_profile_with};
use essurf_core::pipeline::{decide_auto, decide_closed, decide_ideal, PipelineConfig, PipelineError, PipelineReport, Verdict};
use essurf_core::qtheory::{assemble_with, ConeMode};
use essurf_core::tri_core::{compute_skeleton, decode_iso_sig, parse_gluings, write_gluings};
use essurf_core::Triangulation;
use serde::Serialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

#[derive(Parser, Debug)]
#[command(name = "essurf", version, about = "Closed essential surfaces in triangulated 3-manifolds")]
struct Cli {
    /// Worker threads for enumeration and incompressibility testing.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Seed for the random retriangulations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Give up after this many seconds of computation.
    #[arg(long, global = true)]
    timeout_secs: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Gluing-table file.
    file: Option<PathBuf>,
    /// Isomorphism signature instead of a file.
    #[arg(long)]
    isosig: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Q,
    Q0,
}

impl Mode {
    fn cone(self) -> ConeMode {
        match self {
            Mode::Q => ConeMode::ConeQ,
            Mode::Q0 => ConeMode::ConeQ0,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First homology profile and certificate as JSON.
    Homology {
        #[command(flatten)]
        input: Input,
    },
    /// Matching and boundary equations as a JSON matrix.
    Constraints {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Admissible extremal rays as JSON arrays.
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// One property row per admissible ray.
    Surfaces {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "q0")]
        mode: Mode,
    },
    /// Crush along the surface of one ray.
    Crush {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        surface: usize,
        #[arg(long, value_enum, default_value = "q0")]
        mode: Mode,
        /// Write the crushed triangulation here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cut along the surface of one ray and write the pieces.
    Cut {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        surface: usize,
        #[arg(long, value_enum, default_value = "q0")]
        mode: Mode,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Decide whether the manifold contains a closed essential surface.
    Haken {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "closed")]
        ideal: bool,
        #[arg(long)]
        closed: bool,
        /// Write the full report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Always enumerate surfaces, even when homology settles the answer.
        #[arg(long)]
        skip_homology: bool,
    },
    /// Run `haken` on every gluing table in a directory.
    HakenBatch {
        dir: PathBuf,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Bundled fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand, Debug)]
enum FixturesAction {
    /// Copy the bundled gluing tables into a directory, with the mini-census
    /// in its `census` subdirectory.
    Install {
        #[arg(default_value = "fixtures")]
        dir: PathBuf,
    },
}

fn load(input: &Input) -> Result<Triangulation> {
    match (&input.file, &input.isosig) {
        (Some(_), Some(_)) => bail!("give either a file or --isosig, not both"),
        (None, None) => bail!("no triangulation given (file or --isosig)"),
        (Some(path), None) => load_file(path),
        (None, Some(sig)) => decode_iso_sig(sig).with_context(|| format!("bad iso-sig {sig:?}")),
    }
}

fn load_file(path: &Path) -> Result<Triangulation> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_gluings(&text).with_context(|| format!("parsing {}", path.display()))
}

fn oriented(t: Triangulation) -> Result<Triangulation> {
    t.orient().context("triangulation is not orientable")
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string(v)?);
    Ok(())
}

fn surface_of(tri: &Triangulation, mode: Mode, index: usize) -> Result<(Arc<Triangulation>, CanonicalSurface)> {
    let tri = Arc::new(tri.clone());
    let skel = compute_skeleton(&tri);
    let rays = enumerate_admissible_rays(&assemble_with(&tri, &skel, mode.cone()));
    let Some(ray) = rays.rays.get(index) else {
        bail!("ray index {index} out of range ({} rays)", rays.len());
    };
    let s = canonical_surface_vector(&tri, ray).with_context(|| format!("ray {index}"))?;
    Ok((tri, s))
}

fn config(cli: &Cli, skip_homology: bool) -> PipelineConfig {
    let cancel = cli.timeout_secs.map(|secs| {
        let flag = Arc::new(AtomicBool::new(false));
        let f = flag.clone();
        std::thread::spawn(move || {
            std::thread::sleep(Duration::from_secs(secs));
            f.store(true, Ordering::Relaxed);
        });
        flag
    });
    PipelineConfig { seed: cli.seed, skip_homology, cancel, ..PipelineConfig::default() }
}

fn haken_report(tri: &Triangulation, ideal: bool, closed: bool, config: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    if ideal {
        decide_ideal(tri, config)
    } else if closed {
        decide_closed(tri, config)
    } else {
        decide_auto(tri, config)
    }
}

fn exit_for(verdict: Verdict) -> ExitCode {
    match verdict {
        Verdict::InconclusiveBoundaryParallel => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    }
}

#[derive(Serialize)]
struct BatchRow {
    name: String,
    tets: usize,
    verdict: String,
    candidates: usize,
    seconds: f64,
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Homology { input } => {
            let t = load(input)?;
            let skel = compute_skeleton(&t);
            let p = homology_profile_with(&t, &skel);
            let cert = certificate_for(&p, !skel.has_ideal_vertices());
            print_json(&json!({
                "b1": p.b1_manifold,
                "b1_boundary": p.b1_boundary,
                "torsion": serde_json::to_value(&p)?["torsion"],
                "certificate": cert,
            }))?;
        }
        Command::Constraints { input, mode } => {
            let t = oriented(load(input)?)?;
            let system = assemble_with(&t, &compute_skeleton(&t), mode.cone());
            print_json(&system.equations())?;
        }
        Command::Enumerate { input, mode } => {
            let t = oriented(load(input)?)?;
            let rays = enumerate_admissible_rays(&assemble_with(&t, &compute_skeleton(&t), mode.cone()));
            let v: Vec<&[i64]> = rays.rays.iter().map(|r| r.vector.coords.as_slice()).collect();
            print_json(&v)?;
        }
        Command::Surfaces { input, mode } => {
            let t = Arc::new(oriented(load(input)?)?);
            let rays = enumerate_admissible_rays(&assemble_with(&t, &compute_skeleton(&t), mode.cone()));
            for (i, ray) in rays.rays.iter().enumerate() {
                let row = match canonical_surface_vector(&t, ray) {
                    Ok(c) => {
                        let p = c.surface.properties();
                        json!({
                            "ray_index": i,
                            "chi": p.euler,
                            "genus": if p.component_count == 1 { json!(p.genus[0]) } else { json!(p.genus) },
                            "two_sided": p.two_sided,
                            "separating": p.separating,
                            "vertex_linking": p.vertex_linking,
                        })
                    }
                    Err(e) => json!({ "ray_index": i, "error": e.to_string() }),
                };
                print_json(&row)?;
            }
        }
        Command::Crush { input, surface, mode, out } => {
            let t = oriented(load(input)?)?;
            let (tri, s) = surface_of(&t, *mode, *surface)?;
            let outcome = crush(&tri, &s.surface)?;
            if let Some(path) = out {
                std::fs::write(path, write_gluings(&outcome.result))?;
            }
            print_json(&json!({
                "tets": outcome.result.tet_count(),
                "removed_tets": outcome.removed_tets,
                "component_boundary_profiles": outcome.component_boundary_profiles,
            }))?;
        }
        Command::Cut { input, surface, mode, out_dir } => {
            let t = oriented(load(input)?)?;
            let (tri, s) = surface_of(&t, *mode, *surface)?;
            let pieces = cut_along(&tri, &s.surface);
            std::fs::create_dir_all(out_dir)?;
            let mut summary = Vec::new();
            for (i, p) in pieces.iter().enumerate() {
                let path = out_dir.join(format!("piece{i}.tri"));
                std::fs::write(&path, write_gluings(&p.triangulation))?;
                let tags: Vec<_> = p.boundary_tags.iter().map(|(tag, genus)| json!({ "tag": tag, "genus": genus })).collect();
                let sidecar = json!({ "tets": p.triangulation.tet_count(), "boundary": tags });
                std::fs::write(out_dir.join(format!("piece{i}.tags.json")), serde_json::to_string_pretty(&sidecar)?)?;
                summary.push(json!({ "file": path, "tets": p.triangulation.tet_count() }));
            }
            print_json(&summary)?;
        }
        Command::Haken { input, ideal, closed, json, skip_homology } => {
            let t = oriented(load(input)?)?;
            let cfg = config(cli, *skip_homology);
            let report = haken_report(&t, *ideal, *closed, &cfg)?;
            if let Some(path) = json {
                std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
            }
            println!("{}", report.verdict.as_str());
            return Ok(exit_for(report.verdict));
        }
        Command::HakenBatch { dir, csv } => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
                .with_context(|| format!("reading {}", dir.display()))
                ?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "tri"))
                .collect();
            files.sort();
            let mut w = csv::Writer::from_path(csv)?;
            for path in files {
                let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let t = load_file(&path)?;
                let start = Instant::now();
                let (verdict, candidates) = match t.orient() {
                    Err(_) => ("NonOrientable".to_string(), 0),
                    Ok(t) => match decide_auto(&t, &config(cli, false)) {
                        Ok(r) => (r.verdict.as_str().to_string(), r.candidates_total),
                        Err(PipelineError::Cancelled) => ("Timeout".to_string(), 0),
                        Err(e) => (format!("Error: {e}"), 0),
                    },
                };
                let row = BatchRow { name, tets: t.tet_count(), verdict, candidates, seconds: start.elapsed().as_secs_f64() };
                eprintln!("{} {} {}", row.name, row.verdict, row.seconds);
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Command::Fixtures { action: FixturesAction::Install { dir } } => {
            let census = dir.join("census");
            std::fs::create_dir_all(&census)?;
            for (name, text) in fixtures::BUNDLED {
                std::fs::write(dir.join(format!("{name}.tri")), text)?;
                if fixtures::MINI_CENSUS.contains(name) {
                    std::fs::write(census.join(format!("{name}.tri")), text)?;
                }
            }
            println!("{} fixtures written to {}, mini-census in {}", fixtures::BUNDLED.len(), dir.display(), census.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs as usize).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
