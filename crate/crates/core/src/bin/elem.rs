use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use symcurl::analysis::{
    conformity_study, convergence_study, info_table, lemma_suite, nonconformity_witness,
    unisolvence_study, unit_cube, ConvergenceReport, DefectReport, FieldSpec,
};
use symcurl::element::expected_dof_count;
use symcurl::mesh::{load_mesh, OrientedMesh};
use symcurl::polyspace::CellKind;
use symcurl::space::{save_fef, GlobalSpace};

#[derive(Parser)]
#[command(name = "elem", version, about = "H(sym Curl) finite element verification tool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local DOF table of one cell
    Info {
        #[arg(long, value_parser = parse_cell)]
        cell: CellKind,
        #[arg(long)]
        k: usize,
    },
    /// Nodal basis conditioning on random cells
    Unisolvence {
        #[arg(long, value_parser = parse_cell)]
        cell: CellKind,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Null-space audits of the pointwise condition sets
    Lemmas {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        draws: usize,
        /// Random normals for the sym / dev-sym kernel comparison
        #[arg(long, default_value_t = 1000)]
        normals: usize,
    },
    /// Face defects of random finite element functions
    Conformity {
        #[command(flatten)]
        mesh: MeshSource,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Jump of identity indicators: H(Curl) nonconformity witness
    Nonconformity {
        #[command(flatten)]
        mesh: MeshSource,
        #[arg(long)]
        k: usize,
        /// Only this cell (default: every cell with an interior face)
        #[arg(long)]
        cell: Option<usize>,
    },
    /// Interpolation errors under uniform refinement of the unit cube
    Converge {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value = "trig")]
        field: String,
        #[arg(long, value_parser = parse_cell, default_value = "tet")]
        cell: CellKind,
        /// Subdivisions of the coarsest mesh
        #[arg(long, default_value_t = 4)]
        base: usize,
        /// Require final rates k+1 ± 0.2 (L²) and k ± 0.3 (sym Curl)
        #[arg(long)]
        check_rates: bool,
    },
    /// Interpolate a field and write the coefficients as `.fef`
    Interpolate {
        #[command(flatten)]
        mesh: MeshSource,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "trig")]
        field: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MeshSource {
    /// Mesh file in `.m3` format
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Generated unit-cube mesh: cube-tet:N or cube-hex:N
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_cell(s: &str) -> Result<CellKind, String> {
    s.parse()
}

type BoxResult<T> = Result<T, Box<dyn std::error::Error>>;

impl MeshSource {
    fn load(&self) -> BoxResult<OrientedMesh> {
        if let Some(path) = &self.mesh {
            let text = std::fs::read_to_string(path)?;
            return Ok(load_mesh(&text)?);
        }
        let spec = self.gen.as_deref().unwrap_or_default();
        let (kind, n) = spec
            .split_once(':')
            .and_then(|(k, n)| {
                let kind = match k {
                    "cube-tet" => CellKind::Tet,
                    "cube-hex" => CellKind::Hex,
                    _ => return None,
                };
                Some((kind, n.parse::<usize>().ok()?))
            })
            .ok_or_else(|| format!("bad generator `{spec}` (expected cube-tet:N or cube-hex:N)"))?;
        Ok(unit_cube(kind, n)?)
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: Cli) -> BoxResult<bool> {
    match cli.command {
        Command::Info { cell, k } => {
            let table = info_table(cell, k)?;
            println!("{:<8} {:<28} {:>6}", "entity", "class", "count");
            for (entity, class, n) in &table {
                println!("{entity:<8} {class:<28} {n:>6}");
            }
            let total: usize = table.iter().map(|r| r.2).sum();
            let expected = expected_dof_count(cell, k);
            println!("total {total} (expected {expected})");
            Ok(total == expected)
        }
        Command::Unisolvence { cell, k, samples, seed } => {
            let r = unisolvence_study(cell, k, samples, seed)?;
            println!(
                "{} k={} samples={} seed={}\ncondition min {:.3e} median {:.3e} max {:.3e}\nmax residual {:.3e}  failures {}\n{}",
                cell.name(),
                k,
                samples,
                seed,
                r.min_condition,
                r.median_condition,
                r.max_condition,
                r.max_residual,
                r.failures,
                verdict(r.passed)
            );
            Ok(r.passed)
        }
        Command::Lemmas { seed, draws, normals } => {
            let r = lemma_suite(seed, draws, normals);
            println!(
                "{:<12} {:>5} {:>8} {:>9} {:>12} {:>12}  result",
                "set", "draws", "expected", "observed", "id-resid", "conf-defect"
            );
            for row in &r.rows {
                let observed = if row.min_dimension == row.max_dimension {
                    row.min_dimension.to_string()
                } else {
                    format!("{}..{}", row.min_dimension, row.max_dimension)
                };
                let conf = row
                    .max_conformity_defect
                    .map(|d| format!("{d:.2e}"))
                    .unwrap_or_else(|| "-".into());
                println!(
                    "{:<12} {:>5} {:>8} {:>9} {:>12.2e} {:>12}  {}",
                    row.set.name(),
                    row.draws,
                    row.expected,
                    observed,
                    row.max_identity_residual,
                    conf,
                    verdict(row.passed)
                );
            }
            let s = &r.sym_dev_sym;
            println!(
                "sym/dev-sym kernels: {} normals, dims {:?}/{:?}, residual {:.2e}  {}",
                s.samples,
                s.sym_dimensions,
                s.dev_sym_dimensions,
                s.max_projection_residual,
                verdict(s.passed)
            );
            Ok(r.passed)
        }
        Command::Conformity { mesh, k, samples, seed, format } => {
            let space = GlobalSpace::new(mesh.load()?, k)?;
            let r = conformity_study(&space, samples, seed)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r)?),
                Format::Csv => {
                    println!("seed,{}", DefectReport::CSV_HEADER);
                    for s in &r.samples {
                        print!("{}", s.csv_rows(&format!("{},", s.seed.unwrap_or_default())));
                    }
                }
            }
            eprintln!(
                "worst normalized sym defect {:.3e}, dev-sym {:.3e}: {}",
                r.worst_normalized_sym,
                r.worst_normalized_dev_sym,
                verdict(r.passed)
            );
            Ok(r.passed)
        }
        Command::Nonconformity { mesh, k, cell } => {
            let space = GlobalSpace::new(mesh.load()?, k)?;
            let m = space.mesh();
            let cells: Vec<usize> = match cell {
                Some(c) => vec![c],
                None => (0..m.num_cells())
                    .filter(|&c| m.cell_faces(c).iter().any(|&f| !m.is_boundary_face(f)))
                    .collect(),
            };
            println!("cell,faces,max_raw_deviation,max_sym,max_elsewhere,result");
            let mut ok = !cells.is_empty();
            for c in cells {
                let w = nonconformity_witness(&space, c)?;
                println!(
                    "{},{},{:e},{:e},{:e},{}",
                    c,
                    w.faces.len(),
                    w.max_raw_deviation,
                    w.max_sym,
                    w.max_elsewhere,
                    verdict(w.passed)
                );
                ok &= w.passed;
            }
            Ok(ok)
        }
        Command::Converge { k, levels, field, cell, base, check_rates } => {
            let spec: FieldSpec = field.parse()?;
            let f = spec.build();
            let r: ConvergenceReport = convergence_study(f.as_ref(), cell, k, base, levels)?;
            print!("{}", r.to_csv());
            let finite = r
                .rows
                .iter()
                .all(|row| row.l2_error.is_finite() && row.symcurl_error.is_finite());
            if !check_rates {
                return Ok(finite);
            }
            let (l2, sc) = r.final_rates();
            let ok_l2 = (l2 - (k + 1) as f64).abs() <= 0.2;
            let ok_sc = (sc - k as f64).abs() <= 0.3;
            eprintln!(
                "L2 rate {l2:.3} (expected {}): {}; sym Curl rate {sc:.3} (expected {k}): {}",
                k + 1,
                verdict(ok_l2),
                verdict(ok_sc)
            );
            Ok(finite && ok_l2 && ok_sc)
        }
        Command::Interpolate { mesh, k, field, out } => {
            let spec: FieldSpec = field.parse()?;
            let f = spec.build();
            let space = GlobalSpace::new(mesh.load()?, k)?;
            let u = space.interpolate(|x| f.value(x))?;
            std::fs::write(&out, save_fef(&u))?;
            println!("wrote {} coefficients to {}", space.dimension(), out.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
