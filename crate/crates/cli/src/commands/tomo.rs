use std::f64::consts::PI;

use clap::Subcommand;
use groupoidal::io::{write_photon_tomogram_csv, write_spin_tomograms_csv, write_symplectic_tomograms_csv};
use groupoidal::linalg::{frobenius, trace, C64};
use groupoidal::realizations::CoherentGrid;
use groupoidal::tomography::symplectic::CHI_TAIL_WARNING;
use groupoidal::tomography::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::inputs::{parse_complex, parse_state};
use crate::report::{Check, CliError, CliResult, Context, RunReport};

/// Stochasticity tolerance.
const STOCHASTIC_TOL: f64 = 1e-12;
/// Tolerance for the vacuum Poisson law.
const POISSON_TOL: f64 = 1e-8;
/// Fixed-g spin round trip tolerance.
const SPIN_ROUND_TRIP_TOL: f64 = 1e-12;

#[derive(Debug, Subcommand)]
pub enum TomoScheme {
    /// Spin tomograms over random rotations.
    Spin {
        #[arg(long, default_value_t = 0.5)]
        j: f64,
        /// vac, fock:K (index from m = -j), coherent:Z, mixed or an operator JSON file.
        #[arg(long, default_value = "mixed")]
        state: String,
        /// Number of random rotations.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Rebuild the state from its symbol at one rotation.
        #[arg(long)]
        reconstruct: bool,
    },
    /// Photon-number tomogram on a coherent lattice or at given points.
    Photon {
        #[arg(long, default_value = "vac")]
        state: String,
        /// Fock truncation of the state.
        #[arg(long = "Nt", visible_alias = "nt", default_value_t = 32)]
        n_trunc: usize,
        /// Displacement points such as 1+0.5i; overrides the lattice.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Vec<C64>,
        /// Lattice half-width.
        #[arg(long, default_value_t = 4.0)]
        radius: f64,
        #[arg(long, default_value_t = 0.2)]
        spacing: f64,
        /// Photon counts recorded per point; defaults to what the lattice needs.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        reconstruct: bool,
        /// Ordering parameter for the reconstruction, in (-1, 1).
        #[arg(long, allow_hyphen_values = true, default_value_t = DEFAULT_ORDERING)]
        s: f64,
        /// Frobenius tolerance for the reconstruction.
        #[arg(long, default_value_t = 5e-3)]
        tol: f64,
    },
    /// Symplectic tomograms along directions; reconstruction from the
    /// characteristic function on a square lattice.
    Symplectic {
        #[arg(long, default_value = "vac")]
        state: String,
        #[arg(long = "Nt", visible_alias = "nt", default_value_t = 32)]
        n_trunc: usize,
        /// Lattice half-width L.
        #[arg(long = "L", visible_alias = "half-width", default_value_t = 6.0)]
        half_width: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        /// Directions exported to the tomogram CSV.
        #[arg(long, default_value_t = 8)]
        directions: usize,
        #[arg(long)]
        reconstruct: bool,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
}

pub fn run(scheme: &TomoScheme, ctx: &mut Context) -> CliResult<RunReport> {
    match scheme {
        TomoScheme::Spin { j, state, samples, reconstruct } => spin(*j, state, *samples, *reconstruct, ctx),
        TomoScheme::Photon { state, n_trunc, z, radius, spacing, n_max, reconstruct, s, tol } => {
            let params = json!({
                "state": state, "N_t": n_trunc, "z": z.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "radius": radius, "spacing": spacing, "n_max": n_max, "reconstruct": reconstruct, "s": s, "tol": tol,
            });
            photon(PhotonRun { state, n_trunc: *n_trunc, z, radius: *radius, spacing: *spacing, n_max: *n_max, reconstruct: *reconstruct, s: *s, tol: *tol }, params, ctx)
        }
        TomoScheme::Symplectic { state, n_trunc, half_width, step, directions, reconstruct, tol } => {
            let params = json!({
                "state": state, "N_t": n_trunc, "L": half_width, "step": step,
                "directions": directions, "reconstruct": reconstruct, "tol": tol,
            });
            symplectic(state, *n_trunc, *half_width, *step, *directions, *reconstruct, *tol, params, ctx)
        }
    }
}

fn spin(j: f64, state: &str, samples: usize, reconstruct: bool, ctx: &mut Context) -> CliResult<RunReport> {
    let dim = groupoidal::realizations::SpinSpace::new(j)?.dim();
    let rho = parse_state(state, dim, ctx.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let tomograms = (0..samples)
        .map(|_| spin_tomogram(j, random_euler_angles(&mut rng), &rho))
        .collect::<Result<Vec<_>, _>>()?;
    write_spin_tomograms_csv(&tomograms, ctx.create("spin_tomograms.csv")?)?;

    let sum_dev = tomograms.iter().map(|t| (t.sum() - 1.0).abs()).fold(0.0, f64::max);
    let min = tomograms.iter().map(|t| t.min()).fold(f64::INFINITY, f64::min);
    let mut checks = vec![
        Check::below("probabilities sum to one", sum_dev, STOCHASTIC_TOL),
        Check::flag("probabilities nonnegative", min >= -STOCHASTIC_TOL),
    ];
    let mut results = json!({ "tomograms": tomograms.len(), "max_sum_deviation": sum_dev, "min_probability": min });
    if reconstruct {
        let g = random_euler_angles(&mut rng);
        let back = spin_reconstruct_at_g(j, g, &spin_symbol(j, g, &rho)?)?;
        let err = frobenius(&(&back - &rho));
        let rec = json!({
            "scheme": "spin",
            "grid": { "alpha": g.alpha, "beta": g.beta, "gamma": g.gamma },
            "N_t": dim,
            "frobenius_error": err,
            "trace_error": (trace(&back) - trace(&rho)).norm(),
            "seed": ctx.seed,
        });
        ctx.write_json("spin_reconstruction.json", &rec)?;
        checks.push(Check::below("fixed-rotation round trip", err, SPIN_ROUND_TRIP_TOL));
        results["reconstruction"] = rec;
    }
    let params = json!({ "j": j, "state": state, "samples": samples, "reconstruct": reconstruct });
    ctx.finish("tomo spin", params, checks, results)
}

struct PhotonRun<'a> {
    state: &'a str,
    n_trunc: usize,
    z: &'a [C64],
    radius: f64,
    spacing: f64,
    n_max: Option<usize>,
    reconstruct: bool,
    s: f64,
    tol: f64,
}

/// `e^{−|z|²} |z|^{2n} / n!`.
fn poisson(z: C64, n: usize) -> f64 {
    let r2 = z.norm_sqr();
    if r2 == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    (-r2 + n as f64 * r2.ln() - log_fact).exp()
}

fn photon(run: PhotonRun, params: serde_json::Value, ctx: &mut Context) -> CliResult<RunReport> {
    let rho = parse_state(run.state, run.n_trunc, ctx.seed)?;
    let grid = if run.z.is_empty() {
        CoherentGrid::covering(run.radius, run.spacing)?
    } else {
        if run.reconstruct {
            return Err(CliError::Input("--reconstruct needs a lattice, not explicit --z points".into()));
        }
        CoherentGrid { side: 1, spacing: 0.0, points: run.z.to_vec() }
    };
    let n_max = run.n_max.unwrap_or_else(|| default_count_range(run.n_trunc, &grid));
    let tomo = photon_tomogram(&rho, &grid, n_max)?;
    write_photon_tomogram_csv(&tomo, ctx.create("photon_tomogram.csv")?)?;

    let min = tomo.table.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let excess = tomo.table.iter().map(|col| col.iter().sum::<f64>() - 1.0).fold(f64::NEG_INFINITY, f64::max);
    let mut checks = vec![
        Check::flag("probabilities nonnegative", min >= -STOCHASTIC_TOL),
        Check::flag("column sums at most one", excess <= STOCHASTIC_TOL),
    ];
    let mut results = json!({ "points": grid.len(), "n_max": n_max, "min_probability": min });
    if run.state == "vac" {
        let dev = grid
            .points
            .iter()
            .zip(&tomo.table)
            .flat_map(|(&z, col)| col.iter().enumerate().map(move |(n, &p)| (p - poisson(z, n)).abs()))
            .fold(0.0, f64::max);
        checks.push(Check::below("vacuum follows the Poisson law", dev, POISSON_TOL));
    }
    if run.reconstruct {
        let rec = photon_reconstruct(&tomo, run.s, run.n_trunc)?;
        let spec = LatticeSpec { half_width: run.radius, spacing: run.spacing, side: grid.side };
        let report = ReconstructionReport::compare("photon", spec, &rec, &rho, Some(ctx.seed));
        ctx.write_json("photon_reconstruction.json", &report)?;
        checks.push(Check::below("reconstruction", report.frobenius_error, run.tol));
        results["reconstruction"] = json!(report);
    }
    ctx.finish("tomo photon", params, checks, results)
}

#[allow(clippy::too_many_arguments)]
fn symplectic(
    state: &str,
    n_trunc: usize,
    half_width: f64,
    step: f64,
    directions: usize,
    reconstruct: bool,
    tol: f64,
    params: serde_json::Value,
    ctx: &mut Context,
) -> CliResult<RunReport> {
    let rho = parse_state(state, n_trunc, ctx.seed)?;
    let tomograms = (0..directions)
        .map(|k| {
            let theta = k as f64 * PI / directions as f64;
            symplectic_tomogram(n_trunc, theta.cos(), theta.sin(), &rho)
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_symplectic_tomograms_csv(&tomograms, ctx.create("symplectic_tomograms.csv")?)?;

    let sum_dev = tomograms.iter().map(|t| (t.total_weight() - 1.0).abs()).fold(0.0, f64::max);
    let min = tomograms.iter().flat_map(|t| t.atoms.iter().map(|a| a.p)).fold(f64::INFINITY, f64::min);
    let mut checks = vec![
        Check::below("probabilities sum to one", sum_dev, 1e-10),
        Check::flag("probabilities nonnegative", min >= -STOCHASTIC_TOL),
    ];
    let mut results = json!({ "directions": directions, "max_sum_deviation": sum_dev, "min_probability": min });
    let mut infeasible = None;
    if reconstruct {
        let grid = SymplecticGrid::new(half_width, step)?;
        let src = StateSource::with_default_padding(&rho)?;
        let rec = symplectic_reconstruct(n_trunc, &src, &grid)?;
        let spec = LatticeSpec { half_width, spacing: step, side: grid.side() };
        let report = ReconstructionReport::compare("symplectic", spec, &rec.operator, &rho, Some(ctx.seed));
        ctx.write_json("symplectic_reconstruction.json", &report)?;
        checks.push(Check::below("reconstruction", report.frobenius_error, tol));
        results["reconstruction"] = json!(report);
        results["chi_tail"] = json!(rec.chi_tail);
        if rec.chi_tail > CHI_TAIL_WARNING {
            // Gaussian decay fitted through the boundary value.
            let suggested = if rec.chi_tail < 1.0 {
                half_width * (CHI_TAIL_WARNING.ln() / rec.chi_tail.ln()).sqrt()
            } else {
                2.0 * half_width
            };
            infeasible = Some(format!(
                "characteristic function is {:.3e} at the lattice boundary L = {half_width}; use L >= {suggested:.2}",
                rec.chi_tail
            ));
        }
    }
    let report = ctx.finish("tomo symplectic", params, checks, results)?;
    match infeasible {
        Some(msg) => Err(CliError::Infeasible(msg)),
        None => Ok(report),
    }
}
