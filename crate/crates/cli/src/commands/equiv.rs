use std::fs;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use groupoidal::group::FiniteGroup;
use groupoidal::groupoid::FiniteGroupoid;
use groupoidal::io::groupoid_from_json;
use groupoidal::linalg::C64;
use groupoidal::realizations::coherent::{gaussian_lattice_symbol, star_convolution_gap};
use groupoidal::realizations::{coherent_pair, CoherentGrid};
use groupoidal::starprod::{duality_residual, verify_gen_conv, verify_prop1, EquivalenceReport};
use serde_json::json;

use crate::report::{Check, CliError, CliResult, Context, RunReport};

/// Tolerance for star product against convolution.
pub const EQUIV_TOL: f64 = 1e-12;
/// Smallest gap that certifies the coherent counterexample.
pub const COHERENT_GAP: f64 = 1e-2;

#[derive(Debug, Subcommand)]
pub enum EquivScheme {
    /// Weyl-unit star product against pair groupoid convolution.
    Prop1 {
        /// Number of points.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Left-regular star product against convolution on a transitive groupoid.
    Genconv(GenconvArgs),
    /// Coherent-state pair on a square lattice; passes when star and lattice
    /// convolution differ.
    Coherent {
        /// Lattice side.
        #[arg(long, default_value_t = 5)]
        grid: usize,
        #[arg(long, default_value_t = 0.5)]
        spacing: f64,
        /// Fock truncation.
        #[arg(long = "Nt", visible_alias = "nt", default_value_t = 64)]
        n_trunc: usize,
    },
}

#[derive(Debug, Args)]
pub struct GenconvArgs {
    /// Number of units.
    #[arg(long, default_value_t = 1, conflicts_with = "file")]
    pub units: usize,
    /// Isotropy group: Z<n>, V4, S3 or 1.
    #[arg(long, default_value = "1", conflicts_with = "file")]
    pub isotropy: String,
    /// Groupoid JSON file instead of --units/--isotropy.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

fn equivalence_checks(r: &EquivalenceReport) -> Vec<Check> {
    vec![
        Check::below("star equals convolution", r.max_dev, EQUIV_TOL),
        Check::flag("integer symbols exact", r.integer_dev == 0.0),
        Check::flag("kernel is the composition table", r.kernel_matches_composition),
    ]
}

pub fn run(scheme: &EquivScheme, ctx: &mut Context) -> CliResult<RunReport> {
    match scheme {
        EquivScheme::Prop1 { n, samples } => {
            let r = verify_prop1(*n, *samples, ctx.seed)?;
            let checks = equivalence_checks(&r);
            ctx.finish("equiv prop1", json!({ "n": n, "samples": samples }), checks, json!(r))
        }
        EquivScheme::Genconv(args) => {
            let g = match &args.file {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    groupoid_from_json(&text)?
                }
                None => FiniteGroupoid::transitive(args.units, &FiniteGroup::parse(&args.isotropy)?)?,
            };
            g.require_valid()?;
            let r = verify_gen_conv(&g, args.samples, ctx.seed)?;
            let checks = equivalence_checks(&r);
            let info = r.normalization.expect("regular realization reports its normalization");
            let mut results = json!(r);
            results["normalization"] = json!({
                "trace": info.value,
                "closed_form": info.closed_form(),
                "unit_count": info.unit_count,
                "isotropy_order": info.isotropy_order,
                "matches_closed_form": info.matches_closed_form(),
            });
            let parameters = json!({
                "units": args.units,
                "isotropy": args.isotropy,
                "file": args.file,
                "samples": args.samples,
            });
            ctx.finish("equiv genconv", parameters, checks, results)
        }
        EquivScheme::Coherent { grid, spacing, n_trunc } => {
            let lattice = CoherentGrid::square(*grid, *spacing)?;
            let pair = coherent_pair(&lattice, *n_trunc)?;
            let dual = duality_residual(&pair)?;
            let f = gaussian_lattice_symbol(&pair, &lattice, C64::new(0.0, 0.0), 0.6)?;
            let h = gaussian_lattice_symbol(&pair, &lattice, C64::new(0.25 * spacing / 0.5, -0.25 * spacing / 0.5), 0.8)?;
            let gap = star_convolution_gap(&pair, &lattice, &f, &h)?;
            let checks = vec![Check::above("star differs from lattice convolution", gap, COHERENT_GAP)];
            let parameters = json!({ "grid": grid, "spacing": spacing, "N_t": n_trunc });
            let results = json!({ "gap": gap, "duality_residual": dual });
            ctx.finish("equiv coherent", parameters, checks, results)
        }
    }
}
