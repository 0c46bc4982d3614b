use clap::Args;
use groupoidal::io::{write_grid_symbol_csv, write_kernel_csv};
use groupoidal::linalg::OperatorMatrix;
use groupoidal::quadrature::Grid1D;
use groupoidal::realizations::position::{check_support, fock_to_position_symbol, position_star, position_to_fock_symbol};
use groupoidal::realizations::fock_weyl_pair;
use groupoidal::starprod::{kernel, symbol, QDPair};
use groupoidal::algebra::weighted_grid_convolve;
use groupoidal::linalg::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::inputs::GroupoidArgs;
use crate::report::{Check, CliResult, Context, RunReport};

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// --pair N uses the Weyl units on N points; other sources use the
    /// left-regular realization.
    #[command(flatten)]
    pub source: GroupoidArgs,
    /// Number of units when combined with --group.
    #[arg(long, requires = "group")]
    pub units: Option<usize>,
}

pub fn kernel_cmd(args: &KernelArgs, ctx: &mut Context) -> CliResult<RunReport> {
    let (name, g) = args.source.build(args.units)?;
    g.require_valid()?;
    let pair = match args.source.pair {
        Some(n) => QDPair::weyl("pair", n)?,
        None => QDPair::d_realization(&g)?.0,
    };
    let k = kernel(&pair)?;
    write_kernel_csv(&k, ctx.create("kernel.csv")?)?;
    let m = k.size();
    let mut matches = true;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let want = if g.compose(a, b) == Some(c) { 1.0 } else { 0.0 };
                matches &= k.get(a, b, c) == C64::new(want, 0.0);
            }
        }
    }
    let checks = vec![Check::flag("kernel is the composition table", matches)];
    let results = json!({ "groupoid": name, "points": m, "boolean": k.is_boolean() });
    let parameters = json!({ "source": args.source.describe(), "units": args.units });
    ctx.finish("kernel", parameters, checks, results)
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    /// Fock truncation.
    #[arg(long = "Nt", visible_alias = "nt", default_value_t = 16)]
    pub n_trunc: usize,
    /// Grid covers [-L, L].
    #[arg(long = "L", visible_alias = "half-width", default_value_t = 8.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 512)]
    pub points: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Also export the position symbol of the test operator.
    #[arg(long)]
    pub csv: bool,
}

fn random_operator(rng: &mut ChaCha8Rng, n: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn roundtrip(args: &RoundtripArgs, ctx: &mut Context) -> CliResult<RunReport> {
    let grid = Grid1D::trapezoid(-args.half_width, args.half_width, args.points)?;
    check_support(&grid, args.n_trunc)?;
    let pair = fock_weyl_pair(args.n_trunc)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let a = random_operator(&mut rng, args.n_trunc);
    let b = random_operator(&mut rng, args.n_trunc);
    let sa = symbol(&pair, &a)?;
    let fa = fock_to_position_symbol(&sa, &grid)?;
    let fb = fock_to_position_symbol(&symbol(&pair, &b)?, &grid)?;
    let round = position_to_fock_symbol(&fa, &pair)?.max_abs_diff(&sa);
    let continuous = weighted_grid_convolve(&fa.values, &fb.values, &grid, &vec![1.0; grid.len()])?;
    let star = position_star(&fa, &fb, args.n_trunc)?;
    let star_dev = star.values.iter().zip(continuous.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    if args.csv {
        write_grid_symbol_csv(&fa, ctx.create("position_symbol.csv")?)?;
    }
    let checks = vec![
        Check::below("Fock-position round trip", round, args.tol),
        Check::below("position star equals grid product", star_dev, args.tol),
    ];
    let parameters = json!({ "N_t": args.n_trunc, "L": args.half_width, "points": args.points, "tol": args.tol });
    ctx.finish("roundtrip", parameters, checks, json!({ "round_trip": round, "star": star_dev }))
}
