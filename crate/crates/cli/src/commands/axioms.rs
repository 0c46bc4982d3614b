use clap::Args;
use groupoidal::axioms::{validate_axioms, ValidationOptions};
use serde_json::json;

use crate::inputs::GroupoidArgs;
use crate::report::{Check, CliResult, Context, RunReport};

#[derive(Debug, Args)]
pub struct AxiomsArgs {
    #[command(flatten)]
    pub source: GroupoidArgs,
    /// Number of units when combined with --group.
    #[arg(long, requires = "group")]
    pub units: Option<usize>,
    /// Largest order checked exhaustively; beyond it associativity is sampled.
    #[arg(long, default_value_t = 4096)]
    pub exhaustive_limit: usize,
    /// Associativity samples for large groupoids.
    #[arg(long, default_value_t = 1 << 20)]
    pub samples: usize,
}

pub fn run(args: &AxiomsArgs, ctx: &mut Context) -> CliResult<RunReport> {
    let (name, g) = args.source.build(args.units)?;
    let options = ValidationOptions { exhaustive_limit: args.exhaustive_limit, samples: args.samples, seed: ctx.seed };
    let report = validate_axioms(&g, &options);

    let mut checks = Vec::new();
    for c in &report.checks {
        let mut check = Check::flag(&format!("axiom {}", c.axiom), c.passed).with_note(c.axiom.description());
        check.witness = c.witness.clone();
        check.deviation = Some(c.violations as f64);
        if !c.passed {
            let witness = c.witness.as_ref().map(|w| format!("{w:?}")).unwrap_or_default();
            eprintln!("axiom {} failed ({}): witness {witness}, {} violations", c.axiom, c.axiom.description(), c.violations);
        }
        checks.push(check);
    }

    let mut results = json!({
        "groupoid": name,
        "order": g.order(),
        "units": g.units().len(),
        "sampled_associativity": report.sampled_associativity,
    });
    if report.all_pass() {
        let class = g.classify();
        let orbits = g.orbits()?;
        results["classification"] = json!({
            "principal": class.principal,
            "transitive": class.transitive,
            "label": format!(
                "{} {}",
                if class.principal { "principal" } else { "nonprincipal" },
                if class.transitive { "transitive" } else { "intransitive" }
            ),
        });
        results["orbits"] = json!(orbits.iter().map(|o| o.members.clone()).collect::<Vec<_>>());
    }
    let parameters = json!({
        "source": args.source.describe(),
        "units": args.units,
        "exhaustive_limit": args.exhaustive_limit,
        "samples": args.samples,
    });
    ctx.finish("axioms", parameters, checks, results)
}
