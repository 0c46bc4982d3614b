use std::fs;
use std::path::PathBuf;

use clap::Args;
use groupoidal::group::FiniteGroup;
use groupoidal::groupoid::FiniteGroupoid;
use groupoidal::io::{groupoid_from_json, operator_from_json};
use groupoidal::linalg::{OperatorMatrix, C64};
use groupoidal::realizations::coherent_vector;
use groupoidal::tomography::random_density_matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{CliError, CliResult};

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(text: &str) -> Result<C64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number '{text}'");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => t.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(k) => Ok(C64::new(body[..k].parse::<f64>().map_err(|_| bad())?, imag(&body[k..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

/// A groupoid named on the command line.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct GroupoidArgs {
    /// Pair groupoid on N points.
    #[arg(long, value_name = "N")]
    pub pair: Option<usize>,
    /// Group as a one-unit groupoid: Z<n>, V4, S3 or 1. With --units, the
    /// transitive groupoid with that isotropy group.
    #[arg(long, value_name = "NAME")]
    pub group: Option<String>,
    /// Groupoid JSON file.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
}

impl GroupoidArgs {
    pub fn build(&self, units: Option<usize>) -> CliResult<(String, FiniteGroupoid)> {
        if let Some(n) = self.pair {
            return Ok((format!("pair({n})"), FiniteGroupoid::pair(n)?));
        }
        if let Some(name) = &self.group {
            let group = FiniteGroup::parse(name)?;
            return match units {
                Some(u) => Ok((format!("{u} units x {name}"), FiniteGroupoid::transitive(u, &group)?)),
                None => Ok((name.clone(), FiniteGroupoid::from_group(&group))),
            };
        }
        let path = self.file.as_ref().expect("clap enforces one source");
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok((path.display().to_string(), groupoid_from_json(&text)?))
    }

    pub fn describe(&self) -> Value {
        json!({ "pair": self.pair, "group": self.group, "file": self.file })
    }
}

/// Density matrix on `dim` levels from a state spec: `vac`, `fock:K`,
/// `coherent:Z`, `mixed` (random, seeded) or a path to an operator JSON file.
pub fn parse_state(spec: &str, dim: usize, seed: u64) -> CliResult<OperatorMatrix> {
    let projector = |v: &[C64]| OperatorMatrix::from_fn(dim, dim, |r, c| v[r] * v[c].conj());
    let basis = |k: usize| -> CliResult<OperatorMatrix> {
        if k >= dim {
            return Err(CliError::Input(format!("basis index {k} outside {dim} levels")));
        }
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        Ok(projector(&v))
    };
    if spec == "vac" {
        return basis(0);
    }
    if spec == "mixed" {
        return Ok(random_density_matrix(dim, &mut ChaCha8Rng::seed_from_u64(seed)));
    }
    if let Some(k) = spec.strip_prefix("fock:") {
        let k = k.parse::<usize>().map_err(|_| CliError::Input(format!("bad basis index in '{spec}'")))?;
        return basis(k);
    }
    if let Some(z) = spec.strip_prefix("coherent:") {
        let z = parse_complex(z).map_err(CliError::Input)?;
        let v = coherent_vector(z, dim);
        let norm = v.norm();
        let v: Vec<C64> = v.iter().map(|x| x / norm).collect();
        return Ok(projector(&v));
    }
    let text = fs::read_to_string(spec).map_err(|e| CliError::Input(format!("state '{spec}': {e}")))?;
    let rho = operator_from_json(&text)?;
    if rho.nrows() != dim {
        return Err(CliError::Input(format!("state file has dimension {}, expected {dim}", rho.nrows())));
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1+0i").unwrap(), C64::new(1.0, 0.0));
        assert_eq!(parse_complex("-0.5-2i").unwrap(), C64::new(-0.5, -2.0));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+1e2i").unwrap(), C64::new(1e-3, 100.0));
        assert_eq!(parse_complex(" 3 ").unwrap(), C64::new(3.0, 0.0));
        assert!(parse_complex("1+").is_err() && parse_complex("").is_err() && parse_complex("x").is_err());
    }

    #[test]
    fn states() {
        let rho = parse_state("fock:2", 4, 0).unwrap();
        assert_eq!(rho[(2, 2)], C64::new(1.0, 0.0));
        assert!(parse_state("fock:4", 4, 0).is_err());
        let a = parse_state("mixed", 3, 7).unwrap();
        assert_eq!(a, parse_state("mixed", 3, 7).unwrap());
        let z = parse_state("coherent:0.3-0.1i", 20, 0).unwrap();
        assert!((groupoidal::linalg::trace(&z).re - 1.0).abs() < 1e-12);
        assert!(matches!(parse_state("/no/such/file", 2, 0), Err(CliError::Input(_))));
    }
}
