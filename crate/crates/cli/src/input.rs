use std::path::PathBuf;

use clap::Args;
use kcoreset::metric::{generate, load_matrix, load_points_csv, parse_matrix, GeneratorSpec};
use kcoreset::{Error, MetricSpace, Result};

#[derive(Args, Clone)]
#[group(skip)]
pub struct InputArgs {
    /// Point CSV (or a distance matrix with --matrix).
    #[arg(long, required_unless_present = "gen", conflicts_with = "gen")]
    pub input: Option<PathBuf>,
    /// Generator spec: line:N:SPACING, uniform:N:DIM[:SIDE],
    /// gauss:N:DIM:CLUSTERS:SPREAD[:SEPARATION], cover:DEPTH:RADIUS.
    #[arg(long)]
    pub gen: Option<String>,
    /// Treat --input as an n×n distance matrix.
    #[arg(long, requires = "input")]
    pub matrix: bool,
    /// Check the triangle inequality on matrices of any size.
    #[arg(long, requires = "matrix")]
    pub force_triangle_check: bool,
}

impl InputArgs {
    /// Loads the input; matrices must satisfy the metric axioms.
    pub fn load(&self, seed: u64) -> Result<MetricSpace> {
        match (&self.input, &self.gen) {
            (Some(path), _) if self.matrix => load_matrix(path, self.force_triangle_check),
            _ => self.load_unchecked(seed),
        }
    }

    pub fn load_unchecked(&self, seed: u64) -> Result<MetricSpace> {
        match (&self.input, &self.gen) {
            (Some(path), _) if self.matrix => {
                let text = std::fs::read_to_string(path)?;
                Ok(MetricSpace::from_matrix(parse_matrix(&text)?))
            }
            (Some(path), _) => Ok(MetricSpace::euclidean(load_points_csv(path)?)),
            (None, Some(spec)) => {
                let spec = GeneratorSpec::parse(spec, seed)?;
                Ok(MetricSpace::euclidean(generate(&spec)?))
            }
            (None, None) => Err(Error::Usage("one of --input or --gen is required".into())),
        }
    }
}
