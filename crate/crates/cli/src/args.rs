use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paritynest::Construction;

#[derive(Debug, Parser)]
#[command(
    name = "paritynest",
    version,
    about = "Error-transparent gates for rotation-symmetric bosonic codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a gate Hamiltonian and report its structure.
    Build(BuildArgs),
    /// Check a Hamiltonian for error transparency.
    Check(CheckArgs),
    /// Sweep process infidelity over loss probabilities.
    Bench(BenchArgs),
    /// Rank test showing too few odd block off-diagonals cannot be error transparent.
    Witness(WitnessArgs),
    /// Split squared code coefficients into shifted binomial units.
    Decompose(DecomposeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeShape {
    pub spacing: usize,
    pub cutoff: usize,
}

impl FromStr for CodeShape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (n, k) = s
            .split_once(',')
            .ok_or_else(|| format!("expected N,K, got '{s}'"))?;
        let spacing = n.trim().parse().map_err(|e| format!("bad N '{n}': {e}"))?;
        let cutoff = k.trim().parse().map_err(|e| format!("bad K '{k}': {e}"))?;
        if spacing == 0 || cutoff == 0 {
            return Err("N and K must be positive".into());
        }
        Ok(Self { spacing, cutoff })
    }
}

/// `MIN:MAX:COUNT`, log-spaced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Default for GammaGrid {
    fn default() -> Self {
        Self {
            min: 1e-4,
            max: 0.5,
            count: 20,
        }
    }
}

impl FromStr for GammaGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts[..] else {
            return Err(format!("expected MIN:MAX:COUNT, got '{s}'"));
        };
        let min: f64 = min.parse().map_err(|e| format!("bad MIN '{min}': {e}"))?;
        let max: f64 = max.parse().map_err(|e| format!("bad MAX '{max}': {e}"))?;
        let count: usize = count
            .parse()
            .map_err(|e| format!("bad COUNT '{count}': {e}"))?;
        if !(min > 0.0 && min <= max && max < 1.0) {
            return Err(format!("need 0 < MIN <= MAX < 1, got {min}:{max}"));
        }
        Ok(Self { min, max, count })
    }
}

impl std::fmt::Display for GammaGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

/// A construction with an optional order override, written `name` or `name:l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateSpec {
    pub construction: Construction,
    pub order: Option<usize>,
}

impl FromStr for GateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, order) = match s.split_once(':') {
            Some((name, l)) => (
                name,
                Some(l.parse().map_err(|e| format!("bad order in '{s}': {e}"))?),
            ),
            None => (s, None),
        };
        let construction = name.parse().map_err(|e: paritynest::Error| e.to_string())?;
        Ok(Self {
            construction,
            order,
        })
    }
}

impl std::fmt::Display for GateSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.order {
            Some(l) => write!(f, "{}:{l}", self.construction),
            None => write!(f, "{}", self.construction),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ErrorChoice {
    /// Jumps and no-jump terms up to the order.
    Full,
    /// Pure jumps `a^m` up to the order.
    Jumps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Binomial code `N,K`.
    #[arg(long, value_name = "N,K")]
    pub code: CodeShape,
    /// Error order; defaults to the largest order the code corrects.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, value_enum, default_value = "full")]
    pub errors: ErrorChoice,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct GateArgs {
    /// Block off-diagonals for `direct`, as odd grid offsets.
    #[arg(long, value_delimiter = ',', value_name = "J,...")]
    pub offdiagonals: Vec<usize>,
    /// Phase for `phase`.
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub theta: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub construction: GateSpec,
    #[command(flatten)]
    pub gate: GateArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
    /// Gate to check; ignored when `--hamiltonian` is given.
    #[arg(long, required_unless_present = "hamiltonian")]
    pub construction: Option<GateSpec>,
    #[command(flatten)]
    pub gate: GateArgs,
    /// JSON file written by `build`.
    #[arg(long, value_name = "PATH")]
    pub hamiltonian: Option<PathBuf>,
    /// Use the span-closure condition instead of strict commutation.
    #[arg(long)]
    pub general: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated gates, each `name` or `name:l`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub construction: Vec<GateSpec>,
    #[command(flatten)]
    pub gate: GateArgs,
    #[arg(long, default_value_t = GammaGrid::default(), value_name = "MIN:MAX:COUNT")]
    pub gammas: GammaGrid,
    /// Gate time.
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub t: f64,
    /// Fit log-log slopes over points with gamma below this value.
    #[arg(long)]
    pub fit_max: Option<f64>,
    /// Also write a gnuplot script with the curves inlined.
    #[arg(long, value_name = "PATH")]
    pub gnuplot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub common: Common,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_value_types() {
        assert_eq!(
            "3,4".parse::<CodeShape>().unwrap(),
            CodeShape {
                spacing: 3,
                cutoff: 4
            }
        );
        assert!("0,4".parse::<CodeShape>().is_err());
        let grid: GammaGrid = "1e-4:0.5:20".parse().unwrap();
        assert_eq!(grid, GammaGrid::default());
        assert_eq!(grid.to_string().parse::<GammaGrid>().unwrap(), grid);
        assert!("1e-4:0.5".parse::<GammaGrid>().is_err());
        assert!("0.5:0.1:3".parse::<GammaGrid>().is_err());
        let spec: GateSpec = "thm1:1".parse().unwrap();
        assert_eq!(
            spec,
            GateSpec {
                construction: Construction::Theorem1,
                order: Some(1)
            }
        );
        assert_eq!(spec.to_string(), "thm1:1");
        assert!("thm1:x".parse::<GateSpec>().is_err());
    }
}
