//! Command-line flags, the JSON config file that mirrors them, and the
//! merged run configuration.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermichain::InteractionModel;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "fermichain",
    version,
    about = "Batch computations for translationally invariant free-fermion chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Tabulate E(p), E'(p), E''(p) on [0, 2π] and report monotonicity.
    Dispersion,
    /// Fermi points, Fermi sea and phase at chemical potential μ.
    Phase,
    /// Free energy on a temperature grid, with a low-temperature fit.
    FreeEnergy,
    /// Exact (and optionally asymptotic) Rényi entropies over a block-length range.
    Entropy,
    /// Exact versus asymptotic log-determinants of λ + 1 − 2A_L.
    FhCheck,
    /// Universal constants C̃_α and I₁(α).
    Constants,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::Phase => "phase",
            Command::FreeEnergy => "free-energy",
            Command::Entropy => "entropy",
            Command::FhCheck => "fh-check",
            Command::Constants => "constants",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. All are optional so that a config file
/// can supply them; flags given explicitly take precedence.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// JSON file with the same keys as the long flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// haldane-shastry | finite-range | power-law | rational-cubic
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Finite-range coefficients α_1,α_2,...
    #[arg(long, global = true, allow_negative_numbers = true, value_delimiter = ',')]
    pub coeffs: Option<Vec<f64>>,
    /// Power-law exponent ν.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    /// Power-law amplitude.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub amplitude: Option<f64>,
    /// Rational-cubic coupling J.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// Chemical potential.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Rényi indices, comma separated; "inf" selects the α → ∞ limit.
    #[arg(long, global = true, value_delimiter = ',')]
    pub alpha: Option<Vec<String>>,
    /// Block lengths as min:max:step or a comma-separated list.
    #[arg(long = "L", global = true)]
    pub l: Option<String>,
    /// Temperatures as lo:hi:n (geometric) or a comma-separated list.
    #[arg(long, global = true)]
    pub t_grid: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda_re: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda_im: Option<f64>,
    /// Number of momentum samples for `dispersion`.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also write a gnuplot script next to the output file.
    #[arg(long, global = true)]
    pub gnuplot_stub: bool,
    /// Add asymptotic predictions and relative errors to `entropy`.
    #[arg(long, global = true)]
    pub compare: bool,
    /// Omit the wall-clock runtime so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub reproducible: bool,
}

/// Rényi index; serialized as a number or as "inf".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(pub f64);

impl Alpha {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let t = text.trim();
        let value = match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => f64::INFINITY,
            _ => t
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("invalid alpha {t:?}")))?,
        };
        if !(value > 0.0) {
            return Err(CliError::Usage(format!("alpha must be positive, got {t}")));
        }
        Ok(Alpha(value))
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Alpha {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Number(x) => x.to_string(),
            Raw::Text(s) => s,
        };
        Alpha::parse(&text).map_err(serde::de::Error::custom)
    }
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Alpha>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        One(Alpha),
        Many(Vec<Alpha>),
    }
    Ok(Option::<Raw>::deserialize(d)?.map(|r| match r {
        Raw::One(a) => vec![a],
        Raw::Many(v) => v,
    }))
}

/// Flag values after merging with the config file. Serialized back into
/// JSON output; the output path is left out so it does not affect results.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Alpha>>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub gnuplot_stub: bool,
    #[serde(default)]
    pub compare: bool,
    #[serde(default)]
    pub reproducible: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("reading {}", path.display()),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Overlays explicitly given flags on top of `self`.
    pub fn merge(mut self, flags: Flags) -> Result<Self, CliError> {
        macro_rules! overlay {
            ($($field:ident),*) => { $( if flags.$field.is_some() { self.$field = flags.$field; } )* };
        }
        overlay!(model, coeffs, nu, amplitude, j, mu, l, t_grid, lambda_re, lambda_im, points, format, output);
        if let Some(alpha) = flags.alpha {
            self.alpha = Some(alpha.iter().map(|a| Alpha::parse(a)).collect::<Result<_, _>>()?);
        }
        self.gnuplot_stub |= flags.gnuplot_stub;
        self.compare |= flags.compare;
        self.reproducible |= flags.reproducible;
        Ok(self)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn model(&self) -> Result<InteractionModel, CliError> {
        let name = self
            .model
            .as_deref()
            .ok_or_else(|| CliError::Usage("--model is required".into()))?;
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| CliError::Usage(format!("model {name} requires --{flag}")))
        };
        let model = match name {
            "haldane-shastry" | "hs" => InteractionModel::haldane_shastry(),
            "finite-range" => {
                let coeffs = self
                    .coeffs
                    .clone()
                    .ok_or_else(|| CliError::Usage("model finite-range requires --coeffs".into()))?;
                InteractionModel::finite_range(coeffs)?
            }
            "power-law" => InteractionModel::power_law(need(self.nu, "nu")?, self.amplitude.unwrap_or(1.0))?,
            "rational-cubic" => InteractionModel::rational_cubic(need(self.j, "j")?)?,
            other => return Err(CliError::Usage(format!("unknown model {other:?}"))),
        };
        Ok(model)
    }

    pub fn mu(&self) -> Result<f64, CliError> {
        match self.mu {
            Some(mu) if mu.is_finite() => Ok(mu),
            Some(mu) => Err(CliError::Usage(format!("mu must be finite, got {mu}"))),
            None => Err(CliError::Usage("--mu is required".into())),
        }
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.alpha
            .as_ref()
            .map(|v| v.iter().map(|a| a.0).collect())
            .unwrap_or_else(|| vec![1.0])
    }

    pub fn block_lengths(&self, default: &str) -> Result<Vec<usize>, CliError> {
        parse_lengths(self.l.as_deref().unwrap_or(default))
    }

    pub fn temperatures(&self) -> Result<Vec<f64>, CliError> {
        parse_temperatures(self.t_grid.as_deref().unwrap_or("1e-3:1e-2:8"))
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| CliError::Usage(format!("invalid {what} {:?}", s.trim())))
        })
        .collect()
}

pub fn parse_lengths(text: &str) -> Result<Vec<usize>, CliError> {
    let lengths: Vec<usize> = if text.contains(':') {
        let parts: Vec<usize> = text
            .split(':')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("invalid L range {text:?}, expected min:max:step")))?;
        let [min, max, step] = parts[..] else {
            return Err(CliError::Usage(format!("invalid L range {text:?}, expected min:max:step")));
        };
        if step == 0 {
            return Err(CliError::Usage("L step must be positive".into()));
        }
        (min..=max).step_by(step).collect()
    } else {
        parse_list(text, "block length")?
    };
    if lengths.is_empty() {
        return Err(CliError::Usage(format!("L range {text:?} is empty")));
    }
    if lengths.contains(&0) {
        return Err(CliError::Usage("block lengths must be positive".into()));
    }
    Ok(lengths)
}

pub fn parse_temperatures(text: &str) -> Result<Vec<f64>, CliError> {
    let temperatures = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(CliError::Usage(format!("invalid T grid {text:?}, expected lo:hi:n")));
        };
        let bad = || CliError::Usage(format!("invalid T grid {text:?}, expected lo:hi:n"));
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n == 0 || !(lo > 0.0) || !(hi >= lo) {
            return Err(bad());
        }
        fermichain::criticality::geometric_grid(lo, hi, n)
    } else {
        parse_list(text, "temperature")?
    };
    if temperatures.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(CliError::Usage("temperatures must be positive and finite".into()));
    }
    Ok(temperatures)
}
