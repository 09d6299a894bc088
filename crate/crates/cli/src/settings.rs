//! Command-line options, the optional TOML config file, and their merge.
//! Config keys are the long flag names; flags given on the command line win.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use photon_adder::mixtures::{BinomialParams, WeightMode};
use photon_adder::BeamSplitter;

use crate::error::{CliError, Result};
use crate::params::{parse_binomial, Axis, GridSpec, InputSpec};

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Signal input, e.g. `coherent:beta=1`, `squeezed:kappa=0.67,kappa_prime=0.6`,
    /// `fock:n=2`, `custom:file=state.json`.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Beam-splitter transmissivity |T|² (default 0.8).
    #[arg(long, global = true)]
    t2: Option<f64>,
    /// Transmission phase φ_T.
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi_t: Option<f64>,
    /// Reflection phase φ_R.
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi_r: Option<f64>,
    /// Ancilla photon numbers, comma separated (e.g. `1,4`).
    #[arg(long, global = true)]
    n0: Option<String>,
    /// Binomial ancilla for `mixed`, e.g. `N=5,p=0.8`.
    #[arg(long, global = true)]
    binomial: Option<String>,
    /// Grid axes, e.g. `x=-6:6:121,p=-6:6:121` or `x=-6:6:121,phi=0:3.14159:61`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Single quadrature phase φ.
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `csv` or `json` (json only for `state`).
    #[arg(long, global = true)]
    format: Option<String>,
    /// Mixed-ancilla weighting: `average` or `posterior`.
    #[arg(long, global = true)]
    weights: Option<String>,
    /// Relative tail mass at which Fock expansions are truncated.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Sweep `a:b:n` over |β| or |κ| for `probability`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    range: Option<String>,
    /// Use the exact squeezed-input success probability instead of the closed form.
    #[arg(long, global = true)]
    exact: bool,
    /// Cat component for `cat`: `plus` or `minus`.
    #[arg(long, global = true)]
    component: Option<String>,
    /// Map computed by `cat`: `wigner` or `husimi`.
    #[arg(long, global = true)]
    kind: Option<String>,
    /// TOML file with defaults for any of the options above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, hide = true)]
    inject_parity_flip: bool,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum N0Value {
    One(usize),
    Many(Vec<usize>),
    Text(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    input: Option<String>,
    t2: Option<f64>,
    phi_t: Option<f64>,
    phi_r: Option<f64>,
    n0: Option<N0Value>,
    binomial: Option<String>,
    grid: Option<String>,
    phi: Option<f64>,
    out: Option<PathBuf>,
    format: Option<String>,
    weights: Option<String>,
    eps: Option<f64>,
    range: Option<String>,
    exact: Option<bool>,
    component: Option<String>,
    kind: Option<String>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Wigner,
    Husimi,
}

/// Fully parsed options; fields left `None` take per-command defaults.
#[derive(Debug, Clone)]
pub struct Settings {
    pub input: Option<InputSpec>,
    pub splitter: BeamSplitter,
    pub n0: Option<Vec<usize>>,
    pub binomial: Option<BinomialParams>,
    pub grid: Option<GridSpec>,
    pub phi: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub weights: WeightMode,
    pub eps: f64,
    pub range: Option<Axis>,
    pub exact: bool,
    pub component: photon_adder::added_squeezed::ComponentSign,
    pub kind: Kind,
    pub inject_parity_flip: bool,
}

fn parse_n0_list(text: &str) -> Result<Vec<usize>> {
    let list: Vec<usize> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::config(format!("n0: '{s}' is not a photon number")))
        })
        .collect::<Result<_>>()?;
    if list.is_empty() {
        return Err(CliError::config("n0 list is empty"));
    }
    Ok(list)
}

impl Options {
    pub fn resolve(&self) -> Result<Settings> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let input = self.input.clone().or(file.input);
        let n0 = match (&self.n0, file.n0) {
            (Some(t), _) => Some(parse_n0_list(t)?),
            (None, Some(N0Value::Text(t))) => Some(parse_n0_list(&t)?),
            (None, Some(N0Value::One(n))) => Some(vec![n]),
            (None, Some(N0Value::Many(v))) if !v.is_empty() => Some(v),
            (None, Some(N0Value::Many(_))) => return Err(CliError::config("n0 list is empty")),
            (None, None) => None,
        };
        let splitter = BeamSplitter::from_transmissivity(
            self.t2.or(file.t2).unwrap_or(0.8),
            self.phi_t.or(file.phi_t).unwrap_or(0.0),
            self.phi_r.or(file.phi_r).unwrap_or(0.0),
        )?;
        let format = match self.format.clone().or(file.format).as_deref() {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(f) => return Err(CliError::config(format!("unknown format '{f}'"))),
        };
        let weights = match self.weights.clone().or(file.weights).as_deref() {
            None | Some("average") => WeightMode::Average,
            Some("posterior") => WeightMode::Posterior,
            Some(w) => return Err(CliError::config(format!("unknown weighting '{w}'"))),
        };
        let component = match self.component.clone().or(file.component).as_deref() {
            None | Some("plus") => photon_adder::added_squeezed::ComponentSign::Plus,
            Some("minus") => photon_adder::added_squeezed::ComponentSign::Minus,
            Some(c) => return Err(CliError::config(format!("unknown component '{c}'"))),
        };
        let kind = match self.kind.clone().or(file.kind).as_deref() {
            None | Some("wigner") => Kind::Wigner,
            Some("husimi") => Kind::Husimi,
            Some(k) => return Err(CliError::config(format!("unknown map kind '{k}'"))),
        };
        let eps = self.eps.or(file.eps).unwrap_or(photon_adder::fock::DEFAULT_TAIL);
        if !(eps > 0.0 && eps < 1e-3) {
            return Err(CliError::config(format!("eps = {eps} must lie in (0, 1e-3)")));
        }
        let phi = self.phi.or(file.phi);
        if phi.is_some_and(|p| !p.is_finite()) {
            return Err(CliError::config("phi must be finite"));
        }
        Ok(Settings {
            input: input.as_deref().map(InputSpec::parse).transpose()?,
            splitter,
            n0,
            binomial: self.binomial.clone().or(file.binomial).as_deref().map(parse_binomial).transpose()?,
            grid: self.grid.clone().or(file.grid).as_deref().map(GridSpec::parse).transpose()?,
            phi,
            out: self.out.clone().or(file.out),
            format,
            weights,
            eps,
            range: self.range.clone().or(file.range).as_deref().map(|r| Axis::parse("range", r)).transpose()?,
            exact: self.exact || file.exact.unwrap_or(false),
            component,
            kind,
            inject_parity_flip: self.inject_parity_flip,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flags_override_config() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "t2 = 0.5\nn0 = [1, 2]\ninput = \"fock:n=1\"\nweights = \"posterior\"").unwrap();
        let opts = Options {
            config: Some(f.path().to_path_buf()),
            t2: Some(0.3),
            ..Options::default()
        };
        let s = opts.resolve().unwrap();
        assert!((s.splitter.t2() - 0.3).abs() < 1e-15);
        assert_eq!(s.n0, Some(vec![1, 2]));
        assert_eq!(s.input, Some(InputSpec::Fock(1)));
        assert_eq!(s.weights, WeightMode::Posterior);
    }

    #[test]
    fn bad_config_is_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "t3 = 0.5").unwrap();
        let opts = Options {
            config: Some(f.path().to_path_buf()),
            ..Options::default()
        };
        assert!(matches!(opts.resolve(), Err(CliError::Config(_))));
        let opts = Options {
            t2: Some(1.5),
            ..Options::default()
        };
        assert!(matches!(opts.resolve(), Err(CliError::Config(_))));
    }
}
