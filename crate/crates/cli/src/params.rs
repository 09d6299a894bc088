//! Parsing of the compact parameter syntaxes used on the command line and in
//! config files: input families, grid axes, ranges and binomial parameters.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::error::{CliError, Result};

/// Signal-mode input family.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    /// `coherent:beta=1.0[,phase=0.3]` or `coherent:beta_prime=0.89`.
    Coherent {
        beta: Option<Complex64>,
        beta_prime: Option<Complex64>,
    },
    /// `squeezed:kappa=0.67[,kappa_prime=0.6][,phase=0]`; with both given the
    /// pair is used verbatim (state from `kappa_prime`, probability prefactor
    /// from `kappa`).
    Squeezed {
        kappa: Option<Complex64>,
        kappa_prime: Option<f64>,
    },
    Fock(usize),
    /// `custom:file=state.json` (FockVector JSON).
    Custom(PathBuf),
}

fn key_values(body: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for part in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("expected key=value, got '{part}'")))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(CliError::config(format!("duplicate key '{k}'")));
        }
    }
    Ok(out)
}

fn number(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| CliError::config(format!("{key}: '{v}' is not a number")))?;
    if !x.is_finite() {
        return Err(CliError::config(format!("{key} must be finite")));
    }
    Ok(x)
}

fn take_number(kv: &mut BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
    kv.remove(key).map(|v| number(key, &v)).transpose()
}

fn reject_leftovers(family: &str, kv: &BTreeMap<String, String>) -> Result<()> {
    match kv.keys().next() {
        Some(k) => Err(CliError::config(format!("unknown key '{k}' for {family} input"))),
        None => Ok(()),
    }
}

impl InputSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let (family, body) = text.split_once(':').unwrap_or((text, ""));
        let mut kv = key_values(body)?;
        let phase = take_number(&mut kv, "phase")?.unwrap_or(0.0);
        let spec = match family.trim() {
            "coherent" => {
                let beta = take_number(&mut kv, "beta")?.map(|b| Complex64::from_polar(b, phase));
                let beta_prime = take_number(&mut kv, "beta_prime")?.map(|b| Complex64::from_polar(b, phase));
                InputSpec::Coherent { beta, beta_prime }
            }
            "squeezed" => {
                let kappa = take_number(&mut kv, "kappa")?.map(|k| Complex64::from_polar(k, phase));
                let kappa_prime = take_number(&mut kv, "kappa_prime")?;
                if kappa.is_some_and(|k| k.norm() >= 1.0) || kappa_prime.is_some_and(|k| k.abs() >= 1.0) {
                    return Err(CliError::config("squeezing parameters must lie below 1 in magnitude"));
                }
                InputSpec::Squeezed { kappa, kappa_prime }
            }
            "fock" => {
                let n = kv.remove("n").unwrap_or_else(|| "0".into());
                let n = n
                    .parse()
                    .map_err(|_| CliError::config(format!("fock: '{n}' is not a photon number")))?;
                InputSpec::Fock(n)
            }
            "custom" => {
                let file = kv
                    .remove("file")
                    .ok_or_else(|| CliError::config("custom input needs file=PATH"))?;
                InputSpec::Custom(PathBuf::from(file))
            }
            other => return Err(CliError::config(format!("unknown input family '{other}'"))),
        };
        reject_leftovers(family, &kv)?;
        Ok(spec)
    }
}

/// `a:b:n` — `n` evenly spaced points from `a` to `b` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn parse(key: &str, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::config(format!("{key}: expected a:b:n, got '{text}'")));
        }
        let min = number(key, parts[0])?;
        let max = number(key, parts[1])?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| CliError::config(format!("{key}: '{}' is not a point count", parts[2])))?;
        if n == 0 || (n > 1 && !(min < max)) || (n == 1 && min != max) {
            return Err(CliError::config(format!("{key}: need min < max and n ≥ 2 (or a:a:1)")));
        }
        Ok(Axis { min, max, n })
    }

    pub fn single(v: f64) -> Self {
        Axis { min: v, max: v, n: 1 }
    }

    pub fn points(&self) -> Vec<f64> {
        photon_adder::phasespace::linspace(self.min, self.max, self.n)
    }
}

/// `x=a:b:n,p=a:b:n` (or `phi=` in place of `p` for quadrature surfaces).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    axes: BTreeMap<String, Axis>,
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut axes = BTreeMap::new();
        for (k, v) in key_values(text)? {
            if !matches!(k.as_str(), "x" | "p" | "phi") {
                return Err(CliError::config(format!("unknown grid axis '{k}'")));
            }
            axes.insert(k.clone(), Axis::parse(&k, &v)?);
        }
        Ok(GridSpec { axes })
    }

    pub fn axis(&self, key: &str) -> Option<Axis> {
        self.axes.get(key).copied()
    }

    pub fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.axes.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::config(format!(
                "grid axis '{k}' does not apply here (expected {})",
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }
}

/// `N=5,p=0.8`.
pub fn parse_binomial(text: &str) -> Result<photon_adder::mixtures::BinomialParams> {
    let mut kv = key_values(text)?;
    let n = kv
        .remove("N")
        .ok_or_else(|| CliError::config("binomial needs N=..."))?;
    let n: usize = n
        .parse()
        .map_err(|_| CliError::config(format!("binomial N: '{n}' is not a count")))?;
    let p = take_number(&mut kv, "p")?.ok_or_else(|| CliError::config("binomial needs p=..."))?;
    reject_leftovers("binomial", &kv)?;
    Ok(photon_adder::mixtures::BinomialParams::new(n, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_specs() {
        assert_eq!(
            InputSpec::parse("coherent:beta=1.0").unwrap(),
            InputSpec::Coherent {
                beta: Some(Complex64::new(1.0, 0.0)),
                beta_prime: None
            }
        );
        let s = InputSpec::parse("squeezed:kappa=0.67,kappa_prime=0.6").unwrap();
        assert!(matches!(s, InputSpec::Squeezed { kappa: Some(_), kappa_prime: Some(k) } if k == 0.6));
        assert_eq!(InputSpec::parse("fock:n=2").unwrap(), InputSpec::Fock(2));
        assert!(matches!(InputSpec::parse("squeezed").unwrap(), InputSpec::Squeezed { kappa: None, kappa_prime: None }));
        assert!(InputSpec::parse("squeezed:kappa=1.2").is_err());
        assert!(InputSpec::parse("coherent:gamma=1").is_err());
        assert!(InputSpec::parse("thermal:n=1").is_err());
        assert!(InputSpec::parse("coherent:beta=abc").is_err());
        assert!(InputSpec::parse("custom").is_err());
    }

    #[test]
    fn grids_and_axes() {
        let g = GridSpec::parse("x=-6:6:201,p=-5:5:11").unwrap();
        assert_eq!(g.axis("x").unwrap().n, 201);
        assert_eq!(g.axis("p").unwrap().points()[10], 5.0);
        assert!(g.only(&["x", "phi"]).is_err());
        assert!(GridSpec::parse("x=6:-6:10").is_err());
        assert!(GridSpec::parse("q=0:1:2").is_err());
        assert!(Axis::parse("r", "0:1").is_err());
        assert_eq!(Axis::parse("r", "2:2:1").unwrap().points(), vec![2.0]);
    }

    #[test]
    fn binomial() {
        let b = parse_binomial("N=5,p=0.8").unwrap();
        assert_eq!((b.n, b.p), (5, 0.8));
        assert!(parse_binomial("N=5").is_err());
        assert!(parse_binomial("N=5,p=1.5").is_err());
    }
}
