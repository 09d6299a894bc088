use std::f64::consts::PI;
use std::io::Write;

use log::info;
use num_complex::Complex64;

use photon_adder::added_coherent::{
    pacs_coefficients, pacs_optimal_beta, pacs_probability, pacs_quadrature, PacsParams,
};
use photon_adder::added_squeezed::{
    cat_components, component_husimi_asymptotic_with_norm, component_husimi_with_norm,
    component_ln_norm, pasv_coefficients, pasv_husimi, pasv_photon_dist, pasv_probability,
    pasv_probability_exact, pasv_probability_exact_with, pasv_probability_with, pasv_quadrature,
    pasv_wigner, PasvParams,
};
use photon_adder::conditional::conditional_zero_click;
use photon_adder::fock::{
    coherent_state, fock_state, photon_number_distribution, squeezed_vacuum,
};
use photon_adder::io::{fmt_f64, state_from_json, state_to_json};
use photon_adder::mixtures::{
    fringe_visibility, mixed_probability, mixed_quadrature, BinomialParams, Signal, WeightMode,
};
use photon_adder::phasespace::{
    husimi, quadrature_distribution, wigner, PhaseSpaceGrid, PhaseSpaceMap, WignerOptions,
};
use photon_adder::verify::{self, VerifyOptions};
use photon_adder::{BeamSplitter, FockVector};

use crate::error::{CliError, Result};
use crate::params::{Axis, InputSpec};
use crate::settings::{Format, Kind, Settings};
use crate::Command;

pub fn run(cmd: Command, s: &Settings) -> Result<()> {
    if s.format == Format::Json && cmd != Command::State {
        return Err(CliError::config("json output is only available for `state`"));
    }
    let text = match cmd {
        Command::Probability => probability(s)?,
        Command::Quadrature => quadrature(s)?,
        Command::PhotonDist => photon_dist(s)?,
        Command::Wigner => phase_space_map(s, Kind::Wigner)?,
        Command::Husimi => phase_space_map(s, Kind::Husimi)?,
        Command::Cat => cat(s)?,
        Command::Mixed => mixed(s)?,
        Command::State => state(s)?,
        Command::Verify => {
            let report = verify::run(&VerifyOptions {
                inject_parity_flip: s.inject_parity_flip,
            });
            emit(s, &report.to_text())?;
            return if report.passed() { Ok(()) } else { Err(CliError::VerifyFailed) };
        }
    };
    emit(s, &text)
}

fn emit(s: &Settings, text: &str) -> Result<()> {
    match &s.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth an error exit
            let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
            Ok(())
        }
    }
}

/// Long-format CSV accumulator.
struct Table {
    out: String,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Table {
            out: format!("{}\n", headers.join(",")),
        }
    }

    /// One row; the leading `n0` is printed as an integer.
    fn row(&mut self, n0: usize, values: &[f64]) {
        self.out.push_str(&n0.to_string());
        for v in values {
            self.out.push(',');
            self.out.push_str(&fmt_f64(*v));
        }
        self.out.push('\n');
    }
}

const SQUEEZED_DEFAULT: &str = "squeezed:kappa=0.67,kappa_prime=0.6";

fn input_or(s: &Settings, default: &str) -> InputSpec {
    s.input
        .clone()
        .unwrap_or_else(|| InputSpec::parse(default).expect("built-in default parses"))
}

fn n0_or(s: &Settings, default: &[usize]) -> Vec<usize> {
    s.n0.clone().unwrap_or_else(|| default.to_vec())
}

fn load_custom(path: &std::path::Path) -> Result<FockVector> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    Ok(state_from_json(&text)?)
}

/// Input state of the signal mode (only for specs that name the input itself).
fn input_state(spec: &InputSpec, eps: f64) -> Result<FockVector> {
    Ok(match spec {
        InputSpec::Coherent { beta: Some(b), .. } => coherent_state(*b, eps)?,
        InputSpec::Coherent { beta: None, beta_prime: None } => coherent_state(Complex64::new(1.0, 0.0), eps)?,
        InputSpec::Squeezed { kappa: Some(k), .. } => squeezed_vacuum(*k, eps)?,
        InputSpec::Fock(n) => fock_state(*n)?,
        InputSpec::Custom(path) => load_custom(path)?,
        _ => {
            return Err(CliError::config(
                "this command needs the input state itself (beta= or kappa=), not the output parameter",
            ))
        }
    })
}

#[derive(Debug, Clone, Copy)]
enum ClosedForm {
    Coherent(PacsParams),
    /// Real-parameter form and the phase offset to add to φ.
    Squeezed(PasvParams, f64),
}

/// The conditional state for one ancilla photon number.
struct Conditioned {
    n0: usize,
    closed: Option<ClosedForm>,
    state: FockVector,
    /// `None` when only the output parameter was given.
    probability: Option<f64>,
}

impl Conditioned {
    fn quadrature(&self, phi: f64, xs: &[f64]) -> Result<Vec<f64>> {
        match self.closed {
            Some(ClosedForm::Coherent(p)) => Ok(xs.iter().map(|&x| pacs_quadrature(x, phi, &p)).collect()),
            Some(ClosedForm::Squeezed(p, shift)) => {
                xs.iter().map(|&x| Ok(pasv_quadrature(x, phi + shift, &p)?)).collect()
            }
            None => Ok(quadrature_distribution(&self.state, phi, xs)),
        }
    }

    /// Real squeezed-family parameters when the closed phase-space forms apply.
    fn real_squeezed(&self) -> Option<PasvParams> {
        match self.closed {
            Some(ClosedForm::Squeezed(p, shift)) if shift == 0.0 => Some(p),
            _ => None,
        }
    }
}

fn condition(spec: &InputSpec, bs: &BeamSplitter, n0: usize, s: &Settings) -> Result<Conditioned> {
    let eps = s.eps;
    match spec {
        InputSpec::Coherent { beta, beta_prime } => {
            let (p, prob) = match (beta, beta_prime) {
                (_, Some(bp)) => {
                    if beta.is_some() {
                        log::warn!("both beta and beta_prime given; the state uses beta_prime");
                    }
                    (PacsParams::new(*bp, n0), beta.map(|b| pacs_probability(b, bs, n0)))
                }
                (Some(b), None) => (PacsParams::from_input(*b, bs, n0), Some(pacs_probability(*b, bs, n0))),
                (None, None) => {
                    let b = Complex64::new(1.0, 0.0);
                    (PacsParams::from_input(b, bs, n0), Some(pacs_probability(b, bs, n0)))
                }
            };
            Ok(Conditioned {
                n0,
                closed: Some(ClosedForm::Coherent(p)),
                state: pacs_coefficients(&p, eps)?,
                probability: prob,
            })
        }
        InputSpec::Squeezed { kappa, kappa_prime } => {
            let (p, shift, prob) = match (kappa, kappa_prime) {
                (Some(k), Some(kp)) => {
                    // verbatim pair: the state from κ′, the probability prefactor from κ
                    let prob = if s.exact {
                        pasv_probability_exact_with(k.norm(), *kp, bs.r2(), n0)?
                    } else {
                        pasv_probability_with(k.norm(), *kp, bs.r2(), n0)?
                    };
                    (PasvParams::new(*kp, n0)?, 0.0, Some(prob))
                }
                (Some(k), None) => {
                    let (p, shift) = PasvParams::from_input(*k, bs, n0)?;
                    let prob = if s.exact {
                        pasv_probability_exact(k.norm(), bs, n0)?
                    } else {
                        pasv_probability(k.norm(), bs, n0)?
                    };
                    (p, shift, Some(prob))
                }
                (None, Some(kp)) => (PasvParams::new(*kp, n0)?, 0.0, None),
                (None, None) => return Err(CliError::config("squeezed input needs kappa= or kappa_prime=")),
            };
            let real = pasv_coefficients(&p, eps)?;
            let state = if shift == 0.0 {
                real
            } else {
                let amps: Vec<Complex64> = real
                    .amps()
                    .iter()
                    .enumerate()
                    .map(|(n, a)| a * Complex64::from_polar(1.0, (n as f64 - n0 as f64) * shift))
                    .collect();
                FockVector::from_parts(amps, real.tail_bound())?
            };
            Ok(Conditioned {
                n0,
                closed: Some(ClosedForm::Squeezed(p, shift)),
                state,
                probability: prob,
            })
        }
        InputSpec::Fock(_) | InputSpec::Custom(_) => {
            let r = conditional_zero_click(&input_state(spec, eps)?, n0, bs)?;
            Ok(Conditioned {
                n0,
                closed: None,
                state: r.state,
                probability: Some(r.probability),
            })
        }
    }
}

fn conditioned_all(s: &Settings, default_input: &str, default_n0: &[usize]) -> Result<Vec<Conditioned>> {
    let spec = input_or(s, default_input);
    n0_or(s, default_n0)
        .into_iter()
        .map(|n0| condition(&spec, &s.splitter, n0, s))
        .collect()
}

fn probability(s: &Settings) -> Result<String> {
    let spec = input_or(s, "coherent:beta=1");
    let n0s = n0_or(s, &[0, 1, 2, 3, 4]);
    let bs = &s.splitter;
    match &spec {
        InputSpec::Coherent { beta_prime: None, beta } => {
            let phase = beta.map_or(0.0, |b| b.arg());
            let range = s.range.unwrap_or(match beta {
                Some(b) if s.input.is_some() => Axis::single(b.norm()),
                _ => Axis { min: 0.0, max: 5.0, n: 101 },
            });
            let mut t = Table::new(&["n0", "beta", "probability"]);
            for &n0 in &n0s {
                for b in range.points() {
                    t.row(n0, &[b, pacs_probability(Complex64::from_polar(b, phase), bs, n0)]);
                }
                if n0 > 0 {
                    eprintln!("n0 = {n0}: most probable |beta| = {}", fmt_f64(pacs_optimal_beta(bs, n0)?));
                }
            }
            Ok(t.out)
        }
        InputSpec::Squeezed { kappa, kappa_prime: None } => {
            let range = s.range.unwrap_or(match kappa {
                Some(k) if s.input.is_some() => Axis::single(k.norm()),
                _ => Axis { min: 0.0, max: 0.99, n: 100 },
            });
            if range.min < 0.0 || range.max >= 1.0 {
                return Err(CliError::config("the kappa range must lie in [0, 1)"));
            }
            let mut t = Table::new(&["n0", "kappa", "probability"]);
            for &n0 in &n0s {
                for k in range.points() {
                    let p = if s.exact {
                        pasv_probability_exact(k, bs, n0)?
                    } else {
                        pasv_probability(k, bs, n0)?
                    };
                    t.row(n0, &[k, p]);
                }
            }
            Ok(t.out)
        }
        _ => {
            if s.range.is_some() {
                return Err(CliError::config("--range sweeps only coherent:beta or squeezed:kappa inputs"));
            }
            let mut t = Table::new(&["n0", "probability"]);
            for &n0 in &n0s {
                let c = condition(&spec, bs, n0, s)?;
                let p = c.probability.ok_or_else(|| {
                    CliError::config("the success probability needs the input parameter (beta= or kappa=)")
                })?;
                t.row(n0, &[p]);
            }
            Ok(t.out)
        }
    }
}

fn x_axis(s: &Settings, default: Axis) -> Axis {
    s.grid.as_ref().and_then(|g| g.axis("x")).unwrap_or(default)
}

fn quadrature(s: &Settings) -> Result<String> {
    if let Some(g) = &s.grid {
        g.only(&["x", "phi"])?;
    }
    let states = conditioned_all(s, "coherent:beta=1", &[1, 4])?;
    let xs = x_axis(s, Axis { min: -6.0, max: 6.0, n: 121 }).points();
    let phis = match (s.grid.as_ref().and_then(|g| g.axis("phi")), s.phi) {
        (Some(a), _) => a.points(),
        (None, Some(phi)) => vec![phi],
        (None, None) => Axis { min: 0.0, max: PI, n: 61 }.points(),
    };
    let mut t = Table::new(&["n0", "phi", "x", "value"]);
    for c in &states {
        for &phi in &phis {
            for (x, v) in xs.iter().zip(c.quadrature(phi, &xs)?) {
                t.row(c.n0, &[phi, *x, v]);
            }
        }
    }
    Ok(t.out)
}

fn photon_dist(s: &Settings) -> Result<String> {
    let states = conditioned_all(s, SQUEEZED_DEFAULT, &[1, 4])?;
    let mut t = Table::new(&["n0", "n", "probability"]);
    for c in &states {
        let dist = match c.closed {
            Some(ClosedForm::Squeezed(p, _)) => pasv_photon_dist(&p)?,
            _ => photon_number_distribution(&c.state),
        };
        for (n, p) in dist.iter().enumerate() {
            t.row(c.n0, &[n as f64, *p]);
        }
        if let Some(p) = c.probability {
            info!("n0 = {}: success probability {p}", c.n0);
        }
    }
    Ok(t.out)
}

fn grid_or(s: &Settings, half: f64, n: usize) -> Result<PhaseSpaceGrid> {
    let default = Axis { min: -half, max: half, n };
    if let Some(g) = &s.grid {
        g.only(&["x", "p"])?;
    }
    let x = x_axis(s, default);
    let p = s.grid.as_ref().and_then(|g| g.axis("p")).unwrap_or(default);
    Ok(PhaseSpaceGrid::new((x.min, x.max, x.n), (p.min, p.max, p.n))?)
}

fn append_map(t: &mut Table, n0: usize, map: &PhaseSpaceMap) {
    let (xs, ps) = (map.grid.xs(), map.grid.ps());
    for (ix, x) in xs.iter().enumerate() {
        for (ip, p) in ps.iter().enumerate() {
            t.row(n0, &[*x, *p, map.get(ix, ip)]);
        }
    }
}

fn phase_space_map(s: &Settings, kind: Kind) -> Result<String> {
    let states = conditioned_all(s, SQUEEZED_DEFAULT, &[1, 4])?;
    let grid = grid_or(s, 6.0, 121)?;
    let mut t = Table::new(&["n0", "x", "p", "value"]);
    for c in &states {
        let map = match (kind, c.real_squeezed()) {
            (Kind::Wigner, Some(p)) => PhaseSpaceMap::try_from_fn(grid.clone(), |x, pv| pasv_wigner(x, pv, &p))?,
            (Kind::Husimi, Some(p)) => PhaseSpaceMap::try_from_fn(grid.clone(), |x, pv| pasv_husimi(x, pv, &p))?,
            (Kind::Wigner, None) => wigner(&c.state, &grid, &WignerOptions::default()),
            (Kind::Husimi, None) => husimi(&c.state, &grid),
        };
        let (x, p, v) = if kind == Kind::Wigner { map.argmin() } else { map.argmax() };
        let what = if kind == Kind::Wigner { "minimum" } else { "maximum" };
        info!("n0 = {}: {what} {v} at ({x}, {p})", c.n0);
        append_map(&mut t, c.n0, &map);
    }
    Ok(t.out)
}

fn cat(s: &Settings) -> Result<String> {
    let spec = input_or(s, "squeezed:kappa_prime=0.6");
    if !matches!(spec, InputSpec::Squeezed { .. }) {
        return Err(CliError::config("cat needs a squeezed input"));
    }
    let n0s = n0_or(s, &[1, 4, 15]);
    let grid = grid_or(s, 8.0, 161)?;
    let header: &[&str] = match s.kind {
        Kind::Wigner => &["n0", "x", "p", "value"],
        Kind::Husimi => &["n0", "x", "p", "value", "large_n0"],
    };
    let mut t = Table::new(header);
    for n0 in n0s {
        let c = condition(&spec, &s.splitter, n0, s)?;
        let p = match c.closed {
            Some(ClosedForm::Squeezed(p, shift)) => {
                if shift != 0.0 {
                    log::warn!("complex kappa': the components are shown for |kappa'| (rotated frame)");
                }
                p
            }
            _ => unreachable!("squeezed inputs have closed forms"),
        };
        match s.kind {
            Kind::Wigner => {
                let parts = cat_components(&p)?;
                let comp = match s.component {
                    photon_adder::added_squeezed::ComponentSign::Plus => parts.plus,
                    photon_adder::added_squeezed::ComponentSign::Minus => parts.minus,
                };
                let map = wigner(&comp, &grid, &WignerOptions::default());
                let (x, pv, v) = map.argmin();
                eprintln!(
                    "n0 = {n0}: component Wigner minimum {} at ({}, {})",
                    fmt_f64(v),
                    fmt_f64(x),
                    fmt_f64(pv)
                );
                append_map(&mut t, n0, &map);
            }
            Kind::Husimi => {
                if n0 == 0 {
                    return Err(CliError::config("the large-n0 Husimi form needs n0 ≥ 1"));
                }
                let ln_n = component_ln_norm(&p)?;
                let (xs, ps) = (grid.xs(), grid.ps());
                for x in &xs {
                    for pv in &ps {
                        let exact = component_husimi_with_norm(*x, *pv, &p, s.component, ln_n)?;
                        let large = component_husimi_asymptotic_with_norm(*x, *pv, &p, s.component, ln_n)?;
                        t.row(n0, &[*x, *pv, exact, large]);
                    }
                }
            }
        }
    }
    Ok(t.out)
}

fn mixed(s: &Settings) -> Result<String> {
    let spec = input_or(s, "coherent:beta=1");
    if s.n0.is_some() {
        return Err(CliError::config("mixed sums over the ancilla distribution; use --binomial instead of --n0"));
    }
    let bp = s.binomial.unwrap_or(BinomialParams::new(5, 0.8)?);
    let input = input_state(&spec, s.eps)?;
    let diag = photon_number_distribution(&input);
    let bs = &s.splitter;
    let prob = mixed_probability(&diag, &bp, bs, s.weights);
    let mode = match s.weights {
        WeightMode::Average => "average",
        WeightMode::Posterior => "posterior",
    };
    eprintln!("mixed success probability ({mode} weights): {}", fmt_f64(prob));

    if let Some(g) = &s.grid {
        g.only(&["x", "phi"])?;
    }
    let xs = x_axis(s, Axis { min: -8.0, max: 8.0, n: 801 }).points();
    let phis = match (s.grid.as_ref().and_then(|g| g.axis("phi")), s.phi) {
        (Some(a), _) => a.points(),
        (None, Some(phi)) => vec![phi],
        (None, None) => vec![0.0, PI / 2.0],
    };
    let mut out = String::from("phi,x,mixed\n");
    for &phi in &phis {
        let q = mixed_quadrature(Signal::Pure(&input), &bp, bs, s.weights, phi, &xs)?;
        info!("phi = {phi}: fringe visibility {}", fringe_visibility(&q));
        for (x, v) in xs.iter().zip(&q) {
            out.push_str(&format!("{},{},{}\n", fmt_f64(phi), fmt_f64(*x), fmt_f64(*v)));
        }
    }
    Ok(out)
}

fn state(s: &Settings) -> Result<String> {
    let states = conditioned_all(s, "coherent:beta=1", &[1])?;
    match s.format {
        Format::Json => match states.as_slice() {
            [c] => Ok(state_to_json(&c.state) + "\n"),
            _ => Err(CliError::config("json output holds one state; pass a single --n0")),
        },
        Format::Csv => {
            let mut t = Table::new(&["n0", "n", "re", "im"]);
            for c in &states {
                for (n, a) in c.state.amps().iter().enumerate() {
                    t.row(c.n0, &[n as f64, a.re, a.im]);
                }
            }
            Ok(t.out)
        }
    }
}
