//! Photon adding with a binomially distributed ancilla photon number.
//!
//! Two ways to weight the conditional members are provided:
//! [`WeightMode::Average`] averages the conditional states with the plain
//! ancilla weights `p̃_{n₀}`; [`WeightMode::Posterior`] uses the post-selected
//! weights `p̃_{n₀} P(n₀) / Σ p̃ P`.

use log::warn;
use serde::Serialize;

use crate::conditional::{conditional_zero_click, probability_zero_click, BeamSplitter};
use crate::error::{Error, Result};
use crate::fock::{FockVector, MixtureSpec};
use crate::phasespace::quadrature_distribution;
use crate::specfun::{ln_binomial, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinomialParams {
    pub n: usize,
    pub p: f64,
}

impl BinomialParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("binomial N must be at least 1"));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid(format!("binomial p = {p} must lie in (0, 1)")));
        }
        Ok(BinomialParams { n, p })
    }

    /// Fano factor `(Δn)²/n̄ = 1 − p`.
    pub fn fano(&self) -> f64 {
        1.0 - self.p
    }
}

/// How conditional members are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum WeightMode {
    #[default]
    Average,
    Posterior,
}

/// `p̃_{n₀} = C(N, n₀) pⁿ⁰ (1−p)^{N−n₀}`.
pub fn binomial_weights(bp: &BinomialParams) -> Vec<f64> {
    let (lp, lq) = (bp.p.ln(), (1.0 - bp.p).ln());
    (0..=bp.n)
        .map(|k| (ln_binomial(bp.n, k) + k as f64 * lp + (bp.n - k) as f64 * lq).exp())
        .collect()
}

/// Signal-mode input: a pure state or a mixture.
#[derive(Debug, Clone, Copy)]
pub enum Signal<'a> {
    Pure(&'a FockVector),
    Mixed(&'a MixtureSpec),
}

impl Signal<'_> {
    fn members(&self) -> Vec<(f64, FockVector)> {
        match self {
            Signal::Pure(s) => vec![(1.0, (*s).clone())],
            Signal::Mixed(m) => m.members(),
        }
    }
}

/// One conditional member of the mixed output.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedMember {
    pub n0: usize,
    pub weight: f64,
    pub probability: f64,
    pub state: FockVector,
}

/// Conditional members `(n₀, weight, P, |Ψ⟩)` for every ancilla photon number
/// (and every signal member), weighted according to `mode`.
///
/// For a fixed `n₀` the signal members are combined by their posterior
/// weights `p_Φ P_Φ(n₀)`, which is what conditioning a mixed signal does.
/// Members whose conditional state is undefined are dropped with a warning
/// and the remaining weights renormalized.
pub fn mixed_members(
    input: Signal<'_>,
    bp: &BinomialParams,
    bs: &BeamSplitter,
    mode: WeightMode,
) -> Result<Vec<MixedMember>> {
    let weights = binomial_weights(bp);
    let signal = input.members();
    let mut out = Vec::new();
    for (n0, &pn) in weights.iter().enumerate() {
        let mut group = Vec::new();
        for (pf, s) in &signal {
            match conditional_zero_click(s, n0, bs) {
                Ok(r) if r.probability > 0.0 => group.push((pf * r.probability, r)),
                Ok(_) | Err(Error::Degenerate(_)) => {
                    warn!("dropping mixture member n0 = {n0}: zero-probability outcome");
                }
                Err(e) => return Err(e),
            }
        }
        let p_n0: f64 = group.iter().map(|(w, _)| w).sum();
        for (w, r) in group {
            let within = w / p_n0;
            let weight = match mode {
                WeightMode::Average => pn * within,
                WeightMode::Posterior => pn * w,
            };
            out.push(MixedMember {
                n0,
                weight,
                probability: r.probability,
                state: r.state,
            });
        }
    }
    let total: f64 = out.iter().map(|m| m.weight).collect::<CompensatedSum>().value();
    if !(total > 0.0) {
        return Err(Error::ZeroProbability);
    }
    for m in &mut out {
        m.weight /= total;
    }
    Ok(out)
}

/// The averaged conditional state as a weighted ensemble.
pub fn mixed_conditional(
    input: Signal<'_>,
    bp: &BinomialParams,
    bs: &BeamSplitter,
    mode: WeightMode,
) -> Result<MixtureSpec> {
    let members = mixed_members(input, bp, bs, mode)?;
    let list: Vec<(f64, FockVector)> = members.into_iter().map(|m| (m.weight, m.state)).collect();
    // renormalization above makes the weights sum to 1 up to rounding
    let sum: f64 = list.iter().map(|(w, _)| w).sum();
    MixtureSpec::pure(list.into_iter().map(|(w, s)| (w / sum, s)).collect())
}

/// Mixed success probability: `Σ p̃ P` (average) or `Σ p̃ P² / Σ p̃ P` (posterior,
/// the mean of `P(n₀)` under the post-selected weights).
pub fn mixed_probability(diag: &[f64], bp: &BinomialParams, bs: &BeamSplitter, mode: WeightMode) -> f64 {
    let w = binomial_weights(bp);
    let p: Vec<f64> = (0..w.len()).map(|n0| probability_zero_click(diag, n0, bs)).collect();
    let plain: f64 = w.iter().zip(&p).map(|(a, b)| a * b).collect::<CompensatedSum>().value();
    match mode {
        WeightMode::Average => plain,
        WeightMode::Posterior => {
            let sq: f64 = w.iter().zip(&p).map(|(a, b)| a * b * b).collect::<CompensatedSum>().value();
            sq / plain
        }
    }
}

/// Averaged quadrature distribution `Σ_members weight · p_member(x, φ)`.
pub fn mixed_quadrature(
    input: Signal<'_>,
    bp: &BinomialParams,
    bs: &BeamSplitter,
    mode: WeightMode,
    phi: f64,
    xs: &[f64],
) -> Result<Vec<f64>> {
    let members = mixed_members(input, bp, bs, mode)?;
    let mut out = vec![0.0; xs.len()];
    for m in &members {
        for (o, v) in out.iter_mut().zip(quadrature_distribution(&m.state, phi, xs)) {
            *o += m.weight * v;
        }
    }
    Ok(out)
}

/// Visibility `(max − min)/(max + min)` of the central fringes: `max` is the
/// largest local maximum and `min` the deepest local minimum lying between
/// the outermost maxima above 5% of the peak. Returns 0 when fewer than two
/// such maxima exist.
pub fn fringe_visibility(values: &[f64]) -> f64 {
    let peak = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let maxima: Vec<usize> = (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > 0.05 * peak)
        .collect();
    if maxima.len() < 2 {
        return 0.0;
    }
    let (lo, hi) = (maxima[0], maxima[maxima.len() - 1]);
    let min = values[lo..=hi].iter().copied().fold(f64::INFINITY, f64::min);
    (peak - min) / (peak + min)
}

/// Number of local maxima above `frac · max`.
pub fn count_maxima(values: &[f64], frac: f64) -> usize {
    let peak = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > frac * peak)
        .count()
}
