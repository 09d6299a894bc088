//! Beam-splitter conditioning: the zero-click photon-added state and its
//! probability, the general click statistics, and the exact two-mode oracle.
//!
//! The signal `|Φ⟩` enters port 1 and the Fock state `|n₀⟩` enters port 2.
//! Recording no photons in output port 2 leaves port 1 in
//!
//! ```text
//! |Ψ_{n₀}⟩ ∝ (â†)^{n₀} T^{n̂} |Φ⟩,
//! ```
//!
//! with probability `P(n₀) = |R|^{2n₀} Σ_n |T|^{2n} C(n+n₀, n₀) |⟨n|Φ⟩|²`.
//! Writing `𝒩_{n₀} = ‖(â†)^{n₀} T^{n̂} |Φ⟩‖²` for a pure input, the two are
//! tied by `P(n₀) = |R|^{2n₀} 𝒩_{n₀} / n₀!`.

mod oracle;

pub use oracle::{factored_evolve, two_mode_evolve, TwoModeState};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{log_add, FockVector};
use crate::specfun::{ln_abs_jacobi, ln_binomial, ln_fact, CompensatedSum};

/// Largest ancilla photon number accepted by the closed forms.
pub const MAX_N0: usize = 512;

/// Lossless beam splitter with `T = cos θ e^{iφ_T}` and `R = sin θ e^{iφ_R}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    pub theta: f64,
    pub phi_t: f64,
    pub phi_r: f64,
}

impl BeamSplitter {
    pub fn new(theta: f64, phi_t: f64, phi_r: f64) -> Result<Self> {
        if !(theta.is_finite() && phi_t.is_finite() && phi_r.is_finite()) {
            return Err(Error::invalid("beam-splitter angles must be finite"));
        }
        Ok(BeamSplitter { theta, phi_t, phi_r })
    }

    /// From the transmissivity `|T|²` with `θ ∈ [0, π/2]`.
    pub fn from_transmissivity(t2: f64, phi_t: f64, phi_r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t2) {
            return Err(Error::invalid(format!("|T|² = {t2} must lie in [0, 1]")));
        }
        Self::new(t2.sqrt().acos(), phi_t, phi_r)
    }

    // θ = π/2 in floating point leaves cos θ ≈ 6e-17; snap such residues so
    // total reflection/transmission take their exact branches.
    fn cos_sin(&self) -> (f64, f64) {
        let snap = |v: f64| if v.abs() < 4.0 * f64::EPSILON { 0.0 } else { v };
        (snap(self.theta.cos()), snap(self.theta.sin()))
    }

    pub fn t(&self) -> Complex64 {
        Complex64::from_polar(self.cos_sin().0, self.phi_t)
    }

    pub fn r(&self) -> Complex64 {
        Complex64::from_polar(self.cos_sin().1, self.phi_r)
    }

    pub fn t2(&self) -> f64 {
        let c = self.cos_sin().0;
        c * c
    }

    pub fn r2(&self) -> f64 {
        let s = self.cos_sin().1;
        s * s
    }
}

/// Normalized conditional state with its success probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalResult {
    pub state: FockVector,
    pub probability: f64,
    /// `ln 𝒩_{n₀}`, the log squared norm of the unnormalized photon-added state
    /// (absent for oracle-based results).
    pub ln_norm: Option<f64>,
}

/// Zero-click conditional state `(â†)^{n₀} T^{n̂}|Φ⟩` (normalized) and `P(n₀)`.
///
/// Amplitudes are assembled in the log domain so large `n₀` does not overflow.
pub fn conditional_zero_click(
    input: &FockVector,
    n0: usize,
    bs: &BeamSplitter,
) -> Result<ConditionalResult> {
    if n0 > MAX_N0 {
        return Err(Error::invalid(format!("n0 = {n0} exceeds {MAX_N0}")));
    }
    if input.cutoff() + n0 > crate::fock::HARD_CAP {
        return Err(Error::CapExceeded {
            requested: input.cutoff() + n0,
            cap: crate::fock::HARD_CAP,
        });
    }
    let t = bs.t();
    let ln_t = t.norm().ln();
    let mut ln_mag = vec![f64::NEG_INFINITY; input.amps().len()];
    let mut phase = vec![Complex64::new(0.0, 0.0); input.amps().len()];
    for (n, c) in input.amps().iter().enumerate() {
        if c.norm_sqr() == 0.0 || (n > 0 && t.norm() == 0.0) {
            continue;
        }
        let tn = if n == 0 { 0.0 } else { n as f64 * ln_t };
        ln_mag[n] = tn + c.norm().ln() + 0.5 * (ln_fact(n + n0) - ln_fact(n));
        phase[n] = Complex64::from_polar(1.0, n as f64 * bs.phi_t + c.arg());
    }
    let ln_norm = ln_mag.iter().fold(f64::NEG_INFINITY, |acc, &l| log_add(acc, 2.0 * l));
    if ln_norm == f64::NEG_INFINITY {
        return Err(Error::Degenerate(
            "T^n|Φ⟩ vanishes (no transmitted component), conditional state undefined".into(),
        ));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); input.amps().len() + n0];
    for n in 0..input.amps().len() {
        if ln_mag[n] > f64::NEG_INFINITY {
            amps[n + n0] = phase[n] * (ln_mag[n] - 0.5 * ln_norm).exp();
        }
    }
    let tail = output_tail(input, n0, ln_t, ln_norm);
    let state = FockVector::from_parts(amps, tail)?;
    let diag: Vec<f64> = input.amps().iter().map(|a| a.norm_sqr()).collect();
    let probability = probability_zero_click(&diag, n0, bs);
    Ok(ConditionalResult {
        state,
        probability,
        ln_norm: Some(ln_norm),
    })
}

/// Relative tail of the conditional state inherited from the input tail.
///
/// Mass beyond the cutoff is amplified by at most
/// `sup_{n > N} |T|^{2n} (n+n₀)!/n!`; the supremum is attained where the
/// (log-concave) factor stops increasing. For `|T| = 1` the factor grows
/// without bound and the value at `N + 1` is reported as an estimate.
fn output_tail(input: &FockVector, n0: usize, ln_t: f64, ln_norm: f64) -> f64 {
    if input.tail_bound() == 0.0 {
        return 0.0;
    }
    let g = |n: usize| 2.0 * n as f64 * ln_t + ln_fact(n + n0) - ln_fact(n);
    let mut n = input.cutoff() + 1;
    if ln_t < 0.0 {
        while n < 100_000 && g(n + 1) > g(n) {
            n += 1;
        }
    }
    (input.tail_bound().ln() + g(n) - ln_norm).exp().min(1.0)
}

/// `P(n₀) = |R|^{2n₀} Σ_{n₁} |T|^{2n₁} C(n₁+n₀, n₀) diag[n₁]`.
pub fn probability_zero_click(diag: &[f64], n0: usize, bs: &BeamSplitter) -> f64 {
    let (t2, r2) = (bs.t2(), bs.r2());
    if r2 == 0.0 {
        return if n0 == 0 { diag.iter().copied().collect::<CompensatedSum>().value() } else { 0.0 };
    }
    let ln_pre = n0 as f64 * r2.ln();
    let mut sum = CompensatedSum::new();
    for (n1, &d) in diag.iter().enumerate() {
        if d <= 0.0 {
            continue;
        }
        let ln_tn = if n1 == 0 {
            0.0
        } else if t2 == 0.0 {
            break;
        } else {
            n1 as f64 * t2.ln()
        };
        sum.add((ln_pre + ln_tn + ln_binomial(n1 + n0, n0) + d.ln()).exp());
    }
    sum.value()
}

/// Probability of recording `m₂` photons in output port 2 with `n₀` photons
/// fed into input port 2.
///
/// Input photon number `n₁` reaches `|k, m₂⟩`, `k = n₁ + n₀ − m₂`, with the
/// squared Wigner small-d element of the block `N = n₁ + n₀`:
///
/// ```text
/// C(N−q, q+a) / C(q+b, b) · |R|^{2a} |T|^{2b} · P_q^{(a,b)}(|T|² − |R|²)²,
/// q = min(n₁, n₀, k, m₂),  a = |k − n₁|,  b = N − 2q − a.
/// ```
///
/// The Jacobi polynomial has the lowest possible degree and is evaluated by
/// its recurrence; explicit alternating sums for the same element cancel
/// catastrophically once `|T|²` is small and the photon numbers grow.
/// Distinct `n₁` land on distinct `k`, so only the diagonal of the input
/// enters.
pub fn probability_click(diag: &[f64], n0: usize, m2: usize, bs: &BeamSplitter) -> f64 {
    let (t2, r2) = (bs.t2(), bs.r2());
    let x = t2 - r2;
    let mut sum = CompensatedSum::new();
    for (n1, &d) in diag.iter().enumerate() {
        let n = n1 + n0;
        if d <= 0.0 || n < m2 {
            continue;
        }
        let k = n - m2;
        let q = n1.min(n0).min(k).min(m2);
        let a = k.abs_diff(n1);
        let b = n - 2 * q - a;
        let (Some(lr), Some(lt)) = (ln_pow(r2, a), ln_pow(t2, b)) else {
            continue;
        };
        let lp = ln_abs_jacobi(q, a as f64, b as f64, x);
        let ln_p = ln_binomial(n - q, q + a) - ln_binomial(q + b, b) + lr + lt + 2.0 * lp;
        sum.add(d * ln_p.exp());
    }
    sum.value()
}

/// `ln(base^e)`, or `None` when the power vanishes.
fn ln_pow(base: f64, e: usize) -> Option<f64> {
    match (e, base) {
        (0, _) => Some(0.0),
        (_, 0.0) => None,
        _ => Some(e as f64 * base.ln()),
    }
}

/// Conditional state for an arbitrary click number, computed by the oracle.
pub fn conditional_general(
    input: &FockVector,
    n0: usize,
    m2: usize,
    bs: &BeamSplitter,
) -> Result<ConditionalResult> {
    let out = two_mode_evolve(input, n0, bs)?;
    let amps = out.project_mode2(m2);
    let probability = amps.iter().map(|a| a.norm_sqr()).collect::<CompensatedSum>().value();
    if !(probability > 0.0) {
        return Err(Error::ZeroProbability);
    }
    let state = FockVector::from_parts(amps, input.tail_bound())?.normalized()?;
    Ok(ConditionalResult {
        state,
        probability,
        ln_norm: None,
    })
}
