//! Photon-added squeezed vacuum `∝ (â†)^{n₀} Ŝ|0⟩` with real `κ′ = T²κ`.
//!
//! Unnormalized amplitudes are `b_{n,n₀} = √(n!) (κ′/2)^m / m!` on
//! `n = n₀ + 2m`, with squared norm
//! `𝒩″_{n₀} = n₀! F((n₀+1)/2, (n₀+2)/2; 1; κ′²)`.
//!
//! A complex `κ′ = |κ′| e^{iϑ}` only rotates phase space: its coefficients
//! differ from the real-`|κ′|` ones by `e^{i(n−n₀)ϑ/2}`, so the quadrature
//! distribution at phase `φ` equals the real-parameter one at `φ + ϑ/2`
//! (see [`PasvParams::from_complex`]).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{fock_state, log_add, truncate_series, FockVector};
use crate::phasespace::{wigner_point, WignerOptions};
use crate::specfun::{
    erfcx_complex, hermite_unchecked, hyp2f1, ln_binomial, ln_fact, ln_gamma_half, CompensatedSum,
};
use crate::conditional::BeamSplitter;

/// Photon-added squeezed vacuum parameters (real `κ′`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PasvParams {
    pub kappa_prime: f64,
    pub n0: usize,
}

impl PasvParams {
    pub fn new(kappa_prime: f64, n0: usize) -> Result<Self> {
        if !(kappa_prime.abs() < 1.0) {
            return Err(Error::invalid(format!("|κ′| = {} must be below 1", kappa_prime.abs())));
        }
        Ok(PasvParams { kappa_prime, n0 })
    }

    /// Splits a complex `κ′` into real parameters and the phase offset `ϑ/2`
    /// to add to `φ` when evaluating quadrature distributions.
    pub fn from_complex(kappa_prime: Complex64, n0: usize) -> Result<(Self, f64)> {
        Ok((Self::new(kappa_prime.norm(), n0)?, 0.5 * kappa_prime.arg()))
    }

    /// Parameters produced from a squeezed input `κ` by the beam splitter
    /// (the phase of `T²κ` is returned as in [`Self::from_complex`]).
    pub fn from_input(kappa: Complex64, bs: &BeamSplitter, n0: usize) -> Result<(Self, f64)> {
        Self::from_complex(bs.t() * bs.t() * kappa, n0)
    }

    /// `ln 𝒩″_{n₀}`.
    pub fn ln_norm_pp(&self) -> Result<f64> {
        let n0 = self.n0 as f64;
        let f = hyp2f1(0.5 * (n0 + 1.0), 0.5 * (n0 + 2.0), 1.0, self.kappa_prime.powi(2))?;
        if !f.is_finite() {
            return Err(Error::Overflow("hypergeometric normalization".into()));
        }
        Ok(ln_fact(self.n0) + f.ln())
    }
}

/// Which parity component of the cat decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentSign {
    Plus,
    Minus,
}

impl ComponentSign {
    fn value(self) -> f64 {
        match self {
            ComponentSign::Plus => 1.0,
            ComponentSign::Minus => -1.0,
        }
    }
}

/// `𝒩′_{n₀} = √(1−κ′²) 𝒩″_{n₀}`.
pub fn pasv_norm(p: &PasvParams) -> Result<f64> {
    Ok((1.0 - p.kappa_prime.powi(2)).sqrt() * p.ln_norm_pp()?.exp())
}

/// Normalized Fock coefficients.
pub fn pasv_coefficients(p: &PasvParams, eps: f64) -> Result<FockVector> {
    coefficients_impl(p, eps, false)
}

/// `flip_parity` populates the wrong parity class instead; it exists so the
/// verification suite can demonstrate that it detects such a defect.
pub(crate) fn coefficients_impl(p: &PasvParams, eps: f64, flip_parity: bool) -> Result<FockVector> {
    let k = p.kappa_prime;
    let n0 = p.n0;
    if k == 0.0 {
        return fock_state(n0);
    }
    let k2 = k * k;
    let off = usize::from(flip_parity);
    let ln_norm = if flip_parity { None } else { Some(0.0) };
    let ln_nn = p.ln_norm_pp()?;
    // |b|² on n = n₀ + 2m (+1 when flipped); the half-integer exponent keeps
    // the flipped variant smooth
    let ln_w = |m: usize| {
        let j = 2 * m + off;
        ln_fact(n0 + j) - 2.0 * ln_gamma_half(j + 2) + j as f64 * (k.abs() / 2.0).ln() - ln_nn
    };
    let ratio = |m: usize| {
        let j = (2 * m + off) as f64;
        let f = (n0 as f64 + j + 1.0) * (n0 as f64 + j + 2.0) / ((j + 2.0) * (j + 2.0));
        k2 * f.max(1.0)
    };
    let t = truncate_series(eps, n0 + off, 2, ln_norm, ln_w, ratio)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); n0 + off + 2 * (t.ln_w.len() - 1) + 1];
    let mut total = f64::NEG_INFINITY;
    for lw in &t.ln_w {
        total = log_add(total, *lw);
    }
    for (m, lw) in t.ln_w.iter().enumerate() {
        let sign = if k < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
        let lw = if flip_parity { lw - total } else { *lw };
        amps[n0 + off + 2 * m] = Complex64::new(sign * (0.5 * lw).exp(), 0.0);
    }
    FockVector::from_parts(amps, t.rel_tail)
}

/// Success probability in the commonly quoted form
/// `|R|^{2n₀} √(1−|κ|²) F(n₀+1, ½; 1; κ′²)`, `κ′ = |T|²κ`.
///
/// This agrees with the exact zero-click probability only for `n₀ = 0`;
/// see [`pasv_probability_exact`].
pub fn pasv_probability(kappa: f64, bs: &BeamSplitter, n0: usize) -> Result<f64> {
    pasv_probability_with(kappa, bs.t2() * kappa, bs.r2(), n0)
}

/// The quoted form with `|κ|`, `κ′` and `|R|²` supplied independently.
pub fn pasv_probability_with(kappa: f64, kappa_prime: f64, r2: f64, n0: usize) -> Result<f64> {
    check_kappa(kappa)?;
    let f = hyp2f1(n0 as f64 + 1.0, 0.5, 1.0, kappa_prime * kappa_prime)?;
    Ok(r2.powi(n0 as i32) * (1.0 - kappa * kappa).sqrt() * f)
}

/// Exact zero-click probability for a squeezed input:
/// `|R|^{2n₀} √(1−|κ|²) F((n₀+1)/2, (n₀+2)/2; 1; κ′²) = |R|^{2n₀} √(1−|κ|²) 𝒩″/n₀!`.
pub fn pasv_probability_exact(kappa: f64, bs: &BeamSplitter, n0: usize) -> Result<f64> {
    pasv_probability_exact_with(kappa, bs.t2() * kappa, bs.r2(), n0)
}

pub fn pasv_probability_exact_with(kappa: f64, kappa_prime: f64, r2: f64, n0: usize) -> Result<f64> {
    check_kappa(kappa)?;
    let n = n0 as f64;
    let f = hyp2f1(0.5 * (n + 1.0), 0.5 * (n + 2.0), 1.0, kappa_prime * kappa_prime)?;
    Ok(r2.powi(n0 as i32) * (1.0 - kappa * kappa).sqrt() * f)
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa.abs() < 1.0) {
        return Err(Error::invalid(format!("|κ| = {} must be below 1", kappa.abs())));
    }
    Ok(())
}

/// Photon-number distribution (zero below `n₀` and on the other parity).
pub fn pasv_photon_dist(p: &PasvParams) -> Result<Vec<f64>> {
    Ok(pasv_coefficients(p, 1e-30)?.amps().iter().map(|a| a.norm_sqr()).collect())
}

/// Mean photon number from the hypergeometric derivative formula.
pub fn pasv_mean_n(p: &PasvParams) -> Result<f64> {
    let n = p.n0 as f64;
    let z = p.kappa_prime.powi(2);
    let num = hyp2f1(0.5 * (n + 3.0), 0.5 * (n + 4.0), 2.0, z)?;
    let den = hyp2f1(0.5 * (n + 1.0), 0.5 * (n + 2.0), 1.0, z)?;
    Ok(n + 0.5 * z * (n + 1.0) * (n + 2.0) * num / den)
}

/// Quadrature distribution
/// `2^{−n₀}/(𝒩″√(πΔ^{n₀+1})) e^{−(1−κ′²)x²/Δ} |H_{n₀}(√((1+κ′e^{2iφ})/Δ) x)|²`
/// with `Δ = 1 + κ′² + 2κ′ cos 2φ`.
pub fn pasv_quadrature(x: f64, phi: f64, p: &PasvParams) -> Result<f64> {
    quadrature_with_sign(x, phi, p, 1.0)
}

/// The same expression with the signs of the `κ′ cos 2φ` and `κ′e^{2iφ}`
/// terms reversed, as it is often printed. It equals
/// [`pasv_quadrature`] at `φ + π/2`.
pub fn pasv_quadrature_printed(x: f64, phi: f64, p: &PasvParams) -> Result<f64> {
    quadrature_with_sign(x, phi, p, -1.0)
}

fn quadrature_with_sign(x: f64, phi: f64, p: &PasvParams, s: f64) -> Result<f64> {
    let k = p.kappa_prime;
    let delta = 1.0 + k * k + s * 2.0 * k * (2.0 * phi).cos();
    let arg = ((1.0 + s * k * Complex64::from_polar(1.0, 2.0 * phi)) / delta).sqrt() * x;
    let h = hermite_unchecked(p.n0, arg).norm_sqr();
    let n0 = p.n0 as f64;
    let ln_pre = -n0 * 2f64.ln() - p.ln_norm_pp()? - 0.5 * (PI.ln() + (n0 + 1.0) * delta.ln())
        - (1.0 - k * k) * x * x / delta;
    Ok(ln_pre.exp() * h)
}

/// Wigner function from the finite Laguerre-type sum
/// `κ′^{n₀}√2/(π𝒩″[2(1−κ′²)]^{n₀+½}) e^{−λx²−p²/λ} Σ_k C(n₀,k)² k! (−2/κ′)^k |H_{n₀−k}(i√(λ/κ′)(x + ip/λ))|²`,
/// `λ = (1−κ′)/(1+κ′)`.
///
/// `κ′ = 0` (a Fock state) is evaluated through the generic Wigner
/// transform; negative `κ′` is the positive case rotated by π/2.
pub fn pasv_wigner(x: f64, p_var: f64, params: &PasvParams) -> Result<f64> {
    let k = params.kappa_prime;
    if k == 0.0 {
        let s = fock_state(params.n0)?;
        return Ok(wigner_point(&s, x, p_var, &WignerOptions::default()));
    }
    if k < 0.0 {
        let pos = PasvParams { kappa_prime: -k, n0: params.n0 };
        return pasv_wigner(p_var, -x, &pos);
    }
    let n0 = params.n0;
    let lam = (1.0 - k) / (1.0 + k);
    let z = Complex64::new(0.0, (lam / k).sqrt()) * Complex64::new(x, p_var / lam);
    let mut sum = CompensatedSum::new();
    for j in 0..=n0 {
        let ln_mag = 2.0 * ln_binomial(n0, j) + ln_fact(j) + j as f64 * (2.0 / k).ln();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(sign * ln_mag.exp() * hermite_unchecked(n0 - j, z).norm_sqr());
    }
    let n = n0 as f64;
    let ln_pre = n * k.ln() + 0.5 * 2f64.ln()
        - PI.ln()
        - params.ln_norm_pp()?
        - (n + 0.5) * (2.0 * (1.0 - k * k)).ln()
        - lam * x * x
        - p_var * p_var / lam;
    Ok(ln_pre.exp() * sum.value())
}

/// Husimi function
/// `(x²+p²)^{n₀}/(π 2^{n₀+1} 𝒩″) e^{−[(1−κ′)x² + (1+κ′)p²]/2}`.
pub fn pasv_husimi(x: f64, p_var: f64, params: &PasvParams) -> Result<f64> {
    let k = params.kappa_prime;
    let r2 = x * x + p_var * p_var;
    let n = params.n0 as f64;
    let expo = -0.5 * ((1.0 - k) * x * x + (1.0 + k) * p_var * p_var);
    if r2 == 0.0 {
        return Ok(if params.n0 == 0 {
            (expo - PI.ln() - 2f64.ln() - params.ln_norm_pp()?).exp()
        } else {
            0.0
        });
    }
    let ln = n * r2.ln() - PI.ln() - (n + 1.0) * 2f64.ln() - params.ln_norm_pp()? + expo;
    Ok(ln.exp())
}

/// `|Ψ_{n₀}⟩ = A (|Ψ⁺⟩ + |Ψ⁻⟩)` with
/// `⟨n|Ψ^±⟩ ∝ √(n!) (±√(κ′/2))^{n−n₀} / Γ((n−n₀)/2 + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatDecomposition {
    pub plus: FockVector,
    pub minus: FockVector,
    pub amplitude_a: f64,
    /// `𝒩″^{(±)}`, the common squared norm of the unnormalized components.
    pub norm_pm: f64,
}

/// Log-weights `ln |b^±_{n₀+j}|²` of a component, truncated at relative tail `eps`.
fn component_weights(p: &PasvParams, eps: f64) -> Result<(Vec<f64>, f64)> {
    let k = p.kappa_prime;
    let n0 = p.n0;
    let t = truncate_series(
        eps,
        n0,
        1,
        None,
        |j| ln_fact(n0 + j) + j as f64 * (k / 2.0).ln() - 2.0 * ln_gamma_half(j + 2),
        // Γ(j/2+1)²/Γ(j/2+3/2)² < 4/(2j+3)
        |j| k * (2.0 * (n0 + j + 1) as f64 / (2 * j + 3) as f64).max(1.0),
    )?;
    Ok((t.ln_w, t.rel_tail))
}

fn check_component_params(p: &PasvParams) -> Result<()> {
    if !(p.kappa_prime > 0.0) {
        return Err(Error::invalid("the cat decomposition needs κ′ > 0"));
    }
    Ok(())
}

/// `ln 𝒩″^{(±)}` by direct summation of the component weights.
pub fn component_ln_norm(p: &PasvParams) -> Result<f64> {
    check_component_params(p)?;
    let (w, _) = component_weights(p, 1e-30)?;
    Ok(w.iter().fold(f64::NEG_INFINITY, |acc, &l| log_add(acc, l)))
}

pub fn cat_components(p: &PasvParams) -> Result<CatDecomposition> {
    check_component_params(p)?;
    let (w, tail) = component_weights(p, 1e-30)?;
    let ln_total = w.iter().fold(f64::NEG_INFINITY, |acc, &l| log_add(acc, l));
    let n0 = p.n0;
    let mut plus = vec![Complex64::new(0.0, 0.0); n0 + w.len()];
    let mut minus = plus.clone();
    for (j, lw) in w.iter().enumerate() {
        let a = (0.5 * (lw - ln_total)).exp();
        plus[n0 + j] = Complex64::new(a, 0.0);
        minus[n0 + j] = Complex64::new(if j % 2 == 0 { a } else { -a }, 0.0);
    }
    let amplitude_a = 0.5 * (0.5 * (ln_total - p.ln_norm_pp()?)).exp();
    Ok(CatDecomposition {
        plus: FockVector::from_parts(plus, tail)?,
        minus: FockVector::from_parts(minus, tail)?,
        amplitude_a,
        norm_pm: ln_total.exp(),
    })
}

/// `𝒩″^{(±)}` as the `n₀`-th derivative
/// `∂^{n₀}_{κ′} κ′^{n₀} [F(½, 1; 1; κ′²) + (2/π) κ′ F(1, 1; 3/2; κ′²)]`,
/// differentiated term by term: the even coefficients `(½)_m/m!` and odd
/// coefficients `(2/π) m!/(3/2)_m` of the bracket pick up `(n₀+j)!/j!`.
pub fn component_norm_series(p: &PasvParams) -> Result<f64> {
    check_component_params(p)?;
    let k = p.kappa_prime;
    let n0 = p.n0;
    let mut sum = CompensatedSum::new();
    let mut even = 1.0; // (½)_m / m!
    let mut odd = 2.0 / PI; // (2/π) m! / (3/2)_m
    let mut falling = ln_fact(n0).exp(); // (n₀+j)!/j! at j = 0
    let mut kp = 1.0;
    for j in 0..1_000_000usize {
        let m = j / 2;
        let coef = if j % 2 == 0 { even } else { odd };
        let term = falling * coef * kp;
        sum.add(term);
        if j % 2 == 0 {
            even *= (m as f64 + 0.5) / (m as f64 + 1.0);
        } else {
            odd *= (m as f64 + 1.0) / (m as f64 + 1.5);
        }
        falling *= (n0 + j + 1) as f64 / (j + 1) as f64;
        kp *= k;
        if j > 2 * n0 + 10 && term < 1e-17 * sum.value() {
            return Ok(sum.value());
        }
    }
    Err(Error::NonConvergence {
        what: "component normalization series",
        terms: 1_000_000,
    })
}

/// Component Husimi function
/// `|α|^{2n₀} e^{−|α|²}/(2π𝒩″^±) e^{κ′(α²+α*²)/2} |Erfc(∓√(κ′/2) α)|²`,
/// evaluated as `|α|^{2n₀} e^{−|α|²} |erfcx(∓√(κ′/2) α)|² / (2π𝒩″^±)`.
pub fn component_husimi(x: f64, p_var: f64, params: &PasvParams, sign: ComponentSign) -> Result<f64> {
    let ln_n = component_ln_norm(params)?;
    component_husimi_with_norm(x, p_var, params, sign, ln_n)
}

/// [`component_husimi`] with a precomputed `ln 𝒩″^{(±)}` (for grid sweeps).
pub fn component_husimi_with_norm(
    x: f64,
    p_var: f64,
    params: &PasvParams,
    sign: ComponentSign,
    ln_norm_pm: f64,
) -> Result<f64> {
    check_component_params(params)?;
    let alpha = Complex64::new(x, p_var) / 2f64.sqrt();
    let r2 = alpha.norm_sqr();
    if r2 == 0.0 && params.n0 > 0 {
        return Ok(0.0);
    }
    let z = -sign.value() * (0.5 * params.kappa_prime).sqrt() * alpha;
    let e = erfcx_complex(z)?.norm_sqr();
    let ln_pow = if params.n0 == 0 { 0.0 } else { params.n0 as f64 * r2.ln() };
    Ok((ln_pow - r2 - (2.0 * PI).ln() - ln_norm_pm).exp() * e)
}

/// Large-`n₀` form
/// `n₀!/(4π² n₀ 𝒩″^±) e^{−|α ∓ √n₀|²} e^{κ′(α²+α*²)/2}`.
///
/// Transcribed as commonly quoted; it does not converge to
/// [`component_husimi`] (see the crate README).
pub fn component_husimi_asymptotic(
    x: f64,
    p_var: f64,
    params: &PasvParams,
    sign: ComponentSign,
) -> Result<f64> {
    let ln_n = component_ln_norm(params)?;
    component_husimi_asymptotic_with_norm(x, p_var, params, sign, ln_n)
}

pub fn component_husimi_asymptotic_with_norm(
    x: f64,
    p_var: f64,
    params: &PasvParams,
    sign: ComponentSign,
    ln_norm_pm: f64,
) -> Result<f64> {
    if params.n0 == 0 {
        return Err(Error::invalid("the large-n0 form needs n0 ≥ 1"));
    }
    let n = params.n0 as f64;
    let alpha = Complex64::new(x, p_var) / 2f64.sqrt();
    let d = (alpha - sign.value() * n.sqrt()).norm_sqr();
    let tilt = params.kappa_prime * (alpha * alpha).re;
    let ln = ln_fact(params.n0) - (4.0 * PI * PI * n).ln() - ln_norm_pm - d + tilt;
    Ok(ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditional::conditional_zero_click;
    use crate::fock::{fidelity, squeezed_vacuum, HARD_CAP};
    use crate::phasespace::{husimi_point, quadrature_distribution};

    fn pp(k: f64, n0: usize) -> PasvParams {
        PasvParams::new(k, n0).unwrap()
    }

    #[test]
    fn reductions() {
        let s = pasv_coefficients(&pp(0.6, 0), 1e-30).unwrap();
        let sq = squeezed_vacuum(Complex64::new(0.6, 0.0), 1e-30).unwrap();
        assert!(1.0 - fidelity(&s, &sq) < 1e-12);
        assert!((pasv_norm(&pp(0.0, 4)).unwrap() - 24.0).abs() < 1e-12);
        assert!((pasv_norm(&pp(0.6, 0)).unwrap() - 1.0).abs() < 1e-12);
        assert!(PasvParams::new(1.0, 0).is_err());
    }

    #[test]
    fn norm_against_direct_sum() {
        for n0 in 0..8 {
            let p = pp(0.6, n0);
            let mut s = CompensatedSum::new();
            for m in 0..400 {
                let n = n0 + 2 * m;
                s.add((ln_fact(n) - 2.0 * ln_fact(m) + m as f64 * 0.09f64.ln()).exp());
            }
            let direct = 0.8 * s.value();
            assert!((pasv_norm(&p).unwrap() / direct - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn coefficients_match_pipeline_and_parity() {
        let bs = BeamSplitter::from_transmissivity(0.8, 0.25, -0.4).unwrap();
        let kappa = Complex64::new(0.5, 0.0);
        for n0 in 0..5 {
            let (p, half_phase) = PasvParams::from_input(kappa, &bs, n0).unwrap();
            let closed = pasv_coefficients(&p, 1e-30).unwrap();
            // rotate the real-κ′ coefficients by e^{i(n−n₀)ϑ/2}
            let rotated: Vec<Complex64> = closed
                .amps()
                .iter()
                .enumerate()
                .map(|(n, a)| a * Complex64::from_polar(1.0, (n as f64 - n0 as f64) * half_phase))
                .collect();
            let rotated = FockVector::from_parts(rotated, 0.0).unwrap();
            let input = squeezed_vacuum(kappa, 1e-30).unwrap();
            let pipe = conditional_zero_click(&input, n0, &bs).unwrap();
            assert!(1.0 - fidelity(&rotated, &pipe.state) < 1e-10);
            for (n, a) in closed.amps().iter().enumerate() {
                if n < n0 || (n - n0) % 2 == 1 {
                    assert_eq!(a.norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn probability_forms() {
        let bs = BeamSplitter::from_transmissivity(0.8, 0.0, 0.0).unwrap();
        for n0 in 0..5 {
            assert!((pasv_probability(0.0, &bs, n0).unwrap() - 0.2f64.powi(n0 as i32)).abs() < 1e-15);
            let input = squeezed_vacuum(Complex64::new(0.67, 0.0), 1e-30).unwrap();
            let diag: Vec<f64> = input.amps().iter().map(|a| a.norm_sqr()).collect();
            let m1 = crate::conditional::probability_zero_click(&diag, n0, &bs);
            assert!((pasv_probability_exact(0.67, &bs, n0).unwrap() - m1).abs() < 1e-10);
        }
        assert_eq!(
            pasv_probability(0.5, &bs, 0).unwrap(),
            pasv_probability_exact(0.5, &bs, 0).unwrap()
        );
        let quoted = pasv_probability_with(0.67, 0.6, 0.2, 1).unwrap();
        assert!((quoted - 0.23).abs() < 0.01, "{quoted}");
    }

    #[test]
    fn mean_photon_number() {
        assert!((pasv_mean_n(&pp(1e-8, 3)).unwrap() - 3.0).abs() < 1e-6);
        for n0 in 0..=6 {
            let p = pp(0.6, n0);
            let d = pasv_photon_dist(&p).unwrap();
            let direct: f64 = d.iter().enumerate().map(|(n, v)| n as f64 * v).sum();
            assert!((pasv_mean_n(&p).unwrap() - direct).abs() < 1e-8);
            let mut last = 0.0;
            for i in 0..50 {
                let m = pasv_mean_n(&pp(i as f64 / 50.0, n0)).unwrap();
                assert!(m >= last);
                last = m;
            }
        }
    }

    #[test]
    fn quadrature_routes_and_printed_shift() {
        for n0 in [0usize, 1, 4] {
            for &k in &[0.6, -0.3] {
                let p = pp(k, n0);
                let s = pasv_coefficients(&p, 1e-30).unwrap();
                let xs: Vec<f64> = (0..61).map(|i| -6.0 + 0.2 * i as f64).collect();
                for &phi in &[0.0, 0.4, 1.3, PI / 2.0] {
                    let g = quadrature_distribution(&s, phi, &xs);
                    for (x, gv) in xs.iter().zip(&g) {
                        let c = pasv_quadrature(*x, phi, &p).unwrap();
                        assert!((c - gv).abs() < 1e-12, "n0={n0} k={k} phi={phi} x={x}");
                        let printed = pasv_quadrature_printed(*x, phi, &p).unwrap();
                        let shifted = pasv_quadrature(*x, phi + PI / 2.0, &p).unwrap();
                        assert!((printed - shifted).abs() < 1e-13);
                    }
                }
            }
        }
        // n0 = 0 is a Gaussian with variance Δ/(2(1−κ′²))
        let p = pp(0.6, 0);
        let delta: f64 = 1.0 + 0.36 + 1.2 * (0.8f64).cos();
        let var = delta / (2.0 * 0.64);
        let want = (-(1.0f64).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt();
        assert!((pasv_quadrature(1.0, 0.4, &p).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn complex_kappa_is_a_rotation() {
        let kp = Complex64::from_polar(0.5, 0.9);
        let (p, shift) = PasvParams::from_complex(kp, 2).unwrap();
        // build the complex-κ′ state directly from the rotated coefficients
        let real = pasv_coefficients(&p, 1e-30).unwrap();
        let amps: Vec<Complex64> = real
            .amps()
            .iter()
            .enumerate()
            .map(|(n, a)| a * Complex64::from_polar(1.0, (n as f64 - 2.0) * 0.45))
            .collect();
        let s = FockVector::from_parts(amps, 0.0).unwrap();
        let xs = [-1.0, 0.3, 2.2];
        let g = quadrature_distribution(&s, 0.2, &xs);
        for (x, gv) in xs.iter().zip(&g) {
            assert!((pasv_quadrature(*x, 0.2 + shift, &p).unwrap() - gv).abs() < 1e-13);
        }
    }

    #[test]
    fn wigner_and_husimi_against_generic_routes() {
        for n0 in [0usize, 1, 4] {
            for &k in &[0.6, -0.6, 0.0] {
                let p = pp(k, n0);
                let s = pasv_coefficients(&p, 1e-30).unwrap();
                for &(x, pv) in &[(0.0, 0.0), (0.5, 0.3), (1.5, -0.7), (-2.0, 1.1)] {
                    let g = wigner_point(&s, x, pv, &WignerOptions::default());
                    let c = pasv_wigner(x, pv, &p).unwrap();
                    assert!((c - g).abs() < 1e-9, "W n0={n0} k={k} ({x},{pv}): {c} vs {g}");
                    let q = pasv_husimi(x, pv, &p).unwrap();
                    assert!((q - husimi_point(&s, x, pv)).abs() < 1e-12);
                }
            }
        }
        let w = pasv_wigner(0.0, 0.0, &pp(0.6, 1)).unwrap();
        assert!(w < 0.0);
    }

    #[test]
    fn cat_decomposition() {
        for n0 in [1usize, 4, 15] {
            let p = pp(0.6, n0);
            let cat = cat_components(&p).unwrap();
            let psi = pasv_coefficients(&p, 1e-30).unwrap();
            let len = cat.plus.amps().len().max(psi.amps().len());
            let mut resid = 0.0;
            for n in 0..len {
                let a = cat.amplitude_a
                    * (cat.plus.padded(len - 1)[n] + cat.minus.padded(len - 1)[n]);
                let b = psi.padded(len - 1)[n];
                resid += (a - b).norm_sqr();
            }
            assert!(resid.sqrt() < 1e-10, "n0={n0}: {}", resid.sqrt());
            for (n, (a, b)) in cat.plus.amps().iter().zip(cat.minus.amps()).enumerate() {
                let s = if n >= n0 && (n - n0) % 2 == 1 { -1.0 } else { 1.0 };
                assert_eq!(*b, a * s);
            }
        }
        assert!(cat_components(&pp(0.0, 2)).is_err());
    }

    #[test]
    fn component_norm_two_forms() {
        for n0 in 0..=10 {
            let p = pp(0.6, n0);
            let direct = component_ln_norm(&p).unwrap().exp();
            let series = component_norm_series(&p).unwrap();
            assert!((series / direct - 1.0).abs() < 1e-12, "n0={n0}");
        }
    }

    #[test]
    fn component_husimi_routes() {
        let p = pp(0.6, 4);
        let cat = cat_components(&p).unwrap();
        for ix in 0..21 {
            for ip in 0..21 {
                let x = -5.0 + 0.5 * ix as f64;
                let pv = -5.0 + 0.5 * ip as f64;
                let q = component_husimi(x, pv, &p, ComponentSign::Plus).unwrap();
                assert!((q - husimi_point(&cat.plus, x, pv)).abs() < 1e-9);
                let mirror = component_husimi(-x, -pv, &p, ComponentSign::Minus).unwrap();
                assert!((q - mirror).abs() < 1e-14 * q.max(1e-300));
            }
        }
        assert_eq!(component_husimi(0.0, 0.0, &p, ComponentSign::Plus).unwrap(), 0.0);
    }

    #[test]
    fn mutated_coefficients_differ() {
        let p = pp(0.6, 2);
        let good = coefficients_impl(&p, 1e-14, false).unwrap();
        let bad = coefficients_impl(&p, 1e-14, true).unwrap();
        assert!(fidelity(&good, &bad) < 1e-10);
        assert!((bad.norm_sqr() - 1.0).abs() < 1e-10);
        assert!(bad.cutoff() < HARD_CAP);
    }
}
