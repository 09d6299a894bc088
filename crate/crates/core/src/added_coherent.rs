//! Photon-added coherent states `∝ (â†)^{n₀} |β′⟩` with `β′ = Tβ`.
//!
//! Normalization: `‖(â†)^{n₀}|β′⟩‖² = n₀! L_{n₀}(−|β′|²)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::conditional::BeamSplitter;
use crate::error::{Error, Result};
use crate::fock::{fock_state, quadrature_moments, truncate_series, FockVector};
use crate::specfun::{assoc_laguerre, hermite_unchecked, laguerre, ln_fact};

/// Photon-added coherent state parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacsParams {
    /// `β′ = Tβ`.
    pub beta_prime: Complex64,
    pub n0: usize,
}

impl PacsParams {
    pub fn new(beta_prime: Complex64, n0: usize) -> Self {
        PacsParams { beta_prime, n0 }
    }

    /// Parameters produced by the beam splitter from the input `|β⟩`.
    pub fn from_input(beta: Complex64, bs: &BeamSplitter, n0: usize) -> Self {
        PacsParams { beta_prime: bs.t() * beta, n0 }
    }

    /// `ln 𝒩′_{n₀} = ln(n₀! L_{n₀}(−|β′|²))`.
    pub fn ln_norm(&self) -> f64 {
        ln_fact(self.n0) + laguerre(self.n0, -self.beta_prime.norm_sqr()).ln()
    }
}

/// Fock coefficients `e^{−|β′|²/2} β′ⁿ √((n+n₀)!)/n! / √𝒩′` on `|n+n₀⟩`.
pub fn pacs_coefficients(p: &PacsParams, eps: f64) -> Result<FockVector> {
    let b2 = p.beta_prime.norm_sqr();
    let n0 = p.n0;
    if b2 == 0.0 {
        return fock_state(n0);
    }
    let ln_norm = p.ln_norm();
    let t = truncate_series(
        eps,
        n0,
        1,
        Some(0.0),
        |n| -b2 + n as f64 * b2.ln() + ln_fact(n + n0) - 2.0 * ln_fact(n) - ln_norm,
        |n| b2 * (n + n0 + 1) as f64 / ((n + 1) as f64).powi(2),
    )?;
    let phase = Complex64::from_polar(1.0, p.beta_prime.arg());
    let mut amps = vec![Complex64::new(0.0, 0.0); n0 + t.ln_w.len()];
    for (n, lw) in t.ln_w.iter().enumerate() {
        amps[n + n0] = phase.powu(n as u32) * (0.5 * lw).exp();
    }
    FockVector::from_parts(amps, t.rel_tail)
}

/// Success probability `|R|^{2n₀} e^{−|R|²|β|²} L_{n₀}(−|Tβ|²)`.
pub fn pacs_probability(beta: Complex64, bs: &BeamSplitter, n0: usize) -> f64 {
    let b2 = beta.norm_sqr();
    let r2 = bs.r2();
    r2.powi(n0 as i32) * (-r2 * b2).exp() * laguerre(n0, -bs.t2() * b2)
}

/// `|β|` maximizing [`pacs_probability`] for fixed splitter and `n₀`.
///
/// Stationarity in `y = |β′|²` reads `|R|² L_{n₀}(−y) = |T|² L¹_{n₀−1}(−y)`;
/// a positive root exists iff `n₀|T|² > |R|²`. The first sign change on a
/// log grid over `[1e−6, 1e4]` is refined by bisection.
pub fn pacs_optimal_beta(bs: &BeamSplitter, n0: usize) -> Result<f64> {
    let (t2, r2) = (bs.t2(), bs.r2());
    if n0 == 0 {
        return Err(Error::NoRoot("without added photons P decreases monotonically in |β|".into()));
    }
    if t2 == 0.0 {
        return Err(Error::NoRoot("P does not depend on |β| when |T| = 0".into()));
    }
    // sign of dP/dy up to a positive factor
    let g = |y: f64| t2 * assoc_laguerre(n0 - 1, 1, -y) / laguerre(n0, -y) - r2;
    let grid: Vec<f64> = (0..=2000).map(|i| 10f64.powf(-6.0 + 10.0 * i as f64 / 2000.0)).collect();
    let mut bracket = None;
    for w in grid.windows(2) {
        if g(w[0]) > 0.0 && g(w[1]) <= 0.0 {
            bracket = Some((w[0], w[1]));
            break;
        }
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        Error::NoRoot(format!("n0·|T|² = {} does not exceed |R|² = {r2}", n0 as f64 * t2))
    })?;
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).sqrt() / t2.sqrt())
}

/// Closed-form quadrature distribution
/// `2^{−n₀}/(𝒩′√π) e^{−(x − √2|β′|cos(φ+φ_β′))²} |H_{n₀}(x − |β′|e^{i(φ+φ_β′)}/√2)|²`.
pub fn pacs_quadrature(x: f64, phi: f64, p: &PacsParams) -> f64 {
    let b = p.beta_prime.norm();
    let ang = phi + p.beta_prime.arg();
    let shift = x - 2f64.sqrt() * b * ang.cos();
    let z = Complex64::new(x, 0.0) - Complex64::from_polar(b / 2f64.sqrt(), ang);
    let h = hermite_unchecked(p.n0, z).norm_sqr();
    let ln_pre = -(p.n0 as f64) * 2f64.ln() - p.ln_norm() - 0.5 * PI.ln() - shift * shift;
    ln_pre.exp() * h
}

/// `Var x̂(φ)` from the Fock moments of [`pacs_coefficients`].
pub fn pacs_variance(phi: f64, p: &PacsParams) -> Result<f64> {
    let s = pacs_coefficients(p, 1e-30)?;
    Ok(quadrature_moments(&s, phi).1)
}

fn variance_closed_form(phi: f64, p: &PacsParams, denominator: f64) -> f64 {
    let n0 = p.n0;
    let b2 = p.beta_prime.norm_sqr();
    let l = |k: usize, a: usize| assoc_laguerre(k, a, -b2);
    let ang = phi + p.beta_prime.arg();
    let brace = 2.0 * b2 * (l(n0, 2) * l(n0, 0) - l(n0, 1).powi(2)) * (2.0 * ang).cos()
        - 2.0 * b2 * l(n0, 1).powi(2)
        - l(n0, 0).powi(2)
        + 2.0 * (n0 + 1) as f64 * l(n0, 0) * l(n0 + 1, 0);
    brace / (2.0 * denominator * denominator)
}

/// The variance closed form with the squared Laguerre denominator evaluated
/// at `−|β′|²` (the argument shared by every other term); agrees with
/// [`pacs_variance`].
pub fn pacs_variance_closed(phi: f64, p: &PacsParams) -> f64 {
    variance_closed_form(phi, p, laguerre(p.n0, -p.beta_prime.norm_sqr()))
}

/// The same closed form with the denominator `L_{n₀}(−2|β′|²)²` as it is
/// usually quoted; kept for comparison only, it is not a variance for
/// `n₀ ≥ 1, β′ ≠ 0`.
pub fn pacs_variance_printed(phi: f64, p: &PacsParams) -> f64 {
    variance_closed_form(phi, p, laguerre(p.n0, -2.0 * p.beta_prime.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditional::conditional_zero_click;
    use crate::fock::{coherent_state, fidelity};
    use crate::phasespace::quadrature_distribution;

    fn bs() -> BeamSplitter {
        BeamSplitter::from_transmissivity(0.8, 0.2, 0.5).unwrap()
    }

    #[test]
    fn reduces_to_coherent() {
        let bp = Complex64::new(0.7, -0.3);
        let s = pacs_coefficients(&PacsParams::new(bp, 0), 1e-30).unwrap();
        assert!(1.0 - fidelity(&s, &coherent_state(bp, 1e-30).unwrap()) < 1e-12);
    }

    #[test]
    fn matches_conditional_pipeline() {
        for n0 in 0..5 {
            let beta = Complex64::new(1.2, 0.4);
            let closed = pacs_coefficients(&PacsParams::from_input(beta, &bs(), n0), 1e-30).unwrap();
            let input = coherent_state(beta, 1e-30).unwrap();
            let pipe = conditional_zero_click(&input, n0, &bs()).unwrap();
            assert!(1.0 - fidelity(&closed, &pipe.state) < 1e-10);
            assert!((closed.norm_sqr() - 1.0).abs() < 1e-12);
            for a in &closed.amps()[..n0] {
                assert_eq!(a.norm(), 0.0);
            }
        }
    }

    #[test]
    fn probability_values() {
        for n0 in 0..4 {
            assert!((pacs_probability(Complex64::new(0.0, 0.0), &bs(), n0) - 0.2f64.powi(n0 as i32)).abs() < 1e-15);
        }
        let p1 = pacs_probability(Complex64::new(1.0, 0.0), &bs(), 1);
        assert!((p1 - 0.294_743).abs() < 1e-6);
    }

    #[test]
    fn optimal_beta_is_local_maximum() {
        assert!(pacs_optimal_beta(&bs(), 0).is_err());
        // n0 |T|² ≤ |R|²: maximum at β = 0
        let weak = BeamSplitter::from_transmissivity(0.3, 0.0, 0.0).unwrap();
        assert!(matches!(pacs_optimal_beta(&weak, 1), Err(Error::NoRoot(_))));
        let b1 = pacs_optimal_beta(&bs(), 1).unwrap();
        assert!((b1 * b1 - 3.75).abs() < 1e-8, "{b1}");
        for n0 in 1..6 {
            let b = pacs_optimal_beta(&bs(), n0).unwrap();
            let p = |x: f64| pacs_probability(Complex64::new(x, 0.0), &bs(), n0);
            let h = 1e-4;
            assert!(((p(b + h) - p(b - h)) / (2.0 * h)).abs() < 1e-6);
            assert!(p(b) > p(0.9 * b) && p(b) > p(1.1 * b));
        }
    }

    #[test]
    fn quadrature_two_routes() {
        let p = PacsParams::new(Complex64::from_polar(0.89, 0.3), 4);
        let s = pacs_coefficients(&p, 1e-30).unwrap();
        let xs: Vec<f64> = (0..81).map(|i| -6.0 + 0.15 * i as f64).collect();
        for &phi in &[0.0, 0.7, 2.0] {
            let generic = quadrature_distribution(&s, phi, &xs);
            for (x, g) in xs.iter().zip(&generic) {
                assert!((pacs_quadrature(*x, phi, &p) - g).abs() < 1e-12);
            }
        }
        // n0 = 0: Gaussian centred at √2|β′|cos(φ + φ_β′)
        let p0 = PacsParams::new(Complex64::from_polar(1.0, 0.4), 0);
        let c = 2f64.sqrt() * (0.1f64 + 0.4).cos();
        let v = pacs_quadrature(c + 0.3, 0.1, &p0);
        assert!((v - (-0.09f64).exp() / PI.sqrt()).abs() < 1e-14);
        assert!((pacs_quadrature(0.4, 0.3, &p) - pacs_quadrature(0.4, 0.3 + 2.0 * PI, &p)).abs() < 1e-14);
    }

    #[test]
    fn variance_routes() {
        let p0 = PacsParams::new(Complex64::new(0.6, 0.2), 0);
        assert!((pacs_variance(0.4, &p0).unwrap() - 0.5).abs() < 1e-12);
        let f1 = PacsParams::new(Complex64::new(0.0, 0.0), 1);
        assert!((pacs_variance(1.1, &f1).unwrap() - 1.5).abs() < 1e-14);
        for n0 in 0..6 {
            let p = PacsParams::new(Complex64::from_polar(0.89, 0.3), n0);
            for &phi in &[0.0, 0.5, 1.0, 2.5] {
                let m = pacs_variance(phi, &p).unwrap();
                assert!((pacs_variance_closed(phi, &p) - m).abs() < 1e-11);
                assert!((pacs_variance(phi + PI, &p).unwrap() - m).abs() < 1e-12);
            }
        }
        // the quoted denominator only coincides at n0 = 0
        let p = PacsParams::new(Complex64::new(0.89, 0.0), 4);
        assert!((pacs_variance_printed(0.0, &p) - pacs_variance_closed(0.0, &p)).abs() > 1e-3);
    }

    #[test]
    fn squeezing_signature() {
        let p = PacsParams::new(Complex64::new(0.89, 0.0), 4);
        let min = (0..200)
            .map(|i| pacs_variance(PI * i as f64 / 200.0, &p).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(min < 0.5, "{min}");
    }
}
