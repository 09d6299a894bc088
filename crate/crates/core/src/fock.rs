//! Truncated single-mode Fock-space states and elementary operator actions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{ln_fact, CompensatedSum};

/// Largest photon number a [`FockVector`] may carry.
pub const HARD_CAP: usize = 4096;

/// Default tail-mass tolerance for callers building states; amplitude-level
/// errors scale as its square root.
pub const DEFAULT_TAIL: f64 = 1e-26;

/// A truncated pure state `Σ_{n ≤ cutoff} amps[n] |n⟩`.
///
/// `tail_bound` bounds the probability mass of the exact state that lies
/// beyond the cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRecord", into = "StateRecord")]
pub struct FockVector {
    amps: Vec<Complex64>,
    tail_bound: f64,
}

/// On-disk layout: `{"cutoff": N, "re": [...], "im": [...], "tail_bound": t}`.
#[derive(Serialize, Deserialize)]
struct StateRecord {
    cutoff: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    #[serde(default)]
    tail_bound: f64,
}

impl TryFrom<StateRecord> for FockVector {
    type Error = Error;

    fn try_from(r: StateRecord) -> Result<Self> {
        if r.re.len() != r.cutoff + 1 || r.im.len() != r.cutoff + 1 {
            return Err(Error::Format(format!(
                "cutoff {} needs {} amplitudes, got re: {}, im: {}",
                r.cutoff,
                r.cutoff + 1,
                r.re.len(),
                r.im.len()
            )));
        }
        if !(r.tail_bound >= 0.0) {
            return Err(Error::Format("tail_bound must be nonnegative".into()));
        }
        let amps = r.re.iter().zip(&r.im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        FockVector::from_parts(amps, r.tail_bound)
    }
}

impl From<FockVector> for StateRecord {
    fn from(s: FockVector) -> Self {
        StateRecord {
            cutoff: s.cutoff(),
            re: s.amps.iter().map(|c| c.re).collect(),
            im: s.amps.iter().map(|c| c.im).collect(),
            tail_bound: s.tail_bound,
        }
    }
}

impl FockVector {
    /// Wraps raw amplitudes without normalizing them.
    pub fn from_parts(amps: Vec<Complex64>, tail_bound: f64) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::invalid("a state needs at least one amplitude"));
        }
        if amps.len() > HARD_CAP + 1 {
            return Err(Error::CapExceeded {
                requested: amps.len() - 1,
                cap: HARD_CAP,
            });
        }
        if amps.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::invalid("amplitudes must be finite"));
        }
        Ok(FockVector { amps, tail_bound })
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).collect::<CompensatedSum>().value()
    }

    /// Copy scaled to unit norm (the tail bound is kept relative).
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2 > 0.0) {
            return Err(Error::Degenerate("zero vector cannot be normalized".into()));
        }
        let s = 1.0 / n2.sqrt();
        Ok(FockVector {
            amps: self.amps.iter().map(|a| a * s).collect(),
            tail_bound: self.tail_bound / n2,
        })
    }

    /// Amplitudes zero-padded to `cutoff` (never truncated).
    pub fn padded(&self, cutoff: usize) -> Vec<Complex64> {
        let mut v = self.amps.clone();
        if v.len() < cutoff + 1 {
            v.resize(cutoff + 1, Complex64::new(0.0, 0.0));
        }
        v
    }
}

/// Weighted ensemble of pure states or of Fock states.
#[derive(Debug, Clone, PartialEq)]
pub enum MixtureSpec {
    Pure(Vec<(f64, FockVector)>),
    Diagonal(Vec<(f64, usize)>),
}

fn check_weights<'a>(w: impl Iterator<Item = &'a f64>) -> Result<()> {
    let mut sum = CompensatedSum::new();
    for &x in w {
        if !(x >= 0.0) {
            return Err(Error::invalid(format!("mixture weight {x} is negative")));
        }
        sum.add(x);
    }
    if (sum.value() - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "mixture weights sum to {}, not 1",
            sum.value()
        )));
    }
    Ok(())
}

impl MixtureSpec {
    pub fn pure(members: Vec<(f64, FockVector)>) -> Result<Self> {
        check_weights(members.iter().map(|(w, _)| w))?;
        Ok(MixtureSpec::Pure(members))
    }

    pub fn diagonal(members: Vec<(f64, usize)>) -> Result<Self> {
        check_weights(members.iter().map(|(w, _)| w))?;
        if let Some(&(_, n)) = members.iter().find(|(_, n)| *n > HARD_CAP) {
            return Err(Error::CapExceeded { requested: n, cap: HARD_CAP });
        }
        Ok(MixtureSpec::Diagonal(members))
    }

    /// Photon-number distribution `⟨n|ρ|n⟩` of the mixture.
    pub fn photon_distribution(&self) -> Vec<f64> {
        match self {
            MixtureSpec::Pure(m) => {
                let len = m.iter().map(|(_, s)| s.amps.len()).max().unwrap_or(1);
                let mut d = vec![0.0; len];
                for (w, s) in m {
                    for (n, a) in s.amps.iter().enumerate() {
                        d[n] += w * a.norm_sqr();
                    }
                }
                d
            }
            MixtureSpec::Diagonal(m) => {
                let len = m.iter().map(|(_, n)| n + 1).max().unwrap_or(1);
                let mut d = vec![0.0; len];
                for &(w, n) in m {
                    d[n] += w;
                }
                d
            }
        }
    }

    /// The mixture as weighted pure members (Fock members become basis states).
    pub fn members(&self) -> Vec<(f64, FockVector)> {
        match self {
            MixtureSpec::Pure(m) => m.clone(),
            MixtureSpec::Diagonal(m) => m
                .iter()
                .map(|&(w, n)| (w, fock_state(n).expect("checked against the cap")))
                .collect(),
        }
    }
}

/// Truncation of a positive series `Σ_k w_k` given in log form.
///
/// `ratio(k)` must bound `w_{j+1}/w_j` for every `j ≥ k`. Stops at the first
/// `k` whose certified tail (mass and first moment in photon number
/// `offset + step·k`) is below `eps` relative to `total` (or to the running
/// sum when the total is unknown, which is conservative).
pub(crate) struct Truncation {
    pub ln_w: Vec<f64>,
    pub rel_tail: f64,
}

pub(crate) fn truncate_series(
    eps: f64,
    offset: usize,
    step: usize,
    ln_total: Option<f64>,
    mut ln_weight: impl FnMut(usize) -> f64,
    ratio: impl Fn(usize) -> f64,
) -> Result<Truncation> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("tail tolerance must lie in (0, 1), got {eps}")));
    }
    let mut ln_w = Vec::new();
    let mut ln_partial = f64::NEG_INFINITY;
    for k in 0.. {
        let n = offset + step * k;
        if n > HARD_CAP {
            return Err(Error::CapExceeded { requested: n, cap: HARD_CAP });
        }
        let lw = ln_weight(k);
        ln_w.push(lw);
        ln_partial = log_add(ln_partial, lw);
        let r = ratio(k);
        if r == 0.0 {
            return Ok(Truncation { ln_w, rel_tail: 0.0 });
        }
        if !(r < 1.0) {
            continue;
        }
        let ln_norm = ln_total.unwrap_or(ln_partial);
        let head = (lw - ln_norm).exp();
        let mass = head * r / (1.0 - r);
        let moment = head * (n as f64 * r / (1.0 - r) + step as f64 * r / ((1.0 - r) * (1.0 - r)));
        if mass < eps && moment < eps {
            return Ok(Truncation { ln_w, rel_tail: mass });
        }
    }
    unreachable!("the loop only exits through a return")
}

pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Coherent state `|β⟩`.
pub fn coherent_state(beta: Complex64, eps: f64) -> Result<FockVector> {
    let b2 = beta.norm_sqr();
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("tail tolerance must lie in (0, 1), got {eps}")));
    }
    if b2 == 0.0 {
        return fock_state(0);
    }
    let t = truncate_series(
        eps,
        0,
        1,
        Some(0.0),
        |n| -b2 + n as f64 * b2.ln() - ln_fact(n),
        |n| b2 / (n as f64 + 1.0),
    )?;
    let phase = Complex64::from_polar(1.0, beta.arg());
    let amps = t
        .ln_w
        .iter()
        .enumerate()
        .map(|(n, lw)| phase.powu(n as u32) * (0.5 * lw).exp())
        .collect();
    FockVector::from_parts(amps, t.rel_tail)
}

/// Squeezed vacuum with squeezing parameter `κ = e^{iφ} tanh|ξ|`.
pub fn squeezed_vacuum(kappa: Complex64, eps: f64) -> Result<FockVector> {
    let k2 = kappa.norm_sqr();
    if !(k2 < 1.0) {
        return Err(Error::invalid(format!("|κ| = {} must be below 1", kappa.norm())));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("tail tolerance must lie in (0, 1), got {eps}")));
    }
    if k2 == 0.0 {
        return fock_state(0);
    }
    // probability on |2m⟩: √(1-κ²) (2m)! κ^{2m} / (4^m m!²); ratio (2m+1)/(2m+2)·κ² < κ²
    let ln_pre = 0.5 * (1.0 - k2).ln();
    let t = truncate_series(
        eps,
        0,
        2,
        Some(0.0),
        |m| ln_pre + ln_fact(2 * m) + m as f64 * (k2 / 4.0).ln() - 2.0 * ln_fact(m),
        |_| k2,
    )?;
    let phase = Complex64::from_polar(1.0, kappa.arg());
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * (t.ln_w.len() - 1) + 1];
    for (m, lw) in t.ln_w.iter().enumerate() {
        amps[2 * m] = phase.powu(m as u32) * (0.5 * lw).exp();
    }
    FockVector::from_parts(amps, t.rel_tail)
}

/// Fock state `|n⟩`.
pub fn fock_state(n: usize) -> Result<FockVector> {
    if n > HARD_CAP {
        return Err(Error::CapExceeded { requested: n, cap: HARD_CAP });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
    amps[n] = Complex64::new(1.0, 0.0);
    FockVector::from_parts(amps, 0.0)
}

/// Normalized copy of user-supplied coefficients.
pub fn custom_state(coeffs: &[Complex64]) -> Result<FockVector> {
    FockVector::from_parts(coeffs.to_vec(), 0.0)?.normalized()
}

/// `(â†)^k` applied to `s`; the result is not normalized.
pub fn apply_creation(s: &FockVector, k: usize) -> Result<FockVector> {
    if s.cutoff() + k > HARD_CAP {
        return Err(Error::CapExceeded {
            requested: s.cutoff() + k,
            cap: HARD_CAP,
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); s.amps.len() + k];
    for (n, a) in s.amps.iter().enumerate() {
        if *a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let v = a * (0.5 * (ln_fact(n + k) - ln_fact(n))).exp();
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Overflow(format!("(a†)^{k} amplitude at n = {n}")));
        }
        amps[n + k] = v;
    }
    FockVector::from_parts(amps, s.tail_bound)
}

/// `T^{n̂}` applied to `s`; the result is not normalized.
pub fn attenuate(s: &FockVector, t: Complex64) -> Result<FockVector> {
    if t.norm() > 1.0 + 1e-15 {
        return Err(Error::invalid(format!("|T| = {} exceeds 1", t.norm())));
    }
    let mut pow = Complex64::new(1.0, 0.0);
    let amps = s
        .amps
        .iter()
        .map(|a| {
            let v = a * pow;
            pow *= t;
            v
        })
        .collect();
    FockVector::from_parts(amps, s.tail_bound)
}

pub fn photon_number_distribution(s: &FockVector) -> Vec<f64> {
    s.amps.iter().map(|a| a.norm_sqr()).collect()
}

pub fn mean_photon_number(s: &FockVector) -> f64 {
    let mut acc = CompensatedSum::new();
    for (n, a) in s.amps.iter().enumerate() {
        acc.add(n as f64 * a.norm_sqr());
    }
    acc.value() / s.norm_sqr()
}

/// Mean and variance of the quadrature at phase `φ`, in the convention
/// where the distribution is `|Σ c_n e^{inφ} h_n(x)|²` (vacuum variance ½).
pub fn quadrature_moments(s: &FockVector, phi: f64) -> (f64, f64) {
    let c = &s.amps;
    let mut a1 = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    for n in 0..c.len() {
        if n + 1 < c.len() {
            a1 += c[n].conj() * c[n + 1] * ((n + 1) as f64).sqrt();
        }
        if n + 2 < c.len() {
            a2 += c[n].conj() * c[n + 2] * (((n + 1) * (n + 2)) as f64).sqrt();
        }
    }
    let norm = s.norm_sqr();
    let (a1, a2) = (a1 / norm, a2 / norm);
    let nbar = mean_photon_number(s);
    let mean = 2f64.sqrt() * (Complex64::from_polar(1.0, phi) * a1).re;
    let second = (Complex64::from_polar(1.0, 2.0 * phi) * a2).re + nbar + 0.5;
    (mean, second - mean * mean)
}

/// `⟨a|b⟩` over the common support.
pub fn inner_product(a: &FockVector, b: &FockVector) -> Complex64 {
    a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum()
}

/// `|⟨a|b⟩|² / (‖a‖² ‖b‖²)`.
pub fn fidelity(a: &FockVector, b: &FockVector) -> f64 {
    inner_product(a, b).norm_sqr() / (a.norm_sqr() * b.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coherent_vacuum_and_norm() {
        let v = coherent_state(c(0.0, 0.0), 1e-12).unwrap();
        assert_eq!(v.amps(), &[c(1.0, 0.0)]);
        for &b in &[c(0.3, 0.0), c(1.0, 1.0), c(-2.5, 0.7), c(6.0, 0.0)] {
            let s = coherent_state(b, 1e-12).unwrap();
            let n2 = s.norm_sqr();
            assert!(n2 <= 1.0 + 1e-14 && n2 >= 1.0 - 1e-12, "norm {n2}");
            // slack covers rounding in ~100 exponentials
            assert!(1.0 - n2 <= s.tail_bound() + 1e-13);
            assert!((mean_photon_number(&s) * n2 - b.norm_sqr()).abs() < 1e-11);
        }
        assert!(coherent_state(c(1.0, 0.0), 0.0).is_err());
        assert!(matches!(
            coherent_state(c(70.0, 0.0), 1e-12),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn squeezed_vacuum_properties() {
        assert_eq!(squeezed_vacuum(c(0.0, 0.0), 1e-12).unwrap().amps(), &[c(1.0, 0.0)]);
        let k = c(0.5, 0.4);
        let s = squeezed_vacuum(k, 1e-12).unwrap();
        for (n, a) in s.amps().iter().enumerate() {
            if n % 2 == 1 {
                assert_eq!(*a, c(0.0, 0.0));
            }
        }
        let k2 = k.norm_sqr();
        let n2 = s.norm_sqr();
        assert!((n2 - 1.0).abs() <= 1e-12);
        assert!((mean_photon_number(&s) * n2 - k2 / (1.0 - k2)).abs() < 1e-11);
        assert!(squeezed_vacuum(c(1.0, 0.0), 1e-12).is_err());
    }

    #[test]
    fn fock_and_custom() {
        assert_eq!(fock_state(0).unwrap().amps(), &[c(1.0, 0.0)]);
        let s = custom_state(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((mean_photon_number(&s) - 0.5).abs() < 1e-15);
        assert!(custom_state(&[c(0.0, 0.0)]).is_err());
        assert_eq!(photon_number_distribution(&fock_state(3).unwrap()), vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn creation_on_vacuum() {
        let v = fock_state(0).unwrap();
        assert_eq!(apply_creation(&v, 0).unwrap(), v);
        let s = apply_creation(&v, 3).unwrap();
        assert!((s.amps()[3].re - 6f64.sqrt()).abs() < 1e-14);
        assert!(matches!(
            apply_creation(&fock_state(HARD_CAP).unwrap(), 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn creation_norm_is_laguerre() {
        for n0 in 0..6 {
            let b = c(0.7, -0.4);
            let s = apply_creation(&coherent_state(b, 1e-15).unwrap(), n0).unwrap();
            let want = ln_fact(n0).exp() * crate::specfun::laguerre(n0, -b.norm_sqr());
            assert!((s.norm_sqr() - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn attenuation_family_closure() {
        let b = c(1.1, 0.3);
        let t = Complex64::from_polar(0.8f64.sqrt(), 0.4);
        let att = attenuate(&coherent_state(b, 1e-15).unwrap(), t).unwrap().normalized().unwrap();
        let direct = coherent_state(t * b, 1e-15).unwrap();
        assert!(1.0 - fidelity(&att, &direct) < 1e-12);

        let k = c(0.5, 0.2);
        let att = attenuate(&squeezed_vacuum(k, 1e-15).unwrap(), t).unwrap().normalized().unwrap();
        let direct = squeezed_vacuum(t * t * k, 1e-15).unwrap();
        assert!(1.0 - fidelity(&att, &direct) < 1e-12);

        let s = coherent_state(b, 1e-12).unwrap();
        assert_eq!(attenuate(&s, c(1.0, 0.0)).unwrap(), s);
        assert!(attenuate(&s, c(1.1, 0.0)).is_err());
    }

    #[test]
    fn alpha_parametrized_family() {
        // c_n ∝ αⁿ: attenuation by T is the same family with α → Tα
        let alpha = c(0.5, 0.3);
        let t = c(0.6, 0.2);
        let coeffs: Vec<_> = (0..60).map(|n| alpha.powu(n)).collect();
        let moved: Vec<_> = (0..60).map(|n| (t * alpha).powu(n)).collect();
        let a = attenuate(&custom_state(&coeffs).unwrap(), t).unwrap();
        let b = custom_state(&moved).unwrap();
        assert!(1.0 - fidelity(&a, &b) < 1e-14);
    }

    #[test]
    fn moments_in_simple_states() {
        let (m, v) = quadrature_moments(&fock_state(0).unwrap(), 0.3);
        assert!(m.abs() < 1e-16 && (v - 0.5).abs() < 1e-16);
        let (_, v) = quadrature_moments(&fock_state(1).unwrap(), 1.0);
        assert!((v - 1.5).abs() < 1e-15);
        let s = coherent_state(c(1.0, 0.0), 1e-15).unwrap();
        let (m, v) = quadrature_moments(&s, 0.0);
        assert!((m - 2f64.sqrt()).abs() < 1e-12 && (v - 0.5).abs() < 1e-12);
        assert!((fidelity(&s, &s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let s = coherent_state(c(0.4, -0.2), 1e-12).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"cutoff\""));
        let back: FockVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"cutoff": 2, "re": [1.0], "im": [0.0], "tail_bound": 0}"#;
        assert!(serde_json::from_str::<FockVector>(bad).is_err());
    }

    #[test]
    fn mixture_validation() {
        assert!(MixtureSpec::diagonal(vec![(0.5, 0), (0.4, 1)]).is_err());
        assert!(MixtureSpec::diagonal(vec![(-0.1, 0), (1.1, 1)]).is_err());
        let m = MixtureSpec::diagonal(vec![(0.25, 0), (0.75, 2)]).unwrap();
        assert_eq!(m.photon_distribution(), vec![0.25, 0.0, 0.75]);
        assert_eq!(m.members().len(), 2);
    }
}
