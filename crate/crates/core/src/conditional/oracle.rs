//! Exact two-mode evolution, one total-photon-number block at a time.
//!
//! The beam splitter conserves `N = n₁ + n₂`, so `|Φ⟩ ⊗ |n₀⟩` evolves
//! inside the blocks spanned by `|j, N−j⟩`, `j = 0..=N`. Within a block the
//! output is `V† |Φ⟩|n₀⟩` with
//!
//! ```text
//! V† = e^{i(φ_T+φ_R) L₃} e^{θ(â₁†â₂ − â₂†â₁)} e^{i(φ_T−φ_R) L₃},   L₃ = (n₁ − n₂)/2.
//! ```
//!
//! The middle factor is exponentiated exactly: the generator `K` is real
//! antisymmetric and tridiagonal, and `D⁻¹ K D = iS` with `D = diag(iʲ)` and
//! `S` real symmetric, so `e^{θK} = D V e^{iθΛ} Vᵀ D⁻¹` from a symmetric
//! eigendecomposition `S = V Λ Vᵀ`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use super::BeamSplitter;
use crate::error::{Error, Result};
use crate::fock::{FockVector, HARD_CAP};
use crate::specfun::ln_fact;

/// Two-mode pure state stored as total-photon-number blocks; `blocks[N][j]`
/// is the amplitude of `|j, N−j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    blocks: Vec<Vec<Complex64>>,
}

impl TwoModeState {
    /// `|Φ⟩ ⊗ |n₀⟩`.
    pub fn product(in1: &FockVector, n0: usize) -> Result<Self> {
        let n_max = in1.cutoff() + n0;
        if n_max > HARD_CAP {
            return Err(Error::CapExceeded { requested: n_max, cap: HARD_CAP });
        }
        let zero = Complex64::new(0.0, 0.0);
        let blocks = (0..=n_max)
            .map(|n| {
                let mut b = vec![zero; n + 1];
                if n >= n0 {
                    b[n - n0] = in1.amps()[n - n0];
                }
                b
            })
            .collect();
        Ok(TwoModeState { blocks })
    }

    pub fn blocks(&self) -> &[Vec<Complex64>] {
        &self.blocks
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().flatten().map(|a| a.norm_sqr()).sum()
    }

    /// Unnormalized mode-1 amplitudes after projecting mode 2 on `|m₂⟩`.
    pub fn project_mode2(&self, m2: usize) -> Vec<Complex64> {
        let len = self.blocks.len().saturating_sub(m2).max(1);
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (n, b) in self.blocks.iter().enumerate().skip(m2) {
            out[n - m2] = b[n - m2];
        }
        out
    }

    /// Probability of finding `m₂` photons in mode 2.
    pub fn mode2_probability(&self, m2: usize) -> f64 {
        self.project_mode2(m2).iter().map(|a| a.norm_sqr()).sum()
    }

    /// Photon-number distribution of mode 1 (reduced state diagonal).
    pub fn mode1_diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.blocks.len()];
        for b in &self.blocks {
            for (j, a) in b.iter().enumerate() {
                d[j] += a.norm_sqr();
            }
        }
        d
    }

    /// Largest amplitude difference over all blocks.
    pub fn max_abs_diff(&self, other: &TwoModeState) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }
}

fn l3_phase(angle: f64, n: usize, j: usize) -> Complex64 {
    Complex64::from_polar(1.0, angle * (j as f64 - (n - j) as f64) / 2.0)
}

/// `e^{θK}` applied to a single basis vector `e_k` of block `n`.
fn rotate_basis_vector(theta: f64, n: usize, k: usize) -> Vec<Complex64> {
    if n == 0 {
        return vec![Complex64::new(1.0, 0.0)];
    }
    let dim = n + 1;
    let mut s = DMatrix::<f64>::zeros(dim, dim);
    for j in 0..n {
        let v = -(((j + 1) * (n - j)) as f64).sqrt();
        s[(j, j + 1)] = v;
        s[(j + 1, j)] = v;
    }
    let eig = SymmetricEigen::new(s);
    let i_pow = |p: i64| match p.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let coef: Vec<Complex64> = (0..dim)
        .map(|l| Complex64::from_polar(1.0, theta * eig.eigenvalues[l]) * eig.eigenvectors[(k, l)])
        .collect();
    (0..dim)
        .map(|a| {
            let s: Complex64 = (0..dim).map(|l| coef[l] * eig.eigenvectors[(a, l)]).sum();
            s * i_pow(a as i64 - k as i64)
        })
        .collect()
}

/// Exact evolution of `|Φ⟩ ⊗ |n₀⟩` through the beam splitter.
pub fn two_mode_evolve(in1: &FockVector, n0: usize, bs: &BeamSplitter) -> Result<TwoModeState> {
    let input = TwoModeState::product(in1, n0)?;
    let outer = bs.phi_t + bs.phi_r;
    let inner = bs.phi_t - bs.phi_r;
    let blocks = input
        .blocks
        .par_iter()
        .enumerate()
        .map(|(n, b)| {
            if n < n0 {
                return b.clone();
            }
            let k = n - n0;
            let c = b[k] * l3_phase(inner, n, k);
            if c == Complex64::new(0.0, 0.0) {
                return b.clone();
            }
            rotate_basis_vector(bs.theta, n, k)
                .into_iter()
                .enumerate()
                .map(|(j, v)| v * c * l3_phase(outer, n, j))
                .collect()
        })
        .collect();
    Ok(TwoModeState { blocks })
}

/// Evolution through the factored form `T^{n̂₁} e^{−R* â₂†â₁} e^{R â₁†â₂} T^{−n̂₂}`.
///
/// Each exponential is a finite sum inside a block, so this route is exact
/// as well; it shares no code with [`two_mode_evolve`].
pub fn factored_evolve(in1: &FockVector, n0: usize, bs: &BeamSplitter) -> Result<TwoModeState> {
    let t = bs.t();
    let r = bs.r();
    if t.norm() == 0.0 {
        return Err(Error::invalid("factored form needs |T| > 0 (T^{-n₂} is singular)"));
    }
    let input = TwoModeState::product(in1, n0)?;
    let zero = Complex64::new(0.0, 0.0);
    let blocks = input
        .blocks
        .par_iter()
        .enumerate()
        .map(|(n, b)| {
            if n < n0 || b[n - n0] == zero {
                return b.clone();
            }
            let n1 = n - n0;
            // T^{-n̂₂}
            let c = b[n1] * t.powi(-(n0 as i32));
            // e^{R â₁†â₂}: |n₁, n₀⟩ → Σ_k R^k/k! √((n₁+k)!/n₁!) √(n₀!/(n₀−k)!) |n₁+k, n₀−k⟩
            let mut mid = vec![zero; n + 1];
            for k in 0..=n0 {
                let mag = (0.5 * (ln_fact(n1 + k) - ln_fact(n1) + ln_fact(n0) - ln_fact(n0 - k))
                    - ln_fact(k))
                .exp();
                mid[n1 + k] = c * r.powu(k as u32) * mag;
            }
            // e^{−R* â₂†â₁}: |m, n−m⟩ → Σ_l (−R*)^l/l! √(m!/(m−l)!) √((n−m+l)!/(n−m)!) |m−l, n−m+l⟩
            let mut out = vec![zero; n + 1];
            let mr = -r.conj();
            for (m, &a) in mid.iter().enumerate() {
                if a == zero {
                    continue;
                }
                for l in 0..=m {
                    let mag = (0.5
                        * (ln_fact(m) - ln_fact(m - l) + ln_fact(n - m + l) - ln_fact(n - m))
                        - ln_fact(l))
                    .exp();
                    out[m - l] += a * mr.powu(l as u32) * mag;
                }
            }
            // T^{n̂₁}
            for (j, v) in out.iter_mut().enumerate() {
                *v *= t.powu(j as u32);
            }
            out
        })
        .collect();
    Ok(TwoModeState { blocks })
}
