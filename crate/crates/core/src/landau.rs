//! Landau-type sums over zeros and their predicted main terms.
//!
//! The central quantity is S(x, T) = Σ_{0<γ≤T} x^{iγ}, the normalized
//! form of Landau's Σ x^ρ (divide by √x with ρ = ½ + iγ).  For x near a
//! prime power n_x the sum is dominated by the main term
//! −(Λ(n_x)/2π)·(e^{iT·log(x/n_x)} − 1)/(i·log(x/n_x)), which degenerates
//! to −T·Λ(n_x)/(2π) at x = n_x; for x → 1⁺ the small-x asymptotic
//! T·log(T/2π)·(e^{iT log x} − 1)/(iT log x) takes over.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel;
use crate::primes::prime_power_base;
use crate::xprec::XCtx;
use crate::zeros::ZeroSet;

/// Λ(n): log p when n = p^k, else 0.
pub fn von_mangoldt(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("von_mangoldt requires n >= 1".into()));
    }
    Ok(match prime_power_base(n) {
        Some((p, _)) => (p as f64).ln(),
        None => 0.0,
    })
}

/// The prime power n_x ≥ 2 nearest to x; equidistant ties break toward
/// the smaller value.
pub fn nearest_prime_power(x: f64) -> Result<u64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "nearest_prime_power requires 1 < x < inf, got {x}"
        )));
    }
    let below = {
        let mut n = x.floor() as u64;
        loop {
            if n < 2 {
                break None;
            }
            if prime_power_base(n).is_some() {
                break Some(n);
            }
            n -= 1;
        }
    };
    let above = {
        let mut n = (x.ceil() as u64).max(2);
        loop {
            if prime_power_base(n).is_some() {
                break n;
            }
            n += 1;
        }
    };
    Ok(match below {
        // tie goes to the smaller candidate
        Some(lo) if x - lo as f64 <= above as f64 - x => lo,
        _ => above,
    })
}

/// How the phase γ·ω is carried during summation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    /// Single double-precision product; worst-case phase error
    /// ≈ γ·ω·2⁻⁵³ — negligible at desk scale.
    Standard,
    /// Double-double phase: the product is split exactly with an FMA and
    /// a 160-bit correction of ω is folded in to first order.
    Extended,
}

fn check_sum_window(zeros: &ZeroSet, t: f64) -> Result<usize> {
    if t > zeros.t_max() {
        return Err(Error::InsufficientData {
            t,
            t_max: zeros.t_max(),
        });
    }
    Ok(zeros.count_upto(t))
}

/// Σ_{0<γ≤T} e^{iγω} for an exactly-given double ω, any sign.
///
/// Chunked Kahan summation with pairwise combination across chunks: the
/// result is bitwise identical for every worker count.
pub fn phase_sum(zeros: &ZeroSet, omega: f64, t: f64, workers: usize) -> Result<Complex64> {
    let n = check_sum_window(zeros, t)?;
    let gammas = zeros.gammas();
    let [re, im] = parallel::sum_chunked::<2, _>(n, workers, |i| {
        let phi = gammas[i] * omega;
        [phi.cos(), phi.sin()]
    });
    Ok(Complex64::new(re, im))
}

/// Σ e^{iγω} with ω carried as the double-double ω_hi + ω_lo.
///
/// Each phase is formed as p = γ·ω_hi with its exact FMA residual, plus
/// γ·ω_lo; the residual corrects cos/sin to first order, which is exact
/// to well below one ulp of the final sum for |residual| ≪ 1.
pub fn phase_sum_dd(
    zeros: &ZeroSet,
    omega_hi: f64,
    omega_lo: f64,
    t: f64,
    workers: usize,
) -> Result<Complex64> {
    let n = check_sum_window(zeros, t)?;
    let gammas = zeros.gammas();
    let [re, im] = parallel::sum_chunked::<2, _>(n, workers, |i| {
        let g = gammas[i];
        let p = g * omega_hi;
        let e = g.mul_add(omega_hi, -p) + g * omega_lo;
        let (s, c) = p.sin_cos();
        [c - e * s, s + e * c]
    });
    Ok(Complex64::new(re, im))
}

/// Split an extended-precision value into leading double + correction.
fn split_dd(ctx: &XCtx, v: &astro_float::BigFloat) -> (f64, f64) {
    let hi = XCtx::to_f64(v);
    let lo = XCtx::to_f64(&ctx.sub(v, &ctx.from_f64(hi)));
    (hi, lo)
}

/// S(x, T) = Σ_{0<γ≤T} x^{iγ}.
pub fn zero_sum(
    zeros: &ZeroSet,
    x: f64,
    t: f64,
    workers: usize,
    mode: PhaseMode,
) -> Result<Complex64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("zero_sum requires 1 < x < inf, got {x}")));
    }
    match mode {
        PhaseMode::Standard => phase_sum(zeros, x.ln(), t, workers),
        PhaseMode::Extended => {
            let ctx = XCtx::new(160);
            let (hi, lo) = split_dd(&ctx, &ctx.ln(&ctx.from_f64(x)));
            phase_sum_dd(zeros, hi, lo, t, workers)
        }
    }
}

/// Lemma-1 main term for Σ_{0<γ≤T} x^ρ (note: un-normalized; divide by
/// √x to compare against [`zero_sum`]):
///
///   −(Λ(n_x)/2π)·(e^{iT·log(x/n_x)} − 1)/(i·log(x/n_x)),
///
/// degenerating to −T·Λ(n_x)/(2π) when |log(x/n_x)| < 2⁻⁴⁰.
pub fn landau_main_term(x: f64, t: f64) -> Result<Complex64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "landau_main_term requires 1 < x < inf, got {x}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("landau_main_term requires T > 0, got {t}")));
    }
    let n_x = nearest_prime_power(x)?;
    let lambda = von_mangoldt(n_x)?;
    let delta = (x / n_x as f64).ln();
    if delta.abs() < 2f64.powi(-40) {
        return Ok(Complex64::new(-t * lambda / TAU, 0.0));
    }
    let z = t * delta;
    let num = Complex64::new(z.cos() - 1.0, z.sin());
    let den = Complex64::new(0.0, delta);
    Ok(-(lambda / TAU) * (num / den))
}

/// §3-Remarks small-x main term T·log(T/2π)·(e^{iT log x} − 1)/(iT log x),
/// with the sinc limit (→ 1) taken below |T log x| < 2⁻⁴⁰.
pub fn small_x_main_term(x: f64, t: f64) -> Result<Complex64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "small_x_main_term requires 1 < x < inf, got {x}"
        )));
    }
    if !(t > TAU) {
        return Err(Error::Domain(format!(
            "small_x_main_term requires T > 2pi, got {t}"
        )));
    }
    let scale = t * (t / TAU).ln();
    let z = t * x.ln();
    let kernel = if z.abs() < 2f64.powi(-40) {
        Complex64::new(1.0, z / 2.0)
    } else {
        Complex64::new(z.cos() - 1.0, z.sin()) / Complex64::new(0.0, z)
    };
    Ok(scale * kernel)
}

/// Real/imaginary pair in a JSON-stable shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexParts {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexParts {
    fn from(c: Complex64) -> Self {
        ComplexParts { re: c.re, im: c.im }
    }
}

/// One Landau verification at (x, T), in the normalized Σ x^{iγ} scale:
/// `main_term` here is the Lemma-1 display divided by √x, so that
/// `residual = sum − main_term` compares like with like.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandauReport {
    pub x: f64,
    pub t: f64,
    pub sum: ComplexParts,
    pub main_term: ComplexParts,
    pub residual: ComplexParts,
    pub n_x: u64,
    pub lambda_nx: f64,
}

/// Compute the full report for one (x, T).
pub fn landau_report(
    zeros: &ZeroSet,
    x: f64,
    t: f64,
    workers: usize,
    mode: PhaseMode,
) -> Result<LandauReport> {
    let sum = zero_sum(zeros, x, t, workers, mode)?;
    let main = landau_main_term(x, t)? / x.sqrt();
    let n_x = nearest_prime_power(x)?;
    Ok(LandauReport {
        x,
        t,
        sum: sum.into(),
        main_term: main.into(),
        residual: (sum - main).into(),
        n_x,
        lambda_nx: von_mangoldt(n_x)?,
    })
}
