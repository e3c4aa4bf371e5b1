//! Empirical statistics of the fractional parts ({α₁γ}, …, {αₙγ}):
//! the deviation statistic M(y₁,y₂;T), its discretized density DM, and
//! the Theorem-1 weighted sums (1/T)(Σ h(γα) − N(T)∫h).

use serde::{Deserialize, Serialize};

use crate::density::{integral_h_g, Grid2D, TestFunction};
use crate::error::{Error, Result};
use crate::landau::{phase_sum, phase_sum_dd, PhaseMode};
use crate::parallel;
use crate::relations::{AlphaVector, RelationSystem};
use crate::xprec::XCtx;
use crate::zeros::{n_asymptotic, ZeroSet};

/// |Mα − P| tolerance used by [`theorem_check`] to accept an (α, system)
/// pair; generous enough for 12-digit decimal α, far above solver noise.
pub const CONSISTENCY_TOL: f64 = 1e-9;

fn check_window(zeros: &ZeroSet, t: f64) -> Result<usize> {
    if t > zeros.t_max() {
        return Err(Error::InsufficientData {
            t,
            t_max: zeros.t_max(),
        });
    }
    Ok(zeros.count_upto(t))
}

/// The points ({α₁γ}, …, {αₙγ}) for every γ ≤ T, in zero order.
///
/// Coordinates are double precision, built from the once-rounded f64
/// mirrors of α: the absolute error γ·2⁻⁵² stays two decades below the
/// default bin width 10⁻² over any desk-scale dataset.
pub fn fractional_parts<'a>(
    zeros: &'a ZeroSet,
    alpha: &AlphaVector,
    t: f64,
) -> Result<impl Iterator<Item = Vec<f64>> + 'a> {
    let count = check_window(zeros, t)?;
    let coords: Vec<f64> = alpha.as_f64().to_vec();
    Ok(zeros.gammas()[..count]
        .iter()
        .map(move |&g| coords.iter().map(|&a| (a * g).fract()).collect()))
}

/// M(y₁, y₂; T) = (1/T)·#{γ ≤ T : {α₁γ} < y₁, {α₂γ} < y₂} − y₁y₂·N(T)/T
/// with N(T) the observed count.
///
/// The numerator is assembled before the single division by T, so that
/// the four-corner second difference reproduces [`dm_grid`] to rounding
/// accuracy.
pub fn m_statistic(
    zeros: &ZeroSet,
    alpha: &AlphaVector,
    y1: f64,
    y2: f64,
    t: f64,
) -> Result<f64> {
    if alpha.n() != 2 {
        return Err(Error::DimensionError { n: alpha.n() });
    }
    if !(0.0..=1.0).contains(&y1) || !(0.0..=1.0).contains(&y2) {
        return Err(Error::Domain(format!(
            "m_statistic requires y in [0, 1], got ({y1}, {y2})"
        )));
    }
    let n_obs = check_window(zeros, t)?;
    let a = alpha.as_f64();
    let (a1, a2) = (a[0], a[1]);
    let mut count = 0u64;
    for &g in &zeros.gammas()[..n_obs] {
        if (a1 * g).fract() < y1 && (a2 * g).fract() < y2 {
            count += 1;
        }
    }
    Ok((count as f64 - y1 * y2 * n_obs as f64) / t)
}

/// Which N(T) enters the DM normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountMode {
    /// Observed zero count — makes Σ DM·Δ² vanish identically.
    Observed,
    /// Riemann–von Mangoldt asymptotic — sensitivity checks only.
    Asymptotic,
}

/// The discretized density DM on an R×R grid, with the integer cell
/// histogram retained so the telescoping identities stay exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmGrid {
    pub grid: Grid2D,
    counts: Vec<u64>,
    pub n_obs: u64,
    pub t: f64,
    pub r: usize,
    pub mode: CountMode,
}

impl DmGrid {
    /// Per-cell zero counts, row-major like the grid.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Σ_cells DM·Δ², evaluated on the exact integer histogram: zero to
    /// the bit in Observed mode because the counts telescope against
    /// n_obs before any floating-point rounding.
    pub fn mass(&self) -> f64 {
        let total: u64 = self.counts.iter().sum();
        match self.mode {
            CountMode::Observed => (total as f64 - self.n_obs as f64) / self.t,
            CountMode::Asymptotic => {
                let expected = n_asymptotic(self.t).unwrap_or(self.n_obs as f64);
                (total as f64 - expected) / self.t
            }
        }
    }
}

/// Single-pass DM grid: bin every ({α₁γ}, {α₂γ}) into its Δ-cell, then
/// DM(i,j) = (count·R² − N)/T with an exact integer numerator in
/// Observed mode (one rounding per cell).
///
/// Binning is chunked over the zeros with per-chunk local histograms;
/// the merge is exact integer addition, so any worker count produces the
/// same grid bit for bit.
pub fn dm_grid(
    zeros: &ZeroSet,
    alpha: &AlphaVector,
    r: usize,
    t: f64,
    workers: usize,
    mode: CountMode,
) -> Result<DmGrid> {
    if alpha.n() != 2 {
        return Err(Error::DimensionError { n: alpha.n() });
    }
    if r < 2 {
        return Err(Error::ResolutionTooSmall { r, min: 2 });
    }
    let n_obs = check_window(zeros, t)?;
    let a = alpha.as_f64();
    let (a1, a2) = (a[0], a[1]);
    let rf = r as f64;
    let gammas = zeros.gammas();
    let partials = parallel::map_chunks(n_obs, workers, |range| {
        let mut hist = vec![0u64; r * r];
        for &g in &gammas[range] {
            let i = (((a1 * g).fract() * rf) as usize).min(r - 1);
            let j = (((a2 * g).fract() * rf) as usize).min(r - 1);
            hist[i * r + j] += 1;
        }
        hist
    });
    let mut counts = vec![0u64; r * r];
    for part in partials {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    let r2 = (r * r) as i128;
    let values: Vec<f64> = match mode {
        CountMode::Observed => counts
            .iter()
            .map(|&c| {
                // exact integer numerator, single rounding in the division
                let num = c as i128 * r2 - n_obs as i128;
                num as f64 / t
            })
            .collect(),
        CountMode::Asymptotic => {
            let expected = n_asymptotic(t)?;
            counts
                .iter()
                .map(|&c| ((c as f64 * r2 as f64) - expected) / t)
                .collect()
        }
    };
    Ok(DmGrid {
        grid: Grid2D::new(r, values)?,
        counts,
        n_obs: n_obs as u64,
        t,
        r,
        mode,
    })
}

fn lex_positive(m: &[i64]) -> bool {
    for &x in m {
        if x != 0 {
            return x > 0;
        }
    }
    false
}

/// (1/T)(Σ_{γ≤T} h(γα) − N_obs·c₀), evaluated spectrally:
///
///   Σ_γ h(γα) = N_obs·c₀ + Σ_{m≠0} c_m·S(2π m·α),
///
/// so the c₀ term cancels exactly and the result is
/// (1/T)·Σ_{±m pairs} 2·Re(c_m·S(ω_m)) with ω_m = 2π(m·α) carried in
/// extended precision and rounded once.
pub fn h_sum(
    ctx: &XCtx,
    zeros: &ZeroSet,
    h: &TestFunction,
    alpha: &AlphaVector,
    t: f64,
    workers: usize,
    mode: PhaseMode,
) -> Result<f64> {
    if h.n() != alpha.n() {
        return Err(Error::DimensionError { n: h.n() });
    }
    check_window(zeros, t)?;
    let two_pi = ctx.two_pi();
    let mut acc = 0.0;
    for (m, c) in h.coeffs() {
        if !lex_positive(m) {
            continue; // m = 0 contributes exactly zero; −m is folded in
        }
        let omega_x = ctx.mul(&two_pi, &alpha.dot(ctx, m));
        let s = match mode {
            PhaseMode::Standard => phase_sum(zeros, XCtx::to_f64(&omega_x), t, workers)?,
            PhaseMode::Extended => {
                let hi = XCtx::to_f64(&omega_x);
                let lo = XCtx::to_f64(&ctx.sub(&omega_x, &ctx.from_f64(hi)));
                phase_sum_dd(zeros, hi, lo, t, workers)?
            }
        };
        acc += 2.0 * (c * s).re;
    }
    Ok(acc / t)
}

/// One (T, h_sum, ∫hg, difference) row of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremRow {
    pub t: f64,
    pub n_obs: u64,
    pub h_sum: f64,
    pub integral: f64,
    pub difference: f64,
}

/// Theorem-1 convergence report over an increasing T list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub rows: Vec<TheoremRow>,
    pub integral: f64,
    /// |difference| at the largest T exceeded 1.2× the difference at the
    /// median T — the tail stopped improving beyond noise allowance.
    pub non_improving: bool,
}

/// Compare h_sum(T) against ∫hg across T_list (increasing, all ≤ t_max).
///
/// The (system, α) pair is validated first: every row of Mα = P must
/// hold within [`CONSISTENCY_TOL`], else the violated row is reported.
pub fn theorem_check(
    ctx: &XCtx,
    zeros: &ZeroSet,
    h: &TestFunction,
    system: &RelationSystem,
    alpha: &AlphaVector,
    t_list: &[f64],
    workers: usize,
    mode: PhaseMode,
) -> Result<TheoremReport> {
    if alpha.n() != system.n {
        return Err(Error::DimensionError { n: alpha.n() });
    }
    system.validate()?;
    system.consistent_with(ctx, alpha, CONSISTENCY_TOL)?;
    if t_list.is_empty() {
        return Err(Error::Domain("theorem_check requires a nonempty T list".into()));
    }
    for w in t_list.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Domain(format!(
                "T list must increase strictly: {} then {}",
                w[0], w[1]
            )));
        }
    }
    let integral = integral_h_g(system, h)?;
    let mut rows = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let hs = h_sum(ctx, zeros, h, alpha, t, workers, mode)?;
        rows.push(TheoremRow {
            t,
            n_obs: zeros.count_upto(t) as u64,
            h_sum: hs,
            integral,
            difference: hs - integral,
        });
    }
    let median = rows[rows.len() / 2].difference.abs();
    let last = rows.last().unwrap().difference.abs();
    Ok(TheoremReport {
        rows,
        integral,
        non_improving: last > 1.2 * median,
    })
}
