//! The limiting density g_α and its integrals against test functions.
//!
//! For a validated relation system with rows (b_j, a_j, q_j, p_j) the
//! density of the fractional-part vector ({α₁γ},…,{αₙγ}) deviates from
//! uniform by
//!
//!   g(x) = −(1/π) Σ_j log p_j · (p_j^{a_j/2}·cos φ_j − 1)
//!                              / (p_j^{a_j} − 2·p_j^{a_j/2}·cos φ_j + 1),
//!
//! with φ_j = 2π·q_j·(b_j·x).  Equivalently, g is the geometric cosine
//! series −(1/π) Σ_j log p_j Σ_{k≥1} p_j^{−a_j k/2} cos(k φ_j), so its
//! Fourier spectrum is supported on the lattice rays ±k·q_j·b_j.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel;
use crate::relations::RelationSystem;

/// Smallest weight log(p)·p^{−ak/2} kept when summing over the spectrum.
const SPECTRUM_CUTOFF: f64 = 1.0 / (1u128 << 70) as f64;

/// A real-valued trigonometric polynomial h(x) = Σ_m c_m e^{2πi m·x} on
/// the n-torus, stored as its finite Fourier spectrum.
///
/// Construction completes the spectrum Hermitianly: a term given only at
/// m is mirrored as c_{−m} = conj(c_m); if both ±m are supplied they must
/// already be conjugate, and c_0 must be real.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    n: usize,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

/// One spectrum entry of a [`TestFunction`], as read from configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestTerm {
    pub m: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl TestFunction {
    /// Build from explicit coefficients, completing Hermitian symmetry.
    pub fn new(n: usize, terms: impl IntoIterator<Item = (Vec<i64>, Complex64)>) -> Result<Self> {
        let mut coeffs: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        let mut given: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (m, c) in terms {
            if m.len() != n {
                return Err(Error::DimensionError { n: m.len() });
            }
            if given.insert(m.clone(), c).is_some() {
                return Err(Error::AmbiguousFrequency { m });
            }
        }
        for (m, c) in &given {
            let neg: Vec<i64> = m.iter().map(|x| -x).collect();
            if neg == *m {
                // self-conjugate frequency (m = 0 when it exists at all)
                if c.im != 0.0 {
                    return Err(Error::NonHermitian { m: m.clone() });
                }
                coeffs.insert(m.clone(), *c);
            } else if let Some(cn) = given.get(&neg) {
                if *cn != c.conj() {
                    return Err(Error::NonHermitian { m: m.clone() });
                }
                coeffs.insert(m.clone(), *c);
            } else {
                coeffs.insert(m.clone(), *c);
                coeffs.insert(neg, c.conj());
            }
        }
        Ok(TestFunction { n, coeffs })
    }

    /// Build from configuration terms.
    pub fn from_terms(n: usize, terms: &[TestTerm]) -> Result<Self> {
        Self::new(
            n,
            terms
                .iter()
                .map(|t| (t.m.clone(), Complex64::new(t.re, t.im))),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The coefficient c_m (zero off the stored support).
    pub fn coeff(&self, m: &[i64]) -> Complex64 {
        self.coeffs
            .get(m)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterate the completed spectrum in lexicographic frequency order.
    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.coeffs.iter()
    }

    /// Largest ‖m‖∞ over the support (0 for the constant function).
    pub fn support_norm(&self) -> u64 {
        self.coeffs
            .keys()
            .flat_map(|m| m.iter().map(|x| x.unsigned_abs()))
            .max()
            .unwrap_or(0)
    }

    /// Evaluate h(x); real by Hermitian symmetry.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionError { n: x.len() });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.coeffs {
            let phase: f64 = TAU * m.iter().zip(x).map(|(&mi, &xi)| mi as f64 * xi).sum::<f64>();
            acc += c * Complex64::new(phase.cos(), phase.sin());
        }
        Ok(acc.re)
    }
}

/// Per-row quantities precomputed for repeated evaluation.
struct RowEval {
    lnp: f64,
    pa: f64,
    pa2: f64,
    q: f64,
    b: Vec<i64>,
}

fn row_evals(system: &RelationSystem) -> Vec<RowEval> {
    system
        .rows
        .iter()
        .map(|r| {
            let pa = (r.p as f64).powi(r.a as i32);
            RowEval {
                lnp: (r.p as f64).ln(),
                pa,
                pa2: pa.sqrt(),
                q: r.q as f64,
                b: r.b.clone(),
            }
        })
        .collect()
}

fn phase(row: &RowEval, x: &[f64]) -> f64 {
    let dot: f64 = row.b.iter().zip(x).map(|(&bi, &xi)| bi as f64 * xi).sum();
    TAU * row.q * dot
}

fn g_eval_rows(rows: &[RowEval], x: &[f64]) -> f64 {
    let mut sum = 0.0;
    for row in rows {
        let c = phase(row, x).cos();
        sum += row.lnp * (row.pa2 * c - 1.0) / (row.pa - 2.0 * row.pa2 * c + 1.0);
    }
    -sum / PI
}

/// Evaluate g(x) in closed form.  The r = 0 system gives g ≡ 0.
pub fn g_eval(system: &RelationSystem, x: &[f64]) -> Result<f64> {
    if x.len() != system.n {
        return Err(Error::DimensionError { n: x.len() });
    }
    Ok(g_eval_rows(&row_evals(system), x))
}

/// Evaluate the partial cosine series of g with k ≤ kmax per row.
pub fn g_eval_series(system: &RelationSystem, x: &[f64], kmax: u32) -> Result<f64> {
    if x.len() != system.n {
        return Err(Error::DimensionError { n: x.len() });
    }
    let rows = row_evals(system);
    let mut sum = 0.0;
    for row in &rows {
        let phi = phase(row, x);
        let r = 1.0 / row.pa2;
        let mut rk = 1.0;
        let mut inner = 0.0;
        for k in 1..=kmax {
            rk *= r;
            inner += rk * (k as f64 * phi).cos();
        }
        sum += row.lnp * inner;
    }
    Ok(-sum / PI)
}

/// Upper bound on |g − series(kmax)|: the geometric tails
/// (1/π) Σ_j log p_j · r_j^{kmax+1}/(1 − r_j) with r_j = p_j^{−a_j/2}.
pub fn series_tail_bound(system: &RelationSystem, kmax: u32) -> f64 {
    let mut bound = 0.0;
    for row in &row_evals(system) {
        let r = 1.0 / row.pa2;
        bound += row.lnp * r.powi(kmax as i32 + 1) / (1.0 - r);
    }
    bound / PI
}

/// Decompose m as k·q_j·b_j (k ≥ 1 integer) for a given row, if possible.
fn ray_multiple(row: &crate::relations::RelationRow, m: &[i64]) -> Option<u64> {
    let mut k: Option<i64> = None;
    for (&bi, &mi) in row.b.iter().zip(m) {
        let step = bi.checked_mul(row.q as i64)?;
        if step == 0 {
            if mi != 0 {
                return None;
            }
            continue;
        }
        if mi % step != 0 {
            return None;
        }
        let ki = mi / step;
        match k {
            None => k = Some(ki),
            Some(prev) if prev != ki => return None,
            _ => {}
        }
    }
    match k {
        Some(k) if k >= 1 => Some(k as u64),
        _ => None,
    }
}

/// The Fourier coefficient ĝ(m): −log(p_j)·p_j^{−a_j k/2}/(2π) when
/// m = ±k·q_j·b_j, zero off the spectrum.
///
/// A frequency reachable through two distinct (j, k) pairs is reported as
/// [`Error::AmbiguousFrequency`]; this cannot occur for a validated
/// (full-rank, distinct-prime) system but is checked regardless.
pub fn g_fourier_coefficient(system: &RelationSystem, m: &[i64]) -> Result<f64> {
    if m.len() != system.n {
        return Err(Error::DimensionError { n: m.len() });
    }
    if m.iter().all(|&x| x == 0) {
        return Ok(0.0);
    }
    let neg: Vec<i64> = m.iter().map(|x| -x).collect();
    let mut hit: Option<f64> = None;
    for row in &system.rows {
        let k = ray_multiple(row, m).or_else(|| ray_multiple(row, &neg));
        if let Some(k) = k {
            if hit.is_some() {
                return Err(Error::AmbiguousFrequency { m: m.to_vec() });
            }
            let pa2k = (row.p as f64).powi(row.a as i32).sqrt().powi(k as i32);
            hit = Some(-(row.p as f64).ln() / pa2k / TAU);
        }
    }
    Ok(hit.unwrap_or(0.0))
}

/// ∫_{[0,1]ⁿ} h·g, evaluated spectrally:
///
///   ∫ h g = −(1/π) Σ_j Σ_{k≥1} log p_j · p_j^{−a_j k/2} · Re c_{k q_j b_j}.
///
/// The m = 0 term vanishes identically (ĝ(0) = 0), so a constant test
/// function integrates to exactly zero.  The k sum stops once the weight
/// falls below 2⁻⁷⁰ or the ray leaves the support of h.
pub fn integral_h_g(system: &RelationSystem, h: &TestFunction) -> Result<f64> {
    if h.n() != system.n {
        return Err(Error::DimensionError { n: h.n() });
    }
    let max_norm = h.support_norm();
    let mut sum = 0.0;
    for row in &system.rows {
        let lnp = (row.p as f64).ln();
        let r = 1.0 / (row.p as f64).powi(row.a as i32).sqrt();
        let ray_norm = row
            .b
            .iter()
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
            * row.q;
        let mut rk = 1.0;
        let mut k = 1u64;
        loop {
            rk *= r;
            if lnp * rk < SPECTRUM_CUTOFF || k.saturating_mul(ray_norm) > max_norm {
                break;
            }
            let m: Vec<i64> = row.b.iter().map(|&bi| bi * row.q as i64 * k as i64).collect();
            sum += lnp * rk * h.coeff(&m).re;
            k += 1;
        }
    }
    Ok(-sum / PI)
}

/// Values of a scalar field sampled at the R×R cell centers of the unit
/// square: `values[i·R + j]` is the sample at x = ((i+½)/R, (j+½)/R).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    r: usize,
    values: Vec<f64>,
}

impl Grid2D {
    pub fn new(r: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != r * r {
            return Err(Error::Config(format!(
                "grid of resolution {r} needs {} values, got {}",
                r * r,
                values.len()
            )));
        }
        Ok(Grid2D { r, values })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.r + j]
    }

    /// Cell-center coordinates of cell (i, j).
    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            (i as f64 + 0.5) / self.r as f64,
            (j as f64 + 0.5) / self.r as f64,
        ]
    }

    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

/// Sample g at the cell centers of an R×R grid (n = 2 systems only).
///
/// Rows are distributed over `workers` threads in fixed chunks, so the
/// result is bitwise identical for every worker count.
pub fn g_grid(system: &RelationSystem, r: usize, workers: usize) -> Result<Grid2D> {
    if system.n != 2 {
        return Err(Error::DimensionError { n: system.n });
    }
    if r < 2 {
        return Err(Error::ResolutionTooSmall { r, min: 2 });
    }
    let rows = row_evals(system);
    let chunks = parallel::map_chunks(r * r, workers, |range| {
        range
            .map(|idx| {
                let x = [
                    ((idx / r) as f64 + 0.5) / r as f64,
                    ((idx % r) as f64 + 0.5) / r as f64,
                ];
                g_eval_rows(&rows, &x)
            })
            .collect::<Vec<f64>>()
    });
    Grid2D::new(r, chunks.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::examples::{example1, example2};
    use crate::relations::{RelationRow, RelationSystem};

    #[test]
    fn g_at_origin_matches_reference() {
        // frozen from a 50-digit reference evaluation of the closed form
        let g1 = g_eval(&example1(), &[0.0, 0.0]).unwrap();
        assert!((g1 - (-1.010_359_384_317_986_6)).abs() < 1e-13, "{g1}");
        let g2 = g_eval(&example2(), &[0.0, 0.0]).unwrap();
        assert!((g2 - (-0.790_823_946_966_415_7)).abs() < 1e-13, "{g2}");
    }

    #[test]
    fn g_interior_matches_reference() {
        let g = g_eval(&example1(), &[0.3, 0.7]).unwrap();
        assert!((g - (-0.477_182_124_694_547_8)).abs() < 1e-13, "{g}");
        let g = g_eval(&example1(), &[0.5, 0.0]).unwrap();
        assert!((g - (-0.386_307_668_161_572_2)).abs() < 1e-13, "{g}");
    }

    #[test]
    fn g_is_one_periodic() {
        let sys = example2();
        let a = g_eval(&sys, &[0.37, 0.81]).unwrap();
        let b = g_eval(&sys, &[1.37, 0.81]).unwrap();
        // x and x+e₁ differ by an exact integer shift inside cos(2πq b·x)
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn empty_system_is_flat() {
        let sys = RelationSystem::empty(2);
        assert_eq!(g_eval(&sys, &[0.2, 0.9]).unwrap(), 0.0);
        let grid = g_grid(&sys, 4, 1).unwrap();
        assert!(grid.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn series_converges_to_closed_form() {
        let sys = example1();
        let x = [0.3, 0.7];
        let closed = g_eval(&sys, &x).unwrap();
        for kmax in [1, 5, 10, 40] {
            let partial = g_eval_series(&sys, &x, kmax).unwrap();
            let bound = series_tail_bound(&sys, kmax);
            assert!(
                (closed - partial).abs() <= bound,
                "kmax={kmax}: |{closed} - {partial}| > {bound}"
            );
        }
        // frozen value of the kmax = 1 partial sum at the origin
        let k1 = g_eval_series(&sys, &[0.0, 0.0], 1).unwrap();
        assert!((k1 - (-0.357_911_828_908_502_2)).abs() < 1e-14, "{k1}");
    }

    #[test]
    fn fourier_coefficients_match_reference() {
        let sys = example1();
        // k = 1 rays of both rows, both signs
        let c = g_fourier_coefficient(&sys, &[1, 1]).unwrap();
        assert!((c - (-0.078_006_464_519_551_8)).abs() < 1e-15, "{c}");
        let c = g_fourier_coefficient(&sys, &[-1, -1]).unwrap();
        assert!((c - (-0.078_006_464_519_551_8)).abs() < 1e-15, "{c}");
        let c = g_fourier_coefficient(&sys, &[2, -2]).unwrap();
        assert!((c - (-0.100_949_449_934_699_3)).abs() < 1e-15, "{c}");
        // k = 2 ray of row 1: −log2·2⁻¹/(2π) = −L₂/2
        let c = g_fourier_coefficient(&sys, &[2, 2]).unwrap();
        assert!((c - (-0.055_158_900_038_162_9)).abs() < 1e-15, "{c}");
        // off the spectrum
        assert_eq!(g_fourier_coefficient(&sys, &[1, 0]).unwrap(), 0.0);
        assert_eq!(g_fourier_coefficient(&sys, &[0, 0]).unwrap(), 0.0);
        assert_eq!(g_fourier_coefficient(&sys, &[1, -1]).unwrap(), 0.0);
        assert_eq!(g_fourier_coefficient(&sys, &[3, -3]).unwrap(), 0.0);
    }

    #[test]
    fn integral_against_single_cosine() {
        let sys = example1();
        // h = cos(2π(x₁+x₂)); ∫ h g = ĝ(1,1) summed over both signs
        let h = TestFunction::new(
            2,
            vec![(vec![1, 1], Complex64::new(0.5, 0.0))],
        )
        .unwrap();
        let v = integral_h_g(&sys, &h).unwrap();
        assert!((v - (-0.078_006_464_519_551_8)).abs() < 1e-15, "{v}");
        let h = TestFunction::new(
            2,
            vec![(vec![2, -2], Complex64::new(0.5, 0.0))],
        )
        .unwrap();
        let v = integral_h_g(&sys, &h).unwrap();
        assert!((v - (-0.100_949_449_934_699_3)).abs() < 1e-15, "{v}");
    }

    #[test]
    fn constant_test_function_integrates_to_exact_zero() {
        let h = TestFunction::new(2, vec![(vec![0, 0], Complex64::new(1.0, 0.0))]).unwrap();
        assert_eq!(integral_h_g(&example1(), &h).unwrap(), 0.0);
        assert_eq!(integral_h_g(&example2(), &h).unwrap(), 0.0);
    }

    #[test]
    fn integral_matches_grid_quadrature() {
        // cross-check the spectral route against brute-force midpoint
        // quadrature of h·g on a fine grid
        let sys = example2();
        let h = TestFunction::new(
            2,
            vec![
                (vec![2, 1], Complex64::new(0.5, 0.0)),
                (vec![0, 0], Complex64::new(0.25, 0.0)),
            ],
        )
        .unwrap();
        let spectral = integral_h_g(&sys, &h).unwrap();
        let r = 512;
        let grid = g_grid(&sys, r, 2).unwrap();
        let mut quad = crate::parallel::KahanSum::default();
        for i in 0..r {
            for j in 0..r {
                let x = grid.center(i, j);
                quad.add(h.eval(&x).unwrap() * grid.get(i, j));
            }
        }
        let quad = quad.value() / (r * r) as f64;
        assert!(
            (spectral - quad).abs() < 1e-6,
            "spectral {spectral} vs quadrature {quad}"
        );
    }

    #[test]
    fn hermitian_completion_and_rejection() {
        let h = TestFunction::new(2, vec![(vec![1, 0], Complex64::new(0.25, -0.5))]).unwrap();
        assert_eq!(h.coeff(&[-1, 0]), Complex64::new(0.25, 0.5));
        // eval is real
        let v = h.eval(&[0.3, 0.9]).unwrap();
        assert!(v.is_finite());

        let bad = TestFunction::new(
            2,
            vec![
                (vec![1, 0], Complex64::new(0.25, -0.5)),
                (vec![-1, 0], Complex64::new(0.25, -0.5)),
            ],
        );
        assert!(matches!(bad, Err(Error::NonHermitian { .. })));

        let bad = TestFunction::new(2, vec![(vec![0, 0], Complex64::new(1.0, 0.5))]);
        assert!(matches!(bad, Err(Error::NonHermitian { .. })));

        let dup = TestFunction::new(
            2,
            vec![
                (vec![1, 0], Complex64::new(0.5, 0.0)),
                (vec![1, 0], Complex64::new(0.5, 0.0)),
            ],
        );
        assert!(matches!(dup, Err(Error::AmbiguousFrequency { .. })));
    }

    #[test]
    fn test_function_eval_reference() {
        // h = cos(2π(x+y)) = ½e(x+y) + ½e(−x−y)
        let h = TestFunction::new(2, vec![(vec![1, 1], Complex64::new(0.5, 0.0))]).unwrap();
        assert!((h.eval(&[0.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(h.eval(&[0.25, 0.0]).unwrap().abs() < 1e-15);
        assert!((h.eval(&[0.25, 0.25]).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_matches_pointwise_and_is_worker_invariant() {
        let sys = example1();
        let base = g_grid(&sys, 33, 1).unwrap();
        for workers in [2usize, 4, 8] {
            let other = g_grid(&sys, 33, workers).unwrap();
            assert_eq!(base, other, "workers={workers}");
        }
        for (i, j) in [(0, 0), (16, 7), (32, 32)] {
            let x = base.center(i, j);
            assert_eq!(base.get(i, j), g_eval(&sys, &x).unwrap());
        }
    }

    #[test]
    fn grid_rejects_bad_inputs() {
        let sys3 = RelationSystem {
            n: 3,
            rows: vec![RelationRow { b: vec![1, 0, 0], a: 1, q: 1, p: 2 }],
        };
        assert!(matches!(
            g_grid(&sys3, 8, 1),
            Err(Error::DimensionError { n: 3 })
        ));
        assert!(matches!(
            g_grid(&example1(), 1, 1),
            Err(Error::ResolutionTooSmall { r: 1, min: 2 })
        ));
        assert!(matches!(
            g_eval(&example1(), &[0.1]),
            Err(Error::DimensionError { n: 1 })
        ));
    }

    #[test]
    fn mean_of_grid_is_near_zero() {
        // ∫ g = ĝ(0) = 0; midpoint quadrature converges to it
        let grid = g_grid(&example2(), 256, 4).unwrap();
        let mut sum = crate::parallel::KahanSum::default();
        for &v in grid.values() {
            sum.add(v);
        }
        let mean = sum.value() / (256.0 * 256.0);
        assert!(mean.abs() < 1e-6, "{mean}");
    }
}
