//! Rational-relation systems Mα = P and the α vectors they determine.
//!
//! A relation row states b·α = (a/q)·log(p)/(2π) for an integer vector b,
//! coprime a/q, and a prime p.  The full-rank collection of such rows is
//! what shapes the limiting density g_α.  This module validates systems,
//! solves square ones exactly (α as rational combinations of log p/(2π)),
//! and detects relations numerically by bounded exhaustive search.

use std::collections::BTreeMap;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::xprec::XCtx;

/// One relation: b·α = (a/q)·log(p)/(2π).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRow {
    pub b: Vec<i64>,
    pub a: u64,
    pub q: u64,
    pub p: u64,
}

/// A system of relation rows over α ∈ ℝⁿ; `rows.len() = r ≤ n`, full row
/// rank, pairwise distinct primes.  `r = 0` encodes the g ≡ 0 case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSystem {
    pub n: usize,
    pub rows: Vec<RelationRow>,
}

/// One term (u/v)·log(p)/(2π) of an exact α coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTerm {
    pub num: i64,
    pub den: u64,
    pub p: u64,
}

/// The vector α: extended-precision values, f64 mirrors (rounded once),
/// and optionally the exact symbolic form Σ (u/v)·log(p)/(2π).
#[derive(Debug, Clone)]
pub struct AlphaVector {
    values: Vec<BigFloat>,
    values_f64: Vec<f64>,
    exact: Option<Vec<Vec<ExactTerm>>>,
}

impl AlphaVector {
    /// Build from extended-precision coordinates; enforces positivity and
    /// pairwise distinctness.
    pub fn new(values: Vec<BigFloat>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadAlpha);
        }
        let values_f64: Vec<f64> = values.iter().map(XCtx::to_f64).collect();
        for (i, &v) in values_f64.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::BadAlpha);
            }
            for &w in &values_f64[..i] {
                if v == w {
                    return Err(Error::BadAlpha);
                }
            }
        }
        Ok(AlphaVector {
            values,
            values_f64,
            exact: None,
        })
    }

    pub fn with_exact(mut self, exact: Vec<Vec<ExactTerm>>) -> Self {
        self.exact = Some(exact);
        self
    }

    /// Build from exact terms, evaluating in the given context.
    pub fn from_exact(ctx: &XCtx, exact: Vec<Vec<ExactTerm>>) -> Result<Self> {
        let mut values = Vec::with_capacity(exact.len());
        for terms in &exact {
            let mut acc = ctx.from_u64(0);
            for t in terms {
                if t.den == 0 {
                    return Err(Error::Config("exact term with zero denominator".into()));
                }
                if !is_prime(t.p) {
                    return Err(Error::NotPrime { row: 0, p: t.p });
                }
                let coef = ctx.div(&ctx.from_i64(t.num), &ctx.from_u64(t.den));
                acc = ctx.add(&acc, &ctx.mul(&coef, &ctx.log_over_2pi(t.p)));
            }
            values.push(acc);
        }
        Ok(Self::new(values)?.with_exact(exact))
    }

    /// Build from decimal strings (parsed exactly into extended precision).
    pub fn from_decimals(ctx: &XCtx, decimals: &[String]) -> Result<Self> {
        let mut values = Vec::with_capacity(decimals.len());
        for d in decimals {
            values.push(ctx.parse_dec(d)?);
        }
        Self::new(values)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[BigFloat] {
        &self.values
    }

    /// Double-precision mirrors, rounded once from extended precision.
    pub fn as_f64(&self) -> &[f64] {
        &self.values_f64
    }

    pub fn exact(&self) -> Option<&Vec<Vec<ExactTerm>>> {
        self.exact.as_ref()
    }

    /// Dot product m·α in extended precision.
    pub fn dot(&self, ctx: &XCtx, m: &[i64]) -> BigFloat {
        let mut acc = ctx.from_u64(0);
        for (mi, v) in m.iter().zip(&self.values) {
            if *mi != 0 {
                acc = ctx.add(&acc, &ctx.mul(&ctx.from_i64(*mi), v));
            }
        }
        acc
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn row_gcd(b: &[i64]) -> u64 {
    b.iter().fold(0u64, |g, &x| gcd_u64(g, x.unsigned_abs()))
}

/// Exact rank of an integer matrix via Gaussian elimination over ℚ.
fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    let mut col = 0;
    while rank < m.len() && col < ncols {
        // find a pivot
        if let Some(pivot) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) {
            m.swap(rank, pivot);
            let pv = m[rank][col].clone();
            for i in rank + 1..m.len() {
                if !m[i][col].is_zero() {
                    let f = &m[i][col] / &pv;
                    for j in col..ncols {
                        let sub = &f * &m[rank][j];
                        m[i][j] = &m[i][j] - sub;
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank
}

fn to_rational_rows(rows: &[RelationRow]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            r.b.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}

impl RelationSystem {
    /// Empty system (g ≡ 0 case).
    pub fn empty(n: usize) -> Self {
        RelationSystem { n, rows: Vec::new() }
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    /// Verify every type invariant; returns `&self` so calls can chain.
    ///
    /// Checks, per row: length, non-zero b, gcd(b) = 1, a ≥ 1,
    /// gcd(a, q) = 1, p prime; across rows: pairwise distinct primes and
    /// full row rank (exact arithmetic).
    pub fn validate(&self) -> Result<&Self> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.b.len() != self.n {
                return Err(Error::RowLength {
                    row: i,
                    got: row.b.len(),
                    expected: self.n,
                });
            }
            if row.b.iter().all(|&x| x == 0) {
                return Err(Error::ZeroRow { row: i });
            }
            let g = row_gcd(&row.b);
            if g != 1 {
                return Err(Error::RowGcd { row: i, gcd: g });
            }
            if row.a == 0 {
                return Err(Error::NonPositiveA { row: i });
            }
            if row.q == 0 || gcd_u64(row.a, row.q) != 1 {
                return Err(Error::NonCoprimeAq {
                    row: i,
                    a: row.a,
                    q: row.q.max(0),
                });
            }
            if !is_prime(row.p) {
                return Err(Error::NotPrime { row: i, p: row.p });
            }
            for prev in &self.rows[..i] {
                if prev.p == row.p {
                    return Err(Error::RepeatedPrime { p: row.p });
                }
            }
        }
        let rank = rational_rank(&to_rational_rows(&self.rows));
        if rank != self.rows.len() {
            return Err(Error::RankDeficient {
                rank,
                rows: self.rows.len(),
            });
        }
        Ok(self)
    }

    /// Check |Mα − P| row by row against the given tolerance (in units of
    /// 2^−bits); used as the theorem_check precondition.
    pub fn consistent_with(&self, ctx: &XCtx, alpha: &AlphaVector, tol: f64) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            let lhs = alpha.dot(ctx, &row.b);
            let target = ctx.mul(
                &ctx.div(&ctx.from_u64(row.a), &ctx.from_u64(row.q)),
                &ctx.log_over_2pi(row.p),
            );
            let residual = XCtx::to_f64(&ctx.sub(&lhs, &target)).abs();
            if residual > tol {
                return Err(Error::InconsistentSystem { row: i, residual });
            }
            if XCtx::to_f64(&lhs) <= 0.0 {
                return Err(Error::SignConvention {
                    row: i,
                    value: XCtx::to_f64(&lhs),
                });
            }
        }
        Ok(())
    }
}

/// Solve a square (r = n) validated system exactly.
///
/// The inverse of M is computed over ℚ, so each α_i is an exact rational
/// combination Σ_j (M⁻¹)_{ij}·(a_j/q_j)·log(p_j)/(2π); the numeric values
/// are then evaluated in the context's precision.  The residual |Mα − P|
/// is verified below 2^(−precision+8).
pub fn solve_alpha(ctx: &XCtx, system: &RelationSystem) -> Result<AlphaVector> {
    system.validate()?;
    let n = system.n;
    if system.rows.len() < n {
        return Err(Error::Underdetermined {
            r: system.rows.len(),
            n,
        });
    }
    // Gauss-Jordan inversion over exact rationals
    let mut aug: Vec<Vec<BigRational>> = to_rational_rows(&system.rows);
    for (i, row) in aug.iter_mut().enumerate() {
        for j in 0..n {
            row.push(if i == j {
                BigRational::from_integer(BigInt::from(1))
            } else {
                BigRational::zero()
            });
        }
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&i| !aug[i][col].is_zero())
            .expect("validated full-rank system");
        aug.swap(col, pivot);
        let pv = aug[col][col].clone();
        for j in col..2 * n {
            aug[col][j] = &aug[col][j] / &pv;
        }
        for i in 0..n {
            if i != col && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in col..2 * n {
                    let sub = &f * &aug[col][j];
                    aug[i][j] = &aug[i][j] - sub;
                }
            }
        }
    }
    // α_i = Σ_j inv[i][j] · (a_j/q_j) · log(p_j)/(2π)
    let mut exact: Vec<Vec<ExactTerm>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut terms = Vec::new();
        for (j, row) in system.rows.iter().enumerate() {
            let coef = &aug[i][n + j]
                * BigRational::new(BigInt::from(row.a), BigInt::from(row.q));
            if coef.is_zero() {
                continue;
            }
            let num = i64::try_from(coef.numer().clone())
                .map_err(|_| Error::Config("solve_alpha coefficient overflow".into()))?;
            let den = u64::try_from(coef.denom().clone())
                .map_err(|_| Error::Config("solve_alpha coefficient overflow".into()))?;
            terms.push(ExactTerm {
                num,
                den,
                p: row.p,
            });
        }
        exact.push(terms);
    }
    let alpha = AlphaVector::from_exact(ctx, exact)?;
    // verify the residual bound of the contract
    let bound = 2f64.powi(-(ctx.precision() as i32) + 8);
    system.consistent_with(ctx, &alpha, bound)?;
    Ok(alpha)
}

/// Search bounds for [`detect_relations`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DetectBounds {
    pub max_norm: u64,
    pub max_prime: u64,
    pub max_q: u64,
    pub max_a: u64,
}

impl Default for DetectBounds {
    fn default() -> Self {
        DetectBounds {
            max_norm: 5,
            max_prime: 20,
            max_q: 8,
            max_a: 4,
        }
    }
}

/// Exhaustively scan |m|∞ ≤ max_norm for relations m·α = (a/q)log(p)/(2π)
/// within `tol`, then greedily assemble a full-row-rank system with
/// distinct primes, preferring smaller ‖m‖∞ (tie: lexicographic order).
///
/// Deterministic by construction; returns the r = 0 system when nothing
/// is found.
pub fn detect_relations(
    ctx: &XCtx,
    alpha: &AlphaVector,
    bounds: DetectBounds,
    tol: f64,
) -> Result<RelationSystem> {
    let n = alpha.n();
    let tol_x = ctx.from_f64(tol);

    // all candidate targets (a/q)·log(p)/(2π), deduplicated tags
    let mut targets: Vec<(BigFloat, (u64, u64, u64))> = Vec::new();
    for p in 2..=bounds.max_prime {
        if !is_prime(p) {
            continue;
        }
        let lp = ctx.log_over_2pi(p);
        for q in 1..=bounds.max_q {
            for a in 1..=bounds.max_a {
                if gcd_u64(a, q) != 1 {
                    continue;
                }
                let t = ctx.mul(&ctx.div(&ctx.from_u64(a), &ctx.from_u64(q)), &lp);
                targets.push((t, (a, q, p)));
            }
        }
    }

    // scan normalized m (gcd 1, sign fixed by m·α > 0); BTreeMap keys give
    // the deterministic (‖m‖∞, lexicographic) selection order
    let lo = -(bounds.max_norm as i64);
    let hi = bounds.max_norm as i64;
    let mut accepted: BTreeMap<(u64, Vec<i64>), (u64, u64, u64)> = BTreeMap::new();
    let mut m = vec![lo; n];
    loop {
        let norm = m.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        if norm > 0 && row_gcd(&m) == 1 {
            let raw_dot = alpha.dot(ctx, &m);
            let (mv, dot) = if XCtx::to_f64(&raw_dot) > 0.0 {
                (m.clone(), raw_dot)
            } else {
                (m.iter().map(|x| -x).collect(), raw_dot.neg())
            };
            let mut hit: Option<(u64, u64, u64)> = None;
            for (t, tag) in &targets {
                if XCtx::cmp(&ctx.sub(&dot, t).abs(), &tol_x) != std::cmp::Ordering::Greater {
                    if let Some(first) = hit {
                        return Err(Error::AmbiguousDetection {
                            m: mv,
                            first,
                            second: *tag,
                        });
                    }
                    hit = Some(*tag);
                }
            }
            if let Some(tag) = hit {
                if let Some(prev) = accepted.get(&(norm, mv.clone())) {
                    if *prev != tag {
                        return Err(Error::AmbiguousDetection {
                            m: mv,
                            first: *prev,
                            second: tag,
                        });
                    }
                } else {
                    accepted.insert((norm, mv), tag);
                }
            }
        }
        // odometer increment over the box [lo, hi]^n
        let mut advanced = false;
        for i in (0..n).rev() {
            if m[i] < hi {
                m[i] += 1;
                for x in m.iter_mut().skip(i + 1) {
                    *x = lo;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }

    // greedy maximal-rank selection with distinct primes
    let mut chosen: Vec<RelationRow> = Vec::new();
    let mut chosen_rat: Vec<Vec<BigRational>> = Vec::new();
    for ((_, mv), (a, q, p)) in accepted {
        if chosen.iter().any(|r| r.p == p) {
            continue;
        }
        let cand: Vec<BigRational> = mv
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        let mut trial = chosen_rat.clone();
        trial.push(cand.clone());
        if rational_rank(&trial) == trial.len() {
            chosen.push(RelationRow { b: mv, a, q, p });
            chosen_rat.push(cand);
            if chosen.len() == n {
                break;
            }
        }
    }
    let system = RelationSystem { n, rows: chosen };
    system.validate()?;
    Ok(system)
}

/// The two worked examples used throughout the test-suite.
pub mod examples {
    use super::{RelationRow, RelationSystem};

    /// Example 1: α₁+α₂ = log2/(2π), α₁−α₂ = (1/2)·log3/(2π).
    pub fn example1() -> RelationSystem {
        RelationSystem {
            n: 2,
            rows: vec![
                RelationRow {
                    b: vec![1, 1],
                    a: 1,
                    q: 1,
                    p: 2,
                },
                RelationRow {
                    b: vec![1, -1],
                    a: 1,
                    q: 2,
                    p: 3,
                },
            ],
        }
    }

    /// Example 2: 2α₁+α₂ = log5/(2π), 2α₁+3α₂ = log7/(2π).
    pub fn example2() -> RelationSystem {
        RelationSystem {
            n: 2,
            rows: vec![
                RelationRow {
                    b: vec![2, 1],
                    a: 1,
                    q: 1,
                    p: 5,
                },
                RelationRow {
                    b: vec![2, 3],
                    a: 1,
                    q: 1,
                    p: 7,
                },
            ],
        }
    }
}
