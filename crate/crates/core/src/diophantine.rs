//! Continued fractions of ξ = α₁/α₂ and the Diophantine machinery built
//! on them: the convergent inequality (3.3), membership in U_α, the
//! E_J/F_J frequency classification, and the condition-(1.5) scan.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::relations::AlphaVector;
use crate::xprec::XCtx;

/// Hard cap on requested partial quotients (precision guard).
pub const MAX_CF_TERMS: usize = 60;

/// A computed continued fraction: partial quotients, exact integer
/// convergents p_n/q_n, and whether the expansion was cut short by
/// precision exhaustion rather than by request or exact termination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    xi: BigFloat,
    quotients: Vec<BigInt>,
    convergents: Vec<(BigInt, BigInt)>,
    truncated: bool,
}

impl ContinuedFraction {
    pub fn xi(&self) -> &BigFloat {
        &self.xi
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    /// Convergents (p_n, q_n), index-aligned with the quotients.
    pub fn convergents(&self) -> &[(BigInt, BigInt)] {
        &self.convergents
    }

    /// True when precision ran out before `max_terms` quotients could be
    /// certified (the expansion continues but is not computable here).
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// JSON-friendly view with exact integers as decimal strings.
    pub fn report(&self) -> CfReport {
        CfReport {
            xi: XCtx::to_f64(&self.xi),
            quotients: self.quotients.iter().map(|a| a.to_string()).collect(),
            convergents: self
                .convergents
                .iter()
                .map(|(p, q)| [p.to_string(), q.to_string()])
                .collect(),
            truncated: self.truncated,
        }
    }
}

/// Serializable continued-fraction summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfReport {
    pub xi: f64,
    pub quotients: Vec<String>,
    pub convergents: Vec<[String; 2]>,
    pub truncated: bool,
}

fn check_max_terms(max_terms: usize) -> Result<()> {
    if max_terms == 0 || max_terms > MAX_CF_TERMS {
        return Err(Error::Domain(format!(
            "max_terms must be in 1..={MAX_CF_TERMS}, got {max_terms}"
        )));
    }
    Ok(())
}

struct ConvergentBuilder {
    quotients: Vec<BigInt>,
    // (p_{n−1}, q_{n−1}) and (p_n, q_n) seeds of the recurrence
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
    convergents: Vec<(BigInt, BigInt)>,
}

impl ConvergentBuilder {
    fn new() -> Self {
        ConvergentBuilder {
            quotients: Vec::new(),
            prev: (BigInt::zero(), BigInt::one()),
            cur: (BigInt::one(), BigInt::zero()),
            convergents: Vec::new(),
        }
    }

    fn push(&mut self, a: BigInt) {
        let p = &a * &self.cur.0 + &self.prev.0;
        let q = &a * &self.cur.1 + &self.prev.1;
        self.prev = std::mem::replace(&mut self.cur, (p.clone(), q.clone()));
        self.convergents.push((p, q));
        self.quotients.push(a);
    }
}

/// Continued fraction of an exactly-known positive rational.
///
/// Terminates naturally (truncated = false) or at `max_terms` with
/// quotients remaining (truncated = true).
pub fn continued_fraction_exact(
    ctx: &XCtx,
    xi: &BigRational,
    max_terms: usize,
) -> Result<ContinuedFraction> {
    check_max_terms(max_terms)?;
    if !xi.is_positive() {
        return Err(Error::Domain(format!("continued fraction requires xi > 0, got {xi}")));
    }
    let mut builder = ConvergentBuilder::new();
    let mut v = xi.clone();
    let mut truncated = false;
    loop {
        let a = v.floor().to_integer();
        builder.push(a.clone());
        let frac = &v - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        if builder.quotients.len() == max_terms {
            truncated = true;
            break;
        }
        v = frac.recip();
    }
    Ok(ContinuedFraction {
        xi: ctx.from_rational(xi),
        quotients: builder.quotients,
        convergents: builder.convergents,
        truncated,
    })
}

/// Continued fraction of an extended-precision real known only to its
/// working precision P.
///
/// The value is bracketed by the exact rationals ξ·(1 ± 2^{16−P}) and the
/// Euclidean algorithm runs on both brackets in lockstep; a quotient is
/// emitted only while both brackets agree on it, so every emitted
/// quotient (and convergent) is certified.  Disagreement before
/// `max_terms` yields truncated = true.
pub fn continued_fraction(
    ctx: &XCtx,
    xi: &BigFloat,
    max_terms: usize,
) -> Result<ContinuedFraction> {
    check_max_terms(max_terms)?;
    let exact = XCtx::to_rational(xi)
        .ok_or_else(|| Error::Domain("continued fraction of a non-finite value".into()))?;
    if !exact.is_positive() {
        return Err(Error::Domain("continued fraction requires xi > 0".into()));
    }
    let prec = ctx.precision();
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (prec - 16));
    let one = BigRational::one();
    let mut lo = &exact * (&one - &eps);
    let mut hi = &exact * (&one + &eps);
    let mut builder = ConvergentBuilder::new();
    let mut truncated = true;
    while builder.quotients.len() < max_terms {
        let a_lo = lo.floor().to_integer();
        let a_hi = hi.floor().to_integer();
        if a_lo != a_hi {
            break;
        }
        builder.push(a_lo.clone());
        let a = BigRational::from_integer(a_lo);
        let f_lo = &lo - &a;
        let f_hi = &hi - &a;
        if f_lo.is_zero() || f_hi.is_zero() {
            // a bracket landed exactly on an integer: the tail is not
            // certifiable at this precision
            break;
        }
        // reciprocation swaps the bracket order
        lo = f_hi.recip();
        hi = f_lo.recip();
    }
    if builder.quotients.len() == max_terms {
        truncated = false;
    }
    Ok(ContinuedFraction {
        xi: xi.clone(),
        quotients: builder.quotients,
        convergents: builder.convergents,
        truncated,
    })
}

/// One row of the convergent-inequality report: does
/// α₂/(q_j+q_{j+1}) < |q_j α₁ − p_j α₂| < α₂/q_{j+1} hold at index j?
///
/// The final index (no q_{j+1}) is reported with vacuous bounds; rows
/// whose middle term is exactly zero or below the precision floor carry
/// `flagged = true`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergentCheck {
    pub j: usize,
    pub middle: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub lower_ok: Option<bool>,
    pub upper_ok: Option<bool>,
    pub flagged: bool,
}

/// Evaluate inequality (3.3) at every computed index of the CF.
pub fn convergent_inequality_check(
    ctx: &XCtx,
    alpha1: &BigFloat,
    alpha2: &BigFloat,
    cf: &ContinuedFraction,
) -> Vec<ConvergentCheck> {
    let conv = cf.convergents();
    let mut out = Vec::with_capacity(conv.len());
    let floor = 2f64.powi(32 - ctx.precision() as i32);
    for (j, (p, q)) in conv.iter().enumerate() {
        let qa = ctx.mul(&ctx.from_bigint(q), alpha1);
        let pa = ctx.mul(&ctx.from_bigint(p), alpha2);
        let middle_x = ctx.sub(&qa, &pa).abs();
        let middle = XCtx::to_f64(&middle_x);
        // precision floor for the cancellation |qα₁ − pα₂|
        let scale = XCtx::to_f64(&qa).abs() + XCtx::to_f64(&pa).abs();
        let mut flagged = middle_x.is_zero() || middle < scale * floor;
        let (lower, upper, lower_ok, upper_ok) = match conv.get(j + 1) {
            Some((_, q_next)) => {
                let lower_x = ctx.div(alpha2, &ctx.from_bigint(&(q + q_next)));
                let upper_x = ctx.div(alpha2, &ctx.from_bigint(q_next));
                let lower_ok = XCtx::cmp(&lower_x, &middle_x) == std::cmp::Ordering::Less;
                let upper_ok = XCtx::cmp(&middle_x, &upper_x) == std::cmp::Ordering::Less;
                (
                    Some(XCtx::to_f64(&lower_x)),
                    Some(XCtx::to_f64(&upper_x)),
                    Some(lower_ok),
                    Some(upper_ok),
                )
            }
            None => {
                flagged = true;
                (None, None, None, None)
            }
        };
        out.push(ConvergentCheck {
            j,
            middle,
            lower,
            upper,
            lower_ok,
            upper_ok,
            flagged,
        });
    }
    out
}

/// Membership report for T ∈ U_α = ⋃_{n≥1} [q_n^{1+ε}, e^{q_n^{B−ε}}].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UAlphaReport {
    pub t: f64,
    pub epsilon: f64,
    pub b: f64,
    pub member: bool,
    /// Smallest convergent index n ≥ 1 whose interval contains T.
    pub witness: Option<usize>,
    pub witness_lower: Option<f64>,
    pub witness_upper: Option<f64>,
}

/// Decide T ∈ U_α from the computed convergents (n ≥ 1 only).
///
/// Exponents q_n^{B−ε} beyond 700 overflow e^x in double precision and
/// are treated as an unbounded upper endpoint.
pub fn u_alpha_membership(cf: &ContinuedFraction, t: f64, epsilon: f64, b: f64) -> UAlphaReport {
    let mut report = UAlphaReport {
        t,
        epsilon,
        b,
        member: false,
        witness: None,
        witness_lower: None,
        witness_upper: None,
    };
    if !(t > 0.0) {
        return report;
    }
    for (n, (_, q)) in cf.convergents().iter().enumerate().skip(1) {
        let q = q.to_f64().unwrap_or(f64::INFINITY);
        let lower = q.powf(1.0 + epsilon);
        let expo = q.powf(b - epsilon);
        let upper = if expo > 700.0 { f64::INFINITY } else { expo.exp() };
        if lower <= t && t <= upper {
            report.member = true;
            report.witness = Some(n);
            report.witness_lower = Some(lower);
            report.witness_upper = Some(upper);
            break;
        }
    }
    report
}

/// The E_J/F_J partition of the positive-side frequency pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfPartition {
    pub j: u64,
    pub c: f64,
    /// Pairs with mα₁ + lα₂ strictly above the threshold.
    pub e: Vec<(i64, i64)>,
    /// Pairs at or below the threshold (the small-form side).
    pub f: Vec<(i64, i64)>,
}

/// Classify every (m, l) with 0 < max(|m|,|l|) ≤ J and mα₁ + lα₂ > 0 by
/// the §3 threshold min(C·e^{−max(|m|,|l|)}, α₂/(2m) [m > 0 only], 1/4π);
/// F_J takes the ≤ side.
pub fn classify_ef(ctx: &XCtx, alpha: &AlphaVector, j: u64, c: f64) -> Result<EfPartition> {
    if alpha.n() != 2 {
        return Err(Error::DimensionError { n: alpha.n() });
    }
    if j == 0 || j > 50 {
        return Err(Error::Domain(format!("classify_ef requires 1 <= J <= 50, got {j}")));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("classify_ef requires C > 0, got {c}")));
    }
    let a2 = alpha.as_f64()[1];
    let cap = 1.0 / (4.0 * std::f64::consts::PI);
    let jr = j as i64;
    let mut e = Vec::new();
    let mut f = Vec::new();
    for m in -jr..=jr {
        for l in -jr..=jr {
            let norm = m.unsigned_abs().max(l.unsigned_abs());
            if norm == 0 {
                continue;
            }
            let s_x = alpha.dot(ctx, &[m, l]);
            let s = XCtx::to_f64(&s_x);
            if !(s > 0.0) {
                continue;
            }
            let mut threshold = (c * (-(norm as f64)).exp()).min(cap);
            if m > 0 {
                threshold = threshold.min(a2 / (2.0 * m as f64));
            }
            if s > threshold {
                e.push((m, l));
            } else {
                f.push((m, l));
            }
        }
    }
    Ok(EfPartition { j, c, e, f })
}

/// Result of the condition-(1.5) scan min |m·α|·e^{‖m‖∞} over
/// 0 < ‖m‖∞ ≤ J, with the Baker-form diagnostic minimum alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition15Report {
    pub c: f64,
    pub j: u64,
    pub min_value: f64,
    pub argmin: Vec<i64>,
    /// min_value > C; false in particular when some m·α = 0 exactly.
    pub holds: bool,
    /// m with m·α = 0 exactly, when rational dependence was hit.
    pub zero_witness: Option<Vec<i64>>,
    pub baker_mu: f64,
    pub baker_min: f64,
    pub baker_argmin: Vec<i64>,
}

/// Scan condition (1.5): |m·α| > C/e^{‖m‖∞} for all 0 < ‖m‖∞ ≤ J.
///
/// Dot products run in extended precision; raw coordinate slices are
/// accepted (degenerate vectors like (1, 1) included) so that exact
/// rational dependence is reportable rather than rejected upstream.
pub fn check_condition_15(
    ctx: &XCtx,
    alpha: &[BigFloat],
    c: f64,
    j: u64,
    mu: f64,
) -> Result<Condition15Report> {
    let n = alpha.len();
    if n == 0 {
        return Err(Error::BadAlpha);
    }
    if j == 0 || j > 25 {
        return Err(Error::Domain(format!(
            "check_condition_15 requires 1 <= J <= 25, got {j}"
        )));
    }
    let jr = j as i64;
    let mut m = vec![-jr; n];
    let mut min_value = f64::INFINITY;
    let mut argmin = vec![0i64; n];
    let mut baker_min = f64::INFINITY;
    let mut baker_argmin = vec![0i64; n];
    let mut zero_witness: Option<Vec<i64>> = None;
    loop {
        let norm = m.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        if norm > 0 {
            let mut dot = ctx.from_u64(0);
            for (mi, v) in m.iter().zip(alpha) {
                if *mi != 0 {
                    dot = ctx.add(&dot, &ctx.mul(&ctx.from_i64(*mi), v));
                }
            }
            let abs = XCtx::to_f64(&dot).abs();
            if dot.is_zero() && zero_witness.is_none() {
                zero_witness = Some(m.clone());
            }
            let weighted = abs * (norm as f64).exp();
            if weighted < min_value {
                min_value = weighted;
                argmin = m.clone();
            }
            let baker = abs * (norm as f64 + 1.0).powf(mu);
            if baker < baker_min {
                baker_min = baker;
                baker_argmin = m.clone();
            }
        }
        let mut advanced = false;
        for i in (0..n).rev() {
            if m[i] < jr {
                m[i] += 1;
                for x in m.iter_mut().skip(i + 1) {
                    *x = -jr;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    Ok(Condition15Report {
        c,
        j,
        min_value,
        argmin,
        holds: zero_witness.is_none() && min_value > c,
        zero_witness,
        baker_mu: mu,
        baker_min,
        baker_argmin,
    })
}

/// Parameters of the Diophantine scans (Eq. (1.5) constant C, Theorem 2
/// exponents ε and B, scan radius J, Baker exponent μ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiophantineConfig {
    pub c: f64,
    pub epsilon: f64,
    pub b: f64,
    pub j: u64,
    pub mu: f64,
}

impl DiophantineConfig {
    pub fn validate(&self) -> Result<&Self> {
        if !(self.c > 0.0) {
            return Err(Error::Config(format!("C must be positive, got {}", self.c)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.b > 4.0) {
            return Err(Error::Config(format!("B must exceed 4, got {}", self.b)));
        }
        if self.epsilon >= self.b - self.epsilon {
            return Err(Error::Config(format!(
                "empty exponent range: epsilon {} vs B - epsilon {}",
                self.epsilon,
                self.b - self.epsilon
            )));
        }
        if self.j == 0 {
            return Err(Error::Config("J must be at least 1".into()));
        }
        if !(self.mu > 0.0) {
            return Err(Error::Config(format!("mu must be positive, got {}", self.mu)));
        }
        Ok(self)
    }
}

impl Default for DiophantineConfig {
    fn default() -> Self {
        DiophantineConfig {
            c: 0.01,
            epsilon: 0.1,
            b: 5.0,
            j: 15,
            mu: 3.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::examples::example1;
    use crate::relations::solve_alpha;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> XCtx {
        XCtx::new(160)
    }

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cf_of_three_halves() {
        let ctx = ctx();
        let cf = continued_fraction_exact(&ctx, &rational(3, 2), 10).unwrap();
        assert_eq!(cf.quotients(), &[BigInt::from(1), BigInt::from(2)]);
        assert_eq!(
            cf.convergents(),
            &[
                (BigInt::from(1), BigInt::from(1)),
                (BigInt::from(3), BigInt::from(2))
            ]
        );
        assert!(!cf.truncated());
    }

    #[test]
    fn cf_of_pi_approximant() {
        let ctx = ctx();
        let cf = continued_fraction_exact(&ctx, &rational(355, 113), 10).unwrap();
        let want: Vec<BigInt> = [3, 7, 16].iter().map(|&a| BigInt::from(a)).collect();
        assert_eq!(cf.quotients(), &want[..]);
        assert!(!cf.truncated());
        // exact reconstruction at the last convergent
        let (p, q) = cf.convergents().last().unwrap();
        assert_eq!(rational(355, 113), BigRational::new(p.clone(), q.clone()));
    }

    #[test]
    fn cf_golden_ratio_all_ones() {
        let ctx = ctx();
        // ξ = (1+√5)/2
        let xi = ctx.div(
            &ctx.add(&ctx.from_u64(1), &ctx.sqrt(&ctx.from_u64(5))),
            &ctx.from_u64(2),
        );
        let cf = continued_fraction(&ctx, &xi, 30).unwrap();
        assert_eq!(cf.len(), 30);
        assert!(!cf.truncated());
        assert!(cf.quotients().iter().all(|a| *a == BigInt::one()));
        // convergents are ratios of consecutive Fibonacci numbers
        let mut fib = (BigInt::one(), BigInt::from(2));
        for (i, (p, q)) in cf.convergents().iter().enumerate() {
            if i == 0 {
                assert_eq!((p, q), (&BigInt::one(), &BigInt::one()));
                continue;
            }
            assert_eq!(p, &fib.1, "index {i}");
            assert_eq!(q, &fib.0, "index {i}");
            fib = (fib.1.clone(), fib.0 + fib.1);
        }
    }

    #[test]
    fn cf_identities_hold_exactly() {
        let ctx = XCtx::new(256);
        let alpha = solve_alpha(&ctx, &example1()).unwrap();
        let xi = ctx.div(&alpha.values()[0], &alpha.values()[1]);
        let golden = ctx.div(
            &ctx.add(&ctx.from_u64(1), &ctx.sqrt(&ctx.from_u64(5))),
            &ctx.from_u64(2),
        );
        for (value, terms) in [(xi, 25usize), (golden, 30)] {
            let cf = continued_fraction(&ctx, &value, terms).unwrap();
            assert_eq!(cf.len(), terms);
            let a = cf.quotients();
            let conv = cf.convergents();
            // recurrence p_{n+1} = a_{n+1} p_n + p_{n−1} (and same for q)
            for n in 2..conv.len() {
                assert_eq!(conv[n].0, &a[n] * &conv[n - 1].0 + &conv[n - 2].0);
                assert_eq!(conv[n].1, &a[n] * &conv[n - 1].1 + &conv[n - 2].1);
            }
            // determinant identity with alternating sign
            for n in 0..conv.len() - 1 {
                let det = &conv[n + 1].0 * &conv[n].1 - &conv[n].0 * &conv[n + 1].1;
                let want = if n % 2 == 0 { 1 } else { -1 };
                assert_eq!(det, BigInt::from(want), "index {n}");
            }
            // q_n strictly increasing from n = 1
            for n in 1..conv.len() - 1 {
                assert!(conv[n + 1].1 > conv[n].1, "q not increasing at {n}");
            }
            // reconstruction: |ξ − p_N/q_N| < 1/q_N²
            let exact = XCtx::to_rational(&value).unwrap();
            let (p, q) = conv.last().unwrap();
            let diff = (&exact - BigRational::new(p.clone(), q.clone())).abs();
            let bound = BigRational::new(BigInt::one(), q * q);
            assert!(diff < bound);
        }
    }

    #[test]
    fn cf_example1_frozen_quotients() {
        // frozen from a 50-digit reference computation of α₁/α₂
        let ctx = XCtx::new(256);
        let alpha = solve_alpha(&ctx, &example1()).unwrap();
        let xi = ctx.div(&alpha.values()[0], &alpha.values()[1]);
        assert!((XCtx::to_f64(&xi) - 8.637_683_358_612_836).abs() < 1e-12);
        let cf = continued_fraction(&ctx, &xi, 25).unwrap();
        let want: Vec<BigInt> = [
            8, 1, 1, 1, 3, 5, 1, 94, 1, 2, 225, 4, 8, 1, 3, 4, 2, 2, 1, 2, 1, 30, 4, 1, 1,
        ]
        .iter()
        .map(|&a: &i64| BigInt::from(a))
        .collect();
        assert_eq!(cf.quotients(), &want[..]);
        assert!(!cf.truncated());
    }

    #[test]
    fn cf_precision_exhaustion_flags() {
        let ctx = XCtx::new(64);
        let xi = ctx.div(
            &ctx.add(&ctx.from_u64(1), &ctx.sqrt(&ctx.from_u64(5))),
            &ctx.from_u64(2),
        );
        let cf = continued_fraction(&ctx, &xi, 60).unwrap();
        assert!(cf.truncated());
        assert!(cf.len() < 60);
        assert!(cf.quotients().iter().all(|a| *a == BigInt::one()));
    }

    #[test]
    fn cf_rejects_bad_inputs() {
        let ctx = ctx();
        assert!(continued_fraction_exact(&ctx, &rational(3, 2), 61).is_err());
        assert!(continued_fraction_exact(&ctx, &rational(3, 2), 0).is_err());
        assert!(continued_fraction_exact(&ctx, &rational(-3, 2), 10).is_err());
        assert!(continued_fraction(&ctx, &ctx.from_f64(0.0), 10).is_err());
    }

    #[test]
    fn inequality_holds_for_example1() {
        let ctx = XCtx::new(256);
        let alpha = solve_alpha(&ctx, &example1()).unwrap();
        let xi = ctx.div(&alpha.values()[0], &alpha.values()[1]);
        let cf = continued_fraction(&ctx, &xi, 22).unwrap();
        let checks =
            convergent_inequality_check(&ctx, &alpha.values()[0], &alpha.values()[1], &cf);
        assert_eq!(checks.len(), 22);
        for chk in &checks[..checks.len() - 1] {
            assert_eq!(chk.lower_ok, Some(true), "j = {}", chk.j);
            assert_eq!(chk.upper_ok, Some(true), "j = {}", chk.j);
            assert!(!chk.flagged, "j = {}", chk.j);
        }
        assert!(checks.last().unwrap().flagged);
    }

    #[test]
    fn inequality_holds_for_golden_pair() {
        let ctx = ctx();
        let phi = ctx.div(
            &ctx.add(&ctx.from_u64(1), &ctx.sqrt(&ctx.from_u64(5))),
            &ctx.from_u64(2),
        );
        let one = ctx.from_u64(1);
        let cf = continued_fraction(&ctx, &phi, 31).unwrap();
        let checks = convergent_inequality_check(&ctx, &phi, &one, &cf);
        for chk in &checks[..30] {
            assert_eq!(chk.lower_ok, Some(true), "j = {}", chk.j);
            assert_eq!(chk.upper_ok, Some(true), "j = {}", chk.j);
        }
    }

    #[test]
    fn inequality_rational_ratio_flags_exact_zero() {
        let ctx = ctx();
        // α = (3/2, 1): ξ = 3/2 = [1; 2], exact CF
        let a1 = ctx.div(&ctx.from_u64(3), &ctx.from_u64(2));
        let a2 = ctx.from_u64(1);
        let cf = continued_fraction_exact(&ctx, &rational(3, 2), 10).unwrap();
        let checks = convergent_inequality_check(&ctx, &a1, &a2, &cf);
        assert_eq!(checks.len(), 2);
        // j = 0: middle = ½ equals the upper bound α₂/q₁ = ½ — the strict
        // inequality fails by equality at the penultimate index of a
        // terminating expansion
        assert_eq!(checks[0].lower_ok, Some(true));
        assert_eq!(checks[0].upper_ok, Some(false));
        // j = 1 (last index): q₁α₁ − p₁α₂ = 2·(3/2) − 3 = 0 exactly
        assert_eq!(checks[1].middle, 0.0);
        assert!(checks[1].flagged);
        assert_eq!(checks[1].lower_ok, None);
    }

    #[test]
    fn u_alpha_examples() {
        let ctx = ctx();
        // CF of 21/10 = [2; 10] puts q₁ = 10 among the convergents
        let cf = continued_fraction_exact(&ctx, &rational(21, 10), 10).unwrap();
        let rep = u_alpha_membership(&cf, 100.0, 0.5, 6.0);
        assert!(rep.member);
        assert_eq!(rep.witness, Some(1));
        assert_eq!(rep.witness_lower, Some(10f64.powf(1.5)));
        assert_eq!(rep.witness_upper, Some(f64::INFINITY));
        // T below every q_n^{1+ε}
        let rep = u_alpha_membership(&cf, 5.0, 0.5, 6.0);
        assert!(!rep.member);
        assert_eq!(rep.witness, None);
    }

    #[test]
    fn u_alpha_example1_regression() {
        let ctx = XCtx::new(256);
        let alpha = solve_alpha(&ctx, &example1()).unwrap();
        let xi = ctx.div(&alpha.values()[0], &alpha.values()[1]);
        let cf = continued_fraction(&ctx, &xi, 25).unwrap();
        let rep = u_alpha_membership(&cf, 42_653_549.761, 0.1, 5.0);
        // regression values: membership holds, first witness is n = 2
        // (q₂ = 2: 2^{1.1} ≤ T ≤ e^{2^{4.9}} ≈ 8.8·10¹²)
        assert!(rep.member);
        assert_eq!(rep.witness, Some(2));
    }

    #[test]
    fn classify_ef_golden_ratio_f_empty() {
        let ctx = ctx();
        let phi = 1.618_033_988_749_894_8f64;
        let alpha = AlphaVector::new(vec![ctx.from_f64(phi / 10.0), ctx.from_f64(0.1)]).unwrap();
        let part = classify_ef(&ctx, &alpha, 30, 0.01).unwrap();
        assert!(part.f.is_empty(), "F_J = {:?}", part.f);
        assert!(!part.e.is_empty());
    }

    #[test]
    fn classify_ef_partition_properties() {
        let ctx = ctx();
        let alpha = solve_alpha(&ctx, &example1()).unwrap();
        let part = classify_ef(&ctx, &alpha, 12, 0.05).unwrap();
        // E ∪ F covers exactly the positive-side pairs, disjointly
        let mut seen = std::collections::BTreeSet::new();
        for &(m, l) in part.e.iter().chain(&part.f) {
            assert!(seen.insert((m, l)), "duplicate ({m},{l})");
            let s = XCtx::to_f64(&alpha.dot(&ctx, &[m, l]));
            assert!(s > 0.0, "({m},{l}) not on the positive side");
        }
        let mut count = 0;
        for m in -12i64..=12 {
            for l in -12i64..=12 {
                if (m, l) == (0, 0) {
                    continue;
                }
                if XCtx::to_f64(&alpha.dot(&ctx, &[m, l])) > 0.0 {
                    count += 1;
                    assert!(seen.contains(&(m, l)), "({m},{l}) unclassified");
                }
            }
        }
        assert_eq!(count, seen.len());
    }

    #[test]
    fn classify_ef_monotone_in_c() {
        let ctx = ctx();
        // adversarial ratio very close to 1: (1, −1) lands in F_J
        let alpha =
            AlphaVector::new(vec![ctx.from_f64(0.3 + 3e-10), ctx.from_f64(0.3)]).unwrap();
        let small = classify_ef(&ctx, &alpha, 20, 1e-4).unwrap();
        let large = classify_ef(&ctx, &alpha, 20, 0.05).unwrap();
        for pair in &small.f {
            assert!(large.f.contains(pair), "{pair:?} lost when C grew");
        }
        assert!(small.f.len() <= large.f.len());
        assert!(!large.f.is_empty());
    }

    /// (m, l) equals an integer multiple t·(q_n, −p_n) of some computed
    /// convergent pair.
    fn on_convergent_ray(m: i64, l: i64, cf: &ContinuedFraction) -> bool {
        cf.convergents().iter().any(|(p, q)| {
            match (p.to_i64(), q.to_i64()) {
                (Some(p), Some(q)) if q != 0 && m % q == 0 => {
                    let t = m / q;
                    t != 0 && t * p == -l
                }
                _ => false,
            }
        })
    }

    #[test]
    fn f_members_lie_on_convergent_rays() {
        let ctx = ctx();
        // ξ = 1 + 10⁻⁹: (q₀, −p₀) = (1, −1) has a tiny positive form value
        let alpha =
            AlphaVector::new(vec![ctx.from_f64(0.3 * (1.0 + 1e-9)), ctx.from_f64(0.3)]).unwrap();
        let xi = ctx.div(&alpha.values()[0], &alpha.values()[1]);
        let cf = continued_fraction(&ctx, &xi, 12).unwrap();
        let part = classify_ef(&ctx, &alpha, 20, 0.01).unwrap();
        assert!(part.f.contains(&(1, -1)), "F_J = {:?}", part.f);
        for &(m, l) in &part.f {
            assert!(on_convergent_ray(m, l, &cf), "({m},{l}) off-ray");
        }
    }

    #[test]
    fn f_subset_convergent_pairs_randomized() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
        for trial in 0..100 {
            let ratio: f64 = 1.0 + 19.0 * rng.gen::<f64>();
            let a2: f64 = 0.01 + 0.4 * rng.gen::<f64>();
            let alpha =
                AlphaVector::new(vec![ctx.from_f64(ratio * a2), ctx.from_f64(a2)]).unwrap();
            let xi = ctx.div(&alpha.values()[0], &alpha.values()[1]);
            let cf = continued_fraction(&ctx, &xi, 40).unwrap();
            let part = classify_ef(&ctx, &alpha, 20, 0.01).unwrap();
            for &(m, l) in &part.f {
                assert!(
                    on_convergent_ray(m, l, &cf),
                    "trial {trial}: ({m},{l}) off-ray for ratio {ratio}"
                );
            }
        }
    }

    #[test]
    fn condition_15_degenerate_alpha() {
        let ctx = ctx();
        let alpha = vec![ctx.from_u64(1), ctx.from_u64(1)];
        let rep = check_condition_15(&ctx, &alpha, 1e-6, 5, 3.0).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.min_value, 0.0);
        let w = rep.zero_witness.unwrap();
        // some ±(1, −1) multiple is hit; the witness must annihilate α
        assert_eq!(w[0] + w[1], 0);
        assert_ne!(w[0], 0);
    }

    #[test]
    fn condition_15_example2_holds() {
        let ctx = ctx();
        let alpha = solve_alpha(&ctx, &crate::relations::examples::example2()).unwrap();
        let rep = check_condition_15(&ctx, alpha.values(), 1e-6, 15, 3.0).unwrap();
        assert!(rep.holds, "min {} at {:?}", rep.min_value, rep.argmin);
        assert!(rep.min_value > 1e-6);
        assert!(rep.zero_witness.is_none());
        assert!(rep.baker_min > 0.0);
        assert!(rep.baker_argmin.iter().any(|&x| x != 0));
        assert!(rep.j == 15);
    }

    #[test]
    fn condition_15_rejects_bad_inputs() {
        let ctx = ctx();
        let alpha = vec![ctx.from_f64(0.3), ctx.from_f64(0.4)];
        assert!(check_condition_15(&ctx, &alpha, 1e-6, 0, 3.0).is_err());
        assert!(check_condition_15(&ctx, &alpha, 1e-6, 26, 3.0).is_err());
        assert!(check_condition_15(&ctx, &[], 1e-6, 5, 3.0).is_err());
    }

    #[test]
    fn diophantine_config_validation() {
        assert!(DiophantineConfig::default().validate().is_ok());
        let mut cfg = DiophantineConfig::default();
        cfg.b = 3.0;
        assert!(cfg.validate().is_err());
        let mut cfg = DiophantineConfig::default();
        cfg.epsilon = 3.0;
        assert!(cfg.validate().is_err());
        let mut cfg = DiophantineConfig::default();
        cfg.c = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn cf_report_roundtrip() {
        let ctx = ctx();
        let cf = continued_fraction_exact(&ctx, &rational(355, 113), 10).unwrap();
        let rep = cf.report();
        assert_eq!(rep.quotients, vec!["3", "7", "16"]);
        assert_eq!(rep.convergents.last().unwrap(), &["355".to_string(), "113".to_string()]);
        let json = serde_json::to_string(&rep).unwrap();
        let back: CfReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }

}
