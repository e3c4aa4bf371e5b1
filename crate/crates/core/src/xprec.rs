//! Extended-precision scalar arithmetic.
//!
//! Thin context wrapper around [`astro_float::BigFloat`] fixing the
//! working precision and rounding mode once, plus conversions to `f64`
//! and to exact rationals (used by the continued-fraction machinery).
//!
//! Default precision is 160 bits: detection tolerances go down to 1e-30
//! (~100 bits), leaving ~60 bits of headroom over double precision.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default mantissa precision in bits.
pub const DEFAULT_PRECISION: usize = 160;

const RM: RoundingMode = RoundingMode::ToEven;

/// Extended-precision context: precision plus a cache of computed
/// constants (π, ln 2, …).  Cheap to create, but reuse where possible —
/// the constants cache warms up.
pub struct XCtx {
    prec: usize,
    consts: RefCell<Consts>,
}

impl XCtx {
    /// Create a context with the given mantissa precision in bits
    /// (clamped below at 64).
    pub fn new(bits: usize) -> Self {
        XCtx {
            prec: bits.max(64),
            consts: RefCell::new(Consts::new().expect("constants cache")),
        }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    // ----- constructors -----

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.prec)
    }

    pub fn from_u64(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.prec)
    }

    pub fn from_i64(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.prec)
    }

    pub fn from_bigint(&self, v: &BigInt) -> BigFloat {
        let (sign, digits) = v.to_u64_digits();
        let mut acc = self.from_u64(0);
        let shift = BigFloat::from_u64(1, self.prec).mul(
            &two_pow(64, self.prec),
            self.prec,
            RM,
        );
        for d in digits.iter().rev() {
            acc = acc.mul(&shift, self.prec, RM);
            acc = acc.add(&BigFloat::from_u64(*d, self.prec), self.prec, RM);
        }
        if sign == IntSign::Minus {
            acc = acc.neg();
        }
        acc
    }

    pub fn from_rational(&self, r: &BigRational) -> BigFloat {
        self.div(&self.from_bigint(r.numer()), &self.from_bigint(r.denom()))
    }

    /// Parse a decimal string (integer, fixed-point, or scientific).
    pub fn parse_dec(&self, s: &str) -> Result<BigFloat> {
        let t = s.trim();
        if t.is_empty()
            || !t
                .chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'))
        {
            return Err(Error::BadDecimal { input: s.into() });
        }
        let v = BigFloat::parse(t, Radix::Dec, self.prec, RM, &mut self.consts.borrow_mut());
        if v.is_nan() {
            return Err(Error::BadDecimal { input: s.into() });
        }
        Ok(v)
    }

    // ----- arithmetic -----

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, RM)
    }

    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        a.ln(self.prec, RM, &mut self.consts.borrow_mut())
    }

    pub fn exp(&self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, RM, &mut self.consts.borrow_mut())
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, RM)
    }

    pub fn pi(&self) -> BigFloat {
        self.consts.borrow_mut().pi(self.prec, RM)
    }

    pub fn two_pi(&self) -> BigFloat {
        self.mul(&self.pi(), &self.from_u64(2))
    }

    /// log(p) / (2π) — the basic frequency unit of the relation systems.
    pub fn log_over_2pi(&self, p: u64) -> BigFloat {
        self.div(&self.ln(&self.from_u64(p)), &self.two_pi())
    }

    /// Integer power by repeated squaring.
    pub fn pow_u(&self, base: &BigFloat, mut k: u64) -> BigFloat {
        let mut result = self.from_u64(1);
        let mut b = base.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(&result, &b);
            }
            b = self.mul(&b, &b);
            k >>= 1;
        }
        result
    }

    // ----- comparisons / conversions -----

    /// Total order (both operands assumed non-NaN).
    pub fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
        a.partial_cmp(b).expect("non-NaN extended-precision values")
    }

    /// Convert to the nearest f64 (best effort: uses the top 128 mantissa
    /// bits; values with binary exponent outside f64 range flush to 0/±∞).
    pub fn to_f64(x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        if x.is_inf_pos() {
            return f64::INFINITY;
        }
        if x.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((m, n, s, e, _)) = x.as_raw_parts() else {
            return f64::NAN;
        };
        let len = m.len();
        // value = mantissa_integer * 2^(e - n); accumulate the top two words
        let shift = e as i64 - n as i64;
        let mut v = (m[len - 1] as f64) * exp2i(shift + 64 * (len as i64 - 1));
        if len > 1 {
            v += (m[len - 2] as f64) * exp2i(shift + 64 * (len as i64 - 2));
        }
        if s.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Exact rational value of a finite BigFloat.
    pub fn to_rational(x: &BigFloat) -> Option<BigRational> {
        if x.is_zero() {
            return Some(BigRational::zero());
        }
        let (m, n, s, e, _) = x.as_raw_parts()?;
        let mut bytes = Vec::with_capacity(m.len() * 8);
        for w in m {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        let mant = BigInt::from(BigUint::from_bytes_le(&bytes));
        let mant = if s.is_negative() { -mant } else { mant };
        let shift = e as i64 - n as i64;
        let r = if shift >= 0 {
            BigRational::from_integer(mant << shift as usize)
        } else {
            BigRational::new(mant, BigInt::one() << (-shift) as usize)
        };
        Some(r)
    }

    /// Floor as an exact integer.
    pub fn floor_bigint(x: &BigFloat) -> Option<BigInt> {
        Some(Self::to_rational(x)?.floor().to_integer())
    }
}

/// 2^k as f64 without overflow panics for |k| beyond f64 range.
fn exp2i(k: i64) -> f64 {
    if k > 1100 {
        f64::INFINITY
    } else if k < -1100 {
        0.0
    } else {
        // split so intermediate stays in range for subnormal results
        let half = k / 2;
        2f64.powi(half as i32) * 2f64.powi((k - half) as i32)
    }
}

/// 2^k as a BigFloat.
fn two_pow(k: u64, prec: usize) -> BigFloat {
    let mut r = BigFloat::from_u64(1, prec);
    for _ in 0..k {
        r = r.mul(&BigFloat::from_u64(2, prec), prec, RM);
    }
    r
}
