//! Precision and representation contracts shared by the analytic modules.
//!
//! All series in this crate are summed in MPFR floats at a configurable
//! binary precision (default 192 bits): corrections like
//! `exp(-2 pi sqrt((24 N + t) / (t (t + 1))))` fall far below hardware-float
//! resolution for moderate `N` but must stay observable in the estimator
//! output. Quantities that overflow even extended floats (the counting
//! estimates themselves) live in [`LogValue`], a sign plus the natural log
//! of the magnitude.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Special;
use rug::ops::NegAssign;
use rug::{Assign, Float, Integer};

/// Extended-precision real scalar. The binary precision travels with the
/// value; every value in a computation is created through one [`Precision`].
pub type ExtReal = Float;

/// Extra bits allowed to series tails relative to the running sum.
pub const GUARD_BITS: u32 = 16;

/// Default working precision in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 192;

/// Minimum supported working precision in bits.
pub const MIN_PRECISION_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericsError {
    PrecisionTooLow { requested: u32 },
}

impl fmt::Display for NumericsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericsError::PrecisionTooLow { requested } => write!(
                f,
                "precision_bits = {requested} below minimum {MIN_PRECISION_BITS}"
            ),
        }
    }
}

impl std::error::Error for NumericsError {}

/// Working-precision context: the single knob for all analytic modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            bits: DEFAULT_PRECISION_BITS,
        }
    }
}

impl Precision {
    pub fn new(bits: u32) -> Result<Self, NumericsError> {
        if bits < MIN_PRECISION_BITS {
            return Err(NumericsError::PrecisionTooLow { requested: bits });
        }
        Ok(Precision { bits })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// A real with this context's precision.
    pub fn real<T>(self, v: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits, v)
    }

    pub fn zero(self) -> Float {
        Float::new(self.bits)
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.bits, rug::float::Constant::Pi)
    }

    pub fn two_pi(self) -> Float {
        self.pi() * 2u32
    }

    /// `2^(-(bits - GUARD_BITS))`: the relative tail budget for series.
    pub fn tail_eps(self) -> Float {
        Float::with_val(
            self.bits,
            Float::i_exp(1, -((self.bits - GUARD_BITS) as i32)),
        )
    }

    /// Parses a decimal string at this precision.
    pub fn parse(self, s: &str) -> Result<Float, rug::float::ParseFloatError> {
        Ok(Float::with_val(self.bits, Float::parse(s)?))
    }

    /// How far sigma tables must reach so that no series in this crate runs
    /// off the end before meeting its tail bound. The slowest geometric
    /// decay rate any caller sums at is about `exp(-5 n)`.
    pub fn sigma_len(self) -> usize {
        64 + (self.bits as usize) / 2
    }
}

/// Sign (+1 / 0 / -1) and natural log of magnitude. The canonical carrier
/// for quantities like `p(N, t)` estimates that overflow plain floats.
#[derive(Debug, Clone, PartialEq)]
pub struct LogValue {
    sign: i8,
    ln_abs: Float,
}

impl LogValue {
    /// The zero value; `ln_abs` is the conventional `-inf` marker.
    pub fn zero(prec: Precision) -> Self {
        LogValue {
            sign: 0,
            ln_abs: prec.real(Special::NegInfinity),
        }
    }

    /// A nonzero value from its sign and log-magnitude.
    pub fn from_ln(sign: i8, ln_abs: Float) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        debug_assert!(!ln_abs.is_nan());
        LogValue { sign, ln_abs }
    }

    /// A positive value from its natural log.
    pub fn from_positive_ln(ln_abs: Float) -> Self {
        LogValue { sign: 1, ln_abs }
    }

    /// Exact conversion of a small real.
    pub fn from_real(prec: Precision, v: &Float) -> Self {
        match v.cmp0() {
            None | Some(Ordering::Equal) => LogValue::zero(prec),
            Some(Ordering::Greater) => LogValue::from_positive_ln(v.clone().ln()),
            Some(Ordering::Less) => LogValue::from_ln(-1, Float::with_val(v.prec(), v).abs().ln()),
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn ln_abs(&self) -> &Float {
        &self.ln_abs
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn neg(&self) -> Self {
        LogValue {
            sign: -self.sign,
            ln_abs: self.ln_abs.clone(),
        }
    }

    /// Product: signs multiply, log magnitudes add (exactly, up to one
    /// floating rounding).
    pub fn mul(&self, other: &Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            let prec = self.ln_abs.prec().max(other.ln_abs.prec());
            return LogValue {
                sign: 0,
                ln_abs: Float::with_val(prec, Special::NegInfinity),
            };
        }
        let prec = self.ln_abs.prec().max(other.ln_abs.prec());
        LogValue {
            sign: self.sign * other.sign,
            ln_abs: Float::with_val(prec, &self.ln_abs + &other.ln_abs),
        }
    }

    /// Signed addition in log space via the larger magnitude plus a
    /// `log1p`-style correction.
    pub fn add(&self, other: &Self) -> Self {
        if self.sign == 0 {
            return other.clone();
        }
        if other.sign == 0 {
            return self.clone();
        }
        let prec = self.ln_abs.prec().max(other.ln_abs.prec());
        let (hi, lo) = if self.ln_abs >= other.ln_abs {
            (self, other)
        } else {
            (other, self)
        };
        // d <= 0, so t = exp(d) is in (0, 1].
        let d = Float::with_val(prec, &lo.ln_abs - &hi.ln_abs);
        let t = d.exp();
        if hi.sign == lo.sign {
            LogValue {
                sign: hi.sign,
                ln_abs: Float::with_val(prec, &hi.ln_abs + t.ln_1p()),
            }
        } else if t == 1u32 {
            LogValue {
                sign: 0,
                ln_abs: Float::with_val(prec, Special::NegInfinity),
            }
        } else {
            let mut neg_t = t;
            neg_t.neg_assign();
            LogValue {
                sign: hi.sign,
                ln_abs: Float::with_val(prec, &hi.ln_abs + neg_t.ln_1p()),
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Total order: by sign, then by signed magnitude.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {}
            ord => return ord,
        }
        match self.sign {
            0 => Ordering::Equal,
            1 => self.ln_abs.partial_cmp(&other.ln_abs).unwrap(),
            _ => other.ln_abs.partial_cmp(&self.ln_abs).unwrap(),
        }
    }

    /// The value as an extended real; only sensible when `ln_abs` is small.
    pub fn to_real(&self, prec: Precision) -> Float {
        if self.sign == 0 {
            return prec.zero();
        }
        let mut v = Float::with_val(prec.bits(), &self.ln_abs).exp();
        if self.sign < 0 {
            v.neg_assign();
        }
        v
    }
}

/// `a + b` in log space.
pub fn log_add(a: &LogValue, b: &LogValue) -> LogValue {
    a.add(b)
}

/// Divisor-sum table: `sigma(n)` for `1 <= n <= max_n`, exact integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaTable {
    values: Vec<u64>,
}

impl SigmaTable {
    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    /// `sigma(n)`, the sum of divisors of `n`.
    pub fn get(&self, n: usize) -> u64 {
        assert!(
            n >= 1 && n < self.values.len(),
            "sigma({n}) outside table (max {})",
            self.max_n()
        );
        self.values[n]
    }
}

/// Sieve of divisor sums up to `max_n`.
pub fn build_sigma(max_n: usize) -> SigmaTable {
    assert!(max_n >= 1, "build_sigma requires max_n >= 1");
    let mut values = vec![0u64; max_n + 1];
    for d in 1..=max_n {
        let mut m = d;
        while m <= max_n {
            values[m] += d as u64;
            m += d;
        }
    }
    SigmaTable { values }
}

/// Complex pair of extended reals. Internal helper for series on the upper
/// half-plane; only the handful of operations the series need.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn from_re(prec: Precision, re: Float) -> Self {
        Complex {
            im: prec.zero(),
            re,
        }
    }

    pub fn zero(prec: Precision) -> Self {
        Complex {
            re: prec.zero(),
            im: prec.zero(),
        }
    }

    fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec().max(other.prec());
        Complex {
            re: Float::with_val(p, &self.re + &other.re),
            im: Float::with_val(p, &self.im + &other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prec().max(other.prec());
        Complex {
            re: Float::with_val(p, &self.re - &other.re),
            im: Float::with_val(p, &self.im - &other.im),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec().max(other.prec());
        let re =
            Float::with_val(p, &self.re * &other.re) - Float::with_val(p, &self.im * &other.im);
        let im =
            Float::with_val(p, &self.re * &other.im) + Float::with_val(p, &self.im * &other.re);
        Complex { re, im }
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    pub fn scale_u64(&self, k: u64) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, -&self.re),
            im: Float::with_val(p, -&self.im),
        }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, -&self.im),
            im: self.re.clone(),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        Complex {
            re: Float::with_val(p, &self.re / &n),
            im: -Float::with_val(p, &self.im / &n),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// Integer power; negative exponents go through [`Complex::recip`].
    pub fn powi(&self, k: i64) -> Self {
        let p = self.prec();
        if k < 0 {
            return self.recip().powi(-k);
        }
        let mut result = Complex {
            re: Float::with_val(p, 1),
            im: Float::new(p),
        };
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `exp(self)`.
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = self.re.clone().exp();
        let (sin, cos) = self.im.clone().sin_cos(Float::new(p));
        Complex {
            re: Float::with_val(p, &cos * &m),
            im: Float::with_val(p, &sin * &m),
        }
    }

    /// Principal logarithm: `(ln |z|, arg z)`.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let ln_abs = Float::with_val(p, self.norm_sqr().ln() / 2u32);
        Complex {
            re: ln_abs,
            im: self.arg(),
        }
    }
}

/// Converts an exact big integer to a real at the context precision.
pub fn integer_to_real(prec: Precision, n: &Integer) -> Float {
    Float::with_val(prec.bits(), n)
}

/// Natural log of a positive big integer.
pub fn ln_big(prec: Precision, n: &Integer) -> Float {
    assert!(*n > 0, "ln_big requires a positive integer");
    integer_to_real(prec, n).ln()
}
