//! The Dedekind eta function on the upper half-plane.
//!
//! `eta(z) = exp(pi i z / 12) prod_{n>=1} (1 - exp(2 pi i n z))` converges
//! fast only for large `Im z`, so general evaluation reduces `z` to the
//! fundamental domain with the generators `T: z -> z + 1` and
//! `S: z -> -1/z`, accumulating the exact phase factors `exp(pi i/12)` and
//! the `1/sqrt(-iz)` factors of the functional equation
//! `eta(z) = eta(-1/z)/sqrt(-iz)` along the way.
//!
//! The module also provides the two-sided axis brackets on `log eta(iy)`
//! (`-pi y/12 - nu exp(-2 pi y)` for large `y`, the reflected form for small
//! `y`, with `1 < nu < 1.00873`), the quotient `g_t(z) =
//! eta((t+1)z)/eta(z)`, and a log-space quadrature of `|g_t(z)/g_t(iy)|`
//! over the off-center strip `y/3 <= |x| <= 1/2`.

use std::fmt;

use rug::ops::NegAssign;
use rug::{Float, Integer};

use crate::numerics::{Complex, LogValue, Precision};

/// `1.00873`, the shared upper constant of the axis bracket lemmas.
pub const AXIS_BRACKET_UPPER_CONST: &str = "1.00873";

/// A point `z = x + iy` with `y > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperHalfPoint {
    x: Float,
    y: Float,
}

/// `log |eta|` and the phase of `eta`, reduced to `(-pi, pi]`.
/// `eta` never vanishes on the upper half-plane, so `log_abs` is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaValue {
    pub log_abs: Float,
    pub phase: Float,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EtaError {
    /// Constructor got `y <= 0`.
    NotUpperHalf,
    /// `eta_qseries` called below its convergence threshold `y >= 1/2`.
    SlowConvergence { y: f64 },
    /// Fundamental-domain reduction did not terminate; numerically
    /// degenerate input.
    IterationLimit,
    /// Panel doubling did not reach the requested self-consistency.
    QuadratureDivergence { panels: u64 },
}

impl fmt::Display for EtaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaError::NotUpperHalf => write!(f, "point is not in the upper half-plane"),
            EtaError::SlowConvergence { y } => {
                write!(f, "direct q-series needs Im z >= 0.5, got {y}")
            }
            EtaError::IterationLimit => write!(f, "fundamental-domain reduction hit step limit"),
            EtaError::QuadratureDivergence { panels } => {
                write!(f, "quadrature not self-consistent at {panels} panels")
            }
        }
    }
}

impl std::error::Error for EtaError {}

impl UpperHalfPoint {
    pub fn new(x: Float, y: Float) -> Result<Self, EtaError> {
        if !(y > 0u32) {
            return Err(EtaError::NotUpperHalf);
        }
        Ok(UpperHalfPoint { x, y })
    }

    pub fn from_f64(prec: Precision, x: f64, y: f64) -> Result<Self, EtaError> {
        Self::new(prec.real(x), prec.real(y))
    }

    /// The purely imaginary point `iy`.
    pub fn imaginary(prec: Precision, y: Float) -> Result<Self, EtaError> {
        Self::new(prec.zero(), y)
    }

    pub fn x(&self) -> &Float {
        &self.x
    }

    pub fn y(&self) -> &Float {
        &self.y
    }

    /// `k z` for a positive integer `k`; stays in the upper half-plane.
    pub fn scale_int(&self, k: u64) -> Self {
        assert!(k >= 1);
        let p = self.x.prec();
        UpperHalfPoint {
            x: Float::with_val(p, &self.x * k),
            y: Float::with_val(p, &self.y * k),
        }
    }

    pub fn to_complex(&self) -> Complex {
        Complex::new(self.x.clone(), self.y.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.x.prec();
        Float::with_val(p, self.x.clone().square() + self.y.clone().square())
    }
}

/// One reduction step, recorded with enough state to unwind the functional
/// equation afterwards.
#[derive(Debug, Clone)]
pub enum ReductionMove {
    /// `z -> z - n` (so the original point was `z + n`).
    Shift { n: Integer },
    /// `z -> -1/z`, applied at the recorded point.
    Invert { x: Float, y: Float },
}

/// `gamma = (a b; c d)` with `z* = gamma z` for the whole reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
    pub d: Integer,
}

impl GammaMatrix {
    fn identity() -> Self {
        GammaMatrix {
            a: Integer::from(1),
            b: Integer::from(0),
            c: Integer::from(0),
            d: Integer::from(1),
        }
    }

    /// Left-multiplies by `(p q; r s)`.
    fn apply_left(&mut self, p: &Integer, q: &Integer, r: &Integer, s: &Integer) {
        let a = Integer::from(p * &self.a) + Integer::from(q * &self.c);
        let b = Integer::from(p * &self.b) + Integer::from(q * &self.d);
        let c = Integer::from(r * &self.a) + Integer::from(s * &self.c);
        let d = Integer::from(r * &self.b) + Integer::from(s * &self.d);
        self.a = a;
        self.b = b;
        self.c = c;
        self.d = d;
    }

    /// `Im gamma z = y / |c z + d|^2`.
    pub fn im_of_action(&self, prec: Precision, z: &UpperHalfPoint) -> Float {
        let c = prec.real(&self.c);
        let d = prec.real(&self.d);
        let re = Float::with_val(prec.bits(), &c * z.x()) + &d;
        let im = Float::with_val(prec.bits(), &c * z.y());
        let denom = re.square() + im.square();
        Float::with_val(prec.bits(), z.y() / &denom)
    }

    /// `gamma z` as a point.
    pub fn apply(&self, prec: Precision, z: &UpperHalfPoint) -> Result<UpperHalfPoint, EtaError> {
        let zc = z.to_complex();
        let num = zc
            .scale(&prec.real(&self.a))
            .add(&Complex::from_re(prec, prec.real(&self.b)));
        let den = zc
            .scale(&prec.real(&self.c))
            .add(&Complex::from_re(prec, prec.real(&self.d)));
        let w = num.div(&den);
        UpperHalfPoint::new(w.re, w.im)
    }
}

/// The move sequence and composite matrix taking the input to the
/// fundamental domain.
#[derive(Debug, Clone)]
pub struct ReductionRecord {
    pub moves: Vec<ReductionMove>,
    pub gamma: GammaMatrix,
}

impl ReductionRecord {
    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

/// Wraps a phase to `(-pi, pi]`.
fn wrap_phase(prec: Precision, phase: Float) -> Float {
    let two_pi = prec.two_pi();
    let turns = Float::with_val(prec.bits(), &phase / &two_pi).round();
    let mut ph = phase - turns * &two_pi;
    let pi = prec.pi();
    if ph > pi {
        ph -= &two_pi;
    }
    let mut neg_pi = pi;
    neg_pi.neg_assign();
    if ph <= neg_pi {
        ph += &two_pi;
    }
    ph
}

/// `log eta(z)` by direct series summation of `log(1 - q^n)`.
///
/// Requires `Im z >= 1/2` so that `|q| <= exp(-pi)` and the tail clears the
/// precision contract in a few dozen terms.
pub fn eta_qseries(prec: Precision, z: &UpperHalfPoint) -> Result<EtaValue, EtaError> {
    let half = prec.parse("0.5").unwrap();
    if *z.y() < half {
        return Err(EtaError::SlowConvergence { y: z.y().to_f64() });
    }
    let two_pi = prec.two_pi();
    let pi = prec.pi();

    // q = exp(2 pi i z)
    let q = Complex::new(
        Float::with_val(prec.bits(), -&two_pi) * z.y(),
        Float::with_val(prec.bits(), &two_pi * z.x()),
    )
    .exp();

    // log_abs starts from Re(pi i z / 12) = -pi y / 12, phase from pi x / 12.
    let mut log_abs = Float::with_val(prec.bits(), &pi * z.y()) / -12i32;
    let mut phase = Float::with_val(prec.bits(), &pi * z.x()) / 12u32;

    // Tail scale: |log(1 - q^n)| ~ |q|^n and the sum is at least pi/24 in
    // magnitude, so stopping at |q^n| below eps * pi/24 keeps the tail
    // within the contract.
    let eps = prec.tail_eps() * Float::with_val(prec.bits(), &pi / 24u32);

    let mut qn = Complex::new(prec.real(1), prec.zero());
    loop {
        qn = qn.mul(&q);
        let one_minus = Complex::new(
            Float::with_val(prec.bits(), 1u32 - &qn.re),
            Float::with_val(prec.bits(), -&qn.im),
        );
        log_abs += Float::with_val(prec.bits(), one_minus.norm_sqr().ln() / 2u32);
        phase += one_minus.arg();
        if qn.abs() < eps {
            break;
        }
    }
    Ok(EtaValue {
        log_abs,
        phase: wrap_phase(prec, phase),
    })
}

/// Moves `z` to the fundamental domain `|Re z*| <= 1/2`, `|z*| >= 1`
/// (hence `Im z* >= sqrt(3)/2`) by `T`/`S` steps, recording each move.
pub fn reduce_to_fundamental_domain(
    prec: Precision,
    z: &UpperHalfPoint,
) -> Result<(UpperHalfPoint, ReductionRecord), EtaError> {
    let mut x = z.x().clone();
    let mut y = z.y().clone();
    let mut moves = Vec::new();
    let mut gamma = GammaMatrix::identity();
    let limit = 64 + 4 * prec.bits() as usize;
    let one = Integer::from(1);
    let zero = Integer::from(0);
    let minus_one = Integer::from(-1);

    for _ in 0..limit {
        // Shift x into [-1/2, 1/2].
        let n = Float::with_val(prec.bits(), &x)
            .round()
            .to_integer()
            .ok_or(EtaError::IterationLimit)?;
        if n != 0 {
            x -= prec.real(&n);
            let mut neg_n = n.clone();
            neg_n.neg_assign();
            gamma.apply_left(&one, &neg_n, &zero, &one);
            moves.push(ReductionMove::Shift { n });
        }
        let norm = Float::with_val(prec.bits(), x.clone().square() + y.clone().square());
        if norm >= 1u32 {
            let reduced = UpperHalfPoint::new(x, y)?;
            return Ok((reduced, ReductionRecord { moves, gamma }));
        }
        // Invert: z -> -1/z = (-x + iy) / |z|^2.
        moves.push(ReductionMove::Invert {
            x: x.clone(),
            y: y.clone(),
        });
        gamma.apply_left(&zero, &minus_one, &one, &zero);
        let new_x = Float::with_val(prec.bits(), -&x) / &norm;
        let new_y = Float::with_val(prec.bits(), &y / &norm);
        x = new_x;
        y = new_y;
    }
    Err(EtaError::IterationLimit)
}

/// `log eta(z)` anywhere on the upper half-plane: reduce, evaluate the
/// q-series, then unwind the recorded moves.
///
/// `T`-move phases are exact multiples of `pi/12` (total shift taken mod
/// 24); each `S`-move contributes `-log sqrt|z|` and `-arg(-iz)/2` at its
/// recorded point. The total phase is wrapped once at the end.
pub fn eta_reduced(prec: Precision, z: &UpperHalfPoint) -> Result<EtaValue, EtaError> {
    let (zstar, record) = reduce_to_fundamental_domain(prec, z)?;
    let base = eta_qseries(prec, &zstar)?;
    let mut log_abs = base.log_abs;
    let mut phase = base.phase;

    let mut total_shift = Integer::from(0);
    for mv in &record.moves {
        match mv {
            ReductionMove::Shift { n } => total_shift += n,
            ReductionMove::Invert { x, y } => {
                // eta(z) = eta(-1/z) / sqrt(-iz) at the recorded z.
                let norm_sqr =
                    Float::with_val(prec.bits(), x.clone().square() + y.clone().square());
                log_abs -= norm_sqr.ln() / 4u32;
                let mut neg_x = x.clone();
                neg_x.neg_assign();
                let arg = neg_x.atan2(y);
                phase -= arg / 2u32;
            }
        }
    }
    let shift_mod = total_shift.mod_u(24);
    phase += Float::with_val(prec.bits(), prec.pi() * shift_mod) / 12u32;
    Ok(EtaValue {
        log_abs,
        phase: wrap_phase(prec, phase),
    })
}

/// `log g_t(z)` where `g_t(z) = eta((t+1) z) / eta(z)`.
pub fn g_t(prec: Precision, z: &UpperHalfPoint, t: u64) -> Result<EtaValue, EtaError> {
    let numer = eta_reduced(prec, &z.scale_int(t + 1))?;
    let denom = eta_reduced(prec, z)?;
    Ok(EtaValue {
        log_abs: numer.log_abs - denom.log_abs,
        phase: wrap_phase(prec, numer.phase - denom.phase),
    })
}

/// Bracket on `log eta(iy)` valid for `y >= sqrt(3)/2`:
/// `[-pi y/12 - 1.00873 e^{-2 pi y}, -pi y/12 - e^{-2 pi y}]`.
pub fn bracket_large(prec: Precision, y: &Float) -> (Float, Float) {
    let pi = prec.pi();
    let main = Float::with_val(prec.bits(), &pi * y) / -12i32;
    let e = (Float::with_val(prec.bits(), -2i32 * &pi) * y).exp();
    let hi_const = prec.parse(AXIS_BRACKET_UPPER_CONST).unwrap();
    let lower = Float::with_val(prec.bits(), &main - hi_const * &e);
    let upper = main - e;
    (lower, upper)
}

/// Bracket on `log eta(iy)` valid for `0 < y < 1`:
/// `[-log(y)/2 - pi/(12 y) - 1.00873 e^{-2 pi/y}, -log(y)/2 - pi/(12 y) - e^{-2 pi/y}]`.
pub fn bracket_small(prec: Precision, y: &Float) -> (Float, Float) {
    let pi = prec.pi();
    let main = Float::with_val(prec.bits(), y.clone().ln() / -2i32)
        - Float::with_val(prec.bits(), &pi / (Float::with_val(prec.bits(), 12u32 * y)));
    let e = (Float::with_val(prec.bits(), -2i32 * &pi) / y).exp();
    let hi_const = prec.parse(AXIS_BRACKET_UPPER_CONST).unwrap();
    let lower = Float::with_val(prec.bits(), &main - hi_const * &e);
    let upper = main - e;
    (lower, upper)
}

/// Two-sided bracket on `log eta(iy)`. In the overlap region
/// `sqrt(3)/2 <= y < 1` both regime brackets hold and their intersection is
/// returned.
pub fn eta_axis_bracket(prec: Precision, y: &Float) -> (Float, Float) {
    assert!(*y > 0u32, "axis bracket requires y > 0");
    let sqrt3_half = prec.real(3u32).sqrt() / 2u32;
    let one = prec.real(1u32);
    if *y >= one {
        bracket_large(prec, y)
    } else if *y < sqrt3_half {
        bracket_small(prec, y)
    } else {
        let (ll, lu) = bracket_large(prec, y);
        let (sl, su) = bracket_small(prec, y);
        (ll.max(&sl), lu.min(&su))
    }
}

/// Result of the off-center quadrature of `|g_t(z)/g_t(iy)|`.
#[derive(Debug, Clone)]
pub struct TailIntegral {
    /// `log` of the integral over `y/3 <= |x| <= 1/2`.
    pub log_integral: Float,
    /// Panels used on the final doubling level.
    pub panels: u64,
    /// `log(2 exp(-pi/(150 y)))`, the certified bound.
    pub log_bound: Float,
}

/// `log(2 exp(-pi/(150 y)))`.
pub fn gt_tail_log_bound(prec: Precision, y: &Float) -> Float {
    prec.real(2u32).ln() - prec.pi() / Float::with_val(prec.bits(), 150u32 * y)
}

/// Integrates `|g_t(z)/g_t(iy)| dx` over `y/3 <= |x| <= 1/2` by composite
/// midpoint quadrature in log space, doubling the panel count until two
/// successive estimates agree to 1%. The integrand spans thousands of
/// orders of magnitude and concentrates in a boundary layer of width `~y`
/// at the left endpoint, so panels run over `u = log x` (`x = e^u`,
/// `dx = e^u du`) and panel sums go through [`LogValue::add`].
pub fn integrate_gt_ratio_tail(
    prec: Precision,
    t: u64,
    y: &Float,
) -> Result<TailIntegral, EtaError> {
    integrate_gt_ratio_tail_from(prec, t, y, 625)
}

/// Same quadrature with an explicit starting panel count; higher starts
/// guard convergence checks against premature doubling agreement.
pub fn integrate_gt_ratio_tail_from(
    prec: Precision,
    t: u64,
    y: &Float,
    start_panels: u64,
) -> Result<TailIntegral, EtaError> {
    assert!(start_panels >= 2);
    let center = g_t(prec, &UpperHalfPoint::imaginary(prec, y.clone())?, t)?;
    let a = Float::with_val(prec.bits(), y / 3u32).ln();
    let b = prec.parse("0.5").unwrap().ln();
    let width = Float::with_val(prec.bits(), &b - &a);

    // The integrand is even in x: eta coefficients are real, so
    // |eta(-x + iy)| = |eta(x + iy)|. Integrate one side and double.
    let mut panels: u64 = start_panels;
    let mut previous: Option<Float> = None;
    loop {
        let mut acc = LogValue::zero(prec);
        let step = Float::with_val(prec.bits(), &width / panels);
        for j in 0..panels {
            let u = Float::with_val(prec.bits(), &a + Float::with_val(prec.bits(), &step * j))
                + Float::with_val(prec.bits(), &step / 2u32);
            let x = u.clone().exp();
            let z = UpperHalfPoint::new(x, y.clone())?;
            let val = g_t(prec, &z, t)?;
            // log of h(e^u) e^u
            let log_term = Float::with_val(prec.bits(), &val.log_abs - &center.log_abs) + &u;
            acc = acc.add(&LogValue::from_positive_ln(log_term));
        }
        let log_integral =
            Float::with_val(prec.bits(), acc.ln_abs() + step.ln()) + prec.real(2u32).ln();
        if let Some(prev) = &previous {
            let ratio_err = Float::with_val(prec.bits(), &log_integral - prev)
                .exp_m1()
                .abs();
            if ratio_err < 0.01 {
                return Ok(TailIntegral {
                    log_integral,
                    panels,
                    log_bound: gt_tail_log_bound(prec, y),
                });
            }
        }
        previous = Some(log_integral);
        panels *= 2;
        if panels > 160_000 {
            return Err(EtaError::QuadratureDivergence { panels });
        }
    }
}
