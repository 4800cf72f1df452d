//! Closed-form estimators for `p(N)`, `p(N, t)` and the character-table
//! zero-count lower bounds.
//!
//! All estimators return [`RegimeEstimate`] brackets in log space. Only
//! explicitly-constant terms become bracket endpoints: the shared constants
//! `rho_1, nu_1 in (1, 1.00873)` of the exponential corrections and the
//! `3.5 (t+1) y / D` envelope of the saddle-point form. Unquantified
//! `O(N^{-1/2})`-type factors are excluded from brackets and recorded in
//! `notes`; validation suites widen brackets by an explicit fitted constant
//! instead.

use std::fmt;

use rug::Float;

use crate::eta_lab::{eta_reduced, EtaError, UpperHalfPoint};
use crate::mu_lab::{mu, MuError, MuTables};
use crate::numerics::{LogValue, Precision};
use crate::saddle::{
    classify_regime, shifted_size, solve_saddle, Regime, RegimeTag, SaddleError, SaddleResult,
};

/// Shared upper constant for the `rho_1` / `nu_1` correction brackets.
pub const CORRECTION_UPPER_CONST: &str = "1.00873";

/// Envelope constant of the saddle-point estimate.
pub const SADDLE_ENVELOPE_CONST: &str = "3.5";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateKind {
    TwoSided,
    UpperBoundOnly,
}

/// A log-space bracket for one `(N, t)` cell.
#[derive(Debug, Clone)]
pub struct RegimeEstimate {
    pub n: u64,
    pub t: u64,
    pub regime: Option<RegimeTag>,
    pub log_lower: LogValue,
    pub log_upper: LogValue,
    pub kind: EstimateKind,
    /// Provenance: which error factors were excluded from the bracket.
    pub notes: String,
}

impl RegimeEstimate {
    fn point(n: u64, t: u64, regime: Option<RegimeTag>, value: Float, notes: String) -> Self {
        let v = LogValue::from_positive_ln(value);
        RegimeEstimate {
            n,
            t,
            regime,
            log_lower: v.clone(),
            log_upper: v,
            kind: EstimateKind::TwoSided,
            notes,
        }
    }
}

/// Which lower-bound branch of the zero-count theorem applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZBranch {
    /// Small `t`: factorial-form `c_t` main term times `p(N) - p(N, t-1)`.
    SmallT,
    /// Intermediate `t`: exponential-form `c_t` lower bound times
    /// `p(N) - p(N, t-1)` with the upper-bound estimator for `p(N, t-1)`.
    MidT,
    /// Large `t`: the `p(N)^2` product with both exponential corrections.
    LargeT,
}

impl fmt::Display for ZBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZBranch::SmallT => write!(f, "i"),
            ZBranch::MidT => write!(f, "ii"),
            ZBranch::LargeT => write!(f, "iii"),
        }
    }
}

/// Lower bound report for the number of character-table zeros attached to
/// `t`-core rows.
#[derive(Debug, Clone)]
pub struct ZBoundReport {
    pub n: u64,
    pub t: u64,
    pub branch: ZBranch,
    /// Log of the `c_t(N)` main term (sign 0 for the large-`t` branch,
    /// which has no separate `c_t` factor).
    pub c_t_main: LogValue,
    /// Bracket on `p(N) - p(N, t-1)` (for the large-`t` branch: on the
    /// final `1 - exp(-nu_1 ...)` factor).
    pub p_diff_lower: LogValue,
    pub p_diff_upper: LogValue,
    /// The branch's product, evaluated at its conservative endpoints.
    pub z_lower: LogValue,
    pub notes: String,
}

#[derive(Debug, Clone)]
pub enum EstimateError {
    Domain(String),
    /// The requested estimator does not match the classified regime.
    RegimeMismatch {
        expected: Regime,
        actual: Regime,
    },
    /// The saddle-point hypothesis `1/y >= 1000` fails at this cell.
    Hypothesis {
        inv_y: f64,
    },
    Saddle(SaddleError),
    Mu(MuError),
    Eta(EtaError),
}

impl fmt::Display for EstimateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimateError::Domain(msg) => write!(f, "domain error: {msg}"),
            EstimateError::RegimeMismatch { expected, actual } => {
                write!(
                    f,
                    "estimator is for regime {expected}, cell is regime {actual}"
                )
            }
            EstimateError::Hypothesis { inv_y } => {
                write!(
                    f,
                    "saddle-point hypothesis 1/y >= 1000 fails: 1/y = {inv_y:.3}"
                )
            }
            EstimateError::Saddle(e) => write!(f, "{e}"),
            EstimateError::Mu(e) => write!(f, "{e}"),
            EstimateError::Eta(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EstimateError {}

impl From<SaddleError> for EstimateError {
    fn from(e: SaddleError) -> Self {
        EstimateError::Saddle(e)
    }
}

impl From<MuError> for EstimateError {
    fn from(e: MuError) -> Self {
        EstimateError::Mu(e)
    }
}

impl From<EtaError> for EstimateError {
    fn from(e: EtaError) -> Self {
        EstimateError::Eta(e)
    }
}

/// `(2 pi / sqrt 6) sqrt(v)`.
fn growth_exponent(prec: Precision, v: &Float) -> Float {
    prec.two_pi() / prec.real(6).sqrt() * v.clone().sqrt()
}

/// `log(sqrt 12 A_t(N)) + (2 pi / sqrt 6) sqrt((t/(t+1)) L)` with
/// `A_t(N) = t^{1/4} ((t+1)(24 N + t))^{-3/4}`: the fixed-`t` point
/// estimate, shared verbatim by the regime-I bracket.
pub fn hagis_log_point(prec: Precision, n: u64, t: u64) -> Float {
    let l = shifted_size(prec, n, t);
    let log_a = Float::with_val(prec.bits(), prec.real(t).ln() / 4u32)
        - Float::with_val(
            prec.bits(),
            (prec.real(t + 1) * prec.real(24 * n + t)).ln() * 3u32,
        ) / 4u32;
    let inner = Float::with_val(prec.bits(), prec.real(t) / prec.real(t + 1)) * &l;
    prec.real(12).ln() / 2u32 + log_a + growth_exponent(prec, &inner)
}

/// `exp(-2 pi sqrt((24 N + t) / (t (t+1))))`: the inner correction scale of
/// the regime-I formula.
fn regime1_correction_scale(prec: Precision, n: u64, t: u64) -> Float {
    let inner = prec.real(24 * n + t) / (prec.real(t) * prec.real(t + 1));
    (-prec.two_pi() * inner.sqrt()).exp()
}

const NOTE_BIG_O: &str = "O(N^-1/2) factor excluded from bracket";

/// Fixed-`t` point estimate of `log p(N, t)` (no correction factor).
pub fn estimate_hagis(prec: Precision, n: u64, t: u64) -> Result<RegimeEstimate, EstimateError> {
    if n < 1 || t < 4 {
        return Err(EstimateError::Domain(format!(
            "estimate_hagis requires N >= 1 and t >= 4, got N = {n}, t = {t}"
        )));
    }
    Ok(RegimeEstimate::point(
        n,
        t,
        None,
        hagis_log_point(prec, n, t),
        format!("fixed-t point estimate; {NOTE_BIG_O}"),
    ))
}

/// The regime-I formula evaluated unconditionally (no classifier check).
/// Bracket endpoints realise `rho_1 in (1, 1.00873)`.
pub fn regime1_log_bracket(prec: Precision, n: u64, t: u64) -> (Float, Float) {
    let point = hagis_log_point(prec, n, t);
    let corr = regime1_correction_scale(prec, n, t);
    let hi_const = prec.parse(CORRECTION_UPPER_CONST).unwrap();
    let lower = Float::with_val(prec.bits(), &point - hi_const * &corr);
    let upper = point - corr;
    (lower, upper)
}

/// Regime-I two-sided estimate of `log p(N, t)`.
pub fn estimate_regime1(
    prec: Precision,
    n: u64,
    t: u64,
    epsilon: &Float,
) -> Result<RegimeEstimate, EstimateError> {
    let tag = classify_regime(prec, n, t, epsilon)?;
    if tag.regime != Regime::I {
        return Err(EstimateError::RegimeMismatch {
            expected: Regime::I,
            actual: tag.regime,
        });
    }
    let (lower, upper) = regime1_log_bracket(prec, n, t);
    Ok(RegimeEstimate {
        n,
        t,
        regime: Some(tag),
        log_lower: LogValue::from_positive_ln(lower),
        log_upper: LogValue::from_positive_ln(upper),
        kind: EstimateKind::TwoSided,
        notes: format!("rho_1 endpoints (1, {CORRECTION_UPPER_CONST}); {NOTE_BIG_O}"),
    })
}

/// The regime-II upper-bound formula evaluated unconditionally.
pub fn regime2_log_upper(prec: Precision, n: u64, t: u64) -> Float {
    let l = shifted_size(prec, n, t);
    let inner = Float::with_val(prec.bits(), prec.real(2 * t + 1) / prec.real(2 * t + 2)) * &l;
    let log_num = prec.real(12).ln() / 2u32
        + Float::with_val(prec.bits(), prec.real(2 * t + 1).ln() * 3u32) / 4u32
        + growth_exponent(prec, &inner);
    let log_den = Float::with_val(prec.bits(), prec.real(t - 1).ln() / 2u32)
        + Float::with_val(
            prec.bits(),
            (prec.real(24 * n + t) * prec.real(2 * t + 2)).ln() * 3u32,
        ) / 4u32
        + regime1_correction_scale(prec, n, t);
    log_num - log_den
}

/// Regime-II upper bound on `log p(N, t)`; the lower slot carries the
/// sign-0 marker.
pub fn estimate_regime2(
    prec: Precision,
    n: u64,
    t: u64,
    epsilon: &Float,
) -> Result<RegimeEstimate, EstimateError> {
    let tag = classify_regime(prec, n, t, epsilon)?;
    if tag.regime != Regime::II {
        return Err(EstimateError::RegimeMismatch {
            expected: Regime::II,
            actual: tag.regime,
        });
    }
    Ok(RegimeEstimate {
        n,
        t,
        regime: Some(tag),
        log_lower: LogValue::zero(prec),
        log_upper: LogValue::from_positive_ln(regime2_log_upper(prec, n, t)),
        kind: EstimateKind::UpperBoundOnly,
        notes: format!("upper bound only; {NOTE_BIG_O}"),
    })
}

/// Unrestricted-partition point estimate
/// `log p(N) = -log(4 N sqrt 3) + (2 pi / sqrt 6) sqrt N`.
pub fn estimate_hardy_ramanujan(prec: Precision, n: u64) -> Result<RegimeEstimate, EstimateError> {
    if n < 1 {
        return Err(EstimateError::Domain(
            "estimate_hardy_ramanujan requires N >= 1".into(),
        ));
    }
    Ok(RegimeEstimate::point(
        n,
        0,
        None,
        hardy_ramanujan_log_point(prec, n),
        format!("point estimate; {NOTE_BIG_O}"),
    ))
}

pub fn hardy_ramanujan_log_point(prec: Precision, n: u64) -> Float {
    let v = prec.real(n);
    growth_exponent(prec, &v)
        - Float::with_val(prec.bits(), prec.real(4 * n) * prec.real(3).sqrt()).ln()
}

/// The regime-III formula evaluated unconditionally.
pub fn regime3_log_bracket(prec: Precision, n: u64, t: u64) -> (Float, Float) {
    let pn = hardy_ramanujan_log_point(prec, n);
    let corr = (-prec.pi() * prec.real(t + 1) / (prec.real(6 * n)).sqrt()).exp();
    let hi_const = prec.parse(CORRECTION_UPPER_CONST).unwrap();
    let lower = Float::with_val(prec.bits(), &pn - hi_const * &corr);
    let upper = pn - corr;
    (lower, upper)
}

/// Regime-III two-sided estimate: `log p(N)` minus the `nu_1` correction.
pub fn estimate_regime3(prec: Precision, n: u64, t: u64) -> Result<RegimeEstimate, EstimateError> {
    if n < 1 || t < 4 {
        return Err(EstimateError::Domain(format!(
            "estimate_regime3 requires N >= 1 and t >= 4, got N = {n}, t = {t}"
        )));
    }
    let tp1 = t as u128 + 1;
    if tp1 * tp1 <= 24 * n as u128 {
        let actual = if prec.real(t + 1)
            <= crate::saddle::regime1_boundary(prec, n, t, &prec.parse("0.01").unwrap())
        {
            Regime::I
        } else {
            Regime::II
        };
        return Err(EstimateError::RegimeMismatch {
            expected: Regime::III,
            actual,
        });
    }
    let (lower, upper) = regime3_log_bracket(prec, n, t);
    Ok(RegimeEstimate {
        n,
        t,
        regime: Some(RegimeTag {
            regime: Regime::III,
            epsilon: prec.zero(),
        }),
        log_lower: LogValue::from_positive_ln(lower),
        log_upper: LogValue::from_positive_ln(upper),
        kind: EstimateKind::TwoSided,
        notes: format!(
            "nu_1 endpoints (1, {CORRECTION_UPPER_CONST}); p(N) from point estimate; {NOTE_BIG_O}"
        ),
    })
}

/// The saddle-point estimate of `log p(N, t)` at the solved root:
/// `sqrt(t+1) y^{3/2} exp(2 pi y L) eta((t+1) iy) / (sqrt(D) eta(iy))`,
/// `D = (t+1) mu_2(iy) - mu_2((t+1) iy)`, with the explicit envelope
/// `1 +- 3.5 (t+1) y / D`.
///
/// The theorem behind the envelope assumes `1/y >= 1000`; this entry point
/// enforces it. [`estimate_saddle_point_relaxed`] evaluates the same
/// expression anyway and records the violated hypothesis in `notes`.
pub fn estimate_saddle_point(
    prec: Precision,
    tables: &MuTables,
    n: u64,
    t: u64,
) -> Result<(SaddleResult, RegimeEstimate), EstimateError> {
    saddle_point_inner(prec, tables, n, t, true)
}

/// Same estimate without the `1/y >= 1000` gate.
pub fn estimate_saddle_point_relaxed(
    prec: Precision,
    tables: &MuTables,
    n: u64,
    t: u64,
) -> Result<(SaddleResult, RegimeEstimate), EstimateError> {
    saddle_point_inner(prec, tables, n, t, false)
}

fn saddle_point_inner(
    prec: Precision,
    tables: &MuTables,
    n: u64,
    t: u64,
    enforce_hypothesis: bool,
) -> Result<(SaddleResult, RegimeEstimate), EstimateError> {
    let result = solve_saddle(prec, tables, n, t, None)?;
    let estimate = saddle_point_estimate_from_root(prec, tables, &result, enforce_hypothesis)?;
    Ok((result, estimate))
}

/// Evaluates the enveloped estimate at an already-solved root.
pub fn saddle_point_estimate_from_root(
    prec: Precision,
    tables: &MuTables,
    result: &SaddleResult,
    enforce_hypothesis: bool,
) -> Result<RegimeEstimate, EstimateError> {
    let n = result.n;
    let t = result.t;
    let inv_y = result.y.clone().recip();
    let hypothesis_ok = inv_y >= 1000u32;
    if enforce_hypothesis && !hypothesis_ok {
        return Err(EstimateError::Hypothesis {
            inv_y: inv_y.to_f64(),
        });
    }

    let zi = UpperHalfPoint::imaginary(prec, result.y.clone()).expect("root is positive");
    let zt = zi.scale_int(t + 1);
    let m2_1 = mu(prec, tables, 2, &zi)?;
    let m2_t = mu(prec, tables, 2, &zt)?;
    let m2_scaled = Float::with_val(prec.bits(), &m2_1.value.re * (t + 1));
    let d = Float::with_val(prec.bits(), &m2_scaled - &m2_t.value.re);
    let eta_t = eta_reduced(prec, &zt)?;
    let eta_1 = eta_reduced(prec, &zi)?;

    let center = prec.real(t + 1).ln() / 2u32
        + Float::with_val(prec.bits(), result.y.clone().ln() * 3u32) / 2u32
        + Float::with_val(prec.bits(), prec.two_pi() * &result.y) * &result.l
        + Float::with_val(prec.bits(), &eta_t.log_abs - &eta_1.log_abs)
        - d.clone().ln() / 2u32;

    let envelope = prec.parse(SADDLE_ENVELOPE_CONST).unwrap() * prec.real(t + 1) * &result.y / &d;
    let upper = LogValue::from_positive_ln(Float::with_val(
        prec.bits(),
        &center + envelope.clone().ln_1p(),
    ));
    let lower = if envelope < 1u32 {
        let mut neg = envelope.clone();
        rug::ops::NegAssign::neg_assign(&mut neg);
        LogValue::from_positive_ln(Float::with_val(prec.bits(), &center + neg.ln_1p()))
    } else {
        LogValue::zero(prec)
    };
    let mut notes = format!(
        "envelope {SADDLE_ENVELOPE_CONST}(t+1)y/D = {:.6e}; O(y) factor excluded",
        envelope.to_f64()
    );
    if !hypothesis_ok {
        notes.push_str("; hypothesis 1/y >= 1000 NOT met");
    }
    Ok(RegimeEstimate {
        n,
        t,
        regime: None,
        log_lower: lower,
        log_upper: upper,
        kind: EstimateKind::TwoSided,
        notes,
    })
}

/// `f(N) = sqrt(24 N) / sqrt(6/pi - 1)`: the crossover into the large-`t`
/// branch of the zero-count bound.
pub fn z_branch_crossover(prec: Precision, n: u64) -> Float {
    let six_over_pi = prec.real(6) / prec.pi();
    (prec.real(24 * n)).sqrt() / (six_over_pi - 1u32).sqrt()
}

/// Lower bound on the zero count `Z_t(N)`.
///
/// Branch selection follows the theorem's `t`-ranges with the supplied
/// `epsilon`; `f_override` replaces `f(N)` when given. Cells falling in the
/// gap between the small-`t` range (which carries the `(1+eps)` factor) and
/// the mid-`t` range are evaluated with the mid-`t` formulas and flagged.
pub fn z_lower_bound(
    prec: Precision,
    n: u64,
    t: u64,
    epsilon: &Float,
    f_override: Option<&Float>,
) -> Result<ZBoundReport, EstimateError> {
    if n < 100 {
        return Err(EstimateError::Domain(format!(
            "zero-count bound requires N >= 100, got {n}"
        )));
    }
    if t < 6 || t > n {
        return Err(EstimateError::Domain(format!(
            "zero-count bound requires 6 <= t <= N, got t = {t}, N = {n}"
        )));
    }
    if !(*epsilon > 0u32 && *epsilon < 1u32) {
        return Err(EstimateError::Domain(
            "zero-count bound requires 0 < epsilon < 1".into(),
        ));
    }
    let f = match f_override {
        Some(v) => v.clone(),
        None => z_branch_crossover(prec, n),
    };
    let log_n = prec.real(n).ln();
    let small_t_cap = prec.two_pi() * (prec.real(2 * n)).sqrt()
        / Float::with_val(prec.bits(), (prec.real(1) + epsilon) * &log_n).sqrt();
    let mid_t_floor = prec.two_pi() * (prec.real(2 * n)).sqrt() / log_n.clone().sqrt();

    let tf = prec.real(t);
    if tf >= f {
        return z_branch_large(prec, n, t);
    }
    if tf <= small_t_cap {
        return z_branch_small(prec, n, t);
    }
    let in_gap = tf <= mid_t_floor;
    z_branch_mid(prec, n, t, in_gap)
}

fn z_branch_small(prec: Precision, n: u64, t: u64) -> Result<ZBoundReport, EstimateError> {
    // c_t main term: (4 pi e)^{(t-1)/2} (t-1) / (sqrt(4 pi) (t^2 - t)^{t/2})
    //                * (N + (t^2-1)/24)^{(t-3)/2}
    let four_pi = Float::with_val(prec.bits(), prec.pi() * 4u32);
    let log_4pi_e = Float::with_val(prec.bits(), four_pi.clone().ln() + 1u32);
    let shifted = prec.real(n) + prec.real(t * t - 1) / 24u32;
    let c_t = Float::with_val(prec.bits(), &log_4pi_e * (t - 1)) / 2u32 + prec.real(t - 1).ln()
        - four_pi.ln() / 2u32
        - Float::with_val(prec.bits(), prec.real(t * t - t).ln() * t) / 2u32
        + Float::with_val(prec.bits(), shifted.ln() * (t - 3)) / 2u32;

    // p(N, t-1) from the two-sided fixed-t bracket at t - 1.
    let (p_lo, p_hi) = regime1_log_bracket(prec, n, t - 1);
    let pn = LogValue::from_positive_ln(hardy_ramanujan_log_point(prec, n));
    let diff_lower = pn.sub(&LogValue::from_positive_ln(p_hi));
    let diff_upper = pn.sub(&LogValue::from_positive_ln(p_lo));

    let c_t_val = LogValue::from_positive_ln(c_t);
    let z_lower = c_t_val.mul(&diff_lower);
    Ok(ZBoundReport {
        n,
        t,
        branch: ZBranch::SmallT,
        c_t_main: c_t_val,
        p_diff_lower: diff_lower,
        p_diff_upper: diff_upper,
        z_lower,
        notes: format!("c_t main term only (O(t^-eps) dropped); {NOTE_BIG_O}"),
    })
}

fn z_branch_mid(
    prec: Precision,
    n: u64,
    t: u64,
    in_gap: bool,
) -> Result<ZBoundReport, EstimateError> {
    // c_t lower bound: 2 sqrt(pi) exp(t/2 - 1.00873 t e^{-2 pi})
    //                  ((pi/6)(24 N + t^2 - 1))^{(t-3)/2} / t^{t-1}
    let hi_const = prec.parse(CORRECTION_UPPER_CONST).unwrap();
    let e_m2pi = (-prec.two_pi()).exp();
    let inner =
        Float::with_val(prec.bits(), prec.pi() / 6u32) * (prec.real(24 * n) + prec.real(t * t - 1));
    let c_t = Float::with_val(prec.bits(), prec.pi().sqrt() * 2u32).ln() + prec.real(t) / 2u32
        - Float::with_val(prec.bits(), hi_const * e_m2pi) * prec.real(t)
        + Float::with_val(prec.bits(), inner.ln() * (t - 3)) / 2u32
        - Float::with_val(prec.bits(), prec.real(t).ln() * (t - 1));

    // p(N, t-1) upper bound: the regime-II form at t - 1.
    let p_hi = regime2_log_upper(prec, n, t - 1);
    let pn = LogValue::from_positive_ln(hardy_ramanujan_log_point(prec, n));
    let diff_lower = pn.sub(&LogValue::from_positive_ln(p_hi));
    let diff_upper = pn.clone();

    let c_t_val = LogValue::from_positive_ln(c_t);
    let z_lower = c_t_val.mul(&diff_lower);
    let mut notes = format!("c_t lower-bound main term (O(t^-1) dropped); {NOTE_BIG_O}");
    if in_gap {
        notes.push_str("; t in the gap below the mid-range floor, mid-branch formulas applied");
    }
    if z_lower.sign() <= 0 {
        notes.push_str("; bound is vacuous here (p(N,t-1) upper estimate exceeds p(N))");
    }
    Ok(ZBoundReport {
        n,
        t,
        branch: ZBranch::MidT,
        c_t_main: c_t_val,
        p_diff_lower: diff_lower,
        p_diff_upper: diff_upper,
        z_lower,
        notes,
    })
}

fn z_branch_large(prec: Precision, n: u64, t: u64) -> Result<ZBoundReport, EstimateError> {
    // p(N)^2 exp(-1.00873 t e^{-t(t-1)/(2(N + (t^2-1)/24))})
    //        (1 - exp(-nu_1 e^{-pi t / sqrt(6 N)}))
    let hi_const = prec.parse(CORRECTION_UPPER_CONST).unwrap();
    let pn = hardy_ramanujan_log_point(prec, n);
    let shifted = prec.real(n) + prec.real(t * t - 1) / 24u32;
    let decay = (-prec.real(t * (t - 1)) / (Float::with_val(prec.bits(), shifted * 2u32))).exp();
    let first_corr = Float::with_val(prec.bits(), hi_const.clone() * prec.real(t)) * decay;

    let nu_scale = (-prec.pi() * prec.real(t) / (prec.real(6 * n)).sqrt()).exp();
    // 1 - exp(-nu e^{-...}) is increasing in nu: nu = 1 gives the
    // conservative (widest-bracket) lower endpoint.
    let last_factor = |nu: &Float| -> LogValue {
        let mut inner = Float::with_val(prec.bits(), nu * &nu_scale);
        rug::ops::NegAssign::neg_assign(&mut inner);
        let mut v = inner.exp_m1(); // exp(-nu e^{..}) - 1, in (-1, 0)
        rug::ops::NegAssign::neg_assign(&mut v); // 1 - exp(-nu e^{..})
        LogValue::from_positive_ln(v.ln())
    };
    let diff_lower = last_factor(&prec.real(1));
    let diff_upper = last_factor(&hi_const);

    let base = LogValue::from_positive_ln(Float::with_val(prec.bits(), pn * 2u32) - first_corr);
    let z_lower = base.mul(&diff_lower);
    Ok(ZBoundReport {
        n,
        t,
        branch: ZBranch::LargeT,
        c_t_main: LogValue::zero(prec),
        p_diff_lower: diff_lower,
        p_diff_upper: diff_upper,
        z_lower,
        notes: format!("p(N)^2 product with independent extreme constants; {NOTE_BIG_O}"),
    })
}
