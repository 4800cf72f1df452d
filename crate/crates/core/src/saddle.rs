//! The saddle-point equation and the `(N, t)` regime classifier.
//!
//! For `t >= 4` the equation
//! `(mu_1((t+1) iy) - (t+1) mu_1(iy)) / ((t+1) y^2) = L`, `L = N + t/24`,
//! has a unique root `y > 0`, and the root lies in
//! `sqrt(t / (24 (t+1) L)) < y < 1 / sqrt(24 N - 1)`. The left side is
//! strictly decreasing in `y`, so a guarded bisection (with secant steps
//! accepted only inside the current bracket) is exact enough; the solver is
//! deterministic bit-for-bit for fixed inputs and precision.
//!
//! Near the bracket endpoints the true residual can sit exponentially far
//! below working precision (the lower endpoint differs from the root by
//! `~exp(-2 pi / ((t+1) y))`), so endpoint sign checks allow a rounding
//! margin instead of demanding resolvable signs.

use std::fmt;

use rug::Float;

use crate::eta_lab::UpperHalfPoint;
use crate::mu_lab::{mu, MuError, MuTables};
use crate::numerics::{Precision, GUARD_BITS};

/// Solver output: the root, its proven bracket, and the final residual.
#[derive(Debug, Clone)]
pub struct SaddleResult {
    pub n: u64,
    pub t: u64,
    /// `L = N + t/24`.
    pub l: Float,
    pub y: Float,
    pub bracket: (Float, Float),
    pub residual: Float,
    pub iterations: u32,
}

/// The three `t`-ranges with distinct asymptotic formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regime {
    I,
    II,
    III,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::I => write!(f, "I"),
            Regime::II => write!(f, "II"),
            Regime::III => write!(f, "III"),
        }
    }
}

/// Classifier output; the `epsilon` that drew the regime-I boundary rides
/// along.
#[derive(Debug, Clone)]
pub struct RegimeTag {
    pub regime: Regime,
    pub epsilon: Float,
}

#[derive(Debug, Clone)]
pub enum SaddleError {
    Domain(String),
    /// The residual does not change sign across the proven bracket beyond
    /// rounding noise; this signals an evaluation bug, not a property of
    /// the equation.
    NoSignChange {
        at_lower: f64,
        at_upper: f64,
    },
    Mu(MuError),
}

impl fmt::Display for SaddleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SaddleError::Domain(msg) => write!(f, "domain error: {msg}"),
            SaddleError::NoSignChange { at_lower, at_upper } => write!(
                f,
                "residual does not bracket a root: f(lower) = {at_lower:e}, f(upper) = {at_upper:e}"
            ),
            SaddleError::Mu(e) => write!(f, "mu evaluation failed: {e}"),
        }
    }
}

impl std::error::Error for SaddleError {}

impl From<MuError> for SaddleError {
    fn from(e: MuError) -> Self {
        SaddleError::Mu(e)
    }
}

/// `L = N + t/24` at working precision.
pub fn shifted_size(prec: Precision, n: u64, t: u64) -> Float {
    prec.real(n) + Float::with_val(prec.bits(), prec.real(t) / 24u32)
}

/// The proven root bracket `(sqrt(t/(24 (t+1) L)), 1/sqrt(24 N - 1))`.
pub fn root_bracket(prec: Precision, n: u64, t: u64) -> (Float, Float) {
    let l = shifted_size(prec, n, t);
    let lower = (prec.real(t) / (prec.real(24 * (t + 1)) * l)).sqrt();
    let upper = prec.real(24 * n - 1).sqrt().recip();
    (lower, upper)
}

/// Left side of the saddle equation minus `L`; strictly decreasing in `y`.
pub fn saddle_residual(
    prec: Precision,
    tables: &MuTables,
    n: u64,
    t: u64,
    y: &Float,
) -> Result<Float, SaddleError> {
    if t < 4 {
        return Err(SaddleError::Domain(format!(
            "saddle equation requires t >= 4, got {t}"
        )));
    }
    if !(*y > 0u32) {
        return Err(SaddleError::Domain("saddle residual requires y > 0".into()));
    }
    let zi = UpperHalfPoint::imaginary(prec, y.clone()).expect("y > 0");
    let zt = zi.scale_int(t + 1);
    let m1_t = mu(prec, tables, 1, &zt)?;
    let m1_1 = mu(prec, tables, 1, &zi)?;
    let scaled = Float::with_val(prec.bits(), &m1_1.value.re * (t + 1));
    let num = Float::with_val(prec.bits(), &m1_t.value.re - &scaled);
    let denom = Float::with_val(prec.bits(), y.clone().square() * (t + 1));
    let l = shifted_size(prec, n, t);
    Ok(Float::with_val(prec.bits(), num / denom) - l)
}

/// Solves the saddle equation over the proven bracket.
///
/// `tol` is the residual tolerance relative to `L`; the default is
/// `2^-(precision - 32)`. The returned `y` satisfies `|residual| <= tol * L`
/// and lies strictly inside the bracket.
pub fn solve_saddle(
    prec: Precision,
    tables: &MuTables,
    n: u64,
    t: u64,
    tol: Option<&Float>,
) -> Result<SaddleResult, SaddleError> {
    if n < 1 {
        return Err(SaddleError::Domain("solve_saddle requires N >= 1".into()));
    }
    if t < 4 {
        return Err(SaddleError::Domain(format!(
            "solve_saddle requires t >= 4, got {t}"
        )));
    }
    let default_tol = prec.real(Float::i_exp(1, -((prec.bits() - 32) as i32)));
    let tol = match tol {
        Some(t) if *t > 0u32 => t.clone(),
        Some(_) => return Err(SaddleError::Domain("tol must be positive".into())),
        None => default_tol,
    };
    let l = shifted_size(prec, n, t);
    let (lo, hi) = root_bracket(prec, n, t);
    let resid_cap = Float::with_val(prec.bits(), &tol * &l);

    let f_lo = saddle_residual(prec, tables, n, t, &lo)?;
    let f_hi = saddle_residual(prec, tables, n, t, &hi)?;
    // The true endpoint residuals have the proven signs but can be
    // exponentially smaller than the rounding noise of the evaluation;
    // only a sign violation beyond noise is an error.
    let noise_eps = Float::with_val(
        prec.bits(),
        Float::i_exp(1, -((prec.bits() - GUARD_BITS - 16) as i32)),
    );
    let noise = Float::with_val(prec.bits(), &l * &noise_eps);
    if f_lo < -noise.clone() || f_hi > noise {
        return Err(SaddleError::NoSignChange {
            at_lower: f_lo.to_f64(),
            at_upper: f_hi.to_f64(),
        });
    }

    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut fa = f_lo;
    let mut fb = f_hi;
    let mut iterations = 0u32;
    let max_iter = 8 * prec.bits();
    // Force a bisection step whenever secant steps stop halving the
    // bracket, so the worst case stays within 2x of plain bisection.
    let mut slow_secants = 0u32;
    let mut y;
    let mut fy;
    loop {
        iterations += 1;
        let width = Float::with_val(prec.bits(), &b - &a);
        let mid = Float::with_val(prec.bits(), &a + &b) / 2u32;
        let denom = Float::with_val(prec.bits(), &fb - &fa);
        let mut candidate = mid.clone();
        let mut used_secant = false;
        if denom != 0u32 && slow_secants < 2 {
            let secant = Float::with_val(
                prec.bits(),
                &a - Float::with_val(prec.bits(), &fa * &width) / &denom,
            );
            // Any strictly interior point is acceptable; roots that hug a
            // bracket endpoint are common (the lower endpoint is tight).
            if secant > a && secant < b {
                candidate = secant;
                used_secant = true;
            }
        }
        y = candidate;
        fy = saddle_residual(prec, tables, n, t, &y)?;
        if fy.clone().abs() <= resid_cap {
            break;
        }
        if fy > 0u32 {
            a = y.clone();
            fa = fy.clone();
        } else {
            b = y.clone();
            fb = fy.clone();
        }
        let new_width = Float::with_val(prec.bits(), &b - &a);
        if used_secant {
            let halved = new_width <= Float::with_val(prec.bits(), &width / 2u32);
            slow_secants = if halved { 0 } else { slow_secants + 1 };
        } else {
            slow_secants = 0;
        }
        if iterations >= max_iter {
            break;
        }
        // Bracket width at rounding resolution: accept the midpoint.
        let ulp_eps = Float::with_val(prec.bits(), Float::i_exp(1, -((prec.bits() - 8) as i32)));
        let ulp_scale = Float::with_val(prec.bits(), &y * &ulp_eps).abs();
        if new_width <= ulp_scale {
            y = Float::with_val(prec.bits(), &a + &b) / 2u32;
            fy = saddle_residual(prec, tables, n, t, &y)?;
            break;
        }
    }

    debug_assert!(y > lo && y < hi, "root must stay strictly inside bracket");
    Ok(SaddleResult {
        n,
        t,
        l,
        y,
        bracket: (lo, hi),
        residual: fy,
        iterations,
    })
}

/// The regime-I boundary
/// `B_I = 2 pi / ((1/2 + eps) log L) * sqrt(24 (t+1) L / t)`.
pub fn regime1_boundary(prec: Precision, n: u64, t: u64, epsilon: &Float) -> Float {
    let l = shifted_size(prec, n, t);
    let log_l = l.clone().ln();
    let half_plus = Float::with_val(prec.bits(), epsilon + prec.parse("0.5").unwrap());
    let prefactor = prec.two_pi() / Float::with_val(prec.bits(), &half_plus * &log_l);
    let inner = (Float::with_val(prec.bits(), prec.real(24 * (t + 1)) * &l) / prec.real(t)).sqrt();
    prefactor * inner
}

/// Classifies `(N, t)` into the three estimator regimes.
///
/// Regime III is the exact integer test `(t+1)^2 > 24 N`; regime I is
/// `t + 1 <= B_I(N, t, eps)` evaluated literally (the boundary depends on
/// `t` on both sides); everything between is regime II.
pub fn classify_regime(
    prec: Precision,
    n: u64,
    t: u64,
    epsilon: &Float,
) -> Result<RegimeTag, SaddleError> {
    if n < 1 || t < 4 {
        return Err(SaddleError::Domain(format!(
            "classify_regime requires N >= 1 and t >= 4, got N = {n}, t = {t}"
        )));
    }
    if !(*epsilon > 0u32) {
        return Err(SaddleError::Domain("epsilon must be positive".into()));
    }
    let tp1 = t as u128 + 1;
    let regime = if tp1 * tp1 > 24 * n as u128 {
        Regime::III
    } else if prec.real(t + 1) <= regime1_boundary(prec, n, t, epsilon) {
        Regime::I
    } else {
        Regime::II
    };
    Ok(RegimeTag {
        regime,
        epsilon: epsilon.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn tables() -> MuTables {
        MuTables::new(p())
    }

    #[test]
    fn residual_signs_at_bracket_endpoints() {
        // At (N, t) = (100, 10) the endpoint residuals are resolvable at
        // working precision: f(lower) > 0 > f(upper).
        let t = tables();
        let (lo, hi) = root_bracket(p(), 100, 10);
        let f_lo = saddle_residual(p(), &t, 100, 10, &lo).unwrap();
        let f_hi = saddle_residual(p(), &t, 100, 10, &hi).unwrap();
        assert!(f_lo > 0u32, "f(lower) = {f_lo}");
        assert!(f_hi < 0u32, "f(upper) = {f_hi}");
    }

    #[test]
    fn residual_is_strictly_decreasing() {
        let t = tables();
        let (lo, hi) = root_bracket(p(), 100, 10);
        let mut prev: Option<Float> = None;
        for j in 0..=64u32 {
            let y = Float::with_val(192, &lo + Float::with_val(192, &hi - &lo) * j / 64u32);
            let f = saddle_residual(p(), &t, 100, 10, &y).unwrap();
            if let Some(pf) = prev {
                assert!(f < pf, "residual not decreasing at sample {j}");
            }
            prev = Some(f);
        }
    }

    #[test]
    fn solver_matches_independent_roots() {
        // Roots solved independently at 85-digit precision.
        let t = tables();
        let cases = [
            (
                1000u64,
                4u64,
                "0.00577302162680423434700651674928398534996039313945722281725255",
            ),
            (
                1000,
                300,
                "0.00641543380776476068132572709078464337839498959503355663370815",
            ),
            (
                100,
                10,
                "0.0194220530544830013048545099786096225099739627116581675328553",
            ),
        ];
        for (n, tt, expect) in cases {
            let r = solve_saddle(p(), &t, n, tt, None).unwrap();
            let e = p().parse(expect).unwrap();
            let err = Float::with_val(192, &r.y - &e).abs();
            assert!(err < p().real(1e-40), "root for ({n}, {tt}): err {err}");
            assert!(r.y > r.bracket.0 && r.y < r.bracket.1);
            let cap = Float::with_val(192, &r.l * p().real(Float::i_exp(1, -150)));
            assert!(r.residual.clone().abs() <= cap);
        }
    }

    #[test]
    fn solver_is_deterministic() {
        let t = tables();
        let a = solve_saddle(p(), &t, 5000, 12, None).unwrap();
        let b = solve_saddle(p(), &t, 5000, 12, None).unwrap();
        assert_eq!(a.y, b.y);
        assert_eq!(a.residual, b.residual);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn solver_handles_sub_noise_endpoints() {
        // At (10^6, 4) the lower endpoint residual is ~exp(-6880): far
        // below rounding noise. The solver must still succeed and return a
        // strictly interior root.
        let t = tables();
        let r = solve_saddle(p(), &t, 1_000_000, 4, None).unwrap();
        assert!(r.y > r.bracket.0 && r.y < r.bracket.1);
        // Fixed small t: the root collapses onto the lower endpoint at
        // working precision.
        let gap = Float::with_val(192, &r.y - &r.bracket.0) / &r.bracket.0;
        assert!(gap.abs() < p().real(1e-30));
    }

    #[test]
    fn large_t_root_tracks_quarter_power_law() {
        // For t+1 > sqrt(24 N): y = (24 N)^{-1/2} (1 + O(N^{-1/2})).
        let t = tables();
        for n in [10_000u64, 160_000] {
            let tt = (2.0 * (24.0 * n as f64).sqrt()) as u64;
            let r = solve_saddle(p(), &t, n, tt, None).unwrap();
            let scaled = Float::with_val(192, &r.y * p().real(24 * n).sqrt());
            let defect = (scaled - 1u32).abs();
            let cap = p().real(5) / p().real(n).sqrt();
            assert!(defect < cap, "N = {n}: defect {defect}");
        }
    }

    #[test]
    fn domain_errors() {
        let t = tables();
        assert!(solve_saddle(p(), &t, 1000, 3, None).is_err());
        assert!(solve_saddle(p(), &t, 0, 4, None).is_err());
        assert!(saddle_residual(p(), &t, 10, 4, &p().real(0)).is_err());
        assert!(solve_saddle(p(), &t, 1000, 4, Some(&p().real(0))).is_err());
    }

    #[test]
    fn regime_examples() {
        let eps = p().parse("0.01").unwrap();
        assert_eq!(
            classify_regime(p(), 1_000_000, 4, &eps).unwrap().regime,
            Regime::I
        );
        // t + 1 = ceil(sqrt(24 N)) + 1 is strictly above the regime-III cut.
        let n = 10_000u64;
        let tp1 = (24.0 * n as f64).sqrt().ceil() as u64 + 1;
        assert_eq!(
            classify_regime(p(), n, tp1 - 1, &eps).unwrap().regime,
            Regime::III
        );
        assert!(classify_regime(p(), 100, 4, &p().real(0)).is_err());
    }

    #[test]
    fn regime_sequence_is_ordered() {
        // Scanning t upward at fixed N yields I, II, III with no
        // interleaving (II may be empty at small N).
        for (n, eps_str) in [(3000u64, "0.5"), (3000, "0.01"), (250_000, "0.01")] {
            let eps = p().parse(eps_str).unwrap();
            let mut seen = Vec::new();
            let t_max = ((24.0 * n as f64).sqrt() as u64) + 40;
            for t in 4..=t_max {
                let tag = classify_regime(p(), n, t, &eps).unwrap();
                if seen.last() != Some(&tag.regime) {
                    seen.push(tag.regime);
                }
            }
            assert!(
                seen.windows(2).all(|w| w[0] < w[1]),
                "regimes interleaved at N = {n}: {seen:?}"
            );
            assert_eq!(*seen.last().unwrap(), Regime::III);
        }
    }
}
