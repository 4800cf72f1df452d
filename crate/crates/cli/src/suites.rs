//! Certification suites behind `regpart validate`.
//!
//! Five suites certify the quantitative statements the estimators rest on:
//!
//! * `eta-bracket` — axis values of `log eta(iy)` inside the two-sided
//!   regime brackets (containment is checked up to working-precision
//!   resolution: deep in either regime the bracket width collapses below
//!   any fixed precision);
//! * `mu-lemmas` — the Gaussian-width combination inside its per-regime
//!   bracket, plus the cubic and quartic bound ratios (`< 6`, `< 36`) on
//!   the full precondition grid;
//! * `prop21` — the off-center quadrature of `|g_t(z)/g_t(iy)|` below
//!   `2 exp(-pi/(150 y))`;
//! * `glaisher` — regular vs bounded-multiplicity table equality;
//! * `containment` — exact `log p(N, t)` inside the regime estimator
//!   brackets (two-sided brackets widened by `C/sqrt(N)`; the regime-II
//!   upper bound taken strictly).

use rayon::prelude::*;
use rug::Float;
use std::collections::BTreeMap;

use regpart_core::asymptotics::{regime1_log_bracket, regime2_log_upper, regime3_log_bracket};
use regpart_core::eta_lab::{
    eta_axis_bracket, eta_reduced, integrate_gt_ratio_tail, UpperHalfPoint,
};
use regpart_core::exact_count::{count_bounded_multiplicity, count_regular, CountTable};
use regpart_core::mu_lab::{mu2_combination, mu_ratio_checks, MuTables};
use regpart_core::numerics::{ln_big, Precision};
use regpart_core::saddle::{classify_regime, Regime};

use crate::emit::format_real;

pub const SUITE_NAMES: [&str; 5] = [
    "eta-bracket",
    "mu-lemmas",
    "prop21",
    "glaisher",
    "containment",
];

/// Global relative widening `C / sqrt(N)` applied to two-sided estimator
/// brackets before exact-count containment checks. Fitted once against the
/// exact tables: the worst observed need is C ~ 0.17 on the regime-I grid
/// and C ~ 0.45 on the regime-III grid (the unrestricted-count estimate's
/// own N^{-1/2} constant). Frozen at 2.0 for headroom; the acceptance bar
/// requires C <= 10.
pub const CONTAINMENT_WIDENING_C: &str = "2.0";

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Regime-I boundary parameter for containment cells (decimal).
    pub epsilon: String,
    /// `1/y` values for the quadrature suite.
    pub inv_y: Vec<u64>,
    /// `t` values for the quadrature suite.
    pub quad_t: Vec<u64>,
    /// Largest `N` for exact-count containment checks.
    pub exact_budget: u64,
    /// Negative-control hook: flip the sign of the Gaussian-width
    /// combination inside the `mu-lemmas` suite. Never exposed on the CLI.
    pub mu2_sign_flip: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            epsilon: "0.5".to_string(),
            inv_y: vec![1000, 2000],
            quad_t: vec![4, 10, 100],
            exact_budget: 3000,
            mu2_sign_flip: false,
        }
    }
}

/// One suite check: `pass` iff `observed` satisfies the suite's inequality
/// exactly as stated.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRecord {
    pub suite: String,
    pub cell: String,
    pub observed: String,
    pub bound: String,
    pub pass: bool,
}

impl ValidationRecord {
    fn new(suite: &str, cell: String, observed: String, bound: String, pass: bool) -> Self {
        ValidationRecord {
            suite: suite.to_string(),
            cell,
            observed,
            bound,
            pass,
        }
    }
}

/// Runs one suite by name.
pub fn run_suite(
    prec: Precision,
    name: &str,
    opts: &SuiteOptions,
) -> Result<Vec<ValidationRecord>, String> {
    match name {
        "eta-bracket" => Ok(eta_bracket_suite(prec)),
        "mu-lemmas" => Ok(mu_lemma_suite(prec, opts)),
        "prop21" => Ok(prop21_suite(prec, opts)),
        "glaisher" => Ok(glaisher_suite()),
        "containment" => Ok(containment_suite(prec, opts)),
        other => Err(format!(
            "unknown suite {other:?}; expected one of {SUITE_NAMES:?}"
        )),
    }
}

/// Runs every suite in declaration order.
pub fn run_all_suites(
    prec: Precision,
    opts: &SuiteOptions,
) -> Result<Vec<ValidationRecord>, String> {
    let mut all = Vec::new();
    for name in SUITE_NAMES {
        all.extend(run_suite(prec, name, opts)?);
    }
    Ok(all)
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = hi / lo;
    (0..count)
        .map(|i| lo * ratio.powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Axis-bracket containment at 100 points per regime.
fn eta_bracket_suite(prec: Precision) -> Vec<ValidationRecord> {
    let mut ys = log_spaced(0.002, 0.95, 100);
    ys.extend(log_spaced(0.87, 12.0, 100));
    ys.par_iter()
        .map(|&yv| {
            let y = prec.real(yv);
            let v = eta_reduced(prec, &UpperHalfPoint::imaginary(prec, y.clone()).unwrap())
                .expect("axis evaluation")
                .log_abs;
            let (lo, hi) = eta_axis_bracket(prec, &y);
            // Containment up to working-precision resolution: the bracket
            // width vanishes double-exponentially in 1/y (resp. y).
            let slack = Float::with_val(prec.bits(), v.clone().abs() + 1u32) * prec.tail_eps();
            let pass = v >= Float::with_val(prec.bits(), &lo - &slack)
                && v <= Float::with_val(prec.bits(), &hi + &slack);
            ValidationRecord::new(
                "eta-bracket",
                format!("y={yv:.6e}"),
                format_real(&v),
                format!("{}..{}", format_real(&lo), format_real(&hi)),
                pass,
            )
        })
        .collect()
}

/// The Gaussian-width bracket and the cubic/quartic ratio bounds over the
/// full precondition grid (500 cells).
fn mu_lemma_suite(prec: Precision, opts: &SuiteOptions) -> Vec<ValidationRecord> {
    let tables = MuTables::new(prec);
    let mut records = Vec::new();

    // Combination bracket: 10 x 23 = 230 cells.
    let t_grid: [u64; 10] = [4, 5, 7, 10, 20, 50, 100, 300, 1000, 10_000];
    let y_grid = log_spaced(1e-4, 0.0999, 23);
    let combo_cells: Vec<(u64, f64)> = t_grid
        .iter()
        .flat_map(|&t| y_grid.iter().map(move |&y| (t, y)))
        .collect();
    records.par_extend(combo_cells.par_iter().map(|&(t, yv)| {
        let y = prec.real(yv);
        let mut d = mu2_combination(prec, &tables, t, &y).expect("grid is inside preconditions");
        if opts.mu2_sign_flip {
            d = -d;
        }
        let ty = Float::with_val(prec.bits(), &y * (t + 1));
        let (lo, hi) = if ty >= 1u32 {
            (prec.real(t + 1) / 16u32, prec.real(t + 1) / 12u32)
        } else {
            (prec.real(t - 1) / 12u32, prec.real(t + 1) / 12u32)
        };
        let pass = d > lo && d < hi;
        ValidationRecord::new(
            "mu-lemmas",
            format!("combo t={t} y={yv:.6e}"),
            format_real(&d),
            format!("{}..{}", format_real(&lo), format_real(&hi)),
            pass,
        )
    }));

    // Ratio bounds: 6 x 15 x 3 = 270 cells, two records each.
    let t_grid2: [u64; 6] = [4, 7, 12, 40, 150, 1000];
    let y_grid2 = log_spaced(1e-3, 0.0999, 15);
    let x_fracs: [f64; 3] = [0.0, 0.25, 0.32];
    let mut ratio_cells: Vec<(u64, f64, f64)> = Vec::new();
    for &t in &t_grid2 {
        for &y in &y_grid2 {
            for &fx in &x_fracs {
                ratio_cells.push((t, y, fx));
            }
        }
    }
    let ratio_records: Vec<[ValidationRecord; 2]> = ratio_cells
        .par_iter()
        .map(|&(t, yv, fx)| {
            let y = prec.real(yv);
            let x = Float::with_val(prec.bits(), &y * prec.real(fx));
            let z = UpperHalfPoint::new(x, y).unwrap();
            let (r3, r4) =
                mu_ratio_checks(prec, &tables, t, &z).expect("grid inside preconditions");
            let cell = format!("ratio t={t} y={yv:.6e} x/y={fx}");
            [
                ValidationRecord::new(
                    "mu-lemmas",
                    format!("{cell} r3"),
                    format_real(&r3),
                    "6".to_string(),
                    r3 < 6u32,
                ),
                ValidationRecord::new(
                    "mu-lemmas",
                    format!("{cell} r4"),
                    format_real(&r4),
                    "36".to_string(),
                    r4 < 36u32,
                ),
            ]
        })
        .collect();
    records.extend(ratio_records.into_iter().flatten());
    records
}

/// Off-center quadrature of `|g_t(z)/g_t(iy)|` against
/// `2 exp(-pi/(150 y))`.
fn prop21_suite(prec: Precision, opts: &SuiteOptions) -> Vec<ValidationRecord> {
    let cells: Vec<(u64, u64)> = opts
        .quad_t
        .iter()
        .flat_map(|&t| opts.inv_y.iter().map(move |&iy| (t, iy)))
        .collect();
    cells
        .par_iter()
        .map(|&(t, inv_y)| {
            let y = prec.real(inv_y).recip();
            let result = integrate_gt_ratio_tail(prec, t, &y).expect("quadrature converges");
            let pass = result.log_integral < result.log_bound;
            ValidationRecord::new(
                "prop21",
                format!("t={t} 1/y={inv_y} panels={}", result.panels),
                format_real(&result.log_integral),
                format_real(&result.log_bound),
                pass,
            )
        })
        .collect()
}

/// Table equality between the two counting models for `N <= 200`,
/// `1 <= t <= 12`.
fn glaisher_suite() -> Vec<ValidationRecord> {
    const MAX_N: u64 = 200;
    let per_t: Vec<Vec<ValidationRecord>> = (1u64..=12)
        .into_par_iter()
        .map(|t| {
            let regular = count_regular(MAX_N, t).unwrap();
            let bounded = count_bounded_multiplicity(MAX_N, t).unwrap();
            (0..=MAX_N)
                .map(|n| {
                    let a = regular.get(n);
                    let b = bounded.get(n);
                    ValidationRecord::new(
                        "glaisher",
                        format!("N={n} t={t}"),
                        a.to_string(),
                        b.to_string(),
                        a == b,
                    )
                })
                .collect()
        })
        .collect();
    per_t.into_iter().flatten().collect()
}

/// Regime-I/III two-sided containment (widened by `C/sqrt(N)`) and the
/// strict regime-II upper bound, against exact counts.
fn containment_suite(prec: Precision, opts: &SuiteOptions) -> Vec<ValidationRecord> {
    let budget = opts.exact_budget;
    let epsilon = prec
        .parse(&opts.epsilon)
        .unwrap_or_else(|_| prec.parse("0.5").unwrap());
    let widening_c = prec.parse(CONTAINMENT_WIDENING_C).unwrap();

    // Assemble cells first.
    #[derive(Clone, Copy)]
    enum Kind {
        TwoSidedI,
        TwoSidedIII,
        UpperII,
    }
    let mut cells: Vec<(u64, u64, Kind)> = Vec::new();
    for n in [400u64, 900, 1600, 2500] {
        if n > budget {
            continue;
        }
        for t in [4u64, 9, 20] {
            cells.push((n, t, Kind::TwoSidedI));
        }
    }
    for n in [1000u64, 2500] {
        if n > budget {
            continue;
        }
        let root = (24.0 * n as f64).sqrt().ceil() as u64;
        for tp1 in [root + 1, 2 * root, n] {
            cells.push((n, tp1 - 1, Kind::TwoSidedIII));
        }
    }
    // Regime II needs a wide epsilon to be nonempty at desk scale; collect
    // up to eight cells per N.
    let eps_ii = prec.parse("0.5").unwrap();
    let mut n_ii = 0u64;
    let base = budget.min(3000);
    while n_ii < 7 {
        let n = base * 4 / 10 + n_ii * (base - base * 4 / 10) / 6;
        let root = (24.0 * n as f64).sqrt() as u64;
        let mut picked = 0;
        let step = (root / 64).max(1);
        let mut t = root.saturating_sub(1);
        while t >= 5 && picked < 8 {
            if let Ok(tag) = classify_regime(prec, n, t, &eps_ii) {
                if tag.regime == Regime::II {
                    cells.push((n, t, Kind::UpperII));
                    picked += 1;
                } else if tag.regime == Regime::I {
                    break;
                }
            }
            t -= step;
        }
        n_ii += 1;
    }

    // Exact tables, one per distinct t, built in parallel up to the
    // largest N that uses each t.
    let mut max_per_t: BTreeMap<u64, u64> = BTreeMap::new();
    for &(n, t, _) in &cells {
        let e = max_per_t.entry(t).or_insert(0);
        *e = (*e).max(n);
    }
    let tables: BTreeMap<u64, CountTable> = max_per_t
        .par_iter()
        .map(|(&t, &maxn)| (t, count_regular(maxn, t).unwrap()))
        .collect();

    cells
        .par_iter()
        .map(|&(n, t, kind)| {
            let exact = ln_big(prec, tables[&t].get(n));
            let widen = Float::with_val(prec.bits(), &widening_c / &prec.real(n).sqrt());
            match kind {
                Kind::TwoSidedI => {
                    let tag = classify_regime(prec, n, t, &epsilon).unwrap();
                    debug_assert_eq!(tag.regime, Regime::I);
                    let (lo, hi) = regime1_log_bracket(prec, n, t);
                    let lo_w = Float::with_val(prec.bits(), &lo - &widen);
                    let hi_w = Float::with_val(prec.bits(), &hi + &widen);
                    let pass = exact >= lo_w && exact <= hi_w;
                    ValidationRecord::new(
                        "containment",
                        format!("regime-I N={n} t={t} C={CONTAINMENT_WIDENING_C}"),
                        format_real(&exact),
                        format!("{}..{}", format_real(&lo_w), format_real(&hi_w)),
                        pass,
                    )
                }
                Kind::TwoSidedIII => {
                    let (lo, hi) = regime3_log_bracket(prec, n, t);
                    let lo_w = Float::with_val(prec.bits(), &lo - &widen);
                    let hi_w = Float::with_val(prec.bits(), &hi + &widen);
                    let pass = exact >= lo_w && exact <= hi_w;
                    ValidationRecord::new(
                        "containment",
                        format!("regime-III N={n} t={t} C={CONTAINMENT_WIDENING_C}"),
                        format_real(&exact),
                        format!("{}..{}", format_real(&lo_w), format_real(&hi_w)),
                        pass,
                    )
                }
                Kind::UpperII => {
                    let upper = regime2_log_upper(prec, n, t);
                    let pass = exact <= upper;
                    ValidationRecord::new(
                        "containment",
                        format!("regime-II N={n} t={t}"),
                        format_real(&exact),
                        format_real(&upper),
                        pass,
                    )
                }
            }
        })
        .collect()
}
