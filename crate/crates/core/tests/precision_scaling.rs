//! The whole analytic stack is parametric in the working precision; these
//! sweeps run key paths at 64, 96 and 320 bits and check that accuracy
//! tracks the configured width (a hidden default-precision assumption
//! would cap accuracy near 2^-176 or break at 64 bits).

use rug::Float;

use regpart_core::eta_lab::{eta_qseries, UpperHalfPoint};
use regpart_core::mu_lab::{mu2_combination, MuTables};
use regpart_core::numerics::Precision;
use regpart_core::saddle::solve_saddle;

const ETA_I_REF: &str = "-0.26367207024891798265419219475325330588559367893387838225591";
const COMBO_REF: &str = "8.01480043534620784374867985704232344709482322553053357036076";
const ROOT_REF: &str = "0.00577302162680423434700651674928398534996039313945722281725255";

#[test]
fn accuracy_tracks_configured_precision() {
    for bits in [64u32, 96, 320] {
        let p = Precision::new(bits).unwrap();
        let tables = MuTables::new(p);

        let eta = eta_qseries(p, &UpperHalfPoint::imaginary(p, p.real(1)).unwrap()).unwrap();
        let eta_err = Float::with_val(bits, &eta.log_abs - p.parse(ETA_I_REF).unwrap()).abs();
        // capped below by the 60-digit reference resolution
        let eta_cap = p.real(Float::i_exp(1, -(bits as i32 - 24))) + p.real(3e-60);
        assert!(eta_err < eta_cap, "{bits} bits: eta error {eta_err}");

        let combo = mu2_combination(p, &tables, 100, &p.parse("0.05").unwrap()).unwrap();
        let combo_err = Float::with_val(bits, &combo - p.parse(COMBO_REF).unwrap()).abs();
        let combo_cap = p.real(Float::i_exp(1, -(bits as i32 - 28))) + p.real(3e-59);
        assert!(
            combo_err < combo_cap,
            "{bits} bits: combo error {combo_err}"
        );

        let root = solve_saddle(p, &tables, 1000, 4, None).unwrap();
        let root_err = Float::with_val(bits, &root.y - p.parse(ROOT_REF).unwrap()).abs()
            / p.parse(ROOT_REF).unwrap();
        let root_cap = p.real(Float::i_exp(1, -(bits as i32 - 36))) + p.real(3e-58);
        assert!(root_err < root_cap, "{bits} bits: root error {root_err}");
        assert!(root.y > root.bracket.0 && root.y < root.bracket.1);
    }
}

#[test]
fn higher_precision_beats_the_default_reference_floor() {
    // At 320 bits the eta value must agree with the 60-digit reference to
    // the reference's own resolution, strictly beyond what 64-bit runs
    // can reach.
    let p = Precision::new(320).unwrap();
    let eta = eta_qseries(p, &UpperHalfPoint::imaginary(p, p.real(1)).unwrap()).unwrap();
    let err = Float::with_val(320, &eta.log_abs - p.parse(ETA_I_REF).unwrap()).abs();
    assert!(err < p.real(1e-58), "320-bit error {err}");
}
