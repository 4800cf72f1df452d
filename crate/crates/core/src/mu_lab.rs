//! The family `mu_k(z) = -z^{k+1}/(2 pi i) (d/dz)^k log eta(z)`.
//!
//! Two convergent expansions cover the upper half-plane:
//!
//! * large `Im z` (in `[1, inf)`):
//!   `mu_k(z) = sum_n z^{k+1} (2 pi i n)^{k-1} sigma(n) e^{2 pi i n z}`
//!   minus `z^2/24` for `k <= 1`;
//! * small `Im z` (in `(0, 1)`): `mu_k(z) = sum_n P_k(2 pi i n / z)
//!   sigma(n) e^{-2 pi i n / z} + (-1)^k k!/24 + z/(4 pi i) (log(-iz) if
//!   k = 0, else (-1)^{k-1} (k-1)!)`,
//!
//! where `P_0(w) = 1/w`, `P_k(w) = (w - k) P_{k-1}(w) - w P'_{k-1}(w)` and
//! `Q_k(w) = w^2 (P_k(w) - P'_k(w))`. The polynomials are built once as
//! exact rationals; the recurrence is authoritative and generates, for
//! `k <= 4` (recorded from the built tables, not transcribed):
//!
//! ```text
//! P_0 = 1/w                        Q_0 = w + 1
//! P_1 = 1                          Q_1 = w^2
//! P_2 = w - 2                      Q_2 = w^3 - 3 w^2
//! P_3 = w^2 - 6 w + 6              Q_3 = w^4 - 8 w^3 + 12 w^2
//! P_4 = w^3 - 12 w^2 + 36 w - 24   Q_4 = w^5 - 15 w^4 + 60 w^3 - 60 w^2
//! ```
//!
//! Both branches are evaluated near `Im z = 1` and must agree to working
//! precision; disagreement signals a series bug rather than a numerical
//! artifact.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::eta_lab::UpperHalfPoint;
use crate::numerics::{build_sigma, Complex, Precision, SigmaTable, GUARD_BITS};

/// Highest derivative order the error analysis needs.
pub const KMAX_DEFAULT: usize = 4;

/// Laurent polynomial with exact rational coefficients; `coeffs[i]` is the
/// coefficient of `w^(lowest + i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLaurentPoly {
    lowest: i64,
    coeffs: Vec<Rational>,
}

impl RationalLaurentPoly {
    fn new(lowest: i64, coeffs: Vec<Rational>) -> Self {
        let mut poly = RationalLaurentPoly { lowest, coeffs };
        poly.trim();
        poly
    }

    /// Builds from `(power, coefficient)` pairs.
    pub fn from_terms(terms: &[(i64, Rational)]) -> Self {
        if terms.is_empty() {
            return RationalLaurentPoly::new(0, vec![]);
        }
        let lowest = terms.iter().map(|(p, _)| *p).min().unwrap();
        let highest = terms.iter().map(|(p, _)| *p).max().unwrap();
        let mut coeffs = vec![Rational::new(); (highest - lowest + 1) as usize];
        for (p, c) in terms {
            coeffs[(p - lowest) as usize] += c;
        }
        RationalLaurentPoly::new(lowest, coeffs)
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.cmp0() == std::cmp::Ordering::Equal) {
            self.coeffs.pop();
        }
        while matches!(self.coeffs.first(), Some(c) if c.cmp0() == std::cmp::Ordering::Equal) {
            self.coeffs.remove(0);
            self.lowest += 1;
        }
        if self.coeffs.is_empty() {
            self.lowest = 0;
        }
    }

    pub fn lowest_power(&self) -> i64 {
        self.lowest
    }

    pub fn highest_power(&self) -> i64 {
        self.lowest + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, power: i64) -> Rational {
        if power < self.lowest || power > self.highest_power() {
            Rational::new()
        } else {
            self.coeffs[(power - self.lowest) as usize].clone()
        }
    }

    /// Termwise derivative: `c w^j -> c j w^{j-1}`.
    pub fn derivative(&self) -> Self {
        let terms: Vec<(i64, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let j = self.lowest + i as i64;
                (j - 1, c * Rational::from(j))
            })
            .collect();
        RationalLaurentPoly::from_terms(&terms)
    }

    fn shift_power(&self, by: i64) -> Self {
        RationalLaurentPoly::new(self.lowest + by, self.coeffs.clone())
    }

    fn sub(&self, other: &Self) -> Self {
        let mut terms: Vec<(i64, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (self.lowest + i as i64, c.clone()))
            .collect();
        for (i, c) in other.coeffs.iter().enumerate() {
            terms.push((other.lowest + i as i64, -c.clone()));
        }
        RationalLaurentPoly::from_terms(&terms)
    }

    fn scale(&self, k: &Rational) -> Self {
        RationalLaurentPoly::new(
            self.lowest,
            self.coeffs.iter().map(|c| Rational::from(c * k)).collect(),
        )
    }

    /// Evaluation at a complex argument by Horner on the polynomial part,
    /// then one multiplication by `w^lowest`.
    pub fn eval_complex(&self, prec: Precision, w: &Complex) -> Complex {
        if self.coeffs.is_empty() {
            return Complex::zero(prec);
        }
        let mut acc = Complex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(w);
            acc = acc.add(&Complex::from_re(prec, prec.real(c)));
        }
        acc.mul(&w.powi(self.lowest))
    }
}

impl fmt::Display for RationalLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            let j = self.lowest + i as i64;
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*w")?,
                _ => write!(f, "{c}*w^{j}")?,
            }
        }
        Ok(())
    }
}

/// The pair `(P_k, Q_k)` for one order `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PkPolynomial {
    pub k: usize,
    pub p: RationalLaurentPoly,
    pub q: RationalLaurentPoly,
}

/// Exact-rational `P_k`, `Q_k` for `k <= kmax` via the defining recurrence.
pub fn build_pk(kmax: usize) -> Vec<PkPolynomial> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut p = RationalLaurentPoly::from_terms(&[(-1, Rational::from(1))]);
    for k in 0..=kmax {
        if k > 0 {
            // P_k = (w - k) P_{k-1} - w P'_{k-1}
            let dp = p.derivative();
            let w_p = p.shift_power(1);
            let k_p = p.scale(&Rational::from(k as i64));
            let w_dp = dp.shift_power(1);
            p = w_p.sub(&k_p).sub(&w_dp);
        }
        let q = p.sub(&p.derivative()).shift_power(2);
        out.push(PkPolynomial { k, p: p.clone(), q });
    }
    out
}

/// Which expansion produced a [`MuValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuBranch {
    LargeIm,
    SmallIm,
}

/// One evaluation of `mu_k`.
#[derive(Debug, Clone)]
pub struct MuValue {
    pub k: usize,
    pub z: UpperHalfPoint,
    pub value: Complex,
    pub branch: MuBranch,
}

#[derive(Debug, Clone)]
pub enum MuError {
    /// Argument outside the branch's validity region.
    BranchDomain { y: f64, branch: MuBranch },
    /// The two expansions disagree at the branch boundary.
    BranchDisagreement { k: usize, delta: f64 },
    /// Lemma-sweep precondition violated.
    Domain(String),
    /// Order exceeds the built polynomial table.
    OrderTooLarge { k: usize, kmax: usize },
}

impl fmt::Display for MuError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuError::BranchDomain { y, branch } => {
                write!(f, "Im z = {y} outside domain of {branch:?} expansion")
            }
            MuError::BranchDisagreement { k, delta } => {
                write!(f, "mu_{k} branch disagreement {delta:e} at Im z near 1")
            }
            MuError::Domain(msg) => write!(f, "domain error: {msg}"),
            MuError::OrderTooLarge { k, kmax } => {
                write!(f, "mu_{k} requested but tables were built for k <= {kmax}")
            }
        }
    }
}

impl std::error::Error for MuError {}

/// Read-only tables shared by every `mu` evaluation: the divisor-sum sieve
/// and the `P_k`/`Q_k` family. Build once, share across threads.
#[derive(Debug, Clone)]
pub struct MuTables {
    sigma: SigmaTable,
    pk: Vec<PkPolynomial>,
}

impl MuTables {
    pub fn new(prec: Precision) -> Self {
        Self::with_kmax(prec, KMAX_DEFAULT)
    }

    pub fn with_kmax(prec: Precision, kmax: usize) -> Self {
        MuTables {
            sigma: build_sigma(prec.sigma_len()),
            pk: build_pk(kmax),
        }
    }

    pub fn sigma(&self) -> &SigmaTable {
        &self.sigma
    }

    pub fn pk(&self) -> &[PkPolynomial] {
        &self.pk
    }

    fn kmax(&self) -> usize {
        self.pk.len() - 1
    }
}

/// `i^m` as a rotation of a complex value.
fn rotate_i_pow(v: &Complex, m: i64) -> Complex {
    match m.rem_euclid(4) {
        0 => v.clone(),
        1 => v.mul_i(),
        2 => v.neg(),
        _ => v.mul_i().neg(),
    }
}

fn large_series(prec: Precision, tables: &MuTables, k: usize, z: &UpperHalfPoint) -> Complex {
    let two_pi = prec.two_pi();
    let zc = z.to_complex();
    let z_pow = zc.powi(k as i64 + 1);
    // q = exp(2 pi i z)
    let q = Complex::new(
        Float::with_val(prec.bits(), -&two_pi) * z.y(),
        Float::with_val(prec.bits(), &two_pi * z.x()),
    )
    .exp();
    let eps = prec.tail_eps();

    let mut sum = Complex::zero(prec);
    let mut qn = Complex::new(prec.real(1), prec.zero());
    let mut first_mag: Option<Float> = None;
    let mut below = 0u32;
    for n in 1..=tables.sigma.max_n() {
        qn = qn.mul(&q);
        // z^{k+1} (2 pi i n)^{k-1} sigma(n) q^n
        let mag = Float::with_val(prec.bits(), &two_pi * (n as u64));
        let radial = mag.pow((k as i32) - 1);
        let term = rotate_i_pow(
            &z_pow
                .mul(&qn)
                .scale(&radial)
                .scale(&prec.real(tables.sigma.get(n))),
            k as i64 - 1,
        );
        sum = sum.add(&term);
        let t_abs = term.abs();
        let f_abs = first_mag.get_or_insert_with(|| t_abs.clone());
        let scale = Float::with_val(prec.bits(), sum.abs() + &*f_abs);
        if n >= 3 && t_abs < Float::with_val(prec.bits(), &scale * &eps) {
            below += 1;
            if below >= 2 {
                break;
            }
        } else {
            below = 0;
        }
    }
    if k <= 1 {
        let corr = zc.powi(2).scale(&prec.real(Rational::from((1, 24))));
        sum = sum.sub(&corr);
    }
    sum
}

fn small_series(prec: Precision, tables: &MuTables, k: usize, z: &UpperHalfPoint) -> Complex {
    let two_pi = prec.two_pi();
    let pk = &tables.pk[k].p;
    // i/z = (y + i x) / |z|^2; w_n = 2 pi n (i/z); e^{-2 pi i n / z} = r^n.
    let norm = z.norm_sqr();
    let i_over_z = Complex::new(
        Float::with_val(prec.bits(), z.y() / &norm),
        Float::with_val(prec.bits(), z.x() / &norm),
    );
    let w1 = i_over_z.scale(&two_pi);
    let r = w1.neg().exp();
    let eps = prec.tail_eps();

    let mut sum = Complex::zero(prec);
    let mut rn = Complex::new(prec.real(1), prec.zero());
    let mut first_mag: Option<Float> = None;
    let mut below = 0u32;
    for n in 1..=tables.sigma.max_n() {
        rn = rn.mul(&r);
        let wn = w1.scale_u64(n as u64);
        let term = pk
            .eval_complex(prec, &wn)
            .mul(&rn)
            .scale(&prec.real(tables.sigma.get(n)));
        sum = sum.add(&term);
        let t_abs = term.abs();
        let f_abs = first_mag.get_or_insert_with(|| t_abs.clone());
        let scale = Float::with_val(prec.bits(), sum.abs() + &*f_abs) + 1u32;
        if n >= 3 && t_abs < Float::with_val(prec.bits(), &scale * &eps) {
            below += 1;
            if below >= 2 {
                break;
            }
        } else {
            below = 0;
        }
    }

    // (-1)^k k! / 24
    let mut fact = Integer::from(1);
    for j in 2..=k {
        fact *= j as u64;
    }
    let mut const_term = Rational::from((fact, Integer::from(24)));
    if k % 2 == 1 {
        const_term = -const_term;
    }
    sum = sum.add(&Complex::from_re(prec, prec.real(&const_term)));

    // z/(4 pi i) * (log(-iz) for k = 0; (-1)^{k-1} (k-1)! for k >= 1)
    let z_over_4pii = Complex::new(z.y().clone(), Float::with_val(prec.bits(), -z.x()))
        .scale(&Float::with_val(prec.bits(), 2u32 * &two_pi).recip());
    let tail = if k == 0 {
        let minus_iz = Complex::new(z.y().clone(), Float::with_val(prec.bits(), -z.x()));
        z_over_4pii.mul(&minus_iz.ln())
    } else {
        let mut fact_km1 = Integer::from(1);
        for j in 2..k {
            fact_km1 *= j as u64;
        }
        let signed = if (k - 1) % 2 == 1 {
            -Rational::from(fact_km1)
        } else {
            Rational::from(fact_km1)
        };
        z_over_4pii.scale(&prec.real(signed))
    };
    sum.add(&tail)
}

/// Large-`Im` expansion; requires `Im z >= 1`.
pub fn mu_large(
    prec: Precision,
    tables: &MuTables,
    k: usize,
    z: &UpperHalfPoint,
) -> Result<MuValue, MuError> {
    if k > tables.kmax() {
        return Err(MuError::OrderTooLarge {
            k,
            kmax: tables.kmax(),
        });
    }
    if *z.y() < 1u32 {
        return Err(MuError::BranchDomain {
            y: z.y().to_f64(),
            branch: MuBranch::LargeIm,
        });
    }
    Ok(MuValue {
        k,
        z: z.clone(),
        value: large_series(prec, tables, k, z),
        branch: MuBranch::LargeIm,
    })
}

/// Small-`Im` expansion; requires `0 < Im z < 1`.
pub fn mu_small(
    prec: Precision,
    tables: &MuTables,
    k: usize,
    z: &UpperHalfPoint,
) -> Result<MuValue, MuError> {
    if k > tables.kmax() {
        return Err(MuError::OrderTooLarge {
            k,
            kmax: tables.kmax(),
        });
    }
    if !(*z.y() < 1u32) {
        return Err(MuError::BranchDomain {
            y: z.y().to_f64(),
            branch: MuBranch::SmallIm,
        });
    }
    Ok(MuValue {
        k,
        z: z.clone(),
        value: small_series(prec, tables, k, z),
        branch: MuBranch::SmallIm,
    })
}

/// `mu_k(z)` with automatic branch selection. In the boundary zone
/// `0.9 <= Im z <= 1.1` both expansions are evaluated and must agree to
/// `2^-(precision - guard - 8)`; truncation asymmetry between the branches
/// would surface here.
pub fn mu(
    prec: Precision,
    tables: &MuTables,
    k: usize,
    z: &UpperHalfPoint,
) -> Result<MuValue, MuError> {
    if k > tables.kmax() {
        return Err(MuError::OrderTooLarge {
            k,
            kmax: tables.kmax(),
        });
    }
    let y = z.y();
    let lo = prec.parse("0.9").unwrap();
    let hi = prec.parse("1.1").unwrap();
    let in_zone = *y >= lo && *y <= hi;
    if in_zone {
        let a = large_series(prec, tables, k, z);
        let b = small_series(prec, tables, k, z);
        let delta = a.sub(&b).abs();
        let scale = Float::with_val(prec.bits(), a.abs() + 1u32);
        let tol = Float::with_val(
            prec.bits(),
            Float::i_exp(1, -((prec.bits() - GUARD_BITS - 8) as i32)),
        ) * &scale;
        if delta > tol {
            return Err(MuError::BranchDisagreement {
                k,
                delta: delta.to_f64(),
            });
        }
        let (value, branch) = if *y >= 1u32 {
            (a, MuBranch::LargeIm)
        } else {
            (b, MuBranch::SmallIm)
        };
        return Ok(MuValue {
            k,
            z: z.clone(),
            value,
            branch,
        });
    }
    if *y >= 1u32 {
        mu_large(prec, tables, k, z)
    } else {
        mu_small(prec, tables, k, z)
    }
}

/// `(t+1) mu_2(iy) - mu_2((t+1) iy)`, the Gaussian-width combination.
/// Requires `t > 3` and `0 < y <= 1/10`; the bound sweeps assert the
/// two-sided lemma brackets per `(t+1)y` regime.
pub fn mu2_combination(
    prec: Precision,
    tables: &MuTables,
    t: u64,
    y: &Float,
) -> Result<Float, MuError> {
    if t <= 3 {
        return Err(MuError::Domain(format!(
            "mu2_combination requires t > 3, got {t}"
        )));
    }
    let tenth = prec.parse("0.1").unwrap();
    if !(*y > 0u32 && *y <= tenth) {
        return Err(MuError::Domain(format!(
            "mu2_combination requires 0 < y <= 1/10, got {}",
            y.to_f64()
        )));
    }
    combination_real(prec, tables, 2, t, y)
}

/// `(t+1) mu_k(iy) - mu_k((t+1) iy)` on the axis, as a real.
fn combination_real(
    prec: Precision,
    tables: &MuTables,
    k: usize,
    t: u64,
    y: &Float,
) -> Result<Float, MuError> {
    let zi = UpperHalfPoint::imaginary(prec, y.clone()).expect("y > 0 checked by caller");
    let zt = zi.scale_int(t + 1);
    let a = mu(prec, tables, k, &zi)?;
    let b = mu(prec, tables, k, &zt)?;
    let combo = a.value.scale_u64(t + 1).sub(&b.value);
    debug_assert!(
        combo.im.clone().abs() < prec.real(1e-30),
        "axis combination should be real"
    );
    Ok(combo.re)
}

/// The two bound ratios of the quartic error analysis:
/// `r3 = |(t+1) mu_3(iy) - mu_3((t+1) iy)| / D` and
/// `r4 = |(t+1) mu_4(z) - mu_4((t+1) z)| / D` with
/// `D = (t+1) mu_2(iy) - mu_2((t+1) iy)`.
/// Requires `t > 3`, `0 < y <= 1/10`, `|x| < y/3`.
pub fn mu_ratio_checks(
    prec: Precision,
    tables: &MuTables,
    t: u64,
    z: &UpperHalfPoint,
) -> Result<(Float, Float), MuError> {
    let y = z.y().clone();
    let x_limit = Float::with_val(prec.bits(), &y / 3u32);
    if z.x().clone().abs() >= x_limit {
        return Err(MuError::Domain(format!(
            "mu_ratio_checks requires |x| < y/3, got x = {}, y = {}",
            z.x().to_f64(),
            y.to_f64()
        )));
    }
    let d = mu2_combination(prec, tables, t, &y)?;

    let r3_num = combination_real(prec, tables, 3, t, &y)?.abs();
    let r3 = Float::with_val(prec.bits(), &r3_num / &d);

    let m4a = mu(prec, tables, 4, z)?;
    let m4b = mu(prec, tables, 4, &z.scale_int(t + 1))?;
    let r4_num = m4a.value.scale_u64(t + 1).sub(&m4b.value).abs();
    let r4 = Float::with_val(prec.bits(), &r4_num / &d);
    Ok((r3, r4))
}
