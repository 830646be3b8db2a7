//! Upper and lower bounds on the largest exponent `X` of a sporadic
//! solution, and the parameter beyond which they are incompatible.
//!
//! Every value is an [`Interval`]; comparisons are only trusted when the
//! intervals are disjoint.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::cubic_core::CubicParams;
use crate::error::{Error, Result};
use crate::interval::{Dyadic, Interval, Round};

/// Working precision for bound evaluations.
pub const BOUNDS_PRECISION: u32 = 128;

/// Threshold above which the tail argument in [`absolute_parameter_bound`]
/// takes over.
const TAIL_START: u64 = 1 << 21;

fn rat(num: i64, den: i64, prec: u32) -> Interval {
    Interval::from_ratio(num, den, prec)
}

fn int(n: impl Into<BigInt>, prec: u32) -> Interval {
    Interval::from_int(n, prec)
}

/// Laurent's lower bound for `log|b2 log α2 - b1 log α1|`:
/// `-17.9 D^4 max(log b' + 0.38, 30/D, 1)^2 log A1 log A2` with
/// `b' = b1/(D log A2) + b2/(D log A1)`.
pub fn laurent_lower_bound(
    degree: u32,
    log_a1: &Interval,
    log_a2: &Interval,
    b1: &BigInt,
    b2: &BigInt,
) -> Result<Interval> {
    if degree == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    if b1 <= &BigInt::zero() || b2 <= &BigInt::zero() {
        return Err(Error::Domain("b1 and b2 must be positive integers".into()));
    }
    let prec = log_a1.prec().max(log_a2.prec());
    let inv_d = rat(1, degree as i64, prec);
    if log_a1.certainly_lt(&inv_d) || log_a2.certainly_lt(&inv_d) || !log_a1.is_positive() || !log_a2.is_positive() {
        return Err(Error::Domain("log A_i must be at least 1/D".into()));
    }
    let d = int(degree, prec);
    let b_prime = int(b1.clone(), prec)
        .div(&d.mul(log_a2))?
        .add(&int(b2.clone(), prec).div(&d.mul(log_a1))?);
    let m = b_prime
        .ln()?
        .add(&rat(38, 100, prec))
        .max(&rat(30, degree as i64, prec))
        .max(&int(1, prec));
    let d4 = BigInt::from(degree).pow(4);
    Ok(rat(179, 10, prec)
        .mul_int(&d4)
        .mul(&m.sqr())
        .mul(log_a1)
        .mul(log_a2)
        .neg())
}

fn require_large(params: &CubicParams) -> Result<()> {
    if params.a() <= &BigInt::from(100) {
        return Err(Error::Domain(format!("bounds need a > 100, got a = {}", params.a())));
    }
    Ok(())
}

fn upper_raw(a: &BigInt, prec: u32) -> Result<Interval> {
    let log_a = int(a.clone(), prec).ln()?;
    let inner = rat(17, 10, prec).mul(&log_a.ln()?).add(&int(10, prec));
    Ok(log_a.mul(&inner.sqr()).mul_int(&BigInt::from(343)))
}

fn lower_raw(a: &BigInt, prec: u32) -> Result<Interval> {
    let l = int(a + 1u32, prec).ln()?.sub(&int(2, prec).ln()?);
    Ok(l.mul_int(&(a + 2u32)).mul_pow2(-1))
}

/// Enclosure of `343 log a (10 + 1.7 log log a)^2`.
pub fn upper_bound_x(params: &CubicParams) -> Result<Interval> {
    upper_bound_x_at(params, BOUNDS_PRECISION)
}

pub fn upper_bound_x_at(params: &CubicParams, prec: u32) -> Result<Interval> {
    require_large(params)?;
    upper_raw(params.a(), prec)
}

/// Enclosure of `(a+2)(log(a+1) - log 2) / 2`.
pub fn lower_bound_x(params: &CubicParams) -> Result<Interval> {
    lower_bound_x_at(params, BOUNDS_PRECISION)
}

pub fn lower_bound_x_at(params: &CubicParams, prec: u32) -> Result<Interval> {
    require_large(params)?;
    lower_raw(params.a(), prec)
}

/// `Some(true)` when `lower_X(a) > upper_X(a)` is certified, `Some(false)`
/// when the opposite strict inequality is, `None` when undecided.
fn crossed(a: u64) -> Result<Option<bool>> {
    let a = BigInt::from(a);
    let lo = lower_raw(&a, BOUNDS_PRECISION)?;
    let up = upper_raw(&a, BOUNDS_PRECISION)?;
    Ok(if lo.certainly_gt(&up) {
        Some(true)
    } else if lo.certainly_lt(&up) {
        Some(false)
    } else {
        None
    })
}

/// Both bounds are increasing in `a`, so `lower(s) > upper(e)` covers every
/// integer in `[s, e]`.
fn segment_clear(s: u64, e: u64) -> Result<bool> {
    let lo = lower_raw(&BigInt::from(s), BOUNDS_PRECISION)?;
    let up = upper_raw(&BigInt::from(e), BOUNDS_PRECISION)?;
    Ok(lo.certainly_gt(&up))
}

/// For `a ≥ T`: `lower(a) ≥ a (log a - log 2)/2` and, since
/// `log log a ≤ log a`, `upper(a) ≤ 343 log a (10 + 1.7 log a)^2`. With
/// `t = log a` the ratio of the two simplified bounds is
/// `h(t) = e^t (t - log 2) / (686 t (10 + 1.7 t)^2)`, whose logarithmic
/// derivative `1 + 1/(t - log 2) - 1/t - 3.4/(10 + 1.7 t)` is positive for
/// `t ≥ 2`. So `h(log T) > 1` settles every `a ≥ T`.
fn tail_certified(t_start: u64) -> Result<bool> {
    let prec = BOUNDS_PRECISION;
    let a = int(t_start, prec);
    let t = a.ln()?;
    if !t.certainly_gt(&int(2, prec)) {
        return Ok(false);
    }
    let num = a.mul(&t.sub(&int(2, prec).ln()?));
    let den = t
        .mul(&rat(17, 10, prec).mul(&t).add(&int(10, prec)).sqr())
        .mul_int(&BigInt::from(686));
    Ok(num.div(&den)?.certainly_gt(&int(1, prec)))
}

/// The least integer `A` such that `lower_X(a) > upper_X(a)` is certified
/// for every integer `a > A`. Undecided points count as failures.
pub fn absolute_parameter_bound() -> Result<u64> {
    if !tail_certified(TAIL_START)? {
        return Err(Error::CertificationFailed("tail inequality at 2^21".into()));
    }
    // Bisection for the crossover, then a covering walk that may move it up.
    let (mut bad, mut good) = (101u64, TAIL_START);
    if crossed(good)? != Some(true) {
        return Err(Error::CertificationFailed("no crossover below 2^21".into()));
    }
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if crossed(mid)? == Some(true) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    let mut answer = bad;
    let mut s = answer + 1;
    let mut len = 1u64;
    while s < TAIL_START {
        let e = (s + len - 1).min(TAIL_START - 1);
        if segment_clear(s, e)? {
            s = e + 1;
            len = len.saturating_mul(2);
        } else if len > 1 {
            len /= 2;
        } else {
            answer = s;
            s += 1;
        }
    }
    Ok(answer)
}

/// One certified step of the derivation of the upper bound.
#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub label: &'static str,
    pub holds: bool,
}

/// Replays the numerical inequalities behind the constants 343, 10 and 1.7
/// with certified intervals.
pub fn derivation_chain() -> Result<Vec<ChainStep>> {
    let p = BOUNDS_PRECISION;
    let ln = |n: i64| int(n, p).ln();
    let log_x0 = ln(200_000)?;
    let mut steps = Vec::new();
    let mut push = |label, holds| steps.push(ChainStep { label, holds });

    // log 4 - log log 103 + 0.38 < 0.24
    let lhs = ln(4)?.sub(&ln(103)?.ln()?).add(&rat(38, 100, p));
    push("log 4 - log log 103 + 0.38 < 0.24", lhs.certainly_lt(&rat(24, 100, p)));

    // log X + 0.24 < 1.02 log X  <=>  log X > 12, and log X grows with X.
    push("log 200000 > 12", log_x0.certainly_gt(&int(12, p)));
    let at = log_x0.add(&rat(24, 100, p));
    push("log X + 0.24 < 1.02 log X at X = 200000", at.certainly_lt(&log_x0.mul(&rat(102, 100, p))));

    // 17.9 * 3^4 * 1.02^2 / 9 <= 167.61
    let c = rat(179, 10, p)
        .mul_int(&BigInt::from(81))
        .mul(&rat(102, 100, p).sqr())
        .div_int(&BigInt::from(9));
    push("17.9 * 81 * 1.02^2 / 9 <= 167.61", c.hi() <= rat(16761, 100, p).lo());

    // 0.39 (log X)^2 (log(a+3))^2 exceeds log 2 + (1/3) log a at the
    // smallest admissible X and a; the left side grows faster in both.
    let slack = rat(39, 100, p).mul(&log_x0.sqr()).mul(&ln(104)?.sqr());
    let rest = ln(2)?.add(&ln(101)?.div_int(&BigInt::from(3)));
    push("167.61 L + log 2 + log(a)/3 < 168 L at a = 101, X = 200000", slack.certainly_gt(&rest));

    // log(a+3) / log a decreases in a, so a = 101 is the worst case.
    push("log(a+3) <= 1.01 log a for a > 100", ln(104)?.certainly_lt(&ln(101)?.mul(&rat(101, 100, p))));
    push("168 * 2 * 1.01^2 < 343", rat(168 * 2 * 10201, 10000, p).certainly_lt(&int(343, p)));
    push("log 343 < 5.9", ln(343)?.certainly_lt(&rat(59, 10, p)));

    // 2 log t < 0.41 t for t = log X; the gap widens once t > 2/0.41.
    let two_loglog = log_x0.ln()?.mul_int(&BigInt::from(2));
    push("2 log log X < 0.41 log X at X = 200000", two_loglog.certainly_lt(&log_x0.mul(&rat(41, 100, p))));
    push("5.9 / 0.59 = 10", rat(590, 59, p).contains(&Dyadic::from_int(10)) && rat(590, 59, p).width().is_zero());
    push("1 / 0.59 < 1.7", rat(100, 59, p).certainly_lt(&rat(17, 10, p)));

    // The case split at X = 200000 needs the bound itself to exceed it.
    let u101 = upper_raw(&BigInt::from(101), p)?;
    push("upper_X(101) > 200000", u101.certainly_gt(&int(200_000, p)));
    Ok(steps)
}

/// `[lo, hi]` as outward-rounded decimal strings.
fn endpoints(iv: &Interval) -> [String; 2] {
    [iv.lo().to_decimal(20, Round::Down), iv.hi().to_decimal(20, Round::Up)]
}

#[derive(Clone, Debug, Serialize)]
pub struct LaurentInputs {
    #[serde(rename = "D")]
    pub degree: u32,
    /// `log A1 = log A2 = log(a+3) / 3`.
    pub log_a: [String; 2],
    /// `b' ≤ 4 X / log(a+3)` evaluated at the upper bound for `X`.
    pub b_prime_max: [String; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    #[serde(with = "crate::json::int")]
    pub a: BigInt,
    #[serde(rename = "upper_X")]
    pub upper_x: [String; 2],
    #[serde(rename = "lower_X")]
    pub lower_x: [String; 2],
    pub contradiction: bool,
    pub laurent_inputs: LaurentInputs,
}

pub fn bounds_report(params: &CubicParams) -> Result<BoundsReport> {
    let p = BOUNDS_PRECISION;
    let up = upper_bound_x(params)?;
    let lo = lower_bound_x(params)?;
    let log_a3 = int(params.a() + 3u32, p).ln()?;
    let log_a = log_a3.div_int(&BigInt::from(3));
    let b_prime = up.mul_int(&BigInt::from(4)).div(&log_a3)?;
    Ok(BoundsReport {
        a: params.a().clone(),
        upper_x: endpoints(&up),
        lower_x: endpoints(&lo),
        contradiction: lo.certainly_gt(&up),
        laurent_inputs: LaurentInputs {
            degree: 3,
            log_a: endpoints(&log_a),
            b_prime_max: endpoints(&b_prime),
        },
    })
}

/// `f64` midpoint, for display only.
pub fn approx(iv: &Interval) -> f64 {
    iv.mid().to_f64()
}

/// `ceil(2 · hi(upper_X))`, the convergent-denominator threshold.
pub fn denominator_threshold(params: &CubicParams) -> Result<BigInt> {
    Ok(upper_bound_x(params)?.hi().mul_pow2(1).ceil())
}
