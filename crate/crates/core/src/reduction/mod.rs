//! Continued-fraction reduction of the exponent bound, one parameter at a
//! time, with replayable certificates.
//!
//! For a solution with largest exponent `X`,
//! `|(x1-x2) - (y1-y2) θ| < 2 a^{1/3 - X/2} / log a` with
//! `θ = log δ / log ε`. If `p/q` is the first convergent of `θ` with
//! `q ≥ 2 · upper_X(a)`, best approximation gives `c = |p - qθ|` below the
//! left side, hence `X < (2 / log a) log(2 a^{1/3} / (c log a))`.

mod sweep;
mod verify;

pub use sweep::{completed_parameters, sweep, CertificateSink, SweepSummary};
pub use verify::{verify_certificate, verify_file, ReplayReport};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{lower_bound_x_at, upper_bound_x, BOUNDS_PRECISION};
use crate::cubic_core::CubicParams;
use crate::embeddings::{build_context, PRECISION_CAP};
use crate::error::{Error, Result};
use crate::interval::{Interval, Round};

/// Significant digits written for real-valued certificate fields.
pub const CERT_DIGITS: u32 = 40;

/// First convergent `p/q` of every real in `ratio` with `q ≥ q_min`.
///
/// Partial quotients are computed on both endpoints in lockstep and are
/// accepted only when they agree and the remainder of the lower endpoint is
/// strictly positive; otherwise the interval is too wide.
pub fn convergents_until(ratio: &Interval, q_min: &BigInt) -> Result<(BigInt, BigInt)> {
    if !ratio.is_positive() {
        return Err(Error::Domain("ratio must be positive".into()));
    }
    let mut lo = ratio.lo().to_rational();
    let mut hi = ratio.hi().to_rational();
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    loop {
        let a_lo = lo.floor().to_integer();
        let a_hi = hi.floor().to_integer();
        let rem_lo = &lo - BigRational::from_integer(a_lo.clone());
        if a_lo != a_hi || !rem_lo.is_positive() {
            return Err(Error::precision(
                ratio.prec(),
                format!("partial quotient undetermined after denominator {q}"),
            ));
        }
        let p_next = &a_lo * &p + &p_prev;
        let q_next = &a_lo * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        if &q >= q_min {
            return Ok((p, q));
        }
        let rem_hi = &hi - BigRational::from_integer(a_hi);
        // x ↦ 1/(x - a) reverses the order of the endpoints.
        lo = rem_hi.recip();
        hi = rem_lo.recip();
    }
}

/// Certificate for one parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    #[serde(with = "crate::json::int")]
    pub a: BigInt,
    pub prec: u32,
    #[serde(with = "crate::json::dec_string")]
    pub p: BigInt,
    #[serde(with = "crate::json::dec_string")]
    pub q: BigInt,
    #[serde(with = "crate::json::dec_string")]
    pub q_min: BigInt,
    /// Lower bound for `|p - qθ|`, rounded down.
    pub c_lo: String,
    /// Reduced upper bound for `X`, rounded up.
    pub new_upper: String,
    /// Lower bound for `X`, rounded down.
    pub lower: String,
    pub contradiction: bool,
}

impl ReductionCertificate {
    pub fn params(&self) -> CubicParams {
        CubicParams::new(self.a.clone())
    }
}

/// Starting precision `2 ⌈log2 q_min⌉ + 96`.
pub fn initial_precision(q_min: &BigInt) -> u32 {
    let bits = (q_min - 1u32).bits() as u32;
    2 * bits + 96
}

/// `(2 / log a)(log 2 + (log a)/3 - log c - log log a)` with `c` the exact
/// dyadic or rational lower bound handed in.
pub(crate) fn reduced_bound(a: &BigInt, c: &Interval, prec: u32) -> Result<Interval> {
    let log_a = Interval::from_int(a.clone(), prec).ln()?;
    let inner = Interval::from_int(2, prec)
        .ln()?
        .add(&log_a.div_int(&BigInt::from(3)))
        .sub(&c.ln()?)
        .sub(&log_a.ln()?);
    inner.mul_int(&BigInt::from(2)).div(&log_a)
}

/// Runs the reduction for one `a > 100`, doubling the precision until the
/// convergent and `c > 0` are certified.
pub fn reduce_parameter(params: &CubicParams) -> Result<ReductionCertificate> {
    reduce_parameter_capped(params, PRECISION_CAP)
}

pub fn reduce_parameter_capped(params: &CubicParams, cap: u32) -> Result<ReductionCertificate> {
    let a = params.a();
    let q_min = upper_bound_x(params)?.hi().mul_pow2(1).ceil();
    let mut prec = initial_precision(&q_min);
    loop {
        if prec > cap {
            return Err(Error::precision(cap, format!("reduction for a = {a}")));
        }
        match attempt(params, &q_min, prec) {
            Ok(cert) => return Ok(cert),
            Err(Error::PrecisionExhausted { .. }) => prec *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn attempt(params: &CubicParams, q_min: &BigInt, prec: u32) -> Result<ReductionCertificate> {
    let a = params.a();
    let ctx = build_context(params, prec)?;
    let ratio = ctx.log_ratio();
    let (p, q) = convergents_until(ratio, q_min)?;
    debug_assert!(p.gcd(&q).is_one());
    let c = Interval::from_int(p.clone(), prec).sub(&ratio.mul_int(&q)).abs();
    let c_lo = c.lo().round(prec, Round::Down);
    if !c_lo.is_positive() {
        return Err(Error::precision(prec, "|p - q θ| not separated from 0"));
    }
    // Print c_lo rounded down, then bound with the printed value so replay
    // can reproduce exactly what was certified.
    let c_text = c_lo.to_decimal(CERT_DIGITS, Round::Down);
    let c_printed = Interval::from_rational(&crate::interval::parse_decimal(&c_text)?, prec);
    if !c_printed.is_positive() {
        return Err(Error::precision(prec, "printed c rounds to zero"));
    }
    let new_upper = reduced_bound(a, &Interval::point(c_printed.lo().clone(), prec), prec)?;
    let lower = lower_bound_x_at(params, BOUNDS_PRECISION.max(prec))?;
    let upper_text = new_upper.hi().to_decimal(CERT_DIGITS, Round::Up);
    let lower_text = lower.lo().to_decimal(CERT_DIGITS, Round::Down);
    let contradiction = decimal_lt(&upper_text, &lower_text)?;
    Ok(ReductionCertificate {
        a: a.clone(),
        prec,
        p,
        q,
        q_min: q_min.clone(),
        c_lo: c_text,
        new_upper: upper_text,
        lower: lower_text,
        contradiction,
    })
}

pub(crate) fn decimal_lt(x: &str, y: &str) -> Result<bool> {
    Ok(crate::interval::parse_decimal(x)? < crate::interval::parse_decimal(y)?)
}
