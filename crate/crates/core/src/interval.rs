//! Arbitrary-precision interval arithmetic over dyadic rationals.
//!
//! A [`Dyadic`] is an exact value `mant · 2^exp`. Every rounding is directed
//! (`floor` for lower endpoints, `ceil` for upper endpoints), so an
//! [`Interval`] produced by any operation here encloses the exact result of
//! the same operation applied to any points of the operand intervals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// Exact dyadic rational `mant · 2^exp`.
#[derive(Clone, Debug, Default)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: impl Into<BigInt>, exp: i64) -> Self {
        Self {
            mant: mant.into(),
            exp,
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n, 0)
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::new(BigInt::from(m) * sign, e)
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// `e` with `2^(e-1) <= |x| < 2^e`; zero maps to `i64::MIN`.
    pub fn mag_bits(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    pub fn abs(&self) -> Self {
        Self::new(self.mant.abs(), self.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self::new(self.mant.clone(), self.exp + k)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let m = (&self.mant << (self.exp - e) as usize) + (&other.mant << (other.exp - e) as usize);
        Self::new(m, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.mant, self.exp)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Rounds to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = (bits - prec as u64) as usize;
        // `>>` on BigInt rounds toward negative infinity.
        let m = match dir {
            Round::Down => &self.mant >> shift,
            Round::Up => -((-&self.mant) >> shift),
        };
        Self::new(m, self.exp + shift as i64)
    }

    /// Quotient rounded to `prec` bits in direction `dir`.
    pub fn div(&self, other: &Self, prec: u32, dir: Round) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let sa = self.mant.bits() as i64;
        let sb = other.mant.bits() as i64;
        let shift = (prec as i64 + 2 + sb - sa).max(0);
        let num = &self.mant << shift as usize;
        let (q, r) = num.div_mod_floor(&other.mant);
        let q = match dir {
            Round::Down => q,
            Round::Up if r.is_zero() => q,
            Round::Up => q + 1,
        };
        Self::new(q, self.exp - other.exp - shift).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            &self.mant >> (-self.exp) as usize
        }
    }

    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, Round::Down);
        let m = r.mant.to_f64().unwrap_or(f64::NAN);
        if r.exp > i32::MAX as i64 {
            return m.signum() * f64::INFINITY;
        }
        if r.exp < i32::MIN as i64 {
            return 0.0;
        }
        m * 2f64.powi(r.exp as i32)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Scientific decimal string with `digits` significant digits, rounded
    /// in direction `dir` (so the printed value is a one-sided bound).
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1) as i64;
        let r = self.to_rational();
        // Decimal exponent estimate from the binary magnitude; corrected below.
        let mut k = ((self.mag_bits() as f64 - 1.0) * std::f64::consts::LOG10_2).floor() as i64
            - (digits - 1);
        loop {
            let scaled = scale_pow10(&r, -k);
            let n = match dir {
                Round::Down => scaled.floor().to_integer(),
                Round::Up => scaled.ceil().to_integer(),
            };
            let len = n.abs().to_string().len() as i64;
            if len > digits {
                k += len - digits;
                continue;
            }
            if len < digits && !n.is_zero() {
                k -= digits - len;
                continue;
            }
            return format_sci(&n, k);
        }
    }
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

fn scale_pow10(r: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        r * BigRational::from_integer(pow10(k as u32))
    } else {
        r / BigRational::from_integer(pow10((-k) as u32))
    }
}

fn format_sci(n: &BigInt, k: i64) -> String {
    let sign = if n.is_negative() { "-" } else { "" };
    let ds = n.abs().to_string();
    let exp10 = k + ds.len() as i64 - 1;
    let (head, tail) = ds.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exp10}")
    } else {
        format!("{sign}{head}.{tail}e{exp10}")
    }
}

/// Parses a decimal literal (`-12.5e-3`, `7`, `1.0E+4`) into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
    let s = s.trim();
    let (body, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let digits = digits / 10;
    let mut r = scale_pow10(&BigRational::from_integer(digits), exp - frac_part.len() as i64);
    if neg {
        r = -r;
    }
    Ok(r)
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if self.is_zero() {
            return Ordering::Equal;
        }
        // Same sign: compare magnitudes first to avoid huge shifts.
        let (ma, mb) = (self.mag_bits(), other.mag_bits());
        if ma != mb {
            let ord = ma.cmp(&mb);
            return if self.is_negative() { ord.reverse() } else { ord };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20, Round::Down))
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints and a working precision.
#[derive(Clone, Debug)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Self { lo, hi, prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Self::new(x.clone(), x, prec)
    }

    /// Exact integer, not rounded: integers stay points regardless of size.
    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        Self::point(Dyadic::from_int(n), prec)
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, prec: u32) -> Self {
        let n = Dyadic::from_int(num);
        let d = Dyadic::from_int(den);
        Self::new(n.div(&d, prec, Round::Down), n.div(&d, prec, Round::Up), prec)
    }

    /// Enclosure of an exact rational.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::from_ratio(r.numer().clone(), r.denom().clone(), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.round_out()
    }

    fn round_out(self) -> Self {
        let prec = self.prec;
        Self {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Certified `self < other`: the intervals are disjoint and ordered.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_gt(&self, other: &Self) -> bool {
        other.certainly_lt(self)
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| Self::new(lo, hi, self.prec.max(other.prec)))
    }

    /// Enclosure of `max(x, y)` for `x` in `self`, `y` in `other`.
    pub fn max(&self, other: &Self) -> Self {
        Self::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.prec.max(other.prec),
        )
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        // to_f64 truncates toward zero on the 60-bit rounding, then the f64
        // conversion itself is round-to-nearest; widen by one ulp each way.
        let lo = self.lo.to_f64();
        let hi = self.hi.to_f64();
        (next_down(lo), next_up(hi))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.hi.neg(), self.lo.neg(), self.prec)
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = self.lo.abs().max(self.hi.clone());
            Self::new(Dyadic::zero(), m, self.prec)
        } else if self.hi.is_negative() || self.hi.is_zero() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.lo.add(&other.lo), self.hi.add(&other.hi), self.prec.max(other.prec))
            .round_out()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.lo.sub(&other.hi), self.hi.sub(&other.lo), self.prec.max(other.prec))
            .round_out()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if !self.lo.is_negative() && !other.lo.is_negative() {
            return Self::new(self.lo.mul(&other.lo), self.hi.mul(&other.hi), prec).round_out();
        }
        let cands = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = cands.iter().min().cloned().unwrap_or_default();
        let hi = cands.iter().max().cloned().unwrap_or_default();
        Self::new(lo, hi, prec).round_out()
    }

    pub fn sqr(&self) -> Self {
        let a = self.abs();
        Self::new(a.lo.mul(&a.lo), a.hi.mul(&a.hi), self.prec).round_out()
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        self.mul(&Self::from_int(k.clone(), self.prec))
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self::new(self.lo.mul_pow2(k), self.hi.mul_pow2(k), self.prec)
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, k: &BigInt) -> Self {
        assert!(!k.is_zero(), "interval division by zero integer");
        let d = Dyadic::from_int(k.clone());
        let p = self.prec;
        if k.is_positive() {
            Self::new(self.lo.div(&d, p, Round::Down), self.hi.div(&d, p, Round::Up), p)
        } else {
            Self::new(self.hi.div(&d, p, Round::Down), self.lo.div(&d, p, Round::Up), p)
        }
    }

    pub fn recip(&self) -> Result<Self> {
        Self::from_int(1, self.prec).div(self)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::precision(
                other.prec,
                "interval divisor contains zero",
            ));
        }
        let prec = self.prec.max(other.prec);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(x, y)| x.div(y, prec, Round::Down))
            .min()
            .unwrap_or_default();
        let hi = pairs
            .iter()
            .map(|(x, y)| x.div(y, prec, Round::Up))
            .max()
            .unwrap_or_default();
        Ok(Self::new(lo, hi, prec))
    }

    /// Enclosure of `ln(x)` over the interval; requires `lo > 0`.
    pub fn ln(&self) -> Result<Self> {
        if !self.lo.is_positive() {
            return Err(Error::precision(
                self.prec,
                "logarithm of an interval reaching zero or below",
            ));
        }
        let lo = ln_point(&self.lo, self.prec).lo;
        let hi = ln_point(&self.hi, self.prec).hi;
        Ok(Self::new(lo, hi, self.prec))
    }

    /// Enclosure of `ln(1 + t)`; accurate relative to `t` when `t` is small.
    pub fn ln1p(&self) -> Result<Self> {
        let minus_one = Dyadic::from_int(-1);
        if self.lo <= minus_one {
            return Err(Error::precision(self.prec, "ln1p argument reaches -1"));
        }
        let lo = ln1p_point(&self.lo, self.prec).lo;
        let hi = ln1p_point(&self.hi, self.prec).hi;
        Ok(Self::new(lo, hi, self.prec))
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound on `|x|` over the interval (zero if it straddles zero).
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Relative width `(hi - lo) / mig`, as an upper-rounded dyadic; `None`
    /// when the interval touches zero.
    pub fn rel_width(&self) -> Option<Dyadic> {
        let mig = self.mig();
        (!mig.is_zero()).then(|| self.width().div(&mig, 32, Round::Up))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_decimal(18, Round::Down),
            self.hi.to_decimal(18, Round::Up)
        )
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let b = x.to_bits();
    f64::from_bits(if x > 0.0 { b + 1 } else { b - 1 })
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

const GUARD_BITS: u32 = 24;

/// `2·atanh(u) = ln((1+u)/(1-u))` for an interval `u` with `|u| <= 1/2`.
///
/// Partial sums of `Σ u^(2j+1)/(2j+1)` are carried as intervals; the tail
/// after `J` terms is bounded by `|u|^(2J+1) / ((2J+1)(1-u^2)) <= 2|u|^(2J+1)`.
fn two_atanh(u: &Interval, work: u32) -> Interval {
    if u.lo.is_zero() && u.hi.is_zero() {
        return Interval::point(Dyadic::zero(), work);
    }
    let umax = u.mag();
    debug_assert!(umax <= Dyadic::new(1, -1));
    let umax2 = umax.mul(&umax).round(work, Round::Up);
    // stop once |u|^(2J+1) < 2^-(work+2) · |u|
    let target = umax.mag_bits() - work as i64 - 2;

    let u2 = u.sqr();
    let mut term = u.clone();
    let mut sum = u.clone();
    let mut pow_bound = umax.clone();
    let mut j: u64 = 1;
    loop {
        pow_bound = pow_bound.mul(&umax2).round(work, Round::Up);
        term = term.mul(&u2);
        if pow_bound.mag_bits() < target {
            break;
        }
        sum = sum.add(&term.div_int(&BigInt::from(2 * j + 1)));
        j += 1;
    }
    let tail = pow_bound.mul_pow2(1);
    let slack = Interval::new(tail.neg(), tail, work);
    sum.add(&slack).mul_pow2(1)
}

/// Cached enclosures of `ln 2`, keyed by working precision.
fn ln2(work: u32) -> Interval {
    static CACHE: OnceLock<RwLock<HashMap<u32, Interval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = cache.read().expect("ln2 cache poisoned").get(&work) {
        return v.clone();
    }
    let third = Interval::from_ratio(1, 3, work + GUARD_BITS);
    let v = two_atanh(&third, work + GUARD_BITS).with_prec(work);
    cache
        .write()
        .expect("ln2 cache poisoned")
        .insert(work, v.clone());
    v
}

/// `ln(1 + t)` for a point `t` in `[-1/4, 1/2]`, through `u = t / (2 + t)`.
fn ln1p_small(t: &Dyadic, work: u32) -> Interval {
    let t_iv = Interval::point(t.clone(), work);
    let denom = Interval::point(t.add(&Dyadic::from_int(2)), work);
    let u = t_iv.div(&denom).expect("2 + t > 0");
    two_atanh(&u, work)
}

fn ln1p_point(t: &Dyadic, prec: u32) -> Interval {
    let work = prec + GUARD_BITS;
    if Dyadic::new(-1, -2) <= *t && *t <= Dyadic::new(1, -1) {
        ln1p_small(t, work).with_prec(prec)
    } else {
        ln_point(&t.add(&Dyadic::one()), prec)
    }
}

fn ln_point(x: &Dyadic, prec: u32) -> Interval {
    debug_assert!(x.is_positive());
    let work = prec + GUARD_BITS;
    // x = y · 2^k with y in [3/4, 3/2)
    let mut k = x.mag_bits() - 1;
    let mut y = x.mul_pow2(-k);
    if y >= Dyadic::new(3, -1) {
        k += 1;
        y = y.mul_pow2(-1);
    }
    let t = y.sub(&Dyadic::one());
    let mut r = ln1p_small(&t, work);
    if k != 0 {
        r = r.add(&ln2(work).mul_int(&BigInt::from(k)));
    }
    r.with_prec(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: f64, prec: u32) -> Interval {
        Interval::point(Dyadic::from_f64(x), prec)
    }

    #[test]
    fn shift_right_floors_negative_values() {
        assert_eq!(BigInt::from(-5) >> 1usize, BigInt::from(-3));
        assert_eq!(Dyadic::new(-5, 0).round(2, Round::Down), Dyadic::new(-6, 0));
        assert_eq!(Dyadic::new(-5, 0).round(2, Round::Up), Dyadic::new(-4, 0));
        assert_eq!(Dyadic::new(5, 0).round(2, Round::Up), Dyadic::new(6, 0));
    }

    #[test]
    fn directed_division_brackets_exact_quotient() {
        for (n, d) in [(1i64, 3i64), (-1, 3), (22, -7), (1 << 40, 3)] {
            let q = Interval::from_ratio(n, d, 64);
            let exact = BigRational::new(BigInt::from(n), BigInt::from(d));
            assert!(q.contains_rational(&exact), "{n}/{d}");
            assert!(q.width().mag_bits() <= q.mid().mag_bits() - 62);
        }
    }

    #[test]
    fn ordering_and_equality_ignore_representation() {
        assert_eq!(Dyadic::new(4, 0), Dyadic::new(1, 2));
        assert!(Dyadic::new(-3, 10) < Dyadic::new(1, -100));
        assert!(Dyadic::new(3, -1) > Dyadic::new(1, 0));
    }

    #[test]
    fn ln_of_small_values_matches_f64() {
        for x in [0.5, 0.75, 1.0, 1.4, 2.0, 3.0, 10.0, 1e-30, 1e30, 101.0, 148000.0] {
            let r = iv(x, 128).ln().unwrap();
            let approx = x.ln();
            let (lo, hi) = r.to_f64_pair();
            assert!(lo <= approx + 1e-15 * approx.abs().max(1.0));
            assert!(approx - 1e-15 * approx.abs().max(1.0) <= hi, "x = {x}: {r}");
            if x != 1.0 {
                assert!(r.width().mag_bits() < r.mid().mag_bits() - 120);
            }
        }
    }

    #[test]
    fn ln_of_one_is_exactly_zero() {
        let r = Interval::from_int(1, 96).ln().unwrap();
        assert!(r.lo().is_zero() && r.hi().is_zero());
    }

    #[test]
    fn ln2_digits() {
        // ln 2 = 0.693147180559945309417232121458176568075500134360255254120680...
        let v = ln2(200);
        let digits = parse_decimal("0.69314718055994530941723212145817656807550013436025525412068").unwrap();
        let tol = parse_decimal("1e-59").unwrap();
        assert!(v.lo().to_rational() <= &digits + &tol);
        assert!(&digits - &tol <= v.hi().to_rational());
        assert!(v.width().mag_bits() < -190);
    }

    #[test]
    fn ln1p_keeps_relative_accuracy() {
        let t = Interval::from_ratio(1, 1_000_003, 128);
        let r = t.ln1p().unwrap();
        assert!(r.is_positive());
        let rel = r.rel_width().unwrap();
        assert!(rel.mag_bits() < -115, "relative width 2^{}", rel.mag_bits());
    }

    #[test]
    fn monotone_refinement_of_ln() {
        let x = Interval::from_ratio(1_234_567, 1000, 400);
        let coarse = x.clone().with_prec(96).ln().unwrap();
        let fine = x.ln().unwrap();
        assert!(fine.is_subset_of(&coarse));
    }

    #[test]
    fn interval_mul_and_div_enclose() {
        let a = Interval::new(Dyadic::from_f64(-2.0), Dyadic::from_f64(3.0), 64);
        let b = Interval::new(Dyadic::from_f64(-5.0), Dyadic::from_f64(-1.0), 64);
        let p = a.mul(&b);
        assert_eq!(p.lo().to_f64(), -15.0);
        assert_eq!(p.hi().to_f64(), 10.0);
        let q = a.div(&b).unwrap();
        assert_eq!(q.lo().to_f64(), -3.0);
        assert_eq!(q.hi().to_f64(), 2.0);
        assert!(b.div(&a).is_err());
    }

    #[test]
    fn decimal_strings_are_one_sided() {
        let third = Interval::from_ratio(1, 3, 128);
        let lo = parse_decimal(&third.lo().to_decimal(10, Round::Down)).unwrap();
        let hi = parse_decimal(&third.hi().to_decimal(10, Round::Up)).unwrap();
        assert!(lo <= third.lo().to_rational());
        assert!(hi >= third.hi().to_rational());
        assert_eq!(third.lo().to_decimal(10, Round::Down), "3.333333333e-1");
        assert_eq!(third.hi().to_decimal(10, Round::Up), "3.333333334e-1");
        assert_eq!(Dyadic::from_int(-250).to_decimal(3, Round::Down), "-2.50e2");
        assert_eq!(Dyadic::from_int(7).to_decimal(1, Round::Up), "7e0");
    }

    #[test]
    fn parse_decimal_forms() {
        let r = |s| parse_decimal(s).unwrap();
        assert_eq!(r("12.5e-1"), BigRational::new(125.into(), 100.into()));
        assert_eq!(r("-7"), BigRational::from_integer((-7).into()));
        assert_eq!(r("1.0E+4"), BigRational::from_integer(10_000.into()));
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal("").is_err());
    }
}
