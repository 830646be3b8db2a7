//! Certified enclosures of the three real embeddings of `Z[ρ]`.
//!
//! Roots are ordered so that `ρ1` is the largest root of `f_a`,
//! `ρ2 = σ(ρ1) = -1 - 1/ρ1` and `ρ3 = σ²(ρ1) = -1/(1 + ρ1)`. Embedding `i`
//! sends `ρ` to `ρi`, so embedding 2 is embedding 1 composed with `σ`.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::cubic_core::{CubicParams, OrderElement};
use crate::error::{Error, Result};
use crate::interval::{Dyadic, Interval, Round};

/// First rung of the precision ladder, in bits.
pub const PRECISION_START: u32 = 96;
/// Last rung of the precision ladder, in bits.
pub const PRECISION_CAP: u32 = 1 << 16;
/// Smallest precision `build_context` accepts.
pub const PRECISION_MIN: u32 = 64;

/// Rungs `96, 192, 384, …` up to the cap, starting at the first rung that
/// is at least `from`.
pub fn precision_ladder(from: u32) -> impl Iterator<Item = u32> {
    std::iter::successors(Some(PRECISION_START), |p| p.checked_mul(2))
        .take_while(|p| *p <= PRECISION_CAP)
        .skip_while(move |p| *p < from)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Embedding {
    First,
    Second,
    Third,
}

impl Embedding {
    pub const ALL: [Embedding; 3] = [Embedding::First, Embedding::Second, Embedding::Third];

    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            1 => Some(Embedding::First),
            2 => Some(Embedding::Second),
            3 => Some(Embedding::Third),
            _ => None,
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddingContext {
    params: CubicParams,
    precision: u32,
    rho: [Interval; 3],
    log_eps: Interval,
    log_delta: Interval,
    log_ratio: Interval,
}

impl EmbeddingContext {
    pub fn params(&self) -> &CubicParams {
        &self.params
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn rho(&self, i: Embedding) -> &Interval {
        &self.rho[i.slot()]
    }

    /// `log ε = log ρ1`.
    pub fn log_eps(&self) -> &Interval {
        &self.log_eps
    }

    /// `log δ = log(1 + 1/ρ1)`.
    pub fn log_delta(&self) -> &Interval {
        &self.log_delta
    }

    /// `(log δ) / (log ε)`.
    pub fn log_ratio(&self) -> &Interval {
        &self.log_ratio
    }

    /// Rebuilds at twice the precision and intersects with `self`, so every
    /// enclosure of the result lies inside the corresponding one here.
    pub fn refine(&self) -> Result<Self> {
        let next = self
            .precision
            .checked_mul(2)
            .filter(|p| *p <= PRECISION_CAP)
            .ok_or_else(|| Error::precision(self.precision, "cannot refine past the cap"))?;
        let fresh = build_context(&self.params, next)?;
        let meet = |old: &Interval, new: &Interval| {
            old.intersect(new).map(|iv| iv.with_prec(next)).ok_or_else(|| {
                Error::VerificationFailed(format!(
                    "disjoint enclosures for a = {} at {} and {next} bits",
                    self.params, self.precision
                ))
            })
        };
        Ok(Self {
            params: self.params.clone(),
            precision: next,
            rho: [
                meet(&self.rho[0], &fresh.rho[0])?,
                meet(&self.rho[1], &fresh.rho[1])?,
                meet(&self.rho[2], &fresh.rho[2])?,
            ],
            log_eps: meet(&self.log_eps, &fresh.log_eps)?,
            log_delta: meet(&self.log_delta, &fresh.log_delta)?,
            log_ratio: meet(&self.log_ratio, &fresh.log_ratio)?,
        })
    }

    /// `log|ε^x δ^y|` in embedding 1, from the exponents alone.
    pub fn log_abs_from_exponents(&self, x: i64, y: i64) -> Interval {
        self.log_eps
            .mul_int(&BigInt::from(x))
            .add(&self.log_delta.mul_int(&BigInt::from(y)))
    }
}

/// Evaluates `f_a` exactly at a dyadic point.
fn eval_f(a: &BigInt, x: &Dyadic) -> Dyadic {
    let a_d = Dyadic::from_int(a.clone());
    let a3 = Dyadic::from_int(a + 3);
    x.sub(&a_d).mul(x).sub(&a3).mul(x).sub(&Dyadic::one())
}

/// Integer `k` with `f(k) < 0 < f(k+1)` and `ρ1 ∈ (k, k+1)`.
fn integer_bracket(params: &CubicParams) -> BigInt {
    let a = params.a();
    if *a >= BigInt::from(2) {
        return a + 1;
    }
    // Small a: walk down from the Cauchy bound to the last sign change. f is
    // positive beyond ρ1 and the middle root lies in (-1, 0) while f(0) = -1,
    // so the first negative value met is in (middle root, ρ1).
    let mut k = a.abs() + 4;
    while params.eval_min_poly(&k).is_positive() {
        k -= 1;
    }
    k
}

/// Enclosure of `ρ1` by interval Newton started from an integer bracket.
fn isolate_rho1(params: &CubicParams, prec: u32) -> Result<Interval> {
    let a = params.a();
    let k = integer_bracket(params);
    let mut x = Interval::new(Dyadic::from_int(k.clone()), Dyadic::from_int(k + 1), prec);
    let two_a = Interval::from_int(a * 2, prec);
    let a3 = Interval::from_int(a + 3, prec);
    let three = BigInt::from(3);
    let target = |iv: &Interval| iv.lo().mag_bits() - prec as i64 + 2;

    for _ in 0..(4 * prec as usize + 64) {
        let m = x.mid().round(prec + 4, Round::Down);
        let m = if x.contains(&m) { m } else { x.mid() };
        let fm = eval_f(a, &m);
        // f'(X) = X (3X - 2a) - (a + 3)
        let deriv = x.mul(&x.mul_int(&three).sub(&two_a)).sub(&a3);
        let next = if deriv.contains_zero() {
            if fm.is_negative() {
                Interval::new(m, x.hi().clone(), prec)
            } else {
                Interval::new(x.lo().clone(), m, prec)
            }
        } else {
            let fm_iv = Interval::point(fm, prec).with_prec(prec);
            let step = fm_iv.div(&deriv)?;
            let newton = Interval::point(m, prec).sub(&step);
            x.intersect(&newton).ok_or_else(|| {
                Error::VerificationFailed(format!("interval Newton lost the root of f_{a}"))
            })?
        };
        let progressed = next.width() < x.width();
        x = next;
        if !progressed || x.width().mag_bits() <= target(&x) {
            break;
        }
    }

    // Exact sign change at the final endpoints.
    if !(eval_f(a, x.lo()).is_negative() && eval_f(a, x.hi()).is_positive()) {
        return Err(Error::precision(prec, format!("root bracket of f_{a} not certified")));
    }
    if x.width().mag_bits() > x.lo().mag_bits() + 8 - prec as i64 {
        return Err(Error::precision(prec, format!("root of f_{a} not refined")));
    }
    Ok(x)
}

/// Builds certified enclosures of `ρ1, ρ2, ρ3, log ε, log δ` at `precision`
/// bits.
pub fn build_context(params: &CubicParams, precision: u32) -> Result<EmbeddingContext> {
    if !params.is_normalized() {
        return Err(Error::Domain(format!(
            "parameter a = {params} is not normalized (need a >= -1)"
        )));
    }
    if precision < PRECISION_MIN {
        return Err(Error::Domain(format!(
            "precision {precision} below minimum {PRECISION_MIN}"
        )));
    }
    if precision > PRECISION_CAP {
        return Err(Error::precision(precision, "precision above the ladder cap"));
    }
    let rho1 = isolate_rho1(params, precision)?;
    let one = Interval::from_int(1, precision);
    let inv = rho1.recip()?;
    let rho2 = one.add(&inv).neg();
    let rho3 = one.add(&rho1).recip()?.neg();
    let log_eps = rho1.ln()?;
    let log_delta = inv.ln1p()?;
    let log_ratio = log_delta.div(&log_eps)?;
    Ok(EmbeddingContext {
        params: params.clone(),
        precision,
        rho: [rho1, rho2, rho3],
        log_eps,
        log_delta,
        log_ratio,
    })
}

/// Enclosure of `e` under embedding `i`.
pub fn eval_embedding(e: &OrderElement, ctx: &EmbeddingContext, i: Embedding) -> Interval {
    let p = ctx.precision;
    let r = ctx.rho(i);
    let [c0, c1, c2] = e.coords();
    let inner = Interval::from_int(c1.clone(), p).add(&r.mul_int(c2));
    Interval::from_int(c0.clone(), p).add(&r.mul(&inner))
}

/// Enclosure of `log|e^{(i)}|`.
pub fn signed_log_abs(e: &OrderElement, ctx: &EmbeddingContext, i: Embedding) -> Result<Interval> {
    if e.is_zero() {
        return Err(Error::Domain("logarithm of zero".into()));
    }
    let v = eval_embedding(e, ctx, i).abs();
    if v.contains_zero() {
        return Err(Error::precision(
            ctx.precision,
            format!("embedding {i:?} of {e} not separated from zero"),
        ));
    }
    v.ln()
}
