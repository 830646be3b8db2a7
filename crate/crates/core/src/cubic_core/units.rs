use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::element::{CubicParams, OrderElement};
use crate::embeddings::{
    build_context, precision_ladder, signed_log_abs, Embedding, EmbeddingContext,
};
use crate::error::{Error, Result};
use crate::interval::{Dyadic, Interval};

/// A unit written as `sign · ε^x · δ^y` with `ε = ρ`, `δ = -σ(ρ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawRepr", into = "RawRepr")]
pub struct UnitRepr {
    sign: i8,
    x: i64,
    y: i64,
}

#[derive(Serialize, Deserialize)]
struct RawRepr {
    s: i8,
    x: i64,
    y: i64,
}

impl TryFrom<RawRepr> for UnitRepr {
    type Error = String;
    fn try_from(r: RawRepr) -> std::result::Result<Self, String> {
        match r.s {
            1 | -1 => Ok(UnitRepr::new(r.s, r.x, r.y)),
            s => Err(format!("unit sign must be +1 or -1, got {s}")),
        }
    }
}

impl From<UnitRepr> for RawRepr {
    fn from(u: UnitRepr) -> Self {
        RawRepr {
            s: u.sign,
            x: u.x,
            y: u.y,
        }
    }
}

impl UnitRepr {
    /// Panics unless `sign` is `1` or `-1`.
    pub fn new(sign: i8, x: i64, y: i64) -> Self {
        assert!(sign == 1 || sign == -1, "unit sign must be ±1");
        Self { sign, x, y }
    }

    pub fn one() -> Self {
        Self::new(1, 0, 0)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn x(&self) -> i64 {
        self.x
    }

    pub fn y(&self) -> i64 {
        self.y
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn negate(&self) -> Self {
        Self::new(-self.sign, self.x, self.y)
    }

    /// Exponents of `σ(u)`: `σ(ε) = -δ` and `σ(δ) = ε⁻¹δ⁻¹`, hence
    /// `σ(s ε^x δ^y) = s (-1)^x ε^{-y} δ^{x-y}`.
    pub fn sigma(&self) -> Self {
        let sign = if self.x.rem_euclid(2) == 1 {
            -self.sign
        } else {
            self.sign
        };
        Self::new(sign, -self.y, self.x - self.y)
    }

    pub fn sigma_pow(&self, k: u32) -> Self {
        (0..k % 3).fold(*self, |u, _| u.sigma())
    }
}

impl fmt::Display for UnitRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        write!(f, "{s}ε^{}δ^{}", self.x, self.y)
    }
}

fn signed_pow(base: &OrderElement, k: i64) -> OrderElement {
    if k >= 0 {
        base.pow(k as u64)
    } else {
        base.invert_unit()
            .expect("fundamental units are invertible")
            .pow(k.unsigned_abs())
    }
}

/// Exact coordinates of `sign · ε^x · δ^y`.
pub fn unit_from_exponents(params: &CubicParams, u: &UnitRepr) -> OrderElement {
    let e = signed_pow(&OrderElement::epsilon(params), u.x);
    let d = signed_pow(&OrderElement::delta(params), u.y);
    let prod = &e * &d;
    if u.sign < 0 {
        -prod
    } else {
        prod
    }
}

fn nearest_integer(iv: &Interval) -> Option<i64> {
    let quarter = Dyadic::new(1, -2);
    if iv.width() >= quarter {
        return None;
    }
    iv.mid().add(&Dyadic::new(1, -1)).floor().to_i64()
}

/// Solves for the exponents of a unit at the context's precision only.
fn exponents_at(e: &OrderElement, ctx: &EmbeddingContext) -> Result<Option<UnitRepr>> {
    let first = crate::embeddings::eval_embedding(e, ctx, Embedding::First);
    if first.contains_zero() {
        return Ok(None);
    }
    let l1 = match signed_log_abs(e, ctx, Embedding::First) {
        Ok(v) => v,
        Err(Error::PrecisionExhausted { .. }) => return Ok(None),
        Err(err) => return Err(err),
    };
    let l2 = match signed_log_abs(e, ctx, Embedding::Second) {
        Ok(v) => v,
        Err(Error::PrecisionExhausted { .. }) => return Ok(None),
        Err(err) => return Err(err),
    };
    // Embedding 1: (log ε, log δ). Embedding 2: ε ↦ ρ2 = -δ1 and
    // δ ↦ -ρ3 = 1/(ρ1 δ1), so (log δ, -log ε - log δ).
    let (le, ld) = (ctx.log_eps(), ctx.log_delta());
    let det = le.sqr().add(&le.mul(ld)).add(&ld.sqr()).neg();
    let x_num = l1.mul(&le.add(ld)).neg().sub(&ld.mul(&l2));
    let y_num = le.mul(&l2).sub(&ld.mul(&l1));
    let x = x_num.div(&det)?;
    let y = y_num.div(&det)?;
    let (Some(x), Some(y)) = (nearest_integer(&x), nearest_integer(&y)) else {
        return Ok(None);
    };
    let sign = if first.is_positive() { 1 } else { -1 };
    Ok(Some(UnitRepr::new(sign, x, y)))
}

/// Recovers `(sign, x, y)` with `e = sign · ε^x · δ^y`, climbing the
/// precision ladder from the context's precision, and verifies the answer
/// exactly.
pub fn exponents_from_unit(e: &OrderElement, ctx: &EmbeddingContext) -> Result<UnitRepr> {
    if e.params() != ctx.params() {
        return Err(Error::ParamMismatch {
            left: e.params().to_string(),
            right: ctx.params().to_string(),
        });
    }
    let norm = e.norm();
    if !norm.abs().is_one() {
        return Err(Error::NotAUnit {
            norm: norm.to_string(),
        });
    }
    // Cancellation in c0 + c1 ρ + c2 ρ² costs about as many bits as the
    // coordinates carry; rungs below that cannot succeed.
    let floor = (e.max_coord_bits() as u32).saturating_add(64).max(ctx.precision());
    let mut last_prec = ctx.precision();
    for prec in precision_ladder(floor) {
        last_prec = prec;
        let attempt = if prec == ctx.precision() {
            exponents_at(e, ctx)?
        } else {
            let fresh = build_context(ctx.params(), prec)?;
            exponents_at(e, &fresh)?
        };
        if let Some(repr) = attempt {
            let rebuilt = unit_from_exponents(e.params(), &repr);
            if &rebuilt != e {
                return Err(Error::VerificationFailed(format!(
                    "{e} recovered as {repr}, which evaluates to {rebuilt}"
                )));
            }
            return Ok(repr);
        }
    }
    Err(Error::precision(
        last_prec,
        format!("exponents of {e} not determined"),
    ))
}

/// [`exponents_from_unit`] starting from the bottom of the ladder.
pub fn exponents_from_unit_auto(e: &OrderElement) -> Result<UnitRepr> {
    let ctx = build_context(e.params(), crate::embeddings::PRECISION_START)?;
    exponents_from_unit(e, &ctx)
}
