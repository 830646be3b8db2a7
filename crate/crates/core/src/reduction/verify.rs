//! Replay of reduction certificates from their recorded fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{reduced_bound, ReductionCertificate};
use crate::bounds::{lower_bound_x_at, upper_bound_x};
use crate::embeddings::{build_context, PRECISION_CAP, PRECISION_MIN};
use crate::error::{Error, Result};
use crate::interval::{parse_decimal, Interval};

/// All convergents of a rational by the Euclidean algorithm.
fn euclid_convergents(r: &BigRational) -> Vec<(BigInt, BigInt)> {
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::new();
    while !den.is_zero() {
        let (quot, rem) = num.div_mod_floor(&den);
        let p_next = &quot * &p + &p_prev;
        let q_next = &quot * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push((p.clone(), q.clone()));
        num = std::mem::replace(&mut den, rem);
    }
    out
}

fn fail(cert: &ReductionCertificate, what: impl std::fmt::Display) -> Error {
    Error::VerificationFailed(format!("a = {}: {what}", cert.a))
}

/// Re-derives every claim in `cert` from `(a, prec, p, q)` and the recorded
/// decimal bounds. Succeeds only if the certificate proves a contradiction.
pub fn verify_certificate(cert: &ReductionCertificate) -> Result<()> {
    let params = cert.params();
    if cert.a <= BigInt::from(100) {
        return Err(fail(cert, "parameter must exceed 100"));
    }
    if cert.prec < PRECISION_MIN || cert.prec > PRECISION_CAP {
        return Err(fail(cert, format!("precision {} outside the ladder", cert.prec)));
    }
    let q_min = upper_bound_x(&params)?.hi().mul_pow2(1).ceil();
    if q_min != cert.q_min {
        return Err(fail(cert, format!("q_min is {q_min}, certificate says {}", cert.q_min)));
    }
    if !cert.p.gcd(&cert.q).is_one() {
        return Err(fail(cert, "p and q are not coprime"));
    }

    let ctx = build_context(&params, cert.prec)?;
    let ratio = ctx.log_ratio();
    // p/q must be a convergent of both endpoints with further quotients
    // after it; the set of reals sharing those quotients is an interval,
    // so it then is a convergent of everything in between.
    let lo_cf = euclid_convergents(&ratio.lo().to_rational());
    let hi_cf = euclid_convergents(&ratio.hi().to_rational());
    let target = (cert.p.clone(), cert.q.clone());
    let k = lo_cf
        .iter()
        .position(|c| c == &target)
        .ok_or_else(|| fail(cert, "p/q is not a convergent of the lower endpoint"))?;
    if k + 1 >= lo_cf.len() || k + 1 >= hi_cf.len() || lo_cf[..=k] != hi_cf[..=k] {
        return Err(fail(cert, "p/q is not a common convergent of the ratio enclosure"));
    }
    let prev_q = if k == 0 { BigInt::zero() } else { lo_cf[k - 1].1.clone() };
    if !(prev_q < cert.q_min && cert.q_min <= cert.q) {
        return Err(fail(cert, "q is not the first convergent denominator reaching q_min"));
    }

    let c = Interval::from_int(cert.p.clone(), cert.prec)
        .sub(&ratio.mul_int(&cert.q))
        .abs();
    let c_rec = parse_decimal(&cert.c_lo)?;
    if !c_rec.is_positive() || c_rec > c.lo().to_rational() {
        return Err(fail(cert, format!("c_lo {} not below the enclosure {c}", cert.c_lo)));
    }

    let c_point = Interval::point(Interval::from_rational(&c_rec, cert.prec).lo().clone(), cert.prec);
    let upper = reduced_bound(&cert.a, &c_point, cert.prec)?;
    let upper_rec = parse_decimal(&cert.new_upper)?;
    if upper.hi().to_rational() > upper_rec {
        return Err(fail(cert, format!("new_upper {} below recomputed {upper}", cert.new_upper)));
    }

    let lower = lower_bound_x_at(&params, cert.prec.max(crate::bounds::BOUNDS_PRECISION))?;
    let lower_rec = parse_decimal(&cert.lower)?;
    if lower_rec > lower.lo().to_rational() {
        return Err(fail(cert, format!("lower {} above recomputed {lower}", cert.lower)));
    }

    let contradiction = upper_rec < lower_rec;
    if contradiction != cert.contradiction {
        return Err(fail(cert, "contradiction flag does not match the recorded bounds"));
    }
    if !contradiction {
        return Err(fail(cert, "bounds do not contradict"));
    }
    Ok(())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ReplayReport {
    pub lines: usize,
    pub verified: usize,
    /// `(line number, reason)`, 1-based.
    pub failures: Vec<(usize, String)>,
}

impl ReplayReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.verified > 0
    }
}

/// Replays every line of a JSONL certificate file.
pub fn verify_file(path: impl AsRef<Path>) -> Result<ReplayReport> {
    let reader = BufReader::new(File::open(path.as_ref())?);
    let mut report = ReplayReport::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        report.lines += 1;
        let outcome = serde_json::from_str::<ReductionCertificate>(&line)
            .map_err(Error::from)
            .and_then(|c| verify_certificate(&c));
        match outcome {
            Ok(()) => report.verified += 1,
            Err(e) => report.failures.push((i + 1, e.to_string())),
        }
    }
    Ok(report)
}
