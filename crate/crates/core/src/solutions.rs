//! Solutions `(u1, u2, n)` of `u1 + u2 = n`, their order-12 equivalence
//! action and canonical class representatives.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::cubic_core::{exponents_from_unit, unit_from_exponents, CubicParams, OrderElement, UnitRepr};
use crate::embeddings::{precision_ladder, EmbeddingContext};
use crate::error::{Error, Result};
use crate::interval::Interval;

/// One side of a solution: the unit and its exponent form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Unit {
    elem: OrderElement,
    repr: UnitRepr,
}

impl Unit {
    pub fn from_repr(params: &CubicParams, repr: UnitRepr) -> Self {
        Self {
            elem: unit_from_exponents(params, &repr),
            repr,
        }
    }

    pub fn elem(&self) -> &OrderElement {
        &self.elem
    }

    pub fn repr(&self) -> &UnitRepr {
        &self.repr
    }

    fn neg(&self) -> Self {
        Self {
            elem: -&self.elem,
            repr: self.repr.negate(),
        }
    }

    fn sigma(&self) -> Self {
        Self {
            elem: self.elem.apply_sigma(),
            repr: self.repr.sigma(),
        }
    }
}

/// A triple `(u1, u2, n)`. Built through [`SolutionTriple::new`] it always
/// satisfies `u1 + u2 = n` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolutionTriple {
    params: CubicParams,
    n: BigInt,
    u1: Unit,
    u2: Unit,
}

impl SolutionTriple {
    /// Builds the triple from exponent forms and checks `u1 + u2 = n`.
    pub fn new(params: &CubicParams, r1: UnitRepr, r2: UnitRepr, n: impl Into<BigInt>) -> Result<Self> {
        let t = Self::from_reprs_unchecked(params, r1, r2, n);
        t.verify()?;
        Ok(t)
    }

    /// Builds from exact elements, recovering their exponents.
    pub fn from_elements(u1: &OrderElement, u2: &OrderElement, ctx: &EmbeddingContext) -> Result<Self> {
        let sum = u1.checked_add(u2)?;
        let n = sum
            .as_integer()
            .cloned()
            .ok_or_else(|| Error::VerificationFailed(format!("{u1} + {u2} is not a rational integer")))?;
        let r1 = exponents_from_unit(u1, ctx)?;
        let r2 = exponents_from_unit(u2, ctx)?;
        Ok(Self {
            params: u1.params().clone(),
            n,
            u1: Unit { elem: u1.clone(), repr: r1 },
            u2: Unit { elem: u2.clone(), repr: r2 },
        })
    }

    /// Skips the `u1 + u2 = n` check. The symmetry operations are still
    /// well defined, which is all [`good_representative`] needs.
    pub fn from_reprs_unchecked(params: &CubicParams, r1: UnitRepr, r2: UnitRepr, n: impl Into<BigInt>) -> Self {
        Self {
            params: params.clone(),
            n: n.into(),
            u1: Unit::from_repr(params, r1),
            u2: Unit::from_repr(params, r2),
        }
    }

    /// Exact re-check of the invariants.
    pub fn verify(&self) -> Result<()> {
        let sum = self.u1.elem.checked_add(&self.u2.elem)?;
        if sum.as_integer() != Some(&self.n) {
            return Err(Error::VerificationFailed(format!(
                "{} + {} = {sum}, expected {}",
                self.u1.elem, self.u2.elem, self.n
            )));
        }
        for u in [&self.u1, &self.u2] {
            if !u.elem.is_unit() {
                return Err(Error::NotAUnit {
                    norm: u.elem.norm().to_string(),
                });
            }
            if unit_from_exponents(&self.params, &u.repr) != u.elem {
                return Err(Error::VerificationFailed(format!(
                    "{} does not match {}",
                    u.repr, u.elem
                )));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> &CubicParams {
        &self.params
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn u1(&self) -> &Unit {
        &self.u1
    }

    pub fn u2(&self) -> &Unit {
        &self.u2
    }

    /// `max(|x1|, |y1|, |x2|, |y2|)`.
    pub fn max_exponent(&self) -> i64 {
        self.u1.repr.max_abs_exponent().max(self.u2.repr.max_abs_exponent())
    }

    pub fn negate(&self) -> Self {
        Self {
            params: self.params.clone(),
            n: -&self.n,
            u1: self.u1.neg(),
            u2: self.u2.neg(),
        }
    }

    pub fn swap(&self) -> Self {
        Self {
            params: self.params.clone(),
            n: self.n.clone(),
            u1: self.u2.clone(),
            u2: self.u1.clone(),
        }
    }

    pub fn sigma(&self) -> Self {
        Self {
            params: self.params.clone(),
            n: self.n.clone(),
            u1: self.u1.sigma(),
            u2: self.u2.sigma(),
        }
    }

    /// Ordering key: `n > 0` first, then small `|n|`, then exponents.
    pub fn canonical_key(&self) -> (i8, BigInt, i64, i64, i8, i64, i64, i8) {
        let sgn = match self.n.sign() {
            Sign::Plus => -1,
            Sign::NoSign => 0,
            Sign::Minus => 1,
        };
        let (r1, r2) = (self.u1.repr, self.u2.repr);
        (
            sgn,
            self.n.abs(),
            r1.x(),
            r1.y(),
            r1.sign(),
            r2.x(),
            r2.y(),
            r2.sign(),
        )
    }
}

impl fmt::Display for SolutionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={}: ({}) + ({}) = {}  [{} ; {}]",
            self.params, self.u1.elem, self.u2.elem, self.n, self.u1.repr, self.u2.repr
        )
    }
}

#[derive(Serialize, Deserialize)]
struct UnitJson {
    c: [String; 3],
    s: i8,
    x: i64,
    y: i64,
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    #[serde(with = "crate::json::int")]
    a: BigInt,
    #[serde(with = "crate::json::int")]
    n: BigInt,
    u1: UnitJson,
    u2: UnitJson,
}

impl From<&Unit> for UnitJson {
    fn from(u: &Unit) -> Self {
        Self {
            c: u.elem.coords().clone().map(|c| c.to_string()),
            s: u.repr.sign(),
            x: u.repr.x(),
            y: u.repr.y(),
        }
    }
}

impl Serialize for SolutionTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TripleJson {
            a: self.params.a().clone(),
            n: self.n.clone(),
            u1: (&self.u1).into(),
            u2: (&self.u2).into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SolutionTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TripleJson::deserialize(d)?;
        let params = CubicParams::new(raw.a);
        let unit = |u: &UnitJson| -> std::result::Result<Unit, D::Error> {
            if u.s != 1 && u.s != -1 {
                return Err(D::Error::custom("unit sign must be +1 or -1"));
            }
            let unit = Unit::from_repr(&params, UnitRepr::new(u.s, u.x, u.y));
            let coords: Vec<String> = unit.elem.coords().iter().map(|c| c.to_string()).collect();
            if coords != u.c {
                return Err(D::Error::custom(format!(
                    "coordinates {:?} do not match exponents {}",
                    u.c, unit.repr
                )));
            }
            Ok(unit)
        };
        let t = SolutionTriple {
            u1: unit(&raw.u1)?,
            u2: unit(&raw.u2)?,
            params: params.clone(),
            n: raw.n,
        };
        t.verify().map_err(D::Error::custom)?;
        Ok(t)
    }
}

/// An element `negate^i ∘ swap^j ∘ σ^k` of the order-12 group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symmetry {
    pub negate: bool,
    pub swap: bool,
    pub sigma: u8,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        negate: false,
        swap: false,
        sigma: 0,
    };

    pub fn all() -> impl Iterator<Item = Symmetry> {
        (0..12u8).map(|i| Symmetry {
            negate: i & 1 == 1,
            swap: i & 2 == 2,
            sigma: i / 4,
        })
    }

    pub fn apply(&self, sol: &SolutionTriple) -> SolutionTriple {
        let mut t = sol.clone();
        for _ in 0..self.sigma % 3 {
            t = t.sigma();
        }
        if self.swap {
            t = t.swap();
        }
        if self.negate {
            t = t.negate();
        }
        t
    }

    pub fn compose(&self, other: &Symmetry) -> Symmetry {
        Symmetry {
            negate: self.negate ^ other.negate,
            swap: self.swap ^ other.swap,
            sigma: (self.sigma + other.sigma) % 3,
        }
    }
}

/// Distinct images of `sol` under the group, in canonical-key order.
pub fn orbit(sol: &SolutionTriple) -> Vec<SolutionTriple> {
    let mut seen = BTreeMap::new();
    for g in Symmetry::all() {
        let t = g.apply(sol);
        seen.entry(t.canonical_key()).or_insert(t);
    }
    seen.into_values().collect()
}

/// The orbit member with the smallest canonical key.
pub fn canonicalize(sol: &SolutionTriple) -> SolutionTriple {
    orbit(sol).into_iter().next().expect("orbit contains sol")
}

/// The three families of trivial solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrivialFamily {
    #[serde(rename = "(1,1,2)")]
    OneOneTwo,
    #[serde(rename = "(u,-u,0)")]
    ZeroSum,
    #[serde(rename = "(rho+1,-rho,1)")]
    RhoPlusOne,
}

impl TrivialFamily {
    pub fn name(&self) -> &'static str {
        match self {
            TrivialFamily::OneOneTwo => "(1,1,2)",
            TrivialFamily::ZeroSum => "(u,-u,0)",
            TrivialFamily::RhoPlusOne => "(ρ+1,-ρ,1)",
        }
    }
}

impl fmt::Display for TrivialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `Some(family)` when the orbit of `sol` meets a trivial family.
pub fn is_trivial(sol: &SolutionTriple) -> Option<TrivialFamily> {
    if sol.n.is_zero() {
        return Some(TrivialFamily::ZeroSum);
    }
    let one = UnitRepr::one();
    let rho_plus_one = UnitRepr::new(1, 1, 1);
    let minus_rho = UnitRepr::new(-1, 1, 0);
    for t in orbit(sol) {
        let (r1, r2) = (t.u1.repr, t.u2.repr);
        if r1 == one && r2 == one && t.n == BigInt::from(2) {
            return Some(TrivialFamily::OneOneTwo);
        }
        if r1 == rho_plus_one && r2 == minus_rho && t.n == BigInt::from(1) {
            return Some(TrivialFamily::RhoPlusOne);
        }
    }
    None
}

/// A class of equivalent solutions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceClass {
    pub representative: SolutionTriple,
    pub orbit_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trivial: Option<TrivialFamily>,
}

impl EquivalenceClass {
    pub fn of(sol: &SolutionTriple) -> Self {
        let members = orbit(sol);
        Self {
            orbit_size: members.len(),
            trivial: is_trivial(sol),
            representative: members.into_iter().next().expect("orbit contains sol"),
        }
    }

    pub fn is_sporadic(&self) -> bool {
        self.trivial.is_none()
    }
}

/// Galois power `τ = σ^k` that the case analysis on the exponents of `u2`
/// prescribes, given that `u2` realizes `X`.
fn galois_case(r2: &UnitRepr, big_x: i64) -> u8 {
    let (x2, y2) = (r2.x(), r2.y());
    if x2 == big_x {
        0
    } else if x2 == -big_x {
        if 2 * y2 >= -big_x {
            2
        } else {
            1
        }
    } else if y2 == big_x {
        if 2 * x2 >= big_x {
            0
        } else {
            2
        }
    } else {
        1
    }
}

/// An equivalent triple with `u1 > 0` in the first embedding whose `u2`
/// satisfies `|ū2| > a^{X/2}`, where `X` is the largest exponent absolute
/// value over the whole orbit of `sol`. The inequality is certified with
/// intervals, refining the context when needed.
pub fn good_representative(sol: &SolutionTriple, ctx: &EmbeddingContext) -> Result<SolutionTriple> {
    let a = sol.params.a();
    if a <= &BigInt::from(100) {
        return Err(Error::Domain(format!("good representative needs a > 100, got {a}")));
    }
    if ctx.params() != &sol.params {
        return Err(Error::ParamMismatch {
            left: sol.params.to_string(),
            right: ctx.params().to_string(),
        });
    }
    let members = orbit(sol);
    let big_x = members.iter().map(|t| t.max_exponent()).max().unwrap_or(0);
    if big_x == 0 {
        return Err(Error::Domain("all exponents vanish; |u2| = 1 = a^0".into()));
    }
    let start = members
        .iter()
        .find(|t| t.u2.repr.max_abs_exponent() == big_x)
        .expect("some orbit member realizes X");
    let tau = galois_case(&start.u2.repr, big_x);
    let mut out = Symmetry {
        negate: false,
        swap: false,
        sigma: tau,
    }
    .apply(start);
    if out.u1.repr.sign() < 0 {
        out = out.negate();
    }
    certify_lower_bound(&out, big_x, ctx)?;
    Ok(out)
}

/// Checks `log|u2| > (X/2) log a` in embedding 1, climbing the precision
/// ladder a few rungs before giving up.
fn certify_lower_bound(sol: &SolutionTriple, big_x: i64, ctx: &EmbeddingContext) -> Result<()> {
    let r2 = sol.u2.repr;
    let check = |c: &EmbeddingContext| -> Result<bool> {
        let lhs = c.log_abs_from_exponents(r2.x(), r2.y());
        let log_a = Interval::from_int(sol.params.a().clone(), c.precision()).ln()?;
        let rhs = log_a.mul_int(&BigInt::from(big_x)).mul_pow2(-1);
        Ok(lhs.certainly_gt(&rhs))
    };
    if check(ctx)? {
        return Ok(());
    }
    for prec in precision_ladder(ctx.precision() * 2).take(4) {
        let c = crate::embeddings::build_context(&sol.params, prec)?;
        if check(&c)? {
            return Ok(());
        }
    }
    Err(Error::CertificationFailed(format!(
        "|u2| > a^(X/2) with X = {big_x} for {sol}"
    )))
}
