//! Bounded exhaustive search for `u1 + u2 = n` in `Z[ρ]`.
//!
//! `u1 = s ε^x δ^y` runs over the box `max(|x|, |y|) ≤ x_max`. Rather than
//! testing every `n`, note that `N(n - u1) = χ(n)` where
//! `χ(t) = t^3 - T t^2 + S t - N` is the characteristic polynomial of `u1`.
//! With `N = ±1` and `n ≥ 1`, `χ(n) = ±1` forces either
//! `n (n^2 - T n + S) = 0` or `n (n^2 - T n + S) = 2N`, so `n` is a root of
//! `n^2 - T n + S` or `n ∈ {1, 2}`. Each candidate is then checked exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

use crate::cubic_core::{unit_from_exponents, CubicParams, OrderElement, UnitRepr};
use crate::embeddings::{build_context, PRECISION_START};
use crate::error::{Error, Result};
use crate::solutions::{canonicalize, orbit, EquivalenceClass, SolutionTriple, TrivialFamily};

pub const DEFAULT_X_MAX: i64 = 30;

static TABLE1: &str = include_str!("../data/table1.json");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    params: CubicParams,
    n_max: u64,
    x_max: i64,
    include_trivial: bool,
}

impl SearchConfig {
    pub fn new(params: &CubicParams, n_max: u64, x_max: i64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::Domain("n_max must be at least 1".into()));
        }
        if x_max < 1 {
            return Err(Error::Domain("x_max must be at least 1".into()));
        }
        Ok(Self {
            params: params.clone(),
            n_max,
            x_max,
            include_trivial: false,
        })
    }

    /// `n_max = max(⌊|a|^{1/3}⌋, 1)` and the default box.
    pub fn theorem_mode(params: &CubicParams) -> Self {
        let n_max = params.theorem_n_max().to_u64().unwrap_or(u64::MAX);
        Self {
            params: params.clone(),
            n_max,
            x_max: DEFAULT_X_MAX,
            include_trivial: false,
        }
    }

    pub fn with_trivial(mut self, include: bool) -> Self {
        self.include_trivial = include;
        self
    }

    pub fn with_x_max(mut self, x_max: i64) -> Result<Self> {
        if x_max < 1 {
            return Err(Error::Domain("x_max must be at least 1".into()));
        }
        self.x_max = x_max;
        Ok(self)
    }

    pub fn params(&self) -> &CubicParams {
        &self.params
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn x_max(&self) -> i64 {
        self.x_max
    }

    pub fn include_trivial(&self) -> bool {
        self.include_trivial
    }
}

/// Output of [`solve_bounded`].
#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    #[serde(with = "crate::json::int")]
    pub a: BigInt,
    pub n_max: u64,
    pub x_max: i64,
    /// Sporadic classes, sorted by canonical representative.
    pub sporadic: Vec<EquivalenceClass>,
    /// Trivial classes met in the box; empty unless requested.
    pub trivial: Vec<EquivalenceClass>,
    /// The `(u, -u, 0)` family, reported as a family rather than per unit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_sum_family: Option<TrivialFamily>,
    /// Distinct sporadic triples hit directly by the enumeration.
    pub raw_sporadic_hits: usize,
}

/// Integer `n` in `[1, n_max]` with `|χ(n)| = 1`.
fn unit_shifts(u: &OrderElement, n_max: u64) -> Vec<BigInt> {
    let (t, s) = u.trace_and_second();
    let mut cands: Vec<BigInt> = vec![BigInt::one(), BigInt::from(2)];
    // Roots of n^2 - T n + S.
    let disc = &t * &t - BigInt::from(4) * &s;
    if !disc.is_negative() {
        let r = disc.sqrt();
        if &r * &r == disc {
            for num in [&t + &r, &t - &r] {
                if num.is_positive() && (&num % 2u32).is_zero() {
                    cands.push(num / 2u32);
                }
            }
        }
    }
    let limit = BigInt::from(n_max);
    cands.sort();
    cands.dedup();
    cands
        .into_iter()
        .filter(|n| n <= &limit)
        .filter(|n| u.int_minus(n).is_unit())
        .collect()
}

/// Enumerates the box and returns every `(u1, n)` hit with its exponents.
fn box_hits(cfg: &SearchConfig) -> Vec<(UnitRepr, OrderElement, BigInt)> {
    let xm = cfg.x_max;
    let rows: Vec<(i8, i64)> = [1i8, -1]
        .into_iter()
        .flat_map(|s| (-xm..=xm).map(move |x| (s, x)))
        .collect();
    let mut hits: Vec<_> = rows
        .par_iter()
        .flat_map_iter(|&(s, x)| {
            let mut u = unit_from_exponents(&cfg.params, &UnitRepr::new(s, x, -xm));
            let mut out = Vec::new();
            for y in -xm..=xm {
                for n in unit_shifts(&u, cfg.n_max) {
                    out.push((UnitRepr::new(s, x, y), u.clone(), n));
                }
                if y < xm {
                    u = u.mul_delta();
                }
            }
            out
        })
        .collect();
    hits.sort_by(|l, r| l.2.cmp(&r.2).then(l.0.cmp(&r.0)));
    hits
}

/// All solution classes with a member whose `u1` lies in the box and
/// `1 ≤ n ≤ n_max`, deduplicated by canonical form.
pub fn solve_bounded(cfg: &SearchConfig) -> Result<SearchResult> {
    let ctx = build_context(&cfg.params, PRECISION_START)?;
    let mut sporadic = BTreeMap::new();
    let mut trivial = BTreeMap::new();
    let mut raw = 0usize;
    for (r1, u1, n) in box_hits(cfg) {
        let u2 = u1.int_minus(&n);
        let r2 = crate::cubic_core::exponents_from_unit(&u2, &ctx)?;
        let t = SolutionTriple::new(&cfg.params, r1, r2, n)?;
        let class = EquivalenceClass::of(&t);
        let key = class.representative.canonical_key();
        if class.is_sporadic() {
            raw += 1;
            sporadic.entry(key).or_insert(class);
        } else if cfg.include_trivial {
            trivial.entry(key).or_insert(class);
        }
    }
    Ok(SearchResult {
        a: cfg.params.a().clone(),
        n_max: cfg.n_max,
        x_max: cfg.x_max,
        sporadic: sporadic.into_values().collect(),
        trivial: trivial.into_values().collect(),
        zero_sum_family: cfg.include_trivial.then_some(TrivialFamily::ZeroSum),
        raw_sporadic_hits: raw,
    })
}

/// A row of the embedded reference table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureRow {
    pub index: usize,
    #[serde(flatten)]
    pub triple: SolutionTriple,
}

impl FixtureRow {
    pub fn a(&self) -> &BigInt {
        self.triple.params().a()
    }
}

pub fn table1_fixture() -> &'static str {
    TABLE1
}

pub fn parse_fixture(text: &str) -> Result<Vec<FixtureRow>> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub a_range: (i64, i64),
    pub x_max: i64,
    /// Sporadic triples with `n ≥ 1`, counted over whole classes.
    pub sporadic_triples: usize,
    /// Distinct sporadic triples hit directly by the enumeration.
    pub raw_hits: usize,
    pub class_count: usize,
    pub classes_per_a: BTreeMap<i64, usize>,
    pub all_n_one: bool,
    pub max_a: Option<i64>,
    pub fixture_match: bool,
    pub classes: Vec<EquivalenceClass>,
}

fn positive_members(c: &EquivalenceClass) -> usize {
    orbit(&c.representative)
        .iter()
        .filter(|t| t.n().is_positive())
        .count()
}

fn scan_range(a_from: i64, a_to: i64, cfg_for: impl Fn(&CubicParams) -> SearchConfig + Sync) -> Result<Vec<(i64, SearchResult)>> {
    (a_from..=a_to)
        .into_par_iter()
        .map(|a| {
            let params = CubicParams::new(a);
            solve_bounded(&cfg_for(&params)).map(|r| (a, r))
        })
        .collect()
}

/// Runs the theorem-mode search for `-1 ≤ a ≤ 100` and compares against the
/// embedded table.
pub fn reproduce_table() -> Result<TableReport> {
    reproduce_table_with(TABLE1, DEFAULT_X_MAX)
}

/// [`reproduce_table`] against an arbitrary fixture text and box.
pub fn reproduce_table_with(fixture: &str, x_max: i64) -> Result<TableReport> {
    let rows = parse_fixture(fixture)?;
    let (a_from, a_to) = (-1, 100);
    let results = scan_range(a_from, a_to, |p| {
        SearchConfig::theorem_mode(p)
            .with_x_max(x_max)
            .expect("positive box")
    })?;
    let mut classes = Vec::new();
    let mut per_a = BTreeMap::new();
    let mut raw = 0;
    for (a, r) in results {
        raw += r.raw_sporadic_hits;
        if !r.sporadic.is_empty() {
            per_a.insert(a, r.sporadic.len());
        }
        classes.extend(r.sporadic);
    }
    let triples: usize = classes.iter().map(positive_members).sum();
    let found: BTreeMap<_, _> = classes
        .iter()
        .map(|c| ((c.representative.params().clone(), c.representative.canonical_key()), c))
        .collect();
    let expected: BTreeMap<_, _> = rows
        .iter()
        .map(|r| {
            let c = canonicalize(&r.triple);
            ((c.params().clone(), c.canonical_key()), r)
        })
        .collect();
    let mut diffs = Vec::new();
    for (k, r) in &expected {
        if !found.contains_key(k) {
            diffs.push(format!("missing a={} index={}: {}", r.a(), r.index, r.triple));
        }
    }
    for (k, c) in &found {
        if !expected.contains_key(k) {
            diffs.push(format!("unexpected {}", c.representative));
        }
    }
    let report = TableReport {
        a_range: (a_from, a_to),
        x_max,
        sporadic_triples: triples,
        raw_hits: raw,
        class_count: classes.len(),
        classes_per_a: per_a,
        all_n_one: classes.iter().all(|c| c.representative.n().is_one()),
        max_a: classes
            .iter()
            .filter_map(|c| c.representative.params().a_i64())
            .max(),
        fixture_match: diffs.is_empty(),
        classes,
    };
    if !diffs.is_empty() {
        return Err(Error::MismatchAgainstFixture(diffs.join("; ")));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub a_max: i64,
    pub n_max: u64,
    pub x_max: i64,
    pub class_count: usize,
    pub classes_per_a: BTreeMap<i64, usize>,
    pub max_abs_n: Option<u64>,
    pub max_a: Option<i64>,
    pub note: &'static str,
    pub classes: Vec<EquivalenceClass>,
}

impl ConjectureReport {
    /// Classes at a single parameter.
    pub fn slice(&self, a: i64) -> Vec<&EquivalenceClass> {
        self.classes
            .iter()
            .filter(|c| c.representative.params().a_i64() == Some(a))
            .collect()
    }
}

pub const BOX_CAVEAT: &str =
    "non-rigorous: complete only for classes with a member whose u1 exponents lie in the box";

/// Sporadic classes over `-1 ≤ a ≤ a_max`, `1 ≤ n ≤ n_max`.
pub fn conjecture_scan(a_max: i64, n_max: u64, x_max: i64) -> Result<ConjectureReport> {
    if a_max < -1 {
        return Err(Error::Domain("a_max must be at least -1".into()));
    }
    let probe = SearchConfig::new(&CubicParams::new(0), n_max, x_max)?;
    let results = scan_range(-1, a_max, |p| SearchConfig {
        params: p.clone(),
        ..probe.clone()
    })?;
    let mut classes = Vec::new();
    let mut per_a = BTreeMap::new();
    for (a, r) in results {
        if !r.sporadic.is_empty() {
            per_a.insert(a, r.sporadic.len());
        }
        classes.extend(r.sporadic);
    }
    Ok(ConjectureReport {
        a_max,
        n_max,
        x_max,
        class_count: classes.len(),
        classes_per_a: per_a,
        max_abs_n: classes
            .iter()
            .filter_map(|c| c.representative.n().abs().to_u64())
            .max(),
        max_a: classes
            .iter()
            .filter_map(|c| c.representative.params().a_i64())
            .max(),
        note: BOX_CAVEAT,
        classes,
    })
}

/// One CSV row per class, big integers as decimal strings.
pub fn write_classes_csv<W: Write>(classes: &[EquivalenceClass], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "a", "n", "s1", "x1", "y1", "s2", "x2", "y2", "u1_c0", "u1_c1", "u1_c2", "u2_c0", "u2_c1",
        "u2_c2", "orbit_size", "family",
    ])?;
    for c in classes {
        let t = &c.representative;
        let (r1, r2) = (t.u1().repr(), t.u2().repr());
        let mut rec = vec![
            t.params().a().to_string(),
            t.n().to_string(),
            r1.sign().to_string(),
            r1.x().to_string(),
            r1.y().to_string(),
            r2.sign().to_string(),
            r2.x().to_string(),
            r2.y().to_string(),
        ];
        rec.extend(t.u1().elem().coords().iter().map(|c| c.to_string()));
        rec.extend(t.u2().elem().coords().iter().map(|c| c.to_string()));
        rec.push(c.orbit_size.to_string());
        rec.push(c.trivial.map(|f| f.name().to_string()).unwrap_or_else(|| "sporadic".into()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: i64) -> CubicParams {
        CubicParams::new(a)
    }

    #[test]
    fn shifts_match_direct_norms() {
        let params = p(-1);
        for (x, y) in [(1, 1), (-11, -8), (0, 3), (4, -2)] {
            for s in [1i8, -1] {
                let u = unit_from_exponents(&params, &UnitRepr::new(s, x, y));
                let direct: Vec<BigInt> = (1..=40u32)
                    .map(BigInt::from)
                    .filter(|n| u.int_minus(n).is_unit())
                    .collect();
                assert_eq!(unit_shifts(&u, 40), direct, "{s} {x} {y}");
            }
        }
    }

    #[test]
    fn a_zero_has_the_two_table_rows() {
        let cfg = SearchConfig::new(&p(0), 1, 20).unwrap();
        let r = solve_bounded(&cfg).unwrap();
        assert_eq!(r.sporadic.len(), 2);
        let rows = parse_fixture(TABLE1).unwrap();
        for row in rows.iter().filter(|r| r.a() == &BigInt::zero()) {
            let c = canonicalize(&row.triple);
            assert!(r.sporadic.iter().any(|k| k.representative == c));
        }
    }

    #[test]
    fn a_fifty_has_no_sporadic_solutions() {
        let cfg = SearchConfig::new(&p(50), 3, 20).unwrap();
        assert!(solve_bounded(&cfg).unwrap().sporadic.is_empty());
    }

    #[test]
    fn a_two_row() {
        let params = p(2);
        let cfg = SearchConfig::new(&params, 1, 10).unwrap();
        let r = solve_bounded(&cfg).unwrap();
        let t = SolutionTriple::new(&params, UnitRepr::new(1, -1, 5), UnitRepr::new(1, -6, -1), 1).unwrap();
        assert_eq!(t.u1().elem(), &OrderElement::new(&params, 2718, 1340, -603));
        assert!(r.sporadic.iter().any(|c| c.representative == canonicalize(&t)));
    }

    #[test]
    fn trivial_families_are_found() {
        let cfg = SearchConfig::new(&p(7), 2, 4).unwrap().with_trivial(true);
        let r = solve_bounded(&cfg).unwrap();
        let fams: Vec<_> = r.trivial.iter().filter_map(|c| c.trivial).collect();
        assert!(fams.contains(&TrivialFamily::OneOneTwo));
        assert!(fams.contains(&TrivialFamily::RhoPlusOne));
        assert_eq!(r.zero_sum_family, Some(TrivialFamily::ZeroSum));
    }

    #[test]
    fn fixture_rows_are_valid_solutions() {
        let rows = parse_fixture(TABLE1).unwrap();
        assert_eq!(rows.len(), 10);
        for r in rows {
            r.triple.verify().unwrap();
        }
    }

    #[test]
    fn csv_has_one_row_per_class() {
        let cfg = SearchConfig::new(&p(0), 1, 10).unwrap();
        let r = solve_bounded(&cfg).unwrap();
        let mut buf = Vec::new();
        write_classes_csv(&r.sporadic, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + r.sporadic.len());
    }
}
