use std::collections::{BTreeSet, HashMap};

use cubic_units::cubic_core::{unit_from_exponents, CubicParams, UnitRepr};
use cubic_units::solutions::{canonicalize, is_trivial, orbit, SolutionTriple};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub type Key = (i8, BigInt, i64, i64, i8, i64, i64, i8);

/// Brute force over both exponent boxes: every pair (u1, u2) whose sum is a
/// rational integer with `1 ≤ |n| ≤ n_max`.
pub fn double_box_oracle(params: &CubicParams, n_max: i64, x_max: i64) -> BTreeSet<Key> {
    let mut units = Vec::new();
    for s in [1i8, -1] {
        for x in -x_max..=x_max {
            for y in -x_max..=x_max {
                let r = UnitRepr::new(s, x, y);
                units.push((r, unit_from_exponents(params, &r)));
            }
        }
    }
    let mut by_tail: HashMap<(BigInt, BigInt), Vec<usize>> = HashMap::new();
    for (i, (_, e)) in units.iter().enumerate() {
        let c = e.coords();
        by_tail.entry((c[1].clone(), c[2].clone())).or_default().push(i);
    }
    let mut classes = BTreeSet::new();
    for (r1, e1) in &units {
        let c = e1.coords();
        let Some(partners) = by_tail.get(&(-&c[1], -&c[2])) else {
            continue;
        };
        for &j in partners {
            let (r2, e2) = &units[j];
            let n = &c[0] + &e2.coords()[0];
            if n.is_zero() || n.abs() > BigInt::from(n_max) {
                continue;
            }
            let t = SolutionTriple::new(params, *r1, *r2, n).unwrap();
            if is_trivial(&t).is_none() {
                classes.insert(canonicalize(&t).canonical_key());
            }
        }
    }
    classes
}

pub fn both_in_box(t: &SolutionTriple, x_max: i64) -> bool {
    orbit(t).iter().any(|m| m.max_exponent() <= x_max)
}
