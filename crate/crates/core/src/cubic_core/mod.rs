//! Exact arithmetic in the order `Z[ρ]`, `ρ` a root of
//! `f_a(x) = x^3 - a x^2 - (a+3) x - 1`.

mod element;
mod units;

pub use element::{
    apply_sigma, disc_sqrt, elem_mul, invert_unit, norm, normalize_parameter, CubicParams,
    OrderElement,
};
pub use units::{exponents_from_unit, exponents_from_unit_auto, unit_from_exponents, UnitRepr};
