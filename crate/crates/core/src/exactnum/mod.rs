//! Exact arithmetic over the rationals extended by square roots of integers.

mod field;
mod rational;
pub mod render;
mod sqrtsum;

pub use field::{gcd_of_fields, FieldElem};
pub use rational::Rational;
pub use sqrtsum::{squarefree_split, SqrtSum};
