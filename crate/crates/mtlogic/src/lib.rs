//! Monotone modal logic and conditional logic through their two-sorted
//! normal translations: syntax, finite semantics, dualities,
//! correspondence, ALBA runs and the display calculi.

pub mod par;
pub mod semantics;
pub mod syntax;
pub mod translate;
pub mod constructions;
pub mod correspondence;
pub mod inductive;
pub mod alba;
pub mod calculus;
pub mod selftest;
