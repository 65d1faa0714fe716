//! Descent polynomials of rooted trees with a marked descent set.
//!
//! For a rooted tree `T` on `s` vertices with a distinguished vertex set `S`,
//! `d(T; n)` counts the labelings of `T` with a chain of `n - s` vertices
//! grafted above its root whose descent set is exactly `S`. It is a
//! polynomial in `n`. This crate computes it exactly by several independent
//! routes, expands it in binomial bases, relates it to linear extensions of
//! an associated poset, locates its roots, and checks the known identities
//! over every small marked tree.

pub mod combinat;
pub mod descent;
pub mod error;
pub mod expansions;
pub mod poset;
pub mod poly;
pub mod roots;
pub mod sweep;
pub mod tree;

pub use descent::{descent_polynomial, Algo, Engine, MemoCache};
pub use error::{Error, Result};
pub use expansions::{classify, expand, QualifyingClass};
pub use poset::{build_poset, HeightPolynomial, Poset};
pub use poly::{Basis, BasisExpansion, ExactPolynomial};
pub use roots::{integer_roots, verify_roots, RootReport};
pub use sweep::{run_sweep, Check, SweepConfig, SweepReport};
pub use tree::{Labeling, Mark, MarkedTree, TreeFormat};
