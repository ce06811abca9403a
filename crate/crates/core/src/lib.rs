//! Exact-arithmetic calculus of symmetric powers.
//!
//! The crate verifies, over 𝔽_q point counts, finite pointed sets, and exact
//! rational linear algebra, the computable identities satisfied by symmetric
//! powers: coproduct (Künneth) rules and their towers, the comparison map
//! between quotient and multiset models, norm/transfer/projector identities
//! for symmetric group actions, invariant subalgebras of tensor powers of
//! finite field extensions, and the quadric-cone presentation of Sym²(𝔸²).
//! No floating point exists anywhere; every check is an exact identity.

pub mod counting;
pub mod etale;
pub mod finite;
pub mod invariant;
pub mod linalg;
pub mod poly;
pub mod suite;
pub mod towers;
pub mod transfer;
