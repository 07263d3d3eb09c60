//! Embeddings of countably presented groups into two-generator groups.
//!
//! The toolkit has four layers:
//!
//! * [`word`] — exact free-group word arithmetic (reduction, products,
//!   inverses, conjugates, commutators, powers, substitution homomorphisms);
//! * [`presentation`] — a DSL for group presentations with parametric
//!   relator families, bounded instantiation, and DSL/GAP output;
//! * [`embed`] — the generator words over `{x, y}` and the transform that
//!   rewrites any single-family presentation into a two-generator one;
//! * [`verify`] — checks that everything above is what it claims to be:
//!   word identities, free-basis tests via graph folding, and finite
//!   permutation witnesses for nontriviality of embedded elements.

pub mod embed;
pub mod presentation;
pub mod verify;
pub mod word;

pub use embed::{embed, embed_schema, EmbedMode, EmbeddingResult};
pub use presentation::{parse, Format, Presentation};
pub use word::{Gen, Letter, Sign, Substitution, UnmappedPolicy, Word};
