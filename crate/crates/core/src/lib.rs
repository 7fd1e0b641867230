//! Daisy cubes: construction, linear-time recovery of proper hypercube
//! embeddings, and independent verification.
//!
//! A *daisy cube* is the subgraph of the `h`-dimensional hypercube induced
//! by all binary words lying below at least one word of a generator set.
//! Such graphs embed isometrically in the hypercube, and the embedding can
//! be recovered from the bare graph in time linear in its size:
//!
//! - [`daisy`] builds labeled instances from generator words, provides the
//!   named families used throughout the tests, and strips instances down to
//!   unlabeled graphs for recovery experiments.
//! - [`embedder`] recovers embeddings: [`embed_isometric`] labels the graph
//!   from a maximum-degree root, and [`proper_embed`] shifts that labeling
//!   so the label set becomes closed downward.
//! - [`verifier`] checks the results from first principles, with quadratic
//!   brute-force recomputations and a reference recovery that tries every
//!   plausible root.
//! - [`graph`] and [`words`] supply the underlying simple connected graphs
//!   and fixed-width binary words.
//!
//! ```
//! use daisy_core::{build, family, proper_embed, verifier, FamilyName};
//!
//! let gens = family(FamilyName::Fibonacci, 6, None).unwrap();
//! let instance = build(&gens).unwrap();
//! let (bare, _truth) = instance.strip(42);
//! let recovered = proper_embed(&bare).unwrap();
//! assert!(verifier::is_proper(&bare, &recovered.embedding).passed());
//! ```

pub mod daisy;
pub mod embedder;
pub mod graph;
pub mod verifier;
pub mod words;

pub use daisy::{
    antichain_of, build, build_with_cap, downward_closure, family, interval, read_labels,
    read_words, relabel, strip, write_labels, write_words, DaisyError, FamilyName, GeneratorSet,
    LabeledDaisyCube, DEFAULT_CLOSURE_CAP,
};
pub use embedder::{
    embed_isometric, embed_isometric_at, mark_extremal, minimal_shift, proper_embed, EmbedError,
    Embedding, MarkState, ProperEmbedding,
};
pub use graph::{bfs, down_neighbors, read_graph, write_graph, DistanceField, FormatError, Graph,
    GraphError, VertexId,
};
pub use verifier::{
    baseline_proper, equivalent, is_isometric, is_proper, minimal_vertices,
    minimal_vertices_brute, structural_audit, Check, Equivalence, VerificationReport, VerifyError,
    DEFAULT_PAIRWISE_CAP,
};
pub use words::{ParseWordError, Word};
