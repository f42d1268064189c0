//! Signature sequences of exact real parameters, the trimming operators that
//! characterize doubly fractal sequences, the block-extension construction of
//! those sequences, and recovery of the parameters consistent with a prefix.
//!
//! ```
//! use fractalseq::{signature_values, ExactNumber};
//!
//! let theta: ExactNumber = "sqrt(13)".parse().unwrap();
//! let s = signature_values(&theta, 6).unwrap();
//! assert_eq!(s.terms(), &[1, 2, 3, 4, 1, 5]);
//! ```

pub mod cli;
pub mod exact;
pub mod seqcore;
pub mod signature;

pub use exact::{compare_affine, ExactError, ExactNumber};
pub use seqcore::{
    annotate_ranks, check_doubly_fractal_prefix, classify_initial_segment, lower_trim,
    occurrence_index, upper_trim, AnnotatedTerm, FractalReport, InitialSegmentClass, Sequence,
    SequenceError, Term,
};
pub use signature::{
    brute_force_signature, generate_signature, signature_values, SignatureError, SignatureGenerator,
};
pub mod construction;
pub use construction::{
    construct_type1, merge_p, translate_type2, Branch, BranchPolicy, ConstructionError,
    ConstructionState, MergePlan,
};
pub mod inverse;
pub use inverse::{
    first_divergence, lemma8_interval, theta_interval_from_prefix, InverseError, SegmentType,
    ThetaInterval,
};
