//! Decomposition of evaluation mappings between finite posets into nested
//! dissociations of monotone components, with its boolean specialization
//! (implicative normal forms) and the Lefebvre choice-model machinery
//! (ensembles, rank-function mixing, staged choice algorithms).
//!
//! Everything is exhaustively checkable at desk scale: operation systems are
//! model-checked against their axioms, decompositions are re-verified
//! pointwise, and the randomized suites in [`suite`] drive the whole stack
//! from seeded generators.
//!
//! The `parallel` feature (on by default) runs the enumeration-heavy paths
//! on rayon; without it every entry point falls back to the sequential
//! implementation with identical output.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod boolinf;
pub mod choice;
pub mod decompose;
pub mod error;
pub mod lefebvre;
pub mod order;
pub mod suite;

pub use algebra::{
    check_axioms, check_dual_identity, find_dual_isomorphism, search_boolean_interpretations,
    AxiomReport, BooleanInterpretation, OperationSystem, Polarity, SystemTag,
};
pub use boolinf::{
    exhaustive_verify, inf_evaluate, inf_synthesize, ImplicativeNormalForm, TruthTable,
};
pub use choice::{
    choice_table, mix_evaluation, run_approx, run_exact, run_generalized, ChoiceRow, ChoiceTrace,
    IntentTriple, StateChain,
};
pub use decompose::{
    decompose, evaluate_form, pad_to_universal, verify_form, ApproximatingForm,
    DecompositionReport, Strategy, ThetaFunction,
};
pub use error::{Error, Result};
pub use lefebvre::{
    check_choice_axioms, equality_region_scan, f_real, golden_ensemble, golden_section_root,
    marginals, pl_characteristic, sample_ensemble, EnsembleCharacteristic, Marginals,
    RealistEnsembleSpec,
};
pub use order::{FinitePoset, LayerDecomposition, PosetMap};
