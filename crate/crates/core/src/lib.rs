//! Ideal convergence of sequences in C*-algebra-valued metric spaces.
//!
//! The crate is organized bottom-up:
//!
//! - [`algebra`]: matrix and sampled-function C*-algebras, spectra, order.
//! - [`ideal`]: ideals on ℕ, set descriptions with tail certificates,
//!   three-valued membership and the additive property.
//! - [`metric`]: algebra-valued metrics and their axiom checks.
//! - [`scenario`]: test sequences with certified tail hulls.
//! - [`convergence`]: `I`-convergence, the three `I`-Cauchy criteria and the
//!   `I*` variants.
//! - [`normed`]: algebra-valued norms and their induced metrics.

pub mod algebra;
pub mod convergence;
pub mod error;
pub mod ideal;
pub mod metric;
pub mod normed;
pub mod scenario;
pub mod window;

pub use algebra::{AlgebraDescriptor, AlgebraElement, Scalars, Spectrum, ToleranceProfile};
pub use convergence::{
    a_epsilon_set, candidate_centers, cauchy_criteria_cross_check, counterexample_audit,
    default_probes, filter_candidates, i_cauchy_def_verdict, i_cauchy_ek_verdict,
    i_cauchy_pair_verdict, i_convergence_verdict, i_star_cauchy_verdict,
    i_star_convergence_verdict, implication_audit, istar_witness_from_ap, ApWitnessReport, Center,
    CounterexampleReport, CounterexampleRow, CrossCheckReport, CrossCheckRow, GridCell,
    ImplicationReport, ImplicationRow, Question, VerdictBundle,
};
pub use error::{Error, Result};
pub use ideal::{
    ap_decompose, ap_lemma_witness, block_elements, block_index, block_min_at_least,
    filter_membership, membership, ApDecomposition, ApFlag, BlockPartition, BlockSet, Decision,
    IdealDescriptor, IdealKind, SetDescription, TailCertificate, Verdict,
};
pub use metric::{
    default_weight, distance_norm, make_diag_metric, make_discrete_metric,
    make_reciprocal_function_metric, make_scaled_function_metric, verify_axioms, AxiomWitness,
    CstarMetric, MetricAxiomReport, MetricKind, NormBounds, NormProfile, Span,
};
pub use normed::{
    induce_metric, invariance_audit, make_real_abs_norm, make_scaled_diag_norm,
    norm_convergence_verdict, verify_norm_axioms, CstarNorm, InvarianceReport, InvarianceWitness,
    NormAxiomReport, NormKind,
};
pub use num_complex::Complex64;
pub use scenario::{ClassMap, SequenceScenario};
pub use window::Window;
