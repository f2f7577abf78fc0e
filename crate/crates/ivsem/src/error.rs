use thiserror::Error;

/// Errors from the probability kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbError {
    #[error("blocks do not partition the outcome cube")]
    NotAPartition,
    #[error("block probabilities sum to {sum}, not 1")]
    ProbSumNotOne { sum: String },
    #[error("distribution weights sum to {sum}, not 1")]
    DistSumNotOne { sum: String },
    #[error("domain extension overlaps existing domain")]
    DomainOverlap,
    #[error("event or random variable is not measurable in the space")]
    NotMeasurable,
    #[error("conditioning on a zero-probability event")]
    ZeroProbabilityEvent,
}
