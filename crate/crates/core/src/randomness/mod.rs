//! Complexity estimation, deficiency, dimension profiles and the segment
//! constructions.

mod compressor;
mod dimension;
mod estimator;
mod external;
pub mod segments;

pub use compressor::Compressor;
pub use dimension::{dimension_profile, DimensionReport, ProfilePoint, Rational};
pub use estimator::{
    deficiency, ComplexityEstimator, EstimatorSpec, LengthEstimator, LogEstimator,
    ScaledEstimator, ZeroEstimator,
};
pub use external::ExternalEstimator;
pub use segments::{
    double_segment_stream, segment_contrast, segment_stream, wtt_stream, SegmentContrast,
    SegmentSchedule, WttSchedule,
};
