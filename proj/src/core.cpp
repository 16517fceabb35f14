#include "rqi/core.hpp"

namespace rqi {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::SingularMetric: return "SingularMetric";
    case Errc::NonOrthonormalTetrad: return "NonOrthonormalTetrad";
    case Errc::ImproperTransform: return "ImproperTransform";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::NotNull: return "NotNull";
    case Errc::NotTimelike: return "NotTimelike";
    case Errc::NullTrajectory: return "NullTrajectory";
    case Errc::NonOrthogonalAcceleration: return "NonOrthogonalAcceleration";
    case Errc::VelocityMismatch: return "VelocityMismatch";
    case Errc::MomentumMismatch: return "MomentumMismatch";
    case Errc::AntipodalSingularity: return "AntipodalSingularity";
    case Errc::MissingWavevector: return "MissingWavevector";
    case Errc::WavevectorMismatch: return "WavevectorMismatch";
    case Errc::OrthogonalStates: return "OrthogonalStates";
    case Errc::ImaginaryVelocity: return "ImaginaryVelocity";
    case Errc::NegativeRadicand: return "NegativeRadicand";
    case Errc::DegenerateConfiguration: return "DegenerateConfiguration";
    case Errc::NotOrthogonal: return "NotOrthogonal";
    case Errc::InvalidFrame: return "InvalidFrame";
    case Errc::SubsystemOutOfRange: return "SubsystemOutOfRange";
    case Errc::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
    case Errc::NonCanonicalEntanglement: return "NonCanonicalEntanglement";
    case Errc::NotDensityMatrix: return "NotDensityMatrix";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::NonMLProjectors: return "NonMLProjectors";
    case Errc::UnsupportedStateKind: return "UnsupportedStateKind";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace rqi
