#pragma once

#include <stdexcept>
#include <string>

namespace curveflow {

/// Base class for all solver/geometry failures raised by this library.
struct CurveFlowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A polygon segment has (numerically) zero length.
struct ZeroSegment : CurveFlowError {
  using CurveFlowError::CurveFlowError;
};

/// The nodal curvature violates the positivity assumption required by alpha.
struct CurvatureSignViolation : CurveFlowError {
  using CurveFlowError::CurveFlowError;
};

/// The weighted average of adjacent segment normals at a node cancels.
struct SingularNodalNormal : CurveFlowError {
  using CurveFlowError::CurveFlowError;
};

/// The assembled linear system cannot be factorized reliably.
struct SingularSystem : CurveFlowError {
  using CurveFlowError::CurveFlowError;
};

/// The nonlinear iteration did not converge within the iteration cap.
struct MaxIterExceeded : CurveFlowError {
  using CurveFlowError::CurveFlowError;
};

/// A polygon expected to be simple has crossing edges.
struct SelfIntersecting : CurveFlowError {
  using CurveFlowError::CurveFlowError;
};

/// Malformed shape specification or configuration.
struct InvalidSpec : CurveFlowError {
  using CurveFlowError::CurveFlowError;
};

/// A measurement time is not an integer multiple of the time step.
struct CheckpointMisaligned : CurveFlowError {
  using CurveFlowError::CurveFlowError;
};

}  // namespace curveflow
