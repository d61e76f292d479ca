#pragma once

#include <stdexcept>
#include <string>

namespace jhtrack {

// Base class for all library errors.
struct TrackingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Geometry
struct DegenerateProjection : TrackingError {
  using TrackingError::TrackingError;
};
struct SingularHomography : TrackingError {
  using TrackingError::TrackingError;
};

// Noise estimation
struct EmptyWindow : TrackingError {
  using TrackingError::TrackingError;
};
struct InvalidBox : TrackingError {
  using TrackingError::TrackingError;
};

// Filtering / association
struct SingularInnovation : TrackingError {
  using TrackingError::TrackingError;
};
struct DegenerateMixing : TrackingError {
  using TrackingError::TrackingError;
};
struct InvalidThresholds : TrackingError {
  using TrackingError::TrackingError;
};
struct EmptyBuffer : TrackingError {
  using TrackingError::TrackingError;
};
struct NonMonotonicFrame : TrackingError {
  using TrackingError::TrackingError;
};

// IO
struct ParseError : TrackingError {
  using TrackingError::TrackingError;
};
struct IoError : TrackingError {
  using TrackingError::TrackingError;
};

// Synthetic scenes / tuning
struct InvalidSpec : TrackingError {
  using TrackingError::TrackingError;
};
struct ObjectiveFailure : TrackingError {
  using TrackingError::TrackingError;
};

}  // namespace jhtrack
