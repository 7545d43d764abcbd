#pragma once

#include <stdexcept>
#include <string>

namespace psl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VarianceError : Error {
  using Error::Error;
};
struct IndexError : Error {
  using Error::Error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct SingularMetricError : Error {
  using Error::Error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct ParameterError : Error {
  using Error::Error;
};
struct BackendError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
// Signals an engine bug (two equivalent computation routes disagree), not a geometry fact.
struct InternalConsistencyError : Error {
  using Error::Error;
};
struct FitDegenerateError : Error {
  using Error::Error;
};
struct NotApplicableError : Error {
  using Error::Error;
};
struct MetricSignatureError : Error {
  using Error::Error;
};
struct PhpcrValidationError : Error {
  using Error::Error;
};
struct ExprError : Error {
  using Error::Error;
};

}  // namespace psl
