#pragma once

#include <stdexcept>
#include <string>

namespace snvkit {

/// Broad class of a failure, used by the CLI to pick an exit code.
enum class ErrorKind {
  Usage,        // bad flags or configuration
  Data,         // malformed or insufficient input data
  Convergence,  // a fit did not converge
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), kind_(kind), name_(std::move(name)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

 private:
  ErrorKind kind_;
  std::string name_;
};

#define SNVKIT_DEFINE_ERROR(Type, Kind)                                  \
  class Type : public Error {                                            \
   public:                                                               \
    explicit Type(const std::string& what) : Error(Kind, #Type, what) {} \
  };

SNVKIT_DEFINE_ERROR(ConfigError, ErrorKind::Usage)
SNVKIT_DEFINE_ERROR(BranchAmbiguity, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(CountMismatch, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(InvalidArgument, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(SingularCurvature, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(NotConverged, ErrorKind::Convergence)
SNVKIT_DEFINE_ERROR(InitGuessFailed, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(PeakNotFound, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(DegenerateModulation, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(InsufficientData, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(NonPositiveWavelength, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(ParseError, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(NonMonotonicAxis, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(EmptySeries, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(DuplicateLine, ErrorKind::Data)
SNVKIT_DEFINE_ERROR(IoError, ErrorKind::Data)

#undef SNVKIT_DEFINE_ERROR

}  // namespace snvkit
