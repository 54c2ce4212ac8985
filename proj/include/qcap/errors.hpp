#pragma once

#include <stdexcept>
#include <string>

namespace qcap {

// Shapes that do not fit together: tensor factors, Kraus operator sizes,
// channel composition, matrix dimensions above the configured cap.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value violates a documented invariant (non-Hermitian input, trace not 1,
// incomplete Kraus set, parameter out of range).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A Choi matrix with eigenvalues below the complete-positivity threshold.
class NotCompletelyPositiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An inverse taken on a range that does not contain the data it must act on.
class SingularConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation refused because it would exceed a configured size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed channel file or other serialized input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcap
