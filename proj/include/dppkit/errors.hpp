#pragma once

#include <stdexcept>
#include <string>

namespace dppkit {

/// Base class for failures that carry a dedicated CLI exit code.
class DppError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Z_k(L) is numerically zero: the kernel lies outside the admissible set for this k.
class DegenerateStratumError : public DppError {
public:
    using DppError::DppError;
};

/// Positive definiteness was required but the kernel is singular (or indefinite).
class SingularKernelError : public DppError {
public:
    using DppError::DppError;
};

/// The MLE lies on the boundary: some element appears in all or in no observations.
class BoundaryMleError : public DppError {
public:
    BoundaryMleError(const std::string& what, int element)
        : DppError(what), element_(element) {}

    int element() const { return element_; }

private:
    int element_;
};

/// A requested materialization exceeds the documented size caps.
class CapacityError : public DppError {
public:
    using DppError::DppError;
};

/// The supplied kernel is not a projection of the required rank.
class NotProjectionError : public DppError {
public:
    using DppError::DppError;
};

}  // namespace dppkit
