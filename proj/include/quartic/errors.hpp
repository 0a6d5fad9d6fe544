#pragma once

#include <stdexcept>
#include <string>

namespace quartic {

/// Argument outside the mathematical domain of an operation (poles, |z| >= 1, x <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Result not representable in double precision.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// A numerical procedure could not certify its own accuracy target.
/// Carries the estimate that tripped the check.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate) {}

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

}  // namespace quartic
