#pragma once

#include <stdexcept>
#include <string>

namespace vaxmed {

// Malformed or inconsistent input: unknown nodes, bad supports, role clashes.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact enumeration would exceed the configured cap.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No usable cells for a plug-in estimator.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vaxmed
