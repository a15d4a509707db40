#pragma once

#include <stdexcept>
#include <string>

namespace sigclust {

// Raised when a computation leaves its numerical validity envelope
// (eigensolver failure, kernel sums going negative beyond tolerance, ...).
// Input and configuration problems use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sigclust
