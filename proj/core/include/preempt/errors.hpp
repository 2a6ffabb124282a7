#pragma once

#include <stdexcept>
#include <string>

namespace preempt {

/// Parameters violate a model assumption (δ ≤ 0, D2 ≥ D1, a quartet that is
/// not a probability law, ...).
class InvalidModel : public std::invalid_argument {
public:
    explicit InvalidModel(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure could not produce a trustworthy value (lost root
/// bracket, round cap exceeded, utility inversion of a non-negative value).
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace preempt
