#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "hypersec/linalg.hpp"
#include "hypersec/sparsity.hpp"

namespace hypersec {

/// Thrown by a residual when it is asked to evaluate an unphysical state
/// (e.g. a nonpositive temperature profile).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ResidualFunction = std::function<Vector(std::span<const double>)>;
using JacobianFunction = std::function<DenseMatrix(std::span<const double>)>;

/// Residual contract for F(x) = 0. The residual must be deterministic and
/// return a vector of length `dimension`. `exact_jacobian` is optional and
/// only used by tests and the ExactAtStart initialization.
struct Problem {
    std::string name;
    std::size_t dimension = 0;
    ResidualFunction residual;
    SparsityPattern pattern;
    JacobianFunction exact_jacobian;
};

}  // namespace hypersec
