#pragma once

#include <stdexcept>
#include <string>

namespace lgg {

/// Inconsistent matrix or vector dimensions.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of an operation (bad sparsity, bad weight, unknown id).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An optimization routine could not produce a solution.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The constraint set Phi x = y is empty (rank-deficient Phi, y outside its range).
class InfeasibleError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Phi Phi^T is numerically singular.
class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lgg
