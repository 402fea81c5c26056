#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csip {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Constraint satisfaction slack accepted for a "feasible" point of a
/// discretized problem.
inline constexpr double kFeasTol = 1e-10;

/// Malformed or inconsistent input (dimensions, signs, missing data).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Configuration that violates a driver precondition.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A certified answer could not be produced within the allotted work.
class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double max_norm(std::span<const double> v);
double max_distance(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

void require_dim(std::span<const double> v, std::size_t n, const char* what);

}  // namespace csip
