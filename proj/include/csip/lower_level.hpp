#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "csip/problem.hpp"

namespace csip {

/// A point y_star with value = g_i(x, y_star) and the guarantee
/// sup_Y g_i(x, .) <= value + gap.
struct CertifiedMax {
    Vec y_star;
    double value = 0.0;
    double gap = 0.0;
    std::uint64_t evaluations = 0;
};

struct LowerLevelOptions {
    /// Maximum number of boxes processed before giving up.
    std::size_t max_boxes = 2'000'000;
};

/// Certified global maximization of y -> g(x, y) over y_domain by
/// best-first box subdivision. Returned gap <= delta; throws
/// BudgetExhausted if the certificate cannot be closed within max_boxes.
CertifiedMax certified_max(const ConstraintFamily& family, const BoxDomain& y_domain, std::span<const double> x,
                           double delta, const LowerLevelOptions& options = {});

/// Convenience overload over all families of a problem, keyed by family index.
std::map<int, CertifiedMax> certified_max_all(const SipProblem& problem, std::span<const double> x,
                                              const std::function<double(int)>& delta,
                                              const LowerLevelOptions& options = {});

/// Entry with the largest value; ties go to the smallest index.
std::pair<int, CertifiedMax> strongest_violator(const std::map<int, CertifiedMax>& results);

/// Certified upper bound of max_i sup_y g_i(x, y).
double certified_violation_bound(const SipProblem& problem, std::span<const double> x, double delta);

}  // namespace csip
