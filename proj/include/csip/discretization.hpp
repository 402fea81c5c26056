#pragma once

#include <vector>

#include "csip/box_domain.hpp"

namespace csip {

inline constexpr double kDedupTol = 1e-12;

/// Finite set of index points in Y; no two points lie within dedup_tol
/// of each other in the max-metric.
class Discretization {
public:
    explicit Discretization(double dedup_tol = kDedupTol) : dedup_tol_(dedup_tol) {}
    Discretization(std::vector<Vec> points, double dedup_tol = kDedupTol);

    /// Adds y unless a point within dedup_tol exists. Returns true if added.
    bool add(Vec y);
    bool contains(std::span<const double> y) const;

    const std::vector<Vec>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    double dedup_tol() const { return dedup_tol_; }

    /// Throws InputError if some point lies outside the domain.
    void check_within(const BoxDomain& domain) const;

    /// Uniform tensor grid with n points per axis (n >= 1; n == 1 uses the center).
    static Discretization uniform_grid(const BoxDomain& domain, std::size_t per_axis);

private:
    double dedup_tol_;
    std::vector<Vec> points_;
};

}  // namespace csip
