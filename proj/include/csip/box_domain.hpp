#pragma once

#include "csip/types.hpp"

namespace csip {

/// Axis-aligned box in R^n, metrized by the max-norm.
class BoxDomain {
public:
    BoxDomain() = default;
    BoxDomain(Vec lower, Vec upper);

    static BoxDomain cube(std::size_t dim, double lo, double hi);

    std::size_t dim() const { return lower_.size(); }
    const Vec& lower() const { return lower_; }
    const Vec& upper() const { return upper_; }
    double lower(std::size_t j) const { return lower_[j]; }
    double upper(std::size_t j) const { return upper_[j]; }
    double width(std::size_t j) const { return upper_[j] - lower_[j]; }

    /// Max-norm diameter.
    double diameter() const;
    Vec center() const;
    bool contains(std::span<const double> x, double tol = 0.0) const;
    Vec clamp(std::span<const double> x) const;
    /// Largest absolute coordinate value attained on the box, per axis.
    double abs_bound(std::size_t j) const;

private:
    Vec lower_;
    Vec upper_;
};

}  // namespace csip
