#include "csip/box_domain.hpp"

#include <algorithm>
#include <cmath>

namespace csip {

BoxDomain::BoxDomain(Vec lower, Vec upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size()) throw InputError("box bounds have different lengths");
    if (lower_.empty()) throw InputError("box must have dimension >= 1");
    for (std::size_t j = 0; j < lower_.size(); ++j) {
        if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j]))
            throw InputError("box bounds must be finite");
        if (lower_[j] > upper_[j])
            throw InputError("box lower bound exceeds upper bound on axis " + std::to_string(j));
    }
}

BoxDomain BoxDomain::cube(std::size_t dim, double lo, double hi) {
    return BoxDomain(Vec(dim, lo), Vec(dim, hi));
}

double BoxDomain::diameter() const {
    double d = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) d = std::max(d, width(j));
    return d;
}

Vec BoxDomain::center() const {
    Vec c(dim());
    for (std::size_t j = 0; j < dim(); ++j) c[j] = 0.5 * (lower_[j] + upper_[j]);
    return c;
}

bool BoxDomain::contains(std::span<const double> x, double tol) const {
    if (x.size() != dim()) return false;
    for (std::size_t j = 0; j < dim(); ++j) {
        if (x[j] < lower_[j] - tol || x[j] > upper_[j] + tol) return false;
    }
    return true;
}

Vec BoxDomain::clamp(std::span<const double> x) const {
    Vec out(x.begin(), x.end());
    for (std::size_t j = 0; j < dim(); ++j) out[j] = std::clamp(out[j], lower_[j], upper_[j]);
    return out;
}

double BoxDomain::abs_bound(std::size_t j) const {
    return std::max(std::abs(lower_[j]), std::abs(upper_[j]));
}

}  // namespace csip
