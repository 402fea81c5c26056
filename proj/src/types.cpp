#include "csip/types.hpp"

#include <algorithm>
#include <cmath>

namespace csip {

double max_norm(std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

double max_distance(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

void require_dim(std::span<const double> v, std::size_t n, const char* what) {
    if (v.size() != n) {
        throw InputError(std::string(what) + ": expected dimension " + std::to_string(n) + ", got " +
                         std::to_string(v.size()));
    }
}

}  // namespace csip
