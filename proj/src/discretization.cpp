#include "csip/discretization.hpp"

namespace csip {

Discretization::Discretization(std::vector<Vec> points, double dedup_tol) : dedup_tol_(dedup_tol) {
    if (dedup_tol_ < 0.0) throw InputError("discretization: dedup tolerance must be nonnegative");
    for (auto& y : points) add(std::move(y));
}

bool Discretization::contains(std::span<const double> y) const {
    for (const auto& p : points_) {
        if (p.size() == y.size() && max_distance(p, y) <= dedup_tol_) return true;
    }
    return false;
}

bool Discretization::add(Vec y) {
    if (!points_.empty() && y.size() != points_.front().size())
        throw InputError("discretization: point dimension mismatch");
    if (contains(y)) return false;
    points_.push_back(std::move(y));
    return true;
}

void Discretization::check_within(const BoxDomain& domain) const {
    for (const auto& y : points_) {
        if (!domain.contains(y)) throw InputError("discretization: point outside the index domain");
    }
}

Discretization Discretization::uniform_grid(const BoxDomain& domain, std::size_t per_axis) {
    if (per_axis == 0) throw InputError("uniform_grid: need at least one point per axis");
    const std::size_t q = domain.dim();
    Discretization out;
    for (std::size_t j = 0; j < q; ++j) {
        if (per_axis > 1 && domain.width(j) / static_cast<double>(per_axis - 1) <= out.dedup_tol_)
            throw InputError("uniform_grid: spacing below the dedup tolerance");
    }
    std::vector<std::size_t> idx(q, 0);
    while (true) {
        Vec y(q);
        for (std::size_t j = 0; j < q; ++j) {
            y[j] = per_axis == 1 ? 0.5 * (domain.lower(j) + domain.upper(j))
                                 : domain.lower(j) + domain.width(j) * static_cast<double>(idx[j]) /
                                                         static_cast<double>(per_axis - 1);
        }
        out.points_.push_back(std::move(y));
        std::size_t j = q;
        while (j-- > 0) {
            if (++idx[j] < per_axis) break;
            idx[j] = 0;
        }
        if (j == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

}  // namespace csip
