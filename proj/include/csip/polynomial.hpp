#pragma once

#include <vector>

#include "csip/box_domain.hpp"
#include "csip/types.hpp"

namespace csip {

using MultiIndex = std::vector<int>;

struct Monomial {
    MultiIndex exponents;
    double coef = 0.0;
};

/// Sparse multivariate polynomial in the monomial basis. Terms are kept
/// merged and sorted by exponent vector.
class Polynomial {
public:
    explicit Polynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}
    Polynomial(std::size_t num_vars, std::vector<Monomial> terms);

    static Polynomial constant(std::size_t num_vars, double c);

    std::size_t num_vars() const { return num_vars_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    int degree_in(std::size_t var) const;

    double operator()(std::span<const double> y) const;

    /// d^alpha / dy^alpha.
    Polynomial derivative(const MultiIndex& alpha) const;
    Polynomial partial(std::size_t var) const;

    /// Upper bound of |p| over the box from coefficient magnitudes.
    double abs_bound(const BoxDomain& box) const;

    Polynomial& add_scaled(const Polynomial& other, double scale);
    Polynomial& operator+=(const Polynomial& other) { return add_scaled(other, 1.0); }

private:
    void canonicalize();

    std::size_t num_vars_;
    std::vector<Monomial> terms_;
};

/// Taylor coefficients of a polynomial stored densely over the exponent
/// grid [0, deg_0] x ... x [0, deg_{q-1}]; supports exact re-centering and
/// the centered-form enclosure of its range over a box.
class DensePolynomial {
public:
    explicit DensePolynomial(const Polynomial& p);

    /// Upper bound of p over the box [center - radius, center + radius]:
    /// p(center) + sum_{beta != 0} |d_beta| radius^beta with d the Taylor
    /// coefficients at center. Exact when p is constant.
    double centered_upper_bound(std::span<const double> center, std::span<const double> radius) const;
    double operator()(std::span<const double> y) const;

private:
    std::size_t index_stride(std::size_t var) const { return strides_[var]; }

    std::vector<int> degrees_;
    std::vector<std::size_t> strides_;
    std::vector<double> coefs_;
};

}  // namespace csip
