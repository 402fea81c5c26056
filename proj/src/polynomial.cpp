#include "csip/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace csip {

Polynomial::Polynomial(std::size_t num_vars, std::vector<Monomial> terms)
    : num_vars_(num_vars), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (t.exponents.size() != num_vars_)
            throw InputError("monomial exponent vector has wrong length");
        for (int e : t.exponents)
            if (e < 0) throw InputError("negative monomial exponent");
        if (!std::isfinite(t.coef)) throw InputError("non-finite polynomial coefficient");
    }
    canonicalize();
}

Polynomial Polynomial::constant(std::size_t num_vars, double c) {
    return Polynomial(num_vars, {Monomial{MultiIndex(num_vars, 0), c}});
}

void Polynomial::canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
    std::vector<Monomial> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().exponents == t.exponents) {
            merged.back().coef += t.coef;
        } else {
            merged.push_back(std::move(t));
        }
    }
    std::erase_if(merged, [](const Monomial& m) { return m.coef == 0.0; });
    terms_ = std::move(merged);
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& t : terms_) {
        int s = 0;
        for (int e : t.exponents) s += e;
        d = std::max(d, s);
    }
    return d;
}

int Polynomial::degree_in(std::size_t var) const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exponents[var]);
    return d;
}

double Polynomial::operator()(std::span<const double> y) const {
    require_dim(y, num_vars_, "polynomial argument");
    double s = 0.0;
    for (const auto& t : terms_) {
        double m = t.coef;
        for (std::size_t j = 0; j < num_vars_; ++j) {
            for (int e = 0; e < t.exponents[j]; ++e) m *= y[j];
        }
        s += m;
    }
    return s;
}

Polynomial Polynomial::derivative(const MultiIndex& alpha) const {
    if (alpha.size() != num_vars_) throw InputError("derivative multi-index has wrong length");
    std::vector<Monomial> out;
    for (const auto& t : terms_) {
        Monomial m{t.exponents, t.coef};
        bool vanishes = false;
        for (std::size_t j = 0; j < num_vars_ && !vanishes; ++j) {
            if (alpha[j] < 0) throw InputError("negative derivative order");
            if (alpha[j] > m.exponents[j]) {
                vanishes = true;
                break;
            }
            for (int k = 0; k < alpha[j]; ++k) m.coef *= static_cast<double>(m.exponents[j] - k);
            m.exponents[j] -= alpha[j];
        }
        if (!vanishes) out.push_back(std::move(m));
    }
    return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::partial(std::size_t var) const {
    MultiIndex alpha(num_vars_, 0);
    alpha.at(var) = 1;
    return derivative(alpha);
}

double Polynomial::abs_bound(const BoxDomain& box) const {
    if (box.dim() != num_vars_) throw InputError("box dimension does not match polynomial");
    double s = 0.0;
    for (const auto& t : terms_) {
        double m = std::abs(t.coef);
        for (std::size_t j = 0; j < num_vars_; ++j) m *= std::pow(box.abs_bound(j), t.exponents[j]);
        s += m;
    }
    return s;
}

Polynomial& Polynomial::add_scaled(const Polynomial& other, double scale) {
    if (other.num_vars_ != num_vars_) throw InputError("adding polynomials in different variables");
    if (scale == 0.0) return *this;
    for (const auto& t : other.terms_) terms_.push_back(Monomial{t.exponents, scale * t.coef});
    canonicalize();
    return *this;
}

DensePolynomial::DensePolynomial(const Polynomial& p) {
    const std::size_t q = p.num_vars();
    degrees_.resize(q);
    strides_.resize(q);
    std::size_t size = 1;
    for (std::size_t j = q; j-- > 0;) {
        degrees_[j] = p.degree_in(j);
        strides_[j] = size;
        size *= static_cast<std::size_t>(degrees_[j] + 1);
    }
    coefs_.assign(size, 0.0);
    for (const auto& t : p.terms()) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < q; ++j) idx += strides_[j] * static_cast<std::size_t>(t.exponents[j]);
        coefs_[idx] += t.coef;
    }
}

double DensePolynomial::operator()(std::span<const double> y) const {
    double s = 0.0;
    const std::size_t q = degrees_.size();
    std::vector<int> e(q, 0);
    for (std::size_t idx = 0; idx < coefs_.size(); ++idx) {
        std::size_t rem = idx;
        double m = coefs_[idx];
        for (std::size_t j = 0; j < q; ++j) {
            const int ej = static_cast<int>(rem / strides_[j]);
            rem %= strides_[j];
            for (int k = 0; k < ej; ++k) m *= y[j];
        }
        s += m;
    }
    return s;
}

double DensePolynomial::centered_upper_bound(std::span<const double> center,
                                             std::span<const double> radius) const {
    const std::size_t q = degrees_.size();
    std::vector<double> d = coefs_;
    // Taylor shift y = center + t, one axis at a time.
    for (std::size_t j = 0; j < q; ++j) {
        const int n = degrees_[j];
        if (n == 0 || center[j] == 0.0) continue;
        const std::size_t stride = strides_[j];
        const std::size_t block = stride * static_cast<std::size_t>(n + 1);
        for (std::size_t base = 0; base < d.size(); base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                double* a = d.data() + base + off;
                for (int i = 0; i < n; ++i) {
                    for (int k = n - 1; k >= i; --k) a[k * stride] += center[j] * a[(k + 1) * stride];
                }
            }
        }
    }
    double bound = d[0];
    for (std::size_t idx = 1; idx < d.size(); ++idx) {
        if (d[idx] == 0.0) continue;
        std::size_t rem = idx;
        double m = std::abs(d[idx]);
        for (std::size_t j = 0; j < q; ++j) {
            const int ej = static_cast<int>(rem / strides_[j]);
            rem %= strides_[j];
            for (int k = 0; k < ej; ++k) m *= radius[j];
        }
        bound += m;
    }
    return bound;
}

}  // namespace csip
