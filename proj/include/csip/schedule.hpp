#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace csip {

enum class Regime { EventuallyZero, Summable };

/// Smallest lower-level tolerance ever requested; zero requests are raised to it.
inline constexpr double kAuxFloor = 1e-12;

/// Approximation tolerances of the finite subproblems: obj(k) for the
/// discretized problems, aux(k, i) for the lower-level problems.
class ToleranceSchedule {
public:
    using ObjFn = std::function<double(std::size_t)>;
    using AuxFn = std::function<double(std::size_t, int)>;

    ToleranceSchedule(ObjFn obj, AuxFn aux, Regime regime, std::size_t k0 = 0);

    /// obj(k) = scale * ratio^k (summable), aux(k, i) = 0.1 * 2^-k.
    static ToleranceSchedule geometric(double scale, double ratio);
    /// obj(k) = scale * 2^-k for k < k0 and 0 afterwards, aux(k, i) = 0.1 * 2^-k.
    static ToleranceSchedule eventually_zero(std::size_t k0, double scale = 0.1);
    /// Constant objective tolerance (summable only if zero; used for tests of rejection paths).
    static ToleranceSchedule constant(double obj, Regime regime = Regime::Summable);
    /// Parses "geometric(q)" or "eventually_zero(k0)"; scale sets obj(0).
    static ToleranceSchedule parse(const std::string& spec, double scale);

    double obj(std::size_t k) const;
    /// Requested lower-level tolerance raised to kAuxFloor.
    double aux(std::size_t k, int i) const;
    Regime regime() const { return regime_; }
    std::size_t k0() const { return k0_; }

    /// Same schedule with obj(k) replaced by obj(shift + k).
    ToleranceSchedule shifted(std::size_t shift) const;

    /// sup_k obj(k): exact over [0, k0) for EventuallyZero, over a finite
    /// horizon for Summable.
    double sup_obj() const;

    /// Spot checks of the declared decay (aux -> 0; obj eventually zero or summable).
    void validate() const;

private:
    ObjFn obj_;
    AuxFn aux_;
    Regime regime_;
    std::size_t k0_;
};

}  // namespace csip
