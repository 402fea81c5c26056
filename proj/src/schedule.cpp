#include "csip/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "csip/types.hpp"

namespace csip {

namespace {

constexpr std::size_t kSupHorizon = 10'000;

double default_aux(std::size_t k, int) { return 0.1 * std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(k, 2000))); }

}  // namespace

ToleranceSchedule::ToleranceSchedule(ObjFn obj, AuxFn aux, Regime regime, std::size_t k0)
    : obj_(std::move(obj)), aux_(std::move(aux)), regime_(regime), k0_(k0) {
    if (!obj_ || !aux_) throw ConfigError("schedule: missing tolerance function");
}

ToleranceSchedule ToleranceSchedule::geometric(double scale, double ratio) {
    if (!(scale >= 0.0) || !(ratio >= 0.0) || !(ratio < 1.0))
        throw ConfigError("schedule: geometric(q) needs scale >= 0 and 0 <= q < 1");
    return ToleranceSchedule(
        [scale, ratio](std::size_t k) { return scale * std::pow(ratio, static_cast<double>(k)); }, default_aux,
        Regime::Summable);
}

ToleranceSchedule ToleranceSchedule::eventually_zero(std::size_t k0, double scale) {
    if (!(scale >= 0.0)) throw ConfigError("schedule: eventually_zero needs scale >= 0");
    return ToleranceSchedule(
        [k0, scale](std::size_t k) { return k < k0 ? scale * std::ldexp(1.0, -static_cast<int>(k)) : 0.0; },
        default_aux, Regime::EventuallyZero, k0);
}

ToleranceSchedule ToleranceSchedule::constant(double obj, Regime regime) {
    return ToleranceSchedule([obj](std::size_t) { return obj; }, default_aux, regime, 0);
}

ToleranceSchedule ToleranceSchedule::parse(const std::string& spec, double scale) {
    static const std::regex geo(R"(\s*geometric\(\s*([0-9.eE+-]+)\s*\)\s*)");
    static const std::regex ez(R"(\s*eventually_zero\(\s*([0-9]+)\s*\)\s*)");
    std::smatch m;
    if (std::regex_match(spec, m, geo)) return geometric(scale, std::stod(m[1].str()));
    if (std::regex_match(spec, m, ez)) return eventually_zero(std::stoul(m[1].str()), scale);
    throw ConfigError("schedule: unknown preset '" + spec + "' (expected geometric(q) or eventually_zero(k0))");
}

double ToleranceSchedule::obj(std::size_t k) const {
    if (regime_ == Regime::EventuallyZero && k >= k0_) return 0.0;
    return obj_(k);
}

double ToleranceSchedule::aux(std::size_t k, int i) const { return std::max(aux_(k, i), kAuxFloor); }

ToleranceSchedule ToleranceSchedule::shifted(std::size_t shift) const {
    ObjFn base = obj_;
    const Regime regime = regime_;
    const std::size_t k0 = k0_;
    ObjFn obj = [base, shift, regime, k0](std::size_t k) {
        if (regime == Regime::EventuallyZero && shift + k >= k0) return 0.0;
        return base(shift + k);
    };
    const std::size_t new_k0 = k0_ > shift ? k0_ - shift : 0;
    return ToleranceSchedule(std::move(obj), aux_, regime_, new_k0);
}

double ToleranceSchedule::sup_obj() const {
    const std::size_t horizon = regime_ == Regime::EventuallyZero ? k0_ : kSupHorizon;
    double s = 0.0;
    for (std::size_t k = 0; k < horizon; ++k) s = std::max(s, obj(k));
    return s;
}

void ToleranceSchedule::validate() const {
    for (std::size_t k : {std::size_t{0}, std::size_t{1000}, std::size_t{1'000'000}}) {
        if (!(obj(k) >= 0.0) || !(aux_(k, 0) >= 0.0)) throw ConfigError("schedule: tolerances must be >= 0");
    }
    const double a3 = aux_(1000, 0);
    const double a6 = aux_(1'000'000, 0);
    if (!(a6 <= a3) || !(a6 <= 1e-6)) throw ConfigError("schedule: lower-level tolerances do not decay to 0");
    if (regime_ == Regime::Summable) {
        const double o3 = obj(1000);
        const double o6 = obj(1'000'000);
        if (!(o6 <= o3) || !(o6 <= 1e-6)) throw ConfigError("schedule: objective tolerances are not summable");
    }
}

}  // namespace csip
