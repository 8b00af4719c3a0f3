#include "apch/volmodel.hpp"

#include "apch/errors.hpp"
#include "apch/rng.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace apch {

std::string family_name(Family f) {
    switch (f) {
        case Family::Constant: return "constant";
        case Family::Arch1: return "arch1";
        case Family::Garch11: return "garch11";
    }
    return "unknown";
}

Family family_from_name(const std::string& name) {
    if (name == "constant") return Family::Constant;
    if (name == "arch1") return Family::Arch1;
    if (name == "garch11") return Family::Garch11;
    throw std::invalid_argument("unknown family: " + name);
}

ModelSpec ModelSpec::constant() { return make(Family::Constant); }
ModelSpec ModelSpec::arch1() { return make(Family::Arch1); }
ModelSpec ModelSpec::garch11() { return make(Family::Garch11); }

ModelSpec ModelSpec::make(Family f) {
    ModelSpec s;
    s.family = f;
    return s;
}

int ModelSpec::n_params() const {
    switch (family) {
        case Family::Constant: return 1;
        case Family::Arch1: return 2;
        case Family::Garch11: return 3;
    }
    return 0;
}

std::size_t ModelSpec::min_obs() const {
    switch (family) {
        case Family::Constant: return 1;
        case Family::Arch1: return 5;
        case Family::Garch11: return 10;
    }
    return 1;
}

void ModelSpec::validate() const {
    if (!(omega_min > 0.0)) throw std::invalid_argument("omega_min must be > 0");
    if (!(omega_min <= omega_max) || !std::isfinite(omega_max))
        throw std::invalid_argument("omega bounds must be finite with omega_min <= omega_max");
    if (!(alpha_max >= 0.0) || !std::isfinite(alpha_max))
        throw std::invalid_argument("alpha_max must be finite and >= 0");
    if (!(beta_max >= 0.0) || !std::isfinite(beta_max))
        throw std::invalid_argument("beta_max must be finite and >= 0");
    if (!(stationarity_margin > 0.0) || !(stationarity_margin < 1.0))
        throw std::invalid_argument("stationarity_margin must lie in (0, 1)");
}

std::string to_string(const ParamVector& p) {
    std::ostringstream os;
    os << "(" << p.omega << ", " << p.alpha << ", " << p.beta << ")";
    return os.str();
}

bool in_bounds(const ModelSpec& spec, const ParamVector& theta) {
    if (!std::isfinite(theta.omega) || !std::isfinite(theta.alpha) || !std::isfinite(theta.beta))
        return false;
    if (theta.omega < spec.omega_min || theta.omega > spec.omega_max) return false;
    if (spec.alpha_active()) {
        if (theta.alpha < 0.0 || theta.alpha > spec.alpha_max) return false;
    } else if (theta.alpha != 0.0) {
        return false;
    }
    if (spec.beta_active()) {
        if (theta.beta < 0.0 || theta.beta > spec.beta_max) return false;
    } else if (theta.beta != 0.0) {
        return false;
    }
    if (theta.alpha + theta.beta > 1.0 - spec.stationarity_margin) return false;
    return true;
}

void require_in_bounds(const ModelSpec& spec, const ParamVector& theta) {
    if (!in_bounds(spec, theta))
        throw std::domain_error("parameter " + to_string(theta) + " outside bounds for family " +
                                family_name(spec.family));
}

void validate_returns(const ReturnSeries& y) {
    if (y.values.empty()) throw std::invalid_argument("return series is empty");
    for (std::size_t i = 0; i < y.values.size(); ++i) {
        if (!std::isfinite(y.values[i]))
            throw std::invalid_argument("non-finite return at index " + std::to_string(i));
    }
}

double initial_variance(const ModelSpec& spec, const ParamVector& theta,
                        const double* window, std::size_t len, InitRule init) {
    if (spec.family == Family::Constant) return theta.omega;
    switch (init) {
        case InitRule::Omega:
            return theta.omega;
        case InitRule::Unconditional: {
            const double persist = theta.alpha + theta.beta;
            return persist < 1.0 ? theta.omega / (1.0 - persist) : theta.omega;
        }
        case InitRule::SampleVariance: {
            double s = 0.0;
            for (std::size_t i = 0; i < len; ++i) s += window[i] * window[i];
            const double v = len > 0 ? s / static_cast<double>(len) : theta.omega;
            return v < spec.omega_min ? spec.omega_min : v;
        }
    }
    return theta.omega;
}

namespace {

// Shared recursion core: writes sigma2 for the window starting at `window`.
void run_recursion(const ModelSpec& spec, const ParamVector& theta, const double* window,
                   std::size_t len, InitRule init, double* out) {
    out[0] = initial_variance(spec, theta, window, len, init);
    for (std::size_t t = 1; t < len; ++t) {
        const double y_prev = window[t - 1];
        out[t] = theta.omega + theta.alpha * y_prev * y_prev + theta.beta * out[t - 1];
        if (!std::isfinite(out[t]))
            throw NumericError(t, "non-finite variance at window offset " + std::to_string(t));
    }
}

} // namespace

VolatilityPath volatility_path(const ModelSpec& spec, const ParamVector& theta,
                               const ReturnSeries& y, InitRule init) {
    spec.validate();
    require_in_bounds(spec, theta);
    validate_returns(y);
    VolatilityPath path;
    path.sigma2.resize(y.size());
    run_recursion(spec, theta, y.values.data(), y.size(), init, path.sigma2.data());
    return path;
}

SimulatedPath simulate_path(const ModelSpec& spec, const ParamVector& theta, std::size_t n,
                            std::uint64_t seed, InitRule init) {
    spec.validate();
    require_in_bounds(spec, theta);
    if (n < 1) throw std::invalid_argument("simulate_path: n must be >= 1");

    SimulatedPath sim;
    sim.y.values.resize(n);
    sim.sigma2.sigma2.resize(n);
    Rng rng(seed);
    double s2 = initial_variance(spec, theta, nullptr, 0, init);
    if (spec.family == Family::Constant) s2 = theta.omega;
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) {
            const double y_prev = sim.y.values[t - 1];
            s2 = theta.omega + theta.alpha * y_prev * y_prev + theta.beta * s2;
        }
        sim.sigma2.sigma2[t] = s2;
        sim.y.values[t] = std::sqrt(s2) * rng.normal();
    }
    return sim;
}

} // namespace apch
